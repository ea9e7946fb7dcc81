//! Exact plane geometry over arbitrary-precision rationals.
//!
//! Every verdict in the crate (orientation, containment, segment crossing) is
//! computed here without rounding. Floating point only appears in the search
//! module, and its output is rationalized before it reaches these predicates.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::ops::Not;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `2^-k` as an exact rational.
pub fn pow2_neg(k: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << k)
}

/// Parses `"n/d"`, integers and plain decimals (`"-1.25"`, `"3e-2"`) exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Parse(format!("invalid rational `{text}`"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let joined = format!("{whole}{frac}");
    let mut value = Rational::from_integer(joined.parse::<BigInt>().map_err(|_| bad())?);
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10);
    if scale >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if negative { -value } else { value })
}

/// Canonical `"num/den"` text of a rational.
pub fn format_rational(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

pub fn to_f64(value: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    value.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational equal to a finite `f64`.
pub fn from_f64(value: f64) -> Option<Rational> {
    Rational::from_float(value)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(int(x), int(y))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.x), to_f64(&self.y))
    }

    /// `self + t * (other - self)`
    pub fn lerp(&self, other: &Point, t: &Rational) -> Point {
        Point::new(
            &self.x + t * (&other.x - &self.x),
            &self.y + t * (&other.y - &self.y),
        )
    }

    /// `self + t * (self - from)`, the point beyond `self` on the ray from `from`.
    pub fn beyond(&self, from: &Point, t: &Rational) -> Point {
        Point::new(
            &self.x + t * (&self.x - &from.x),
            &self.y + t * (&self.y - &from.y),
        )
    }

    pub fn centroid(points: &[&Point]) -> Point {
        let n = int(points.len() as i64);
        let (mut x, mut y) = (Rational::zero(), Rational::zero());
        for p in points {
            x += &p.x;
            y += &p.y;
        }
        Point::new(x / &n, y / n)
    }

    pub fn linf_distance(&self, other: &Point) -> Rational {
        let dx = (&self.x - &other.x).abs();
        let dy = (&self.y - &other.y).abs();
        dx.max(dy)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Order type of a point triple: left turn, collinear, right turn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    Left,
    Collinear,
    Right,
}

impl Orientation {
    pub fn letter(self) -> char {
        match self {
            Orientation::Left => 'L',
            Orientation::Collinear => 'C',
            Orientation::Right => 'R',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'L' | 'l' => Some(Orientation::Left),
            'C' | 'c' => Some(Orientation::Collinear),
            'R' | 'r' => Some(Orientation::Right),
            _ => None,
        }
    }

    pub fn from_sign(value: &Rational) -> Self {
        if value.is_positive() {
            Orientation::Left
        } else if value.is_negative() {
            Orientation::Right
        } else {
            Orientation::Collinear
        }
    }

    /// Orientation after permuting the triple; odd permutations negate.
    pub fn permuted(self, odd: bool) -> Self {
        if odd {
            !self
        } else {
            self
        }
    }
}

impl Not for Orientation {
    type Output = Orientation;

    fn not(self) -> Orientation {
        match self {
            Orientation::Left => Orientation::Right,
            Orientation::Right => Orientation::Left,
            Orientation::Collinear => Orientation::Collinear,
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Twice the signed area of `(u, v, w)`: `(v - u) x (w - u)`.
pub fn cross(u: &Point, v: &Point, w: &Point) -> Rational {
    (&v.x - &u.x) * (&w.y - &u.y) - (&v.y - &u.y) * (&w.x - &u.x)
}

pub fn orient(u: &Point, v: &Point, w: &Point) -> Orientation {
    Orientation::from_sign(&cross(u, v, w))
}

/// Orientation of the f64 images of three exact points, or `None` when
/// rounding (of the inputs or of the determinant) could flip the sign.
pub fn orient_approx(u: (f64, f64), v: (f64, f64), w: (f64, f64)) -> Option<Orientation> {
    let m = [u.0, u.1, v.0, v.1, w.0, w.1].iter().fold(0f64, |acc, c| acc.max(c.abs()));
    if !(1e-100..1e100).contains(&m) {
        return None;
    }
    let det = (v.0 - u.0) * (w.1 - u.1) - (v.1 - u.1) * (w.0 - u.0);
    let bound = 64.0 * f64::EPSILON * m * m;
    if det > bound {
        Some(Orientation::Left)
    } else if det < -bound {
        Some(Orientation::Right)
    } else {
        None
    }
}

/// [`orient`] with a floating-point fast path; `h*` are the f64 images.
pub fn orient_hinted(
    u: &Point,
    v: &Point,
    w: &Point,
    hu: (f64, f64),
    hv: (f64, f64),
    hw: (f64, f64),
) -> Orientation {
    orient_approx(hu, hv, hw).unwrap_or_else(|| orient(u, v, w))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    Interior,
    Boundary,
    Exterior,
}

pub fn point_in_triangle(p: &Point, a: &Point, b: &Point, c: &Point) -> Result<Region> {
    if orient(a, b, c) == Orientation::Collinear {
        return Err(Error::DegenerateTriangle);
    }
    let o1 = orient(a, b, p);
    let o2 = orient(b, c, p);
    let o3 = orient(c, a, p);
    if o1 == o2 && o2 == o3 {
        // all three equal and the triangle is non-degenerate, so not Collinear
        return Ok(Region::Interior);
    }
    let on_edge = (o1 == Orientation::Collinear && in_closed_box(p, a, b))
        || (o2 == Orientation::Collinear && in_closed_box(p, b, c))
        || (o3 == Orientation::Collinear && in_closed_box(p, c, a));
    Ok(if on_edge { Region::Boundary } else { Region::Exterior })
}

/// Is `p` inside the closed bounding box of segment `ab`? For `p` on the line
/// through `a` and `b` this decides membership in the closed segment.
fn in_closed_box(p: &Point, a: &Point, b: &Point) -> bool {
    let (xlo, xhi) = if a.x <= b.x { (&a.x, &b.x) } else { (&b.x, &a.x) };
    let (ylo, yhi) = if a.y <= b.y { (&a.y, &b.y) } else { (&b.y, &a.y) };
    *xlo <= p.x && p.x <= *xhi && *ylo <= p.y && p.y <= *yhi
}

/// Does `p` lie in the relative interior of the segment `ab`?
pub fn on_open_segment(p: &Point, a: &Point, b: &Point) -> bool {
    p != a && p != b && orient(a, b, p) == Orientation::Collinear && in_closed_box(p, a, b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CrossKind {
    Disjoint,
    SharedEndpointOnly,
    ImproperOverlap,
    ProperCrossing,
    EndpointInInterior,
}

impl CrossKind {
    /// Whether two edges of one straight-line drawing may meet like this.
    pub fn is_violation(self) -> bool {
        !matches!(self, CrossKind::Disjoint | CrossKind::SharedEndpointOnly)
    }
}

/// Classifies the intersection of the closed segments `p1q1` and `p2q2`.
pub fn segments_cross(p1: &Point, q1: &Point, p2: &Point, q2: &Point) -> Result<CrossKind> {
    if p1 == q1 || p2 == q2 {
        return Err(Error::ZeroLengthSegment);
    }
    if !boxes_overlap(p1, q1, p2, q2) {
        return Ok(CrossKind::Disjoint);
    }
    let o1 = orient(p1, q1, p2);
    let o2 = orient(p1, q1, q2);
    if o1 == Orientation::Collinear && o2 == Orientation::Collinear {
        return Ok(collinear_case(p1, q1, p2, q2));
    }
    let o3 = orient(p2, q2, p1);
    let o4 = orient(p2, q2, q1);
    let strict = [o1, o2, o3, o4].iter().all(|o| *o != Orientation::Collinear);
    if strict {
        return Ok(if o1 != o2 && o3 != o4 {
            CrossKind::ProperCrossing
        } else {
            CrossKind::Disjoint
        });
    }
    // Not all collinear, so the intersection is at most one point, and if it
    // exists it is an endpoint of one of the segments.
    let touching = [
        (p2, o1 == Orientation::Collinear && in_closed_box(p2, p1, q1)),
        (q2, o2 == Orientation::Collinear && in_closed_box(q2, p1, q1)),
        (p1, o3 == Orientation::Collinear && in_closed_box(p1, p2, q2)),
        (q1, o4 == Orientation::Collinear && in_closed_box(q1, p2, q2)),
    ];
    match touching.iter().find(|(_, hit)| *hit) {
        None => Ok(CrossKind::Disjoint),
        Some((point, _)) => {
            let end_of_first = *point == p1 || *point == q1;
            let end_of_second = *point == p2 || *point == q2;
            Ok(if end_of_first && end_of_second {
                CrossKind::SharedEndpointOnly
            } else {
                CrossKind::EndpointInInterior
            })
        }
    }
}

fn boxes_overlap(p1: &Point, q1: &Point, p2: &Point, q2: &Point) -> bool {
    let min = |a: &Rational, b: &Rational| if a <= b { a.clone() } else { b.clone() };
    let max = |a: &Rational, b: &Rational| if a >= b { a.clone() } else { b.clone() };
    max(&p1.x, &q1.x) >= min(&p2.x, &q2.x)
        && max(&p2.x, &q2.x) >= min(&p1.x, &q1.x)
        && max(&p1.y, &q1.y) >= min(&p2.y, &q2.y)
        && max(&p2.y, &q2.y) >= min(&p1.y, &q1.y)
}

fn collinear_case(p1: &Point, q1: &Point, p2: &Point, q2: &Point) -> CrossKind {
    // project onto an axis along which the common line is not degenerate
    let key = |p: &Point| if p1.x != q1.x { p.x.clone() } else { p.y.clone() };
    let (a0, a1) = sorted(key(p1), key(q1));
    let (b0, b1) = sorted(key(p2), key(q2));
    let lo = if a0 >= b0 { a0 } else { b0 };
    let hi = if a1 <= b1 { a1 } else { b1 };
    if lo < hi {
        CrossKind::ImproperOverlap
    } else if lo == hi {
        // touching at one point, which is an endpoint of both segments
        CrossKind::SharedEndpointOnly
    } else {
        CrossKind::Disjoint
    }
}

fn sorted(a: Rational, b: Rational) -> (Rational, Rational) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// `x -> A x + b` with an invertible rational matrix `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    pub matrix: [[Rational; 2]; 2],
    pub translation: [Rational; 2],
}

impl AffineMap {
    pub fn identity() -> Self {
        AffineMap {
            matrix: [[int(1), int(0)], [int(0), int(1)]],
            translation: [int(0), int(0)],
        }
    }

    /// Uniform scaling by `factor` followed by translation by `offset`.
    pub fn scale_translate(factor: Rational, offset: (Rational, Rational)) -> Self {
        AffineMap {
            matrix: [[factor.clone(), int(0)], [int(0), factor]],
            translation: [offset.0, offset.1],
        }
    }

    /// Reflection across the y-axis.
    pub fn mirror_x() -> Self {
        AffineMap {
            matrix: [[int(-1), int(0)], [int(0), int(1)]],
            translation: [int(0), int(0)],
        }
    }

    /// Rotation with rational `cos`/`sin` from the tangent half-angle `q`.
    pub fn rational_rotation(q: &Rational) -> Self {
        let denom = Rational::one() + q * q;
        let cos = (Rational::one() - q * q) / &denom;
        let sin = (int(2) * q) / &denom;
        AffineMap {
            matrix: [[cos.clone(), -sin.clone()], [sin, cos]],
            translation: [int(0), int(0)],
        }
    }

    pub fn translation(dx: Rational, dy: Rational) -> Self {
        AffineMap {
            matrix: [[int(1), int(0)], [int(0), int(1)]],
            translation: [dx, dy],
        }
    }

    pub fn det(&self) -> Rational {
        let m = &self.matrix;
        &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
    }

    pub fn apply(&self, p: &Point) -> Point {
        let m = &self.matrix;
        Point::new(
            &m[0][0] * &p.x + &m[0][1] * &p.y + &self.translation[0],
            &m[1][0] * &p.x + &m[1][1] * &p.y + &self.translation[1],
        )
    }

    /// `self ∘ inner`
    pub fn compose(&self, inner: &AffineMap) -> AffineMap {
        let a = &self.matrix;
        let b = &inner.matrix;
        let matrix = [
            [
                &a[0][0] * &b[0][0] + &a[0][1] * &b[1][0],
                &a[0][0] * &b[0][1] + &a[0][1] * &b[1][1],
            ],
            [
                &a[1][0] * &b[0][0] + &a[1][1] * &b[1][0],
                &a[1][0] * &b[0][1] + &a[1][1] * &b[1][1],
            ],
        ];
        let t = self.apply(&Point::new(
            inner.translation[0].clone(),
            inner.translation[1].clone(),
        ));
        AffineMap { matrix, translation: [t.x, t.y] }
    }

    pub fn inverse(&self) -> AffineMap {
        let det = self.det();
        let m = &self.matrix;
        let matrix = [
            [&m[1][1] / &det, -&m[0][1] / &det],
            [-&m[1][0] / &det, &m[0][0] / &det],
        ];
        let tx = -(&matrix[0][0] * &self.translation[0] + &matrix[0][1] * &self.translation[1]);
        let ty = -(&matrix[1][0] * &self.translation[0] + &matrix[1][1] * &self.translation[1]);
        AffineMap { matrix, translation: [tx, ty] }
    }
}

/// The unique affine map sending `src[k]` to `dst[k]`.
pub fn affine_map_three(src: [&Point; 3], dst: [&Point; 3]) -> Result<AffineMap> {
    // Map the frame (src0; src1-src0, src2-src0) onto (dst0; dst1-dst0, dst2-dst0).
    let frame = |p: [&Point; 3]| -> Result<AffineMap> {
        let e1 = (&p[1].x - &p[0].x, &p[1].y - &p[0].y);
        let e2 = (&p[2].x - &p[0].x, &p[2].y - &p[0].y);
        let map = AffineMap {
            matrix: [[e1.0, e2.0], [e1.1, e2.1]],
            translation: [p[0].x.clone(), p[0].y.clone()],
        };
        if map.det().is_zero() {
            Err(Error::CollinearTriple)
        } else {
            Ok(map)
        }
    };
    let from = frame(src)?;
    let to = frame(dst)?;
    Ok(to.compose(&from.inverse()))
}

/// Finite map from vertex names to exact points.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Embedding {
    points: BTreeMap<String, Point>,
}

impl Embedding {
    pub fn new() -> Self {
        Embedding::default()
    }

    pub fn insert(&mut self, name: impl Into<String>, point: Point) {
        self.points.insert(name.into(), point);
    }

    pub fn get(&self, name: &str) -> Result<&Point> {
        self.points
            .get(name)
            .ok_or_else(|| Error::MissingVertex(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.points.contains_key(name)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Point)> {
        self.points.iter()
    }

    pub fn names(&self) -> impl Iterator<Item = &String> {
        self.points.keys()
    }

    pub fn map(&self, f: &AffineMap) -> Embedding {
        Embedding {
            points: self
                .points
                .iter()
                .map(|(k, p)| (k.clone(), f.apply(p)))
                .collect(),
        }
    }

    /// Sub-embedding on the given names; every name must be present.
    pub fn restrict<'a>(&self, names: impl IntoIterator<Item = &'a String>) -> Result<Embedding> {
        let mut out = Embedding::new();
        for name in names {
            out.insert(name.clone(), self.get(name)?.clone());
        }
        Ok(out)
    }

    /// Renames vertices through `rename`; names it maps to `None` are kept.
    pub fn relabel(&self, rename: impl Fn(&str) -> Option<String>) -> Embedding {
        Embedding {
            points: self
                .points
                .iter()
                .map(|(k, p)| (rename(k).unwrap_or_else(|| k.clone()), p.clone()))
                .collect(),
        }
    }

    /// Largest ℓ∞ displacement between common vertices.
    pub fn linf_distance(&self, other: &Embedding) -> Rational {
        self.points
            .iter()
            .filter_map(|(k, p)| other.points.get(k).map(|q| p.linf_distance(q)))
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Total bit length of all numerators and denominators.
    pub fn bit_size(&self) -> u64 {
        self.points
            .values()
            .flat_map(|p| [&p.x, &p.y])
            .map(|r| r.numer().bits() + r.denom().bits())
            .sum()
    }
}

impl FromIterator<(String, Point)> for Embedding {
    fn from_iter<I: IntoIterator<Item = (String, Point)>>(iter: I) -> Self {
        Embedding { points: iter.into_iter().collect() }
    }
}

/// No two points coincide.
pub fn has_distinct_points(emb: &Embedding) -> bool {
    let mut seen = HashSet::with_capacity(emb.len());
    emb.points.values().all(|p| seen.insert(p))
}

/// No two points coincide and no three are collinear.
pub fn is_general_position(emb: &Embedding) -> bool {
    if !has_distinct_points(emb) {
        return false;
    }
    let pts: Vec<&Point> = emb.points.values().collect();
    // Three points are collinear iff two of them leave a common apex with
    // the same slope.
    pts.par_iter().enumerate().all(|(i, a)| {
        let mut slopes: HashSet<Option<Rational>> = HashSet::with_capacity(pts.len());
        pts.iter().enumerate().filter(|(j, _)| *j != i).all(|(_, b)| {
            let dx = &b.x - &a.x;
            let slope = if dx.is_zero() { None } else { Some((&b.y - &a.y) / dx) };
            slopes.insert(slope)
        })
    })
}

/// What the perturbed output must satisfy besides the caller's predicate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Genericity {
    /// pairwise distinct, no three collinear
    GeneralPosition,
    /// pairwise distinct only; the caller's predicate governs collinearity
    DistinctPoints,
}

#[derive(Clone, Debug)]
pub struct Perturbed {
    pub embedding: Embedding,
    /// `None` when the input was returned unchanged.
    pub halvings: Option<u32>,
    pub epsilon: Rational,
}

pub const MAX_HALVINGS: u32 = 64;

/// Deterministic perturbation into general position.
///
/// Point `j` (in name order, `n` points) moves by `ε·(j+1)/n²·(1, j+1)`, so
/// every displacement stays within `ε` in ℓ∞ and the displacement vectors lie
/// on a parabola. That makes every triple's orientation determinant a
/// non-zero polynomial in `ε`, so halving `ε` eventually escapes all
/// collinearities while preserving all strict orientations.
pub fn perturb_generic<F>(emb: &Embedding, must_hold: F, eps0: &Rational) -> Result<Perturbed>
where
    F: Fn(&Embedding) -> bool,
{
    perturb_with(emb, must_hold, eps0, Genericity::GeneralPosition)
}

pub fn perturb_with<F>(
    emb: &Embedding,
    must_hold: F,
    eps0: &Rational,
    genericity: Genericity,
) -> Result<Perturbed>
where
    F: Fn(&Embedding) -> bool,
{
    let generic = |e: &Embedding| match genericity {
        Genericity::GeneralPosition => is_general_position(e),
        Genericity::DistinctPoints => has_distinct_points(e),
    };
    if generic(emb) && must_hold(emb) {
        return Ok(Perturbed {
            embedding: emb.clone(),
            halvings: None,
            epsilon: Rational::zero(),
        });
    }
    let strict = strict_orientations(emb);
    let n = emb.len() as i64;
    let unit = rat(1, n.max(1) * n.max(1));
    for k in 0..=MAX_HALVINGS {
        let eps = eps0 * pow2_neg(k);
        let candidate = displace(emb, &(&eps * &unit));
        if generic(&candidate) && preserves(&candidate, &strict) && must_hold(&candidate) {
            return Ok(Perturbed { embedding: candidate, halvings: Some(k), epsilon: eps });
        }
    }
    Err(Error::PerturbationFailed(MAX_HALVINGS))
}

fn displace(emb: &Embedding, step: &Rational) -> Embedding {
    emb.points
        .iter()
        .enumerate()
        .map(|(j, (name, p))| {
            let s = step * int(j as i64 + 1);
            let moved = Point::new(&p.x + &s, &p.y + &s * int(j as i64 + 1));
            (name.clone(), moved)
        })
        .collect()
}

/// Indices and orientation of every non-collinear triple `i < j < k`.
fn strict_orientations(emb: &Embedding) -> Vec<(usize, usize, usize, Orientation)> {
    let pts: Vec<&Point> = emb.points.values().collect();
    let approx: Vec<(f64, f64)> = pts.iter().map(|p| p.to_f64()).collect();
    let n = pts.len();
    (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let (pts, approx) = (&pts, &approx);
            (i + 1..n).flat_map(move |j| {
                (j + 1..n).filter_map(move |k| {
                    let o = orient_hinted(pts[i], pts[j], pts[k], approx[i], approx[j], approx[k]);
                    (o != Orientation::Collinear).then_some((i, j, k, o))
                })
            })
        })
        .collect()
}

fn preserves(emb: &Embedding, strict: &[(usize, usize, usize, Orientation)]) -> bool {
    let pts: Vec<&Point> = emb.points.values().collect();
    let approx: Vec<(f64, f64)> = pts.iter().map(|p| p.to_f64()).collect();
    strict
        .par_iter()
        .all(|&(i, j, k, o)| orient_hinted(pts[i], pts[j], pts[k], approx[i], approx[j], approx[k]) == o)
}
