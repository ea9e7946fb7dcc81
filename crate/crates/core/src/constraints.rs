//! Partial order types.
//!
//! A [`ConstraintSet`] prescribes the orientation of some vertex triples. It is
//! stored canonically: one entry per unordered triple, keyed by the triple
//! sorted in universe order, with the value transported through the
//! alternating rule (3-cycles preserve, transpositions negate).

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::{int, orient, Embedding, Orientation, Point, Rational};

/// A prescription as written by a user: ordered names plus orientation.
pub type RawConstraint = ([String; 3], Orientation);

/// Unvalidated input to [`canonicalize`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawConstraints {
    pub universe: Vec<String>,
    pub entries: Vec<RawConstraint>,
}

/// Two prescriptions for the same unordered triple that disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub first: RawConstraint,
    pub second: RawConstraint,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |(t, o): &RawConstraint| format!("({},{},{})={}", t[0], t[1], t[2], o);
        write!(f, "{} contradicts {}", show(&self.first), show(&self.second))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSet {
    universe: Vec<String>,
    index: HashMap<String, usize>,
    map: BTreeMap<[usize; 3], Orientation>,
}

/// Sorts three indices and reports whether the sorting permutation is odd.
fn sort_with_parity(mut t: [usize; 3]) -> ([usize; 3], bool) {
    let mut odd = false;
    for (i, j) in [(0, 1), (1, 2), (0, 1)] {
        if t[i] > t[j] {
            t.swap(i, j);
            odd = !odd;
        }
    }
    (t, odd)
}

fn index_universe(universe: &[String]) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(universe.len());
    for (i, name) in universe.iter().enumerate() {
        if index.insert(name.clone(), i).is_some() {
            return Err(Error::DuplicateVertex(name.clone()));
        }
    }
    Ok(index)
}

/// Merges raw prescriptions into canonical form.
///
/// Returns [`Error::Inconsistent`] with a witness pair when some unordered
/// triple receives incompatible values. The verdict and the witness do not
/// depend on the order of `raw.entries`.
pub fn canonicalize(raw: &RawConstraints) -> Result<ConstraintSet> {
    let index = index_universe(&raw.universe)?;
    let mut groups: BTreeMap<[usize; 3], Vec<(&RawConstraint, Orientation)>> = BTreeMap::new();
    for entry in &raw.entries {
        let (names, value) = entry;
        let mut ids = [0usize; 3];
        for (slot, name) in ids.iter_mut().zip(names) {
            *slot = *index
                .get(name)
                .ok_or_else(|| Error::UnknownVertex(name.clone()))?;
        }
        if ids[0] == ids[1] || ids[0] == ids[2] {
            return Err(Error::RepeatedVertexInTriple(names[0].clone()));
        }
        if ids[1] == ids[2] {
            return Err(Error::RepeatedVertexInTriple(names[1].clone()));
        }
        let (key, odd) = sort_with_parity(ids);
        groups.entry(key).or_default().push((entry, value.permuted(odd)));
    }
    let mut map = BTreeMap::new();
    for (key, group) in groups {
        let canonical: BTreeSet<Orientation> = group.iter().map(|(_, v)| *v).collect();
        if canonical.len() > 1 {
            let mut values = canonical.into_iter();
            let (a, b) = (values.next().unwrap(), values.next().unwrap());
            let pick = |v: Orientation| {
                group
                    .iter()
                    .filter(|(_, c)| *c == v)
                    .map(|(e, _)| (*e).clone())
                    .min()
                    .unwrap()
            };
            return Err(Error::Inconsistent(Box::new(Witness { first: pick(a), second: pick(b) })));
        }
        map.insert(key, group[0].1);
    }
    Ok(ConstraintSet { universe: raw.universe.clone(), index, map })
}

impl ConstraintSet {
    pub fn empty(universe: Vec<String>) -> Result<Self> {
        canonicalize(&RawConstraints { universe, entries: Vec::new() })
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Canonical entries in key order.
    pub fn iter(&self) -> impl Iterator<Item = ([&str; 3], Orientation)> + '_ {
        self.map.iter().map(|(k, v)| (k.map(|i| self.universe[i].as_str()), *v))
    }

    pub(crate) fn indexed(&self) -> impl Iterator<Item = (&[usize; 3], &Orientation)> {
        self.map.iter()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Prescribed orientation of `(a, b, c)` in this order, if any.
    pub fn get(&self, a: &str, b: &str, c: &str) -> Option<Orientation> {
        let ids = [self.index_of(a)?, self.index_of(b)?, self.index_of(c)?];
        let (key, odd) = sort_with_parity(ids);
        self.map.get(&key).map(|v| v.permuted(odd))
    }

    pub fn to_raw(&self) -> RawConstraints {
        RawConstraints {
            universe: self.universe.clone(),
            entries: self
                .iter()
                .map(|(t, o)| (t.map(str::to_string), o))
                .collect(),
        }
    }

    pub fn hypergraph(&self) -> Hypergraph {
        Hypergraph {
            vertices: self.universe.clone(),
            edges: self.map.keys().copied().collect(),
        }
    }
}

/// 3-uniform hypergraph; edges are sorted index triples into `vertices`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    pub vertices: Vec<String>,
    pub edges: BTreeSet<[usize; 3]>,
}

impl Hypergraph {
    pub fn new(vertices: Vec<String>, edges: impl IntoIterator<Item = [usize; 3]>) -> Self {
        Hypergraph {
            vertices,
            edges: edges.into_iter().map(|e| sort_with_parity(e).0).collect(),
        }
    }

    /// Complete 3-uniform hypergraph on `n` vertices named `v0..`.
    pub fn complete(n: usize) -> Self {
        let vertices = (0..n).map(|i| format!("v{i}")).collect();
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    edges.push([a, b, c]);
                }
            }
        }
        Hypergraph::new(vertices, edges)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegeneracyCertificate {
    pub k: usize,
    /// Placement order: each vertex is last in at most `k` edges.
    pub ordering: Vec<String>,
    /// Number of edges in which `ordering[i]` is the last vertex.
    pub back_degree: Vec<usize>,
}

/// Greedy peeling. Repeatedly removes the lowest-named vertex lying in at most
/// `k` remaining edges; the certificate's ordering is the reversed removal
/// order.
pub fn degeneracy_order(h: &Hypergraph, k: usize) -> Result<DegeneracyCertificate> {
    let n = h.vertices.len();
    let edges: Vec<[usize; 3]> = h.edges.iter().copied().collect();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, edge) in edges.iter().enumerate() {
        for &v in edge {
            incident[v].push(e);
        }
    }
    let mut degree: Vec<usize> = incident.iter().map(Vec::len).collect();
    let mut edge_alive = vec![true; edges.len()];
    let mut removed = vec![false; n];
    let mut by_name: Vec<usize> = (0..n).collect();
    by_name.sort_by(|&a, &b| h.vertices[a].cmp(&h.vertices[b]));

    let mut removal = Vec::with_capacity(n);
    for _ in 0..n {
        let v = by_name
            .iter()
            .copied()
            .find(|&v| !removed[v] && degree[v] <= k)
            .ok_or(Error::NotDegenerate(k))?;
        removal.push((v, degree[v]));
        removed[v] = true;
        for &e in &incident[v] {
            if edge_alive[e] {
                edge_alive[e] = false;
                for &w in &edges[e] {
                    if w != v {
                        degree[w] -= 1;
                    }
                }
            }
        }
    }
    removal.reverse();
    Ok(DegeneracyCertificate {
        k,
        ordering: removal.iter().map(|(v, _)| h.vertices[*v].clone()).collect(),
        back_degree: removal.iter().map(|(_, d)| *d).collect(),
    })
}

/// Realizes a partial order type whose hypergraph is 2-degenerate.
///
/// Vertices are placed in certificate order. All placed points keep pairwise
/// distinct x-coordinates and every line through two of them has its own
/// slope; a new vertex has at most two prescriptions against placed points,
/// and their open half-planes have non-parallel boundaries, so a strict
/// placement always exists.
pub fn embed_degenerate(cs: &ConstraintSet) -> Result<Embedding> {
    if cs.map.values().any(|o| *o == Orientation::Collinear) {
        return Err(Error::CollinearConstraintUnsupported);
    }
    let cert = degeneracy_order(&cs.hypergraph(), 2)?;
    let order: Vec<usize> = cert
        .ordering
        .iter()
        .map(|name| cs.index_of(name).expect("ordering comes from the universe"))
        .collect();
    let mut rank = vec![0usize; order.len()];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r;
    }

    // For each vertex, the prescriptions in which it is placed last, rotated
    // cyclically so the vertex comes last: orient(a, b, v) = side.
    let mut active: Vec<Vec<(usize, usize, Orientation)>> = vec![Vec::new(); order.len()];
    for (key, &value) in &cs.map {
        let last_pos = (0..3).max_by_key(|&p| rank[key[p]]).unwrap();
        let a = key[(last_pos + 1) % 3];
        let b = key[(last_pos + 2) % 3];
        active[key[last_pos]].push((a, b, value));
    }

    let mut placed: Vec<Option<Point>> = vec![None; order.len()];
    let mut placed_list: Vec<usize> = Vec::new();
    let mut slopes: HashSet<Rational> = HashSet::new();
    for &v in &order {
        let rules: Vec<(Point, Point, Orientation)> = active[v]
            .iter()
            .map(|&(a, b, side)| {
                (
                    placed[a].clone().expect("placed earlier"),
                    placed[b].clone().expect("placed earlier"),
                    side,
                )
            })
            .collect();
        debug_assert!(rules.len() <= 2);
        let others: Vec<&Point> = placed_list.iter().map(|&u| placed[u].as_ref().unwrap()).collect();
        let point = place_vertex(&rules, &others, &slopes).ok_or_else(|| {
            Error::PlacementFailure(format!("no admissible position for `{}`", cs.universe[v]))
        })?;
        for q in &others {
            slopes.insert(slope(&point, q));
        }
        placed[v] = Some(point);
        placed_list.push(v);
    }
    Ok(order
        .iter()
        .map(|&v| (cs.universe[v].clone(), placed[v].clone().unwrap()))
        .collect())
}

fn slope(p: &Point, q: &Point) -> Rational {
    (&q.y - &p.y) / (&q.x - &p.x)
}

/// Inward normal `n` of the open half-plane `orient(a, b, ·) = side`:
/// a point `v` qualifies iff `(v - a) · n > 0`.
fn inward_normal(a: &Point, b: &Point, side: Orientation) -> (Rational, Rational) {
    let (dx, dy) = (&b.x - &a.x, &b.y - &a.y);
    match side {
        Orientation::Left => (-dy, dx),
        _ => (dy, -dx),
    }
}

fn place_vertex(
    rules: &[(Point, Point, Orientation)],
    others: &[&Point],
    slopes: &HashSet<Rational>,
) -> Option<Point> {
    const DIRECTIONS: i64 = 48;
    const STEPS: i64 = 48;
    // Each candidate ray starts at `anchor` and runs inside the feasible region.
    let (anchor, directions): (Point, Vec<(Rational, Rational)>) = match rules {
        [] => (
            Point::from_ints(0, 0),
            (0..DIRECTIONS).map(|m| (int(1), int(signed_step(m)))).collect(),
        ),
        [(a, b, side)] => {
            let n = inward_normal(a, b, *side);
            let (dx, dy) = (&b.x - &a.x, &b.y - &a.y);
            let dirs = (0..DIRECTIONS)
                .map(|m| {
                    let m = int(signed_step(m));
                    (&n.0 + &m * &dx, &n.1 + &m * &dy)
                })
                .collect();
            (a.clone(), dirs)
        }
        [(a1, b1, s1), (a2, b2, s2)] => {
            let n1 = inward_normal(a1, b1, *s1);
            let n2 = inward_normal(a2, b2, *s2);
            let det = &n1.0 * &n2.1 - &n1.1 * &n2.0;
            if det.is_zero() {
                return None;
            }
            // apex: intersection of the two boundary lines
            let c1 = &n1.0 * &a1.x + &n1.1 * &a1.y;
            let c2 = &n2.0 * &a2.x + &n2.1 * &a2.y;
            let apex = Point::new(
                (&c1 * &n2.1 - &c2 * &n1.1) / &det,
                (&n1.0 * &c2 - &n2.0 * &c1) / &det,
            );
            // directions w with w·n1 = 1 and w·n2 = m > 0
            let dirs = (1..=DIRECTIONS)
                .map(|m| {
                    let m = int(m);
                    ((&n2.1 - &m * &n1.1) / &det, (&m * &n1.0 - &n2.0) / &det)
                })
                .collect();
            (apex, dirs)
        }
        _ => return None,
    };
    for (dx, dy) in &directions {
        for s in 1..=STEPS {
            let s = int(s);
            let candidate = Point::new(&anchor.x + &s * dx, &anchor.y + &s * dy);
            if admissible(&candidate, rules, others, slopes) {
                return Some(candidate);
            }
        }
    }
    None
}

/// 0, 1, -1, 2, -2, ...
fn signed_step(m: i64) -> i64 {
    if m % 2 == 1 {
        (m + 1) / 2
    } else {
        -(m / 2)
    }
}

fn admissible(
    v: &Point,
    rules: &[(Point, Point, Orientation)],
    others: &[&Point],
    slopes: &HashSet<Rational>,
) -> bool {
    if rules.iter().any(|(a, b, side)| orient(a, b, v) != *side) {
        return false;
    }
    if others.iter().any(|q| q.x == v.x) {
        return false;
    }
    let mut fresh = HashSet::with_capacity(others.len());
    others.iter().all(|q| {
        let s = slope(v, q);
        !slopes.contains(&s) && fresh.insert(s)
    })
}

/// Whether all lines through pairs of points have pairwise distinct slopes and
/// no two points share an x-coordinate.
pub fn has_distinct_slopes(emb: &Embedding) -> bool {
    let pts: Vec<&Point> = emb.iter().map(|(_, p)| p).collect();
    let mut seen = HashSet::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if pts[i].x == pts[j].x || !seen.insert(slope(pts[i], pts[j])) {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub triple: [String; 3],
    pub prescribed: Orientation,
    pub actual: Orientation,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}): prescribed {}, actual {}",
            self.triple[0], self.triple[1], self.triple[2], self.prescribed, self.actual
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }
}

/// Lists every prescription the embedding violates.
pub fn verify(cs: &ConstraintSet, emb: &Embedding) -> Result<Report> {
    let mut constrained: Vec<bool> = vec![false; cs.universe.len()];
    for key in cs.map.keys() {
        for &v in key {
            constrained[v] = true;
        }
    }
    for (v, used) in constrained.iter().enumerate() {
        if *used {
            emb.get(&cs.universe[v])?;
        }
    }
    let mut violations = Vec::new();
    for (names, prescribed) in cs.iter() {
        let [a, b, c] = names.map(|n| emb.get(n).expect("checked above"));
        let actual = orient(a, b, c);
        if actual != prescribed {
            violations.push(Violation {
                triple: names.map(str::to_string),
                prescribed,
                actual,
            });
        }
    }
    Ok(Report { violations })
}

/// Exact hinge energy with a rational margin. Zero iff every strict
/// prescription holds with doubled area at least `margin` and every
/// collinear one holds exactly.
pub fn exact_energy(cs: &ConstraintSet, emb: &Embedding, margin: &Rational) -> Result<Rational> {
    let mut total = Rational::zero();
    for (names, prescribed) in cs.iter() {
        let [a, b, c] = [emb.get(names[0])?, emb.get(names[1])?, emb.get(names[2])?];
        let area = crate::geometry::cross(a, b, c);
        let term = match prescribed {
            Orientation::Left => margin - &area,
            Orientation::Right => margin + &area,
            Orientation::Collinear => area.abs(),
        };
        if term.is_positive() {
            total += term;
        }
    }
    Ok(total)
}
