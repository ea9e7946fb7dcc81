//! Reduction from an arbitrary directional walk `W` to a walk `W'` that never
//! repeats an edge, together with the maps between realizations.
//!
//! Every turn `(u_i, u_{i+1}, u_{i+2})` of `W` is replaced by a 15-position
//! triangle gadget over five fresh dummies `β_i, δ_i, ξ_i, φ_i, ψ_i`. Three
//! hooks put `β_i, δ_i, ξ_i` on the `d(i)` side of `u_i u_{i+1}` without using
//! that edge, and the tail of the gadget forces `u_{i+2}` into the triangle
//! they span. Consecutive gadgets share their boundary vertex.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::geometry::{
    affine_map_three, int, point_in_triangle, pow2_neg, rat, AffineMap, Embedding, Orientation,
    Perturbed, Point, Rational, Region,
};
use crate::walk::{verify_walk_realization, DirectionalWalk};

/// Number of positions of one gadget, shared endpoints included.
pub const GADGET_POSITIONS: usize = 15;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetNames {
    /// 1-based turn index `i`.
    pub index: usize,
    pub beta: String,
    pub delta: String,
    pub xi: String,
    pub phi: String,
    pub psi: String,
}

impl GadgetNames {
    pub fn for_index(index: usize) -> Self {
        GadgetNames {
            index,
            beta: format!("beta.{index}"),
            delta: format!("delta.{index}"),
            xi: format!("xi.{index}"),
            phi: format!("phi.{index}"),
            psi: format!("psi.{index}"),
        }
    }

    pub fn all(&self) -> [&String; 5] {
        [&self.beta, &self.delta, &self.xi, &self.phi, &self.psi]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionRecord {
    pub input: DirectionalWalk,
    pub output: DirectionalWalk,
    pub gadgets: Vec<GadgetNames>,
    /// 0-based positions in `output` where consecutive gadgets are glued.
    pub seams: Vec<usize>,
}

/// One gadget: 15 vertex names and the 13 directions at its inner positions.
pub fn triangle_gadget(
    g: &GadgetNames,
    u: [&str; 3],
    d: Orientation,
) -> Result<(Vec<String>, Vec<Orientation>)> {
    let mut names: Vec<&str> = u.to_vec();
    names.extend(g.all().iter().map(|s| s.as_str()));
    for (i, a) in names.iter().enumerate() {
        if names[i + 1..].contains(a) {
            return Err(Error::NameCollision(a.to_string()));
        }
    }
    let [ui, uj, uk] = u;
    let (b, de, x, f, p) = (&g.beta, &g.delta, &g.xi, &g.phi, &g.psi);
    let sequence: Vec<String> = [
        ui, b, uj, de, ui, x, uj, f, b, de, uk, x, b, p, uj,
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let n = !d;
    // hooks (i)-(iii), then u_{i+2} inside triangle (β, δ, ξ), then back to u_{i+1}
    let turns = vec![n, d, d, n, n, d, d, n, d, n, d, d, n];
    Ok((sequence, turns))
}

/// Builds `W'` by gluing the gadgets of all turns of `W`.
pub fn reduce_walk(w: &DirectionalWalk) -> Result<ReductionRecord> {
    if w.len() < 3 {
        return Err(Error::WalkTooShort(w.len()));
    }
    let vertices = w.vertices();
    let mut gadgets = Vec::with_capacity(w.turns().len());
    let mut sequence: Vec<String> = Vec::with_capacity(14 * (w.len() - 2) + 1);
    let mut turns: Vec<Orientation> = Vec::new();
    let mut seams = Vec::new();
    for (k, (t, d)) in w.triples().enumerate() {
        let i = k + 1;
        if t[0] == t[2] {
            return Err(Error::DegenerateTurn { position: i, vertex: t[0].to_string() });
        }
        let g = GadgetNames::for_index(i);
        if let Some(clash) = g.all().into_iter().find(|n| vertices.contains(n)) {
            return Err(Error::NameCollision(clash.clone()));
        }
        let (frag, dirs) = triangle_gadget(&g, t, d)?;
        if sequence.is_empty() {
            sequence.extend(frag);
        } else {
            // the first occurrence of u_i in W_i turns by ¬d(i)
            seams.push(sequence.len() - 1);
            turns.push(!d);
            sequence.extend(frag.into_iter().skip(1));
        }
        turns.extend(dirs);
        gadgets.push(g);
    }
    let output = DirectionalWalk::new(sequence, turns)?;
    Ok(ReductionRecord { input: w.clone(), output, gadgets, seams })
}

/// Target frame of gadget `i`: images of `u_i, u_{i+1}, u_{i+2}` and the
/// dummy coordinates, mirrored in x when the turn is to the right.
struct GadgetFrame {
    sign: i64,
}

impl GadgetFrame {
    fn new(d: Orientation) -> Self {
        GadgetFrame { sign: if d == Orientation::Right { -1 } else { 1 } }
    }

    fn at(&self, x: i64, y: i64) -> Point {
        Point::from_ints(self.sign * x, y)
    }

    fn targets(&self) -> [Point; 3] {
        [self.at(4, -2), self.at(4, 2), self.at(0, 0)]
    }

    /// β, δ, ξ, φ
    fn dummies(&self) -> [Point; 4] {
        [self.at(1, -3), self.at(1, 3), self.at(-1, 0), self.at(2, 3)]
    }

    /// ψ on the line `x = ±2`, `y ≥ 0`, inside the open triangle
    /// `(u_{i+1}, u_{i+2}, u_{i+3})`; `(±2, 1)` for the last gadget.
    fn psi(&self, next: Option<&Point>) -> Result<Point> {
        let Some(q) = next else {
            return Ok(self.at(2, 1));
        };
        let line_x = int(2 * self.sign);
        let corners = [self.at(4, 2), self.at(0, 0), q.clone()];
        let mut ys: Vec<Rational> = Vec::new();
        for k in 0..3 {
            let (a, b) = (&corners[k], &corners[(k + 1) % 3]);
            let (lo, hi) = if a.x <= b.x { (&a.x, &b.x) } else { (&b.x, &a.x) };
            if line_x < *lo || line_x > *hi {
                continue;
            }
            if a.x == b.x {
                ys.push(a.y.clone());
                ys.push(b.y.clone());
            } else {
                let t = (&line_x - &a.x) / (&b.x - &a.x);
                ys.push(&a.y + t * (&b.y - &a.y));
            }
        }
        let hi = ys.iter().max().cloned().unwrap_or_else(Rational::zero);
        let lo = ys.into_iter().min().unwrap_or_else(Rational::zero).max(Rational::zero());
        let psi = Point::new(line_x, (lo + hi) / int(2));
        match point_in_triangle(&psi, &corners[0], &corners[1], &corners[2]) {
            Ok(Region::Interior) => Ok(psi),
            _ => Err(Error::PlacementFailure(format!("no interior position for psi near {q}"))),
        }
    }
}

/// Default perturbation budget for lifted realizations.
pub fn default_epsilon() -> Rational {
    pow2_neg(10)
}

pub(crate) fn check_realizes(w: &DirectionalWalk, emb: &Embedding) -> Result<()> {
    let report = verify_walk_realization(w, emb)?;
    if report.is_empty() {
        Ok(())
    } else {
        Err(Error::RealizationInvalid(report.len()))
    }
}

/// Lifted placement before the final perturbation, expressed in the frame of
/// the last gadget: that gadget's dummies sit exactly at the literal
/// coordinates.
pub fn lift_unperturbed(rec: &ReductionRecord, r: &Embedding) -> Result<Embedding> {
    let w = &rec.input;
    check_realizes(w, r)?;
    let seq = w.sequence();
    let pos = |k: usize| r.get(&seq[k]);
    // Composing the per-gadget normalizations collapses to the single map
    // sending the original u_i, u_{i+1}, u_{i+2} onto the gadget targets, so
    // each gadget is placed in its own frame and pulled back to R's frame.
    let mut frames: Vec<AffineMap> = Vec::with_capacity(rec.gadgets.len());
    let mut placed = r.restrict(w.vertices().iter())?;
    for (k, g) in rec.gadgets.iter().enumerate() {
        let frame = GadgetFrame::new(w.turns()[k]);
        let targets = frame.targets();
        let to_frame = affine_map_three(
            [pos(k)?, pos(k + 1)?, pos(k + 2)?],
            [&targets[0], &targets[1], &targets[2]],
        )?;
        let back = to_frame.inverse();
        let next = match seq.get(k + 3) {
            Some(name) => Some(to_frame.apply(r.get(name)?)),
            None => None,
        };
        let [beta, delta, xi, phi] = frame.dummies();
        let psi = frame.psi(next.as_ref())?;
        for (name, p) in [(&g.beta, beta), (&g.delta, delta), (&g.xi, xi), (&g.phi, phi), (&g.psi, psi)] {
            placed.insert(name.clone(), back.apply(&p));
        }
        frames.push(to_frame);
    }
    let last = frames.last().ok_or(Error::WalkTooShort(w.len()))?;
    Ok(placed.map(last))
}

/// Realization of `W'` built from a realization `r` of `W`.
pub fn lift_realization(rec: &ReductionRecord, r: &Embedding) -> Result<Embedding> {
    Ok(lift_realization_with(rec, r, &default_epsilon())?.embedding)
}

pub fn lift_realization_with(rec: &ReductionRecord, r: &Embedding, eps0: &Rational) -> Result<Perturbed> {
    let raw = lift_unperturbed(rec, r)?;
    let out = crate::geometry::perturb_generic(
        &raw,
        |e| verify_walk_realization(&rec.output, e).is_ok_and(|rep| rep.is_empty()),
        eps0,
    )?;
    if !verify_walk_realization(&rec.input, &out.embedding)?.is_empty() {
        return Err(Error::SoundnessViolation("lifted embedding does not realize W".into()));
    }
    Ok(out)
}

/// Restriction of a realization of `W'` to `V(W)`.
pub fn restrict_realization(rec: &ReductionRecord, r_prime: &Embedding) -> Result<Embedding> {
    check_realizes(&rec.output, r_prime)?;
    let out = r_prime.restrict(rec.input.vertices().iter())?;
    if !verify_walk_realization(&rec.input, &out)?.is_empty() {
        return Err(Error::SoundnessViolation("restriction does not realize W".into()));
    }
    Ok(out)
}

/// Checks the hook and containment relations forced by each gadget:
/// `orient(u_i, u_{i+1}, x) = d(i)` for `x ∈ {β_i, δ_i, ξ_i}` and `u_{i+2}`
/// strictly inside `(β_i, δ_i, ξ_i)`. Returns a description of each failure.
pub fn gadget_identity_failures(rec: &ReductionRecord, emb: &Embedding) -> Result<Vec<String>> {
    let w = &rec.input;
    let seq = w.sequence();
    let mut failures = Vec::new();
    for (k, g) in rec.gadgets.iter().enumerate() {
        let d = w.turns()[k];
        let (ui, uj, uk) = (emb.get(&seq[k])?, emb.get(&seq[k + 1])?, emb.get(&seq[k + 2])?);
        let (b, de, x) = (emb.get(&g.beta)?, emb.get(&g.delta)?, emb.get(&g.xi)?);
        for (name, p) in [(&g.beta, b), (&g.delta, de), (&g.xi, x)] {
            let o = crate::geometry::orient(ui, uj, p);
            if o != d {
                failures.push(format!("gadget {}: orient(u_i, u_i+1, {name}) = {o}, expected {d}", g.index));
            }
        }
        match point_in_triangle(uk, b, de, x) {
            Ok(Region::Interior) => {}
            other => failures.push(format!("gadget {}: u_i+2 not interior ({other:?})", g.index)),
        }
    }
    Ok(failures)
}

/// Orientation-preserving rescale of an embedding into `[-1/2, 1/2]²`.
pub fn rescale_unit_square(emb: &Embedding) -> Embedding {
    let mut it = emb.iter().map(|(_, p)| p);
    let Some(first) = it.next() else {
        return emb.clone();
    };
    let (mut xlo, mut xhi, mut ylo, mut yhi) =
        (first.x.clone(), first.x.clone(), first.y.clone(), first.y.clone());
    for p in it {
        xlo = xlo.min(p.x.clone());
        xhi = xhi.max(p.x.clone());
        ylo = ylo.min(p.y.clone());
        yhi = yhi.max(p.y.clone());
    }
    let extent = (&xhi - &xlo).max(&yhi - &ylo);
    if extent.is_zero() {
        return emb.clone();
    }
    let factor = int(1) / extent;
    let cx = (&xlo + &xhi) * rat(1, 2);
    let cy = (&ylo + &yhi) * rat(1, 2);
    let map = AffineMap::scale_translate(factor.clone(), (-(&factor * cx), -(&factor * cy)));
    emb.map(&map)
}
