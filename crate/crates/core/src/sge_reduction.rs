//! Encoding of a directional walk as an SGE instance.
//!
//! For every turn `i` the graph `G_i` holds two copies of the gadget
//! `G̃_i`: a `K_4` on `u_i, u_{i+1}, u_{i+2}, d_i` (with `u_i u_{i+2}` and
//! `u_{i+1} u_{i+2}` subdivided by `e_i`, `f_i`) wrapped in a triangle
//! `a_i b_i c_i` that is tied to the frame corners `x, y, z`, plus a primed
//! copy sharing only `x, y, z`. `G_frame` forces all unprimed vertices (or all
//! primed ones) into the triangle `xyz`, and inside it each gadget forces
//! the turn `χ(u_i, u_{i+1}, u_{i+2}) = d(i)`.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{
    int, orient, perturb_generic, point_in_triangle, pow2_neg, rat, AffineMap, Embedding,
    Orientation, Perturbed, Point, Rational, Region,
};
use crate::sge::{verify_simultaneous, verify_straightline_planar, Edge, GraphCollection};
use crate::walk::{verify_walk_realization, DirectionalWalk};
use crate::walk_reduction::{check_realizes, rescale_unit_square};

/// Name of the primed copy of a vertex.
pub fn primed(name: &str) -> String {
    format!("{name}'")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SgeGadgetNames {
    /// 1-based turn index.
    pub index: usize,
    pub a: String,
    pub b: String,
    pub c: String,
    pub d: String,
    pub e: String,
    pub f: String,
}

impl SgeGadgetNames {
    pub fn for_index(index: usize) -> Self {
        let n = |s: &str| format!("{s}.{index}");
        SgeGadgetNames { index, a: n("a"), b: n("b"), c: n("c"), d: n("d"), e: n("e"), f: n("f") }
    }

    pub fn primed(&self) -> Self {
        SgeGadgetNames {
            index: self.index,
            a: primed(&self.a),
            b: primed(&self.b),
            c: primed(&self.c),
            d: primed(&self.d),
            e: primed(&self.e),
            f: primed(&self.f),
        }
    }

    pub fn all(&self) -> [&String; 6] {
        [&self.a, &self.b, &self.c, &self.d, &self.e, &self.f]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameNames {
    pub p: String,
    pub p_prime: String,
    pub x: String,
    pub y: String,
    pub z: String,
}

impl Default for FrameNames {
    fn default() -> Self {
        FrameNames {
            p: "frame.p".into(),
            p_prime: primed("frame.p"),
            x: "frame.x".into(),
            y: "frame.y".into(),
            z: "frame.z".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SgeInstanceRecord {
    pub walk: DirectionalWalk,
    pub collection: GraphCollection,
    pub gadgets: Vec<SgeGadgetNames>,
    /// `u -> u'` for every walk vertex.
    pub primed_walk: BTreeMap<String, String>,
    pub frame: FrameNames,
}

/// Name of the graph responsible for turn `i`.
pub fn gadget_graph_name(i: usize) -> String {
    format!("G{i}")
}

pub const FRAME_GRAPH: &str = "frame";

/// Expected vertex count `12(t−2) + 5 + 2n`.
pub fn instance_size(t: usize, n: usize) -> usize {
    12 * (t - 2) + 5 + 2 * n
}

fn edge(a: &str, b: &str) -> Edge {
    (a.to_string(), b.to_string())
}

/// The 17 edges of `G̃_i` for the given (possibly primed) names.
fn gadget_edges(g: &SgeGadgetNames, u: [&str; 3], d: Orientation, frame: &FrameNames) -> Vec<Edge> {
    let [ui, uj, uk] = u;
    let (to_a, to_b) = if d == Orientation::Left { (ui, uj) } else { (uj, ui) };
    vec![
        edge(&frame.x, &g.a),
        edge(&frame.y, &g.b),
        edge(&frame.z, &g.c),
        edge(&g.a, &g.b),
        edge(&g.a, &g.c),
        edge(&g.b, &g.c),
        edge(&g.a, to_a),
        edge(&g.b, to_b),
        edge(&g.c, &g.d),
        edge(ui, uj),
        edge(ui, &g.d),
        edge(uj, &g.d),
        edge(ui, &g.e),
        edge(uj, &g.f),
        edge(uk, &g.d),
        edge(uk, &g.e),
        edge(uk, &g.f),
    ]
}

impl SgeInstanceRecord {
    /// Unprimed gadget edges of turn `i` (1-based).
    fn tilde_edges(&self, i: usize, primed_copy: bool) -> Vec<Edge> {
        let (t, d) = self.walk.triples().nth(i - 1).expect("turn index in range");
        if primed_copy {
            let u = t.map(|v| self.primed_walk[v].as_str());
            gadget_edges(&self.gadgets[i - 1].primed(), u, d, &self.frame)
        } else {
            gadget_edges(&self.gadgets[i - 1], t, d, &self.frame)
        }
    }

    /// Pairs `(v, v')` exchanged by the primed swap; `x, y, z` stay fixed.
    pub fn prime_pairs(&self) -> Vec<(String, String)> {
        let mut pairs: Vec<(String, String)> =
            self.primed_walk.iter().map(|(u, v)| (u.clone(), v.clone())).collect();
        for g in &self.gadgets {
            let p = g.primed();
            pairs.extend(g.all().into_iter().zip(p.all()).map(|(a, b)| (a.clone(), b.clone())));
        }
        pairs.push((self.frame.p.clone(), self.frame.p_prime.clone()));
        pairs
    }
}

/// Builds `{G_1, …, G_{t−2}, G_frame}` for the walk.
pub fn build_sge_instance(w: &DirectionalWalk) -> Result<SgeInstanceRecord> {
    if w.len() < 3 {
        return Err(Error::WalkTooShort(w.len()));
    }
    for (k, (t, _)) in w.triples().enumerate() {
        if t[0] == t[2] {
            return Err(Error::DegenerateTurn { position: k + 1, vertex: t[0].to_string() });
        }
    }
    let walk_vertices = w.vertices();
    let frame = FrameNames::default();
    let gadgets: Vec<SgeGadgetNames> = (1..=w.len() - 2).map(SgeGadgetNames::for_index).collect();
    let primed_walk: BTreeMap<String, String> =
        walk_vertices.iter().map(|u| (u.clone(), primed(u))).collect();

    let mut vertices: Vec<String> = walk_vertices.clone();
    vertices.extend(primed_walk.values().cloned());
    for g in &gadgets {
        vertices.extend(g.all().into_iter().cloned());
        vertices.extend(g.primed().all().into_iter().cloned());
    }
    vertices.extend([&frame.p, &frame.p_prime, &frame.x, &frame.y, &frame.z].map(|s| s.clone()));
    let mut seen = BTreeSet::new();
    for v in &vertices {
        if !seen.insert(v) {
            return Err(Error::NameCollision(v.clone()));
        }
    }

    let mut rec = SgeInstanceRecord {
        walk: w.clone(),
        collection: GraphCollection::new(vertices, vec![])?,
        gadgets,
        primed_walk,
        frame,
    };
    let mut graphs: Vec<(String, Vec<Edge>)> = Vec::with_capacity(w.len() - 1);
    for i in 1..=rec.gadgets.len() {
        let mut edges = rec.tilde_edges(i, false);
        edges.extend(rec.tilde_edges(i, true));
        graphs.push((gadget_graph_name(i), edges));
    }
    let f = &rec.frame;
    let mut frame_edges = vec![edge(&f.x, &f.y), edge(&f.y, &f.z), edge(&f.x, &f.z)];
    let mut inner: BTreeSet<&String> = w.sequence().iter().collect();
    for g in &rec.gadgets {
        inner.extend(g.all());
    }
    for v in inner.into_iter().chain([&f.x, &f.y, &f.z]) {
        frame_edges.push(edge(&f.p, v));
    }
    for g in &rec.gadgets {
        for v in g.primed().all() {
            frame_edges.push(edge(&f.p_prime, v));
        }
    }
    for v in [&f.x, &f.y, &f.z] {
        frame_edges.push(edge(&f.p_prime, v));
    }
    graphs.push((FRAME_GRAPH.to_string(), frame_edges));
    rec.collection = GraphCollection::new(rec.collection.vertices().to_vec(), graphs)?;
    Ok(rec)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ExtractionNormalization {
    pub primed_swapped: bool,
    pub reflected: bool,
}

/// Brings a valid simultaneous embedding into the position used by the
/// backward argument: `p` inside `xyz` and `χ(x, y, z) = l`.
pub fn normalize_embedding(rec: &SgeInstanceRecord, emb: &Embedding) -> Result<(Embedding, ExtractionNormalization)> {
    let report = verify_simultaneous(&rec.collection, emb)?;
    if !report.is_empty() {
        return Err(Error::SimultaneityViolation(report.len()));
    }
    let f = &rec.frame;
    let (x, y, z) = (emb.get(&f.x)?, emb.get(&f.y)?, emb.get(&f.z)?);
    let mut flags = ExtractionNormalization::default();
    let mut out = emb.clone();
    if point_in_triangle(emb.get(&f.p)?, x, y, z)? != Region::Interior {
        let mut swap: BTreeMap<&str, &str> = BTreeMap::new();
        let pairs = rec.prime_pairs();
        for (a, b) in &pairs {
            swap.insert(a, b);
            swap.insert(b, a);
        }
        out = out.relabel(|n| swap.get(n).map(|s| s.to_string()));
        flags.primed_swapped = true;
    }
    if orient(x, y, z) == Orientation::Right {
        out = out.map(&AffineMap::mirror_x());
        flags.reflected = true;
    }
    Ok((out, flags))
}

/// Realization of the walk read off a simultaneous embedding.
pub fn extract_walk_realization(
    rec: &SgeInstanceRecord,
    emb: &Embedding,
) -> Result<(Embedding, ExtractionNormalization)> {
    let (normalized, flags) = normalize_embedding(rec, emb)?;
    let out = normalized.restrict(rec.walk.vertices().iter())?;
    let report = verify_walk_realization(&rec.walk, &out)?;
    if !report.is_empty() {
        return Err(Error::SoundnessViolation(format!(
            "extracted embedding violates {} turns",
            report.len()
        )));
    }
    Ok((out, flags))
}

/// Checks every step of the backward argument on a normalized embedding
/// and describes each step that fails.
pub fn backward_chain_failures(rec: &SgeInstanceRecord, emb: &Embedding) -> Result<Vec<String>> {
    let f = &rec.frame;
    let (x, y, z) = (emb.get(&f.x)?, emb.get(&f.y)?, emb.get(&f.z)?);
    let mut out = Vec::new();
    if orient(x, y, z) != Orientation::Left {
        out.push("frame triangle is not oriented left".to_string());
    }
    let inside = |p: &Point| point_in_triangle(p, x, y, z).map(|r| r == Region::Interior);
    let (p_in, p_prime_in) = (inside(emb.get(&f.p)?)?, inside(emb.get(&f.p_prime)?)?);
    if !p_in || p_prime_in {
        out.push(format!("p inside: {p_in}, p' inside: {p_prime_in}"));
    }
    let seq = rec.walk.sequence();
    for (k, g) in rec.gadgets.iter().enumerate() {
        let i = g.index;
        let d = rec.walk.turns()[k];
        for v in g.all().into_iter().chain(&seq[k..k + 3]) {
            if !inside(emb.get(v)?)? {
                out.push(format!("turn {i}: {v} outside the frame triangle"));
            }
        }
        let (a, b, c) = (emb.get(&g.a)?, emb.get(&g.b)?, emb.get(&g.c)?);
        if orient(a, b, c) != Orientation::Left {
            out.push(format!("turn {i}: χ(a, b, c) is not l"));
        }
        let (ui, uj, uk, dd) = (emb.get(&seq[k])?, emb.get(&seq[k + 1])?, emb.get(&seq[k + 2])?, emb.get(&g.d)?);
        for corner in [ui, uj, dd] {
            if point_in_triangle(corner, a, b, c)? != Region::Interior {
                out.push(format!("turn {i}: triangle T not inside a b c"));
                break;
            }
        }
        if orient(ui, uj, dd) != d {
            out.push(format!("turn {i}: χ(u_i, u_i+1, d_i) is not {d}"));
        }
        if point_in_triangle(uk, ui, uj, dd)? != Region::Interior {
            out.push(format!("turn {i}: u_i+2 not inside T"));
        }
        if orient(ui, uj, uk) != d {
            out.push(format!("turn {i}: χ(u_i, u_i+1, u_i+2) is not {d}"));
        }
    }
    Ok(out)
}

/// Frame corners and the positions of `p` and `p'`.
pub fn frame_coordinates() -> [Point; 5] {
    [
        Point::from_ints(-1, 2),
        Point::from_ints(-1, -2),
        Point::from_ints(1, 0),
        Point::new(rat(-3, 4), int(0)),
        Point::from_ints(2, 0),
    ]
}

fn local_names() -> (SgeGadgetNames, FrameNames, [String; 3]) {
    let g = SgeGadgetNames {
        index: 0,
        a: "a".into(),
        b: "b".into(),
        c: "c".into(),
        d: "d".into(),
        e: "e".into(),
        f: "f".into(),
    };
    let frame = FrameNames {
        p: "p".into(),
        p_prime: "p'".into(),
        x: "x".into(),
        y: "y".into(),
        z: "z".into(),
    };
    (g, frame, ["ui".into(), "uj".into(), "uk".into()])
}

/// Points of one gadget copy, in the order a, b, c, d, e, f, u_i, u_{i+1}, u_{i+2}.
type GadgetPoints = [Point; 9];

/// Whether the straight-line drawing of one gadget copy together with the
/// frame corners is crossing-free.
fn gadget_drawing_ok(pts: &GadgetPoints, d: Orientation, corners: &[Point; 3]) -> bool {
    let (g, frame, u) = local_names();
    let mut emb = Embedding::new();
    for (name, p) in g.all().into_iter().chain(&u).zip(pts.iter()) {
        emb.insert(name.clone(), p.clone());
    }
    for (name, p) in [&frame.x, &frame.y, &frame.z].into_iter().zip(corners) {
        emb.insert(name.clone(), p.clone());
    }
    let edges = gadget_edges(&g, [&u[0], &u[1], &u[2]], d, &frame);
    let vertices: Vec<String> = emb.names().cloned().collect();
    matches!(verify_straightline_planar(&vertices, &edges, &emb), Ok(v) if v.is_empty())
}

/// Floating-point screen for a sub-drawing of one gadget copy restricted to
/// `edges` (pairs of indices into `a, b, c, d, e, f, u_i, u_{i+1}, u_{i+2},
/// x, y, z`). Near-degenerate configurations are rejected, so a pass is only
/// a hint; the exact check decides.
fn partial_drawing_ok(pts: &[(f64, f64); 12], edges: &[(usize, usize)]) -> bool {
    const TOL: f64 = 1e-12;
    let cross = |a: (f64, f64), b: (f64, f64), c: (f64, f64)| {
        (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
    };
    let mut used = [false; 12];
    for &(a, b) in edges {
        used[a] = true;
        used[b] = true;
    }
    for &(a, b) in edges {
        for v in 0..12 {
            if !used[v] || v == a || v == b {
                continue;
            }
            let (p, q, r) = (pts[a], pts[b], pts[v]);
            if cross(p, q, r).abs() < TOL {
                let inside = (r.0 - p.0) * (r.0 - q.0) <= TOL && (r.1 - p.1) * (r.1 - q.1) <= TOL;
                if inside {
                    return false;
                }
            }
        }
    }
    for (j, &(a, b)) in edges.iter().enumerate() {
        for &(c, d) in &edges[j + 1..] {
            if a == c || a == d || b == c || b == d {
                continue;
            }
            let (p1, q1, p2, q2) = (pts[a], pts[b], pts[c], pts[d]);
            let (o1, o2) = (cross(p1, q1, p2), cross(p1, q1, q2));
            let (o3, o4) = (cross(p2, q2, p1), cross(p2, q2, q1));
            if o1 * o2 < 0.0 && o3 * o4 < 0.0 {
                return false;
            }
        }
    }
    true
}

const A: usize = 0;
const B: usize = 1;
const C: usize = 2;
const D: usize = 3;
const E: usize = 4;
const F: usize = 5;
const UI: usize = 6;
const UJ: usize = 7;
const UK: usize = 8;
const X: usize = 9;
const Y: usize = 10;
const Z: usize = 11;
const K4: [(usize, usize); 8] = [(UI, UJ), (UI, D), (UJ, D), (UI, E), (E, UK), (UJ, F), (F, UK), (UK, D)];

/// Candidate positions `k + s·(q − k)` for boundary points `q` of the frame
/// triangle, nearest to frame corner `home` first.
fn polar_candidates(k: &Point, corners: &[Point; 3], home: usize, jitter: &Rational) -> Vec<Point> {
    const PER_SIDE: i64 = 16;
    let mut boundary: Vec<(i64, Point)> = Vec::new();
    for side in 0..3 {
        let (p, q) = (&corners[side], &corners[(side + 1) % 3]);
        for j in 0..PER_SIDE {
            let pos = side as i64 * PER_SIDE + j;
            let around = 3 * PER_SIDE;
            let offset = (pos - home as i64 * PER_SIDE).rem_euclid(around);
            boundary.push((offset.min(around - offset), p.lerp(q, &rat(j, PER_SIDE))));
        }
    }
    boundary.sort_by_key(|(dist, _)| *dist);
    let steps = [rat(7, 8), rat(1, 2), rat(15, 16), rat(3, 4), rat(1, 4), rat(1, 8)];
    let mut out = Vec::with_capacity(boundary.len() * steps.len());
    for (_, q) in &boundary {
        for s in &steps {
            out.push(k.lerp(q, &(s - jitter)));
        }
    }
    out
}

/// Upper bound on exact gadget checks per turn.
const PLACEMENT_BUDGET: usize = 20_000;

/// Places `a_i, b_i, c_i, d_i, e_i, f_i` inside the frame triangle.
fn place_inner_gadget(
    i: usize,
    d: Orientation,
    u: [&Point; 3],
    corners: &[Point; 3],
) -> Result<[Point; 6]> {
    let [ui, uj, uk] = u;
    let step = int(i as i64);
    let e = uk.lerp(ui, &(rat(1, 2) - int(1) / (int(4) * (&step + int(2)))));
    let f = uk.lerp(uj, &(rat(1, 2) - int(1) / (int(4) * (&step + int(3)))));
    let mid = ui.lerp(uj, &rat(1, 2));
    let dd = uk.beyond(&mid, &(rat(1, 4) + int(1) / (int(8) * (&step + int(1)))));
    let (ka, kb) = if d == Orientation::Left { (UI, UJ) } else { (UJ, UI) };
    let jitter = int(1) / (int(32) * (&step + int(1)));
    let exact_base: [&Point; 12] = [ui, ui, ui, &dd, &e, &f, ui, uj, uk, &corners[0], &corners[1], &corners[2]];
    let float_base: [(f64, f64); 12] = exact_base.map(Point::to_f64);
    let corner_point = |k: usize| [ui, uj, &dd][[UI, UJ, D].iter().position(|&s| s == k).expect("corner")];
    // one vertex at a time: attachment spoke, frame spoke and the K4
    let single = |slot: usize, attach: usize, frame_corner: usize| -> Vec<(Point, (f64, f64))> {
        polar_candidates(corner_point(attach), corners, frame_corner - X, &jitter)
            .into_iter()
            .map(|p| {
                let fp = p.to_f64();
                (p, fp)
            })
            .filter(|(_, fp)| {
                let mut pts = float_base;
                pts[slot] = *fp;
                let mut edges = K4.to_vec();
                edges.extend([(slot, attach), (slot, frame_corner)]);
                partial_drawing_ok(&pts, &edges)
            })
            .collect()
    };
    let cands_a = single(A, ka, X);
    let cands_b = single(B, kb, Y);
    let cands_c = single(C, D, Z);
    let mut pair_edges = K4.to_vec();
    pair_edges.extend([(A, ka), (A, X), (B, kb), (B, Y), (A, B)]);
    let mut full_edges = pair_edges.clone();
    full_edges.extend([(C, D), (C, Z), (A, C), (B, C)]);
    let mut tried = 0usize;
    for (a, fa) in &cands_a {
        for (b, fb) in &cands_b {
            let mut pts = float_base;
            pts[A] = *fa;
            pts[B] = *fb;
            if !partial_drawing_ok(&pts, &pair_edges) {
                continue;
            }
            for (c, fc) in &cands_c {
                pts[C] = *fc;
                if orient(a, b, c) != Orientation::Left || !partial_drawing_ok(&pts, &full_edges) {
                    continue;
                }
                tried += 1;
                let gadget: GadgetPoints =
                    [a.clone(), b.clone(), c.clone(), dd.clone(), e.clone(), f.clone(), ui.clone(), uj.clone(), uk.clone()];
                if gadget_drawing_ok(&gadget, d, corners) {
                    return Ok([a.clone(), b.clone(), c.clone(), dd, e, f]);
                }
                if tried >= PLACEMENT_BUDGET {
                    return Err(Error::PlacementFailure(format!("no position for a, b, c of turn {i}")));
                }
            }
        }
    }
    Err(Error::PlacementFailure(format!("no position for a, b, c of turn {i}")))
}

/// Places `a'_i` on `y = 2`, `b'_i` on `y = −2` and `c'_i` next to the third
/// corner of `T'`, given the primed copies `[d', e', f', u'_i, u'_{i+1}, u'_{i+2}]`.
fn place_outer_gadget(i: usize, d: Orientation, s: &[Point; 6], corners: &[Point; 3]) -> Result<[Point; 3]> {
    let [dd, e, f, ui, uj, uk] = s;
    let mut t: Vec<&Point> = vec![ui, uj, dd];
    t.sort_by(|p, q| q.y.cmp(&p.y));
    let k1 = t[0];
    let (k2, k3) = if orient(k1, t[1], t[2]) == Orientation::Right { (t[1], t[2]) } else { (t[2], t[1]) };
    let on_line = |q: &Point, k: &Point, y: i64| {
        let s = (int(y) - &q.y) / (&k.y - &q.y);
        Point::new(&q.x + &s * (&k.x - &q.x), int(y))
    };
    for w in 0..=16u32 {
        let wt = int(1i64 << w);
        let total = &wt + int(2);
        let q = Point::new(
            (&wt * &k1.x + &k2.x + &k3.x) / &total,
            (&wt * &k1.y + &k2.y + &k3.y) / &total,
        );
        if q.y <= k2.y {
            continue;
        }
        let a = on_line(&q, k1, 2);
        let b = on_line(&q, k2, -2);
        for j in 1..=24u32 {
            let c = k3.beyond(&q, &pow2_neg(j));
            let pts: GadgetPoints = [
                a.clone(),
                b.clone(),
                c.clone(),
                dd.clone(),
                e.clone(),
                f.clone(),
                ui.clone(),
                uj.clone(),
                uk.clone(),
            ];
            if gadget_drawing_ok(&pts, d, corners) {
                return Ok([a, b, c]);
            }
        }
    }
    Err(Error::PlacementFailure(format!("no position for a', b', c' of turn {i}")))
}

/// Reflection, rotation and translation carrying the unprimed points onto
/// the primed copy `S`: no two points of `S` share a y-coordinate and every
/// line through two of them meets `y = ±2` at x-coordinates above 1.
fn primed_copy_map(points: &[&Point]) -> Result<AffineMap> {
    let distinct: Vec<&Point> = points.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let mirror = AffineMap::mirror_x();
    for k in 1..=64i64 {
        let m = AffineMap::rational_rotation(&rat(1, k)).compose(&mirror);
        let image: Vec<Point> = distinct.iter().map(|p| m.apply(p)).collect();
        let ys: BTreeSet<&Rational> = image.iter().map(|p| &p.y).collect();
        if ys.len() != image.len() {
            continue;
        }
        let mut least: Option<Rational> = None;
        for (j, p) in image.iter().enumerate() {
            for q in &image[j + 1..] {
                for y in [2, -2] {
                    let s = (int(y) - &p.y) / (&q.y - &p.y);
                    let x = &p.x + s * (&q.x - &p.x);
                    least = Some(match least {
                        Some(cur) if cur <= x => cur,
                        _ => x,
                    });
                }
            }
        }
        let least = least.unwrap_or_else(|| image.iter().map(|p| p.x.clone()).min().unwrap_or_else(|| int(0)));
        return Ok(AffineMap::translation(int(2) - least, int(0)).compose(&m));
    }
    Err(Error::PlacementFailure("no rotation separates the primed copy".into()))
}

/// Simultaneous embedding before the final perturbation.
pub fn embed_sge_unperturbed(rec: &SgeInstanceRecord, r: &Embedding) -> Result<Embedding> {
    let w = &rec.walk;
    check_realizes(w, r)?;
    let base = rescale_unit_square(&r.restrict(w.vertices().iter())?)
        .map(&AffineMap::scale_translate(rat(1, 2), (int(0), int(0))));
    let [x, y, z, p, p_prime] = frame_coordinates();
    let corners = [x.clone(), y.clone(), z.clone()];
    let seq = w.sequence();

    let inner: Vec<[Point; 6]> = rec
        .gadgets
        .par_iter()
        .enumerate()
        .map(|(k, g)| {
            let u = [base.get(&seq[k])?, base.get(&seq[k + 1])?, base.get(&seq[k + 2])?];
            place_inner_gadget(g.index, w.turns()[k], u, &corners)
        })
        .collect::<Result<_>>()?;

    let mut out = base.clone();
    for (g, pts) in rec.gadgets.iter().zip(&inner) {
        for (name, pt) in g.all().into_iter().zip(pts) {
            out.insert(name.clone(), pt.clone());
        }
    }

    let mut s_points: Vec<&Point> = base.iter().map(|(_, p)| p).collect();
    for pts in &inner {
        s_points.extend(&pts[3..6]);
    }
    let m = primed_copy_map(&s_points)?;
    for (u, pt) in base.iter() {
        out.insert(rec.primed_walk[u].clone(), m.apply(pt));
    }
    let outer: Vec<[Point; 3]> = rec
        .gadgets
        .par_iter()
        .enumerate()
        .map(|(k, g)| {
            let pts = &inner[k];
            let s = [
                m.apply(&pts[3]),
                m.apply(&pts[4]),
                m.apply(&pts[5]),
                m.apply(base.get(&seq[k])?),
                m.apply(base.get(&seq[k + 1])?),
                m.apply(base.get(&seq[k + 2])?),
            ];
            place_outer_gadget(g.index, w.turns()[k], &s, &corners)
        })
        .collect::<Result<_>>()?;
    for ((g, inner_pts), abc) in rec.gadgets.iter().zip(&inner).zip(outer) {
        let gp = g.primed();
        for (name, pt) in [&gp.a, &gp.b, &gp.c].into_iter().zip(abc) {
            out.insert(name.clone(), pt);
        }
        for (name, pt) in [&gp.d, &gp.e, &gp.f].into_iter().zip(&inner_pts[3..6]) {
            out.insert(name.clone(), m.apply(pt));
        }
    }

    let f = &rec.frame;
    for (name, pt) in [(&f.x, x), (&f.y, y), (&f.z, z), (&f.p, p), (&f.p_prime, p_prime)] {
        out.insert(name.clone(), pt);
    }
    Ok(out)
}

/// Default perturbation budget for SGE embeddings.
pub fn default_epsilon() -> Rational {
    pow2_neg(10)
}

/// Simultaneous embedding of the instance built from a realization of its walk.
pub fn embed_sge_instance(rec: &SgeInstanceRecord, r: &Embedding) -> Result<Embedding> {
    Ok(embed_sge_instance_with(rec, r, &default_epsilon())?.embedding)
}

pub fn embed_sge_instance_with(rec: &SgeInstanceRecord, r: &Embedding, eps0: &Rational) -> Result<Perturbed> {
    let raw = embed_sge_unperturbed(rec, r)?;
    perturb_generic(
        &raw,
        |e| verify_simultaneous(&rec.collection, e).is_ok_and(|rep| rep.is_empty()),
        eps0,
    )
}
