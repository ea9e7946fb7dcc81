//! Simultaneous geometric embeddings: graph collections over a shared vertex
//! set and exact verification of their straight-line drawings.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{on_open_segment, orient_approx, segments_cross, CrossKind, Embedding, Orientation, Point};
use crate::walk::unordered;

pub type Edge = (String, String);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    pub name: String,
    /// Stored with the smaller name first.
    pub edges: BTreeSet<Edge>,
}

/// Named simple graphs that all live on the same vertex set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphCollection {
    vertices: Vec<String>,
    graphs: Vec<Graph>,
}

impl GraphCollection {
    pub fn new(vertices: Vec<String>, graphs: Vec<(String, Vec<Edge>)>) -> Result<Self> {
        let known: BTreeSet<&String> = vertices.iter().collect();
        if known.len() != vertices.len() {
            let mut seen = BTreeSet::new();
            let dup = vertices.iter().find(|v| !seen.insert(*v)).expect("duplicate exists");
            return Err(Error::DuplicateVertex(dup.clone()));
        }
        let mut out = Vec::with_capacity(graphs.len());
        for (name, edges) in graphs {
            let mut set = BTreeSet::new();
            for (a, b) in edges {
                for v in [&a, &b] {
                    if !known.contains(v) {
                        return Err(Error::UnknownVertex(v.clone()));
                    }
                }
                if a == b {
                    return Err(Error::InvalidEdge(format!("self-loop at `{a}` in graph `{name}`")));
                }
                let (a, b) = unordered(&a, &b);
                if !set.insert((a.to_string(), b.to_string())) {
                    return Err(Error::InvalidEdge(format!("duplicate edge {{{a}, {b}}} in graph `{name}`")));
                }
            }
            out.push(Graph { name, edges: set });
        }
        Ok(GraphCollection { vertices, graphs: out })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn graphs(&self) -> &[Graph] {
        &self.graphs
    }

    pub fn graph(&self, name: &str) -> Option<&Graph> {
        self.graphs.iter().find(|g| g.name == name)
    }

    /// Keeps only the graphs whose names satisfy `keep`.
    pub fn sub_collection(&self, keep: impl Fn(&str) -> bool) -> GraphCollection {
        GraphCollection {
            vertices: self.vertices.clone(),
            graphs: self.graphs.iter().filter(|g| keep(&g.name)).cloned().collect(),
        }
    }

    pub fn edge_count(&self) -> usize {
        self.graphs.iter().map(|g| g.edges.len()).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DrawingViolation {
    /// Two edges meet other than in one shared endpoint.
    EdgeCrossing { first: Edge, second: Edge, kind: CrossKind },
    /// A vertex lies in the relative interior of an edge.
    VertexOnEdge { vertex: String, edge: Edge },
    Coincident { first: String, second: String },
}

impl fmt::Display for DrawingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DrawingViolation::EdgeCrossing { first, second, kind } => write!(
                f,
                "edges {{{}, {}}} and {{{}, {}}} intersect ({kind:?})",
                first.0, first.1, second.0, second.1
            ),
            DrawingViolation::VertexOnEdge { vertex, edge } => {
                write!(f, "vertex {vertex} lies inside edge {{{}, {}}}", edge.0, edge.1)
            }
            DrawingViolation::Coincident { first, second } => {
                write!(f, "vertices {first} and {second} coincide")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphViolations {
    pub graph: String,
    pub violations: Vec<DrawingViolation>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CrossingReport {
    /// Only graphs with at least one violation, in collection order.
    pub graphs: Vec<GraphViolations>,
}

impl CrossingReport {
    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.graphs.iter().map(|g| g.violations.len()).sum()
    }
}

fn coincidences(vertices: &[String], emb: &Embedding) -> Result<Vec<DrawingViolation>> {
    let mut first_at: HashMap<&Point, &String> = HashMap::with_capacity(vertices.len());
    let mut out = Vec::new();
    for v in vertices {
        let p = emb.get(v)?;
        if let Some(prev) = first_at.get(p) {
            out.push(DrawingViolation::Coincident { first: (*prev).clone(), second: v.clone() });
        } else {
            first_at.insert(p, v);
        }
    }
    Ok(out)
}

/// A point with its `f64` approximation for the filtered predicates.
type Hinted<'a> = (&'a Point, (f64, f64));

/// Checks the straight-line drawing of one graph whose vertex set is
/// `vertices` (isolated vertices included).
pub fn verify_straightline_planar<'a>(
    vertices: &[String],
    edges: impl IntoIterator<Item = &'a Edge>,
    emb: &Embedding,
) -> Result<Vec<DrawingViolation>> {
    let mut out = coincidences(vertices, emb)?;
    let mut approx: HashMap<&str, (f64, f64)> = HashMap::with_capacity(vertices.len());
    let mut point = |name: &'a str| -> Result<(&Point, (f64, f64))> {
        let p = emb.get(name)?;
        Ok((p, *approx.entry(name).or_insert_with(|| p.to_f64())))
    };
    let mut segs: Vec<(&Edge, Hinted, Hinted)> = Vec::new();
    for e in edges {
        segs.push((e, point(&e.0)?, point(&e.1)?));
    }
    let points: Vec<(&String, &Point, (f64, f64))> = vertices
        .iter()
        .map(|v| {
            let p = emb.get(v)?;
            Ok((v, p, p.to_f64()))
        })
        .collect::<Result<_>>()?;
    let strict = |o: Option<Orientation>| matches!(o, Some(Orientation::Left | Orientation::Right));
    for (e, (a, ha), (b, hb)) in &segs {
        for (v, p, hp) in &points {
            if !strict(orient_approx(*ha, *hb, *hp)) && on_open_segment(p, a, b) {
                out.push(DrawingViolation::VertexOnEdge { vertex: (*v).clone(), edge: (*e).clone() });
            }
        }
    }
    for (i, (e, (a, ha), (b, hb))) in segs.iter().enumerate() {
        for (f, (c, hc), (d, hd)) in &segs[i + 1..] {
            if a == b || c == d {
                // already reported as coincident endpoints
                continue;
            }
            let quick = [
                orient_approx(*ha, *hb, *hc),
                orient_approx(*ha, *hb, *hd),
                orient_approx(*hc, *hd, *ha),
                orient_approx(*hc, *hd, *hb),
            ];
            if quick.iter().all(|o| strict(*o)) {
                if quick[0] != quick[1] && quick[2] != quick[3] {
                    out.push(DrawingViolation::EdgeCrossing {
                        first: (*e).clone(),
                        second: (*f).clone(),
                        kind: CrossKind::ProperCrossing,
                    });
                }
                continue;
            }
            let kind = segments_cross(a, b, c, d)?;
            // an endpoint inside the other edge is reported as VertexOnEdge
            if kind.is_violation() && kind != CrossKind::EndpointInInterior {
                out.push(DrawingViolation::EdgeCrossing { first: (*e).clone(), second: (*f).clone(), kind });
            }
        }
    }
    Ok(out)
}

/// Per-graph violations of every drawing. Crossings between edges of
/// different graphs are allowed.
pub fn verify_simultaneous(coll: &GraphCollection, emb: &Embedding) -> Result<CrossingReport> {
    for v in &coll.vertices {
        emb.get(v)?;
    }
    let per_graph: Vec<Result<Vec<DrawingViolation>>> = coll
        .graphs
        .par_iter()
        .map(|g| verify_straightline_planar(&coll.vertices, &g.edges, emb))
        .collect();
    let mut graphs = Vec::new();
    for (g, res) in coll.graphs.iter().zip(per_graph) {
        let violations = res?;
        if !violations.is_empty() {
            graphs.push(GraphViolations { graph: g.name.clone(), violations });
        }
    }
    Ok(CrossingReport { graphs })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharingProfile {
    /// Edges in at least two graphs, with the number of graphs containing them.
    pub public: BTreeMap<Edge, usize>,
    pub edge_disjoint: bool,
    pub sunflower: bool,
}

pub fn sharing_profile(coll: &GraphCollection) -> SharingProfile {
    let mut count: BTreeMap<&Edge, usize> = BTreeMap::new();
    for g in &coll.graphs {
        for e in &g.edges {
            *count.entry(e).or_default() += 1;
        }
    }
    let public: BTreeMap<Edge, usize> =
        count.into_iter().filter(|(_, c)| *c >= 2).map(|(e, c)| (e.clone(), c)).collect();
    let sunflower = public.values().all(|&c| c == coll.graphs.len());
    SharingProfile { edge_disjoint: public.is_empty(), sunflower, public }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{rat, AffineMap};
    use proptest::prelude::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn edges(v: &[(&str, &str)]) -> Vec<Edge> {
        v.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    }

    fn emb(points: &[(&str, i64, i64)]) -> Embedding {
        points.iter().map(|(n, x, y)| (n.to_string(), Point::from_ints(*x, *y))).collect()
    }

    fn cycle(v: &[&str]) -> Vec<Edge> {
        (0..v.len()).map(|i| (v[i].to_string(), v[(i + 1) % v.len()].to_string())).collect()
    }

    fn five_cycles() -> GraphCollection {
        GraphCollection::new(
            names(&["a", "b", "c", "d", "e"]),
            vec![
                ("outer".into(), cycle(&["a", "b", "c", "d", "e"])),
                ("inner".into(), cycle(&["a", "c", "e", "b", "d"])),
            ],
        )
        .unwrap()
    }

    /// Integer placement with the combinatorics of the two-cycle picture.
    fn digitized_five_cycles() -> Embedding {
        emb(&[("a", 0, 0), ("b", 0, 3), ("c", 1, 1), ("d", 1, 2), ("e", 3, 1)])
    }

    #[test]
    fn triangle_is_planar() {
        let v = names(&["a", "b", "c"]);
        let e = edges(&[("a", "b"), ("b", "c"), ("a", "c")]);
        let r = verify_straightline_planar(&v, &e, &emb(&[("a", 0, 0), ("b", 1, 0), ("c", 0, 1)])).unwrap();
        assert!(r.is_empty());
    }

    #[test]
    fn convex_k4_has_one_crossing() {
        let v = names(&["a", "b", "c", "d"]);
        let e = edges(&[("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "d")]);
        let r = verify_straightline_planar(
            &v,
            &e,
            &emb(&[("a", 0, 0), ("b", 1, 0), ("c", 1, 1), ("d", 0, 1)]),
        )
        .unwrap();
        assert_eq!(r.len(), 1);
        assert!(matches!(&r[0], DrawingViolation::EdgeCrossing { kind: CrossKind::ProperCrossing, .. }));
    }

    #[test]
    fn vertex_on_edge_needs_the_edge() {
        let v = names(&["a", "b", "c"]);
        let e = emb(&[("a", 0, 0), ("b", 1, 1), ("c", 2, 2)]);
        let path = edges(&[("a", "b"), ("b", "c")]);
        assert!(verify_straightline_planar(&v, &path, &e).unwrap().is_empty());
        let with_ac = edges(&[("a", "b"), ("b", "c"), ("a", "c")]);
        let r = verify_straightline_planar(&v, &with_ac, &e).unwrap();
        assert!(r.iter().any(|x| matches!(x, DrawingViolation::VertexOnEdge { vertex, .. } if vertex == "b")));
    }

    #[test]
    fn isolated_vertex_on_edge_is_a_violation() {
        let v = names(&["a", "b", "m"]);
        let r = verify_straightline_planar(&v, &edges(&[("a", "b")]), &emb(&[("a", 0, 0), ("b", 2, 0), ("m", 1, 0)]))
            .unwrap();
        assert_eq!(r.len(), 1);
    }

    #[test]
    fn coincident_vertices_are_reported() {
        let v = names(&["a", "b"]);
        let r = verify_straightline_planar(&v, &[], &emb(&[("a", 1, 1), ("b", 1, 1)])).unwrap();
        assert!(matches!(&r[..], [DrawingViolation::Coincident { .. }]));
    }

    #[test]
    fn collinear_overlap_is_reported() {
        let v = names(&["a", "b", "c", "d"]);
        let r = verify_straightline_planar(
            &v,
            &edges(&[("a", "c"), ("b", "d")]),
            &emb(&[("a", 0, 0), ("b", 1, 0), ("c", 2, 0), ("d", 3, 0)]),
        )
        .unwrap();
        assert!(r.iter().any(|x| matches!(x, DrawingViolation::EdgeCrossing { kind: CrossKind::ImproperOverlap, .. })));
    }

    #[test]
    fn missing_vertex_is_an_error() {
        let coll = five_cycles();
        assert!(matches!(verify_simultaneous(&coll, &emb(&[("a", 0, 0)])), Err(Error::MissingVertex(_))));
    }

    #[test]
    fn two_five_cycles_embed_simultaneously() {
        let report = verify_simultaneous(&five_cycles(), &digitized_five_cycles()).unwrap();
        assert!(report.is_empty(), "{report:?}");
    }

    #[test]
    fn convex_pentagon_fails_for_two_five_cycles() {
        // in convex position only the hull cycle is drawn without crossings,
        // and the two cycles cannot both be the hull
        let hull = [(0, 2), (2, 0), (1, -2), (-1, -2), (-2, 0)];
        let labels = ["a", "b", "c", "d", "e"];
        let mut perm: Vec<usize> = (0..5).collect();
        let mut checked = 0;
        loop {
            let e: Embedding = perm
                .iter()
                .zip(hull)
                .map(|(&i, (x, y))| (labels[i].to_string(), Point::from_ints(x, y)))
                .collect();
            let report = verify_simultaneous(&five_cycles(), &e).unwrap();
            assert!(!report.is_empty());
            checked += 1;
            if !next_permutation(&mut perm) {
                break;
            }
        }
        assert_eq!(checked, 120);
    }

    fn next_permutation(v: &mut [usize]) -> bool {
        let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
            return false;
        };
        let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
        v.swap(i - 1, j);
        v[i..].reverse();
        true
    }

    #[test]
    fn empty_graph_is_fine() {
        let coll = GraphCollection::new(names(&["a"]), vec![("g".into(), vec![])]).unwrap();
        assert!(verify_simultaneous(&coll, &emb(&[("a", 0, 0)])).unwrap().is_empty());
    }

    #[test]
    fn collection_validation() {
        let v = names(&["a", "b"]);
        assert!(matches!(
            GraphCollection::new(v.clone(), vec![("g".into(), edges(&[("a", "z")]))]),
            Err(Error::UnknownVertex(_))
        ));
        assert!(matches!(
            GraphCollection::new(v.clone(), vec![("g".into(), edges(&[("a", "a")]))]),
            Err(Error::InvalidEdge(_))
        ));
        assert!(matches!(
            GraphCollection::new(v.clone(), vec![("g".into(), edges(&[("a", "b"), ("b", "a")]))]),
            Err(Error::InvalidEdge(_))
        ));
        assert!(matches!(GraphCollection::new(names(&["a", "a"]), vec![]), Err(Error::DuplicateVertex(_))));
    }

    #[test]
    fn sharing_profiles() {
        let p = sharing_profile(&five_cycles());
        assert!(p.edge_disjoint && p.sunflower && p.public.is_empty());

        let v = names(&["a", "b", "c", "d"]);
        let two = GraphCollection::new(
            v.clone(),
            vec![
                ("g1".into(), edges(&[("a", "b"), ("b", "c")])),
                ("g2".into(), edges(&[("b", "a"), ("c", "d")])),
            ],
        )
        .unwrap();
        let p = sharing_profile(&two);
        assert_eq!(p.public.into_iter().collect::<Vec<_>>(), vec![(("a".into(), "b".into()), 2)]);
        assert!(p.sunflower && !p.edge_disjoint);

        let three = GraphCollection::new(
            v,
            vec![
                ("g1".into(), edges(&[("a", "b")])),
                ("g2".into(), edges(&[("a", "b")])),
                ("g3".into(), edges(&[("c", "d")])),
            ],
        )
        .unwrap();
        assert!(!sharing_profile(&three).sunflower);
    }

    #[test]
    fn sub_collections_stay_valid() {
        let coll = five_cycles();
        let sub = coll.sub_collection(|n| n == "inner");
        assert_eq!(sub.graphs().len(), 1);
        assert!(verify_simultaneous(&sub, &digitized_five_cycles()).unwrap().is_empty());
    }

    proptest! {
        #[test]
        fn affine_maps_preserve_report(a in 1i64..5, b in -3i64..4, c in -3i64..4, d in 1i64..5, tx in -9i64..9) {
            prop_assume!(a * d - b * c != 0);
            let map = AffineMap {
                matrix: [[rat(a, 1), rat(b, 1)], [rat(c, 1), rat(d, 1)]],
                translation: [rat(tx, 1), rat(-tx, 3)],
            };
            let coll = five_cycles();
            for e in [digitized_five_cycles(), emb(&[("a", 0, 2), ("b", 2, 0), ("c", 1, -2), ("d", -1, -2), ("e", -2, 0)])] {
                let before = verify_simultaneous(&coll, &e).unwrap();
                let after = verify_simultaneous(&coll, &e.map(&map)).unwrap();
                prop_assert_eq!(before, after);
            }
        }
    }
}
