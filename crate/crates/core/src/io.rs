//! JSON file formats.
//!
//! Every file carries `"format_version": 1`. Files without the field are
//! read as version 1; any other version is rejected. Rationals are written as
//! `"num/den"` strings and read from such strings, decimal strings or JSON
//! numbers (converted exactly from their decimal text).

use serde::Deserialize;
use serde_json::{json, Value};

use crate::constraints::{ConstraintSet, RawConstraints};
use crate::error::{Error, Result};
use crate::geometry::{format_rational, parse_rational, Embedding, Orientation, Point, Rational};
use crate::search::{Certificate, SearchOutcome, Verdict};
use crate::sge::GraphCollection;
use crate::sge_reduction::{build_sge_instance, SgeInstanceRecord};
use crate::walk::{walk_constraints, DirectionalWalk};
use crate::walk_reduction::{reduce_walk, ReductionRecord};

pub const FORMAT_VERSION: u64 = 1;

fn check_version(v: Option<u64>) -> Result<()> {
    match v {
        None | Some(FORMAT_VERSION) => Ok(()),
        Some(other) => Err(Error::FormatVersion(other)),
    }
}

fn pretty(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("values always serialize") + "\n"
}

fn parse_rational_value(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => parse_rational(&n.to_string()),
        other => Err(Error::Parse(format!("expected a rational, found {other}"))),
    }
}

// ---------------------------------------------------------------------------
// Walks

#[derive(Deserialize)]
struct WalkFile {
    #[serde(default)]
    format_version: Option<u64>,
    walk: Vec<String>,
    turns: String,
}

fn walk_value(w: &DirectionalWalk) -> Value {
    json!({ "walk": w.sequence(), "turns": w.turn_string() })
}

fn walk_from_value(v: Value) -> Result<DirectionalWalk> {
    let file: WalkFile = serde_json::from_value(v)?;
    check_version(file.format_version)?;
    DirectionalWalk::from_turn_string(file.walk, &file.turns)
}

pub fn parse_walk(text: &str) -> Result<DirectionalWalk> {
    walk_from_value(serde_json::from_str(text)?)
}

pub fn walk_to_json(w: &DirectionalWalk) -> String {
    let mut v = walk_value(w);
    v["format_version"] = json!(FORMAT_VERSION);
    pretty(&v)
}

// ---------------------------------------------------------------------------
// Embeddings

fn embedding_value(emb: &Embedding) -> Value {
    let points: serde_json::Map<String, Value> = emb
        .iter()
        .map(|(n, p)| (n.clone(), json!([format_rational(&p.x), format_rational(&p.y)])))
        .collect();
    Value::Object(points)
}

fn embedding_from_points(points: &Value) -> Result<Embedding> {
    let Value::Object(map) = points else {
        return Err(Error::Parse("`points` must be an object".into()));
    };
    map.iter()
        .map(|(name, coords)| match coords {
            Value::Array(xy) if xy.len() == 2 => {
                Ok((name.clone(), Point::new(parse_rational_value(&xy[0])?, parse_rational_value(&xy[1])?)))
            }
            _ => Err(Error::Parse(format!("point `{name}` must be a two-element array"))),
        })
        .collect()
}

fn version_of(v: &Value) -> Result<Option<u64>> {
    match v.get("format_version") {
        None => Ok(None),
        Some(x) => x
            .as_u64()
            .map(Some)
            .ok_or_else(|| Error::Parse("format_version must be a non-negative integer".into())),
    }
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Parse(format!("missing field `{key}`")))
}

pub fn parse_embedding(text: &str) -> Result<Embedding> {
    let v: Value = serde_json::from_str(text)?;
    check_version(version_of(&v)?)?;
    embedding_from_points(field(&v, "points")?)
}

pub fn embedding_to_json(emb: &Embedding) -> String {
    pretty(&json!({ "format_version": FORMAT_VERSION, "points": embedding_value(emb) }))
}

// ---------------------------------------------------------------------------
// Constraint sets

#[derive(Deserialize)]
struct ConstraintFile {
    #[serde(default)]
    format_version: Option<u64>,
    universe: Vec<String>,
    constraints: Vec<(String, String, String, String)>,
}

fn parse_orientation(s: &str) -> Result<Orientation> {
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Orientation::from_letter(c).ok_or(Error::UnknownDirection(c)),
        _ => Err(Error::Parse(format!("orientation `{s}` must be one of L, R, C"))),
    }
}

fn constraints_from_value(v: Value) -> Result<RawConstraints> {
    let file: ConstraintFile = serde_json::from_value(v)?;
    check_version(file.format_version)?;
    let entries = file
        .constraints
        .into_iter()
        .map(|(a, b, c, o)| Ok(([a, b, c], parse_orientation(&o)?)))
        .collect::<Result<_>>()?;
    Ok(RawConstraints { universe: file.universe, entries })
}

/// Reads a constraint file. The result is not canonicalized yet, so
/// inconsistencies surface where the caller can report a witness.
pub fn parse_constraints(text: &str) -> Result<RawConstraints> {
    constraints_from_value(serde_json::from_str(text)?)
}

pub fn raw_constraints_to_json(raw: &RawConstraints) -> String {
    let rows: Vec<Value> = raw
        .entries
        .iter()
        .map(|(t, o)| json!([t[0], t[1], t[2], o.letter().to_string()]))
        .collect();
    pretty(&json!({ "format_version": FORMAT_VERSION, "universe": raw.universe, "constraints": rows }))
}

pub fn constraints_to_json(cs: &ConstraintSet) -> String {
    raw_constraints_to_json(&cs.to_raw())
}

/// A file holding either a walk or a constraint set, read as constraints.
pub fn parse_problem(text: &str) -> Result<RawConstraints> {
    let v: Value = serde_json::from_str(text)?;
    if v.get("walk").is_some() {
        Ok(walk_constraints(&walk_from_value(v)?)?.to_raw())
    } else {
        constraints_from_value(v)
    }
}

// ---------------------------------------------------------------------------
// Graph collections

#[derive(Deserialize)]
struct GraphEntry {
    name: String,
    edges: Vec<(String, String)>,
}

#[derive(Deserialize)]
struct CollectionFile {
    #[serde(default)]
    format_version: Option<u64>,
    vertices: Vec<String>,
    graphs: Vec<GraphEntry>,
}

fn collection_from_value(v: Value) -> Result<GraphCollection> {
    let file: CollectionFile = serde_json::from_value(v)?;
    check_version(file.format_version)?;
    GraphCollection::new(file.vertices, file.graphs.into_iter().map(|g| (g.name, g.edges)).collect())
}

fn collection_value(c: &GraphCollection) -> serde_json::Map<String, Value> {
    let graphs: Vec<Value> = c
        .graphs()
        .iter()
        .map(|g| {
            let edges: Vec<Value> = g.edges.iter().map(|(a, b)| json!([a, b])).collect();
            json!({ "name": g.name, "edges": edges })
        })
        .collect();
    let mut m = serde_json::Map::new();
    m.insert("format_version".into(), json!(FORMAT_VERSION));
    m.insert("vertices".into(), json!(c.vertices()));
    m.insert("graphs".into(), Value::Array(graphs));
    m
}

pub fn parse_collection(text: &str) -> Result<GraphCollection> {
    collection_from_value(serde_json::from_str(text)?)
}

pub fn collection_to_json(c: &GraphCollection) -> String {
    pretty(&Value::Object(collection_value(c)))
}

// ---------------------------------------------------------------------------
// Reduction records
//
// Both records are determined by their input walk. Reading one rebuilds it
// from the walk and rejects the file if the stored tables disagree, so a
// hand-edited record cannot smuggle in a different construction.

pub const WALK_REDUCTION_KIND: &str = "walk-reduction";
pub const SGE_INSTANCE_KIND: &str = "sge-instance";

pub fn reduction_record_to_json(rec: &ReductionRecord) -> String {
    let gadgets: Vec<Value> = rec
        .gadgets
        .iter()
        .map(|g| json!({ "index": g.index, "beta": g.beta, "delta": g.delta, "xi": g.xi, "phi": g.phi, "psi": g.psi }))
        .collect();
    pretty(&json!({
        "format_version": FORMAT_VERSION,
        "kind": WALK_REDUCTION_KIND,
        "input": walk_value(&rec.input),
        "output": walk_value(&rec.output),
        "gadgets": gadgets,
        "seams": rec.seams,
    }))
}

fn expect_kind(v: &Value, kind: &str) -> Result<()> {
    match v.get("kind").and_then(Value::as_str) {
        Some(k) if k == kind => Ok(()),
        Some(k) => Err(Error::Parse(format!("expected a `{kind}` record, found `{k}`"))),
        None => Err(Error::Parse(format!("missing `kind` (expected `{kind}`)"))),
    }
}

pub fn parse_reduction_record(text: &str) -> Result<ReductionRecord> {
    let v: Value = serde_json::from_str(text)?;
    check_version(version_of(&v)?)?;
    expect_kind(&v, WALK_REDUCTION_KIND)?;
    let input = walk_from_value(field(&v, "input")?.clone())?;
    let rec = reduce_walk(&input)?;
    let stored = serde_json::from_str::<Value>(&reduction_record_to_json(&rec))?;
    for key in ["output", "gadgets", "seams"] {
        if field(&v, key)? != &stored[key] {
            return Err(Error::Parse(format!("record field `{key}` does not match its input walk")));
        }
    }
    Ok(rec)
}

fn sge_meta(rec: &SgeInstanceRecord) -> Value {
    let gadgets: Vec<Value> = rec
        .gadgets
        .iter()
        .map(|g| json!({ "index": g.index, "a": g.a, "b": g.b, "c": g.c, "d": g.d, "e": g.e, "f": g.f }))
        .collect();
    let f = &rec.frame;
    json!({
        "walk": walk_value(&rec.walk),
        "gadgets": gadgets,
        "primed_walk": rec.primed_walk,
        "frame": { "p": f.p, "p_prime": f.p_prime, "x": f.x, "y": f.y, "z": f.z },
    })
}

pub fn sge_record_to_json(rec: &SgeInstanceRecord) -> String {
    let mut m = collection_value(&rec.collection);
    m.insert("kind".into(), json!(SGE_INSTANCE_KIND));
    m.insert("meta".into(), sge_meta(rec));
    pretty(&Value::Object(m))
}

pub fn parse_sge_record(text: &str) -> Result<SgeInstanceRecord> {
    let v: Value = serde_json::from_str(text)?;
    check_version(version_of(&v)?)?;
    expect_kind(&v, SGE_INSTANCE_KIND)?;
    let meta = field(&v, "meta")?;
    let rec = build_sge_instance(&walk_from_value(field(meta, "walk")?.clone())?)?;
    if collection_from_value(v.clone())? != rec.collection {
        return Err(Error::Parse("graph collection does not match the walk in `meta`".into()));
    }
    if meta != &sge_meta(&rec) {
        return Err(Error::Parse("name tables in `meta` do not match its walk".into()));
    }
    Ok(rec)
}

// ---------------------------------------------------------------------------
// Search outcomes

pub fn outcome_value(out: &SearchOutcome) -> Value {
    let (verdict, certificate, embedding) = match &out.verdict {
        Verdict::Realized(emb) => ("realized", Value::Null, embedding_value(emb)),
        Verdict::Unrealizable(Certificate::Inconsistent(w)) => {
            let show = |(t, o): &([String; 3], Orientation)| json!([t[0], t[1], t[2], o.letter().to_string()]);
            let cert = json!({ "kind": "inconsistent", "first": show(&w.first), "second": show(&w.second) });
            ("unrealizable", cert, Value::Null)
        }
        Verdict::Unrealizable(Certificate::GridExhausted { grid }) => {
            ("unrealizable", json!({ "kind": "grid-exhausted", "grid": grid }), Value::Null)
        }
        Verdict::Unknown => ("unknown", Value::Null, Value::Null),
    };
    let s = &out.stats;
    json!({
        "format_version": FORMAT_VERSION,
        "verdict": verdict,
        "certificate": certificate,
        "points": embedding,
        "stats": {
            "iterations": s.iterations,
            "restarts_used": s.restarts_used,
            "best_energy": s.best_energy,
            "grid": s.grid,
        },
    })
}

pub fn outcome_to_json(out: &SearchOutcome) -> String {
    pretty(&outcome_value(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::canonicalize;
    use crate::geometry::rat;
    use crate::search::SearchStats;

    const FIG1_MIDDLE: &str = "u v^l y^r w^l x^l y^l u^l w^r v";

    #[test]
    fn walk_round_trip_and_errors() {
        let w = DirectionalWalk::from_notation(FIG1_MIDDLE).unwrap();
        let text = walk_to_json(&w);
        assert!(text.contains("\"format_version\": 1"));
        assert_eq!(parse_walk(&text).unwrap(), w);
        assert_eq!(parse_walk(r#"{"walk":["a","b","c"],"turns":"L"}"#).unwrap().turn_string(), "L");
        assert!(matches!(
            parse_walk(r#"{"walk":["a","b","c"],"turns":"X"}"#),
            Err(Error::UnknownDirection('X'))
        ));
        assert!(matches!(
            parse_walk(r#"{"format_version":2,"walk":["a","b","c"],"turns":"L"}"#),
            Err(Error::FormatVersion(2))
        ));
        assert!(matches!(parse_walk("{"), Err(Error::Json(_))));
    }

    #[test]
    fn embedding_accepts_decimals_exactly() {
        let emb = parse_embedding(r#"{"points":{"a":["1/3","-0.25"],"b":[0.1, 2]}}"#).unwrap();
        assert_eq!(emb.get("a").unwrap(), &Point::new(rat(1, 3), rat(-1, 4)));
        assert_eq!(emb.get("b").unwrap(), &Point::new(rat(1, 10), rat(2, 1)));
        let back = parse_embedding(&embedding_to_json(&emb)).unwrap();
        assert_eq!(back, emb);
        assert!(embedding_to_json(&emb).contains("\"1/3\""));
        assert!(matches!(parse_embedding(r#"{"points":{"a":["1"]}}"#), Err(Error::Parse(_))));
        assert!(matches!(parse_embedding(r#"{"points":{"a":["1/0","1"]}}"#), Err(Error::Parse(_))));
    }

    #[test]
    fn constraints_round_trip() {
        let text = r#"{"universe":["a","b","c","d"],"constraints":[["a","b","c","L"],["b","c","d","R"],["a","b","d","C"]]}"#;
        let raw = parse_constraints(text).unwrap();
        assert_eq!(raw.entries.len(), 3);
        let cs = canonicalize(&raw).unwrap();
        let again = canonicalize(&parse_constraints(&constraints_to_json(&cs)).unwrap()).unwrap();
        assert_eq!(again, cs);
        assert!(parse_constraints(r#"{"universe":["a"],"constraints":[["a","b","c","LL"]]}"#).is_err());
    }

    #[test]
    fn problem_file_may_be_a_walk() {
        let w = DirectionalWalk::from_notation(FIG1_MIDDLE).unwrap();
        let raw = parse_problem(&walk_to_json(&w)).unwrap();
        assert_eq!(canonicalize(&raw).unwrap(), walk_constraints(&w).unwrap());
    }

    #[test]
    fn collection_round_trip() {
        let text = r#"{"vertices":["a","b","c"],"graphs":[{"name":"g","edges":[["a","b"],["b","c"]]}]}"#;
        let c = parse_collection(text).unwrap();
        assert_eq!(parse_collection(&collection_to_json(&c)).unwrap(), c);
        let bad = r#"{"vertices":["a","b"],"graphs":[{"name":"g","edges":[["a","z"]]}]}"#;
        assert!(matches!(parse_collection(bad), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn records_round_trip_and_reject_edits() {
        let w = DirectionalWalk::from_notation("a b^l c^r d").unwrap();
        let rec = reduce_walk(&w).unwrap();
        let text = reduction_record_to_json(&rec);
        assert_eq!(parse_reduction_record(&text).unwrap(), rec);
        let tampered = text.replacen("\"beta.1\"", "\"beta.9\"", 1);
        assert!(matches!(parse_reduction_record(&tampered), Err(Error::Parse(_))));
        assert!(matches!(parse_sge_record(&text), Err(Error::Parse(_))));

        let sge = build_sge_instance(&w).unwrap();
        let text = sge_record_to_json(&sge);
        assert_eq!(parse_sge_record(&text).unwrap(), sge);
        // the file is also a plain collection file
        assert_eq!(parse_collection(&text).unwrap(), sge.collection);
    }

    #[test]
    fn outcome_serialization() {
        let out = SearchOutcome { verdict: Verdict::Unknown, stats: SearchStats::default() };
        let v = outcome_value(&out);
        assert_eq!(v["verdict"], "unknown");
        assert_eq!(v["format_version"], 1);
        let out = SearchOutcome {
            verdict: Verdict::Unrealizable(Certificate::GridExhausted { grid: 4 }),
            stats: SearchStats::default(),
        };
        assert_eq!(outcome_value(&out)["certificate"]["grid"], 4);
    }
}
