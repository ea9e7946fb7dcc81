//! Directional walks: a vertex sequence `u_1..u_t` with a prescribed left or
//! right turn at every inner position.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use crate::constraints::{canonicalize, verify, ConstraintSet, RawConstraints, Report};
use crate::error::{Error, Result};
use crate::geometry::{orient, Embedding, Orientation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectionalWalk {
    sequence: Vec<String>,
    turns: Vec<Orientation>,
}

impl DirectionalWalk {
    /// Validates consecutive distinctness and the turn-list length.
    pub fn new(sequence: Vec<String>, turns: Vec<Orientation>) -> Result<Self> {
        let expected = sequence.len().saturating_sub(2);
        if turns.len() != expected {
            return Err(Error::LengthMismatch { expected, found: turns.len() });
        }
        if turns.contains(&Orientation::Collinear) {
            return Err(Error::UnknownDirection('C'));
        }
        if let Some(i) = sequence.windows(2).position(|w| w[0] == w[1]) {
            return Err(Error::ConsecutiveDuplicate { position: i + 1, vertex: sequence[i].clone() });
        }
        Ok(DirectionalWalk { sequence, turns })
    }

    /// Builds a walk from a turn string over `{L, R}`.
    pub fn from_turn_string(sequence: Vec<String>, turns: &str) -> Result<Self> {
        let turns = turns
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                'L' | 'l' => Ok(Orientation::Left),
                'R' | 'r' => Ok(Orientation::Right),
                other => Err(Error::UnknownDirection(other)),
            })
            .collect::<Result<Vec<_>>>()?;
        DirectionalWalk::new(sequence, turns)
    }

    /// Parses the superscript notation `u v^l y^r w`, where the direction
    /// is attached to the vertex at which the walk turns.
    pub fn from_notation(text: &str) -> Result<Self> {
        let tokens: Vec<&str> = text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .collect();
        let mut sequence = Vec::with_capacity(tokens.len());
        let mut turns = String::new();
        for (i, token) in tokens.iter().enumerate() {
            let (name, dir) = match token.split_once('^') {
                Some((n, d)) => (n, Some(d)),
                None => (*token, None),
            };
            let inner = i > 0 && i + 1 < tokens.len();
            match (inner, dir) {
                (true, Some(d)) => turns.push_str(d),
                (true, None) => return Err(Error::Parse(format!("missing direction at `{token}`"))),
                (false, Some(_)) => {
                    return Err(Error::Parse(format!("endpoint `{token}` cannot carry a direction")))
                }
                (false, None) => {}
            }
            sequence.push(name.to_string());
        }
        DirectionalWalk::from_turn_string(sequence, &turns)
    }

    pub fn sequence(&self) -> &[String] {
        &self.sequence
    }

    pub fn turns(&self) -> &[Orientation] {
        &self.turns
    }

    /// Length `t`.
    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    pub fn turn_string(&self) -> String {
        self.turns.iter().map(|o| o.letter()).collect()
    }

    /// `V(W)` in order of first appearance.
    pub fn vertices(&self) -> Vec<String> {
        let mut seen = HashSet::new();
        self.sequence
            .iter()
            .filter(|v| seen.insert(v.as_str()))
            .cloned()
            .collect()
    }

    /// The inner triples `(u_i, u_{i+1}, u_{i+2})` with their directions.
    pub fn triples(&self) -> impl Iterator<Item = ([&str; 3], Orientation)> + '_ {
        self.sequence
            .windows(3)
            .zip(&self.turns)
            .map(|(w, d)| ([w[0].as_str(), w[1].as_str(), w[2].as_str()], *d))
    }

    /// Edges as unordered pairs, in walk order.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.sequence.windows(2).map(|w| unordered(&w[0], &w[1]))
    }
}

impl fmt::Display for DirectionalWalk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.sequence.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
            if i > 0 && i + 1 < self.sequence.len() {
                write!(f, "^{}", self.turns[i - 1].letter().to_ascii_lowercase())?;
            }
        }
        Ok(())
    }
}

pub(crate) fn unordered<'a>(a: &'a str, b: &'a str) -> (&'a str, &'a str) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkStats {
    pub length: usize,
    pub vertex_count: usize,
    /// `t - 1`, counted with multiplicity
    pub edge_count: usize,
    /// distinct unordered edges occurring more than once
    pub repeated_edges: usize,
    pub max_multiplicity: usize,
}

pub fn walk_stats(w: &DirectionalWalk) -> WalkStats {
    let mut multiplicity: BTreeMap<(&str, &str), usize> = BTreeMap::new();
    for e in w.edges() {
        *multiplicity.entry(e).or_default() += 1;
    }
    WalkStats {
        length: w.len(),
        vertex_count: w.vertices().len(),
        edge_count: w.len().saturating_sub(1),
        repeated_edges: multiplicity.values().filter(|&&m| m > 1).count(),
        max_multiplicity: multiplicity.values().copied().max().unwrap_or(0),
    }
}

/// Multiplicity of every unordered edge.
pub fn edge_multiplicities(w: &DirectionalWalk) -> BTreeMap<(String, String), usize> {
    let mut out = BTreeMap::new();
    for (a, b) in w.edges() {
        *out.entry((a.to_string(), b.to_string())).or_default() += 1;
    }
    out
}

/// The partial order type `χ(u_i, u_{i+1}, u_{i+2}) = d(i)`, canonicalized.
pub fn walk_constraints(w: &DirectionalWalk) -> Result<ConstraintSet> {
    let mut entries = Vec::with_capacity(w.turns.len());
    for (i, (t, d)) in w.triples().enumerate() {
        if t[0] == t[2] {
            return Err(Error::DegenerateTurn { position: i + 1, vertex: t[0].to_string() });
        }
        entries.push((t.map(str::to_string), d));
    }
    canonicalize(&RawConstraints { universe: w.vertices(), entries })
}

fn check_embedded(w: &DirectionalWalk, emb: &Embedding) -> Result<()> {
    for v in &w.sequence {
        emb.get(v)?;
    }
    Ok(())
}

/// Violations of the walk's constraint set; empty iff `emb` realizes `w`.
pub fn verify_walk_realization(w: &DirectionalWalk, emb: &Embedding) -> Result<Report> {
    check_embedded(w, emb)?;
    verify(&walk_constraints(w)?, emb)
}

/// 1-based indices `i` of turns `d(i)` that `emb` does not realize.
pub fn failing_turns(w: &DirectionalWalk, emb: &Embedding) -> Result<Vec<usize>> {
    check_embedded(w, emb)?;
    let mut out = Vec::new();
    for (i, (t, d)) in w.triples().enumerate() {
        let [a, b, c] = t.map(|n| emb.get(n).expect("checked"));
        if orient(a, b, c) != d {
            out.push(i + 1);
        }
    }
    Ok(out)
}
