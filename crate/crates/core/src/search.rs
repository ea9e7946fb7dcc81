//! Realizability search.
//!
//! Nothing here decides realizability in general. A realized verdict always
//! carries an embedding that passed [`constraints::verify`] exactly, and the
//! only negative verdicts are closure inconsistency and exhaustion of a
//! finite grid.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::constraints::{self, canonicalize, ConstraintSet, RawConstraints, Witness};
use crate::error::{Error, Result};
use crate::geometry::{is_general_position, orient, to_f64, Embedding, Orientation, Point, Rational};
use crate::walk::DirectionalWalk;

#[derive(Clone, Debug, PartialEq)]
pub struct SearchParams {
    pub seed: u64,
    pub restarts: usize,
    pub iterations: usize,
    pub initial_temperature: f64,
    /// Geometric decay applied to the temperature after every move.
    pub cooling: f64,
    pub margin: Rational,
    pub grid: usize,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            seed: 0,
            restarts: 20,
            iterations: 50_000,
            initial_temperature: 1.0,
            cooling: 0.995,
            margin: Rational::one(),
            grid: 8,
        }
    }
}

impl SearchParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidParameter(what.to_string()));
        if self.restarts == 0 {
            return bad("restarts must be positive");
        }
        if self.iterations == 0 {
            return bad("iterations must be positive");
        }
        if self.grid < 2 {
            return bad("grid size must be at least 2");
        }
        if !self.margin.is_positive() {
            return bad("margin must be positive");
        }
        if !(self.initial_temperature > 0.0 && self.initial_temperature.is_finite()) {
            return bad("initial temperature must be positive");
        }
        if !(self.cooling > 0.0 && self.cooling <= 1.0) {
            return bad("cooling factor must lie in (0, 1]");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    Inconsistent(Witness),
    /// No placement on the `grid`×`grid` integer grid works. Says nothing
    /// about the plane.
    GridExhausted { grid: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Realized(Embedding),
    Unrealizable(Certificate),
    Unknown,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SearchStats {
    /// Annealing moves performed, summed over the restarts that were used.
    pub iterations: u64,
    pub restarts_used: usize,
    pub best_energy: Option<f64>,
    /// Grid size the oracle was run at, if it ran.
    pub grid: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    pub verdict: Verdict,
    pub stats: SearchStats,
}

impl SearchOutcome {
    pub fn embedding(&self) -> Option<&Embedding> {
        match &self.verdict {
            Verdict::Realized(e) => Some(e),
            _ => None,
        }
    }
}

// ---------------------------------------------------------------------------
// Grid oracle

/// Soft cap on the universe size accepted by [`grid_oracle`].
pub const GRID_ORACLE_LIMIT: usize = 6;

#[derive(Clone, Debug, PartialEq)]
pub enum GridVerdict {
    Realizable(Embedding),
    GridUnrealizable { grid: usize },
}

/// Exhaustive search over injective placements on `{0..g-1}²`.
pub fn grid_oracle(cs: &ConstraintSet, g: usize) -> Result<GridVerdict> {
    grid_oracle_with_limit(cs, g, GRID_ORACLE_LIMIT)
}

pub fn grid_oracle_with_limit(cs: &ConstraintSet, g: usize, limit: usize) -> Result<GridVerdict> {
    let n = cs.universe().len();
    if n > limit {
        return Err(Error::UniverseTooLarge { size: n, limit });
    }
    if g < 2 {
        return Err(Error::InvalidParameter("grid size must be at least 2".into()));
    }
    if g * g < n {
        return Ok(GridVerdict::GridUnrealizable { grid: g });
    }
    let indexed = indexed_constraints(cs);
    let mut constrained = vec![false; n];
    for (t, _) in &indexed {
        for &v in t {
            constrained[v] = true;
        }
    }
    // Constrained vertices first, in universe order; the rest never fail.
    let order: Vec<usize> = (0..n).filter(|&v| constrained[v]).collect();
    let mut depth_of = vec![usize::MAX; n];
    for (d, &v) in order.iter().enumerate() {
        depth_of[v] = d;
    }
    let mut checks: Vec<Vec<([usize; 3], Orientation)>> = vec![Vec::new(); order.len()];
    for &(t, o) in &indexed {
        let d = t.iter().map(|&v| depth_of[v]).max().expect("three entries");
        checks[d].push((t, o));
    }

    let cells = g * g;
    let mut used = vec![false; cells];
    let mut pos: Vec<(i64, i64)> = vec![(0, 0); n];
    let mut cursor = vec![0usize; order.len()];
    let mut d = 0usize;
    let found = 'search: loop {
        if d == order.len() {
            break 'search true;
        }
        let v = order[d];
        let mut placed = false;
        while cursor[d] < cells {
            let cell = cursor[d];
            cursor[d] += 1;
            if used[cell] {
                continue;
            }
            pos[v] = ((cell / g) as i64, (cell % g) as i64);
            if checks[d].iter().all(|&(t, o)| orient_i64(pos[t[0]], pos[t[1]], pos[t[2]]) == o) {
                used[cell] = true;
                placed = true;
                break;
            }
        }
        if placed {
            d += 1;
            if d < order.len() {
                cursor[d] = 0;
            }
            continue;
        }
        // Exhausted this level: release the parent's cell and backtrack.
        if d == 0 {
            break 'search false;
        }
        d -= 1;
        let parent = cursor[d] - 1;
        used[parent] = false;
    };
    if !found {
        return Ok(GridVerdict::GridUnrealizable { grid: g });
    }
    let mut free = (0..cells).filter(|c| !used[*c]);
    for v in (0..n).filter(|&v| !constrained[v]) {
        let cell = free.next().expect("g² ≥ n");
        pos[v] = ((cell / g) as i64, (cell % g) as i64);
    }
    Ok(GridVerdict::Realizable(
        cs.universe()
            .iter()
            .zip(&pos)
            .map(|(name, &(x, y))| (name.clone(), Point::from_ints(x, y)))
            .collect(),
    ))
}

fn orient_i64(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> Orientation {
    let det = (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0);
    match det.signum() {
        1 => Orientation::Left,
        -1 => Orientation::Right,
        _ => Orientation::Collinear,
    }
}

fn indexed_constraints(cs: &ConstraintSet) -> Vec<([usize; 3], Orientation)> {
    cs.indexed().map(|(t, o)| (*t, *o)).collect()
}

// ---------------------------------------------------------------------------
// Energy

fn hinge(o: Orientation, area: f64, margin: f64) -> f64 {
    match o {
        Orientation::Left => (margin - area).max(0.0),
        Orientation::Right => (margin + area).max(0.0),
        Orientation::Collinear => area.abs(),
    }
}

fn doubled_area(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

/// Floating hinge energy of an approximate placement.
pub fn energy(cs: &ConstraintSet, placement: &BTreeMap<String, (f64, f64)>, margin: f64) -> Result<f64> {
    let mut total = 0.0;
    for (names, o) in cs.iter() {
        let get = |n: &str| placement.get(n).copied().ok_or_else(|| Error::MissingVertex(n.to_string()));
        total += hinge(o, doubled_area(get(names[0])?, get(names[1])?, get(names[2])?), margin);
    }
    Ok(total)
}

// ---------------------------------------------------------------------------
// Annealing

struct Problem {
    constraints: Vec<([usize; 3], Orientation)>,
    incident: Vec<Vec<usize>>,
    movable: Vec<usize>,
    margin: f64,
    scale: f64,
}

impl Problem {
    fn new(cs: &ConstraintSet, margin: f64) -> Self {
        let constraints = indexed_constraints(cs);
        let n = cs.universe().len();
        let mut incident = vec![Vec::new(); n];
        for (k, (t, _)) in constraints.iter().enumerate() {
            for &v in t {
                incident[v].push(k);
            }
        }
        let movable: Vec<usize> = (0..n).filter(|&v| !incident[v].is_empty()).collect();
        let scale = margin.sqrt() * (4.0 + 4.0 * (movable.len() as f64).sqrt());
        Problem { constraints, incident, movable, margin, scale }
    }

    fn term(&self, k: usize, pos: &[(f64, f64)]) -> f64 {
        let ([a, b, c], o) = self.constraints[k];
        hinge(o, doubled_area(pos[a], pos[b], pos[c]), self.margin)
    }
}

struct RestartResult {
    iterations: u64,
    best_energy: f64,
    embedding: Option<Embedding>,
}

fn restart_seed(seed: u64, restart: usize) -> u64 {
    seed ^ (restart as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn run_restart(cs: &ConstraintSet, problem: &Problem, params: &SearchParams, restart: usize) -> RestartResult {
    let mut rng = ChaCha8Rng::seed_from_u64(restart_seed(params.seed, restart));
    let n = cs.universe().len();
    let s = problem.scale;
    let mut pos: Vec<(f64, f64)> = (0..n).map(|_| (rng.random_range(-s..s), rng.random_range(-s..s))).collect();
    let mut terms: Vec<f64> = (0..problem.constraints.len()).map(|k| problem.term(k, &pos)).collect();
    let mut current: f64 = terms.iter().sum();
    let mut best = current;
    let unit = Normal::new(0.0, 1.0).expect("valid normal");
    let mut temperature = params.initial_temperature;
    let mut iterations = 0u64;
    let mut scratch = Vec::new();

    while current > 0.0 && (iterations as usize) < params.iterations {
        iterations += 1;
        let v = problem.movable[rng.random_range(0..problem.movable.len())];
        let sigma = s * (0.01 + 0.25 * temperature / params.initial_temperature);
        let old = pos[v];
        pos[v] = (old.0 + sigma * unit.sample(&mut rng), old.1 + sigma * unit.sample(&mut rng));
        scratch.clear();
        let mut delta = 0.0;
        for &k in &problem.incident[v] {
            let t = problem.term(k, &pos);
            delta += t - terms[k];
            scratch.push(t);
        }
        let accept = delta <= 0.0 || (temperature > 1e-300 && rng.random::<f64>() < (-delta / temperature).exp());
        if accept {
            for (&k, &t) in problem.incident[v].iter().zip(&scratch) {
                terms[k] = t;
            }
            current += delta;
            // Accumulated drift is reset whenever a move looks decisive.
            if current <= 1e-9 {
                current = terms.iter().sum();
            }
            best = best.min(current);
        } else {
            pos[v] = old;
        }
        temperature *= params.cooling;
    }
    let embedding = (current <= 0.0).then(|| rationalize(cs, &pos)).flatten();
    RestartResult { iterations, best_energy: best.max(0.0), embedding }
}

/// Snaps to dyadic rationals of increasing precision until exact
/// verification passes.
fn rationalize(cs: &ConstraintSet, pos: &[(f64, f64)]) -> Option<Embedding> {
    for k in 0..=52u32 {
        let scale = (k as f64).exp2();
        let snapped: Option<Vec<(i64, i64)>> = pos
            .iter()
            .map(|&(x, y)| {
                let (sx, sy) = ((x * scale).round(), (y * scale).round());
                (sx.abs() < 9.0e15 && sy.abs() < 9.0e15).then_some((sx as i64, sy as i64))
            })
            .collect();
        let snapped = snapped?;
        let den = BigInt::one() << k;
        let emb: Embedding = cs
            .universe()
            .iter()
            .zip(&snapped)
            .map(|(name, &(x, y))| {
                let p = Point::new(
                    Rational::new(BigInt::from(x), den.clone()),
                    Rational::new(BigInt::from(y), den.clone()),
                );
                (name.clone(), p)
            })
            .collect();
        if constraints::verify(cs, &emb).map(|r| r.is_empty()).unwrap_or(false) {
            return Some(emb);
        }
    }
    None
}

/// Simulated annealing with exact certification.
///
/// Restarts run in parallel batches; the lowest-index restart that certifies
/// wins, and statistics only count restarts up to the winner, so the outcome
/// does not depend on the thread count.
pub fn anneal(cs: &ConstraintSet, params: &SearchParams) -> Result<SearchOutcome> {
    params.validate()?;
    if cs.is_empty() {
        let emb = rationalize(cs, &vec![(0.0, 0.0); cs.universe().len()]).expect("no constraints");
        return Ok(SearchOutcome {
            verdict: Verdict::Realized(emb),
            stats: SearchStats { best_energy: Some(0.0), ..Default::default() },
        });
    }
    let problem = Problem::new(cs, to_f64(&params.margin));
    let batch = rayon::current_num_threads().max(1);
    let mut stats = SearchStats::default();
    let mut start = 0;
    while start < params.restarts {
        let end = (start + batch).min(params.restarts);
        let results: Vec<RestartResult> =
            (start..end).into_par_iter().map(|r| run_restart(cs, &problem, params, r)).collect();
        for result in results {
            stats.iterations += result.iterations;
            stats.restarts_used += 1;
            stats.best_energy = Some(stats.best_energy.map_or(result.best_energy, |b| b.min(result.best_energy)));
            if let Some(emb) = result.embedding {
                return Ok(SearchOutcome { verdict: Verdict::Realized(emb), stats });
            }
        }
        start = end;
    }
    Ok(SearchOutcome { verdict: Verdict::Unknown, stats })
}

/// [`anneal`] on unvalidated input: an inconsistent closure is reported as
/// unrealizable without running any iterations.
pub fn anneal_raw(raw: &RawConstraints, params: &SearchParams) -> Result<SearchOutcome> {
    match canonicalize(raw) {
        Ok(cs) => anneal(&cs, params),
        Err(Error::Inconsistent(w)) => Ok(inconsistent_outcome(*w)),
        Err(e) => Err(e),
    }
}

fn inconsistent_outcome(w: Witness) -> SearchOutcome {
    SearchOutcome {
        verdict: Verdict::Unrealizable(Certificate::Inconsistent(w)),
        stats: SearchStats::default(),
    }
}

/// The full pipeline: closure, grid oracle when the universe is small, then
/// annealing.
pub fn solve(raw: &RawConstraints, params: &SearchParams) -> Result<SearchOutcome> {
    params.validate()?;
    let cs = match canonicalize(raw) {
        Ok(cs) => cs,
        Err(Error::Inconsistent(w)) => return Ok(inconsistent_outcome(*w)),
        Err(e) => return Err(e),
    };
    let mut grid_exhausted = false;
    if cs.universe().len() <= GRID_ORACLE_LIMIT {
        match grid_oracle(&cs, params.grid)? {
            GridVerdict::Realizable(emb) => {
                return Ok(SearchOutcome {
                    verdict: Verdict::Realized(emb),
                    stats: SearchStats { grid: Some(params.grid), ..Default::default() },
                })
            }
            GridVerdict::GridUnrealizable { .. } => grid_exhausted = true,
        }
    }
    let mut outcome = anneal(&cs, params)?;
    if grid_exhausted {
        outcome.stats.grid = Some(params.grid);
        if outcome.verdict == Verdict::Unknown {
            outcome.verdict = Verdict::Unrealizable(Certificate::GridExhausted { grid: params.grid });
        }
    }
    Ok(outcome)
}

// ---------------------------------------------------------------------------
// Sampling

/// Side length of the integer grid [`sample_walk`] draws points from.
pub const SAMPLE_GRID: i64 = 1 << 20;
const SAMPLE_ATTEMPTS: usize = 1000;

/// Draws a walk together with an embedding that realizes it.
///
/// Points are `v0, v1, ...` on a large integer grid in general position; the
/// walk avoids `u_i = u_{i+1}` and `u_i = u_{i+2}` and each turn is read off
/// the points. With `forbid_repeated_edges` no undirected edge is used twice.
pub fn sample_walk(
    n_vertices: usize,
    t: usize,
    seed: u64,
    forbid_repeated_edges: bool,
) -> Result<(DirectionalWalk, Embedding)> {
    if n_vertices < 3 {
        return Err(Error::InvalidParameter("at least 3 vertices are needed".into()));
    }
    if t < 3 {
        return Err(Error::WalkTooShort(t));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names: Vec<String> = (0..n_vertices).map(|i| format!("v{i}")).collect();
    let emb = (0..SAMPLE_ATTEMPTS)
        .map(|_| {
            names
                .iter()
                .map(|n| {
                    let p = Point::from_ints(rng.random_range(0..SAMPLE_GRID), rng.random_range(0..SAMPLE_GRID));
                    (n.clone(), p)
                })
                .collect::<Embedding>()
        })
        .find(is_general_position)
        .ok_or_else(|| Error::RejectionBudgetExhausted("no generic point sample".into()))?;

    'attempt: for _ in 0..SAMPLE_ATTEMPTS {
        let first = rng.random_range(0..n_vertices);
        let mut second = rng.random_range(0..n_vertices - 1);
        if second >= first {
            second += 1;
        }
        let mut seq = vec![first, second];
        let mut edges: HashSet<(usize, usize)> = HashSet::new();
        edges.insert((first.min(second), first.max(second)));
        while seq.len() < t {
            let (prev, cur) = (seq[seq.len() - 2], seq[seq.len() - 1]);
            let options: Vec<usize> = (0..n_vertices)
                .filter(|&v| v != cur && v != prev)
                .filter(|&v| !forbid_repeated_edges || !edges.contains(&(v.min(cur), v.max(cur))))
                .collect();
            if options.is_empty() {
                continue 'attempt;
            }
            let next = options[rng.random_range(0..options.len())];
            edges.insert((next.min(cur), next.max(cur)));
            seq.push(next);
        }
        let point = |i: usize| emb.get(&names[i]).expect("sampled");
        let turns: Vec<Orientation> = seq.windows(3).map(|w| orient(point(w[0]), point(w[1]), point(w[2]))).collect();
        let walk = DirectionalWalk::new(seq.iter().map(|&i| names[i].clone()).collect(), turns)?;
        return Ok((walk, emb));
    }
    Err(Error::RejectionBudgetExhausted(format!(
        "no walk of length {t} over {n_vertices} vertices found"
    )))
}
