//! The four moves that build new actions out of old ones: pairwise
//! compatibility across two orbits, full compatibility across free orbits,
//! self compatibility, and toral addition/subtraction.
//!
//! Site indices are 1-based positions into each operand's pair list as
//! stored. Results list the surviving pairs of the left operand first, then
//! those of the right operand, each in their original order.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::{ConePair, DataSet, DataSetError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(usize, usize)", into = "(usize, usize)")]
pub struct CompatSite {
    pub left: usize,
    pub right: usize,
}

impl CompatSite {
    /// `(0, 0)`: glue along orbits of size `n`.
    pub const FULL: CompatSite = CompatSite { left: 0, right: 0 };

    pub const fn new(left: usize, right: usize) -> Self {
        CompatSite { left, right }
    }

    pub fn is_full(&self) -> bool {
        self.left == 0 && self.right == 0
    }

    pub fn is_well_formed(&self) -> bool {
        self.is_full() || (self.left >= 1 && self.right >= 1)
    }
}

impl From<(usize, usize)> for CompatSite {
    fn from((l, r): (usize, usize)) -> Self {
        CompatSite::new(l, r)
    }
}

impl From<CompatSite> for (usize, usize) {
    fn from(s: CompatSite) -> Self {
        (s.left, s.right)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompatError {
    #[error("order mismatch: {0} vs {1}")]
    OrderMismatch(i64, i64),
    #[error("sites {site:?} are not compatible: {left} and {right}")]
    IncompatibleSites {
        site: (usize, usize),
        left: ConePair,
        right: ConePair,
    },
    #[error("site index {index} out of range for {len} cone pairs")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("malformed site {0:?}")]
    MalformedSite((usize, usize)),
    #[error("self compatibility needs at least 4 cone points, found {0}")]
    TooFewConePoints(usize),
    #[error("cannot remove {requested} handles from quotient genus {available}")]
    InsufficientOrbifoldGenus { requested: i64, available: i64 },
    #[error("composition does not yield a data set: {0}")]
    InvalidResult(DataSetError),
    #[error("genus bookkeeping failed: expected {expected}, Riemann-Hurwitz gives {actual}")]
    Bookkeeping { expected: i64, actual: i64 },
}

/// Outcome of a composition move.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositionResult {
    pub result: DataSet,
    /// `A(D)`: the genus increment beyond the operands (`1 + g - g1 - g2` for
    /// two operands, `g - g1` for one).
    pub amalgam: i64,
    /// Size of the orbit along which the gluing happened.
    pub curves_glued: i64,
    pub operand_genera: Vec<i64>,
}

fn pick(d: &DataSet, index: usize) -> Result<ConePair, CompatError> {
    if index == 0 || index > d.cone_count() {
        return Err(CompatError::IndexOutOfRange {
            index,
            len: d.cone_count(),
        });
    }
    Ok(d.pairs()[index - 1])
}

fn without<'a>(d: &'a DataSet, skip: &[usize]) -> impl Iterator<Item = ConePair> + 'a {
    let skip = skip.to_vec();
    d.pairs()
        .iter()
        .enumerate()
        .filter(move |(i, _)| !skip.contains(&(i + 1)))
        .map(|(_, &p)| p)
}

fn build(n: i64, g0: i64, rot: i64, pairs: Vec<ConePair>, expected_genus: i64) -> Result<DataSet, CompatError> {
    let d = DataSet::new(n, g0, rot, pairs).map_err(CompatError::InvalidResult)?;
    if d.genus() != expected_genus {
        return Err(CompatError::Bookkeeping {
            expected: expected_genus,
            actual: d.genus(),
        });
    }
    Ok(d)
}

/// `<<D1, D2, (r, s)>>`; a `(0, 0)` site means full compatibility.
pub fn compose_pair(d1: &DataSet, d2: &DataSet, site: CompatSite) -> Result<CompositionResult, CompatError> {
    if site.is_full() {
        return compose_full(d1, d2);
    }
    if !site.is_well_formed() {
        return Err(CompatError::MalformedSite(site.into()));
    }
    let n = d1.n();
    if d2.n() != n {
        return Err(CompatError::OrderMismatch(n, d2.n()));
    }
    let left = pick(d1, site.left)?;
    let right = pick(d2, site.right)?;
    if !left.is_complementary(&right) {
        return Err(CompatError::IncompatibleSites {
            site: site.into(),
            left,
            right,
        });
    }
    let amalgam = n / left.m;
    let pairs = without(d1, &[site.left]).chain(without(d2, &[site.right])).collect();
    let result = build(n, d1.g0() + d2.g0(), 0, pairs, d1.genus() + d2.genus() + amalgam - 1)?;
    Ok(CompositionResult {
        result,
        amalgam,
        curves_glued: amalgam,
        operand_genera: vec![d1.genus(), d2.genus()],
    })
}

/// `<<D1, D2>>`: glue along free orbits of size `n`.
pub fn compose_full(d1: &DataSet, d2: &DataSet) -> Result<CompositionResult, CompatError> {
    let n = d1.n();
    if d2.n() != n {
        return Err(CompatError::OrderMismatch(n, d2.n()));
    }
    let pairs = d1.pairs().iter().chain(d2.pairs()).copied().collect();
    let result = build(n, d1.g0() + d2.g0(), 0, pairs, d1.genus() + d2.genus() + n - 1)?;
    Ok(CompositionResult {
        result,
        amalgam: n - 1,
        curves_glued: n,
        operand_genera: vec![d1.genus(), d2.genus()],
    })
}

/// `<D, (r, s)>`: glue two compatible orbits of the same action.
pub fn compose_self(d: &DataSet, r: usize, s: usize) -> Result<CompositionResult, CompatError> {
    if d.cone_count() < 4 {
        return Err(CompatError::TooFewConePoints(d.cone_count()));
    }
    if r == 0 || r >= s {
        return Err(CompatError::MalformedSite((r, s)));
    }
    let left = pick(d, r)?;
    let right = pick(d, s)?;
    if !left.is_complementary(&right) {
        return Err(CompatError::IncompatibleSites {
            site: (r, s),
            left,
            right,
        });
    }
    let amalgam = d.n() / left.m;
    let result = build(d.n(), d.g0() + 1, 0, without(d, &[r, s]).collect(), d.genus() + amalgam)?;
    Ok(CompositionResult {
        result,
        amalgam,
        curves_glued: amalgam,
        operand_genera: vec![d.genus()],
    })
}

/// Self compatibility of a sphere rotation `(n, g0; (s,n), (n-s,n))` with
/// itself: the two fixed points are glued and a free rotation `(n, g0+1, s;)`
/// results.
pub fn close_rotation(d: &DataSet) -> Result<CompositionResult, CompatError> {
    let n = d.n();
    let [a, b] = d.pairs() else {
        return Err(CompatError::TooFewConePoints(d.cone_count()));
    };
    if a.m != n || !a.is_complementary(b) {
        return Err(CompatError::IncompatibleSites {
            site: (1, 2),
            left: *a,
            right: *b,
        });
    }
    let result = build(n, d.g0() + 1, a.c, Vec::new(), d.genus() + 1)?;
    Ok(CompositionResult {
        result,
        amalgam: 1,
        curves_glued: 1,
        operand_genera: vec![d.genus()],
    })
}

/// `<D, k>`: attach `n` cyclically permuted copies of `S_{k,1}`.
pub fn toral_add(d: &DataSet, k: i64) -> Result<DataSet, CompatError> {
    if k == 0 {
        return Ok(d.clone());
    }
    build(d.n(), d.g0() + k, d.rot(), d.pairs().to_vec(), d.genus() + d.n() * k)
}

/// Inverse of [`toral_add`].
pub fn toral_subtract(d: &DataSet, k: i64) -> Result<DataSet, CompatError> {
    if k == 0 {
        return Ok(d.clone());
    }
    if d.g0() < k {
        return Err(CompatError::InsufficientOrbifoldGenus {
            requested: k,
            available: d.g0(),
        });
    }
    build(d.n(), d.g0() - k, d.rot(), d.pairs().to_vec(), d.genus() - d.n() * k)
}

/// One step of a composition script. A step carrying `left` restarts the
/// accumulator from that data set; otherwise it acts on the running result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Move {
    Pair {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        left: Option<DataSet>,
        with: DataSet,
        site: CompatSite,
    },
    Full {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        left: Option<DataSet>,
        with: DataSet,
    },
    #[serde(rename = "self")]
    SelfPair {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        left: Option<DataSet>,
        site: CompatSite,
    },
    Add {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        left: Option<DataSet>,
        g: i64,
    },
    Sub {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        left: Option<DataSet>,
        g: i64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub step: usize,
    pub op: String,
    pub genus: i64,
    pub dataset: DataSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptOutcome {
    pub trace: Vec<TraceEntry>,
    pub result: DataSet,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScriptError {
    #[error("script is empty")]
    Empty,
    #[error("step {0} has no data set to act on")]
    NoAccumulator(usize),
    #[error("step {step}: {source}")]
    Step { step: usize, source: CompatError },
}

pub fn run_script(moves: &[Move]) -> Result<ScriptOutcome, ScriptError> {
    if moves.is_empty() {
        return Err(ScriptError::Empty);
    }
    let mut acc: Option<DataSet> = None;
    let mut trace = Vec::new();
    for (step, mv) in moves.iter().enumerate() {
        let start = match mv {
            Move::Pair { left, .. }
            | Move::Full { left, .. }
            | Move::SelfPair { left, .. }
            | Move::Add { left, .. }
            | Move::Sub { left, .. } => left.clone().or_else(|| acc.clone()),
        };
        let cur = start.ok_or(ScriptError::NoAccumulator(step))?;
        let wrap = |source| ScriptError::Step { step, source };
        let (op, next) = match mv {
            Move::Pair { with, site, .. } => ("pair", compose_pair(&cur, with, *site).map_err(wrap)?.result),
            Move::Full { with, .. } => ("full", compose_full(&cur, with).map_err(wrap)?.result),
            Move::SelfPair { site, .. } => ("self", compose_self(&cur, site.left, site.right).map_err(wrap)?.result),
            Move::Add { g, .. } => ("add", toral_add(&cur, *g).map_err(wrap)?),
            Move::Sub { g, .. } => ("sub", toral_subtract(&cur, *g).map_err(wrap)?),
        };
        trace.push(TraceEntry {
            step,
            op: op.to_string(),
            genus: next.genus(),
            dataset: next.clone(),
        });
        acc = Some(next);
    }
    let result = acc.expect("non-empty script").canonicalize();
    Ok(ScriptOutcome { trace, result })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn pair_composition_of_first_two_beads() {
        let [d1, d2, ..] = fixtures::example_beads();
        let out = compose_pair(&d1, &d2, CompatSite::new(3, 3)).unwrap();
        assert_eq!(
            out.result,
            DataSet::with_pairs(42, 0, &[(2, 21), (19, 42), (5, 6), (13, 21)]).unwrap()
        );
        assert_eq!(out.result.genus(), 37);
        assert_eq!(out.amalgam, 1);
    }

    #[test]
    fn period_21_link_has_amalgam_two() {
        let b = fixtures::example_beads();
        let out = compose_pair(&b[3], &b[4], CompatSite::new(2, 2)).unwrap();
        assert_eq!(out.amalgam, 2);
        assert_eq!(out.result.genus(), b[3].genus() + b[4].genus() + 1);
    }

    #[test]
    fn full_composition() {
        let h = DataSet::with_pairs(2, 0, &[(1, 2); 6]).unwrap();
        let out = compose_full(&h, &h).unwrap();
        assert_eq!(out.result.genus(), 5);
        assert_eq!(out.result.cone_count(), 12);
        assert_eq!((out.amalgam, out.curves_glued), (1, 2));
        let four = DataSet::with_pairs(4, 0, &[(1, 2), (1, 2), (1, 4), (3, 4)]).unwrap();
        assert_eq!(compose_full(&h, &four), Err(CompatError::OrderMismatch(2, 4)));
    }

    #[test]
    fn incompatible_sites() {
        let [d1, d2, ..] = fixtures::example_beads();
        assert!(matches!(
            compose_pair(&d1, &d2, CompatSite::new(1, 1)),
            Err(CompatError::IncompatibleSites { .. })
        ));
        assert!(matches!(
            compose_pair(&d1, &d2, CompatSite::new(4, 1)),
            Err(CompatError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn self_compatibilities_on_the_chain() {
        let dp = fixtures::example_chain_result();
        let a = compose_self(&dp, 2, 4).unwrap();
        assert_eq!(a.result.genus(), dp.genus() + 1);
        let removed: Vec<_> = [2usize, 4].iter().map(|&i| dp.pairs()[i - 1]).collect();
        assert_eq!(removed, vec![ConePair::new(19, 42), ConePair::new(23, 42)]);
        let b = compose_self(&dp, 5, 8).unwrap();
        assert_eq!(b.result.genus(), dp.genus() + 3);
        let d3 = DataSet::with_pairs(6, 0, &[(2, 3), (1, 6), (1, 6)]).unwrap();
        assert_eq!(compose_self(&d3, 1, 2), Err(CompatError::TooFewConePoints(3)));
    }

    #[test]
    fn toral_moves() {
        let d = DataSet::with_pairs(42, 1, &[(5, 6), (1, 6)]).unwrap();
        let up = toral_add(&d, 3).unwrap();
        assert_eq!(up, DataSet::with_pairs(42, 4, &[(5, 6), (1, 6)]).unwrap());
        assert_eq!(up.genus(), 162);
        assert_eq!(toral_subtract(&up, 3).unwrap(), d);
        assert_eq!(toral_add(&d, 0).unwrap(), d);
        assert_eq!(toral_subtract(&d, 0).unwrap(), d);
        let h = DataSet::with_pairs(2, 0, &[(1, 2); 6]).unwrap();
        assert_eq!(toral_add(&h, 1).unwrap().genus(), 4);
        let g2 = DataSet::with_pairs(4, 0, &[(1, 2), (1, 2), (1, 4), (3, 4)]).unwrap();
        assert_eq!(
            toral_subtract(&g2, 1),
            Err(CompatError::InsufficientOrbifoldGenus {
                requested: 1,
                available: 0
            })
        );
    }

    #[test]
    fn closing_a_sphere_rotation() {
        let d = DataSet::with_pairs(5, 0, &[(2, 5), (3, 5)]).unwrap();
        let out = close_rotation(&d).unwrap();
        assert_eq!(out.result, DataSet::free(5, 1, 2).unwrap());
    }

    #[test]
    fn script_runs_and_traces() {
        let b = fixtures::example_beads();
        let moves = vec![
            Move::Pair {
                left: Some(b[0].clone()),
                with: b[1].clone(),
                site: CompatSite::new(3, 3),
            },
            Move::Add { left: None, g: 2 },
            Move::Sub { left: None, g: 1 },
        ];
        let out = run_script(&moves).unwrap();
        let genera: Vec<i64> = out.trace.iter().map(|t| t.genus).collect();
        assert_eq!(genera, vec![37, 37 + 84, 37 + 42]);
        assert!(out.result.is_canonical());
        let json = serde_json::to_string(&moves).unwrap();
        let back: Vec<Move> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, moves);
        assert_eq!(
            run_script(&[Move::Add { left: None, g: 1 }]),
            Err(ScriptError::NoAccumulator(0))
        );
    }
}
