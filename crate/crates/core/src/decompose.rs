//! Necklaces realizing a given action.
//!
//! Rotations and actions whose spherical core is already a bead need one bead
//! plus handles. Everything else is built from Type 1 beads that each carry
//! one to three cone pairs of the action, topped up with auxiliary pairs.
//! Beads are joined along free orbits and the auxiliary pairs are cancelled
//! in complementary couples by self compatibilities.

use std::collections::{BTreeMap, HashMap, HashSet};

use thiserror::Error;

use crate::arith::{divisors, reduce, units};
use crate::compatibility::CompatSite;
use crate::dataset::{ActionClass, ConePair, DataSet, RotationalForm};
use crate::necklace::{LinearChain, Necklace, NecklaceError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecomposeError {
    #[error("{0} acts on a surface of genus below 2")]
    LowGenus(String),
    #[error("no bead arrangement found for {0}")]
    SearchExhausted(String),
    #[error("necklace for {target} realizes {got}")]
    Mismatch { target: String, got: String },
    #[error(transparent)]
    Necklace(#[from] NecklaceError),
}

pub fn decompose(d: &DataSet) -> Result<Necklace, DecomposeError> {
    if d.genus() < 2 {
        return Err(DecomposeError::LowGenus(d.to_string()));
    }
    let target = d.canonicalize();
    let necklace = build(&target)?;
    let got = necklace.realize()?.result;
    if got != target {
        return Err(DecomposeError::Mismatch {
            target: target.to_string(),
            got: got.to_string(),
        });
    }
    Ok(necklace)
}

fn build(d: &DataSet) -> Result<Necklace, DecomposeError> {
    let n = d.n();
    if n == 1 {
        let sphere = DataSet::new(1, 0, 0, Vec::new()).expect("identity on the sphere");
        return Ok(Necklace::new(LinearChain::new(vec![sphere], vec![]), vec![], d.g0(), 0));
    }
    if let ActionClass::Rotational(RotationalForm::Free { r }) = d.classify() {
        // close the rotation of the sphere about two fixed points, then add handles
        let bead = DataSet::with_pairs(n, 0, &[(r, n), (n - r, n)])
            .map_err(|_| DecomposeError::SearchExhausted(d.to_string()))?;
        let chain = LinearChain::new(vec![bead], vec![]);
        return Ok(Necklace::new(chain, vec![(1, 2)], d.g0() - 1, 0));
    }

    if let Ok(core) = DataSet::new(n, 0, 0, d.pairs().to_vec()) {
        let lone = Necklace::new(LinearChain::new(vec![core], vec![]), vec![], d.g0(), 0);
        if lone.realize().is_ok() {
            return Ok(lone);
        }
    }

    let payload = d.pairs().to_vec();
    if payload.is_empty() {
        return Err(DecomposeError::SearchExhausted(d.to_string()));
    }
    let mut remaining: Multiset = BTreeMap::new();
    for &p in &payload {
        *remaining.entry(p).or_default() += 1;
    }
    let mut search = Search {
        n,
        alphabet: divisors(n)
            .into_iter()
            .filter(|&m| m >= 2)
            .flat_map(|m| units(m).into_iter().map(move |c| ConePair::new(c, m)))
            .collect(),
        options: HashMap::new(),
        failed: HashSet::new(),
        chosen: Vec::new(),
    };
    let found = (0..=2).any(|fillers| search.run(&remaining, &BTreeMap::new(), fillers));
    if !found {
        return Err(DecomposeError::SearchExhausted(d.to_string()));
    }

    // full links keep every pair, so bead i occupies positions 3i+1..=3i+3 of D_T
    let mut beads = Vec::new();
    let mut open: BTreeMap<ConePair, Vec<usize>> = BTreeMap::new();
    let mut self_pairs = Vec::new();
    for (i, (group, aux)) in search.chosen.iter().enumerate() {
        let pairs: Vec<ConePair> = group.iter().chain(aux).copied().collect();
        beads.push(DataSet::new(n, 0, 0, pairs).expect("bead options are valid"));
        for (slot, &a) in aux.iter().enumerate() {
            let pos = 3 * i + group.len() + slot + 1;
            match open.get_mut(&complement(a)).and_then(Vec::pop) {
                Some(partner) => self_pairs.push((partner, pos)),
                None => open.entry(a).or_default().push(pos),
            }
        }
    }
    let k = beads.len();
    let m = self_pairs.len() as i64;
    let g0 = d.g0();
    let chain = LinearChain::new(beads, vec![CompatSite::FULL; k - 1]);
    Ok(Necklace::new(chain, self_pairs, (g0 - m).max(0), (m - g0).max(0)))
}

fn complement(p: ConePair) -> ConePair {
    ConePair::new(reduce(-p.c, p.m), p.m)
}

type Multiset = BTreeMap<ConePair, usize>;

fn add(set: &mut Multiset, p: ConePair) {
    *set.entry(p).or_default() += 1;
}

fn take(set: &mut Multiset, p: ConePair) -> bool {
    match set.get_mut(&p) {
        Some(c) => {
            *c -= 1;
            if *c == 0 {
                set.remove(&p);
            }
            true
        }
        None => false,
    }
}

/// Record an auxiliary pair: it cancels an outstanding complement if there is one.
fn apply(outstanding: &mut Multiset, aux: ConePair) {
    if !take(outstanding, complement(aux)) {
        add(outstanding, aux);
    }
}

fn flatten(set: &Multiset) -> Vec<(ConePair, usize)> {
    set.iter().map(|(&p, &c)| (p, c)).collect()
}

/// Remaining payload, pending auxiliary pairs and beads left.
type SearchState = (Vec<(ConePair, usize)>, Vec<(ConePair, usize)>, usize);

/// Backtracking over beads carrying one to three payload pairs each, topped up
/// with auxiliary pairs that must cancel in complementary couples overall.
struct Search {
    n: i64,
    alphabet: Vec<ConePair>,
    options: HashMap<Vec<ConePair>, Vec<Vec<ConePair>>>,
    failed: HashSet<SearchState>,
    chosen: Vec<(Vec<ConePair>, Vec<ConePair>)>,
}

impl Search {
    /// Auxiliary lists completing `group` to a spherical Type 1 action.
    fn completions(&mut self, group: &[ConePair]) -> Vec<Vec<ConePair>> {
        if let Some(found) = self.options.get(group) {
            return found.clone();
        }
        let n = self.n;
        let a = &self.alphabet;
        let candidates: Vec<Vec<ConePair>> = match group.len() {
            0 => (0..a.len())
                .flat_map(|i| (i..a.len()).flat_map(move |j| (j..a.len()).map(move |k| vec![a[i], a[j], a[k]])))
                .collect(),
            1 => (0..a.len())
                .flat_map(|i| (i..a.len()).map(move |j| vec![a[i], a[j]]))
                .collect(),
            2 => a.iter().map(|&x| vec![x]).collect(),
            _ => vec![Vec::new()],
        };
        let valid: Vec<Vec<ConePair>> = candidates
            .into_iter()
            .filter(|aux| {
                let pairs: Vec<ConePair> = group.iter().chain(aux).copied().collect();
                pairs.iter().any(|p| p.m == n) && DataSet::new(n, 0, 0, pairs).is_ok()
            })
            .collect();
        self.options.insert(group.to_vec(), valid.clone());
        valid
    }

    fn run(&mut self, remaining: &Multiset, outstanding: &Multiset, fillers: usize) -> bool {
        let open: usize = outstanding.values().sum();
        let left: usize = remaining.values().sum();
        if left == 0 && open == 0 {
            return true;
        }
        // each further bead cancels at most three outstanding pairs
        if open > 3 * (left + fillers) {
            return false;
        }
        let key = (flatten(remaining), flatten(outstanding), fillers);
        if self.failed.contains(&key) {
            return false;
        }

        let mut moves: Vec<(Vec<ConePair>, Vec<ConePair>, usize)> = Vec::new();
        if let Some((&first, _)) = remaining.iter().next() {
            let mut rest = remaining.clone();
            take(&mut rest, first);
            let mut groups = vec![vec![first]];
            let others: Vec<ConePair> = rest.keys().copied().collect();
            for (i, &q) in others.iter().enumerate() {
                groups.push(vec![first, q]);
                for &r in &others[i..] {
                    if r != q || rest[&q] >= 2 {
                        groups.push(vec![first, q, r]);
                    }
                }
            }
            for group in groups {
                for aux in self.completions(&group) {
                    moves.push((group.clone(), aux, fillers));
                }
            }
        }
        if fillers > 0 && open > 0 {
            for aux in self.completions(&[]) {
                moves.push((Vec::new(), aux, fillers - 1));
            }
        }

        let score = |aux: &[ConePair]| {
            let mut next = outstanding.clone();
            aux.iter().for_each(|&a| apply(&mut next, a));
            next.values().sum::<usize>()
        };
        moves.sort_by_key(|(group, aux, _)| (score(aux), std::cmp::Reverse(group.len())));

        for (group, aux, budget) in moves {
            let mut rest = remaining.clone();
            if !group.iter().all(|&p| take(&mut rest, p)) {
                continue;
            }
            let mut next = outstanding.clone();
            aux.iter().for_each(|&a| apply(&mut next, a));
            self.chosen.push((group, aux));
            if self.run(&rest, &next, budget) {
                return true;
            }
            self.chosen.pop();
        }
        self.failed.insert(key);
        false
    }
}
