//! Necklaces: a linear chain of spherical beads joined by compatibilities,
//! closed up by self compatibilities and adjusted by toral moves.
//!
//! Link `(r, s)` between beads `j` and `j+1` refers to the `r`-th pair of
//! bead `j` and the `s`-th pair of bead `j+1`, both as stored. Self pairs
//! `(x, y)` refer to positions in the pair list of the chain result `D_T`,
//! whose order is bead by bead, surviving pairs in their stored order. Those
//! positions stay fixed while the self pairs are applied one after another.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{divisors, gcd, reduce, units};
use crate::compatibility::{
    close_rotation, compose_pair, compose_self, toral_add, toral_subtract, CompatError, CompatSite,
};
use crate::dataset::{ActionClass, ConePair, DataSet, RotationalForm};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearChain {
    pub beads: Vec<DataSet>,
    pub links: Vec<CompatSite>,
    /// Optional link from the last bead back to the first.
    pub closing_link: Option<CompatSite>,
}

impl LinearChain {
    pub fn new(beads: Vec<DataSet>, links: Vec<CompatSite>) -> Self {
        LinearChain {
            beads,
            links,
            closing_link: None,
        }
    }

    pub fn closed(beads: Vec<DataSet>, links: Vec<CompatSite>, closing: CompatSite) -> Self {
        LinearChain {
            beads,
            links,
            closing_link: Some(closing),
        }
    }

    /// The chain result `D_T` with its trace.
    pub fn realize(&self) -> Result<Realization, NecklaceError> {
        Necklace::new(self.clone(), Vec::new(), 0, 0).realize()
    }

    pub fn full_links(&self) -> usize {
        self.links
            .iter()
            .chain(&self.closing_link)
            .filter(|l| l.is_full())
            .count()
    }
}

/// `N = (T; (x_1,y_1), ..., (x_m,y_m); (g', g''))`, stored with
/// `min(g', g'') = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "NecklaceRepr", into = "NecklaceRepr")]
pub struct Necklace {
    pub chain: LinearChain,
    pub self_pairs: Vec<(usize, usize)>,
    g_add: i64,
    g_sub: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct NecklaceRepr {
    beads: Vec<DataSet>,
    #[serde(default)]
    links: Vec<CompatSite>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    closing_link: Option<CompatSite>,
    #[serde(default)]
    self_pairs: Vec<(usize, usize)>,
    #[serde(default)]
    g_add: i64,
    #[serde(default)]
    g_sub: i64,
}

impl From<NecklaceRepr> for Necklace {
    fn from(r: NecklaceRepr) -> Self {
        let chain = LinearChain {
            beads: r.beads,
            links: r.links,
            closing_link: r.closing_link,
        };
        Necklace::new(chain, r.self_pairs, r.g_add, r.g_sub)
    }
}

impl From<Necklace> for NecklaceRepr {
    fn from(n: Necklace) -> Self {
        NecklaceRepr {
            beads: n.chain.beads,
            links: n.chain.links,
            closing_link: n.chain.closing_link,
            self_pairs: n.self_pairs,
            g_add: n.g_add,
            g_sub: n.g_sub,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Bead,
    Link,
    Closing,
    SelfPair,
    AddHandle,
    RemoveHandle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizeStep {
    pub stage: Stage,
    /// 1-based index of the bead, link, self pair or handle.
    pub index: usize,
    pub genus: i64,
    pub dataset: DataSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Realization {
    /// `D(N)`, canonical.
    pub result: DataSet,
    /// `D_T` in chain order, before closing and self pairs.
    pub chain_result: DataSet,
    pub trace: Vec<RealizeStep>,
    pub warnings: Vec<String>,
}

impl Realization {
    pub fn genus_trace(&self) -> Vec<i64> {
        self.trace.iter().map(|s| s.genus).collect()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NecklaceError {
    #[error("a necklace needs at least one bead")]
    Empty,
    #[error("{beads} beads need {expected} links, found {found}")]
    LinkCount {
        beads: usize,
        expected: usize,
        found: usize,
    },
    #[error("bead {index} has order {found}, expected {expected}")]
    OrderMismatch { index: usize, expected: i64, found: i64 },
    #[error("bead {index} {bead} is not admissible: {reason}")]
    BadBead {
        index: usize,
        bead: String,
        reason: &'static str,
    },
    #[error("link {link} uses cone pair {local} of bead {bead}, which is missing or already consumed")]
    PairUnavailable { link: usize, bead: usize, local: usize },
    #[error("link {index}: {source}")]
    Link {
        index: usize,
        #[source]
        source: CompatError,
    },
    #[error("closing link: {0}")]
    Closing(#[source] CompatError),
    #[error("self pair {index} ({x}, {y}) refers to a missing or consumed cone pair")]
    SelfPairIndex { index: usize, x: usize, y: usize },
    #[error("self pair {index}: {source}")]
    SelfPair {
        index: usize,
        #[source]
        source: CompatError,
    },
    #[error("handle step {index}: {source}")]
    Handle {
        index: usize,
        #[source]
        source: CompatError,
    },
    #[error("cannot remove {g_sub} handles, at most g' + m = {limit}")]
    TooManyRemoved { g_sub: i64, limit: i64 },
    #[error("{0}")]
    OutOfDomain(String),
}

/// Structural invariants of the fixed locus attached to a necklace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixDescriptor {
    pub points: i64,
    pub num_bounded: i64,
    pub num_free: i64,
    pub den_bounded: i64,
    pub den_free: i64,
    pub dim: i64,
}

impl FixDescriptor {
    /// Real dimension read off the factor counts alone.
    pub fn factor_dimension(&self) -> i64 {
        2 * (self.num_bounded + self.num_free - self.den_bounded - self.den_free)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NecklaceDimension {
    /// From the necklace counts alone.
    pub closed_form: i64,
    /// Harvey's formula on the realized action.
    pub harvey: i64,
    pub consistent: bool,
}

fn is_sphere_rotation(d: &DataSet) -> bool {
    matches!(d.pairs(), [a, b] if a.m == d.n() && a.is_complementary(b))
}

fn bead_check(d: &DataSet, lone: bool) -> Result<(), &'static str> {
    if d.g0() != 0 || d.rot() != 0 {
        return Err("beads act on the sphere");
    }
    match d.classify() {
        ActionClass::Type1 => Ok(()),
        _ if lone && d.n() == 1 => Ok(()),
        ActionClass::Rotational(RotationalForm::Paired { .. }) if lone => Ok(()),
        _ if lone && is_sphere_rotation(d) => Ok(()),
        _ if lone => Err("a lone bead is Type 1, a rotation or the identity"),
        _ => Err("beads of a chain with two or more beads are Type 1"),
    }
}

impl Necklace {
    pub fn new(chain: LinearChain, self_pairs: Vec<(usize, usize)>, g_add: i64, g_sub: i64) -> Self {
        let common = g_add.min(g_sub).max(0);
        Necklace {
            chain,
            self_pairs,
            g_add: g_add - common,
            g_sub: g_sub - common,
        }
    }

    /// `g'`
    pub fn handles_added(&self) -> i64 {
        self.g_add
    }

    /// `g''`
    pub fn handles_removed(&self) -> i64 {
        self.g_sub
    }

    pub fn bead_count(&self) -> usize {
        self.chain.beads.len()
    }

    /// Self compatibilities, the closing link counted among them unless full.
    fn self_count(&self) -> i64 {
        let closing = matches!(self.chain.closing_link, Some(l) if !l.is_full());
        self.self_pairs.len() as i64 + closing as i64
    }

    fn check_shape(&self) -> Result<(), NecklaceError> {
        let beads = &self.chain.beads;
        let k = beads.len();
        if k == 0 {
            return Err(NecklaceError::Empty);
        }
        if self.chain.links.len() != k - 1 {
            return Err(NecklaceError::LinkCount {
                beads: k,
                expected: k - 1,
                found: self.chain.links.len(),
            });
        }
        let n = beads[0].n();
        for (i, b) in beads.iter().enumerate() {
            if b.n() != n {
                return Err(NecklaceError::OrderMismatch {
                    index: i + 1,
                    expected: n,
                    found: b.n(),
                });
            }
            bead_check(b, k == 1).map_err(|reason| NecklaceError::BadBead {
                index: i + 1,
                bead: b.to_string(),
                reason,
            })?;
        }
        if self.g_add < 0 || self.g_sub < 0 {
            return Err(NecklaceError::OutOfDomain("handle counts are non-negative".into()));
        }
        let limit = self.g_add + self.self_count();
        if self.g_sub > limit {
            return Err(NecklaceError::TooManyRemoved {
                g_sub: self.g_sub,
                limit,
            });
        }
        Ok(())
    }

    /// Build `D(N)` step by step.
    pub fn realize(&self) -> Result<Realization, NecklaceError> {
        self.check_shape()?;
        let beads = &self.chain.beads;
        let mut trace = Vec::new();
        let mut warnings = Vec::new();

        // provenance of every pair of the running result: (bead, local index)
        let mut origin: Vec<(usize, usize)> = (1..=beads[0].cone_count()).map(|l| (0, l)).collect();
        let mut acc = beads[0].clone();
        trace.push(RealizeStep {
            stage: Stage::Bead,
            index: 1,
            genus: acc.genus(),
            dataset: acc.clone(),
        });
        for (j, link) in self.chain.links.iter().enumerate() {
            let next = &beads[j + 1];
            let site = if link.is_full() {
                *link
            } else {
                let pos = locate(&origin, j, link.left).ok_or(NecklaceError::PairUnavailable {
                    link: j + 1,
                    bead: j + 1,
                    local: link.left,
                })?;
                CompatSite::new(pos, link.right)
            };
            let step = compose_pair(&acc, next, site).map_err(|source| NecklaceError::Link { index: j + 1, source })?;
            if !link.is_full() {
                origin.remove(site.left - 1);
            }
            origin.extend(
                (1..=next.cone_count())
                    .filter(|&l| link.is_full() || l != link.right)
                    .map(|l| (j + 1, l)),
            );
            acc = step.result;
            trace.push(RealizeStep {
                stage: Stage::Link,
                index: j + 1,
                genus: acc.genus(),
                dataset: acc.clone(),
            });
        }
        let chain_result = acc.clone();

        // positions in D_T of the still unconsumed pairs
        let mut alive: Vec<usize> = (1..=chain_result.cone_count()).collect();

        if let Some(close) = self.chain.closing_link {
            let k = beads.len();
            acc = if close.is_full() {
                toral_add(&acc, 1).map_err(NecklaceError::Closing)?
            } else {
                let a = locate(&origin, k - 1, close.left);
                let b = locate(&origin, 0, close.right);
                let (Some(a), Some(b)) = (a, b) else {
                    return Err(NecklaceError::Closing(CompatError::MalformedSite(close.into())));
                };
                let (lo, hi) = (a.min(b), a.max(b));
                let step = if acc.cone_count() == 2 && lo != hi {
                    close_rotation(&acc)
                } else {
                    compose_self(&acc, lo, hi)
                }
                .map_err(NecklaceError::Closing)?;
                alive.retain(|&p| p != lo && p != hi);
                step.result
            };
            trace.push(RealizeStep {
                stage: Stage::Closing,
                index: 1,
                genus: acc.genus(),
                dataset: acc.clone(),
            });
        }

        let k = beads.len() as i64;
        let bound = ((k + 2 + self.chain.full_links() as i64) / 2) as usize;
        for (i, &(x, y)) in self.self_pairs.iter().enumerate() {
            if self.self_pairs.len() > 1 && (x > bound || y > bound) {
                warnings.push(format!(
                    "self pair {} ({x}, {y}) exceeds the index bound {bound}",
                    i + 1
                ));
            }
            let (lo, hi) = (x.min(y), x.max(y));
            let px = alive.iter().position(|&p| p == lo);
            let py = alive.iter().position(|&p| p == hi);
            let (Some(px), Some(py)) = (px, py) else {
                return Err(NecklaceError::SelfPairIndex { index: i + 1, x, y });
            };
            if px == py {
                return Err(NecklaceError::SelfPairIndex { index: i + 1, x, y });
            }
            let step = if acc.cone_count() == 2 {
                close_rotation(&acc)
            } else {
                compose_self(&acc, px + 1, py + 1)
            }
            .map_err(|source| NecklaceError::SelfPair { index: i + 1, source })?;
            alive.remove(py);
            alive.remove(px);
            acc = step.result;
            trace.push(RealizeStep {
                stage: Stage::SelfPair,
                index: i + 1,
                genus: acc.genus(),
                dataset: acc.clone(),
            });
        }

        for i in 0..self.g_add {
            acc = toral_add(&acc, 1).map_err(|source| NecklaceError::Handle {
                index: i as usize + 1,
                source,
            })?;
            trace.push(RealizeStep {
                stage: Stage::AddHandle,
                index: i as usize + 1,
                genus: acc.genus(),
                dataset: acc.clone(),
            });
        }
        for i in 0..self.g_sub {
            acc = toral_subtract(&acc, 1).map_err(|source| NecklaceError::Handle {
                index: i as usize + 1,
                source,
            })?;
            trace.push(RealizeStep {
                stage: Stage::RemoveHandle,
                index: i as usize + 1,
                genus: acc.genus(),
                dataset: acc.clone(),
            });
        }

        Ok(Realization {
            result: acc.canonicalize(),
            chain_result,
            trace,
            warnings,
        })
    }

    /// Dimension of the fixed locus from the necklace counts, next to Harvey's
    /// formula on the realized action.
    pub fn fix_dimension(&self) -> Result<NecklaceDimension, NecklaceError> {
        let realized = self.realize()?;
        let harvey = realized
            .result
            .fix_dimension_harvey()
            .map_err(|e| NecklaceError::OutOfDomain(e.to_string()))?;
        let k = self.bead_count() as i64;
        let links = self.chain.links.len() as i64 - self.chain.links.iter().filter(|l| l.is_full()).count() as i64;
        let closing_full = matches!(self.chain.closing_link, Some(l) if l.is_full()) as i64;
        let m = self.self_count();
        let cones: i64 = self.chain.beads.iter().map(|b| b.cone_count() as i64).sum();
        let c = cones - 2 * links - 2 * m;
        let g0 = m + closing_full + self.g_add - self.g_sub;
        // reduces to 6(g' - g'') + 2k + 4f + 2m - 2 for Type 1 beads
        let closed_form = 6 * g0 + 2 * c - 6;
        debug_assert!(k >= 1);
        Ok(NecklaceDimension {
            closed_form,
            harvey,
            consistent: closed_form == harvey,
        })
    }

    pub fn fix_descriptor(&self) -> Result<FixDescriptor, NecklaceError> {
        let dim = self.fix_dimension()?.harvey;
        let k = self.bead_count() as i64;
        let f = self.chain.full_links() as i64;
        let m = self.self_count();
        let (ga, gs) = (self.g_add, self.g_sub);
        Ok(FixDescriptor {
            points: k,
            num_bounded: (ga + k + 2 * f + m - 2).max(0),
            num_free: (2 * ga - 1).max(0),
            den_bounded: gs,
            den_free: (2 * gs - 1).max(0),
            dim,
        })
    }

    /// Size of a maximal reduction system of the realized action:
    /// `g - sum g(D_i) + k - 1`, plus `n (2g' - 1)` when handles were added.
    pub fn max_reduction_system_size(&self) -> Result<i64, NecklaceError> {
        if self.g_sub != 0 {
            return Err(NecklaceError::OutOfDomain(
                "maximal reduction system size needs g'' = 0".into(),
            ));
        }
        let realized = self.realize()?;
        let g = realized.result.genus();
        let beads: i64 = self.chain.beads.iter().map(DataSet::genus).sum();
        let k = self.bead_count() as i64;
        let n = realized.result.n();
        let handles = if self.g_add > 0 { n * (2 * self.g_add - 1) } else { 0 };
        Ok(g - beads + k - 1 + handles)
    }
}

fn locate(origin: &[(usize, usize)], bead: usize, local: usize) -> Option<usize> {
    origin.iter().position(|&o| o == (bead, local)).map(|p| p + 1)
}

/// A random spherical Type 1 action of order `n`, pairs in random order.
pub fn random_type1_bead<R: Rng + ?Sized>(n: i64, rng: &mut R) -> Option<DataSet> {
    let periods: Vec<i64> = divisors(n).into_iter().filter(|&m| m >= 2).collect();
    for _ in 0..64 {
        let m1 = *periods.choose(rng)?;
        let m2 = *periods.choose(rng)?;
        let c1 = *units(m1).choose(rng)?;
        let c2 = *units(m2).choose(rng)?;
        let c3 = reduce(-(n / m1) * c1 - (n / m2) * c2, n);
        if gcd(c3, n) != 1 {
            continue;
        }
        let mut pairs = vec![ConePair::new(c1, m1), ConePair::new(c2, m2), ConePair::new(c3, n)];
        pairs.shuffle(rng);
        if let Ok(d) = DataSet::new(n, 0, 0, pairs) {
            return Some(d);
        }
    }
    None
}

/// A random necklace of order `n` with up to `max_beads` beads, realizable
/// on a surface of genus at least 2.
pub fn random_necklace<R: Rng + ?Sized>(n: i64, max_beads: usize, rng: &mut R) -> Option<Necklace> {
    for _ in 0..256 {
        let k = rng.gen_range(1..=max_beads.max(1));
        let Some(beads) = (0..k).map(|_| random_type1_bead(n, rng)).collect::<Option<Vec<_>>>() else {
            continue;
        };
        let mut links = Vec::new();
        let mut used_left: Option<usize> = None;
        for j in 0..k.saturating_sub(1) {
            let (a, b) = (&beads[j], &beads[j + 1]);
            let options: Vec<CompatSite> = (1..=a.cone_count())
                .filter(|&r| Some(r) != used_left)
                .flat_map(|r| (1..=b.cone_count()).map(move |s| CompatSite::new(r, s)))
                .filter(|s| a.pairs()[s.left - 1].is_complementary(&b.pairs()[s.right - 1]))
                .collect();
            let link = if options.is_empty() || rng.gen_bool(0.25) {
                CompatSite::FULL
            } else {
                *options.choose(rng).expect("non-empty")
            };
            used_left = (!link.is_full()).then_some(link.right);
            links.push(link);
        }
        let chain = LinearChain::new(beads, links);
        let Ok(base) = chain.realize() else { continue };

        let pairs = base.chain_result.pairs().to_vec();
        let mut free: Vec<usize> = (1..=pairs.len()).collect();
        let mut self_pairs = Vec::new();
        let wanted = rng.gen_range(0..=pairs.len() / 2);
        while self_pairs.len() < wanted && free.len() >= 4 {
            let options: Vec<(usize, usize)> = free
                .iter()
                .flat_map(|&x| free.iter().map(move |&y| (x, y)))
                .filter(|&(x, y)| x < y && pairs[x - 1].is_complementary(&pairs[y - 1]))
                .collect();
            let Some(&(x, y)) = options.choose(rng) else { break };
            free.retain(|&p| p != x && p != y);
            self_pairs.push((x, y));
        }
        let m = self_pairs.len() as i64;
        let g_add = rng.gen_range(0..=2);
        let g_sub = if rng.gen_bool(0.5) {
            rng.gen_range(0..=g_add + m)
        } else {
            0
        };
        let necklace = Necklace::new(chain, self_pairs, g_add, g_sub);
        match necklace.realize() {
            Ok(r) if r.result.genus() >= 2 => return Some(necklace),
            _ => continue,
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn example_chain_matches() {
        let r = fixtures::example_chain().realize().unwrap();
        assert_eq!(r.chain_result.pairs(), fixtures::example_chain_result().pairs());
        assert_eq!(r.chain_result.genus(), 155);
    }

    #[test]
    fn example_necklace_trace() {
        let r = fixtures::example_necklace().realize().unwrap();
        assert_eq!(r.result, fixtures::example_necklace_target());
        let tail: Vec<i64> = r.genus_trace()[6..].to_vec();
        assert_eq!(tail, vec![157, 158, 161, 162, 120, 78, 36]);
        assert!(!r.warnings.is_empty());
    }

    #[test]
    fn two_necklaces_agree() {
        let a = fixtures::two_necklaces_first().realize().unwrap();
        let b = fixtures::two_necklaces_second().realize().unwrap();
        assert_eq!(a.result, fixtures::two_necklaces_target());
        assert_eq!(b.result, fixtures::two_necklaces_target());
        assert_eq!(a.result.genus(), 7);
        assert_eq!(b.genus_trace(), vec![2, 4, 6, 7]);
    }

    #[test]
    fn normalization() {
        let n = Necklace::new(fixtures::example_chain(), vec![], 3, 1);
        assert_eq!((n.handles_added(), n.handles_removed()), (2, 0));
        let plain = Necklace::new(fixtures::example_chain(), vec![], 2, 0);
        assert_eq!(n.realize().unwrap().result, plain.realize().unwrap().result);
    }

    #[test]
    fn reduction_system_of_chain() {
        let n = Necklace::new(fixtures::example_chain(), vec![], 0, 0);
        assert_eq!(n.max_reduction_system_size().unwrap(), 48);
        assert!(fixtures::example_necklace().max_reduction_system_size().is_err());
    }

    #[test]
    fn descriptor_of_chain() {
        let n = Necklace::new(fixtures::example_chain(), vec![], 0, 0);
        let d = n.fix_descriptor().unwrap();
        assert_eq!((d.points, d.num_bounded, d.num_free), (6, 6, 0));
        assert_eq!((d.den_bounded, d.den_free), (0, 0));
        assert_eq!(d.dim, 14);
        assert!(n.fix_dimension().unwrap().consistent);
    }

    #[test]
    fn json_round_trip() {
        let n = fixtures::example_necklace();
        let text = serde_json::to_string(&n).unwrap();
        assert!(text.contains("\"self_pairs\":[[1,9],[2,4],[5,8],[7,10]]"));
        let back: Necklace = serde_json::from_str(&text).unwrap();
        assert_eq!(back, n);
    }

    #[test]
    fn rejects_bad_shapes() {
        let mut chain = fixtures::example_chain();
        chain.links.pop();
        assert!(matches!(
            Necklace::new(chain, vec![], 0, 0).realize(),
            Err(NecklaceError::LinkCount { .. })
        ));
        let rotation = DataSet::with_pairs(2, 0, &[(1, 2); 6]).unwrap();
        let two = LinearChain::new(vec![rotation.clone(), rotation.clone()], vec![CompatSite::FULL]);
        assert!(matches!(two.realize(), Err(NecklaceError::BadBead { .. })));
        assert!(LinearChain::new(vec![rotation], vec![]).realize().is_ok());
    }

    #[test]
    fn reused_pairs_are_rejected() {
        let n = Necklace::new(fixtures::example_chain(), vec![(1, 9), (1, 4)], 0, 0);
        assert!(matches!(n.realize(), Err(NecklaceError::SelfPairIndex { .. })));
    }

    #[test]
    fn random_necklaces_realize() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [3, 4, 6, 10] {
            let neck = random_necklace(n, 4, &mut rng).expect("sampler finds a necklace");
            assert!(neck.realize().unwrap().result.genus() >= 2);
        }
    }
}
