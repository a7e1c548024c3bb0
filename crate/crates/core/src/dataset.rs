//! Data sets: the combinatorial encoding of a conjugacy class of `C_n`-actions
//! on a closed orientable surface.
//!
//! A data set is `(n, g0, r; (c_1, n_1), ..., (c_l, n_l))`. The cone pairs are
//! kept in the order they were supplied, since the composition moves address
//! them positionally; equality, ordering and hashing all go through the
//! canonical form (pairs sorted by period, then residue).

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{gcd, lcm_all, mod_inverse, reduce};

/// A cone point of the quotient orbifold: residue `c` modulo the period `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "(i64, i64)", into = "(i64, i64)")]
pub struct ConePair {
    pub c: i64,
    pub m: i64,
}

impl ConePair {
    pub const fn new(c: i64, m: i64) -> Self {
        ConePair { c, m }
    }

    fn reduced(self) -> Self {
        if self.m >= 1 {
            ConePair::new(reduce(self.c, self.m), self.m)
        } else {
            self
        }
    }

    /// Two pairs can be glued when their periods agree and residues cancel.
    pub fn is_complementary(&self, other: &ConePair) -> bool {
        self.m == other.m && reduce(self.c + other.c, self.m) == 0
    }
}

impl From<(i64, i64)> for ConePair {
    fn from((c, m): (i64, i64)) -> Self {
        ConePair::new(c, m)
    }
}

impl From<ConePair> for (i64, i64) {
    fn from(p: ConePair) -> Self {
        (p.c, p.m)
    }
}

impl Ord for ConePair {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.m, self.c).cmp(&(other.m, other.c))
    }
}

impl PartialOrd for ConePair {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ConePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.c, self.m)
    }
}

/// One of the conditions a data set must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Violation {
    /// `r > 0` exactly when there are no cone pairs, and then `gcd(r, n) = 1`.
    #[serde(rename = "i")]
    FreeRotation,
    /// Every period divides `n` (and is a genuine cone order, i.e. at least 2).
    #[serde(rename = "ii")]
    PeriodDivides,
    /// Every residue is a unit modulo its period.
    #[serde(rename = "iii")]
    ResidueUnit,
    /// No period is redundant in the lcm; the lcm is `n` on a sphere.
    #[serde(rename = "iv")]
    LcmCondition,
    /// The weighted residue sum vanishes modulo `n`.
    #[serde(rename = "v")]
    ResidueSum,
    /// The Riemann-Hurwitz genus is a non-negative integer.
    #[serde(rename = "genus")]
    Genus,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self {
            Violation::FreeRotation => "i",
            Violation::PeriodDivides => "ii",
            Violation::ResidueUnit => "iii",
            Violation::LcmCondition => "iv",
            Violation::ResidueSum => "v",
            Violation::Genus => "genus",
        };
        f.write_str(tag)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DataSetError {
    #[error("invalid data set, violated conditions: {}", join(.0))]
    Invalid(Vec<Violation>),
    #[error("{0}")]
    OutOfDomain(String),
}

fn join(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

/// An unvalidated tuple, as read from JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawDataSet {
    pub n: i64,
    pub g0: i64,
    #[serde(default)]
    pub rot: i64,
    #[serde(default)]
    pub pairs: Vec<ConePair>,
}

/// `2 - 2g = n (2 - 2 g0 + sum (1/m - 1))`, solved for `g` exactly.
pub fn riemann_hurwitz_genus(n: i64, g0: i64, periods: &[i64]) -> Option<BigRational> {
    if n < 1 || periods.iter().any(|&m| m < 1) {
        return None;
    }
    let one = BigRational::one();
    let mut orbifold_chi = BigRational::from_integer(BigInt::from(2 - 2 * g0));
    for &m in periods {
        orbifold_chi += BigRational::new(BigInt::from(1), BigInt::from(m)) - &one;
    }
    let chi = orbifold_chi * BigRational::from_integer(BigInt::from(n));
    let two = BigRational::from_integer(BigInt::from(2));
    Some((two.clone() - chi) / two)
}

/// Checks conditions (i)-(v) and genus integrality without constructing anything.
pub fn validate(raw: &RawDataSet) -> ValidationReport {
    let mut violations = Vec::new();
    let n = raw.n;
    if n < 1 || raw.g0 < 0 {
        violations.push(Violation::Genus);
        return ValidationReport {
            valid: false,
            violations,
        };
    }
    let pairs: Vec<ConePair> = raw.pairs.iter().map(|p| p.reduced()).collect();

    let rot_ok = if pairs.is_empty() {
        if n == 1 {
            raw.rot == 0
        } else {
            raw.rot > 0 && raw.rot < n && gcd(raw.rot, n) == 1
        }
    } else {
        raw.rot == 0
    };
    if !rot_ok {
        violations.push(Violation::FreeRotation);
    }

    let periods_ok = pairs.iter().all(|p| p.m >= 2 && n % p.m == 0);
    if !periods_ok {
        violations.push(Violation::PeriodDivides);
    }
    if pairs.iter().any(|p| p.m >= 1 && gcd(p.c, p.m) != 1) {
        violations.push(Violation::ResidueUnit);
    }

    if !pairs.is_empty() && pairs.iter().all(|p| p.m >= 1) {
        let periods: Vec<i64> = pairs.iter().map(|p| p.m).collect();
        let full = lcm_all(periods.iter().copied());
        let redundant = (0..periods.len()).any(|i| {
            let omitted = lcm_all(periods.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &m)| m));
            omitted != full
        });
        if redundant || (raw.g0 == 0 && full != n) {
            violations.push(Violation::LcmCondition);
        }
    }

    if periods_ok {
        let sum: i64 = pairs.iter().map(|p| (n / p.m) * p.c).sum();
        if reduce(sum, n) != 0 {
            violations.push(Violation::ResidueSum);
        }
    }

    let periods: Vec<i64> = pairs.iter().map(|p| p.m).collect();
    match riemann_hurwitz_genus(n, raw.g0, &periods) {
        Some(g) if g.is_integer() && !g.is_negative() => {}
        _ => violations.push(Violation::Genus),
    }

    ValidationReport {
        valid: violations.is_empty(),
        violations,
    }
}

/// A validated data set.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawDataSet", into = "RawDataSet")]
pub struct DataSet {
    n: i64,
    g0: i64,
    rot: i64,
    pairs: Vec<ConePair>,
    genus: i64,
}

impl DataSet {
    pub fn new(n: i64, g0: i64, rot: i64, pairs: Vec<ConePair>) -> Result<Self, DataSetError> {
        Self::try_from(RawDataSet { n, g0, rot, pairs })
    }

    /// Shorthand for a data set with cone points, written `(n, g0; pairs)`.
    pub fn with_pairs(n: i64, g0: i64, pairs: &[(i64, i64)]) -> Result<Self, DataSetError> {
        Self::new(n, g0, 0, pairs.iter().map(|&p| p.into()).collect())
    }

    /// The free rotation `(n, g0, r;)`.
    pub fn free(n: i64, g0: i64, rot: i64) -> Result<Self, DataSetError> {
        Self::new(n, g0, rot, Vec::new())
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn g0(&self) -> i64 {
        self.g0
    }

    pub fn rot(&self) -> i64 {
        self.rot
    }

    pub fn pairs(&self) -> &[ConePair] {
        &self.pairs
    }

    /// Number of cone points of the quotient orbifold.
    pub fn cone_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn genus(&self) -> i64 {
        self.genus
    }

    pub fn is_spherical(&self) -> bool {
        self.g0 == 0
    }

    pub fn to_raw(&self) -> RawDataSet {
        RawDataSet {
            n: self.n,
            g0: self.g0,
            rot: self.rot,
            pairs: self.pairs.clone(),
        }
    }

    /// Same action with pairs sorted by `(m, c)`.
    pub fn canonicalize(&self) -> DataSet {
        let mut out = self.clone();
        out.pairs.sort();
        out
    }

    pub fn is_canonical(&self) -> bool {
        self.pairs.windows(2).all(|w| w[0] <= w[1])
    }

    fn canonical_key(&self) -> (i64, i64, i64, Vec<ConePair>) {
        let mut pairs = self.pairs.clone();
        pairs.sort();
        (self.n, self.g0, self.rot, pairs)
    }

    pub fn classify(&self) -> ActionClass {
        if self.rot != 0 {
            return ActionClass::Rotational(RotationalForm::Free { r: self.rot });
        }
        if let Some((s, k)) = self.paired_rotation() {
            return ActionClass::Rotational(RotationalForm::Paired { s, k });
        }
        if self.pairs.len() == 3 && self.pairs.iter().any(|p| p.m == self.n) {
            return ActionClass::Type1;
        }
        ActionClass::Type2
    }

    /// Matches `(s,n),(n-s,n)` repeated `k` times, with `k = 1` iff `n > 2`.
    fn paired_rotation(&self) -> Option<(i64, usize)> {
        let n = self.n;
        let l = self.pairs.len();
        if l == 0 || !l.is_multiple_of(2) || self.pairs.iter().any(|p| p.m != n) {
            return None;
        }
        let k = l / 2;
        if (k == 1) != (n > 2) {
            return None;
        }
        let mut sorted = self.pairs.clone();
        sorted.sort();
        let s = sorted[0].c;
        let t = reduce(n - s, n);
        let lo = sorted.iter().filter(|p| p.c == s).count();
        let hi = sorted.iter().filter(|p| p.c == t).count();
        let balanced = if s == t { lo == l } else { lo == k && hi == k };
        balanced.then_some((s, k))
    }

    /// Gilman's criterion: quotient sphere with exactly three cone points.
    pub fn is_irreducible(&self) -> bool {
        self.g0 == 0 && self.pairs.len() == 3
    }

    /// Harvey's formula `6 g0 + 2c - 6` for the dimension of the fixed locus.
    pub fn fix_dimension_harvey(&self) -> Result<i64, DataSetError> {
        let dim = 6 * self.g0 + 2 * self.pairs.len() as i64 - 6;
        if dim < 0 {
            return Err(DataSetError::OutOfDomain(format!(
                "6*g0 + 2c - 6 = {dim} is negative for {self}"
            )));
        }
        Ok(dim)
    }

    pub fn orbit_structure(&self) -> Vec<OrbitDatum> {
        self.pairs
            .iter()
            .map(|p| OrbitDatum {
                orbit_size: self.n / p.m,
                cone_order: p.m,
                rotation_numerator: mod_inverse(p.c, p.m).expect("residues are units"),
            })
            .collect()
    }

    /// Orbit counts `(3 g0 - 3 + c, 2 g0 - 2 + c)` of a maximal reduction
    /// system and of its complementary pieces.
    pub fn reduction_orbit_counts(&self) -> Result<(i64, i64), DataSetError> {
        if self.is_irreducible() {
            return Err(DataSetError::OutOfDomain(format!(
                "{self} is irreducible and has no reduction system"
            )));
        }
        if self.genus < 2 {
            return Err(DataSetError::OutOfDomain(format!(
                "{self} acts on a surface of genus {} < 2",
                self.genus
            )));
        }
        let c = self.pairs.len() as i64;
        Ok((3 * self.g0 - 3 + c, 2 * self.g0 - 2 + c))
    }

    pub(crate) fn from_parts_unchecked(n: i64, g0: i64, rot: i64, pairs: Vec<ConePair>) -> Self {
        let periods: Vec<i64> = pairs.iter().map(|p| p.m).collect();
        let genus = riemann_hurwitz_genus(n, g0, &periods)
            .and_then(|g| g.to_integer().to_i64())
            .unwrap_or(-1);
        DataSet {
            n,
            g0,
            rot,
            pairs,
            genus,
        }
    }
}

impl TryFrom<RawDataSet> for DataSet {
    type Error = DataSetError;

    fn try_from(raw: RawDataSet) -> Result<Self, Self::Error> {
        let report = validate(&raw);
        if !report.valid {
            return Err(DataSetError::Invalid(report.violations));
        }
        let pairs = raw.pairs.into_iter().map(ConePair::reduced).collect();
        Ok(DataSet::from_parts_unchecked(raw.n, raw.g0, raw.rot, pairs))
    }
}

impl From<DataSet> for RawDataSet {
    fn from(d: DataSet) -> Self {
        RawDataSet {
            n: d.n,
            g0: d.g0,
            rot: d.rot,
            pairs: d.pairs,
        }
    }
}

impl PartialEq for DataSet {
    fn eq(&self, other: &Self) -> bool {
        self.canonical_key() == other.canonical_key()
    }
}

impl Eq for DataSet {}

impl Hash for DataSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canonical_key().hash(state);
    }
}

impl Ord for DataSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canonical_key().cmp(&other.canonical_key())
    }
}

impl PartialOrd for DataSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DataSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rot != 0 {
            write!(f, "({},{},{};", self.n, self.g0, self.rot)?;
        } else {
            write!(f, "({},{};", self.n, self.g0)?;
        }
        for (i, p) in self.pairs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum RotationalForm {
    Free { r: i64 },
    Paired { s: i64, k: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum ActionClass {
    Rotational(RotationalForm),
    #[serde(rename = "type1")]
    Type1,
    #[serde(rename = "type2")]
    Type2,
}

/// The orbit over one cone point: its size, the cone order and the numerator
/// `c^{-1} mod m` of the local rotation angle `2 pi c^{-1} / m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitDatum {
    pub orbit_size: i64,
    pub cone_order: i64,
    pub rotation_numerator: i64,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(n: i64, g0: i64, rot: i64, pairs: &[(i64, i64)]) -> RawDataSet {
        RawDataSet {
            n,
            g0,
            rot,
            pairs: pairs.iter().map(|&p| p.into()).collect(),
        }
    }

    #[test]
    fn validates_known_examples() {
        assert!(validate(&raw(42, 0, 0, &[(2, 21), (19, 42), (19, 42)])).valid);
        assert!(validate(&raw(4, 0, 0, &[(1, 2), (1, 2), (1, 4), (3, 4)])).valid);
        assert!(validate(&raw(5, 1, 2, &[])).valid);
    }

    #[test]
    fn reports_every_violation() {
        let r = validate(&raw(6, 0, 0, &[(1, 2), (1, 3)]));
        assert!(!r.valid);
        assert!(r.violations.contains(&Violation::LcmCondition));
        assert!(r.violations.contains(&Violation::ResidueSum));
        assert!(!r.violations.contains(&Violation::ResidueUnit));
    }

    #[test]
    fn free_rotation_conditions() {
        assert_eq!(validate(&raw(6, 2, 2, &[])).violations, vec![Violation::FreeRotation]);
        assert!(validate(&raw(6, 2, 0, &[]))
            .violations
            .contains(&Violation::FreeRotation));
        assert!(validate(&raw(6, 2, 1, &[(1, 6), (5, 6)]))
            .violations
            .contains(&Violation::FreeRotation));
        assert!(validate(&raw(1, 3, 0, &[])).valid);
    }

    #[test]
    fn single_pair_is_rejected() {
        let r = validate(&raw(5, 1, 0, &[(1, 5)]));
        assert!(r.violations.contains(&Violation::LcmCondition));
        assert!(r.violations.contains(&Violation::ResidueSum));
    }

    #[test]
    fn trivial_periods_are_rejected() {
        let r = validate(&raw(4, 1, 0, &[(0, 1), (1, 4), (3, 4)]));
        assert!(r.violations.contains(&Violation::PeriodDivides));
    }

    #[test]
    fn residues_are_reduced() {
        let d = DataSet::with_pairs(6, 0, &[(8, 3), (1, 6), (7, 6)]).unwrap();
        assert_eq!(
            d.pairs(),
            &[ConePair::new(2, 3), ConePair::new(1, 6), ConePair::new(1, 6)]
        );
    }

    #[test]
    fn genus_values() {
        let d = DataSet::with_pairs(42, 0, &[(2, 21), (19, 42), (19, 42)]).unwrap();
        assert_eq!(d.genus(), 20);
        assert_eq!(DataSet::with_pairs(42, 4, &[(5, 6), (1, 6)]).unwrap().genus(), 162);
        assert_eq!(DataSet::with_pairs(42, 1, &[(5, 6), (1, 6)]).unwrap().genus(), 36);
        assert_eq!(DataSet::free(5, 1, 2).unwrap().genus(), 1);
        assert_eq!(DataSet::free(3, 2, 1).unwrap().genus(), 4);
    }

    #[test]
    fn classification() {
        let t1 = DataSet::with_pairs(42, 0, &[(2, 21), (19, 42), (19, 42)]).unwrap();
        assert_eq!(t1.classify(), ActionClass::Type1);
        assert!(t1.is_spherical());
        let rot = DataSet::with_pairs(6, 2, &[(1, 6), (5, 6)]).unwrap();
        assert_eq!(
            rot.classify(),
            ActionClass::Rotational(RotationalForm::Paired { s: 1, k: 1 })
        );
        assert_eq!(
            DataSet::free(5, 2, 2).unwrap().classify(),
            ActionClass::Rotational(RotationalForm::Free { r: 2 })
        );
        let hyper = DataSet::with_pairs(2, 0, &[(1, 2); 6]).unwrap();
        assert_eq!(
            hyper.classify(),
            ActionClass::Rotational(RotationalForm::Paired { s: 1, k: 3 })
        );
        // k = 1 is reserved for n > 2
        let two = DataSet::with_pairs(2, 1, &[(1, 2), (1, 2)]).unwrap();
        assert_eq!(two.classify(), ActionClass::Type2);
    }

    #[test]
    fn irreducibility_and_harvey() {
        let d = DataSet::with_pairs(6, 0, &[(2, 3), (1, 6), (1, 6)]).unwrap();
        assert!(d.is_irreducible());
        assert_eq!(d.fix_dimension_harvey(), Ok(0));
        let gamma2 = DataSet::with_pairs(4, 0, &[(1, 2), (1, 2), (1, 4), (3, 4)]).unwrap();
        assert!(!gamma2.is_irreducible());
        let e52 = DataSet::with_pairs(42, 1, &[(5, 6), (1, 6)]).unwrap();
        assert!(!e52.is_irreducible());
        assert_eq!(e52.fix_dimension_harvey(), Ok(4));
        let hyper = DataSet::with_pairs(2, 0, &[(1, 2); 6]).unwrap();
        assert_eq!(hyper.fix_dimension_harvey(), Ok(6));
        let torus_free = DataSet::free(5, 1, 2).unwrap();
        assert!(torus_free.fix_dimension_harvey().is_ok());
    }

    #[test]
    fn orbits() {
        let d = DataSet::with_pairs(42, 0, &[(2, 21), (19, 42), (19, 42)]).unwrap();
        let o = d.orbit_structure();
        assert_eq!(
            o[0],
            OrbitDatum {
                orbit_size: 2,
                cone_order: 21,
                rotation_numerator: 11
            }
        );
        assert_eq!(o[1].orbit_size, 1);
        let g2 = DataSet::with_pairs(4, 0, &[(1, 2), (1, 2), (1, 4), (3, 4)]).unwrap();
        assert_eq!(g2.orbit_structure()[3].rotation_numerator, 3);
        assert_eq!(g2.orbit_structure()[2].rotation_numerator, 1);
    }

    #[test]
    fn reduction_counts() {
        let d = DataSet::with_pairs(42, 1, &[(5, 6), (1, 6)]).unwrap();
        assert_eq!(d.reduction_orbit_counts(), Ok((2, 2)));
        let h = DataSet::with_pairs(2, 0, &[(1, 2); 6]).unwrap();
        assert_eq!(h.reduction_orbit_counts(), Ok((3, 4)));
        let d4 = DataSet::with_pairs(42, 4, &[(5, 6), (1, 6)]).unwrap();
        assert_eq!(d4.reduction_orbit_counts(), Ok((11, 8)));
        let irr = DataSet::with_pairs(6, 0, &[(2, 3), (1, 6), (1, 6)]).unwrap();
        assert!(irr.reduction_orbit_counts().is_err());
    }

    #[test]
    fn canonical_equality() {
        let a = DataSet::with_pairs(42, 0, &[(19, 42), (2, 21), (19, 42)]).unwrap();
        let c = a.canonicalize();
        assert_eq!(
            c.pairs(),
            &[ConePair::new(2, 21), ConePair::new(19, 42), ConePair::new(19, 42)]
        );
        assert_eq!(c.canonicalize().pairs(), c.pairs());
        assert_eq!(a, c);
        assert!(!a.is_canonical() && c.is_canonical());
    }

    #[test]
    fn json_shape() {
        let d = DataSet::with_pairs(42, 1, &[(5, 6), (1, 6)]).unwrap();
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(s, r#"{"n":42,"g0":1,"rot":0,"pairs":[[5,6],[1,6]]}"#);
        let back: DataSet = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
        assert!(serde_json::from_str::<DataSet>(r#"{"n":6,"g0":0,"pairs":[[1,2],[1,3]]}"#).is_err());
        let r = serde_json::to_string(&validate(&raw(6, 0, 0, &[(1, 2), (1, 3)]))).unwrap();
        assert!(r.contains(r#""iv""#) && r.contains(r#""v""#));
    }
}
