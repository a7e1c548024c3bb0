//! Spherical Type 1 actions as rotations of hyperbolic polygons.
//!
//! The polygon has `2n` sides with corner angles alternating `2 pi/n1`,
//! `2 pi/n2`, or `n` sides with equal corners when one of `n1, n2` is 2. It is
//! cut into triangles `O P_i P_{i+1}` at the center `O`; the
//! base angles of each triangle are half the adjacent corner angles.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{mod_inverse, reduce};
use crate::dataset::{ActionClass, ConePair, DataSet};

pub const TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HyperbolicError {
    #[error("{0} is not a spherical Type 1 action")]
    NotSphericalType1(String),
    #[error("corner angles sum to {angle_sum}, a hyperbolic polygon needs less than {bound}")]
    NonHyperbolic { angle_sum: f64, bound: f64 },
    #[error("no reading of the pairing rule yields the right surface for {0}")]
    NoValidInterpretation(String),
    #[error("pairing does not give a closed orientable surface: {0}")]
    NonOrientableOrInvalid(String),
    #[error("inputs disagree: {0}")]
    Mismatch(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolygonSpec {
    pub n: i64,
    pub sides: usize,
    /// Sides advanced by one application of the generator.
    pub rotation_steps: usize,
    /// Corner angle at vertex `i`, the start of side `i`.
    pub corner_angles: Vec<f64>,
    pub theta: f64,
    /// Orders `(n1, n2)` of the two cone points other than the designated
    /// period-`n` one, `n1 <= n2`.
    pub orders: (i64, i64),
    pub genus: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolygonMetrics {
    pub sides: usize,
    pub theta: f64,
    pub angles: Vec<f64>,
    pub side_length: f64,
    /// Hyperbolic distance from the center to vertex `i`.
    pub vertex_radii: Vec<f64>,
    /// Distinct values among `vertex_radii`.
    pub radii: Vec<f64>,
    pub area: f64,
    /// `area / 2 pi + 2`, halved: the genus read off Gauss-Bonnet.
    pub genus_check: f64,
    /// `|area - 2 pi (2g - 2)|`
    pub gauss_bonnet_residual: f64,
    /// Largest disagreement between the side length from the angle formula
    /// and from the two adjacent radii.
    pub side_residual: f64,
    /// `|sum of apex angles - 2 pi|`
    pub apex_residual: f64,
}

/// Which reading of the pairing rule produced a word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interpretation {
    /// 1-based canonical index of the pair taken as the period-`n` one.
    pub designated: usize,
    /// Which residue plays the role of `c`: `"c1"`, `"c2"` or `"c3"`.
    pub residue: &'static str,
    /// Modulus of the inverse `c^{-1}`.
    pub modulus: i64,
    /// The shift `q j mod n`.
    pub shift: i64,
}

/// Side `i` (1-based) is glued reversed to side `partner[i-1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingWord {
    pub sides: usize,
    pub partner: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none", skip_deserializing)]
    pub interpretation: Option<Interpretation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientReport {
    pub genus: i64,
    pub vertex_classes: Vec<usize>,
}

fn letter(i: usize) -> String {
    let base = (b'a' + (i % 26) as u8) as char;
    if i < 26 {
        base.to_string()
    } else {
        format!("{base}{}", i / 26)
    }
}

impl PairingWord {
    /// From 1-based side pairs.
    pub fn from_pairs(sides: usize, pairs: &[(usize, usize)]) -> Result<Self, HyperbolicError> {
        let mut partner = vec![0; sides];
        for &(a, b) in pairs {
            if a == b || a == 0 || b == 0 || a > sides || b > sides || partner[a - 1] != 0 || partner[b - 1] != 0 {
                return Err(HyperbolicError::NonOrientableOrInvalid(format!(
                    "bad side pair ({a}, {b})"
                )));
            }
            partner[a - 1] = b;
            partner[b - 1] = a;
        }
        if partner.contains(&0) {
            return Err(HyperbolicError::NonOrientableOrInvalid("unpaired side".into()));
        }
        Ok(PairingWord {
            sides,
            partner,
            interpretation: None,
        })
    }

    /// Reads a word such as `"a b a^-1 b^-1"`; each letter occurs once plain and once inverted.
    pub fn from_word(word: &str) -> Result<Self, HyperbolicError> {
        let tokens: Vec<(&str, bool)> = word
            .split_whitespace()
            .map(|t| match t.strip_suffix("^-1") {
                Some(b) => (b, false),
                None => (t, true),
            })
            .collect();
        let mut pairs = Vec::new();
        for (i, (name, sign)) in tokens.iter().enumerate() {
            let others: Vec<usize> = (0..tokens.len()).filter(|&j| j != i && tokens[j].0 == *name).collect();
            match others[..] {
                [j] if tokens[j].1 != *sign => {
                    if i < j {
                        pairs.push((i + 1, j + 1));
                    }
                }
                _ => {
                    return Err(HyperbolicError::NonOrientableOrInvalid(format!(
                        "letter {name} must occur once with each exponent"
                    )))
                }
            }
        }
        PairingWord::from_pairs(tokens.len(), &pairs)
    }

    /// Side labels: the lower side of each pair gets the letter, its partner the inverse.
    pub fn labels(&self) -> Vec<String> {
        let mut out = vec![String::new(); self.sides];
        let mut next = 0;
        for i in 0..self.sides {
            let j = self.partner[i] - 1;
            if i < j {
                out[i] = letter(next);
                out[j] = format!("{}^-1", letter(next));
                next += 1;
            }
        }
        out
    }

    pub fn word(&self) -> String {
        self.labels().join(" ")
    }

    /// Whether shifting every side index by `steps` preserves the pairing.
    pub fn is_equivariant(&self, steps: usize) -> bool {
        let k = self.sides;
        (0..k).all(|i| {
            let j = self.partner[i] - 1;
            self.partner[(i + steps) % k] - 1 == (j + steps) % k
        })
    }
}

/// Genus and vertex classes of the surface obtained by gluing each side to
/// its partner with opposite orientation.
pub fn quotient_check(word: &PairingWord) -> Result<QuotientReport, HyperbolicError> {
    let k = word.sides;
    let mut parent: Vec<usize> = (0..k).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut union = |a: usize, b: usize| {
        let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    };
    // side i runs from vertex i to vertex i+1
    for i in 0..k {
        let j = word.partner[i] - 1;
        union(i, (j + 1) % k);
        union((i + 1) % k, j);
    }
    let mut sizes = std::collections::BTreeMap::new();
    for v in 0..k {
        *sizes.entry(root(&mut parent, v)).or_insert(0usize) += 1;
    }
    let v = sizes.len() as i64;
    let chi = v - k as i64 / 2 + 1;
    if !k.is_multiple_of(2) || chi % 2 != 0 {
        return Err(HyperbolicError::NonOrientableOrInvalid(format!(
            "Euler characteristic {chi}"
        )));
    }
    let mut classes: Vec<usize> = sizes.into_values().collect();
    classes.sort();
    Ok(QuotientReport {
        genus: (2 - chi) / 2,
        vertex_classes: classes,
    })
}

struct Designation {
    /// canonical index of the period-n pair
    index: usize,
    first: ConePair,
    second: ConePair,
    third: ConePair,
}

fn designations(d: &DataSet) -> Result<Vec<Designation>, HyperbolicError> {
    let canonical = d.canonicalize();
    if d.g0() != 0 || d.classify() != ActionClass::Type1 || d.genus() < 2 {
        return Err(HyperbolicError::NotSphericalType1(d.to_string()));
    }
    let pairs = canonical.pairs();
    let mut out: Vec<Designation> = (0..3)
        .rev()
        .filter(|&i| pairs[i].m == d.n())
        .map(|i| {
            let rest: Vec<ConePair> = (0..3).filter(|&j| j != i).map(|j| pairs[j]).collect();
            Designation {
                index: i + 1,
                first: rest[0],
                second: rest[1],
                third: pairs[i],
            }
        })
        .collect();
    out.dedup_by(|a, b| (a.first, a.second, a.third) == (b.first, b.second, b.third));
    Ok(out)
}

pub fn polygon_spec(d: &DataSet) -> Result<PolygonSpec, HyperbolicError> {
    let des = designations(d)?;
    let Designation { first, second, .. } = des[0];
    let n = d.n();
    let (n1, n2) = (first.m, second.m);
    let (sides, corner_angles) = if n1 != 2 && n2 != 2 {
        let a = [2.0 * PI / n1 as f64, 2.0 * PI / n2 as f64];
        (
            2 * n as usize,
            (0..2 * n as usize).map(|i| a[i % 2]).collect::<Vec<_>>(),
        )
    } else {
        let m = if n1 == 2 { n2 } else { n1 };
        (n as usize, vec![2.0 * PI / m as f64; n as usize])
    };
    Ok(PolygonSpec {
        n,
        sides,
        rotation_steps: sides / n as usize,
        corner_angles,
        theta: 2.0 * PI / n as f64,
        orders: (n1, n2),
        genus: d.genus(),
    })
}

pub fn solve_metrics(spec: &PolygonSpec) -> Result<PolygonMetrics, HyperbolicError> {
    let k = spec.sides;
    if k < 3 || spec.corner_angles.len() != k {
        return Err(HyperbolicError::Mismatch(format!(
            "{k} sides with {} corner angles",
            spec.corner_angles.len()
        )));
    }
    let angle_sum: f64 = spec.corner_angles.iter().sum();
    let bound = (k as f64 - 2.0) * PI;
    if angle_sum >= bound - TOLERANCE {
        return Err(HyperbolicError::NonHyperbolic { angle_sum, bound });
    }
    let apex = 2.0 * PI / k as f64;
    let (sides, vertex_radii): (Vec<f64>, Vec<f64>) = (0..k)
        .map(|i| {
            let a = spec.corner_angles[i] / 2.0;
            let b = spec.corner_angles[(i + 1) % k] / 2.0;
            let c = apex;
            let side = ((a.cos() * b.cos() + c.cos()) / (a.sin() * b.sin())).acosh();
            // the radius to vertex i lies opposite the angle at vertex i+1
            let radius = ((a.cos() * c.cos() + b.cos()) / (a.sin() * c.sin())).acosh();
            (side, radius)
        })
        .unzip();
    let mut side_residual = 0.0f64;
    for i in 0..k {
        let (r1, r2) = (vertex_radii[i], vertex_radii[(i + 1) % k]);
        let from_radii = (r1.cosh() * r2.cosh() - r1.sinh() * r2.sinh() * apex.cos()).acosh();
        side_residual = side_residual.max((from_radii - sides[i]).abs());
        side_residual = side_residual.max((sides[i] - sides[0]).abs());
    }
    let mut radii: Vec<f64> = Vec::new();
    for &r in &vertex_radii {
        if radii.iter().all(|&x| (x - r).abs() > 1e-9) {
            radii.push(r);
        }
    }
    let area = bound - angle_sum;
    let target = 2.0 * PI * (2 * spec.genus - 2) as f64;
    Ok(PolygonMetrics {
        sides: k,
        theta: spec.theta,
        angles: spec.corner_angles.clone(),
        side_length: sides[0],
        vertex_radii,
        radii,
        area,
        genus_check: (area / (2.0 * PI) + 2.0) / 2.0,
        gauss_bonnet_residual: (area - target).abs(),
        side_residual,
        apex_residual: (apex * k as f64 - 2.0 * PI).abs(),
    })
}

/// The side pairing rule `a_{2m+1}^{-1} ~ a_{2z}` (or `a_{m+1}^{-1} ~ a_z`),
/// `z = m + q j mod n`, `q = (n/n2) c^{-1}`, `j = n2 - c2`.
fn pairing_for(n: i64, sides: usize, shift: i64) -> Option<PairingWord> {
    let n_us = n as usize;
    let mut pairs = Vec::new();
    for m in 0..n {
        let z = reduce(m + shift, n);
        let z = if z == 0 { n } else { z } as usize;
        if sides == 2 * n_us {
            pairs.push((2 * m as usize + 1, 2 * z));
        } else {
            pairs.push((m as usize + 1, z));
        }
    }
    let mut partner = vec![0; sides];
    for &(a, b) in &pairs {
        if a == b {
            return None;
        }
        for (x, y) in [(a, b), (b, a)] {
            if partner[x - 1] != 0 && partner[x - 1] != y {
                return None;
            }
            partner[x - 1] = y;
        }
    }
    if partner.contains(&0) {
        return None;
    }
    Some(PairingWord {
        sides,
        partner,
        interpretation: None,
    })
}

fn expected_classes(spec: &PolygonSpec) -> Vec<usize> {
    let n = spec.n as usize;
    let (n1, n2) = (spec.orders.0 as usize, spec.orders.1 as usize);
    let mut out = if spec.sides == 2 * n {
        let mut v = vec![n1; n / n1];
        v.extend(vec![n2; n / n2]);
        v
    } else {
        let m = if n1 == 2 { n2 } else { n1 };
        vec![m; n / m]
    };
    out.sort();
    out
}

/// Tries `c` in `c2, c1, c3` with the inverse taken mod `n2` or mod `n`, for
/// each choice of the period-`n` pair, and returns the first word whose
/// quotient has the right genus and vertex classes.
pub fn pairing_word(d: &DataSet) -> Result<PairingWord, HyperbolicError> {
    let spec = polygon_spec(d)?;
    let n = d.n();
    let want = expected_classes(&spec);
    for des in designations(d)? {
        let (n2, c2) = (des.second.m, des.second.c);
        let j = n2 - c2;
        let readings = [("c2", c2), ("c1", des.first.c), ("c3", des.third.c)];
        for (residue, c) in readings {
            for modulus in [n2, n] {
                let Some(inv) = mod_inverse(c, modulus) else { continue };
                let shift = reduce((n / n2) * inv * j, n);
                let Some(mut word) = pairing_for(n, spec.sides, shift) else {
                    continue;
                };
                match quotient_check(&word) {
                    Ok(q) if q.genus == d.genus() && q.vertex_classes == want => {
                        word.interpretation = Some(Interpretation {
                            designated: des.index,
                            residue,
                            modulus,
                            shift,
                        });
                        return Ok(word);
                    }
                    _ => {}
                }
            }
        }
    }
    Err(HyperbolicError::NoValidInterpretation(d.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ds(n: i64, pairs: &[(i64, i64)]) -> DataSet {
        DataSet::with_pairs(n, 0, pairs).unwrap()
    }

    #[test]
    fn fourteen_gon() {
        let d = ds(14, &[(1, 2), (1, 7), (5, 14)]);
        let spec = polygon_spec(&d).unwrap();
        assert_eq!(spec.sides, 14);
        assert!(spec.corner_angles.iter().all(|&a| (a - 2.0 * PI / 7.0).abs() < 1e-12));
        assert!((spec.theta - 2.0 * PI / 14.0).abs() < 1e-12);
        let m = solve_metrics(&spec).unwrap();
        assert!((m.area - 8.0 * PI).abs() < TOLERANCE);
        let c = (PI / 7.0).cos();
        let s = (PI / 7.0).sin();
        assert!((m.side_length.cosh() - (c * c + c) / (s * s)).abs() < 1e-9);
        let w = pairing_word(&d).unwrap();
        // opposite sides are glued
        assert!((0..14).all(|i| w.partner[i] - 1 == (i + 7) % 14));
        assert_eq!(quotient_check(&w).unwrap().genus, 3);
        assert!(w.is_equivariant(spec.rotation_steps));
    }

    #[test]
    fn twelve_gon_alternates() {
        let spec = polygon_spec(&ds(6, &[(2, 3), (1, 6), (1, 6)])).unwrap();
        assert_eq!(spec.sides, 12);
        assert!((spec.corner_angles[0] - 2.0 * PI / 3.0).abs() < 1e-12);
        assert!((spec.corner_angles[1] - 2.0 * PI / 6.0).abs() < 1e-12);
        let m = solve_metrics(&spec).unwrap();
        assert!((m.area - 4.0 * PI).abs() < TOLERANCE);
        assert_eq!(m.radii.len(), 2);
    }

    #[test]
    fn order_seven_on_genus_three() {
        let d = ds(7, &[(1, 7), (2, 7), (4, 7)]);
        assert_eq!(d.genus(), 3);
        let spec = polygon_spec(&d).unwrap();
        assert_eq!(spec.sides, 14);
        let m = solve_metrics(&spec).unwrap();
        assert!(m.gauss_bonnet_residual < TOLERANCE);
        assert_eq!(m.radii.len(), 1);
        let w = pairing_word(&d).unwrap();
        assert_eq!(
            quotient_check(&w).unwrap(),
            QuotientReport {
                genus: 3,
                vertex_classes: vec![7, 7]
            }
        );
    }

    #[test]
    fn octagon() {
        let w = PairingWord::from_word("a b a^-1 b^-1 c d c^-1 d^-1").unwrap();
        let q = quotient_check(&w).unwrap();
        assert_eq!((q.genus, q.vertex_classes), (2, vec![8]));
        assert_eq!(w.word(), "a b a^-1 b^-1 c d c^-1 d^-1");
    }

    #[test]
    fn filling_word_as_polygon() {
        let w = PairingWord::from_word(crate::fixtures::GAMMA1_WORD).unwrap();
        assert_eq!(quotient_check(&w).unwrap().genus, 2);
    }

    #[test]
    fn rejects_other_actions() {
        let d = DataSet::with_pairs(5, 1, &[(1, 5), (2, 5), (2, 5)]).unwrap();
        assert!(matches!(polygon_spec(&d), Err(HyperbolicError::NotSphericalType1(_))));
        let bad = PolygonSpec {
            n: 3,
            sides: 3,
            rotation_steps: 1,
            corner_angles: vec![PI / 2.0; 3],
            theta: 2.0 * PI / 3.0,
            orders: (2, 3),
            genus: 0,
        };
        assert!(matches!(
            solve_metrics(&bad),
            Err(HyperbolicError::NonHyperbolic { .. })
        ));
    }
}
