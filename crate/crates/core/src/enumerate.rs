//! Exhaustive listing of data sets of a given degree and genus.

use rayon::prelude::*;

use crate::arith::{divisors, gcd, lcm_all, reduce, units};
use crate::dataset::{ConePair, DataSet};

/// All canonical data sets `D` with `n(D) = n` and `g(D) = g`, sorted.
///
/// Riemann-Hurwitz in integer form reads
/// `sum_j (n - n/n_j) = n (2 - 2 g0) + 2g - 2`, and every summand is at least
/// `n/2`, which bounds both `g0` and the number of cone points.
pub fn enumerate(n: i64, g: i64) -> Vec<DataSet> {
    assert!(n >= 1 && g >= 0, "enumerate needs n >= 1 and g >= 0");
    if n == 1 {
        return vec![DataSet::new(1, g, 0, Vec::new()).expect("identity action")];
    }

    // cone pair alphabet in canonical order, with integer weights n - n/m
    let alphabet: Vec<(ConePair, i64)> = divisors(n)
        .into_iter()
        .filter(|&m| m >= 2)
        .flat_map(|m| units(m).into_iter().map(move |c| (ConePair::new(c, m), n - n / m)))
        .collect();

    let max_g0 = 1 + (g - 1).div_euclid(n);
    let mut found: Vec<DataSet> = (0..=max_g0.max(0))
        .into_par_iter()
        .flat_map_iter(|g0| {
            let budget = n * (2 - 2 * g0) + 2 * g - 2;
            let mut out = Vec::new();
            if budget == 0 {
                // free rotations: (n, g0, r;)
                for r in 1..n {
                    if gcd(r, n) == 1 {
                        out.push(DataSet::free(n, g0, r).expect("free rotation"));
                    }
                }
            } else if budget > 0 {
                let mut stack = Vec::new();
                extend(n, g0, &alphabet, 0, budget, &mut stack, &mut out);
            }
            out
        })
        .collect();
    found.sort();
    found.dedup();
    found
}

/// Spherical Type 1 actions of order `n` on surfaces of genus at least 2, sorted.
pub fn spherical_type1(n: i64) -> Vec<DataSet> {
    let alphabet: Vec<ConePair> = divisors(n)
        .into_iter()
        .filter(|&m| m >= 2)
        .flat_map(|m| units(m).into_iter().map(move |c| ConePair::new(c, m)))
        .collect();
    let mut out = Vec::new();
    for (i, &a) in alphabet.iter().enumerate() {
        for (j, &b) in alphabet.iter().enumerate().skip(i) {
            for &c in &alphabet[j..] {
                if c.m != n {
                    continue;
                }
                if let Ok(d) = DataSet::new(n, 0, 0, vec![a, b, c]) {
                    if d.genus() >= 2 {
                        out.push(d);
                    }
                }
            }
        }
    }
    out
}

fn extend(
    n: i64,
    g0: i64,
    alphabet: &[(ConePair, i64)],
    start: usize,
    budget: i64,
    stack: &mut Vec<ConePair>,
    out: &mut Vec<DataSet>,
) {
    if budget == 0 {
        if admissible(n, g0, stack) {
            if let Ok(d) = DataSet::new(n, g0, 0, stack.clone()) {
                out.push(d);
            }
        }
        return;
    }
    for i in start..alphabet.len() {
        let (pair, w) = alphabet[i];
        if w > budget {
            continue;
        }
        stack.push(pair);
        extend(n, g0, alphabet, i, budget - w, stack, out);
        stack.pop();
    }
}

// conditions (iv) and (v); the rest hold by construction
fn admissible(n: i64, g0: i64, pairs: &[ConePair]) -> bool {
    if pairs.len() < 2 {
        return false;
    }
    let sum: i64 = pairs.iter().map(|p| (n / p.m) * p.c).sum();
    if reduce(sum, n) != 0 {
        return false;
    }
    let full = lcm_all(pairs.iter().map(|p| p.m));
    if g0 == 0 && full != n {
        return false;
    }
    (0..pairs.len()).all(|i| lcm_all(pairs.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, p)| p.m)) == full)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hyperelliptic_genus_two() {
        let got = enumerate(2, 2);
        let want = vec![
            DataSet::with_pairs(2, 0, &[(1, 2); 6]).unwrap(),
            DataSet::with_pairs(2, 1, &[(1, 2); 2]).unwrap(),
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn identity_action() {
        assert_eq!(enumerate(1, 4), vec![DataSet::new(1, 4, 0, vec![]).unwrap()]);
    }

    #[test]
    fn contains_order_six_quasiplatonic() {
        let d = DataSet::with_pairs(6, 0, &[(2, 3), (1, 6), (1, 6)]).unwrap();
        assert!(enumerate(6, 2).contains(&d));
    }

    #[test]
    fn free_actions_show_up() {
        // g = n (g0 - 1) + 1
        let list = enumerate(3, 4);
        assert!(list.contains(&DataSet::free(3, 2, 1).unwrap()));
        assert!(list.contains(&DataSet::free(3, 2, 2).unwrap()));
    }

    #[test]
    fn outputs_are_canonical_and_sorted() {
        let list = enumerate(12, 3);
        assert!(!list.is_empty());
        assert!(list.iter().all(|d| d.is_canonical() && d.genus() == 3));
        assert!(list.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn spherical_type1_matches_census() {
        for n in 2..=8 {
            let direct = spherical_type1(n);
            let mut census: Vec<DataSet> = (2..=2 * n)
                .flat_map(|g| enumerate(n, g))
                .filter(|d| d.g0() == 0 && d.cone_count() == 3 && d.pairs().iter().any(|p| p.m == n))
                .collect();
            census.sort();
            assert_eq!(direct, census, "order {n}");
        }
    }

    #[test]
    fn empty_when_impossible() {
        // 7 is not an automorphism order in genus 2
        assert!(enumerate(7, 2).is_empty());
    }
}
