//! Small integer helpers shared by the combinatorial modules.

use num_integer::Integer;

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// Least common multiple of a list; the empty list has lcm 1.
pub fn lcm_all<I: IntoIterator<Item = i64>>(values: I) -> i64 {
    values.into_iter().fold(1, |acc, v| acc.lcm(&v))
}

/// Non-negative representative of `a` modulo `m`.
pub fn reduce(a: i64, m: i64) -> i64 {
    a.rem_euclid(m)
}

/// Inverse of `a` modulo `m`, if it exists. `m = 1` yields `0`.
pub fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    if m == 1 {
        return Some(0);
    }
    let e = reduce(a, m).extended_gcd(&m);
    if e.gcd != 1 {
        return None;
    }
    Some(reduce(e.x, m))
}

/// Units of `Z/m`, ascending.
pub fn units(m: i64) -> Vec<i64> {
    if m == 1 {
        return vec![0];
    }
    (1..m).filter(|&c| gcd(c, m) == 1).collect()
}

/// Divisors of `n`, ascending.
pub fn divisors(n: i64) -> Vec<i64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverses() {
        assert_eq!(mod_inverse(2, 21), Some(11));
        assert_eq!(mod_inverse(3, 4), Some(3));
        assert_eq!(mod_inverse(5, 14), Some(3));
        assert_eq!(mod_inverse(2, 4), None);
        assert_eq!(mod_inverse(-1, 7), Some(6));
    }

    #[test]
    fn lcm_of_nothing_is_one() {
        assert_eq!(lcm_all([]), 1);
        assert_eq!(lcm_all([6, 14, 21]), 42);
    }

    #[test]
    fn unit_lists() {
        assert_eq!(units(10), vec![1, 3, 7, 9]);
        assert_eq!(units(2), vec![1]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
    }
}
