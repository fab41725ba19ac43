use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::One;

use crate::arrangement::Subset;

/// Binomial coefficient extended to negative upper index,
/// `C(a, k) = a(a-1)...(a-k+1)/k!`, and `0` for `k < 0`.
pub fn binom(a: i64, k: i64) -> i64 {
    if k < 0 {
        return 0;
    }
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for i in 0..k {
        num *= (a - i) as i128;
        den *= (i + 1) as i128;
        let g = gcd_i128(num, den);
        num /= g;
        den /= g;
    }
    (num / den) as i64
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    if a == 0 {
        1
    } else {
        a
    }
}

pub fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// All `k`-subsets of `{0, .., r-1}` in lexicographic order.
pub fn subsets(r: usize, k: usize) -> Vec<Subset> {
    use itertools::Itertools;
    (0..r).combinations(k).map(Subset::from_sorted).collect()
}

/// All `k`-subsets of the given sorted index list, lexicographic.
pub fn subsets_of(items: &[usize], k: usize) -> Vec<Subset> {
    use itertools::Itertools;
    items
        .iter()
        .copied()
        .combinations(k)
        .map(Subset::from_sorted)
        .collect()
}
