use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_traits::One;
use smallvec::SmallVec;

use super::combinat::{binom, factorial};

/// Exponent vector `α`, standing for `x^α` or `∂^α` depending on context.
///
/// `Ord` is graded reverse lexicographic: higher total degree is larger, and
/// among equal degrees the monomial with the smaller exponent in the last
/// differing variable is larger (`x1 > x2 > ... > xn`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(SmallVec<[u16; 6]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn from_exponents(exps: &[u16]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn unit(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.0[i] = 1;
        m
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    /// Componentwise `self ≤ other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other - self` when `self ≤ other` componentwise.
    pub fn complement_in(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial(
            self.0.iter().zip(other.0.iter()).map(|(a, b)| b - a).collect(),
        ))
    }

    pub fn with_incremented(&self, i: usize) -> Monomial {
        let mut m = self.clone();
        m.0[i] += 1;
        m
    }

    pub fn with_decremented(&self, i: usize) -> Option<Monomial> {
        if self.0[i] == 0 {
            return None;
        }
        let mut m = self.clone();
        m.0[i] -= 1;
        Some(m)
    }

    /// `α! = α_1! ⋯ α_n!`.
    pub fn factorial(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::one(), |acc, &e| acc * factorial(e as usize))
    }

    /// `C(α, β) = ∏ C(α_i, β_i)`.
    pub fn binom(&self, beta: &Monomial) -> i64 {
        self.0
            .iter()
            .zip(beta.0.iter())
            .map(|(&a, &b)| binom(a as i64, b as i64))
            .product()
    }

    /// All exponent vectors of total degree `d` in `nvars` variables, in
    /// descending grevlex order (`x1^d` first).
    pub fn all_of_degree(nvars: usize, d: usize) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = SmallVec::from_elem(0u16, nvars);
        fill(&mut out, &mut cur, 0, d);
        out.sort_by(|a, b| b.cmp(a));
        out
    }

    /// All exponent vectors with total degree `≤ d`: by ascending degree,
    /// descending grevlex within a degree.
    pub fn all_up_to_degree(nvars: usize, d: usize) -> Vec<Monomial> {
        (0..=d).flat_map(|k| Self::all_of_degree(nvars, k)).collect()
    }

    /// All `β ≤ self` componentwise.
    pub fn divisors(&self) -> Vec<Monomial> {
        let mut out = alloc::vec![Monomial::one(self.nvars())];
        for i in 0..self.nvars() {
            let mut next = Vec::new();
            for m in &out {
                for e in 0..=self.0[i] {
                    let mut m = m.clone();
                    m.0[i] = e;
                    next.push(m);
                }
            }
            out = next;
        }
        out
    }
}

fn fill(out: &mut Vec<Monomial>, cur: &mut SmallVec<[u16; 6]>, i: usize, left: usize) {
    let n = cur.len();
    if n == 0 {
        if left == 0 {
            out.push(Monomial(cur.clone()));
        }
        return;
    }
    if i == n - 1 {
        cur[i] = left as u16;
        out.push(Monomial(cur.clone()));
        cur[i] = 0;
        return;
    }
    for e in 0..=left {
        cur[i] = e as u16;
        fill(out, cur, i + 1, left - e);
    }
    cur[i] = 0;
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for (a, b) in self.0.iter().zip(other.0.iter()).rev() {
            if a != b {
                return b.cmp(a);
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

/// Renders `x^α` as e.g. `x1^2*x3`, using `sym` as the variable stem.
pub fn render(m: &Monomial, sym: &str, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        write!(f, "{}{}", sym, i + 1)?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    if first {
        write!(f, "1")?;
    }
    Ok(())
}
