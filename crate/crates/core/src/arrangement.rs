//! Generic central arrangements of hyperplanes through the origin.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactalg::combinat::subsets;
use crate::exactalg::rat::{primitive_integer, rat};
use crate::exactalg::{Polynomial, QMatrix, Rat};
use crate::{Error, Result};

/// A sorted set of hyperplane indices (0-based; displayed 1-based).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Subset(Vec<usize>);

impl Subset {
    pub fn empty() -> Self {
        Subset(Vec::new())
    }

    /// From indices that are already strictly increasing.
    pub fn from_sorted(v: Vec<usize>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        Subset(v)
    }

    pub fn new(mut v: Vec<usize>) -> Self {
        v.sort_unstable();
        v.dedup();
        Subset(v)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn with(&self, i: usize) -> Subset {
        let mut v = self.0.clone();
        if let Err(pos) = v.binary_search(&i) {
            v.insert(pos, i);
        }
        Subset(v)
    }

    pub fn without(&self, i: usize) -> Subset {
        Subset(self.0.iter().copied().filter(|&h| h != i).collect())
    }

    pub fn union(&self, other: &Subset) -> Subset {
        let mut v: Vec<usize> = self.0.iter().chain(&other.0).copied().collect();
        v.sort_unstable();
        v.dedup();
        Subset(v)
    }

    pub fn intersection(&self, other: &Subset) -> Subset {
        Subset(self.0.iter().copied().filter(|&i| other.contains(i)).collect())
    }

    pub fn is_disjoint(&self, other: &Subset) -> bool {
        self.0.iter().all(|&i| !other.contains(i))
    }

    /// `#{h' ∈ self : h' < h}`, the sign exponent of removing `h`.
    pub fn position_of(&self, h: usize) -> usize {
        self.0.iter().take_while(|&&x| x < h).count()
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Outcome of [`Arrangement::check_generic`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Genericity {
    Generic,
    /// `n` hyperplanes whose normals are linearly dependent.
    Witness(Subset),
}

/// `r` linear forms in `n` variables, stored as primitive integer vectors.
#[derive(Clone, PartialEq, Eq)]
pub struct Arrangement {
    n: usize,
    forms: Vec<Vec<Rat>>,
}

impl Arrangement {
    /// Validates shape only; see [`Arrangement::generic`] for the full check.
    pub fn new(n: usize, forms: Vec<Vec<Rat>>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArrangement(format!("n = {n} must be at least 2")));
        }
        if forms.len() < n {
            return Err(Error::InvalidArrangement(format!(
                "r = {} must be at least n = {n}",
                forms.len()
            )));
        }
        let mut stored = Vec::with_capacity(forms.len());
        for (i, f) in forms.iter().enumerate() {
            if f.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: f.len(),
                });
            }
            if f.iter().all(Zero::is_zero) {
                return Err(Error::InvalidArrangement(format!("form {} is zero", i + 1)));
            }
            stored.push(primitive_integer(f).into_iter().map(Rat::from_integer).collect());
        }
        Ok(Arrangement { n, forms: stored })
    }

    /// Like [`Arrangement::new`], additionally rejecting non-generic input.
    pub fn generic(n: usize, forms: Vec<Vec<Rat>>) -> Result<Self> {
        let a = Self::new(n, forms)?;
        match a.check_generic() {
            Genericity::Generic => Ok(a),
            Genericity::Witness(s) => Err(Error::NotGeneric(s)),
        }
    }

    pub fn from_integers(n: usize, forms: &[&[i64]]) -> Result<Self> {
        Self::generic(
            n,
            forms.iter().map(|f| f.iter().map(|&c| rat(c)).collect()).collect(),
        )
    }

    /// The coordinate hyperplanes `x_1, .., x_n`.
    pub fn coordinate(n: usize) -> Self {
        let forms = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
            .collect();
        Arrangement { n, forms }
    }

    /// The coordinate hyperplanes followed by `r - n` seeded random forms.
    pub fn random_generic(n: usize, r: usize, seed: u64) -> Result<Self> {
        if r < n {
            return Err(Error::InvalidArrangement(format!("r = {r} must be at least n = {n}")));
        }
        Self::coordinate(n).generic_extension(r, seed)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.forms.len()
    }

    pub fn forms(&self) -> &[Vec<Rat>] {
        &self.forms
    }

    pub fn form(&self, i: usize) -> &[Rat] {
        &self.forms[i]
    }

    /// `p_H` as a polynomial.
    pub fn form_poly(&self, i: usize) -> Polynomial {
        Polynomial::linear_form(&self.forms[i])
    }

    pub fn form_polys(&self) -> Vec<Polynomial> {
        (0..self.r()).map(|i| self.form_poly(i)).collect()
    }

    /// First non-generic `n`-subset in lexicographic order, if any.
    pub fn check_generic(&self) -> Genericity {
        for s in subsets(self.r(), self.n) {
            let rows = s.indices().iter().map(|&i| self.forms[i].clone()).collect();
            let m = QMatrix::from_rows(self.n, rows).expect("rows have length n");
            if m.det().expect("square").is_zero() {
                return Genericity::Witness(s);
            }
        }
        Genericity::Generic
    }

    /// `Q = ∏ p_H`.
    pub fn defining_poly(&self) -> Polynomial {
        self.product_of(0..self.r())
    }

    /// `∏_{i ∈ idx} p_i`.
    pub fn product_of(&self, idx: impl IntoIterator<Item = usize>) -> Polynomial {
        let mut q = Polynomial::one(self.n);
        for i in idx {
            q = &q * &self.form_poly(i);
        }
        q
    }

    /// `δ_H` for `|H| = n-1`: the normalized vector `c` with `Σ c_i ∂_i`
    /// killing exactly the forms in `H`.
    pub fn delta_h(&self, h: &Subset) -> Result<Vec<Rat>> {
        if h.len() != self.n - 1 {
            return Err(Error::InvalidArgument(format!(
                "δ_H needs |H| = {}, got {h}",
                self.n - 1
            )));
        }
        if h.indices().iter().any(|&i| i >= self.r()) {
            return Err(Error::InvalidArgument(format!("{h} is out of range")));
        }
        let rows = h.indices().iter().map(|&i| self.forms[i].clone()).collect();
        let m = QMatrix::from_rows(self.n, rows)?;
        let mut ns = m.nullspace();
        if ns.len() != 1 {
            return Err(Error::NotGeneric(h.clone()));
        }
        Ok(ns.pop().expect("one vector"))
    }

    /// `P_{H_1..H_k} = ∏_{H ∉ ∩ H_i} p_H`.
    pub fn ph_product(&self, hs: &[Subset]) -> Polynomial {
        let Some(first) = hs.first() else {
            return self.defining_poly();
        };
        let inter = hs[1..].iter().fold(first.clone(), |acc, h| acc.intersection(h));
        self.product_of((0..self.r()).filter(|&i| !inter.contains(i)))
    }

    /// `P_H`, of degree `r - |H|`.
    pub fn p_h(&self, h: &Subset) -> Polynomial {
        self.product_of((0..self.r()).filter(|&i| !h.contains(i)))
    }

    /// Appends random integer forms until there are `target_r`, keeping the
    /// arrangement generic. Deterministic in `seed`.
    pub fn generic_extension(&self, target_r: usize, seed: u64) -> Result<Arrangement> {
        const PER_BOUND: usize = 64;
        const DOUBLINGS: u32 = 12;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = self.clone();
        let mut attempts = 0;
        while out.r() < target_r {
            let normals: Vec<Vec<Rat>> = subsets(out.r(), self.n - 1)
                .iter()
                .map(|h| out.delta_h(h))
                .collect::<Result<_>>()?;
            let mut found = None;
            'search: for k in 0..DOUBLINGS {
                let bound = 10i64 << k;
                for _ in 0..PER_BOUND {
                    attempts += 1;
                    let v: Vec<Rat> = (0..self.n).map(|_| rat(rng.gen_range(-bound..=bound))).collect();
                    // v is independent of the n-1 forms in H iff <δ_H, v> ≠ 0.
                    let ok = v.iter().any(|c| !c.is_zero())
                        && normals.iter().all(|d| {
                            let dot: Rat = d.iter().zip(&v).map(|(a, b)| a * b).sum();
                            !dot.is_zero()
                        });
                    if ok {
                        found = Some(v);
                        break 'search;
                    }
                }
            }
            let v = found.ok_or(Error::ExtensionFailed { attempts })?;
            out.forms.push(primitive_integer(&v).into_iter().map(Rat::from_integer).collect());
        }
        Ok(out)
    }

    /// The first `k` forms as an arrangement of its own.
    pub fn restrict_to_first(&self, k: usize) -> Result<Arrangement> {
        Arrangement::new(self.n, self.forms[..k].to_vec())
    }
}

impl fmt::Debug for Arrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Arrangement(n={}, [", self.n)?;
        for (i, p) in self.forms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", Polynomial::linear_form(p))?;
        }
        write!(f, "])")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn s(v: &[usize]) -> Subset {
        Subset::new(v.iter().map(|i| i - 1).collect())
    }

    #[test]
    fn genericity_examples() {
        let a = Arrangement::new(3, vec![
            vec![rat(1), rat(0), rat(0)],
            vec![rat(0), rat(1), rat(0)],
            vec![rat(0), rat(0), rat(1)],
            vec![rat(1), rat(1), rat(1)],
        ])
        .unwrap();
        assert_eq!(a.check_generic(), Genericity::Generic);

        let dup = Arrangement::new(2, vec![
            vec![rat(1), rat(0)],
            vec![rat(0), rat(1)],
            vec![rat(1), rat(0)],
        ])
        .unwrap();
        assert_eq!(dup.check_generic(), Genericity::Witness(s(&[1, 3])));
        assert_eq!(Arrangement::coordinate(2).check_generic(), Genericity::Generic);
    }

    #[test]
    fn defining_polynomials() {
        assert_eq!(Arrangement::coordinate(2).defining_poly().to_string(), "x1*x2");
        assert_eq!(Arrangement::coordinate(3).defining_poly().to_string(), "x1*x2*x3");
        let a = Arrangement::from_integers(2, &[&[1, 0], &[0, 1], &[1, 1]]).unwrap();
        assert_eq!(a.defining_poly().to_string(), "x1^2*x2 + x1*x2^2");
    }

    #[test]
    fn delta_examples() {
        let a = Arrangement::from_integers(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]])
            .unwrap();
        assert_eq!(a.delta_h(&s(&[1, 2])).unwrap(), vec![rat(0), rat(0), rat(1)]);
        assert_eq!(a.delta_h(&s(&[1, 4])).unwrap(), vec![rat(0), rat(1), rat(-1)]);
        let b = Arrangement::from_integers(2, &[&[1, -1], &[1, 0]]).unwrap();
        assert_eq!(b.delta_h(&s(&[1])).unwrap(), vec![rat(1), rat(1)]);
    }

    #[test]
    fn complement_products() {
        let a = Arrangement::from_integers(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]])
            .unwrap();
        let expected = &a.form_poly(2) * &a.form_poly(3);
        assert_eq!(a.ph_product(&[s(&[1, 2])]), expected);
        assert_eq!(a.ph_product(&[s(&[1, 2]), s(&[1, 2])]), expected);
        let b = Arrangement::coordinate(2);
        assert_eq!(b.ph_product(&[s(&[1])]), b.form_poly(1));
    }

    #[test]
    fn extensions() {
        let a = Arrangement::coordinate(3);
        assert_eq!(a.generic_extension(3, 7).unwrap(), a);
        let e = a.generic_extension(4, 7).unwrap();
        assert_eq!(e.r(), 4);
        assert_eq!(e.check_generic(), Genericity::Generic);
        assert_eq!(e, a.generic_extension(4, 7).unwrap());
        let f = Arrangement::coordinate(2).generic_extension(5, 1).unwrap();
        assert_eq!(f.check_generic(), Genericity::Generic);
    }
}
