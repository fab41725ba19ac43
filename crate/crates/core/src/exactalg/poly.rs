use alloc::collections::btree_map::{BTreeMap, Entry};
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::monomial::{self, Monomial};
use super::rat::Rat;
use crate::{Error, Result};

/// Element of `Q[x_1, .., x_n]`. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// Checked ring operation; fails on mismatched variable counts.
pub fn poly_arith(a: &Polynomial, b: &Polynomial, op: PolyOp) -> Result<Polynomial> {
    if a.nvars != b.nvars {
        return Err(Error::DimensionMismatch {
            expected: a.nvars,
            found: b.nvars,
        });
    }
    Ok(match op {
        PolyOp::Add => a + b,
        PolyOp::Sub => a - b,
        PolyOp::Mul => a * b,
    })
}

/// `∂^α ∗ f`.
pub fn partial_apply(alpha: &Monomial, f: &Polynomial) -> Polynomial {
    f.partial(alpha)
}

/// `f / g` when `g` divides `f` exactly.
pub fn exact_divide(f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
    f.exact_div(g)
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rat::one())
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn term(m: Monomial, c: Rat) -> Self {
        let nvars = m.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { nvars, terms }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::term(Monomial::unit(nvars, i), Rat::one())
    }

    /// `Σ c_i x_i`.
    pub fn linear_form(coeffs: &[Rat]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::unit(n, i), c.clone());
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rat)>>(nvars: usize, terms: I) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial has wrong number of variables");
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending grevlex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> + '_ {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn constant_term(&self) -> Rat {
        self.coefficient(&Monomial::one(self.nvars))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    /// Maximal total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// The common degree of all terms, if there is one.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|m| m.degree());
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += c · x^m · other`.
    pub fn add_scaled_shifted(&mut self, other: &Polynomial, c: &Rat, m: &Monomial) {
        if c.is_zero() {
            return;
        }
        for (om, oc) in &other.terms {
            self.add_term(om.mul(m), oc * c);
        }
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &Polynomial, c: &Rat) {
        if c.is_zero() {
            return;
        }
        for (om, oc) in &other.terms {
            self.add_term(om.clone(), oc * c);
        }
    }

    pub fn scale(&self, c: &Rat) -> Polynomial {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: usize) -> Polynomial {
        let mut acc = Self::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `∂^α ∗ self`.
    pub fn partial(&self, alpha: &Monomial) -> Polynomial {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            if let Some(rest) = alpha.complement_in(m) {
                // ∂^α x^γ = γ!/(γ-α)! x^(γ-α)
                let f = m.factorial() / rest.factorial();
                out.terms.insert(rest, c * Rat::from_integer(f));
            }
        }
        out
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    /// `Some(λ)` with `self = λ · other`, for nonzero `other`.
    pub fn ratio_to(&self, other: &Polynomial) -> Option<Rat> {
        if other.is_zero() || self.terms.len() != other.terms.len() {
            return None;
        }
        let (om, oc) = other.leading_term()?;
        let lambda = self.terms.get(om)? / oc;
        for (m, c) in &other.terms {
            if self.terms.get(m)? != &(c * &lambda) {
                return None;
            }
        }
        Some(lambda)
    }

    /// Exact quotient by `g` using single-divisor reduction in grevlex.
    pub fn exact_div(&self, g: &Polynomial) -> Result<Polynomial> {
        let (q, r) = self.reduce_by(g, true)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::NotDivisible)
        }
    }

    /// `(q, r)` with `self = q·g + r` and no term of `r` divisible by the
    /// leading monomial of `g`. Since `{g}` is a Gröbner basis of `⟨g⟩`, `r`
    /// is the normal form of `self` modulo `g`.
    pub fn div_rem(&self, g: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        self.reduce_by(g, false)
    }

    fn reduce_by(&self, g: &Polynomial, stop_early: bool) -> Result<(Polynomial, Polynomial)> {
        if self.nvars != g.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: g.nvars,
            });
        }
        let (gm, gc) = g.leading_term().ok_or(Error::DivisionByZero)?;
        let (gm, gc) = (gm.clone(), gc.clone());
        let mut work = self.clone();
        let mut quot = Self::zero(self.nvars);
        let mut rem = Self::zero(self.nvars);
        while let Some((m, c)) = work.terms.pop_last() {
            match gm.complement_in(&m) {
                Some(shift) => {
                    let t = c / &gc;
                    // The leading term cancels by construction; it was popped.
                    for (om, oc) in g.terms.iter().rev().skip(1) {
                        work.add_term(om.mul(&shift), -(oc * &t));
                    }
                    quot.terms.insert(shift, t);
                }
                None => {
                    if stop_early {
                        rem.terms.insert(m, c);
                        return Ok((quot, rem));
                    }
                    rem.terms.insert(m, c);
                }
            }
        }
        Ok((quot, rem))
    }

    /// Divides out `factor` as often as possible; returns the multiplicity.
    /// Constant factors are not stripped.
    pub fn strip_factor(&mut self, factor: &Polynomial) -> usize {
        let mut k = 0;
        if self.is_zero() || factor.is_constant() {
            return 0;
        }
        while let Ok(q) = self.exact_div(factor) {
            *self = q;
            k += 1;
        }
        k
    }

    /// Substitutes `x_var = value`; the result keeps `nvars` variables.
    pub fn substitute(&self, var: usize, value: &Rat) -> Polynomial {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exponents()[var];
            let mut coeff = c.clone();
            for _ in 0..e {
                coeff *= value;
            }
            let mut exps: Vec<u16> = m.exponents().to_vec();
            exps[var] = 0;
            out.add_term(Monomial::from_exponents(&exps), coeff);
        }
        out
    }

    /// Multiplies by a scalar making the leading coefficient one; returns
    /// that scalar's inverse (the old leading coefficient).
    pub fn make_monic(&mut self) -> Rat {
        let lc = match self.leading_term() {
            Some((_, c)) => c.clone(),
            None => return Rat::one(),
        };
        let inv = lc.recip();
        for c in self.terms.values_mut() {
            *c *= &inv;
        }
        lc
    }

    /// The homogeneous component of degree `d`.
    pub fn homogeneous_part(&self, d: usize) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn into_terms(self) -> Vec<(Monomial, Rat)> {
        self.terms.into_iter().collect()
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "polynomials in different rings");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "polynomials in different rings");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "polynomials in different rings");
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_scaled_shifted(rhs, c, m);
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if m.is_one() {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                monomial::render(m, "x", f)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
