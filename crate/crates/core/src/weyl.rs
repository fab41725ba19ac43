//! Homogeneous differential operators `θ = Σ_{|α|=m} f_α ∂^α`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::arrangement::Arrangement;
use crate::exactalg::monomial::{self, Monomial};
use crate::exactalg::{factorial, Polynomial, Rat};
use crate::{Error, Result};

/// An order-`m` operator with polynomial coefficients on the left.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DiffOp {
    nvars: usize,
    order: usize,
    coeffs: BTreeMap<Monomial, Polynomial>,
}

impl DiffOp {
    pub fn zero(nvars: usize, order: usize) -> Self {
        DiffOp {
            nvars,
            order,
            coeffs: BTreeMap::new(),
        }
    }

    /// `f ∂^α`.
    pub fn monomial(alpha: Monomial, f: Polynomial) -> Self {
        let mut d = Self::zero(alpha.nvars(), alpha.degree());
        d.add_term(alpha, f);
        d
    }

    pub fn from_terms(
        nvars: usize,
        order: usize,
        terms: impl IntoIterator<Item = (Monomial, Polynomial)>,
    ) -> Result<Self> {
        let mut d = Self::zero(nvars, order);
        for (a, f) in terms {
            if a.nvars() != nvars || f.nvars() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    found: if a.nvars() != nvars { a.nvars() } else { f.nvars() },
                });
            }
            if a.degree() != order {
                return Err(Error::InvalidArgument(alloc::format!(
                    "∂^{a:?} does not have order {order}"
                )));
            }
            d.add_term(a, f);
        }
        Ok(d)
    }

    /// `Σ_α v_α ∂^α` over `Monomial::all_of_degree(nvars, order)`.
    pub fn from_constant_vector(nvars: usize, order: usize, v: &[Rat]) -> Self {
        let basis = Monomial::all_of_degree(nvars, order);
        assert_eq!(basis.len(), v.len());
        let mut d = Self::zero(nvars, order);
        for (a, c) in basis.into_iter().zip(v) {
            d.add_term(a, Polynomial::constant(nvars, c.clone()));
        }
        d
    }

    /// `(Σ c_i ∂_i)^m`: the coefficient of `∂^α` is `(m!/α!) c^α`.
    pub fn linear_power(c: &[Rat], m: usize) -> Self {
        let n = c.len();
        let mut d = Self::zero(n, m);
        let mf = Rat::from_integer(factorial(m));
        for a in Monomial::all_of_degree(n, m) {
            let mut coef = &mf / Rat::from_integer(a.factorial());
            for (ci, &e) in c.iter().zip(a.exponents()) {
                for _ in 0..e {
                    coef *= ci;
                }
            }
            d.add_term(a, Polynomial::constant(n, coef));
        }
        d
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Polynomial)> + '_ {
        self.coeffs.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, alpha: &Monomial) -> Polynomial {
        self.coeffs
            .get(alpha)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(self.nvars))
    }

    pub fn add_term(&mut self, alpha: Monomial, f: Polynomial) {
        debug_assert_eq!(alpha.degree(), self.order);
        if f.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&alpha) {
            Some(g) => {
                g.add_scaled(&f, &Rat::one());
                if g.is_zero() {
                    self.coeffs.remove(&alpha);
                }
            }
            None => {
                self.coeffs.insert(alpha, f);
            }
        }
    }

    /// `self + c·other`.
    pub fn add_scaled(&self, other: &DiffOp, c: &Rat) -> DiffOp {
        assert_eq!(self.order, other.order, "operators of different order");
        let mut out = self.clone();
        for (a, f) in &other.coeffs {
            out.add_term(a.clone(), f.scale(c));
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> DiffOp {
        let mut out = Self::zero(self.nvars, self.order);
        for (a, f) in &self.coeffs {
            out.add_term(a.clone(), f.scale(c));
        }
        out
    }

    /// `g · θ`.
    pub fn mul_poly(&self, g: &Polynomial) -> DiffOp {
        let mut out = Self::zero(self.nvars, self.order);
        for (a, f) in &self.coeffs {
            out.add_term(a.clone(), f * g);
        }
        out
    }

    /// The common total degree of the coefficients, `None` when they differ
    /// or the operator is zero.
    pub fn pdeg(&self) -> Option<usize> {
        let mut it = self.coeffs.values();
        let d = it.next()?.homogeneous_degree()?;
        for f in it {
            if f.homogeneous_degree()? != d {
                return None;
            }
        }
        Some(d)
    }

    /// Coefficients in `Monomial::all_of_degree` order, if all are constant.
    pub fn constant_vector(&self) -> Option<Vec<Rat>> {
        Monomial::all_of_degree(self.nvars, self.order)
            .iter()
            .map(|a| match self.coeffs.get(a) {
                None => Some(Rat::zero()),
                Some(f) if f.is_constant() => Some(f.constant_term()),
                Some(_) => None,
            })
            .collect()
    }

    /// `(g, L)` with `θ = g · L` and `L` constant-coefficient, if every
    /// coefficient is a scalar multiple of one polynomial.
    pub fn common_factor(&self) -> Option<(Polynomial, Vec<(Monomial, Rat)>)> {
        let (_, g) = self.coeffs.iter().next()?;
        let mut consts = Vec::with_capacity(self.coeffs.len());
        for (a, f) in &self.coeffs {
            consts.push((a.clone(), f.ratio_to(g)?));
        }
        Some((g.clone(), consts))
    }

    /// `θ ∗ f = Σ f_α (∂^α ∗ f)`.
    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        if let Some((g, consts)) = self.common_factor() {
            let inner = apply_constant(&consts, f, self.nvars);
            return &g * &inner;
        }
        let mut out = Polynomial::zero(self.nvars);
        for (a, c) in &self.coeffs {
            let d = f.partial(a);
            if !d.is_zero() {
                out.add_scaled(&(c * &d), &Rat::one());
            }
        }
        out
    }

    /// `ad x_i (θ) = [x_i, θ] = -Σ α_i f_α ∂^{α - e_i}`.
    pub fn adx(&self, i: usize) -> DiffOp {
        let mut out = Self::zero(self.nvars, self.order.saturating_sub(1));
        if self.order == 0 {
            return out;
        }
        for (a, f) in &self.coeffs {
            if let Some(b) = a.with_decremented(i) {
                let k = -Rat::from_integer(a.exponents()[i].into());
                out.add_term(b, f.scale(&k));
            }
        }
        out
    }
}

/// `Σ c_α ∂^α ∗ f` for scalar `c_α`.
fn apply_constant(consts: &[(Monomial, Rat)], f: &Polynomial, nvars: usize) -> Polynomial {
    let mut out = Polynomial::zero(nvars);
    for (a, c) in consts {
        let d = f.partial(a);
        out.add_scaled(&d, c);
    }
    out
}

/// `(ad x)^β θ`, an operator of order `m - |β|` (zero if `|β| > m`).
pub fn adx_pow(theta: &DiffOp, beta: &Monomial) -> DiffOp {
    if beta.degree() > theta.order {
        return DiffOp::zero(theta.nvars, 0);
    }
    let mut cur = theta.clone();
    for (i, &e) in beta.exponents().iter().enumerate() {
        for _ in 0..e {
            cur = cur.adx(i);
        }
    }
    cur
}

/// `θ ∗ f` for the plain function form.
pub fn apply(theta: &DiffOp, f: &Polynomial) -> Polynomial {
    theta.apply(f)
}

/// `ε_m = Σ_{|α|=m} (m!/α!) x^α ∂^α`.
pub fn euler(nvars: usize, m: usize) -> DiffOp {
    let mf = Rat::from_integer(factorial(m));
    let mut d = DiffOp::zero(nvars, m);
    for a in Monomial::all_of_degree(nvars, m) {
        let c = &mf / Rat::from_integer(a.factorial());
        d.add_term(a.clone(), Polynomial::term(a, c));
    }
    d
}

/// Whether `p` is divisible by every polynomial in `factors`, which must be
/// pairwise coprime.
pub fn divisible_by_all(p: &Polynomial, factors: &[Polynomial]) -> bool {
    factors.iter().all(|f| p.exact_div(f).is_ok())
}

/// `θ ∈ D^(m)(⟨Q⟩)` for `Q = ∏ factors` squarefree: `θ ∗ (x^β Q) ∈ ⟨Q⟩`
/// for every `|β| ≤ m - 1`.
pub fn in_dma_factors(theta: &DiffOp, factors: &[Polynomial]) -> bool {
    let n = theta.nvars;
    let q = factors
        .iter()
        .fold(Polynomial::one(n), |acc, f| &acc * f);
    let grouped = theta.common_factor();
    // Forms already dividing the common factor need no further check.
    let needed: Vec<&Polynomial> = match &grouped {
        Some((g, _)) => factors.iter().filter(|f| g.exact_div(f).is_err()).collect(),
        None => factors.iter().collect(),
    };
    let mbound = theta.order.saturating_sub(1);
    for beta in Monomial::all_up_to_degree(n, mbound) {
        let xq = q.mul_monomial(&beta);
        let image = match &grouped {
            Some((_, consts)) => apply_constant(consts, &xq, n),
            None => theta.apply(&xq),
        };
        if !needed.iter().all(|f| image.exact_div(f).is_ok()) {
            return false;
        }
    }
    true
}

/// `θ ∈ D^(m)(A)`.
pub fn in_dma(theta: &DiffOp, arr: &Arrangement) -> bool {
    in_dma_factors(theta, &arr.form_polys())
}

/// `r(r-1)⋯(r-k+1)`.
pub fn falling(r: usize, k: usize) -> Rat {
    let mut acc = Rat::one();
    for i in 0..k {
        acc *= Rat::from_integer((r as i64 - i as i64).into());
    }
    acc
}

/// `γ_k(θ) = θ - (θ∗Q)/Q · ε_k / (r(r-1)⋯(r-k+1))`, which kills `Q`.
pub fn gamma_k(theta: &DiffOp, arr: &Arrangement) -> Result<DiffOp> {
    let k = theta.order;
    let q = arr.defining_poly();
    let ratio = theta
        .apply(&q)
        .exact_div(&q)
        .map_err(|_| Error::NotInDmA { index: 0, order: k })?;
    let denom = falling(arr.r(), k);
    if denom.is_zero() {
        return Err(Error::InvalidArgument(alloc::format!(
            "order {k} exceeds r = {}",
            arr.r()
        )));
    }
    let e = euler(theta.nvars, k).mul_poly(&ratio);
    Ok(theta.add_scaled(&e, &-denom.recip()))
}

/// Inverse of [`gamma_k`]:
/// `θ' ↦ θ' - (θ'∗p)/p · ε_k / k!` with `p = p_1⋯p_k`.
pub fn gamma_k_inverse(theta: &DiffOp, arr: &Arrangement) -> Result<DiffOp> {
    let k = theta.order;
    let p = arr.product_of(0..k);
    let ratio = theta
        .apply(&p)
        .exact_div(&p)
        .map_err(|_| Error::NotInDmA { index: 0, order: k })?;
    let e = euler(theta.nvars, k).mul_poly(&ratio);
    Ok(theta.add_scaled(&e, &-Rat::from_integer(factorial(k)).recip()))
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (a, c)) in self.coeffs.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*")?;
            monomial::render(a, "∂", f)?;
        }
        Ok(())
    }
}

impl fmt::Debug for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::Subset;
    use crate::exactalg::combinat::subsets;
    use crate::exactalg::{rat, rat_frac};
    use alloc::vec;

    fn x(n: usize, i: usize) -> Polynomial {
        Polynomial::var(n, i)
    }

    fn d(e: &[u16]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn action_examples() {
        let q = Arrangement::coordinate(3).defining_poly();
        assert_eq!(euler(3, 1).apply(&q), q.scale(&rat(3)));
        let x_d1 = DiffOp::monomial(d(&[1, 0]), x(2, 0));
        let xx = &x(2, 0) * &x(2, 0);
        assert_eq!(x_d1.apply(&xx), xx.scale(&rat(2)));
    }

    #[test]
    fn dual_basis_law() {
        let a = Arrangement::from_integers(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]])
            .unwrap();
        let m = a.r() - a.n() + 1;
        let hs = subsets(a.r(), a.n() - 1);
        for h in &hs {
            let dm = DiffOp::linear_power(&a.delta_h(h).unwrap(), m);
            for h2 in &hs {
                let v = dm.apply(&a.p_h(h2));
                assert_eq!(v.is_zero(), h != h2, "{h} {h2}");
            }
        }
    }

    #[test]
    fn pdeg_examples() {
        let a = Arrangement::from_integers(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]])
            .unwrap();
        let h = Subset::new(vec![0, 1]);
        let op = DiffOp::linear_power(&a.delta_h(&h).unwrap(), 2).mul_poly(&a.p_h(&h));
        assert_eq!(op.pdeg(), Some(2));
        assert_eq!(euler(3, 3).pdeg(), Some(3));
        let mut mixed = DiffOp::monomial(d(&[2, 0]), x(2, 0));
        mixed.add_term(d(&[0, 2]), Polynomial::one(2));
        assert_eq!(mixed.pdeg(), None);
    }

    #[test]
    fn adx_examples() {
        let d11 = DiffOp::monomial(d(&[2, 0]), Polynomial::one(2));
        let expected = DiffOp::monomial(d(&[1, 0]), Polynomial::constant(2, rat(-2)));
        assert_eq!(adx_pow(&d11, &d(&[1, 0])), expected);
        assert_eq!(adx_pow(&d11, &d(&[0, 0])), d11);
        // -(ad x_1)(∂_1²/2!) = ∂_1
        let half = d11.scale(&rat_frac(1, 2));
        let lhs = adx_pow(&half, &d(&[1, 0])).scale(&rat(-1));
        assert_eq!(lhs, DiffOp::monomial(d(&[1, 0]), Polynomial::one(2)));
        assert!(adx_pow(&d11, &d(&[2, 1])).is_zero());
    }

    #[test]
    fn membership_examples() {
        // The arrangement {x = 0} in two variables, as a single factor.
        let fx = vec![x(2, 0)];
        assert!(in_dma_factors(&DiffOp::monomial(d(&[1, 0]), x(2, 0)), &fx));
        assert!(!in_dma_factors(&DiffOp::monomial(d(&[1, 0]), Polynomial::one(2)), &fx));
        let a = Arrangement::from_integers(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1], &[1, 2, 3]])
            .unwrap();
        for m in 1..=3 {
            for h in subsets(a.r(), 2) {
                let op = DiffOp::linear_power(&a.delta_h(&h).unwrap(), m).mul_poly(&a.p_h(&h));
                assert!(in_dma(&op, &a));
            }
        }
        assert!(!in_dma(&DiffOp::monomial(d(&[1, 0, 0]), x(3, 0)), &a));
    }

    #[test]
    fn euler_examples() {
        let e1 = euler(2, 1);
        let mut expected = DiffOp::monomial(d(&[1, 0]), x(2, 0));
        expected.add_term(d(&[0, 1]), x(2, 1));
        assert_eq!(e1, expected);
        let e2 = euler(2, 2);
        assert_eq!(e2.coeff(&d(&[1, 1])), (&x(2, 0) * &x(2, 1)).scale(&rat(2)));
        let xx = &x(2, 0) * &x(2, 0);
        assert_eq!(e2.apply(&xx), xx.scale(&rat(2)));
    }

    #[test]
    fn gamma_examples() {
        let a = Arrangement::coordinate(3);
        let theta = DiffOp::monomial(d(&[1, 0, 0]), x(3, 0));
        let g = gamma_k(&theta, &a).unwrap();
        let expected = theta.add_scaled(&euler(3, 1), &rat_frac(-1, 3));
        assert_eq!(g, expected);
        assert!(g.apply(&a.defining_poly()).is_zero());
        assert!(in_dma(&g, &a));
        let fixed = gamma_k(&g, &a).unwrap();
        assert_eq!(fixed, g);
        let b = Arrangement::from_integers(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1], &[1, 2, 3]])
            .unwrap();
        // P_H δ_H with 1 ∈ H kills p_1.
        let h = Subset::new(vec![0, 3]);
        let op = DiffOp::linear_power(&b.delta_h(&h).unwrap(), 1).mul_poly(&b.p_h(&h));
        let g = gamma_k(&op, &b).unwrap();
        assert!(g.apply(&b.defining_poly()).is_zero());
        assert_eq!(gamma_k_inverse(&g, &b).unwrap(), op);
    }
}
