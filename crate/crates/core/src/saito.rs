//! The coefficient matrix `M_m` and the Saito–Holm freeness criterion.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::arrangement::Arrangement;
use crate::exactalg::{binom, FactoredDet, Monomial, PolyMatrix, Rat};
use crate::weyl::{in_dma, DiffOp};
use crate::{Error, Result};

/// `(s_m, t_m) = (C(n+m-1, m), C(n+m-2, m-1))`.
pub fn sm_tm(n: usize, m: usize) -> (usize, usize) {
    let (n, m) = (n as i64, m as i64);
    (binom(n + m - 1, m) as usize, binom(n + m - 2, m - 1) as usize)
}

/// Multiset of polynomial degrees: degree ↦ multiplicity.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExpMultiset(pub BTreeMap<usize, usize>);

impl ExpMultiset {
    pub fn from_degrees(degs: impl IntoIterator<Item = usize>) -> Self {
        let mut m = BTreeMap::new();
        for d in degs {
            *m.entry(d).or_insert(0) += 1;
        }
        ExpMultiset(m)
    }

    pub fn add(&mut self, degree: usize, count: usize) {
        if count > 0 {
            *self.0.entry(degree).or_insert(0) += count;
        }
    }

    pub fn count(&self) -> usize {
        self.0.values().sum()
    }

    pub fn degree_sum(&self) -> usize {
        self.0.iter().map(|(k, e)| k * e).sum()
    }

    /// `Σ e_k = s_m` and `Σ k e_k = r t_m`.
    pub fn satisfies_rank_identities(&self, n: usize, r: usize, m: usize) -> bool {
        let (s, t) = sm_tm(n, m);
        self.count() == s && self.degree_sum() == r * t
    }
}

impl core::fmt::Display for ExpMultiset {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{{")?;
        for (i, (k, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k}^{e}")?;
        }
        write!(f, "}}")
    }
}

/// `M_m`: entry `(i, j)` is `θ_j ∗ (x^{α_i} / α_i!)`, rows in descending
/// grevlex order of `α_i`. Since `|α_i| = m` this is the coefficient of
/// `∂^{α_i}` in `θ_j`.
pub fn coefficient_matrix(thetas: &[DiffOp], n: usize, m: usize) -> Result<PolyMatrix> {
    let (s, _) = sm_tm(n, m);
    if thetas.len() != s {
        return Err(Error::InvalidArgument(format!(
            "expected s_m = {s} operators, got {}",
            thetas.len()
        )));
    }
    for (j, t) in thetas.iter().enumerate() {
        if t.order() != m || t.nvars() != n {
            return Err(Error::InvalidArgument(format!(
                "operator #{} has order {} in {} variables, expected order {m} in {n}",
                j + 1,
                t.order(),
                t.nvars()
            )));
        }
    }
    let alphas = Monomial::all_of_degree(n, m);
    let cols = thetas
        .iter()
        .map(|t| alphas.iter().map(|a| t.coeff(a)).collect())
        .collect();
    PolyMatrix::from_cols(s, n, cols)
}

/// Outcome of the Saito–Holm test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaitoReport {
    /// `det M_m = c Q^{t_m}` with `c ≠ 0`.
    pub basis: bool,
    /// `c` when `basis` holds. The sign depends on the row order convention.
    pub c: Option<Rat>,
    /// Total degree of `det M_m`, `None` if the determinant vanishes.
    pub det_degree: Option<usize>,
    /// Multiplicity of each `p_H` in `det M_m`.
    pub multiplicities: Vec<usize>,
    pub t_m: usize,
}

/// Checks membership of each operator, then factors `det M_m` over the
/// forms of `arr`: a basis iff every form occurs exactly `t_m` times and the
/// cofactor is a nonzero constant.
pub fn saito_holm_check(thetas: &[DiffOp], arr: &Arrangement) -> Result<SaitoReport> {
    let n = arr.n();
    let m = thetas.first().map_or(0, DiffOp::order);
    if m == 0 {
        return Err(Error::InvalidArgument("no operators of positive order".into()));
    }
    let mat = coefficient_matrix(thetas, n, m)?;
    for (j, t) in thetas.iter().enumerate() {
        if !in_dma(t, arr) {
            return Err(Error::NotInDmA { index: j + 1, order: m });
        }
    }
    let (_, t) = sm_tm(n, m);
    let factors = arr.form_polys();
    let fd = FactoredDet::compute(&mat, &factors)?;
    let det_degree = fd
        .residual
        .total_degree()
        .map(|d| d + fd.multiplicities.iter().sum::<usize>());
    let basis = !fd.residual.is_zero()
        && fd.residual.is_constant()
        && fd.multiplicities.iter().all(|&k| k == t);
    let c = basis.then(|| fd.residual.constant_term());
    debug_assert!(c.as_ref().map_or(true, |c| !c.is_zero()));
    Ok(SaitoReport {
        basis,
        c,
        det_degree,
        multiplicities: fd.multiplicities,
        t_m: t,
    })
}

/// `Σ pdeg θ_j = r t_m`.
pub fn degree_sum_check(thetas: &[DiffOp], arr: &Arrangement) -> bool {
    let Some(m) = thetas.first().map(DiffOp::order) else {
        return false;
    };
    let (_, t) = sm_tm(arr.n(), m);
    let mut sum = 0;
    for th in thetas {
        match th.pdeg() {
            Some(d) => sum += d,
            None => return false,
        }
    }
    sum == arr.r() * t
}

/// The pdeg multiset of homogeneous operators.
pub fn observed_exponents(thetas: &[DiffOp]) -> Option<ExpMultiset> {
    let degs: Option<Vec<usize>> = thetas.iter().map(DiffOp::pdeg).collect();
    degs.map(ExpMultiset::from_degrees)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, Polynomial};
    use alloc::vec;

    fn x(n: usize, i: usize) -> Polynomial {
        Polynomial::var(n, i)
    }

    fn d(e: &[u16]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn s_and_t() {
        for m in 1..6 {
            assert_eq!(sm_tm(2, m), (m + 1, m));
        }
        assert_eq!(sm_tm(3, 2), (6, 3));
        assert_eq!(sm_tm(3, 1), (3, 1));
    }

    #[test]
    fn matrix_matches_action() {
        let ops = vec![
            DiffOp::monomial(d(&[1, 0]), x(2, 0)),
            DiffOp::monomial(d(&[0, 1]), x(2, 1)),
        ];
        let m = coefficient_matrix(&ops, 2, 1).unwrap();
        assert_eq!(m.get(0, 0), &x(2, 0));
        assert_eq!(m.get(1, 1), &x(2, 1));
        assert!(m.get(0, 1).is_zero() && m.get(1, 0).is_zero());
        let e = crate::weyl::euler(3, 2);
        let alphas = Monomial::all_of_degree(3, 2);
        for a in &alphas {
            let monom = Polynomial::term(a.clone(), Rat::from_integer(a.factorial()).recip());
            assert_eq!(e.apply(&monom), e.coeff(a));
        }
    }

    #[test]
    fn saito_examples() {
        let a = Arrangement::coordinate(2);
        let ops = vec![
            DiffOp::monomial(d(&[1, 0]), x(2, 0)),
            DiffOp::monomial(d(&[0, 1]), x(2, 1)),
        ];
        let rep = saito_holm_check(&ops, &a).unwrap();
        assert!(rep.basis);
        assert_eq!(rep.c, Some(rat(1)));
        assert_eq!(rep.det_degree, Some(2));
        assert!(degree_sum_check(&ops, &a));

        // x∂_2 is not in D(A) here, so it is rejected before the determinant.
        let bad = vec![ops[0].clone(), DiffOp::monomial(d(&[0, 1]), x(2, 0))];
        assert!(matches!(saito_holm_check(&bad, &a), Err(Error::NotInDmA { index: 2, .. })));
        let bad = vec![ops[0].clone(), DiffOp::monomial(d(&[0, 1]), &x(2, 0) * &x(2, 1))];
        let rep = saito_holm_check(&bad, &a).unwrap();
        assert!(!rep.basis);
        assert_eq!(rep.multiplicities, vec![2, 1]);

        let same = vec![ops[0].clone(), ops[0].clone()];
        let rep = saito_holm_check(&same, &a).unwrap();
        assert!(!rep.basis);
        assert_eq!(rep.det_degree, None);

        let outside = vec![ops[0].clone(), DiffOp::monomial(d(&[0, 1]), Polynomial::one(2))];
        assert_eq!(
            saito_holm_check(&outside, &a),
            Err(Error::NotInDmA { index: 2, order: 1 })
        );
    }
}
