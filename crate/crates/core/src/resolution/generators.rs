//! Minimal generators of `Ξ^(m)(A) = {θ ∈ D^(m)(A) : θ ∗ (p_1⋯p_m) = 0}`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::arrangement::{Arrangement, Subset};
use crate::exactalg::combinat::subsets;
use crate::exactalg::{binom, factorial, Monomial, Polynomial, QMatrix, Rat};
use crate::weyl::{euler, DiffOp};
use crate::Result;

/// `σ_0 = {0, …, m-1}`, the first `m` hyperplanes.
pub fn sigma0(m: usize) -> Subset {
    Subset::from_sorted((0..m).collect())
}

/// The `(n-1)`-subsets `H` with `H ∩ σ_0 ≠ ∅`, in lexicographic order.
pub fn generator_subsets(arr: &Arrangement, m: usize) -> Vec<Subset> {
    let s = sigma0(m);
    subsets(arr.r(), arr.n() - 1)
        .into_iter()
        .filter(|h| !h.is_disjoint(&s))
        .collect()
}

/// `{P_H δ_H^m : H ∩ {H_1, …, H_m} ≠ ∅}`.
pub fn minimal_generators_xi(arr: &Arrangement, m: usize) -> Result<Vec<DiffOp>> {
    generator_subsets(arr, m)
        .iter()
        .map(|h| {
            let d = arr.delta_h(h)?;
            Ok(DiffOp::linear_power(&d, m).mul_poly(&arr.p_h(h)))
        })
        .collect()
}

/// `C(r, n-1) - C(r-m, n-1)`.
pub fn expected_generator_count(n: usize, r: usize, m: usize) -> usize {
    let (n, r, m) = (n as i64, r as i64, m as i64);
    (binom(r, n - 1) - binom(r - m, n - 1)) as usize
}

/// `C(r, n-1) - C(r-m, n-1) + 1 > C(n+m-1, n-1)`: more generators than a
/// free module of rank `s_m` could need.
pub fn non_freeness_inequality(n: usize, r: usize, m: usize) -> bool {
    let (n_, m_) = (n as i64, m as i64);
    expected_generator_count(n, r, m) as i64 + 1 > binom(n_ + m_ - 1, n_ - 1)
}

/// Rank over `Q` of the operators as vectors of their `(∂^α, x^u)`
/// coefficients.
pub fn linear_rank(ops: &[DiffOp]) -> usize {
    let mut index: BTreeMap<(Monomial, Monomial), usize> = BTreeMap::new();
    let mut entries: Vec<Vec<(usize, Rat)>> = Vec::new();
    for op in ops {
        let mut row = Vec::new();
        for (a, f) in op.terms() {
            for (u, c) in f.terms() {
                let next = index.len();
                let k = *index.entry((a.clone(), u.clone())).or_insert(next);
                row.push((k, c.clone()));
            }
        }
        entries.push(row);
    }
    let mut mat = QMatrix::zeros(ops.len(), index.len());
    for (i, row) in entries.into_iter().enumerate() {
        for (k, c) in row {
            mat.set(i, k, c);
        }
    }
    mat.rank()
}

/// Whether `θ ∗ (p_1⋯p_m) = 0`.
pub fn kills_first_forms(theta: &DiffOp, arr: &Arrangement, m: usize) -> bool {
    theta.apply(&arr.product_of(0..m)).is_zero()
}

/// Splits `θ ∈ D^(m)(A)` as `ξ + g ε_m` with `ξ ∈ Ξ^(m)(A)`, using
/// `ε_m ∗ f = m! f` for `f = p_1⋯p_m`.
pub fn split_euler(theta: &DiffOp, arr: &Arrangement) -> Result<(DiffOp, Polynomial)> {
    let m = theta.order();
    let f = arr.product_of(0..m);
    let g = theta
        .apply(&f)
        .exact_div(&f)?
        .scale(&Rat::from_integer(factorial(m)).recip());
    let xi = theta.add_scaled(&euler(theta.nvars(), m).mul_poly(&g), &-Rat::from_integer(1.into()));
    Ok((xi, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::in_dma;
    use num_traits::Zero;

    fn arr35() -> Arrangement {
        Arrangement::from_integers(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1], &[1, 2, 3]])
            .unwrap()
    }

    #[test]
    fn generators_of_small_case() {
        let a = arr35();
        let g = minimal_generators_xi(&a, 1).unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!(expected_generator_count(3, 5, 1), 4);
        assert_eq!(linear_rank(&g), 4);
        for op in &g {
            assert_eq!(op.pdeg(), Some(3));
            assert!(kills_first_forms(op, &a, 1));
            assert!(in_dma(op, &a));
        }
    }

    #[test]
    fn inequality_on_non_free_points() {
        for (n, r, m) in [(3, 5, 1), (3, 6, 1), (3, 6, 2), (4, 6, 1)] {
            assert!(non_freeness_inequality(n, r, m));
        }
        assert_eq!(expected_generator_count(3, 6, 2), 9);
    }

    #[test]
    fn euler_split() {
        let a = arr35();
        let q = a.defining_poly();
        let theta = DiffOp::linear_power(&[Rat::from_integer(1.into()), Rat::zero(), Rat::zero()], 1)
            .mul_poly(&q);
        let (xi, g) = split_euler(&theta, &a).unwrap();
        assert!(kills_first_forms(&xi, &a, 1));
        assert!(in_dma(&xi, &a));
        assert!(!g.is_zero());
    }
}
