//! Explicit bases of `D^(m)(A)` in the free cases.

use alloc::vec::Vec;
use core::fmt;

use crate::arrangement::{Arrangement, Subset};
use crate::exactalg::combinat::subsets;
use crate::exactalg::{binom, QMatrix, Rat};
use crate::saito::ExpMultiset;
use crate::weyl::{euler, DiffOp};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FreeCase {
    /// `n = 2`: free for every `m`.
    FreeN2,
    /// `m = r - n + 1`.
    FreeEq,
    /// `m > r - n + 1`.
    FreeGt,
    /// `n ≥ 3`, `m < r - n + 1`.
    NonFree,
}

impl FreeCase {
    pub fn name(self) -> &'static str {
        match self {
            FreeCase::FreeN2 => "Free_n2",
            FreeCase::FreeEq => "Free_eq",
            FreeCase::FreeGt => "Free_gt",
            FreeCase::NonFree => "NonFree",
        }
    }

    pub fn is_free(self) -> bool {
        self != FreeCase::NonFree
    }
}

impl fmt::Display for FreeCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn classify(n: usize, r: usize, m: usize) -> FreeCase {
    let threshold = r as i64 - n as i64 + 1;
    let m = m as i64;
    if n == 2 {
        FreeCase::FreeN2
    } else if m == threshold {
        FreeCase::FreeEq
    } else if m > threshold {
        FreeCase::FreeGt
    } else {
        FreeCase::NonFree
    }
}

/// `P_H δ_H^m` with `P_H` taken over the forms of `base` only.
fn ph_delta(base: &Arrangement, ext: &Arrangement, h: &Subset, m: usize) -> Result<DiffOp> {
    let delta = ext.delta_h(h)?;
    let p = base.product_of((0..base.r()).filter(|&i| !h.contains(i)));
    Ok(DiffOp::linear_power(&delta, m).mul_poly(&p))
}

/// Basis for `n = 2`, in the three regimes `m ≤ r-2`, `m = r-1`, `m ≥ r`.
pub fn basis_n2(arr: &Arrangement, m: usize) -> Result<Vec<DiffOp>> {
    if arr.n() != 2 {
        return Err(Error::InvalidArgument("basis_n2 needs n = 2".into()));
    }
    let r = arr.r();
    let single = |i: usize| ph_delta(arr, arr, &Subset::from_sorted(alloc::vec![i]), m);
    if m + 2 <= r {
        let mut ops = alloc::vec![euler(2, m)];
        for i in 0..m {
            ops.push(single(i)?);
        }
        return Ok(ops);
    }
    let mut ops: Vec<DiffOp> = (0..r).map(single).collect::<Result<_>>()?;
    if m >= r {
        // Complete {δ_i^m} by the orthogonal complement of their span; over Q
        // the standard form is positive definite, so this is a complement.
        let rows: Vec<Vec<Rat>> = (0..r)
            .map(|i| {
                let d = arr.delta_h(&Subset::from_sorted(alloc::vec![i]))?;
                Ok(DiffOp::linear_power(&d, m)
                    .constant_vector()
                    .expect("constant coefficients"))
            })
            .collect::<Result<_>>()?;
        let etas = QMatrix::from_rows(m + 1, rows)?.nullspace();
        let q = arr.defining_poly();
        for eta in etas {
            ops.push(DiffOp::from_constant_vector(2, m, &eta).mul_poly(&q));
        }
    }
    Ok(ops)
}

/// `{P_H δ_H^m : |H| = n-1}` for `m = r - n + 1`.
pub fn basis_eq(arr: &Arrangement, m: usize) -> Result<Vec<DiffOp>> {
    let (n, r) = (arr.n(), arr.r());
    if m + n != r + 1 {
        return Err(Error::InvalidArgument(alloc::format!(
            "basis_eq needs m = r - n + 1 = {}",
            r as i64 - n as i64 + 1
        )));
    }
    subsets(r, n - 1)
        .iter()
        .map(|h| ph_delta(arr, arr, h, m))
        .collect()
}

/// A basis for `m > r - n + 1` and the extension it was built from.
#[derive(Debug, Clone)]
pub struct ExtendedBasis {
    pub ops: Vec<DiffOp>,
    pub extension: Arrangement,
}

/// `{P'_H δ_H^m : H ⊆ Ã, |H| = n-1}` where `Ã` extends `arr` generically to
/// `n + m - 1` forms and `P'_H` multiplies the original forms outside `H`.
pub fn basis_gt(arr: &Arrangement, m: usize, seed: u64) -> Result<ExtendedBasis> {
    let (n, r) = (arr.n(), arr.r());
    if m + n <= r + 1 {
        return Err(Error::InvalidArgument("basis_gt needs m > r - n + 1".into()));
    }
    let ext = arr.generic_extension(n + m - 1, seed)?;
    let ops = subsets(ext.r(), n - 1)
        .iter()
        .map(|h| ph_delta(arr, &ext, h, m))
        .collect::<Result<_>>()?;
    Ok(ExtendedBasis {
        ops,
        extension: ext,
    })
}

/// A constructed basis together with how it was obtained.
#[derive(Debug, Clone)]
pub struct FreeBasis {
    pub case: FreeCase,
    pub ops: Vec<DiffOp>,
    /// Forms appended by the generic extension (only for `FreeGt`).
    pub extension_forms: Vec<Vec<Rat>>,
}

/// Dispatches on [`classify`].
pub fn free_basis(arr: &Arrangement, m: usize, seed: u64) -> Result<FreeBasis> {
    let (n, r) = (arr.n(), arr.r());
    let case = classify(n, r, m);
    let (ops, extension_forms) = match case {
        FreeCase::FreeN2 => (basis_n2(arr, m)?, Vec::new()),
        FreeCase::FreeEq => (basis_eq(arr, m)?, Vec::new()),
        FreeCase::FreeGt => {
            let b = basis_gt(arr, m, seed)?;
            (b.ops, b.extension.forms()[r..].to_vec())
        }
        FreeCase::NonFree => return Err(Error::NotFree { n, r, m }),
    };
    Ok(FreeBasis {
        case,
        ops,
        extension_forms,
    })
}

/// Closed-form exponents of `D^(m)(A)` in the free cases.
pub fn expected_exponents(n: usize, r: usize, m: usize) -> Result<ExpMultiset> {
    let mut e = ExpMultiset::default();
    match classify(n, r, m) {
        FreeCase::FreeN2 => {
            if m + 2 <= r {
                e.add(m, 1);
                e.add(r - 1, m);
            } else if m + 1 == r {
                e.add(r - 1, m + 1);
            } else {
                e.add(r - 1, r);
                e.add(r, m - r + 1);
            }
        }
        FreeCase::FreeEq => e.add(m, binom(r as i64, m as i64) as usize),
        FreeCase::FreeGt => {
            let (n, r, m) = (n as i64, r as i64, m as i64);
            for j in (r - n + 1)..=r.min(m) {
                let c = binom(r, j) * binom(m + n - r - 1, m - j);
                e.add(j as usize, c as usize);
            }
        }
        FreeCase::NonFree => {
            return Err(Error::NotFree { n, r, m });
        }
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Monomial;
    use crate::saito::{observed_exponents, saito_holm_check};

    fn em(pairs: &[(usize, usize)]) -> ExpMultiset {
        let mut e = ExpMultiset::default();
        for &(k, c) in pairs {
            e.add(k, c);
        }
        e
    }

    fn line3() -> Arrangement {
        Arrangement::from_integers(2, &[&[1, 0], &[0, 1], &[1, 1]]).unwrap()
    }

    #[test]
    fn classification() {
        assert_eq!(classify(2, 5, 3), FreeCase::FreeN2);
        assert_eq!(classify(3, 5, 3), FreeCase::FreeEq);
        assert_eq!(classify(3, 6, 1), FreeCase::NonFree);
        assert_eq!(classify(3, 4, 3), FreeCase::FreeGt);
    }

    #[test]
    fn n2_bases() {
        let a = line3();
        let b = basis_n2(&a, 1).unwrap();
        assert_eq!(observed_exponents(&b).unwrap(), em(&[(1, 1), (2, 1)]));
        let b = basis_n2(&a, 2).unwrap();
        assert_eq!(observed_exponents(&b).unwrap(), em(&[(2, 3)]));
        let c = Arrangement::coordinate(2);
        let b = basis_n2(&c, 3).unwrap();
        assert_eq!(observed_exponents(&b).unwrap(), em(&[(1, 2), (2, 2)]));
        assert!(saito_holm_check(&b, &c).unwrap().basis);
    }

    #[test]
    fn eq_basis() {
        let a = Arrangement::from_integers(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]])
            .unwrap();
        let b = basis_eq(&a, 2).unwrap();
        assert_eq!(b.len(), 6);
        // P_{1,2} δ_{1,2}² = z(x+y+z)∂_3²
        let first = &b[0];
        assert_eq!(first.num_terms(), 1);
        let z = Monomial::from_exponents(&[0, 0, 2]);
        assert_eq!(first.coeff(&z), &a.form_poly(2) * &a.form_poly(3));
        assert_eq!(observed_exponents(&b).unwrap(), em(&[(2, 6)]));
        assert!(saito_holm_check(&b, &a).unwrap().basis);
    }

    #[test]
    fn gt_basis() {
        let a = Arrangement::from_integers(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]])
            .unwrap();
        let b = basis_gt(&a, 3, 11).unwrap();
        assert_eq!(b.ops.len(), 10);
        assert_eq!(observed_exponents(&b.ops).unwrap(), em(&[(2, 6), (3, 4)]));
        assert!(saito_holm_check(&b.ops, &a).unwrap().basis);
    }

    #[test]
    fn closed_forms() {
        assert_eq!(expected_exponents(3, 4, 2).unwrap(), em(&[(2, 6)]));
        assert_eq!(expected_exponents(3, 4, 3).unwrap(), em(&[(2, 6), (3, 4)]));
        assert_eq!(expected_exponents(2, 3, 1).unwrap(), em(&[(1, 1), (2, 1)]));
        assert!(expected_exponents(3, 6, 1).is_err());
        for n in 2..5 {
            for r in n..9 {
                for m in 1..6 {
                    if let Ok(e) = expected_exponents(n, r, m) {
                        assert!(e.satisfies_rank_identities(n, r, m), "{n} {r} {m}");
                    }
                }
            }
        }
    }
}
