//! Graded free complexes over `S = K[x_1, …, x_n]` and the resolution
//! `F_*` of `Ξ^(m)(A)`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use super::ecomplex::EData;
use super::generators::sigma0;
use crate::arrangement::Arrangement;
use crate::exactalg::{binom, Monomial, PolyMatrix, Polynomial};
use crate::freebasis::{classify, FreeCase};
use crate::saito::{sm_tm, ExpMultiset};
use crate::weyl::DiffOp;
use crate::{Error, Result};

/// `⊕ S(-d_i)`: one generator of degree `d_i` per label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeModule {
    pub degrees: Vec<i64>,
    pub labels: Vec<String>,
}

impl FreeModule {
    pub fn rank(&self) -> usize {
        self.degrees.len()
    }
}

/// What the complex resolves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resolves {
    /// The image of `maps[0]` inside `modules[0]`; `modules[0]` is not part
    /// of the resolution and `modules[k]` has homological index `k - 1`.
    Image,
    /// The cokernel of `maps[0]`; `modules[k]` has homological index `k`.
    Cokernel,
}

/// `modules[0] ← modules[1] ← …` with `maps[k]: modules[k+1] → modules[k]`.
/// A column of `maps[k]` is the image of one generator.
#[derive(Debug, Clone)]
pub struct FreeComplex {
    pub nvars: usize,
    pub modules: Vec<FreeModule>,
    pub maps: Vec<PolyMatrix>,
    pub resolves: Resolves,
}

impl FreeComplex {
    /// Index into `modules` of the first module of the resolution.
    pub fn first(&self) -> usize {
        match self.resolves {
            Resolves::Image => 1,
            Resolves::Cokernel => 0,
        }
    }

    /// Ranks of the free modules in homological order.
    pub fn betti(&self) -> Vec<usize> {
        self.modules[self.first()..].iter().map(FreeModule::rank).collect()
    }

    /// `max (shift - homological index)` over all generators.
    pub fn regularity(&self) -> Option<i64> {
        self.modules[self.first()..]
            .iter()
            .enumerate()
            .flat_map(|(i, m)| m.degrees.iter().map(move |&d| d - i as i64))
            .max()
    }

    /// The largest homological index with a nonzero module.
    pub fn projective_dimension(&self) -> Option<usize> {
        self.betti().iter().rposition(|&b| b > 0)
    }

    /// Checks that matrix sizes match the modules and that every nonzero
    /// entry is homogeneous of degree `deg(column) - deg(row)`.
    pub fn check_shape(&self) -> Result<()> {
        if self.maps.len() + 1 != self.modules.len() {
            return Err(Error::DimensionMismatch {
                expected: self.modules.len() - 1,
                found: self.maps.len(),
            });
        }
        for (k, map) in self.maps.iter().enumerate() {
            let (tgt, src) = (&self.modules[k], &self.modules[k + 1]);
            if map.rows() != tgt.rank() || map.cols() != src.rank() {
                return Err(Error::Inconsistent(format!(
                    "map {k} is {}×{}, modules have ranks {} and {}",
                    map.rows(),
                    map.cols(),
                    tgt.rank(),
                    src.rank()
                )));
            }
            for (i, j, p) in map.entries() {
                if p.is_zero() {
                    continue;
                }
                let want = src.degrees[j] - tgt.degrees[i];
                if p.homogeneous_degree().map(|d| d as i64) != Some(want) {
                    return Err(Error::Inconsistent(format!(
                        "map {k} entry ({i},{j}) is not homogeneous of degree {want}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `w_j = C(r-m-n+j-1, j-1)·(C(r, n-j) - C(r-m, n-j))`.
pub fn betti_w(n: usize, r: usize, m: usize, j: usize) -> usize {
    let (n, r, m, j) = (n as i64, r as i64, m as i64, j as i64);
    (binom(r - m - n + j - 1, j - 1) * (binom(r, n - j) - binom(r - m, n - j))) as usize
}

/// Generator degree of `F_j`: `r + j - m - n`.
pub fn f_shift(n: usize, r: usize, m: usize, j: usize) -> i64 {
    r as i64 + j as i64 - m as i64 - n as i64
}

/// Labels `∂^α` of the ambient module `S ⊗ V_m`, in the row order of the
/// coefficient matrices.
pub fn partial_labels(n: usize, m: usize) -> Vec<String> {
    Monomial::all_of_degree(n, m)
        .iter()
        .map(|a| {
            let mut s = String::from("d");
            for (i, e) in a.exponents().iter().enumerate() {
                if *e > 0 {
                    s += &format!("[{}^{}]", i + 1, e);
                }
            }
            s
        })
        .collect()
}

/// `0 → F_{n-1} → … → F_1 → S ⊗ V_m` with `F_j = S ⊗ E_j[σ_0]`; the image of
/// the last map is `Ξ^(m)(A)`.
pub fn build_f_resolution(arr: &Arrangement, m: usize) -> Result<FreeComplex> {
    check_non_free(arr, m)?;
    let data = EData::new(arr, m)?;
    build_f_resolution_with(arr, &data)
}

fn check_non_free(arr: &Arrangement, m: usize) -> Result<()> {
    let (n, r) = (arr.n(), arr.r());
    if classify(n, r, m) != FreeCase::NonFree {
        return Err(Error::InvalidArgument(format!(
            "resolution needs n ≥ 3 and m < r - n + 1, got ({n}, {r}, {m})"
        )));
    }
    Ok(())
}

pub fn build_f_resolution_with(arr: &Arrangement, data: &EData) -> Result<FreeComplex> {
    let (n, r, m) = (arr.n(), arr.r(), data.m);
    check_non_free(arr, m)?;
    let sigma = sigma0(m);
    let (s, _) = sm_tm(n, m);
    let mut modules = Vec::with_capacity(n);
    modules.push(FreeModule {
        degrees: alloc::vec![-(m as i64); s],
        labels: partial_labels(n, m),
    });
    let mut blocks = Vec::new();
    for j in 1..n {
        let bl = data.blocks(j, Some(&sigma));
        let mut labels = Vec::new();
        for h in &bl {
            for b in 0..data.bracket(h).dim() {
                labels.push(if j == 1 { format!("e{h}") } else { format!("E{h}#{b}") });
            }
        }
        modules.push(FreeModule {
            degrees: alloc::vec![f_shift(n, r, m, j); labels.len()],
            labels,
        });
        blocks.push(bl);
    }

    let mut maps = Vec::with_capacity(n - 1);
    // d_1: δ_H^m e_H ↦ P_H δ_H^m.
    let mut d1 = PolyMatrix::zeros(s, modules[1].rank(), n);
    for (col, h) in blocks[0].iter().enumerate() {
        let scale = &data.bracket(h).space.basis[0][0];
        let ph = arr.p_h(h).scale(scale);
        for (i, c) in data.table.get(h).iter().enumerate() {
            if !c.is_zero() {
                d1.set(i, col, ph.scale(c));
            }
        }
    }
    maps.push(d1);
    for j in 2..n {
        let mut offsets = alloc::collections::BTreeMap::new();
        let mut off = 0;
        for g in &blocks[j - 2] {
            offsets.insert(g.clone(), off);
            off += data.bracket(g).dim();
        }
        let mut dj = PolyMatrix::zeros(modules[j - 1].rank(), modules[j].rank(), n);
        let mut col = 0;
        for h in &blocks[j - 1] {
            for b in 0..data.bracket(h).dim() {
                for (hh, g, coords) in data.psi_components(h, b)? {
                    let o = *offsets.get(&g).ok_or_else(|| {
                        Error::Inconsistent(format!("E_[{g}] missing from F_{}", j - 1))
                    })?;
                    let p = arr.form_poly(hh);
                    for (i, c) in coords.iter().enumerate() {
                        if !c.is_zero() {
                            dj.set(o + i, col, p.scale(c));
                        }
                    }
                }
                col += 1;
            }
        }
        maps.push(dj);
    }
    let fc = FreeComplex {
        nvars: n,
        modules,
        maps,
        resolves: Resolves::Image,
    };
    fc.check_shape()?;
    Ok(fc)
}

/// Hilbert function `d ↦ dim_K M_d` of the module resolved by `fc`, for
/// module degrees `lo..=hi`.
pub fn hilbert_function(fc: &FreeComplex, lo: i64, hi: i64) -> Vec<i64> {
    let n = fc.nvars as i64;
    let first = fc.first();
    (lo..=hi)
        .map(|d| {
            let mut acc = 0i64;
            for (i, module) in fc.modules[first..].iter().enumerate() {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                for &g in &module.degrees {
                    acc += sign * dim_s(n, d - g);
                }
            }
            acc
        })
        .collect()
}

/// `dim_K S_e` for `n` variables (0 for `e < 0`).
pub fn dim_s(n: i64, e: i64) -> i64 {
    if e < 0 {
        0
    } else {
        binom(n + e - 1, e)
    }
}

/// The graded piece dimensions of `D^(m)(A)` by pdeg `0..=bound` in the
/// non-free case: `Ξ` from its resolution plus the summand `S ε_m`.
pub fn hilbert_from_resolution(fc: &FreeComplex, m: usize, bound: usize) -> Vec<i64> {
    let n = fc.nvars as i64;
    let m = m as i64;
    hilbert_function(fc, -m, bound as i64 - m)
        .into_iter()
        .enumerate()
        .map(|(p, h)| h + dim_s(n, p as i64 - m))
        .collect()
}

/// The same for a free module with exponents `e_k`: `Σ e_k dim S_{p-k}`.
pub fn hilbert_from_exponents(exps: &ExpMultiset, n: usize, bound: usize) -> Vec<i64> {
    (0..=bound as i64)
        .map(|p| {
            exps.0
                .iter()
                .map(|(&k, &e)| e as i64 * dim_s(n as i64, p - k as i64))
                .sum()
        })
        .collect()
}

/// The columns of `maps[0]` as operators `Σ_α f_α ∂^α`, for complexes
/// whose target is `S ⊗ V_m`.
pub fn image_operators(fc: &FreeComplex, m: usize) -> Result<Vec<DiffOp>> {
    let alphas = Monomial::all_of_degree(fc.nvars, m);
    let d1 = &fc.maps[0];
    (0..d1.cols())
        .map(|j| {
            let col: Vec<Polynomial> = d1.col(j);
            DiffOp::from_terms(
                fc.nvars,
                m,
                alphas.iter().cloned().zip(col).filter(|(_, p)| !p.is_zero()),
            )
        })
        .collect()
}
