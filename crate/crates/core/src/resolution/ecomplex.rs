//! The constant-coefficient complexes `C_*`, `E_*` and `E_*[σ]` built from
//! the spaces `Δ_H ⊆ V_m` of order-`m` constant-coefficient operators.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::kspace::{GradedKComplex, KSubspace};
use crate::arrangement::{Arrangement, Subset};
use crate::exactalg::combinat::{subsets, subsets_of};
use crate::exactalg::qmatrix::SpanCoords;
use crate::exactalg::{binom, Monomial, QMatrix, Rat};
use crate::weyl::DiffOp;
use crate::{Error, Result};

fn sign(k: usize) -> Rat {
    if k % 2 == 0 {
        Rat::one()
    } else {
        -Rat::one()
    }
}

/// `δ_G^m` as vectors over `Monomial::all_of_degree(n, m)` for every
/// `(n-1)`-subset `G`.
#[derive(Debug, Clone)]
pub struct DeltaTable {
    pub m: usize,
    pub labels: Vec<Monomial>,
    vectors: BTreeMap<Subset, Vec<Rat>>,
}

impl DeltaTable {
    pub fn new(arr: &Arrangement, m: usize) -> Result<Self> {
        let n = arr.n();
        let mut vectors = BTreeMap::new();
        for g in subsets(arr.r(), n - 1) {
            let d = arr.delta_h(&g)?;
            let v = DiffOp::linear_power(&d, m)
                .constant_vector()
                .expect("constant coefficients");
            vectors.insert(g, v);
        }
        Ok(DeltaTable {
            m,
            labels: Monomial::all_of_degree(n, m),
            vectors,
        })
    }

    pub fn get(&self, g: &Subset) -> &[Rat] {
        &self.vectors[g]
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }
}

fn complement(r: usize, h: &Subset) -> Vec<usize> {
    (0..r).filter(|&i| !h.contains(i)).collect()
}

fn check_range(arr: &Arrangement, m: usize) -> Result<()> {
    if m + arr.n() > arr.r() + 1 {
        return Err(Error::InvalidArgument(format!(
            "needs m ≤ r - n + 1, got m = {m}, r = {}, n = {}",
            arr.r(),
            arr.n()
        )));
    }
    Ok(())
}

/// `Δ_H = span{δ^m_{H ∪ H'}}` for `|H| = n - j`, with the basis indexed by
/// `H' ⊆ A' \ H`, `|H'| = j - 1`, where `A'` is `H` together with the first
/// `m + j - 1` hyperplanes outside `H`.
pub fn delta_space(arr: &Arrangement, m: usize, h: &Subset) -> Result<KSubspace<Monomial>> {
    check_range(arr, m)?;
    let table = DeltaTable::new(arr, m)?;
    delta_space_with(&table, arr, h)
}

pub fn delta_space_with(table: &DeltaTable, arr: &Arrangement, h: &Subset) -> Result<KSubspace<Monomial>> {
    let n = arr.n();
    if h.len() >= n {
        return Err(Error::InvalidArgument(format!("|H| must be below n, got {h}")));
    }
    let j = n - h.len();
    let m = table.m;
    let outside: Vec<usize> = complement(arr.r(), h).into_iter().take(m + j - 1).collect();
    let basis: Vec<Vec<Rat>> = subsets_of(&outside, j - 1)
        .iter()
        .map(|hp| table.get(&h.union(hp)).to_vec())
        .collect();
    let expected = binom((m + j - 1) as i64, (j - 1) as i64) as usize;
    let space = KSubspace {
        labels: table.labels.clone(),
        basis,
    };
    let rank = QMatrix::from_rows(table.dim(), space.basis.clone())?.rank();
    if space.dim() != expected || rank != expected {
        return Err(Error::Inconsistent(format!(
            "Δ_{h} has {rank} independent vectors, expected {expected}"
        )));
    }
    Ok(space)
}

/// `C_k = ⊕_{|H| = k} Δ_H e_{∧H}` for `k < n`, and `C_n = Ker ∂_{n-1}`.
#[derive(Debug, Clone)]
pub struct CComplex {
    /// `blocks[k]`: the subsets `H` of size `k` with the dimension of `Δ_H`.
    pub blocks: Vec<Vec<(Subset, usize)>>,
    pub complex: GradedKComplex,
}

pub fn build_c_complex(arr: &Arrangement, m: usize) -> Result<CComplex> {
    check_range(arr, m)?;
    let (n, r) = (arr.n(), arr.r());
    let table = DeltaTable::new(arr, m)?;
    let mut spaces: Vec<Vec<(Subset, KSubspace<Monomial>, SpanCoords)>> = Vec::new();
    for k in 0..n {
        let mut row = Vec::new();
        for h in subsets(r, k) {
            let s = delta_space_with(&table, arr, &h)?;
            let c = s.coords()?;
            row.push((h, s, c));
        }
        spaces.push(row);
    }
    let dims: Vec<usize> = spaces
        .iter()
        .map(|row| row.iter().map(|(_, s, _)| s.dim()).sum())
        .collect();
    let mut maps = Vec::new();
    for k in 1..n {
        let mut offsets = BTreeMap::new();
        let mut off = 0;
        for (h, s, _) in &spaces[k - 1] {
            offsets.insert(h.clone(), off);
            off += s.dim();
        }
        let mut mat = QMatrix::zeros(dims[k - 1], dims[k]);
        let mut col = 0;
        for (h, s, _) in &spaces[k] {
            for xi in &s.basis {
                for (pos, &hh) in h.indices().iter().enumerate() {
                    let target = h.without(hh);
                    let idx = spaces[k - 1]
                        .binary_search_by(|(g, _, _)| g.cmp(&target))
                        .expect("all subsets present");
                    let coords = spaces[k - 1][idx].2.coords(xi).ok_or_else(|| {
                        Error::Inconsistent(format!("Δ_{h} ⊄ Δ_{target}"))
                    })?;
                    let o = offsets[&target];
                    for (i, c) in coords.into_iter().enumerate() {
                        if !c.is_zero() {
                            let cur = mat.get(o + i, col).clone();
                            mat.set(o + i, col, cur + c * sign(pos));
                        }
                    }
                }
                col += 1;
            }
        }
        maps.push(mat);
    }
    // C_n as the kernel of the last map, included by its basis.
    let last = maps.last().cloned().unwrap_or_else(|| QMatrix::zeros(dims[0], 0));
    let kernel = if n >= 2 { last.nullspace() } else { Vec::new() };
    let inclusion = QMatrix::from_cols(dims[n - 1], &kernel)?;
    let mut all_dims = dims;
    all_dims.push(kernel.len());
    maps.push(inclusion);
    let blocks = spaces
        .iter()
        .map(|row| row.iter().map(|(h, s, _)| (h.clone(), s.dim())).collect())
        .collect();
    Ok(CComplex {
        blocks,
        complex: GradedKComplex {
            dims: all_dims,
            maps,
        },
    })
}

/// `E_[H]` for `|H| = n - j`, a subspace of `Q^{H' ⊆ A \ H, |H'| = j-1}`:
/// the coefficient vectors `(a_{H'})` with
/// `Σ_{h ∉ H ∪ H''} ± a_{H'' ∪ h} δ^m_{H ∪ H'' ∪ h} = 0` for every `H''`.
#[derive(Debug, Clone)]
pub struct EBracket {
    pub h: Subset,
    pub space: KSubspace<Subset>,
    coords: SpanCoords,
}

impl EBracket {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn label_index(&self, hp: &Subset) -> Option<usize> {
        self.space.labels.binary_search(hp).ok()
    }

    pub fn coords(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        self.coords.coords(v)
    }
}

pub fn e_bracket(arr: &Arrangement, m: usize, h: &Subset) -> Result<EBracket> {
    check_range(arr, m)?;
    let table = DeltaTable::new(arr, m)?;
    e_bracket_with(&table, arr, h)
}

fn e_bracket_with(table: &DeltaTable, arr: &Arrangement, h: &Subset) -> Result<EBracket> {
    let n = arr.n();
    if h.len() >= n {
        return Err(Error::InvalidArgument(format!("|H| must be below n, got {h}")));
    }
    let j = n - h.len();
    let outside = complement(arr.r(), h);
    let labels = subsets_of(&outside, j - 1);
    let rows_sets = if j >= 2 { subsets_of(&outside, j - 2) } else { Vec::new() };
    let s = table.dim();
    let mut mat = QMatrix::zeros(rows_sets.len() * s, labels.len());
    for (c, hp) in labels.iter().enumerate() {
        let delta = table.get(&h.union(hp));
        for (pos, &hh) in hp.indices().iter().enumerate() {
            let hpp = hp.without(hh);
            let ri = rows_sets.binary_search(&hpp).expect("present");
            for (a, v) in delta.iter().enumerate() {
                if !v.is_zero() {
                    mat.set(ri * s + a, c, v * sign(pos));
                }
            }
        }
    }
    let space = KSubspace::kernel_of(labels, &mat);
    let expected = binom(
        arr.r() as i64 - table.m as i64 - n as i64 + j as i64 - 1,
        j as i64 - 1,
    );
    if space.dim() as i64 != expected {
        return Err(Error::Inconsistent(format!(
            "dim E_[{h}] = {}, expected {expected}",
            space.dim()
        )));
    }
    let coords = space.coords()?;
    Ok(EBracket {
        h: h.clone(),
        space,
        coords,
    })
}

/// All `E_[H]`, `|H| ≤ n - 1`, for one arrangement and order.
#[derive(Debug, Clone)]
pub struct EData {
    pub n: usize,
    pub r: usize,
    pub m: usize,
    pub table: DeltaTable,
    brackets: BTreeMap<Subset, EBracket>,
}

impl EData {
    pub fn new(arr: &Arrangement, m: usize) -> Result<Self> {
        check_range(arr, m)?;
        let table = DeltaTable::new(arr, m)?;
        let mut brackets = BTreeMap::new();
        for k in 0..arr.n() {
            for h in subsets(arr.r(), k) {
                let b = e_bracket_with(&table, arr, &h)?;
                brackets.insert(h, b);
            }
        }
        Ok(EData {
            n: arr.n(),
            r: arr.r(),
            m,
            table,
            brackets,
        })
    }

    pub fn bracket(&self, h: &Subset) -> &EBracket {
        &self.brackets[h]
    }

    /// The subsets `H`, `|H| = n - j`, making up `E_j[σ]` (all of them for
    /// `σ = None`).
    pub fn blocks(&self, j: usize, sigma: Option<&Subset>) -> Vec<Subset> {
        subsets(self.r, self.n - j)
            .into_iter()
            .filter(|h| sigma.map_or(true, |s| !h.is_disjoint(s)))
            .collect()
    }

    pub fn dim(&self, j: usize, sigma: Option<&Subset>) -> usize {
        self.blocks(j, sigma).iter().map(|h| self.bracket(h).dim()).sum()
    }

    /// The image of the `b`-th basis vector of `E_[H]` (with `|H| = n-j`,
    /// `j ≥ 2`) under `ψ`: one coordinate vector in `E_[H ∪ h]` per `h`.
    pub fn psi_components(&self, h: &Subset, b: usize) -> Result<Vec<(usize, Subset, Vec<Rat>)>> {
        let src = self.bracket(h);
        let vec = &src.space.basis[b];
        let mut per_target: BTreeMap<usize, Vec<Rat>> = BTreeMap::new();
        for (hp, a) in src.space.labels.iter().zip(vec) {
            if a.is_zero() {
                continue;
            }
            for (pos, &hh) in hp.indices().iter().enumerate() {
                let g = h.with(hh);
                let tgt = self.bracket(&g);
                let entry = per_target
                    .entry(hh)
                    .or_insert_with(|| vec![Rat::zero(); tgt.space.ambient_dim()]);
                let idx = tgt.label_index(&hp.without(hh)).expect("label present");
                entry[idx] += a * sign(pos);
            }
        }
        let mut out = Vec::new();
        for (hh, v) in per_target {
            if v.iter().all(Zero::is_zero) {
                continue;
            }
            let g = h.with(hh);
            let c = self.bracket(&g).coords(&v).ok_or_else(|| {
                Error::Inconsistent(format!("ψ does not map E_[{h}] into E_[{g}]"))
            })?;
            out.push((hh, g, c));
        }
        Ok(out)
    }

    /// `E_*[σ]` (or `E_*` for `σ = None`) as a complex with `ψ` maps; the
    /// last map `E_1 → E_0` lands in `V_m` coordinates.
    pub fn complex(&self, sigma: Option<&Subset>) -> Result<GradedKComplex> {
        let n = self.n;
        let mut dims = vec![0; n + 1];
        let mut maps = Vec::with_capacity(n);
        for j in 1..=n {
            dims[j] = self.dim(j, sigma);
        }
        // ψ_1: E_1 → V_m.
        let s = self.table.dim();
        let mut psi1 = QMatrix::zeros(s, dims[1]);
        for (col, h) in self.blocks(1, sigma).iter().enumerate() {
            let scale = &self.bracket(h).space.basis[0][0];
            for (i, v) in self.table.get(h).iter().enumerate() {
                psi1.set(i, col, v * scale);
            }
        }
        dims[0] = if sigma.is_some() { psi1.rank() } else { s };
        maps.push(psi1);
        for j in 2..=n {
            let targets = self.blocks(j - 1, sigma);
            let mut offsets = BTreeMap::new();
            let mut off = 0;
            for g in &targets {
                offsets.insert(g.clone(), off);
                off += self.bracket(g).dim();
            }
            let mut mat = QMatrix::zeros(dims[j - 1], dims[j]);
            let mut col = 0;
            for h in self.blocks(j, sigma) {
                for b in 0..self.bracket(&h).dim() {
                    for (_, g, c) in self.psi_components(&h, b)? {
                        let o = *offsets.get(&g).ok_or_else(|| {
                            Error::Inconsistent(format!("E_[{g}] missing from E_{}", j - 1))
                        })?;
                        for (i, x) in c.into_iter().enumerate() {
                            mat.set(o + i, col, x);
                        }
                    }
                    col += 1;
                }
            }
            maps.push(mat);
        }
        Ok(GradedKComplex { dims, maps })
    }
}

pub fn e_complex_full(arr: &Arrangement, m: usize) -> Result<GradedKComplex> {
    EData::new(arr, m)?.complex(None)
}

pub fn e_sigma_complex(arr: &Arrangement, m: usize, sigma: &Subset) -> Result<GradedKComplex> {
    EData::new(arr, m)?.complex(Some(sigma))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arr35() -> Arrangement {
        Arrangement::from_integers(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1], &[1, 2, 3]])
            .unwrap()
    }

    #[test]
    fn delta_dimensions() {
        let a = arr35();
        let h = Subset::new(vec![0, 1]);
        let d = delta_space(&a, 2, &h).unwrap();
        assert_eq!(d.dim(), 1);
        assert_eq!(d.basis[0], DeltaTable::new(&a, 2).unwrap().get(&h).to_vec());
        assert_eq!(delta_space(&a, 1, &Subset::empty()).unwrap().dim(), 3);
        assert_eq!(delta_space(&a, 2, &Subset::new(vec![2])).unwrap().dim(), 3);
    }

    #[test]
    fn c_complex_exact() {
        let a = arr35();
        for m in 1..=3 {
            let c = build_c_complex(&a, m).unwrap();
            let rep = c.complex.check_exact();
            assert!(rep.exact(), "m = {m}: {rep:?}");
        }
    }

    #[test]
    fn e_dimensions_and_exactness() {
        let a = arr35();
        let h = Subset::new(vec![0]);
        assert_eq!(e_bracket(&a, 1, &h).unwrap().dim(), 2);
        assert_eq!(e_bracket(&a, 1, &Subset::new(vec![0, 1])).unwrap().dim(), 1);
        let data = EData::new(&a, 1).unwrap();
        assert!(data.complex(None).unwrap().check_exact().exact());
        let sigma = Subset::new(vec![0]);
        let c = data.complex(Some(&sigma)).unwrap();
        assert_eq!(c.dims[3], 0);
        assert!(c.check_exact().exact());
        let empty = data.complex(Some(&Subset::empty())).unwrap();
        assert!(empty.dims.iter().all(|&d| d == 0));
    }
}
