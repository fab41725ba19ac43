use alloc::vec::Vec;

use crate::exactalg::qmatrix::SpanCoords;
use crate::exactalg::{QMatrix, Rat};
use crate::Result;

/// A subspace of a labelled coordinate space `Q^labels`.
#[derive(Debug, Clone)]
pub struct KSubspace<L> {
    pub labels: Vec<L>,
    /// Linearly independent vectors of length `labels.len()`.
    pub basis: Vec<Vec<Rat>>,
}

impl<L: Clone> KSubspace<L> {
    /// The span of `vectors`, with a basis chosen among them.
    pub fn spanned_by(labels: Vec<L>, vectors: &[Vec<Rat>]) -> Self {
        let dim = labels.len();
        let mut basis: Vec<Vec<Rat>> = Vec::new();
        let mut rank = 0;
        for v in vectors {
            let mut trial = basis.clone();
            trial.push(v.clone());
            let r = QMatrix::from_rows(dim, trial.clone()).expect("lengths").rank();
            if r > rank {
                rank = r;
                basis = trial;
            }
        }
        KSubspace { labels, basis }
    }

    /// The kernel of `m`, whose columns are indexed by `labels`.
    pub fn kernel_of(labels: Vec<L>, m: &QMatrix) -> Self {
        debug_assert_eq!(labels.len(), m.cols());
        KSubspace {
            labels,
            basis: m.nullspace(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.labels.len()
    }

    pub fn coords(&self) -> Result<SpanCoords> {
        SpanCoords::new(self.ambient_dim(), self.basis.clone())
    }
}

/// `0 → V_N → … → V_1 → V_0 → 0` over `Q`. `maps[k]` goes from `V_{k+1}`
/// to `V_k`; the rows of `maps[0]` may be ambient coordinates of a larger
/// space containing `V_0`, whose dimension is `dims[0]`.
#[derive(Debug, Clone)]
pub struct GradedKComplex {
    pub dims: Vec<usize>,
    pub maps: Vec<QMatrix>,
}

/// Rank bookkeeping for a [`GradedKComplex`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactnessReport {
    pub dims: Vec<usize>,
    pub ranks: Vec<usize>,
    pub dd_zero: bool,
    /// Positions `k` where `dim V_k ≠ rank(into V_k) + rank(out of V_k)`.
    pub defects: Vec<usize>,
}

impl ExactnessReport {
    pub fn exact(&self) -> bool {
        self.dd_zero && self.defects.is_empty()
    }
}

impl GradedKComplex {
    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn check_exact(&self) -> ExactnessReport {
        let ranks: Vec<usize> = self.maps.iter().map(QMatrix::rank).collect();
        let mut dd_zero = true;
        for k in 1..self.maps.len() {
            if !self.maps[k - 1].mul(&self.maps[k]).map_or(false, |p| p.is_zero()) {
                dd_zero = false;
            }
        }
        let mut defects = Vec::new();
        for (k, &d) in self.dims.iter().enumerate() {
            let into = if k < self.maps.len() { ranks[k] } else { 0 };
            let out = if k >= 1 { ranks[k - 1] } else { 0 };
            if d != into + out {
                defects.push(k);
            }
        }
        ExactnessReport {
            dims: self.dims.clone(),
            ranks,
            dd_zero,
            defects,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;
    use alloc::vec;

    #[test]
    fn short_exact() {
        // 0 → Q → Q² → Q → 0 via (1,1)ᵀ and (1,-1).
        let inc = QMatrix::from_rows(1, vec![vec![rat(1)], vec![rat(1)]]).unwrap();
        let proj = QMatrix::from_rows(2, vec![vec![rat(1), rat(-1)]]).unwrap();
        let c = GradedKComplex {
            dims: vec![1, 2, 1],
            maps: vec![proj, inc.clone()],
        };
        assert!(c.check_exact().exact());
        let broken = GradedKComplex {
            dims: vec![1, 2, 1],
            maps: vec![QMatrix::from_rows(2, vec![vec![rat(1), rat(1)]]).unwrap(), inc],
        };
        let rep = broken.check_exact();
        assert!(!rep.dd_zero);
    }

    #[test]
    fn spans() {
        let v = vec![
            vec![rat(1), rat(0)],
            vec![rat(2), rat(0)],
            vec![rat(0), rat(3)],
        ];
        let s = KSubspace::spanned_by(vec!['a', 'b'], &v);
        assert_eq!(s.dim(), 2);
        assert_eq!(s.basis[1], vec![rat(0), rat(3)]);
    }
}
