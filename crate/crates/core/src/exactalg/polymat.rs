use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use super::poly::Polynomial;
use super::qmatrix::QMatrix;
use super::rat::{rat, Rat};
use crate::{Error, Result};

/// Largest size handled by fraction-free elimination in [`polymat_det`].
pub const BAREISS_MAX: usize = 20;

/// Dense row-major matrix over `Q[x_1, .., x_n]`.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    nvars: usize,
    data: Vec<Polynomial>,
}

/// Determinant of a square polynomial matrix: Bareiss elimination up to
/// [`BAREISS_MAX`], evaluation and interpolation beyond.
pub fn polymat_det(m: &PolyMatrix) -> Result<Polynomial> {
    m.check_square()?;
    if m.rows <= BAREISS_MAX {
        Ok(m.det_bareiss())
    } else {
        Ok(m.det_interpolate())
    }
}

/// Rank of the scalar matrix `M(point)`.
pub fn polymat_rank_at_point(m: &PolyMatrix, point: &[Rat]) -> Result<usize> {
    Ok(m.eval(point)?.rank())
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize, nvars: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            nvars,
            data: vec![Polynomial::zero(nvars); rows * cols],
        }
    }

    pub fn from_rows(nvars: usize, rows: Vec<Vec<Polynomial>>) -> Result<Self> {
        let nrows = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(nrows, cols, nvars);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            for (j, p) in row.into_iter().enumerate() {
                if p.nvars() != nvars {
                    return Err(Error::DimensionMismatch {
                        expected: nvars,
                        found: p.nvars(),
                    });
                }
                m.set(i, j, p);
            }
        }
        Ok(m)
    }

    pub fn from_cols(rows: usize, nvars: usize, cols: Vec<Vec<Polynomial>>) -> Result<Self> {
        let mut m = Self::zeros(rows, cols.len(), nvars);
        for (j, col) in cols.into_iter().enumerate() {
            if col.len() != rows {
                return Err(Error::DimensionMismatch {
                    expected: rows,
                    found: col.len(),
                });
            }
            for (i, p) in col.into_iter().enumerate() {
                m.set(i, j, p);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.data[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut Polynomial {
        &mut self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial) {
        debug_assert_eq!(p.nvars(), self.nvars);
        self.data[i * self.cols + j] = p;
    }

    pub fn col(&self, j: usize) -> Vec<Polynomial> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Polynomial)> + '_ {
        self.data
            .iter()
            .enumerate()
            .map(move |(k, p)| (k / self.cols.max(1), k % self.cols.max(1), p))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Polynomial::is_zero)
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut t = Self::zeros(self.cols, self.rows, self.nvars);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols, self.nvars);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let prod = a * b;
                        out.get_mut(i, j).add_scaled(&prod, &Rat::one());
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[Rat]) -> Result<QMatrix> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: point.len(),
            });
        }
        let mut q = QMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                q.set(i, j, self.get(i, j).eval(point));
            }
        }
        Ok(q)
    }

    fn check_square(&self) -> Result<()> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(())
    }

    /// Fraction-free Bareiss elimination; every division is exact.
    pub fn det_bareiss(&self) -> Polynomial {
        let n = self.rows;
        assert_eq!(n, self.cols);
        if n == 0 {
            return Polynomial::one(self.nvars);
        }
        let mut a: Vec<Vec<Polynomial>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut sign = Rat::one();
        let mut prev = Polynomial::one(self.nvars);
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                    return Polynomial::zero(self.nvars);
                };
                a.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = num
                        .exact_div(&prev)
                        .expect("Bareiss quotients are exact");
                }
            }
            prev = a[k][k].clone();
        }
        a[n - 1][n - 1].scale(&sign)
    }

    /// Determinant by evaluation and Newton interpolation, one variable at a
    /// time. For a homogeneous determinant the last variable is set to one
    /// and the result rehomogenized.
    pub fn det_interpolate(&self) -> Polynomial {
        let n = self.rows;
        assert_eq!(n, self.cols);
        let bound: usize = (0..self.cols)
            .map(|j| {
                (0..self.rows)
                    .filter_map(|i| self.get(i, j).total_degree())
                    .max()
                    .unwrap_or(0)
            })
            .sum();
        let homogeneous_degree = self.homogeneous_det_degree();
        let mut m = self.clone();
        let mut vars: Vec<usize> = (0..self.nvars).collect();
        if homogeneous_degree.is_some() && self.nvars > 0 {
            let last = self.nvars - 1;
            for p in m.data.iter_mut() {
                *p = p.substitute(last, &Rat::one());
            }
            vars.pop();
        }
        let det = interpolate(&m, &vars, bound);
        match homogeneous_degree {
            Some(d) if self.nvars > 0 => rehomogenize(&det, self.nvars - 1, d),
            _ => det,
        }
    }

    /// If every entry `(i, j)` is homogeneous of degree `a_i + b_j` (zero
    /// entries allowed), the determinant is homogeneous of `Σ a_i + Σ b_j`.
    fn homogeneous_det_degree(&self) -> Option<usize> {
        let n = self.rows;
        let mut row_deg: Vec<Option<i64>> = vec![None; n];
        let mut col_deg: Vec<Option<i64>> = vec![None; n];
        let degs: Vec<Option<i64>> = self
            .data
            .iter()
            .map(|p| {
                if p.is_zero() {
                    Some(-1)
                } else {
                    p.homogeneous_degree().map(|d| d as i64)
                }
            })
            .collect();
        if degs.iter().any(Option::is_none) {
            return None;
        }
        let deg = |i: usize, j: usize| degs[i * n + j].unwrap();
        for start in 0..n {
            if row_deg[start].is_some() {
                continue;
            }
            row_deg[start] = Some(0);
            let mut changed = true;
            while changed {
                changed = false;
                for i in 0..n {
                    for j in 0..n {
                        let d = deg(i, j);
                        if d < 0 {
                            continue;
                        }
                        match (row_deg[i], col_deg[j]) {
                            (Some(a), None) => {
                                col_deg[j] = Some(d - a);
                                changed = true;
                            }
                            (None, Some(b)) => {
                                row_deg[i] = Some(d - b);
                                changed = true;
                            }
                            (Some(a), Some(b)) if a + b != d => return None,
                            _ => {}
                        }
                    }
                }
            }
        }
        let total: i64 = row_deg.iter().map(|a| a.unwrap_or(0)).sum::<i64>()
            + col_deg.iter().map(|b| b.unwrap_or(0)).sum::<i64>();
        usize::try_from(total).ok()
    }
}

fn interpolate(m: &PolyMatrix, vars: &[usize], bound: usize) -> Polynomial {
    let Some((&v, rest)) = vars.split_first() else {
        let q = m.eval(&vec![Rat::zero(); m.nvars]).expect("sizes match");
        return Polynomial::constant(m.nvars, q.det().expect("square"));
    };
    let nodes: Vec<Rat> = (0..=bound as i64).map(rat).collect();
    let values: Vec<Polynomial> = nodes
        .iter()
        .map(|t| {
            let mut sub = m.clone();
            for p in sub.data.iter_mut() {
                *p = p.substitute(v, t);
            }
            interpolate(&sub, rest, bound)
        })
        .collect();
    newton(&nodes, values, v, m.nvars)
}

/// Interpolating polynomial in `x_var` through `(nodes[i], values[i])`, with
/// coefficients in the remaining variables.
fn newton(nodes: &[Rat], mut coef: Vec<Polynomial>, var: usize, nvars: usize) -> Polynomial {
    let k = nodes.len();
    for level in 1..k {
        for i in (level..k).rev() {
            let diff = &coef[i] - &coef[i - 1];
            let h = (&nodes[i] - &nodes[i - level]).recip();
            coef[i] = diff.scale(&h);
        }
    }
    let x = Polynomial::var(nvars, var);
    let mut acc = coef[k - 1].clone();
    for i in (0..k - 1).rev() {
        let lin = &x - &Polynomial::constant(nvars, nodes[i].clone());
        acc = &(&acc * &lin) + &coef[i];
    }
    acc
}

fn rehomogenize(p: &Polynomial, var: usize, degree: usize) -> Polynomial {
    Polynomial::from_terms(
        p.nvars(),
        p.terms().map(|(m, c)| {
            let mut exps = m.exponents().to_vec();
            exps[var] = (degree - m.degree()) as u16;
            (super::Monomial::from_exponents(&exps), c.clone())
        }),
    )
}

/// `det = residual · ∏ factors[i]^multiplicities[i]`, where `residual` has
/// no factor from the list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredDet {
    pub multiplicities: Vec<usize>,
    pub residual: Polynomial,
}

impl FactoredDet {
    /// Strips the given (non-constant, pairwise non-associate) factors from
    /// each column before taking the determinant of what remains, then from
    /// that determinant.
    pub fn compute(m: &PolyMatrix, factors: &[Polynomial]) -> Result<FactoredDet> {
        m.check_square()?;
        let mut reduced = m.clone();
        let mut mult = vec![0usize; factors.len()];
        for j in 0..m.cols {
            let mut col = reduced.col(j);
            if col.iter().all(Polynomial::is_zero) {
                return Ok(FactoredDet {
                    multiplicities: mult,
                    residual: Polynomial::zero(m.nvars),
                });
            }
            for (f, k) in factors.iter().zip(mult.iter_mut()) {
                loop {
                    let quots: Option<Vec<Polynomial>> =
                        col.iter().map(|p| p.exact_div(f).ok()).collect();
                    match quots {
                        Some(q) => {
                            col = q;
                            *k += 1;
                        }
                        None => break,
                    }
                }
            }
            // A column `g·v` with `v` constant contributes `g` directly.
            let lead = col.iter().find(|p| !p.is_zero()).expect("nonzero column").clone();
            if !lead.is_constant() {
                let ratios: Option<Vec<Rat>> = col
                    .iter()
                    .map(|p| {
                        if p.is_zero() {
                            Some(Rat::zero())
                        } else {
                            p.ratio_to(&lead)
                        }
                    })
                    .collect();
                if let Some(r) = ratios {
                    let mut g = lead.clone();
                    for (f, k) in factors.iter().zip(mult.iter_mut()) {
                        *k += g.strip_factor(f);
                    }
                    // Remaining content stays in the matrix as a constant
                    // multiple of itself.
                    col = r.into_iter().map(|c| g.scale(&c)).collect();
                }
            }
            for (i, p) in col.into_iter().enumerate() {
                reduced.set(i, j, p);
            }
        }
        let mut det = polymat_det(&reduced)?;
        for (f, k) in factors.iter().zip(mult.iter_mut()) {
            *k += det.strip_factor(f);
        }
        Ok(FactoredDet {
            multiplicities: mult,
            residual: det,
        })
    }

    pub fn expand(&self, factors: &[Polynomial]) -> Polynomial {
        let mut p = self.residual.clone();
        for (f, &k) in factors.iter().zip(&self.multiplicities) {
            p = &p * &f.pow(k);
        }
        p
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PolyMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "[{}] ", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: usize, i: usize) -> Polynomial {
        Polynomial::var(n, i)
    }

    #[test]
    fn determinant_examples() {
        let (a, b) = (x(2, 0), x(2, 1));
        let z = Polynomial::zero(2);
        let diag = PolyMatrix::from_rows(2, vec![vec![a.clone(), z.clone()], vec![z, b.clone()]])
            .unwrap();
        assert_eq!(polymat_det(&diag).unwrap(), &a * &b);
        let sym = PolyMatrix::from_rows(2, vec![vec![a.clone(), b.clone()], vec![b.clone(), a.clone()]])
            .unwrap();
        assert_eq!(polymat_det(&sym).unwrap(), &(&a * &a) - &(&b * &b));
        let q = &(&a * &b) * &(&a + &b);
        let one = PolyMatrix::from_rows(2, vec![vec![q.clone()]]).unwrap();
        assert_eq!(polymat_det(&one).unwrap(), q);
        assert!(matches!(
            polymat_det(&PolyMatrix::zeros(1, 2, 2)),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn interpolation_matches_bareiss() {
        let (a, b, c) = (x(3, 0), x(3, 1), x(3, 2));
        let rows = vec![
            vec![&a + &b, &b * &c, c.clone()],
            vec![a.clone(), &a * &a, &b - &c],
            vec![Polynomial::one(3), &c + &a, &a * &b],
        ];
        let m = PolyMatrix::from_rows(3, rows).unwrap();
        assert_eq!(m.det_interpolate(), m.det_bareiss());
        let hom = PolyMatrix::from_rows(3, vec![vec![a.clone(), b.clone()], vec![&b * &c, &a * &a]])
            .unwrap();
        assert_eq!(hom.det_interpolate(), hom.det_bareiss());
    }

    #[test]
    fn rank_at_points() {
        let m = PolyMatrix::from_rows(1, vec![vec![x(1, 0)]]).unwrap();
        assert_eq!(polymat_rank_at_point(&m, &[rat(0)]).unwrap(), 0);
        assert_eq!(polymat_rank_at_point(&m, &[rat(1)]).unwrap(), 1);
        let (a, b) = (x(2, 0), x(2, 1));
        let p = PolyMatrix::from_rows(
            2,
            vec![vec![a.clone(), b.clone()], vec![a.scale(&rat(2)), b.scale(&rat(2))]],
        )
        .unwrap();
        assert!(polymat_rank_at_point(&p, &[rat(3), rat(-5)]).unwrap() <= 1);
    }

    #[test]
    fn factored_determinant() {
        let (a, b) = (x(2, 0), x(2, 1));
        let s = &a + &b;
        // [[a·s, 0], [a·s, b·b]] has det a·b²·s.
        let m = PolyMatrix::from_rows(
            2,
            vec![
                vec![&a * &s, Polynomial::zero(2)],
                vec![&a * &s, &b * &b],
            ],
        )
        .unwrap();
        let factors = vec![a.clone(), b.clone(), s.clone()];
        let fd = FactoredDet::compute(&m, &factors).unwrap();
        assert_eq!(fd.multiplicities, vec![1, 2, 1]);
        assert!(fd.residual.is_constant());
        assert_eq!(fd.expand(&factors), polymat_det(&m).unwrap());
    }
}
