//! The module `J_m(A)` generated by the bullet action of `∂^α/α!` on `Q`,
//! the presentation of `Coker δ̄_0` and of the jet module of `S/SQ`, and the
//! minimal free resolution of `Coker δ̃_0`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;


use crate::arrangement::Arrangement;
use crate::exactalg::{binom, Monomial, PolyMatrix, Polynomial, Rat};
use crate::resolution::free::{betti_w, build_f_resolution, FreeComplex, FreeModule, Resolves};
use crate::resolution::verify::{verify_complex, Expected, Report, VerifyOptions};
use crate::saito::sm_tm;
use crate::weyl::{adx_pow, euler, falling, gamma_k, gamma_k_inverse, DiffOp};
use crate::{Error, Result};

/// The indices `β` with `|β| ≤ m - 1`, by ascending degree.
pub fn beta_labels(n: usize, m: usize) -> Vec<Monomial> {
    if m == 0 {
        return Vec::new();
    }
    Monomial::all_up_to_degree(n, m - 1)
}

/// The indices `α` with `1 ≤ |α| ≤ m`, by ascending degree.
pub fn alpha_labels(n: usize, m: usize) -> Vec<Monomial> {
    Monomial::all_up_to_degree(n, m)
        .into_iter()
        .filter(|a| !a.is_one())
        .collect()
}

/// An element `Σ_β f_β e_β` of `S^{C(n+m-1, m-1)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaVector {
    pub labels: Vec<Monomial>,
    pub coords: Vec<Polynomial>,
}

impl BetaVector {
    pub fn zero(n: usize, m: usize) -> Self {
        let labels = beta_labels(n, m);
        let coords = vec![Polynomial::zero(n); labels.len()];
        BetaVector { labels, coords }
    }

    pub fn get(&self, beta: &Monomial) -> Option<&Polynomial> {
        self.labels.iter().position(|b| b == beta).map(|i| &self.coords[i])
    }

    /// The `e_0` component.
    pub fn e0(&self) -> &Polynomial {
        &self.coords[0]
    }

    pub fn add(&mut self, other: &BetaVector) {
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            *a = &*a + b;
        }
    }
}

/// `θ • Q`: the `β`-component is `(-1)^{|β|} (ad x)^β(θ) ∗ Q`.
pub fn bullet(theta: &DiffOp, q: &Polynomial, m: usize) -> BetaVector {
    let n = theta.nvars();
    let mut v = BetaVector::zero(n, m);
    for (i, beta) in v.labels.iter().enumerate() {
        if beta.degree() > theta.order() {
            continue;
        }
        let mut c = adx_pow(theta, beta).apply(q);
        if beta.degree() % 2 == 1 {
            c = -&c;
        }
        v.coords[i] = c;
    }
    v
}

/// `∂^α / α!` as an operator.
pub fn divided_power(alpha: &Monomial) -> DiffOp {
    let n = alpha.nvars();
    DiffOp::monomial(
        alpha.clone(),
        Polynomial::constant(n, Rat::from_integer(alpha.factorial()).recip()),
    )
}

/// `(1/α!) ∂^α • Q` for all `1 ≤ |α| ≤ m`.
pub fn jm_generators(arr: &Arrangement, m: usize) -> Vec<BetaVector> {
    let q = arr.defining_poly();
    alpha_labels(arr.n(), m)
        .iter()
        .map(|a| bullet(&divided_power(a), &q, m))
        .collect()
}

/// A matrix of polynomials with labelled rows and columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentationMatrix {
    pub row_labels: Vec<Monomial>,
    pub col_labels: Vec<Monomial>,
    pub entries: PolyMatrix,
}

impl PresentationMatrix {
    pub fn transpose(&self) -> PresentationMatrix {
        PresentationMatrix {
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
            entries: self.entries.transpose(),
        }
    }
}

/// Rows `γ` (`1 ≤ |γ| ≤ m`), columns `β` (`|β| ≤ m-1`), entry
/// `(1/(γ-β)!) ∂^{γ-β} ∗ Q`, and `0` when `β ≰ γ` or `γ = β` (the latter
/// is `Q`, which vanishes over `S/SQ`).
pub fn coker_presentation(arr: &Arrangement, m: usize) -> PresentationMatrix {
    let n = arr.n();
    let q = arr.defining_poly();
    let rows = alpha_labels(n, m);
    let cols = beta_labels(n, m);
    let mut entries = PolyMatrix::zeros(rows.len(), cols.len(), n);
    for (i, g) in rows.iter().enumerate() {
        for (j, b) in cols.iter().enumerate() {
            if g == b {
                continue;
            }
            if let Some(d) = b.complement_in(g) {
                let e = q.partial(&d).scale(&Rat::from_integer(d.factorial()).recip());
                entries.set(i, j, e);
            }
        }
    }
    PresentationMatrix {
        row_labels: rows,
        col_labels: cols,
        entries,
    }
}

/// `Q(x + y)` as a polynomial in `2n` variables `x_1..x_n, y_1..y_n`.
fn shifted_defining_poly(arr: &Arrangement) -> Polynomial {
    let n = arr.n();
    let mut acc = Polynomial::one(2 * n);
    for c in arr.forms() {
        let doubled: Vec<Rat> = c.iter().chain(c.iter()).cloned().collect();
        acc = &acc * &Polynomial::linear_form(&doubled);
    }
    acc
}

/// Rows `β` (`|β| ≤ m-1`), columns `γ` (`1 ≤ |γ| ≤ m`): the coefficient of
/// `(dx)^γ` in `(dx)^β · (Q(x + dx) - Q(x))`, read off the Taylor
/// expansion of `Q` computed by substitution.
pub fn jet_presentation(arr: &Arrangement, m: usize) -> PresentationMatrix {
    let n = arr.n();
    let taylor = shifted_defining_poly(arr);
    // Split Q(x+y) by its y-part.
    let mut by_y: BTreeMap<Monomial, Polynomial> = BTreeMap::new();
    for (mono, c) in taylor.terms() {
        let e = mono.exponents();
        let (x, y) = (Monomial::from_exponents(&e[..n]), Monomial::from_exponents(&e[n..]));
        by_y.entry(y)
            .or_insert_with(|| Polynomial::zero(n))
            .add_term(x, c.clone());
    }
    let rows = beta_labels(n, m);
    let cols = alpha_labels(n, m);
    let mut entries = PolyMatrix::zeros(rows.len(), cols.len(), n);
    for (i, b) in rows.iter().enumerate() {
        for (j, g) in cols.iter().enumerate() {
            if g == b {
                continue;
            }
            if let Some(d) = b.complement_in(g) {
                if let Some(p) = by_y.get(&d) {
                    entries.set(i, j, p.clone());
                }
            }
        }
    }
    PresentationMatrix {
        row_labels: rows,
        col_labels: cols,
        entries,
    }
}

/// Whether `Q e_0 = δ̄_0(ε_1 / r)`: the `e_0` component of `(ε_1/r) • Q` is
/// `Q` and every other component is divisible by `Q`.
pub fn euler_hits_q_e0(arr: &Arrangement, m: usize) -> bool {
    let q = arr.defining_poly();
    let e1 = euler(arr.n(), 1).scale(&Rat::from_integer((arr.r() as i64).into()).recip());
    let v = bullet(&e1, &q, m);
    v.e0() == &q && v.coords[1..].iter().all(|c| c.exact_div(&q).is_ok())
}

/// For `g ∈ Ξ^(k)`: `γ_k(g) • Q` has `e_0`-component `0` and all other
/// components divisible by `Q`.
pub fn twisted_bullet_in_kernel(g: &DiffOp, arr: &Arrangement, m: usize) -> Result<bool> {
    let q = arr.defining_poly();
    let t = gamma_k(g, arr)?;
    let v = bullet(&t, &q, m);
    Ok(v.e0().is_zero() && v.coords[1..].iter().all(|c| c.exact_div(&q).is_ok()))
}

/// `γ_k^{-1}(γ_k(g)) = g`.
pub fn gamma_round_trip(g: &DiffOp, arr: &Arrangement) -> Result<bool> {
    Ok(&gamma_k_inverse(&gamma_k(g, arr)?, arr)? == g)
}

/// `γ_k(γ_k^{-1}(h)) = h`, for `h` killing `Q`.
pub fn gamma_inverse_round_trip(h: &DiffOp, arr: &Arrangement) -> Result<bool> {
    Ok(&gamma_k(&gamma_k_inverse(h, arr)?, arr)? == h)
}

fn label_of(prefix: &str, a: &Monomial) -> String {
    let mut s = String::from(prefix);
    s += "[";
    for (i, e) in a.exponents().iter().enumerate() {
        if i > 0 {
            s += ",";
        }
        s += &format!("{e}");
    }
    s += "]";
    s
}

/// `ε_k / (r(r-1)⋯(r-k+1)) - ε_1 / r` for `2 ≤ k ≤ m`: sums of Euler
/// operators of different orders that kill `Q`. Each order-`k` part acts on
/// `Q` as a nonzero multiple of `Q`, so these are not in `⊕_k D^(k)(A)'`,
/// yet they lie in the kernel of `δ̄_0`.
pub fn euler_differences(n: usize, r: usize, m: usize) -> Vec<Vec<DiffOp>> {
    let e1 = euler(n, 1).scale(&falling(r, 1).recip());
    (2..=m)
        .map(|k| vec![e1.scale(&-Rat::from_integer(1.into())), euler(n, k).scale(&falling(r, k).recip())])
        .collect()
}

/// Assembles the resolution of `Coker δ̃_0`:
/// `F̃_{-1} = ⊕_{|β|≤m-1} S e_β`, `F̃_0 = D^{[1,m]}(S) ⊕ ⊕_{β≠0} S e_β`,
/// `F̃_1 = ⊕_{k=1}^m F_1^{(k)} ⊕ S^{m-1}` and `F̃_j = ⊕_{k=1}^m F_j^{(k)}`
/// for `j ≥ 2`. The extra `S^{m-1}` in degree `0` maps to the
/// [`euler_differences`].
pub fn build_jm_resolution(arr: &Arrangement, m: usize) -> Result<FreeComplex> {
    assemble(arr, m, None, true)
}

/// The complex without the [`euler_differences`] summand; for `m ≥ 2` it is
/// not exact at `F̃_0`.
pub fn build_jm_complex_without_euler_differences(arr: &Arrangement, m: usize) -> Result<FreeComplex> {
    assemble(arr, m, None, false)
}

/// The resolution with the `γ_k` twist left out for one order-`k`
/// generator (`col` counts within `F_1^{(k)}`); for negative controls.
pub fn build_jm_resolution_untwisted(arr: &Arrangement, m: usize, k: usize, col: usize) -> Result<FreeComplex> {
    assemble(arr, m, Some((k, col)), true)
}

fn assemble(
    arr: &Arrangement,
    m: usize,
    skip: Option<(usize, usize)>,
    with_euler: bool,
) -> Result<FreeComplex> {
    let (n, r) = (arr.n(), arr.r());
    if m == 0 || n < 3 || m + n >= r + 1 {
        return Err(Error::InvalidArgument(format!(
            "the jet resolution needs n ≥ 3 and 1 ≤ m < r - n + 1, got ({n}, {r}, {m})"
        )));
    }
    let q = arr.defining_poly();
    let betas = beta_labels(n, m);
    let alphas = alpha_labels(n, m);
    let per_order: Vec<FreeComplex> = (1..=m).map(|k| build_f_resolution(arr, k)).collect::<Result<_>>()?;

    let mut modules = Vec::with_capacity(n + 1);
    modules.push(FreeModule {
        degrees: betas.iter().map(|b| -(r as i64) - b.degree() as i64).collect(),
        labels: betas.iter().map(|b| label_of("e", b)).collect(),
    });
    let mut f0 = FreeModule {
        degrees: alphas.iter().map(|a| -(a.degree() as i64)).collect(),
        labels: alphas.iter().map(|a| label_of("D", a)).collect(),
    };
    for b in &betas[1..] {
        f0.degrees.push(-(b.degree() as i64));
        f0.labels.push(label_of("e", b));
    }
    modules.push(f0);
    for j in 1..n {
        let mut fm = FreeModule {
            degrees: Vec::new(),
            labels: Vec::new(),
        };
        for (k, fc) in per_order.iter().enumerate() {
            fm.degrees.extend(&fc.modules[j].degrees);
            fm.labels
                .extend(fc.modules[j].labels.iter().map(|l| format!("{l}^({})", k + 1)));
        }
        if j == 1 && with_euler {
            for k in 2..=m {
                fm.degrees.push(0);
                fm.labels.push(format!("eps[{k}]"));
            }
        }
        modules.push(fm);
    }

    // δ̃_0.
    let mut maps = Vec::with_capacity(n);
    let mut d0 = PolyMatrix::zeros(modules[0].rank(), modules[1].rank(), n);
    for (col, a) in alphas.iter().enumerate() {
        let v = bullet(&divided_power(a), &q, m);
        for (i, c) in v.coords.into_iter().enumerate() {
            if !c.is_zero() {
                d0.set(i, col, c);
            }
        }
    }
    for (i, _) in betas.iter().enumerate().skip(1) {
        d0.set(i, alphas.len() + i - 1, q.clone());
    }
    maps.push(d0);

    // δ̃_1: the twisted generators of each Ξ^(k).
    let alpha_index: BTreeMap<&Monomial, usize> = alphas.iter().enumerate().map(|(i, a)| (a, i)).collect();
    let mut d1 = PolyMatrix::zeros(modules[1].rank(), modules[2].rank(), n);
    let mut col = 0;
    for (k0, fc) in per_order.iter().enumerate() {
        let k = k0 + 1;
        let ops = crate::resolution::free::image_operators(fc, k)?;
        for (c_in_k, theta) in ops.iter().enumerate() {
            let twisted = if skip == Some((k, c_in_k)) {
                theta.clone()
            } else {
                gamma_k(theta, arr)?
            };
            for (a, f) in twisted.terms() {
                let fac = Rat::from_integer(a.factorial());
                d1.set(alpha_index[a], col, f.scale(&fac));
            }
            let v = bullet(&twisted, &q, m);
            for (i, c) in v.coords.iter().enumerate().skip(1) {
                if c.is_zero() {
                    continue;
                }
                let quo = if skip == Some((k, c_in_k)) {
                    c.div_rem(&q)?.0
                } else {
                    c.exact_div(&q).map_err(|_| {
                        Error::Inconsistent(format!(
                            "component {} of a twisted order-{k} generator is not divisible by Q",
                            label_of("e", &betas[i])
                        ))
                    })?
                };
                d1.set(alphas.len() + i - 1, col, -&quo);
            }
            col += 1;
        }
    }
    if with_euler {
        for parts in euler_differences(n, r, m) {
            let mut v = BetaVector::zero(n, m);
            for op in &parts {
                for (a, f) in op.terms() {
                    let fac = Rat::from_integer(a.factorial());
                    let cur = d1.get(alpha_index[a], col).clone();
                    d1.set(alpha_index[a], col, &cur + &f.scale(&fac));
                }
                v.add(&bullet(op, &q, m));
            }
            if !v.e0().is_zero() {
                return Err(Error::Inconsistent("Euler difference does not kill Q".into()));
            }
            for (i, c) in v.coords.iter().enumerate().skip(1) {
                let quo = c.exact_div(&q).map_err(|_| {
                    Error::Inconsistent("Euler difference component not divisible by Q".into())
                })?;
                if !quo.is_zero() {
                    d1.set(alphas.len() + i - 1, col, -&quo);
                }
            }
            col += 1;
        }
    }
    maps.push(d1);

    // Higher maps: block diagonal.
    for j in 1..n - 1 {
        let rows = modules[j + 1].rank();
        let cols = modules[j + 2].rank();
        let mut dj = PolyMatrix::zeros(rows, cols, n);
        let (mut ro, mut co) = (0, 0);
        for fc in &per_order {
            let blk = &fc.maps[j];
            for (i, jj, p) in blk.entries() {
                if !p.is_zero() {
                    dj.set(ro + i, co + jj, p.clone());
                }
            }
            ro += blk.rows();
            co += blk.cols();
        }
        maps.push(dj);
    }
    let fc = FreeComplex {
        nvars: n,
        modules,
        maps,
        resolves: Resolves::Cokernel,
    };
    fc.check_shape()?;
    Ok(fc)
}

/// Ranks and regularity of the resolution of `Coker δ̃_0`.
pub fn expected_jm(n: usize, r: usize, m: usize) -> Expected {
    let s = |k: usize| sm_tm(n, k).0;
    let s_sum: usize = (0..m).map(s).sum();
    let mut betti = vec![s_sum, (binom((n + m) as i64, m as i64) - 1) as usize + s_sum - 1];
    for j in 1..n {
        let extra = if j == 1 { m - 1 } else { 0 };
        betti.push((1..=m).map(|k| betti_w(n, r, k, j)).sum::<usize>() + extra);
    }
    Expected {
        betti,
        regularity: r as i64 - n as i64 - 2,
        projective_dimension: n,
        augmentation_rank: s_sum,
    }
}

/// Verifies the resolution of `Coker δ̃_0`, with the same checks as for
/// `Ξ`; every entry of every map must lack a constant term.
pub fn verify_jm_resolution(fc: &FreeComplex, arr: &Arrangement, m: usize, opts: &VerifyOptions) -> Report {
    let (n, r) = (arr.n(), arr.r());
    let lo = fc
        .modules
        .iter()
        .flat_map(|md| md.degrees.iter().copied())
        .min()
        .unwrap_or(0);
    let hi = opts.degree_bound.unwrap_or((r + m + n) as i64);
    verify_complex(fc, &expected_jm(n, r, m), lo, hi, opts, None)
}

/// Entrywise `jet = coker^T`.
pub fn transpose_identity(arr: &Arrangement, m: usize) -> bool {
    jet_presentation(arr, m) == coker_presentation(arr, m).transpose()
}
