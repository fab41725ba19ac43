//! Certification of graded free resolutions.
//!
//! `d∘d = 0` is checked exactly. Exactness on each graded piece is certified
//! by ranks over `F_p`: since `rank_p ≤ rank_Q`, the identity
//! `rank_p(d_j) + rank_p(d_{j+1}) = dim F_{j,d}` together with `d∘d = 0`
//! forces exactness over `Q`. Surjectivity onto `Ξ_d` uses the same argument
//! against the linear conditions cutting `Ξ_d` out of `S_{d+m} ⊗ V_m`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::free::{betti_w, FreeComplex, Resolves};
use super::generators::kills_first_forms;
use crate::arrangement::Arrangement;
use crate::exactalg::modp::{rat_mod, ModMatrix, PRIMES};
use crate::exactalg::{binom, Monomial, Polynomial, QMatrix, Rat};
use crate::saito::sm_tm;
use crate::weyl::in_dma;

/// About 128 MiB of `u32`; rank computations at this size take minutes.
pub const DEFAULT_MAX_PIECE_ENTRIES: usize = 1 << 25;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Highest module degree checked; `None` means `r + m + n`.
    pub degree_bound: Option<i64>,
    pub seed: u64,
    /// Random evaluation points for the generic ranks.
    pub points: usize,
    /// Largest dense matrix (in entries) built for a graded piece. Degrees
    /// whose pieces are larger are left unchecked and reported as such.
    pub max_piece_entries: Option<usize>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            degree_bound: None,
            seed: 0,
            points: 3,
            max_piece_entries: Some(DEFAULT_MAX_PIECE_ENTRIES),
        }
    }
}

/// What a correct resolution must look like.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expected {
    pub betti: Vec<usize>,
    pub regularity: i64,
    pub projective_dimension: usize,
    /// Generic rank of `maps[0]`.
    pub augmentation_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub dd_zero: bool,
    /// Generic rank of each map, the maximum over the evaluation points.
    pub generic_ranks: Vec<usize>,
    pub ranks_ok: bool,
    pub minimal: bool,
    pub truncated_exact: bool,
    /// Degrees actually checked; ends early when pieces exceed the budget.
    pub degree_range: (i64, i64),
    pub betti: Vec<usize>,
    pub expected_betti: Vec<usize>,
    pub regularity: Option<i64>,
    pub expected_regularity: i64,
    pub projective_dimension: Option<usize>,
    pub expected_projective_dimension: usize,
    pub failures: Vec<String>,
}

impl Report {
    pub fn betti_ok(&self) -> bool {
        self.betti == self.expected_betti
    }

    pub fn regularity_ok(&self) -> bool {
        self.regularity == Some(self.expected_regularity)
    }

    pub fn projective_dimension_ok(&self) -> bool {
        self.projective_dimension == Some(self.expected_projective_dimension)
    }

    pub fn passed(&self) -> bool {
        self.dd_zero
            && self.ranks_ok
            && self.minimal
            && self.truncated_exact
            && self.betti_ok()
            && self.regularity_ok()
            && self.projective_dimension_ok()
            && self.failures.is_empty()
    }
}

/// Exact `maps[k] ∘ maps[k+1] = 0`, with the first offending entry.
pub fn check_dd_zero(fc: &FreeComplex) -> Result<(), String> {
    for k in 1..fc.maps.len() {
        let prod = fc.maps[k - 1]
            .mul(&fc.maps[k])
            .map_err(|e| format!("maps {} and {k} do not compose: {e}", k - 1))?;
        let bad = prod.entries().find(|(_, _, p)| !p.is_zero()).map(|(i, j, p)| {
            format!("d_{k}∘d_{} has entry ({i},{j}) = {p}", k + 1)
        });
        if let Some(w) = bad {
            return Err(w);
        }
    }
    Ok(())
}

/// Generic ranks: the maximum rank over `points` random integer points with
/// coordinates in the 32-bit range.
pub fn generic_ranks(fc: &FreeComplex, seed: u64, points: usize) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<Vec<Rat>> = (0..points.max(1))
        .map(|_| {
            (0..fc.nvars)
                .map(|_| Rat::from_integer(rng.gen_range(i32::MIN as i64..=i32::MAX as i64).into()))
                .collect()
        })
        .collect();
    fc.maps
        .iter()
        .map(|m| {
            pts.iter()
                .map(|p| m.eval(p).map_or(0, |q| q.rank()))
                .max()
                .unwrap_or(0)
        })
        .collect()
}

/// Positions of entries with a nonzero constant term.
pub fn constant_entries(fc: &FreeComplex) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for (k, m) in fc.maps.iter().enumerate() {
        for (i, j, p) in m.entries() {
            if !p.constant_term().is_zero() {
                out.push((k, i, j));
            }
        }
    }
    out
}

struct MonoTable {
    nvars: usize,
    by_degree: BTreeMap<i64, (Vec<Monomial>, BTreeMap<Monomial, usize>)>,
}

impl MonoTable {
    fn new(nvars: usize) -> Self {
        MonoTable {
            nvars,
            by_degree: BTreeMap::new(),
        }
    }

    fn get(&mut self, e: i64) -> &(Vec<Monomial>, BTreeMap<Monomial, usize>) {
        let n = self.nvars;
        self.by_degree.entry(e).or_insert_with(|| {
            let list = if e < 0 { Vec::new() } else { Monomial::all_of_degree(n, e as usize) };
            let idx = list.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
            (list, idx)
        })
    }

    fn len(&mut self, e: i64) -> usize {
        self.get(e).0.len()
    }
}

/// Offsets of the generators of a free module in its degree-`d` piece.
fn piece_offsets(degrees: &[i64], d: i64, mono: &mut MonoTable) -> (Vec<usize>, usize) {
    let mut offs = Vec::with_capacity(degrees.len());
    let mut total = 0;
    for &g in degrees {
        offs.push(total);
        total += mono.len(d - g);
    }
    (offs, total)
}

fn piece_dim(nvars: usize, degrees: &[i64], d: i64) -> usize {
    degrees
        .iter()
        .map(|&g| binom(d - g + nvars as i64 - 1, nvars as i64 - 1).max(0) as usize)
        .sum()
}

/// Entries of the largest dense matrix `graded_exactness` builds in degree `d`.
pub fn largest_piece(fc: &FreeComplex, d: i64) -> usize {
    fc.modules
        .windows(2)
        .map(|w| piece_dim(fc.nvars, &w[0].degrees, d) * piece_dim(fc.nvars, &w[1].degrees, d))
        .max()
        .unwrap_or(0)
}

/// Matrix entries reduced mod `p`, or `None` if `p` divides a denominator.
type ModEntries = Vec<(usize, usize, Vec<(Monomial, u32)>)>;

fn reduce_map(m: &crate::exactalg::PolyMatrix, p: u32) -> Option<ModEntries> {
    let mut out = Vec::new();
    for (i, j, f) in m.entries() {
        if f.is_zero() {
            continue;
        }
        let mut terms = Vec::with_capacity(f.num_terms());
        for (t, c) in f.terms() {
            terms.push((t.clone(), rat_mod(c, p)?));
        }
        out.push((i, j, terms));
    }
    Some(out)
}

/// Rank over `F_p` of a map between free modules on the degree-`d` pieces.
fn piece_rank(
    entries: &ModEntries,
    src: &[i64],
    tgt: &[i64],
    d: i64,
    p: u32,
    mono: &mut MonoTable,
) -> Result<usize, String> {
    let (src_off, cols) = piece_offsets(src, d, mono);
    let (tgt_off, rows) = piece_offsets(tgt, d, mono);
    if rows == 0 || cols == 0 {
        return Ok(0);
    }
    let mut mat = ModMatrix::zeros(p, rows, cols);
    for (i, j, terms) in entries {
        let us = mono.get(d - src[*j]).0.clone();
        let e_tgt = d - tgt[*i];
        for (ui, u) in us.iter().enumerate() {
            for (t, c) in terms {
                let target = t.mul(u);
                let idx = mono.get(e_tgt).1.get(&target).copied().ok_or_else(|| {
                    format!("entry ({i},{j}) is not homogeneous of the expected degree")
                })?;
                mat.add(tgt_off[*i] + idx, src_off[*j] + ui, *c);
            }
        }
    }
    Ok(mat.rank())
}

/// Exactness of every graded piece `lo..=hi`. `target_dim(d, p)` returns an
/// upper bound for the dimension of the degree-`d` piece of the image of
/// `maps[0]` (valid for every prime), used only for [`Resolves::Image`].
pub fn graded_exactness(
    fc: &FreeComplex,
    lo: i64,
    hi: i64,
    target_dim: Option<&dyn Fn(i64, u32) -> Option<usize>>,
) -> Result<(), String> {
    let mut mono = MonoTable::new(fc.nvars);
    let reduced: Vec<Vec<Option<ModEntries>>> = PRIMES
        .iter()
        .map(|&p| fc.maps.iter().map(|m| reduce_map(m, p)).collect())
        .collect();
    for d in lo..=hi {
        let mut witness = None;
        'primes: for (pi, &p) in PRIMES.iter().enumerate() {
            let mut ranks = Vec::with_capacity(fc.maps.len());
            for (k, m) in reduced[pi].iter().enumerate() {
                let Some(entries) = m else {
                    continue 'primes;
                };
                let r = piece_rank(
                    entries,
                    &fc.modules[k + 1].degrees,
                    &fc.modules[k].degrees,
                    d,
                    p,
                    &mut mono,
                )?;
                ranks.push(r);
            }
            let mut bad = None;
            for k in 1..fc.modules.len() {
                let dim = piece_offsets(&fc.modules[k].degrees, d, &mut mono).1;
                let into = ranks.get(k).copied().unwrap_or(0);
                if dim != into + ranks[k - 1] {
                    bad = Some(format!(
                        "degree {d}, module {k}: dim {dim} ≠ {into} + {}",
                        ranks[k - 1]
                    ));
                    break;
                }
            }
            if bad.is_none() && fc.resolves == Resolves::Image {
                if let Some(f) = target_dim {
                    match f(d, p) {
                        Some(t) if t == ranks[0] => {}
                        Some(t) => {
                            bad = Some(format!(
                                "degree {d}: image has dimension {} but the target piece has {t}",
                                ranks[0]
                            ))
                        }
                        None => continue 'primes,
                    }
                }
            }
            match bad {
                None => {
                    witness = None;
                    break;
                }
                Some(w) => {
                    witness.get_or_insert(w);
                }
            }
        }
        if let Some(w) = witness {
            return Err(w);
        }
    }
    Ok(())
}

/// Linear conditions cutting `Ξ_d` out of `S_{d+m} ⊗ V_m`: for each
/// hyperplane, the symbol restricted to it lies in `Sym^m` of its tangent
/// space; and `θ ∗ (p_1⋯p_m) = 0`.
pub struct XiConditions {
    n: usize,
    m: usize,
    alphas: Vec<Monomial>,
    /// Per hyperplane: annihilators of `Sym^m(W_i)` and the substitution
    /// `x ↦ (restricted linear forms)` in `n - 1` variables.
    planes: Vec<(Vec<Vec<Rat>>, Vec<Polynomial>)>,
    /// `∂^α (p_1⋯p_m)`, constants.
    kappa: Vec<Rat>,
}

impl XiConditions {
    pub fn new(arr: &Arrangement, m: usize) -> Self {
        let n = arr.n();
        let alphas = Monomial::all_of_degree(n, m);
        let mut planes = Vec::with_capacity(arr.r());
        for c in arr.forms() {
            let w = QMatrix::from_rows(n, vec![c.clone()]).expect("row length").nullspace();
            let sym: Vec<Vec<Rat>> = Monomial::all_of_degree(n - 1, m)
                .iter()
                .map(|e| {
                    let mut prod = Polynomial::one(n);
                    for (k, &ek) in e.exponents().iter().enumerate() {
                        prod = &prod * &Polynomial::linear_form(&w[k]).pow(ek as usize);
                    }
                    alphas.iter().map(|a| prod.coefficient(a)).collect()
                })
                .collect();
            let phis = QMatrix::from_rows(alphas.len(), sym).expect("row length").nullspace();
            let k = c.iter().position(|x| !x.is_zero()).expect("nonzero form");
            let subst = (0..n)
                .map(|j| {
                    if j == k {
                        let coeffs: Vec<Rat> = (0..n)
                            .filter(|&i| i != k)
                            .map(|i| -(&c[i] / &c[k]))
                            .collect();
                        Polynomial::linear_form(&coeffs)
                    } else {
                        Polynomial::var(n - 1, if j < k { j } else { j - 1 })
                    }
                })
                .collect();
            planes.push((phis, subst));
        }
        let f = arr.product_of(0..m);
        let kappa = alphas.iter().map(|a| f.partial(a).constant_term()).collect();
        XiConditions {
            n,
            m,
            alphas,
            planes,
            kappa,
        }
    }

    /// Entries of the condition matrix in degree `d`.
    pub fn piece_entries(&self, d: i64) -> usize {
        let e = d + self.m as i64;
        if e < 0 {
            return 0;
        }
        let dim = |k: usize| binom(e + k as i64 - 1, k as i64 - 1) as usize;
        let nphi: usize = self.planes.iter().map(|(f, _)| f.len()).sum();
        (nphi * dim(self.n - 1) + dim(self.n)) * dim(self.n) * self.alphas.len()
    }

    /// `dim (S_{d+m} ⊗ V_m) - rank_p(conditions)`, an upper bound for
    /// `dim Ξ_d`; `None` if `p` divides a denominator.
    pub fn dim_bound(&self, d: i64, p: u32) -> Option<usize> {
        let e = d + self.m as i64;
        if e < 0 {
            return Some(0);
        }
        let e = e as usize;
        let monos = Monomial::all_of_degree(self.n, e);
        let cols = monos.len() * self.alphas.len();
        let rmonos = Monomial::all_of_degree(self.n - 1, e);
        let ridx: BTreeMap<&Monomial, usize> = rmonos.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let nphi: usize = self.planes.iter().map(|(f, _)| f.len()).sum();
        let rows = nphi * rmonos.len() + monos.len();
        let mut mat = ModMatrix::zeros(p, rows, cols);
        let mut row_base = 0;
        for (phis, subst) in &self.planes {
            let phis_p: Vec<Vec<u32>> = phis
                .iter()
                .map(|f| f.iter().map(|x| rat_mod(x, p)).collect::<Option<_>>())
                .collect::<Option<_>>()?;
            // Powers of the substituted variables, reused across monomials.
            let mut pow_cache: Vec<Vec<Polynomial>> = subst
                .iter()
                .map(|s| vec![Polynomial::one(self.n - 1), s.clone()])
                .collect();
            for (vi, v) in monos.iter().enumerate() {
                let mut img = Polynomial::one(self.n - 1);
                for (j, &ej) in v.exponents().iter().enumerate() {
                    let ej = ej as usize;
                    while pow_cache[j].len() <= ej {
                        let next = &pow_cache[j][pow_cache[j].len() - 1] * &subst[j];
                        pow_cache[j].push(next);
                    }
                    if ej > 0 {
                        img = &img * &pow_cache[j][ej];
                    }
                }
                let img_p: Vec<(usize, u32)> = img
                    .terms()
                    .map(|(w, c)| Some((ridx[w], rat_mod(c, p)?)))
                    .collect::<Option<_>>()?;
                for (q, phi) in phis_p.iter().enumerate() {
                    for (ai, &fa) in phi.iter().enumerate() {
                        if fa == 0 {
                            continue;
                        }
                        let col = vi * self.alphas.len() + ai;
                        for &(w, c) in &img_p {
                            let prod = (fa as u64 * c as u64 % p as u64) as u32;
                            mat.add(row_base + q * rmonos.len() + w, col, prod);
                        }
                    }
                }
            }
            row_base += phis.len() * rmonos.len();
        }
        let kappa_p: Vec<u32> = self.kappa.iter().map(|x| rat_mod(x, p)).collect::<Option<_>>()?;
        for vi in 0..monos.len() {
            for (ai, &k) in kappa_p.iter().enumerate() {
                if k != 0 {
                    mat.add(row_base + vi, vi * self.alphas.len() + ai, k);
                }
            }
        }
        Some(cols - mat.rank())
    }
}

/// The piece of `Ξ` that the image of `maps[0]` must fill.
pub struct Target<'a> {
    /// Upper bound for `dim Ξ_d` computed mod `p`; `None` if `p` divides a
    /// denominator.
    pub dim: &'a dyn Fn(i64, u32) -> Option<usize>,
    /// Size of the matrix behind `dim`.
    pub entries: &'a dyn Fn(i64) -> usize,
}

/// Generic verification shared by the resolutions of `Ξ` and of the
/// cokernel of `δ̃_0`.
pub fn verify_complex(
    fc: &FreeComplex,
    expected: &Expected,
    lo: i64,
    hi: i64,
    opts: &VerifyOptions,
    target: Option<&Target<'_>>,
) -> Report {
    let mut failures = Vec::new();
    if let Err(e) = fc.check_shape() {
        failures.push(format!("shape: {e}"));
    }
    let dd = check_dd_zero(fc);
    if let Err(w) = &dd {
        failures.push(format!("d∘d ≠ 0: {w}"));
    }

    let ranks = generic_ranks(fc, opts.seed, opts.points);
    let mut ranks_ok = ranks.first() == Some(&expected.augmentation_rank);
    if !ranks_ok {
        failures.push(format!(
            "generic rank of the first map is {:?}, expected {}",
            ranks.first(),
            expected.augmentation_rank
        ));
    }
    for k in 1..fc.modules.len() {
        let into = ranks.get(k).copied().unwrap_or(0);
        if into + ranks[k - 1] != fc.modules[k].rank() {
            ranks_ok = false;
            failures.push(format!(
                "generic ranks at module {k}: {} + {into} ≠ {}",
                ranks[k - 1],
                fc.modules[k].rank()
            ));
        }
    }

    let consts = constant_entries(fc);
    for (k, i, j) in consts.iter().take(5) {
        failures.push(format!("map {k} entry ({i},{j}) has a constant term"));
    }

    let within = |d: i64| {
        opts.max_piece_entries.map_or(true, |cap| {
            largest_piece(fc, d) <= cap && target.map_or(true, |t| (t.entries)(d) <= cap)
        })
    };
    // Piece sizes grow with the degree.
    let top = (lo..=hi).take_while(|&d| within(d)).last().unwrap_or(lo - 1);
    let mut exact = graded_exactness(fc, lo, top, target.map(|t| t.dim));
    if let Err(w) = &exact {
        failures.push(format!("graded exactness: {w}"));
    } else if top < hi {
        let w = format!(
            "graded exactness: degrees {}..={hi} not checked, their pieces exceed {} entries",
            top + 1,
            opts.max_piece_entries.unwrap_or(0)
        );
        failures.push(w.clone());
        exact = Err(w);
    }

    let report = Report {
        dd_zero: dd.is_ok(),
        generic_ranks: ranks,
        ranks_ok,
        minimal: consts.is_empty(),
        truncated_exact: exact.is_ok(),
        degree_range: (lo, top),
        betti: fc.betti(),
        expected_betti: expected.betti.clone(),
        regularity: fc.regularity(),
        expected_regularity: expected.regularity,
        projective_dimension: fc.projective_dimension(),
        expected_projective_dimension: expected.projective_dimension,
        failures,
    };
    let mut report = report;
    if !report.betti_ok() {
        report
            .failures
            .push(format!("betti numbers {:?}, expected {:?}", report.betti, report.expected_betti));
    }
    if !report.regularity_ok() {
        report.failures.push(format!(
            "regularity {:?}, expected {}",
            report.regularity, report.expected_regularity
        ));
    }
    if !report.projective_dimension_ok() {
        report.failures.push(format!(
            "projective dimension {:?}, expected {}",
            report.projective_dimension, report.expected_projective_dimension
        ));
    }
    report
}

/// The expected shape of the resolution of `Ξ^(m)(A)`.
pub fn expected_f(n: usize, r: usize, m: usize) -> Expected {
    Expected {
        betti: (1..n).map(|j| betti_w(n, r, m, j)).collect(),
        regularity: r as i64 - m as i64 - n as i64 + 1,
        projective_dimension: n - 2,
        augmentation_rank: sm_tm(n, m).0 - 1,
    }
}

/// Verifies `F_*` as a minimal free resolution of `Ξ^(m)(A)`: the columns of
/// `d_1` are checked to lie in `Ξ` exactly, then every graded piece from the
/// lowest generator degree up to the bound is certified.
pub fn verify_resolution(fc: &FreeComplex, arr: &Arrangement, m: usize, opts: &VerifyOptions) -> Report {
    let (n, r) = (arr.n(), arr.r());
    let hi = opts.degree_bound.unwrap_or((r + m + n) as i64);
    let lo = -(m as i64);
    let conds = XiConditions::new(arr, m);
    let dim = |d: i64, p: u32| conds.dim_bound(d, p);
    let entries = |d: i64| conds.piece_entries(d);
    let target = Target {
        dim: &dim,
        entries: &entries,
    };
    let mut report = verify_complex(fc, &expected_f(n, r, m), lo, hi, opts, Some(&target));
    match super::free::image_operators(fc, m) {
        Ok(ops) => {
            for (j, op) in ops.iter().enumerate() {
                if !in_dma(op, arr) || !kills_first_forms(op, arr, m) {
                    report.truncated_exact = false;
                    report.failures.push(format!("generator {} of F_1 does not map into Ξ", j + 1));
                }
            }
        }
        Err(e) => report.failures.push(format!("augmentation: {e}")),
    }
    report
}
