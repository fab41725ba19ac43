//! Sweeps over `(n, r, m)` triples. Each point is independent; points run on
//! a rayon pool and the records come back in config order.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use hadiff_core::arrangement::{Arrangement, Genericity};
use hadiff_core::freebasis::{classify, expected_exponents, free_basis};
use hadiff_core::jet::{build_jm_resolution, euler_hits_q_e0, transpose_identity, verify_jm_resolution};
use hadiff_core::resolution::{
    build_f_resolution, expected_generator_count, hilbert_from_exponents, hilbert_from_resolution,
    linear_rank, minimal_generators_xi, non_freeness_inequality, verify_resolution, FreeComplex,
    VerifyOptions, DEFAULT_MAX_PIECE_ENTRIES,
};
use hadiff_core::saito::{observed_exponents, saito_holm_check};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::json::{ArrangementJson, ReportJson, SaitoJson};
use crate::InputError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub n: usize,
    pub r: usize,
    pub m: usize,
    /// Explicit forms instead of the seeded random arrangement.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forms: Option<Vec<Vec<Value>>>,
}

impl GridPoint {
    pub fn new(n: usize, r: usize, m: usize) -> Self {
        GridPoint { n, r, m, forms: None }
    }
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub points: Vec<GridPoint>,
    #[serde(default)]
    pub seed: u64,
    /// Highest module degree for exactness checks; `None` uses `r + m + n`.
    #[serde(default)]
    pub degree_bound: Option<i64>,
    /// Also build and verify the jet-module resolution at non-free points.
    #[serde(default = "default_true")]
    pub jet: bool,
    /// Cap on dense matrix size in exactness checks; larger degrees are
    /// reported as unchecked.
    #[serde(default = "default_max_piece")]
    pub max_piece_entries: Option<usize>,
}

fn default_max_piece() -> Option<usize> {
    Some(DEFAULT_MAX_PIECE_ENTRIES)
}

impl GridConfig {
    /// `n ∈ {2, 3, 4}`, `n ≤ r ≤ 8`, `1 ≤ m ≤ 4`.
    pub fn default_grid(seed: u64) -> Self {
        let mut points = Vec::new();
        for n in 2..=4 {
            for r in n..=8 {
                for m in 1..=4 {
                    points.push(GridPoint::new(n, r, m));
                }
            }
        }
        GridConfig {
            points,
            seed,
            degree_bound: None,
            jet: true,
            max_piece_entries: default_max_piece(),
        }
    }

    pub fn from_points(points: impl IntoIterator<Item = (usize, usize, usize)>, seed: u64) -> Self {
        GridConfig {
            points: points.into_iter().map(|(n, r, m)| GridPoint::new(n, r, m)).collect(),
            seed,
            degree_bound: None,
            jet: true,
            max_piece_entries: default_max_piece(),
        }
    }
}

/// Graded Betti numbers: for each homological index, `(degree, count)`.
pub type GradedBetti = Vec<Vec<(i64, usize)>>;

pub fn graded_betti(fc: &FreeComplex) -> GradedBetti {
    fc.modules[fc.first()..]
        .iter()
        .map(|m| {
            let mut counts = BTreeMap::new();
            for &d in &m.degrees {
                *counts.entry(d).or_insert(0) += 1;
            }
            counts.into_iter().collect()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionRecord {
    pub report: ReportJson,
    pub graded_betti: GradedBetti,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JetRecord {
    pub report: ReportJson,
    pub graded_betti: GradedBetti,
    pub transpose_identity: bool,
    pub euler_hits_q_e0: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorRecord {
    pub count: usize,
    pub expected: usize,
    pub rank: usize,
    pub inequality: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridRecord {
    pub n: usize,
    pub r: usize,
    pub m: usize,
    pub classification: String,
    pub generic: bool,
    pub witness: Option<Vec<usize>>,
    pub basis_count: Option<usize>,
    pub saito: Option<SaitoJson>,
    pub exponents: Option<BTreeMap<usize, usize>>,
    pub expected_exponents: Option<BTreeMap<usize, usize>>,
    pub generators: Option<GeneratorRecord>,
    pub resolution: Option<ResolutionRecord>,
    pub jet: Option<JetRecord>,
    /// `dim_K D^(m)(A)_p` for `p = 0..=r+m`.
    pub hilbert: Vec<i64>,
    pub passed: bool,
    pub failures: Vec<String>,
}

impl GridRecord {
    fn empty(p: &GridPoint) -> Self {
        GridRecord {
            n: p.n,
            r: p.r,
            m: p.m,
            classification: String::new(),
            generic: false,
            witness: None,
            basis_count: None,
            saito: None,
            exponents: None,
            expected_exponents: None,
            generators: None,
            resolution: None,
            jet: None,
            hilbert: Vec::new(),
            passed: false,
            failures: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridReport {
    pub seed: u64,
    pub total: usize,
    pub failed: usize,
    pub passed: bool,
    pub records: Vec<GridRecord>,
}

impl GridReport {
    /// Plain-text table, one line per point.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:>2} {:>2} {:>2}  {:<8} {:>6} {:>6} {:<16} {:<5} {:<5}  status",
            "n", "r", "m", "case", "basis", "gens", "exponents", "res", "jet"
        );
        let mark = |b: Option<bool>| match b {
            Some(true) => "ok",
            Some(false) => "FAIL",
            None => "-",
        };
        let num = |x: Option<usize>| x.map_or_else(|| "-".to_string(), |v| v.to_string());
        for rec in &self.records {
            let exps = rec.exponents.as_ref().map_or_else(
                || "-".to_string(),
                |e| e.iter().map(|(k, c)| format!("{k}^{c}")).collect::<Vec<_>>().join(","),
            );
            let _ = writeln!(
                s,
                "{:>2} {:>2} {:>2}  {:<8} {:>6} {:>6} {:<16} {:<5} {:<5}  {}",
                rec.n,
                rec.r,
                rec.m,
                rec.classification,
                num(rec.basis_count),
                num(rec.generators.as_ref().map(|g| g.count)),
                exps,
                mark(rec.resolution.as_ref().map(|x| x.report.passed)),
                mark(rec.jet.as_ref().map(|x| x.report.passed)),
                if rec.passed { "PASS" } else { "FAIL" }
            );
            for f in &rec.failures {
                let _ = writeln!(s, "    {f}");
            }
        }
        let _ = writeln!(s, "{} points, {} failed", self.total, self.failed);
        s
    }
}

fn arrangement_for(p: &GridPoint, seed: u64) -> Result<Arrangement, InputError> {
    match &p.forms {
        Some(forms) => {
            let a = ArrangementJson {
                n: p.n,
                forms: forms.clone(),
            }
            .to_arrangement()?;
            if a.r() != p.r {
                return Err(InputError::new(format!("point lists {} forms but r = {}", a.r(), p.r)));
            }
            Ok(a)
        }
        None => Ok(Arrangement::random_generic(p.n, p.r, seed)?),
    }
}

/// Runs every check that applies to one point.
pub fn run_point(p: &GridPoint, cfg: &GridConfig) -> GridRecord {
    let mut rec = GridRecord::empty(p);
    if let Err(e) = fill_record(&mut rec, p, cfg) {
        rec.failures.push(e);
    }
    rec.passed = rec.failures.is_empty();
    rec
}

fn fill_record(rec: &mut GridRecord, p: &GridPoint, cfg: &GridConfig) -> Result<(), String> {
    let (n, r, m) = (p.n, p.r, p.m);
    if m == 0 || n < 2 || r < n {
        return Err(format!("invalid triple ({n}, {r}, {m})"));
    }
    let arr = arrangement_for(p, cfg.seed).map_err(|e| e.to_string())?;
    match arr.check_generic() {
        Genericity::Generic => rec.generic = true,
        Genericity::Witness(s) => {
            rec.witness = Some(s.indices().to_vec());
            return Err(format!("check-generic: hyperplanes {s} meet outside the origin"));
        }
    }
    let case = classify(n, r, m);
    rec.classification = case.name().to_string();
    let err = |what: &str, e: hadiff_core::Error| format!("{what}: {e}");
    let hilbert_bound = r + m;
    let opts = VerifyOptions {
        degree_bound: cfg.degree_bound,
        seed: cfg.seed,
        max_piece_entries: cfg.max_piece_entries,
        ..VerifyOptions::default()
    };

    if case.is_free() {
        let basis = free_basis(&arr, m, cfg.seed).map_err(|e| err("basis", e))?;
        rec.basis_count = Some(basis.ops.len());
        let saito = saito_holm_check(&basis.ops, &arr).map_err(|e| err("saito", e))?;
        if !saito.basis {
            rec.failures.push("saito: det M_m is not c Q^t_m".into());
        }
        rec.saito = Some(SaitoJson::from(&saito));
        let want = expected_exponents(n, r, m).map_err(|e| err("exponents", e))?;
        match observed_exponents(&basis.ops) {
            Some(got) => {
                if got != want {
                    rec.failures.push("exponents differ from the closed form".into());
                }
                if !got.satisfies_rank_identities(n, r, m) {
                    rec.failures.push("exponents violate the rank identities".into());
                }
                rec.hilbert = hilbert_from_exponents(&got, n, hilbert_bound);
                rec.exponents = Some(got.0);
            }
            None => rec.failures.push("basis element is not homogeneous".into()),
        }
        rec.expected_exponents = Some(want.0);
        return Ok(());
    }

    let gens = minimal_generators_xi(&arr, m).map_err(|e| err("generators", e))?;
    let g = GeneratorRecord {
        count: gens.len(),
        expected: expected_generator_count(n, r, m),
        rank: linear_rank(&gens),
        inequality: non_freeness_inequality(n, r, m),
    };
    if g.count != g.expected || g.rank != g.count {
        rec.failures.push(format!(
            "generators: {} found, rank {}, expected {}",
            g.count, g.rank, g.expected
        ));
    }
    if !g.inequality {
        rec.failures.push("generators: non-freeness inequality fails".into());
    }
    rec.generators = Some(g);

    let fc = build_f_resolution(&arr, m).map_err(|e| err("resolution", e))?;
    let report = verify_resolution(&fc, &arr, m, &opts);
    if !report.passed() {
        rec.failures.push(format!("resolution: {}", report.failures.join("; ")));
    }
    rec.hilbert = hilbert_from_resolution(&fc, m, hilbert_bound);
    rec.resolution = Some(ResolutionRecord {
        report: ReportJson::from(&report),
        graded_betti: graded_betti(&fc),
    });

    if cfg.jet {
        let jc = build_jm_resolution(&arr, m).map_err(|e| err("jet", e))?;
        let report = verify_jm_resolution(&jc, &arr, m, &opts);
        let t = transpose_identity(&arr, m);
        let e = euler_hits_q_e0(&arr, m);
        if !report.passed() {
            rec.failures.push(format!("jet: {}", report.failures.join("; ")));
        }
        if !t {
            rec.failures.push("jet: presentation is not the transpose".into());
        }
        if !e {
            rec.failures.push("jet: Q e_0 is not the image of ε_1/r".into());
        }
        rec.jet = Some(JetRecord {
            report: ReportJson::from(&report),
            graded_betti: graded_betti(&jc),
            transpose_identity: t,
            euler_hits_q_e0: e,
        });
    }
    Ok(())
}

/// Runs all points on a pool of at most `threads` workers (rayon's default
/// when `None`).
pub fn run_grid(cfg: &GridConfig, threads: Option<usize>) -> Result<GridReport, InputError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| InputError::new(format!("thread pool: {e}")))?;
    let records: Vec<GridRecord> =
        pool.install(|| cfg.points.par_iter().map(|p| run_point(p, cfg)).collect());
    let failed = records.iter().filter(|r| !r.passed).count();
    Ok(GridReport {
        seed: cfg.seed,
        total: records.len(),
        failed,
        passed: failed == 0,
        records,
    })
}
