use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use hadiff::grid::{run_grid, GridConfig, GridReport};
use hadiff::json::{self, ArrangementJson, BasisJson, ComplexJson, JetJson, PresentationJson, SaitoJson};
use hadiff::{svg, InputError};
use hadiff_core::arrangement::{Arrangement, Genericity};
use hadiff_core::freebasis::free_basis;
use hadiff_core::jet::{
    build_jm_resolution, coker_presentation, jet_presentation, transpose_identity, verify_jm_resolution,
};
use hadiff_core::resolution::{build_f_resolution, verify_resolution, VerifyOptions, DEFAULT_MAX_PIECE_ENTRIES};
use hadiff_core::saito::saito_holm_check;
use serde_json::json;

#[derive(Parser)]
#[command(name = "hadiff", version, about = "Differential operators on generic hyperplane arrangements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a seeded random generic arrangement.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that every n of the forms are linearly independent.
    CheckGeneric { arrangement: PathBuf },
    /// Construct a basis of D^(m)(A) in a free case.
    Basis {
        #[arg(long)]
        m: usize,
        arrangement: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the Saito–Holm determinant test on a list of operators.
    SaitoCheck { arrangement: PathBuf, ops: PathBuf },
    /// Build the minimal free resolution of the non-free summand.
    Resolve {
        #[arg(long)]
        m: usize,
        arrangement: PathBuf,
        #[arg(long)]
        degree_bound: Option<i64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest dense matrix built for one graded piece; 0 removes the cap.
        #[arg(long, default_value_t = DEFAULT_MAX_PIECE_ENTRIES)]
        max_piece_entries: usize,
    },
    /// Presentation matrices of the jet module and the resolution of J_m(A).
    Jet {
        #[arg(long)]
        m: usize,
        arrangement: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        degree_bound: Option<i64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest dense matrix built for one graded piece; 0 removes the cap.
        #[arg(long, default_value_t = DEFAULT_MAX_PIECE_ENTRIES)]
        max_piece_entries: usize,
    },
    /// Run every applicable check over a grid of (n, r, m).
    Grid {
        /// Grid config JSON; the default grid when omitted.
        config: Option<PathBuf>,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        degree_bound: Option<i64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, env = "HADIFF_THREADS")]
        threads: Option<usize>,
        /// Overrides the config cap on dense matrix size; 0 removes it.
        #[arg(long)]
        max_piece_entries: Option<usize>,
    },
    /// Print the summary table of a grid report and write SVG charts.
    Report {
        report: PathBuf,
        #[arg(long)]
        svg_dir: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| InputError::new(format!("cannot read {}: {e}", path.display())).into())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = read(path)?;
    serde_json::from_str(&text)
        .map_err(|e| InputError::new(format!("{}: malformed JSON: {e}", path.display())).into())
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_arrangement(path: &Path) -> Result<Arrangement> {
    let a: ArrangementJson = read_json(path)?;
    Ok(a.to_arrangement()?)
}

/// Loads and rejects non-generic input.
fn load_generic(path: &Path) -> Result<Arrangement> {
    let a = load_arrangement(path)?;
    match a.check_generic() {
        Genericity::Generic => Ok(a),
        Genericity::Witness(s) => Err(InputError::from(hadiff_core::Error::NotGeneric(s)).into()),
    }
}

fn cap(entries: usize) -> Option<usize> {
    (entries > 0).then_some(entries)
}

fn opts(seed: u64, degree_bound: Option<i64>, max_piece_entries: usize) -> VerifyOptions {
    VerifyOptions {
        degree_bound,
        seed,
        max_piece_entries: cap(max_piece_entries),
        ..VerifyOptions::default()
    }
}

/// `Ok(true)` when every check passed.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Gen { n, r, seed, out } => {
            let a = Arrangement::random_generic(n, r, seed).map_err(InputError::from)?;
            emit(out.as_deref(), &json::to_string(&ArrangementJson::from_arrangement(&a)))?;
            Ok(true)
        }
        Command::CheckGeneric { arrangement } => {
            let a = load_arrangement(&arrangement)?;
            let (generic, witness) = match a.check_generic() {
                Genericity::Generic => (true, None),
                Genericity::Witness(s) => (false, Some(s.indices().to_vec())),
            };
            emit(None, &json::to_string(&json!({"generic": generic, "witness": witness})))?;
            Ok(generic)
        }
        Command::Basis {
            m,
            arrangement,
            seed,
            out,
        } => {
            let a = load_generic(&arrangement)?;
            let b = free_basis(&a, m, seed).map_err(InputError::from)?;
            emit(out.as_deref(), &json::to_string(&BasisJson::from_basis(&b)))?;
            Ok(true)
        }
        Command::SaitoCheck { arrangement, ops } => {
            let a = load_generic(&arrangement)?;
            let text = read(&ops)?;
            let ops = json::parse_ops_file(&text, a.n())
                .map_err(|e| InputError::new(format!("{}: {e}", ops.display())))?;
            let report = match saito_holm_check(&ops, &a) {
                Ok(r) => r,
                Err(e @ hadiff_core::Error::NotInDmA { .. }) => {
                    emit(None, &json::to_string(&json!({"basis": false, "error": e.to_string()})))?;
                    return Ok(false);
                }
                Err(e) => return Err(InputError::from(e).into()),
            };
            emit(None, &json::to_string(&SaitoJson::from(&report)))?;
            Ok(report.basis)
        }
        Command::Resolve {
            m,
            arrangement,
            degree_bound,
            out,
            verify,
            seed,
            max_piece_entries,
        } => {
            let a = load_generic(&arrangement)?;
            let fc = build_f_resolution(&a, m).map_err(InputError::from)?;
            let o = opts(seed, degree_bound, max_piece_entries);
            let report = verify.then(|| verify_resolution(&fc, &a, m, &o));
            emit(out.as_deref(), &json::to_string(&ComplexJson::from_complex(&fc, report.as_ref())))?;
            if let Some(r) = &report {
                for f in &r.failures {
                    eprintln!("{f}");
                }
            }
            Ok(report.map_or(true, |r| r.passed()))
        }
        Command::Jet {
            m,
            arrangement,
            out,
            verify,
            degree_bound,
            seed,
            max_piece_entries,
        } => {
            let a = load_generic(&arrangement)?;
            let fc = build_jm_resolution(&a, m).map_err(InputError::from)?;
            let o = opts(seed, degree_bound, max_piece_entries);
            let report = verify.then(|| verify_jm_resolution(&fc, &a, m, &o));
            let t = transpose_identity(&a, m);
            let doc = JetJson {
                m,
                coker_presentation: PresentationJson::from(&coker_presentation(&a, m)),
                jet_presentation: PresentationJson::from(&jet_presentation(&a, m)),
                transpose_identity: t,
                resolution: ComplexJson::from_complex(&fc, report.as_ref()),
            };
            emit(out.as_deref(), &json::to_string(&doc))?;
            if let Some(r) = &report {
                for f in &r.failures {
                    eprintln!("{f}");
                }
            }
            Ok(t && report.map_or(true, |r| r.passed()))
        }
        Command::Grid {
            config,
            seed,
            degree_bound,
            out,
            threads,
            max_piece_entries,
        } => {
            let mut cfg = match &config {
                Some(p) => read_json::<GridConfig>(p)?,
                None => GridConfig::default_grid(0),
            };
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if degree_bound.is_some() {
                cfg.degree_bound = degree_bound;
            }
            if let Some(e) = max_piece_entries {
                cfg.max_piece_entries = cap(e);
            }
            let report = run_grid(&cfg, threads)?;
            let text = json::to_string(&report);
            match &out {
                Some(p) => {
                    emit(Some(p), &text)?;
                    print!("{}", report.summary());
                }
                None => print!("{text}"),
            }
            Ok(report.passed)
        }
        Command::Report { report, svg_dir } => {
            let rep: GridReport = read_json(&report)?;
            print!("{}", rep.summary());
            if let Some(dir) = svg_dir {
                write_charts(&rep, &dir)?;
            }
            Ok(rep.passed)
        }
    }
}

fn write_charts(rep: &GridReport, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    for rec in &rep.records {
        let tag = format!("n{}_r{}_m{}", rec.n, rec.r, rec.m);
        let mut files = Vec::new();
        if let Some(res) = &rec.resolution {
            files.push((
                format!("betti_{tag}.svg"),
                svg::betti_table(&format!("F resolution, (n, r, m) = ({}, {}, {})", rec.n, rec.r, rec.m), &res.graded_betti),
            ));
        }
        if let Some(jet) = &rec.jet {
            files.push((
                format!("jet_betti_{tag}.svg"),
                svg::betti_table(&format!("jet resolution, (n, r, m) = ({}, {}, {})", rec.n, rec.r, rec.m), &jet.graded_betti),
            ));
        }
        if !rec.hilbert.is_empty() {
            files.push((
                format!("hilbert_{tag}.svg"),
                svg::hilbert_chart(&format!("dim D^({})(A) by pdeg, n = {}, r = {}", rec.m, rec.n, rec.r), 0, &rec.hilbert),
            ));
        }
        for (name, body) in files {
            let p = dir.join(name);
            fs::write(&p, body).with_context(|| format!("cannot write {}", p.display()))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.chain().any(|c| c.is::<InputError>()) || e.chain().any(|c| c.is::<std::io::Error>()) {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
