//! JSON file formats.
//!
//! Rationals are strings `"num/den"`. Arrangement coefficients are primitive
//! integers and are written as JSON numbers when they fit in an `i64`;
//! readers accept numbers and strings everywhere a rational is expected.
//! Polynomial terms are written in descending grevlex order.

use std::collections::BTreeMap;

use hadiff_core::arrangement::Arrangement;
use hadiff_core::exactalg::rat::format_rat;
use hadiff_core::exactalg::{parse_rat, Monomial, PolyMatrix, Polynomial, Rat};
use hadiff_core::freebasis::FreeBasis;
use hadiff_core::jet::PresentationMatrix;
use hadiff_core::resolution::{FreeComplex, FreeModule, Report, Resolves};
use hadiff_core::saito::SaitoReport;
use hadiff_core::weyl::DiffOp;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::InputError;

pub type Json<T> = std::result::Result<T, InputError>;

fn rat_value(r: &Rat) -> Value {
    if r.is_integer() {
        if let Some(i) = r.numer().to_i64() {
            return Value::from(i);
        }
    }
    Value::String(format_rat(r))
}

fn parse_rat_value(v: &Value) -> Json<Rat> {
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(Rat::from_integer(i.into())),
            None => Err(InputError::new(format!("coefficient {n} is not an integer"))),
        },
        Value::String(s) => parse_rat(s).map_err(InputError::from),
        other => Err(InputError::new(format!("expected a rational, got {other}"))),
    }
}

fn exponents_of(e: &[u32], nvars: usize) -> Json<Monomial> {
    if e.len() != nvars {
        return Err(InputError::new(format!(
            "exponent vector {e:?} has length {}, expected {nvars}",
            e.len()
        )));
    }
    let e: Vec<u16> = e
        .iter()
        .map(|&x| u16::try_from(x).map_err(|_| InputError::new(format!("exponent {x} too large"))))
        .collect::<Json<_>>()?;
    Ok(Monomial::from_exponents(&e))
}

fn exps(m: &Monomial) -> Vec<u32> {
    m.exponents().iter().map(|&e| e as u32).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrangementJson {
    pub n: usize,
    pub forms: Vec<Vec<Value>>,
}

impl ArrangementJson {
    pub fn from_arrangement(a: &Arrangement) -> Self {
        ArrangementJson {
            n: a.n(),
            forms: a.forms().iter().map(|f| f.iter().map(rat_value).collect()).collect(),
        }
    }

    /// Shape checks only; genericity is left to the caller.
    pub fn to_arrangement(&self) -> Json<Arrangement> {
        let forms = self
            .forms
            .iter()
            .map(|f| f.iter().map(parse_rat_value).collect::<Json<Vec<_>>>())
            .collect::<Json<Vec<_>>>()?;
        Arrangement::new(self.n, forms).map_err(InputError::from)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub e: Vec<u32>,
    pub c: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub nvars: usize,
    pub terms: Vec<TermJson>,
}

impl PolyJson {
    pub fn from_poly(p: &Polynomial) -> Self {
        PolyJson {
            nvars: p.nvars(),
            terms: p
                .terms()
                .rev()
                .map(|(m, c)| TermJson {
                    e: exps(m),
                    c: Value::String(format_rat(c)),
                })
                .collect(),
        }
    }

    pub fn to_poly(&self) -> Json<Polynomial> {
        let terms = self
            .terms
            .iter()
            .map(|t| Ok((exponents_of(&t.e, self.nvars)?, parse_rat_value(&t.c)?)))
            .collect::<Json<Vec<_>>>()?;
        Ok(Polynomial::from_terms(self.nvars, terms))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpTermJson {
    pub dalpha: Vec<u32>,
    pub poly: PolyJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffOpJson {
    pub order: usize,
    pub terms: Vec<OpTermJson>,
}

impl DiffOpJson {
    pub fn from_op(op: &DiffOp) -> Self {
        DiffOpJson {
            order: op.order(),
            terms: op
                .terms()
                .collect::<Vec<_>>()
                .into_iter()
                .rev()
                .map(|(a, f)| OpTermJson {
                    dalpha: exps(a),
                    poly: PolyJson::from_poly(f),
                })
                .collect(),
        }
    }

    pub fn to_op(&self, nvars: usize) -> Json<DiffOp> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                if t.poly.nvars != nvars {
                    return Err(InputError::new(format!(
                        "coefficient has {} variables, expected {nvars}",
                        t.poly.nvars
                    )));
                }
                Ok((exponents_of(&t.dalpha, nvars)?, t.poly.to_poly()?))
            })
            .collect::<Json<Vec<_>>>()?;
        DiffOp::from_terms(nvars, self.order, terms).map_err(InputError::from)
    }
}

/// Output of `hadiff basis`; `hadiff saito-check` also accepts a bare list
/// of operators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisJson {
    pub case: String,
    pub exp: BTreeMap<usize, usize>,
    pub extension_forms: Vec<Vec<Value>>,
    pub ops: Vec<DiffOpJson>,
}

impl BasisJson {
    pub fn from_basis(b: &FreeBasis) -> Self {
        let exp = hadiff_core::saito::observed_exponents(&b.ops).unwrap_or_default();
        BasisJson {
            case: b.case.name().to_string(),
            exp: exp.0,
            extension_forms: b
                .extension_forms
                .iter()
                .map(|f| f.iter().map(rat_value).collect())
                .collect(),
            ops: b.ops.iter().map(DiffOpJson::from_op).collect(),
        }
    }
}

/// Operators for `saito-check`: either a bare list or an object with an
/// `"ops"` field, such as the output of `basis`.
pub fn parse_ops_file(text: &str, nvars: usize) -> Json<Vec<DiffOp>> {
    let mut v: Value = serde_json::from_str(text)?;
    let list = match &mut v {
        Value::Array(_) => v,
        Value::Object(o) => o
            .remove("ops")
            .ok_or_else(|| InputError::new("object has no \"ops\" field"))?,
        _ => return Err(InputError::new("expected a list of operators")),
    };
    let ops: Vec<DiffOpJson> = serde_json::from_value(list)?;
    ops.iter().map(|o| o.to_op(nvars)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaitoJson {
    pub basis: bool,
    pub c: Option<String>,
    pub det_degree: Option<usize>,
    pub multiplicities: Vec<usize>,
    pub t_m: usize,
}

impl From<&SaitoReport> for SaitoJson {
    fn from(s: &SaitoReport) -> Self {
        SaitoJson {
            basis: s.basis,
            c: s.c.as_ref().map(format_rat),
            det_degree: s.det_degree,
            multiplicities: s.multiplicities.clone(),
            t_m: s.t_m,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryJson {
    pub i: usize,
    pub j: usize,
    pub poly: PolyJson,
}

/// Sparse matrix: only nonzero entries, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<EntryJson>,
}

impl MatrixJson {
    pub fn from_matrix(m: &PolyMatrix) -> Self {
        MatrixJson {
            rows: m.rows(),
            cols: m.cols(),
            entries: m
                .entries()
                .filter(|(_, _, p)| !p.is_zero())
                .map(|(i, j, p)| EntryJson {
                    i,
                    j,
                    poly: PolyJson::from_poly(p),
                })
                .collect(),
        }
    }

    pub fn to_matrix(&self, nvars: usize) -> Json<PolyMatrix> {
        let mut m = PolyMatrix::zeros(self.rows, self.cols, nvars);
        for e in &self.entries {
            if e.i >= self.rows || e.j >= self.cols {
                return Err(InputError::new(format!("entry ({}, {}) out of range", e.i, e.j)));
            }
            m.set(e.i, e.j, e.poly.to_poly()?);
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleJson {
    pub rank: usize,
    pub degrees: Vec<i64>,
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub passed: bool,
    pub dd_zero: bool,
    pub generic_ranks: Vec<usize>,
    pub ranks_ok: bool,
    pub minimal: bool,
    pub truncated_exact: bool,
    pub degree_range: (i64, i64),
    pub betti: Vec<usize>,
    pub expected_betti: Vec<usize>,
    pub regularity: Option<i64>,
    pub expected_regularity: i64,
    pub projective_dimension: Option<usize>,
    pub expected_projective_dimension: usize,
    pub failures: Vec<String>,
}

impl From<&Report> for ReportJson {
    fn from(r: &Report) -> Self {
        ReportJson {
            passed: r.passed(),
            dd_zero: r.dd_zero,
            generic_ranks: r.generic_ranks.clone(),
            ranks_ok: r.ranks_ok,
            minimal: r.minimal,
            truncated_exact: r.truncated_exact,
            degree_range: r.degree_range,
            betti: r.betti.clone(),
            expected_betti: r.expected_betti.clone(),
            regularity: r.regularity,
            expected_regularity: r.expected_regularity,
            projective_dimension: r.projective_dimension,
            expected_projective_dimension: r.expected_projective_dimension,
            failures: r.failures.clone(),
        }
    }
}

/// `modules[0] ← modules[1] ← …`; `maps[k]` goes from `modules[k+1]` to
/// `modules[k]`. For `"image"` complexes `modules[0]` is the ambient module
/// and not part of the resolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub nvars: usize,
    pub resolves: String,
    pub ranks: Vec<usize>,
    pub modules: Vec<ModuleJson>,
    pub maps: Vec<MatrixJson>,
    pub betti: Vec<usize>,
    pub regularity: Option<i64>,
    pub projective_dimension: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<ReportJson>,
}

impl ComplexJson {
    pub fn from_complex(fc: &FreeComplex, report: Option<&Report>) -> Self {
        ComplexJson {
            nvars: fc.nvars,
            resolves: match fc.resolves {
                Resolves::Image => "image",
                Resolves::Cokernel => "cokernel",
            }
            .to_string(),
            ranks: fc.modules.iter().map(FreeModule::rank).collect(),
            modules: fc
                .modules
                .iter()
                .map(|m| ModuleJson {
                    rank: m.rank(),
                    degrees: m.degrees.clone(),
                    labels: m.labels.clone(),
                })
                .collect(),
            maps: fc.maps.iter().map(MatrixJson::from_matrix).collect(),
            betti: fc.betti(),
            regularity: fc.regularity(),
            projective_dimension: fc.projective_dimension(),
            report: report.map(ReportJson::from),
        }
    }

    pub fn to_complex(&self) -> Json<FreeComplex> {
        let resolves = match self.resolves.as_str() {
            "image" => Resolves::Image,
            "cokernel" => Resolves::Cokernel,
            other => return Err(InputError::new(format!("unknown complex kind {other:?}"))),
        };
        let modules = self
            .modules
            .iter()
            .map(|m| {
                if m.degrees.len() != m.labels.len() {
                    return Err(InputError::new("module degrees and labels differ in length"));
                }
                Ok(FreeModule {
                    degrees: m.degrees.clone(),
                    labels: m.labels.clone(),
                })
            })
            .collect::<Json<Vec<_>>>()?;
        let maps = self
            .maps
            .iter()
            .map(|m| m.to_matrix(self.nvars))
            .collect::<Json<Vec<_>>>()?;
        let fc = FreeComplex {
            nvars: self.nvars,
            modules,
            maps,
            resolves,
        };
        fc.check_shape().map_err(InputError::from)?;
        Ok(fc)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PresentationJson {
    pub row_labels: Vec<Vec<u32>>,
    pub col_labels: Vec<Vec<u32>>,
    pub matrix: MatrixJson,
}

impl From<&PresentationMatrix> for PresentationJson {
    fn from(p: &PresentationMatrix) -> Self {
        PresentationJson {
            row_labels: p.row_labels.iter().map(exps).collect(),
            col_labels: p.col_labels.iter().map(exps).collect(),
            matrix: MatrixJson::from_matrix(&p.entries),
        }
    }
}

/// Output of `hadiff jet`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JetJson {
    pub m: usize,
    pub coker_presentation: PresentationJson,
    pub jet_presentation: PresentationJson,
    pub transpose_identity: bool,
    pub resolution: ComplexJson,
}

/// Pretty JSON with a trailing newline.
pub fn to_string<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use hadiff_core::exactalg::{rat, rat_frac};

    #[test]
    fn polynomial_round_trip() {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let p = &(&x * &x).scale(&rat_frac(3, 2)) - &(&x * &y).scale(&rat(5));
        let j = PolyJson::from_poly(&p);
        assert_eq!(j.terms[0].e, vec![2, 0]);
        assert_eq!(j.terms[0].c, Value::from("3/2"));
        let back: PolyJson = serde_json::from_str(&serde_json::to_string(&j).unwrap()).unwrap();
        assert_eq!(back.to_poly().unwrap(), p);
    }

    #[test]
    fn arrangement_round_trip() {
        let a = Arrangement::random_generic(3, 5, 1).unwrap();
        let j = ArrangementJson::from_arrangement(&a);
        let back: ArrangementJson = serde_json::from_str(&to_string(&j)).unwrap();
        assert_eq!(back.to_arrangement().unwrap(), a);
    }

    #[test]
    fn string_coefficients_accepted() {
        let j: ArrangementJson =
            serde_json::from_str(r#"{"n": 2, "forms": [[1, 0], ["0", "1/2"], [1, "1"]]}"#).unwrap();
        let a = j.to_arrangement().unwrap();
        assert_eq!(a.form(1), &[rat(0), rat(1)]);
    }

    #[test]
    fn bad_exponent_length_rejected() {
        let j: PolyJson = serde_json::from_str(r#"{"nvars": 2, "terms": [{"e": [1], "c": "1"}]}"#).unwrap();
        assert!(j.to_poly().is_err());
    }

    #[test]
    fn complex_round_trip() {
        let a = Arrangement::random_generic(3, 5, 2).unwrap();
        let fc = hadiff_core::resolution::build_f_resolution(&a, 1).unwrap();
        let j = ComplexJson::from_complex(&fc, None);
        let back: ComplexJson = serde_json::from_str(&to_string(&j)).unwrap();
        let fc2 = back.to_complex().unwrap();
        assert_eq!(fc2.betti(), fc.betti());
        assert_eq!(fc2.maps, fc.maps);
    }
}
