use std::collections::BTreeMap;
use std::io::{self, Write};

use ellidelta::cnum::{format_complex, to_pair};
use ellidelta::identities::{ReportRecord, Verdict};
use ellidelta::C64;
use serde::Serialize;

use crate::args::Format;

#[derive(Debug, Clone, Serialize)]
pub struct ThetaRow {
    pub x: [f64; 2],
    pub theta: [f64; 2],
}

#[derive(Debug, Clone, Serialize)]
pub struct SeriesRow {
    pub kind: &'static str,
    pub value: [f64; 2],
    pub abs_sum: f64,
    pub terms: usize,
    pub condition: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExpansionRow {
    pub kind: &'static str,
    pub params: BTreeMap<String, [f64; 2]>,
    pub residual: f64,
    pub coefficients: Vec<[f64; 2]>,
    /// Closed-form or expected coefficients, when the kind has them.
    pub expected: Option<Vec<[f64; 2]>>,
    /// Largest `|f_k - expected_k| / max_j |expected_j|`.
    pub max_deviation: Option<f64>,
    pub oracle: Option<Vec<[f64; 2]>>,
    pub verdict: Verdict,
}

pub enum Output {
    Theta(Vec<ThetaRow>),
    Series(SeriesRow),
    Expansion(ExpansionRow),
    Reports(Vec<ReportRecord>),
}

impl Output {
    /// Verdicts carried by the output, for the exit status.
    pub fn verdicts(&self) -> Vec<Verdict> {
        match self {
            Output::Expansion(e) => vec![e.verdict],
            Output::Reports(r) => r.iter().map(|r| r.verdict).collect(),
            _ => Vec::new(),
        }
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> io::Result<()> {
        match format {
            Format::Json => self.write_json(out),
            Format::Csv => self.write_csv(out),
            Format::Text => self.write_text(out),
        }
    }

    fn write_json(&self, out: &mut impl Write) -> io::Result<()> {
        fn line<T: Serialize>(out: &mut impl Write, v: &T) -> io::Result<()> {
            serde_json::to_writer(&mut *out, v)?;
            writeln!(out)
        }
        match self {
            Output::Theta(rows) => rows.iter().try_for_each(|r| line(out, r)),
            Output::Series(row) => line(out, row),
            Output::Expansion(row) => line(out, row),
            Output::Reports(rows) => rows.iter().try_for_each(|r| line(out, r)),
        }
    }

    fn write_csv(&self, out: &mut impl Write) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let num = |x: f64| format!("{x:?}");
        let pair = |z: &[f64; 2]| [num(z[0]), num(z[1])];
        let opt = |x: Option<f64>| x.map(num).unwrap_or_default();
        match self {
            Output::Theta(rows) => {
                w.write_record(["x_re", "x_im", "theta_re", "theta_im"])?;
                for r in rows {
                    w.write_record(pair(&r.x).iter().chain(&pair(&r.theta)))?;
                }
            }
            Output::Series(r) => {
                w.write_record(["kind", "value_re", "value_im", "abs_sum", "terms", "condition"])?;
                let [re, im] = pair(&r.value);
                w.write_record([r.kind.to_string(), re, im, num(r.abs_sum), r.terms.to_string(), num(r.condition)])?;
            }
            Output::Expansion(r) => {
                w.write_record(["k", "coefficient_re", "coefficient_im", "expected_re", "expected_im", "oracle_re", "oracle_im"])?;
                for (k, coef) in r.coefficients.iter().enumerate() {
                    let pick = |v: &Option<Vec<[f64; 2]>>| match v {
                        Some(v) => pair(&v[k]),
                        None => [String::new(), String::new()],
                    };
                    let mut rec = vec![k.to_string()];
                    rec.extend(pair(coef));
                    rec.extend(pick(&r.expected));
                    rec.extend(pick(&r.oracle));
                    w.write_record(&rec)?;
                }
            }
            Output::Reports(rows) => {
                w.write_record([
                    "identity", "seed", "index", "verdict", "rel_error", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "elapsed_ms", "params",
                ])?;
                for r in rows {
                    let side = |s: &Option<[f64; 2]>| s.map(|z| pair(&z)).unwrap_or_default();
                    let params: Vec<String> =
                        r.params.iter().map(|(k, v)| format!("{k}={}", format_complex(C64::new(v[0], v[1])))).collect();
                    let mut rec = vec![
                        r.identity.to_string(),
                        r.seed.map(|s| s.to_string()).unwrap_or_default(),
                        r.index.map(|s| s.to_string()).unwrap_or_default(),
                        r.verdict.to_string(),
                        opt(r.rel_error),
                    ];
                    rec.extend(side(&r.lhs));
                    rec.extend(side(&r.rhs));
                    rec.push(num(r.elapsed_ms));
                    rec.push(params.join(";"));
                    w.write_record(&rec)?;
                }
            }
        }
        w.flush()
    }

    fn write_text(&self, out: &mut impl Write) -> io::Result<()> {
        let fc = |z: &[f64; 2]| format_complex(C64::new(z[0], z[1]));
        match self {
            Output::Theta(rows) => {
                for r in rows {
                    writeln!(out, "theta({}) = {}", fc(&r.x), fc(&r.theta))?;
                }
            }
            Output::Series(r) => {
                writeln!(out, "{} series = {} ({} terms, cancellation {:.3e})", r.kind, fc(&r.value), r.terms, r.condition)?;
            }
            Output::Expansion(r) => {
                writeln!(out, "{} expansion, residual {:.3e}, verdict {}", r.kind, r.residual, r.verdict)?;
                for (k, coef) in r.coefficients.iter().enumerate() {
                    write!(out, "  f_{k} = {}", fc(coef))?;
                    if let Some(exp) = &r.expected {
                        write!(out, "   expected {}", fc(&exp[k]))?;
                    }
                    writeln!(out)?;
                }
                if let Some(d) = r.max_deviation {
                    writeln!(out, "  max deviation {d:.3e}")?;
                }
            }
            Output::Reports(rows) => {
                for r in rows {
                    let err = r.rel_error.map(|e| format!("{e:.3e}")).unwrap_or_else(|| "-".into());
                    let at = match (r.seed, r.index) {
                        (Some(s), Some(i)) => format!(" seed {s} #{i}"),
                        _ => String::new(),
                    };
                    writeln!(out, "{}{at}: {} (rel error {err})", r.identity, r.verdict)?;
                    if let (Some(l), Some(rr)) = (&r.lhs, &r.rhs) {
                        writeln!(out, "  lhs {}\n  rhs {}", fc(l), fc(rr))?;
                    }
                }
            }
        }
        Ok(())
    }
}

pub fn pairs(v: &[C64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| to_pair(*z)).collect()
}
