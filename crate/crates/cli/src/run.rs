use std::collections::BTreeMap;
use std::fmt;

use ellidelta::cnum::{c, to_pair};
use ellidelta::expansion::{
    basis_element, expand_oracle, expand_with_tolerance, wp_ratio, wp_ratio_coefficients, ExpansionBasis,
    DEFAULT_RESIDUAL_TOL,
};
use ellidelta::hyperseries::{sum_e, sum_phi, sum_v, SeriesSpec, VSeriesSpec};
use ellidelta::identities::{
    connection_coefficients, eval_rn, run_sample, verify_sample, IdentityId, ReportRecord, RnSpec, Sample,
    SamplerConfig, Verdict,
};
use ellidelta::operator::SymmetricFunction;
use ellidelta::qtheta::theta;
use ellidelta::{EllipticParams, C64};
use rayon::prelude::*;

use crate::args::{Command, Common, ExpandKind, ParamFlags, SeriesKind};
use crate::output::{pairs, ExpansionRow, Output, SeriesRow, ThetaRow};

/// Default agreement tolerance for `expand` against closed forms and the oracle.
pub const EXPAND_TOL: f64 = 1e-8;

#[derive(Debug)]
pub enum RunError {
    Usage(String),
    Library(ellidelta::Error),
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Usage(m) => write!(f, "usage: {m}"),
            RunError::Library(e) => write!(f, "{e}"),
        }
    }
}

impl From<ellidelta::Error> for RunError {
    fn from(e: ellidelta::Error) -> Self {
        RunError::Library(e)
    }
}

type Result<T> = std::result::Result<T, RunError>;

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(RunError::Usage(msg.into()))
}

fn require(params: &ParamFlags, name: &str) -> Result<C64> {
    params.get(name).ok_or_else(|| RunError::Usage(format!("--{name} is required")))
}

pub fn run(command: &Command, common: &Common) -> Result<Output> {
    let params = EllipticParams::new(common.q, common.p)?;
    match command {
        Command::EvalTheta { x } => {
            let rows = x
                .iter()
                .map(|&x| Ok(ThetaRow { x: to_pair(x), theta: to_pair(theta(x, &params)?) }))
                .collect::<Result<_>>()?;
            Ok(Output::Theta(rows))
        }
        Command::EvalSeries { kind, upper, lower, a1, free, z, n } => {
            eval_series(*kind, upper, lower, *a1, free, *z, *n, params)
        }
        Command::Expand { kind, n, m, oracle, params: flags } => {
            expand(*kind, *n, *m, *oracle, flags, params, common.tol.unwrap_or(EXPAND_TOL))
        }
        Command::Verify { identity, n, params: flags } => verify(*identity, *n, flags, params, common.tol),
        Command::Sweep { identity, count, seed, jobs, n_max, condition_limit } => {
            let seed = seed.unwrap_or_else(|| {
                eprintln!("ellidelta: no --seed or ELLIDELTA_SEED given, using seed 0");
                0
            });
            let cfg = SamplerConfig { n_max: *n_max, condition_limit: *condition_limit, ..SamplerConfig::default() };
            let tol = common.tol.unwrap_or(identity.default_tolerance());
            sweep(*identity, seed, *count, cfg, tol, *jobs).map(Output::Reports)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn eval_series(
    kind: SeriesKind,
    upper: &[C64],
    lower: &[C64],
    a1: Option<C64>,
    free: &[C64],
    z: Option<C64>,
    n: Option<usize>,
    params: EllipticParams,
) -> Result<Output> {
    let z = z.unwrap_or(c(1.0, 0.0));
    let (name, sum) = match kind {
        SeriesKind::Phi => ("phi", sum_phi(&SeriesSpec::new(upper.to_vec(), lower.to_vec(), z, n, params)?)?),
        SeriesKind::E => {
            let Some(n) = n else { return usage("E series needs --n") };
            ("E", sum_e(&SeriesSpec::new(upper.to_vec(), lower.to_vec(), z, Some(n), params)?)?)
        }
        SeriesKind::V => {
            let (Some(a1), Some(n)) = (a1, n) else { return usage("V series needs --a1 and --n") };
            ("V", sum_v(&VSeriesSpec::new(a1, free, n, params)?.with_argument(z))?)
        }
    };
    Ok(Output::Series(SeriesRow {
        kind: name,
        value: to_pair(sum.value),
        abs_sum: sum.abs_sum,
        terms: sum.terms,
        condition: sum.condition(),
    }))
}

fn expand(
    kind: ExpandKind,
    n: usize,
    m: Option<usize>,
    oracle: bool,
    flags: &ParamFlags,
    params: EllipticParams,
    tol: f64,
) -> Result<Output> {
    let (a, cc) = (require(flags, "a")?, require(flags, "c")?);
    let basis = ExpansionBasis::new(a, cc, n, params)?;
    let mut entries = vec![("a", a), ("c", cc)];
    let (name, f, expected): (&'static str, SymmetricFunction, Vec<C64>) = match kind {
        ExpandKind::WpMonomial => {
            let b = require(flags, "b")?;
            entries.push(("b", b));
            ("wp-monomial", wp_ratio(b, &basis), wp_ratio_coefficients(b, &basis)?)
        }
        ExpandKind::Basis => {
            let m = m.unwrap_or(n);
            if m > n {
                return usage(format!("--m {m} exceeds --n {n}"));
            }
            let unit = (0..=n).map(|k| c(if k == m { 1.0 } else { 0.0 }, 0.0)).collect();
            ("basis", basis_element(&basis, m)?, unit)
        }
        ExpandKind::Rn => {
            let [b, d, e, f] = ["b", "d", "e", "f"].map(|k| require(flags, k));
            let (b, d, e, f) = (b?, d?, e?, f?);
            entries.extend([("b", b), ("d", d), ("e", e), ("f", f)]);
            let spec = RnSpec::new(b, cc, d, e, f, n, params)?;
            let expected = connection_coefficients(&spec, a)?.into_iter().map(|(v, _)| v).collect();
            ("rn", SymmetricFunction::new(move |z| eval_rn(&spec, z)), expected)
        }
    };
    let report = expand_with_tolerance(&f, &basis, f64::INFINITY)?;
    let deviation = |v: &[C64]| {
        let scale = expected.iter().map(|x| x.norm()).fold(0.0, f64::max).max(1e-300);
        v.iter().zip(&expected).map(|(x, y)| (x - y).norm() / scale).fold(0.0, f64::max)
    };
    let max_deviation = deviation(&report.coefficients);
    let oracle = if oracle { Some(expand_oracle(&f, &basis)?) } else { None };
    let oracle_ok = oracle.as_ref().is_none_or(|o| deviation(o) <= tol);
    let pass = report.residual <= DEFAULT_RESIDUAL_TOL && max_deviation <= tol && oracle_ok;
    let mut map: BTreeMap<String, [f64; 2]> = entries.into_iter().map(|(k, v)| (k.to_string(), to_pair(v))).collect();
    map.insert("q".into(), to_pair(params.q()));
    map.insert("p".into(), to_pair(params.p()));
    Ok(Output::Expansion(ExpansionRow {
        kind: name,
        params: map,
        residual: report.residual,
        coefficients: pairs(&report.coefficients),
        expected: Some(pairs(&expected)),
        max_deviation: Some(max_deviation),
        oracle: oracle.as_deref().map(pairs),
        verdict: if pass { Verdict::Pass } else { Verdict::Fail },
    }))
}

/// Builds a sample from the flags; every free parameter of the identity must
/// be given and nothing else.
pub fn sample_from_flags(id: IdentityId, n: usize, flags: &ParamFlags, params: EllipticParams) -> Result<Sample> {
    let free = id.free_parameters();
    if let Some(extra) = flags.given().into_iter().find(|k| !free.contains(k)) {
        return usage(format!("--{extra} is not a free parameter of {id} (expects {})", free.join(", ")));
    }
    if id.is_basic() && !params.is_basic() {
        return usage(format!("{id} is a basic identity; --p must be 0"));
    }
    if !id.is_terminating() && n != 0 {
        return usage(format!("{id} is nonterminating; --n does not apply"));
    }
    let values = free
        .iter()
        .map(|&k| Ok((k.to_string(), require(flags, k)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(Sample { identity: id, seed: 0, index: 0, params, n, values, rejected: 0 })
}

fn verify(id: IdentityId, n: usize, flags: &ParamFlags, params: EllipticParams, tol: Option<f64>) -> Result<Output> {
    let sample = sample_from_flags(id, n, flags, params)?;
    let report = verify_sample(&sample, tol.unwrap_or(id.default_tolerance()))?;
    Ok(Output::Reports(vec![ReportRecord::from_report(&report, None, None)]))
}

/// Samples `0..count` of the run, evaluated on `jobs` threads and returned in index order.
pub fn sweep(
    id: IdentityId,
    seed: u64,
    count: u64,
    cfg: SamplerConfig,
    tol: f64,
    jobs: Option<usize>,
) -> Result<Vec<ReportRecord>> {
    if jobs == Some(0) {
        return usage("--jobs must be positive");
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| RunError::Usage(e.to_string()))?;
    let records = pool.install(|| {
        (0..count).into_par_iter().map(|i| run_sample(id, seed, i, &cfg, tol)).collect::<Vec<_>>()
    });
    Ok(records.into_iter().collect::<std::result::Result<_, _>>()?)
}

/// 0 when every verdict passes, 1 when any fails, 2 when the rest include a
/// degenerate verdict.
pub fn exit_code(verdicts: &[Verdict]) -> u8 {
    if verdicts.contains(&Verdict::Fail) {
        1
    } else if verdicts.contains(&Verdict::Degenerate) {
        2
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basic() -> EllipticParams {
        EllipticParams::basic(c(0.35, 0.0)).unwrap()
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&[]), 0);
        assert_eq!(exit_code(&[Verdict::Pass, Verdict::Pass]), 0);
        assert_eq!(exit_code(&[Verdict::Pass, Verdict::Degenerate]), 2);
        assert_eq!(exit_code(&[Verdict::Degenerate, Verdict::Fail]), 1);
    }

    #[test]
    fn flags_must_match_free_parameters() {
        let one = Some(c(1.1, 0.0));
        let flags = ParamFlags { a: one, b: one, c: one, d: one, ..Default::default() };
        let s = sample_from_flags(IdentityId::Jackson, 3, &flags, basic()).unwrap();
        assert_eq!(s.values.len(), 4);
        let extra = ParamFlags { e: one, ..flags.clone() };
        assert!(matches!(sample_from_flags(IdentityId::Jackson, 3, &extra, basic()), Err(RunError::Usage(_))));
        let missing = ParamFlags { d: None, ..flags };
        assert!(matches!(sample_from_flags(IdentityId::Jackson, 3, &missing, basic()), Err(RunError::Usage(_))));
        let elliptic = EllipticParams::new(c(0.35, 0.0), c(0.1, 0.0)).unwrap();
        let flags = ParamFlags { a: one, b: one, z: one, ..Default::default() };
        assert!(matches!(sample_from_flags(IdentityId::QWatson, 0, &flags, elliptic), Err(RunError::Usage(_))));
    }

    #[test]
    fn sweep_order_is_independent_of_threads() {
        let cfg = SamplerConfig::default();
        let one = sweep(IdentityId::Jackson, 9, 12, cfg, 1e-10, Some(1)).unwrap();
        let many = sweep(IdentityId::Jackson, 9, 12, cfg, 1e-10, Some(4)).unwrap();
        let strip = |v: Vec<ReportRecord>| v.into_iter().map(|r| ReportRecord { elapsed_ms: 0.0, ..r }).collect::<Vec<_>>();
        assert_eq!(strip(one), strip(many));
    }
}
