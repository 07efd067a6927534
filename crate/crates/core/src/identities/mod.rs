//! Numerical verifiers for summation and transformation formulas, with
//! seeded parameter samplers.
//!
//! Every verifier evaluates the two sides through separate code paths and
//! folds failures on the exceptional set (vanishing denominators, poles) into
//! the verdict [`Verdict::Degenerate`]; only misuse is an `Err`.

mod basic;
mod elliptic;
mod rahman;
pub mod sampler;
mod sweep;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use web_time::Instant;

use crate::cnum::{rel_error, C64};
use crate::error::{Error, Result};
use crate::qtheta::{qpoch_inf, EllipticParams};

pub use basic::{
    verify_jackson, verify_nonterminating_87, verify_pfaff_saalschutz, verify_q_watson, verify_sears,
};
pub use elliptic::{verify_10v9, verify_12v11};
pub use rahman::{connection_coefficients, eval_rn, rn_special_value, verify_connection, verify_rn_special, verify_rn_transformation, RnSpec};
pub use sampler::{cancellation_limit, default_n_max, draw_verified, sample_parameters, Sample, SamplerConfig};
pub use sweep::{run_sample, ReportRecord};

/// Terminating elliptic identities.
pub const TOL_ELLIPTIC: f64 = 1e-9;
/// Terminating basic identities.
pub const TOL_BASIC: f64 = 1e-10;
/// Nonterminating basic identities, where infinite-product truncation dominates.
pub const TOL_NONTERMINATING: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum IdentityId {
    #[serde(rename = "jackson")]
    Jackson,
    #[serde(rename = "10v9")]
    TenV9,
    #[serde(rename = "12v11")]
    TwelveV11,
    #[serde(rename = "pfaff-saalschutz")]
    PfaffSaalschutz,
    #[serde(rename = "sears")]
    Sears,
    #[serde(rename = "rn-special")]
    RnSpecial,
    #[serde(rename = "connection")]
    Connection,
    #[serde(rename = "rn-transformation")]
    RnTransformation,
    #[serde(rename = "nonterminating-87")]
    Nonterminating87,
    #[serde(rename = "q-watson")]
    QWatson,
}

impl IdentityId {
    pub const ALL: [IdentityId; 10] = [
        IdentityId::Jackson,
        IdentityId::TenV9,
        IdentityId::TwelveV11,
        IdentityId::PfaffSaalschutz,
        IdentityId::Sears,
        IdentityId::RnSpecial,
        IdentityId::Connection,
        IdentityId::RnTransformation,
        IdentityId::Nonterminating87,
        IdentityId::QWatson,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityId::Jackson => "jackson",
            IdentityId::TenV9 => "10v9",
            IdentityId::TwelveV11 => "12v11",
            IdentityId::PfaffSaalschutz => "pfaff-saalschutz",
            IdentityId::Sears => "sears",
            IdentityId::RnSpecial => "rn-special",
            IdentityId::Connection => "connection",
            IdentityId::RnTransformation => "rn-transformation",
            IdentityId::Nonterminating87 => "nonterminating-87",
            IdentityId::QWatson => "q-watson",
        }
    }

    /// Free complex parameters in the order the sampler draws them. The
    /// constrained parameter of an identity, if any, is derived and not listed.
    pub fn free_parameters(self) -> &'static [&'static str] {
        match self {
            IdentityId::Jackson | IdentityId::TenV9 => &["a", "b", "c", "d"],
            IdentityId::TwelveV11 => &["a", "b", "c", "d", "e", "f"],
            IdentityId::PfaffSaalschutz => &["a", "b", "z"],
            IdentityId::Sears => &["a", "b", "c", "d", "z"],
            IdentityId::RnSpecial => &["b", "c", "d", "e", "f"],
            IdentityId::Connection => &["b", "c", "d", "e", "f", "a", "z"],
            IdentityId::RnTransformation => &["b", "c", "d", "e", "f", "z"],
            IdentityId::Nonterminating87 => &["b", "d", "e", "z", "c"],
            IdentityId::QWatson => &["a", "b", "z"],
        }
    }

    /// Identities with `p = 0` only.
    pub fn is_basic(self) -> bool {
        matches!(
            self,
            IdentityId::Jackson
                | IdentityId::PfaffSaalschutz
                | IdentityId::Sears
                | IdentityId::Nonterminating87
                | IdentityId::QWatson
        )
    }

    /// Identities that carry a terminating index `n`.
    pub fn is_terminating(self) -> bool {
        !matches!(self, IdentityId::Nonterminating87 | IdentityId::QWatson)
    }

    pub fn default_tolerance(self) -> f64 {
        match self {
            IdentityId::Jackson | IdentityId::PfaffSaalschutz | IdentityId::Sears => TOL_BASIC,
            IdentityId::Nonterminating87 | IdentityId::QWatson => TOL_NONTERMINATING,
            _ => TOL_ELLIPTIC,
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase();
        IdentityId::ALL
            .into_iter()
            .find(|id| id.name() == key)
            .ok_or_else(|| Error::UnknownIdentity(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Degenerate,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Degenerate => "degenerate",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub identity: IdentityId,
    /// Every parameter that entered either side, derived ones included.
    pub parameters: BTreeMap<String, C64>,
    pub lhs: C64,
    pub rhs: C64,
    pub rel_error: f64,
    pub verdict: Verdict,
    pub tolerance: f64,
    /// Largest cancellation ratio `sum |t_k| / |sum t_k|` among the series
    /// summed; 1 when there were none.
    pub condition: f64,
    pub elapsed: Duration,
}

/// The two sides of an identity and the worst series conditioning seen.
pub(crate) struct Sides {
    pub lhs: C64,
    pub rhs: C64,
    pub condition: f64,
}

pub(crate) fn finish(
    identity: IdentityId,
    parameters: BTreeMap<String, C64>,
    tolerance: f64,
    start: Instant,
    sides: Result<Sides>,
) -> Result<VerificationReport> {
    let nan = C64::new(f64::NAN, f64::NAN);
    let (lhs, rhs, condition, verdict, err) = match sides {
        Ok(s) => {
            let err = rel_error(s.lhs, s.rhs);
            let err = if err.is_finite() { err } else { f64::INFINITY };
            let verdict = if err < tolerance { Verdict::Pass } else { Verdict::Fail };
            (s.lhs, s.rhs, s.condition, verdict, err)
        }
        Err(e) if e.is_degenerate() => (nan, nan, f64::INFINITY, Verdict::Degenerate, f64::NAN),
        Err(e) => return Err(e),
    };
    Ok(VerificationReport {
        identity,
        parameters,
        lhs,
        rhs,
        rel_error: err,
        verdict,
        tolerance,
        condition,
        elapsed: start.elapsed(),
    })
}

pub(crate) fn param_map(entries: &[(&str, C64)], params: &EllipticParams, n: Option<usize>) -> BTreeMap<String, C64> {
    let mut map: BTreeMap<String, C64> = entries.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    map.insert("q".into(), params.q());
    map.insert("p".into(), params.p());
    if let Some(n) = n {
        map.insert("n".into(), C64::new(n as f64, 0.0));
    }
    map
}

pub(crate) fn require_basic(params: &EllipticParams) -> Result<()> {
    if params.is_basic() {
        Ok(())
    } else {
        Err(Error::BasicOnly)
    }
}

/// `(a_1, ..., a_m; q)_inf`, refusing to return a value that would be divided by
/// when some factor vanishes.
pub(crate) fn inf_divisor(args: &[C64], params: &EllipticParams, context: &'static str) -> Result<C64> {
    let mut acc = C64::new(1.0, 0.0);
    for &a in args {
        let v = qpoch_inf(a, params)?;
        if v.norm() < params.zero_tol() {
            return Err(Error::DegenerateDivision(context));
        }
        acc *= v;
    }
    Ok(acc)
}

/// Verifies `id` at the parameters of a [`Sample`].
pub fn verify_sample(sample: &Sample, tolerance: f64) -> Result<VerificationReport> {
    let v = |name: &str| sample.value(name);
    let (ps, n) = (sample.params, sample.n);
    match sample.identity {
        IdentityId::Jackson => verify_jackson(v("a")?, v("b")?, v("c")?, v("d")?, n, &ps, tolerance),
        IdentityId::TenV9 => verify_10v9(v("a")?, v("b")?, v("c")?, v("d")?, n, &ps, tolerance),
        IdentityId::TwelveV11 => {
            verify_12v11([v("a")?, v("b")?, v("c")?, v("d")?, v("e")?, v("f")?], n, &ps, tolerance)
        }
        IdentityId::PfaffSaalschutz => verify_pfaff_saalschutz(v("a")?, v("b")?, v("z")?, n, &ps, tolerance),
        IdentityId::Sears => verify_sears([v("a")?, v("b")?, v("c")?, v("d")?], v("z")?, n, &ps, tolerance),
        IdentityId::RnSpecial => verify_rn_special(&sample.rn_spec()?, tolerance),
        IdentityId::Connection => verify_connection(&sample.rn_spec()?, v("a")?, v("z")?, tolerance),
        IdentityId::RnTransformation => verify_rn_transformation(&sample.rn_spec()?, v("z")?, tolerance),
        IdentityId::Nonterminating87 => {
            verify_nonterminating_87([v("b")?, v("d")?, v("e")?, v("z")?, v("c")?], &ps, tolerance)
        }
        IdentityId::QWatson => verify_q_watson(v("a")?, v("b")?, v("z")?, &ps, tolerance),
    }
}

/// Test helper: a verdict is either a pass or a failure that the measured
/// cancellation accounts for.
#[cfg(test)]
pub(crate) fn assert_sound(r: &VerificationReport) {
    assert_ne!(r.verdict, Verdict::Degenerate, "{r:?}");
    let limit = cancellation_limit(r.identity, r.tolerance);
    if r.condition <= limit {
        assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
    } else {
        assert!(r.rel_error <= r.condition * r.tolerance / limit, "{r:?}");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_names_round_trip() {
        for id in IdentityId::ALL {
            assert_eq!(id.name().parse::<IdentityId>().unwrap(), id);
            assert_eq!(serde_json::to_string(&id).unwrap(), format!("\"{}\"", id.name()));
        }
        assert_eq!("10V9".parse::<IdentityId>().unwrap(), IdentityId::TenV9);
        assert!(matches!("nope".parse::<IdentityId>(), Err(Error::UnknownIdentity(_))));
    }

    #[test]
    fn verdict_serialises_lowercase() {
        assert_eq!(serde_json::to_string(&Verdict::Degenerate).unwrap(), "\"degenerate\"");
    }

    #[test]
    fn degenerate_errors_fold_into_verdict() {
        let ps = EllipticParams::basic(C64::new(0.3, 0.0)).unwrap();
        let r = finish(
            IdentityId::Jackson,
            param_map(&[], &ps, Some(1)),
            1e-10,
            Instant::now(),
            Err(Error::DegenerateDivision("test")),
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Degenerate);
        let e = finish(IdentityId::Jackson, BTreeMap::new(), 1e-10, Instant::now(), Err(Error::BasicOnly));
        assert!(matches!(e, Err(Error::BasicOnly)));
    }
}
