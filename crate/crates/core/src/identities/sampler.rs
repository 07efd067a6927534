//! Seeded parameter draws for the verifiers.
//!
//! Sample `index` of a run with seed `s` comes from its own ChaCha stream
//! `(s, index)`, so a sample does not depend on which others were drawn or on
//! the order they were evaluated in.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cnum::{c, C64};
use crate::error::{Error, Result};
use crate::qtheta::EllipticParams;

use super::{verify_sample, IdentityId, RnSpec, Verdict, VerificationReport};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerConfig {
    /// Moduli of free parameters are uniform on `[r_min, r_max]`.
    pub annulus: (f64, f64),
    pub q_range: (f64, f64),
    /// Largest `|p|` for identities that allow a nome.
    pub p_max: f64,
    /// Largest `|b/a|` for the quadratic summation.
    pub watson_ratio: f64,
    /// Samples whose series cancellation ratio exceeds this are redrawn;
    /// `None` derives the limit from the tolerance, see [`cancellation_limit`].
    pub condition_limit: Option<f64>,
    /// Draws per sample before giving up.
    pub retries: usize,
    /// Overrides the per-identity largest degree.
    pub n_max: Option<usize>,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            annulus: (0.2, 2.5),
            q_range: (0.15, 0.5),
            p_max: 0.3,
            watson_ratio: 0.6,
            condition_limit: None,
            retries: 200,
            n_max: None,
        }
    }
}

impl SamplerConfig {
    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.annulus;
        if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
            return Err(Error::InvalidArgument(format!("bad annulus [{lo}, {hi}]")));
        }
        let (ql, qh) = self.q_range;
        if !(ql > 0.0 && ql <= qh && qh < 1.0) {
            return Err(Error::InvalidArgument(format!("bad |q| range [{ql}, {qh}]")));
        }
        if !(0.0..1.0).contains(&self.p_max) || !(0.0..1.0).contains(&self.watson_ratio) {
            return Err(Error::InvalidArgument("p_max and watson_ratio must lie in [0, 1)".into()));
        }
        if self.retries == 0 {
            return Err(Error::InvalidArgument("retries must be positive".into()));
        }
        Ok(())
    }
}

/// Observed rounding error per unit of cancellation ratio: the relative error
/// of a verification stays below `condition * this` in double precision.
/// Theta products add a few ulps per factor on top of the plain basic sums.
pub const BASIC_ERROR_PER_CONDITION: f64 = 1e-14;
pub const ELLIPTIC_ERROR_PER_CONDITION: f64 = 5e-14;

/// Largest cancellation ratio at which a verdict at `tolerance` still
/// reflects the identity rather than rounding.
pub fn cancellation_limit(id: IdentityId, tolerance: f64) -> f64 {
    let per = if id.is_basic() { BASIC_ERROR_PER_CONDITION } else { ELLIPTIC_ERROR_PER_CONDITION };
    tolerance / per
}

/// Largest degree drawn for each terminating identity.
pub fn default_n_max(id: IdentityId) -> usize {
    match id {
        IdentityId::Jackson | IdentityId::PfaffSaalschutz => 10,
        IdentityId::Sears => 5,
        IdentityId::TenV9 => 8,
        IdentityId::TwelveV11 => 6,
        IdentityId::Connection | IdentityId::RnSpecial | IdentityId::RnTransformation => 5,
        IdentityId::Nonterminating87 | IdentityId::QWatson => 0,
    }
}

/// One accepted parameter draw.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub identity: IdentityId,
    pub seed: u64,
    pub index: u64,
    pub params: EllipticParams,
    /// Terminating index; 0 for the nonterminating identities.
    pub n: usize,
    /// Free parameters by name.
    pub values: BTreeMap<String, C64>,
    /// Draws rejected before this one was accepted.
    pub rejected: usize,
}

impl Sample {
    pub fn value(&self, name: &str) -> Result<C64> {
        self.values
            .get(name)
            .copied()
            .ok_or_else(|| Error::InvalidArgument(format!("sample has no parameter {name:?}")))
    }

    pub fn rn_spec(&self) -> Result<RnSpec> {
        let v = |k: &str| self.value(k);
        RnSpec::new(v("b")?, v("c")?, v("d")?, v("e")?, v("f")?, self.n, self.params)
    }
}

fn polar(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> C64 {
    let r = if lo < hi { rng.random_range(lo..hi) } else { lo };
    C64::from_polar(r, rng.random_range(0.0..TAU))
}

fn draw(id: IdentityId, rng: &mut ChaCha8Rng, cfg: &SamplerConfig) -> Result<(EllipticParams, usize, BTreeMap<String, C64>)> {
    let q = polar(rng, cfg.q_range.0, cfg.q_range.1);
    let p = if id.is_basic() { c(0.0, 0.0) } else { polar(rng, 0.0, cfg.p_max) };
    let params = EllipticParams::new(q, p)?;
    let n = if id.is_terminating() {
        rng.random_range(1..=cfg.n_max.unwrap_or_else(|| default_n_max(id)).max(1))
    } else {
        0
    };
    let (lo, hi) = cfg.annulus;
    let mut values = BTreeMap::new();
    for &name in id.free_parameters() {
        let v = if id == IdentityId::QWatson && name == "b" {
            values["a"] * polar(rng, 0.0, cfg.watson_ratio)
        } else {
            polar(rng, lo, hi)
        };
        values.insert(name.to_string(), v);
    }
    Ok((params, n, values))
}

/// Inputs outside an identity's hypotheses that no denominator check catches.
fn excluded(id: IdentityId, params: &EllipticParams, values: &BTreeMap<String, C64>) -> bool {
    match id {
        // de = cq makes the second series' constant singular.
        IdentityId::Nonterminating87 => {
            let ratio = values["d"] * values["e"] / (values["c"] * params.q());
            (ratio - 1.0).norm() < 1e-3
        }
        _ => false,
    }
}

/// Draws, verifies and accepts sample `index`; a draw is rejected when its
/// verdict is degenerate or its series cancellation exceeds the limit, so that
/// rounding alone cannot decide the verdict. Pass and fail are never grounds for rejection.
pub fn draw_verified(
    id: IdentityId,
    seed: u64,
    index: u64,
    cfg: &SamplerConfig,
    tolerance: f64,
) -> Result<(Sample, VerificationReport)> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    for attempt in 0..cfg.retries {
        let (params, n, values) = draw(id, &mut rng, cfg)?;
        if excluded(id, &params, &values) {
            continue;
        }
        let sample = Sample { identity: id, seed, index, params, n, values, rejected: attempt };
        let report = match verify_sample(&sample, tolerance) {
            Ok(r) => r,
            Err(e) if e.is_degenerate() => continue,
            Err(e) => return Err(e),
        };
        let limit = cfg.condition_limit.unwrap_or_else(|| cancellation_limit(id, tolerance));
        if report.verdict == Verdict::Degenerate || !(report.condition <= limit) {
            continue;
        }
        return Ok((sample, report));
    }
    Err(Error::SamplingExhausted(cfg.retries))
}

/// Reproducible parameter draw for `id`; see [`draw_verified`].
pub fn sample_parameters(id: IdentityId, seed: u64, index: u64, cfg: &SamplerConfig) -> Result<Sample> {
    draw_verified(id, seed, index, cfg, id.default_tolerance()).map(|(s, _)| s)
}
