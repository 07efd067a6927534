use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cnum::{to_pair, C64};
use crate::error::Result;

use super::sampler::{draw_verified, SamplerConfig};
use super::{IdentityId, Verdict, VerificationReport};

/// Serialised form of one verification. Complex values are `[re, im]`;
/// `lhs`, `rhs` and `rel_error` are null for a degenerate verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub identity: IdentityId,
    pub params: BTreeMap<String, [f64; 2]>,
    pub lhs: Option<[f64; 2]>,
    pub rhs: Option<[f64; 2]>,
    pub rel_error: Option<f64>,
    pub verdict: Verdict,
    pub seed: Option<u64>,
    pub index: Option<u64>,
    pub elapsed_ms: f64,
}

fn finite(z: C64) -> Option<[f64; 2]> {
    (z.re.is_finite() && z.im.is_finite()).then(|| to_pair(z))
}

impl ReportRecord {
    pub fn from_report(report: &VerificationReport, seed: Option<u64>, index: Option<u64>) -> Self {
        Self {
            identity: report.identity,
            params: report.parameters.iter().map(|(k, v)| (k.clone(), to_pair(*v))).collect(),
            lhs: finite(report.lhs),
            rhs: finite(report.rhs),
            rel_error: (!report.rel_error.is_nan()).then_some(report.rel_error).filter(|e| e.is_finite()),
            verdict: report.verdict,
            seed,
            index,
            elapsed_ms: report.elapsed.as_secs_f64() * 1e3,
        }
    }
}

/// Draws and verifies sample `index` of the run `(identity, seed)`.
pub fn run_sample(id: IdentityId, seed: u64, index: u64, cfg: &SamplerConfig, tolerance: f64) -> Result<ReportRecord> {
    let (_, report) = draw_verified(id, seed, index, cfg, tolerance)?;
    Ok(ReportRecord::from_report(&report, Some(seed), Some(index)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_round_trips_through_json() {
        let cfg = SamplerConfig::default();
        let rec = run_sample(IdentityId::Sears, 9, 2, &cfg, 1e-10).unwrap();
        let text = serde_json::to_string(&rec).unwrap();
        let back: ReportRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(back, rec);
        for key in ["q", "p", "n", "a", "z"] {
            assert!(rec.params.contains_key(key), "{key}");
        }
    }

    #[test]
    fn same_seed_same_record() {
        let cfg = SamplerConfig::default();
        let mut a = run_sample(IdentityId::Connection, 3, 1, &cfg, 1e-8).unwrap();
        let mut b = run_sample(IdentityId::Connection, 3, 1, &cfg, 1e-8).unwrap();
        a.elapsed_ms = 0.0;
        b.elapsed_ms = 0.0;
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
