//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each export is a thin wrapper over a plain Rust function so the logic is
//! tested natively; results cross the boundary as JSON strings or `f64` arrays.

use ellidelta::cnum::{rel_error, to_pair};
use ellidelta::expansion::{expand, wp_ratio, wp_ratio_coefficients, ExpansionBasis};
use ellidelta::identities::{run_sample, IdentityId, ReportRecord, SamplerConfig, Verdict};
use ellidelta::qtheta::theta;
use ellidelta::{EllipticParams, Error, C64};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest grid side accepted by [`theta_landscape`].
pub const MAX_GRID: usize = 400;
/// Largest sweep accepted from the page.
pub const MAX_SWEEP: u32 = 2000;

/// `log10 |theta(x; p)|` on a `steps x steps` grid over `[-radius, radius]^2`,
/// row-major from the top-left corner (largest imaginary part first).
/// Points on a zero or at `x = 0` are `-inf`.
pub fn theta_landscape(p: C64, radius: f64, steps: usize) -> Result<Vec<f64>, Error> {
    if !(2..=MAX_GRID).contains(&steps) || !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidArgument(format!("need 2 <= steps <= {MAX_GRID} and radius > 0")));
    }
    // theta does not depend on q; any admissible base will do.
    let ps = EllipticParams::new(C64::new(0.5, 0.0), p)?;
    let step = 2.0 * radius / (steps - 1) as f64;
    let mut out = Vec::with_capacity(steps * steps);
    for row in 0..steps {
        let im = radius - row as f64 * step;
        for col in 0..steps {
            let x = C64::new(-radius + col as f64 * step, im);
            out.push(match theta(x, &ps) {
                Ok(v) => v.norm().log10(),
                Err(Error::NonzeroRequired) => f64::NEG_INFINITY,
                Err(e) => return Err(e),
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct ExpansionDemo {
    pub n: usize,
    pub coefficients: Vec<[f64; 2]>,
    pub closed_form: Vec<[f64; 2]>,
    /// Per-term relative difference between the two.
    pub differences: Vec<f64>,
    pub residual: f64,
}

/// Expansion of `(bz, b/z; q, p)_n / (cz, c/z; q, p)_n` in the basis with
/// anchors `a, c`, next to its closed-form coefficients.
pub fn expansion_demo(a: C64, b: C64, c: C64, n: usize, q: C64, p: C64) -> Result<ExpansionDemo, Error> {
    let basis = ExpansionBasis::new(a, c, n, EllipticParams::new(q, p)?)?;
    let report = expand(&wp_ratio(b, &basis), &basis)?;
    let closed = wp_ratio_coefficients(b, &basis)?;
    Ok(ExpansionDemo {
        n,
        differences: report.coefficients.iter().zip(&closed).map(|(x, y)| rel_error(*x, *y)).collect(),
        coefficients: report.coefficients.iter().map(|z| to_pair(*z)).collect(),
        closed_form: closed.iter().map(|z| to_pair(*z)).collect(),
        residual: report.residual,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepDemo {
    pub identity: IdentityId,
    pub seed: u64,
    pub pass: usize,
    pub fail: usize,
    pub degenerate: usize,
    pub worst_rel_error: f64,
    pub reports: Vec<ReportRecord>,
}

/// Samples `0..count` of the seeded run, as the command-line `sweep` draws them.
pub fn sweep_demo(identity: &str, seed: u64, count: u32) -> Result<SweepDemo, Error> {
    if count > MAX_SWEEP {
        return Err(Error::InvalidArgument(format!("at most {MAX_SWEEP} samples")));
    }
    let id: IdentityId = identity.parse()?;
    let cfg = SamplerConfig::default();
    let reports = (0..u64::from(count))
        .map(|i| run_sample(id, seed, i, &cfg, id.default_tolerance()))
        .collect::<Result<Vec<_>, _>>()?;
    let count_of = |v: Verdict| reports.iter().filter(|r| r.verdict == v).count();
    Ok(SweepDemo {
        identity: id,
        seed,
        pass: count_of(Verdict::Pass),
        fail: count_of(Verdict::Fail),
        degenerate: count_of(Verdict::Degenerate),
        worst_rel_error: reports.iter().filter_map(|r| r.rel_error).fold(0.0, f64::max),
        reports,
    })
}

fn js_err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

fn to_json<T: Serialize>(v: &T) -> Result<String, JsError> {
    serde_json::to_string(v).map_err(js_err)
}

#[wasm_bindgen(js_name = thetaLandscape)]
pub fn theta_landscape_js(p_re: f64, p_im: f64, radius: f64, steps: usize) -> Result<Vec<f64>, JsError> {
    theta_landscape(C64::new(p_re, p_im), radius, steps).map_err(js_err)
}

/// Arguments are `[re, im]` pairs flattened: `a_re, a_im, b_re, ...`.
#[wasm_bindgen(js_name = expansionDemo)]
#[allow(clippy::too_many_arguments)]
pub fn expansion_demo_js(
    a_re: f64,
    a_im: f64,
    b_re: f64,
    b_im: f64,
    c_re: f64,
    c_im: f64,
    n: usize,
    q_re: f64,
    q_im: f64,
    p_re: f64,
    p_im: f64,
) -> Result<String, JsError> {
    let demo = expansion_demo(
        C64::new(a_re, a_im),
        C64::new(b_re, b_im),
        C64::new(c_re, c_im),
        n,
        C64::new(q_re, q_im),
        C64::new(p_re, p_im),
    )
    .map_err(js_err)?;
    to_json(&demo)
}

/// `seed` arrives as a JS number; it must be an integer below 2^53.
#[wasm_bindgen(js_name = sweepDemo)]
pub fn sweep_demo_js(identity: &str, seed: f64, count: u32) -> Result<String, JsError> {
    if !(seed >= 0.0 && seed.fract() == 0.0 && seed < 9_007_199_254_740_992.0) {
        return Err(JsError::new("seed must be a non-negative integer below 2^53"));
    }
    to_json(&sweep_demo(identity, seed as u64, count).map_err(js_err)?)
}

#[wasm_bindgen(js_name = identityNames)]
pub fn identity_names() -> Vec<String> {
    IdentityId::ALL.iter().map(|id| id.name().to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ellidelta::cnum::c;

    #[test]
    fn landscape_shape_and_zeros() {
        let p = c(0.2, 0.0);
        let grid = theta_landscape(p, 1.0, 5).unwrap();
        assert_eq!(grid.len(), 25);
        // Centre is x = 0, the middle of row 2; x = 1 is the right end of that row.
        assert_eq!(grid[12], f64::NEG_INFINITY);
        assert!(grid[14] < -12.0, "{}", grid[14]);
        assert!(grid[0].is_finite());
        assert!(theta_landscape(p, 1.0, 1).is_err());
        assert!(theta_landscape(c(1.2, 0.0), 1.0, 5).is_err());
    }

    #[test]
    fn expansion_matches_closed_form() {
        let demo = expansion_demo(c(1.05, 0.0), c(0.8, 0.1), c(0.95, 0.1), 6, c(0.4, 0.0), c(0.05, 0.0)).unwrap();
        assert_eq!(demo.coefficients.len(), 7);
        assert!(demo.differences.iter().all(|&d| d < 1e-8), "{:?}", demo.differences);
        assert!(demo.residual < 1e-9);
    }

    #[test]
    fn sweep_agrees_with_sampler() {
        let demo = sweep_demo("10v9", 3, 10).unwrap();
        assert_eq!((demo.pass, demo.fail, demo.degenerate), (10, 0, 0));
        let cfg = SamplerConfig::default();
        let direct = run_sample(IdentityId::TenV9, 3, 7, &cfg, 1e-9).unwrap();
        assert_eq!(demo.reports[7].params, direct.params);
        assert!(sweep_demo("nope", 1, 1).is_err());
        assert!(sweep_demo("jackson", 1, MAX_SWEEP + 1).is_err());
        assert_eq!(identity_names().len(), IdentityId::ALL.len());
    }
}
