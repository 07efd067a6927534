//! Basic `phi` series, terminating elliptic `E` and very-well-poised `V`
//! series, and the classical structural predicates.
//!
//! Termination is always declared through an explicit index, never detected
//! from a parameter that happens to equal `q^{-n}` numerically.

use crate::cnum::{approx_eq, cdiv, rel_error, C64};
use crate::error::{Error, Result};
use crate::qtheta::{theta_factor, EllipticParams};

/// Relative tolerance on balancing and pairing constraints.
pub const CONSTRAINT_TOL: f64 = 1e-10;

const MAX_TERMS: usize = 20_000;

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSpec {
    pub upper: Vec<C64>,
    pub lower: Vec<C64>,
    pub argument: C64,
    pub terminating_n: Option<usize>,
    pub params: EllipticParams,
}

impl SeriesSpec {
    pub fn new(
        upper: Vec<C64>,
        lower: Vec<C64>,
        argument: C64,
        terminating_n: Option<usize>,
        params: EllipticParams,
    ) -> Result<Self> {
        if upper.len() != lower.len() + 1 {
            return Err(Error::ParameterCount("need one more upper than lower parameter"));
        }
        let spec = Self { upper, lower, argument, terminating_n, params };
        if !params.is_basic() {
            if terminating_n.is_none() {
                return Err(Error::TerminationRequired);
            }
            let r = spec.balancing_residual();
            if r > CONSTRAINT_TOL {
                return Err(Error::BalancingViolated(r));
            }
        }
        Ok(spec)
    }

    /// Relative residual of `a_1 ... a_{s+1} = q b_1 ... b_s`.
    pub fn balancing_residual(&self) -> f64 {
        let up: C64 = self.upper.iter().product();
        let low: C64 = self.lower.iter().product();
        rel_error(up, self.params.q() * low)
    }
}

/// A summed series with the bookkeeping needed to judge cancellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: C64,
    /// Sum of term moduli.
    pub abs_sum: f64,
    pub terms: usize,
}

impl SeriesSum {
    /// `sum |t_k| / |sum t_k|`; 1 for a sum without cancellation.
    pub fn condition(&self) -> f64 {
        self.abs_sum / self.value.norm().max(1e-300)
    }
}

/// Sums `t_0 = 1`, `t_{k+1} = t_k * ratio(k)` until two consecutive terms are
/// below `tol * |partial sum|`.
pub fn sum_by_ratio(
    mut ratio: impl FnMut(usize) -> Result<C64>,
    tol: f64,
) -> Result<SeriesSum> {
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    let mut abs_sum = 1.0;
    let mut small_run = 0;
    for k in 0..MAX_TERMS {
        term *= ratio(k)?;
        sum += term;
        abs_sum += term.norm();
        if !sum.is_finite() {
            return Err(Error::DivergentSeries("partial sums overflowed"));
        }
        if term.norm() < tol * sum.norm() {
            small_run += 1;
            if small_run == 2 {
                return Ok(SeriesSum { value: sum, abs_sum, terms: k + 2 });
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::DivergentSeries("no convergence within the term budget"))
}

fn sum_terminating(n: usize, mut ratio: impl FnMut(usize) -> Result<C64>) -> Result<SeriesSum> {
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    let mut abs_sum = 1.0;
    for k in 0..n {
        term *= ratio(k)?;
        sum += term;
        abs_sum += term.norm();
    }
    Ok(SeriesSum { value: sum, abs_sum, terms: n + 1 })
}

/// `t_{k+1}/t_k` of a basic series: `prod(1 - a_i q^k) z / ((1 - q^{k+1}) prod(1 - b_j q^k))`.
fn phi_ratio<'a>(spec: &'a SeriesSpec) -> impl FnMut(usize) -> Result<C64> + 'a {
    let one = C64::new(1.0, 0.0);
    let q = spec.params.q();
    let zero_tol = spec.params.zero_tol();
    let mut qk = one;
    move |_k| {
        let num: C64 = spec.upper.iter().map(|&a| one - a * qk).product();
        let mut den = one - q * qk;
        for &b in &spec.lower {
            let f = one - b * qk;
            if f.norm() < zero_tol {
                return Err(Error::DegenerateDivision("lower parameter factor of a phi series"));
            }
            den *= f;
        }
        qk *= q;
        Ok(num * spec.argument / den)
    }
}

pub fn sum_phi(spec: &SeriesSpec) -> Result<SeriesSum> {
    if !spec.params.is_basic() {
        return Err(Error::BasicOnly);
    }
    match spec.terminating_n {
        Some(n) => sum_terminating(n, phi_ratio(spec)),
        None => {
            if spec.argument.norm() >= 1.0 {
                return Err(Error::DivergentSeries("nonterminating phi series needs |z| < 1"));
            }
            sum_by_ratio(phi_ratio(spec), spec.params.trunc_tol())
        }
    }
}

/// Basic hypergeometric `_{s+1}phi_s` series.
pub fn eval_phi(spec: &SeriesSpec) -> Result<C64> {
    sum_phi(spec).map(|s| s.value)
}

pub fn sum_e(spec: &SeriesSpec) -> Result<SeriesSum> {
    let n = spec.terminating_n.ok_or(Error::TerminationRequired)?;
    let r = spec.balancing_residual();
    if r > CONSTRAINT_TOL {
        return Err(Error::BalancingViolated(r));
    }
    let ps = &spec.params;
    let q = ps.q();
    let mut qk = C64::new(1.0, 0.0);
    sum_terminating(n, |_k| {
        let num: C64 = spec.upper.iter().map(|&a| theta_factor(a * qk, ps)).product();
        let mut den = theta_factor(q * qk, ps);
        for &b in &spec.lower {
            let f = theta_factor(b * qk, ps);
            if f.norm() < ps.zero_tol() {
                return Err(Error::DegenerateDivision("lower parameter factor of an E series"));
            }
            den *= f;
        }
        qk *= q;
        Ok(num * spec.argument / den)
    })
}

/// Terminating elliptic `_{s+1}E_s` series.
pub fn eval_e(spec: &SeriesSpec) -> Result<C64> {
    sum_e(spec).map(|s| s.value)
}

/// Very-well-poised `_{s+1}V_s(a_1; a_6, ..., a_{s+1}; q, p; z)` with
/// `a_{s+1} = q^{-n}` appended from the declared index.
#[derive(Debug, Clone, PartialEq)]
pub struct VSeriesSpec {
    pub a1: C64,
    /// `a_6 ... a_{s+1}`, the last entry being `q^{-n}`.
    pub tail: Vec<C64>,
    pub terminating_n: usize,
    pub argument: C64,
    pub params: EllipticParams,
}

impl VSeriesSpec {
    /// `free` holds `a_6 ... a_s`; `q^{-n}` is appended. Argument defaults to 1.
    pub fn new(a1: C64, free: &[C64], n: usize, params: EllipticParams) -> Result<Self> {
        let mut tail = free.to_vec();
        tail.push(params.q().powi(-(n as i32)));
        let spec = Self { a1, tail, terminating_n: n, argument: C64::new(1.0, 0.0), params };
        let r = spec.balancing_residual();
        if r > CONSTRAINT_TOL {
            return Err(Error::BalancingViolated(r));
        }
        Ok(spec)
    }

    pub fn with_argument(mut self, z: C64) -> Self {
        self.argument = z;
        self
    }

    /// Order `s + 1` of the series.
    pub fn order(&self) -> usize {
        self.tail.len() + 5
    }

    /// Relative residual of `q^2 a_6^2 ... a_{s+1}^2 = (a_1 q)^{s-5}`.
    pub fn balancing_residual(&self) -> f64 {
        let q = self.params.q();
        let prod: C64 = self.tail.iter().product();
        let s_minus_5 = self.tail.len() as i32 - 1;
        rel_error(q * q * prod * prod, (self.a1 * q).powi(s_minus_5))
    }
}

pub fn sum_v(spec: &VSeriesSpec) -> Result<SeriesSum> {
    let r = spec.balancing_residual();
    if r > CONSTRAINT_TOL {
        return Err(Error::BalancingViolated(r));
    }
    let ps = &spec.params;
    let q = ps.q();
    let a1 = spec.a1;
    let theta_a1 = theta_factor(a1, ps);
    if theta_a1.norm() < ps.zero_tol() {
        return Err(Error::DegenerateDivision("theta(a_1) of a V series"));
    }
    let lower: Vec<C64> = spec.tail.iter().map(|&t| a1 * q / t).collect();
    let step = q * spec.argument;
    let mut ratio = C64::new(1.0, 0.0);
    let mut value = C64::new(1.0, 0.0);
    let mut abs_sum = 1.0;
    let mut qk = C64::new(1.0, 0.0);
    for _ in 0..spec.terminating_n {
        // Numerator and denominator factors alternate so their sizes cancel
        // before the running ratio can overflow.
        let mut step_ratio = cdiv(theta_factor(a1 * qk, ps), theta_factor(q * qk, ps));
        for (&t, &b) in spec.tail.iter().zip(&lower) {
            let f = theta_factor(b * qk, ps);
            if f.norm() < ps.zero_tol() {
                return Err(Error::DegenerateDivision("lower parameter factor of a V series"));
            }
            step_ratio = cdiv(step_ratio * theta_factor(t * qk, ps), f);
        }
        ratio *= step_ratio * step;
        qk *= q;
        let term = cdiv(theta_factor(a1 * qk * qk, ps), theta_a1) * ratio;
        value += term;
        abs_sum += term.norm();
    }
    Ok(SeriesSum { value, abs_sum, terms: spec.terminating_n + 1 })
}

/// Terminating very-well-poised `V` series in theta-quotient form.
pub fn eval_v(spec: &VSeriesSpec) -> Result<C64> {
    sum_v(spec).map(|s| s.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Classification {
    pub balanced: bool,
    pub well_poised: bool,
    pub very_well_poised: bool,
}

pub fn classify(spec: &SeriesSpec) -> Classification {
    let q = spec.params.q();
    let tol = CONSTRAINT_TOL;
    // Classical balancing runs the other way from the elliptic condition.
    let up: C64 = spec.upper.iter().product();
    let low: C64 = spec.lower.iter().product();
    let balanced = approx_eq(low, q * up, tol) && approx_eq(spec.argument, q, tol);
    let a1q = spec.upper[0] * q;
    let well_poised = spec
        .upper
        .iter()
        .skip(1)
        .zip(&spec.lower)
        .all(|(&a, &b)| approx_eq(a * b, a1q, tol));
    let very_well_poised = well_poised
        && spec.upper.len() >= 3
        && approx_eq(spec.upper[1] * spec.upper[1], q * q * spec.upper[0], tol)
        && approx_eq(spec.upper[2], -spec.upper[1], tol);
    Classification { balanced, well_poised, very_well_poised }
}

/// `a_1 ... a_{s+1} = q b_1 ... b_s` within [`CONSTRAINT_TOL`].
pub fn is_elliptically_balanced(spec: &SeriesSpec) -> bool {
    spec.balancing_residual() <= CONSTRAINT_TOL
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnum::c;
    use crate::qtheta::qpoch_product;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pt(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> C64 {
        C64::from_polar(rng.random_range(lo..hi), rng.random_range(0.0..std::f64::consts::TAU))
    }

    /// Term-by-term sum with every factorial evaluated from scratch.
    fn direct_sum(spec: &SeriesSpec, n: usize) -> C64 {
        let ps = &spec.params;
        (0..=n)
            .map(|k| {
                let k = k as i64;
                let num = qpoch_product(&spec.upper, k, ps).unwrap().value;
                let mut low = spec.lower.clone();
                low.push(ps.q());
                let den = qpoch_product(&low, k, ps).unwrap().value;
                num / den * spec.argument.powi(k as i32)
            })
            .sum()
    }

    fn jackson_spec(a: C64, b: C64, cc: C64, d: C64, n: usize, ps: EllipticParams) -> SeriesSpec {
        let q = ps.q();
        let sa = a.sqrt();
        let qn = q.powi(n as i32);
        let e = a * a * q * qn / (b * cc * d);
        SeriesSpec::new(
            vec![a, q * sa, -q * sa, b, cc, d, e, qn.inv()],
            vec![sa, -sa, a * q / b, a * q / cc, a * q / d, b * cc * d / (a * qn), a * q * qn],
            q,
            Some(n),
            ps,
        )
        .unwrap()
    }

    #[test]
    fn shape_is_checked() {
        let ps = EllipticParams::basic(c(0.3, 0.0)).unwrap();
        assert!(matches!(
            SeriesSpec::new(vec![c(1.0, 0.0)], vec![c(1.0, 0.0)], c(0.1, 0.0), None, ps),
            Err(Error::ParameterCount(_))
        ));
        let ell = ps.with_nome(c(0.1, 0.0)).unwrap();
        assert_eq!(
            SeriesSpec::new(vec![c(0.5, 0.0)], vec![], c(0.1, 0.0), None, ell),
            Err(Error::TerminationRequired)
        );
    }

    #[test]
    fn single_term_phi() {
        let ps = EllipticParams::basic(c(0.3, 0.0)).unwrap();
        let spec = SeriesSpec::new(vec![c(0.7, 0.1)], vec![], c(0.4, 0.0), Some(0), ps).unwrap();
        assert_eq!(eval_phi(&spec).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn nonterminating_q_binomial() {
        // 1phi0(a; q, z) = (az; q)_inf / (z; q)_inf
        let ps = EllipticParams::basic(c(0.4, 0.1)).unwrap();
        let (a, z) = (c(0.6, -0.3), c(0.5, 0.2));
        let spec = SeriesSpec::new(vec![a], vec![], z, None, ps).unwrap();
        let expect = crate::qtheta::qpoch_inf(a * z, &ps).unwrap() / crate::qtheta::qpoch_inf(z, &ps).unwrap();
        assert!(rel_error(eval_phi(&spec).unwrap(), expect) < 1e-13);
        let far = SeriesSpec::new(vec![a], vec![], c(1.2, 0.0), None, ps).unwrap();
        assert!(matches!(eval_phi(&far), Err(Error::DivergentSeries(_))));
    }

    #[test]
    fn pfaff_saalschutz_instance() {
        let q = c(0.3, 0.2);
        let ps = EllipticParams::basic(q).unwrap();
        let (a, b, z) = (c(0.8, 0.3), c(1.2, -0.4), c(0.9, 0.5));
        let n = 6;
        let qn = q.powi(n);
        let spec = SeriesSpec::new(
            vec![a * z, a / z, qn.inv()],
            vec![a * b, q * a / (b * qn)],
            q,
            Some(n as usize),
            ps,
        )
        .unwrap();
        let lhs = qpoch_product(&[b * z, b / z], n as i64, &ps).unwrap().value
            / qpoch_product(&[b * a, b / a], n as i64, &ps).unwrap().value;
        assert!(rel_error(eval_phi(&spec).unwrap(), lhs) < 1e-12);
    }

    #[test]
    fn terminating_phi_matches_direct_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let ps = EllipticParams::basic(c(0.4, -0.1)).unwrap();
        for _ in 0..20 {
            let n = 4;
            let upper = vec![pt(&mut rng, 0.3, 2.0), ps.q().powi(-(n as i32))];
            let spec = SeriesSpec::new(upper, vec![pt(&mut rng, 0.3, 2.0)], pt(&mut rng, 0.3, 2.0), Some(n), ps)
                .unwrap();
            assert!(rel_error(eval_phi(&spec).unwrap(), direct_sum(&spec, n)) < 1e-14);
        }
    }

    #[test]
    fn degenerate_lower_parameter() {
        let q = c(0.5, 0.0);
        let ps = EllipticParams::basic(q).unwrap();
        // b = q^{-2}: (b;q)_3 hits 1 - 1 = 0 before termination at n = 4.
        let spec = SeriesSpec::new(vec![c(0.3, 0.0), q.powi(-4)], vec![q.powi(-2)], q, Some(4), ps).unwrap();
        assert!(matches!(eval_phi(&spec), Err(Error::DegenerateDivision(_))));
    }

    #[test]
    fn terminating_phi_is_polynomial_in_argument() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let ps = EllipticParams::basic(c(0.35, 0.0)).unwrap();
        let n = 4usize;
        let upper = vec![pt(&mut rng, 0.5, 1.5), pt(&mut rng, 0.5, 1.5), ps.q().powi(-(n as i32))];
        let lower = vec![pt(&mut rng, 0.5, 1.5), pt(&mut rng, 0.5, 1.5)];
        let h = 0.25;
        let vals: Vec<C64> = (0..n + 2)
            .map(|j| {
                let z = c(0.1 + h * j as f64, 0.0);
                eval_phi(&SeriesSpec::new(upper.clone(), lower.clone(), z, Some(n), ps).unwrap()).unwrap()
            })
            .collect();
        // (n+1)-th forward difference of a degree-n polynomial vanishes.
        let mut diff = vals.clone();
        for _ in 0..=n {
            diff = diff.windows(2).map(|w| w[1] - w[0]).collect();
        }
        let scale = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(diff[0].norm() < 1e-9 * scale);
    }

    fn random_balanced(rng: &mut ChaCha8Rng, ps: EllipticParams, n: usize) -> SeriesSpec {
        let q = ps.q();
        let mut upper: Vec<C64> = (0..3).map(|_| pt(rng, 0.4, 1.8)).collect();
        upper.push(q.powi(-(n as i32)));
        let mut lower: Vec<C64> = (0..2).map(|_| pt(rng, 0.4, 1.8)).collect();
        let up: C64 = upper.iter().product();
        let low: C64 = lower.iter().product();
        lower.push(up / (q * low));
        SeriesSpec::new(upper, lower, c(1.0, 0.0) * pt(rng, 0.5, 1.5), Some(n), ps).unwrap()
    }

    #[test]
    fn elliptic_series_matches_direct_terms() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let ps = EllipticParams::new(c(0.35, 0.1), c(0.15, 0.05)).unwrap();
        for _ in 0..10 {
            let spec = random_balanced(&mut rng, ps, 4);
            assert!(rel_error(eval_e(&spec).unwrap(), direct_sum(&spec, 4)) < 1e-12);
        }
        let mut spec = random_balanced(&mut rng, ps, 0);
        assert_eq!(eval_e(&spec).unwrap(), c(1.0, 0.0));
        spec.lower[0] *= 1.01;
        assert!(matches!(eval_e(&spec), Err(Error::BalancingViolated(_))));
    }

    #[test]
    fn elliptic_series_at_zero_nome_is_phi() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let ps = EllipticParams::basic(c(0.3, -0.2)).unwrap();
        for _ in 0..50 {
            let n = rng.random_range(0..7);
            let spec = random_balanced(&mut rng, ps, n);
            assert!(rel_error(eval_e(&spec).unwrap(), eval_phi(&spec).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn elliptic_term_ratio_invariant_under_nome_shift() {
        // a_1 -> p a_1, b_1 -> p b_1 preserves balancing and multiplies every
        // term ratio by the same k-independent factor b_1/a_1.
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let ps = EllipticParams::new(c(0.4, 0.0), c(0.2, 0.1)).unwrap();
        let p = ps.p();
        for _ in 0..10 {
            let spec = random_balanced(&mut rng, ps, 5);
            let mut shifted = spec.clone();
            shifted.upper[0] *= p;
            shifted.lower[0] *= p;
            assert!(shifted.balancing_residual() < 1e-12);
            let ratio = |s: &SeriesSpec, k: i32| {
                let qk = ps.q().powi(k);
                let num: C64 = s.upper.iter().map(|&a| theta_factor(a * qk, &ps)).product();
                let den: C64 = s.lower.iter().map(|&b| theta_factor(b * qk, &ps)).product();
                num / den
            };
            for k in 0..5 {
                let predicted = ratio(&spec, k) * spec.lower[0] / spec.upper[0];
                assert!(rel_error(ratio(&shifted, k), predicted) < 1e-10);
            }
        }
    }

    #[test]
    fn v_series_single_term_and_balancing() {
        let ps = EllipticParams::new(c(0.3, 0.0), c(0.1, 0.0)).unwrap();
        let q = ps.q();
        let (a, b, cc, d) = (c(0.9, 0.2), c(1.1, -0.3), c(0.7, 0.5), c(1.3, 0.1));
        let e = a * a * q / (b * cc * d);
        let spec = VSeriesSpec::new(a, &[b, cc, d, e], 0, ps).unwrap();
        assert_eq!(eval_v(&spec).unwrap(), c(1.0, 0.0));
        assert_eq!(spec.order(), 10);
        assert!(matches!(
            VSeriesSpec::new(a, &[b, cc, d, e * 1.1], 0, ps),
            Err(Error::BalancingViolated(_))
        ));
    }

    fn ten_v_nine_product(a: C64, b: C64, cc: C64, d: C64, n: i64, ps: &EllipticParams) -> C64 {
        let q = ps.q();
        qpoch_product(&[a * q, a * q / (b * cc), a * q / (b * d), a * q / (cc * d)], n, ps).unwrap().value
            / qpoch_product(&[a * q / b, a * q / cc, a * q / d, a * q / (b * cc * d)], n, ps).unwrap().value
    }

    #[test]
    fn ten_v_nine_two_terms() {
        let ps = EllipticParams::new(c(0.35, 0.05), c(0.15, 0.0)).unwrap();
        let q = ps.q();
        let (a, b, cc, d) = (c(0.9, 0.2), c(1.1, -0.3), c(0.7, 0.5), c(1.3, 0.1));
        let e = a * a * q * q / (b * cc * d);
        let spec = VSeriesSpec::new(a, &[b, cc, d, e], 1, ps).unwrap();
        // Independent two-term expansion of the left side.
        let th = |x: C64| theta_factor(x, &ps);
        let qn = q.inv();
        let t1 = th(a * q * q) / th(a) * th(a) * th(b) * th(cc) * th(d) * th(e) * th(qn)
            / (th(q) * th(a * q / b) * th(a * q / cc) * th(a * q / d) * th(a * q / e) * th(a * q / qn))
            * q;
        let two_terms = c(1.0, 0.0) + t1;
        assert!(rel_error(eval_v(&spec).unwrap(), two_terms) < 1e-13);
        assert!(rel_error(two_terms, ten_v_nine_product(a, b, cc, d, 1, &ps)) < 1e-12);
    }

    #[test]
    fn v_series_at_zero_nome_is_jackson_phi() {
        let ps = EllipticParams::basic(c(0.4, 0.1)).unwrap();
        let q = ps.q();
        let (a, b, cc, d) = (c(0.9, 0.2), c(1.1, -0.3), c(0.7, 0.5), c(1.3, 0.1));
        for n in 0..6usize {
            let e = a * a * q.powi(n as i32 + 1) / (b * cc * d);
            let v = eval_v(&VSeriesSpec::new(a, &[b, cc, d, e], n, ps).unwrap()).unwrap();
            let phi = eval_phi(&jackson_spec(a, b, cc, d, n, ps)).unwrap();
            assert!(rel_error(v, phi) < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn v_series_degenerate_special_parameter() {
        let ps = EllipticParams::new(c(0.3, 0.0), c(0.1, 0.0)).unwrap();
        let q = ps.q();
        let a = c(1.0, 0.0);
        let (b, cc, d) = (c(1.1, -0.3), c(0.7, 0.5), c(1.3, 0.1));
        let e = a * a * q * q / (b * cc * d);
        let spec = VSeriesSpec::new(a, &[b, cc, d, e], 1, ps).unwrap();
        assert!(matches!(eval_v(&spec), Err(Error::DegenerateDivision(_))));
    }

    #[test]
    fn classification() {
        let ps = EllipticParams::basic(c(0.4, 0.1)).unwrap();
        let jack = jackson_spec(c(0.9, 0.2), c(1.1, -0.3), c(0.7, 0.5), c(1.3, 0.1), 4, ps);
        let cls = classify(&jack);
        assert_eq!(cls, Classification { balanced: true, well_poised: true, very_well_poised: true });
        let generic = SeriesSpec::new(vec![c(0.3, 0.1), c(0.8, 0.0)], vec![c(1.7, 0.2)], c(0.2, 0.0), None, ps).unwrap();
        assert_eq!(classify(&generic), Classification::default());
        let mut perturbed = jack.clone();
        perturbed.lower[3] *= 1.0 + 1e-3;
        assert!(!classify(&perturbed).well_poised);
        assert!(!classify(&perturbed).very_well_poised);
        assert!(!is_elliptically_balanced(&jack));
    }
}
