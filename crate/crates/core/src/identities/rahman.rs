use web_time::Instant;

use crate::cnum::C64;
use crate::error::{Error, Result};
use crate::hyperseries::{sum_v, SeriesSum, VSeriesSpec};
use crate::qtheta::{q_half_power, qpoch_quotient, EllipticParams};

use super::{finish, param_map, IdentityId, Sides, VerificationReport};

/// Parameters of the biorthogonal rational function
/// `R_n(z; b, c, d, e, f) = 12V11(bc/q; bz, b/z, d, e, f, bc^3 q^{n-1}/(def), q^{-n})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RnSpec {
    pub b: C64,
    pub c: C64,
    pub d: C64,
    pub e: C64,
    pub f: C64,
    pub n: usize,
    pub params: EllipticParams,
}

impl RnSpec {
    pub fn new(b: C64, c: C64, d: C64, e: C64, f: C64, n: usize, params: EllipticParams) -> Result<Self> {
        if [b, c, d, e, f].iter().any(|x| x.norm() == 0.0) {
            return Err(Error::NonzeroRequired);
        }
        Ok(Self { b, c, d, e, f, n, params })
    }

    /// `bc^3 q^{n-1}/(def)`, the parameter fixed by balancing.
    pub fn balancing_parameter(&self) -> C64 {
        self.b * self.c.powi(3) * self.params.q().powi(self.n as i32 - 1) / (self.d * self.e * self.f)
    }

    /// Degree `n - k` with `b q^{k/2}, c q^{3k/2}, d q^k, e q^k, f q^k`.
    pub fn shifted(&self, k: usize) -> Result<Self> {
        if k > self.n {
            return Err(Error::DegreeOutOfRange { k, n: self.n });
        }
        let ps = &self.params;
        let qk = ps.q().powi(k as i32);
        Ok(Self {
            b: self.b * q_half_power(k as i64, ps),
            c: self.c * q_half_power(3 * k as i64, ps),
            d: self.d * qk,
            e: self.e * qk,
            f: self.f * qk,
            n: self.n - k,
            params: self.params,
        })
    }

    fn entries(&self) -> Vec<(&'static str, C64)> {
        vec![("b", self.b), ("c", self.c), ("d", self.d), ("e", self.e), ("f", self.f)]
    }
}

fn sum_rn(spec: &RnSpec, z: C64) -> Result<SeriesSum> {
    if z.norm() == 0.0 {
        return Err(Error::SingularPoint("z = 0"));
    }
    let (b, q) = (spec.b, spec.params.q());
    let tail = [b * z, b / z, spec.d, spec.e, spec.f, spec.balancing_parameter()];
    sum_v(&VSeriesSpec::new(b * spec.c / q, &tail, spec.n, spec.params)?)
}

pub fn eval_rn(spec: &RnSpec, z: C64) -> Result<C64> {
    sum_rn(spec, z).map(|s| s.value)
}

/// Closed form of `R_n(c/f)`:
/// `(bc, bc/de, c^2/df, c^2/ef)_n / (bc/d, bc/e, c^2/f, c^2/def)_n`.
pub fn rn_special_value(spec: &RnSpec) -> Result<C64> {
    let RnSpec { b, c, d, e, f, n, ref params } = *spec;
    let cc = c * c;
    qpoch_quotient(
        &[b * c, b * c / (d * e), cc / (d * f), cc / (e * f)],
        &[b * c / d, b * c / e, cc / f, cc / (d * e * f)],
        n,
        params,
        "R_n special-value denominator",
    )
}

pub fn verify_rn_special(spec: &RnSpec, tol: f64) -> Result<VerificationReport> {
    let start = Instant::now();
    let params = param_map(&spec.entries(), &spec.params, Some(spec.n));
    let sides = (|| {
        let series = sum_rn(spec, spec.c / spec.f)?;
        Ok(Sides { lhs: series.value, rhs: rn_special_value(spec)?, condition: series.condition() })
    })();
    finish(IdentityId::RnSpecial, params, tol, start, sides)
}

/// `R_n(z)` expanded in the well-poised monomials `(az, a/z)_k / (cz, c/z)_k`:
/// the `k`-th coefficient is
/// `b^k q^k (bc)_{2k} (c/b, d, e, f, bc^3 q^{n-1}/def, q^{-n})_k
///  / (a^k (q, bc/d, bc/e, bc/f, bcq^n, defq^{1-n}/c^2, c/a, acq^{k-1})_k)`
/// times `R_{n-k}(aq^{k/2}; bq^{k/2}, cq^{3k/2}, dq^k, eq^k, fq^k)`.
pub fn connection_coefficients(spec: &RnSpec, a: C64) -> Result<Vec<(C64, f64)>> {
    let RnSpec { b, c, d, e, f, n, ref params } = *spec;
    if a.norm() == 0.0 {
        return Err(Error::NonzeroRequired);
    }
    let q = params.q();
    let ni = n as i32;
    let g = spec.balancing_parameter();
    let bc = b * c;
    (0..=n)
        .map(|k| {
            let ki = k as i64;
            let qk = q.powi(k as i32);
            let ratio = qpoch_quotient(
                &[bc, bc * qk, c / b, d, e, f, g, q.powi(-ni)],
                &[q, bc / d, bc / e, bc / f, bc * q.powi(ni), d * e * f * q.powi(1 - ni) / (c * c), c / a, a * c * qk / q],
                k,
                params,
                "connection coefficient denominator",
            )?;
            let inner = sum_rn(&spec.shifted(k)?, a * q_half_power(ki, params))?;
            Ok((ratio * (b * q / a).powi(k as i32) * inner.value, inner.condition()))
        })
        .collect()
}

pub fn verify_connection(spec: &RnSpec, a: C64, z: C64, tol: f64) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut entries = spec.entries();
    entries.extend([("a", a), ("z", z)]);
    let params = param_map(&entries, &spec.params, Some(spec.n));
    let sides = (|| {
        let left = sum_rn(spec, z)?;
        let ps = &spec.params;
        let c = spec.c;
        let mut rhs = C64::new(0.0, 0.0);
        let mut abs_sum = 0.0;
        let mut inner_cond: f64 = 1.0;
        let mut monomial = C64::new(1.0, 0.0);
        let mut qk = C64::new(1.0, 0.0);
        for (k, (coef, cond)) in connection_coefficients(spec, a)?.into_iter().enumerate() {
            if k > 0 {
                let shift = qk / ps.q();
                monomial *= qpoch_quotient(&[a * z * shift, a * shift / z], &[c * z * shift, c * shift / z], 1, ps, "(cz, c/z)_k")?;
            }
            let term = coef * monomial;
            rhs += term;
            abs_sum += term.norm();
            inner_cond = inner_cond.max(cond);
            qk *= ps.q();
        }
        let outer = abs_sum / rhs.norm().max(1e-300);
        Ok(Sides { lhs: left.value, rhs, condition: left.condition().max(outer).max(inner_cond) })
    })();
    finish(IdentityId::Connection, params, tol, start, sides)
}

/// `R_n(z; b, c, d, e, f) = (bc, bc/de, c^2/df, c^2/ef)_n / (bc/d, bc/e, c^2/f, c^2/def)_n
///  * R_n(z; c/f, c, d, e, c/b)`.
pub fn verify_rn_transformation(spec: &RnSpec, z: C64, tol: f64) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut entries = spec.entries();
    entries.push(("z", z));
    let params = param_map(&entries, &spec.params, Some(spec.n));
    let sides = (|| {
        let left = sum_rn(spec, z)?;
        let dual = RnSpec { b: spec.c / spec.f, f: spec.c / spec.b, ..*spec };
        let right = sum_rn(&dual, z)?;
        let pre = rn_special_value(spec)?;
        Ok(Sides { lhs: left.value, rhs: pre * right.value, condition: left.condition().max(right.condition()) })
    })();
    finish(IdentityId::RnTransformation, params, tol, start, sides)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnum::{c, rel_error};
    use crate::identities::{assert_sound, Verdict};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pt(rng: &mut ChaCha8Rng) -> C64 {
        C64::from_polar(rng.random_range(0.6..1.4), rng.random_range(0.0..std::f64::consts::TAU))
    }

    fn random_spec(rng: &mut ChaCha8Rng, n: usize) -> RnSpec {
        let ps = EllipticParams::new(C64::from_polar(0.35, 0.4), c(0.08, 0.03)).unwrap();
        RnSpec::new(pt(rng), pt(rng), pt(rng), pt(rng), pt(rng), n, ps).unwrap()
    }

    #[test]
    fn degree_zero_is_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        let s = random_spec(&mut rng, 0);
        assert_eq!(eval_rn(&s, c(0.9, 0.4)).unwrap(), C64::new(1.0, 0.0));
        let r = verify_connection(&s, c(1.1, 0.2), c(0.9, 0.4), 1e-8).unwrap();
        assert_eq!((r.lhs, r.rhs), (C64::new(1.0, 0.0), C64::new(1.0, 0.0)));
    }

    #[test]
    fn symmetric_in_z() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..10 {
            let s = random_spec(&mut rng, 4);
            let z = pt(&mut rng);
            let (fz, finv) = (sum_rn(&s, z).unwrap(), sum_rn(&s, z.inv()).unwrap());
            let budget = crate::identities::sampler::ELLIPTIC_ERROR_PER_CONDITION * fz.condition().max(finv.condition());
            assert!(rel_error(fz.value, finv.value) < budget.max(1e-11), "{fz:?} {finv:?}");
        }
    }

    #[test]
    fn special_value_and_transformation() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..10 {
            let s = random_spec(&mut rng, 4);
            assert_sound(&verify_rn_special(&s, 1e-9).unwrap());
            assert_sound(&verify_rn_transformation(&s, pt(&mut rng), 1e-9).unwrap());
        }
        // f = c/b makes the dual parameters coincide with the originals.
        let s = random_spec(&mut rng, 3);
        let s = RnSpec { f: s.c / s.b, ..s };
        let pre = rn_special_value(&s).unwrap();
        assert!(rel_error(pre, C64::new(1.0, 0.0)) < 1e-12);
    }

    #[test]
    fn connection_holds_and_is_anchor_free() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..10 {
            let s = random_spec(&mut rng, 3);
            let z = pt(&mut rng);
            let r1 = verify_connection(&s, pt(&mut rng), z, 1e-8).unwrap();
            let r2 = verify_connection(&s, pt(&mut rng), z, 1e-8).unwrap();
            assert_sound(&r1);
            if r1.verdict == Verdict::Pass && r2.verdict == Verdict::Pass {
                assert!(rel_error(r1.rhs, r2.rhs) < 1e-9);
            }
        }
    }

    #[test]
    fn shifted_rejects_excess_degree() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        let s = random_spec(&mut rng, 2);
        assert!(matches!(s.shifted(3), Err(Error::DegreeOutOfRange { k: 3, n: 2 })));
        assert_eq!(s.shifted(2).unwrap().n, 0);
    }
}
