use web_time::Instant;

use crate::cnum::{c, C64};
use crate::error::{Error, Result};
use crate::hyperseries::{sum_phi, SeriesSpec, SeriesSum};
use crate::qtheta::{qpoch_inf_product, qpoch_quotient, EllipticParams};

use super::{finish, inf_divisor, param_map, require_basic, IdentityId, Sides, VerificationReport};

const ONE: C64 = C64::new(1.0, 0.0);

fn vwp_phi(a: C64, upper: &[C64], lower: &[C64], argument: C64, n: Option<usize>, ps: &EllipticParams) -> Result<SeriesSum> {
    let r = a.sqrt();
    let q = ps.q();
    let mut up = vec![a, q * r, -q * r];
    up.extend_from_slice(upper);
    let mut low = vec![r, -r];
    low.extend_from_slice(lower);
    sum_phi(&SeriesSpec::new(up, low, argument, n, *ps)?)
}

/// Terminating very-well-poised balanced `8phi7` with `e = a^2 q^{1+n}/(bcd)`.
pub fn verify_jackson(a: C64, b: C64, cc: C64, d: C64, n: usize, ps: &EllipticParams, tol: f64) -> Result<VerificationReport> {
    require_basic(ps)?;
    let start = Instant::now();
    let q = ps.q();
    let ni = n as i32;
    let e = a * a * q.powi(1 + ni) / (b * cc * d);
    let params = param_map(&[("a", a), ("b", b), ("c", cc), ("d", d), ("e", e)], ps, Some(n));
    let sides = (|| {
        let aq = a * q;
        let series = vwp_phi(
            a,
            &[b, cc, d, e, q.powi(-ni)],
            &[aq / b, aq / cc, aq / d, b * cc * d * q.powi(-ni) / a, a * q.powi(ni + 1)],
            q,
            Some(n),
            ps,
        )?;
        let rhs = qpoch_quotient(
            &[aq, aq / (b * cc), aq / (b * d), aq / (cc * d)],
            &[aq / b, aq / cc, aq / d, aq / (b * cc * d)],
            n,
            ps,
            "Jackson product side",
        )?;
        Ok(Sides { lhs: series.value, rhs, condition: series.condition() })
    })();
    finish(IdentityId::Jackson, params, tol, start, sides)
}

/// `(bz, b/z)_n / (ba, b/a)_n = 3phi2[az, a/z, q^{-n}; ab, q^{1-n} a/b; q, q]`.
pub fn verify_pfaff_saalschutz(a: C64, b: C64, z: C64, n: usize, ps: &EllipticParams, tol: f64) -> Result<VerificationReport> {
    require_basic(ps)?;
    let start = Instant::now();
    let params = param_map(&[("a", a), ("b", b), ("z", z)], ps, Some(n));
    let sides = (|| {
        if z.norm() == 0.0 {
            return Err(Error::SingularPoint("z = 0"));
        }
        let q = ps.q();
        let ni = n as i32;
        let lhs = qpoch_quotient(&[b * z, b / z], &[b * a, b / a], n, ps, "(ba, b/a)_n")?;
        let series = sum_phi(&SeriesSpec::new(
            vec![a * z, a / z, q.powi(-ni)],
            vec![a * b, q.powi(1 - ni) * a / b],
            q,
            Some(n),
            *ps,
        )?)?;
        Ok(Sides { lhs, rhs: series.value, condition: series.condition() })
    })();
    finish(IdentityId::PfaffSaalschutz, params, tol, start, sides)
}

/// Askey-Wilson `4phi3[az, a/z, abcd q^{n-1}, q^{-n}; ab, ac, ad; q, q]`.
fn omega(n: usize, z: C64, [a, b, cc, d]: [C64; 4], ps: &EllipticParams) -> Result<SeriesSum> {
    let q = ps.q();
    let ni = n as i32;
    sum_phi(&SeriesSpec::new(
        vec![a * z, a / z, a * b * cc * d * q.powi(ni - 1), q.powi(-ni)],
        vec![a * b, a * cc, a * d],
        q,
        Some(n),
        *ps,
    )?)
}

/// `omega_n(x; a, b, c, d) = a^n (bc, bd)_n / (b^n (ac, ad)_n) omega_n(x; b, a, c, d)`.
pub fn verify_sears(abcd: [C64; 4], z: C64, n: usize, ps: &EllipticParams, tol: f64) -> Result<VerificationReport> {
    require_basic(ps)?;
    let start = Instant::now();
    let [a, b, cc, d] = abcd;
    let params = param_map(&[("a", a), ("b", b), ("c", cc), ("d", d), ("z", z)], ps, Some(n));
    let sides = (|| {
        if z.norm() == 0.0 {
            return Err(Error::SingularPoint("z = 0"));
        }
        let left = omega(n, z, abcd, ps)?;
        let right = omega(n, z, [b, a, cc, d], ps)?;
        let pre = (a / b).powi(n as i32) * qpoch_quotient(&[b * cc, b * d], &[a * cc, a * d], n, ps, "(ac, ad)_n")?;
        Ok(Sides { lhs: left.value, rhs: pre * right.value, condition: left.condition().max(right.condition()) })
    })();
    finish(IdentityId::Sears, params, tol, start, sides)
}

/// Nonterminating `8phi7` expansion of
/// `(cz/d, c/dz, cz/e, c/ez)_inf / (cz, c/z, c^2 z/bde, c^2/bdez)_inf`
/// as a two-term combination of very-well-poised series in the bases
/// `(bz, b/z)_k/(cz, c/z)_k` and `(cz/de, c/dez)_k/(c^2 z/bde, c^2/bdez)_k`.
pub fn verify_nonterminating_87(bdezc: [C64; 5], ps: &EllipticParams, tol: f64) -> Result<VerificationReport> {
    require_basic(ps)?;
    let start = Instant::now();
    let [b, d, e, z, cc] = bdezc;
    let params = param_map(&[("b", b), ("d", d), ("e", e), ("z", z), ("c", cc)], ps, None);
    let sides = (|| {
        if z.norm() == 0.0 {
            return Err(Error::SingularPoint("z = 0"));
        }
        let q = ps.q();
        let de = d * e;
        let bde = b * de;
        let c2 = cc * cc;
        let lhs = qpoch_inf_product(&[cc * z / d, cc / (d * z), cc * z / e, cc / (e * z)], ps)?
            / inf_divisor(&[cc * z, cc / z, c2 * z / bde, c2 / (bde * z)], ps, "left-hand side denominator")?;

        let a1 = b * cc / q;
        let s1 = vwp_phi(
            a1,
            &[d, e, c2 / (de * q), b * z, b / z],
            &[b * cc / d, b * cc / e, bde * q / cc, cc * z, cc / z],
            q,
            None,
            ps,
        )?;
        let a2 = c2 * cc / (b * de * de * q);
        let s2 = vwp_phi(
            a2,
            &[cc / (b * d), cc / (b * e), c2 / (de * q), cc * z / de, cc / (de * z)],
            &[c2 / (de * e), c2 / (d * de), cc * q / bde, c2 * z / bde, c2 / (bde * z)],
            q,
            None,
            ps,
        )?;
        let alpha = qpoch_inf_product(&[b * cc / d, b * cc / e, cc / (b * d), cc / (b * e)], ps)?
            / inf_divisor(&[b * cc, cc / b, b * cc / de, cc / bde], ps, "first-series constant")?;
        let beta = qpoch_inf_product(&[d, e, c2 / (d * de), c2 / (de * e)], ps)?
            / inf_divisor(&[cc / b, c2 * cc / (b * de * de), bde / cc, b * cc / de], ps, "second-series constant")?;
        let p1 = qpoch_inf_product(&[cc * z / de, cc / (de * z)], ps)?
            / inf_divisor(&[c2 * z / bde, c2 / (bde * z)], ps, "first-series prefactor")?;
        let p2 = qpoch_inf_product(&[b * z, b / z], ps)? / inf_divisor(&[cc * z, cc / z], ps, "second-series prefactor")?;
        let rhs = alpha * p1 * s1.value + beta * p2 * s2.value;
        Ok(Sides { lhs, rhs, condition: s1.condition().max(s2.condition()) })
    })();
    finish(IdentityId::Nonterminating87, params, tol, start, sides)
}

/// Quadratic summation: `(azq, aq/z, b^2 z/a, b^2/az; q^2)_inf / (bz, b/z; q)_inf`
/// against `(q, a^2 q, b^2, b^2/a^2; q^2)_inf / (ab, b/a; q)_inf` times
/// `sum_k (1 - ab q^{2k-1})/(1 - ab/q) (ab/q, b q^{-1/2}, -b q^{-1/2}, aq/b, az, a/z)_k
///  / (q, -a q^{1/2}, a q^{1/2}, b^2/q, bz, b/z)_k (-b/a)^k`.
///
/// `(aq/b)_k (-b/a)^k` is carried as `prod (q^{j+1} - b/a)`, so `b = 0` is allowed.
pub fn verify_q_watson(a: C64, b: C64, z: C64, ps: &EllipticParams, tol: f64) -> Result<VerificationReport> {
    require_basic(ps)?;
    let start = Instant::now();
    let params = param_map(&[("a", a), ("b", b), ("z", z)], ps, None);
    let sides = (|| {
        if z.norm() == 0.0 || a.norm() == 0.0 {
            return Err(Error::SingularPoint("a = 0 or z = 0"));
        }
        if (b / a).norm() >= 1.0 {
            return Err(Error::DivergentSeries("quadratic series needs |b/a| < 1"));
        }
        let q = ps.q();
        let s = ps.sqrt_q();
        let q2 = EllipticParams::basic(q * q)?;
        let lhs = qpoch_inf_product(&[a * z * q, a * q / z, b * b * z / a, b * b / (a * z)], &q2)?
            / inf_divisor(&[b * z, b / z], ps, "(bz, b/z; q)_inf")?;
        let pre = qpoch_inf_product(&[q, a * a * q, b * b, b * b / (a * a)], &q2)?
            / inf_divisor(&[a * b, b / a], ps, "(ab, b/a; q)_inf")?;
        let big_a = a * b / q;
        let vwp_den = ONE - big_a;
        if vwp_den.norm() < ps.zero_tol() {
            return Err(Error::DegenerateDivision("1 - ab/q"));
        }
        let upper = [big_a, b / s, -b / s, a * z, a / z];
        let lower = [q, -a * s, a * s, b * b / q, b * z, b / z];
        let ratio_limit = (b / a).norm();
        let mut t = ONE;
        let mut qk = ONE;
        let mut sum = c(0.0, 0.0);
        let mut abs_sum = 0.0;
        let mut small = 0;
        for _ in 0..20_000 {
            let term = t * (ONE - big_a * qk * qk) / vwp_den;
            sum += term;
            abs_sum += term.norm();
            if term.norm() < ps.trunc_tol() * sum.norm() && (qk.norm() < 1e-3 || ratio_limit == 0.0) {
                small += 1;
                if small == 2 {
                    let rhs = pre * sum;
                    return Ok(Sides { lhs, rhs, condition: abs_sum / sum.norm().max(1e-300) });
                }
            } else {
                small = 0;
            }
            let mut num: C64 = upper.iter().map(|&u| ONE - u * qk).product();
            num *= q * qk - b / a;
            let mut den = ONE;
            for &l in &lower {
                let f = ONE - l * qk;
                if f.norm() < ps.zero_tol() {
                    return Err(Error::DegenerateDivision("lower parameter factor of the quadratic series"));
                }
                den *= f;
            }
            t *= num / den;
            qk *= q;
        }
        Err(Error::DivergentSeries("quadratic series did not converge"))
    })();
    finish(IdentityId::QWatson, params, tol, start, sides)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnum::rel_error;
    use crate::identities::{assert_sound, Verdict};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pt(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> C64 {
        C64::from_polar(rng.random_range(lo..hi), rng.random_range(0.0..std::f64::consts::TAU))
    }

    fn basic(q: f64) -> EllipticParams {
        EllipticParams::basic(c(q, 0.0)).unwrap()
    }

    #[test]
    fn jackson_trivial_and_two_term() {
        let ps = basic(0.4);
        let (a, b, cc, d) = (c(0.7, 0.2), c(1.1, -0.3), c(0.8, 0.5), c(1.3, 0.1));
        let r0 = verify_jackson(a, b, cc, d, 0, &ps, 1e-12).unwrap();
        assert_eq!((r0.lhs, r0.rhs), (ONE, ONE));
        // n = 1 by hand: 1 + t_1 against the product ratio.
        let q = ps.q();
        let e = a * a * q * q / (b * cc * d);
        let up = [a, b, cc, d, e, ONE / q];
        let low = [a * q / b, a * q / cc, a * q / d, a * q / e, a * q * q];
        let vwp = (ONE - a * q * q) / (ONE - a);
        let t1 = vwp * up.iter().map(|&x| ONE - x).product::<C64>() / ((ONE - q) * low.iter().map(|&x| ONE - x).product::<C64>()) * q;
        let rhs = (ONE - a * q) * (ONE - a * q / (b * cc)) * (ONE - a * q / (b * d)) * (ONE - a * q / (cc * d))
            / ((ONE - a * q / b) * (ONE - a * q / cc) * (ONE - a * q / d) * (ONE - a * q / (b * cc * d)));
        assert!(rel_error(ONE + t1, rhs) < 1e-13);
        let r1 = verify_jackson(a, b, cc, d, 1, &ps, 1e-12).unwrap();
        assert!(rel_error(r1.lhs, ONE + t1) < 1e-13);
        assert_eq!(r1.verdict, Verdict::Pass);
    }

    #[test]
    fn jackson_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        let ps = basic(0.4);
        for _ in 0..20 {
            let r = verify_jackson(pt(&mut rng, 0.5, 1.5), pt(&mut rng, 0.5, 1.5), pt(&mut rng, 0.5, 1.5), pt(&mut rng, 0.5, 1.5), 5, &ps, 1e-10).unwrap();
            assert_sound(&r);
        }
    }

    #[test]
    fn jackson_rejects_elliptic_and_flags_poles() {
        let ps = EllipticParams::new(c(0.4, 0.0), c(0.1, 0.0)).unwrap();
        assert!(matches!(verify_jackson(ONE, ONE, ONE, ONE, 2, &ps, 1e-10), Err(Error::BasicOnly)));
        // aq/b = 1 puts a zero in a lower parameter factor.
        let ps = basic(0.4);
        let a = c(0.9, 0.1);
        let r = verify_jackson(a, a * ps.q(), c(0.8, 0.2), c(1.2, 0.0), 3, &ps, 1e-10).unwrap();
        assert_eq!(r.verdict, Verdict::Degenerate);
    }

    #[test]
    fn pfaff_saalschutz_and_sears() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let ps = EllipticParams::basic(c(0.35, 0.1)).unwrap();
        let r = verify_pfaff_saalschutz(c(0.8, 0.1), c(1.1, 0.3), c(0.9, 0.4), 0, &ps, 1e-10).unwrap();
        assert_eq!((r.lhs, r.rhs), (ONE, ONE));
        for _ in 0..20 {
            let z = pt(&mut rng, 0.5, 1.5);
            let r = verify_pfaff_saalschutz(pt(&mut rng, 0.5, 1.5), pt(&mut rng, 0.5, 1.5), z, 5, &ps, 1e-10).unwrap();
            assert_sound(&r);
            let abcd = [pt(&mut rng, 0.5, 1.5), pt(&mut rng, 0.5, 1.5), pt(&mut rng, 0.5, 1.5), pt(&mut rng, 0.5, 1.5)];
            let r = verify_sears(abcd, z, 5, &ps, 1e-10).unwrap();
            assert_sound(&r);
        }
        let a = c(0.8, 0.3);
        let r = verify_sears([a, a, c(1.2, 0.1), c(0.6, -0.4)], c(0.9, 0.5), 4, &ps, 1e-10).unwrap();
        assert!(r.rel_error < 1e-14, "{r:?}");
    }

    #[test]
    fn nonterminating_87_random_and_reduction() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let ps = basic(0.3);
        for _ in 0..10 {
            let args = [pt(&mut rng, 0.5, 1.5), pt(&mut rng, 0.5, 1.5), pt(&mut rng, 0.5, 1.5), pt(&mut rng, 0.5, 1.5), c(1.1, 0.0)];
            let r = verify_nonterminating_87(args, &ps, 1e-7).unwrap();
            assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
        }
        // z = b kills the second term; the first alone must carry the identity.
        let (b, d, e, cc) = (c(0.9, 0.3), c(1.2, -0.4), c(0.7, 0.6), c(1.1, 0.0));
        let z = b;
        let r = verify_nonterminating_87([b, d, e, z, cc], &ps, 1e-7).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(qpoch_inf_product(&[b / z], &ps).unwrap().norm() < 1e-15);
    }

    #[test]
    fn q_watson_random_and_b_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let ps = basic(0.4);
        for _ in 0..10 {
            let a = pt(&mut rng, 0.8, 1.2);
            let b = a * C64::from_polar(0.5, rng.random_range(0.0..std::f64::consts::TAU));
            let r = verify_q_watson(a, b, pt(&mut rng, 0.8, 1.2), &ps, 1e-7).unwrap();
            assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
        }
        // b = 0: the left side is (azq, aq/z; q^2)_inf and the series does not
        // collapse to its first term.
        let (a, z) = (c(0.9, 0.2), c(1.1, -0.3));
        let r = verify_q_watson(a, c(0.0, 0.0), z, &ps, 1e-12).unwrap();
        let q2 = basic(0.16);
        let lhs = qpoch_inf_product(&[a * z * 0.4, a * 0.4 / z], &q2).unwrap();
        assert!(rel_error(r.lhs, lhs) < 1e-14);
        assert_eq!(r.verdict, Verdict::Pass);
        let first_term = qpoch_inf_product(&[c(0.4, 0.0), a * a * 0.4], &q2).unwrap();
        assert!(rel_error(first_term, lhs) > 1e-3);
        // z = a
        let r = verify_q_watson(a, a * 0.5, a, &ps, 1e-7).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(matches!(verify_q_watson(a, a * 1.5, z, &ps, 1e-7), Err(Error::DivergentSeries(_))));
    }
}
