use web_time::Instant;

use crate::cnum::C64;
use crate::error::Result;
use crate::hyperseries::{sum_v, VSeriesSpec};
use crate::qtheta::{qpoch_quotient, EllipticParams};

use super::{finish, param_map, IdentityId, Sides, VerificationReport};

/// `10V9(a; b, c, d, e, q^{-n})` with `e = a^2 q^{n+1}/(bcd)` against
/// `(aq, aq/bc, aq/bd, aq/cd)_n / (aq/b, aq/c, aq/d, aq/bcd)_n`.
pub fn verify_10v9(a: C64, b: C64, cc: C64, d: C64, n: usize, ps: &EllipticParams, tol: f64) -> Result<VerificationReport> {
    let start = Instant::now();
    let q = ps.q();
    let e = a * a * q.powi(n as i32 + 1) / (b * cc * d);
    let params = param_map(&[("a", a), ("b", b), ("c", cc), ("d", d), ("e", e)], ps, Some(n));
    let sides = (|| {
        let series = sum_v(&VSeriesSpec::new(a, &[b, cc, d, e], n, *ps)?)?;
        let aq = a * q;
        let rhs = qpoch_quotient(
            &[aq, aq / (b * cc), aq / (b * d), aq / (cc * d)],
            &[aq / b, aq / cc, aq / d, aq / (b * cc * d)],
            n,
            ps,
            "10V9 product denominator",
        )?;
        Ok(Sides { lhs: series.value, rhs, condition: series.condition() })
    })();
    finish(IdentityId::TenV9, params, tol, start, sides)
}

/// `12V11(a; b, c, d, e, f, lambda a q^{n+1}/ef, q^{-n})` against
/// `(aq, aq/ef, lambda q/e, lambda q/f)_n / (aq/e, aq/f, lambda q/ef, lambda q)_n`
/// times `12V11(lambda; lambda b/a, lambda c/a, lambda d/a, e, f, lambda a q^{n+1}/ef, q^{-n})`
/// with `lambda = a^2 q/(bcd)`.
pub fn verify_12v11(abcdef: [C64; 6], n: usize, ps: &EllipticParams, tol: f64) -> Result<VerificationReport> {
    let start = Instant::now();
    let [a, b, cc, d, e, f] = abcdef;
    let q = ps.q();
    let lambda = a * a * q / (b * cc * d);
    let g = lambda * a * q.powi(n as i32 + 1) / (e * f);
    let params = param_map(
        &[("a", a), ("b", b), ("c", cc), ("d", d), ("e", e), ("f", f), ("lambda", lambda), ("g", g)],
        ps,
        Some(n),
    );
    let sides = (|| {
        let left = sum_v(&VSeriesSpec::new(a, &[b, cc, d, e, f, g], n, *ps)?)?;
        let l_a = lambda / a;
        let right = sum_v(&VSeriesSpec::new(lambda, &[l_a * b, l_a * cc, l_a * d, e, f, g], n, *ps)?)?;
        let pre = qpoch_quotient(
            &[a * q, a * q / (e * f), lambda * q / e, lambda * q / f],
            &[a * q / e, a * q / f, lambda * q / (e * f), lambda * q],
            n,
            ps,
            "12V11 prefactor denominator",
        )?;
        Ok(Sides { lhs: left.value, rhs: pre * right.value, condition: left.condition().max(right.condition()) })
    })();
    finish(IdentityId::TwelveV11, params, tol, start, sides)
}
