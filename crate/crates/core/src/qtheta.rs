//! Theta functions and shifted factorials.
//!
//! `theta(x; p) = (x; p)_inf (p/x; p)_inf`, and the q,p-shifted factorial
//! `(a; q, p)_n` is the product of `theta(a q^k; p)` for `k < n`. At `p = 0`
//! the theta function is `1 - x` and everything reduces to the basic case.

use crate::cnum::{cdiv, C64};
use crate::error::{Error, Result};

pub const DEFAULT_TRUNC_TOL: f64 = 1e-15;
pub const DEFAULT_ZERO_TOL: f64 = 1e-13;

/// Base `q`, nome `p` and the numerical policy shared by every evaluator.
///
/// The square root of `q` is fixed once (principal branch) and `q` is then
/// stored as `sqrt_q * sqrt_q`, so every half-integer power `q^{m/2}` is an
/// integer power of `sqrt_q` and squares back to `q` exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticParams {
    q: C64,
    p: C64,
    sqrt_q: C64,
    trunc_tol: f64,
    zero_tol: f64,
}

impl EllipticParams {
    pub fn new(q: C64, p: C64) -> Result<Self> {
        Self::from_sqrt_q(q.sqrt(), p)
    }

    pub fn basic(q: C64) -> Result<Self> {
        Self::new(q, C64::new(0.0, 0.0))
    }

    pub fn from_sqrt_q(sqrt_q: C64, p: C64) -> Result<Self> {
        let q = sqrt_q * sqrt_q;
        let qm = q.norm();
        if !(qm > 0.0 && qm < 1.0) {
            return Err(Error::BaseOutOfRange(qm));
        }
        let pm = p.norm();
        if !(pm < 1.0) {
            return Err(Error::NomeOutOfRange(pm));
        }
        Ok(Self {
            q,
            p,
            sqrt_q,
            trunc_tol: DEFAULT_TRUNC_TOL,
            zero_tol: DEFAULT_ZERO_TOL,
        })
    }

    pub fn with_tolerances(mut self, trunc_tol: f64, zero_tol: f64) -> Result<Self> {
        let ok = |t: f64| t.is_finite() && t > 0.0;
        if !ok(trunc_tol) || !ok(zero_tol) {
            return Err(Error::InvalidTolerance);
        }
        self.trunc_tol = trunc_tol;
        self.zero_tol = zero_tol;
        Ok(self)
    }

    /// Same base, branch and tolerances with a different nome.
    pub fn with_nome(self, p: C64) -> Result<Self> {
        Self::from_sqrt_q(self.sqrt_q, p)?.with_tolerances(self.trunc_tol, self.zero_tol)
    }

    pub fn q(&self) -> C64 {
        self.q
    }
    pub fn p(&self) -> C64 {
        self.p
    }
    pub fn sqrt_q(&self) -> C64 {
        self.sqrt_q
    }
    pub fn trunc_tol(&self) -> f64 {
        self.trunc_tol
    }
    pub fn zero_tol(&self) -> f64 {
        self.zero_tol
    }
    pub fn is_basic(&self) -> bool {
        self.p.norm() == 0.0
    }
}

/// Number of factors of each kind kept in `theta(x; p)`.
///
/// At least `max(10, ceil(ln(tol (1-|p|)) / ln|p|))`; arguments away from the
/// unit circle get `ln(max(|x|, 1/|x|)) / ln(1/|p|)` extra factors so the
/// neglected tail stays below `tol` relative.
fn theta_terms(x: C64, params: &EllipticParams) -> usize {
    let pm = params.p.norm();
    let lp = pm.ln();
    let base = ((params.trunc_tol * (1.0 - pm)).ln() / lp).ceil().max(10.0);
    let lx = x.norm().ln().abs();
    let extra = if lx.is_finite() { (lx / -lp).ceil() } else { 0.0 };
    (base + extra) as usize
}

/// `theta(x; p)` without the nonzero check; `1 - x` when `p = 0`.
pub(crate) fn theta_factor(x: C64, params: &EllipticParams) -> C64 {
    let one = C64::new(1.0, 0.0);
    if params.is_basic() {
        return one - x;
    }
    let p = params.p;
    let inv = x.inv();
    let mut pj = one;
    let mut acc = one;
    for _ in 0..theta_terms(x, params) {
        let next = pj * p;
        acc *= (one - x * pj) * (one - next * inv);
        pj = next;
    }
    acc
}

pub fn theta(x: C64, params: &EllipticParams) -> Result<C64> {
    if x.norm() == 0.0 {
        return Err(Error::NonzeroRequired);
    }
    Ok(theta_factor(x, params))
}

/// `theta(x_1, ..., x_m; p)`, the empty product being 1.
pub fn theta_multi(xs: &[C64], params: &EllipticParams) -> Result<C64> {
    xs.iter()
        .try_fold(C64::new(1.0, 0.0), |acc, &x| Ok(acc * theta(x, params)?))
}

/// Value of a shifted factorial, flagged when some factor fell below
/// `zero_tol`. A degenerate value must not be used as a divisor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QPochResult {
    pub value: C64,
    pub degenerate: bool,
}

impl QPochResult {
    fn one() -> Self {
        Self {
            value: C64::new(1.0, 0.0),
            degenerate: false,
        }
    }

    fn times(self, other: Self) -> Self {
        Self {
            value: self.value * other.value,
            degenerate: self.degenerate || other.degenerate,
        }
    }

    /// The value, or `DegenerateDivision` when it is about to be divided by.
    pub fn divisor(self, context: &'static str) -> Result<C64> {
        if self.degenerate {
            Err(Error::DegenerateDivision(context))
        } else {
            Ok(self.value)
        }
    }
}

/// `(a; q, p)_n` for any integer `n`; at `p = 0` this is `(a; q)_n`.
pub fn qpoch(a: C64, n: i64, params: &EllipticParams) -> Result<QPochResult> {
    if !params.is_basic() && a.norm() == 0.0 {
        return Err(Error::NonzeroRequired);
    }
    let q = params.q;
    match n {
        0 => Ok(QPochResult::one()),
        n if n > 0 => {
            let mut out = QPochResult::one();
            let mut x = a;
            for _ in 0..n {
                let t = theta_factor(x, params);
                out.degenerate |= t.norm() < params.zero_tol;
                out.value *= t;
                x *= q;
            }
            Ok(out)
        }
        n => {
            // 1 / prod_{k=0}^{-n-1} theta(a q^{n+k})
            let mut den = C64::new(1.0, 0.0);
            let mut x = a * q.powi(n as i32);
            for _ in 0..(-n) {
                let t = theta_factor(x, params);
                if t.norm() < params.zero_tol {
                    return Err(Error::DegenerateDivision("(a;q,p)_n with n < 0"));
                }
                den *= t;
                x *= q;
            }
            Ok(QPochResult {
                value: den.inv(),
                degenerate: false,
            })
        }
    }
}

/// `(a_1, ..., a_m; q, p)_n`.
pub fn qpoch_product(args: &[C64], n: i64, params: &EllipticParams) -> Result<QPochResult> {
    args.iter().try_fold(QPochResult::one(), |acc, &a| Ok(acc.times(qpoch(a, n, params)?)))
}

/// `(a; q)_inf` in the basic case.
pub fn qpoch_inf(a: C64, params: &EllipticParams) -> Result<C64> {
    if !params.is_basic() {
        return Err(Error::BasicOnly);
    }
    let q = params.q;
    let qm = q.norm();
    let lq = qm.ln();
    let base = ((params.trunc_tol * (1.0 - qm)).ln() / lq).ceil().max(10.0);
    let extra = if a.norm() > 1.0 { (a.norm().ln() / -lq).ceil() } else { 0.0 };
    let one = C64::new(1.0, 0.0);
    let mut x = a;
    let mut acc = one;
    for _ in 0..(base + extra) as usize {
        acc *= one - x;
        x *= q;
    }
    Ok(acc)
}

/// `(a_1, ..., a_m; q)_inf`.
pub fn qpoch_inf_product(args: &[C64], params: &EllipticParams) -> Result<C64> {
    args.iter()
        .try_fold(C64::new(1.0, 0.0), |acc, &a| Ok(acc * qpoch_inf(a, params)?))
}

/// `q^{m/2}` on the fixed branch. `q^{-k(k-1)/4}` is `q_half_power(-k(k-1)/2)`.
pub fn q_half_power(m: i64, params: &EllipticParams) -> C64 {
    params.sqrt_q.powi(m as i32)
}

/// `(num_1, ..., num_r; q, p)_n / (den_1, ..., den_s; q, p)_n` for `n >= 0`,
/// accumulated factor by factor so that large theta values in numerator and
/// denominator cancel before they can overflow.
pub fn qpoch_quotient(num: &[C64], den: &[C64], n: usize, params: &EllipticParams, context: &'static str) -> Result<C64> {
    if !params.is_basic() && num.iter().chain(den).any(|a| a.norm() == 0.0) {
        return Err(Error::NonzeroRequired);
    }
    let mut acc = C64::new(1.0, 0.0);
    let mut qk = C64::new(1.0, 0.0);
    for _ in 0..n {
        for i in 0..num.len().max(den.len()) {
            if let Some(&a) = num.get(i) {
                acc *= theta_factor(a * qk, params);
            }
            if let Some(&b) = den.get(i) {
                let t = theta_factor(b * qk, params);
                if t.norm() < params.zero_tol {
                    return Err(Error::DegenerateDivision(context));
                }
                acc = cdiv(acc, t);
            }
        }
        qk *= params.q;
    }
    Ok(acc)
}
