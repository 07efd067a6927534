//! Askey-Wilson divided differences acting on functions symmetric under
//! `z -> 1/z`.
//!
//! - `D_q f = (f(q^{1/2} z) - f(q^{-1/2} z)) / (iota(q^{1/2} z) - iota(q^{-1/2} z))`
//!   with `iota(z) = (z + 1/z)/2`.
//! - `D_{c,q,p} f = 2 q^{1/2} z theta(c z q^{-1/2}, c z q^{1/2}, c q^{-1/2}/z, c q^{1/2}/z; p)
//!   / theta(q, z^2; p) * (f(q^{1/2} z) - f(q^{-1/2} z))`, which is `D_q` at `c = p = 0`.
//! - `D^{(k)}_c = D^{(k-1)}_{c q^{3/2}} D_c`, the identity for `k = 0`.

use std::sync::Arc;

use crate::cnum::{c, cdiv, C64};
use crate::error::{Error, Result};
use crate::qtheta::{theta_factor, EllipticParams};

type Evaluator = dyn Fn(C64) -> Result<C64> + Send + Sync;

/// A black-box evaluator, assumed symmetric in `z` and `1/z`.
///
/// Symmetry is the caller's claim; [`SymmetricFunction::check_symmetry`]
/// tests it at sample points on request. Clones share the evaluator.
#[derive(Clone)]
pub struct SymmetricFunction {
    eval: Arc<Evaluator>,
}

impl std::fmt::Debug for SymmetricFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("SymmetricFunction")
    }
}

impl SymmetricFunction {
    pub fn new(f: impl Fn(C64) -> Result<C64> + Send + Sync + 'static) -> Self {
        Self { eval: Arc::new(f) }
    }

    pub fn constant(value: C64) -> Self {
        Self::new(move |_| Ok(value))
    }

    pub fn eval(&self, z: C64) -> Result<C64> {
        (self.eval)(z)
    }

    /// `f(z) = f(1/z)` within `tol` relative at every sample.
    pub fn check_symmetry(&self, samples: &[C64], tol: f64) -> Result<bool> {
        for &z in samples {
            let (a, b) = (self.eval(z)?, self.eval(z.inv())?);
            if (a - b).norm() > tol * a.norm().max(b.norm()) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Pointwise linear combination `sum w_i f_i`.
    pub fn linear_combination(terms: Vec<(C64, SymmetricFunction)>) -> Self {
        Self::new(move |z| {
            terms
                .iter()
                .try_fold(c(0.0, 0.0), |acc, (w, f)| Ok(acc + *w * f.eval(z)?))
        })
    }
}

/// Pole parameter `c` together with base and nome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorSpec {
    pub c: C64,
    pub params: EllipticParams,
}

impl OperatorSpec {
    pub fn new(c: C64, params: EllipticParams) -> Self {
        Self { c, params }
    }

    /// The operator applied next in an iterate: pole parameter `c q^{3/2}`.
    pub fn advanced(&self) -> Self {
        Self { c: self.c * self.params.sqrt_q().powi(3), params: self.params }
    }

    /// `2 q^{1/2} z theta(cz/s, czs, c/(sz), cs/z; p) / theta(q, z^2; p)`, `s = q^{1/2}`.
    pub fn prefactor(&self, z: C64) -> Result<C64> {
        let ps = &self.params;
        if z.norm() == 0.0 {
            return Err(Error::SingularPoint("z = 0"));
        }
        if !ps.is_basic() && self.c.norm() == 0.0 {
            return Err(Error::DegenerateParameter("c = 0 requires p = 0"));
        }
        let theta_q = theta_factor(ps.q(), ps);
        if theta_q.norm() < ps.zero_tol() {
            return Err(Error::DegenerateParameter("theta(q; p) vanishes"));
        }
        let theta_z2 = theta_factor(z * z, ps);
        if theta_z2.norm() < ps.zero_tol() {
            return Err(Error::SingularPoint("theta(z^2; p) vanishes"));
        }
        let s = ps.sqrt_q();
        let cz = self.c * z;
        let cdz = self.c / z;
        let num = theta_factor(cz / s, ps)
            * theta_factor(cz * s, ps)
            * theta_factor(cdz / s, ps)
            * theta_factor(cdz * s, ps);
        Ok(cdiv(c(2.0, 0.0) * s * z * num, theta_q * theta_z2))
    }

    /// `D_{c,q,p}` as a lazily evaluated function.
    pub fn lift(&self, f: &SymmetricFunction) -> SymmetricFunction {
        let op = *self;
        let f = f.clone();
        SymmetricFunction::new(move |z| apply_dcqp(&f, &op, z))
    }
}

fn iota(z: C64) -> C64 {
    (z + z.inv()) * 0.5
}

/// Askey-Wilson operator `D_q` at `z`.
pub fn apply_dq(f: &SymmetricFunction, z: C64, params: &EllipticParams) -> Result<C64> {
    if z.norm() == 0.0 {
        return Err(Error::SingularPoint("z = 0"));
    }
    if (c(1.0, 0.0) - z * z).norm() < params.zero_tol() {
        return Err(Error::SingularPoint("z = +-1"));
    }
    let s = params.sqrt_q();
    let (up, down) = (s * z, z / s);
    Ok((f.eval(up)? - f.eval(down)?) / (iota(up) - iota(down)))
}

/// `D_q` as a lazily evaluated function.
pub fn lift_dq(f: &SymmetricFunction, params: &EllipticParams) -> SymmetricFunction {
    let f = f.clone();
    let ps = *params;
    SymmetricFunction::new(move |z| apply_dq(&f, z, &ps))
}

/// Elliptic operator `D_{c,q,p}` at `z`.
pub fn apply_dcqp(f: &SymmetricFunction, op: &OperatorSpec, z: C64) -> Result<C64> {
    let pre = op.prefactor(z)?;
    let s = op.params.sqrt_q();
    Ok(pre * (f.eval(s * z)? - f.eval(z / s)?))
}

/// Iterate `D^{(k)}_{c,q,p} f` at `z`.
///
/// Every intermediate function is needed only on the grid `z q^{m/2}`,
/// `|m| <= k`, `m = k (mod 2)`; the grid is filled level by level, so `f` is
/// evaluated `k + 1` times and the operator prefactor `O(k^2)` times.
pub fn apply_dk(f: &SymmetricFunction, op: &OperatorSpec, k: usize, z: C64) -> Result<C64> {
    apply_dk_scaled(f, op, k, z, &vec![c(1.0, 0.0); k]).map(|d| d.value)
}

/// A grid evaluation together with `sum_i |w_i f(x_i)|`, where the value is
/// `sum_i w_i f(x_i)` over the `k + 1` grid points. Relative errors in the
/// values of `f` reach the result multiplied by `magnitude`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridValue {
    pub value: C64,
    pub magnitude: f64,
}

/// [`apply_dk`] times `prod scales`, with `scales[d - 1]` applied after level
/// `d`. Normalising as the grid is filled keeps the intermediate values in
/// range where `D^{(k)} f` itself would overflow.
pub fn apply_dk_scaled(f: &SymmetricFunction, op: &OperatorSpec, k: usize, z: C64, scales: &[C64]) -> Result<GridValue> {
    if scales.len() != k {
        return Err(Error::InvalidArgument(format!("{} level scales for k = {k}", scales.len())));
    }
    if k == 0 {
        let value = f.eval(z)?;
        return Ok(GridValue { value, magnitude: value.norm() });
    }
    let s = op.params.sqrt_q();
    let k_i = k as i32;
    // Level 0: f at m = -k, -k + 2, ..., k.
    let mut level: Vec<C64> = (0..=k_i)
        .map(|i| f.eval(z * s.powi(-k_i + 2 * i)))
        .collect::<Result<_>>()?;
    let mut mags: Vec<f64> = level.iter().map(|v| v.norm()).collect();
    let mut current = *op;
    for depth in 1..=k_i {
        let width = k_i - depth;
        let scale = scales[depth as usize - 1];
        // Value at m uses the previous level at m + 1 (index i + 1) and m - 1 (index i).
        let mut next = Vec::with_capacity(width as usize + 1);
        let mut next_mags = Vec::with_capacity(width as usize + 1);
        for i in 0..=width as usize {
            let w = z * s.powi(-width + 2 * i as i32);
            let factor = current.prefactor(w)? * scale;
            next.push(factor * (level[i + 1] - level[i]));
            next_mags.push(factor.norm() * (mags[i + 1] + mags[i]));
        }
        level = next;
        mags = next_mags;
        current = current.advanced();
    }
    Ok(GridValue { value: level[0], magnitude: mags[0] })
}

/// `T_n(z) = (z^n + z^{-n})/2`.
pub fn chebyshev_t(n: i32, z: C64) -> C64 {
    (z.powi(n) + z.powi(-n)) * 0.5
}

/// `U_n(z) = (z^{n+1} - z^{-n-1})/(z - 1/z)` in the variable `x = (z + 1/z)/2`,
/// evaluated by the three-term recurrence so `z = +-1` needs no special case
/// (the limits are `n + 1` and `(-1)^n (n + 1)`).
pub fn chebyshev_u(n: i32, z: C64) -> C64 {
    let x = iota(z);
    let two_x = x * 2.0;
    if n < 0 {
        // U_{-1} = 0, U_{-n} = -U_{n-2}
        return if n == -1 { c(0.0, 0.0) } else { -chebyshev_u(-n - 2, z) };
    }
    let (mut prev, mut cur) = (c(1.0, 0.0), two_x);
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = two_x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}
