//! Taylor expansion in well-poised monomials.
//!
//! A function in `W_c^n` (an even theta function of order `2n` divided by
//! `(cz, c/z; q, p)_n`) is written as
//! `f(z) = sum_k f_k (az, a/z; q, p)_k / (cz, c/z; q, p)_k` with
//!
//! `f_k = (-1)^k q^{-k(k-1)/4} theta(q)^k / ((2a)^k (q, c/a, acq^{k-1}; q, p)_k)
//!        * [D^{(k)}_{c,q,p} f](a q^{k/2})`.
//!
//! With `c = p = 0` the basis is the Askey-Wilson monomials and the formula is
//! Ismail's polynomial Taylor theorem.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cnum::{c, cdiv, C64};
use crate::error::{Error, Result};
use crate::operator::{apply_dk_scaled, GridValue, OperatorSpec, SymmetricFunction};
use crate::qtheta::{q_half_power, qpoch_product, theta_factor, EllipticParams};

/// Smallest admissible modulus of `(c/a; q, p)_k` and `(acq^{k-1}; q, p)_k`.
pub const GENERICITY_TOL: f64 = 1e-10;
/// Reconstruction tolerance used by [`expand`].
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-9;
/// Collocation matrices with a 1-norm condition estimate above this are rejected.
pub const MAX_CONDITION: f64 = 1e12;

/// Draw ranges of [`sample_basis`]: base modulus, nome modulus, anchor modulus.
pub const SAMPLE_Q_RANGE: (f64, f64) = (0.3, 0.5);
pub const SAMPLE_P_MAX: f64 = 0.1;
pub const SAMPLE_ANCHOR_RANGE: (f64, f64) = (0.85, 1.15);
/// Bases with a larger [`ExpansionBasis::conditioning`] are redrawn by [`sample_basis`].
pub const SAMPLE_MAX_CONDITIONING: f64 = 1e4;

const VALIDATION_SEED: u64 = 0x7a11_0e5e;
const MEMBERSHIP_SEED: u64 = 0x3e3b_e125;
const ORACLE_RADII: [f64; 4] = [1.1, 1.17, 1.25, 0.93];
const ORACLE_SPREADS: [f64; 4] = [0.25, 0.5, 0.75, 1.0];

/// Condition estimate, nodes, equilibrated matrix and row scales.
type OracleFit = (f64, Vec<C64>, DMatrix<C64>, Vec<f64>);

/// Anchors `a` (numerator) and `c` (denominator) of the basis of `W_c^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionBasis {
    a: C64,
    c: C64,
    n: usize,
    params: EllipticParams,
}

impl ExpansionBasis {
    pub fn new(a: C64, c: C64, n: usize, params: EllipticParams) -> Result<Self> {
        if a.norm() == 0.0 {
            return Err(Error::DegenerateBasis("a = 0"));
        }
        if !params.is_basic() && c.norm() == 0.0 {
            return Err(Error::DegenerateBasis("c = 0 requires p = 0"));
        }
        if theta_factor(params.q(), &params).norm() < params.zero_tol() {
            return Err(Error::DegenerateBasis("theta(q; p) vanishes"));
        }
        let q = params.q();
        for k in 1..=n as i64 {
            let ca = qpoch_product(&[c / a], k, &params)?.value;
            if ca.norm() < GENERICITY_TOL {
                return Err(Error::DegenerateBasis("(c/a; q, p)_k vanishes"));
            }
            let ac = qpoch_product(&[a * c * q.powi(k as i32 - 1)], k, &params)?.value;
            if ac.norm() < GENERICITY_TOL {
                return Err(Error::DegenerateBasis("(acq^{k-1}; q, p)_k vanishes"));
            }
        }
        Ok(Self { a, c, n, params })
    }

    pub fn a(&self) -> C64 {
        self.a
    }
    pub fn c(&self) -> C64 {
        self.c
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn params(&self) -> EllipticParams {
        self.params
    }

    /// The same anchors with a different degree.
    pub fn with_degree(&self, n: usize) -> Result<Self> {
        Self::new(self.a, self.c, n, self.params)
    }

    /// Largest [`ExpansionReport::sensitivity`] over the expansions of the
    /// basis elements themselves: how strongly the coefficient formula
    /// amplifies rounding on this basis.
    pub fn conditioning(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for m in 0..=self.n {
            for g in coefficient_grid(&basis_element(self, m)?, self)? {
                worst = worst.max(g.magnitude);
            }
        }
        Ok(worst)
    }

    pub fn operator(&self) -> OperatorSpec {
        OperatorSpec::new(self.c, self.params)
    }

    /// `(az, a/z; q, p)_k / (cz, c/z; q, p)_k` at `z`.
    pub fn element_value(&self, k: usize, z: C64) -> Result<C64> {
        if k > self.n {
            return Err(Error::DegreeOutOfRange { k, n: self.n });
        }
        element(self.a, self.c, k, z, &self.params)
    }

    /// Values of all `n + 1` basis elements at `z`, built incrementally.
    pub fn values(&self, z: C64) -> Result<Vec<C64>> {
        if z.norm() == 0.0 {
            return Err(Error::SingularPoint("z = 0"));
        }
        let ps = &self.params;
        let q = ps.q();
        let mut out = Vec::with_capacity(self.n + 1);
        let mut acc = c(1.0, 0.0);
        let mut qj = c(1.0, 0.0);
        out.push(acc);
        for _ in 0..self.n {
            acc *= element(self.a * qj, self.c * qj, 1, z, ps)?;
            qj *= q;
            out.push(acc);
        }
        Ok(out)
    }
}

/// Accumulated as a product of factor ratios: the numerator and denominator
/// separately overflow at the grid points far from the unit circle.
fn element(a: C64, cc: C64, k: usize, z: C64, ps: &EllipticParams) -> Result<C64> {
    if z.norm() == 0.0 {
        return Err(Error::SingularPoint("z = 0"));
    }
    let q = ps.q();
    let mut acc = c(1.0, 0.0);
    let mut qj = c(1.0, 0.0);
    for _ in 0..k {
        let den = theta_factor(cc * qj * z, ps) * theta_factor(cc * qj / z, ps);
        if den.norm() < ps.zero_tol() {
            return Err(Error::SingularPoint("pole of a basis element"));
        }
        acc *= cdiv(theta_factor(a * qj * z, ps) * theta_factor(a * qj / z, ps), den);
        qj *= q;
    }
    Ok(acc)
}

/// The well-poised monomial of degree `k` as a function.
pub fn basis_element(basis: &ExpansionBasis, k: usize) -> Result<SymmetricFunction> {
    if k > basis.n {
        return Err(Error::DegreeOutOfRange { k, n: basis.n });
    }
    let (a, cc, ps) = (basis.a, basis.c, basis.params);
    Ok(SymmetricFunction::new(move |z| element(a, cc, k, z, &ps)))
}

/// `sum_k w_k * basis_element(k)`.
pub fn basis_combination(basis: &ExpansionBasis, weights: &[C64]) -> Result<SymmetricFunction> {
    if weights.len() > basis.n + 1 {
        return Err(Error::DegreeOutOfRange { k: weights.len() - 1, n: basis.n });
    }
    let b = *basis;
    let w = weights.to_vec();
    Ok(SymmetricFunction::new(move |z| {
        let vals = b.values(z)?;
        Ok(w.iter().zip(&vals).map(|(w, v)| w * v).sum())
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionReport {
    /// `f_0 ... f_n`.
    pub coefficients: Vec<C64>,
    pub basis: ExpansionBasis,
    /// Largest relative reconstruction error over the validation points.
    pub residual: f64,
    /// For each `f_k`, the summed size of the grid terms that cancel to it;
    /// rounding in the values of `f` costs about `1e-16 * sensitivity[k]`
    /// absolute accuracy in `f_k`.
    pub sensitivity: Vec<f64>,
}

impl ExpansionReport {
    /// The truncated expansion `sum_k f_k basis_element(k)(z)`.
    pub fn evaluate(&self, z: C64) -> Result<C64> {
        reconstruct(&self.coefficients, &self.basis, z)
    }
}

fn reconstruct(coeffs: &[C64], basis: &ExpansionBasis, z: C64) -> Result<C64> {
    let vals = basis.values(z)?;
    Ok(coeffs.iter().zip(&vals).map(|(f, v)| f * v).sum())
}

/// `max_j |f(z_j) - sum_k f_k b_k(z_j)| / max_j max(|f(z_j)|, sum_k |f_k b_k(z_j)|)`:
/// relative to the size of `f` over the whole point set, so a point near a
/// zero of `f` does not inflate the error.
fn reconstruction_error(f: &SymmetricFunction, coeffs: &[C64], basis: &ExpansionBasis, points: &[C64]) -> Result<f64> {
    let (mut err, mut scale): (f64, f64) = (0.0, 0.0);
    for &z in points {
        let vals = basis.values(z)?;
        let (mut sum, mut size) = (c(0.0, 0.0), 0.0);
        for (fk, v) in coeffs.iter().zip(&vals) {
            sum += fk * v;
            size += (fk * v).norm();
        }
        let exact = f.eval(z)?;
        err = err.max((exact - sum).norm());
        scale = scale.max(exact.norm()).max(size);
    }
    Ok(err / scale.max(1e-300))
}

fn sample_points(seed: u64, count: usize) -> Vec<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| C64::from_polar(rng.random_range(1.05..1.45), rng.random_range(0.0..std::f64::consts::TAU)))
        .collect()
}

/// Coefficients `f_0 ... f_n` from the iterated operator, without validation.
///
/// The normalisation of `f_k` is split across the operator levels: level `d`
/// is multiplied by `-theta(q) / (2a q^{(d-1)/2} theta(q^{k-d+1}, cq^{d-1}/a, acq^{k+d-2}))`,
/// the inverse of what one step contributes on the diagonal.
pub fn taylor_coefficients(f: &SymmetricFunction, basis: &ExpansionBasis) -> Result<Vec<C64>> {
    Ok(coefficient_grid(f, basis)?.into_iter().map(|g| g.value).collect())
}

fn coefficient_grid(f: &SymmetricFunction, basis: &ExpansionBasis) -> Result<Vec<GridValue>> {
    let ps = &basis.params;
    let op = basis.operator();
    let (a, cc, q) = (basis.a, basis.c, ps.q());
    let theta_q = theta_factor(q, ps);
    (0..=basis.n)
        .map(|k| {
            let ki = k as i32;
            let scales: Vec<C64> = (1..=ki)
                .map(|d| {
                    let den = theta_factor(q.powi(ki - d + 1), ps)
                        * theta_factor(cc * q.powi(d - 1) / a, ps)
                        * theta_factor(a * cc * q.powi(ki + d - 2), ps);
                    if den.norm() < ps.zero_tol() {
                        return Err(Error::DegenerateDivision("coefficient denominator (q, c/a, acq^{k-1})_k"));
                    }
                    Ok(cdiv(-theta_q, a * 2.0 * q_half_power(d as i64 - 1, ps) * den))
                })
                .collect::<Result<_>>()?;
            apply_dk_scaled(f, &op, k, a * q_half_power(k as i64, ps), &scales)
        })
        .collect()
}

/// Expands with the default reconstruction tolerance.
pub fn expand(f: &SymmetricFunction, basis: &ExpansionBasis) -> Result<ExpansionReport> {
    expand_with_tolerance(f, basis, DEFAULT_RESIDUAL_TOL)
}

/// Coefficients from the operator formula, validated by reconstructing `f` at
/// `n + 3` points off the evaluation grid.
pub fn expand_with_tolerance(f: &SymmetricFunction, basis: &ExpansionBasis, tol: f64) -> Result<ExpansionReport> {
    let grid = coefficient_grid(f, basis)?;
    let coefficients: Vec<C64> = grid.iter().map(|g| g.value).collect();
    let sensitivity = grid.iter().map(|g| g.magnitude).collect();
    let residual = reconstruction_error(f, &coefficients, basis, &sample_points(VALIDATION_SEED, basis.n + 3))?;
    if !(residual <= tol) {
        return Err(Error::ResidualTooLarge { residual, tolerance: tol });
    }
    Ok(ExpansionReport { coefficients, basis: *basis, residual, sensitivity })
}

/// Outcome of [`membership_check`]; each leg is reported separately.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Membership {
    /// `h(z) = h(1/z)` for `h = f (cz, c/z; q, p)_n`.
    pub symmetric: bool,
    /// `h(pz) = p^{-n} z^{-2n} h(z)`; not applicable when `p = 0`.
    pub quasi_periodic: Option<bool>,
    /// The expansion of degree `n` reconstructs `f` at fresh points.
    pub in_span: bool,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        self.symmetric && self.quasi_periodic.unwrap_or(true) && self.in_span
    }
}

/// Numerical test of `f` in `W_c^n` at `samples` pseudo-random points.
///
/// The quasi-periodicity factor of `h` is the same for every numerator order
/// reachable by a ratio of degree `m > n` (poles and extra zeros trade off), so
/// membership also requires the degree-`n` expansion to reproduce `f`.
pub fn membership_check(f: &SymmetricFunction, basis: &ExpansionBasis, samples: usize) -> Result<Membership> {
    if samples < 4 {
        return Err(Error::InvalidArgument("membership_check needs at least 4 samples".into()));
    }
    const TOL: f64 = 1e-9;
    let ps = &basis.params;
    let n = basis.n as i64;
    let cc = basis.c;
    let h = |z: C64| -> Result<C64> { Ok(f.eval(z)? * qpoch_product(&[cc * z, cc / z], n, ps)?.value) };
    let close = |x: C64, y: C64| (x - y).norm() <= TOL * x.norm().max(y.norm());
    let points = sample_points(MEMBERSHIP_SEED, samples);

    let mut symmetric = true;
    for &z in &points {
        symmetric &= close(h(z)?, h(z.inv())?);
    }
    let quasi_periodic = if ps.is_basic() {
        None
    } else {
        let p = ps.p();
        let mut ok = true;
        for &z in &points {
            let factor = (p * z * z).powi(-(n as i32));
            ok &= close(h(p * z)?, factor * h(z)?);
        }
        Some(ok)
    };
    let in_span = match taylor_coefficients(f, basis) {
        Ok(coeffs) => reconstruction_error(f, &coeffs, basis, &points)? <= TOL,
        Err(e) if e.is_degenerate() => false,
        Err(e) => return Err(e),
    };
    Ok(Membership { symmetric, quasi_periodic, in_span })
}

/// Coefficients by collocation: solves `f(z_j) = sum_k f_k b_k(z_j)` by LU
/// with column equilibration. Independent of the operator formula.
///
/// Node families are `z_j = r_j e^{i pi (2j+1)/(2n+3)}` with `r_j` on a circle
/// (`r = 1.1` and three perturbations) or spread geometrically,
/// `r_j = 1.1 |q|^{-gamma j}`; on a circle consecutive elements nearly
/// coincide once `|q|^k` is small, so the best-conditioned family is used.
pub fn expand_oracle(f: &SymmetricFunction, basis: &ExpansionBasis) -> Result<Vec<C64>> {
    let m = basis.n + 1;
    let qm = basis.params.q().norm();
    let families = ORACLE_RADII
        .iter()
        .map(|&r| (r, 0.0))
        .chain(ORACLE_SPREADS.iter().map(|&g| (ORACLE_RADII[0], g)));
    let mut best: Option<OracleFit> = None;
    for (r, gamma) in families {
        let points: Vec<C64> = (0..m)
            .map(|j| {
                let radius = r * qm.powf(-gamma * j as f64);
                C64::from_polar(radius, std::f64::consts::PI * (2 * j + 1) as f64 / (2 * basis.n + 3) as f64)
            })
            .collect();
        let rows = match points.iter().map(|&z| basis.values(z)).collect::<Result<Vec<_>>>() {
            Ok(rows) => rows,
            Err(Error::SingularPoint(_)) => continue,
            Err(e) => return Err(e),
        };
        let mut mat = DMatrix::from_fn(m, m, |j, k| rows[j][k]);
        let scales: Vec<f64> = (0..m)
            .map(|k| mat.column(k).iter().map(|x| x.norm()).fold(0.0, f64::max).max(1e-300))
            .collect();
        for (k, s) in scales.iter().enumerate() {
            mat.column_mut(k).scale_mut(s.recip());
        }
        let Some(inv) = mat.clone().lu().try_inverse() else {
            continue;
        };
        let cond = one_norm(&mat) * one_norm(&inv);
        if cond.is_finite() && best.as_ref().is_none_or(|b| cond < b.0) {
            best = Some((cond, points, mat, scales));
        }
    }
    let Some((cond, points, mat, scales)) = best else {
        return Err(Error::IllConditioned(f64::INFINITY));
    };
    if cond > MAX_CONDITION {
        return Err(Error::IllConditioned(cond));
    }
    let values = points.iter().map(|&z| f.eval(z)).collect::<Result<Vec<_>>>()?;
    let rhs = nalgebra::DVector::from_vec(values);
    let sol = mat.lu().solve(&rhs).ok_or(Error::IllConditioned(cond))?;
    Ok(sol.iter().zip(&scales).map(|(x, s)| x / *s).collect())
}

fn one_norm(m: &DMatrix<C64>) -> f64 {
    m.column_iter().map(|col| col.iter().map(|x| x.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// A generic basis of degree `n` with `conditioning() <= SAMPLE_MAX_CONDITIONING`,
/// drawn with uniform phases and moduli in the `SAMPLE_*` ranges (`p = 0`
/// unless `elliptic`). Also returns the number of draws used.
pub fn sample_basis(rng: &mut impl Rng, n: usize, elliptic: bool, max_draws: usize) -> Result<(ExpansionBasis, usize)> {
    let mut polar = |lo: f64, hi: f64| C64::from_polar(rng.random_range(lo..hi), rng.random_range(0.0..std::f64::consts::TAU));
    for draw in 1..=max_draws {
        let q = polar(SAMPLE_Q_RANGE.0, SAMPLE_Q_RANGE.1);
        let p = if elliptic { polar(0.0, SAMPLE_P_MAX) } else { c(0.0, 0.0) };
        let (lo, hi) = SAMPLE_ANCHOR_RANGE;
        let (a, cc) = (polar(lo, hi), polar(lo, hi));
        let Ok(basis) = EllipticParams::new(q, p).and_then(|ps| ExpansionBasis::new(a, cc, n, ps)) else {
            continue;
        };
        match basis.conditioning() {
            Ok(k) if k <= SAMPLE_MAX_CONDITIONING => return Ok((basis, draw)),
            Ok(_) => {}
            Err(e) if e.is_degenerate() => {}
            Err(e) => return Err(e),
        }
    }
    Err(Error::SamplingExhausted(max_draws))
}

/// `(bz, b/z; q, p)_n / (cz, c/z; q, p)_n` for the anchors of `basis`.
pub fn wp_ratio(b: C64, basis: &ExpansionBasis) -> SymmetricFunction {
    let (cc, n, ps) = (basis.c, basis.n, basis.params);
    SymmetricFunction::new(move |z| element(b, cc, n, z, &ps))
}

/// Closed-form coefficients of [`wp_ratio`]: the terms of the `10V9` sum
/// `(ab, b/a)_n / (ac, c/a)_n * theta(acq^{2k-1}) / theta(acq^{-1})
///  * (acq^{-1}, c/b, bcq^{n-1}, q^{-n})_k / (q, ab, aq^{1-n}/b, acq^n)_k * q^k`.
pub fn wp_ratio_coefficients(b: C64, basis: &ExpansionBasis) -> Result<Vec<C64>> {
    let ps = &basis.params;
    let (a, cc, n) = (basis.a, basis.c, basis.n as i64);
    let q = ps.q();
    let ni = n as i32;
    let lead = qpoch_product(&[a * b, b / a], n, ps)?.value
        / qpoch_product(&[a * cc, cc / a], n, ps)?.divisor("(ac, c/a)_n")?;
    let th = |x: C64| theta_factor(x, ps);
    let ac_q = a * cc / q;
    let base = th(ac_q);
    if base.norm() < ps.zero_tol() {
        return Err(Error::DegenerateDivision("theta(acq^{-1})"));
    }
    (0..=n)
        .map(|k| {
            let vwp = th(ac_q * q.powi(2 * k as i32)) / base;
            let num = qpoch_product(&[ac_q, cc / b, b * cc * q.powi(ni - 1), q.powi(-ni)], k, ps)?.value;
            let den = qpoch_product(&[q, a * b, a * q.powi(1 - ni) / b, a * cc * q.powi(ni)], k, ps)?
                .divisor("(q, ab, aq^{1-n}/b, acq^n)_k")?;
            Ok(lead * vwp * num / den * q.powi(k as i32))
        })
        .collect()
}
