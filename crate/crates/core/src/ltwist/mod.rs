//! Additive twists `L(f (x) e(r), s) = sum a(n) e(nr) n^(-s)` at rational cusps.
//!
//! The Mellin integral of `f(r + iy)` is split at height `y0 = t/C` and the
//! lower half is mapped through the unfolding matrix, giving two rapidly
//! convergent incomplete-gamma series. A plain Dirichlet sum serves as an
//! oracle where it converges absolutely.

pub mod cusp;
pub mod gamma;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;

use crate::arith::{divisor_bound_constant, power_exp_tail, roots_of_unity, truncation_point, CompensatedSum};
use crate::characters::{gauss_sum, DirichletCharacter};
use crate::error::{Error, Result};
use crate::forms::CuspForm;

pub use cusp::{build_unfolding_matrix, Coset, CuspPoint, ModularMatrix, Rational, UnfoldingMatrix};
pub use gamma::{exp_integral_e1, gamma as gamma_fn, ln_gamma, upper_incomplete_gamma};

use gamma::upper_gamma_kernel;

const TAU: f64 = std::f64::consts::TAU;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: Complex64,
    pub s: f64,
    pub r: CuspPoint,
    pub n_max_used: usize,
    pub tail_bound: f64,
}

/// Which normalization the two-series sum is scaled to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Scale {
    /// `L(f (x) e(r), s)`.
    Dirichlet,
    /// `(C/2pi)^s Gamma(s) L(f (x) e(r), s)`.
    Completed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct KernelKey {
    c: u64,
    s: u64,
    split: u64,
    scale: Scale,
}

/// Phase-independent weights of both series for one `(C, s, t)`.
#[derive(Debug)]
struct Kernel {
    first: Vec<f64>,
    second: Vec<f64>,
    tail: f64,
}

/// Evaluates additive twists of one form at a fixed target accuracy, caching
/// the incomplete-gamma weights shared by all numerators of a denominator.
#[derive(Debug)]
pub struct TwistEvaluator<'f> {
    form: &'f CuspForm,
    eps: f64,
    kernels: Mutex<HashMap<KernelKey, Arc<Kernel>>>,
    values: Mutex<HashMap<(u64, u64, u64), EvalResult>>,
}

impl<'f> TwistEvaluator<'f> {
    pub fn new(form: &'f CuspForm, eps: f64) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(Error::InvalidArgument("eps must be positive".into()));
        }
        Ok(Self {
            form,
            eps,
            kernels: Mutex::new(HashMap::new()),
            values: Mutex::new(HashMap::new()),
        })
    }

    pub fn form(&self) -> &'f CuspForm {
        self.form
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// `L(f (x) e(r), s)` for `s > 0`.
    /// Values are cached per `(a mod c, c, s)`.
    pub fn twist(&self, r: &CuspPoint, s: f64) -> Result<EvalResult> {
        let key = (r.canonical_numerator(), r.denominator(), s.to_bits());
        if let Some(v) = self.values.lock().expect("value cache poisoned").get(&key) {
            return Ok(EvalResult { r: *r, ..*v });
        }
        let m = build_unfolding_matrix(r, self.form.level())?;
        let v = self.twist_with_matrix(&m, s, 1.0)?;
        self.values.lock().expect("value cache poisoned").insert(key, v);
        Ok(EvalResult { r: *r, ..v })
    }

    /// `L(f (x) e(M oo), s)` through a given unfolding matrix and split `y0 = t/C`.
    /// For `s >= k` the second series has a nonpositive incomplete-gamma order.
    pub fn twist_with_matrix(&self, m: &UnfoldingMatrix, s: f64, split: f64) -> Result<EvalResult> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::Domain(format!("the unfolded series needs s > 0, got {s}")));
        }
        self.evaluate(m, s, split, Scale::Dirichlet)
    }

    /// `Lambda(r, s) = (C/2pi)^s Gamma(s) L(f (x) e(r), s)` for `0 <= s <= k`,
    /// with `C` the normalized lower-left entry of `m`.
    pub fn completed(&self, m: &UnfoldingMatrix, s: f64, split: f64) -> Result<EvalResult> {
        let k = self.form.weight() as f64;
        if !(s >= 0.0 && s <= k) {
            return Err(Error::Domain(format!("completed twist needs 0 <= s <= {k}, got {s}")));
        }
        self.evaluate(m, s, split, Scale::Completed)
    }

    fn epsilon(&self, m: &UnfoldingMatrix) -> Result<f64> {
        match m.coset {
            Coset::Gamma0 => Ok(1.0),
            Coset::Fricke => self
                .form
                .fricke_eigenvalue()
                .map(|w| w.value())
                .ok_or(Error::FrickeEigenvalueUnset),
        }
    }

    fn evaluate(&self, m: &UnfoldingMatrix, s: f64, split: f64, scale: Scale) -> Result<EvalResult> {
        if m.level != self.form.level() {
            return Err(Error::InvalidArgument(format!(
                "matrix level {} differs from form level {}",
                m.level,
                self.form.level()
            )));
        }
        if !(split > 0.0 && split.is_finite()) {
            return Err(Error::InvalidArgument("split must be positive".into()));
        }
        let eps_sign = self.epsilon(m)?;
        let c = m.normalized_c();
        let kernel = self.kernel(c, s, split, scale)?;
        let r = m.cusp();
        let r_star = m.second_cusp();
        let first = phase_sum(&kernel.first, &r);
        let second = phase_sum(&kernel.second, &r_star);
        let k = self.form.weight();
        let i_k = if k % 4 == 0 { 1.0 } else { -1.0 };
        Ok(EvalResult {
            value: first + second * (eps_sign * i_k),
            s,
            r,
            n_max_used: kernel.first.len().max(kernel.second.len()).saturating_sub(1),
            tail_bound: kernel.tail,
        })
    }

    fn kernel(&self, c: f64, s: f64, split: f64, scale: Scale) -> Result<Arc<Kernel>> {
        let key = KernelKey { c: c.to_bits(), s: s.to_bits(), split: split.to_bits(), scale };
        if let Some(k) = self.kernels.lock().expect("kernel cache poisoned").get(&key) {
            return Ok(k.clone());
        }
        let kernel = Arc::new(self.build_kernel(c, s, split, scale)?);
        self.kernels
            .lock()
            .expect("kernel cache poisoned")
            .insert(key, kernel.clone());
        Ok(kernel)
    }

    fn build_kernel(&self, c: f64, s: f64, split: f64, scale: Scale) -> Result<Kernel> {
        let k = self.form.weight() as f64;
        let (scale1, scale2) = match scale {
            Scale::Dirichlet => {
                let p = TAU.powf(s) / gamma::gamma(s);
                (p, p * c.powf(k - 2.0 * s))
            }
            Scale::Completed => (c.powf(s), c.powf(k - s)),
        };
        let alpha = TAU * split / c;
        let beta = TAU / (split * c);
        let target = self.eps / 2.0;
        let ceiling = self.form.coefficient_ceiling();
        let n1 = series_length(k, s, alpha, scale1 * TAU.powf(-s), target, ceiling)?;
        let n2 = series_length(k, k - s, beta, scale2 * TAU.powf(s - k), target, ceiling)?;
        let table = self.form.ensure(n1.0.max(n2.0))?;
        let weights = |len: usize, order: f64, x_step: f64, factor: f64| -> Result<Vec<f64>> {
            let mut w = vec![0.0; len + 1];
            for n in 1..=len {
                let a = table.real[n];
                if a == 0.0 {
                    continue;
                }
                let nf = n as f64;
                let g = upper_gamma_kernel(order, x_step * nf)?;
                w[n] = factor * a * (TAU * nf).powf(-order) * g;
            }
            Ok(w)
        };
        let first = weights(n1.0, s, alpha, scale1)?;
        let second = weights(n2.0, k - s, beta, scale2)?;
        Ok(Kernel { first, second, tail: n1.1 + n2.1 })
    }
}

/// Smallest `m` with `factor * sum_{n>m} 2 n^(k/2) (2pi n)^(-sigma) Gamma(sigma, x n)`
/// below `target`, written as `n^(k/2 - sigma)` against `(2pi)^(-sigma)` already in `factor`.
/// Returns `(m, bound)`.
fn series_length(k: f64, sigma: f64, x: f64, factor: f64, target: f64, ceiling: usize) -> Result<(usize, f64)> {
    // Gamma(sigma, y) <= K y^(sigma-1) e^(-y) with K = 1 for sigma <= 1 and
    // K = 1 / (1 - (sigma-1)/y) once y > sigma - 1.
    let bound = |m: usize| -> f64 {
        let y0 = x * (m + 1) as f64;
        let kk = if sigma <= 1.0 {
            1.0
        } else if y0 > sigma - 1.0 {
            1.0 / (1.0 - (sigma - 1.0) / y0)
        } else {
            return f64::INFINITY;
        };
        2.0 * factor.abs() * kk * x.powf(sigma - 1.0) * power_exp_tail(k / 2.0 - 1.0, x, m)
    };
    match truncation_point(bound, target, ceiling) {
        Some(m) => Ok((m, bound(m))),
        None => Err(Error::PrecisionUnreachable { needed: usize::MAX, ceiling }),
    }
}

/// `sum_n w[n] e(n r)` with phases from exact residues `n a mod c`.
fn phase_sum(weights: &[f64], r: &CuspPoint) -> Complex64 {
    let c = r.denominator().max(1);
    let a = r.canonical_numerator();
    let roots = roots_of_unity(c);
    let mut acc = CompensatedSum::new();
    let mut idx = 0u64;
    for &w in weights.iter().skip(1) {
        idx = (idx + a) % c;
        if w != 0.0 {
            acc.add(roots[idx as usize] * w);
        }
    }
    acc.value()
}

/// `L(f (x) e(r), s)` at a cusp of `f`'s level, to absolute accuracy `eps`.
pub fn additive_twist(f: &CuspForm, r: &CuspPoint, s: f64, eps: f64) -> Result<EvalResult> {
    TwistEvaluator::new(f, eps)?.twist(r, s)
}

/// Twisting point for the direct Dirichlet sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TwistPoint {
    Rational(CuspPoint),
    Real(f64),
}

impl From<CuspPoint> for TwistPoint {
    fn from(r: CuspPoint) -> Self {
        TwistPoint::Rational(r)
    }
}

impl From<f64> for TwistPoint {
    fn from(r: f64) -> Self {
        TwistPoint::Real(r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectSum {
    pub value: Complex64,
    pub n_terms: usize,
    pub tail_bound: f64,
}

/// Partial sum `sum_{n <= n_terms} a(n) e(nr) n^(-s)` for `s > (k+1)/2 + 1/4`.
pub fn additive_twist_direct(f: &CuspForm, r: impl Into<TwistPoint>, s: f64, n_terms: usize) -> Result<DirectSum> {
    let k = f.weight() as f64;
    let margin = s - (k + 1.0) / 2.0;
    if !(margin > 0.25) {
        return Err(Error::Domain(format!(
            "direct sum needs s > {}, got {s}; use additive_twist",
            (k + 1.0) / 2.0 + 0.25
        )));
    }
    if n_terms == 0 {
        return Err(Error::InvalidArgument("n_terms must be positive".into()));
    }
    let table = f.ensure(n_terms)?;
    let mut acc = CompensatedSum::new();
    match r.into() {
        TwistPoint::Rational(r) => {
            if r.is_infinity() {
                return Err(Error::InvalidArgument("oo is not a twisting point".into()));
            }
            let c = r.denominator();
            let a = r.canonical_numerator();
            let roots = roots_of_unity(c);
            let mut idx = 0u64;
            for n in 1..=n_terms {
                idx = (idx + a) % c;
                acc.add(roots[idx as usize] * (table.real[n] * (n as f64).powf(-s)));
            }
        }
        TwistPoint::Real(x) => {
            let x = x.rem_euclid(1.0);
            for n in 1..=n_terms {
                let phase = Complex64::from_polar(1.0, TAU * (n as f64 * x).rem_euclid(1.0));
                acc.add(phase * (table.real[n] * (n as f64).powf(-s)));
            }
        }
    }
    // d(n) <= K n^delta, |a(n)| <= d(n) n^((k-1)/2)
    let delta = (margin / 2.0).min(0.5);
    let kd = divisor_bound_constant(delta);
    let expo = margin - delta;
    let tail_bound = kd * (n_terms as f64).powf(-expo) / expo;
    Ok(DirectSum { value: acc.value(), n_terms, tail_bound })
}

/// `L(f (x) chi, s) = (1 / tau(conj chi)) sum_{a mod c} conj(chi)(a) L(f (x) e(a/c), s)`
/// for primitive `chi` mod `c`.
pub fn multiplicative_twist_central(f: &CuspForm, chi: &DirichletCharacter, s: f64, eps: f64) -> Result<Complex64> {
    multiplicative_twist(&TwistEvaluator::new(f, eps)?, chi, s)
}

/// [`multiplicative_twist_central`] on a shared evaluator.
pub fn multiplicative_twist(ev: &TwistEvaluator<'_>, chi: &DirichletCharacter, s: f64) -> Result<Complex64> {
    if !chi.is_primitive() {
        return Err(Error::InvalidArgument(format!(
            "character mod {} is not primitive (conductor {})",
            chi.modulus(),
            chi.conductor()
        )));
    }
    let c = chi.modulus();
    if c == 1 {
        return Ok(ev.twist(&CuspPoint::integer(0), s)?.value);
    }
    let chi_bar = chi.conj();
    let mut acc = CompensatedSum::new();
    for a in 1..c as i64 {
        let v = chi_bar.value(a);
        if v.norm() == 0.0 {
            continue;
        }
        let r = CuspPoint::new(a, c as i64)?;
        acc.add(v * ev.twist(&r, s)?.value);
    }
    Ok(acc.value() / gauss_sum(&chi_bar))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::delta_coefficients;

    #[test]
    fn central_value_of_delta() {
        let f = delta_coefficients(100).unwrap();
        let v = additive_twist(&f, &CuspPoint::integer(0), 6.0, 1e-13).unwrap();
        assert!((v.value.re - 0.792_122_6).abs() < 1e-6, "{:?}", v.value);
        assert!(v.value.im.abs() < 1e-13);
        assert!(v.tail_bound <= 1e-13);
    }

    #[test]
    fn shift_invariance_is_exact() {
        let f = delta_coefficients(100).unwrap();
        let ev = TwistEvaluator::new(&f, 1e-12).unwrap();
        let r: CuspPoint = "2/7".parse().unwrap();
        assert_eq!(ev.twist(&r, 6.0).unwrap().value, ev.twist(&r.shift(1), 6.0).unwrap().value);
    }

    #[test]
    fn s_range_is_checked() {
        let f = delta_coefficients(10).unwrap();
        assert!(matches!(additive_twist(&f, &CuspPoint::integer(0), 0.0, 1e-9), Err(Error::Domain(_))));
        assert!(matches!(
            additive_twist_direct(&f, 0.25, 6.7, 100),
            Err(Error::Domain(_))
        ));
    }
}
