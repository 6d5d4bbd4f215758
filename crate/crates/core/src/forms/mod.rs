//! Cusp forms with exact integer coefficient tables: the discriminant form at
//! level 1 and weight-2 newforms attached to elliptic curves.

mod curve;
mod delta;

use std::io::Write;
use std::sync::{Arc, RwLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{power_exp_tail, truncation_point, CompensatedSum};
use crate::error::{Error, Result};

pub use curve::EllipticCurveModel;

/// Largest coefficient index a form will compute on demand unless configured otherwise.
pub const DEFAULT_COEFFICIENT_CEILING: usize = 200_000;

/// Eigenvalue of the Fricke involution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum CoefficientSource {
    Delta,
    Curve(EllipticCurveModel),
}

/// Exact coefficients `a(0..len)` (index 0 unused) and their binary64 images.
#[derive(Debug, Default)]
pub struct CoefficientTable {
    pub exact: Vec<i128>,
    pub real: Vec<f64>,
}

impl CoefficientTable {
    fn from_exact(exact: Vec<i128>) -> Self {
        let real = exact.iter().map(|&a| a as f64).collect();
        Self { exact, real }
    }

    /// Largest `n` stored.
    pub fn n_max(&self) -> usize {
        self.exact.len().saturating_sub(1)
    }
}

/// A normalized Hecke eigenform of even weight `k` on `Gamma_0(N)`.
///
/// The coefficient table grows on demand behind a lock, so a shared `&CuspForm`
/// can be used from several threads; pre-extending with [`CuspForm::ensure`]
/// avoids contention in parallel sections.
#[derive(Debug)]
pub struct CuspForm {
    weight: u32,
    level: u64,
    label: String,
    source: CoefficientSource,
    fricke: Option<Sign>,
    ceiling: usize,
    table: RwLock<Arc<CoefficientTable>>,
}

impl Clone for CuspForm {
    fn clone(&self) -> Self {
        Self {
            weight: self.weight,
            level: self.level,
            label: self.label.clone(),
            source: self.source.clone(),
            fricke: self.fricke,
            ceiling: self.ceiling,
            table: RwLock::new(self.table()),
        }
    }
}

/// Ramanujan's `Delta`, weight 12, level 1, with `tau(1..=n_max)` precomputed.
pub fn delta_coefficients(n_max: usize) -> Result<CuspForm> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    let exact = delta::ramanujan_tau(n_max)?;
    Ok(CuspForm {
        weight: 12,
        level: 1,
        label: "delta".into(),
        source: CoefficientSource::Delta,
        fricke: Some(Sign::Plus),
        ceiling: DEFAULT_COEFFICIENT_CEILING.max(n_max),
        table: RwLock::new(Arc::new(CoefficientTable::from_exact(exact))),
    })
}

/// The weight-2 newform of level `conductor` attached to `curve`.
pub fn newform_from_curve(curve: EllipticCurveModel, n_max: usize) -> Result<CuspForm> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    curve.validate()?;
    let exact = curve::curve_coefficients(&curve, n_max)?;
    Ok(CuspForm {
        weight: 2,
        level: curve.conductor,
        label: format!(
            "curve[{},{},{},{},{}]:{}",
            curve.a1, curve.a2, curve.a3, curve.a4, curve.a6, curve.conductor
        ),
        source: CoefficientSource::Curve(curve),
        fricke: None,
        ceiling: DEFAULT_COEFFICIENT_CEILING.max(n_max),
        table: RwLock::new(Arc::new(CoefficientTable::from_exact(exact))),
    })
}

impl CuspForm {
    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn source(&self) -> &CoefficientSource {
        &self.source
    }

    pub fn fricke_eigenvalue(&self) -> Option<Sign> {
        self.fricke
    }

    /// Record a known Fricke eigenvalue. For level 1 only `Plus` is accepted.
    pub fn set_fricke_eigenvalue(&mut self, sign: Sign) -> Result<()> {
        if self.level == 1 && sign != Sign::Plus {
            return Err(Error::InvalidArgument("level-1 forms have Fricke eigenvalue +1".into()));
        }
        self.fricke = Some(sign);
        Ok(())
    }

    pub fn coefficient_ceiling(&self) -> usize {
        self.ceiling
    }

    pub fn set_coefficient_ceiling(&mut self, ceiling: usize) {
        self.ceiling = ceiling.max(1);
    }

    /// Snapshot of the current table.
    pub fn table(&self) -> Arc<CoefficientTable> {
        self.table.read().expect("coefficient lock poisoned").clone()
    }

    /// Table holding at least `a(1..=n)`, extending it if necessary.
    pub fn ensure(&self, n: usize) -> Result<Arc<CoefficientTable>> {
        let current = self.table();
        if current.n_max() >= n {
            return Ok(current);
        }
        if n > self.ceiling {
            return Err(Error::PrecisionUnreachable { needed: n, ceiling: self.ceiling });
        }
        let mut guard = self.table.write().expect("coefficient lock poisoned");
        if guard.n_max() >= n {
            return Ok(guard.clone());
        }
        let target = n.max(2 * guard.n_max()).min(self.ceiling);
        let exact = match &self.source {
            CoefficientSource::Delta => delta::ramanujan_tau(target)?,
            CoefficientSource::Curve(curve) => curve::curve_coefficients(curve, target)?,
        };
        *guard = Arc::new(CoefficientTable::from_exact(exact));
        Ok(guard.clone())
    }

    /// Exact coefficient `a(n)`.
    pub fn coefficient(&self, n: usize) -> Result<i128> {
        if n == 0 {
            return Err(Error::InvalidArgument("coefficients are indexed from 1".into()));
        }
        Ok(self.ensure(n)?.exact[n])
    }

    /// Upper bound `2 n^(k/2)` for `|a(n)|`, from `d(n) <= 2 sqrt(n)` and Deligne.
    pub(crate) fn coefficient_bound_exponent(&self) -> f64 {
        self.weight as f64 / 2.0
    }

    /// Write `n,a(n)` rows for `1..=n_max` with a header.
    pub fn write_coefficients_csv<W: Write>(&self, n_max: usize, out: W) -> Result<()> {
        let table = self.ensure(n_max)?;
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::InvalidArgument(format!("csv output failed: {e}"));
        w.write_record(["n", "a"]).map_err(io)?;
        for n in 1..=n_max {
            w.write_record([n.to_string(), table.exact[n].to_string()]).map_err(io)?;
        }
        w.flush()
            .map_err(|e| Error::InvalidArgument(format!("csv output failed: {e}")))?;
        Ok(())
    }
}

/// `f(z) = sum a(n) e(nz)`, truncated where the Deligne tail drops below `eps`.
pub fn evaluate_form(f: &CuspForm, z: Complex64, eps: f64) -> Result<Complex64> {
    if !(z.im > 0.0) {
        return Err(Error::Domain(format!("evaluate_form needs Im z > 0, got {}", z.im)));
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    let alpha = std::f64::consts::TAU * z.im;
    let p = f.coefficient_bound_exponent();
    let bound = |m: usize| 2.0 * power_exp_tail(p, alpha, m);
    let n_max = truncation_point(bound, eps, f.coefficient_ceiling()).ok_or(
        Error::PrecisionUnreachable {
            needed: usize::MAX,
            ceiling: f.coefficient_ceiling(),
        },
    )?;
    let table = f.ensure(n_max)?;
    let step = Complex64::from_polar((-alpha).exp(), std::f64::consts::TAU * z.re.rem_euclid(1.0));
    let mut acc = CompensatedSum::new();
    let mut q_n = Complex64::new(1.0, 0.0);
    for n in 1..=n_max {
        // recompute the power periodically to bound drift
        q_n = if n % 64 == 0 {
            Complex64::from_polar(
                (-alpha * n as f64).exp(),
                std::f64::consts::TAU * (n as f64 * z.re).rem_euclid(1.0),
            )
        } else {
            q_n * step
        };
        acc.add(q_n * table.real[n]);
    }
    Ok(acc.value())
}

const FRICKE_TOLERANCE: f64 = 1e-6;
const FRICKE_FLOOR: f64 = 1e-12;

/// Fricke eigenvalue by the ratio `N^(-k/2) z^(-k) f(-1/(Nz)) / f(z)`, stored on `f`.
pub fn fricke_eigenvalue(f: &mut CuspForm) -> Result<Sign> {
    if f.level == 1 {
        f.fricke = Some(Sign::Plus);
        return Ok(Sign::Plus);
    }
    let n = f.level as f64;
    let k = f.weight as i32;
    let root = n.sqrt();
    let candidates = [
        Complex64::new(0.0, 2.0 / root),
        Complex64::new(0.13, 1.7 / root),
        Complex64::new(-0.21, 2.4 / root),
        Complex64::new(0.37, 1.3 / root),
    ];
    for z in candidates {
        let fz = evaluate_form(f, z, 1e-15)?;
        if fz.norm() < FRICKE_FLOOR {
            continue;
        }
        let w = -1.0 / (z * n);
        let fw = evaluate_form(f, w, 1e-15)?;
        let ratio = fw * z.powi(-k) * n.powf(-(k as f64) / 2.0) / fz;
        let sign = if ratio.re >= 0.0 { Sign::Plus } else { Sign::Minus };
        if (ratio - sign.value()).norm() >= FRICKE_TOLERANCE {
            return Err(Error::NotFrickeEigenform { re: ratio.re, im: ratio.im });
        }
        f.fricke = Some(sign);
        return Ok(sign);
    }
    Err(Error::DegenerateTestPoint)
}
