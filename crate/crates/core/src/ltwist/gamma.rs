//! Gamma and upper incomplete gamma on the positive real axis.

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const MAX_ITER: usize = 1000;
const FPMIN: f64 = 1e-300;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn as_small_positive_integer(s: f64) -> Option<u32> {
    (s >= 1.0 && s <= 40.0 && s.fract() == 0.0).then_some(s as u32)
}

fn factorial(m: u32) -> f64 {
    (1..=m).map(f64::from).product()
}

/// Gamma function for `s > 0`. Exact products at small integers, Lanczos otherwise.
pub fn gamma(s: f64) -> f64 {
    if let Some(m) = as_small_positive_integer(s) {
        return factorial(m - 1);
    }
    if s < 0.5 {
        // reflection
        return std::f64::consts::PI / ((std::f64::consts::PI * s).sin() * gamma(1.0 - s));
    }
    if s > 20.0 {
        return ln_gamma(s).exp();
    }
    let z = s - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * std::f64::consts::PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * acc
}

/// `ln Gamma(s)` for `s > 0`.
pub fn ln_gamma(s: f64) -> f64 {
    if s < 20.0 {
        return gamma(s).abs().ln();
    }
    // Stirling series; error below 1e-17 relative for s >= 20.
    let inv = 1.0 / s;
    let inv2 = inv * inv;
    let series = inv
        * (1.0 / 12.0
            - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 / 1188.0))));
    (s - 0.5) * s.ln() - s + 0.5 * (2.0 * std::f64::consts::PI).ln() + series
}

/// Upper incomplete gamma `Gamma(s, x) = int_x^oo t^(s-1) e^(-t) dt` for `s > 0`, `x > 0`.
///
/// Integer `s` uses the finite closed form; otherwise a Lentz continued
/// fraction when `x > s + 1` and the complement of the lower series below it.
pub fn upper_incomplete_gamma(s: f64, x: f64) -> Result<f64> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::Domain(format!("incomplete gamma needs s > 0, got {s}")));
    }
    check_argument(x)?;
    if let Some(m) = as_small_positive_integer(s) {
        return Ok(integer_closed_form(m, x));
    }
    if x > s + 1.0 {
        return continued_fraction(s, x);
    }
    Ok(gamma(s) - lower_series(s, x)?)
}

/// Exponential integral `E1(x) = Gamma(0, x)` for `x > 0`.
pub fn exp_integral_e1(x: f64) -> Result<f64> {
    check_argument(x)?;
    if x > 1.0 {
        continued_fraction(0.0, x)
    } else {
        Ok(exp_integral_series(x))
    }
}

/// `Gamma(s, x)` for any real `s` and `x > 0`. Nonpositive orders use the
/// continued fraction for `x > 1` and the downward recurrence
/// `Gamma(s, x) = (Gamma(s+1, x) - x^s e^(-x)) / s` below it.
pub(crate) fn upper_gamma_kernel(s: f64, x: f64) -> Result<f64> {
    if s > 0.0 {
        return upper_incomplete_gamma(s, x);
    }
    check_argument(x)?;
    if !s.is_finite() {
        return Err(Error::Domain(format!("incomplete gamma needs finite s, got {s}")));
    }
    if s == 0.0 {
        return exp_integral_e1(x);
    }
    if x > 1.0 {
        return continued_fraction(s, x);
    }
    Ok((upper_gamma_kernel(s + 1.0, x)? - (s * x.ln() - x).exp()) / s)
}

fn check_argument(x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("incomplete gamma needs x > 0, got {x}")));
    }
    Ok(())
}

/// `(m-1)! e^(-x) sum_{j<m} x^j / j!`
fn integer_closed_form(m: u32, x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 1..m {
        term *= x / f64::from(j);
        sum += term;
    }
    factorial(m - 1) * (-x).exp() * sum
}

fn continued_fraction(s: f64, x: f64) -> Result<f64> {
    let mut b = x + 1.0 - s;
    let mut c = 1.0 / FPMIN;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=MAX_ITER {
        let i = i as f64;
        let an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b + an / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < f64::EPSILON {
            return Ok((-x + s * x.ln()).exp() * h);
        }
    }
    Err(Error::Domain(format!("continued fraction for Gamma({s}, {x}) did not converge")))
}

/// Lower incomplete gamma by its power series, for `s > 0`.
fn lower_series(s: f64, x: f64) -> Result<f64> {
    let mut ap = s;
    let mut term = 1.0 / s;
    let mut sum = term;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * f64::EPSILON {
            return Ok((-x + s * x.ln()).exp() * sum);
        }
    }
    Err(Error::Domain(format!("series for gamma({s}, {x}) did not converge")))
}

/// `E1(x) = -gamma_E - ln x - sum_{n>=1} (-x)^n / (n n!)` for `0 < x <= 1`.
fn exp_integral_series(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 0.0;
    for n in 1..=MAX_ITER {
        let n = n as f64;
        term *= -x / n;
        let contrib = term / n;
        sum += contrib;
        if contrib.abs() < f64::EPSILON * sum.abs().max(1e-300) {
            break;
        }
    }
    -EULER_GAMMA - x.ln() - sum
}
