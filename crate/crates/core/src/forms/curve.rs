//! Weight-2 newform coefficients of an elliptic curve over Q by point counting.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::{factorize, primes_up_to, smallest_prime_factors};
use crate::error::{Error, Result};

/// Integral Weierstrass model `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`
/// together with its conductor and the traces of Frobenius at the bad primes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllipticCurveModel {
    pub a1: i64,
    pub a2: i64,
    pub a3: i64,
    pub a4: i64,
    pub a6: i64,
    pub conductor: u64,
    pub bad_prime_coefficients: BTreeMap<u64, i8>,
}

impl EllipticCurveModel {
    pub fn new(
        coeffs: [i64; 5],
        conductor: u64,
        bad_prime_coefficients: impl IntoIterator<Item = (u64, i8)>,
    ) -> Result<Self> {
        let [a1, a2, a3, a4, a6] = coeffs;
        let curve = Self {
            a1,
            a2,
            a3,
            a4,
            a6,
            conductor,
            bad_prime_coefficients: bad_prime_coefficients.into_iter().collect(),
        };
        curve.validate()?;
        Ok(curve)
    }

    /// The curve 11a1, `y^2 + y = x^3 - x^2 - 10x - 20`, split multiplicative at 11.
    pub fn x0_11() -> Self {
        Self::new([0, -1, 1, -10, -20], 11, [(11, 1)]).expect("11a1 is a valid model")
    }

    fn b_invariants(&self) -> (i128, i128, i128, i128) {
        let (a1, a2, a3, a4, a6) = (
            self.a1 as i128,
            self.a2 as i128,
            self.a3 as i128,
            self.a4 as i128,
            self.a6 as i128,
        );
        let b2 = a1 * a1 + 4 * a2;
        let b4 = 2 * a4 + a1 * a3;
        let b6 = a3 * a3 + 4 * a6;
        let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        (b2, b4, b6, b8)
    }

    pub fn discriminant(&self) -> i128 {
        let (b2, b4, b6, b8) = self.b_invariants();
        -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    }

    pub fn validate(&self) -> Result<()> {
        if self.conductor == 0 {
            return Err(Error::InvalidArgument("conductor must be positive".into()));
        }
        let disc = self.discriminant();
        if disc == 0 {
            return Err(Error::InvalidArgument("singular Weierstrass model (discriminant 0)".into()));
        }
        let level_primes: Vec<u64> = factorize(self.conductor).into_iter().map(|(p, _)| p).collect();
        for p in &level_primes {
            match self.bad_prime_coefficients.get(p) {
                None => {
                    return Err(Error::InvalidArgument(format!(
                        "bad prime {p} of the conductor has no a_p"
                    )))
                }
                Some(a) if !(-1..=1).contains(a) => {
                    return Err(Error::InvalidArgument(format!("a_{p} = {a} is not in {{-1, 0, 1}}")))
                }
                _ => {}
            }
            if disc % (*p as i128) != 0 {
                return Err(Error::InvalidArgument(format!(
                    "conductor prime {p} does not divide the discriminant {disc}"
                )));
            }
        }
        for (p, _) in self.bad_prime_coefficients.iter() {
            if !level_primes.contains(p) {
                return Err(Error::InvalidArgument(format!("{p} listed as bad but does not divide the conductor")));
            }
        }
        for (p, _) in factorize_i128(disc.unsigned_abs()) {
            if self.conductor % p != 0 {
                return Err(Error::ConductorMismatch {
                    discriminant: disc,
                    prime: p,
                    conductor: self.conductor,
                });
            }
        }
        Ok(())
    }

    /// `#E(F_p)` including the point at infinity, for a prime of good reduction.
    pub fn count_points(&self, p: u64) -> u64 {
        if p == 2 {
            return self.count_points_naive(p);
        }
        let (b2, b4, b6, _) = self.b_invariants();
        let m = p as i128;
        let red = |v: i128| v.rem_euclid(m) as u64;
        let (b2, b4, b6) = (red(b2), red(2 * b4), red(b6));
        // chi[v] = 1 + (v / p)
        let mut chi = vec![0u8; p as usize];
        chi[0] = 1;
        for y in 1..=(p - 1) / 2 {
            chi[(y * y % p) as usize] = 2;
        }
        let mut affine = 0u64;
        for x in 0..p {
            // 4x^3 + b2 x^2 + 2 b4 x + b6
            let rhs = (((4 * x + b2) % p * x + b4) % p * x + b6) % p;
            affine += chi[rhs as usize] as u64;
        }
        affine + 1
    }

    fn count_points_naive(&self, p: u64) -> u64 {
        let m = p as i64;
        let r = |v: i64| v.rem_euclid(m);
        let mut count = 1;
        for x in 0..m {
            for y in 0..m {
                let lhs = r(y * y + self.a1 * x * y + self.a3 * y);
                let rhs = r(x * x * x + self.a2 * x * x + self.a4 * x + self.a6);
                if lhs == rhs {
                    count += 1;
                }
            }
        }
        count
    }

    /// Trace of Frobenius `a_p` (point count at good primes, table lookup at bad ones).
    pub fn trace_of_frobenius(&self, p: u64) -> i64 {
        match self.bad_prime_coefficients.get(&p) {
            Some(&a) => a as i64,
            None => p as i64 + 1 - self.count_points(p) as i64,
        }
    }
}

fn factorize_i128(mut n: u128) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p: u128 = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p as u64, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n as u64, 1));
    }
    out
}

/// `a(0..=n_max)` of the newform attached to `curve`; index 0 holds 0.
pub(crate) fn curve_coefficients(curve: &EllipticCurveModel, n_max: usize) -> Result<Vec<i128>> {
    let mut a = vec![0i128; n_max + 1];
    if n_max == 0 {
        return Ok(a);
    }
    a[1] = 1;
    let overflow = |n: usize| Error::CoefficientOverflow { n };
    for p in primes_up_to(n_max) {
        let ap = curve.trace_of_frobenius(p as u64) as i128;
        let bad = curve.conductor % p as u64 == 0;
        let (mut prev, mut cur) = (1i128, ap);
        let mut pe = p;
        loop {
            a[pe] = cur;
            let Some(next_pe) = pe.checked_mul(p).filter(|&v| v <= n_max) else {
                break;
            };
            let next = if bad {
                ap.checked_mul(cur).ok_or(overflow(next_pe))?
            } else {
                ap.checked_mul(cur)
                    .and_then(|x| x.checked_sub((p as i128).checked_mul(prev)?))
                    .ok_or(overflow(next_pe))?
            };
            (prev, cur) = (cur, next);
            pe = next_pe;
        }
    }
    let spf = smallest_prime_factors(n_max);
    for n in 2..=n_max {
        let p = spf[n];
        let mut pe = p;
        while (n / pe) % p == 0 {
            pe *= p;
        }
        if pe != n {
            a[n] = a[pe].checked_mul(a[n / pe]).ok_or(overflow(n))?;
        }
    }
    Ok(a)
}
