//! Cusps of `Gamma_0(N)` and the integer matrices that carry `oo` to them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, gcd_u64, mod_inverse};
use crate::error::{Error, Result};

/// A reduced fraction `a/c` with `c > 0`, or `oo` encoded as `1/0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CuspPoint {
    numerator: i64,
    denominator: u64,
}

impl CuspPoint {
    /// Reduces `a/c`; `c = 0` gives `oo` regardless of `a != 0`.
    pub fn new(a: i64, c: i64) -> Result<Self> {
        if c == 0 {
            if a == 0 {
                return Err(Error::InvalidArgument("0/0 is not a cusp".into()));
            }
            return Ok(Self::infinity());
        }
        let g = gcd(a, c);
        let (mut a, mut c) = (a / g, c / g);
        if c < 0 {
            a = -a;
            c = -c;
        }
        Ok(Self { numerator: a, denominator: c as u64 })
    }

    pub fn infinity() -> Self {
        Self { numerator: 1, denominator: 0 }
    }

    pub fn integer(a: i64) -> Self {
        Self { numerator: a, denominator: 1 }
    }

    pub fn numerator(&self) -> i64 {
        self.numerator
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    pub fn is_infinity(&self) -> bool {
        self.denominator == 0
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_infinity() {
            f64::INFINITY
        } else {
            self.numerator as f64 / self.denominator as f64
        }
    }

    /// Numerator reduced into `[0, c)`; `r` and `r + 1` share it.
    pub fn canonical_numerator(&self) -> u64 {
        if self.is_infinity() {
            return 0;
        }
        self.numerator.rem_euclid(self.denominator as i64) as u64
    }

    pub fn shift(&self, m: i64) -> Self {
        if self.is_infinity() {
            return *self;
        }
        Self {
            numerator: self.numerator + m * self.denominator as i64,
            denominator: self.denominator,
        }
    }

    pub fn neg(&self) -> Self {
        if self.is_infinity() {
            return *self;
        }
        Self { numerator: -self.numerator, denominator: self.denominator }
    }
}

impl fmt::Display for CuspPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinity() {
            write!(f, "oo")
        } else {
            write!(f, "{}/{}", self.numerator, self.denominator)
        }
    }
}

impl FromStr for CuspPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if matches!(t, "oo" | "inf" | "infinity") {
            return Ok(Self::infinity());
        }
        let bad = || Error::InvalidArgument(format!("expected a fraction a/c, got {s:?}"));
        match t.split_once('/') {
            Some((a, c)) => {
                let a: i64 = a.trim().parse().map_err(|_| bad())?;
                let c: i64 = c.trim().parse().map_err(|_| bad())?;
                if c == 0 {
                    return Err(bad());
                }
                Self::new(a, c)
            }
            None => Ok(Self::integer(t.parse().map_err(|_| bad())?)),
        }
    }
}

/// Exact rational `p/q`, `q > 0`, used for cocycles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rational {
    pub num: i128,
    pub den: i128,
}

impl Rational {
    pub fn new(num: i128, den: i128) -> Self {
        assert!(den != 0);
        let g = gcd_i128(num, den);
        let s = if den < 0 { -1 } else { 1 };
        Self { num: s * num / g, den: s * den / g }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

/// An element `(a b; c d)` of `Gamma_0(N)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModularMatrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub level: u64,
}

impl ModularMatrix {
    pub fn new(a: i64, b: i64, c: i64, d: i64, level: u64) -> Result<Self> {
        if level == 0 {
            return Err(Error::InvalidArgument("level must be positive".into()));
        }
        if a as i128 * d as i128 - b as i128 * c as i128 != 1 {
            return Err(Error::InvalidArgument(format!("({a}, {b}; {c}, {d}) does not have determinant 1")));
        }
        if c.rem_euclid(level as i64) != 0 {
            return Err(Error::InvalidArgument(format!("lower-left entry {c} is not divisible by the level {level}")));
        }
        Ok(Self { a, b, c, d, level })
    }

    pub fn inverse(&self) -> Self {
        Self { a: self.d, b: -self.b, c: -self.c, d: self.a, level: self.level }
    }

    /// Mobius image of a cusp.
    pub fn act(&self, r: &CuspPoint) -> CuspPoint {
        let (num, den) = if r.is_infinity() {
            (self.a as i128, self.c as i128)
        } else {
            let (x, y) = (r.numerator() as i128, r.denominator() as i128);
            (self.a as i128 * x + self.b as i128 * y, self.c as i128 * x + self.d as i128 * y)
        };
        if den == 0 {
            return CuspPoint::infinity();
        }
        let g = gcd_i128(num, den);
        CuspPoint::new((num / g) as i64, (den / g) as i64).expect("nonzero denominator")
    }

    /// Cocycle `j(gamma, r) = c r + d` as an exact rational.
    pub fn cocycle(&self, r: &CuspPoint) -> Result<Rational> {
        if r.is_infinity() {
            return Err(Error::InvalidArgument("cocycle at oo is not finite".into()));
        }
        let (x, y) = (r.numerator() as i128, r.denominator() as i128);
        Ok(Rational::new(self.c as i128 * x + self.d as i128 * y, y))
    }

    pub fn fixes_infinity(&self) -> bool {
        self.c == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Coset {
    Gamma0,
    Fricke,
}

/// Integer matrix `M = (A' B'; C' D')` with `M oo = r`, either in `Gamma_0(N)`
/// (`det = 1`) or in the Atkin-Lehner coset `W_N Gamma_0(N)` (`det = N`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnfoldingMatrix {
    pub entries: [i64; 4],
    pub coset: Coset,
    pub level: u64,
}

impl UnfoldingMatrix {
    /// Validates the coset invariants and normalizes the sign so that `C' > 0`.
    pub fn new(entries: [i64; 4], coset: Coset, level: u64) -> Result<Self> {
        let [mut a, mut b, mut c, mut d] = entries;
        if c < 0 {
            (a, b, c, d) = (-a, -b, -c, -d);
        }
        if c == 0 {
            return Err(Error::InvalidArgument("unfolding matrix must move oo (C' != 0)".into()));
        }
        let det = a as i128 * d as i128 - b as i128 * c as i128;
        let n = level as i64;
        let ok = match coset {
            Coset::Gamma0 => det == 1 && c % n == 0,
            Coset::Fricke => det == level as i128 && a % n == 0 && c % n == 0 && d % n == 0,
        };
        if !ok {
            return Err(Error::InvalidArgument(format!(
                "({a}, {b}; {c}, {d}) is not in the {coset:?} coset at level {level}"
            )));
        }
        Ok(Self { entries: [a, b, c, d], coset, level })
    }

    pub fn from_modular(g: &ModularMatrix) -> Result<Self> {
        Self::new([g.a, g.b, g.c, g.d], Coset::Gamma0, g.level)
    }

    pub fn determinant(&self) -> i64 {
        let [a, b, c, d] = self.entries;
        a * d - b * c
    }

    /// Normalized lower-left entry `C = C' / sqrt(det)`.
    pub fn normalized_c(&self) -> f64 {
        self.entries[2] as f64 / (self.determinant() as f64).sqrt()
    }

    /// `M oo`.
    pub fn cusp(&self) -> CuspPoint {
        CuspPoint::new(self.entries[0], self.entries[2]).expect("C' != 0")
    }

    /// `-D'/C'`, the cusp at which the second series is expanded.
    pub fn second_cusp(&self) -> CuspPoint {
        CuspPoint::new(-self.entries[3], self.entries[2]).expect("C' != 0")
    }

    /// `j(M, r) = C r + D` with normalized entries.
    pub fn cocycle(&self, r: f64) -> f64 {
        let root = (self.determinant() as f64).sqrt();
        (self.entries[2] as f64 * r + self.entries[3] as f64) / root
    }
}

/// Matrix carrying `oo` to `r` in the coset supported at level `n`.
pub fn build_unfolding_matrix(r: &CuspPoint, n: u64) -> Result<UnfoldingMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument("level must be positive".into()));
    }
    if r.is_infinity() {
        return Err(Error::InvalidArgument("oo is not moved by an unfolding matrix".into()));
    }
    let (a, c) = (r.numerator(), r.denominator() as i64);
    if c as u64 % n == 0 {
        let d = mod_inverse(a, c).expect("reduced fraction");
        let b = (a as i128 * d as i128 - 1) / c as i128;
        return UnfoldingMatrix::new([a, b as i64, c, d], Coset::Gamma0, n);
    }
    if gcd_u64(c as u64, n) == 1 {
        let ni = n as i64;
        // W_N gamma = (N a, -d; N c, N b) with N a b = 1 mod c, b in (-c, 0]
        let inv = mod_inverse((ni as i128 * a as i128).rem_euclid(c as i128) as i64, c)
            .expect("N a is a unit mod c");
        let b = if inv == 0 { 0 } else { inv - c };
        let d = (1 - ni as i128 * a as i128 * b as i128) / c as i128;
        return UnfoldingMatrix::new([ni * a, -(d as i64), ni * c, ni * b], Coset::Fricke, n);
    }
    Err(Error::UnsupportedCusp { denominator: c, level: n })
}
