//! Dirichlet characters as exponent vectors on fixed generators of `(Z/q)^x`.
//!
//! The unit group splits by CRT into cyclic factors: one per odd prime power
//! (generated by the least primitive root mod `p^2`), and at `2^e` the factor
//! `<-1>` for `e >= 2` together with `<5>` for `e >= 3`. A character stores one
//! exponent per factor; values are exact phases `j / L` with `L` the exponent
//! of the group, so conductors and primitive parts are computed structurally.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{divisors, euler_phi, factorize, gcd_u64, lcm_u64, mobius, pow_mod, root_of_unity};
use crate::error::{Error, Result};
use crate::forms::CuspForm;

const NOT_A_UNIT: u32 = u32::MAX;

/// One cyclic factor of the unit group.
#[derive(Debug)]
struct Factor {
    prime: u64,
    /// Modulus of the local component, `p^e`.
    local_modulus: u64,
    /// Order of the cyclic factor.
    order: u64,
    /// Discrete logarithm of every residue mod `local_modulus` in this factor.
    dlog: Vec<u32>,
    /// Element of `(Z/q)^x` that is the generator here and trivial in every other factor.
    lift: u64,
}

/// Generator data of `(Z/q)^x` shared by every character mod `q`.
#[derive(Debug)]
pub struct UnitGroup {
    modulus: u64,
    exponent: u64,
    factors: Vec<Factor>,
}

fn least_primitive_root_mod_p_squared(p: u64) -> u64 {
    let p2 = p * p;
    let order = p * (p - 1);
    let prime_factors: Vec<u64> = factorize(order).into_iter().map(|(r, _)| r).collect();
    (2..p2)
        .find(|&g| g % p != 0 && prime_factors.iter().all(|&r| pow_mod(g, order / r, p2) != 1))
        .expect("odd prime powers have primitive roots")
}

fn crt_lift(residue: u64, local_modulus: u64, modulus: u64) -> u64 {
    // x = residue mod local_modulus, x = 1 mod modulus / local_modulus
    let other = modulus / local_modulus;
    (0..local_modulus)
        .map(|t| 1 + t * other)
        .find(|x| x % local_modulus == residue % local_modulus)
        .expect("coprime moduli")
        % modulus.max(1)
}

impl UnitGroup {
    pub fn new(modulus: u64) -> Result<Arc<Self>> {
        if modulus == 0 {
            return Err(Error::InvalidArgument("character modulus must be positive".into()));
        }
        if modulus > u32::MAX as u64 {
            return Err(Error::InvalidArgument("character modulus too large".into()));
        }
        let mut factors = Vec::new();
        for (p, e) in factorize(modulus) {
            let pe = p.pow(e);
            if p == 2 {
                if e >= 2 {
                    let mut minus_one = vec![NOT_A_UNIT; pe as usize];
                    let mut five = vec![NOT_A_UNIT; pe as usize];
                    let five_order = if e >= 3 { pe / 4 } else { 1 };
                    let mut power = 1u64;
                    for v in 0..five_order {
                        minus_one[power as usize] = 0;
                        five[power as usize] = v as u32;
                        let neg = (pe - power) % pe;
                        minus_one[neg as usize] = 1;
                        five[neg as usize] = v as u32;
                        power = power * 5 % pe;
                    }
                    factors.push(Factor {
                        prime: 2,
                        local_modulus: pe,
                        order: 2,
                        dlog: minus_one,
                        lift: crt_lift(pe - 1, pe, modulus),
                    });
                    if e >= 3 {
                        factors.push(Factor {
                            prime: 2,
                            local_modulus: pe,
                            order: five_order,
                            dlog: five,
                            lift: crt_lift(5, pe, modulus),
                        });
                    }
                }
            } else {
                let g = least_primitive_root_mod_p_squared(p);
                let order = pe / p * (p - 1);
                let mut dlog = vec![NOT_A_UNIT; pe as usize];
                let mut power = 1u64;
                for j in 0..order {
                    dlog[power as usize] = j as u32;
                    power = power * g % pe;
                }
                factors.push(Factor {
                    prime: p,
                    local_modulus: pe,
                    order,
                    dlog,
                    lift: crt_lift(g % pe, pe, modulus),
                });
            }
        }
        let exponent = factors.iter().fold(1, |acc, f| lcm_u64(acc, f.order));
        Ok(Arc::new(Self { modulus, exponent, factors }))
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Exponent `L` of the group; every character value is an `L`-th root of unity.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Orders of the cyclic factors, in generator order.
    pub fn factor_orders(&self) -> Vec<u64> {
        self.factors.iter().map(|f| f.order).collect()
    }

    /// Generators lifted to `(Z/q)^x`.
    pub fn generators(&self) -> Vec<u64> {
        self.factors.iter().map(|f| f.lift).collect()
    }

    fn logs(&self, a: u64) -> Option<Vec<u64>> {
        self.factors
            .iter()
            .map(|f| {
                let l = f.dlog[(a % f.local_modulus) as usize];
                (l != NOT_A_UNIT).then_some(l as u64)
            })
            .collect()
    }
}

/// A Dirichlet character modulo `q`.
#[derive(Debug, Clone)]
pub struct DirichletCharacter {
    group: Arc<UnitGroup>,
    exponents: Vec<u64>,
    order: u64,
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.modulus() == other.modulus() && self.exponents == other.exponents
    }
}

impl Eq for DirichletCharacter {}

/// JSON export record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterRecord {
    pub modulus: u64,
    pub exponents: Vec<u64>,
    pub order: u64,
    pub conductor: u64,
}

impl DirichletCharacter {
    /// Character with the given exponent on each generator (reduced mod the factor orders).
    pub fn from_exponents(group: Arc<UnitGroup>, exponents: &[u64]) -> Result<Self> {
        if exponents.len() != group.factors.len() {
            return Err(Error::InvalidArgument(format!(
                "modulus {} needs {} exponents, got {}",
                group.modulus,
                group.factors.len(),
                exponents.len()
            )));
        }
        let exponents: Vec<u64> = exponents
            .iter()
            .zip(&group.factors)
            .map(|(&x, f)| x % f.order)
            .collect();
        let order = exponents
            .iter()
            .zip(&group.factors)
            .fold(1, |acc, (&x, f)| lcm_u64(acc, f.order / gcd_u64(x, f.order)));
        Ok(Self { group, exponents, order })
    }

    pub fn trivial(modulus: u64) -> Result<Self> {
        let group = UnitGroup::new(modulus)?;
        let zeros = vec![0; group.factors.len()];
        Self::from_exponents(group, &zeros)
    }

    pub fn modulus(&self) -> u64 {
        self.group.modulus
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn group(&self) -> &Arc<UnitGroup> {
        &self.group
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&x| x == 0)
    }

    /// `chi(a) = e(j / L)`: returns `j` in `[0, L)`, or `None` when `gcd(a, q) > 1`.
    pub fn phase(&self, a: i64) -> Option<u64> {
        let q = self.modulus();
        let a = a.rem_euclid(q as i64) as u64;
        if gcd_u64(a, q) != 1 {
            return None;
        }
        let l = self.group.exponent;
        let logs = self.group.logs(a)?;
        let mut j = 0u128;
        for ((&x, log), f) in self.exponents.iter().zip(logs).zip(&self.group.factors) {
            j += x as u128 * log as u128 * (l / f.order) as u128;
        }
        Some((j % l as u128) as u64)
    }

    pub fn value(&self, a: i64) -> Complex64 {
        match self.phase(a) {
            Some(j) => root_of_unity(j, self.group.exponent),
            None => Complex64::new(0.0, 0.0),
        }
    }

    pub fn conj(&self) -> Self {
        let exponents: Vec<u64> = self
            .exponents
            .iter()
            .zip(&self.group.factors)
            .map(|(&x, f)| (f.order - x) % f.order)
            .collect();
        Self { group: self.group.clone(), exponents, order: self.order }
    }

    /// Pointwise product of two characters of the same modulus.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.modulus() != other.modulus() {
            return Err(Error::InvalidArgument("characters have different moduli".into()));
        }
        let sum: Vec<u64> = self.exponents.iter().zip(&other.exponents).map(|(a, b)| a + b).collect();
        Self::from_exponents(self.group.clone(), &sum)
    }

    /// `chi(-1) = +1`.
    pub fn is_even(&self) -> bool {
        self.phase(-1) == Some(0)
    }

    /// Local conductor exponents `(p, f_p)` and primitive exponents, factor by factor.
    fn local_data(&self) -> Vec<(u64, u32, Vec<u64>)> {
        let mut out: Vec<(u64, u32, Vec<u64>)> = Vec::new();
        let factors = &self.group.factors;
        let mut i = 0;
        while i < factors.len() {
            let f = &factors[i];
            let e = f.local_modulus.trailing_zeros();
            if f.prime == 2 {
                let e = e as u32;
                let x0 = self.exponents[i];
                let x1 = if e >= 3 { self.exponents[i + 1] } else { 0 };
                let step = if e >= 3 { 2 } else { 1 };
                if x1 == 0 {
                    if x0 == 0 {
                        out.push((2, 0, vec![]));
                    } else {
                        out.push((2, 2, vec![1]));
                    }
                } else {
                    let v = x1.trailing_zeros();
                    let cond = e - v;
                    out.push((2, cond, vec![x0, x1 >> v]));
                }
                i += step;
            } else {
                let p = f.prime;
                let mut e_p = 0u32;
                let mut m = f.local_modulus;
                while m > 1 {
                    m /= p;
                    e_p += 1;
                }
                let x = self.exponents[i];
                if x == 0 {
                    out.push((p, 0, vec![]));
                } else {
                    let mut v = 0u32;
                    let mut y = x;
                    while y % p == 0 && v < e_p - 1 {
                        y /= p;
                        v += 1;
                    }
                    out.push((p, e_p - v, vec![y]));
                }
                i += 1;
            }
        }
        out
    }

    /// Conductor `c(chi)`.
    pub fn conductor(&self) -> u64 {
        self.local_data().iter().map(|&(p, f, _)| p.pow(f)).product()
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor() == self.modulus()
    }

    /// `(c(chi), chi*)` with `chi*` the primitive character mod `c(chi)` inducing `chi`.
    pub fn conductor_and_primitive_part(&self) -> Result<(u64, DirichletCharacter)> {
        let local = self.local_data();
        let conductor: u64 = local.iter().map(|&(p, f, _)| p.pow(f)).product();
        let group = UnitGroup::new(conductor)?;
        let exponents: Vec<u64> = local.into_iter().flat_map(|(_, _, x)| x).collect();
        let primitive = Self::from_exponents(group, &exponents)?;
        Ok((conductor, primitive))
    }

    /// The character mod `modulus` (a multiple of `q`) induced by `self`.
    pub fn induce(&self, modulus: u64) -> Result<Self> {
        if modulus % self.modulus() != 0 {
            return Err(Error::InvalidArgument(format!(
                "{modulus} is not a multiple of {}",
                self.modulus()
            )));
        }
        let group = UnitGroup::new(modulus)?;
        let l = self.group.exponent;
        let exponents: Vec<u64> = group
            .factors
            .iter()
            .map(|f| {
                let j = self.phase(f.lift as i64).expect("lifted generators are units");
                // e(j / L) = e(x / order)
                j * f.order / l
            })
            .collect();
        Self::from_exponents(group, &exponents)
    }

    pub fn record(&self) -> CharacterRecord {
        CharacterRecord {
            modulus: self.modulus(),
            exponents: self.exponents.clone(),
            order: self.order,
            conductor: self.conductor(),
        }
    }
}

/// All `phi(q)` characters mod `q`, lexicographic in their exponent vectors.
pub fn enumerate_characters(q: u64) -> Result<Vec<DirichletCharacter>> {
    let group = UnitGroup::new(q)?;
    let orders = group.factor_orders();
    let total: u64 = orders.iter().product();
    let mut out = Vec::with_capacity(total as usize);
    let mut x = vec![0u64; orders.len()];
    for _ in 0..total {
        out.push(DirichletCharacter::from_exponents(group.clone(), &x)?);
        for i in (0..x.len()).rev() {
            x[i] += 1;
            if x[i] < orders[i] {
                break;
            }
            x[i] = 0;
        }
    }
    Ok(out)
}

/// Free-function form of [`DirichletCharacter::conductor_and_primitive_part`].
pub fn conductor_and_primitive_part(chi: &DirichletCharacter) -> Result<(u64, DirichletCharacter)> {
    chi.conductor_and_primitive_part()
}

/// Gauss sum `sum_a chi(a) e(a/q)`, with both phases combined over a common denominator.
pub fn gauss_sum(chi: &DirichletCharacter) -> Complex64 {
    let q = chi.modulus();
    if q == 1 {
        return Complex64::new(1.0, 0.0);
    }
    let l = chi.group.exponent;
    let m = lcm_u64(l, q);
    let mut acc = crate::arith::CompensatedSum::new();
    for a in 1..q {
        if let Some(j) = chi.phase(a as i64) {
            let num = (j as u128 * (m / l) as u128 + a as u128 * (m / q) as u128) % m as u128;
            acc.add(root_of_unity(num as u64, m));
        }
    }
    acc.value()
}

/// `phi*(q)`, the number of primitive characters mod `q`: `sum_{d | q} mu(q/d) phi(d)`.
pub fn primitive_count(q: u64) -> u64 {
    let total: i64 = divisors(q)
        .into_iter()
        .map(|d| mobius(q / d) * euler_phi(d) as i64)
        .sum();
    total as u64
}

/// Inputs of the arithmetic weight `nu(f, chi, n)`.
#[derive(Debug, Clone, Copy)]
pub struct NuContext<'a> {
    pub form: &'a CuspForm,
    /// The primitive character `chi*`.
    pub character: &'a DirichletCharacter,
    /// Modulus `m` in the side condition `gcd(n1, m) = 1`.
    pub coprimality_modulus: u64,
    pub n: u64,
}

/// `nu(f, chi, n) = sum_{n1 n2 n3 = n, (n1, m) = 1} chi(n1) mu(n1) conj(chi)(n2) mu(n2) a(n3) n3^(1 - k/2)`.
pub fn nu_weight(ctx: NuContext<'_>) -> Result<Complex64> {
    if ctx.n == 0 || ctx.coprimality_modulus == 0 {
        return Err(Error::InvalidArgument("nu needs n >= 1 and a positive coprimality modulus".into()));
    }
    let k = ctx.form.weight() as f64;
    let table = ctx.form.ensure(ctx.n as usize)?;
    let chi = ctx.character;
    let chi_bar = chi.conj();
    let mut acc = crate::arith::CompensatedSum::new();
    for n1 in divisors(ctx.n) {
        let mu1 = mobius(n1);
        if mu1 == 0 || gcd_u64(n1, ctx.coprimality_modulus) != 1 {
            continue;
        }
        let v1 = chi.value(n1 as i64) * mu1 as f64;
        let rest = ctx.n / n1;
        for n2 in divisors(rest) {
            let mu2 = mobius(n2);
            if mu2 == 0 {
                continue;
            }
            let n3 = rest / n2;
            let a3 = table.real[n3 as usize] * (n3 as f64).powf(1.0 - k / 2.0);
            acc.add(v1 * chi_bar.value(n2 as i64) * (mu2 as f64 * a3));
        }
    }
    Ok(acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_structure() {
        assert_eq!(UnitGroup::new(1).unwrap().factor_orders(), Vec::<u64>::new());
        assert_eq!(UnitGroup::new(2).unwrap().factor_orders(), Vec::<u64>::new());
        assert_eq!(UnitGroup::new(4).unwrap().factor_orders(), vec![2]);
        assert_eq!(UnitGroup::new(16).unwrap().factor_orders(), vec![2, 4]);
        assert_eq!(UnitGroup::new(5).unwrap().generators(), vec![2]);
        assert_eq!(UnitGroup::new(360).unwrap().factor_orders(), vec![2, 2, 6, 4]);
    }

    #[test]
    fn generators_of_twenty_four() {
        // 24 = 8 * 3: lifts of -1 and 5 mod 8 are 1 mod 3; the mod-3 generator is 1 mod 8
        let g = UnitGroup::new(24).unwrap();
        assert_eq!(g.generators(), vec![7, 13, 17]);
    }

    #[test]
    fn spec_examples() {
        assert_eq!(enumerate_characters(1).unwrap().len(), 1);
        let five = enumerate_characters(5).unwrap();
        assert_eq!(five.iter().map(|c| c.order()).collect::<Vec<_>>(), vec![1, 4, 2, 4]);
        assert!(enumerate_characters(8).unwrap().iter().all(|c| c.order() <= 2));
        assert_eq!(primitive_count(2), 0);
        assert_eq!(primitive_count(1), 1);
        assert_eq!(primitive_count(7), 5);
    }

    #[test]
    fn quadratic_gauss_sum_mod_five() {
        let chi = &enumerate_characters(5).unwrap()[2];
        assert_eq!(chi.order(), 2);
        let t = gauss_sum(chi);
        assert!((t - Complex64::new(5f64.sqrt(), 0.0)).norm() < 1e-12);
    }
}
