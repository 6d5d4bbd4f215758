//! Small exact integer helpers: gcd, Bezout, trial factorisation and the
//! classical multiplicative functions.

use num_complex::Complex64;

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i64
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd_u64(a, b) * b
    }
}

/// Extended Euclid: returns `(g, x, y)` with `a*x + b*y = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a as i128, b as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (old_r, old_s, old_t) = (-old_r, -old_s, -old_t);
    }
    (old_r as i64, old_s as i64, old_t as i64)
}

/// Inverse of `a` modulo `m` as a representative in `[0, m)`, if it exists.
pub fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    if m == 1 {
        return Some(0);
    }
    let (g, x, _) = ext_gcd(a.rem_euclid(m), m);
    (g == 1).then(|| x.rem_euclid(m))
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m = m as u128;
    let mut acc = 1u128;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Prime factorisation by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n <= 1 {
        return out;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            return false;
        }
        p += 1;
    }
    true
}

pub fn primes_up_to(n: usize) -> Vec<usize> {
    if n < 2 {
        return Vec::new();
    }
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(i, &p)| p.then_some(i))
        .collect()
}

/// Smallest-prime-factor table for `0..=n`.
pub fn smallest_prime_factors(n: usize) -> Vec<usize> {
    let mut spf = vec![0usize; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i;
                }
                j += i;
            }
        }
    }
    spf
}

pub fn mobius(n: u64) -> i64 {
    let mut sign = 1;
    for (_, e) in factorize(n) {
        if e > 1 {
            return 0;
        }
        sign = -sign;
    }
    sign
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn divisor_count(n: u64) -> u64 {
    factorize(n).iter().map(|&(_, e)| e as u64 + 1).product()
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Rigorous constant `K` with `d(n) <= K * n^delta` for every `n >= 1`,
/// taken as the product over primes `p < 2^(1/delta)` of `max_e (e+1) p^(-e delta)`.
pub fn divisor_bound_constant(delta: f64) -> f64 {
    assert!(delta > 0.0);
    let limit = 2f64.powf(1.0 / delta).ceil() as usize;
    primes_up_to(limit)
        .into_iter()
        .map(|p| {
            let lp = (p as f64).ln();
            let mut best = 1.0f64;
            let mut e = 1.0;
            loop {
                let v = (e + 1.0) * (-e * delta * lp).exp();
                if v > best {
                    best = v;
                } else if e * delta * lp > 1.0 {
                    break;
                }
                e += 1.0;
            }
            best
        })
        .product()
}

/// Neumaier-compensated accumulator for complex sums.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    re: f64,
    re_c: f64,
    im: f64,
    im_c: f64,
}

fn neumaier(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, z: Complex64) {
        neumaier(&mut self.re, &mut self.re_c, z.re);
        neumaier(&mut self.im, &mut self.im_c, z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re + self.re_c, self.im + self.im_c)
    }
}

impl FromIterator<Complex64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut acc = Self::new();
        for z in iter {
            acc.add(z);
        }
        acc
    }
}

/// `e(j/m) = exp(2 pi i j/m)` from an exact residue. The angle is split as a
/// multiple of a quarter turn plus a remainder of at most an eighth of a turn.
pub fn root_of_unity(j: u64, m: u64) -> Complex64 {
    debug_assert!(m > 0);
    let (j, m) = ((j % m) as i128, m as i128);
    let quarter = (4 * j + m / 2).div_euclid(m);
    let offset = 4 * j - quarter * m; // j/m - quarter/4 = offset/(4m)
    let (s, c) = (std::f64::consts::TAU * offset as f64 / (4 * m) as f64).sin_cos();
    let base = Complex64::new(c, s);
    match quarter.rem_euclid(4) {
        0 => base,
        1 => Complex64::new(-base.im, base.re),
        2 => -base,
        _ => Complex64::new(base.im, -base.re),
    }
}

/// Table of `e(j/m)` for `j in 0..m`.
pub fn roots_of_unity(m: u64) -> Vec<Complex64> {
    (0..m).map(|j| root_of_unity(j, m)).collect()
}

/// Upper bound for `sum_{n > m} n^p e^(-alpha n)`, or `+inf` when the terms
/// past `m` are not yet geometrically decreasing.
pub fn power_exp_tail(p: f64, alpha: f64, m: usize) -> f64 {
    let next = (m + 1) as f64;
    let ratio_log = p.max(0.0) * ((next + 1.0) / next).ln() - alpha;
    if ratio_log >= 0.0 {
        return f64::INFINITY;
    }
    let first_log = p * next.ln() - alpha * next;
    first_log.exp() / -ratio_log.exp_m1()
}

/// Smallest `m <= ceiling` (up to a factor-two search granularity) with
/// `bound(m) <= target`, assuming `bound` is eventually decreasing.
pub fn truncation_point(bound: impl Fn(usize) -> f64, target: f64, ceiling: usize) -> Option<usize> {
    let mut hi = 1usize;
    while bound(hi) > target {
        if hi >= ceiling {
            return None;
        }
        hi = (hi * 2).min(ceiling);
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if bound(mid) <= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bezout_identity() {
        for a in -30i64..30 {
            for b in -30i64..30 {
                let (g, x, y) = ext_gcd(a, b);
                assert_eq!(a * x + b * y, g);
                assert_eq!(g, gcd(a, b));
            }
        }
    }

    #[test]
    fn multiplicative_functions_small_values() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(mobius(30), -1);
        assert_eq!(mobius(12), 0);
        assert_eq!(divisor_count(360), 24);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn divisor_bound_holds() {
        for delta in [0.125, 0.25, 0.5] {
            let k = divisor_bound_constant(delta);
            for n in 1..20_000u64 {
                assert!((divisor_count(n) as f64) <= k * (n as f64).powf(delta) * (1.0 + 1e-12));
            }
        }
        assert!((divisor_bound_constant(0.5) - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn power_exp_tail_dominates_partial_sums() {
        for &(p, alpha) in &[(5.0, 0.3), (0.5, 2.0), (-1.0, 0.05), (11.0, 1.0)] {
            for m in [10usize, 50, 200, 1000] {
                let bound = power_exp_tail(p, alpha, m);
                let actual: f64 = (m + 1..m + 20_000)
                    .map(|n| (n as f64).powf(p) * (-alpha * n as f64).exp())
                    .sum();
                assert!(actual <= bound * (1.0 + 1e-12), "p={p} alpha={alpha} m={m}");
            }
        }
        assert!(power_exp_tail(10.0, 0.01, 5).is_infinite());
    }

    #[test]
    fn truncation_point_is_feasible() {
        let m = truncation_point(|m| power_exp_tail(5.5, 0.1, m), 1e-12, 1 << 20).unwrap();
        assert!(power_exp_tail(5.5, 0.1, m) <= 1e-12);
        assert!(power_exp_tail(5.5, 0.1, m - 1) > 1e-12);
        assert!(truncation_point(|_| 1.0, 0.5, 64).is_none());
    }

    #[test]
    fn roots_of_unity_match_direct() {
        for m in 1..60u64 {
            for j in 0..m {
                let z = root_of_unity(j, m);
                let t = std::f64::consts::TAU * j as f64 / m as f64;
                assert!((z.re - t.cos()).abs() < 1e-14 && (z.im - t.sin()).abs() < 1e-14);
            }
        }
        assert_eq!(root_of_unity(1, 4), Complex64::new(0.0, 1.0));
        assert_eq!(root_of_unity(2, 4), Complex64::new(-1.0, 0.0));
    }
}
