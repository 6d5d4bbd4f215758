//! Gauss-sum weighted character moments and the reciprocity law built on them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{c_json, check_tol, inputs, IdentityTag, VerificationReport};
use crate::arith::{gcd_u64, is_prime, CompensatedSum};
use crate::characters::{
    enumerate_characters, gauss_sum, nu_weight, primitive_count, CharacterRecord, DirichletCharacter, NuContext,
};
use crate::error::{Error, Result};
use crate::ltwist::{gamma_fn, multiplicative_twist, CuspPoint, TwistEvaluator};

/// Which modulus the side condition `gcd(n1, m) = 1` in `nu` refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NuReading {
    /// `m = N`, the level of the form. The Birch-Stevens identity holds in this reading.
    Level,
    /// `m = q`, the modulus of the character family.
    CharacterModulus,
}

impl NuReading {
    fn modulus(self, level: u64, q: u64) -> u64 {
        match self {
            Self::Level => level,
            Self::CharacterModulus => q,
        }
    }
}

/// `tau(conj chi*) nu(f, chi*, q/c(chi)) L(f (x) chi*, k/2)` for one `chi` mod `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacterMoment {
    pub character: CharacterRecord,
    pub gauss: Complex64,
    pub nu: Complex64,
    pub twisted_value: Complex64,
    pub moment: Complex64,
}

/// Moment of a single character; `L(f (x) chi*, k/2)` is evaluated at the conductor.
pub fn character_moment(
    ev: &TwistEvaluator<'_>,
    chi: &DirichletCharacter,
    reading: NuReading,
) -> Result<CharacterMoment> {
    let f = ev.form();
    let q = chi.modulus();
    let (c, primitive) = chi.conductor_and_primitive_part()?;
    let h = f.weight() as f64 / 2.0;
    let nu = nu_weight(NuContext {
        form: f,
        character: &primitive,
        coprimality_modulus: reading.modulus(f.level(), q),
        n: q / c,
    })?;
    let twisted_value = multiplicative_twist(ev, &primitive, h)?;
    let gauss = gauss_sum(&primitive.conj());
    Ok(CharacterMoment { character: chi.record(), gauss, nu, twisted_value, moment: gauss * nu * twisted_value })
}

/// Moments of all characters mod `q`, in [`enumerate_characters`] order.
pub fn character_moments(ev: &TwistEvaluator<'_>, q: u64, reading: NuReading) -> Result<Vec<CharacterMoment>> {
    enumerate_characters(q)?.iter().map(|chi| character_moment(ev, chi, reading)).collect()
}

fn units(q: u64) -> impl Iterator<Item = u64> {
    (1..=q.max(1)).filter(move |&a| gcd_u64(a, q) == 1).map(move |a| a % q)
}

fn additive_sum(ev: &TwistEvaluator<'_>, chi: &DirichletCharacter, h: f64) -> Result<Complex64> {
    let q = chi.modulus() as i64;
    let chi_bar = chi.conj();
    let mut acc = CompensatedSum::new();
    for a in units(q as u64) {
        acc.add(chi_bar.value(a as i64) * ev.twist(&CuspPoint::new(a as i64, q)?, h)?.value);
    }
    Ok(acc.value())
}

/// Birch-Stevens check plus the inverse transform at three residues.
#[derive(Debug, Clone, PartialEq)]
pub struct BirchStevensOutcome {
    pub report: VerificationReport,
    pub reconstructions: Vec<VerificationReport>,
}

impl BirchStevensOutcome {
    pub fn reports(&self) -> impl Iterator<Item = &VerificationReport> {
        std::iter::once(&self.report).chain(&self.reconstructions)
    }

    pub fn pass(&self) -> bool {
        self.reports().all(|r| r.pass)
    }
}

/// `tau(conj chi*) nu(f, chi*, q/c) L(f (x) chi*, k/2) = sum_{a mod q} conj(chi)(a) L(f (x) e(a/q), k/2)`,
/// with `nu` in the [`NuReading::Level`] reading.
pub fn verify_birch_stevens(ev: &TwistEvaluator<'_>, chi: &DirichletCharacter, tol: f64) -> Result<BirchStevensOutcome> {
    verify_birch_stevens_with(ev, chi, NuReading::Level, tol)
}

pub fn verify_birch_stevens_with(
    ev: &TwistEvaluator<'_>,
    chi: &DirichletCharacter,
    reading: NuReading,
    tol: f64,
) -> Result<BirchStevensOutcome> {
    check_tol(tol)?;
    let f = ev.form();
    let q = chi.modulus();
    let h = f.weight() as f64 / 2.0;
    let m = character_moment(ev, chi, reading)?;
    let rhs = additive_sum(ev, chi, h)?;
    let other = match reading {
        NuReading::Level => NuReading::CharacterModulus,
        NuReading::CharacterModulus => NuReading::Level,
    };
    let alt = character_moment(ev, chi, other)?;
    let ins = inputs([
        ("form", json!(f.label())),
        ("q", json!(q)),
        ("character", json!(m.character)),
        ("nu_reading", json!(reading)),
        ("nu", c_json(m.nu)),
        ("gauss_sum", c_json(m.gauss)),
        ("twisted_value", c_json(m.twisted_value)),
        ("eps", json!(ev.eps())),
    ]);
    let notes = format!("residual with nu in the {other:?} reading: {:.3e}", (alt.moment - rhs).norm());
    let report = VerificationReport::new(IdentityTag::BirchStevens, ins, m.moment, rhs, tol, notes);

    let all = character_moments(ev, q, reading)?;
    let chars = enumerate_characters(q)?;
    let phi = chars.len() as f64;
    let mut residues: Vec<u64> = units(q).collect();
    residues.sort_unstable();
    residues.dedup();
    let picks: Vec<u64> = match residues.len() {
        0..=3 => residues.clone(),
        n => vec![residues[0], residues[n / 2], residues[n - 1]],
    };
    let mut reconstructions = Vec::with_capacity(picks.len());
    for a in picks {
        let lhs: Complex64 = all.iter().zip(&chars).map(|(m, c)| c.value(a as i64) * m.moment).sum::<Complex64>() / phi;
        let r = CuspPoint::new(a as i64, q as i64)?;
        let direct = ev.twist(&r, h)?.value;
        let ins = inputs([
            ("form", json!(f.label())),
            ("q", json!(q)),
            ("a", json!(a)),
            ("nu_reading", json!(reading)),
            ("eps", json!(ev.eps())),
        ]);
        reconstructions.push(VerificationReport::new(
            IdentityTag::AdditiveFromMoment,
            ins,
            lhs,
            direct,
            tol,
            "lhs from the full character sum, rhs from the evaluator",
        ));
    }
    Ok(BirchStevensOutcome { report, reconstructions })
}

/// Options for [`verify_reciprocity`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReciprocityConfig {
    /// Tolerance of the moment/additive sub-identities, also the numerical floor of the main check.
    pub tol: f64,
    /// `K` in `|T1 - T2 - L(f, k/2)| <= K l/q`; defaults to [`reciprocity_constant`].
    pub bound_constant: Option<f64>,
    /// Also run the prime-modulus, level-one variant with primitive characters only.
    pub corollary_one: bool,
    /// Largest character modulus the run may touch.
    pub max_modulus: u64,
    pub nu_reading: NuReading,
}

impl Default for ReciprocityConfig {
    fn default() -> Self {
        Self { tol: 1e-6, bound_constant: None, corollary_one: false, max_modulus: 2000, nu_reading: NuReading::Level }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReciprocityOutcome {
    /// `T1` against `L(f (x) e(l/q), k/2)`.
    pub t1: VerificationReport,
    /// `T2` against `omega L(f (x) e(-q/(lN)), k/2)`.
    pub t2: VerificationReport,
    /// `T1 - T2` against `L(f, k/2)` with tolerance `K l/q + tol`.
    pub main: VerificationReport,
    pub cor1: Option<VerificationReport>,
}

impl ReciprocityOutcome {
    pub fn reports(&self) -> impl Iterator<Item = &VerificationReport> {
        [&self.t1, &self.t2, &self.main].into_iter().chain(self.cor1.as_ref())
    }

    pub fn pass(&self) -> bool {
        self.reports().all(|r| r.pass)
    }
}

fn zeta(sigma: f64) -> f64 {
    // partial sum plus the integral bound on the tail
    let n = 10_000usize;
    let head: f64 = (1..=n).map(|m| (m as f64).powf(-sigma)).sum();
    head + (n as f64).powf(1.0 - sigma) / (sigma - 1.0)
}

fn binomial(n: u32, j: u32) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// A priori `K_f` with `|T1 - T2 - L(f, k/2)| <= K_f l/q` whenever `lN <= q`.
///
/// Uses `|L(f (x) e(r), k/2 + j)| <= zeta(j + 1/2)^2` (Deligne) and the computed
/// values `|L(f, k/2 - j)|`. Zero in weight 2.
pub fn reciprocity_constant(ev: &TwistEvaluator<'_>) -> Result<f64> {
    let f = ev.form();
    let h = f.weight() / 2;
    let hf = h as f64;
    let n = f.level() as f64;
    let two_pi = std::f64::consts::TAU;
    let zero = CuspPoint::integer(0);
    let mut k = 0.0;
    for j in 1..h {
        let b = binomial(h - 1, j);
        let jf = j as f64;
        let up = two_pi.powi(-(j as i32)) * gamma_fn(hf + jf) / gamma_fn(hf) * zeta(jf + 0.5).powi(2);
        let down = two_pi.powi(j as i32) * gamma_fn(hf - jf) / gamma_fn(hf) * ev.twist(&zero, hf - jf)?.value.norm();
        k += b * (n * up + down);
    }
    Ok(k)
}

fn moment_sum(moments: &[CharacterMoment], chars: &[DirichletCharacter], at: i64, primitive_only: bool) -> Complex64 {
    let mut acc = CompensatedSum::new();
    for (m, c) in moments.iter().zip(chars) {
        if primitive_only && !c.is_primitive() {
            continue;
        }
        acc.add(m.moment * c.value(at));
    }
    acc.value()
}

/// Reciprocity between the character moments mod `q` and mod `lN`.
pub fn verify_reciprocity(ev: &TwistEvaluator<'_>, l: u64, q: u64, config: &ReciprocityConfig) -> Result<ReciprocityOutcome> {
    check_tol(config.tol)?;
    let f = ev.form();
    let n = f.level();
    if l == 0 || l >= q {
        return Err(Error::InvalidArgument(format!("need 0 < l < q, got l = {l}, q = {q}")));
    }
    let ln = l.checked_mul(n).ok_or_else(|| Error::InvalidArgument("l N overflows".into()))?;
    if gcd_u64(q, ln) != 1 {
        return Err(Error::InvalidArgument(format!("q = {q} is not coprime to l N = {ln}")));
    }
    if q.max(ln) > config.max_modulus {
        return Err(Error::BudgetExceeded(format!(
            "modulus {} exceeds the budget {}",
            q.max(ln),
            config.max_modulus
        )));
    }
    let omega = if n == 1 {
        1.0
    } else {
        f.fricke_eigenvalue().ok_or(Error::FrickeEigenvalueUnset)?.value()
    };
    let h = f.weight() as f64 / 2.0;
    let chars_q = enumerate_characters(q)?;
    let chars_ln = enumerate_characters(ln)?;
    let mom_q = character_moments(ev, q, config.nu_reading)?;
    let mom_ln = character_moments(ev, ln, config.nu_reading)?;
    let t1 = moment_sum(&mom_q, &chars_q, l as i64, false) / chars_q.len() as f64;
    let t2 = moment_sum(&mom_ln, &chars_ln, -(q as i64), false) * omega / chars_ln.len() as f64;

    let r1 = CuspPoint::new(l as i64, q as i64)?;
    let r2 = CuspPoint::new(-(q as i64), ln as i64)?;
    let a1 = ev.twist(&r1, h)?.value;
    let a2 = ev.twist(&r2, h)?.value * omega;
    let central = ev.twist(&CuspPoint::integer(0), h)?.value;
    let base = |extra: Vec<(&'static str, serde_json::Value)>| {
        let mut m = inputs([
            ("form", json!(f.label())),
            ("l", json!(l)),
            ("q", json!(q)),
            ("nu_reading", json!(config.nu_reading)),
            ("eps", json!(ev.eps())),
        ]);
        m.extend(extra.into_iter().map(|(k, v)| (k.to_string(), v)));
        m
    };
    let t1_report = VerificationReport::new(
        IdentityTag::AdditiveFromMoment,
        base(vec![("modulus", json!(q)), ("r", json!(r1.to_string()))]),
        t1,
        a1,
        config.tol,
        "T1 against the additive twist at l/q",
    );
    let t2_report = VerificationReport::new(
        IdentityTag::AdditiveFromMoment,
        base(vec![("modulus", json!(ln)), ("r", json!(r2.to_string())), ("omega", json!(omega))]),
        t2,
        a2,
        config.tol,
        "T2 against omega times the additive twist at -q/(lN)",
    );

    let k = match config.bound_constant {
        Some(k) => k,
        None => reciprocity_constant(ev)?,
    };
    let ratio = l as f64 / q as f64;
    let main_residual = (t1 - t2 - central).norm();
    let main = VerificationReport::with_residual(
        IdentityTag::Reciprocity,
        base(vec![
            ("T1", c_json(t1)),
            ("T2", c_json(t2)),
            ("central_value", c_json(central)),
            ("bound_constant", json!(k)),
            ("omega", json!(omega)),
        ]),
        t1 - t2,
        central,
        main_residual,
        k * ratio + config.tol,
        format!("tolerance = K l/q + tol with K = {k:.6e}; residual / (l/q) = {:.6e}", main_residual / ratio),
    );

    let cor1 = if config.corollary_one {
        if n != 1 || !is_prime(l) || !is_prime(q) || l < 3 {
            return Err(Error::InvalidArgument(
                "the primitive-character variant needs level 1 and primes 3 <= l < q".into(),
            ));
        }
        let s1 = moment_sum(&mom_q, &chars_q, l as i64, true) / primitive_count(q) as f64;
        let s2 = moment_sum(&mom_ln, &chars_ln, -(q as i64), true) / primitive_count(l) as f64;
        let residual = (s1 - s2 - central).norm();
        // principal-character terms are at most (2 sqrt(p) + 2) |L| / (p - 1) <= 5 |L| / sqrt(p)
        let kc = config.bound_constant.unwrap_or(k + 5.0 * central.norm() + 1.0);
        let scale = ratio + 1.0 / (l as f64).sqrt();
        Some(VerificationReport::with_residual(
            IdentityTag::Cor1,
            base(vec![
                ("T1_star", c_json(s1)),
                ("T2_star", c_json(s2)),
                ("central_value", c_json(central)),
                ("bound_constant", json!(kc)),
            ]),
            s1 - s2,
            central,
            residual,
            kc * scale + config.tol,
            format!("tolerance = K (l/q + 1/sqrt(l)) + tol with K = {kc:.6e}"),
        ))
    } else {
        None
    };
    Ok(ReciprocityOutcome { t1: t1_report, t2: t2_report, main, cor1 })
}
