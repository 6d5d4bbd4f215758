//! Command-line front end.
//!
//! Exit status: 0 when every report passes, 1 when one fails, 2 on bad input.
//! `scan` and `infinity` return 0 once their data is written.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use crate::arith::gcd_u64;
use crate::characters::enumerate_characters;
use crate::error::{Error, Result};
use crate::forms::{delta_coefficients, fricke_eigenvalue, newform_from_curve, CuspForm, EllipticCurveModel};
use crate::identities::{
    infinity_experiment, verify_birch_stevens_with, verify_fe, verify_fricke_qmf, verify_infinity, verify_qmf,
    verify_reciprocity, ExperimentTable, NuReading, ReciprocityConfig, VerificationReport,
};
use crate::ltwist::{build_unfolding_matrix, Coset, CuspPoint, EvalResult, ModularMatrix, TwistEvaluator, UnfoldingMatrix};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Which cusp form to load.
#[derive(Debug, Clone, PartialEq)]
pub enum FormSpec {
    Delta,
    Curve(EllipticCurveModel),
}

impl FromStr for FormSpec {
    type Err = String;

    /// `delta`, `11a`, or `curve:a1,a2,a3,a4,a6:N[:p=ap,...]`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "delta" => return Ok(Self::Delta),
            "11a" | "11a1" => return Ok(Self::Curve(EllipticCurveModel::x0_11())),
            _ => {}
        }
        let rest = s
            .strip_prefix("curve:")
            .ok_or_else(|| format!("unknown form '{s}' (expected delta, 11a or curve:a1,a2,a3,a4,a6:N:p=ap,...)"))?;
        let mut parts = rest.split(':');
        let coeffs: Vec<i64> = parts
            .next()
            .unwrap_or("")
            .split(',')
            .map(|x| x.trim().parse::<i64>().map_err(|e| format!("bad coefficient '{x}': {e}")))
            .collect::<std::result::Result<_, _>>()?;
        let coeffs: [i64; 5] = coeffs
            .try_into()
            .map_err(|_| "a curve needs exactly five coefficients a1,a2,a3,a4,a6".to_string())?;
        let conductor: u64 = parts
            .next()
            .ok_or("missing conductor")?
            .parse()
            .map_err(|e| format!("bad conductor: {e}"))?;
        let mut bad = Vec::new();
        if let Some(list) = parts.next() {
            for item in list.split(',').filter(|x| !x.is_empty()) {
                let (p, ap) = item.split_once('=').ok_or_else(|| format!("bad prime entry '{item}', want p=ap"))?;
                let p: u64 = p.parse().map_err(|e| format!("bad prime '{p}': {e}"))?;
                let ap: i8 = ap.parse().map_err(|e| format!("bad a_p '{ap}': {e}"))?;
                bad.push((p, ap));
            }
        }
        if parts.next().is_some() {
            return Err("too many ':' separated fields".into());
        }
        EllipticCurveModel::new(coeffs, conductor, bad).map(Self::Curve).map_err(|e| e.to_string())
    }
}

impl FormSpec {
    /// Loads the form with `n_max` coefficients and its Fricke eigenvalue.
    pub fn load(&self, n_max: usize) -> Result<CuspForm> {
        let mut f = match self {
            Self::Delta => delta_coefficients(n_max)?,
            Self::Curve(c) => newform_from_curve(c.clone(), n_max)?,
        };
        fricke_eigenvalue(&mut f)?;
        Ok(f)
    }
}

fn parse_matrix(s: &str) -> std::result::Result<[i64; 4], String> {
    let v: Vec<i64> = s
        .split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|e| format!("bad matrix entry '{x}': {e}")))
        .collect::<std::result::Result<_, _>>()?;
    v.try_into().map_err(|_| "a matrix needs four entries a,b,c,d".to_string())
}

fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let (re, im) = s.split_once(',').unwrap_or((s, "0"));
    let re = re.trim().parse::<f64>().map_err(|e| format!("bad real part: {e}"))?;
    let im = im.trim().parse::<f64>().map_err(|e| format!("bad imaginary part: {e}"))?;
    Ok(Complex64::new(re, im))
}

fn positive(s: &str) -> std::result::Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        Ok(x) => Err(format!("{x} is not a positive number")),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CosetArg {
    Gamma0,
    Fricke,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReadingArg {
    Level,
    Modulus,
}

impl From<ReadingArg> for NuReading {
    fn from(r: ReadingArg) -> Self {
        match r {
            ReadingArg::Level => NuReading::Level,
            ReadingArg::Modulus => NuReading::CharacterModulus,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// delta, 11a, or curve:a1,a2,a3,a4,a6:N:p=ap,...
    #[arg(long, default_value = "delta")]
    pub form: FormSpec,
    /// Target truncation error of each twist evaluation. Verifiers tighten it to
    /// at most `tol * 1e-5` since their correction terms amplify evaluation error.
    #[arg(long, default_value = "1e-9", value_parser = positive)]
    pub eps: f64,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Initial size of the coefficient table.
    #[arg(long, default_value_t = 2000)]
    pub n_max: usize,
}

#[derive(Debug, Clone, Args)]
pub struct TolArg {
    #[arg(long, default_value = "1e-6", value_parser = positive)]
    pub tol: f64,
}

/// Parsed command line.
#[derive(Debug, Parser)]
#[command(name = "lfun-twists", version, about = "Additive twists of cuspidal L-functions and their modular identities")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fourier coefficients a(1..=n) as CSV.
    Coeffs {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: usize,
    },
    /// L(f x e(r), s) at one or more cusps.
    Eval {
        #[command(flatten)]
        common: Common,
        /// Cusp a/c; may be repeated.
        #[arg(long, required = true, allow_hyphen_values = true)]
        r: Vec<CuspPoint>,
        /// Defaults to k/2.
        #[arg(long)]
        s: Option<f64>,
    },
    /// Functional equation of the completed twist.
    VerifyFe {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        tol: TolArg,
        /// Cusp a/c; the unfolding matrix is built from it.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "matrix")]
        r: Option<CuspPoint>,
        /// Explicit unfolding matrix a,b,c,d.
        #[arg(long, value_parser = parse_matrix, allow_hyphen_values = true)]
        matrix: Option<[i64; 4]>,
        #[arg(long, value_enum, default_value = "gamma0")]
        coset: CosetArg,
        /// Defaults to k/2.
        #[arg(long)]
        s: Option<f64>,
    },
    /// Quantum modularity under gamma in Gamma_0(N).
    VerifyQmf {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        tol: TolArg,
        #[arg(long, value_parser = parse_matrix, allow_hyphen_values = true)]
        gamma: [i64; 4],
        #[arg(long, required = true, allow_hyphen_values = true)]
        r: Vec<CuspPoint>,
    },
    /// Quantum modularity under the Fricke involution.
    VerifyFricke {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        tol: TolArg,
        #[arg(long, required = true, allow_hyphen_values = true)]
        r: Vec<CuspPoint>,
    },
    /// Birch-Stevens formula for characters mod q.
    VerifyBs {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        tol: TolArg,
        #[arg(long)]
        q: u64,
        /// Index into the character enumeration mod q; all characters if omitted.
        #[arg(long)]
        character: Option<usize>,
        #[arg(long, value_enum, default_value = "level")]
        nu_reading: ReadingArg,
    },
    /// Reciprocity between character moments mod q and mod lN.
    Reciprocity {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        tol: TolArg,
        #[arg(long)]
        l: u64,
        #[arg(long)]
        q: u64,
        /// Constant K in the O(l/q) bound; an a priori value is used if omitted.
        #[arg(long)]
        bound_constant: Option<f64>,
        /// Add the primitive-character variant (level 1, prime l and q).
        #[arg(long)]
        cor1: bool,
        #[arg(long, default_value_t = 2000)]
        max_modulus: u64,
        #[arg(long, value_enum, default_value = "level")]
        nu_reading: ReadingArg,
    },
    /// Relation at oo: antisymmetry check in weight 2 and the approach table.
    Infinity {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        tol: TolArg,
        #[arg(long, value_parser = parse_matrix, allow_hyphen_values = true, default_value = "0,-1,1,0")]
        gamma: [i64; 4],
        /// Cusps approaching gamma^(-1) oo; defaults to 1/q, q in {11, 23, 47, 97}, moved by gamma^(-1) oo.
        #[arg(long, allow_hyphen_values = true)]
        approach: Vec<CuspPoint>,
        /// Value assigned to L(f x e(oo), k/2), as re[,im].
        #[arg(long, value_parser = parse_complex, default_value = "0", allow_hyphen_values = true)]
        candidate: Complex64,
    },
    /// Central values L(f x e(a/q), k/2) over reduced fractions as CSV.
    Scan {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        q_min: u64,
        #[arg(long)]
        q_max: u64,
        /// Maximum number of twist evaluations; output is marked as truncated beyond it.
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
    },
    /// Dirichlet characters mod q.
    Characters {
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn open<'a>(output: &Option<PathBuf>, stdout: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>> {
    match output {
        Some(p) => {
            let f = File::create(p).map_err(|e| Error::InvalidArgument(format!("cannot create {}: {e}", p.display())))?;
            Ok(Box::new(BufWriter::new(f)))
        }
        None => Ok(Box::new(stdout)),
    }
}

fn io_err(e: io::Error) -> Error {
    Error::InvalidArgument(format!("write failed: {e}"))
}

fn csv_err(e: csv::Error) -> Error {
    Error::InvalidArgument(format!("csv output failed: {e}"))
}

fn write_json_lines<T: Serialize>(out: &mut dyn Write, items: &[T]) -> Result<()> {
    for item in items {
        let line = serde_json::to_string(item).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        writeln!(out, "{line}").map_err(io_err)?;
    }
    Ok(())
}

fn write_reports(out: &mut dyn Write, format: Format, reports: &[VerificationReport]) -> Result<()> {
    match format {
        Format::Json => write_json_lines(out, reports),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record([
                "identity", "inputs", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "residual", "tolerance", "pass", "notes",
            ])
            .map_err(csv_err)?;
            for r in reports {
                let tag = serde_json::to_value(r.identity).map_err(|e| Error::InvalidArgument(e.to_string()))?;
                let inputs = serde_json::to_string(&r.inputs).map_err(|e| Error::InvalidArgument(e.to_string()))?;
                w.write_record([
                    tag.as_str().unwrap_or_default().to_string(),
                    inputs,
                    r.lhs[0].to_string(),
                    r.lhs[1].to_string(),
                    r.rhs[0].to_string(),
                    r.rhs[1].to_string(),
                    r.residual.to_string(),
                    r.tolerance.to_string(),
                    r.pass.to_string(),
                    r.notes.clone(),
                ])
                .map_err(csv_err)?;
            }
            w.flush().map_err(io_err)
        }
    }
}

/// Writes evaluation rows `a, c, s, re, im, n_max, tail_bound`.
pub fn write_evaluations(out: &mut dyn Write, format: Format, rows: &[EvalResult]) -> Result<()> {
    #[derive(Serialize)]
    struct Row {
        a: i64,
        c: u64,
        s: f64,
        re: f64,
        im: f64,
        n_max: usize,
        tail_bound: f64,
    }
    let rows: Vec<Row> = rows
        .iter()
        .map(|e| Row {
            a: e.r.numerator(),
            c: e.r.denominator(),
            s: e.s,
            re: e.value.re,
            im: e.value.im,
            n_max: e.n_max_used,
            tail_bound: e.tail_bound,
        })
        .collect();
    match format {
        Format::Json => write_json_lines(out, &rows),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in &rows {
                w.serialize(r).map_err(csv_err)?;
            }
            w.flush().map_err(io_err)
        }
    }
}

fn write_table(out: &mut dyn Write, format: Format, table: &ExperimentTable) -> Result<()> {
    match format {
        Format::Json => write_json_lines(out, std::slice::from_ref(table)),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["r", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "residual_re", "residual_im", "residual_abs"])
                .map_err(csv_err)?;
            for row in &table.rows {
                w.write_record([
                    row.r.clone(),
                    row.lhs[0].to_string(),
                    row.lhs[1].to_string(),
                    row.rhs[0].to_string(),
                    row.rhs[1].to_string(),
                    row.residual[0].to_string(),
                    row.residual[1].to_string(),
                    row.residual_abs.to_string(),
                ])
                .map_err(csv_err)?;
            }
            w.flush().map_err(io_err)
        }
    }
}

fn verdict(reports: &[VerificationReport]) -> i32 {
    if reports.iter().all(|r| r.pass) {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn central(f: &CuspForm, s: Option<f64>) -> f64 {
    s.unwrap_or(f.weight() as f64 / 2.0)
}

fn matrix_from(gamma: [i64; 4], level: u64) -> Result<ModularMatrix> {
    let [a, b, c, d] = gamma;
    ModularMatrix::new(a, b, c, d, level)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_PASS
            };
        }
    };
    match execute(&config, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

/// Runs a parsed configuration, returning the exit status.
pub fn execute(config: &RunConfig, stdout: &mut dyn Write) -> Result<i32> {
    match &config.command {
        Command::Coeffs { common, n } => {
            let f = common.form.load((*n).max(1))?;
            let mut out = open(&common.output, stdout)?;
            f.write_coefficients_csv(*n, &mut out)?;
            out.flush().map_err(io_err)?;
            Ok(EXIT_PASS)
        }
        Command::Eval { common, r, s } => {
            let f = common.form.load(common.n_max)?;
            let ev = TwistEvaluator::new(&f, common.eps)?;
            let s = central(&f, *s);
            let rows = r.iter().map(|r| ev.twist(r, s)).collect::<Result<Vec<_>>>()?;
            let mut out = open(&common.output, stdout)?;
            write_evaluations(&mut out, common.format, &rows)?;
            out.flush().map_err(io_err)?;
            Ok(EXIT_PASS)
        }
        Command::VerifyFe { common, tol, r, matrix, coset, s } => {
            let f = common.form.load(common.n_max)?;
            let ev = TwistEvaluator::new(&f, verifier_eps(common.eps, tol.tol))?;
            let m = match (r, matrix) {
                (Some(r), None) => build_unfolding_matrix(r, f.level())?,
                (None, Some(m)) => {
                    let coset = match coset {
                        CosetArg::Gamma0 => Coset::Gamma0,
                        CosetArg::Fricke => Coset::Fricke,
                    };
                    UnfoldingMatrix::new(*m, coset, f.level())?
                }
                _ => return Err(Error::InvalidArgument("give exactly one of --r and --matrix".into())),
            };
            let report = verify_fe(&ev, &m, central(&f, *s), tol.tol)?;
            emit_reports(common, stdout, vec![report])
        }
        Command::VerifyQmf { common, tol, gamma, r } => {
            let f = common.form.load(common.n_max)?;
            let ev = TwistEvaluator::new(&f, verifier_eps(common.eps, tol.tol))?;
            let g = matrix_from(*gamma, f.level())?;
            let reports = r.iter().map(|r| verify_qmf(&ev, &g, r, tol.tol)).collect::<Result<Vec<_>>>()?;
            emit_reports(common, stdout, reports)
        }
        Command::VerifyFricke { common, tol, r } => {
            let f = common.form.load(common.n_max)?;
            let ev = TwistEvaluator::new(&f, verifier_eps(common.eps, tol.tol))?;
            let reports = r.iter().map(|r| verify_fricke_qmf(&ev, r, tol.tol)).collect::<Result<Vec<_>>>()?;
            emit_reports(common, stdout, reports)
        }
        Command::VerifyBs { common, tol, q, character, nu_reading } => {
            let f = common.form.load(common.n_max)?;
            let ev = TwistEvaluator::new(&f, verifier_eps(common.eps, tol.tol))?;
            let chars = enumerate_characters(*q)?;
            let picked: Vec<_> = match character {
                Some(i) => vec![chars
                    .get(*i)
                    .ok_or_else(|| Error::InvalidArgument(format!("there are {} characters mod {q}", chars.len())))?
                    .clone()],
                None => chars,
            };
            let mut reports = Vec::new();
            for chi in &picked {
                let o = verify_birch_stevens_with(&ev, chi, (*nu_reading).into(), tol.tol)?;
                reports.extend(o.reports().cloned());
            }
            emit_reports(common, stdout, reports)
        }
        Command::Reciprocity { common, tol, l, q, bound_constant, cor1, max_modulus, nu_reading } => {
            let f = common.form.load(common.n_max)?;
            let ev = TwistEvaluator::new(&f, verifier_eps(common.eps, tol.tol))?;
            let cfg = ReciprocityConfig {
                tol: tol.tol,
                bound_constant: *bound_constant,
                corollary_one: *cor1,
                max_modulus: *max_modulus,
                nu_reading: (*nu_reading).into(),
            };
            let o = verify_reciprocity(&ev, *l, *q, &cfg)?;
            emit_reports(common, stdout, o.reports().cloned().collect())
        }
        Command::Infinity { common, tol, gamma, approach, candidate } => {
            let f = common.form.load(common.n_max)?;
            let ev = TwistEvaluator::new(&f, verifier_eps(common.eps, tol.tol))?;
            let g = matrix_from(*gamma, f.level())?;
            let approach = if approach.is_empty() { default_approach(&g, f.level())? } else { approach.clone() };
            let table = infinity_experiment(&ev, &g, &approach, *candidate)?;
            let mut out = open(&common.output, stdout)?;
            if f.weight() == 2 {
                write_reports(&mut out, common.format, &[verify_infinity(&ev, &g, tol.tol)?])?;
            }
            write_table(&mut out, common.format, &table)?;
            out.flush().map_err(io_err)?;
            Ok(EXIT_PASS)
        }
        Command::Scan { common, q_min, q_max, budget } => {
            let f = common.form.load(common.n_max)?;
            let ev = TwistEvaluator::new(&f, common.eps)?;
            let mut out = open(&common.output, stdout)?;
            scan(&ev, *q_min, *q_max, *budget, &mut out)?;
            out.flush().map_err(io_err)?;
            Ok(EXIT_PASS)
        }
        Command::Characters { q, format, output } => {
            let records: Vec<_> = enumerate_characters(*q)?.iter().map(|c| c.record()).collect();
            let mut out = open(output, stdout)?;
            match format {
                Format::Json => write_json_lines(&mut out, &records)?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut out);
                    w.write_record(["index", "modulus", "exponents", "order", "conductor"]).map_err(csv_err)?;
                    for (i, r) in records.iter().enumerate() {
                        let exps: Vec<String> = r.exponents.iter().map(u64::to_string).collect();
                        w.write_record([
                            i.to_string(),
                            r.modulus.to_string(),
                            exps.join(" "),
                            r.order.to_string(),
                            r.conductor.to_string(),
                        ])
                        .map_err(csv_err)?;
                    }
                    w.flush().map_err(io_err)?;
                }
            }
            out.flush().map_err(io_err)?;
            Ok(EXIT_PASS)
        }
    }
}

/// Evaluator accuracy used by the verifiers.
pub fn verifier_eps(eps: f64, tol: f64) -> f64 {
    eps.min((tol * 1e-5).max(1e-14))
}

fn emit_reports(common: &Common, stdout: &mut dyn Write, reports: Vec<VerificationReport>) -> Result<i32> {
    let mut out = open(&common.output, stdout)?;
    write_reports(&mut out, common.format, &reports)?;
    out.flush().map_err(io_err)?;
    Ok(verdict(&reports))
}

/// `gamma^(-1) oo + 1/(N q)` for `q` in {11, 23, 47, 97} (plain `1/q` at level 1).
pub fn default_approach(gamma: &ModularMatrix, level: u64) -> Result<Vec<CuspPoint>> {
    let target = gamma.inverse().act(&CuspPoint::infinity());
    if target.is_infinity() {
        return Err(Error::InvalidArgument("gamma fixes oo".into()));
    }
    let (a, c) = (target.numerator() as i128, target.denominator() as i128);
    [11i128, 23, 47, 97]
        .iter()
        .map(|&q| {
            let den = c * level as i128 * q;
            let num = a * level as i128 * q + c;
            let g = crate::arith::gcd(num as i64, den as i64) as i128;
            CuspPoint::new((num / g) as i64, (den / g) as i64)
        })
        .collect()
}

/// Writes `a,q,re,im` for reduced `a/q` with `0 <= a < q`, `q_min <= q <= q_max`.
pub fn scan(ev: &TwistEvaluator<'_>, q_min: u64, q_max: u64, budget: usize, out: &mut dyn Write) -> Result<()> {
    if q_min == 0 || q_max < q_min {
        return Err(Error::InvalidArgument(format!("bad denominator range {q_min}..={q_max}")));
    }
    let h = ev.form().weight() as f64 / 2.0;
    writeln!(out, "a,q,re,im").map_err(io_err)?;
    let mut used = 0usize;
    for q in q_min..=q_max {
        for a in 0..q {
            if gcd_u64(a, q) != 1 {
                continue;
            }
            if used == budget {
                writeln!(out, "# truncated: evaluation budget {budget} exhausted at {a}/{q}").map_err(io_err)?;
                return Ok(());
            }
            let r = CuspPoint::new(a as i64, q as i64)?;
            let v = ev.twist(&r, h)?.value;
            used += 1;
            writeln!(out, "{a},{q},{},{}", v.re, v.im).map_err(io_err)?;
        }
    }
    Ok(())
}

/// JSON value of a report, as emitted by the CLI.
pub fn report_json(report: &VerificationReport) -> serde_json::Value {
    serde_json::to_value(report).unwrap_or_else(|e| json!({ "error": e.to_string() }))
}
