//! The `grsdual` command-line front end.
//!
//! Exit codes: 0 success, 1 failed verification, 2 invalid parameters,
//! 3 I/O error or malformed input.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::constructions::{construct, enumerate_lengths, field_for_square, Case, ConstructionParams, Theorem};
use crate::descriptor::{
    elem_from_json, elem_to_json, read_code, to_json, write_atomic, CertificateDescriptor,
    CodeDescriptor, FieldDescriptor,
};
use crate::error::{Error, Result};
use crate::field::{is_prime, Elem, Field};
use crate::grs::{encode, erasure_decode, is_self_dual, mds_check, GrsCode, MdsMode, MdsOptions, MdsReport, SelfDualFailure};
use crate::linalg::rank;
use crate::mobius::{remove_infinity, transport, MobiusTransform, TransportCertificate};
use crate::selfdual::pless_exists;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_PARAMS: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "grsdual", version, about = "MDS self-dual codes from generalized Reed-Solomon codes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the field descriptor for GF(q) or GF(p^m).
    Field(FieldArgs),
    /// Build a self-dual code from coset parameters.
    Construct(ConstructArgs),
    /// Check self-duality and the MDS property of a code file.
    Verify(VerifyArgs),
    /// List reachable lengths with witness parameters as JSON lines.
    Enumerate(EnumerateArgs),
    /// Transport a self-dual code by a Mobius transform.
    Mobius(MobiusArgs),
    /// Move a self-dual code off the point at infinity.
    RemoveInfinity(RemoveInfinityArgs),
    /// Encode a message with a code.
    Encode(EncodeArgs),
    /// Recover a message from a word with erasures.
    Decode(DecodeArgs),
}

#[derive(Args, Debug)]
pub struct FieldArgs {
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long, value_parser = parse_theorem)]
    pub theorem: Theorem,
    #[arg(long = "case")]
    pub case: Case,
    #[arg(long)]
    pub nprime: u64,
    #[arg(long)]
    pub t: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub no_matrix: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Code descriptor (alternatively `--in`).
    pub path: Option<PathBuf>,
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    #[arg(long, default_value = "auto")]
    pub mds: MdsMode,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub max_n: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TransformArgs {
    /// `a,b,c,d` or one entry per flag; GF(p) coefficients inside an entry
    /// are separated by `:`.
    #[arg(long = "g")]
    pub g: Vec<String>,
    /// `a,b,c,d` with entries `0`, `1`, `w` or `w^i`.
    #[arg(long = "g-dlog")]
    pub g_dlog: Option<String>,
}

#[derive(Args, Debug)]
pub struct MobiusArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[command(flatten)]
    pub transform: TransformArgs,
    /// Transported code descriptor.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Transport certificate.
    #[arg(long)]
    pub cert: Option<PathBuf>,
    #[arg(long)]
    pub no_matrix: bool,
}

#[derive(Args, Debug)]
pub struct RemoveInfinityArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub cert: Option<PathBuf>,
    #[arg(long)]
    pub no_matrix: bool,
}

#[derive(Args, Debug)]
pub struct EncodeArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// JSON array of elements, or whitespace-separated hex symbol indices.
    #[arg(long)]
    pub message: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DecodeArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Like a message file; `null` (JSON) or `-` (hex) marks an erasure.
    #[arg(long)]
    pub word: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_theorem(s: &str) -> std::result::Result<Theorem, String> {
    let v: u8 = s.parse().map_err(|_| format!("theorem must be 1 or 2, got {s:?}"))?;
    Theorem::try_from(v)
}

/// Summary of all checks run by `verify`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub n: usize,
    pub k: usize,
    pub q: u64,
    pub design_distance: usize,
    pub self_dual: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<SelfDualFailure>,
    pub rank: usize,
    pub rank_ok: bool,
    pub generator_consistent: bool,
    pub pless: Option<bool>,
    pub mds: MdsReport,
    pub passed: bool,
}

pub fn verify_code(code: &GrsCode, opts: &MdsOptions) -> Result<VerificationReport> {
    let verdict = is_self_dual(code);
    let r = rank(code.field(), code.generator());
    let consistent = code.generator_consistent();
    let mds = mds_check(code, opts)?;
    let pless = if code.n() % 2 == 0 {
        Some(pless_exists(code.field(), code.n())?)
    } else {
        None
    };
    let passed = verdict.self_dual && r == code.k() && consistent && mds.verdict != Some(false);
    Ok(VerificationReport {
        n: code.n(),
        k: code.k(),
        q: code.field().q(),
        design_distance: code.n() - code.k() + 1,
        self_dual: verdict.self_dual,
        witness: verdict.failure,
        rank: r,
        rank_ok: r == code.k(),
        generator_consistent: consistent,
        pless,
        mds,
        passed,
    })
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Descriptor(_) | Error::Io(_) | Error::Json(_) => EXIT_IO,
        Error::InternalVerificationFailed(_) | Error::NotSelfDual | Error::InconsistentWord => EXIT_VERIFY,
        _ => EXIT_PARAMS,
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => write_atomic(p, text.as_bytes()),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

/// `(p, m)` with `q = p^m`, `p` prime.
fn prime_power(q: u64) -> Option<(u64, u32)> {
    let p = (2..=q).find(|d| q % d == 0)?;
    if !is_prime(p) {
        return None;
    }
    let (mut r, mut m) = (q, 0);
    while r % p == 0 {
        r /= p;
        m += 1;
    }
    (r == 1).then_some((p, m))
}

fn run_field(a: &FieldArgs) -> Result<i32> {
    let f = match (a.q, a.p, a.m) {
        (Some(q), None, None) => {
            let (p, m) = prime_power(q).ok_or_else(|| Error::InvalidParams(format!("{q} is not a prime power")))?;
            Field::new(p, m)?
        }
        (None, Some(p), m) => Field::new(p, m.unwrap_or(1))?,
        _ => return Err(Error::InvalidParams("give either --q or --p [--m]".into())),
    };
    emit(a.out.as_deref(), &to_json(&FieldDescriptor::of(&f))?)?;
    Ok(EXIT_OK)
}

fn run_construct(a: &ConstructArgs) -> Result<i32> {
    let params = ConstructionParams::new(a.q, a.nprime, a.t, a.theorem, a.case)?;
    params.check_case()?;
    let f = field_for_square(a.q)?;
    let code = construct(&f, &params)?;
    emit(a.out.as_deref(), &to_json(&CodeDescriptor::of(&code, !a.no_matrix))?)?;
    Ok(EXIT_OK)
}

fn run_verify(a: &VerifyArgs) -> Result<i32> {
    let path = match (&a.path, &a.input) {
        (Some(p), None) | (None, Some(p)) => p,
        _ => return Err(Error::InvalidParams("give the code file once, positionally or with --in".into())),
    };
    let code = read_code(path)?;
    let opts = MdsOptions {
        seed: a.seed,
        ..MdsOptions::with_mode(a.mds)
    };
    let report = verify_code(&code, &opts)?;
    emit(a.out.as_deref(), &to_json(&report)?)?;
    Ok(if report.passed { EXIT_OK } else { EXIT_VERIFY })
}

fn run_enumerate(a: &EnumerateArgs) -> Result<i32> {
    let mut text = String::new();
    for entry in enumerate_lengths(a.q, a.max_n)? {
        text.push_str(&serde_json::to_string(&entry)?);
        text.push('\n');
    }
    emit(a.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}

fn parse_coeff_entry(field: &Field, s: &str) -> Result<Elem> {
    let coeffs = s
        .split(':')
        .map(|t| t.trim().parse::<u64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| Error::InvalidParams(format!("bad coefficient list {s:?}")))?;
    let m = field.m() as usize;
    if coeffs.len() > m {
        return Err(Error::InvalidParams(format!("{s:?} has more than {m} coefficients")));
    }
    let mut padded = coeffs;
    padded.resize(m, 0);
    field
        .from_coeffs(&padded)
        .map_err(|_| Error::InvalidParams(format!("coefficient out of range in {s:?}")))
}

fn parse_dlog_entry(field: &Field, s: &str) -> Result<Elem> {
    match s.trim() {
        "0" => Ok(field.zero()),
        "1" => Ok(field.one()),
        "w" => Ok(field.primitive()),
        t => {
            let i = t
                .strip_prefix("w^")
                .and_then(|e| e.parse::<i64>().ok())
                .ok_or_else(|| Error::InvalidParams(format!("bad dlog entry {t:?}")))?;
            Ok(field.exp(i))
        }
    }
}

/// Reads `--g` / `--g-dlog` into a transform over `field`.
pub fn parse_transform(field: &Field, a: &TransformArgs) -> Result<MobiusTransform> {
    let entries = match (&a.g_dlog, a.g.is_empty()) {
        (Some(s), true) => s
            .split(',')
            .map(|t| parse_dlog_entry(field, t))
            .collect::<Result<Vec<_>>>()?,
        (None, false) => a
            .g
            .iter()
            .flat_map(|s| s.split(','))
            .map(|t| parse_coeff_entry(field, t))
            .collect::<Result<Vec<_>>>()?,
        _ => return Err(Error::InvalidParams("give exactly one of --g or --g-dlog".into())),
    };
    let [a, b, c, d] = entries[..] else {
        return Err(Error::InvalidParams(format!("a transform needs 4 entries, got {}", entries.len())));
    };
    MobiusTransform::new(field, a, b, c, d)
}

fn emit_certificate(
    cert: &TransportCertificate,
    out: Option<&Path>,
    cert_path: Option<&Path>,
    with_matrix: bool,
) -> Result<()> {
    if let Some(p) = out {
        write_atomic(p, to_json(&CodeDescriptor::of(&cert.transported, with_matrix))?.as_bytes())?;
    }
    if cert_path.is_some() || out.is_none() {
        emit(cert_path, &to_json(&CertificateDescriptor::of(cert, with_matrix))?)?;
    }
    Ok(())
}

fn run_mobius(a: &MobiusArgs) -> Result<i32> {
    let code = read_code(&a.input)?;
    let g = parse_transform(code.field(), &a.transform)?;
    let cert = transport(&code, &g)?;
    emit_certificate(&cert, a.out.as_deref(), a.cert.as_deref(), !a.no_matrix)?;
    Ok(EXIT_OK)
}

fn run_remove_infinity(a: &RemoveInfinityArgs) -> Result<i32> {
    let code = read_code(&a.input)?;
    let cert = remove_infinity(&code)?;
    emit_certificate(&cert, a.out.as_deref(), a.cert.as_deref(), !a.no_matrix)?;
    Ok(EXIT_OK)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum SymbolFormat {
    Json,
    Hex,
}

/// Reads a symbol file. JSON: an array of coefficient lists or `null`.
/// Hex: whitespace-separated symbol indices `sum c_i p^i`, `-` for missing.
fn read_symbols(field: &Field, path: &Path) -> Result<(Vec<Option<Elem>>, SymbolFormat)> {
    let text = std::fs::read_to_string(path)?;
    if text.trim_start().starts_with('[') {
        let raw: Vec<Option<Vec<u64>>> =
            serde_json::from_str(&text).map_err(|e| Error::Descriptor(e.to_string()))?;
        let syms = raw
            .iter()
            .map(|s| s.as_ref().map(|c| elem_from_json(field, c)).transpose())
            .collect::<Result<Vec<_>>>()?;
        return Ok((syms, SymbolFormat::Json));
    }
    let syms = text
        .split_whitespace()
        .map(|tok| {
            if tok == "-" {
                return Ok(None);
            }
            let raw = u32::from_str_radix(tok, 16)
                .map_err(|_| Error::Descriptor(format!("bad hex symbol {tok:?}")))?;
            field
                .from_raw(raw)
                .map(Some)
                .map_err(|_| Error::Descriptor(format!("symbol {tok} outside the field")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((syms, SymbolFormat::Hex))
}

fn write_symbols(field: &Field, syms: &[Elem], fmt: SymbolFormat) -> Result<String> {
    Ok(match fmt {
        SymbolFormat::Json => {
            let v: Vec<Vec<u64>> = syms.iter().map(|&e| elem_to_json(field, e)).collect();
            let mut s = serde_json::to_string(&v)?;
            s.push('\n');
            s
        }
        SymbolFormat::Hex => {
            let width = format!("{:x}", field.q() - 1).len();
            let mut s = syms
                .iter()
                .map(|e| format!("{:0width$x}", e.raw()))
                .collect::<Vec<_>>()
                .join(" ");
            s.push('\n');
            s
        }
    })
}

fn run_encode(a: &EncodeArgs) -> Result<i32> {
    let code = read_code(&a.input)?;
    let f = code.field();
    let (msg, fmt) = read_symbols(f, &a.message)?;
    let msg = msg
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::InvalidParams("a message cannot contain erasures".into()))?;
    let word = encode(&code, &msg)?;
    emit(a.out.as_deref(), &write_symbols(f, &word, fmt)?)?;
    Ok(EXIT_OK)
}

fn run_decode(a: &DecodeArgs) -> Result<i32> {
    let code = read_code(&a.input)?;
    let f = code.field();
    let (word, fmt) = read_symbols(f, &a.word)?;
    let msg = erasure_decode(&code, &word)?;
    emit(a.out.as_deref(), &write_symbols(f, &msg, fmt)?)?;
    Ok(EXIT_OK)
}

pub fn execute(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Field(a) => run_field(a),
        Command::Construct(a) => run_construct(a),
        Command::Verify(a) => run_verify(a),
        Command::Enumerate(a) => run_enumerate(a),
        Command::Mobius(a) => run_mobius(a),
        Command::RemoveInfinity(a) => run_remove_infinity(a),
        Command::Encode(a) => run_encode(a),
        Command::Decode(a) => run_decode(a),
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_PARAMS,
            };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(625), Some((5, 4)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(12), None);
    }

    #[test]
    fn transform_flags() {
        let f = Field::new(3, 2).unwrap();
        let a = TransformArgs {
            g: vec!["0,1:0".into(), "1".into(), "0:0".into()],
            g_dlog: None,
        };
        let g = parse_transform(&f, &a).unwrap();
        assert_eq!(g.coefficients(), [f.zero(), f.one(), f.one(), f.zero()]);
        let a = TransformArgs {
            g: vec![],
            g_dlog: Some("0,1,w^0,0".into()),
        };
        assert_eq!(parse_transform(&f, &a).unwrap(), g);
        let a = TransformArgs {
            g: vec!["1,1,1,1".into()],
            g_dlog: None,
        };
        assert!(matches!(parse_transform(&f, &a), Err(Error::SingularTransform)));
        let a = TransformArgs {
            g: vec!["1,2".into()],
            g_dlog: None,
        };
        assert!(matches!(parse_transform(&f, &a), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(["grsdual", "construct", "--q", "27", "--theorem", "1", "--case", "i", "--nprime", "2", "--t", "1"]), EXIT_PARAMS);
        assert_eq!(run(["grsdual", "verify", "/nonexistent/file.json"]), EXIT_IO);
        assert_eq!(run(["grsdual", "bogus"]), EXIT_PARAMS);
    }
}
