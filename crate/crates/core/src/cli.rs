//! Command line front end.
//!
//! Every command reads a JSON payload (from `--input`, with individual flags
//! overriding its fields) and writes one JSON document. Scalars travel as
//! strings in the base domain's textual encoding; algebra elements are
//! ascending coefficient arrays.

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::etale::{AlgebraElement, EtaleAlgebra};
use crate::matrix::{self, Matrix};
use crate::oracle::{self, FiniteAlgebra};
use crate::poly::PolyRing;
use crate::quadform::QuadraticSpace;
use crate::scalar::{DeterministicSampler, LocalFunctions, PrimeField, Rationals, Ring, ScalarDomain};
use crate::spinor::{self, Isometry, ReflectionDecomposition};
use crate::witness::{self, Witness, WitnessFactor};

#[derive(Debug, Parser)]
#[command(name = "quadnorm", version, about = "Norm-principle witnesses and spinor norms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a witness for N(q_E(u)).
    Witness(Args),
    /// Re-check a witness document.
    Verify(Args),
    /// Norm of an element, or of q_E(u).
    Norm(Args),
    /// Spinor norm of an isometry.
    SpinorNorm(Args),
    /// Reflection decomposition of an isometry.
    Decompose(Args),
    /// Even-parity witness for N(SN_E(g)).
    TransferCheck(Args),
    /// Exhaustive checks over a small prime field.
    Oracle(Args),
}

#[derive(Debug, clap::Args)]
struct Args {
    /// Q, Fp:<p> or Qx0.
    #[arg(long)]
    base: Option<String>,
    /// JSON matrix, or I<m> for the identity.
    #[arg(long)]
    gram: Option<String>,
    /// JSON coefficient array, constant term first.
    #[arg(long)]
    modulus: Option<String>,
    /// JSON array of algebra elements.
    #[arg(long)]
    vector: Option<String>,
    /// JSON coefficient array.
    #[arg(long)]
    element: Option<String>,
    /// JSON row-major matrix.
    #[arg(long)]
    matrix: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    retries: Option<usize>,
    #[arg(long)]
    height: Option<u32>,
    #[arg(long = "max-rank")]
    max_rank: Option<usize>,
    #[arg(long = "max-degree")]
    max_degree: Option<usize>,
    /// JSON payload; flags override its fields.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Write the result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// What the process should print and return.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            return Outcome { code, stdout: String::new(), stderr: e.render().to_string() };
        }
    };
    let (name, args) = match &cli.command {
        Command::Witness(a) => ("witness", a),
        Command::Verify(a) => ("verify", a),
        Command::Norm(a) => ("norm", a),
        Command::SpinorNorm(a) => ("spinor-norm", a),
        Command::Decompose(a) => ("decompose", a),
        Command::TransferCheck(a) => ("transfer-check", a),
        Command::Oracle(a) => ("oracle", a),
    };
    let result = payload(args).and_then(|p| dispatch(name, &p));
    match result {
        Ok((value, code)) => {
            let text = pretty(&value);
            if let Some(path) = &args.out {
                if let Err(e) = std::fs::write(path, &text) {
                    let err = Error::Parse(format!("cannot write {}: {e}", path.display()));
                    return failure(&err);
                }
                return Outcome { code, stdout: String::new(), stderr: String::new() };
            }
            Outcome { code, stdout: text, stderr: String::new() }
        }
        Err(e) => failure(&e),
    }
}

fn pretty(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    text.push('\n');
    text
}

fn failure(e: &Error) -> Outcome {
    let body = json!({ "error": e.code(), "message": e.to_string() });
    Outcome { code: e.exit_code(), stdout: pretty(&body), stderr: format!("error: {e}\n") }
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn json_flag(name: &str, text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| parse_err(format!("--{name}: invalid JSON: {e}")))
}

/// Merges `--input` with the individual flags.
fn payload(args: &Args) -> Result<Map<String, Value>> {
    let mut map = match &args.input {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| parse_err(format!("cannot read {}: {e}", path.display())))?;
            match serde_json::from_str(&text) {
                Ok(Value::Object(m)) => m,
                Ok(_) => return Err(parse_err(format!("{}: payload must be a JSON object", path.display()))),
                Err(e) => return Err(parse_err(format!("{}: invalid JSON: {e}", path.display()))),
            }
        }
        None => Map::new(),
    };
    if let Some(b) = &args.base {
        map.insert("base".into(), Value::String(b.clone()));
    }
    if let Some(g) = &args.gram {
        let v = if g.trim_start().starts_with('[') { json_flag("gram", g)? } else { Value::String(g.trim().into()) };
        map.insert("gram".into(), v);
    }
    for (name, flag) in [("modulus", &args.modulus), ("vector", &args.vector), ("element", &args.element), ("matrix", &args.matrix)] {
        if let Some(text) = flag {
            map.insert(name.into(), json_flag(name, text)?);
        }
    }
    if let Some(s) = args.seed {
        map.insert("seed".into(), s.into());
    }
    if let Some(r) = args.retries {
        map.insert("retries".into(), r.into());
    }
    if let Some(h) = args.height {
        map.insert("height".into(), h.into());
    }
    if let Some(r) = args.max_rank {
        map.insert("max_rank".into(), r.into());
    }
    if let Some(d) = args.max_degree {
        map.insert("max_degree".into(), d.into());
    }
    Ok(map)
}

fn dispatch(command: &str, payload: &Map<String, Value>) -> Result<(Value, i32)> {
    let base = match payload.get("base") {
        None => "Q".to_string(),
        Some(Value::String(s)) => s.trim().to_string(),
        Some(_) => return Err(parse_err("base: expected a string")),
    };
    if command == "oracle" {
        if !base.starts_with("Fp:") {
            return Err(parse_err(format!("base: oracle needs a prime field Fp:<p>, got {base:?}")));
        }
        return oracle_command(&parse_prime_field(&base)?, payload);
    }
    match base.as_str() {
        "Q" => Context::new(Rationals, payload)?.run(command),
        "Qx0" => Context::new(LocalFunctions, payload)?.run(command),
        _ => Context::new(parse_prime_field(&base)?, payload)?.run(command),
    }
}

fn parse_prime_field(tag: &str) -> Result<PrimeField> {
    let p = tag
        .strip_prefix("Fp:")
        .and_then(|p| p.trim().parse::<u64>().ok())
        .ok_or_else(|| parse_err(format!("base: unknown tag {tag:?}; expected Q, Fp:<p> or Qx0")))?;
    PrimeField::new(p).map_err(|e| parse_err(format!("base: {e}")))
}

fn usize_field(payload: &Map<String, Value>, key: &str, default: usize) -> Result<usize> {
    match payload.get(key) {
        None => Ok(default),
        Some(v) => v
            .as_u64()
            .map(|x| x as usize)
            .ok_or_else(|| parse_err(format!("{key}: expected a nonnegative integer"))),
    }
}

fn oracle_command(field: &PrimeField, payload: &Map<String, Value>) -> Result<(Value, i32)> {
    let ctx = Context::new(*field, payload)?;
    if payload.contains_key("gram") {
        let q = ctx.space()?;
        let fa = if payload.contains_key("modulus") {
            FiniteAlgebra::new(ctx.algebra()?)?
        } else {
            FiniteAlgebra::base(*field)?
        };
        let report = oracle::value_set_report(&q, &fa)?;
        return Ok((serde_json::to_value(report).expect("report serializes"), 0));
    }
    let max_rank = usize_field(payload, "max_rank", 2)?;
    let max_degree = usize_field(payload, "max_degree", 2)?;
    let report = oracle::exhaustive_norm_principle_check(field.modulus(), max_rank, max_degree)?;
    let code = if report.violations == 0 { 0 } else { 3 };
    Ok((serde_json::to_value(report).expect("report serializes"), code))
}

struct Context<'a, D: ScalarDomain> {
    domain: D,
    payload: &'a Map<String, Value>,
    seed: u64,
    retries: usize,
    height: u32,
}

impl<'a, D: ScalarDomain> Context<'a, D> {
    fn new(domain: D, payload: &'a Map<String, Value>) -> Result<Self> {
        let seed = match payload.get("seed") {
            None => 0,
            Some(v) => v.as_u64().ok_or_else(|| parse_err("seed: expected a nonnegative integer"))?,
        };
        let retries = usize_field(payload, "retries", DeterministicSampler::DEFAULT_RETRIES)?;
        if retries == 0 {
            return Err(parse_err("retries: must be positive"));
        }
        let height = usize_field(payload, "height", DeterministicSampler::DEFAULT_HEIGHT as usize)?;
        let height = u32::try_from(height).ok().filter(|&h| h > 0).ok_or_else(|| parse_err("height: must be a positive 32-bit integer"))?;
        Ok(Self { domain, payload, seed, retries, height })
    }

    fn sampler(&self) -> DeterministicSampler {
        DeterministicSampler::with_bounds(self.seed, self.height, self.retries)
    }

    fn field(&self, key: &str) -> Result<&'a Value> {
        self.payload.get(key).ok_or_else(|| parse_err(format!("missing field {key:?}")))
    }

    fn scalar(&self, v: &Value, at: &str) -> Result<D::Elem> {
        let text = match v {
            Value::String(s) => s.clone(),
            Value::Number(n) => n.to_string(),
            _ => return Err(parse_err(format!("{at}: expected a scalar"))),
        };
        self.domain.parse(&text).map_err(|e| match e {
            Error::Parse(m) => parse_err(format!("{at}: {m}")),
            other => parse_err(format!("{at}: {other}")),
        })
    }

    fn array<'v>(&self, v: &'v Value, at: &str) -> Result<&'v Vec<Value>> {
        v.as_array().ok_or_else(|| parse_err(format!("{at}: expected an array")))
    }

    fn scalars(&self, v: &Value, at: &str) -> Result<Vec<D::Elem>> {
        self.array(v, at)?.iter().enumerate().map(|(i, x)| self.scalar(x, &format!("{at}[{i}]"))).collect()
    }

    fn base_matrix(&self, v: &Value, at: &str) -> Result<Matrix<D::Elem>> {
        self.array(v, at)?.iter().enumerate().map(|(i, row)| self.scalars(row, &format!("{at}[{i}]"))).collect()
    }

    fn space(&self) -> Result<QuadraticSpace<D>> {
        let gram = match self.field("gram")? {
            Value::String(s) => {
                let m: usize = s
                    .strip_prefix('I')
                    .and_then(|m| m.parse().ok())
                    .filter(|&m| m > 0)
                    .ok_or_else(|| parse_err(format!("gram: expected a matrix or I<m>, got {s:?}")))?;
                matrix::identity(&self.domain, m)
            }
            v => self.base_matrix(v, "gram")?,
        };
        QuadraticSpace::new(self.domain.clone(), gram).map_err(|e| match e {
            Error::NotSymmetric => parse_err("gram: not symmetric"),
            Error::DimensionMismatch { .. } => parse_err("gram: not square"),
            other => other,
        })
    }

    fn algebra(&self) -> Result<EtaleAlgebra<D>> {
        let coeffs = self.scalars(self.field("modulus")?, "modulus")?;
        if coeffs.len() < 2 {
            return Err(parse_err("modulus: degree must be at least one"));
        }
        if !self.domain.is_one(coeffs.last().unwrap()) {
            return Err(parse_err("modulus: not monic"));
        }
        EtaleAlgebra::new(self.domain.clone(), PolyRing::new(self.domain.clone()).from_coeffs(coeffs))
    }

    fn element(&self, algebra: &EtaleAlgebra<D>, v: &Value, at: &str) -> Result<AlgebraElement<D::Elem>> {
        let coeffs = self.scalars(v, at)?;
        if coeffs.len() > algebra.degree() {
            return Err(parse_err(format!("{at}: more than {} coefficients", algebra.degree())));
        }
        algebra.element(coeffs)
    }

    fn vector(&self, algebra: &EtaleAlgebra<D>, v: &Value, at: &str) -> Result<Vec<AlgebraElement<D::Elem>>> {
        self.array(v, at)?.iter().enumerate().map(|(i, x)| self.element(algebra, x, &format!("{at}[{i}]"))).collect()
    }

    fn render(&self, x: &D::Elem) -> Value {
        Value::String(self.domain.render(x))
    }

    fn render_all(&self, xs: &[D::Elem]) -> Value {
        Value::Array(xs.iter().map(|x| self.render(x)).collect())
    }

    fn render_element(&self, x: &AlgebraElement<D::Elem>) -> Value {
        self.render_all(x.coeffs())
    }

    fn render_vector(&self, xs: &[AlgebraElement<D::Elem>]) -> Value {
        Value::Array(xs.iter().map(|x| self.render_element(x)).collect())
    }

    fn render_matrix(&self, m: &Matrix<D::Elem>) -> Value {
        Value::Array(m.iter().map(|row| self.render_all(row)).collect())
    }

    fn render_factors(&self, factors: &[WitnessFactor<D::Elem>]) -> Value {
        Value::Array(factors.iter().map(|f| json!({ "vector": self.render_all(&f.vector), "value": self.render(&f.value) })).collect())
    }

    fn run(&self, command: &str) -> Result<(Value, i32)> {
        match command {
            "witness" => self.witness().map(|v| (v, 0)),
            "verify" => self.verify(),
            "norm" => self.norm().map(|v| (v, 0)),
            "spinor-norm" => self.decompose(true).map(|v| (v, 0)),
            "decompose" => self.decompose(false).map(|v| (v, 0)),
            "transfer-check" => self.transfer_check(),
            other => Err(parse_err(format!("unknown command {other:?}"))),
        }
    }

    fn witness(&self) -> Result<Value> {
        let q = self.space()?;
        let algebra = self.algebra()?;
        let u = self.vector(&algebra, self.field("vector")?, "vector")?;
        let w = witness::norm_principle_witness(&q, &algebra, &u, &mut self.sampler())?;
        Ok(json!({
            "base": self.domain.tag(),
            "gram": self.render_matrix(q.gram()),
            "modulus": self.render_all(algebra.modulus().coeffs()),
            "vector": self.render_vector(&u),
            "input": self.render_element(&w.input),
            "factors": self.render_factors(&w.factors),
            "norm": self.render(&w.norm),
            "parity": w.parity,
            "seed": self.seed,
            "retries": self.retries,
            "height": self.height,
        }))
    }

    fn verify(&self) -> Result<(Value, i32)> {
        let q = self.space()?;
        let algebra = self.algebra()?;
        let u = self.vector(&algebra, self.field("vector")?, "vector")?;
        let mut factors = Vec::new();
        for (i, f) in self.array(self.field("factors")?, "factors")?.iter().enumerate() {
            let at = format!("factors[{i}]");
            let vector = self.scalars(f.get("vector").ok_or_else(|| parse_err(format!("{at}: missing vector")))?, &format!("{at}.vector"))?;
            let value = self.scalar(f.get("value").ok_or_else(|| parse_err(format!("{at}: missing value")))?, &format!("{at}.value"))?;
            factors.push(WitnessFactor { vector, value });
        }
        let parity = self
            .field("parity")?
            .as_u64()
            .filter(|&p| p <= 1)
            .ok_or_else(|| parse_err("parity: expected 0 or 1"))? as u8;
        let w = Witness {
            factors,
            input: self.element(&algebra, self.field("input")?, "input")?,
            norm: self.scalar(self.field("norm")?, "norm")?,
            parity,
            stats: Default::default(),
        };
        let check = witness::verify_witness(&q, &algebra, &u, &w);
        let body = match check.reason {
            None => json!({ "ok": true }),
            Some(reason) => json!({ "ok": false, "reason": reason }),
        };
        Ok((body, if check.ok { 0 } else { 3 }))
    }

    fn norm(&self) -> Result<Value> {
        let algebra = self.algebra()?;
        let element = if let Some(v) = self.payload.get("element") {
            self.element(&algebra, v, "element")?
        } else {
            let q = self.space()?;
            let u = self.vector(&algebra, self.field("vector")?, "vector")?;
            q.base_change(&algebra).evaluate(&u)?
        };
        let by_det = algebra.norm(&element);
        if by_det != algebra.norm_by_resultant(&element) {
            return Err(Error::Internal("determinant and resultant norms differ".into()));
        }
        Ok(json!({
            "base": self.domain.tag(),
            "modulus": self.render_all(algebra.modulus().coeffs()),
            "element": self.render_element(&element),
            "norm": self.render(&by_det),
        }))
    }

    fn decomposition<R: Ring>(&self, iso: &Isometry<R>, random: impl FnOnce() -> Result<ReflectionDecomposition<R::Elem>>) -> Result<ReflectionDecomposition<R::Elem>> {
        match spinor::cartan_dieudonne_standard(iso) {
            Ok(d) => Ok(d),
            Err(_) => random(),
        }
    }

    fn decompose(&self, with_norm: bool) -> Result<Value> {
        let q = self.space()?;
        let m = self.base_matrix(self.field("matrix")?, "matrix")?;
        let iso = Isometry::new(q.clone(), m)?;
        let d = self.decomposition(&iso, || spinor::cartan_dieudonne(&iso, &mut self.sampler()))?;
        let mut body = json!({
            "base": self.domain.tag(),
            "gram": self.render_matrix(q.gram()),
            "matrix": self.render_matrix(iso.matrix()),
            "det": self.render(iso.det()),
            "mirrors": self.render_matrix(&d.mirrors),
            "values": self.render_all(&d.values),
        });
        if with_norm {
            body["spinor_norm"] = self.render(&spinor::spinor_norm_of(&self.domain, &d));
        }
        body["seed"] = self.seed.into();
        Ok(body)
    }

    fn transfer_check(&self) -> Result<(Value, i32)> {
        let q = self.space()?;
        let algebra = self.algebra()?;
        let rows = self.array(self.field("matrix")?, "matrix")?;
        let m = rows
            .iter()
            .enumerate()
            .map(|(i, row)| self.vector(&algebra, row, &format!("matrix[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let g = Isometry::new(q.base_change(&algebra), m)?;
        let check = spinor::transfer_check(&q, &algebra, &g, &mut self.sampler())?;
        let body = json!({
            "base": self.domain.tag(),
            "gram": self.render_matrix(q.gram()),
            "modulus": self.render_all(algebra.modulus().coeffs()),
            "matrix": Value::Array(g.matrix().iter().map(|row| self.render_vector(row)).collect()),
            "mirrors": Value::Array(check.decomposition.mirrors.iter().map(|w| self.render_vector(w)).collect()),
            "spinor_norm": self.render_element(&check.spinor_norm),
            "factors": self.render_factors(&check.witness.factors),
            "norm": self.render(&check.witness.norm),
            "parity": check.witness.parity,
            "holds": check.holds,
            "seed": self.seed,
        });
        Ok((body, if check.holds { 0 } else { 4 }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        run(std::iter::once("quadnorm").chain(args.iter().copied()))
    }

    fn body(o: &Outcome) -> Value {
        serde_json::from_str(&o.stdout).unwrap()
    }

    #[test]
    fn gaussian_witness() {
        let o = run_args(&["witness", "--gram", "I2", "--modulus", "[1,0,1]", "--vector", "[[1],[1,1]]", "--seed", "7"]);
        assert_eq!(o.code, 0, "{}", o.stdout);
        let b = body(&o);
        assert_eq!(b["norm"], "5");
        assert_eq!(b["input"], json!(["1", "2"]));
        assert_eq!(b["parity"], 0);
        assert_eq!(b["seed"], 7);
    }

    #[test]
    fn norm_command() {
        let o = run_args(&["norm", "--modulus", "[1,0,1]", "--element", "[2,2]"]);
        assert_eq!(body(&o)["norm"], "8");
        let o = run_args(&["norm", "--gram", "I2", "--modulus", "[1,0,1]", "--vector", "[[1],[1,1]]"]);
        assert_eq!(body(&o)["norm"], "5");
    }

    #[test]
    fn parse_errors() {
        let o = run_args(&["witness", "--gram", "[[1,2],[3,4]]", "--modulus", "[1,0,1]", "--vector", "[[1],[1]]"]);
        assert_eq!(o.code, 2);
        assert_eq!(body(&o)["error"], "ParseError");
        assert!(body(&o)["message"].as_str().unwrap().contains("not symmetric"));
        let o = run_args(&["witness", "--gram", "I2", "--modulus", "[2,0,2]", "--vector", "[[1],[1]]"]);
        assert_eq!(o.code, 2);
        assert!(body(&o)["message"].as_str().unwrap().contains("not monic"));
        let o = run_args(&["witness", "--gram", "I2", "--modulus", "[2,0,1]", "--vector", "[[1],[\"1/0\"]]"]);
        assert_eq!(o.code, 2);
        assert!(body(&o)["message"].as_str().unwrap().contains("vector[1][0]"));
        let o = run_args(&["witness", "--base", "Fp:9", "--gram", "I2", "--modulus", "[1,0,1]", "--vector", "[[1],[1]]"]);
        assert_eq!(o.code, 2);
    }

    #[test]
    fn non_unit_input() {
        let o = run_args(&["witness", "--gram", "I2", "--modulus", "[-1,0,1]", "--vector", "[[1,1],[0]]"]);
        assert_eq!(o.code, 3);
        assert_eq!(body(&o)["error"], "NonUnitInput");
    }

    #[test]
    fn spinor_norm_of_rotation() {
        let o = run_args(&["spinor-norm", "--gram", "I2", "--matrix", "[[0,-1],[1,0]]"]);
        let b = body(&o);
        assert_eq!(b["mirrors"], json!([["-1", "1"], ["0", "1"]]));
        assert_eq!(b["spinor_norm"], "2");
        let o = run_args(&["decompose", "--gram", "I2", "--matrix", "[[1,1],[0,1]]"]);
        assert_eq!(o.code, 3);
        assert_eq!(body(&o)["error"], "NotAnIsometry");
    }

    #[test]
    fn prime_field_and_local_bases() {
        let o = run_args(&["witness", "--base", "Fp:7", "--gram", "[[1,0],[0,3]]", "--modulus", "[3,1,0,1]", "--vector", "[[1,2],[0,0,1]]", "--seed", "2"]);
        assert_eq!(o.code, 0, "{}", o.stdout);
        let o = run_args(&["witness", "--base", "Qx0", "--gram", "I2", "--modulus", "[\"[-1,-1]\",0,1]", "--vector", "[[1],[\"[0,1]\",1]]"]);
        assert_eq!(o.code, 0, "{}", o.stdout);
    }

    #[test]
    fn oracle_value_sets() {
        let o = run_args(&["oracle", "--base", "Fp:3", "--gram", "I2"]);
        assert_eq!(body(&o)["represented"], json!([[1], [2]]));
        let o = run_args(&["oracle", "--base", "Fp:3", "--max-rank", "2", "--max-degree", "2"]);
        assert_eq!(o.code, 0);
        assert_eq!(body(&o)["violations"], 0);
    }

    #[test]
    fn transfer_check_command() {
        let o = run_args(&["transfer-check", "--gram", "I2", "--modulus", "[-2,0,1]", "--matrix", "[[[0],[-1]],[[1],[0]]]"]);
        assert_eq!(o.code, 0, "{}", o.stdout);
        let b = body(&o);
        assert_eq!(b["holds"], true);
        assert_eq!(b["parity"], 0);
    }
}
