//! Driver behind the `azumaya` binary: configuration, the verification
//! commands, and the JSON report.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};

use azumaya_core::cover::{cartesian_check, euler_relation_check, fiber_over};
use azumaya_core::equivariant::{azumaya_hypertoric_check, kp_invariant_dims, ClosedOrbitMode};
use azumaya_core::fq::{make_field, ElementInput, Field, FieldElement};
use azumaya_core::hypertoric::{
    arrangement, build_torus_data, circuits_and_walls, classify_arrangement, freeness_report, is_semistable,
    moment_k, polytope_p, stabilizer_dim, HypertoricData, HypertoricJson,
};
use azumaya_core::linalg::IntMatrix;
use azumaya_core::sample::{Sampler, GENERATOR};
use azumaya_core::weyl::{azumaya_point_check, d_eta_build, euler_block_check, PointJson, PointTriple, WeylElement};

pub const SCHEMA: &str = "azumaya-report/1";

#[derive(Debug, Parser)]
#[command(name = "azumaya", version, about = "Exact point-level checks for Weyl algebras in characteristic p")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Euler relation, centrality of x^p and d^p, characteristic polynomials
    WeylVerify,
    /// Artin-Schreier fibers and the Cartesian-square check
    CoverFiber,
    /// D_zeta -> End(D_eta) at random points
    PointAzumaya,
    /// Simple/smooth, circuits, walls, N and P for hypertoric data
    ArrangementReport,
    /// Wall criterion, Q_{alpha,lambda} and freeness for hypertoric data
    FreenessCheck,
    /// K[p]-invariant dimensions and D_nu^{K[p]} -> End(D_eta^{K[p]})
    HypertoricAzumaya,
    /// Everything above at the configured scale
    Suite,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::WeylVerify => "weyl-verify",
            Command::CoverFiber => "cover-fiber",
            Command::PointAzumaya => "point-azumaya",
            Command::ArrangementReport => "arrangement-report",
            Command::FreenessCheck => "freeness-check",
            Command::HypertoricAzumaya => "hypertoric-azumaya",
            Command::Suite => "suite",
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Primes, comma separated
    #[arg(long, global = true, value_delimiter = ',')]
    pub p: Option<Vec<u32>>,
    /// Numbers of variables, comma separated
    #[arg(long, global = true, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    /// Extension degree of the sampling field
    #[arg(long, global = true)]
    pub ext: Option<u32>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Random points per (p, n)
    #[arg(long, global = true)]
    pub random: Option<usize>,
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Take the closed-orbit hypothesis as given instead of testing it
    #[arg(long, global = true)]
    pub assert_closed_orbit: bool,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub p: Option<Vec<u32>>,
    pub n: Option<Vec<usize>>,
    pub ext: Option<u32>,
    pub seed: Option<u64>,
    pub random: Option<usize>,
    pub jobs: Option<usize>,
    pub data: Option<HypertoricJson>,
    #[serde(default)]
    pub points: Vec<PointJson>,
    pub lambda: Option<Vec<ElementInput>>,
    #[serde(default)]
    pub assert_closed_orbit: bool,
    #[serde(default)]
    pub caps: Caps,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Caps {
    pub max_p: u32,
    pub max_n: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_p: 7, max_n: 3 }
    }
}

/// Fully resolved run parameters.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub ps: Vec<u32>,
    pub ns: Vec<usize>,
    pub ext: u32,
    pub seed: u64,
    pub random: Option<usize>,
    pub jobs: Option<usize>,
    pub data: Option<HypertoricJson>,
    pub points: Vec<PointJson>,
    pub lambda: Option<Vec<ElementInput>>,
    pub assert_closed_orbit: bool,
    pub caps: Caps,
    pub out: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

impl RunConfig {
    /// Flags override the config file, which overrides the defaults.
    pub fn resolve(cli: &Cli) -> Result<RunConfig, CliError> {
        let file = match &cli.common.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                    path: path.clone(),
                    source,
                })?;
                serde_json::from_str::<ConfigFile>(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?
            }
            None => ConfigFile::default(),
        };
        let c = &cli.common;
        let cfg = RunConfig {
            command: cli.command,
            ps: c.p.clone().or(file.p).unwrap_or_else(|| vec![2, 3]),
            ns: c.n.clone().or(file.n).unwrap_or_else(|| vec![1, 2]),
            ext: c.ext.or(file.ext).unwrap_or(2),
            seed: c.seed.or(file.seed).unwrap_or(0),
            random: c.random.or(file.random),
            jobs: c.jobs.or(file.jobs),
            data: file.data,
            points: file.points,
            lambda: file.lambda,
            assert_closed_orbit: c.assert_closed_orbit || file.assert_closed_orbit,
            caps: file.caps,
            out: c.out.clone(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.ps.is_empty() || self.ns.is_empty() {
            return Err(usage("--p and --n need at least one value"));
        }
        if self.caps.max_p == 0 || self.caps.max_n == 0 {
            return Err(usage("caps must be positive"));
        }
        for &p in &self.ps {
            if !azumaya_core::fq::is_prime(p as u64) {
                return Err(usage(format!("{p} is not prime")));
            }
            if p > self.caps.max_p {
                return Err(usage(format!("p = {p} exceeds the cap {}", self.caps.max_p)));
            }
        }
        for &n in &self.ns {
            if n == 0 || n > self.caps.max_n {
                return Err(usage(format!("n = {n} outside 1..={}", self.caps.max_n)));
            }
        }
        if self.ext == 0 {
            return Err(usage("--ext must be at least 1"));
        }
        if self.jobs == Some(0) {
            return Err(usage("--jobs must be at least 1"));
        }
        Ok(())
    }

    fn config_json(&self) -> Value {
        json!({
            "p": self.ps,
            "n": self.ns,
            "ext": self.ext,
            "random": self.random,
            "data": self.data,
            "points": self.points,
            "assert_closed_orbit": self.assert_closed_orbit,
            "caps": { "max_p": self.caps.max_p, "max_n": self.caps.max_n },
        })
    }
}

/// One verified statement.
#[derive(Debug, Clone)]
pub struct Check {
    pub theorem: String,
    pub pass: bool,
    pub details: Value,
    pub witness: Option<Value>,
}

impl Check {
    fn new(theorem: &str, pass: bool, details: Value) -> Check {
        let witness = (!pass).then(|| details.clone());
        Check {
            theorem: theorem.to_string(),
            pass,
            details,
            witness,
        }
    }

    fn error(theorem: &str, context: Value, err: impl std::fmt::Display) -> Check {
        let mut details = context;
        if let Value::Object(m) = &mut details {
            m.insert("error".into(), Value::String(err.to_string()));
        }
        Check::new(theorem, false, details)
    }

    fn from_result(theorem: &str, context: Value, r: azumaya_core::Result<(bool, Value)>) -> Check {
        match r {
            Ok((pass, details)) => Check::new(theorem, pass, details),
            Err(e) => Check::error(theorem, context, e),
        }
    }

    fn to_json(&self) -> Value {
        let mut v = json!({ "theorem": self.theorem, "pass": self.pass, "details": self.details });
        if let Some(w) = &self.witness {
            v["witness"] = w.clone();
        }
        v
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: Command,
    pub seed: u64,
    pub config: Value,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.pass() {
            0
        } else {
            1
        }
    }

    fn by_theorem(&self) -> BTreeMap<String, (usize, usize)> {
        let mut m: BTreeMap<String, (usize, usize)> = BTreeMap::new();
        for c in &self.checks {
            let e = m.entry(c.theorem.clone()).or_default();
            e.0 += usize::from(c.pass);
            e.1 += 1;
        }
        m
    }

    pub fn to_json(&self) -> Value {
        let passed = self.checks.iter().filter(|c| c.pass).count();
        let by: BTreeMap<String, Value> = self
            .by_theorem()
            .into_iter()
            .map(|(k, (p, t))| (k, json!({ "passed": p, "total": t })))
            .collect();
        json!({
            "schema": SCHEMA,
            "command": self.command.name(),
            "generator": GENERATOR,
            "seed": self.seed,
            "config": self.config,
            "checks": self.checks.iter().map(Check::to_json).collect::<Vec<_>>(),
            "summary": {
                "checks": self.checks.len(),
                "passed": passed,
                "failed": self.checks.len() - passed,
                "by_theorem": by,
            },
            "pass": self.pass(),
        })
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn summary_text(&self) -> String {
        let mut out = format!("{} (seed {})\n", self.command.name(), self.seed);
        for (name, (p, t)) in self.by_theorem() {
            let tag = if p == t { "PASS" } else { "FAIL" };
            out.push_str(&format!("  {tag} {name}: {p}/{t}\n"));
        }
        out.push_str(if self.pass() { "all checks passed\n" } else { "some checks failed\n" });
        out
    }
}

/// Writes the JSON report to `out`, or returns it for stdout when `out` is
/// `None`.
pub fn emit_report(report: &Report, out: Option<&Path>) -> Result<Option<String>, CliError> {
    let text = report.to_json_string();
    match out {
        Some(path) => {
            fs::write(path, &text).map_err(|source| CliError::Io {
                path: path.to_path_buf(),
                source,
            })?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}

pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    let checks = match cfg.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(usage)?
            .install(|| run_command(cfg, cfg.command)),
        None => run_command(cfg, cfg.command),
    }?;
    Ok(Report {
        command: cfg.command,
        seed: cfg.seed,
        config: cfg.config_json(),
        checks,
    })
}

fn run_command(cfg: &RunConfig, command: Command) -> Result<Vec<Check>, CliError> {
    match command {
        Command::WeylVerify => weyl_verify(cfg),
        Command::CoverFiber => cover_fiber(cfg),
        Command::PointAzumaya => point_azumaya(cfg),
        Command::ArrangementReport => arrangement_report(&require_data(cfg)?),
        Command::FreenessCheck => freeness_check(&require_data(cfg)?),
        Command::HypertoricAzumaya => hypertoric_azumaya(cfg),
        Command::Suite => suite(cfg),
    }
}

/// Deterministic seed for the stream of one `(command, p, n)` cell.
fn cell_seed(seed: u64, tag: &str, p: u32, n: usize) -> u64 {
    let mut s = Sampler::new(seed ^ (p as u64) << 32 ^ n as u64);
    tag.bytes().fold(s.next_u64(), |acc, b| acc.rotate_left(5) ^ b as u64)
}

fn sample_field(cfg: &RunConfig, p: u32) -> Result<Field, CliError> {
    make_field(p as u64, cfg.ext).map_err(usage)
}

/// Explicit config points when present, otherwise seeded random split
/// points for every `(p, n)`.
fn points_for(cfg: &RunConfig, tag: &str, default_count: usize) -> Result<Vec<PointTriple>, CliError> {
    if !cfg.points.is_empty() {
        return cfg.points.iter().map(|p| p.to_point().map_err(usage)).collect();
    }
    let count = cfg.random.unwrap_or(default_count);
    let mut out = Vec::new();
    for &p in &cfg.ps {
        let f = sample_field(cfg, p)?;
        for &n in &cfg.ns {
            let mut s = Sampler::new(cell_seed(cfg.seed, tag, p, n));
            for _ in 0..count {
                out.push(s.split_point(&f, n).map_err(usage)?);
            }
        }
    }
    Ok(out)
}

fn point_json(pt: &PointTriple) -> Value {
    serde_json::to_value(pt.to_json()).expect("point serializes")
}

fn weyl_verify(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    for &p in &cfg.ps {
        for &n in &cfg.ns {
            let ctx = json!({ "p": p, "n": n });
            let r = euler_relation_check(p, n).map(|ok| (ok, ctx.clone()));
            checks.push(Check::from_result("euler_relation", ctx.clone(), r));
            let r = (|| {
                let f = make_field(p as u64, 1)?;
                let mut ok = true;
                for k in 0..n {
                    let mut e = vec![0u32; n];
                    e[k] = p;
                    let z = vec![0u32; n];
                    ok &= WeylElement::monomial(&f.one(), &e, &z)?.is_central();
                    ok &= WeylElement::monomial(&f.one(), &z, &e)?.is_central();
                    ok &= !WeylElement::euler(&f, n, k).is_central();
                }
                Ok((ok, ctx.clone()))
            })();
            checks.push(Check::from_result("p_center", ctx, r));
        }
    }
    let pts = points_for(cfg, "weyl-verify", 5)?;
    let char_checks: Vec<Check> = pts
        .par_iter()
        .flat_map_iter(|pt| {
            (0..pt.n()).map(move |k| {
                let ctx = json!({ "point": point_json(pt), "k": k });
                let r = euler_block_check(pt, k).map(|rep| {
                    (rep.pass(), json!({ "point": point_json(pt), "report": rep.to_json() }))
                });
                Check::from_result("char_poly", ctx, r)
            })
        })
        .collect();
    checks.extend(char_checks);
    Ok(checks)
}

fn cover_fiber(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let mut inputs = Vec::new();
    for &p in &cfg.ps {
        let f = sample_field(cfg, p)?;
        for &n in &cfg.ns {
            let mut s = Sampler::new(cell_seed(cfg.seed, "cover-fiber", p, n));
            for _ in 0..cfg.random.unwrap_or(5) {
                let b: Vec<FieldElement> = (0..n).map(|_| s.element(&f)).collect();
                let w: Vec<FieldElement> = (0..n).map(|_| s.element(&f)).collect();
                inputs.push((b, w));
            }
        }
    }
    Ok(inputs
        .par_iter()
        .map(|(b, w)| {
            let ctx = json!({
                "b": b.iter().map(|x| x.to_json()).collect::<Vec<_>>(),
                "omega_p": w.iter().map(|x| x.to_json()).collect::<Vec<_>>(),
            });
            let r = (|| {
                let fib = fiber_over(b, w)?;
                let cart = cartesian_check(b, w)?;
                let p = fib.field.p() as usize;
                let pass = fib.points.len() == p.pow(fib.n() as u32) && fib.is_separable() && fib.is_torsor() && cart.equal;
                let mut d = ctx.clone();
                d["fiber_field"] = json!({ "p": fib.field.p(), "k": fib.field.k() });
                d["fiber_size"] = json!(fib.points.len());
                d["torsor"] = json!(fib.is_torsor());
                d["cartesian"] = cart.to_json();
                Ok((pass, d))
            })();
            Check::from_result("etale_cover", ctx, r)
        })
        .collect())
}

fn point_azumaya(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let pts = points_for(cfg, "point-azumaya", 3)?;
    let mut checks: Vec<Check> = pts
        .par_iter()
        .map(|pt| {
            let ctx = json!({ "point": point_json(pt) });
            let r = azumaya_point_check(pt).map(|c| (c.pass(), c.to_json()));
            Check::from_result("azumaya_point", ctx, r)
        })
        .collect();
    let choices: Vec<Check> = pts
        .par_iter()
        .map(|pt| {
            let ctx = json!({ "point": point_json(pt) });
            let r = every_root_choice(pt);
            Check::from_result("point_module", ctx, r)
        })
        .collect();
    checks.extend(choices);
    Ok(checks)
}

/// `dim D_eta = p^n` with a one-dimensional joint kernel for each of the
/// `p^n` root choices over the point's `(b, omega_p)`.
pub fn every_root_choice(pt: &PointTriple) -> azumaya_core::Result<(bool, Value)> {
    let p = pt.p() as usize;
    let n = pt.n();
    let total = p.pow(n as u32);
    let mut failures = Vec::new();
    for idx in 0..total {
        let choice: Vec<usize> = (0..n).map(|v| idx / p.pow((n - 1 - v) as u32) % p).collect();
        let q = PointTriple::over_base(pt.b(), pt.omega_p(), Some(&choice))?;
        let eta = d_eta_build(&q)?;
        if eta.dim() != total || eta.joint_kernel_dim() != 1 {
            failures.push(json!({ "choice": choice, "dim_d_eta": eta.dim(), "joint_kernel": eta.joint_kernel_dim() }));
        }
    }
    Ok((
        failures.is_empty(),
        json!({ "point": point_json(pt), "choices": total, "failures": failures }),
    ))
}

fn require_data(cfg: &RunConfig) -> Result<HypertoricData, CliError> {
    let j = cfg.data.as_ref().ok_or_else(|| usage("this command needs \"data\" in --config"))?;
    HypertoricData::from_json(j).map_err(usage)
}

fn data_json(d: &HypertoricData) -> Value {
    serde_json::to_value(d.to_json()).expect("data serializes")
}

pub fn arrangement_report(d: &HypertoricData) -> Result<Vec<Check>, CliError> {
    let ctx = json!({ "data": data_json(d) });
    let r = (|| {
        let arr = arrangement(d)?;
        let class = classify_arrangement(d)?;
        let circuits = circuits_and_walls(d)?;
        let poly = polytope_p(d)?;
        let k = d.torus().k();
        let mut ok = true;
        for c in &circuits {
            ok &= c.wall.len() + 1 == k;
            ok &= IntMatrix::new(&[c.normal.clone()]).extends_to_z_basis();
        }
        let details = json!({
            "data": data_json(d),
            "torus": d.torus().to_json(),
            "arrangement": arr.to_json(),
            "simple": class.simple,
            "smooth": class.smooth,
            "classification": class.to_json(),
            "circuits": circuits.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            "N": poly.n_max,
            "P": poly.to_json(),
        });
        Ok((ok, details))
    })();
    Ok(vec![Check::from_result("arrangement", ctx, r)])
}

pub fn freeness_check(d: &HypertoricData) -> Result<Vec<Check>, CliError> {
    let ctx = json!({ "data": data_json(d) });
    let r = (|| {
        let rep = freeness_report(d)?;
        let mut ok = !rep.free || rep.finite_stabilizers;
        let exact_walls = rep.wall_hits.iter().all(|w| w.characteristic_only || w.point_verified);
        ok &= exact_walls;
        if rep.wall_hits.iter().all(|w| !w.characteristic_only) {
            ok &= rep.finite_stabilizers == rep.finite_stabilizers_realized;
        }
        for r in &rep.realized {
            ok &= r.point.support() == r.support;
            ok &= moment_k(d, &r.point)? == d.lambda();
            ok &= is_semistable(d, &r.point)?;
            ok &= stabilizer_dim(d, &r.point)? == r.stabilizer_dim;
        }
        let mut details = rep.to_json();
        details["data"] = data_json(d);
        Ok((ok, details))
    })();
    Ok(vec![Check::from_result("freeness", ctx, r)])
}

fn diagonal_data(n: usize, p: u32, alpha: i64) -> azumaya_core::Result<HypertoricData> {
    let f = make_field(p as u64, 1)?;
    let torus = build_torus_data(&IntMatrix::new(&[vec![1; n]]), n)?;
    HypertoricData::new(torus, vec![alpha], &f, vec![f.zero()], None)
}

fn hypertoric_azumaya(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let mode = if cfg.assert_closed_orbit {
        ClosedOrbitMode::Asserted
    } else {
        ClosedOrbitMode::OnePsChecked
    };
    let mut jobs: Vec<(HypertoricData, PointTriple)> = Vec::new();
    match &cfg.data {
        Some(j) => {
            let d = HypertoricData::from_json(j).map_err(usage)?;
            let n = d.torus().n();
            if !cfg.points.is_empty() {
                for pt in &cfg.points {
                    jobs.push((d.clone(), pt.to_point().map_err(usage)?));
                }
            } else {
                let f = sample_field(cfg, d.field().p())?;
                let mut s = Sampler::new(cell_seed(cfg.seed, "hypertoric-azumaya", d.field().p(), n));
                for _ in 0..cfg.random.unwrap_or(3) {
                    jobs.push((d.clone(), s.split_point_nonzero(&f, n).map_err(usage)?));
                }
            }
        }
        None => {
            for &p in &cfg.ps {
                let f = sample_field(cfg, p)?;
                for &n in &cfg.ns {
                    let d = diagonal_data(n, p, 1).map_err(usage)?;
                    let mut s = Sampler::new(cell_seed(cfg.seed, "hypertoric-azumaya", p, n));
                    for _ in 0..cfg.random.unwrap_or(3) {
                        jobs.push((d.clone(), s.split_point_nonzero(&f, n).map_err(usage)?));
                    }
                }
            }
        }
    }
    let lambda = cfg.lambda.clone();
    Ok(jobs
        .par_iter()
        .map(|(d, pt)| {
            let ctx = json!({ "data": data_json(d), "point": point_json(pt) });
            let r = (|| {
                let lam = match &lambda {
                    Some(l) => Some(l.iter().map(|x| x.resolve(pt.field())).collect::<azumaya_core::Result<Vec<_>>>()?),
                    None => None,
                };
                let dims = kp_invariant_dims(d, pt)?;
                let cert = azumaya_hypertoric_check(d, pt, lam.as_deref(), mode)?;
                Ok((dims.pass() && cert.pass(), cert.to_json()))
            })();
            Check::from_result("hypertoric_azumaya", ctx, r)
        })
        .collect())
}

fn suite(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    for c in [Command::WeylVerify, Command::CoverFiber, Command::PointAzumaya, Command::HypertoricAzumaya] {
        let mut sub = cfg.clone();
        sub.data = None;
        sub.points.clear();
        checks.extend(run_command(&sub, c)?);
    }
    for &p in &cfg.ps {
        let ex = [(2usize, 1i64), (p as usize + 1, 1)];
        for (n, alpha) in ex {
            let d = diagonal_data(n, p, alpha).map_err(usage)?;
            checks.extend(arrangement_report(&d)?);
            checks.extend(freeness_check(&d)?);
        }
    }
    if let Some(j) = &cfg.data {
        let d = HypertoricData::from_json(j).map_err(usage)?;
        checks.extend(arrangement_report(&d)?);
        checks.extend(freeness_check(&d)?);
    }
    Ok(checks)
}
