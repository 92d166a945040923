//! The `iro` command line.
//!
//! Every subcommand wraps one library call. Files are the `iro::io`
//! encodings; `-` stands for stdin or stdout. Exit codes: 0 success or SAT,
//! 1 UNSAT or a failed check, 2 usage or I/O error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use iro::constraints::{
    build_extension_system, heisenberg_positive_order, quadrant_order, sl3_positive_order, Convention, SemigroupSpec,
};
use iro::engine::{solve, verify_certificate, Budget};
use iro::group::{GeneratorSet, GroupElement, GroupId};
use iro::io;
use iro::order::OrderMatrix;
use iro::rng::sample_seed;
use iro::sampler::{
    realize, reconstruct, reconstruction_table, shadowing_check, specification_glue,
    stabilizer_check, ActionSpec, AveragingScheme, CosetSampler, FixedSampler, OrderSampler, Point,
    QuadAngle, Rational, SubgroupSpec, UniformSampler,
};
use iro::sl3::{run_both, run_convention, Sl3Instance, Sl3Outcome};
use iro::stats::{chi_square_quantile, invariance_test, pattern_table, uniformity_chisq};
use iro::window::{ball, DEFAULT_SIZE_LIMIT};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Lib(iro::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl From<iro::Error> for CliError {
    fn from(e: iro::Error) -> Self {
        CliError::Lib(e)
    }
}

type CmdResult = Result<i32, CliError>;

#[derive(Parser, Debug)]
#[command(name = "iro", version, about = "Orders on finitely generated groups at finite scale")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Seed for every random choice.
    #[arg(long, global = true, env = "IRO_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Cap on enumerated window sizes.
    #[arg(long, global = true, default_value_t = DEFAULT_SIZE_LIMIT)]
    pub size_limit: usize,
    /// Solver timeout in seconds.
    #[arg(long, global = true, default_value_t = 10.0)]
    pub timeout: f64,
    /// Worker threads for sampling batches and parameter sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Report format where a command offers several.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum PositiveKind {
    Quadrant,
    Sl3,
    Heis,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConventionArg {
    InverseLeft,
    PlainLeft,
    Both,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplerKind {
    Uniform,
    Coset,
    Fixed,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActionKind {
    Rotation,
    Torus,
    Shift,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeKind {
    Cesaro,
    Box,
}

#[derive(Args, Debug, Clone)]
pub struct SamplerArgs {
    #[arg(long, value_enum, default_value_t = SamplerKind::Uniform)]
    pub kind: SamplerKind,
    /// Window file the sampler draws on.
    #[arg(long)]
    pub window: PathBuf,
    /// Subgroup for the coset sampler: whole, trivial, centre, coords:i,...
    #[arg(long)]
    pub subgroup: Option<String>,
    /// Order file on the subgroup (coset sampler) or the fixed order.
    #[arg(long)]
    pub inner: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct ActionArgs {
    #[arg(long, value_enum, default_value_t = ActionKind::Rotation)]
    pub action: ActionKind,
    /// Angle `a,b,d` meaning (a + b√2)/d; repeat once per torus coordinate.
    #[arg(long = "alpha", allow_hyphen_values = true)]
    pub alpha: Vec<String>,
    /// Point in [0, 1) as a decimal or p/q; repeat per torus coordinate.
    #[arg(long = "x")]
    pub x: Vec<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Cayley ball of the given radius.
    Ball {
        #[arg(long)]
        group: String,
        #[arg(long)]
        radius: usize,
        /// Generators file; defaults to the standard generators.
        #[arg(long)]
        generators: Option<PathBuf>,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
    },
    /// Invariance rules of a positive semigroup on a window.
    BuildSystem {
        #[arg(long)]
        window: PathBuf,
        #[arg(long, value_enum, conflicts_with = "semigroup")]
        positive: Option<PositiveKind>,
        #[arg(long)]
        semigroup: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ConventionArg::InverseLeft)]
        convention: ConventionArg,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
    },
    /// Decide a constraint system and write its certificate.
    CheckExtend {
        system: PathBuf,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
    },
    /// Replay a certificate against its system.
    VerifyCertificate {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        certificate: PathBuf,
    },
    /// The finite SL_3(Z) instance under one or both conventions.
    VerifySl3 {
        #[arg(long)]
        q: u32,
        /// n_1,...,n_6.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u32>,
        /// Atoms per i; defaults to max n_i.
        #[arg(long)]
        truncation: Option<u32>,
        #[arg(long, value_enum, default_value_t = ConventionArg::Both)]
        convention: ConventionArg,
        /// Directory receiving system and certificate files per convention.
        #[arg(long)]
        emit_dir: Option<PathBuf>,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
    },
    /// Grid of SL_3(Z) instances with n_i in q+1..=q+span.
    Sl3Sweep {
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        q: Vec<u32>,
        #[arg(long, default_value_t = 3)]
        span: u32,
        /// Keep this many instances, chosen deterministically from the seed.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, value_enum, default_value_t = ConventionArg::Both)]
        convention: ConventionArg,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
    },
    /// Batch of sampled orders, one per line.
    Sample {
        #[command(flatten)]
        sampler: SamplerArgs,
        #[arg(short = 'n', long)]
        count: u64,
        /// Permutation encoding instead of pair lists.
        #[arg(long)]
        compact: bool,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
    },
    /// Pattern frequencies on a domain.
    Estimate {
        #[command(flatten)]
        sampler: SamplerArgs,
        #[arg(long)]
        domain: PathBuf,
        #[arg(short = 'n', long)]
        count: u64,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
    },
    /// Pattern frequencies on a domain against its translate.
    Invariance {
        #[command(flatten)]
        sampler: SamplerArgs,
        #[arg(long)]
        domain: PathBuf,
        /// Translating element as comma-separated payload, e.g. `1,0`.
        #[arg(long, allow_hyphen_values = true)]
        by: String,
        #[arg(short = 'n', long)]
        count: u64,
        /// Fail when some gap reaches this many standard errors.
        #[arg(long, default_value_t = 5.0)]
        sigma: f64,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
    },
    /// Chi-square statistic over the ranking cells of a domain.
    Chisq {
        #[command(flatten)]
        sampler: SamplerArgs,
        #[arg(long)]
        domain: PathBuf,
        #[arg(short = 'n', long)]
        count: u64,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
    },
    /// Glue two orders along K and D and check shadowing.
    Glue {
        #[arg(long)]
        order1: PathBuf,
        #[arg(long)]
        order2: PathBuf,
        /// Window file listing K (may be empty).
        #[arg(long)]
        k: PathBuf,
        /// Window file listing D.
        #[arg(long)]
        d: PathBuf,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
        /// Shadowing report destination.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Order induced by an action at a point.
    Realize {
        #[command(flatten)]
        action: ActionArgs,
        #[arg(long)]
        window: PathBuf,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
    },
    /// Share of the averaging support below the identity.
    Reconstruct {
        #[arg(long)]
        order: PathBuf,
        #[arg(long, value_enum, default_value_t = SchemeKind::Cesaro)]
        scheme: SchemeKind,
        #[arg(short = 'n', long)]
        n: u64,
        /// Known point, adds the absolute error column.
        #[arg(long)]
        truth: Option<String>,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
    },
    /// Realize and reconstruct for several n.
    Convergence {
        #[command(flatten)]
        action: ActionArgs,
        #[arg(long, value_delimiter = ',', default_value = "100,1000,10000")]
        ns: Vec<u64>,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
    },
    /// Generators whose translate fixes the order on the window.
    Stabilizer {
        #[arg(long)]
        order: PathBuf,
        #[arg(long)]
        generators: Option<PathBuf>,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
    },
    /// Rank grid of a total order on a rectangle of Z^2.
    Levels {
        order: PathBuf,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
    },
}

struct Streams<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

impl Streams<'_> {
    fn read(&mut self, path: &Path) -> Result<String, CliError> {
        if path == Path::new("-") {
            let mut s = String::new();
            self.stdin
                .read_to_string(&mut s)
                .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
            return Ok(s);
        }
        std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    }

    fn write(&mut self, path: &Path, data: &str) -> Result<(), CliError> {
        if path == Path::new("-") {
            return self
                .stdout
                .write_all(data.as_bytes())
                .map_err(|e| CliError::Io(format!("stdout: {e}")));
        }
        std::fs::write(path, data).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    }
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn conventions(c: ConventionArg) -> Vec<Convention> {
    match c {
        ConventionArg::InverseLeft => vec![Convention::InverseLeft],
        ConventionArg::PlainLeft => vec![Convention::PlainLeft],
        ConventionArg::Both => Convention::BOTH.to_vec(),
    }
}

/// Payload like `1,0` or `-1` in the group of `w`.
pub fn parse_element(group: GroupId, s: &str) -> Result<GroupElement, CliError> {
    let data = s
        .split(',')
        .map(|t| t.trim().parse::<i64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::Usage(format!("bad element `{s}`")))?;
    let g = GroupElement::from_payload(group.tag(), &data)?;
    if g.group() != group {
        return Err(CliError::Usage(format!("element `{s}` is not in {group}")));
    }
    Ok(g)
}

fn build_action(a: &ActionArgs, seed: u64) -> Result<(ActionSpec, Point), CliError> {
    let angles = |n: usize| -> Result<Vec<QuadAngle>, CliError> {
        if a.alpha.is_empty() {
            return Ok(vec![QuadAngle::SQRT2_MINUS_1; n]);
        }
        if a.alpha.len() != n {
            return Err(CliError::Usage(format!("expected {n} angles, got {}", a.alpha.len())));
        }
        Ok(a.alpha.iter().map(|s| QuadAngle::parse(s)).collect::<iro::Result<_>>()?)
    };
    let points = || -> Result<Vec<Rational>, CliError> {
        Ok(a.x.iter().map(|s| Rational::parse(s)).collect::<iro::Result<_>>()?)
    };
    match a.action {
        ActionKind::Rotation => {
            let xs = points()?;
            let [x] = xs[..] else {
                return Err(CliError::Usage("rotation needs exactly one --x".into()));
            };
            Ok((ActionSpec::Rotation(angles(1)?[0]), Point::Scalar(x)))
        }
        ActionKind::Torus => {
            let xs = points()?;
            if xs.is_empty() {
                return Err(CliError::Usage("torus needs one --x per coordinate".into()));
            }
            Ok((ActionSpec::TorusRotation(angles(xs.len())?), Point::Vector(xs)))
        }
        ActionKind::Shift => {
            if !a.x.is_empty() || !a.alpha.is_empty() {
                return Err(CliError::Usage("shift takes its labels from --seed".into()));
            }
            Ok((ActionSpec::BernoulliShift, Point::Labels(seed)))
        }
    }
}

fn action_group(a: &ActionSpec) -> GroupId {
    match a {
        ActionSpec::Rotation(_) => GroupId::Zn(1),
        ActionSpec::TorusRotation(v) => GroupId::Zn(v.len()),
        ActionSpec::BernoulliShift => GroupId::Zn(1),
    }
}

enum AnySampler {
    Uniform(UniformSampler),
    Coset(CosetSampler),
    Fixed(FixedSampler),
}

impl AnySampler {
    fn get(&self) -> &dyn OrderSampler {
        match self {
            AnySampler::Uniform(s) => s,
            AnySampler::Coset(s) => s,
            AnySampler::Fixed(s) => s,
        }
    }
}

fn build_sampler(io: &mut Streams, a: &SamplerArgs) -> Result<AnySampler, CliError> {
    let window = io::decode_window(&io.read(&a.window)?)?;
    match a.kind {
        SamplerKind::Uniform => Ok(AnySampler::Uniform(UniformSampler { window })),
        SamplerKind::Coset => {
            let sub = a
                .subgroup
                .as_deref()
                .ok_or_else(|| CliError::Usage("coset sampler needs --subgroup".into()))?;
            let inner = a
                .inner
                .as_deref()
                .ok_or_else(|| CliError::Usage("coset sampler needs --inner".into()))?;
            let inner = io::decode_order(&io.read(inner)?)?;
            Ok(AnySampler::Coset(CosetSampler {
                window,
                subgroup: SubgroupSpec::parse(sub)?,
                inner,
            }))
        }
        SamplerKind::Fixed => {
            let path = a
                .inner
                .as_deref()
                .ok_or_else(|| CliError::Usage("fixed sampler needs --inner".into()))?;
            let order = io::decode_order(&io.read(path)?)?;
            if order.window() != &window {
                return Err(CliError::Usage("fixed order is not on the sampler window".into()));
            }
            Ok(AnySampler::Fixed(FixedSampler { order }))
        }
    }
}

fn outcome_json(o: &Sl3Outcome) -> serde_json::Value {
    let cert: serde_json::Value =
        serde_json::from_str(&io::encode_certificate(&o.certificate)).expect("encoder emits JSON");
    serde_json::json!({
        "convention": o.convention.name(),
        "verdict": o.verdict,
        "verified": o.verified,
        "six_cycle": o.six_cycle,
        "window": o.system.window().len(),
        "atoms": o.system.atoms().len(),
        "trace_steps": o.certificate.trace.len(),
        "cycle_length": o.certificate.cycle.len().saturating_sub(1),
        "certificate": cert,
    })
}

fn verdict_name(o: &Sl3Outcome) -> &'static str {
    match o.verdict {
        iro::sl3::Sl3Verdict::UnsatByPropagation => "unsat_by_propagation",
        iro::sl3::Sl3Verdict::UnsatBySearch => "unsat_by_search",
        iro::sl3::Sl3Verdict::Sat => "sat",
    }
}

fn all_combinations(qs: &[u32], span: u32) -> Vec<(u32, [u32; 6])> {
    let mut out = Vec::new();
    for &q in qs {
        let total = (span as usize).pow(6);
        for code in 0..total {
            let mut n = [0u32; 6];
            let mut c = code;
            for slot in n.iter_mut() {
                *slot = q + 1 + (c % span as usize) as u32;
                c /= span as usize;
            }
            out.push((q, n));
        }
    }
    out
}

/// The sweep's instances: all of them, or `k` chosen by hashing the index
/// with the seed and keeping the smallest hashes, in grid order.
pub fn sweep_instances(qs: &[u32], span: u32, sample: Option<usize>, seed: u64) -> Vec<(u32, [u32; 6])> {
    let all = all_combinations(qs, span);
    match sample {
        None => all,
        Some(k) => {
            let mut keyed: Vec<(u64, usize)> = (0..all.len()).map(|i| (sample_seed(seed, i as u64), i)).collect();
            keyed.sort_unstable();
            let mut keep: Vec<usize> = keyed.into_iter().take(k).map(|(_, i)| i).collect();
            keep.sort_unstable();
            keep.into_iter().map(|i| all[i]).collect()
        }
    }
}

fn run_command(cmd: Command, g: &Global, pool: &rayon::ThreadPool, io: &mut Streams) -> CmdResult {
    if g.timeout.is_nan() || g.timeout <= 0.0 {
        return Err(CliError::Usage("--timeout must be positive".into()));
    }
    let budget = Budget {
        timeout: Duration::from_secs_f64(g.timeout),
        size_limit: g.size_limit.min(iro::engine::DEFAULT_ENGINE_SIZE_LIMIT),
    };
    match cmd {
        Command::Ball {
            group,
            radius,
            generators,
            output,
        } => {
            let group = GroupId::parse(&group).map_err(|e| CliError::Usage(e.to_string()))?;
            let gens = match generators {
                Some(p) => io::decode_generators(&io.read(&p)?)?,
                None => GeneratorSet::standard(group),
            };
            if gens.group() != group {
                return Err(CliError::Usage(format!("generators are in {}, not {group}", gens.group())));
            }
            let w = ball(&gens, radius, g.size_limit)?;
            io.write(&output, &with_newline(io::encode_window(&w)))?;
            Ok(EXIT_OK)
        }
        Command::BuildSystem {
            window,
            positive,
            semigroup,
            convention,
            output,
        } => {
            let w = io::decode_window(&io.read(&window)?)?;
            let s: SemigroupSpec = match (positive, semigroup) {
                (_, Some(p)) => io::decode_semigroup(&io.read(&p)?)?,
                (Some(PositiveKind::Sl3), None) => sl3_positive_order(),
                (Some(PositiveKind::Heis), None) => heisenberg_positive_order(),
                (Some(PositiveKind::Quadrant), None) | (None, None) => match w.group() {
                    GroupId::Zn(n) => quadrant_order(n),
                    other => return Err(CliError::Usage(format!("no quadrant order on {other}"))),
                },
            };
            let conv = match convention {
                ConventionArg::Both => return Err(CliError::Usage("a system has one convention".into())),
                c => conventions(c)[0],
            };
            let cs = build_extension_system(&w, &s, &[], conv)?;
            io.write(&output, &with_newline(io::encode_system(&cs)))?;
            Ok(EXIT_OK)
        }
        Command::CheckExtend { system, output } => {
            let cs = io::decode_system(&io.read(&system)?)?;
            let cert = solve(&cs, budget)?;
            io.write(&output, &with_newline(io::encode_certificate(&cert)))?;
            Ok(if cert.is_sat() { EXIT_OK } else { EXIT_FAIL })
        }
        Command::VerifyCertificate { system, certificate } => {
            let cs = io::decode_system(&io.read(&system)?)?;
            let cert = io::decode_certificate(&io.read(&certificate)?, cs.window())?;
            let ok = verify_certificate(&cs, &cert);
            io.write(Path::new("-"), if ok { "valid\n" } else { "invalid\n" })?;
            Ok(if ok { EXIT_OK } else { EXIT_FAIL })
        }
        Command::VerifySl3 {
            q,
            n,
            truncation,
            convention,
            emit_dir,
            output,
        } => {
            let n: [u32; 6] = n
                .try_into()
                .map_err(|_| CliError::Usage("--n needs six values".into()))?;
            let mut inst = Sl3Instance::new(q, n, Convention::default());
            if let Some(t) = truncation {
                inst.truncation = t;
            }
            let outcomes = match convention {
                ConventionArg::Both => run_both(&inst, budget)?.outcomes,
                c => vec![run_convention(&inst.with_convention(conventions(c)[0]), budget)?],
            };
            if let Some(dir) = emit_dir {
                std::fs::create_dir_all(&dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
                for o in &outcomes {
                    let name = o.convention.name();
                    io.write(&dir.join(format!("system-{name}.json")), &with_newline(io::encode_system(&o.system)))?;
                    io.write(
                        &dir.join(format!("certificate-{name}.json")),
                        &with_newline(io::encode_certificate(&o.certificate)),
                    )?;
                }
            }
            let text = match g.format {
                OutputFormat::Json => {
                    let inst_json: serde_json::Value =
                        serde_json::from_str(&io::encode_instance(&inst)).expect("encoder emits JSON");
                    let v = serde_json::json!({
                        "format": io::FORMAT_VERSION,
                        "instance": inst_json,
                        "outcomes": outcomes.iter().map(outcome_json).collect::<Vec<_>>(),
                    });
                    with_newline(v.to_string())
                }
                OutputFormat::Csv => {
                    let mut s = String::from("convention,verdict,verified,six_cycle,window,atoms,trace_steps\n");
                    for o in &outcomes {
                        let _ = writeln!(
                            s,
                            "{},{},{},{},{},{},{}",
                            o.convention.name(),
                            verdict_name(o),
                            o.verified,
                            o.six_cycle,
                            o.system.window().len(),
                            o.system.atoms().len(),
                            o.certificate.trace.len()
                        );
                    }
                    s
                }
                OutputFormat::Text => {
                    let mut s = format!("q={} n={:?} N={}\n", inst.q, inst.n, inst.truncation);
                    for o in &outcomes {
                        let _ = writeln!(
                            s,
                            "{}: {} (verified={}, six_cycle={}, window={}, trace={} steps, cycle length {})",
                            o.convention.name(),
                            verdict_name(o),
                            o.verified,
                            o.six_cycle,
                            o.system.window().len(),
                            o.certificate.trace.len(),
                            o.certificate.cycle.len().saturating_sub(1)
                        );
                    }
                    s
                }
            };
            io.write(&output, &text)?;
            Ok(EXIT_OK)
        }
        Command::Sl3Sweep {
            q,
            span,
            sample,
            convention,
            output,
        } => {
            if span == 0 {
                return Err(CliError::Usage("--span must be positive".into()));
            }
            let convs = conventions(convention);
            let jobs: Vec<(u32, [u32; 6], Convention)> = sweep_instances(&q, span, sample, g.seed)
                .into_iter()
                .flat_map(|(q, n)| convs.iter().map(move |&c| (q, n, c)))
                .collect();
            let rows = pool.install(|| {
                jobs.par_iter()
                .map(|&(q, n, c)| {
                    let o = run_convention(&Sl3Instance::new(q, n, c), budget)?;
                    let ns: Vec<String> = n.iter().map(|v| v.to_string()).collect();
                    Ok(format!(
                        "{},{},{},{},{},{},{}\n",
                        q,
                        ns.join(" "),
                        o.system.window().len(),
                        c.name(),
                        verdict_name(&o),
                        o.verified,
                        o.six_cycle
                    ))
                })
                .collect::<iro::Result<Vec<String>>>()
            })?;
            let mut s = String::from("q,n,window,convention,verdict,verified,six_cycle\n");
            rows.iter().for_each(|r| s.push_str(r));
            io.write(&output, &s)?;
            Ok(EXIT_OK)
        }
        Command::Sample {
            sampler,
            count,
            compact,
            output,
        } => {
            let s = build_sampler(io, &sampler)?;
            let orders = pool.install(|| {
                (0..count)
                    .into_par_iter()
                    .map(|i| s.get().sample(sample_seed(g.seed, i)))
                    .collect::<iro::Result<Vec<OrderMatrix>>>()
            })?;
            io.write(&output, &io::encode_batch(&orders, compact))?;
            Ok(EXIT_OK)
        }
        Command::Estimate {
            sampler,
            domain,
            count,
            output,
        } => {
            let s = build_sampler(io, &sampler)?;
            let d = io::decode_window(&io.read(&domain)?)?;
            let rows = pool.install(|| pattern_table(s.get(), &d, count, g.seed))?;
            io.write(&output, &io::patterns_csv(&rows))?;
            Ok(EXIT_OK)
        }
        Command::Invariance {
            sampler,
            domain,
            by,
            count,
            sigma,
            output,
        } => {
            let s = build_sampler(io, &sampler)?;
            let d = io::decode_window(&io.read(&domain)?)?;
            let el = parse_element(s.get().window().group(), &by)?;
            let r = pool.install(|| invariance_test(s.get(), &el, &d, count, g.seed))?;
            io.write(&output, &io::invariance_csv(&r))?;
            Ok(if r.within_sigma(sigma) { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Chisq {
            sampler,
            domain,
            count,
            output,
        } => {
            let s = build_sampler(io, &sampler)?;
            let d = io::decode_window(&io.read(&domain)?)?;
            let c = pool.install(|| uniformity_chisq(s.get(), &d, count, g.seed))?;
            let q = (c.dof > 0).then(|| chi_square_quantile(0.999, c.dof as f64));
            io.write(&output, &io::chisq_csv(&c, q))?;
            Ok(if c.passes(0.999) { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Glue {
            order1,
            order2,
            k,
            d,
            output,
            report,
        } => {
            let m1 = io::decode_order(&io.read(&order1)?)?;
            let m2 = io::decode_order(&io.read(&order2)?)?;
            let k = io::decode_window(&io.read(&k)?)?;
            let d = io::decode_window(&io.read(&d)?)?;
            let glued = specification_glue(&m1, &m2, k.elements(), &d)?;
            let rep = shadowing_check(&glued, &m1, &m2, k.elements(), &d)?;
            io.write(&output, &with_newline(io::encode_order(&glued, true)))?;
            let text = with_newline(serde_json::to_string(&rep).expect("report serialises"));
            match report {
                Some(p) => io.write(&p, &text)?,
                None => {
                    let _ = io.stderr.write_all(text.as_bytes());
                }
            }
            Ok(if rep.all_pass() { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Realize { action, window, output } => {
            let (a, x) = build_action(&action, g.seed)?;
            let w = io::decode_window(&io.read(&window)?)?;
            let m = realize(&a, &x, &w)?;
            io.write(&output, &with_newline(io::encode_order(&m.to_matrix(), true)))?;
            Ok(EXIT_OK)
        }
        Command::Reconstruct {
            order,
            scheme,
            n,
            truth,
            output,
        } => {
            let m = io::decode_order(&io.read(&order)?)?;
            let scheme = match scheme {
                SchemeKind::Cesaro => AveragingScheme::Cesaro(n),
                SchemeKind::Box => AveragingScheme::Box(n),
            };
            let estimate = reconstruct(&m, scheme)?;
            let truth = truth.map(|t| Rational::parse(&t)).transpose()?;
            let row = iro::sampler::ReconstructionRow {
                n,
                estimate,
                abs_error: truth.map(|t| (estimate - t.to_f64()).abs()),
            };
            io.write(&output, &io::reconstruction_csv(&[row]))?;
            Ok(EXIT_OK)
        }
        Command::Convergence { action, ns, output } => {
            let (a, x) = build_action(&action, g.seed)?;
            let scheme: fn(u64) -> AveragingScheme = match a {
                ActionSpec::Rotation(_) | ActionSpec::BernoulliShift => AveragingScheme::Cesaro,
                ActionSpec::TorusRotation(_) => AveragingScheme::Box,
            };
            let rows = reconstruction_table(&a, &x, action_group(&a), scheme, &ns, g.size_limit)?;
            io.write(&output, &io::reconstruction_csv(&rows))?;
            Ok(EXIT_OK)
        }
        Command::Stabilizer {
            order,
            generators,
            output,
        } => {
            let m = io::decode_order(&io.read(&order)?)?;
            let gens = match generators {
                Some(p) => io::decode_generators(&io.read(&p)?)?,
                None => GeneratorSet::standard(m.window().group()),
            };
            let fixed = stabilizer_check(&m, &gens)?;
            let gs = GeneratorSet::new(m.window().group(), fixed)?;
            io.write(&output, &with_newline(io::encode_generators(&gs)))?;
            Ok(EXIT_OK)
        }
        Command::Levels { order, output } => {
            let m = io::decode_order(&io.read(&order)?)?;
            let grid = m.render_levels()?;
            io.write(&output, &grid.to_string())?;
            Ok(EXIT_OK)
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
            } else {
                let _ = stdout.write_all(text.as_bytes());
            }
            return code;
        }
    };
    if cli.global.jobs == 0 {
        let _ = writeln!(stderr, "usage error: --jobs must be at least 1");
        return EXIT_ERROR;
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.global.jobs).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_ERROR;
        }
    };
    let mut streams = Streams { stdin, stdout, stderr };
    match run_command(cli.command, &cli.global, &pool, &mut streams) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(streams.stderr, "{e}");
            EXIT_ERROR
        }
    }
}
