//! `pfs`: JSON reports for periodic Fourier representations, NMQC games,
//! depth-2 protocols and probabilistic polynomials.

use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use pfs_core::approx::{
    distribution_error, pointwise_error, polynomial_error, theorem3_polynomial,
    uniform_distribution, RandomizedPhaseFamily,
};
use pfs_core::depth2::{build_for_function, verify_depth2};
use pfs_core::nmqc::{
    check_distributive_identity, classical_bias, optimize_bias, promise_mod_game, quantum_bias,
    DistributiveIdentity, OptimizerConfig, XorGame, CLASSICAL_CAP,
};
use pfs_core::periodic::{
    and_combine, brute_force_pfs, c3_recipe, cq_coefficients, cq_recipe, from_anf, from_fourier,
    from_mod4, lower_bound, xor_combine, Mod4Coefficients, OracleConfig,
};
use pfs_core::{
    AnfPolynomial, BooleanFunction, Family, FourierSpectrum, FunctionSpec, PeriodicRepresentation,
};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] pfs_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("{0}")]
    Usage(String),
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "pfs", version, about = "Periodic Fourier sparsity toolkit")]
struct Cli {
    /// Indent the JSON report.
    #[arg(long, global = true)]
    pretty: bool,
    /// Include wall-clock time in the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct FnArg {
    /// Function spec, e.g. `maj:3`, `mod:3:4`, `tt:2:8`, `anf:3:x1x2+x3`.
    #[arg(long = "fn", value_name = "SPEC")]
    function: String,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Method {
    Fourier,
    Anf,
    Mod4,
    AndCombine,
    XorCombine,
    Recipe,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Spectrum, ANF, lower bounds and construction sizes of a function.
    Analyze(FnArg),
    /// Build a periodic representation and verify it.
    Construct {
        /// Repeat for the combine methods.
        #[arg(long = "fn", value_name = "SPEC", required = true)]
        functions: Vec<String>,
        #[arg(long, value_enum, default_value = "fourier")]
        method: Method,
    },
    /// Check a representation file against a function.
    Verify {
        #[arg(long, value_name = "FILE")]
        rep: PathBuf,
        /// Target function; omitted, the report shows what the representation computes.
        #[arg(long = "fn", value_name = "SPEC")]
        function: Option<String>,
    },
    /// Lower and upper bounds on the periodic Fourier sparsity.
    Bounds(FnArg),
    /// Exact sparsity by exhaustive search (n <= 3).
    Oracle {
        #[command(flatten)]
        f: FnArg,
        #[arg(long, default_value_t = 7)]
        smax: usize,
        #[arg(long, value_name = "MS")]
        budget_ms: Option<u64>,
    },
    /// Optimized NMQC bias against the classical value.
    NmqcBias {
        #[arg(long = "fn", value_name = "SPEC", conflicts_with_all = ["game", "promise"])]
        function: Option<String>,
        /// Game file: `{"k": .., "entries": [{"z": [..], "h": .., "mu": ..}]}`.
        #[arg(long, value_name = "FILE", conflicts_with = "promise")]
        game: Option<PathBuf>,
        /// Promise game `P^k_n` as `k:n`.
        #[arg(long, value_name = "K:N")]
        promise: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Build and check the depth-2 protocol of a symmetric function.
    Depth2Sim {
        #[command(flatten)]
        f: FnArg,
        /// Input bits, `x_1` first, e.g. `0110`.
        #[arg(long, value_name = "BITS")]
        input: Option<String>,
    },
    /// Brute-force check of a distributive identity.
    IdentityCheck {
        #[arg(long, value_parser = ["and2", "maj3", "cqm"])]
        which: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: Option<usize>,
    },
    /// Errors of a randomized phase family and of its probabilistic polynomial.
    ApproxCheck {
        #[command(flatten)]
        f: FnArg,
        /// Family file: `{"n": .., "atoms": [{"w": .., "phi": [..]}]}`.
        #[arg(long, value_name = "FILE", conflicts_with = "rep")]
        family: Option<PathBuf>,
        /// A single representation used as a one-atom family.
        #[arg(long, value_name = "FILE")]
        rep: Option<PathBuf>,
        #[arg(long)]
        eps: Option<f64>,
    },
}

/// Result of one command: a JSON body and whether a checked property failed.
struct Outcome {
    body: Value,
    failed: bool,
}

impl Outcome {
    fn ok(body: Value) -> Self {
        Outcome {
            body,
            failed: false,
        }
    }

    fn checked(body: Value, passed: bool) -> Self {
        Outcome {
            body,
            failed: !passed,
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let file = File::open(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    serde_json::from_reader(BufReader::new(file)).map_err(|source| CliError::Json {
        path: path.to_owned(),
        source,
    })
}

fn load(spec: &str) -> CliResult<(FunctionSpec, BooleanFunction)> {
    let parsed: FunctionSpec = spec.parse()?;
    let f = parsed.build()?;
    Ok((parsed, f))
}

fn rep_json(rep: &PeriodicRepresentation, f: &BooleanFunction) -> CliResult<Value> {
    let report = rep.verify(f)?;
    Ok(json!({
        "representation": rep,
        "stats": rep.stats(),
        "verified": report.ok,
        "witness": report.witness,
    }))
}

/// `f = LSB^2(2 * sum_T c_T x^T)` for the ANF coefficients `c_T`; the complete
/// quadratic uses its own weight-1 form.
fn mod4_coefficients(spec: &FunctionSpec, f: &BooleanFunction) -> CliResult<Mod4Coefficients> {
    if let Some(Family::Cq(n)) = spec.family() {
        return Ok(cq_coefficients(*n));
    }
    let anf = AnfPolynomial::moebius(f)?;
    Ok(anf.monomials().iter().map(|&s| (s, 2)).collect())
}

fn analyze(spec: &str) -> CliResult<Outcome> {
    let (parsed, f) = load(spec)?;
    let spectrum = FourierSpectrum::wht(&f)?;
    let anf = AnfPolynomial::moebius(&f)?;
    let bound = match lower_bound(&f) {
        Ok(b) => Some(b),
        Err(pfs_core::Error::ConstantFunction) => None,
        Err(e) => return Err(e.into()),
    };
    let fourier = from_fourier(&f)?;
    let anf_rep = from_anf(&f)?;
    Ok(Outcome::ok(json!({
        "function": parsed.to_string(),
        "n": f.n(),
        "truth_table": f.to_hex(),
        "anf": anf,
        "f2_degree": anf.degree(),
        "spectrum": spectrum.stats(),
        "dimension": spectrum.dimension(),
        "symmetric_accept": f.symmetric_profile().map(|p| p.accept),
        "lower_bound": bound,
        "constructions": {
            "fourier": fourier.stats(),
            "anf": anf_rep.stats(),
        },
    })))
}

fn construct(specs: &[String], method: Method) -> CliResult<Outcome> {
    let loaded = specs
        .iter()
        .map(|s| load(s))
        .collect::<CliResult<Vec<_>>>()?;
    let combine = matches!(method, Method::AndCombine | Method::XorCombine);
    if !combine && loaded.len() != 1 {
        return Err(CliError::Usage(format!(
            "--method {method:?} takes exactly one --fn"
        )));
    }
    if combine && loaded.len() < 2 {
        return Err(CliError::Usage(
            "combine methods need at least two --fn".into(),
        ));
    }
    let (rep, target) = match method {
        Method::Fourier => (from_fourier(&loaded[0].1)?, loaded[0].1.clone()),
        Method::Anf => (from_anf(&loaded[0].1)?, loaded[0].1.clone()),
        Method::Mod4 => {
            let (spec, f) = &loaded[0];
            (from_mod4(f.n(), &mod4_coefficients(spec, f)?)?, f.clone())
        }
        Method::Recipe => {
            let (spec, f) = &loaded[0];
            let rep = match spec.family() {
                Some(Family::Cq(n)) => cq_recipe(*n)?,
                Some(Family::C3(n)) => c3_recipe(*n)?,
                _ => return Err(CliError::Usage("recipes exist for cq:N and c3:N".into())),
            };
            (rep, f.clone())
        }
        Method::AndCombine | Method::XorCombine => {
            let reps = loaded
                .iter()
                .map(|(_, f)| from_anf(f))
                .collect::<Result<Vec<_>, _>>()?;
            let mut target = loaded[0].1.clone();
            for (_, f) in &loaded[1..] {
                target = match method {
                    Method::AndCombine => target.and(f)?,
                    _ => target.xor(f)?,
                };
            }
            let rep = match method {
                Method::AndCombine => and_combine(&reps)?,
                _ => xor_combine(&reps)?,
            };
            (rep, target)
        }
    };
    let mut body = rep_json(&rep, &target)?;
    let verified = body["verified"] == json!(true);
    body["function"] = json!(loaded
        .iter()
        .map(|(s, _)| s.to_string())
        .collect::<Vec<_>>());
    body["method"] = json!(method.to_possible_value().map(|v| v.get_name().to_string()));
    Ok(Outcome::checked(body, verified))
}

fn verify(path: &Path, spec: Option<&str>) -> CliResult<Outcome> {
    let rep: PeriodicRepresentation = read_json(path)?;
    match spec {
        Some(spec) => {
            let (parsed, f) = load(spec)?;
            let mut body = rep_json(&rep, &f)?;
            let verified = body["verified"] == json!(true);
            body["function"] = json!(parsed.to_string());
            Ok(Outcome::checked(body, verified))
        }
        None => {
            let exact = rep.is_exact();
            let computed = rep.function().ok().map(|f| f.to_hex());
            Ok(Outcome::checked(
                json!({
                    "representation": rep,
                    "stats": rep.stats(),
                    "exact": exact,
                    "truth_table": computed,
                }),
                exact,
            ))
        }
    }
}

fn bounds(spec: &str) -> CliResult<Outcome> {
    let (parsed, f) = load(spec)?;
    let lower = lower_bound(&f)?;
    let fourier = from_fourier(&f)?.sparsity();
    let anf = from_anf(&f)?.sparsity();
    Ok(Outcome::ok(json!({
        "function": parsed.to_string(),
        "lower_bound": lower,
        "upper_bound": fourier.min(anf),
        "constructions": { "fourier": fourier, "anf": anf },
        "pinned": lower.value == fourier.min(anf),
    })))
}

fn oracle(spec: &str, smax: usize, budget_ms: Option<u64>) -> CliResult<Outcome> {
    let (parsed, f) = load(spec)?;
    let mut config = OracleConfig::with_s_max(smax);
    if let Some(ms) = budget_ms {
        config.budget = Some(Duration::from_millis(ms));
    }
    let found = brute_force_pfs(&f, &config)?;
    Ok(Outcome::ok(json!({
        "function": parsed.to_string(),
        "s_max": smax,
        "pfs": found.as_ref().map(|r| r.sparsity),
        "witness": found.as_ref().map(|r| &r.representation),
    })))
}

fn parse_pair(text: &str) -> CliResult<(usize, usize)> {
    let bad = || CliError::Usage(format!("expected `k:n`, found `{text}`"));
    let (a, b) = text.split_once(':').ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

fn nmqc_bias(
    spec: Option<&str>,
    game_path: Option<&Path>,
    promise: Option<&str>,
    config: OptimizerConfig,
) -> CliResult<Outcome> {
    let mut body = json!({});
    let game = match (spec, game_path, promise) {
        (Some(spec), None, None) => {
            let (parsed, f) = load(spec)?;
            body["function"] = json!(parsed.to_string());
            XorGame::from_function(&f)?
        }
        (None, Some(path), None) => read_json(path)?,
        (None, None, Some(text)) => {
            let (k, n) = parse_pair(text)?;
            let p = promise_mod_game(k, n)?;
            let phases: Vec<f64> = p.protocol.phases.iter().map(|ph| ph.to_f64()).collect();
            body["promise"] = json!({ "k": k, "n": n });
            body["protocol"] = json!(p.protocol);
            body["protocol_bias"] = json!(quantum_bias(&p.game, &phases)?);
            p.game
        }
        _ => {
            return Err(CliError::Usage(
                "give exactly one of --fn, --game, --promise".into(),
            ))
        }
    };
    body["k"] = json!(game.k());
    body["classical_bias"] = if game.k() <= CLASSICAL_CAP {
        json!(classical_bias(&game)?)
    } else {
        Value::Null
    };
    body["optimum"] = json!(optimize_bias(&game, &config));
    Ok(Outcome::ok(body))
}

fn parse_bits(text: &str, n: usize) -> CliResult<Vec<bool>> {
    let bits = text
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(CliError::Usage(format!(
                "input bits must be 0 or 1, found `{c}`"
            ))),
        })
        .collect::<CliResult<Vec<_>>>()?;
    if bits.len() != n {
        return Err(pfs_core::Error::Arity {
            expected: n,
            got: bits.len(),
        }
        .into());
    }
    Ok(bits)
}

fn depth2_sim(spec: &str, input: Option<&str>) -> CliResult<Outcome> {
    let (parsed, f) = load(spec)?;
    let protocol = build_for_function(&f)?;
    let verification = verify_depth2(&protocol, &f)?;
    let mut body = json!({
        "function": parsed.to_string(),
        "verification": verification,
        "qubits": protocol.qubit_count(),
        "block_offsets": protocol.blocks().iter().map(|b| b.offset).collect::<Vec<_>>(),
        "final_constant": protocol.final_constant(),
    });
    if let Some(text) = input {
        let x = parse_bits(text, f.n())?;
        body["input"] = json!(text);
        body["expected"] = json!(f.evaluate(&x)?);
        body["support"] = json!(protocol.simulate_support(&x)?);
    }
    Ok(Outcome::checked(body, verification.ok))
}

fn identity_check(which: &str, n: usize, m: Option<usize>) -> CliResult<Outcome> {
    let identity = DistributiveIdentity::parse(which, m, n)?;
    let holds = check_distributive_identity(identity)?;
    Ok(Outcome::checked(
        json!({ "which": which, "n": n, "m": m, "holds": holds }),
        holds,
    ))
}

fn approx_check(
    spec: &str,
    family: Option<&Path>,
    rep: Option<&Path>,
    eps: Option<f64>,
) -> CliResult<Outcome> {
    let (parsed, f) = load(spec)?;
    let family: RandomizedPhaseFamily = match (family, rep) {
        (Some(path), _) => read_json(path)?,
        (None, Some(path)) => RandomizedPhaseFamily::single(read_json(path)?),
        (None, None) => RandomizedPhaseFamily::single(from_anf(&f)?),
    };
    let pointwise = pointwise_error(&family, &f)?;
    let distributional = distribution_error(&family, &f, &uniform_distribution(f.n()))?;
    let pp = theorem3_polynomial(&family)?;
    let poly_error = polynomial_error(&pp, &f)?;
    let within = eps.map(|e| pointwise <= e);
    Ok(Outcome::checked(
        json!({
            "function": parsed.to_string(),
            "family": family,
            "pointwise_error": pointwise,
            "uniform_distribution_error": distributional,
            "eps": eps,
            "within_eps": within,
            "polynomial": {
                "degree": pp.degree(),
                "error": poly_error,
                "terms": pp.terms,
                "atoms": pp.atoms,
            },
        }),
        within != Some(false),
    ))
}

fn run(command: &Command) -> CliResult<Outcome> {
    match command {
        Command::Analyze(f) => analyze(&f.function),
        Command::Construct { functions, method } => construct(functions, *method),
        Command::Verify { rep, function } => verify(rep, function.as_deref()),
        Command::Bounds(f) => bounds(&f.function),
        Command::Oracle { f, smax, budget_ms } => oracle(&f.function, *smax, *budget_ms),
        Command::NmqcBias {
            function,
            game,
            promise,
            seed,
            restarts,
            tol,
        } => nmqc_bias(
            function.as_deref(),
            game.as_deref(),
            promise.as_deref(),
            OptimizerConfig {
                restarts: *restarts,
                tol: *tol,
                seed: *seed,
                ..OptimizerConfig::default()
            },
        ),
        Command::Depth2Sim { f, input } => depth2_sim(&f.function, input.as_deref()),
        Command::IdentityCheck { which, n, m } => identity_check(which, *n, *m),
        Command::ApproxCheck {
            f,
            family,
            rep,
            eps,
        } => approx_check(&f.function, family.as_deref(), rep.as_deref(), *eps),
    }
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Analyze(_) => "analyze",
        Command::Construct { .. } => "construct",
        Command::Verify { .. } => "verify",
        Command::Bounds(_) => "bounds",
        Command::Oracle { .. } => "oracle",
        Command::NmqcBias { .. } => "nmqc-bias",
        Command::Depth2Sim { .. } => "depth2-sim",
        Command::IdentityCheck { .. } => "identity-check",
        Command::ApproxCheck { .. } => "approx-check",
    }
}

fn emit(value: &Value, pretty: bool) {
    let text = if pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    };
    println!("{}", text.expect("JSON values always serialize"));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let start = Instant::now();
    let outcome = run(&cli.command);
    let elapsed = start.elapsed();
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (mut report, code) = match outcome {
        Ok(o) => {
            let code = if o.failed { 2 } else { 0 };
            (
                json!({ "command": command_name(&cli.command), "args": args, "result": o.body }),
                code,
            )
        }
        Err(e) => {
            eprintln!("error: {e}");
            (
                json!({ "command": command_name(&cli.command), "args": args, "error": e.to_string() }),
                1,
            )
        }
    };
    if cli.timing {
        report["timing_ms"] = json!(elapsed.as_secs_f64() * 1e3);
    }
    emit(&report, cli.pretty);
    ExitCode::from(code)
}
