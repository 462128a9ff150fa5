//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use pfs_core::approx::{polynomial_error, theorem3_for_rep};
use pfs_core::depth2::{build_for_function, verify_depth2};
use pfs_core::fourier::mod3_closed_form;
use pfs_core::nmqc::{
    check_distributive_identity, classical_bias, classical_bias_exhaustive, optimize_bias,
    promise_mod_game, quantum_bias, DistributiveIdentity, OptimizerConfig, XorGame,
};
use pfs_core::periodic::{
    brute_force_pfs, c3_recipe, cq_coefficients, from_anf, from_fourier, from_mod4, lower_bound,
    OracleConfig,
};
use pfs_core::{
    anf::lsb_symmetric, make_family, AnfPolynomial, BooleanFunction, Dyadic, FourierSpectrum,
    PeriodicRepresentation,
};
use rand::{Rng, SeedableRng};

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let holds: bool = $cond;
        if !holds {
            return Err(format!($($msg)+));
        }
    };
}

fn fam(name: &str, params: &[usize]) -> BooleanFunction {
    make_family(name, params).unwrap()
}

/// Every named family at `n`, with the parameterized ones over a spread of
/// parameters.
fn named_families(n: usize) -> Vec<(String, BooleanFunction)> {
    let mut out = Vec::new();
    for name in ["and", "or", "xor", "cq", "c3"] {
        out.push((format!("{name}:{n}"), fam(name, &[n])));
    }
    if n % 2 == 1 {
        out.push((format!("maj:{n}"), fam("maj", &[n])));
    }
    for k in 2..=n.clamp(2, 4) {
        out.push((format!("mod:{k}:{n}"), fam("mod", &[k, n])));
    }
    for k in [0, n / 2, n] {
        out.push((format!("exact:{k}:{n}"), fam("exact", &[k, n])));
    }
    for l in 1..=3 {
        out.push((format!("lsb:{l}:{n}"), fam("lsb", &[l, n])));
    }
    out
}

fn signs(f: &BooleanFunction) -> Vec<Dyadic> {
    (0..f.len())
        .map(|m| Dyadic::from(f.sign(m) as i64))
        .collect()
}

/// Representations seen by the suite, re-checked against the digit bounds.
#[derive(Default)]
struct Seen {
    reps: Vec<(String, PeriodicRepresentation, BooleanFunction)>,
}

impl Seen {
    fn add(&mut self, label: impl Into<String>, rep: &PeriodicRepresentation, f: &BooleanFunction) {
        self.reps.push((label.into(), rep.clone(), f.clone()));
    }
}

fn verified(rep: &PeriodicRepresentation, f: &BooleanFunction, label: &str) -> Outcome {
    let report = rep.verify(f).map_err(|e| format!("{label}: {e}"))?;
    ensure!(report.ok, "{label}: verify failed");
    Ok(())
}

fn round_trips(_: &mut Seen) -> Outcome {
    for n in 1..=12 {
        for (label, f) in named_families(n) {
            let spectrum = FourierSpectrum::wht(&f).unwrap();
            ensure!(
                spectrum.reconstruct_all() == signs(&f),
                "{label}: wht round trip"
            );
            let anf = AnfPolynomial::moebius(&f).unwrap();
            ensure!(
                (0..f.len()).all(|m| anf.eval_index(m) == f.value(m)),
                "{label}: moebius round trip"
            );
        }
    }
    Ok(())
}

fn constructions(seen: &mut Seen) -> Outcome {
    for n in 1..=10 {
        for (label, f) in named_families(n) {
            let rep = from_fourier(&f).unwrap();
            verified(&rep, &f, &format!("from_fourier {label}"))?;
            seen.add(format!("from_fourier {label}"), &rep, &f);
            let rep = from_anf(&f).unwrap();
            verified(&rep, &f, &format!("from_anf {label}"))?;
            seen.add(format!("from_anf {label}"), &rep, &f);
        }
    }
    for n in 2..=12 {
        let f = fam("cq", &[n]);
        let rep = from_mod4(n, &cq_coefficients(n)).unwrap();
        verified(&rep, &f, &format!("from_mod4 cq:{n}"))?;
        seen.add(format!("from_mod4 cq:{n}"), &rep, &f);
    }
    Ok(())
}

fn cq_sparsities(seen: &mut Seen) -> Outcome {
    let mut anf_misses = Vec::new();
    for n in 2..=12 {
        let f = fam("cq", &[n]);
        let mod4 = from_mod4(n, &cq_coefficients(n)).unwrap();
        ensure!(
            mod4.sparsity() == n + 1,
            "mod4 cq:{n} sparsity {}",
            mod4.sparsity()
        );
        ensure!(mod4.digits() == 2, "mod4 cq:{n} digits {}", mod4.digits());
        // Even n gives n(n+1)/2. For odd n the singleton phases are -(n-1)/4,
        // which fold into the constant when n = 1 (mod 4), leaving only the pairs.
        let anf = from_anf(&f).unwrap();
        let expected = if n % 4 == 1 {
            n * (n - 1) / 2
        } else {
            n * (n + 1) / 2
        };
        if anf.sparsity() != expected {
            anf_misses.push(format!("n={n}: {} != {expected}", anf.sparsity()));
        }
        seen.add(format!("from_anf cq:{n}"), &anf, &f);
    }
    for n in (2..=10).step_by(2) {
        let f = fam("cq", &[n]);
        let rep = from_fourier(&f).unwrap();
        ensure!(
            rep.sparsity() == (1 << n) - 1,
            "fourier cq:{n} sparsity {}",
            rep.sparsity()
        );
    }
    ensure!(
        anf_misses.is_empty(),
        "from_anf cq sparsity {}",
        anf_misses.join(", ")
    );
    Ok(())
}

fn c3_recipe_sizes(seen: &mut Seen) -> Outcome {
    for n in 3..=10 {
        let f = fam("c3", &[n]);
        let rep = c3_recipe(n).unwrap();
        verified(&rep, &f, &format!("c3 recipe n={n}"))?;
        seen.add(format!("c3 recipe n={n}"), &rep, &f);
        ensure!(
            rep.digits() == 3,
            "c3 recipe n={n}: digits {}",
            rep.digits()
        );
        let expected = if n % 8 == 2 { 2 * n } else { 2 * n + 1 };
        ensure!(
            rep.sparsity() == expected,
            "c3 recipe n={n}: sparsity {} != {expected}",
            rep.sparsity()
        );
    }
    Ok(())
}

fn mod3_pinned(seen: &mut Seen) -> Outcome {
    for n in 3..=8 {
        let f = fam("mod", &[3, n]);
        let rep = from_fourier(&f).unwrap();
        seen.add(format!("from_fourier mod:3:{n}"), &rep, &f);
        let expected = if n % 3 == 0 {
            (1 << (n - 1)) - 1
        } else {
            (1 << n) - 1
        };
        ensure!(
            rep.sparsity() == expected,
            "mod:3:{n}: sparsity {} != {expected}",
            rep.sparsity()
        );
        let lb = lower_bound(&f).unwrap().value;
        ensure!(lb == expected, "mod:3:{n}: lower bound {lb} != {expected}");
    }
    Ok(())
}

fn oracle(seen: &mut Seen) -> Outcome {
    let cfg = OracleConfig {
        budget: Some(Duration::from_secs(30 * 60)),
        ..OracleConfig::default()
    };
    let mut check = |label: &str, f: &BooleanFunction| -> Result<usize, String> {
        let r = brute_force_pfs(f, &cfg)
            .map_err(|e| format!("{label}: {e}"))?
            .ok_or_else(|| format!("{label}: no representation within s_max"))?;
        verified(&r.representation, f, label)?;
        seen.add(format!("oracle {label}"), &r.representation, f);
        let deg = AnfPolynomial::moebius(f).unwrap().degree();
        ensure!(
            r.sparsity + 1 >= 1 << deg,
            "{label}: pfs {} below 2^{deg}-1",
            r.sparsity
        );
        Ok(r.sparsity)
    };
    for code in 0..16u32 {
        let f = BooleanFunction::from_fn(2, |m| code >> m & 1 == 1).unwrap();
        check(&format!("n=2 code {code}"), &f)?;
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
    let mut functions = named_families(3);
    functions.extend((0..50).map(|i| {
        let code: u8 = rng.gen();
        (
            format!("random #{i} ({code:#04x})"),
            BooleanFunction::from_fn(3, |m| code >> m & 1 == 1).unwrap(),
        )
    }));
    for (label, f) in &functions {
        check(label, f)?;
    }
    for (label, f, want) in [
        ("and:2", fam("and", &[2]), 3),
        ("and:3", fam("and", &[3]), 7),
        ("maj:3", fam("maj", &[3]), 4),
        ("mod:3:3", fam("mod", &[3, 3]), 3),
    ] {
        let got = check(label, &f)?;
        ensure!(got == want, "pfs({label}) = {got}, expected {want}");
    }
    Ok(())
}

fn depth2(seen: &mut Seen) -> Outcome {
    let mut worst_ratio: f64 = 0.0;
    for n in 1..=10 {
        let mut fs = vec![
            (format!("or:{n}"), fam("or", &[n])),
            (format!("mod:3:{n}"), fam("mod", &[3, n])),
        ];
        fs.extend((0..=n).map(|k| (format!("exact:{k}:{n}"), fam("exact", &[k, n]))));
        if n % 2 == 1 {
            fs.push((format!("maj:{n}"), fam("maj", &[n])));
        }
        for (label, f) in fs {
            let p = build_for_function(&f).map_err(|e| format!("{label}: {e}"))?;
            let v = verify_depth2(&p, &f).unwrap();
            ensure!(v.ok, "{label}: depth-2 protocol wrong at {:?}", v.witness);
            if n >= 2 {
                let scale = (n * n) as f64 * (n as f64).log2();
                worst_ratio = worst_ratio.max(p.qubit_count() as f64 / scale);
            }
        }
        let or_m = fam("or", &[n]);
        seen.add(
            format!("from_fourier or:{n}"),
            &from_fourier(&or_m).unwrap(),
            &or_m,
        );
    }
    let q = build_for_function(&fam("or", &[4])).unwrap().qubit_count();
    ensure!(q == 19, "OR_4 uses {q} qubits, expected 19");
    // Fit constant for q <= c n^2 log n over n = 2..10.
    ensure!(
        worst_ratio <= 4.0,
        "qubit growth ratio {worst_ratio:.3} exceeds 4"
    );
    Ok(())
}

fn biases(_: &mut Seen) -> Outcome {
    let target = std::f64::consts::FRAC_1_SQRT_2 - 1e-6;
    for n in [2, 3] {
        let game = XorGame::from_function(&fam("cq", &[n])).unwrap();
        let opt = optimize_bias(&game, &OptimizerConfig::default());
        ensure!(opt.bias >= target, "cq:{n}: optimized bias {}", opt.bias);
        let c = classical_bias(&game).unwrap();
        let c_exh = classical_bias_exhaustive(&game).unwrap();
        ensure!(
            c == 0.5 && c_exh == 0.5,
            "cq:{n}: classical bias {c} / {c_exh}"
        );
    }
    for k in [2, 4, 5] {
        for n in k..=10 {
            let p = promise_mod_game(k, n).unwrap();
            let phases: Vec<f64> = p.protocol.phases.iter().map(|ph| ph.to_f64()).collect();
            let bias = quantum_bias(&p.game, &phases).unwrap();
            ensure!(
                (bias - 1.0).abs() <= 1e-9,
                "promise k={k} n={n}: bias {bias}"
            );
        }
    }
    Ok(())
}

fn identities(_: &mut Seen) -> Outcome {
    let mut cases = Vec::new();
    cases.extend((1..=4).map(|n| DistributiveIdentity::And2 { n }));
    cases.extend((1..=3).map(|n| DistributiveIdentity::Maj3 { n }));
    for m in 1..=3 {
        cases.extend((1..=3).map(|n| DistributiveIdentity::Cq { m, n }));
    }
    for which in cases {
        ensure!(
            check_distributive_identity(which).unwrap(),
            "{which:?} does not hold"
        );
    }
    Ok(())
}

fn closed_form(_: &mut Seen) -> Outcome {
    for n in 3..=10 {
        let closed = mod3_closed_form(n).unwrap();
        let direct = FourierSpectrum::wht(&fam("mod", &[3, n])).unwrap();
        for s in 0..1u32 << n {
            ensure!(
                closed.coeff(s) == direct.coeff(s),
                "n={n} S={s:#b}: {} != {}",
                closed.coeff(s),
                direct.coeff(s)
            );
        }
    }
    Ok(())
}

fn probabilistic_polynomials(seen: &mut Seen) -> Outcome {
    for n in 1..=12 {
        for l in 1..=3 {
            let poly = lsb_symmetric(l, n).unwrap();
            ensure!(
                poly.to_function() == fam("lsb", &[l, n]),
                "lsb_symmetric({l}, {n})"
            );
        }
    }
    let mut cases = Vec::new();
    for n in 1..=8 {
        let cq = fam("cq", &[n]);
        let xor = fam("xor", &[n]);
        if n >= 2 {
            cases.push((
                format!("mod4 cq:{n}"),
                from_mod4(n, &cq_coefficients(n)).unwrap(),
                cq,
            ));
        }
        cases.push((format!("fourier xor:{n}"), from_fourier(&xor).unwrap(), xor));
        if n >= 3 {
            cases.push((
                format!("c3 recipe n={n}"),
                c3_recipe(n).unwrap(),
                fam("c3", &[n]),
            ));
        }
    }
    for (label, rep, f) in cases {
        seen.add(label.clone(), &rep, &f);
        let pp = theorem3_for_rep(&rep).map_err(|e| format!("{label}: {e}"))?;
        let atom = &pp.atoms[0];
        let top = &atom.ys[atom.ell as usize];
        ensure!(top.to_function() == f, "{label}: y_ell differs from f");
        ensure!(atom.parity_degrees[0] == 0, "{label}: y_0 not constant");
        for (i, &deg) in atom.parity_degrees.iter().enumerate().skip(1) {
            ensure!(deg <= 1 << (i - 1), "{label}: deg y_{i} = {deg}");
        }
        let err = polynomial_error(&pp, &f).unwrap();
        ensure!(err == 0.0, "{label}: polynomial error {err}");
    }
    Ok(())
}

fn digit_bounds(seen: &Seen) -> Outcome {
    ensure!(!seen.reps.is_empty(), "no representations recorded");
    for (label, rep, f) in &seen.reps {
        let digits = rep.digits();
        if !f.is_constant() {
            let deg = AnfPolynomial::moebius(f).unwrap().degree() as u32;
            ensure!(deg <= digits, "{label}: deg {deg} > digits {digits}");
        }
        let cap = (rep.sparsity() as u32 + 1).ilog2();
        ensure!(
            digits <= cap,
            "{label}: digits {digits} > log2(sparsity + 1) = {cap}"
        );
    }
    Ok(())
}

fn run(f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(format!("panicked: {msg}"))
    });
    (outcome, start.elapsed())
}

fn main() -> ExitCode {
    type Criterion = (usize, &'static str, fn(&mut Seen) -> Outcome);
    let criteria: [Criterion; 11] = [
        (1, "transform round trips, n = 1..12", round_trips),
        (2, "constructions verify", constructions),
        (3, "complete quadratic sparsities", cq_sparsities),
        (4, "complete cubic recipe", c3_recipe_sizes),
        (5, "Mod3 sparsity pinned by lower bound", mod3_pinned),
        (6, "brute-force oracle", oracle),
        (8, "depth-2 protocols", depth2),
        (9, "NMQC biases", biases),
        (10, "distributive identities", identities),
        (11, "Mod3 closed-form spectrum", closed_form),
        (
            12,
            "LSB polynomials and probabilistic polynomials",
            probabilistic_polynomials,
        ),
    ];
    let mut seen = Seen::default();
    let mut results = Vec::new();
    for (id, name, check) in criteria {
        let (outcome, took) = run(|| check(&mut seen));
        results.push((id, name, outcome, took));
    }
    let (outcome, took) = run(|| digit_bounds(&seen));
    results.push((7, "digit bounds on every representation", outcome, took));
    results.sort_by_key(|r| r.0);

    let mut failed = 0;
    for (id, name, outcome, took) in &results {
        match outcome {
            Ok(()) => println!("PASS [{id:>2}] {name} ({:.2}s)", took.as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("FAIL [{id:>2}] {name} ({:.2}s): {msg}", took.as_secs_f64());
            }
        }
    }
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
