use std::path::Path;

use qbf::build::{anticommuting_combination, balance, bit_oracle, phase_oracle, projector_qbf, sign_function, spin_flip, TruthTable};
use qbf::dynamics::{learn_evolved, lieb_robinson_profile, evolve_observable, ChainHamiltonian, LEARNING_CEILING};
use qbf::fkn::{exact_fkn_check, fkn_infty_check, two_norm_fkn_report};
use qbf::format::write_dense;
use qbf::influence::{
    anticommuting_kkl_check, bad_influence_detect, haar_influence, influence, influence_set, influences,
    poincare_check, talagrand_check, total_influence,
};
use qbf::learning::{Mode, OracleHandle};
use qbf::noise::{
    apply_noise, depolarize, hypercontractivity_check, low_degree_norm_check, projector_level1_check,
    rank_bound_check, search_violation,
};
use qbf::pauli::{fourier_transform, is_quantum_boolean, pauli_matrix};
use qbf::random::{random_hermitian, random_quantum_boolean};
use qbf::testing::{
    discrimination_probability, hastad_test_probability, hastad_test_sample, hastad_verdict,
    locality_test_probability, stabilizer_test, stabilizer_test_sample,
};
use qbf::{Operator64, Pauli, PauliString, Spectrum64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::input::{load, Loaded};
use crate::report::Report;
use crate::{BuildCommand, Cli, CliError, Command, DynamicsCommand, Emit, FknArgs, HyperCommand, InfluenceArgs, TestCommand};

#[derive(Serialize)]
struct Term {
    string: String,
    re: f64,
    im: f64,
}

fn terms(spec: &Spectrum64) -> Vec<Term> {
    spec.iter().map(|(s, c)| Term { string: s.to_string(), re: c.re, im: c.im }).collect()
}

/// Converts a 1-based qubit to 0-based.
fn qubit(q: usize, n: usize) -> Result<usize, CliError> {
    if q == 0 || q > n {
        return Err(CliError::Usage(format!("qubit {q} out of range 1..={n}")));
    }
    Ok(q - 1)
}

fn qubits(qs: &[usize], n: usize) -> Result<Vec<usize>, CliError> {
    qs.iter().map(|&q| qubit(q, n)).collect()
}

fn pauli(s: &str) -> Result<Pauli, CliError> {
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Pauli::from_char(c)
            .filter(|p| !p.is_identity())
            .ok_or_else(|| CliError::Usage(format!("'{s}' is not one of X, Y, Z"))),
        _ => Err(CliError::Usage(format!("'{s}' is not one of X, Y, Z"))),
    }
}

struct Ctx<'a> {
    cli: &'a Cli,
    seed: u64,
    inputs: Vec<crate::report::InputDigest>,
}

impl Ctx<'_> {
    fn load(&mut self, path: &Path) -> Result<Operator64, CliError> {
        let Loaded { operator, digest } = load(path, self.cli.kind.into(), self.cli.oracle.into())?;
        self.inputs.push(digest);
        Ok(operator)
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    fn report(&mut self, command: &str) -> Report {
        let mut r = Report::new(command, self.seed, self.cli.tol);
        r.inputs = std::mem::take(&mut self.inputs);
        r
    }
}

pub fn run(cli: &Cli, seed: u64) -> Result<Report, CliError> {
    if !(cli.tol >= 0.0 && cli.tol.is_finite()) {
        return Err(CliError::Usage(format!("tolerance {} must be a finite nonnegative number", cli.tol)));
    }
    let mut ctx = Ctx { cli, seed, inputs: Vec::new() };
    match &cli.command {
        Command::Spectrum { input, levels } => spectrum(&mut ctx, input, *levels),
        Command::Build { emit, what } => build(&mut ctx, *emit, what),
        Command::Test { what } => test(&mut ctx, what),
        Command::Gl { input, gamma, delta, exact } => gl(&mut ctx, input, *gamma, *delta, *exact),
        Command::Noise { input, epsilon, depolarize } => noise(&mut ctx, input, *epsilon, *depolarize),
        Command::Hyper { what } => hyper(&mut ctx, what),
        Command::Influence(args) => influence_cmd(&mut ctx, args),
        Command::Fkn(args) => fkn(&mut ctx, args),
        Command::Dynamics { what } => dynamics(&mut ctx, what),
    }
}

fn spectrum(ctx: &mut Ctx, input: &Path, levels: bool) -> Result<Report, CliError> {
    let f = ctx.load(input)?;
    let spec = fourier_transform(&f);
    let mut body = spec.to_string();
    let mut results = json!({
        "n": spec.n(),
        "hermitian": spec.is_hermitian(),
        "total_weight": spec.total_weight(),
        "terms": terms(&spec),
    });
    if levels {
        let per_level = spec.weight_per_level();
        body.push_str(&format!("# degree: {}\n# weight per level: {:?}\n", spec.degree(), per_level));
        results["degree"] = json!(spec.degree());
        results["weight_per_level"] = json!(per_level);
    }
    Ok(ctx.report("spectrum").results(&results).body(body))
}

fn emit(f: &Operator64, emit: Emit) -> String {
    match emit {
        Emit::Spectrum => fourier_transform(f).to_string(),
        Emit::Dense => write_dense(f),
    }
}

fn build(ctx: &mut Ctx, how: Emit, what: &BuildCommand) -> Result<Report, CliError> {
    let tol = ctx.cli.tol;
    let (name, f) = match what {
        BuildCommand::Phase { truth } => ("build phase", phase_oracle(&truth.parse::<TruthTable>()?)),
        BuildCommand::Bit { truth } => ("build bit", bit_oracle(&truth.parse::<TruthTable>()?)),
        BuildCommand::Projector { input } => {
            let p = ctx.load(input)?;
            ("build projector", projector_qbf(&p, tol)?)
        }
        BuildCommand::Combination { alphas, strings } => {
            let fs = strings
                .iter()
                .map(|s| s.parse::<PauliString>().map(|s| pauli_matrix::<f64>(&s)))
                .collect::<Result<Vec<_>, _>>()?;
            ("build combination", anticommuting_combination(alphas, &fs, tol.max(1e-12))?)
        }
        BuildCommand::Sign { input } => {
            let h = ctx.load(input)?;
            ("build sign", sign_function(&h)?)
        }
        BuildCommand::Balance { input } => {
            let f = ctx.load(input)?;
            ("build balance", balance(&f, tol.max(1e-12))?)
        }
        BuildCommand::SpinFlip { input, qubit: q } => {
            let m = ctx.load(input)?;
            let j = qubit(*q, m.n())?;
            ("build spin-flip", spin_flip(&m, j)?)
        }
        BuildCommand::RandomBoolean { n, traceless } => {
            ("build random-boolean", random_quantum_boolean(*n, *traceless, &mut ctx.rng()))
        }
        BuildCommand::RandomHermitian { n } => ("build random-hermitian", random_hermitian(*n, &mut ctx.rng())),
    };
    let text = emit(&f, how);
    let results = json!({
        "n": f.n(),
        "quantum_boolean": is_quantum_boolean(&f, tol.max(1e-12)),
        "operator": text,
    });
    Ok(ctx.report(name).results(&results).body(text))
}

fn test(ctx: &mut Ctx, what: &TestCommand) -> Result<Report, CliError> {
    match what {
        TestCommand::Stabilizer { input, trials } => {
            let f = ctx.load(input)?;
            let report = match trials {
                Some(t) => {
                    let mut r = stabilizer_test_sample(&f, *t, &mut ctx.rng())?;
                    r.seed = Some(ctx.seed);
                    r
                }
                None => stabilizer_test(&f)?,
            };
            let results = json!({ "report": report, "binomial_sigma": report.binomial_sigma() });
            Ok(ctx.report("test stabilizer").results(&results))
        }
        TestCommand::Locality { input, ceiling } => {
            let f = ctx.load(input)?;
            let p = locality_test_probability(&f, *ceiling)?;
            Ok(ctx.report("test locality").results(&json!({ "probability": p })))
        }
        TestCommand::Hastad { input, delta, trials, epsilon } => {
            let f = ctx.load(input)?;
            let results = match (delta, epsilon) {
                (_, Some(eps)) => json!({ "report": hastad_verdict(&f, *eps)? }),
                (Some(d), None) => match trials {
                    Some(t) => {
                        let mut r = hastad_test_sample(&f, *d, *t, &mut ctx.rng())?;
                        r.seed = Some(ctx.seed);
                        json!({ "delta": d, "report": r, "binomial_sigma": r.binomial_sigma() })
                    }
                    None => json!({ "delta": d, "probability": hastad_test_probability(&f, *d)? }),
                },
                (None, None) => return Err(CliError::Usage("hastad needs --delta or --epsilon".into())),
            };
            Ok(ctx.report("test hastad").results(&results))
        }
        TestCommand::Discriminate { input, other } => {
            let f = ctx.load(input)?;
            let g = ctx.load(other)?;
            let p = discrimination_probability(&f, &g)?;
            Ok(ctx.report("test discriminate").results(&json!({ "success_probability": p })))
        }
    }
}

fn gl(ctx: &mut Ctx, input: &Path, gamma: f64, delta: f64, exact: bool) -> Result<Report, CliError> {
    let f = ctx.load(input)?;
    let mode = if exact { Mode::Exact } else { Mode::Sampled };
    let mut oracle = OracleHandle::new(f, ctx.seed)?.with_mode(mode);
    let result = oracle.goldreich_levin(gamma, delta)?;
    let passed = result.list_bound_respected && result.estimations_respected();
    Ok(ctx.report("gl").results(&json!({ "mode": mode, "result": result })).check(passed))
}

fn noise(ctx: &mut Ctx, input: &Path, epsilon: f64, channel: bool) -> Result<Report, CliError> {
    let f = ctx.load(input)?;
    let spec = if channel { fourier_transform(&depolarize(&f, epsilon)?) } else { apply_noise(&fourier_transform(&f), epsilon)? };
    let results = json!({ "epsilon": epsilon, "channel": channel, "terms": terms(&spec) });
    Ok(ctx.report("noise").results(&results).body(spec.to_string()))
}

fn default_epsilon(p: f64, q: f64, epsilon: Option<f64>) -> Result<f64, CliError> {
    match epsilon {
        Some(e) => Ok(e),
        None if q > 1.0 && p >= 1.0 => Ok(((p - 1.0) / (q - 1.0)).sqrt()),
        None => Err(CliError::Usage("give --epsilon when q <= 1".into())),
    }
}

/// Parses `n=3,count=500`.
fn parse_grid(spec: &str) -> Result<(usize, usize), CliError> {
    let mut n = None;
    let mut count = None;
    for part in spec.split(',') {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("grid entry '{part}' is not key=value")))?;
        let value: usize = value.trim().parse().map_err(|_| CliError::Usage(format!("grid value '{value}' is not a count")))?;
        match key.trim() {
            "n" => n = Some(value),
            "count" => count = Some(value),
            other => return Err(CliError::Usage(format!("unknown grid key '{other}'"))),
        }
    }
    match (n, count) {
        (Some(n), Some(c)) if n >= 1 && c >= 1 => Ok((n, c)),
        _ => Err(CliError::Usage("grid needs n >= 1 and count >= 1".into())),
    }
}

fn hyper(ctx: &mut Ctx, what: &HyperCommand) -> Result<Report, CliError> {
    let tol = ctx.cli.tol;
    match what {
        HyperCommand::Check { input, p, q, epsilon, grid } => {
            let eps = default_epsilon(*p, *q, *epsilon)?;
            match (input, grid) {
                (Some(path), None) => {
                    let f = ctx.load(path)?;
                    let r = hypercontractivity_check(&f, *p, *q, eps)?;
                    let passed = !r.in_theorem_regime || r.holds(tol);
                    Ok(ctx.report("hyper check").results(&r).check(passed))
                }
                (None, Some(grid)) => {
                    let (n, count) = parse_grid(grid)?;
                    let mut rng = ctx.rng();
                    let mut min_margin = f64::INFINITY;
                    let mut failures = 0usize;
                    let mut in_regime = true;
                    for _ in 0..count {
                        let f = random_hermitian::<f64, _>(n, &mut rng);
                        let r = hypercontractivity_check(&f, *p, *q, eps)?;
                        in_regime = r.in_theorem_regime;
                        min_margin = min_margin.min(r.margin);
                        failures += usize::from(r.margin < -tol);
                    }
                    let results = json!({
                        "p": p, "q": q, "epsilon": eps, "n": n, "count": count,
                        "in_theorem_regime": in_regime, "min_margin": min_margin, "failures": failures,
                    });
                    let passed = !in_regime || failures == 0;
                    Ok(ctx.report("hyper check").results(&results).check(passed))
                }
                _ => Err(CliError::Usage("hyper check needs exactly one of --in and --grid".into())),
            }
        }
        HyperCommand::Search { p, q, epsilon, n, restarts } => {
            let eps = default_epsilon(*p, *q, *epsilon)?;
            let r = search_violation(*p, *q, eps, *n, *restarts, &mut ctx.rng())?;
            let passed = !r.violation;
            Ok(ctx.report("hyper search").results(&r).check(passed))
        }
        HyperCommand::LowDegree { input, q } => {
            let f = ctx.load(input)?;
            let r = low_degree_norm_check(&f, *q)?;
            let passed = r.holds(tol);
            Ok(ctx.report("hyper low-degree").results(&r).check(passed))
        }
        HyperCommand::Rank { input } => {
            let f = ctx.load(input)?;
            let r = rank_bound_check(&f)?;
            let passed = r.holds(tol);
            Ok(ctx.report("hyper rank").results(&r).check(passed))
        }
        HyperCommand::Projector { input, q } => {
            let proj = ctx.load(input)?;
            let r = projector_level1_check(&proj, *q, tol.max(1e-12))?;
            let passed = r.margin >= -tol;
            Ok(ctx.report("hyper projector").results(&r).check(passed))
        }
    }
}

fn influence_cmd(ctx: &mut Ctx, a: &InfluenceArgs) -> Result<Report, CliError> {
    let tol = ctx.cli.tol;
    let modes = [a.qubit.is_some(), a.set.is_some(), a.total, a.poincare, a.talagrand, a.anticommuting_kkl, a.bad_influence.is_some()];
    if modes.iter().filter(|&&m| m).count() > 1 {
        return Err(CliError::Usage("choose one influence mode".into()));
    }
    if a.haar.is_some() && a.qubit.is_none() {
        return Err(CliError::Usage("--haar needs --qubit".into()));
    }
    let f = ctx.load(&a.input)?;
    let n = f.n();
    let spec = fourier_transform(&f);
    if let Some(q) = a.qubit {
        let j = qubit(q, n)?;
        let mut results = json!({ "qubit": q, "influence": influence(&spec, j)? });
        if let Some(samples) = a.haar {
            let (mean, se) = haar_influence(&f, j, samples, &mut ctx.rng())?;
            results["haar"] = json!({ "samples": samples, "mean": mean, "standard_error": se });
        }
        return Ok(ctx.report("influence").results(&results));
    }
    if let Some(set) = &a.set {
        let js = qubits(set, n)?;
        return Ok(ctx.report("influence").results(&json!({ "set": set, "influence": influence_set(&spec, &js)? })));
    }
    if a.poincare {
        let r = poincare_check(&f, tol)?;
        let passed = r.holds(tol);
        return Ok(ctx.report("influence poincare").results(&r).check(passed));
    }
    if a.talagrand {
        let r = talagrand_check(&f, tol)?;
        let passed = r.margin >= -tol;
        return Ok(ctx.report("influence talagrand").results(&r).check(passed));
    }
    if a.anticommuting_kkl {
        let r = anticommuting_kkl_check(&f, tol.max(1e-12))?;
        let passed = r.holds(tol);
        return Ok(ctx.report("influence anticommuting-kkl").results(&r).check(passed));
    }
    if let Some(set) = &a.bad_influence {
        let js = qubits(set, n)?;
        let r = bad_influence_detect(&f, &js, tol.max(1e-12))?;
        return Ok(ctx.report("influence bad-influence").results(&r));
    }
    let results = json!({ "influences": influences(&spec), "total": total_influence(&spec) });
    Ok(ctx.report("influence").results(&results))
}

fn fkn(ctx: &mut Ctx, a: &FknArgs) -> Result<Report, CliError> {
    let tol = ctx.cli.tol.max(1e-12);
    if [a.two_norm, a.exact, a.infty].iter().filter(|&&m| m).count() > 1 {
        return Err(CliError::Usage("choose one of --two-norm, --exact, --infty".into()));
    }
    let f = ctx.load(&a.input)?;
    if a.infty {
        let (Some(g), Some(eps)) = (&a.g, a.epsilon) else {
            return Err(CliError::Usage("--infty needs --g and --epsilon".into()));
        };
        let g = ctx.load(g)?;
        let r = fkn_infty_check(&f, &g, eps, tol)?;
        let passed = r.holds;
        return Ok(ctx.report("fkn infty").results(&r).check(passed));
    }
    if a.exact {
        let r = exact_fkn_check(&f, tol)?;
        return Ok(ctx.report("fkn exact").results(&r));
    }
    let r = two_norm_fkn_report(&f, tol)?;
    Ok(ctx.report("fkn two-norm").results(&r))
}

fn chain(ctx: &Ctx, n: usize) -> Result<ChainHamiltonian<f64>, CliError> {
    if n < 2 {
        return Err(CliError::Usage("a chain needs at least 2 qubits".into()));
    }
    Ok(ChainHamiltonian::random(n, &mut ctx.rng())?)
}

fn dynamics(ctx: &mut Ctx, what: &DynamicsCommand) -> Result<Report, CliError> {
    match what {
        DynamicsCommand::Profile { n, t, qubit: q, pauli: s, radii } => {
            let h = chain(ctx, *n)?;
            let j = qubit(*q, *n)?;
            let s = pauli(s)?;
            let radii = radii.clone().unwrap_or_else(|| (0..=j.max(n - 1 - j)).collect());
            let profile = lieb_robinson_profile(&h, j, s, *t, &radii)?;
            let mut body = String::from("radius\tlo\thi\tsize\tbonds\tdiscrepancy\n");
            for p in &profile.points {
                body.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\t{:e}\n",
                    p.radius, p.sites.0 + 1, p.sites.1 + 1, p.size, p.bonds, p.discrepancy
                ));
            }
            body.push_str(&format!("# monotone: {}\n", profile.monotone()));
            for (i, inc) in &profile.violations {
                body.push_str(&format!("# increase at row {}: {inc:e}\n", i + 1));
            }
            if let Some(fit) = &profile.fit {
                body.push_str(&format!("# fit: ln discrepancy = {:.4} + {:.4} |Λ|\n", fit.intercept, fit.slope));
            }
            let results = json!({ "n": n, "pauli": s.as_char().to_string(), "monotone": profile.monotone(), "profile": profile });
            Ok(ctx.report("dynamics profile").results(&results).body(body))
        }
        DynamicsCommand::Learn { n, t, qubit: q, pauli: s, gamma, epsilon, delta, runs } => {
            if *n > LEARNING_CEILING {
                return Err(CliError::Usage(format!("learning supports at most {LEARNING_CEILING} qubits")));
            }
            if *runs == 0 {
                return Err(CliError::Usage("--runs must be at least 1".into()));
            }
            let h = chain(ctx, *n)?;
            let j = qubit(*q, *n)?;
            let s = pauli(s)?;
            let exact = evolve_observable(&h, j, s, *t)?;
            let mut outcomes = Vec::with_capacity(*runs);
            for run in 0..*runs {
                let run_seed = ctx.seed.wrapping_add(run as u64 + 1);
                outcomes.push(learn_evolved(&exact, *gamma, *epsilon, *delta, run_seed, Mode::Sampled)?);
            }
            let successes = outcomes.iter().filter(|o| o.success).count();
            let summary: Vec<_> = outcomes
                .iter()
                .map(|o| json!({
                    "error": o.error, "listed_error": o.listed_error, "unlisted_weight": o.unlisted_weight,
                    "listed": o.terms.len(), "queries": o.queries, "success": o.success,
                }))
                .collect();
            let results = json!({
                "n": n, "t": t, "qubit": q, "pauli": s.as_char().to_string(),
                "successes": successes, "runs": runs,
                "first": outcomes[0],
                "outcomes": summary,
            });
            let passed = successes == *runs;
            Ok(ctx.report("dynamics learn").results(&results).check(passed))
        }
    }
}
