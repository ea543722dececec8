//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use pdmi::bayes::{bayesian_inverse, verify_time_symmetry, SolutionKind};
use pdmi::capacity::temporal_capacity;
use pdmi::entropy::{hermitian_entropy, mutual_information, shannon_entropy};
use pdmi::holevo::{check_sequential_holevo, holevo_chi, theorem3_mi, CqEnsemble, Povm};
use pdmi::linalg::{ComplexMatrix, HermitianOperator};
use pdmi::pdm::{pdm_from_expectations, star_product};
use pdmi::random::{
    random_channel, random_povm_effects, random_probability, random_pure_state, random_state,
    random_unit_trace_hermitian, random_unital_channel, random_unitary, seeded, SeededRng,
};
use pdmi::reproduce::{check_extrema, figure_config, run_example, sweep, uniform_grid, DEFAULT_GRID_POINTS};
use pdmi::theorems::{conjecture_scan, multiset_distance, verify_theorem1, verify_theorem2};
use pdmi::{DensityMatrix, QuantumChannel};
use rand::Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn rng(criterion: u64) -> SeededRng {
    seeded(0x5eed_0000 + criterion)
}

fn c1() -> Outcome {
    let start = Instant::now();
    let rep = run_example("dual-state", 0).unwrap();
    let elapsed = start.elapsed();
    let ok = (rep.mutual_information - 0.2315).abs() <= 1e-3 && elapsed < Duration::from_secs(1);
    outcome(ok, format!("I = {:.6} (target 0.2315 ± 1e-3), {elapsed:.2?}", rep.mutual_information))
}

fn c2() -> Outcome {
    let start = Instant::now();
    let r = star_product(&QuantumChannel::identity(1), &DensityMatrix::maximally_mixed(2)).unwrap();
    let spec_err = multiset_distance(&r.eigenvalues(), &[0.5, 0.5, 0.5, -0.5]);
    let mi = mutual_information(&r, 1).unwrap();
    let elapsed = start.elapsed();
    let ok = spec_err <= 1e-10 && (mi - 1.0).abs() <= 1e-9 && elapsed < Duration::from_secs(1);
    outcome(ok, format!("spectrum error {spec_err:.1e}, I = {mi:.12}, {elapsed:.2?}"))
}

fn c3() -> Outcome {
    let mut rng = rng(3);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let rho = random_state(&mut rng, 2);
        let sigma = random_state(&mut rng, 2);
        let r = star_product(&QuantumChannel::discard_prepare(&sigma), &rho).unwrap();
        worst = worst.max(mutual_information(&r, 1).unwrap().abs());
    }
    outcome(worst <= 1e-9, format!("max |I| = {worst:.1e} over 100 pairs"))
}

fn c4() -> Outcome {
    let rep = run_example("decoherence", 0).unwrap();
    let (hi, lo) = ((1.0 + 2f64.sqrt()) / 4.0, (1.0 - 2f64.sqrt()) / 4.0);
    let spec_err = multiset_distance(&rep.spectrum, &[hi, hi, lo, lo]);
    let ok = spec_err <= 1e-10 && (rep.mutual_information - 0.79824).abs() <= 1e-4;
    outcome(ok, format!("spectrum error {spec_err:.1e}, I = {:.6}", rep.mutual_information))
}

fn c5() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(5);
    let mut worst: f64 = 0.0;
    for (dim, trials) in [(2, 200), (4, 20)] {
        for _ in 0..trials {
            let rho = random_state(&mut rng, dim);
            let rank = rng.random_range(1..=4);
            let ch = random_channel(&mut rng, dim, rank);
            let a = star_product(&ch, &rho).unwrap();
            let b = pdm_from_expectations(&rho, &ch).unwrap();
            worst = worst.max(a.matrix().max_abs_diff(b.matrix()));
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-9 && elapsed < Duration::from_secs(60),
        format!("max entry gap {worst:.1e} over 200 + 20 pairs, {elapsed:.2?}"),
    )
}

fn c6() -> Outcome {
    let mut rng = rng(6);
    let (mut mi_err, mut spec_err): (f64, f64) = (0.0, 0.0);
    let mut failures = 0;
    for (dim, trials) in [(2, 500), (4, 50)] {
        for _ in 0..trials {
            let rho = random_state(&mut rng, dim);
            let u = QuantumChannel::unitary(random_unitary(&mut rng, dim)).unwrap();
            let rep = verify_theorem1(&rho, &u).unwrap();
            mi_err = mi_err.max(rep.mi_error());
            spec_err = spec_err.max(rep.spectrum_error);
            failures += usize::from(!rep.passed());
        }
    }
    outcome(
        failures == 0,
        format!("{failures} failures; max |I − S(ρ)| {mi_err:.1e}, max spectrum gap {spec_err:.1e}"),
    )
}

fn c7() -> Outcome {
    let mut rng = rng(7);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut pauli_err, mut rank2_err): (f64, f64) = (0.0, 0.0);
    let mut failures = 0;
    for k in 0..1000 {
        let ch = if k < 500 {
            let count = rng.random_range(1..=4);
            random_unital_channel(&mut rng, 2, count)
        } else {
            random_channel(&mut rng, 2, 2)
        };
        let rep = verify_theorem2(&ch).unwrap();
        lo = lo.min(rep.mutual_information);
        hi = hi.max(rep.mutual_information);
        if k < 500 {
            pauli_err = pauli_err.max(rep.pauli_spectrum_error.unwrap_or(f64::INFINITY));
        } else {
            rank2_err = rank2_err.max(rep.rank2_spectrum_error.unwrap_or(f64::INFINITY));
        }
        failures += usize::from(!rep.precondition_met || !rep.passed());
    }
    outcome(
        failures == 0 && pauli_err <= 1e-9 && rank2_err <= 1e-9,
        format!(
            "{failures} failures; I ∈ [{lo:.6}, {hi:.6}]; Pauli spectrum gap {pauli_err:.1e}, rank-2 spectrum gap {rank2_err:.1e}"
        ),
    )
}

fn c8() -> Outcome {
    let dep = verify_theorem2(&QuantumChannel::depolarizing(0.0).unwrap()).unwrap();
    let two_zero = verify_theorem2(&QuantumChannel::pauli_channel([0.5, 0.0, 0.5, 0.0]).unwrap()).unwrap();
    let ok = dep.mutual_information.abs() <= 1e-9 && (two_zero.mutual_information - 1.0).abs() <= 1e-9;
    outcome(
        ok,
        format!(
            "depolarizing I = {:.1e}, two-zero Pauli I = {:.12}",
            dep.mutual_information, two_zero.mutual_information
        ),
    )
}

fn random_ensemble(rng: &mut SeededRng, pure: bool) -> CqEnsemble {
    let n = rng.random_range(2..=4);
    let probs = random_probability(rng, n);
    let states = (0..n)
        .map(|_| if pure { random_pure_state(rng, 2) } else { random_state(rng, 2) })
        .collect();
    CqEnsemble::new(probs, states).unwrap()
}

fn c9() -> Outcome {
    let mut rng = rng(9);
    let (mut gap, mut chi_gap): (f64, f64) = (0.0, 0.0);
    for _ in 0..200 {
        let ens = random_ensemble(&mut rng, false);
        let rank = rng.random_range(1..=4);
        let ch = random_channel(&mut rng, 2, rank);
        let (lhs, rhs) = theorem3_mi(&ens, &ch).unwrap();
        gap = gap.max((lhs - rhs).abs());

        let ens = random_ensemble(&mut rng, false);
        let u = QuantumChannel::unitary(random_unitary(&mut rng, 2)).unwrap();
        let (lhs, rhs) = theorem3_mi(&ens, &u).unwrap();
        let chi = holevo_chi(&ens);
        chi_gap = chi_gap.max((lhs - chi).abs()).max((rhs - chi).abs());
    }
    outcome(
        gap <= 1e-8 && chi_gap <= 1e-8,
        format!("max |lhs − rhs| {gap:.1e}; unitary max |I − χ| {chi_gap:.1e}"),
    )
}

fn c10() -> Outcome {
    let mut rng = rng(10);
    let mut violations = 0;
    let mut tightest = f64::INFINITY;
    for _ in 0..1000 {
        let pure = rng.random_bool(0.5);
        let ens = random_ensemble(&mut rng, pure);
        let (jm, kn) = (rng.random_range(1..=3), rng.random_range(1..=3));
        let m = Povm::new(random_povm_effects(&mut rng, 2, jm)).unwrap();
        let n = Povm::new(random_povm_effects(&mut rng, 2, kn)).unwrap();
        let u = QuantumChannel::unitary(random_unitary(&mut rng, 2)).unwrap();
        let rep = check_sequential_holevo(&ens, &m, &n, &u).unwrap();
        tightest = tightest.min(rep.chi.min(rep.temporal_mi) - rep.classical_mi);
        violations += usize::from(!rep.passed());
    }
    outcome(
        violations == 0,
        format!("{violations} violations in 1000 trials; smallest slack {tightest:.3e}"),
    )
}

fn c11() -> Outcome {
    let mut rng = rng(11);
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    for k in 0..100 {
        let rho = random_state(&mut rng, 2);
        let ch = if k % 2 == 0 {
            QuantumChannel::unitary(random_unitary(&mut rng, 2)).unwrap()
        } else {
            QuantumChannel::discard_prepare(&random_state(&mut rng, 2))
        };
        match verify_time_symmetry(&ch, &rho) {
            Ok(rep) => {
                worst = worst.max((rep.mi_forward - rep.mi_backward).abs());
                failures += usize::from(!rep.passed());
            }
            Err(_) => failures += 1,
        }
    }
    // Families: pure output states leave part of 𝒥[ℳ] unconstrained.
    let mut families = 0;
    let mut family_gap: f64 = 0.0;
    for _ in 0..20 {
        let rho = random_state(&mut rng, 2);
        let sigma0 = random_pure_state(&mut rng, 2);
        let sol = bayesian_inverse(&QuantumChannel::discard_prepare(&sigma0), &rho).unwrap();
        if sol.kind != SolutionKind::Family {
            continue;
        }
        families += 1;
        let rep = sol.representative.as_ref().unwrap();
        match sol.other_member() {
            Some(other) => {
                let a = star_product(rep, &sigma0).unwrap();
                let b = star_product(&other, &sigma0).unwrap();
                family_gap = family_gap.max(a.matrix().max_abs_diff(b.matrix()));
            }
            None => failures += 1,
        }
    }
    outcome(
        failures == 0 && worst <= 1e-7 && family_gap <= 1e-7 && families > 0,
        format!(
            "{failures} failures; max |I(A:B) − I(B:A)| {worst:.1e}; {families} families, max R_BA gap {family_gap:.1e}"
        ),
    )
}

fn c12() -> Outcome {
    let grid = uniform_grid(DEFAULT_GRID_POINTS);
    let mut ok = true;
    let mut parts = Vec::new();
    for label in ['a', 'b', 'c', 'd'] {
        let pts = sweep(&figure_config(label).unwrap(), &grid, &grid).unwrap();
        let chk = check_extrema(&pts);
        ok &= chk.max_at_center() && chk.zero_at_eta0();
        parts.push(format!(
            "({label}) max {:.4} at (p={}, η={}) {}, max |I| at η=0 {:.4} {}",
            chk.max.mi,
            chk.max.p,
            chk.max.eta,
            if chk.max_at_center() { "ok" } else { "FAIL" },
            chk.eta0_max_abs,
            if chk.zero_at_eta0() { "ok" } else { "FAIL" },
        ));
    }
    outcome(ok, parts.join("; "))
}

fn c13() -> Outcome {
    let mut rng = rng(13);
    let (mut add_gap, mut conv_gap): (f64, f64) = (0.0, 0.0);
    for _ in 0..200 {
        let (dx, dy) = (rng.random_range(2..=3), rng.random_range(2..=3));
        let x = random_unit_trace_hermitian(&mut rng, dx);
        let y = random_unit_trace_hermitian(&mut rng, dy);
        let xy = HermitianOperator::from_hermitian_part(&x.matrix().kron(y.matrix()));
        add_gap = add_gap.max((hermitian_entropy(&xy) - hermitian_entropy(&x) - hermitian_entropy(&y)).abs());

        let blocks = rng.random_range(2..=4);
        let p = random_probability(&mut rng, blocks);
        let parts: Vec<HermitianOperator> = (0..blocks)
            .map(|_| {
                let d = rng.random_range(1..=3);
                random_unit_trace_hermitian(&mut rng, d)
            })
            .collect();
        let total: usize = parts.iter().map(|h| h.dim()).sum();
        let mut m = ComplexMatrix::zeros(total, total);
        let mut offset = 0;
        for (w, h) in p.weights().iter().zip(&parts) {
            for i in 0..h.dim() {
                for j in 0..h.dim() {
                    m[(offset + i, offset + j)] = h.matrix()[(i, j)] * *w;
                }
            }
            offset += h.dim();
        }
        let lhs = hermitian_entropy(&HermitianOperator::from_hermitian_part(&m));
        let rhs = shannon_entropy(&p)
            + p.weights().iter().zip(&parts).map(|(w, h)| w * hermitian_entropy(h)).sum::<f64>();
        conv_gap = conv_gap.max((lhs - rhs).abs());
    }
    outcome(
        add_gap <= 1e-8 && conv_gap <= 1e-8,
        format!("additivity gap {add_gap:.1e}, orthogonal convexity gap {conv_gap:.1e}"),
    )
}

fn c14() -> Outcome {
    let id = temporal_capacity(&QuantumChannel::identity(1), 200).unwrap();
    let dep = temporal_capacity(&QuantumChannel::depolarizing(0.0).unwrap(), 200).unwrap();
    let ok = (id.value - 1.0).abs() <= 1e-4 && dep.value.abs() <= 1e-9;
    outcome(ok, format!("identity {:.8}, completely depolarizing {:.1e}", id.value, dep.value))
}

fn c15() -> Outcome {
    let scan = conjecture_scan(&mut rng(15), 10_000);
    outcome(
        true,
        format!(
            "not gated; {} trials, I ∈ [{:.6}, {:.6}], {} outside [0, 1]",
            scan.trials,
            scan.min,
            scan.max,
            scan.flagged.len()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 15] = [
        ("dual-state example", c1),
        ("single qubit at two times", c2),
        ("discard and prepare", c3),
        ("decoherence example", c4),
        ("star product vs expectation oracle", c5),
        ("unitary evolution: I = S(ρ) and spectrum", c6),
        ("unital and rank-2 qubit channels", c7),
        ("qubit channel boundary cases", c8),
        ("classical-quantum PDM information", c9),
        ("sequential Holevo bound", c10),
        ("Bayesian inverse time symmetry", c11),
        ("depolarizing chain sweep extrema", c12),
        ("entropy additivity and orthogonal convexity", c13),
        ("capacity sanity", c14),
        ("general qubit channel scan", c15),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let tag = if out.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] {:>2}. {name}: {} ({:.2?})", i + 1, out.detail, start.elapsed());
        failed += usize::from(!out.passed);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
