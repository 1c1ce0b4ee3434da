// SPDX-License-Identifier: Apache-2.0

//! End-to-end acceptance checks. Runs every criterion, prints one line per
//! criterion, and exits non-zero if any failed.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use redfield_core::pair::QubitMap;
use redfield_core::scanner::feasible_midpoint_grid;
use redfield_core::single::{default_horizon, default_steps, det_derivative_at_zero, time_grid};
use redfield_core::trajectory::TrajectoryRecord;
use redfield_core::*;

struct Check {
    label: String,
    ok: bool,
}

fn check(label: impl Into<String>, ok: bool) -> Check {
    Check {
        label: label.into(),
        ok,
    }
}

fn warm_bath() -> Bath {
    Bath::new(1.0, 0.007, 0.01, 0.0065).unwrap()
}

fn zero_t() -> Bath {
    Bath::new(1.0, 0.007, 0.01, 0.007).unwrap()
}

fn run(id: u32, title: &str, limit: Duration, body: impl FnOnce() -> Vec<Check>) -> bool {
    let start = Instant::now();
    let mut checks = body();
    let elapsed = start.elapsed();
    checks.push(check(format!("runtime {elapsed:.2?} < {limit:?}"), elapsed < limit));
    let ok = checks.iter().all(|c| c.ok);
    let detail: Vec<String> = checks
        .iter()
        .map(|c| format!("{}{}", if c.ok { "" } else { "FAILED " }, c.label))
        .collect();
    println!(
        "[{}] criterion {id}: {title} | {}",
        if ok { "PASS" } else { "FAIL" },
        detail.join("; ")
    );
    ok
}

fn witness_negativity() -> Vec<Check> {
    let p = warm_bath();
    let w = witness_state(&p);
    let closed = witness_det_derivative(&p);
    let jacobi = det_derivative_at_zero(&w, &p);
    let h = 1e-5;
    let fd = (propagate_closed(&w, h, &p).det() - propagate_closed(&w, -h, &p).det()) / (2.0 * h);
    let min_eig = propagate_closed(&w, 0.05, &p).min_eigenvalue();
    vec![
        check(
            format!(
                "closed {closed:.6e} vs Jacobi {jacobi:.6e}: |diff| {:.2e} < 1e-12",
                (closed - jacobi).abs()
            ),
            (closed - jacobi).abs() < 1e-12,
        ),
        check(
            format!(
                "closed vs finite difference {fd:.6e}: |diff| {:.2e} < 1e-6",
                (closed - fd).abs()
            ),
            (closed - fd).abs() < 1e-6,
        ),
        check(
            format!("min eigenvalue at t=0.05 is {min_eig:.3e} < -1e-8"),
            min_eig < -1e-8,
        ),
    ]
}

fn gibbs_convergence() -> Vec<Check> {
    let mut r = rng(2);
    let mut worst = 0.0f64;
    let mut worst_gibbs = 0.0f64;
    for _ in 0..10 {
        let p = random_bath(&mut r);
        let eq = equilibrium_state(&p);
        worst_gibbs = worst_gibbs.max(gibbs_state(&p).max_abs_diff(&eq));
        let t = 10.0 / p.a();
        for _ in 0..20 {
            let rho = random_qubit(&mut r);
            let diff = propagate_closed(&rho, t, &p).to_matrix().max_abs_diff(&eq.to_matrix());
            worst = worst.max(diff);
        }
    }
    vec![
        check(format!("max |rho(10/a) - rho_eq| = {worst:.3e} < 1e-6"), worst < 1e-6),
        check(
            format!("max |rho_eq - Gibbs| = {worst_gibbs:.3e} < 1e-12"),
            worst_gibbs < 1e-12,
        ),
    ]
}

fn rk4_oracle() -> Vec<Check> {
    let mut r = rng(3);
    let mut worst = 0.0f64;
    let (mut coarse, mut fine) = (0.0, 0.0);
    for _ in 0..10 {
        let p = random_bath(&mut r);
        for _ in 0..100 {
            let rho = random_qubit(&mut r);
            let exact = propagate_closed(&rho, 10.0, &p);
            worst = worst.max(propagate_rk4(&rho, 10.0, 1e-3, &p).unwrap().max_abs_diff(&exact));
            coarse += propagate_rk4(&rho, 10.0, 0.1, &p).unwrap().max_abs_diff(&exact);
            fine += propagate_rk4(&rho, 10.0, 0.05, &p).unwrap().max_abs_diff(&exact);
        }
    }
    let ratio = coarse / fine;
    vec![
        check(
            format!("max |RK4 - closed| at dt=1e-3 is {worst:.3e} < 1e-8"),
            worst < 1e-8,
        ),
        check(
            format!("error ratio dt=0.1 vs 0.05 is {ratio:.2} (16 +- 15%)"),
            (ratio / 16.0 - 1.0).abs() < 0.15,
        ),
    ]
}

fn semigroup() -> Vec<Check> {
    let mut r = rng(4);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let p = random_bath(&mut r);
        let (s, t): (f64, f64) = (
            rand::Rng::gen_range(&mut r, 0.0..5.0),
            rand::Rng::gen_range(&mut r, 0.0..5.0),
        );
        let composed = QubitMap::at(s, &p).compose(&QubitMap::at(t, &p));
        worst = worst.max(composed.matrix.max_abs_diff(&QubitMap::at(s + t, &p).matrix));
        let rho = random_qubit(&mut r);
        let stepped = propagate_closed(&propagate_closed(&rho, t, &p), s, &p);
        worst = worst.max(stepped.max_abs_diff(&propagate_closed(&rho, s + t, &p)));
    }
    vec![check(
        format!("max composition error {worst:.3e} < 1e-10"),
        worst < 1e-10,
    )]
}

fn family_grid(p: &Bath) -> Vec<(f64, f64)> {
    let (mus, nus) = feasible_midpoint_grid(p, 10, 10);
    let NuGrid::FractionOfFeasible(fracs) = nus else {
        unreachable!()
    };
    mus.iter()
        .flat_map(|&mu| {
            let (lo, hi) = redfield_core::pair::family_nu_interval(mu, p).expect("feasible mu");
            fracs.iter().map(move |f| (mu, lo + f * (hi - lo))).collect::<Vec<_>>()
        })
        .collect()
}

fn pair_trajectory_exactness() -> Vec<Check> {
    let p = zero_t();
    let times: Vec<f64> = time_grid(3.0 / p.a(), 199).collect();
    let mut worst = 0.0f64;
    for (mu, nu) in family_grid(&p) {
        let x0 = family_state_zero_t(mu, nu, p.a(), p.b()).unwrap().to_pair_state();
        for &t in &times {
            let generic = XState::from_pair_state(&apply_extended(&x0, t, &p));
            let closed = family_trajectory_zero_t(mu, nu, t, &p).unwrap();
            worst = worst.max(generic.max_abs_diff(&closed));
        }
    }
    vec![check(
        format!(
            "100 family points x {} times: max entry difference {worst:.3e} < 1e-12",
            times.len()
        ),
        worst < 1e-12,
    )]
}

fn positivity_along_trajectory() -> Vec<Check> {
    let p = zero_t();
    let t_max = default_horizon(&p);
    let times: Vec<f64> = time_grid(t_max, default_steps(t_max, &p)).collect();
    let (mut worst_d, mut worst_eig) = (f64::INFINITY, f64::INFINITY);
    let mut bad_points = Vec::new();
    let mut margin_breaches = 0usize;
    for (mu, nu) in family_grid(&p) {
        let mut point_min = f64::INFINITY;
        for &t in &times {
            let x = family_trajectory_zero_t(mu, nu, t, &p).unwrap();
            let (d1, d2) = subdeterminants(&x);
            let eig = x.to_pair_state().spectrum(1e-12).unwrap().min();
            point_min = point_min.min(d1).min(d2).min(eig);
            worst_d = worst_d.min(d1).min(d2);
            worst_eig = worst_eig.min(eig);
            let reduced = positivity_weak_coupling(mu, nu, t, &p);
            let exact = positivity_exact_scaled(mu, nu, t, &p);
            if (reduced.lhs31 - reduced.rhs31) / 2.0 > 10.0 * exact.dropped29 && exact.lhs29 < exact.rhs29 {
                margin_breaches += 1;
            }
            if (reduced.lhs32 - reduced.rhs32) / 2.0 > 10.0 * exact.dropped30 && exact.lhs30 < exact.rhs30 {
                margin_breaches += 1;
            }
        }
        if point_min < -1e-12 {
            bad_points.push((mu, nu, point_min));
        }
    }
    let sample = bad_points
        .iter()
        .take(3)
        .map(|(m, n, v)| format!("({m:.4}, {n:.4}) -> {v:.2e}"))
        .collect::<Vec<_>>()
        .join(", ");
    vec![
        check(format!("min D1, D2 = {worst_d:.3e} >= -1e-12"), worst_d >= -1e-12),
        check(
            format!("min eigenvalue = {worst_eig:.3e} >= -1e-12"),
            worst_eig >= -1e-12,
        ),
        check(
            format!("{} of 100 grid points go negative [{sample}]", bad_points.len()),
            bad_points.is_empty(),
        ),
        check(
            format!("reduced-with-margin implies exact: {margin_breaches} breaches"),
            margin_breaches == 0,
        ),
    ]
}

fn concurrence_consistency() -> Vec<Check> {
    let mut r = rng(7);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let x = random_xstate(&mut r);
        let w = concurrence_wootters(&x.to_pair_state(), 1e-10).unwrap().value;
        worst = worst.max((w - concurrence_xstate(&x, 1e-12).unwrap().value).abs());
    }
    let p = zero_t();
    let times: Vec<f64> = time_grid(3.0 / p.a(), 199).collect();
    let (mut worst_closed, mut compared) = (0.0f64, 0usize);
    for (mu, nu) in family_grid(&p) {
        for &t in &times {
            let x = family_trajectory_zero_t(mu, nu, t, &p).unwrap();
            let Ok(report) = concurrence_xstate(&x, 1e-12) else {
                continue;
            };
            if report.branch != Some(Branch::Rho23) {
                continue;
            }
            let closed = concurrence_zero_t_closed(mu, nu, t, &p).unwrap();
            worst_closed = worst_closed.max((closed - xstate_gap(&x)).abs());
            compared += 1;
        }
    }
    vec![
        check(
            format!("1000 random X-states: max |Wootters - closed form| {worst:.3e} < 1e-9"),
            worst < 1e-9,
        ),
        check(
            format!("closed-form trajectory concurrence on {compared} samples: max diff {worst_closed:.3e} < 1e-12"),
            worst_closed < 1e-12 && compared > 0,
        ),
    ]
}

fn entanglement_increase() -> Vec<Check> {
    let p = zero_t();
    let (mu, nu) = (0.1, 0.13);
    let h = 1e-4;
    let fd = (concurrence_zero_t_closed(mu, nu, h, &p).unwrap() - concurrence_zero_t_closed(mu, nu, -h, &p).unwrap())
        / (2.0 * h);
    let (c0, slope) = small_time_slope(mu, nu, &p).unwrap();
    let period = p.rabi_period();
    let peak = time_grid(period, 400)
        .map(|t| concurrence_zero_t_closed(mu, nu, t, &p).unwrap())
        .fold(f64::NEG_INFINITY, f64::max);
    let c_zero = concurrence_zero_t_closed(mu, nu, 0.0, &p).unwrap();

    let warm = warm_bath();
    let x = family_state(mu, nu, &warm).unwrap().to_pair_state();
    let times: Vec<f64> = time_grid(3.0 * warm.rabi_period(), 600).collect();
    let tol = Tolerances::default();
    let rec = TrajectoryRecord::compute(&x, &warm, &times, &tol.sampling()).unwrap();
    let values: Vec<f64> = rec
        .samples
        .iter()
        .map(|s| s.concurrence.as_ref().unwrap().value)
        .collect();
    let initial_rise = values[1] > values[0];
    let rises = values.windows(2).any(|w| w[1] > w[0] + 1e-12);
    let falls = values.windows(2).any(|w| w[1] < w[0] - 1e-12);
    vec![
        check(
            format!("finite-difference slope {fd:.6e} vs a mu/2 = {slope:.6e} within 1%"),
            (fd / slope - 1.0).abs() < 0.01,
        ),
        check(
            format!("C(0) = {c_zero:.6} equals nu - mu = {c0:.6}"),
            (c_zero - 0.03).abs() < 1e-12,
        ),
        check(format!("max C over first Rabi period {peak:.7} > C(0)"), peak > c_zero),
        check(
            format!(
                "finite temperature ({mu}, {nu}): initial rise {initial_rise}, non-monotonic {}",
                rises && falls
            ),
            initial_rise && rises && falls,
        ),
    ]
}

fn choi_probe() -> Vec<Check> {
    let p = warm_bath();
    let min = time_grid(p.rabi_period(), 200)
        .map(|t| choi_matrix(t, &p, 1e-12).unwrap().min_eigenvalue)
        .fold(f64::INFINITY, f64::min);
    vec![check(
        format!("min Choi eigenvalue over first Rabi period {min:.3e} < -1e-8"),
        min < -1e-8,
    )]
}

fn classify_exhibits() -> Vec<ClassificationResult<f64>> {
    let (warm, cold) = (warm_bath(), zero_t());
    let tol = Tolerances::default();
    let classify = |id: &str, rho: &Pair, p: &Bath| {
        let t_max = default_horizon(p);
        classify_pair_state(id, rho, p, t_max, default_steps(t_max, p), &tol).unwrap()
    };
    let eq = equilibrium_state(&warm);
    vec![
        classify(
            "witness x I/2",
            &Pair::product(&witness_state(&warm), &Qubit::diagonal(0.5)),
            &warm,
        ),
        classify(
            "family (0.1, 0.13)",
            &family_state_zero_t(0.1, 0.13, cold.a(), cold.b())
                .unwrap()
                .to_pair_state(),
            &cold,
        ),
        classify("rho_eq x rho_eq", &Pair::product(&eq, &eq), &warm),
    ]
}

fn scanner_taxonomy() -> Vec<Check> {
    let mut runs = Vec::new();
    for threads in [1, 4] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        for _ in 0..2 {
            runs.push(pool.install(classify_exhibits));
        }
    }
    let classes: Vec<&str> = runs[0].iter().map(|r| r.class.as_str()).collect();
    let expected = [
        Classification::ReducedInadmissible,
        Classification::EntanglementIncreasing,
        Classification::Consistent,
    ];
    vec![
        check(
            format!("classes {classes:?}"),
            runs[0].iter().map(|r| r.class).eq(expected.iter().copied()),
        ),
        check(
            "identical across 2 runs x {1, 4} threads",
            runs.iter().all(|r| *r == runs[0]),
        ),
    ]
}

fn main() -> ExitCode {
    let s = Duration::from_secs;
    let results = [
        run(1, "witness negativity", s(1), witness_negativity),
        run(2, "Gibbs convergence", s(5), gibbs_convergence),
        run(3, "RK4 vs closed form", s(30), rk4_oracle),
        run(4, "semigroup property", s(5), semigroup),
        run(5, "pair-trajectory exactness", s(10), pair_trajectory_exactness),
        run(6, "positivity along trajectory", s(10), positivity_along_trajectory),
        run(7, "concurrence consistency", s(10), concurrence_consistency),
        run(8, "entanglement increase", s(5), entanglement_increase),
        run(9, "non-complete-positivity probe", s(1), choi_probe),
        run(10, "scanner taxonomy", s(5), scanner_taxonomy),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
