//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when the outcome differs from the expected table below.
//!
//! Run alone with `cargo test -p ht-opt --test acceptance`.

use std::process::Command;
use std::time::{Duration, Instant};

use ht_core::analysis::{
    check_lyapunov_decrease, exponential_envelope_check, finite_diff_gradient_check,
    iterations_to_gap, lyapunov_samples, lyapunov_value, max_gamma, DecreaseMode, GammaBound,
};
use ht_core::harness::{
    figure, preset, run_experiment, ExperimentConfig, RegressorSchedule, RunLength, TunerKind,
    PRESET_NAMES,
};
use ht_core::loss::strong_convexity_constant;
use ht_core::tuners::{ht_step, nesterov_gains, nesterov_step, Strictness};
use ht_core::{
    HyperParams, LossModel, NesterovState, Objective, ParamVector, RegressorSample, SmoothnessMode,
    Trace, TunerMode, TunerState,
};
use ht_opt::sampling::{random_case, Family};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Criteria whose failure is documented and expected. Anything else failing,
/// or one of these passing, makes the suite exit non-zero.
const EXPECTED_FAILURES: [u32; 2] = [3, 4];

const SEED: u64 = 20_240_601;

struct Outcome {
    id: u32,
    title: &'static str,
    passed: bool,
    detail: String,
    elapsed: Duration,
    budget: Option<Duration>,
}

fn lse(b: f64) -> RegressorSample {
    RegressorSample::log_sum_exp(0.5, b).unwrap()
}

fn pv(v: &[f64]) -> ParamVector {
    ParamVector::new(v.to_vec()).unwrap()
}

fn logsumexp_config(
    name: &str,
    schedule: RegressorSchedule,
    hyper: HyperParams,
    theta0: f64,
) -> ExperimentConfig {
    let mut c = preset("fig1b").unwrap();
    c.name = name.to_owned();
    c.model = LossModel::log_sum_exp().with_known_optimum(ParamVector::scalar(0.0));
    c.length = RunLength::Iterations(schedule.horizon());
    c.schedule = schedule;
    c.hyper = hyper;
    c.theta0 = ParamVector::scalar(theta0);
    c.vartheta0 = None;
    c
}

fn status(t: &Trace) -> String {
    format!(
        "{}:{}",
        t.name,
        match (t.hard_diverged(), t.stability) {
            (true, _) => "diverged",
            (false, Some(s)) => s.as_str(),
            (false, None) => "unknown",
        }
    )
}

// ---------------------------------------------------------------------------

fn random_schedule(rng: &mut ChaCha8Rng, horizon: usize) -> RegressorSchedule {
    if rng.random_bool(0.5) {
        let before = rng.random_range(1.0..20.0);
        let after = rng.random_range(1.0..20.0);
        let switch = rng.random_range(0..horizon);
        RegressorSchedule::step_change(lse(before), lse(after), switch, horizon).unwrap()
    } else {
        let base: f64 = rng.random_range(1.5..19.5);
        let amplitude = rng.random_range(0.0..(base - 1.0).min(20.0 - base));
        let rate = rng.random_range(0.0..300.0);
        RegressorSchedule::sinusoidal(0.5, base, amplitude, rate, horizon).unwrap()
    }
}

/// The 200 randomized runs shared by criteria 1 and 9.
fn randomized_runs() -> Vec<(ExperimentConfig, Trace)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let gamma = max_gamma(0.1, 0.0, GammaBound::Smooth).unwrap();
    let configs: Vec<ExperimentConfig> = (0..200)
        .map(|i| {
            let schedule = random_schedule(&mut rng, 2000);
            let theta0 = rng.random_range(-10.0..10.0);
            let hyper = HyperParams::new(gamma, 0.1, TunerMode::DiscreteSmooth);
            logsumexp_config(&format!("random-{i}"), schedule, hyper, theta0)
        })
        .collect();
    configs
        .into_par_iter()
        .map(|c| {
            let t = run_experiment(&c).unwrap();
            (c, t)
        })
        .collect()
}

fn criterion_1(runs: &[(ExperimentConfig, Trace)]) -> (bool, String) {
    let mut violations = 0;
    let mut worst = f64::NEG_INFINITY;
    let mut incomplete = 0;
    for (c, t) in runs {
        if t.len() != 2001 || t.hard_diverged() {
            incomplete += 1;
        }
        let star = t.theta_star.clone().unwrap();
        violations += check_lyapunov_decrease(t, &star, c.hyper.gamma, 1e-12, DecreaseMode::Plain)
            .unwrap()
            .len();
        for s in lyapunov_samples(t, &star, c.hyper.gamma).unwrap() {
            worst = worst.max(s.delta_v / s.v.max(1.0));
        }
    }
    (
        violations == 0 && incomplete == 0,
        format!("runs={} violations={violations} incomplete={incomplete} max_scaled_delta_v={worst:.3e}", runs.len()),
    )
}

fn criterion_2() -> (bool, String) {
    let mu = 1e-4;
    let beta = 0.1;
    let gamma = max_gamma(beta, mu, GammaBound::StronglyConvex).unwrap();
    let model =
        LossModel::regularized_plain(LossModel::log_sum_exp(), mu, ParamVector::scalar(5.0))
            .unwrap();
    let mut c = preset("fig3-ht").unwrap();
    c.name = "envelope".into();
    c.model = model;
    c.schedule = RegressorSchedule::constant(lse(1.0), 20_000).unwrap();
    c.length = RunLength::Iterations(20_000);
    c.hyper = HyperParams::new(gamma, beta, TunerMode::DiscreteStronglyConvex).with_mu(mu);
    c.strictness = Strictness::Strict;
    c.stop_below_gap = None;
    let t = run_experiment(&c).unwrap();
    let n = 1.0 + 1.0 + mu;
    let report = exponential_envelope_check(&t, &c.hyper, n, mu, 1e-9).unwrap();
    (
        report.passed() && t.len() == 20_001,
        format!(
            "gamma={gamma:.6e} N={n} records={} violations={} max_ratio={:.12}",
            t.len(),
            report.violations.len(),
            report.max_ratio
        ),
    )
}

fn run_figure(name: &str) -> Vec<Trace> {
    figure(name)
        .unwrap()
        .par_iter()
        .map(|c| run_experiment(c).unwrap())
        .collect()
}

fn criterion_3() -> (bool, String) {
    let a = run_figure("fig1a");
    let a_ok = !a[0].unstable() && a[1..].iter().all(Trace::unstable);
    let b = run_figure("fig1b");
    let b_stable = b.iter().all(|t| !t.unstable());
    let gaps: Vec<f64> = b
        .iter()
        .map(|t| t.final_gap().unwrap_or(f64::NAN))
        .collect();
    let b_gap = gaps[1..].iter().all(|&g| gaps[0] < g);
    let detail = format!(
        "fig1a[{}] classification={} fig1b[{}] all_stable={b_stable} final_gaps=[ht {:.3e}, gd {:.3e}, nesterov {:.3e}] ht_smallest={b_gap}",
        a.iter().map(status).collect::<Vec<_>>().join(","),
        if a_ok { "ok" } else { "mismatch" },
        b.iter().map(status).collect::<Vec<_>>().join(","),
        gaps[0],
        gaps[1],
        gaps[2],
    );
    (a_ok && b_stable && b_gap, detail)
}

fn criterion_4() -> (bool, String) {
    let c = run_figure("fig1c");
    let c_ok = !c[0].unstable() && c[1..].iter().all(Trace::unstable);
    let d = run_figure("fig1d");
    let d_ok = d.iter().all(|t| !t.unstable());
    let detail = format!(
        "fig1c[{}] classification={} fig1d[{}] all_stable={d_ok}",
        c.iter().map(status).collect::<Vec<_>>().join(","),
        if c_ok { "ok" } else { "mismatch" },
        d.iter().map(status).collect::<Vec<_>>().join(","),
    );
    (c_ok && d_ok, detail)
}

fn criterion_5() -> (bool, String) {
    let traces = run_figure("fig3");
    let k: Vec<Option<usize>> = traces
        .iter()
        .map(|t| iterations_to_gap(t, 1e-8).unwrap())
        .collect();
    match (k[0], k[1]) {
        (Some(ht), Some(nes)) => {
            let ratio = ht.max(nes) as f64 / ht.min(nes).max(1) as f64;
            (
                ratio <= 2.0,
                format!("iterations_to_1e-8: ht={ht} nesterov={nes} ratio={ratio:.3}"),
            )
        }
        _ => (
            false,
            format!("iterations_to_1e-8: ht={:?} nesterov={:?}", k[0], k[1]),
        ),
    }
}

// ---------------------------------------------------------------------------
// Criterion 6

fn reduction_setup() -> (LossModel, RegressorSample, HyperParams) {
    let model =
        LossModel::regularized(LossModel::quadratic_regression(), 0.05, pv(&[1.0, -2.0])).unwrap();
    let sample = RegressorSample::linear(pv(&[1.5, 0.5]), 2.0).unwrap();
    let hp = HyperParams::new(0.8, 0.3, TunerMode::DiscreteStronglyConvex);
    (model, sample, hp)
}

/// Distance between HT's `θ_1` and the `ν_1` produced from a given Nesterov
/// start, minimized over the positions HT's iterate could occupy.
fn one_step_mismatch(
    model: &LossModel,
    sample: &RegressorSample,
    hp: &HyperParams,
    ht: &TunerState,
    nes: NesterovState,
) -> f64 {
    let (ht1, rec) = ht_step(ht, model, sample, hp).unwrap();
    let n1 = nesterov_step(&nes, model, sample, hp).unwrap();
    let nu = ht1.theta.sub(&n1.nu).norm();
    let th = rec.theta_bar.sub(&n1.theta).norm();
    nu.max(th)
}

fn matched_start(
    model: &LossModel,
    sample: &RegressorSample,
    hp: &HyperParams,
    s: &TunerState,
) -> NesterovState {
    let g = model.evaluate(&s.theta, sample).unwrap().gradient;
    let theta_bar = s.theta.add_scaled(-hp.gamma * hp.beta, &g);
    let x0 = theta_bar
        .add_scaled(-hp.beta, &s.vartheta)
        .scale(1.0 / (1.0 - hp.beta));
    NesterovState::new(x0, s.theta.clone()).unwrap()
}

fn first_below(values: &[f64], eps: f64) -> Option<usize> {
    values.iter().position(|&v| v <= eps)
}

fn criterion_6() -> (bool, String) {
    let (model, sample, hp) = reduction_setup();
    let star = ht_core::analysis::solve_optimum(&model, &sample, 1e-13).unwrap();
    let f_star = model.evaluate(&star, &sample).unwrap().value;
    let gap = |x: &ParamVector| model.evaluate(x, &sample).unwrap().value - f_star;

    // Brute-force one-step check of the averaged start ν_0 = (1−β)θ_0 + βϑ_0.
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let mut averaged_worst: f64 = 0.0;
    let mut matched_worst: f64 = 0.0;
    for _ in 0..100 {
        let th = pv(&[rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)]);
        let vt = pv(&[rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)]);
        let s = TunerState::new(th.clone(), vt.clone()).unwrap();
        let averaged = NesterovState::new(th.clone(), th.lerp(&vt, hp.beta)).unwrap();
        averaged_worst = averaged_worst.max(one_step_mismatch(&model, &sample, &hp, &s, averaged));
        matched_worst = matched_worst.max(one_step_mismatch(
            &model,
            &sample,
            &hp,
            &s,
            matched_start(&model, &sample, &hp, &s),
        ));
    }
    let averaged_fails = averaged_worst > 1e-6;

    // Verified mapping over 100 iterations: θ_k = ν_k and θ̄_k = x_{k+1}.
    let mut ht = TunerState::new(pv(&[4.0, 3.0]), pv(&[-1.0, 2.0])).unwrap();
    let mut nes = matched_start(&model, &sample, &hp, &ht);
    let mut track: f64 = 0.0;
    for _ in 0..100 {
        track = track.max(ht.theta.sub(&nes.nu).norm());
        let (next, rec) = ht_step(&ht, &model, &sample, &hp).unwrap();
        nes = nesterov_step(&nes, &model, &sample, &hp).unwrap();
        track = track.max(rec.theta_bar.sub(&nes.theta).norm());
        ht = next;
    }
    track = track.max(ht.theta.sub(&nes.nu).norm());
    let mapped = track <= 1e-10 && matched_worst <= 1e-10;

    // Fallback checks: linear gradient identity and matching time to 1e-8
    // when both methods start at rest from the same point.
    let mut superposition: f64 = 0.0;
    let homogeneous = LossModel::regularized(
        LossModel::quadratic_regression(),
        0.05,
        ParamVector::zeros(2),
    )
    .unwrap();
    let s0 = RegressorSample::linear(pv(&[1.5, 0.5]), 0.0).unwrap();
    let g = |x: &ParamVector| homogeneous.evaluate(x, &s0).unwrap().gradient;
    for _ in 0..100 {
        let (a, b) = (rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
        let x = pv(&[rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0)]);
        let y = pv(&[rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0)]);
        let (gx, gy) = (g(&x), g(&y));
        let lhs = gx.scale(a).add_scaled(b, &gy);
        let rhs = g(&x.scale(a).add_scaled(b, &y));
        let scale = (a.abs() * gx.norm() + b.abs() * gy.norm()).max(1.0);
        superposition = superposition.max(lhs.sub(&rhs).norm() / scale);
    }
    let theta0 = pv(&[4.0, 3.0]);
    let mut ht = TunerState::at_rest(theta0.clone());
    let mut nes = NesterovState::at_rest(theta0.clone());
    let mut ht_gaps = vec![gap(&theta0)];
    let mut nes_gaps = vec![gap(&theta0)];
    for _ in 0..5000 {
        ht = ht_step(&ht, &model, &sample, &hp).unwrap().0;
        nes = nesterov_step(&nes, &model, &sample, &hp).unwrap();
        ht_gaps.push(gap(&ht.theta));
        nes_gaps.push(gap(&nes.theta));
    }
    let (k_ht, k_nes) = (first_below(&ht_gaps, 1e-8), first_below(&nes_gaps, 1e-8));
    let fallback =
        superposition <= 1e-12 && matches!((k_ht, k_nes), (Some(a), Some(b)) if a.abs_diff(b) <= 1);

    (
        mapped,
        format!(
            "averaged_start_one_step_error={averaged_worst:.3e} averaged_start_fails={averaged_fails} \
             matched_start_one_step_error={matched_worst:.3e} trajectory_max_error={track:.3e} \
             fallback: superposition={superposition:.3e} k_ht={k_ht:?} k_nesterov={k_nes:?} holds={fallback}"
        ),
    )
}

// ---------------------------------------------------------------------------
// Criterion 7

fn continuous_config(h: f64, t_end: f64) -> ExperimentConfig {
    let mut c = logsumexp_config(
        "continuous",
        RegressorSchedule::constant(lse(1.0), 1).unwrap(),
        HyperParams::new(0.1, 0.3, TunerMode::Continuous),
        5.0,
    );
    c.tuner = TunerKind::HtContinuous;
    c.length = RunLength::Continuous { t_end, h };
    c
}

fn final_theta(h: f64, t_end: f64) -> f64 {
    run_experiment(&continuous_config(h, t_end))
        .unwrap()
        .last()
        .unwrap()
        .theta[0]
}

fn criterion_7() -> (bool, String) {
    let trace = run_experiment(&continuous_config(1e-3, 200.0)).unwrap();
    let star = ParamVector::scalar(0.0);
    let v: Vec<f64> = trace
        .records
        .iter()
        .map(|r| {
            let s = TunerState::new(r.theta.clone(), r.aux.clone().unwrap()).unwrap();
            lyapunov_value(&s, &star, 0.1).unwrap()
        })
        .collect();
    let increases = v.windows(2).filter(|w| w[1] > w[0] + 1e-9).count();
    let max_rise = v
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::NEG_INFINITY, f64::max);
    let theta_end = trace.last().unwrap().theta[0];
    let halved = final_theta(5e-4, 200.0);
    let fine_diff = (theta_end - halved).abs();
    let fine_ok = fine_diff < 1e-12 * theta_end.abs().max(1.0);

    // Halving ratios on a coarse ladder, where truncation error dominates
    // rounding. Fourth order predicts 16; the accepted band is 16/4..16·4.
    let ladder = [0.1, 0.05, 0.025, 0.0125];
    let finals: Vec<f64> = ladder.iter().map(|&h| final_theta(h, 200.0)).collect();
    let diffs: Vec<f64> = finals.windows(2).map(|w| (w[0] - w[1]).abs()).collect();
    let ratios: Vec<f64> = diffs.windows(2).map(|w| w[0] / w[1]).collect();
    let order_ok = ratios.iter().all(|r| (4.0..=64.0).contains(r));
    (
        trace.len() == 200_001 && increases == 0 && fine_ok && order_ok,
        format!(
            "steps={} v_increases={increases} max_step_change={max_rise:.3e} theta(200)={theta_end:.16e} \
             halving_diff_at_1e-3={fine_diff:.3e} ladder_diffs=[{}] ratios=[{}]",
            trace.len() - 1,
            diffs.iter().map(|d| format!("{d:.3e}")).collect::<Vec<_>>().join(", "),
            ratios.iter().map(|r| format!("{r:.2}")).collect::<Vec<_>>().join(", "),
        ),
    )
}

// ---------------------------------------------------------------------------

fn criterion_8() -> (bool, String) {
    let (l_bar, mu) = (4.0, 1.0);
    let model =
        LossModel::regularized_plain(LossModel::quadratic_regression(), mu, ParamVector::zeros(2))
            .unwrap();
    let sample = RegressorSample::linear(pv(&[3f64.sqrt(), 0.0]), 0.0).unwrap();
    let gains = nesterov_gains(l_bar, mu).unwrap();
    let hp = HyperParams::new(1.0, 0.5, TunerMode::DiscreteStronglyConvex)
        .with_alpha_bar(gains.alpha_bar)
        .with_beta_bar(gains.beta_bar);
    let theta0 = pv(&[3.0, -4.0]);
    let scale = (l_bar + mu) / 2.0 * theta0.norm_sq();
    let mut state = NesterovState::at_rest(theta0);
    let mut worst: f64 = 0.0;
    let mut violations = 0;
    for k in 0..=200usize {
        let f = model.evaluate(&state.theta, &sample).unwrap().value;
        let bound = scale * (-(k as f64) / gains.kappa.sqrt()).exp();
        if f > bound * (1.0 + 1e-9) {
            violations += 1;
        }
        if bound > 0.0 {
            worst = worst.max(f / bound);
        }
        state = nesterov_step(&state, &model, &sample, &hp).unwrap();
    }
    (
        violations == 0,
        format!(
            "alpha_bar={} beta_bar={:.6} kappa={} violations={violations} max_ratio={worst:.6}",
            gains.alpha_bar, gains.beta_bar, gains.kappa
        ),
    )
}

fn criterion_9(runs: &[(ExperimentConfig, Trace)]) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    let mut parts = Vec::new();
    let mut ok = true;

    for family in [
        Family::QuadraticRegression,
        Family::Logsumexp,
        Family::Regularized,
    ] {
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let (model, theta, sample) = random_case(family, &mut rng);
            worst = worst.max(finite_diff_gradient_check(&model, &theta, &sample, 1e-6).unwrap());
        }
        ok &= worst < 1e-6;
        parts.push(format!("grad[{}]={worst:.2e}", family.as_str()));
    }

    // Curvature: a central difference of the gradient never exceeds H.
    let mut hess_excess = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let theta = rng.random_range(-5.0..5.0);
        let b = rng.random_range(0.5..20.0);
        let s = lse(b);
        let h = 1e-6 / b;
        let m = LossModel::log_sum_exp();
        let gp = m
            .evaluate(&ParamVector::scalar(theta + h), &s)
            .unwrap()
            .gradient[0];
        let gm = m
            .evaluate(&ParamVector::scalar(theta - h), &s)
            .unwrap()
            .gradient[0];
        let second = (gp - gm) / (2.0 * h);
        for mode in [
            SmoothnessMode::ConservativeBound,
            SmoothnessMode::ExactHessian,
        ] {
            let bound = m
                .clone()
                .with_smoothness(mode)
                .evaluate(&ParamVector::scalar(theta), &s)
                .unwrap()
                .hessian_bound;
            hess_excess = hess_excess.max((second - bound) / (b * b));
        }
    }
    ok &= hess_excess <= 1e-6;
    parts.push(format!("hessian_excess={hess_excess:.2e}"));

    // Gradient sandwich on the regularized family.
    let mut sandwich_bad = 0;
    for _ in 0..1000 {
        let mu = rng.random_range(1e-4..1.0);
        let b = rng.random_range(0.5..20.0);
        let m =
            LossModel::regularized(LossModel::log_sum_exp(), mu, ParamVector::scalar(5.0)).unwrap();
        let s = lse(b);
        let (x, y) = (rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0));
        let gx = m.evaluate(&ParamVector::scalar(x), &s).unwrap().gradient[0];
        let gy = m.evaluate(&ParamVector::scalar(y), &s).unwrap().gradient[0];
        let (diff, dist) = ((gx - gy).abs(), (x - y).abs());
        let l_bar = b * b / (1.0 + b * b) + mu;
        let lower = strong_convexity_constant(&m) * dist;
        if diff < lower - 1e-10 * lower.max(1.0)
            || diff > l_bar * dist + 1e-10 * (l_bar * dist).max(1.0)
        {
            sandwich_bad += 1;
        }
    }
    ok &= sandwich_bad == 0;
    parts.push(format!("sandwich_violations={sandwich_bad}/1000"));

    // First-order convexity on quadratic and log-sum-exp draws.
    let mut convex_bad = 0;
    for i in 0..1000 {
        let family = if i % 2 == 0 {
            Family::QuadraticRegression
        } else {
            Family::Logsumexp
        };
        let (m, x, s) = random_case(family, &mut rng);
        let y =
            ParamVector::new((0..x.dim()).map(|_| rng.random_range(-5.0..5.0)).collect()).unwrap();
        let ex = m.evaluate(&x, &s).unwrap();
        let fy = m.evaluate(&y, &s).unwrap().value;
        let lower = ex.value + ex.gradient.dot(&y.sub(&x));
        if fy < lower - 1e-10 * fy.abs().max(1.0) {
            convex_bad += 1;
        }
    }
    ok &= convex_bad == 0;
    parts.push(format!("convexity_violations={convex_bad}/1000"));

    // Summability of the normalized gaps on the randomized traces.
    let mut sum_bad = 0;
    let mut worst_ratio: f64 = 0.0;
    for (c, t) in runs {
        let star = t.theta_star.clone().unwrap();
        let samples = lyapunov_samples(t, &star, c.hyper.gamma).unwrap();
        let v0 = samples.first().map_or(0.0, |s| s.v);
        let mut partial = 0.0;
        for s in &samples {
            partial += s.normalized_gap;
            if partial > v0 * (1.0 + 1e-9) {
                sum_bad += 1;
                break;
            }
        }
        if v0 > 0.0 {
            worst_ratio = worst_ratio.max(partial / v0);
        }
    }
    ok &= sum_bad == 0;
    parts.push(format!(
        "summability_violations={sum_bad}/{} max_sum_over_v0={worst_ratio:.4}",
        runs.len()
    ));

    (ok, parts.join(" "))
}

fn criterion_10() -> (bool, String) {
    let dir = std::env::temp_dir().join(format!("ht-opt-acceptance-{}", std::process::id()));
    let mut differing = Vec::new();
    let mut compared = 0;
    for name in PRESET_NAMES {
        let cfg = dir.join(format!("{name}.json"));
        std::fs::create_dir_all(&dir).unwrap();
        std::fs::write(&cfg, format!("{{\"preset\": \"{name}\"}}")).unwrap();
        let mut outputs = Vec::new();
        for run in ["first", "second"] {
            let out = dir.join(run);
            let status = Command::new(env!("CARGO_BIN_EXE_ht-opt"))
                .args(["run", "--config"])
                .arg(&cfg)
                .arg("--out")
                .arg(&out)
                .env_remove("HT_OPT_OUT")
                .output()
                .unwrap();
            assert!(
                status.status.success(),
                "{name}: {}",
                String::from_utf8_lossy(&status.stderr)
            );
            let csv = preset(name).unwrap().name + ".csv";
            outputs.push(std::fs::read(out.join(csv)).unwrap());
        }
        compared += 1;
        if outputs[0] != outputs[1] || outputs[0].is_empty() {
            differing.push(name);
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    (
        differing.is_empty(),
        format!("presets={compared} differing={differing:?}"),
    )
}

// ---------------------------------------------------------------------------

fn timed(
    id: u32,
    title: &'static str,
    budget: Option<Duration>,
    f: impl FnOnce() -> (bool, String),
) -> Outcome {
    let start = Instant::now();
    let (passed, detail) = f();
    let elapsed = start.elapsed();
    Outcome {
        id,
        title,
        passed: passed && budget.is_none_or(|b| elapsed <= b),
        detail,
        elapsed,
        budget,
    }
}

fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

fn main() {
    // Test filters are ignored; `--list` is answered so tooling that
    // enumerates tests does not run the whole suite.
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }

    let mut runs = Vec::new();
    let mut outcomes = vec![timed(
        1,
        "lyapunov non-increase on randomized runs",
        secs(30),
        || {
            runs = randomized_runs();
            criterion_1(&runs)
        },
    )];
    outcomes.push(timed(2, "exponential envelope", secs(5), criterion_2));
    outcomes.push(timed(
        3,
        "step-change regressor classification",
        secs(10),
        criterion_3,
    ));
    outcomes.push(timed(
        4,
        "sinusoidal regressor classification",
        secs(10),
        criterion_4,
    ));
    outcomes.push(timed(
        5,
        "iterations to 1e-8 against nesterov",
        secs(10),
        criterion_5,
    ));
    outcomes.push(timed(
        6,
        "reduction to nesterov on a quadratic",
        None,
        criterion_6,
    ));
    outcomes.push(timed(
        7,
        "continuous-time stability and rk4 order",
        secs(10),
        criterion_7,
    ));
    outcomes.push(timed(8, "nesterov rate bound", secs(1), criterion_8));
    outcomes.push(timed(9, "oracle suites", secs(30), || criterion_9(&runs)));
    outcomes.push(timed(10, "byte-identical csv exports", None, criterion_10));

    let mut unexpected = Vec::new();
    for o in &outcomes {
        let budget = o
            .budget
            .map(|b| format!(" budget={}s", b.as_secs()))
            .unwrap_or_default();
        println!(
            "{} criterion-{} {}: {} elapsed={:.2}s{budget}",
            if o.passed { "PASS" } else { "FAIL" },
            o.id,
            o.title,
            o.detail,
            o.elapsed.as_secs_f64(),
        );
        if o.passed == EXPECTED_FAILURES.contains(&o.id) {
            unexpected.push(o.id);
        }
    }
    let failed: Vec<u32> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.id)
        .collect();
    println!(
        "acceptance: {} passed, {} failed {failed:?}, expected failures {EXPECTED_FAILURES:?}",
        outcomes.len() - failed.len(),
        failed.len()
    );
    if !unexpected.is_empty() {
        println!("acceptance: outcome differs from the expected table for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
