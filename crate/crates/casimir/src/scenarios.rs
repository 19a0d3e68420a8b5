//! Scenario execution: turns a validated configuration into a result
//! table, enforcing the physical row invariants as it goes.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{Scenario, ScenarioConfig};
use crate::dce1d;
use crate::dcend;
use crate::error::{CasimirError, Result};
use crate::gaussian::{self, C64};
use crate::oracle;
use crate::output::{Cell, Table};

const ROW_TOL: f64 = 1e-9;

/// Runs the configured scenario and returns its table.
pub fn run(config: &ScenarioConfig) -> Result<Table> {
    config.validate()?;
    match config.scenario {
        Scenario::Dce1d => run_dce1d(config),
        Scenario::DceNd => run_dcend(config),
        Scenario::Oracle1d => run_oracle1d(config),
        Scenario::Mathieu => run_mathieu(config),
        Scenario::Lyapunov => run_lyapunov(config),
        Scenario::Sumrules => run_sumrules(config),
        Scenario::Compare => run_compare(config),
    }
}

fn run_dce1d(config: &ScenarioConfig) -> Result<Table> {
    if config.grid.start < 0.0 {
        return Err(CasimirError::InvalidArgument(
            "τ grid must be nonnegative".into(),
        ));
    }
    let rows: Result<Vec<Vec<Cell>>> = config
        .grid
        .points()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|tau| {
            let renyi = dce1d::renyi_1d(tau)?;
            let entropy = dce1d::entropy_1d(tau)?;
            if renyi < -ROW_TOL || entropy < -ROW_TOL {
                return Err(CasimirError::Unphysical(format!(
                    "negative entropy at τ = {tau}: R = {renyi}, S = {entropy}"
                )));
            }
            Ok(vec![
                Cell::Num(tau),
                Cell::Num(renyi),
                Cell::Num(dce1d::renyi_asymp1(tau)),
                Cell::Num(dce1d::renyi_asymp2(tau)),
                Cell::Num(entropy),
                Cell::Num(dce1d::entropy_asymp(tau)),
            ])
        })
        .collect();
    let mut table = Table::new(vec![
        "tau",
        "renyi_exact",
        "renyi_asymp1",
        "renyi_asymp2",
        "entropy_exact",
        "entropy_asymp",
    ]);
    for row in rows? {
        table.push_row(row)?;
    }
    Ok(table)
}

fn resonance_of(config: &ScenarioConfig) -> Result<(dcend::CavityGeometry, dcend::ResonanceParams)> {
    let geom = dcend::CavityGeometry::new(config.lengths.clone(), config.epsilon)?;
    let mode = vec![1usize; geom.dims()];
    let params = dcend::resonance_gamma(&geom, &mode)?;
    Ok((geom, params))
}

fn run_dcend(config: &ScenarioConfig) -> Result<Table> {
    if config.lengths.len() < 2 {
        return Err(CasimirError::InvalidArgument(
            "dce-nd needs at least two cavity lengths".into(),
        ));
    }
    if config.grid.start < 0.0 {
        return Err(CasimirError::InvalidArgument(
            "time grid must be nonnegative".into(),
        ));
    }
    let (_, params) = resonance_of(config)?;
    let rows: Result<Vec<Vec<Cell>>> = config
        .grid
        .points()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|t| {
            let ent = dcend::mixed_subsystem_entropies(&params, t, 1, 2)?;
            // the unrestricted state must stay pure along the whole curve
            let g_full = dcend::resonant_covariance(&params, t)?;
            if !g_full.is_pure(ROW_TOL) {
                return Err(CasimirError::Unphysical(format!(
                    "full-state covariance lost purity at t = {t}"
                )));
            }
            if ent.renyi < -ROW_TOL || ent.entropy < ent.renyi - ROW_TOL {
                return Err(CasimirError::Unphysical(format!(
                    "entropy ordering violated at t = {t}"
                )));
            }
            let s = params.rate() * t;
            let asymptote = s + 1.0 - 2.0 * 2f64.ln();
            Ok(vec![
                Cell::Num(t),
                Cell::Num(ent.renyi),
                Cell::Num(ent.entropy),
                Cell::Num(asymptote),
            ])
        })
        .collect();
    let mut table = Table::new(vec!["t", "R_A", "S_A", "asymptote"]);
    for row in rows? {
        table.push_row(row)?;
    }
    Ok(table)
}

/// Whole drive periods hit by a τ grid: τ = εω₁t/2, one period per L₁/c.
fn tau_grid_periods(config: &ScenarioConfig) -> Vec<usize> {
    let l1 = config.lengths[0];
    let omega1 = PI / l1;
    let period = l1; // 2π/ω_d with ω_d = 2ω₁
    let mut periods: Vec<usize> = config
        .grid
        .points()
        .map(|tau| {
            if config.epsilon == 0.0 {
                1
            } else {
                (2.0 * tau / (config.epsilon * omega1) / period).round() as usize
            }
        })
        .filter(|&p| p > 0)
        .collect();
    periods.sort_unstable();
    periods.dedup();
    periods
}

struct Oracle1dCurve {
    /// (τ, |α₁₁|, |β₁₁|, ⟨N₁⟩, R, S) per sampled period
    rows: Vec<(f64, f64, f64, f64, f64, f64)>,
}

fn oracle1d_curve(config: &ScenarioConfig) -> Result<Oracle1dCurve> {
    let periods = tau_grid_periods(config);
    let mut rows = Vec::new();
    if periods.is_empty() {
        return Ok(Oracle1dCurve { rows });
    }
    let sys = oracle::TruncatedSystem::new(config.oracle_n, config.lengths[0])?;
    let traj = oracle::MirrorTrajectory::resonant_1d(
        config.lengths[0],
        config.epsilon,
        periods.last().unwrap() + 1,
    )?;
    let samples = oracle::stroboscopic_bogoliubov(&sys, &traj, &periods, 1e-10)?;
    let omega1 = PI / config.lengths[0];
    for (t, alpha, beta) in &samples {
        let tau = 0.5 * config.epsilon * omega1 * t;
        let n1 = oracle::particle_numbers(beta)[0];
        // reduced covariance of the resonant mode from the extracted
        // coefficients: G¹¹ = 2Σ_n α_{n1}β_{n1}, G¹² = 1 + 2Σ_n |β_{n1}|²
        let mut g11 = C64::new(0.0, 0.0);
        for k in 0..alpha.nrows() {
            g11 += alpha[(k, 0)] * beta[(k, 0)] * 2.0;
        }
        let g12 = 1.0 + 2.0 * n1;
        let minus_det = g12 * g12 - g11.norm_sqr();
        if minus_det < 1.0 - 1e-6 || n1 < -ROW_TOL {
            return Err(CasimirError::Unphysical(format!(
                "oracle covariance unphysical at τ = {tau}: −det = {minus_det}"
            )));
        }
        let renyi = 0.5 * minus_det.max(1.0).ln();
        let entropy = gaussian::entropy_from_renyi_single_mode(renyi);
        rows.push((tau, alpha[(0, 0)].norm(), beta[(0, 0)].norm(), n1, renyi, entropy));
    }
    Ok(Oracle1dCurve { rows })
}

fn run_oracle1d(config: &ScenarioConfig) -> Result<Table> {
    let curve = oracle1d_curve(config)?;
    let n_max = *config.n_max.last().unwrap();
    let mut table = Table::new(vec![
        "tau",
        "alpha11_oracle",
        "alpha11_analytic",
        "beta11_abs_oracle",
        "beta11_abs_analytic",
        "n1_oracle",
        "n1_analytic",
    ]);
    for (tau, a11, b11, n1, _, _) in &curve.rows {
        let (a_ref, b_ref) = dce1d::alpha_beta_11(*tau)?;
        let ladder = dce1d::build_ladder(*tau, n_max)?;
        table.push_row(vec![
            Cell::Num(*tau),
            Cell::Num(*a11),
            Cell::Num(a_ref),
            Cell::Num(*b11),
            Cell::Num(b_ref.abs()),
            Cell::Num(*n1),
            Cell::Num(dce1d::particle_number_1d(&ladder)),
        ])?;
    }
    Ok(table)
}

fn run_mathieu(config: &ScenarioConfig) -> Result<Table> {
    if config.lengths.len() < 2 {
        return Err(CasimirError::InvalidArgument(
            "the mathieu scenario needs at least two cavity lengths".into(),
        ));
    }
    let (geom, params) = resonance_of(config)?;
    let omega0 = params.omega_r;
    let mu = dcend::mathieu_floquet_mu(omega0, dcend::drive_amplitude(&geom))?;
    let strobe = PI / omega0;
    let n_strobe = (config.grid.stop / strobe).round().max(1.0) as usize;
    let run = oracle::integrate_mathieu(omega0, params.gamma, n_strobe, 1e-10)?;
    let mut table = Table::new(vec![
        "t",
        "alpha_abs",
        "beta_abs",
        "cosh_envelope",
        "sinh_envelope",
        "mu",
    ]);
    let mut indices: Vec<usize> = config
        .grid
        .points()
        .map(|t| ((t / strobe).round() as usize).min(n_strobe))
        .collect();
    indices.sort_unstable();
    indices.dedup();
    for &p in &indices {
        let (a, b) = (run.alpha[p], run.beta[p]);
        let wronskian = a.norm_sqr() - b.norm_sqr();
        if (wronskian - 1.0).abs() > 1e-6 * a.norm_sqr() {
            return Err(CasimirError::Unphysical(format!(
                "Wronskian drifted to {wronskian} at strobe {p}"
            )));
        }
        let s = params.rate() * run.times[p];
        table.push_row(vec![
            Cell::Num(run.times[p]),
            Cell::Num(a.norm()),
            Cell::Num(b.norm()),
            Cell::Num(s.cosh()),
            Cell::Num(s.sinh()),
            Cell::Num(mu),
        ])?;
    }
    Ok(table)
}

fn run_lyapunov(config: &ScenarioConfig) -> Result<Table> {
    if config.lengths.len() < 2 {
        return Err(CasimirError::InvalidArgument(
            "the lyapunov scenario needs at least two cavity lengths".into(),
        ));
    }
    let (_, params) = resonance_of(config)?;
    let expected = params.rate();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut table = Table::new(vec![
        "draw",
        "lambda_fit",
        "lambda_expected",
        "rel_dev",
        "generic",
    ]);
    for draw in 0..config.draws {
        let sub = dcend::random_subsystem(2, 0, 1, &mut rng)?;
        let lambda = dcend::subsystem_exponent(&sub, &params, config.grid.stop, config.grid.count)?;
        let generic = sub.satisfies_i && sub.satisfies_ii;
        let rel = (lambda - expected).abs() / expected;
        table.push_row(vec![
            Cell::Int(draw as i64),
            Cell::Num(lambda),
            Cell::Num(expected),
            Cell::Num(rel),
            Cell::Int(generic as i64),
        ])?;
    }
    Ok(table)
}

fn run_sumrules(config: &ScenarioConfig) -> Result<Table> {
    let mut cutoffs = config.n_max.clone();
    cutoffs.sort_unstable();
    cutoffs.dedup();
    let mut table = Table::new(vec![
        "n_max",
        "alpha_alpha_residual",
        "alpha_beta_residual",
    ]);
    for &n_max in &cutoffs {
        let ladder = dce1d::build_ladder(config.tau, n_max)?;
        let res = dce1d::sum_rule_residuals(&ladder, None);
        if !(res.alpha_alpha.is_finite() && res.alpha_beta.is_finite()) {
            return Err(CasimirError::Numerical(format!(
                "sum-rule residuals diverged at n_max = {n_max}"
            )));
        }
        table.push_row(vec![
            Cell::Int(n_max as i64),
            Cell::Num(res.alpha_alpha),
            Cell::Num(res.alpha_beta),
        ])?;
    }
    Ok(table)
}

fn max_median(mut devs: Vec<f64>) -> (f64, f64) {
    if devs.is_empty() {
        return (0.0, 0.0);
    }
    devs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let max = *devs.last().unwrap();
    let median = devs[devs.len() / 2];
    (max, median)
}

fn run_compare(config: &ScenarioConfig) -> Result<Table> {
    match config.target {
        Scenario::Dce1d => compare_dce1d(config),
        Scenario::Mathieu => compare_mathieu(config),
        _ => Err(CasimirError::InvalidArgument(format!(
            "compare supports targets dce1d and mathieu, got {}",
            config.target
        ))),
    }
}

fn compare_dce1d(config: &ScenarioConfig) -> Result<Table> {
    let curve = oracle1d_curve(config)?;
    let n_max = *config.n_max.last().unwrap();
    let mut dev_a = Vec::new();
    let mut dev_b = Vec::new();
    let mut dev_n = Vec::new();
    let mut dev_r = Vec::new();
    let mut dev_s = Vec::new();
    for (tau, a11, b11, n1, renyi, entropy) in &curve.rows {
        let (a_ref, b_ref) = dce1d::alpha_beta_11(*tau)?;
        let ladder = dce1d::build_ladder(*tau, n_max)?;
        dev_a.push((a11 - a_ref.abs()).abs());
        dev_b.push((b11 - b_ref.abs()).abs());
        dev_n.push((n1 - dce1d::particle_number_1d(&ladder)).abs());
        dev_r.push((renyi - dce1d::renyi_1d(*tau)?).abs());
        dev_s.push((entropy - dce1d::entropy_1d(*tau)?).abs());
    }
    let mut table = Table::new(vec!["quantity", "max", "median"]);
    for (name, devs) in [
        ("alpha11_abs_dev", dev_a),
        ("beta11_abs_dev", dev_b),
        ("n1_abs_dev", dev_n),
        ("renyi_abs_dev", dev_r),
        ("entropy_abs_dev", dev_s),
    ] {
        let (max, median) = max_median(devs);
        table.push_row(vec![Cell::from(name), Cell::Num(max), Cell::Num(median)])?;
    }
    // cutoff sensitivity: symplectic-relation residual of the extracted
    // coefficients over a short drive, at each mode cutoff
    for cutoff in [10usize, 15, 20, 30] {
        let sys = oracle::TruncatedSystem::new(cutoff, config.lengths[0])?;
        let traj = oracle::MirrorTrajectory::resonant_1d(config.lengths[0], config.epsilon, 5)?;
        let samples = oracle::stroboscopic_bogoliubov(&sys, &traj, &[4], 1e-10)?;
        let (_, alpha, beta) = &samples[0];
        let res = oracle::symplecticity_residual(alpha, beta, 5);
        table.push_row(vec![
            Cell::Text(format!("symplecticity_N{cutoff}")),
            Cell::Num(res),
            Cell::Num(res),
        ])?;
    }
    Ok(table)
}

fn compare_mathieu(config: &ScenarioConfig) -> Result<Table> {
    if config.lengths.len() < 2 {
        return Err(CasimirError::InvalidArgument(
            "the mathieu comparison needs at least two cavity lengths".into(),
        ));
    }
    let (geom, params) = resonance_of(config)?;
    let omega0 = params.omega_r;
    let rate = params.rate();
    let mu = dcend::mathieu_floquet_mu(omega0, dcend::drive_amplitude(&geom))?;
    let flow = dcend::resonant_flow(&params, 1.0)?;
    let (lambda1, _) = dcend::lyapunov_spectrum(&flow.generator)?;

    let strobe = PI / omega0;
    let n_strobe = (config.grid.stop / strobe).round().max(8.0) as usize;
    let run = oracle::integrate_mathieu(omega0, params.gamma, n_strobe, 1e-10)?;
    let env_dev: Vec<f64> = run
        .times
        .iter()
        .zip(&run.beta)
        .map(|(&t, b)| (b.norm() - (rate * t).sinh()).abs())
        .collect();
    let (env_max, env_median) = max_median(env_dev);

    let (th1, th2) = dcend::mixed_covector_pair(2, 0, 1);
    let sub = dcend::subsystem_from_covectors(vec![th1, th2], 0)?;
    let lambda_a = dcend::subsystem_exponent(&sub, &params, 8.0 / rate, 41)?;

    let vals = [mu, lambda1, lambda_a];
    let spread = vals
        .iter()
        .flat_map(|a| vals.iter().map(move |b| (a - b).abs() / rate))
        .fold(0.0f64, f64::max);

    let mut table = Table::new(vec!["quantity", "max", "median"]);
    table.push_row(vec![Cell::from("envelope_abs_dev"), Cell::Num(env_max), Cell::Num(env_median)])?;
    for (name, v) in [
        ("floquet_mu", mu),
        ("generator_lambda1", lambda1),
        ("subsystem_exponent", lambda_a),
        ("rate_omega_gamma", rate),
        ("exponent_rel_spread", spread),
    ] {
        table.push_row(vec![Cell::from(name), Cell::Num(v), Cell::Num(v)])?;
    }
    Ok(table)
}
