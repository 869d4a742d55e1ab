//! The barycentric trajectory β(t) = G(X #_t μ) of a geometric mean flow:
//! its closed-form derivative at t = 0, finite-difference probes, Lie-Trotter
//! limits, unitarily invariant norm scans, fixed-point diagnostics, and flow
//! law checks.

use crate::barycenter::{cartan_barycenter, karcher_residual, Init, SolverOptions};
use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::measure::DiscreteMeasure;
use crate::spd::{mat_exp, riem_dist, SpdMatrix};
use crate::wasserstein::d1w;

/// Slack under which the four fixed-point diagnostics count as zero.
pub const FIXED_POINT_SLACK: f64 = 1e-7;

/// One evaluated trajectory point.
#[derive(Clone, Debug)]
pub struct TrajectorySample {
    pub t: f64,
    pub beta: SpdMatrix,
    pub residual_norm: f64,
    pub solver_iterations: usize,
}

/// β(t) = G(X #_t μ). The point at t = 0 is X itself and is returned without
/// a solve; elsewhere the flowed measure is handed to the barycenter solver
/// and a non-converged solve is an error.
pub fn beta(
    x: &SpdMatrix,
    mu: &DiscreteMeasure,
    t: f64,
    opts: &SolverOptions,
) -> Result<TrajectorySample> {
    if x.dim() != mu.dim() {
        return Err(Error::invalid("trajectory dimension mismatch"));
    }
    if t == 0.0 {
        return Ok(TrajectorySample {
            t,
            beta: x.clone(),
            residual_norm: 0.0,
            solver_iterations: 0,
        });
    }
    let flowed = mu.geometric_flow(x, t)?;
    let report = cartan_barycenter(&flowed, opts)?;
    if !report.converged {
        return Err(Error::NotConverged {
            residual: report.residual_norm,
            iterations: report.iterations,
        });
    }
    Ok(TrajectorySample {
        t,
        beta: report.result,
        residual_norm: report.residual_norm,
        solver_iterations: report.iterations,
    })
}

/// β(t) through the congruence-reduced route
/// X^{1/2} G((μ_X)^t) X^{1/2} with μ_X the recentered measure; agrees with
/// [`beta`] and exercises an independent algebraic path.
pub fn beta_congruence_reduce(
    x: &SpdMatrix,
    mu: &DiscreteMeasure,
    t: f64,
    opts: &SolverOptions,
) -> Result<SpdMatrix> {
    if x.dim() != mu.dim() {
        return Err(Error::invalid("trajectory dimension mismatch"));
    }
    let reduced = mu.congruence_pushforward(x)?.power_pushforward(t)?;
    let report = cartan_barycenter(&reduced, opts)?;
    if !report.converged {
        return Err(Error::NotConverged {
            residual: report.residual_norm,
            iterations: report.iterations,
        });
    }
    let s = x.sqrt()?;
    let product = &(s.matrix() * report.result.matrix()) * s.matrix();
    SpdMatrix::new(SymMatrix::new(product))
}

/// Closed-form derivative of the trajectory at t = 0:
/// X^{1/2} (∫ log X^{-1/2} A X^{-1/2} dμ) X^{1/2}.
pub fn beta_prime_zero(x: &SpdMatrix, mu: &DiscreteMeasure) -> Result<SymMatrix> {
    let residual = karcher_residual(x, mu)?;
    let s = x.sqrt()?;
    let product = &(s.matrix() * residual.matrix()) * s.matrix();
    Ok(SymMatrix::new(product))
}

/// Central finite difference (β(t₀+h) − β(t₀−h)) / 2h of the trajectory.
pub fn beta_prime_fd(
    x: &SpdMatrix,
    mu: &DiscreteMeasure,
    t0: f64,
    h: f64,
    opts: &SolverOptions,
) -> Result<SymMatrix> {
    if !(h > 0.0) {
        return Err(Error::invalid("finite-difference step must be positive"));
    }
    let plus = beta(x, mu, t0 + h, opts)?.beta;
    let minus = beta(x, mu, t0 - h, opts)?.beta;
    Ok(SymMatrix::new(
        (plus.matrix() - minus.matrix()).scaled(1.0 / (2.0 * h)),
    ))
}

/// One row of a Lie-Trotter convergence scan.
#[derive(Clone, Debug)]
pub struct LieTrotterRecord {
    pub t: f64,
    /// G(μ^t)^{1/t}
    pub value: SpdMatrix,
    /// Distance of `value` to the log-Euclidean limit exp(∫ log A dμ).
    pub error: f64,
    /// Ky Fan norms of `value` for k = 1..m.
    pub ky_fan: Vec<f64>,
    pub schatten_one: f64,
    pub schatten_two: f64,
    pub solver_iterations: usize,
}

/// Evaluates G(μ^t)^{1/t} on a grid of nonzero times against the
/// log-Euclidean limit. Each solve is warm-started on the limit curve
/// exp(t · log-mean), which keeps iteration counts flat as t → 0.
pub fn lie_trotter_scan(
    mu: &DiscreteMeasure,
    ts: &[f64],
    opts: &SolverOptions,
) -> Result<Vec<LieTrotterRecord>> {
    if ts.iter().any(|t| *t == 0.0) {
        return Err(Error::invalid("lie-trotter scan needs nonzero times"));
    }
    let log_mean = mu.log_mean();
    let limit = mat_exp(&log_mean)?;
    let m = mu.dim();

    let mut records = Vec::with_capacity(ts.len());
    for &t in ts {
        let powered = mu.power_pushforward(t)?;
        let mut warm = opts.clone();
        warm.init = Init::Explicit(mat_exp(&log_mean.scaled(t))?);
        let report = cartan_barycenter(&powered, &warm)?;
        if !report.converged {
            return Err(Error::NotConverged {
                residual: report.residual_norm,
                iterations: report.iterations,
            });
        }
        let value = report.result.pow(1.0 / t)?;
        let error = riem_dist(&value, &limit)?;
        let ky_fan = (1..=m)
            .map(|k| value.ky_fan_norm(k))
            .collect::<Result<Vec<f64>>>()?;
        records.push(LieTrotterRecord {
            t,
            error,
            schatten_one: value.schatten_norm(1.0)?,
            schatten_two: value.schatten_norm(2.0)?,
            ky_fan,
            value,
            solver_iterations: report.iterations,
        });
    }
    Ok(records)
}

/// One row of a norm-monotonicity scan.
#[derive(Clone, Debug)]
pub struct NormScanRow {
    pub t: f64,
    /// Ky Fan norms of G(μ^t)^{1/t}, k = 1..m.
    pub ky_fan_forward: Vec<f64>,
    /// Ky Fan norms of G(μ^{-t})^{-1/t}, k = 1..m.
    pub ky_fan_inverse: Vec<f64>,
    /// Ky Fan norms of the log-Euclidean limit, k = 1..m.
    pub ky_fan_limit: Vec<f64>,
}

/// Ky Fan norm table of G(μ^t)^{1/t} and G(μ^{-t})^{-1/t} over a strictly
/// decreasing positive time grid. Down the grid each forward column is
/// nondecreasing and bounded by the limit column, and forward and inverse
/// columns agree.
pub fn norm_monotonicity_scan(
    mu: &DiscreteMeasure,
    ts: &[f64],
    opts: &SolverOptions,
) -> Result<Vec<NormScanRow>> {
    if ts.is_empty() {
        return Err(Error::invalid("norm scan needs at least one time"));
    }
    if ts.iter().any(|t| !(*t > 0.0)) {
        return Err(Error::invalid("norm scan times must be positive"));
    }
    if ts.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::invalid("norm scan times must strictly decrease"));
    }
    let m = mu.dim();
    let log_mean = mu.log_mean();
    let limit = mat_exp(&log_mean)?;
    let ky_fan_limit = (1..=m)
        .map(|k| limit.ky_fan_norm(k))
        .collect::<Result<Vec<f64>>>()?;

    let solve_powered = |t: f64| -> Result<SpdMatrix> {
        let powered = mu.power_pushforward(t)?;
        let mut warm = opts.clone();
        warm.init = Init::Explicit(mat_exp(&log_mean.scaled(t))?);
        let report = cartan_barycenter(&powered, &warm)?;
        if !report.converged {
            return Err(Error::NotConverged {
                residual: report.residual_norm,
                iterations: report.iterations,
            });
        }
        Ok(report.result)
    };

    let mut rows = Vec::with_capacity(ts.len());
    for &t in ts {
        let forward = solve_powered(t)?.pow(1.0 / t)?;
        let inverse = solve_powered(-t)?.pow(-1.0 / t)?;
        rows.push(NormScanRow {
            t,
            ky_fan_forward: (1..=m)
                .map(|k| forward.ky_fan_norm(k))
                .collect::<Result<Vec<f64>>>()?,
            ky_fan_inverse: (1..=m)
                .map(|k| inverse.ky_fan_norm(k))
                .collect::<Result<Vec<f64>>>()?,
            ky_fan_limit: ky_fan_limit.clone(),
        });
    }
    Ok(rows)
}

/// The four equivalent ways of saying "X is the barycenter of μ", evaluated
/// numerically.
#[derive(Clone, Debug)]
pub struct FixedPointReport {
    /// ‖β'(0)‖_F.
    pub derivative_norm: f64,
    /// d(X, G(μ)).
    pub dist_to_barycenter: f64,
    /// max over the probed times of d(X, G(X #_t μ)).
    pub max_trajectory_drift: f64,
    /// max over the probed times of d(I, G((μ_X)^t)).
    pub max_recentered_drift: f64,
    /// All four simultaneously below [`FIXED_POINT_SLACK`].
    pub all_within_slack: bool,
}

/// Evaluates the four fixed-point diagnostics at X over a grid of times.
pub fn fixed_point_check(
    x: &SpdMatrix,
    mu: &DiscreteMeasure,
    ts: &[f64],
    opts: &SolverOptions,
) -> Result<FixedPointReport> {
    if ts.is_empty() {
        return Err(Error::invalid("fixed-point check needs at least one time"));
    }
    let derivative_norm = beta_prime_zero(x, mu)?.frobenius_norm();

    let report = cartan_barycenter(mu, opts)?;
    if !report.converged {
        return Err(Error::NotConverged {
            residual: report.residual_norm,
            iterations: report.iterations,
        });
    }
    let dist_to_barycenter = riem_dist(x, &report.result)?;

    let recentered = mu.congruence_pushforward(x)?;
    let identity = SpdMatrix::identity(x.dim());
    let mut max_trajectory_drift: f64 = 0.0;
    let mut max_recentered_drift: f64 = 0.0;
    for &t in ts {
        let sample = beta(x, mu, t, opts)?;
        max_trajectory_drift = max_trajectory_drift.max(riem_dist(x, &sample.beta)?);

        let powered = recentered.power_pushforward(t)?;
        let inner = cartan_barycenter(&powered, opts)?;
        if !inner.converged {
            return Err(Error::NotConverged {
                residual: inner.residual_norm,
                iterations: inner.iterations,
            });
        }
        max_recentered_drift = max_recentered_drift.max(riem_dist(&identity, &inner.result)?);
    }

    let all_within_slack = derivative_norm < FIXED_POINT_SLACK
        && dist_to_barycenter < FIXED_POINT_SLACK
        && max_trajectory_drift < FIXED_POINT_SLACK
        && max_recentered_drift < FIXED_POINT_SLACK;
    Ok(FixedPointReport {
        derivative_norm,
        dist_to_barycenter,
        max_trajectory_drift,
        max_recentered_drift,
        all_within_slack,
    })
}

/// Atomwise error of the flow composition law
/// X #_{ts} μ = X #_s (X #_t μ) per probed pair.
#[derive(Clone, Debug)]
pub struct FlowLawReport {
    pub per_pair: Vec<((f64, f64), f64)>,
    pub max_error: f64,
}

/// Checks the multiplicative composition law of the flow on a list of
/// (t, s) pairs.
pub fn flow_law_check(
    x: &SpdMatrix,
    mu: &DiscreteMeasure,
    pairs: &[(f64, f64)],
) -> Result<FlowLawReport> {
    if x.dim() != mu.dim() {
        return Err(Error::invalid("flow law dimension mismatch"));
    }
    let mut per_pair = Vec::with_capacity(pairs.len());
    let mut max_error: f64 = 0.0;
    for &(t, s) in pairs {
        let direct = mu.geometric_flow(x, t * s)?;
        let composed = mu.geometric_flow(x, t)?.geometric_flow(x, s)?;
        let mut worst: f64 = 0.0;
        for (a, b) in direct.atoms().iter().zip(composed.atoms()) {
            worst = worst.max(riem_dist(a, b)?);
        }
        per_pair.push(((t, s), worst));
        max_error = max_error.max(worst);
    }
    Ok(FlowLawReport { per_pair, max_error })
}

/// Empirical Lipschitz data for t ↦ X #_t μ in the 1-Wasserstein metric.
#[derive(Clone, Debug)]
pub struct LipschitzReport {
    /// max over grid pairs of d₁(X #_t μ, X #_s μ) / |t − s|.
    pub max_ratio: f64,
    /// d₁(δ_X, μ) when the window is [−1, 1]; the proven constant there.
    pub unit_constant: Option<f64>,
    pub within_unit_bound: Option<bool>,
}

/// Probes the flow's local Lipschitz modulus over a time grid inside
/// [−t_max, t_max]. For t_max = 1 the ratio is compared against
/// d₁(δ_X, μ) + 1e-8.
pub fn lipschitz_probe(
    x: &SpdMatrix,
    mu: &DiscreteMeasure,
    t_max: f64,
    grid: &[f64],
) -> Result<LipschitzReport> {
    if !(t_max > 0.0) {
        return Err(Error::invalid("probe window must be positive"));
    }
    if grid.len() < 2 {
        return Err(Error::invalid("probe grid needs at least two times"));
    }
    if grid.iter().any(|t| t.abs() > t_max * (1.0 + 1e-12)) {
        return Err(Error::invalid("probe grid leaves the window"));
    }
    let flows: Vec<DiscreteMeasure> = grid
        .iter()
        .map(|&t| mu.geometric_flow(x, t))
        .collect::<Result<Vec<_>>>()?;

    let mut max_ratio: f64 = 0.0;
    for i in 0..grid.len() {
        for j in (i + 1)..grid.len() {
            let gap = (grid[i] - grid[j]).abs();
            if gap < 1e-12 {
                continue;
            }
            let (dist, _) = d1w(&flows[i], &flows[j])?;
            max_ratio = max_ratio.max(dist / gap);
        }
    }

    let (unit_constant, within_unit_bound) = if (t_max - 1.0).abs() < 1e-12 {
        let (c1, _) = d1w(&DiscreteMeasure::dirac(x.clone()), mu)?;
        (Some(c1), Some(max_ratio <= c1 + 1e-8))
    } else {
        (None, None)
    };
    Ok(LipschitzReport {
        max_ratio,
        unit_constant,
        within_unit_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{random_measure, random_spd, random_sym, SplitMix64, WeightMode};

    fn scalar_pair() -> DiscreteMeasure {
        DiscreteMeasure::new(
            vec![SpdMatrix::diag(&[2.0]).unwrap(), SpdMatrix::diag(&[8.0]).unwrap()],
            vec![0.5, 0.5],
        )
        .unwrap()
    }

    #[test]
    fn beta_at_zero_is_the_base_point_verbatim() {
        let mut rng = SplitMix64::new(1);
        let x = random_spd(3, 0.8, &mut rng).unwrap();
        let mu = random_measure(3, 4, 0.8, WeightMode::Uniform, &mut rng).unwrap();
        let sample = beta(&x, &mu, 0.0, &Default::default()).unwrap();
        assert_eq!(sample.beta, x);
        assert_eq!(sample.solver_iterations, 0);
    }

    #[test]
    fn beta_from_identity_is_powered_barycenter() {
        let mut rng = SplitMix64::new(2);
        let mu = random_measure(2, 3, 0.8, WeightMode::Dirichlet, &mut rng).unwrap();
        let t = 0.6;
        let via_beta = beta(&SpdMatrix::identity(2), &mu, t, &Default::default())
            .unwrap()
            .beta;
        let direct = cartan_barycenter(&mu.power_pushforward(t).unwrap(), &Default::default())
            .unwrap()
            .result;
        assert!(riem_dist(&via_beta, &direct).unwrap() < 1e-10);
    }

    #[test]
    fn beta_scalar_closed_form() {
        let mu = scalar_pair();
        let x = SpdMatrix::diag(&[1.0]).unwrap();
        for t in [-1.0, -0.3, 0.4, 1.0, 2.0] {
            let sample = beta(&x, &mu, t, &Default::default()).unwrap();
            let expect = 4.0_f64.powf(t);
            assert!(
                (sample.beta.get(0, 0) - expect).abs() < 1e-10,
                "beta({t}) = {} vs {expect}",
                sample.beta.get(0, 0)
            );
        }
    }

    #[test]
    fn congruence_reduced_route_agrees() {
        let mut rng = SplitMix64::new(3);
        let x = random_spd(2, 0.8, &mut rng).unwrap();
        let mu = random_measure(2, 4, 0.8, WeightMode::Dirichlet, &mut rng).unwrap();
        let direct = beta(&x, &mu, 0.3, &Default::default()).unwrap().beta;
        let reduced = beta_congruence_reduce(&x, &mu, 0.3, &Default::default()).unwrap();
        assert!(riem_dist(&direct, &reduced).unwrap() < 1e-9);

        // both routes hit the plain barycenter at t = 1
        let at_one = beta_congruence_reduce(&x, &mu, 1.0, &Default::default()).unwrap();
        let g = cartan_barycenter(&mu, &Default::default()).unwrap().result;
        assert!(riem_dist(&at_one, &g).unwrap() < 1e-9);

        // identity base point reduces to the same solve
        let i = SpdMatrix::identity(2);
        let a = beta(&i, &mu, 0.7, &Default::default()).unwrap().beta;
        let b = beta_congruence_reduce(&i, &mu, 0.7, &Default::default()).unwrap();
        assert!(riem_dist(&a, &b).unwrap() < 1e-10);
    }

    #[test]
    fn derivative_at_identity_is_the_log_mean() {
        let mut rng = SplitMix64::new(4);
        let mu = random_measure(3, 4, 0.8, WeightMode::Uniform, &mut rng).unwrap();
        let d = beta_prime_zero(&SpdMatrix::identity(3), &mu).unwrap();
        assert!((&d - &mu.log_mean()).frobenius_norm() < 1e-12);
    }

    #[test]
    fn derivative_vanishes_at_the_barycenter() {
        let mut rng = SplitMix64::new(5);
        let mu = random_measure(3, 4, 0.8, WeightMode::Dirichlet, &mut rng).unwrap();
        let g = cartan_barycenter(&mu, &Default::default()).unwrap().result;
        assert!(beta_prime_zero(&g, &mu).unwrap().frobenius_norm() < 1e-9);
    }

    #[test]
    fn derivative_scalar_closed_form() {
        let mu = scalar_pair();
        let d = beta_prime_zero(&SpdMatrix::diag(&[1.0]).unwrap(), &mu).unwrap();
        assert!((d.get(0, 0) - 4.0_f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn finite_difference_scalar_case() {
        let mu = scalar_pair();
        let x = SpdMatrix::diag(&[1.0]).unwrap();
        let fd = beta_prime_fd(&x, &mu, 0.0, 1e-4, &Default::default()).unwrap();
        assert!((fd.get(0, 0) - 4.0_f64.ln()).abs() < 1e-7);
        assert!(beta_prime_fd(&x, &mu, 0.0, 0.0, &Default::default()).is_err());
    }

    #[test]
    fn finite_difference_matches_closed_form() {
        let mut rng = SplitMix64::new(6);
        for dim in [2, 3] {
            let x = random_spd(dim, 0.7, &mut rng).unwrap();
            let mu = random_measure(dim, 4, 0.7, WeightMode::Dirichlet, &mut rng).unwrap();
            let exact = beta_prime_zero(&x, &mu).unwrap();
            let fd = beta_prime_fd(&x, &mu, 0.0, 1e-4, &Default::default()).unwrap();
            let rel = (&fd - &exact).frobenius_norm() / exact.frobenius_norm();
            assert!(rel < 1e-5, "relative error {rel} at dim {dim}");
        }
    }

    #[test]
    fn finite_difference_single_atom_geodesic_derivative() {
        let mut rng = SplitMix64::new(7);
        let x = random_spd(2, 0.8, &mut rng).unwrap();
        let a = random_spd(2, 0.8, &mut rng).unwrap();
        let mu = DiscreteMeasure::dirac(a.clone());
        let fd = beta_prime_fd(&x, &mu, 0.0, 1e-4, &Default::default()).unwrap();
        let exact = beta_prime_zero(&x, &mu).unwrap();
        assert!((&fd - &exact).frobenius_norm() < 1e-6);
    }

    #[test]
    fn lie_trotter_commuting_family_is_exact() {
        let atoms = vec![
            SpdMatrix::diag(&[1.0, 4.0]).unwrap(),
            SpdMatrix::diag(&[3.0, 0.5]).unwrap(),
        ];
        let mu = DiscreteMeasure::new(atoms, vec![0.4, 0.6]).unwrap();
        let ts: Vec<f64> = (1..=8).map(|k| 0.5_f64.powi(k)).collect();
        let records = lie_trotter_scan(&mu, &ts, &Default::default()).unwrap();
        for rec in &records {
            assert!(rec.error < 1e-10, "error {} at t={}", rec.error, rec.t);
        }
    }

    #[test]
    fn lie_trotter_at_one_is_the_barycenter() {
        let mut rng = SplitMix64::new(8);
        let mu = random_measure(2, 3, 0.7, WeightMode::Uniform, &mut rng).unwrap();
        let records = lie_trotter_scan(&mu, &[1.0], &Default::default()).unwrap();
        let g = cartan_barycenter(&mu, &Default::default()).unwrap().result;
        assert!(riem_dist(&records[0].value, &g).unwrap() < 1e-10);
        assert!(lie_trotter_scan(&mu, &[0.0], &Default::default()).is_err());
    }

    #[test]
    fn lie_trotter_error_decays_on_noncommuting_instances() {
        let mut rng = SplitMix64::new(9);
        let mu = random_measure(3, 4, 0.7, WeightMode::Uniform, &mut rng).unwrap();
        let ts: Vec<f64> = (1..=10).map(|k| 0.5_f64.powi(k)).collect();
        let records = lie_trotter_scan(&mu, &ts, &Default::default()).unwrap();
        for pair in records.windows(2) {
            assert!(pair[1].error <= 0.6 * pair[0].error + 1e-9);
        }
        assert!(records.last().unwrap().error < 1e-3);
    }

    #[test]
    fn norm_scan_columns_are_monotone_and_match_inverse() {
        let mut rng = SplitMix64::new(10);
        let mu = random_measure(2, 3, 0.7, WeightMode::Uniform, &mut rng).unwrap();
        let ts: Vec<f64> = (0..=8).map(|k| 0.5_f64.powi(k)).collect();
        let rows = norm_monotonicity_scan(&mu, &ts, &Default::default()).unwrap();
        for k in 0..2 {
            for pair in rows.windows(2) {
                assert!(pair[1].ky_fan_forward[k] >= pair[0].ky_fan_forward[k] - 1e-9);
            }
            for row in &rows {
                assert!(row.ky_fan_forward[k] <= row.ky_fan_limit[k] + 1e-9);
                assert!((row.ky_fan_forward[k] - row.ky_fan_inverse[k]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn norm_scan_commuting_columns_are_constant() {
        let atoms = vec![
            SpdMatrix::diag(&[2.0, 0.5]).unwrap(),
            SpdMatrix::diag(&[1.0, 3.0]).unwrap(),
        ];
        let mu = DiscreteMeasure::new(atoms, vec![0.5, 0.5]).unwrap();
        let ts: Vec<f64> = (0..=6).map(|k| 0.5_f64.powi(k)).collect();
        let rows = norm_monotonicity_scan(&mu, &ts, &Default::default()).unwrap();
        for k in 0..2 {
            let first = rows[0].ky_fan_forward[k];
            for row in &rows {
                assert!((row.ky_fan_forward[k] - first).abs() < 1e-10);
                assert!((row.ky_fan_forward[k] - row.ky_fan_limit[k]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn norm_scan_validates_grid() {
        let mu = DiscreteMeasure::dirac(SpdMatrix::identity(2));
        assert!(norm_monotonicity_scan(&mu, &[], &Default::default()).is_err());
        assert!(norm_monotonicity_scan(&mu, &[0.5, 0.5], &Default::default()).is_err());
        assert!(norm_monotonicity_scan(&mu, &[0.25, 0.5], &Default::default()).is_err());
        assert!(norm_monotonicity_scan(&mu, &[-1.0], &Default::default()).is_err());
    }

    #[test]
    fn fixed_point_holds_exactly_at_the_barycenter() {
        let mut rng = SplitMix64::new(11);
        let mu = random_measure(2, 4, 0.7, WeightMode::Dirichlet, &mut rng).unwrap();
        let g = cartan_barycenter(&mu, &Default::default()).unwrap().result;
        let report =
            fixed_point_check(&g, &mu, &[-2.0, -0.5, 0.5, 2.0], &Default::default()).unwrap();
        assert!(report.all_within_slack, "{report:?}");
    }

    #[test]
    fn fixed_point_detects_perturbations() {
        let mut rng = SplitMix64::new(12);
        let mu = random_measure(2, 4, 0.7, WeightMode::Dirichlet, &mut rng).unwrap();
        let g = cartan_barycenter(&mu, &Default::default()).unwrap().result;
        let factor = mat_exp(&random_sym(2, &mut rng).scaled(0.1)).unwrap();
        let pushed = crate::spd::congruence(factor.matrix(), &g).unwrap();
        let report =
            fixed_point_check(&pushed, &mu, &[-2.0, -0.5, 0.5, 2.0], &Default::default()).unwrap();
        assert!(!report.all_within_slack);
        assert!(report.derivative_norm > 1e-3);
        assert!(report.dist_to_barycenter > 1e-3);
        assert!(report.max_trajectory_drift > 1e-3);
        assert!(report.max_recentered_drift > 1e-3);
    }

    #[test]
    fn fixed_point_dirac_base_is_its_own_barycenter() {
        let mut rng = SplitMix64::new(13);
        let a = random_spd(2, 0.8, &mut rng).unwrap();
        let mu = DiscreteMeasure::dirac(a.clone());
        let report =
            fixed_point_check(&a, &mu, &[-1.0, 0.5, 2.0], &Default::default()).unwrap();
        assert!(report.all_within_slack, "{report:?}");
    }

    #[test]
    fn flow_law_identity_pairs() {
        let mut rng = SplitMix64::new(14);
        let x = random_spd(2, 0.8, &mut rng).unwrap();
        let mu = random_measure(2, 3, 0.8, WeightMode::Uniform, &mut rng).unwrap();
        let report = flow_law_check(&x, &mu, &[(1.0, 0.7), (1.0, -1.4), (0.0, 0.9)]).unwrap();
        assert!(report.max_error < 1e-10, "{report:?}");
    }

    #[test]
    fn flow_law_random_pairs_compose() {
        let mut rng = SplitMix64::new(15);
        let x = random_spd(3, 0.7, &mut rng).unwrap();
        let mu = random_measure(3, 4, 0.7, WeightMode::Dirichlet, &mut rng).unwrap();
        let pairs: Vec<(f64, f64)> = (0..6)
            .map(|_| {
                (
                    4.0 * rng.next_f64() - 2.0,
                    4.0 * rng.next_f64() - 2.0,
                )
            })
            .collect();
        let report = flow_law_check(&x, &mu, &pairs).unwrap();
        assert!(report.max_error <= 1e-10, "{report:?}");
        assert_eq!(report.per_pair.len(), 6);
    }

    #[test]
    fn lipschitz_probe_dirac_measure_has_constant_speed() {
        let mut rng = SplitMix64::new(16);
        let x = random_spd(2, 0.8, &mut rng).unwrap();
        let a = random_spd(2, 0.8, &mut rng).unwrap();
        let mu = DiscreteMeasure::dirac(a.clone());
        let grid: Vec<f64> = (0..=4).map(|i| i as f64 / 4.0).collect();
        let report = lipschitz_probe(&x, &mu, 1.0, &grid).unwrap();
        let speed = riem_dist(&x, &a).unwrap();
        assert!((report.max_ratio - speed).abs() < 1e-9);
        assert_eq!(report.within_unit_bound, Some(true));
    }

    #[test]
    fn lipschitz_probe_respects_unit_constant() {
        let mut rng = SplitMix64::new(17);
        let x = random_spd(2, 0.7, &mut rng).unwrap();
        let mu = random_measure(2, 4, 0.7, WeightMode::Uniform, &mut rng).unwrap();
        let grid: Vec<f64> = (0..=5).map(|i| i as f64 / 5.0).collect();
        let report = lipschitz_probe(&x, &mu, 1.0, &grid).unwrap();
        let c1 = report.unit_constant.unwrap();
        assert!(report.max_ratio <= c1 + 1e-8, "{report:?}");
        assert_eq!(report.within_unit_bound, Some(true));
    }

    #[test]
    fn flow_distance_is_symmetric_under_time_reflection() {
        let mut rng = SplitMix64::new(18);
        let x = random_spd(2, 0.8, &mut rng).unwrap();
        let mu = random_measure(2, 3, 0.8, WeightMode::Uniform, &mut rng).unwrap();
        for (t, s) in [(0.3, 0.8), (0.1, 0.9), (0.5, 1.0)] {
            let pos = d1w(
                &mu.geometric_flow(&x, t).unwrap(),
                &mu.geometric_flow(&x, s).unwrap(),
            )
            .unwrap()
            .0;
            let neg = d1w(
                &mu.geometric_flow(&x, -t).unwrap(),
                &mu.geometric_flow(&x, -s).unwrap(),
            )
            .unwrap()
            .0;
            assert!((pos - neg).abs() < 1e-9, "{pos} vs {neg}");
        }
    }

    #[test]
    fn lipschitz_probe_validates_grid() {
        let mu = DiscreteMeasure::dirac(SpdMatrix::identity(2));
        let x = SpdMatrix::identity(2);
        assert!(lipschitz_probe(&x, &mu, 1.0, &[0.0]).is_err());
        assert!(lipschitz_probe(&x, &mu, 1.0, &[0.0, 2.0]).is_err());
        assert!(lipschitz_probe(&x, &mu, 0.0, &[0.0, 0.5]).is_err());
    }
}
