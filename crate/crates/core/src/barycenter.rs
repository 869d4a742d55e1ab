//! Cartan barycenter of a finitely supported measure, computed by a
//! fixed-point iteration on the Karcher equation, plus the resolvent operator
//! and the Riemannian gradient flow of the barycenter functional.

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::measure::DiscreteMeasure;
use crate::spd::{congruence, mat_exp, recenter, SpdMatrix};

/// Consecutive non-improving iterations tolerated before the step is halved.
const STALL_LIMIT: usize = 10;

/// The step never drops below `step / STEP_SHRINK_LIMIT` before the solver
/// falls back to the first-atom initializer.
const STEP_SHRINK_LIMIT: f64 = 16.0;

/// Initial iterate for the barycenter solver.
#[derive(Clone, Debug, PartialEq)]
pub enum Init {
    /// Exponential of the weighted mean of logarithms. Exact for commuting
    /// families, so small perturbations of them start essentially converged.
    LogEuclidean,
    /// First atom of the measure.
    FirstAtom,
    /// Caller-provided warm start.
    Explicit(SpdMatrix),
}

/// Options for the fixed-point iteration.
#[derive(Clone, Debug)]
pub struct SolverOptions {
    /// Frobenius-norm threshold on the Karcher residual.
    pub tol: f64,
    pub max_iter: usize,
    /// Relaxation factor in (0, 1] applied to the residual before the
    /// exponential update.
    pub step: f64,
    pub init: Init,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-12,
            max_iter: 500,
            step: 1.0,
            init: Init::LogEuclidean,
        }
    }
}

impl SolverOptions {
    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::invalid("solver tolerance must be positive"));
        }
        if !(self.step > 0.0 && self.step <= 1.0) {
            return Err(Error::invalid("solver step must lie in (0, 1]"));
        }
        if self.max_iter == 0 {
            return Err(Error::invalid("solver needs at least one iteration"));
        }
        Ok(())
    }
}

/// Outcome of a barycenter solve. `converged` implies
/// `residual_norm <= tol`.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverReport {
    pub result: SpdMatrix,
    pub residual_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Karcher residual ∫ log X^{-1/2} A X^{-1/2} dμ(A); the zero of this map in
/// X is the Cartan barycenter, and the map itself is the negative Riemannian
/// gradient direction of the barycenter functional.
pub fn karcher_residual(x: &SpdMatrix, mu: &DiscreteMeasure) -> Result<SymMatrix> {
    if x.dim() != mu.dim() {
        return Err(Error::invalid("residual dimension mismatch"));
    }
    let mut acc = SymMatrix::zeros(x.dim());
    for (atom, w) in mu.atoms().iter().zip(mu.weights()) {
        acc = &acc + &recenter(x, atom)?.log().scaled(*w);
    }
    Ok(acc)
}

/// Cartan barycenter by the exponential fixed-point iteration
/// X ← X^{1/2} exp(step · residual) X^{1/2}.
///
/// Hitting `max_iter` is reported through `converged = false`, not an error;
/// the caller decides whether that is fatal. A stalling residual first halves
/// the step (down to a factor 1/16) and then restarts once from the first
/// atom.
pub fn cartan_barycenter(mu: &DiscreteMeasure, opts: &SolverOptions) -> Result<SolverReport> {
    opts.validate()?;
    let mut x = match &opts.init {
        Init::LogEuclidean => mat_exp(&mu.log_mean())?,
        Init::FirstAtom => mu.atom(0).clone(),
        Init::Explicit(x0) => {
            if x0.dim() != mu.dim() {
                return Err(Error::invalid("explicit initializer dimension mismatch"));
            }
            x0.clone()
        }
    };

    let mut step = opts.step;
    let mut best = f64::INFINITY;
    let mut stall = 0usize;
    let mut restarted = false;
    let mut iterations = 0usize;

    let mut residual = karcher_residual(&x, mu)?;
    let mut residual_norm = residual.frobenius_norm();

    while residual_norm > opts.tol && iterations < opts.max_iter {
        if residual_norm < best {
            best = residual_norm;
            stall = 0;
        } else {
            stall += 1;
        }
        if stall >= STALL_LIMIT {
            stall = 0;
            if step > opts.step / STEP_SHRINK_LIMIT * (1.0 + 1e-12) {
                step *= 0.5;
            } else if !restarted {
                restarted = true;
                x = mu.atom(0).clone();
                step = opts.step;
                best = f64::INFINITY;
                residual = karcher_residual(&x, mu)?;
                residual_norm = residual.frobenius_norm();
                continue;
            }
        }

        let s = x.sqrt()?;
        x = congruence(s.matrix(), &mat_exp(&residual.scaled(step))?)?;
        iterations += 1;
        residual = karcher_residual(&x, mu)?;
        residual_norm = residual.frobenius_norm();
    }

    Ok(SolverReport {
        result: x,
        residual_norm,
        iterations,
        converged: residual_norm <= opts.tol,
    })
}

/// Resolvent J_λ(X): barycenter of the mixture λ/(λ+1)·μ + 1/(λ+1)·δ_X.
/// At λ = 0 this is X itself.
pub fn resolvent(
    lambda: f64,
    mu: &DiscreteMeasure,
    x: &SpdMatrix,
    opts: &SolverOptions,
) -> Result<SpdMatrix> {
    if !(lambda >= 0.0) {
        return Err(Error::invalid(format!(
            "resolvent parameter {lambda} must be nonnegative"
        )));
    }
    let blended = mu.mixture(&DiscreteMeasure::dirac(x.clone()), lambda / (lambda + 1.0))?;
    let report = cartan_barycenter(&blended, opts)?;
    if !report.converged {
        return Err(Error::NotConverged {
            residual: report.residual_norm,
            iterations: report.iterations,
        });
    }
    Ok(report.result)
}

/// Riemannian gradient of the barycenter functional at X, which is the
/// negated, congruence-rescaled Karcher residual. Zero exactly at the
/// barycenter.
pub fn riemannian_gradient(x: &SpdMatrix, mu: &DiscreteMeasure) -> Result<SymMatrix> {
    let residual = karcher_residual(x, mu)?;
    let s = x.sqrt()?;
    let product = &(s.matrix() * residual.matrix()) * s.matrix();
    Ok(SymMatrix::new(product).scaled(-1.0))
}

/// Explicit geodesic-Euler integration of the gradient flow
/// dX/dt = −∇ψ(X): each step maps X to X^{1/2} exp(dt · residual) X^{1/2}.
/// Returns the sampled trajectory starting at (0, X0); the terminal point
/// approaches the barycenter as the horizon grows.
pub fn gradient_flow_integrate(
    x0: &SpdMatrix,
    mu: &DiscreteMeasure,
    horizon: f64,
    dt: f64,
) -> Result<Vec<(f64, SpdMatrix)>> {
    if !(dt > 0.0) {
        return Err(Error::invalid("time step must be positive"));
    }
    if dt > horizon * (1.0 + 1e-12) {
        return Err(Error::invalid("time step exceeds the horizon"));
    }
    if x0.dim() != mu.dim() {
        return Err(Error::invalid("flow start dimension mismatch"));
    }
    let steps = (horizon / dt + 1e-9).floor() as usize;
    let mut samples = Vec::with_capacity(steps + 1);
    let mut x = x0.clone();
    samples.push((0.0, x.clone()));
    for step_index in 1..=steps {
        let residual = karcher_residual(&x, mu)?;
        let s = x.sqrt()?;
        x = congruence(s.matrix(), &mat_exp(&residual.scaled(dt))?)?;
        samples.push((step_index as f64 * dt, x.clone()));
    }
    Ok(samples)
}
