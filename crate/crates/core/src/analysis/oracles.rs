use crate::error::{Error, Result};
use crate::loss::{LossFamily, LossModel, Objective, RegressorSample, SmoothnessMode};
use crate::trace::Trace;
use crate::vector::ParamVector;

/// Largest coordinate error between the analytic gradient and a central
/// difference with step `h·max(1, |θ_i|)`, relative to `max(1, |analytic|)`.
pub fn finite_diff_gradient_check<O: Objective + ?Sized>(
    objective: &O,
    theta: &ParamVector,
    sample: &RegressorSample,
    h: f64,
) -> Result<f64> {
    crate::tuners::require_positive("h", h)?;
    let analytic = objective.evaluate(theta, sample)?.gradient;
    let mut worst: f64 = 0.0;
    let mut probe = theta.as_slice().to_vec();
    for i in 0..theta.dim() {
        let step = h * theta[i].abs().max(1.0);
        probe[i] = theta[i] + step;
        let up = objective
            .evaluate(&ParamVector::from_raw(probe.clone()), sample)?
            .value;
        probe[i] = theta[i] - step;
        let down = objective
            .evaluate(&ParamVector::from_raw(probe.clone()), sample)?
            .value;
        probe[i] = theta[i];
        let fd = (up - down) / (2.0 * step);
        worst = worst.max((analytic[i] - fd).abs() / analytic[i].abs().max(1.0));
    }
    Ok(worst)
}

/// First logged `k` with `loss_k − reference ≤ epsilon`.
pub fn iterations_to_epsilon(trace: &Trace, reference: f64, epsilon: f64) -> Result<Option<usize>> {
    if trace.is_empty() {
        return Err(Error::Precondition("trace is empty".into()));
    }
    Ok(trace
        .records
        .iter()
        .filter(|r| !r.diverged)
        .find(|r| r.loss - reference <= epsilon)
        .map(|r| r.k))
}

/// First logged `k` whose recorded loss gap is at most `epsilon`.
pub fn iterations_to_gap(trace: &Trace, epsilon: f64) -> Result<Option<usize>> {
    if trace.is_empty() {
        return Err(Error::Precondition("trace is empty".into()));
    }
    Ok(trace
        .finite_gaps()
        .find(|&(_, g)| g <= epsilon)
        .map(|(k, _)| k))
}

const BISECTION_CAP: usize = 200;
const DESCENT_CAP: usize = 1_000_000;

/// Minimizer of the loss for a fixed sample, to gradient norm `≤ tol`.
///
/// Scalar problems use bisection on the gradient over a bracket that doubles
/// until the gradient changes sign. Higher dimensions use gradient descent
/// with step `1/N` under the conservative smoothness bound.
pub fn solve_optimum(model: &LossModel, sample: &RegressorSample, tol: f64) -> Result<ParamVector> {
    crate::tuners::require_positive("tol", tol)?;
    let model = conservative(model);
    let dim = model.dimension_hint(sample).unwrap_or(1);
    if dim == 1 {
        bisect(&model, sample, tol)
    } else {
        descend(&model, sample, dim, tol)
    }
}

fn conservative(model: &LossModel) -> LossModel {
    let mut out = model
        .clone()
        .with_smoothness(SmoothnessMode::ConservativeBound);
    if let LossFamily::Regularized { inner, .. } = &mut out.family {
        **inner = conservative(inner);
    }
    out.known_optimum = None;
    out
}

fn bisect(model: &LossModel, sample: &RegressorSample, tol: f64) -> Result<ParamVector> {
    let grad =
        |t: f64| -> Result<f64> { Ok(model.eval(&ParamVector::scalar(t), sample)?.gradient[0]) };
    let centre = match &model.family {
        LossFamily::Regularized { anchor, .. } => anchor[0],
        _ => 0.0,
    };
    let g0 = grad(centre)?;
    if g0.abs() <= tol {
        return Ok(ParamVector::scalar(centre));
    }
    let (mut lo, mut hi) = (centre - 1.0, centre + 1.0);
    let mut width = 1.0;
    let mut expansions = 0;
    while !(grad(lo)? < 0.0 && grad(hi)? > 0.0) {
        expansions += 1;
        if expansions > BISECTION_CAP {
            return Err(Error::NoConvergence {
                iterations: expansions,
                residual: g0.abs(),
            });
        }
        width *= 2.0;
        lo = centre - width;
        hi = centre + width;
    }
    let mut residual = f64::INFINITY;
    for i in 0..BISECTION_CAP {
        let mid = 0.5 * (lo + hi);
        let g = grad(mid)?;
        residual = g.abs();
        if residual <= tol {
            return Ok(ParamVector::scalar(mid));
        }
        if mid <= lo || mid >= hi {
            return Err(Error::NoConvergence {
                iterations: i,
                residual,
            });
        }
        if g < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence {
        iterations: BISECTION_CAP,
        residual,
    })
}

fn descend(
    model: &LossModel,
    sample: &RegressorSample,
    dim: usize,
    tol: f64,
) -> Result<ParamVector> {
    let mut theta = match &model.family {
        LossFamily::Regularized { anchor, .. } => anchor.clone(),
        _ => ParamVector::zeros(dim),
    };
    let mut residual = f64::INFINITY;
    for _ in 0..DESCENT_CAP {
        let e = model.eval(&theta, sample)?;
        residual = e.gradient.norm();
        if residual <= tol {
            return Ok(theta);
        }
        theta = theta.add_scaled(-1.0 / e.hessian_bound, &e.gradient);
        if !theta.is_finite() {
            break;
        }
    }
    Err(Error::NoConvergence {
        iterations: DESCENT_CAP,
        residual,
    })
}
