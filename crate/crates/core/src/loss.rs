//! Loss functions driven by per-iteration regressor samples.
//!
//! Every family reports, for a parameter `θ` and a sample `k`, the value
//! `L_k(θ)`, the gradient, an upper bound `H_k` on the Hessian spectrum and the
//! normalizing signal `N_k = 1 + H_k` that the tuners divide gradients by.

use alloc::boxed::Box;

use crate::error::{Error, Result};
use crate::math;
use crate::vector::ParamVector;

/// One iteration's exogenous data.
#[derive(Debug, Clone, PartialEq)]
pub enum RegressorSample {
    /// Linear regression `y_k = θ*ᵀφ_k`.
    Linear { phi: ParamVector, y: f64 },
    /// `log(a·e^{bθ} + a·e^{−bθ})`, summed over coordinates.
    LogSumExp { a: f64, b: f64 },
}

impl RegressorSample {
    pub fn linear(phi: ParamVector, y: f64) -> Result<Self> {
        if !y.is_finite() {
            return Err(Error::invalid("y", "must be finite"));
        }
        Ok(RegressorSample::Linear { phi, y })
    }

    pub fn log_sum_exp(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::invalid(
                "a",
                alloc::format!("must be positive, got {a}"),
            ));
        }
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::invalid(
                "b",
                alloc::format!("must be positive, got {b}"),
            ));
        }
        Ok(RegressorSample::LogSumExp { a, b })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            RegressorSample::Linear { .. } => "linear",
            RegressorSample::LogSumExp { .. } => "logsumexp",
        }
    }
}

/// Result of evaluating a loss at one point for one sample.
#[derive(Debug, Clone, PartialEq)]
pub struct LossEvaluation {
    pub value: f64,
    pub gradient: ParamVector,
    /// `H_k ≥ 0`, an upper bound on the largest Hessian eigenvalue.
    pub hessian_bound: f64,
    /// `N_k`. Equal to `1 + hessian_bound` except for the normalized
    /// regularized family, which is already normalized and reports 1.
    pub normalizer: f64,
}

/// Anything the tuners can query for `L_k`, `∇L_k` and `N_k`.
///
/// [`LossModel`] is the production implementation; tests wrap it to count
/// evaluations.
pub trait Objective {
    fn evaluate(&self, theta: &ParamVector, sample: &RegressorSample) -> Result<LossEvaluation>;
}

impl<T: Objective + ?Sized> Objective for &T {
    fn evaluate(&self, theta: &ParamVector, sample: &RegressorSample) -> Result<LossEvaluation> {
        (**self).evaluate(theta, sample)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SmoothnessMode {
    /// Pointwise largest Hessian eigenvalue.
    ExactHessian,
    /// A bound valid for every `θ` (`b²` for log-sum-exp).
    #[default]
    ConservativeBound,
}

/// How the regularizer `μ/2‖θ − θ₀‖²` is combined with the inner loss.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegularizerForm {
    /// `f = L/N + μ/2‖θ−θ₀‖²`. The result is already normalized, so its own
    /// normalizer is 1.
    NormalizedInner,
    /// `L_μ = L + μ/2‖θ−θ₀‖²`, normalized downstream by `1 + H`.
    Plain,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LossFamily {
    /// `½(θᵀφ − y)²`
    QuadraticRegression,
    /// `Σ_i log(a·e^{bθ_i} + a·e^{−bθ_i})`
    LogSumExp,
    Regularized {
        inner: Box<LossModel>,
        mu: f64,
        anchor: ParamVector,
        form: RegularizerForm,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LossModel {
    pub family: LossFamily,
    pub known_optimum: Option<ParamVector>,
    pub smoothness: SmoothnessMode,
}

impl LossModel {
    pub fn quadratic_regression() -> Self {
        Self::with_family(LossFamily::QuadraticRegression)
    }

    pub fn log_sum_exp() -> Self {
        Self::with_family(LossFamily::LogSumExp)
    }

    /// `L/N + μ/2‖θ − anchor‖²`
    pub fn regularized(inner: LossModel, mu: f64, anchor: ParamVector) -> Result<Self> {
        Self::regularized_with(inner, mu, anchor, RegularizerForm::NormalizedInner)
    }

    /// `L + μ/2‖θ − anchor‖²`
    pub fn regularized_plain(inner: LossModel, mu: f64, anchor: ParamVector) -> Result<Self> {
        Self::regularized_with(inner, mu, anchor, RegularizerForm::Plain)
    }

    pub fn regularized_with(
        inner: LossModel,
        mu: f64,
        anchor: ParamVector,
        form: RegularizerForm,
    ) -> Result<Self> {
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::invalid(
                "mu",
                alloc::format!("must be positive, got {mu}"),
            ));
        }
        Ok(Self::with_family(LossFamily::Regularized {
            inner: Box::new(inner),
            mu,
            anchor,
            form,
        }))
    }

    fn with_family(family: LossFamily) -> Self {
        LossModel {
            family,
            known_optimum: None,
            smoothness: SmoothnessMode::default(),
        }
    }

    pub fn with_known_optimum(mut self, theta_star: ParamVector) -> Self {
        self.known_optimum = Some(theta_star);
        self
    }

    pub fn with_smoothness(mut self, mode: SmoothnessMode) -> Self {
        self.smoothness = mode;
        self
    }

    pub fn family_name(&self) -> &'static str {
        match self.family {
            LossFamily::QuadraticRegression => "quadratic-regression",
            LossFamily::LogSumExp => "logsumexp",
            LossFamily::Regularized { .. } => "regularized",
        }
    }

    /// Dimension implied by the model or the sample, if any.
    pub fn dimension_hint(&self, sample: &RegressorSample) -> Option<usize> {
        if let Some(opt) = &self.known_optimum {
            return Some(opt.dim());
        }
        match (&self.family, sample) {
            (LossFamily::Regularized { anchor, .. }, _) => Some(anchor.dim()),
            (_, RegressorSample::Linear { phi, .. }) => Some(phi.dim()),
            _ => None,
        }
    }

    pub fn eval(&self, theta: &ParamVector, sample: &RegressorSample) -> Result<LossEvaluation> {
        let out = match &self.family {
            LossFamily::QuadraticRegression => quadratic(theta, sample)?,
            LossFamily::LogSumExp => log_sum_exp(theta, sample, self.smoothness)?,
            LossFamily::Regularized {
                inner,
                mu,
                anchor,
                form,
            } => {
                theta.check_dim(anchor)?;
                let e = inner.eval(theta, sample)?;
                let offset = theta.sub(anchor);
                let penalty = 0.5 * mu * offset.norm_sq();
                match form {
                    RegularizerForm::NormalizedInner => LossEvaluation {
                        value: e.value / e.normalizer + penalty,
                        gradient: e
                            .gradient
                            .scale(1.0 / e.normalizer)
                            .add_scaled(*mu, &offset),
                        hessian_bound: e.hessian_bound / e.normalizer + mu,
                        normalizer: 1.0,
                    },
                    RegularizerForm::Plain => {
                        let h = e.hessian_bound + mu;
                        LossEvaluation {
                            value: e.value + penalty,
                            gradient: e.gradient.add_scaled(*mu, &offset),
                            hessian_bound: h,
                            normalizer: 1.0 + h,
                        }
                    }
                }
            }
        };
        if !(out.value.is_finite() && out.gradient.is_finite() && out.hessian_bound.is_finite()) {
            return Err(Error::Overflow {
                theta: theta.clone(),
            });
        }
        Ok(out)
    }
}

impl Objective for LossModel {
    fn evaluate(&self, theta: &ParamVector, sample: &RegressorSample) -> Result<LossEvaluation> {
        self.eval(theta, sample)
    }
}

fn quadratic(theta: &ParamVector, sample: &RegressorSample) -> Result<LossEvaluation> {
    let RegressorSample::Linear { phi, .. } = sample else {
        return Err(Error::SampleMismatch {
            family: "quadratic-regression",
            sample: sample.kind_name(),
        });
    };
    let e = performance_error(theta, sample)?;
    let h = phi.norm_sq();
    Ok(LossEvaluation {
        value: 0.5 * e * e,
        gradient: phi.scale(e),
        hessian_bound: h,
        normalizer: 1.0 + h,
    })
}

fn log_sum_exp(
    theta: &ParamVector,
    sample: &RegressorSample,
    mode: SmoothnessMode,
) -> Result<LossEvaluation> {
    let RegressorSample::LogSumExp { a, b } = *sample else {
        return Err(Error::SampleMismatch {
            family: "logsumexp",
            sample: sample.kind_name(),
        });
    };
    let offset = math::ln(2.0 * a);
    let mut value = 0.0;
    for &t in theta.iter() {
        value += offset + math::log_cosh(b * t);
    }
    // b(e^{2bθ}−1)/(e^{2bθ}+1) written as b·tanh(bθ), which cannot overflow.
    let gradient = theta.map(|t| b * math::tanh(b * t));
    let h = match mode {
        SmoothnessMode::ConservativeBound => b * b,
        SmoothnessMode::ExactHessian => theta
            .iter()
            .map(|&t| {
                let c = math::cosh(b * t);
                b * b / (c * c)
            })
            .fold(0.0, f64::max),
    };
    Ok(LossEvaluation {
        value,
        gradient,
        hessian_bound: h,
        normalizer: 1.0 + h,
    })
}

/// `e_{y,k} = θᵀφ_k − y_k`
pub fn performance_error(theta: &ParamVector, sample: &RegressorSample) -> Result<f64> {
    match sample {
        RegressorSample::Linear { phi, y } => {
            theta.check_dim(phi)?;
            Ok(theta.dot(phi) - y)
        }
        other => Err(Error::SampleMismatch {
            family: "quadratic-regression",
            sample: other.kind_name(),
        }),
    }
}

/// Strong-convexity modulus guaranteed by the model: the regularization
/// weight for the regularized family, zero otherwise.
pub fn strong_convexity_constant(model: &LossModel) -> f64 {
    match &model.family {
        LossFamily::Regularized {
            inner, mu, form, ..
        } => match form {
            RegularizerForm::Plain => mu + strong_convexity_constant(inner),
            RegularizerForm::NormalizedInner => *mu,
        },
        _ => 0.0,
    }
}
