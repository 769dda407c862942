//! Random loss instances for oracle checks.

use ht_core::{LossModel, ParamVector, RegressorSample};
use rand::RngExt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Family {
    QuadraticRegression,
    Logsumexp,
    Regularized,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::QuadraticRegression => "quadratic-regression",
            Family::Logsumexp => "logsumexp",
            Family::Regularized => "regularized",
        }
    }
}

fn vector<R: RngExt>(rng: &mut R, dim: usize, span: f64) -> ParamVector {
    ParamVector::new((0..dim).map(|_| rng.random_range(-span..span)).collect())
        .expect("finite draws")
}

/// A random model, evaluation point and sample from `family`.
pub fn random_case<R: RngExt>(
    family: Family,
    rng: &mut R,
) -> (LossModel, ParamVector, RegressorSample) {
    let dim = rng.random_range(1..4usize);
    match family {
        Family::QuadraticRegression => {
            let phi = vector(rng, dim, 3.0);
            let y = rng.random_range(-3.0..3.0);
            (
                LossModel::quadratic_regression(),
                vector(rng, dim, 3.0),
                RegressorSample::linear(phi, y).expect("finite y"),
            )
        }
        Family::Logsumexp => {
            let a = rng.random_range(0.1..2.0);
            let b = rng.random_range(0.5..20.0);
            (
                LossModel::log_sum_exp(),
                vector(rng, dim, 5.0),
                RegressorSample::log_sum_exp(a, b).expect("positive draws"),
            )
        }
        Family::Regularized => {
            let inner_family = if rng.random_bool(0.5) {
                Family::QuadraticRegression
            } else {
                Family::Logsumexp
            };
            let (inner, theta, sample) = random_case(inner_family, rng);
            let mu = rng.random_range(1e-4..1.0);
            let anchor = vector(rng, theta.dim(), 5.0);
            let model = if rng.random_bool(0.5) {
                LossModel::regularized(inner, mu, anchor)
            } else {
                LossModel::regularized_plain(inner, mu, anchor)
            }
            .expect("positive mu");
            (model, theta, sample)
        }
    }
}
