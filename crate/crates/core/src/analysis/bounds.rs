use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::tuners::{HyperParams, TunerMode};

use super::report::Finding;

/// Which admissible-γ bound to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaBound {
    /// `β(2−β)/(8+β)`, for smooth convex losses.
    Smooth,
    /// `β(2−β)/(16+β+μ)`, for strongly convex losses.
    StronglyConvex,
}

/// Largest `γ` for which the discrete tuner is proven stable at this `β`.
pub fn max_gamma(beta: f64, mu: f64, bound: GammaBound) -> Result<f64> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::invalid(
            "beta",
            format!("must lie in (0, 1), got {beta}"),
        ));
    }
    if !(mu.is_finite() && mu >= 0.0) {
        return Err(Error::invalid(
            "mu",
            format!("must be non-negative, got {mu}"),
        ));
    }
    let num = beta * (2.0 - beta);
    Ok(match bound {
        GammaBound::Smooth => num / (8.0 + beta),
        GammaBound::StronglyConvex => num / (16.0 + beta + mu),
    })
}

/// One inequality of a stability theorem, evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct Condition {
    pub label: &'static str,
    /// The inequality with the numbers substituted, e.g. `γ = 10 ≤ 0.0234568`.
    pub inequality: String,
    pub lhs: f64,
    pub rhs: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub mode: TunerMode,
    pub conditions: Vec<Condition>,
    /// The admissible γ for this β (an open bound in continuous mode).
    pub max_gamma: Option<f64>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| c.passed)
    }

    pub fn findings(&self) -> Vec<Finding> {
        self.conditions
            .iter()
            .map(|c| Finding {
                iteration: None,
                quantity: String::from(c.label),
                bound: c.rhs,
                observed: c.lhs,
                passed: c.passed,
            })
            .collect()
    }

    /// One line per condition: `PASS|FAIL <label>: <inequality>`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.conditions {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{tag} {}: {}\n", c.label, c.inequality));
        }
        if let Some(g) = self.max_gamma {
            out.push_str(&format!("max_gamma={g:.9}\n"));
        }
        out
    }
}

fn condition(
    label: &'static str,
    inequality: String,
    lhs: f64,
    rhs: f64,
    passed: bool,
) -> Condition {
    Condition {
        label,
        inequality,
        lhs,
        rhs,
        passed,
    }
}

fn beta_in_unit_interval(beta: f64) -> Condition {
    let ok = beta > 0.0 && beta < 1.0;
    let rendered = if ok {
        format!("0 < β = {beta} < 1")
    } else {
        format!("β = {beta} is not in (0, 1)")
    };
    condition("beta-range", rendered, beta, 1.0, ok)
}

fn gamma_positive(gamma: f64) -> Condition {
    let ok = gamma > 0.0;
    let rendered = if ok {
        format!("γ = {gamma} > 0")
    } else {
        format!("γ = {gamma} is not > 0")
    };
    condition("gamma-positive", rendered, gamma, 0.0, ok)
}

fn gamma_upper(gamma: f64, rhs: f64, formula: &str) -> Condition {
    let ok = gamma <= rhs;
    let op = if ok { "≤" } else { ">" };
    condition(
        "gamma-bound",
        format!("γ = {gamma} {op} {formula} = {rhs:.9}"),
        gamma,
        rhs,
        ok,
    )
}

/// Evaluates every condition that applies to `hp.mode`. Never fails; a
/// violated inequality is reported with its numbers substituted.
pub fn validate_hyperparams(hp: &HyperParams) -> ValidationReport {
    let (g, b, mu) = (hp.gamma, hp.beta, hp.mu);
    let num = b * (2.0 - b);
    let mut conditions = Vec::new();
    let max_gamma = match hp.mode {
        TunerMode::DiscreteSmooth => {
            let rhs = num / (8.0 + b);
            conditions.push(beta_in_unit_interval(b));
            conditions.push(gamma_positive(g));
            conditions.push(gamma_upper(g, rhs, "β(2−β)/(8+β)"));
            Some(rhs)
        }
        TunerMode::DiscreteStronglyConvex => {
            let rhs = num / (16.0 + b + mu);
            conditions.push(beta_in_unit_interval(b));
            conditions.push(gamma_positive(g));
            conditions.push(condition(
                "mu-nonnegative",
                format!("μ = {mu} {} 0", if mu >= 0.0 { "≥" } else { "<" }),
                mu,
                0.0,
                mu >= 0.0,
            ));
            conditions.push(gamma_upper(g, rhs, "β(2−β)/(16+β+μ)"));
            Some(rhs)
        }
        TunerMode::Continuous => {
            conditions.push(gamma_positive(g));
            let ok = b > 2.0 * g;
            let op = if ok { ">" } else { "≤" };
            conditions.push(condition(
                "beta-exceeds-2gamma",
                format!("β = {b} {op} 2γ = {}", 2.0 * g),
                b,
                2.0 * g,
                ok,
            ));
            Some(b / 2.0)
        }
    };
    ValidationReport {
        mode: hp.mode,
        conditions,
        max_gamma,
    }
}
