use alloc::format;
use alloc::string::String;

/// One line of a structured analysis report.
#[derive(Debug, Clone, PartialEq)]
pub struct Finding {
    pub iteration: Option<usize>,
    pub quantity: String,
    pub bound: f64,
    pub observed: f64,
    pub passed: bool,
}

impl Finding {
    /// `status=FAIL iteration=12 quantity=delta_v bound=1e-12 observed=3e-11`,
    /// with `iteration=-` when the finding is not tied to one step.
    pub fn to_line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let k = match self.iteration {
            Some(k) => format!("{k}"),
            None => String::from("-"),
        };
        format!(
            "status={status} iteration={k} quantity={} bound={:e} observed={:e}",
            self.quantity, self.bound, self.observed
        )
    }
}

pub fn render_findings(findings: &[Finding]) -> String {
    let mut out = String::new();
    for f in findings {
        out.push_str(&f.to_line());
        out.push('\n');
    }
    out
}
