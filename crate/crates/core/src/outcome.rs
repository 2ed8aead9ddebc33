//! Per-sample verdicts shared by the checkers.

/// Result of one check on one input. `margin` is the slack in valuation
/// units (`None` when the quantity vanished at working precision).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub pass: bool,
    pub margin: Option<i64>,
    pub detail: String,
}

impl Outcome {
    pub fn new(margin: Option<i64>, detail: impl Into<String>) -> Self {
        Outcome { pass: margin.is_none_or(|m| m >= 0), margin, detail: detail.into() }
    }

    pub fn pass(detail: impl Into<String>) -> Self {
        Outcome { pass: true, margin: None, detail: detail.into() }
    }

    pub fn fail(detail: impl Into<String>) -> Self {
        Outcome { pass: false, margin: None, detail: detail.into() }
    }

    /// Combines verdicts: all must pass, the margin is the worst one.
    pub fn merge(items: impl IntoIterator<Item = Outcome>) -> Outcome {
        let mut pass = true;
        let mut margin: Option<i64> = None;
        let mut details = Vec::new();
        for o in items {
            pass &= o.pass;
            margin = min_margin(margin, o.margin);
            if !o.pass && !o.detail.is_empty() {
                details.push(o.detail);
            }
        }
        Outcome { pass, margin, detail: details.join("; ") }
    }
}

/// Minimum with `None` read as infinity.
pub fn min_margin(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}
