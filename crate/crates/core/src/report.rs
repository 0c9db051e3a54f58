use serde::{Deserialize, Serialize};

/// One named condition and whether it held.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub condition: String,
    pub pass: bool,
}

impl Check {
    pub fn new(condition: impl Into<String>, pass: bool) -> Self {
        Check {
            condition: condition.into(),
            pass,
        }
    }
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}
