use serde::Serialize;

/// One verified statement with enough detail to localize a failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckItem {
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckItem {
    pub fn new(label: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        CheckItem { label: label.into(), passed, detail: detail.into() }
    }

    /// Compares two values and records both.
    pub fn eq<T: PartialEq + std::fmt::Debug>(label: impl Into<String>, got: T, expected: T) -> Self {
        let passed = got == expected;
        CheckItem::new(label, passed, format!("got {got:?}, expected {expected:?}"))
    }
}

pub fn all_passed(items: &[CheckItem]) -> bool {
    items.iter().all(|c| c.passed)
}
