use serde::Serialize;

/// Non-fatal finding attached to a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostic {
    pub code: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
}

impl Diagnostic {
    pub fn new(code: &str, message: impl Into<String>) -> Self {
        Diagnostic {
            code: code.to_string(),
            message: message.into(),
            s: None,
        }
    }

    pub fn at(mut self, s: f64) -> Self {
        self.s = Some(s);
        self
    }
}
