use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub snippet: String,
}

impl Diagnostic {
    pub fn error(text: &str, line: usize, column: usize, message: impl Into<String>) -> Self {
        let snippet = text.lines().nth(line.saturating_sub(1)).unwrap_or("").to_string();
        Self {
            severity: Severity::Error,
            line,
            column,
            message: message.into(),
            snippet,
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        writeln!(f, "{sev}: {}:{}: {}", self.line, self.column, self.message)?;
        writeln!(f, "  | {}", self.snippet)?;
        write!(f, "  | {}^", " ".repeat(self.column.saturating_sub(1)))
    }
}
