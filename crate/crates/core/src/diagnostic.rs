use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

/// What a diagnostic is about. Parsers for both text formats share this.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagnosticKind {
    Syntax,
    /// An atom or predicate used with the wrong kind.
    Kind,
    DuplicateDecl,
    UndeclaredAtom,
    UndeclaredVariable,
    ArityMismatch,
    EmptyDomain,
    Type,
    Overflow,
    UnusedAtom,
    Tautology,
    EmptySelect,
}

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Location {
    pub line: usize,
    pub column: usize,
}

/// A message attached to an input. Diagnostics produced by checking an
/// in-memory theory carry no location.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub location: Option<Location>,
    pub severity: Severity,
    pub kind: DiagnosticKind,
    pub message: String,
}

impl Diagnostic {
    pub fn error(
        kind: DiagnosticKind,
        location: Option<Location>,
        message: impl Into<String>,
    ) -> Self {
        Diagnostic {
            location,
            severity: Severity::Error,
            kind,
            message: message.into(),
        }
    }

    pub fn warning(
        kind: DiagnosticKind,
        location: Option<Location>,
        message: impl Into<String>,
    ) -> Self {
        Diagnostic {
            location,
            severity: Severity::Warning,
            kind,
            message: message.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let severity = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        match self.location {
            Some(Location { line, column }) => {
                write!(f, "{line}:{column}: {severity}: {}", self.message)
            }
            None => write!(f, "{severity}: {}", self.message),
        }
    }
}
