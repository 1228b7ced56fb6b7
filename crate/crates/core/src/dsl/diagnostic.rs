use std::fmt;

/// Location of a token or construct in the source text. `line` and
/// `column` are one-based; `column` counts characters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
}

impl Span {
    /// The smallest span covering both.
    pub fn to(self, other: Span) -> Span {
        if other.end <= self.start {
            return other.to(self);
        }
        Span {
            start: self.start,
            end: other.end.max(self.end),
            line: self.line,
            column: self.column,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Severity {
    Error,
    Warning,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Code {
    /// Unrecognized character or malformed number.
    Lexical,
    Syntax,
    UnknownName,
    FiberOutOfRange,
    ParityMisuse,
    DirectionOutOfRange,
    Duplicate,
    InvalidDeclaration,
    Type,
    TermLimit,
    Algebra,
    Usage,
}

impl Code {
    pub fn as_str(self) -> &'static str {
        match self {
            Code::Lexical => "E001",
            Code::Syntax => "E002",
            Code::UnknownName => "E003",
            Code::FiberOutOfRange => "E004",
            Code::ParityMisuse => "E005",
            Code::DirectionOutOfRange => "E006",
            Code::Duplicate => "E007",
            Code::InvalidDeclaration => "E008",
            Code::Type => "E009",
            Code::TermLimit => "E010",
            Code::Algebra => "E011",
            Code::Usage => "E012",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: Code,
    pub message: String,
    pub span: Span,
}

impl Diagnostic {
    pub fn error(code: Code, span: Span, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            code,
            message: message.into(),
            span,
        }
    }

    /// Multi-line rendering with the offending source line underlined.
    pub fn render(&self, source: &str) -> String {
        let mut out = format!("{self}\n");
        if let Some(line) = source.lines().nth(self.span.line.saturating_sub(1)) {
            let width = line.chars().count();
            let col = self.span.column.max(1).min(width + 1);
            let len = source
                .get(self.span.start..self.span.end)
                .map(|s| s.chars().take_while(|&c| c != '\n').count())
                .unwrap_or(1)
                .max(1);
            let gutter = self.span.line.to_string();
            out.push_str(&format!("{} | {}\n", gutter, line));
            out.push_str(&format!("{} | {}{}\n", " ".repeat(gutter.len()), " ".repeat(col - 1), "^".repeat(len)));
        }
        out
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}[{}] {}:{}: {}",
            self.severity.as_str(),
            self.code.as_str(),
            self.span.line,
            self.span.column,
            self.message
        )
    }
}
