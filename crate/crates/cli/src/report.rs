use gradedjets::dsl::{Code, Diagnostic, Severity, Span};
use gradedjets::expr::{format_component, Component, Expr, FieldSystem};
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Fail,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Fail => "fail",
            Status::Error => "error",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }
    }
}

/// A diagnostic, possibly without a source location (usage errors).
#[derive(Clone, Debug)]
pub struct Issue {
    pub code: Code,
    pub message: String,
    pub span: Option<Span>,
}

impl From<Diagnostic> for Issue {
    fn from(d: Diagnostic) -> Self {
        Issue {
            code: d.code,
            message: d.message,
            span: Some(d.span),
        }
    }
}

impl Issue {
    pub fn usage(code: Code, message: impl Into<String>) -> Self {
        Issue {
            code,
            message: message.into(),
            span: None,
        }
    }

    fn to_json(&self) -> Value {
        let span = match self.span {
            Some(s) => json!({"start": s.start, "end": s.end, "line": s.line, "column": s.column}),
            None => Value::Null,
        };
        json!({
            "severity": Severity::Error.as_str(),
            "code": self.code.as_str(),
            "message": self.message,
            "span": span,
        })
    }

    fn render(&self, source: Option<&str>) -> String {
        match (self.span, source) {
            (Some(span), Some(src)) => Diagnostic::error(self.code, span, self.message.clone()).render(src),
            _ => format!("error[{}]: {}\n", self.code.as_str(), self.message),
        }
    }
}

/// Command report, rendered as text or JSON.
#[derive(Debug)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub result: Map<String, Value>,
    pub lines: Vec<String>,
    pub residuals: Vec<(String, String)>,
    pub solution_space_dim: Option<usize>,
    pub issues: Vec<Issue>,
    /// Printed verbatim in text mode in place of the summary.
    pub raw_text: Option<String>,
}

impl Report {
    pub fn new(command: &str, status: Status) -> Self {
        Report {
            command: command.to_string(),
            status,
            result: Map::new(),
            lines: Vec::new(),
            residuals: Vec::new(),
            solution_space_dim: None,
            issues: Vec::new(),
            raw_text: None,
        }
    }

    pub fn error(command: &str, issues: Vec<Issue>) -> Self {
        let mut r = Report::new(command, Status::Error);
        r.issues = issues;
        r
    }

    pub fn insert(&mut self, key: &str, value: Value) {
        self.result.insert(key.to_string(), value);
    }

    pub fn json(&self) -> String {
        let residuals: Vec<Value> = self
            .residuals
            .iter()
            .map(|(c, e)| json!({"component": c, "expr": e}))
            .collect();
        let mut top = Map::new();
        top.insert("command".into(), json!(self.command));
        top.insert("status".into(), json!(self.status.as_str()));
        top.insert("result".into(), Value::Object(self.result.clone()));
        top.insert("residuals".into(), Value::Array(residuals));
        if let Some(d) = self.solution_space_dim {
            top.insert("solution_space_dim".into(), json!(d));
        }
        top.insert(
            "diagnostics".into(),
            Value::Array(self.issues.iter().map(Issue::to_json).collect()),
        );
        let mut out = serde_json::to_string_pretty(&Value::Object(top)).expect("serializable");
        out.push('\n');
        out
    }

    /// Text rendering: (stdout, stderr).
    pub fn text(&self, source: Option<&str>) -> (String, String) {
        let err: String = self.issues.iter().map(|i| i.render(source)).collect();
        if self.status == Status::Error {
            return (String::new(), err);
        }
        if let Some(raw) = &self.raw_text {
            return (raw.clone(), err);
        }
        let mut out = format!("{}: {}\n", self.command, self.status.as_str());
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        if let Some(d) = self.solution_space_dim {
            out.push_str(&format!("solution space dimension: {d}\n"));
        }
        for (c, e) in &self.residuals {
            out.push_str(&format!("residual {c} = {e}\n"));
        }
        (out, err)
    }
}

/// Formats expressions, refusing any above the term cap.
pub struct Printer<'a> {
    pub system: &'a FieldSystem,
    pub max_terms: usize,
    pub overflow: Option<usize>,
}

impl<'a> Printer<'a> {
    pub fn new(system: &'a FieldSystem, max_terms: usize) -> Self {
        Printer {
            system,
            max_terms,
            overflow: None,
        }
    }

    pub fn expr(&mut self, e: &Expr) -> String {
        if e.len() > self.max_terms {
            self.overflow = Some(self.overflow.unwrap_or(0).max(e.len()));
            return String::new();
        }
        e.display(self.system).to_string()
    }

    pub fn component(&self, c: Component) -> String {
        format_component(self.system, c)
    }

    /// `[{component, expr}]` for a component map.
    pub fn entries<'e>(&mut self, items: impl IntoIterator<Item = (&'e Component, &'e Expr)>) -> Vec<(String, String)> {
        items
            .into_iter()
            .map(|(c, e)| (self.component(*c), self.expr(e)))
            .collect()
    }

    /// Turns an overflowing report into an E010 error.
    pub fn finish(&self, report: Report) -> Report {
        match self.overflow {
            Some(n) => Report::error(
                &report.command,
                vec![Issue::usage(
                    Code::TermLimit,
                    format!("result has {n} terms, more than the limit {}", self.max_terms),
                )],
            ),
            None => report,
        }
    }
}

pub fn entries_json(entries: &[(String, String)]) -> Value {
    Value::Array(
        entries
            .iter()
            .map(|(c, e)| json!({"component": c, "expr": e}))
            .collect(),
    )
}
