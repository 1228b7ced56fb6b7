use std::collections::{BTreeMap, HashSet};

use num::{BigInt, ToPrimitive, Zero};

use super::diagnostic::{Code, Diagnostic, Span};
use super::document::{Definition, ModelDocument};
use super::lexer::{lex, Token, TokenKind};
use crate::brst::{BrstCandidate, BrstError};
use crate::expr::{Component, Expr, ExprError, FieldDecl, FieldId, FieldRole, FieldSystem, MultiIndex, Parity, Rational};
use crate::jetcalc::{dtot_multi, GeneralizedVectorField, HorizontalDensity, JetError};
use crate::models::{LieAlgebraData, ModelError};
use crate::symmetry::{GaugeGenerator, SymmetryError};

const STATEMENTS: &[&str] = &[
    "base", "field", "ghost", "param", "algebra", "lagrangian", "expr", "generator", "gauge", "brst",
];
const RESERVED: &[&str] = &["x", "d", "odd", "even", "for", "dim"];

/// Parses a model document. All diagnostics found are returned on failure.
pub fn parse(source: &str) -> Result<ModelDocument, Vec<Diagnostic>> {
    parse_with_limit(source, usize::MAX)
}

/// Like [`parse`], but rejects any intermediate expression with more than
/// `max_terms` terms (code E010).
pub fn parse_with_limit(source: &str, max_terms: usize) -> Result<ModelDocument, Vec<Diagnostic>> {
    let (tokens, mut diags) = lex(source);
    let mut p = Parser {
        max_terms,
        tokens,
        pos: 0,
        diags: Vec::new(),
        base_dim: None,
        system: None,
        doc_bindings: Vec::new(),
        names: HashSet::new(),
        exprs: BTreeMap::new(),
    };
    p.document();
    diags.append(&mut p.diags);
    if !diags.is_empty() {
        diags.sort_by_key(|d| (d.span.start, d.code));
        return Err(diags);
    }
    let mut doc = ModelDocument::new(p.system.unwrap_or_else(|| FieldSystem::new(base_dim_of(&p.base_dim)).expect("positive")));
    for (name, def) in p.doc_bindings {
        doc.push(name, def);
    }
    Ok(doc)
}

/// Marker for an already reported error.
struct Reported;

type PResult<T> = Result<T, Reported>;

struct Parser {
    max_terms: usize,
    tokens: Vec<Token>,
    pos: usize,
    diags: Vec<Diagnostic>,
    base_dim: Option<(usize, Span)>,
    system: Option<FieldSystem>,
    doc_bindings: Vec<(String, Definition)>,
    names: HashSet<String>,
    /// Expressions bound by `lagrangian` and `expr`, usable by name.
    exprs: BTreeMap<String, Expr>,
}

fn base_dim_of(b: &Option<(usize, Span)>) -> usize {
    b.map(|(n, _)| n).unwrap_or(1)
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek_at(&self, k: usize) -> &TokenKind {
        &self.tokens[(self.pos + k).min(self.tokens.len() - 1)].kind
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&mut self, code: Code, span: Span, message: impl Into<String>) -> Reported {
        self.diags.push(Diagnostic::error(code, span, message));
        Reported
    }

    fn expect(&mut self, kind: TokenKind, what: &str) -> PResult<Token> {
        if self.peek().kind == kind {
            Ok(self.bump())
        } else {
            let t = self.peek().clone();
            Err(self.error(Code::Syntax, t.span, format!("expected {what}, found {}", t.kind.describe())))
        }
    }

    fn at(&self, kind: &TokenKind) -> bool {
        &self.peek().kind == kind
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().kind, TokenKind::Ident(s) if s == kw)
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.at(kind) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn ident(&mut self, what: &str) -> PResult<(String, Span)> {
        match self.peek().kind.clone() {
            TokenKind::Ident(s) => {
                let t = self.bump();
                Ok((s, t.span))
            }
            other => {
                let span = self.peek().span;
                Err(self.error(Code::Syntax, span, format!("expected {what}, found {}", other.describe())))
            }
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<Span> {
        if self.at_keyword(kw) {
            Ok(self.bump().span)
        } else {
            let t = self.peek().clone();
            Err(self.error(Code::Syntax, t.span, format!("expected `{kw}`, found {}", t.kind.describe())))
        }
    }

    fn int(&mut self, what: &str) -> PResult<(BigInt, Span)> {
        match self.peek().kind.clone() {
            TokenKind::Int(n) => {
                let t = self.bump();
                Ok((n, t.span))
            }
            other => {
                let span = self.peek().span;
                Err(self.error(Code::Syntax, span, format!("expected {what}, found {}", other.describe())))
            }
        }
    }

    fn small_int(&mut self, what: &str) -> PResult<(usize, Span)> {
        let (n, span) = self.int(what)?;
        match n.to_usize() {
            Some(v) if v <= u32::MAX as usize => Ok((v, span)),
            _ => Err(self.error(Code::Syntax, span, format!("{what} `{n}` is too large"))),
        }
    }

    /// A one-based index, returned zero-based.
    fn index(&mut self, what: &str) -> PResult<(usize, Span)> {
        let (v, span) = self.small_int(what)?;
        if v == 0 {
            return Err(self.error(Code::Syntax, span, format!("{what} must be at least 1")));
        }
        Ok((v - 1, span))
    }

    /// `INT [ "/" INT ]`.
    fn rational(&mut self) -> PResult<(Rational, Span)> {
        let (n, span) = self.int("a number")?;
        if self.eat(&TokenKind::Slash) {
            let (d, dspan) = self.int("a denominator")?;
            if d.is_zero() {
                return Err(self.error(Code::Syntax, dspan, "zero denominator"));
            }
            return Ok((Rational::new(n, d), span.to(dspan)));
        }
        Ok((Rational::from_integer(n), span))
    }

    fn signed_rational(&mut self) -> PResult<(Rational, Span)> {
        let neg = self.at(&TokenKind::Minus).then(|| self.bump().span);
        let (r, span) = self.rational()?;
        Ok(match neg {
            Some(s) => (-r, s.to(span)),
            None => (r, span),
        })
    }

    fn skip_statement(&mut self) {
        let mut depth = 0usize;
        loop {
            match &self.peek().kind {
                TokenKind::Eof => return,
                TokenKind::LBrace => depth += 1,
                TokenKind::RBrace => {
                    if depth <= 1 {
                        self.bump();
                        if depth == 1 {
                            return;
                        }
                        continue;
                    }
                    depth -= 1;
                }
                TokenKind::Ident(s) if depth == 0 && STATEMENTS.contains(&s.as_str()) => return,
                _ => {}
            }
            self.bump();
        }
    }

    fn document(&mut self) {
        while !self.at(&TokenKind::Eof) {
            let start = self.pos;
            if self.statement().is_err() {
                if self.pos == start {
                    self.bump();
                }
                self.skip_statement();
            }
        }
    }

    fn statement(&mut self) -> PResult<()> {
        let t = self.peek().clone();
        let kw = match &t.kind {
            TokenKind::Ident(s) if STATEMENTS.contains(&s.as_str()) => s.clone(),
            other => {
                return Err(self.error(
                    Code::Syntax,
                    t.span,
                    format!("expected a statement keyword, found {}", other.describe()),
                ))
            }
        };
        self.bump();
        match kw.as_str() {
            "base" => self.base_dim(t.span),
            "field" | "ghost" | "param" => self.field_decl(&kw, t.span),
            "algebra" => self.algebra(),
            "lagrangian" | "expr" => self.expr_binding(&kw),
            "generator" | "gauge" | "brst" => self.block(&kw),
            _ => unreachable!(),
        }
    }

    fn base_dim(&mut self, kw_span: Span) -> PResult<()> {
        self.keyword("dim")?;
        let (n, span) = self.small_int("a base dimension")?;
        if let Some((_, first)) = self.base_dim {
            return Err(self.error(
                Code::Duplicate,
                kw_span,
                format!("base dimension already declared at line {}", first.line),
            ));
        }
        if self.system.is_some() {
            return Err(self.error(
                Code::InvalidDeclaration,
                kw_span,
                "`base dim` must precede all field declarations",
            ));
        }
        if n == 0 {
            return Err(self.error(Code::InvalidDeclaration, span, "base dimension must be positive"));
        }
        self.base_dim = Some((n, kw_span));
        Ok(())
    }

    fn system_mut(&mut self) -> &mut FieldSystem {
        let n = base_dim_of(&self.base_dim);
        self.system.get_or_insert_with(|| FieldSystem::new(n).expect("positive"))
    }

    fn system(&mut self) -> &FieldSystem {
        self.system_mut()
    }

    fn check_new_name(&mut self, name: &str, span: Span) -> PResult<()> {
        if STATEMENTS.contains(&name) || RESERVED.contains(&name) {
            return Err(self.error(Code::InvalidDeclaration, span, format!("`{name}` is reserved")));
        }
        if !self.names.insert(name.to_string()) {
            return Err(self.error(Code::Duplicate, span, format!("`{name}` is already defined")));
        }
        Ok(())
    }

    fn field_decl(&mut self, kind: &str, kw_span: Span) -> PResult<()> {
        let (name, name_span) = self.ident("a field name")?;
        self.expect(TokenKind::LBracket, "`[`")?;
        let mut shape = vec![self.small_int("a fiber size")?];
        while self.eat(&TokenKind::Comma) {
            shape.push(self.small_int("a fiber size")?);
        }
        self.expect(TokenKind::RBracket, "`]`")?;
        let mut parity = None;
        if self.at_keyword("odd") || self.at_keyword("even") {
            let t = self.bump();
            let odd = matches!(&t.kind, TokenKind::Ident(s) if s == "odd");
            parity = Some((Parity::from_odd(odd), t.span));
        }
        let mut ghost_for = None;
        if self.at_keyword("for") {
            let for_span = self.bump().span;
            let (target, span) = self.ident("a parameter name")?;
            if kind != "ghost" {
                return Err(self.error(Code::InvalidDeclaration, for_span, "only ghosts can be paired with a parameter"));
            }
            let Some(id) = self.system().field_by_name(&target) else {
                return Err(self.error(Code::UnknownName, span, format!("unknown field `{target}`")));
            };
            ghost_for = Some((id, span));
        }
        self.check_new_name(&name, name_span)?;
        let role = match kind {
            "field" => FieldRole::Dynamic,
            "ghost" => FieldRole::Ghost,
            _ => FieldRole::Parameter,
        };
        let default = if role == FieldRole::Ghost { Parity::Odd } else { Parity::Even };
        let decl_parity = parity.map(|(p, _)| p).unwrap_or(default);
        if role != FieldRole::Dynamic && decl_parity != default {
            let span = parity.map(|(_, s)| s).unwrap_or(kw_span);
            return Err(self.error(
                Code::ParityMisuse,
                span,
                format!("{kind} `{name}` must be {}", if default.is_odd() { "odd" } else { "even" }),
            ));
        }
        let size_span = name_span;
        let decl = FieldDecl {
            name: name.clone(),
            shape: shape.iter().map(|(s, _)| *s).collect(),
            parity: decl_parity,
            role,
            ghost_for: ghost_for.map(|(id, _)| id),
        };
        match self.system_mut().declare(decl) {
            Ok(_) => Ok(()),
            Err(e) => {
                let span = match (&e, ghost_for) {
                    (ExprError::InvalidGhostPairing(_), Some((_, s))) => s,
                    (ExprError::InvalidShape(_), _) => shape.iter().find(|(s, _)| *s == 0).map(|(_, sp)| *sp).unwrap_or(size_span),
                    _ => name_span,
                };
                Err(self.error(Code::InvalidDeclaration, span, e.to_string()))
            }
        }
    }

    fn algebra(&mut self) -> PResult<()> {
        let (name, name_span) = self.ident("an algebra name")?;
        let mut dim = None;
        if self.eat(&TokenKind::LBracket) {
            let (d, span) = self.small_int("an algebra dimension")?;
            if d == 0 {
                return Err(self.error(Code::Algebra, span, "algebra dimension must be positive"));
            }
            dim = Some(d);
            self.expect(TokenKind::RBracket, "`]`")?;
        }
        self.expect(TokenKind::LBrace, "`{`")?;
        let mut constants: BTreeMap<(usize, usize, usize), (Rational, Span)> = BTreeMap::new();
        let mut metric: BTreeMap<(usize, usize), (Rational, Span)> = BTreeMap::new();
        let mut max_index = 0usize;
        while !self.at(&TokenKind::RBrace) {
            let (kw, kw_span) = self.ident("`c`, `k` or `}`")?;
            let arity = match kw.as_str() {
                "c" => 3,
                "k" => 2,
                _ => {
                    return Err(self.error(
                        Code::Syntax,
                        kw_span,
                        format!("expected `c[r,p,q]` or `k[p,q]`, found `{kw}`"),
                    ))
                }
            };
            self.expect(TokenKind::LBracket, "`[`")?;
            let mut idx = Vec::new();
            for k in 0..arity {
                if k > 0 {
                    self.expect(TokenKind::Comma, "`,`")?;
                }
                let (i, span) = self.index("an algebra index")?;
                if let Some(d) = dim {
                    if i >= d {
                        return Err(self.error(
                            Code::Algebra,
                            span,
                            format!("index {} out of range for dimension {d}", i + 1),
                        ));
                    }
                }
                max_index = max_index.max(i + 1);
                idx.push(i);
            }
            self.expect(TokenKind::RBracket, "`]`")?;
            self.expect(TokenKind::Equals, "`=`")?;
            let (v, vspan) = self.signed_rational()?;
            let span = kw_span.to(vspan);
            let fresh = if arity == 3 {
                constants.insert((idx[0], idx[1], idx[2]), (v, span)).is_none()
            } else {
                metric.insert((idx[0], idx[1]), (v, span)).is_none()
            };
            if !fresh {
                return Err(self.error(Code::Duplicate, span, "entry given twice"));
            }
        }
        self.bump();
        self.check_new_name(&name, name_span)?;
        let m = dim.unwrap_or(max_index.max(1));
        let mut sym_metric = BTreeMap::new();
        for (&(p, q), (v, span)) in &metric {
            if let Some((w, _)) = metric.get(&(q, p)) {
                if w != v {
                    return Err(self.error(Code::Algebra, *span, "metric entries are not symmetric"));
                }
            }
            sym_metric.insert((p, q), v.clone());
            sym_metric.insert((q, p), v.clone());
        }
        let plain: BTreeMap<_, _> = constants.iter().map(|(k, (v, _))| (*k, v.clone())).collect();
        match LieAlgebraData::antisymmetrized(m, &plain, (!metric.is_empty()).then_some(&sym_metric)) {
            Ok(data) => {
                self.doc_bindings.push((name, Definition::Algebra(data)));
                Ok(())
            }
            Err(e) => {
                let span = match &e {
                    ModelError::NotAntisymmetric { r, p, q } => constants
                        .get(&(*r, *p, *q))
                        .or_else(|| constants.get(&(*r, *q, *p)))
                        .map(|(_, s)| *s)
                        .unwrap_or(name_span),
                    _ => name_span,
                };
                Err(self.error(Code::Algebra, span, e.to_string()))
            }
        }
    }

    fn expr_binding(&mut self, kw: &str) -> PResult<()> {
        let (name, name_span) = self.ident("a name")?;
        self.expect(TokenKind::Equals, "`=`")?;
        let (e, span) = self.expr()?;
        self.check_new_name(&name, name_span)?;
        let def = if kw == "lagrangian" {
            let sys = self.system().clone();
            match HorizontalDensity::new(&sys, e.clone()) {
                Ok(l) => Definition::Lagrangian(l),
                Err(JetError::OddDensity) => {
                    return Err(self.error(Code::ParityMisuse, span, "a Lagrangian density must be even"))
                }
                Err(other) => return Err(self.error(Code::Type, span, other.to_string())),
            }
        } else {
            Definition::Expr(e.clone())
        };
        self.exprs.insert(name.clone(), e);
        self.doc_bindings.push((name, def));
        Ok(())
    }

    fn block(&mut self, kw: &str) -> PResult<()> {
        let (name, name_span) = self.ident("a name")?;
        self.expect(TokenKind::LBrace, "`{`")?;
        let mut comps: BTreeMap<Component, Expr> = BTreeMap::new();
        while !self.at(&TokenKind::RBrace) {
            let (target, tspan) = self.target()?;
            self.expect(TokenKind::Arrow, "`=>`")?;
            let (e, _) = self.expr()?;
            if comps.insert(target, e).is_some() {
                return Err(self.error(Code::Duplicate, tspan, "component assigned twice"));
            }
        }
        self.bump();
        self.check_new_name(&name, name_span)?;
        let sys = self.system().clone();
        let def = match kw {
            "generator" => match GeneralizedVectorField::new(&sys, comps) {
                Ok(v) => Definition::Generator(v),
                Err(e) => return Err(self.jet_error(e, name_span)),
            },
            "gauge" => match GaugeGenerator::from_components(&sys, &comps) {
                Ok(g) => Definition::Gauge(g),
                Err(SymmetryError::Jet(e)) => return Err(self.jet_error(e, name_span)),
                Err(e) => return Err(self.error(Code::Type, name_span, e.to_string())),
            },
            _ => {
                let mut dynamic = BTreeMap::new();
                let mut ghost = BTreeMap::new();
                for (c, e) in comps {
                    match sys.role(c.field) {
                        FieldRole::Dynamic => dynamic.insert(c, e),
                        FieldRole::Ghost => ghost.insert(c, e),
                        FieldRole::Parameter => {
                            return Err(self.error(
                                Code::Type,
                                name_span,
                                format!("a BRST candidate cannot act on parameter `{}`", sys.field(c.field).name),
                            ))
                        }
                    };
                }
                match BrstCandidate::new(&sys, dynamic, ghost) {
                    Ok(b) => Definition::Brst(b),
                    Err(BrstError::Jet(e)) => return Err(self.jet_error(e, name_span)),
                    Err(BrstError::EvenCandidate) => {
                        return Err(self.error(Code::ParityMisuse, name_span, "a BRST candidate must be odd"))
                    }
                    Err(e) => return Err(self.error(Code::Type, name_span, e.to_string())),
                }
            }
        };
        self.doc_bindings.push((name, def));
        Ok(())
    }

    fn jet_error(&mut self, e: JetError, span: Span) -> Reported {
        let code = match e {
            JetError::MixedComponent(_) | JetError::NonUniformParity | JetError::OddDensity => Code::ParityMisuse,
            _ => Code::Type,
        };
        let msg = match &e {
            JetError::MixedComponent(c) => {
                let sys = self.system().clone();
                format!("component {} has mixed parity", crate::expr::format_component(&sys, *c))
            }
            _ => e.to_string(),
        };
        self.error(code, span, msg)
    }

    /// `name[i,j]` without jet indices.
    fn target(&mut self) -> PResult<(Component, Span)> {
        let (name, span) = self.ident("a field component")?;
        let field = self.lookup_field(&name, span)?;
        self.expect(TokenKind::LBracket, "`[`")?;
        let tuple = self.fiber_tuple()?;
        if self.at(&TokenKind::Semicolon) {
            let s = self.peek().span;
            return Err(self.error(Code::Type, s, "generator targets are field components without jet indices"));
        }
        let end = self.expect(TokenKind::RBracket, "`]`")?.span;
        let c = self.component(field, &name, &tuple, span.to(end))?;
        Ok((c, span.to(end)))
    }

    fn lookup_field(&mut self, name: &str, span: Span) -> PResult<FieldId> {
        match self.system().field_by_name(name) {
            Some(id) => Ok(id),
            None => Err(self.error(Code::UnknownName, span, format!("unknown field `{name}`"))),
        }
    }

    fn fiber_tuple(&mut self) -> PResult<Vec<(usize, Span)>> {
        let mut tuple = vec![self.index("a fiber index")?];
        while self.eat(&TokenKind::Comma) {
            tuple.push(self.index("a fiber index")?);
        }
        Ok(tuple)
    }

    fn component(&mut self, field: FieldId, name: &str, tuple: &[(usize, Span)], span: Span) -> PResult<Component> {
        let shape = self.system().field(field).shape.clone();
        if tuple.len() != shape.len() {
            return Err(self.error(
                Code::FiberOutOfRange,
                span,
                format!("field `{name}` takes {} fiber indices, found {}", shape.len(), tuple.len()),
            ));
        }
        for ((i, s), size) in tuple.iter().zip(&shape) {
            if i >= size {
                return Err(self.error(
                    Code::FiberOutOfRange,
                    *s,
                    format!("fiber index {} out of range for `{name}` (size {size})", i + 1),
                ));
            }
        }
        let idx: Vec<usize> = tuple.iter().map(|(i, _)| *i).collect();
        Ok(self.system().component(field, &idx).expect("checked"))
    }

    fn directions(&mut self, stop: &TokenKind) -> PResult<Vec<usize>> {
        let n = base_dim_of(&self.base_dim);
        let mut dirs = Vec::new();
        while !self.at(stop) {
            let (d, span) = self.index("a base direction")?;
            if d >= n {
                return Err(self.error(
                    Code::DirectionOutOfRange,
                    span,
                    format!("base direction {} out of range for base dimension {n}", d + 1),
                ));
            }
            dirs.push(d);
        }
        Ok(dirs)
    }

    fn limit(&mut self, e: Expr, span: Span) -> PResult<Expr> {
        if e.len() > self.max_terms {
            let msg = format!("expression has {} terms, more than the limit {}", e.len(), self.max_terms);
            return Err(self.error(Code::TermLimit, span, msg));
        }
        Ok(e)
    }

    fn expr(&mut self) -> PResult<(Expr, Span)> {
        let start = self.peek().span;
        let mut acc = if self.eat(&TokenKind::Minus) {
            -self.product()?.0
        } else {
            self.eat(&TokenKind::Plus);
            self.product()?.0
        };
        loop {
            if self.eat(&TokenKind::Plus) {
                acc += self.product()?.0;
            } else if self.eat(&TokenKind::Minus) {
                acc -= self.product()?.0;
            } else {
                break;
            }
        }
        let end = self.tokens[self.pos.saturating_sub(1)].span;
        let span = start.to(end);
        Ok((self.limit(acc, span)?, span))
    }

    fn product(&mut self) -> PResult<(Expr, Span)> {
        let (mut acc, start) = self.unary()?;
        let mut span = start;
        while self.eat(&TokenKind::Star) {
            let (f, s) = self.unary()?;
            span = span.to(s);
            acc = self.limit(&acc * &f, span)?;
        }
        Ok((acc, span))
    }

    fn unary(&mut self) -> PResult<(Expr, Span)> {
        if self.at(&TokenKind::Minus) {
            let s = self.bump().span;
            let (e, span) = self.unary()?;
            return Ok((-e, s.to(span)));
        }
        self.power()
    }

    fn power(&mut self) -> PResult<(Expr, Span)> {
        let (base, span) = self.atom()?;
        if self.eat(&TokenKind::Caret) {
            let (k, kspan) = self.small_int("an exponent")?;
            if k > 1000 {
                return Err(self.error(Code::Syntax, kspan, "exponent too large"));
            }
            let span = span.to(kspan);
            let mut acc = Expr::one();
            for _ in 0..k {
                acc = self.limit(&acc * &base, span)?;
            }
            return Ok((acc, span));
        }
        Ok((base, span))
    }

    fn atom(&mut self) -> PResult<(Expr, Span)> {
        let t = self.peek().clone();
        match &t.kind {
            TokenKind::Int(_) => {
                let (r, span) = self.rational()?;
                Ok((Expr::constant(r), span))
            }
            TokenKind::LParen => {
                self.bump();
                let (e, _) = self.expr()?;
                let end = self.expect(TokenKind::RParen, "`)`")?.span;
                Ok((e, t.span.to(end)))
            }
            TokenKind::Ident(name) if name == "x" => {
                self.bump();
                self.expect(TokenKind::LBracket, "`[`")?;
                let dirs = self.directions(&TokenKind::RBracket)?;
                let end = self.expect(TokenKind::RBracket, "`]`")?.span;
                if dirs.len() != 1 {
                    return Err(self.error(Code::Syntax, t.span.to(end), "a base coordinate takes one index"));
                }
                Ok((Expr::base_coordinate(dirs[0]), t.span.to(end)))
            }
            TokenKind::Ident(name) if name == "d" && matches!(self.peek_at(1), TokenKind::LParen) => {
                self.bump();
                self.bump();
                let dirs = self.directions(&TokenKind::Semicolon)?;
                self.expect(TokenKind::Semicolon, "`;`")?;
                let (e, _) = self.expr()?;
                let end = self.expect(TokenKind::RParen, "`)`")?.span;
                let n = base_dim_of(&self.base_dim);
                let mi = MultiIndex::from_entries(n, &dirs).expect("checked directions");
                let span = t.span.to(end);
                Ok((self.limit(dtot_multi(&e, &mi), span)?, span))
            }
            TokenKind::Ident(name) => {
                let name = name.clone();
                self.bump();
                if !self.at(&TokenKind::LBracket) {
                    if let Some(e) = self.exprs.get(&name) {
                        return Ok((e.clone(), t.span));
                    }
                    if self.system().field_by_name(&name).is_some() {
                        let s = self.peek().span;
                        return Err(self.error(Code::Syntax, s, format!("expected `[` after field `{name}`")));
                    }
                    return Err(self.error(Code::UnknownName, t.span, format!("unknown name `{name}`")));
                }
                let field = self.lookup_field(&name, t.span)?;
                self.bump();
                let tuple = self.fiber_tuple()?;
                let dirs = if self.eat(&TokenKind::Semicolon) {
                    self.directions(&TokenKind::RBracket)?
                } else {
                    Vec::new()
                };
                let end = self.expect(TokenKind::RBracket, "`]`")?.span;
                let span = t.span.to(end);
                let c = self.component(field, &name, &tuple, span)?;
                let n = base_dim_of(&self.base_dim);
                let mi = MultiIndex::from_entries(n, &dirs).expect("checked directions");
                let v = self.system().jet_var(c, mi).expect("valid component");
                Ok((Expr::var(v), span))
            }
            other => Err(self.error(
                Code::Syntax,
                t.span,
                format!("expected an expression, found {}", other.describe()),
            )),
        }
    }
}
