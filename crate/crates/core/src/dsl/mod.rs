//! Text format for field systems, Lagrangians, generators and BRST
//! candidates.
//!
//! ```text
//! base dim 1
//! field y[1]
//! lagrangian L = 1/2 * y[1;1]^2
//! ```
//!
//! Indices are one-based in text. A jet variable is written
//! `name[i,j;λ μ]`: fiber indices before the `;`, base directions of the
//! multi-index after it.

mod builtin;
mod diagnostic;
mod document;
mod lexer;
mod parser;
mod printer;

pub use builtin::{yang_mills_document, yang_mills_document_with_coefficient};
pub use diagnostic::{Code, Diagnostic, Severity, Span};
pub use document::{Binding, Definition, DefinitionKind, ModelDocument};
pub use lexer::{lex, Token, TokenKind};
pub use parser::{parse, parse_with_limit};
pub use printer::{print, print_definition};
