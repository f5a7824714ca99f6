//! The operator description language: lexer, parser, pretty-printer and
//! analyzer behind the `opspec` binary.
//!
//! ```text
//! let ST = diag { 0: 1, 1: inf };
//! let TS = diag { 1: inf };
//! print poles(ST);
//! assert drazin_spectrum(ST) == drazin_spectrum(TS);
//! ```

pub mod analyze;
pub mod ast;
pub mod lexer;
pub mod parser;

pub use analyze::{analyze, analyze_program, drazin_matrix, AnalyzeError, Format, Report};
pub use ast::Program;
pub use parser::{parse, ParseError};
