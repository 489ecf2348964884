//! The `.rel` program format.
//!
//! ```text
//! events T, A;
//! assert P(T|A) = 0.003;
//! assert P(T|-A) = 0.001;
//! query Q(T:A);
//! ```
//!
//! Expressions use `-` (not), `&` (and), `^` (xor) and `or`, binding in that
//! order. Inside a coefficient `|` and `:` separate the two arguments.

mod lexer;
mod parser;

use std::fmt;

use crate::coefficients::CoeffSpec;
use crate::constraints::{Declaration, Relation};
use crate::partition::{BoolExpr, EventTable};

use parser::Parser;

pub const RESERVED: &[&str] =
    &["events", "define", "assert", "exchangeable", "query", "in", "or", "true", "false", "inf"];

/// Syntax or name-resolution error, positioned at the offending token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based.
    pub line: usize,
    /// 1-based, in characters.
    pub column: usize,
    pub message: String,
    pub token: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>, token: impl ToString) -> Self {
        ParseError { line, column, message: message.into(), token: token.to_string() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone)]
pub struct Program {
    pub events: EventTable,
    pub declarations: Vec<Declaration>,
    pub queries: Vec<CoeffSpec>,
    /// Source line of each declaration, for diagnostics. Ignored by `==`.
    pub declaration_lines: Vec<usize>,
}

impl PartialEq for Program {
    fn eq(&self, other: &Self) -> bool {
        self.events == other.events && self.declarations == other.declarations && self.queries == other.queries
    }
}

/// Parses a program; at least one query is required.
pub fn parse(src: &str) -> Result<Program, ParseError> {
    Parser::new(src)?.program(true)
}

/// Parses a program that may have no queries, as `check` accepts.
pub fn parse_declarations(src: &str) -> Result<Program, ParseError> {
    Parser::new(src)?.program(false)
}

/// Parses a standalone boolean expression over `events`.
pub fn parse_expr(src: &str, events: &EventTable) -> Result<BoolExpr, ParseError> {
    let mut p = Parser::with_events(src, events.clone())?;
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

fn write_number(f: &mut fmt::Formatter<'_>, v: f64) -> fmt::Result {
    // Display for f64 is the shortest text that reads back to the same value
    write!(f, "{v}")
}

/// One declaration as a statement, without the trailing newline.
pub struct DeclarationDisplay<'a>(pub &'a Declaration);

impl fmt::Display for DeclarationDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Declaration::CoeffAssert { spec, relation } => {
                write!(f, "assert {spec} ")?;
                match *relation {
                    Relation::Eq(v) => {
                        write!(f, "= ")?;
                        write_number(f, v)?;
                    }
                    Relation::In(lo, hi) => {
                        write!(f, "in [")?;
                        write_number(f, lo)?;
                        write!(f, ", ")?;
                        write_number(f, hi)?;
                        write!(f, "]")?;
                    }
                }
                write!(f, ";")
            }
            Declaration::BoolDefine { event, expr } => write!(f, "define {event} = {expr};"),
            Declaration::ExchBlock { events } => write!(f, "exchangeable {};", events.join(", ")),
        }
    }
}

/// Canonical source text: events, declarations in order, then queries.
impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "events {};", self.events.names().join(", "))?;
        for d in &self.declarations {
            writeln!(f, "{}", DeclarationDisplay(d))?;
        }
        for q in &self.queries {
            writeln!(f, "query {q};")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{Family, RangeType};

    #[test]
    fn minimal_program() {
        let p = parse("events A, B; assert P(A) = 0.3; query Q(A|B);").unwrap();
        assert_eq!(p.events.names(), ["A", "B"]);
        assert_eq!(p.declarations.len(), 1);
        assert_eq!(p.queries.len(), 1);
        assert_eq!(p.queries[0].family, Family::QOdds);
    }

    #[test]
    fn screening_program() {
        let p = parse("events T, A; assert P(T|A) = 0.003; assert P(T|-A) = 0.001; query Q(T:A);").unwrap();
        let Declaration::CoeffAssert { spec, relation } = &p.declarations[1] else { panic!() };
        assert_eq!(spec.family, Family::CondP);
        assert_eq!(spec.b, Some(BoolExpr::event("A").not()));
        assert_eq!(*relation, Relation::Eq(0.001));
        assert_eq!(p.queries[0].family, Family::QProb);
    }

    #[test]
    fn unknown_event_is_positioned() {
        let e = parse("events A; assert P(B) = 0.1;").unwrap_err();
        assert_eq!((e.line, e.column), (1, 20));
        assert_eq!(e.token, "B");
        assert!(e.message.contains("unknown event 'B'"));
    }

    #[test]
    fn families_and_separators() {
        let fam = |s: &str| {
            let q = &parse(&format!("events A, B; query {s};")).unwrap().queries[0];
            (q.family, q.range)
        };
        assert_eq!(fam("P(A)"), (Family::P, RangeType::P));
        assert_eq!(fam("O(A|B)"), (Family::CondO, RangeType::O));
        assert_eq!(fam("QS(A|B)"), (Family::QOdds, RangeType::S));
        assert_eq!(fam("F(A:B)"), (Family::FProb, RangeType::O));
        assert_eq!(fam("FS(A|B)"), (Family::FOdds, RangeType::S));
        assert!(parse("events A, B; query P(A:B);").is_err());
        let e = parse("events A, B; query Q(A);").unwrap_err();
        assert_eq!(e.column, 23);
    }

    #[test]
    fn precedence() {
        let t = EventTable::new(["A", "B", "C"]).unwrap();
        let e = parse_expr("-A & B ^ C or A", &t).unwrap();
        let a = BoolExpr::event("A");
        let expected = a.clone().not().and(BoolExpr::event("B")).xor(BoolExpr::event("C")).or(a);
        assert_eq!(e, expected);
        assert_eq!(parse_expr("A & (B or C)", &t).unwrap().to_string(), "A&(B or C)");
        assert!(parse_expr("A B", &t).is_err());
    }

    #[test]
    fn statement_rules() {
        assert!(parse("events A;").is_err());
        assert!(parse_declarations("events A;").is_ok());
        assert!(parse("query P(A); events A;").is_err());
        assert!(parse("events A; events B; query P(A);").is_err());
        assert!(parse("events A, A; query P(A);").is_err());
        assert!(parse("events A, in; query P(A);").is_err());
        let e = parse("events A, B; define A = A & B; query P(A);").unwrap_err();
        assert_eq!(e.column, 25);
        assert!(parse("events A; assert P(A) = 1.5; query P(A);").is_err());
        assert!(parse("events A; assert O(A) in [2, inf]; query P(A);").is_ok());
        assert!(parse("events A, B; assert QS(A|B) = -0.5; query P(A);").is_ok());
    }

    #[test]
    fn display_round_trips() {
        let src = "events A, B, C;\n# comment\ndefine C = A & -B;\nassert O(A|B) in [0.5, inf];\nexchangeable A, B;\nquery FS(A or B:C);\n";
        let p = parse(src).unwrap();
        let text = p.to_string();
        assert_eq!(parse(&text).unwrap(), p);
    }
}
