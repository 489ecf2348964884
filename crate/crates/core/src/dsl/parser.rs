use super::lexer::{tokenize, Token, TokenKind};
use super::{ParseError, Program, RESERVED};
use crate::coefficients::{CoeffSpec, Family, RangeType};
use crate::constraints::{Declaration, Relation};
use crate::partition::{BoolExpr, EventTable, MAX_EVENTS};

type PResult<T> = Result<T, ParseError>;

pub(crate) struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    events: Option<EventTable>,
}

impl Parser {
    pub fn new(src: &str) -> PResult<Self> {
        Ok(Parser { tokens: tokenize(src)?, pos: 0, events: None })
    }

    /// Parser for a bare expression over a known event table.
    pub fn with_events(src: &str, events: EventTable) -> PResult<Self> {
        Ok(Parser { tokens: tokenize(src)?, pos: 0, events: Some(events) })
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.kind != TokenKind::Eof {
            self.pos += 1;
        }
        t
    }

    fn error_at(t: &Token, message: impl Into<String>) -> ParseError {
        let token = if t.kind == TokenKind::Eof { "end of input".to_string() } else { t.text.clone() };
        ParseError::new(t.line, t.column, message, token)
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        let t = self.peek();
        let found = if t.kind == TokenKind::Eof { "end of input".to_string() } else { format!("'{}'", t.text) };
        Self::error_at(t, format!("expected {expected}, found {found}"))
    }

    fn expect(&mut self, kind: TokenKind, what: &str) -> PResult<Token> {
        if self.peek().kind == kind {
            Ok(self.next())
        } else {
            Err(self.unexpected(what))
        }
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if &self.peek().kind == kind {
            self.next();
            true
        } else {
            false
        }
    }

    fn table(&self) -> &EventTable {
        self.events.as_ref().expect("events parsed before use")
    }

    pub fn program(mut self, require_query: bool) -> PResult<Program> {
        let mut declarations = Vec::new();
        let mut declaration_lines = Vec::new();
        let mut queries = Vec::new();
        while self.peek().kind != TokenKind::Eof {
            let head = self.peek().clone();
            let TokenKind::Ident(word) = &head.kind else {
                return Err(self.unexpected("a statement"));
            };
            if self.events.is_none() && word != "events" {
                return Err(Self::error_at(&head, "the events statement must come first"));
            }
            match word.as_str() {
                "events" => {
                    if self.events.is_some() {
                        return Err(Self::error_at(&head, "duplicate events statement"));
                    }
                    self.next();
                    let names = self.name_list(false)?;
                    self.events = Some(EventTable::new(names).expect("names validated while parsing"));
                }
                "define" => {
                    self.next();
                    let name = self.known_name()?;
                    self.expect(TokenKind::Equals, "'='")?;
                    let start = self.pos;
                    let expr = self.expr()?;
                    if let Some(t) = self.tokens[start..self.pos].iter().find(|t| t.is_ident(&name)) {
                        return Err(Self::error_at(t, format!("definition of '{name}' refers to itself")));
                    }
                    declarations.push(Declaration::BoolDefine { event: name, expr });
                    declaration_lines.push(head.line);
                }
                "assert" => {
                    self.next();
                    let spec = self.coeff()?;
                    let relation = self.relation(spec.range)?;
                    declarations.push(Declaration::CoeffAssert { spec, relation });
                    declaration_lines.push(head.line);
                }
                "exchangeable" => {
                    self.next();
                    let events = self.name_list(true)?;
                    declarations.push(Declaration::ExchBlock { events });
                    declaration_lines.push(head.line);
                }
                "query" => {
                    self.next();
                    queries.push(self.coeff()?);
                }
                _ => return Err(Self::error_at(&head, format!("unknown statement '{word}'"))),
            }
            self.expect(TokenKind::Semi, "';'")?;
        }
        if require_query && self.events.is_some() && queries.is_empty() {
            return Err(Self::error_at(self.peek(), "program has no query"));
        }
        let Some(events) = self.events else {
            return Err(Self::error_at(self.peek(), "missing events statement"));
        };
        Ok(Program { events, declarations, queries, declaration_lines })
    }

    /// `NAME {, NAME}`; with `known` the names must already be events.
    fn name_list(&mut self, known: bool) -> PResult<Vec<String>> {
        let mut names: Vec<String> = Vec::new();
        loop {
            let t = self.peek().clone();
            let name = if known { self.known_name()? } else { self.fresh_name()? };
            if names.contains(&name) {
                return Err(Self::error_at(&t, format!("'{name}' listed twice")));
            }
            if !known && names.len() == MAX_EVENTS {
                return Err(Self::error_at(&t, format!("more than {MAX_EVENTS} events")));
            }
            names.push(name);
            if !self.eat(&TokenKind::Comma) {
                return Ok(names);
            }
        }
    }

    fn fresh_name(&mut self) -> PResult<String> {
        match &self.peek().kind {
            TokenKind::Ident(s) if RESERVED.contains(&s.as_str()) => {
                Err(Self::error_at(self.peek(), format!("'{s}' is a reserved word")))
            }
            TokenKind::Ident(s) => {
                let s = s.clone();
                self.next();
                Ok(s)
            }
            _ => Err(self.unexpected("an event name")),
        }
    }

    fn known_name(&mut self) -> PResult<String> {
        let t = self.peek().clone();
        let name = self.fresh_name()?;
        if self.table().index_of(&name).is_none() {
            return Err(Self::error_at(&t, format!("unknown event '{name}'")));
        }
        Ok(name)
    }

    fn coeff(&mut self) -> PResult<CoeffSpec> {
        let head = self.peek().clone();
        let symbol = match &head.kind {
            TokenKind::Ident(s) if ["P", "O", "Q", "F", "QS", "FS"].contains(&s.as_str()) => s.clone(),
            _ => return Err(self.unexpected("a coefficient (P, O, Q, F, QS or FS)")),
        };
        self.next();
        self.expect(TokenKind::LParen, "'('")?;
        let a = self.expr()?;
        let sep = self.peek().clone();
        let b = match sep.kind {
            TokenKind::Bar | TokenKind::Colon => {
                self.next();
                Some(self.expr()?)
            }
            _ => None,
        };
        let close = self.peek().clone();
        self.expect(TokenKind::RParen, "')'")?;
        let colon = sep.kind == TokenKind::Colon;
        let (family, range) = match (symbol.as_str(), &b, colon) {
            ("P", None, _) => (Family::P, RangeType::P),
            ("O", None, _) => (Family::O, RangeType::O),
            ("P" | "O", Some(_), true) => {
                return Err(Self::error_at(&sep, format!("{symbol} takes '|', not ':'")));
            }
            ("P", Some(_), false) => (Family::CondP, RangeType::P),
            ("O", Some(_), false) => (Family::CondO, RangeType::O),
            (_, None, _) => {
                return Err(Self::error_at(&close, format!("{symbol} needs two arguments separated by '|' or ':'")));
            }
            (s, Some(_), colon) => {
                let family = match (s.starts_with('Q'), colon) {
                    (true, false) => Family::QOdds,
                    (true, true) => Family::QProb,
                    (false, false) => Family::FOdds,
                    (false, true) => Family::FProb,
                };
                (family, if s.ends_with('S') { RangeType::S } else { RangeType::O })
            }
        };
        Ok(CoeffSpec::new(family, a, b, range).expect("family, arity and range agree"))
    }

    fn relation(&mut self, range: RangeType) -> PResult<Relation> {
        if self.eat(&TokenKind::Equals) {
            let t = self.peek().clone();
            let rel = Relation::Eq(self.number()?);
            rel.validate(range).map_err(|e| Self::error_at(&t, e.to_string()))?;
            return Ok(rel);
        }
        if !self.peek().is_ident("in") {
            return Err(self.unexpected("'=' or 'in'"));
        }
        self.next();
        self.expect(TokenKind::LBracket, "'['")?;
        let lo_tok = self.peek().clone();
        let lo = self.number()?;
        self.expect(TokenKind::Comma, "','")?;
        let hi_tok = self.peek().clone();
        let hi = self.number()?;
        self.expect(TokenKind::RBracket, "']'")?;
        let rel = Relation::In(lo, hi);
        rel.validate(range).map_err(|e| {
            let at = if range.contains(lo) { &hi_tok } else { &lo_tok };
            Self::error_at(at, e.to_string())
        })?;
        Ok(rel)
    }

    fn number(&mut self) -> PResult<f64> {
        let sign = match self.peek().kind {
            TokenKind::Minus => {
                self.next();
                -1.0
            }
            TokenKind::Plus => {
                self.next();
                1.0
            }
            _ => 1.0,
        };
        match &self.peek().kind {
            TokenKind::Number(v) => {
                let v = *v;
                self.next();
                Ok(sign * v)
            }
            TokenKind::Ident(s) if s == "inf" => {
                self.next();
                Ok(sign * f64::INFINITY)
            }
            _ => Err(self.unexpected("a number")),
        }
    }

    pub fn expr(&mut self) -> PResult<BoolExpr> {
        let mut e = self.xor_expr()?;
        while self.peek().is_ident("or") {
            self.next();
            e = e.or(self.xor_expr()?);
        }
        Ok(e)
    }

    fn xor_expr(&mut self) -> PResult<BoolExpr> {
        let mut e = self.and_expr()?;
        while self.eat(&TokenKind::Caret) {
            e = e.xor(self.and_expr()?);
        }
        Ok(e)
    }

    fn and_expr(&mut self) -> PResult<BoolExpr> {
        let mut e = self.unary()?;
        while self.eat(&TokenKind::Amp) {
            e = e.and(self.unary()?);
        }
        Ok(e)
    }

    fn unary(&mut self) -> PResult<BoolExpr> {
        if self.eat(&TokenKind::Minus) {
            return Ok(self.unary()?.not());
        }
        if self.eat(&TokenKind::LParen) {
            let e = self.expr()?;
            self.expect(TokenKind::RParen, "')'")?;
            return Ok(e);
        }
        let t = self.peek().clone();
        match &t.kind {
            TokenKind::Ident(s) if s == "true" => {
                self.next();
                Ok(BoolExpr::True)
            }
            TokenKind::Ident(s) if s == "false" => {
                self.next();
                Ok(BoolExpr::False)
            }
            TokenKind::Ident(s) if !RESERVED.contains(&s.as_str()) => Ok(BoolExpr::event(self.known_name()?)),
            _ => Err(self.unexpected("an event, 'true', 'false', '-' or '('")),
        }
    }

    pub fn finish(&mut self) -> PResult<()> {
        if self.peek().kind == TokenKind::Eof {
            Ok(())
        } else {
            Err(self.unexpected("end of expression"))
        }
    }
}
