use super::ParseError;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum TokenKind {
    Ident(String),
    Number(f64),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Equals,
    Bar,
    Colon,
    Minus,
    Plus,
    Amp,
    Caret,
    Eof,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub line: usize,
    pub column: usize,
}

impl Token {
    pub fn is_ident(&self, word: &str) -> bool {
        matches!(&self.kind, TokenKind::Ident(s) if s == word)
    }
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    src: &'a str,
    line: usize,
    column: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, c)| c)
    }

    fn offset(&mut self) -> usize {
        self.chars.peek().map_or(self.src.len(), |&(i, _)| i)
    }

    fn bump(&mut self) -> Option<char> {
        let (_, c) = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn eat_while(&mut self, f: impl Fn(char) -> bool) {
        while self.peek().is_some_and(&f) {
            self.bump();
        }
    }
}

/// Splits `src` into tokens. Lines and columns are 1-based and count
/// characters, not bytes.
pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut cur = Cursor { chars: src.char_indices().peekable(), src, line: 1, column: 1 };
    let mut out = Vec::new();
    loop {
        cur.eat_while(char::is_whitespace);
        let (line, column) = (cur.line, cur.column);
        let start = cur.offset();
        let Some(c) = cur.peek() else {
            out.push(Token { kind: TokenKind::Eof, text: String::new(), line, column });
            return Ok(out);
        };
        if c == '#' {
            cur.eat_while(|c| c != '\n');
            continue;
        }
        let kind = if c.is_ascii_alphabetic() || c == '_' {
            cur.eat_while(|c| c.is_ascii_alphanumeric() || c == '_');
            TokenKind::Ident(src[start..cur.offset()].to_string())
        } else if c.is_ascii_digit() || c == '.' {
            lex_number(&mut cur, start, line, column)?
        } else {
            cur.bump();
            match c {
                '(' => TokenKind::LParen,
                ')' => TokenKind::RParen,
                '[' => TokenKind::LBracket,
                ']' => TokenKind::RBracket,
                ',' => TokenKind::Comma,
                ';' => TokenKind::Semi,
                '=' => TokenKind::Equals,
                '|' => TokenKind::Bar,
                ':' => TokenKind::Colon,
                '-' => TokenKind::Minus,
                '+' => TokenKind::Plus,
                '&' => TokenKind::Amp,
                '^' => TokenKind::Caret,
                other => {
                    return Err(ParseError::new(line, column, format!("unexpected character '{other}'"), other));
                }
            }
        };
        out.push(Token { kind, text: src[start..cur.offset()].to_string(), line, column });
    }
}

fn lex_number(cur: &mut Cursor, start: usize, line: usize, column: usize) -> Result<TokenKind, ParseError> {
    let digit = |c: char| c.is_ascii_digit();
    cur.eat_while(digit);
    if cur.peek() == Some('.') {
        cur.bump();
        cur.eat_while(digit);
    }
    if matches!(cur.peek(), Some('e' | 'E')) {
        cur.bump();
        if matches!(cur.peek(), Some('+' | '-')) {
            cur.bump();
        }
        cur.eat_while(digit);
    }
    // swallow trailing identifier characters so `1.5x` is one bad token
    cur.eat_while(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.');
    let text = &cur.src[start..cur.offset()];
    match text.parse::<f64>() {
        Ok(v) if v.is_finite() && text.chars().any(digit) => Ok(TokenKind::Number(v)),
        _ => Err(ParseError::new(line, column, format!("malformed number '{text}'"), text)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<TokenKind> {
        tokenize(src).unwrap().into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn punctuation_and_words() {
        assert_eq!(
            kinds("query Q(A|-B);"),
            vec![
                TokenKind::Ident("query".into()),
                TokenKind::Ident("Q".into()),
                TokenKind::LParen,
                TokenKind::Ident("A".into()),
                TokenKind::Bar,
                TokenKind::Minus,
                TokenKind::Ident("B".into()),
                TokenKind::RParen,
                TokenKind::Semi,
                TokenKind::Eof,
            ]
        );
    }

    #[test]
    fn numbers() {
        assert_eq!(kinds("0.003 .5 1e-3 2E+2 7"), vec![
            TokenKind::Number(0.003),
            TokenKind::Number(0.5),
            TokenKind::Number(1e-3),
            TokenKind::Number(200.0),
            TokenKind::Number(7.0),
            TokenKind::Eof,
        ]);
    }

    #[test]
    fn positions_skip_comments_and_crlf() {
        let toks = tokenize("events A; # note\r\n  query P(A);").unwrap();
        let q = toks.iter().find(|t| t.is_ident("query")).unwrap();
        assert_eq!((q.line, q.column), (2, 3));
    }

    #[test]
    fn bad_inputs() {
        let e = tokenize("events A;\nassert P(A) = 1.2.3;").unwrap_err();
        assert_eq!((e.line, e.column), (2, 15));
        let e = tokenize("events A $").unwrap_err();
        assert_eq!((e.line, e.column, e.token.as_str()), (1, 10, "$"));
        assert!(tokenize("assert P(A) = .;").is_err());
        assert!(tokenize("1e").is_err());
    }
}
