//! Tokenizer for `.case` files.

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum TokenKind {
    Word(String),
    Number(f64),
    Str(String),
    LBrace,
    RBrace,
    Comma,
    Eof,
}

impl TokenKind {
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Word(w) => format!("`{w}`"),
            TokenKind::Number(_) => "a number".into(),
            TokenKind::Str(_) => "a string".into(),
            TokenKind::LBrace => "`{`".into(),
            TokenKind::RBrace => "`}`".into(),
            TokenKind::Comma => "`,`".into(),
            TokenKind::Eof => "end of file".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Token {
    pub kind: TokenKind,
    /// Byte range in the source.
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, PartialEq)]
pub(crate) struct LexError {
    pub code: &'static str,
    pub message: String,
    pub start: usize,
    pub end: usize,
}

pub(crate) fn tokenize(source: &str) -> Result<Vec<Token>, LexError> {
    let mut lexer = Lexer {
        src: source,
        pos: 0,
    };
    let mut tokens = Vec::new();
    loop {
        let token = lexer.next_token()?;
        let done = token.kind == TokenKind::Eof;
        tokens.push(token);
        if done {
            return Ok(tokens);
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl Lexer<'_> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.src[self.pos..].chars().nth(n)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c == '#' {
                while let Some(c) = self.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn next_token(&mut self) -> Result<Token, LexError> {
        self.skip_trivia();
        let start = self.pos;
        let Some(c) = self.peek() else {
            return Ok(Token {
                kind: TokenKind::Eof,
                start,
                end: start,
            });
        };
        let kind = match c {
            '{' => {
                self.bump();
                TokenKind::LBrace
            }
            '}' => {
                self.bump();
                TokenKind::RBrace
            }
            ',' => {
                self.bump();
                TokenKind::Comma
            }
            '"' => self.string()?,
            c if c.is_ascii_digit() => self.number()?,
            '-' if self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) => self.number()?,
            c if c.is_ascii_alphabetic() || c == '_' => {
                while self
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
                {
                    self.bump();
                }
                TokenKind::Word(self.src[start..self.pos].to_string())
            }
            other => {
                self.bump();
                return Err(LexError {
                    code: "UNEXPECTED_CHARACTER",
                    message: format!("unexpected character {other:?}"),
                    start,
                    end: self.pos,
                });
            }
        };
        Ok(Token {
            kind,
            start,
            end: self.pos,
        })
    }

    fn digits(&mut self) -> usize {
        let mut n = 0;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
            n += 1;
        }
        n
    }

    fn number(&mut self) -> Result<TokenKind, LexError> {
        let start = self.pos;
        if self.peek() == Some('-') {
            self.bump();
        }
        self.digits();
        let mut ok = true;
        if self.peek() == Some('.') {
            self.bump();
            ok &= self.digits() > 0;
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            self.bump();
            if matches!(self.peek(), Some('+' | '-')) {
                self.bump();
            }
            ok &= self.digits() > 0;
        }
        // swallow trailing junk such as `5x` or `1.2.3` into one bad token
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == '.' || c == '_')
        {
            self.bump();
            ok = false;
        }
        let text = &self.src[start..self.pos];
        match text.parse::<f64>() {
            Ok(v) if ok && !v.is_nan() => Ok(TokenKind::Number(v)),
            _ => Err(LexError {
                code: "INVALID_NUMBER",
                message: format!("`{text}` is not a valid number"),
                start,
                end: self.pos,
            }),
        }
    }

    fn string(&mut self) -> Result<TokenKind, LexError> {
        let start = self.pos;
        self.bump();
        let mut out = String::new();
        loop {
            let at = self.pos;
            match self.peek() {
                None | Some('\n') => {
                    return Err(LexError {
                        code: "UNTERMINATED_STRING",
                        message: "string is not closed before the end of the line".into(),
                        start,
                        end: self.pos,
                    })
                }
                Some('"') => {
                    self.bump();
                    return Ok(TokenKind::Str(out));
                }
                Some('\\') => {
                    self.bump();
                    let escaped = match self.bump() {
                        Some('"') => '"',
                        Some('\\') => '\\',
                        Some('n') => '\n',
                        Some('t') => '\t',
                        Some('r') => '\r',
                        Some('u') => self.unicode_escape(at)?,
                        _ => {
                            return Err(LexError {
                                code: "INVALID_ESCAPE",
                                message: "unknown escape sequence".into(),
                                start: at,
                                end: self.pos,
                            })
                        }
                    };
                    out.push(escaped);
                }
                Some(c) => {
                    self.bump();
                    out.push(c);
                }
            }
        }
    }

    /// `\u{XXXX}` with the `\u` already consumed.
    fn unicode_escape(&mut self, start: usize) -> Result<char, LexError> {
        let err = |end| LexError {
            code: "INVALID_ESCAPE",
            message: "expected `\\u{hex}` with a valid code point".into(),
            start,
            end,
        };
        if self.peek() != Some('{') {
            return Err(err(self.pos));
        }
        self.bump();
        let digits_start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_hexdigit()) {
            self.bump();
        }
        let hex = &self.src[digits_start..self.pos];
        if self.peek() != Some('}') || hex.is_empty() || hex.len() > 6 {
            return Err(err(self.pos));
        }
        self.bump();
        u32::from_str_radix(hex, 16)
            .ok()
            .and_then(char::from_u32)
            .ok_or_else(|| err(self.pos))
    }
}
