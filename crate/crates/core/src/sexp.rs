//! A small s-expression reader that keeps source positions.
//!
//! Atoms are runs of non-whitespace, non-paren characters; a double-quoted
//! string is read as a single atom with its quotes stripped. `;` starts a
//! comment running to the end of the line.

use std::fmt;

use crate::error::ParseError;

/// Line and column (both 1-based) of a token in its source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Loc {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Loc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sexp {
    Atom { text: String, quoted: bool, loc: Loc },
    List { items: Vec<Sexp>, loc: Loc },
}

impl Sexp {
    pub fn loc(&self) -> Loc {
        match self {
            Sexp::Atom { loc, .. } | Sexp::List { loc, .. } => *loc,
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom { text, .. } => Some(text),
            Sexp::List { .. } => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List { items, .. } => Some(items),
            Sexp::Atom { .. } => None,
        }
    }

    /// The head atom of a list form such as `(op mul ...)`.
    pub fn head(&self) -> Option<&str> {
        self.as_list().and_then(|items| items.first()).and_then(Sexp::as_atom)
    }

    pub fn expect_atom(&self, what: &str) -> Result<&str, ParseError> {
        self.as_atom().ok_or_else(|| ParseError::new(self.loc(), format!("expected {what}, found a list")))
    }

    pub fn expect_list(&self, what: &str) -> Result<&[Sexp], ParseError> {
        self.as_list().ok_or_else(|| ParseError::new(self.loc(), format!("expected {what}, found an atom")))
    }
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexp::Atom { text, quoted: true, .. } => write!(f, "{text:?}"),
            Sexp::Atom { text, .. } => f.write_str(text),
            Sexp::List { items, .. } => {
                f.write_str("(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{item}")?;
                }
                f.write_str(")")
            }
        }
    }
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    loc: Loc,
}

impl Reader<'_> {
    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.loc.line += 1;
            self.loc.col = 1;
        } else {
            self.loc.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == ';' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn read(&mut self) -> Result<Option<Sexp>, ParseError> {
        self.skip_trivia();
        let start = self.loc;
        let Some(&c) = self.chars.peek() else {
            return Ok(None);
        };
        match c {
            '(' => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.chars.peek() {
                        None => return Err(ParseError::new(start, "unclosed `(`")),
                        Some(')') => {
                            self.bump();
                            return Ok(Some(Sexp::List { items, loc: start }));
                        }
                        Some(_) => {
                            let item = self.read()?.expect("peeked a non-empty input");
                            items.push(item);
                        }
                    }
                }
            }
            ')' => Err(ParseError::new(start, "unexpected `)`")),
            '"' => {
                self.bump();
                let mut text = String::new();
                loop {
                    match self.bump() {
                        None => return Err(ParseError::new(start, "unterminated string")),
                        Some('"') => break,
                        Some('\\') => match self.bump() {
                            Some(c) => text.push(c),
                            None => return Err(ParseError::new(start, "unterminated string")),
                        },
                        Some(c) => text.push(c),
                    }
                }
                Ok(Some(Sexp::Atom { text, quoted: true, loc: start }))
            }
            _ => {
                let mut text = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' || c == '"' {
                        break;
                    }
                    text.push(c);
                    self.bump();
                }
                Ok(Some(Sexp::Atom { text, quoted: false, loc: start }))
            }
        }
    }
}

/// Reads every top-level form of `src`.
pub fn parse_all(src: &str) -> Result<Vec<Sexp>, ParseError> {
    let mut reader = Reader { chars: src.chars().peekable(), loc: Loc { line: 1, col: 1 } };
    let mut out = Vec::new();
    while let Some(form) = reader.read()? {
        out.push(form);
    }
    Ok(out)
}

/// Reads exactly one form from `src`.
pub fn parse_one(src: &str) -> Result<Sexp, ParseError> {
    let mut forms = parse_all(src)?;
    match forms.len() {
        1 => Ok(forms.pop().unwrap()),
        0 => Err(ParseError::new(Loc { line: 1, col: 1 }, "empty input")),
        _ => Err(ParseError::new(forms[1].loc(), "trailing input after the first form")),
    }
}
