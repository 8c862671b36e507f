//! Input language:
//!
//! ```text
//! # comment
//! map phi2 rank 2 { a -> a a a b ; b -> b b b a ; }
//! matrix A4 rank 2 { 2 1 ; 1 1 ; }
//! ```
//!
//! Generators are the lowercase letters `a..`, inverses the matching uppercase
//! letter. Whitespace inside words is optional.

use std::fmt;

use homdyn::freegroup::{Endomorphism, Word};
use homdyn::intlinalg::IntMatrix;
use num_bigint::BigInt;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DslError {
    #[error("{line}:{col}: expected {}, found {found}", expected.join(" or "))]
    ParseError {
        line: usize,
        col: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("{line}:{col}: generator `{gen}` is not declared in rank {rank}")]
    UndeclaredGenerator {
        line: usize,
        col: usize,
        gen: char,
        rank: usize,
    },
    #[error("{line}:{col}: second rule for generator `{gen}`")]
    DuplicateRule { line: usize, col: usize, gen: char },
}

impl DslError {
    pub fn code(&self) -> &'static str {
        match self {
            DslError::ParseError { .. } => "cli::ParseError",
            DslError::UndeclaredGenerator { .. } => "cli::UndeclaredGenerator",
            DslError::DuplicateRule { .. } => "cli::DuplicateRule",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapSpec {
    pub name: String,
    pub rank: usize,
    /// Raw (unreduced) image word per generator, in generator order, without spaces.
    pub rules: Vec<String>,
}

impl MapSpec {
    pub fn endomorphism(&self) -> Endomorphism {
        let images = self.rules.iter().map(|w| Word::parse(w)).collect();
        Endomorphism::new(self.rank, images).expect("validated by the parser")
    }
}

impl fmt::Display for MapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "map {} rank {} {{", self.name, self.rank)?;
        for (i, w) in self.rules.iter().enumerate() {
            let letters: Vec<String> = w.chars().map(String::from).collect();
            writeln!(f, "  {} -> {} ;", gen_char(i), letters.join(" "))?;
        }
        write!(f, "}}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixSpec {
    pub name: String,
    pub matrix: IntMatrix,
}

impl fmt::Display for MatrixSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "matrix {} rank {} {{", self.name, self.matrix.dim())?;
        for i in 0..self.matrix.dim() {
            let row: Vec<String> = self.matrix.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  {} ;", row.join(" "))?;
        }
        write!(f, "}}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Map(MapSpec),
    Matrix(MatrixSpec),
}

impl Item {
    pub fn name(&self) -> &str {
        match self {
            Item::Map(m) => &m.name,
            Item::Matrix(m) => &m.name,
        }
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Item::Map(m) => m.fmt(f),
            Item::Matrix(m) => m.fmt(f),
        }
    }
}

pub fn gen_char(i: usize) -> char {
    (b'a' + i as u8) as char
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    LBrace,
    RBrace,
    Arrow,
    Semi,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::LBrace => write!(f, "`{{`"),
            Tok::RBrace => write!(f, "`}}`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::Semi => write!(f, "`;`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>, DslError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let mut bump = |i: &mut usize, n: usize| {
            *i += n;
            col += n;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => bump(&mut i, 1),
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '{' | '}' | ';' => {
                let tok = match c {
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    _ => Tok::Semi,
                };
                bump(&mut i, 1);
                out.push(Spanned { tok, line: l0, col: c0 });
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                bump(&mut i, 2);
                out.push(Spanned { tok: Tok::Arrow, line: l0, col: c0 });
            }
            c if c.is_ascii_digit() || (c == '-' && chars.get(i + 1).is_some_and(char::is_ascii_digit)) => {
                let start = i;
                bump(&mut i, 1);
                while i < chars.len() && chars[i].is_ascii_digit() {
                    bump(&mut i, 1);
                }
                let text: String = chars[start..i].iter().collect();
                out.push(Spanned { tok: Tok::Int(text.parse().expect("digits")), line: l0, col: c0 });
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    bump(&mut i, 1);
                }
                out.push(Spanned { tok: Tok::Ident(chars[start..i].iter().collect()), line: l0, col: c0 });
            }
            other => {
                return Err(DslError::ParseError {
                    line: l0,
                    col: c0,
                    expected: vec!["a token".into()],
                    found: format!("`{other}`"),
                })
            }
        }
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, DslError> {
        let t = self.peek();
        Err(DslError::ParseError {
            line: t.line,
            col: t.col,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: t.tok.to_string(),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<Spanned, DslError> {
        if self.peek().tok == tok {
            Ok(self.next())
        } else {
            self.fail(&[&tok.to_string()])
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), DslError> {
        match &self.peek().tok {
            Tok::Ident(s) if s == kw => {
                self.next();
                Ok(())
            }
            _ => self.fail(&[&format!("`{kw}`")]),
        }
    }

    fn ident(&mut self) -> Result<String, DslError> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let s = s.clone();
                self.next();
                Ok(s)
            }
            _ => self.fail(&["a name"]),
        }
    }

    fn rank(&mut self) -> Result<usize, DslError> {
        self.keyword("rank")?;
        match &self.peek().tok {
            Tok::Int(n) if *n >= BigInt::from(1) && *n <= BigInt::from(26) => {
                let r = n.to_string().parse().expect("small");
                self.next();
                Ok(r)
            }
            _ => self.fail(&["a rank between 1 and 26"]),
        }
    }

    fn item(&mut self) -> Result<Item, DslError> {
        match &self.peek().tok {
            Tok::Ident(s) if s == "map" => self.map().map(Item::Map),
            Tok::Ident(s) if s == "matrix" => self.matrix().map(Item::Matrix),
            _ => self.fail(&["`map`", "`matrix`"]),
        }
    }

    fn map(&mut self) -> Result<MapSpec, DslError> {
        self.keyword("map")?;
        let name = self.ident()?;
        let rank = self.rank()?;
        self.expect(Tok::LBrace)?;
        let mut rules: Vec<Option<String>> = vec![None; rank];
        loop {
            let t = self.peek().clone();
            let gen = match &t.tok {
                Tok::RBrace => break,
                Tok::Ident(s) if s.chars().count() == 1 && s.chars().all(|c| c.is_ascii_lowercase()) => {
                    s.chars().next().expect("one char")
                }
                _ => return self.fail(&["a generator", "`}`"]),
            };
            let idx = (gen as u8 - b'a') as usize;
            if idx >= rank {
                return Err(DslError::UndeclaredGenerator { line: t.line, col: t.col, gen, rank });
            }
            if rules[idx].is_some() {
                return Err(DslError::DuplicateRule { line: t.line, col: t.col, gen });
            }
            self.next();
            self.expect(Tok::Arrow)?;
            let mut word = String::new();
            loop {
                let t = self.peek().clone();
                match &t.tok {
                    Tok::Semi => {
                        self.next();
                        break;
                    }
                    Tok::Ident(s) => {
                        for (off, c) in s.chars().enumerate() {
                            if !c.is_ascii_alphabetic() {
                                return Err(DslError::ParseError {
                                    line: t.line,
                                    col: t.col + off,
                                    expected: vec!["a generator letter".into()],
                                    found: format!("`{c}`"),
                                });
                            }
                            let g = c.to_ascii_lowercase();
                            if (g as u8 - b'a') as usize >= rank {
                                return Err(DslError::UndeclaredGenerator {
                                    line: t.line,
                                    col: t.col + off,
                                    gen: g,
                                    rank,
                                });
                            }
                            word.push(c);
                        }
                        self.next();
                    }
                    _ => return self.fail(&["a generator letter", "`;`"]),
                }
            }
            rules[idx] = Some(word);
        }
        if let Some(missing) = rules.iter().position(Option::is_none) {
            return self.fail(&[&format!("a rule for `{}`", gen_char(missing))]);
        }
        self.expect(Tok::RBrace)?;
        Ok(MapSpec {
            name,
            rank,
            rules: rules.into_iter().map(|r| r.expect("checked")).collect(),
        })
    }

    fn matrix(&mut self) -> Result<MatrixSpec, DslError> {
        self.keyword("matrix")?;
        let name = self.ident()?;
        let rank = self.rank()?;
        self.expect(Tok::LBrace)?;
        let mut entries = Vec::with_capacity(rank * rank);
        for _ in 0..rank {
            for _ in 0..rank {
                match &self.peek().tok {
                    Tok::Int(n) => {
                        entries.push(n.clone());
                        self.next();
                    }
                    _ => return self.fail(&["an integer"]),
                }
            }
            self.expect(Tok::Semi)?;
        }
        self.expect(Tok::RBrace)?;
        Ok(MatrixSpec {
            name,
            matrix: IntMatrix::new(rank, entries).expect("square by construction"),
        })
    }
}

pub fn parse(src: &str) -> Result<Vec<Item>, DslError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let mut items = Vec::new();
    while p.peek().tok != Tok::Eof {
        items.push(p.item()?);
    }
    Ok(items)
}

/// Maps only.
pub fn parse_maps(src: &str) -> Result<Vec<MapSpec>, DslError> {
    Ok(parse(src)?
        .into_iter()
        .filter_map(|i| match i {
            Item::Map(m) => Some(m),
            Item::Matrix(_) => None,
        })
        .collect())
}
