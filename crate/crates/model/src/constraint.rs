//! Ad-hoc match expressions: conjunctions of comparisons over name/value
//! facts, in the style of batch-system classified advertisements.
//!
//! ```text
//! HAS_GPU && (GPU_API == "CUDA") && (GPU_NUM_CORES >= 16)
//! ```
//!
//! Evaluation is total: an identifier with no corresponding fact behaves
//! as undefined and fails whatever test it appears in.

use std::collections::BTreeMap;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("syntax error at offset {position}: {message}")]
pub struct ConstraintSyntaxError {
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Ge,
    Le,
    Gt,
    Lt,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Operand {
    Ident(String),
    Str(String),
    Num(f64),
    Bool(bool),
}

/// Parsed expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    /// Conjunction of two or more clauses; `&&` chains are flattened.
    And(Vec<Expr>),
    Compare {
        lhs: Operand,
        op: CmpOp,
        rhs: Operand,
    },
    /// Bare identifier used as a boolean test.
    Flag(String),
    Literal(bool),
}

impl Expr {
    /// Number of top-level conjuncts.
    pub fn clause_count(&self) -> usize {
        match self {
            Expr::And(clauses) => clauses.len(),
            _ => 1,
        }
    }

    /// Evaluates against a fact map. Missing identifiers are undefined:
    /// they fail as flags and make any comparison false.
    pub fn eval(&self, facts: &BTreeMap<String, String>) -> bool {
        match self {
            Expr::And(clauses) => clauses.iter().all(|c| c.eval(facts)),
            Expr::Literal(b) => *b,
            Expr::Flag(name) => facts.get(name).is_some_and(|v| v == "true"),
            Expr::Compare { lhs, op, rhs } => {
                let (Some(l), Some(r)) = (resolve(lhs, facts), resolve(rhs, facts)) else {
                    return false;
                };
                compare(&l, &r, *op)
            }
        }
    }
}

fn resolve(operand: &Operand, facts: &BTreeMap<String, String>) -> Option<String> {
    match operand {
        Operand::Ident(name) => facts.get(name).cloned(),
        Operand::Str(s) => Some(s.clone()),
        Operand::Num(n) => Some(format_num(*n)),
        Operand::Bool(b) => Some(b.to_string()),
    }
}

fn format_num(n: f64) -> String {
    if n.fract() == 0.0 && n.abs() < 1e15 {
        format!("{}", n as i64)
    } else {
        format!("{n}")
    }
}

/// Numbers compare numerically when both sides parse; otherwise the raw
/// strings compare lexicographically.
fn compare(l: &str, r: &str, op: CmpOp) -> bool {
    if let (Ok(ln), Ok(rn)) = (l.parse::<f64>(), r.parse::<f64>()) {
        return match op {
            CmpOp::Eq => ln == rn,
            CmpOp::Ne => ln != rn,
            CmpOp::Ge => ln >= rn,
            CmpOp::Le => ln <= rn,
            CmpOp::Gt => ln > rn,
            CmpOp::Lt => ln < rn,
        };
    }
    match op {
        CmpOp::Eq => l == r,
        CmpOp::Ne => l != r,
        CmpOp::Ge => l >= r,
        CmpOp::Le => l <= r,
        CmpOp::Gt => l > r,
        CmpOp::Lt => l < r,
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Str(String),
    Num(f64),
    Op(CmpOp),
    AndAnd,
    LParen,
    RParen,
}

struct Lexer<'a> {
    input: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(input: &'a str) -> Self {
        Self {
            input: input.as_bytes(),
            pos: 0,
        }
    }

    fn error(&self, message: impl Into<String>) -> ConstraintSyntaxError {
        ConstraintSyntaxError {
            position: self.pos,
            message: message.into(),
        }
    }

    fn next_token(&mut self) -> Result<Option<(usize, Token)>, ConstraintSyntaxError> {
        while self.pos < self.input.len() {
            let c = self.input[self.pos];
            // Line continuations and whitespace are both skipped.
            if c.is_ascii_whitespace() || c == b'\\' {
                self.pos += 1;
                continue;
            }
            break;
        }
        if self.pos >= self.input.len() {
            return Ok(None);
        }
        let start = self.pos;
        let c = self.input[self.pos];
        let token = match c {
            b'(' => {
                self.pos += 1;
                Token::LParen
            }
            b')' => {
                self.pos += 1;
                Token::RParen
            }
            b'&' => {
                if self.input.get(self.pos + 1) == Some(&b'&') {
                    self.pos += 2;
                    Token::AndAnd
                } else {
                    return Err(self.error("expected `&&`"));
                }
            }
            b'=' | b'!' | b'<' | b'>' => {
                let eq = self.input.get(self.pos + 1) == Some(&b'=');
                let op = match (c, eq) {
                    (b'=', true) => CmpOp::Eq,
                    (b'!', true) => CmpOp::Ne,
                    (b'>', true) => CmpOp::Ge,
                    (b'<', true) => CmpOp::Le,
                    (b'>', false) => CmpOp::Gt,
                    (b'<', false) => CmpOp::Lt,
                    (b'=', false) => return Err(self.error("expected `==`")),
                    _ => unreachable!(),
                };
                self.pos += if eq { 2 } else { 1 };
                Token::Op(op)
            }
            b'"' => {
                self.pos += 1;
                let begin = self.pos;
                while self.pos < self.input.len() && self.input[self.pos] != b'"' {
                    self.pos += 1;
                }
                if self.pos >= self.input.len() {
                    return Err(self.error("unterminated string"));
                }
                let s = std::str::from_utf8(&self.input[begin..self.pos])
                    .map_err(|_| self.error("invalid UTF-8 in string"))?
                    .to_string();
                self.pos += 1;
                Token::Str(s)
            }
            b'0'..=b'9' | b'-' | b'+' => {
                let begin = self.pos;
                self.pos += 1;
                while self.pos < self.input.len()
                    && (self.input[self.pos].is_ascii_digit()
                        || self.input[self.pos] == b'.'
                        || self.input[self.pos] == b'e'
                        || self.input[self.pos] == b'E')
                {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.input[begin..self.pos]).unwrap();
                let n: f64 = text
                    .parse()
                    .map_err(|_| self.error(format!("invalid number `{text}`")))?;
                Token::Num(n)
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let begin = self.pos;
                while self.pos < self.input.len()
                    && (self.input[self.pos].is_ascii_alphanumeric()
                        || self.input[self.pos] == b'_'
                        || self.input[self.pos] == b'.')
                {
                    self.pos += 1;
                }
                let word = std::str::from_utf8(&self.input[begin..self.pos]).unwrap();
                Token::Ident(word.to_string())
            }
            other => {
                return Err(self.error(format!("unexpected character `{}`", other as char)));
            }
        };
        Ok(Some((start, token)))
    }
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    index: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.index).map(|(_, t)| t)
    }

    fn position(&self) -> usize {
        self.tokens
            .get(self.index)
            .map(|(p, _)| *p)
            .unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.index).map(|(_, t)| t.clone());
        if t.is_some() {
            self.index += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> ConstraintSyntaxError {
        ConstraintSyntaxError {
            position: self.position(),
            message: message.into(),
        }
    }

    fn expr(&mut self) -> Result<Expr, ConstraintSyntaxError> {
        let mut clauses = vec![self.primary()?];
        while self.peek() == Some(&Token::AndAnd) {
            self.bump();
            clauses.push(self.primary()?);
        }
        Ok(if clauses.len() == 1 {
            clauses.pop().unwrap()
        } else {
            Expr::And(clauses)
        })
    }

    fn primary(&mut self) -> Result<Expr, ConstraintSyntaxError> {
        if self.peek() == Some(&Token::LParen) {
            self.bump();
            let inner = self.expr()?;
            if self.bump() != Some(Token::RParen) {
                return Err(self.error("expected `)`"));
            }
            return Ok(inner);
        }
        let lhs = self.operand()?;
        if let Some(Token::Op(op)) = self.peek().cloned() {
            self.bump();
            let rhs = self.operand()?;
            return Ok(Expr::Compare { lhs, op, rhs });
        }
        match lhs {
            Operand::Ident(name) if name == "true" => Ok(Expr::Literal(true)),
            Operand::Ident(name) if name == "false" => Ok(Expr::Literal(false)),
            Operand::Ident(name) => Ok(Expr::Flag(name)),
            Operand::Bool(b) => Ok(Expr::Literal(b)),
            _ => Err(self.error("literal is not a boolean clause")),
        }
    }

    fn operand(&mut self) -> Result<Operand, ConstraintSyntaxError> {
        match self.bump() {
            Some(Token::Ident(name)) if name == "true" => Ok(Operand::Bool(true)),
            Some(Token::Ident(name)) if name == "false" => Ok(Operand::Bool(false)),
            Some(Token::Ident(name)) => Ok(Operand::Ident(name)),
            Some(Token::Str(s)) => Ok(Operand::Str(s)),
            Some(Token::Num(n)) => Ok(Operand::Num(n)),
            _ => Err(self.error("expected identifier, string, number, or boolean")),
        }
    }
}

/// Parses an expression; the grammar is conjunctions (`&&`) of comparisons
/// (`==`, `!=`, `>=`, `<=`, `>`, `<`) over identifiers, strings, numbers,
/// and booleans, with parentheses.
pub fn parse_constraint(text: &str) -> Result<Expr, ConstraintSyntaxError> {
    let mut lexer = Lexer::new(text);
    let mut tokens = Vec::new();
    while let Some(tok) = lexer.next_token()? {
        tokens.push(tok);
    }
    let end = text.len();
    let mut parser = Parser {
        tokens,
        index: 0,
        end,
    };
    let expr = parser.expr()?;
    if parser.index != parser.tokens.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(expr)
}
