//! Parser for a small Prolog subset: facts and rules over plain terms,
//! infix `=`, lists, `%` and `/* */` comments. `!` and `\+` are accepted
//! syntactically; the analyzer treats them as unknown goals.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::program::{Clause, Goal, PredId, Program};
use crate::term::{Term, Var, VarRegistry};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("syntax error at line {line}, column {column}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Name(String),
    Quoted(String),
    Var(String),
    Num(String),
    Open,
    Close,
    LBrack,
    RBrack,
    Bar,
    Comma,
    End,
    Neck,
    Eq,
    Bang,
    NotProvable,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Name(s) | Tok::Var(s) | Tok::Num(s) => write!(f, "`{s}`"),
            Tok::Quoted(s) => write!(f, "`'{s}'`"),
            Tok::Open => write!(f, "`(`"),
            Tok::Close => write!(f, "`)`"),
            Tok::LBrack => write!(f, "`[`"),
            Tok::RBrack => write!(f, "`]`"),
            Tok::Bar => write!(f, "`|`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::End => write!(f, "`.`"),
            Tok::Neck => write!(f, "`:-`"),
            Tok::Eq => write!(f, "`=`"),
            Tok::Bang => write!(f, "`!`"),
            Tok::NotProvable => write!(f, "`\\+`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            chars: src.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn err(&self, line: usize, column: usize, message: impl Into<String>) -> SyntaxError {
        SyntaxError {
            line,
            column,
            message: message.into(),
        }
    }

    fn skip_layout(&mut self) -> Result<(), SyntaxError> {
        loop {
            match self.chars.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('%') => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                Some('/') => {
                    let (line, column) = (self.line, self.column);
                    let mut ahead = self.chars.clone();
                    ahead.next();
                    if ahead.peek() != Some(&'*') {
                        return Ok(());
                    }
                    self.bump();
                    self.bump();
                    let mut prev = ' ';
                    loop {
                        match self.bump() {
                            None => return Err(self.err(line, column, "unterminated block comment")),
                            Some('/') if prev == '*' => break,
                            Some(c) => prev = c,
                        }
                    }
                }
                _ => return Ok(()),
            }
        }
    }

    fn next(&mut self) -> Result<(Tok, usize, usize), SyntaxError> {
        self.skip_layout()?;
        let (line, column) = (self.line, self.column);
        let Some(c) = self.bump() else {
            return Ok((Tok::Eof, line, column));
        };
        let ident = |lx: &mut Self, first: char| {
            let mut s = String::from(first);
            while let Some(&c) = lx.chars.peek() {
                if c.is_alphanumeric() || c == '_' {
                    s.push(c);
                    lx.bump();
                } else {
                    break;
                }
            }
            s
        };
        let tok = match c {
            '(' => Tok::Open,
            ')' => Tok::Close,
            '[' => Tok::LBrack,
            ']' => Tok::RBrack,
            '|' => Tok::Bar,
            ',' => Tok::Comma,
            '.' => Tok::End,
            '=' => Tok::Eq,
            '!' => Tok::Bang,
            ':' if self.chars.peek() == Some(&'-') => {
                self.bump();
                Tok::Neck
            }
            '\\' if self.chars.peek() == Some(&'+') => {
                self.bump();
                Tok::NotProvable
            }
            '\'' => {
                let mut s = String::new();
                loop {
                    match self.bump() {
                        None => return Err(self.err(line, column, "unterminated quoted atom")),
                        Some('\'') => {
                            if self.chars.peek() == Some(&'\'') {
                                self.bump();
                                s.push('\'');
                            } else {
                                break;
                            }
                        }
                        Some('\\') => match self.bump() {
                            Some('n') => s.push('\n'),
                            Some('t') => s.push('\t'),
                            Some(c) => s.push(c),
                            None => return Err(self.err(line, column, "unterminated quoted atom")),
                        },
                        Some(c) => s.push(c),
                    }
                }
                Tok::Quoted(s)
            }
            c if c.is_ascii_digit() => {
                let mut s = String::from(c);
                while let Some(&d) = self.chars.peek() {
                    if d.is_ascii_digit() {
                        s.push(d);
                        self.bump();
                    } else {
                        break;
                    }
                }
                Tok::Num(s)
            }
            c if c.is_lowercase() => Tok::Name(ident(self, c)),
            c if c.is_uppercase() || c == '_' => Tok::Var(ident(self, c)),
            c => return Err(self.err(line, column, format!("unexpected character `{c}`"))),
        };
        Ok((tok, line, column))
    }
}

struct Parser<'a, 'r> {
    lexer: Lexer<'a>,
    tok: Tok,
    line: usize,
    column: usize,
    prev: (usize, usize),
    reg: &'r mut VarRegistry,
    names: HashMap<String, Var>,
    order: Vec<Var>,
}

impl<'a, 'r> Parser<'a, 'r> {
    fn new(src: &'a str, reg: &'r mut VarRegistry) -> Result<Self, SyntaxError> {
        let mut lexer = Lexer::new(src);
        let (tok, line, column) = lexer.next()?;
        Ok(Parser {
            lexer,
            tok,
            line,
            column,
            prev: (line, column),
            reg,
            names: HashMap::new(),
            order: Vec::new(),
        })
    }

    fn advance(&mut self) -> Result<Tok, SyntaxError> {
        let (tok, line, column) = self.lexer.next()?;
        self.prev = (self.line, self.column);
        self.line = line;
        self.column = column;
        Ok(std::mem::replace(&mut self.tok, tok))
    }

    fn error(&self, message: impl Into<String>) -> SyntaxError {
        SyntaxError {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn expect(&mut self, want: Tok) -> Result<(), SyntaxError> {
        if self.tok == want {
            self.advance()?;
            Ok(())
        } else {
            Err(self.error(format!("expected {want}, found {}", self.tok)))
        }
    }

    fn var(&mut self, name: &str) -> Var {
        if name == "_" {
            let v = self.reg.fresh("_");
            self.order.push(v);
            return v;
        }
        if let Some(&v) = self.names.get(name) {
            return v;
        }
        let v = self.reg.fresh(name);
        self.names.insert(name.to_string(), v);
        self.order.push(v);
        v
    }

    fn args(&mut self) -> Result<Vec<Term>, SyntaxError> {
        let mut out = vec![self.arg()?];
        while self.tok == Tok::Comma {
            self.advance()?;
            out.push(self.arg()?);
        }
        Ok(out)
    }

    /// A term optionally followed by `= term`.
    fn arg(&mut self) -> Result<Term, SyntaxError> {
        let left = self.term()?;
        if self.tok == Tok::Eq {
            self.advance()?;
            let right = self.term()?;
            return Ok(Term::app("=", vec![left, right]));
        }
        Ok(left)
    }

    fn compound(&mut self, name: &str) -> Result<Term, SyntaxError> {
        if self.tok == Tok::Open {
            self.advance()?;
            let args = self.args()?;
            self.expect(Tok::Close)?;
            Ok(Term::app(name, args))
        } else {
            Ok(Term::atom(name))
        }
    }

    fn term(&mut self) -> Result<Term, SyntaxError> {
        match self.advance()? {
            Tok::Var(name) => Ok(Term::Var(self.var(&name))),
            Tok::Num(n) => Ok(Term::atom(&n)),
            Tok::Name(name) | Tok::Quoted(name) => self.compound(&name),
            Tok::Bang => Ok(Term::atom("!")),
            Tok::NotProvable => {
                let goal = self.term()?;
                Ok(Term::app("\\+", vec![goal]))
            }
            Tok::Open => {
                let t = self.arg()?;
                self.expect(Tok::Close)?;
                Ok(t)
            }
            Tok::LBrack => {
                if self.tok == Tok::RBrack {
                    self.advance()?;
                    return self.compound("[]");
                }
                let items = self.args()?;
                let tail = if self.tok == Tok::Bar {
                    self.advance()?;
                    self.term()?
                } else {
                    Term::atom("[]")
                };
                self.expect(Tok::RBrack)?;
                Ok(items
                    .into_iter()
                    .rev()
                    .fold(tail, |acc, item| Term::app(".", vec![item, acc])))
            }
            tok => {
                // Report at the offending token, not the lookahead.
                Err(SyntaxError {
                    line: self.prev.0,
                    column: self.prev.1,
                    message: format!("expected a term, found {tok}"),
                })
            }
        }
    }

    fn clause(&mut self) -> Result<Clause, SyntaxError> {
        self.names.clear();
        self.order.clear();
        let (line, column) = (self.line, self.column);
        let head = self.term()?;
        let (pred, head_args) = match &head {
            Term::App(c) if !matches!(&*c.name, "=" | "\\+" | "!") => {
                (PredId::new(&c.name, c.args.len()), c.args.clone())
            }
            _ => {
                return Err(SyntaxError {
                    line,
                    column,
                    message: "clause head must be an atom or compound term".into(),
                })
            }
        };
        let mut body = Vec::new();
        if self.tok == Tok::Neck {
            self.advance()?;
            body = self.args()?.into_iter().map(Goal::from_term).collect();
        }
        self.expect(Tok::End)?;
        Ok(Clause {
            pred,
            head: head_args,
            body,
            vars: self.order.clone(),
            line,
        })
    }
}

/// Parse a program. Every clause gets its own variables in a fresh registry.
pub fn parse_program(src: &str) -> Result<Program, SyntaxError> {
    let mut program = Program::default();
    let mut reg = VarRegistry::new();
    {
        let mut p = Parser::new(src, &mut reg)?;
        while p.tok != Tok::Eof {
            let c = p.clause()?;
            program.add_clause(c);
        }
    }
    program.reg = reg;
    Ok(program)
}

/// Parse a single goal such as `r(X, Y)` against an existing registry.
pub fn parse_goal(src: &str, reg: &mut VarRegistry) -> Result<(Goal, Vec<Var>), SyntaxError> {
    let mut p = Parser::new(src, reg)?;
    let t = p.arg()?;
    if p.tok == Tok::End {
        p.advance()?;
    }
    if p.tok != Tok::Eof {
        return Err(p.error(format!("unexpected {} after goal", p.tok)));
    }
    Ok((Goal::from_term(t), p.order.clone()))
}
