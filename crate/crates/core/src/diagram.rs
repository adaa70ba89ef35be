//! A textual string-diagram language for morphisms.
//!
//! ```text
//! expr   := par (";" par)*
//! par    := post ("*" post)*
//! post   := atom ("^*")*
//! atom   := IDENT | "id" "[" IDENT ("," IDENT)* "]" | "(" expr ")"
//! ```
//!
//! `f ; g` runs `f` first, then `g` (that is, `g ∘ f`). `f * g` places the
//! two side by side (`f ⊗ g`) and `f^*` is the adjoint. `#` starts a comment
//! that runs to the end of the line. `id` is reserved.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::report::EquationReport;
use crate::tensor::{self, LinearMap, Space, Tolerance, Word};

/// Abstract syntax of a diagram. `Sequential` and `Parallel` hold at least two
/// items when produced by the parser; use [`MorphismExpr::seq`] and
/// [`MorphismExpr::par`] to keep that shape when building trees by hand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MorphismExpr {
    Generator(String),
    Identity(Vec<String>),
    Sequential(Vec<MorphismExpr>),
    Parallel(Vec<MorphismExpr>),
    Adjoint(Box<MorphismExpr>),
}

impl MorphismExpr {
    pub fn generator(name: impl Into<String>) -> Self {
        MorphismExpr::Generator(name.into())
    }

    pub fn identity<S: Into<String>>(spaces: impl IntoIterator<Item = S>) -> Self {
        MorphismExpr::Identity(spaces.into_iter().map(Into::into).collect())
    }

    pub fn seq(mut items: Vec<MorphismExpr>) -> Self {
        if items.len() == 1 {
            items.pop().unwrap()
        } else {
            MorphismExpr::Sequential(items)
        }
    }

    pub fn par(mut items: Vec<MorphismExpr>) -> Self {
        if items.len() == 1 {
            items.pop().unwrap()
        } else {
            MorphismExpr::Parallel(items)
        }
    }

    pub fn adjoint(e: MorphismExpr) -> Self {
        MorphismExpr::Adjoint(Box::new(e))
    }
}

impl fmt::Display for MorphismExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MorphismExpr::Generator(n) => f.write_str(n),
            MorphismExpr::Identity(spaces) => write!(f, "id[{}]", spaces.join(",")),
            MorphismExpr::Sequential(items) => {
                for (k, e) in items.iter().enumerate() {
                    if k > 0 {
                        f.write_str(" ; ")?;
                    }
                    if matches!(e, MorphismExpr::Sequential(_)) {
                        write!(f, "({e})")?;
                    } else {
                        write!(f, "{e}")?;
                    }
                }
                Ok(())
            }
            MorphismExpr::Parallel(items) => {
                for (k, e) in items.iter().enumerate() {
                    if k > 0 {
                        f.write_str(" * ")?;
                    }
                    if matches!(e, MorphismExpr::Sequential(_) | MorphismExpr::Parallel(_)) {
                        write!(f, "({e})")?;
                    } else {
                        write!(f, "{e}")?;
                    }
                }
                Ok(())
            }
            MorphismExpr::Adjoint(e) => {
                if matches!(**e, MorphismExpr::Sequential(_) | MorphismExpr::Parallel(_)) {
                    write!(f, "({e})^*")
                } else {
                    write!(f, "{e}^*")
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Id,
    LBracket,
    RBracket,
    Comma,
    LParen,
    RParen,
    Semi,
    Star,
    Caret,
    Equals,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => s.as_str(),
            Tok::Id => "id",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Comma => ",",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Semi => ";",
            Tok::Star => "*",
            Tok::Caret => "^",
            Tok::Equals => "=",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);
    while let Some(&ch) = chars.peek() {
        let (l, c) = (line, column);
        let simple = match ch {
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ',' => Some(Tok::Comma),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ';' => Some(Tok::Semi),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '=' => Some(Tok::Equals),
            _ => None,
        };
        if let Some(tok) = simple {
            chars.next();
            column += 1;
            out.push(Spanned { tok, line: l, column: c });
            continue;
        }
        if ch == '\n' {
            chars.next();
            line += 1;
            column = 1;
        } else if ch.is_whitespace() {
            chars.next();
            column += 1;
        } else if ch == '#' {
            while let Some(&c2) = chars.peek() {
                if c2 == '\n' {
                    break;
                }
                chars.next();
            }
        } else if ch.is_ascii_alphabetic() || ch == '_' {
            let mut s = String::new();
            while let Some(&c2) = chars.peek() {
                if c2.is_ascii_alphanumeric() || c2 == '_' {
                    s.push(c2);
                    chars.next();
                    column += 1;
                } else {
                    break;
                }
            }
            let tok = if s == "id" { Tok::Id } else { Tok::Ident(s) };
            out.push(Spanned { tok, line: l, column: c });
        } else {
            return Err(Error::Syntax {
                line: l,
                column: c,
                token: ch.to_string(),
                message: "unexpected character".into(),
            });
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: &str) -> Error {
        let t = &self.toks[self.pos];
        Error::Syntax {
            line: t.line,
            column: t.column,
            token: t.tok.to_string(),
            message: message.to_string(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<MorphismExpr> {
        let mut items = vec![self.par()?];
        while *self.peek() == Tok::Semi {
            self.bump();
            items.push(self.par()?);
        }
        Ok(MorphismExpr::seq(items))
    }

    fn par(&mut self) -> Result<MorphismExpr> {
        let mut items = vec![self.post()?];
        while *self.peek() == Tok::Star {
            self.bump();
            items.push(self.post()?);
        }
        Ok(MorphismExpr::par(items))
    }

    fn post(&mut self) -> Result<MorphismExpr> {
        let mut e = self.atom()?;
        while *self.peek() == Tok::Caret {
            self.bump();
            self.expect(Tok::Star, "`*` after `^`")?;
            e = MorphismExpr::adjoint(e);
        }
        Ok(e)
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.error("expected a space name")),
        }
    }

    fn atom(&mut self) -> Result<MorphismExpr> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(MorphismExpr::Generator(s))
            }
            Tok::Id => {
                self.bump();
                self.expect(Tok::LBracket, "`[` after `id`")?;
                let mut spaces = vec![self.ident()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    spaces.push(self.ident()?);
                }
                self.expect(Tok::RBracket, "`]`")?;
                Ok(MorphismExpr::Identity(spaces))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            _ => Err(self.error("expected a generator, `id[...]` or `(`")),
        }
    }
}

/// Parses a single expression.
pub fn parse(text: &str) -> Result<MorphismExpr> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

/// Parses `lhs = rhs`.
pub fn parse_equation(text: &str) -> Result<(MorphismExpr, MorphismExpr)> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let lhs = p.expr()?;
    p.expect(Tok::Equals, "`=`")?;
    let rhs = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error("unexpected trailing input"));
    }
    Ok((lhs, rhs))
}

/// Named spaces and generators an expression is interpreted in.
#[derive(Debug, Clone, Default)]
pub struct Environment {
    spaces: BTreeMap<String, Space>,
    generators: BTreeMap<String, LinearMap>,
}

impl Environment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_space(&mut self, space: Space) -> Result<()> {
        if self.spaces.contains_key(space.name()) {
            return Err(Error::DuplicateName(space.name().to_string()));
        }
        self.spaces.insert(space.name().to_string(), space);
        Ok(())
    }

    /// Adds a generator. Every factor of its wires must be a declared space.
    pub fn add_generator(&mut self, name: impl Into<String>, map: LinearMap) -> Result<()> {
        let name = name.into();
        if self.generators.contains_key(&name) {
            return Err(Error::DuplicateName(name));
        }
        for s in map.dom().factors().iter().chain(map.cod().factors()) {
            match self.spaces.get(s.name()) {
                Some(decl) if decl == s => {}
                _ => return Err(Error::UnknownSpace(s.name().to_string())),
            }
        }
        self.generators.insert(name, map);
        Ok(())
    }

    pub fn space(&self, name: &str) -> Option<&Space> {
        self.spaces.get(name)
    }

    pub fn generator(&self, name: &str) -> Option<&LinearMap> {
        self.generators.get(name)
    }

    pub fn spaces(&self) -> impl Iterator<Item = &Space> {
        self.spaces.values()
    }

    pub fn generators(&self) -> impl Iterator<Item = (&str, &LinearMap)> {
        self.generators.iter().map(|(k, v)| (k.as_str(), v))
    }

    fn word(&self, names: &[String]) -> Result<Word> {
        names
            .iter()
            .map(|n| {
                self.spaces
                    .get(n)
                    .cloned()
                    .ok_or_else(|| Error::UnknownSpace(n.clone()))
            })
            .collect()
    }
}

/// Infers `(domain, codomain)`.
pub fn typecheck(e: &MorphismExpr, env: &Environment) -> Result<(Word, Word)> {
    match e {
        MorphismExpr::Generator(n) => env
            .generator(n)
            .map(|g| (g.dom().clone(), g.cod().clone()))
            .ok_or_else(|| Error::UnknownGenerator(n.clone())),
        MorphismExpr::Identity(names) => {
            let w = env.word(names)?;
            Ok((w.clone(), w))
        }
        MorphismExpr::Sequential(items) => {
            let (dom, mut cod) = typecheck(&items[0], env)?;
            for (k, item) in items.iter().enumerate().skip(1) {
                let (d, c) = typecheck(item, env)?;
                if d != cod {
                    return Err(Error::Type {
                        stage: format!("stage {} (`{}`) of `{}`", k + 1, item, e),
                        left: cod,
                        right: d,
                    });
                }
                cod = c;
            }
            Ok((dom, cod))
        }
        MorphismExpr::Parallel(items) => {
            let mut dom = Word::unit();
            let mut cod = Word::unit();
            for item in items {
                let (d, c) = typecheck(item, env)?;
                dom = dom.concat(&d);
                cod = cod.concat(&c);
            }
            Ok((dom, cod))
        }
        MorphismExpr::Adjoint(inner) => {
            let (d, c) = typecheck(inner, env)?;
            Ok((c, d))
        }
    }
}

/// Evaluates an expression to a linear map.
pub fn eval(e: &MorphismExpr, env: &Environment) -> Result<LinearMap> {
    typecheck(e, env)?;
    eval_unchecked(e, env)
}

fn eval_unchecked(e: &MorphismExpr, env: &Environment) -> Result<LinearMap> {
    match e {
        MorphismExpr::Generator(n) => env
            .generator(n)
            .cloned()
            .ok_or_else(|| Error::UnknownGenerator(n.clone())),
        MorphismExpr::Identity(names) => Ok(tensor::identity(&env.word(names)?)),
        MorphismExpr::Sequential(items) => {
            let mut acc = eval_unchecked(&items[0], env)?;
            for item in &items[1..] {
                acc = tensor::compose(&eval_unchecked(item, env)?, &acc)?;
            }
            Ok(acc)
        }
        MorphismExpr::Parallel(items) => {
            let mut acc = eval_unchecked(&items[0], env)?;
            for item in &items[1..] {
                acc = tensor::tensor(&acc, &eval_unchecked(item, env)?);
            }
            Ok(acc)
        }
        MorphismExpr::Adjoint(inner) => Ok(tensor::adjoint(&eval_unchecked(inner, env)?)),
    }
}

/// Evaluates both sides and compares them entrywise.
pub fn check_equation(
    lhs: &MorphismExpr,
    rhs: &MorphismExpr,
    env: &Environment,
    tol: Tolerance,
) -> Result<EquationReport> {
    let (ld, lc) = typecheck(lhs, env)?;
    let (rd, rc) = typecheck(rhs, env)?;
    if ld != rd || lc != rc {
        return Err(Error::SignatureMismatch {
            lhs_dom: ld,
            lhs_cod: lc,
            rhs_dom: rd,
            rhs_cod: rc,
        });
    }
    let l = eval_unchecked(lhs, env)?;
    let r = eval_unchecked(rhs, env)?;
    let residual = tensor::max_abs_diff(&l, &r)?;
    Ok(EquationReport::new(ld, lc, residual, tol))
}
