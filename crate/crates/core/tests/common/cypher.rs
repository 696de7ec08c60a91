//! A small openCypher reader for the query shapes the emitter produces:
//! `MATCH` path patterns, a `WHERE` expression and a `RETURN` list. Used to
//! compare queries structurally instead of textually.

#![allow(dead_code)]

use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    Str(String),
    Num(String),
    Sym(&'static str),
}

const SYMBOLS: [&str; 18] = [
    "<>", "<=", ">=", "..", "(", ")", "[", "]", "{", "}", ":", ",", ".", "=", "<", ">", "-", "*",
];

pub fn tokenize(src: &str) -> Result<Vec<Tok>, String> {
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if c == '`' {
            let mut s = String::new();
            i += 1;
            loop {
                match chars.get(i) {
                    None => return Err("unterminated backquote".into()),
                    Some('`') if chars.get(i + 1) == Some(&'`') => {
                        s.push('`');
                        i += 2;
                    }
                    Some('`') => {
                        i += 1;
                        break;
                    }
                    Some(&ch) => {
                        s.push(ch);
                        i += 1;
                    }
                }
            }
            out.push(Tok::Ident(s));
        } else if c == '"' || c == '\'' {
            let quote = c;
            let mut s = String::new();
            i += 1;
            loop {
                match chars.get(i) {
                    None => return Err("unterminated string".into()),
                    Some('\\') => {
                        let esc = chars.get(i + 1).ok_or("dangling escape")?;
                        s.push(match esc {
                            'n' => '\n',
                            't' => '\t',
                            other => *other,
                        });
                        i += 2;
                    }
                    Some(&ch) if ch == quote => {
                        i += 1;
                        break;
                    }
                    Some(&ch) => {
                        s.push(ch);
                        i += 1;
                    }
                }
            }
            out.push(Tok::Str(s));
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if chars.get(i) == Some(&'.') && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()) {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            out.push(Tok::Num(chars[start..i].iter().collect()));
        } else {
            let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
            let sym = SYMBOLS
                .iter()
                .find(|s| rest.starts_with(**s))
                .ok_or_else(|| format!("unexpected character `{c}`"))?;
            out.push(Tok::Sym(sym));
            i += sym.chars().count();
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodePat {
    pub var: Option<String>,
    pub labels: Vec<String>,
    pub props: Vec<(String, Expr)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dir {
    Right,
    Left,
    Both,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelPat {
    pub var: Option<String>,
    pub types: Vec<String>,
    /// `(min, max)` hops; `max == None` is unbounded.
    pub length: (u32, Option<u32>),
    pub props: Vec<(String, Expr)>,
    pub dir: Dir,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathPat {
    pub name: Option<String>,
    pub nodes: Vec<NodePat>,
    pub rels: Vec<RelPat>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Or(Box<Expr>, Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Not(Box<Expr>),
    Cmp(&'static str, Box<Expr>, Box<Expr>),
    StartsWith(Box<Expr>, Box<Expr>),
    Contains(Box<Expr>, Box<Expr>),
    In(Box<Expr>, Box<Expr>),
    IsNotNull(Box<Expr>),
    Prop(Box<Expr>, String),
    Var(String),
    Str(String),
    Num(String),
    Bool(bool),
    Call(String, Vec<Expr>),
    All {
        var: String,
        list: Box<Expr>,
        pred: Box<Expr>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Query {
    pub matches: Vec<PathPat>,
    pub filter: Option<Expr>,
    pub returns: Vec<(Expr, Option<String>)>,
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn peek_at(&self, n: usize) -> Option<&Tok> {
        self.toks.get(self.pos + n)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(x)) if *x == s)
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(x)) if x.eq_ignore_ascii_case(kw))
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.is_kw(kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> Result<(), String> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(format!("expected `{s}` at token {}, found {:?}", self.pos, self.peek()))
        }
    }

    fn expect_kw(&mut self, kw: &str) -> Result<(), String> {
        if self.eat_kw(kw) {
            Ok(())
        } else {
            Err(format!("expected `{kw}`, found {:?}", self.peek()))
        }
    }

    fn ident(&mut self) -> Result<String, String> {
        match self.next() {
            Some(Tok::Ident(s)) => Ok(s),
            other => Err(format!("expected identifier, found {other:?}")),
        }
    }

    fn number(&mut self) -> Result<u32, String> {
        match self.next() {
            Some(Tok::Num(n)) => n.parse().map_err(|_| format!("bad length `{n}`")),
            other => Err(format!("expected number, found {other:?}")),
        }
    }

    fn query(&mut self) -> Result<Query, String> {
        let mut matches = Vec::new();
        while self.eat_kw("MATCH") {
            matches.push(self.path()?);
        }
        if matches.is_empty() {
            return Err("expected MATCH".into());
        }
        let filter = if self.eat_kw("WHERE") {
            Some(self.expr()?)
        } else {
            None
        };
        self.expect_kw("RETURN")?;
        let mut returns = Vec::new();
        loop {
            let e = self.expr()?;
            let alias = if self.eat_kw("AS") {
                Some(self.ident()?)
            } else {
                None
            };
            returns.push((e, alias));
            if !self.eat_sym(",") {
                break;
            }
        }
        if self.pos != self.toks.len() {
            return Err(format!("trailing tokens from {}", self.pos));
        }
        Ok(Query {
            matches,
            filter,
            returns,
        })
    }

    fn path(&mut self) -> Result<PathPat, String> {
        let name = if matches!(self.peek(), Some(Tok::Ident(_)))
            && matches!(self.peek_at(1), Some(Tok::Sym("=")))
        {
            let n = self.ident()?;
            self.pos += 1;
            Some(n)
        } else {
            None
        };
        let mut nodes = vec![self.node()?];
        let mut rels = Vec::new();
        while self.is_sym("-") || self.is_sym("<") {
            rels.push(self.rel()?);
            nodes.push(self.node()?);
        }
        Ok(PathPat { name, nodes, rels })
    }

    fn props(&mut self) -> Result<Vec<(String, Expr)>, String> {
        let mut props = Vec::new();
        if self.eat_sym("{") {
            if !self.eat_sym("}") {
                loop {
                    let k = self.ident()?;
                    self.expect_sym(":")?;
                    props.push((k, self.expr()?));
                    if self.eat_sym("}") {
                        break;
                    }
                    self.expect_sym(",")?;
                }
            }
        }
        props.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(props)
    }

    fn node(&mut self) -> Result<NodePat, String> {
        self.expect_sym("(")?;
        let var = match self.peek() {
            Some(Tok::Ident(_)) => Some(self.ident()?),
            _ => None,
        };
        let mut labels = Vec::new();
        while self.eat_sym(":") {
            labels.push(self.ident()?);
        }
        let props = self.props()?;
        self.expect_sym(")")?;
        Ok(NodePat { var, labels, props })
    }

    fn rel(&mut self) -> Result<RelPat, String> {
        let left = self.eat_sym("<");
        self.expect_sym("-")?;
        let mut rel = RelPat {
            var: None,
            types: Vec::new(),
            length: (1, Some(1)),
            props: Vec::new(),
            dir: Dir::Both,
        };
        if self.eat_sym("[") {
            if let Some(Tok::Ident(_)) = self.peek() {
                rel.var = Some(self.ident()?);
            }
            if self.eat_sym(":") {
                rel.types.push(self.ident()?);
            }
            if self.eat_sym("*") {
                rel.length = self.range()?;
            }
            rel.props = self.props()?;
            self.expect_sym("]")?;
        }
        self.expect_sym("-")?;
        let right = self.eat_sym(">");
        rel.dir = match (left, right) {
            (false, true) => Dir::Right,
            (true, false) => Dir::Left,
            (false, false) => Dir::Both,
            (true, true) => return Err("relationship points both ways".into()),
        };
        Ok(rel)
    }

    fn range(&mut self) -> Result<(u32, Option<u32>), String> {
        let min = match self.peek() {
            Some(Tok::Num(_)) => Some(self.number()?),
            _ => None,
        };
        if self.eat_sym("..") {
            let max = match self.peek() {
                Some(Tok::Num(_)) => Some(self.number()?),
                _ => None,
            };
            Ok((min.unwrap_or(1), max))
        } else {
            match min {
                Some(n) => Ok((n, Some(n))),
                None => Ok((1, None)),
            }
        }
    }

    fn expr(&mut self) -> Result<Expr, String> {
        let mut lhs = self.and()?;
        while self.eat_kw("OR") {
            lhs = Expr::Or(Box::new(lhs), Box::new(self.and()?));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Expr, String> {
        let mut lhs = self.not()?;
        while self.eat_kw("AND") {
            lhs = Expr::And(Box::new(lhs), Box::new(self.not()?));
        }
        Ok(lhs)
    }

    fn not(&mut self) -> Result<Expr, String> {
        if self.eat_kw("NOT") {
            return Ok(Expr::Not(Box::new(self.not()?)));
        }
        self.comparison()
    }

    fn comparison(&mut self) -> Result<Expr, String> {
        let lhs = self.postfix()?;
        for op in ["=", "<>", "<=", ">=", "<", ">"] {
            if self.eat_sym(op) {
                let rhs = self.postfix()?;
                let op = SYMBOLS.iter().find(|s| **s == op).unwrap();
                return Ok(Expr::Cmp(op, Box::new(lhs), Box::new(rhs)));
            }
        }
        if self.is_kw("STARTS") {
            self.pos += 1;
            self.expect_kw("WITH")?;
            return Ok(Expr::StartsWith(Box::new(lhs), Box::new(self.postfix()?)));
        }
        if self.eat_kw("CONTAINS") {
            return Ok(Expr::Contains(Box::new(lhs), Box::new(self.postfix()?)));
        }
        if self.eat_kw("IN") {
            return Ok(Expr::In(Box::new(lhs), Box::new(self.postfix()?)));
        }
        if self.eat_kw("IS") {
            self.expect_kw("NOT")?;
            self.expect_kw("NULL")?;
            return Ok(Expr::IsNotNull(Box::new(lhs)));
        }
        Ok(lhs)
    }

    fn postfix(&mut self) -> Result<Expr, String> {
        let mut e = self.atom()?;
        while self.eat_sym(".") {
            e = Expr::Prop(Box::new(e), self.ident()?);
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<Expr, String> {
        match self.next() {
            Some(Tok::Str(s)) => Ok(Expr::Str(s)),
            Some(Tok::Num(n)) => Ok(Expr::Num(n)),
            Some(Tok::Sym("-")) => match self.next() {
                Some(Tok::Num(n)) => Ok(Expr::Num(format!("-{n}"))),
                other => Err(format!("expected number after `-`, found {other:?}")),
            },
            Some(Tok::Sym("(")) => {
                let e = self.expr()?;
                self.expect_sym(")")?;
                Ok(e)
            }
            Some(Tok::Ident(id)) => {
                if id.eq_ignore_ascii_case("true") {
                    return Ok(Expr::Bool(true));
                }
                if id.eq_ignore_ascii_case("false") {
                    return Ok(Expr::Bool(false));
                }
                if id.eq_ignore_ascii_case("ALL") && self.is_sym("(") {
                    self.pos += 1;
                    let var = self.ident()?;
                    self.expect_kw("IN")?;
                    let list = self.postfix()?;
                    self.expect_kw("WHERE")?;
                    let pred = self.expr()?;
                    self.expect_sym(")")?;
                    return Ok(Expr::All {
                        var,
                        list: Box::new(list),
                        pred: Box::new(pred),
                    });
                }
                if self.eat_sym("(") {
                    let mut args = Vec::new();
                    if !self.eat_sym(")") {
                        loop {
                            args.push(self.expr()?);
                            if self.eat_sym(")") {
                                break;
                            }
                            self.expect_sym(",")?;
                        }
                    }
                    return Ok(Expr::Call(id.to_lowercase(), args));
                }
                Ok(Expr::Var(id))
            }
            other => Err(format!("unexpected token {other:?}")),
        }
    }
}

pub fn parse(src: &str) -> Result<Query, String> {
    let mut p = Parser {
        toks: tokenize(src)?,
        pos: 0,
    };
    p.query()
}

/// Renames every variable to `v0`, `v1`, ... in order of first
/// occurrence, so that queries differing only in binding names compare
/// equal.
pub fn canonical(mut q: Query) -> Query {
    let mut names: HashMap<String, String> = HashMap::new();
    let mut rename = |s: &mut String| {
        let n = names.len();
        let new = names.entry(s.clone()).or_insert_with(|| format!("v{n}")).clone();
        *s = new;
    };
    fn expr(e: &mut Expr, f: &mut dyn FnMut(&mut String)) {
        match e {
            Expr::Or(a, b)
            | Expr::And(a, b)
            | Expr::Cmp(_, a, b)
            | Expr::StartsWith(a, b)
            | Expr::Contains(a, b)
            | Expr::In(a, b) => {
                expr(a, f);
                expr(b, f);
            }
            Expr::Not(a) | Expr::IsNotNull(a) | Expr::Prop(a, _) => expr(a, f),
            Expr::Var(v) => f(v),
            Expr::Call(_, args) => args.iter_mut().for_each(|a| expr(a, f)),
            Expr::All { var, list, pred } => {
                f(var);
                expr(list, f);
                expr(pred, f);
            }
            Expr::Str(_) | Expr::Num(_) | Expr::Bool(_) => {}
        }
    }
    for m in &mut q.matches {
        if let Some(n) = &mut m.name {
            rename(n);
        }
        for (i, node) in m.nodes.iter_mut().enumerate() {
            if let Some(v) = &mut node.var {
                rename(v);
            }
            node.props.iter_mut().for_each(|(_, e)| expr(e, &mut rename));
            if let Some(r) = m.rels.get_mut(i) {
                if let Some(v) = &mut r.var {
                    rename(v);
                }
                r.props.iter_mut().for_each(|(_, e)| expr(e, &mut rename));
            }
        }
    }
    if let Some(f) = &mut q.filter {
        expr(f, &mut rename);
    }
    for (e, _) in &mut q.returns {
        expr(e, &mut rename);
    }
    q
}
