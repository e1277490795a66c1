use std::collections::HashSet;
use std::sync::Arc;

use num_traits::One;

use crate::engine::AssertionKind;
use crate::rational::{parse_rational, RationalError};
use crate::universe::ExecutionUniverse;
use crate::{Process, Rational};

use super::ast::{chain_shapes_compatible, BinOp, Document, Environment, Expr, Query, Statement};
use super::SourceError;

type Result<T> = std::result::Result<T, SourceError>;

fn error(
    line: usize,
    column: usize,
    message: impl Into<String>,
    token: impl Into<String>,
) -> SourceError {
    SourceError {
        line,
        column,
        message: message.into(),
        token: token.into(),
    }
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn is_label(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_alphanumeric() || matches!(c, '_' | '.' | '\''))
}

/// One source line with its comment removed.
struct Cursor {
    line: usize,
    chars: Vec<char>,
    pos: usize,
}

impl Cursor {
    fn new(line: usize, text: &str) -> Self {
        let text = text.split('#').next().unwrap_or_default();
        Self {
            line,
            chars: text.chars().collect(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.chars.len()
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> (usize, String) {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && pred(self.chars[self.pos]) {
            self.pos += 1;
        }
        (start + 1, self.chars[start..self.pos].iter().collect())
    }

    /// Next whitespace-delimited word, if any.
    fn word(&mut self) -> Option<(usize, String)> {
        let (col, w) = self.take_while(|c| !c.is_whitespace());
        (!w.is_empty()).then_some((col, w))
    }

    fn peek_word(&mut self) -> String {
        let saved = self.pos;
        let w = self.word().map(|(_, w)| w).unwrap_or_default();
        self.pos = saved;
        w
    }

    fn keyword(&mut self) -> (usize, String) {
        let (col, kw) = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
        if kw.is_empty() {
            let (col, w) = self.word().unwrap_or((self.column(), String::new()));
            return (col, w);
        }
        (col, kw)
    }

    fn expect_end(&mut self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            let col = self.column();
            Err(error(
                self.line,
                col,
                "unexpected trailing input",
                self.peek_word(),
            ))
        }
    }

    fn expect_char(&mut self, c: char, what: &str) -> Result<()> {
        self.skip_ws();
        if self.chars.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            let col = self.column();
            Err(error(
                self.line,
                col,
                format!("expected {what}"),
                self.peek_word(),
            ))
        }
    }

    fn identifier(&mut self, what: &str) -> Result<(usize, String)> {
        let (col, name) = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
        if !is_ident(&name) {
            let token = if name.is_empty() {
                self.peek_word()
            } else {
                name
            };
            return Err(error(self.line, col, format!("expected {what}"), token));
        }
        if name == "OMEGA" {
            return Err(error(self.line, col, "`OMEGA` is reserved", name));
        }
        Ok((col, name))
    }

    fn tokens(&mut self) -> Result<Vec<(usize, Tok)>> {
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            let Some(&c) = self.chars.get(self.pos) else {
                return Ok(out);
            };
            let col = self.column();
            let single = match c {
                '(' => Some(Tok::LParen),
                ')' => Some(Tok::RParen),
                '-' => Some(Tok::Minus),
                '*' => Some(Tok::Op(BinOp::Product)),
                '+' => Some(Tok::Op(BinOp::Sum)),
                '|' => Some(Tok::Op(BinOp::Join)),
                '&' => Some(Tok::Op(BinOp::Meet)),
                _ => None,
            };
            if let Some(tok) = single {
                self.pos += 1;
                out.push((col, tok));
            } else if c == '=' && self.chars.get(self.pos + 1) == Some(&'>') {
                self.pos += 2;
                out.push((col, Tok::Arrow));
            } else if c.is_ascii_alphabetic() || c == '_' {
                let (_, name) = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
                out.push((
                    col,
                    if name == "OMEGA" {
                        Tok::Omega
                    } else {
                        Tok::Name(name)
                    },
                ));
            } else {
                return Err(error(
                    self.line,
                    col,
                    "unexpected character in expression",
                    c.to_string(),
                ));
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Name(String),
    Omega,
    Minus,
    Op(BinOp),
    LParen,
    RParen,
    Arrow,
}

impl Tok {
    fn text(&self) -> String {
        match self {
            Tok::Name(n) => n.clone(),
            Tok::Omega => "OMEGA".into(),
            Tok::Minus => "-".into(),
            Tok::Op(op) => op.symbol().to_string(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
            Tok::Arrow => "=>".into(),
        }
    }
}

struct ExprParser<'a> {
    line: usize,
    toks: &'a [(usize, Tok)],
    pos: usize,
    end_column: usize,
    names: &'a HashSet<String>,
}

impl<'a> ExprParser<'a> {
    fn peek(&self) -> Option<&'a (usize, Tok)> {
        self.toks.get(self.pos)
    }

    fn done(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn here(&self) -> (usize, String) {
        match self.peek() {
            Some((col, tok)) => (*col, tok.text()),
            None => (self.end_column, String::new()),
        }
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T> {
        let (col, tok) = self.here();
        Err(error(self.line, col, message, tok))
    }

    /// Left-associative chain of one tier; mixing operators within the tier
    /// requires parentheses.
    fn chain(&mut self, tier: u8, operand: fn(&mut Self) -> Result<Expr>) -> Result<Expr> {
        let mut lhs = operand(self)?;
        let mut chain_op: Option<BinOp> = None;
        while let Some((col, Tok::Op(op))) = self.peek() {
            if op.tier() != tier {
                break;
            }
            if let Some(prev) = chain_op {
                if prev != *op {
                    return Err(error(
                        self.line,
                        *col,
                        format!(
                            "ambiguous mix of `{}` and `{}`; add parentheses",
                            prev.symbol(),
                            op.symbol()
                        ),
                        op.symbol().to_string(),
                    ));
                }
            }
            chain_op = Some(*op);
            self.pos += 1;
            let rhs = operand(self)?;
            lhs = Expr::Binary(*op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn lattice(&mut self) -> Result<Expr> {
        self.chain(1, Self::arith)
    }

    fn arith(&mut self) -> Result<Expr> {
        self.chain(2, Self::unary)
    }

    fn unary(&mut self) -> Result<Expr> {
        if let Some((_, Tok::Minus)) = self.peek() {
            self.pos += 1;
            return Ok(Expr::Reflect(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some((_, Tok::Omega)) => {
                self.pos += 1;
                Ok(Expr::Omega)
            }
            Some((col, Tok::Name(name))) => {
                if !self.names.contains(name) {
                    return Err(error(
                        self.line,
                        *col,
                        format!("unresolved name `{name}`"),
                        name.clone(),
                    ));
                }
                self.pos += 1;
                Ok(Expr::Name(name.clone()))
            }
            Some((_, Tok::LParen)) => {
                self.pos += 1;
                let inner = self.lattice()?;
                match self.peek() {
                    Some((_, Tok::RParen)) => {
                        self.pos += 1;
                        Ok(Expr::Group(Box::new(inner)))
                    }
                    _ => self.fail("expected `)`"),
                }
            }
            _ => self.fail("expected an expression"),
        }
    }

    /// Parses expressions back to back until the tokens run out.
    fn sequence(&mut self) -> Result<Vec<Expr>> {
        let mut out = Vec::new();
        while !self.done() {
            out.push(self.lattice()?);
        }
        Ok(out)
    }
}

struct Parser<'t> {
    lines: Vec<&'t str>,
    next: usize,
    universe: Option<Arc<ExecutionUniverse>>,
    names: HashSet<String>,
    statements: Vec<Statement>,
}

/// Parses a `.fps` document.
pub fn parse(text: &str) -> Result<Document> {
    let mut parser = Parser {
        lines: text.lines().collect(),
        next: 0,
        universe: None,
        names: HashSet::new(),
        statements: Vec::new(),
    };
    while let Some(mut cursor) = parser.next_line() {
        parser.statement(&mut cursor)?;
    }
    match parser.universe {
        Some(universe) => Ok(Document {
            universe,
            statements: parser.statements,
        }),
        None => Err(error(1, 1, "missing `universe` declaration", "")),
    }
}

impl Parser<'_> {
    /// Next non-blank line.
    fn next_line(&mut self) -> Option<Cursor> {
        while self.next < self.lines.len() {
            let mut cursor = Cursor::new(self.next + 1, self.lines[self.next]);
            self.next += 1;
            if !cursor.at_end() {
                return Some(cursor);
            }
        }
        None
    }

    fn universe(&self) -> &Arc<ExecutionUniverse> {
        self.universe.as_ref().expect("universe is declared first")
    }

    fn statement(&mut self, cur: &mut Cursor) -> Result<()> {
        let line = cur.line;
        let (col, keyword) = cur.keyword();
        if self.universe.is_none() && keyword != "universe" {
            return Err(error(
                line,
                col,
                "expected `universe` declaration first",
                keyword,
            ));
        }
        match keyword.as_str() {
            "universe" => self.universe_decl(cur, col),
            "process" => self.process_block(cur, col),
            "let" => {
                let (name_col, name) = cur.identifier("a binding name")?;
                self.check_fresh(line, name_col, &name)?;
                cur.expect_char('=', "`=`")?;
                let mut exprs = self.expressions(cur)?;
                if exprs.len() != 1 {
                    return Err(error(
                        line,
                        col,
                        "`let` takes exactly one expression",
                        "let",
                    ));
                }
                self.names.insert(name.clone());
                self.statements.push(Statement::Let {
                    name,
                    expr: exprs.remove(0),
                });
                Ok(())
            }
            "assert" => {
                let (kind_col, kind_text) = cur.keyword();
                let kind: AssertionKind = kind_text.parse().map_err(|_| {
                    error(
                        line,
                        kind_col,
                        format!("unknown assertion kind `{kind_text}`"),
                        kind_text.clone(),
                    )
                })?;
                let args = self.expressions(cur)?;
                if args.len() != kind.arity() {
                    return Err(error(
                        line,
                        kind_col,
                        format!(
                            "`assert {kind}` takes {} expression(s), found {}",
                            kind.arity(),
                            args.len()
                        ),
                        kind_text,
                    ));
                }
                self.statements.push(Statement::Assert { kind, args });
                Ok(())
            }
            "query" => self.query(cur),
            "end" => Err(error(
                line,
                col,
                "`end` without a matching `process`",
                keyword,
            )),
            "delta" | "gamma" => Err(error(
                line,
                col,
                format!("`{keyword}` outside a process block"),
                keyword,
            )),
            _ => Err(error(line, col, "unknown statement", keyword)),
        }
    }

    fn universe_decl(&mut self, cur: &mut Cursor, col: usize) -> Result<()> {
        let line = cur.line;
        if self.universe.is_some() {
            return Err(error(
                line,
                col,
                "duplicate `universe` declaration",
                "universe",
            ));
        }
        let mut labels: Vec<String> = Vec::new();
        while let Some((label_col, label)) = cur.word() {
            if !is_label(&label) {
                return Err(error(line, label_col, "invalid execution label", label));
            }
            if labels.contains(&label) {
                return Err(error(
                    line,
                    label_col,
                    format!("duplicate label `{label}`"),
                    label,
                ));
            }
            labels.push(label);
        }
        if labels.is_empty() {
            let end = cur.column();
            return Err(error(line, end, "`universe` needs at least one label", ""));
        }
        self.universe = Some(ExecutionUniverse::new(labels).expect("labels validated above"));
        Ok(())
    }

    fn check_fresh(&self, line: usize, col: usize, name: &str) -> Result<()> {
        if self.names.contains(name) {
            Err(error(line, col, format!("duplicate name `{name}`"), name))
        } else {
            Ok(())
        }
    }

    fn process_block(&mut self, cur: &mut Cursor, col: usize) -> Result<()> {
        let line = cur.line;
        let (name_col, name) = cur.identifier("a process name")?;
        self.check_fresh(line, name_col, &name)?;
        cur.expect_end()?;

        let universe = Arc::clone(self.universe());
        let mut delta: Vec<Option<Rational>> = vec![None; universe.len()];
        let mut gamma: Vec<Option<Rational>> = vec![None; universe.len()];
        loop {
            let Some(mut body) = self.next_line() else {
                return Err(error(
                    line,
                    col,
                    format!("unterminated process block `{name}`"),
                    "process",
                ));
            };
            let (kw_col, kw) = body.keyword();
            match kw.as_str() {
                "delta" => entries(&mut body, &universe, &mut delta)?,
                "gamma" => entries(&mut body, &universe, &mut gamma)?,
                "end" => {
                    body.expect_end()?;
                    break;
                }
                _ => return Err(error(
                    body.line,
                    kw_col,
                    format!(
                        "unterminated process block `{name}`: expected `delta`, `gamma` or `end`"
                    ),
                    kw,
                )),
            }
        }
        let fill = |values: Vec<Option<Rational>>| {
            universe
                .labels()
                .iter()
                .zip(values)
                .filter_map(|(l, v)| v.map(|v| (l.clone(), v)))
                .collect::<Vec<_>>()
        };
        let process = Process::from_maps(&universe, fill(delta), fill(gamma))
            .expect("entries validated while parsing");
        self.names.insert(name.clone());
        self.statements.push(Statement::Process { name, process });
        Ok(())
    }

    fn expressions(&self, cur: &mut Cursor) -> Result<Vec<Expr>> {
        let toks = cur.tokens()?;
        if let Some((col, _)) = toks.iter().find(|(_, t)| *t == Tok::Arrow) {
            return Err(error(
                cur.line,
                *col,
                "`=>` is only allowed in `query chain`",
                "=>",
            ));
        }
        let mut parser = ExprParser {
            line: cur.line,
            toks: &toks,
            pos: 0,
            end_column: cur.column(),
            names: &self.names,
        };
        parser.sequence()
    }

    fn query(&mut self, cur: &mut Cursor) -> Result<()> {
        let line = cur.line;
        let (col, kind) = cur.keyword();
        let query = match kind.as_str() {
            "solve" | "factor" => {
                let arity = if kind == "solve" { 2 } else { 1 };
                let mut args = self.expressions(cur)?;
                if args.len() != arity {
                    return Err(error(
                        line,
                        col,
                        format!(
                            "`query {kind}` takes {arity} expression(s), found {}",
                            args.len()
                        ),
                        kind,
                    ));
                }
                if arity == 2 {
                    let q = args.pop().expect("two arguments");
                    let p = args.pop().expect("two arguments");
                    Query::Solve { p, q }
                } else {
                    Query::Factor(args.remove(0))
                }
            }
            "chain" => {
                let (_, name) = cur.identifier("a chain name")?;
                cur.expect_char(':', "`:` after the chain name")?;
                let end_column = cur.column();
                let toks = cur.tokens()?;
                let mut levels = Vec::new();
                let mut level_cols = Vec::new();
                for segment in toks.split(|(_, t)| *t == Tok::Arrow) {
                    let seg_end = segment
                        .last()
                        .map(|(c, t)| c + t.text().chars().count())
                        .unwrap_or(end_column);
                    let mut parser = ExprParser {
                        line,
                        toks: segment,
                        pos: 0,
                        end_column: seg_end,
                        names: &self.names,
                    };
                    let expr = parser.lattice()?;
                    if !parser.done() {
                        return parser.fail("expected `=>` between chain levels");
                    }
                    level_cols.push(segment[0].0);
                    levels.push(expr);
                }
                if levels.len() < 2 {
                    return Err(error(line, col, "a chain needs at least two levels", kind));
                }
                for (i, pair) in levels.windows(2).enumerate() {
                    if !chain_shapes_compatible(&pair[0], &pair[1]) {
                        return Err(error(
                            line,
                            level_cols[i + 1],
                            format!(
                                "chain level has {} components but the previous level has {}",
                                pair[1].components().len(),
                                pair[0].components().len()
                            ),
                            pair[1].to_string(),
                        ));
                    }
                }
                Query::Chain { name, levels }
            }
            _ => {
                return Err(error(
                    line,
                    col,
                    "unknown query; expected `solve`, `factor` or `chain`",
                    kind,
                ))
            }
        };
        self.statements.push(Statement::Query(query));
        Ok(())
    }
}

/// Parses a single expression over the names bound in `env`, e.g. a
/// command-line operand. Positions refer to line 1 of `text`.
pub fn parse_expression(text: &str, env: &Environment) -> Result<Expr> {
    let names: HashSet<String> = env.bindings.keys().cloned().collect();
    let mut cur = Cursor::new(1, text);
    let toks = cur.tokens()?;
    let mut parser = ExprParser {
        line: 1,
        toks: &toks,
        pos: 0,
        end_column: cur.column(),
        names: &names,
    };
    let expr = parser.lattice()?;
    if !parser.done() {
        return parser.fail("unexpected trailing input");
    }
    Ok(expr)
}

fn entries(
    cur: &mut Cursor,
    universe: &ExecutionUniverse,
    values: &mut [Option<Rational>],
) -> Result<()> {
    let line = cur.line;
    while let Some((col, word)) = cur.word() {
        let Some((label, literal)) = word.split_once('=') else {
            return Err(error(line, col, "expected `label=value`", word));
        };
        let Some(index) = universe.index_of(label) else {
            return Err(error(line, col, format!("unknown label `{label}`"), label));
        };
        if values[index].is_some() {
            return Err(error(
                line,
                col,
                format!("duplicate entry for label `{label}`"),
                label,
            ));
        }
        let value_col = col + label.chars().count() + 1;
        let value = parse_rational(literal).map_err(|e| {
            let message = match e {
                RationalError::Syntax => format!("invalid rational `{literal}`"),
                RationalError::ZeroDenominator => "zero denominator".to_owned(),
                RationalError::Overflow => {
                    format!("rational `{literal}` is too large to represent exactly")
                }
            };
            error(line, value_col, message, literal)
        })?;
        if value > Rational::one() {
            return Err(error(
                line,
                value_col,
                format!("rational {value} out of range [0, 1]"),
                literal,
            ));
        }
        values[index] = Some(value);
    }
    Ok(())
}
