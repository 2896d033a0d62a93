//! Parser for `.fth` theory files, formula strings and plan strings.
//!
//! A theory file has one declaration per line (lines starting with
//! whitespace continue the previous declaration, `#` starts a comment):
//!
//! ```text
//! domain loan
//! objects: n, nprime
//! rigid Male/1
//! fluent hasLoan/1
//! action approve(x)
//! action isMale(x)
//! sense isMale(x): Male(x)
//! poss approve(x): true
//! ssa hasLoan(x): a == approve(x) | hasLoan(x)
//! init_true: Male(n) & !Male(nprime)
//! init_known: true
//! ```
//!
//! Formula syntax, loosest to tightest: `<->`, `->` (right associative),
//! `|`, `&`, then the prefix operators `!` and `[act; ...]`. `forall x.`,
//! `exists x.` and an unparenthesized `K`/`O` extend as far right as
//! possible; `K(...)` takes exactly the parenthesized argument.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{
    ActionDecl, ActionInstance, ActionOperand, ActionTerm, Formula, GroundAtom, ObjectName, PredicateDecl,
    PredicateKind, SsaDecl, Term, ACTION_VAR,
};
use crate::theory::{Theory, RESERVED};

#[derive(Debug, Clone)]
pub struct TheorySource {
    pub text: String,
    /// File path, or `<stdin>`.
    pub origin: String,
}

impl TheorySource {
    pub fn new(text: impl Into<String>, origin: impl Into<String>) -> Self {
        TheorySource { text: text.into(), origin: origin.into() }
    }

    pub fn from_file(path: impl AsRef<std::path::Path>) -> std::io::Result<Self> {
        let path = path.as_ref();
        Ok(TheorySource::new(std::fs::read_to_string(path)?, path.display().to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

/// A located parse message. Line and column are 1-based and count characters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParseDiagnostic {
    pub severity: Severity,
    pub line: u32,
    pub column: u32,
    pub message: String,
}

impl ParseDiagnostic {
    fn error(pos: Pos, message: impl Into<String>) -> Self {
        ParseDiagnostic { severity: Severity::Error, line: pos.line, column: pos.col, message: message.into() }
    }
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}:{}: {sev}: {}", self.line, self.column, self.message)
    }
}

impl From<Vec<ParseDiagnostic>> for Error {
    fn from(d: Vec<ParseDiagnostic>) -> Self {
        Error::Parse(d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: u32,
    col: u32,
}

// ---------------------------------------------------------------------------
// Lexer

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(usize),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Dot,
    Colon,
    Slash,
    Bang,
    Amp,
    Pipe,
    Arrow,
    DArrow,
    EqEq,
    NotEq,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "`{s}`"),
            Tok::Number(n) => return write!(f, "`{n}`"),
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBracket => "`[`",
            Tok::RBracket => "`]`",
            Tok::Comma => "`,`",
            Tok::Semi => "`;`",
            Tok::Dot => "`.`",
            Tok::Colon => "`:`",
            Tok::Slash => "`/`",
            Tok::Bang => "`!`",
            Tok::Amp => "`&`",
            Tok::Pipe => "`|`",
            Tok::Arrow => "`->`",
            Tok::DArrow => "`<->`",
            Tok::EqEq => "`==`",
            Tok::NotEq => "`!=`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    pos: Pos,
}

/// Characters tagged with their source position.
type Chars = Vec<(char, Pos)>;

fn chars_of(text: &str, line: u32, col: u32) -> Chars {
    text.chars().enumerate().map(|(i, c)| (c, Pos { line, col: col + i as u32 })).collect()
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn lex(chars: &[(char, Pos)], end: Pos) -> std::result::Result<Vec<Token>, ParseDiagnostic> {
    let mut out = Vec::new();
    let mut i = 0;
    let peek = |i: usize| chars.get(i).map(|(c, _)| *c);
    while i < chars.len() {
        let (c, pos) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if is_ident_start(c) {
            let start = i;
            while i < chars.len() && is_ident_char(chars[i].0) {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|(c, _)| *c).collect();
            out.push(Token { tok: Tok::Ident(s), pos });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].0.is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|(c, _)| *c).collect();
            let n = s.parse().map_err(|_| ParseDiagnostic::error(pos, format!("number `{s}` is too large")))?;
            out.push(Token { tok: Tok::Number(n), pos });
            continue;
        }
        let (tok, len) = match (c, peek(i + 1), peek(i + 2)) {
            ('<', Some('-'), Some('>')) => (Tok::DArrow, 3),
            ('-', Some('>'), _) => (Tok::Arrow, 2),
            ('=', Some('='), _) => (Tok::EqEq, 2),
            ('!', Some('='), _) => (Tok::NotEq, 2),
            ('(', ..) => (Tok::LParen, 1),
            (')', ..) => (Tok::RParen, 1),
            ('[', ..) => (Tok::LBracket, 1),
            (']', ..) => (Tok::RBracket, 1),
            (',', ..) => (Tok::Comma, 1),
            (';', ..) => (Tok::Semi, 1),
            ('.', ..) => (Tok::Dot, 1),
            (':', ..) => (Tok::Colon, 1),
            ('/', ..) => (Tok::Slash, 1),
            ('!', ..) => (Tok::Bang, 1),
            ('&', ..) => (Tok::Amp, 1),
            ('|', ..) => (Tok::Pipe, 1),
            _ => return Err(ParseDiagnostic::error(pos, format!("unexpected character `{c}`"))),
        };
        out.push(Token { tok, pos });
        i += len;
    }
    out.push(Token { tok: Tok::Eof, pos: end });
    Ok(out)
}

// ---------------------------------------------------------------------------
// Formula parser

/// Where a formula appears; decides which constructs are allowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Context {
    Query,
    Ssa,
    Sensing,
    Precondition,
    InitTrue,
    InitKnown,
}

impl Context {
    fn is_static(self) -> bool {
        self != Context::Query
    }

    fn describe(self) -> &'static str {
        match self {
            Context::Query => "query",
            Context::Ssa => "SSA",
            Context::Sensing => "sensing axiom",
            Context::Precondition => "precondition axiom",
            Context::InitTrue => "init_true",
            Context::InitKnown => "init_known",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VarKind {
    Object,
    Action,
}

/// Symbol table view used by the formula parser.
struct Symbols<'a> {
    objects: &'a [ObjectName],
    predicates: &'a [PredicateDecl],
    actions: &'a [(String, usize)],
}

impl Symbols<'_> {
    fn object(&self, name: &str) -> Option<&ObjectName> {
        self.objects.iter().find(|o| o.as_str() == name)
    }

    fn predicate(&self, name: &str) -> Option<&PredicateDecl> {
        self.predicates.iter().find(|p| p.name == name)
    }

    fn action_arity(&self, name: &str) -> Option<usize> {
        self.actions.iter().find(|(n, _)| n == name).map(|(_, a)| *a)
    }
}

struct FormulaParser<'a> {
    toks: Vec<Token>,
    i: usize,
    syms: &'a Symbols<'a>,
    scope: Vec<(String, VarKind)>,
    ctx: Context,
}

type PResult<T> = std::result::Result<T, ParseDiagnostic>;

impl<'a> FormulaParser<'a> {
    fn new(toks: Vec<Token>, syms: &'a Symbols<'a>, ctx: Context, scope: Vec<(String, VarKind)>) -> Self {
        FormulaParser { toks, i: 0, syms, scope, ctx }
    }

    fn peek(&self) -> &Token {
        &self.toks[self.i]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.i].clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if &self.peek().tok == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok) -> PResult<Token> {
        if &self.peek().tok == tok {
            Ok(self.bump())
        } else {
            let t = self.peek();
            Err(ParseDiagnostic::error(t.pos, format!("expected {tok}, found {}", t.tok)))
        }
    }

    fn expect_ident(&mut self, what: &str) -> PResult<(String, Pos)> {
        let t = self.bump();
        match t.tok {
            Tok::Ident(s) => Ok((s, t.pos)),
            other => Err(ParseDiagnostic::error(t.pos, format!("expected {what}, found {other}"))),
        }
    }

    fn finish(&mut self) -> PResult<()> {
        let t = self.peek();
        if t.tok == Tok::Eof {
            Ok(())
        } else {
            Err(ParseDiagnostic::error(t.pos, format!("unexpected {} after formula", t.tok)))
        }
    }

    fn lookup(&self, name: &str) -> Option<VarKind> {
        self.scope.iter().rev().find(|(n, _)| n == name).map(|(_, k)| *k)
    }

    fn static_violation(&self, pos: Pos, what: &str) -> ParseDiagnostic {
        let msg = match self.ctx {
            Context::Ssa => format!("modal operator in SSA: {what} is not allowed here"),
            ctx => format!("modal operator in {}: {what} is not allowed here", ctx.describe()),
        };
        ParseDiagnostic::error(pos, msg)
    }

    fn formula(&mut self) -> PResult<Formula> {
        let mut lhs = self.implication()?;
        while self.eat(&Tok::DArrow) {
            let rhs = self.implication()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> PResult<Formula> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut lhs = self.conjunction()?;
        while self.eat(&Tok::Pipe) {
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::Amp) {
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Formula> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Bang => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LBracket => {
                if self.ctx.is_static() {
                    return Err(self.static_violation(t.pos, "`[...]`"));
                }
                self.bump();
                let mut acts = Vec::new();
                let mut trailing_semi = false;
                while self.peek().tok != Tok::RBracket {
                    acts.push(self.action_term()?);
                    trailing_semi = self.eat(&Tok::Semi);
                    if !trailing_semi {
                        break;
                    }
                }
                self.expect(&Tok::RBracket)?;
                let body = self.unary()?;
                if acts.len() == 1 && !trailing_semi {
                    Ok(Formula::AfterAction(acts.pop().unwrap(), Box::new(body)))
                } else {
                    Ok(Formula::AfterPlan(acts, Box::new(body)))
                }
            }
            Tok::Ident(s) if s == "forall" || s == "exists" => {
                let universal = s == "forall";
                self.bump();
                let mut vars = vec![self.binder()?];
                while self.eat(&Tok::Comma) {
                    vars.push(self.binder()?);
                }
                self.expect(&Tok::Dot)?;
                for v in &vars {
                    self.scope.push((v.clone(), VarKind::Object));
                }
                let body = self.formula();
                self.scope.truncate(self.scope.len() - vars.len());
                let mut body = body?;
                for v in vars.into_iter().rev() {
                    body = if universal { Formula::forall(v, body) } else { Formula::exists(v, body) };
                }
                Ok(body)
            }
            Tok::Ident(s) if (s == "K" || s == "O") && self.lookup(s).is_none() => {
                if self.ctx.is_static() {
                    return Err(self.static_violation(t.pos, &format!("`{s}`")));
                }
                let knows = s == "K";
                self.bump();
                let body = if self.eat(&Tok::LParen) {
                    let f = self.formula()?;
                    self.expect(&Tok::RParen)?;
                    f
                } else {
                    self.formula()?
                };
                Ok(if knows { Formula::knows(body) } else { Formula::only_knows(body) })
            }
            _ => self.primary(),
        }
    }

    fn binder(&mut self) -> PResult<String> {
        let (name, pos) = self.expect_ident("a variable name")?;
        if RESERVED.contains(&name.as_str()) {
            return Err(ParseDiagnostic::error(pos, format!("`{name}` is reserved and cannot be a variable")));
        }
        Ok(name)
    }

    fn primary(&mut self) -> PResult<Formula> {
        let t = self.bump();
        let name = match t.tok {
            Tok::LParen => {
                let f = self.formula()?;
                self.expect(&Tok::RParen)?;
                return Ok(f);
            }
            Tok::Ident(s) => s,
            other => return Err(ParseDiagnostic::error(t.pos, format!("expected a formula, found {other}"))),
        };
        match name.as_str() {
            "true" => return Ok(Formula::True),
            "false" => return Ok(Formula::False),
            "SF" | "Poss" => {
                if self.ctx.is_static() {
                    return Err(self.static_violation(t.pos, &format!("`{name}`")));
                }
                self.expect(&Tok::LParen)?;
                let act = self.action_term()?;
                self.expect(&Tok::RParen)?;
                return Ok(if name == "SF" { Formula::Sense(act) } else { Formula::Poss(act) });
            }
            _ => {}
        }
        if let Some(kind) = self.lookup(&name) {
            return match kind {
                VarKind::Object => self.term_equality(Term::Var(name)),
                VarKind::Action => self.action_equality(ActionOperand::Var(name), t.pos),
            };
        }
        if let Some(decl) = self.syms.predicate(&name) {
            let arity = decl.arity;
            let args = if self.peek().tok == Tok::LParen { self.term_list()? } else { Vec::new() };
            if args.len() != arity {
                return Err(ParseDiagnostic::error(
                    t.pos,
                    format!("arity mismatch: `{name}` expects {arity} argument(s), found {}", args.len()),
                ));
            }
            return Ok(Formula::atom(name, args));
        }
        if self.syms.action_arity(&name).is_some() {
            let act = self.action_term_named(name, t.pos)?;
            return self.action_equality(ActionOperand::Term(act), t.pos);
        }
        if let Some(o) = self.syms.object(&name) {
            return self.term_equality(Term::Obj(o.clone()));
        }
        Err(ParseDiagnostic::error(t.pos, format!("unknown symbol `{name}`")))
    }

    fn term_equality(&mut self, lhs: Term) -> PResult<Formula> {
        let op = self.bump();
        let negate = match op.tok {
            Tok::EqEq => false,
            Tok::NotEq => true,
            other => {
                return Err(ParseDiagnostic::error(
                    op.pos,
                    format!("expected `==` or `!=` after term `{lhs}`, found {other}"),
                ))
            }
        };
        let rhs = self.term()?;
        let eq = Formula::TermEq(lhs, rhs);
        Ok(if negate { Formula::not(eq) } else { eq })
    }

    fn action_equality(&mut self, lhs: ActionOperand, pos: Pos) -> PResult<Formula> {
        let op = self.bump();
        let negate = match op.tok {
            Tok::EqEq => false,
            Tok::NotEq => true,
            _ => {
                return Err(ParseDiagnostic::error(
                    pos,
                    format!("action `{lhs}` can only appear in an equality, SF(...), Poss(...) or [...]"),
                ))
            }
        };
        let rhs = self.action_term()?;
        let eq = Formula::ActionEq(lhs, rhs);
        Ok(if negate { Formula::not(eq) } else { eq })
    }

    fn term(&mut self) -> PResult<Term> {
        let (name, pos) = self.expect_ident("a term")?;
        match self.lookup(&name) {
            Some(VarKind::Object) => return Ok(Term::Var(name)),
            Some(VarKind::Action) => {
                return Err(ParseDiagnostic::error(pos, format!("action variable `{name}` used as an object")))
            }
            None => {}
        }
        if let Some(o) = self.syms.object(&name) {
            return Ok(Term::Obj(o.clone()));
        }
        Err(ParseDiagnostic::error(pos, format!("unknown object or unbound variable `{name}`")))
    }

    fn term_list(&mut self) -> PResult<Vec<Term>> {
        self.expect(&Tok::LParen)?;
        let mut args = Vec::new();
        if self.eat(&Tok::RParen) {
            return Ok(args);
        }
        loop {
            args.push(self.term()?);
            if self.eat(&Tok::RParen) {
                return Ok(args);
            }
            self.expect(&Tok::Comma)?;
        }
    }

    fn action_term(&mut self) -> PResult<ActionTerm> {
        let (name, pos) = self.expect_ident("an action")?;
        self.action_term_named(name, pos)
    }

    fn action_term_named(&mut self, name: String, pos: Pos) -> PResult<ActionTerm> {
        let Some(arity) = self.syms.action_arity(&name) else {
            return Err(ParseDiagnostic::error(pos, format!("unknown action `{name}`")));
        };
        let args = if self.peek().tok == Tok::LParen { self.term_list()? } else { Vec::new() };
        if args.len() != arity {
            return Err(ParseDiagnostic::error(
                pos,
                format!("arity mismatch: action `{name}` expects {arity} argument(s), found {}", args.len()),
            ));
        }
        Ok(ActionTerm { action: name, args })
    }
}

fn action_arities(theory: &Theory) -> Vec<(String, usize)> {
    theory.actions.iter().map(|a| (a.name.clone(), a.arity())).collect()
}

fn parse_formula_tokens(
    chars: &[(char, Pos)],
    end: Pos,
    syms: &Symbols<'_>,
    ctx: Context,
    scope: Vec<(String, VarKind)>,
) -> PResult<Formula> {
    let toks = lex(chars, end)?;
    let mut p = FormulaParser::new(toks, syms, ctx, scope);
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

fn end_of(text: &str) -> Pos {
    let mut line = 1;
    let mut col = 1;
    for c in text.chars() {
        if c == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    Pos { line, col }
}

fn chars_multiline(text: &str) -> Chars {
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    for c in text.chars() {
        out.push((c, Pos { line, col }));
        if c == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    out
}

/// Parse a closed formula against the theory's symbols.
pub fn parse_formula(text: &str, theory: &Theory) -> Result<Formula, Vec<ParseDiagnostic>> {
    parse_formula_with_free(text, theory, &[])
}

/// Parse a formula whose free variables are among `free`.
pub fn parse_formula_with_free(
    text: &str,
    theory: &Theory,
    free: &[&str],
) -> Result<Formula, Vec<ParseDiagnostic>> {
    let actions = action_arities(theory);
    let syms = Symbols { objects: &theory.objects, predicates: &theory.predicates, actions: &actions };
    let scope = free.iter().map(|v| (v.to_string(), VarKind::Object)).collect();
    parse_formula_tokens(&chars_multiline(text), end_of(text), &syms, Context::Query, scope).map_err(|d| vec![d])
}

/// Parse `act; act; ...` into ground action instances. Blank input is the
/// empty plan.
pub fn parse_plan(text: &str, theory: &Theory) -> Result<Vec<ActionInstance>, Vec<ParseDiagnostic>> {
    let actions = action_arities(theory);
    let syms = Symbols { objects: &theory.objects, predicates: &theory.predicates, actions: &actions };
    let toks = lex(&chars_multiline(text), end_of(text)).map_err(|d| vec![d])?;
    let mut p = FormulaParser::new(toks, &syms, Context::Query, Vec::new());
    let mut plan = Vec::new();
    let run = |p: &mut FormulaParser<'_>, plan: &mut Vec<ActionInstance>| -> PResult<()> {
        while p.peek().tok != Tok::Eof {
            let pos = p.peek().pos;
            let term = p.action_term()?;
            let inst = term
                .to_instance()
                .ok_or_else(|| ParseDiagnostic::error(pos, format!("non-ground action `{term}` in plan")))?;
            plan.push(inst);
            if !p.eat(&Tok::Semi) {
                break;
            }
        }
        p.finish()
    };
    run(&mut p, &mut plan).map_err(|d| vec![d])?;
    Ok(plan)
}

/// Parse a comma-separated list of ground atoms, e.g. `Eligible(n), Male(n)`.
pub fn parse_atoms(text: &str, theory: &Theory) -> Result<Vec<GroundAtom>, Vec<ParseDiagnostic>> {
    let actions = action_arities(theory);
    let syms = Symbols { objects: &theory.objects, predicates: &theory.predicates, actions: &actions };
    let toks = lex(&chars_multiline(text), end_of(text)).map_err(|d| vec![d])?;
    let mut p = FormulaParser::new(toks, &syms, Context::Query, Vec::new());
    let mut atoms: Vec<GroundAtom> = Vec::new();
    let run = |p: &mut FormulaParser<'_>, atoms: &mut Vec<GroundAtom>| -> PResult<()> {
        while p.peek().tok != Tok::Eof {
            let pos = p.peek().pos;
            match p.primary()? {
                Formula::Atom { predicate, args } => {
                    let args = args
                        .into_iter()
                        .map(|t| match t {
                            Term::Obj(o) => Some(o),
                            Term::Var(_) => None,
                        })
                        .collect::<Option<Vec<_>>>()
                        .ok_or_else(|| ParseDiagnostic::error(pos, "atoms must be ground"))?;
                    let atom = GroundAtom::new(predicate, args);
                    if !atoms.contains(&atom) {
                        atoms.push(atom);
                    }
                }
                other => return Err(ParseDiagnostic::error(pos, format!("expected a ground atom, found `{other}`"))),
            }
            if !p.eat(&Tok::Comma) {
                break;
            }
        }
        p.finish()
    };
    run(&mut p, &mut atoms).map_err(|d| vec![d])?;
    Ok(atoms)
}

// ---------------------------------------------------------------------------
// Theory files

/// One logical declaration, possibly spanning continuation lines.
struct Decl {
    chars: Chars,
    start: Pos,
    end: Pos,
}

fn split_declarations(text: &str) -> Vec<Decl> {
    let mut decls: Vec<Decl> = Vec::new();
    for (idx, raw) in text.split('\n').enumerate() {
        let line_no = idx as u32 + 1;
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        let content = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        if content.trim().is_empty() {
            continue;
        }
        let chars = chars_of(content, line_no, 1);
        let end = Pos { line: line_no, col: content.chars().count() as u32 + 1 };
        let continues = content.starts_with(char::is_whitespace) && !decls.is_empty();
        if continues {
            let last = decls.last_mut().unwrap();
            // a separator so tokens never fuse across lines
            last.chars.push((' ', last.end));
            last.chars.extend(chars);
            last.end = end;
        } else {
            let first = content.chars().position(|c| !c.is_whitespace()).unwrap_or(0) as u32;
            decls.push(Decl { chars, start: Pos { line: line_no, col: first + 1 }, end });
        }
    }
    decls
}

/// A declaration header (`sense`, `poss`, `ssa`, `init_*`) whose formula is
/// parsed in the second pass, once every symbol is known.
struct Pending {
    kind: PendingKind,
    name: String,
    name_pos: Pos,
    params: Vec<String>,
    body: Chars,
    end: Pos,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum PendingKind {
    Sense,
    Poss,
    Ssa,
    InitTrue,
    InitKnown,
}

struct TheoryBuilder {
    name: Option<String>,
    objects: Vec<ObjectName>,
    predicates: Vec<PredicateDecl>,
    actions: Vec<(String, Vec<String>, Pos)>,
    pending: Vec<Pending>,
    declared: Vec<(String, Pos)>,
    predicate_pos: Vec<Pos>,
    diags: Vec<ParseDiagnostic>,
}

impl TheoryBuilder {
    fn declare(&mut self, name: &str, pos: Pos) -> bool {
        if RESERVED.contains(&name) {
            self.diags.push(ParseDiagnostic::error(pos, format!("`{name}` is reserved")));
            return false;
        }
        if let Some((_, first)) = self.declared.iter().find(|(n, _)| n == name) {
            let msg = format!("duplicate declaration of `{name}` (first declared at {}:{})", first.line, first.col);
            self.diags.push(ParseDiagnostic::error(pos, msg));
            return false;
        }
        self.declared.push((name.to_string(), pos));
        true
    }
}

/// Parse and validate a theory file.
pub fn parse_theory(src: &TheorySource) -> Result<Theory, Vec<ParseDiagnostic>> {
    let mut b = TheoryBuilder {
        name: None,
        objects: Vec::new(),
        predicates: Vec::new(),
        actions: Vec::new(),
        pending: Vec::new(),
        declared: Vec::new(),
        predicate_pos: Vec::new(),
        diags: Vec::new(),
    };
    for decl in split_declarations(&src.text) {
        if let Err(d) = header(&mut b, &decl) {
            b.diags.push(d);
        }
    }
    let actions: Vec<(String, usize)> = b.actions.iter().map(|(n, p, _)| (n.clone(), p.len())).collect();
    let syms = Symbols { objects: &b.objects, predicates: &b.predicates, actions: &actions };

    let mut sensing: Vec<Option<Formula>> = vec![None; b.actions.len()];
    let mut preconditions: Vec<Option<Formula>> = vec![None; b.actions.len()];
    let mut ssas: Vec<SsaDecl> = Vec::new();
    let mut init_true = None;
    let mut init_known = None;
    let mut diags = std::mem::take(&mut b.diags);

    for p in &b.pending {
        let ctx = match p.kind {
            PendingKind::Sense => Context::Sensing,
            PendingKind::Poss => Context::Precondition,
            PendingKind::Ssa => Context::Ssa,
            PendingKind::InitTrue => Context::InitTrue,
            PendingKind::InitKnown => Context::InitKnown,
        };
        // resolve the header symbol first
        let mut scope: Vec<(String, VarKind)> = p.params.iter().map(|v| (v.clone(), VarKind::Object)).collect();
        let slot = match p.kind {
            PendingKind::Sense | PendingKind::Poss => {
                let Some(idx) = b.actions.iter().position(|(n, _, _)| *n == p.name) else {
                    diags.push(ParseDiagnostic::error(p.name_pos, format!("unknown action `{}`", p.name)));
                    continue;
                };
                let declared = &b.actions[idx].1;
                if declared.len() != p.params.len() {
                    diags.push(ParseDiagnostic::error(
                        p.name_pos,
                        format!("arity mismatch: action `{}` expects {} parameter(s)", p.name, declared.len()),
                    ));
                    continue;
                }
                if *declared != p.params {
                    diags.push(ParseDiagnostic::error(
                        p.name_pos,
                        format!("parameter names must match the declaration `action {}({})`", p.name, declared.join(", ")),
                    ));
                    continue;
                }
                let table = if p.kind == PendingKind::Sense { &sensing } else { &preconditions };
                if table[idx].is_some() {
                    let what = if p.kind == PendingKind::Sense { "sensing" } else { "precondition" };
                    diags.push(ParseDiagnostic::error(
                        p.name_pos,
                        format!("duplicate {what} axiom for `{}`", p.name),
                    ));
                    continue;
                }
                Some(idx)
            }
            PendingKind::Ssa => {
                let Some(decl) = b.predicates.iter().find(|d| d.name == p.name) else {
                    diags.push(ParseDiagnostic::error(p.name_pos, format!("unknown fluent `{}`", p.name)));
                    continue;
                };
                if decl.kind != PredicateKind::Fluent {
                    diags.push(ParseDiagnostic::error(
                        p.name_pos,
                        format!("`{}` is rigid; rigid predicates have no successor state axiom", p.name),
                    ));
                    continue;
                }
                if decl.arity != p.params.len() {
                    diags.push(ParseDiagnostic::error(
                        p.name_pos,
                        format!("arity mismatch: fluent `{}` expects {} parameter(s)", p.name, decl.arity),
                    ));
                    continue;
                }
                if ssas.iter().any(|s| s.fluent == p.name) {
                    diags.push(ParseDiagnostic::error(
                        p.name_pos,
                        format!("duplicate SSA for fluent `{}`", p.name),
                    ));
                    continue;
                }
                scope.push((ACTION_VAR.to_string(), VarKind::Action));
                None
            }
            PendingKind::InitTrue | PendingKind::InitKnown => {
                let seen = if p.kind == PendingKind::InitTrue { init_true.is_some() } else { init_known.is_some() };
                if seen {
                    diags.push(ParseDiagnostic::error(p.name_pos, format!("duplicate `{}` section", p.name)));
                    continue;
                }
                None
            }
        };
        let f = match parse_formula_tokens(&p.body, p.end, &syms, ctx, scope) {
            Ok(f) => f,
            Err(d) => {
                diags.push(d);
                continue;
            }
        };
        match p.kind {
            PendingKind::Sense => sensing[slot.unwrap()] = Some(f),
            PendingKind::Poss => preconditions[slot.unwrap()] = Some(f),
            PendingKind::Ssa => ssas.push(SsaDecl { fluent: p.name.clone(), params: p.params.clone(), rhs: f }),
            PendingKind::InitTrue => init_true = Some(f),
            PendingKind::InitKnown => init_known = Some(f),
        }
    }

    if b.objects.is_empty() && diags.is_empty() {
        diags.push(ParseDiagnostic::error(Pos { line: 1, col: 1 }, "no objects declared (`objects: ...`)"));
    }
    for (decl, pos) in b.predicates.iter().zip(&b.predicate_pos) {
        if decl.kind == PredicateKind::Fluent && !ssas.iter().any(|s| s.fluent == decl.name) {
            // an SSA line that failed to parse has already been reported
            let attempted = b.pending.iter().any(|p| p.kind == PendingKind::Ssa && p.name == decl.name);
            if !attempted {
                diags.push(ParseDiagnostic::error(
                    *pos,
                    format!("fluent `{}` has no successor state axiom (`ssa {}(...): ...`)", decl.name, decl.name),
                ));
            }
        }
    }
    if !diags.is_empty() {
        diags.sort_by_key(|d| (d.line, d.column));
        return Err(diags);
    }

    // ssas in fluent declaration order for a canonical theory
    ssas.sort_by_key(|s| b.predicates.iter().position(|p| p.name == s.fluent));
    let theory = Theory {
        name: b.name.unwrap_or_else(|| "unnamed".to_string()),
        objects: b.objects,
        predicates: b.predicates,
        actions: b
            .actions
            .into_iter()
            .zip(sensing.into_iter().zip(preconditions))
            .map(|((name, params, _), (sensing, precondition))| ActionDecl {
                name,
                params,
                sensing,
                precondition: precondition.unwrap_or(Formula::True),
            })
            .collect(),
        ssas,
        init_true: init_true.unwrap_or(Formula::True),
        init_known: init_known.unwrap_or(Formula::True),
    };
    theory
        .validate()
        .map_err(|e| vec![ParseDiagnostic::error(Pos { line: 1, col: 1 }, e.to_string())])?;
    Ok(theory)
}

/// First pass over one declaration: record symbols, defer formulas.
fn header(b: &mut TheoryBuilder, decl: &Decl) -> PResult<()> {
    // keyword, then everything after the first top-level `:` is a formula
    let colon = decl.chars.iter().position(|(c, _)| *c == ':');
    let head_chars = match colon {
        Some(i) => &decl.chars[..i],
        None => &decl.chars[..],
    };
    let head_end = colon.map(|i| decl.chars[i].1).unwrap_or(decl.end);
    let toks = lex(head_chars, head_end)?;
    let mut p = HeaderCursor { toks, i: 0 };
    let (kw, kw_pos) = p.ident("a declaration keyword")?;
    let body = |what: &str| -> PResult<Chars> {
        match colon {
            Some(i) => Ok(decl.chars[i + 1..].to_vec()),
            None => Err(ParseDiagnostic::error(decl.end, format!("expected `:` followed by {what}"))),
        }
    };
    match kw.as_str() {
        "domain" => {
            let (name, pos) = p.ident("a domain name")?;
            p.end()?;
            if colon.is_some() {
                return Err(ParseDiagnostic::error(decl.start, "unexpected `:` in domain declaration"));
            }
            if b.name.is_some() {
                return Err(ParseDiagnostic::error(pos, "duplicate `domain` declaration"));
            }
            b.name = Some(name);
        }
        "objects" => {
            p.end()?;
            let chars = body("a list of object names")?;
            let toks = lex(&chars, decl.end)?;
            let mut q = HeaderCursor { toks, i: 0 };
            loop {
                let (name, pos) = q.ident("an object name")?;
                if name == ACTION_VAR {
                    return Err(ParseDiagnostic::error(pos, "`a` is reserved for the action variable"));
                }
                if b.declare(&name, pos) {
                    b.objects.push(ObjectName::new(name));
                }
                if q.peek() == &Tok::Eof {
                    break;
                }
                q.expect(&Tok::Comma)?;
            }
        }
        "rigid" | "fluent" => {
            let (name, pos) = p.ident("a predicate name")?;
            p.expect(&Tok::Slash)?;
            let arity = p.number()?;
            p.end()?;
            if colon.is_some() {
                return Err(ParseDiagnostic::error(decl.start, "unexpected `:` in predicate declaration"));
            }
            if b.declare(&name, pos) {
                let kind = if kw == "rigid" { PredicateKind::Rigid } else { PredicateKind::Fluent };
                b.predicates.push(PredicateDecl { name, arity, kind });
                b.predicate_pos.push(pos);
            }
        }
        "action" => {
            let (name, pos) = p.ident("an action name")?;
            let params = p.params()?;
            p.end()?;
            if colon.is_some() {
                return Err(ParseDiagnostic::error(decl.start, "unexpected `:` in action declaration"));
            }
            if b.declare(&name, pos) {
                b.actions.push((name, params, pos));
            }
        }
        "sense" | "poss" | "ssa" => {
            let (name, name_pos) = p.ident(if kw == "ssa" { "a fluent name" } else { "an action name" })?;
            let params = p.params()?;
            p.end()?;
            let kind = match kw.as_str() {
                "sense" => PendingKind::Sense,
                "poss" => PendingKind::Poss,
                _ => PendingKind::Ssa,
            };
            b.pending.push(Pending { kind, name, name_pos, params, body: body("a formula")?, end: decl.end });
        }
        "init_true" | "init_known" => {
            p.end()?;
            let kind = if kw == "init_true" { PendingKind::InitTrue } else { PendingKind::InitKnown };
            b.pending.push(Pending {
                kind,
                name: kw.clone(),
                name_pos: kw_pos,
                params: Vec::new(),
                body: body("a formula")?,
                end: decl.end,
            });
        }
        other => {
            return Err(ParseDiagnostic::error(kw_pos, format!("unknown declaration `{other}`")));
        }
    }
    Ok(())
}

struct HeaderCursor {
    toks: Vec<Token>,
    i: usize,
}

impl HeaderCursor {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.i].clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn ident(&mut self, what: &str) -> PResult<(String, Pos)> {
        let t = self.bump();
        match t.tok {
            Tok::Ident(s) => Ok((s, t.pos)),
            other => Err(ParseDiagnostic::error(t.pos, format!("expected {what}, found {other}"))),
        }
    }

    fn number(&mut self) -> PResult<usize> {
        let t = self.bump();
        match t.tok {
            Tok::Number(n) => Ok(n),
            other => Err(ParseDiagnostic::error(t.pos, format!("expected an arity, found {other}"))),
        }
    }

    fn expect(&mut self, tok: &Tok) -> PResult<()> {
        let t = self.bump();
        if &t.tok == tok {
            Ok(())
        } else {
            Err(ParseDiagnostic::error(t.pos, format!("expected {tok}, found {}", t.tok)))
        }
    }

    fn end(&mut self) -> PResult<()> {
        let t = &self.toks[self.i];
        if t.tok == Tok::Eof {
            Ok(())
        } else {
            Err(ParseDiagnostic::error(t.pos, format!("unexpected {}", t.tok)))
        }
    }

    /// Optional `(v1, v2, ...)` parameter list of distinct variables.
    fn params(&mut self) -> PResult<Vec<String>> {
        let mut params: Vec<String> = Vec::new();
        if self.peek() != &Tok::LParen {
            return Ok(params);
        }
        self.bump();
        if self.peek() == &Tok::RParen {
            self.bump();
            return Ok(params);
        }
        loop {
            let (name, pos) = self.ident("a parameter name")?;
            if name == ACTION_VAR {
                return Err(ParseDiagnostic::error(pos, "`a` is reserved for the action variable"));
            }
            if RESERVED.contains(&name.as_str()) {
                return Err(ParseDiagnostic::error(pos, format!("`{name}` is reserved")));
            }
            if params.contains(&name) {
                return Err(ParseDiagnostic::error(pos, format!("parameter `{name}` repeated")));
            }
            params.push(name);
            match self.bump() {
                Token { tok: Tok::Comma, .. } => continue,
                Token { tok: Tok::RParen, .. } => return Ok(params),
                t => return Err(ParseDiagnostic::error(t.pos, format!("expected `,` or `)`, found {}", t.tok))),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;

    fn loan() -> Theory {
        bundled::loan()
    }

    fn src(text: &str) -> TheorySource {
        TheorySource::new(text, "<test>")
    }

    const MINI: &str = "domain mini\nobjects: n, m\nrigid Male/1\nfluent hasLoan/1\naction approve(x)\n";

    #[test]
    fn loan_theory_shape() {
        let t = loan();
        assert_eq!(t.objects.len(), 2);
        let rigid = t.predicates.iter().filter(|p| p.kind == PredicateKind::Rigid).count();
        let fluent = t.predicates.iter().filter(|p| p.kind == PredicateKind::Fluent).count();
        assert_eq!((rigid, fluent), (2, 2));
        assert_eq!(t.actions.len(), 5);
        assert!(t.actions.iter().all(|a| a.precondition == Formula::True));
        assert!(t.action("isMale").unwrap().sensing.is_some());
        assert!(t.action("approve").unwrap().sensing.is_none());
    }

    #[test]
    fn modal_in_ssa_is_reported_at_operator() {
        let text = format!("{MINI}ssa hasLoan(x): K(hasLoan(x))\n");
        let err = parse_theory(&src(&text)).unwrap_err();
        assert_eq!(err.len(), 1);
        assert!(err[0].message.contains("modal operator in SSA"), "{}", err[0].message);
        assert_eq!((err[0].line, err[0].column), (6, 17));
    }

    #[test]
    fn duplicate_predicate_declaration() {
        let text = format!("{MINI}rigid Male/1\nssa hasLoan(x): hasLoan(x)\n");
        let err = parse_theory(&src(&text)).unwrap_err();
        assert!(err[0].message.contains("duplicate declaration of `Male`"));
        assert_eq!((err[0].line, err[0].column), (6, 7));
    }

    #[test]
    fn duplicate_ssa_and_missing_ssa() {
        let text = format!("{MINI}ssa hasLoan(x): hasLoan(x)\nssa hasLoan(y): hasLoan(y)\n");
        let err = parse_theory(&src(&text)).unwrap_err();
        assert!(err[0].message.contains("duplicate SSA"));
        assert_eq!(err[0].line, 7);

        let err = parse_theory(&src(MINI)).unwrap_err();
        assert!(err[0].message.contains("no successor state axiom"));
        assert_eq!((err[0].line, err[0].column), (4, 8));
    }

    #[test]
    fn unknown_symbol_and_arity_mismatch_in_theory() {
        let text = format!("{MINI}ssa hasLoan(x): hasLoan(x)\ninit_true: Female(n)\n");
        let err = parse_theory(&src(&text)).unwrap_err();
        assert!(err[0].message.contains("unknown symbol `Female`"));
        assert_eq!((err[0].line, err[0].column), (7, 12));

        let text = format!("{MINI}ssa hasLoan(x): hasLoan(x)\ninit_true: Male(n, m)\n");
        let err = parse_theory(&src(&text)).unwrap_err();
        assert!(err[0].message.contains("arity mismatch"));
    }

    #[test]
    fn modal_in_init_rejected() {
        let text = format!("{MINI}ssa hasLoan(x): hasLoan(x)\ninit_known: [approve(n)] hasLoan(n)\n");
        let err = parse_theory(&src(&text)).unwrap_err();
        assert!(err[0].message.contains("init_known"));
        assert_eq!((err[0].line, err[0].column), (7, 13));
    }

    #[test]
    fn crlf_comments_and_continuations() {
        let text = "domain t\r\nobjects: n # one object\r\nfluent p/0\r\naction go\r\nssa p: a == go()\r\n   | p\r\n";
        let t = parse_theory(&src(text)).unwrap();
        let rhs = &t.ssa("p").unwrap().rhs;
        assert!(matches!(rhs, Formula::Or(..)));
    }

    #[test]
    fn parse_formula_examples() {
        let t = loan();
        let f = parse_formula("forall x. hasLoan(x)", &t).unwrap();
        assert_eq!(f, Formula::forall("x", Formula::atom("hasLoan", vec![Term::Var("x".into())])));

        let f = parse_formula("K(!exists x. Male(x))", &t).unwrap();
        let male_x = Formula::atom("Male", vec![Term::Var("x".into())]);
        assert_eq!(f, Formula::knows(Formula::not(Formula::exists("x", male_x))));

        let f = parse_formula("[approve(n)] K hasLoan(n)", &t).unwrap();
        let n = Term::Obj(ObjectName::new("n"));
        let approve = ActionTerm { action: "approve".into(), args: vec![n.clone()] };
        assert_eq!(f, Formula::AfterAction(approve, Box::new(Formula::knows(Formula::atom("hasLoan", vec![n])))));
    }

    #[test]
    fn precedence_and_scope() {
        let t = loan();
        let f = parse_formula("Male(n) | Male(nprime) & Eligible(n) -> Eligible(nprime) <-> true", &t).unwrap();
        assert!(matches!(f, Formula::Iff(..)));
        if let Formula::Iff(l, _) = &f {
            assert!(matches!(**l, Formula::Implies(..)));
            if let Formula::Implies(l, _) = &**l {
                assert!(matches!(**l, Formula::Or(..)));
            }
        }
        // K(...) takes exactly its parenthesized argument
        let f = parse_formula("K(Male(n)) & Male(n)", &t).unwrap();
        assert!(matches!(f, Formula::And(..)));
        // bare K extends to the right
        let f = parse_formula("K Male(n) & Male(n)", &t).unwrap();
        assert!(matches!(f, Formula::Knows(..)));
        // implication is right associative
        let f = parse_formula("Male(n) -> Male(n) -> Male(n)", &t).unwrap();
        if let Formula::Implies(_, r) = f {
            assert!(matches!(*r, Formula::Implies(..)));
        } else {
            panic!("expected implication");
        }
    }

    #[test]
    fn formula_errors() {
        let t = loan();
        let d = parse_formula("hasLoan(y)", &t).unwrap_err();
        assert!(d[0].message.contains("unbound variable `y`"));
        assert_eq!(d[0].column, 9);
        let d = parse_formula("Male(n, n)", &t).unwrap_err();
        assert!(d[0].message.contains("arity mismatch"));
        let d = parse_formula("Female(n)", &t).unwrap_err();
        assert_eq!((d[0].line, d[0].column), (1, 1));
        let d = parse_formula("Male(n) &", &t).unwrap_err();
        assert!(d[0].message.contains("end of input"));
    }

    #[test]
    fn free_variable_goals() {
        let t = loan();
        assert!(parse_formula("hasLoan(x)", &t).is_err());
        let f = parse_formula_with_free("hasLoan(x)", &t, &["x"]).unwrap();
        assert_eq!(f.free_vars(), vec!["x".to_string()]);
    }

    #[test]
    fn parse_plan_examples() {
        let t = loan();
        let plan = parse_plan("approve(n); approve(nprime)", &t).unwrap();
        assert_eq!(
            plan,
            vec![
                ActionInstance::new("approve", vec![ObjectName::new("n")]),
                ActionInstance::new("approve", vec![ObjectName::new("nprime")]),
            ]
        );
        assert!(parse_plan("", &t).unwrap().is_empty());
        assert!(parse_plan("   ", &t).unwrap().is_empty());
        let d = parse_plan("approve(n, n)", &t).unwrap_err();
        assert!(d[0].message.contains("arity mismatch"));
        let d = parse_plan("fly(n)", &t).unwrap_err();
        assert!(d[0].message.contains("unknown action"));
        let d = parse_plan("approve(x)", &t).unwrap_err();
        assert!(d[0].message.contains("unbound variable"));
    }

    #[test]
    fn parse_atoms_list() {
        let t = loan();
        let atoms = parse_atoms("Eligible(n), Eligible(nprime)", &t).unwrap();
        assert_eq!(atoms.len(), 2);
        assert!(parse_atoms("Eligible(x)", &t).is_err());
    }

    #[test]
    fn theory_round_trips_through_display() {
        for (name, text) in bundled::ALL {
            let t = parse_theory(&src(text)).unwrap();
            let again = parse_theory(&src(&t.to_string())).unwrap_or_else(|d| panic!("{name}: {d:?}"));
            assert_eq!(t, again, "{name}");
        }
    }

    #[test]
    fn declaration_order_is_irrelevant() {
        let a = "domain t\nobjects: n\nfluent p/1\naction go(x)\nssa p(x): a == go(x) | p(x)\n";
        let b = "domain t\nssa p(x): a == go(x) | p(x)\naction go(x)\nfluent p/1\nobjects: n\n";
        assert_eq!(parse_theory(&src(a)).unwrap(), parse_theory(&src(b)).unwrap());
    }
}
