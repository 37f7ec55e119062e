//! IMLL formulas over the sorts `t` and `v`, their classical image and
//! switchings.
//!
//! Concrete syntax: `t`, `v`, `I`, `A * B` for tensor and `A -o B` for linear
//! implication. `-o` is right-associative, `*` binds tighter than `-o` and is
//! right-associative as well, so `v * v * v` is `v * (v * v)`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sort {
    T,
    V,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::T => f.write_str("t"),
            Sort::V => f.write_str("v"),
        }
    }
}

/// Label carried by a leaf occurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Leaf {
    Atom(Sort),
    Unit,
}

impl Leaf {
    pub fn sort(self) -> Option<Sort> {
        match self {
            Leaf::Atom(s) => Some(s),
            Leaf::Unit => None,
        }
    }
}

impl fmt::Display for Leaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Leaf::Atom(s) => s.fmt(f),
            Leaf::Unit => f.write_str("I"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(Sort),
    Unit,
    Tensor(Box<Formula>, Box<Formula>),
    Lolli(Box<Formula>, Box<Formula>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dir {
    L,
    R,
}

/// Address of a subformula: the sequence of child choices from the root.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LeafPath(pub Vec<Dir>);

impl LeafPath {
    pub fn root() -> Self {
        LeafPath(Vec::new())
    }

    pub fn child(&self, d: Dir) -> Self {
        let mut v = self.0.clone();
        v.push(d);
        LeafPath(v)
    }

    pub fn concat(&self, rest: &LeafPath) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&rest.0);
        LeafPath(v)
    }

    pub fn strip_prefix(&self, prefix: &[Dir]) -> Option<LeafPath> {
        self.0.strip_prefix(prefix).map(|s| LeafPath(s.to_vec()))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for LeafPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.0 {
            f.write_str(match d {
                Dir::L => "L",
                Dir::R => "R",
            })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for LeafPath {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                'L' => Ok(Dir::L),
                'R' => Ok(Dir::R),
                other => Err(format!("invalid path character {other:?}")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(LeafPath)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn flip(self) -> Self {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("path {0} does not resolve to a leaf")]
    UnresolvedPath(LeafPath),
}

impl Formula {
    pub fn t() -> Self {
        Formula::Atom(Sort::T)
    }

    pub fn v() -> Self {
        Formula::Atom(Sort::V)
    }

    pub fn tensor(a: Formula, b: Formula) -> Self {
        Formula::Tensor(Box::new(a), Box::new(b))
    }

    pub fn lolli(a: Formula, b: Formula) -> Self {
        Formula::Lolli(Box::new(a), Box::new(b))
    }

    /// Right-associated tensor of `items`; the empty tensor is `I`.
    pub fn tensor_all(items: Vec<Formula>) -> Self {
        let mut it = items.into_iter().rev();
        match it.next() {
            None => Formula::Unit,
            Some(last) => it.fold(last, |acc, f| Formula::tensor(f, acc)),
        }
    }

    /// `v^{⊗n}`.
    pub fn v_power(n: usize) -> Self {
        Formula::tensor_all(vec![Formula::v(); n])
    }

    pub fn parse(text: &str) -> Result<Self, FormulaError> {
        parse_formula(text)
    }

    pub fn leaves(&self) -> Vec<(LeafPath, Leaf)> {
        let mut out = Vec::new();
        self.collect_leaves(&mut Vec::new(), &mut out);
        out
    }

    fn collect_leaves(&self, prefix: &mut Vec<Dir>, out: &mut Vec<(LeafPath, Leaf)>) {
        match self {
            Formula::Atom(s) => out.push((LeafPath(prefix.clone()), Leaf::Atom(*s))),
            Formula::Unit => out.push((LeafPath(prefix.clone()), Leaf::Unit)),
            Formula::Tensor(a, b) | Formula::Lolli(a, b) => {
                prefix.push(Dir::L);
                a.collect_leaves(prefix, out);
                prefix.pop();
                prefix.push(Dir::R);
                b.collect_leaves(prefix, out);
                prefix.pop();
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Unit => 1,
            Formula::Tensor(a, b) | Formula::Lolli(a, b) => a.leaf_count() + b.leaf_count(),
        }
    }

    pub fn subformula(&self, path: &[Dir]) -> Option<&Formula> {
        let mut cur = self;
        for d in path {
            cur = match (cur, d) {
                (Formula::Tensor(a, _) | Formula::Lolli(a, _), Dir::L) => a,
                (Formula::Tensor(_, b) | Formula::Lolli(_, b), Dir::R) => b,
                _ => return None,
            };
        }
        Some(cur)
    }

    pub fn leaf_at(&self, path: &LeafPath) -> Option<Leaf> {
        match self.subformula(&path.0)? {
            Formula::Atom(s) => Some(Leaf::Atom(*s)),
            Formula::Unit => Some(Leaf::Unit),
            _ => None,
        }
    }

    /// Positive iff the path passes through the left child of an even number
    /// of `-o` vertices.
    pub fn local_polarity(&self, path: &LeafPath) -> Result<Polarity, FormulaError> {
        let mut cur = self;
        let mut pol = Polarity::Positive;
        for d in &path.0 {
            cur = match (cur, d) {
                (Formula::Lolli(a, _), Dir::L) => {
                    pol = pol.flip();
                    a
                }
                (Formula::Tensor(a, _), Dir::L) => a,
                (Formula::Tensor(_, b) | Formula::Lolli(_, b), Dir::R) => b,
                _ => return Err(FormulaError::UnresolvedPath(path.clone())),
            };
        }
        match cur {
            Formula::Atom(_) | Formula::Unit => Ok(pol),
            _ => Err(FormulaError::UnresolvedPath(path.clone())),
        }
    }

    pub fn to_classical(&self) -> ClassicalFormula {
        match self {
            Formula::Atom(s) => ClassicalFormula::Atom(*s),
            Formula::Unit => ClassicalFormula::One,
            Formula::Tensor(a, b) => {
                ClassicalFormula::Tensor(Box::new(a.to_classical()), Box::new(b.to_classical()))
            }
            Formula::Lolli(a, b) => {
                ClassicalFormula::Par(Box::new(a.to_classical().dual()), Box::new(b.to_classical()))
            }
        }
    }
}

/// `(dom ⊗ ⊗_c (α_c ⊸ β_c)) ⊸ cod`, or `dom ⊸ cod` without cells. The cell
/// tensor is right-associated in sequence order.
pub fn assemble_morphism_formula(
    dom: &Formula,
    cell_types: &[(Formula, Formula)],
    cod: &Formula,
) -> Formula {
    if cell_types.is_empty() {
        return Formula::lolli(dom.clone(), cod.clone());
    }
    let cells = Formula::tensor_all(
        cell_types
            .iter()
            .map(|(a, b)| Formula::lolli(a.clone(), b.clone()))
            .collect(),
    );
    Formula::lolli(Formula::tensor(dom.clone(), cells), cod.clone())
}

/// Path of the `i`-th factor inside a right-associated tensor of `n` factors.
pub fn tensor_factor_path(n: usize, i: usize) -> Vec<Dir> {
    debug_assert!(i < n);
    let mut p = vec![Dir::R; i];
    if i + 1 < n {
        p.push(Dir::L);
    }
    p
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(s) => s.fmt(f),
            Formula::Unit => f.write_str("I"),
            Formula::Tensor(a, b) => {
                match **a {
                    Formula::Tensor(..) | Formula::Lolli(..) => write!(f, "({a})")?,
                    _ => write!(f, "{a}")?,
                }
                f.write_str(" * ")?;
                match **b {
                    Formula::Lolli(..) => write!(f, "({b})"),
                    _ => write!(f, "{b}"),
                }
            }
            Formula::Lolli(a, b) => {
                match **a {
                    Formula::Lolli(..) => write!(f, "({a})")?,
                    _ => write!(f, "{a}")?,
                }
                write!(f, " -o {b}")
            }
        }
    }
}

impl std::str::FromStr for Formula {
    type Err = FormulaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Token {
    LParen,
    RParen,
    Star,
    Lolli,
    T,
    V,
    Unit,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, FormulaError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => Token::LParen,
            b')' => Token::RParen,
            b'*' => Token::Star,
            b'-' => {
                if bytes.get(i + 1) == Some(&b'o') {
                    out.push((i, Token::Lolli));
                    i += 2;
                    continue;
                }
                return Err(syntax(i, "expected `-o`"));
            }
            b't' => Token::T,
            b'v' => Token::V,
            b'I' => Token::Unit,
            _ => return Err(syntax(i, &format!("unexpected character {:?}", text[i..].chars().next().unwrap()))),
        };
        // Atoms are single letters; `tv` is not an identifier.
        if matches!(tok, Token::T | Token::V | Token::Unit)
            && bytes.get(i + 1).is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_')
        {
            return Err(syntax(i, "atoms are the single letters `t`, `v` and `I`"));
        }
        out.push((i, tok));
        i += 1;
    }
    Ok(out)
}

fn syntax(pos: usize, message: &str) -> FormulaError {
    FormulaError::Syntax { pos, message: message.to_string() }
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<Token> {
        self.tokens.get(self.pos).map(|(_, t)| *t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn lolli(&mut self) -> Result<Formula, FormulaError> {
        let lhs = self.tensor()?;
        if self.peek() == Some(Token::Lolli) {
            self.pos += 1;
            let rhs = self.lolli()?;
            return Ok(Formula::lolli(lhs, rhs));
        }
        Ok(lhs)
    }

    fn tensor(&mut self) -> Result<Formula, FormulaError> {
        let lhs = self.atom()?;
        if self.peek() == Some(Token::Star) {
            self.pos += 1;
            let rhs = self.tensor()?;
            return Ok(Formula::tensor(lhs, rhs));
        }
        Ok(lhs)
    }

    fn atom(&mut self) -> Result<Formula, FormulaError> {
        let at = self.offset();
        let tok = self.peek().ok_or_else(|| syntax(at, "unexpected end of input"))?;
        self.pos += 1;
        match tok {
            Token::T => Ok(Formula::t()),
            Token::V => Ok(Formula::v()),
            Token::Unit => Ok(Formula::Unit),
            Token::LParen => {
                let inner = self.lolli()?;
                if self.peek() != Some(Token::RParen) {
                    return Err(syntax(self.offset(), "expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(syntax(at, "expected `t`, `v`, `I` or `(`")),
        }
    }
}

fn parse_formula(text: &str) -> Result<Formula, FormulaError> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, pos: 0, end: text.len() };
    let f = p.lolli()?;
    if p.pos != p.tokens.len() {
        return Err(syntax(p.offset(), "trailing input"));
    }
    Ok(f)
}

/// Classical linear logic formula: atoms, their duals, the units and the
/// connectives tensor and par.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ClassicalFormula {
    Atom(Sort),
    Dual(Sort),
    One,
    Bottom,
    Tensor(Box<ClassicalFormula>, Box<ClassicalFormula>),
    Par(Box<ClassicalFormula>, Box<ClassicalFormula>),
}

impl ClassicalFormula {
    /// De Morgan dual. Child order is kept, so leaf paths are unchanged.
    pub fn dual(&self) -> Self {
        use ClassicalFormula::*;
        match self {
            Atom(s) => Dual(*s),
            Dual(s) => Atom(*s),
            One => Bottom,
            Bottom => One,
            Tensor(a, b) => Par(Box::new(a.dual()), Box::new(b.dual())),
            Par(a, b) => Tensor(Box::new(a.dual()), Box::new(b.dual())),
        }
    }

    pub fn par_count(&self) -> usize {
        match self {
            ClassicalFormula::Tensor(a, b) => a.par_count() + b.par_count(),
            ClassicalFormula::Par(a, b) => 1 + a.par_count() + b.par_count(),
            _ => 0,
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            ClassicalFormula::Tensor(a, b) | ClassicalFormula::Par(a, b) => a.leaf_count() + b.leaf_count(),
            _ => 1,
        }
    }
}

impl fmt::Display for ClassicalFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassicalFormula::Atom(s) => s.fmt(f),
            ClassicalFormula::Dual(s) => write!(f, "{s}^"),
            ClassicalFormula::One => f.write_str("1"),
            ClassicalFormula::Bottom => f.write_str("bot"),
            ClassicalFormula::Tensor(a, b) => write!(f, "({a} * {b})"),
            ClassicalFormula::Par(a, b) => write!(f, "({a} | {b})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Choice {
    KeepLeft,
    KeepRight,
}

/// One retained child per par vertex, listed in in-order par position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Switching(pub Vec<Choice>);

impl Switching {
    /// The `index`-th switching in lexicographic order over `pars` choices,
    /// `KeepLeft < KeepRight`.
    pub fn from_index(pars: usize, index: u64) -> Self {
        Switching(
            (0..pars)
                .map(|j| {
                    if (index >> (pars - 1 - j)) & 1 == 0 {
                        Choice::KeepLeft
                    } else {
                        Choice::KeepRight
                    }
                })
                .collect(),
        )
    }
}

impl fmt::Display for Switching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.0 {
            f.write_str(match c {
                Choice::KeepLeft => "L",
                Choice::KeepRight => "R",
            })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("switching count 2^{pars} exceeds the 64-bit range")]
pub struct SwitchingOverflow {
    pub pars: usize,
}

pub fn count_switchings(c: &ClassicalFormula) -> Result<u64, SwitchingOverflow> {
    switchings_for_pars(c.par_count())
}

pub(crate) fn switchings_for_pars(pars: usize) -> Result<u64, SwitchingOverflow> {
    if pars >= 64 {
        return Err(SwitchingOverflow { pars });
    }
    Ok(1u64 << pars)
}

/// Every switching of `c`, once each, in lexicographic order.
pub fn enumerate_switchings(c: &ClassicalFormula) -> Result<Switchings, SwitchingOverflow> {
    let pars = c.par_count();
    let total = switchings_for_pars(pars)?;
    Ok(Switchings { pars, next: 0, total })
}

#[derive(Debug, Clone)]
pub struct Switchings {
    pars: usize,
    next: u64,
    total: u64,
}

impl Iterator for Switchings {
    type Item = Switching;

    fn next(&mut self) -> Option<Switching> {
        if self.next >= self.total {
            return None;
        }
        let s = Switching::from_index(self.pars, self.next);
        self.next += 1;
        Some(s)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rest = (self.total - self.next) as usize;
        (rest, Some(rest))
    }
}
