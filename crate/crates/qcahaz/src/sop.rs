//! Sum-of-products Boolean algebra: variables, literals, product terms, covers,
//! assignments, and the two-level expression parser.
//!
//! A [`Cover`] is an ordered list of variables plus an ordered list of product
//! terms. An empty term list is the constant-0 function; a term with no
//! literals is the constant-1 implicant. Variable order is first-appearance
//! order in the source expression and fixes the bit order of [`Assignment`]s
//! (variable 0 is the most significant bit, so `ABC = "100"` means `A=1`).

use std::fmt;

use thiserror::Error;

/// A named input variable. Indices are contiguous from 0 within a [`Cover`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Variable {
    pub index: usize,
    pub name: String,
}

/// One variable occurrence inside a product term, possibly complemented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    /// Index of the variable in the owning cover.
    pub variable: usize,
    pub complemented: bool,
}

impl Literal {
    pub fn new(variable: usize, complemented: bool) -> Self {
        Literal {
            variable,
            complemented,
        }
    }

    /// True when the literal evaluates to 1 under `bits`.
    pub fn satisfied(&self, bits: &[bool]) -> bool {
        bits[self.variable] != self.complemented
    }
}

/// A conjunction of literals. No variable appears twice; an empty literal
/// list is the constant-1 term.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ProductTerm {
    literals: Vec<Literal>,
}

impl ProductTerm {
    /// Builds a term from `(variable, complemented)` pairs. Duplicate pairs
    /// collapse; a variable in both phases yields `None` (the term would be
    /// constant 0 and cannot exist in a cover).
    pub fn from_pairs<I: IntoIterator<Item = (usize, bool)>>(pairs: I) -> Option<Self> {
        let mut literals: Vec<Literal> = Vec::new();
        for (variable, complemented) in pairs {
            match literals.iter().find(|l| l.variable == variable) {
                Some(l) if l.complemented == complemented => {}
                Some(_) => return None,
                None => literals.push(Literal::new(variable, complemented)),
            }
        }
        literals.sort();
        Some(ProductTerm { literals })
    }

    /// The constant-1 term.
    pub fn constant_one() -> Self {
        ProductTerm::default()
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    /// Phase of `variable` in this term, if present.
    pub fn phase(&self, variable: usize) -> Option<bool> {
        self.literals
            .iter()
            .find(|l| l.variable == variable)
            .map(|l| l.complemented)
    }

    /// True when every literal is satisfied by `bits`.
    pub fn covers(&self, bits: &[bool]) -> bool {
        self.literals.iter().all(|l| l.satisfied(bits))
    }

    /// True when the term covers the minterm with the given index
    /// (variable 0 = most significant bit).
    pub fn covers_minterm(&self, minterm: u32, var_count: usize) -> bool {
        self.literals.iter().all(|l| {
            let bit = (minterm >> (var_count - 1 - l.variable)) & 1 == 1;
            bit != l.complemented
        })
    }

    /// Deterministic ordering key: literal count, then the sorted
    /// `(variable, phase)` sequence.
    pub fn order_key(&self) -> (usize, Vec<(usize, bool)>) {
        (
            self.literals.len(),
            self.literals
                .iter()
                .map(|l| (l.variable, l.complemented))
                .collect(),
        )
    }
}

/// One input combination: one bit per cover variable, in variable order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    bits: Vec<bool>,
}

impl Assignment {
    pub fn new(bits: Vec<bool>) -> Self {
        Assignment { bits }
    }

    /// Builds the assignment for minterm `index` over `var_count` variables,
    /// variable 0 taking the most significant bit.
    pub fn from_index(index: u32, var_count: usize) -> Self {
        let bits = (0..var_count)
            .map(|v| (index >> (var_count - 1 - v)) & 1 == 1)
            .collect();
        Assignment { bits }
    }

    pub fn to_index(&self) -> u32 {
        self.bits
            .iter()
            .fold(0, |acc, &b| (acc << 1) | u32::from(b))
    }

    /// Parses a bit string such as `"100"`.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut bits = Vec::with_capacity(text.len());
        for (pos, ch) in text.chars().enumerate() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => {
                    return Err(ParseError::Syntax {
                        pos,
                        msg: format!("expected '0' or '1', found {other:?}"),
                    })
                }
            }
        }
        if bits.is_empty() {
            return Err(ParseError::Syntax {
                pos: 0,
                msg: "empty assignment".into(),
            });
        }
        Ok(Assignment { bits })
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", u8::from(b))?;
        }
        Ok(())
    }
}

/// A sum-of-products cover: ordered variables plus ordered product terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    variables: Vec<Variable>,
    terms: Vec<ProductTerm>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoverError {
    #[error("assignment has {got} bits but the cover has {expected} variables")]
    LengthMismatch { expected: usize, got: usize },
    #[error("literal references variable {0} but the cover has {1} variables")]
    UnknownVariable(usize, usize),
}

impl Cover {
    pub fn new(names: Vec<String>, terms: Vec<ProductTerm>) -> Result<Self, CoverError> {
        let variables: Vec<Variable> = names
            .into_iter()
            .enumerate()
            .map(|(index, name)| Variable { index, name })
            .collect();
        for term in &terms {
            for lit in term.literals() {
                if lit.variable >= variables.len() {
                    return Err(CoverError::UnknownVariable(lit.variable, variables.len()));
                }
            }
        }
        Ok(Cover { variables, terms })
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable_names(&self) -> Vec<&str> {
        self.variables.iter().map(|v| v.name.as_str()).collect()
    }

    pub fn var_count(&self) -> usize {
        self.variables.len()
    }

    pub fn terms(&self) -> &[ProductTerm] {
        &self.terms
    }

    /// A structurally constant cover: no terms (constant 0) or a literal-free
    /// term (constant 1).
    pub fn is_structurally_constant(&self) -> bool {
        self.terms.is_empty() || self.terms.iter().any(|t| t.is_empty())
    }

    /// Evaluates the cover: true iff some term has all literals satisfied.
    pub fn eval(&self, a: &Assignment) -> Result<bool, CoverError> {
        if a.len() != self.variables.len() {
            return Err(CoverError::LengthMismatch {
                expected: self.variables.len(),
                got: a.len(),
            });
        }
        Ok(self.terms.iter().any(|t| t.covers(a.bits())))
    }

    /// Evaluates at a minterm index without building an [`Assignment`].
    pub fn eval_minterm(&self, minterm: u32) -> bool {
        let n = self.variables.len();
        self.terms.iter().any(|t| t.covers_minterm(minterm, n))
    }

    /// Exhaustive truth-table equality. Both covers must have the same
    /// variable count; intended for small variable counts.
    pub fn equivalent(&self, other: &Cover) -> bool {
        if self.var_count() != other.var_count() {
            return false;
        }
        let n = self.var_count();
        (0..1u32 << n).all(|m| self.eval_minterm(m) == other.eval_minterm(m))
    }

    /// Replaces the term list, keeping the variable set.
    pub fn with_terms(&self, terms: Vec<ProductTerm>) -> Cover {
        Cover {
            variables: self.variables.clone(),
            terms,
        }
    }

    /// Renders a term in expression syntax (`AB'` style); the constant-1
    /// term renders as `1`.
    pub fn term_to_string(&self, term: &ProductTerm) -> String {
        if term.is_empty() {
            return "1".into();
        }
        let mut out = String::new();
        for lit in term.literals() {
            out.push_str(&self.variables[lit.variable].name);
            if lit.complemented {
                out.push('\'');
            }
        }
        out
    }
}

impl fmt::Display for Cover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let rendered: Vec<String> = self.terms.iter().map(|t| self.term_to_string(t)).collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

/// Three-input majority vote, `M(a, b, c) = ab + bc + ca`. Fixing `c` to 0
/// gives AND, fixing it to 1 gives OR.
pub fn majority(a: bool, b: bool, c: bool) -> bool {
    (a && b) || (b && c) || (c && a)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("not two-level at position {pos}: {msg}")]
    NotTwoLevel { pos: usize, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Token<'a> {
    Ident(&'a str),
    Tick,
    Tilde,
    Plus,
    Star,
    LParen,
    RParen,
}

struct Lexer<'a> {
    tokens: Vec<(usize, Token<'a>)>,
    pos: usize,
    end: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Result<Self, ParseError> {
        let bytes = text.as_bytes();
        let mut tokens = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            match c {
                ' ' | '\t' | '\r' | '\n' => i += 1,
                '\'' => {
                    tokens.push((i, Token::Tick));
                    i += 1;
                }
                '~' | '!' => {
                    tokens.push((i, Token::Tilde));
                    i += 1;
                }
                '+' | '|' => {
                    tokens.push((i, Token::Plus));
                    i += 1;
                }
                '*' | '&' | '.' => {
                    tokens.push((i, Token::Star));
                    i += 1;
                }
                '(' => {
                    tokens.push((i, Token::LParen));
                    i += 1;
                }
                ')' => {
                    tokens.push((i, Token::RParen));
                    i += 1;
                }
                c if c.is_ascii_alphabetic() => {
                    // One letter plus a run of digits, so juxtaposed
                    // single-letter names like "AB" stay two identifiers.
                    let start = i;
                    i += 1;
                    while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                        i += 1;
                    }
                    tokens.push((start, Token::Ident(&text[start..i])));
                }
                other => {
                    return Err(ParseError::Syntax {
                        pos: i,
                        msg: format!("unexpected character {other:?}"),
                    })
                }
            }
        }
        Ok(Lexer {
            tokens,
            pos: 0,
            end: text.len(),
        })
    }

    fn peek(&self) -> Option<(usize, Token<'a>)> {
        self.tokens.get(self.pos).copied()
    }

    fn next(&mut self) -> Option<(usize, Token<'a>)> {
        let t = self.tokens.get(self.pos).copied();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> usize {
        self.tokens.get(self.pos).map(|&(p, _)| p).unwrap_or(self.end)
    }
}

/// A term under construction: variable name -> complemented, or the
/// contradiction marker (constant 0, dropped at the end).
#[derive(Debug, Clone, Default)]
struct TermDraft {
    literals: Vec<(String, bool)>,
    contradictory: bool,
}

impl TermDraft {
    fn add(&mut self, name: &str, complemented: bool) {
        match self.literals.iter().find(|(n, _)| n == name) {
            Some((_, c)) if *c == complemented => {}
            Some(_) => self.contradictory = true,
            None => self.literals.push((name.to_string(), complemented)),
        }
    }

    fn merge(&mut self, other: &TermDraft) {
        if other.contradictory {
            self.contradictory = true;
        }
        for (name, c) in &other.literals {
            self.add(name, *c);
        }
    }
}

/// One parsed factor: either a literal or a parenthesized subexpression.
enum Factor {
    Literal { name: String, complemented: bool },
    Group { pos: usize, terms: Vec<TermDraft> },
}

/// Parses a two-level sum-of-products expression into a [`Cover`].
///
/// Identifiers are a letter plus optional digits; `'` (postfix) or `~`
/// (prefix) complement a literal; `+` is OR; juxtaposition or `*` is AND;
/// parentheses may group, but an OR inside an AND (e.g. `A(B+C)`) is
/// rejected as non-two-level. Variable order is first-appearance order.
pub fn parse_expression(text: &str) -> Result<Cover, ParseError> {
    let mut lex = Lexer::new(text)?;
    if lex.peek().is_none() {
        return Err(ParseError::Syntax {
            pos: 0,
            msg: "empty expression".into(),
        });
    }
    let terms = parse_or(&mut lex)?;
    if let Some((pos, _)) = lex.peek() {
        return Err(ParseError::Syntax {
            pos,
            msg: "unexpected trailing input".into(),
        });
    }

    // First-appearance variable order.
    let mut names: Vec<String> = Vec::new();
    for t in &terms {
        for (name, _) in &t.literals {
            if !names.contains(name) {
                names.push(name.clone());
            }
        }
    }
    let index_of = |name: &str| names.iter().position(|n| n == name).unwrap();

    let mut out_terms = Vec::new();
    for t in terms {
        if t.contradictory {
            continue; // constant-0 term contributes nothing to the sum
        }
        let term = ProductTerm::from_pairs(
            t.literals
                .iter()
                .map(|(name, c)| (index_of(name), *c)),
        )
        .expect("draft already deduplicated");
        out_terms.push(term);
    }
    Cover::new(names, out_terms).map_err(|_| ParseError::Syntax {
        pos: 0,
        msg: "internal variable indexing error".into(),
    })
}

fn parse_or(lex: &mut Lexer) -> Result<Vec<TermDraft>, ParseError> {
    let mut terms = parse_and(lex)?;
    while let Some((_, Token::Plus)) = lex.peek() {
        lex.next();
        terms.extend(parse_and(lex)?);
    }
    Ok(terms)
}

/// Parses one AND group. A parenthesized OR is only allowed when it is the
/// sole factor (pure grouping); combined with anything else it would nest OR
/// under AND.
fn parse_and(lex: &mut Lexer) -> Result<Vec<TermDraft>, ParseError> {
    let mut factors = Vec::new();
    loop {
        match lex.peek() {
            Some((_, Token::Ident(_))) | Some((_, Token::Tilde)) | Some((_, Token::LParen)) => {
                factors.push(parse_factor(lex)?);
            }
            Some((_, Token::Star)) => {
                lex.next();
                let pos = lex.here();
                match lex.peek() {
                    Some((_, Token::Ident(_))) | Some((_, Token::Tilde))
                    | Some((_, Token::LParen)) => factors.push(parse_factor(lex)?),
                    _ => {
                        return Err(ParseError::Syntax {
                            pos,
                            msg: "expected operand after '*'".into(),
                        })
                    }
                }
            }
            _ => break,
        }
    }
    if factors.is_empty() {
        return Err(ParseError::Syntax {
            pos: lex.here(),
            msg: "expected a literal or '('".into(),
        });
    }

    let multi_factor = factors.len() > 1;
    let mut terms = vec![TermDraft::default()];
    for factor in factors {
        match factor {
            Factor::Literal { name, complemented } => {
                for t in &mut terms {
                    t.add(&name, complemented);
                }
            }
            Factor::Group { pos, terms: inner } => {
                if inner.len() > 1 {
                    if multi_factor {
                        return Err(ParseError::NotTwoLevel {
                            pos,
                            msg: "parenthesized OR used inside an AND".into(),
                        });
                    }
                    // Pure grouping of a sum: splice upward.
                    return Ok(inner);
                }
                for t in &mut terms {
                    t.merge(&inner[0]);
                }
            }
        }
    }
    Ok(terms)
}

fn parse_factor(lex: &mut Lexer) -> Result<Factor, ParseError> {
    match lex.next() {
        Some((_, Token::Tilde)) => {
            let pos = lex.here();
            match parse_factor(lex)? {
                Factor::Literal { name, complemented } => Ok(Factor::Literal {
                    name,
                    complemented: !complemented,
                }),
                Factor::Group { .. } => Err(ParseError::NotTwoLevel {
                    pos,
                    msg: "complement of a parenthesized group".into(),
                }),
            }
        }
        Some((_, Token::Ident(name))) => {
            let mut complemented = false;
            while let Some((_, Token::Tick)) = lex.peek() {
                lex.next();
                complemented = !complemented;
            }
            Ok(Factor::Literal {
                name: name.to_string(),
                complemented,
            })
        }
        Some((pos, Token::LParen)) => {
            let inner = parse_or(lex)?;
            match lex.next() {
                Some((_, Token::RParen)) => {}
                other => {
                    let p = other.map(|(p, _)| p).unwrap_or(lex.here());
                    return Err(ParseError::Syntax {
                        pos: p,
                        msg: "expected ')'".into(),
                    });
                }
            }
            if let Some((tpos, Token::Tick)) = lex.peek() {
                return Err(ParseError::NotTwoLevel {
                    pos: tpos,
                    msg: "complement of a parenthesized group".into(),
                });
            }
            Ok(Factor::Group { pos, terms: inner })
        }
        Some((pos, tok)) => Err(ParseError::Syntax {
            pos,
            msg: format!("unexpected token {tok:?}"),
        }),
        None => Err(ParseError::Syntax {
            pos: lex.here(),
            msg: "unexpected end of input".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cover(text: &str) -> Cover {
        parse_expression(text).unwrap()
    }

    #[test]
    fn parses_case_study_expression() {
        let c = cover("AB' + BC'");
        assert_eq!(c.variable_names(), vec!["A", "B", "C"]);
        assert_eq!(c.terms().len(), 2);
        assert_eq!(c.to_string(), "AB' + BC'");
    }

    #[test]
    fn empty_input_is_a_parse_error() {
        assert!(matches!(
            parse_expression(""),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse_expression("   "),
            Err(ParseError::Syntax { .. })
        ));
    }

    #[test]
    fn nested_or_inside_and_is_rejected() {
        let err = parse_expression("A(B+C)").unwrap_err();
        assert!(matches!(err, ParseError::NotTwoLevel { .. }));
        let err = parse_expression("(A+B)C").unwrap_err();
        assert!(matches!(err, ParseError::NotTwoLevel { .. }));
        let err = parse_expression("(A+B)'").unwrap_err();
        assert!(matches!(err, ParseError::NotTwoLevel { .. }));
    }

    #[test]
    fn grouping_without_nesting_is_allowed() {
        assert_eq!(cover("(AB' + BC')").to_string(), "AB' + BC'");
        assert_eq!(cover("A(B')C").to_string(), "AB'C");
        assert_eq!(cover("(A+B) + C").to_string(), "A + B + C");
    }

    #[test]
    fn trailing_operator_is_a_syntax_error() {
        for bad in ["A +", "A *", "A + + B", "(A", "A)", "~"] {
            assert!(matches!(
                parse_expression(bad),
                Err(ParseError::Syntax { .. })
            ), "{bad:?} should be a syntax error");
        }
    }

    #[test]
    fn complement_forms_are_equivalent() {
        let a = cover("~A B + A ~B");
        let b = cover("A'B + AB'");
        assert!(a.equivalent(&b));
    }

    #[test]
    fn contradictory_terms_drop_out() {
        let c = cover("AA' + B");
        assert_eq!(c.terms().len(), 1);
        // Variable order still records first appearance.
        assert_eq!(c.variable_names(), vec!["A", "B"]);
    }

    #[test]
    fn eval_matches_case_study_rows() {
        let c = cover("AB' + BC'");
        let cases = [
            ("100", true),
            ("110", true),
            ("101", true),
            ("010", true),
            ("000", false),
            ("001", false),
            ("011", false),
            ("111", false),
        ];
        for (bits, expect) in cases {
            let a = Assignment::parse(bits).unwrap();
            assert_eq!(c.eval(&a).unwrap(), expect, "f({bits})");
        }
    }

    #[test]
    fn eval_checks_assignment_width() {
        let c = cover("AB");
        let a = Assignment::parse("101").unwrap();
        assert!(matches!(c.eval(&a), Err(CoverError::LengthMismatch { .. })));
    }

    #[test]
    fn constant_zero_cover_evaluates_false() {
        let c = Cover::new(vec!["A".into()], vec![]).unwrap();
        assert!(!c.eval(&Assignment::parse("0").unwrap()).unwrap());
        assert!(!c.eval(&Assignment::parse("1").unwrap()).unwrap());
    }

    #[test]
    fn majority_matches_truth_table() {
        assert!(majority(true, true, false));
        for a in [false, true] {
            for b in [false, true] {
                assert_eq!(majority(a, b, false), a && b);
                assert_eq!(majority(a, b, true), a || b);
            }
        }
    }

    #[test]
    fn assignment_round_trips_through_index() {
        for n in 1..=4usize {
            for idx in 0..1u32 << n {
                let a = Assignment::from_index(idx, n);
                assert_eq!(a.to_index(), idx);
                assert_eq!(a.len(), n);
            }
        }
        assert_eq!(Assignment::parse("100").unwrap().to_index(), 4);
    }

    #[test]
    fn display_uses_input_syntax() {
        let c = cover("x1 x2' + x3");
        assert_eq!(c.to_string(), "x1x2' + x3");
    }
}
