//! Formula language: state formulas over symbolization atoms, path formulas
//! built from timed until-chains, a concrete-syntax parser, CNF conversion
//! for state formulas, and a normal form for path-level boolean structure.

use std::fmt;

use num_traits::{One, Zero};

use crate::ctmc::{Atom, Distribution, ProbInterval};
use crate::rational::{parse_rational, Rat};

/// A boolean combination of symbolization atoms. `Or`, `Implies`, and
/// `false` from the concrete syntax are desugared during parsing, so the
/// core AST only carries `true`, atoms, negation, and conjunction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StateFormula {
    True,
    AtomRef(Atom),
    Not(Box<StateFormula>),
    And(Box<StateFormula>, Box<StateFormula>),
}

impl StateFormula {
    pub fn not(inner: StateFormula) -> StateFormula {
        StateFormula::Not(Box::new(inner))
    }

    pub fn and(a: StateFormula, b: StateFormula) -> StateFormula {
        StateFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: StateFormula, b: StateFormula) -> StateFormula {
        StateFormula::not(StateFormula::and(StateFormula::not(a), StateFormula::not(b)))
    }

    /// `false` is sugar for `!true`.
    pub fn falsum() -> StateFormula {
        StateFormula::not(StateFormula::True)
    }

    /// Evaluate under a fixed distribution.
    pub fn eval(&self, mu: &Distribution) -> bool {
        match self {
            StateFormula::True => true,
            StateFormula::AtomRef(a) => a.interval.contains(&mu.probs[a.state_index - 1]),
            StateFormula::Not(x) => !x.eval(mu),
            StateFormula::And(x, y) => x.eval(mu) && y.eval(mu),
        }
    }
}

/// A bounded, nonempty time window attached to an until operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TimeWindow {
    pub low: Rat,
    pub high: Rat,
    pub low_closed: bool,
    pub high_closed: bool,
}

impl TimeWindow {
    pub fn closed(low: Rat, high: Rat) -> TimeWindow {
        TimeWindow { low, high, low_closed: true, high_closed: true }
    }

    /// Nonempty with a nonnegative lower endpoint.
    pub fn is_valid(&self) -> bool {
        if self.low < Rat::zero() {
            return false;
        }
        if self.low < self.high {
            true
        } else {
            self.low == self.high && self.low_closed && self.high_closed
        }
    }

    pub fn contains(&self, t: &Rat) -> bool {
        let lo_ok = if self.low_closed { t >= &self.low } else { t > &self.low };
        let hi_ok = if self.high_closed { t <= &self.high } else { t < &self.high };
        lo_ok && hi_ok
    }
}

impl fmt::Display for TimeWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.low_closed { '[' } else { '(' },
            self.low,
            self.high,
            if self.high_closed { ']' } else { ')' },
        )
    }
}

/// A path formula: boolean structure over timed until-chains. An
/// `UntilChain(phi0, steps)` with steps `[(T1, phi1), ..., (Tn, phin)]`
/// denotes `phi0 U^T1 phi1 U^T2 ... U^Tn phin` and always has `n >= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathFormula {
    True,
    UntilChain(StateFormula, Vec<(TimeWindow, StateFormula)>),
    Not(Box<PathFormula>),
    And(Box<PathFormula>, Box<PathFormula>),
}

impl PathFormula {
    pub fn not(inner: PathFormula) -> PathFormula {
        PathFormula::Not(Box::new(inner))
    }

    pub fn and(a: PathFormula, b: PathFormula) -> PathFormula {
        PathFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: PathFormula, b: PathFormula) -> PathFormula {
        PathFormula::not(PathFormula::and(PathFormula::not(a), PathFormula::not(b)))
    }

    /// A bare state formula is a query on the initial distribution,
    /// expressed as `true U^[0,0] phi`.
    pub fn state_query(phi: StateFormula) -> PathFormula {
        let zero = TimeWindow::closed(Rat::zero(), Rat::zero());
        PathFormula::UntilChain(StateFormula::True, vec![(zero, phi)])
    }
}

/// Positive conjunctive normal form: a conjunction of clauses, each a
/// disjunction of (unnegated) atoms. No clauses means `true`; an empty
/// clause means `false`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CNFStateFormula {
    pub clauses: Vec<Vec<Atom>>,
}

impl CNFStateFormula {
    pub fn eval(&self, mu: &Distribution) -> bool {
        self.clauses.iter().all(|clause| {
            clause.iter().any(|a| a.interval.contains(&mu.probs[a.state_index - 1]))
        })
    }
}

/// The `<= 2` closed/open intervals that cover `[0,1] \ I`. An atom's
/// negation rewrites to the disjunction of the same state over these pieces;
/// an empty result means the negation is unsatisfiable.
pub fn complement_intervals(interval: &ProbInterval) -> Vec<ProbInterval> {
    let mut out = Vec::new();
    let left = ProbInterval {
        low: Rat::zero(),
        high: interval.low.clone(),
        low_closed: true,
        high_closed: !interval.low_closed,
    };
    if left.is_valid() {
        out.push(left);
    }
    let right = ProbInterval {
        low: interval.high.clone(),
        high: Rat::one(),
        low_closed: !interval.high_closed,
        high_closed: true,
    };
    if right.is_valid() {
        out.push(right);
    }
    out
}

/// Convert a state formula to positive CNF. Negated atoms are replaced by
/// disjunctions of complementary atoms covering the rest of `[0,1]`.
pub fn to_cnf(phi: &StateFormula) -> CNFStateFormula {
    CNFStateFormula { clauses: cnf_clauses(phi, true) }
}

fn cnf_clauses(phi: &StateFormula, positive: bool) -> Vec<Vec<Atom>> {
    match (phi, positive) {
        (StateFormula::True, true) => Vec::new(),
        (StateFormula::True, false) => vec![Vec::new()],
        (StateFormula::AtomRef(a), true) => vec![vec![a.clone()]],
        (StateFormula::AtomRef(a), false) => {
            let clause = complement_intervals(&a.interval)
                .into_iter()
                .map(|interval| Atom { state_index: a.state_index, interval })
                .collect();
            vec![clause]
        }
        (StateFormula::Not(x), _) => cnf_clauses(x, !positive),
        (StateFormula::And(x, y), true) => {
            let mut clauses = cnf_clauses(x, true);
            clauses.extend(cnf_clauses(y, true));
            clauses
        }
        (StateFormula::And(x, y), false) => {
            // !(x & y) = !x | !y: distribute the disjunction over clauses.
            let cx = cnf_clauses(x, false);
            let cy = cnf_clauses(y, false);
            let mut clauses = Vec::with_capacity(cx.len() * cy.len());
            for a in &cx {
                for b in &cy {
                    let mut merged = a.clone();
                    merged.extend(b.iter().cloned());
                    clauses.push(merged);
                }
            }
            clauses
        }
    }
}

/// Path formulas with boolean structure pushed to the outside: internal
/// nodes are conjunctions/disjunctions, leaves are until-chains carrying an
/// optional outer negation, and constants absorb trivial subtrees. Double
/// negations vanish and `phi & true` simplifies to `phi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormalPath {
    Const(bool),
    Leaf {
        negated: bool,
        phi0: StateFormula,
        steps: Vec<(TimeWindow, StateFormula)>,
    },
    And(Box<NormalPath>, Box<NormalPath>),
    Or(Box<NormalPath>, Box<NormalPath>),
}

pub fn normalize_path(phi: &PathFormula) -> NormalPath {
    normalize(phi, false)
}

fn normalize(phi: &PathFormula, negated: bool) -> NormalPath {
    match phi {
        PathFormula::True => NormalPath::Const(!negated),
        PathFormula::UntilChain(phi0, steps) => NormalPath::Leaf {
            negated,
            phi0: phi0.clone(),
            steps: steps.clone(),
        },
        PathFormula::Not(x) => normalize(x, !negated),
        PathFormula::And(x, y) => {
            let a = normalize(x, negated);
            let b = normalize(y, negated);
            if negated {
                // !(x & y) = !x | !y
                match (a, b) {
                    (NormalPath::Const(true), _) | (_, NormalPath::Const(true)) => {
                        NormalPath::Const(true)
                    }
                    (NormalPath::Const(false), other) | (other, NormalPath::Const(false)) => other,
                    (a, b) => NormalPath::Or(Box::new(a), Box::new(b)),
                }
            } else {
                match (a, b) {
                    (NormalPath::Const(false), _) | (_, NormalPath::Const(false)) => {
                        NormalPath::Const(false)
                    }
                    (NormalPath::Const(true), other) | (other, NormalPath::Const(true)) => other,
                    (a, b) => NormalPath::And(Box::new(a), Box::new(b)),
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Concrete syntax
// ---------------------------------------------------------------------------

/// A parse error with a byte position into the input text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Number(Rat),
    Ident(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Bang,
    Amp,
    Pipe,
    Arrow,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            '[' => {
                toks.push((i, Tok::LBracket));
                i += 1;
            }
            ']' => {
                toks.push((i, Tok::RBracket));
                i += 1;
            }
            ',' => {
                toks.push((i, Tok::Comma));
                i += 1;
            }
            '!' => {
                toks.push((i, Tok::Bang));
                i += 1;
            }
            '&' => {
                toks.push((i, Tok::Amp));
                i += 1;
            }
            '|' => {
                toks.push((i, Tok::Pipe));
                i += 1;
            }
            '-' => {
                if i + 1 < bytes.len() && bytes[i + 1] == b'>' {
                    toks.push((i, Tok::Arrow));
                    i += 2;
                } else {
                    return Err(ParseError {
                        position: i,
                        message: "expected '>' after '-'".to_string(),
                    });
                }
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() && matches!(bytes[i] as char, '0'..='9' | '.') {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'/' {
                    i += 1;
                    let denom_start = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if i == denom_start {
                        return Err(ParseError {
                            position: i,
                            message: "expected digits after '/'".to_string(),
                        });
                    }
                }
                let lit = &text[start..i];
                let r = parse_rational(lit)
                    .map_err(|e| ParseError { position: start, message: e })?;
                toks.push((start, Tok::Number(r)));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && matches!(bytes[i] as char, 'a'..='z' | 'A'..='Z' | '0'..='9' | '_')
                {
                    i += 1;
                }
                toks.push((start, Tok::Ident(text[start..i].to_string())));
            }
            _ => {
                return Err(ParseError {
                    position: i,
                    message: format!("unexpected character {c:?}"),
                })
            }
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

/// Parse a path formula from concrete syntax. A bare state formula parses
/// as a query on the initial distribution.
pub fn parse(text: &str) -> Result<PathFormula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len() };
    let phi = p.path()?;
    if p.pos < p.toks.len() {
        let (at, tok) = &p.toks[p.pos];
        return Err(ParseError {
            position: *at,
            message: format!("unexpected trailing {tok:?}"),
        });
    }
    Ok(phi)
}

/// Parse a state formula on its own (used for model atoms in tooling).
pub fn parse_state(text: &str) -> Result<StateFormula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len() };
    let phi = p.state()?;
    if p.pos < p.toks.len() {
        let (at, tok) = &p.toks[p.pos];
        return Err(ParseError {
            position: *at,
            message: format!("unexpected trailing {tok:?}"),
        });
    }
    Ok(phi)
}

impl Parser {
    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(at, _)| *at).unwrap_or(self.end)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek_ident(&self, word: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(w)) if w == word)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn err(&self, message: String) -> ParseError {
        ParseError { position: self.here(), message }
    }

    // path := pimp ("|" pimp)*      (implication is lowest, as in the
    // state grammar: a -> b = !a | b, right-associative)
    fn path(&mut self) -> Result<PathFormula, ParseError> {
        let lhs = self.path_or()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let rhs = self.path()?;
            return Ok(PathFormula::or(PathFormula::not(lhs), rhs));
        }
        Ok(lhs)
    }

    fn path_or(&mut self) -> Result<PathFormula, ParseError> {
        let mut lhs = self.path_and()?;
        while self.peek() == Some(&Tok::Pipe) {
            self.pos += 1;
            let rhs = self.path_and()?;
            lhs = PathFormula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn path_and(&mut self) -> Result<PathFormula, ParseError> {
        let mut lhs = self.path_factor()?;
        while self.peek() == Some(&Tok::Amp) {
            self.pos += 1;
            let rhs = self.path_factor()?;
            lhs = PathFormula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    // pfac := "!" pfac | chain; "F"/"G" prefixes start sugared chains, and a
    // parenthesized group is tried as a state formula first (so it can head
    // a chain) and reparsed as a path formula if that fails.
    fn path_factor(&mut self) -> Result<PathFormula, ParseError> {
        if self.peek() == Some(&Tok::Bang) {
            self.pos += 1;
            let inner = self.path_factor()?;
            return Ok(PathFormula::not(inner));
        }
        if self.peek_ident("F") {
            self.pos += 1;
            let window = self.window_interval()?;
            let phi = self.state()?;
            let mut steps = vec![(window, phi)];
            self.chain_tail(&mut steps)?;
            return Ok(PathFormula::UntilChain(StateFormula::True, steps));
        }
        if self.peek_ident("G") {
            self.pos += 1;
            let window = self.window_interval()?;
            let phi = self.state()?;
            // G^T phi = !(true U^T !phi)
            return Ok(PathFormula::not(PathFormula::UntilChain(
                StateFormula::True,
                vec![(window, StateFormula::not(phi))],
            )));
        }
        // Try a chain headed by a state formula; if the leading group turns
        // out to contain path structure, back off and parse "(" path ")".
        let save = self.pos;
        match self.chain() {
            Ok(phi) => Ok(phi),
            Err(first_err) => {
                self.pos = save;
                if self.peek() == Some(&Tok::LParen) {
                    self.pos += 1;
                    let inner = self.path()?;
                    self.expect(&Tok::RParen, "')'")?;
                    Ok(inner)
                } else {
                    Err(first_err)
                }
            }
        }
    }

    // chain := state ("U" ivl state)*, desugaring to an until-chain; a bare
    // state formula becomes a state query.
    fn chain(&mut self) -> Result<PathFormula, ParseError> {
        let head = self.state()?;
        let mut steps = Vec::new();
        self.chain_tail(&mut steps)?;
        if steps.is_empty() {
            // A bare `true` is the trivially true path formula; any other
            // bare state formula queries the initial distribution.
            if head == StateFormula::True {
                Ok(PathFormula::True)
            } else {
                Ok(PathFormula::state_query(head))
            }
        } else {
            Ok(PathFormula::UntilChain(head, steps))
        }
    }

    fn chain_tail(
        &mut self,
        steps: &mut Vec<(TimeWindow, StateFormula)>,
    ) -> Result<(), ParseError> {
        while self.peek_ident("U") {
            self.pos += 1;
            let window = self.window_interval()?;
            let phi = self.state()?;
            steps.push((window, phi));
        }
        Ok(())
    }

    fn window_interval(&mut self) -> Result<TimeWindow, ParseError> {
        let at = self.here();
        let (low, high, low_closed, high_closed) = self.interval_body()?;
        let w = TimeWindow { low, high, low_closed, high_closed };
        if !w.is_valid() {
            return Err(ParseError {
                position: at,
                message: format!("empty or invalid time window {w}"),
            });
        }
        Ok(w)
    }

    // state := simp; simp := sor ("->" simp)?; sor := sand ("|" sand)*;
    // sand := sfac ("&" sfac)*; sfac := "!" sfac | "(" state ")" | atom
    // | "true" | "false".
    fn state(&mut self) -> Result<StateFormula, ParseError> {
        let lhs = self.state_or()?;
        if self.peek() == Some(&Tok::Arrow) {
            // Only consume the arrow if the right side is a state formula;
            // otherwise leave it for the path grammar.
            let save = self.pos;
            self.pos += 1;
            match self.state() {
                Ok(rhs) => return Ok(StateFormula::or(StateFormula::not(lhs), rhs)),
                Err(_) => self.pos = save,
            }
        }
        Ok(lhs)
    }

    fn state_or(&mut self) -> Result<StateFormula, ParseError> {
        let mut lhs = self.state_and()?;
        while self.peek() == Some(&Tok::Pipe) {
            let save = self.pos;
            self.pos += 1;
            match self.state_and() {
                Ok(rhs) => lhs = StateFormula::or(lhs, rhs),
                Err(_) => {
                    // The disjunct is a path-level operand; hand back.
                    self.pos = save;
                    break;
                }
            }
        }
        Ok(lhs)
    }

    fn state_and(&mut self) -> Result<StateFormula, ParseError> {
        let mut lhs = self.state_factor()?;
        while self.peek() == Some(&Tok::Amp) {
            let save = self.pos;
            self.pos += 1;
            match self.state_factor() {
                Ok(rhs) => lhs = StateFormula::and(lhs, rhs),
                Err(_) => {
                    self.pos = save;
                    break;
                }
            }
        }
        Ok(lhs)
    }

    fn state_factor(&mut self) -> Result<StateFormula, ParseError> {
        match self.peek() {
            Some(Tok::Bang) => {
                self.pos += 1;
                let inner = self.state_factor()?;
                Ok(StateFormula::not(inner))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.state()?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(inner)
            }
            Some(Tok::Ident(w)) if w == "true" => {
                self.pos += 1;
                Ok(StateFormula::True)
            }
            Some(Tok::Ident(w)) if w == "false" => {
                self.pos += 1;
                Ok(StateFormula::falsum())
            }
            Some(Tok::Ident(w)) if w == "P" => self.atom(),
            _ => Err(self.err("expected a state formula".to_string())),
        }
    }

    // atom := "P" "[" nat "]" "in" ivl
    fn atom(&mut self) -> Result<StateFormula, ParseError> {
        self.pos += 1; // "P"
        self.expect(&Tok::LBracket, "'[' after P")?;
        let at = self.here();
        let idx = match self.bump() {
            Some(Tok::Number(r)) if r.denom().is_one() && r >= Rat::one() => {
                r.numer().try_into().map_err(|_| ParseError {
                    position: at,
                    message: "state index out of range".to_string(),
                })?
            }
            _ => {
                return Err(ParseError {
                    position: at,
                    message: "expected a positive state index".to_string(),
                })
            }
        };
        self.expect(&Tok::RBracket, "']'")?;
        if !self.peek_ident("in") {
            return Err(self.err("expected 'in'".to_string()));
        }
        self.pos += 1;
        let at = self.here();
        let (low, high, low_closed, high_closed) = self.interval_body()?;
        let interval = ProbInterval { low, high, low_closed, high_closed };
        if !interval.is_valid() {
            return Err(ParseError {
                position: at,
                message: format!("empty or invalid probability interval {interval}"),
            });
        }
        Ok(StateFormula::AtomRef(Atom { state_index: idx, interval }))
    }

    fn interval_body(&mut self) -> Result<(Rat, Rat, bool, bool), ParseError> {
        let at = self.here();
        let low_closed = match self.bump() {
            Some(Tok::LBracket) => true,
            Some(Tok::LParen) => false,
            _ => {
                return Err(ParseError {
                    position: at,
                    message: "expected '[' or '(' starting an interval".to_string(),
                })
            }
        };
        let at = self.here();
        let low = match self.bump() {
            Some(Tok::Number(r)) => r,
            _ => {
                return Err(ParseError {
                    position: at,
                    message: "expected a rational lower endpoint".to_string(),
                })
            }
        };
        self.expect(&Tok::Comma, "','")?;
        let at = self.here();
        let high = match self.bump() {
            Some(Tok::Number(r)) => r,
            _ => {
                return Err(ParseError {
                    position: at,
                    message: "expected a rational upper endpoint".to_string(),
                })
            }
        };
        let at = self.here();
        let high_closed = match self.bump() {
            Some(Tok::RBracket) => true,
            Some(Tok::RParen) => false,
            _ => {
                return Err(ParseError {
                    position: at,
                    message: "expected ']' or ')' ending an interval".to_string(),
                })
            }
        };
        Ok((low, high, low_closed, high_closed))
    }
}

// ---------------------------------------------------------------------------
// Printing (inverse of the parser on the core AST)
// ---------------------------------------------------------------------------

impl fmt::Display for StateFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print_state(self, f)
    }
}

impl fmt::Display for PathFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print_path(self, f)
    }
}

fn print_state(phi: &StateFormula, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match phi {
        StateFormula::True => write!(f, "true"),
        StateFormula::AtomRef(a) => write!(f, "P[{}] in {}", a.state_index, a.interval),
        StateFormula::Not(x) => {
            write!(f, "!")?;
            print_state_atomic(x, f)
        }
        StateFormula::And(x, y) => {
            print_state_atomic(x, f)?;
            write!(f, " & ")?;
            print_state_atomic(y, f)
        }
    }
}

fn print_state_atomic(phi: &StateFormula, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match phi {
        StateFormula::True | StateFormula::AtomRef(_) | StateFormula::Not(_) => print_state(phi, f),
        StateFormula::And(..) => {
            write!(f, "(")?;
            print_state(phi, f)?;
            write!(f, ")")
        }
    }
}

fn print_path(phi: &PathFormula, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match phi {
        PathFormula::True => write!(f, "true"),
        PathFormula::UntilChain(phi0, steps) => {
            // A negated head must be parenthesized: a leading `!` would
            // otherwise parse as path-level negation of the whole chain.
            if matches!(phi0, StateFormula::Not(_)) {
                write!(f, "(")?;
                print_state(phi0, f)?;
                write!(f, ")")?;
            } else {
                print_state_atomic(phi0, f)?;
            }
            for (w, p) in steps {
                write!(f, " U{w} ")?;
                print_state_atomic(p, f)?;
            }
            Ok(())
        }
        PathFormula::Not(x) => {
            write!(f, "!")?;
            print_path_atomic(x, f)
        }
        PathFormula::And(x, y) => {
            print_path_atomic(x, f)?;
            write!(f, " & ")?;
            print_path_atomic(y, f)
        }
    }
}

fn print_path_atomic(phi: &PathFormula, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match phi {
        PathFormula::Not(_) => print_path(phi, f),
        _ => {
            write!(f, "(")?;
            print_path(phi, f)?;
            write!(f, ")")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_int;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    fn atom(j: usize, low: Rat, high: Rat, lc: bool, hc: bool) -> Atom {
        Atom {
            state_index: j,
            interval: ProbInterval { low, high, low_closed: lc, high_closed: hc },
        }
    }

    #[test]
    fn parses_bare_atom_as_state_query() {
        let phi = parse("P[3] in [0.4,0.4]").unwrap();
        let a = atom(3, rat(2, 5), rat(2, 5), true, true);
        assert_eq!(
            phi,
            PathFormula::UntilChain(
                StateFormula::True,
                vec![(
                    TimeWindow::closed(Rat::zero(), Rat::zero()),
                    StateFormula::AtomRef(a)
                )],
            )
        );
    }

    #[test]
    fn until_is_right_flattened_into_a_chain() {
        let phi = parse("P[1] in [0,1] U[3,9] P[2] in [0,1] U(2,7) P[3] in [0,1]").unwrap();
        let full = |j| StateFormula::AtomRef(atom(j, rat_int(0), rat_int(1), true, true));
        assert_eq!(
            phi,
            PathFormula::UntilChain(
                full(1),
                vec![
                    (TimeWindow::closed(rat_int(3), rat_int(9)), full(2)),
                    (
                        TimeWindow {
                            low: rat_int(2),
                            high: rat_int(7),
                            low_closed: false,
                            high_closed: false,
                        },
                        full(3)
                    ),
                ],
            )
        );
    }

    #[test]
    fn eventually_desugars_to_true_until() {
        let phi = parse("F[0,1000] P[2] in [1,1]").unwrap();
        let a = StateFormula::AtomRef(atom(2, rat_int(1), rat_int(1), true, true));
        assert_eq!(
            phi,
            PathFormula::UntilChain(
                StateFormula::True,
                vec![(TimeWindow::closed(rat_int(0), rat_int(1000)), a)],
            )
        );
    }

    #[test]
    fn globally_desugars_to_negated_until() {
        let phi = parse("G[0,1] P[1] in [0.9,1]").unwrap();
        let a = StateFormula::AtomRef(atom(1, rat(9, 10), rat_int(1), true, true));
        assert_eq!(
            phi,
            PathFormula::not(PathFormula::UntilChain(
                StateFormula::True,
                vec![(TimeWindow::closed(rat_int(0), rat_int(1)), StateFormula::not(a))],
            ))
        );
    }

    #[test]
    fn parenthesized_path_formulas_combine() {
        let phi =
            parse("!(P[1] in [0,1] U[0,1] P[2] in [0,1]) & (F[0,2] P[1] in [0,1])").unwrap();
        match phi {
            PathFormula::And(l, r) => {
                assert!(matches!(*l, PathFormula::Not(_)));
                assert!(matches!(*r, PathFormula::UntilChain(..)));
            }
            other => panic!("expected a conjunction, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_syntax_with_position() {
        let err = parse("P[1] in [0,1] U P[2] in [0,1]").unwrap_err();
        assert_eq!(err.position, 16);
        let err = parse("P[0] in [0,1]").unwrap_err();
        assert!(err.message.contains("state index"));
        let err = parse("P[1] in [0.7,0.2]").unwrap_err();
        assert!(err.message.contains("probability interval"));
        let err = parse("P[1] in [0,1] U[5,2] P[1] in [0,1]").unwrap_err();
        assert!(err.message.contains("time window"));
    }

    #[test]
    fn negated_atom_rewrites_to_two_complements() {
        let a = StateFormula::AtomRef(atom(2, rat(1, 10), rat(9, 10), true, true));
        let cnf = to_cnf(&StateFormula::not(a));
        assert_eq!(
            cnf.clauses,
            vec![vec![
                atom(2, rat_int(0), rat(1, 10), true, false),
                atom(2, rat(9, 10), rat_int(1), false, true),
            ]]
        );
    }

    #[test]
    fn negated_full_interval_is_false() {
        let a = StateFormula::AtomRef(atom(1, rat_int(0), rat_int(1), true, true));
        let cnf = to_cnf(&StateFormula::not(a));
        assert_eq!(cnf.clauses, vec![Vec::new()]);
        let mu = Distribution { probs: vec![rat_int(1)] };
        assert!(!cnf.eval(&mu));
    }

    #[test]
    fn conjunction_splits_into_singleton_clauses() {
        let a = atom(1, rat_int(0), rat(1, 2), true, true);
        let b = atom(2, rat(1, 2), rat_int(1), false, true);
        let phi = StateFormula::and(
            StateFormula::AtomRef(a.clone()),
            StateFormula::AtomRef(b.clone()),
        );
        assert_eq!(to_cnf(&phi).clauses, vec![vec![a], vec![b]]);
    }

    #[test]
    fn normalization_pushes_negation_to_leaves() {
        let chain = |j: usize| {
            PathFormula::UntilChain(
                StateFormula::True,
                vec![(
                    TimeWindow::closed(rat_int(0), rat_int(1)),
                    StateFormula::AtomRef(atom(j, rat_int(0), rat_int(1), true, true)),
                )],
            )
        };
        // !!(c1) -> plain leaf
        let n = normalize_path(&PathFormula::not(PathFormula::not(chain(1))));
        assert!(matches!(n, NormalPath::Leaf { negated: false, .. }));
        // !(c1 & c2) -> !c1 | !c2
        let n = normalize_path(&PathFormula::not(PathFormula::and(chain(1), chain(2))));
        match n {
            NormalPath::Or(l, r) => {
                assert!(matches!(*l, NormalPath::Leaf { negated: true, .. }));
                assert!(matches!(*r, NormalPath::Leaf { negated: true, .. }));
            }
            other => panic!("expected a disjunction, got {other:?}"),
        }
        // c1 & true -> c1
        let n = normalize_path(&PathFormula::and(chain(1), PathFormula::True));
        assert!(matches!(n, NormalPath::Leaf { negated: false, .. }));
    }

    // -- property tests ----------------------------------------------------

    fn arb_prob() -> impl Strategy<Value = Rat> {
        (0i64..=8).prop_map(|n| rat(n, 8))
    }

    fn arb_interval() -> impl Strategy<Value = ProbInterval> {
        (arb_prob(), arb_prob(), any::<bool>(), any::<bool>()).prop_map(|(a, b, lc, hc)| {
            let (low, high) = if a <= b { (a, b) } else { (b, a) };
            let degenerate = low == high;
            ProbInterval {
                low,
                high,
                low_closed: lc || degenerate,
                high_closed: hc || degenerate,
            }
        })
    }

    fn arb_state(states: usize) -> impl Strategy<Value = StateFormula> {
        let leaf = prop_oneof![
            Just(StateFormula::True),
            (1..=states, arb_interval())
                .prop_map(|(j, interval)| StateFormula::AtomRef(Atom {
                    state_index: j,
                    interval
                })),
        ];
        leaf.prop_recursive(3, 16, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(StateFormula::not),
                (inner.clone(), inner).prop_map(|(a, b)| StateFormula::and(a, b)),
            ]
        })
    }

    fn arb_window() -> impl Strategy<Value = TimeWindow> {
        (0i64..=10, 1i64..=10, any::<bool>(), any::<bool>()).prop_map(|(a, w, lc, hc)| {
            TimeWindow {
                low: rat_int(a),
                high: rat_int(a + w),
                low_closed: lc,
                high_closed: hc,
            }
        })
    }

    // Path-level booleans are generated only over windowed chains: a bare
    // state operand of `&` is absorbed by the (equivalent) state-level
    // conjunction when reparsed, so AST round-tripping would not hold.
    fn arb_path(states: usize) -> impl Strategy<Value = PathFormula> {
        let chain = (
            arb_state(states),
            proptest::collection::vec((arb_window(), arb_state(states)), 1..=3),
        )
            .prop_map(|(head, steps)| PathFormula::UntilChain(head, steps));
        let tree = chain.prop_recursive(3, 12, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(PathFormula::not),
                (inner.clone(), inner).prop_map(|(a, b)| PathFormula::and(a, b)),
            ]
        });
        prop_oneof![
            Just(PathFormula::True),
            arb_state(states).prop_map(PathFormula::state_query),
            tree,
        ]
    }

    fn arb_distribution(states: usize) -> impl Strategy<Value = Distribution> {
        proptest::collection::vec(1u32..=16, states).prop_map(|weights| {
            let total: u32 = weights.iter().sum();
            Distribution {
                probs: weights.iter().map(|&w| rat(w as i64, total as i64)).collect(),
            }
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn printing_then_parsing_is_identity(phi in arb_path(3)) {
            let text = phi.to_string();
            let reparsed = parse(&text)
                .unwrap_or_else(|e| panic!("failed to reparse {text:?}: {e}"));
            prop_assert_eq!(reparsed, phi);
        }

        #[test]
        fn cnf_preserves_satisfaction(phi in arb_state(3), mu in arb_distribution(3)) {
            prop_assert_eq!(to_cnf(&phi).eval(&mu), phi.eval(&mu));
        }

        #[test]
        fn complements_partition_the_unit_interval(
            interval in arb_interval(),
            p in arb_prob(),
        ) {
            let complements = complement_intervals(&interval);
            let hits = complements.iter().filter(|c| c.contains(&p)).count()
                + usize::from(interval.contains(&p));
            prop_assert_eq!(hits, 1);
        }
    }
}
