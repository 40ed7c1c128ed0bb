//! Exact multivariate graded polynomials over ℤ or 𝔽ₚ.
//!
//! Variables carry cohomological degrees. Terms are stored in a `BTreeMap`
//! keyed by exponent vectors so iteration (and therefore every serialized
//! form) is deterministic; display uses graded-lex order with earlier
//! context variables most significant.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficient ring of a polynomial or presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CoeffRing {
    Integers,
    Prime(u32),
}

impl CoeffRing {
    pub fn prime(p: u32) -> Result<Self> {
        if crate::arith::is_prime(p as u64) {
            Ok(CoeffRing::Prime(p))
        } else {
            Err(Error::Range(format!("{p} is not prime")))
        }
    }

    pub fn characteristic(self) -> u32 {
        match self {
            CoeffRing::Integers => 0,
            CoeffRing::Prime(p) => p,
        }
    }

    /// Canonical representative: unchanged over ℤ, residue in [0, p) otherwise.
    pub fn normalize(self, c: BigInt) -> BigInt {
        match self {
            CoeffRing::Integers => c,
            CoeffRing::Prime(p) => c.mod_floor(&BigInt::from(p)),
        }
    }

    pub fn label(self) -> String {
        match self {
            CoeffRing::Integers => "Z".into(),
            CoeffRing::Prime(p) => format!("F{p}"),
        }
    }
}

impl fmt::Display for CoeffRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    /// Cohomological degree.
    pub degree: u32,
}

#[derive(Debug)]
struct ContextInner {
    vars: Vec<Variable>,
    by_name: HashMap<String, usize>,
}

/// An ordered list of named, graded variables shared by polynomials.
#[derive(Clone, Debug)]
pub struct Context(Arc<ContextInner>);

impl PartialEq for Context {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.vars == other.0.vars
    }
}
impl Eq for Context {}

impl Context {
    pub fn new<S: Into<String>>(vars: impl IntoIterator<Item = (S, u32)>) -> Result<Self> {
        let vars: Vec<Variable> = vars
            .into_iter()
            .map(|(n, d)| Variable { name: n.into(), degree: d })
            .collect();
        let mut by_name = HashMap::new();
        for (i, v) in vars.iter().enumerate() {
            if v.degree == 0 {
                return Err(Error::Range(format!("variable {} has degree 0", v.name)));
            }
            if by_name.insert(v.name.clone(), i).is_some() {
                return Err(Error::Inconsistent(format!("duplicate variable {}", v.name)));
            }
        }
        Ok(Context(Arc::new(ContextInner { vars, by_name })))
    }

    pub fn vars(&self) -> &[Variable] {
        &self.0.vars
    }
    pub fn len(&self) -> usize {
        self.0.vars.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.vars.is_empty()
    }
    pub fn index(&self, name: &str) -> Option<usize> {
        self.0.by_name.get(name).copied()
    }
    pub fn name(&self, i: usize) -> &str {
        &self.0.vars[i].name
    }
    pub fn degree_of(&self, i: usize) -> u32 {
        self.0.vars[i].degree
    }
    pub fn degrees(&self) -> Vec<u32> {
        self.0.vars.iter().map(|v| v.degree).collect()
    }
    pub fn mono_degree(&self, m: &[u16]) -> u32 {
        m.iter()
            .zip(self.0.vars.iter())
            .map(|(&e, v)| e as u32 * v.degree)
            .sum()
    }

    /// Graded-lex comparison; larger means earlier in display order.
    pub fn grlex_cmp(&self, a: &[u16], b: &[u16]) -> Ordering {
        self.mono_degree(a)
            .cmp(&self.mono_degree(b))
            .then_with(|| a.cmp(b))
    }

    /// Context extended by extra variables (names must be new).
    pub fn extended<S: Into<String>>(&self, extra: impl IntoIterator<Item = (S, u32)>) -> Result<Self> {
        let mut all: Vec<(String, u32)> =
            self.vars().iter().map(|v| (v.name.clone(), v.degree)).collect();
        all.extend(extra.into_iter().map(|(n, d)| (n.into(), d)));
        Context::new(all)
    }
}

pub type Mono = Vec<u16>;

/// A polynomial with canonical (normalized, zero-free) term storage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    ctx: Context,
    ring: CoeffRing,
    terms: BTreeMap<Mono, BigInt>,
}

impl Poly {
    pub fn zero(ctx: &Context, ring: CoeffRing) -> Self {
        Poly { ctx: ctx.clone(), ring, terms: BTreeMap::new() }
    }

    pub fn constant(ctx: &Context, ring: CoeffRing, c: impl Into<BigInt>) -> Self {
        Self::monomial(ctx, ring, vec![0; ctx.len()], c)
    }

    pub fn one(ctx: &Context, ring: CoeffRing) -> Self {
        Self::constant(ctx, ring, 1)
    }

    pub fn monomial(ctx: &Context, ring: CoeffRing, exps: Mono, c: impl Into<BigInt>) -> Self {
        assert_eq!(exps.len(), ctx.len(), "exponent vector length");
        let mut p = Self::zero(ctx, ring);
        p.add_term(exps, c.into());
        p
    }

    pub fn var(ctx: &Context, ring: CoeffRing, i: usize) -> Self {
        let mut e = vec![0; ctx.len()];
        e[i] = 1;
        Self::monomial(ctx, ring, e, 1)
    }

    pub fn var_named(ctx: &Context, ring: CoeffRing, name: &str) -> Result<Self> {
        let i = ctx
            .index(name)
            .ok_or_else(|| Error::Parse(format!("unknown variable {name}")))?;
        Ok(Self::var(ctx, ring, i))
    }

    pub fn from_terms(ctx: &Context, ring: CoeffRing, terms: impl IntoIterator<Item = (Mono, BigInt)>) -> Self {
        let mut p = Self::zero(ctx, ring);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn ctx(&self) -> &Context {
        &self.ctx
    }
    pub fn ring(&self) -> CoeffRing {
        self.ring
    }
    pub fn terms(&self) -> &BTreeMap<Mono, BigInt> {
        &self.terms
    }
    pub fn into_terms(self) -> BTreeMap<Mono, BigInt> {
        self.terms
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn coefficient(&self, m: &[u16]) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Adds c·m in place, keeping the representation canonical.
    pub fn add_term(&mut self, m: Mono, c: BigInt) {
        debug_assert_eq!(m.len(), self.ctx.len());
        let c = self.ring.normalize(c);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = self.ring.normalize(o.get() + c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check(&self, other: &Poly) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let mut acc: HashMap<Mono, BigInt> = HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Mono = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                *acc.entry(m).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        Ok(Poly::from_terms(&self.ctx, self.ring, acc))
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        Poly::from_terms(&self.ctx, self.ring, self.terms.iter().map(|(m, x)| (m.clone(), x * c)))
    }

    /// Multiplies by a monomial given as an exponent vector.
    pub fn shift(&self, m: &[u16]) -> Poly {
        let mut out = Poly::zero(&self.ctx, self.ring);
        for (t, c) in &self.terms {
            let e: Mono = t.iter().zip(m).map(|(a, b)| a + b).collect();
            out.terms.insert(e, c.clone());
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(&self.ctx, self.ring);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Common cohomological degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Result<Option<u32>> {
        let mut it = self.terms.keys().map(|m| self.ctx.mono_degree(m));
        let Some(d) = it.next() else { return Ok(None) };
        if it.all(|e| e == d) {
            Ok(Some(d))
        } else {
            Err(Error::Inhomogeneous(self.to_string()))
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree().is_ok()
    }

    /// Homogeneous component of the given degree.
    pub fn component(&self, d: u32) -> Poly {
        Poly::from_terms(
            &self.ctx,
            self.ring,
            self.terms
                .iter()
                .filter(|(m, _)| self.ctx.mono_degree(m) == d)
                .map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m[i] > 0)
    }

    /// Ring map sending variable i to `images[i]`; images share one target.
    pub fn substitute(&self, images: &[Poly]) -> Result<Poly> {
        if images.len() != self.ctx.len() {
            return Err(Error::Inconsistent("substitution arity".into()));
        }
        let Some(first) = images.first() else {
            return Ok(self.clone());
        };
        let tctx = first.ctx.clone();
        let tring = first.ring;
        for im in images {
            if im.ctx != tctx {
                return Err(Error::ContextMismatch);
            }
            if im.ring != tring {
                return Err(Error::RingMismatch);
            }
        }
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|im| vec![Poly::one(&tctx, tring), im.clone()]).collect();
        let mut acc: HashMap<Mono, BigInt> = HashMap::new();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(&tctx, tring, c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
                if t.is_zero() {
                    break;
                }
            }
            for (tm, tc) in t.terms {
                *acc.entry(tm).or_insert_with(BigInt::zero) += tc;
            }
        }
        Ok(Poly::from_terms(&tctx, tring, acc))
    }

    /// Substitution by variable name; unbound names map to the same-named
    /// variable of the target context.
    pub fn substitute_named(&self, assignment: &BTreeMap<String, Poly>, target: &Context, ring: CoeffRing) -> Result<Poly> {
        let images = self
            .ctx
            .vars()
            .iter()
            .map(|v| match assignment.get(&v.name) {
                Some(p) => {
                    if p.ctx != *target {
                        Err(Error::ContextMismatch)
                    } else {
                        Ok(p.clone())
                    }
                }
                None => Poly::var_named(target, ring, &v.name)
                    .map_err(|_| Error::Inconsistent(format!("unbound variable {}", v.name))),
            })
            .collect::<Result<Vec<_>>>()?;
        if images.is_empty() {
            return Ok(Poly::from_terms(target, ring, self.terms.values().map(|c| (vec![0; target.len()], c.clone()))));
        }
        self.substitute(&images)
    }

    /// Same polynomial in a context containing all used variable names.
    pub fn embed(&self, target: &Context) -> Result<Poly> {
        let map: Vec<usize> = self
            .ctx
            .vars()
            .iter()
            .map(|v| target.index(&v.name).ok_or_else(|| Error::Inconsistent(format!("{} missing from target", v.name))))
            .collect::<Result<_>>()?;
        let mut out = Poly::zero(target, self.ring);
        for (m, c) in &self.terms {
            let mut e = vec![0u16; target.len()];
            for (i, &x) in m.iter().enumerate() {
                if target.degree_of(map[i]) != self.ctx.degree_of(i) {
                    return Err(Error::Inconsistent("degree changes under embedding".into()));
                }
                e[map[i]] = x;
            }
            out.add_term(e, c.clone());
        }
        Ok(out)
    }

    /// Drops variables that do not occur, moving into `target` by name.
    pub fn project(&self, target: &Context) -> Result<Poly> {
        let mut out = Poly::zero(target, self.ring);
        for (m, c) in &self.terms {
            let mut e = vec![0u16; target.len()];
            for (i, &x) in m.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let j = target
                    .index(self.ctx.name(i))
                    .ok_or_else(|| Error::Inconsistent(format!("{} missing from target", self.ctx.name(i))))?;
                e[j] = x;
            }
            out.add_term(e, c.clone());
        }
        Ok(out)
    }

    pub fn reduce_mod(&self, p: u32) -> Poly {
        Poly::from_terms(&self.ctx, CoeffRing::Prime(p), self.terms.clone())
    }

    /// Integral lift using representatives in [0, p); identity over ℤ.
    pub fn lift_integral(&self) -> Poly {
        Poly::from_terms(&self.ctx, CoeffRing::Integers, self.terms.clone())
    }

    /// Integral lift using symmetric representatives in (-p/2, p/2].
    pub fn lift_symmetric(&self) -> Poly {
        match self.ring {
            CoeffRing::Integers => self.clone(),
            CoeffRing::Prime(p) => {
                let half = BigInt::from(p / 2);
                Poly::from_terms(
                    &self.ctx,
                    CoeffRing::Integers,
                    self.terms.iter().map(|(m, c)| (m.clone(), if c > &half { c - p } else { c.clone() })),
                )
            }
        }
    }

    /// Exact division of every coefficient by `d` (ℤ only).
    pub fn div_exact(&self, d: &BigInt) -> Result<Poly> {
        if self.ring != CoeffRing::Integers {
            return Err(Error::RingMismatch);
        }
        let mut out = Poly::zero(&self.ctx, self.ring);
        for (m, c) in &self.terms {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return Err(Error::NotDivisible(format!("{} by {}", self, d)));
            }
            out.add_term(m.clone(), q);
        }
        Ok(out)
    }

    /// Exact division by a variable.
    pub fn div_var(&self, i: usize) -> Result<Poly> {
        let mut out = Poly::zero(&self.ctx, self.ring);
        for (m, c) in &self.terms {
            if m[i] == 0 {
                return Err(Error::NotDivisible(format!("{} by {}", self, self.ctx.name(i))));
            }
            let mut e = m.clone();
            e[i] -= 1;
            out.add_term(e, c.clone());
        }
        Ok(out)
    }

    /// Groups terms by the exponents of the chosen variables: returns
    /// μ ↦ r_μ with self = Σ μ·r_μ, where r_μ no longer involves them.
    pub fn collect_by(&self, vars: &[usize]) -> BTreeMap<Mono, Poly> {
        let mut out: BTreeMap<Mono, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let key: Mono = vars.iter().map(|&i| m[i]).collect();
            let mut rest = m.clone();
            for &i in vars {
                rest[i] = 0;
            }
            out.entry(key).or_insert_with(|| Poly::zero(&self.ctx, self.ring)).add_term(rest, c.clone());
        }
        out
    }

    /// Terms in display order (graded lex, descending).
    pub fn sorted_terms(&self) -> Vec<(&Mono, &BigInt)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| self.ctx.grlex_cmp(b.0, a.0));
        v
    }

    pub fn to_latex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let is_const = m.iter().all(|&e| e == 0);
            if !a.is_one() || is_const {
                s.push_str(&a.to_string());
            }
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                s.push_str(&latex_name(self.ctx.name(i)));
                if e > 1 {
                    s.push_str(&format!("^{{{e}}}"));
                }
            }
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .sorted_terms()
            .into_iter()
            .map(|(m, c)| {
                serde_json::json!({
                    "coefficient": bigint_json(c),
                    "exponents": m,
                })
            })
            .collect();
        serde_json::json!({
            "ring": self.ring.label(),
            "variables": self.ctx.vars(),
            "terms": terms,
            "text": self.to_string(),
        })
    }

    /// Parses expressions such as `x4*(c4 - ω2^4) - 2*c5*x3`.
    pub fn parse(ctx: &Context, ring: CoeffRing, src: &str) -> Result<Poly> {
        let toks = tokenize(src)?;
        let mut p = Parser { toks: &toks, pos: 0, ctx, ring };
        let out = p.expr()?;
        if p.pos != toks.len() {
            return Err(Error::Parse(format!("trailing input in {src:?}")));
        }
        Ok(out)
    }
}

pub fn bigint_json(c: &BigInt) -> serde_json::Value {
    match c.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(c.to_string()),
    }
}

/// `ω2` → `\omega_{2}`, `c14` → `c_{14}`.
pub fn latex_name(name: &str) -> String {
    let split = name.find(|ch: char| ch.is_ascii_digit()).unwrap_or(name.len());
    let (head, tail) = name.split_at(split);
    let head = match head {
        "ω" => "\\omega",
        "ϖ" => "\\varpi",
        "ρ" => "\\rho",
        "ζ" => "\\zeta",
        "ς" => "\\varsigma",
        "ι" => "\\iota",
        "γ" => "\\gamma",
        "ξ" => "\\xi",
        "τ" => "\\tau",
        other => other,
    };
    if tail.is_empty() {
        format!("{head} ")
    } else {
        format!("{head}_{{{tail}}}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let mut factors: Vec<String> = Vec::new();
            let is_const = m.iter().all(|&e| e == 0);
            if !a.is_one() || is_const {
                factors.push(a.to_string());
            }
            for (i, &e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.ctx.name(i).to_string()),
                    _ => factors.push(format!("{}^{}", self.ctx.name(i), e)),
                }
            }
            f.write_str(&factors.join("·"))?;
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl std::ops::$tr<&Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                self.$checked(rhs).expect("polynomial operands share context and ring")
            }
        }
        impl std::ops::$tr<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$checked(&rhs).expect("polynomial operands share context and ring")
            }
        }
    };
}
binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&BigInt::from(-1))
    }
}

// ---------------------------------------------------------------- parsing

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Tok::Num(s.parse().map_err(|_| Error::Parse(s.clone()))?));
        } else if ch.is_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*·^()−".contains(ch) {
            out.push(Tok::Op(match ch {
                '·' => '*',
                '−' => '-',
                c => c,
            }));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {ch:?} in {src:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
    ctx: &'a Context,
    ring: CoeffRing,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = Poly::zero(self.ctx, self.ring);
        let mut sign = 1;
        if let Some(Tok::Op(c @ ('+' | '-'))) = self.peek() {
            sign = if *c == '-' { -1 } else { 1 };
            self.pos += 1;
        }
        loop {
            let t = self.term()?;
            acc = if sign > 0 { &acc + &t } else { &acc - &t };
            match self.peek() {
                Some(Tok::Op('+')) => sign = 1,
                Some(Tok::Op('-')) => sign = -1,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                // juxtaposition: `2x3`, `2(…)`, `(…)(…)`
                Some(Tok::Ident(_)) | Some(Tok::Op('(')) | Some(Tok::Num(_)) => {
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            match self.peek() {
                Some(Tok::Num(n)) => {
                    let e = n.to_u32().ok_or_else(|| Error::Parse("exponent too large".into()))?;
                    self.pos += 1;
                    return Ok(base.pow(e));
                }
                _ => return Err(Error::Parse("expected exponent".into())),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Poly::constant(self.ctx, self.ring, n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Poly::var_named(self.ctx, self.ring, &name)
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::Op(')')) {
                    return Err(Error::Parse("missing ')'".into()));
                }
                self.pos += 1;
                Ok(e)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// e_r of a list of polynomials (all in one context).
pub fn elementary_symmetric(forms: &[Poly], r: usize) -> Result<Poly> {
    let Some(first) = forms.first() else {
        return Err(Error::Range("empty form list".into()));
    };
    if r == 0 || r > forms.len() {
        return Err(Error::Range(format!("r = {r} with {} forms", forms.len())));
    }
    Ok(elementary_symmetric_all(forms)?.swap_remove(r).unwrap_or_else(|| Poly::zero(first.ctx(), first.ring())))
}

/// [e_0, e_1, …, e_N] of the given forms; entries are `None` only past N.
pub fn elementary_symmetric_all(forms: &[Poly]) -> Result<Vec<Option<Poly>>> {
    let Some(first) = forms.first() else {
        return Err(Error::Range("empty form list".into()));
    };
    let ctx = first.ctx().clone();
    let ring = first.ring();
    let mut e: Vec<Poly> = vec![Poly::one(&ctx, ring)];
    for f in forms {
        f.check(first)?;
        let mut next = e.clone();
        next.push(Poly::zero(&ctx, ring));
        for k in 1..next.len() {
            next[k] = &next[k] + &(&e[k - 1] * f);
        }
        e = next;
    }
    Ok(e.into_iter().map(Some).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx2() -> Context {
        Context::new([("ω1", 2), ("ω2", 2)]).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let c = ctx2();
        let z = CoeffRing::Integers;
        let w1 = Poly::var(&c, z, 0);
        let w2 = Poly::var(&c, z, 1);
        assert_eq!((&w1 * &w1).to_string(), "ω1^2");
        let a = Poly::parse(&c, z, "2ω1 - ω2").unwrap();
        let b = Poly::parse(&c, z, "-ω1 + 2ω2").unwrap();
        assert_eq!(&a + &b, &w1 + &w2);
        let f2 = CoeffRing::Prime(2);
        let s = Poly::parse(&c, f2, "ω1 + ω2").unwrap();
        assert_eq!((&s * &s).to_string(), "ω1^2 + ω2^2");
    }

    #[test]
    fn mismatch_is_an_error() {
        let c = ctx2();
        let d = Context::new([("x", 2)]).unwrap();
        let a = Poly::var(&c, CoeffRing::Integers, 0);
        let b = Poly::var(&d, CoeffRing::Integers, 0);
        assert_eq!(a.checked_add(&b), Err(Error::ContextMismatch));
        let e = Poly::var(&c, CoeffRing::Prime(3), 0);
        assert_eq!(a.checked_mul(&e), Err(Error::RingMismatch));
    }

    #[test]
    fn elementary_symmetric_examples() {
        let c = ctx2();
        let z = CoeffRing::Integers;
        let forms: Vec<Poly> = ["ω1", "ω2 - ω1", "-ω2"].iter().map(|s| Poly::parse(&c, z, s).unwrap()).collect();
        assert!(elementary_symmetric(&forms, 1).unwrap().is_zero());
        assert_eq!(
            elementary_symmetric(&forms, 2).unwrap(),
            Poly::parse(&c, z, "ω1*ω2 - ω1^2 - ω2^2").unwrap()
        );
        let pm = [Poly::parse(&c, z, "ω1").unwrap(), Poly::parse(&c, z, "-ω1").unwrap()];
        assert_eq!(elementary_symmetric(&pm, 2).unwrap().to_string(), "-ω1^2");
        assert!(matches!(elementary_symmetric(&pm, 3), Err(Error::Range(_))));
    }

    #[test]
    fn substitution_examples() {
        let c = ctx2();
        let z = CoeffRing::Integers;
        let u = Context::new([("ω1", 2)]).unwrap();
        let c2 = Poly::parse(&c, z, "ω1*ω2 - ω1^2 - ω2^2").unwrap();
        let img = [Poly::parse(&u, z, "ω1").unwrap(), Poly::parse(&u, z, "2ω1").unwrap()];
        assert_eq!(c2.substitute(&img).unwrap().to_string(), "-3·ω1^2");
        let f3 = CoeffRing::Prime(3);
        let w2sq = Poly::parse(&c, f3, "ω2^2").unwrap();
        let img3 = [Poly::parse(&u, f3, "ω1").unwrap(), Poly::parse(&u, f3, "2ω1").unwrap()];
        assert_eq!(w2sq.substitute(&img3).unwrap().to_string(), "ω1^2");
        let id = [Poly::var(&c, z, 0), Poly::var(&c, z, 1)];
        assert_eq!(c2.substitute(&id).unwrap(), c2);
    }

    #[test]
    fn degree_and_homogeneity() {
        let c = Context::new([("ω2", 2), ("x3", 6)]).unwrap();
        let z = CoeffRing::Integers;
        let p = Poly::parse(&c, z, "2x3 + 2ω2^3").unwrap();
        assert_eq!(p.degree().unwrap(), Some(6));
        let q = Poly::parse(&c, z, "x3 + ω2").unwrap();
        assert!(matches!(q.degree(), Err(Error::Inhomogeneous(_))));
        assert_eq!(Poly::zero(&c, z).degree().unwrap(), None);
    }

    #[test]
    fn parse_round_trip_and_latex() {
        let c = Context::new([("ω2", 2), ("c4", 8), ("x4", 8)]).unwrap();
        let z = CoeffRing::Integers;
        let p = Poly::parse(&c, z, "x4*(c4 - ω2^4) - 3(x4)^2").unwrap();
        assert_eq!(Poly::parse(&c, z, &p.to_string()).unwrap(), p);
        assert!(p.to_latex().contains("\\omega_{2}^{4}"));
    }
}
