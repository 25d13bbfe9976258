//! Graded quiver categories, sparse multilinear tables and A-infinity structures.
//!
//! Tuples are written `(a_d, ..., a_1)` with `a_1` innermost: index 0 of a
//! tuple slice is `a_d`. A tuple is composable when `target(a_i) = source(a_{i+1})`.
//! Signs follow the convention
//! `sum (-1)^{†_i} mu(a_d..a_{i+j+1}, mu^j(a_{i+j}..a_{i+1}), a_i..a_1) = 0`,
//! with `†_i = sum_{k<=i} (|a_k| - 1)`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use crate::scalars::{parse_scalar, FieldSpec, FieldValue, ScalarError};

pub type Gen = usize;
pub type Tuple = Vec<Gen>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("duplicate generator name {0}")]
    DuplicateGenerator(String),
    #[error("unknown object {0}")]
    UnknownObject(String),
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("identity {0} must have degree 0 and equal source and target")]
    BadIdentity(String),
    #[error("tuple ({0}) is not composable")]
    NotComposable(String),
    #[error("arity {0} exceeds truncation order {1}")]
    BeyondOrder(usize, usize),
    #[error("entry {tuple} -> {output}: {reason}")]
    Inconsistent {
        tuple: String,
        output: String,
        reason: String,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub source: usize,
    pub target: usize,
    pub degree: i32,
}

/// Objects, graded generators and designated identity generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuiverCategory {
    pub objects: Vec<String>,
    pub generators: Vec<Generator>,
    pub identities: Vec<Option<Gen>>,
}

impl QuiverCategory {
    pub fn new(
        objects: &[&str],
        generators: &[(&str, &str, &str, i32)],
        identities: &[&str],
    ) -> Result<Self, AlgebraError> {
        let objects: Vec<String> = objects.iter().map(|s| s.to_string()).collect();
        let obj = |n: &str| {
            objects
                .iter()
                .position(|o| o == n)
                .ok_or_else(|| AlgebraError::UnknownObject(n.to_string()))
        };
        let mut gens: Vec<Generator> = Vec::new();
        for (name, s, t, d) in generators {
            if gens.iter().any(|g| g.name == *name) {
                return Err(AlgebraError::DuplicateGenerator(name.to_string()));
            }
            gens.push(Generator {
                name: name.to_string(),
                source: obj(s)?,
                target: obj(t)?,
                degree: *d,
            });
        }
        let mut ids = vec![None; objects.len()];
        for name in identities {
            let g = gens
                .iter()
                .position(|g| g.name == *name)
                .ok_or_else(|| AlgebraError::UnknownGenerator(name.to_string()))?;
            let gg = &gens[g];
            if gg.degree != 0 || gg.source != gg.target {
                return Err(AlgebraError::BadIdentity(name.to_string()));
            }
            ids[gg.source] = Some(g);
        }
        Ok(QuiverCategory {
            objects,
            generators: gens,
            identities: ids,
        })
    }

    pub fn gen(&self, name: &str) -> Result<Gen, AlgebraError> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| AlgebraError::UnknownGenerator(name.to_string()))
    }

    pub fn name(&self, g: Gen) -> &str {
        &self.generators[g].name
    }

    pub fn deg(&self, g: Gen) -> i32 {
        self.generators[g].degree
    }

    pub fn source(&self, g: Gen) -> usize {
        self.generators[g].source
    }

    pub fn target(&self, g: Gen) -> usize {
        self.generators[g].target
    }

    pub fn is_identity(&self, g: Gen) -> bool {
        self.identities.contains(&Some(g))
    }

    pub fn non_identity(&self) -> Vec<Gen> {
        (0..self.generators.len())
            .filter(|g| !self.is_identity(*g))
            .collect()
    }

    pub fn all_gens(&self) -> Vec<Gen> {
        (0..self.generators.len()).collect()
    }

    /// Generators of `hom(src, tgt)` in canonical order.
    pub fn hom(&self, src: usize, tgt: usize) -> Vec<Gen> {
        (0..self.generators.len())
            .filter(|g| self.source(*g) == src && self.target(*g) == tgt)
            .collect()
    }

    pub fn composable(&self, t: &[Gen]) -> bool {
        t.windows(2).all(|w| self.target(w[1]) == self.source(w[0]))
    }

    /// Source object of `(a_d..a_1)`, i.e. `source(a_1)`.
    pub fn tuple_source(&self, t: &[Gen]) -> usize {
        self.source(*t.last().expect("nonempty tuple"))
    }

    pub fn tuple_target(&self, t: &[Gen]) -> usize {
        self.target(t[0])
    }

    pub fn tuple_degree(&self, t: &[Gen]) -> i32 {
        t.iter().map(|g| self.deg(*g)).sum()
    }

    /// `†_i = sum_{k<=i} (|a_k| - 1)` for the last `i` entries of `t`.
    pub fn dagger(&self, t: &[Gen], i: usize) -> i64 {
        t[t.len() - i..]
            .iter()
            .map(|g| self.deg(*g) as i64 - 1)
            .sum()
    }

    /// All composable tuples of length `d` drawn from `gens`, in lexicographic order.
    pub fn tuples(&self, gens: &[Gen], d: usize) -> Vec<Tuple> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(d);
        self.tuples_rec(gens, d, &mut cur, &mut out);
        out
    }

    fn tuples_rec(&self, gens: &[Gen], d: usize, cur: &mut Tuple, out: &mut Vec<Tuple>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for &g in gens {
            if cur.last().is_none_or(|&p| self.target(g) == self.source(p)) {
                cur.push(g);
                self.tuples_rec(gens, d, cur, out);
                cur.pop();
            }
        }
    }

    /// Keys of normalized length-`r` cochains: composable tuples of
    /// non-identity generators, or for `r = 0` the identity of each object.
    pub fn normalized_keys(&self, r: usize) -> Vec<Tuple> {
        if r == 0 {
            self.identities.iter().flatten().map(|g| vec![*g]).collect()
        } else {
            self.tuples(&self.non_identity(), r)
        }
    }

    pub fn fmt_tuple(&self, t: &[Gen]) -> String {
        t.iter().map(|g| self.name(*g)).collect::<Vec<_>>().join(" ")
    }
}

/// A linear combination of generators, sorted by generator index, zeros pruned.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Element {
    terms: Vec<(Gen, FieldValue)>,
}

impl Element {
    pub fn zero() -> Self {
        Element { terms: Vec::new() }
    }

    pub fn basis(g: Gen, spec: FieldSpec) -> Self {
        Element {
            terms: vec![(g, FieldValue::one(spec))],
        }
    }

    pub fn term(g: Gen, c: FieldValue) -> Self {
        let mut e = Element::zero();
        e.add_term(g, &c);
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Gen, FieldValue)>) -> Self {
        let mut e = Element::zero();
        for (g, c) in terms {
            e.add_term(g, &c);
        }
        e
    }

    pub fn terms(&self) -> &[(Gen, FieldValue)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, g: Gen) -> Option<&FieldValue> {
        self.terms
            .binary_search_by_key(&g, |t| t.0)
            .ok()
            .map(|i| &self.terms[i].1)
    }

    pub fn add_term(&mut self, g: Gen, c: &FieldValue) {
        if c.is_zero() {
            return;
        }
        match self.terms.binary_search_by_key(&g, |t| t.0) {
            Ok(i) => {
                let s = &self.terms[i].1 + c;
                if s.is_zero() {
                    self.terms.remove(i);
                } else {
                    self.terms[i].1 = s;
                }
            }
            Err(i) => self.terms.insert(i, (g, c.clone())),
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Element, c: &FieldValue) {
        if c.is_zero() {
            return;
        }
        for (g, x) in &other.terms {
            self.add_term(*g, &(x * c));
        }
    }

    pub fn scaled(&self, c: &FieldValue) -> Element {
        let mut e = Element::zero();
        e.add_scaled(self, c);
        e
    }

    pub fn neg(&self) -> Element {
        Element {
            terms: self.terms.iter().map(|(g, c)| (*g, -c)).collect(),
        }
    }

    /// Degree of the (homogeneous) element, if nonzero.
    pub fn degree(&self, cat: &QuiverCategory) -> Option<i32> {
        self.terms.first().map(|(g, _)| cat.deg(*g))
    }

    pub fn display(&self, cat: &QuiverCategory) -> String {
        fmt_combination(&self.terms, |g| cat.name(g).to_string())
    }
}

/// Canonical text for `sum c_i g_i`: `-1/2*e1 + v`, `0` when empty.
pub fn fmt_combination(terms: &[(Gen, FieldValue)], name: impl Fn(Gen) -> String) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, (g, c)) in terms.iter().enumerate() {
        let neg = c.is_negative_literal();
        let abs = if neg { -c } else { c.clone() };
        if i == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if !abs.is_one() {
            let _ = write!(s, "{abs}*");
        }
        s.push_str(&name(*g));
    }
    s
}

/// Parses a combination such as `-1/2*e1 + v - 3*u`.
pub fn parse_combination(
    text: &str,
    spec: FieldSpec,
    lookup: impl Fn(&str) -> Result<Gen, AlgebraError>,
) -> Result<Element, AlgebraError> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if t == "0" {
        return Ok(Element::zero());
    }
    let mut e = Element::zero();
    let mut rest = t.as_str();
    if rest.is_empty() {
        return Err(AlgebraError::Parse {
            line: 0,
            msg: "empty combination".into(),
        });
    }
    while !rest.is_empty() {
        let (neg, body) = match rest.as_bytes()[0] {
            b'-' => (true, &rest[1..]),
            b'+' => (false, &rest[1..]),
            _ => (false, rest),
        };
        let end = body[1.min(body.len())..]
            .find(['+', '-'])
            .map(|i| i + 1)
            .unwrap_or(body.len());
        // A '-' directly after '/' or '*' is not a term boundary; literals never contain one.
        let term = &body[..end];
        rest = &body[end..];
        let (coef, name) = match term.rsplit_once('*') {
            Some((c, n)) => (parse_scalar(c, spec)?, n),
            None => (FieldValue::one(spec), term),
        };
        if name.is_empty() {
            return Err(AlgebraError::Parse {
                line: 0,
                msg: format!("missing generator in {text:?}"),
            });
        }
        let c = if neg { -coef } else { coef };
        e.add_term(lookup(name)?, &c);
    }
    Ok(e)
}

/// A sparse multilinear map of arity `arity` raising degree by `shift`:
/// a Hochschild cochain of length `arity` and internal degree `shift`.
/// Arity-0 cochains are keyed by the one-element tuple holding the identity
/// of their object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain {
    pub arity: usize,
    pub shift: i32,
    entries: BTreeMap<Tuple, Element>,
}

impl Cochain {
    pub fn zero(arity: usize, shift: i32) -> Self {
        Cochain {
            arity,
            shift,
            entries: BTreeMap::new(),
        }
    }

    /// Total Hochschild degree `r + s`.
    pub fn total_degree(&self) -> i64 {
        self.arity as i64 + self.shift as i64
    }

    /// Shifted degree `r + s - 1` governing Gerstenhaber signs.
    pub fn shifted_degree(&self) -> i64 {
        self.total_degree() - 1
    }

    pub fn get(&self, t: &[Gen]) -> Option<&Element> {
        self.entries.get(t)
    }

    pub fn set(&mut self, t: Tuple, e: Element) {
        if e.is_zero() {
            self.entries.remove(&t);
        } else {
            self.entries.insert(t, e);
        }
    }

    pub fn add_at(&mut self, t: &[Gen], e: &Element, c: &FieldValue) {
        if e.is_zero() || c.is_zero() {
            return;
        }
        let slot = self.entries.entry(t.to_vec()).or_default();
        slot.add_scaled(e, c);
        if slot.is_zero() {
            self.entries.remove(t);
        }
    }

    pub fn add_term_at(&mut self, t: &[Gen], g: Gen, c: &FieldValue) {
        if c.is_zero() {
            return;
        }
        let slot = self.entries.entry(t.to_vec()).or_default();
        slot.add_term(g, c);
        if slot.is_zero() {
            self.entries.remove(t);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Tuple, &Element)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn scaled(&self, c: &FieldValue) -> Cochain {
        let mut out = Cochain::zero(self.arity, self.shift);
        if c.is_zero() {
            return out;
        }
        for (t, e) in &self.entries {
            out.entries.insert(t.clone(), e.scaled(c));
        }
        out
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Cochain, c: &FieldValue) {
        assert_eq!(self.arity, other.arity, "arity mismatch");
        assert_eq!(self.shift, other.shift, "shift mismatch");
        for (t, e) in &other.entries {
            self.add_at(t, e, c);
        }
    }

    pub fn sub(&self, other: &Cochain) -> Cochain {
        let mut out = self.clone();
        if let Some(spec) = self.spec().or(other.spec()) {
            out.add_scaled(other, &FieldValue::from_i64(-1, spec));
        }
        out
    }

    /// Field of the coefficients, when the cochain is nonzero.
    pub fn spec(&self) -> Option<FieldSpec> {
        self.entries
            .values()
            .next()
            .and_then(|e| e.terms().first())
            .map(|(_, c)| c.spec())
    }

    /// True when no stored input tuple contains an identity generator.
    pub fn is_normalized(&self, cat: &QuiverCategory) -> bool {
        self.arity == 0 || self.entries.keys().all(|t| t.iter().all(|g| !cat.is_identity(*g)))
    }

    /// Value on the empty input at `obj` (arity 0 only).
    pub fn get0(&self, cat: &QuiverCategory, obj: usize) -> Option<&Element> {
        cat.identities[obj].and_then(|id| self.entries.get(&vec![id]))
    }

    /// Checks composability, endpoints and `deg(output) = sum deg(inputs) + shift`.
    pub fn validate(&self, cat: &QuiverCategory) -> Result<(), AlgebraError> {
        for (t, e) in &self.entries {
            let bad = |reason: String| AlgebraError::Inconsistent {
                tuple: cat.fmt_tuple(t),
                output: e.display(cat),
                reason,
            };
            let want_len = self.arity.max(1);
            if t.len() != want_len {
                return Err(bad(format!("expected {} inputs", self.arity)));
            }
            if !cat.composable(t) {
                return Err(AlgebraError::NotComposable(cat.fmt_tuple(t)));
            }
            let (src, tgt, d) = if self.arity == 0 {
                (cat.source(t[0]), cat.source(t[0]), 0)
            } else {
                (cat.tuple_source(t), cat.tuple_target(t), cat.tuple_degree(t))
            };
            for (g, _) in e.terms() {
                if cat.source(*g) != src || cat.target(*g) != tgt {
                    return Err(bad(format!("{} has wrong endpoints", cat.name(*g))));
                }
                if cat.deg(*g) != d + self.shift {
                    return Err(bad(format!(
                        "{} has degree {}, expected {}",
                        cat.name(*g),
                        cat.deg(*g),
                        d + self.shift
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Evaluates a multilinear table on element arguments.
pub fn eval_multilinear<'a>(
    args: &[&Element],
    mut lookup: impl FnMut(&[Gen]) -> Option<&'a Element>,
) -> Element {
    let mut out = Element::zero();
    if args.iter().any(|a| a.is_zero()) {
        return out;
    }
    let spec = args
        .first()
        .map(|a| a.terms()[0].1.spec())
        .unwrap_or(FieldSpec::Rational);
    let mut idx = vec![0usize; args.len()];
    let mut tup: Tuple = args.iter().map(|a| a.terms()[0].0).collect();
    loop {
        if let Some(v) = lookup(&tup) {
            let mut c = FieldValue::one(spec);
            for (k, a) in args.iter().enumerate() {
                c = &c * &a.terms()[idx[k]].1;
            }
            out.add_scaled(v, &c);
        }
        let mut k = args.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < args[k].terms().len() {
                tup[k] = args[k].terms()[idx[k]].0;
                break;
            }
            idx[k] = 0;
            tup[k] = args[k].terms()[0].0;
        }
    }
}

/// A (possibly non-minimal) A-infinity structure, truncated at `order`.
#[derive(Debug, Clone, PartialEq)]
pub struct AInfStructure {
    pub spec: FieldSpec,
    pub category: Arc<QuiverCategory>,
    pub order: usize,
    /// `mu[d]` is the arity-`d` table; `mu[0]` is unused and empty.
    pub mu: Vec<Cochain>,
}

pub const DEFAULT_ORDER: usize = 12;

impl AInfStructure {
    pub fn new(spec: FieldSpec, category: Arc<QuiverCategory>, order: usize) -> Self {
        let mu = (0..=order)
            .map(|d| Cochain::zero(d, 2 - d as i32))
            .collect();
        AInfStructure {
            spec,
            category,
            order,
            mu,
        }
    }

    pub fn cat(&self) -> &QuiverCategory {
        &self.category
    }

    pub fn table(&self, d: usize) -> Option<&Cochain> {
        self.mu.get(d).filter(|_| d >= 1)
    }

    /// Sets `mu^d(tuple) = value`, checking composability and degrees.
    pub fn set(&mut self, d: usize, tuple: &[&str], value: &[(i64, i64, &str)]) -> Result<(), AlgebraError> {
        if d > self.order {
            return Err(AlgebraError::BeyondOrder(d, self.order));
        }
        let cat = self.category.clone();
        let t: Tuple = tuple.iter().map(|n| cat.gen(n)).collect::<Result<_, _>>()?;
        let mut e = Element::zero();
        for (n, den, g) in value {
            e.add_term(cat.gen(g)?, &FieldValue::from_ratio(*n, *den, self.spec)?);
        }
        let mut c = Cochain::zero(d, 2 - d as i32);
        c.set(t.clone(), e.clone());
        c.validate(&cat)?;
        self.mu[d].set(t, e);
        Ok(())
    }

    /// `mu^d` on a generator tuple. Absent entries are zero.
    pub fn evaluate(&self, d: usize, tuple: &[Gen]) -> Result<Element, AlgebraError> {
        if d > self.order {
            return Err(AlgebraError::BeyondOrder(d, self.order));
        }
        if tuple.len() != d || !self.cat().composable(tuple) {
            return Err(AlgebraError::NotComposable(self.cat().fmt_tuple(tuple)));
        }
        Ok(self.mu[d].get(tuple).cloned().unwrap_or_default())
    }

    pub fn evaluate_named(&self, d: usize, tuple: &[&str]) -> Result<Element, AlgebraError> {
        let t: Tuple = tuple
            .iter()
            .map(|n| self.cat().gen(n))
            .collect::<Result<_, _>>()?;
        self.evaluate(d, &t)
    }

    /// `mu^d` on element arguments.
    pub fn eval_elements(&self, args: &[&Element]) -> Element {
        let d = args.len();
        if d > self.order || d == 0 {
            return Element::zero();
        }
        let table = &self.mu[d];
        if table.is_empty() {
            return Element::zero();
        }
        eval_multilinear(args, |t| table.get(t))
    }

    pub fn is_minimal(&self) -> bool {
        self.mu.get(1).is_none_or(|m| m.is_zero())
    }

    /// Checks every table for composability and degree consistency.
    pub fn validate(&self) -> Result<(), AlgebraError> {
        for d in 1..=self.order {
            if self.mu[d].arity != d || self.mu[d].shift != 2 - d as i32 {
                return Err(AlgebraError::Inconsistent {
                    tuple: format!("MU{d}"),
                    output: String::new(),
                    reason: "wrong arity or shift".into(),
                });
            }
            self.mu[d].validate(self.cat())?;
        }
        Ok(())
    }

    /// Copy with `mu^d` replaced by `t^{d-2} mu^d`.
    pub fn rescaled(&self, t: &FieldValue) -> AInfStructure {
        let mut out = self.clone();
        for d in 1..=self.order {
            let f = if d >= 2 {
                t.pow((d - 2) as u32)
            } else {
                t.inv().expect("nonzero scale")
            };
            out.mu[d] = self.mu[d].scaled(&f);
        }
        out
    }

    /// Copy truncated (or zero-extended) to a new order.
    pub fn with_order(&self, order: usize) -> AInfStructure {
        let mut out = AInfStructure::new(self.spec, self.category.clone(), order);
        for d in 1..=order.min(self.order) {
            out.mu[d] = self.mu[d].clone();
        }
        out
    }
}

/// A violated relation: arity, input tuple and the nonzero residual.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub arity: usize,
    pub tuple: Tuple,
    pub residual: Element,
}

/// Value of the A-infinity relation on one tuple.
pub fn relation_residual(mu: &AInfStructure, t: &[Gen]) -> Element {
    let cat = mu.cat();
    let n = t.len();
    let mut total = Element::zero();
    let mut outer: Tuple = Vec::with_capacity(n);
    for j in 1..=n.min(mu.order) {
        if mu.mu[j].is_empty() || n - j + 1 > mu.order || mu.mu[n - j + 1].is_empty() {
            continue;
        }
        for i in 0..=(n - j) {
            let inner = &t[n - i - j..n - i];
            let Some(iv) = mu.mu[j].get(inner) else { continue };
            let sign = FieldValue::sign(cat.dagger(t, i), mu.spec);
            for (g, c) in iv.terms() {
                outer.clear();
                outer.extend_from_slice(&t[..n - i - j]);
                outer.push(*g);
                outer.extend_from_slice(&t[n - i..]);
                if let Some(ov) = mu.mu[n - j + 1].get(&outer) {
                    total.add_scaled(ov, &(&sign * c));
                }
            }
        }
    }
    total
}

/// Checks the A-infinity relations on every composable tuple of length
/// `<= up_to`, including tuples containing identities.
pub fn ainf_check(mu: &AInfStructure, up_to: usize) -> Vec<Violation> {
    let gens = mu.cat().all_gens();
    check_on(mu, up_to, &gens)
}

fn check_on(mu: &AInfStructure, up_to: usize, gens: &[Gen]) -> Vec<Violation> {
    use rayon::prelude::*;
    let mut out = Vec::new();
    for n in 1..=up_to {
        let tuples = mu.cat().tuples(gens, n);
        let mut bad: Vec<Violation> = tuples
            .par_iter()
            .filter_map(|t| {
                let r = relation_residual(mu, t);
                (!r.is_zero()).then(|| Violation {
                    arity: n,
                    tuple: t.clone(),
                    residual: r,
                })
            })
            .collect();
        bad.sort_by(|a, b| a.tuple.cmp(&b.tuple));
        out.extend(bad);
    }
    out
}

/// Relation check for strictly unital structures: verifies the unit axioms
/// (`mu^2(x, 1) = x`, `mu^2(1, x) = (-1)^{|x|} x`, `mu^1(1) = 0`, no stored
/// higher entry with an identity input) and the relations on tuples of
/// non-identity generators. For strictly unital structures the relations on
/// tuples containing an identity follow from these.
pub fn ainf_check_unital(mu: &AInfStructure, up_to: usize) -> Vec<Violation> {
    let cat = mu.cat();
    let mut out = Vec::new();
    let spec = mu.spec;
    for obj in 0..cat.objects.len() {
        let Some(id) = cat.identities[obj] else {
            out.push(Violation {
                arity: 0,
                tuple: vec![],
                residual: Element::zero(),
            });
            continue;
        };
        if mu.mu.get(1).and_then(|m| m.get(&[id])).is_some() {
            out.push(Violation {
                arity: 1,
                tuple: vec![id],
                residual: mu.mu[1].get(&[id]).cloned().unwrap_or_default(),
            });
        }
        for x in cat.all_gens() {
            let mut checks = Vec::new();
            if cat.source(x) == obj {
                checks.push((vec![x, id], Element::basis(x, spec)));
            }
            if cat.target(x) == obj {
                let s = FieldValue::sign(cat.deg(x) as i64, spec);
                checks.push((vec![id, x], Element::term(x, s)));
            }
            for (t, want) in checks {
                let got = mu.mu[2].get(&t).cloned().unwrap_or_default();
                if got != want {
                    let mut r = got;
                    r.add_scaled(&want, &FieldValue::from_i64(-1, spec));
                    out.push(Violation {
                        arity: 2,
                        tuple: t,
                        residual: r,
                    });
                }
            }
        }
    }
    for d in 3..=mu.order {
        for (t, e) in mu.mu[d].iter() {
            if t.iter().any(|g| cat.is_identity(*g)) {
                out.push(Violation {
                    arity: d,
                    tuple: t.clone(),
                    residual: e.clone(),
                });
            }
        }
    }
    out.extend(check_on(mu, up_to, &cat.non_identity()));
    out
}

// ---------------------------------------------------------------------------
// Presets

/// The category of A: objects a, b; generators e0, e1, f0, f1, u, v.
pub fn category_a() -> Arc<QuiverCategory> {
    Arc::new(
        QuiverCategory::new(
            &["a", "b"],
            &[
                ("e0", "a", "a", 0),
                ("e1", "a", "a", 1),
                ("f0", "b", "b", 0),
                ("f1", "b", "b", 1),
                ("u", "a", "b", 1),
                ("v", "b", "a", 0),
            ],
            &["e0", "f0"],
        )
        .expect("static category"),
    )
}

/// Sets the strict unit entries `mu^2(x, 1) = x`, `mu^2(1, x) = (-1)^{|x|} x`.
fn add_units(mu: &mut AInfStructure) {
    let cat = mu.category.clone();
    for x in cat.all_gens() {
        if let Some(id) = cat.identities[cat.source(x)] {
            mu.mu[2].set(vec![x, id], Element::basis(x, mu.spec));
        }
        if let Some(id) = cat.identities[cat.target(x)] {
            if cat.is_identity(x) {
                continue;
            }
            let s = FieldValue::sign(cat.deg(x) as i64, mu.spec);
            mu.mu[2].set(vec![id, x], Element::term(x, s));
        }
    }
}

/// The associative algebra A with `mu^2(v, u) = -e1`, `mu^2(u, v) = f1`,
/// so that `xy = (-1)^{|y|} mu^2(x, y)` gives `vu = e1`, `uv = f1`.
pub fn preset_a(spec: FieldSpec) -> AInfStructure {
    preset_a_with_order(spec, DEFAULT_ORDER)
}

pub fn preset_a_with_order(spec: FieldSpec, order: usize) -> AInfStructure {
    let mut mu = AInfStructure::new(spec, category_a(), order.max(2));
    add_units(&mut mu);
    mu.set(2, &["v", "u"], &[(-1, 1, "e1")]).expect("static");
    mu.set(2, &["u", "v"], &[(1, 1, "f1")]).expect("static");
    mu
}

/// The dg category C (8 generators), as in the table of its differential and products.
pub fn preset_c(spec: FieldSpec) -> AInfStructure {
    let cat = Arc::new(
        QuiverCategory::new(
            &["a", "b"],
            &[
                ("e0", "a", "a", 0),
                ("e1", "a", "a", 1),
                ("f0", "b", "b", 0),
                ("f1", "b", "b", 1),
                ("v0", "b", "a", 0),
                ("v1", "b", "a", 0),
                ("v01", "b", "a", 1),
                ("u01", "a", "b", 1),
            ],
            &["e0", "f0"],
        )
        .expect("static category"),
    );
    let mut mu = AInfStructure::new(spec, cat, 2);
    let rows: &[(&[&str], &[(i64, i64, &str)])] = &[
        (&["v0"], &[(-1, 1, "v01")]),
        (&["v1"], &[(1, 1, "v01")]),
        (&["e0", "e0"], &[(1, 1, "e0")]),
        (&["e0", "e1"], &[(-1, 1, "e1")]),
        (&["e1", "e0"], &[(1, 1, "e1")]),
        (&["f0", "f0"], &[(1, 1, "f0")]),
        (&["f0", "f1"], &[(-1, 1, "f1")]),
        (&["f1", "f0"], &[(1, 1, "f1")]),
        (&["v0", "f0"], &[(1, 1, "v0")]),
        (&["v1", "f0"], &[(1, 1, "v1")]),
        (&["v01", "f0"], &[(1, 1, "v01")]),
        (&["v0", "f1"], &[(-1, 1, "v01")]),
        (&["e0", "v0"], &[(1, 1, "v0")]),
        (&["e0", "v1"], &[(1, 1, "v1")]),
        (&["e1", "v1"], &[(1, 1, "v01")]),
        (&["e0", "v01"], &[(-1, 1, "v01")]),
        (&["f0", "u01"], &[(-1, 1, "u01")]),
        (&["u01", "e0"], &[(1, 1, "u01")]),
        (&["v0", "u01"], &[(-1, 1, "e1")]),
        (&["u01", "v1"], &[(1, 1, "f1")]),
    ];
    for (t, v) in rows {
        mu.set(t.len(), t, v).expect("static table");
    }
    mu
}

/// The dg category D (16 generators). In the mixed products the roles of the
/// x's and y's are those forced by composability (x's act on object a).
pub fn preset_d(spec: FieldSpec) -> AInfStructure {
    let mut gens: Vec<(&str, &str, &str, i32)> = Vec::new();
    for (p, o) in [("x", "a"), ("y", "b")] {
        for (suffix, d) in [("0", 0), ("1", 0), ("2", 0), ("01", 1), ("12", 1), ("02", 1)] {
            let name: &'static str = Box::leak(format!("{p}{suffix}").into_boxed_str());
            gens.push((name, o, o, d));
        }
    }
    gens.extend([
        ("v0", "b", "a", 0),
        ("v1", "b", "a", 0),
        ("v01", "b", "a", 1),
        ("u01", "a", "b", 1),
    ]);
    let cat = Arc::new(QuiverCategory::new(&["a", "b"], &gens, &[]).expect("static category"));
    let mut mu = AInfStructure::new(spec, cat, 2);
    let mut rows: Vec<(Vec<String>, Vec<(i64, i64, String)>)> = Vec::new();
    let r = |t: &[&str], v: &[(i64, &str)]| {
        (
            t.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            v.iter().map(|(c, g)| (*c, 1, g.to_string())).collect::<Vec<_>>(),
        )
    };
    for p in ["x", "y"] {
        let n = |s: &str| format!("{p}{s}");
        let (x0, x1, x2, x01, x12, x02) = (n("0"), n("1"), n("2"), n("01"), n("12"), n("02"));
        rows.push(r(&[&x0], &[(-1, &x01), (-1, &x02)]));
        rows.push(r(&[&x1], &[(1, &x01), (-1, &x12)]));
        rows.push(r(&[&x2], &[(1, &x12), (1, &x02)]));
        rows.push(r(&[&x0, &x0], &[(1, &x0)]));
        rows.push(r(&[&x1, &x1], &[(1, &x1)]));
        rows.push(r(&[&x2, &x2], &[(1, &x2)]));
        rows.push(r(&[&x0, &x01], &[(-1, &x01)]));
        rows.push(r(&[&x01, &x1], &[(1, &x01)]));
        rows.push(r(&[&x1, &x12], &[(-1, &x12)]));
        rows.push(r(&[&x12, &x2], &[(1, &x12)]));
        rows.push(r(&[&x0, &x02], &[(-1, &x02)]));
        rows.push(r(&[&x02, &x2], &[(1, &x02)]));
    }
    rows.push(r(&["v0"], &[(-1, "v01")]));
    rows.push(r(&["v1"], &[(1, "v01")]));
    rows.push(r(&["v0", "y0"], &[(1, "v0")]));
    rows.push(r(&["v1", "y1"], &[(1, "v1")]));
    rows.push(r(&["v01", "y1"], &[(1, "v01")]));
    rows.push(r(&["v0", "y01"], &[(-1, "v01")]));
    rows.push(r(&["x0", "v0"], &[(1, "v0")]));
    rows.push(r(&["x1", "v1"], &[(1, "v1")]));
    rows.push(r(&["x01", "v1"], &[(1, "v01")]));
    rows.push(r(&["x0", "v01"], &[(-1, "v01")]));
    rows.push(r(&["y0", "u01"], &[(-1, "u01")]));
    rows.push(r(&["u01", "x1"], &[(1, "u01")]));
    rows.push(r(&["v0", "u01"], &[(-1, "x01")]));
    rows.push(r(&["u01", "v1"], &[(1, "y01")]));
    for (t, v) in &rows {
        let t: Vec<&str> = t.iter().map(|s| s.as_str()).collect();
        let v: Vec<(i64, i64, &str)> = v.iter().map(|(a, b, g)| (*a, *b, g.as_str())).collect();
        mu.set(t.len(), &t, &v).expect("static table");
    }
    mu
}

/// The inclusion C -> D on generators (`e0 = x0 + x1 + x2`, `e1 = x01`, ...).
pub fn inclusion_c_to_d(spec: FieldSpec) -> Vec<Element> {
    let d = preset_d(spec);
    let c = preset_c(spec);
    let dc = d.cat();
    let g = |n: &str| dc.gen(n).expect("static");
    let one = FieldValue::one(spec);
    c.cat()
        .generators
        .iter()
        .map(|gen| match gen.name.as_str() {
            "e0" => Element::from_terms(["x0", "x1", "x2"].map(|n| (g(n), one.clone()))),
            "f0" => Element::from_terms(["y0", "y1", "y2"].map(|n| (g(n), one.clone()))),
            "e1" => Element::basis(g("x01"), spec),
            "f1" => Element::basis(g("y01"), spec),
            other => Element::basis(g(other), spec),
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Text format

fn write_header(out: &mut String, spec: FieldSpec, order: usize, cat: &QuiverCategory) {
    let _ = writeln!(out, "FIELD {spec}");
    let _ = writeln!(out, "ORDER {order}");
    let _ = writeln!(out, "OBJECTS");
    let _ = writeln!(out, "{}", cat.objects.join(" "));
    let _ = writeln!(out, "GENERATORS");
    for g in &cat.generators {
        let _ = writeln!(
            out,
            "{} {} {} {}",
            g.name, cat.objects[g.source], cat.objects[g.target], g.degree
        );
    }
    let _ = writeln!(out, "IDENTITIES");
    let ids: Vec<&str> = cat.identities.iter().flatten().map(|g| cat.name(*g)).collect();
    let _ = writeln!(out, "{}", ids.join(" "));
}

/// Writes a table section `label` with entries `a_d .. a_1 -> combination`.
pub fn write_section(out: &mut String, label: &str, c: &Cochain, cat: &QuiverCategory) {
    if c.is_empty() {
        return;
    }
    let _ = writeln!(out, "{label}");
    for (t, e) in c.iter() {
        let _ = writeln!(out, "{} -> {}", cat.fmt_tuple(t), e.display(cat));
    }
}

/// Canonical, byte-stable text for a structure.
pub fn dump(mu: &AInfStructure) -> String {
    let mut out = String::new();
    write_header(&mut out, mu.spec, mu.order, mu.cat());
    for d in 1..=mu.order {
        write_section(&mut out, &format!("MU{d}"), &mu.mu[d], mu.cat());
    }
    out
}

/// Parsed document: header plus labelled table sections.
#[derive(Debug, Clone)]
pub struct Document {
    pub spec: FieldSpec,
    pub order: usize,
    pub category: Arc<QuiverCategory>,
    /// `(prefix, arity) -> table`, e.g. `("MU", 3)` or `("G", 2)`.
    pub sections: BTreeMap<(String, usize), Cochain>,
}

/// Parses the text format. `shift_of(prefix, d)` gives the degree shift of
/// each section kind (`MU`: `2 - d`, `G`: `1 - d`).
pub fn parse_document(text: &str) -> Result<Document, AlgebraError> {
    let perr = |line: usize, msg: String| AlgebraError::Parse { line, msg };
    let mut spec = FieldSpec::Rational;
    let mut order = DEFAULT_ORDER;
    let mut objects: Vec<String> = Vec::new();
    let mut gens: Vec<(String, String, String, i32)> = Vec::new();
    let mut ids: Vec<String> = Vec::new();
    let mut section = String::new();
    let mut cat: Option<Arc<QuiverCategory>> = None;
    let mut sections: BTreeMap<(String, usize), Cochain> = BTreeMap::new();
    for (ln0, raw) in text.lines().enumerate() {
        let ln = ln0 + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("FIELD ") {
            spec = rest.parse().map_err(|e: ScalarError| perr(ln, e.to_string()))?;
            continue;
        }
        if let Some(rest) = line.strip_prefix("ORDER ") {
            order = rest.trim().parse().map_err(|_| perr(ln, "bad ORDER".into()))?;
            continue;
        }
        let is_header = !line.contains(' ')
            && line.chars().all(|c| c.is_ascii_uppercase() || c.is_ascii_digit())
            && line.chars().next().is_some_and(|c| c.is_ascii_uppercase());
        if is_header {
            section = line.to_string();
            continue;
        }
        match section.as_str() {
            "OBJECTS" => objects.extend(line.split_whitespace().map(String::from)),
            "GENERATORS" => {
                let p: Vec<&str> = line.split_whitespace().collect();
                if p.len() != 4 {
                    return Err(perr(ln, "expected: name source target degree".into()));
                }
                let d: i32 = p[3].parse().map_err(|_| perr(ln, "bad degree".into()))?;
                gens.push((p[0].into(), p[1].into(), p[2].into(), d));
            }
            "IDENTITIES" => ids.extend(line.split_whitespace().map(String::from)),
            s => {
                let split = s
                    .find(|c: char| c.is_ascii_digit())
                    .ok_or_else(|| perr(ln, format!("unknown section {s}")))?;
                let (prefix, num) = s.split_at(split);
                let d: usize = num.parse().map_err(|_| perr(ln, "bad arity".into()))?;
                let shift = match prefix {
                    "MU" => 2 - d as i32,
                    "G" => 1 - d as i32,
                    _ => return Err(perr(ln, format!("unknown section {s}"))),
                };
                if cat.is_none() {
                    let g: Vec<(&str, &str, &str, i32)> = gens
                        .iter()
                        .map(|(a, b, c, d)| (a.as_str(), b.as_str(), c.as_str(), *d))
                        .collect();
                    let o: Vec<&str> = objects.iter().map(|s| s.as_str()).collect();
                    let i: Vec<&str> = ids.iter().map(|s| s.as_str()).collect();
                    cat = Some(Arc::new(
                        QuiverCategory::new(&o, &g, &i).map_err(|e| perr(ln, e.to_string()))?,
                    ));
                }
                let c = cat.as_ref().expect("set above");
                let (lhs, rhs) = line
                    .split_once("->")
                    .ok_or_else(|| perr(ln, "expected 'inputs -> combination'".into()))?;
                let t: Tuple = lhs
                    .split_whitespace()
                    .map(|n| c.gen(n))
                    .collect::<Result<_, _>>()
                    .map_err(|e| perr(ln, e.to_string()))?;
                if t.len() != d {
                    return Err(perr(ln, format!("expected {d} inputs")));
                }
                let e = parse_combination(rhs, spec, |n| c.gen(n))
                    .map_err(|e| perr(ln, e.to_string()))?;
                let mut single = Cochain::zero(d, shift);
                single.set(t.clone(), e.clone());
                single.validate(c).map_err(|e| perr(ln, e.to_string()))?;
                sections
                    .entry((prefix.to_string(), d))
                    .or_insert_with(|| Cochain::zero(d, shift))
                    .add_at(&t, &e, &FieldValue::one(spec));
            }
        }
    }
    let category = match cat {
        Some(c) => c,
        None => {
            let g: Vec<(&str, &str, &str, i32)> = gens
                .iter()
                .map(|(a, b, c, d)| (a.as_str(), b.as_str(), c.as_str(), *d))
                .collect();
            let o: Vec<&str> = objects.iter().map(|s| s.as_str()).collect();
            let i: Vec<&str> = ids.iter().map(|s| s.as_str()).collect();
            Arc::new(QuiverCategory::new(&o, &g, &i)?)
        }
    };
    Ok(Document {
        spec,
        order,
        category,
        sections,
    })
}

/// Parses a structure; only `MU{d}` sections are allowed.
pub fn load(text: &str) -> Result<AInfStructure, AlgebraError> {
    let doc = parse_document(text)?;
    let mut mu = AInfStructure::new(doc.spec, doc.category, doc.order);
    for ((prefix, d), c) in doc.sections {
        if prefix != "MU" {
            return Err(AlgebraError::Parse {
                line: 0,
                msg: format!("unexpected section {prefix}{d} in a structure file"),
            });
        }
        if d > mu.order {
            return Err(AlgebraError::BeyondOrder(d, mu.order));
        }
        mu.mu[d] = c;
    }
    Ok(mu)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_a_products() {
        let a = preset_a(FieldSpec::Rational);
        assert_eq!(a.evaluate_named(2, &["v", "u"]).unwrap().display(a.cat()), "-e1");
        assert_eq!(a.evaluate_named(2, &["u", "v"]).unwrap().display(a.cat()), "f1");
        assert_eq!(a.evaluate_named(2, &["e0", "e1"]).unwrap().display(a.cat()), "-e1");
        assert!(a.evaluate_named(2, &["u", "u"]).is_err());
        let t = a.cat().tuples(&a.cat().all_gens(), 5)[0].clone();
        assert!(a.evaluate(5, &t).unwrap().is_zero());
    }

    #[test]
    fn presets_satisfy_relations() {
        for spec in [FieldSpec::Rational, FieldSpec::Prime(2), FieldSpec::Prime(3)] {
            assert!(ainf_check(&preset_a_with_order(spec, 6), 6).is_empty());
            assert!(ainf_check(&preset_c(spec), 6).is_empty());
            assert!(ainf_check(&preset_d(spec), 3).is_empty());
        }
    }

    #[test]
    fn corrupted_c_fails() {
        let mut c = preset_c(FieldSpec::Rational);
        c.set(2, &["v0", "u01"], &[(1, 1, "e1")]).unwrap();
        assert!(!ainf_check(&c, 3).is_empty());
    }

    #[test]
    fn c_table_values() {
        let c = preset_c(FieldSpec::Rational);
        let s = |d, t: &[&str]| c.evaluate_named(d, t).unwrap().display(c.cat());
        assert_eq!(s(1, &["v0"]), "-v01");
        assert_eq!(s(1, &["v1"]), "v01");
        assert_eq!(s(2, &["v0", "u01"]), "-e1");
        let d = preset_d(FieldSpec::Rational);
        assert_eq!(d.evaluate_named(1, &["x0"]).unwrap().display(d.cat()), "-x01 - x02");
    }

    #[test]
    fn inclusion_is_a_dg_functor() {
        let spec = FieldSpec::Rational;
        let (c, d) = (preset_c(spec), preset_d(spec));
        let inc = inclusion_c_to_d(spec);
        let image = |e: &Element| {
            let mut out = Element::zero();
            for (g, k) in e.terms() {
                out.add_scaled(&inc[*g], k);
            }
            out
        };
        for x in c.cat().all_gens() {
            assert_eq!(image(&c.eval_elements(&[&Element::basis(x, spec)])), d.eval_elements(&[&inc[x]]));
        }
        for t in c.cat().tuples(&c.cat().all_gens(), 2) {
            let lhs = image(&c.evaluate(2, &t).unwrap());
            let rhs = d.eval_elements(&[&inc[t[0]], &inc[t[1]]]);
            assert_eq!(lhs, rhs, "{}", c.cat().fmt_tuple(&t));
        }
    }

    #[test]
    fn combination_round_trip() {
        let a = preset_a(FieldSpec::Rational);
        let cat = a.cat();
        for s in ["-1/2*e1", "v", "-e1 + 3*f1", "0", "5/12*u"] {
            let e = parse_combination(s, FieldSpec::Rational, |n| cat.gen(n)).unwrap();
            assert_eq!(e.display(cat), s);
        }
    }

    #[test]
    fn dump_load_round_trip() {
        for mu in [preset_a(FieldSpec::Rational), preset_c(FieldSpec::Rational), preset_d(FieldSpec::Prime(5))] {
            let s = dump(&mu);
            let back = load(&s).unwrap();
            assert_eq!(dump(&back), s);
            assert_eq!(back, mu);
        }
    }

    #[test]
    fn load_rejects_bad_degree() {
        let s = dump(&preset_a(FieldSpec::Rational)).replace("u v -> f1", "u v -> e1");
        let err = load(&s).unwrap_err();
        assert!(matches!(err, AlgebraError::Parse { .. }), "{err}");
        let s = dump(&preset_a(FieldSpec::Rational)) + "MU3\nu e1 v -> f0\n";
        let err = load(&s).unwrap_err();
        assert!(err.to_string().contains("line"), "{err}");
    }
}
