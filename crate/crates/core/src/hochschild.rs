//! Normalized Hochschild cochains of a unital graded category, the
//! Gerstenhaber composition and bracket, the coboundary, cohomology through the
//! normalized bar complex, and the small periodic resolution of A.
//!
//! A cochain of length `r` and internal degree `s` is a [`Cochain`] with
//! `arity = r`, `shift = s`, stored on tuples of non-identity generators.
//! Its shifted degree is `|phi|' = r + s - 1`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};

use rayon::prelude::*;
use thiserror::Error;

use crate::linalg::{dot, kernel, Echelon, SparseVec};
use crate::quiver_ainf::{
    preset_a_with_order, AInfStructure, Cochain, Element, Gen, QuiverCategory, Tuple,
};
use crate::scalars::{FieldSpec, FieldValue};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HochschildError {
    #[error("cochain is not a cocycle ({0} nonzero entries in its coboundary)")]
    NotCocycle(usize),
    #[error("cochain is not normalized")]
    NotNormalized,
}

/// Drops entries whose input tuple contains an identity (arity >= 1).
pub fn normalize(c: &Cochain, cat: &QuiverCategory) -> Cochain {
    if c.arity == 0 {
        return c.clone();
    }
    let mut out = Cochain::zero(c.arity, c.shift);
    for (t, e) in c.iter() {
        if t.iter().all(|g| !cat.is_identity(*g)) {
            out.set(t.clone(), e.clone());
        }
    }
    out
}

/// Gerstenhaber composition
/// `(phi o psi)(a) = sum_k (-1)^{|psi|' †_k} phi(.., psi(a_{k+q}..a_{k+1}), a_k..a_1)`.
pub fn compose(cat: &QuiverCategory, spec: FieldSpec, phi: &Cochain, psi: &Cochain) -> Cochain {
    let shift = phi.shift + psi.shift;
    let arity = (phi.arity + psi.arity).saturating_sub(1);
    let mut out = Cochain::zero(arity, shift);
    if phi.arity == 0 {
        return out;
    }
    let psi_deg = psi.shifted_degree();
    let mut by_output: HashMap<Gen, Vec<(&[Gen], &FieldValue)>> = HashMap::new();
    for (t, e) in psi.iter() {
        let inputs: &[Gen] = if psi.arity == 0 { &[] } else { t };
        for (g, c) in e.terms() {
            by_output.entry(*g).or_default().push((inputs, c));
        }
    }
    let mut big: Tuple = Vec::with_capacity(arity.max(1));
    for (t, val) in phi.iter() {
        for pos in 0..t.len() {
            let Some(hits) = by_output.get(&t[pos]) else { continue };
            let dag = cat.dagger(&t[pos + 1..], t.len() - pos - 1);
            let sign = FieldValue::sign(psi_deg * dag, spec);
            for (inputs, c) in hits {
                big.clear();
                big.extend_from_slice(&t[..pos]);
                big.extend_from_slice(inputs);
                big.extend_from_slice(&t[pos + 1..]);
                if big.is_empty() {
                    match cat.identities[cat.source(t[pos])] {
                        Some(id) => big.push(id),
                        None => continue,
                    }
                }
                out.add_at(&big, val, &(&sign * *c));
            }
        }
    }
    out
}

/// `G(phi, psi) = phi o psi - (-1)^{|phi|'|psi|'} psi o phi`.
pub fn gerstenhaber(cat: &QuiverCategory, spec: FieldSpec, phi: &Cochain, psi: &Cochain) -> Cochain {
    let a = compose(cat, spec, phi, psi);
    let b = compose(cat, spec, psi, phi);
    let mut out = a;
    out.add_scaled(&b, &-FieldValue::sign(phi.shifted_degree() * psi.shifted_degree(), spec));
    out
}

/// Hochschild coboundary `delta phi = -G(phi, mu^2)`, i.e.
/// `(-1)^{|phi|'} mu^2 o phi - phi o mu^2`, restricted to normalized tuples.
pub fn coboundary(alg: &AInfStructure, phi: &Cochain) -> Cochain {
    let cat = alg.cat();
    let g = gerstenhaber(cat, alg.spec, phi, &alg.mu[2]);
    let mut out = normalize(&g, cat).scaled(&FieldValue::from_i64(-1, alg.spec));
    out.arity = phi.arity + 1;
    out.shift = phi.shift;
    out
}

/// The Euler derivation `e(x) = deg(x) x`, a length-1 cochain of internal degree 0.
pub fn euler_derivation(alg: &AInfStructure) -> Cochain {
    let cat = alg.cat();
    let mut e = Cochain::zero(1, 0);
    for g in cat.non_identity() {
        let d = FieldValue::from_i64(cat.deg(g) as i64, alg.spec);
        e.add_term_at(&[g], g, &d);
    }
    e
}

/// Ordered basis of normalized cochains of length `r` and internal degree `s`:
/// pairs (input tuple, output generator).
#[derive(Debug, Clone)]
pub struct CochainBasis {
    pub r: usize,
    pub s: i32,
    pub elements: Vec<(Tuple, Gen)>,
    index: HashMap<(Tuple, Gen), usize>,
}

impl CochainBasis {
    pub fn new(cat: &QuiverCategory, r: usize, s: i32) -> Self {
        let mut elements = Vec::new();
        for t in cat.normalized_keys(r) {
            let (src, tgt, d) = if r == 0 {
                (cat.source(t[0]), cat.source(t[0]), 0)
            } else {
                (cat.tuple_source(&t), cat.tuple_target(&t), cat.tuple_degree(&t))
            };
            for g in cat.hom(src, tgt) {
                if cat.deg(g) == d + s {
                    elements.push((t.clone(), g));
                }
            }
        }
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, k)| (k.clone(), i))
            .collect();
        CochainBasis {
            r,
            s,
            elements,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn cochain(&self, i: usize, spec: FieldSpec) -> Cochain {
        let (t, g) = &self.elements[i];
        let mut c = Cochain::zero(self.r, self.s);
        c.set(t.clone(), Element::basis(*g, spec));
        c
    }

    /// Coordinates of a cochain; panics on entries outside the basis.
    pub fn to_vec(&self, c: &Cochain) -> SparseVec {
        let mut v = SparseVec::new();
        for (t, e) in c.iter() {
            for (g, x) in e.terms() {
                let i = self.index[&(t.clone(), *g)];
                v.insert(i, x.clone());
            }
        }
        v
    }

    pub fn from_vec(&self, v: &SparseVec) -> Cochain {
        let mut c = Cochain::zero(self.r, self.s);
        for (i, x) in v {
            let (t, g) = &self.elements[*i];
            c.add_term_at(t, *g, x);
        }
        c
    }
}

/// Images of the basis of `C^{r,s}` under the coboundary, in `C^{r+1,s}` coordinates.
pub fn coboundary_matrix(alg: &AInfStructure, from: &CochainBasis, to: &CochainBasis) -> Vec<SparseVec> {
    (0..from.len())
        .into_par_iter()
        .map(|i| to.to_vec(&coboundary(alg, &from.cochain(i, alg.spec))))
        .collect()
}

/// Dimensions of `HH^{r+s}(A,A)^s` keyed by `(r, s)`; absent entries are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigradedTable {
    pub spec: FieldSpec,
    pub r_max: usize,
    pub dims: BTreeMap<(usize, i32), usize>,
}

impl BigradedTable {
    pub fn get(&self, r: usize, s: i32) -> usize {
        self.dims.get(&(r, s)).copied().unwrap_or(0)
    }

    /// Line records `(r, s, dim)` for every nonzero cell.
    pub fn records(&self) -> String {
        let mut out = String::new();
        for ((r, s), d) in &self.dims {
            let _ = writeln!(out, "({r}, {s}, {d})");
        }
        out
    }

    /// Differences against another table as `(r, s, ours, theirs)`.
    pub fn diff(&self, other: &BigradedTable) -> Vec<(usize, i32, usize, usize)> {
        let mut keys: Vec<(usize, i32)> = self.dims.keys().chain(other.dims.keys()).copied().collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .filter(|(r, s)| self.get(*r, *s) != other.get(*r, *s))
            .map(|(r, s)| (r, s, self.get(r, s), other.get(r, s)))
            .collect()
    }
}

impl fmt::Display for BigradedTable {
    /// Rows indexed by `s` (descending), columns by `r`; cells `K` or `K^n`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s_min = self.dims.keys().map(|k| k.1).min().unwrap_or(0).min(0);
        let cell = |d: usize| match d {
            0 => String::new(),
            1 => "K".to_string(),
            n => format!("K^{n}"),
        };
        let w = self
            .dims
            .values()
            .map(|d| cell(*d).len())
            .max()
            .unwrap_or(1)
            .max(self.r_max.to_string().len())
            .max(3);
        writeln!(f, "HH^(r+s)(A,A)^s over {}", self.spec)?;
        write!(f, "{:>4} ||", "s\\r")?;
        for r in 0..=self.r_max {
            write!(f, " {r:>w$} |")?;
        }
        writeln!(f)?;
        for s in (s_min..=1).rev() {
            write!(f, "{s:>4} ||")?;
            for r in 0..=self.r_max {
                write!(f, " {:>w$} |", cell(self.get(r, s)))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Cohomology dimensions through the normalized bar complex of A, `r <= r_max`.
pub fn hh_bar(spec: FieldSpec, r_max: usize) -> BigradedTable {
    let alg = preset_a_with_order(spec, 2);
    hh_bar_of(&alg, r_max)
}

/// Same as [`hh_bar`] for any unital graded category with `mu^1 = 0`.
pub fn hh_bar_of(alg: &AInfStructure, r_max: usize) -> BigradedTable {
    let cat = alg.cat();
    let max_deg = cat.generators.iter().map(|g| g.degree).max().unwrap_or(0);
    let min_deg = cat.generators.iter().map(|g| g.degree).min().unwrap_or(0);
    let s_hi = max_deg - (r_max as i32) * min_deg.min(0);
    let s_lo = min_deg - (r_max as i32) * max_deg.max(0);
    let cells: Vec<Vec<((usize, i32), usize)>> = (s_lo..=s_hi)
        .into_par_iter()
        .map(|s| {
            let bases: Vec<CochainBasis> = (0..=r_max + 1).map(|r| CochainBasis::new(cat, r, s)).collect();
            let ranks: Vec<usize> = (0..=r_max)
                .map(|r| {
                    let mut e = Echelon::new(alg.spec, false);
                    for v in coboundary_matrix(alg, &bases[r], &bases[r + 1]) {
                        e.insert(v, None);
                    }
                    e.rank()
                })
                .collect();
            (0..=r_max)
                .filter_map(|r| {
                    let dim = bases[r].len() - ranks[r] - if r > 0 { ranks[r - 1] } else { 0 };
                    (dim > 0).then_some(((r, s), dim))
                })
                .collect()
        })
        .collect();
    BigradedTable {
        spec: alg.spec,
        r_max,
        dims: cells.into_iter().flatten().collect(),
    }
}

/// The table of A predicted for a field of the given characteristic:
/// the cells for `r <= 8` and their continuation by `(r, s) -> (r + 8, s - 6)`.
pub fn reference_table(spec: FieldSpec, r_max: usize) -> BigradedTable {
    let mut base: Vec<((usize, i32), usize)> = vec![
        ((0, 1), 2),
        ((0, 0), 1),
        ((1, 0), 1),
        ((6, -4), 1),
        ((7, -4), 1),
        ((8, -6), 1),
    ];
    match spec.characteristic() {
        2 => base.extend([((2, -1), 1), ((3, -1), 1), ((4, -3), 1), ((5, -3), 1)]),
        3 => base.extend([((3, -2), 1), ((4, -2), 1)]),
        _ => {}
    }
    let mut dims = BTreeMap::new();
    for ((r, s), d) in base {
        let mut k = 0;
        loop {
            let (rr, ss) = (r + 8 * k, s - 6 * k as i32);
            if rr > r_max || (r == 0 && k > 0) {
                break;
            }
            dims.insert((rr, ss), d);
            k += 1;
        }
    }
    BigradedTable { spec, r_max, dims }
}

// ---------------------------------------------------------------------------
// Coboundary solving

/// Outcome of [`is_coboundary`].
#[derive(Debug, Clone, PartialEq)]
pub enum CoboundaryResult {
    /// `delta(primitive) = phi`.
    Primitive(Cochain),
    /// A functional on `C^{r,s}` (as cochain coefficients) vanishing on every
    /// coboundary but not on `phi`.
    Certificate {
        functional: Cochain,
        pairing: FieldValue,
    },
}

/// Decides whether a cocycle is a coboundary, by exact elimination over the
/// normalized basis of `C^{r-1,s}` in canonical order.
pub fn is_coboundary(alg: &AInfStructure, phi: &Cochain) -> Result<CoboundaryResult, HochschildError> {
    let cat = alg.cat();
    if !phi.is_normalized(cat) {
        return Err(HochschildError::NotNormalized);
    }
    let d = coboundary(alg, phi);
    if !d.is_zero() {
        return Err(HochschildError::NotCocycle(d.len()));
    }
    let (r, s) = (phi.arity, phi.shift);
    if r == 0 {
        return Ok(if phi.is_zero() {
            CoboundaryResult::Primitive(Cochain::zero(0, s))
        } else {
            let target = CochainBasis::new(cat, 0, s);
            certificate(&Echelon::new(alg.spec, true), &target, phi, alg.spec)
        });
    }
    let source = CochainBasis::new(cat, r - 1, s);
    let target = CochainBasis::new(cat, r, s);
    let mut ech = Echelon::new(alg.spec, true);
    for (i, v) in coboundary_matrix(alg, &source, &target).into_iter().enumerate() {
        ech.insert(v, Some(i));
    }
    let b = target.to_vec(phi);
    Ok(match ech.solve(&b) {
        Some(x) => CoboundaryResult::Primitive(source.from_vec(&x)),
        None => certificate(&ech, &target, phi, alg.spec),
    })
}

fn certificate(ech: &Echelon, target: &CochainBasis, phi: &Cochain, spec: FieldSpec) -> CoboundaryResult {
    let b = target.to_vec(phi);
    let y = ech.separating_functional(&b).expect("phi outside the span");
    CoboundaryResult::Certificate {
        pairing: dot(&y, &b, spec),
        functional: target.from_vec(&y),
    }
}

/// A cocycle spanning a chosen complement of coboundaries in `C^{r,s}`: the
/// first kernel vector (in canonical order) not in the image of `delta`.
pub fn basis_cocycle(alg: &AInfStructure, r: usize, s: i32) -> Option<Cochain> {
    cohomology_basis(alg, r, s).into_iter().next()
}

/// Cocycles whose classes form a basis of `HH^{r+s}^s`, chosen greedily in kernel order.
pub fn cohomology_basis(alg: &AInfStructure, r: usize, s: i32) -> Vec<Cochain> {
    let cat = alg.cat();
    let here = CochainBasis::new(cat, r, s);
    let next = CochainBasis::new(cat, r + 1, s);
    let ker = kernel(alg.spec, &coboundary_matrix(alg, &here, &next));
    let mut img = Echelon::new(alg.spec, false);
    if r > 0 {
        let prev = CochainBasis::new(cat, r - 1, s);
        for v in coboundary_matrix(alg, &prev, &here) {
            img.insert(v, None);
        }
    }
    let mut out = Vec::new();
    for k in ker {
        if !img.contains(&k) {
            img.insert(k.clone(), None);
            out.push(here.from_vec(&k));
        }
    }
    out
}

/// Coordinate of a cocycle `phi` against a basis cocycle `z` of a one-dimensional
/// cohomology group: the unique `c` with `phi - c z` a coboundary.
pub fn coordinate(alg: &AInfStructure, phi: &Cochain, z: &Cochain) -> Option<FieldValue> {
    match is_coboundary(alg, z).ok()? {
        CoboundaryResult::Certificate { functional, pairing } => {
            let here = CochainBasis::new(alg.cat(), phi.arity, phi.shift);
            let y = here.to_vec(&functional);
            let c = dot(&y, &here.to_vec(phi), alg.spec).checked_div(&pairing).ok()?;
            let mut rest = phi.clone();
            rest.add_scaled(z, &-&c);
            matches!(is_coboundary(alg, &rest).ok()?, CoboundaryResult::Primitive(_)).then_some(c)
        }
        CoboundaryResult::Primitive(_) => None,
    }
}

// ---------------------------------------------------------------------------
// The periodic small resolution

/// Hom-spaces of A between identity objects, keyed as (source, target).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HomSpace {
    BB,
    AA,
    BA,
    AB,
}

/// Basis elements of A for the ladder: e0, e1, f0, f1, u, v.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ABasis {
    E0,
    E1,
    F0,
    F1,
    U,
    V,
}

impl ABasis {
    pub fn degree(self) -> i32 {
        match self {
            ABasis::E0 | ABasis::F0 | ABasis::V => 0,
            _ => 1,
        }
    }

    /// (source, target) with objects 0 = a, 1 = b.
    fn ends(self) -> (u8, u8) {
        match self {
            ABasis::E0 | ABasis::E1 => (0, 0),
            ABasis::F0 | ABasis::F1 => (1, 1),
            ABasis::U => (0, 1),
            ABasis::V => (1, 0),
        }
    }

    /// Associative product `x y` (apply `y` first); `None` when zero.
    pub fn mul(x: ABasis, y: ABasis) -> Option<ABasis> {
        use ABasis::*;
        if y.ends().1 != x.ends().0 {
            return None;
        }
        match (x, y) {
            (E0 | F0, y) => Some(y),
            (x, E0 | F0) => Some(x),
            (V, U) => Some(E1),
            (U, V) => Some(F1),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        ["e0", "e1", "f0", "f1", "u", "v"][self as usize]
    }
}

impl HomSpace {
    pub fn basis(self) -> &'static [ABasis] {
        use ABasis::*;
        match self {
            HomSpace::BB => &[F0, F1],
            HomSpace::AA => &[E0, E1],
            HomSpace::BA => &[V],
            HomSpace::AB => &[U],
        }
    }
}

/// One summand `x -> c * left * x * right` of a ladder entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mult {
    pub coeff: i64,
    pub left: Option<ABasis>,
    pub right: Option<ABasis>,
}

impl Mult {
    fn apply(&self, x: ABasis) -> Option<ABasis> {
        let y = match self.right {
            Some(b) => ABasis::mul(x, b)?,
            None => x,
        };
        match self.left {
            Some(a) => ABasis::mul(a, y),
            None => Some(y),
        }
    }
}

pub type Operator = Vec<Mult>;

fn l(a: ABasis) -> Operator {
    vec![Mult { coeff: 1, left: Some(a), right: None }]
}

fn r(b: ABasis) -> Operator {
    vec![Mult { coeff: 1, left: None, right: Some(b) }]
}

fn lr(a: ABasis, b: ABasis) -> Operator {
    vec![Mult { coeff: 1, left: Some(a), right: Some(b) }]
}

fn sc(c: i64, op: Operator) -> Operator {
    op.into_iter().map(|m| Mult { coeff: c * m.coeff, ..m }).collect()
}

fn plus(a: Operator, b: Operator) -> Operator {
    a.into_iter().chain(b).collect()
}

/// The two summands of `Hom(P_j, A)` as (hom space, generator degree).
pub fn ladder_components(j: usize) -> [(HomSpace, i32); 2] {
    let (k, m) = ((j / 4) as i32, j % 4);
    match m {
        0 => [(HomSpace::BB, 3 * k), (HomSpace::AA, 3 * k)],
        1 => [(HomSpace::BA, 3 * k), (HomSpace::AB, 3 * k + 1)],
        2 => [(HomSpace::BA, 3 * k + 1), (HomSpace::AB, 3 * k + 2)],
        _ => [(HomSpace::BB, 3 * k + 2), (HomSpace::AA, 3 * k + 2)],
    }
}

/// The 2x2 operator matrix of `p_{j+1}^*`; entry `[row][col]` maps component `col` of
/// index `j` to component `row` of index `j + 1`.
pub fn ladder_matrix(j: usize) -> [[Operator; 2]; 2] {
    use ABasis::*;
    let (k, m) = (j / 4, j % 4);
    let eta = if k % 2 == 0 { 1 } else { -1 };
    match m {
        0 => [[l(V), sc(-1, r(V))], [sc(-1, r(U)), sc(eta, l(U))]],
        1 => [
            [plus(sc(eta, l(E1)), r(F1)), lr(V, V)],
            [sc(eta, lr(U, U)), plus(sc(-eta, l(F1)), r(E1))],
        ],
        2 => [[sc(-eta, l(U)), sc(-1, r(V))], [sc(-1, r(U)), l(V)]],
        _ => [
            [plus(sc(eta, l(F1)), r(F1)), sc(eta, lr(U, V))],
            [lr(V, U), plus(sc(eta, l(E1)), r(E1))],
        ],
    }
}

/// The cochain complex `Hom(P_*, A)` at one internal degree `s`, assembled from the ladder.
#[derive(Debug, Clone)]
pub struct SkoldbergComplex {
    pub spec: FieldSpec,
    pub s: i32,
    /// `bases[j]` lists (component, basis element of A) at cohomological index `j`.
    pub bases: Vec<Vec<(usize, ABasis)>>,
    /// `maps[j]` gives the images of `bases[j]` in coordinates of `bases[j + 1]`.
    pub maps: Vec<Vec<SparseVec>>,
}

/// Builds the ladder complex through index `j_max + 1` at internal degree `s`.
pub fn skoldberg_build(spec: FieldSpec, j_max: usize, s: i32) -> SkoldbergComplex {
    let basis = |j: usize| -> Vec<(usize, ABasis)> {
        let mut out = Vec::new();
        for (ci, (hom, gd)) in ladder_components(j).iter().enumerate() {
            for x in hom.basis() {
                if x.degree() == gd + s {
                    out.push((ci, *x));
                }
            }
        }
        out
    };
    let bases: Vec<Vec<(usize, ABasis)>> = (0..=j_max + 1).map(basis).collect();
    let mut maps = Vec::new();
    for j in 0..=j_max {
        let m = ladder_matrix(j);
        let idx: HashMap<(usize, ABasis), usize> =
            bases[j + 1].iter().enumerate().map(|(i, b)| (*b, i)).collect();
        let mut cols = Vec::new();
        for (ci, x) in &bases[j] {
            let mut v = SparseVec::new();
            for (ri, row) in m.iter().enumerate() {
                for mult in &row[*ci] {
                    if let Some(y) = mult.apply(*x) {
                        let i = *idx
                            .get(&(ri, y))
                            .expect("ladder map preserves internal degree");
                        let c = FieldValue::from_i64(mult.coeff, spec);
                        let cur = v.remove(&i).unwrap_or_else(|| FieldValue::zero(spec));
                        let n = &cur + &c;
                        if !n.is_zero() {
                            v.insert(i, n);
                        }
                    }
                }
            }
            cols.push(v);
        }
        maps.push(cols);
    }
    SkoldbergComplex {
        spec,
        s,
        bases,
        maps,
    }
}

impl SkoldbergComplex {
    /// Whether consecutive maps compose to zero.
    pub fn is_complex(&self) -> bool {
        for j in 0..self.maps.len().saturating_sub(1) {
            for col in &self.maps[j] {
                let mut acc = SparseVec::new();
                for (i, c) in col {
                    crate::linalg::axpy(&mut acc, c, &self.maps[j + 1][*i]);
                }
                if !acc.is_empty() {
                    return false;
                }
            }
        }
        true
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.maps
            .iter()
            .map(|m| crate::linalg::rank(self.spec, m.iter().cloned()))
            .collect()
    }
}

/// Cohomology dimensions from the ladder complex for `0 <= r <= r_max`.
pub fn skoldberg_hh(spec: FieldSpec, r_max: usize) -> BigradedTable {
    let s_lo = -(r_max as i32) - 1;
    let cells: Vec<Vec<((usize, i32), usize)>> = (s_lo..=1)
        .into_par_iter()
        .map(|s| {
            let cx = skoldberg_build(spec, r_max, s);
            let ranks = cx.ranks();
            (0..=r_max)
                .filter_map(|r| {
                    let dim = cx.bases[r].len() - ranks[r] - if r > 0 { ranks[r - 1] } else { 0 };
                    (dim > 0).then_some(((r, s), dim))
                })
                .collect()
        })
        .collect();
    BigradedTable {
        spec,
        r_max,
        dims: cells.into_iter().flatten().collect(),
    }
}

// Resolution-level check of the bimodule differentials.

/// An arrow of the two-cycle quiver: `u: a -> b`, `v: b -> a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arrow {
    U,
    V,
}

/// A monomial `left [word] right` of `P_j`, arrows written left to right as composed
/// (leftmost applied last). `anchor` is the source vertex of the whole monomial,
/// which disambiguates monomials made of idempotents only.
type Monomial = (Vec<Arrow>, Vec<Arrow>, Vec<Arrow>, u8);

fn path_ok(p: &[Arrow]) -> bool {
    p.len() < 3
}

fn cat_path(a: &[Arrow], b: &[Arrow]) -> Vec<Arrow> {
    a.iter().chain(b).copied().collect()
}

fn word_length(j: usize) -> usize {
    3 * (j / 2) + j % 2
}

/// The two generating words of `B_j`, each alternating in u and v.
pub fn resolution_words(j: usize) -> Vec<(Vec<Arrow>, u8)> {
    let n = word_length(j);
    if n == 0 {
        return vec![(vec![], 0), (vec![], 1)];
    }
    [Arrow::U, Arrow::V]
        .into_iter()
        .map(|top| {
            let w: Vec<Arrow> = (0..n)
                .map(|i| if (i % 2 == 0) == (top == Arrow::U) { Arrow::U } else { Arrow::V })
                .collect();
            let src = match w[n - 1] {
                Arrow::U => 0,
                Arrow::V => 1,
            };
            (w, src)
        })
        .collect()
}

fn add_mono(out: &mut BTreeMap<Monomial, i64>, m: Monomial, c: i64) {
    if !path_ok(&m.0) || !path_ok(&m.2) {
        return;
    }
    let e = out.entry(m.clone()).or_insert(0);
    *e += c;
    if *e == 0 {
        out.remove(&m);
    }
}

/// `p_j` on one monomial of `P_j` (for `j >= 1`).
fn p_map(j: usize, m: &Monomial) -> BTreeMap<Monomial, i64> {
    let (a, w, b, src) = m;
    let n = w.len();
    let mut out = BTreeMap::new();
    if j % 2 == 1 {
        add_mono(&mut out, (cat_path(a, &w[..1]), w[1..].to_vec(), b.clone(), *src), 1);
        add_mono(&mut out, (a.clone(), w[..n - 1].to_vec(), cat_path(&w[n - 1..], b), *src), -1);
    } else {
        add_mono(&mut out, (a.clone(), w[..n - 2].to_vec(), cat_path(&w[n - 2..], b), *src), 1);
        add_mono(&mut out, (cat_path(a, &w[..1]), w[1..n - 1].to_vec(), cat_path(&w[n - 1..], b), *src), 1);
        add_mono(&mut out, (cat_path(a, &w[..2]), w[2..].to_vec(), b.clone(), *src), 1);
    }
    out
}

/// Checks `p_j o p_{j+1} = 0` on the generators of `P_{j+1}` for `1 <= j <= j_max`,
/// and `epsilon o p_1 = 0`. Returns the indices `j` where the composite fails
/// (`0` standing for the augmentation).
pub fn resolution_failures(j_max: usize) -> Vec<usize> {
    let mut bad = Vec::new();
    for (w, src) in resolution_words(1) {
        let img = p_map(1, &(vec![], w, vec![], src));
        let mut eps: BTreeMap<(Vec<Arrow>, u8), i64> = BTreeMap::new();
        for ((a, w0, b, s), c) in img {
            let p = cat_path(&cat_path(&a, &w0), &b);
            if path_ok(&p) {
                *eps.entry((p, s)).or_insert(0) += c;
            }
        }
        if eps.values().any(|c| *c != 0) {
            bad.push(0);
        }
    }
    for j in 1..=j_max {
        for (w, src) in resolution_words(j + 1) {
            let mut total: BTreeMap<Monomial, i64> = BTreeMap::new();
            for (m, c) in p_map(j + 1, &(vec![], w, vec![], src)) {
                for (m2, c2) in p_map(j, &m) {
                    add_mono(&mut total, m2, c * c2);
                }
            }
            if !total.is_empty() && !bad.contains(&j) {
                bad.push(j);
            }
        }
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver_ainf::preset_a;

    fn q() -> FieldSpec {
        FieldSpec::Rational
    }

    #[test]
    fn euler_is_a_cocycle_but_not_a_coboundary() {
        let a = preset_a(q());
        let e = euler_derivation(&a);
        assert!(coboundary(&a, &e).is_zero());
        assert!(matches!(is_coboundary(&a, &e).unwrap(), CoboundaryResult::Certificate { .. }));
    }

    #[test]
    fn coboundary_squares_to_zero_on_basis() {
        let a = preset_a(q());
        for r in 0..4 {
            for s in -3..=1 {
                let b = CochainBasis::new(a.cat(), r, s);
                for i in 0..b.len() {
                    let c = b.cochain(i, q());
                    assert!(coboundary(&a, &coboundary(&a, &c)).is_zero(), "r={r} s={s} i={i}");
                }
            }
        }
    }

    #[test]
    fn five_input_coboundary_matches_expansion() {
        // delta nu (a6..a1) = mu2(nu(a6..a2), a1) + mu2(a6, nu(a5..a1))
        //                     - sum_k (-1)^{†_k} nu(.., mu2(a_{k+2}, a_{k+1}), a_k..a_1)
        let a = preset_a(q());
        let cat = a.cat();
        let basis = CochainBasis::new(cat, 5, -4);
        let mut nu = Cochain::zero(5, -4);
        for (i, (t, g)) in basis.elements.iter().enumerate() {
            nu.add_term_at(t, *g, &FieldValue::from_i64((i as i64 * 7) % 5 - 2, q()));
        }
        let d = coboundary(&a, &nu);
        let val = |t: &[Gen]| nu.get(t).cloned().unwrap_or_default();
        for t in cat.normalized_keys(6) {
            let mut want = a.eval_elements(&[&val(&t[..5]), &Element::basis(t[5], q())]);
            want.add_scaled(&a.eval_elements(&[&Element::basis(t[0], q()), &val(&t[1..])]), &FieldValue::one(q()));
            for k in 0..5 {
                let inner = a.eval_elements(&[&Element::basis(t[4 - k], q()), &Element::basis(t[5 - k], q())]);
                let sign = -FieldValue::sign(cat.dagger(&t, k), q());
                for (g, c) in inner.terms() {
                    let mut tt: Vec<Gen> = t[..4 - k].to_vec();
                    tt.push(*g);
                    tt.extend_from_slice(&t[6 - k..]);
                    if tt.iter().any(|x| cat.is_identity(*x)) {
                        continue;
                    }
                    want.add_scaled(&val(&tt), &(&sign * c));
                }
            }
            assert_eq!(d.get(&t).cloned().unwrap_or_default(), want, "{}", cat.fmt_tuple(&t));
        }
    }

    #[test]
    fn bar_table_small() {
        let t = hh_bar(q(), 3);
        assert_eq!(t.get(0, 1), 2);
        assert_eq!(t.get(0, 0), 1);
        assert_eq!(t.get(1, 0), 1);
        assert_eq!(t.get(2, -1), 0);
        let t2 = hh_bar(FieldSpec::Prime(2), 3);
        assert_eq!(t2.get(2, -1), 1);
        assert_eq!(t2.get(3, -1), 1);
    }

    #[test]
    fn ladder_is_a_complex_and_agrees() {
        for spec in [q(), FieldSpec::Prime(2), FieldSpec::Prime(3)] {
            for s in -8..=1 {
                assert!(skoldberg_build(spec, 10, s).is_complex());
            }
            assert_eq!(skoldberg_hh(spec, 5).dims, hh_bar(spec, 5).dims);
        }
    }

    #[test]
    fn resolution_differentials_compose_to_zero() {
        assert!(resolution_failures(12).is_empty());
    }

    #[test]
    fn reference_table_periodic() {
        let t = reference_table(q(), 24);
        assert_eq!(t.get(14, -10), 1);
        assert_eq!(t.get(24, -18), 1);
        assert_eq!(t.get(8, 0), 0);
    }

    #[test]
    fn coboundary_solver() {
        let a = preset_a(q());
        let b = CochainBasis::new(a.cat(), 2, -1);
        let mut nu = Cochain::zero(2, -1);
        for (i, (t, g)) in b.elements.iter().enumerate() {
            nu.add_term_at(t, *g, &FieldValue::from_i64(i as i64 + 1, q()));
        }
        let phi = coboundary(&a, &nu);
        match is_coboundary(&a, &phi).unwrap() {
            CoboundaryResult::Primitive(p) => assert_eq!(coboundary(&a, &p), phi),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            is_coboundary(&a, &Cochain::zero(3, -1)).unwrap(),
            CoboundaryResult::Primitive(Cochain::zero(2, -1))
        );
    }

    #[test]
    fn display_layout() {
        let t = reference_table(q(), 8);
        let s = t.to_string();
        assert!(s.contains("K^2"));
        assert_eq!(t.records().lines().count(), 6);
    }
}
