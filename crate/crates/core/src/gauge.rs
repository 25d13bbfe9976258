//! Gauge transformations of minimal A-infinity structures on A, order-by-order
//! gauge fixing, Maurer-Cartan extension and the invariants `(m6, m8)`.
//!
//! A gauge transformation has components `g^d` (`d >= 2`) of length `d` and
//! internal degree `1 - d`; `g^1` is the identity. The transformed structure
//! `G_* mu` is the unique `mu'` making `G` an A-infinity functor `mu -> mu'`:
//!
//! `sum_r sum_{s_1+..+s_r=d} mu'^r(g^{s_r}(..), .., g^{s_1}(..))
//!   = sum_{i,j} (-1)^{†_i} g^{d-j+1}(a_d.., mu^j(a_{i+j}..a_{i+1}), a_i..a_1)`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::hochschild::{
    basis_cocycle, coboundary, coordinate, gerstenhaber, is_coboundary, CochainBasis,
    CoboundaryResult, HochschildError,
};
use crate::quiver_ainf::{
    category_a, eval_multilinear, parse_document, preset_a_with_order, write_section, AInfStructure,
    AlgebraError, Cochain, Element, Gen, QuiverCategory,
};
use crate::scalars::{FieldSpec, FieldValue};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GaugeError {
    #[error("mu{order} is not a cocycle, so it cannot be gauged away at this stage")]
    NotCocycle { order: usize },
    #[error("mu{order} represents a nonzero class; obstruction pairing {pairing}")]
    Obstruction {
        order: usize,
        pairing: FieldValue,
        functional: Box<Cochain>,
    },
    #[error("classification needs characteristic other than 2 and 3, got {0}")]
    Characteristic(u64),
    #[error("structure truncated at order {have}, need {need}")]
    Truncated { have: usize, need: usize },
    #[error("order {order}: Maurer-Cartan right-hand side is not a coboundary")]
    McObstructed { order: usize },
    #[error("no basis cocycle at (r, s) = ({0}, {1})")]
    NoBasisCocycle(usize, i32),
    #[error(transparent)]
    Hochschild(#[from] HochschildError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaugeTransformation {
    pub spec: FieldSpec,
    pub category: Arc<QuiverCategory>,
    /// `components[&d] = g^d` for `d >= 2`; absent means zero.
    pub components: BTreeMap<usize, Cochain>,
}

impl GaugeTransformation {
    pub fn identity(spec: FieldSpec, category: Arc<QuiverCategory>) -> Self {
        GaugeTransformation {
            spec,
            category,
            components: BTreeMap::new(),
        }
    }

    pub fn single(spec: FieldSpec, category: Arc<QuiverCategory>, g: Cochain) -> Self {
        let mut out = Self::identity(spec, category);
        out.set_component(g);
        out
    }

    pub fn set_component(&mut self, g: Cochain) {
        assert!(g.arity >= 2, "g^1 is fixed to the identity");
        assert_eq!(g.shift, 1 - g.arity as i32, "gauge component has wrong degree");
        if g.is_zero() {
            self.components.remove(&g.arity);
        } else {
            self.components.insert(g.arity, g);
        }
    }

    pub fn component(&self, d: usize) -> Option<&Cochain> {
        self.components.get(&d)
    }

    pub fn is_identity(&self) -> bool {
        self.components.is_empty()
    }

    /// `g^d` on a generator tuple; `g^1` is the identity.
    fn value(&self, t: &[Gen]) -> Option<Element> {
        if t.len() == 1 {
            return Some(Element::basis(t[0], self.spec));
        }
        self.components.get(&t.len()).and_then(|c| c.get(t)).cloned()
    }

    /// Checks normalization and degrees of every component.
    pub fn validate(&self) -> Result<(), AlgebraError> {
        for c in self.components.values() {
            c.validate(&self.category)?;
            if !c.is_normalized(&self.category) {
                return Err(AlgebraError::Inconsistent {
                    tuple: format!("G{}", c.arity),
                    output: String::new(),
                    reason: "gauge component is not normalized".into(),
                });
            }
        }
        Ok(())
    }
}

/// All compositions of `d` visited as `(s_r, .., s_1)` left to right,
/// keeping only those whose pieces are nonzero under `g`.
fn for_each_split(
    t: &[Gen],
    gauge: &GaugeTransformation,
    args: &mut Vec<Element>,
    f: &mut impl FnMut(&[Element]),
) {
    if t.is_empty() {
        f(args);
        return;
    }
    for s in 1..=t.len() {
        if s > 1 && !gauge.components.contains_key(&s) {
            continue;
        }
        if let Some(v) = gauge.value(&t[..s]) {
            args.push(v);
            for_each_split(&t[s..], gauge, args, f);
            args.pop();
        }
    }
}

/// Computes `G_* mu` through order `order` (at most the order of `mu`).
/// Higher tables are computed on tuples of non-identity generators; strict
/// unitality extends them by zero.
pub fn gauge_apply(gauge: &GaugeTransformation, mu: &AInfStructure, order: usize) -> AInfStructure {
    let order = order.min(mu.order);
    let spec = mu.spec;
    let cat = mu.category.clone();
    let mut out = AInfStructure::new(spec, cat.clone(), order);
    out.mu[1] = mu.mu[1].clone();
    if order >= 2 {
        out.mu[2] = mu.mu[2].clone();
    }
    let one = FieldValue::one(spec);
    for d in 3..=order {
        let tuples = cat.normalized_keys(d);
        let done = &out;
        let rows: Vec<_> = tuples
            .into_par_iter()
            .filter_map(|t| {
                let mut tot = Element::zero();
                for j in 2..=d {
                    if mu.mu[j].is_empty() {
                        continue;
                    }
                    let k = d - j + 1;
                    if k > 1 && !gauge.components.contains_key(&k) {
                        continue;
                    }
                    for i in 0..=(d - j) {
                        let inner = &t[d - i - j..d - i];
                        let Some(iv) = mu.mu[j].get(inner) else { continue };
                        let sign = FieldValue::sign(cat.dagger(&t, i), spec);
                        let mut tt = Vec::with_capacity(k);
                        for (g, c) in iv.terms() {
                            tt.clear();
                            tt.extend_from_slice(&t[..d - i - j]);
                            tt.push(*g);
                            tt.extend_from_slice(&t[d - i..]);
                            if let Some(v) = gauge.value(&tt) {
                                tot.add_scaled(&v, &(&sign * c));
                            }
                        }
                    }
                }
                if !gauge.is_identity() {
                    let mut args = Vec::new();
                    for_each_split(&t, gauge, &mut args, &mut |parts: &[Element]| {
                        let r = parts.len();
                        if r < 2 || r >= d || done.mu[r].is_empty() {
                            return;
                        }
                        let refs: Vec<&Element> = parts.iter().collect();
                        let v = eval_multilinear(&refs, |x| done.mu[r].get(x));
                        tot.add_scaled(&v, &-&one);
                    });
                }
                (!tot.is_zero()).then_some((t, tot))
            })
            .collect();
        for (t, e) in rows {
            out.mu[d].set(t, e);
        }
    }
    out
}

/// The composite `H o G`, satisfying `(H o G)_* = H_* G_*`:
/// `(H o G)^d = sum_r sum h^r(g^{s_r}(..), .., g^{s_1}(..))`.
pub fn compose_gauges(h: &GaugeTransformation, g: &GaugeTransformation, order: usize) -> GaugeTransformation {
    let spec = g.spec;
    let cat = g.category.clone();
    let mut out = GaugeTransformation::identity(spec, cat.clone());
    let one = FieldValue::one(spec);
    for d in 2..=order {
        let mut c = Cochain::zero(d, 1 - d as i32);
        for t in cat.normalized_keys(d) {
            let mut tot = Element::zero();
            let mut args = Vec::new();
            for_each_split(&t, g, &mut args, &mut |parts: &[Element]| {
                let r = parts.len();
                let refs: Vec<&Element> = parts.iter().collect();
                if r == 1 {
                    tot.add_scaled(&parts[0], &one);
                } else if let Some(hr) = h.components.get(&r) {
                    let v = eval_multilinear(&refs, |x| hr.get(x));
                    tot.add_scaled(&v, &one);
                }
            });
            c.set(t, tot);
        }
        let c = crate::hochschild::normalize(&c, &cat);
        if !c.is_zero() {
            out.components.insert(d, c);
        }
    }
    out
}

fn table(spec: FieldSpec, d: usize, rows: &[(&[&str], i64, i64, &str)]) -> Cochain {
    table_with_shift(spec, d, 1 - d as i32, rows)
}

fn table_with_shift(spec: FieldSpec, d: usize, shift: i32, rows: &[(&[&str], i64, i64, &str)]) -> Cochain {
    let cat = category_a();
    let mut c = Cochain::zero(d, shift);
    for (t, n, den, out) in rows {
        let t: Vec<Gen> = t.iter().map(|x| cat.gen(x).expect("static")).collect();
        let v = FieldValue::from_ratio(*n, *den, spec).expect("6 invertible");
        c.add_term_at(&t, cat.gen(out).expect("static"), &v);
    }
    c.validate(&cat).expect("static table");
    c
}

/// The quadratic gauge `g` that removes `mu^3` from the transferred structure.
pub fn preset_gauge_g(spec: FieldSpec) -> GaugeTransformation {
    let g = table(
        spec,
        2,
        &[
            (&["e1", "e1"], -1, 2, "e1"),
            (&["f1", "f1"], -1, 2, "f1"),
            (&["e1", "v"], -1, 2, "v"),
            (&["v", "f1"], 1, 2, "v"),
            (&["u", "e1"], -1, 2, "u"),
            (&["f1", "u"], -1, 2, "u"),
        ],
    );
    GaugeTransformation::single(spec, category_a(), g)
}

/// The cubic gauge `h` that then removes `mu^4`.
pub fn preset_gauge_h(spec: FieldSpec) -> GaugeTransformation {
    let h = table(
        spec,
        3,
        &[
            (&["v", "f1", "u"], -1, 12, "e0"),
            (&["v", "u", "e1"], -1, 12, "e0"),
            (&["e1", "e1", "e1"], 1, 3, "e1"),
            (&["f1", "u", "v"], -1, 12, "f0"),
            (&["u", "e1", "v"], -1, 12, "f0"),
            (&["f1", "f1", "f1"], 1, 3, "f1"),
            (&["e1", "v", "f1"], -1, 3, "v"),
            (&["v", "f1", "f1"], -1, 6, "v"),
            (&["e1", "e1", "v"], 1, 3, "v"),
            (&["f1", "f1", "u"], 5, 12, "u"),
            (&["f1", "u", "e1"], 1, 3, "u"),
            (&["u", "e1", "e1"], 5, 12, "u"),
        ],
    );
    GaugeTransformation::single(spec, category_a(), h)
}

/// `mu^4` of the transferred structure after [`preset_gauge_g`].
pub const EXPECTED_MU4_AFTER_G: [([&str; 4], i64, i64, &str); 13] = [
    (["e1", "v", "f1", "u"], 1, 4, "e1"),
    (["e1", "v", "u", "e1"], 1, 4, "e1"),
    (["v", "f1", "f1", "u"], -1, 4, "e1"),
    (["v", "f1", "u", "e1"], -1, 4, "e1"),
    (["f1", "u", "e1", "v"], 1, 4, "f1"),
    (["f1", "u", "v", "f1"], -1, 4, "f1"),
    (["u", "e1", "v", "f1"], -1, 4, "f1"),
    (["u", "v", "f1", "f1"], -1, 2, "f1"),
    (["u", "e1", "e1", "v"], 3, 4, "f1"),
    (["v", "u", "e1", "v"], -1, 2, "v"),
    (["v", "u", "v", "f1"], 1, 2, "v"),
    (["u", "e1", "v", "u"], 1, 2, "u"),
    (["u", "v", "f1", "u"], -1, 2, "u"),
];

/// [`EXPECTED_MU4_AFTER_G`] as a cochain.
pub fn expected_mu4_after_g(spec: FieldSpec) -> Cochain {
    let rows: Vec<(&[&str], i64, i64, &str)> =
        EXPECTED_MU4_AFTER_G.iter().map(|(t, n, d, o)| (&t[..], *n, *d, *o)).collect();
    table_with_shift(spec, 4, -2, &rows)
}

/// `144 mu6` on the tuples of [`M6_PROBES`] after both presets.
pub const EXPECTED_144_MU6: [(i64, &str); 4] = [(-9, "f0"), (5, "f0"), (9, "f0"), (11, "f1")];

/// Gauge tables as text with `G{d}` sections.
pub fn dump_gauge(g: &GaugeTransformation) -> String {
    let mut out = String::new();
    let cat = &g.category;
    let _ = writeln!(out, "FIELD {}", g.spec);
    let _ = writeln!(out, "OBJECTS");
    let _ = writeln!(out, "{}", cat.objects.join(" "));
    let _ = writeln!(out, "GENERATORS");
    for x in &cat.generators {
        let _ = writeln!(out, "{} {} {} {}", x.name, cat.objects[x.source], cat.objects[x.target], x.degree);
    }
    let _ = writeln!(out, "IDENTITIES");
    let ids: Vec<&str> = cat.identities.iter().flatten().map(|x| cat.name(*x)).collect();
    let _ = writeln!(out, "{}", ids.join(" "));
    for (d, c) in &g.components {
        write_section(&mut out, &format!("G{d}"), c, cat);
    }
    out
}

pub fn load_gauge(text: &str) -> Result<GaugeTransformation, AlgebraError> {
    let doc = parse_document(text)?;
    let mut g = GaugeTransformation::identity(doc.spec, doc.category);
    for ((prefix, d), c) in doc.sections {
        if prefix != "G" || d < 2 {
            return Err(AlgebraError::Parse {
                line: 0,
                msg: format!("unexpected section {prefix}{d} in a gauge file"),
            });
        }
        g.set_component(c);
    }
    g.validate()?;
    Ok(g)
}

/// Kills `mu^d` for each listed order in increasing order, by solving
/// `delta nu = mu^d` and applying the gauge with `g^{d-1} = nu`.
pub fn kill_orders(
    mu: &AInfStructure,
    orders: &[usize],
    order: usize,
) -> Result<(GaugeTransformation, AInfStructure), GaugeError> {
    let mut orders = orders.to_vec();
    orders.sort_unstable();
    orders.dedup();
    let order = order.min(mu.order);
    let mut total = GaugeTransformation::identity(mu.spec, mu.category.clone());
    let mut cur = mu.with_order(order);
    for d in orders {
        if d > order || cur.mu[d].is_zero() {
            continue;
        }
        let nu = match is_coboundary(&cur, &cur.mu[d]) {
            Err(HochschildError::NotCocycle(_)) => return Err(GaugeError::NotCocycle { order: d }),
            Err(e) => return Err(e.into()),
            Ok(CoboundaryResult::Certificate { functional, pairing }) => {
                return Err(GaugeError::Obstruction {
                    order: d,
                    pairing,
                    functional: Box::new(functional),
                })
            }
            Ok(CoboundaryResult::Primitive(nu)) => nu,
        };
        let step = GaugeTransformation::single(mu.spec, mu.category.clone(), nu);
        cur = gauge_apply(&step, &cur, order);
        debug_assert!(cur.mu[d].is_zero());
        total = compose_gauges(&step, &total, order);
    }
    Ok((total, cur))
}

/// Coordinates of `(m6, m8)` against the basis cocycles `z6`, `z8`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeformationClass {
    pub m6: FieldValue,
    pub m8: FieldValue,
    pub z6: Cochain,
    pub z8: Cochain,
    /// The normalized structure the coordinates were read from.
    pub normal_form: AInfStructure,
}

/// The fixed basis cocycles of `HH^2(A,A)^{-4}` (length 6) and `HH^2(A,A)^{-6}` (length 8).
pub fn basis_cocycles(spec: FieldSpec) -> Result<(Cochain, Cochain), GaugeError> {
    let a = preset_a_with_order(spec, 2);
    let z6 = basis_cocycle(&a, 6, -4).ok_or(GaugeError::NoBasisCocycle(6, -4))?;
    let z8 = basis_cocycle(&a, 8, -6).ok_or(GaugeError::NoBasisCocycle(8, -6))?;
    Ok((z6, z8))
}

fn require_classification_field(spec: FieldSpec) -> Result<(), GaugeError> {
    match spec.characteristic() {
        c @ (2 | 3) => Err(GaugeError::Characteristic(c)),
        _ => Ok(()),
    }
}

/// Normalizes `mu^3 = mu^4 = mu^5 = 0`, reads `[mu^6]`, kills `mu^7`, reads `[mu^8]`.
pub fn extract_invariants(mu: &AInfStructure) -> Result<DeformationClass, GaugeError> {
    require_classification_field(mu.spec)?;
    if mu.order < 8 {
        return Err(GaugeError::Truncated { have: mu.order, need: 8 });
    }
    let (z6, z8) = basis_cocycles(mu.spec)?;
    let (_, n1) = kill_orders(mu, &[3, 4, 5], 8)?;
    let m6 = coordinate(&n1, &n1.mu[6], &z6).ok_or(GaugeError::NotCocycle { order: 6 })?;
    let (_, n2) = kill_orders(&n1, &[7], 8)?;
    let m8 = coordinate(&n2, &n2.mu[8], &z8).ok_or(GaugeError::NotCocycle { order: 8 })?;
    Ok(DeformationClass {
        m6,
        m8,
        z6,
        z8,
        normal_form: n2,
    })
}

/// Solves `delta mu^d = 1/2 sum_{j=3}^{d-1} G(mu^j, mu^{d-j+2})` for `d = 3..=order`,
/// with `mu^3 = mu^4 = mu^5 = 0`, `mu^6 = a z6` and `b z8` added at `d = 8`.
pub fn mc_extend(spec: FieldSpec, a: &FieldValue, b: &FieldValue, order: usize) -> Result<AInfStructure, GaugeError> {
    require_classification_field(spec)?;
    let (z6, z8) = basis_cocycles(spec)?;
    let mut mu = preset_a_with_order(spec, order);
    let half = FieldValue::from_ratio(1, 2, spec).expect("2 invertible");
    for d in 6..=order {
        let rhs = mc_rhs(&mu, d).scaled(&half);
        let mut next = if rhs.is_zero() {
            Cochain::zero(d, 2 - d as i32)
        } else {
            match is_coboundary(&mu, &rhs) {
                Ok(CoboundaryResult::Primitive(nu)) => nu,
                _ => return Err(GaugeError::McObstructed { order: d }),
            }
        };
        if d == 6 {
            next.add_scaled(&z6, a);
        }
        if d == 8 {
            next.add_scaled(&z8, b);
        }
        mu.mu[d] = next;
    }
    Ok(mu)
}

/// `sum_{j=3}^{d-1} G(mu^j, mu^{d-j+2})` (without the factor 1/2).
pub fn mc_rhs(mu: &AInfStructure, d: usize) -> Cochain {
    let cat = mu.cat();
    let mut rhs = Cochain::zero(d + 1, 2 - d as i32);
    for j in 3..d {
        let k = d - j + 2;
        if k < 3 || mu.mu[j].is_zero() || mu.mu[k].is_zero() {
            continue;
        }
        let g = gerstenhaber(cat, mu.spec, &mu.mu[j], &mu.mu[k]);
        rhs.add_scaled(&g, &FieldValue::one(mu.spec));
    }
    rhs
}

/// Whether `delta mu^d = 1/2 sum G(...)` holds at order `d`.
pub fn mc_holds(mu: &AInfStructure, d: usize) -> bool {
    let half = FieldValue::from_ratio(1, 2, mu.spec).expect("2 invertible");
    coboundary(mu, &mu.mu[d]) == mc_rhs(mu, d).scaled(&half)
}

/// A sparse random gauge with components of lengths `2..=max_len` and small
/// rational coefficients, determined by `seed`.
pub fn random_gauge(spec: FieldSpec, seed: u64, max_len: usize, density: f64) -> GaugeTransformation {
    let cat = category_a();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = GaugeTransformation::identity(spec, cat.clone());
    let choices: [(i64, i64); 6] = [(1, 1), (-1, 1), (1, 2), (-1, 2), (2, 1), (-1, 3)];
    for d in 2..=max_len {
        let basis = CochainBasis::new(&cat, d, 1 - d as i32);
        let mut c = Cochain::zero(d, 1 - d as i32);
        for (t, out) in &basis.elements {
            if rng.random_bool(density) {
                let (n, den) = choices[rng.random_range(0..choices.len())];
                if let Ok(v) = FieldValue::from_ratio(n, den, spec) {
                    c.add_term_at(t, *out, &v);
                }
            }
        }
        if !c.is_zero() {
            g.set_component(c);
        }
    }
    g
}

// ---------------------------------------------------------------------------
// Nonvanishing of [mu6]

/// Linear conditions on an unknown primitive `nu` with `delta nu = 144 mu6`,
/// evaluated on a few probe tuples, and the values they force.
#[derive(Debug, Clone, PartialEq)]
pub struct M6Certificate {
    /// `(probe, 144 * mu6(probe))`.
    pub probes: Vec<(String, String)>,
    /// Human-readable derivation, one step per line.
    pub chain: Vec<String>,
    /// True when the probe equations alone are inconsistent.
    pub chain_contradiction: bool,
    /// True when the full linear system `delta nu = mu6` has no solution.
    pub infeasible: bool,
    /// A functional vanishing on coboundaries and nonzero on `mu6`, when infeasible.
    pub functional: Option<Cochain>,
    pub pairing: Option<FieldValue>,
}

/// The four probe tuples used in the forced-value argument.
pub const M6_PROBES: [[&str; 6]; 4] = [
    ["u", "v", "f1", "u", "e1", "v"],
    ["f1", "u", "v", "u", "e1", "v"],
    ["f1", "u", "e1", "v", "u", "v"],
    ["f1", "f1", "u", "e1", "v", "f1"],
];

/// Builds the certificate for a length-6 cocycle of internal degree -4 on A.
pub fn m6_certificate(alg: &AInfStructure, mu6: &Cochain) -> Result<M6Certificate, GaugeError> {
    require_classification_field(alg.spec)?;
    let spec = alg.spec;
    let cat = alg.cat();
    let scale = FieldValue::from_i64(144, spec);
    let target = mu6.scaled(&scale);
    let src = CochainBasis::new(cat, 5, -4);
    let dst = CochainBasis::new(cat, 6, -4);
    let images = crate::hochschild::coboundary_matrix(alg, &src, &dst);
    let mut probes = Vec::new();
    let mut eqs: Vec<(String, BTreeMap<usize, FieldValue>, FieldValue, Gen)> = Vec::new();
    for p in M6_PROBES {
        let t: Vec<Gen> = p.iter().map(|n| cat.gen(n)).collect::<Result<_, _>>()?;
        let val = target.get(&t).cloned().unwrap_or_default();
        probes.push((cat.fmt_tuple(&t), val.display(cat)));
        let tgt = cat.tuple_target(&t);
        let srco = cat.tuple_source(&t);
        for h in cat.hom(srco, tgt) {
            if cat.deg(h) != cat.tuple_degree(&t) - 4 {
                continue;
            }
            let Some(row_idx) = dst.elements.iter().position(|(tt, g)| *tt == t && *g == h) else {
                continue;
            };
            let mut coeffs = BTreeMap::new();
            for (i, img) in images.iter().enumerate() {
                if let Some(c) = img.get(&row_idx) {
                    coeffs.insert(i, c.clone());
                }
            }
            let rhs = val.coeff(h).cloned().unwrap_or_else(|| FieldValue::zero(spec));
            eqs.push((cat.fmt_tuple(&t), coeffs, rhs, h));
        }
    }
    let mut known: BTreeMap<usize, FieldValue> = BTreeMap::new();
    let mut chain = Vec::new();
    let mut contradiction = false;
    let fmt_unknown = |i: usize| {
        let (t, g) = &src.elements[i];
        format!("nu({})[{}]", cat.fmt_tuple(t), cat.name(*g))
    };
    let mut used = vec![false; eqs.len()];
    loop {
        let mut progressed = false;
        for (k, (probe, coeffs, rhs, h)) in eqs.iter().enumerate() {
            if used[k] {
                continue;
            }
            let mut rest = rhs.clone();
            let mut unknown = Vec::new();
            for (i, c) in coeffs {
                match known.get(i) {
                    Some(x) => rest = &rest - &(c * x),
                    None => unknown.push(*i),
                }
            }
            match unknown.as_slice() {
                [] => {
                    used[k] = true;
                    progressed = true;
                    if !rest.is_zero() {
                        let lhs = rhs - &rest;
                        chain.push(format!(
                            "probe ({probe}), coefficient of {}: forced values give {lhs}, but 144*mu6 has {rhs}: contradiction",
                            cat.name(*h)
                        ));
                        contradiction = true;
                    } else {
                        chain.push(format!("probe ({probe}), coefficient of {}: consistent", cat.name(*h)));
                    }
                }
                [i] => {
                    used[k] = true;
                    progressed = true;
                    let x = rest.checked_div(&coeffs[i]).expect("nonzero coefficient");
                    chain.push(format!(
                        "probe ({probe}), coefficient of {}: forces {} = {x}",
                        cat.name(*h),
                        fmt_unknown(*i)
                    ));
                    known.insert(*i, x);
                }
                _ => {}
            }
        }
        if !progressed || contradiction {
            break;
        }
    }
    let (infeasible, functional, pairing) = match is_coboundary(alg, mu6)? {
        CoboundaryResult::Primitive(_) => (false, None, None),
        CoboundaryResult::Certificate { functional, pairing } => (true, Some(functional), Some(pairing)),
    };
    Ok(M6Certificate {
        probes,
        chain,
        chain_contradiction: contradiction,
        infeasible,
        functional,
        pairing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perturbation::{preset_splitting_c, transfer};
    use crate::quiver_ainf::ainf_check_unital;

    fn q() -> FieldSpec {
        FieldSpec::Rational
    }

    fn b(order: usize) -> AInfStructure {
        transfer(&preset_splitting_c(q()), order).minimal
    }

    #[test]
    fn identity_gauge_is_trivial() {
        let mu = b(6);
        let g = GaugeTransformation::identity(q(), mu.category.clone());
        assert_eq!(gauge_apply(&g, &mu, 6), mu);
    }

    #[test]
    fn preset_tables() {
        let g = preset_gauge_g(q());
        let cat = g.category.clone();
        let t = |ns: &[&str]| ns.iter().map(|n| cat.gen(n).unwrap()).collect::<Vec<_>>();
        assert_eq!(g.component(2).unwrap().get(&t(&["v", "f1"])).unwrap().display(&cat), "1/2*v");
        let h = preset_gauge_h(q());
        assert_eq!(h.component(3).unwrap().get(&t(&["f1", "f1", "u"])).unwrap().display(&cat), "5/12*u");
        assert_eq!(h.component(3).unwrap().len(), 12);
        assert_eq!(load_gauge(&dump_gauge(&h)).unwrap(), h);
    }

    #[test]
    fn g_then_h() {
        let mu = b(6);
        let g1 = gauge_apply(&preset_gauge_g(q()), &mu, 6);
        assert!(g1.mu[3].is_zero());
        assert_eq!(g1.mu[4], expected_mu4_after_g(q()));
        assert_eq!(g1.evaluate_named(4, &["u", "e1", "e1", "v"]).unwrap().display(g1.cat()), "3/4*f1");
        let g2 = gauge_apply(&preset_gauge_h(q()), &g1, 6);
        assert!(g2.mu[3].is_zero() && g2.mu[4].is_zero());
        assert!(coboundary(&g2, &g2.mu[6]).is_zero());
        assert!(ainf_check_unital(&g2, 6).is_empty());
        let cert = m6_certificate(&g2, &g2.mu[6]).unwrap();
        let cat = g2.cat();
        for ((_, got), (n, out)) in cert.probes.iter().zip(EXPECTED_144_MU6) {
            assert_eq!(got, &Element::term(cat.gen(out).unwrap(), FieldValue::from_i64(n, q())).display(cat));
        }
        assert!(cert.chain_contradiction && cert.infeasible);
    }

    #[test]
    fn composite_gauge_acts_like_sequence() {
        let mu = b(7);
        let (g, h) = (preset_gauge_g(q()), preset_gauge_h(q()));
        let seq = gauge_apply(&h, &gauge_apply(&g, &mu, 7), 7);
        let comp = gauge_apply(&compose_gauges(&h, &g, 7), &mu, 7);
        assert_eq!(seq, comp);
    }

    #[test]
    fn kill_low_orders() {
        let mu = b(7);
        let (_, n) = kill_orders(&mu, &[3, 4, 5], 7).unwrap();
        assert!(n.mu[3].is_zero() && n.mu[4].is_zero() && n.mu[5].is_zero());
        assert!(coboundary(&n, &n.mu[6]).is_zero());
        assert!(matches!(kill_orders(&n, &[6], 7), Err(GaugeError::Obstruction { order: 6, .. })));
    }

    #[test]
    fn refuses_small_characteristic() {
        assert!(matches!(
            mc_extend(FieldSpec::Prime(3), &FieldValue::zero(FieldSpec::Prime(3)), &FieldValue::zero(FieldSpec::Prime(3)), 8),
            Err(GaugeError::Characteristic(3))
        ));
    }

    #[test]
    fn trivial_structure_has_zero_invariants() {
        let inv = extract_invariants(&preset_a_with_order(q(), 8)).unwrap();
        assert!(inv.m6.is_zero() && inv.m8.is_zero());
    }
}
