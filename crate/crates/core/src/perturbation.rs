//! Transfer of the dg structure of C to a minimal A-infinity structure on A
//! along an explicit splitting, together with the components of the
//! quasi-isomorphism.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::quiver_ainf::{
    category_a, dump, preset_c, AInfStructure, Cochain, Element, Gen, QuiverCategory, Tuple,
};
use crate::scalars::{FieldSpec, FieldValue};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SplittingError {
    #[error("ambient structure has products of arity {0}; only dg structures are supported")]
    NotDg(usize),
    #[error("{map} is not degree {want} on {gen}")]
    Degree {
        map: &'static str,
        gen: String,
        want: i32,
    },
    #[error("identity {0} fails on {1}")]
    Identity(&'static str, String),
}

/// Inclusion `i`, projection `p` and homotopy `T` between a dg category and
/// its cohomology.
#[derive(Debug, Clone)]
pub struct SplittingData {
    pub ambient: AInfStructure,
    pub harmonic: Arc<QuiverCategory>,
    /// `inclusion[g]` for each harmonic generator `g`.
    pub inclusion: Vec<Element>,
    /// `projection[x]` for each ambient generator `x`, in harmonic generators.
    pub projection: Vec<Element>,
    /// `homotopy[x]` for each ambient generator `x`, degree -1.
    pub homotopy: Vec<Element>,
}

fn apply_map(map: &[Element], e: &Element) -> Element {
    let mut out = Element::zero();
    for (g, c) in e.terms() {
        out.add_scaled(&map[*g], c);
    }
    out
}

impl SplittingData {
    pub fn spec(&self) -> FieldSpec {
        self.ambient.spec
    }

    fn mu1(&self, e: &Element) -> Element {
        self.ambient.eval_elements(&[e])
    }

    pub fn i(&self, e: &Element) -> Element {
        apply_map(&self.inclusion, e)
    }

    pub fn p(&self, e: &Element) -> Element {
        apply_map(&self.projection, e)
    }

    pub fn t(&self, e: &Element) -> Element {
        apply_map(&self.homotopy, e)
    }

    /// Checks degrees, `p i = id`, `i p - id = mu1 T + T mu1`, `T T = 0`,
    /// `T i = 0` and `p T = 0`.
    pub fn validate(&self) -> Result<(), SplittingError> {
        let amb = self.ambient.cat();
        let spec = self.spec();
        for d in 3..=self.ambient.order {
            if !self.ambient.mu[d].is_zero() {
                return Err(SplittingError::NotDg(d));
            }
        }
        let deg_ok = |e: &Element, cat: &QuiverCategory, want: i32| e.degree(cat).is_none_or(|d| d == want);
        for g in self.harmonic.all_gens() {
            if !deg_ok(&self.inclusion[g], amb, self.harmonic.deg(g)) {
                return Err(SplittingError::Degree {
                    map: "inclusion",
                    gen: self.harmonic.name(g).into(),
                    want: self.harmonic.deg(g),
                });
            }
            let pi = self.p(&self.inclusion[g]);
            if pi != Element::basis(g, spec) {
                return Err(SplittingError::Identity("p i = id", self.harmonic.name(g).into()));
            }
            if !self.t(&self.inclusion[g]).is_zero() {
                return Err(SplittingError::Identity("T i = 0", self.harmonic.name(g).into()));
            }
        }
        for x in amb.all_gens() {
            let name = amb.name(x).to_string();
            if !deg_ok(&self.projection[x], &self.harmonic, amb.deg(x)) {
                return Err(SplittingError::Degree {
                    map: "projection",
                    gen: name,
                    want: amb.deg(x),
                });
            }
            if !deg_ok(&self.homotopy[x], amb, amb.deg(x) - 1) {
                return Err(SplittingError::Degree {
                    map: "homotopy",
                    gen: name,
                    want: amb.deg(x) - 1,
                });
            }
            let ex = Element::basis(x, spec);
            let mut lhs = self.i(&self.p(&ex));
            lhs.add_term(x, &FieldValue::from_i64(-1, spec));
            let mut rhs = self.mu1(&self.t(&ex));
            rhs.add_scaled(&self.t(&self.mu1(&ex)), &FieldValue::one(spec));
            if lhs != rhs {
                return Err(SplittingError::Identity("i p - id = mu1 T + T mu1", name));
            }
            if !self.t(&self.t(&ex)).is_zero() {
                return Err(SplittingError::Identity("T T = 0", name));
            }
            if !self.p(&self.t(&ex)).is_zero() {
                return Err(SplittingError::Identity("p T = 0", name));
            }
        }
        Ok(())
    }
}

/// The splitting of C onto A: `u -> u01`, `v -> v0 + v1`, `T(v01) = -v1`.
pub fn preset_splitting_c(spec: FieldSpec) -> SplittingData {
    let ambient = preset_c(spec);
    let harmonic = category_a();
    let amb = ambient.cat().clone();
    let one = FieldValue::one(spec);
    let a = |n: &str| amb.gen(n).expect("static");
    let h = |n: &str| harmonic.gen(n).expect("static");
    let inclusion = harmonic
        .generators
        .iter()
        .map(|g| match g.name.as_str() {
            "u" => Element::basis(a("u01"), spec),
            "v" => Element::from_terms([(a("v0"), one.clone()), (a("v1"), one.clone())]),
            n => Element::basis(a(n), spec),
        })
        .collect();
    let projection = amb
        .generators
        .iter()
        .map(|g| match g.name.as_str() {
            "v0" => Element::basis(h("v"), spec),
            "v1" | "v01" => Element::zero(),
            "u01" => Element::basis(h("u"), spec),
            n => Element::basis(h(n), spec),
        })
        .collect();
    let homotopy = amb
        .generators
        .iter()
        .map(|g| match g.name.as_str() {
            "v01" => Element::term(a("v1"), FieldValue::from_i64(-1, spec)),
            _ => Element::zero(),
        })
        .collect();
    SplittingData {
        ambient,
        harmonic,
        inclusion,
        projection,
        homotopy,
    }
}

/// Minimal structure on the harmonic space and the functor components.
#[derive(Debug, Clone)]
pub struct TransferResult {
    pub minimal: AInfStructure,
    /// `functor[d]` maps harmonic tuples of length `d` to ambient elements.
    pub functor: Vec<BTreeMap<Tuple, Element>>,
}

/// Runs the recursion
/// `I^d(a) = sum_m T mu2(I^{d-m}(a_d..a_{m+1}), I^m(a_m..a_1))`,
/// `mu^d(a) = sum_m p mu2(I^{d-m}(..), I^m(..))`
/// on all tuples for `d = 2` and on tuples of non-identity generators for `d >= 3`.
pub fn transfer(split: &SplittingData, order: usize) -> TransferResult {
    run_transfer(split, order, false)
}

/// Variant evaluating every arity on all composable tuples, identities included.
pub fn transfer_full(split: &SplittingData, order: usize) -> TransferResult {
    run_transfer(split, order, true)
}

fn run_transfer(split: &SplittingData, order: usize, full: bool) -> TransferResult {
    let spec = split.spec();
    let cat = split.harmonic.clone();
    let order = order.max(2);
    let mut minimal = AInfStructure::new(spec, cat.clone(), order);
    let mut functor: Vec<BTreeMap<Tuple, Element>> = vec![BTreeMap::new(); order + 1];
    for g in cat.all_gens() {
        functor[1].insert(vec![g], split.inclusion[g].clone());
    }
    let mu2 = |x: &Element, y: &Element| split.ambient.eval_elements(&[x, y]);
    let all = cat.all_gens();
    let non_id = cat.non_identity();
    for d in 2..=order {
        let gens = if d == 2 || full { &all } else { &non_id };
        let tuples = cat.tuples(gens, d);
        let prev = &functor;
        let rows: Vec<(Tuple, Element, Element)> = tuples
            .into_par_iter()
            .filter_map(|t| {
                let mut acc = Element::zero();
                for m in 1..d {
                    let (Some(l), Some(r)) = (prev[d - m].get(&t[..d - m]), prev[m].get(&t[d - m..])) else {
                        continue;
                    };
                    acc.add_scaled(&mu2(l, r), &FieldValue::one(spec));
                }
                let i = split.t(&acc);
                let b = split.p(&acc);
                (!i.is_zero() || !b.is_zero()).then_some((t, i, b))
            })
            .collect();
        for (t, i, b) in rows {
            if !i.is_zero() {
                functor[d].insert(t.clone(), i);
            }
            minimal.mu[d].set(t, b);
        }
    }
    TransferResult { minimal, functor }
}

/// Outcome of comparing a transferred structure with the closed form
/// `mu^d(u, e1^{d-3}, v, f1) = (-1)^{d+1} f1`, `mu^d(u, e1^{d-2}, v) = (-1)^d f1`
/// and zero on every other tuple of non-identity generators (`d >= 3`).
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaReport {
    pub up_to: usize,
    pub checked_entries: usize,
    pub mismatches: Vec<String>,
}

impl LemmaReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// The closed-form value of `mu^d` on a tuple of non-identity generators of A.
pub fn lemma_value(cat: &QuiverCategory, spec: FieldSpec, t: &[Gen]) -> Element {
    let d = t.len();
    let g = |n: &str| cat.gen(n).expect("category of A");
    let (u, v, e1, f1) = (g("u"), g("v"), g("e1"), g("f1"));
    let sign = |k: usize| FieldValue::sign(k as i64, spec);
    if d >= 2 && t[0] == u && t[d - 1] == v && t[1..d - 1].iter().all(|x| *x == e1) {
        return Element::term(f1, sign(d));
    }
    if d >= 3 && t[0] == u && t[d - 2] == v && t[d - 1] == f1 && t[1..d - 2].iter().all(|x| *x == e1) {
        return Element::term(f1, sign(d + 1));
    }
    if d == 2 {
        return crate::quiver_ainf::preset_a_with_order(spec, 2)
            .evaluate(2, t)
            .unwrap_or_default();
    }
    Element::zero()
}

pub fn lemma_check(result: &TransferResult, up_to: usize) -> LemmaReport {
    let mu = &result.minimal;
    let cat = mu.cat();
    let mut mismatches = Vec::new();
    let mut checked = 0;
    for d in 2..=up_to.min(mu.order) {
        for t in cat.tuples(&cat.non_identity(), d) {
            checked += 1;
            let got = mu.mu[d].get(&t).cloned().unwrap_or_default();
            let want = lemma_value(cat, mu.spec, &t);
            if got != want {
                mismatches.push(format!(
                    "mu{d}({}) = {}, expected {}",
                    cat.fmt_tuple(&t),
                    got.display(cat),
                    want.display(cat)
                ));
            }
        }
    }
    LemmaReport {
        up_to,
        checked_entries: checked,
        mismatches,
    }
}

/// The minimal structure in the canonical format followed by the functor
/// components as `# IOTA{d}` comment blocks, so the file still loads as a structure.
pub fn dump_transfer(split: &SplittingData, result: &TransferResult) -> String {
    let mut out = dump(&result.minimal);
    let amb = split.ambient.cat();
    let cat = &split.harmonic;
    for (d, table) in result.functor.iter().enumerate().skip(1) {
        if table.is_empty() {
            continue;
        }
        let _ = writeln!(out, "# IOTA{d}");
        for (t, e) in table {
            let _ = writeln!(out, "# {} -> {}", cat.fmt_tuple(t), e.display(amb));
        }
    }
    out
}

/// The functor components as cochains-shaped tables (for inspection).
pub fn functor_component(result: &TransferResult, d: usize) -> Cochain {
    let mut c = Cochain::zero(d, 1 - d as i32);
    for (t, e) in &result.functor[d] {
        c.set(t.clone(), e.clone());
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver_ainf::{ainf_check, ainf_check_unital};

    fn q() -> FieldSpec {
        FieldSpec::Rational
    }

    #[test]
    fn splitting_identities() {
        let s = preset_splitting_c(q());
        s.validate().unwrap();
        let amb = s.ambient.cat();
        assert_eq!(s.homotopy[amb.gen("v01").unwrap()].display(amb), "-v1");
        assert!(s.homotopy[amb.gen("e1").unwrap()].is_zero());
        assert_eq!(s.projection[amb.gen("v0").unwrap()].display(&s.harmonic), "v");
    }

    #[test]
    fn broken_splitting_rejected() {
        let mut s = preset_splitting_c(q());
        let v01 = s.ambient.cat().gen("v01").unwrap();
        s.homotopy[v01] = Element::zero();
        assert!(s.validate().is_err());
    }

    #[test]
    fn second_order_functor() {
        let s = preset_splitting_c(q());
        let r = transfer(&s, 4);
        let cat = &s.harmonic;
        let amb = s.ambient.cat();
        let g = |n: &str| cat.gen(n).unwrap();
        assert_eq!(r.functor[2][&vec![g("v"), g("f1")]].display(amb), "v1");
        assert_eq!(r.functor[2][&vec![g("e1"), g("v")]].display(amb), "-v1");
        assert_eq!(r.minimal.evaluate_named(3, &["u", "e1", "v"]).unwrap().display(cat), "-f1");
    }

    #[test]
    fn closed_form_and_relations() {
        let s = preset_splitting_c(q());
        let r = transfer(&s, 8);
        assert!(lemma_check(&r, 8).ok());
        assert!(ainf_check_unital(&r.minimal, 8).is_empty());
        let full = transfer_full(&s, 5);
        assert!(ainf_check(&full.minimal, 5).is_empty());
        for d in 3..=5 {
            assert_eq!(full.minimal.mu[d], r.minimal.mu[d]);
        }
    }
}
