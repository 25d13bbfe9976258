//! Sparse exact Gaussian elimination over a `FieldValue` field.
//!
//! Vectors are inserted one at a time. Pivots are the first nonzero column in
//! index order, so every result (rank, kernel basis, chosen primitive) depends
//! only on the insertion order and the column numbering.

use std::collections::BTreeMap;

use crate::scalars::{FieldSpec, FieldValue};

pub type SparseVec = BTreeMap<usize, FieldValue>;

/// `acc += c * v`, dropping zeros.
pub fn axpy(acc: &mut SparseVec, c: &FieldValue, v: &SparseVec) {
    if c.is_zero() {
        return;
    }
    for (k, x) in v {
        let add = c * x;
        match acc.get_mut(k) {
            Some(y) => {
                *y = &*y + &add;
                if y.is_zero() {
                    acc.remove(k);
                }
            }
            None => {
                if !add.is_zero() {
                    acc.insert(*k, add);
                }
            }
        }
    }
}

pub fn dot(a: &SparseVec, b: &SparseVec, spec: FieldSpec) -> FieldValue {
    let (small, big) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut s = FieldValue::zero(spec);
    for (k, x) in small {
        if let Some(y) = big.get(k) {
            s = &s + &(x * y);
        }
    }
    s
}

#[derive(Debug, Clone)]
struct Row {
    vec: SparseVec,
    /// Expresses `vec` in terms of the labelled input vectors.
    combo: SparseVec,
}

/// Outcome of inserting a vector.
#[derive(Debug, Clone)]
pub enum Inserted {
    /// The vector was independent and created a pivot in this column.
    Pivot(usize),
    /// The vector was dependent; the combination of labelled inputs that sums
    /// to zero (it has coefficient 1 on the new label).
    Dependent(SparseVec),
}

/// Incremental row echelon form with optional tracking of combinations.
#[derive(Debug, Clone)]
pub struct Echelon {
    spec: FieldSpec,
    rows: Vec<Row>,
    pivot_row: BTreeMap<usize, usize>,
    track: bool,
}

impl Echelon {
    pub fn new(spec: FieldSpec, track: bool) -> Self {
        Echelon {
            spec,
            rows: Vec::new(),
            pivot_row: BTreeMap::new(),
            track,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivot_row.keys().copied()
    }

    /// Reduces `v` against the current rows. Returns the residual (zero in
    /// every pivot column) and the combination `c` with `v = residual + sum c_i row_i`
    /// expressed through labelled inputs.
    fn reduce(&self, mut v: SparseVec) -> (SparseVec, SparseVec) {
        let mut used = SparseVec::new();
        let mut cursor = 0usize;
        loop {
            let next = v
                .range(cursor..)
                .map(|(k, _)| *k)
                .find(|k| self.pivot_row.contains_key(k));
            let Some(col) = next else { break };
            let r = &self.rows[self.pivot_row[&col]];
            let f = v[&col].clone();
            axpy(&mut v, &-&f, &r.vec);
            if self.track {
                axpy(&mut used, &f, &r.combo);
            }
            cursor = col + 1;
        }
        (v, used)
    }

    /// Inserts `v` (with an optional label for combination tracking).
    pub fn insert(&mut self, v: SparseVec, label: Option<usize>) -> Inserted {
        let (res, used) = self.reduce(v);
        let mut combo = SparseVec::new();
        if self.track {
            if let Some(l) = label {
                combo.insert(l, FieldValue::one(self.spec));
            }
            axpy(&mut combo, &FieldValue::from_i64(-1, self.spec), &used);
        }
        match res.iter().next() {
            None => Inserted::Dependent(combo),
            Some((&col, lead)) => {
                let inv = lead.inv().expect("nonzero pivot");
                let vec = res.iter().map(|(k, x)| (*k, x * &inv)).collect();
                let combo = combo.iter().map(|(k, x)| (*k, x * &inv)).collect();
                self.pivot_row.insert(col, self.rows.len());
                self.rows.push(Row { vec, combo });
                Inserted::Pivot(col)
            }
        }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v.clone()).0.is_empty()
    }

    /// Solves `sum x_label * input_label = b`; `None` when `b` is outside the span.
    pub fn solve(&self, b: &SparseVec) -> Option<SparseVec> {
        assert!(self.track, "solve needs combination tracking");
        let (res, used) = self.reduce(b.clone());
        res.is_empty().then_some(used)
    }

    /// Residual of `b` after reduction; zero iff `b` is in the span.
    pub fn residual(&self, b: &SparseVec) -> SparseVec {
        self.reduce(b.clone()).0
    }

    /// A linear functional vanishing on the span and nonzero on `b`, or `None`
    /// if `b` lies in the span.
    pub fn separating_functional(&self, b: &SparseVec) -> Option<SparseVec> {
        let res = self.residual(b);
        let (&c, _) = res.iter().find(|(k, _)| !self.pivot_row.contains_key(k))?;
        // Reduced echelon form makes y = e_c - sum_i (E_i)_c e_{p_i} annihilate every row.
        let reduced = self.reduced_rows();
        let mut y = SparseVec::new();
        y.insert(c, FieldValue::one(self.spec));
        for (p, row) in &reduced {
            if let Some(x) = row.get(&c) {
                y.insert(*p, -x);
            }
        }
        Some(y)
    }

    /// Rows in reduced echelon form, keyed by pivot column.
    pub fn reduced_rows(&self) -> BTreeMap<usize, SparseVec> {
        let mut out: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for (&p, &ri) in self.pivot_row.iter().rev() {
            let mut v = self.rows[ri].vec.clone();
            let cols: Vec<usize> = v.keys().copied().filter(|k| *k != p).collect();
            for k in cols {
                if let Some(r) = out.get(&k) {
                    if let Some(f) = v.get(&k).cloned() {
                        axpy(&mut v, &-&f, r);
                    }
                }
            }
            out.insert(p, v);
        }
        out
    }
}

/// Rank of a list of sparse vectors.
pub fn rank(spec: FieldSpec, vectors: impl IntoIterator<Item = SparseVec>) -> usize {
    let mut e = Echelon::new(spec, false);
    for v in vectors {
        e.insert(v, None);
    }
    e.rank()
}

/// Kernel of the map sending basis vector `i` to `images[i]`, as combinations
/// of basis vectors, in insertion order.
pub fn kernel(spec: FieldSpec, images: &[SparseVec]) -> Vec<SparseVec> {
    let mut e = Echelon::new(spec, true);
    let mut out = Vec::new();
    for (i, v) in images.iter().enumerate() {
        if let Inserted::Dependent(c) = e.insert(v.clone(), Some(i)) {
            out.push(c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(spec: FieldSpec, xs: &[(usize, i64)]) -> SparseVec {
        xs.iter()
            .filter(|(_, c)| *c != 0)
            .map(|(k, c)| (*k, FieldValue::from_i64(*c, spec)))
            .collect()
    }

    #[test]
    fn rank_and_kernel() {
        let q = FieldSpec::Rational;
        let imgs = vec![v(q, &[(0, 1), (1, 2)]), v(q, &[(0, 2), (1, 4)]), v(q, &[(1, 1)])];
        assert_eq!(rank(q, imgs.clone()), 2);
        let k = kernel(q, &imgs);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], v(q, &[(0, -2), (1, 1)]));
    }

    #[test]
    fn rank_depends_on_characteristic() {
        let f2 = FieldSpec::prime(2).unwrap();
        let q = FieldSpec::Rational;
        let rows = |s| vec![v(s, &[(0, 1), (1, 1)]), v(s, &[(0, 1), (1, -1)])];
        assert_eq!(rank(q, rows(q)), 2);
        assert_eq!(rank(f2, rows(f2)), 1);
    }

    #[test]
    fn solve_and_certificate() {
        let q = FieldSpec::Rational;
        let mut e = Echelon::new(q, true);
        e.insert(v(q, &[(0, 1), (2, 1)]), Some(0));
        e.insert(v(q, &[(1, 1), (2, -1)]), Some(1));
        let b = v(q, &[(0, 2), (1, 3), (2, -1)]);
        assert_eq!(e.solve(&b).unwrap(), v(q, &[(0, 2), (1, 3)]));
        let bad = v(q, &[(2, 1)]);
        assert!(e.solve(&bad).is_none());
        let y = e.separating_functional(&bad).unwrap();
        assert!(dot(&y, &v(q, &[(0, 1), (2, 1)]), q).is_zero());
        assert!(dot(&y, &v(q, &[(1, 1), (2, -1)]), q).is_zero());
        assert!(!dot(&y, &bad, q).is_zero());
    }
}
