//! Polygon counts on the marked torus.
//!
//! Curves are straight lines in the universal cover. A polygon with corners
//! `y_0..y_d` on the curve sequence `L_0..L_d` is an embedded convex polygon in
//! the plane, traversed counterclockwise, whose side from `y_k` to `y_{k+1}`
//! lies on a lift of `L_k` (indices mod `d+1`). Deck classes are fixed by
//! pinning the two lines through one chosen corner to their base lifts.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::useries::IntSeries;

pub type Q = Rational64;

fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pt {
    pub x: Q,
    pub y: Q,
}

impl Pt {
    pub fn new(x: Q, y: Q) -> Self {
        Pt { x, y }
    }
    pub fn int(x: i64, y: i64) -> Self {
        Pt::new(Q::from_integer(x), Q::from_integer(y))
    }
    fn add(self, o: Pt) -> Pt {
        Pt::new(self.x + o.x, self.y + o.y)
    }
    fn sub(self, o: Pt) -> Pt {
        Pt::new(self.x - o.x, self.y - o.y)
    }
    fn scale(self, t: Q) -> Pt {
        Pt::new(self.x * t, self.y * t)
    }
}

impl fmt::Display for Pt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

fn cross(a: Pt, b: Pt) -> Q {
    a.x * b.y - a.y * b.x
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SceneError {
    #[error("scene line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid scene: {0}")]
    Invalid(String),
    #[error("unknown curve index {0}")]
    UnknownCurve(usize),
    #[error("no grading for corner {0} -> {1}")]
    MissingGrading(usize, usize),
}

/// One curve on the torus, given by its base lift.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub name: String,
    /// A point of the base lift.
    pub point: Pt,
    /// Orientation; one period of the curve when the curve is closed.
    pub dir: Pt,
    /// Integer linear form `f` with `f(dir) = 1`; arc lengths and star
    /// positions are measured in `f`.
    pub coord: (i64, i64),
    /// Value of `f` at the star, mod 1.
    pub star: Q,
    /// Lattice vectors whose integer combinations enumerate distinct lifts.
    pub lift_gens: Vec<Pt>,
    /// For a push-off: the curve it displaces. Its base point is the degree-0
    /// crossing with that curve.
    pub push_off_of: Option<usize>,
}

impl Curve {
    fn f(&self, p: Pt) -> Q {
        p.x * self.coord.0 + p.y * self.coord.1
    }

    pub fn lift(&self, offsets: &[i64]) -> Line {
        let mut p = self.point;
        for (g, k) in self.lift_gens.iter().zip(offsets) {
            p = p.add(g.scale(Q::from_integer(*k)));
        }
        Line { p, d: self.dir }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Line {
    pub p: Pt,
    pub d: Pt,
}

impl Line {
    pub fn meet(&self, o: &Line) -> Option<Pt> {
        let den = cross(self.d, o.d);
        if den.is_zero() {
            return None;
        }
        let t = cross(o.p.sub(self.p), o.d) / den;
        Some(self.p.add(self.d.scale(t)))
    }
}

/// Curves, basepoint and corner gradings.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonScene {
    pub curves: Vec<Curve>,
    pub z: Pt,
    /// Maslov index of the corner in `hom(L_a, L_b)`, keyed by curve indices.
    pub gradings: BTreeMap<(usize, usize), i64>,
}

/// The three curves, the push-off of the middle one, and the basepoint.
pub fn preset_scene() -> PolygonScene {
    let half = q(1, 2);
    let curves = vec![
        Curve {
            name: "g0".into(),
            point: Pt::int(0, 0),
            dir: Pt::int(1, 0),
            coord: (1, 0),
            star: q(3, 4),
            lift_gens: vec![Pt::int(0, 1)],
            push_off_of: None,
        },
        Curve {
            name: "g1".into(),
            point: Pt::int(0, 0),
            dir: Pt::int(0, 1),
            coord: (0, 1),
            star: q(7, 8),
            lift_gens: vec![Pt::int(1, 0)],
            push_off_of: None,
        },
        Curve {
            name: "g2".into(),
            point: Pt::new(half, Q::zero()),
            dir: Pt::int(-1, -1),
            coord: (-1, 0),
            star: q(3, 4),
            lift_gens: vec![Pt::int(1, 0)],
            push_off_of: None,
        },
        Curve {
            name: "g1'".into(),
            point: Pt::new(Q::zero(), q(5, 8)),
            dir: Pt::new(q(-1, 1024), Q::one()),
            coord: (0, 1),
            star: q(7, 8),
            lift_gens: vec![Pt::int(1, 0), Pt::int(0, 1)],
            push_off_of: Some(1),
        },
    ];
    let gradings = [
        ((0, 1), 0),
        ((1, 2), 0),
        ((2, 0), 1),
        ((1, 0), 1),
        ((2, 1), 1),
        ((0, 2), 0),
        ((3, 2), 0),
        ((3, 1), 0),
    ]
    .into_iter()
    .collect();
    PolygonScene {
        curves,
        z: Pt::new(q(3, 4), q(3, 4)),
        gradings,
    }
}

impl PolygonScene {
    pub fn curve(&self, i: usize) -> Result<&Curve, SceneError> {
        self.curves.get(i).ok_or(SceneError::UnknownCurve(i))
    }

    pub fn grading(&self, a: usize, b: usize) -> Result<i64, SceneError> {
        self.gradings.get(&(a, b)).copied().ok_or(SceneError::MissingGrading(a, b))
    }

    fn closed_curves(&self) -> impl Iterator<Item = (usize, &Curve)> {
        self.curves.iter().enumerate().filter(|(_, c)| c.push_off_of.is_none())
    }

    /// Algebraic intersection numbers `(L_a . L_b)` of the closed curves.
    pub fn pairing(&self, a: usize, b: usize) -> Result<i64, SceneError> {
        let (ca, cb) = (self.curve(a)?, self.curve(b)?);
        let d = cross(ca.dir, cb.dir);
        if !d.is_integer() {
            return Err(SceneError::Invalid(format!("{} and {} are not closed", ca.name, cb.name)));
        }
        Ok(d.to_integer())
    }

    /// Intersection points of two closed curves, reduced to `[0,1)^2`.
    pub fn torus_intersections(&self, a: usize, b: usize) -> Result<Vec<Pt>, SceneError> {
        let (ca, cb) = (self.curve(a)?, self.curve(b)?);
        let n = self.pairing(a, b)?.unsigned_abs() as i64;
        let mut out = Vec::new();
        // Every crossing lies on the base lift of `a` within one period of it.
        let lb = cb.lift_gens.first().copied().unwrap_or(Pt::int(1, 0));
        for k in -2 * n - 2..=2 * n + 2 {
            let line = Line { p: cb.point.add(lb.scale(Q::from_integer(k))), d: cb.dir };
            let base = Line { p: ca.point, d: ca.dir };
            if let Some(p) = base.meet(&line) {
                let r = Pt::new(p.x - p.x.floor(), p.y - p.y.floor());
                if !out.contains(&r) {
                    out.push(r);
                }
            }
        }
        out.sort_by(|a, b| (a.x, a.y).cmp(&(b.x, b.y)));
        Ok(out)
    }

    fn on_curve(c: &Curve, p: Pt) -> bool {
        cross(c.dir, p.sub(c.point)).is_integer()
    }

    /// The complementary face containing `z`, as a convex polygon.
    pub fn face_of(&self, p: Pt) -> Vec<Pt> {
        let mut poly = vec![
            p.add(Pt::int(-2, -2)),
            p.add(Pt::int(2, -2)),
            p.add(Pt::int(2, 2)),
            p.add(Pt::int(-2, 2)),
        ];
        for (_, c) in self.closed_curves() {
            let g = c.lift_gens[0];
            for k in -4..=4 {
                let line = Line { p: c.point.add(g.scale(Q::from_integer(k))), d: c.dir };
                let side = cross(line.d, p.sub(line.p));
                poly = clip(&poly, &line, side.is_positive());
            }
        }
        poly
    }

    /// Structural checks: pairings `+1`, single crossings, `z` and stars off
    /// the other curves.
    pub fn validate(&self) -> Result<(), SceneError> {
        let closed: Vec<usize> = self.closed_curves().map(|(i, _)| i).collect();
        if closed.len() != 3 {
            return Err(SceneError::Invalid("expected three closed curves".into()));
        }
        for k in 0..3 {
            let (a, b) = (closed[k], closed[(k + 1) % 3]);
            if self.pairing(a, b)? != 1 {
                return Err(SceneError::Invalid(format!("pairing of {a} and {b} is not 1")));
            }
        }
        for c in &self.curves {
            if c.f(c.dir) != Q::one() {
                return Err(SceneError::Invalid(format!("{}: coordinate form is not normalized", c.name)));
            }
            if Self::on_curve(c, self.z) && c.push_off_of.is_none() {
                return Err(SceneError::Invalid(format!("z lies on {}", c.name)));
            }
        }
        for &a in &closed {
            for &b in &closed {
                if a == b {
                    continue;
                }
                for p in self.torus_intersections(a, b)? {
                    let c = &self.curves[a];
                    if (c.f(p) - c.star).is_integer() {
                        return Err(SceneError::Invalid(format!("star of {} sits on a crossing", c.name)));
                    }
                }
            }
        }
        Ok(())
    }

    /// Name of the corner `hom(L_a, L_b)`.
    pub fn corner_name(&self, a: usize, b: usize) -> String {
        let label = |i: usize| self.curves[i].push_off_of.unwrap_or(i);
        if self.curves[a].push_off_of == Some(b) || self.curves[b].push_off_of == Some(a) {
            format!("e_X{}", label(b))
        } else {
            format!("e{}{}", label(a), label(b))
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.curves {
            let lifts: Vec<String> = c.lift_gens.iter().map(|g| format!("{},{}", g.x, g.y)).collect();
            let kind = match c.push_off_of {
                Some(p) => format!("pushoff {} of {}", c.name, p),
                None => format!("curve {}", c.name),
            };
            let _ = writeln!(
                out,
                "{kind} point {} {} dir {} {} coord {} {} star {} lifts {}",
                c.point.x,
                c.point.y,
                c.dir.x,
                c.dir.y,
                c.coord.0,
                c.coord.1,
                c.star,
                lifts.join(" ")
            );
        }
        let _ = writeln!(out, "z {} {}", self.z.x, self.z.y);
        for ((a, b), i) in &self.gradings {
            let _ = writeln!(out, "grade {a} {b} {i}");
        }
        out
    }

    /// Inverse of [`PolygonScene::to_text`]; `#` starts a comment.
    pub fn parse(text: &str) -> Result<PolygonScene, SceneError> {
        let mut curves = Vec::new();
        let mut z = None;
        let mut gradings = BTreeMap::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| SceneError::Parse { line: ln + 1, msg: msg.to_string() };
            let toks: Vec<&str> = line.split_whitespace().collect();
            let rat = |s: &str| s.parse::<Q>().map_err(|_| err(&format!("bad rational {s:?}")));
            let int = |s: &str| s.parse::<i64>().map_err(|_| err(&format!("bad integer {s:?}")));
            match toks[0] {
                "curve" | "pushoff" => {
                    let (name, push, rest) = if toks[0] == "pushoff" {
                        if toks.len() < 4 || toks[2] != "of" {
                            return Err(err("expected `pushoff NAME of INDEX`"));
                        }
                        (toks[1], Some(int(toks[3])? as usize), &toks[4..])
                    } else {
                        (toks.get(1).copied().ok_or_else(|| err("missing name"))?, None, &toks[2..])
                    };
                    if rest.len() < 11
                        || rest[0] != "point"
                        || rest[3] != "dir"
                        || rest[6] != "coord"
                        || rest[9] != "star"
                        || rest.get(11) != Some(&"lifts")
                    {
                        return Err(err("expected `point X Y dir X Y coord A B star S lifts X,Y ...`"));
                    }
                    let mut lift_gens = Vec::new();
                    for g in &rest[12..] {
                        let (a, b) = g.split_once(',').ok_or_else(|| err("lift generator must be X,Y"))?;
                        lift_gens.push(Pt::new(rat(a)?, rat(b)?));
                    }
                    curves.push(Curve {
                        name: name.to_string(),
                        point: Pt::new(rat(rest[1])?, rat(rest[2])?),
                        dir: Pt::new(rat(rest[4])?, rat(rest[5])?),
                        coord: (int(rest[7])?, int(rest[8])?),
                        star: rat(rest[10])?,
                        lift_gens,
                        push_off_of: push,
                    });
                }
                "z" if toks.len() == 3 => z = Some(Pt::new(rat(toks[1])?, rat(toks[2])?)),
                "grade" if toks.len() == 4 => {
                    gradings.insert((int(toks[1])? as usize, int(toks[2])? as usize), int(toks[3])?);
                }
                _ => return Err(err("unrecognised line")),
            }
        }
        let z = z.ok_or(SceneError::Parse { line: 0, msg: "missing z".into() })?;
        Ok(PolygonScene { curves, z, gradings })
    }
}

fn clip(poly: &[Pt], line: &Line, keep_left: bool) -> Vec<Pt> {
    let inside = |p: Pt| {
        let c = cross(line.d, p.sub(line.p));
        if keep_left {
            !c.is_negative()
        } else {
            !c.is_positive()
        }
    };
    let mut out = Vec::new();
    for i in 0..poly.len() {
        let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
        if inside(a) {
            out.push(a);
        }
        if inside(a) != inside(b) {
            let edge = Line { p: a, d: b.sub(a) };
            if let Some(m) = edge.meet(line) {
                out.push(m);
            }
        }
    }
    out.dedup();
    out
}

/// Curve sequence `L_0..L_d` plus the corner whose two lines are pinned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CornerSpec {
    pub curves: Vec<usize>,
    /// Corner index `c`; lines `L_{c-1}` and `L_c` use their base lifts.
    pub pinned: usize,
}

impl CornerSpec {
    /// Triangles for `mu2(e01, e20)`.
    pub fn mu2_first() -> Self {
        CornerSpec { curves: vec![2, 0, 1], pinned: 2 }
    }
    /// Triangles for `mu2(e20, e12)`.
    pub fn mu2_second() -> Self {
        CornerSpec { curves: vec![1, 2, 0], pinned: 2 }
    }
    /// Quadrilaterals for `mu3(e01, e20, e12)`.
    pub fn mu3() -> Self {
        CornerSpec { curves: vec![3, 2, 0, 1], pinned: 3 }
    }
    pub fn d(&self) -> usize {
        self.curves.len() - 1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Side {
    pub curve: usize,
    pub lift: Vec<i64>,
    /// Signed length in periods of the curve.
    pub lambda: Q,
    pub stars: u32,
}

impl Side {
    pub fn positive(&self) -> bool {
        self.lambda.is_positive()
    }
    pub fn wrap(&self) -> u32 {
        self.lambda.abs().floor().to_integer() as u32
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolygonWitness {
    /// `y_0` (output) then `y_1..y_d`.
    pub corners: Vec<Pt>,
    pub corner_names: Vec<String>,
    /// Side `k` runs from `y_k` to `y_{k+1}` on `L_k`.
    pub sides: Vec<Side>,
    pub wrap: u32,
    /// Number of basepoint translates inside.
    pub m: u64,
    pub s: u32,
    pub q: i64,
    pub r: i64,
    /// `i(y_0) - sum i(y_k) - 2 + d`; zero for a rigid polygon.
    pub degree_defect: i64,
}

impl PolygonWitness {
    /// Family key: the lifts of every side not on a push-off.
    pub fn family(&self, scene: &PolygonScene) -> Vec<Vec<i64>> {
        self.sides
            .iter()
            .filter(|s| scene.curves[s.curve].push_off_of.is_none())
            .map(|s| s.lift.clone())
            .collect()
    }
}

/// `(-1)^{q+r+s}`.
pub fn polygon_sign(w: &PolygonWitness) -> i64 {
    if (w.q + w.r + w.s as i64).rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn strictly_convex_ccw(v: &[Pt]) -> bool {
    let n = v.len();
    (0..n).all(|i| {
        let (a, b) = (v[i], v[(i + 1) % n]);
        (0..n)
            .filter(|&j| j != i && j != (i + 1) % n)
            .all(|j| cross(b.sub(a), v[j].sub(a)).is_positive())
    })
}

fn strictly_inside(v: &[Pt], p: Pt) -> bool {
    let n = v.len();
    (0..n).all(|i| cross(v[(i + 1) % n].sub(v[i]), p.sub(v[i])).is_positive())
}

fn count_between(lo: Q, hi: Q, star: Q) -> u32 {
    let (a, b) = if lo < hi { (lo, hi) } else { (hi, lo) };
    let jmin = (a - star).floor().to_integer() + 1;
    let jmax = (b - star).ceil().to_integer() - 1;
    (jmax - jmin + 1).max(0) as u32
}

fn lattice_points_inside(v: &[Pt], z: Pt) -> u64 {
    let minx = v.iter().map(|p| p.x).min().expect("nonempty");
    let maxx = v.iter().map(|p| p.x).max().expect("nonempty");
    let miny = v.iter().map(|p| p.y).min().expect("nonempty");
    let maxy = v.iter().map(|p| p.y).max().expect("nonempty");
    let mut m = 0;
    for a in (minx - z.x).floor().to_integer()..=(maxx - z.x).ceil().to_integer() {
        for b in (miny - z.y).floor().to_integer()..=(maxy - z.y).ceil().to_integer() {
            if strictly_inside(v, z.add(Pt::int(a, b))) {
                m += 1;
            }
        }
    }
    m
}

fn offset_grid(gens: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..gens {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-bound..=bound).map(move |k| {
                    let mut w = v.clone();
                    w.push(k);
                    w
                })
            })
            .collect();
    }
    out
}

/// All deck classes of convex polygons for `spec` whose sides wrap at most
/// `wrap_bound` times, sorted by wrap then by corners.
pub fn enumerate_polygons(
    scene: &PolygonScene,
    spec: &CornerSpec,
    wrap_bound: u32,
) -> Result<Vec<PolygonWitness>, SceneError> {
    let d = spec.d();
    if d < 2 {
        return Err(SceneError::Invalid("polygons need at least three sides".into()));
    }
    for &c in &spec.curves {
        scene.curve(c)?;
    }
    let n = d + 1;
    let pinned = spec.pinned % n;
    let fixed = [(pinned + n - 1) % n, pinned];
    let bound = wrap_bound as i64 + 2;
    let free: Vec<usize> = (0..n).filter(|k| !fixed.contains(k)).collect();
    let grids: Vec<Vec<Vec<i64>>> = free
        .iter()
        .map(|&k| offset_grid(scene.curves[spec.curves[k]].lift_gens.len(), bound))
        .collect();

    // Cartesian product over the free lines, split on the first for rayon.
    let mut tails: Vec<Vec<Vec<i64>>> = vec![vec![]];
    for g in grids.iter().skip(1) {
        tails = tails
            .into_iter()
            .flat_map(|t| {
                g.iter().map(move |o| {
                    let mut t2 = t.clone();
                    t2.push(o.clone());
                    t2
                })
            })
            .collect();
    }
    let (free, tails, fixed) = (&free, &tails, &fixed);
    let witnesses: Vec<Result<Option<PolygonWitness>, SceneError>> = grids[0]
        .par_iter()
        .flat_map_iter(|first| {
            tails.iter().map(move |tail| {
                let mut offsets: Vec<Vec<i64>> = vec![vec![]; n];
                for &k in fixed {
                    offsets[k] = vec![0; scene.curves[spec.curves[k]].lift_gens.len()];
                }
                offsets[free[0]] = first.clone();
                for (i, o) in tail.iter().enumerate() {
                    offsets[free[i + 1]] = o.clone();
                }
                build_witness(scene, spec, &offsets, wrap_bound)
            })
        })
        .collect();
    let mut out = Vec::new();
    for w in witnesses {
        if let Some(w) = w? {
            out.push(w);
        }
    }
    out.sort_by(|a, b| {
        a.wrap.cmp(&b.wrap).then_with(|| {
            let key = |w: &PolygonWitness| w.corners.iter().map(|p| (p.x, p.y)).collect::<Vec<_>>();
            key(a).cmp(&key(b))
        })
    });
    Ok(out)
}

fn build_witness(
    scene: &PolygonScene,
    spec: &CornerSpec,
    offsets: &[Vec<i64>],
    wrap_bound: u32,
) -> Result<Option<PolygonWitness>, SceneError> {
    let n = spec.curves.len();
    let d = n - 1;
    let curves: Vec<&Curve> = spec.curves.iter().map(|&c| &scene.curves[c]).collect();
    let lines: Vec<Line> = (0..n).map(|k| curves[k].lift(&offsets[k])).collect();
    // Corner k sits between lines k-1 and k; corner 0 between d and 0.
    let mut corners = Vec::with_capacity(n);
    for k in 0..n {
        let (a, b) = ((k + n - 1) % n, k);
        let Some(p) = lines[a].meet(&lines[b]) else {
            return Ok(None);
        };
        // A push-off meets its curve only at the marked crossing.
        for (x, y) in [(a, b), (b, a)] {
            if curves[x].push_off_of == Some(spec.curves[y]) && p != lines[x].p {
                return Ok(None);
            }
        }
        corners.push(p);
    }
    if !strictly_convex_ccw(&corners) {
        return Ok(None);
    }
    let mut sides = Vec::with_capacity(n);
    for k in 0..n {
        let c = curves[k];
        let (a, b) = (corners[k], corners[(k + 1) % n]);
        sides.push(Side {
            curve: spec.curves[k],
            lift: offsets[k].clone(),
            lambda: c.f(b) - c.f(a),
            stars: count_between(c.f(a), c.f(b), c.star),
        });
    }
    let wrap = sides.iter().map(Side::wrap).max().unwrap_or(0);
    if wrap > wrap_bound {
        return Ok(None);
    }
    let grade_in = |k: usize| scene.grading(spec.curves[k - 1], spec.curves[k]);
    let grade_out = scene.grading(spec.curves[0], spec.curves[d])?;
    let mut q = 0;
    if !sides[d].positive() {
        q = grade_out + grade_in(d)?;
    }
    let mut r = 0;
    for k in 1..d {
        if !sides[k].positive() {
            r += grade_in(k)?;
        }
    }
    let mut sum_in = 0;
    for k in 1..=d {
        sum_in += grade_in(k)?;
    }
    let mut corner_names = vec![scene.corner_name(spec.curves[0], spec.curves[d])];
    for k in 1..=d {
        corner_names.push(scene.corner_name(spec.curves[k - 1], spec.curves[k]));
    }
    Ok(Some(PolygonWitness {
        m: lattice_points_inside(&corners, scene.z),
        s: sides.iter().map(|s| s.stars).sum(),
        corners,
        corner_names,
        sides,
        wrap,
        q,
        r,
        degree_defect: grade_out - sum_in - 2 + d as i64,
    }))
}

/// `sum sign(w) U^{m(w)}` truncated at `U^{P(P+1)/2}`.
pub fn signed_series(witnesses: &[PolygonWitness], wrap_bound: u32) -> IntSeries {
    let order = (wrap_bound * (wrap_bound + 1) / 2) as usize;
    let mut c = vec![BigInt::zero(); order + 1];
    for w in witnesses {
        if (w.m as usize) <= order {
            c[w.m as usize] += polygon_sign(w);
        }
    }
    IntSeries::from_coeffs(c)
}

/// Coefficient of `e21` in `mu2(e01, e20)`.
pub fn mu2_series(scene: &PolygonScene, wrap_bound: u32) -> Result<IntSeries, SceneError> {
    Ok(signed_series(&enumerate_polygons(scene, &CornerSpec::mu2_first(), wrap_bound)?, wrap_bound))
}

/// Coefficient of `e10` in `mu2(e20, e12)`.
pub fn mu2_series_second(scene: &PolygonScene, wrap_bound: u32) -> Result<IntSeries, SceneError> {
    Ok(signed_series(&enumerate_polygons(scene, &CornerSpec::mu2_second(), wrap_bound)?, wrap_bound))
}

/// Coefficient of `e_X1` in `mu3(e01, e20, e12)`.
pub fn mu3_series(scene: &PolygonScene, wrap_bound: u32) -> Result<IntSeries, SceneError> {
    Ok(signed_series(&enumerate_polygons(scene, &CornerSpec::mu3(), wrap_bound)?, wrap_bound))
}

/// Per wrap band: the multiplicity of each family (sorted descending).
pub fn family_counts(scene: &PolygonScene, witnesses: &[PolygonWitness]) -> BTreeMap<u32, Vec<usize>> {
    let mut fams: BTreeMap<u32, BTreeMap<Vec<Vec<i64>>, usize>> = BTreeMap::new();
    for w in witnesses {
        *fams.entry(w.wrap).or_default().entry(w.family(scene)).or_default() += 1;
    }
    fams.into_iter()
        .map(|(band, f)| {
            let mut counts: Vec<usize> = f.into_values().collect();
            counts.sort_unstable_by(|a, b| b.cmp(a));
            (band, counts)
        })
        .collect()
}

impl fmt::Display for PolygonWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let corners: Vec<String> = self
            .corner_names
            .iter()
            .zip(&self.corners)
            .map(|(n, p)| format!("{n}@{p}"))
            .collect();
        write!(
            f,
            "wrap {} m {} q {} r {} s {} sign {:+} | {}",
            self.wrap,
            self.m,
            self.q,
            self.r,
            self.s,
            polygon_sign(self),
            corners.join(" ")
        )
    }
}

fn to_f64(x: Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// Static SVG of the lifted witnesses over `[-w, w]^2`.
pub fn witnesses_svg(scene: &PolygonScene, witnesses: &[PolygonWitness], half_width: i64) -> String {
    const PX: f64 = 48.0;
    let w = half_width as f64;
    let size = 2.0 * w * PX;
    let sx = |x: Q| (to_f64(x) + w) * PX;
    let sy = |y: Q| (w - to_f64(y)) * PX;
    let colors = ["#c0392b", "#27ae60", "#8e44ad", "#d35400", "#2980b9", "#7f8c8d"];
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(out, r##"<rect width="{size}" height="{size}" fill="#fdfdf8"/>"##);
    for (ci, c) in scene.closed_curves() {
        let g = c.lift_gens[0];
        for k in -3 * half_width..=3 * half_width {
            let p = c.point.add(g.scale(Q::from_integer(k)));
            let t = Q::from_integer(4 * half_width);
            let (a, b) = (p.sub(c.dir.scale(t)), p.add(c.dir.scale(t)));
            let _ = writeln!(
                out,
                r##"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="#333" stroke-width="1" class="g{ci}"/>"##,
                sx(a.x),
                sy(a.y),
                sx(b.x),
                sy(b.y)
            );
        }
    }
    for (i, wit) in witnesses.iter().enumerate() {
        let pts: Vec<String> = wit.corners.iter().map(|p| format!("{:.1},{:.1}", sx(p.x), sy(p.y))).collect();
        let col = colors[i % colors.len()];
        let _ = writeln!(
            out,
            r#"<polygon points="{}" fill="{col}" fill-opacity="0.25" stroke="{col}" stroke-width="2"><title>{}</title></polygon>"#,
            pts.join(" "),
            wit
        );
    }
    for a in -half_width - 1..=half_width {
        for b in -half_width - 1..=half_width {
            let p = scene.z.add(Pt::int(a, b));
            let _ = writeln!(out, r#"<circle cx="{:.1}" cy="{:.1}" r="3" fill="black"/>"#, sx(p.x), sy(p.y));
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::useries::{partition_series, theta_v};

    #[test]
    fn preset_is_valid() {
        let s = preset_scene();
        s.validate().unwrap();
        assert_eq!((s.pairing(0, 1).unwrap(), s.pairing(1, 2).unwrap(), s.pairing(2, 0).unwrap()), (1, 1, 1));
        assert_eq!(s.torus_intersections(0, 1).unwrap(), vec![Pt::int(0, 0)]);
        assert_eq!(s.face_of(s.z).len(), 6);
    }

    #[test]
    fn scene_text_round_trip() {
        let s = preset_scene();
        assert_eq!(PolygonScene::parse(&s.to_text()).unwrap(), s);
    }

    #[test]
    fn small_triangles() {
        let s = preset_scene();
        let ws = enumerate_polygons(&s, &CornerSpec::mu2_first(), 0).unwrap();
        assert_eq!(ws.len(), 2);
        assert!(ws.iter().all(|w| w.m == 0 && w.degree_defect == 0));
        let signs: Vec<i64> = ws.iter().map(polygon_sign).collect();
        assert_eq!(signs.iter().sum::<i64>(), 0);
        // The triangle traversing every arc along its orientation has one star.
        let along = ws.iter().find(|w| w.sides.iter().all(Side::positive)).unwrap();
        assert_eq!((along.q, along.r, along.s, polygon_sign(along)), (0, 0, 1, -1));
    }

    #[test]
    fn series_identities() {
        let s = preset_scene();
        assert!(mu2_series(&s, 4).unwrap().is_zero());
        assert!(mu2_series_second(&s, 4).unwrap().is_zero());
        let mu3 = mu3_series(&s, 4).unwrap();
        assert_eq!(mu3, theta_v(10).neg());
        let id = partition_series(10).pow(3).mul(&mu3).unwrap().neg();
        assert!(id.is_one());
    }

    #[test]
    fn quadrilateral_families() {
        let s = preset_scene();
        let ws = enumerate_polygons(&s, &CornerSpec::mu3(), 3).unwrap();
        assert!(ws.iter().all(|w| w.degree_defect == 0));
        let fams = family_counts(&s, &ws);
        assert_eq!(fams[&0], vec![1]);
        for p in 1..=3usize {
            assert_eq!(fams[&(p as u32)], vec![p + 1, p]);
        }
    }
}
