//! Coordinatization of a projective plane by a planar ternary ring.
//!
//! Frame convention: `origin` O, `x_ideal` X and `y_ideal` Y, `unit` I. The
//! line XY is the line at infinity. The points of OI other than its ideal
//! point are labeled `0..d`, with O labeled 0 and I labeled 1. An affine
//! point P gets coordinates `(x, y)` where `x` labels `PY ∩ OI` and `y`
//! labels `PX ∩ OI`. The ideal point `(m)` is where the line through O and
//! `(1, m)` meets XY, and `T(x, m, b)` is the `y` with `(x, y)` on the line
//! joining `(m)` and `(0, b)`.

use serde::Serialize;

use super::Plane;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Frame {
    pub origin: u32,
    pub x_ideal: u32,
    pub y_ideal: u32,
    pub unit: u32,
}

impl Frame {
    pub fn from_quad(quad: [usize; 4]) -> Frame {
        Frame { origin: quad[0] as u32, x_ideal: quad[1] as u32, y_ideal: quad[2] as u32, unit: quad[3] as u32 }
    }

    pub fn points(&self) -> [usize; 4] {
        [self.origin, self.x_ideal, self.y_ideal, self.unit].map(|p| p as usize)
    }
}

/// How the affine points of the unit line OI receive labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Labeling {
    /// O gets 0, I gets 1, the rest follow in increasing point index.
    PointOrder,
    /// The points of OI (without its ideal point) in label order.
    Explicit(Vec<u32>),
}

/// A ternary operation `T(x, m, b)` on `0..d`, with 0 and 1 as the
/// distinguished elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TernaryRing {
    order: usize,
    table: Vec<u32>,
}

impl TernaryRing {
    /// `table[(x d + m) d + b] = T(x, m, b)`; the planar ternary ring axioms
    /// are checked before returning.
    pub fn from_table(order: usize, table: Vec<u32>) -> Result<TernaryRing> {
        if table.len() != order * order * order || table.iter().any(|&v| v as usize >= order) {
            return Err(Error::InvalidArgument("ternary table has the wrong shape".into()));
        }
        let t = TernaryRing { order, table };
        t.check_axioms().map_err(Error::AxiomFailure)?;
        Ok(t)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn t(&self, x: usize, m: usize, b: usize) -> usize {
        self.table[(x * self.order + m) * self.order + b] as usize
    }

    /// `a + b := T(a, 1, b)`.
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.t(a, 1, b)
    }

    /// `a · b := T(a, b, 0)`.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.t(a, b, 0)
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    /// Exhaustive scan of the four planar ternary ring axioms.
    pub fn check_axioms(&self) -> std::result::Result<(), String> {
        let d = self.order;
        for a in 0..d {
            for c in 0..d {
                if self.t(a, 0, c) != c || self.t(0, a, c) != c {
                    return Err(format!("identity law fails: T({a},0,{c}) or T(0,{a},{c}) != {c}"));
                }
            }
            if self.t(a, 1, 0) != a || self.t(1, a, 0) != a {
                return Err(format!("unit law fails at {a}"));
            }
        }
        let mut seen = vec![0u32; d];
        for a in 0..d {
            for b in 0..d {
                seen.iter_mut().for_each(|s| *s = 0);
                for x in 0..d {
                    seen[self.t(a, b, x)] += 1;
                }
                if let Some(c) = seen.iter().position(|&s| s != 1) {
                    return Err(format!("T({a},{b},x) = {c} is not uniquely solvable"));
                }
            }
        }
        for a in 0..d {
            for a2 in (0..d).filter(|&a2| a2 != a) {
                for b in 0..d {
                    for b2 in 0..d {
                        let n = (0..d).filter(|&x| self.t(x, a, b) == self.t(x, a2, b2)).count();
                        if n != 1 {
                            return Err(format!("T(x,{a},{b}) = T(x,{a2},{b2}) has {n} solutions"));
                        }
                    }
                }
            }
        }
        let mut hits = vec![0u32; d * d];
        for x in 0..d {
            for x2 in (0..d).filter(|&x2| x2 != x) {
                hits.iter_mut().for_each(|h| *h = 0);
                for a in 0..d {
                    for b in 0..d {
                        hits[self.t(x, a, b) * d + self.t(x2, a, b)] += 1;
                    }
                }
                if let Some(k) = hits.iter().position(|&h| h != 1) {
                    return Err(format!(
                        "T({x},a,b) = {}, T({x2},a,b) = {} does not have a unique solution",
                        k / d,
                        k % d
                    ));
                }
            }
        }
        Ok(())
    }
}

fn lookup(plane: &Plane, f: impl FnOnce(&Plane) -> Option<usize>, what: &str) -> Result<usize> {
    f(plane).ok_or_else(|| Error::CoordinatizationFailure(what.to_string()))
}

/// Coordinatizes `plane` with respect to the frame and reads off `T`.
pub fn extract_ternary_ring(plane: &Plane, frame: Frame, labeling: &Labeling) -> Result<TernaryRing> {
    let quad = frame.points();
    for &p in &quad {
        plane.check_point(p)?;
    }
    let [o, x, y, i] = quad;
    let distinct = (0..4).all(|a| (a + 1..4).all(|b| quad[a] != quad[b]));
    let no_three = distinct
        && !plane.collinear(o, x, y)
        && !plane.collinear(o, x, i)
        && !plane.collinear(o, y, i)
        && !plane.collinear(x, y, i);
    if !no_three {
        return Err(Error::NotAQuadrilateral(quad));
    }
    let d = plane.order();
    let infinity = lookup(plane, |p| p.join(x, y), "X and Y have no join")?;
    let unit_line = lookup(plane, |p| p.join(o, i), "O and I have no join")?;
    let e = lookup(plane, |p| p.meet(unit_line, infinity), "OI misses the line at infinity")?;

    let labels: Vec<usize> = match labeling {
        Labeling::PointOrder => {
            let mut rest: Vec<usize> =
                plane.line(unit_line).iter().map(|&p| p as usize).filter(|&p| p != o && p != i && p != e).collect();
            rest.sort_unstable();
            [o, i].into_iter().chain(rest).collect()
        }
        Labeling::Explicit(pts) => pts.iter().map(|&p| p as usize).collect(),
    };
    let mut label_of = vec![usize::MAX; plane.num_points()];
    for (k, &p) in labels.iter().enumerate() {
        plane.check_point(p)?;
        label_of[p] = k;
    }
    let on_unit_line = labels.iter().all(|&p| p != e && plane.on_line(p, unit_line));
    if labels.len() != d
        || labels[0] != o
        || labels[1] != i
        || !on_unit_line
        || label_of.iter().filter(|&&l| l != usize::MAX).count() != d
    {
        return Err(Error::InvalidArgument("labeling must list the d affine points of OI starting with O, I".into()));
    }

    let mut point_at = vec![usize::MAX; d * d];
    for p in 0..plane.num_points() {
        if plane.on_line(p, infinity) {
            continue;
        }
        let coord = |ideal: usize| -> Result<usize> {
            let l = lookup(plane, |pl| pl.join(p, ideal), "missing join")?;
            let m = lookup(plane, |pl| pl.meet(l, unit_line), "missing meet")?;
            Ok(label_of[m])
        };
        let (cx, cy) = (coord(y)?, coord(x)?);
        if cx == usize::MAX || cy == usize::MAX || point_at[cx * d + cy] != usize::MAX {
            return Err(Error::CoordinatizationFailure(format!("point {p} has no unique coordinates")));
        }
        point_at[cx * d + cy] = p;
    }
    if point_at.contains(&usize::MAX) {
        return Err(Error::CoordinatizationFailure("affine coordinates are not a bijection".into()));
    }
    let slope_point = |m: usize| -> Result<usize> {
        let l = lookup(plane, |pl| pl.join(o, point_at[d + m]), "missing join")?;
        lookup(plane, |pl| pl.meet(l, infinity), "missing meet")
    };
    let mut table = vec![0u32; d * d * d];
    for m in 0..d {
        let ideal_m = slope_point(m)?;
        for b in 0..d {
            let line = lookup(plane, |pl| pl.join(ideal_m, point_at[b]), "missing join")?;
            for xc in 0..d {
                let vertical = lookup(plane, |pl| pl.join(point_at[xc * d], y), "missing join")?;
                let p = lookup(plane, |pl| pl.meet(line, vertical), "missing meet")?;
                let yc = (0..d)
                    .find(|&yc| point_at[xc * d + yc] == p)
                    .ok_or_else(|| Error::CoordinatizationFailure(format!("point {p} is not affine")))?;
                table[(xc * d + m) * d + b] = yc as u32;
            }
        }
    }
    TernaryRing::from_table(d, table).map_err(|e| match e {
        Error::AxiomFailure(msg) => Error::CoordinatizationFailure(msg),
        other => other,
    })
}

/// Algebraic profile of a ternary ring, each entry decided by exhaustive scan.
/// `None` means the property holds; `Some` carries a failing tuple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PtrProfile {
    pub order: usize,
    pub linear: Option<[usize; 3]>,
    pub additive_associative: Option<[usize; 3]>,
    pub additive_commutative: Option<[usize; 2]>,
    pub multiplicative_associative: Option<[usize; 3]>,
    pub multiplicative_commutative: Option<[usize; 2]>,
    pub left_distributive: Option<[usize; 3]>,
    pub right_distributive: Option<[usize; 3]>,
}

impl PtrProfile {
    pub fn is_field(&self) -> bool {
        self.linear.is_none()
            && self.additive_associative.is_none()
            && self.additive_commutative.is_none()
            && self.multiplicative_associative.is_none()
            && self.multiplicative_commutative.is_none()
            && self.left_distributive.is_none()
            && self.right_distributive.is_none()
    }

    pub fn rows(&self) -> Vec<(&'static str, bool)> {
        vec![
            ("linear", self.linear.is_none()),
            ("addition associative", self.additive_associative.is_none()),
            ("addition commutative", self.additive_commutative.is_none()),
            ("multiplication associative", self.multiplicative_associative.is_none()),
            ("multiplication commutative", self.multiplicative_commutative.is_none()),
            ("left distributive", self.left_distributive.is_none()),
            ("right distributive", self.right_distributive.is_none()),
        ]
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("ternary ring of order {}\n", self.order);
        for (name, ok) in self.rows() {
            s.push_str(&format!("  {name:<28} {}\n", if ok { "yes" } else { "no" }));
        }
        s.push_str(&format!("  field: {}\n", if self.is_field() { "yes" } else { "no" }));
        s
    }
}

fn find3(d: usize, pred: impl Fn(usize, usize, usize) -> bool) -> Option<[usize; 3]> {
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                if !pred(a, b, c) {
                    return Some([a, b, c]);
                }
            }
        }
    }
    None
}

fn find2(d: usize, pred: impl Fn(usize, usize) -> bool) -> Option<[usize; 2]> {
    (0..d).flat_map(|a| (0..d).map(move |b| [a, b])).find(|&[a, b]| !pred(a, b))
}

pub fn ptr_properties(t: &TernaryRing) -> PtrProfile {
    let d = t.order();
    PtrProfile {
        order: d,
        linear: find3(d, |a, b, c| t.t(a, b, c) == t.add(t.mul(a, b), c)),
        additive_associative: find3(d, |a, b, c| t.add(t.add(a, b), c) == t.add(a, t.add(b, c))),
        additive_commutative: find2(d, |a, b| t.add(a, b) == t.add(b, a)),
        multiplicative_associative: find3(d, |a, b, c| t.mul(t.mul(a, b), c) == t.mul(a, t.mul(b, c))),
        multiplicative_commutative: find2(d, |a, b| t.mul(a, b) == t.mul(b, a)),
        left_distributive: find3(d, |a, b, c| t.mul(a, t.add(b, c)) == t.add(t.mul(a, b), t.mul(a, c))),
        right_distributive: find3(d, |a, b, c| t.mul(t.add(a, b), c) == t.add(t.mul(a, c), t.mul(b, c))),
    }
}
