//! Finite projective planes as incidence structures.
//!
//! A [`Plane`] stores its lines as sorted point lists together with the
//! derived point-to-line lists, line bit masks and full join/meet tables.
//! Construction never assumes the plane axioms; [`verify_plane_axioms`]
//! checks them exhaustively and reports witnesses.

mod desargues;
mod io;
mod quasifield;
mod ternary;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::galois::{Elem, Field, FieldSpec};

pub use desargues::{
    find_desargues_violation, verify_desargues_certificate, DesarguesCertificate, DesarguesMode, DesarguesOutcome,
    DesarguesSearch,
};
pub use io::{load_plane, parse_plane, save_plane, write_plane};
pub use quasifield::{nearfield9, quasifield_plane, Quasifield, QuasifieldReport};
pub use ternary::{extract_ternary_ring, ptr_properties, Frame, Labeling, PtrProfile, TernaryRing};

/// Largest order accepted by the built-in constructions.
pub const MAX_BUILTIN_ORDER: usize = 32;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlaneKind {
    Desarguesian(FieldSpec),
    Quasifield(String),
    Imported,
}

/// Homogeneous coordinates, canonical when the first nonzero entry is 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint(pub [Elem; 3]);

impl ProjPoint {
    /// Scales so the first nonzero coordinate is 1; `None` for the zero vector.
    pub fn canonical(field: &Field, z: [Elem; 3]) -> Option<ProjPoint> {
        let lead = z.iter().copied().find(|e| !e.is_zero())?;
        let inv = field.inv(lead).ok()?;
        Some(ProjPoint(z.map(|e| field.mul(e, inv))))
    }
}

/// Coordinates carried by planes built from a field.
#[derive(Debug, Clone)]
pub struct Coordinates {
    pub field: Arc<Field>,
    pub points: Vec<ProjPoint>,
    pub lines: Vec<ProjPoint>,
}

impl Coordinates {
    fn index_of(q: usize, z: &ProjPoint) -> usize {
        let [a, b, c] = z.0.map(|e| e.idx());
        match (a, b) {
            (0, 0) => 0,
            (0, _) => 1 + c,
            _ => 1 + q + b * q + c,
        }
    }

    /// Index of the point with the given (not necessarily canonical) coordinates.
    pub fn point_index(&self, z: [Elem; 3]) -> Option<usize> {
        let c = ProjPoint::canonical(&self.field, z)?;
        Some(Self::index_of(self.field.order(), &c))
    }

    pub fn line_index(&self, z: [Elem; 3]) -> Option<usize> {
        self.point_index(z)
    }

    /// `a z1 + b z2 + c z3` for the line `[a, b, c]`.
    pub fn incident(&self, point: usize, line: usize) -> bool {
        let f = &self.field;
        let p = self.points[point].0;
        let l = self.lines[line].0;
        let s = f.add(f.add(f.mul(p[0], l[0]), f.mul(p[1], l[1])), f.mul(p[2], l[2]));
        s.is_zero()
    }
}

#[derive(Clone)]
pub struct Plane {
    name: String,
    order: usize,
    kind: PlaneKind,
    lines: Vec<Vec<u32>>,
    point_lines: Vec<Vec<u32>>,
    line_masks: Vec<Bits>,
    join: Vec<u32>,
    meet: Vec<u32>,
    coords: Option<Coordinates>,
    frame: Option<(Frame, Vec<u32>)>,
}

impl fmt::Debug for Plane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Plane")
            .field("name", &self.name)
            .field("order", &self.order)
            .field("kind", &self.kind)
            .field("lines", &self.lines.len())
            .finish()
    }
}

impl PartialEq for Plane {
    /// Equal incidence: same order and identical line lists.
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.lines == other.lines
    }
}

impl Plane {
    /// Builds the incidence structure without checking the plane axioms.
    /// Point indices must lie in `0..order^2 + order + 1`.
    pub fn from_lines(name: impl Into<String>, order: usize, lines: Vec<Vec<u32>>, kind: PlaneKind) -> Result<Plane> {
        if order < 2 {
            return Err(Error::InvalidArgument(format!("plane order {order} < 2")));
        }
        let npoints = order * order + order + 1;
        let mut lines = lines;
        for l in lines.iter_mut() {
            l.sort_unstable();
            l.dedup();
            if let Some(&bad) = l.iter().find(|&&p| p as usize >= npoints) {
                return Err(Error::UnknownPoint(bad as usize));
            }
        }
        let mut point_lines = vec![Vec::new(); npoints];
        for (li, l) in lines.iter().enumerate() {
            for &p in l {
                point_lines[p as usize].push(li as u32);
            }
        }
        let line_masks = lines.iter().map(|l| Bits::from_indices(npoints, l.iter().map(|&p| p as usize))).collect();
        let mut join = vec![NONE; npoints * npoints];
        for (li, l) in lines.iter().enumerate() {
            for &a in l {
                for &b in l {
                    let slot = &mut join[a as usize * npoints + b as usize];
                    if *slot == NONE && a != b {
                        *slot = li as u32;
                    }
                }
            }
        }
        let nlines = lines.len();
        let mut meet = vec![NONE; nlines * nlines];
        for (p, pl) in point_lines.iter().enumerate() {
            for &a in pl {
                for &b in pl {
                    let slot = &mut meet[a as usize * nlines + b as usize];
                    if *slot == NONE && a != b {
                        *slot = p as u32;
                    }
                }
            }
        }
        Ok(Plane {
            name: name.into(),
            order,
            kind,
            lines,
            point_lines,
            line_masks,
            join,
            meet,
            coords: None,
            frame: None,
        })
    }

    /// Like [`Plane::from_lines`] but fails with `AxiomFailure` unless every
    /// plane axiom holds.
    pub fn checked(name: impl Into<String>, order: usize, lines: Vec<Vec<u32>>, kind: PlaneKind) -> Result<Plane> {
        let plane = Plane::from_lines(name, order, lines, kind)?;
        let report = verify_plane_axioms(&plane);
        match report.first_failure() {
            None => Ok(plane),
            Some(c) => Err(Error::AxiomFailure(format!("{}: {}", c.axiom, c.witness.clone().unwrap_or_default()))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn kind(&self) -> &PlaneKind {
        &self.kind
    }

    pub fn num_points(&self) -> usize {
        self.point_lines.len()
    }

    pub fn num_lines(&self) -> usize {
        self.lines.len()
    }

    pub fn line(&self, l: usize) -> &[u32] {
        &self.lines[l]
    }

    pub fn lines(&self) -> &[Vec<u32>] {
        &self.lines
    }

    pub fn lines_through(&self, p: usize) -> &[u32] {
        &self.point_lines[p]
    }

    pub fn line_mask(&self, l: usize) -> &Bits {
        &self.line_masks[l]
    }

    pub fn on_line(&self, p: usize, l: usize) -> bool {
        self.line_masks[l].get(p)
    }

    /// The line through two distinct points (first one found on a non-plane).
    #[inline]
    pub fn join(&self, a: usize, b: usize) -> Option<usize> {
        let l = self.join[a * self.num_points() + b];
        (l != NONE).then_some(l as usize)
    }

    #[inline]
    pub fn meet(&self, l: usize, m: usize) -> Option<usize> {
        let p = self.meet[l * self.num_lines() + m];
        (p != NONE).then_some(p as usize)
    }

    pub fn collinear(&self, a: usize, b: usize, c: usize) -> bool {
        if a == b || a == c || b == c {
            return true;
        }
        self.join(a, b).is_some_and(|l| self.on_line(c, l))
    }

    pub fn coordinates(&self) -> Option<&Coordinates> {
        self.coords.as_ref()
    }

    pub fn field(&self) -> Option<&Arc<Field>> {
        self.coords.as_ref().map(|c| &c.field)
    }

    /// The built-in coordinate frame and labeling of the unit line, if any.
    pub fn standard_frame(&self) -> Option<(Frame, Labeling)> {
        self.frame.as_ref().map(|(f, l)| (*f, Labeling::Explicit(l.clone())))
    }

    pub fn check_point(&self, p: usize) -> Result<()> {
        if p < self.num_points() {
            Ok(())
        } else {
            Err(Error::UnknownPoint(p))
        }
    }

    /// Text description for reports and certificates.
    pub fn describe(&self) -> String {
        match &self.kind {
            PlaneKind::Desarguesian(spec) => format!("{} over {}", self.name, spec),
            PlaneKind::Quasifield(tag) => format!("{} from quasifield {}", self.name, tag),
            PlaneKind::Imported => format!("{} (imported)", self.name),
        }
    }
}

/// PG(2,q): points and lines are canonical coordinate triples in
/// lexicographic order.
pub fn pg2(field: Arc<Field>) -> Result<Plane> {
    let q = field.order();
    if q > MAX_BUILTIN_ORDER {
        return Err(Error::OrderTooLarge { order: q as u64, max: MAX_BUILTIN_ORDER as u64 });
    }
    let mut points = Vec::with_capacity(q * q + q + 1);
    points.push(ProjPoint([Elem::ZERO, Elem::ZERO, Elem::ONE]));
    for c in field.elements() {
        points.push(ProjPoint([Elem::ZERO, Elem::ONE, c]));
    }
    for b in field.elements() {
        for c in field.elements() {
            points.push(ProjPoint([Elem::ONE, b, c]));
        }
    }
    let coords = Coordinates { field: field.clone(), lines: points.clone(), points };
    let lines: Vec<Vec<u32>> = (0..coords.lines.len())
        .map(|l| (0..coords.points.len()).filter(|&p| coords.incident(p, l)).map(|p| p as u32).collect())
        .collect();
    let name = format!("PG(2,{q})");
    let mut plane = Plane::from_lines(name, q, lines, PlaneKind::Desarguesian(field.spec().clone()))?;
    let idx = |z: [Elem; 3]| coords.point_index(z).expect("nonzero") as u32;
    let (o, x, y, i) = (
        idx([Elem::ZERO, Elem::ZERO, Elem::ONE]),
        idx([Elem::ONE, Elem::ZERO, Elem::ZERO]),
        idx([Elem::ZERO, Elem::ONE, Elem::ZERO]),
        idx([Elem::ONE, Elem::ONE, Elem::ONE]),
    );
    let labels = field.elements().map(|t| idx([t, t, Elem::ONE])).collect();
    plane.frame = Some((Frame { origin: o, x_ideal: x, y_ideal: y, unit: i }, labels));
    plane.coords = Some(coords);
    Ok(plane)
}

/// Convenience: PG(2,q) over the default field of order `q`.
pub fn pg2_order(q: u64) -> Result<Plane> {
    if q > MAX_BUILTIN_ORDER as u64 {
        return Err(Error::OrderTooLarge { order: q, max: MAX_BUILTIN_ORDER as u64 });
    }
    pg2(Arc::new(Field::of_order(q)?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub axiom: &'static str,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub plane: String,
    pub order: usize,
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn check(&self, axiom: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("plane {} order {}\n", self.plane, self.order);
        for c in &self.checks {
            s.push_str(&format!("  [{}] {}", if c.passed { "pass" } else { "FAIL" }, c.axiom));
            if let Some(w) = &c.witness {
                s.push_str(&format!(" -- {w}"));
            }
            s.push('\n');
        }
        s
    }
}

pub const AX_POINT_COUNT: &str = "point count";
pub const AX_LINE_COUNT: &str = "line count";
pub const AX_LINE_SIZE: &str = "points per line";
pub const AX_POINT_DEGREE: &str = "lines per point";
pub const AX_TWO_POINTS: &str = "two points on one line";
pub const AX_TWO_LINES: &str = "two lines meet in one point";
pub const AX_QUADRILATERAL: &str = "quadrilateral exists";

/// For every `a`, counts how many members of `groups` contain both `a` and
/// each other element; returns the first pair with a count other than 1.
fn unique_pair_violation(sets_of: &[Vec<u32>], members: &[Vec<u32>], n: usize) -> Option<(usize, usize, usize)> {
    let mut cnt = vec![0u32; n];
    for (a, sets) in sets_of.iter().enumerate().take(n) {
        cnt.iter_mut().for_each(|c| *c = 0);
        for &s in sets {
            for &b in &members[s as usize] {
                cnt[b as usize] += 1;
            }
        }
        if let Some(b) = (0..n).find(|&b| b != a && cnt[b] != 1) {
            return Some((a, b, cnt[b] as usize));
        }
    }
    None
}

pub fn verify_plane_axioms(plane: &Plane) -> AxiomReport {
    let d = plane.order;
    let n = d * d + d + 1;
    let mut checks = Vec::new();
    let mut push =
        |axiom, witness: Option<String>| checks.push(AxiomCheck { axiom, passed: witness.is_none(), witness });

    let used = plane.point_lines.iter().filter(|pl| !pl.is_empty()).count();
    push(AX_POINT_COUNT, (used != n).then(|| format!("{used} points are incident with some line, expected {n}")));
    let nl = plane.lines.len();
    push(AX_LINE_COUNT, (nl != n).then(|| format!("{nl} lines, expected {n}")));
    push(
        AX_LINE_SIZE,
        plane
            .lines
            .iter()
            .position(|l| l.len() != d + 1)
            .map(|i| format!("line {i} has {} points", plane.lines[i].len())),
    );
    push(
        AX_POINT_DEGREE,
        plane
            .point_lines
            .iter()
            .position(|l| l.len() != d + 1)
            .map(|i| format!("point {i} lies on {} lines", plane.point_lines[i].len())),
    );
    push(
        AX_TWO_POINTS,
        unique_pair_violation(&plane.point_lines, &plane.lines, n)
            .map(|(a, b, c)| format!("points {a} and {b} share {c} lines")),
    );
    push(
        AX_TWO_LINES,
        unique_pair_violation(&plane.lines, &plane.point_lines, nl)
            .map(|(a, b, c)| format!("lines {a} and {b} share {c} points")),
    );
    let quad = find_quadrilateral(plane);
    push(AX_QUADRILATERAL, quad.is_none().then(|| "no four points with no three collinear".to_string()));
    AxiomReport { plane: plane.name.clone(), order: d, checks }
}

/// The lexicographically least quadrilateral, if one exists.
pub fn find_quadrilateral(plane: &Plane) -> Option<[usize; 4]> {
    let n = plane.num_points();
    let ok = |a: usize, b: usize, c: usize| !plane.collinear(a, b, c);
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if !ok(a, b, c) {
                    continue;
                }
                if let Some(e) = (c + 1..n).find(|&e| ok(a, b, e) && ok(a, c, e) && ok(b, c, e)) {
                    return Some([a, b, c, e]);
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fano_plane() {
        let p = pg2_order(2).unwrap();
        assert_eq!(p.num_points(), 7);
        assert_eq!(p.num_lines(), 7);
        assert!(p.lines().iter().all(|l| l.len() == 3));
        assert!(verify_plane_axioms(&p).passed());
    }

    #[test]
    fn counting_laws() {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            let p = pg2_order(q).unwrap();
            let q = q as usize;
            assert_eq!(p.num_points(), q * q + q + 1);
            assert!((0..p.num_points()).all(|x| p.lines_through(x).len() == q + 1));
            assert!(verify_plane_axioms(&p).passed(), "PG(2,{q})");
        }
    }

    #[test]
    fn order_cap() {
        assert!(matches!(pg2_order(37), Err(Error::OrderTooLarge { .. })));
        assert!(pg2_order(32).is_ok());
    }

    #[test]
    fn coordinates_index_round_trip() {
        let p = pg2_order(4).unwrap();
        let c = p.coordinates().unwrap();
        for (i, z) in c.points.iter().enumerate() {
            assert_eq!(c.point_index(z.0), Some(i));
        }
        // points are in lexicographic order of canonical coordinates
        assert!(c.points.windows(2).all(|w| w[0] < w[1]));
        let f = &c.field;
        let scaled = c.points[7].0.map(|e| f.mul(e, Elem(3)));
        assert_eq!(c.point_index(scaled), Some(7));
    }

    #[test]
    fn deleting_a_line_breaks_two_point_axiom() {
        let p = pg2_order(3).unwrap();
        let mut lines = p.lines().to_vec();
        let gone = lines.remove(4);
        let broken = Plane::from_lines("broken", 3, lines, PlaneKind::Imported).unwrap();
        let r = verify_plane_axioms(&broken);
        assert!(!r.passed());
        let c = r.check(AX_TWO_POINTS).unwrap();
        assert!(!c.passed);
        let w = c.witness.as_ref().unwrap();
        assert!(w.contains("share 0 lines"), "{w}");
        let pts: Vec<usize> = w.split_whitespace().filter_map(|t| t.parse().ok()).take(2).collect();
        assert!(gone.contains(&(pts[0] as u32)) && gone.contains(&(pts[1] as u32)));
        assert!(matches!(
            Plane::checked("broken", 3, broken.lines().to_vec(), PlaneKind::Imported),
            Err(Error::AxiomFailure(_))
        ));
    }

    #[test]
    fn out_of_range_point_rejected() {
        assert_eq!(
            Plane::from_lines("x", 2, vec![vec![0, 1, 9]], PlaneKind::Imported).unwrap_err(),
            Error::UnknownPoint(9)
        );
    }
}
