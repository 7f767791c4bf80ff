//! Arcs, ovals and hyperovals: k-point sets with no three points collinear.

mod classify;
mod conic;
mod irregular;
mod search;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::galois::Elem;
use crate::plane::Plane;

pub use classify::{classify_oval, classify_oval_by_fit, ClassifiedOval, OvalClass};
pub use conic::{canonical_conic, canonical_conic_points, conic_solutions, det3, fit_conic_5pts, monomials, Conic};
pub use irregular::{interpolate, search_o_permutations, HyperovalSearch, OPermutationOutcome};
pub use search::{search_ovals, ClassCounts, OvalCensus, SearchMode, SearchOptions, SearchStatus};

/// A sorted set of point indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct KArc {
    points: Vec<usize>,
}

impl KArc {
    /// Sorts and deduplicates; does not check the arc property.
    pub fn from_points(mut points: Vec<usize>) -> KArc {
        points.sort_unstable();
        points.dedup();
        KArc { points }
    }

    /// Only accepts sets with no three collinear points.
    pub fn new(plane: &Plane, points: Vec<usize>) -> Result<KArc> {
        let arc = KArc::from_points(points);
        match is_arc(plane, &arc.points)?.witness {
            None => Ok(arc),
            Some(w) => Err(Error::InvalidArgument(format!("collinear triple {w:?}"))),
        }
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: usize) -> bool {
        self.points.binary_search(&p).is_ok()
    }
}

/// Outcome of an arc test; `witness` is a collinear triple on failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ArcCheck {
    pub witness: Option<[usize; 3]>,
}

impl ArcCheck {
    pub fn is_arc(&self) -> bool {
        self.witness.is_none()
    }
}

fn check_points(plane: &Plane, pts: &[usize]) -> Result<Vec<usize>> {
    for &p in pts {
        plane.check_point(p)?;
    }
    let mut v = pts.to_vec();
    v.sort_unstable();
    v.dedup();
    Ok(v)
}

/// Arc test by incidence: each pair's joining line is claimed at most once.
pub fn is_arc_by_incidence(plane: &Plane, pts: &[usize]) -> Result<ArcCheck> {
    let pts = check_points(plane, pts)?;
    let mut owner: Vec<Option<(usize, usize)>> = vec![None; plane.num_lines()];
    for (i, &a) in pts.iter().enumerate() {
        for &b in &pts[i + 1..] {
            let Some(l) = plane.join(a, b) else { continue };
            if let Some((x, y)) = owner[l] {
                let third = if x != a && x != b { x } else { y };
                let mut w = [a, b, third];
                w.sort_unstable();
                return Ok(ArcCheck { witness: Some(w) });
            }
            owner[l] = Some((a, b));
        }
    }
    Ok(ArcCheck { witness: None })
}

/// Arc test by coordinates: a triple is collinear iff the determinant of
/// its coordinate rows vanishes. Needs a plane built from a field.
pub fn is_arc_by_determinant(plane: &Plane, pts: &[usize]) -> Result<ArcCheck> {
    let c = plane.coordinates().ok_or(Error::NotDesarguesian)?;
    let pts = check_points(plane, pts)?;
    let f = &*c.field;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            for k in j + 1..pts.len() {
                let m = [c.points[pts[i]].0, c.points[pts[j]].0, c.points[pts[k]].0];
                if det3(f, m).is_zero() {
                    return Ok(ArcCheck { witness: Some([pts[i], pts[j], pts[k]]) });
                }
            }
        }
    }
    Ok(ArcCheck { witness: None })
}

/// True iff no three points are collinear. Planes with coordinates are
/// checked both by determinant and by incidence.
pub fn is_arc(plane: &Plane, pts: &[usize]) -> Result<ArcCheck> {
    let by_incidence = is_arc_by_incidence(plane, pts)?;
    if plane.coordinates().is_some() {
        let by_det = is_arc_by_determinant(plane, pts)?;
        if by_det.is_arc() != by_incidence.is_arc() {
            return Err(Error::AxiomFailure(format!(
                "incidence and determinant disagree on {pts:?}: {by_incidence:?} vs {by_det:?}"
            )));
        }
    }
    Ok(by_incidence)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TangentInfo {
    pub tangents: Vec<usize>,
    pub secants: usize,
}

/// Lines through `x` meeting the arc only in `x`, plus the secant count.
pub fn tangent_lines(plane: &Plane, arc: &[usize], x: usize) -> Result<TangentInfo> {
    plane.check_point(x)?;
    if !arc.contains(&x) {
        return Err(Error::NotInArc(x));
    }
    let mut tangents = Vec::new();
    let mut secants = 0;
    for &l in plane.lines_through(x) {
        let hits = arc.iter().filter(|&&p| plane.on_line(p, l as usize)).count();
        match hits {
            1 => tangents.push(l as usize),
            2 => secants += 1,
            _ => {}
        }
    }
    Ok(TangentInfo { tangents, secants })
}

/// A (d+1)-arc. Every point of an oval has exactly one tangent.
pub fn is_oval(plane: &Plane, pts: &[usize]) -> bool {
    let set = KArc::from_points(pts.to_vec());
    if set.len() != plane.order() + 1 || set.points.iter().any(|&p| p >= plane.num_points()) {
        return false;
    }
    if !is_arc_by_incidence(plane, set.points()).is_ok_and(|c| c.is_arc()) {
        return false;
    }
    debug_assert!(set
        .points
        .iter()
        .all(|&x| tangent_lines(plane, set.points(), x).is_ok_and(|t| t.tangents.len() == 1)));
    true
}

/// The common point of all tangents, if they are concurrent.
pub fn tangents_concurrent(plane: &Plane, oval: &[usize]) -> Result<Option<usize>> {
    let mut tangents = Vec::with_capacity(oval.len());
    for &x in oval {
        let t = tangent_lines(plane, oval, x)?;
        if t.tangents.len() != 1 {
            return Ok(None);
        }
        tangents.push(t.tangents[0]);
    }
    let Some(p) = plane.meet(tangents[0], tangents[1]) else { return Ok(None) };
    Ok(tangents.iter().all(|&t| plane.on_line(p, t)).then_some(p))
}

/// The nucleus of an oval in a plane of even order.
pub fn nucleus(plane: &Plane, oval: &[usize]) -> Result<usize> {
    if !is_oval(plane, oval) {
        return Err(Error::NotAnOval);
    }
    let common = tangents_concurrent(plane, oval)?;
    if plane.order() % 2 == 1 {
        return Err(Error::OddOrder(plane.order()));
    }
    common.ok_or_else(|| Error::AxiomFailure("tangents of an oval in even order are not concurrent".into()))
}

/// `(C ∪ {nucleus}) \ {x}` for the point set `C` of a proper conic.
pub fn pointed_conic(plane: &Plane, conic: &[usize], x: usize) -> Result<KArc> {
    let field = plane.field().ok_or(Error::NotDesarguesian)?;
    if field.characteristic() != 2 {
        return Err(Error::WrongCharacteristic { expected: 2, actual: field.characteristic() });
    }
    if !conic.contains(&x) {
        return Err(Error::PointNotOnConic(x));
    }
    let n = nucleus(plane, conic)?;
    let pts = conic.iter().copied().filter(|&p| p != x).chain(std::iter::once(n)).collect();
    let arc = KArc::from_points(pts);
    if !is_oval(plane, arc.points()) {
        return Err(Error::NotAnOval);
    }
    Ok(arc)
}

/// `{(1, t, f(t))} ∪ {(0,1,0), (0,0,1)}` for `f` given by coefficients
/// (low degree first), validated as a (q+2)-arc.
pub fn opoly_hyperoval(plane: &Plane, coeffs: &[Elem]) -> Result<KArc> {
    let c = plane.coordinates().ok_or(Error::NotDesarguesian)?;
    let f = &*c.field;
    if f.characteristic() != 2 {
        return Err(Error::WrongCharacteristic { expected: 2, actual: f.characteristic() });
    }
    for &k in coeffs {
        f.elem(k.0)?;
    }
    let mut pts: Vec<usize> =
        f.elements().map(|t| c.point_index([Elem::ONE, t, f.eval_poly(coeffs, t)]).expect("nonzero")).collect();
    pts.push(c.point_index([Elem::ZERO, Elem::ONE, Elem::ZERO]).expect("nonzero"));
    pts.push(c.point_index([Elem::ZERO, Elem::ZERO, Elem::ONE]).expect("nonzero"));
    let check = is_arc(plane, &pts)?;
    if let Some(w) = check.witness {
        return Err(Error::NotAHyperoval(w));
    }
    Ok(KArc::from_points(pts))
}
