//! Conics `sum_{i<=j} c_ij z_i z_j = 0` in PG(2,q).

use serde::Serialize;

use super::KArc;
use crate::error::{Error, Result};
use crate::galois::{Elem, Field};
use crate::plane::{Plane, ProjPoint};

/// Coefficients `(c11, c12, c13, c22, c23, c33)`, scaled so the first
/// nonzero one is 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Conic {
    pub coeffs: [Elem; 6],
}

/// The six quadratic monomials in coefficient order.
pub fn monomials(f: &Field, z: [Elem; 3]) -> [Elem; 6] {
    let [a, b, c] = z;
    [f.mul(a, a), f.mul(a, b), f.mul(a, c), f.mul(b, b), f.mul(b, c), f.mul(c, c)]
}

impl Conic {
    /// `None` for the zero vector.
    pub fn new(f: &Field, coeffs: [Elem; 6]) -> Option<Conic> {
        let lead = coeffs.iter().copied().find(|c| !c.is_zero())?;
        let inv = f.inv(lead).ok()?;
        Some(Conic { coeffs: coeffs.map(|c| f.mul(c, inv)) })
    }

    /// `z1 z2 - z3^2`.
    pub fn canonical(f: &Field) -> Conic {
        let z = Elem::ZERO;
        Conic::new(f, [z, Elem::ONE, z, z, z, f.neg(Elem::ONE)]).expect("nonzero")
    }

    pub fn eval(&self, f: &Field, z: [Elem; 3]) -> Elem {
        monomials(f, z).iter().zip(&self.coeffs).fold(Elem::ZERO, |acc, (&m, &c)| f.add(acc, f.mul(m, c)))
    }

    /// Half-discriminant `4abc + def - af^2 - be^2 - cd^2` of the form with
    /// `a, b, c` the square coefficients and `d, e, f` the cross ones; it
    /// vanishes exactly for degenerate conics, in every characteristic.
    pub fn discriminant(&self, f: &Field) -> Elem {
        let [a, d, e, b, g, c] = self.coeffs;
        let m = |x: Elem, y: Elem| f.mul(x, y);
        let four = f.from_int(4);
        let pos = f.add(m(four, m(a, m(b, c))), m(d, m(e, g)));
        let neg = f.add(f.add(m(a, m(g, g)), m(b, m(e, e))), m(c, m(d, d)));
        f.sub(pos, neg)
    }

    pub fn is_proper(&self, f: &Field) -> bool {
        !self.discriminant(f).is_zero()
    }

    pub fn contains(&self, plane: &Plane, p: usize) -> bool {
        let c = plane.coordinates().expect("conics live in coordinatized planes");
        self.eval(&c.field, c.points[p].0).is_zero()
    }

    pub fn coeff_indices(&self) -> [u32; 6] {
        self.coeffs.map(|c| c.0)
    }
}

fn coords(plane: &Plane) -> Result<&crate::plane::Coordinates> {
    plane.coordinates().ok_or(Error::NotDesarguesian)
}

/// `(1,0,0)` followed by `(σ^2, 1, σ)` for σ in field order.
pub fn canonical_conic_points(f: &Field) -> Vec<ProjPoint> {
    std::iter::once(ProjPoint([Elem::ONE, Elem::ZERO, Elem::ZERO]))
        .chain(f.elements().map(|s| ProjPoint::canonical(f, [f.mul(s, s), Elem::ONE, s]).expect("nonzero")))
        .collect()
}

/// The point set of `z1 z2 = z3^2` in a PG(2,q).
pub fn canonical_conic(plane: &Plane) -> Result<KArc> {
    let c = coords(plane)?;
    let pts = canonical_conic_points(&c.field).iter().map(|z| c.point_index(z.0).expect("nonzero")).collect::<Vec<_>>();
    Ok(KArc::from_points(pts))
}

/// All points of the plane on the conic, by exhaustive evaluation.
pub fn conic_solutions(plane: &Plane, conic: &Conic) -> Result<Vec<usize>> {
    let c = coords(plane)?;
    Ok((0..plane.num_points()).filter(|&p| conic.eval(&c.field, c.points[p].0).is_zero()).collect())
}

/// 3x3 determinant over the field, by cofactor expansion along the first row.
pub fn det3(f: &Field, m: [[Elem; 3]; 3]) -> Elem {
    let minor = |c1: usize, c2: usize| f.sub(f.mul(m[1][c1], m[2][c2]), f.mul(m[1][c2], m[2][c1]));
    let t0 = f.mul(m[0][0], minor(1, 2));
    let t1 = f.mul(m[0][1], minor(0, 2));
    let t2 = f.mul(m[0][2], minor(0, 1));
    f.add(f.sub(t0, t1), t2)
}

/// Null space of a matrix over the field when it is one-dimensional.
fn unique_null_vector(f: &Field, mut rows: Vec<[Elem; 6]>) -> Option<[Elem; 6]> {
    let ncols = 6;
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(r, pr);
        let inv = f.inv(rows[r][col]).ok()?;
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let factor = rows[i][col];
                let pivot = rows[r];
                for (x, &y) in rows[i].iter_mut().zip(&pivot) {
                    *x = f.sub(*x, f.mul(factor, y));
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    if pivots.len() != ncols - 1 {
        return None;
    }
    let free = (0..ncols).find(|c| !pivots.contains(c))?;
    let mut v = [Elem::ZERO; 6];
    v[free] = Elem::ONE;
    for (row, &pc) in pivots.iter().enumerate() {
        v[pc] = f.neg(rows[row][free]);
    }
    Some(v)
}

/// The proper conic through five points, if the conditions determine a
/// unique conic and it is proper.
pub fn fit_conic_5pts(plane: &Plane, pts: [usize; 5]) -> Result<Option<Conic>> {
    let c = coords(plane)?;
    for &p in &pts {
        plane.check_point(p)?;
    }
    for i in 0..5 {
        if pts[i + 1..].contains(&pts[i]) {
            return Err(Error::DuplicatePoints);
        }
    }
    let f = &*c.field;
    let rows = pts.iter().map(|&p| monomials(f, c.points[p].0)).collect();
    Ok(unique_null_vector(f, rows).and_then(|v| Conic::new(f, v)).filter(|conic| conic.is_proper(f)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arcs::is_arc;
    use crate::plane::pg2_order;

    #[test]
    fn canonical_conic_gf3() {
        let plane = pg2_order(3).unwrap();
        let f = plane.field().unwrap();
        let pts = canonical_conic_points(f);
        let e = |k| Elem(k);
        let expected = [[e(1), e(0), e(0)], [e(0), e(1), e(0)], [e(1), e(1), e(1)], [e(1), e(1), e(2)]];
        let mut got: Vec<[Elem; 3]> = pts.iter().map(|p| p.0).collect();
        got.sort();
        let mut exp = expected.to_vec();
        exp.sort();
        assert_eq!(got, exp);
        let conic = canonical_conic(&plane).unwrap();
        assert!(is_arc(&plane, conic.points()).unwrap().is_arc());
        let sol = conic_solutions(&plane, &Conic::canonical(f)).unwrap();
        assert_eq!(sol, conic.points());
    }

    #[test]
    fn canonical_conic_gf2() {
        let plane = pg2_order(2).unwrap();
        assert_eq!(canonical_conic(&plane).unwrap().len(), 3);
    }

    #[test]
    fn double_line() {
        for q in [2u64, 3, 4, 5] {
            let plane = pg2_order(q).unwrap();
            let f = plane.field().unwrap();
            let z = Elem::ZERO;
            let c = Conic::new(f, [Elem::ONE, z, z, z, z, z]).unwrap();
            assert!(!c.is_proper(f));
            let sol = conic_solutions(&plane, &c).unwrap();
            assert_eq!(sol.len(), q as usize + 1);
            let line = plane.join(sol[0], sol[1]).unwrap();
            assert!(sol.iter().all(|&p| plane.on_line(p, line)));
        }
    }

    #[test]
    fn fit_recovers_canonical() {
        let plane = pg2_order(7).unwrap();
        let f = plane.field().unwrap();
        let pts = canonical_conic(&plane).unwrap();
        let p = pts.points();
        for window in [[0, 1, 2, 3, 4], [3, 4, 5, 6, 7], [0, 2, 4, 6, 7]] {
            let five = window.map(|i| p[i]);
            assert_eq!(fit_conic_5pts(&plane, five).unwrap(), Some(Conic::canonical(f)));
        }
    }

    #[test]
    fn fit_rejects_collinear_and_duplicates() {
        let plane = pg2_order(5).unwrap();
        let l = plane.line(3);
        let conic = canonical_conic(&plane).unwrap();
        let off: Vec<usize> = conic.points().iter().copied().filter(|&p| !plane.on_line(p, 3)).take(2).collect();
        let five = [l[0] as usize, l[1] as usize, l[2] as usize, off[0], off[1]];
        assert_eq!(fit_conic_5pts(&plane, five).unwrap(), None);
        assert_eq!(fit_conic_5pts(&plane, [1, 1, 2, 3, 4]), Err(Error::DuplicatePoints));
    }

    #[test]
    fn proper_conic_over_gf8() {
        let plane = pg2_order(8).unwrap();
        let f = plane.field().unwrap();
        let sol = conic_solutions(&plane, &Conic::canonical(f)).unwrap();
        assert_eq!(sol.len(), 9);
        assert!(is_arc(&plane, &sol).unwrap().is_arc());
    }
}
