use std::sync::Arc;

use serde::Serialize;

use super::{Frame, Plane, PlaneKind, MAX_BUILTIN_ORDER};
use crate::error::{Error, Result};
use crate::galois::{Elem, Field};

/// A finite quasifield on the additive group of a Galois field, with its
/// own multiplication `a ∘ b` given as a table.
#[derive(Debug, Clone)]
pub struct Quasifield {
    name: String,
    field: Arc<Field>,
    mul: Vec<u32>,
}

/// Result of the exhaustive quasifield checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuasifieldReport {
    pub additive_group: bool,
    pub zero_law: bool,
    pub identity: bool,
    pub right_distributive: bool,
    pub multiplicative_loop: bool,
    pub slopes_separate: bool,
    pub associative: bool,
    pub commutative: bool,
    pub left_distributive: bool,
}

impl QuasifieldReport {
    /// The axioms a (right) quasifield must satisfy.
    pub fn is_quasifield(&self) -> bool {
        self.additive_group
            && self.zero_law
            && self.identity
            && self.right_distributive
            && self.multiplicative_loop
            && self.slopes_separate
    }

    pub fn is_nearfield(&self) -> bool {
        self.is_quasifield() && self.associative
    }
}

impl Quasifield {
    pub fn from_table(name: impl Into<String>, field: Arc<Field>, mul: Vec<u32>) -> Result<Quasifield> {
        let q = field.order();
        if mul.len() != q * q || mul.iter().any(|&v| v as usize >= q) {
            return Err(Error::InvalidArgument("multiplication table has the wrong shape".into()));
        }
        Ok(Quasifield { name: name.into(), field, mul })
    }

    /// The field's own multiplication.
    pub fn from_field(field: Arc<Field>) -> Quasifield {
        let q = field.order();
        let mul = (0..q * q).map(|k| field.mul(Elem((k / q) as u32), Elem((k % q) as u32)).0).collect();
        Quasifield { name: format!("GF({q})"), field, mul }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.field.order()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.field.add(a, b)
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.mul[a.idx() * self.order() + b.idx()])
    }

    pub fn report(&self) -> QuasifieldReport {
        let f = &*self.field;
        let els: Vec<Elem> = f.elements().collect();
        let nz: Vec<Elem> = f.nonzero().collect();
        let all3 = |pred: &dyn Fn(Elem, Elem, Elem) -> bool| {
            els.iter().all(|&a| els.iter().all(|&b| els.iter().all(|&c| pred(a, b, c))))
        };
        let additive_group = all3(&|a, b, c| f.add(f.add(a, b), c) == f.add(a, f.add(b, c)))
            && els.iter().all(|&a| els.iter().all(|&b| f.add(a, b) == f.add(b, a)))
            && els.iter().all(|&a| f.add(a, f.neg(a)).is_zero());
        let zero_law = els.iter().all(|&a| self.mul(Elem::ZERO, a).is_zero() && self.mul(a, Elem::ZERO).is_zero());
        let identity = els.iter().all(|&a| self.mul(Elem::ONE, a) == a && self.mul(a, Elem::ONE) == a);
        let right_distributive = all3(&|a, b, c| self.mul(f.add(a, b), c) == f.add(self.mul(a, c), self.mul(b, c)));
        let left_distributive = all3(&|a, b, c| self.mul(a, f.add(b, c)) == f.add(self.mul(a, b), self.mul(a, c)));
        let associative = all3(&|a, b, c| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c)));
        let commutative = els.iter().all(|&a| els.iter().all(|&b| self.mul(a, b) == self.mul(b, a)));
        // a ∘ x = b and x ∘ a = b uniquely solvable for a != 0
        let multiplicative_loop = nz.iter().all(|&a| {
            nz.iter().all(|&b| {
                nz.iter().filter(|&&x| self.mul(a, x) == b).count() == 1
                    && nz.iter().filter(|&&x| self.mul(x, a) == b).count() == 1
            })
        });
        // x ∘ a = x ∘ b with a != b forces x = 0
        let slopes_separate = els
            .iter()
            .all(|&a| els.iter().filter(|&&b| b != a).all(|&b| nz.iter().all(|&x| self.mul(x, a) != self.mul(x, b))));
        QuasifieldReport {
            additive_group,
            zero_law,
            identity,
            right_distributive,
            multiplicative_loop,
            slopes_separate,
            associative,
            commutative,
            left_distributive,
        }
    }

    /// Some `(a, b)` with `a ∘ b != b ∘ a`.
    pub fn noncommuting_pair(&self) -> Option<(Elem, Elem)> {
        let f = &self.field;
        f.elements().flat_map(|a| f.elements().map(move |b| (a, b))).find(|&(a, b)| self.mul(a, b) != self.mul(b, a))
    }

    /// Some `(a, b, c)` with `a ∘ (b + c) != a ∘ b + a ∘ c`.
    pub fn left_distributivity_failure(&self) -> Option<(Elem, Elem, Elem)> {
        let f = &*self.field;
        for a in f.elements() {
            for b in f.elements() {
                for c in f.elements() {
                    if self.mul(a, f.add(b, c)) != f.add(self.mul(a, b), self.mul(a, c)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }
}

/// The near-field of order 9: GF(9) addition, and `a ∘ b = a b` when `b` is
/// a square, `a^3 b` otherwise.
pub fn nearfield9() -> Result<Quasifield> {
    let field = Arc::new(Field::new(3, 2, None)?);
    let q = field.order();
    let mut mul = vec![0u32; q * q];
    for a in field.elements() {
        for b in field.elements() {
            let left = if field.is_square(b) { a } else { field.frobenius(a) };
            mul[a.idx() * q + b.idx()] = field.mul(left, b).0;
        }
    }
    let nf = Quasifield { name: "nearfield(9)".into(), field, mul };
    let report = nf.report();
    if !report.is_nearfield() {
        return Err(Error::AxiomFailure(format!("near-field checks failed: {report:?}")));
    }
    Ok(nf)
}

/// The translation plane coordinatized by `quasi`.
///
/// Affine point `(x, y)` has index `x q + y`, ideal point `(m)` index
/// `q^2 + m` and `(∞)` index `q^2 + q`. Line `y = x ∘ m + b` has index
/// `m q + b`, the vertical `x = c` index `q^2 + c`, and the line at infinity
/// index `q^2 + q`.
pub fn quasifield_plane(quasi: &Quasifield) -> Result<Plane> {
    let q = quasi.order();
    if q > MAX_BUILTIN_ORDER {
        return Err(Error::OrderTooLarge { order: q as u64, max: MAX_BUILTIN_ORDER as u64 });
    }
    if !quasi.report().is_quasifield() {
        return Err(Error::AxiomFailure(format!("{} is not a quasifield", quasi.name)));
    }
    let affine = |x: usize, y: usize| (x * q + y) as u32;
    let ideal = |m: usize| (q * q + m) as u32;
    let infinity = (q * q + q) as u32;
    let mut lines = Vec::with_capacity(q * q + q + 1);
    for m in 0..q {
        for b in 0..q {
            let mut l: Vec<u32> = (0..q)
                .map(|x| {
                    let y = quasi.add(quasi.mul(Elem(x as u32), Elem(m as u32)), Elem(b as u32));
                    affine(x, y.idx())
                })
                .collect();
            l.push(ideal(m));
            lines.push(l);
        }
    }
    for c in 0..q {
        let mut l: Vec<u32> = (0..q).map(|y| affine(c, y)).collect();
        l.push(infinity);
        lines.push(l);
    }
    lines.push((0..q).map(ideal).chain(std::iter::once(infinity)).collect());
    let name = if quasi.name == "nearfield(9)" { "Hall(9)".to_string() } else { format!("Q({})", quasi.name) };
    let mut plane = Plane::checked(name, q, lines, PlaneKind::Quasifield(quasi.name.clone()))?;
    let frame = Frame { origin: affine(0, 0), x_ideal: ideal(0), y_ideal: infinity, unit: affine(1, 1) };
    plane.frame = Some((frame, (0..q).map(|t| affine(t, t)).collect()));
    Ok(plane)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::verify_plane_axioms;

    #[test]
    fn nearfield_properties() {
        let nf = nearfield9().unwrap();
        let r = nf.report();
        assert!(r.is_nearfield());
        assert!(!r.commutative && !r.left_distributive);
        for b in nf.field().elements() {
            assert_eq!(nf.mul(Elem::ONE, b), b);
        }
        assert!(nf.noncommuting_pair().is_some());
        assert!(nf.left_distributivity_failure().is_some());
    }

    #[test]
    fn hall_plane_is_a_plane() {
        let plane = quasifield_plane(&nearfield9().unwrap()).unwrap();
        assert_eq!(plane.name(), "Hall(9)");
        assert_eq!(plane.num_points(), 91);
        assert_eq!(plane.num_lines(), 91);
        assert!(plane.lines().iter().all(|l| l.len() == 10));
        assert!(verify_plane_axioms(&plane).passed());
    }

    #[test]
    fn field_as_quasifield() {
        let field = Arc::new(Field::new(3, 2, None).unwrap());
        let qf = Quasifield::from_field(field);
        let r = qf.report();
        assert!(r.is_nearfield() && r.commutative && r.left_distributive);
        let plane = quasifield_plane(&qf).unwrap();
        let report = verify_plane_axioms(&plane);
        assert!(report.passed());
        assert_eq!(plane.num_points(), 91);
    }

    #[test]
    fn broken_table_is_rejected() {
        let field = Arc::new(Field::new(3, 1, None).unwrap());
        // a ∘ b = a: not a quasifield
        let mul = (0..9).map(|k| (k / 3) as u32).collect();
        let bad = Quasifield::from_table("bad", field, mul).unwrap();
        assert!(!bad.report().is_quasifield());
        assert!(matches!(quasifield_plane(&bad), Err(Error::AxiomFailure(_))));
    }
}
