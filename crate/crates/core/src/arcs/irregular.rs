//! O-permutation search for hyperovals containing no conic, and
//! polynomial interpolation of the permutation found.
//!
//! A permutation `f` of GF(2^h) with `f(0) = 0`, `f(1) = 1` gives the
//! (q+2)-arc `{(1, t, f(t))} ∪ {(0,1,0), (0,0,1)}` exactly when, for every
//! `a`, the slopes `(f(a) + f(x)) / (a + x)` over `x != a` are distinct.

use serde::Serialize;

use super::{classify_oval, fit_conic_5pts, opoly_hyperoval, ClassifiedOval, KArc};
use crate::error::{Error, Result};
use crate::galois::{Elem, Field};
use crate::par::Exec;
use crate::plane::Plane;

/// Coefficients (low degree first, length q) of the polynomial of degree
/// below q agreeing with `values[x]` at every field element `x`.
pub fn interpolate(field: &Field, values: &[Elem]) -> Vec<Elem> {
    let q = field.order();
    assert_eq!(values.len(), q);
    // (x - a)^(q-1) = sum_k a^(q-1-k) x^k, with 0^0 = 1.
    let power = |a: Elem, e: usize| if e == 0 { Elem::ONE } else { field.pow(a, e as u64) };
    let mut coeffs = vec![Elem::ZERO; q];
    for (a, &fa) in field.elements().zip(values) {
        if fa.is_zero() {
            continue;
        }
        coeffs[0] = field.add(coeffs[0], fa);
        for (k, c) in coeffs.iter_mut().enumerate() {
            *c = field.sub(*c, field.mul(fa, power(a, q - 1 - k)));
        }
    }
    coeffs
}

#[derive(Debug, Clone, Copy)]
pub struct HyperovalSearch {
    /// Node budget across the whole search.
    pub budget: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum OPermutationOutcome {
    /// A hyperoval containing no conic, with one of its irregular ovals.
    Found {
        values: Vec<u32>,
        coeffs: Vec<u32>,
        hyperoval: KArc,
        oval: KArc,
        class: ClassifiedOval,
        nodes: u64,
    },
    /// Every normalized o-permutation was examined.
    Exhausted {
        nodes: u64,
        permutations: u64,
    },
    BudgetExceeded {
        nodes: u64,
        permutations: u64,
    },
}

struct Dfs<'a> {
    field: &'a Field,
    plane: &'a Plane,
    values: Vec<Option<Elem>>,
    used: u64,
    slopes: Vec<u64>,
    nodes: u64,
    limit: u64,
    permutations: u64,
}

impl Dfs<'_> {
    /// Assigns `f(x) = v` if allowed, returning the slopes added.
    fn assign(&mut self, x: usize, v: Elem) -> Option<Vec<(usize, u64)>> {
        if self.used >> v.idx() & 1 == 1 {
            return None;
        }
        let f = self.field;
        let xe = Elem(x as u32);
        let mut added: Vec<(usize, u64)> = Vec::new();
        let mut own = 0u64;
        for a in 0..self.values.len() {
            let Some(fa) = self.values[a] else { continue };
            let s = f.div(f.sub(fa, v), f.sub(Elem(a as u32), xe)).expect("distinct points");
            let bit = 1u64 << s.idx();
            if self.slopes[a] & bit != 0 || own & bit != 0 {
                for &(b, m) in &added {
                    self.slopes[b] &= !m;
                }
                return None;
            }
            own |= bit;
            self.slopes[a] |= bit;
            added.push((a, bit));
        }
        self.slopes[x] = own;
        self.used |= 1 << v.idx();
        self.values[x] = Some(v);
        Some(added)
    }

    fn unassign(&mut self, x: usize, added: Vec<(usize, u64)>) {
        let v = self.values[x].take().expect("assigned");
        self.used &= !(1 << v.idx());
        self.slopes[x] = 0;
        for (a, bit) in added {
            self.slopes[a] &= !bit;
        }
    }

    /// Returns an accepted permutation, or `None` when the subtree is done
    /// or the budget ran out.
    fn run(&mut self, x: usize) -> Option<Vec<Elem>> {
        let q = self.values.len();
        if x == q {
            self.permutations += 1;
            let vals: Vec<Elem> = self.values.iter().map(|v| v.expect("complete")).collect();
            return (!contains_conic(self.field, self.plane, &vals)).then_some(vals);
        }
        for v in 0..q as u32 {
            if self.nodes >= self.limit {
                return None;
            }
            self.nodes += 1;
            if let Some(added) = self.assign(x, Elem(v)) {
                let r = self.run(x + 1);
                self.unassign(x, added);
                if r.is_some() {
                    return r;
                }
            }
        }
        None
    }
}

/// True if some q+1 points of the hyperoval of `vals` lie on a conic.
fn contains_conic(field: &Field, plane: &Plane, vals: &[Elem]) -> bool {
    let Ok(h) = hyperoval_of(field, plane, vals) else { return false };
    let pts = h.points();
    (0..pts.len()).any(|skip| {
        let rest: Vec<usize> = pts.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &p)| p).collect();
        let five = [rest[0], rest[1], rest[2], rest[3], rest[4]];
        match fit_conic_5pts(plane, five) {
            Ok(Some(conic)) => rest.iter().all(|&p| conic.contains(plane, p)),
            _ => false,
        }
    })
}

fn hyperoval_of(field: &Field, plane: &Plane, vals: &[Elem]) -> Result<KArc> {
    opoly_hyperoval(plane, &interpolate(field, vals))
}

/// Searches normalized o-permutations of GF(2^h) for a hyperoval that
/// contains no conic. The work is split by the value of `f` at the
/// first free element; the reported permutation is the least in search
/// order for any worker count.
pub fn search_o_permutations(plane: &Plane, search: HyperovalSearch, exec: &Exec) -> Result<OPermutationOutcome> {
    let field = plane.field().ok_or(Error::NotDesarguesian)?.clone();
    if field.characteristic() != 2 {
        return Err(Error::WrongCharacteristic { expected: 2, actual: field.characteristic() });
    }
    let q = field.order();
    if q < 8 {
        return Ok(OPermutationOutcome::Exhausted { nodes: 0, permutations: 0 });
    }
    let branches = q - 2;
    let per = search.budget / branches as u64;
    let results = exec.map_range(branches, |i| {
        let mut dfs = Dfs {
            field: &field,
            plane,
            values: vec![None; q],
            used: 0,
            slopes: vec![0; q],
            nodes: 0,
            limit: per,
            permutations: 0,
        };
        dfs.assign(0, Elem::ZERO).expect("empty");
        dfs.assign(1, Elem::ONE).expect("distinct");
        let found = dfs.assign(2, Elem(i as u32 + 2)).and_then(|_| dfs.run(3));
        (found, dfs.nodes, dfs.permutations, dfs.nodes >= dfs.limit)
    });
    let nodes: u64 = results.iter().map(|r| r.1).sum();
    let permutations: u64 = results.iter().map(|r| r.2).sum();
    for (i, (found, ..)) in results.iter().enumerate() {
        if let Some(vals) = found {
            // Earlier branches must have finished without a hit.
            if results[..i].iter().any(|r| r.3) {
                break;
            }
            return found_outcome(&field, plane, vals, nodes);
        }
    }
    if results.iter().any(|r| r.3) {
        return Ok(OPermutationOutcome::BudgetExceeded { nodes, permutations });
    }
    Ok(OPermutationOutcome::Exhausted { nodes, permutations })
}

fn found_outcome(field: &Field, plane: &Plane, vals: &[Elem], nodes: u64) -> Result<OPermutationOutcome> {
    let coeffs = interpolate(field, vals);
    let hyperoval = opoly_hyperoval(plane, &coeffs)?;
    let oval = KArc::from_points(hyperoval.points()[1..].to_vec());
    let class = classify_oval(plane, oval.points())?;
    Ok(OPermutationOutcome::Found {
        values: vals.iter().map(|v| v.0).collect(),
        coeffs: coeffs.iter().map(|c| c.0).collect(),
        hyperoval,
        oval,
        class,
        nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arcs::OvalClass;
    use crate::galois::Field;
    use crate::plane::pg2_order;

    #[test]
    fn interpolation_recovers_monomials() {
        for q in [4u64, 8, 9, 16] {
            let f = Field::of_order(q).unwrap();
            for e in 0..q - 1 {
                let vals: Vec<Elem> = f.elements().map(|x| if e == 0 { Elem::ONE } else { f.pow(x, e) }).collect();
                let c = interpolate(&f, &vals);
                let mut expected = vec![Elem::ZERO; q as usize];
                expected[e as usize] = Elem::ONE;
                assert_eq!(c, expected, "q={q} e={e}");
            }
            let vals: Vec<Elem> = f.elements().collect();
            let c = interpolate(&f, &vals);
            assert!(f.elements().all(|x| f.eval_poly(&c, x) == vals[x.idx()]));
        }
    }

    #[test]
    fn pg8_hyperovals_all_contain_a_conic() {
        let plane = pg2_order(8).unwrap();
        let out = search_o_permutations(&plane, HyperovalSearch { budget: u64::MAX }, &Exec::sequential()).unwrap();
        match out {
            OPermutationOutcome::Exhausted { permutations, .. } => assert!(permutations > 0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn pg16_has_irregular_oval() {
        let plane = pg2_order(16).unwrap();
        let out = search_o_permutations(&plane, HyperovalSearch { budget: u64::MAX }, &Exec::new(0)).unwrap();
        let OPermutationOutcome::Found { class, coeffs, .. } = out else { panic!("no irregular hyperoval") };
        assert_eq!(class.class, OvalClass::Irregular);
        let f = plane.field().unwrap();
        let c: Vec<Elem> = coeffs.iter().map(|&c| Elem(c)).collect();
        assert!(opoly_hyperoval(&plane, &c).is_ok());
        assert!(f.order() == 16);
    }
}
