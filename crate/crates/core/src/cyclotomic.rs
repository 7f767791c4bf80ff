//! Exact arithmetic in the cyclotomic integers Z[ζ_m] and the quadratic
//! character sums `sum_k ζ_p^{Tr(m k^2 + n k)}` over finite fields.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::galois::{Elem, Field};
use crate::par::Exec;

/// Largest supported root-of-unity order.
pub const MAX_ROOT_ORDER: u32 = 64;

fn phi_table() -> &'static [Vec<i64>] {
    static TABLE: OnceLock<Vec<Vec<i64>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table: Vec<Vec<i64>> = vec![Vec::new(); MAX_ROOT_ORDER as usize + 1];
        for m in 1..=MAX_ROOT_ORDER as usize {
            // x^m - 1 divided by every Φ_d with d | m, d < m
            let mut num = vec![0i64; m + 1];
            num[0] = -1;
            num[m] = 1;
            for d in (1..m).filter(|d| m % d == 0) {
                num = exact_div(&num, &table[d]);
            }
            table[m] = num;
        }
        table
    })
}

fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dn];
        quot[i] = c;
        for (j, &d) in den.iter().enumerate() {
            rem[i + j] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// Coefficients of the `m`-th cyclotomic polynomial, low degree first.
///
/// # Panics
/// If `m` is outside `1..=MAX_ROOT_ORDER`.
pub fn cyclotomic_poly(m: u32) -> &'static [i64] {
    assert!((1..=MAX_ROOT_ORDER).contains(&m), "root order {m} out of range");
    &phi_table()[m as usize]
}

/// Euler's totient, the degree of Φ_m.
pub fn totient(m: u32) -> usize {
    cyclotomic_poly(m).len() - 1
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// An element of Z[ζ_m] in the power basis `1, ζ, ..., ζ^{φ(m)-1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    order: u32,
    coeffs: Vec<BigInt>,
}

impl CycInt {
    /// Reduces an arbitrary-length coefficient vector modulo Φ_m.
    pub fn from_poly(order: u32, poly: Vec<BigInt>) -> CycInt {
        let phi = cyclotomic_poly(order);
        let deg = phi.len() - 1;
        let mut a = poly;
        if a.len() < deg {
            a.resize(deg, BigInt::zero());
        }
        for i in (deg..a.len()).rev() {
            if a[i].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut a[i]);
            for (j, &f) in phi[..deg].iter().enumerate() {
                if f != 0 {
                    a[i - deg + j] -= &c * f;
                }
            }
        }
        a.truncate(deg);
        CycInt { order, coeffs: a }
    }

    pub fn zero(order: u32) -> CycInt {
        CycInt { order, coeffs: vec![BigInt::zero(); totient(order)] }
    }

    pub fn from_int(order: u32, k: i64) -> CycInt {
        let mut z = CycInt::zero(order);
        z.coeffs[0] = BigInt::from(k);
        z
    }

    /// `sum_j counts[j] ζ_m^j`, with exponents taken mod `m`.
    pub fn from_exponent_counts(order: u32, counts: &[i64]) -> CycInt {
        let mut poly = vec![BigInt::zero(); order as usize];
        for (j, &c) in counts.iter().enumerate() {
            poly[j % order as usize] += c;
        }
        CycInt::from_poly(order, poly)
    }

    /// ζ_m^e.
    pub fn root_of_unity(order: u32, e: i64) -> CycInt {
        let k = e.rem_euclid(order as i64) as usize;
        let mut poly = vec![BigInt::zero(); k + 1];
        poly[k] = BigInt::one();
        CycInt::from_poly(order, poly)
    }

    /// Coefficients are used verbatim; they must already be reduced.
    pub fn from_coeffs(order: u32, coeffs: Vec<BigInt>) -> Result<CycInt> {
        if !(1..=MAX_ROOT_ORDER).contains(&order) {
            return Err(Error::InvalidArgument(format!("root order {order} not in 1..={MAX_ROOT_ORDER}")));
        }
        if coeffs.len() != totient(order) {
            return Err(Error::InvalidArgument(format!(
                "expected {} coefficients for order {order}, got {}",
                totient(order),
                coeffs.len()
            )));
        }
        Ok(CycInt { order, coeffs })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational integer this element equals, if it is one.
    pub fn as_integer(&self) -> Option<&BigInt> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| &self.coeffs[0])
    }

    /// Re-expresses this element in Z[ζ_target]; `order` must divide `target`.
    pub fn lift(&self, target: u32) -> CycInt {
        assert!(target.is_multiple_of(self.order), "cannot lift order {} to {target}", self.order);
        if target == self.order {
            return self.clone();
        }
        let step = (target / self.order) as usize;
        let mut poly = vec![BigInt::zero(); (self.coeffs.len() - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[i * step] = c.clone();
        }
        CycInt::from_poly(target, poly)
    }

    fn common(a: &CycInt, b: &CycInt) -> (CycInt, CycInt) {
        if a.order == b.order {
            return (a.clone(), b.clone());
        }
        let l = a.order / gcd(a.order, b.order) * b.order;
        (a.lift(l), b.lift(l))
    }

    pub fn add(&self, other: &CycInt) -> CycInt {
        if self.order != other.order {
            let (a, b) = CycInt::common(self, other);
            return a.add(&b);
        }
        CycInt { order: self.order, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| x + y).collect() }
    }

    pub fn sub(&self, other: &CycInt) -> CycInt {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> CycInt {
        CycInt { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, other: &CycInt) -> CycInt {
        if self.order != other.order {
            let (a, b) = CycInt::common(self, other);
            return a.mul(&b);
        }
        let n = self.coeffs.len();
        let mut poly = vec![BigInt::zero(); 2 * n - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    poly[i + j] += x * y;
                }
            }
        }
        CycInt::from_poly(self.order, poly)
    }

    /// Complex conjugation, ζ -> ζ^{-1}.
    pub fn conj(&self) -> CycInt {
        let m = self.order as usize;
        let mut poly = vec![BigInt::zero(); m];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[(m - i) % m] += c;
        }
        CycInt::from_poly(self.order, poly)
    }

    /// `a * conj(a)` when it is a rational integer.
    pub fn magnitude_sq(&self) -> Option<BigInt> {
        self.mul(&self.conj()).as_integer().cloned()
    }

    /// Floating-point value for display only.
    pub fn approx(&self) -> (f64, f64) {
        let m = self.order as f64;
        self.coeffs.iter().enumerate().fold((0.0, 0.0), |(re, im), (k, c)| {
            let c = c.to_f64().unwrap_or(f64::NAN);
            let t = std::f64::consts::TAU * k as f64 / m;
            (re + c * t.cos(), im + c * t.sin())
        })
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "zeta {} :", self.order)?;
        for c in &self.coeffs {
            write!(f, " {c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for CycInt {
    type Err = Error;

    fn from_str(s: &str) -> Result<CycInt> {
        let bad = |msg: String| Error::ParseError { line: 1, msg };
        let (head, tail) = s.split_once(':').ok_or_else(|| bad("missing `:`".into()))?;
        let order = head
            .trim()
            .strip_prefix("zeta")
            .ok_or_else(|| bad("expected `zeta m : c0 c1 ...`".into()))?
            .trim()
            .parse::<u32>()
            .map_err(|e| bad(e.to_string()))?;
        let coeffs = tail
            .split_whitespace()
            .map(|t| t.parse::<BigInt>().map_err(|e| bad(e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        CycInt::from_coeffs(order, coeffs)
    }
}

/// Serialized as the coefficient vector; the order is carried by the container.
impl Serialize for CycInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<i64> = self.coeffs.iter().map(|c| c.to_i64().expect("coefficient fits i64")).collect();
        v.serialize(s)
    }
}

/// Exponent counts `c_j = #{k : Tr(m k^2 + n k) = j}` for the sum below.
pub fn weil_counts(field: &Field, m: Elem, n: Elem) -> Vec<i64> {
    let p = field.characteristic() as usize;
    let mut counts = vec![0i64; p];
    for k in field.elements() {
        let arg = field.add(field.mul(m, field.mul(k, k)), field.mul(n, k));
        counts[field.trace(arg).idx()] += 1;
    }
    counts
}

/// `sum_{k in F} ζ_p^{Tr(m k^2 + n k)}` as an exact element of Z[ζ_p].
pub fn weil_sum(field: &Field, m: Elem, n: Elem) -> Result<CycInt> {
    field.elem(m.0)?;
    field.elem(n.0)?;
    Ok(CycInt::from_exponent_counts(field.characteristic(), &weil_counts(field, m, n)))
}

/// `|W(m, n)|^2` for every pair, rows indexed by `m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeilSurvey {
    pub field: String,
    pub q: usize,
    pub p: u32,
    /// `table[m][n]`; `None` flags a non-rational |W|^2, which would be an
    /// internal inconsistency.
    pub table: Vec<Vec<Option<u64>>>,
}

impl WeilSurvey {
    /// Odd characteristic: every row `m != 0` is constantly `q`.
    pub fn rows_constant_q(&self) -> bool {
        self.table[1..].iter().all(|row| row.iter().all(|&v| v == Some(self.q as u64)))
    }

    /// Characteristic 2: every row `m != 0` has exactly one nonzero entry,
    /// equal to `q^2`.
    pub fn rows_single_spike(&self) -> bool {
        let q2 = (self.q * self.q) as u64;
        self.table[1..].iter().all(|row| row.iter().filter(|v| **v != Some(0)).count() == 1 && row.contains(&Some(q2)))
    }

    /// For each `m != 0` in characteristic 2, the unique `n` where the sum survives.
    pub fn spikes(&self) -> Vec<Option<usize>> {
        self.table
            .iter()
            .map(|row| {
                let nz: Vec<usize> = row.iter().enumerate().filter(|(_, v)| **v != Some(0)).map(|(i, _)| i).collect();
                (nz.len() == 1).then(|| nz[0])
            })
            .collect()
    }

    pub fn any_absent(&self) -> bool {
        self.table.iter().flatten().any(Option::is_none)
    }

    pub fn pattern(&self) -> &'static str {
        if self.any_absent() {
            "inconsistent (non-rational magnitude)"
        } else if self.p != 2 && self.rows_constant_q() {
            "every m != 0 row equals q"
        } else if self.p == 2 && self.rows_single_spike() {
            "every m != 0 row vanishes except at exactly one n (value q^2)"
        } else {
            "unexpected"
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("# |W(m,n)|^2 over {} (q = {})\n# rows m, columns n\n", self.field, self.q);
        for (m, row) in self.table.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|v| v.map_or_else(|| "?".to_string(), |x| x.to_string())).collect();
            s.push_str(&format!("m={m:>3}: {}\n", cells.join(" ")));
        }
        s.push_str(&format!("pattern: {}\n", self.pattern()));
        s
    }
}

pub fn weil_survey(field: &Field, exec: &Exec) -> WeilSurvey {
    let q = field.order();
    let p = field.characteristic();
    let table = exec.map_range(q, |m| {
        (0..q as u32)
            .map(|n| {
                let w = CycInt::from_exponent_counts(p, &weil_counts(field, Elem(m as u32), Elem(n)));
                w.magnitude_sq().and_then(|v| if v.is_negative() { None } else { v.to_u64() })
            })
            .collect()
    });
    WeilSurvey { field: field.describe(), q, p, table }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn int(k: i64) -> BigInt {
        BigInt::from(k)
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&k| int(k)).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(1), &[-1, 1]);
        assert_eq!(cyclotomic_poly(3), &[1, 1, 1]);
        assert_eq!(cyclotomic_poly(4), &[1, 0, 1]);
        assert_eq!(cyclotomic_poly(12), &[1, 0, -1, 0, 1]);
        assert_eq!(totient(64), 32);
        assert_eq!(totient(7), 6);
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(CycInt::root_of_unity(1, 0), CycInt::from_int(1, 1));
        assert_eq!(CycInt::root_of_unity(3, 1).coeffs(), &ints(&[0, 1])[..]);
        assert_eq!(CycInt::root_of_unity(3, 2).coeffs(), &ints(&[-1, -1])[..]);
        assert_eq!(CycInt::root_of_unity(4, 2), CycInt::from_int(4, -1));
        assert_eq!(CycInt::root_of_unity(5, -1), CycInt::root_of_unity(5, 4));
    }

    #[test]
    fn ring_operations() {
        let one = CycInt::from_int(3, 1);
        let a = one.add(&CycInt::root_of_unity(3, 1));
        let b = one.add(&CycInt::root_of_unity(3, 2));
        assert_eq!(a.add(&b), CycInt::from_int(3, 1));
        let z4 = CycInt::root_of_unity(4, 1);
        assert_eq!(z4.conj(), z4.neg());
        assert!(CycInt::zero(7).mul(&CycInt::root_of_unity(7, 3)).is_zero());
    }

    #[test]
    fn magnitudes() {
        let a = CycInt::from_coeffs(3, ints(&[1, 2])).unwrap();
        assert_eq!(a.magnitude_sq(), Some(int(3)));
        assert_eq!(CycInt::zero(5).magnitude_sq(), Some(int(0)));
        assert_eq!(CycInt::from_int(5, 2).magnitude_sq(), Some(int(4)));
        // 1 + ζ_5 has |.|^2 = 2 + 2cos(2π/5), irrational
        let b = CycInt::from_int(5, 1).add(&CycInt::root_of_unity(5, 1));
        assert_eq!(b.magnitude_sq(), None);
    }

    #[test]
    fn mixed_orders_lift_to_lcm() {
        let s = CycInt::root_of_unity(3, 1).mul(&CycInt::root_of_unity(4, 1));
        assert_eq!(s.order(), 12);
        assert_eq!(s, CycInt::root_of_unity(12, 4 + 3));
    }

    #[test]
    fn text_round_trip() {
        let a = CycInt::from_coeffs(5, ints(&[3, -1, 0, 7])).unwrap();
        assert_eq!(a.to_string(), "zeta 5 : 3 -1 0 7");
        assert_eq!(a.to_string().parse::<CycInt>().unwrap(), a);
        assert!("zeta 5 : 1 2".parse::<CycInt>().is_err());
        assert!("zeta x : 1".parse::<CycInt>().is_err());
    }

    #[test]
    fn weil_examples() {
        let f3 = Field::new(3, 1, None).unwrap();
        let w = weil_sum(&f3, Elem(1), Elem(0)).unwrap();
        assert_eq!(w.coeffs(), &ints(&[1, 2])[..]);
        assert_eq!(w.magnitude_sq(), Some(int(3)));
        let f2 = Field::new(2, 1, None).unwrap();
        assert!(weil_sum(&f2, Elem(1), Elem(0)).unwrap().is_zero());
        for f in [&f3, &f2] {
            for n in f.nonzero() {
                assert!(weil_sum(f, Elem(0), n).unwrap().is_zero());
            }
        }
        assert_eq!(weil_sum(&f3, Elem(7), Elem(0)), Err(Error::FieldMismatch));
    }

    #[test]
    fn survey_patterns() {
        let exec = Exec::sequential();
        let s3 = weil_survey(&Field::new(3, 1, None).unwrap(), &exec);
        assert!(s3.rows_constant_q());
        assert_eq!(s3.table[0], vec![Some(9), Some(0), Some(0)]);
        let s4 = weil_survey(&Field::new(2, 2, None).unwrap(), &exec);
        assert!(s4.rows_single_spike());
        assert_eq!(s4.table[1].iter().filter(|v| **v == Some(16)).count(), 1);
        let s5 = weil_survey(&Field::new(5, 1, None).unwrap(), &exec);
        assert!(s5.rows_constant_q());
        assert!(s5.pattern().starts_with("every m != 0 row equals q"));
    }

    fn arb_cyc(order: u32) -> impl Strategy<Value = CycInt> {
        proptest::collection::vec(-20i64..20, totient(order))
            .prop_map(move |v| CycInt::from_coeffs(order, v.into_iter().map(BigInt::from).collect()).unwrap())
    }

    proptest! {
        #[test]
        fn conj_is_involution(a in arb_cyc(7)) {
            prop_assert_eq!(a.conj().conj(), a.clone());
            prop_assert_eq!(a.magnitude_sq(), a.conj().magnitude_sq());
        }

        #[test]
        fn magnitude_is_multiplicative(a in arb_cyc(4), b in arb_cyc(4)) {
            let (ma, mb, mab) = (a.magnitude_sq(), b.magnitude_sq(), a.mul(&b).magnitude_sq());
            if let (Some(x), Some(y), Some(z)) = (ma, mb, mab) {
                prop_assert_eq!(x * y, z);
            }
        }

        #[test]
        fn reduction_is_idempotent(a in arb_cyc(12)) {
            let again = CycInt::from_poly(12, a.coeffs().to_vec());
            prop_assert_eq!(again, a);
        }

        #[test]
        fn ring_laws(a in arb_cyc(5), b in arb_cyc(5), c in arb_cyc(5)) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b).conj(), a.conj().mul(&b.conj()));
        }
    }
}
