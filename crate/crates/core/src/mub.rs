//! Mutually unbiased bases with exact cyclotomic entries.
//!
//! Vectors are un-normalized. Two vectors `u`, `v` from different bases are
//! unbiased when `d |<u|v>|^2 = <u|u><v|v>`; inside a basis distinct vectors
//! are orthogonal and all have the same norm.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arcs::{search_ovals, SearchOptions};
use crate::cyclotomic::{weil_sum, CycInt, MAX_ROOT_ORDER};
use crate::error::{Error, Result};
use crate::galois::{Elem, Field};
use crate::par::Exec;
use crate::plane::Plane;

/// Largest dimension built by [`wf_mub_set`].
pub const MAX_MUB_DIMENSION: usize = 81;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MubVector {
    pub entries: Vec<CycInt>,
}

impl MubVector {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// `ζ_r^{e_k}` at every coordinate.
    pub fn from_phases(r: u32, phases: &[u32]) -> MubVector {
        MubVector { entries: phases.iter().map(|&e| CycInt::root_of_unity(r, e as i64)).collect() }
    }

    /// The standard basis vector `e_i` in dimension `d`.
    pub fn standard(r: u32, d: usize, i: usize) -> MubVector {
        MubVector { entries: (0..d).map(|k| CycInt::from_int(r, (k == i) as i64)).collect() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Constructed,
    Fixture,
    Imported,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MubSet {
    pub d: usize,
    pub root_order: u32,
    pub bases: Vec<Vec<MubVector>>,
    pub provenance: Provenance,
}

/// `sum_k conj(u_k) v_k`.
pub fn inner_product(u: &MubVector, v: &MubVector) -> Result<CycInt> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch(u.dim(), v.dim()));
    }
    let order = u.entries.first().map_or(1, |e| e.order());
    Ok(u.entries.iter().zip(&v.entries).fold(CycInt::zero(order), |acc, (a, b)| acc.add(&a.conj().mul(b))))
}

/// The complete set over an odd-characteristic field: the standard basis
/// and, for each `a`, the basis of vectors `v_b` with entries
/// `ζ_p^{Tr(a k^2 + b k)}`.
pub fn wf_mub_set(field: &Field) -> Result<MubSet> {
    let p = field.characteristic();
    if p == 2 {
        return Err(Error::EvenCharacteristic);
    }
    let d = field.order();
    if d > MAX_MUB_DIMENSION {
        return Err(Error::OrderTooLarge { order: d as u64, max: MAX_MUB_DIMENSION as u64 });
    }
    Ok(MubSet { d, root_order: p, bases: quadratic_phase_bases(field, p), provenance: Provenance::Constructed })
}

fn quadratic_phase_bases(field: &Field, r: u32) -> Vec<Vec<MubVector>> {
    let d = field.order();
    let mut bases = vec![(0..d).map(|i| MubVector::standard(r, d, i)).collect::<Vec<_>>()];
    for a in field.elements() {
        let basis = field
            .elements()
            .map(|b| {
                let phases: Vec<u32> = field
                    .elements()
                    .map(|k| field.trace(field.add(field.mul(a, field.mul(k, k)), field.mul(b, k))).0)
                    .collect();
                MubVector::from_phases(r, &phases)
            })
            .collect();
        bases.push(basis);
    }
    bases
}

/// `{e_0, e_1}`, `{(1,1), (1,-1)}`, `{(1,ζ_4), (1,-ζ_4)}`.
pub fn fixture_d2() -> MubSet {
    let r = 4;
    let b1 = vec![MubVector::from_phases(r, &[0, 0]), MubVector::from_phases(r, &[0, 2])];
    let b2 = vec![MubVector::from_phases(r, &[0, 1]), MubVector::from_phases(r, &[0, 3])];
    MubSet {
        d: 2,
        root_order: r,
        bases: vec![vec![MubVector::standard(r, 2, 0), MubVector::standard(r, 2, 1)], b1, b2],
        provenance: Provenance::Fixture,
    }
}

/// A vector whose entries are all zero or roots of unity of order `r`.
#[derive(Clone)]
struct Phases(Vec<Option<u32>>);

fn phases_of(v: &MubVector, roots: &[CycInt]) -> Option<Phases> {
    v.entries
        .iter()
        .map(|e| if e.is_zero() { Some(None) } else { roots.iter().position(|r| r == e).map(|k| Some(k as u32)) })
        .collect::<Option<Vec<_>>>()
        .map(Phases)
}

fn phase_inner(r: u32, u: &Phases, v: &Phases) -> CycInt {
    let mut counts = vec![0i64; r as usize];
    for (a, b) in u.0.iter().zip(&v.0) {
        if let (Some(a), Some(b)) = (a, b) {
            counts[((b + r - a) % r) as usize] += 1;
        }
    }
    CycInt::from_exponent_counts(r, &counts)
}

/// Vectors prepared for repeated inner products.
struct Prepared<'a> {
    set: &'a MubSet,
    phases: Vec<Vec<Option<Phases>>>,
}

impl<'a> Prepared<'a> {
    fn new(set: &'a MubSet) -> Self {
        let r = set.root_order;
        let roots: Vec<CycInt> = (0..r as i64).map(|e| CycInt::root_of_unity(r, e)).collect();
        let phases = set.bases.iter().map(|b| b.iter().map(|v| phases_of(v, &roots)).collect()).collect();
        Prepared { set, phases }
    }

    fn inner(&self, (a, i): (usize, usize), (b, j): (usize, usize)) -> Result<CycInt> {
        match (&self.phases[a][i], &self.phases[b][j]) {
            (Some(u), Some(v)) => Ok(phase_inner(self.set.root_order, u, v)),
            _ => inner_product(&self.set.bases[a][i], &self.set.bases[b][j]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisCheck {
    pub basis: usize,
    pub passed: bool,
    /// Common value of `<u|u>`.
    pub norm: Option<String>,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairCheck {
    pub bases: (usize, usize),
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MubReport {
    pub d: usize,
    pub num_bases: usize,
    pub within_bound: bool,
    pub bases: Vec<BasisCheck>,
    pub pairs: Vec<PairCheck>,
}

impl MubReport {
    pub fn passed(&self) -> bool {
        self.within_bound && self.bases.iter().all(|b| b.passed) && self.pairs.iter().all(|p| p.passed)
    }

    pub fn all_unbiased(&self) -> bool {
        self.bases.iter().all(|b| b.passed) && self.pairs.iter().all(|p| p.passed)
    }

    pub fn first_failure(&self) -> Option<String> {
        if let Some(b) = self.bases.iter().find(|b| !b.passed) {
            return Some(format!("basis {}: {}", b.basis, b.witness.as_deref().unwrap_or("")));
        }
        self.pairs
            .iter()
            .find(|p| !p.passed)
            .map(|p| format!("bases {:?}: {}", p.bases, p.witness.as_deref().unwrap_or("")))
    }

    pub fn summary(&self) -> String {
        if self.passed() {
            format!("{} bases, all unbiased", self.num_bases)
        } else if !self.within_bound {
            format!("{} bases exceed the bound {}", self.num_bases, self.d + 1)
        } else {
            format!("{} bases, failure at {}", self.num_bases, self.first_failure().unwrap_or_default())
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("MUB check, d = {}: {}\n", self.d, self.summary());
        s += &format!("  bases: {} (bound d+1 = {})\n", self.num_bases, self.d + 1);
        let bad_pairs = self.pairs.iter().filter(|p| !p.passed).count();
        s += &format!("  orthonormal bases: {}/{}\n", self.bases.iter().filter(|b| b.passed).count(), self.bases.len());
        s += &format!("  unbiased pairs: {}/{}\n", self.pairs.len() - bad_pairs, self.pairs.len());
        if let Some(f) = self.first_failure() {
            s += &format!("  first failure: {f}\n");
        }
        s
    }
}

fn check_shape(set: &MubSet) -> Option<String> {
    for (a, basis) in set.bases.iter().enumerate() {
        if basis.len() != set.d {
            return Some(format!("basis {a} has {} vectors", basis.len()));
        }
        if let Some(i) = basis.iter().position(|v| v.dim() != set.d) {
            return Some(format!("vector {i} of basis {a} has dimension {}", basis[i].dim()));
        }
    }
    None
}

fn check_basis(prep: &Prepared, a: usize) -> Result<BasisCheck> {
    let d = prep.set.d;
    let norm = prep.inner((a, 0), (a, 0))?;
    let fail = |w: String| Ok(BasisCheck { basis: a, passed: false, norm: None, witness: Some(w) });
    let Some(n) = norm.as_integer().filter(|n| **n > BigInt::zero()).cloned() else {
        return fail(format!("<v0|v0> = {norm} is not a positive integer"));
    };
    for i in 0..d {
        for j in i..d {
            let ip = prep.inner((a, i), (a, j))?;
            let ok = if i == j { ip.as_integer() == Some(&n) } else { ip.is_zero() };
            if !ok {
                return fail(format!("<v{i}|v{j}> = {ip}"));
            }
        }
    }
    Ok(BasisCheck { basis: a, passed: true, norm: Some(n.to_string()), witness: None })
}

fn check_pair(prep: &Prepared, a: usize, b: usize, norms: &[Option<BigInt>]) -> Result<PairCheck> {
    let d = prep.set.d;
    let (Some(na), Some(nb)) = (&norms[a], &norms[b]) else {
        return Ok(PairCheck { bases: (a, b), passed: false, witness: Some("basis not orthonormal".into()) });
    };
    let want = na * nb;
    for i in 0..d {
        for j in 0..d {
            let ip = prep.inner((a, i), (b, j))?;
            let ok = ip.magnitude_sq().is_some_and(|m| m * BigInt::from(d) == want);
            if !ok {
                let m = ip.magnitude_sq().map_or("not rational".to_string(), |m| m.to_string());
                return Ok(PairCheck {
                    bases: (a, b),
                    passed: false,
                    witness: Some(format!("|<u{i}|v{j}>|^2 = {m}, expected {}", want.clone() / d)),
                });
            }
        }
    }
    Ok(PairCheck { bases: (a, b), passed: true, witness: None })
}

/// Exact check of orthonormality in every basis and unbiasedness of every
/// pair of bases.
pub fn verify_mub_set(set: &MubSet, exec: &Exec) -> Result<MubReport> {
    if let Some(msg) = check_shape(set) {
        return Err(Error::InvalidArgument(msg));
    }
    let prep = Prepared::new(set);
    let k = set.bases.len();
    let bases = exec.map_range(k, |a| check_basis(&prep, a)).into_iter().collect::<Result<Vec<_>>>()?;
    let norms: Vec<Option<BigInt>> =
        bases.iter().map(|b| b.norm.as_ref().map(|n| n.parse().expect("integer"))).collect();
    let pairs_idx: Vec<(usize, usize)> = (0..k).flat_map(|a| (a + 1..k).map(move |b| (a, b))).collect();
    let pairs =
        exec.map(&pairs_idx, |&(a, b)| check_pair(&prep, a, b, &norms)).into_iter().collect::<Result<Vec<_>>>()?;
    Ok(MubReport { d: set.d, num_bases: k, within_bound: k <= set.d + 1, bases, pairs })
}

/// What goes wrong with quadratic phases `(-1)^{Tr(a k^2 + b k)}` in
/// characteristic 2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Char2Report {
    pub field: String,
    pub d: usize,
    /// Phase bases that are equal to another one as sets of vectors.
    pub coinciding_pairs: Vec<(usize, usize)>,
    /// Distinct values of `|<u|v>|^2` between different phase bases.
    pub cross_values: BTreeSet<u64>,
    pub zero_inner_products: u64,
    pub failing_pairs: usize,
    pub total_pairs: usize,
    /// Every cross inner product equals the Weil sum at `(a' - a, b' - b)`.
    pub matches_weil_sums: bool,
    pub verification: MubReport,
}

impl Char2Report {
    pub fn to_text(&self) -> String {
        let mut s = format!("quadratic phases over {} (d = {})\n", self.field, self.d);
        s += &format!("  failing basis pairs: {}/{}\n", self.failing_pairs, self.total_pairs);
        s += &format!("  cross |<u|v>|^2 values: {:?} (unbiased would be {})\n", self.cross_values, self.d);
        s += &format!("  exact-zero cross inner products: {}\n", self.zero_inner_products);
        s += &format!("  coinciding phase bases: {}\n", self.coinciding_pairs.len());
        s += &format!("  inner products equal Weil sums: {}\n", self.matches_weil_sums);
        s
    }
}

pub fn char2_failure_demo(field: &Field, exec: &Exec) -> Result<Char2Report> {
    if field.characteristic() != 2 {
        return Err(Error::WrongCharacteristic { expected: 2, actual: field.characteristic() });
    }
    let d = field.order();
    if d > MAX_MUB_DIMENSION {
        return Err(Error::OrderTooLarge { order: d as u64, max: MAX_MUB_DIMENSION as u64 });
    }
    let set = MubSet { d, root_order: 2, bases: quadratic_phase_bases(field, 2), provenance: Provenance::Constructed };
    let verification = verify_mub_set(&set, exec)?;
    let prep = Prepared::new(&set);
    let elems: Vec<Elem> = field.elements().collect();
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|a| (a + 1..d).map(move |b| (a, b))).collect();
    let rows = exec.map(&pairs, |&(a, b)| -> Result<(BTreeSet<u64>, u64, bool, bool)> {
        let mut values = BTreeSet::new();
        let mut zeros = 0;
        let mut weil_ok = true;
        for i in 0..d {
            for j in 0..d {
                let ip = prep.inner((a + 1, i), (b + 1, j))?;
                let m = ip.magnitude_sq().and_then(|m| m.to_u64()).unwrap_or(u64::MAX);
                values.insert(m);
                zeros += ip.is_zero() as u64;
                let w = weil_sum(field, field.sub(elems[b], elems[a]), field.sub(elems[j], elems[i]))?;
                weil_ok &= w == ip;
            }
        }
        let same = {
            let sa: BTreeSet<_> = set.bases[a + 1].iter().map(|v| format!("{:?}", v.entries)).collect();
            let sb: BTreeSet<_> = set.bases[b + 1].iter().map(|v| format!("{:?}", v.entries)).collect();
            sa == sb
        };
        Ok((values, zeros, weil_ok, same))
    });
    let mut report = Char2Report {
        field: field.describe(),
        d,
        coinciding_pairs: Vec::new(),
        cross_values: BTreeSet::new(),
        zero_inner_products: 0,
        failing_pairs: verification.pairs.iter().filter(|p| !p.passed).count(),
        total_pairs: verification.pairs.len(),
        matches_weil_sums: true,
        verification,
    };
    for (&(a, b), row) in pairs.iter().zip(rows) {
        let (values, zeros, weil_ok, same) = row?;
        report.cross_values.extend(values);
        report.zero_inner_products += zeros;
        report.matches_weil_sums &= weil_ok;
        if same {
            report.coinciding_pairs.push((a + 1, b + 1));
        }
    }
    Ok(report)
}

/// Side-by-side cardinalities of ovals and MUB sets in one order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnalogyReport {
    pub d: usize,
    pub plane: String,
    pub bound: usize,
    /// Size of the oval found, if any.
    pub oval_size: Option<usize>,
    pub oval: Option<Vec<usize>>,
    /// Largest arc reached by completing the oval (d+2 in even order).
    pub max_arc_found: Option<usize>,
    /// Number of bases in a verified complete set, if one was supplied.
    pub mub_count: Option<usize>,
    pub mubs_verified: Option<bool>,
    /// A triangle and three mutually unbiased bases exist.
    pub three_arc: bool,
    pub three_mubs: Option<bool>,
    pub matches: bool,
}

impl AnalogyReport {
    pub fn to_text(&self) -> String {
        let opt = |v: Option<usize>| v.map_or("none found".to_string(), |v| v.to_string());
        let mut s = format!("order/dimension d = {} ({})\n", self.d, self.plane);
        s += &format!("  bound d+1: {}\n", self.bound);
        s += &format!("  oval size: {}\n", opt(self.oval_size));
        s += &format!("  largest arc found: {}\n", opt(self.max_arc_found));
        match (self.mub_count, self.mubs_verified) {
            (Some(k), Some(true)) => s += &format!("  complete MUB set: {k} bases, verified\n"),
            (Some(k), _) => s += &format!("  MUB set: {k} bases, NOT verified\n"),
            _ => s += "  MUB set: not constructed\n",
        }
        s += &format!(
            "  3-arc exists: {}; 3 MUBs verified: {}\n",
            self.three_arc,
            self.three_mubs.map_or("n/a".into(), |b| b.to_string())
        );
        s += &format!("  cardinalities match: {}\n", if self.matches { "yes" } else { "no" });
        s
    }
}

pub fn analogy_report(plane: &Plane, mubs: Option<&MubSet>, seed: u64, exec: &Exec) -> Result<AnalogyReport> {
    let d = plane.order();
    if let Some(s) = mubs {
        if s.d != d {
            return Err(Error::DimensionMismatch(d, s.d));
        }
    }
    let census = search_ovals(plane, &SearchOptions::random(1_000_000, seed).collect(true), exec)?;
    let oval = census.oval_list.as_ref().and_then(|l| l.first()).map(|o| o.points().to_vec());
    let max_arc_found = oval.as_ref().map(|o| complete_arc(plane, o.clone()).len());
    let verified = match mubs {
        Some(s) => Some(verify_mub_set(s, exec)?),
        None => None,
    };
    let mub_count = mubs.map(|s| s.bases.len());
    let mubs_verified = verified.as_ref().map(|r| r.passed());
    let three_mubs = match mubs {
        Some(s) if s.bases.len() >= 3 => {
            let sub = MubSet { bases: s.bases[..3].to_vec(), ..s.clone() };
            Some(verify_mub_set(&sub, exec)?.passed())
        }
        Some(_) => Some(false),
        None => None,
    };
    let oval_size = oval.as_ref().map(|o| o.len());
    let matches = oval_size == Some(d + 1)
        && match (mub_count, mubs_verified) {
            (Some(k), Some(v)) => v && k == d + 1,
            _ => true,
        };
    Ok(AnalogyReport {
        d,
        plane: plane.name().to_string(),
        bound: d + 1,
        oval_size,
        three_arc: oval_size.is_some_and(|k| k >= 3),
        oval,
        max_arc_found,
        mub_count,
        mubs_verified,
        three_mubs,
        matches,
    })
}

/// Greedily adds points on no secant, in index order.
fn complete_arc(plane: &Plane, mut arc: Vec<usize>) -> Vec<usize> {
    for x in 0..plane.num_points() {
        if arc.contains(&x) {
            continue;
        }
        let free = (0..arc.len()).all(|i| (i + 1..arc.len()).all(|j| !plane.collinear(arc[i], arc[j], x)));
        if free {
            arc.push(x);
        }
    }
    arc.sort_unstable();
    arc
}

/// JSON form: `{"d", "root_order", "bases"}` with each entry a coefficient
/// vector over the power basis of Z[ζ_root_order].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MubFile {
    pub d: usize,
    pub root_order: u32,
    pub bases: Vec<Vec<Vec<Vec<i64>>>>,
}

impl MubSet {
    pub fn to_file(&self) -> MubFile {
        let bases = self
            .bases
            .iter()
            .map(|b| {
                b.iter()
                    .map(|v| {
                        v.entries
                            .iter()
                            .map(|e| e.coeffs().iter().map(|c| c.to_i64().expect("small coefficient")).collect())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        MubFile { d: self.d, root_order: self.root_order, bases }
    }

    pub fn from_file(file: &MubFile) -> Result<MubSet> {
        if !(1..=MAX_ROOT_ORDER).contains(&file.root_order) {
            return Err(Error::InvalidArgument(format!("root order {} not supported", file.root_order)));
        }
        let bases = file
            .bases
            .iter()
            .map(|b| {
                b.iter()
                    .map(|v| {
                        let entries = v
                            .iter()
                            .map(|c| CycInt::from_coeffs(file.root_order, c.iter().map(|&x| BigInt::from(x)).collect()))
                            .collect::<Result<Vec<_>>>()?;
                        Ok(MubVector { entries })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let set = MubSet { d: file.d, root_order: file.root_order, bases, provenance: Provenance::Imported };
        if let Some(msg) = check_shape(&set) {
            return Err(Error::InvalidArgument(msg));
        }
        Ok(set)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<MubSet> {
        let file: MubFile =
            serde_json::from_str(text).map_err(|e| Error::ParseError { line: e.line(), msg: e.to_string() })?;
        MubSet::from_file(&file)
    }
}

/// Decimal bases `{"d", "bases"}` with entries `[re, im]`, checked up to
/// a tolerance. For external data only.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FloatMubSet {
    pub d: usize,
    pub bases: Vec<Vec<Vec<[f64; 2]>>>,
}

impl FloatMubSet {
    pub fn from_json(text: &str) -> Result<FloatMubSet> {
        serde_json::from_str(text).map_err(|e| Error::ParseError { line: e.line(), msg: e.to_string() })
    }

    /// Checks normalized vectors: `|<u|v>|^2` is 1 or 0 inside a basis and
    /// `1/d` across bases, each within `tol`.
    pub fn verify(&self, tol: f64) -> Result<std::result::Result<(), String>> {
        let d = self.d;
        for (a, b) in self.bases.iter().enumerate() {
            if b.len() != d || b.iter().any(|v| v.len() != d) {
                return Err(Error::InvalidArgument(format!("basis {a} is not {d} x {d}")));
            }
        }
        let ip2 = |u: &[[f64; 2]], v: &[[f64; 2]]| {
            let (re, im) = u
                .iter()
                .zip(v)
                .fold((0.0, 0.0), |(re, im), (x, y)| (re + x[0] * y[0] + x[1] * y[1], im + x[0] * y[1] - x[1] * y[0]));
            re * re + im * im
        };
        for (a, ba) in self.bases.iter().enumerate() {
            for (b, bb) in self.bases.iter().enumerate().skip(a) {
                for (i, u) in ba.iter().enumerate() {
                    for (j, v) in bb.iter().enumerate() {
                        let want = if a != b {
                            1.0 / d as f64
                        } else if i == j {
                            1.0
                        } else {
                            0.0
                        };
                        let got = ip2(u, v);
                        if (got - want).abs() > tol {
                            return Ok(Err(format!("bases ({a},{b}) vectors ({i},{j}): {got} vs {want}")));
                        }
                    }
                }
            }
        }
        if self.bases.len() > d + 1 {
            return Ok(Err(format!("{} bases exceed d+1", self.bases.len())));
        }
        Ok(Ok(()))
    }
}
