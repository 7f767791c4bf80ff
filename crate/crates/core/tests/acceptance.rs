//! Acceptance criteria 1 to 12, one line each.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use arcmub::arcs::{
    canonical_conic, classify_oval, det3, is_arc, nucleus, pointed_conic, search_o_permutations, search_ovals,
    tangents_concurrent, HyperovalSearch, OPermutationOutcome, OvalClass, SearchOptions, SearchStatus,
};
use arcmub::cert::{oval_certificate, verify_certificate_json, with_meta, Meta};
use arcmub::cyclotomic::{weil_counts, weil_survey};
use arcmub::galois::{Elem, Field};
use arcmub::mub::{analogy_report, char2_failure_demo, fixture_d2, verify_mub_set, wf_mub_set};
use arcmub::par::Exec;
use arcmub::plane::{
    extract_ternary_ring, find_desargues_violation, nearfield9, pg2_order, ptr_properties, quasifield_plane,
    verify_desargues_certificate, verify_plane_axioms, DesarguesSearch, Plane,
};
use arcmub::table::{reproduce_table, Cell, TableOptions};
use arcmub::Error;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn exec() -> Exec {
    Exec::from_env(None)
}

fn gf(q: u64) -> Field {
    Field::of_order(q).unwrap()
}

fn plane(q: u64) -> Plane {
    pg2_order(q).unwrap()
}

fn hall() -> Plane {
    quasifield_plane(&nearfield9().unwrap()).unwrap()
}

fn c1_conic_cardinality() -> Check {
    for q in [2, 3, 4, 5, 7, 8, 9, 16] {
        let p = plane(q);
        let c = canonical_conic(&p).map_err(|e| e.to_string())?;
        ensure!(c.len() == q as usize + 1, "PG(2,{q}): conic has {} points", c.len());
        let arc = is_arc(&p, c.points()).map_err(|e| e.to_string())?;
        ensure!(arc.is_arc(), "PG(2,{q}): collinear triple {:?}", arc.witness);
    }
    Ok("q+1 points, arc, for q in {2,3,4,5,7,8,9,16}".into())
}

fn c2_determinants() -> Check {
    let mut tuples = 0u64;
    for q in [2, 3, 4, 5, 7, 8, 9] {
        let f = gf(q);
        let row = |s: Elem| [f.mul(s, s), Elem::ONE, s];
        for s1 in f.elements() {
            for s2 in f.elements() {
                let d = det3(&f, [[Elem::ONE, Elem::ZERO, Elem::ZERO], row(s1), row(s2)]);
                ensure!(d == f.sub(s2, s1), "GF({q}): 2-point determinant at ({s1},{s2})");
                for s3 in f.elements() {
                    let d = det3(&f, [row(s1), row(s2), row(s3)]);
                    let fact = f.mul(f.mul(f.sub(s1, s2), f.sub(s2, s3)), f.sub(s3, s1));
                    ensure!(d == fact, "GF({q}): 3-point determinant at ({s1},{s2},{s3})");
                    tuples += 1;
                }
            }
        }
    }
    Ok(format!("both factorizations hold on {tuples} parameter triples, q <= 9"))
}

fn c3_nucleus() -> Check {
    for q in [2, 4, 8, 16] {
        let p = plane(q);
        let c = canonical_conic(&p).unwrap();
        let n = tangents_concurrent(&p, c.points()).map_err(|e| e.to_string())?;
        let n = n.ok_or(format!("PG(2,{q}): tangents not concurrent"))?;
        ensure!(nucleus(&p, c.points()) == Ok(n), "PG(2,{q}): nucleus disagrees");
        let mut h = c.points().to_vec();
        h.push(n);
        ensure!(h.len() == q as usize + 2 && is_arc(&p, &h).unwrap().is_arc(), "PG(2,{q}): conic+nucleus not an arc");
    }
    for q in [3, 5, 7, 9] {
        let p = plane(q);
        let c = canonical_conic(&p).unwrap();
        ensure!(tangents_concurrent(&p, c.points()).unwrap().is_none(), "PG(2,{q}): tangents concur");
        ensure!(nucleus(&p, c.points()) == Err(Error::OddOrder(q as usize)), "PG(2,{q}): expected OddOrder");
    }
    Ok("hyperoval for q in {2,4,8,16}; OddOrder for q in {3,5,7,9}".into())
}

fn c4_pointed_conic() -> Check {
    for (q, want) in [(4, OvalClass::Conic), (8, OvalClass::PointedConic), (16, OvalClass::PointedConic)] {
        let p = plane(q);
        let c = canonical_conic(&p).unwrap();
        for &x in c.points() {
            let o = pointed_conic(&p, c.points(), x).map_err(|e| e.to_string())?;
            let got = classify_oval(&p, o.points()).map_err(|e| e.to_string())?.class;
            ensure!(got == want, "PG(2,{q}) drop {x}: {got}, expected {want}");
        }
    }
    Ok("GF(4): conic; GF(8), GF(16): pointed conic (every dropped point)".into())
}

fn c5_table() -> Check {
    let ex = exec();
    let t = reproduce_table(&TableOptions { max_n: Some(4), ..Default::default() }, &ex).map_err(|e| e.to_string())?;
    let want = [
        (1, ["yes", "no", "no"]),
        (2, ["yes", "no", "no"]),
        (3, ["yes", "yes", "no"]),
        (4, ["yes", "yes", "inconclusive"]),
    ];
    for (n, row) in want {
        for (class, w) in OvalClass::ALL.into_iter().zip(row) {
            let got = t.cell(n, class).unwrap().word();
            ensure!(got == w, "n={n} {class}: {got}, expected {w}");
        }
    }
    let c8 = t.columns[2].census.as_ref().unwrap().classes.clone().unwrap();
    ensure!(c8.irregular == 0 && c8.conic > 0 && c8.pointed_conic > 0, "PG(2,8) classes {c8:?}");

    // n = 4 fast path: verify an o-polynomial certificate.
    let p16 = plane(16);
    let found = search_o_permutations(&p16, HyperovalSearch { budget: 50_000_000 }, &ex).map_err(|e| e.to_string())?;
    let OPermutationOutcome::Found { coeffs, .. } = found else {
        return Err("no o-polynomial found within budget for PG(2,16)".into());
    };
    let t = reproduce_table(&TableOptions { opoly: Some(coeffs.clone()), ..Default::default() }, &ex).unwrap();
    let Some(Cell::Yes { witness, .. }) = t.cell(4, OvalClass::Irregular) else {
        return Err("supplied o-polynomial not accepted".into());
    };
    ensure!(witness.class == Some(OvalClass::Irregular), "n=4 witness class {:?}", witness.class);
    let mut forged = coeffs;
    forged.iter_mut().for_each(|c| *c = 0);
    forged[2] = 1;
    let t = reproduce_table(&TableOptions { opoly: Some(forged), ..Default::default() }, &ex).unwrap();
    ensure!(t.cell(4, OvalClass::Irregular).unwrap().word() == "inconclusive", "x^2 accepted as irregular");
    Ok(format!(
        "PG(2,2), PG(2,4): conic only; PG(2,8): {} conics, {} pointed, 0 irregular; n=4 irregular via o-polynomial certificate",
        c8.conic, c8.pointed_conic
    ))
}

/// Independent count: every (q+1)-subset with no collinear triple.
fn brute_force_ovals(p: &Plane, k: usize) -> u64 {
    fn rec(p: &Plane, k: usize, start: usize, chosen: &mut Vec<usize>) -> u64 {
        if chosen.len() == k {
            return 1;
        }
        let mut n = 0;
        for x in start..p.num_points() {
            let ok = (0..chosen.len()).all(|i| (i + 1..chosen.len()).all(|j| !p.collinear(chosen[i], chosen[j], x)));
            if ok {
                chosen.push(x);
                n += rec(p, k, x + 1, chosen);
                chosen.pop();
            }
        }
        n
    }
    rec(p, k, 0, &mut Vec::new())
}

fn c6_census() -> Check {
    let ex = exec();
    for (q, ovals, hyper) in [(2, 28, 7), (4, 1008, 168)] {
        let p = plane(q);
        let c = search_ovals(&p, &SearchOptions::exhaustive(), &ex).map_err(|e| e.to_string())?;
        ensure!(c.status == SearchStatus::Complete, "PG(2,{q}): status {:?}", c.status);
        ensure!(c.ovals == ovals && c.hyperovals == hyper, "PG(2,{q}): {} ovals, {} hyperovals", c.ovals, c.hyperovals);
        ensure!(c.ovals == (q + 2) * c.hyperovals, "PG(2,{q}): ovals != (q+2) * hyperovals");
        ensure!(brute_force_ovals(&p, q as usize + 1) == ovals, "PG(2,{q}): brute-force oval count differs");
        ensure!(brute_force_ovals(&p, q as usize + 2) == hyper, "PG(2,{q}): brute-force hyperoval count differs");
    }
    Ok("PG(2,2): 28 ovals, 7 hyperovals; PG(2,4): 1008 = 6 x 168".into())
}

fn c7_weil() -> Check {
    let ex = exec();
    for q in [3, 5, 9, 27] {
        let f = gf(q);
        let s = weil_survey(&f, &ex);
        ensure!(s.rows_constant_q(), "GF({q}): some |W|^2 != {q}");
        // Decimal cross-check of one row from raw exponent counts.
        let p = f.characteristic() as f64;
        for n in f.elements() {
            let counts = weil_counts(&f, Elem::ONE, n);
            let (re, im) = counts.iter().enumerate().fold((0.0, 0.0), |(re, im), (e, &c)| {
                let t = std::f64::consts::TAU * e as f64 / p;
                (re + c as f64 * t.cos(), im + c as f64 * t.sin())
            });
            ensure!(
                (re * re + im * im - q as f64).abs() < 1e-6,
                "GF({q}): decimal |W(1,{n})|^2 = {}",
                re * re + im * im
            );
        }
    }
    for q in [2, 4, 8, 16] {
        let s = weil_survey(&gf(q), &ex);
        ensure!(s.rows_single_spike(), "GF({q}): a row m != 0 does not vanish at all but one n");
    }
    Ok("|W|^2 = q over GF(3,5,9,27); single nonzero entry per row over GF(2,4,8,16)".into())
}

fn c8_mubs() -> Check {
    let ex = exec();
    for d in [3, 5, 7, 9, 25, 27] {
        let set = wf_mub_set(&gf(d)).map_err(|e| e.to_string())?;
        ensure!(set.bases.len() == d as usize + 1, "d={d}: {} bases", set.bases.len());
        let r = verify_mub_set(&set, &ex).map_err(|e| e.to_string())?;
        ensure!(r.passed(), "d={d}: {}", r.first_failure().unwrap_or_default());
    }
    let r = verify_mub_set(&fixture_d2(), &ex).unwrap();
    ensure!(r.passed() && r.num_bases == 3, "d=2 fixture: {}", r.summary());
    for q in [2, 4, 8] {
        let demo = char2_failure_demo(&gf(q), &ex).map_err(|e| e.to_string())?;
        ensure!(demo.zero_inner_products > 0, "GF({q}): no zero cross inner product");
        ensure!(!demo.verification.passed(), "GF({q}): quadratic phases verified");
    }
    Ok("d+1 verified bases for d in {3,5,7,9,25,27}; d=2 fixture 3 bases; char 2 zeros in GF(2,4,8)".into())
}

fn c9_hall() -> Check {
    let q = nearfield9().map_err(|e| e.to_string())?;
    let rep = q.report();
    ensure!(rep.is_quasifield(), "nearfield fails quasifield axioms: {rep:?}");
    ensure!(q.left_distributivity_failure().is_some(), "nearfield is left distributive");
    let h = quasifield_plane(&q).map_err(|e| e.to_string())?;
    let ax = verify_plane_axioms(&h);
    ensure!(ax.passed(), "Hall(9) axioms: {:?}", ax.first_failure());
    ensure!(h.num_points() == 91 && h.num_lines() == 91, "Hall(9) size");
    ensure!(h.lines().iter().all(|l| l.len() == 10), "Hall(9) line size");
    let ex = exec();
    let out = find_desargues_violation(&h, DesarguesSearch::exhaustive(), &ex);
    let cert = out.violation().ok_or("no Desargues violation in Hall(9)")?;
    verify_desargues_certificate(&h, cert)?;
    let text = with_meta(cert, &Meta::new("Hall(9)", 0, 1)).to_string();
    ensure!(verify_certificate_json(&text, None, &ex).unwrap().is_ok(), "Desargues certificate JSON fails");

    let (frame, labels) = h.standard_frame().ok_or("Hall(9) has no frame")?;
    let ptr = extract_ternary_ring(&h, frame, &labels).map_err(|e| e.to_string())?;
    ensure!(!ptr_properties(&ptr).is_field(), "Hall(9) ternary ring is a field");
    let p9 = plane(9);
    let (frame, labels) = p9.standard_frame().unwrap();
    ensure!(ptr_properties(&extract_ternary_ring(&p9, frame, &labels).unwrap()).is_field(), "PG(2,9) ring not a field");

    for d in [2, 3, 4] {
        let out = find_desargues_violation(&plane(d), DesarguesSearch::exhaustive(), &ex);
        ensure!(out.violation().is_none() && !out.inconclusive(), "PG(2,{d}): exhaustive Desargues check");
    }
    for d in [5, 7, 8, 9] {
        let out = find_desargues_violation(&plane(d), DesarguesSearch::sampled(100_000, 1), &ex);
        ensure!(out.violation().is_none(), "PG(2,{d}): sampled violation");
    }
    Ok("nearfield ok; 91 points/lines, 10 per line; violation certified; ring not a field; PG planes clean".into())
}

fn c10_hall_ovals() -> Check {
    let h = hall();
    let ex = exec();
    let c = search_ovals(&h, &SearchOptions::random(2_000_000, 7).collect(true), &ex).map_err(|e| e.to_string())?;
    let list = c.oval_list.clone().unwrap_or_default();
    ensure!(!list.is_empty(), "no oval found in Hall(9) ({:?})", c.status);
    for o in &list {
        ensure!(o.len() == 10, "oval of size {}", o.len());
        let cert = oval_certificate(&h, o.points()).map_err(|e| e.to_string())?;
        let text = with_meta(&cert, &Meta::new("Hall(9)", 7, ex.workers())).to_string();
        let v = verify_certificate_json(&text, None, &ex).map_err(|e| e.to_string())?;
        ensure!(v.is_ok(), "certificate rejected: {v:?}");
    }
    Ok(format!("{} distinct 10-point ovals, all certificates re-verify", list.len()))
}

fn c11_analogy() -> Check {
    let ex = exec();
    let mut parts = Vec::new();
    for d in [2u64, 3, 4, 5, 7, 8, 9] {
        let mubs = match d {
            2 => Some(fixture_d2()),
            4 | 8 => None,
            _ => Some(wf_mub_set(&gf(d)).unwrap()),
        };
        let r = analogy_report(&plane(d), mubs.as_ref(), 0, &ex).map_err(|e| e.to_string())?;
        ensure!(r.oval_size == Some(d as usize + 1), "d={d}: oval size {:?}", r.oval_size);
        if mubs.is_some() {
            ensure!(r.mub_count == Some(d as usize + 1) && r.mubs_verified == Some(true), "d={d}: {r:?}");
            ensure!(r.matches, "d={d}: report says no match");
            parts.push(format!("{d}:{}={}", d + 1, d + 1));
        } else {
            parts.push(format!("{d}:{}", d + 1));
        }
    }
    Ok(format!("oval size = MUB count per order ({})", parts.join(" ")))
}

fn c12_determinism() -> Check {
    let census = |q: u64, w: usize| {
        let p = plane(q);
        let c = search_ovals(&p, &SearchOptions::exhaustive().classify(true), &Exec::new(w)).unwrap();
        serde_json::to_string(&c).unwrap()
    };
    for q in [2, 4, 8] {
        let one = census(q, 1);
        for w in [4, 8] {
            ensure!(census(q, w) == one, "PG(2,{q}): census differs at {w} workers");
        }
    }
    let table = |w: usize| {
        let t = reproduce_table(&TableOptions { max_n: Some(3), ..Default::default() }, &Exec::new(w)).unwrap();
        serde_json::to_string(&t).unwrap()
    };
    let one = table(1);
    ensure!(table(4) == one && table(8) == one, "table differs across worker counts");
    Ok("census and table output byte-identical at 1, 4, 8 workers".into())
}

type Criterion = (u32, &'static str, Option<Duration>, fn() -> Check);

fn main() -> ExitCode {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria: [Criterion; 12] = [
        (1, "conic cardinality and arc property", secs(1), c1_conic_cardinality),
        (2, "determinant identities", secs(1), c2_determinants),
        (3, "nucleus behavior", None, c3_nucleus),
        (4, "pointed-conic dichotomy", None, c4_pointed_conic),
        (5, "table reproduction", secs(600), c5_table),
        (6, "census cross-checks", None, c6_census),
        (7, "Weil sums", None, c7_weil),
        (8, "MUB completeness", None, c8_mubs),
        (9, "Hall plane of order 9", secs(60), c9_hall),
        (10, "oval search in the Hall plane", None, c10_hall_ovals),
        (11, "analogy report", None, c11_analogy),
        (12, "determinism", None, c12_determinism),
    ];
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (n, name, limit, f) in criteria {
        if !filter.is_empty() && !filter.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or(e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let took = start.elapsed();
        let out = match (out, limit) {
            (Ok(_), Some(l)) if took > l => Err(format!("took {took:.2?}, limit {l:?}")),
            (o, _) => o,
        };
        match out {
            Ok(msg) => println!("criterion {n:>2} PASS [{took:>9.2?}] {name}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {n:>2} FAIL [{took:>9.2?}] {name}: {msg}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
