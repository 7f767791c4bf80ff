use std::collections::BTreeSet;

use arcmub::arcs::{
    canonical_conic, classify_oval, conic_solutions, is_arc_by_determinant, is_arc_by_incidence, is_oval, Conic,
    OvalClass,
};
use arcmub::galois::{Elem, Field};
use arcmub::plane::{nearfield9, parse_plane, pg2_order, quasifield_plane, verify_plane_axioms, write_plane};
use proptest::prelude::*;

/// Coefficient vectors up to scalars: first nonzero entry equal to 1.
fn normalized_conics(f: &Field) -> impl Iterator<Item = Conic> + '_ {
    let q = f.order() as u32;
    (1..q.pow(6)).filter_map(move |mut k| {
        let mut c = [Elem::ZERO; 6];
        for x in &mut c {
            *x = Elem(k % q);
            k /= q;
        }
        let lead = c.iter().find(|x| !x.is_zero())?;
        (*lead == Elem::ONE).then(|| Conic::new(f, c)).flatten()
    })
}

#[test]
fn proper_conic_count_matches_group_order_formula() {
    for q in [2u64, 3, 4, 5] {
        let f = Field::of_order(q).unwrap();
        let proper = normalized_conics(&f).filter(|c| c.is_proper(&f)).count() as u64;
        assert_eq!(proper, q.pow(5) - q.pow(2), "q = {q}");
    }
}

#[test]
fn proper_conics_are_ovals_and_classify_as_conics() {
    for q in [3u64, 4, 5] {
        let plane = pg2_order(q).unwrap();
        let f = plane.field().unwrap().clone();
        let mut sets = BTreeSet::new();
        for c in normalized_conics(&f).filter(|c| c.is_proper(&f)) {
            let pts = conic_solutions(&plane, &c).unwrap();
            assert!(is_oval(&plane, &pts), "q = {q}: {:?}", c.coeff_indices());
            sets.insert(pts);
        }
        if q >= 4 {
            assert_eq!(sets.len() as u64, q.pow(5) - q.pow(2));
            for s in sets.iter().take(50) {
                assert_eq!(classify_oval(&plane, s).unwrap().class, OvalClass::Conic);
            }
        }
    }
}

#[test]
fn plane_files_round_trip() {
    let hall = quasifield_plane(&nearfield9().unwrap()).unwrap();
    for plane in [pg2_order(2).unwrap(), pg2_order(7).unwrap(), hall] {
        let mut buf = Vec::new();
        write_plane(&plane, &mut buf).unwrap();
        let back = parse_plane(buf.as_slice(), true).unwrap();
        assert_eq!(back.order(), plane.order());
        assert_eq!(back.lines(), plane.lines());
        assert!(verify_plane_axioms(&back).passed());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn incidence_and_determinant_agree(qi in 0usize..6, picks in prop::collection::vec(any::<prop::sample::Index>(), 3..8)) {
        let q = [2u64, 3, 4, 5, 7, 8][qi];
        let plane = pg2_order(q).unwrap();
        let mut pts: Vec<usize> = picks.iter().map(|i| i.index(plane.num_points())).collect();
        pts.sort_unstable();
        pts.dedup();
        let a = is_arc_by_incidence(&plane, &pts).unwrap();
        let b = is_arc_by_determinant(&plane, &pts).unwrap();
        prop_assert_eq!(a.is_arc(), b.is_arc());
    }

    #[test]
    fn dropping_a_conic_point_keeps_an_arc(qi in 0usize..5, drop in any::<prop::sample::Index>()) {
        let q = [3u64, 4, 5, 8, 9][qi];
        let plane = pg2_order(q).unwrap();
        let mut pts = canonical_conic(&plane).unwrap().points().to_vec();
        pts.remove(drop.index(pts.len()));
        prop_assert!(is_arc_by_incidence(&plane, &pts).unwrap().is_arc());
        prop_assert!(!is_oval(&plane, &pts));
    }
}
