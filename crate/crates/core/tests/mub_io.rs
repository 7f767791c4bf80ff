use arcmub::cyclotomic::{weil_sum, CycInt};
use arcmub::galois::Field;
use arcmub::mub::{inner_product, verify_mub_set, wf_mub_set, MubSet};
use arcmub::par::Exec;
use proptest::prelude::*;

#[test]
fn json_round_trip_preserves_verification() {
    let set = wf_mub_set(&Field::new(7, 1, None).unwrap()).unwrap();
    let back = MubSet::from_json(&set.to_json()).unwrap();
    assert_eq!(back.bases, set.bases);
    assert!(verify_mub_set(&back, &Exec::sequential()).unwrap().passed());
}

#[test]
fn tampered_phase_is_detected() {
    let set = wf_mub_set(&Field::new(5, 1, None).unwrap()).unwrap();
    let mut file = set.to_file();
    let v = &mut file.bases[2][1][3];
    v[0] += 1;
    let bad = MubSet::from_file(&file).unwrap();
    assert!(!verify_mub_set(&bad, &Exec::sequential()).unwrap().passed());
}

#[test]
fn truncated_json_is_rejected() {
    let text = wf_mub_set(&Field::new(3, 1, None).unwrap()).unwrap().to_json();
    assert!(MubSet::from_json(&text[..text.len() / 2]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Cross-basis overlaps of the quadratic-phase set are Weil sums in disguise:
    /// |<u|v>|^2 equals the modulus of a sum over the field, which is q.
    #[test]
    fn cross_overlaps_have_weil_magnitude(qi in 0usize..4, a in 1usize..100, b in 1usize..100, i in 0usize..100, j in 0usize..100) {
        let q = [3u64, 5, 7, 9][qi];
        let f = Field::of_order(q).unwrap();
        let set = wf_mub_set(&f).unwrap();
        let (a, b) = (a % set.bases.len(), b % set.bases.len());
        prop_assume!(a != b && a != 0 && b != 0);
        let u = &set.bases[a][i % q as usize];
        let v = &set.bases[b][j % q as usize];
        let ip = inner_product(u, v).unwrap();
        prop_assert_eq!(ip.magnitude_sq().unwrap(), q.into());
        let w: CycInt = weil_sum(&f, f.elem(1).unwrap(), f.elem(0).unwrap()).unwrap();
        prop_assert_eq!(w.magnitude_sq().unwrap(), ip.magnitude_sq().unwrap());
    }
}
