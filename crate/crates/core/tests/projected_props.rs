mod common;

use common::*;
use toricbunch::cone::{relint_overlap, Cone};
use toricbunch::linalg::{hnf, IntMatrix};
use toricbunch::{FaceSet, ProjectedCone};

#[test]
fn face_star_reverses_order() {
    let mut r = rng(11);
    for _ in 0..20 {
        let pc = random_projected_cone(&mut r, 5, 3);
        let e = pc.e_rank();
        let stars: Vec<Cone> = FaceSet::all(e).map(|f| pc.face_star(f)).collect();
        let mut distinct = stars.clone();
        distinct.sort();
        distinct.dedup();
        assert_eq!(distinct.len(), 1 << e);
        for i in FaceSet::all(e) {
            for j in FaceSet::all(e) {
                let sub = stars[i.bits() as usize].contains_cone(&stars[j.bits() as usize]);
                assert_eq!(i.is_subset(j), sub);
            }
        }
    }
}

#[test]
fn invariant_separation_lemma() {
    let mut r = rng(12);
    let mut pairs = 0;
    for _ in 0..12 {
        let pc = random_projected_cone(&mut r, 5, 3);
        let e = pc.e_rank();
        for a in FaceSet::all(e) {
            for b in FaceSet::all(e) {
                let sep = pc.invariant_separation(a, b);
                let ov = relint_overlap(&pc.projected_face(a), &pc.projected_face(b));
                assert_eq!(sep.is_some(), ov, "{pc:?} {a} {b}");
                if let Some(u) = sep {
                    assert!(pc.dual().is_invariant_form(&u));
                }
                pairs += 1;
            }
        }
    }
    assert!(pairs >= 1000);
}

#[test]
fn injective_iff_surjective() {
    let mut r = rng(13);
    for _ in 0..20 {
        let pc = random_projected_cone(&mut r, 6, 3);
        for f in FaceSet::all(pc.e_rank()) {
            assert_eq!(pc.q_injective_on_face(f), pc.p_surjective_on_star(f));
            assert_eq!(
                pc.q_maps_face_lattice_primitively(f),
                pc.p_maps_star_lattice_onto(f)
            );
        }
    }
}

#[test]
fn double_dual() {
    let mut r = rng(14);
    for _ in 0..30 {
        let pc = random_projected_cone(&mut r, 6, 3);
        let dd = pc.dual().dual();
        assert_eq!(*dd, pc);
        // recomputed without the cache: same γ, Q in Hermite normal form
        let d = pc.dual();
        let fresh = ProjectedCone::new(d.q().clone(), d.gamma_generators().to_vec()).unwrap();
        let fdd = fresh.dual();
        assert_eq!(fdd.gamma_generators(), pc.gamma_generators());
        let (h, _) = hnf(pc.q());
        assert_eq!(
            *fdd.q(),
            IntMatrix::from_rows(h.ncols(), h.rows()[..pc.k_rank()].to_vec())
        );
    }
}

#[test]
fn rejects_bad_input() {
    assert!(ProjectedCone::from_weights(
        1,
        &[toricbunch::linalg::ints(&[2]), toricbunch::linalg::ints(&[4])]
    )
    .is_err());
    assert!(ProjectedCone::new(
        IntMatrix::from_i64(&[&[1, 1]]),
        vec![
            toricbunch::linalg::ints(&[1, 1]),
            toricbunch::linalg::ints(&[2, 2])
        ]
    )
    .is_err());
}
