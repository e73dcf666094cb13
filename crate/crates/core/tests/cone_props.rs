use num_traits::Zero;
use proptest::prelude::*;
use toricbunch::cone::*;
use toricbunch::linalg::*;
use toricbunch::lp::System;
use toricbunch::FaceSet;

fn gens(dim: usize) -> impl Strategy<Value = Vec<Vec<Int>>> {
    proptest::collection::vec(proptest::collection::vec(-3i64..=3, dim), 1..=5)
        .prop_map(|g| g.into_iter().map(|v| ints(&v)).collect())
}

fn cone_in(dim: usize) -> impl Strategy<Value = Cone> {
    gens(dim).prop_map(move |g| Cone::from_generators(dim, &g))
}

fn point(dim: usize) -> impl Strategy<Value = Vec<Int>> {
    proptest::collection::vec(-4i64..=4, dim).prop_map(|v| ints(&v))
}

/// `x = Σ λ_i g_i` with `λ ≥ 0`.
fn lp_member(g: &[Vec<Int>], x: &[Int]) -> bool {
    let n = g.len();
    let mut sys = System::new(n);
    for (j, xj) in x.iter().enumerate() {
        let row: Vec<Int> = g.iter().map(|v| v[j].clone()).collect();
        sys.add(row, toricbunch::lp::Rel::Eq, xj.clone());
    }
    for i in 0..n {
        let mut row = vec![Int::zero(); n];
        row[i] = int(1);
        sys.ge(row, 0);
    }
    sys.solve().is_some()
}

/// Relative interiors meet, decided on the inequality descriptions.
fn hrep_overlap(a: &Cone, b: &Cone) -> bool {
    let d = a.ambient_dim();
    let mut sys = System::new(d);
    for c in [a, b] {
        for e in c.equations() {
            sys.eq(e.clone(), 0);
        }
        for f in c.facets() {
            sys.ge(f.clone(), 1);
        }
    }
    sys.solve().is_some()
}

/// Subsets of rays cut out by a supporting form.
fn brute_faces(c: &Cone) -> Vec<FaceSet> {
    let d = c.ambient_dim();
    let r = c.rays();
    let mut out: Vec<FaceSet> = FaceSet::all(r.len())
        .filter(|&s| {
            let mut sys = System::new(d);
            for l in c.lineality() {
                sys.eq(l.clone(), 0);
            }
            for (i, v) in r.iter().enumerate() {
                if s.contains(i) {
                    sys.eq(v.clone(), 0);
                } else {
                    sys.ge(v.clone(), 1);
                }
            }
            sys.solve().is_some()
        })
        .collect();
    out.sort();
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn membership_matches_lp(g in gens(3), x in point(3)) {
        let c = Cone::from_generators(3, &g);
        prop_assert_eq!(c.contains_int(&x), lp_member(&g, &x));
    }

    #[test]
    fn dual_involution(c in cone_in(3)) {
        prop_assert_eq!(c.dual().dual(), c.clone());
    }

    #[test]
    fn dual_involution_4d(c in cone_in(4)) {
        prop_assert_eq!(c.dual().dual(), c.clone());
    }

    #[test]
    fn rays_of_dual_are_facets(c in cone_in(3)) {
        if c.is_strictly_convex() {
            prop_assert_eq!(c.dual().rays().len(), c.facets().len());
        }
    }

    #[test]
    fn overlap_symmetric_and_matches_hrep(a in cone_in(3), b in cone_in(3)) {
        prop_assert_eq!(relint_overlap(&a, &b), relint_overlap(&b, &a));
        prop_assert_eq!(relint_overlap(&a, &b), hrep_overlap(&a, &b));
        prop_assert!(relint_overlap(&a, &a));
    }

    #[test]
    fn intersection_is_contained(a in cone_in(3), b in cone_in(3)) {
        let i = a.intersect(&b);
        prop_assert!(a.contains_cone(&i) && b.contains_cone(&i));
        prop_assert_eq!(i.clone(), b.intersect(&a));
    }

    #[test]
    fn faces_match_brute_force(c in cone_in(3)) {
        let mut f = c.face_ray_sets(1 << 12).unwrap();
        f.sort();
        prop_assert_eq!(f.clone(), brute_faces(&c));
        if c.is_simplicial() {
            prop_assert_eq!(f.len(), 1 << c.rays().len());
        }
    }

    #[test]
    fn separation_iff_common_face(a in cone_in(3), b in cone_in(3)) {
        let common = {
            let i = a.intersect(&b);
            i.is_face_of(&a) && i.is_face_of(&b)
        };
        let u = separating_form(&a, &b, None);
        prop_assert_eq!(u.is_some(), common);
        if let Some(u) = u {
            prop_assert!(is_separating_form(&a, &b, &u));
        }
    }

    #[test]
    fn relint_point_inside(c in cone_in(4)) {
        prop_assert!(c.relint_contains_int(&c.relint_point()));
    }
}

#[test]
fn plane_examples() {
    let c = Cone::from_i64(2, &[&[1, 0], &[0, 1]]);
    assert!(c.is_simplicial() && c.is_regular());
    let d = Cone::from_i64(2, &[&[1, 0], &[1, 2]]);
    assert!(d.is_simplicial() && !d.is_regular());
    assert_eq!(Cone::orthant(3).faces(64).unwrap().len(), 8);
}

#[test]
fn nonsimplicial_four_ray_cone() {
    let c = Cone::from_i64(3, &[&[1, 0, 1], &[0, 1, 2], &[1, 0, -2], &[0, 1, -1]]);
    assert!(!c.is_simplicial());
    let f = c.face_ray_sets(64).unwrap();
    assert_eq!(f, brute_faces(&c));
    assert_eq!(f.len(), 10);
}

#[test]
fn zero_cone_convention() {
    let z = Cone::zero(2);
    assert!(relint_overlap(&z, &z));
    assert!(relint_overlap(&z, &Cone::full(2)));
    assert!(!relint_overlap(&z, &Cone::orthant(2)));
}
