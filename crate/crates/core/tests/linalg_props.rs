use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use toricbunch::linalg::*;
use toricbunch::lp::{Rel, System};

fn matrix(max_r: usize, max_c: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max_r, 1..=max_c).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(-6i64..=6, c), r)
            .prop_map(move |rows| IntMatrix::from_rows(c, rows.into_iter().map(|row| ints(&row)).collect()))
    })
}

fn rows_of(r: usize, c: usize) -> impl Strategy<Value = IntMatrix> {
    proptest::collection::vec(proptest::collection::vec(-6i64..=6, c), 1..=r)
        .prop_map(move |rows| IntMatrix::from_rows(c, rows.into_iter().map(|row| ints(&row)).collect()))
}

fn abs_det_one(m: &IntMatrix) -> bool {
    m.nrows() == m.ncols() && m.det().abs().is_one()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn hnf_transform(m in matrix(4, 5)) {
        let (h, u) = hnf(&m);
        prop_assert!(abs_det_one(&u));
        prop_assert_eq!(u.mul(&m), h.clone());
        // pivots positive, entries above reduced
        let mut col = 0;
        for i in 0..h.nrows() {
            while col < h.ncols() && h.get(i, col).is_zero() {
                col += 1;
            }
            if col == h.ncols() {
                prop_assert!(h.row(i).iter().all(Zero::is_zero));
                continue;
            }
            let p = h.get(i, col).clone();
            prop_assert!(p.is_positive());
            for k in 0..i {
                let x = h.get(k, col);
                prop_assert!(!x.is_negative() && *x < p);
            }
            for k in i + 1..h.nrows() {
                prop_assert!(h.get(k, col).is_zero());
            }
            col += 1;
        }
    }

    #[test]
    fn snf_transform(m in matrix(4, 5)) {
        let (s, u, v) = snf(&m);
        prop_assert!(abs_det_one(&u) && abs_det_one(&v));
        prop_assert_eq!(u.mul(&m).mul(&v), s.clone());
        let d = elementary_divisors(&m);
        prop_assert_eq!(d.len(), m.rank());
        for w in d.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        for i in 0..s.nrows() {
            for j in 0..s.ncols() {
                if i != j {
                    prop_assert!(s.get(i, j).is_zero());
                }
            }
        }
    }

    #[test]
    fn kernel_annihilated(m in matrix(3, 5)) {
        let k = kernel_basis(&m);
        for v in k.vectors() {
            prop_assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
        prop_assert_eq!(k.rank() + m.rank(), m.ncols());
        prop_assert!(is_primitive(&k));
    }

    #[test]
    fn saturation(m in matrix(3, 4)) {
        let s = Sublattice::generated_by(m.ncols(), m.rows());
        let t = saturate(&s);
        prop_assert_eq!(saturate(&t), t.clone());
        for v in s.vectors() {
            prop_assert!(t.contains(v));
        }
        prop_assert_eq!(t.rank(), s.rank());
        // index of s in t from Smith form of s expressed in a basis of t
        let coords: Vec<Vec<Int>> = s
            .vectors()
            .iter()
            .map(|v| solve_in_span(t.vectors(), &to_rat(v)).unwrap().into_iter().map(|x| x.to_integer()).collect())
            .collect();
        let idx: Int = if coords.is_empty() {
            Int::one()
        } else {
            elementary_divisors(&IntMatrix::from_rows(t.rank(), coords)).iter().product()
        };
        prop_assert_eq!(idx, s.saturation_index());
    }

    #[test]
    fn deterministic(m in matrix(4, 4)) {
        prop_assert_eq!(hnf(&m), hnf(&m));
        prop_assert_eq!(snf(&m), snf(&m));
        prop_assert_eq!(kernel_basis(&m), kernel_basis(&m));
    }

    #[test]
    fn intersections(a in rows_of(2, 3), b in rows_of(2, 3)) {
        let la = Sublattice::generated_by(3, a.rows());
        let lb = Sublattice::generated_by(3, b.rows());
        let both = lattice_intersection(3, &[la.clone(), lb.clone()]);
        for v in both.vectors() {
            prop_assert!(la.contains(v) && lb.contains(v));
        }
        let sub = subspace_intersection(3, &[la.clone(), lb.clone()]);
        prop_assert!(is_primitive(&sub));
        prop_assert_eq!(sub.rank(), both.rank());
    }
}

/// Fourier–Motzkin elimination on `a·x ≥ b` rows, the oracle for the simplex.
fn fm_feasible(mut rows: Vec<(Vec<Rat>, Rat)>, nvars: usize) -> bool {
    for v in 0..nvars {
        let (mut pos, mut neg, mut zero) = (Vec::new(), Vec::new(), Vec::new());
        for r in rows {
            if r.0[v].is_positive() {
                pos.push(r);
            } else if r.0[v].is_negative() {
                neg.push(r);
            } else {
                zero.push(r);
            }
        }
        for (pa, pb) in &pos {
            for (na, nb) in &neg {
                let s = pa[v].clone();
                let t = -na[v].clone();
                let a: Vec<Rat> = pa.iter().zip(na).map(|(x, y)| x * &t + y * &s).collect();
                zero.push((a, pb * &t + nb * &s));
            }
        }
        rows = zero;
    }
    rows.iter().all(|(_, b)| !b.is_positive())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn lp_matches_fourier_motzkin(
        nvars in 1usize..=3,
        raw in proptest::collection::vec((proptest::collection::vec(-3i64..=3, 3), 0u8..3, -3i64..=3), 1..=5)
    ) {
        let mut sys = System::new(nvars);
        let mut fm = Vec::new();
        for (c, rel, b) in &raw {
            let c: Vec<i64> = c[..nvars].to_vec();
            let rel = [Rel::Eq, Rel::Ge, Rel::Le][*rel as usize];
            sys.add(ints(&c), rel, int(*b));
            let cr: Vec<Rat> = c.iter().map(|&x| Rat::from(int(x))).collect();
            let br = Rat::from(int(*b));
            let neg = |v: &[Rat]| v.iter().map(|x| -x.clone()).collect::<Vec<_>>();
            match rel {
                Rel::Ge => fm.push((cr, br)),
                Rel::Le => fm.push((neg(&cr), -br)),
                Rel::Eq => {
                    fm.push((cr.clone(), br.clone()));
                    fm.push((neg(&cr), -br));
                }
            }
        }
        let sol = sys.solve();
        prop_assert_eq!(sol.is_some(), fm_feasible(fm, nvars));
        if let Some(x) = sol {
            prop_assert!(sys.satisfied_by(&x));
        }
    }
}

#[test]
fn hnf_example() {
    let (h, _) = hnf(&IntMatrix::from_i64(&[&[2, 4], &[1, 3]]));
    assert_eq!(h, IntMatrix::from_i64(&[&[1, 1], &[0, 2]]));
}

#[test]
fn intersection_literal_vs_saturated() {
    let a = Sublattice::generated_by(1, &[ints(&[2])]);
    let b = Sublattice::generated_by(1, &[ints(&[3])]);
    assert_eq!(
        lattice_intersection(1, &[a.clone(), b.clone()]).vectors(),
        &[ints(&[6])]
    );
    assert_eq!(subspace_intersection(1, &[a, b]), Sublattice::full(1));
}
