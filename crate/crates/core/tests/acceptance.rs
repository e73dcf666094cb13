//! One pass/fail line per acceptance criterion. All comparisons are exact;
//! the only numeric tolerances are pinned below.

mod common;

use common::*;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};
use toricbunch::bunch::{free_bunch_isomorphic, Bunch};
use toricbunch::catalog;
use toricbunch::classify::*;
use toricbunch::cone::{is_separating_form, relint_overlap, Cone};
use toricbunch::divisor;
use toricbunch::fan::*;
use toricbunch::linalg::{int, ints, Rat};
use toricbunch::{Error, FaceSet, Fan, Limits, ProjectableFan};

/// Wall-clock budget for the weighted projective plane round trip.
const P123_BUDGET: Duration = Duration::from_secs(1);
const MIN_RANDOM_INSTANCES: usize = 100;
const MIN_SEPARATION_PAIRS: usize = 1000;
const KLEINSCHMIDT_DIM: usize = 4;
const KLEINSCHMIDT_B: u64 = 3;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_p123_round_trip() -> Outcome {
    let l = Limits::default();
    let start = Instant::now();
    let b = catalog::p123(&l).map_err(|e| e.to_string())?;
    let f = bunch_to_fan(&b).map_err(|e| e.to_string())?;
    ensure(f.n_rank() == 2, || format!("fan lives in rank {}", f.n_rank()))?;
    ensure(
        f.max_cones().len() == 3 && f.max_cones().iter().all(|c| c.len() == 2),
        || format!("maximal cones {:?}", f.max_cones()),
    )?;
    let target = Fan::from_i64(2, &[&[1, 0], &[0, 1], &[-2, -3]], &[&[0, 1], &[1, 2], &[0, 2]]).unwrap();
    let iso = fan_isomorphism(&f, &target, &l).map_err(|e| e.to_string())?;
    ensure(iso.is_some(), || {
        "no unimodular change of basis to the reference fan".into()
    })?;
    let back = fan_to_bunch(&f, &l).map_err(|e| e.to_string())?;
    let same = free_bunch_isomorphic(&b, &back, &l).map_err(|e| e.to_string())?;
    ensure(same.is_some(), || {
        "fan_to_bunch result not isomorphic to the input".into()
    })?;
    let t = start.elapsed();
    ensure(t < P123_BUDGET, || format!("took {t:?}"))?;
    Ok(format!("{t:?}"))
}

fn c2_functor_duality() -> Outcome {
    let l = limits();
    let (mut bunches, mut fans, mut fail) = (0, 0, 0);
    let instances = random_instances(2024, MIN_RANDOM_INSTANCES);
    for (pc, bs) in &instances {
        for b in bs {
            let pf = bunch_to_projectable_fan(b);
            match projectable_fan_to_bunch(&pf, &l) {
                Ok(back) if back == *b => {}
                _ => fail += 1,
            }
            bunches += 1;
        }
        let dpc = pc.dual();
        for sigma in maximal_projectable_fans(&dpc, &l) {
            let pf = ProjectableFan::new(dpc.clone(), sigma.clone()).unwrap();
            match projectable_fan_to_bunch(&pf, &l) {
                Ok(b) if bunch_to_projectable_fan(&b).max_faces() == sigma.as_slice() => {}
                _ => fail += 1,
            }
            fans += 1;
        }
    }
    ensure(fail == 0, || format!("{fail} failures"))?;
    ensure(bunches > 0 && fans == bunches, || {
        format!("{bunches} bunches vs {fans} maximal fans")
    })?;
    Ok(format!(
        "{} instances, {bunches} bunches, {fans} maximal projectable fans",
        instances.len()
    ))
}

fn c3_nonmaximal() -> Outcome {
    let l = Limits::default();
    let s = catalog::projectable_plane(false).map_err(|e| e.to_string())?;
    match projectable_fan_to_bunch(&s, &l) {
        Err(Error::NotMaximal) => {}
        other => return Err(format!("two-cone fan gave {other:?}")),
    }
    let s2 = catalog::projectable_plane(true).map_err(|e| e.to_string())?;
    let b = projectable_fan_to_bunch(&s2, &l).map_err(|e| e.to_string())?;
    ensure(b.cones() == vec![Cone::orthant(1)], || {
        format!("three-cone fan gave {:?}", b.cones())
    })?;
    Ok("NotMaximal, then {Q≥0}".into())
}

fn c4_separation() -> Outcome {
    let mut r = rng(4);
    let (mut pairs, mut bad) = (0usize, 0usize);
    while pairs < MIN_SEPARATION_PAIRS {
        let pc = random_projected_cone(&mut r, 5, 3);
        let e = pc.e_rank();
        for a in FaceSet::all(e) {
            for b in FaceSet::all(e) {
                let sep = pc.invariant_separation(a, b);
                let ov = relint_overlap(&pc.projected_face(a), &pc.projected_face(b));
                if sep.is_some() != ov || sep.is_some_and(|u| !pc.dual().is_invariant_form(&u)) {
                    bad += 1;
                }
                pairs += 1;
            }
        }
    }
    ensure(bad == 0, || format!("{bad} mismatches in {pairs} pairs"))?;
    let (raw, g1, g2) = catalog::nonsimplicial_separation();
    ensure(!raw.gamma.is_simplicial(), || {
        "cone should be nonsimplicial".into()
    })?;
    ensure(!relint_overlap(&raw.projected(&g1), &raw.projected(&g2)), || {
        "projected relative interiors meet".into()
    })?;
    let (s1, s2) = (raw.face_star(&g1), raw.face_star(&g2));
    let witness: Vec<Rat> = [1, -1, 0].iter().map(|&x| Rat::from(int(x))).collect();
    ensure(is_separating_form(&s1, &s2, &witness), || {
        "e1-e2 does not separate".into()
    })?;
    let invariant = raw.invariant_forms().iter().any(|v| v == &ints(&[1, 0, 0]))
        && raw.invariant_forms().iter().any(|v| v == &ints(&[0, 1, 0]));
    ensure(invariant, || "e1-e2 is not invariant".into())?;
    Ok(format!("{pairs} pairs, counterexample reproduced"))
}

fn c5_dictionary() -> Outcome {
    let l = limits();
    let mut bs: Vec<Bunch> = vec![catalog::p123(&l).unwrap()];
    bs.push(projectable_fan_to_bunch(&catalog::projectable_plane(true).unwrap(), &l).unwrap());
    bs.extend(
        random_instances(2024, MIN_RANDOM_INSTANCES)
            .into_iter()
            .flat_map(|(_, bs)| bs)
            .filter(Bunch::is_standard),
    );
    for d in enumerate_kleinschmidt(KLEINSCHMIDT_DIM, KLEINSCHMIDT_B, &l).map_err(|e| e.to_string())? {
        bs.push(kleinschmidt_to_bunch(&d, &l).map_err(|e| e.to_string())?);
    }
    let mut bad = Vec::new();
    let mut checks = 0;
    for b in &bs {
        if !b.is_standard() {
            continue;
        }
        for (name, x, y) in dictionary_pairs(b, &l) {
            if x != y {
                bad.push(name);
            }
            checks += 1;
        }
    }
    ensure(bad.is_empty(), || format!("mismatches: {bad:?}"))?;
    Ok(format!("{} bunches, {checks} flag comparisons", bs.len()))
}

fn c6_oda() -> Outcome {
    let l = Limits::default();
    let b = catalog::oda(&l).map_err(|e| e.to_string())?;
    let d = b.dictionary();
    ensure(d.q_factorial && d.complete, || format!("{d:?}"))?;
    ensure(!divisor::ample_nonempty(&b), || "ample cone nonempty".into())?;
    let mori = divisor::mori_cone(&b).map_err(|e| e.to_string())?;
    ensure(!mori.is_strictly_convex(), || "Mori cone strictly convex".into())?;
    let sa = divisor::semiample_cone(&b);
    ensure(sa == Cone::from_i64(3, &[&[1, 1, 1]]), || {
        format!("semiample cone {sa:?}")
    })?;
    let k = divisor::anticanonical_class(&b).map_err(|e| e.to_string())?;
    ensure(sa.contains_int(&k), || {
        format!("anticanonical class {k:?} outside")
    })?;
    Ok(format!("semiample ray (1,1,1), -K = {k:?}"))
}

fn c7_eikelberg() -> Outcome {
    let l = Limits::default();
    let mut dims = Vec::new();
    for prime in [false, true] {
        let f = catalog::eikelberg(prime).map_err(|e| e.to_string())?;
        let b = fan_to_bunch(&f, &l).map_err(|e| e.to_string())?;
        ensure(divisor::pic_q(&b).rank() == divisor::b2(&b), || {
            "b2 differs from rank of Pic_Q".into()
        })?;
        dims.push(divisor::b2(&b));
    }
    ensure(dims == [1, 0], || format!("dim Pic_Q = {dims:?}"))?;
    Ok("dim Pic_Q = 1 and 0".into())
}

fn c8_kleinschmidt() -> Outcome {
    let l = limits();
    let all = enumerate_kleinschmidt(KLEINSCHMIDT_DIM, KLEINSCHMIDT_B, &l).map_err(|e| e.to_string())?;
    let mut agree = 0;
    for d in &all {
        let b = kleinschmidt_to_bunch(d, &l).map_err(|e| e.to_string())?;
        let dict = b.dictionary();
        let o = bunch_to_fan(&b).map_err(|e| e.to_string())?.oracles(&l);
        let ample = divisor::ample_nonempty(&b);
        let projective = divisor::is_projective_simplicial(&b).map_err(|e| e.to_string())?;
        ensure(dict.smooth && dict.complete && o.smooth && o.complete, || {
            format!("{d:?} not smooth complete")
        })?;
        ensure(ample && o.quasiprojective && projective, || {
            format!("{d:?} not projective")
        })?;
        let diag = kleinschmidt_fano_diagnosis(d, &l).map_err(|e| e.to_string())?;
        ensure(diag.aligned == diag.ample, || {
            format!("{d:?}: closed form disagrees with ample test")
        })?;
        if diag.literal == diag.ample {
            agree += 1;
        }
    }
    let f1 = KleinschmidtData::new(vec![1, 0], vec![2, 1, 1]).unwrap();
    let f2 = KleinschmidtData::new(vec![2, 0], vec![2, 1, 1]).unwrap();
    ensure(kleinschmidt_is_fano(&f1, &l).unwrap(), || "F1 not Fano".into())?;
    ensure(!kleinschmidt_is_fano(&f2, &l).unwrap(), || "F2 Fano".into())?;
    Ok(format!(
        "{} data; literal inequality agrees on {agree}/{} ({:.1}%)",
        all.len(),
        all.len(),
        100.0 * agree as f64 / all.len() as f64
    ))
}

fn c9_pic_lattice() -> Outcome {
    let l = Limits::default();
    let b = catalog::p123(&l).map_err(|e| e.to_string())?;
    let cl = divisor::class_group(&b).map_err(|e| e.to_string())?;
    ensure(cl == (1, vec![]), || format!("Cl = {cl:?}"))?;
    let pic = divisor::pic_lattice_free(&b).map_err(|e| e.to_string())?;
    ensure(pic.vectors() == [ints(&[6])], || {
        format!("Pic = {:?}", pic.vectors())
    })?;
    let sa = divisor::semiample_cone(&b);
    ensure(sa == Cone::orthant(1), || format!("semiample {sa:?}"))?;
    let six = Rat::from(int(6));
    ensure(
        divisor::is_ample(&b, &[six]) && !divisor::is_ample(&b, &[Rat::from(int(-6))]),
        || "ample test on the generator".into(),
    )?;
    Ok("Pic = 6Z in Cl = Z".into())
}

fn c10_canonical_extension() -> Outcome {
    let l = Limits {
        max_faces: 1 << 20,
        ..Limits::default()
    };
    let b = catalog::oda(&l).map_err(|e| e.to_string())?;
    let ext = canonical_extension(&b, &[2; 6], &l).map_err(|e| e.to_string())?;
    let d = ext.dictionary();
    ensure(d.complete && d.q_factorial, || format!("{d:?}"))?;
    ensure(!divisor::ample_nonempty(&ext), || {
        "extension became projective".into()
    })?;
    let (d0, d1) = (variety_dimension(&b), variety_dimension(&ext));
    ensure(d1 == d0 + 6, || format!("dimension {d0} -> {d1}"))?;
    Ok(format!("dimension {d0} -> {d1}"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("weighted projective plane round trip", c1_p123_round_trip),
        ("functor duality on random projected cones", c2_functor_duality),
        ("non-maximal projectable fan rejected", c3_nonmaximal),
        ("invariant separation suite", c4_separation),
        ("dictionary cross-validation", c5_dictionary),
        ("Oda example", c6_oda),
        ("Eikelberg pair", c7_eikelberg),
        ("Kleinschmidt suite", c8_kleinschmidt),
        ("Pic lattice of P(1,2,3)", c9_pic_lattice),
        ("canonical extension of the Oda bunch", c10_canonical_extension),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let n = i + 1;
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {n}: {name} ({detail})"),
            Err(why) => {
                println!("FAIL criterion {n}: {name} ({why})");
                failed.push(n);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
