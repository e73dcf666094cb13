#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;
use toricbunch::bunch::{enumerate_bunches, Bunch};
use toricbunch::fan::{bunch_to_fan, bunch_to_projectable_fan, ProjectableFan};
use toricbunch::linalg::{int, is_surjective, Int, IntMatrix};
use toricbunch::{FaceSet, Fan, Limits, ProjectedCone};

pub fn limits() -> Limits {
    Limits {
        max_faces: 1 << 16,
        max_enum: 64,
        max_search: 1 << 20,
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small(r: &mut ChaCha8Rng, lo: i64, hi: i64) -> Int {
    int(r.gen_range(lo..=hi))
}

/// A random projected cone with `e ≤ max_e`, `k ≤ max_k`. Every third one
/// has a non-orthant γ.
pub fn random_projected_cone(r: &mut ChaCha8Rng, max_e: usize, max_k: usize) -> ProjectedCone {
    loop {
        let k = r.gen_range(1..=max_k);
        let e = r.gen_range(k + 1..=max_e);
        let q = IntMatrix::from_rows(
            e,
            (0..k)
                .map(|_| (0..e).map(|_| small(r, -2, 2)).collect())
                .collect(),
        );
        if !is_surjective(&q) {
            continue;
        }
        let gens: Vec<Vec<Int>> = if r.gen_range(0..3) == 0 {
            (0..e)
                .map(|i| {
                    (0..e)
                        .map(|j| if i == j { int(1) } else { small(r, -1, 1) })
                        .collect()
                })
                .collect()
        } else {
            IntMatrix::identity(e).into_rows()
        };
        if let Ok(pc) = ProjectedCone::new(q, gens) {
            if pc.images(&limits()).is_ok_and(|im| im.cones().len() <= 64) {
                return pc;
            }
        }
    }
}

/// Random simplicial projected cones with their bunches.
pub fn random_instances(seed: u64, count: usize) -> Vec<(Arc<ProjectedCone>, Vec<Bunch>)> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let pc = Arc::new(random_projected_cone(&mut r, 6, 3));
            let bs = enumerate_bunches(&pc, &limits()).expect("within limits");
            (pc, bs)
        })
        .collect()
}

/// Maximal projectable fans found independently of bunches: maximal sets
/// of pairwise separable faces of δ, reduced to their maximal members and
/// filtered by maximality.
pub fn maximal_projectable_fans(dpc: &Arc<ProjectedCone>, l: &Limits) -> Vec<Vec<FaceSet>> {
    let e = dpc.e_rank();
    let faces: Vec<FaceSet> = FaceSet::all(e).collect();
    let n = faces.len();
    let mut adj = vec![0u64; n];
    for a in 0..n {
        for b in a + 1..n {
            if dpc.invariant_form(faces[a], faces[b]).is_some() {
                adj[a] |= 1 << b;
                adj[b] |= 1 << a;
            }
        }
    }
    let mut cliques = Vec::new();
    bron_kerbosch(
        &adj,
        0,
        if n == 64 { u64::MAX } else { (1 << n) - 1 },
        0,
        &mut cliques,
    );
    let mut out: Vec<Vec<FaceSet>> = Vec::new();
    for c in cliques {
        let members: Vec<FaceSet> = (0..n).filter(|&i| c >> i & 1 == 1).map(|i| faces[i]).collect();
        let mut max: Vec<FaceSet> = members
            .iter()
            .copied()
            .filter(|&f| !members.iter().any(|&g| g != f && f.is_subset(g)))
            .collect();
        max.sort();
        if out.contains(&max) {
            continue;
        }
        if let Ok(pf) = ProjectableFan::new(dpc.clone(), max.clone()) {
            if pf.is_maximal(l).unwrap() {
                out.push(max);
            }
        }
    }
    out.sort();
    out
}

fn bron_kerbosch(adj: &[u64], r: u64, mut p: u64, mut x: u64, out: &mut Vec<u64>) {
    if p == 0 && x == 0 {
        out.push(r);
        return;
    }
    let px = p | x;
    let pivot = (0..adj.len())
        .filter(|&u| px >> u & 1 == 1)
        .max_by_key(|&u| (adj[u] & p).count_ones())
        .unwrap();
    let cand = p & !adj[pivot];
    for v in 0..adj.len() {
        if cand >> v & 1 == 1 {
            bron_kerbosch(adj, r | 1 << v, p & adj[v], x & adj[v], out);
            p &= !(1 << v);
            x |= 1 << v;
        }
    }
}

/// Bunch-side and fan-side answers for one standard bunch, as
/// `(name, bunch, fan)` triples.
pub fn dictionary_pairs(b: &Bunch, l: &Limits) -> Vec<(&'static str, bool, bool)> {
    let d = b.dictionary();
    let o = bunch_to_fan(b).expect("standard").oracles(l);
    vec![
        ("q_factorial", d.q_factorial, o.simplicial),
        ("smooth", d.smooth, o.smooth),
        ("complete", d.complete, o.complete),
        ("full", d.full, o.two_complete && o.pure_full_dim),
        (
            "only_constant_functions",
            d.only_constant_functions,
            o.only_constant_functions,
        ),
    ]
}

pub fn fan_faces(b: &Bunch) -> Vec<FaceSet> {
    bunch_to_projectable_fan(b).max_faces().to_vec()
}

/// A random nondegenerate fan in `Z²`: rays sorted by angle, a random run
/// of consecutive cones, complete when all gaps are below π.
pub fn random_fan_2d(r: &mut ChaCha8Rng) -> Fan {
    loop {
        let m = r.gen_range(3..=6);
        let mut rays: Vec<Vec<Int>> = Vec::new();
        while rays.len() < m {
            let v = toricbunch::linalg::primitive(&[small(r, -3, 3), small(r, -3, 3)]);
            if v.iter().all(|x| *x == int(0)) || rays.contains(&v) {
                continue;
            }
            rays.push(v);
        }
        let angle = |v: &Vec<Int>| {
            let x: f64 = v[0].to_string().parse().unwrap();
            let y: f64 = v[1].to_string().parse().unwrap();
            y.atan2(x)
        };
        rays.sort_by(|a, b| angle(a).partial_cmp(&angle(b)).unwrap());
        let n = rays.len();
        let det = |a: &Vec<Int>, b: &Vec<Int>| &a[0] * &b[1] - &a[1] * &b[0];
        let pairs: Vec<(usize, usize)> = (0..n)
            .map(|i| (i, (i + 1) % n))
            .filter(|&(i, j)| det(&rays[i], &rays[j]) > int(0))
            .collect();
        if pairs.is_empty() {
            continue;
        }
        let keep: Vec<(usize, usize)> = if r.gen_bool(0.5) {
            pairs.clone()
        } else {
            pairs.iter().copied().filter(|_| r.gen_bool(0.6)).collect()
        };
        if keep.is_empty() {
            continue;
        }
        let used: Vec<usize> = (0..n)
            .filter(|&i| keep.iter().any(|&(a, b)| a == i || b == i))
            .collect();
        let idx = |i: usize| used.iter().position(|&u| u == i).unwrap();
        let f = Fan::new(
            2,
            used.iter().map(|&i| rays[i].clone()).collect(),
            keep.iter()
                .map(|&(a, b)| FaceSet::from_indices([idx(a), idx(b)]))
                .collect(),
        );
        if let Ok(f) = f {
            if f.is_nondegenerate() {
                return f;
            }
        }
    }
}

/// The subfan on a nonempty set of maximal cones, rays renumbered.
pub fn subfan(f: &Fan, keep: &[FaceSet]) -> Option<Fan> {
    let used = keep.iter().fold(FaceSet::EMPTY, |u, &s| u.union(s));
    let idx: Vec<usize> = used.indices();
    let rays = idx.iter().map(|&i| f.rays()[i].clone()).collect();
    let cones = keep
        .iter()
        .map(|s| FaceSet::from_indices(s.iter().map(|i| idx.iter().position(|&u| u == i).unwrap())))
        .collect();
    Fan::new(f.n_rank(), rays, cones)
        .ok()
        .filter(Fan::is_nondegenerate)
}

/// Random 2D fans and random subfans of the three-dimensional examples.
pub fn random_fans(seed: u64, count: usize) -> Vec<Fan> {
    let mut r = rng(seed);
    let l = limits();
    let big = [
        bunch_to_fan(&toricbunch::catalog::oda(&l).unwrap()).unwrap(),
        toricbunch::catalog::eikelberg(false).unwrap(),
        toricbunch::catalog::eikelberg(true).unwrap(),
    ];
    let mut out = Vec::new();
    while out.len() < count {
        if r.gen_bool(0.5) {
            out.push(random_fan_2d(&mut r));
        } else {
            let f = &big[r.gen_range(0..big.len())];
            let keep: Vec<FaceSet> = f
                .max_cones()
                .iter()
                .copied()
                .filter(|_| r.gen_bool(0.7))
                .collect();
            if keep.is_empty() {
                continue;
            }
            if let Some(s) = subfan(f, &keep) {
                out.push(s);
            }
        }
    }
    out
}
