//! Fans, projectable fans and the passage between fans and bunches.

use crate::bunch::{minimal_cones, Bunch};
use crate::cone::{separating_form, Cone};
use crate::face::FaceSet;
use crate::linalg::{
    elementary_divisors, is_surjective, kernel_basis, primitive, primitive_rat, rank, rat_inverse, saturate,
    snf, subspace_intersection, Int, IntMatrix, Rat, Sublattice,
};
use crate::lp::System;
use crate::projected::ProjectedCone;
use crate::{par, Error, Limits, Result};
use num_integer::Integer;
use num_traits::{One, Zero};
use std::sync::Arc;

/// A fan in `N = Z^n`: primitive rays and maximal cones as ray index sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    n_rank: usize,
    rays: Vec<Vec<Int>>,
    max_cones: Vec<FaceSet>,
}

/// Fan-side answers to the same questions the bunch dictionary decides.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FanOracles {
    pub smooth: bool,
    pub simplicial: bool,
    pub complete: bool,
    pub quasiprojective: bool,
    pub nondegenerate: bool,
    pub two_complete: bool,
    pub pure_full_dim: bool,
    pub only_constant_functions: bool,
}

impl Fan {
    /// Validated construction; max cones are sorted canonically.
    pub fn new(n_rank: usize, rays: Vec<Vec<Int>>, max_cones: Vec<FaceSet>) -> Result<Self> {
        let f = Fan::new_unchecked(n_rank, rays, max_cones);
        f.validate()?;
        Ok(f)
    }

    pub fn from_i64(n_rank: usize, rays: &[&[i64]], max_cones: &[&[usize]]) -> Result<Self> {
        Fan::new(
            n_rank,
            rays.iter().map(|r| crate::linalg::ints(r)).collect(),
            max_cones
                .iter()
                .map(|c| FaceSet::from_indices(c.iter().copied()))
                .collect(),
        )
    }

    pub(crate) fn new_unchecked(n_rank: usize, rays: Vec<Vec<Int>>, mut max_cones: Vec<FaceSet>) -> Self {
        max_cones.sort();
        max_cones.dedup();
        Fan {
            n_rank,
            rays,
            max_cones,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidFan(m));
        if self.rays.len() >= 64 {
            return bad("more than 63 rays".into());
        }
        for (i, r) in self.rays.iter().enumerate() {
            if r.len() != self.n_rank {
                return bad(format!("ray {i} has wrong length"));
            }
            if r.iter().all(Zero::is_zero) || primitive(r) != *r {
                return bad(format!("ray {i} is not a primitive nonzero vector"));
            }
            if self.rays[..i].contains(r) {
                return bad(format!("ray {i} is repeated"));
            }
        }
        if self.max_cones.is_empty() {
            return bad("no cones".into());
        }
        for (a, &s) in self.max_cones.iter().enumerate() {
            if s.iter().any(|i| i >= self.rays.len()) {
                return bad(format!("cone {a} refers to a missing ray"));
            }
            let c = self.cone(s);
            if !c.is_strictly_convex() {
                return bad(format!("cone {a} is not strictly convex"));
            }
            let mut listed: Vec<Vec<Int>> = s.iter().map(|i| self.rays[i].clone()).collect();
            listed.sort();
            if c.rays() != listed.as_slice() {
                return bad(format!("cone {a} lists a ray that is not extreme"));
            }
            for (b, &t) in self.max_cones.iter().enumerate() {
                if a != b && s.is_subset(t) {
                    return bad(format!("cone {a} lies in cone {b}"));
                }
            }
        }
        let used = self.max_cones.iter().fold(FaceSet::EMPTY, |u, &s| u.union(s));
        if used != FaceSet::full(self.rays.len()) {
            return bad("a ray lies in no maximal cone".into());
        }
        let m = self.max_cones.len();
        let pairs: Vec<(usize, usize)> = (0..m).flat_map(|a| (a + 1..m).map(move |b| (a, b))).collect();
        let ok = par::map(&pairs, |&(a, b)| {
            separating_form(&self.cone(self.max_cones[a]), &self.cone(self.max_cones[b]), None).is_some()
        });
        if let Some(k) = ok.iter().position(|x| !x) {
            let (a, b) = pairs[k];
            return bad(format!("cones {a} and {b} do not meet in a common face"));
        }
        Ok(())
    }

    pub fn n_rank(&self) -> usize {
        self.n_rank
    }

    pub fn rays(&self) -> &[Vec<Int>] {
        &self.rays
    }

    pub fn max_cones(&self) -> &[FaceSet] {
        &self.max_cones
    }

    pub fn cone(&self, s: FaceSet) -> Cone {
        let g: Vec<Vec<Int>> = s.iter().map(|i| self.rays[i].clone()).collect();
        Cone::from_generators(self.n_rank, &g)
    }

    /// The `n × R` matrix with the rays as columns.
    pub fn ray_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(self.n_rank, &self.rays)
    }

    /// Every cone of the fan, as a ray index set.
    pub fn all_cones(&self) -> Vec<FaceSet> {
        let mut out = Vec::new();
        for &s in &self.max_cones {
            let idx = s.indices();
            let c = self.cone(s);
            // rays of c are sorted, map back to global indices
            let global: Vec<usize> = c
                .rays()
                .iter()
                .map(|r| idx.iter().copied().find(|&i| self.rays[i] == *r).expect("ray"))
                .collect();
            for local in c.face_ray_sets(usize::MAX).expect("unbounded") {
                out.push(FaceSet::from_indices(local.iter().map(|i| global[i])));
            }
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn is_nondegenerate(&self) -> bool {
        rank(&self.rays) == self.n_rank
    }

    fn walls(&self) -> Vec<(FaceSet, usize)> {
        let mut walls: Vec<FaceSet> = Vec::new();
        for &s in &self.max_cones {
            let c = self.cone(s);
            for f in c.facets() {
                let w = FaceSet::from_indices(
                    s.iter()
                        .filter(|&i| crate::linalg::dot(f, &self.rays[i]).is_zero()),
                );
                if !walls.contains(&w) {
                    walls.push(w);
                }
            }
        }
        walls
            .into_iter()
            .map(|w| {
                let k = self.max_cones.iter().filter(|&&s| w.is_subset(s)).count();
                (w, k)
            })
            .collect()
    }

    fn complete(&self, pure: bool) -> bool {
        if !pure {
            return false;
        }
        let walls = self.walls();
        if walls.iter().any(|&(_, k)| k != 2) {
            return false;
        }
        // connectivity of the dual graph through walls
        let m = self.max_cones.len();
        let mut seen = vec![false; m];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(a) = stack.pop() {
            for &(w, _) in &walls {
                if !w.is_subset(self.max_cones[a]) {
                    continue;
                }
                for b in 0..m {
                    if !seen[b] && w.is_subset(self.max_cones[b]) {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
        }
        seen.into_iter().all(|x| x)
    }

    /// A strictly convex support function: one form `u_σ` per maximal cone
    /// and values `h_ρ` with `u_σ(v_ρ) = h_ρ` on the rays of σ and
    /// `u_σ(v_ρ) < h_ρ` on every other ray.
    fn quasiprojective(&self) -> bool {
        let r = self.rays.len();
        let n = self.n_rank;
        let m = self.max_cones.len();
        let nv = r + n * m;
        let mut sys = System::new(nv);
        for (a, &s) in self.max_cones.iter().enumerate() {
            for (rho, v) in self.rays.iter().enumerate() {
                let mut row = vec![Int::zero(); nv];
                row[rho] = -Int::one();
                for j in 0..n {
                    row[r + a * n + j] = v[j].clone();
                }
                if s.contains(rho) {
                    sys.eq(row, 0);
                } else {
                    sys.le(row, -1);
                }
            }
        }
        sys.solve().is_some()
    }

    /// No cone spanned by existing rays can be added.
    fn two_complete(&self, limits: &Limits) -> bool {
        let r = self.rays.len();
        if r >= 63 || (1usize << r) > limits.max_faces {
            return false;
        }
        let maxc: Vec<Cone> = self.max_cones.iter().map(|&s| self.cone(s)).collect();
        let candidates: Vec<FaceSet> = FaceSet::all(r)
            .filter(|&s| s.len() >= 2 && !self.max_cones.iter().any(|&t| s.is_subset(t)))
            .collect();
        let addable = par::map(&candidates, |&s| {
            let c = self.cone(s);
            if !c.is_strictly_convex() || c.rays().len() != s.len() {
                return false;
            }
            maxc.iter().all(|m| separating_form(&c, m, None).is_some())
        });
        !addable.into_iter().any(|x| x)
    }

    pub fn oracles(&self, limits: &Limits) -> FanOracles {
        let cones: Vec<Cone> = self.max_cones.iter().map(|&s| self.cone(s)).collect();
        let pure_full_dim = cones.iter().all(|c| c.is_full_dim());
        FanOracles {
            smooth: cones.iter().all(Cone::is_regular),
            simplicial: cones.iter().all(Cone::is_simplicial),
            complete: self.complete(pure_full_dim),
            quasiprojective: self.quasiprojective(),
            nondegenerate: self.is_nondegenerate(),
            two_complete: self.two_complete(limits),
            pure_full_dim,
            only_constant_functions: Cone::from_generators(self.n_rank, &self.rays)
                == Cone::full(self.n_rank),
        }
    }

    /// Class group `Z^R / M` as (rank, torsion coefficients).
    pub fn class_group(&self) -> (usize, Vec<Int>) {
        let c = self.ray_matrix().transpose();
        let d = elementary_divisors(&c);
        let torsion = d.iter().filter(|x| !x.is_one()).cloned().collect();
        (self.rays.len() - d.len(), torsion)
    }
}

/// A lattice automorphism of `N` carrying one fan onto the other.
pub fn fan_isomorphism(f1: &Fan, f2: &Fan, limits: &Limits) -> Result<Option<IntMatrix>> {
    let n = f1.n_rank;
    if n != f2.n_rank || f1.rays.len() != f2.rays.len() || f1.max_cones.len() != f2.max_cones.len() {
        return Ok(None);
    }
    let mut sorted_rays2 = f2.rays.clone();
    sorted_rays2.sort();
    let cones2: Vec<Vec<Vec<Int>>> = {
        let mut v: Vec<Vec<Vec<Int>>> = f2
            .max_cones
            .iter()
            .map(|&s| {
                let mut c: Vec<Vec<Int>> = s.iter().map(|i| f2.rays[i].clone()).collect();
                c.sort();
                c
            })
            .collect();
        v.sort();
        v
    };
    let matches = |phi: &IntMatrix| -> bool {
        let img: Vec<Vec<Int>> = f1.rays.iter().map(|r| phi.mul_vec(r)).collect();
        let mut sr = img.clone();
        sr.sort();
        if sr != sorted_rays2 {
            return false;
        }
        let mut cs: Vec<Vec<Vec<Int>>> = f1
            .max_cones
            .iter()
            .map(|&s| {
                let mut c: Vec<Vec<Int>> = s.iter().map(|i| img[i].clone()).collect();
                c.sort();
                c
            })
            .collect();
        cs.sort();
        cs == cones2
    };
    if n == 0 {
        let phi = IntMatrix::zeros(0, 0);
        return Ok(matches(&phi).then_some(phi));
    }
    let mut basis = Vec::new();
    for i in 0..f1.rays.len() {
        let mut rows: Vec<Vec<Int>> = basis.iter().map(|&j: &usize| f1.rays[j].clone()).collect();
        rows.push(f1.rays[i].clone());
        if rank(&rows) == rows.len() {
            basis.push(i);
        }
        if basis.len() == n {
            break;
        }
    }
    if basis.len() < n {
        return Ok(None);
    }
    let r = f2.rays.len();
    if (r as f64).powi(n as i32) > limits.max_search as f64 {
        return Err(Error::SearchTooLarge {
            limit: limits.max_search,
        });
    }
    let bmat = IntMatrix::from_columns(n, &basis.iter().map(|&i| f1.rays[i].clone()).collect::<Vec<_>>());
    let binv = rat_inverse(&bmat).expect("independent");
    let mut choice = vec![0usize; n];
    loop {
        let mut c = choice.clone();
        c.sort();
        if c.windows(2).all(|p| p[0] != p[1]) {
            if let Some(phi) = integral_map(
                &choice.iter().map(|&j| f2.rays[j].clone()).collect::<Vec<_>>(),
                &binv,
            ) {
                if phi.is_unimodular() && matches(&phi) {
                    return Ok(Some(phi));
                }
            }
        }
        let mut pos = 0;
        loop {
            if pos == n {
                return Ok(None);
            }
            choice[pos] += 1;
            if choice[pos] < r {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

/// `T · B^{-1}` when integral, `T` given by its columns.
fn integral_map(target: &[Vec<Int>], binv: &[Vec<Rat>]) -> Option<IntMatrix> {
    let k = target.len();
    let rows = target.first().map_or(0, |t| t.len());
    let mut phi = IntMatrix::zeros(rows, k);
    for r in 0..rows {
        for c in 0..k {
            let v: Rat = (0..k)
                .map(|s| Rat::from(target[s][r].clone()) * &binv[s][c])
                .sum();
            if !v.is_integer() {
                return None;
            }
            phi.set(r, c, v.to_integer());
        }
    }
    Some(phi)
}

/// A fan of faces of δ whose maximal cones are pairwise separable by forms
/// vanishing on `L = ker P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectableFan {
    dpc: Arc<ProjectedCone>,
    max_faces: Vec<FaceSet>,
}

impl ProjectableFan {
    pub fn new(dpc: Arc<ProjectedCone>, max_faces: Vec<FaceSet>) -> Result<Self> {
        let pf = ProjectableFan::new_unchecked(dpc, max_faces);
        let m = pf.max_faces.len();
        for a in 0..m {
            for b in 0..m {
                if a != b && pf.max_faces[a].is_subset(pf.max_faces[b]) {
                    return Err(Error::InvalidFan(format!("face {a} lies in face {b}")));
                }
            }
        }
        let pairs: Vec<(usize, usize)> = (0..m).flat_map(|a| (a + 1..m).map(move |b| (a, b))).collect();
        let ok = par::map(&pairs, |&(a, b)| {
            pf.dpc.invariant_form(pf.max_faces[a], pf.max_faces[b]).is_some()
        });
        if let Some(k) = ok.iter().position(|x| !x) {
            return Err(Error::NotProjectable(pairs[k].0, pairs[k].1));
        }
        Ok(pf)
    }

    pub(crate) fn new_unchecked(dpc: Arc<ProjectedCone>, mut max_faces: Vec<FaceSet>) -> Self {
        max_faces.sort();
        max_faces.dedup();
        ProjectableFan { dpc, max_faces }
    }

    pub fn dpc(&self) -> &Arc<ProjectedCone> {
        &self.dpc
    }

    pub fn max_faces(&self) -> &[FaceSet] {
        &self.max_faces
    }

    /// Every face of δ separable from all maximal faces lies under one of them.
    pub fn is_maximal(&self, limits: &Limits) -> Result<bool> {
        let e = self.dpc.e_rank();
        limits.check_faces(e)?;
        let outside: Vec<FaceSet> = FaceSet::all(e)
            .filter(|&f| !self.max_faces.iter().any(|&m| f.is_subset(m)))
            .collect();
        let violators = par::map(&outside, |&f| {
            self.max_faces
                .iter()
                .all(|&m| self.dpc.invariant_form(f, m).is_some())
        });
        Ok(!violators.into_iter().any(|x| x))
    }

    /// A maximal projectable fan containing this one: repeatedly add the
    /// largest face of δ (first in canonical order) that is separable from
    /// every maximal face. Returns `self` when already maximal.
    pub fn maximal_extension(&self, limits: &Limits) -> Result<ProjectableFan> {
        let e = self.dpc.e_rank();
        limits.check_faces(e)?;
        let mut faces = self.max_faces.clone();
        loop {
            let outside: Vec<FaceSet> = FaceSet::all(e)
                .filter(|&f| !faces.iter().any(|&m| f.is_subset(m)))
                .collect();
            let ok = par::map(&outside, |&f| {
                faces.iter().all(|&m| self.dpc.invariant_form(f, m).is_some())
            });
            let best = outside
                .iter()
                .zip(ok)
                .filter_map(|(&f, ok)| ok.then_some(f))
                .max_by(|a, b| a.len().cmp(&b.len()).then(b.cmp(a)));
            match best {
                None => return Ok(ProjectableFan::new_unchecked(self.dpc.clone(), faces)),
                Some(f) => {
                    faces.retain(|m| !m.is_subset(f));
                    faces.push(f);
                }
            }
        }
    }

    /// The quotient fan and the map `R = P'∘P`.
    pub fn quotient_fan(&self) -> (Fan, IntMatrix) {
        let p = self.dpc.q();
        let n = p.nrows();
        let e = self.dpc.e_rank();
        let images: Vec<Cone> = self
            .max_faces
            .iter()
            .map(|&f| self.dpc.projected_face(f))
            .collect();
        let lin: Vec<Sublattice> = images
            .iter()
            .map(|c| saturate(&Sublattice::generated_by(n, c.lineality())))
            .collect();
        let l_prime = subspace_intersection(n, &lin);
        let p_prime = kernel_basis(l_prime.basis()).basis().clone();
        let r = p_prime.mul(p);
        let n2 = r.nrows();
        let prim: Vec<Option<Vec<Int>>> = (0..e)
            .map(|j| {
                let v = r.mul_vec(&self.dpc.gamma_generators()[j]);
                (!v.iter().all(Zero::is_zero)).then(|| primitive(&v))
            })
            .collect();
        let cones: Vec<Cone> = self
            .max_faces
            .iter()
            .map(|&f| {
                let g: Vec<Vec<Int>> = f.iter().filter_map(|j| prim[j].clone()).collect();
                Cone::from_generators(n2, &g)
            })
            .collect();
        let mut rays: Vec<Vec<Int>> = Vec::new();
        for v in prim.iter().flatten() {
            if !rays.contains(v) && cones.iter().any(|c| c.rays().contains(v)) {
                rays.push(v.clone());
            }
        }
        let sets: Vec<FaceSet> = cones
            .iter()
            .map(|c| {
                FaceSet::from_indices(
                    c.rays()
                        .iter()
                        .map(|v| rays.iter().position(|w| w == v).expect("ray listed")),
                )
            })
            .collect();
        let maximal: Vec<FaceSet> = sets
            .iter()
            .copied()
            .filter(|&s| !sets.iter().any(|&t| t != s && s.is_subset(t)))
            .collect();
        (Fan::new_unchecked(n2, rays, maximal), r)
    }
}

/// The maximal projectable fan of a bunch: max faces are the face stars of
/// the covering collection.
pub fn bunch_to_projectable_fan(b: &Bunch) -> ProjectableFan {
    let e = b.e_rank();
    let faces = b
        .covering_collection()
        .into_iter()
        .map(|g| g.complement(e))
        .collect();
    ProjectableFan::new_unchecked(b.pc().dual(), faces)
}

/// The bunch of a maximal projectable fan: minimal cones among `Q(δ₀*)`.
pub fn projectable_fan_to_bunch(pf: &ProjectableFan, limits: &Limits) -> Result<Bunch> {
    if !pf.is_maximal(limits)? {
        return Err(Error::NotMaximal);
    }
    Ok(bunch_of_faces(pf, limits))
}

fn bunch_of_faces(pf: &ProjectableFan, limits: &Limits) -> Bunch {
    let pc = pf.dpc.dual();
    let e = pc.e_rank();
    let cones = pf
        .max_faces
        .iter()
        .map(|&f| pc.projected_face(f.complement(e)))
        .collect();
    Bunch::new_unchecked(pc, minimal_cones(cones), limits)
}

pub fn bunch_to_fan(b: &Bunch) -> Result<Fan> {
    if !b.is_standard() {
        return Err(Error::NotStandard);
    }
    Ok(bunch_to_projectable_fan(b).quotient_fan().0)
}

/// All cones of the fan of a standard bunch as ray index sets, via
/// `γ₀ ↦ R(γ₀*)` on faces with `τ° ⊆ Q(γ₀)°`.
pub fn all_fan_cones(b: &Bunch) -> Result<Vec<FaceSet>> {
    if !b.is_standard() {
        return Err(Error::NotStandard);
    }
    let e = b.e_rank();
    let mut out: Vec<FaceSet> = b.relevant_faces().into_iter().map(|g| g.complement(e)).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// The projected cone `(P: F → N, δ)` of a reduced Cox construction.
///
/// When the ray map `C: Z^R → N` is onto, `F = Z^R` and δ is the orthant.
/// Otherwise `F` is the lattice `V·diag(1/d, 1)·Z^R` from a Smith form
/// `U C V = [diag(d) | 0]`; it contains every `e_ρ` and `P = C` restricted
/// to it is onto with kernel `ker C`.
pub fn cox_projected_cone(f: &Fan) -> Result<ProjectedCone> {
    if !f.is_nondegenerate() {
        return Err(Error::Degenerate);
    }
    let n = f.n_rank;
    let r = f.rays.len();
    let c = f.ray_matrix();
    if is_surjective(&c) {
        return ProjectedCone::new(c, IntMatrix::identity(r).into_rows());
    }
    let (s, u, v) = snf(&c);
    let d: Vec<Int> = (0..r)
        .map(|i| if i < n { s.get(i, i).clone() } else { Int::one() })
        .collect();
    let vinv = int_inverse(&v);
    // rows of D·V^{-1}; generator ρ is column ρ
    let dv: Vec<Vec<Int>> = (0..r)
        .map(|i| vinv.row(i).iter().map(|x| x * &d[i]).collect())
        .collect();
    let gens: Vec<Vec<Int>> = (0..r)
        .map(|rho| dv.iter().map(|row| row[rho].clone()).collect())
        .collect();
    let uinv = int_inverse(&u);
    let mut p = IntMatrix::zeros(n, r);
    for i in 0..n {
        for j in 0..n {
            p.set(i, j, uinv.get(i, j).clone());
        }
    }
    ProjectedCone::new(p, gens)
}

fn int_inverse(m: &IntMatrix) -> IntMatrix {
    let inv = rat_inverse(m).expect("unimodular");
    IntMatrix::from_rows(
        m.ncols(),
        inv.into_iter()
            .map(|row| row.into_iter().map(|x| x.to_integer()).collect())
            .collect(),
    )
}

/// The bunch of a nondegenerate fan. A fan that is not 2-complete is first
/// extended by [`ProjectableFan::maximal_extension`].
pub fn fan_to_bunch(f: &Fan, limits: &Limits) -> Result<Bunch> {
    let dpc = Arc::new(cox_projected_cone(f)?);
    let pf = ProjectableFan::new_unchecked(dpc, f.max_cones.clone()).maximal_extension(limits)?;
    let b = bunch_of_faces(&pf, limits);
    let v = b.verify()?;
    if !v.ok {
        return Err(Error::ConditionViolated(v.failure.unwrap_or_default()));
    }
    Ok(b)
}

/// The universal reduced Cox construction of a simplicial fan whose maximal
/// cones are full-dimensional: `F` is generated by the lattices
/// `P^{-1}(N) ∩ lin(σ̂)`, so `P` maps each of them isomorphically onto `N`.
pub fn universal_reduced_cox(f: &Fan) -> Result<(Arc<ProjectedCone>, ProjectableFan)> {
    let n = f.n_rank;
    let r = f.rays.len();
    for &s in &f.max_cones {
        let c = f.cone(s);
        if !c.is_simplicial() {
            return Err(Error::NotSimplicial);
        }
        if !c.is_full_dim() {
            return Err(Error::NotFullDimensional);
        }
    }
    // rational generators of F in e_ρ coordinates
    let mut gens: Vec<Vec<Rat>> = Vec::new();
    for &s in &f.max_cones {
        let idx = s.indices();
        let vs: Vec<Vec<Int>> = idx.iter().map(|&i| f.rays[i].clone()).collect();
        let inv = rat_inverse(&IntMatrix::from_columns(n, &vs)).expect("full-dimensional");
        for col in 0..n {
            let mut g = vec![Rat::zero(); r];
            for (row, &rho) in idx.iter().enumerate() {
                g[rho] = inv[row][col].clone();
            }
            gens.push(g);
        }
    }
    let den = gens.iter().flatten().fold(Int::one(), |l, x| l.lcm(x.denom()));
    let scaled: Vec<Vec<Int>> = gens
        .iter()
        .map(|g| g.iter().map(|x| x.numer() * (&den / x.denom())).collect())
        .collect();
    let lat = Sublattice::generated_by(r, &scaled);
    // basis B of F as columns: rows of lat divided by den
    let bcols: Vec<Vec<Int>> = lat.vectors().to_vec();
    let bmat = IntMatrix::from_columns(r, &bcols);
    let binv = rat_inverse(&bmat).expect("F has full rank");
    // δ generator ρ in F coordinates: B^{-1} e_ρ = den · (lat)^{-1} e_ρ
    let den_r = Rat::from(den.clone());
    let delta: Vec<Vec<Int>> = (0..r)
        .map(|rho| {
            (0..r)
                .map(|i| {
                    let v = &binv[i][rho] * &den_r;
                    assert!(v.is_integer(), "e_ρ lies in F");
                    v.to_integer()
                })
                .collect()
        })
        .collect();
    let c = f.ray_matrix();
    let cb = c.mul(&bmat);
    let p = IntMatrix::from_rows(
        r,
        cb.rows()
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| {
                        let (q, rem) = x.div_rem(&den);
                        assert!(rem.is_zero(), "P is integral on F");
                        q
                    })
                    .collect()
            })
            .collect(),
    );
    let dpc = Arc::new(ProjectedCone::new(p, delta).map_err(|e| Error::InvalidFan(e.to_string()))?);
    // (i) per cone isomorphism, (ii) the cone lattices generate F
    let mut all = Vec::new();
    for &s in &f.max_cones {
        let g: Vec<Vec<Int>> = s.iter().map(|i| dpc.gamma_generators()[i].clone()).collect();
        let l = saturate(&Sublattice::generated_by(r, &g));
        let img: Vec<Vec<Int>> = l.vectors().iter().map(|v| dpc.q().mul_vec(v)).collect();
        let m = IntMatrix::from_columns(n, &img);
        if !(m.nrows() == m.ncols() && m.is_unimodular()) {
            return Err(Error::InvalidFan(
                "per-cone lattice map is not an isomorphism".into(),
            ));
        }
        all.extend(l.vectors().iter().cloned());
    }
    if Sublattice::generated_by(r, &all) != Sublattice::full(r) {
        return Err(Error::InvalidFan("cone lattices do not generate F".into()));
    }
    let pf = ProjectableFan::new_unchecked(dpc.clone(), f.max_cones.clone());
    Ok((dpc, pf))
}

/// Primitive image of a rational vector; small helper shared by tests.
pub fn primitive_ray(v: &[Rat]) -> Vec<Int> {
    primitive_rat(v)
}
