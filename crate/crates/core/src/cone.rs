//! Rational polyhedral cones.
//!
//! A cone is stored as a lineality basis (saturated, Hermite normal form)
//! plus extreme rays that are primitive, orthogonal to the lineality space
//! and sorted. Two cones are equal iff these fields are. Facets are computed
//! on demand with the double description method and cached.

use crate::face::FaceSet;
use crate::linalg::{
    dot, elementary_divisors, kernel_basis, primitive, primitive_rat, rank, rat_dot, rat_inverse, saturate,
    to_rat, Int, IntMatrix, Rat, Sublattice,
};
use crate::lp::{Rel, System};
use crate::{Error, Result};
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

#[derive(Clone, Debug)]
struct HRep {
    equations: Vec<Vec<Int>>,
    facets: Vec<Vec<Int>>,
}

pub struct Cone {
    dim: usize,
    lineality: Vec<Vec<Int>>,
    rays: Vec<Vec<Int>>,
    hrep: OnceLock<HRep>,
}

impl Clone for Cone {
    fn clone(&self) -> Self {
        let hrep = OnceLock::new();
        if let Some(h) = self.hrep.get() {
            let _ = hrep.set(h.clone());
        }
        Cone {
            dim: self.dim,
            lineality: self.lineality.clone(),
            rays: self.rays.clone(),
            hrep,
        }
    }
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.lineality == other.lineality && self.rays == other.rays
    }
}

impl Eq for Cone {}

impl Hash for Cone {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.dim.hash(state);
        self.lineality.hash(state);
        self.rays.hash(state);
    }
}

impl Ord for Cone {
    fn cmp(&self, other: &Self) -> Ordering {
        (
            self.dim,
            self.lineality.len(),
            self.rays.len(),
            &self.lineality,
            &self.rays,
        )
            .cmp(&(
                other.dim,
                other.lineality.len(),
                other.rays.len(),
                &other.lineality,
                &other.rays,
            ))
    }
}

impl PartialOrd for Cone {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &[Int]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "cone(")?;
        for (i, r) in self.rays.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "({})", show(r))?;
        }
        if !self.lineality.is_empty() {
            write!(f, "; lin")?;
            for l in &self.lineality {
                write!(f, " ({})", show(l))?;
            }
        }
        write!(f, ")")
    }
}

/// Generators of `{x : e·x = 0 for e in eqs, a·x >= 0 for a in ineqs}`,
/// returned as (lineality vectors, extreme rays), not yet canonical.
fn double_description(dim: usize, eqs: &[Vec<Int>], ineqs: &[Vec<Int>]) -> (Vec<Vec<Int>>, Vec<Vec<Int>>) {
    let mut lin: Vec<Vec<Int>> = if eqs.is_empty() {
        IntMatrix::identity(dim).into_rows()
    } else {
        kernel_basis(&IntMatrix::from_rows(dim, eqs.to_vec()))
            .vectors()
            .to_vec()
    };
    let mut rays: Vec<Vec<Int>> = Vec::new();
    let mut seen: Vec<Vec<Int>> = eqs.to_vec();
    let n_eq = eqs.len();
    for a in ineqs {
        if a.iter().all(Zero::is_zero) {
            continue;
        }
        if let Some(k) = lin.iter().position(|l| !dot(a, l).is_zero()) {
            let mut l0 = lin.swap_remove(k);
            let mut al0 = dot(a, &l0);
            if al0.is_negative() {
                l0 = l0.iter().map(|x| -x).collect();
                al0 = -al0;
            }
            let shift = |v: &Vec<Int>| -> Vec<Int> {
                let av = dot(a, v);
                if av.is_zero() {
                    return v.clone();
                }
                primitive(
                    &v.iter()
                        .zip(&l0)
                        .map(|(x, y)| &al0 * x - &av * y)
                        .collect::<Vec<_>>(),
                )
            };
            lin = lin.iter().map(shift).collect();
            rays = rays.iter().map(shift).collect();
            rays.push(l0);
            seen.push(a.clone());
            continue;
        }
        let vals: Vec<Int> = rays.iter().map(|r| dot(a, r)).collect();
        if vals.iter().all(|v| !v.is_negative()) {
            seen.push(a.clone());
            continue;
        }
        let tight = |r: &Vec<Int>| -> Vec<usize> {
            (n_eq..seen.len())
                .filter(|&i| dot(&seen[i], r).is_zero())
                .collect()
        };
        let target = dim - lin.len();
        let tights: Vec<Vec<usize>> = rays.iter().map(tight).collect();
        let mut next = Vec::new();
        for (i, r) in rays.iter().enumerate() {
            if !vals[i].is_negative() {
                next.push(r.clone());
            }
        }
        for (p, vp) in vals.iter().enumerate() {
            if !vp.is_positive() {
                continue;
            }
            for (n, vn) in vals.iter().enumerate() {
                if !vn.is_negative() {
                    continue;
                }
                let common: Vec<usize> = tights[p]
                    .iter()
                    .filter(|i| tights[n].contains(i))
                    .copied()
                    .collect();
                if common.len() + n_eq + 2 < target {
                    continue;
                }
                let mut rows: Vec<Vec<Int>> = seen[..n_eq].to_vec();
                rows.extend(common.iter().map(|&i| seen[i].clone()));
                if rank(&rows) + 2 != target {
                    continue;
                }
                let v: Vec<Int> = rays[n]
                    .iter()
                    .zip(&rays[p])
                    .map(|(x, y)| vp * x - vn * y)
                    .collect();
                next.push(primitive(&v));
            }
        }
        rays = next;
        seen.push(a.clone());
    }
    (lin, rays)
}

fn canonicalize(dim: usize, lin: &[Vec<Int>], rays: &[Vec<Int>]) -> (Vec<Vec<Int>>, Vec<Vec<Int>>) {
    let l = saturate(&Sublattice::generated_by(dim, lin));
    let basis = l.vectors().to_vec();
    let gram_inv = if basis.is_empty() {
        None
    } else {
        let g: Vec<Vec<Int>> = basis
            .iter()
            .map(|a| basis.iter().map(|b| dot(a, b)).collect())
            .collect();
        Some(rat_inverse(&IntMatrix::from_rows(basis.len(), g)).expect("independent basis"))
    };
    let mut out: Vec<Vec<Int>> = rays
        .iter()
        .filter_map(|r| {
            let v = match &gram_inv {
                None => primitive(r),
                Some(gi) => {
                    let lr: Vec<Rat> = basis.iter().map(|b| Rat::from(dot(b, r))).collect();
                    let c: Vec<Rat> = gi
                        .iter()
                        .map(|row| row.iter().zip(&lr).map(|(a, b)| a * b).sum())
                        .collect();
                    let mut p = to_rat(r);
                    for (ci, b) in c.iter().zip(&basis) {
                        for (pj, bj) in p.iter_mut().zip(b) {
                            *pj -= ci * Rat::from(bj.clone());
                        }
                    }
                    primitive_rat(&p)
                }
            };
            (!v.iter().all(Zero::is_zero)).then_some(v)
        })
        .collect();
    out.sort();
    out.dedup();
    (basis, out)
}

impl Cone {
    fn raw(dim: usize, lineality: Vec<Vec<Int>>, rays: Vec<Vec<Int>>) -> Self {
        Cone {
            dim,
            lineality,
            rays,
            hrep: OnceLock::new(),
        }
    }

    pub fn zero(dim: usize) -> Self {
        Cone::raw(dim, Vec::new(), Vec::new())
    }

    pub fn full(dim: usize) -> Self {
        Cone::raw(dim, IntMatrix::identity(dim).into_rows(), Vec::new())
    }

    pub fn orthant(dim: usize) -> Self {
        let mut rays = IntMatrix::identity(dim).into_rows();
        rays.sort();
        Cone::raw(dim, Vec::new(), rays)
    }

    /// The cone generated by integer vectors.
    pub fn from_generators(dim: usize, gens: &[Vec<Int>]) -> Self {
        assert!(gens.iter().all(|g| g.len() == dim), "generator dimension");
        let gens: Vec<Vec<Int>> = gens
            .iter()
            .filter(|g| g.iter().any(|x| !x.is_zero()))
            .cloned()
            .collect();
        if gens.is_empty() {
            return Cone::zero(dim);
        }
        let (dl, dr) = double_description(dim, &[], &gens);
        let (equations, facets) = canonicalize(dim, &dl, &dr);
        let (vl, vr) = double_description(dim, &equations, &facets);
        let (lineality, rays) = canonicalize(dim, &vl, &vr);
        let c = Cone::raw(dim, lineality, rays);
        let _ = c.hrep.set(HRep { equations, facets });
        c
    }

    pub fn from_rat_generators(dim: usize, gens: &[Vec<Rat>]) -> Self {
        let ints: Vec<Vec<Int>> = gens.iter().map(|g| primitive_rat(g)).collect();
        Cone::from_generators(dim, &ints)
    }

    pub fn from_i64(dim: usize, gens: &[&[i64]]) -> Self {
        let g: Vec<Vec<Int>> = gens.iter().map(|v| crate::linalg::ints(v)).collect();
        Cone::from_generators(dim, &g)
    }

    /// `{x : e·x = 0, a·x >= 0}`.
    pub fn from_inequalities(dim: usize, eqs: &[Vec<Int>], ineqs: &[Vec<Int>]) -> Self {
        let (vl, vr) = double_description(dim, eqs, ineqs);
        let (lineality, rays) = canonicalize(dim, &vl, &vr);
        Cone::raw(dim, lineality, rays)
    }

    fn hrep(&self) -> &HRep {
        self.hrep.get_or_init(|| {
            let (dl, dr) = double_description(self.dim, &self.lineality, &self.rays);
            let (equations, facets) = canonicalize(self.dim, &dl, &dr);
            HRep { equations, facets }
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Saturated basis of the largest linear subspace inside the cone.
    pub fn lineality(&self) -> &[Vec<Int>] {
        &self.lineality
    }

    /// Extreme rays modulo the lineality space.
    pub fn rays(&self) -> &[Vec<Int>] {
        &self.rays
    }

    /// Integral vectors spanning the orthogonal complement of the cone.
    pub fn equations(&self) -> &[Vec<Int>] {
        &self.hrep().equations
    }

    /// Primitive inner facet normals, modulo the equations.
    pub fn facets(&self) -> &[Vec<Int>] {
        &self.hrep().facets
    }

    /// Rays together with both signs of each lineality vector.
    pub fn generators(&self) -> Vec<Vec<Int>> {
        let mut g = self.rays.clone();
        for l in &self.lineality {
            g.push(l.clone());
            g.push(l.iter().map(|x| -x).collect());
        }
        g
    }

    pub fn dim(&self) -> usize {
        self.lineality.len() + rank(&self.rays)
    }

    pub fn is_zero(&self) -> bool {
        self.rays.is_empty() && self.lineality.is_empty()
    }

    pub fn is_full_dim(&self) -> bool {
        self.dim() == self.dim
    }

    pub fn is_strictly_convex(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn is_simplicial(&self) -> bool {
        self.is_strictly_convex() && rank(&self.rays) == self.rays.len()
    }

    /// Simplicial with primitive generators extending to a lattice basis.
    pub fn is_regular(&self) -> bool {
        self.is_simplicial()
            && elementary_divisors(&IntMatrix::from_rows(self.dim, self.rays.clone()))
                .iter()
                .all(One::is_one)
    }

    pub fn linear_span(&self) -> Sublattice {
        saturate(&Sublattice::generated_by(self.dim, &self.generators()))
    }

    pub fn dual(&self) -> Cone {
        let h = self.hrep();
        let d = Cone::raw(self.dim, h.equations.clone(), h.facets.clone());
        let _ = d.hrep.set(HRep {
            equations: self.lineality.clone(),
            facets: self.rays.clone(),
        });
        d
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        assert_eq!(x.len(), self.dim, "point dimension");
        self.equations().iter().all(|e| rat_dot(e, x).is_zero())
            && self.facets().iter().all(|f| !rat_dot(f, x).is_negative())
    }

    pub fn contains_int(&self, x: &[Int]) -> bool {
        self.contains(&to_rat(x))
    }

    pub fn relint_contains(&self, x: &[Rat]) -> bool {
        assert_eq!(x.len(), self.dim, "point dimension");
        self.equations().iter().all(|e| rat_dot(e, x).is_zero())
            && self.facets().iter().all(|f| rat_dot(f, x).is_positive())
    }

    pub fn relint_contains_int(&self, x: &[Int]) -> bool {
        self.relint_contains(&to_rat(x))
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.generators().iter().all(|g| self.contains_int(g))
    }

    /// A lattice point in the relative interior.
    pub fn relint_point(&self) -> Vec<Int> {
        let mut p = vec![Int::zero(); self.dim];
        for r in &self.rays {
            for (a, b) in p.iter_mut().zip(r) {
                *a += b;
            }
        }
        p
    }

    pub fn intersect(&self, other: &Cone) -> Cone {
        assert_eq!(self.dim, other.dim, "ambient mismatch");
        let mut eqs = self.equations().to_vec();
        eqs.extend(other.equations().iter().cloned());
        let mut ineqs = self.facets().to_vec();
        ineqs.extend(other.facets().iter().cloned());
        Cone::from_inequalities(self.dim, &eqs, &ineqs)
    }

    pub fn intersect_all(dim: usize, cones: &[Cone]) -> Cone {
        let mut eqs = Vec::new();
        let mut ineqs = Vec::new();
        for c in cones {
            eqs.extend(c.equations().iter().cloned());
            ineqs.extend(c.facets().iter().cloned());
        }
        Cone::from_inequalities(dim, &eqs, &ineqs)
    }

    pub fn minkowski_sum(dim: usize, cones: &[Cone]) -> Cone {
        let gens: Vec<Vec<Int>> = cones.iter().flat_map(|c| c.generators()).collect();
        Cone::from_generators(dim, &gens)
    }

    /// Image under the linear map given by `m` (acting on column vectors).
    pub fn linear_image(&self, m: &IntMatrix) -> Cone {
        let gens: Vec<Vec<Int>> = self.generators().iter().map(|g| m.mul_vec(g)).collect();
        Cone::from_generators(m.nrows(), &gens)
    }

    /// The face `c ∩ u^⊥` for a form `u` that is nonnegative on the cone.
    pub fn orthogonal_face(&self, u: &[Int]) -> Cone {
        let mut eqs = self.equations().to_vec();
        eqs.push(u.to_vec());
        Cone::from_inequalities(self.dim, &eqs, self.facets())
    }

    /// Faces as sets of ray indices, smallest first.
    pub fn face_ray_sets(&self, limit: usize) -> Result<Vec<FaceSet>> {
        assert!(self.rays.len() < 64, "too many rays for face enumeration");
        let tight: Vec<FaceSet> = self
            .facets()
            .iter()
            .map(|f| FaceSet::from_indices((0..self.rays.len()).filter(|&i| dot(f, &self.rays[i]).is_zero())))
            .collect();
        let mut faces = vec![FaceSet::full(self.rays.len())];
        let mut k = 0;
        while k < faces.len() {
            let s = faces[k];
            for t in &tight {
                let f = s.intersection(*t);
                if !faces.contains(&f) {
                    faces.push(f);
                    if faces.len() > limit {
                        return Err(Error::FaceEnumerationTooLarge {
                            faces: faces.len() as u128,
                            limit,
                        });
                    }
                }
            }
            k += 1;
        }
        faces.sort();
        Ok(faces)
    }

    /// The face spanned by the lineality space and the listed rays.
    pub fn face_from_rays(&self, s: FaceSet) -> Cone {
        let mut gens: Vec<Vec<Int>> = s.iter().map(|i| self.rays[i].clone()).collect();
        for l in &self.lineality {
            gens.push(l.clone());
            gens.push(l.iter().map(|x| -x).collect());
        }
        Cone::from_generators(self.dim, &gens)
    }

    pub fn faces(&self, limit: usize) -> Result<Vec<Cone>> {
        let mut out: Vec<Cone> = self
            .face_ray_sets(limit)?
            .into_iter()
            .map(|s| self.face_from_rays(s))
            .collect();
        out.sort();
        Ok(out)
    }

    /// The smallest face of `self` containing `other` (assumed inside).
    pub fn minimal_face_containing(&self, other: &Cone) -> Cone {
        let gens = other.generators();
        let tight: Vec<&Vec<Int>> = self
            .facets()
            .iter()
            .filter(|f| gens.iter().all(|g| dot(f, g).is_zero()))
            .collect();
        let s = FaceSet::from_indices(
            (0..self.rays.len()).filter(|&i| tight.iter().all(|f| dot(f, &self.rays[i]).is_zero())),
        );
        self.face_from_rays(s)
    }

    pub fn is_face_of(&self, c: &Cone) -> bool {
        c.contains_cone(self) && c.minimal_face_containing(self) == *self
    }
}

fn combination_vars(c: &Cone) -> (Vec<Vec<Int>>, usize) {
    // columns of a generating system: rays (coefficient >= 1 wanted) then lineality (free)
    let mut cols = c.rays.clone();
    cols.extend(c.lineality.iter().cloned());
    (cols, c.rays.len())
}

/// A point in the common relative interior of two cones, if any.
///
/// The zero cone counts as its own relative interior.
pub fn relint_overlap_witness(a: &Cone, b: &Cone) -> Option<Vec<Rat>> {
    assert_eq!(a.dim, b.dim, "ambient mismatch");
    let (ca, ra) = combination_vars(a);
    let (cb, rb) = combination_vars(b);
    let n = ca.len() + cb.len();
    let mut sys = System::new(n);
    for j in 0..a.dim {
        let mut row: Vec<Int> = ca.iter().map(|v| v[j].clone()).collect();
        row.extend(cb.iter().map(|v| -&v[j]));
        sys.eq(row, 0);
    }
    for i in (0..ra).chain(ca.len()..ca.len() + rb) {
        let mut row = vec![Int::zero(); n];
        row[i] = Int::one();
        sys.ge(row, 1);
    }
    let x = sys.solve()?;
    let mut p = vec![Rat::zero(); a.dim];
    for (coef, v) in x.iter().zip(&ca) {
        for (pj, vj) in p.iter_mut().zip(v) {
            *pj += coef * Rat::from(vj.clone());
        }
    }
    Some(p)
}

/// Whether the relative interiors of two cones meet.
pub fn relint_overlap(a: &Cone, b: &Cone) -> bool {
    if a == b {
        return true;
    }
    relint_overlap_witness(a, b).is_some()
}

/// `a° ⊆ b°`.
pub fn relint_subset(a: &Cone, b: &Cone) -> bool {
    b.contains_cone(a) && relint_overlap(a, b)
}

/// A linear form `u`, restricted to the span of `allowed` rows when given,
/// with `u >= 0` on `a`, `u <= 0` on `b` and `u^⊥ ∩ a = a ∩ b = u^⊥ ∩ b`.
pub fn separating_form(a: &Cone, b: &Cone, allowed: Option<&[Vec<Int>]>) -> Option<Vec<Rat>> {
    assert_eq!(a.dim, b.dim, "ambient mismatch");
    let dim = a.dim;
    let common = a.intersect(b);
    if !common.is_face_of(a) || !common.is_face_of(b) {
        return None;
    }
    let basis: Vec<Vec<Int>> = match allowed {
        Some(rows) => rows.to_vec(),
        None => IntMatrix::identity(dim).into_rows(),
    };
    let nv = basis.len();
    // u = y · basis, so u·v = Σ y_t (basis_t · v)
    let coeffs = |v: &Vec<Int>| -> Vec<Int> { basis.iter().map(|m| dot(m, v)).collect() };
    let mut sys = System::new(nv);
    for l in a.lineality.iter().chain(&b.lineality) {
        sys.eq(coeffs(l), 0);
    }
    for (c, sign) in [(a, Rel::Ge), (b, Rel::Le)] {
        for r in &c.rays {
            if common.contains_int(r) {
                sys.eq(coeffs(r), 0);
            } else {
                let rhs = if sign == Rel::Ge { 1 } else { -1 };
                sys.add(coeffs(r), sign, Int::from(rhs));
            }
        }
    }
    let y = sys.solve()?;
    let mut u = vec![Rat::zero(); dim];
    for (yt, m) in y.iter().zip(&basis) {
        for (uj, mj) in u.iter_mut().zip(m) {
            *uj += yt * Rat::from(mj.clone());
        }
    }
    Some(u)
}

/// Check the separation conditions for a given form.
pub fn is_separating_form(a: &Cone, b: &Cone, u: &[Rat]) -> bool {
    let ui = primitive_rat(u);
    if a.generators().iter().any(|g| dot(&ui, g).is_negative())
        || b.generators().iter().any(|g| dot(&ui, g).is_positive())
    {
        return false;
    }
    let common = a.intersect(b);
    a.orthogonal_face(&ui) == common && b.orthogonal_face(&ui) == common
}
