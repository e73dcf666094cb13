//! Projected cones `(Q: E → K, γ)` and their Gale duals `(P: F → N, δ)`.
//!
//! Faces of the simplicial cone γ are index sets of its generators. Generator
//! `i` of δ is the primitive functional vanishing on every generator of γ
//! except the `i`-th, so the face star of `I` is the face of δ spanned by the
//! generators outside `I`.

use crate::cone::Cone;
use crate::face::FaceSet;
use crate::linalg::{
    dot, is_primitive, is_surjective, kernel_basis, primitive, primitive_rat, rank, rat_inverse, saturate,
    Int, IntMatrix, Rat, Sublattice,
};
use crate::lp::System;
use crate::{par, Error, Limits, Result};
use num_traits::{One, Zero};
use std::sync::{Arc, OnceLock};

pub struct ProjectedCone {
    q: IntMatrix,
    gens: Vec<Vec<Int>>,
    dual: OnceLock<Arc<ProjectedCone>>,
    images: OnceLock<Arc<FaceImages>>,
}

impl Clone for ProjectedCone {
    fn clone(&self) -> Self {
        ProjectedCone {
            q: self.q.clone(),
            gens: self.gens.clone(),
            dual: self.dual.clone(),
            images: self.images.clone(),
        }
    }
}

impl PartialEq for ProjectedCone {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.gens == other.gens
    }
}

impl Eq for ProjectedCone {}

impl std::fmt::Debug for ProjectedCone {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ProjectedCone")
            .field("q", &self.q)
            .field("gamma", &self.gens)
            .finish()
    }
}

/// All images `Q(γ₀)`, deduplicated.
///
/// Generators whose images point the same way contribute the same cone, so
/// images are indexed by subsets of distinct image directions.
pub struct FaceImages {
    directions: Vec<Vec<Int>>,
    gen_dir: Vec<Option<usize>>,
    mask_cone: Vec<usize>,
    cones: Vec<Cone>,
}

impl FaceImages {
    /// Distinct projected faces in canonical order.
    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn directions(&self) -> &[Vec<Int>] {
        &self.directions
    }

    fn mask(&self, face: FaceSet) -> usize {
        face.iter()
            .filter_map(|i| self.gen_dir[i])
            .fold(0, |m, d| m | 1 << d)
    }

    /// Index into `cones()` of the image of a face of γ.
    pub fn cone_id(&self, face: FaceSet) -> usize {
        self.mask_cone[self.mask(face)]
    }

    pub fn cone_of(&self, face: FaceSet) -> &Cone {
        &self.cones[self.cone_id(face)]
    }

    pub fn id_of(&self, c: &Cone) -> Option<usize> {
        self.cones.binary_search(c).ok()
    }
}

impl ProjectedCone {
    /// `q` is the `k × e` matrix of `Q`; `gamma` lists the `e` generators of γ.
    pub fn new(q: IntMatrix, gamma: Vec<Vec<Int>>) -> Result<Self> {
        let e = q.ncols();
        if gamma.len() != e {
            return Err(Error::InvalidProjectedCone(format!(
                "{} generators for a lattice of rank {e}",
                gamma.len()
            )));
        }
        if e >= 64 {
            return Err(Error::InvalidProjectedCone("rank of E above 63".into()));
        }
        if gamma.iter().any(|g| g.len() != e) {
            return Err(Error::InvalidProjectedCone("generator length".into()));
        }
        if rank(&gamma) != e {
            return Err(Error::InvalidProjectedCone(
                "γ is not simplicial of full dimension".into(),
            ));
        }
        if !is_surjective(&q) {
            return Err(Error::InvalidProjectedCone("Q is not surjective".into()));
        }
        Ok(ProjectedCone {
            q,
            gens: gamma.iter().map(|g| primitive(g)).collect(),
            dual: OnceLock::new(),
            images: OnceLock::new(),
        })
    }

    /// `γ` the positive orthant and `Q` sending `e_i` to the `i`-th weight.
    pub fn from_weights(k_rank: usize, weights: &[Vec<Int>]) -> Result<Self> {
        if weights.iter().any(|w| w.len() != k_rank) {
            return Err(Error::DimensionMismatch("weight length".into()));
        }
        let q = IntMatrix::from_columns(k_rank, weights);
        let e = weights.len();
        ProjectedCone::new(q, IntMatrix::identity(e).into_rows())
    }

    pub fn e_rank(&self) -> usize {
        self.q.ncols()
    }

    pub fn k_rank(&self) -> usize {
        self.q.nrows()
    }

    pub fn q(&self) -> &IntMatrix {
        &self.q
    }

    pub fn gamma_generators(&self) -> &[Vec<Int>] {
        &self.gens
    }

    pub fn gamma(&self) -> Cone {
        Cone::from_generators(self.e_rank(), &self.gens)
    }

    pub fn is_orthant(&self) -> bool {
        self.gens == IntMatrix::identity(self.e_rank()).into_rows()
    }

    /// `γ` regular in `E`.
    pub fn is_regular(&self) -> bool {
        IntMatrix::from_rows(self.e_rank(), self.gens.clone()).is_unimodular()
    }

    /// Images `Q(g_i)` of the generators.
    pub fn weights(&self) -> Vec<Vec<Int>> {
        self.gens.iter().map(|g| self.q.mul_vec(g)).collect()
    }

    pub fn weight(&self, i: usize) -> Vec<Int> {
        self.q.mul_vec(&self.gens[i])
    }

    pub fn all_faces(&self) -> FaceSet {
        FaceSet::full(self.e_rank())
    }

    pub fn gamma_face(&self, face: FaceSet) -> Cone {
        let g: Vec<Vec<Int>> = face.iter().map(|i| self.gens[i].clone()).collect();
        Cone::from_generators(self.e_rank(), &g)
    }

    /// `Q(γ₀)`, computed directly.
    pub fn projected_face(&self, face: FaceSet) -> Cone {
        let w: Vec<Vec<Int>> = face.iter().map(|i| self.weight(i)).collect();
        Cone::from_generators(self.k_rank(), &w)
    }

    /// The Gale dual `(P: F → N, δ)`, as a projected cone in its own right.
    pub fn dual(&self) -> Arc<ProjectedCone> {
        self.dual
            .get_or_init(|| {
                let e = self.e_rank();
                let m = kernel_basis(&self.q);
                let p = m.basis().clone();
                let inv =
                    rat_inverse(&IntMatrix::from_columns(e, &self.gens)).expect("γ is full-dimensional");
                let delta: Vec<Vec<Int>> = inv.iter().map(|row| primitive_rat(row)).collect();
                let d = ProjectedCone::new(p, delta).expect("Gale dual of a projected cone");
                // the double dual is canonically the original
                let back = ProjectedCone {
                    q: self.q.clone(),
                    gens: self.gens.clone(),
                    dual: OnceLock::new(),
                    images: self.images.clone(),
                };
                let _ = d.dual.set(Arc::new(back));
                Arc::new(d)
            })
            .clone()
    }

    /// Face star `γ₀* = γ₀^⊥ ∩ δ`, a cone in `F_Q`.
    pub fn face_star(&self, face: FaceSet) -> Cone {
        let d = self.dual();
        d.gamma_face(face.complement(self.e_rank()))
    }

    /// All distinct projected faces.
    pub fn images(&self, limits: &Limits) -> Result<Arc<FaceImages>> {
        if let Some(im) = self.images.get() {
            return Ok(im.clone());
        }
        limits.check_faces(self.e_rank())?;
        let k = self.k_rank();
        let mut directions: Vec<Vec<Int>> = Vec::new();
        let mut gen_dir = Vec::new();
        for w in self.weights() {
            if w.iter().all(Zero::is_zero) {
                gen_dir.push(None);
                continue;
            }
            let p = primitive(&w);
            let id = match directions.iter().position(|d| *d == p) {
                Some(id) => id,
                None => {
                    directions.push(p);
                    directions.len() - 1
                }
            };
            gen_dir.push(Some(id));
        }
        let d = directions.len();
        let raw: Vec<Cone> = par::map_range(1usize << d, |mask| {
            let g: Vec<Vec<Int>> = (0..d)
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| directions[i].clone())
                .collect();
            Cone::from_generators(k, &g)
        });
        let mut cones = raw.clone();
        cones.sort();
        cones.dedup();
        let mask_cone = raw
            .iter()
            .map(|c| cones.binary_search(c).expect("present"))
            .collect();
        let im = Arc::new(FaceImages {
            directions,
            gen_dir,
            mask_cone,
            cones,
        });
        Ok(self.images.get_or_init(|| im).clone())
    }

    /// `Q` injective on `lin(γ₀)`.
    pub fn q_injective_on_face(&self, face: FaceSet) -> bool {
        let w: Vec<Vec<Int>> = face.iter().map(|i| self.weight(i)).collect();
        rank(&w) == face.len()
    }

    /// `P` maps `lin(γ₀*)` onto `N_Q`.
    pub fn p_surjective_on_star(&self, face: FaceSet) -> bool {
        let d = self.dual();
        let star = face.complement(self.e_rank());
        let img: Vec<Vec<Int>> = star.iter().map(|j| d.weight(j)).collect();
        rank(&img) == d.k_rank()
    }

    fn face_lattice(&self, face: FaceSet) -> Sublattice {
        let g: Vec<Vec<Int>> = face.iter().map(|i| self.gens[i].clone()).collect();
        saturate(&Sublattice::generated_by(self.e_rank(), &g))
    }

    /// `Q(lin(γ₀) ∩ E)` as a sublattice of `K`.
    pub fn face_lattice_image(&self, face: FaceSet) -> Sublattice {
        let lat = self.face_lattice(face);
        let img: Vec<Vec<Int>> = lat.vectors().iter().map(|v| self.q.mul_vec(v)).collect();
        Sublattice::generated_by(self.k_rank(), &img)
    }

    /// `Q` maps `lin(γ₀) ∩ E` isomorphically onto a primitive sublattice.
    pub fn q_maps_face_lattice_primitively(&self, face: FaceSet) -> bool {
        let lat = self.face_lattice(face);
        let img = self.face_lattice_image(face);
        img.rank() == lat.rank() && is_primitive(&img)
    }

    /// `P` maps `lin(γ₀*) ∩ F` onto `N`.
    pub fn p_maps_star_lattice_onto(&self, face: FaceSet) -> bool {
        let d = self.dual();
        let lat = d.face_lattice(face.complement(self.e_rank()));
        let cols: Vec<Vec<Int>> = lat.vectors().iter().map(|v| d.q.mul_vec(v)).collect();
        is_surjective(&IntMatrix::from_columns(d.k_rank(), &cols))
    }

    /// A form on the ambient space of this cone that vanishes on `ker Q`,
    /// is zero on the generators common to `a` and `b`, positive on those
    /// only in `a` and negative on those only in `b`.
    pub fn invariant_form(&self, a: FaceSet, b: FaceSet) -> Option<Vec<Rat>> {
        let k = self.k_rank();
        let mut sys = System::new(k);
        for j in a.union(b).iter() {
            let w = self.weight(j);
            match (a.contains(j), b.contains(j)) {
                (true, true) => sys.eq(w, 0),
                (true, false) => sys.ge(w, 1),
                _ => sys.le(w, -1),
            }
        }
        let y = sys.solve()?;
        Some(self.pull_back(&y))
    }

    /// `y ↦ y·Q`, a form on the source lattice.
    fn pull_back(&self, y: &[Rat]) -> Vec<Rat> {
        (0..self.e_rank())
            .map(|j| {
                y.iter().enumerate().fold(Rat::zero(), |acc, (t, yt)| {
                    acc + yt * Rat::from(self.q.get(t, j).clone())
                })
            })
            .collect()
    }

    /// An `L`-invariant separating form for the face stars of `i_set` and
    /// `j_set`, as an element of `M_Q = ker Q ⊗ Q`.
    pub fn invariant_separation(&self, i_set: FaceSet, j_set: FaceSet) -> Option<Vec<Rat>> {
        let e = self.e_rank();
        self.dual()
            .invariant_form(i_set.complement(e), j_set.complement(e))
    }

    /// Does `u` (a form on the ambient space of γ) vanish on `ker Q`.
    pub fn is_invariant_form(&self, u: &[Rat]) -> bool {
        let ker = kernel_basis(&self.q);
        let ui = primitive_rat(u);
        ker.vectors().iter().all(|v| dot(&ui, v).is_zero())
    }

    /// Image of a face of γ under Q applied to an integral vector list; used
    /// by callers that need the images of arbitrary faces quickly.
    pub fn face_weights(&self, face: FaceSet) -> Vec<Vec<Int>> {
        face.iter().map(|i| self.weight(i)).collect()
    }

    pub fn det_gamma(&self) -> Int {
        IntMatrix::from_rows(self.e_rank(), self.gens.clone()).det()
    }

    pub fn is_free(&self) -> bool {
        let d = self.det_gamma();
        d == Int::one() || d == -Int::one()
    }
}
