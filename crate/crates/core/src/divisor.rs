//! Divisor classes, Picard data and the ample, semiample and Mori cones,
//! computed on the bunch.

use crate::bunch::Bunch;
use crate::cone::Cone;
use crate::fan::bunch_to_fan;
use crate::linalg::{lattice_intersection, subspace_intersection, to_rat, Int, Sublattice};
use crate::lp::System;
use crate::{Error, Result};
use num_traits::Zero;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorClassReport {
    pub cl_rank: usize,
    pub cl_torsion: Vec<Int>,
    pub pic_q_basis: Vec<Vec<Int>>,
    pub semiample_cone: Cone,
    pub ample_nonempty: bool,
    /// Present when the bunch is complete and geometric.
    pub mori_cone: Option<Cone>,
    /// Present for free bunches.
    pub canonical_class: Option<Vec<Int>>,
    pub q_gorenstein: Option<bool>,
    pub fano: Option<bool>,
    pub b2: usize,
}

fn require_standard(b: &Bunch) -> Result<()> {
    if b.is_standard() {
        Ok(())
    } else {
        Err(Error::NotStandard)
    }
}

fn require_free(b: &Bunch) -> Result<()> {
    require_standard(b)?;
    if b.is_free() {
        Ok(())
    } else {
        Err(Error::NotFree)
    }
}

/// `Cl(X)` as rank and torsion coefficients, from the ray map of the fan.
pub fn class_group(b: &Bunch) -> Result<(usize, Vec<Int>)> {
    Ok(bunch_to_fan(b)?.class_group())
}

/// `Pic_Q(X) = ∩ lin(τ)` as a saturated lattice.
pub fn pic_q(b: &Bunch) -> Sublattice {
    let k = b.k_rank();
    let spans: Vec<Sublattice> = b.cones().iter().map(Cone::linear_span).collect();
    subspace_intersection(k, &spans)
}

pub fn b2(b: &Bunch) -> usize {
    pic_q(b).rank()
}

/// `∩ τ`.
pub fn semiample_cone(b: &Bunch) -> Cone {
    Cone::intersect_all(b.k_rank(), &b.cones())
}

/// `w ∈ ∩ τ°`.
pub fn is_ample(b: &Bunch, w: &[crate::Rat]) -> bool {
    b.cones().iter().all(|t| t.relint_contains(w))
}

/// Whether `∩ τ°` is nonempty, by exact feasibility.
pub fn ample_nonempty(b: &Bunch) -> bool {
    let k = b.k_rank();
    let mut sys = System::new(k);
    for t in b.cones() {
        for eq in t.equations() {
            sys.eq(eq.clone(), 0);
        }
        for f in t.facets() {
            sys.ge(f.clone(), 1);
        }
    }
    sys.solve().is_some()
}

/// A point of `∩ τ°`, if any.
pub fn ample_class(b: &Bunch) -> Option<Vec<Int>> {
    let k = b.k_rank();
    let mut sys = System::new(k);
    for t in b.cones() {
        for eq in t.equations() {
            sys.eq(eq.clone(), 0);
        }
        for f in t.facets() {
            sys.ge(f.clone(), 1);
        }
    }
    sys.solve().map(|x| crate::linalg::primitive_rat(&x))
}

/// `Pic(X) = ∩_{γ₀ ∈ cov} Q(lin(γ₀) ∩ E)`, without saturation.
pub fn pic_lattice_free(b: &Bunch) -> Result<Sublattice> {
    require_free(b)?;
    let k = b.k_rank();
    let images: Vec<Sublattice> = b
        .covering_collection()
        .into_iter()
        .map(|g| b.pc().face_lattice_image(g))
        .collect();
    Ok(lattice_intersection(k, &images))
}

/// `Σ w_i`, counted with multiplicity.
pub fn anticanonical_class(b: &Bunch) -> Result<Vec<Int>> {
    require_free(b)?;
    let mut s = vec![Int::zero(); b.k_rank()];
    for w in b.pc().weights() {
        for (x, y) in s.iter_mut().zip(w) {
            *x += y;
        }
    }
    Ok(s)
}

pub fn canonical_class(b: &Bunch) -> Result<Vec<Int>> {
    Ok(anticanonical_class(b)?.into_iter().map(|x| -x).collect())
}

pub fn is_q_gorenstein(b: &Bunch) -> Result<bool> {
    let a = anticanonical_class(b)?;
    Ok(pic_q(b).span_contains(&to_rat(&a)))
}

/// The anticanonical class is Cartier and ample. Smooth bunches use
/// `Σ w_i ∈ ∩ τ°` directly.
pub fn is_fano(b: &Bunch) -> Result<bool> {
    if b.dictionary().smooth {
        return is_fano_smooth(b);
    }
    is_fano_cartier_ample(b)
}

pub fn is_fano_cartier_ample(b: &Bunch) -> Result<bool> {
    let a = anticanonical_class(b)?;
    Ok(pic_lattice_free(b)?.contains(&a) && is_ample(b, &to_rat(&a)))
}

pub fn is_fano_smooth(b: &Bunch) -> Result<bool> {
    let a = anticanonical_class(b)?;
    Ok(is_ample(b, &to_rat(&a)))
}

/// Experimental: `Σ w_i` lies in `Q(γ₀)°` and in `Q(lin(γ₀) ∩ E)` for
/// every `γ₀ ∈ cov`.
pub fn is_fano_cover_criterion(b: &Bunch) -> Result<bool> {
    let a = anticanonical_class(b)?;
    let ar = to_rat(&a);
    Ok(b.covering_collection()
        .into_iter()
        .all(|g| b.pc().projected_face(g).relint_contains(&ar) && b.pc().face_lattice_image(g).contains(&a)))
}

/// `NE(X) = Σ τ^∨`, in the dual of `K_Q`.
pub fn mori_cone(b: &Bunch) -> Result<Cone> {
    require_standard(b)?;
    if !b.is_geometric() {
        return Err(Error::HypothesisViolated("bunch is not geometric".into()));
    }
    if !b.dictionary().complete {
        return Err(Error::HypothesisViolated("bunch is not complete".into()));
    }
    let duals: Vec<Cone> = b.cones().iter().map(Cone::dual).collect();
    Ok(Cone::minkowski_sum(b.k_rank(), &duals))
}

pub fn is_projective_simplicial(b: &Bunch) -> Result<bool> {
    Ok(mori_cone(b)?.is_strictly_convex())
}

pub fn report(b: &Bunch) -> Result<DivisorClassReport> {
    require_standard(b)?;
    let (cl_rank, cl_torsion) = class_group(b)?;
    let pq = pic_q(b);
    let free = b.is_free();
    let d = b.dictionary();
    let mori_cone = (d.complete && b.is_geometric())
        .then(|| mori_cone(b))
        .transpose()?;
    Ok(DivisorClassReport {
        cl_rank,
        cl_torsion,
        pic_q_basis: pq.vectors().to_vec(),
        semiample_cone: semiample_cone(b),
        ample_nonempty: ample_nonempty(b),
        mori_cone,
        canonical_class: free.then(|| canonical_class(b)).transpose()?,
        q_gorenstein: free.then(|| is_q_gorenstein(b)).transpose()?,
        fano: free.then(|| is_fano(b)).transpose()?,
        b2: pq.rank(),
    })
}
