//! Built-in examples.

use crate::bunch::{bunch_from_weight_indices, Bunch, WeightSystem};
use crate::cone::{separating_form, Cone};
use crate::face::FaceSet;
use crate::fan::{Fan, ProjectableFan};
use crate::linalg::{kernel_basis, Int, IntMatrix, Rat};
use crate::projected::ProjectedCone;
use crate::{Limits, Result};
use std::sync::Arc;

pub enum Example {
    Bunch(Bunch),
    Fan(Fan),
    ProjectableFan(ProjectableFan),
    RawProjectedCone(RawProjectedCone),
}

pub const NAMES: &[&str] = &[
    "p123",
    "p1355",
    "p1xp1",
    "nonsimplicial-separation",
    "plane-two-cones",
    "plane-three-cones",
    "oda",
    "eikelberg-delta",
    "eikelberg-delta-prime",
];

pub fn example(name: &str, limits: &Limits) -> Result<Option<Example>> {
    Ok(Some(match name {
        "p123" => Example::Bunch(p123(limits)?),
        "p1355" => Example::Bunch(p1355(limits)?),
        "p1xp1" => Example::Bunch(p1xp1(limits)?),
        "nonsimplicial-separation" => Example::RawProjectedCone(nonsimplicial_separation().0),
        "plane-two-cones" => Example::ProjectableFan(projectable_plane(false)?),
        "plane-three-cones" => Example::ProjectableFan(projectable_plane(true)?),
        "oda" => Example::Bunch(oda(limits)?),
        "eikelberg-delta" => Example::Fan(eikelberg(false)?),
        "eikelberg-delta-prime" => Example::Fan(eikelberg(true)?),
        _ => return Ok(None),
    }))
}

/// Weighted projective plane `P(1,2,3)`.
pub fn p123(limits: &Limits) -> Result<Bunch> {
    let ws = WeightSystem::from_i64(1, &[&[1], &[2], &[3]])?;
    bunch_from_weight_indices(&ws, &[vec![0]], limits)
}

/// Weighted projective space `P(1,3,5,5)`.
pub fn p1355(limits: &Limits) -> Result<Bunch> {
    let ws = WeightSystem::from_i64(1, &[&[1], &[3], &[5], &[5]])?;
    bunch_from_weight_indices(&ws, &[vec![0]], limits)
}

pub fn p1xp1(limits: &Limits) -> Result<Bunch> {
    let ws = WeightSystem::from_i64(2, &[&[1, 0], &[1, 0], &[0, 1], &[0, 1]])?;
    bunch_from_weight_indices(&ws, &[vec![0, 2]], limits)
}

/// A surjection `Q: E → K` with an arbitrary full-dimensional cone γ,
/// handled at the level of plain cones. [`ProjectedCone`] requires γ
/// simplicial; this type does not.
#[derive(Clone, Debug)]
pub struct RawProjectedCone {
    pub q: IntMatrix,
    pub gamma: Cone,
}

impl RawProjectedCone {
    /// `γ₀* = γ₀^⊥ ∩ γ^∨` in the dual space `F_Q`.
    pub fn face_star(&self, face: &Cone) -> Cone {
        self.gamma.dual().orthogonal_face(&face.relint_point())
    }

    pub fn projected(&self, face: &Cone) -> Cone {
        face.linear_image(&self.q)
    }

    /// Forms on `F` vanishing on `L = ker P`, which is the span of `ker Q`.
    pub fn invariant_forms(&self) -> Vec<Vec<Int>> {
        kernel_basis(&self.q).vectors().to_vec()
    }

    /// An `L`-invariant form separating `γ₁*` and `γ₂*`.
    pub fn invariant_separation(&self, g1: &Cone, g2: &Cone) -> Option<Vec<Rat>> {
        separating_form(
            &self.face_star(g1),
            &self.face_star(g2),
            Some(&self.invariant_forms()),
        )
    }
}

/// `γ = cone(e1+e3, e2+2e3, e1−2e3, e2−e3)` projected to the third
/// coordinate, with the faces `γ₁ = cone(e2−e3)` and `γ₂ = cone(e1+e3)`.
pub fn nonsimplicial_separation() -> (RawProjectedCone, Cone, Cone) {
    let raw = RawProjectedCone {
        q: IntMatrix::from_i64(&[&[0, 0, 1]]),
        gamma: Cone::from_i64(3, &[&[1, 0, 1], &[0, 1, 2], &[1, 0, -2], &[0, 1, -1]]),
    };
    let g1 = Cone::from_i64(3, &[&[0, 1, -1]]);
    let g2 = Cone::from_i64(3, &[&[1, 0, 1]]);
    (raw, g1, g2)
}

/// The orthant in `Z³` mapped by `(v1−v3, v2−v3)`, with the faces
/// `{e1,e2}`, `{e1,e3}` and optionally `{e2,e3}`.
pub fn projectable_plane(with_third: bool) -> Result<ProjectableFan> {
    let dpc = Arc::new(ProjectedCone::new(
        IntMatrix::from_i64(&[&[1, 0, -1], &[0, 1, -1]]),
        IntMatrix::identity(3).into_rows(),
    )?);
    let mut faces = vec![FaceSet::from_indices([0, 1]), FaceSet::from_indices([0, 2])];
    if with_third {
        faces.push(FaceSet::from_indices([1, 2]));
    }
    ProjectableFan::new(dpc, faces)
}

/// A complete simplicial nonprojective threefold: weights
/// `e1, e2, e3, e1+e2, e1+e3, e2+e3`.
pub fn oda(limits: &Limits) -> Result<Bunch> {
    let ws = WeightSystem::from_i64(
        3,
        &[
            &[1, 0, 0],
            &[0, 1, 0],
            &[0, 0, 1],
            &[1, 1, 0],
            &[1, 0, 1],
            &[0, 1, 1],
        ],
    )?;
    bunch_from_weight_indices(
        &ws,
        &[vec![2, 3, 4], vec![0, 3, 5], vec![1, 4, 5], vec![3, 4, 5]],
        limits,
    )
}

/// The fan over the faces of a prism; the primed version moves `v2` to
/// `(1,2,3)`.
pub fn eikelberg(prime: bool) -> Result<Fan> {
    let v2: &[i64] = if prime { &[1, 2, 3] } else { &[0, 1, 1] };
    Fan::from_i64(
        3,
        &[
            &[1, 0, 1],
            v2,
            &[-1, -1, 1],
            &[1, 0, -1],
            &[0, 1, -1],
            &[-1, -1, -1],
        ],
        &[
            &[0, 1, 2],
            &[3, 4, 5],
            &[0, 1, 4, 3],
            &[1, 2, 5, 4],
            &[2, 0, 3, 5],
        ],
    )
}
