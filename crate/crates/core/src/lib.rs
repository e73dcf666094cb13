//! Bunches of cones and toric varieties.
//!
//! A bunch lives in the divisor class space of a toric variety; its Gale
//! dual is a projectable fan whose quotient is the fan of the variety. This
//! crate converts in both directions with exact arithmetic and reads off the
//! geometry (smoothness, completeness, Picard data, ample and Mori cones)
//! directly from the bunch.

#![allow(clippy::needless_range_loop)]

pub mod bunch;
pub mod catalog;
pub mod classify;
pub mod cone;
pub mod divisor;
mod error;
pub mod face;
pub mod fan;
pub mod linalg;
pub mod lp;
pub mod par;
pub mod projected;

pub use bunch::{Bunch, Dictionary, WeightSystem};
pub use cone::Cone;
pub use error::{Error, Result};
pub use face::FaceSet;
pub use fan::{Fan, FanOracles, ProjectableFan};
pub use linalg::{Int, IntMatrix, Rat, Sublattice};
pub use projected::ProjectedCone;

/// Caps on the exponential searches.
#[derive(Clone, Debug)]
pub struct Limits {
    /// Largest face lattice (2^e_rank) we are willing to walk.
    pub max_faces: usize,
    /// Largest number of distinct projected faces fed to bunch enumeration.
    pub max_enum: usize,
    /// Largest number of candidate maps tried by isomorphism searches.
    pub max_search: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_faces: 1 << 16,
            max_enum: 24,
            max_search: 1 << 20,
        }
    }
}

impl Limits {
    pub(crate) fn check_faces(&self, e_rank: usize) -> Result<()> {
        if e_rank >= 63 || (1usize << e_rank) > self.max_faces {
            return Err(Error::FaceEnumerationTooLarge {
                faces: 1u128 << e_rank.min(127),
                limit: self.max_faces,
            });
        }
        Ok(())
    }
}
