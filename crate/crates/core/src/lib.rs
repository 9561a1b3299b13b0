//! Matched pairs of finite groups, bicrossed products of fusion rings and
//! crossed extensions of pointed fusion categories, at the level of
//! Grothendieck rings.
//!
//! The crate is organised bottom-up:
//!
//! * [`numlin`]: dense complex linear algebra (rank, kernels, commutant splitting);
//! * [`grp`]: finite groups given by multiplication tables;
//! * [`matched`]: matched pairs and Zappa–Szép products;
//! * [`fusring`]: fusion rings, FP-dimensions, gradings and based isomorphisms;
//! * [`crossact`]: `(G, Γ)`-crossed actions on a fusion ring;
//! * [`bicross`]: the bicrossed product ring `K(vec_G ⋈ C)`;
//! * [`equivar`]: equivariant objects and the crossed extension ring;
//! * [`dualgt`]: bimodule model of the dual of a pointed category;
//! * [`theorem`]: the end-to-end comparison of the last two.

pub mod bicross;
pub mod crossact;
pub mod dualgt;
pub mod equivar;
pub mod error;
pub mod fusring;
pub mod grp;
pub mod io;
pub mod matched;
pub mod numlin;
pub mod report;
pub mod suite;
pub mod theorem;

pub use error::{Error, Result};
pub use report::{Report, Violation};

/// Numerical options shared by the splitting and decomposition routines.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Options {
    /// Relative singular-value threshold for rank decisions.
    pub tol: f64,
    /// Seed of the pseudo-random elements drawn while splitting.
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            tol: numlin::DEFAULT_TOL,
            seed: 0,
        }
    }
}

impl Options {
    pub fn with_seed(seed: u64) -> Self {
        Options {
            seed,
            ..Options::default()
        }
    }

    /// Seed for the `index`-th independent task of a parallel computation.
    pub(crate) fn task_seed(&self, index: usize) -> u64 {
        self.seed
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(index as u64)
    }
}
