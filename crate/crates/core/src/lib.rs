//! Integral extension groups between hook Weyl modules of the general linear group.
//!
//! The crate builds the explicit projective resolution `P_*(a, b)` of the hook Weyl
//! module `Δ(a, 1^b)`, the integer matrices of the induced differentials on weight
//! spaces of a target module, and reads off `Ext^i` as the torsion of their cokernels.
//!
//! Modules, bottom-up:
//!
//! - [`combinatorics`]: binomials, the gcd/lcm invariants `d_k`, `r_k`, `l_k`, and the
//!   compositions indexing resolution summands.
//! - [`weyl_modules`]: weight-space bases of `D_s ⊗ ∧^t` and of hook Weyl modules,
//!   straightening, and the maps `θ`, `π₀`, `i`.
//! - [`resolution`]: Hom-space bases and differential matrices `e^{(i)}(a, b, M)`.
//! - [`zlinalg`]: exact integer linear algebra (Smith normal form and friends).
//! - [`ext_engine`]: Ext groups, explicit generators and relations, induced maps and
//!   modular dimensions.

pub mod combinatorics;
pub mod error;
pub mod ext_engine;
pub mod resolution;
pub mod weyl_modules;
pub mod zlinalg;

/// Library version, part of the key of persisted results.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use combinatorics::{HookShape, Weight};
pub use error::{HookError, Result};
pub use ext_engine::{ext_group, ExtResult};
pub use resolution::{differential_matrix, Target};
pub use zlinalg::{AbelianGroupInvariants, IntMatrix, SparseMatrix};

/// Outcome of a structural or closed-form check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail { claim: String, detail: String },
}

impl Verdict {
    pub fn fail(claim: impl Into<String>, detail: impl Into<String>) -> Self {
        Verdict::Fail { claim: claim.into(), detail: detail.into() }
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    /// Keeps the first failure.
    pub fn and(self, other: impl FnOnce() -> Verdict) -> Verdict {
        match self {
            Verdict::Pass => other(),
            fail => fail,
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Pass => write!(f, "pass"),
            Verdict::Fail { claim, detail } => write!(f, "FAIL [{claim}]: {detail}"),
        }
    }
}
