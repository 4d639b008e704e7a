//! Index theory of periodic Reeb orbits with exact arithmetic.
//!
//! * [`sympath`]: Conley-Zehnder and Robbin-Salamon indices of symplectic
//!   paths, iterates and inverses.
//! * [`bott`]: Bott functions, splitting numbers and closed-form iteration.
//! * [`cijt`]: common index jump search and certificate verification.
//! * [`chomology`]: contact homology rank tables, Euler characteristics and
//!   the catalog audit.
//! * [`models`]: ellipsoid fixtures, path blocks and standard profiles.
//! * [`json`]: stable JSON encodings of all of the above.

pub mod bott;
pub mod chomology;
pub mod cijt;
pub mod error;
pub mod json;
pub mod linalg;
pub mod models;
pub mod number;
pub mod sympath;

pub use bott::{
    bott_value, infer_bott, iterated_index, iterated_nullity, mean_index, BottData, BottJump,
    InferOptions, JumpAtOne, LocalHomology,
};
pub use chomology::{
    audit, chi0, convexity_check, local_chi, mean_chi, morse_check, prequant_rank, resonance_check,
    sdm_candidate, AuditOptions, AuditReport, Mode, Orbit, OrbitCatalog, PrequantProfile, Verdict,
};
pub use cijt::{find_jump, verify_certificate, CijtCertificate, JumpOptions};
pub use error::{Error, Result};
pub use models::{catalog_profile, ellipsoid_catalog, EllipsoidSpec};
pub use number::{rat, Interval, Rational, Real};
pub use sympath::{
    cz_index, cz_lower, cz_upper, index_triple, invert_path, iterate_path, rs_index, Block,
    Generator, IndexTriple, SymplecticPath, Tolerances,
};
