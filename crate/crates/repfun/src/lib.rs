//! Exact-arithmetic representation theory of finite groupoids.
//!
//! The library builds, for a finite groupoid over an exact field (arbitrary-
//! precision rationals or a prime field), its category of finite-dimensional
//! representations, the commutative Hopf algebroid of representative functions
//! on its arrows (both as a concrete function algebra and as a coend
//! presentation), the character groupoid of a Hopf algebroid, and the pair of
//! comparison maps between the two worlds — and it machine-checks every axiom
//! and identity along the way instead of assuming them.
//!
//! Conventions used throughout:
//!
//! * `compose(g, f)` means "g after f" and is defined iff `src(g) == tgt(f)`;
//!   representations therefore satisfy `m(compose(g, f)) = m(g) * m(f)` as
//!   matrices acting on column vectors.
//! * Representations have one common rank; fibers are identified with `k^d`,
//!   so a representation is just the family of invertible matrices `m(g)`.
//! * Global sections of the trivialized bundle of a rank-`d` representation
//!   form a free module of rank `d` over the split base algebra `k^objects`;
//!   their `k`-basis is indexed object-major: `(x, i) -> x * d + i`.

pub mod coend;
pub mod duality;
pub mod field;
pub mod groupoid;
pub mod hopf;
pub mod io;
pub mod matrix;
mod par;
pub mod rep;
pub mod repfun;
pub mod report;

pub use field::{FieldError, FieldSpec, Scalar};
pub use matrix::{LinalgError, Matrix};
pub use par::parallel_enabled;
