//! Exact arithmetic for quaternion algebras over `Q` with orthogonal
//! involutions, their `‡`-orders, and the groups `SL‡(2, O)`.
//!
//! ```
//! use qvahlen::quaternion::QuaternionAlgebra;
//! use qvahlen::scalars::rat;
//!
//! let h = QuaternionAlgebra::new(rat(-1), rat(-23)).unwrap();
//! assert_eq!(h.discriminant().unwrap(), 23.into());
//! ```

pub mod arith;
pub mod error;
pub mod groups;
pub mod hilbert;
pub mod involution;
pub mod json;
pub mod lattice;
pub mod linalg;
pub mod order;
pub mod quaternion;
pub mod scalars;
pub mod scan;
pub mod vahlen;

pub use error::{Error, Result};
pub use involution::Involution;
pub use lattice::IntegerLattice;
pub use order::OrderLattice;
pub use quaternion::{Quaternion, QuaternionAlgebra};
pub use scalars::{QuadExt, Rational};
pub use vahlen::{Mat2, VahlenMatrix};

// The guide's snippets run as doc-tests so the book cannot drift from the API.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/scalars-and-lattices.md")]
    mod scalars_and_lattices {}
    #[doc = include_str!("../../../book/src/algebras-and-involutions.md")]
    mod algebras_and_involutions {}
    #[doc = include_str!("../../../book/src/orders.md")]
    mod orders {}
    #[doc = include_str!("../../../book/src/vahlen-group.md")]
    mod vahlen_group {}
    #[doc = include_str!("../../../book/src/arithmetic-groups.md")]
    mod arithmetic_groups {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
