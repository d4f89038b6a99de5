//! Ternary cyclic codes from trace evaluations over GF(3ⁿ), their exact
//! weight distributions, the Steiner systems S(2, 4, (3ⁿ − 1)/2) carried by
//! their low-weight dual codewords, and GF(3) rank comparisons against the
//! classical point-line designs of PG(n − 1, 3).
//!
//! ```
//! use ternary_steiner::{code, gf::Field};
//!
//! let field = Field::new(5).unwrap();
//! let c = code::build_welch_code(&field).unwrap();
//! assert_eq!((c.length(), c.dimension()), (121, 10));
//! ```

pub mod code;
pub mod design;
pub mod error;
pub mod gf;
pub mod oracles;
pub mod pg;

pub use error::{Error, Result};
