//! Loop Schur functions, loop power sums and the loop Murnaghan–Nakayama
//! rule, computed exactly at finite truncation, together with the
//! sign-reversing involutions that prove the rule.

pub mod error;
pub mod involutions;
pub mod oracle;
pub mod poly;
pub mod shapes;
pub mod tableaux;
pub mod verify;

pub use error::{Error, Result};
pub use poly::{Degree, Monomial, Polynomial, Variable};
pub use shapes::{BorderStripAddition, Partition};
pub use tableaux::ShiftParams;
