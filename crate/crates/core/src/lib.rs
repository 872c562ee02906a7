//! Construction, verification, and enumeration of finite solutions of the
//! parametric set-theoretic Yang-Baxter equation: p-shelves and p-racks,
//! skew-brace-derived solutions, admissible Drinfel'd twists, and exact
//! integer verification of the associated algebra relations, coproducts,
//! and twists in finite-dimensional representations.

pub mod braces;
pub mod carrier;
pub mod coalgebra;
pub mod error;
pub mod files;
pub mod report;
pub mod shelves;
pub mod solutions;
pub mod tensor;

pub use carrier::{Carrier, EndoMap, ParamFamily, ParamSubset};
pub use error::{Budget, Counterexample, Error, Result, Verdict};
pub use shelves::{PRack, PShelf};
pub use solutions::{ParamYBMap, SolutionClass, TwistMap, YbeMethod};
