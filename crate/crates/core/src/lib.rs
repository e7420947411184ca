pub mod autsearch;
pub mod bitset;
pub mod budget;
pub mod cli;
pub mod error;
pub mod field;
pub mod matrix;
pub mod perm;
pub mod pgroup;
pub mod poly;
pub mod relgraph;
pub mod report;
pub mod scheme;
pub mod subspace;

pub use budget::Budget;
pub use error::{Error, Result};
pub use field::{Field, FieldElement};
pub use matrix::Matrix;
pub use scheme::{ClassIndex, ClassMatrix};
pub use subspace::{enumerate_type_m0, AmbientParams, Subspace, TypeM0Set};
