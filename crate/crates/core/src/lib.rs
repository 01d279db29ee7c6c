//! Exact and floating-point alpha-permanents, their set-partition
//! expansions, and a checker for permanental inequalities on PSD matrices.

pub mod error;
pub mod expansion;
pub mod hunt;
pub mod inequality;
pub mod io;
pub mod matrix;
pub mod partition;
pub mod permanental;
pub mod psd;
pub mod ring;
pub mod scalar;
pub mod suite;

pub use error::{Error, Result};
pub use io::{matrix_hash, parse_matrix, read_matrix, serialize_matrix, write_matrix, MatrixRecord};
pub use matrix::{BlockSplit, Flags, IndexSet, Matrix};
pub use partition::{enumerate_partitions, enumerate_shape_partitions, SetPartition};
pub use permanental::{Caps, Kernels};
pub use psd::{certify_psd, random_gram, random_psd, GramKind, GramSpec};
pub use scalar::{gen_binomial, Field, Scalar};
