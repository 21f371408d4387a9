//! Brute-force references: finite truncations of both operators with a
//! bisection eigensolver, and direct summation with certified tails.

mod eigen;
mod sums;
mod tridiag;

pub use eigen::{eigen_tridiag, eigen_tridiag_seeded, EigenDecomposition, DEFAULT_SEED};
pub use sums::{observed_tail_sum, tail_bounded_sum, SumRange, TailSum};
pub use tridiag::{truncate_a, truncate_b, TridiagonalMatrix};

