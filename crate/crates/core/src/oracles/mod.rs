// SPDX-License-Identifier: Apache-2.0

//! Brute-force ground truth, independent of the F_2 matrix machinery:
//! class groups of binary quadratic forms, Selmer sets by local
//! solvability, and rational points on `E_n`.

pub mod classgroup;
pub mod points;
pub mod selmer;

pub use classgroup::{class_group, class_group_two_part, h4_oracle, h8_oracle, BQForm, ClassGroupReport};
pub use points::{point_search, CongruentCurve, RationalPoint, Triangle};
pub use selmer::selmer_oracle;
