pub mod abgroup;
pub mod cli;
pub mod closed_forms;
pub mod error;
pub mod kquiver;
pub mod linalg;
pub mod omega;
pub mod smith;

pub use abgroup::{FinGenAbGroup, RenderStyle};
pub use error::{Error, Result};
pub use kquiver::{k_groups, InputOptions, KGroupsResult, QuiverInput};
pub use linalg::{IntMatrix, SubsetIndex};
pub use smith::{cokernel, kernel_rank, rank, rank_and_cokernel, smith_normal_form, SmithDecomposition};
