//! The symmetric group, its group algebra, Young's orthogonal form, and the
//! corresponding operators on the n-qudit tensor space.

mod group_algebra;
mod permutation;
pub mod tensor;
pub mod yor;

pub use group_algebra::GroupAlgebraElement;
pub use permutation::Permutation;
pub use tensor::{
    gt_basis_vectors, perm_matrix, projector_diagonal, projector_tensor,
    qutrit_schur_basis_vectors, represent, schur_block, tensor_action, transition_tensor,
    SchurBasisVector, TensorAction,
};
pub use yor::{matrix_unit, sn_data, yor_matrix, IrrepTable, SnData, MAX_GROUP_DEGREE};
