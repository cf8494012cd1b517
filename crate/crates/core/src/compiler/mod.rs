//! Lowering of Floquet layers to nearest-neighbour rotations and to the
//! iSWAP native gate set.

pub mod equivalence;
pub mod gadgets;
pub mod native;

pub use equivalence::{dense_unitary, verify_equivalence, GateList, UnitaryProgram};
pub use gadgets::{
    decompose, decompose_along_path, decompose_i1, decompose_i2, decompose_i3, lower_ccnot_local,
    lower_program_local, GadgetSequence, Role,
};
pub use native::{lower_program_to_iswap, lower_rotation, lower_to_iswap, Axis, NativeCircuit, NativeGate};
