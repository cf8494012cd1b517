pub mod error;
pub mod pauli;
pub mod statevector;
pub mod models;
pub mod disorder;
pub mod compiler;
pub mod oracle;
pub mod observables;
pub mod harness;
