//! Route-based VRPTW formulated as a QUBO and solved with a simulated
//! variational quantum eigensolver under two qubit encodings.

pub mod encodings;
pub mod optimize;
pub mod qubo;
pub mod rng;
pub mod simulator;
pub mod vrptw;
