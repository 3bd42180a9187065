//! Simulation and compilation of quantum circuits whose non-Clifford gates
//! sit in a small number of diagonal layers.

pub mod bits;
pub mod circuit;
pub mod compile;
pub mod error;
pub mod estimate;
pub mod exact;
pub mod iqp;
pub mod oracle;
pub mod pathint;
pub mod pauli;
pub mod phase;
pub mod phasepoly;
pub mod random;
pub mod stabilizer;
pub mod verify;

pub use bits::{BitMatrix, BitVec};
pub use error::{Error, Result};
pub use pauli::PauliString;
pub use phase::DyadicPhase;
pub use phasepoly::PhasePolynomial;
