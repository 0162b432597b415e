//! Security laboratory for quantum dense key distribution.
//!
//! Alice keeps one photon of a singlet and encodes a bit on the other with the
//! identity or the generalized phase gate `Z_B`; Bob either runs the
//! Anticorrelation Check on it or adds his own bit the same way and returns it;
//! Alice's partial Bell analysis then reveals the XOR of the two bits. Eve
//! couples each travelling photon to a private probe before and after Bob.
//!
//! * [`qmath`]: complex matrices, Jacobi eigensolver, entropies.
//! * [`fockspace`]: multi-photon polarization basis, the protocol's states, gates, projectors.
//! * [`attack`]: Eve's probe unitaries, their decomposition, exact ensemble entropies.
//! * [`bounds`]: closed-form Holevo bounds, their maxima over Eve's hidden parameters,
//!   the key-distillation condition.
//! * [`protocol`]: seeded Monte Carlo sessions in the three communication modes.

pub mod attack;
pub mod bounds;
pub mod error;
pub mod fockspace;
pub mod protocol;
pub mod qmath;

pub use error::{Error, Result};
