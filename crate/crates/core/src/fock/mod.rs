//! Fermionic Fock-space model: translation operators, group elements acting on the vacuum,
//! tau functions as vacuum matrix elements, and correlation functions of fermion fields.

pub mod birkhoff;
pub mod correlation;
pub mod identities;
pub mod laurent;
pub mod state;

pub use correlation::{correlator, Field};
pub use laurent::{expand_in_box, Factor, LaurentPoly};
pub use state::{FockSpace, FockVector, Sign, WedgeState};
