//! Binary symplectic polar spaces labelled by N-qubit Pauli observables, the
//! two embeddings of the split Cayley hexagon of order two in W(5, 2), and a
//! GF(2) decision procedure for observable-based Kochen-Specker proofs.
//!
//! ```
//! use polarctx_core::{context, PolarSpace};
//!
//! let doily = PolarSpace::build(2).unwrap();
//! let all: Vec<u32> = (0..doily.lines().len() as u32).collect();
//! let config = context::lines_configuration(&doily, &all).unwrap();
//! assert!(context::is_contextual(&config).contextual);
//! ```

pub mod context;
pub mod error;
pub mod gf2;
pub mod hexagon;
pub mod pauli;
pub mod polar;

pub use context::{Configuration, ConfigurationJson, ContextualityReport};
pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVector, Solution};
pub use hexagon::{Embedding, HexagonCopy, OrbitDatabase, QuadricPoint};
pub use pauli::{context_sign, PauliObservable, Sign};
pub use polar::{IsotropicLine, IsotropicPlane, PolarSpace, ProjectivePoint};
