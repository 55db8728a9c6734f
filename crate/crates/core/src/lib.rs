//! Deutsch-Jozsa on the [[4,2,2]] error-detecting code.
//!
//! Exact state-vector simulation of the bare, encoded and native-gate
//! circuits, exhaustive single-fault classification, and seeded noisy
//! sampling with parity post-selection.
//!
//! ```
//! use dj422::circuits::program;
//! use dj422::ftverify::verify_fault_tolerance;
//!
//! let p = program("encoded-dj:fx").unwrap();
//! let report = verify_fault_tolerance(&p, false).unwrap();
//! assert!(report.fault_tolerant);
//! ```

pub mod circuits;
pub mod code;
pub mod error;
pub mod experiment;
pub mod export;
pub mod ftverify;
pub mod noise;
pub mod sim;

pub use error::{Error, Result};
