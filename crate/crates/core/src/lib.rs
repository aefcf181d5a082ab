//! Exact multiresolution analysis, wavelet packets and wavelet frame packets
//! on the local field `K = F_q((t))`.
//!
//! Everything that can be exact is exact: residue-field and Laurent-series
//! arithmetic, character values, Haar integrals, Fourier transforms of
//! step functions, filter-bank symbols and the matrices built from them.
//! Floating point only enters when eigenvalues are needed for frame bounds.
//!
//! ```
//! use localwave::{LocalField, StepFn};
//!
//! let field = LocalField::preset("q3").unwrap();
//! let ring = StepFn::indicator_ideal(&field, 0); // 1 on the ring of integers
//! assert!(ring.fourier() == ring);
//! assert!(ring.norm_sq().is_one());
//! ```
//!
//! The modules follow the mathematics bottom-up:
//!
//! * [`localfield`]: `GF(q)`, `K`, the translations `u(n)` and the
//!   character `χ`;
//! * [`cyclotomic`]: the exact value field;
//! * [`stepspace`]: locally constant compactly supported functions, Haar
//!   integration, Fourier analysis;
//! * [`packets`]: filter banks, the splitting lemma and wavelet packets;
//! * [`frames`]: polyphase matrices, frame bounds and frame packets.

pub mod cyclotomic;
pub mod error;
pub mod frames;
pub mod localfield;
pub mod matrix;
pub mod packets;
pub mod random;
pub mod stepspace;

pub use cyclotomic::{CycField, CycNum, Rational};
pub use error::{Error, Result};
pub use frames::{FrameFilterSet, FramePacketSystem, GeneratorSet};
pub use localfield::{FieldParams, GfElem, KElem, LocalField};
pub use matrix::CycMatrix;
pub use packets::{FilterBank, PacketSystem};
pub use stepspace::{StepFn, Window};

// The guide's code listings run as doc-tests; one module per chapter so a
// failure points at its source file.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/local-field.md")]
    mod local_field {}
    #[doc = include_str!("../../../book/src/exact-values.md")]
    mod exact_values {}
    #[doc = include_str!("../../../book/src/step-functions.md")]
    mod step_functions {}
    #[doc = include_str!("../../../book/src/splitting-and-packets.md")]
    mod splitting_and_packets {}
    #[doc = include_str!("../../../book/src/frame-packets.md")]
    mod frame_packets {}
}
