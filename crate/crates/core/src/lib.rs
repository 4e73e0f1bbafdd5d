//! Relativistic quantum information toolkit.
//!
//! Implements the machinery needed to study how Lorentz reference-frame
//! changes act on encoded quantum information, and the encodings that are
//! invariant under them:
//!
//! - [`lorentz`] — proper orthochronous Lorentz elements in 4×4 / SL(2,ℂ)
//!   double-cover form, standard boosts, and Wigner rotations.
//! - [`wavepacket`] — Gaussian momentum wavepackets, distinguishability
//!   overlaps, and lattice states of several localized particles.
//! - [`channels`] — the decoherence superoperators induced by boosts,
//!   boost mixtures, and unknown-frame twirls (exact and Monte Carlo).
//! - [`schur`] — Clebsch–Gordan coupling, the total-spin block
//!   decomposition of `(ℂ²)^⊗N`, and noiseless-subsystem codecs.
//! - [`photon`] — the massless little group, helicity phases, and the
//!   two-photon zero-helicity code.
//! - [`qmath`] — dense complex linear algebra, states, channels, seeded
//!   RNG streams, and the JSON wire format shared by the CLI.
//!
//! All numerics are double precision; every operation is a pure function
//! over immutable values and safe to share across threads.

// Negated float comparisons like `!(x > 0.0)` are deliberate throughout:
// they reject NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channels;
mod error;
pub mod lorentz;
pub mod photon;
pub mod qmath;
pub mod schur;
pub mod wavepacket;

pub use error::{Error, Result};
