//! Component-factor existence via the isolated-vertex criterion, adjacency and
//! signless-Laplacian spectral radii, and numerical replay of the spectral
//! sufficient conditions for `{C_{2i+1}, T ∈ T_{k/r}}`-factors.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`], [`graph6`], [`iso`]: immutable bit-row graphs, corpus I/O and
//!   small-order isomorphism.
//! * [`spectra`]: largest eigenvalues of `A(G)` and `Q(G) = D(G) + A(G)` and the
//!   closed-form Hong and Das upper bounds.
//! * [`factor`]: the criterion `r·i(G−S) ≤ k·|S|`, violation certificates, and a
//!   brute-force witness search used as an independent oracle.
//! * [`trees`]: free-tree enumeration and `T_{k/r}` membership.
//! * [`extremal`]: the graphs `K_s ∨ (K_{n−⌊ks/r⌋−s−1} ∪ (⌊ks/r⌋+1)K_1)`, order
//!   thresholds and the bounding quadratics.
//! * [`verify`]: chain replays, separation scans and theorem-instance checks.

pub mod extremal;
pub mod factor;
pub mod graph;
pub mod graph6;
pub mod iso;
pub mod spectra;
pub mod trees;
pub mod verify;

pub use factor::{Certificate, FamilyParams, FactorWitness, Strategy, Verdict};
pub use graph::{Graph, GraphError, VertexSet};
pub use spectra::{Method, SpectralEstimate};
