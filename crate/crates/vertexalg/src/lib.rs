//! Exact symbolic workbench for free-field vertex superalgebras.
//!
//! The crate models the βγ–bc system Ω_N (and its purely even part 𝒪_N)
//! over polynomial and localized charts, with exact rational arithmetic
//! throughout. On top of the mode-level engine it provides executable
//! verifiers for the vertex-algebra axioms, the N=2 structure fields and
//! their cohomology, prevertex data extraction with its cocycle identities,
//! chart geometry on projective space (transition operators, global
//! sections, Čech–BRST cohomology, characters), and coinvariant correlation
//! functionals on point configurations in CP¹.

pub mod rational;

pub mod basis;
pub mod fock;
pub mod linalg;
pub mod poly;

pub mod field;

pub mod report;

pub mod axioms;
pub mod superconf;

pub mod geometry;
pub mod prevertex;

pub mod correlators;

pub mod literal;

pub use fock::{Bigrade, Chart, FockError, GeneratorMode, Monomial, Species, State};
pub use rational::Q;
