//! Verifier and constructor for graphical small cancellation presentations.
//!
//! The crate covers labelled graphs and their metrics, pieces and the
//! `C'(λ)` condition, Z/2-homology and permutation-induced covers, walls,
//! Dehn reduction and Cayley balls, finite permutation quotients with tower
//! certificates, and an orchestrated inductive construction that emits a
//! recomputable transcript.

pub mod alphabet;
pub mod ball;
pub mod boxspace;
pub mod codec;
pub mod covers;
pub mod error;
pub mod graph;
pub mod group;
pub mod perm;
pub mod pipeline;
pub mod presentation;
pub mod quotients;
pub mod smallcancel;
pub mod walls;

pub use alphabet::{Alphabet, Letter, Word};
pub use ball::{cayley_ball, CayleyBall, Coverage, EmbeddingReport};
pub use covers::{Cover, CoverStage};
pub use error::{GscError, Result};
pub use graph::{Edge, EdgeSpec, Extent, GraphPath, LabelledGraph, ValidationReport, Violation};
pub use group::DehnEngine;
pub use perm::{LetterAction, Perm};
pub use pipeline::{ConstructionState, PipelineConfig, Transcript};
pub use presentation::{GraphicalPresentation, Lambda};
pub use quotients::{FiniteQuotient, QuotientTower, TowerLevel};
