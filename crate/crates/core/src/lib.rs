//! Frames and equiangular systems over finite fields, with exact arithmetic.

pub mod cli;
pub mod combinatorics;
pub mod equivalence;
pub mod error;
pub mod frames;
pub mod geometry;
pub mod gf;
pub mod json;
pub mod linalg;
pub mod samples;
pub mod search;

pub use equivalence::{gauge_of, m_product, switching_equiv, unitary_equiv, Obstruction, Strategy, SwitchingCertificate};
pub use error::{Error, Result};
pub use frames::{gerzon_check, gram_realize, naimark_of, EquiangularParams, EtfReport, FrameSystem, TightnessReport};
pub use geometry::{adjoint_of, discriminant_of, Discriminant, HermitianSpace};
pub use gf::{Case, Elem, Field, Involution, SquareClass};
pub use linalg::Matrix;
