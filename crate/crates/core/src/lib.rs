//! Exact computations with Loday-type algebras viewed as multiplications
//! on non-symmetric operads.

pub mod algebra;
pub mod cochain;
pub mod cohomology;
pub mod deformation;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod linalg;
pub mod morphism;
pub mod operad;
pub mod rational;
pub mod shapes;
pub mod twisted;

pub use error::{Error, Result};
pub use linalg::QMatrix;
pub use rational::Rational;
pub use shapes::{Family, FormalShapeSum, Shape};
pub use cochain::{Cochain, Element, MCochain, Witness};
pub use operad::{AxiomReport, BraceResult, Operad, Verdict};
pub use twisted::TwistPair;
pub use algebra::{AlgebraSpec, Bilinear, MorphismSpec, RepresentationSpec, RotaBaxterSpec};
pub use cohomology::{CohomologyDims, ExtensionSpec};
pub use deformation::{Degree0Series, Extension, FormalAutomorphism, TruncatedDeformation};
pub use morphism::{MorphismCochain, MorphismDeformation};
