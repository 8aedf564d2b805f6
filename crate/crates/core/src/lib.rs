//! Additive real topological K-theory of toric manifolds from
//! combinatorial input.
//!
//! The library computes, for a simplicial complex dual to a simple
//! polytope boundary together with a characteristic matrix:
//!
//! * the four Witt groups, by summing reduced GF(2) cohomology of the
//!   full subcomplexes indexed by the row space of the mod-2
//!   characteristic matrix,
//! * the full eight-term KO table (free ranks plus 2-torsion counts),
//! * the S-type / M-type classification, and
//! * an independent face-ring oracle (Steenrod squares and Margolis
//!   homology on the quotient presentation of the cohomology ring) that
//!   cross-checks the subcomplex computation degree by degree.

pub mod charmat;
pub mod cohomology;
pub mod error;
pub mod f2;
pub mod face_ring;
pub mod instance;
pub mod ko;
pub mod report;
pub mod simplicial;

pub use charmat::{CharMatrix, ToricInstance, ValidationMode, ValidationReport};
pub use cohomology::{CochainComplex, GradedDims};
pub use error::{Error, Result};
pub use f2::{F2Matrix, F2Vector, RowSpace};
pub use face_ring::{A1Decomposition, GeneratorDegree, HalvingReport, MonomialBasis, QuotientPresentation};
pub use instance::InstanceFile;
pub use ko::{Classification, KOTable, WittGroups};
pub use report::Report;
pub use simplicial::{FVector, Relabeling, SimplicialComplex};
