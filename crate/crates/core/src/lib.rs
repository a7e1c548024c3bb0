//! Finite cyclic actions on closed orientable surfaces: data sets, their
//! compositions into necklaces, hyperbolic polygon models and fat graphs.

pub mod acceptance;
pub mod arith;
pub mod compatibility;
pub mod dataset;
pub mod decompose;
pub mod enumerate;
pub mod fatgraph;
pub mod fixtures;
pub mod hyperbolic;
pub mod necklace;
pub mod svg;

pub use compatibility::{CompatError, CompatSite, CompositionResult};
pub use dataset::{ActionClass, ConePair, DataSet, DataSetError, RawDataSet};
pub use decompose::{decompose, DecomposeError};
pub use enumerate::enumerate;
pub use fatgraph::{FatGraph, FatGraphAut, FatGraphError, InducedSignature};
pub use necklace::{FixDescriptor, LinearChain, Necklace, NecklaceError, Realization};
