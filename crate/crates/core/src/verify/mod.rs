//! Independent numerical oracles: a finite-difference Laplace solver for
//! ring modules, finite-difference dilatation measurement, and a discrete
//! min-max dilatation search over triangulated disc maps.

mod dilatation;
mod grid;
mod laplace;
mod mesh;

pub use dilatation::{
    competitor_dilatation_sweep, ellipse_competitor_sweep, measured_dilatation, wirtinger, Competitor,
};
pub use grid::{ComplexField, FieldValue, GridField, RealField};
pub use laplace::{laplace_ring_module, ring_potential, slit_map_oracle, RingDomain, RingPotential, SlitMapOracle};
pub use mesh::{discrete_min_dilatation, DiscreteMinimum, TriangulatedDiscMap, DEFAULT_MESH_REFINEMENT};
