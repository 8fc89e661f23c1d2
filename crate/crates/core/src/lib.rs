//! Exact symbolic toolkit for finite type invariants of real hypersurfaces in
//! `C^n`: contact orders, commutator and Levi-form types, frame normalization,
//! weighted truncation, plurisubharmonicity tests and a tangency solver.

pub mod coeff;
pub mod fixtures;
pub mod grammar;
pub mod invariants;
pub mod linalg;
pub mod normalize;
pub mod poly;
pub mod psh;
pub mod tangency;
pub mod vfield;

pub use coeff::GaussianRational;
pub use grammar::{parse_poly, ParseError};
pub use poly::{Monomial, Order, Poly, PolyError, Var, WeightSystem};
pub use vfield::{Hypersurface, VectorField, VfieldError};
pub use normalize::{Frame, NormalizationCertificate, NormalizeError};
pub use invariants::{TypeReport, TypeValue};
