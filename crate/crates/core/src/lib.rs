//! Delaunay triangulations of generalized Bolza surfaces.
//!
//! The geometry lives in the Poincaré disk. Surface points are stored by
//! their canonical representative in the half-open fundamental polygon and
//! faces carry the group translations that place each corner.

pub mod arith;
pub mod bench;
pub mod delaunay;
pub mod dummy;
pub mod gen;
pub mod group;
pub mod io;
pub mod kernel;
pub mod oracle;
pub mod planar;
pub mod surface;
pub mod svg;

pub use arith::{BigInterval, Exact, F64Interval, Mode, Real, Ring, Sign};
pub use delaunay::{Triangulation, VertexId};
pub use dummy::{DummySet, Provenance};
pub use group::{ElemId, Group, Word};
pub use kernel::{Cx, Moebius};
pub use surface::{Domain, ExactPoint, SurfacePoint};

/// Disk point with double coordinates.
pub type Point64 = Cx<f64>;
/// Disk point with multiple-precision interval coordinates.
pub type PointBig = Cx<BigInterval>;
/// Möbius transformation with double entries.
pub type Moebius64 = Moebius<f64>;
/// Möbius transformation with certified f64 interval entries.
pub type MoebiusFi = Moebius<F64Interval>;
/// Möbius transformation with multiple-precision interval entries.
pub type MoebiusBig = Moebius<BigInterval>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("sign undecided at the {bits}-bit precision cap")]
    PrecisionExhausted { bits: u32 },
    #[error("points are not in counterclockwise order")]
    NotCounterClockwise,
    #[error("points are collinear")]
    Collinear,
    #[error("circumdisk leaves the unit disk")]
    NotInsideDisk,
    #[error("transformation is not hyperbolic")]
    NotHyperbolic,
    #[error("geodesic endpoints coincide")]
    DegenerateEqualPoints,
    #[error("point set lacks the Weierstrass points")]
    MissingWeierstrass,
    #[error("dummy set does not satisfy the validity condition")]
    InvalidDummySet,
    #[error("faces are not adjacent")]
    NotAdjacent,
    #[error("point location walk did not terminate")]
    WalkStuck,
    #[error("cocircular configuration")]
    Cocircular,
    #[error("point is already a vertex")]
    DuplicatePoint,
    #[error("input too large: {0} points (cap {1})")]
    TooLarge(usize, usize),
    #[error("vertex sets differ")]
    VertexSetMismatch,
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse: {0}")]
    Parse(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl From<arith::PrecisionExhausted> for Error {
    fn from(e: arith::PrecisionExhausted) -> Self {
        Error::PrecisionExhausted { bits: e.bits }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
