pub mod error;
pub mod hankel;
pub mod linalg;
pub mod moments;
pub mod mp;
pub mod oracle;
pub mod painleve;
pub mod poly;
pub mod precision;
pub mod quadrature;
pub mod report;
pub mod scalar;
pub mod semiclassical;
pub mod series;
pub mod special;
pub mod weight;

pub use error::{Error, Result};
pub use mp::{Mp, PrecisionGuard};
pub use precision::PrecisionCtx;
pub use weight::WeightParams;

pub use num_rational::BigRational;

pub type MomentTableF64 = moments::MomentTable<f64>;
pub type MomentTableMp = moments::MomentTable<Mp>;
pub type MomentTableExact = moments::MomentTable<BigRational>;
pub type RecurrenceTableF64 = hankel::RecurrenceTable<f64>;
pub type RecurrenceTableMp = hankel::RecurrenceTable<Mp>;
pub type RecurrenceTableExact = hankel::RecurrenceTable<BigRational>;
pub type TrajectoryF64 = painleve::Trajectory<f64>;
pub type TrajectoryMp = painleve::Trajectory<Mp>;
pub type HamiltonPointMp = painleve::HamiltonPoint<Mp>;
