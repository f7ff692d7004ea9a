//! Geodesic mappings of n-dimensional surfaces of revolution.
//!
//! * [`profile`]: meridian profiles, their induced warped metrics, topology
//!   and pole checks, tabulated input.
//! * [`mapping`]: the `(p, q)` family of geodesically equivalent metrics,
//!   Christoffel symbols and the Levi-Civita residual check.
//! * [`geodesics`]: geodesic integration, the Clairaut invariant and the
//!   numerical test that a metric and its image share geodesics.
//! * [`ellipsoid`]: the rotational ellipsoid, its deformation family, the
//!   elliptic-integral meridian and the associated metrics.
//! * [`cli`]: the `revmap` command-line front end.
//!
//! ```
//! use revmap::ellipsoid::ellipsoid_profile;
//! use revmap::geodesics::{random_initial_states, verify_geodesic_equivalence};
//! use revmap::mapping::MappingParams;
//! use revmap::profile::metric_from_profile;
//!
//! let g = metric_from_profile(&ellipsoid_profile(2.0)?, 1)?;
//! let mp = MappingParams::new(1.0, 0.3)?;
//! for init in random_initial_states(&g, 5, 7) {
//!     let report = verify_geodesic_equivalence(&g, mp, init, 5.0, 1e-10)?;
//!     assert!(report.passed);
//! }
//! # Ok::<(), revmap::GeomError>(())
//! ```

// `!(x > 0.0)` is used deliberately so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod ellipsoid;
pub mod elliptic;
pub mod error;
pub mod geodesics;
pub mod interp;
pub mod mapping;
pub mod ode;
pub mod par;
pub mod profile;
pub mod quadrature;

pub use error::{GeomError, Result};
pub use geodesics::{GeodesicState, GeodesicTrace};
pub use mapping::MappingParams;
pub use profile::{EquidistantMetric, RevolutionProfile};
