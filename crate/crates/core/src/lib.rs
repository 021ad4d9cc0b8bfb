//! Planar near-field scan processing for millimeter-wave antenna arrays.
//!
//! The chain runs scan → equivalent currents → far field ([`transform`]),
//! then per-port loss de-embedding ([`calibration`]), equal-gain combining
//! and spherical-coverage statistics ([`synthesis`]). [`synthetic`] provides
//! analytic sources and the lab scan presets; [`io`] holds file formats and
//! [`pipeline`] the file-level stages used by the `nf2ff` binary.

pub mod calibration;
pub mod error;
pub mod fields;
pub mod grid;
pub mod io;
pub mod pipeline;
pub mod setup;
pub mod synthesis;
pub mod synthetic;
pub mod transform;

pub use error::{Error, Result};
pub use fields::{
    wavelength, wavenumber, Direction, FarFieldPattern, MaterialConstants, NearFieldScan,
    PolarizationMode, ScanGeometry,
};
pub use grid::{make_spherical_grid, SphericalGrid};
