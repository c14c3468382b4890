//! Rounded-polygon vector graphics toolkit.
//!
//! Converts SVG paths to and from a compact rounded-polygon representation
//! (polygon vertices carrying a corner roundness that inscribes a tangent
//! circular arc), simulates a vectorization-based degradation pipeline for
//! training-data generation, and recovers colors, z-order, and strokes for
//! bare geometry against a source raster.
//!
//! The processing stages, in pipeline order:
//!
//! - [`svg`]: parse an SVG subset into absolute path commands
//! - [`path`]: normalize into the 128-unit frame and sample equidistantly
//! - [`linearc`]: fit G1 chains of lines and circular arcs
//! - [`rounded`]: the (x, y, d) triple representation and its token text
//! - [`raster`]: scanline rendering, masks, and image metrics
//! - [`degrade`]: downscale / blur / re-vectorize degradation
//! - [`stylize`]: color voting, z-order search, stroke detection
//! - [`pipeline`], [`config`]: glue and tunables

pub mod color;
pub mod config;
pub mod degrade;
pub mod geom;
pub mod linearc;
pub mod path;
pub mod pipeline;
pub mod raster;
pub mod rounded;
pub mod stylize;
pub mod svg;
