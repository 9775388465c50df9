//! Brute-force checks of the closed form that never evaluate it: Monte Carlo
//! sampling of the sum of two uniform points on the circles, and discrete
//! convolution of Gaussian-mollified rings on a grid.

pub mod bessel;
mod grid;
mod monte_carlo;
mod rng;

pub use grid::{
    build_mollified_ring, grid_conv, grid_conv_check, mollified_profile, ConvGrid, GridConvReport,
    GridSpec, MollifiedGrid, ProfileSample,
};
pub use monte_carlo::{
    mc_conv_histogram, mc_conv_histogram_in, mc_radiality_check, BinRange, RadialHistogram,
    SectorCounts,
};
pub use rng::{chunk_rng, CHUNK_SIZE};
