//! Monte Carlo harness for the normal location-scale design, closed-form
//! contour grids and a sampler of the π limit law.

mod calibration;
mod cells;
mod contour;
mod limit_law;

pub use calibration::{calibrated_mean, normal_index};
pub use cells::{
    reference_design, replication_samples, run_cell, run_table, CellOutcome, SimulationCell, TableReport, TableRow,
    DESIGN_LEVELS, GAMMA_DESIGN, PI_DESIGN,
};
pub use contour::{contour_grid, AxisRange, ContourGrid};
pub use limit_law::{limit_law_sample, ContactSet, MIN_GRID};
