//! Configuration files, file exports and run reports.

mod config;
mod export;
mod report;

pub use config::{
    default_length, load_config, parse_config, ConfigError, ExtentBlock, GeometryBlock, JobConfig, LayerBlock,
    MechanicsBlock, Mode, OutputBlock, PrestretchBlock, StressBlock, SweepBlock, DEFAULT_ASPECT, DEFAULT_RESIDUAL_TOL,
    DEFAULT_SAMPLES,
};
pub use export::{export_mesh, format_g9, write_obj, write_ply, ExportError, Format, PhaseCsvWriter};
pub use report::{Residuals, RunReport};
