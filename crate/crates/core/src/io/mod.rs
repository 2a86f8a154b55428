//! Reading, writing and generating meshes.

pub mod archive;
pub mod delimited;
pub mod generate;
pub mod pipeline;

pub use archive::{load_archive, save_archive};
pub use generate::{generate_box, generate_box_store, generate_cube};
pub use pipeline::{run_pipeline, PipelineConfig, PipelineFailure, StageReport};
