//! File formats, stereographic projection and the worked examples behind the
//! `desitter` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod error;
pub mod examples;
pub mod export;
pub mod projection;

pub use error::{CliError, Result};
pub use examples::{run_example, Check, ExampleId, ExampleOptions, ExampleReport};
pub use export::{export_curve, read_csv, read_json, write_csv, write_json, CurveRecord, Format, Meta};
pub use projection::ProjectionSpec;
