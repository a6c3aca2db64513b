#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod data;
pub mod error;
pub mod eval;
pub mod geometry;
pub mod keypoint;
pub mod keypoints;
pub mod nn;
pub mod pipeline;
pub mod svm;

pub use error::{Error, Result};
