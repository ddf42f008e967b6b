// SPDX-License-Identifier: MIT OR Apache-2.0

pub mod baselines;
pub mod cli;
pub mod data;
pub mod detection;
pub mod error;
pub mod harness;
pub mod io;
pub mod learners;
pub mod linalg;
pub mod model;
pub mod risk;
pub mod synth;
