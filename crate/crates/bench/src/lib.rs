//! Experiment runner: scenario presets, parallel sweeps, deterministic CSV
//! output and SVG figures.

pub mod bound_text;
pub mod output;
pub mod plot;
pub mod runner;
pub mod scenario;
