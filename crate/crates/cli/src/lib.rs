//! Experiment harness: configs, recipes, and result files.

pub mod config;
pub mod recipe;
pub mod record;

pub use config::{ExperimentConfig, Family, Recipe, Strategy};
pub use recipe::{execute, run_recipe, RecipeOutput};
pub use record::{graph_hash, ResultRecord, RESULTS_HEADER};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/experiments.md")]
mod book_experiments {}
