//! Generator discovery, invariant systems, and recipe replay.

pub mod discover;
pub mod eval;
pub mod expr;
pub mod invariants;
pub mod points;
pub mod recipe;
pub mod table;

pub use eval::{run_recipe, Evaluator, RecipeEntry};
pub use expr::ConstructionExpr;
pub use recipe::Recipe;
