#![allow(dead_code)]

use std::sync::OnceLock;

use septimic::search::eval::{run_recipe, Evaluator, RecipeEntry};
use septimic::search::expr::ConstructionExpr;
use septimic::{FormDegree, TFraction};

pub const D7: FormDegree = FormDegree::SEPTIC;
pub const RECIPE: &str = include_str!("../../recipes/septic.recipe");

pub fn frac(num: &str, s: u32) -> TFraction {
    TFraction::new(num.parse().unwrap(), s)
}

/// Every entry of the bundled septic recipe, evaluated once per test binary.
pub fn recipe_entries() -> &'static [RecipeEntry] {
    static CELL: OnceLock<Vec<RecipeEntry>> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut ev = Evaluator::new(D7);
        run_recipe(RECIPE, &mut ev, None, |_| {}).expect("recipe evaluates")
    })
}

pub fn recipe_value(name: &str) -> &'static TFraction {
    &recipe_entries().iter().find(|e| e.name == name).unwrap_or_else(|| panic!("{name}")).value
}

/// The recipe's named invariants `p_*` in file order.
pub fn recipe_invariants() -> Vec<(String, ConstructionExpr, TFraction)> {
    recipe_entries()
        .iter()
        .filter(|e| e.name.starts_with("p_"))
        .map(|e| (e.name.clone(), e.expr.clone(), e.value.clone()))
        .collect()
}
