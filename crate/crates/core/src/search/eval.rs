//! Evaluation of constructions, with in-memory and on-disk caching.

use std::path::Path;

use rustc_hash::{FxHashMap, FxHashSet};

use super::expr::ConstructionExpr;
use super::recipe::{Recipe, ResolvedLine};
use crate::covariant::{semitransvectant_with, StOptions};
use crate::error::{Error, Result};
use crate::fraction::TFraction;
use crate::grading::{grading_of, FormDegree, Grading};
use crate::io::{DiskCache, Manifest};

/// Values of named constructions and memoized semitransvectants.
pub struct Evaluator {
    d: FormDegree,
    defs: FxHashMap<String, ConstructionExpr>,
    values: FxHashMap<String, TFraction>,
    memo: FxHashMap<String, TFraction>,
    cache: Option<DiskCache>,
    opts: StOptions,
}

impl Evaluator {
    /// Fast (unchecked) semitransvectants and no disk cache.
    pub fn new(d: FormDegree) -> Self {
        Evaluator {
            d,
            defs: FxHashMap::default(),
            values: FxHashMap::default(),
            memo: FxHashMap::default(),
            cache: None,
            opts: StOptions { check: false },
        }
    }

    pub fn with_cache(mut self, cache: DiskCache) -> Self {
        self.cache = Some(cache);
        self
    }

    /// Forms every semitransvectant sum in full and checks the `x1` cancellation.
    pub fn checked(mut self, check: bool) -> Self {
        self.opts.check = check;
        self
    }

    pub fn form_degree(&self) -> FormDegree {
        self.d
    }

    pub fn value(&self, name: &str) -> Option<&TFraction> {
        self.values.get(name)
    }

    pub fn definition(&self, name: &str) -> Option<&ConstructionExpr> {
        self.defs.get(name)
    }

    /// Registers a named value with the construction that produced it.
    pub fn define(&mut self, name: &str, expr: ConstructionExpr, value: TFraction) {
        self.defs.insert(name.to_string(), expr);
        self.values.insert(name.to_string(), value);
    }

    /// The construction with every name replaced by its definition.
    pub fn expanded(&self, expr: &ConstructionExpr) -> ConstructionExpr {
        expr.expand(&|n| self.defs.get(n).cloned())
    }

    pub fn eval(&mut self, expr: &ConstructionExpr) -> Result<TFraction> {
        match expr {
            ConstructionExpr::T => Ok(TFraction::t()),
            ConstructionExpr::Gen(n) => self.values.get(n).cloned().ok_or_else(|| Error::UnknownName(n.clone())),
            ConstructionExpr::Product(fs) => {
                let mut acc = TFraction::one();
                for (f, e) in fs {
                    acc = acc.mul(&self.eval(f)?.pow(*e));
                }
                Ok(acc)
            }
            ConstructionExpr::St(a, b, r) => {
                let key = self.expanded(expr).to_string();
                if let Some(v) = self.memo.get(&key) {
                    return Ok(v.clone());
                }
                let disk_key = DiskCache::key(&key, self.d);
                if let Some(v) = self.cache.as_ref().and_then(|c| c.get(&disk_key)) {
                    self.memo.insert(key, v.clone());
                    return Ok(v);
                }
                let fa = self.eval(a)?;
                let fb = self.eval(b)?;
                let v = semitransvectant_with(&fa, &fb, *r, self.d, self.opts)?.value;
                if let Some(c) = &self.cache {
                    c.put(&disk_key, &v)?;
                }
                self.memo.insert(key, v.clone());
                Ok(v)
            }
        }
    }
}

/// One evaluated recipe line.
#[derive(Clone, Debug)]
pub struct RecipeEntry {
    pub name: String,
    pub expr: ConstructionExpr,
    pub grading: Grading,
    pub value: TFraction,
}

/// Lines needed to evaluate `target`, in recipe order.
fn closure(lines: &[ResolvedLine], target: &str) -> Result<Vec<ResolvedLine>> {
    let by_name: FxHashMap<&str, &ResolvedLine> = lines.iter().map(|l| (l.name.as_str(), l)).collect();
    if !by_name.contains_key(target) {
        return Err(Error::UnknownName(target.to_string()));
    }
    let mut needed = FxHashSet::default();
    let mut stack = vec![target];
    while let Some(n) = stack.pop() {
        if let Some(l) = by_name.get(n) {
            if needed.insert(n) {
                stack.extend(l.expr.names());
            }
        }
    }
    Ok(lines.iter().filter(|l| needed.contains(l.name.as_str())).cloned().collect())
}

/// Evaluates a recipe, or only what `target` depends on.
///
/// Names already known to `ev` may be referenced without being defined.
pub fn run_recipe(
    script: &str,
    ev: &mut Evaluator,
    target: Option<&str>,
    mut progress: impl FnMut(&RecipeEntry),
) -> Result<Vec<RecipeEntry>> {
    let recipe = Recipe::parse(script)?;
    let d = ev.form_degree();
    let known = ev
        .values
        .iter()
        .map(|(n, v)| grading_of(v, d).map(|g| (n.clone(), (g.degree, g.weight))))
        .collect::<Result<_>>()?;
    let mut lines = recipe.resolve(d, &known)?;
    if let Some(t) = target {
        lines = closure(&lines, t)?;
    }
    let mut out = Vec::with_capacity(lines.len());
    for l in lines {
        let value = ev.eval(&l.expr).map_err(|e| Error::Recipe { line: l.line, msg: format!("{}: {e}", l.name) })?;
        if value.is_zero() {
            return Err(Error::Recipe { line: l.line, msg: format!("{} evaluates to zero", l.name) });
        }
        let grading = Grading::new(l.degree, l.weight, d);
        debug_assert_eq!(grading_of(&value, d)?, grading);
        ev.define(&l.name, l.expr.clone(), value.clone());
        let entry = RecipeEntry { name: l.name, expr: l.expr, grading, value };
        progress(&entry);
        out.push(entry);
    }
    Ok(out)
}

/// Writes every entry under `dir` and returns the manifest.
pub fn persist_entries(entries: &[RecipeEntry], d: FormDegree, dir: &Path) -> Result<Manifest> {
    let mut m = Manifest::new(d);
    for e in entries {
        m.persist(dir, &e.name, &e.value, e.grading, &e.expr.to_string())?;
    }
    m.write(&dir.join("manifest.toml"))?;
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    const D7: FormDegree = FormDegree::SEPTIC;

    #[test]
    fn dv_1_entry() {
        let mut ev = Evaluator::new(D7);
        let out = run_recipe("dv_1 = [t,t]^4", &mut ev, None, |_| {}).unwrap();
        assert_eq!(out[0].value, TFraction::new("3*z2^2 + z4".parse().unwrap(), 2));
        assert_eq!(out[0].value.num().len(), 2);
        assert_eq!(out[0].grading.order, 6);
    }

    #[test]
    fn target_restricts_work() {
        let mut ev = Evaluator::new(D7);
        let script = "dv_1 = [t,t]^4\ndv_2 = [t,t]^6\ntr_1 = [t,dv_1]^4";
        let out = run_recipe(script, &mut ev, Some("tr_1"), |_| {}).unwrap();
        let names: Vec<_> = out.iter().map(|e| e.name.as_str()).collect();
        assert_eq!(names, ["dv_1", "tr_1"]);
    }

    #[test]
    fn zero_result_is_an_error() {
        let mut ev = Evaluator::new(D7);
        assert!(matches!(run_recipe("a = [t,t]^3", &mut ev, None, |_| {}), Err(Error::Recipe { line: 1, .. })));
    }
}
