//! Generators found so far, grouped by degree.

use std::collections::BTreeMap;

use super::expr::ConstructionExpr;
use crate::fraction::TFraction;
use crate::grading::{FormDegree, Grading};

#[derive(Clone, Debug)]
pub struct TableEntry {
    pub name: String,
    pub expr: ConstructionExpr,
    pub value: TFraction,
    pub grading: Grading,
}

/// Irreducible semi-invariants by degree; `t` is the single entry of degree 1.
#[derive(Clone, Debug)]
pub struct GeneratorTable {
    d: FormDegree,
    by_degree: BTreeMap<i64, Vec<TableEntry>>,
}

impl GeneratorTable {
    pub fn new(d: FormDegree) -> Self {
        let t = TableEntry {
            name: "t".into(),
            expr: ConstructionExpr::T,
            value: TFraction::t(),
            grading: Grading::new(1, 0, d),
        };
        GeneratorTable { d, by_degree: BTreeMap::from([(1, vec![t])]) }
    }

    pub fn form_degree(&self) -> FormDegree {
        self.d
    }

    pub fn push(&mut self, e: TableEntry) {
        self.by_degree.entry(e.grading.degree).or_default().push(e);
    }

    pub fn degree(&self, i: i64) -> &[TableEntry] {
        self.by_degree.get(&i).map_or(&[], Vec::as_slice)
    }

    pub fn max_degree(&self) -> i64 {
        self.by_degree.keys().next_back().copied().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = &TableEntry> {
        self.by_degree.values().flatten()
    }

    pub fn get(&self, name: &str) -> Option<&TableEntry> {
        self.entries().find(|e| e.name == name)
    }

    /// Number of generators at each degree.
    pub fn counts(&self) -> BTreeMap<i64, usize> {
        self.by_degree.iter().map(|(&i, v)| (i, v.len())).collect()
    }

    /// Orders at degree `i`, sorted.
    pub fn orders(&self, i: i64) -> Vec<i64> {
        let mut o: Vec<i64> = self.degree(i).iter().map(|e| e.grading.order).collect();
        o.sort_unstable();
        o
    }

    /// The order-0 generators, which are the irreducible invariants.
    pub fn invariants(&self) -> impl Iterator<Item = &TableEntry> {
        self.entries().filter(|e| e.grading.is_invariant())
    }

    /// All products of generators of total degree `i`, as `(factors, grading)`.
    pub fn products(&self, i: i64) -> Vec<(Vec<(usize, u32)>, Grading)> {
        let flat: Vec<&TableEntry> = self.entries().collect();
        let mut out = Vec::new();
        let mut stack = Vec::new();
        self.products_rec(&flat, 0, i, &mut stack, &mut out);
        out.into_iter()
            .map(|fs| {
                let (deg, wt) = fs.iter().fold((0, 0), |(a, b), &(k, e)| {
                    (a + flat[k].grading.degree * e as i64, b + flat[k].grading.weight * e as i64)
                });
                (fs, Grading::new(deg, wt, self.d))
            })
            .collect()
    }

    fn products_rec(
        &self,
        flat: &[&TableEntry],
        start: usize,
        left: i64,
        stack: &mut Vec<(usize, u32)>,
        out: &mut Vec<Vec<(usize, u32)>>,
    ) {
        if left == 0 {
            out.push(stack.clone());
            return;
        }
        for k in start..flat.len() {
            let deg = flat[k].grading.degree;
            for e in 1..=(left / deg) as u32 {
                stack.push((k, e));
                self.products_rec(flat, k + 1, left - deg * e as i64, stack, out);
                stack.pop();
            }
        }
    }

    fn product_expr(&self, fs: &[(usize, u32)]) -> ConstructionExpr {
        let flat: Vec<&TableEntry> = self.entries().collect();
        ConstructionExpr::product(fs.iter().map(|&(k, e)| (flat[k].expr_ref(), e)).collect())
    }

    /// Candidates `[t, w]^r` for products `w` of degree `i`, `1 <= r <= min(d, ord w)`.
    ///
    /// With `prune`, exponents that make `[t, w]^r` reducible for a product of
    /// two or more factors are skipped.
    pub fn candidate_products(&self, i: i64, prune: bool) -> Vec<ConstructionExpr> {
        let flat: Vec<&TableEntry> = self.entries().collect();
        let mut out = Vec::new();
        for (fs, g) in self.products(i) {
            let w = self.product_expr(&fs);
            let genuine = fs.iter().map(|&(_, e)| e).sum::<u32>() > 1;
            let min_factor = fs.iter().map(|&(k, _)| flat[k].grading.order).min().unwrap_or(0);
            let max_factor = fs.iter().map(|&(k, _)| flat[k].grading.order).max().unwrap_or(0);
            let top = g.order.min(self.d.as_i64());
            for r in 1..=top {
                // For w = f g the bracket [t, f g]^r is reducible while
                // r <= min(d, max(ord f, ord g)); with several factors use the
                // split that isolates the lowest order.
                let reducible = genuine && r <= self.d.as_i64().min(max_factor.max(g.order - min_factor));
                if prune && reducible {
                    continue;
                }
                out.push(ConstructionExpr::st(ConstructionExpr::T, w.clone(), r as u32));
            }
        }
        out
    }
}

impl TableEntry {
    /// Reference to the generator by name (or `t`).
    pub fn expr_ref(&self) -> ConstructionExpr {
        match self.expr {
            ConstructionExpr::T => ConstructionExpr::T,
            _ => ConstructionExpr::gen(self.name.clone()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covariant::semitransvectant;

    const D7: FormDegree = FormDegree::SEPTIC;

    fn degree_two_table() -> GeneratorTable {
        let mut table = GeneratorTable::new(D7);
        for (name, r) in [("dv_1", 4), ("dv_2", 6), ("dv_3", 2)] {
            let value = semitransvectant(&TFraction::t(), &TFraction::t(), r, D7).unwrap();
            let grading = crate::grading::grading_of(&value, D7).unwrap();
            table.push(TableEntry {
                name: name.into(),
                expr: ConstructionExpr::st(ConstructionExpr::T, ConstructionExpr::T, r),
                value,
                grading,
            });
        }
        table
    }

    #[test]
    fn degree_one_candidates() {
        let table = GeneratorTable::new(D7);
        let c = table.candidate_products(1, false);
        assert_eq!(c.len(), 7);
        assert_eq!(c[3].to_string(), "[t,t]^4");
    }

    #[test]
    fn degree_two_candidates() {
        let table = degree_two_table();
        assert_eq!(table.candidate_products(2, false).len(), 22);
        let pruned = table.candidate_products(2, true);
        assert_eq!(pruned.len(), 15);
        // Together with the four degree-3 products t^3, t dv_k.
        assert_eq!(pruned.len() + table.products(3).len(), 19);
    }
}
