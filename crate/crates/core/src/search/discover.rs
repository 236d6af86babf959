//! Degree-by-degree discovery of irreducible semi-invariants.
//!
//! Every semi-invariant of degree `n` and weight `w` is a combination of
//! products of lower-degree generators and of brackets `[t, b]^r` with `b`
//! of degree `n - 1`. Both families are screened by their values at random
//! points (with their `D`-ladders carried along by the Leibniz rule), so no
//! product is ever expanded symbolically. Each slice is checked against the
//! Cayley-Sylvester count before it is accepted, and only the selected new
//! generators are computed exactly.

use std::collections::BTreeMap;

use rayon::prelude::*;
use rustc_hash::FxHashSet;

use super::expr::ConstructionExpr;
use super::points::{LadderValues, PointSet};
use super::table::{GeneratorTable, TableEntry};
use crate::covariant::{lemma_weights, semitransvectant_with, StOptions};
use crate::dimension::dim_semi_invariants;
use crate::error::{Error, Result};
use crate::fraction::TFraction;
use crate::grading::{grading_of, FormDegree, Grading};
use crate::linalg::EchelonBasis;
use crate::scalar::Field;
use crate::Fp62;

/// Extra points beyond the slice dimension used for every rank test.
const MARGIN: usize = 16;

#[derive(Clone, Debug)]
pub struct DiscoveryOptions {
    pub max_degree: u32,
    pub seed: u64,
    /// Number of evaluation points; by default the largest slice dimension plus a margin.
    pub points: Option<usize>,
}

impl DiscoveryOptions {
    pub fn new(max_degree: u32) -> Self {
        DiscoveryOptions { max_degree, seed: 0x5eed, points: None }
    }
}

/// A product of generators spanning part of a slice, with its ladder values.
#[derive(Clone, Debug)]
pub struct BasisElem {
    /// Generator indices with repetition, sorted.
    pub factors: Vec<usize>,
    pub ladder: LadderValues,
}

/// Generators and a monomial basis of every slice up to the current degree.
pub struct Discovery {
    d: FormDegree,
    table: GeneratorTable,
    points: PointSet,
    /// Ladder values of every generator, in table order.
    gen_ladders: Vec<LadderValues>,
    gen_index: Vec<(String, Grading)>,
    full: BTreeMap<(i64, i64), Vec<BasisElem>>,
    degree: i64,
}

/// `(generator, (degree, weight) of the cofactor slice, cofactor index, factors)`.
type Reducible = (usize, (i64, i64), usize, Vec<usize>);

struct SliceResult {
    w: i64,
    red: Vec<Reducible>,
    /// `(cofactor index in slice (n - 1, w - r), r, values)`.
    new: Vec<(usize, u32, Vec<Fp62>)>,
}

pub fn max_slice_dim(d: FormDegree, max_degree: u32) -> u64 {
    (1..=max_degree)
        .flat_map(|n| (0..=(d.get() * n / 2) as i64).map(move |w| dim_semi_invariants(d.get(), n, w)))
        .max()
        .unwrap_or(1)
}

impl Discovery {
    pub fn new(d: FormDegree, opts: &DiscoveryOptions) -> Result<Self> {
        let n = opts.points.unwrap_or_else(|| max_slice_dim(d, opts.max_degree.max(1)) as usize + 2 * MARGIN);
        let points = PointSet::random(d, n, opts.seed);
        let table = GeneratorTable::new(d);
        let t_ladder = points.ladder(&TFraction::t(), d.get())?;
        let full = BTreeMap::from([((1, 0), vec![BasisElem { factors: vec![0], ladder: t_ladder.clone() }])]);
        Ok(Discovery {
            d,
            table,
            points,
            gen_ladders: vec![t_ladder],
            gen_index: vec![("t".into(), Grading::new(1, 0, d))],
            full,
            degree: 1,
        })
    }

    /// Runs discovery through `opts.max_degree`, reporting each finished degree.
    pub fn run(d: FormDegree, opts: &DiscoveryOptions, mut progress: impl FnMut(i64, &[TableEntry])) -> Result<Self> {
        let mut disc = Self::new(d, opts)?;
        while disc.degree < opts.max_degree as i64 {
            let n = disc.extend()?;
            progress(n, disc.table.degree(n));
        }
        Ok(disc)
    }

    pub fn table(&self) -> &GeneratorTable {
        &self.table
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn generator_ladder(&self, k: usize) -> &LadderValues {
        &self.gen_ladders[k]
    }

    /// Names and gradings of the generators in table order.
    pub fn generators(&self) -> &[(String, Grading)] {
        &self.gen_index
    }

    /// Monomial basis of semi-invariants of degree `n` and weight `w`.
    pub fn basis(&self, n: i64, w: i64) -> &[BasisElem] {
        self.full.get(&(n, w)).map_or(&[], Vec::as_slice)
    }

    pub fn order_of(&self, n: i64, w: i64) -> i64 {
        self.d.as_i64() * n - 2 * w
    }

    /// Construction of a basis element as a product of generators.
    pub fn product_expr(&self, factors: &[usize]) -> ConstructionExpr {
        let mut parts: Vec<(ConstructionExpr, u32)> = Vec::new();
        for &k in factors {
            let e = self.gen_expr(k);
            match parts.last_mut() {
                Some((last, c)) if *last == e => *c += 1,
                _ => parts.push((e, 1)),
            }
        }
        ConstructionExpr::product(parts)
    }

    fn gen_expr(&self, k: usize) -> ConstructionExpr {
        if k == 0 {
            ConstructionExpr::T
        } else {
            ConstructionExpr::gen(self.gen_index[k].0.clone())
        }
    }

    fn gen_value(&self, k: usize) -> &TFraction {
        &self.table.get(&self.gen_index[k].0).expect("generator registered").value
    }

    /// Adds the generators of the next degree; returns that degree.
    pub fn extend(&mut self) -> Result<i64> {
        let n = self.degree + 1;
        let d = self.d;
        let weights: Vec<i64> = (0..=d.as_i64() * n / 2).collect();
        let slices: Vec<SliceResult> = weights.par_iter().map(|&w| self.slice(n, w)).collect::<Result<Vec<_>>>()?;

        let depth = d.get();
        for s in slices {
            let mut elems = Vec::new();
            for (g, cof, idx, factors) in &s.red {
                let ladder = self.gen_ladders[*g].mul(&self.full[cof][*idx].ladder);
                elems.push(BasisElem { factors: factors.clone(), ladder });
            }
            let built: Vec<(ConstructionExpr, TFraction, Vec<Fp62>)> = s
                .new
                .par_iter()
                .map(|(idx, r, vals)| {
                    let b = &self.full[&(n - 1, s.w - *r as i64)][*idx];
                    let expr = ConstructionExpr::st(ConstructionExpr::T, self.product_expr(&b.factors), *r);
                    let bval = b.factors.iter().fold(TFraction::one(), |acc, &k| acc.mul(self.gen_value(k)));
                    let value = semitransvectant_with(&TFraction::t(), &bval, *r, d, StOptions { check: false })?.value;
                    Ok((expr, value, vals.clone()))
                })
                .collect::<Result<_>>()?;
            for (expr, value, vals) in built {
                let grading = grading_of(&value, d)?;
                if (grading.degree, grading.weight) != (n, s.w) {
                    return Err(Error::Search(format!(
                        "{expr} has grading {grading}, expected degree {n} weight {}",
                        s.w
                    )));
                }
                let ladder = self.points.ladder(&value, depth)?;
                if !proportional(ladder.values(), &vals) {
                    return Err(Error::Search(format!("{expr}: exact value disagrees with the screen")));
                }
                let k = self.gen_ladders.len();
                let name = format!("c{n}_{}", self.table.degree(n).len() + 1);
                self.gen_index.push((name.clone(), grading));
                self.gen_ladders.push(ladder.clone());
                self.table.push(TableEntry { name, expr, value, grading });
                elems.push(BasisElem { factors: vec![k], ladder });
            }
            if !elems.is_empty() {
                self.full.insert((n, s.w), elems);
            }
        }
        self.degree = n;
        Ok(n)
    }

    fn slice(&self, n: i64, w: i64) -> Result<SliceResult> {
        let d = self.d;
        let dim = dim_semi_invariants(d.get(), n as u32, w) as usize;
        let mut out = SliceResult { w, red: Vec::new(), new: Vec::new() };
        if dim == 0 {
            return Ok(out);
        }
        let m = (dim + MARGIN).min(self.points.len());
        if m < dim + 1 {
            return Err(Error::Search(format!("too few points ({}) for slice of dimension {dim}", self.points.len())));
        }
        let mut ech = EchelonBasis::<Fp62>::new(m);
        let mut seen = FxHashSet::default();
        'red: for (g, (_, gg)) in self.gen_index.iter().enumerate() {
            let (k, u) = (gg.degree, gg.weight);
            if k >= n {
                continue;
            }
            let cof = (n - k, w - u);
            for (idx, b) in self.basis(cof.0, cof.1).iter().enumerate() {
                let mut factors = b.factors.clone();
                factors.push(g);
                factors.sort_unstable();
                if !seen.insert(factors.clone()) {
                    continue;
                }
                let gv = self.gen_ladders[g].values();
                let v: Vec<Fp62> = gv[..m].iter().zip(&b.ladder.values()[..m]).map(|(a, b)| *a * *b).collect();
                if ech.insert(v) {
                    out.red.push((g, cof, idx, factors));
                    if ech.rank() == dim {
                        break 'red;
                    }
                }
            }
        }
        if ech.rank() < dim {
            let t = &self.gen_ladders[0];
            let mut cands = Vec::new();
            for r in 1..=d.get() {
                let wb = w - r as i64;
                let ord_b = self.order_of(n - 1, wb);
                if wb < 0 || (r as i64) > ord_b {
                    continue;
                }
                let (wts, _) = lemma_weights(d.as_i64(), ord_b, r);
                let wts: Vec<Fp62> = wts.iter().map(Fp62::from_bigint).collect();
                for (idx, b) in self.basis(n - 1, wb).iter().enumerate() {
                    let expr = ConstructionExpr::st(ConstructionExpr::T, self.product_expr(&b.factors), r);
                    cands.push((expr.size(), expr.to_string(), idx, r, t.transvect(&b.ladder, &wts)));
                }
            }
            cands.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
            for (_, _, idx, r, vals) in cands {
                if ech.insert(vals[..m].to_vec()) {
                    out.new.push((idx, r, vals));
                    if ech.rank() == dim {
                        break;
                    }
                }
            }
        }
        if ech.rank() != dim {
            return Err(Error::Search(format!(
                "degree {n} weight {w}: candidates span {} of {dim} dimensions",
                ech.rank()
            )));
        }
        Ok(out)
    }
}

pub(crate) fn proportional(a: &[Fp62], b: &[Fp62]) -> bool {
    let zero = Fp62::new(0);
    let Some(i) = b.iter().position(|x| *x != zero) else {
        return a.iter().all(|x| *x == zero);
    };
    if a[i] == zero {
        return false;
    }
    let c = a[i] * b[i].inv();
    a.iter().zip(b).all(|(x, y)| *x == c * *y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn septic_low_degrees() {
        let d = FormDegree::SEPTIC;
        let disc = Discovery::run(d, &DiscoveryOptions::new(4), |_, _| {}).unwrap();
        let t = disc.table();
        assert_eq!(t.orders(2), vec![2, 6, 10]);
        assert_eq!(t.orders(3), vec![3, 5, 7, 9, 11, 15]);
        assert_eq!(t.orders(4), vec![0, 4, 4, 6, 8, 8, 10, 14]);
        assert_eq!(t.invariants().count(), 1);
    }

    #[test]
    fn quadratic_form_has_only_the_discriminant() {
        let d = FormDegree::new(2).unwrap();
        let disc = Discovery::run(d, &DiscoveryOptions::new(4), |_, _| {}).unwrap();
        assert_eq!(disc.table().counts(), BTreeMap::from([(1, 1), (2, 1)]));
        assert_eq!(disc.table().invariants().count(), 1);
    }
}
