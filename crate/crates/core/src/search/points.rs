//! Values of semi-invariants and their `D`-ladders at random points with
//! `x1 = 0`, modulo the screening prime.
//!
//! On such points a fraction in `t, x1, z2..zd` takes the value of its
//! `x1`-free part, and evaluation is a ring map, so products and the
//! Leibniz rule carry over to value vectors exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::covariant::Ladder;
use crate::error::Result;
use crate::fraction::TFraction;
use crate::grading::FormDegree;
use crate::poly::VarId;
use crate::scalar::{Field, SCREEN_PRIME};
use crate::{Fp62, ZPoly};

/// Random points `(t, x1 = 0, z2, ..., zd)` with every coordinate nonzero.
#[derive(Clone, Debug)]
pub struct PointSet {
    d: FormDegree,
    coords: Vec<[Fp62; 8]>,
    t_inv: Vec<Fp62>,
}

impl PointSet {
    pub fn random(d: FormDegree, n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coords: Vec<[Fp62; 8]> = (0..n)
            .map(|_| {
                let mut c = [Fp62::new(0); 8];
                c[0] = Fp62::new(rng.gen_range(1..SCREEN_PRIME));
                for z in c.iter_mut().take(d.get() as usize + 1).skip(2) {
                    *z = Fp62::new(rng.gen_range(1..SCREEN_PRIME));
                }
                c
            })
            .collect();
        let t_inv = coords.iter().map(|c| c[0].inv()).collect();
        PointSet { d, coords, t_inv }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn form_degree(&self) -> FormDegree {
        self.d
    }

    fn coordinate(c: &[Fp62; 8], v: VarId) -> Fp62 {
        if v == VarId::T {
            c[0]
        } else if let Some(i) = v.z_index() {
            c[i]
        } else {
            Fp62::new(0)
        }
    }

    /// Values of `num / t^s` at every point.
    pub fn eval(&self, num: &ZPoly, s: u32) -> Vec<Fp62> {
        let x1 = VarId::x(1);
        let terms: Vec<_> = num
            .terms()
            .iter()
            .filter(|(m, _)| m.exponent(x1) == 0)
            .map(|(m, c)| (m.factors().collect::<Vec<_>>(), Fp62::from_bigint(c)))
            .collect();
        self.coords
            .par_iter()
            .zip(&self.t_inv)
            .map(|(c, ti)| {
                let mut acc = Fp62::new(0);
                for (fs, coef) in &terms {
                    let mut v = *coef;
                    for &(var, e) in fs {
                        v *= &Self::coordinate(c, var).pow(e as u64);
                    }
                    acc += &v;
                }
                acc * ti.pow(s as u64)
            })
            .collect()
    }

    pub fn eval_fraction(&self, f: &TFraction) -> Vec<Fp62> {
        self.eval(f.num(), f.s())
    }

    /// Value vectors of `D^i f` for `i = 0..=depth`.
    pub fn ladder(&self, f: &TFraction, depth: u32) -> Result<LadderValues> {
        let l = Ladder::new(f, self.d, depth, true)?;
        let levels = (0..=depth).map(|i| self.eval(l.level(i), l.base_exponent() + i)).collect();
        Ok(LadderValues { levels })
    }
}

/// Values of `D^i f` at a point set, one row per level.
#[derive(Clone, Debug, PartialEq)]
pub struct LadderValues {
    levels: Vec<Vec<Fp62>>,
}

fn binomials(n: usize) -> Vec<Vec<Fp62>> {
    let mut rows = vec![vec![Fp62::new(1)]];
    for i in 1..=n {
        let prev = &rows[i - 1];
        let row = (0..=i)
            .map(|j| {
                let a = if j > 0 { prev[j - 1] } else { Fp62::new(0) };
                let b = prev.get(j).copied().unwrap_or(Fp62::new(0));
                a + b
            })
            .collect();
        rows.push(row);
    }
    rows
}

impl LadderValues {
    pub fn from_levels(levels: Vec<Vec<Fp62>>) -> Self {
        LadderValues { levels }
    }

    /// The constant function 1 on `n` points.
    pub fn one(depth: u32, n: usize) -> Self {
        let mut levels = vec![vec![Fp62::new(0); n]; depth as usize + 1];
        levels[0] = vec![Fp62::new(1); n];
        LadderValues { levels }
    }

    pub fn depth(&self) -> u32 {
        self.levels.len() as u32 - 1
    }

    pub fn level(&self, i: u32) -> &[Fp62] {
        &self.levels[i as usize]
    }

    pub fn values(&self) -> &[Fp62] {
        &self.levels[0]
    }

    /// Ladder of the product, by the Leibniz rule.
    pub fn mul(&self, other: &Self) -> Self {
        let depth = self.depth().min(other.depth()) as usize;
        let binom = binomials(depth);
        let n = self.levels[0].len();
        let levels = (0..=depth)
            .map(|i| {
                let mut row = vec![Fp62::new(0); n];
                for (j, &c) in binom[i].iter().enumerate().take(i + 1) {
                    let (a, b) = (&self.levels[j], &other.levels[i - j]);
                    for ((r, x), y) in row.iter_mut().zip(a).zip(b) {
                        *r += &(c * *x * *y);
                    }
                }
                row
            })
            .collect();
        LadderValues { levels }
    }

    /// Values of `sum_i w_i D^i f D^(r-i) g`, the unnormalized semitransvectant.
    pub fn transvect(&self, other: &Self, weights: &[Fp62]) -> Vec<Fp62> {
        let r = weights.len() - 1;
        let n = self.levels[0].len();
        let mut out = vec![Fp62::new(0); n];
        for (i, w) in weights.iter().enumerate() {
            if *w == Fp62::new(0) {
                continue;
            }
            for ((o, x), y) in out.iter_mut().zip(&self.levels[i]).zip(&other.levels[r - i]) {
                *o += &(*w * *x * *y);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covariant::{lemma_weights, semitransvectant};

    const D7: FormDegree = FormDegree::SEPTIC;

    fn frac(s: &str, e: u32) -> TFraction {
        TFraction::new(s.parse().unwrap(), e)
    }

    #[test]
    fn leibniz_matches_symbolic_product() {
        let pts = PointSet::random(D7, 12, 1);
        let f = frac("3*z2^2 + z4", 2);
        let g = frac("z3", 0);
        let lf = pts.ladder(&f, 5).unwrap();
        let lg = pts.ladder(&g, 5).unwrap();
        assert_eq!(lf.mul(&lg), pts.ladder(&f.mul(&g), 5).unwrap());
    }

    #[test]
    fn transvect_is_proportional_to_semitransvectant() {
        let pts = PointSet::random(D7, 8, 2);
        let (f, g) = (frac("z2", 0), frac("z3", 0));
        let (w, _) = lemma_weights(10, 15, 2);
        let w: Vec<Fp62> = w.iter().map(Fp62::from_bigint).collect();
        let raw = pts.ladder(&f, 2).unwrap().transvect(&pts.ladder(&g, 2).unwrap(), &w);
        let exact = pts.eval_fraction(&semitransvectant(&f, &g, 2, D7).unwrap());
        let ratio = raw[0] * exact[0].inv();
        assert!(raw.iter().zip(&exact).all(|(a, b)| *a == ratio * *b));
    }
}
