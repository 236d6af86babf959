//! Dense linear algebra over a field, and coefficient vectors of fractions.

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::fraction::TFraction;
use crate::grading::bigrading;
use crate::poly::Monomial;
use crate::scalar::Field;
use crate::{Integer, Rational};

/// Row-major dense matrix with one label per row.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F> {
    rows: Vec<Vec<F>>,
    cols: usize,
    labels: Vec<String>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows: vec![vec![F::zero(); cols]; rows], cols, labels: (0..rows).map(|i| format!("r{i}")).collect() }
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let labels = (0..rows.len()).map(|i| format!("r{i}")).collect();
        Matrix { rows, cols, labels }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.rows.len());
        self.labels = labels;
        self
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i][i] = F::one();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<F>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.rows[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.rows[i][j] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows.len());
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                t.rows[j][i] = v.clone();
            }
        }
        t
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix {
            rows: self.rows.iter().map(|r| r.iter().map(&f).collect()).collect(),
            cols: self.cols,
            labels: self.labels.clone(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RowReduction<F> {
    pub rank: usize,
    pub rref: Matrix<F>,
    pub pivots: Vec<usize>,
    /// Basis of `{x : M x = 0}`, one vector per free column with a 1 there.
    pub nullspace: Vec<Vec<F>>,
}

/// Gauss-Jordan elimination.
pub fn row_reduce<F: Field>(m: &Matrix<F>) -> RowReduction<F> {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows.len() {
            break;
        }
        let Some(p) = (r..a.rows.len()).find(|&i| !a.rows[i][c].is_zero()) else {
            continue;
        };
        a.rows.swap(r, p);
        a.labels.swap(r, p);
        let inv = a.rows[r][c].inv();
        for v in a.rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = a.rows[r].clone();
        for i in 0..a.rows.len() {
            if i == r || a.rows[i][c].is_zero() {
                continue;
            }
            let f = a.rows[i][c].clone();
            for (v, pv) in a.rows[i].iter_mut().zip(&pivot_row).skip(c) {
                if !pv.is_zero() {
                    *v -= &f.mul_ref(pv);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let nullspace = (0..a.cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![F::zero(); a.cols];
            v[free] = F::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a.rows[row][free].clone();
            }
            v
        })
        .collect();
    RowReduction { rank: pivots.len(), rref: a, pivots, nullspace }
}

pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    let mut basis = EchelonBasis::new(m.cols);
    m.rows.iter().filter(|r| basis.insert(r.to_vec())).count()
}

/// Linear relations among the rows: basis of `{y : y^T M = 0}`.
pub fn row_relations<F: Field>(m: &Matrix<F>) -> Vec<Vec<F>> {
    row_reduce(&m.transpose()).nullspace
}

/// Incrementally maintained row-echelon basis.
#[derive(Clone, Debug)]
pub struct EchelonBasis<F> {
    cols: usize,
    rows: Vec<(usize, Vec<F>)>,
}

impl<F: Field> EchelonBasis<F> {
    pub fn new(cols: usize) -> Self {
        EchelonBasis { cols, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    /// Reduces `v` against the basis; zero means `v` lies in the span.
    pub fn reduce(&self, mut v: Vec<F>) -> Vec<F> {
        assert_eq!(v.len(), self.cols);
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, y) in v.iter_mut().zip(row).skip(*p) {
                if !y.is_zero() {
                    *x -= &f.mul_ref(y);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.reduce(v.to_vec()).iter().all(|x| x.is_zero())
    }

    /// Adds `v` when it is independent of the basis; returns whether it was.
    pub fn insert(&mut self, v: Vec<F>) -> bool {
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].inv();
        for x in v.iter_mut() {
            *x *= &inv;
        }
        self.rows.push((p, v));
        true
    }
}

/// Labels of the candidates kept, scanning in order, that raise the rank
/// of `base` together with the candidates kept so far.
pub fn greedy_independent<F: Field>(candidates: &[(String, Vec<F>)], base: &[Vec<F>]) -> Vec<String> {
    let cols = candidates.first().map(|(_, v)| v.len()).or_else(|| base.first().map(Vec::len)).unwrap_or(0);
    let mut basis = EchelonBasis::new(cols);
    for b in base {
        basis.insert(b.clone());
    }
    candidates.iter().filter(|(_, v)| basis.insert(v.clone())).map(|(l, _)| l.clone()).collect()
}

/// Column index for the monomials of one grading, in decreasing monomial order.
#[derive(Clone, Debug, Default)]
pub struct MonomialBasisIndex {
    monomials: Vec<Monomial>,
    index: FxHashMap<Monomial, usize>,
}

impl MonomialBasisIndex {
    pub fn new(mut monomials: Vec<Monomial>) -> Self {
        monomials.sort_unstable_by(|a, b| b.cmp(a));
        monomials.dedup();
        let index = monomials.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        MonomialBasisIndex { monomials, index }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn column(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn monomial(&self, i: usize) -> Monomial {
        self.monomials[i]
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }
}

/// Numerators of `fs` over their largest common denominator `t^s`.
pub fn common_numerators(fs: &[TFraction]) -> Result<(Vec<crate::ZPoly>, u32)> {
    let s = fs.iter().map(TFraction::s).max().unwrap_or(0);
    let mut grading = None;
    let mut nums = Vec::with_capacity(fs.len());
    for f in fs {
        let num = f.num_over(s);
        if !num.is_zero() {
            let g = bigrading(&num)?;
            if *grading.get_or_insert(g) != g {
                return Err(Error::MixedGradings);
            }
        }
        nums.push(num);
    }
    Ok((nums, s))
}

/// Coefficient vectors of fractions sharing one grading.
pub fn vectorize(fs: &[TFraction]) -> Result<(Matrix<Rational>, MonomialBasisIndex)> {
    vectorize_with(fs, |c| Rational::from_integer(c.clone()))
}

/// As [`vectorize`], mapping each integer coefficient into `F`.
pub fn vectorize_with<F: Field>(
    fs: &[TFraction],
    conv: impl Fn(&Integer) -> F,
) -> Result<(Matrix<F>, MonomialBasisIndex)> {
    let (nums, _) = common_numerators(fs)?;
    let index = MonomialBasisIndex::new(nums.iter().flat_map(|p| p.terms().iter().map(|(m, _)| *m)).collect());
    let rows = nums
        .iter()
        .map(|p| {
            let mut row = vec![F::zero(); index.len()];
            for (m, c) in p.terms() {
                row[index.column(m).unwrap()] = conv(c);
            }
            row
        })
        .collect();
    let mut m = Matrix::from_rows(rows);
    m.cols = index.len();
    Ok((m, index))
}
