//! Invariant generators, syzygy spaces, and the degree-by-degree ledger.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::discover::{proportional, Discovery};
use super::expr::ConstructionExpr;
use super::points::{LadderValues, PointSet};
use super::table::GeneratorTable;
use crate::covariant::lemma_weights;
use crate::dimension::{delta_account, dim_invariants, sigma_count, DeltaLedger};
use crate::error::{Error, Result};
use crate::fraction::TFraction;
use crate::grading::{grading_of, FormDegree};
use crate::linalg::{common_numerators, row_relations, EchelonBasis, Matrix};
use crate::poly::VarId;
use crate::{Fp62, Integer, Rational, ZPoly};

const MARGIN: usize = 16;

/// An invariant with its values on the screening points.
#[derive(Clone, Debug)]
pub struct InvariantGen {
    pub name: String,
    pub degree: u32,
    pub expr: ConstructionExpr,
    pub value: TFraction,
    pub values: Vec<Fp62>,
}

/// Brackets `[u, v]^r` of order zero between generators of degree `n / 2`.
///
/// `max_r` bounds the bracket index; pairs are unordered.
pub fn invariant_candidates(table: &GeneratorTable, n: i64, max_r: Option<u32>) -> Result<Vec<ConstructionExpr>> {
    if n % 2 != 0 {
        return Err(Error::Search(format!("halves mode needs an even degree, got {n}")));
    }
    Ok(pair_candidates(table, n / 2, n / 2, max_r))
}

/// Order-zero brackets between generators of degrees `k` and `n - k` for all `k`.
pub fn general_candidates(table: &GeneratorTable, n: i64, max_r: Option<u32>) -> Vec<ConstructionExpr> {
    (1..=n / 2).flat_map(|k| pair_candidates(table, k, n - k, max_r)).collect()
}

fn pair_candidates(table: &GeneratorTable, k: i64, l: i64, max_r: Option<u32>) -> Vec<ConstructionExpr> {
    let (a, b) = (table.degree(k), table.degree(l));
    let mut out = Vec::new();
    for (i, u) in a.iter().enumerate() {
        let start = if k == l { i } else { 0 };
        for v in &b[start..] {
            let (ou, ov) = (u.grading.order, v.grading.order);
            if ou != ov || ou == 0 || max_r.is_some_and(|m| ou > m as i64) {
                continue;
            }
            if k == l && u.name == v.name && ou % 2 == 1 {
                continue;
            }
            out.push(ConstructionExpr::st(u.expr_ref(), v.expr_ref(), ou as u32));
        }
    }
    out
}

/// Multisets of invariant indices whose degrees sum to `n`, at least two factors.
pub fn product_monomials(degrees: &[u32], n: u32) -> Vec<Vec<usize>> {
    fn rec(degrees: &[u32], start: usize, left: u32, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            if cur.len() >= 2 {
                out.push(cur.clone());
            }
            return;
        }
        for k in start..degrees.len() {
            if degrees[k] <= left {
                cur.push(k);
                rec(degrees, k, left - degrees[k], cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(degrees, 0, n, &mut Vec::new(), &mut out);
    out
}

fn monomial_label(invs: &[InvariantGen], mono: &[usize]) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < mono.len() {
        let j = mono[i..].iter().take_while(|&&k| k == mono[i]).count();
        let name = &invs[mono[i]].name;
        parts.push(if j > 1 { format!("{name}^{j}") } else { name.clone() });
        i += j;
    }
    parts.join("*")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SyzygyStatus {
    /// Dimension from the modular screen only.
    Screened,
    /// Relations found exactly and verified to vanish as polynomials.
    Certified,
}

/// Linear relations among the degree-`n` products of invariant generators.
#[derive(Clone, Debug)]
pub struct SyzygyRecord {
    pub degree: u32,
    /// Product monomials, one per coordinate of a relation.
    pub labels: Vec<String>,
    monomials: Vec<Vec<usize>>,
    pub rank: usize,
    /// Exact relation vectors; empty unless certified.
    pub relations: Vec<Vec<Rational>>,
    pub status: SyzygyStatus,
}

impl SyzygyRecord {
    pub fn dim(&self) -> usize {
        self.labels.len() - self.rank
    }

    /// A relation rendered as `c1*m1 + c2*m2 + ... = 0`.
    pub fn render(&self, i: usize) -> String {
        let terms: Vec<String> = self.relations[i]
            .iter()
            .zip(&self.labels)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, l)| format!("({c})*{l}"))
            .collect();
        format!("{} = 0", terms.join(" + "))
    }
}

fn product_values(invs: &[InvariantGen], mono: &[usize], m: usize) -> Vec<Fp62> {
    let mut v = invs[mono[0]].values[..m].to_vec();
    for &k in &mono[1..] {
        for (x, y) in v.iter_mut().zip(&invs[k].values) {
            *x *= y;
        }
    }
    v
}

/// Rank of the degree-`n` products on the screening points, and the echelon
/// basis that later candidates are reduced against.
fn screen(invs: &[InvariantGen], d: FormDegree, n: u32, npts: usize) -> (SyzygyRecord, EchelonBasis<Fp62>, usize) {
    let lower: Vec<u32> = invs.iter().map(|g| if g.degree < n { g.degree } else { u32::MAX }).collect();
    let monomials = product_monomials(&lower, n);
    let m = (dim_invariants(d.get(), n) as usize + MARGIN).min(npts);
    let mut ech = EchelonBasis::new(m);
    for mono in &monomials {
        ech.insert(product_values(invs, mono, m));
    }
    let rec = SyzygyRecord {
        degree: n,
        labels: monomials.iter().map(|mono| monomial_label(invs, mono)).collect(),
        monomials,
        rank: ech.rank(),
        relations: Vec::new(),
        status: SyzygyStatus::Screened,
    };
    (rec, ech, m)
}

/// Screened syzygy space of degree `n` among `invs` (all of degree below `n` are used).
pub fn syzygy_space(invs: &[InvariantGen], d: FormDegree, n: u32) -> SyzygyRecord {
    let npts = invs.iter().map(|g| g.values.len()).min().unwrap_or(0);
    screen(invs, d, n, npts).0
}

fn exact_value(f: &TFraction, z: &[Integer]) -> Integer {
    // At t = 1 the fraction equals its numerator.
    f.num().eval(|v| {
        if v == VarId::T {
            Integer::one()
        } else if let Some(i) = v.z_index() {
            z[i].clone()
        } else {
            Integer::zero()
        }
    })
}

/// Finds the relations of `rec` exactly and checks that each one vanishes
/// identically when recombined from the invariants' numerators.
pub fn certify(rec: &SyzygyRecord, invs: &[InvariantGen], seed: u64) -> Result<SyzygyRecord> {
    let npts = rec.labels.len() + MARGIN;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<Vec<Integer>> =
        (0..npts).map(|_| (0..8).map(|_| Integer::from(rng.gen_range(-60i64..=60))).collect()).collect();
    let used: Vec<usize> = {
        let mut u: Vec<usize> = rec.monomials.iter().flatten().copied().collect();
        u.sort_unstable();
        u.dedup();
        u
    };
    let mut vals: BTreeMap<usize, Vec<Integer>> = BTreeMap::new();
    for &k in &used {
        vals.insert(k, pts.par_iter().map(|z| exact_value(&invs[k].value, z)).collect());
    }
    let rows: Vec<Vec<Rational>> = rec
        .monomials
        .iter()
        .map(|mono| {
            (0..npts)
                .map(|p| Rational::from_integer(mono.iter().fold(Integer::one(), |acc, k| acc * &vals[k][p])))
                .collect()
        })
        .collect();
    let relations = if rows.is_empty() { Vec::new() } else { row_relations(&Matrix::from_rows(rows)) };
    if relations.len() != rec.dim() {
        return Err(Error::Search(format!(
            "degree {}: exact evaluation gives {} relations, screen gave {}",
            rec.degree,
            relations.len(),
            rec.dim()
        )));
    }
    if !relations.is_empty() {
        let products: Vec<TFraction> = rec
            .monomials
            .par_iter()
            .map(|mono| mono.iter().fold(TFraction::one(), |acc, &k| acc.mul(&invs[k].value)))
            .collect();
        let (nums, _) = common_numerators(&products)?;
        for (i, rel) in relations.iter().enumerate() {
            let den = rel.iter().fold(Integer::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
            let mut sum = ZPoly::zero();
            for (c, p) in rel.iter().zip(&nums) {
                if !c.is_zero() {
                    let k = (c * Rational::from_integer(den.clone())).to_integer();
                    sum = &sum + &p.scale(&k);
                }
            }
            if !sum.is_zero() {
                return Err(Error::Search(format!("degree {} relation {i} does not vanish", rec.degree)));
            }
        }
    }
    Ok(SyzygyRecord { relations, status: SyzygyStatus::Certified, ..rec.clone() })
}

/// A candidate invariant with its screening values; the exact value may be deferred.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub name: String,
    pub degree: u32,
    pub expr: ConstructionExpr,
    pub values: Vec<Fp62>,
    pub value: Option<TFraction>,
}

/// Supplies candidate invariants degree by degree, in stages of decreasing preference.
pub trait CandidateSource {
    /// Candidates of degree `n` in stage `stage`, or `None` once the stages run out.
    fn stage(&mut self, n: u32, stage: usize) -> Result<Option<Vec<Candidate>>>;

    /// Exact value of a selected candidate.
    fn realize(&mut self, c: &Candidate) -> Result<TFraction>;

    /// Called with the invariants selected at degree `n`.
    fn finish(&mut self, _n: u32, _selected: &mut [InvariantGen]) {}
}

/// Outcome of the ledger run.
#[derive(Clone, Debug)]
pub struct LedgerReport {
    pub ledger: DeltaLedger,
    pub invariants: Vec<InvariantGen>,
    pub syzygies: BTreeMap<u32, SyzygyRecord>,
    /// Degrees where fewer new invariants were constructed than the count requires.
    pub missing: BTreeMap<u32, u64>,
    /// Offered candidates that were already in the span of earlier ones.
    pub rejected: Vec<String>,
}

impl LedgerReport {
    pub fn constructed(&self) -> usize {
        self.invariants.len()
    }

    pub fn degree(&self, n: u32) -> impl Iterator<Item = &InvariantGen> {
        self.invariants.iter().filter(move |g| g.degree == n)
    }

    /// Certifies the syzygy spaces of the listed degrees in place.
    pub fn certify_degrees(&mut self, degrees: &[u32], seed: u64) -> Result<()> {
        for n in degrees {
            if let Some(rec) = self.syzygies.get(n) {
                let cert = certify(rec, &self.invariants, seed ^ *n as u64)?;
                self.syzygies.insert(*n, cert);
            }
        }
        Ok(())
    }
}

/// Walks degrees `1..=max_degree`: counts the products of earlier invariants,
/// screens their rank on `npts` points, and takes new invariants from `source`
/// until `dim I_n` is reached.
pub fn build_ledger(
    d: FormDegree,
    max_degree: u32,
    npts: usize,
    source: &mut impl CandidateSource,
    mut progress: impl FnMut(u32, &LedgerReport),
) -> Result<LedgerReport> {
    let mut rep = LedgerReport {
        ledger: DeltaLedger::new(d.get()),
        invariants: Vec::new(),
        syzygies: BTreeMap::new(),
        missing: BTreeMap::new(),
        rejected: Vec::new(),
    };
    for n in 1..=max_degree {
        let (rec, mut ech, m) = screen(&rep.invariants, d, n, npts);
        let sigma = sigma_count(&rep.ledger, n);
        if rec.labels.len() as u64 != sigma {
            return Err(Error::Search(format!("degree {n}: {} products but sigma = {sigma}", rec.labels.len())));
        }
        let delta = delta_account(&mut rep.ledger, n, rec.dim() as u64)?;
        if rec.dim() > 0 {
            rep.syzygies.insert(n, rec);
        }
        let first = rep.invariants.len();
        let mut added = 0;
        let mut stage = 0;
        while added < delta {
            let Some(cands) = source.stage(n, stage)? else { break };
            stage += 1;
            for c in cands {
                if added == delta {
                    break;
                }
                if c.values.len() < m {
                    return Err(Error::Search(format!("{}: too few values", c.name)));
                }
                if !ech.insert(c.values[..m].to_vec()) {
                    rep.rejected.push(c.name);
                    continue;
                }
                let value = match &c.value {
                    Some(v) => v.clone(),
                    None => source.realize(&c)?,
                };
                rep.invariants.push(InvariantGen { name: c.name, degree: n, expr: c.expr, value, values: c.values });
                added += 1;
            }
        }
        if added < delta {
            rep.missing.insert(n, delta - added);
        }
        source.finish(n, &mut rep.invariants[first..]);
        progress(n, &rep);
    }
    Ok(rep)
}

/// Named, exactly known invariants offered at their own degree in the given order.
pub struct NamedSource {
    items: Vec<Candidate>,
}

impl NamedSource {
    pub fn new(points: &PointSet, items: &[(String, ConstructionExpr, TFraction)]) -> Result<Self> {
        let d = points.form_degree();
        let items = items
            .iter()
            .map(|(name, expr, value)| {
                let g = grading_of(value, d)?;
                if g.order != 0 {
                    return Err(Error::Search(format!("{name} has order {}", g.order)));
                }
                Ok(Candidate {
                    name: name.clone(),
                    degree: g.degree as u32,
                    expr: expr.clone(),
                    values: points.eval_fraction(value),
                    value: Some(value.clone()),
                })
            })
            .collect::<Result<_>>()?;
        Ok(NamedSource { items })
    }
}

impl CandidateSource for NamedSource {
    fn stage(&mut self, n: u32, stage: usize) -> Result<Option<Vec<Candidate>>> {
        Ok((stage == 0).then(|| self.items.iter().filter(|c| c.degree == n).cloned().collect()))
    }

    fn realize(&mut self, c: &Candidate) -> Result<TFraction> {
        c.value.clone().ok_or_else(|| Error::UnknownName(c.name.clone()))
    }
}

/// Points enough to screen every degree through `max_degree`.
pub fn ledger_points(d: FormDegree, max_degree: u32) -> usize {
    (1..=max_degree).map(|n| dim_invariants(d.get(), n) as usize).max().unwrap_or(0) + 2 * MARGIN
}

/// Ledger over named invariants, for instance the order-zero entries of a recipe.
pub fn named_ledger(
    d: FormDegree,
    max_degree: u32,
    items: &[(String, ConstructionExpr, TFraction)],
    seed: u64,
    progress: impl FnMut(u32, &LedgerReport),
) -> Result<LedgerReport> {
    let npts = ledger_points(d, max_degree);
    let points = PointSet::random(d, npts, seed);
    let mut source = NamedSource::new(&points, items)?;
    build_ledger(d, max_degree, npts, &mut source, progress)
}

/// Candidates built from a discovery run.
///
/// Stage 0 takes the order-zero generators of degree `n`. Beyond the
/// discovered range, stage 1 brackets pairs of generators of degree `n / 2`,
/// stage 2 pairs of other basis elements of that degree, and stage 3 pairs
/// of unequal degrees.
pub struct DiscoverySource<'a> {
    disc: &'a Discovery,
    ev: super::eval::Evaluator,
}

impl<'a> DiscoverySource<'a> {
    pub fn new(disc: &'a Discovery) -> Self {
        let mut ev = super::eval::Evaluator::new(disc.table().form_degree());
        for g in disc.table().entries().filter(|g| g.name != "t") {
            ev.define(&g.name, g.expr.clone(), g.value.clone());
        }
        DiscoverySource { disc, ev }
    }

    fn elems(&self, deg: i64, gens_only: bool) -> Vec<(Vec<usize>, i64, &'a LadderValues)> {
        let disc = self.disc;
        let d = disc.table().form_degree().as_i64();
        (0..=d * deg / 2)
            .flat_map(|w| {
                let ord = disc.order_of(deg, w);
                disc.basis(deg, w).iter().map(move |b| (b.factors.clone(), ord, &b.ladder))
            })
            .filter(|(f, ord, _)| *ord > 0 && *ord <= d && (!gens_only || f.len() == 1))
            .collect()
    }

    fn pairs(&self, k: i64, l: i64, mode: PairMode) -> Vec<Candidate> {
        let n = (k + l) as u32;
        let a = self.elems(k, mode == PairMode::Generators);
        let b = if k == l { a.clone() } else { self.elems(l, false) };
        let mut out = Vec::new();
        for (i, (fu, ou, lu)) in a.iter().enumerate() {
            for (j, (fv, ov, lv)) in b.iter().enumerate() {
                if ou != ov || (k == l && j < i) {
                    continue;
                }
                let r = *ou as u32;
                if k == l && i == j && r % 2 == 1 {
                    continue;
                }
                if mode == PairMode::Basis && fu.len() == 1 && fv.len() == 1 {
                    continue;
                }
                let (w, _) = lemma_weights(*ou, *ov, r);
                let w: Vec<Fp62> = w.iter().map(Fp62::from_bigint).collect();
                let expr = ConstructionExpr::st(self.disc.product_expr(fu), self.disc.product_expr(fv), r);
                out.push(Candidate {
                    name: expr.to_string(),
                    degree: n,
                    expr,
                    values: lu.transvect(lv, &w),
                    value: None,
                });
            }
        }
        out
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum PairMode {
    Generators,
    Basis,
    Any,
}

impl CandidateSource for DiscoverySource<'_> {
    fn stage(&mut self, n: u32, stage: usize) -> Result<Option<Vec<Candidate>>> {
        let top = self.disc.degree();
        let n = n as i64;
        let out = match stage {
            0 if n <= top => self
                .disc
                .table()
                .degree(n)
                .iter()
                .filter(|g| g.grading.order == 0)
                .map(|g| Candidate {
                    name: g.name.clone(),
                    degree: n as u32,
                    expr: g.expr_ref(),
                    values: self.disc.points().eval_fraction(&g.value),
                    value: Some(g.value.clone()),
                })
                .collect(),
            0 => Vec::new(),
            1 | 2 if n % 2 == 0 && n / 2 <= top => {
                let mode = if stage == 1 { PairMode::Generators } else { PairMode::Basis };
                self.pairs(n / 2, n / 2, mode)
            }
            1 | 2 => Vec::new(),
            3 => (1..(n + 1) / 2)
                .rev()
                .filter(|&k| n - k <= top)
                .flat_map(|k| self.pairs(k, n - k, PairMode::Any))
                .collect(),
            _ => return Ok(None),
        };
        Ok(Some(out))
    }

    fn realize(&mut self, c: &Candidate) -> Result<TFraction> {
        let value = self.ev.eval(&c.expr)?;
        if !proportional(&self.disc.points().eval_fraction(&value), &c.values) {
            return Err(Error::Search(format!("{}: exact value disagrees with the screen", c.name)));
        }
        Ok(value)
    }

    fn finish(&mut self, n: u32, selected: &mut [InvariantGen]) {
        let single = selected.len() == 1;
        for (i, g) in selected.iter_mut().enumerate() {
            g.name = if single { format!("p_{n}") } else { format!("p_{n}_{}", i + 1) };
            g.values = self.disc.points().eval_fraction(&g.value);
        }
    }
}

/// A relation written as integer multiples of products of named invariants.
pub type NamedRelation = Vec<(Integer, Vec<(String, u32)>)>;

/// Parses `c*a*b^2 - d*e + ...` with integer `c`, `d` into monomials.
pub fn parse_relation(text: &str) -> Result<NamedRelation> {
    let text = text.replace(char::is_whitespace, "");
    let text = text.trim_end_matches("=0");
    let mut out = Vec::new();
    let mut rest = text;
    while !rest.is_empty() {
        let neg = rest.starts_with('-');
        rest = rest.trim_start_matches(['+', '-']);
        let end = rest.find(['+', '-']).unwrap_or(rest.len());
        let (term, tail) = rest.split_at(end);
        rest = tail;
        let mut coef = Integer::one();
        let mut factors = Vec::new();
        for f in term.split('*') {
            if f.chars().all(|c| c.is_ascii_digit()) {
                coef *= f.parse::<Integer>().map_err(|e| Error::Search(format!("{f}: {e}")))?;
            } else {
                let (name, e) = match f.split_once('^') {
                    Some((n, e)) => (n, e.parse().map_err(|_| Error::Search(format!("bad exponent in {f}")))?),
                    None => (f, 1),
                };
                factors.push((name.to_string(), e));
            }
        }
        out.push((if neg { -coef } else { coef }, factors));
    }
    Ok(out)
}

/// Finds invariants whose negation makes `rel` vanish on the screening
/// values of `invs`; `None` when no sign pattern works.
pub fn sign_match(rel: &NamedRelation, invs: &[InvariantGen]) -> Result<Option<Vec<String>>> {
    let mut names: Vec<&str> = rel.iter().flat_map(|(_, fs)| fs.iter().map(|(n, _)| n.as_str())).collect();
    names.sort_unstable();
    names.dedup();
    let index = |n: &str| names.iter().position(|m| *m == n).unwrap();
    let values: Vec<&[Fp62]> = names
        .iter()
        .map(|n| {
            invs.iter()
                .find(|g| g.name == *n)
                .map(|g| g.values.as_slice())
                .ok_or_else(|| Error::UnknownName(n.to_string()))
        })
        .collect::<Result<_>>()?;
    let npts = values.iter().map(|v| v.len()).min().unwrap_or(0).min(12);
    // Each term: coefficient, parity mask of exponents, and its values.
    let terms: Vec<(u64, Vec<Fp62>)> = rel
        .iter()
        .map(|(c, fs)| {
            let mut mask = 0u64;
            let mut v = vec![Fp62::from_bigint(c); npts];
            for (n, e) in fs {
                let k = index(n);
                if e % 2 == 1 {
                    mask ^= 1 << k;
                }
                for (x, y) in v.iter_mut().zip(values[k]) {
                    *x *= &y.pow(*e as u64);
                }
            }
            (mask, v)
        })
        .collect();
    if names.len() > 20 {
        return Err(Error::Search("too many invariants for a sign search".into()));
    }
    for signs in 0u64..(1 << names.len()) {
        let mut acc = vec![Fp62::zero(); npts];
        for (mask, v) in &terms {
            let neg = (mask & signs).count_ones() % 2 == 1;
            for (a, x) in acc.iter_mut().zip(v) {
                if neg {
                    *a -= x;
                } else {
                    *a += x;
                }
            }
        }
        if acc.iter().all(|a| a.is_zero()) {
            return Ok(Some((0..names.len()).filter(|k| signs >> k & 1 == 1).map(|k| names[k].to_string()).collect()));
        }
    }
    Ok(None)
}

/// Options for [`complete_system`].
#[derive(Clone, Debug)]
pub struct SystemOptions {
    /// Invariants are constructed through this degree.
    pub max_degree: u32,
    /// The ledger counts through this degree (at least `max_degree`).
    pub ledger_degree: u32,
    /// Degree of the semi-invariant discovery; defaults to `max_degree`,
    /// or half of it for `d >= 7` where invariants come from brackets.
    pub discovery_degree: Option<u32>,
    pub seed: u64,
    /// Degrees whose syzygies are certified exactly.
    pub certify: Vec<u32>,
}

impl SystemOptions {
    pub fn new(max_degree: u32) -> Self {
        SystemOptions {
            max_degree,
            ledger_degree: max_degree,
            discovery_degree: None,
            seed: 0x5eed,
            certify: Vec::new(),
        }
    }
}

/// A generator table with the invariant system and ledger built on it.
pub struct CompleteSystem {
    pub discovery: Discovery,
    pub report: LedgerReport,
}

impl CompleteSystem {
    /// Writes every semi-invariant generator and every invariant under `dir`.
    pub fn persist(&self, dir: &std::path::Path) -> Result<crate::io::Manifest> {
        let d = self.discovery.table().form_degree();
        let mut m = crate::io::Manifest::new(d);
        for g in self.discovery.table().entries().filter(|g| g.name != "t") {
            m.persist(dir, &g.name, &g.value, g.grading, &g.expr.to_string())?;
        }
        for g in &self.report.invariants {
            m.persist(dir, &g.name, &g.value, grading_of(&g.value, d)?, &g.expr.to_string())?;
        }
        m.write(&dir.join("manifest.toml"))?;
        Ok(m)
    }
}

/// Discovers semi-invariants, then builds invariants degree by degree with
/// the ledger, stopping construction at `max_degree`.
pub fn complete_system(d: FormDegree, opts: &SystemOptions, mut progress: impl FnMut(&str)) -> Result<CompleteSystem> {
    let ledger_degree = opts.ledger_degree.max(opts.max_degree);
    let disc_degree = opts
        .discovery_degree
        .unwrap_or(if d.get() >= 7 { opts.max_degree.div_ceil(2) } else { opts.max_degree })
        .max(1);
    let npts =
        (super::discover::max_slice_dim(d, disc_degree) as usize + 2 * MARGIN).max(ledger_points(d, ledger_degree));
    let dopts = super::discover::DiscoveryOptions { max_degree: disc_degree, seed: opts.seed, points: Some(npts) };
    let discovery = Discovery::run(d, &dopts, |n, es| progress(&format!("degree {n}: {} generators", es.len())))?;
    let mut source = DiscoverySource::new(&discovery);
    let mut limited = Limited { inner: &mut source, max_degree: opts.max_degree };
    let mut report = build_ledger(d, ledger_degree, npts, &mut limited, |n, rep| {
        if let Some(row) = rep.ledger.row(n).filter(|r| r.dim > 0) {
            progress(&format!(
                "ledger {n}: dim {} sigma {} syzygies {} delta {}",
                row.dim, row.sigma, row.syzygies, row.delta
            ));
        }
    })?;
    report.certify_degrees(&opts.certify, opts.seed)?;
    Ok(CompleteSystem { discovery, report })
}

struct Limited<'s, S> {
    inner: &'s mut S,
    max_degree: u32,
}

impl<S: CandidateSource> CandidateSource for Limited<'_, S> {
    fn stage(&mut self, n: u32, stage: usize) -> Result<Option<Vec<Candidate>>> {
        if n > self.max_degree {
            return Ok(None);
        }
        self.inner.stage(n, stage)
    }

    fn realize(&mut self, c: &Candidate) -> Result<TFraction> {
        self.inner.realize(c)
    }

    fn finish(&mut self, n: u32, selected: &mut [InvariantGen]) {
        self.inner.finish(n, selected)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_monomials_count_sigma() {
        // Degrees 4, 8, 8, 8 give p4^4, p4^2 p8_i, p8_i p8_j at degree 16.
        let monos = product_monomials(&[4, 8, 8, 8], 16);
        assert_eq!(monos.len(), 1 + 3 + 6);
        assert!(product_monomials(&[4], 4).is_empty());
    }
}
