//! Property checks replayed over stored results.
//!
//! Small entries are checked exactly in x-coordinates. Large ones are
//! checked modulo the screening prime: the `t^s` division through a
//! truncated `t`-series at a random point, and SL2 fixity by evaluation.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::derivation::{d1, nilpotency_order, nilpotency_order_z};
use crate::error::{Error, Result};
use crate::fraction::TFraction;
use crate::grading::{grading_of, sl2_act_on_point, x_expand, z_poly, FormDegree, Sl2};
use crate::io::{Manifest, ManifestEntry};
use crate::poly::VarId;
use crate::scalar::{Coeff, Field, SCREEN_PRIME};
use crate::{Fp62, Rational, ZPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Check {
    /// The x-expansion is annihilated by `D1`.
    D1,
    /// `D2` nilpotency order equals the graded order.
    D2,
    /// `t^s` divides the numerator after substituting the `z_i`.
    Division,
    /// Invariants are fixed by unimodular substitutions; other entries by
    /// the unipotent ones that fix semi-invariants.
    Sl2,
    /// Stored gradings, denominator, and term count match the polynomial.
    Grading,
}

impl Check {
    pub const ALL: [Check; 5] = [Check::D1, Check::D2, Check::Division, Check::Sl2, Check::Grading];

    /// Parses a comma-separated list such as `d1,d2,division`.
    pub fn parse_list(s: &str) -> Result<Vec<Check>> {
        s.split(',').filter(|p| !p.trim().is_empty()).map(|p| p.trim().parse()).collect()
    }
}

impl FromStr for Check {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "d1" => Check::D1,
            "d2" => Check::D2,
            "division" => Check::Division,
            "sl2" => Check::Sl2,
            "grading" => Check::Grading,
            other => return Err(Error::UnknownName(format!("check {other}"))),
        })
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Check::D1 => "d1",
            Check::D2 => "d2",
            Check::Division => "division",
            Check::Sl2 => "sl2",
            Check::Grading => "grading",
        })
    }
}

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub entry: String,
    pub check: Check,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub outcomes: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn failed(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.outcomes.iter().filter(|o| !o.ok)
    }

    pub fn is_ok(&self) -> bool {
        self.failed().next().is_none()
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Entries with at most this many terms are checked exactly.
    pub exact_terms: usize,
    /// Number of random unimodular matrices for the SL2 check.
    pub matrices: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { exact_terms: 150, matrices: 5, seed: 0x7e51 }
    }
}

/// Runs `checks` on one fraction; `entry` supplies the stored metadata.
pub fn verify_fraction(
    name: &str,
    f: &TFraction,
    entry: Option<&ManifestEntry>,
    d: FormDegree,
    checks: &[Check],
    opts: &VerifyOptions,
) -> Vec<CheckOutcome> {
    let exact = f.num().len() <= opts.exact_terms;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ crate::io::sha256_hex(name).len() as u64 ^ hash_name(name));
    checks
        .iter()
        .map(|&check| {
            let res = match check {
                Check::D1 => check_d1(f, d, exact),
                Check::D2 => check_d2(f, d, exact),
                Check::Division => check_division(f, d, exact, &mut rng),
                Check::Sl2 => check_sl2(f, d, opts.matrices, &mut rng),
                Check::Grading => check_grading(f, d, entry),
            };
            let (ok, detail) = match res {
                Ok(detail) => (true, detail),
                Err(e) => (false, e.to_string()),
            };
            CheckOutcome { entry: name.to_string(), check, ok, detail }
        })
        .collect()
}

fn hash_name(name: &str) -> u64 {
    name.bytes().fold(0xcbf29ce484222325, |h, b| (h ^ b as u64).wrapping_mul(0x100000001b3))
}

/// Loads every entry of the manifest in `dir` and runs `checks` on it.
pub fn verify_manifest(dir: &Path, checks: &[Check], opts: &VerifyOptions) -> Result<VerifyReport> {
    let manifest = Manifest::read(&dir.join("manifest.toml"))?;
    let d = FormDegree::new(manifest.form_degree)?;
    let mut outcomes = Vec::new();
    for e in &manifest.entries {
        let f = manifest.load(dir, &e.name)?;
        outcomes.extend(verify_fraction(&e.name, &f, Some(e), d, checks, opts));
    }
    Ok(VerifyReport { outcomes })
}

fn fail(msg: String) -> Error {
    Error::Search(msg)
}

fn check_d1(f: &TFraction, d: FormDegree, exact: bool) -> Result<String> {
    if exact {
        let p = x_expand(f, d)?;
        return if d1(&p, d).is_zero() {
            Ok("exact".into())
        } else {
            Err(fail("D1 of the x-expansion is nonzero".into()))
        };
    }
    // D1 kills t and every z_i, hence every fraction in them.
    for i in 2..=d.get() as usize {
        if f.num().contains_var(VarId::z(i)) && !d1(&z_poly(i), d).is_zero() {
            return Err(fail(format!("D1(z{i}) is nonzero")));
        }
    }
    if (1..=7).any(|i| f.num().contains_var(VarId::x(i))) {
        return Err(fail("numerator contains x-variables".into()));
    }
    Ok("chain rule".into())
}

fn check_d2(f: &TFraction, d: FormDegree, exact: bool) -> Result<String> {
    let g = grading_of(f, d)?;
    let nz = nilpotency_order_z(f, d)? as i64;
    if nz != g.order {
        return Err(fail(format!("nilpotency order {nz}, graded order {}", g.order)));
    }
    if exact {
        let nx = nilpotency_order(f, d)? as i64;
        if nx != g.order {
            return Err(fail(format!("x-side nilpotency order {nx}, graded order {}", g.order)));
        }
        return Ok(format!("order {nz}, both sides"));
    }
    Ok(format!("order {nz}"))
}

fn check_division(f: &TFraction, d: FormDegree, exact: bool, rng: &mut ChaCha8Rng) -> Result<String> {
    if exact {
        x_expand(f, d)?;
        return Ok("exact".into());
    }
    let s = f.s() as usize;
    if s == 0 {
        return Ok("no denominator".into());
    }
    let x: Vec<Fp62> = (0..=d.get() as usize).map(|_| Fp62::new(rng.gen_range(1..SCREEN_PRIME))).collect();
    if series_mod_t(f.num(), &x, s).iter().any(|c| !c.is_zero()) {
        return Err(fail(format!("t^{s} does not divide the expansion")));
    }
    Ok(format!("t-series mod p to order {s}"))
}

/// Coefficients of `t^0 .. t^(s-1)` in `num(t, z(t, x))` with `x1..xd` fixed.
fn series_mod_t(num: &ZPoly, x: &[Fp62], s: usize) -> Vec<Fp62> {
    let mul = |a: &[Fp62], b: &[Fp62]| -> Vec<Fp62> {
        let mut out = vec![Fp62::zero(); s];
        for (i, ai) in a.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, bj) in b.iter().take(s - i).enumerate() {
                out[i + j] += &(*ai * *bj);
            }
        }
        out
    };
    // z_i as a polynomial in t at the fixed x.
    let zser = |i: usize| -> Vec<Fp62> {
        let mut out = vec![Fp62::zero(); s];
        for (m, c) in z_poly(i).terms() {
            let e = m.exponent(VarId::T) as usize;
            if e < s {
                let mut v = Fp62::from_bigint(c);
                for (k, xk) in x.iter().enumerate().take(i + 1).skip(1) {
                    v *= &xk.pow(m.exponent(VarId::x(k)) as u64);
                }
                out[e] += &v;
            }
        }
        out
    };
    let mut one = vec![Fp62::zero(); s];
    one[0] = Fp62::one();
    let powers: Vec<Vec<Vec<Fp62>>> = (0..=7)
        .map(|i| {
            let v = VarId::z(i.max(2));
            let top = if i >= 2 { num.degree_in(v) } else { 0 };
            let base = if i >= 2 { zser(i) } else { one.clone() };
            let mut p = vec![one.clone()];
            for _ in 0..top {
                p.push(mul(p.last().unwrap(), &base));
            }
            p
        })
        .collect();
    num.terms()
        .par_iter()
        .map(|(m, c)| {
            let shift = m.exponent(VarId::T) as usize;
            let mut acc = vec![Fp62::zero(); s];
            if shift >= s {
                return acc;
            }
            let mut prod = one.clone();
            for (i, pw) in powers.iter().enumerate().skip(2) {
                let e = m.exponent(VarId::z(i)) as usize;
                if e > 0 {
                    prod = mul(&prod, &pw[e]);
                }
            }
            let c = Fp62::from_bigint(c);
            for k in 0..s - shift {
                acc[k + shift] = prod[k] * c;
            }
            acc
        })
        .reduce(
            || vec![Fp62::zero(); s],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += &y;
                }
                a
            },
        )
}

/// Value of `f` at an x-point modulo the screening prime.
fn eval_mod(num: &crate::poly::Polynomial<Fp62>, s: u32, point: &[Fp62]) -> Fp62 {
    let zvals: Vec<Fp62> = (0..=7)
        .map(|i| {
            if (2..point.len()).contains(&i) {
                z_poly(i).reduce_mod().eval(|v| x_coord(point, v))
            } else {
                Fp62::zero()
            }
        })
        .collect();
    let n = num.eval(|v| v.z_index().map_or_else(|| x_coord(point, v), |i| zvals[i]));
    n * point[0].inv().pow(s as u64)
}

fn x_coord(point: &[Fp62], v: VarId) -> Fp62 {
    if v == VarId::T {
        point[0]
    } else {
        v.x_index().and_then(|i| point.get(i).copied()).unwrap_or_else(Fp62::zero)
    }
}

/// A random product of elementary unimodular matrices with small entries.
pub fn random_unimodular(rng: &mut impl Rng) -> Sl2 {
    let mut m = [[1i64, 0], [0, 1]];
    for k in 0..3 {
        let c: i64 = rng.gen_range(-3..=3);
        let el = if k % 2 == 0 { [[1, c], [0, 1]] } else { [[1, 0], [c, 1]] };
        m = [
            [m[0][0] * el[0][0] + m[0][1] * el[1][0], m[0][0] * el[0][1] + m[0][1] * el[1][1]],
            [m[1][0] * el[0][0] + m[1][1] * el[1][0], m[1][0] * el[0][1] + m[1][1] * el[1][1]],
        ];
    }
    Sl2::from_i64(m[0][0], m[0][1], m[1][0], m[1][1]).expect("product of elementary matrices")
}

fn check_sl2(f: &TFraction, d: FormDegree, matrices: usize, rng: &mut ChaCha8Rng) -> Result<String> {
    let g = grading_of(f, d)?;
    let num = f.num().reduce_mod::<SCREEN_PRIME>();
    let dd = d.get() as usize;
    let mut tried = 0;
    while tried < matrices {
        let m = if g.order == 0 {
            random_unimodular(rng)
        } else {
            // Semi-invariants are fixed by Y1 -> Y1 + b Y2, which keeps t.
            Sl2::from_i64(1, rng.gen_range(1..=4), 0, 1)?
        };
        let point: Vec<Rational> = (0..=dd).map(|_| Rational::from_integer(rng.gen_range(-9i64..=9).into())).collect();
        let image = sl2_act_on_point(&m, d, &point);
        if point[0].is_zero() || image[0].is_zero() {
            continue;
        }
        tried += 1;
        let red = |p: &[Rational]| -> Vec<Fp62> {
            p.iter().map(|q| Fp62::from_ratio(q.numer(), q.denom()).expect("integer point")).collect()
        };
        let (a, b) = (eval_mod(&num, f.s(), &red(&point)), eval_mod(&num, f.s(), &red(&image)));
        if a != b {
            return Err(fail(format!("value changes under {:?}", [&m.a, &m.b, &m.c, &m.e])));
        }
    }
    Ok(if g.order == 0 { format!("{matrices} unimodular matrices") } else { format!("{matrices} unipotent matrices") })
}

fn check_grading(f: &TFraction, d: FormDegree, entry: Option<&ManifestEntry>) -> Result<String> {
    let g = grading_of(f, d)?;
    if g.order != d.as_i64() * g.degree - 2 * g.weight {
        return Err(fail("order formula fails".into()));
    }
    if let Some(e) = entry {
        let stored = (e.degree, e.weight, e.order, e.denominator_exponent, e.terms);
        let found = (g.degree, g.weight, g.order, f.s(), f.num().len());
        if stored != found {
            return Err(fail(format!("manifest has {stored:?}, polynomial gives {found:?}")));
        }
    }
    if !f.num().primitive_part().1.is_one() {
        return Err(fail("numerator is not primitive".into()));
    }
    Ok(g.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frac(s: &str, e: u32) -> TFraction {
        TFraction::new(s.parse().unwrap(), e)
    }

    #[test]
    fn dv1_passes_every_check() {
        let dv1 = frac("3*z2^2 + z4", 2);
        let opts = VerifyOptions::default();
        for o in verify_fraction("dv_1", &dv1, None, FormDegree::SEPTIC, &Check::ALL, &opts) {
            assert!(o.ok, "{o:?}");
        }
    }

    #[test]
    fn series_check_agrees_with_exact_division() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let good = frac("3*z2^2 + z4", 2);
        assert!(check_division(&good, FormDegree::SEPTIC, false, &mut rng).is_ok());
        // Over t^3 the expansion is not a polynomial.
        let bad = TFraction::new("3*z2^2 + z4".parse().unwrap(), 3);
        assert!(x_expand(&bad, FormDegree::SEPTIC).is_err());
        assert!(check_division(&bad, FormDegree::SEPTIC, false, &mut rng).is_err());
    }

    #[test]
    fn non_invariant_fails_unimodular_check() {
        // z2 is a semi-invariant but not an invariant.
        let z2 = frac("z2", 0);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        assert!(check_sl2(&z2, FormDegree::SEPTIC, 5, &mut rng).is_ok());
        let mut found = false;
        for _ in 0..5 {
            let m = random_unimodular(&mut rng);
            let p: Vec<Rational> = (1..=8).map(|i| Rational::from_integer(i.into())).collect();
            let img = sl2_act_on_point(&m, FormDegree::SEPTIC, &p);
            if img[0].is_zero() {
                continue;
            }
            let red = |p: &[Rational]| -> Vec<Fp62> {
                p.iter().map(|q| Fp62::from_ratio(q.numer(), q.denom()).unwrap()).collect()
            };
            let num = z2.num().reduce_mod::<SCREEN_PRIME>();
            found |= eval_mod(&num, 0, &red(&p)) != eval_mod(&num, 0, &red(&img));
        }
        assert!(found);
    }

    #[test]
    fn grading_mismatch_is_reported() {
        let dv1 = frac("3*z2^2 + z4", 2);
        let mut e = ManifestEntry {
            name: "dv_1".into(),
            degree: 2,
            weight: 4,
            order: 6,
            denominator_exponent: 2,
            terms: 2,
            construction: "[t,t]^4".into(),
            hash: String::new(),
            path: String::new(),
        };
        assert!(check_grading(&dv1, FormDegree::SEPTIC, Some(&e)).is_ok());
        e.terms = 3;
        assert!(check_grading(&dv1, FormDegree::SEPTIC, Some(&e)).is_err());
    }
}
