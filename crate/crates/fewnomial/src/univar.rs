//! Univariate root isolation: exponential sums and sums of products of
//! linear forms with real exponents, both through the Rolle recursion.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::num::{compensated_sum, scaled_sum, serialize_biguint, Scaled};
use crate::system::TAU_EXP;

pub const TAU_ROOT: f64 = 1e-12;
pub const TAU_RES: f64 = 1e-10;
/// Relative size under which a value at a critical point counts as zero.
pub const TAU_TOUCH: f64 = 1e-10;
pub const DEGREE_CAP: usize = 10_000;
const MONOMIAL_CAP: usize = 1_000_000;
const DROP: f64 = 64.0 * f64::EPSILON;

/// Number of sign changes in the sequence, zeros skipped.
pub fn sign_alternations(coeffs: &[f64]) -> usize {
    let mut last = 0.0f64;
    let mut count = 0;
    for &c in coeffs {
        if c == 0.0 {
            continue;
        }
        if last != 0.0 && (c > 0.0) != (last > 0.0) {
            count += 1;
        }
        last = c;
    }
    count
}

/// `Σ c_i x^{a_i}` with strictly increasing exponents.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentialSum {
    terms: Vec<(f64, f64)>,
}

impl ExponentialSum {
    /// Sorts by exponent and merges exponents closer than `TAU_EXP`.
    pub fn new(terms: &[(f64, f64)]) -> Result<ExponentialSum> {
        if terms.iter().any(|(c, a)| !c.is_finite() || !a.is_finite()) {
            return Err(Error::Validation(
                "non-finite coefficient or exponent".into(),
            ));
        }
        let mut sorted: Vec<(f64, f64)> = terms.to_vec();
        sorted.sort_by(|x, y| x.1.total_cmp(&y.1));
        let mut out: Vec<(f64, f64)> = Vec::new();
        for (c, a) in sorted {
            match out.last_mut() {
                Some(last) if (a - last.1).abs() <= TAU_EXP => last.0 += c,
                _ => out.push((c, a)),
            }
        }
        out.retain(|(c, _)| *c != 0.0);
        Ok(ExponentialSum { terms: out })
    }

    pub fn terms(&self) -> &[(f64, f64)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        let mut v: Vec<f64> = self.terms.iter().map(|(c, a)| c * x.powf(*a)).collect();
        compensated_sum(&mut v)
    }

    pub fn evaluate_scaled(&self, x: f64) -> Scaled {
        let lx = x.ln();
        let add: Vec<(f64, f64)> = self.terms.iter().map(|(c, a)| (*c, a * lx)).collect();
        scaled_sum(&add)
    }
}

pub fn descartes_bound(f: &ExponentialSum) -> usize {
    sign_alternations(&f.terms.iter().map(|t| t.0).collect::<Vec<_>>())
}

/// The form `u + v t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearForm {
    pub u: f64,
    pub v: f64,
}

impl LinearForm {
    pub fn new(u: f64, v: f64) -> LinearForm {
        LinearForm { u, v }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.u + self.v * t
    }
}

/// Homogeneous polynomial in the symbols S_1..S_n, keyed by multidegree.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct HomPoly {
    nvars: usize,
    coeffs: BTreeMap<Vec<u32>, f64>,
}

#[derive(Serialize, Deserialize)]
struct MonoDoc {
    c: f64,
    deg: Vec<u32>,
}

impl Serialize for HomPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<MonoDoc> = self
            .coeffs
            .iter()
            .map(|(d, c)| MonoDoc {
                c: *c,
                deg: d.clone(),
            })
            .collect();
        v.serialize(s)
    }
}

impl HomPoly {
    pub fn new(nvars: usize, monomials: &[(f64, Vec<u32>)]) -> Result<HomPoly> {
        let mut coeffs: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        let mut degree = None;
        for (c, d) in monomials {
            if d.len() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    found: d.len(),
                });
            }
            if !c.is_finite() {
                return Err(Error::Validation("non-finite coefficient".into()));
            }
            let deg: u32 = d.iter().sum();
            if *degree.get_or_insert(deg) != deg {
                return Err(Error::Validation(
                    "coefficient polynomial is not homogeneous".into(),
                ));
            }
            *coeffs.entry(d.clone()).or_insert(0.0) += c;
        }
        coeffs.retain(|_, c| *c != 0.0);
        Ok(HomPoly { nvars, coeffs })
    }

    pub fn constant(nvars: usize, c: f64) -> HomPoly {
        let mut coeffs = BTreeMap::new();
        if c != 0.0 {
            coeffs.insert(vec![0; nvars], c);
        }
        HomPoly { nvars, coeffs }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs
            .keys()
            .next()
            .map(|d| d.iter().sum::<u32>() as usize)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn monomials(&self) -> impl Iterator<Item = (&Vec<u32>, &f64)> {
        self.coeffs.iter()
    }

    pub fn eval(&self, s: &[f64]) -> f64 {
        let mut v: Vec<f64> = self
            .coeffs
            .iter()
            .map(|(d, c)| {
                c * d
                    .iter()
                    .zip(s)
                    .map(|(e, x)| x.powi(*e as i32))
                    .product::<f64>()
            })
            .collect();
        compensated_sum(&mut v)
    }
}

/// One summand `p(L(t)) Π L_j(t)^{α_j}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LfpTerm {
    pub p: HomPoly,
    pub alpha: Vec<f64>,
}

/// `Σ_i p_i(L(t)) Π_j L_j(t)^{α_ij}` over shared linear forms.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinearFormProduct {
    forms: Vec<LinearForm>,
    terms: Vec<LfpTerm>,
    degree: usize,
}

impl LinearFormProduct {
    pub fn new(forms: Vec<LinearForm>, terms: Vec<LfpTerm>) -> Result<LinearFormProduct> {
        let n = forms.len();
        if n == 0 {
            return Err(Error::Validation(
                "at least one linear form is needed".into(),
            ));
        }
        if forms.iter().any(|f| f.u == 0.0 && f.v == 0.0) {
            return Err(Error::Validation("linear form (0, 0)".into()));
        }
        let mut degree = None;
        let mut kept = Vec::new();
        for t in terms {
            if t.alpha.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: t.alpha.len(),
                });
            }
            if t.p.nvars != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: t.p.nvars,
                });
            }
            if t.alpha.iter().any(|a| !a.is_finite()) {
                return Err(Error::Validation("non-finite exponent".into()));
            }
            let Some(d) = t.p.degree() else { continue };
            if *degree.get_or_insert(d) != d {
                return Err(Error::Validation(
                    "coefficient polynomials differ in degree".into(),
                ));
            }
            kept.push(t);
        }
        Ok(LinearFormProduct {
            forms,
            terms: kept,
            degree: degree.unwrap_or(0),
        })
    }

    /// Scalar coefficients: `Σ c_i Π L_j^{α_ij}`.
    pub fn scalar(forms: Vec<LinearForm>, terms: &[(f64, Vec<f64>)]) -> Result<LinearFormProduct> {
        let n = forms.len();
        let t = terms
            .iter()
            .map(|(c, a)| LfpTerm {
                p: HomPoly::constant(n, *c),
                alpha: a.clone(),
            })
            .collect();
        LinearFormProduct::new(forms, t)
    }

    pub fn forms(&self) -> &[LinearForm] {
        &self.forms
    }

    pub fn terms(&self) -> &[LfpTerm] {
        &self.terms
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `{t : L_j(t) > 0 for all j}` as an open interval, if nonempty.
    pub fn positivity_interval(&self) -> Option<(f64, f64)> {
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for f in &self.forms {
            if f.v > 0.0 {
                lo = lo.max(-f.u / f.v);
            } else if f.v < 0.0 {
                hi = hi.min(-f.u / f.v);
            } else if f.u <= 0.0 {
                return None;
            }
        }
        (lo < hi).then_some((lo, hi))
    }

    pub fn evaluate_scaled(&self, t: f64) -> Scaled {
        Level {
            poly: Vec::new(),
            terms: self.terms.clone(),
        }
        .eval(&self.forms, t)
    }

    pub fn evaluate(&self, t: f64) -> f64 {
        self.evaluate_scaled(t).value()
    }

    /// Term-wise derivative; every exponent drops by one.
    pub fn derivative(&self) -> LinearFormProduct {
        let terms: Vec<LfpTerm> = self
            .terms
            .iter()
            .filter_map(|t| lfp_differentiate(t, &self.forms))
            .collect();
        let degree = terms
            .first()
            .and_then(|t| t.p.degree())
            .unwrap_or(self.degree + self.forms.len() - 1);
        LinearFormProduct {
            forms: self.forms.clone(),
            terms,
            degree,
        }
    }
}

/// d/dt [p(L) Π L^α] = q(L) Π L^{α-1} with
/// q = (Σ_j v_j ∂p/∂S_j)·S_1⋯S_n + p·Σ_i α_i v_i Π_{j≠i} S_j.
/// Returns `None` when q vanishes identically.
pub fn lfp_differentiate(term: &LfpTerm, forms: &[LinearForm]) -> Option<LfpTerm> {
    let n = forms.len();
    let mut acc: BTreeMap<Vec<u32>, (Vec<f64>, f64)> = BTreeMap::new();
    let mut push = |d: Vec<u32>, c: f64| {
        let e = acc.entry(d).or_insert((Vec::new(), 0.0));
        e.0.push(c);
        e.1 += c.abs();
    };
    for (deg, &c) in term.p.monomials() {
        for j in 0..n {
            if deg[j] > 0 && forms[j].v != 0.0 {
                let d: Vec<u32> = (0..n).map(|k| deg[k] + 1 - u32::from(k == j)).collect();
                push(d, c * deg[j] as f64 * forms[j].v);
            }
        }
        for i in 0..n {
            let w = term.alpha[i] * forms[i].v;
            if w != 0.0 {
                let d: Vec<u32> = (0..n).map(|k| deg[k] + u32::from(k != i)).collect();
                push(d, c * w);
            }
        }
    }
    let mut coeffs = BTreeMap::new();
    for (d, (mut parts, abs)) in acc {
        let s = compensated_sum(&mut parts);
        if s.abs() > DROP * abs {
            coeffs.insert(d, s);
        }
    }
    if coeffs.is_empty() {
        return None;
    }
    Some(LfpTerm {
        p: HomPoly { nvars: n, coeffs },
        alpha: term.alpha.iter().map(|a| a - 1.0).collect(),
    })
}

/// Values of the unrolled recursion and of its closed form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RolleBound {
    #[serde(serialize_with = "serialize_biguint")]
    pub recursion: BigUint,
    #[serde(serialize_with = "serialize_biguint")]
    pub closed_form: BigUint,
}

/// A(1,D) = D and A(m,D) = A(m-1, nD+n-1) + D + 1, with the closed form
/// (1+n+⋯+n^m)(D+1) - 1.
pub fn rolle_bound(m: usize, n: usize, d: usize) -> Result<RolleBound> {
    if m == 0 || n == 0 {
        return Err(Error::Domain("rolle bound needs m >= 1 and n >= 1".into()));
    }
    let nb = BigUint::from(n);
    let mut deg = BigUint::from(d);
    let mut total = BigUint::zero();
    for _ in 1..m {
        total += &deg + 1u32;
        deg = &nb * &deg + &nb - 1u32;
    }
    total += &deg;
    let mut geo = BigUint::zero();
    let mut pw = BigUint::one();
    for _ in 0..=m {
        geo += &pw;
        pw *= &nb;
    }
    let closed_form = geo * (BigUint::from(d) + 1u32) - 1u32;
    Ok(RolleBound {
        recursion: total,
        closed_form,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Root {
    pub t: f64,
    /// |f(t)| relative to the sum of absolute term values.
    pub residual: f64,
    pub suspect: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCite {
    #[serde(serialize_with = "serialize_biguint")]
    pub value: BigUint,
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootReport {
    pub interval: [f64; 2],
    pub roots: Vec<Root>,
    pub certified: bool,
    /// Range for the true number of roots, counting each suspect root as 0 to 2.
    pub count_range: [usize; 2],
    pub bound: BoundCite,
    pub diagnostics: Vec<String>,
}

impl RootReport {
    pub fn count(&self) -> usize {
        self.roots.len()
    }

    pub fn values(&self) -> Vec<f64> {
        self.roots.iter().map(|r| r.t).collect()
    }

    fn empty(interval: [f64; 2], bound: BoundCite) -> RootReport {
        RootReport {
            interval,
            roots: vec![],
            certified: true,
            count_range: [0, 0],
            bound,
            diagnostics: vec![],
        }
    }
}

/// `poly(t) + Σ p(L) Π L^α`, the shape every derivative level takes after
/// normalizing by the first term.
#[derive(Clone, Debug)]
struct Level {
    poly: Vec<f64>,
    terms: Vec<LfpTerm>,
}

impl Level {
    fn eval(&self, forms: &[LinearForm], t: f64) -> Scaled {
        let logs: Vec<f64> = forms.iter().map(|f| f.eval(t).ln()).collect();
        let mut add: Vec<(f64, f64)> = Vec::new();
        let lt = t.abs().ln();
        for (j, &c) in self.poly.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            if j == 0 {
                add.push((c, 0.0));
            } else if t != 0.0 {
                let s = if t < 0.0 && j % 2 == 1 { -1.0 } else { 1.0 };
                add.push((s * c, j as f64 * lt));
            }
        }
        for term in &self.terms {
            let base: f64 = term
                .alpha
                .iter()
                .zip(&logs)
                .map(|(a, l)| if *a == 0.0 { 0.0 } else { a * l })
                .sum();
            for (d, &c) in term.p.monomials() {
                let l: f64 = d
                    .iter()
                    .zip(&logs)
                    .map(|(e, l)| if *e == 0 { 0.0 } else { *e as f64 * l })
                    .sum();
                add.push((c, base + l));
            }
        }
        scaled_sum(&add)
    }

    fn derivative(&self, forms: &[LinearForm]) -> Level {
        let poly = self
            .poly
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| j as f64 * c)
            .collect();
        let terms = self
            .terms
            .iter()
            .filter_map(|t| lfp_differentiate(t, forms))
            .collect();
        Level { poly, terms }
    }
}

/// Expand p(L(t)) into ascending coefficients in t, trimming cancelled ones.
fn expand(p: &HomPoly, forms: &[LinearForm]) -> Vec<f64> {
    let deg = p.degree().unwrap_or(0);
    let mut parts: Vec<Vec<f64>> = vec![Vec::new(); deg + 1];
    for (d, &c) in p.monomials() {
        let mut poly = vec![c];
        for (j, &e) in d.iter().enumerate() {
            for _ in 0..e {
                let f = forms[j];
                let mut next = vec![0.0; poly.len() + 1];
                for (k, &a) in poly.iter().enumerate() {
                    next[k] += a * f.u;
                    next[k + 1] += a * f.v;
                }
                poly = next;
            }
        }
        for (k, a) in poly.into_iter().enumerate() {
            parts[k].push(a);
        }
    }
    let mut out: Vec<f64> = parts
        .into_iter()
        .map(|mut v| {
            let abs: f64 = v.iter().map(|x| x.abs()).sum();
            let s = compensated_sum(&mut v);
            if s.abs() > DROP * abs {
                s
            } else {
                0.0
            }
        })
        .collect();
    while out.last() == Some(&0.0) {
        out.pop();
    }
    out
}

struct Isolator<'a> {
    forms: &'a [LinearForm],
    lo: f64,
    hi: f64,
    certified: bool,
    diagnostics: Vec<String>,
}

#[derive(Clone, Copy, Debug)]
struct Found {
    t: f64,
    suspect: bool,
}

impl<'a> Isolator<'a> {
    /// Roots of `Σ terms` strictly inside (lo, hi).
    fn roots(&mut self, terms: &[LfpTerm], depth: usize) -> Result<Vec<Found>> {
        let mut idx = 0;
        let level0 = loop {
            let Some(first) = terms.get(idx) else {
                return Err(Error::Continuum(
                    "function vanishes identically on the interval".into(),
                ));
            };
            let poly = expand(&first.p, self.forms);
            if !poly.is_empty() {
                let rest = terms[idx + 1..]
                    .iter()
                    .map(|t| LfpTerm {
                        p: t.p.clone(),
                        alpha: t
                            .alpha
                            .iter()
                            .zip(&first.alpha)
                            .map(|(a, b)| a - b)
                            .collect(),
                    })
                    .collect();
                break Level { poly, terms: rest };
            }
            self.diagnostics.push(format!(
                "depth {depth}: leading coefficient vanishes on the forms, term dropped"
            ));
            idx += 1;
        };
        if let Some(d) = level0.terms.first().and_then(|t| t.p.degree()) {
            if d > DEGREE_CAP {
                return Err(Error::DegreeCap(d));
            }
        }
        if level0.terms.iter().map(|t| t.p.len()).sum::<usize>() > MONOMIAL_CAP {
            return Err(Error::DegreeCap(level0.terms[0].p.degree().unwrap_or(0)));
        }
        // Differentiating deg(P)+1 times removes the leading polynomial.
        let mut chain = vec![level0];
        for _ in 0..chain[0].poly.len() {
            let next = chain.last().expect("nonempty").derivative(self.forms);
            chain.push(next);
        }
        let last = chain.last().expect("nonempty");
        debug_assert!(last.poly.is_empty());
        let mut crit = if last.terms.is_empty() {
            Vec::new()
        } else {
            self.roots(&last.terms.clone(), depth + 1)?
        };
        for k in (0..chain.len() - 1).rev() {
            crit = self.bracket(&chain[k], &crit, depth, k);
        }
        Ok(crit)
    }

    fn bracket(&mut self, level: &Level, crit: &[Found], depth: usize, k: usize) -> Vec<Found> {
        let mut pts = vec![self.lo];
        pts.extend(
            crit.iter()
                .map(|c| c.t)
                .filter(|t| *t > self.lo && *t < self.hi),
        );
        pts.push(self.hi);
        let mut signs = Vec::with_capacity(pts.len());
        let mut out = Vec::new();
        for (i, &t) in pts.iter().enumerate() {
            let v = level.eval(self.forms, t);
            let interior = i > 0 && i + 1 < pts.len();
            if interior && (v.sign() == 0 || v.is_negligible(TAU_TOUCH)) {
                signs.push(0);
                out.push(Found { t, suspect: true });
                self.certified = false;
                self.diagnostics.push(format!(
                    "depth {depth} level {k}: value near zero at critical point {t:e}"
                ));
            } else {
                signs.push(v.sign());
            }
        }
        for i in 0..pts.len() - 1 {
            if signs[i] * signs[i + 1] < 0 {
                let t = self.bisect(level, pts[i], pts[i + 1], signs[i]);
                out.push(Found { t, suspect: false });
            }
        }
        out.sort_by(|a, b| a.t.total_cmp(&b.t));
        out
    }

    fn bisect(&self, level: &Level, mut a: f64, mut b: f64, sa: i32) -> f64 {
        for _ in 0..400 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            let s = level.eval(self.forms, m).sign();
            if s == 0 {
                return m;
            }
            if s == sa {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    }
}

/// Open interval shrunk away from its ends by `10·TAU_ROOT`; an infinite end
/// sits where t/(1+t) comes within that distance of 1.
fn effective_interval(lo: f64, hi: f64) -> (f64, f64) {
    let gap = 10.0 * TAU_ROOT;
    let far = (1.0 - gap) / gap;
    let elo = if lo.is_finite() {
        lo + gap * lo.abs().max(1.0)
    } else {
        hi.min(0.0) - far
    };
    let ehi = if hi.is_finite() {
        hi - gap * hi.abs().max(1.0)
    } else {
        lo.max(0.0) + far
    };
    (elo, ehi)
}

fn finish(
    f: &LinearFormProduct,
    interval: [f64; 2],
    found: Result<(Vec<Found>, bool, Vec<String>)>,
    bound: BoundCite,
) -> Result<RootReport> {
    let (found, mut certified, mut diagnostics) = found?;
    let roots: Vec<Root> = found
        .iter()
        .map(|r| Root {
            t: r.t,
            residual: f.evaluate_scaled(r.t).relative(),
            suspect: r.suspect,
        })
        .collect();
    for r in &roots {
        if !r.suspect && r.residual > TAU_RES {
            // A sign change still proves a root; the location is only looser.
            diagnostics.push(format!(
                "root {:e} has relative residual {:e}",
                r.t, r.residual
            ));
        }
    }
    let simple = roots.iter().filter(|r| !r.suspect).count();
    let suspect = roots.len() - simple;
    if BigUint::from(roots.len()) > bound.value {
        certified = false;
        diagnostics.push("root count exceeds the certifying bound".into());
    }
    Ok(RootReport {
        interval,
        roots,
        certified,
        count_range: [simple, simple + 2 * suspect],
        bound,
        diagnostics,
    })
}

fn run(f: &LinearFormProduct, lo: f64, hi: f64) -> Result<(Vec<Found>, bool, Vec<String>)> {
    let (elo, ehi) = effective_interval(lo, hi);
    if !(elo < ehi) || f.is_empty() {
        return Ok((Vec::new(), true, Vec::new()));
    }
    let mut iso = Isolator {
        forms: &f.forms,
        lo: elo,
        hi: ehi,
        certified: true,
        diagnostics: Vec::new(),
    };
    let roots = iso.roots(&f.terms, 0)?;
    Ok((roots, iso.certified, iso.diagnostics))
}

/// Isolate the roots of f in the open interval I, which defaults to the set
/// where every form is positive.
pub fn isolate_lfp_roots(
    f: &LinearFormProduct,
    interval: Option<(f64, f64)>,
) -> Result<RootReport> {
    let rb = rolle_bound(f.len().max(1), f.forms.len(), f.degree)?;
    let bound = BoundCite {
        value: rb.recursion,
        source: "rolle-recursion".into(),
    };
    let Some((plo, phi)) = f.positivity_interval() else {
        return Ok(RootReport::empty([f64::NAN, f64::NAN], bound));
    };
    let (lo, hi) = match interval {
        Some((a, b)) => (a.max(plo), b.min(phi)),
        None => (plo, phi),
    };
    if !(lo < hi) {
        return Ok(RootReport::empty([lo, hi], bound));
    }
    finish(f, [lo, hi], run(f, lo, hi), bound)
}

/// Isolate positive roots of an exponential sum in (lo, hi), certified
/// against Descartes' bound.
pub fn isolate_expsum_roots(f: &ExponentialSum, lo: f64, hi: f64) -> Result<RootReport> {
    if !(lo >= 0.0) || !(hi > lo) {
        return Err(Error::Domain(format!(
            "interval ({lo}, {hi}) is not inside (0, inf)"
        )));
    }
    let bound = BoundCite {
        value: BigUint::from(descartes_bound(f)),
        source: "descartes".into(),
    };
    let terms: Vec<(f64, Vec<f64>)> = f.terms.iter().map(|(c, a)| (*c, vec![*a])).collect();
    let lfp = LinearFormProduct::scalar(vec![LinearForm::new(0.0, 1.0)], &terms)?;
    if f.len() <= 1 {
        return Ok(RootReport::empty([lo, hi], bound));
    }
    finish(&lfp, [lo, hi], run(&lfp, lo, hi), bound)
}
