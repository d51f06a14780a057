//! Root counting for square systems: reduction to one variable along the
//! line cut out by affine members, the trinomial-pair pipeline with its case
//! metadata, triangular back-substitution and a few exact shortcuts.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::num::{complement_basis, rank};
use crate::polytope::{
    is_pyramidal, newton_polygon, system_mixed_volume_zero, MixedVolumeZeroWitness, PolygonKind,
    TAU_RANK,
};
use crate::system::{Fewnomial, FewnomialSystem, Term, TAU_EXP};
use crate::transform::{canonicalize_trinomial_pair, Canonicalization, MonomialMap};
use crate::univar::{
    isolate_expsum_roots, isolate_lfp_roots, rolle_bound, BoundCite, ExponentialSum, LinearForm,
    LinearFormProduct, RootReport,
};
use num_bigint::BigUint;

/// `1 − A t^a (1−t)^b − B t^c (1−t)^d` on (0, 1).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrinomialCanonical {
    /// (A, B), both positive.
    pub coeffs: [f64; 2],
    /// ((a, b), (c, d)).
    pub exponents: [[f64; 2]; 2],
    /// Sends (t, 1 − t) back to the original coordinates.
    pub map: MonomialMap,
    pub order: [usize; 2],
}

impl TrinomialCanonical {
    pub fn new(coeff_a: f64, coeff_b: f64, abcd: [f64; 4]) -> Result<TrinomialCanonical> {
        if !(coeff_a > 0.0 && coeff_b > 0.0) {
            return Err(Error::Domain(
                "canonical coefficients must be positive".into(),
            ));
        }
        Ok(TrinomialCanonical {
            coeffs: [coeff_a, coeff_b],
            exponents: [[abcd[0], abcd[1]], [abcd[2], abcd[3]]],
            map: MonomialMap::identity(2),
            order: [0, 1],
        })
    }

    pub fn abcd(&self) -> [f64; 4] {
        [
            self.exponents[0][0],
            self.exponents[0][1],
            self.exponents[1][0],
            self.exponents[1][1],
        ]
    }

    pub fn to_lfp(&self) -> LinearFormProduct {
        LinearFormProduct::scalar(
            vec![LinearForm::new(0.0, 1.0), LinearForm::new(1.0, -1.0)],
            &[
                (1.0, vec![0.0, 0.0]),
                (-self.coeffs[0], self.exponents[0].to_vec()),
                (-self.coeffs[1], self.exponents[1].to_vec()),
            ],
        )
        .expect("valid forms")
    }

    pub fn evaluate(&self, t: f64) -> f64 {
        let [a, b, c, d] = self.abcd();
        1.0 - self.coeffs[0] * t.powf(a) * (1.0 - t).powf(b)
            - self.coeffs[1] * t.powf(c) * (1.0 - t).powf(d)
    }

    pub fn isolate(&self) -> Result<RootReport> {
        let mut r = isolate_lfp_roots(&self.to_lfp(), Some((0.0, 1.0)))?;
        r.bound = BoundCite {
            value: BigUint::from(5u32),
            source: "trinomial-pair".into(),
        };
        if r.roots.len() > 5 {
            r.certified = false;
            r.diagnostics
                .push("more than five roots for a trinomial pair".into());
        }
        Ok(r)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum CanonicalOutcome {
    Canonical(TrinomialCanonical),
    Infeasible { member: usize },
    Segment,
}

/// Read off (A, B, a, b, c, d) from the canonical form of a (3,3) system.
pub fn trinomial_canonical(f: &FewnomialSystem) -> Result<CanonicalOutcome> {
    match canonicalize_trinomial_pair(f)? {
        Canonicalization::Infeasible { member } => Ok(CanonicalOutcome::Infeasible { member }),
        Canonicalization::Segment => Ok(CanonicalOutcome::Segment),
        Canonicalization::Canonical { system, map, order } => {
            let g2 = &system.members()[1];
            let mut rest: Vec<&Term> = g2
                .terms()
                .iter()
                .filter(|t| t.exponent.iter().any(|v| *v != 0.0))
                .collect();
            rest.sort_by(|x, y| {
                x.exponent[0]
                    .total_cmp(&y.exponent[0])
                    .then(x.exponent[1].total_cmp(&y.exponent[1]))
            });
            debug_assert_eq!(rest.len(), 2);
            debug_assert!(rest.iter().all(|t| t.coeff < 0.0));
            Ok(CanonicalOutcome::Canonical(TrinomialCanonical {
                coeffs: [-rest[0].coeff, -rest[1].coeff],
                exponents: [
                    [rest[0].exponent[0], rest[0].exponent[1]],
                    [rest[1].exponent[0], rest[1].exponent[1]],
                ],
                map,
                order,
            }))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CaseTag {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseInfo {
    pub tag: CaseTag,
    /// The orbit element matching the table row.
    pub representative: [f64; 4],
    pub swapped_terms: bool,
    pub reflected: bool,
}

fn row_of(s: [bool; 4]) -> Option<CaseTag> {
    // true means positive
    match s {
        [true, true, true, false] => Some(CaseTag::A),
        [true, false, true, false] => Some(CaseTag::B),
        [true, true, false, false] => Some(CaseTag::C),
        [true, true, true, true] => Some(CaseTag::D),
        [false, false, false, false] => Some(CaseTag::E),
        [true, false, false, false] => Some(CaseTag::F),
        [true, false, false, true] => Some(CaseTag::G),
        _ => None,
    }
}

/// Case of the sign pattern of (a, b, c, d) up to swapping the two terms
/// and reflecting t ↦ 1 − t.
pub fn classify_case(a: f64, b: f64, c: f64, d: f64) -> CaseInfo {
    let v = [a, b, c, d];
    if v.iter().any(|x| x.abs() <= TAU_EXP) {
        return CaseInfo {
            tag: CaseTag::H,
            representative: v,
            swapped_terms: false,
            reflected: false,
        };
    }
    let mut best: Option<CaseInfo> = None;
    for swapped in [false, true] {
        for reflected in [false, true] {
            let mut w = if swapped { [c, d, a, b] } else { v };
            if reflected {
                w = [w[1], w[0], w[3], w[2]];
            }
            if let Some(tag) = row_of(w.map(|x| x > 0.0)) {
                let cand = CaseInfo {
                    tag,
                    representative: w,
                    swapped_terms: swapped,
                    reflected,
                };
                if best.as_ref().map_or(true, |b| (tag as u8) < (b.tag as u8)) {
                    best = Some(cand);
                }
            }
        }
    }
    best.expect("the orbit of every sign pattern meets a table row")
}

/// The two auxiliary cubics, coefficients listed from u³ down to u⁰.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CubicPair {
    pub f: [f64; 4],
    pub f_hat: [f64; 4],
    /// Positive roots of each cubic; `None` if it vanishes identically.
    pub positive_roots: [Option<usize>; 2],
    /// The larger of the two counts.
    pub m: Option<usize>,
}

pub fn cubic_f_coeffs(a: f64, b: f64, c: f64, d: f64) -> Result<CubicPair> {
    let f = [
        -a * (a - c) * (a - c - 1.0),
        (a - c) * (2.0 * a * (b - d + 1.0) + b * (a - c + 1.0)),
        (d - b) * (a * (b - d + 1.0) + 2.0 * b * (a - c + 1.0)),
        b * (b - d) * (b - d - 1.0),
    ];
    let f_hat = [
        -c * (c - a) * (c - a - 1.0),
        (c - a) * (2.0 * c * (d - b + 1.0) + d * (c - a + 1.0)),
        (b - d) * (c * (d - b + 1.0) + 2.0 * d * (c - a + 1.0)),
        d * (d - b) * (d - b - 1.0),
    ];
    let count = |q: &[f64; 4]| -> Result<Option<usize>> {
        let terms: Vec<(f64, f64)> = q
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(i, c)| (*c, (3 - i) as f64))
            .collect();
        if terms.is_empty() {
            return Ok(None);
        }
        let r = isolate_expsum_roots(&ExponentialSum::new(&terms)?, 0.0, f64::INFINITY)?;
        Ok(Some(r.count()))
    };
    let positive_roots = [count(&f)?, count(&f_hat)?];
    let m = match positive_roots {
        [Some(x), Some(y)] => Some(x.max(y)),
        _ => None,
    };
    Ok(CubicPair {
        f,
        f_hat,
        positive_roots,
        m,
    })
}

/// The univariate form of a system whose first n − 1 members live on a
/// common simplex, up to translation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Reduction {
    pub lfp: LinearFormProduct,
    pub interval: Option<(f64, f64)>,
    /// Mapped coordinates are the linear forms evaluated at t.
    pub map: MonomialMap,
    /// Index of the member restricted to the line.
    pub last: usize,
    /// Index of the mapped coordinate used as the parameter t.
    pub parameter: usize,
}

impl Reduction {
    pub fn point(&self, t: f64) -> Result<Vec<f64>> {
        let y: Vec<f64> = self.lfp.forms().iter().map(|f| f.eval(t)).collect();
        self.map.to_original(&y)
    }
}

fn affinely_independent(pts: &[Vec<f64>], n: usize) -> bool {
    if pts.len() > n + 1 {
        return false;
    }
    let diffs: Vec<Vec<f64>> = pts
        .iter()
        .skip(1)
        .map(|p| p.iter().zip(&pts[0]).map(|(a, b)| a - b).collect())
        .collect();
    rank(&diffs, n, TAU_RANK) == diffs.len()
}

fn same_point(a: &[f64], b: &[f64]) -> bool {
    a.iter()
        .zip(b)
        .all(|(x, y)| (x - y).abs() <= TAU_EXP * (1.0 + y.abs()))
}

/// A common affinely independent (n+1)-point set containing a translate of
/// every given support, with the translations used.
pub(crate) fn shared_simplex(
    supports: &[Vec<Vec<f64>>],
    n: usize,
) -> Option<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    let mut order: Vec<usize> = (0..supports.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(supports[i].len()));
    let first = &supports[order[0]];
    if !affinely_independent(first, n) {
        return None;
    }
    let mut simplex = first.clone();
    let mut shifts = vec![vec![0.0; n]; supports.len()];
    for &i in &order[1..] {
        let s = &supports[i];
        let mut best: Option<(Vec<Vec<f64>>, Vec<f64>)> = None;
        for alpha in &simplex {
            let shift: Vec<f64> = s[0].iter().zip(alpha).map(|(p, a)| p - a).collect();
            let moved: Vec<Vec<f64>> = s
                .iter()
                .map(|p| p.iter().zip(&shift).map(|(x, y)| x - y).collect())
                .collect();
            let fresh: Vec<Vec<f64>> = moved
                .iter()
                .filter(|p| !simplex.iter().any(|q| same_point(p, q)))
                .cloned()
                .collect();
            let mut grown = simplex.clone();
            grown.extend(fresh.iter().cloned());
            if affinely_independent(&grown, n)
                && best.as_ref().map_or(true, |(g, _)| grown.len() < g.len())
            {
                best = Some((grown, shift));
            }
        }
        let (grown, shift) = best?;
        simplex = grown;
        shifts[i] = shift;
    }
    let diffs: Vec<Vec<f64>> = simplex
        .iter()
        .skip(1)
        .map(|p| p.iter().zip(&simplex[0]).map(|(a, b)| a - b).collect())
        .collect();
    for e in complement_basis(&diffs, n, TAU_RANK) {
        let p: Vec<f64> = simplex[0].iter().zip(&e).map(|(a, b)| a + b).collect();
        simplex.push(p);
    }
    Some((simplex, shifts))
}

/// Lexicographically smallest point first, then the point whose offset has
/// the largest k-th component in column k, so a standard simplex maps by the
/// identity.
fn orient_simplex(simplex: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut pts = simplex.to_vec();
    let base_idx = (0..pts.len())
        .min_by(|&i, &j| {
            pts[i]
                .iter()
                .zip(&pts[j])
                .map(|(a, b)| a.total_cmp(b))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .expect("nonempty");
    let base = pts.remove(base_idx);
    let mut out = vec![base.clone()];
    for k in 0..base.len() {
        let Some(best) =
            (0..pts.len()).max_by(|&i, &j| (pts[i][k] - base[k]).total_cmp(&(pts[j][k] - base[k])))
        else {
            break;
        };
        out.push(pts.remove(best));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ReductionOutcome {
    Reduced(Reduction),
    /// The affine members are dependent; the system has no isolated roots.
    NoIsolatedRoots {
        witness: Option<MixedVolumeZeroWitness>,
    },
}

/// Reduce to one variable when n − 1 members share a simplex support.
pub fn univariate_reduction(f: &FewnomialSystem) -> Result<ReductionOutcome> {
    let n = f.dim();
    if f.len() != n || n < 2 {
        return Err(Error::NotApplicable(
            "reduction needs a square system with n >= 2".into(),
        ));
    }
    let mut candidates: Vec<usize> = (0..n).collect();
    candidates.sort_by_key(|&i| std::cmp::Reverse(f.members()[i].len()));
    for last in candidates {
        let idx: Vec<usize> = (0..n).filter(|&i| i != last).collect();
        let supports: Vec<Vec<Vec<f64>>> = idx.iter().map(|&i| f.members()[i].support()).collect();
        let Some((simplex, shifts)) = shared_simplex(&supports, n) else {
            continue;
        };
        return reduce_on_simplex(f, last, &idx, &simplex, &shifts).map_err(|e| match e {
            Error::SingularMap(m) => Error::NotApplicable(m),
            other => other,
        });
    }
    Err(Error::NotApplicable(
        "no n − 1 members share a simplex support".into(),
    ))
}

pub(crate) fn reduce_on_simplex(
    f: &FewnomialSystem,
    last: usize,
    idx: &[usize],
    simplex: &[Vec<f64>],
    shifts: &[Vec<f64>],
) -> Result<ReductionOutcome> {
    let n = f.dim();
    let simplex = orient_simplex(simplex);
    let base = &simplex[0];
    let d = DMatrix::from_fn(n, n, |i, j| simplex[j + 1][i] - base[i]);
    let a = d
        .try_inverse()
        .ok_or_else(|| Error::SingularMap("simplex is degenerate".into()))?;
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| a[(i, j)]).collect())
        .collect();
    let map = MonomialMap::from_matrix(&rows)?;
    // Affine members: row k holds (c_1..c_n | −c_0).
    let mut m = DMatrix::zeros(n - 1, n);
    let mut rhs = DVector::zeros(n - 1);
    for (r, (&i, shift)) in idx.iter().zip(shifts).enumerate() {
        let off: Vec<f64> = shift.iter().zip(base).map(|(s, b)| -(s + b)).collect();
        let g = map.apply(&f.members()[i].mul_monomial(1.0, &off))?;
        for t in g.terms() {
            match t.exponent.iter().position(|v| (v - 1.0).abs() <= 1e-9) {
                Some(k)
                    if t.exponent
                        .iter()
                        .enumerate()
                        .all(|(j, v)| j == k || v.abs() <= 1e-9) =>
                {
                    m[(r, k)] = t.coeff
                }
                _ if t.exponent.iter().all(|v| v.abs() <= 1e-9) => rhs[r] = -t.coeff,
                _ => {
                    return Err(Error::Numerical(
                        "member is not affine after the simplex map".into(),
                    ))
                }
            }
        }
    }
    let scale = m.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    let mut chosen = None;
    for free in 0..n {
        let cols: Vec<usize> = (0..n).filter(|&j| j != free).collect();
        let sub = DMatrix::from_fn(n - 1, n - 1, |i, j| m[(i, cols[j])]);
        let rows: Vec<Vec<f64>> = (0..n - 1)
            .map(|i| sub.row(i).iter().cloned().collect())
            .collect();
        if scale > 0.0 && rank(&rows, n - 1, TAU_RANK) == n - 1 {
            chosen = Some((free, cols, sub));
            break;
        }
    }
    let Some((free, cols, sub)) = chosen else {
        return Ok(ReductionOutcome::NoIsolatedRoots {
            witness: system_mixed_volume_zero(f)?,
        });
    };
    let lu = sub.lu();
    let u = lu
        .solve(&rhs)
        .ok_or_else(|| Error::Numerical("elimination failed".into()))?;
    let mf = m.column(free).into_owned();
    let v = lu
        .solve(&mf)
        .ok_or_else(|| Error::Numerical("elimination failed".into()))?;
    let mut forms = vec![LinearForm::new(0.0, 0.0); n];
    forms[free] = LinearForm::new(0.0, 1.0);
    for (k, &c) in cols.iter().enumerate() {
        forms[c] = LinearForm::new(u[k], -v[k]);
    }
    let g = map.apply(&f.members()[last])?;
    let terms: Vec<(f64, Vec<f64>)> = g
        .terms()
        .iter()
        .map(|t| (t.coeff, t.exponent.clone()))
        .collect();
    // A form that is identically zero means the line leaves the orthant.
    let lfp = if forms.iter().any(|l| l.u == 0.0 && l.v == 0.0) {
        let mut safe = forms.clone();
        for l in safe.iter_mut().filter(|l| l.u == 0.0 && l.v == 0.0) {
            l.u = -1.0;
        }
        LinearFormProduct::scalar(safe, &terms)?
    } else {
        LinearFormProduct::scalar(forms, &terms)?
    };
    let interval = lfp.positivity_interval();
    Ok(ReductionOutcome::Reduced(Reduction {
        lfp,
        interval,
        map,
        last,
        parameter: free,
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Univariate,
    UniformSign,
    MixedVolumeZero,
    SharedSupport,
    TrinomialPair,
    SimplexReduction,
    Pyramidal,
    LogGridSearch,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SystemRoot {
    pub x: Vec<f64>,
    /// |f_i(x)| per member.
    pub residuals: Vec<f64>,
    pub suspect: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrinomialDetails {
    pub canonical: TrinomialCanonical,
    pub case: CaseInfo,
    pub cubics: CubicPair,
    pub r: usize,
    /// r ≤ M + 3, checked when every root is simple.
    pub chain_holds: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountReport {
    pub method: Method,
    pub roots: Vec<SystemRoot>,
    pub certified: bool,
    pub count_range: [usize; 2],
    pub bound: Option<BoundCite>,
    pub within_bound: bool,
    pub trinomial: Option<TrinomialDetails>,
    pub mixed_volume_zero: Option<MixedVolumeZeroWitness>,
    pub diagnostics: Vec<String>,
}

impl CountReport {
    pub fn count(&self) -> usize {
        self.roots.len()
    }

    fn none(method: Method, reason: &str) -> CountReport {
        CountReport {
            method,
            roots: vec![],
            certified: true,
            count_range: [0, 0],
            bound: Some(BoundCite {
                value: BigUint::from(0u32),
                source: method_name(method).into(),
            }),
            within_bound: true,
            trinomial: None,
            mixed_volume_zero: None,
            diagnostics: vec![reason.into()],
        }
    }
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Univariate => "descartes",
        Method::UniformSign => "uniform-sign",
        Method::MixedVolumeZero => "mixed-volume-zero",
        Method::SharedSupport => "shared-support",
        Method::TrinomialPair => "trinomial-pair",
        Method::SimplexReduction => "rolle-recursion",
        Method::Pyramidal => "pyramidal-product",
        Method::LogGridSearch => "log-grid-search",
    }
}

fn residuals(f: &FewnomialSystem, x: &[f64]) -> Vec<f64> {
    f.members()
        .iter()
        .map(|g| g.evaluate(x).map(f64::abs).unwrap_or(f64::INFINITY))
        .collect()
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().cloned().fold(0.0, f64::max)
}

/// Newton steps in log coordinates, kept only while the residual drops.
pub fn polish_root(f: &FewnomialSystem, x: &[f64]) -> Vec<f64> {
    let n = f.dim();
    if f.len() != n || x.iter().any(|v| !(*v > 0.0)) {
        return x.to_vec();
    }
    let derivs: Vec<Vec<Fewnomial>> = f
        .members()
        .iter()
        .map(|g| (0..n).map(|k| g.log_derivative(k)).collect())
        .collect();
    let mut best = x.to_vec();
    let mut best_res = max_of(&residuals(f, x));
    for _ in 0..12 {
        let vals = match f.evaluate(&best) {
            Ok(v) => v,
            Err(_) => break,
        };
        let jac = DMatrix::from_fn(n, n, |i, k| {
            derivs[i][k].evaluate(&best).unwrap_or(f64::NAN)
        });
        let Some(step) = jac.lu().solve(&DVector::from_vec(vals)) else {
            break;
        };
        let cand: Vec<f64> = best
            .iter()
            .zip(step.iter())
            .map(|(xi, s)| xi * (-s).exp())
            .collect();
        if cand.iter().any(|v| !v.is_finite() || *v <= 0.0) {
            break;
        }
        let res = max_of(&residuals(f, &cand));
        if res < best_res {
            let done = res == 0.0 || (best_res - res) <= 1e-3 * best_res;
            best = cand;
            best_res = res;
            if done {
                break;
            }
        } else {
            break;
        }
    }
    best
}

fn roots_from(f: &FewnomialSystem, pts: Vec<(Vec<f64>, bool)>) -> Vec<SystemRoot> {
    pts.into_iter()
        .map(|(x, suspect)| {
            let x = polish_root(f, &x);
            let residuals = residuals(f, &x);
            SystemRoot {
                x,
                residuals,
                suspect,
            }
        })
        .collect()
}

fn from_root_report(
    f: &FewnomialSystem,
    method: Method,
    r: &RootReport,
    to_x: impl Fn(f64) -> Result<Vec<f64>>,
    bound: BoundCite,
) -> Result<CountReport> {
    let pts = r
        .roots
        .iter()
        .map(|root| Ok((to_x(root.t)?, root.suspect)))
        .collect::<Result<Vec<_>>>()?;
    let roots = roots_from(f, pts);
    let within = BigUint::from(roots.len()) <= bound.value;
    Ok(CountReport {
        method,
        roots,
        certified: r.certified && within,
        count_range: r.count_range,
        bound: Some(bound),
        within_bound: within,
        trinomial: None,
        mixed_volume_zero: None,
        diagnostics: r.diagnostics.clone(),
    })
}

/// Mixed volume zero forces zero isolated roots.
pub fn mixed_volume_zero_shortcut(f: &FewnomialSystem) -> Result<Option<CountReport>> {
    Ok(system_mixed_volume_zero(f)?.map(|w| {
        let mut r = CountReport::none(
            Method::MixedVolumeZero,
            "Newton polytopes have mixed volume zero",
        );
        r.mixed_volume_zero = Some(w);
        r
    }))
}

/// Every member is supported on the same n + 1 affinely independent points
/// up to translation: at most one root, from a linear solve in monomials.
pub fn solve_shared_support(f: &FewnomialSystem) -> Result<Option<CountReport>> {
    let n = f.dim();
    if f.len() != n {
        return Ok(None);
    }
    let supports: Vec<Vec<Vec<f64>>> = f.members().iter().map(|g| g.support()).collect();
    if supports.iter().any(|s| s.len() != n + 1) {
        return Ok(None);
    }
    let Some((simplex, shifts)) = shared_simplex(&supports, n) else {
        return Ok(None);
    };
    if simplex.len() != n + 1 {
        return Ok(None);
    }
    let simplex = orient_simplex(&simplex);
    let base = &simplex[0];
    let d = DMatrix::from_fn(n, n, |i, j| simplex[j + 1][i] - base[i]);
    let Some(a) = d.try_inverse() else {
        return Ok(None);
    };
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| a[(i, j)]).collect())
        .collect();
    let map = MonomialMap::from_matrix(&rows)?;
    let mut m = DMatrix::zeros(n, n);
    let mut rhs = DVector::zeros(n);
    for (r, g) in f.members().iter().enumerate() {
        let off: Vec<f64> = shifts[r].iter().zip(base).map(|(s, b)| -(s + b)).collect();
        let h = map.apply(&g.mul_monomial(1.0, &off))?;
        for t in h.terms() {
            match t.exponent.iter().position(|v| (v - 1.0).abs() <= 1e-9) {
                Some(k) => m[(r, k)] = t.coeff,
                None => rhs[r] = -t.coeff,
            }
        }
    }
    let rows_m: Vec<Vec<f64>> = (0..n).map(|i| m.row(i).iter().cloned().collect()).collect();
    if rank(&rows_m, n, TAU_RANK) < n {
        return Ok(None);
    }
    let y = m
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Numerical("linear solve failed".into()))?;
    let bound = BoundCite {
        value: BigUint::from(1u32),
        source: "shared-support".into(),
    };
    let mut report = CountReport {
        bound: Some(bound),
        ..CountReport::none(Method::SharedSupport, "")
    };
    report.diagnostics.clear();
    if y.iter().all(|v| *v > 0.0) {
        let x = map.to_original(y.as_slice())?;
        report.roots = roots_from(f, vec![(x, false)]);
        report.count_range = [1, 1];
    } else {
        report
            .diagnostics
            .push("monomial solution leaves the positive orthant".into());
    }
    Ok(Some(report))
}

/// Triangular back-substitution along a flag of supports.
pub fn solve_pyramidal(f: &FewnomialSystem) -> Result<CountReport> {
    let n = f.dim();
    let cert = is_pyramidal(f)
        .ok_or_else(|| Error::NotApplicable("supports do not form a flag".into()))?;
    if n > 3 {
        return Err(Error::NotApplicable(
            "back-substitution is limited to n <= 3".into(),
        ));
    }
    // Orthonormal basis adapted to the flag.
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut dirs: Vec<Vec<f64>> = Vec::new();
    for &i in &cert.ordering {
        let s = f.members()[i].support();
        dirs.extend(s.iter().skip(1).map(|p| {
            p.iter()
                .zip(&s[0])
                .map(|(a, b)| a - b)
                .collect::<Vec<f64>>()
        }));
        let span = crate::num::span_basis(&dirs, n, TAU_RANK);
        let mut best: Option<(f64, Vec<f64>)> = None;
        for v in &span {
            let mut w = v.clone();
            for b in &basis {
                let p: f64 = w.iter().zip(b).map(|(x, y)| x * y).sum();
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
            }
            let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            if best.as_ref().map_or(true, |(b, _)| norm > *b) {
                best = Some((norm, w.iter().map(|x| x / norm).collect()));
            }
        }
        basis.push(best.expect("flag step adds a direction").1);
    }
    let map = MonomialMap::from_matrix(&basis)?;
    let mapped: Vec<Fewnomial> = cert
        .ordering
        .iter()
        .map(|&i| {
            let g = &f.members()[i];
            let off: Vec<f64> = g.terms()[0].exponent.iter().map(|v| -v).collect();
            map.apply(&g.mul_monomial(1.0, &off))
        })
        .collect::<Result<_>>()?;
    let mut partial: Vec<(Vec<f64>, bool)> = vec![(Vec::new(), false)];
    let mut certified = true;
    let mut diagnostics = Vec::new();
    for (k, g) in mapped.iter().enumerate() {
        let mut next = Vec::new();
        for (y, suspect) in &partial {
            let mut terms: Vec<(f64, f64)> = Vec::new();
            for t in g.terms() {
                let ly: f64 = (0..k).map(|j| t.exponent[j] * y[j].ln()).sum();
                terms.push((t.coeff * ly.exp(), t.exponent[k]));
            }
            let es = ExponentialSum::new(&terms)?;
            let scale = terms.iter().map(|(c, _)| c.abs()).fold(0.0, f64::max);
            if es.terms().iter().all(|(c, _)| c.abs() <= 1e-12 * scale) {
                return Err(Error::Continuum(format!(
                    "member {} vanishes along a branch",
                    cert.ordering[k]
                )));
            }
            let r = isolate_expsum_roots(&es, 0.0, f64::INFINITY)?;
            certified &= r.certified;
            diagnostics.extend(r.diagnostics.iter().cloned());
            for root in &r.roots {
                let mut z = y.clone();
                z.push(root.t);
                next.push((z, *suspect || root.suspect));
            }
        }
        partial = next;
    }
    let pts = partial
        .into_iter()
        .map(|(y, s)| Ok((map.to_original(&y)?, s)))
        .collect::<Result<Vec<_>>>()?;
    let roots = roots_from(f, pts);
    let prod: BigUint = f
        .members()
        .iter()
        .map(|g| BigUint::from(g.len().saturating_sub(1)))
        .product();
    let within = BigUint::from(roots.len()) <= prod;
    let simple = roots.iter().filter(|r| !r.suspect).count();
    Ok(CountReport {
        method: Method::Pyramidal,
        count_range: [simple, roots.len() + (roots.len() - simple)],
        roots,
        certified: certified && within,
        bound: Some(BoundCite {
            value: prod,
            source: "pyramidal-product".into(),
        }),
        within_bound: within,
        trinomial: None,
        mixed_volume_zero: None,
        diagnostics,
    })
}

/// Newton from every node of a grid in log coordinates; finds roots but
/// cannot certify that none were missed.
pub fn log_grid_search(f: &FewnomialSystem, window: f64, nodes: usize) -> Result<CountReport> {
    let n = f.dim();
    if n != 2 || f.len() != 2 {
        return Err(Error::NotApplicable(
            "grid search handles 2 × 2 systems".into(),
        ));
    }
    let derivs: Vec<Vec<Fewnomial>> = f
        .members()
        .iter()
        .map(|g| (0..n).map(|k| g.log_derivative(k)).collect())
        .collect();
    let rel = |x: &[f64]| -> f64 {
        let z: Vec<f64> = x.iter().map(|v| v.ln()).collect();
        f.members()
            .iter()
            .map(|g| g.evaluate_log(&z).relative())
            .fold(0.0, f64::max)
    };
    let mut found: Vec<Vec<f64>> = Vec::new();
    for i in 0..nodes {
        for j in 0..nodes {
            let step = 2.0 * window / (nodes - 1) as f64;
            let mut z = vec![-window + i as f64 * step, -window + j as f64 * step];
            let mut converged = false;
            for _ in 0..60 {
                let x: Vec<f64> = z.iter().map(|v| v.exp()).collect();
                let Ok(vals) = f.evaluate(&x) else { break };
                let jac =
                    DMatrix::from_fn(2, 2, |a, b| derivs[a][b].evaluate(&x).unwrap_or(f64::NAN));
                let Some(s) = jac.lu().solve(&DVector::from_vec(vals)) else {
                    break;
                };
                let norm = s.amax();
                if !norm.is_finite() {
                    break;
                }
                let damp = if norm > 1.0 { 1.0 / norm } else { 1.0 };
                z[0] -= damp * s[0];
                z[1] -= damp * s[1];
                if z.iter().any(|v| v.abs() > 4.0 * window) {
                    break;
                }
                if norm < 1e-12 {
                    converged = true;
                    break;
                }
            }
            let x: Vec<f64> = z.iter().map(|v| v.exp()).collect();
            if converged
                && x.iter().all(|v| v.is_finite() && *v > 0.0)
                && rel(&x) < 1e-11
                && !found.iter().any(|y| {
                    y.iter()
                        .zip(&x)
                        .all(|(a, b)| (a.ln() - b.ln()).abs() < 1e-6)
                })
            {
                found.push(x);
            }
        }
    }
    found.sort_by(|a, b| a[0].total_cmp(&b[0]));
    let roots = roots_from(f, found.into_iter().map(|x| (x, false)).collect());
    let k = roots.len();
    Ok(CountReport {
        method: Method::LogGridSearch,
        roots,
        certified: false,
        count_range: [k, k],
        bound: None,
        within_bound: true,
        trinomial: None,
        mixed_volume_zero: None,
        diagnostics: vec![format!(
            "grid of {nodes}×{nodes} Newton starts on [-{window}, {window}]² in log coordinates"
        )],
    })
}

fn count_trinomial_pair(f: &FewnomialSystem, tc: TrinomialCanonical) -> Result<CountReport> {
    let r = tc.isolate()?;
    let map = tc.map.clone();
    let mut report = from_root_report(
        f,
        Method::TrinomialPair,
        &r,
        |t| map.to_original(&[t, 1.0 - t]),
        BoundCite {
            value: BigUint::from(5u32),
            source: "trinomial-pair".into(),
        },
    )?;
    let [a, b, c, d] = tc.abcd();
    let case = classify_case(a, b, c, d);
    let cubics = cubic_f_coeffs(a, b, c, d)?;
    let simple = r.roots.iter().all(|x| !x.suspect);
    let chain_holds = match (simple, cubics.m) {
        (true, Some(m)) => Some(r.count() <= m + 3),
        _ => None,
    };
    report.trinomial = Some(TrinomialDetails {
        canonical: tc,
        case,
        cubics,
        r: r.count(),
        chain_holds,
    });
    Ok(report)
}

/// Count the roots of a square system in the positive orthant.
pub fn count_roots(f: &FewnomialSystem) -> Result<CountReport> {
    let n = f.dim();
    if f.len() != n {
        return Err(Error::NotApplicable(format!(
            "{} equations in {n} variables",
            f.len()
        )));
    }
    if n == 1 {
        let g = &f.members()[0];
        let es = ExponentialSum::new(
            &g.terms()
                .iter()
                .map(|t| (t.coeff, t.exponent[0]))
                .collect::<Vec<_>>(),
        )?;
        let r = isolate_expsum_roots(&es, 0.0, f64::INFINITY)?;
        let bound = r.bound.clone();
        return from_root_report(f, Method::Univariate, &r, |t| Ok(vec![t]), bound);
    }
    if let Some(i) = f.members().iter().position(|g| {
        g.terms().iter().all(|t| t.coeff > 0.0) || g.terms().iter().all(|t| t.coeff < 0.0)
    }) {
        return Ok(CountReport::none(
            Method::UniformSign,
            &format!("member {i} has coefficients of one sign"),
        ));
    }
    if let Some(r) = mixed_volume_zero_shortcut(f)? {
        return Ok(r);
    }
    if let Some(r) = solve_shared_support(f)? {
        return Ok(r);
    }
    if n == 2 && f.type_signature() == vec![3, 3] {
        let has_triangle = f.members().iter().any(|g| {
            newton_polygon(g)
                .map(|p| p.kind() == PolygonKind::Polygon(3))
                .unwrap_or(false)
        });
        if has_triangle {
            match trinomial_canonical(f)? {
                CanonicalOutcome::Canonical(tc) => return count_trinomial_pair(f, tc),
                CanonicalOutcome::Infeasible { member } => {
                    return Ok(CountReport::none(
                        Method::UniformSign,
                        &format!("member {member} has one sign"),
                    ))
                }
                CanonicalOutcome::Segment => {}
            }
        }
    }
    match univariate_reduction(f) {
        Ok(ReductionOutcome::Reduced(red)) => {
            let rb = rolle_bound(red.lfp.len().max(1), n, 0)?;
            let r = isolate_lfp_roots(&red.lfp, None)?;
            let bound = BoundCite {
                value: rb.recursion,
                source: "rolle-recursion".into(),
            };
            return from_root_report(f, Method::SimplexReduction, &r, |t| red.point(t), bound);
        }
        Ok(ReductionOutcome::NoIsolatedRoots { witness }) => {
            let mut r = CountReport::none(Method::MixedVolumeZero, "affine members are dependent");
            r.mixed_volume_zero = witness;
            return Ok(r);
        }
        Err(Error::NotApplicable(_)) => {}
        Err(e) => return Err(e),
    }
    if is_pyramidal(f).is_some() && n <= 3 {
        return solve_pyramidal(f);
    }
    if n == 2 {
        return log_grid_search(f, 10.0, 41);
    }
    Err(Error::NotApplicable("no counting method applies".into()))
}
