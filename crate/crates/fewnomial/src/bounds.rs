//! Closed-form upper and lower bounds on root and component counts, a
//! structure-aware dispatcher, and generators for extremal examples.

use std::cmp::{Ordering, Reverse};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{FromPrimitive, One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::polytope::{
    is_pyramidal, minkowski_sum, newton_polygon, overdet_smoothness_check,
    system_mixed_volume_zero, Polygon, PolygonKind, PolytopeInfo,
};
use crate::reduce::{reduce_on_simplex, shared_simplex, ReductionOutcome};
use crate::system::{Fewnomial, FewnomialSystem, Term};
use crate::univar::sign_alternations;

/// A nonnegative integer or infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtInt {
    Finite(BigUint),
    Infinite,
}

impl ExtInt {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtInt::Finite(_))
    }

    pub fn finite(&self) -> Option<&BigUint> {
        match self {
            ExtInt::Finite(v) => Some(v),
            ExtInt::Infinite => None,
        }
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.finite().and_then(|v| v.to_u64())
    }
}

impl From<u64> for ExtInt {
    fn from(v: u64) -> Self {
        ExtInt::Finite(BigUint::from(v))
    }
}

impl From<BigUint> for ExtInt {
    fn from(v: BigUint) -> Self {
        ExtInt::Finite(v)
    }
}

impl Ord for ExtInt {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtInt::Finite(a), ExtInt::Finite(b)) => a.cmp(b),
            (ExtInt::Finite(_), ExtInt::Infinite) => Ordering::Less,
            (ExtInt::Infinite, ExtInt::Finite(_)) => Ordering::Greater,
            (ExtInt::Infinite, ExtInt::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for ExtInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtInt::Finite(v) => write!(f, "{v}"),
            ExtInt::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for ExtInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    Roots,
    CompactComponents,
    NonCompactComponents,
    Components,
    Inflections,
    VerticalTangents,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Upper,
    Lower,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrailEntry {
    pub rule: String,
    pub inputs: Value,
    pub value: ExtInt,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// A bound with the rules that produced it. The trail runs from the weakest
/// entry to the binding one, so the last entry always carries `value`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub value: ExtInt,
    pub kind: BoundKind,
    pub direction: Direction,
    pub trail: Vec<TrailEntry>,
}

impl BoundReport {
    pub fn rules(&self) -> Vec<&str> {
        self.trail.iter().map(|e| e.rule.as_str()).collect()
    }

    pub fn binding_rule(&self) -> &str {
        &self.trail.last().expect("trail is nonempty").rule
    }

    pub fn entry(&self, rule: &str) -> Option<&TrailEntry> {
        self.trail.iter().find(|e| e.rule == rule)
    }
}

/// Entries tagged with a priority; earlier priorities win ties.
struct Trail {
    entries: Vec<(usize, TrailEntry)>,
}

impl Trail {
    fn new() -> Trail {
        Trail {
            entries: Vec::new(),
        }
    }

    fn push(
        &mut self,
        priority: usize,
        rule: &str,
        inputs: Value,
        value: impl Into<ExtInt>,
    ) -> &mut TrailEntry {
        self.entries.push((
            priority,
            TrailEntry {
                rule: rule.into(),
                inputs,
                value: value.into(),
                note: None,
            },
        ));
        &mut self.entries.last_mut().expect("just pushed").1
    }

    fn finish(mut self, kind: BoundKind, direction: Direction) -> BoundReport {
        assert!(!self.entries.is_empty(), "bound trail must be nonempty");
        match direction {
            Direction::Upper => self.entries.sort_by(|a, b| {
                (Reverse(&a.1.value), Reverse(a.0)).cmp(&(Reverse(&b.1.value), Reverse(b.0)))
            }),
            Direction::Lower => self
                .entries
                .sort_by(|a, b| (&a.1.value, Reverse(a.0)).cmp(&(&b.1.value, Reverse(b.0)))),
        }
        let trail: Vec<TrailEntry> = self.entries.into_iter().map(|(_, e)| e).collect();
        let value = trail.last().expect("nonempty").value.clone();
        BoundReport {
            value,
            kind,
            direction,
            trail,
        }
    }
}

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

fn pow2(bits: u64) -> BigUint {
    BigUint::one() << bits
}

fn bpow(base: u64, exp: u64) -> BigUint {
    let e = u32::try_from(exp).expect("exponent fits in u32");
    big(base).pow(e)
}

/// (n+1)^μ 2^{μ(μ−1)/2}.
pub fn khovanski_fewnomial(n: u64, mu: u64) -> BigUint {
    bpow(n + 1, mu) * pow2(mu * mu.saturating_sub(1) / 2)
}

/// 2^{μ(μ−1)/2} (1 + ΣD)^μ ΠD for a system of polynomials in x and μ monomials.
pub fn khovanski_mixed(n: u64, mu: u64, degrees: &[u64]) -> Result<BigUint> {
    if degrees.len() as u64 != n {
        return Err(Error::DimensionMismatch {
            expected: n as usize,
            found: degrees.len(),
        });
    }
    let sum: u64 = degrees.iter().sum();
    let prod = degrees.iter().fold(BigUint::one(), |acc, &d| acc * big(d));
    Ok(pow2(mu * mu.saturating_sub(1) / 2) * bpow(1 + sum, mu) * prod)
}

/// ⌊2^{n−1/2} (2n+1)^μ 2^{μ(μ+1)/2}⌋, a bound on components of any μ-sparse
/// zero set in n variables.
pub fn component_count_general(n: u64, mu: u64) -> BigUint {
    let x = pow2(n.saturating_sub(1)) * bpow(2 * n + 1, mu) * pow2(mu * (mu + 1) / 2);
    if n == 0 {
        // 2^{-1/2} X = sqrt(X^2 / 2).
        return (&x * &x / big(2)).sqrt();
    }
    (&x * &x * big(2)).sqrt()
}

/// Maximal number of non-degenerate positive roots of a μ-sparse n × n
/// system, from the known cases and the general exponential bound.
pub fn k_prime(n: u64, mu: u64) -> BoundReport {
    let mut t = Trail::new();
    let inputs = json!({"n": n, "mu": mu});
    if mu <= n {
        t.push(0, "few-exponents", inputs.clone(), 0);
    } else if mu == n + 1 {
        t.push(0, "few-exponents", inputs.clone(), 1);
    }
    if n == 1 {
        t.push(1, "descartes-rule", inputs.clone(), mu.saturating_sub(1));
    }
    if n == 2 && mu == 4 {
        t.push(2, "trinomial-pair-sandwich", inputs.clone(), 5);
    }
    t.push(3, "khovanski-fewnomial", inputs, khovanski_fewnomial(n, mu));
    t.finish(BoundKind::Roots, Direction::Upper)
}

/// The isolated-root analogue of `k_prime`. Known values coincide; the
/// general exponential bound is applied to isolated roots as well.
pub fn k_isolated(n: u64, mu: u64) -> BoundReport {
    let mut r = k_prime(n, mu);
    for e in r
        .trail
        .iter_mut()
        .filter(|e| e.rule == "khovanski-fewnomial")
    {
        e.note = Some("non-degenerate count used for isolated roots".into());
    }
    r
}

fn k_value(n: u64, mu: u64) -> BigUint {
    k_prime(n, mu).value.finite().cloned().expect("finite")
}

/// Two exponent generators with f = p(x^{g1}, x^{g2}) for a polynomial p.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RhoHint {
    pub member: usize,
    pub generators: [[f64; 2]; 2],
}

/// Structure known to the caller that the dispatcher cannot detect alone.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Structure {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<RhoHint>,
}

/// Degree and normalized Newton polygon area of p.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RhoData {
    pub area: f64,
    pub degree: u64,
}

pub fn rho_data(f: &Fewnomial, generators: &[[f64; 2]; 2]) -> Result<RhoData> {
    if f.dim() != 2 {
        return Err(Error::NotApplicable(
            "generator structure needs n = 2".into(),
        ));
    }
    let [g1, g2] = generators;
    let det = g1[0] * g2[1] - g1[1] * g2[0];
    let scale = g1
        .iter()
        .chain(g2.iter())
        .fold(0.0f64, |s, v| s.max(v.abs()));
    if det.abs() <= 1e-12 * scale * scale.max(1.0) {
        return Err(Error::NotApplicable("generators are dependent".into()));
    }
    let mut pts = Vec::new();
    let mut degree = 0u64;
    for t in f.terms() {
        let (a, b) = (t.exponent[0], t.exponent[1]);
        let i = (a * g2[1] - b * g2[0]) / det;
        let j = (g1[0] * b - g1[1] * a) / det;
        let (ri, rj) = (i.round(), j.round());
        if (i - ri).abs() > 1e-9 * (1.0 + ri.abs())
            || (j - rj).abs() > 1e-9 * (1.0 + rj.abs())
            || ri < 0.0
            || rj < 0.0
        {
            return Err(Error::NotApplicable(format!(
                "exponent {:?} is not a nonnegative combination",
                t.exponent
            )));
        }
        degree = degree.max((ri + rj) as u64);
        pts.push([ri, rj]);
    }
    let area = Polygon::hull(&pts)?.normalized_area();
    Ok(RhoData { area, degree })
}

/// 4·Area + 2D + 1.
pub fn part_c_bound(area: f64, degree: u64) -> BigUint {
    let a = BigUint::from_f64((4.0 * area + 1e-9).floor().max(0.0)).expect("finite area");
    a + big(2 * degree + 1)
}

/// Both forms of the trinomial-plus-structured-member bound.
pub fn part_c_report(area: f64, degree: u64) -> BoundReport {
    let mut t = Trail::new();
    let inputs = json!({"area": area, "degree": degree});
    t.push(
        0,
        "structured-member-features",
        inputs.clone(),
        part_c_bound(area, degree),
    );
    t.push(
        1,
        "structured-member-degree-cap",
        inputs,
        big(6 * degree + 1),
    );
    t.finish(BoundKind::Roots, Direction::Upper)
}

/// Bound for a system with no further structure, from its type alone.
pub fn type_bound(types: &[usize]) -> BigUint {
    if types.iter().any(|&m| m <= 1) {
        return BigUint::zero();
    }
    let mut rest: Vec<u64> = types
        .iter()
        .filter(|&&m| m != 2)
        .map(|&m| m as u64)
        .collect();
    rest.sort();
    let k = rest.len() as u64;
    if k == 0 {
        return BigUint::one();
    }
    let sparse = k_value(k, rest.iter().sum::<u64>() - k + 1);
    match rest.as_slice() {
        [m] => big(m - 1).min(sparse),
        [3, 3] => big(5).min(sparse),
        [3, m] => (pow2(*m) - big(2)).min(sparse),
        _ => sparse,
    }
}

/// Sharpest applicable root bound for a system.
pub fn best_root_bound(f: &FewnomialSystem) -> Result<BoundReport> {
    best_root_bound_with(f, &Structure::default())
}

pub fn best_root_bound_with(f: &FewnomialSystem, structure: &Structure) -> Result<BoundReport> {
    let n = f.dim();
    let types = f.type_signature();
    let mut t = Trail::new();
    if f.len() != n {
        t.push(
            0,
            "non-square",
            json!({"equations": f.len(), "n": n}),
            ExtInt::Infinite,
        )
        .note = Some("no closed form for non-square systems".into());
        return Ok(t.finish(BoundKind::Roots, Direction::Upper));
    }
    let short = types.iter().any(|&m| m <= 1);
    if short {
        t.push(6, "short-member", json!({"type": types}), 0);
    } else {
        if system_mixed_volume_zero(f)?.is_some() {
            t.push(0, "mixed-volume-zero", json!({"type": types}), 0);
        }
        let supports: Vec<Vec<Vec<f64>>> = f.members().iter().map(|g| g.support()).collect();
        if shared_simplex(&supports, n).is_some() {
            t.push(1, "shared-simplex-support", json!({"n": n}), 1);
        }
        if let Some(cert) = is_pyramidal(f) {
            let prod = types
                .iter()
                .fold(BigUint::one(), |acc, &m| acc * big(m as u64 - 1));
            t.push(
                2,
                "pyramidal-product",
                json!({"type": types, "ordering": cert.ordering}),
                prod,
            );
        }
        if n == 2 {
            let mut sorted = types.clone();
            sorted.sort();
            if sorted == [3, 3] {
                t.push(3, "trinomial-pair", json!({"type": types}), 5);
            } else if sorted[0] == 3 {
                let m = sorted[1] as u64;
                t.push(
                    4,
                    "trinomial-first-member",
                    json!({"m": m}),
                    pow2(m) - big(2),
                );
            }
        }
        if n >= 2 {
            for last in 0..n {
                let idx: Vec<usize> = (0..n).filter(|&i| i != last).collect();
                let sub: Vec<Vec<Vec<f64>>> = idx.iter().map(|&i| supports[i].clone()).collect();
                let Some((simplex, shifts)) = shared_simplex(&sub, n) else {
                    continue;
                };
                match reduce_on_simplex(f, last, &idx, &simplex, &shifts) {
                    Ok(ReductionOutcome::Reduced(_)) => {
                        let m = types[last] as u64;
                        let v = (1..m).fold(BigUint::zero(), |acc, i| acc + bpow(n as u64, i));
                        t.push(
                            5,
                            "simplex-elimination",
                            json!({"n": n, "m": m, "last": last}),
                            v,
                        );
                    }
                    Ok(ReductionOutcome::NoIsolatedRoots { .. }) => {
                        t.push(5, "dependent-affine-members", json!({"last": last}), 0);
                    }
                    Err(_) => {}
                }
            }
        }
        if types.contains(&2) {
            let rest: Vec<usize> = types.iter().cloned().filter(|&m| m != 2).collect();
            t.push(
                7,
                "binomial-peel",
                json!({"type": types, "remaining": rest}),
                type_bound(&types),
            );
        }
    }
    if n == 1 && !short {
        let mut terms: Vec<(f64, f64)> = f.members()[0]
            .terms()
            .iter()
            .map(|t| (t.exponent[0], t.coeff))
            .collect();
        terms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let coeffs: Vec<f64> = terms.iter().map(|p| p.1).collect();
        t.push(
            1,
            "descartes-rule",
            json!({"coefficients": coeffs}),
            sign_alternations(&coeffs) as u64,
        );
    }
    if let Some(h) = &structure.rho {
        if n == 2 && h.member < 2 && types[1 - h.member] == 3 {
            let d = rho_data(&f.members()[h.member], &h.generators)?;
            let r = part_c_report(d.area, d.degree);
            for e in r.trail {
                let p = if e.rule == "structured-member-features" {
                    8
                } else {
                    9
                };
                t.push(p, &e.rule, e.inputs, e.value);
            }
        } else {
            return Err(Error::NotApplicable(
                "structured member needs a trinomial partner in two variables".into(),
            ));
        }
    }
    let total: u64 = types.iter().map(|&m| m as u64).sum();
    let mu = (f.sparsity() as u64).min((total + 1).saturating_sub(n as u64));
    let k = k_isolated(n as u64, mu);
    let note = k.entry("khovanski-fewnomial").and_then(|e| e.note.clone());
    let entry = t.push(10, "sparsity", json!({"n": n, "mu": mu}), k.value.clone());
    if k.binding_rule() == "khovanski-fewnomial" {
        entry.note = note;
    }
    Ok(t.finish(BoundKind::Roots, Direction::Upper))
}

/// Bound for a (3,3) pair by the shape of the Minkowski sum of its Newton
/// polygons.
pub fn polygon_class_bound(f: &FewnomialSystem) -> Result<BoundReport> {
    if f.dim() != 2 || f.len() != 2 || f.type_signature() != [3, 3] {
        return Err(Error::NotApplicable(
            "polygon classes apply to (3,3) pairs in two variables".into(),
        ));
    }
    let p = minkowski_sum(
        &newton_polygon(&f.members()[0])?,
        &newton_polygon(&f.members()[1])?,
    );
    let (value, class) = match p.kind() {
        PolygonKind::Point | PolygonKind::Segment => (0, "segment".to_string()),
        PolygonKind::Polygon(3) => (2, "triangle".to_string()),
        PolygonKind::Polygon(k @ (4 | 5)) => (4, format!("{k}-gon")),
        PolygonKind::Polygon(k) => (5, format!("{k}-gon")),
    };
    let mut t = Trail::new();
    t.push(1, "trinomial-pair", json!({"type": [3, 3]}), 5);
    t.push(
        0,
        "polygon-class",
        json!({"class": class, "vertices": p.vertices()}),
        value,
    );
    Ok(t.finish(BoundKind::Roots, Direction::Upper))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentBounds {
    pub n: u64,
    pub m: u64,
    pub compact_lower: BoundReport,
    pub compact_upper: BoundReport,
    pub non_compact_lower: BoundReport,
    pub non_compact_upper: BoundReport,
    pub total_upper: BoundReport,
}

fn compact_upper(n: u64, m: u64) -> BoundReport {
    let mut t = Trail::new();
    let inputs = json!({"n": n, "m": m});
    if m == 0 {
        t.push(0, "zero-polynomial", inputs, 0);
    } else if m == 1 {
        t.push(0, "monomial", inputs, 0);
    } else if n == 1 {
        t.push(0, "univariate-roots", inputs, m - 1);
    } else if m == 2 {
        t.push(0, "binomial-walls", inputs, 0);
    } else if m <= n + 1 {
        t.push(0, "few-terms-noncompact", inputs, 0);
    } else {
        let k = k_value(n, m);
        t.push(1, "critical-point-pairs", inputs, (k / big(2)) * big(2))
            .note = Some("halved count of critical points of a coordinate".into());
    }
    t.finish(BoundKind::CompactComponents, Direction::Upper)
}

fn clamped_pow(base: i64, exp: u64) -> BigUint {
    if base <= 0 {
        BigUint::zero()
    } else {
        bpow(base as u64, exp)
    }
}

fn compact_lower(n: u64, m: u64) -> BoundReport {
    let mut t = Trail::new();
    let inputs = json!({"n": n, "m": m});
    t.push(2, "trivial", inputs.clone(), 0);
    if n == 1 && m >= 1 {
        t.push(0, "univariate-roots", inputs, m - 1);
    } else if n >= 2 && m >= 1 {
        let points = (m / 2) as i64 - n as i64 - 1;
        t.push(
            0,
            "sum-of-squares-points",
            inputs.clone(),
            points.max(0) as u64,
        );
        let side = ((m - 1) / (2 * n)) as i64 - 1;
        t.push(1, "sum-of-squares-grid", inputs, clamped_pow(side, n));
    }
    t.finish(BoundKind::CompactComponents, Direction::Lower)
}

fn non_compact_upper(n: u64, m: u64, generic: bool) -> BoundReport {
    let mut t = Trail::new();
    let inputs = json!({"n": n, "m": m});
    if m == 0 {
        t.push(0, "zero-polynomial", inputs, 1);
    } else if m == 1 {
        t.push(0, "monomial", inputs, 0);
    } else if n == 1 {
        t.push(0, "univariate-roots", inputs, 0);
    } else if m == 2 {
        t.push(0, "binomial-walls", inputs, 1);
    } else {
        if m <= n + 1 {
            t.push(
                1,
                "few-terms-reduction",
                inputs.clone(),
                total_value(m - 2, m),
            );
        }
        t.push(
            2,
            "slice-count",
            inputs.clone(),
            big(2) * total_value(n - 1, m),
        );
        if generic && n == 2 {
            t.push(3, "boundary-facet-sum", inputs, m).note =
                Some("requires smooth zero sets of all initial forms".into());
        }
    }
    t.finish(BoundKind::NonCompactComponents, Direction::Upper)
}

fn non_compact_lower(n: u64, m: u64) -> BoundReport {
    let mut t = Trail::new();
    let inputs = json!({"n": n, "m": m});
    t.push(2, "trivial", inputs.clone(), 0);
    if m == 0 {
        t.push(0, "zero-polynomial", inputs, 1);
    } else if n >= 2 && m >= 1 {
        t.push(0, "parallel-walls", inputs.clone(), m - 1);
        let side = ((m - 1) / (2 * (n - 1))) as i64 - 1;
        t.push(1, "sum-of-squares-lines", inputs, clamped_pow(side, n - 1));
    }
    t.finish(BoundKind::NonCompactComponents, Direction::Lower)
}

fn total_upper(n: u64, m: u64) -> BoundReport {
    let mut t = Trail::new();
    let inputs = json!({"n": n, "m": m});
    if m == 0 {
        t.push(0, "zero-polynomial", inputs, 1);
    } else if m == 1 {
        t.push(0, "monomial", inputs, 0);
    } else if n == 1 {
        t.push(0, "univariate-roots", inputs, m - 1);
    } else {
        let c = compact_upper(n, m).value.finite().cloned().expect("finite");
        let nc = non_compact_upper(n, m, false)
            .value
            .finite()
            .cloned()
            .expect("finite");
        t.push(0, "compact-plus-noncompact", inputs.clone(), c + nc);
        t.push(
            1,
            "critical-slice-recursion",
            inputs.clone(),
            k_value(n, m) + big(2) * total_value(n - 1, m),
        );
        let explicit = big(n) * bpow(n + 1, m) * pow2(n - 1) * pow2(m * (m - 1) / 2);
        t.push(2, "explicit-exponential", inputs.clone(), explicit);
        t.push(
            3,
            "component-count-general",
            inputs,
            component_count_general(n, m),
        );
    }
    t.finish(BoundKind::Components, Direction::Upper)
}

fn total_value(n: u64, m: u64) -> BigUint {
    total_upper(n, m).value.finite().cloned().expect("finite")
}

/// Lower and upper bounds on compact, non-compact and total component counts
/// of the positive zero set of an n-variate m-nomial.
pub fn component_bounds(n: u64, m: u64) -> Result<ComponentBounds> {
    if n == 0 {
        return Err(Error::Validation("component bounds need n >= 1".into()));
    }
    Ok(ComponentBounds {
        n,
        m,
        compact_lower: compact_lower(n, m),
        compact_upper: compact_upper(n, m),
        non_compact_lower: non_compact_lower(n, m),
        non_compact_upper: non_compact_upper(n, m, true),
        total_upper: total_upper(n, m),
    })
}

/// Non-compact components bounded facet by facet of the Newton polytope.
/// Without `assume_smooth` the simplicial sufficient condition must hold.
pub fn moment_facet_bound(f: &Fewnomial, assume_smooth: bool) -> Result<BoundReport> {
    let n = f.dim();
    if n < 2 {
        return Err(Error::NotApplicable("facet bound needs n >= 2".into()));
    }
    let info = PolytopeInfo::of(f)?;
    if info.dim != n {
        return Err(Error::NotApplicable(
            "Newton polytope is not full-dimensional".into(),
        ));
    }
    let verified = overdet_smoothness_check(f)?;
    if !assume_smooth && !verified {
        return Err(Error::NotApplicable(
            "initial forms are not known to have smooth zero sets".into(),
        ));
    }
    let hypothesis = if verified { "verified" } else { "assumed" };
    let counts: Vec<u64> = info
        .facets
        .iter()
        .map(|fc| fc.points.len() as u64)
        .collect();
    let sum = counts.iter().fold(BigUint::zero(), |acc, &k| {
        acc + total_value(n as u64 - 1, k)
    });
    let mut t = Trail::new();
    t.push(
        1,
        "facet-component-sum",
        json!({"facet_points": counts, "smoothness": hypothesis}),
        sum,
    );
    if n == 2 {
        let boundary = info.boundary_points().len() as u64;
        t.push(
            0,
            "boundary-support-half",
            json!({"boundary_points": boundary, "smoothness": hypothesis}),
            boundary / 2,
        );
    }
    Ok(t.finish(BoundKind::NonCompactComponents, Direction::Upper))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurveFeatureBounds {
    pub vertical: BoundReport,
    pub inflections: BoundReport,
}

/// Isolated vertical tangencies and inflections of a bivariate m-nomial curve.
pub fn curve_feature_bounds(m: u64, rho: Option<RhoData>) -> CurveFeatureBounds {
    let mut v = Trail::new();
    let mut i = Trail::new();
    let inputs = json!({"m": m});
    if m <= 2 {
        v.push(0, "monomial-graph", inputs.clone(), 0);
        i.push(0, "monomial-graph", inputs.clone(), 0);
    }
    v.push(
        1,
        "vertical-tangency-sparsity",
        inputs.clone(),
        k_isolated(2, m).value,
    );
    if m <= 3 {
        i.push(
            1,
            "inflection-sparsity",
            inputs.clone(),
            big(3) * k_value(2, m),
        );
    }
    if let Some(r) = rho {
        let area = BigUint::from_f64((r.area + 1e-9).floor().max(0.0)).expect("finite area");
        let ri = json!({"area": r.area, "degree": r.degree});
        v.push(2, "structured-vertical-area", ri.clone(), area.clone());
        i.push(2, "structured-inflection-area", ri, big(3) * area);
    }
    if i.entries.is_empty() {
        i.push(3, "no-closed-form", inputs, ExtInt::Infinite);
    }
    CurveFeatureBounds {
        vertical: v.finish(BoundKind::VerticalTangents, Direction::Upper),
        inflections: i.finish(BoundKind::Inflections, Direction::Upper),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    G1,
    G2,
    H1,
    H2,
    EqEasy,
    EqDegen,
}

impl FromStr for WitnessKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "g1" => WitnessKind::G1,
            "g2" => WitnessKind::G2,
            "h1" => WitnessKind::H1,
            "h2" => WitnessKind::H2,
            "eq-easy" => WitnessKind::EqEasy,
            "eq-degen" => WitnessKind::EqDegen,
            other => return Err(Error::Validation(format!("unknown witness kind {other:?}"))),
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct WitnessExpectation {
    /// Isolated roots of a square system.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub roots: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub compact: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub non_compact: Option<usize>,
    /// The roots or isolated zeros, when finitely many.
    pub points: Vec<Vec<f64>>,
    /// Term count of each member.
    pub terms: Vec<usize>,
    /// The closed-form lower bound the construction realizes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_formula: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub kind: WitnessKind,
    pub system: FewnomialSystem,
    pub expected: WitnessExpectation,
}

const EXACT_LIMIT: i128 = 1 << 53;

/// Coefficients (ascending) of Π (x − r)^k over the given roots.
fn expand_roots(roots: &[(i64, u32)]) -> Result<Vec<i128>> {
    let mut c: Vec<i128> = vec![1];
    for &(r, k) in roots {
        for _ in 0..k {
            let mut next = vec![0i128; c.len() + 1];
            for (i, &v) in c.iter().enumerate() {
                next[i + 1] = next[i + 1].checked_add(v).ok_or_else(too_big)?;
                let prod = v.checked_mul(-(r as i128)).ok_or_else(too_big)?;
                next[i] = next[i].checked_add(prod).ok_or_else(too_big)?;
            }
            c = next;
        }
    }
    if c.iter().any(|v| v.abs() > EXACT_LIMIT) {
        return Err(too_big());
    }
    Ok(c)
}

fn too_big() -> Error {
    Error::Validation("coefficients exceed the exactly representable range".into())
}

fn univariate(n: usize, var: usize, coeffs: &[i128]) -> Result<Fewnomial> {
    let terms = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0)
        .map(|(k, &c)| {
            let mut a = vec![0.0; n];
            a[var] = k as f64;
            Term::new(c as f64, a)
        })
        .collect();
    Fewnomial::new(n, terms)
}

/// Π_{i=1}^{k} (x_var − i)^mult.
fn shifted_product(n: usize, var: usize, k: usize, mult: u32) -> Result<Fewnomial> {
    let roots: Vec<(i64, u32)> = (1..=k as i64).map(|i| (i, mult)).collect();
    univariate(n, var, &expand_roots(&roots)?)
}

fn grid(k: usize, dims: usize) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..dims {
        out = out
            .into_iter()
            .flat_map(|p| {
                (1..=k).map(move |i| {
                    let mut q = p.clone();
                    q.push(i as f64);
                    q
                })
            })
            .collect();
    }
    out
}

fn empty(kind: &str) -> Error {
    Error::Validation(format!("{kind} construction is empty for these parameters"))
}

/// Explicit polynomial systems attaining the known lower bounds.
/// `eq-degen` is a fixed system in three variables and ignores n and m.
pub fn make_witness(kind: WitnessKind, n: usize, m: usize) -> Result<Witness> {
    if n == 0 && kind != WitnessKind::EqDegen {
        return Err(empty("zero-variable"));
    }
    let mut expected = WitnessExpectation::default();
    let members: Vec<Fewnomial> = match kind {
        WitnessKind::G1 => {
            let k = (m / 2) as i64 - n as i64 - 1;
            if k < 1 {
                return Err(empty("g1"));
            }
            let mut g = shifted_product(n, 0, k as usize, 2)?;
            for j in 1..n {
                g = g.add(&shifted_product(n, j, 1, 2)?);
            }
            expected.compact = Some(k as usize);
            expected.non_compact = Some(0);
            expected.points = (1..=k)
                .map(|i| {
                    std::iter::once(i as f64)
                        .chain(std::iter::repeat(1.0).take(n - 1))
                        .collect()
                })
                .collect();
            expected.bound_formula = Some(k as u64);
            vec![g]
        }
        WitnessKind::G2 => {
            let k = (m.saturating_sub(1)) / (2 * n);
            if k < 1 {
                return Err(empty("g2"));
            }
            let mut g = Fewnomial::zero(n);
            for j in 0..n {
                g = g.add(&shifted_product(n, j, k, 2)?);
            }
            expected.points = grid(k, n);
            expected.compact = Some(expected.points.len());
            expected.non_compact = Some(0);
            expected.bound_formula = Some(((k - 1) as u64).pow(n as u32));
            vec![g]
        }
        WitnessKind::H1 => {
            if m < 2 {
                return Err(empty("h1"));
            }
            expected.compact = Some(0);
            expected.non_compact = Some(m - 1);
            expected.bound_formula = Some(m as u64 - 1);
            vec![shifted_product(n, 0, m - 1, 1)?]
        }
        WitnessKind::H2 => {
            if n < 2 {
                return Err(empty("h2"));
            }
            let k = m.saturating_sub(1) / (2 * n - 2);
            if k < 1 {
                return Err(empty("h2"));
            }
            let mut g = Fewnomial::zero(n);
            for j in 0..n - 1 {
                g = g.add(&shifted_product(n, j, k, 2)?);
            }
            expected.compact = Some(0);
            expected.non_compact = Some(k.pow(n as u32 - 1));
            expected.bound_formula = Some(((k - 1) as u64).pow(n as u32 - 1));
            vec![g]
        }
        WitnessKind::EqEasy => {
            if m < 2 {
                return Err(empty("eq-easy"));
            }
            expected.points = grid(m - 1, n);
            expected.roots = Some(expected.points.len());
            expected.bound_formula = Some(((m - 1) as u64).pow(n as u32));
            (0..n)
                .map(|j| shifted_product(n, j, m - 1, 1))
                .collect::<Result<_>>()?
        }
        WitnessKind::EqDegen => {
            let z_minus_one = Fewnomial::new(
                3,
                vec![
                    Term::new(1.0, vec![0.0, 0.0, 1.0]),
                    Term::new(-1.0, vec![0.0; 3]),
                ],
            )?;
            let x = Fewnomial::variable(3, 0);
            let y = Fewnomial::variable(3, 1);
            let third = shifted_product(3, 0, 5, 2)?.add(&shifted_product(3, 1, 5, 2)?);
            expected.points = grid(5, 2)
                .into_iter()
                .map(|mut p| {
                    p.push(1.0);
                    p
                })
                .collect();
            expected.roots = Some(25);
            expected.bound_formula = Some(20);
            vec![x.mul(&z_minus_one), y.mul(&z_minus_one), third]
        }
    };
    expected.terms = members.iter().map(|g| g.len()).collect();
    Ok(Witness {
        kind,
        system: FewnomialSystem::new(members)?,
        expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::parse_system;

    fn sys(s: &str) -> FewnomialSystem {
        parse_system(s).unwrap()
    }

    fn v(r: &BoundReport) -> u64 {
        r.value.to_u64().unwrap()
    }

    #[test]
    fn khovanski_values() {
        assert_eq!(khovanski_fewnomial(2, 5), big(248832));
        assert_eq!(khovanski_fewnomial(2, 4), big(5184));
        assert_eq!(
            khovanski_mixed(2, 5, &[1, 200]).unwrap(),
            "68878994643353600".parse::<BigUint>().unwrap()
        );
        assert_eq!(khovanski_mixed(2, 2, &[1, 1]).unwrap(), big(18));
        assert_eq!(khovanski_mixed(3, 0, &[1, 1, 1]).unwrap(), big(1));
        for m in 2..10 {
            assert!(khovanski_fewnomial(1, m) > big(m - 1));
            assert_eq!(v(&k_prime(1, m)), m - 1);
        }
        assert_eq!(v(&k_prime(2, 4)), 5);
    }

    #[test]
    fn general_component_count() {
        // 2^{1/2}·3·2 = 8.48...
        assert_eq!(component_count_general(1, 1), big(8));
    }

    #[test]
    fn part_c() {
        assert_eq!(part_c_bound(100.0, 200), big(801));
        assert_eq!(part_c_bound(0.0, 0), big(1));
        assert_eq!(v(&part_c_report(9.0, 3)), 19);
        assert_eq!(v(&part_c_report(100.0, 200)), 801);
    }

    #[test]
    fn dispatcher_examples() {
        let haas = sys(
            r#"{"n":2,"polys":[[{"c":1,"a":[108,0]},{"c":1.1,"a":[0,54]},{"c":-1.1,"a":[0,1]}],
                                          [{"c":1,"a":[0,108]},{"c":1.1,"a":[54,0]},{"c":-1.1,"a":[1,0]}]]}"#,
        );
        let r = best_root_bound(&haas).unwrap();
        assert_eq!(v(&r), 5);
        assert_eq!(r.binding_rule(), "trinomial-pair");
        let binomial = sys(
            r#"{"n":2,"polys":[[{"c":1,"a":[2,1]},{"c":-2,"a":[0,0]}],[{"c":1,"a":[1,1]},{"c":-1,"a":[0,0]}]]}"#,
        );
        let r = best_root_bound(&binomial).unwrap();
        assert_eq!(v(&r), 1);
        assert_eq!(r.binding_rule(), "shared-simplex-support");
        let peel = sys(
            r#"{"n":3,"polys":[[{"c":1,"a":[1,0,0]},{"c":-2,"a":[0,0,0]}],
                                          [{"c":1,"a":[0,1,0]},{"c":-1,"a":[0,0,1]}],
                                          [{"c":1,"a":[1,1,1]},{"c":-3,"a":[0,2,1]},{"c":1,"a":[2,0,3]}]]}"#,
        );
        assert!(v(&best_root_bound(&peel).unwrap()) <= 2);
        let short =
            sys(r#"{"n":2,"polys":[[{"c":1,"a":[1,0]}],[{"c":1,"a":[0,1]},{"c":-1,"a":[0,0]}]]}"#);
        assert_eq!(v(&best_root_bound(&short).unwrap()), 0);
        let uni = sys(
            r#"{"n":1,"polys":[[{"c":1,"a":[0]},{"c":-3,"a":[0.5]},{"c":1,"a":[2.5]},{"c":1,"a":[3]}]]}"#,
        );
        assert_eq!(v(&best_root_bound(&uni).unwrap()), 2);
    }

    #[test]
    fn structured_member_example() {
        // Trinomial plus β0 + β₋₁ S1 + Σ β_k (S1 S2)^k with S1 = x^{0.3} y^{1.1}, S2 = x^{0.7} y^{-0.4}.
        let (g1, g2) = ([0.3, 1.1], [0.7, -0.4]);
        let mut second = vec![Term::new(1.0, vec![0.0, 0.0]), Term::new(-2.0, g1.to_vec())];
        for k in 1..=100 {
            let e = vec![k as f64 * (g1[0] + g2[0]), k as f64 * (g1[1] + g2[1])];
            second.push(Term::new(if k % 2 == 0 { 1.0 } else { -1.5 }, e));
        }
        let first = Fewnomial::new(
            2,
            vec![
                Term::new(1.0, vec![0.0, 0.0]),
                Term::new(-1.0, vec![1.3, 0.2]),
                Term::new(2.0, vec![-0.4, 2.0]),
            ],
        )
        .unwrap();
        let f = FewnomialSystem::new(vec![first, Fewnomial::new(2, second).unwrap()]).unwrap();
        let s = Structure {
            rho: Some(RhoHint {
                member: 1,
                generators: [g1, g2],
            }),
        };
        let r = best_root_bound_with(&f, &s).unwrap();
        assert_eq!(v(&r), 801);
        assert_eq!(r.binding_rule(), "structured-member-features");
        assert!(best_root_bound(&f).unwrap().value > ExtInt::from(801));
    }

    #[test]
    fn polygon_classes() {
        let tri = sys(
            r#"{"n":2,"polys":[[{"c":1,"a":[2,0]},{"c":1,"a":[0,2]},{"c":-25,"a":[0,0]}],
                                         [{"c":1,"a":[1,0]},{"c":1,"a":[0,1]},{"c":-7,"a":[0,0]}]]}"#,
        );
        assert_eq!(v(&polygon_class_bound(&tri).unwrap()), 2);
        let quad = sys(
            r#"{"n":2,"polys":[[{"c":1,"a":[2,0]},{"c":-3,"a":[1,0]},{"c":2,"a":[0,0]}],
                                          [{"c":1,"a":[0,2]},{"c":-3,"a":[0,1]},{"c":2,"a":[0,0]}]]}"#,
        );
        assert_eq!(v(&polygon_class_bound(&quad).unwrap()), 4);
        let pent = sys(
            r#"{"n":2,"polys":[[{"c":1,"a":[0,2]},{"c":-7,"a":[0,1]},{"c":12,"a":[0,0]}],
                                          [{"c":-1,"a":[0,0]},{"c":1,"a":[1,1]},{"c":-1,"a":[2,0]}]]}"#,
        );
        assert_eq!(v(&polygon_class_bound(&pent).unwrap()), 4);
    }

    #[test]
    fn component_table() {
        for n in 1..=6u64 {
            for m in 0..=6u64 {
                let b = component_bounds(n, m).unwrap();
                assert!(b.compact_lower.value <= b.compact_upper.value, "{n} {m}");
                assert!(
                    b.non_compact_lower.value <= b.non_compact_upper.value,
                    "{n} {m}"
                );
                if n == 1 && m >= 1 {
                    assert_eq!(v(&b.compact_upper), m - 1);
                    assert_eq!(v(&b.compact_lower), m - 1);
                    assert_eq!(v(&b.non_compact_upper), 0);
                }
                if m == 0 {
                    assert_eq!(v(&b.non_compact_upper), 1);
                    assert_eq!(v(&b.non_compact_lower), 1);
                }
            }
            let b = component_bounds(n + 1, 2).unwrap();
            assert_eq!(v(&b.compact_upper), 0);
            assert_eq!(v(&b.non_compact_upper), 1);
            assert_eq!(v(&b.non_compact_lower), 1);
        }
        let b = component_bounds(2, 4).unwrap();
        assert_eq!(v(&b.compact_upper), 4);
        assert_eq!(v(&b.non_compact_upper), 4);
        assert_eq!(v(&b.total_upper), 10);
        assert_eq!(v(&component_bounds(2, 5).unwrap().compact_lower), 0);
    }

    #[test]
    fn snub_pyramid() {
        let (a, b, c) = (1.0, 1.0, 1.0);
        let e = |x: f64, y: f64, z: f64| vec![x, y, z];
        let f = Fewnomial::new(
            3,
            vec![
                Term::new(1.0, e(0.0, 0.0, 0.0)),
                Term::new(2.0, e(3.0 * a, 0.0, 0.0)),
                Term::new(-1.5, e(0.0, 0.0, 3.0 * c)),
                Term::new(0.5, e(3.0 * a, 0.0, 3.0 * c)),
                Term::new(1.0, e(a, b, c)),
                Term::new(-2.0, e(2.0 * a, b, c)),
                Term::new(3.0, e(a, b, 2.0 * c)),
                Term::new(-1.0, e(2.0 * a, b, 2.0 * c)),
                Term::new(0.7, e(1.5 * a, 0.5 * b, 1.5 * c)),
            ],
        )
        .unwrap();
        assert!(moment_facet_bound(&f, false).is_err());
        let r = moment_facet_bound(&f, true).unwrap();
        assert_eq!(v(&r), 60);
    }

    #[test]
    fn facet_bound_line_product() {
        // y − Π_{i=1}^{4} (x − i).
        let p = shifted_product(2, 0, 4, 1).unwrap();
        let f = Fewnomial::variable(2, 1).sub(&p);
        assert_eq!(v(&moment_facet_bound(&f, true).unwrap()), 3);
        let tri = Fewnomial::new(
            2,
            vec![
                Term::new(1.0, vec![0.0, 0.0]),
                Term::new(-1.0, vec![1.0, 0.0]),
                Term::new(-1.0, vec![0.0, 1.0]),
            ],
        )
        .unwrap();
        assert_eq!(v(&moment_facet_bound(&tri, false).unwrap()), 1);
    }

    #[test]
    fn curve_features() {
        let b = curve_feature_bounds(3, None);
        assert_eq!((v(&b.vertical), v(&b.inflections)), (1, 3));
        let b = curve_feature_bounds(2, None);
        assert_eq!((v(&b.vertical), v(&b.inflections)), (0, 0));
        let b = curve_feature_bounds(
            6,
            Some(RhoData {
                area: 2.0,
                degree: 2,
            }),
        );
        assert_eq!((v(&b.vertical), v(&b.inflections)), (2, 6));
        assert!(!curve_feature_bounds(6, None).inflections.value.is_finite());
    }

    #[test]
    fn witnesses() {
        let w = make_witness(WitnessKind::EqDegen, 3, 0).unwrap();
        assert_eq!(w.system.type_signature(), vec![2, 2, 21]);
        for p in &w.expected.points {
            assert!(w
                .system
                .evaluate(p)
                .unwrap()
                .iter()
                .all(|r| r.abs() < 1e-10));
        }
        let h1 = make_witness(WitnessKind::H1, 2, 5).unwrap();
        assert_eq!(h1.expected.non_compact, Some(4));
        assert!(h1.system.members()[0]
            .terms()
            .iter()
            .all(|t| t.exponent[1] == 0.0));
        let g2 = make_witness(WitnessKind::G2, 2, 13).unwrap();
        assert_eq!(g2.expected.compact, Some(9));
        assert_eq!(g2.expected.bound_formula, Some(4));
        let g1 = make_witness(WitnessKind::G1, 2, 12).unwrap();
        assert_eq!(g1.expected.terms, vec![2 * 6 - 3]);
        for p in &g1.expected.points {
            assert_eq!(g1.system.members()[0].evaluate(p).unwrap(), 0.0);
        }
        let easy = make_witness(WitnessKind::EqEasy, 2, 4).unwrap();
        assert_eq!(easy.expected.roots, Some(9));
        assert!(make_witness(WitnessKind::G1, 3, 7).is_err());
        assert!(make_witness(WitnessKind::H1, 2, 40).is_err());
    }
}
