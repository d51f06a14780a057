//! Bivariate curve analysis: inflection and vertical tangency systems, line
//! intersections, the momentum map, and grid-based component counting.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::num::max_norm_dist;
use crate::polytope::{Polygon, PolytopeInfo};
use crate::reduce::polish_root;
use crate::system::{Fewnomial, FewnomialSystem, Term};
use crate::univar::{isolate_expsum_roots, ExponentialSum};

pub const DEFAULT_WINDOW: f64 = 12.0;
pub const DEFAULT_GRID: usize = 1024;
/// Grid nodes with |f| below this fraction of the term scale are ambiguous.
pub const TAU_NODE: f64 = 1e-13;
/// Polished trace points must satisfy |f| below this fraction of the term scale.
pub const TAU_TRACE: f64 = 1e-6;

fn require_bivariate(f: &Fewnomial) -> Result<()> {
    if f.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: f.dim(),
        });
    }
    Ok(())
}

/// x1² x2² times the inflection form f11 f2² − 2 f12 f1 f2 + f22 f1², written
/// with the log-derivatives θi = xi ∂i.
pub fn inflection_form(f: &Fewnomial) -> Result<Fewnomial> {
    require_bivariate(f)?;
    let t1 = f.log_derivative(0);
    let t2 = f.log_derivative(1);
    let t11 = t1.log_derivative(0).sub(&t1);
    let t22 = t2.log_derivative(1).sub(&t2);
    let t12 = t1.log_derivative(1);
    let a = t11.mul(&t2.mul(&t2));
    let b = t12.mul(&t1).mul(&t2).scale(2.0);
    let c = t22.mul(&t1.mul(&t1));
    Ok(a.sub(&b).add(&c))
}

/// (f, x2 ∂2 f).
pub fn vertical_tangency_system(f: &Fewnomial) -> Result<FewnomialSystem> {
    require_bivariate(f)?;
    FewnomialSystem::new(vec![f.clone(), f.log_derivative(1)])
}

/// Normalized evaluation of f(exp z) and its gradient.
#[derive(Clone, Debug)]
struct LogPoly {
    terms: Vec<(f64, [f64; 2])>,
}

impl LogPoly {
    fn new(f: &Fewnomial) -> LogPoly {
        LogPoly {
            terms: f
                .terms()
                .iter()
                .map(|t| (t.coeff, [t.exponent[0], t.exponent[1]]))
                .collect(),
        }
    }

    fn logs(&self, z: [f64; 2]) -> (Vec<f64>, f64) {
        let l: Vec<f64> = self
            .terms
            .iter()
            .map(|(c, a)| c.abs().ln() + a[0] * z[0] + a[1] * z[1])
            .collect();
        let max = l.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        (l, max)
    }

    /// f / scale, where scale is the sum of absolute term values.
    fn relative(&self, z: [f64; 2]) -> f64 {
        let (l, max) = self.logs(z);
        let (mut v, mut s) = (0.0, 0.0);
        for ((c, _), li) in self.terms.iter().zip(&l) {
            let w = (li - max).exp();
            v += c.signum() * w;
            s += w;
        }
        if s == 0.0 {
            0.0
        } else {
            v / s
        }
    }

    /// (f, θf), both divided by the scale.
    fn with_gradient(&self, z: [f64; 2]) -> (f64, [f64; 2]) {
        let (l, max) = self.logs(z);
        let (mut v, mut g, mut s) = (0.0, [0.0; 2], 0.0);
        for ((c, a), li) in self.terms.iter().zip(&l) {
            let w = (li - max).exp();
            let sw = c.signum() * w;
            v += sw;
            g[0] += sw * a[0];
            g[1] += sw * a[1];
            s += w;
        }
        if s == 0.0 {
            return (0.0, [0.0; 2]);
        }
        (v / s, [g[0] / s, g[1] / s])
    }
}

fn polish_point(p: &LogPoly, z: [f64; 2], max_move: f64) -> ([f64; 2], f64) {
    let mut best = z;
    let mut res = p.relative(z).abs();
    for _ in 0..6 {
        if res < 1e-15 {
            break;
        }
        let (v, g) = p.with_gradient(best);
        let n2 = g[0] * g[0] + g[1] * g[1];
        if n2 == 0.0 {
            break;
        }
        let cand = [best[0] - v * g[0] / n2, best[1] - v * g[1] / n2];
        if max_norm_dist(&cand, &z) > max_move {
            break;
        }
        let r = p.relative(cand).abs();
        if r < res {
            best = cand;
            res = r;
        } else {
            break;
        }
    }
    (best, res)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Escape {
    /// Last traced point, in log coordinates.
    pub point: [f64; 2],
    /// Unit direction of the final stretch of the trace.
    pub direction: [f64; 2],
    /// Index into the facets of the Newton polygon whose outer normal is
    /// closest to the escape direction.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub facet: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub facet_normal: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentTrace {
    pub compact: bool,
    pub closed: bool,
    pub touches_boundary: bool,
    /// Polyline in log coordinates.
    pub points: Vec<[f64; 2]>,
    pub escapes: Vec<Escape>,
    /// Largest |f| relative to the term scale over the polyline.
    pub max_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentReport {
    pub window: f64,
    pub grid: usize,
    pub compact: usize,
    pub non_compact: usize,
    pub components: Vec<ComponentTrace>,
    /// Counts agreed with a rerun on the doubled window.
    pub stable: bool,
    /// Components whose classification changed under window doubling.
    pub indeterminate: usize,
    pub ambiguous_nodes: usize,
    pub certified: bool,
    pub diagnostics: Vec<String>,
}

impl ComponentReport {
    pub fn total(&self) -> usize {
        self.compact + self.non_compact
    }
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra as usize] = rb;
        }
    }
}

struct Trace {
    components: Vec<ComponentTrace>,
    ambiguous: usize,
}

const NONE: u32 = u32::MAX;

fn trace(f: &Fewnomial, window: f64, grid: usize, offset: f64, facets: &[Vec<f64>]) -> Trace {
    let p = LogPoly::new(f);
    let g = grid;
    let h = 2.0 * window / g as f64;
    let node = |i: usize, j: usize| {
        [
            -window + offset * h + i as f64 * h,
            -window + offset * h * 0.618 + j as f64 * h,
        ]
    };
    let rows: Vec<Vec<f64>> = (0..=g)
        .into_par_iter()
        .map(|j| (0..=g).map(|i| p.relative(node(i, j))).collect())
        .collect();
    let ambiguous = rows.iter().flatten().filter(|v| v.abs() < TAU_NODE).count();
    let pos = |i: usize, j: usize| rows[j][i] >= 0.0;

    let hcount = g * (g + 1);
    let hid = |i: usize, j: usize| j * g + i;
    let vid = |i: usize, j: usize| hcount + i * g + j;
    let mut index = vec![NONE; 2 * hcount];
    let mut ends: Vec<([f64; 2], [f64; 2], bool)> = Vec::new();
    for j in 0..=g {
        for i in 0..g {
            if pos(i, j) != pos(i + 1, j) {
                index[hid(i, j)] = ends.len() as u32;
                ends.push((node(i, j), node(i + 1, j), j == 0 || j == g));
            }
        }
    }
    for i in 0..=g {
        for j in 0..g {
            if pos(i, j) != pos(i, j + 1) {
                index[vid(i, j)] = ends.len() as u32;
                ends.push((node(i, j), node(i, j + 1), i == 0 || i == g));
            }
        }
    }
    let count = ends.len();
    let mut adj = vec![[NONE; 2]; count];
    let mut uf = UnionFind::new(count);
    let mut link = |a: u32, b: u32, adj: &mut Vec<[u32; 2]>| {
        for (x, y) in [(a, b), (b, a)] {
            let slot = &mut adj[x as usize];
            if slot[0] == NONE {
                slot[0] = y;
            } else {
                slot[1] = y;
            }
        }
        uf.union(a, b);
    };
    for j in 0..g {
        for i in 0..g {
            let (b, t, l, r) = (
                index[hid(i, j)],
                index[hid(i, j + 1)],
                index[vid(i, j)],
                index[vid(i + 1, j)],
            );
            let crossing: Vec<u32> = [b, r, t, l].into_iter().filter(|&e| e != NONE).collect();
            match crossing.len() {
                2 => link(crossing[0], crossing[1], &mut adj),
                4 => {
                    let c = node(i, j);
                    let center = p.relative([c[0] + 0.5 * h, c[1] + 0.5 * h]) >= 0.0;
                    if center == pos(i, j) {
                        link(b, r, &mut adj);
                        link(t, l, &mut adj);
                    } else {
                        link(b, l, &mut adj);
                        link(t, r, &mut adj);
                    }
                }
                _ => {}
            }
        }
    }

    let points: Vec<([f64; 2], f64)> = ends
        .par_iter()
        .map(|(a, b, _)| {
            let sa = p.relative(*a) >= 0.0;
            let (mut lo, mut hi) = (*a, *b);
            for _ in 0..40 {
                let mid = [(lo[0] + hi[0]) / 2.0, (lo[1] + hi[1]) / 2.0];
                if (p.relative(mid) >= 0.0) == sa {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let z = [(lo[0] + hi[0]) / 2.0, (lo[1] + hi[1]) / 2.0];
            polish_point(&p, z, h)
        })
        .collect();

    let mut seen = vec![false; count];
    let mut components = Vec::new();
    let mut order: Vec<u32> = (0..count as u32).collect();
    // Start chains at their ends so open chains are walked in one pass.
    order.sort_by_key(|&k| adj[k as usize][1] != NONE);
    for start in order {
        if seen[start as usize] {
            continue;
        }
        let mut chain = vec![start];
        seen[start as usize] = true;
        let mut prev = NONE;
        let mut cur = start;
        loop {
            let next = adj[cur as usize]
                .into_iter()
                .find(|&x| x != NONE && x != prev && !seen[x as usize]);
            match next {
                Some(x) => {
                    seen[x as usize] = true;
                    chain.push(x);
                    prev = cur;
                    cur = x;
                }
                None => break,
            }
        }
        let touches = chain.iter().any(|&k| ends[k as usize].2);
        let closed = !touches && chain.len() > 2;
        let pts: Vec<[f64; 2]> = chain.iter().map(|&k| points[k as usize].0).collect();
        let max_residual = chain
            .iter()
            .map(|&k| points[k as usize].1)
            .fold(0.0, f64::max);
        let mut escapes = Vec::new();
        if touches {
            let back = (pts.len() / 8).clamp(1, 64).min(pts.len() - 1);
            for (end, prev) in [
                (pts[pts.len() - 1], pts[pts.len() - 1 - back]),
                (pts[0], pts[back]),
            ] {
                escapes.push(escape(end, prev, facets));
            }
        }
        components.push(ComponentTrace {
            compact: !touches,
            closed,
            touches_boundary: touches,
            points: pts,
            escapes,
            max_residual,
        });
    }
    Trace {
        components,
        ambiguous,
    }
}

fn escape(end: [f64; 2], prev: [f64; 2], facets: &[Vec<f64>]) -> Escape {
    let d = [end[0] - prev[0], end[1] - prev[1]];
    let norm = (d[0] * d[0] + d[1] * d[1]).sqrt();
    let direction = if norm > 0.0 {
        [d[0] / norm, d[1] / norm]
    } else {
        [0.0, 0.0]
    };
    // Escaping along d makes the terms maximizing a·d dominant: the face
    // with outer normal d, i.e. inner normal −d.
    let best = facets
        .iter()
        .enumerate()
        .map(|(k, w)| (k, -(w[0] * direction[0] + w[1] * direction[1])))
        .max_by(|a, b| a.1.total_cmp(&b.1));
    Escape {
        point: end,
        direction,
        facet: best.map(|b| b.0),
        facet_normal: best.map(|b| facets[b.0].clone()),
    }
}

fn facet_normals(f: &Fewnomial) -> Vec<Vec<f64>> {
    match PolytopeInfo::of(f) {
        Ok(info) if info.dim == 2 => info.facets.iter().map(|fc| fc.normal.clone()).collect(),
        _ => Vec::new(),
    }
}

fn best_trace(f: &Fewnomial, window: f64, grid: usize, facets: &[Vec<f64>]) -> Trace {
    let first = trace(f, window, grid, 0.3137, facets);
    if first.ambiguous == 0 {
        return first;
    }
    let second = trace(f, window, grid, 0.7253, facets);
    if second.ambiguous < first.ambiguous {
        second
    } else {
        first
    }
}

fn counts(t: &Trace) -> (usize, usize) {
    let c = t.components.iter().filter(|c| c.compact).count();
    (c, t.components.len() - c)
}

/// Connected components of the positive zero set seen in the log-coordinate
/// window [−W, W]², with a compactness check on the doubled window.
pub fn count_components(f: &Fewnomial, window: f64, grid: usize) -> Result<ComponentReport> {
    require_bivariate(f)?;
    if f.is_empty() {
        return Err(Error::Continuum(
            "the zero polynomial vanishes everywhere".into(),
        ));
    }
    if !(window > 0.0) || grid < 2 {
        return Err(Error::Validation(
            "window must be positive and grid at least 2".into(),
        ));
    }
    let facets = facet_normals(f);
    let main = best_trace(f, window, grid, &facets);
    let wide = best_trace(f, 2.0 * window, grid, &facets);
    let (compact, non_compact) = counts(&main);
    let (wc, wn) = counts(&wide);
    let stable = (compact, non_compact) == (wc, wn);
    let indeterminate = compact.abs_diff(wc).max(non_compact.abs_diff(wn));
    let mut diagnostics = Vec::new();
    if !stable {
        diagnostics.push(format!(
            "doubled window gives {wc} compact and {wn} non-compact components"
        ));
    }
    let ambiguous_nodes = main.ambiguous;
    if ambiguous_nodes > 0 {
        diagnostics.push(format!(
            "{ambiguous_nodes} grid nodes lie on the curve to working precision"
        ));
    }
    let worst = main
        .components
        .iter()
        .map(|c| c.max_residual)
        .fold(0.0, f64::max);
    if worst >= TAU_TRACE {
        diagnostics.push(format!("trace residual {worst:.3e} after polishing"));
    }
    Ok(ComponentReport {
        window,
        grid,
        compact,
        non_compact,
        components: main.components,
        stable,
        indeterminate,
        ambiguous_nodes,
        certified: stable && ambiguous_nodes == 0 && worst < TAU_TRACE,
        diagnostics,
    })
}

/// Isolated inflections and vertical tangencies found along the traced curve.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FeatureCount {
    pub inflections: usize,
    pub vertical: usize,
    pub non_compact: usize,
    pub inflection_points: Vec<Vec<f64>>,
    pub vertical_points: Vec<Vec<f64>>,
    /// The inflection form vanishes along a whole traced component.
    pub inflection_locus: bool,
    pub vertical_locus: bool,
}

pub fn count_curve_features(f: &Fewnomial) -> Result<FeatureCount> {
    count_curve_features_with(f, DEFAULT_WINDOW, DEFAULT_GRID)
}

pub fn count_curve_features_with(f: &Fewnomial, window: f64, grid: usize) -> Result<FeatureCount> {
    require_bivariate(f)?;
    let report = count_components(f, window, grid)?;
    let h = inflection_form(f)?;
    let v = f.log_derivative(1);
    let (inflection_points, inflection_locus) = feature_points(f, &h, &report)?;
    let (vertical_points, vertical_locus) = feature_points(f, &v, &report)?;
    Ok(FeatureCount {
        inflections: inflection_points.len(),
        vertical: vertical_points.len(),
        non_compact: report.non_compact,
        inflection_points,
        vertical_points,
        inflection_locus,
        vertical_locus,
    })
}

fn feature_points(
    f: &Fewnomial,
    g: &Fewnomial,
    report: &ComponentReport,
) -> Result<(Vec<Vec<f64>>, bool)> {
    let lp = LogPoly::new(g);
    let sys = FewnomialSystem::new(vec![f.clone(), g.clone()])?;
    let mut found: Vec<Vec<f64>> = Vec::new();
    let mut locus = false;
    for c in &report.components {
        let vals: Vec<f64> = c
            .points
            .iter()
            .map(|z| if g.is_empty() { 0.0 } else { lp.relative(*z) })
            .collect();
        let flat = vals.iter().filter(|v| v.abs() < 1e-9).count();
        if flat * 10 >= vals.len() * 9 {
            locus = true;
            continue;
        }
        let mut pairs: Vec<(usize, usize)> = (1..vals.len()).map(|k| (k - 1, k)).collect();
        if c.closed {
            pairs.push((vals.len() - 1, 0));
        }
        for (a, b) in pairs {
            if (vals[a] < 0.0) == (vals[b] < 0.0) {
                continue;
            }
            let t = vals[a] / (vals[a] - vals[b]);
            let (za, zb) = (c.points[a], c.points[b]);
            let seed = [
                (za[0] + t * (zb[0] - za[0])).exp(),
                (za[1] + t * (zb[1] - za[1])).exp(),
            ];
            let x = polish_root(&sys, &seed);
            let z: Vec<f64> = x.iter().map(|v| v.ln()).collect();
            let dup = found.iter().any(|q| {
                let zq: Vec<f64> = q.iter().map(|v| v.ln()).collect();
                max_norm_dist(&zq, &z) < 1e-6 * (1.0 + z[0].abs().max(z[1].abs()))
            });
            if !dup {
                found.push(x);
            }
        }
    }
    Ok((found, locus))
}

/// I + N + V + 1.
pub fn line_intersection_bound(inflections: u64, non_compact: u64, vertical: u64) -> u64 {
    inflections + non_compact + vertical + 1
}

/// The line a·x + b·y = c.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Line {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LineCheck {
    pub count: usize,
    pub bound: u64,
    /// None when the line seems to overlap the curve.
    pub pass: Option<bool>,
}

/// Crossings of a traced curve with a line, or None on apparent overlap.
pub fn count_line_crossings(report: &ComponentReport, line: &Line) -> Option<usize> {
    let mut count = 0;
    for c in &report.components {
        let vals: Vec<(f64, f64)> = c
            .points
            .iter()
            .map(|z| {
                let (x, y) = (z[0].exp(), z[1].exp());
                (
                    line.a * x + line.b * y - line.c,
                    (line.a * x).abs() + (line.b * y).abs() + line.c.abs(),
                )
            })
            .collect();
        let mut run = 0;
        for (v, s) in &vals {
            if v.abs() <= 1e-9 * s {
                run += 1;
                if run >= 3 {
                    return None;
                }
            } else {
                run = 0;
            }
        }
        let mut pairs: Vec<(usize, usize)> = (1..vals.len()).map(|k| (k - 1, k)).collect();
        if c.closed {
            pairs.push((vals.len() - 1, 0));
        }
        count += pairs
            .iter()
            .filter(|(a, b)| (vals[*a].0 < 0.0) != (vals[*b].0 < 0.0))
            .count();
    }
    Some(count)
}

pub fn check_line_intersections(f: &Fewnomial, line: &Line, bound: u64) -> Result<LineCheck> {
    let report = count_components(f, DEFAULT_WINDOW, DEFAULT_GRID)?;
    Ok(match count_line_crossings(&report, line) {
        Some(count) => LineCheck {
            count,
            bound,
            pass: Some(count as u64 <= bound),
        },
        None => LineCheck {
            count: 0,
            bound,
            pass: None,
        },
    })
}

/// ψ_P(x) = Σ p x^p / Σ x^p over the vertices p of a full-dimensional P.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentumMap {
    vertices: Vec<Vec<f64>>,
    facets: Vec<(Vec<f64>, f64)>,
    diameter: f64,
}

impl MomentumMap {
    pub fn new(p: &PolytopeInfo) -> Result<MomentumMap> {
        if p.dim != p.ambient || p.dim == 0 {
            return Err(Error::NotApplicable(
                "momentum map needs a full-dimensional polytope".into(),
            ));
        }
        let vertices = p.vertex_points();
        let mut diameter: f64 = 0.0;
        for a in &vertices {
            for b in &vertices {
                diameter = diameter.max(max_norm_dist(a, b));
            }
        }
        let facets = p
            .facets
            .iter()
            .map(|f| (f.normal.clone(), f.offset))
            .collect();
        Ok(MomentumMap {
            vertices,
            facets,
            diameter,
        })
    }

    pub fn from_polygon(p: &Polygon) -> Result<MomentumMap> {
        let pts: Vec<Vec<f64>> = p.vertices().iter().map(|v| v.to_vec()).collect();
        Self::new(&PolytopeInfo::from_points(&pts)?)
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].len()
    }

    fn weights(&self, z: &[f64]) -> Vec<f64> {
        let l: Vec<f64> = self
            .vertices
            .iter()
            .map(|p| p.iter().zip(z).map(|(a, b)| a * b).sum())
            .collect();
        let max = l.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let w: Vec<f64> = l.iter().map(|v| (v - max).exp()).collect();
        let s: f64 = w.iter().sum();
        w.into_iter().map(|v| v / s).collect()
    }

    /// ψ_P(exp z).
    pub fn forward_log(&self, z: &[f64]) -> Vec<f64> {
        let w = self.weights(z);
        (0..self.dim())
            .map(|i| self.vertices.iter().zip(&w).map(|(p, wk)| wk * p[i]).sum())
            .collect()
    }

    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        if x.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(Error::Domain("momentum map needs a positive point".into()));
        }
        let z: Vec<f64> = x.iter().map(|v| v.ln()).collect();
        Ok(self.forward_log(&z))
    }

    /// Smallest distance from q to a facet hyperplane; negative outside.
    pub fn boundary_distance(&self, q: &[f64]) -> f64 {
        self.facets
            .iter()
            .map(|(w, c)| w.iter().zip(q).map(|(a, b)| a * b).sum::<f64>() - c)
            .fold(f64::INFINITY, f64::min)
    }

    /// Log coordinates of the preimage of an interior point.
    pub fn inverse_log(&self, q: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        if q.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: q.len(),
            });
        }
        if self.boundary_distance(q) <= 1e-6 * self.diameter {
            return Err(Error::NearBoundary);
        }
        // ψ is the gradient of Φ(z) = log Σ exp(p·z); minimize Φ(z) − q·z.
        let objective = |z: &[f64]| {
            let l: Vec<f64> = self
                .vertices
                .iter()
                .map(|p| p.iter().zip(z).map(|(a, b)| a * b).sum())
                .collect();
            let max = l.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            max + l.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
                - q.iter().zip(z).map(|(a, b)| a * b).sum::<f64>()
        };
        let tol = 1e-12 * self.diameter.max(1.0);
        let mut z = vec![0.0; n];
        let mut phi = objective(&z);
        for _ in 0..500 {
            let w = self.weights(&z);
            let psi = self.forward_log(&z);
            let grad: Vec<f64> = psi.iter().zip(q).map(|(a, b)| a - b).collect();
            if grad.iter().all(|g| g.abs() < tol) {
                break;
            }
            let hess = DMatrix::from_fn(n, n, |i, j| {
                self.vertices
                    .iter()
                    .zip(&w)
                    .map(|(p, wk)| wk * (p[i] - psi[i]) * (p[j] - psi[j]))
                    .sum()
            });
            let g = DVector::from_vec(grad.clone());
            let step = match hess.clone().cholesky() {
                Some(ch) => ch.solve(&g),
                None => g.clone(),
            };
            let mut t = 1.0;
            let mut moved = false;
            for _ in 0..60 {
                let cand: Vec<f64> = z.iter().zip(step.iter()).map(|(a, s)| a - t * s).collect();
                let val = objective(&cand);
                if val <= phi {
                    z = cand;
                    phi = val;
                    moved = true;
                    break;
                }
                t *= 0.5;
            }
            if !moved {
                break;
            }
        }
        let res = max_norm_dist(&self.forward_log(&z), q);
        if res >= 1e-8 * self.diameter.max(1.0) {
            return Err(Error::Numerical(format!(
                "momentum inverse residual {res:.3e}"
            )));
        }
        Ok(z)
    }

    pub fn inverse(&self, q: &[f64]) -> Result<Vec<f64>> {
        Ok(self.inverse_log(q)?.iter().map(|v| v.exp()).collect())
    }
}

pub fn momentum_map(p: &PolytopeInfo, x: &[f64]) -> Result<Vec<f64>> {
    MomentumMap::new(p)?.forward(x)
}

pub fn momentum_inverse(p: &PolytopeInfo, q: &[f64]) -> Result<Vec<f64>> {
    MomentumMap::new(p)?.inverse(q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FacetStatus {
    Certified,
    CertificateUnavailable,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FacetCount {
    /// Unit inner normal.
    pub normal: Vec<f64>,
    pub init_form: Fewnomial,
    /// Positive roots of the initial form after reduction to one variable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub roots: Option<usize>,
    pub status: FacetStatus,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FacetCertificate {
    pub facets: Vec<FacetCount>,
    /// Σ N_w, when every facet is certified.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sum: Option<usize>,
    /// Each non-compact curve component has two ends: ⌊Σ N_w / 2⌋.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub component_bound: Option<usize>,
}

impl FacetCertificate {
    /// Whether a traced count respects the certificate; None without one.
    pub fn check(&self, report: &ComponentReport) -> Option<bool> {
        self.component_bound.map(|b| report.non_compact <= b)
    }
}

/// Escape directions counted facet by facet of the Newton polygon.
pub fn facet_component_certificate(f: &Fewnomial) -> Result<FacetCertificate> {
    require_bivariate(f)?;
    let info = PolytopeInfo::of(f)?;
    if info.dim != 2 {
        return Err(Error::NotApplicable(
            "Newton polygon is not two-dimensional".into(),
        ));
    }
    let mut facets = Vec::new();
    for fc in &info.facets {
        let pts: Vec<&Vec<f64>> = fc.points.iter().map(|&k| &info.points[k]).collect();
        let terms: Vec<&Term> = f
            .terms()
            .iter()
            .filter(|t| pts.iter().any(|p| max_norm_dist(p, &t.exponent) <= 1e-12))
            .collect();
        let init_form = Fewnomial::new(2, terms.iter().map(|t| (*t).clone()).collect())?;
        let base = &info.points[info.vertices[fc.vertices[0]]];
        let tip = &info.points[info.vertices[fc.vertices[1]]];
        let e = [tip[0] - base[0], tip[1] - base[1]];
        let e2 = e[0] * e[0] + e[1] * e[1];
        // On the facet x^p = x^{base} u^t with u = x^e, so roots are values of u.
        let sum: Vec<(f64, f64)> = terms
            .iter()
            .map(|t| {
                (
                    t.coeff,
                    ((t.exponent[0] - base[0]) * e[0] + (t.exponent[1] - base[1]) * e[1]) / e2,
                )
            })
            .collect();
        let rep = isolate_expsum_roots(&ExponentialSum::new(&sum)?, 0.0, f64::INFINITY)?;
        let clean = rep.certified && rep.roots.iter().all(|r| !r.suspect);
        facets.push(FacetCount {
            normal: fc.normal.clone(),
            init_form,
            roots: clean.then(|| rep.count()),
            status: if clean {
                FacetStatus::Certified
            } else {
                FacetStatus::CertificateUnavailable
            },
        });
    }
    let sum = facets.iter().map(|f| f.roots).sum::<Option<usize>>();
    Ok(FacetCertificate {
        facets,
        sum,
        component_bound: sum.map(|s| s / 2),
    })
}
