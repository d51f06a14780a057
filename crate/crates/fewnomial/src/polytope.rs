//! Newton polytopes: planar hulls and Minkowski sums, small-dimensional
//! facet enumeration, initial forms, mixed volume zero and pyramidal flags.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::num::{dot, max_norm_dist, rank, span_basis};
use crate::system::{Fewnomial, FewnomialSystem, Term};

pub const TAU_GEO: f64 = 1e-9;
pub const TAU_RANK: f64 = 1e-8;

pub fn tau_face(min: f64) -> f64 {
    1e-9 * (1.0 + min.abs())
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Convex polygon with counter-clockwise vertices. A segment has two
/// vertices and a point one.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Polygon {
    vertices: Vec<[f64; 2]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PolygonKind {
    Point,
    Segment,
    Polygon(usize),
}

impl Polygon {
    /// Monotone-chain hull.
    pub fn hull(points: &[[f64; 2]]) -> Result<Polygon> {
        if points.is_empty() {
            return Err(Error::EmptyPolytope);
        }
        let scale = points
            .iter()
            .flat_map(|p| p.iter())
            .fold(1.0f64, |m, v| m.max(v.abs()));
        let mut pts = points.to_vec();
        pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
        pts.dedup_by(|a, b| (a[0] - b[0]).abs().max((a[1] - b[1]).abs()) <= TAU_GEO * scale);
        if pts.len() == 1 {
            return Ok(Polygon { vertices: pts });
        }
        let tol = TAU_GEO * scale * scale;
        let mut lower: Vec<[f64; 2]> = Vec::new();
        for &p in &pts {
            while lower.len() >= 2
                && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= tol
            {
                lower.pop();
            }
            lower.push(p);
        }
        let mut upper: Vec<[f64; 2]> = Vec::new();
        for &p in pts.iter().rev() {
            while upper.len() >= 2
                && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= tol
            {
                upper.pop();
            }
            upper.push(p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        if lower.len() == 2 && max_norm_dist(&lower[0], &lower[1]) <= TAU_GEO * scale {
            lower.pop();
        }
        Ok(Polygon { vertices: lower })
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    pub fn kind(&self) -> PolygonKind {
        match self.vertices.len() {
            1 => PolygonKind::Point,
            2 => PolygonKind::Segment,
            k => PolygonKind::Polygon(k),
        }
    }

    /// Twice the Euclidean area, so the unit square has area 2.
    pub fn normalized_area(&self) -> f64 {
        let v = &self.vertices;
        if v.len() < 3 {
            return 0.0;
        }
        let mut s = 0.0;
        for i in 0..v.len() {
            let j = (i + 1) % v.len();
            s += v[i][0] * v[j][1] - v[j][0] * v[i][1];
        }
        s.abs()
    }

    fn start_index(&self) -> usize {
        let mut best = 0;
        for (i, v) in self.vertices.iter().enumerate() {
            let b = self.vertices[best];
            if v[1] < b[1] || (v[1] == b[1] && v[0] < b[0]) {
                best = i;
            }
        }
        best
    }

    fn edges_from_start(&self) -> Vec<[f64; 2]> {
        let n = self.vertices.len();
        if n < 2 {
            return Vec::new();
        }
        let s = self.start_index();
        (0..n)
            .map(|k| {
                let a = self.vertices[(s + k) % n];
                let b = self.vertices[(s + k + 1) % n];
                [b[0] - a[0], b[1] - a[1]]
            })
            .collect()
    }

    /// Minkowski sum by merging the edge sequences by polar angle.
    pub fn minkowski_sum(&self, other: &Polygon) -> Polygon {
        let start = {
            let a = self.vertices[self.start_index()];
            let b = other.vertices[other.start_index()];
            [a[0] + b[0], a[1] + b[1]]
        };
        let angle = |e: &[f64; 2]| {
            let t = e[1].atan2(e[0]);
            if t < 0.0 {
                t + std::f64::consts::TAU
            } else {
                t
            }
        };
        let ea = self.edges_from_start();
        let eb = other.edges_from_start();
        let (mut i, mut j) = (0, 0);
        let mut pts = vec![start];
        let mut cur = start;
        while i < ea.len() || j < eb.len() {
            let e = if j >= eb.len() || (i < ea.len() && angle(&ea[i]) <= angle(&eb[j])) {
                i += 1;
                ea[i - 1]
            } else {
                j += 1;
                eb[j - 1]
            };
            cur = [cur[0] + e[0], cur[1] + e[1]];
            pts.push(cur);
        }
        Polygon::hull(&pts).expect("nonempty")
    }

    /// Edges as (start vertex index, unit inner normal).
    pub fn edges(&self) -> Vec<(usize, [f64; 2])> {
        let n = self.vertices.len();
        if n < 3 {
            return Vec::new();
        }
        (0..n)
            .map(|i| {
                let a = self.vertices[i];
                let b = self.vertices[(i + 1) % n];
                let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
                let len = dx.hypot(dy);
                (i, [-dy / len, dx / len])
            })
            .collect()
    }
}

/// Convex hull of the support of a bivariate fewnomial.
pub fn newton_polygon(f: &Fewnomial) -> Result<Polygon> {
    if f.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: f.dim(),
        });
    }
    let pts: Vec<[f64; 2]> = f
        .terms()
        .iter()
        .map(|t| [t.exponent[0], t.exponent[1]])
        .collect();
    Polygon::hull(&pts)
}

pub fn minkowski_sum(p: &Polygon, q: &Polygon) -> Polygon {
    p.minkowski_sum(q)
}

pub fn normalized_area(p: &Polygon) -> f64 {
    p.normalized_area()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Facet {
    /// Unit inner normal, lying in the direction space of the polytope.
    pub normal: Vec<f64>,
    pub offset: f64,
    /// Indices into `PolytopeInfo::points` of every point on the facet.
    pub points: Vec<usize>,
    /// Indices into `PolytopeInfo::vertices` of the facet's vertices.
    pub vertices: Vec<usize>,
}

/// Vertex and facet description of the hull of a small point set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolytopeInfo {
    pub ambient: usize,
    /// Deduplicated input points.
    pub points: Vec<Vec<f64>>,
    /// Indices into `points`.
    pub vertices: Vec<usize>,
    pub dim: usize,
    pub facets: Vec<Facet>,
    /// Orthonormal basis of the direction space, as rows.
    pub basis: Vec<Vec<f64>>,
}

fn cofactor_normal(rows: &[Vec<f64>], d: usize) -> Vec<f64> {
    // Generalized cross product of d-1 vectors in R^d.
    (0..d)
        .map(|k| {
            let cols: Vec<usize> = (0..d).filter(|&c| c != k).collect();
            let m = nalgebra::DMatrix::from_fn(d - 1, d - 1, |i, j| rows[i][cols[j]]);
            let det = if d == 1 { 1.0 } else { m.determinant() };
            if k % 2 == 0 {
                det
            } else {
                -det
            }
        })
        .collect()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

impl PolytopeInfo {
    pub fn from_points(points: &[Vec<f64>]) -> Result<PolytopeInfo> {
        let first = points.first().ok_or(Error::EmptyPolytope)?;
        let n = first.len();
        if n == 0 || n > 4 {
            return Err(Error::Validation(format!(
                "ambient dimension {n} outside 1..=4"
            )));
        }
        let scale = points
            .iter()
            .flat_map(|p| p.iter())
            .fold(1.0f64, |m, v| m.max(v.abs()));
        let mut pts: Vec<Vec<f64>> = Vec::new();
        for p in points {
            if p.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: p.len(),
                });
            }
            if !pts.iter().any(|q| max_norm_dist(q, p) <= TAU_GEO * scale) {
                pts.push(p.clone());
            }
        }
        let diffs: Vec<Vec<f64>> = pts
            .iter()
            .skip(1)
            .map(|p| p.iter().zip(&pts[0]).map(|(a, b)| a - b).collect())
            .collect();
        let basis = span_basis(&diffs, n, TAU_RANK);
        let d = basis.len();
        let coords: Vec<Vec<f64>> = pts
            .iter()
            .map(|p| {
                let rel: Vec<f64> = p.iter().zip(&pts[0]).map(|(a, b)| a - b).collect();
                basis.iter().map(|b| dot(b, &rel)).collect()
            })
            .collect();
        let lift = |w: &[f64]| -> Vec<f64> {
            (0..n)
                .map(|j| basis.iter().zip(w).map(|(b, c)| b[j] * c).sum())
                .collect()
        };
        let offset_of = |normal: &[f64], idx: usize| dot(normal, &pts[idx]);

        let mut facets: Vec<Facet> = Vec::new();
        let vertices: Vec<usize>;
        match d {
            0 => vertices = vec![0],
            1 => {
                let (mut lo, mut hi) = (0, 0);
                for (i, c) in coords.iter().enumerate() {
                    if c[0] < coords[lo][0] {
                        lo = i;
                    }
                    if c[0] > coords[hi][0] {
                        hi = i;
                    }
                }
                vertices = vec![lo, hi];
                for (idx, sign) in [(lo, 1.0), (hi, -1.0)] {
                    let normal = lift(&[sign]);
                    let offset = offset_of(&normal, idx);
                    facets.push(Facet {
                        normal,
                        offset,
                        points: vec![idx],
                        vertices: vec![],
                    });
                }
            }
            _ => {
                let tol_of = |o: f64| tau_face(o) * scale.max(1.0);
                for comb in combinations(pts.len(), d) {
                    let rows: Vec<Vec<f64>> = comb[1..]
                        .iter()
                        .map(|&i| {
                            coords[i]
                                .iter()
                                .zip(&coords[comb[0]])
                                .map(|(a, b)| a - b)
                                .collect()
                        })
                        .collect();
                    let mut w = cofactor_normal(&rows, d);
                    let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
                    let row_scale: f64 = rows
                        .iter()
                        .map(|r| r.iter().map(|x| x * x).sum::<f64>().sqrt())
                        .product();
                    if norm <= TAU_RANK * row_scale.max(f64::MIN_POSITIVE) {
                        continue;
                    }
                    w.iter_mut().for_each(|x| *x /= norm);
                    let off = dot(&w, &coords[comb[0]]);
                    let tol = tol_of(off);
                    let vals: Vec<f64> = coords.iter().map(|c| dot(&w, c) - off).collect();
                    let below = vals.iter().any(|v| *v < -tol);
                    let above = vals.iter().any(|v| *v > tol);
                    if below && above {
                        continue;
                    }
                    if below {
                        w.iter_mut().for_each(|x| *x = -*x);
                    }
                    let normal = lift(&w);
                    let on: Vec<usize> = (0..pts.len()).filter(|&i| vals[i].abs() <= tol).collect();
                    let offset = offset_of(&normal, comb[0]);
                    if facets
                        .iter()
                        .any(|f| max_norm_dist(&f.normal, &normal) <= 1e-9)
                    {
                        continue;
                    }
                    facets.push(Facet {
                        normal,
                        offset,
                        points: on,
                        vertices: vec![],
                    });
                }
                // A point is a vertex when the normals of its facets span R^d.
                let mut vs = Vec::new();
                for i in 0..pts.len() {
                    let normals: Vec<Vec<f64>> = facets
                        .iter()
                        .filter(|f| f.points.contains(&i))
                        .map(|f| basis.iter().map(|b| dot(b, &f.normal)).collect())
                        .collect();
                    if rank(&normals, d, TAU_RANK) == d {
                        vs.push(i);
                    }
                }
                vertices = vs;
            }
        }
        for f in facets.iter_mut() {
            f.vertices = vertices
                .iter()
                .enumerate()
                .filter(|(_, v)| f.points.contains(v))
                .map(|(k, _)| k)
                .collect();
        }
        Ok(PolytopeInfo {
            ambient: n,
            points: pts,
            vertices,
            dim: d,
            facets,
            basis,
        })
    }

    pub fn of(f: &Fewnomial) -> Result<PolytopeInfo> {
        if f.is_empty() {
            return Err(Error::EmptyPolytope);
        }
        Self::from_points(&f.support())
    }

    pub fn vertex_points(&self) -> Vec<Vec<f64>> {
        self.vertices
            .iter()
            .map(|&i| self.points[i].clone())
            .collect()
    }

    /// Differences of every vertex from the first one.
    pub fn direction_vectors(&self) -> Vec<Vec<f64>> {
        let v = self.vertex_points();
        v.iter()
            .skip(1)
            .map(|p| p.iter().zip(&v[0]).map(|(a, b)| a - b).collect())
            .collect()
    }

    /// Indices of points lying on the relative boundary.
    pub fn boundary_points(&self) -> Vec<usize> {
        if self.dim == 0 {
            return vec![0];
        }
        let mut out: Vec<usize> = self
            .facets
            .iter()
            .flat_map(|f| f.points.iter().cloned())
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

/// Newton polytope: planar polygon for n = 2, vertex/facet data otherwise.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum NewtonPolytope {
    Polygon(Polygon),
    Info(PolytopeInfo),
}

pub fn newton_polytope(f: &Fewnomial) -> Result<NewtonPolytope> {
    if f.is_empty() {
        return Err(Error::EmptyPolytope);
    }
    if f.dim() == 2 {
        Ok(NewtonPolytope::Polygon(newton_polygon(f)?))
    } else {
        Ok(NewtonPolytope::Info(PolytopeInfo::of(f)?))
    }
}

/// Terms of f whose exponent minimizes a·w.
pub fn initial_form(f: &Fewnomial, w: &[f64]) -> Result<Fewnomial> {
    if w.len() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: w.len(),
        });
    }
    let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::Domain(
            "initial form needs a nonzero direction".into(),
        ));
    }
    let unit: Vec<f64> = w.iter().map(|x| x / norm).collect();
    let vals: Vec<f64> = f.terms().iter().map(|t| dot(&t.exponent, &unit)).collect();
    let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let terms: Vec<Term> = f
        .terms()
        .iter()
        .zip(&vals)
        .filter(|(_, v)| **v <= min + tau_face(min))
        .map(|(t, _)| t.clone())
        .collect();
    Fewnomial::new(f.dim(), terms)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixedVolumeZeroWitness {
    /// Indices of the polytopes in the subset.
    pub subset: Vec<usize>,
    /// Dimension of the subspace containing translates of them.
    pub dim: usize,
}

/// Some subset T whose direction vectors span at most |T| - 1 dimensions.
pub fn mixed_volume_zero(polys: &[PolytopeInfo]) -> Result<Option<MixedVolumeZeroWitness>> {
    let n = polys.first().map(|p| p.ambient).unwrap_or(0);
    if polys.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: polys.len(),
        });
    }
    if let Some(p) = polys.iter().find(|p| p.ambient != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: p.ambient,
        });
    }
    let dirs: Vec<Vec<Vec<f64>>> = polys.iter().map(|p| p.direction_vectors()).collect();
    let mut masks: Vec<u32> = (1..(1u32 << n)).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    for mask in masks {
        let subset: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let rows: Vec<Vec<f64>> = subset
            .iter()
            .flat_map(|&i| dirs[i].iter().cloned())
            .collect();
        let r = rank(&rows, n, TAU_RANK);
        if r + 1 <= subset.len() {
            return Ok(Some(MixedVolumeZeroWitness { subset, dim: r }));
        }
    }
    Ok(None)
}

pub fn system_mixed_volume_zero(f: &FewnomialSystem) -> Result<Option<MixedVolumeZeroWitness>> {
    let polys: Vec<PolytopeInfo> = f
        .members()
        .iter()
        .map(PolytopeInfo::of)
        .collect::<Result<_>>()?;
    mixed_volume_zero(&polys)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlagCertificate {
    pub ordering: Vec<usize>,
    /// Dimension of the span generated by the first i+1 members.
    pub dims: Vec<usize>,
}

fn member_directions(f: &Fewnomial) -> Vec<Vec<f64>> {
    let s = f.support();
    s.iter()
        .skip(1)
        .map(|p| p.iter().zip(&s[0]).map(|(a, b)| a - b).collect())
        .collect()
}

/// An ordering of the members whose cumulative supports span a complete flag.
pub fn is_pyramidal(f: &FewnomialSystem) -> Option<FlagCertificate> {
    let n = f.dim();
    if f.len() != n {
        return None;
    }
    let dirs: Vec<Vec<Vec<f64>>> = f.members().iter().map(member_directions).collect();
    fn dfs(
        dirs: &[Vec<Vec<f64>>],
        n: usize,
        used: &mut Vec<bool>,
        rows: &mut Vec<Vec<f64>>,
        order: &mut Vec<usize>,
    ) -> bool {
        if order.len() == n {
            return true;
        }
        let target = order.len() + 1;
        for j in 0..dirs.len() {
            if used[j] {
                continue;
            }
            let before = rows.len();
            rows.extend(dirs[j].iter().cloned());
            if rank(rows, n, TAU_RANK) == target {
                used[j] = true;
                order.push(j);
                if dfs(dirs, n, used, rows, order) {
                    return true;
                }
                order.pop();
                used[j] = false;
            }
            rows.truncate(before);
        }
        false
    }
    let mut used = vec![false; n];
    let mut rows = Vec::new();
    let mut order = Vec::new();
    if dfs(&dirs, n, &mut used, &mut rows, &mut order) {
        Some(FlagCertificate {
            ordering: order,
            dims: (1..=n).collect(),
        })
    } else {
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OverdetReport {
    /// Every proper face of dimension d has exactly d+1 vertices.
    pub simplicial: bool,
    /// No support point lies in the relative interior of a proper face of
    /// dimension at least 1.
    pub proper_faces_clear: bool,
    /// Support points in the relative interior of the whole polytope.
    pub interior_points: usize,
}

impl OverdetReport {
    pub fn holds(&self) -> bool {
        self.simplicial && self.proper_faces_clear
    }
}

pub fn overdet_report(f: &Fewnomial) -> Result<OverdetReport> {
    let info = PolytopeInfo::of(f)?;
    let d = info.dim;
    let simplicial = d <= 1 || info.facets.iter().all(|fc| fc.vertices.len() == d);
    let boundary = info.boundary_points();
    let full = d == info.ambient;
    let non_vertex = |i: &usize| !info.vertices.contains(i);
    let (proper_faces_clear, interior_points) = if full {
        let on_boundary_bad = boundary.iter().filter(|i| non_vertex(i)).count();
        let interior = (0..info.points.len())
            .filter(|i| !boundary.contains(i))
            .count();
        (on_boundary_bad == 0, interior)
    } else {
        // A direction orthogonal to the hull selects the whole polytope.
        ((0..info.points.len()).filter(non_vertex).count() == 0, 0)
    };
    Ok(OverdetReport {
        simplicial,
        proper_faces_clear,
        interior_points,
    })
}

/// Sufficient condition for every initial form to have a smooth zero set.
pub fn overdet_smoothness_check(f: &Fewnomial) -> Result<bool> {
    Ok(overdet_report(f)?.holds())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::parse_system;

    fn poly(dim: usize, terms: &[(f64, &[f64])]) -> Fewnomial {
        Fewnomial::new(
            dim,
            terms
                .iter()
                .map(|(c, a)| Term::new(*c, a.to_vec()))
                .collect(),
        )
        .unwrap()
    }

    fn sorted(p: &Polygon) -> Vec<[f64; 2]> {
        let mut v = p.vertices().to_vec();
        v.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
        v
    }

    #[test]
    fn haas_triangle() {
        let f = poly(
            2,
            &[
                (1.0, &[108.0, 0.0]),
                (1.1, &[0.0, 54.0]),
                (-1.1, &[0.0, 1.0]),
            ],
        );
        let p = newton_polygon(&f).unwrap();
        assert_eq!(sorted(&p), vec![[0.0, 1.0], [0.0, 54.0], [108.0, 0.0]]);
    }

    #[test]
    fn minkowski_examples() {
        let f = poly(
            2,
            &[(1.0, &[2.0, 0.0]), (1.0, &[0.0, 2.0]), (-25.0, &[0.0, 0.0])],
        );
        let g = poly(
            2,
            &[(1.0, &[1.0, 0.0]), (1.0, &[0.0, 1.0]), (-7.0, &[0.0, 0.0])],
        );
        let s = newton_polygon(&f)
            .unwrap()
            .minkowski_sum(&newton_polygon(&g).unwrap());
        assert_eq!(sorted(&s), vec![[0.0, 0.0], [0.0, 3.0], [3.0, 0.0]]);
        assert_eq!(s.normalized_area(), 9.0);

        let f = poly(
            2,
            &[(1.0, &[0.0, 2.0]), (-7.0, &[0.0, 1.0]), (12.0, &[0.0, 0.0])],
        );
        let g = poly(
            2,
            &[(-1.0, &[0.0, 0.0]), (1.0, &[1.0, 1.0]), (-1.0, &[2.0, 0.0])],
        );
        let s = newton_polygon(&f)
            .unwrap()
            .minkowski_sum(&newton_polygon(&g).unwrap());
        assert_eq!(
            sorted(&s),
            vec![[0.0, 0.0], [0.0, 2.0], [1.0, 3.0], [2.0, 0.0], [2.0, 2.0]]
        );
    }

    #[test]
    fn sum_with_point_translates() {
        let p = Polygon::hull(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).unwrap();
        let q = Polygon::hull(&[[2.0, 3.0]]).unwrap();
        assert_eq!(
            sorted(&p.minkowski_sum(&q)),
            vec![[2.0, 3.0], [2.0, 4.0], [3.0, 3.0]]
        );
    }

    #[test]
    fn areas() {
        let sq = Polygon::hull(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
        assert_eq!(sq.normalized_area(), 2.0);
        let seg = Polygon::hull(&[[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]).unwrap();
        assert_eq!(seg.kind(), PolygonKind::Segment);
        assert_eq!(seg.normalized_area(), 0.0);
        assert_eq!(
            Polygon::hull(&[[1.0, 1.0]]).unwrap().kind(),
            PolygonKind::Point
        );
    }

    #[test]
    fn initial_forms() {
        let g = poly(
            2,
            &[(1.0, &[1.0, 0.0]), (1.0, &[0.0, 1.0]), (-7.0, &[0.0, 0.0])],
        );
        let i = initial_form(&g, &[1.0, 1.0]).unwrap();
        assert_eq!(i.terms(), &[Term::new(-7.0, vec![0.0, 0.0])]);
        assert!(matches!(
            initial_form(&g, &[0.0, 0.0]),
            Err(Error::Domain(_))
        ));
        let e = initial_form(&g, &[-1.0, -1.0]).unwrap();
        assert_eq!(e.len(), 2);
    }

    #[test]
    fn mixed_volume_zero_cases() {
        let segs = [
            vec![vec![0.0, 0.0], vec![1.0, 0.0]],
            vec![vec![0.0, 1.0], vec![3.0, 1.0]],
        ];
        let polys: Vec<PolytopeInfo> = segs
            .iter()
            .map(|s| PolytopeInfo::from_points(s).unwrap())
            .collect();
        let w = mixed_volume_zero(&polys).unwrap().unwrap();
        assert_eq!(w.dim, 1);
        let haas = parse_system(
            r#"{"n":2,"polys":[[{"c":1,"a":[108,0]},{"c":1.1,"a":[0,54]},{"c":-1.1,"a":[0,1]}],
                               [{"c":1,"a":[0,108]},{"c":1.1,"a":[54,0]},{"c":-1.1,"a":[1,0]}]]}"#,
        )
        .unwrap();
        assert!(system_mixed_volume_zero(&haas).unwrap().is_none());
        assert!(is_pyramidal(&haas).is_none());
    }

    #[test]
    fn pyramidal_cases() {
        let easy = parse_system(
            r#"{"n":2,"polys":[[{"c":1,"a":[2,0]},{"c":-3,"a":[1,0]},{"c":2,"a":[0,0]}],
                               [{"c":1,"a":[0,2]},{"c":-3,"a":[0,1]},{"c":2,"a":[0,0]}]]}"#,
        )
        .unwrap();
        let cert = is_pyramidal(&easy).unwrap();
        assert_eq!(cert.dims, vec![1, 2]);
        let bin = parse_system(
            r#"{"n":2,"polys":[[{"c":1,"a":[2,1]},{"c":-2,"a":[0,0]}],[{"c":1,"a":[1,1]},{"c":-1,"a":[0,0]}]]}"#,
        )
        .unwrap();
        assert!(is_pyramidal(&bin).is_some());
    }

    #[test]
    fn overdet_cases() {
        let tri = poly(
            2,
            &[(1.0, &[0.0, 0.0]), (1.0, &[1.0, 0.0]), (1.0, &[0.0, 1.0])],
        );
        assert!(overdet_smoothness_check(&tri).unwrap());
        let sq = poly(
            2,
            &[
                (1.0, &[0.0, 0.0]),
                (1.0, &[1.0, 0.0]),
                (1.0, &[0.0, 1.0]),
                (1.0, &[1.0, 1.0]),
            ],
        );
        assert!(overdet_smoothness_check(&sq).unwrap());
        let mid = poly(
            2,
            &[
                (1.0, &[0.0, 0.0]),
                (1.0, &[2.0, 0.0]),
                (1.0, &[1.0, 0.0]),
                (1.0, &[0.0, 1.0]),
            ],
        );
        assert!(!overdet_smoothness_check(&mid).unwrap());
    }

    #[test]
    fn tetrahedron_facets() {
        let pts = vec![
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![0.2, 0.2, 0.2],
        ];
        let info = PolytopeInfo::from_points(&pts).unwrap();
        assert_eq!(info.dim, 3);
        assert_eq!(info.facets.len(), 4);
        assert_eq!(info.vertices.len(), 4);
        for f in &info.facets {
            for p in &info.points {
                assert!(dot(&f.normal, p) >= f.offset - 1e-9);
            }
        }
    }
}
