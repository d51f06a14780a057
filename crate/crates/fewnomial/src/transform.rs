//! Monomial changes of variables, term division and canonical forms of
//! trinomial pairs.
//!
//! A map is stored as `log x = Aᵀ log y + s`, so a term `c x^a` becomes
//! `c e^{a·s} y^{A a}` and coordinate scalings fit the same shape.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{complement_basis, dot};
use crate::polytope::{newton_polygon, PolygonKind};
use crate::system::{Fewnomial, FewnomialSystem, Term};

pub const TAU_DET: f64 = 1e-10;
pub const COND_WARN: f64 = 1e8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MapStep {
    /// `x = y^A` with `A` row-major.
    Exponent { matrix: Vec<f64> },
    /// `x_i = factors_i · y_i`.
    Scale { factors: Vec<f64> },
    /// A member divided by one of its terms; coordinates unchanged.
    Divide {
        member: usize,
        coeff: f64,
        exponent: Vec<f64>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonomialMap {
    pub n: usize,
    /// Row-major n×n exponent matrix.
    #[serde(rename = "A")]
    pub matrix: Vec<f64>,
    pub shift: Vec<f64>,
    pub steps: Vec<MapStep>,
    pub condition: f64,
}

fn to_dmatrix(n: usize, m: &[f64]) -> DMatrix<f64> {
    DMatrix::from_row_slice(n, n, m)
}

fn from_dmatrix(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| m[(i, j)]))
        .collect()
}

fn condition_number(m: &DMatrix<f64>) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

fn check_invertible(m: &DMatrix<f64>) -> Result<f64> {
    let n = m.nrows() as i32;
    let scale = m.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    let det = m.determinant();
    if scale == 0.0 || det.abs() <= TAU_DET * scale.powi(n) {
        return Err(Error::SingularMap(format!(
            "|det A| = {:e} at scale {scale}",
            det.abs()
        )));
    }
    let cond = condition_number(m);
    if cond > COND_WARN {
        log::warn!("monomial map condition number {cond:e} exceeds {COND_WARN:e}");
    }
    Ok(cond)
}

impl MonomialMap {
    pub fn identity(n: usize) -> MonomialMap {
        MonomialMap {
            n,
            matrix: from_dmatrix(&DMatrix::identity(n, n)),
            shift: vec![0.0; n],
            steps: Vec::new(),
            condition: 1.0,
        }
    }

    /// `x = y^A`, rows of `A` given as vectors.
    pub fn from_matrix(rows: &[Vec<f64>]) -> Result<MonomialMap> {
        let n = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: r.len(),
            });
        }
        let flat: Vec<f64> = rows.iter().flatten().cloned().collect();
        let m = to_dmatrix(n, &flat);
        let condition = check_invertible(&m)?;
        Ok(MonomialMap {
            n,
            matrix: flat.clone(),
            shift: vec![0.0; n],
            steps: vec![MapStep::Exponent { matrix: flat }],
            condition,
        })
    }

    /// `x_i = factors_i · y_i` with positive factors.
    pub fn scaling(factors: &[f64]) -> Result<MonomialMap> {
        if factors.iter().any(|f| !(*f > 0.0) || !f.is_finite()) {
            return Err(Error::Domain(
                "scaling factors must be positive and finite".into(),
            ));
        }
        let mut m = MonomialMap::identity(factors.len());
        m.shift = factors.iter().map(|f| f.ln()).collect();
        m.steps.push(MapStep::Scale {
            factors: factors.to_vec(),
        });
        Ok(m)
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        to_dmatrix(self.n, &self.matrix)
    }

    /// Apply `self` first, then `next` to the resulting variables.
    pub fn then(&self, next: &MonomialMap) -> Result<MonomialMap> {
        if next.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: next.n,
            });
        }
        let a1 = self.matrix();
        let a2 = next.matrix();
        let a = &a2 * &a1;
        let s2 = nalgebra::DVector::from_column_slice(&next.shift);
        let s = a1.transpose() * s2;
        let shift: Vec<f64> = s.iter().zip(&self.shift).map(|(x, y)| x + y).collect();
        let mut steps = self.steps.clone();
        steps.extend(next.steps.iter().cloned());
        Ok(MonomialMap {
            n: self.n,
            matrix: from_dmatrix(&a),
            shift,
            steps,
            condition: condition_number(&a),
        })
    }

    pub fn with_step(mut self, step: MapStep) -> MonomialMap {
        self.steps.push(step);
        self
    }

    /// Image of an exponent vector and the log of the accompanying factor.
    pub fn map_exponent(&self, a: &[f64]) -> (Vec<f64>, f64) {
        let n = self.n;
        let img = (0..n)
            .map(|i| (0..n).map(|j| self.matrix[i * n + j] * a[j]).sum())
            .collect();
        (img, dot(a, &self.shift))
    }

    pub fn apply(&self, f: &Fewnomial) -> Result<Fewnomial> {
        if f.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: f.dim(),
            });
        }
        let terms = f
            .terms()
            .iter()
            .map(|t| {
                let (a, ls) = self.map_exponent(&t.exponent);
                Term::new(t.coeff * ls.exp(), a)
            })
            .collect();
        Fewnomial::new(self.n, terms)
    }

    /// Original coordinates of a point given in mapped coordinates.
    pub fn to_original(&self, y: &[f64]) -> Result<Vec<f64>> {
        if y.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: y.len(),
            });
        }
        if y.iter().any(|v| !(*v > 0.0)) {
            return Err(Error::Domain("non-positive coordinate in back-map".into()));
        }
        let n = self.n;
        let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
        Ok((0..n)
            .map(|i| {
                ((0..n).map(|j| self.matrix[j * n + i] * ly[j]).sum::<f64>() + self.shift[i]).exp()
            })
            .collect())
    }

    /// Mapped coordinates of a point in original coordinates.
    pub fn to_mapped(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.len(),
            });
        }
        if x.iter().any(|v| !(*v > 0.0)) {
            return Err(Error::Domain(
                "non-positive coordinate in forward map".into(),
            ));
        }
        let at = self.matrix().transpose();
        let rhs = nalgebra::DVector::from_iterator(
            self.n,
            x.iter().zip(&self.shift).map(|(v, s)| v.ln() - s),
        );
        let sol = at
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::SingularMap("cannot invert map".into()))?;
        Ok(sol.iter().map(|v| v.exp()).collect())
    }

    /// Back-map by replaying the recorded steps in reverse order.
    pub fn replay_back(&self, y: &[f64]) -> Result<Vec<f64>> {
        let mut cur = y.to_vec();
        for step in self.steps.iter().rev() {
            match step {
                MapStep::Exponent { matrix } => {
                    let m = MonomialMap {
                        n: self.n,
                        matrix: matrix.clone(),
                        shift: vec![0.0; self.n],
                        steps: vec![],
                        condition: 1.0,
                    };
                    cur = m.to_original(&cur)?;
                }
                MapStep::Scale { factors } => {
                    cur = cur.iter().zip(factors).map(|(v, f)| v * f).collect();
                }
                MapStep::Divide { .. } => {}
            }
        }
        Ok(cur)
    }
}

pub fn apply_monomial_map(f: &FewnomialSystem, map: &MonomialMap) -> Result<FewnomialSystem> {
    FewnomialSystem::new(
        f.members()
            .iter()
            .map(|p| map.apply(p))
            .collect::<Result<_>>()?,
    )
}

pub fn back_map_roots(roots: &[Vec<f64>], map: &MonomialMap) -> Result<Vec<Vec<f64>>> {
    roots.iter().map(|y| map.to_original(y)).collect()
}

pub fn forward_map_roots(roots: &[Vec<f64>], map: &MonomialMap) -> Result<Vec<Vec<f64>>> {
    roots.iter().map(|x| map.to_mapped(x)).collect()
}

/// Divide by the term at `index`, which becomes the constant 1.
pub fn divide_by_term(f: &Fewnomial, index: usize) -> Result<Fewnomial> {
    let t = f.terms().get(index).ok_or_else(|| {
        Error::Domain(format!(
            "term index {index} out of range for {} terms",
            f.len()
        ))
    })?;
    let neg: Vec<f64> = t.exponent.iter().map(|v| -v).collect();
    Ok(f.mul_monomial(1.0 / t.coeff, &neg))
}

/// Index of the unique term whose sign differs from the others, if any.
pub fn odd_sign_term(f: &Fewnomial) -> Option<usize> {
    let pos: Vec<usize> = (0..f.len()).filter(|&i| f.terms()[i].coeff > 0.0).collect();
    let neg: Vec<usize> = (0..f.len()).filter(|&i| f.terms()[i].coeff < 0.0).collect();
    match (pos.len(), neg.len()) {
        (1, k) if k >= 1 => Some(pos[0]),
        (k, 1) if k >= 1 => Some(neg[0]),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Canonicalization {
    /// `system.members()[0] = 1 − y1 − y2`, roots correspond under `map`.
    Canonical {
        system: FewnomialSystem,
        map: MonomialMap,
        /// Original member indices in canonical order.
        order: [usize; 2],
    },
    /// The member has one sign on the whole orthant.
    Infeasible { member: usize },
    /// Every member has a degenerate Newton polygon.
    Segment,
}

/// Bring a (3,3) system to the form `(1 − y1 − y2, 1 − A y^{(a,b)} − B y^{(c,d)})`.
///
/// The triangle member with the smallest normalized area is used first so
/// that the exponent matrix stays small; ties keep the given order.
pub fn canonicalize_trinomial_pair(f: &FewnomialSystem) -> Result<Canonicalization> {
    if f.dim() != 2 || f.type_signature() != vec![3, 3] {
        return Err(Error::NotApplicable(format!(
            "canonical form needs a (3,3) system in two variables, got type {:?}",
            f.type_signature()
        )));
    }
    for (i, m) in f.members().iter().enumerate() {
        if odd_sign_term(m).is_none() {
            return Ok(Canonicalization::Infeasible { member: i });
        }
    }
    let mut tri: Option<(usize, f64)> = None;
    for (i, m) in f.members().iter().enumerate() {
        let p = newton_polygon(m)?;
        if let PolygonKind::Polygon(3) = p.kind() {
            let area = p.normalized_area();
            if tri.map_or(true, |(_, a)| area < a) {
                tri = Some((i, area));
            }
        }
    }
    let Some((first, _)) = tri else {
        return Ok(Canonicalization::Segment);
    };
    let second = 1 - first;
    let g = &f.members()[first];
    let k = odd_sign_term(g).expect("checked above");
    let g0 = divide_by_term(g, k)?;
    let others: Vec<&Term> = g0
        .terms()
        .iter()
        .filter(|t| t.exponent.iter().any(|v| *v != 0.0))
        .collect();
    debug_assert_eq!(others.len(), 2);
    // A [d1 d2] = I sends the two exponents to the unit vectors.
    let d = DMatrix::from_fn(2, 2, |i, j| others[j].exponent[i]);
    let a = d
        .try_inverse()
        .ok_or_else(|| Error::SingularMap("triangle exponents dependent".into()))?;
    let rows: Vec<Vec<f64>> = (0..2)
        .map(|i| (0..2).map(|j| a[(i, j)]).collect())
        .collect();
    let div_step = MapStep::Divide {
        member: first,
        coeff: g.terms()[k].coeff,
        exponent: g.terms()[k].exponent.clone(),
    };
    let mono = MonomialMap::from_matrix(&rows)?.with_step(div_step);
    let mapped = mono.apply(&g0)?;
    // After the exponent change the non-constant terms are b_i y_i with b_i < 0.
    let mut factors = vec![1.0; 2];
    for t in mapped.terms() {
        if let Some(i) = t.exponent.iter().position(|v| (v - 1.0).abs() < 1e-9) {
            factors[i] = 1.0 / t.coeff.abs();
        }
    }
    let map = mono.then(&MonomialMap::scaling(&factors)?)?;
    let mut g1 = map.apply(&g0)?;
    g1 = snap_exponents(&g1);
    let h = &f.members()[second];
    let kh = odd_sign_term(h).expect("checked above");
    let map = map.with_step(MapStep::Divide {
        member: second,
        coeff: h.terms()[kh].coeff,
        exponent: h.terms()[kh].exponent.clone(),
    });
    let g2 = map.apply(&divide_by_term(h, kh)?)?;
    Ok(Canonicalization::Canonical {
        system: FewnomialSystem::new(vec![g1, g2])?,
        map,
        order: [first, second],
    })
}

/// Round exponents and unit coefficients that are within round-off of integers.
fn snap_exponents(f: &Fewnomial) -> Fewnomial {
    let snap = |v: f64| {
        if (v - v.round()).abs() < 1e-9 {
            v.round()
        } else {
            v
        }
    };
    let terms = f
        .terms()
        .iter()
        .map(|t| Term::new(snap(t.coeff), t.exponent.iter().map(|v| snap(*v)).collect()))
        .collect();
    Fewnomial::new(f.dim(), terms).expect("snapping keeps validity")
}

/// Complete the given independent rows to a basis of Rⁿ with orthonormal
/// directions orthogonal to their span.
pub fn complete_to_basis(rows: &[Vec<f64>], n: usize) -> Vec<Vec<f64>> {
    let mut out = rows.to_vec();
    out.extend(complement_basis(rows, n, 1e-10));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::parse_system;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.iter()
            .zip(b)
            .all(|(x, y)| (x - y).abs() <= tol * (1.0 + y.abs()))
    }

    #[test]
    fn identity_keeps_system() {
        let f = parse_system(
            r#"{"n":2,"polys":[[{"c":1,"a":[1,0]},{"c":1,"a":[0,1]},{"c":-7,"a":[0,0]}]]}"#,
        )
        .unwrap();
        let g = apply_monomial_map(&f, &MonomialMap::identity(2)).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn binomial_map() {
        let f = Fewnomial::new(
            2,
            vec![
                Term::new(1.0, vec![1.0, 1.0]),
                Term::new(-1.0, vec![0.0, 0.0]),
            ],
        )
        .unwrap();
        let m = MonomialMap::from_matrix(&[vec![1.0, 1.0], vec![1.0, -1.0]]).unwrap();
        let g = m.apply(&f).unwrap();
        assert!(g.terms().iter().any(|t| t.exponent == vec![2.0, 0.0]));
        for y in [[0.3, 2.0], [1.7, 0.4], [1.0, 5.0]] {
            let x = m.to_original(&y).unwrap();
            assert!((f.evaluate(&x).unwrap() - g.evaluate(&y).unwrap()).abs() < 1e-10);
            assert!(close(&m.to_mapped(&x).unwrap(), &y, 1e-12));
        }
    }

    #[test]
    fn singular_rejected() {
        assert!(matches!(
            MonomialMap::from_matrix(&[vec![1.0, 2.0], vec![2.0, 4.0]]),
            Err(Error::SingularMap(_))
        ));
    }

    #[test]
    fn division() {
        let f = Fewnomial::new(
            2,
            vec![
                Term::new(1.0, vec![1.0, 0.0]),
                Term::new(1.0, vec![0.0, 1.0]),
                Term::new(-7.0, vec![0.0, 0.0]),
            ],
        )
        .unwrap();
        let g = divide_by_term(&f, 2).unwrap();
        let x = [2.0, 3.0];
        assert!((g.evaluate(&x).unwrap() - (1.0 - 2.0 / 7.0 - 3.0 / 7.0)).abs() < 1e-15);
        let single = Fewnomial::monomial(3.0, vec![1.0, 2.0]);
        assert_eq!(
            divide_by_term(&single, 0).unwrap(),
            Fewnomial::constant(2, 1.0)
        );
        assert!(divide_by_term(&f, 3).is_err());
    }

    #[test]
    fn circle_line_canonical() {
        let f = parse_system(
            r#"{"n":2,"polys":[[{"c":1,"a":[2,0]},{"c":1,"a":[0,2]},{"c":-25,"a":[0,0]}],
                               [{"c":1,"a":[1,0]},{"c":1,"a":[0,1]},{"c":-7,"a":[0,0]}]]}"#,
        )
        .unwrap();
        let Canonicalization::Canonical { system, map, order } =
            canonicalize_trinomial_pair(&f).unwrap()
        else {
            panic!("expected canonical form");
        };
        assert_eq!(order, [1, 0]);
        let g1 = &system.members()[0];
        assert!((g1.evaluate(&[0.25, 0.5]).unwrap() - 0.25).abs() < 1e-14);
        let y = forward_map_roots(&[vec![3.0, 4.0], vec![4.0, 3.0]], &map).unwrap();
        assert!(close(&y[0], &[3.0 / 7.0, 4.0 / 7.0], 1e-12));
        assert!(close(&y[1], &[4.0 / 7.0, 3.0 / 7.0], 1e-12));
        for r in &y {
            assert!(system.evaluate(r).unwrap().iter().all(|v| v.abs() < 1e-12));
            let back = map.replay_back(r).unwrap();
            assert!(close(&back, &map.to_original(r).unwrap(), 1e-12));
        }
    }

    #[test]
    fn canonical_markers() {
        let pos = parse_system(
            r#"{"n":2,"polys":[[{"c":1,"a":[0,0]},{"c":1,"a":[1,0]},{"c":1,"a":[0,1]}],
                               [{"c":1,"a":[1,0]},{"c":1,"a":[0,1]},{"c":-7,"a":[0,0]}]]}"#,
        )
        .unwrap();
        assert_eq!(
            canonicalize_trinomial_pair(&pos).unwrap(),
            Canonicalization::Infeasible { member: 0 }
        );
        let seg = parse_system(
            r#"{"n":2,"polys":[[{"c":1,"a":[0,0]},{"c":-3,"a":[1,1]},{"c":1,"a":[2,2]}],
                               [{"c":1,"a":[0,0]},{"c":-3,"a":[1,2]},{"c":1,"a":[2,4]}]]}"#,
        )
        .unwrap();
        assert_eq!(
            canonicalize_trinomial_pair(&seg).unwrap(),
            Canonicalization::Segment
        );
    }

    #[test]
    fn already_canonical_is_identity() {
        let f = parse_system(
            r#"{"n":2,"polys":[[{"c":1,"a":[0,0]},{"c":-1,"a":[1,0]},{"c":-1,"a":[0,1]}],
                               [{"c":1,"a":[0,0]},{"c":-2,"a":[2,1]},{"c":-0.5,"a":[0.5,3]}]]}"#,
        )
        .unwrap();
        let Canonicalization::Canonical { map, .. } = canonicalize_trinomial_pair(&f).unwrap()
        else {
            panic!()
        };
        assert!(close(&map.matrix, &[1.0, 0.0, 0.0, 1.0], 1e-15));
        assert!(map.shift.iter().all(|s| s.abs() < 1e-15));
    }

    #[test]
    fn composition_order() {
        let a = MonomialMap::from_matrix(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        let b = MonomialMap::scaling(&[2.0, 3.0]).unwrap();
        let ab = a.then(&b).unwrap();
        let z = [0.7, 1.9];
        let y = b.to_original(&z).unwrap();
        let x = a.to_original(&y).unwrap();
        assert!(close(&ab.to_original(&z).unwrap(), &x, 1e-13));
        assert!(close(&ab.replay_back(&z).unwrap(), &x, 1e-13));
    }
}
