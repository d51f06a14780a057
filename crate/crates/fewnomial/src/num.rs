//! Summation and scaled arithmetic shared by the evaluators.

/// Neumaier-compensated sum of the addends after sorting them into a
/// canonical order, so the result does not depend on the input order.
pub fn compensated_sum(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| b.abs().total_cmp(&a.abs()).then(a.total_cmp(b)));
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for &v in values.iter() {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// A real number stored as `mantissa * exp(log_scale)` together with the
/// matching scaled sum of absolute addends. Used where terms can overflow.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scaled {
    pub mantissa: f64,
    pub magnitude: f64,
    pub log_scale: f64,
}

impl Scaled {
    pub const ZERO: Scaled = Scaled {
        mantissa: 0.0,
        magnitude: 0.0,
        log_scale: 0.0,
    };

    pub fn sign(&self) -> i32 {
        if self.mantissa > 0.0 {
            1
        } else if self.mantissa < 0.0 {
            -1
        } else {
            0
        }
    }

    /// |value| relative to the sum of absolute addends.
    pub fn relative(&self) -> f64 {
        if self.magnitude == 0.0 {
            if self.mantissa == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            self.mantissa.abs() / self.magnitude
        }
    }

    pub fn is_negligible(&self, tol: f64) -> bool {
        self.mantissa.abs() <= tol * self.magnitude
    }

    /// Plain f64 value; may overflow to infinity.
    pub fn value(&self) -> f64 {
        if self.mantissa == 0.0 {
            0.0
        } else {
            self.mantissa * self.log_scale.exp()
        }
    }

    /// Ratio self / other as f64.
    pub fn ratio(&self, other: &Scaled) -> f64 {
        (self.mantissa / other.mantissa) * (self.log_scale - other.log_scale).exp()
    }
}

/// Sum of signed addends given as (sign * coeff, log |addend| excluding coeff).
/// Each addend is `c * exp(l)`.
pub fn scaled_sum(addends: &[(f64, f64)]) -> Scaled {
    let mut top = f64::NEG_INFINITY;
    for &(c, l) in addends {
        if c != 0.0 && l > top {
            top = l;
        }
    }
    if !top.is_finite() {
        return Scaled::ZERO;
    }
    let mut vals: Vec<f64> = addends
        .iter()
        .filter(|(c, _)| *c != 0.0)
        .map(|&(c, l)| c * (l - top).exp())
        .collect();
    let magnitude = vals.iter().map(|v| v.abs()).sum();
    let mantissa = compensated_sum(&mut vals);
    Scaled {
        mantissa,
        magnitude,
        log_scale: top,
    }
}

/// Combine several scaled values into one.
pub fn combine(parts: &[Scaled]) -> Scaled {
    let mut top = f64::NEG_INFINITY;
    for p in parts {
        if p.magnitude != 0.0 && p.log_scale > top {
            top = p.log_scale;
        }
    }
    if !top.is_finite() {
        return Scaled::ZERO;
    }
    let mut vals = Vec::with_capacity(parts.len());
    let mut magnitude = 0.0;
    for p in parts {
        if p.magnitude == 0.0 {
            continue;
        }
        let f = (p.log_scale - top).exp();
        vals.push(p.mantissa * f);
        magnitude += p.magnitude * f;
    }
    Scaled {
        mantissa: compensated_sum(&mut vals),
        magnitude,
        log_scale: top,
    }
}

/// Numerical rank of a row-stacked set of vectors by singular-value
/// thresholding relative to the largest singular value.
pub fn rank(rows: &[Vec<f64>], dim: usize, tol: f64) -> usize {
    if rows.is_empty() || dim == 0 {
        return 0;
    }
    let m = nalgebra::DMatrix::from_fn(rows.len(), dim, |i, j| rows[i][j]);
    let sv = m.singular_values();
    let smax = sv.iter().cloned().fold(0.0f64, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * smax).count()
}

/// Orthonormal basis (as rows) of the span of `rows`, using the same
/// thresholding as [`rank`].
pub fn span_basis(rows: &[Vec<f64>], dim: usize, tol: f64) -> Vec<Vec<f64>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let mut padded: Vec<Vec<f64>> = rows.to_vec();
    while padded.len() < dim {
        padded.push(vec![0.0; dim]);
    }
    let m = nalgebra::DMatrix::from_fn(padded.len(), dim, |i, j| padded[i][j]);
    let svd = m.svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    if smax == 0.0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (k, s) in svd.singular_values.iter().enumerate() {
        if *s > tol * smax {
            out.push(vt.row(k).iter().cloned().collect());
        }
    }
    out
}

/// Orthonormal basis of the orthogonal complement of the span of `rows`.
pub fn complement_basis(rows: &[Vec<f64>], dim: usize, tol: f64) -> Vec<Vec<f64>> {
    let mut padded: Vec<Vec<f64>> = rows.to_vec();
    while padded.len() < dim {
        padded.push(vec![0.0; dim]);
    }
    let m = nalgebra::DMatrix::from_fn(padded.len(), dim, |i, j| padded[i][j]);
    let svd = m.svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    let mut out = Vec::new();
    for (k, s) in svd.singular_values.iter().enumerate() {
        if smax == 0.0 || *s <= tol * smax {
            out.push(vt.row(k).iter().cloned().collect());
        }
    }
    out
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn max_norm_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Serialize a big integer as its decimal string.
pub fn serialize_biguint<S: serde::Serializer>(
    v: &num_bigint::BigUint,
    s: S,
) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_cancellation() {
        let mut v = vec![1e16, 1.0, -1e16, 1.0];
        assert_eq!(compensated_sum(&mut v), 2.0);
    }

    #[test]
    fn scaled_sum_survives_overflowing_addends() {
        let s = scaled_sum(&[(1.0, 800.0), (-1.0, 799.0)]);
        assert!(s.mantissa > 0.0);
        assert!((s.log_scale - 800.0).abs() < 1e-12);
        assert!((s.mantissa - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn rank_of_parallel_rows() {
        let rows = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        assert_eq!(rank(&rows, 2, 1e-8), 1);
        assert_eq!(complement_basis(&rows, 2, 1e-8).len(), 1);
    }
}
