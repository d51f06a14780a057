//! Fewnomials, systems, evaluation and the JSON document format.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{compensated_sum, max_norm_dist, scaled_sum, Scaled};

/// Max-norm distance below which two exponent vectors are the same.
pub const TAU_EXP: f64 = 1e-9;

/// Relative size below which a merged coefficient is dropped.
const MERGE_DROP: f64 = 1e-15;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    #[serde(rename = "c")]
    pub coeff: f64,
    #[serde(rename = "a")]
    pub exponent: Vec<f64>,
}

impl Term {
    pub fn new(coeff: f64, exponent: Vec<f64>) -> Self {
        Term { coeff, exponent }
    }
}

/// An n-variate m-nomial with real exponents.
#[derive(Clone, Debug, PartialEq)]
pub struct Fewnomial {
    dim: usize,
    terms: Vec<Term>,
}

impl Fewnomial {
    /// Builds a fewnomial, merging exponent vectors closer than `TAU_EXP`
    /// and dropping coefficients that vanish or cancel.
    pub fn new(dim: usize, terms: Vec<Term>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Validation("dimension must be at least 1".into()));
        }
        for (i, t) in terms.iter().enumerate() {
            check_term(dim, i, t)?;
        }
        // Each merged term keeps the largest summand it absorbed.
        let mut merged: Vec<(Term, f64)> = Vec::new();
        for t in terms {
            if let Some((m, size)) = merged
                .iter_mut()
                .find(|(m, _)| max_norm_dist(&m.exponent, &t.exponent) <= TAU_EXP)
            {
                m.coeff += t.coeff;
                *size = size.max(t.coeff.abs());
            } else {
                let size = t.coeff.abs();
                merged.push((t, size));
            }
        }
        let terms = merged
            .into_iter()
            .filter(|(t, size)| t.coeff != 0.0 && t.coeff.abs() >= MERGE_DROP * size)
            .map(|(t, _)| t)
            .collect();
        Ok(Fewnomial { dim, terms })
    }

    /// Builds a fewnomial rejecting zero coefficients and duplicate exponents.
    pub fn strict(dim: usize, terms: Vec<Term>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Validation("dimension must be at least 1".into()));
        }
        for (i, t) in terms.iter().enumerate() {
            check_term(dim, i, t)?;
            if t.coeff == 0.0 {
                return Err(Error::Validation(format!(
                    "term {i} has a zero coefficient"
                )));
            }
            for (j, s) in terms[..i].iter().enumerate() {
                if max_norm_dist(&s.exponent, &t.exponent) <= TAU_EXP {
                    return Err(Error::Validation(format!(
                        "terms {j} and {i} have the same exponent vector"
                    )));
                }
            }
        }
        Ok(Fewnomial { dim, terms })
    }

    pub fn zero(dim: usize) -> Self {
        Fewnomial {
            dim,
            terms: Vec::new(),
        }
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        Self::monomial(c, vec![0.0; dim])
    }

    pub fn monomial(c: f64, exponent: Vec<f64>) -> Self {
        let dim = exponent.len();
        if c == 0.0 {
            return Self::zero(dim);
        }
        Fewnomial {
            dim,
            terms: vec![Term::new(c, exponent)],
        }
    }

    /// The coordinate function x_i.
    pub fn variable(dim: usize, i: usize) -> Self {
        let mut a = vec![0.0; dim];
        a[i] = 1.0;
        Self::monomial(1.0, a)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Number of terms m.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support(&self) -> Vec<Vec<f64>> {
        self.terms.iter().map(|t| t.exponent.clone()).collect()
    }

    pub fn coeffs(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.coeff).collect()
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        if let Some(i) = x.iter().position(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(Error::Domain(format!(
                "coordinate {i} = {} is not positive",
                x[i]
            )));
        }
        Ok(())
    }

    fn term_values(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_point(x)?;
        self.terms
            .iter()
            .enumerate()
            .map(|(k, t)| {
                let mut v = t.coeff;
                for (xi, ai) in x.iter().zip(&t.exponent) {
                    if *ai != 0.0 {
                        v *= xi.powf(*ai);
                    }
                }
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::Overflow { term: k })
                }
            })
            .collect()
    }

    /// f(x) with compensated summation of the term values.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        let mut v = self.term_values(x)?;
        Ok(compensated_sum(&mut v))
    }

    /// f(x) together with the sum of absolute term values.
    pub fn evaluate_with_scale(&self, x: &[f64]) -> Result<(f64, f64)> {
        let mut v = self.term_values(x)?;
        let scale = v.iter().map(|t| t.abs()).sum();
        Ok((compensated_sum(&mut v), scale))
    }

    /// f(exp z) in scaled form; never overflows.
    pub fn evaluate_log(&self, z: &[f64]) -> Scaled {
        let addends: Vec<(f64, f64)> = self
            .terms
            .iter()
            .map(|t| (t.coeff, t.exponent.iter().zip(z).map(|(a, b)| a * b).sum()))
            .collect();
        scaled_sum(&addends)
    }

    /// (x_1 d_1 f, ..., x_n d_n f) at x.
    pub fn log_gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        let vals = self.term_values(x)?;
        Ok((0..self.dim)
            .map(|i| {
                let mut v: Vec<f64> = vals
                    .iter()
                    .zip(&self.terms)
                    .map(|(v, t)| v * t.exponent[i])
                    .collect();
                compensated_sum(&mut v)
            })
            .collect())
    }

    /// The fewnomial x_i d_i f (same support minus terms with a_i = 0).
    pub fn log_derivative(&self, i: usize) -> Fewnomial {
        let terms = self
            .terms
            .iter()
            .filter(|t| t.exponent[i] != 0.0)
            .map(|t| Term::new(t.coeff * t.exponent[i], t.exponent.clone()))
            .collect();
        Fewnomial {
            dim: self.dim,
            terms,
        }
    }

    pub fn scale(&self, c: f64) -> Fewnomial {
        if c == 0.0 {
            return Self::zero(self.dim);
        }
        let terms = self
            .terms
            .iter()
            .map(|t| Term::new(t.coeff * c, t.exponent.clone()))
            .collect();
        Fewnomial {
            dim: self.dim,
            terms,
        }
    }

    /// Multiply by c x^a.
    pub fn mul_monomial(&self, c: f64, a: &[f64]) -> Fewnomial {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                Term::new(
                    t.coeff * c,
                    t.exponent.iter().zip(a).map(|(x, y)| x + y).collect(),
                )
            })
            .collect();
        Fewnomial::new(self.dim, terms).expect("finite inputs")
    }

    pub fn add(&self, other: &Fewnomial) -> Fewnomial {
        assert_eq!(self.dim, other.dim);
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Fewnomial::new(self.dim, terms).expect("finite inputs")
    }

    pub fn sub(&self, other: &Fewnomial) -> Fewnomial {
        self.add(&other.scale(-1.0))
    }

    pub fn mul(&self, other: &Fewnomial) -> Fewnomial {
        assert_eq!(self.dim, other.dim);
        let mut terms = Vec::with_capacity(self.len() * other.len());
        for s in &self.terms {
            for t in &other.terms {
                terms.push(Term::new(
                    s.coeff * t.coeff,
                    s.exponent
                        .iter()
                        .zip(&t.exponent)
                        .map(|(x, y)| x + y)
                        .collect(),
                ));
            }
        }
        merge_exact_then_new(self.dim, terms)
    }

    pub fn powi(&self, k: u32) -> Fewnomial {
        let mut out = Fewnomial::constant(self.dim, 1.0);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }
}

/// Products of fewnomials with integer exponents produce many coincident
/// exponents; summing those with compensated summation before the tolerance
/// merge keeps integer coefficients exact.
fn merge_exact_then_new(dim: usize, terms: Vec<Term>) -> Fewnomial {
    let mut groups: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
    for t in terms {
        if let Some(g) = groups
            .iter_mut()
            .find(|g| max_norm_dist(&g.0, &t.exponent) <= TAU_EXP)
        {
            g.1.push(t.coeff);
        } else {
            groups.push((t.exponent, vec![t.coeff]));
        }
    }
    let terms = groups
        .into_iter()
        .filter_map(|(a, mut cs)| {
            let total: f64 = cs.iter().map(|c| c.abs()).sum();
            let c = compensated_sum(&mut cs);
            if c == 0.0 || c.abs() < MERGE_DROP * total {
                None
            } else {
                Some(Term::new(c, a))
            }
        })
        .collect();
    Fewnomial { dim, terms }
}

fn check_term(dim: usize, i: usize, t: &Term) -> Result<()> {
    if t.exponent.len() != dim {
        return Err(Error::Schema {
            location: format!("term {i}"),
            message: format!("exponent has length {}, expected {dim}", t.exponent.len()),
        });
    }
    if !t.coeff.is_finite() || t.exponent.iter().any(|a| !a.is_finite()) {
        return Err(Error::Validation(format!(
            "term {i} has a non-finite entry"
        )));
    }
    Ok(())
}

/// A k x n system of fewnomials.
#[derive(Clone, Debug, PartialEq)]
pub struct FewnomialSystem {
    dim: usize,
    members: Vec<Fewnomial>,
}

impl FewnomialSystem {
    pub fn new(members: Vec<Fewnomial>) -> Result<Self> {
        let dim = members
            .first()
            .map(|f| f.dim())
            .ok_or_else(|| Error::Validation("a system needs at least one member".into()))?;
        for f in &members {
            if f.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: f.dim(),
                });
            }
        }
        Ok(FewnomialSystem { dim, members })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn members(&self) -> &[Fewnomial] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// (m_1, ..., m_k)
    pub fn type_signature(&self) -> Vec<usize> {
        self.members.iter().map(|f| f.len()).collect()
    }

    /// Number of distinct exponent vectors over all members.
    pub fn sparsity(&self) -> usize {
        let mut seen: Vec<&[f64]> = Vec::new();
        for f in &self.members {
            for t in f.terms() {
                if !seen
                    .iter()
                    .any(|s| max_norm_dist(s, &t.exponent) <= TAU_EXP)
                {
                    seen.push(&t.exponent);
                }
            }
        }
        seen.len()
    }

    /// Per-member values at x.
    pub fn evaluate(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.members.iter().map(|f| f.evaluate(x)).collect()
    }

    pub fn to_doc(&self) -> SystemDoc {
        SystemDoc {
            n: self.dim,
            polys: self.members.iter().map(|f| f.terms().to_vec()).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("serializable")
    }
}

impl Serialize for FewnomialSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_doc().serialize(s)
    }
}

impl Serialize for Fewnomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.terms.serialize(s)
    }
}

/// The JSON form `{ "n": int, "polys": [[{"c": .., "a": [..]}, ..], ..] }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDoc {
    pub n: usize,
    pub polys: Vec<Vec<Term>>,
}

impl SystemDoc {
    pub fn into_system(self) -> Result<FewnomialSystem> {
        if self.n == 0 {
            return Err(Error::Schema {
                location: "n".into(),
                message: "must be at least 1".into(),
            });
        }
        if self.polys.is_empty() {
            return Err(Error::Schema {
                location: "polys".into(),
                message: "no members".into(),
            });
        }
        let mut members = Vec::new();
        for (k, terms) in self.polys.into_iter().enumerate() {
            let f = Fewnomial::strict(self.n, terms).map_err(|e| match e {
                Error::Schema { location, message } => Error::Schema {
                    location: format!("polys[{k}] {location}"),
                    message,
                },
                Error::Validation(m) => Error::Validation(format!("polys[{k}]: {m}")),
                other => other,
            })?;
            members.push(f);
        }
        FewnomialSystem::new(members)
    }
}

pub fn parse_system(text: &str) -> Result<FewnomialSystem> {
    let doc: SystemDoc = serde_json::from_str(text).map_err(|e| Error::Schema {
        location: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    doc.into_system()
}

pub fn serialize_system(f: &FewnomialSystem) -> String {
    f.to_json()
}
