//! Indexed families of measurable functions evaluated on population points.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::Point;

/// Norm applied to vector values before a trial function sees them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VectorNorm {
    #[default]
    Euclidean,
    Sup,
    One,
}

impl VectorNorm {
    #[inline]
    pub fn apply(self, v: &[f64]) -> f64 {
        match v {
            [x] => x.abs(),
            _ => match self {
                VectorNorm::Euclidean => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
                VectorNorm::Sup => v.iter().fold(0.0, |m, x| m.max(x.abs())),
                VectorNorm::One => v.iter().map(|x| x.abs()).sum(),
            },
        }
    }

    /// ‖a − b‖ without allocating.
    #[inline]
    pub fn distance(self, a: &[f64], b: &[f64]) -> f64 {
        match (a, b) {
            ([x], [y]) => (x - y).abs(),
            _ => {
                let it = a.iter().zip(b).map(|(x, y)| (x - y).abs());
                match self {
                    VectorNorm::Euclidean => it.map(|d| d * d).sum::<f64>().sqrt(),
                    VectorNorm::Sup => it.fold(0.0, f64::max),
                    VectorNorm::One => it.sum(),
                }
            }
        }
    }
}

impl std::str::FromStr for VectorNorm {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "euclidean" | "l2" | "2" => Ok(VectorNorm::Euclidean),
            "sup" | "max" | "inf" | "linf" => Ok(VectorNorm::Sup),
            "one" | "l1" | "1" => Ok(VectorNorm::One),
            other => Err(format!("unknown norm `{other}` (euclidean|sup|one)")),
        }
    }
}

/// Evaluates the members f_k of a sequence (k ≥ 1) at a point.
pub trait SequenceEval: Send + Sync {
    fn dim(&self) -> usize;

    /// Writes f_k(x) into `out` (length `dim`).
    fn eval(&self, k: usize, x: &Point, out: &mut [f64]);

    /// Writes f_first(x), ..., f_last(x) into `out`, `dim` entries per index.
    ///
    /// Override when consecutive members share work (partial sums, random walks).
    fn eval_range(&self, x: &Point, first: usize, last: usize, out: &mut [f64]) {
        let d = self.dim();
        for (i, k) in (first..=last).enumerate() {
            self.eval(k, x, &mut out[i * d..(i + 1) * d]);
        }
    }
}

struct ScalarFn<F>(F);

impl<F> SequenceEval for ScalarFn<F>
where
    F: Fn(usize, &Point) -> f64 + Send + Sync,
{
    fn dim(&self) -> usize {
        1
    }
    fn eval(&self, k: usize, x: &Point, out: &mut [f64]) {
        out[0] = (self.0)(k, x);
    }
}

struct VectorFn<F> {
    dim: usize,
    f: F,
}

impl<F> SequenceEval for VectorFn<F>
where
    F: Fn(usize, &Point, &mut [f64]) + Send + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, k: usize, x: &Point, out: &mut [f64]) {
        (self.f)(k, x, out)
    }
}

struct Combination {
    terms: Vec<(f64, Arc<dyn SequenceEval>)>,
    dim: usize,
}

impl SequenceEval for Combination {
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, k: usize, x: &Point, out: &mut [f64]) {
        self.eval_range(x, k, k, out)
    }
    fn eval_range(&self, x: &Point, first: usize, last: usize, out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        let mut buf = vec![0.0; out.len()];
        for (c, term) in &self.terms {
            term.eval_range(x, first, last, &mut buf);
            for (o, b) in out.iter_mut().zip(&buf) {
                *o += c * b;
            }
        }
    }
}

type LimitFn = dyn Fn(&Point, &mut [f64]) + Send + Sync;

/// A numbered family {f_n} with its vector norm and optional limit candidate f_∞.
///
/// When a limit candidate is present it is subtracted before any analysis,
/// reducing the question to convergence towards zero.
#[derive(Clone)]
pub struct FunctionSequence {
    name: String,
    eval: Arc<dyn SequenceEval>,
    norm: VectorNorm,
    limit: Option<Arc<LimitFn>>,
    max_index: Option<usize>,
}

impl fmt::Debug for FunctionSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionSequence")
            .field("name", &self.name)
            .field("dim", &self.dim())
            .field("norm", &self.norm)
            .field("has_limit", &self.limit.is_some())
            .field("max_index", &self.max_index)
            .finish()
    }
}

impl FunctionSequence {
    pub fn from_eval(name: impl Into<String>, eval: Arc<dyn SequenceEval>) -> Self {
        Self {
            name: name.into(),
            eval,
            norm: VectorNorm::default(),
            limit: None,
            max_index: None,
        }
    }

    pub fn scalar<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(usize, &Point) -> f64 + Send + Sync + 'static,
    {
        Self::from_eval(name, Arc::new(ScalarFn(f)))
    }

    pub fn vector<F>(name: impl Into<String>, dim: usize, f: F) -> Self
    where
        F: Fn(usize, &Point, &mut [f64]) + Send + Sync + 'static,
    {
        Self::from_eval(name, Arc::new(VectorFn { dim, f }))
    }

    pub fn with_norm(mut self, norm: VectorNorm) -> Self {
        self.norm = norm;
        self
    }

    pub fn with_limit<F>(mut self, f: F) -> Self
    where
        F: Fn(&Point, &mut [f64]) + Send + Sync + 'static,
    {
        self.limit = Some(Arc::new(f));
        self
    }

    /// Restricts the family to indices 1..=max (sampled inputs).
    pub fn with_max_index(mut self, max: usize) -> Self {
        self.max_index = Some(max);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.eval.dim()
    }

    pub fn norm(&self) -> VectorNorm {
        self.norm
    }

    pub fn has_limit(&self) -> bool {
        self.limit.is_some()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.max_index
    }

    /// c₁·a + c₂·b, keeping `a`'s norm. Limit candidates are combined likewise.
    pub fn linear_combination(c1: f64, a: &Self, c2: f64, b: &Self) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch(format!(
                "cannot combine dimensions {} and {}",
                a.dim(),
                b.dim()
            )));
        }
        let dim = a.dim();
        let eval = Arc::new(Combination {
            terms: vec![(c1, a.eval.clone()), (c2, b.eval.clone())],
            dim,
        });
        let limit: Option<Arc<LimitFn>> = match (&a.limit, &b.limit) {
            (None, None) => None,
            (la, lb) => {
                let (la, lb) = (la.clone(), lb.clone());
                Some(Arc::new(move |x: &Point, out: &mut [f64]| {
                    let mut buf = vec![0.0; out.len()];
                    out.iter_mut().for_each(|v| *v = 0.0);
                    for (c, l) in [(c1, &la), (c2, &lb)] {
                        if let Some(l) = l {
                            l(x, &mut buf);
                            for (o, b) in out.iter_mut().zip(&buf) {
                                *o += c * b;
                            }
                        }
                    }
                }))
            }
        };
        let max_index = match (a.max_index, b.max_index) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        };
        Ok(Self {
            name: format!("{c1}*{}+{c2}*{}", a.name, b.name),
            eval,
            norm: a.norm,
            limit,
            max_index,
        })
    }

    /// Raw values f_first..=f_last at `x`, with finiteness checked.
    pub fn eval_raw(&self, x: &Point, first: usize, last: usize, out: &mut Vec<f64>) -> Result<()> {
        debug_assert!(first >= 1 && first <= last);
        if let Some(max) = self.max_index {
            if last > max {
                return Err(Error::BadGrid(format!(
                    "sequence `{}` is only defined up to index {max}, index {last} requested",
                    self.name
                )));
            }
        }
        let d = self.dim();
        out.clear();
        out.resize((last - first + 1) * d, 0.0);
        self.eval.eval_range(x, first, last, out);
        if let Some(i) = out.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteIntegrand {
                point: x.to_string(),
                index: Some(first + i / d),
                value: out[i],
            });
        }
        Ok(())
    }

    /// Values of f_k − f_∞ for k in first..=last (f_∞ = 0 when absent).
    pub fn eval_centered(
        &self,
        x: &Point,
        first: usize,
        last: usize,
        out: &mut Vec<f64>,
    ) -> Result<()> {
        self.eval_raw(x, first, last, out)?;
        if let Some(limit) = &self.limit {
            let d = self.dim();
            let mut l = vec![0.0; d];
            limit(x, &mut l);
            if let Some(v) = l.iter().find(|v| !v.is_finite()) {
                return Err(Error::NonFiniteIntegrand {
                    point: x.to_string(),
                    index: None,
                    value: *v,
                });
            }
            for chunk in out.chunks_mut(d) {
                for (c, lv) in chunk.iter_mut().zip(&l) {
                    *c -= lv;
                }
            }
        }
        Ok(())
    }

    /// ‖f_k(x) − f_∞(x)‖ for k in first..=last.
    pub fn norms_centered(
        &self,
        x: &Point,
        first: usize,
        last: usize,
        scratch: &mut Vec<f64>,
        out: &mut Vec<f64>,
    ) -> Result<()> {
        self.eval_centered(x, first, last, scratch)?;
        out.clear();
        out.extend(scratch.chunks(self.dim()).map(|c| self.norm.apply(c)));
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norms() {
        let v = [3.0, -4.0];
        assert_eq!(VectorNorm::Euclidean.apply(&v), 5.0);
        assert_eq!(VectorNorm::Sup.apply(&v), 4.0);
        assert_eq!(VectorNorm::One.apply(&v), 7.0);
        assert_eq!(VectorNorm::One.distance(&v, &[1.0, 1.0]), 7.0);
        assert_eq!(VectorNorm::Sup.apply(&[-2.0]), 2.0);
    }

    #[test]
    fn limit_is_subtracted() {
        let s = FunctionSequence::scalar("shift", |k, x| x.scalar() + 1.0 / k as f64)
            .with_limit(|x, out| out[0] = x.scalar());
        let mut out = Vec::new();
        s.eval_centered(&Point::Real(3.0), 1, 4, &mut out).unwrap();
        for (a, b) in out.iter().zip([1.0, 0.5, 1.0 / 3.0, 0.25]) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn non_finite_names_index() {
        let s = FunctionSequence::scalar("blow", |k, _| if k == 3 { f64::INFINITY } else { 0.0 });
        let mut out = Vec::new();
        match s.eval_raw(&Point::Real(0.5), 1, 5, &mut out) {
            Err(Error::NonFiniteIntegrand { index: Some(3), .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn combination() {
        let a = FunctionSequence::scalar("a", |k, _| k as f64);
        let b = FunctionSequence::scalar("b", |_, x| x.scalar());
        let c = FunctionSequence::linear_combination(2.0, &a, -1.0, &b).unwrap();
        let mut out = Vec::new();
        c.eval_raw(&Point::Real(0.5), 2, 3, &mut out).unwrap();
        assert_eq!(out, vec![3.5, 5.5]);
    }

    #[test]
    fn max_index_enforced() {
        let s = FunctionSequence::scalar("short", |_, _| 0.0).with_max_index(3);
        let mut out = Vec::new();
        assert!(s.eval_raw(&Point::Real(0.0), 1, 3, &mut out).is_ok());
        assert!(matches!(
            s.eval_raw(&Point::Real(0.0), 2, 4, &mut out),
            Err(Error::BadGrid(_))
        ));
    }
}
