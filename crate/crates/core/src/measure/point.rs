use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Identifies one Monte Carlo path: the master seed plus the path index.
///
/// Randomness for a path comes from the ChaCha stream `index` under key `seed`,
/// so any worker can regenerate any path independently of evaluation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PathId {
    pub seed: u64,
    pub index: u64,
}

impl PathId {
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.index);
        rng
    }
}

/// A point of a discretized measure space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Point {
    Real(f64),
    Tuple(Vec<f64>),
    Path(PathId),
}

impl Point {
    /// The scalar abscissa, or NaN when the point is not one-dimensional.
    ///
    /// Returning NaN lets a mismatched evaluator surface as a
    /// `NON_FINITE_INTEGRAND` error naming this point.
    pub fn scalar(&self) -> f64 {
        match self {
            Point::Real(x) => *x,
            Point::Tuple(v) if v.len() == 1 => v[0],
            _ => f64::NAN,
        }
    }

    pub fn coords(&self) -> Option<&[f64]> {
        match self {
            Point::Real(x) => Some(std::slice::from_ref(x)),
            Point::Tuple(v) => Some(v),
            Point::Path(_) => None,
        }
    }

    pub fn path(&self) -> Option<PathId> {
        match self {
            Point::Path(id) => Some(*id),
            _ => None,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Point::Real(_) | Point::Path(_) => 1,
            Point::Tuple(v) => v.len(),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Real(x) => write!(f, "{x}"),
            Point::Tuple(v) => {
                write!(f, "(")?;
                for (i, c) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
            Point::Path(id) => write!(f, "path {} (seed {})", id.index, id.seed),
        }
    }
}
