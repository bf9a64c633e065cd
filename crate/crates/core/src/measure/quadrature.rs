use serde::{Deserialize, Serialize};

/// Fixed quadrature rules available for interval populations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureRule {
    Midpoint,
    GaussLegendre,
}

impl std::str::FromStr for QuadratureRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "midpoint" | "mid" => Ok(QuadratureRule::Midpoint),
            "gauss" | "gauss-legendre" | "gauss_legendre" | "gl" => {
                Ok(QuadratureRule::GaussLegendre)
            }
            other => Err(format!("unknown quadrature rule `{other}`")),
        }
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1], nodes ascending.
///
/// Newton iteration on the three-term recurrence, seeded with the
/// Tricomi-type asymptotic guess. Weights sum to 2.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "gauss_legendre needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    let half = n.div_ceil(2);
    for i in 0..half {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // x is the i-th largest root
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Nodes and weights for `rule` on [a, b]; weights sum to b - a.
pub fn interval_rule(a: f64, b: f64, n: usize, rule: QuadratureRule) -> (Vec<f64>, Vec<f64>) {
    let len = b - a;
    match rule {
        QuadratureRule::Midpoint => {
            let h = len / n as f64;
            let xs = (0..n).map(|i| a + (i as f64 + 0.5) * h).collect();
            (xs, vec![h; n])
        }
        QuadratureRule::GaussLegendre => {
            let (t, w) = gauss_legendre(n);
            let mid = 0.5 * (a + b);
            let half = 0.5 * len;
            let xs = t.iter().map(|t| mid + half * t).collect();
            let ws = w.iter().map(|w| half * w).collect();
            (xs, ws)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn small_rules_match_tables() {
        let (x, w) = gauss_legendre(2);
        assert_abs_diff_eq!(x[1], 1.0 / 3f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(w[0], 1.0, epsilon = 1e-15);
        let (x, w) = gauss_legendre(3);
        assert_abs_diff_eq!(x[2], (0.6f64).sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(w[1], 8.0 / 9.0, epsilon = 1e-15);
    }

    #[test]
    fn weights_sum_to_two_and_nodes_ascend() {
        for n in [1, 5, 64, 200, 1000] {
            let (x, w) = gauss_legendre(n);
            let s: f64 = w.iter().sum();
            assert_abs_diff_eq!(s, 2.0, epsilon = 1e-13);
            assert!(x.windows(2).all(|p| p[0] < p[1]));
        }
    }
}
