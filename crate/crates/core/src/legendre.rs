//! Fixed-order Gauss-Legendre panel rule used by the quadrature and spectral
//! modules. Nodes are found once by Newton iteration on the Legendre
//! recurrence and cached.

use std::sync::OnceLock;

pub(crate) const PANEL_ORDER: usize = 16;

static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();

/// Nodes and weights on [-1, 1] for `PANEL_ORDER` points.
pub(crate) fn reference_rule() -> &'static (Vec<f64>, Vec<f64>) {
    RULE.get_or_init(|| gauss_legendre(PANEL_ORDER))
}

/// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration; accurate to
/// machine precision for the small orders used here.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence up to order n and its derivative at x
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Nodes and weights of the reference rule mapped onto [a, b].
pub(crate) fn panel(a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + 'static {
    let (nodes, weights) = reference_rule();
    let half = (b - a) / 2.0;
    let mid = (a + b) / 2.0;
    nodes
        .iter()
        .zip(weights.iter())
        .map(move |(&x, &w)| (mid + half * x, half * w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn integrates_polynomials_exactly() {
        // order 16 is exact through degree 31
        let integral: f64 = panel(0.0, 1.0).map(|(x, w)| w * x.powi(31)).sum();
        assert_relative_eq!(integral, 1.0 / 32.0, max_relative = 1e-13);
    }

    #[test]
    fn weights_sum_to_interval() {
        let s: f64 = panel(-2.0, 5.0).map(|(_, w)| w).sum();
        assert_relative_eq!(s, 7.0, max_relative = 1e-15);
    }

    #[test]
    fn nodes_symmetric() {
        let (nodes, _) = reference_rule();
        for i in 0..PANEL_ORDER / 2 {
            assert_relative_eq!(nodes[i], -nodes[PANEL_ORDER - 1 - i], max_relative = 1e-15);
        }
    }
}
