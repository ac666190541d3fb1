//! Gauss-Legendre nodes on `[0, 1]`.

/// Nodes and weights of the `k`-point rule on `[0, 1]`; weights sum to 1.
///
/// The nodes interlace with the cumulative weights, so the slices
/// `[W_{i-1}, W_i]` (with `W_i = w_1 + ... + w_i`) each contain node `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn new(k: usize) -> GaussRule {
        assert!(k >= 1, "rule needs at least one node");
        let mut nodes = vec![0.0; k];
        let mut weights = vec![0.0; k];
        let half = k.div_ceil(2);
        for i in 0..half {
            // Chebyshev initial guess, then Newton on P_k.
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (k as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(k, z);
                dp = d;
                let dz = p / d;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(k, z);
            if d != 0.0 {
                dp = d;
            }
            let w = 1.0 / ((1.0 - z * z) * dp * dp);
            nodes[i] = 0.5 * (1.0 - z);
            nodes[k - 1 - i] = 0.5 * (1.0 + z);
            weights[i] = w;
            weights[k - 1 - i] = w;
        }
        GaussRule { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `W_0 = 0, W_1, ..., W_k = 1`.
    pub fn cumulative(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len() + 1);
        let mut acc = 0.0;
        out.push(0.0);
        for w in &self.weights[..self.len() - 1] {
            acc += w;
            out.push(acc);
        }
        out.push(1.0);
        out
    }
}

/// `(P_k(z), P_k'(z))`.
fn legendre(k: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if k == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=k {
        let p2 = ((2 * j - 1) as f64 * z * p1 - (j - 1) as f64 * p0) / j as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = k as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}
