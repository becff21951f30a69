//! Numerical utilities: stable log-sum-exp, binomial intervals and
//! Gauss-Laguerre quadrature.

/// Streaming log-sum-exp accumulator.
///
/// Keeps a running maximum and a rescaled sum so that terms can be folded in
/// one pass without materialising them. When every accumulated term is equal,
/// `log_mean` returns that term bit-for-bit (the rescaled sum counts terms
/// exactly), which the ALRT N=1 degeneracy checks rely on.
#[derive(Debug, Clone)]
pub struct LogSumExp {
    max: f64,
    sum: f64,
    count: u64,
}

impl LogSumExp {
    pub fn new() -> Self {
        Self {
            max: f64::NEG_INFINITY,
            sum: 0.0,
            count: 0,
        }
    }

    pub fn add(&mut self, term: f64) {
        self.count += 1;
        if term == f64::NEG_INFINITY {
            return;
        }
        if term > self.max {
            self.sum = self.sum * (self.max - term).exp() + 1.0;
            self.max = term;
        } else {
            self.sum += (term - self.max).exp();
        }
    }

    /// log(sum of exp(term)) over everything added so far.
    pub fn log_sum(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + self.sum.ln()
        }
    }

    /// log(mean of exp(term)) over everything added so far.
    pub fn log_mean(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + (self.sum / self.count as f64).ln()
        }
    }
}

impl Default for LogSumExp {
    fn default() -> Self {
        Self::new()
    }
}

/// log(Σ exp(x_i)) of a slice, guarded against overflow/underflow.
pub fn logsumexp(values: &[f64]) -> f64 {
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = values.iter().map(|&v| (v - max).exp()).sum();
    max + sum.ln()
}

/// Wilson score interval for a binomial proportion.
///
/// Returns `(low, high)` for `successes` out of `trials` at critical value
/// `z` (1.96 for 95%).
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    assert!(trials > 0, "wilson_interval needs at least one trial");
    assert!(successes <= trials);
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Nodes and weights of n-point Gauss-Laguerre quadrature,
/// ∫_0^∞ e^{-x} f(x) dx ≈ Σ w_i f(x_i).
///
/// Newton iteration on the Laguerre recurrence; accurate to ~1e-13 for the
/// node counts used here (≤ 128).
pub fn gauss_laguerre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    let mut z = 0.0;
    for i in 0..n {
        // Stroud-Secrest initial guesses.
        if i == 0 {
            z = 3.0 / (1.0 + 2.4 * nf);
        } else if i == 1 {
            z += 15.0 / (1.0 + 2.5 * nf);
        } else {
            let ai = (i - 1) as f64;
            z += ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - nodes[i - 2]);
        }
        let mut pp = 0.0;
        let mut p2 = 0.0;
        for _ in 0..100 {
            let mut p1 = 1.0;
            p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf + 1.0 - z) * p2 - jf * p3) / (jf + 1.0);
            }
            pp = nf * (p1 - p2) / z;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-14 * z.abs().max(1.0) {
                break;
            }
        }
        nodes[i] = z;
        weights[i] = -1.0 / (pp * nf * p2);
    }
    (nodes, weights)
}
