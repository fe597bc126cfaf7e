//! Associated Laguerre polynomials L_n^k(x).

/// Degree `n` and upper index `k` of an associated Laguerre polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LaguerreSpec {
    pub n: u32,
    pub k: u32,
}

impl LaguerreSpec {
    pub const fn new(n: u32, k: u32) -> Self {
        Self { n, k }
    }

    pub fn eval(&self, x: f64) -> f64 {
        laguerre_eval(*self, x)
    }
}

/// Evaluates L_n^k(x) by the three-term recurrence
///
///   (j + 1) L_{j+1} = (2j + 1 + k − x) L_j − (j + k) L_{j−1}.
pub fn laguerre_eval(spec: LaguerreSpec, x: f64) -> f64 {
    let k = f64::from(spec.k);
    let mut prev = 1.0;
    if spec.n == 0 {
        return prev;
    }
    let mut cur = 1.0 + k - x;
    for j in 1..spec.n {
        let j = f64::from(j);
        let next = ((2.0 * j + 1.0 + k - x) * cur - (j + k) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// d/dx L_n^k(x) = −L_{n−1}^{k+1}(x).
pub fn laguerre_derivative(spec: LaguerreSpec, x: f64) -> f64 {
    if spec.n == 0 {
        0.0
    } else {
        -laguerre_eval(LaguerreSpec::new(spec.n - 1, spec.k + 1), x)
    }
}
