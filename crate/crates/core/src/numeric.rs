//! Small numerical kernels: Richardson extrapolation, compensated summation
//! and Gauss–Legendre rules.

/// Result of extrapolating central differences at steps h, h/2, h/4.
#[derive(Clone, Debug)]
pub struct Extrapolated {
    pub value: Vec<f64>,
    /// max |R₂ − R₁| over components, between the last two extrapolation levels.
    pub error: f64,
}

/// Two Richardson refinements of an O(h²) estimate `f(h)`.
pub fn richardson<E>(h: f64, mut f: impl FnMut(f64) -> Result<Vec<f64>, E>) -> Result<Extrapolated, E> {
    let d0 = f(h)?;
    let d1 = f(h / 2.0)?;
    let d2 = f(h / 4.0)?;
    let mut value = Vec::with_capacity(d0.len());
    let mut error: f64 = 0.0;
    for k in 0..d0.len() {
        let r1a = (4.0 * d1[k] - d0[k]) / 3.0;
        let r1b = (4.0 * d2[k] - d1[k]) / 3.0;
        let r2 = (16.0 * r1b - r1a) / 15.0;
        error = error.max((r2 - r1b).abs());
        value.push(r2);
    }
    Ok(Extrapolated { value, error })
}

/// Neumaier's compensated sum, accumulated in iteration order.
pub fn neumaier_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
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

/// Gauss–Legendre nodes and weights on [−1, 1], nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
