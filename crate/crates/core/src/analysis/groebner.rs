//! Numerical check of the nonlinear variation-of-constants formula
//!
//! ```text
//! f(t) = E_G(t, f_0) + int_0^t d2E_G(t - s, f(s)) R(f(s)) ds
//! ```
//!
//! for `f' = G(f) + R(f)`, where `E_G(t, y)` is the flow of `g' = G(g)` and
//! `d2E_G` its derivative with respect to the initial value. The checker is
//! restricted to scalar problems whose unperturbed flow is known in closed
//! form.

#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};

/// Longest horizon accepted by the checker.
pub const MAX_HORIZON: f64 = 5.0;

/// Step size of the reference RK4 integration.
const RK4_STEP: f64 = 1e-3;

const QUADRATURE_TOLERANCE: f64 = 1e-13;
const MAX_SUBINTERVALS: usize = 256;

/// A scalar ODE `f' = G(f) + R(f)` with a closed-form `G` flow.
pub trait ScalarProblem {
    fn name(&self) -> &str;
    fn initial(&self) -> f64;
    fn g(&self, f: f64) -> f64;
    fn r(&self, f: f64) -> f64;
    /// `E_G(t, y)`.
    fn flow(&self, t: f64, y: f64) -> f64;
    /// `d/dy E_G(t, y)`.
    fn flow_derivative(&self, t: f64, y: f64) -> f64;
    /// Closed-form solution of the full problem, when one is known.
    fn exact(&self, _t: f64) -> Option<f64> {
        None
    }
}

/// `f' = -f^3`, no perturbation: the formula reduces to `f = E_G`.
#[derive(Debug, Clone, Copy)]
pub struct Unperturbed {
    pub f0: f64,
}

impl Default for Unperturbed {
    fn default() -> Self {
        Self { f0: 1.0 }
    }
}

impl ScalarProblem for Unperturbed {
    fn name(&self) -> &str {
        "unperturbed (G = -f^3, R = 0)"
    }
    fn initial(&self) -> f64 {
        self.f0
    }
    fn g(&self, f: f64) -> f64 {
        -f * f * f
    }
    fn r(&self, _f: f64) -> f64 {
        0.0
    }
    fn flow(&self, t: f64, y: f64) -> f64 {
        y / (1.0 + 2.0 * y * y * t).sqrt()
    }
    fn flow_derivative(&self, t: f64, y: f64) -> f64 {
        (1.0 + 2.0 * y * y * t).powf(-1.5)
    }
    fn exact(&self, t: f64) -> Option<f64> {
        Some(self.flow(t, self.f0))
    }
}

/// `f' = -f + f^2`, `f(0) = 1/2`, with solution `1 / (1 + e^t)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Logistic;

impl ScalarProblem for Logistic {
    fn name(&self) -> &str {
        "logistic (G = -f, R = f^2)"
    }
    fn initial(&self) -> f64 {
        0.5
    }
    fn g(&self, f: f64) -> f64 {
        -f
    }
    fn r(&self, f: f64) -> f64 {
        f * f
    }
    fn flow(&self, t: f64, y: f64) -> f64 {
        y * (-t).exp()
    }
    fn flow_derivative(&self, t: f64, _y: f64) -> f64 {
        (-t).exp()
    }
    fn exact(&self, t: f64) -> Option<f64> {
        Some(1.0 / (1.0 + t.exp()))
    }
}

/// `f' = lambda f + c`, with solution `f0 e^{lambda t} + c t phi_1(lambda t)`.
#[derive(Debug, Clone, Copy)]
pub struct LinearForced {
    pub lambda: f64,
    pub forcing: f64,
    pub f0: f64,
}

impl Default for LinearForced {
    fn default() -> Self {
        Self {
            lambda: -0.7,
            forcing: 0.3,
            f0: 1.0,
        }
    }
}

impl ScalarProblem for LinearForced {
    fn name(&self) -> &str {
        "linear (G = lambda f, R = c)"
    }
    fn initial(&self) -> f64 {
        self.f0
    }
    fn g(&self, f: f64) -> f64 {
        self.lambda * f
    }
    fn r(&self, _f: f64) -> f64 {
        self.forcing
    }
    fn flow(&self, t: f64, y: f64) -> f64 {
        y * (self.lambda * t).exp()
    }
    fn flow_derivative(&self, t: f64, _y: f64) -> f64 {
        (self.lambda * t).exp()
    }
    fn exact(&self, t: f64) -> Option<f64> {
        let z = self.lambda * t;
        Some(self.f0 * z.exp() + self.forcing * t * super::phi_scalar(1, z))
    }
}

/// Classical RK4 for `f' = rhs(f)` from `0` to `t` with steps of about `RK4_STEP`.
pub fn integrate_scalar(rhs: impl Fn(f64) -> f64, f0: f64, t: f64) -> f64 {
    if t == 0.0 {
        return f0;
    }
    let steps = (t.abs() / RK4_STEP).ceil().max(1.0) as usize;
    let h = t / steps as f64;
    let mut f = f0;
    for _ in 0..steps {
        let k1 = rhs(f);
        let k2 = rhs(f + 0.5 * h * k1);
        let k3 = rhs(f + 0.5 * h * k2);
        let k4 = rhs(f + h * k3);
        f += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    f
}

/// Both sides of the identity at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlekseevReport {
    /// `f(t)` by direct integration of the full problem.
    pub direct: f64,
    /// `E_G(t, f0) + int_0^t d2E_G(t - s, f(s)) R(f(s)) ds`.
    pub formula: f64,
    pub residual: f64,
    /// Deviation of the direct solution from the closed form, if known.
    pub exact_error: Option<f64>,
}

pub fn groebner_alekseev_residual<P: ScalarProblem + ?Sized>(problem: &P, t: f64) -> Result<AlekseevReport> {
    if !(0.0..=MAX_HORIZON).contains(&t) {
        return Err(Error::Domain(format!(
            "horizon must lie in [0, {MAX_HORIZON}], got {t}"
        )));
    }
    let f0 = problem.initial();
    let full = |f: f64| problem.g(f) + problem.r(f);
    let direct = integrate_scalar(full, f0, t);

    let integrand = |s: f64| {
        let fs = integrate_scalar(full, f0, s);
        problem.flow_derivative(t - s, fs) * problem.r(fs)
    };
    let integral = adaptive_gauss_kronrod(integrand, 0.0, t)?;
    let formula = problem.flow(t, f0) + integral;

    Ok(AlekseevReport {
        direct,
        formula,
        residual: (direct - formula).abs(),
        exact_error: problem.exact(t).map(|e| (e - direct).abs()),
    })
}

const GK_NODES: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7.
const G_WEIGHTS: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// 15-point Kronrod estimate and its difference from the embedded 7-point Gauss rule.
fn gauss_kronrod_15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = GK_WEIGHTS[7] * fc;
    let mut gauss = G_WEIGHTS[3] * fc;
    for i in 0..7 {
        let dx = h * GK_NODES[i];
        let pair = f(c - dx) + f(c + dx);
        kronrod += GK_WEIGHTS[i] * pair;
        if i % 2 == 1 {
            gauss += G_WEIGHTS[i / 2] * pair;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

fn adaptive_gauss_kronrod(f: impl Fn(f64) -> f64, a: f64, b: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let mut pending = vec![(a, b)];
    let mut total = 0.0;
    let mut evaluated = 0;
    while let Some((lo, hi)) = pending.pop() {
        evaluated += 1;
        if evaluated > MAX_SUBINTERVALS {
            return Err(Error::Accuracy(format!(
                "quadrature on [{a}, {b}] did not converge within {MAX_SUBINTERVALS} subintervals"
            )));
        }
        let (value, err) = gauss_kronrod_15(&f, lo, hi);
        let share = (hi - lo) / (b - a);
        if err <= QUADRATURE_TOLERANCE * share.max(1e-3) || hi - lo < 1e-12 * (b - a) {
            total += value;
        } else {
            let mid = 0.5 * (lo + hi);
            pending.push((mid, hi));
            pending.push((lo, mid));
        }
    }
    Ok(total)
}
