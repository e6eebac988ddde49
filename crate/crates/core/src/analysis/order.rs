use crate::error::{Error, Result};

/// Least-squares line through `(log tau, log error)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderFit {
    pub points: Vec<(f64, f64)>,
    /// Observed order of convergence.
    pub slope: f64,
    /// `log(error)` at `tau = 1`.
    pub intercept: f64,
}

impl OrderFit {
    /// Error predicted by the fitted line at step size `tau`.
    pub fn predict(&self, tau: f64) -> f64 {
        (self.intercept + self.slope * tau.ln()).exp()
    }
}

/// Fit `log(error) = intercept + slope * log(tau)` over all points.
pub fn observed_order(points: &[(f64, f64)]) -> Result<OrderFit> {
    if points.len() < 2 {
        return Err(Error::Domain(format!(
            "an order fit needs at least 2 points, got {}",
            points.len()
        )));
    }
    for &(tau, err) in points {
        if !(tau.is_finite() && tau > 0.0) {
            return Err(Error::Domain(format!("step size must be positive, got {tau}")));
        }
        if !(err.is_finite() && err > 0.0) {
            return Err(Error::Domain(format!("error must be positive, got {err}")));
        }
    }
    for (i, a) in points.iter().enumerate() {
        if points[i + 1..].iter().any(|b| b.0 == a.0) {
            return Err(Error::Domain(format!("step size {} appears twice", a.0)));
        }
    }

    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    Ok(OrderFit {
        points: points.to_vec(),
        slope,
        intercept: my - slope * mx,
    })
}

/// `log(e_i / e_{i+1}) / log(tau_i / tau_{i+1})` for consecutive points.
pub fn pairwise_orders(points: &[(f64, f64)]) -> Vec<f64> {
    points
        .windows(2)
        .map(|w| (w[0].1 / w[1].1).ln() / (w[0].0 / w[1].0).ln())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exact_quartering_is_second_order() {
        let fit = observed_order(&[(0.4, 1.0), (0.2, 0.25), (0.1, 0.0625)]).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-14);
    }

    #[test]
    fn exact_halving_is_first_order() {
        let fit = observed_order(&[(0.4, 1.0), (0.2, 0.5)]).unwrap();
        assert!((fit.slope - 1.0).abs() < 1e-14);
        assert!((fit.predict(0.1) - 0.25).abs() < 1e-14);
    }

    #[test]
    fn pairwise_orders_of_mixed_table() {
        let p = pairwise_orders(&[(0.4, 1.0), (0.2, 0.25), (0.1, 0.125)]);
        assert!((p[0] - 2.0).abs() < 1e-14);
        assert!((p[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn invalid_points_rejected() {
        assert!(observed_order(&[(0.1, 1.0)]).is_err());
        assert!(observed_order(&[(0.1, 1.0), (0.05, 0.0)]).is_err());
        assert!(observed_order(&[(0.1, 1.0), (-0.05, 0.1)]).is_err());
        assert!(observed_order(&[(0.1, 1.0), (0.1, 0.5)]).is_err());
        assert!(observed_order(&[(0.1, f64::NAN), (0.05, 0.5)]).is_err());
    }

    proptest! {
        #[test]
        fn slope_invariant_under_error_scaling(
            errs in prop::collection::vec(1e-8f64..1.0, 3..6),
            scale in 1e-3f64..1e3,
        ) {
            let points: Vec<(f64, f64)> = errs.iter().enumerate()
                .map(|(i, &e)| (0.5f64.powi(i as i32), e)).collect();
            let scaled: Vec<(f64, f64)> = points.iter().map(|&(t, e)| (t, e * scale)).collect();
            let a = observed_order(&points).unwrap();
            let b = observed_order(&scaled).unwrap();
            prop_assert!((a.slope - b.slope).abs() <= 1e-10 * a.slope.abs().max(1.0));
            prop_assert!((b.intercept - a.intercept - scale.ln()).abs() <= 1e-10);
        }
    }
}
