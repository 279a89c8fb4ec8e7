//! Pinball (quantile) loss and its gradient pair.

/// `(τ − 1[y < ŷ])(y − ŷ)`.
pub fn pinball_loss(y: f64, yhat: f64, tau: f64) -> f64 {
    let d = y - yhat;
    if d >= 0.0 {
        tau * d
    } else {
        (tau - 1.0) * d
    }
}

pub fn mean_pinball_loss(y: &[f64], yhat: &[f64], tau: f64) -> f64 {
    y.iter()
        .zip(yhat)
        .map(|(&a, &b)| pinball_loss(a, b, tau))
        .sum::<f64>()
        / y.len() as f64
}

/// First derivative in ŷ and the constant unit surrogate hessian.
///
/// A tie `y == ŷ` takes the "not above" branch, `g = 1 − τ`.
pub fn pinball_grad(y: f64, yhat: f64, tau: f64) -> (f64, f64) {
    if y > yhat {
        (-tau, 1.0)
    } else {
        (1.0 - tau, 1.0)
    }
}

/// Per-row first and second derivatives at the current predictions.
#[derive(Debug, Clone, PartialEq)]
pub struct GradHess {
    pub g: Vec<f64>,
    pub h: Vec<f64>,
}

impl GradHess {
    pub fn pinball(y: &[f64], yhat: &[f64], tau: f64) -> Self {
        let (g, h) = y.iter().zip(yhat).map(|(&a, &b)| pinball_grad(a, b, tau)).unzip();
        Self { g, h }
    }

    pub fn len(&self) -> usize {
        self.g.len()
    }

    pub fn is_empty(&self) -> bool {
        self.g.is_empty()
    }
}
