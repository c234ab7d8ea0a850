use serde::{Deserialize, Serialize};

use super::WeakSolution;
use crate::error::{Error, Result};
use crate::scalar::Real;

pub const DEFAULT_WINDOW: (u32, u32) = (8, 40);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct OrderEstimate<T> {
    /// Absent when the derivative norms diverge inside the window.
    #[serde(with = "crate::serde_float::option")]
    pub beta_hat: Option<T>,
    pub window_lo: u32,
    pub window_hi: u32,
    /// Root-mean-square residual of the fit.
    #[serde(with = "crate::serde_float")]
    pub regression_residual: T,
    pub divergent: bool,
}

/// Least-squares coefficients of `y ≈ X c` by modified Gram–Schmidt, with
/// the root-mean-square residual.
pub fn least_squares(columns: &[Vec<f64>], y: &[f64]) -> (Vec<f64>, f64) {
    let p = columns.len();
    let m = y.len();
    let mut q: Vec<Vec<f64>> = columns.to_vec();
    let mut r = vec![vec![0.0; p]; p];
    for j in 0..p {
        for i in 0..j {
            let d: f64 = (0..m).map(|k| q[i][k] * q[j][k]).sum();
            r[i][j] = d;
            for k in 0..m {
                q[j][k] -= d * q[i][k];
            }
        }
        let norm = q[j].iter().map(|v| v * v).sum::<f64>().sqrt();
        r[j][j] = norm;
        for v in &mut q[j] {
            *v /= norm;
        }
    }
    let qty: Vec<f64> = (0..p).map(|j| (0..m).map(|k| q[j][k] * y[k]).sum()).collect();
    let mut c = vec![0.0; p];
    for j in (0..p).rev() {
        let s: f64 = (j + 1..p).map(|i| r[j][i] * c[i]).sum();
        c[j] = (qty[j] - s) / r[j][j];
    }
    let rss: f64 = (0..m)
        .map(|k| {
            let fit: f64 = (0..p).map(|j| columns[j][k] * c[j]).sum();
            (y[k] - fit).powi(2)
        })
        .sum();
    (c, (rss / m as f64).sqrt())
}

/// Gevrey order read off `ln ‖A^n y(t)‖ ≈ c₀ + c₁ n + c₂ ln n + β n ln n`,
/// the logarithm of `c α^n (n!)^β` after Stirling.
pub fn estimate_gevrey_order<T: Real>(sol: &WeakSolution<T>, t: T, n_lo: u32, n_hi: u32) -> Result<OrderEstimate<T>> {
    if n_hi < n_lo || n_hi - n_lo < 4 {
        return Err(Error::WindowTooSmall { lo: n_lo as usize, hi: n_hi as usize });
    }
    if n_lo == 0 {
        return Err(Error::InvalidSpec("window must start at n >= 1".into()));
    }
    let mut logs = Vec::with_capacity((n_hi - n_lo + 1) as usize);
    for n in n_lo..=n_hi {
        match sol.derivative_norm(t, n) {
            Ok(b) => logs.push(b.value.ln().as_f64()),
            Err(Error::NotInDomain(_)) => {
                return Ok(OrderEstimate {
                    beta_hat: None,
                    window_lo: n_lo,
                    window_hi: n_hi,
                    regression_residual: T::nan(),
                    divergent: true,
                })
            }
            Err(e) => return Err(e),
        }
    }
    let ns: Vec<f64> = (n_lo..=n_hi).map(f64::from).collect();
    let columns = vec![
        vec![1.0; ns.len()],
        ns.clone(),
        ns.iter().map(|n| n.ln()).collect(),
        ns.iter().map(|n| n * n.ln()).collect(),
    ];
    let (c, residual) = least_squares(&columns, &logs);
    Ok(OrderEstimate {
        beta_hat: Some(T::lit(c[3])),
        window_lo: n_lo,
        window_hi: n_hi,
        regression_residual: T::lit(residual),
        divergent: false,
    })
}
