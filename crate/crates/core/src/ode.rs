//! Embedded Dormand–Prince 5(4) integrator with proportional step control.
//!
//! Shared by the monodromy propagator (matrix-valued state) and the classical
//! spin integrator (3-vector state). Error control is on the absolute
//! elementwise maximum, which suits both uses: the states stay O(1) by
//! construction (unitary matrices, unit vectors).

use ndarray::Array2;
use num_complex::Complex64 as C64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OdeError {
    #[error("step size underflow at t = {t:.6e} (h = {h:.3e})")]
    StepUnderflow { t: f64, h: f64 },
}

pub(crate) trait OdeState: Clone {
    fn add_scaled(&mut self, a: f64, other: &Self);
    fn max_abs(&self) -> f64;
}

impl OdeState for Array2<C64> {
    fn add_scaled(&mut self, a: f64, other: &Self) {
        self.zip_mut_with(other, |x, y| *x += a * y);
    }
    fn max_abs(&self) -> f64 {
        self.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }
}

impl OdeState for [f64; 3] {
    fn add_scaled(&mut self, a: f64, other: &Self) {
        for i in 0..3 {
            self[i] += a * other[i];
        }
    }
    fn max_abs(&self) -> f64 {
        self.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
    }
}

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// 5th-order weights equal the last A row (FSAL); these are b5 - b4.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrate `dy/dt = f(t, y)` from `t0` to `t1`, keeping the local error per
/// step at or below `tol` (absolute, elementwise max norm).
pub(crate) fn integrate_adaptive<S, F>(
    f: F,
    t0: f64,
    t1: f64,
    y0: S,
    tol: f64,
) -> Result<S, OdeError>
where
    S: OdeState,
    F: Fn(f64, &S) -> S,
{
    let span = t1 - t0;
    assert!(span > 0.0, "integrate_adaptive: t1 must exceed t0");
    let h_min = span * 1e-14;
    let mut t = t0;
    let mut y = y0;
    let mut h = span / 100.0;
    let mut k: Vec<S> = Vec::with_capacity(7);

    while (t1 - t) > h_min {
        if h < h_min {
            return Err(OdeError::StepUnderflow { t, h });
        }
        let hs = h.min(t1 - t);
        k.clear();
        for i in 0..7 {
            let mut yi = y.clone();
            for (j, kj) in k.iter().enumerate() {
                if A[i][j] != 0.0 {
                    yi.add_scaled(hs * A[i][j], kj);
                }
            }
            k.push(f(t + C[i] * hs, &yi));
        }
        // error estimate: hs * Σ (b5_i - b4_i) k_i
        let mut err = k[0].clone();
        err.add_scaled(E[0] - 1.0, &k[0]);
        for (i, ki) in k.iter().enumerate().skip(1) {
            if E[i] != 0.0 {
                err.add_scaled(E[i], ki);
            }
        }
        let err_norm = err.max_abs() * hs;

        if err_norm <= tol {
            // accept: y += hs Σ b5_i k_i (b5 = last A row, FSAL)
            for (j, kj) in k.iter().enumerate().take(6) {
                if A[6][j] != 0.0 {
                    y.add_scaled(hs * A[6][j], kj);
                }
            }
            t += hs;
        }
        let factor = if err_norm > 0.0 {
            0.9 * (tol / err_norm).powf(0.2)
        } else {
            5.0
        };
        h = hs * factor.clamp(0.2, 5.0);
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay_third_component() {
        // dy/dt = (-y0, cos t, -2 y2)
        let f = |t: f64, y: &[f64; 3]| [-y[0], t.cos(), -2.0 * y[2]];
        let y = integrate_adaptive(f, 0.0, 2.0, [1.0, 0.0, 1.0], 1e-12).unwrap();
        assert!((y[0] - (-2.0f64).exp()).abs() < 1e-10);
        assert!((y[1] - 2.0f64.sin()).abs() < 1e-10);
        assert!((y[2] - (-4.0f64).exp()).abs() < 1e-10);
    }
}
