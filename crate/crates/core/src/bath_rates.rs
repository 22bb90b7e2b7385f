//! Golden-rule transition rates between Floquet states, the master-equation
//! generator, and its stationary distribution.
//!
//! The coupling V = γ S_x has Fourier components only at ℓ = ±1, making the
//! rate matrix tridiagonal and forcing detailed balance. All rates are stored
//! dimensionless, in units of Γ₀ = 2πγ²J₀.

use crate::floquet::{self, DriveParams, FloquetDecomposition};
use crate::linalg::{self, CMat, RMat};
use crate::spin_algebra::{self, SpinQuantumNumber};
use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;
use thiserror::Error;

/// Relative width of the ω = Ω boundary strip.
pub const BOUNDARY_REL_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum RateError {
    #[error("bath parameters must be finite and positive")]
    InvalidParams,
    #[error("regime boundary: |omega - Omega| = {gap:.3e} below {tol:.3e}; handle via limits")]
    Boundary { gap: f64, tol: f64 },
    #[error("transition {m} -> {n} is not tridiagonal (|m - n| > 1)")]
    NotAdjacent { m: i32, n: i32 },
    #[error("reducible generator: vanishing rate on the link between index {lower} and {upper}")]
    ReducibleGenerator { lower: usize, upper: usize },
}

/// Inverse bath temperature β, constant spectral density J₀, coupling γ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathParams {
    pub beta: f64,
    pub j0: f64,
    pub gamma: f64,
}

impl BathParams {
    pub fn new(beta: f64, j0: f64, gamma: f64) -> Result<Self, RateError> {
        let ok = beta > 0.0 && j0 > 0.0 && gamma > 0.0;
        if !ok || !beta.is_finite() || !j0.is_finite() || !gamma.is_finite() {
            return Err(RateError::InvalidParams);
        }
        Ok(Self { beta, j0, gamma })
    }

    /// Overall rate scale Γ₀ = 2πγ²J₀.
    pub fn gamma0(self) -> f64 {
        2.0 * std::f64::consts::PI * self.gamma * self.gamma * self.j0
    }
}

/// Thermal Bose weight N(ω̃) of a bath mode at signed frequency ω̃:
/// 1/(e^{βω̃} − 1) for absorption (ω̃ > 0) and 1/(1 − e^{βω̃}) for emission
/// (ω̃ < 0). Both branches collapse to 1/|expm1(βω̃)|, which stays accurate
/// down to |βω̃| ~ 1e−300 (the small-argument series 1/(βω̃) ∓ 1/2 emerges
/// from expm1 automatically).
pub fn bose_factor(omega_tilde: f64, beta: f64) -> f64 {
    debug_assert!(omega_tilde != 0.0, "bose_factor: frequency must be nonzero");
    1.0 / (beta * omega_tilde).exp_m1().abs()
}

/// ω̃·N(ω̃), the energy-weighted Bose factor. Finite as ω̃ → 0 with one-sided
/// limits ±1/β; at ω̃ = 0 exactly the caller supplies the side.
pub(crate) fn energy_weighted_bose(omega_tilde: f64, beta: f64) -> f64 {
    omega_tilde / (beta * omega_tilde).exp_m1().abs()
}

/// Fourier components V^{(±1)} of the coupling in the Floquet frame:
/// V^{(±1)} = (γ/2)((δ/Ω)S_x + (F/Ω)S_z ± iS_y), tridiagonal.
pub fn fourier_coupling(
    s: SpinQuantumNumber,
    p: DriveParams,
    gamma: f64,
) -> Result<(CMat, CMat), floquet::FloquetError> {
    let omega_r = floquet::rabi_frequency(p);
    if omega_r == 0.0 {
        return Err(floquet::FloquetError::ZeroRabiFrequency);
    }
    let delta = p.detuning();
    // √(Ω² − δ²) = F for F ≥ 0
    let ops = spin_algebra::spin_operators(s);
    let dim = s.dim();
    let build = |sign: f64| -> CMat {
        let mut v: CMat = Array2::zeros((dim, dim));
        v.zip_mut_with(&ops.sx, |acc, x| *acc += (delta / omega_r) * x);
        v.zip_mut_with(&ops.sz, |acc, x| *acc += (p.f / omega_r) * x);
        v.zip_mut_with(&ops.sy, |acc, x| *acc += C64::new(0.0, sign) * x);
        v.mapv_inplace(|x| 0.5 * gamma * x);
        v
    };
    Ok((build(1.0), build(-1.0)))
}

/// Pseudotransition frequency ω_{mn}^{(ℓ)} = (m − n)Ω + ℓω between Floquet
/// states labeled by magnetic numbers; only |m − n| ≤ 1 carries any rate.
/// `m_row` and `n_col` are values of 2m and 2n (so half-integers stay exact).
pub fn transition_frequency(
    two_m: i32,
    two_n: i32,
    ell: i32,
    d: &FloquetDecomposition,
) -> Result<f64, RateError> {
    assert!(ell == 1 || ell == -1, "transition_frequency: ell must be ±1");
    let dm = two_m - two_n;
    if dm.abs() > 2 {
        return Err(RateError::NotAdjacent {
            m: two_m,
            n: two_n,
        });
    }
    Ok(f64::from(dm) / 2.0 * d.omega_r + f64::from(ell) * d.params.omega)
}

/// Partial and total golden-rule rates, dimensionless (units of Γ₀).
#[derive(Debug, Clone)]
pub struct RateMatrix {
    pub s: SpinQuantumNumber,
    /// Γ^{(+1)}, including the diagonal pseudotransition rates.
    pub gamma_plus: RMat,
    /// Γ^{(−1)}, including the diagonal pseudotransition rates.
    pub gamma_minus: RMat,
    /// Γ = Γ^{(+1)} + Γ^{(−1)}.
    pub gamma_total: RMat,
    /// Master-equation generator Γ̃ (zero column sums).
    pub generator: RMat,
}

/// Assemble the dimensionless rate matrix for spin s.
///
/// Off-diagonal entries follow the closed forms of the applicable regime
/// (both reduce to weight·coupling²·N(ω̃)); diagonal entries are the
/// pseudotransition rates at ±ω. Fails on the ω = Ω boundary, where
/// individual rates diverge although all observables stay finite.
pub fn rate_matrix(
    s: SpinQuantumNumber,
    p: DriveParams,
    b: BathParams,
) -> Result<RateMatrix, RateError> {
    let omega_r = floquet::rabi_frequency(p);
    let gap = (p.omega - omega_r).abs();
    if gap < BOUNDARY_REL_TOL * p.omega {
        return Err(RateError::Boundary {
            gap,
            tol: BOUNDARY_REL_TOL * p.omega,
        });
    }
    let dim = s.dim();
    let delta = p.detuning();
    let beta = b.beta;
    let cas = s.casimir();
    // couplings: ((Ω ± δ)/Ω)²/16 on the secondary diagonals
    let a_plus = (omega_r + delta) / omega_r;
    let a_minus = (omega_r - delta) / omega_r;

    let mut gp: RMat = Array2::zeros((dim, dim));
    let mut gm: RMat = Array2::zeros((dim, dim));

    for i in 0..dim {
        let m = s.m(i);
        // diagonal pseudotransitions at ±ω: (2m)²F²/(16 Ω²)·N(±ω)
        let w_diag = (2.0 * m).powi(2) * p.f * p.f / (16.0 * omega_r * omega_r);
        gp[[i, i]] = w_diag * bose_factor(p.omega, beta);
        gm[[i, i]] = w_diag * bose_factor(-p.omega, beta);
    }
    for i in 0..dim - 1 {
        // link between m (index i+1) and m+1 (index i)
        let m_low = s.m(i + 1);
        let weight = (cas - m_low * (m_low + 1.0)) / 16.0;
        // upward m → m+1 at frequency Ω ± ω: entry (row i, col i+1)
        gp[[i, i + 1]] = weight * a_plus * a_plus * bose_factor(omega_r + p.omega, beta);
        gm[[i, i + 1]] = weight * a_minus * a_minus * bose_factor(omega_r - p.omega, beta);
        // downward m+1 → m at frequency −Ω ± ω: entry (row i+1, col i)
        gp[[i + 1, i]] = weight * a_minus * a_minus * bose_factor(-omega_r + p.omega, beta);
        gm[[i + 1, i]] = weight * a_plus * a_plus * bose_factor(-omega_r - p.omega, beta);
    }

    let gamma_total = &gp + &gm;
    let generator = generator_from_total(&gamma_total);
    Ok(RateMatrix {
        s,
        gamma_plus: gp,
        gamma_minus: gm,
        gamma_total,
        generator,
    })
}

/// Γ̃_{mn} = Γ_{mn} − δ_{mn} Σ_k Γ_{kn}. The diagonal of Γ cancels in the
/// master equation, so the generator diagonal is the negated compensated sum
/// of the off-diagonal column entries, making every column sum vanish
/// identically.
pub fn generator_from_total(gamma: &RMat) -> RMat {
    let n = gamma.nrows();
    let mut gen = gamma.clone();
    for j in 0..n {
        let col_off = linalg::kahan_sum((0..n).filter(|&i| i != j).map(|i| gamma[[i, j]]));
        gen[[j, j]] = -col_off;
    }
    gen
}

/// Stationary probability vector of a tridiagonal generator, by the
/// detailed-balance ratio recursion p_{i+1}/p_i = Γ̃_{i+1,i}/Γ̃_{i,i+1},
/// renormalizing along the way so extreme ratios cannot overflow.
pub fn steady_state(gen: &RMat) -> Result<Array1<f64>, RateError> {
    let n = gen.nrows();
    let mut p = vec![0.0f64; n];
    p[0] = 1.0;
    let mut running_max = 1.0f64;
    for i in 0..n - 1 {
        let up = gen[[i + 1, i]];
        let down = gen[[i, i + 1]];
        if !(up > 0.0) || !(down > 0.0) {
            return Err(RateError::ReducibleGenerator {
                lower: i,
                upper: i + 1,
            });
        }
        p[i + 1] = p[i] * (up / down);
        running_max = running_max.max(p[i + 1]);
        if running_max > 1e250 {
            for v in p.iter_mut().take(i + 2) {
                *v /= running_max;
            }
            running_max = 1.0;
        }
    }
    let total = linalg::kahan_sum(p.iter().copied());
    Ok(Array1::from_iter(p.into_iter().map(|v| v / total)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bose_factor_values() {
        // βω̃ = ln 2 → 1
        assert!((bose_factor(2.0f64.ln(), 1.0) - 1.0).abs() < 1e-14);
        // spontaneous-emission floor: ω̃ < 0, |βω̃| → ∞ → 1
        assert!((bose_factor(-80.0, 10.0) - 1.0).abs() < 1e-14);
        // β = 1, ω̃ = −1 → 1/(1 − e^{−1})
        assert!((bose_factor(-1.0, 1.0) - 1.5819767068693265).abs() < 1e-14);
        // tiny argument follows 1/(βω̃) − 1/2 without cancellation
        let x = 1e-13;
        assert!((bose_factor(x, 1.0) - (1.0 / x - 0.5)).abs() / (1.0 / x) < 1e-12);
        assert!((bose_factor(-x, 1.0) - (1.0 / x + 0.5)).abs() / (1.0 / x) < 1e-12);
        // always positive
        for w in [-3.0, -0.1, 0.1, 3.0] {
            assert!(bose_factor(w, 0.7) > 0.0);
        }
    }

    #[test]
    fn generator_toy_and_column_sums() {
        // 2×2 toy rates ((0, a), (b, 0)) → Γ̃ = ((−b, a), (b, −a))
        let g = ndarray::arr2(&[[0.0, 0.3], [0.8, 0.0]]);
        let gen = generator_from_total(&g);
        assert_eq!(gen[[0, 0]], -0.8);
        assert_eq!(gen[[0, 1]], 0.3);
        assert_eq!(gen[[1, 0]], 0.8);
        assert_eq!(gen[[1, 1]], -0.3);

        let s = SpinQuantumNumber::new(7).unwrap();
        let p = DriveParams::new(1.0, 0.63, 1.7).unwrap();
        let b = BathParams::new(0.9, 1.0, 1.0).unwrap();
        let rm = rate_matrix(s, p, b).unwrap();
        for j in 0..s.dim() {
            let sum: f64 = (0..s.dim()).map(|i| rm.generator[[i, j]]).sum();
            assert!(sum.abs() < 1e-15 * rm.generator[[j, j]].abs().max(1.0));
        }
    }

    #[test]
    fn symmetric_two_level_steady_state() {
        let gen = generator_from_total(&ndarray::arr2(&[[0.0, 0.4], [0.4, 0.0]]));
        let p = steady_state(&gen).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-15);
        assert!((p[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn boundary_is_rejected() {
        // ω = ω_c puts ω = Ω exactly
        let omega0 = 1.0;
        let f = 0.8;
        let omega_c = (f * f + omega0 * omega0) / (2.0 * omega0);
        let p = DriveParams::new(omega0, omega_c, f).unwrap();
        let b = BathParams::new(1.0, 1.0, 1.0).unwrap();
        assert!(matches!(
            rate_matrix(SpinQuantumNumber::new(2).unwrap(), p, b),
            Err(RateError::Boundary { .. })
        ));
    }

    #[test]
    fn transition_frequency_table() {
        let s = SpinQuantumNumber::new(2).unwrap();
        let p = DriveParams::new(1.0, 0.7, 0.5).unwrap();
        let d = floquet::decompose(s, p).unwrap();
        let omega_r = d.omega_r;
        // m = n, ℓ = +1 → +ω
        assert!((transition_frequency(2, 2, 1, &d).unwrap() - p.omega).abs() < 1e-15);
        // m = n+1, ℓ = −1 → Ω − ω
        assert!((transition_frequency(2, 0, -1, &d).unwrap() - (omega_r - p.omega)).abs() < 1e-15);
        // m = n−1, ℓ = +1 → −Ω + ω
        assert!((transition_frequency(0, 2, 1, &d).unwrap() - (-omega_r + p.omega)).abs() < 1e-15);
        assert!(transition_frequency(4, 0, 1, &d).is_err());
    }

    #[test]
    fn zero_temperature_kills_absorption() {
        // β → ∞ in the low-frequency regime: Γ^{(+1)}_{m+1,m} → 0
        let s = SpinQuantumNumber::new(2).unwrap();
        let p = DriveParams::new(1.0, 0.2, 0.5).unwrap();
        let b = BathParams::new(400.0, 1.0, 1.0).unwrap();
        let rm = rate_matrix(s, p, b).unwrap();
        assert!(rm.gamma_plus[[0, 1]] == 0.0 || rm.gamma_plus[[0, 1]] < 1e-300);
    }
}
