//! Analytic Floquet decomposition of the circularly polarized Rabi problem
//! for arbitrary spin, plus a numerical monodromy cross-check.
//!
//! The propagator factorizes as Ψ(t) = P(t)·exp(−iGt) with quasienergies
//! ε_m = mΩ for integer s and ε_m = ω/2 + mΩ for half-integer s, where
//! Ω = √(δ² + F²) is the Rabi frequency and δ = ω₀ − ω the detuning. The
//! periodic part is assembled from z-rotations and a fixed y-rotation by the
//! mixing angle λ.

use crate::linalg::{self, CMat};
use crate::ode;
use crate::spin_algebra::{self, SpinQuantumNumber};
use ndarray::Array2;
use num_complex::Complex64 as C64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FloquetError {
    #[error("drive parameters must satisfy omega0 > 0, omega > 0, f >= 0")]
    InvalidParams,
    #[error("mixing angle undefined: Rabi frequency vanishes (f = 0, omega = omega0)")]
    ZeroRabiFrequency,
    #[error("monodromy tolerance must lie in (1e-14, 1e-4), got {tol:.3e}")]
    BadTolerance { tol: f64 },
    #[error("monodromy integration: {0}")]
    Integration(#[from] ode::OdeError),
    #[error("monodromy propagator drifted from unitarity: defect {defect:.3e} > {limit:.3e}")]
    NonUnitaryDrift { defect: f64, limit: f64 },
}

/// Static splitting ω₀, drive frequency ω, and drive amplitude F, all as
/// angular frequencies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveParams {
    pub omega0: f64,
    pub omega: f64,
    pub f: f64,
}

impl DriveParams {
    pub fn new(omega0: f64, omega: f64, f: f64) -> Result<Self, FloquetError> {
        if !(omega0 > 0.0 && omega > 0.0 && f >= 0.0)
            || !omega0.is_finite()
            || !omega.is_finite()
            || !f.is_finite()
        {
            return Err(FloquetError::InvalidParams);
        }
        Ok(Self { omega0, omega, f })
    }

    /// Detuning δ = ω₀ − ω.
    pub fn detuning(self) -> f64 {
        self.omega0 - self.omega
    }

    /// Drive period T = 2π/ω.
    pub fn period(self) -> f64 {
        2.0 * std::f64::consts::PI / self.omega
    }

    /// For blue detuning (ω > ω₀) the F → 0 labeling of Floquet states is
    /// reversed with respect to the S_z eigenstates. The formulas stay
    /// verbatim; this flag only aids interpretation.
    pub fn labels_reversed(self) -> bool {
        self.omega > self.omega0
    }
}

/// Rabi frequency Ω = √((ω₀ − ω)² + F²).
pub fn rabi_frequency(p: DriveParams) -> f64 {
    p.detuning().hypot(p.f)
}

/// Mixing angle λ ∈ [0, π] with λ/2 = arccos √((Ω + δ)/(2Ω)).
///
/// Fails when Ω = 0 (possible only for F = 0, ω = ω₀), where no limit is
/// singled out.
pub fn mixing_angle(p: DriveParams) -> Result<f64, FloquetError> {
    let omega_r = rabi_frequency(p);
    if omega_r == 0.0 {
        return Err(FloquetError::ZeroRabiFrequency);
    }
    let arg = ((omega_r + p.detuning()) / (2.0 * omega_r)).clamp(0.0, 1.0);
    Ok(2.0 * arg.sqrt().acos())
}

/// The analytic Floquet data for spin s in the drive `p`.
#[derive(Debug, Clone)]
pub struct FloquetDecomposition {
    pub s: SpinQuantumNumber,
    pub params: DriveParams,
    /// δ = ω₀ − ω.
    pub delta: f64,
    /// Rabi frequency Ω.
    pub omega_r: f64,
    /// Mixing angle λ.
    pub lambda: f64,
    /// Canonical quasienergy representatives ε_m, indexed like the basis
    /// (m = s first).
    pub quasienergies: Vec<f64>,
    /// Floquet matrix G = Ω S_z (+ ω/2 for half-integer s), diagonal.
    pub g_matrix: CMat,
}

/// Analytic Floquet decomposition; fails only at Ω = 0.
pub fn decompose(s: SpinQuantumNumber, p: DriveParams) -> Result<FloquetDecomposition, FloquetError> {
    let omega_r = rabi_frequency(p);
    let lambda = mixing_angle(p)?;
    let shift = if s.is_half_integer() { 0.5 * p.omega } else { 0.0 };
    let quasienergies: Vec<f64> = (0..s.dim()).map(|i| shift + s.m(i) * omega_r).collect();
    let dim = s.dim();
    let g_matrix = Array2::from_shape_fn((dim, dim), |(i, j)| {
        if i == j {
            C64::new(quasienergies[i], 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    Ok(FloquetDecomposition {
        s,
        params: p,
        delta: p.detuning(),
        omega_r,
        lambda,
        quasienergies,
        g_matrix,
    })
}

/// The T-periodic part P(t) of the Floquet decomposition.
///
/// P(t) = exp(−iωt S_z)·exp(−iλ S_y) for integer s, with an extra scalar
/// factor e^{iωt/2} for half-integer s to restore T-periodicity.
pub fn periodic_part(d: &FloquetDecomposition, t: f64) -> CMat {
    let xi = spin_algebra::rotation_y(d.s, d.lambda);
    let zphase = spin_algebra::exp_z(d.s, C64::new(0.0, -d.params.omega * t));
    let mut p = zphase.dot(&xi);
    if d.s.is_half_integer() {
        let scalar = C64::from_polar(1.0, 0.5 * d.params.omega * t);
        p.mapv_inplace(|v| v * scalar);
    }
    p
}

/// H(t) = ω₀ S_z + F (S_x cos ωt + S_y sin ωt).
pub fn hamiltonian(s: SpinQuantumNumber, p: DriveParams, t: f64) -> CMat {
    let ops = spin_algebra::spin_operators(s);
    let (c, sn) = ((p.omega * t).cos(), (p.omega * t).sin());
    let mut h: CMat = Array2::zeros((s.dim(), s.dim()));
    h.zip_mut_with(&ops.sz, |acc, v| *acc += p.omega0 * v);
    h.zip_mut_with(&ops.sx, |acc, v| *acc += p.f * c * v);
    h.zip_mut_with(&ops.sy, |acc, v| *acc += p.f * sn * v);
    h
}

/// Quasienergies from one-period integration of the Schrödinger equation.
///
/// Integrates iΨ' = H(t)Ψ over one period with local error ≤ `tol`, extracts
/// the eigenphases of the monodromy matrix Ψ(T), folds them into [0, ω), and
/// matches each to the analytic ladder by eigenvector overlap with the
/// analytic Floquet functions at t = 0. Returns the matched quasienergy
/// representatives (same indexing as [`FloquetDecomposition::quasienergies`],
/// each defined mod ω) together with the monodromy matrix itself.
pub fn monodromy_oracle(
    s: SpinQuantumNumber,
    p: DriveParams,
    tol: f64,
) -> Result<(Vec<f64>, CMat), FloquetError> {
    if !(tol > 1e-14 && tol < 1e-4) {
        return Err(FloquetError::BadTolerance { tol });
    }
    let dim = s.dim();
    let period = p.period();
    let rhs = |t: f64, psi: &CMat| -> CMat {
        let h = hamiltonian(s, p, t);
        let mut out = h.dot(psi);
        out.mapv_inplace(|v| C64::new(0.0, -1.0) * v);
        out
    };
    let monodromy = ode::integrate_adaptive(rhs, 0.0, period, linalg::identity(dim), tol)?;

    let defect = linalg::unitarity_defect(&monodromy);
    let limit = 100.0 * tol;
    if defect > limit {
        return Err(FloquetError::NonUnitaryDrift { defect, limit });
    }

    let (phases, vectors) = unitary_eigenphases(&monodromy);
    // Ψ(T) = exp(−iGT): eigenvalue e^{−iεT}, so ε = −phase/T folded to [0, ω)
    let eps_folded: Vec<f64> = phases
        .iter()
        .map(|ph| (-ph / period).rem_euclid(p.omega))
        .collect();

    // match by overlap with the analytic Floquet functions u_m(0)
    let d = decompose(s, p)?;
    let u0 = periodic_part(&d, 0.0);
    let mut matched = vec![0.0f64; dim];
    let mut used = vec![false; dim];
    for m_idx in 0..dim {
        let mut best = usize::MAX;
        let mut best_ov = -1.0;
        for j in 0..dim {
            if used[j] {
                continue;
            }
            let mut ov = C64::new(0.0, 0.0);
            for i in 0..dim {
                ov += vectors[[i, j]].conj() * u0[[i, m_idx]];
            }
            let ov = ov.norm();
            if ov > best_ov {
                best_ov = ov;
                best = j;
            }
        }
        used[best] = true;
        matched[m_idx] = eps_folded[best];
    }
    Ok((matched, monodromy))
}

/// Eigenphases and eigenvectors of a unitary (hence normal) matrix.
///
/// Diagonalizes the Hermitian part; degenerate clusters are refined with the
/// anti-Hermitian part so that ± phase pairs with equal cosines separate.
fn unitary_eigenphases(u: &CMat) -> (Vec<f64>, CMat) {
    let n = u.nrows();
    let ud = linalg::adjoint(u);
    let cos_part = Array2::from_shape_fn((n, n), |(i, j)| 0.5 * (u[[i, j]] + ud[[i, j]]));
    let sin_part = Array2::from_shape_fn((n, n), |(i, j)| {
        C64::new(0.0, -0.5) * (u[[i, j]] - ud[[i, j]])
    });
    let (cos_eig, mut v) = linalg::hermitian_eigen(&cos_part);

    // refine clusters of nearly equal cosine with the sine part
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (cos_eig[end] - cos_eig[start]).abs() < 1e-8 {
            end += 1;
        }
        let k = end - start;
        if k > 1 {
            let block = Array2::from_shape_fn((k, k), |(a, b)| {
                let mut acc = C64::new(0.0, 0.0);
                for i in 0..n {
                    for j in 0..n {
                        acc += v[[i, start + a]].conj() * sin_part[[i, j]] * v[[j, start + b]];
                    }
                }
                acc
            });
            let (_, w) = linalg::hermitian_eigen(&block);
            let old: Vec<Vec<C64>> = (0..k)
                .map(|b| (0..n).map(|i| v[[i, start + b]]).collect())
                .collect();
            for a in 0..k {
                for i in 0..n {
                    let mut acc = C64::new(0.0, 0.0);
                    for (b, col) in old.iter().enumerate() {
                        acc += col[i] * w[[b, a]];
                    }
                    v[[i, start + a]] = acc;
                }
            }
        }
        start = end;
    }

    // phase of each eigenvector from the Rayleigh quotient v†Uv = e^{iφ}
    let phases: Vec<f64> = (0..n)
        .map(|j| {
            let mut q = C64::new(0.0, 0.0);
            for i in 0..n {
                let mut row = C64::new(0.0, 0.0);
                for l in 0..n {
                    row += u[[i, l]] * v[[l, j]];
                }
                q += v[[i, j]].conj() * row;
            }
            q.im.atan2(q.re)
        })
        .collect();
    (phases, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq(two_s: u32) -> SpinQuantumNumber {
        SpinQuantumNumber::new(two_s).unwrap()
    }

    #[test]
    fn rabi_frequency_cases() {
        let p = DriveParams::new(1.0, 1.0, 0.5).unwrap();
        assert_eq!(rabi_frequency(p), 0.5);
        let p = DriveParams::new(1.0, 0.7, 0.0).unwrap();
        assert!((rabi_frequency(p) - 0.3).abs() < 1e-15);
        let p = DriveParams::new(1.0, 1e-12, 0.4).unwrap();
        assert!((rabi_frequency(p) - (1.0f64 + 0.16).sqrt()).abs() < 1e-9);
    }

    #[test]
    fn mixing_angle_cases() {
        // δ = Ω (F = 0, red detuning): λ = 0
        let p = DriveParams::new(1.0, 0.4, 0.0).unwrap();
        assert!(mixing_angle(p).unwrap().abs() < 1e-12);
        // δ = 0: λ = π/2
        let p = DriveParams::new(1.0, 1.0, 0.3).unwrap();
        assert!((mixing_angle(p).unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        // δ = −Ω (F = 0, blue): λ = π
        let p = DriveParams::new(1.0, 1.7, 0.0).unwrap();
        assert!((mixing_angle(p).unwrap() - std::f64::consts::PI).abs() < 1e-12);
        // Ω = 0 rejected
        let p = DriveParams::new(1.0, 1.0, 0.0).unwrap();
        assert!(matches!(
            mixing_angle(p),
            Err(FloquetError::ZeroRabiFrequency)
        ));
    }

    #[test]
    fn quasienergy_ladders() {
        // s = 1/2: ε± = (ω ± Ω)/2
        let p = DriveParams::new(1.0, 0.8, 0.3).unwrap();
        let d = decompose(sq(1), p).unwrap();
        let omega_r = rabi_frequency(p);
        assert!((d.quasienergies[0] - 0.5 * (p.omega + omega_r)).abs() < 1e-15);
        assert!((d.quasienergies[1] - 0.5 * (p.omega - omega_r)).abs() < 1e-15);
        // sum rule ε₊ + ε₋ = 0 mod ω
        let total = d.quasienergies[0] + d.quasienergies[1];
        assert!((total.rem_euclid(p.omega)).min(p.omega - total.rem_euclid(p.omega)) < 1e-14);

        // s = 1, Ω = 0.3, ω = 2 → (0.3, 0, −0.3)
        let p = DriveParams::new(2.3, 2.0, 0.0).unwrap();
        let d = decompose(sq(2), p).unwrap();
        let want = [0.3, 0.0, -0.3];
        for (got, want) in d.quasienergies.iter().zip(want) {
            assert!((got - want).abs() < 1e-14);
        }

        // s = 3/2, Ω = 0.3, ω = 2 → (1.45, 1.15, 0.85, 0.55)
        let d = decompose(sq(3), p).unwrap();
        let want = [1.45, 1.15, 0.85, 0.55];
        for (got, want) in d.quasienergies.iter().zip(want) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn hamiltonian_cases() {
        let s = sq(2);
        let ops = spin_algebra::spin_operators(s);
        // F = 0 → ω₀ S_z
        let p = DriveParams::new(1.3, 0.9, 0.0).unwrap();
        let h = hamiltonian(s, p, 0.37);
        let want = ops.sz.mapv(|v| 1.3 * v);
        assert!(linalg::max_abs_diff(&h, &want) < 1e-15);
        // t = 0 → ω₀ S_z + F S_x; t = T/4 → ω₀ S_z + F S_y
        let p = DriveParams::new(1.3, 0.9, 0.4).unwrap();
        let h0 = hamiltonian(s, p, 0.0);
        let want0 = &ops.sz.mapv(|v| 1.3 * v) + &ops.sx.mapv(|v| 0.4 * v);
        assert!(linalg::max_abs_diff(&h0, &want0) < 1e-15);
        let hq = hamiltonian(s, p, 0.25 * p.period());
        let wantq = &ops.sz.mapv(|v| 1.3 * v) + &ops.sy.mapv(|v| 0.4 * v);
        assert!(linalg::max_abs_diff(&hq, &wantq) < 1e-13);
        // Hermitian, traceless
        assert!(linalg::max_abs_diff(&h0, &linalg::adjoint(&h0)) < 1e-15);
        let trace: C64 = (0..s.dim()).map(|i| h0[[i, i]]).sum();
        assert!(trace.norm() < 1e-15);
    }
}
