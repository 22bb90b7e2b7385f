//! Spin-s operator matrices, rotations, and the SU(2) → SU(2s+1) lift.
//!
//! The basis is |m⟩ with m = s, s−1, …, −s, so row/column index `i` carries
//! the magnetic quantum number `m = s − i`. Half-integer spins are tracked
//! through the integer `2s`, which keeps spin comparisons exact.

use crate::linalg::{self, CMat};
use ndarray::Array2;
use num_complex::Complex64 as C64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpinError {
    #[error("spin quantum number must satisfy 2s >= 1, got 2s = {two_s}")]
    InvalidSpin { two_s: u32 },
}

/// Spin quantum number, stored as the integer 2s.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpinQuantumNumber {
    two_s: u32,
}

impl SpinQuantumNumber {
    pub fn new(two_s: u32) -> Result<Self, SpinError> {
        if two_s == 0 {
            return Err(SpinError::InvalidSpin { two_s });
        }
        Ok(Self { two_s })
    }

    /// 2s as an integer.
    pub fn two_s(self) -> u32 {
        self.two_s
    }

    /// s as a float (exact: halves are representable).
    pub fn s(self) -> f64 {
        f64::from(self.two_s) / 2.0
    }

    /// Hilbert-space dimension 2s + 1.
    pub fn dim(self) -> usize {
        self.two_s as usize + 1
    }

    /// True for half-integer s.
    pub fn is_half_integer(self) -> bool {
        self.two_s % 2 == 1
    }

    /// Magnetic quantum number of basis index `i`: m = s − i.
    pub fn m(self, i: usize) -> f64 {
        self.s() - i as f64
    }

    /// s(s+1), the Casimir eigenvalue.
    pub fn casimir(self) -> f64 {
        self.s() * (self.s() + 1.0)
    }
}

impl std::fmt::Display for SpinQuantumNumber {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_half_integer() {
            write!(f, "{}/2", self.two_s)
        } else {
            write!(f, "{}", self.two_s / 2)
        }
    }
}

impl std::str::FromStr for SpinQuantumNumber {
    type Err = String;

    /// Accepts "2", "1/2", "3/2", "0.5", "1.5", ...
    fn from_str(text: &str) -> Result<Self, String> {
        let text = text.trim();
        let two_s = if let Some((num, den)) = text.split_once('/') {
            let den: u32 = den
                .trim()
                .parse()
                .map_err(|_| format!("bad spin denominator in '{text}'"))?;
            if den != 2 {
                return Err(format!("spin fractions must have denominator 2: '{text}'"));
            }
            num.trim()
                .parse::<u32>()
                .map_err(|_| format!("bad spin numerator in '{text}'"))?
        } else {
            let value: f64 = text.parse().map_err(|_| format!("bad spin '{text}'"))?;
            let doubled = 2.0 * value;
            if doubled <= 0.0 || doubled.fract() != 0.0 || doubled > u32::MAX as f64 {
                return Err(format!("spin must be a positive multiple of 1/2: '{text}'"));
            }
            doubled as u32
        };
        SpinQuantumNumber::new(two_s).map_err(|e| e.to_string())
    }
}

/// The (2s+1)-dimensional spin matrices.
#[derive(Debug, Clone)]
pub struct SpinOperators {
    pub sx: CMat,
    pub sy: CMat,
    pub sz: CMat,
    pub splus: CMat,
    pub sminus: CMat,
}

/// Build S_x, S_y, S_z and the ladder operators for spin s.
///
/// Matrix elements follow the standard convention
/// (S_x)_{m,n} = ½ √(s(s+1) − n(n±1)) for m = n ± 1, with S_z diagonal.
pub fn spin_operators(s: SpinQuantumNumber) -> SpinOperators {
    let dim = s.dim();
    let cas = s.casimir();
    let mut sx: CMat = Array2::zeros((dim, dim));
    let mut sy: CMat = Array2::zeros((dim, dim));
    let mut sz: CMat = Array2::zeros((dim, dim));
    let mut splus: CMat = Array2::zeros((dim, dim));
    let mut sminus: CMat = Array2::zeros((dim, dim));

    for i in 0..dim {
        sz[[i, i]] = C64::new(s.m(i), 0.0);
    }
    // link between m and m+1 couples indices i+1 (value m) and i (value m+1)
    for i in 0..dim - 1 {
        let m_low = s.m(i + 1); // the smaller m of the pair
        let amp = (cas - m_low * (m_low + 1.0)).sqrt();
        // (S_+)_{m+1, m} = amp: row i, column i+1
        splus[[i, i + 1]] = C64::new(amp, 0.0);
        sminus[[i + 1, i]] = C64::new(amp, 0.0);
        sx[[i, i + 1]] = C64::new(0.5 * amp, 0.0);
        sx[[i + 1, i]] = C64::new(0.5 * amp, 0.0);
        sy[[i, i + 1]] = C64::new(0.0, -0.5 * amp);
        sy[[i + 1, i]] = C64::new(0.0, 0.5 * amp);
    }

    SpinOperators {
        sx,
        sy,
        sz,
        splus,
        sminus,
    }
}

/// exp(−i·angle·S_y), the spin-s rotation about the y axis.
///
/// Evaluated through the eigendecomposition of S_y; the generic
/// scaling-and-squaring exponential serves as the independent cross-check in
/// the test suite.
pub fn rotation_y(s: SpinQuantumNumber, angle: f64) -> CMat {
    assert!(angle.is_finite(), "rotation_y: angle must be finite");
    let ops = spin_operators(s);
    linalg::exp_i_hermitian(&ops.sy, angle)
}

/// Diagonal matrix exp(c·S_z) = diag(exp(c·m)) for complex c.
pub fn exp_z(s: SpinQuantumNumber, c: C64) -> CMat {
    let dim = s.dim();
    Array2::from_shape_fn((dim, dim), |(i, j)| {
        if i == j {
            (c * s.m(i)).exp()
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// A rotation generator: angle about a (normalized) axis.
#[derive(Debug, Clone, Copy)]
pub struct SpinRotation {
    pub axis: [f64; 3],
    pub angle: f64,
}

impl SpinRotation {
    pub fn new(axis: [f64; 3], angle: f64) -> Self {
        let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        assert!(norm > 0.0, "SpinRotation: axis must be nonzero");
        Self {
            axis: [axis[0] / norm, axis[1] / norm, axis[2] / norm],
            angle,
        }
    }

    /// The spin-1/2 element exp(−i·angle·(n̂·σ)/2) in closed form.
    fn as_su2(self) -> CMat {
        let half = 0.5 * self.angle;
        let (c, s) = (half.cos(), half.sin());
        let [nx, ny, nz] = self.axis;
        ndarray::arr2(&[
            [
                C64::new(c, -s * nz),
                C64::new(-s * ny, -s * nx),
            ],
            [
                C64::new(s * ny, -s * nx),
                C64::new(c, s * nz),
            ],
        ])
    }

    /// exp(−i·angle·(n̂·S)) at spin s.
    fn lift(self, s: SpinQuantumNumber) -> CMat {
        let ops = spin_operators(s);
        let [nx, ny, nz] = self.axis;
        let mut h: CMat = Array2::zeros((s.dim(), s.dim()));
        h.zip_mut_with(&ops.sx, |acc, v| *acc += nx * v);
        h.zip_mut_with(&ops.sy, |acc, v| *acc += ny * v);
        h.zip_mut_with(&ops.sz, |acc, v| *acc += nz * v);
        linalg::exp_i_hermitian(&h, self.angle)
    }
}

/// Extract (axis, angle) generator data from a 2×2 special-unitary matrix.
fn su2_to_rotation(u: &CMat) -> SpinRotation {
    // u = cos(θ/2)·1 − i sin(θ/2)(n̂·σ)
    let a = 0.5 * (u[[0, 0]].re + u[[1, 1]].re);
    let bx = -0.5 * (u[[0, 1]].im + u[[1, 0]].im);
    let by = 0.5 * (u[[1, 0]].re - u[[0, 1]].re);
    let bz = -0.5 * (u[[0, 0]].im - u[[1, 1]].im);
    let b = (bx * bx + by * by + bz * bz).sqrt();
    if b < 1e-300 {
        return SpinRotation {
            axis: [0.0, 0.0, 1.0],
            angle: if a >= 0.0 { 0.0 } else { 2.0 * std::f64::consts::PI },
        };
    }
    SpinRotation {
        axis: [bx / b, by / b, bz / b],
        angle: 2.0 * b.atan2(a),
    }
}

/// Outcome of a representation-property check.
#[derive(Debug, Clone, Copy)]
pub struct LiftProductCheck {
    pub holds: bool,
    pub max_deviation: f64,
}

/// Check that lifting commutes with taking products: the spin-s lift of the
/// product of the given SU(2) factors must equal the product of the
/// individually lifted factors.
pub fn lift_product_check(
    s: SpinQuantumNumber,
    factors: &[SpinRotation],
    tol: f64,
) -> LiftProductCheck {
    assert!(!factors.is_empty(), "lift_product_check: need at least one factor");
    // product in SU(2), closed form
    let mut prod2 = linalg::identity(2);
    for f in factors {
        prod2 = prod2.dot(&f.as_su2());
    }
    let lifted_product = su2_to_rotation(&prod2).lift(s);

    // product of the lifts
    let mut prod_lifts = linalg::identity(s.dim());
    for f in factors {
        prod_lifts = prod_lifts.dot(&f.lift(s));
    }

    // a global phase cannot arise here: both routes exponentiate traceless
    // generators, and the extracted angle stays in [0, 2π), so the 2π
    // ambiguity of half-integer lifts is resolved by comparing directly
    let max_deviation = linalg::max_abs_diff(&lifted_product, &prod_lifts);
    LiftProductCheck {
        holds: max_deviation <= tol,
        max_deviation,
    }
}
