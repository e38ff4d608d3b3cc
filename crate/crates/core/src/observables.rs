//! Local observable families and their unitary parameterization.
//!
//! On the qubit side `A_i = U σ_i U†`; on the qudit side `B_j = V λ_j V†`
//! for `j = 1, …, d+1`, where `λ_j = |0⟩⟨0| − |j⟩⟨j|` for `j < d`,
//! `λ_d = |0⟩⟨1| + |1⟩⟨0|` and `λ_{d+1} = i|0⟩⟨1| − i|1⟩⟨0|`.
//!
//! Unitaries are parameterized as `exp(iH)` with `H` Hermitian. For a
//! `dim × dim` generator the parameter vector has `dim²` entries: the
//! `dim` diagonal entries first, then `(re, im)` of `H[i][j]` for `i < j`
//! in row-major order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{expi_hermitian, hermitian_eigs, inner, ComplexMatrix, C64, I, ONE, ZERO};

pub fn pauli(i: usize) -> Result<ComplexMatrix> {
    let m = match i {
        1 => ComplexMatrix::from_rows(&[vec![ZERO, ONE], vec![ONE, ZERO]]),
        2 => ComplexMatrix::from_rows(&[vec![ZERO, I], vec![-I, ZERO]]),
        3 => ComplexMatrix::from_rows(&[vec![ONE, ZERO], vec![ZERO, -ONE]]),
        _ => return Err(Error::IndexOutOfRange { index: i, range: "1..=3".into() }),
    };
    Ok(m)
}

/// `λ_j` on `H_d`, `1 ≤ j ≤ d+1`.
pub fn lambda_gen(d: usize, j: usize) -> Result<ComplexMatrix> {
    if d < 2 {
        return Err(Error::ParameterOutOfRange(format!("d = {d} < 2")));
    }
    if j == 0 || j > d + 1 {
        return Err(Error::IndexOutOfRange { index: j, range: format!("1..={}", d + 1) });
    }
    let mut m = ComplexMatrix::zeros(d, d);
    if j < d {
        m[(0, 0)] = ONE;
        m[(j, j)] = -ONE;
    } else if j == d {
        m[(0, 1)] = ONE;
        m[(1, 0)] = ONE;
    } else {
        m[(0, 1)] = I;
        m[(1, 0)] = -I;
    }
    Ok(m)
}

pub fn hermitian_from_params(theta: &[f64], dim: usize) -> Result<ComplexMatrix> {
    if theta.len() != dim * dim {
        return Err(Error::WrongParameterCount { expected: dim * dim, got: theta.len() });
    }
    let mut h = ComplexMatrix::zeros(dim, dim);
    for (k, &x) in theta[..dim].iter().enumerate() {
        h[(k, k)] = C64::new(x, 0.0);
    }
    let mut pos = dim;
    for i in 0..dim {
        for j in i + 1..dim {
            let z = C64::new(theta[pos], theta[pos + 1]);
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
            pos += 2;
        }
    }
    Ok(h)
}

pub fn params_from_hermitian(h: &ComplexMatrix) -> Vec<f64> {
    let dim = h.rows();
    let mut theta: Vec<f64> = (0..dim).map(|k| h[(k, k)].re).collect();
    for i in 0..dim {
        for j in i + 1..dim {
            let z = (h[(i, j)] + h[(j, i)].conj()) * 0.5;
            theta.push(z.re);
            theta.push(z.im);
        }
    }
    theta
}

/// `exp(iH(θ))`.
pub fn unitary_from_params(theta: &[f64], dim: usize) -> Result<ComplexMatrix> {
    expi_hermitian(&hermitian_from_params(theta, dim)?)
}

/// Parameters `θ` with `exp(iH(θ)) = U`, using the principal logarithm.
///
/// `U` is normal, so it shares eigenvectors with the Hermitian matrix
/// `(U + U†)/2 + κ (U − U†)/(2i)`; phases are read off as `arg(w† U w)`.
pub fn params_from_unitary(u: &ComplexMatrix) -> Result<Vec<f64>> {
    let dim = u.rows();
    let dev = u.unitarity_deviation();
    if dev > 1e-9 {
        return Err(Error::Invalid(format!("matrix is not unitary (deviation {dev:.3e})")));
    }
    let ud = u.dagger();
    let re_part = (u + &ud).scale_real(0.5);
    let im_part = (u - &ud).scale(C64::new(0.0, -0.5));
    for kappa in [0.577_2, 1.618_0, -0.293_7, 2.413_9] {
        let k = &re_part + &im_part.scale_real(kappa);
        let k = (&k + &k.dagger()).scale_real(0.5);
        let eig = hermitian_eigs(&k)?;
        let mut gen = ComplexMatrix::zeros(dim, dim);
        for c in 0..dim {
            let w = eig.vector(c);
            let uw = u.mat_vec(&w)?;
            let phase = inner(&w, &uw).arg();
            gen = &gen + &ComplexMatrix::projector(&w).scale_real(phase);
        }
        let gen = (&gen + &gen.dagger()).scale_real(0.5);
        let theta = params_from_hermitian(&gen);
        if unitary_from_params(&theta, dim)?.max_abs_diff(u) < 1e-9 {
            return Ok(theta);
        }
    }
    Err(Error::Invalid("could not take the logarithm of the unitary".into()))
}

/// Sign convention of the qubit observable triple.
///
/// `Positive` uses `σ_3` as printed. `Negative` replaces `σ_3` by `−σ_3` on
/// both sides (`A_3` and `B_1`), which flips `−i A_1 A_2 A_3`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    #[default]
    Positive,
    Negative,
}

/// A qubit unitary `U` and a qudit unitary `V` with their generator
/// parameters (length `4 + d²`). `u` and `v` are always exactly the image of
/// `params` under [`unitary_from_params`].
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryPair {
    d: usize,
    u: ComplexMatrix,
    v: ComplexMatrix,
    params: Vec<f64>,
}

impl UnitaryPair {
    pub fn param_len(d: usize) -> usize {
        4 + d * d
    }

    pub fn from_params(params: &[f64], d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::ParameterOutOfRange(format!("d = {d} < 2")));
        }
        if params.len() != Self::param_len(d) {
            return Err(Error::WrongParameterCount { expected: Self::param_len(d), got: params.len() });
        }
        let u = unitary_from_params(&params[..4], 2)?;
        let v = unitary_from_params(&params[4..], d)?;
        Ok(Self { d, u, v, params: params.to_vec() })
    }

    /// Takes the logarithm of both unitaries and regenerates them from the
    /// resulting parameters.
    pub fn from_unitaries(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<Self> {
        if u.rows() != 2 || !u.is_square() {
            return Err(Error::DimensionMismatch(format!("U must be 2x2, got {}x{}", u.rows(), u.cols())));
        }
        if !v.is_square() || v.rows() < 2 {
            return Err(Error::DimensionMismatch(format!("V must be dxd with d >= 2, got {}x{}", v.rows(), v.cols())));
        }
        let mut params = params_from_unitary(u)?;
        params.extend(params_from_unitary(v)?);
        Self::from_params(&params, v.rows())
    }

    pub fn identity(d: usize) -> Self {
        Self::from_params(&vec![0.0; Self::param_len(d)], d).expect("d >= 2")
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn u(&self) -> &ComplexMatrix {
        &self.u
    }

    pub fn v(&self) -> &ComplexMatrix {
        &self.v
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn observables(&self) -> ObservableSet {
        build_observables(self, Orientation::Positive)
    }
}

/// `A_1, A_2, A_3` and `B_1, …, B_{d+1}` for one unitary pair.
#[derive(Debug, Clone)]
pub struct ObservableSet {
    pub d: usize,
    pub a: [ComplexMatrix; 3],
    pub b: Vec<ComplexMatrix>,
    pub orientation: Orientation,
}

impl ObservableSet {
    /// `A_i`, 1-based.
    pub fn a(&self, i: usize) -> &ComplexMatrix {
        &self.a[i - 1]
    }

    /// `B_j`, 1-based.
    pub fn b(&self, j: usize) -> &ComplexMatrix {
        &self.b[j - 1]
    }

    /// `−i A_1 A_2 A_3`, a multiple of the identity.
    pub fn orientation_operator(&self) -> ComplexMatrix {
        (&(&self.a[0] * &self.a[1]) * &self.a[2]).scale(-I)
    }
}

pub fn build_observables(pair: &UnitaryPair, orientation: Orientation) -> ObservableSet {
    let d = pair.d;
    let sign = match orientation {
        Orientation::Positive => 1.0,
        Orientation::Negative => -1.0,
    };
    let a = [1, 2, 3].map(|i| {
        let s = pauli(i).expect("valid index");
        let s = if i == 3 { s.scale_real(sign) } else { s };
        s.conjugate_by(&pair.u)
    });
    let b = (1..=d + 1)
        .map(|j| {
            let l = lambda_gen(d, j).expect("valid index");
            let l = if j == 1 { l.scale_real(sign) } else { l };
            l.conjugate_by(&pair.v)
        })
        .collect();
    ObservableSet { d, a, b, orientation }
}
