//! Dense complex vectors and matrices, the matrix exponential, tensor
//! products, and the phase-invariant distance used for gate comparisons.
//!
//! Index convention used throughout the crate: in any tensor product the
//! spin factor is the slow (leftmost) index and the boson factor is the
//! fast index, so a joint basis state is `|s⟩⊗|n⟩ ↦ s * boson_dim + n`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Hard cap on matrix dimension, guards against runaway memory.
pub const MAX_DIM: usize = 5000;

/// Taylor order for the scaled exponential kernel; with the scaled norm
/// held at or below 0.5 the truncation error sits under 1e-18.
const EXP_TAYLOR_ORDER: usize = 18;

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be at least 1");
        Self { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Diagonal matrix from complex entries.
    pub fn diagonal(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "entry count {} does not match {rows}x{cols}",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        let n = rhs.cols;
        for i in 0..self.rows {
            let orow = &mut out.data[i * n..(i + 1) * n];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let brow = &rhs.data[k * n..(k + 1) * n];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        if self.cols != v.dim() {
            return Err(Error::Dimension(format!(
                "cannot apply {}x{} to vector of dim {}",
                self.rows,
                self.cols,
                v.dim()
            )));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        for (i, o) in out.iter_mut().enumerate() {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            *o = row.iter().zip(v.amplitudes()).map(|(a, b)| a * b).sum();
        }
        Ok(StateVector::new(out))
    }

    pub fn scale(&self, z: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * z).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Dimension("matrix addition shape mismatch".into()));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Dimension("matrix subtraction shape mismatch".into()));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        })
    }

    /// Largest entry modulus.
    pub fn max_entry_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entry modulus of `self - rhs`; panics on shape mismatch.
    pub fn max_entry_distance(&self, rhs: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Max-entry norm of `U†U − I`.
    pub fn unitarity_defect(&self) -> f64 {
        debug_assert!(self.is_square());
        let prod = self.adjoint().mul(self).expect("square");
        let mut worst = 0.0_f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let target = if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
                worst = worst.max((prod[(i, j)] - target).norm());
            }
        }
        worst
    }

    /// Unitary check at the tolerance used across the crate.
    pub fn is_unitary(&self, tol: f64) -> bool {
        self.is_square() && self.unitarity_defect() <= tol
    }

    /// Max row sum of entry moduli (the induced infinity norm).
    pub fn inf_norm(&self) -> f64 {
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .map(|z| z.norm())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Dense complex vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    data: Vec<Complex64>,
}

impl StateVector {
    pub fn new(data: Vec<Complex64>) -> Self {
        assert!(!data.is_empty(), "state vector must have dimension at least 1");
        Self { data }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(vec![Complex64::new(0.0, 0.0); dim])
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim);
        let mut v = Self::zeros(dim);
        v.data[index] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.data
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            for z in &mut self.data {
                *z /= n;
            }
        }
    }

    /// Inner product `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim(), other.dim());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Kronecker product `|self⟩⊗|other⟩`, self slow.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.data {
            for b in &other.data {
                out.push(a * b);
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, z: Complex64) -> Self {
        Self::new(self.data.iter().map(|a| a * z).collect())
    }
}

impl std::ops::Index<usize> for StateVector {
    type Output = Complex64;

    #[inline]
    fn index(&self, i: usize) -> &Complex64 {
        &self.data[i]
    }
}

impl std::ops::IndexMut<usize> for StateVector {
    #[inline]
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.data[i]
    }
}

/// Matrix exponential by scaling and squaring around a Taylor kernel.
///
/// The input is halved until its infinity norm is at most 0.5, the kernel is
/// summed by Horner's rule, and the result is squared back up. Anti-Hermitian
/// input yields a unitary result up to rounding.
pub fn matrix_exponential(g: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !g.is_square() {
        return Err(Error::Dimension(format!(
            "matrix exponential needs a square input, got {}x{}",
            g.rows(),
            g.cols()
        )));
    }
    if g.rows() > MAX_DIM {
        return Err(Error::Dimension(format!(
            "matrix exponential dimension {} exceeds the guard {MAX_DIM}",
            g.rows()
        )));
    }
    if !g.is_finite() {
        return Err(Error::NonFinite("matrix exponential input"));
    }
    let dim = g.rows();
    let norm = g.inf_norm();
    if norm == 0.0 {
        return Ok(ComplexMatrix::identity(dim));
    }
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = g.scale(Complex64::new(0.5_f64.powi(squarings as i32), 0.0));

    // Horner evaluation of the truncated series.
    let identity = ComplexMatrix::identity(dim);
    let mut acc = identity.clone();
    for k in (1..=EXP_TAYLOR_ORDER).rev() {
        let t = scaled.mul(&acc)?.scale(Complex64::new(1.0 / k as f64, 0.0));
        acc = identity.add(&t)?;
    }
    for _ in 0..squarings {
        acc = acc.mul(&acc)?;
    }
    Ok(acc)
}

/// Kronecker product with `a` as the slow (leftmost) factor:
/// `(A⊗B)[(i*rB + k), (j*cB + l)] = A[i,j] * B[k,l]`.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let rows = a
        .rows()
        .checked_mul(b.rows())
        .ok_or_else(|| Error::Dimension("tensor product row count overflow".into()))?;
    let cols = a
        .cols()
        .checked_mul(b.cols())
        .ok_or_else(|| Error::Dimension("tensor product column count overflow".into()))?;
    if rows.checked_mul(cols).map_or(true, |n| n > (1 << 24)) {
        return Err(Error::Dimension(format!(
            "tensor product size {rows}x{cols} exceeds the entry guard"
        )));
    }
    let mut out = ComplexMatrix::zeros(rows, cols);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let aij = a[(i, j)];
            if aij.re == 0.0 && aij.im == 0.0 {
                continue;
            }
            for k in 0..b.rows() {
                for l in 0..b.cols() {
                    out[(i * b.rows() + k, j * b.cols() + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    Ok(out)
}

/// Frobenius distance between `u` and `v` minimized over a global phase;
/// zero exactly when `u = e^{iφ} v`.
///
/// Algebraically this is `sqrt(2d - 2|tr(U†V)|)` for unitary inputs, but that
/// form loses all precision once the distance approaches the square root of
/// machine epsilon. The optimal phase is taken from the trace and the
/// difference is accumulated entry by entry instead, which keeps distances
/// near 1e-15 resolvable.
pub fn distance_up_to_global_phase(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<f64> {
    if !u.is_square() || !v.is_square() || u.rows() != v.rows() {
        return Err(Error::Dimension(format!(
            "phase-invariant distance needs equal square dimensions, got {}x{} and {}x{}",
            u.rows(),
            u.cols(),
            v.rows(),
            v.cols()
        )));
    }
    let t: Complex64 = u
        .data()
        .iter()
        .zip(v.data())
        .map(|(a, b)| a.conj() * b)
        .sum();
    let phase = if t.norm() > 0.0 {
        t.conj() / t.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let sum: f64 = u
        .data()
        .iter()
        .zip(v.data())
        .map(|(a, b)| (a - phase * b).norm_sqr())
        .sum();
    Ok(sum.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn exponential_of_zero_is_identity() {
        let z = ComplexMatrix::zeros(4, 4);
        let e = matrix_exponential(&z).unwrap();
        assert_eq!(e.max_entry_distance(&ComplexMatrix::identity(4)), 0.0);
    }

    #[test]
    fn exponential_of_planar_rotation_generator() {
        // G = [[0, -θ], [θ, 0]] with θ = π/2 rotates by a quarter turn.
        let theta = FRAC_PI_2;
        let g = ComplexMatrix::from_vec(
            2,
            2,
            vec![c(0.0, 0.0), c(-theta, 0.0), c(theta, 0.0), c(0.0, 0.0)],
        )
        .unwrap();
        let e = matrix_exponential(&g).unwrap();
        let expected = ComplexMatrix::from_vec(
            2,
            2,
            vec![c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        )
        .unwrap();
        assert!(e.max_entry_distance(&expected) < 1e-14);
    }

    #[test]
    fn exponential_rejects_non_square() {
        let g = ComplexMatrix::zeros(2, 3);
        assert!(matrix_exponential(&g).is_err());
    }

    #[test]
    fn exponential_rejects_non_finite() {
        let mut g = ComplexMatrix::zeros(2, 2);
        g[(0, 1)] = c(f64::NAN, 0.0);
        assert!(matrix_exponential(&g).is_err());
    }

    #[test]
    fn exponential_inverse_pair_cancels() {
        // exp(G) exp(-G) = I for anti-Hermitian G.
        let mut g = ComplexMatrix::zeros(6, 6);
        let mut seed = 0x243f6a8885a308d3_u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for i in 0..6 {
            for j in (i + 1)..6 {
                let z = c(next(), next());
                g[(i, j)] = z;
                g[(j, i)] = -z.conj();
            }
            g[(i, i)] = c(0.0, next());
        }
        let e = matrix_exponential(&g).unwrap();
        let einv = matrix_exponential(&g.scale(c(-1.0, 0.0))).unwrap();
        let prod = e.mul(&einv).unwrap();
        assert!(prod.max_entry_distance(&ComplexMatrix::identity(6)) < 1e-10);
        assert!(e.unitarity_defect() < 1e-10);
    }

    #[test]
    fn exponential_respects_block_structure() {
        // Block-diagonal input exponentiates block by block.
        let a = ComplexMatrix::from_vec(
            2,
            2,
            vec![c(0.0, 0.3), c(0.1, -0.2), c(-0.1, -0.2), c(0.0, -0.4)],
        )
        .unwrap();
        let b = ComplexMatrix::from_vec(2, 2, vec![c(0.0, -0.7), c(0.5, 0.0), c(-0.5, 0.0), c(0.0, 0.2)])
            .unwrap();
        let mut joint = ComplexMatrix::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                joint[(i, j)] = a[(i, j)];
                joint[(2 + i, 2 + j)] = b[(i, j)];
            }
        }
        let ea = matrix_exponential(&a).unwrap();
        let eb = matrix_exponential(&b).unwrap();
        let ejoint = matrix_exponential(&joint).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((ejoint[(i, j)] - ea[(i, j)]).norm() < 1e-12);
                assert!((ejoint[(2 + i, 2 + j)] - eb[(i, j)]).norm() < 1e-12);
                assert!(ejoint[(i, 2 + j)].norm() < 1e-14);
                assert!(ejoint[(2 + i, j)].norm() < 1e-14);
            }
        }
    }

    #[test]
    fn tensor_product_of_identities() {
        let i2 = ComplexMatrix::identity(2);
        let i3 = ComplexMatrix::identity(3);
        let t = tensor_product(&i2, &i3).unwrap();
        assert_eq!(t.max_entry_distance(&ComplexMatrix::identity(6)), 0.0);
    }

    #[test]
    fn tensor_product_with_scalar_identity() {
        let a = ComplexMatrix::from_vec(2, 2, vec![c(1.0, 2.0), c(0.0, -1.0), c(3.0, 0.0), c(0.5, 0.5)])
            .unwrap();
        let i1 = ComplexMatrix::identity(1);
        assert_eq!(tensor_product(&a, &i1).unwrap(), a);
        assert_eq!(tensor_product(&i1, &a).unwrap(), a);
    }

    #[test]
    fn tensor_product_of_diagonals() {
        let a = ComplexMatrix::diagonal(&[c(0.5, 0.0), c(-0.5, 0.0)]);
        let b = ComplexMatrix::diagonal(&[c(1.0, 0.0), c(2.0, 0.0)]);
        let t = tensor_product(&a, &b).unwrap();
        let expected = ComplexMatrix::diagonal(&[c(0.5, 0.0), c(1.0, 0.0), c(-0.5, 0.0), c(-1.0, 0.0)]);
        assert_eq!(t, expected);
    }

    #[test]
    fn tensor_product_associates_exactly() {
        let a = ComplexMatrix::from_vec(2, 2, vec![c(1.0, 1.0), c(2.0, 0.0), c(0.0, -1.0), c(1.5, 0.0)])
            .unwrap();
        let b = ComplexMatrix::from_vec(2, 2, vec![c(0.5, 0.0), c(0.0, 2.0), c(1.0, 0.0), c(-1.0, 1.0)])
            .unwrap();
        let d = ComplexMatrix::diagonal(&[c(1.0, 0.0), c(0.0, 1.0), c(-2.0, 0.0)]);
        let left = tensor_product(&tensor_product(&a, &b).unwrap(), &d).unwrap();
        let right = tensor_product(&a, &tensor_product(&b, &d).unwrap()).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn phase_distance_is_zero_on_phase_multiples() {
        let u = matrix_exponential(
            &ComplexMatrix::from_vec(2, 2, vec![c(0.0, 0.4), c(0.3, 0.0), c(-0.3, 0.0), c(0.0, -0.9)])
                .unwrap(),
        )
        .unwrap();
        assert!(distance_up_to_global_phase(&u, &u).unwrap() < 1e-14);
        let rotated = u.scale(Complex64::from_polar(1.0, FRAC_PI_4));
        assert!(distance_up_to_global_phase(&u, &rotated).unwrap() < 1e-14);
        assert!(distance_up_to_global_phase(&rotated, &u).unwrap() < 1e-14);
    }

    #[test]
    fn phase_distance_with_vanishing_trace_overlap() {
        let u = ComplexMatrix::identity(2);
        let v = ComplexMatrix::diagonal(&[c(1.0, 0.0), c(-1.0, 0.0)]);
        let d = distance_up_to_global_phase(&u, &v).unwrap();
        assert!((d - 2.0).abs() < 1e-14);
    }

    #[test]
    fn phase_distance_is_symmetric() {
        let u = matrix_exponential(
            &ComplexMatrix::from_vec(2, 2, vec![c(0.0, 0.1), c(0.7, 0.2), c(-0.7, 0.2), c(0.0, -0.5)])
                .unwrap(),
        )
        .unwrap();
        let v = matrix_exponential(
            &ComplexMatrix::from_vec(2, 2, vec![c(0.0, -0.3), c(0.2, 0.0), c(-0.2, 0.0), c(0.0, 0.8)])
                .unwrap(),
        )
        .unwrap();
        let duv = distance_up_to_global_phase(&u, &v).unwrap();
        let dvu = distance_up_to_global_phase(&v, &u).unwrap();
        assert!((duv - dvu).abs() < 1e-12);
    }

    #[test]
    fn phase_distance_rejects_mismatched_dims() {
        let u = ComplexMatrix::identity(2);
        let v = ComplexMatrix::identity(3);
        assert!(distance_up_to_global_phase(&u, &v).is_err());
    }

    #[test]
    fn apply_matches_mul() {
        let m = ComplexMatrix::from_vec(2, 2, vec![c(1.0, 0.0), c(0.0, 1.0), c(2.0, 0.0), c(0.0, -1.0)])
            .unwrap();
        let v = StateVector::new(vec![c(0.5, 0.0), c(0.0, 0.5)]);
        let got = m.apply(&v).unwrap();
        assert!((got[0] - c(0.0, 0.0)).norm() < 1e-15);
        assert!((got[1] - c(1.5, 0.0)).norm() < 1e-15);
    }
}
