//! Truncated Fock space for the shared vibrational mode: quadratures,
//! displacement operators, reference states, and truncation-leakage
//! accounting.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{matrix_exponential, ComplexMatrix, StateVector};

/// Vibrational mode truncated at Fock level `cutoff` (basis |0⟩..|cutoff⟩).
#[derive(Debug, Clone)]
pub struct FockMode {
    cutoff: usize,
    leakage_threshold: f64,
}

pub const DEFAULT_CUTOFF: usize = 32;
pub const DEFAULT_LEAKAGE_THRESHOLD: f64 = 1e-10;

/// Quadrature selector: X = (a + a†)/√2, P = −i(a − a†)/√2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrature {
    X,
    P,
}

/// Reference vibrational preparations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReferenceState {
    Ground,
    Fock(usize),
    Coherent(Complex64),
}

impl Default for FockMode {
    fn default() -> Self {
        Self::new(DEFAULT_CUTOFF).expect("default cutoff is valid")
    }
}

impl FockMode {
    pub fn new(cutoff: usize) -> Result<Self> {
        Self::with_leakage_threshold(cutoff, DEFAULT_LEAKAGE_THRESHOLD)
    }

    pub fn with_leakage_threshold(cutoff: usize, leakage_threshold: f64) -> Result<Self> {
        if cutoff < 4 {
            return Err(Error::Parameter(format!("cutoff {cutoff} is below the minimum of 4")));
        }
        if !(leakage_threshold > 0.0) {
            return Err(Error::Parameter("leakage threshold must be positive".into()));
        }
        Ok(Self { cutoff, leakage_threshold })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.cutoff + 1
    }

    pub fn leakage_threshold(&self) -> f64 {
        self.leakage_threshold
    }

    /// Largest displacement amplitude the truncation supports, √cutoff / 2.
    pub fn excursion_limit(&self) -> f64 {
        (self.cutoff as f64).sqrt() / 2.0
    }

    /// Annihilation operator in the truncated basis.
    pub fn annihilation(&self) -> ComplexMatrix {
        let d = self.dim();
        let mut a = ComplexMatrix::zeros(d, d);
        for n in 1..d {
            a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
        }
        a
    }

    /// Population of the top two Fock levels, the truncation-contamination
    /// indicator used across the crate.
    pub fn leakage(&self, state: &StateVector) -> f64 {
        let d = self.dim();
        debug_assert_eq!(state.dim(), d);
        state[d - 1].norm_sqr() + state[d - 2].norm_sqr()
    }
}

/// Truncated quadrature matrix; Hermitian by construction.
pub fn quadrature(mode: &FockMode, which: Quadrature) -> ComplexMatrix {
    let d = mode.dim();
    let mut m = ComplexMatrix::zeros(d, d);
    let inv_sqrt2 = 1.0 / 2.0_f64.sqrt();
    for n in 1..d {
        let elem = (n as f64).sqrt() * inv_sqrt2;
        match which {
            Quadrature::X => {
                m[(n - 1, n)] = Complex64::new(elem, 0.0);
                m[(n, n - 1)] = Complex64::new(elem, 0.0);
            }
            Quadrature::P => {
                m[(n - 1, n)] = Complex64::new(0.0, -elem);
                m[(n, n - 1)] = Complex64::new(0.0, elem);
            }
        }
    }
    m
}

/// Displacement operator `exp(β a† − β* a)` on the truncated space.
///
/// The truncated generator is exponentiated, so the result is exactly
/// unitary; truncation error is pushed into leakage instead.
pub fn displacement(mode: &FockMode, beta: Complex64) -> Result<ComplexMatrix> {
    if beta.norm() > mode.excursion_limit() {
        return Err(Error::Truncation(format!(
            "|β| = {:.6} exceeds the excursion limit {:.6} at cutoff {}; raise the cutoff",
            beta.norm(),
            mode.excursion_limit(),
            mode.cutoff()
        )));
    }
    Ok(displacement_unchecked(mode, beta))
}

/// Displacement without the excursion guard, for callers that have already
/// validated the per-block amplitude.
pub(crate) fn displacement_unchecked(mode: &FockMode, beta: Complex64) -> ComplexMatrix {
    let d = mode.dim();
    let mut gen = ComplexMatrix::zeros(d, d);
    for n in 1..d {
        let root = (n as f64).sqrt();
        // β a†: raises; −β* a: lowers.
        gen[(n, n - 1)] = beta * root;
        gen[(n - 1, n)] = -beta.conj() * root;
    }
    matrix_exponential(&gen).expect("square finite generator")
}

/// Normalized reference state of the mode; errors if guards or the leakage
/// threshold are violated.
pub fn reference_state(mode: &FockMode, kind: ReferenceState) -> Result<StateVector> {
    let d = mode.dim();
    let state = match kind {
        ReferenceState::Ground => StateVector::basis(d, 0),
        ReferenceState::Fock(n) => {
            if n + 2 > mode.cutoff() {
                return Err(Error::Truncation(format!(
                    "Fock level {n} sits in the contaminated band at cutoff {}",
                    mode.cutoff()
                )));
            }
            StateVector::basis(d, n)
        }
        ReferenceState::Coherent(alpha) => {
            let disp = displacement(mode, alpha)?;
            disp.apply(&StateVector::basis(d, 0))?
        }
    };
    let leak = mode.leakage(&state);
    if leak > mode.leakage_threshold() {
        return Err(Error::Truncation(format!(
            "reference state leakage {leak:.3e} exceeds the threshold {:.1e}",
            mode.leakage_threshold()
        )));
    }
    Ok(state)
}
