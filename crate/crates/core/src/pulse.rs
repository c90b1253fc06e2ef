//! Conditional-displacement pulses on the joint spin⊗boson space, pulse
//! sequence composition, the four-pulse commutator loop, and verification
//! that composed sequences factor into spin-only unitaries.
//!
//! The commutator loop plays two conditional displacements along the X and
//! P quadratures against their inverses. Because [X, P] is central, the
//! displacements cancel exactly and only a spin-dependent phase survives:
//! with both weights equal to Jz the loop composes to exp(−iθ Jz²)⊗I,
//! θ = κx·κp, for any vibrational state.

use num_complex::Complex64;

use crate::boson::{displacement_unchecked, FockMode};
use crate::error::{Error, Result};
use crate::linalg::{
    distance_up_to_global_phase, tensor_product, ComplexMatrix, StateVector,
};
use crate::spin::{carrier_rotation, Axis, Representation, SpinRegister, Targets};

/// Diagonal spin operator multiplying the displacement generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinWeight {
    /// Collective Jz; available in both representations.
    CollectiveJz,
    /// σz of one ion; needs the full product representation.
    SingleIon(usize),
}

impl SpinWeight {
    /// Weight eigenvalue on each spin basis state.
    pub fn eigenvalues(&self, register: &SpinRegister) -> Result<Vec<f64>> {
        match self {
            SpinWeight::CollectiveJz => match register.representation() {
                Representation::Symmetric => {
                    Ok((0..register.dim()).map(|k| register.m_value(k)).collect())
                }
                Representation::Full => Ok((0..register.dim())
                    .map(|code| code.count_ones() as f64 - register.j())
                    .collect()),
            },
            SpinWeight::SingleIon(ion) => {
                if register.representation() != Representation::Full {
                    return Err(Error::Representation(
                        "single-ion weights need the full product representation".into(),
                    ));
                }
                if *ion >= register.n_ions() {
                    return Err(Error::IonIndex { ion: *ion, n_ions: register.n_ions() });
                }
                let mask = 1usize << ion;
                Ok((0..register.dim())
                    .map(|code| if code & mask != 0 { 0.5 } else { -0.5 })
                    .collect())
            }
        }
    }
}

/// One pulse: either a conditional displacement of the mode or a carrier
/// rotation of the spins alone.
#[derive(Debug, Clone)]
pub enum Pulse {
    ConditionalDisplacement { beta: Complex64, weight: SpinWeight },
    Carrier { axis: Axis, angle: f64, targets: Targets },
}

/// Pulses applied left to right in time: the first listed acts first.
#[derive(Debug, Clone)]
pub struct PulseSequence {
    pulses: Vec<Pulse>,
}

impl PulseSequence {
    pub fn new(pulses: Vec<Pulse>) -> Result<Self> {
        if pulses.is_empty() {
            return Err(Error::Parameter("pulse sequence must be nonempty".into()));
        }
        Ok(Self { pulses })
    }

    pub fn pulses(&self) -> &[Pulse] {
        &self.pulses
    }

    pub fn len(&self) -> usize {
        self.pulses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pulses.is_empty()
    }

    /// Concatenation: `self` runs first, then `other`.
    pub fn then(&self, other: &PulseSequence) -> PulseSequence {
        let mut pulses = self.pulses.clone();
        pulses.extend(other.pulses.iter().cloned());
        PulseSequence { pulses }
    }
}

/// Joint unitary exp((β a† − β* a) ⊗ W), assembled block by block: the
/// boson block for a spin basis state with weight eigenvalue m is the plain
/// displacement D(βm). The exponential of the full joint generator is never
/// formed.
pub fn conditional_displacement_unitary(
    register: &SpinRegister,
    mode: &FockMode,
    beta: Complex64,
    weight: SpinWeight,
) -> Result<ComplexMatrix> {
    let eigenvalues = weight.eigenvalues(register)?;
    let max_abs = eigenvalues.iter().fold(0.0_f64, |acc, m| acc.max(m.abs()));
    if beta.norm() * max_abs > mode.excursion_limit() {
        return Err(Error::Truncation(format!(
            "conditional displacement excursion |β|·max|m| = {:.6} exceeds {:.6} at cutoff {}",
            beta.norm() * max_abs,
            mode.excursion_limit(),
            mode.cutoff()
        )));
    }
    let spin_dim = register.dim();
    let boson_dim = mode.dim();
    let mut out = ComplexMatrix::zeros(spin_dim * boson_dim, spin_dim * boson_dim);
    // Distinct eigenvalues repeat heavily in the full representation; cache
    // one displacement per value.
    let mut cache: Vec<(f64, ComplexMatrix)> = Vec::new();
    for (s, &m) in eigenvalues.iter().enumerate() {
        let block = match cache.iter().find(|(v, _)| *v == m) {
            Some((_, b)) => b.clone(),
            None => {
                let b = displacement_unchecked(mode, beta * m);
                cache.push((m, b.clone()));
                b
            }
        };
        for n in 0..boson_dim {
            for np in 0..boson_dim {
                out[(s * boson_dim + n, s * boson_dim + np)] = block[(n, np)];
            }
        }
    }
    Ok(out)
}

fn pulse_joint(register: &SpinRegister, mode: &FockMode, pulse: &Pulse) -> Result<ComplexMatrix> {
    match pulse {
        Pulse::ConditionalDisplacement { beta, weight } => {
            conditional_displacement_unitary(register, mode, *beta, *weight)
        }
        Pulse::Carrier { axis, angle, targets } => {
            let spin = carrier_rotation(register, *axis, *angle, targets)?;
            tensor_product(&spin, &ComplexMatrix::identity(mode.dim()))
        }
    }
}

/// Ordered product U = U_k···U_2·U_1 of the sequence (p_1,…,p_k).
pub fn compose(register: &SpinRegister, mode: &FockMode, seq: &PulseSequence) -> Result<ComplexMatrix> {
    let mut acc: Option<ComplexMatrix> = None;
    for pulse in seq.pulses() {
        let joint = pulse_joint(register, mode, pulse)?;
        acc = Some(match acc {
            None => joint,
            Some(prev) => joint.mul(&prev)?,
        });
    }
    Ok(acc.expect("sequence is nonempty"))
}

/// Which four-pulse ordering to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LoopOrdering {
    /// Closed commutator loop: the final conditional displacement is
    /// negated, every displacement cancels, and a pure spin phase remains.
    #[default]
    Closed,
    /// Unclosed variant that keeps the final pulse sign positive. A net
    /// conditional displacement of the mode survives, so the sequence does
    /// not factor into a spin-only unitary; kept as a diagnostic.
    Unclosed,
}

/// Four-pulse commutator loop. In time order the pulses are the X-quadrature
/// displacement at +κx, the P-quadrature displacement at +κp, then their
/// inverses. The quadrature couplings fix the displacement amplitudes as
/// β = iκ/√2 for X pulses and β = κ/√2 for P pulses.
pub fn loop_sequence(
    kappa_x: f64,
    kappa_p: f64,
    weight_a: SpinWeight,
    weight_b: SpinWeight,
) -> Result<PulseSequence> {
    loop_sequence_with(LoopOrdering::Closed, kappa_x, kappa_p, weight_a, weight_b)
}

/// Commutator loop with an explicit ordering choice.
pub fn loop_sequence_with(
    ordering: LoopOrdering,
    kappa_x: f64,
    kappa_p: f64,
    weight_a: SpinWeight,
    weight_b: SpinWeight,
) -> Result<PulseSequence> {
    if !kappa_x.is_finite() || !kappa_p.is_finite() {
        return Err(Error::Parameter("loop strengths must be finite".into()));
    }
    let sqrt2 = 2.0_f64.sqrt();
    let beta_x = Complex64::new(0.0, kappa_x / sqrt2);
    let beta_p = Complex64::new(kappa_p / sqrt2, 0.0);
    let last_sign = match ordering {
        LoopOrdering::Closed => -1.0,
        LoopOrdering::Unclosed => 1.0,
    };
    PulseSequence::new(vec![
        Pulse::ConditionalDisplacement { beta: beta_x, weight: weight_a },
        Pulse::ConditionalDisplacement { beta: beta_p, weight: weight_b },
        Pulse::ConditionalDisplacement { beta: -beta_x, weight: weight_a },
        Pulse::ConditionalDisplacement { beta: last_sign * beta_p, weight: weight_b },
    ])
}

/// Fraction of the Fock ladder whose blocks are trusted by
/// [`factor_vibration`]: the bottom third. Composed displacement sequences
/// contaminate blocks well below the cutoff (reflected amplitude reaches
/// roughly a dozen levels down at unit excursions), so trusting anything
/// close to the top produces spurious residuals.
pub fn trusted_levels(boson_dim: usize) -> usize {
    (boson_dim / 3).max(2)
}

/// Split a joint unitary into its vacuum-block spin factor and a residual
/// certifying how far it is from (spin unitary)⊗(mode identity).
///
/// The residual is the largest phase-aligned deviation of the trusted
/// diagonal boson blocks from the vacuum block, combined with the largest
/// off-diagonal boson-block entry over the same range. Top Fock blocks are
/// truncation-contaminated and excluded; see [`trusted_levels`].
pub fn factor_vibration(
    joint: &ComplexMatrix,
    spin_dim: usize,
    boson_dim: usize,
) -> Result<(ComplexMatrix, f64)> {
    if spin_dim * boson_dim != joint.rows() || !joint.is_square() {
        return Err(Error::Dimension(format!(
            "joint dimension {} does not factor as {spin_dim}×{boson_dim}",
            joint.rows()
        )));
    }
    let boson_block = |n: usize, np: usize| -> ComplexMatrix {
        let mut block = ComplexMatrix::zeros(spin_dim, spin_dim);
        for s in 0..spin_dim {
            for sp in 0..spin_dim {
                block[(s, sp)] = joint[(s * boson_dim + n, sp * boson_dim + np)];
            }
        }
        block
    };
    let spin_factor = boson_block(0, 0);
    let trusted = trusted_levels(boson_dim);
    let mut residual = 0.0_f64;
    for n in 0..trusted {
        for np in 0..trusted {
            if n == np {
                let d = distance_up_to_global_phase(&boson_block(n, np), &spin_factor)?;
                residual = residual.max(d);
            } else {
                residual = residual.max(boson_block(n, np).max_entry_norm());
            }
        }
    }
    Ok((spin_factor, residual))
}

/// Report produced by [`verify_nonlinear_top`].
#[derive(Debug, Clone)]
pub struct NonlinearTopReport {
    pub n_ions: usize,
    pub kappa_x: f64,
    pub kappa_p: f64,
    pub cutoff: usize,
    /// Twist strength κx·κp the loop should generate.
    pub theta: f64,
    /// Vibrational factorization residual.
    pub residual: f64,
    /// |arg(⟨m|U_spin|m⟩) + θm² − φ| per m, after aligning the global phase.
    pub spin_phase_errors: Vec<f64>,
    /// Largest off-diagonal entry of the extracted spin factor.
    pub offdiagonal_max: f64,
}

impl NonlinearTopReport {
    pub fn max_phase_error(&self) -> f64 {
        self.spin_phase_errors.iter().copied().fold(0.0, f64::max)
    }
}

/// Build the commutator loop with collective Jz weights in the symmetric
/// representation, compose it on the joint space, factor out the mode, and
/// compare the spin factor against the one-axis twist exp(−iθJz²).
pub fn verify_nonlinear_top(
    n_ions: usize,
    kappa_x: f64,
    kappa_p: f64,
    cutoff: usize,
    ordering: LoopOrdering,
) -> Result<NonlinearTopReport> {
    let register = SpinRegister::symmetric(n_ions)?;
    let mode = FockMode::new(cutoff)?;
    let seq = loop_sequence_with(ordering, kappa_x, kappa_p, SpinWeight::CollectiveJz, SpinWeight::CollectiveJz)?;
    let joint = compose(&register, &mode, &seq)?;
    let (spin_factor, residual) = factor_vibration(&joint, register.dim(), mode.dim())?;

    let theta = kappa_x * kappa_p;
    // Global phase from the trace against the twist target.
    let mut trace_overlap = Complex64::new(0.0, 0.0);
    for k in 0..register.dim() {
        let m = register.m_value(k);
        trace_overlap += spin_factor[(k, k)] * Complex64::from_polar(1.0, theta * m * m);
    }
    let global = if trace_overlap.norm() > 0.0 {
        trace_overlap / trace_overlap.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let mut spin_phase_errors = Vec::with_capacity(register.dim());
    for k in 0..register.dim() {
        let m = register.m_value(k);
        let aligned = spin_factor[(k, k)] * Complex64::from_polar(1.0, theta * m * m) / global;
        spin_phase_errors.push(aligned.arg().abs());
    }
    let mut offdiagonal_max = 0.0_f64;
    for s in 0..register.dim() {
        for sp in 0..register.dim() {
            if s != sp {
                offdiagonal_max = offdiagonal_max.max(spin_factor[(s, sp)].norm());
            }
        }
    }
    Ok(NonlinearTopReport {
        n_ions,
        kappa_x,
        kappa_p,
        cutoff,
        theta,
        residual,
        spin_phase_errors,
        offdiagonal_max,
    })
}

/// Evolve a product state (spin ⊗ mode) through a composed sequence and
/// project the mode back onto its initial state, returning the reduced spin
/// amplitudes. For a vibration-independent sequence these amplitudes do not
/// depend on the mode preparation.
pub fn reduced_spin_action(
    register: &SpinRegister,
    mode: &FockMode,
    seq: &PulseSequence,
    spin_in: &StateVector,
    mode_in: &StateVector,
) -> Result<StateVector> {
    if spin_in.dim() != register.dim() || mode_in.dim() != mode.dim() {
        return Err(Error::Dimension("joint state factors have wrong dimensions".into()));
    }
    let joint_op = compose(register, mode, seq)?;
    let joint_state = spin_in.tensor(mode_in);
    let evolved = joint_op.apply(&joint_state)?;
    let boson_dim = mode.dim();
    let mut reduced = StateVector::zeros(register.dim());
    for s in 0..register.dim() {
        let mut amp = Complex64::new(0.0, 0.0);
        for n in 0..boson_dim {
            amp += mode_in[n].conj() * evolved[s * boson_dim + n];
        }
        reduced[s] = amp;
    }
    Ok(reduced)
}
