//! Applications built on the conditional-displacement toolkit: cat-state
//! generation, kicked-top Floquet dynamics, a readout-spin coupling with
//! projective measurement records, and the Ising / controlled-phase
//! two-qubit gates.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, StateVector};
use crate::pulse::{compose, factor_vibration, loop_sequence, SpinWeight};
use crate::boson::FockMode;
use crate::spin::{
    carrier_rotation, collective_operator, husimi_grid, Axis, HusimiGrid, Representation,
    SpinRegister, SpinState, Targets,
};

/// One-period parameters of the kicked top: twist strength κ and kick
/// angle p, acting on a spin of size j.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KickedTopParams {
    pub j: f64,
    pub kappa: f64,
    pub p: f64,
}

pub const DEFAULT_KAPPA: f64 = 3.0;
pub const DEFAULT_KICK: f64 = FRAC_PI_2;

impl KickedTopParams {
    pub fn new(j: f64, kappa: f64, p: f64) -> Result<Self> {
        let two_j = 2.0 * j;
        if two_j < 1.0 || (two_j - two_j.round()).abs() > 1e-12 {
            return Err(Error::Parameter(format!("j = {j} is not a half-integer at least 1/2")));
        }
        if two_j.round() as usize + 1 > crate::linalg::MAX_DIM {
            return Err(Error::Dimension(format!("2j+1 for j = {j} exceeds the dimension guard")));
        }
        if !kappa.is_finite() || !p.is_finite() {
            return Err(Error::Parameter("kicked-top parameters must be finite".into()));
        }
        Ok(Self { j, kappa, p })
    }

    /// j with the defaults κ = 3, p = π/2.
    pub fn with_defaults(j: f64) -> Result<Self> {
        Self::new(j, DEFAULT_KAPPA, DEFAULT_KICK)
    }

    pub fn dim(&self) -> usize {
        (2.0 * self.j).round() as usize + 1
    }

    pub fn register(&self) -> SpinRegister {
        SpinRegister::symmetric((2.0 * self.j).round() as usize).expect("validated in new")
    }
}

/// Outcome of the cat-state preparation.
#[derive(Debug, Clone)]
pub struct CatReport {
    pub n_ions: usize,
    /// Population on the x-basis state |j,−j⟩ₓ.
    pub population_minus: f64,
    /// Population on |j,+j⟩ₓ.
    pub population_plus: f64,
    /// Largest population on any other x-basis state.
    pub max_other: f64,
    /// arg(c₊/c₋) when both components are populated.
    pub relative_phase: Option<f64>,
    /// jπ + π/2 wrapped to (−π, π]: the two-component phase the twist
    /// produces on integer-j registers.
    pub expected_relative_phase: f64,
    /// Full x-basis populations, m ascending.
    pub x_populations: Vec<f64>,
}

fn wrap_angle(a: f64) -> f64 {
    let mut x = a % (2.0 * PI);
    if x > PI {
        x -= 2.0 * PI;
    }
    if x <= -PI {
        x += 2.0 * PI;
    }
    x
}

/// Prepare the collective ground state, rotate it onto the x axis, and
/// apply the one-axis twist exp(−i(π/2)Jz²).
///
/// For even N the result is an equal superposition of the two extremal
/// x-basis states. For odd N (half-integer j) the two-component structure
/// does not land on the ±x eigenstates; the report carries the full
/// population table instead of asserting it.
pub fn cat_state_protocol(n_ions: usize) -> Result<CatReport> {
    let register = SpinRegister::symmetric(n_ions)?;
    let dim = register.dim();
    let rotation = carrier_rotation(&register, Axis::Y, FRAC_PI_2, &Targets::All)?;
    let onto_x = rotation.apply(&StateVector::basis(dim, 0))?;
    // One-axis twist at θ = π/2; diagonal in the z basis.
    let mut twisted = onto_x.clone();
    for k in 0..dim {
        let m = register.m_value(k);
        twisted[k] *= Complex64::from_polar(1.0, -FRAC_PI_2 * m * m);
    }
    // x-basis amplitudes: |j,m⟩ₓ = R_y(π/2)|j,m⟩_z.
    let amps = rotation.adjoint().apply(&twisted)?;
    let x_populations: Vec<f64> = amps.amplitudes().iter().map(|z| z.norm_sqr()).collect();
    let population_minus = x_populations[0];
    let population_plus = x_populations[dim - 1];
    let max_other = x_populations[1..dim - 1].iter().copied().fold(0.0, f64::max);
    let relative_phase = if population_minus > 1e-12 && population_plus > 1e-12 {
        Some((amps[dim - 1] / amps[0]).arg())
    } else {
        None
    };
    let expected_relative_phase = wrap_angle(register.j() * PI + FRAC_PI_2);
    Ok(CatReport {
        n_ions,
        population_minus,
        population_plus,
        max_other,
        relative_phase,
        expected_relative_phase,
        x_populations,
    })
}

/// One-period propagator exp(−i(κ/2j)Jz²)·exp(−ipJy): the kick acts first,
/// then the nonlinear precession.
pub fn floquet_operator(params: &KickedTopParams) -> Result<ComplexMatrix> {
    let register = params.register();
    let kick = carrier_rotation(&register, Axis::Y, params.p, &Targets::All)?;
    let dim = register.dim();
    let scale = params.kappa / (2.0 * params.j);
    let mut out = kick;
    for k in 0..dim {
        let m = register.m_value(k);
        let phase = Complex64::from_polar(1.0, -scale * m * m);
        for col in 0..dim {
            out[(k, col)] *= phase;
        }
    }
    Ok(out)
}

/// Expectation record of one trajectory step.
#[derive(Debug, Clone, Copy)]
pub struct TrajectoryPoint {
    pub step: usize,
    /// ⟨Jx⟩/j
    pub jx: f64,
    /// ⟨Jy⟩/j
    pub jy: f64,
    /// ⟨Jz⟩/j
    pub jz: f64,
    pub norm: f64,
}

/// Husimi snapshot schedule for [`evolve_kicked_top`].
#[derive(Debug, Clone, Copy)]
pub struct HusimiSpec {
    pub every: usize,
    pub n_theta: usize,
    pub n_phi: usize,
}

/// Trajectory of per-step expectation values with optional Husimi
/// snapshots (step index, grid).
#[derive(Debug)]
pub struct Trajectory {
    pub points: Vec<TrajectoryPoint>,
    pub snapshots: Vec<(usize, HusimiGrid)>,
}

/// Repeated Floquet evolution; records step 0 through `steps`.
pub fn evolve_kicked_top(
    params: &KickedTopParams,
    initial: &SpinState,
    steps: usize,
    husimi: Option<HusimiSpec>,
) -> Result<Trajectory> {
    let register = params.register();
    if initial.register() != register {
        return Err(Error::Dimension(format!(
            "initial state register does not match j = {}",
            params.j
        )));
    }
    if let Some(spec) = husimi {
        if spec.every == 0 {
            return Err(Error::Parameter("Husimi snapshot interval must be positive".into()));
        }
    }
    let floquet = floquet_operator(params)?;
    let ops: Vec<ComplexMatrix> =
        [Axis::X, Axis::Y, Axis::Z].iter().map(|&a| collective_operator(&register, a)).collect();
    let j = params.j;

    let mut vector = initial.vector().clone();
    let mut points = Vec::with_capacity(steps + 1);
    let mut snapshots = Vec::new();
    for step in 0..=steps {
        if step > 0 {
            vector = floquet.apply(&vector)?;
        }
        let norm = vector.norm();
        let mut expect = [0.0; 3];
        for (slot, op) in ops.iter().enumerate() {
            expect[slot] = vector.inner(&op.apply(&vector)?).re / (norm * norm);
        }
        points.push(TrajectoryPoint {
            step,
            jx: expect[0] / j,
            jy: expect[1] / j,
            jz: expect[2] / j,
            norm,
        });
        if let Some(spec) = husimi {
            if step % spec.every == 0 {
                let mut snap_vec = vector.clone();
                snap_vec.normalize();
                let state = SpinState::new(register, snap_vec)?;
                snapshots.push((step, husimi_grid(&state, spec.n_theta, spec.n_phi)?));
            }
        }
    }
    Ok(Trajectory { points, snapshots })
}

fn system_mask(n_ions: usize, readout_ion: usize) -> usize {
    ((1usize << n_ions) - 1) & !(1usize << readout_ion)
}

fn system_weight(code: usize, mask: usize, n_system: usize) -> f64 {
    (code & mask).count_ones() as f64 - n_system as f64 / 2.0
}

/// Coupling exp(−iμ Jy σz^{(R)}) between a readout ion and the collective
/// y component of the remaining system ions.
///
/// Built the way the pulses realize it: the commutator loop leaves the
/// diagonal exp(−iμ σz^{(R)} Jz_sys), which a collective x rotation of the
/// system ions conjugates onto the y axis.
pub fn readout_coupling(
    register: &SpinRegister,
    readout_ion: usize,
    mu: f64,
) -> Result<ComplexMatrix> {
    if register.representation() != Representation::Full {
        return Err(Error::Representation("readout coupling needs the full representation".into()));
    }
    let n = register.n_ions();
    if n < 2 {
        return Err(Error::Parameter("readout coupling needs at least two ions".into()));
    }
    if readout_ion >= n {
        return Err(Error::IonIndex { ion: readout_ion, n_ions: n });
    }
    let system: Vec<usize> = (0..n).filter(|&i| i != readout_ion).collect();
    let mask = system_mask(n, readout_ion);
    let readout_mask = 1usize << readout_ion;
    let dim = register.dim();
    let mut diag = Vec::with_capacity(dim);
    for code in 0..dim {
        let w_r = if code & readout_mask != 0 { 0.5 } else { -0.5 };
        let w_sys = system_weight(code, mask, n - 1);
        diag.push(Complex64::from_polar(1.0, -mu * w_r * w_sys));
    }
    let middle = ComplexMatrix::diagonal(&diag);
    // V Jz_sys V† = Jy_sys with V = exp(+i(π/2)Jx_sys).
    let v = carrier_rotation(register, Axis::X, -FRAC_PI_2, &Targets::Ions(system))?;
    v.mul(&middle)?.mul(&v.adjoint())
}

/// Readout coupling assembled through the joint-space pulse sequence at the
/// given mode cutoff; returns the factored spin unitary and the vibrational
/// factorization residual.
pub fn readout_coupling_pulsed(
    register: &SpinRegister,
    mode: &FockMode,
    readout_ion: usize,
    mu: f64,
) -> Result<(ComplexMatrix, f64)> {
    if register.representation() != Representation::Full {
        return Err(Error::Representation("readout coupling needs the full representation".into()));
    }
    if mu < 0.0 {
        return Err(Error::Parameter("pulsed readout coupling needs μ ≥ 0".into()));
    }
    let n = register.n_ions();
    if readout_ion >= n {
        return Err(Error::IonIndex { ion: readout_ion, n_ions: n });
    }
    let system: Vec<usize> = (0..n).filter(|&i| i != readout_ion).collect();
    let kappa = mu.sqrt();
    // Weight B is the collective Jz of all ions: against σz^{(R)} the extra
    // readout term only contributes the global phase exp(−iμ(σz^R)²)
    // = exp(−iμ/4).
    let seq = loop_sequence(
        kappa,
        kappa,
        SpinWeight::SingleIon(readout_ion),
        SpinWeight::CollectiveJz,
    )?;
    let joint = compose(register, mode, &seq)?;
    let boson_identity = ComplexMatrix::identity(mode.dim());
    let v = carrier_rotation(register, Axis::X, -FRAC_PI_2, &Targets::Ions(system))?;
    let v_joint = crate::linalg::tensor_product(&v, &boson_identity)?;
    let conjugated = v_joint.mul(&joint)?.mul(&v_joint.adjoint())?;
    factor_vibration(&conjugated, register.dim(), mode.dim())
}

/// Binary readout record of a kicked top monitored through one ion.
#[derive(Debug, Clone)]
pub struct MeasurementRecord {
    pub bits: Vec<u8>,
    pub seed: u64,
    pub mu: f64,
    pub theta_r: f64,
    pub phi_r: f64,
    pub params: KickedTopParams,
    pub readout_ion: usize,
}

impl MeasurementRecord {
    pub fn bit_string(&self) -> String {
        self.bits.iter().map(|&b| if b == 1 { '1' } else { '0' }).collect()
    }
}

fn insert_bit(sys_code: usize, position: usize, bit: usize) -> usize {
    let low = sys_code & ((1 << position) - 1);
    let high = sys_code >> position;
    low | (bit << position) | (high << (position + 1))
}

/// Run the monitored kicked top: per step the system ions advance by one
/// Floquet period, the readout ion is prepared at Bloch angles
/// (θ_r, φ_r), the coupling is applied, and the readout σz is measured
/// projectively (outcome 1 = |e⟩). Deterministic for a fixed seed.
///
/// The system starts in the spin coherent state labeled by
/// `system_prep`; all ground when omitted.
#[allow(clippy::too_many_arguments)]
pub fn measurement_record(
    n_ions: usize,
    readout_ion: usize,
    params: &KickedTopParams,
    mu: f64,
    theta_r: f64,
    phi_r: f64,
    steps: usize,
    rng_seed: u64,
    system_prep: Option<(f64, f64)>,
) -> Result<MeasurementRecord> {
    if n_ions < 2 {
        return Err(Error::Parameter("the record needs a system ion and a readout ion".into()));
    }
    if n_ions > 10 {
        return Err(Error::Dimension(format!("{n_ions} ions exceed the 10-ion record guard")));
    }
    if readout_ion >= n_ions {
        return Err(Error::IonIndex { ion: readout_ion, n_ions });
    }
    let n_system = n_ions - 1;
    if (params.j - n_system as f64 / 2.0).abs() > 1e-12 {
        return Err(Error::Parameter(format!(
            "params.j = {} does not match {n_system} system ions",
            params.j
        )));
    }
    let register = SpinRegister::full(n_ions)?;
    let dim = register.dim();
    let system: Vec<usize> = (0..n_ions).filter(|&i| i != readout_ion).collect();
    let mask = system_mask(n_ions, readout_ion);
    let readout_mask = 1usize << readout_ion;

    // System initial state, readout in |g⟩.
    let sys_register = SpinRegister::symmetric(n_system)?;
    let (theta0, phi0) = system_prep.unwrap_or((0.0, 0.0));
    let sys_state = crate::spin::spin_coherent_state(&sys_register, theta0, phi0)?;
    let sys_full = crate::spin::embed_symmetric_into_full(&sys_state)?;
    let mut psi = StateVector::zeros(dim);
    for sys_code in 0..(1usize << n_system) {
        psi[insert_bit(sys_code, readout_ion, 0)] = sys_full.vector()[sys_code];
    }

    // One-time operators.
    let kick = carrier_rotation(&register, Axis::Y, params.p, &Targets::Ions(system))?;
    let twist_scale = params.kappa / (2.0 * params.j);
    let twist: Vec<Complex64> = (0..dim)
        .map(|code| {
            let w = system_weight(code, mask, n_system);
            Complex64::from_polar(1.0, -twist_scale * w * w)
        })
        .collect();
    let coupling = readout_coupling(&register, readout_ion, mu)?;

    let prep_g = Complex64::new((theta_r / 2.0).cos(), 0.0);
    let prep_e = Complex64::from_polar((theta_r / 2.0).sin(), phi_r);

    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut bits = Vec::with_capacity(steps);
    let mut last_bit = 0usize;
    for _ in 0..steps {
        // Floquet period on the system ions.
        psi = kick.apply(&psi)?;
        for (amp, phase) in psi.amplitudes_mut().iter_mut().zip(&twist) {
            *amp *= phase;
        }
        // Fresh readout preparation: the readout factor is a basis state
        // after the previous collapse.
        let mut prepared = StateVector::zeros(dim);
        for sys_code in 0..(1usize << n_system) {
            let amp = psi[insert_bit(sys_code, readout_ion, last_bit)];
            prepared[insert_bit(sys_code, readout_ion, 0)] = amp * prep_g;
            prepared[insert_bit(sys_code, readout_ion, 1)] = amp * prep_e;
        }
        psi = coupling.apply(&prepared)?;
        // Projective σz readout; the boundary draw belongs to outcome 0.
        let p0: f64 = psi
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(code, _)| code & readout_mask == 0)
            .map(|(_, z)| z.norm_sqr())
            .sum();
        let u: f64 = rng.gen();
        let outcome = usize::from(u > p0);
        for (code, amp) in psi.amplitudes_mut().iter_mut().enumerate() {
            if (code & readout_mask != 0) != (outcome == 1) {
                *amp = Complex64::new(0.0, 0.0);
            }
        }
        psi.normalize();
        bits.push(outcome as u8);
        last_bit = outcome;
    }
    Ok(MeasurementRecord {
        bits,
        seed: rng_seed,
        mu,
        theta_r,
        phi_r,
        params: *params,
        readout_ion,
    })
}

/// Two-ion interaction exp(−iχ σz^{(a)} σz^{(b)}); diagonal in the product
/// basis.
pub fn ising_gate(
    register: &SpinRegister,
    ion_a: usize,
    ion_b: usize,
    chi: f64,
) -> Result<ComplexMatrix> {
    if register.representation() != Representation::Full {
        return Err(Error::Representation("the Ising gate needs the full representation".into()));
    }
    let n = register.n_ions();
    if ion_a >= n {
        return Err(Error::IonIndex { ion: ion_a, n_ions: n });
    }
    if ion_b >= n {
        return Err(Error::IonIndex { ion: ion_b, n_ions: n });
    }
    if ion_a == ion_b {
        return Err(Error::Parameter("the Ising gate needs two distinct ions".into()));
    }
    let mask_a = 1usize << ion_a;
    let mask_b = 1usize << ion_b;
    let dim = register.dim();
    let mut diag = Vec::with_capacity(dim);
    for code in 0..dim {
        let wa = if code & mask_a != 0 { 0.5 } else { -0.5 };
        let wb = if code & mask_b != 0 { 0.5 } else { -0.5 };
        diag.push(Complex64::from_polar(1.0, -chi * wa * wb));
    }
    Ok(ComplexMatrix::diagonal(&diag))
}

/// Ising gate assembled through the joint-space pulse sequence; returns the
/// factored spin unitary and the factorization residual.
pub fn ising_gate_pulsed(
    register: &SpinRegister,
    mode: &FockMode,
    ion_a: usize,
    ion_b: usize,
    chi: f64,
) -> Result<(ComplexMatrix, f64)> {
    // Parameter checks shared with the direct construction.
    ising_gate(register, ion_a, ion_b, chi)?;
    let scale = chi.abs().sqrt();
    let kappa_x = chi.signum() * scale;
    let seq = loop_sequence(kappa_x, scale, SpinWeight::SingleIon(ion_a), SpinWeight::SingleIon(ion_b))?;
    let joint = compose(register, mode, &seq)?;
    factor_vibration(&joint, register.dim(), mode.dim())
}

/// Controlled phase gate: single-ion z rotations against the χ = π Ising
/// gate, equal to diag(1,1,1,−1) up to the global phase e^{iπ/4}.
pub fn controlled_phase(
    register: &SpinRegister,
    ion_a: usize,
    ion_b: usize,
) -> Result<ComplexMatrix> {
    let ising = ising_gate(register, ion_a, ion_b, PI)?;
    let corrections = single_z_corrections(register, ion_a, ion_b)?;
    corrections.mul(&ising)
}

/// Controlled phase with the Ising factor built through pulses.
pub fn controlled_phase_pulsed(
    register: &SpinRegister,
    mode: &FockMode,
    ion_a: usize,
    ion_b: usize,
) -> Result<(ComplexMatrix, f64)> {
    let (ising, residual) = ising_gate_pulsed(register, mode, ion_a, ion_b, PI)?;
    let corrections = single_z_corrections(register, ion_a, ion_b)?;
    Ok((corrections.mul(&ising)?, residual))
}

fn single_z_corrections(
    register: &SpinRegister,
    ion_a: usize,
    ion_b: usize,
) -> Result<ComplexMatrix> {
    // exp(−i(π/2)σz^{(a)}) exp(−i(π/2)σz^{(b)}), diagonal.
    let mask_a = 1usize << ion_a;
    let mask_b = 1usize << ion_b;
    let dim = register.dim();
    let mut diag = Vec::with_capacity(dim);
    for code in 0..dim {
        let wa = if code & mask_a != 0 { 0.5 } else { -0.5 };
        let wb = if code & mask_b != 0 { 0.5 } else { -0.5 };
        diag.push(Complex64::from_polar(1.0, -FRAC_PI_2 * (wa + wb)));
    }
    Ok(ComplexMatrix::diagonal(&diag))
}
