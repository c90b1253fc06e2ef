//! Collective and single-ion spin operators, carrier rotations, spin
//! coherent states, the Husimi distribution on the sphere, and seeded
//! sampling of collective z measurements.
//!
//! Conventions: σz = (|e⟩⟨e| − |g⟩⟨g|)/2 so single-ion eigenvalues are
//! ±1/2 and the collective Jz spectrum runs −N/2..N/2 in unit steps.
//! Symmetric basis: |j,m⟩ with m ascending, index m + j. Full basis:
//! binary string b_{N−1}..b_0, ion i ↔ bit i, bit value 1 = excited,
//! integer code ascending.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{matrix_exponential, tensor_product, ComplexMatrix, StateVector};

/// Spin component selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// How the N-ion register is represented.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    /// Permutation-symmetric sector, dimension N + 1, j = N/2.
    Symmetric,
    /// Full product space, dimension 2^N.
    Full,
}

/// Which ions a carrier pulse addresses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Targets {
    All,
    Ions(Vec<usize>),
}

/// Full-representation registers are capped here so operator matrices stay
/// within dense reach (2^12 = 4096).
pub const MAX_FULL_IONS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpinRegister {
    n_ions: usize,
    representation: Representation,
}

impl SpinRegister {
    pub fn symmetric(n_ions: usize) -> Result<Self> {
        if n_ions == 0 {
            return Err(Error::Parameter("register needs at least one ion".into()));
        }
        Ok(Self { n_ions, representation: Representation::Symmetric })
    }

    pub fn full(n_ions: usize) -> Result<Self> {
        if n_ions == 0 {
            return Err(Error::Parameter("register needs at least one ion".into()));
        }
        if n_ions > MAX_FULL_IONS {
            return Err(Error::Dimension(format!(
                "full representation with {n_ions} ions exceeds the {MAX_FULL_IONS}-ion guard"
            )));
        }
        Ok(Self { n_ions, representation: Representation::Full })
    }

    pub fn n_ions(&self) -> usize {
        self.n_ions
    }

    pub fn representation(&self) -> Representation {
        self.representation
    }

    /// Total spin j = N/2.
    pub fn j(&self) -> f64 {
        self.n_ions as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        match self.representation {
            Representation::Symmetric => self.n_ions + 1,
            Representation::Full => 1 << self.n_ions,
        }
    }

    /// m value of a Symmetric basis index.
    pub fn m_value(&self, index: usize) -> f64 {
        index as f64 - self.j()
    }
}

/// Normalized spin state tied to its register.
#[derive(Debug, Clone)]
pub struct SpinState {
    register: SpinRegister,
    vector: StateVector,
}

impl SpinState {
    pub fn new(register: SpinRegister, vector: StateVector) -> Result<Self> {
        if vector.dim() != register.dim() {
            return Err(Error::Dimension(format!(
                "state dimension {} does not match register dimension {}",
                vector.dim(),
                register.dim()
            )));
        }
        if (vector.norm() - 1.0).abs() > 1e-8 {
            return Err(Error::State(format!(
                "state norm {:.12} is not 1 within 1e-8",
                vector.norm()
            )));
        }
        Ok(Self { register, vector })
    }

    /// |j,−j⟩ in the Symmetric representation, |0..0⟩ (all ground) in Full.
    pub fn collective_ground(register: SpinRegister) -> Self {
        Self { register, vector: StateVector::basis(register.dim(), 0) }
    }

    /// Basis state by index.
    pub fn basis_state(register: SpinRegister, index: usize) -> Result<Self> {
        if index >= register.dim() {
            return Err(Error::Dimension(format!(
                "basis index {index} out of range for dimension {}",
                register.dim()
            )));
        }
        Ok(Self { register, vector: StateVector::basis(register.dim(), index) })
    }

    pub fn register(&self) -> SpinRegister {
        self.register
    }

    pub fn vector(&self) -> &StateVector {
        &self.vector
    }

    pub fn into_vector(self) -> StateVector {
        self.vector
    }

    /// ⟨ψ|M|ψ⟩.
    pub fn expectation(&self, op: &ComplexMatrix) -> Result<Complex64> {
        let applied = op.apply(&self.vector)?;
        Ok(self.vector.inner(&applied))
    }

    /// (⟨Jx⟩, ⟨Jy⟩, ⟨Jz⟩) of the collective operators.
    pub fn collective_expectations(&self) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (slot, axis) in [Axis::X, Axis::Y, Axis::Z].into_iter().enumerate() {
            let op = collective_operator(&self.register, axis);
            out[slot] = self.expectation(&op).expect("dimensions match").re;
        }
        out
    }
}

fn pauli_half(axis: Axis) -> ComplexMatrix {
    // Basis (|g⟩, |e⟩); entries of σ± halved per the spin-1/2 convention.
    let mut m = ComplexMatrix::zeros(2, 2);
    match axis {
        Axis::X => {
            m[(0, 1)] = Complex64::new(0.5, 0.0);
            m[(1, 0)] = Complex64::new(0.5, 0.0);
        }
        Axis::Y => {
            m[(0, 1)] = Complex64::new(0.0, 0.5);
            m[(1, 0)] = Complex64::new(0.0, -0.5);
        }
        Axis::Z => {
            m[(0, 0)] = Complex64::new(-0.5, 0.0);
            m[(1, 1)] = Complex64::new(0.5, 0.0);
        }
    }
    m
}

/// Collective spin operator J_axis for the register's representation.
pub fn collective_operator(register: &SpinRegister, axis: Axis) -> ComplexMatrix {
    match register.representation() {
        Representation::Symmetric => {
            let j = register.j();
            let dim = register.dim();
            let mut m = ComplexMatrix::zeros(dim, dim);
            match axis {
                Axis::Z => {
                    for k in 0..dim {
                        m[(k, k)] = Complex64::new(register.m_value(k), 0.0);
                    }
                }
                Axis::X | Axis::Y => {
                    for k in 0..dim - 1 {
                        // J₊|j,m⟩ = √(j(j+1) − m(m+1)) |j,m+1⟩
                        let mv = register.m_value(k);
                        let elem = (j * (j + 1.0) - mv * (mv + 1.0)).sqrt();
                        match axis {
                            Axis::X => {
                                m[(k + 1, k)] = Complex64::new(elem / 2.0, 0.0);
                                m[(k, k + 1)] = Complex64::new(elem / 2.0, 0.0);
                            }
                            Axis::Y => {
                                m[(k + 1, k)] = Complex64::new(0.0, -elem / 2.0);
                                m[(k, k + 1)] = Complex64::new(0.0, elem / 2.0);
                            }
                            Axis::Z => unreachable!(),
                        }
                    }
                }
            }
            m
        }
        Representation::Full => {
            let dim = register.dim();
            let mut m = ComplexMatrix::zeros(dim, dim);
            for ion in 0..register.n_ions() {
                accumulate_single_ion(&mut m, register.n_ions(), ion, axis);
            }
            m
        }
    }
}

fn accumulate_single_ion(m: &mut ComplexMatrix, n_ions: usize, ion: usize, axis: Axis) {
    let dim = 1usize << n_ions;
    let mask = 1usize << ion;
    for code in 0..dim {
        let excited = code & mask != 0;
        match axis {
            Axis::Z => {
                let val = if excited { 0.5 } else { -0.5 };
                m[(code, code)] += Complex64::new(val, 0.0);
            }
            Axis::X => {
                m[(code ^ mask, code)] += Complex64::new(0.5, 0.0);
            }
            Axis::Y => {
                // ⟨e|σy|g⟩ = −i/2, ⟨g|σy|e⟩ = +i/2
                let val = if excited { Complex64::new(0.0, 0.5) } else { Complex64::new(0.0, -0.5) };
                m[(code ^ mask, code)] += val;
            }
        }
    }
}

/// σ_axis on one ion, identity elsewhere. Full representation only.
pub fn single_ion_operator(register: &SpinRegister, ion: usize, axis: Axis) -> Result<ComplexMatrix> {
    if register.representation() != Representation::Full {
        return Err(Error::Representation(
            "single-ion operators need the full product representation".into(),
        ));
    }
    if ion >= register.n_ions() {
        return Err(Error::IonIndex { ion, n_ions: register.n_ions() });
    }
    let mut m = ComplexMatrix::zeros(register.dim(), register.dim());
    accumulate_single_ion(&mut m, register.n_ions(), ion, axis);
    Ok(m)
}

/// Carrier rotation exp(−i·angle·W) where W sums σ_axis over the targets.
///
/// In the Full representation the commuting single-ion factors are built as
/// a Kronecker product of 2×2 rotations, which is exact and avoids a large
/// matrix exponential.
pub fn carrier_rotation(
    register: &SpinRegister,
    axis: Axis,
    angle: f64,
    targets: &Targets,
) -> Result<ComplexMatrix> {
    if !angle.is_finite() {
        return Err(Error::Parameter("rotation angle must be finite".into()));
    }
    match register.representation() {
        Representation::Symmetric => match targets {
            Targets::All => {
                let gen = collective_operator(register, axis).scale(Complex64::new(0.0, -angle));
                matrix_exponential(&gen)
            }
            Targets::Ions(_) => Err(Error::Representation(
                "subset targets need the full product representation".into(),
            )),
        },
        Representation::Full => {
            let selected: Vec<bool> = match targets {
                Targets::All => vec![true; register.n_ions()],
                Targets::Ions(ions) => {
                    let mut sel = vec![false; register.n_ions()];
                    for &ion in ions {
                        if ion >= register.n_ions() {
                            return Err(Error::IonIndex { ion, n_ions: register.n_ions() });
                        }
                        sel[ion] = true;
                    }
                    sel
                }
            };
            let rot2 = matrix_exponential(&pauli_half(axis).scale(Complex64::new(0.0, -angle)))?;
            let i2 = ComplexMatrix::identity(2);
            // Ion N−1 is the slow factor.
            let mut out = ComplexMatrix::identity(1);
            for ion in (0..register.n_ions()).rev() {
                let factor = if selected[ion] { &rot2 } else { &i2 };
                out = tensor_product(&out, factor)?;
            }
            Ok(out)
        }
    }
}

/// Spin coherent state exp[iθ(Jx sinφ − Jy cosφ)] |j,−j⟩.
pub fn spin_coherent_state(register: &SpinRegister, theta: f64, phi: f64) -> Result<SpinState> {
    if register.representation() != Representation::Symmetric {
        return Err(Error::Representation(
            "spin coherent states are built in the symmetric representation".into(),
        ));
    }
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::Parameter(format!("theta {theta} outside [0, π]")));
    }
    let jx = collective_operator(register, Axis::X);
    let jy = collective_operator(register, Axis::Y);
    let gen = jx
        .scale(Complex64::new(0.0, theta * phi.sin()))
        .add(&jy.scale(Complex64::new(0.0, -theta * phi.cos())))?;
    let rot = matrix_exponential(&gen)?;
    let mut vector = rot.apply(&StateVector::basis(register.dim(), 0))?;
    vector.normalize();
    SpinState::new(*register, vector)
}

/// Husimi distribution Q(θ,φ) = ((2j+1)/4π) |⟨γ(θ,φ)|ψ⟩|² sampled on a
/// midpoint grid in θ and a uniform grid in φ.
#[derive(Debug, Clone)]
pub struct HusimiGrid {
    j: f64,
    thetas: Vec<f64>,
    phis: Vec<f64>,
    /// Row-major, θ index slow.
    values: Vec<f64>,
}

impl HusimiGrid {
    pub fn n_theta(&self) -> usize {
        self.thetas.len()
    }

    pub fn n_phi(&self) -> usize {
        self.phis.len()
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn phis(&self) -> &[f64] {
        &self.phis
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, k_theta: usize, l_phi: usize) -> f64 {
        self.values[k_theta * self.phis.len() + l_phi]
    }

    pub fn j(&self) -> f64 {
        self.j
    }

    /// Midpoint quadrature of ∫ Q sinθ dθ dφ; 1 for a normalized state up
    /// to grid resolution.
    pub fn integral(&self) -> f64 {
        let dth = PI / self.n_theta() as f64;
        let dph = 2.0 * PI / self.n_phi() as f64;
        let mut total = 0.0;
        for (k, &th) in self.thetas.iter().enumerate() {
            let row: f64 = self.values[k * self.n_phi()..(k + 1) * self.n_phi()].iter().sum();
            total += row * th.sin();
        }
        total * dth * dph
    }

    /// Grid cell holding the largest Q value.
    pub fn peak(&self) -> (usize, usize) {
        let mut best = (0, 0);
        let mut best_val = f64::NEG_INFINITY;
        for k in 0..self.n_theta() {
            for l in 0..self.n_phi() {
                let v = self.value(k, l);
                if v > best_val {
                    best_val = v;
                    best = (k, l);
                }
            }
        }
        best
    }

    /// Q-weighted centroid (a point inside the unit ball) and the weighted
    /// mean squared chord distance of grid directions from it.
    pub fn second_moment_about_centroid(&self) -> (f64, [f64; 3]) {
        let dph = 2.0 * PI / self.n_phi() as f64;
        let dth = PI / self.n_theta() as f64;
        let mut total = 0.0;
        let mut centroid = [0.0_f64; 3];
        let mut weights = Vec::with_capacity(self.values.len());
        for (k, &th) in self.thetas.iter().enumerate() {
            let (sth, cth) = (th.sin(), th.cos());
            for (l, &ph) in self.phis.iter().enumerate() {
                let w = self.value(k, l) * sth * dth * dph;
                let u = [sth * ph.cos(), sth * ph.sin(), cth];
                total += w;
                for (c, ui) in centroid.iter_mut().zip(u) {
                    *c += w * ui;
                }
                weights.push((w, u));
            }
        }
        if total <= 0.0 {
            return (0.0, centroid);
        }
        for c in &mut centroid {
            *c /= total;
        }
        let mut m2 = 0.0;
        for (w, u) in weights {
            let d2 = (u[0] - centroid[0]).powi(2)
                + (u[1] - centroid[1]).powi(2)
                + (u[2] - centroid[2]).powi(2);
            m2 += w * d2;
        }
        (m2 / total, centroid)
    }
}

/// Sample the Husimi distribution of a symmetric-representation state.
///
/// The coherent-state overlaps factor through z-axis phases, so only one
/// short rotation per θ row is needed:
/// ⟨γ(θ,φ)|ψ⟩ = e^{ijφ} Σ_m conj(w_θ[m]) e^{imφ} ψ[m] with
/// w_θ = exp(−iθJy)|j,−j⟩.
pub fn husimi_grid(state: &SpinState, n_theta: usize, n_phi: usize) -> Result<HusimiGrid> {
    let register = state.register();
    if register.representation() != Representation::Symmetric {
        return Err(Error::Representation(
            "the Husimi distribution is sampled in the symmetric representation".into(),
        ));
    }
    if n_theta < 2 || n_phi < 2 {
        return Err(Error::Parameter("Husimi grid needs at least 2 points per axis".into()));
    }
    let dim = register.dim();
    let j = register.j();
    let dth = PI / n_theta as f64;
    let thetas: Vec<f64> = (0..n_theta).map(|k| (k as f64 + 0.5) * dth).collect();
    let phis: Vec<f64> = (0..n_phi).map(|l| l as f64 * 2.0 * PI / n_phi as f64).collect();

    let jy = collective_operator(&register, Axis::Y);
    let half_step = matrix_exponential(&jy.scale(Complex64::new(0.0, -dth / 2.0)))?;
    let step = half_step.mul(&half_step)?;
    let mut w = half_step.apply(&StateVector::basis(dim, 0))?;

    let psi = state.vector();
    let mut values = Vec::with_capacity(n_theta * n_phi);
    let prefactor = (2.0 * j + 1.0) / (4.0 * PI);
    // Conjugated row products, then φ phases per m.
    let mut row_terms = vec![Complex64::new(0.0, 0.0); dim];
    for _ in 0..n_theta {
        for (term, (wm, pm)) in row_terms.iter_mut().zip(w.amplitudes().iter().zip(psi.amplitudes())) {
            *term = wm.conj() * pm;
        }
        for &ph in &phis {
            let mut amp = Complex64::new(0.0, 0.0);
            for (idx, term) in row_terms.iter().enumerate() {
                let m = idx as f64 - j;
                amp += term * Complex64::from_polar(1.0, m * ph);
            }
            values.push(prefactor * amp.norm_sqr());
        }
        w = step.apply(&w)?;
    }
    Ok(HusimiGrid { j, thetas, phis, values })
}

/// I.i.d. samples of the collective z component via the inverse CDF over m
/// ascending; a cumulative boundary belongs to the lower m. Deterministic
/// for a fixed seed.
pub fn measure_jz(state: &SpinState, rng_seed: u64, n_samples: usize) -> Result<Vec<f64>> {
    let register = state.register();
    if register.representation() != Representation::Symmetric {
        return Err(Error::Representation(
            "collective z sampling runs in the symmetric representation".into(),
        ));
    }
    let norm = state.vector().norm();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::State(format!("cannot sample an unnormalized state (norm {norm:.12})")));
    }
    let probs: Vec<f64> = state.vector().amplitudes().iter().map(|z| z.norm_sqr()).collect();
    let total: f64 = probs.iter().sum();
    let mut cumulative = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for p in &probs {
        acc += p / total;
        cumulative.push(acc);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut samples = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        let u: f64 = rng.gen();
        let idx = cumulative
            .iter()
            .position(|&c| u <= c)
            .unwrap_or(cumulative.len() - 1);
        samples.push(register.m_value(idx));
    }
    Ok(samples)
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    let mut out = 1.0_f64;
    for i in 0..k {
        out = out * (n - i) as f64 / (i + 1) as f64;
    }
    out
}

/// Map a symmetric-representation state into the full product space:
/// |j,m⟩ becomes the uniform superposition of all bit strings of Hamming
/// weight m + j.
pub fn embed_symmetric_into_full(state: &SpinState) -> Result<SpinState> {
    let register = state.register();
    if register.representation() != Representation::Symmetric {
        return Err(Error::Representation("embedding starts from the symmetric representation".into()));
    }
    let n = register.n_ions();
    if n > MAX_FULL_IONS {
        return Err(Error::Dimension(format!(
            "embedding with {n} ions exceeds the {MAX_FULL_IONS}-ion guard"
        )));
    }
    let full = SpinRegister::full(n)?;
    let mut out = StateVector::zeros(full.dim());
    let scaled: Vec<Complex64> = state
        .vector()
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(k, z)| z / binomial(n, k).sqrt())
        .collect();
    for code in 0..full.dim() {
        out[code] = scaled[code.count_ones() as usize];
    }
    SpinState::new(full, out)
}
