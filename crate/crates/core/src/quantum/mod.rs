//! Finite-dimensional phase operators and the Bost–Connes statistics.

mod bost_connes;

pub use bost_connes::{
    bc_partition, kms_expectation, kms_low_temperature_limit, kms_near_pole_scaled, operator_actions, phase_action,
    shift_action, KmsPoint, OperatorAction, Partition,
};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use num_integer::Integer;

use crate::arith::ArithTable;
use crate::{Error, Real, Result};

const NORM_TOL: f64 = 1e-12;

fn cx<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

/// Unit phasor `e^{2πi·num/den}` with the argument reduced exactly first.
fn root_of_unity<T: Real>(num: i64, den: u64) -> Complex<T> {
    let r = num.rem_euclid(den as i64);
    let angle = T::TAU() * T::from(r).unwrap_or_else(T::nan) / T::from(den).unwrap_or_else(T::nan);
    Complex::from_polar(T::one(), angle)
}

/// Amplitudes in the number basis `|0⟩ … |q−1⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T: Real> {
    amplitudes: DVector<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    pub fn new(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Size("a state needs at least one amplitude".into()));
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::Parameter("state amplitudes must be finite".into()));
        }
        Ok(Self { amplitudes: DVector::from_vec(amplitudes) })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        self.amplitudes.as_slice()
    }

    pub fn as_vector(&self) -> &DVector<Complex<T>> {
        &self.amplitudes
    }

    pub fn norm(&self) -> T {
        self.amplitudes.iter().fold(T::zero(), |a, z| a + z.norm_sqr()).sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - T::one()).abs() <= T::lit(NORM_TOL)
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        if self.dim() != other.dim() {
            return Err(Error::Size(format!("dimensions {} and {} differ", self.dim(), other.dim())));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .fold(czero(), |acc, (a, b)| acc + a.conj() * b))
    }

    /// `Σ n |c_n|²`.
    pub fn number_expectation(&self) -> T {
        self.amplitudes
            .iter()
            .enumerate()
            .fold(T::zero(), |acc, (n, z)| acc + T::from_usize_lossy(n) * z.norm_sqr())
    }

    /// Truncated lowering operator: `(a ψ)_n = √(n+1) ψ_{n+1}`, last entry 0.
    pub fn lowered(&self) -> Self {
        let d = self.dim();
        let v = (0..d)
            .map(|n| {
                if n + 1 < d {
                    self.amplitudes[n + 1] * T::from_usize_lossy(n + 1).sqrt()
                } else {
                    czero()
                }
            })
            .collect();
        Self { amplitudes: DVector::from_vec(v) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    PeggBarnett,
    LockOperator,
    LockProjector,
    SusskindE,
}

impl OperatorKind {
    pub fn is_hermitian_kind(self) -> bool {
        !matches!(self, Self::SusskindE)
    }
}

/// Which index block of the projector to build: the full q×q space, or the
/// leading φ(q)×φ(q) block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IndexRange {
    #[default]
    Full,
    Totient,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseOperatorMatrix<T: Real> {
    kind: OperatorKind,
    matrix: DMatrix<Complex<T>>,
}

impl<T: Real> PhaseOperatorMatrix<T> {
    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex<T>> {
        &self.matrix
    }

    pub fn entry(&self, n: usize, l: usize) -> Complex<T> {
        self.matrix[(n, l)]
    }

    pub fn adjoint(&self) -> DMatrix<Complex<T>> {
        self.matrix.transpose().map(|z| z.conj())
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim()).fold(czero(), |a, i| a + self.matrix[(i, i)])
    }

    /// Largest `|M − M†|` entry.
    pub fn hermiticity_defect(&self) -> T {
        let adj = self.adjoint();
        (&self.matrix - adj).iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    /// Largest `|M² − M|` entry.
    pub fn idempotency_defect(&self) -> T {
        let sq = &self.matrix * &self.matrix;
        (sq - &self.matrix).iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    /// `⟨ψ|M|ψ⟩`.
    pub fn expectation(&self, psi: &StateVector<T>) -> Result<Complex<T>> {
        if psi.dim() != self.dim() {
            return Err(Error::Size(format!("state dim {} vs operator dim {}", psi.dim(), self.dim())));
        }
        let v = psi.as_vector();
        let mv = &self.matrix * v;
        Ok(v.iter().zip(mv.iter()).fold(czero(), |acc, (a, b)| acc + a.conj() * b))
    }

    pub fn apply(&self, psi: &StateVector<T>) -> Result<StateVector<T>> {
        if psi.dim() != self.dim() {
            return Err(Error::Size(format!("state dim {} vs operator dim {}", psi.dim(), self.dim())));
        }
        Ok(StateVector { amplitudes: &self.matrix * psi.as_vector() })
    }

    /// Ascending eigenvalues of a Hermitian kind, computed in double precision.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        if !self.kind.is_hermitian_kind() {
            return Err(Error::Precondition(format!("{:?} is not Hermitian", self.kind)));
        }
        let m = self.matrix.map(|z| Complex::new(z.re.to_f64_lossy(), z.im.to_f64_lossy()));
        let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        Ok(ev)
    }
}

/// `|θ_p⟩ = q^{−1/2} Σ_n e^{i n (2πp/q + θ₀)} |n⟩`.
pub fn phase_state<T: Real>(q: u64, p: u64, theta0: T) -> Result<StateVector<T>> {
    if q == 0 || p >= q {
        return Err(Error::Parameter(format!("phase index p = {p} must lie in [0, q) with q = {q} ≥ 1")));
    }
    let norm = T::one() / T::from(q).unwrap_or_else(T::nan).sqrt();
    let amps = (0..q)
        .map(|n| {
            let base = root_of_unity::<T>((p * n % q) as i64, q);
            let extra = Complex::from_polar(T::one(), theta0 * T::from(n).unwrap_or_else(T::nan));
            base * extra * norm
        })
        .collect();
    StateVector::new(amps)
}

fn spectral_sum<T: Real>(
    q: u64,
    theta0: T,
    kind: OperatorKind,
    include: impl Fn(u64) -> bool,
    weight: impl Fn(u64) -> T,
) -> Result<PhaseOperatorMatrix<T>> {
    if q == 0 {
        return Err(Error::Parameter("dimension q must be ≥ 1".into()));
    }
    let d = q as usize;
    let mut m = DMatrix::from_element(d, d, czero());
    for p in (0..q).filter(|&p| include(p)) {
        let state = phase_state(q, p, theta0)?;
        let a = state.amplitudes();
        let w = weight(p);
        for n in 0..d {
            for l in 0..d {
                m[(n, l)] += a[n] * a[l].conj() * w;
            }
        }
    }
    Ok(PhaseOperatorMatrix { kind, matrix: m })
}

fn theta_p<T: Real>(q: u64, p: u64, theta0: T) -> T {
    theta0 + T::TAU() * T::from(p).unwrap_or_else(T::nan) / T::from(q).unwrap_or_else(T::nan)
}

/// `Θ_q = Σ_p θ_p |θ_p⟩⟨θ_p|`, `θ_p = θ₀ + 2πp/q`.
pub fn pegg_barnett<T: Real>(q: u64, theta0: T) -> Result<PhaseOperatorMatrix<T>> {
    spectral_sum(q, theta0, OperatorKind::PeggBarnett, |_| true, |p| theta_p(q, p, theta0))
}

/// `Σ_{(p,q)=1} (2πp/q) |θ_p⟩⟨θ_p|` on the full q-dimensional space.
pub fn lock_operator<T: Real>(q: u64) -> Result<PhaseOperatorMatrix<T>> {
    spectral_sum(q, T::zero(), OperatorKind::LockOperator, |p| p.gcd(&q) == 1, |p| theta_p(q, p, T::zero()))
}

/// `Σ_{(p,q)=1} |θ_p⟩⟨θ_p|`, summed as outer products.
pub fn lock_projector<T: Real>(q: u64, range: IndexRange) -> Result<PhaseOperatorMatrix<T>> {
    let full = spectral_sum(q, T::zero(), OperatorKind::LockProjector, |p| p.gcd(&q) == 1, |_| T::one())?;
    Ok(match range {
        IndexRange::Full => full,
        IndexRange::Totient => {
            let k = crate::arith::totient_of(q) as usize;
            PhaseOperatorMatrix {
                kind: full.kind,
                matrix: full.matrix.view((0, 0), (k, k)).into_owned(),
            }
        }
    })
}

/// The same projector from the closed form `(1/q) c_q(n − l)`.
pub fn lock_projector_ramanujan<T: Real>(
    table: &ArithTable,
    q: u64,
    range: IndexRange,
) -> Result<PhaseOperatorMatrix<T>> {
    if q == 0 {
        return Err(Error::Parameter("dimension q must be ≥ 1".into()));
    }
    let d = match range {
        IndexRange::Full => q as usize,
        IndexRange::Totient => table.totient(q)? as usize,
    };
    let qf = T::from(q).unwrap_or_else(T::nan);
    let mut m = DMatrix::from_element(d, d, czero());
    for n in 0..d {
        for l in 0..d {
            let c = table.ramanujan_sum(q, n as i64 - l as i64)?;
            m[(n, l)] = cx(T::from(c).unwrap_or_else(T::nan) / qf);
        }
    }
    Ok(PhaseOperatorMatrix { kind: OperatorKind::LockProjector, matrix: m })
}

/// `q·P_lock` as the integer matrix `c_q(n − l)`.
pub fn lock_projector_integer(table: &ArithTable, q: u64) -> Result<DMatrix<i64>> {
    if q == 0 {
        return Err(Error::Parameter("dimension q must be ≥ 1".into()));
    }
    let d = q as usize;
    let mut m = DMatrix::zeros(d, d);
    for n in 0..d {
        for l in 0..d {
            m[(n, l)] = table.ramanujan_sum(q, n as i64 - l as i64)?;
        }
    }
    Ok(m)
}

/// Truncated `E = Σ_{n=0}^{q−2} |n⟩⟨n+1|`.
pub fn susskind_e<T: Real>(q: u64) -> Result<PhaseOperatorMatrix<T>> {
    if q < 2 {
        return Err(Error::Parameter("E needs dimension q ≥ 2".into()));
    }
    let d = q as usize;
    let mut m = DMatrix::from_element(d, d, czero());
    for n in 0..d - 1 {
        m[(n, n + 1)] = cx(T::one());
    }
    Ok(PhaseOperatorMatrix { kind: OperatorKind::SusskindE, matrix: m })
}

/// Truncated, normalized `q^{−1/2} Σ_{n<q} e^{inψ}|n⟩`.
pub fn susskind_state<T: Real>(q: u64, psi: T) -> Result<StateVector<T>> {
    if q == 0 {
        return Err(Error::Parameter("dimension q must be ≥ 1".into()));
    }
    let norm = T::one() / T::from(q).unwrap_or_else(T::nan).sqrt();
    StateVector::new(
        (0..q)
            .map(|n| Complex::from_polar(norm, psi * T::from(n).unwrap_or_else(T::nan)))
            .collect(),
    )
}

/// `q^{−1/2} Σ_{n<q} e^{inβ}|n⟩`.
pub fn beta_state<T: Real>(q: u64, beta: T) -> Result<StateVector<T>> {
    susskind_state(q, beta)
}

/// Truncated coherent state `e^{−|α|²/2} αⁿ/√(n!)`, evaluated in log space.
pub fn coherent_state<T: Real>(alpha: Complex<T>, dim: usize) -> Result<StateVector<T>> {
    if dim == 0 {
        return Err(Error::Parameter("dimension must be ≥ 1".into()));
    }
    let r = alpha.norm();
    if !r.is_finite() {
        return Err(Error::Parameter("α must be finite".into()));
    }
    if r == T::zero() {
        let mut v = vec![czero(); dim];
        v[0] = cx(T::one());
        return StateVector::new(v);
    }
    let (ln_r, phase) = (r.ln(), alpha.arg());
    let mut ln_fact = T::zero();
    let amps = (0..dim)
        .map(|n| {
            let nf = T::from_usize_lossy(n);
            if n > 0 {
                ln_fact += nf.ln();
            }
            let ln_mag = -r * r / T::lit(2.0) + nf * ln_r - ln_fact / T::lit(2.0);
            Complex::from_polar(ln_mag.exp(), phase * nf)
        })
        .collect();
    StateVector::new(amps)
}

/// `⟨β|Θ_q^lock|β⟩` and its Ramanujan-sum form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LockedPhaseExpectation<T> {
    pub q: u64,
    pub beta: T,
    /// `π ⟨β|P_lock|β⟩` from the dense projector.
    pub dense: T,
    /// `(π/q²) Σ_{n,l} c_q(l−n) cos(β(n−l))`.
    pub ramanujan: T,
    /// Imaginary part of the unsymmetrized double sum.
    pub imag_residue: T,
    /// `⟨β|Θ_q^lock|β⟩` with the `θ_p = 2πp/q` weights.
    pub exact: T,
}

impl<T: Real> LockedPhaseExpectation<T> {
    pub fn value(&self) -> T {
        self.ramanujan
    }

    pub fn route_gap(&self) -> T {
        (self.dense - self.ramanujan).abs()
    }
}

/// The Ramanujan double sum alone; O(q) using the Toeplitz structure.
pub fn locked_phase_ramanujan<T: Real>(table: &ArithTable, q: u64, beta: T) -> Result<(T, T)> {
    if q == 0 {
        return Err(Error::Parameter("q must be ≥ 1".into()));
    }
    // pairs with n − l = m occur q − |m| times
    let qi = q as i64;
    let (mut re, mut im) = (T::zero(), T::zero());
    for m in -(qi - 1)..qi {
        let c = T::from(table.ramanujan_sum(q, -m)?).unwrap_or_else(T::nan);
        let mult = T::from(qi - m.abs()).unwrap_or_else(T::nan);
        let arg = beta * T::from(m).unwrap_or_else(T::nan);
        re += c * mult * arg.cos();
        im += c * mult * arg.sin();
    }
    let scale = T::PI() / T::from(q * q).unwrap_or_else(T::nan);
    Ok((re * scale, im * scale))
}

pub fn expectation_locked_phase<T: Real>(table: &ArithTable, q: u64, beta: T) -> Result<LockedPhaseExpectation<T>> {
    let state = beta_state(q, beta)?;
    let dense = lock_projector::<T>(q, IndexRange::Full)?.expectation(&state)?.re * T::PI();
    let exact = locked_phase_exact(q, beta)?;
    let (ramanujan, imag_residue) = locked_phase_ramanujan(table, q, beta)?;
    Ok(LockedPhaseExpectation { q, beta, dense, ramanujan, imag_residue, exact })
}

/// `⟨β|Θ_q^lock|β⟩ = Σ_{(p,q)=1} θ_p |⟨θ_p|β⟩|²` without forming the matrix.
pub fn locked_phase_exact<T: Real>(q: u64, beta: T) -> Result<T> {
    let state = beta_state(q, beta)?;
    let mut acc = T::zero();
    for p in (0..q).filter(|&p| p.gcd(&q) == 1) {
        let overlap = phase_state(q, p, T::zero())?.inner(&state)?;
        acc += theta_p(q, p, T::zero()) * overlap.norm_sqr();
    }
    Ok(acc)
}
