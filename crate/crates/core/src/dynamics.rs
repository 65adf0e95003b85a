//! Qubit master-equation dynamics in Bloch form, dynamical and intermediate
//! maps, and Choi-matrix positivity tests.
//!
//! Basis convention: `σz = diag(1, -1)`, index 0 is the excited level and the
//! ground state has Bloch vector `(0, 0, -1)`.

use nalgebra::{Complex, Matrix2, Matrix4, SymmetricEigen};
use serde::Serialize;

use crate::numerics::{ode_solve, DenseSolution, OdeSpec};
use crate::rates::{RateTable, RateTriple, TimeScale};
use crate::Error;

pub type C64 = Complex<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QubitState {
    pub bloch: [f64; 3],
}

impl QubitState {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { bloch: [x, y, z] }
    }

    pub fn ground() -> Self {
        Self::new(0.0, 0.0, -1.0)
    }

    pub fn excited() -> Self {
        Self::new(0.0, 0.0, 1.0)
    }

    pub fn norm(&self) -> f64 {
        self.bloch.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn is_physical(&self, tol: f64) -> bool {
        self.norm() <= 1.0 + tol
    }

    /// Population of the ground level.
    pub fn ground_population(&self) -> f64 {
        0.5 * (1.0 - self.bloch[2])
    }

    pub fn to_matrix(&self) -> Matrix2<C64> {
        let [x, y, z] = self.bloch;
        Matrix2::new(
            C64::new(0.5 * (1.0 + z), 0.0),
            C64::new(0.5 * x, -0.5 * y),
            C64::new(0.5 * x, 0.5 * y),
            C64::new(0.5 * (1.0 - z), 0.0),
        )
    }

    /// Reads the Bloch vector of a unit-trace Hermitian matrix.
    pub fn from_matrix(m: &Matrix2<C64>) -> Result<Self, Error> {
        let herm = (m - m.adjoint()).norm();
        let tr = m[(0, 0)] + m[(1, 1)];
        if herm > 1e-10 || (tr - C64::new(1.0, 0.0)).norm() > 1e-10 {
            return Err(Error::Contract("matrix is not a unit-trace Hermitian operator".into()));
        }
        Ok(Self::new(2.0 * m[(1, 0)].re, 2.0 * m[(1, 0)].im, (m[(0, 0)] - m[(1, 1)]).re))
    }
}

/// Time derivative of the Bloch vector for rates `a` per unit `τ̄` and an
/// optional level splitting `ω̄` (interaction picture when `None`).
pub fn bloch_rhs(r: &[f64; 3], a: [f64; 3], splitting: Option<f64>) -> [f64; 3] {
    let [a1, a2, a3] = a;
    let d = 0.25 * (a1 + a2) + a3;
    let w = splitting.unwrap_or(0.0);
    [
        -d * r[0] - w * r[1],
        -d * r[1] + w * r[0],
        0.5 * (a1 - a2) - 0.5 * (a1 + a2) * r[2],
    ]
}

/// Master-equation derivative for scaled rates `triple`.
pub fn dissipator_rhs(state: &QubitState, triple: &RateTriple, scale: TimeScale, splitting: Option<f64>) -> QubitState {
    let k = scale.factor();
    QubitState { bloch: bloch_rhs(&state.bloch, [k * triple.g1, k * triple.g2, k * triple.g3], splitting) }
}

/// Generator of the affine Bloch flow acting on `(1, x, y, z)`.
pub fn generator_matrix(a: [f64; 3], splitting: Option<f64>) -> Matrix4<f64> {
    let [a1, a2, a3] = a;
    let d = 0.25 * (a1 + a2) + a3;
    let w = splitting.unwrap_or(0.0);
    Matrix4::new(
        0.0, 0.0, 0.0, 0.0, //
        0.0, -d, -w, 0.0, //
        0.0, w, -d, 0.0, //
        0.5 * (a1 - a2), 0.0, 0.0, -0.5 * (a1 + a2),
    )
}

/// Options shared by all evolutions.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Evolution {
    /// Include the `ω σz / 2` term.
    pub hamiltonian: bool,
    pub ode: OdeSpec,
}

impl Default for Evolution {
    fn default() -> Self {
        Self { hamiltonian: false, ode: OdeSpec { max_step: Some(0.05), ..OdeSpec::default() } }
    }
}

impl Evolution {
    fn splitting(&self, table: &RateTable) -> Option<f64> {
        self.hamiltonian.then_some(table.params().omegabar)
    }
}

fn check_span(table: &RateTable, t0: f64, t1: f64) -> Result<(), Error> {
    let (lo, hi) = table.span();
    let slack = 1e-12 * hi.abs().max(1.0);
    if !(t0 <= t1) || t0 < lo - slack || t1 > hi + slack {
        return Err(Error::Contract(format!("span [{t0}, {t1}] is not inside the table range [{lo}, {hi}]")));
    }
    Ok(())
}

/// Dense Bloch trajectory.
#[derive(Debug, Clone)]
pub struct StateTrajectory {
    sol: DenseSolution<3>,
}

impl StateTrajectory {
    pub fn at(&self, taubar: f64) -> QubitState {
        QubitState { bloch: self.sol.eval(taubar) }
    }

    pub fn span(&self) -> (f64, f64) {
        self.sol.span()
    }

    pub fn mesh(&self) -> Vec<f64> {
        self.sol.mesh()
    }
}

pub fn evolve_state(
    rho0: QubitState,
    table: &RateTable,
    span: (f64, f64),
    evolution: &Evolution,
) -> Result<StateTrajectory, Error> {
    check_span(table, span.0, span.1)?;
    let w = evolution.splitting(table);
    let rhs = |t: f64, r: &[f64; 3]| bloch_rhs(r, table.generator_rates(t), w);
    let sol = ode_solve(rhs, rho0.bloch, span, &evolution.ode)?;
    Ok(StateTrajectory { sol })
}

/// Affine map on `(1, x, y, z)`; as a linear map on Pauli coefficient
/// vectors it also acts on arbitrary (non-Hermitian) operators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMap {
    pub matrix: Matrix4<f64>,
    pub taubar: f64,
}

impl TransferMap {
    pub fn identity(taubar: f64) -> Self {
        Self { matrix: Matrix4::identity(), taubar }
    }

    pub fn apply(&self, state: &QubitState) -> QubitState {
        let [x, y, z] = state.bloch;
        let v = self.matrix * nalgebra::Vector4::new(1.0, x, y, z);
        QubitState::new(v[1], v[2], v[3])
    }

    /// Image of the operator `(c₀ I + c·σ)/2` given as Pauli coefficients.
    pub fn apply_pauli(&self, c: [C64; 4]) -> [C64; 4] {
        let m = self.matrix.map(|v| C64::new(v, 0.0));
        let v = m * nalgebra::Vector4::from(c);
        [v[0], v[1], v[2], v[3]]
    }

    /// Image of a general 2×2 operator.
    pub fn apply_operator(&self, op: &Matrix2<C64>) -> Matrix2<C64> {
        from_pauli(self.apply_pauli(to_pauli(op)))
    }
}

fn pauli(k: usize) -> Matrix2<C64> {
    let (o, z, i) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 1.0));
    match k {
        0 => Matrix2::new(o, z, z, o),
        1 => Matrix2::new(z, o, o, z),
        2 => Matrix2::new(z, -i, i, z),
        _ => Matrix2::new(o, z, z, -o),
    }
}

/// Coefficients `cₖ = tr(σₖ X)` so that `X = Σ cₖ σₖ / 2`.
pub fn to_pauli(op: &Matrix2<C64>) -> [C64; 4] {
    std::array::from_fn(|k| (pauli(k) * op).trace())
}

pub fn from_pauli(c: [C64; 4]) -> Matrix2<C64> {
    (0..4).fold(Matrix2::zeros(), |acc, k| acc + pauli(k) * (c[k] * 0.5))
}

fn solve_map(table: &RateTable, t0: f64, t1: f64, evolution: &Evolution) -> Result<DenseSolution<16>, Error> {
    check_span(table, t0, t1)?;
    let w = evolution.splitting(table);
    let rhs = |t: f64, y: &[f64; 16]| {
        let a = generator_matrix(table.generator_rates(t), w);
        let phi = Matrix4::from_column_slice(y);
        let d = a * phi;
        let mut out = [0.0; 16];
        out.copy_from_slice(d.as_slice());
        out
    };
    let mut y0 = [0.0; 16];
    y0.copy_from_slice(Matrix4::<f64>::identity().as_slice());
    Ok(ode_solve(rhs, y0, (t0, t1), &evolution.ode)?)
}

fn to_map(y: &[f64; 16], taubar: f64) -> TransferMap {
    let mut m = Matrix4::from_column_slice(y);
    // trace preservation is structural; remove round-off in the first row
    m.set_row(0, &nalgebra::RowVector4::new(1.0, 0.0, 0.0, 0.0));
    TransferMap { matrix: m, taubar }
}

/// The dynamical map from the table start to `taubar`.
pub fn propagator(table: &RateTable, taubar: f64, evolution: &Evolution) -> Result<TransferMap, Error> {
    let t0 = table.span().0;
    if taubar == t0 {
        return Ok(TransferMap::identity(taubar));
    }
    let sol = solve_map(table, t0, taubar, evolution)?;
    Ok(to_map(&sol.last(), taubar))
}

/// Dynamical maps along the whole table span, queried densely.
#[derive(Debug, Clone)]
pub struct MapTrajectory {
    sol: DenseSolution<16>,
}

impl MapTrajectory {
    pub fn solve(table: &RateTable, evolution: &Evolution) -> Result<Self, Error> {
        let (lo, hi) = table.span();
        Ok(Self { sol: solve_map(table, lo, hi, evolution)? })
    }

    pub fn at(&self, taubar: f64) -> TransferMap {
        to_map(&self.sol.eval(taubar), taubar)
    }
}

/// Largest admissible condition number of a map that is to be inverted.
pub const MAX_CONDITION: f64 = 1e10;

pub fn condition_number(map: &TransferMap) -> f64 {
    let sv = map.matrix.singular_values();
    let (mx, mn) = (sv.max(), sv.min());
    if mn == 0.0 {
        f64::INFINITY
    } else {
        mx / mn
    }
}

/// `V_{t,s}` with `Φ_t = V_{t,s} Φ_s`, obtained by integrating the generator
/// from `s` to `t`. Fails if `Φ_s` is too close to singular, since the
/// intermediate map is then not determined by the dynamical maps.
pub fn intermediate_map(table: &RateTable, s: f64, t: f64, evolution: &Evolution) -> Result<TransferMap, Error> {
    if !(s <= t) {
        return Err(Error::Contract(format!("intermediate map needs s ≤ t, got s = {s}, t = {t}")));
    }
    let phi_s = propagator(table, s, evolution)?;
    intermediate_map_given(table, &phi_s, t, evolution)
}

/// As [`intermediate_map`] when `Φ_s` is already known.
pub fn intermediate_map_given(
    table: &RateTable,
    phi_s: &TransferMap,
    t: f64,
    evolution: &Evolution,
) -> Result<TransferMap, Error> {
    let s = phi_s.taubar;
    let condition = condition_number(phi_s);
    if !(condition < MAX_CONDITION) {
        return Err(Error::NotBijective { taubar: s, condition });
    }
    if s == t {
        return Ok(TransferMap::identity(t));
    }
    let sol = solve_map(table, s, t, evolution)?;
    Ok(to_map(&sol.last(), t))
}

/// Choi matrix `Σᵢⱼ Φ(|i⟩⟨j|) ⊗ |i⟩⟨j|` (system ⊗ ancilla).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChoiMatrix(pub Matrix4<C64>);

pub fn choi(map: &TransferMap) -> ChoiMatrix {
    let mut c = Matrix4::<C64>::zeros();
    for i in 0..2 {
        for j in 0..2 {
            let mut e = Matrix2::<C64>::zeros();
            e[(i, j)] = C64::new(1.0, 0.0);
            let img = map.apply_operator(&e);
            for a in 0..2 {
                for b in 0..2 {
                    c[(2 * a + i, 2 * b + j)] = img[(a, b)];
                }
            }
        }
    }
    ChoiMatrix(c)
}

impl ChoiMatrix {
    pub fn eigenvalues(&self) -> [f64; 4] {
        let herm = (self.0 + self.0.adjoint()) * C64::new(0.5, 0.0);
        let ev = SymmetricEigen::new(herm).eigenvalues;
        let mut out = [ev[0], ev[1], ev[2], ev[3]];
        out.sort_by(f64::total_cmp);
        out
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CpCheck {
    pub cp: bool,
    pub min_eigenvalue: f64,
}

pub const DEFAULT_CP_TOL: f64 = 1e-10;

pub fn is_cp(choi: &ChoiMatrix, tol: f64) -> CpCheck {
    let min_eigenvalue = choi.eigenvalues()[0];
    CpCheck { cp: min_eigenvalue >= -tol, min_eigenvalue }
}
