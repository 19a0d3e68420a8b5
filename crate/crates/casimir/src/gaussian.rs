//! Symplectic machinery for bosonic Gaussian states in the complex
//! (annihilation/creation) basis.
//!
//! All matrices are laid out against the basis ordering
//! `(a_1 .. a_N, a_1^† .. a_N^†)`. The symplectic form in this basis is
//! the block matrix `Ω = -i [[0, I], [-I, 0]]` and the vacuum covariance
//! matrix is `G_0 = [[0, I], [I, 0]]`.

use nalgebra::{Complex, DMatrix, DVector};
use rand::Rng;

use crate::error::{CasimirError, Result};

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;

/// Default tolerance for symplecticity / physicality checks.
pub const DEFAULT_TOL: f64 = 1e-9;

fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

/// The standard symplectic form on `n_modes` modes in the complex basis.
#[derive(Debug, Clone)]
pub struct SymplecticForm {
    pub n_modes: usize,
    pub matrix: CMat,
}

/// Returns the block form `Ω = -i [[0, I], [-I, 0]]`.
pub fn standard_form(n_modes: usize) -> SymplecticForm {
    assert!(n_modes >= 1, "n_modes must be positive");
    let n = n_modes;
    let mut m = CMat::zeros(2 * n, 2 * n);
    for i in 0..n {
        m[(i, n + i)] = c(0.0, -1.0);
        m[(n + i, i)] = c(0.0, 1.0);
    }
    SymplecticForm { n_modes, matrix: m }
}

impl SymplecticForm {
    /// Ω is its own inverse up to a sign: Ω² = I for the standard block form
    /// in the complex basis, so Ω⁻¹ = Ω.
    pub fn inverse(&self) -> CMat {
        self.matrix.clone()
    }
}

/// Second moments `G^{ab} = ⟨ξ^a ξ^b + ξ^b ξ^a⟩` of a centered Gaussian state.
#[derive(Debug, Clone)]
pub struct CovarianceMatrix {
    pub n_modes: usize,
    pub matrix: CMat,
}

impl CovarianceMatrix {
    /// Vacuum covariance `G_0 = [[0, I], [I, 0]]`.
    pub fn vacuum(n_modes: usize) -> Self {
        let n = n_modes;
        let mut m = CMat::zeros(2 * n, 2 * n);
        for i in 0..n {
            m[(i, n + i)] = c(1.0, 0.0);
            m[(n + i, i)] = c(1.0, 0.0);
        }
        CovarianceMatrix { n_modes, matrix: m }
    }

    pub fn from_matrix(matrix: CMat) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() % 2 != 0 {
            return Err(CasimirError::DimensionMismatch(format!(
                "covariance matrix must be 2N x 2N, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let sym_dev = (&matrix - matrix.transpose()).camax();
        if sym_dev > 1e-8 * (1.0 + matrix.camax()) {
            return Err(CasimirError::Unphysical(format!(
                "covariance matrix not symmetric (deviation {sym_dev:.3e})"
            )));
        }
        Ok(CovarianceMatrix {
            n_modes: matrix.nrows() / 2,
            matrix,
        })
    }

    /// Purity check: `(G Ω⁻¹)² = -I` within `tol`, relative to the squared
    /// magnitude of G (whose entries grow without bound under squeezing).
    pub fn is_pure(&self, tol: f64) -> bool {
        let omega = standard_form(self.n_modes);
        let j = &self.matrix * omega.inverse();
        let scale = 1.0 + j.camax() * j.camax();
        let j2 = &j * &j;
        let id = CMat::identity(2 * self.n_modes, 2 * self.n_modes);
        (j2 + id).camax() < tol * scale
    }
}

/// Bogoliubov coefficients `α_{nk}`, `β_{nk}` and their assembled symplectic
/// matrix `M = [[αᵀ, β†], [βᵀ, α†]]`.
#[derive(Debug, Clone)]
pub struct BogoliubovMap {
    pub alpha: CMat,
    pub beta: CMat,
}

impl BogoliubovMap {
    pub fn identity(n_modes: usize) -> Self {
        BogoliubovMap {
            alpha: CMat::identity(n_modes, n_modes),
            beta: CMat::zeros(n_modes, n_modes),
        }
    }

    /// Single-mode map embedded at `mode` of an `n_modes` system; all other
    /// modes evolve trivially.
    pub fn single_mode(n_modes: usize, mode: usize, alpha: C64, beta: C64) -> Self {
        let mut map = Self::identity(n_modes);
        map.alpha[(mode, mode)] = alpha;
        map.beta[(mode, mode)] = beta;
        map
    }

    pub fn n_modes(&self) -> usize {
        self.alpha.nrows()
    }

    /// The 2N x 2N block matrix `M = [[αᵀ, β†], [βᵀ, α†]]`.
    pub fn assembled(&self) -> CMat {
        let n = self.n_modes();
        let mut m = CMat::zeros(2 * n, 2 * n);
        let at = self.alpha.transpose();
        let bd = self.beta.adjoint();
        let bt = self.beta.transpose();
        let ad = self.alpha.adjoint();
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = at[(i, j)];
                m[(i, n + j)] = bd[(i, j)];
                m[(n + i, j)] = bt[(i, j)];
                m[(n + i, n + j)] = ad[(i, j)];
            }
        }
        m
    }
}

/// A choice of subsystem: selected modes plus an optional symplectic
/// basis change applied before restriction.
#[derive(Debug, Clone)]
pub struct Subsystem {
    pub mode_indices: Vec<usize>,
    pub mixing: Option<CMat>,
}

impl Subsystem {
    pub fn modes(indices: &[usize]) -> Self {
        Subsystem {
            mode_indices: indices.to_vec(),
            mixing: None,
        }
    }

    pub fn with_mixing(indices: &[usize], mixing: CMat) -> Self {
        Subsystem {
            mode_indices: indices.to_vec(),
            mixing: Some(mixing),
        }
    }
}

/// `true` iff `‖M Ω Mᵀ - Ω‖_max < tol`, relative to ‖M‖² so that strongly
/// squeezing maps are not rejected for plain roundoff.
pub fn is_symplectic(m: &CMat, omega: &SymplecticForm, tol: f64) -> bool {
    if m.nrows() != omega.matrix.nrows() || !m.is_square() {
        return false;
    }
    let scale = 1.0 + m.camax() * m.camax();
    let dev = (m * &omega.matrix * m.transpose() - &omega.matrix).camax();
    dev < tol * scale
}

/// Evolves a covariance matrix: `G(t) = M G Mᵀ`.
pub fn apply_bogoliubov(map: &BogoliubovMap, g: &CovarianceMatrix) -> Result<CovarianceMatrix> {
    let n = map.n_modes();
    if n != g.n_modes {
        return Err(CasimirError::DimensionMismatch(format!(
            "map has {} modes, state has {}",
            n, g.n_modes
        )));
    }
    let m = map.assembled();
    let omega = standard_form(n);
    let scale = 1.0 + m.camax() * m.camax();
    let dev = (&m * &omega.matrix * m.transpose() - &omega.matrix).camax() / scale;
    if dev > 1e-8 {
        return Err(CasimirError::NonSymplectic {
            deviation: dev,
            tol: 1e-8,
        });
    }
    let evolved = &m * &g.matrix * m.transpose();
    Ok(CovarianceMatrix {
        n_modes: n,
        matrix: evolved,
    })
}

/// Restricts `G` to the rows/columns of the subsystem's annihilation and
/// creation slots, after applying the mixing `G̃ = B G B⁻¹` when present.
pub fn restrict(g: &CovarianceMatrix, sub: &Subsystem) -> Result<CovarianceMatrix> {
    let n = g.n_modes;
    let mut seen = vec![false; n];
    for &i in &sub.mode_indices {
        if i >= n {
            return Err(CasimirError::IndexOutOfRange { index: i, n_modes: n });
        }
        if seen[i] {
            return Err(CasimirError::InvalidArgument(format!(
                "duplicate mode index {i} in subsystem"
            )));
        }
        seen[i] = true;
    }
    let mixed;
    let source = match &sub.mixing {
        Some(b) => {
            if b.nrows() != 2 * n {
                return Err(CasimirError::DimensionMismatch(format!(
                    "mixing matrix is {}x{}, state has {} modes",
                    b.nrows(),
                    b.ncols(),
                    n
                )));
            }
            let omega = standard_form(n);
            if !is_symplectic(b, &omega, 1e-8) {
                return Err(CasimirError::NonSymplectic {
                    deviation: (b * &omega.matrix * b.transpose() - &omega.matrix).camax(),
                    tol: 1e-8,
                });
            }
            let b_inv = b
                .clone()
                .try_inverse()
                .ok_or_else(|| CasimirError::Numerical("singular mixing matrix".into()))?;
            mixed = b * &g.matrix * b_inv;
            &mixed
        }
        None => &g.matrix,
    };
    let na = sub.mode_indices.len();
    let mut out = CMat::zeros(2 * na, 2 * na);
    // slot s < na is a_{A,s}, slot na + s is its creation partner
    let slot = |s: usize| {
        let mode = sub.mode_indices[s % na];
        if s < na {
            mode
        } else {
            n + mode
        }
    };
    for r in 0..2 * na {
        for cidx in 0..2 * na {
            out[(r, cidx)] = source[(slot(r), slot(cidx))];
        }
    }
    Ok(CovarianceMatrix {
        n_modes: na,
        matrix: out,
    })
}

/// Restricted linear complex structure `J_A = -G_A Ω_A⁻¹`.
#[derive(Debug, Clone)]
pub struct ComplexStructure {
    pub matrix: CMat,
}

pub fn complex_structure(g_a: &CovarianceMatrix, omega_a: &SymplecticForm) -> Result<ComplexStructure> {
    if g_a.n_modes != omega_a.n_modes {
        return Err(CasimirError::DimensionMismatch(format!(
            "G_A has {} modes, Ω_A has {}",
            g_a.n_modes, omega_a.n_modes
        )));
    }
    Ok(ComplexStructure {
        matrix: -(&g_a.matrix * omega_a.inverse()),
    })
}

/// Symplectic eigenvalues ν_k ≥ 1 of the restricted state, i.e. the
/// eigenvalue magnitudes of `i J_A`.
///
/// Computed by transforming to the real quadrature basis and reading the
/// singular values of the antisymmetric matrix `σ^{1/2} Ω σ^{1/2}`, which
/// avoids a general complex eigensolver. Values in `[1 - tol, 1]` are
/// clamped to 1; smaller values are an error.
pub fn symplectic_eigenvalues(g_a: &CovarianceMatrix) -> Result<Vec<f64>> {
    let sigma = to_quadrature_basis(g_a)?;
    let n = g_a.n_modes;
    let eig = sigma.clone().symmetric_eigen();
    let mut sqrt_vals = DVector::zeros(2 * n);
    for i in 0..2 * n {
        let lam = eig.eigenvalues[i];
        if lam < -1e-9 {
            return Err(CasimirError::Unphysical(format!(
                "covariance matrix not positive (eigenvalue {lam:.3e})"
            )));
        }
        sqrt_vals[i] = lam.max(0.0).sqrt();
    }
    let sqrt_sigma = &eig.eigenvectors * DMatrix::from_diagonal(&sqrt_vals) * eig.eigenvectors.transpose();
    let mut omega_qp = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        omega_qp[(i, n + i)] = 1.0;
        omega_qp[(n + i, i)] = -1.0;
    }
    let a = &sqrt_sigma * omega_qp * &sqrt_sigma;
    let svd = a.svd(false, false);
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|x, y| y.partial_cmp(x).unwrap());
    // roundoff in the σ^{1/2} products is absolute at the scale ‖σ‖², so
    // the ν ≥ 1 bound can only be enforced up to that
    let scale_max = sigma.amax();
    let nu_tol = DEFAULT_TOL * (1.0 + scale_max * scale_max);
    // singular values come in pairs (ν, ν); average each pair
    let mut nus = Vec::with_capacity(n);
    for k in 0..n {
        let nu = 0.5 * (s[2 * k] + s[2 * k + 1]);
        if nu < 1.0 - nu_tol {
            return Err(CasimirError::Unphysical(format!(
                "symplectic eigenvalue {nu} below 1"
            )));
        }
        nus.push(nu.max(1.0));
    }
    Ok(nus)
}

/// Real quadrature-basis form of a complex-basis covariance matrix.
///
/// With `ξ_c = T ξ_r`, `T = (1/√2) [[I, iI], [I, -iI]]`, the covariance
/// transforms as `σ = T† G T*`; for a physical state σ is real symmetric.
fn to_quadrature_basis(g: &CovarianceMatrix) -> Result<DMatrix<f64>> {
    let n = g.n_modes;
    let s = 1.0 / 2f64.sqrt();
    let mut t = CMat::zeros(2 * n, 2 * n);
    for i in 0..n {
        t[(i, i)] = c(s, 0.0);
        t[(i, n + i)] = c(0.0, s);
        t[(n + i, i)] = c(s, 0.0);
        t[(n + i, n + i)] = c(0.0, -s);
    }
    let gr = t.adjoint() * &g.matrix * t.conjugate();
    let scale = 1.0 + gr.camax();
    let mut out = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..2 * n {
        for j in 0..2 * n {
            if gr[(i, j)].im.abs() > 1e-8 * scale {
                return Err(CasimirError::Unphysical(format!(
                    "covariance matrix has non-real quadrature form (imag {:.3e})",
                    gr[(i, j)].im
                )));
            }
            out[(i, j)] = gr[(i, j)].re;
        }
    }
    // symmetrize away roundoff
    let out = 0.5 * (&out + out.transpose());
    Ok(out)
}

/// Log-determinant of a complex matrix via LU with sign/phase tracking.
/// Returns `(log|det|, phase)`.
fn log_det(m: &CMat) -> Result<(f64, f64)> {
    let lu = m.clone().lu();
    let mut log_abs = 0.0;
    let mut phase = if lu.p().len() % 2 == 1 { std::f64::consts::PI } else { 0.0 };
    let u = lu.u();
    for i in 0..u.nrows() {
        let d = u[(i, i)];
        if d.norm() == 0.0 {
            return Err(CasimirError::Numerical("singular matrix in log_det".into()));
        }
        log_abs += d.norm().ln();
        phase += d.arg();
    }
    Ok((log_abs, phase))
}

fn wrap_phase(p: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut w = p % two_pi;
    if w > std::f64::consts::PI {
        w -= two_pi;
    } else if w < -std::f64::consts::PI {
        w += two_pi;
    }
    w
}

/// Rényi entropy (order 2): `R_A = ½ log(det G_A / det Ω_A) = Σ log ν_i`.
///
/// Evaluated through the symplectic eigenvalues rather than the raw
/// determinant: the determinant route loses one digit per e-fold of
/// squeezing to cancellation, while the ν_i stay well conditioned.
pub fn renyi_entropy(g_a: &CovarianceMatrix, omega_a: &SymplecticForm) -> Result<f64> {
    if g_a.n_modes != omega_a.n_modes {
        return Err(CasimirError::DimensionMismatch(format!(
            "G_A has {} modes, Ω_A has {}",
            g_a.n_modes, omega_a.n_modes
        )));
    }
    let nus = symplectic_eigenvalues(g_a)?;
    Ok(nus.iter().map(|nu| nu.ln()).sum())
}

/// `R_A` from the determinant directly; accurate only for moderate
/// squeezing, kept as an independent cross-check of `renyi_entropy`.
pub fn renyi_entropy_det(g_a: &CovarianceMatrix, omega_a: &SymplecticForm) -> Result<f64> {
    if g_a.n_modes != omega_a.n_modes {
        return Err(CasimirError::DimensionMismatch(format!(
            "G_A has {} modes, Ω_A has {}",
            g_a.n_modes, omega_a.n_modes
        )));
    }
    let (log_abs_g, phase_g) = log_det(&g_a.matrix)?;
    // det Ω_A = (-1)^{N_A}: |det| = 1, phase = π N_A
    let ratio_phase = wrap_phase(phase_g - std::f64::consts::PI * g_a.n_modes as f64);
    if ratio_phase.abs() > 1e-6 {
        return Err(CasimirError::Unphysical(format!(
            "det G_A / det Ω_A is not positive real (phase {ratio_phase:.3e})"
        )));
    }
    let r = 0.5 * log_abs_g;
    if r < -DEFAULT_TOL {
        return Err(CasimirError::Unphysical(format!(
            "negative Rényi entropy {r:.3e}"
        )));
    }
    Ok(r.max(0.0))
}

/// Per-mode entropy summand at symplectic eigenvalue ν ≥ 1, with the ν = 1
/// limit defined as exactly 0.
fn entropy_summand(nu: f64) -> f64 {
    if nu <= 1.0 {
        return 0.0;
    }
    let p = 0.5 * (nu + 1.0);
    let q = 0.5 * (nu - 1.0);
    p * p.ln() - q * q.ln()
}

/// Von Neumann entanglement entropy of the restricted state, evaluated via
/// the symplectic eigenvalues of `i J_A`.
pub fn entanglement_entropy(g_a: &CovarianceMatrix, omega_a: &SymplecticForm) -> Result<f64> {
    if g_a.n_modes != omega_a.n_modes {
        return Err(CasimirError::DimensionMismatch(format!(
            "G_A has {} modes, Ω_A has {}",
            g_a.n_modes, omega_a.n_modes
        )));
    }
    let nus = symplectic_eigenvalues(g_a)?;
    Ok(nus.into_iter().map(entropy_summand).sum())
}

/// Entanglement entropy of a single mode from its Rényi entropy,
/// `S = s(e^R)` with `s(x)` the standard single-mode entropy function.
/// Asymptotically `S ≈ R + 1 - log 2`.
pub fn entropy_from_renyi_single_mode(r: f64) -> f64 {
    entropy_summand(r.exp())
}

/// A random symplectic matrix built by composing phase rotations, squeezers
/// and two-mode mixers. Used for invariant tests and subsystem sampling.
pub fn random_symplectic<R: Rng>(n_modes: usize, rng: &mut R) -> CMat {
    let n = n_modes;
    let mut m = CMat::identity(2 * n, 2 * n);

    // per-mode phase + squeeze
    for i in 0..n {
        let phi: f64 = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
        let r: f64 = rng.gen_range(0.0..1.0);
        let theta: f64 = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
        let mut block = CMat::identity(2 * n, 2 * n);
        block[(i, i)] = c(phi.cos(), phi.sin()) * c(r.cosh(), 0.0);
        block[(i, n + i)] = c(theta.cos(), theta.sin()) * c(r.sinh(), 0.0);
        block[(n + i, i)] = c(theta.cos(), -theta.sin()) * c(r.sinh(), 0.0);
        block[(n + i, n + i)] = c(phi.cos(), -phi.sin()) * c(r.cosh(), 0.0);
        m = block * m;
    }
    // pairwise beam splitters
    for i in 0..n {
        for j in (i + 1)..n {
            let t: f64 = rng.gen_range(0.0..std::f64::consts::PI);
            let (ct, st) = (t.cos(), t.sin());
            let mut block = CMat::identity(2 * n, 2 * n);
            block[(i, i)] = c(ct, 0.0);
            block[(i, j)] = c(st, 0.0);
            block[(j, i)] = c(-st, 0.0);
            block[(j, j)] = c(ct, 0.0);
            block[(n + i, n + i)] = c(ct, 0.0);
            block[(n + i, n + j)] = c(st, 0.0);
            block[(n + j, n + i)] = c(-st, 0.0);
            block[(n + j, n + j)] = c(ct, 0.0);
            m = block * m;
        }
    }
    m
}
