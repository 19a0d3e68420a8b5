//! Resonance in d ≥ 2 spatial dimensions: mode frequencies, the resonance
//! strength γ, the single-resonant-mode flow, beam-splitter-mixed subsystem
//! entropies, Lyapunov/Floquet exponents, and the generic-subsystem
//! exponent Λ_A from volume growth.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::{CasimirError, Result};
use crate::gaussian::{self, restrict, BogoliubovMap, CovarianceMatrix, Subsystem, C64, CMat};

/// Above this ε the slow-variation approximation behind everything in this
/// module becomes doubtful.
pub const EPSILON_VALIDITY: f64 = 0.1;

const GENERICITY_TOL: f64 = 1e-8;

/// A d-dimensional box cavity with an oscillating wall of relative
/// amplitude ε on the first axis.
#[derive(Debug, Clone)]
pub struct CavityGeometry {
    lengths: Vec<f64>,
    epsilon: f64,
}

impl CavityGeometry {
    pub fn new(lengths: Vec<f64>, epsilon: f64) -> Result<Self> {
        if lengths.is_empty() {
            return Err(CasimirError::InvalidArgument("cavity needs at least one length".into()));
        }
        if lengths.iter().any(|&l| !(l > 0.0)) {
            return Err(CasimirError::InvalidArgument(format!(
                "all cavity lengths must be positive, got {lengths:?}"
            )));
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(CasimirError::InvalidArgument(format!(
                "oscillation amplitude must satisfy 0 < ε < 1, got {epsilon}"
            )));
        }
        Ok(CavityGeometry { lengths, epsilon })
    }

    pub fn dims(&self) -> usize {
        self.lengths.len()
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// True when ε is small enough for the averaged treatment.
    pub fn slow_variation_ok(&self) -> bool {
        self.epsilon < EPSILON_VALIDITY
    }
}

/// Normal-mode frequency ω_k = π√(Σ (k_i/L_i)²) of the static cavity.
pub fn mode_frequency(geom: &CavityGeometry, k: &[usize]) -> Result<f64> {
    if k.len() != geom.dims() {
        return Err(CasimirError::DimensionMismatch(format!(
            "mode index has {} components, cavity has {} dimensions",
            k.len(),
            geom.dims()
        )));
    }
    if k.iter().any(|&ki| ki == 0) {
        return Err(CasimirError::InvalidArgument(format!(
            "all mode-index components must be ≥ 1, got {k:?}"
        )));
    }
    let sum: f64 = k
        .iter()
        .zip(&geom.lengths)
        .map(|(&ki, &li)| (ki as f64 / li).powi(2))
        .sum();
    Ok(PI * sum.sqrt())
}

/// Resonant mode data: its frequency and the dimensionless strength γ.
#[derive(Debug, Clone)]
pub struct ResonanceParams {
    pub mode: Vec<usize>,
    pub omega_r: f64,
    pub gamma: f64,
}

impl ResonanceParams {
    /// The exponential rate ω_r γ appearing in all growth laws.
    pub fn rate(&self) -> f64 {
        self.omega_r * self.gamma
    }
}

/// γ = (ε/2) π² (r₁/L₁)² / ω_r², which in a 2-D cavity reduces to
/// (ε/2) L₂²/(L₁² + L₂²).
pub fn resonance_gamma(geom: &CavityGeometry, r: &[usize]) -> Result<ResonanceParams> {
    let omega_r = mode_frequency(geom, r)?;
    let gamma = 0.5 * geom.epsilon * (PI * r[0] as f64 / geom.lengths[0]).powi(2) / (omega_r * omega_r);
    Ok(ResonanceParams {
        mode: r.to_vec(),
        omega_r,
        gamma,
    })
}

/// One-mode flow of the resonant mode together with its generator.
#[derive(Debug, Clone)]
pub struct ResonantFlow {
    pub map: BogoliubovMap,
    pub generator: CMat,
}

/// α_r = cosh(ω_rγt), β_r = i sinh(ω_rγt); generated by
/// K_r = [[0, −iω_rγ], [iω_rγ, 0]] via M_r(t) = exp(tK_r).
pub fn resonant_flow(params: &ResonanceParams, t: f64) -> Result<ResonantFlow> {
    resonant_flow_signed(params, t, 1.0)
}

/// Same flow with β_r = ±i sinh; all entropies are sign-independent.
pub fn resonant_flow_signed(params: &ResonanceParams, t: f64, beta_sign: f64) -> Result<ResonantFlow> {
    if t < 0.0 {
        return Err(CasimirError::InvalidArgument(format!("t must be ≥ 0, got {t}")));
    }
    let s = params.rate() * t;
    let map = BogoliubovMap::single_mode(1, 0, C64::new(s.cosh(), 0.0), C64::new(0.0, beta_sign * s.sinh()));
    let c = params.rate();
    let mut generator = CMat::zeros(2, 2);
    generator[(0, 1)] = C64::new(0.0, -beta_sign * c);
    generator[(1, 0)] = C64::new(0.0, beta_sign * c);
    Ok(ResonantFlow { map, generator })
}

/// Covariance of the resonant mode alone:
/// G_r = [[−i sinh 2s, cosh 2s], [cosh 2s, i sinh 2s]], s = ω_rγt.
/// Pure for all t (−det G_r = 1).
pub fn resonant_covariance(params: &ResonanceParams, t: f64) -> Result<CovarianceMatrix> {
    let flow = resonant_flow(params, t)?;
    gaussian::apply_bogoliubov(&flow.map, &CovarianceMatrix::vacuum(1))
}

/// Entropies of the beam-splitter-mixed mode b₁ = (a_r + a_s)/√2.
#[derive(Debug, Clone)]
pub struct MixedEntropies {
    pub renyi: f64,
    pub entropy: f64,
    pub g_a: CovarianceMatrix,
}

/// Evolves an n_modes vacuum with the resonant flow on mode 0, mixes mode 0
/// with the spectator by a balanced beam splitter, and restricts to the
/// first mixed mode.
///
/// The returned entropies are the closed forms R_A = log cosh(ω_rγt) and
/// the matching von Neumann value: the restricted matrix `g_a` stores
/// (cosh 2s + 1)/2 in a double, so beyond ω_rγt ≈ 18 it can no longer
/// represent the state's mixedness and any determinant-style evaluation on
/// it degrades. Tests assert that entropies recomputed from `g_a` agree
/// with the closed forms wherever the representation has the digits.
pub fn mixed_subsystem_entropies(
    params: &ResonanceParams,
    t: f64,
    spectator: usize,
    n_modes: usize,
) -> Result<MixedEntropies> {
    mixed_subsystem_entropies_signed(params, t, spectator, n_modes, 1.0)
}

pub fn mixed_subsystem_entropies_signed(
    params: &ResonanceParams,
    t: f64,
    spectator: usize,
    n_modes: usize,
    beta_sign: f64,
) -> Result<MixedEntropies> {
    if spectator == 0 || spectator >= n_modes {
        return Err(CasimirError::InvalidArgument(format!(
            "spectator mode must differ from the resonant mode 0 and lie below {n_modes}, got {spectator}"
        )));
    }
    let s = params.rate() * t;
    let flow = BogoliubovMap::single_mode(
        n_modes,
        0,
        C64::new(s.cosh(), 0.0),
        C64::new(0.0, beta_sign * s.sinh()),
    );
    let g_e = gaussian::apply_bogoliubov(&flow, &CovarianceMatrix::vacuum(n_modes))?;
    let b = beam_splitter(n_modes, 0, spectator);
    let sub = Subsystem::with_mixing(&[0], b);
    let g_a = restrict(&g_e, &sub)?;
    let renyi = s.cosh().ln();
    let entropy = gaussian::entropy_from_renyi_single_mode(renyi);
    Ok(MixedEntropies { renyi, entropy, g_a })
}

/// Balanced beam splitter between modes i and j on the full complex basis:
/// b_i = (a_i + a_j)/√2, b_j = (a_i − a_j)/√2.
pub fn beam_splitter(n_modes: usize, i: usize, j: usize) -> CMat {
    let h = 1.0 / 2f64.sqrt();
    let mut b = CMat::identity(2 * n_modes, 2 * n_modes);
    for off in [0, n_modes] {
        b[(off + i, off + i)] = C64::new(h, 0.0);
        b[(off + i, off + j)] = C64::new(h, 0.0);
        b[(off + j, off + i)] = C64::new(h, 0.0);
        b[(off + j, off + j)] = C64::new(-h, 0.0);
    }
    b
}

/// Eigenvalues of a 2×2 generator, sorted descending by real part. For the
/// resonant generator these are the Lyapunov exponents ±ω_rγ.
pub fn lyapunov_spectrum(generator: &CMat) -> Result<(f64, f64)> {
    if generator.nrows() != 2 || generator.ncols() != 2 {
        return Err(CasimirError::DimensionMismatch(format!(
            "generator must be 2×2, got {}×{}",
            generator.nrows(),
            generator.ncols()
        )));
    }
    let (a, b) = (generator[(0, 0)], generator[(0, 1)]);
    let (c, d) = (generator[(1, 0)], generator[(1, 1)]);
    let half_tr = (a + d) * 0.5;
    let disc = ((a - d) * (a - d) + b * c * 4.0).sqrt();
    let l1 = half_tr + disc * 0.5;
    let l2 = half_tr - disc * 0.5;
    if l1.im.abs() > 1e-10 || l2.im.abs() > 1e-10 {
        return Err(CasimirError::Numerical(format!(
            "generator eigenvalues are not real: {l1}, {l2}"
        )));
    }
    if l1.re >= l2.re {
        Ok((l1.re, l2.re))
    } else {
        Ok((l2.re, l1.re))
    }
}

/// Effective drive amplitude of the resonant-mode Mathieu equation,
/// α_drive = 2επ²/L₁².
pub fn drive_amplitude(geom: &CavityGeometry) -> f64 {
    2.0 * geom.epsilon * PI * PI / (geom.lengths[0] * geom.lengths[0])
}

/// Floquet exponent of the resonant Mathieu equation (drive at Ω = 2ω₀):
/// μ = α_drive/(4ω₀). For the cavity drive this equals ω_rγ.
pub fn mathieu_floquet_mu(omega0: f64, alpha_drive: f64) -> Result<f64> {
    if !(omega0 > 0.0) {
        return Err(CasimirError::InvalidArgument(format!("ω₀ must be positive, got {omega0}")));
    }
    if alpha_drive < 0.0 {
        return Err(CasimirError::InvalidArgument(format!(
            "drive amplitude must be ≥ 0, got {alpha_drive}"
        )));
    }
    Ok(alpha_drive / (4.0 * omega0))
}

/// Symplectic pairing of two covectors in the complex basis,
/// Ω(u, v) = uᵀ Ω v with Ω = [[0, −iI], [iI, 0]] (bilinear, no conjugation).
pub fn symplectic_pairing(u: &DVector<C64>, v: &DVector<C64>) -> C64 {
    let n = u.len() / 2;
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..n {
        acc += C64::new(0.0, 1.0) * (u[n + k] * v[k] - u[k] * v[n + k]);
    }
    acc
}

/// The unstable/stable eigen-covectors of the resonant generator, embedded
/// at `mode` in an n_modes phase space: ℓ₁ = (1, i)/√2, ℓ₂ = (−1, i)/√2.
pub fn resonant_covector_pair(n_modes: usize, mode: usize) -> (DVector<C64>, DVector<C64>) {
    let h = 1.0 / 2f64.sqrt();
    let mut l1 = DVector::zeros(2 * n_modes);
    let mut l2 = DVector::zeros(2 * n_modes);
    l1[mode] = C64::new(h, 0.0);
    l1[n_modes + mode] = C64::new(0.0, h);
    l2[mode] = C64::new(-h, 0.0);
    l2[n_modes + mode] = C64::new(0.0, h);
    (l1, l2)
}

/// A subsystem specified by a Darboux basis of dual covectors, with its
/// genericity flags (computed, not assumed).
#[derive(Debug, Clone)]
pub struct GenericSubsystem {
    pub covectors: Vec<DVector<C64>>,
    pub n_modes: usize,
    pub resonant_mode: usize,
    pub satisfies_i: bool,
    pub satisfies_ii: bool,
}

/// Validates the Darboux property of the covectors (consecutive pairs with
/// Ω(θ_{2i}, θ_{2i+1}) = 1, all other pairings 0) and computes the flags
/// against the stable covector ℓ₂ of `resonant_mode`.
pub fn subsystem_from_covectors(
    covectors: Vec<DVector<C64>>,
    resonant_mode: usize,
) -> Result<GenericSubsystem> {
    if covectors.is_empty() || covectors.len() % 2 != 0 {
        return Err(CasimirError::InvalidArgument(format!(
            "subsystem needs an even, positive number of covectors, got {}",
            covectors.len()
        )));
    }
    let dim = covectors[0].len();
    if dim % 2 != 0 || covectors.iter().any(|v| v.len() != dim) {
        return Err(CasimirError::DimensionMismatch(
            "covectors must share one even phase-space dimension".into(),
        ));
    }
    let n_modes = dim / 2;
    if resonant_mode >= n_modes {
        return Err(CasimirError::IndexOutOfRange {
            index: resonant_mode,
            n_modes,
        });
    }
    let m = covectors.len();
    for i in 0..m {
        for j in 0..m {
            let p = symplectic_pairing(&covectors[i], &covectors[j]);
            let expect = if i % 2 == 0 && j == i + 1 {
                C64::new(1.0, 0.0)
            } else if i % 2 == 1 && j == i - 1 {
                C64::new(-1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            };
            if (p - expect).norm() > 1e-8 {
                return Err(CasimirError::NonSymplectic {
                    deviation: (p - expect).norm(),
                    tol: 1e-8,
                });
            }
        }
    }
    let (_, l2) = resonant_covector_pair(n_modes, resonant_mode);
    // (i): ℓ₂ pairs nontrivially with the subsystem dual space
    let satisfies_i = covectors
        .iter()
        .any(|th| symplectic_pairing(th, &l2).norm() > GENERICITY_TOL);
    // (ii): the A*-component of ℓ₂ (Darboux expansion) does not exhaust it
    let mut proj = DVector::zeros(dim);
    for pair in covectors.chunks(2) {
        let c_second = symplectic_pairing(&l2, &pair[1]);
        let c_first = symplectic_pairing(&l2, &pair[0]);
        proj += &pair[0] * c_second - &pair[1] * c_first;
    }
    let satisfies_ii = (&l2 - proj).norm() > GENERICITY_TOL;
    Ok(GenericSubsystem {
        covectors,
        n_modes,
        resonant_mode,
        satisfies_i,
        satisfies_ii,
    })
}

/// Darboux pair of the beam-splitter-mixed mode (a_r + a_s)/√2.
pub fn mixed_covector_pair(n_modes: usize, r: usize, s: usize) -> (DVector<C64>, DVector<C64>) {
    let (l1r, l2r) = resonant_covector_pair(n_modes, r);
    let (l1s, l2s) = resonant_covector_pair(n_modes, s);
    let h = 1.0 / 2f64.sqrt();
    ((l1r + l1s) * C64::new(h, 0.0), (l2r + l2s) * C64::new(h, 0.0))
}

/// A random one-mode subsystem supported on modes {r, s}: a random real
/// combination of the four eigen-covectors, rescaled to Ω(θ₁, θ₂) = 1.
pub fn random_subsystem<R: Rng>(
    n_modes: usize,
    r: usize,
    s: usize,
    rng: &mut R,
) -> Result<GenericSubsystem> {
    let (l1r, l2r) = resonant_covector_pair(n_modes, r);
    let (l1s, l2s) = resonant_covector_pair(n_modes, s);
    let basis = [l1r, l2r, l1s, l2s];
    loop {
        let draw = |rng: &mut R| -> DVector<C64> {
            let mut v = DVector::zeros(2 * n_modes);
            for b in &basis {
                v += b * C64::new(rng.gen_range(-1.0..1.0), 0.0);
            }
            v
        };
        let th1 = draw(rng);
        let mut th2 = draw(rng);
        let p = symplectic_pairing(&th1, &th2);
        if p.norm() < 0.1 {
            continue; // nearly degenerate draw; try again
        }
        th2 /= p;
        return subsystem_from_covectors(vec![th1, th2], r);
    }
}

/// Full-space flow matrix: resonant squeeze on `resonant_mode`, identity on
/// every spectator. Uses the β = −i sinh sign, under which ℓ₁ = (1, i)/√2
/// is the expanding covector; Λ_A does not depend on the choice.
pub fn full_flow(params: &ResonanceParams, n_modes: usize, resonant_mode: usize, t: f64) -> CMat {
    let s = params.rate() * t;
    BogoliubovMap::single_mode(
        n_modes,
        resonant_mode,
        C64::new(s.cosh(), 0.0),
        C64::new(0.0, -s.sinh()),
    )
    .assembled()
}

/// Least-squares slope of y against x.
pub fn linear_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let xm = xs.iter().sum::<f64>() / n;
    let ym = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        num += (x - xm) * (y - ym);
        den += (x - xm) * (x - xm);
    }
    num / den
}

/// Subsystem exponent Λ_A: the asymptotic growth rate of the volume of the
/// evolved dual parallelepiped, Vol(Mᵀ(t)𝒟_A) via the Gram determinant,
/// fitted on a log scale over the final half of [0, t_max].
pub fn subsystem_exponent(
    sub: &GenericSubsystem,
    params: &ResonanceParams,
    t_max: f64,
    n_samples: usize,
) -> Result<f64> {
    if n_samples < 4 {
        return Err(CasimirError::InvalidArgument(format!(
            "need at least 4 samples for the volume fit, got {n_samples}"
        )));
    }
    let m = sub.covectors.len();
    let mut ts = Vec::with_capacity(n_samples);
    let mut log_vols = Vec::with_capacity(n_samples);
    for j in 0..n_samples {
        let t = t_max * j as f64 / (n_samples - 1) as f64;
        let flow_t = full_flow(params, sub.n_modes, sub.resonant_mode, t).transpose();
        let mut theta = DMatrix::zeros(2 * sub.n_modes, m);
        for (c, th) in sub.covectors.iter().enumerate() {
            theta.set_column(c, &(&flow_t * th));
        }
        // volume = |det R| from a QR factorization; the Gram determinant
        // would square the column scales and lose the stable directions
        let qr = theta.qr();
        let r_diag = qr.r();
        let mut log_vol = 0.0;
        for c in 0..m {
            let d = r_diag[(c, c)].norm();
            if !(d > 0.0) {
                return Err(CasimirError::Numerical(format!(
                    "degenerate evolved basis at t = {t} (pivot {c})"
                )));
            }
            log_vol += d.ln();
        }
        ts.push(t);
        log_vols.push(log_vol);
    }
    let half = n_samples / 2;
    Ok(linear_slope(&ts[half..], &log_vols[half..]))
}
