use std::f64::consts::PI;

use num_complex::Complex64;

use super::clamp_round_off;
use crate::error::{Error, Result};
use crate::qmath::{entropy_of_spectrum, hermitian_eigenvalues, pauli, ComplexMatrix};
use crate::states::DensityMatrix;

/// Settings for the measurement search on qubit b.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscordOptions {
    /// Grid points over `θ ∈ [0, π]`, endpoints included.
    pub theta_points: usize,
    /// Grid points over `φ ∈ [0, 2π)`.
    pub phi_points: usize,
    /// Number of best grid points used as Nelder–Mead starts.
    pub refine_starts: usize,
    /// Stop when the simplex's objective spread falls below this.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for DiscordOptions {
    fn default() -> Self {
        Self {
            theta_points: 64,
            phi_points: 128,
            refine_starts: 3,
            tolerance: 1e-8,
            max_iterations: 2000,
        }
    }
}

/// Best projective measurement found on qubit b.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementOptimum {
    pub theta: f64,
    pub phi: f64,
    /// Mutual information after the measurement.
    pub mutual_information: f64,
}

/// `Tr(M σ_j)` for each 2×2 b-block `M` of ρ, indexed by the a-entry `(i, i')`.
struct BlockTraces {
    t: [[[Complex64; 4]; 2]; 2],
}

impl BlockTraces {
    fn new(rho: &ComplexMatrix) -> Self {
        let paulis = [pauli(0), pauli(1), pauli(2), pauli(3)];
        let mut t = [[[Complex64::new(0.0, 0.0); 4]; 2]; 2];
        for (i, row) in t.iter_mut().enumerate() {
            for (ip, entry) in row.iter_mut().enumerate() {
                for (j, s) in paulis.iter().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for k in 0..2 {
                        for kp in 0..2 {
                            acc += rho[(2 * i + k, 2 * ip + kp)] * s[(kp, k)];
                        }
                    }
                    entry[j] = acc;
                }
            }
        }
        Self { t }
    }

    /// `H(p) − S(B₊ ⊕ B₋)`, where `B± = Tr_b[(I ⊗ Π±) ρ]` are the unnormalized
    /// a-states left by outcome ± of `n̂·σ` on b.
    fn objective(&self, theta: f64, phi: f64) -> f64 {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        let n = [st * cp, st * sp, ct];
        let mut spectrum = [0.0; 4];
        let mut probs = [0.0; 2];
        for (s, sign) in [1.0, -1.0].into_iter().enumerate() {
            let block = |i: usize, ip: usize| {
                let e = &self.t[i][ip];
                (e[0] + (e[1] * n[0] + e[2] * n[1] + e[3] * n[2]) * sign) * 0.5
            };
            let (a, d, b) = (block(0, 0).re, block(1, 1).re, block(0, 1));
            let mean = 0.5 * (a + d);
            let radius = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
            spectrum[2 * s] = mean + radius;
            spectrum[2 * s + 1] = mean - radius;
            probs[s] = a + d;
        }
        entropy_of_spectrum(&probs) - entropy_of_spectrum(&spectrum)
    }
}

/// Entropy in bits of the spectrum of `m`, ignoring eigenvalues below the
/// entropy cutoff. Unlike `vn_entropy` this accepts raw tomography output.
fn spectral_entropy(m: &ComplexMatrix) -> Result<f64> {
    Ok(entropy_of_spectrum(&hermitian_eigenvalues(m)?))
}

/// `I(ρ) = S(ρ_a) + S(ρ_b) − S(ρ)` in bits.
pub fn mutual_information(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubits(rho)?;
    let s_a = spectral_entropy(rho.reduce(&[0])?.matrix())?;
    let s_b = spectral_entropy(rho.reduce(&[1])?.matrix())?;
    let s_ab = spectral_entropy(rho.matrix())?;
    Ok(s_a + s_b - s_ab)
}

fn require_two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.n_qubits() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "two-qubit state required, got {} qubits",
            rho.n_qubits()
        )));
    }
    Ok(())
}

/// Maximizes the post-measurement mutual information over rank-1 projective
/// measurements `Π±(n̂) = (I ± n̂·σ)/2` on qubit b.
pub fn optimize_measurement(
    rho: &DensityMatrix,
    opts: &DiscordOptions,
) -> Result<MeasurementOptimum> {
    require_two_qubits(rho)?;
    if opts.theta_points < 2 || opts.phi_points < 1 || opts.refine_starts == 0 {
        return Err(Error::OptimizerFailure(format!(
            "degenerate search grid {opts:?}"
        )));
    }
    let traces = BlockTraces::new(rho.matrix());
    let s_a = spectral_entropy(rho.reduce(&[0])?.matrix())?;

    let d_theta = PI / (opts.theta_points - 1) as f64;
    let d_phi = 2.0 * PI / opts.phi_points as f64;
    let mut grid = Vec::with_capacity(opts.theta_points * opts.phi_points);
    for i in 0..opts.theta_points {
        for j in 0..opts.phi_points {
            let (theta, phi) = (i as f64 * d_theta, j as f64 * d_phi);
            let f = traces.objective(theta, phi);
            if !f.is_finite() {
                return Err(Error::OptimizerFailure(format!(
                    "objective is {f} at theta={theta}, phi={phi}"
                )));
            }
            grid.push((f, theta, phi));
        }
    }
    // Stable sort keeps scan order (lexicographic in θ, φ) among ties.
    grid.sort_by(|x, y| y.0.total_cmp(&x.0));

    let mut best = grid[0];
    for &(_, theta, phi) in grid.iter().take(opts.refine_starts) {
        let start = [theta, phi];
        let (point, value) = nelder_mead(
            |x| -traces.objective(x[0], x[1]),
            start,
            [d_theta, d_phi],
            opts.tolerance,
            opts.max_iterations,
        )?;
        if -value > best.0 {
            best = (-value, point[0], point[1]);
        }
    }
    Ok(MeasurementOptimum {
        theta: best.1,
        phi: best.2,
        mutual_information: s_a + best.0,
    })
}

/// Ollivier–Zurek discord with the measurement on qubit b, clamped at 0.
pub fn discord_oz(rho: &DensityMatrix, opts: &DiscordOptions) -> Result<f64> {
    let total = mutual_information(rho)?;
    let classical = optimize_measurement(rho, opts)?.mutual_information;
    Ok(clamp_round_off(total - classical).max(0.0))
}

/// Downhill simplex in two variables.
fn nelder_mead(
    f: impl Fn([f64; 2]) -> f64,
    start: [f64; 2],
    step: [f64; 2],
    tolerance: f64,
    max_iterations: usize,
) -> Result<([f64; 2], f64)> {
    let eval = |x: [f64; 2]| {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::OptimizerFailure(format!(
                "objective is {v} at {x:?}"
            )))
        }
    };
    let lerp =
        |a: [f64; 2], b: [f64; 2], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];

    let mut simplex = [
        start,
        [start[0] + step[0], start[1]],
        [start[0], start[1] + step[1]],
    ];
    let mut values = [eval(simplex[0])?, eval(simplex[1])?, eval(simplex[2])?];

    for _ in 0..max_iterations {
        let mut order = [0, 1, 2];
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.map(|i| simplex[i]);
        values = order.map(|i| values[i]);
        if values[2] - values[0] < tolerance {
            break;
        }

        let centroid = lerp(simplex[0], simplex[1], 0.5);
        let reflected = lerp(centroid, simplex[2], -1.0);
        let fr = eval(reflected)?;
        if fr < values[0] {
            let expanded = lerp(centroid, simplex[2], -2.0);
            let fe = eval(expanded)?;
            (simplex[2], values[2]) = if fe < fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
        } else if fr < values[1] {
            (simplex[2], values[2]) = (reflected, fr);
        } else {
            let (contracted, fc) = if fr < values[2] {
                let c = lerp(centroid, reflected, 0.5);
                (c, eval(c)?)
            } else {
                let c = lerp(centroid, simplex[2], 0.5);
                (c, eval(c)?)
            };
            if fc < values[2].min(fr) {
                (simplex[2], values[2]) = (contracted, fc);
            } else {
                for i in 1..3 {
                    simplex[i] = lerp(simplex[0], simplex[i], 0.5);
                    values[i] = eval(simplex[i])?;
                }
            }
        }
    }
    let best = (0..3)
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .unwrap();
    Ok((simplex[best], values[best]))
}
