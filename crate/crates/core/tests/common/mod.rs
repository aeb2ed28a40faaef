#![allow(dead_code)]

use bds::qmath::{hermitian_eigenvalues, kron, ComplexMatrix};
use bds::states::{bds_from_spec, BdsSpec, DensityMatrix};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normal(rng: &mut impl Rng) -> f64 {
    StandardNormal.sample(rng)
}

fn cnormal(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(normal(rng), normal(rng))
}

/// Uniform point on the probability simplex.
pub fn random_spec(rng: &mut impl Rng) -> BdsSpec {
    let e: [f64; 4] = std::array::from_fn(|_| -(1.0 - rng.random::<f64>()).ln());
    let s: f64 = e.iter().sum();
    let mut p = e.map(|x| x / s);
    p[3] = 1.0 - p[0] - p[1] - p[2];
    BdsSpec::from_array(p).expect("simplex point")
}

/// Haar-random SU(2).
pub fn random_su2(rng: &mut impl Rng) -> ComplexMatrix {
    let v: [f64; 4] = std::array::from_fn(|_| normal(rng));
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let [a, b, c, d] = v.map(|x| x / n);
    ComplexMatrix::from_rows(&[
        vec![Complex64::new(a, b), Complex64::new(c, d)],
        vec![Complex64::new(-c, d), Complex64::new(a, -b)],
    ])
    .unwrap()
}

pub fn random_local_unitary(rng: &mut impl Rng) -> ComplexMatrix {
    kron(&random_su2(rng), &random_su2(rng))
}

fn normalized_gram(g: &[Complex64], rows: usize, cols: usize) -> DensityMatrix {
    let mut m = ComplexMatrix::zeros(rows);
    for i in 0..rows {
        for j in 0..rows {
            m[(i, j)] = (0..cols)
                .map(|k| g[i * cols + k] * g[j * cols + k].conj())
                .sum();
        }
    }
    let tr = m.trace().re;
    DensityMatrix::new(2, m.scale_real(1.0 / tr).hermitian_part()).expect("gram matrix is a state")
}

/// `GG†/Tr` with `G` a 4×`rank` complex Gaussian matrix.
pub fn random_ginibre(rng: &mut impl Rng, rank: usize) -> DensityMatrix {
    let g: Vec<Complex64> = (0..4 * rank).map(|_| cnormal(rng)).collect();
    normalized_gram(&g, 4, rank)
}

pub fn random_bds_rotated(rng: &mut impl Rng) -> DensityMatrix {
    let rho = bds_from_spec(&random_spec(rng)).unwrap();
    let u = random_local_unitary(rng);
    DensityMatrix::new(2, u.conjugate(rho.matrix()).hermitian_part()).unwrap()
}

/// Cycles through full-rank, pure, rank-2 and locally rotated Bell-diagonal states.
pub fn random_state(rng: &mut impl Rng, index: usize) -> DensityMatrix {
    match index % 4 {
        0 => random_ginibre(rng, 4),
        1 => random_ginibre(rng, 1),
        2 => random_ginibre(rng, 2),
        _ => random_bds_rotated(rng),
    }
}

pub fn random_hermitian(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        m[(i, i)] = Complex64::new(normal(rng), 0.0);
        for j in i + 1..dim {
            let z = cnormal(rng);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

fn binary_entropy_of_bloch(r: f64) -> f64 {
    let h = |x: f64| if x > 1e-15 { -x * x.log2() } else { 0.0 };
    let r = r.min(1.0);
    h((1.0 + r) / 2.0) + h((1.0 - r) / 2.0)
}

/// Bloch-form data `(a, b, T)` with `T[j][k] = Tr(ρ σ_j ⊗ σ_k)`.
fn bloch_data(rho: &DensityMatrix) -> ([f64; 3], [f64; 3], [[f64; 3]; 3]) {
    let m = rho.matrix();
    let e = |i: usize, j: usize| m[(i, j)];
    // ⟨σ_x⟩ = 2 Re ρ_01, ⟨σ_y⟩ = 2 Im ρ_10, ⟨σ_z⟩ = ρ_00 − ρ_11 on each reduced block.
    let (ra01, ra10) = (e(0, 2) + e(1, 3), e(2, 0) + e(3, 1));
    let (rb01, rb10) = (e(0, 1) + e(2, 3), e(1, 0) + e(3, 2));
    let a = [
        2.0 * ra01.re,
        2.0 * ra10.im,
        (e(0, 0) + e(1, 1) - e(2, 2) - e(3, 3)).re,
    ];
    let b = [
        2.0 * rb01.re,
        2.0 * rb10.im,
        (e(0, 0) - e(1, 1) + e(2, 2) - e(3, 3)).re,
    ];
    let mut t = [[0.0; 3]; 3];
    for (j, row) in t.iter_mut().enumerate() {
        for (k, entry) in row.iter_mut().enumerate() {
            let op = kron(&bds::qmath::pauli(j + 1), &bds::qmath::pauli(k + 1));
            *entry = rho.expectation(&op);
        }
    }
    (a, b, t)
}

/// Brute-force discord: conditional Bloch vectors `r± = (a ± T n)/(1 ± b·n)`
/// maximized over a `theta_points × phi_points` grid, no local refinement.
pub fn grid_discord_oracle(rho: &DensityMatrix, theta_points: usize, phi_points: usize) -> f64 {
    let (a, b, t) = bloch_data(rho);
    let norm = |v: [f64; 3]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let s_a = binary_entropy_of_bloch(norm(a));
    let s_b = binary_entropy_of_bloch(norm(b));
    let spectrum = hermitian_eigenvalues(rho.matrix()).unwrap();
    let s_ab: f64 = spectrum
        .iter()
        .filter(|&&l| l > 1e-15)
        .map(|&l| -l * l.log2())
        .sum();
    let mutual = s_a + s_b - s_ab;

    let mut best = f64::NEG_INFINITY;
    for i in 0..theta_points {
        let theta = std::f64::consts::PI * i as f64 / (theta_points - 1) as f64;
        for j in 0..phi_points {
            let phi = 2.0 * std::f64::consts::PI * j as f64 / phi_points as f64;
            let n = [
                theta.sin() * phi.cos(),
                theta.sin() * phi.sin(),
                theta.cos(),
            ];
            let bn: f64 = (0..3).map(|k| b[k] * n[k]).sum();
            let tn: [f64; 3] = std::array::from_fn(|r| (0..3).map(|k| t[r][k] * n[k]).sum());
            let mut conditional = 0.0;
            for sign in [1.0, -1.0] {
                let q = 1.0 + sign * bn;
                if q / 2.0 < 1e-12 {
                    continue;
                }
                let r: [f64; 3] = std::array::from_fn(|k| (a[k] + sign * tn[k]) / q);
                conditional += q / 2.0 * binary_entropy_of_bloch(norm(r));
            }
            best = best.max(s_a - conditional);
        }
    }
    (mutual - best).max(0.0)
}

/// Closed-form discord of `werner(w)`.
pub fn werner_discord(w: f64) -> f64 {
    let f = |x: f64| if x > 0.0 { x * x.log2() } else { 0.0 };
    f(1.0 - w) / 4.0 - f(1.0 + w) / 2.0 + f(1.0 + 3.0 * w) / 4.0
}
