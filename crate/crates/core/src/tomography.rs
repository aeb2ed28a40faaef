//! Pauli-basis tomography of two-qubit states: Born probabilities, seeded
//! finite-shot sampling, correlation estimation and linear inversion.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::{hermitian_eigen, kron, pauli, ComplexMatrix, Pauli};
use crate::states::{DensityMatrix, STATE_EIGEN_FLOOR};

/// Outcome order used everywhere: `(+,+), (+,−), (−,+), (−,−)`.
pub const OUTCOME_LABELS: [&str; 4] = ["pp", "pm", "mp", "mm"];

/// Local Pauli measured on each qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MeasurementSetting {
    pub basis_a: Pauli,
    pub basis_b: Pauli,
}

impl MeasurementSetting {
    /// XX, XY, XZ, YX, ..., ZZ.
    pub fn all() -> [MeasurementSetting; 9] {
        let mut out = [MeasurementSetting {
            basis_a: Pauli::X,
            basis_b: Pauli::X,
        }; 9];
        for (i, slot) in out.iter_mut().enumerate() {
            slot.basis_a = Pauli::ALL[i / 3];
            slot.basis_b = Pauli::ALL[i % 3];
        }
        out
    }

    pub fn index(&self) -> usize {
        3 * (self.basis_a.index() - 1) + (self.basis_b.index() - 1)
    }

    pub fn label(&self) -> String {
        format!("{}{}", self.basis_a.letter(), self.basis_b.letter())
    }

    pub fn from_label(label: &str) -> Option<Self> {
        let mut chars = label.chars();
        let a = Pauli::from_letter(chars.next()?)?;
        let b = Pauli::from_letter(chars.next()?)?;
        chars.next().is_none().then_some(MeasurementSetting {
            basis_a: a,
            basis_b: b,
        })
    }
}

/// Raw outcome counts for all nine settings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TomographyCounts {
    shots_per_setting: u64,
    counts: [[u64; 4]; 9],
}

impl TomographyCounts {
    /// `counts` is indexed by [`MeasurementSetting::index`].
    pub fn new(shots_per_setting: u64, counts: [[u64; 4]; 9]) -> Result<Self> {
        if shots_per_setting == 0 {
            return Err(Error::InvalidCounts("shots must be positive".into()));
        }
        for (setting, row) in MeasurementSetting::all().iter().zip(&counts) {
            let total: u64 = row.iter().sum();
            if total != shots_per_setting {
                return Err(Error::InvalidCounts(format!(
                    "setting {} has {total} counts, expected {shots_per_setting}",
                    setting.label()
                )));
            }
        }
        Ok(Self {
            shots_per_setting,
            counts,
        })
    }

    pub fn shots_per_setting(&self) -> u64 {
        self.shots_per_setting
    }

    pub fn get(&self, setting: MeasurementSetting) -> [u64; 4] {
        self.counts[setting.index()]
    }

    pub fn frequencies(&self) -> [[f64; 4]; 9] {
        let n = self.shots_per_setting as f64;
        self.counts.map(|row| row.map(|c| c as f64 / n))
    }

    pub fn to_json(&self) -> CountsJson {
        let settings = MeasurementSetting::all()
            .iter()
            .map(|s| {
                let [pp, pm, mp, mm] = self.get(*s);
                (s.label(), OutcomeJson { pp, pm, mp, mm })
            })
            .collect();
        CountsJson {
            shots: self.shots_per_setting,
            settings,
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("plain data serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: CountsJson = serde_json::from_str(text)?;
        raw.try_into()
    }
}

/// `{ "shots": n, "settings": { "XX": {"pp":..,"pm":..,"mp":..,"mm":..}, ... } }`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CountsJson {
    pub shots: u64,
    pub settings: BTreeMap<String, OutcomeJson>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutcomeJson {
    pub pp: u64,
    pub pm: u64,
    pub mp: u64,
    pub mm: u64,
}

impl TryFrom<CountsJson> for TomographyCounts {
    type Error = Error;

    fn try_from(raw: CountsJson) -> Result<Self> {
        let mut counts = [[0u64; 4]; 9];
        let mut seen = [false; 9];
        for (label, o) in &raw.settings {
            let setting = MeasurementSetting::from_label(label)
                .ok_or_else(|| Error::InvalidCounts(format!("unknown setting {label:?}")))?;
            counts[setting.index()] = [o.pp, o.pm, o.mp, o.mm];
            seen[setting.index()] = true;
        }
        let missing: Vec<String> = MeasurementSetting::all()
            .iter()
            .filter(|s| !seen[s.index()])
            .map(|s| s.label())
            .collect();
        if !missing.is_empty() {
            return Err(Error::InvalidCounts(format!(
                "missing settings: {}",
                missing.join(", ")
            )));
        }
        TomographyCounts::new(raw.shots, counts)
    }
}

/// Two-qubit Pauli correlations `c[j][k] = ⟨σ_j ⊗ σ_k⟩`, `j, k ∈ 0..4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationMatrix {
    pub c: [[f64; 4]; 4],
}

impl CorrelationMatrix {
    pub fn identity_only() -> Self {
        let mut c = [[0.0; 4]; 4];
        c[0][0] = 1.0;
        Self { c }
    }

    /// Exact correlations `Tr(ρ σ_j ⊗ σ_k)`.
    pub fn of_state(rho: &DensityMatrix) -> Self {
        let mut c = [[0.0; 4]; 4];
        for (j, row) in c.iter_mut().enumerate() {
            for (k, entry) in row.iter_mut().enumerate() {
                *entry = rho.expectation(&kron(&pauli(j), &pauli(k)));
            }
        }
        Self { c }
    }

    /// Checks `c00 = 1` and `|c_jk| ≤ 1`, both up to `1e-12`.
    pub fn validate(&self) -> Result<()> {
        const TOL: f64 = 1e-12;
        if (self.c[0][0] - 1.0).abs() > TOL {
            return Err(Error::InvalidCounts(format!(
                "c00 = {} is not 1",
                self.c[0][0]
            )));
        }
        for (j, row) in self.c.iter().enumerate() {
            for (k, &x) in row.iter().enumerate() {
                if !x.is_finite() || x.abs() > 1.0 + TOL {
                    return Err(Error::InvalidCounts(format!(
                        "c{j}{k} = {x} outside [-1, 1]"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.c
            .iter()
            .flatten()
            .zip(other.c.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// `Prob(σ_a = ±1, σ_b = ±1)` in outcome order; tiny negatives are clamped to 0.
pub fn born_probabilities(rho: &DensityMatrix, setting: MeasurementSetting) -> [f64; 4] {
    let mut p = [0.0; 4];
    for (slot, (pa, pb)) in
        p.iter_mut()
            .zip([(true, true), (true, false), (false, true), (false, false)])
    {
        let proj = kron(
            &setting.basis_a.projector(pa),
            &setting.basis_b.projector(pb),
        );
        *slot = rho.expectation(&proj).max(0.0);
    }
    p
}

/// Born probabilities for all nine settings.
pub fn exact_frequencies(rho: &DensityMatrix) -> [[f64; 4]; 9] {
    MeasurementSetting::all().map(|s| born_probabilities(rho, s))
}

fn multinomial<R: Rng>(rng: &mut R, shots: u64, probs: &[f64; 4]) -> [u64; 4] {
    let mut out = [0u64; 4];
    let mut left = shots;
    let mut mass: f64 = probs.iter().sum();
    for i in 0..3 {
        if left == 0 {
            break;
        }
        let q = if mass > 0.0 {
            (probs[i] / mass).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let draw = Binomial::new(left, q)
            .expect("probability clamped to [0, 1]")
            .sample(rng);
        out[i] = draw;
        left -= draw;
        mass -= probs[i];
    }
    out[3] = left;
    out
}

/// Multinomial draws of `shots` outcomes per setting.
///
/// Each setting reads from its own ChaCha8 stream keyed by `(seed, setting
/// index)`, so results do not depend on the order settings are processed in.
pub fn sample_counts(rho: &DensityMatrix, shots: u64, seed: u64) -> Result<TomographyCounts> {
    if shots == 0 {
        return Err(Error::InvalidCounts("shots must be positive".into()));
    }
    let mut counts = [[0u64; 4]; 9];
    for setting in MeasurementSetting::all() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(setting.index() as u64);
        counts[setting.index()] = multinomial(&mut rng, shots, &born_probabilities(rho, setting));
    }
    TomographyCounts::new(shots, counts)
}

/// Correlations from outcome frequencies indexed by setting.
///
/// Local terms `c[j][0]` and `c[0][k]` average the marginals of the three
/// settings that measure `σ_j` on a (resp. `σ_k` on b).
pub fn correlations_from_frequencies(freqs: &[[f64; 4]; 9]) -> CorrelationMatrix {
    let mut c = [[0.0; 4]; 4];
    c[0][0] = 1.0;
    for setting in MeasurementSetting::all() {
        let [pp, pm, mp, mm] = freqs[setting.index()];
        let (j, k) = (setting.basis_a.index(), setting.basis_b.index());
        c[j][k] = pp + mm - pm - mp;
        c[j][0] += (pp + pm - mp - mm) / 3.0;
        c[0][k] += (pp + mp - pm - mm) / 3.0;
    }
    CorrelationMatrix { c }
}

pub fn estimate_correlations(counts: &TomographyCounts) -> CorrelationMatrix {
    correlations_from_frequencies(&counts.frequencies())
}

/// Linear-inversion output.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    /// Physical state; equal to `raw` unless `projected`.
    pub state: DensityMatrix,
    /// `¼ Σ c_jk σ_j ⊗ σ_k` before any correction.
    pub raw: ComplexMatrix,
    /// Set when negative eigenvalues were clipped and the trace renormalized.
    pub projected: bool,
}

/// `ρ = ¼ Σ c_jk σ_j ⊗ σ_k`, projected onto the state space when the raw
/// matrix has an eigenvalue below `-1e-8`.
pub fn reconstruct(corr: &CorrelationMatrix) -> Result<Reconstruction> {
    let mut raw = ComplexMatrix::zeros(4);
    for j in 0..4 {
        for k in 0..4 {
            if corr.c[j][k] != 0.0 {
                raw = &raw + &kron(&pauli(j), &pauli(k)).scale_real(corr.c[j][k] / 4.0);
            }
        }
    }
    let raw = raw.hermitian_part();
    let eig = hermitian_eigen(&raw)?;
    if eig.min_eigenvalue() >= STATE_EIGEN_FLOOR {
        return Ok(Reconstruction {
            state: DensityMatrix::new(2, raw.clone())?,
            raw,
            projected: false,
        });
    }
    let kept: f64 = eig.eigenvalues.iter().map(|l| l.max(0.0)).sum();
    if kept <= 0.0 {
        return Err(Error::NotAState(
            "linear inversion has no positive spectrum".into(),
        ));
    }
    let projected = eig.map_spectrum(|l| l.max(0.0) / kept).hermitian_part();
    Ok(Reconstruction {
        state: DensityMatrix::new(2, projected)?,
        raw,
        projected: true,
    })
}

/// Sample, estimate and reconstruct. `shots == 0` uses exact Born
/// probabilities instead of sampling.
pub fn tomograph(rho: &DensityMatrix, shots: u64, seed: u64) -> Result<Reconstruction> {
    if rho.n_qubits() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "tomography needs 2 qubits, got {}",
            rho.n_qubits()
        )));
    }
    let corr = if shots == 0 {
        correlations_from_frequencies(&exact_frequencies(rho))
    } else {
        estimate_correlations(&sample_counts(rho, shots, seed)?)
    };
    reconstruct(&corr)
}

/// Mixes a base seed with an index (splitmix64 finalizer).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
