//! Random disorder in the doped block and ensemble-averaged spectra.
//!
//! Realization `i` of a spec is drawn from a ChaCha8 generator seeded with
//! `seed` and switched to stream `i`, so every realization can be generated
//! independently of the others and of the thread that asks for it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{solve_scattering, DisorderRealization};
use crate::model::ModelParams;

pub const DEFAULT_SAMPLES: usize = 1000;

/// Realizations solved concurrently before folding into the running moments.
const REDUCTION_CHUNK: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DisorderDistribution {
    /// `x ∈ [x₀ − f|x₀|, x₀ + f|x₀|]` uniformly, with separate fractions for
    /// the cavity frequencies and the hoppings.
    Uniform {
        omega_fraction: f64,
        v_fraction: f64,
    },
    /// Untruncated normal with absolute standard deviations.
    Gaussian { sigma_omega: f64, sigma_v: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisorderSpec {
    pub distribution: DisorderDistribution,
    pub mean_omega: f64,
    pub mean_v: f64,
    pub n_atoms: usize,
    pub samples: usize,
    pub seed: u64,
}

impl DisorderSpec {
    /// Spec centred on the clean parameters of `p`.
    pub fn centred_on(
        p: &ModelParams,
        distribution: DisorderDistribution,
        samples: usize,
        seed: u64,
    ) -> Self {
        Self {
            distribution,
            mean_omega: p.omega,
            mean_v: p.hopping,
            n_atoms: p.n_atoms,
            samples,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParams(msg.to_string()));
        match self.distribution {
            DisorderDistribution::Uniform {
                omega_fraction,
                v_fraction,
            } => {
                let ok = |f: f64| (0.0..1.0).contains(&f);
                if !ok(omega_fraction) || !ok(v_fraction) {
                    return bad("uniform width fractions must lie in [0, 1)");
                }
            }
            DisorderDistribution::Gaussian {
                sigma_omega,
                sigma_v,
            } => {
                let ok = |s: f64| s >= 0.0 && s.is_finite();
                if !ok(sigma_omega) || !ok(sigma_v) {
                    return bad("gaussian sigmas must be finite and non-negative");
                }
            }
        }
        if self.samples == 0 {
            return bad("samples must be at least 1");
        }
        if self.n_atoms == 0 {
            return bad("n_atoms must be at least 1");
        }
        if !(self.mean_omega.is_finite() && self.mean_v.is_finite()) {
            return bad("mean values must be finite");
        }
        Ok(())
    }
}

fn draw_uniform<R: Rng>(rng: &mut R, mean: f64, fraction: f64) -> f64 {
    if fraction == 0.0 {
        return mean;
    }
    let half = fraction * mean.abs();
    rng.random_range(mean - half..=mean + half)
}

fn draw_normal<R: Rng>(rng: &mut R, mean: f64, sigma: f64) -> f64 {
    if sigma == 0.0 {
        return mean;
    }
    Normal::new(mean, sigma)
        .expect("sigma validated as finite and positive")
        .sample(rng)
}

/// Realization number `stream_index` of the ensemble described by `spec`.
pub fn sample_realization(spec: &DisorderSpec, stream_index: u64) -> DisorderRealization {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(stream_index);
    let n = spec.n_atoms;
    let bonds = n.saturating_sub(1);
    match spec.distribution {
        DisorderDistribution::Uniform {
            omega_fraction,
            v_fraction,
        } => {
            let omega_sites = (0..n)
                .map(|_| draw_uniform(&mut rng, spec.mean_omega, omega_fraction))
                .collect();
            let v_bonds = (0..bonds)
                .map(|_| draw_uniform(&mut rng, spec.mean_v, v_fraction))
                .collect();
            DisorderRealization {
                omega_sites,
                v_bonds,
            }
        }
        DisorderDistribution::Gaussian {
            sigma_omega,
            sigma_v,
        } => {
            let omega_sites = (0..n)
                .map(|_| draw_normal(&mut rng, spec.mean_omega, sigma_omega))
                .collect();
            let v_bonds = (0..bonds)
                .map(|_| draw_normal(&mut rng, spec.mean_v, sigma_v))
                .collect();
            DisorderRealization {
                omega_sites,
                v_bonds,
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleRow {
    pub delta: f64,
    /// Mean |t_D|² over the realizations that solved; `None` if none did.
    pub mean_t: Option<f64>,
    /// Sample standard deviation (n − 1 denominator; 0 for a single sample).
    pub std_t: Option<f64>,
    pub samples: usize,
    /// Realizations whose solve failed at this detuning.
    pub failures: usize,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpectrum {
    pub rows: Vec<EnsembleRow>,
}

/// Running mean and variance (Welford). Identical inputs give back the input
/// value exactly, which keeps a zero-width ensemble bit-identical to the
/// clean spectrum.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    count: usize,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn std(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.m2 / (self.count - 1) as f64).sqrt()
        }
    }
}

/// |t_D|² of every realization over the detuning grid.
pub fn realization_spectrum(
    real: &DisorderRealization,
    grid: &[f64],
    p: &ModelParams,
) -> Vec<Result<f64>> {
    grid.iter()
        .map(|&delta| solve_scattering(p.energy_at(delta), real, p).map(|s| s.transmission()))
        .collect()
}

/// Mean and spread of |t_D|² over `spec.samples` realizations, the same
/// realizations reused at every grid point.
///
/// Realizations are solved in parallel on the current rayon pool; the
/// reduction runs in realization order, so the result does not depend on the
/// number of workers.
pub fn ensemble_spectrum(
    spec: &DisorderSpec,
    grid: &[f64],
    p: &ModelParams,
) -> Result<EnsembleSpectrum> {
    spec.validate()?;
    p.validate()?;
    if spec.n_atoms != p.n_atoms {
        return Err(Error::InvalidParams(format!(
            "disorder spec has {} atoms but model has {}",
            spec.n_atoms, p.n_atoms
        )));
    }
    let mut moments = vec![Moments::default(); grid.len()];
    let mut failures = vec![0usize; grid.len()];
    let mut errors: Vec<Option<String>> = vec![None; grid.len()];
    let total = spec.samples as u64;
    let mut start = 0u64;
    while start < total {
        let end = (start + REDUCTION_CHUNK).min(total);
        let chunk: Vec<Vec<Result<f64>>> = (start..end)
            .into_par_iter()
            .map(|i| realization_spectrum(&sample_realization(spec, i), grid, p))
            .collect();
        for spectrum in chunk {
            for (gi, value) in spectrum.into_iter().enumerate() {
                match value {
                    Ok(t) => moments[gi].push(t),
                    Err(e) => {
                        failures[gi] += 1;
                        errors[gi].get_or_insert_with(|| e.to_string());
                    }
                }
            }
        }
        start = end;
    }

    let rows = grid
        .iter()
        .zip(moments)
        .zip(failures.into_iter().zip(errors))
        .map(|((&delta, m), (failures, error))| {
            let solved = m.count > 0;
            EnsembleRow {
                delta,
                mean_t: solved.then_some(m.mean),
                std_t: solved.then(|| m.std()),
                samples: m.count,
                failures,
                error,
            }
        })
        .collect();
    Ok(EnsembleSpectrum { rows })
}
