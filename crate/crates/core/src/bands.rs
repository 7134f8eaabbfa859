//! Perfect-reflection band edges, the two-band spectrum of the isolated doped
//! block, and group velocities.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::model::{ModelParams, RESONANCE_TOL};

/// Closed energy interval `[lower, upper]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    pub fn length(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandReport {
    pub e_plus: f64,
    pub e_minus: f64,
    pub e_max: f64,
    pub e_min: f64,
    /// Perfect-reflection intervals below and above Ω; empty ones are dropped.
    pub intervals: Vec<Interval>,
    /// Total length of `intervals`.
    pub width: f64,
}

/// Band edges `E±` of the large-Nₐ perfect-reflection window and the
/// resulting intervals inside the propagating band.
pub fn band_edges(p: &ModelParams) -> BandReport {
    let v = p.hopping.abs();
    let half_d = 0.5 * p.detuning();
    let g2 = p.coupling * p.coupling;
    let mid = 0.5 * (p.omega + p.atom_omega);
    let e_plus = mid - v + ((half_d - v).powi(2) + g2).sqrt();
    let e_minus = mid + v - ((half_d + v).powi(2) + g2).sqrt();
    let (e_min, e_max) = (p.band_min(), p.band_max());

    let candidates = [
        Interval {
            lower: e_minus.max(e_min),
            upper: p.atom_omega.min(e_max),
        },
        Interval {
            lower: p.atom_omega.max(e_min),
            upper: e_plus.min(e_max),
        },
    ];
    let intervals: Vec<Interval> = candidates
        .into_iter()
        .filter(|iv| iv.lower <= iv.upper)
        .collect();
    let width = intervals.iter().map(Interval::length).sum();
    BandReport {
        e_plus,
        e_minus,
        e_max,
        e_min,
        intervals,
        width,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepAxis {
    Hopping,
    Coupling,
    AtomOmega,
    Omega,
}

impl SweepAxis {
    pub fn apply(&self, p: &ModelParams, value: f64) -> ModelParams {
        let mut q = *p;
        match self {
            SweepAxis::Hopping => q.hopping = value,
            SweepAxis::Coupling => q.coupling = value,
            SweepAxis::AtomOmega => q.atom_omega = value,
            SweepAxis::Omega => q.omega = value,
        }
        q
    }
}

/// Band report at each grid value of one parameter, the others held fixed.
pub fn width_sweep(p: &ModelParams, axis: SweepAxis, grid: &[f64]) -> Vec<(f64, BandReport)> {
    grid.iter()
        .map(|&x| (x, band_edges(&axis.apply(p, x))))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// `δ_p = δ + 2V cos p`.
pub fn shifted_detuning(p_val: f64, p: &ModelParams) -> f64 {
    p.detuning() + 2.0 * p.hopping * p_val.cos()
}

/// `E^±(p) = ½(δ_p ± √(δ_p² + 4g²)) + Ω`.
pub fn band_energy(p_val: f64, branch: Branch, p: &ModelParams) -> f64 {
    energy_from_shift(shifted_detuning(p_val, p), branch, p)
}

fn energy_from_shift(dp: f64, branch: Branch, p: &ModelParams) -> f64 {
    let root = (dp * dp + 4.0 * p.coupling * p.coupling).sqrt();
    0.5 * (dp + branch.sign() * root) + p.atom_omega
}

/// One standing-wave mode of the isolated block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Eigenmode {
    pub energy: f64,
    /// Photon amplitudes `v_j^g`, j = 1..Nₐ.
    pub photon: Vec<f64>,
    /// Atomic amplitudes `v_j^e`, j = 1..Nₐ.
    pub atom: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InteractionLevel {
    pub n: usize,
    pub p: f64,
    pub minus: Eigenmode,
    pub plus: Eigenmode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InteractionSpectrum {
    pub levels: Vec<InteractionLevel>,
}

impl InteractionSpectrum {
    /// All 2Nₐ energies, ascending.
    pub fn sorted_energies(&self) -> Vec<f64> {
        let mut e: Vec<f64> = self
            .levels
            .iter()
            .flat_map(|l| [l.minus.energy, l.plus.energy])
            .collect();
        e.sort_by(f64::total_cmp);
        e
    }
}

/// Standing wave `sin(p j)` on the photons with atomic amplitude
/// `g v^g/(E − Ω)`, normalised over the whole 2Nₐ vector.
fn eigenmode(p_val: f64, energy: f64, p: &ModelParams) -> Eigenmode {
    let profile: Vec<f64> = (1..=p.n_atoms).map(|j| (p_val * j as f64).sin()).collect();
    let gap = energy - p.atom_omega;
    let (photon, atom): (Vec<f64>, Vec<f64>) = if gap.abs() <= RESONANCE_TOL {
        // uncoupled atom level: all weight on the atoms
        (vec![0.0; p.n_atoms], profile)
    } else {
        let ratio = p.coupling / gap;
        let atom = profile.iter().map(|x| ratio * x).collect();
        (profile, atom)
    };
    let norm = photon
        .iter()
        .chain(&atom)
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt();
    Eigenmode {
        energy,
        photon: photon.iter().map(|x| x / norm).collect(),
        atom: atom.iter().map(|x| x / norm).collect(),
    }
}

/// Exact levels of the isolated block: `p_n = nπ/(Nₐ+1)` on both branches.
pub fn interaction_levels(p: &ModelParams) -> InteractionSpectrum {
    let levels = (1..=p.n_atoms)
        .map(|n| {
            let p_val = n as f64 * PI / (p.n_atoms + 1) as f64;
            InteractionLevel {
                n,
                p: p_val,
                minus: eigenmode(p_val, band_energy(p_val, Branch::Minus, p), p),
                plus: eigenmode(p_val, band_energy(p_val, Branch::Plus, p), p),
            }
        })
        .collect();
    InteractionSpectrum { levels }
}

/// `∂E^±/∂p = ½(1 ± δ_p/√(δ_p² + 4g²)) · (−2V sin p)`.
pub fn group_velocity(p_val: f64, branch: Branch, p: &ModelParams) -> f64 {
    let dp = shifted_detuning(p_val, p);
    let root = (dp * dp + 4.0 * p.coupling * p.coupling).sqrt();
    let mix = if root == 0.0 { 0.0 } else { dp / root };
    0.5 * (1.0 + branch.sign() * mix) * (-2.0 * p.hopping * p_val.sin())
}

/// Group velocity `−2V sin k` of the undoped waveguide.
pub fn free_group_velocity(k: f64, p: &ModelParams) -> f64 {
    -2.0 * p.hopping * k.sin()
}

/// Gap between the two block bands in the continuum limit: from the top of
/// the lower band to the bottom of the upper band. Empty when
/// `upper <= lower`.
pub fn stopped_light_region(p: &ModelParams) -> Interval {
    // both branches increase monotonically with δ_p ∈ [δ − 2|V|, δ + 2|V|]
    let v = p.hopping.abs();
    let d = p.detuning();
    Interval {
        lower: energy_from_shift(d + 2.0 * v, Branch::Minus, p),
        upper: energy_from_shift(d - 2.0 * v, Branch::Plus, p),
    }
}
