//! Closed-form transmission through Nₐ identical doped cavities, the
//! single-atom amplitudes, and the incoherent product approximation.
//!
//! Inside the block the photon is a superposition `r′e^{−ik′j} + t′e^{ik′j}`;
//! matching it to the lead waves at the four sites `0, 1, Nₐ, Nₐ+1` gives
//!
//! ```text
//! t = e^{−ik(Nₐ−1)} · 4V² sin k sin k′ / (A² e^{ik′(Nₐ−1)} − B² e^{−ik′(Nₐ−1)})
//! A = V e^{−ik′} − V e^{−ik} + w,   B = V e^{ik′} − V e^{−ik} + w
//! ```
//!
//! Numerator and denominator are multiplied through by `e^{ik′(Nₐ−1)}` before
//! evaluation so that evanescent k′ (Im k′ ≥ 0) never produces an overflowing
//! exponential.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{solve_scattering, DisorderRealization};
use crate::model::{
    classify_energy, effective_potential_strength, incident_momentum, interaction_momentum,
    ComplexMomentum, EnergyRegion, ModelParams, MomentumBranch, RESONANCE_TOL,
};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatteringResult {
    pub r: Complex64,
    pub t: Complex64,
    /// |t|².
    pub transmission: f64,
    /// 1 − |t|².
    pub reflection: f64,
    /// Incident momentum (signed, see [`incident_momentum`]).
    pub k: f64,
    /// Interior momentum; `None` at exact resonance where it is undefined.
    pub k_prime: Option<ComplexMomentum>,
    pub region: EnergyRegion,
}

/// Amplitudes `(r, t)` of the closed form for given incident momentum `k`,
/// interior momentum `k′` and on-site potential `w`. Both may be complex (the
/// lossy variant). Not defined where `sin k′ = 0`.
pub fn closed_form_amplitudes(
    k: f64,
    k_prime: Complex64,
    w: Complex64,
    hopping: f64,
    n_atoms: usize,
) -> (Complex64, Complex64) {
    let v = hopping;
    let emk = Complex64::from_polar(1.0, -k);
    let eikp = (I * k_prime).exp();
    let a = v * (-I * k_prime).exp() - v * emk + w;
    let b = v * eikp - v * emk + w;
    let m = (n_atoms - 1) as f64;
    let decay = (I * k_prime * m).exp();
    let denom = a * a * decay * decay - b * b;
    let t = Complex64::from_polar(4.0 * v * v * k.sin(), -k * m) * k_prime.sin() * decay / denom;
    // r + 1 = −2iV sin k e^{ik} (B e^{−ik′} − A e^{ik′(2Nₐ−1)}) / (A² e^{2ik′(Nₐ−1)} − B²)
    let tail = a * decay * decay * eikp;
    let r = -2.0 * I * v * k.sin() * emk.inv() * (b / eikp - tail) / denom - 1.0;
    (r, t)
}

/// Exact transmission through the clean doped block.
///
/// At resonance or when k′ sits on an edge (`k′ = nπ`, a 0/0 point of the
/// closed form) the lattice solver is used instead.
pub fn transmission(e: f64, p: &ModelParams) -> Result<ScatteringResult> {
    p.validate()?;
    let k = incident_momentum(e, p)?;
    let region = classify_energy(e, p);

    let w = match effective_potential_strength(e, p) {
        Ok(w) => w,
        Err(Error::Resonance { .. }) => return lattice_result(e, k, None, region, p),
        Err(err) => return Err(err),
    };
    let k_prime = interaction_momentum(e, p)?;
    if k_prime.branch == MomentumBranch::Edge {
        return lattice_result(e, k, Some(k_prime), region, p);
    }
    let (r, t) = closed_form_amplitudes(
        k,
        k_prime.value,
        Complex64::new(w, 0.0),
        p.hopping,
        p.n_atoms,
    );
    let transmission = t.norm_sqr();
    Ok(ScatteringResult {
        r,
        t,
        transmission,
        reflection: 1.0 - transmission,
        k,
        k_prime: Some(k_prime),
        region,
    })
}

fn lattice_result(
    e: f64,
    k: f64,
    k_prime: Option<ComplexMomentum>,
    region: EnergyRegion,
    p: &ModelParams,
) -> Result<ScatteringResult> {
    let sol = solve_scattering(e, &DisorderRealization::clean(p), p)?;
    let transmission = sol.transmission();
    Ok(ScatteringResult {
        r: sol.r,
        t: sol.t,
        transmission,
        reflection: 1.0 - transmission,
        k,
        k_prime,
        region,
    })
}

/// Reflection and transmission amplitudes of a single doped cavity.
pub fn single_atom_amplitudes(e: f64, p: &ModelParams) -> Result<(Complex64, Complex64)> {
    let k = incident_momentum(e, p)?;
    let g2 = p.coupling * p.coupling;
    if g2 == 0.0 {
        return Ok((Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)));
    }
    let x = 2.0 * I * p.hopping * (e - p.atom_omega) * k.sin();
    let r1 = g2 / (-x - g2);
    let t1 = x / (x + g2);
    Ok((r1, t1))
}

/// `|t₁|^{2Nₐ}`: atoms treated as independent sequential reflectors.
pub fn incoherent_transmission(e: f64, p: &ModelParams) -> Result<f64> {
    let (_, t1) = single_atom_amplitudes(e, p)?;
    Ok(t1.norm_sqr().powi(p.n_atoms as i32))
}

/// Coefficients of `Δ^{2Nₐ}` in the small-detuning expansions of the exact
/// and incoherent transmissions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeadingCoefficients {
    pub exact: f64,
    pub incoherent: f64,
    /// `false` when 4V² ≤ δ², where both coefficients are non-positive and the
    /// expansion carries no information.
    pub well_posed: bool,
}

pub fn leading_order_coefficients(p: &ModelParams) -> LeadingCoefficients {
    let v2 = p.hopping * p.hopping;
    let d = p.detuning();
    let spread = 4.0 * v2 - d * d;
    let g2 = p.coupling * p.coupling;
    let n = p.n_atoms as i32;
    LeadingCoefficients {
        exact: (p.hopping / g2).powi(2 * n) * spread / v2,
        incoherent: (spread / (g2 * g2)).powi(n),
        well_posed: spread > 0.0,
    }
}

/// Transmission at fixed detuning for each atom count in `na_list`.
pub fn convergence_scan(
    delta: f64,
    p: &ModelParams,
    na_list: &[usize],
) -> Result<Vec<(usize, f64)>> {
    let e = p.energy_at(delta);
    na_list
        .iter()
        .map(|&na| Ok((na, transmission(e, &p.with_n_atoms(na))?.transmission)))
        .collect()
}

/// Reflectivity averaged over a Gaussian spectral weight centred at detuning
/// `center` with standard deviation `width`, truncated to the propagating
/// band and to ±8 widths. Evaluated with a uniform trapezoid rule.
pub fn packet_reflectivity(
    center: f64,
    width: f64,
    p: &ModelParams,
    quadrature_points: usize,
) -> Result<f64> {
    if quadrature_points < 16 {
        return Err(Error::InvalidParams(
            "packet quadrature needs at least 16 points".into(),
        ));
    }
    if !(width > 0.0 && width.is_finite() && center.is_finite()) {
        return Err(Error::InvalidParams(
            "packet width must be positive and finite".into(),
        ));
    }
    let band_lo = p.band_min() - p.atom_omega;
    let band_hi = p.band_max() - p.atom_omega;
    // band edges themselves have no incident wave
    let inset = 1e-9 * (band_hi - band_lo);
    let lo = (center - 8.0 * width).max(band_lo + inset);
    let hi = (center + 8.0 * width).min(band_hi - inset);
    if !(hi > lo) {
        return Err(Error::DegeneratePacket);
    }
    let step = (hi - lo) / (quadrature_points - 1) as f64;
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..quadrature_points {
        let delta = if i + 1 == quadrature_points {
            hi
        } else {
            lo + step * i as f64
        };
        let endpoint = i == 0 || i + 1 == quadrature_points;
        let weight = (-(delta - center).powi(2) / (2.0 * width * width)).exp()
            * if endpoint { 0.5 } else { 1.0 };
        let refl = transmission(p.energy_at(delta), p)?.reflection;
        num += weight * refl;
        den += weight;
    }
    if den <= 0.0 {
        return Err(Error::DegeneratePacket);
    }
    Ok(num / den)
}

/// True when `|E − Ω|` is inside the resonance tolerance.
pub fn is_resonant(e: f64, p: &ModelParams) -> bool {
    (e - p.atom_omega).abs() < RESONANCE_TOL
}
