//! Physical parameters, lattice dispersion and the momentum inside the doped
//! block.
//!
//! All energies are measured in units of the atom-cavity coupling `g`. The
//! incident photon travels along a tight-binding chain with dispersion
//! `E(k) = ω + 2V cos k`; inside the doped block every cavity additionally
//! feels the energy-dependent on-site potential `w(E) = g²/(E − Ω)` obtained by
//! eliminating the atomic amplitude.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `|E − Ω|` below this (in units of g) is treated as exact resonance.
pub const RESONANCE_TOL: f64 = 1e-12;

/// Tolerance on `|sin k|` and `||cos k′| − 1|` for band-edge handling.
pub const EDGE_TOL: f64 = 1e-12;

/// The five model parameters, all energies in units of g.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Cavity frequency ω.
    pub omega: f64,
    /// Atomic level spacing Ω.
    pub atom_omega: f64,
    /// Nearest-neighbour photon hopping V.
    pub hopping: f64,
    /// Atom-cavity coupling g.
    pub coupling: f64,
    /// Number of doped cavities Nₐ.
    pub n_atoms: usize,
}

impl ModelParams {
    pub fn new(
        omega: f64,
        atom_omega: f64,
        hopping: f64,
        coupling: f64,
        n_atoms: usize,
    ) -> Result<Self> {
        let p = Self {
            omega,
            atom_omega,
            hopping,
            coupling,
            n_atoms,
        };
        p.validate()?;
        Ok(p)
    }

    /// The parameter set used throughout the reference spectra:
    /// ω = 5, Ω = 6, V = −1, g = 1.
    pub fn reference(n_atoms: usize) -> Self {
        Self {
            omega: 5.0,
            atom_omega: 6.0,
            hopping: -1.0,
            coupling: 1.0,
            n_atoms,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.omega, self.atom_omega, self.hopping, self.coupling]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidParams("energies must be finite".into()));
        }
        if self.hopping == 0.0 {
            return Err(Error::InvalidParams("hopping V must be nonzero".into()));
        }
        if self.n_atoms == 0 {
            return Err(Error::InvalidParams("n_atoms must be at least 1".into()));
        }
        Ok(())
    }

    pub fn with_n_atoms(self, n_atoms: usize) -> Self {
        Self { n_atoms, ..self }
    }

    /// δ = ω − Ω.
    pub fn detuning(&self) -> f64 {
        self.omega - self.atom_omega
    }

    /// Lower edge of the propagating band, ω − 2|V|.
    pub fn band_min(&self) -> f64 {
        self.omega - 2.0 * self.hopping.abs()
    }

    /// Upper edge of the propagating band, ω + 2|V|.
    pub fn band_max(&self) -> f64 {
        self.omega + 2.0 * self.hopping.abs()
    }

    /// Photon energy for a detuning Δ = E − Ω.
    pub fn energy_at(&self, delta: f64) -> f64 {
        delta + self.atom_omega
    }
}

/// Which solution of `cos k′ = c` the interior momentum lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentumBranch {
    /// Real k′ in (0, π).
    Propagating,
    /// k′ = iα with cos k′ = cosh α ≥ 1.
    EvanescentEven,
    /// k′ = π + iα with cos k′ = −cosh α ≤ −1.
    EvanescentOdd,
    /// k′ = 0 or π exactly.
    Edge,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexMomentum {
    pub value: Complex64,
    pub branch: MomentumBranch,
}

impl ComplexMomentum {
    pub fn is_evanescent(&self) -> bool {
        matches!(
            self.branch,
            MomentumBranch::EvanescentEven | MomentumBranch::EvanescentOdd
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnergyRegion {
    OutsideBand,
    BandEdge,
    Propagating,
    Gap,
    Resonance,
}

impl EnergyRegion {
    pub fn as_str(&self) -> &'static str {
        match self {
            EnergyRegion::OutsideBand => "outside-band",
            EnergyRegion::BandEdge => "band-edge",
            EnergyRegion::Propagating => "propagating",
            EnergyRegion::Gap => "gap",
            EnergyRegion::Resonance => "resonance",
        }
    }
}

impl std::fmt::Display for EnergyRegion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Free-waveguide dispersion `ω + 2V cos k`.
pub fn dispersion(k: f64, p: &ModelParams) -> f64 {
    p.omega + 2.0 * p.hopping * k.cos()
}

/// Incident wavenumber for energy `e`.
///
/// The returned `k` gives the plane wave `e^{ikj}` a positive group velocity
/// `−2V sin k`, so it lies in (0, π) for V < 0 and in (−π, 0) for V > 0.
pub fn incident_momentum(e: f64, p: &ModelParams) -> Result<f64> {
    let (lower, upper) = (p.band_min(), p.band_max());
    if !e.is_finite() {
        return Err(Error::OutOfBand {
            energy: e,
            lower,
            upper,
        });
    }
    if p.hopping == 0.0 {
        return if e == p.omega {
            Err(Error::BandEdge { energy: e })
        } else {
            Err(Error::OutOfBand {
                energy: e,
                lower,
                upper,
            })
        };
    }
    let c = (e - p.omega) / (2.0 * p.hopping);
    if c.abs() > 1.0 + EDGE_TOL {
        return Err(Error::OutOfBand {
            energy: e,
            lower,
            upper,
        });
    }
    let sin = (1.0 - c * c).max(0.0).sqrt();
    if sin < EDGE_TOL {
        return Err(Error::BandEdge { energy: e });
    }
    let k = c.acos();
    Ok(if p.hopping < 0.0 { k } else { -k })
}

/// Strength `g²/(E − Ω)` of the effective on-site potential. Identically
/// zero for uncoupled atoms, including at `E = Ω`.
pub fn effective_potential_strength(e: f64, p: &ModelParams) -> Result<f64> {
    if p.coupling == 0.0 {
        return Ok(0.0);
    }
    let detuning = e - p.atom_omega;
    if detuning.abs() < RESONANCE_TOL {
        return Err(Error::Resonance { energy: e });
    }
    Ok(p.coupling * p.coupling / detuning)
}

/// Canonical solution of `cos k′ = c` for real `c`, with Im k′ ≥ 0.
pub fn momentum_from_cosine(c: f64) -> ComplexMomentum {
    if (c.abs() - 1.0).abs() < EDGE_TOL {
        let re = if c > 0.0 { 0.0 } else { PI };
        return ComplexMomentum {
            value: Complex64::new(re, 0.0),
            branch: MomentumBranch::Edge,
        };
    }
    if c > 1.0 {
        ComplexMomentum {
            value: Complex64::new(0.0, c.acosh()),
            branch: MomentumBranch::EvanescentEven,
        }
    } else if c < -1.0 {
        ComplexMomentum {
            value: Complex64::new(PI, (-c).acosh()),
            branch: MomentumBranch::EvanescentOdd,
        }
    } else {
        ComplexMomentum {
            value: Complex64::new(c.acos(), 0.0),
            branch: MomentumBranch::Propagating,
        }
    }
}

/// Canonical solution of `cos k′ = c` for complex `c` (principal arccos,
/// flipped into the upper half plane).
pub fn complex_momentum_from_cosine(c: Complex64) -> Complex64 {
    let k = c.acos();
    if k.im < 0.0 {
        -k
    } else {
        k
    }
}

/// `cos k − w(E)/(2V)`, the cosine of the interior momentum.
pub fn interior_cosine(e: f64, p: &ModelParams) -> Result<f64> {
    let k = incident_momentum(e, p)?;
    let w = effective_potential_strength(e, p)?;
    Ok(k.cos() - w / (2.0 * p.hopping))
}

/// Momentum k′ inside the doped block, solving `2V cos k′ = 2V cos k − w(E)`.
pub fn interaction_momentum(e: f64, p: &ModelParams) -> Result<ComplexMomentum> {
    Ok(momentum_from_cosine(interior_cosine(e, p)?))
}

/// Region tag, evaluated in the priority order outside-band, band-edge,
/// resonance, gap, propagating.
pub fn classify_energy(e: f64, p: &ModelParams) -> EnergyRegion {
    match incident_momentum(e, p) {
        Err(Error::BandEdge { .. }) => return EnergyRegion::BandEdge,
        Err(_) => return EnergyRegion::OutsideBand,
        Ok(_) => {}
    }
    match interaction_momentum(e, p) {
        Err(_) => EnergyRegion::Resonance,
        Ok(m) if m.branch == MomentumBranch::Propagating => EnergyRegion::Propagating,
        Ok(_) => EnergyRegion::Gap,
    }
}
