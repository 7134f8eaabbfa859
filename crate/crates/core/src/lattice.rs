//! Exact boundary-matched solve of the single-excitation scattering problem.
//!
//! The semi-infinite clean leads are eliminated analytically, leaving the
//! self-energy `V e^{ik}` on the first and last doped cavity and a source term
//! `V(e^{2ik} − 1)` on the first. The resulting 2Nₐ × 2Nₐ system keeps the
//! atomic amplitudes explicit, so it stays regular at `E = Ω`.
//!
//! Basis ordering is blocked: indices `0..Nₐ` are the photon amplitudes
//! `φ_j^g`, indices `Nₐ..2Nₐ` the atomic amplitudes `φ_j^e`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::model::{incident_momentum, ModelParams};

/// Site-dependent cavity frequencies and interior hoppings of the doped block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisorderRealization {
    /// ω_j for j = 1..Nₐ.
    pub omega_sites: Vec<f64>,
    /// V_j coupling site j to j+1, for j = 1..Nₐ−1.
    pub v_bonds: Vec<f64>,
}

impl DisorderRealization {
    pub fn clean(p: &ModelParams) -> Self {
        Self {
            omega_sites: vec![p.omega; p.n_atoms],
            v_bonds: vec![p.hopping; p.n_atoms.saturating_sub(1)],
        }
    }

    pub fn n_sites(&self) -> usize {
        self.omega_sites.len()
    }

    /// Mirror image of the block (site j ↔ Nₐ+1−j).
    pub fn reversed(&self) -> Self {
        Self {
            omega_sites: self.omega_sites.iter().rev().copied().collect(),
            v_bonds: self.v_bonds.iter().rev().copied().collect(),
        }
    }

    pub fn validate_for(&self, p: &ModelParams) -> Result<()> {
        let n = p.n_atoms;
        if self.omega_sites.len() != n || self.v_bonds.len() != n.saturating_sub(1) {
            return Err(Error::InvalidParams(format!(
                "realization has {} sites / {} bonds, expected {} / {}",
                self.omega_sites.len(),
                self.v_bonds.len(),
                n,
                n.saturating_sub(1)
            )));
        }
        let finite = self
            .omega_sites
            .iter()
            .chain(&self.v_bonds)
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidParams(
                "realization entries must be finite".into(),
            ));
        }
        Ok(())
    }
}

/// Amplitudes inside the doped block plus the lead amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct InteriorSolution {
    pub photon_amps: Vec<Complex64>,
    pub atom_amps: Vec<Complex64>,
    pub r: Complex64,
    pub t: Complex64,
}

impl InteriorSolution {
    pub fn transmission(&self) -> f64 {
        self.t.norm_sqr()
    }

    pub fn reflection(&self) -> f64 {
        self.r.norm_sqr()
    }
}

/// The assembled system `M · Φ = s` for one energy.
#[derive(Debug, Clone)]
pub struct ScatteringSystem {
    pub matrix: ComplexMatrix,
    pub rhs: Vec<Complex64>,
    /// Incident momentum in the clean leads.
    pub k: f64,
}

pub fn assemble_system(
    e: f64,
    real: &DisorderRealization,
    p: &ModelParams,
) -> Result<ScatteringSystem> {
    real.validate_for(p)?;
    let k = incident_momentum(e, p)?;
    let n = p.n_atoms;
    let eik = Complex64::from_polar(1.0, k);
    let self_energy = p.hopping * eik;
    let c = |x: f64| Complex64::new(x, 0.0);

    let mut m = ComplexMatrix::zeros(2 * n);
    for j in 0..n {
        m.set(j, j, c(real.omega_sites[j] - e));
        // undriven, uncoupled atoms carry no amplitude; a unit diagonal keeps
        // the system regular at E = Ω
        let atom_diag = if p.coupling == 0.0 {
            1.0
        } else {
            p.atom_omega - e
        };
        m.set(n + j, n + j, c(atom_diag));
        m.set(j, n + j, c(p.coupling));
        m.set(n + j, j, c(p.coupling));
    }
    for (j, &v) in real.v_bonds.iter().enumerate() {
        m.set(j, j + 1, c(v));
        m.set(j + 1, j, c(v));
    }
    // for Nₐ = 1 both leads attach to the same cavity
    m.add(0, 0, self_energy);
    m.add(n - 1, n - 1, self_energy);

    let mut rhs = vec![c(0.0); 2 * n];
    rhs[0] = p.hopping * (eik * eik - 1.0);
    Ok(ScatteringSystem { matrix: m, rhs, k })
}

/// Scattering amplitudes through an arbitrary (possibly disordered) block.
///
/// The leads carry the clean `ω`, `V` of `p`; the bonds between the leads and
/// the block are also the clean `V`.
pub fn solve_scattering(
    e: f64,
    real: &DisorderRealization,
    p: &ModelParams,
) -> Result<InteriorSolution> {
    let system = assemble_system(e, real, p)?;
    let phi = system.matrix.solve(&system.rhs)?;
    let n = p.n_atoms;
    let eik = Complex64::from_polar(1.0, system.k);
    let r = eik * (phi[0] - eik);
    let t = Complex64::from_polar(1.0, -system.k * n as f64) * phi[n - 1];
    let atom_amps = phi[n..].to_vec();
    let mut photon_amps = phi;
    photon_amps.truncate(n);
    Ok(InteriorSolution {
        photon_amps,
        atom_amps,
        r,
        t,
    })
}

/// Real symmetric single-excitation Hamiltonian of the isolated block.
pub fn interaction_hamiltonian(real: &DisorderRealization, p: &ModelParams) -> DMatrix<f64> {
    let n = real.n_sites();
    let mut h = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        h[(j, j)] = real.omega_sites[j];
        h[(n + j, n + j)] = p.atom_omega;
        h[(j, n + j)] = p.coupling;
        h[(n + j, j)] = p.coupling;
    }
    for (j, &v) in real.v_bonds.iter().enumerate() {
        h[(j, j + 1)] = v;
        h[(j + 1, j)] = v;
    }
    h
}

/// Eigenvalues of the isolated block, ascending.
pub fn diagonalize_interaction(real: &DisorderRealization, p: &ModelParams) -> Vec<f64> {
    let h = interaction_hamiltonian(real, p);
    let mut values: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}
