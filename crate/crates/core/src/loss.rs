//! Phenomenological atomic decay and cavity loss.
//!
//! Loss enters as imaginary frequency shifts `Ω → Ω − iγ_a`, `ω → ω − iγ_c`
//! inside the doped block. The leads stay lossless, so the incident momentum
//! `k` is real; the complex potential `w_L = g²/(E_L − Ω + iγ_a)` with
//! `E_L = ω − iγ_c + 2V cos k` makes the interior momentum complex.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    complex_momentum_from_cosine, incident_momentum, ModelParams, EDGE_TOL, RESONANCE_TOL,
};
use crate::scattering::{closed_form_amplitudes, transmission};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LossParams {
    pub gamma_a: f64,
    pub gamma_c: f64,
}

impl LossParams {
    pub fn new(gamma_a: f64, gamma_c: f64) -> Result<Self> {
        let l = Self { gamma_a, gamma_c };
        l.validate()?;
        Ok(l)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |x: f64| x >= 0.0 && x.is_finite();
        if ok(self.gamma_a) && ok(self.gamma_c) {
            Ok(())
        } else {
            Err(Error::InvalidParams(
                "loss rates must be finite and non-negative".into(),
            ))
        }
    }

    pub fn is_lossless(&self) -> bool {
        self.gamma_a == 0.0 && self.gamma_c == 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossyTransmission {
    /// |t_L|².
    pub transmission: f64,
    pub t: Complex64,
    pub k_prime: Complex64,
}

struct LossyPieces {
    k: f64,
    k_prime: Complex64,
    w: Complex64,
}

/// `None` marks the points where the closed form is 0/0 or divergent in the
/// lossless limit (pole of `w_L`, or `k′_L = nπ`).
fn lossy_pieces(e: f64, loss: &LossParams, p: &ModelParams) -> Result<Option<LossyPieces>> {
    p.validate()?;
    loss.validate()?;
    let k = incident_momentum(e, p)?;
    let e_l = Complex64::new(p.omega + 2.0 * p.hopping * k.cos(), -loss.gamma_c);
    let gap = e_l - Complex64::new(p.atom_omega, -loss.gamma_a);
    if gap.norm() < RESONANCE_TOL && p.coupling != 0.0 {
        return if loss.is_lossless() {
            Ok(None)
        } else {
            Err(Error::Resonance { energy: e })
        };
    }
    let w = if p.coupling == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        p.coupling * p.coupling / gap
    };
    let cosine = k.cos() - w / (2.0 * p.hopping);
    if loss.is_lossless() && (cosine.re.abs() - 1.0).abs() < EDGE_TOL {
        return Ok(None);
    }
    let k_prime = complex_momentum_from_cosine(cosine);
    Ok(Some(LossyPieces { k, k_prime, w }))
}

/// Transmission `|t_L|²` with loss.
pub fn lossy_transmission(e: f64, loss: &LossParams, p: &ModelParams) -> Result<LossyTransmission> {
    match lossy_pieces(e, loss, p)? {
        Some(x) => {
            let (_, t) = closed_form_amplitudes(x.k, x.k_prime, x.w, p.hopping, p.n_atoms);
            Ok(LossyTransmission {
                transmission: t.norm_sqr(),
                t,
                k_prime: x.k_prime,
            })
        }
        None => {
            let res = transmission(e, p)?;
            Ok(LossyTransmission {
                transmission: res.transmission,
                t: res.t,
                k_prime: res
                    .k_prime
                    .map_or(Complex64::new(f64::NAN, f64::NAN), |m| m.value),
            })
        }
    }
}

/// Reflection `|r_L|²` with loss,
/// `|2iV sin k (C − D e^{−2ik′(Nₐ−1)})/(C² − D² e^{−2ik′(Nₐ−1)}) − 1|²`,
/// evaluated with numerator and denominator multiplied by `e^{2ik′(Nₐ−1)}`.
pub fn lossy_reflection(e: f64, loss: &LossParams, p: &ModelParams) -> Result<f64> {
    let Some(x) = lossy_pieces(e, loss, p)? else {
        return Ok(transmission(e, p)?.reflection);
    };
    let v = p.hopping;
    let emk = Complex64::from_polar(1.0, -x.k);
    let c = v * (-I * x.k_prime).exp() - v * emk + x.w;
    let d = v * (I * x.k_prime).exp() - v * emk + x.w;
    let decay2 = (2.0 * I * x.k_prime * (p.n_atoms - 1) as f64).exp();
    let r = 2.0 * I * v * x.k.sin() * (c * decay2 - d) / (c * c * decay2 - d * d) - 1.0;
    Ok(r.norm_sqr())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeficitRow {
    pub delta: f64,
    pub transmission: f64,
    pub reflection: f64,
    /// `1 − R_L − T_L`, signed.
    pub deficit: f64,
}

/// Current deficit over a detuning grid, rows in grid order.
pub fn current_deficit_spectrum(
    grid: &[f64],
    loss: &LossParams,
    p: &ModelParams,
) -> Vec<Result<DeficitRow>> {
    grid.iter()
        .map(|&delta| {
            let e = p.energy_at(delta);
            let t = lossy_transmission(e, loss, p)?.transmission;
            let r = lossy_reflection(e, loss, p)?;
            Ok(DeficitRow {
                delta,
                transmission: t,
                reflection: r,
                deficit: 1.0 - r - t,
            })
        })
        .collect()
}
