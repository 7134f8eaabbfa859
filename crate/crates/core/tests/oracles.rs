//! Reference values computed independently of this crate (50-digit transfer
//! matrix iteration, closed-form algebra) and cross-checks between routes.

use std::f64::consts::{FRAC_PI_2, PI};

use approx::assert_abs_diff_eq;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use atomic_mirror::bands::{
    band_edges, band_energy, group_velocity, interaction_levels, stopped_light_region, Branch,
};
use atomic_mirror::lattice::{assemble_system, solve_scattering, DisorderRealization};
use atomic_mirror::model::{
    classify_energy, dispersion, effective_potential_strength, incident_momentum,
    interaction_momentum, EnergyRegion, MomentumBranch,
};
use atomic_mirror::scattering::{
    incoherent_transmission, leading_order_coefficients, single_atom_amplitudes, transmission,
};
use atomic_mirror::{Error, ModelParams};

fn fig3(n: usize) -> ModelParams {
    ModelParams::reference(n)
}

/// Transmission by iterating the site equations from the right lead to the
/// left one (unit outgoing wave), then reading off the incoming amplitude.
fn transfer_matrix_transmission(delta: f64, p: &ModelParams) -> f64 {
    let e = p.energy_at(delta);
    let k = incident_momentum(e, p).unwrap();
    let w = p.coupling * p.coupling / (e - p.atom_omega);
    let v = p.hopping;
    let n = p.n_atoms;
    let plane = |j: usize| Complex64::from_polar(1.0, k * j as f64);
    let mut next = plane(n + 1);
    let mut here = plane(n);
    for _ in (1..=n).rev() {
        let prev = ((e - p.omega - w) * here - v * next) / v;
        next = here;
        here = prev;
    }
    // here = φ₀, next = φ₁
    let eik = Complex64::from_polar(1.0, k);
    let incoming = (next - here / eik) / (eik - 1.0 / eik);
    1.0 / incoming.norm_sqr()
}

#[test]
fn dispersion_examples() {
    let p = fig3(1);
    assert_abs_diff_eq!(dispersion(FRAC_PI_2, &p), 5.0, epsilon = 1e-15);
    assert_abs_diff_eq!(dispersion(0.0, &p), 3.0, epsilon = 1e-15);
    assert_abs_diff_eq!(dispersion(PI, &p), 7.0, epsilon = 1e-15);
}

#[test]
fn incident_momentum_examples() {
    let p = fig3(1);
    let k = incident_momentum(5.0, &p).unwrap();
    assert_abs_diff_eq!(k, FRAC_PI_2, epsilon = 1e-15);
    assert_abs_diff_eq!(-2.0 * p.hopping * k.sin(), 2.0, epsilon = 1e-15);
    let k = incident_momentum(6.5, &p).unwrap();
    assert_abs_diff_eq!(k, 2.4188584057763776, epsilon = 1e-15);
    assert_abs_diff_eq!(2.0 * p.hopping * k.cos(), 1.5, epsilon = 1e-12);
    assert!(matches!(
        incident_momentum(7.5, &p),
        Err(Error::OutOfBand { .. })
    ));
    assert!(matches!(
        incident_momentum(7.0, &p),
        Err(Error::BandEdge { .. })
    ));
}

#[test]
fn effective_potential_examples() {
    let p = fig3(1);
    assert_abs_diff_eq!(
        effective_potential_strength(6.5, &p).unwrap(),
        2.0,
        epsilon = 1e-15
    );
    assert_abs_diff_eq!(
        effective_potential_strength(5.5, &p).unwrap(),
        -2.0,
        epsilon = 1e-15
    );
    assert!(matches!(
        effective_potential_strength(6.0, &p),
        Err(Error::Resonance { .. })
    ));
}

#[test]
fn interaction_momentum_examples() {
    let p = fig3(1);
    let m = interaction_momentum(6.5, &p).unwrap();
    assert_eq!(m.branch, MomentumBranch::Propagating);
    assert_abs_diff_eq!(m.value.re, 1.318116071652818, epsilon = 1e-12);
    assert_eq!(m.value.im, 0.0);

    let m = interaction_momentum(6.2, &p).unwrap();
    assert_eq!(m.branch, MomentumBranch::EvanescentEven);
    assert_eq!(m.value.re, 0.0);
    assert_abs_diff_eq!(m.value.im, 1.2571958266003804, epsilon = 1e-12);
    assert_abs_diff_eq!(m.value.im.cosh(), 1.9, epsilon = 1e-12);

    let free = ModelParams {
        coupling: 0.0,
        ..fig3(1)
    };
    let m = interaction_momentum(5.7, &free).unwrap();
    assert_eq!(m.branch, MomentumBranch::Propagating);
    assert_abs_diff_eq!(
        m.value.re,
        incident_momentum(5.7, &free).unwrap(),
        epsilon = 1e-15
    );
}

#[test]
fn classification_examples() {
    let p = fig3(10);
    assert_eq!(classify_energy(6.0, &p), EnergyRegion::Resonance);
    assert_eq!(classify_energy(6.2, &p), EnergyRegion::Gap);
    assert_eq!(classify_energy(2.0, &p), EnergyRegion::OutsideBand);
    assert_eq!(classify_energy(3.0, &p), EnergyRegion::BandEdge);
    assert_eq!(classify_energy(6.5, &p), EnergyRegion::Propagating);
}

#[test]
fn transmission_matches_high_precision_transfer_matrix() {
    // (Δ, Nₐ, T) from 50-digit arithmetic
    let cases = [
        (0.5, 10, 0.55214647133304126367),
        (0.5, 1, 0.30434782608695652174),
        (-0.6180339887498949, 20, 0.0036668446528617591147),
        (0.3027756377319948, 20, 0.0005274779974429000207),
        (-0.65, 50, 0.1876644835130676983),
        (-1.5, 3, 0.89925986842105263158),
        (0.8, 7, 0.76629794768013913077),
        (-2.9, 10, 0.84165437946344594723),
    ];
    for (delta, n, expected) in cases {
        let p = fig3(n);
        let t = transmission(p.energy_at(delta), &p).unwrap().transmission;
        assert_abs_diff_eq!(t, expected, epsilon = 1e-12);
        let sol =
            solve_scattering(p.energy_at(delta), &DisorderRealization::clean(&p), &p).unwrap();
        assert_abs_diff_eq!(sol.transmission(), expected, epsilon = 1e-12);
    }
    let p = fig3(50);
    let deep = transmission(p.energy_at(0.2), &p).unwrap().transmission;
    assert!((deep / 2.6895488632289885817e-55 - 1.0).abs() < 1e-9);
}

#[test]
fn f64_transfer_matrix_agrees_with_closed_form() {
    for n in [1, 2, 10, 50] {
        let p = fig3(n);
        for i in 1..400 {
            let delta = -3.0 + 4.0 * i as f64 / 400.0;
            if delta == 0.0 {
                continue;
            }
            let closed = transmission(p.energy_at(delta), &p).unwrap().transmission;
            assert_abs_diff_eq!(
                closed,
                transfer_matrix_transmission(delta, &p),
                epsilon = 1e-10
            );
        }
    }
}

#[test]
fn single_atom_examples() {
    let p = fig3(1);
    let (r1, t1) = single_atom_amplitudes(6.0, &p).unwrap();
    assert_abs_diff_eq!(r1.re, -1.0, epsilon = 1e-15);
    assert_abs_diff_eq!(t1.norm(), 0.0, epsilon = 1e-15);
    let (r1, t1) = single_atom_amplitudes(6.5, &p).unwrap();
    assert_abs_diff_eq!(t1.norm_sqr(), 0.30434782608695652174, epsilon = 1e-12);
    assert_abs_diff_eq!(r1.norm_sqr() + t1.norm_sqr(), 1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(incoherent_transmission(6.0, &fig3(10)).unwrap(), 0.0);
    let approx = incoherent_transmission(6.5, &fig3(10)).unwrap();
    assert!(approx < 1.0);
    assert_abs_diff_eq!(approx, 0.30434782608695652174f64.powi(10), epsilon = 1e-15);
}

#[test]
fn leading_coefficient_examples() {
    let c = leading_order_coefficients(&fig3(2));
    assert_abs_diff_eq!(c.exact, 3.0, epsilon = 1e-15);
    assert_abs_diff_eq!(c.incoherent, 9.0, epsilon = 1e-15);
    assert!(c.well_posed);
    let c = leading_order_coefficients(&fig3(1));
    assert_eq!(c.exact, c.incoherent);
    let wide = ModelParams {
        omega: 10.0,
        ..fig3(1)
    };
    assert!(!leading_order_coefficients(&wide).well_posed);
}

#[test]
fn band_edge_reference_values() {
    let r = band_edges(&fig3(1));
    // E₋ = 6.5 − √5/2, E₊ = 4.5 + √13/2
    assert_abs_diff_eq!(r.e_minus, 6.5 - 5f64.sqrt() / 2.0, epsilon = 1e-15);
    assert_abs_diff_eq!(r.e_plus, 4.5 + 13f64.sqrt() / 2.0, epsilon = 1e-15);
    assert_abs_diff_eq!(r.e_minus - 6.0, -0.618, epsilon = 1e-3);
    assert_abs_diff_eq!(r.e_plus - 6.0, 0.302, epsilon = 1e-3);
    assert_abs_diff_eq!(r.e_plus, 6.3028, epsilon = 1e-4);
    assert_abs_diff_eq!(r.e_minus, 5.3820, epsilon = 1e-4);
    let s = stopped_light_region(&fig3(1));
    assert_abs_diff_eq!(s.lower, r.e_minus, epsilon = 1e-10);
    assert_abs_diff_eq!(s.upper, r.e_plus, epsilon = 1e-10);
}

#[test]
fn interaction_level_examples() {
    let spec = interaction_levels(&fig3(3));
    let ps: Vec<f64> = spec.levels.iter().map(|l| l.p).collect();
    for (a, b) in ps.iter().zip([PI / 4.0, PI / 2.0, 3.0 * PI / 4.0]) {
        assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
    }
    let p = fig3(3);
    assert_abs_diff_eq!(
        band_energy(FRAC_PI_2, Branch::Plus, &p),
        6.0 + 0.5 * (5f64.sqrt() - 1.0),
        epsilon = 1e-15
    );
    assert_abs_diff_eq!(
        band_energy(FRAC_PI_2, Branch::Minus, &p),
        4.381966011250105,
        epsilon = 1e-12
    );
    assert_abs_diff_eq!(
        group_velocity(FRAC_PI_2, Branch::Plus, &p),
        1.0 - 1.0 / 5f64.sqrt(),
        epsilon = 1e-12
    );
    assert_abs_diff_eq!(
        group_velocity(FRAC_PI_2, Branch::Minus, &p),
        1.0 + 1.0 / 5f64.sqrt(),
        epsilon = 1e-12
    );
}

#[test]
fn hand_written_lu_matches_nalgebra() {
    let p = fig3(12);
    let real = DisorderRealization {
        omega_sites: (0..12)
            .map(|j| 5.0 + 0.3 * ((3 * j) as f64).sin())
            .collect(),
        v_bonds: (0..11).map(|j| -1.0 + 0.2 * (j as f64).cos()).collect(),
    };
    for e in [3.2, 4.4, 5.5, 6.0, 6.1, 6.9] {
        let sys = assemble_system(e, &real, &p).unwrap();
        let n = sys.matrix.dim();
        let dense = DMatrix::from_fn(n, n, |i, j| sys.matrix.get(i, j));
        let expected = dense
            .lu()
            .solve(&DVector::from_vec(sys.rhs.clone()))
            .unwrap();
        let got = sys.matrix.solve(&sys.rhs).unwrap();
        for (a, b) in got.iter().zip(expected.iter()) {
            assert!((a - b).norm() <= 1e-11 * (1.0 + b.norm()));
        }
    }
}
