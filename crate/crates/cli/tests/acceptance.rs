//! Acceptance criteria 1–12. Each test prints one `[criterion N] PASS|FAIL`
//! line with the measured quantities, then asserts.

use std::f64::consts::PI;
use std::process::Command;

use clap::Parser;

use atomic_mirror::bands::{
    band_edges, band_energy, group_velocity, interaction_levels, stopped_light_region, Branch,
    SweepAxis,
};
use atomic_mirror::disorder::{
    ensemble_spectrum, realization_spectrum, sample_realization, DisorderDistribution, DisorderSpec,
};
use atomic_mirror::grid::UniformGrid;
use atomic_mirror::lattice::{diagonalize_interaction, solve_scattering, DisorderRealization};
use atomic_mirror::loss::{lossy_transmission, LossParams};
use atomic_mirror::scattering::{convergence_scan, leading_order_coefficients, transmission};
use atomic_mirror::ModelParams;
use atomic_mirror_cli::args::Cli;
use atomic_mirror_cli::table::Table;
use atomic_mirror_cli::table_for;

fn report(n: u32, passed: bool, detail: String) {
    println!(
        "[criterion {n}] {} {detail}",
        if passed { "PASS" } else { "FAIL" }
    );
    assert!(passed, "criterion {n} failed: {detail}");
}

fn fig3(n: usize) -> ModelParams {
    ModelParams::reference(n)
}

fn cli_table(args: &[&str]) -> Table {
    let cli = Cli::try_parse_from(std::iter::once("atomic-mirror").chain(args.iter().copied()))
        .expect("arguments parse");
    table_for(&cli.command).expect("command succeeds")
}

/// (Δ, T) pairs of a spectrum table, skipping rows without a value.
fn spectrum_points(table: &Table) -> Vec<(f64, f64)> {
    let d = table.column("delta").unwrap();
    let t = table.column("T").unwrap();
    table
        .rows
        .iter()
        .filter_map(|r| Some((r[d].as_f64()?, r[t].as_f64()?)))
        .collect()
}

/// `count` points strictly inside the propagating band [−3, 1] in Δ.
fn in_band_grid(count: usize) -> Vec<f64> {
    let pts = UniformGrid::new(-3.0, 1.0, count + 2).unwrap().points();
    pts[1..=count].to_vec()
}

#[test]
fn criterion_01_band_edges() {
    let r = band_edges(&fig3(1));
    let (dm, dp) = (r.e_minus - 6.0, r.e_plus - 6.0);
    let ok = (dm + 0.618).abs() <= 1e-3 && (dp - 0.302).abs() <= 1e-3;
    report(1, ok, format!("Δ₋ = {dm:.6}, Δ₊ = {dp:.6}"));
}

#[test]
fn criterion_02_wide_band_spectrum() {
    let wide = spectrum_points(&cli_table(&[
        "spectrum",
        "--na",
        "50",
        "--delta-min",
        "-3",
        "--delta-max",
        "1",
        "--steps",
        "2001",
    ]));
    let worst_inside = wide
        .iter()
        .filter(|(d, _)| (-0.60..=0.29).contains(d))
        .map(|p| p.1)
        .fold(0.0, f64::max);
    let best_outside = wide
        .iter()
        .filter(|(d, _)| !(-0.618..=0.303).contains(d))
        .map(|p| p.1)
        .fold(0.0, f64::max);

    let single = spectrum_points(&cli_table(&[
        "spectrum",
        "--na",
        "1",
        "--delta-min",
        "-3",
        "--delta-max",
        "1",
        "--steps",
        "2001",
    ]));
    let widest_dip = single
        .iter()
        .filter(|(_, t)| *t < 1e-3)
        .map(|(d, _)| d.abs())
        .fold(0.0, f64::max);

    let ok = worst_inside < 1e-3 && best_outside > 0.5 && widest_dip < 0.02;
    report(
        2,
        ok,
        format!("Nₐ=50 max T on [−0.60, 0.29] = {worst_inside:.3e}, max T outside = {best_outside:.4}; Nₐ=1 T<1e-3 only for |Δ| ≤ {widest_dip:.4}"),
    );
}

#[test]
fn criterion_03_twenty_atoms_suffice() {
    let base = fig3(1);
    let r = band_edges(&base);
    let at = |delta: f64, n: usize| {
        transmission(base.energy_at(delta), &base.with_n_atoms(n))
            .unwrap()
            .transmission
    };
    let (tm, tp) = (at(r.e_minus - 6.0, 20), at(r.e_plus - 6.0, 20));
    let range: Vec<usize> = (50..=100).collect();
    let outside = |delta: f64| {
        convergence_scan(delta, &base, &range)
            .unwrap()
            .into_iter()
            .map(|(_, t)| t)
            .fold(0.0, f64::max)
    };
    let (lo, hi) = (outside(-0.65), outside(0.35));
    let ok = tm < 0.01 && tp < 0.01 && lo > 0.05 && hi > 0.05;
    report(
        3,
        ok,
        format!("T(Δ₋, 20) = {tm:.3e}, T(Δ₊, 20) = {tp:.3e}; max over Nₐ∈[50,100]: T(−0.65) = {lo:.4}, T(0.35) = {hi:.4}"),
    );
}

#[test]
fn criterion_04_oracle_equivalence() {
    let grid = in_band_grid(1001);
    let mut worst = 0.0f64;
    for n in [1, 2, 10, 50] {
        let p = fig3(n);
        let clean = DisorderRealization::clean(&p);
        for &delta in &grid {
            let e = p.energy_at(delta);
            let closed = transmission(e, &p).unwrap().transmission;
            let lattice = solve_scattering(e, &clean, &p).unwrap().transmission();
            worst = worst.max((closed - lattice).abs());
        }
    }
    report(
        4,
        worst <= 1e-10,
        format!(
            "max |T_closed − T_lattice| = {worst:.3e} over 4 × {} points",
            grid.len()
        ),
    );
}

#[test]
fn criterion_05_unitarity() {
    let grid = in_band_grid(1001);
    let mut worst_closed = 0.0f64;
    for n in [1, 2, 10, 50] {
        let p = fig3(n);
        for &delta in &grid {
            let res = transmission(p.energy_at(delta), &p).unwrap();
            worst_closed = worst_closed.max((res.r.norm_sqr() + res.t.norm_sqr() - 1.0).abs());
        }
    }
    let p = fig3(10);
    let spec = DisorderSpec::centred_on(
        &p,
        DisorderDistribution::Uniform {
            omega_fraction: 0.2,
            v_fraction: 0.2,
        },
        200,
        5,
    );
    let energies = in_band_grid(20);
    let mut worst_flux = 0.0f64;
    for i in 0..200 {
        let real = sample_realization(&spec, i);
        for &delta in &energies {
            let sol = solve_scattering(p.energy_at(delta), &real, &p).unwrap();
            worst_flux = worst_flux.max((sol.reflection() + sol.transmission() - 1.0).abs());
        }
    }
    let ok = worst_closed <= 1e-10 && worst_flux <= 1e-10;
    report(
        5,
        ok,
        format!(
            "max |R+T−1| closed form = {worst_closed:.3e}, disordered lattice = {worst_flux:.3e}"
        ),
    );
}

#[test]
fn criterion_06_diagonalization() {
    let mut worst = 0.0f64;
    for n in [1, 3, 10] {
        let p = fig3(n);
        let analytic = interaction_levels(&p).sorted_energies();
        let dense = diagonalize_interaction(&DisorderRealization::clean(&p), &p);
        assert_eq!(analytic.len(), dense.len());
        for (a, b) in analytic.iter().zip(&dense) {
            worst = worst.max((a - b).abs());
        }
    }
    let p = fig3(1);
    let r = band_edges(&p);
    let s = stopped_light_region(&p);
    let gap = (s.lower - r.e_minus).abs().max((s.upper - r.e_plus).abs());
    let ok = worst <= 1e-10 && gap <= 1e-10;
    report(
        6,
        ok,
        format!("max level residual = {worst:.3e}, gap-edge residual = {gap:.3e}"),
    );
}

#[test]
fn criterion_07_power_law() {
    let mut slopes = Vec::new();
    for n in 1..=3usize {
        let p = fig3(n);
        let xs: Vec<f64> = (0..41)
            .map(|i| (1e-4f64).ln() + (10f64).ln() * i as f64 / 40.0)
            .collect();
        let ys: Vec<f64> = xs
            .iter()
            .map(|x| {
                transmission(p.energy_at(x.exp()), &p)
                    .unwrap()
                    .transmission
                    .ln()
            })
            .collect();
        let mx = xs.iter().sum::<f64>() / xs.len() as f64;
        let my = ys.iter().sum::<f64>() / ys.len() as f64;
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        slopes.push(sxy / sxx);
    }
    let c = leading_order_coefficients(&fig3(2));
    let ok = slopes
        .iter()
        .enumerate()
        .all(|(i, s)| (s - 2.0 * (i + 1) as f64).abs() <= 0.05)
        && c.exact == 3.0
        && c.incoherent == 9.0;
    report(
        7,
        ok,
        format!(
            "slopes {slopes:.4?}; Nₐ=2 coefficients exact = {}, incoherent = {}",
            c.exact, c.incoherent
        ),
    );
}

#[test]
fn criterion_08_width_extremes() {
    let p = fig3(1);
    let l_strong = band_edges(&SweepAxis::Coupling.apply(&p, 50.0)).width;
    let l_uncoupled = band_edges(&SweepAxis::Coupling.apply(&p, 0.0)).width;
    let l_frozen = band_edges(&SweepAxis::Hopping.apply(&p, 0.0)).width;
    let l_detuned = band_edges(&SweepAxis::AtomOmega.apply(&p, 100.0)).width;
    let ok =
        (l_strong - 4.0).abs() <= 1e-3 && l_uncoupled == 0.0 && l_frozen == 0.0 && l_detuned < 0.01;
    report(
        8,
        ok,
        format!("L(g=50) = {l_strong:.6}, L(g=0) = {l_uncoupled}, L(V=0) = {l_frozen}, L(Ω=100) = {l_detuned:.6} (needs < 0.01)"),
    );
}

#[test]
fn criterion_09_group_velocity() {
    let p = fig3(1);
    let h = 1e-5;
    let mut worst = 0.0f64;
    // golden-ratio sequence over (0, π), branches alternating
    for i in 0..100 {
        let u = (0.5 + i as f64 * 0.618_033_988_749_894_8).fract();
        let p_val = 0.01 + (PI - 0.02) * u;
        let branch = if i % 2 == 0 {
            Branch::Plus
        } else {
            Branch::Minus
        };
        let fd =
            (band_energy(p_val + h, branch, &p) - band_energy(p_val - h, branch, &p)) / (2.0 * h);
        worst = worst.max((group_velocity(p_val, branch, &p) - fd).abs());
    }
    let plus = group_velocity(PI / 2.0, Branch::Plus, &p);
    let minus = group_velocity(PI / 2.0, Branch::Minus, &p);
    let s5 = 5f64.sqrt();
    let exact = (plus - (1.0 - 1.0 / s5))
        .abs()
        .max((minus - (1.0 + 1.0 / s5)).abs());
    let ok = worst <= 1e-6 && exact <= 1e-10;
    report(
        9,
        ok,
        format!("max |v_g − FD| = {worst:.3e}; |v_g^±(π/2) − (1 ∓ 1/√5)| = {exact:.3e}"),
    );
}

#[test]
fn criterion_10_disorder_robustness() {
    let p = fig3(10);

    // one ±20 % uniform realization with the CLI's default seed
    let single = cli_table(&[
        "disorder",
        "--single",
        "--na",
        "10",
        "--delta-min",
        "-0.5",
        "--delta-max",
        "0.25",
        "--steps",
        "751",
    ]);
    let single_max = spectrum_points(&single)
        .iter()
        .map(|x| x.1)
        .fold(0.0, f64::max);
    let single_ok = single_max < 1e-2 && spectrum_points(&single).len() == 751;

    // context: how typical the pinned realization is
    let uniform = DisorderSpec::centred_on(
        &p,
        DisorderDistribution::Uniform {
            omega_fraction: 0.2,
            v_fraction: 0.2,
        },
        1000,
        1,
    );
    let window = UniformGrid::new(-0.5, 0.25, 151).unwrap().points();
    let typical = (0..1000)
        .filter(|&i| {
            realization_spectrum(&sample_realization(&uniform, i), &window, &p)
                .into_iter()
                .all(|t| t.unwrap() < 1e-2)
        })
        .count();

    // Gaussian σ = 1 % of the nominal values, M = 1000
    let grid = in_band_grid(801);
    let clean: Vec<f64> = grid
        .iter()
        .map(|&d| transmission(p.energy_at(d), &p).unwrap().transmission)
        .collect();
    let gauss = DisorderSpec::centred_on(
        &p,
        DisorderDistribution::Gaussian {
            sigma_omega: 0.01 * p.omega.abs(),
            sigma_v: 0.01 * p.hopping.abs(),
        },
        1000,
        1,
    );
    let ens = ensemble_spectrum(&gauss, &grid, &p).unwrap();
    let (worst_dev, worst_at) = ens
        .rows
        .iter()
        .zip(&clean)
        .map(|(row, t)| ((row.mean_t.unwrap() - t).abs(), row.delta))
        .fold((0.0, f64::NAN), |a, b| if b.0 > a.0 { b } else { a });
    let gauss_ok = worst_dev < 0.1;

    // σ → 0 reproduces the clean curve bit for bit; the ensemble runs on the
    // lattice solver, so "clean" is the lattice solve of the clean block
    let clean_lattice: Vec<f64> = realization_spectrum(&DisorderRealization::clean(&p), &grid, &p)
        .into_iter()
        .map(Result::unwrap)
        .collect();
    let zero = DisorderSpec::centred_on(
        &p,
        DisorderDistribution::Gaussian {
            sigma_omega: 0.0,
            sigma_v: 0.0,
        },
        1000,
        1,
    );
    let zero_ens = ensemble_spectrum(&zero, &grid, &p).unwrap();
    let exact_ok = zero_ens.rows.iter().zip(&clean_lattice).all(|(row, t)| {
        row.mean_t.map(f64::to_bits) == Some(t.to_bits()) && row.std_t == Some(0.0)
    });
    let to_closed_form = zero_ens
        .rows
        .iter()
        .zip(&clean)
        .map(|(row, t)| (row.mean_t.unwrap() - t).abs())
        .fold(0.0, f64::max);

    report(
        10,
        single_ok && gauss_ok && exact_ok,
        format!(
            "single uniform realization (seed 1) max T on [−0.5, 0.25] = {single_max:.3e} \
             ({typical}/1000 realizations pass); Gaussian 1 % max |⟨T⟩ − T_clean| = {worst_dev:.4} at Δ = {worst_at:.4} (needs < 0.1); \
             σ = 0 bit-exact vs clean lattice: {exact_ok} (max {to_closed_form:.1e} from closed form)"
        ),
    );
}

#[test]
fn criterion_11_loss() {
    let args = [
        "loss",
        "--na",
        "10",
        "--gamma-a",
        "0.02",
        "--gamma-c",
        "0.01",
        "--delta-min",
        "-3",
        "--delta-max",
        "1",
        "--steps",
        "4001",
    ];
    let table = cli_table(&args);
    let col = |name: &str| table.column(name).unwrap();
    let (d, t, r, def) = (col("delta"), col("T_L"), col("R_L"), col("deficit"));
    let rows: Vec<[f64; 4]> = table
        .rows
        .iter()
        .filter_map(|row| {
            Some([
                row[d].as_f64()?,
                row[t].as_f64()?,
                row[r].as_f64()?,
                row[def].as_f64()?,
            ])
        })
        .collect();
    let band_max = rows
        .iter()
        .filter(|x| (-0.55..=0.25).contains(&x[0]))
        .map(|x| x[1])
        .fold(0.0, f64::max);
    let at_zero = rows.iter().find(|x| x[0] == 0.0).expect("Δ = 0 on grid");
    let flux_at_zero = (at_zero[1] + at_zero[2] - 1.0).abs();
    let peak = rows.iter().max_by(|a, b| a[3].total_cmp(&b[3])).unwrap();
    let edges = band_edges(&fig3(10));
    let to_edge = (peak[0] - (edges.e_minus - 6.0))
        .abs()
        .min((peak[0] - (edges.e_plus - 6.0)).abs());

    let p = fig3(10);
    let none = LossParams::default();
    let lossless_gap = in_band_grid(1001)
        .iter()
        .map(|&delta| {
            let e = p.energy_at(delta);
            (lossy_transmission(e, &none, &p).unwrap().transmission
                - transmission(e, &p).unwrap().transmission)
                .abs()
        })
        .fold(0.0, f64::max);

    let ok = band_max < 1e-3 && lossless_gap <= 1e-12 && flux_at_zero < 0.05 && to_edge <= 0.1;
    report(
        11,
        ok,
        format!(
            "max T_L on [−0.55, 0.25] = {band_max:.3e}; γ=0 max |T_L − T| = {lossless_gap:.3e}; \
             |R_L+T_L−1| at Δ=0 = {flux_at_zero:.4}; max deficit {:.4} at Δ = {:.4}, {to_edge:.4} from a gap boundary",
            peak[3], peak[0]
        ),
    );
}

#[test]
fn criterion_12_determinism() {
    let dir = tempfile::TempDir::new().unwrap();
    let run = |threads: &str, name: &str| {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_atomic-mirror"))
            .args([
                "disorder",
                "--dist",
                "uniform",
                "--samples",
                "300",
                "--seed",
                "77",
                "--steps",
                "401",
            ])
            .args(["--threads", threads, "--out", path.to_str().unwrap()])
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read(path).unwrap()
    };
    let a = run("1", "a.csv");
    let b = run("4", "b.csv");
    let c = run("4", "c.csv");
    let d = run("3", "d.csv");
    let ok = a == b && b == c && c == d && !a.is_empty();
    report(
        12,
        ok,
        format!(
            "threads 1/4/4/3 outputs identical: {ok} ({} bytes)",
            a.len()
        ),
    );
}
