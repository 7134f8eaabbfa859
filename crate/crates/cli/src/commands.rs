use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::json;

use atomic_mirror::bands::{
    band_edges, free_group_velocity, group_velocity, interaction_levels, stopped_light_region,
    width_sweep, Branch, Interval, SweepAxis,
};
use atomic_mirror::disorder::{
    ensemble_spectrum, realization_spectrum, sample_realization, DisorderDistribution,
    DisorderSpec, DEFAULT_SAMPLES,
};
use atomic_mirror::grid::UniformGrid;
use atomic_mirror::lattice::{diagonalize_interaction, solve_scattering, DisorderRealization};
use atomic_mirror::loss::{lossy_reflection, lossy_transmission, LossParams};
use atomic_mirror::model::{
    classify_energy, effective_potential_strength, incident_momentum, interaction_momentum,
    EnergyRegion, MomentumBranch,
};
use atomic_mirror::scattering::{
    closed_form_amplitudes, convergence_scan, incoherent_transmission, transmission,
};
use atomic_mirror::{Error, ModelParams};

use crate::args::{
    AxisArg, BandsArgs, BandwidthArgs, ConvergenceArgs, DisorderArgs, DistArg, LossArgs,
    SpectrumArgs, ValidateArgs,
};
use crate::config::{grid_metadata, model_metadata, ConfigFile};
use crate::table::{Cell, Table};
use crate::CliError;

/// Tolerance of every `validate` check.
pub const VALIDATE_TOL: f64 = 1e-10;

pub const SPECTRUM_COLUMNS: &[&str] = &[
    "delta",
    "E",
    "k",
    "re_kprime",
    "im_kprime",
    "T",
    "R",
    "region",
];
pub const APPROX_COLUMNS: &[&str] = &["delta", "T_exact", "T_incoherent"];
pub const BANDWIDTH_COLUMNS: &[&str] = &[
    "value",
    "L",
    "E_minus",
    "E_plus",
    "lower_below",
    "upper_below",
    "lower_above",
    "upper_above",
];
pub const BANDS_COLUMNS: &[&str] = &["n", "p", "E_minus", "E_plus", "vg_minus", "vg_plus"];
pub const FREE_COLUMNS: &[&str] = &["delta", "k", "vg"];
pub const CONVERGENCE_COLUMNS: &[&str] = &["delta", "na", "T"];
pub const ENSEMBLE_COLUMNS: &[&str] = &["delta", "mean_T", "std_T", "samples", "failures"];
pub const SINGLE_COLUMNS: &[&str] = &["delta", "T"];
pub const LOSS_COLUMNS: &[&str] = &["delta", "T_L", "R_L", "deficit"];

fn in_band(region: EnergyRegion) -> bool {
    !matches!(region, EnergyRegion::OutsideBand | EnergyRegion::BandEdge)
}

/// Per-point failures leave empty cells; a singular solve aborts the run.
fn recoverable<T>(r: atomic_mirror::Result<T>) -> Result<Option<T>, CliError> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(e @ Error::SingularSystem { .. }) => Err(CliError::Numeric(e)),
        Err(_) => Ok(None),
    }
}

fn blanks(n: usize) -> impl Iterator<Item = Cell> {
    std::iter::repeat_n(Cell::Empty, n)
}

fn grid_table(command: &str, columns: &[&str], p: &ModelParams, grid: &UniformGrid) -> Table {
    let mut table = Table::new(command, columns);
    table.set_meta("parameters", model_metadata(p));
    table.set_meta("grid", grid_metadata(grid));
    table
}

fn fill<F>(table: &mut Table, points: &[f64], row: F) -> Result<(), CliError>
where
    F: Fn(f64) -> Result<Vec<Cell>, CliError> + Sync,
{
    let rows: Vec<Vec<Cell>> = points
        .par_iter()
        .map(|&x| row(x))
        .collect::<Result<_, _>>()?;
    for r in rows {
        table.push(r);
    }
    Ok(())
}

pub fn spectrum_row(delta: f64, p: &ModelParams) -> Result<Vec<Cell>, CliError> {
    let e = p.energy_at(delta);
    let region = classify_energy(e, p);
    let mut row = vec![Cell::num(delta), Cell::num(e)];
    let res = if in_band(region) {
        recoverable(transmission(e, p))?
    } else {
        None
    };
    match res {
        Some(res) => {
            let kp = res.k_prime.map(|m| m.value);
            row.extend([
                Cell::num(res.k.abs()),
                Cell::opt(kp.map(|z| z.re)),
                Cell::opt(kp.map(|z| z.im)),
                Cell::num(res.transmission),
                Cell::num(res.reflection),
                Cell::text(res.region.as_str()),
            ]);
        }
        None => {
            row.extend(blanks(5));
            row.push(Cell::text(region.as_str()));
        }
    }
    Ok(row)
}

pub fn spectrum(args: &SpectrumArgs) -> Result<Table, CliError> {
    let cfg = ConfigFile::load(args.model.config.as_deref())?;
    let p = cfg.model(&args.model)?;
    let grid = cfg.grid(&args.grid)?;
    let mut table = grid_table("spectrum", SPECTRUM_COLUMNS, &p, &grid);
    fill(&mut table, &grid.points(), |d| spectrum_row(d, &p))?;
    Ok(table)
}

pub fn spectrum_approx(args: &SpectrumArgs) -> Result<Table, CliError> {
    let cfg = ConfigFile::load(args.model.config.as_deref())?;
    let p = cfg.model(&args.model)?;
    let grid = cfg.grid(&args.grid)?;
    let mut table = grid_table("spectrum-approx", APPROX_COLUMNS, &p, &grid);
    fill(&mut table, &grid.points(), |delta| {
        let e = p.energy_at(delta);
        if !in_band(classify_energy(e, &p)) {
            return Ok(vec![Cell::num(delta), Cell::Empty, Cell::Empty]);
        }
        let exact = recoverable(transmission(e, &p))?.map(|r| r.transmission);
        let approx = recoverable(incoherent_transmission(e, &p))?;
        Ok(vec![Cell::num(delta), Cell::opt(exact), Cell::opt(approx)])
    })?;
    Ok(table)
}

fn axis(a: AxisArg) -> SweepAxis {
    match a {
        AxisArg::Hopping => SweepAxis::Hopping,
        AxisArg::Coupling => SweepAxis::Coupling,
        AxisArg::AtomOmega => SweepAxis::AtomOmega,
        AxisArg::Omega => SweepAxis::Omega,
    }
}

fn axis_name(a: AxisArg) -> &'static str {
    match a {
        AxisArg::Hopping => "V",
        AxisArg::Coupling => "g",
        AxisArg::AtomOmega => "Omega",
        AxisArg::Omega => "omega",
    }
}

fn parse_axis(s: &str) -> Result<AxisArg, CliError> {
    <AxisArg as clap::ValueEnum>::from_str(s, false)
        .map_err(|_| CliError::Config(format!("unknown axis {s:?}")))
}

/// Splits the intervals into the one below Ω and the one above it.
fn interval_slots(intervals: &[Interval], atom_omega: f64) -> [Option<Interval>; 2] {
    let mut slots = [None, None];
    for iv in intervals {
        let slot = if iv.lower < atom_omega { 0 } else { 1 };
        slots[slot] = Some(*iv);
    }
    slots
}

pub fn bandwidth(args: &BandwidthArgs) -> Result<Table, CliError> {
    let cfg = ConfigFile::load(args.model.config.as_deref())?;
    let p = cfg.model(&args.model)?;
    let axis_arg = match args.axis {
        Some(a) => a,
        None => parse_axis(&cfg.get::<String>("axis")?.unwrap_or_else(|| "g".into()))?,
    };
    let sweep = UniformGrid::new(
        cfg.pick(args.min, "min", 0.0)?,
        cfg.pick(args.max, "max", 5.0)?,
        cfg.pick(args.steps, "steps", 501)?,
    )
    .map_err(|e| CliError::Config(e.to_string()))?;
    let mut table = Table::new("bandwidth", BANDWIDTH_COLUMNS);
    table.set_meta("parameters", model_metadata(&p));
    table.set_meta(
        "sweep",
        json!({"axis": axis_name(axis_arg), "min": sweep.min, "max": sweep.max, "steps": sweep.steps}),
    );
    let ax = axis(axis_arg);
    for (value, report) in width_sweep(&p, ax, &sweep.points()) {
        let omega_a = ax.apply(&p, value).atom_omega;
        let mut row = vec![
            Cell::num(value),
            Cell::num(report.width),
            Cell::num(report.e_minus),
            Cell::num(report.e_plus),
        ];
        for slot in interval_slots(&report.intervals, omega_a) {
            row.push(Cell::opt(slot.map(|iv| iv.lower)));
            row.push(Cell::opt(slot.map(|iv| iv.upper)));
        }
        table.push(row);
    }
    Ok(table)
}

pub fn bands(args: &BandsArgs) -> Result<Table, CliError> {
    let cfg = ConfigFile::load(args.model.config.as_deref())?;
    let p = cfg.model(&args.model)?;
    if cfg.switch(args.free, "free")? {
        let grid = cfg.grid(&args.grid)?;
        let mut table = grid_table("bands", FREE_COLUMNS, &p, &grid);
        table.set_meta("free", true);
        fill(&mut table, &grid.points(), |delta| {
            let k = incident_momentum(p.energy_at(delta), &p).ok();
            Ok(vec![
                Cell::num(delta),
                Cell::opt(k.map(f64::abs)),
                Cell::opt(k.map(|k| free_group_velocity(k, &p))),
            ])
        })?;
        return Ok(table);
    }
    let mut table = Table::new("bands", BANDS_COLUMNS);
    table.set_meta("parameters", model_metadata(&p));
    for level in interaction_levels(&p).levels {
        table.push(vec![
            Cell::int(level.n),
            Cell::num(level.p),
            Cell::num(level.minus.energy),
            Cell::num(level.plus.energy),
            Cell::num(group_velocity(level.p, Branch::Minus, &p)),
            Cell::num(group_velocity(level.p, Branch::Plus, &p)),
        ]);
    }
    Ok(table)
}

pub fn convergence(args: &ConvergenceArgs) -> Result<Table, CliError> {
    let cfg = ConfigFile::load(args.model.config.as_deref())?;
    let p = cfg.model(&args.model)?;
    let mut deltas: Vec<f64> = cfg.list(args.deltas.clone(), "deltas")?;
    if cfg.switch(args.band_edges, "band-edges")? {
        let report = band_edges(&p);
        deltas.push(report.e_minus - p.atom_omega);
        deltas.push(report.e_plus - p.atom_omega);
    }
    if deltas.is_empty() {
        return Err(CliError::Config(
            "convergence needs --deltas or --band-edges".into(),
        ));
    }
    let mut na_list: Vec<usize> = cfg.list(args.na_list.clone(), "na-list")?;
    if na_list.is_empty() {
        let lo = cfg.pick(args.na_min, "na-min", 1)?;
        let hi = cfg.pick(args.na_max, "na-max", 100)?;
        na_list = (lo..=hi).collect();
    }
    if na_list.is_empty() || na_list.contains(&0) {
        return Err(CliError::Config(
            "atom counts must be a nonempty list of positive integers".into(),
        ));
    }
    let mut table = Table::new("convergence", CONVERGENCE_COLUMNS);
    table.set_meta("parameters", model_metadata(&p));
    table.set_meta("deltas", &deltas);
    table.set_meta("na-list", &na_list);
    let scans: Vec<Vec<(usize, f64)>> = deltas
        .par_iter()
        .map(|&d| convergence_scan(d, &p, &na_list).map_err(CliError::from))
        .collect::<Result<_, _>>()?;
    for (&delta, scan) in deltas.iter().zip(scans) {
        for (na, t) in scan {
            table.push(vec![Cell::num(delta), Cell::int(na), Cell::num(t)]);
        }
    }
    Ok(table)
}

pub fn disorder_spec(
    args: &DisorderArgs,
    cfg: &ConfigFile,
    p: &ModelParams,
) -> Result<DisorderSpec, CliError> {
    let dist = match args.dist {
        Some(d) => d,
        None => match cfg.get::<String>("dist")?.as_deref() {
            None => DistArg::Uniform,
            Some(s) => <DistArg as clap::ValueEnum>::from_str(s, false)
                .map_err(|_| CliError::Config(format!("unknown distribution {s:?}")))?,
        },
    };
    let distribution = match dist {
        DistArg::Uniform => {
            let f = cfg.pick(args.width_frac, "width-frac", 0.2)?;
            DisorderDistribution::Uniform {
                omega_fraction: f,
                v_fraction: f,
            }
        }
        DistArg::Gauss => DisorderDistribution::Gaussian {
            sigma_omega: cfg.pick(args.sigma_omega, "sigma-omega", 0.01 * p.omega.abs())?,
            sigma_v: cfg.pick(args.sigma_v, "sigma-v", 0.01 * p.hopping.abs())?,
        },
    };
    let spec = DisorderSpec::centred_on(
        p,
        distribution,
        cfg.pick(args.samples, "samples", DEFAULT_SAMPLES)?,
        cfg.pick(args.seed, "seed", 1)?,
    );
    spec.validate()
        .map_err(|e| CliError::Config(e.to_string()))?;
    Ok(spec)
}

pub fn disorder(args: &DisorderArgs) -> Result<Table, CliError> {
    let cfg = ConfigFile::load(args.model.config.as_deref())?;
    let p = cfg.model(&args.model)?;
    let grid = cfg.grid(&args.grid)?;
    let spec = disorder_spec(args, &cfg, &p)?;
    let points = grid.points();

    if cfg.switch(args.single, "single")? {
        let index = cfg.pick(args.realization, "realization", 0)?;
        let real = sample_realization(&spec, index);
        let mut table = grid_table("disorder", SINGLE_COLUMNS, &p, &grid);
        table.set_meta("disorder", spec);
        table.set_meta("seed", spec.seed);
        table.set_meta(
            "realization",
            json!({"index": index, "omega_sites": real.omega_sites, "v_bonds": real.v_bonds}),
        );
        fill(&mut table, &points, |delta| {
            let t = realization_spectrum(&real, &[delta], &p)
                .pop()
                .expect("one point");
            Ok(vec![Cell::num(delta), Cell::opt(recoverable(t)?)])
        })?;
        return Ok(table);
    }

    let ensemble = ensemble_spectrum(&spec, &points, &p)?;
    let mut table = grid_table("disorder", ENSEMBLE_COLUMNS, &p, &grid);
    table.set_meta("disorder", spec);
    table.set_meta("seed", spec.seed);
    for row in ensemble.rows {
        table.push(vec![
            Cell::num(row.delta),
            Cell::opt(row.mean_t),
            Cell::opt(row.std_t),
            Cell::int(row.samples),
            Cell::int(row.failures),
        ]);
    }
    Ok(table)
}

pub fn loss(args: &LossArgs) -> Result<Table, CliError> {
    let cfg = ConfigFile::load(args.model.config.as_deref())?;
    let p = cfg.model(&args.model)?;
    let grid = cfg.grid(&args.grid)?;
    let rates = LossParams::new(
        cfg.pick(args.gamma_a, "gamma-a", 0.0)?,
        cfg.pick(args.gamma_c, "gamma-c", 0.0)?,
    )
    .map_err(|e| CliError::Config(e.to_string()))?;
    let mut table = grid_table("loss", LOSS_COLUMNS, &p, &grid);
    table.set_meta(
        "loss",
        json!({"gamma-a": rates.gamma_a, "gamma-c": rates.gamma_c}),
    );
    fill(&mut table, &grid.points(), |delta| {
        let e = p.energy_at(delta);
        let t = recoverable(lossy_transmission(e, &rates, &p))?.map(|x| x.transmission);
        let r = recoverable(lossy_reflection(e, &rates, &p))?;
        let deficit = t.zip(r).map(|(t, r)| 1.0 - r - t);
        Ok(vec![
            Cell::num(delta),
            Cell::opt(t),
            Cell::opt(r),
            Cell::opt(deficit),
        ])
    })?;
    Ok(table)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub max_residual: f64,
    pub passed: bool,
}

impl std::fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{:<20} {} max residual {:.3e} (tol {:.0e})",
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.max_residual,
            VALIDATE_TOL
        )
    }
}

fn check(name: &'static str, residuals: impl IntoIterator<Item = f64>) -> CheckOutcome {
    let mut max = 0.0f64;
    let mut finite = true;
    for r in residuals {
        finite &= r.is_finite();
        max = max.max(r);
    }
    CheckOutcome {
        name,
        max_residual: if finite { max } else { f64::NAN },
        passed: finite && max <= VALIDATE_TOL,
    }
}

/// Closed-form transmission evaluated with the hopping sign flipped in the
/// amplitude formula only.
fn corrupted_transmission(e: f64, p: &ModelParams) -> atomic_mirror::Result<f64> {
    let k = incident_momentum(e, p)?;
    let w = effective_potential_strength(e, p)?;
    let kp = interaction_momentum(e, p)?;
    if kp.branch == MomentumBranch::Edge {
        return Ok(transmission(e, p)?.transmission);
    }
    let (_, t) = closed_form_amplitudes(k, kp.value, Complex64::new(w, 0.0), -p.hopping, p.n_atoms);
    Ok(t.norm_sqr())
}

/// Runs the cross-checks on the in-band, non-edge points of the grid.
pub fn run_checks(
    p: &ModelParams,
    grid: &UniformGrid,
    self_test: bool,
) -> Result<Vec<CheckOutcome>, CliError> {
    let points: Vec<f64> = grid
        .points()
        .into_iter()
        .map(|d| p.energy_at(d))
        .filter(|&e| in_band(classify_energy(e, p)))
        .collect();
    if points.is_empty() {
        return Err(CliError::Config("grid has no in-band points".into()));
    }
    let half = points.len() / 2;
    let clean = DisorderRealization::clean(p);
    let per_point: Vec<(f64, f64, f64)> = points
        .par_iter()
        .enumerate()
        .map(|(i, &e)| {
            let closed = transmission(e, p)?;
            let lattice = solve_scattering(e, &clean, p)?;
            let t_closed = if self_test && i >= half {
                match corrupted_transmission(e, p) {
                    Err(Error::Resonance { .. }) => closed.transmission,
                    other => other?,
                }
            } else {
                closed.transmission
            };
            Ok((
                (t_closed - lattice.transmission()).abs(),
                (closed.reflection + closed.transmission - 1.0).abs(),
                (lattice.reflection() + lattice.transmission() - 1.0).abs(),
            ))
        })
        .collect::<atomic_mirror::Result<_>>()?;

    let levels = interaction_levels(p).sorted_energies();
    let dense = diagonalize_interaction(&clean, p);
    let report = band_edges(p);
    let stopped = stopped_light_region(p);

    Ok(vec![
        check("oracle-equivalence", per_point.iter().map(|x| x.0)),
        check("unitarity", per_point.iter().flat_map(|x| [x.1, x.2])),
        check(
            "diagonalization",
            levels.iter().zip(&dense).map(|(a, b)| (a - b).abs()),
        ),
        check(
            "gap-edges",
            [
                (stopped.lower - report.e_minus).abs(),
                (stopped.upper - report.e_plus).abs(),
            ],
        ),
    ])
}

pub fn validate(args: &ValidateArgs) -> Result<Vec<CheckOutcome>, CliError> {
    let cfg = ConfigFile::load(args.model.config.as_deref())?;
    let p = cfg.model(&args.model)?;
    let grid = cfg.grid(&args.grid)?;
    run_checks(&p, &grid, cfg.switch(args.self_test, "self-test")?)
}
