//! Command-line surface over the `planckfield` library: spectra, field
//! corrections, heat-capacity sweeps, fits, and scalar evaluations, emitted
//! as CSV or JSON tables ready for plotting.
//!
//! Exit codes: 0 on success (an unconverged fit is a data outcome, not a
//! failure), 1 on input errors, 2 on numerical failures.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use planckfield::extfield::{
    generalized_spectral_density, generalized_total_energy, q_of_omega, scan_field_diagnostics,
    ExternalField,
};
use planckfield::fitting::{
    fit_generalized, fit_planck, read_csv_path, FitResult, FixedParams, GeneralizedBounds,
    ModelKind,
};
use planckfield::heat::{
    debye_heat_capacity, debye_solid_from_debye_temperature, debye_solid_from_material,
    einstein_heat_capacity, generalized_phonon_heat_capacity, DebyeSolid, EinsteinSolid,
};
use planckfield::radiation::{
    planck_spectral_density, planck_spectrum, planck_spectrum_nd, GridSpacing, PhysicalConstants,
    SpectralGrid, UnitsMode,
};
use planckfield::specfun::{
    bose_integral, debye_function, incomplete_bose_integral, planck_peak, QuadratureSpec,
};
use planckfield::{Error, Result};

#[derive(Parser)]
#[command(
    name = "planckfield",
    version,
    about = "Thermal radiation spectra, external-field corrections, lattice heat capacities, and spectrum fitting"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the equilibrium spectral energy density over a frequency grid
    Spectrum(SpectrumArgs),
    /// Tabulate the spectral density in an external field, with diagnostics
    GenSpectrum(GenSpectrumArgs),
    /// Sweep a lattice heat-capacity model over temperature
    Heat(HeatArgs),
    /// Fit a spectrum model to a CSV dataset (output is always JSON)
    Fit(FitArgs),
    /// Evaluate the thermal integral of a given order
    Integrate(IntegrateArgs),
    /// Locate the spectral peak position in units of ħω/kT
    Peak(PeakArgs),
    /// Evaluate the third-order Debye function
    DebyeFn(DebyeFnArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct GridArgs {
    /// Lower edge of the angular-frequency grid [default: 1e-3·kT/ħ]
    #[arg(long, allow_negative_numbers = true)]
    omega_min: Option<f64>,
    /// Upper edge of the angular-frequency grid [default: 50·kT/ħ]
    #[arg(long, allow_negative_numbers = true)]
    omega_max: Option<f64>,
    /// Number of grid points
    #[arg(long, default_value_t = 512)]
    points: usize,
    /// Grid spacing (linear or log)
    #[arg(long, default_value = "log")]
    grid: GridSpacing,
}

impl GridArgs {
    fn resolve(&self, t: f64, consts: &PhysicalConstants) -> Result<SpectralGrid> {
        let scale = consts.k_boltzmann() * t / consts.hbar();
        let lo = self.omega_min.unwrap_or(1e-3 * scale);
        let hi = self.omega_max.unwrap_or(50.0 * scale);
        SpectralGrid::new(lo, hi, self.points, self.grid)
    }
}

#[derive(Args)]
struct SpectrumArgs {
    /// Radiation temperature
    #[arg(long, allow_negative_numbers = true)]
    temperature: f64,
    /// Spatial dimension of the cavity
    #[arg(long, default_value_t = 3)]
    dim: u32,
    #[command(flatten)]
    grid: GridArgs,
    /// Unit system (si or natural)
    #[arg(long, default_value = "si")]
    units: UnitsMode,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    output: OutputFormat,
}

#[derive(Args)]
struct FieldArgs {
    /// Uniform pumping coefficient P (β)
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    p_const: f64,
    /// Frequency-dependent channel amplitude R
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    q_amplitude: f64,
    /// Frequency-dependent channel decay rate S
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    q_decay: f64,
}

impl FieldArgs {
    fn build(&self) -> Result<ExternalField> {
        ExternalField::new(self.p_const, self.q_amplitude, self.q_decay)
    }
}

#[derive(Args)]
struct GenSpectrumArgs {
    /// Radiation temperature
    #[arg(long, allow_negative_numbers = true)]
    temperature: f64,
    #[command(flatten)]
    field: FieldArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// Append field diagnostics (negativity, energy finiteness)
    #[arg(long)]
    diagnose: bool,
    /// Append the total energy density of the generalized spectrum
    #[arg(long)]
    integrate: bool,
    /// Unit system (si or natural)
    #[arg(long, default_value = "si")]
    units: UnitsMode,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    output: OutputFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum HeatModel {
    Einstein,
    Debye,
    DebyeGeneralized,
}

impl HeatModel {
    fn as_str(self) -> &'static str {
        match self {
            HeatModel::Einstein => "einstein",
            HeatModel::Debye => "debye",
            HeatModel::DebyeGeneralized => "debye-generalized",
        }
    }
}

#[derive(Args)]
struct HeatArgs {
    /// Lattice model (einstein, debye, or debye-generalized)
    #[arg(long, value_enum)]
    model: HeatModel,
    /// Oscillator frequency ω_E (einstein model)
    #[arg(long, allow_negative_numbers = true)]
    omega_e: Option<f64>,
    /// Number of atoms/oscillators (einstein, or debye via --debye-temp)
    #[arg(long, allow_negative_numbers = true)]
    n: Option<f64>,
    /// Atom number density (debye material parameterization)
    #[arg(long, allow_negative_numbers = true)]
    n_density: Option<f64>,
    /// Transverse sound speed (debye material parameterization)
    #[arg(long, allow_negative_numbers = true)]
    vt: Option<f64>,
    /// Longitudinal sound speed (debye material parameterization)
    #[arg(long, allow_negative_numbers = true)]
    vl: Option<f64>,
    /// Crystal volume [default: 1]
    #[arg(long, allow_negative_numbers = true)]
    volume: Option<f64>,
    /// Debye temperature (debye temperature parameterization, with --n)
    #[arg(long, allow_negative_numbers = true)]
    debye_temp: Option<f64>,
    /// Sweep start temperature
    #[arg(long, allow_negative_numbers = true)]
    t_min: f64,
    /// Sweep end temperature
    #[arg(long, allow_negative_numbers = true)]
    t_max: f64,
    /// Number of sweep points
    #[arg(long, default_value_t = 50)]
    points: usize,
    #[command(flatten)]
    field: FieldArgs,
    /// Unit system (si or natural)
    #[arg(long, default_value = "si")]
    units: UnitsMode,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    output: OutputFormat,
}

#[derive(Args)]
struct FitArgs {
    /// Input CSV dataset (schema: `# abscissa_kind/ordinate_kind/units`
    /// comments, then `abscissa,value[,sigma]` rows)
    #[arg(long)]
    input: PathBuf,
    /// Model to fit (planck or generalized)
    #[arg(long)]
    model: ModelKind,
    /// Pin parameters, e.g. `--fix beta=0,S=3` (keys: T, beta, R, S)
    #[arg(long)]
    fix: Option<String>,
    /// Override box constraints, e.g. `--bounds T=100:9000,R=0:0.5`
    #[arg(long)]
    bounds: Option<String>,
    /// Random seed for the multi-start search
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct IntegrateArgs {
    /// Power of the integration variable
    #[arg(long)]
    order: u32,
    /// Finite upper limit (defaults to the full half-line)
    #[arg(long, allow_negative_numbers = true)]
    upper: Option<f64>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    output: OutputFormat,
}

#[derive(Args)]
struct PeakArgs {
    /// Spatial dimension of the cavity
    #[arg(long, default_value_t = 3)]
    dim: u32,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    output: OutputFormat,
}

#[derive(Args)]
struct DebyeFnArgs {
    /// Argument y = T_D/T
    #[arg(long, allow_negative_numbers = true)]
    y: f64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    output: OutputFormat,
}

/// A finished command result: provenance comments plus a numeric table.
struct Envelope {
    /// `(key, value)` pairs echoed as `# key: value` comments (CSV) or a
    /// string-valued "provenance" object (JSON), in insertion order.
    provenance: Vec<(String, String)>,
    columns: Vec<&'static str>,
    rows: Vec<Vec<f64>>,
}

impl Envelope {
    fn new(columns: Vec<&'static str>) -> Self {
        Envelope {
            provenance: Vec::new(),
            columns,
            rows: Vec::new(),
        }
    }

    fn note(&mut self, key: &str, value: impl AsRef<str>) {
        self.provenance
            .push((key.to_string(), value.as_ref().to_string()));
    }

    fn note_f64(&mut self, key: &str, value: f64) {
        self.note(key, format!("{value:.16e}"));
    }

    fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => {
                let mut out = String::new();
                for (k, v) in &self.provenance {
                    out.push_str(&format!("# {k}: {v}\n"));
                }
                out.push_str(&self.columns.join(","));
                out.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
                out
            }
            OutputFormat::Json => {
                let mut root = serde_json::Map::new();
                let prov: serde_json::Map<String, serde_json::Value> = self
                    .provenance
                    .iter()
                    .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
                    .collect();
                root.insert("provenance".into(), serde_json::Value::Object(prov));
                root.insert(
                    "columns".into(),
                    serde_json::Value::Array(
                        self.columns
                            .iter()
                            .map(|c| serde_json::Value::String((*c).to_string()))
                            .collect(),
                    ),
                );
                root.insert(
                    "rows".into(),
                    serde_json::Value::Array(
                        self.rows
                            .iter()
                            .map(|row| {
                                serde_json::Value::Array(
                                    row.iter().map(|&v| json_number(v)).collect(),
                                )
                            })
                            .collect(),
                    ),
                );
                let mut text = to_json_17(&serde_json::Value::Object(root));
                text.push('\n');
                text
            }
        }
    }
}

fn json_number(v: f64) -> serde_json::Value {
    serde_json::Number::from_f64(v).map_or(serde_json::Value::Null, serde_json::Value::Number)
}

/// JSON serializer writing every float with 17 significant digits, so JSON
/// and CSV renderings of the same run carry textually identical numbers.
struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W: ?Sized + std::io::Write>(
        &mut self,
        writer: &mut W,
        value: f64,
    ) -> std::io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

fn to_json_17(value: &serde_json::Value) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFormatter);
    serde::Serialize::serialize(value, &mut ser).expect("JSON serialization cannot fail");
    String::from_utf8(buf).expect("serializer emits UTF-8")
}

fn require_positive(flag: &str, value: f64) -> Result<()> {
    if !value.is_finite() || value <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "{flag} must be positive and finite, got {value}"
        )));
    }
    Ok(())
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(cli) {
        Ok(text) => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).expect("stdout write");
        }
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(if err.is_input_error() { 1 } else { 2 });
        }
    }
}

fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Spectrum(args) => cmd_spectrum(args),
        Command::GenSpectrum(args) => cmd_gen_spectrum(args),
        Command::Heat(args) => cmd_heat(args),
        Command::Fit(args) => cmd_fit(args),
        Command::Integrate(args) => cmd_integrate(args),
        Command::Peak(args) => cmd_peak(args),
        Command::DebyeFn(args) => cmd_debye_fn(args),
    }
}

/// Echo the resolved grid so the provenance comments round-trip: re-running
/// with these values reproduces the numeric output byte for byte.
fn note_grid(env: &mut Envelope, grid: &SpectralGrid) {
    env.note_f64("omega-min", grid.omega_min());
    env.note_f64("omega-max", grid.omega_max());
    env.note("points", grid.points().to_string());
    env.note("grid", grid.spacing().as_str());
}

fn cmd_spectrum(args: SpectrumArgs) -> Result<String> {
    require_positive("--temperature", args.temperature)?;
    if args.dim == 0 {
        return Err(Error::InvalidInput(
            "--dim must be at least 1, got 0".to_string(),
        ));
    }
    let consts = PhysicalConstants::for_mode(args.units);
    let grid = args.grid.resolve(args.temperature, &consts)?;
    let spectrum = if args.dim == 3 {
        planck_spectrum(&grid, args.temperature, &consts)?
    } else {
        planck_spectrum_nd(&grid, args.temperature, args.dim, &consts)?
    };

    // The dataset schema keys come first so this output feeds `fit` directly.
    let mut env = Envelope::new(vec!["abscissa", "value"]);
    env.note("abscissa_kind", "angular");
    env.note("ordinate_kind", "per_omega");
    env.note("units", args.units.as_str());
    env.note("command", "spectrum");
    env.note_f64("temperature", args.temperature);
    env.note("dim", args.dim.to_string());
    note_grid(&mut env, &grid);
    env.rows = spectrum.samples.iter().map(|&(w, r)| vec![w, r]).collect();
    Ok(env.render(args.output))
}

fn cmd_gen_spectrum(args: GenSpectrumArgs) -> Result<String> {
    require_positive("--temperature", args.temperature)?;
    let consts = PhysicalConstants::for_mode(args.units);
    let field = args.field.build()?;
    let grid = args.grid.resolve(args.temperature, &consts)?;

    let mut env = Envelope::new(vec![
        "omega",
        "rho_general",
        "rho_planck",
        "relative_correction",
    ]);
    env.note("units", args.units.as_str());
    env.note("command", "gen-spectrum");
    env.note_f64("temperature", args.temperature);
    env.note_f64("p-const", field.p_coeff());
    env.note_f64("q-amplitude", field.q_amplitude());
    env.note_f64("q-decay", field.q_decay());
    note_grid(&mut env, &grid);

    for w in grid.omegas() {
        let general = generalized_spectral_density(w, args.temperature, &field, &consts)?;
        let planck = planck_spectral_density(w, args.temperature, &consts)?;
        // (ρ_gen − ρ_planck)/ρ_planck in closed form: P − Q(ω)e^x. The
        // closed form keeps a pure-P field's column exactly constant.
        let q = q_of_omega(&field, w);
        let x = consts.hbar() * w / (consts.k_boltzmann() * args.temperature);
        let correction = if q == 0.0 {
            field.p_coeff()
        } else if x > 700.0 {
            f64::NEG_INFINITY
        } else {
            field.p_coeff() - q * x.exp()
        };
        env.rows.push(vec![w, general, planck, correction]);
    }

    if args.diagnose {
        let diag = scan_field_diagnostics(&field, args.temperature, &grid, &consts)?;
        match diag.first_negative_omega {
            Some(w) => env.note_f64("first_negative_omega", w),
            None => env.note("first_negative_omega", "none"),
        }
        env.note("energy_finite", diag.energy_finite.to_string());
        env.note_f64("max_relative_correction", diag.max_relative_correction);
    }
    if args.integrate {
        let total = generalized_total_energy(
            args.temperature,
            &field,
            &consts,
            &QuadratureSpec::default(),
        )?;
        env.note_f64("total_energy", total);
    }
    Ok(env.render(args.output))
}

enum Lattice {
    Einstein(EinsteinSolid),
    Debye(DebyeSolid),
}

/// Build the lattice from exactly one consistent flag set.
fn build_lattice(args: &HeatArgs, consts: &PhysicalConstants) -> Result<Lattice> {
    let material = [args.n_density, args.vt, args.vl];
    let any_material = material.iter().any(Option::is_some) || args.volume.is_some();
    match args.model {
        HeatModel::Einstein => {
            if any_material || args.debye_temp.is_some() {
                return Err(Error::InvalidInput(
                    "the einstein model takes only --omega-e and --n".to_string(),
                ));
            }
            let omega_e = args.omega_e.ok_or_else(|| {
                Error::InvalidInput("the einstein model requires --omega-e".to_string())
            })?;
            let n = args.n.ok_or_else(|| {
                Error::InvalidInput("the einstein model requires --n".to_string())
            })?;
            Ok(Lattice::Einstein(EinsteinSolid::new(n, omega_e)?))
        }
        HeatModel::Debye | HeatModel::DebyeGeneralized => {
            if args.omega_e.is_some() {
                return Err(Error::InvalidInput(
                    "--omega-e belongs to the einstein model".to_string(),
                ));
            }
            let full_material = material.iter().all(Option::is_some);
            let by_temperature = args.debye_temp.is_some();
            if by_temperature && (full_material || material.iter().any(Option::is_some)) {
                return Err(Error::InvalidInput(
                    "give either --debye-temp with --n, or --n-density/--vt/--vl, not both"
                        .to_string(),
                ));
            }
            let volume = args.volume.unwrap_or(1.0);
            if by_temperature {
                let n = args.n.ok_or_else(|| {
                    Error::InvalidInput("--debye-temp requires --n".to_string())
                })?;
                Ok(Lattice::Debye(debye_solid_from_debye_temperature(
                    args.debye_temp.unwrap(),
                    n,
                    volume,
                    consts,
                )?))
            } else if full_material {
                if args.n.is_some() {
                    return Err(Error::InvalidInput(
                        "--n belongs to the --debye-temp parameterization; the material one fixes the count via --n-density and --volume"
                            .to_string(),
                    ));
                }
                Ok(Lattice::Debye(debye_solid_from_material(
                    args.n_density.unwrap(),
                    args.vt.unwrap(),
                    args.vl.unwrap(),
                    volume,
                    consts,
                )?))
            } else {
                Err(Error::InvalidInput(
                    "the debye models require --n-density, --vt and --vl (with optional --volume), or --debye-temp with --n"
                        .to_string(),
                ))
            }
        }
    }
}

fn cmd_heat(args: HeatArgs) -> Result<String> {
    require_positive("--t-min", args.t_min)?;
    require_positive("--t-max", args.t_max)?;
    if args.t_max <= args.t_min {
        return Err(Error::InvalidInput(format!(
            "--t-max must exceed --t-min, got {} and {}",
            args.t_max, args.t_min
        )));
    }
    if args.points < 2 {
        return Err(Error::InvalidInput(format!(
            "--points must be at least 2, got {}",
            args.points
        )));
    }
    if args.model != HeatModel::DebyeGeneralized
        && (args.field.p_const != 0.0
            || args.field.q_amplitude != 0.0
            || args.field.q_decay != 0.0)
    {
        return Err(Error::InvalidInput(
            "field flags apply only to --model debye-generalized".to_string(),
        ));
    }

    let consts = PhysicalConstants::for_mode(args.units);
    let lattice = build_lattice(&args, &consts)?;
    let field = args.field.build()?;
    let spec = QuadratureSpec::default();

    let mut env = Envelope::new(vec![
        "temperature",
        "heat_capacity",
        "heat_capacity_over_classical",
    ]);
    env.note("units", args.units.as_str());
    env.note("command", "heat");
    env.note("model", args.model.as_str());
    let classical = match &lattice {
        Lattice::Einstein(solid) => {
            env.note_f64("omega-e", solid.omega_e());
            env.note_f64("n", solid.n_oscillators());
            3.0 * solid.n_oscillators() * consts.k_boltzmann()
        }
        Lattice::Debye(solid) => {
            env.note_f64("n-density", solid.n_density());
            env.note_f64("volume", solid.volume());
            env.note_f64("omega_d", solid.omega_d());
            env.note_f64("t_d", solid.t_d());
            env.note_f64("c_eff", solid.c_eff());
            3.0 * solid.n_oscillators() * consts.k_boltzmann()
        }
    };
    if args.model == HeatModel::DebyeGeneralized {
        env.note_f64("p-const", field.p_coeff());
        env.note_f64("q-amplitude", field.q_amplitude());
        env.note_f64("q-decay", field.q_decay());
    }
    env.note_f64("t-min", args.t_min);
    env.note_f64("t-max", args.t_max);
    env.note("points", args.points.to_string());

    let step = (args.t_max - args.t_min) / (args.points - 1) as f64;
    for k in 0..args.points {
        let t = if k == args.points - 1 {
            args.t_max
        } else {
            args.t_min + step * k as f64
        };
        let c = match (&lattice, args.model) {
            (Lattice::Einstein(solid), _) => einstein_heat_capacity(solid, t, &consts)?,
            (Lattice::Debye(solid), HeatModel::Debye) => debye_heat_capacity(solid, t, &consts)?,
            (Lattice::Debye(solid), _) => {
                generalized_phonon_heat_capacity(solid, t, &field, &consts, &spec)?
            }
        };
        env.rows.push(vec![t, c, c / classical]);
    }
    Ok(env.render(args.output))
}

/// Parse `key=value` pairs separated by commas against the model's
/// parameter names.
fn parse_pairs<'a>(
    text: &'a str,
    flag: &str,
    allowed: &[&str],
) -> Result<Vec<(&'a str, &'a str)>> {
    let mut out = Vec::new();
    for item in text.split(',').filter(|s| !s.trim().is_empty()) {
        let (key, value) = item.split_once('=').ok_or_else(|| {
            Error::InvalidInput(format!("{flag}: expected key=value, got '{item}'"))
        })?;
        let key = key.trim();
        if !allowed.contains(&key) {
            return Err(Error::InvalidInput(format!(
                "{flag}: unknown parameter '{key}' (expected one of {})",
                allowed.join(", ")
            )));
        }
        out.push((key, value.trim()));
    }
    Ok(out)
}

fn parse_f64(flag: &str, text: &str) -> Result<f64> {
    text.parse::<f64>()
        .map_err(|_| Error::InvalidInput(format!("{flag}: '{text}' is not a number")))
}

fn cmd_fit(args: FitArgs) -> Result<String> {
    let (dataset, units) = read_csv_path(&args.input)?;
    let consts = PhysicalConstants::for_mode(units);

    // Wien-style default temperature window from the brightest sample.
    let canonical = dataset.to_canonical(&consts)?;
    let omega_hat = canonical
        .samples()
        .iter()
        .max_by(|a, b| a.value.total_cmp(&b.value))
        .expect("dataset is non-empty")
        .abscissa;
    let x_peak = planck_peak(3)?;
    let t_wien = consts.hbar() * omega_hat / (consts.k_boltzmann() * x_peak);

    let allowed: &[&str] = match args.model {
        ModelKind::Planck => &["T"],
        ModelKind::Generalized => &["T", "beta", "R", "S"],
    };
    let mut bounds = GeneralizedBounds {
        t: (t_wien / 50.0, 50.0 * t_wien),
        beta: (-0.9, 9.0),
        r: (0.0, 10.0),
        s: (0.0, 10.0 * x_peak / omega_hat),
    };
    if let Some(text) = &args.bounds {
        for (key, value) in parse_pairs(text, "--bounds", allowed)? {
            let (lo, hi) = value.split_once(':').ok_or_else(|| {
                Error::InvalidInput(format!("--bounds: expected {key}=lo:hi, got '{value}'"))
            })?;
            let pair = (parse_f64("--bounds", lo)?, parse_f64("--bounds", hi)?);
            match key {
                "T" => bounds.t = pair,
                "beta" => bounds.beta = pair,
                "R" => bounds.r = pair,
                _ => bounds.s = pair,
            }
        }
    }
    let mut fixed = FixedParams::default();
    if let Some(text) = &args.fix {
        for (key, value) in parse_pairs(text, "--fix", allowed)? {
            let v = parse_f64("--fix", value)?;
            match key {
                "T" => fixed.t = Some(v),
                "beta" => fixed.beta = Some(v),
                "R" => fixed.r = Some(v),
                _ => fixed.s = Some(v),
            }
        }
    }

    let fit = match args.model {
        ModelKind::Planck => fit_planck(&dataset, bounds.t, &consts)?,
        ModelKind::Generalized => fit_generalized(&dataset, &bounds, &fixed, &consts, args.seed)?,
    };

    let mut provenance = serde_json::Map::new();
    let mut prov = |k: &str, v: String| {
        provenance.insert(k.to_string(), serde_json::Value::String(v));
    };
    prov("command", "fit".to_string());
    prov("input", args.input.display().to_string());
    prov("model", args.model.to_string());
    prov("units", units.as_str().to_string());
    prov("seed", args.seed.to_string());
    let (tl, th) = bounds.t;
    prov("bounds_T", format!("{tl:.16e}:{th:.16e}"));
    if args.model == ModelKind::Generalized {
        let (bl, bh) = bounds.beta;
        let (rl, rh) = bounds.r;
        let (sl, sh) = bounds.s;
        prov("bounds_beta", format!("{bl:.16e}:{bh:.16e}"));
        prov("bounds_R", format!("{rl:.16e}:{rh:.16e}"));
        prov("bounds_S", format!("{sl:.16e}:{sh:.16e}"));
        for (name, pin) in [
            ("fix_T", fixed.t),
            ("fix_beta", fixed.beta),
            ("fix_R", fixed.r),
            ("fix_S", fixed.s),
        ] {
            if let Some(v) = pin {
                prov(name, format!("{v:.16e}"));
            }
        }
    }

    let mut text = to_json_17(&fit_to_json(&fit, serde_json::Value::Object(provenance)));
    text.push('\n');
    Ok(text)
}

fn fit_to_json(fit: &FitResult, provenance: serde_json::Value) -> serde_json::Value {
    let param_map = |map: &BTreeMap<String, f64>| {
        serde_json::Value::Object(
            map.iter()
                .map(|(k, &v)| (k.clone(), json_number(v)))
                .collect(),
        )
    };
    let n = fit.residuals.len().max(1);
    let rms = (fit.chi_square / n as f64).sqrt();
    let max_abs = fit.residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()));

    let mut root = serde_json::Map::new();
    root.insert(
        "model".into(),
        serde_json::Value::String(fit.model.to_string()),
    );
    root.insert("converged".into(), serde_json::Value::Bool(fit.converged));
    root.insert("degenerate".into(), serde_json::Value::Bool(fit.degenerate));
    root.insert("iterations".into(), fit.iterations.into());
    root.insert("degrees_of_freedom".into(), fit.degrees_of_freedom.into());
    root.insert("n_points".into(), fit.residuals.len().into());
    root.insert("chi_square".into(), json_number(fit.chi_square));
    root.insert("parameters".into(), param_map(&fit.parameters));
    root.insert(
        "standard_errors".into(),
        fit.standard_errors
            .as_ref()
            .map_or(serde_json::Value::Null, param_map),
    );
    root.insert("residual_rms".into(), json_number(rms));
    root.insert("residual_max_abs".into(), json_number(max_abs));
    root.insert("provenance".into(), provenance);
    serde_json::Value::Object(root)
}

fn cmd_integrate(args: IntegrateArgs) -> Result<String> {
    let spec = QuadratureSpec::default();
    let result = match args.upper {
        Some(upper) => incomplete_bose_integral(args.order, upper, &spec)?,
        None => bose_integral(args.order, &spec)?,
    };
    let mut env = Envelope::new(vec!["value", "error_estimate"]);
    env.note("command", "integrate");
    env.note("order", args.order.to_string());
    match args.upper {
        Some(upper) => env.note_f64("upper", upper),
        None => env.note("upper", "infinity"),
    }
    env.rows.push(vec![result.value, result.error_estimate]);
    Ok(env.render(args.output))
}

fn cmd_peak(args: PeakArgs) -> Result<String> {
    let value = planck_peak(args.dim)?;
    let mut env = Envelope::new(vec!["value"]);
    env.note("command", "peak");
    env.note("dim", args.dim.to_string());
    env.rows.push(vec![value]);
    Ok(env.render(args.output))
}

fn cmd_debye_fn(args: DebyeFnArgs) -> Result<String> {
    let value = debye_function(args.y)?;
    let mut env = Envelope::new(vec!["value"]);
    env.note("command", "debye-fn");
    env.note_f64("y", args.y);
    env.rows.push(vec![value]);
    Ok(env.render(args.output))
}
