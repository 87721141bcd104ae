use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use sha2::{Digest, Sha256};

use phasesync::io::fmt_num;
use phasesync::report::{
    format_key_values, run_metadata, write_gamma_long, write_ratio_long, write_ratio_wide, write_regime_summary,
    write_stability,
};
use phasesync::sweep::{parse_bands, parse_windows, run_sweep, stability_report, SweepSetting};
use phasesync::synthetic::Segment;
use phasesync::{
    annotate_recessions, band_from_periods, bandpass, detrend_linear, gen_sine, load_panel_csv, periods_of_band,
    simulate_regimes, write_panel_csv, FilterBand, Panel, PipelineConfig, RecessionCalendar, RegimeSpec, Window,
    YearMonth,
};

#[derive(Parser)]
#[command(name = "phasesync", version, about = "Phase synchronization analysis for panels of monthly series")]
struct Cli {
    /// Worker threads for pair-level parallelism (default: all cores).
    #[arg(long, global = true, env = "PHASESYNC_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Band-pass every series of a panel.
    Filter(FilterArgs),
    /// Pairwise synchronization index and ratio series.
    Sync(SyncArgs),
    /// Repeat `sync` over several windows or bands and compare.
    Sweep(SweepArgs),
    /// Write a synthetic panel.
    Gen(GenArgs),
}

#[derive(Args)]
struct BandArgs {
    /// Lower cutoff harmonic.
    #[arg(long, requires = "ku", conflicts_with_all = ["longest", "shortest"])]
    kl: Option<usize>,
    /// Upper cutoff harmonic.
    #[arg(long, requires = "kl")]
    ku: Option<usize>,
    /// Longest period kept, in months.
    #[arg(long, requires = "shortest")]
    longest: Option<f64>,
    /// Shortest period kept, in months.
    #[arg(long, requires = "longest")]
    shortest: Option<f64>,
}

impl BandArgs {
    fn given(&self) -> bool {
        self.kl.is_some() || self.longest.is_some()
    }

    fn resolve(&self, len: usize) -> Result<FilterBand> {
        let band = match (self.kl, self.ku, self.longest, self.shortest) {
            (Some(l), Some(u), _, _) => FilterBand::new(l, u)?,
            (_, _, Some(long), Some(short)) => band_from_periods(len, long, short)?,
            _ => bail!("specify the band with --kl/--ku or --longest/--shortest"),
        };
        band.check(len)?;
        Ok(band)
    }
}

#[derive(Args)]
struct DetrendArgs {
    /// Remove a least-squares line before filtering (default).
    #[arg(long, overrides_with = "no_detrend")]
    detrend: bool,
    #[arg(long)]
    no_detrend: bool,
}

impl DetrendArgs {
    fn on(&self) -> bool {
        !self.no_detrend
    }
}

#[derive(Args)]
struct PipelineArgs {
    #[command(flatten)]
    band: BandArgs,
    /// Odd window length of the synchronization index.
    #[arg(long, default_value_t = 13)]
    window: usize,
    /// Threshold r for R(gamma2 >= r); repeatable.
    #[arg(long = "r", value_name = "R")]
    thresholds: Vec<f64>,
    #[command(flatten)]
    detrend: DetrendArgs,
    /// Drop the filter's edge margin from each end (default).
    #[arg(long, overrides_with = "no_trim")]
    trim: bool,
    #[arg(long)]
    no_trim: bool,
    /// Relative amplitude below which a phase is rejected.
    #[arg(long, default_value_t = phasesync::analytic::DEFAULT_AMPLITUDE_FLOOR)]
    amplitude_floor: f64,
}

impl PipelineArgs {
    /// `fallback` stands in for the band when no band flags were given.
    fn config(&self, len: usize, fallback: Option<FilterBand>) -> Result<PipelineConfig> {
        let band = match fallback {
            Some(b) if !self.band.given() => b,
            _ => self.band.resolve(len)?,
        };
        let mut cfg = PipelineConfig::new(band, Window::new(self.window)?)
            .with_detrend(self.detrend.on())
            .with_trim(!self.no_trim)
            .with_amplitude_floor(self.amplitude_floor);
        if !self.thresholds.is_empty() {
            cfg = cfg.with_thresholds(&self.thresholds)?;
        }
        cfg.validate(len)?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct FilterArgs {
    /// Panel CSV (`date,<id>,...`).
    input: PathBuf,
    #[command(flatten)]
    band: BandArgs,
    #[command(flatten)]
    detrend: DetrendArgs,
    /// Filtered panel CSV; metadata goes to `<out>.meta.txt`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SyncArgs {
    input: PathBuf,
    #[command(flatten)]
    pipeline: PipelineArgs,
    /// Recession calendar CSV (`peak,trough`), or `us-nber` / `japan-esri`.
    #[arg(long)]
    calendar: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    input: PathBuf,
    #[command(flatten)]
    pipeline: PipelineArgs,
    /// Window lengths, e.g. `11,13,15`.
    #[arg(long, conflicts_with = "bands", required_unless_present = "bands")]
    windows: Option<String>,
    /// Bands as `<k_l>:<k_u>` lists, e.g. `5:17,4:18,3:19`.
    #[arg(long)]
    bands: Option<String>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GenArgs {
    /// Pure sinusoids, one per member.
    #[arg(long, conflicts_with = "regime", required_unless_present = "regime")]
    sine: bool,
    /// Sine period in months.
    #[arg(long, requires = "sine", required_if_eq("sine", "true"))]
    period: Option<f64>,
    /// Sine length in months.
    #[arg(long, requires = "sine", required_if_eq("sine", "true"))]
    n: Option<usize>,
    /// Per-member sine amplitudes, e.g. `1,2`.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, requires = "sine")]
    amp: Vec<f64>,
    /// Per-member sine phase offsets in radians.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, requires = "sine")]
    phase: Vec<f64>,
    /// Regime segments, e.g. `coupled:120,uncoupled:120,coupled:120`.
    #[arg(long, value_delimiter = ',')]
    regime: Vec<Segment>,
    #[arg(long, default_value_t = 2)]
    members: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = RegimeSpec::DEFAULT_BASE_PERIOD)]
    base_period: f64,
    #[arg(long, default_value_t = RegimeSpec::DEFAULT_JITTER)]
    jitter: f64,
    #[arg(long, default_value_t = RegimeSpec::DEFAULT_PERSISTENCE)]
    persistence: f64,
    #[arg(long, default_value_t = RegimeSpec::DEFAULT_NOISE_SD)]
    noise: f64,
    /// First month, `YYYY-MM`.
    #[arg(long, default_value = "1980-01")]
    start: YearMonth,
    /// Output panel CSV.
    #[arg(long)]
    out: PathBuf,
}

/// Files written by one command; removed again if the command fails.
#[derive(Default)]
struct Outputs {
    files: Vec<PathBuf>,
    dir: Option<PathBuf>,
}

impl Outputs {
    fn dir(&mut self, dir: &Path) -> Result<()> {
        if !dir.exists() {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            self.dir = Some(dir.to_path_buf());
        }
        Ok(())
    }

    fn write(&mut self, path: PathBuf, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
        let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        self.files.push(path.clone());
        let mut w = BufWriter::new(file);
        f(&mut w)?;
        w.flush().with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }

    fn discard(self) {
        for f in &self.files {
            let _ = fs::remove_file(f);
        }
        if let Some(d) = &self.dir {
            let _ = fs::remove_dir(d);
        }
    }
}

fn sha256_hex(path: &Path) -> Result<String> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect())
}

fn load(path: &Path) -> Result<(Panel, String)> {
    let panel = load_panel_csv(path)?;
    Ok((panel, sha256_hex(path)?))
}

fn load_calendar(spec: &str) -> Result<RecessionCalendar> {
    Ok(match spec {
        "us-nber" => RecessionCalendar::us_nber(),
        "japan-esri" => RecessionCalendar::japan_esri(),
        path => RecessionCalendar::from_path(path)?,
    })
}

fn kv(pairs: &[(&str, String)]) -> Vec<(String, String)> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn cmd_filter(a: &FilterArgs, out: &mut Outputs) -> Result<()> {
    let (panel, digest) = load(&a.input)?;
    let band = a.band.resolve(panel.len())?;
    let detrend = a.detrend.on();
    let filtered = panel.map_values(|s| {
        if detrend {
            bandpass(&detrend_linear(s.values())?, band)
        } else {
            bandpass(s.values(), band)
        }
    })?;
    let periods = periods_of_band(panel.len(), band)?;
    let (short, long) = periods.rounded();
    let mut meta = kv(&[
        ("input", a.input.display().to_string()),
        ("input_sha256", digest),
        ("members", panel.members().to_string()),
        ("input_len", panel.len().to_string()),
        ("input_start", panel.start().to_string()),
        ("k_l", band.lower().to_string()),
        ("k_u", band.upper().to_string()),
        ("shortest_period", fmt_num(periods.shortest)),
        ("longest_period", fmt_num(periods.longest)),
        ("shortest_period_rounded", short.to_string()),
        ("longest_period_rounded", long.to_string()),
        ("detrend", detrend.to_string()),
    ]);
    if let Some(parent) = a.out.parent().filter(|p| !p.as_os_str().is_empty()) {
        out.dir(parent)?;
    }
    out.write(a.out.clone(), |w| Ok(write_panel_csv(&filtered, w)?))?;
    let meta_path = PathBuf::from(format!("{}.meta.txt", a.out.display()));
    meta.push(("output".into(), a.out.display().to_string()));
    out.write(meta_path, |w| Ok(w.write_all(format_key_values(&meta).as_bytes())?))
}

fn cmd_sync(a: &SyncArgs, out: &mut Outputs) -> Result<()> {
    let (panel, digest) = load(&a.input)?;
    let cfg = a.pipeline.config(panel.len(), None)?;
    let calendar = a.calendar.as_deref().map(load_calendar).transpose()?;
    let result = phasesync::run_pipeline(&panel, &cfg)?;
    let regimes = calendar.as_ref().map(|c| annotate_recessions(&result, c)).transpose()?;

    let mut meta = kv(&[
        ("input", a.input.display().to_string()),
        ("input_sha256", digest),
    ]);
    meta.extend(run_metadata(&result));
    if let Some(c) = &a.calendar {
        meta.push(("calendar".into(), c.clone()));
    }

    out.dir(&a.out)?;
    out.write(a.out.join("gamma2.csv"), |w| Ok(write_gamma_long(&result, w)?))?;
    out.write(a.out.join("ratio.csv"), |w| Ok(write_ratio_wide(&result, regimes.as_ref(), w)?))?;
    out.write(a.out.join("ratio_long.csv"), |w| Ok(write_ratio_long(&result, w)?))?;
    if let Some(t) = &regimes {
        out.write(a.out.join("regimes.csv"), |w| Ok(write_regime_summary(t, w)?))?;
    }
    out.write(a.out.join("meta.txt"), |w| Ok(w.write_all(format_key_values(&meta).as_bytes())?))
}

fn cmd_sweep(a: &SweepArgs, out: &mut Outputs) -> Result<()> {
    let (panel, digest) = load(&a.input)?;
    let settings: Vec<SweepSetting> = match (&a.windows, &a.bands) {
        (Some(w), _) => parse_windows(w)?,
        (_, Some(b)) => parse_bands(b)?,
        _ => bail!("specify --windows or --bands"),
    };
    // A band sweep needs no base band.
    let fallback = match settings[0] {
        SweepSetting::Band(b) => Some(b),
        SweepSetting::Window(_) => None,
    };
    let base = a.pipeline.config(panel.len(), fallback)?;
    for s in &settings {
        s.apply(&base).validate(panel.len()).with_context(|| format!("setting {s}"))?;
    }
    let runs = run_sweep(&panel, &base, &settings)?;
    let stability = stability_report(&runs);

    let mut meta = kv(&[
        ("input", a.input.display().to_string()),
        ("input_sha256", digest),
        (
            "settings",
            settings.iter().map(|s| s.label()).collect::<Vec<_>>().join(","),
        ),
    ]);
    for run in &runs {
        let label = run.setting.label();
        meta.extend(
            run_metadata(&run.result)
                .into_iter()
                .map(|(k, v)| (format!("{label}.{k}"), v)),
        );
    }

    out.dir(&a.out)?;
    for run in &runs {
        let path = a.out.join(format!("ratio_{}.csv", run.setting.label()));
        out.write(path, |w| Ok(write_ratio_wide(&run.result, None, w)?))?;
    }
    out.write(a.out.join("stability.csv"), |w| Ok(write_stability(&stability, w)?))?;
    out.write(a.out.join("meta.txt"), |w| Ok(w.write_all(format_key_values(&meta).as_bytes())?))
}

fn cmd_gen(a: &GenArgs, out: &mut Outputs) -> Result<()> {
    let panel = if a.sine {
        let (Some(n), Some(period)) = (a.n, a.period) else {
            bail!("--sine needs --n and --period");
        };
        let pick = |v: &[f64], i: usize, default: f64| match v.len() {
            0 => Ok(default),
            l if l == a.members => Ok(v[i]),
            l => bail!("expected {} comma-separated values, got {l}", a.members),
        };
        let series = (0..a.members)
            .map(|i| {
                let amp = pick(&a.amp, i, 1.0)?;
                let phase = pick(&a.phase, i, 0.0)?;
                Ok(gen_sine(&format!("s{}", i + 1), a.start, n, period, amp, phase)?)
            })
            .collect::<Result<Vec<_>>>()?;
        Panel::new(series)?
    } else {
        let spec = RegimeSpec {
            segments: a.regime.clone(),
            base_period: a.base_period,
            jitter: a.jitter,
            persistence: a.persistence,
            noise_sd: a.noise,
            seed: a.seed,
            start: a.start,
        };
        let panel = simulate_regimes(a.members, &spec)?.panel;
        println!("seed={}", a.seed);
        panel
    };
    if let Some(parent) = a.out.parent().filter(|p| !p.as_os_str().is_empty()) {
        out.dir(parent)?;
    }
    out.write(a.out.clone(), |w| Ok(write_panel_csv(&panel, w)?))
}

fn run(cli: &Cli, out: &mut Outputs) -> Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring worker threads")?;
    }
    match &cli.command {
        Command::Filter(a) => cmd_filter(a, out),
        Command::Sync(a) => cmd_sync(a, out),
        Command::Sweep(a) => cmd_sweep(a, out),
        Command::Gen(a) => cmd_gen(a, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Outputs::default();
    match run(&cli, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            out.discard();
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
