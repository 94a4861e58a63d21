//! Command-line configuration, execution and result files.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::bounds::HelstromOptions;
use crate::constellation::{alpha_for_ns, qam_side};
use crate::error::{Error, Result};
use crate::montecarlo::{
    compute_bounds, estimate_ser_at, exact_ser, run_sweep, BoundSelection, Bounds, DeviceSettings,
    Imperfection, Preset, SentSymbols, SerEstimate, SweepRow, SweepSpec, DEFAULT_TRIALS,
};
use crate::receiver::{AdaptiveReceiver, DetectorKind};

pub const CSV_HEADER: &str =
    "modulation,ns,alpha,n_partitions,detector,n_pnr,eta,nu,tau,xi,trials,errors,ser,std_err,sql,srm,helstrom,seed";

/// Environment variable capping worker threads.
pub const THREADS_ENV: &str = "QRX_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "qrx",
    version,
    about = "QAM adaptive-feedback receiver bounds and Monte Carlo sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// SQL / SRM / Helstrom curves only
    Bounds(Flags),
    /// Monte Carlo sweep over an explicit grid
    Sweep(Flags),
    /// Monte Carlo sweep reproducing a named figure configuration
    FigurePreset(Flags),
    /// Compare Monte Carlo against exact enumeration on small 4-QAM instances
    OracleCheck(Flags),
}

#[derive(Debug, Args)]
struct Flags {
    /// 16qam or 4qam
    #[arg(long)]
    modulation: Option<String>,
    /// comma list or range:lo:hi:step
    #[arg(long)]
    ns: Option<String>,
    /// comma list of partition counts
    #[arg(long)]
    partitions: Option<String>,
    /// comma list of onoff, pnrd:<k>, pnrd:inf
    #[arg(long)]
    detector: Option<String>,
    #[arg(long)]
    eta: Option<String>,
    #[arg(long)]
    nu: Option<String>,
    #[arg(long)]
    tau: Option<String>,
    #[arg(long)]
    xi: Option<String>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// comma list of sql, srm, helstrom
    #[arg(long)]
    bounds: Option<String>,
    /// fig3 .. fig7
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(short, long, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunKind {
    Bounds,
    Sweep,
    FigurePreset,
    OracleCheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub kind: RunKind,
    pub preset: Option<Preset>,
    pub spec: SweepSpec,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    pub verbosity: u8,
}

pub fn parse_args<I, T>(argv: I) -> Result<RunConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| Error::Usage(e.to_string()))?;
    let (kind, flags) = match cli.command {
        Command::Bounds(f) => (RunKind::Bounds, f),
        Command::Sweep(f) => (RunKind::Sweep, f),
        Command::FigurePreset(f) => (RunKind::FigurePreset, f),
        Command::OracleCheck(f) => (RunKind::OracleCheck, f),
    };
    let format = match flags.format.as_str() {
        "csv" => OutputFormat::Csv,
        "json" => OutputFormat::Json,
        other => return Err(Error::Usage(format!("unknown format `{other}`"))),
    };
    let trials = flags.trials.unwrap_or(DEFAULT_TRIALS);
    if trials == 0 {
        return Err(Error::Usage("--trials must be at least 1".into()));
    }
    let seed = flags.seed.unwrap_or(1);

    let preset = match (kind, &flags.preset) {
        (RunKind::FigurePreset, Some(name)) => Some(name.parse::<Preset>()?),
        (RunKind::FigurePreset, None) => {
            return Err(Error::Usage("figure-preset requires --preset".into()))
        }
        (_, Some(_)) => {
            return Err(Error::Usage(
                "--preset is only valid with figure-preset".into(),
            ))
        }
        (_, None) => None,
    };

    let spec = match preset {
        Some(p) => {
            let overrides = [
                ("--modulation", flags.modulation.is_some()),
                ("--ns", flags.ns.is_some()),
                ("--partitions", flags.partitions.is_some()),
                ("--detector", flags.detector.is_some()),
                ("--eta", flags.eta.is_some()),
                ("--nu", flags.nu.is_some()),
                ("--tau", flags.tau.is_some()),
                ("--xi", flags.xi.is_some()),
            ];
            if let Some((flag, _)) = overrides.iter().find(|(_, set)| *set) {
                return Err(Error::Usage(format!(
                    "{flag} conflicts with --preset {}",
                    p.name()
                )));
            }
            let mut spec = p.spec(trials, seed);
            if let Some(b) = &flags.bounds {
                spec.bounds = parse_bounds(b)?;
            }
            spec
        }
        None => {
            let default_ns = if kind == RunKind::OracleCheck {
                "1,4"
            } else {
                "range:2:30:2"
            };
            explicit_spec(&flags, trials, seed, default_ns)?
        }
    };

    Ok(RunConfig {
        kind,
        preset,
        spec,
        out: flags.out,
        format,
        verbosity: flags.verbose,
    })
}

fn explicit_spec(flags: &Flags, trials: u64, seed: u64, default_ns: &str) -> Result<SweepSpec> {
    let order = parse_modulation(flags.modulation.as_deref().unwrap_or("16qam"))?;
    let ns_grid = parse_grid(flags.ns.as_deref().unwrap_or(default_ns))?;
    if ns_grid.iter().any(|&x| !(x >= 0.0)) {
        return Err(Error::Usage("--ns values must be nonnegative".into()));
    }
    let partitions = parse_list(flags.partitions.as_deref().unwrap_or("10"), |s| {
        s.parse::<usize>()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| Error::Usage(format!("invalid partition count `{s}`")))
    })?;
    let detectors = parse_list(flags.detector.as_deref().unwrap_or("onoff,pnrd:inf"), |s| {
        s.parse::<DetectorKind>()
    })?;

    let mut base = DeviceSettings::IDEAL;
    let mut axis = None;
    for (name, value, which) in [
        ("--eta", &flags.eta, Imperfection::Eta),
        ("--nu", &flags.nu, Imperfection::Nu),
        ("--tau", &flags.tau, Imperfection::Tau),
        ("--xi", &flags.xi, Imperfection::Xi),
    ] {
        let Some(raw) = value else { continue };
        let values = parse_grid(raw)?;
        match values.as_slice() {
            [single] => base = base.with(which, *single),
            _ if axis.is_some() => {
                return Err(Error::Usage(format!(
                    "{name}: only one imperfection may be swept at a time"
                )));
            }
            _ => axis = Some((which, values)),
        }
    }
    // reject out-of-range device values before any work starts
    for d in match &axis {
        Some((which, values)) => values.iter().map(|&v| base.with(*which, v)).collect(),
        None => vec![base],
    } {
        d.receiver(1, DetectorKind::OnOff)
            .map_err(|e| Error::Usage(e.to_string()))?;
    }

    Ok(SweepSpec {
        order,
        ns_grid,
        partitions,
        detectors,
        base,
        axis,
        trials,
        seed,
        bounds: parse_bounds(flags.bounds.as_deref().unwrap_or("sql,srm"))?,
        helstrom: HelstromOptions::default(),
    })
}

fn parse_modulation(s: &str) -> Result<usize> {
    let order = s
        .strip_suffix("qam")
        .and_then(|m| m.parse::<usize>().ok())
        .ok_or_else(|| Error::Usage(format!("unknown modulation `{s}`")))?;
    qam_side(order).map_err(|_| Error::Usage(format!("unsupported modulation `{s}`")))?;
    Ok(order)
}

fn parse_list<T>(s: &str, item: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| item(t).map_err(|e| Error::Usage(e.to_string())))
        .collect()
}

fn parse_float(s: &str) -> Result<f64> {
    s.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| Error::Usage(format!("invalid number `{s}`")))
}

/// `a,b,c` or `range:lo:hi:step` (inclusive of `hi`).
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    if let Some(range) = s.strip_prefix("range:") {
        let parts: Vec<f64> = range.split(':').map(parse_float).collect::<Result<_>>()?;
        let [lo, hi, step] = parts[..] else {
            return Err(Error::Usage(format!("range needs lo:hi:step, got `{s}`")));
        };
        if !(step > 0.0) || hi < lo {
            return Err(Error::Usage(format!("empty or invalid range `{s}`")));
        }
        let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
        return Ok((0..count).map(|k| lo + k as f64 * step).collect());
    }
    parse_list(s, parse_float)
}

fn parse_bounds(s: &str) -> Result<BoundSelection> {
    let mut sel = BoundSelection::default();
    for name in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match name {
            "sql" => sel.sql = true,
            "srm" => sel.srm = true,
            "helstrom" => sel.helstrom = true,
            "none" => {}
            other => return Err(Error::Usage(format!("unknown bound `{other}`"))),
        }
    }
    Ok(sel)
}

/// One output line. Monte Carlo fields are absent for bounds-only rows.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub modulation: String,
    pub ns: f64,
    pub alpha: f64,
    pub n_partitions: Option<usize>,
    pub detector: Option<String>,
    pub n_pnr: Option<String>,
    pub eta: Option<f64>,
    pub nu: Option<f64>,
    pub tau: Option<f64>,
    pub xi: Option<f64>,
    pub trials: Option<u64>,
    pub errors: Option<u64>,
    pub ser: Option<f64>,
    pub std_err: Option<f64>,
    pub sql: Option<f64>,
    pub srm: Option<f64>,
    pub helstrom: Option<f64>,
    pub seed: Option<u64>,
}

impl ResultRow {
    fn bounds_only(order: usize, ns: f64, alpha: f64, b: Bounds) -> Self {
        Self {
            modulation: format!("{order}qam"),
            ns,
            alpha,
            n_partitions: None,
            detector: None,
            n_pnr: None,
            eta: None,
            nu: None,
            tau: None,
            xi: None,
            trials: None,
            errors: None,
            ser: None,
            std_err: None,
            sql: b.sql,
            srm: b.srm,
            helstrom: b.helstrom,
            seed: None,
        }
    }

    fn from_estimate(
        order: usize,
        ns: f64,
        n: usize,
        kind: DetectorKind,
        d: &DeviceSettings,
        e: &SerEstimate,
        b: Bounds,
    ) -> Result<Self> {
        let (detector, n_pnr) = match kind {
            DetectorKind::OnOff => ("onoff", "0".to_string()),
            DetectorKind::PnrdFinite(k) => ("pnrd", k.to_string()),
            DetectorKind::PnrdInfinite => ("pnrd", "inf".to_string()),
        };
        Ok(Self {
            n_partitions: Some(n),
            detector: Some(detector.into()),
            n_pnr: Some(n_pnr),
            eta: Some(d.eta),
            nu: Some(d.nu),
            tau: Some(d.tau),
            xi: Some(d.xi),
            trials: Some(e.trials),
            errors: Some(e.errors),
            ser: Some(e.ser),
            std_err: Some(e.std_err),
            seed: Some(e.seed),
            ..Self::bounds_only(order, ns, alpha_for_ns(order, ns)?, b)
        })
    }
}

impl TryFrom<&SweepRow> for ResultRow {
    type Error = Error;

    fn try_from(r: &SweepRow) -> Result<Self> {
        ResultRow::from_estimate(
            r.order,
            r.ns,
            r.n_partitions,
            r.detector,
            &r.devices,
            &r.estimate,
            r.bounds,
        )
    }
}

/// Outcome of one exact-vs-Monte-Carlo comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleCase {
    pub ns: f64,
    pub n_partitions: usize,
    pub exact: f64,
    pub estimate: SerEstimate,
    pub pass: bool,
}

pub struct RunOutput {
    pub rows: Vec<ResultRow>,
    pub oracle: Vec<OracleCase>,
}

impl RunOutput {
    pub fn all_passed(&self) -> bool {
        self.oracle.iter().all(|c| c.pass)
    }
}

pub fn execute(config: &RunConfig) -> Result<RunOutput> {
    let spec = &config.spec;
    match config.kind {
        RunKind::Bounds => {
            let rows = spec
                .ns_grid
                .iter()
                .map(|&ns| {
                    let b = compute_bounds(spec.order, ns, &spec.bounds, &spec.helstrom)?;
                    if config.verbosity > 0 {
                        eprintln!("bounds at ns = {ns}");
                    }
                    Ok(ResultRow::bounds_only(
                        spec.order,
                        ns,
                        alpha_for_ns(spec.order, ns)?,
                        b,
                    ))
                })
                .collect::<Result<_>>()?;
            Ok(RunOutput {
                rows,
                oracle: Vec::new(),
            })
        }
        RunKind::Sweep | RunKind::FigurePreset => {
            if config.verbosity > 0 {
                eprintln!(
                    "running {} sweep points x {} trials",
                    spec.row_count(),
                    spec.trials
                );
            }
            let rows = run_sweep(spec)?
                .iter()
                .map(ResultRow::try_from)
                .collect::<Result<_>>()?;
            Ok(RunOutput {
                rows,
                oracle: Vec::new(),
            })
        }
        RunKind::OracleCheck => oracle_check(config),
    }
}

/// Exact enumeration against Monte Carlo on 4-QAM, on-off, `N ∈ {1, 2, 3}`.
fn oracle_check(config: &RunConfig) -> Result<RunOutput> {
    let spec = &config.spec;
    let mut rows = Vec::new();
    let mut oracle = Vec::new();
    for &ns in &spec.ns_grid {
        let c = crate::constellation::qam_for_ns(4, ns)?;
        for n in 1..=3 {
            let params = spec.base.receiver(n, DetectorKind::OnOff)?;
            let exact = exact_ser(&c, &params)?;
            let rx = AdaptiveReceiver::new(&c, &params)?;
            let point = oracle.len() as u64;
            let estimate =
                estimate_ser_at(&rx, spec.trials, spec.seed, point, SentSymbols::Random)?;
            // binomial spread under the exact value, so zero observed errors still compare
            let sigma = (exact * (1.0 - exact) / spec.trials as f64).sqrt();
            let pass = (estimate.ser - exact).abs() <= 3.0 * sigma;
            if config.verbosity > 0 || !pass {
                eprintln!(
                    "{} ns={ns} N={n}: exact {exact:.6} mc {:.6} ± {:.6}",
                    if pass { "PASS" } else { "FAIL" },
                    estimate.ser,
                    estimate.std_err
                );
            }
            let b = compute_bounds(4, ns, &spec.bounds, &spec.helstrom)?;
            rows.push(ResultRow::from_estimate(
                4,
                ns,
                n,
                DetectorKind::OnOff,
                &spec.base,
                &estimate,
                b,
            )?);
            oracle.push(OracleCase {
                ns,
                n_partitions: n,
                exact,
                estimate,
                pass,
            });
        }
    }
    Ok(RunOutput { rows, oracle })
}

/// `%.10g`: ten significant digits, trailing zeros trimmed.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.9e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-4..10).contains(&exp) {
        let decimals = (9 - exp).max(0) as usize;
        let fixed = format!("{:.*}", decimals, x);
        trim_zeros(&fixed).to_string()
    } else {
        format!(
            "{}e{}{:02}",
            trim_zeros(mantissa),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt<T>(v: &Option<T>, f: impl Fn(&T) -> String) -> String {
    v.as_ref().map(f).unwrap_or_default()
}

pub fn format_csv(rows: &[ResultRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let fields = [
            r.modulation.clone(),
            format_sig(r.ns),
            format_sig(r.alpha),
            opt(&r.n_partitions, usize::to_string),
            opt(&r.detector, String::clone),
            opt(&r.n_pnr, String::clone),
            opt(&r.eta, |x| format_sig(*x)),
            opt(&r.nu, |x| format_sig(*x)),
            opt(&r.tau, |x| format_sig(*x)),
            opt(&r.xi, |x| format_sig(*x)),
            opt(&r.trials, u64::to_string),
            opt(&r.errors, u64::to_string),
            opt(&r.ser, |x| format_sig(*x)),
            opt(&r.std_err, |x| format_sig(*x)),
            opt(&r.sql, |x| format_sig(*x)),
            opt(&r.srm, |x| format_sig(*x)),
            opt(&r.helstrom, |x| format_sig(*x)),
            opt(&r.seed, u64::to_string),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn format_json(rows: &[ResultRow]) -> Result<String> {
    let mut s = serde_json::to_string_pretty(rows)?;
    s.push('\n');
    Ok(s)
}

#[derive(Serialize)]
struct Sidecar<'a> {
    tool: &'static str,
    version: &'static str,
    config: &'a RunConfig,
    #[serde(skip_serializing_if = "<[OracleCase]>::is_empty")]
    oracle: &'a [OracleCase],
}

/// `<out>.meta.json`
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

/// Writes the table to `config.out` (stdout when unset) plus the metadata
/// sidecar next to it.
pub fn emit_results(output: &RunOutput, config: &RunConfig) -> Result<()> {
    let body = match config.format {
        OutputFormat::Csv => format_csv(&output.rows),
        OutputFormat::Json => format_json(&output.rows)?,
    };
    match &config.out {
        Some(path) => {
            std::fs::write(path, body)?;
            let meta = Sidecar {
                tool: "qrx",
                version: env!("CARGO_PKG_VERSION"),
                config,
                oracle: &output.oracle,
            };
            let mut json = serde_json::to_string_pretty(&meta)?;
            json.push('\n');
            std::fs::write(sidecar_path(path), json)?;
        }
        None => std::io::stdout().lock().write_all(body.as_bytes())?,
    }
    Ok(())
}

/// Worker cap from `QRX_THREADS`; `None` means automatic.
pub fn thread_cap() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n >= 1)
            .map(Some)
            .ok_or_else(|| {
                Error::Usage(format!(
                    "{THREADS_ENV} must be a positive integer, got `{v}`"
                ))
            }),
        Err(_) => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &str) -> Result<RunConfig> {
        parse_args(std::iter::once("qrx").chain(args.split_whitespace()))
    }

    #[test]
    fn sweep_example() {
        let cfg = parse("sweep --modulation 16qam --ns range:2:30:2 --partitions 10 --detector pnrd:inf --trials 1000000 --seed 7").unwrap();
        assert_eq!(cfg.kind, RunKind::Sweep);
        assert_eq!(cfg.spec.order, 16);
        assert_eq!(
            cfg.spec.ns_grid,
            (1..=15).map(|k| 2.0 * k as f64).collect::<Vec<_>>()
        );
        assert_eq!(cfg.spec.partitions, vec![10]);
        assert_eq!(cfg.spec.detectors, vec![DetectorKind::PnrdInfinite]);
        assert_eq!(cfg.spec.trials, 1_000_000);
        assert_eq!(cfg.spec.seed, 7);
        assert_eq!(cfg.spec.base, DeviceSettings::IDEAL);
        assert!(!cfg.spec.bounds.helstrom);
    }

    #[test]
    fn fig7_preset() {
        let cfg = parse("figure-preset --preset fig7 --trials 100000").unwrap();
        assert_eq!(cfg.preset, Some(Preset::Fig7));
        let d = cfg.spec.base;
        assert_eq!((d.eta, d.nu, d.tau, d.xi), (0.723, 2.7e-5, 0.99, 0.995));
        assert_eq!(cfg.spec.partitions, vec![10]);
        assert_eq!(cfg.spec.trials, 100_000);
    }

    #[test]
    fn usage_errors() {
        assert!(matches!(
            parse("sweep --detector pnrd:-1"),
            Err(Error::Usage(_))
        ));
        assert!(matches!(parse("sweep --bogus 3"), Err(Error::Usage(_))));
        assert!(matches!(
            parse("figure-preset --preset fig7 --eta 0.5"),
            Err(Error::Usage(_))
        ));
        assert!(matches!(
            parse("figure-preset --preset fig9"),
            Err(Error::Usage(_))
        ));
        assert!(matches!(parse("figure-preset"), Err(Error::Usage(_))));
        assert!(matches!(parse("sweep --preset fig3"), Err(Error::Usage(_))));
        assert!(matches!(
            parse("sweep --eta 0.9,0.8 --nu 0,0.1"),
            Err(Error::Usage(_))
        ));
        assert!(matches!(parse("sweep --eta 1.5"), Err(Error::Usage(_))));
        assert!(matches!(
            parse("sweep --modulation 8psk"),
            Err(Error::Usage(_))
        ));
        assert!(matches!(parse("sweep --format xml"), Err(Error::Usage(_))));
        assert!(matches!(parse("sweep --trials 0"), Err(Error::Usage(_))));
        assert!(matches!(
            parse("sweep --ns range:5:1:1"),
            Err(Error::Usage(_))
        ));
        assert!(matches!(parse(""), Err(Error::Usage(_))));
    }

    #[test]
    fn imperfection_axis() {
        let cfg = parse("sweep --nu 0,1e-3,1e-2 --eta 0.9").unwrap();
        assert_eq!(
            cfg.spec.axis,
            Some((Imperfection::Nu, vec![0.0, 1e-3, 1e-2]))
        );
        assert_eq!(cfg.spec.base.eta, 0.9);
        let cfg = parse("bounds --bounds sql,helstrom --ns 1,2").unwrap();
        assert!(cfg.spec.bounds.sql && cfg.spec.bounds.helstrom && !cfg.spec.bounds.srm);
    }

    #[test]
    fn grids() {
        assert_eq!(
            parse_grid("range:0:1:0.25").unwrap(),
            vec![0.0, 0.25, 0.5, 0.75, 1.0]
        );
        assert_eq!(parse_grid("range:0.1:0.3:0.1").unwrap().len(), 3);
        assert_eq!(parse_grid("3, 1.5").unwrap(), vec![3.0, 1.5]);
        assert!(parse_grid("range:1:2").is_err());
        assert!(parse_grid("x").is_err());
    }

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(10.0), "10");
        assert_eq!(format_sig(0.1), "0.1");
        assert_eq!(format_sig(2.7e-5), "2.7e-05");
        assert_eq!(format_sig(0.2220308502816991), "0.2220308503");
        assert_eq!(format_sig(1.0 / 3.0), "0.3333333333");
        assert_eq!(format_sig(123456.789012345), "123456.789");
        assert_eq!(format_sig(1.5e12), "1.5e+12");
        assert_eq!(format_sig(-0.75), "-0.75");
        assert_eq!(format_sig(9.9999999999), "10");
    }

    #[test]
    fn empty_table_is_header_only() {
        assert_eq!(format_csv(&[]), format!("{CSV_HEADER}\n"));
    }
}
