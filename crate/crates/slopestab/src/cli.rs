//! Command-line front end: analyze, scan, jflow, slope, verify.
//!
//! All numeric output is exact rational strings; the optional `--approx`
//! flag adds 15-significant-digit decimals purely for human reading.

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::cert::{build_certificate, parse_certificate, verify_certificate, CertError};
use crate::exactnum::Rational;
use crate::family::CurveFamily;
use crate::jflow::correction_search;
use crate::slope::{destabilizes, mu_c, mu_variety, SlopeError, SurfaceSlopeData, Verdict};

#[derive(Debug, Parser)]
#[command(
    name = "slopestab",
    about = "Exact slope-stability and J-flow analysis of polarizations on products of curves"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Full certificate for one family and polarization
    Analyze(AnalyzeArgs),
    /// CSV scan over a genus range
    Scan(ScanArgs),
    /// J-flow ampleness threshold and correction divisors
    Jflow(JflowArgs),
    /// Generic-surface slope analysis from raw intersection numbers
    Slope(SlopeArgs),
    /// Re-check a certificate file
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[arg(long)]
    genus: u64,
    #[arg(long)]
    degree: u64,
    /// Polarization parameter, "p/q" or integer
    #[arg(long)]
    t: Rational,
    /// Write the certificate JSON here as well as to the console
    #[arg(long)]
    out: Option<PathBuf>,
    /// Append non-authoritative decimal approximations to the console output
    #[arg(long)]
    approx: bool,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long)]
    g_min: u64,
    #[arg(long)]
    g_max: u64,
    #[arg(long)]
    out: PathBuf,
    /// Append a non-authoritative decimal mu column
    #[arg(long)]
    approx: bool,
}

#[derive(Debug, Args)]
struct JflowArgs {
    #[arg(long)]
    genus: u64,
    #[arg(long)]
    degree: u64,
    #[arg(long)]
    t: Rational,
    /// Report the exact rational threshold instead of the minimal integer
    #[arg(long)]
    rational: bool,
    /// Cell cap for the two-curve grid search
    #[arg(long, default_value_t = 1_000_000)]
    cap: u64,
}

#[derive(Debug, Args)]
struct SlopeArgs {
    #[arg(long, allow_hyphen_values = true)]
    l2: Rational,
    #[arg(long, allow_hyphen_values = true)]
    kl: Rational,
    #[arg(long, allow_hyphen_values = true)]
    lz: Rational,
    #[arg(long, allow_hyphen_values = true)]
    kz: Rational,
    #[arg(long, allow_hyphen_values = true)]
    z2: Rational,
    /// Certified Seshadri lower bound: the witness search covers (0, eps]
    #[arg(long)]
    eps: Rational,
    /// Also evaluate mu_c at this parameter
    #[arg(long)]
    c: Option<Rational>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    cert: PathBuf,
}

/// Run the CLI; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32, Box<dyn std::error::Error>> {
    match cmd {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Scan(args) => cmd_scan(args),
        Command::Jflow(args) => cmd_jflow(args),
        Command::Slope(args) => cmd_slope(args),
        Command::Verify(args) => cmd_verify(args),
    }
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<i32, Box<dyn std::error::Error>> {
    let fam = CurveFamily::new(args.genus, args.degree)?;
    let cert = build_certificate(&fam, &args.t)?;
    let json = serde_json::to_string_pretty(&cert)?;
    println!("{json}");
    if args.approx {
        println!();
        println!("# non-authoritative decimal approximations");
        println!("# mu      ~ {:.14e}", cert.quantities.mu.to_f64());
        println!("# mu_1    ~ {:.14e}", cert.quantities.mu_1.to_f64());
        println!("# t_star  ~ {:.14e}", cert.quantities.t_star.to_f64());
        println!("# eps_hi  ~ {:.14e}", cert.quantities.epsilon_hi.to_f64());
    }
    if let Some(path) = args.out {
        fs::write(&path, json + "\n")?;
    }
    Ok(0)
}

/// One scan row; all payload fields are exact rational strings.
struct ScanRow {
    g: u64,
    d: u64,
    t: Rational,
    mu: Rational,
    mu_1: Rational,
    q: Rational,
    verdict: Verdict,
    alpha_ample: bool,
}

impl ScanRow {
    fn csv(&self, approx: bool) -> String {
        let mut line = format!(
            "{},{},{},{},{},{},{},{}",
            self.g, self.d, self.t, self.mu, self.mu_1, self.q, self.verdict, self.alpha_ample
        );
        if approx {
            line.push_str(&format!(",{:.14e}", self.mu.to_f64()));
        }
        line
    }
}

/// Compute all rows for one eligible family: the limit row at t = s_C
/// (reporting the limit slopes) plus sampled t above s_C.
fn family_rows(fam: &CurveFamily) -> Result<Vec<ScanRow>, Box<dyn std::error::Error>> {
    let g = fam.genus().value();
    let d = fam.degree();
    let q = fam.q_value();
    let mut rows = Vec::new();

    // Limit row: slopes at t -> s_C from above; Q < 0 is exactly the
    // statement that the limit inequality mu_1 < mu is strict.
    let (mu_limit, mu_1_limit) = fam.limit_slopes();
    rows.push(ScanRow {
        g,
        d,
        t: fam.s_c().clone(),
        mu: mu_limit.clone(),
        mu_1: mu_1_limit.clone(),
        q: q.clone(),
        verdict: if mu_1_limit < mu_limit {
            Verdict::Unstable
        } else {
            Verdict::NoWitnessFound
        },
        alpha_ample: false,
    });

    let (t0, _) = fam.destabilizing_t()?;
    let mut samples: Vec<Rational> = [2i64, 4, 8, 16]
        .iter()
        .map(|k| fam.s_c() + &Rational::new(1, *k))
        .collect();
    samples.push(t0);
    samples.sort();
    samples.dedup();
    for t in samples {
        let data = fam.slope_data(&t)?;
        let eps = fam.seshadri_interval(&t)?.lo;
        let decision = destabilizes(&data, &eps)?;
        rows.push(ScanRow {
            g,
            d,
            t: t.clone(),
            mu: mu_variety(&data),
            mu_1: mu_c(&data, &Rational::one())?,
            q: q.clone(),
            verdict: decision.verdict,
            alpha_ample: crate::jflow::alpha_ample(fam, &t)?,
        });
    }
    Ok(rows)
}

/// Eligible cover degrees for a genus: 2 <= d-1 < sqrt(g).
pub fn eligible_degrees(g: u64) -> Vec<u64> {
    (3..).take_while(|d| (d - 1) * (d - 1) < g).collect()
}

pub fn scan_to_string(g_min: u64, g_max: u64, approx: bool) -> Result<String, Box<dyn std::error::Error>> {
    let pairs: Vec<(u64, u64)> = (g_min..=g_max)
        .flat_map(|g| eligible_degrees(g).into_iter().map(move |d| (g, d)))
        .collect();

    let pool = build_pool()?;
    let results: Vec<Result<Vec<ScanRow>, String>> = pool.install(|| {
        use rayon::prelude::*;
        pairs
            .par_iter()
            .map(|(g, d)| {
                let fam = CurveFamily::new(*g, *d).map_err(|e| e.to_string())?;
                family_rows(&fam).map_err(|e| e.to_string())
            })
            .collect()
    });

    let mut rows: Vec<ScanRow> = Vec::new();
    for r in results {
        rows.extend(r.map_err(|e| -> Box<dyn std::error::Error> { e.into() })?);
    }
    rows.sort_by(|x, y| (x.g, x.d, &x.t).cmp(&(y.g, y.d, &y.t)));

    let mut out = String::from("g,d,t,mu,mu_1,Q,verdict,alpha_ample");
    if approx {
        out.push_str(",mu_approx");
    }
    out.push('\n');
    for row in &rows {
        out.push_str(&row.csv(approx));
        out.push('\n');
    }
    Ok(out)
}

fn build_pool() -> Result<rayon::ThreadPool, rayon::ThreadPoolBuildError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(n) = std::env::var("SLOPESTAB_THREADS") {
        if let Ok(n) = n.parse::<usize>() {
            builder = builder.num_threads(n.max(1));
        }
    }
    builder.build()
}

fn cmd_scan(args: ScanArgs) -> Result<i32, Box<dyn std::error::Error>> {
    if args.g_min > args.g_max {
        return Err("empty genus range".into());
    }
    let csv = scan_to_string(args.g_min, args.g_max, args.approx)?;
    let mut file = fs::File::create(&args.out)?;
    file.write_all(csv.as_bytes())?;
    Ok(0)
}

fn cmd_jflow(args: JflowArgs) -> Result<i32, Box<dyn std::error::Error>> {
    let fam = CurveFamily::new(args.genus, args.degree)?;
    let report = correction_search(&fam, &args.t, !args.rational, args.cap)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(0)
}

fn cmd_slope(args: SlopeArgs) -> Result<i32, Box<dyn std::error::Error>> {
    let data = SurfaceSlopeData::new(args.l2, args.kl, args.lz, args.kz, args.z2)?;
    println!("mu = {}", mu_variety(&data));
    if let Some(c) = &args.c {
        match mu_c(&data, c) {
            Ok(v) => println!("mu_c({c}) = {v}"),
            Err(SlopeError::DegenerateSlope(_)) => {
                println!("mu_c({c}) is undefined (pole of the slope function)")
            }
            Err(e) => return Err(e.into()),
        }
    }
    let decision = destabilizes(&data, &args.eps)?;
    println!("verdict = {}", decision.verdict);
    if let (Some(w), Some(m)) = (&decision.witness_c, &decision.mu_at_witness) {
        println!("witness_c = {w}");
        println!("mu_at_witness = {m}");
    }
    Ok(0)
}

fn cmd_verify(args: VerifyArgs) -> Result<i32, Box<dyn std::error::Error>> {
    let json = fs::read_to_string(&args.cert)?;
    let cert = match parse_certificate(&json) {
        Ok(c) => c,
        Err(CertError::Schema(msg)) => {
            eprintln!("schema violation: {msg}");
            return Ok(2);
        }
        Err(e) => return Err(e.into()),
    };
    match verify_certificate(&cert) {
        Ok(()) => {
            println!("certificate verifies");
            Ok(0)
        }
        Err(CertError::Mismatch(field)) => {
            eprintln!("mismatch in field {field}");
            Ok(1)
        }
        Err(CertError::Schema(msg)) => {
            eprintln!("schema violation: {msg}");
            Ok(2)
        }
        Err(e) => Err(e.into()),
    }
}
