#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use desitter_cli::commands;
use desitter_cli::{
    export_curve, read_csv, run_example, CurveRecord, ExampleId, ExampleOptions, Format, Meta, ProjectionSpec,
};
use desitter_core::{ConeParams, Vec4f};

#[derive(Parser)]
#[command(name = "desitter", version, about = "Rectifying curves in de Sitter 3-space")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Integration or sampling step.
    #[arg(long, global = true, default_value_t = 1e-3)]
    step: f64,
    /// Parameter range as `a,b`.
    #[arg(long, global = true, value_parser = parse_range, allow_hyphen_values = true)]
    range: Option<(f64, f64)>,
    /// Output file, or directory for `example`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Coordinate axis (2, 3 or 4) of the projection pole.
    #[arg(long, global = true)]
    pole_axis: Option<usize>,
    /// Pole at `-sign * e_axis`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pole_sign: Option<i8>,
    #[arg(long, global = true, default_value_t = 1e-4)]
    tol: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Frame and curvatures of a sampled curve (CSV with t,x1..x4).
    Frame { input: PathBuf },
    /// Integrate the frame equations for κg = kappa, τg = tau + A sinh s + B cosh s.
    Synthesize {
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        tau: f64,
        #[arg(long = "tau-sinh", default_value_t = 0.0, allow_hyphen_values = true)]
        tau_sinh: f64,
        #[arg(long = "tau-cosh", default_value_t = 0.0, allow_hyphen_values = true)]
        tau_cosh: f64,
    },
    /// Test a sampled curve for the rectifying property.
    CheckRectifying {
        input: PathBuf,
        /// Candidate apex `x1,x2,x3,x4`.
        #[arg(long, value_parser = parse_vec4, allow_hyphen_values = true)]
        apex: Option<[f64; 4]>,
    },
    /// Build α = cos η p + sin η γ over the cusped directrix.
    Construct {
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t0: f64,
        /// Use the spiral directrix giving constant curvature |kappa0|.
        #[arg(long, allow_hyphen_values = true)]
        kappa0: Option<f64>,
    },
    /// Closed-form geodesic of a cone over a small-circle directrix.
    ConeGeodesic {
        #[arg(long, allow_hyphen_values = true)]
        lambda1: f64,
        #[arg(long, allow_hyphen_values = true)]
        lambda2: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        s0: f64,
        #[arg(long)]
        negative_c: bool,
        /// Height of the directrix circle.
        #[arg(long, default_value_t = -0.8, allow_hyphen_values = true)]
        q: f64,
    },
    /// Stereographic image of a sampled curve.
    Project { input: PathBuf },
    /// Run a worked example (4.1, 4.2 or 4.3).
    Example { id: String },
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected a,b")?;
    let a: f64 = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b: f64 = b.trim().parse().map_err(|e| format!("{e}"))?;
    if !(a < b) {
        return Err("range must be increasing".into());
    }
    Ok((a, b))
}

fn parse_vec4(s: &str) -> Result<[f64; 4], String> {
    let v: Vec<f64> =
        s.split(',').map(|x| x.trim().parse::<f64>().map_err(|e| format!("{e}"))).collect::<Result<_, _>>()?;
    v.try_into().map_err(|_| "expected four comma-separated numbers".to_string())
}

impl Global {
    fn projection(&self, default: ProjectionSpec) -> anyhow::Result<ProjectionSpec> {
        Ok(ProjectionSpec::new(
            self.pole_axis.unwrap_or(default.pole_axis),
            self.pole_sign.unwrap_or(default.pole_sign),
        )?)
    }

    fn range(&self, default: (f64, f64)) -> (f64, f64) {
        self.range.unwrap_or(default)
    }

    /// Writes `records` to `--out` in the requested or inferred format, or as
    /// CSV to stdout.
    fn write(&self, name: &str, parameter: &str, records: &[CurveRecord]) -> anyhow::Result<()> {
        let meta = Meta { name: name.to_string(), parameter: parameter.to_string(), count: 0, note: None };
        let spec = self.projection(ProjectionSpec::default())?;
        match &self.out {
            Some(path) => {
                let format = self.format.unwrap_or_else(|| format_of(path));
                export_curve(records, path, format, &meta, &spec)?;
                eprintln!("wrote {} samples to {}", records.len(), path.display());
            }
            None => {
                desitter_cli::write_csv(std::io::stdout().lock(), records)?;
            }
        }
        Ok(())
    }
}

fn load(path: &Path) -> anyhow::Result<Vec<CurveRecord>> {
    let file = std::fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(read_csv(std::io::BufReader::new(file))?)
}

fn format_of(path: &Path) -> Format {
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => Format::Json,
        Some("svg") => Format::Svg,
        _ => Format::Csv,
    }
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let g = &cli.global;
    match cli.command {
        Command::Frame { input } => {
            let records = load(&input)?;
            g.write("frame", "t", &commands::frame_points(&records)?)?;
        }
        Command::Synthesize { kappa, tau, tau_sinh, tau_cosh } => {
            let out = commands::synthesize(kappa, tau, tau_sinh, tau_cosh, g.range((-1.0, 1.0)), g.step)?;
            let records: Vec<CurveRecord> = out.iter().map(CurveRecord::from).collect();
            g.write("synthesize", "s", &records)?;
        }
        Command::CheckRectifying { input, apex } => {
            let records = load(&input)?;
            let check = commands::check_rectifying(&records, apex.map(|a| Vec4f::new(a[0], a[1], a[2], a[3])), g.tol)?;
            let f = &check.fit;
            println!("mu1 {:.6e} mu2 {:.6e} s0 {:.6e}", f.mu1, f.mu2, f.s0);
            println!("sinh_coeff {:.6e} cosh_coeff {:.6e}", f.sinh_coeff, f.cosh_coeff);
            println!("residual_rms {:.3e} admissible {} rectifying {}", f.residual_rms, f.admissible, f.rectifying);
            if let Some(a) = &check.apex {
                println!(
                    "apex_max_residual {:.3e} boundary {:?} verdict {:?}",
                    a.max_residual(),
                    a.boundary,
                    a.verdict
                );
            }
            match &check.recovered {
                Ok((p, rms)) => {
                    let [x1, x2, x3, x4] = p.vec().0;
                    println!("recovered_apex {x1:.9},{x2:.9},{x3:.9},{x4:.9} rms {rms:.3e}");
                }
                Err(e) => println!("recovered_apex none ({e})"),
            }
            let verdict = check.verdict();
            println!("verdict {}", if verdict { "rectifying" } else { "not rectifying" });
            return Ok(verdict);
        }
        Command::Construct { a, t0, kappa0 } => {
            let default = if kappa0.is_some() { (-1.0, 1.0) } else { (0.1, 0.8) };
            let out = commands::construct(a, t0, kappa0, g.range(default), g.step)?;
            let records: Vec<CurveRecord> = out.iter().map(CurveRecord::from).collect();
            g.write("construct", "s", &records)?;
        }
        Command::ConeGeodesic { lambda1, lambda2, s0, negative_c, q } => {
            let params = ConeParams::new(lambda1, lambda2, s0, negative_c)?;
            let run = commands::cone_geodesic(params, q, g.range((-0.5, 0.5)), g.step)?;
            let (mu1, mu2) = run.params.ratio_coefficients();
            eprintln!(
                "c {:.6e} expected ({:.6e}, {:.6e}) fitted ({:.6e}, {:.6e}) rms {:.3e}",
                run.params.c, mu1, mu2, run.fit.sinh_coeff, run.fit.cosh_coeff, run.fit.residual_rms
            );
            let records: Vec<CurveRecord> = run.samples.iter().map(CurveRecord::from).collect();
            g.write("cone_geodesic", "s", &records)?;
        }
        Command::Project { input } => {
            let records = load(&input)?;
            let spec = g.projection(ProjectionSpec::default())?;
            match g.format {
                Some(Format::Svg) => {
                    let Some(path) = &g.out else { bail!("--format svg needs --out") };
                    let meta = Meta { name: "project".into(), parameter: "t".into(), count: 0, note: None };
                    export_curve(&records, path, Format::Svg, &meta, &spec)?;
                }
                Some(Format::Json) => bail!("project writes CSV or SVG"),
                _ => {
                    let rows = commands::project(&records, &spec)?;
                    let sink: Box<dyn std::io::Write> = match &g.out {
                        Some(p) => {
                            Box::new(std::fs::File::create(p).with_context(|| format!("creating {}", p.display()))?)
                        }
                        None => Box::new(std::io::stdout().lock()),
                    };
                    let mut w = csv::Writer::from_writer(sink);
                    w.write_record(["t", "y1", "y2", "y3"])?;
                    for (t, y) in rows {
                        w.write_record([t, y[0], y[1], y[2]].map(|v| format!("{v:.16e}")))?;
                    }
                    w.flush()?;
                }
            }
        }
        Command::Example { id } => {
            let id: ExampleId = id.parse()?;
            let mut opts = ExampleOptions::new(g.out.clone().unwrap_or_else(|| PathBuf::from(".")));
            opts.step = g.step;
            opts.format = g.format.unwrap_or(Format::Csv);
            if opts.format == Format::Svg {
                bail!("example data format must be csv or json; the SVG is always written");
            }
            if g.pole_axis.is_some() || g.pole_sign.is_some() {
                opts.projection = Some(g.projection(id.default_projection())?);
            }
            let report = run_example(id, &opts)?;
            for c in &report.checks {
                println!(
                    "{:<24} {:>12.4e}  tol {:.1e}  {}",
                    c.name,
                    c.value,
                    c.tol,
                    if c.pass { "ok" } else { "FAIL" }
                );
            }
            for f in &report.files {
                eprintln!("wrote {}", f.display());
            }
            return Ok(report.passed());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
