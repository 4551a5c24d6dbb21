use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use hk4_core::cubic::{adapt_to_node, two_node_discriminant, y_g_fit, CubicError, NetOnQuinticRNC, YgFitOptions};
use hk4_core::lattice::{abs_discriminant, Lattice};
use hk4_core::poly::{du_val_plane_criterion, LocalOptions, MultiPoly, PolyError, ProjPoint};
use hk4_core::report::{verify, Scope, VerifyOptions, DEFAULT_SEED};

#[derive(Parser)]
#[command(
    name = "hk4-verify",
    version,
    about = "Exact checks for numerical (K3)^[2] lattices and singular cubic fourfolds"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// One JSON object per line instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized identity checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Coefficient radius for lattice vector searches.
    #[arg(long = "box", global = true, default_value_t = 3, value_parser = clap::value_parser!(i64).range(1..=16))]
    search_box: i64,
    /// Working degree of local expansions.
    #[arg(long, global = true, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..=64))]
    truncation: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Run the registered checks: all, lattice, sym2, charclass or cubic.
    Verify { scope: String },
    /// Invariants of a lattice expression such as `3*U + 2*E8(-1) + <-2>`.
    Lattice { expr: String },
    /// Operations on cubic fourfolds and branch curves read from files.
    #[command(subcommand)]
    Cubic(CubicCommand),
}

#[derive(Subcommand)]
enum CubicCommand {
    /// Move a singular point to e5 and split the cubic as F X5 + G.
    Adapt {
        #[arg(long, default_value = "0,0,0,0,0,1")]
        point: String,
        file: PathBuf,
    },
    /// Equations F, G of the surface of lines through a singular point.
    LinesSurface {
        #[arg(long, default_value = "0,0,0,0,0,1")]
        point: String,
        file: PathBuf,
    },
    /// Discriminant quartic of a cubic singular at e4 and e5.
    TwoNodeQuartic { file: PathBuf },
    /// Du Val test for a double cover branched along a plane curve.
    DuvalCheck {
        #[arg(long, default_value = "0,0,1")]
        point: String,
        file: PathBuf,
    },
    /// Cubic swept by the planes of a net of divisors on the quintic normal curve.
    YgFit { file: PathBuf },
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<PolyError> for Failure {
    fn from(e: PolyError) -> Self {
        match e {
            PolyError::Parse(_) => Failure::Usage(e.to_string()),
            e => Failure::Check(e.to_string()),
        }
    }
}

impl From<CubicError> for Failure {
    fn from(e: CubicError) -> Self {
        match e {
            CubicError::Parse(_) | CubicError::Poly(PolyError::Parse(_)) => Failure::Usage(e.to_string()),
            e => Failure::Check(e.to_string()),
        }
    }
}

#[derive(Serialize)]
struct Field<'a> {
    command: &'a str,
    field: &'a str,
    value: String,
}

struct Out {
    json: bool,
    command: &'static str,
}

impl Out {
    fn field(&self, name: &str, value: impl ToString) {
        let value = value.to_string();
        if self.json {
            let f = Field {
                command: self.command,
                field: name,
                value,
            };
            println!("{}", serde_json::to_string(&f).expect("serializable"));
        } else {
            println!("{name}: {value}");
        }
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn point(s: &str, dim: usize) -> Result<ProjPoint, Failure> {
    let p: ProjPoint = s
        .parse()
        .map_err(|e: hk4_core::lattice::ParseError| Failure::Usage(format!("--point: {e}")))?;
    if p.dim() != dim {
        return Err(Failure::Usage(format!(
            "--point: expected {dim} coordinates, got {}",
            p.dim()
        )));
    }
    Ok(p)
}

fn run_verify(scope: &str, g: &Global) -> Result<bool, Failure> {
    let scope: Scope = scope.parse().map_err(Failure::Usage)?;
    let opts = VerifyOptions {
        seed: g.seed,
        search_radius: g.search_box,
        truncation: g.truncation,
    };
    let start = Instant::now();
    let report = verify(scope, &opts);
    if g.json {
        #[derive(Serialize)]
        struct Meta<'a> {
            version: &'a str,
            scope: &'a str,
            seed: u64,
            records: usize,
        }
        let meta = Meta {
            version: &report.version,
            scope: &report.scope,
            seed: report.seed,
            records: report.records.len(),
        };
        println!("{}", serde_json::to_string(&meta).expect("serializable"));
        for r in &report.records {
            println!("{}", serde_json::to_string(r).expect("serializable"));
        }
    } else {
        println!(
            "hk4-verify {} scope={} seed={}",
            report.version, report.scope, report.seed
        );
        for r in &report.records {
            println!("{r}");
        }
        println!("{} checks, {} failed", report.records.len(), report.failures());
    }
    eprintln!("elapsed: {:.2?}", start.elapsed());
    Ok(report.all_pass())
}

fn run_lattice(expr: &str, g: &Global) -> Result<bool, Failure> {
    let lat: Lattice = expr
        .parse()
        .map_err(|e: hk4_core::lattice::ParseError| Failure::Usage(e.to_string()))?;
    let out = Out {
        json: g.json,
        command: "lattice",
    };
    let sig = lat.signature();
    out.field("rank", lat.rank());
    out.field("determinant", lat.determinant());
    out.field("discriminant", abs_discriminant(&lat));
    out.field("signature", format!("({}, {})", sig.positive, sig.negative));
    let factors: Vec<String> = lat.smith().invariant_factors().iter().map(|f| f.to_string()).collect();
    out.field("invariant_factors", factors.join(" "));
    out.field("even", lat.is_even());
    Ok(true)
}

fn run_cubic(cmd: &CubicCommand, g: &Global) -> Result<bool, Failure> {
    match cmd {
        CubicCommand::Adapt { point: p, file } | CubicCommand::LinesSurface { point: p, file } => {
            let adapt_only = matches!(cmd, CubicCommand::Adapt { .. });
            let cubic = MultiPoly::parse_document(&read(file)?, 6)?;
            let p = point(p, 6)?;
            let c = adapt_to_node(&cubic, &p)?;
            let out = Out {
                json: g.json,
                command: if adapt_only { "adapt" } else { "lines-surface" },
            };
            out.field("F", &c.f);
            out.field("G", &c.g);
            if adapt_only {
                let rows: Vec<String> = c
                    .change
                    .to_rows()
                    .iter()
                    .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
                    .collect();
                out.field("change", rows.join(" "));
                out.field("adapted", &c.adapted);
                out.field("reconstructs", c.reconstruct() == c.adapted);
            }
            Ok(true)
        }
        CubicCommand::TwoNodeQuartic { file } => {
            let cubic = MultiPoly::parse_document(&read(file)?, 6)?;
            let t = two_node_discriminant(&cubic)?;
            let out = Out {
                json: g.json,
                command: "two-node-quartic",
            };
            out.field("b", &t.b);
            out.field("c", &t.c);
            out.field("d", &t.d);
            out.field("f", &t.f);
            out.field("P", &t.quartic);
            let factor = t.factorization_residual().is_zero();
            let grad = t.gradient_identity_residuals().iter().all(MultiPoly::is_zero);
            let fibers = t.first_fiber_residual().is_zero() && t.second_fiber_residual().is_zero();
            let rebuilt = t.reconstruct() == cubic;
            out.field("det_M_eq_fP", factor);
            out.field("gradient_identity", grad);
            out.field("fiber_ideals", fibers);
            out.field("reconstructs", rebuilt);
            Ok(factor && grad && fibers && rebuilt)
        }
        CubicCommand::DuvalCheck { point: p, file } => {
            let curve = MultiPoly::parse_document(&read(file)?, 3)?;
            let p = point(p, 3)?;
            let v = du_val_plane_criterion(
                &curve,
                &p,
                LocalOptions {
                    truncation: g.truncation,
                },
            )?;
            let out = Out {
                json: g.json,
                command: "duval-check",
            };
            out.field("multiplicity", v.multiplicity);
            out.field("distinct_tangents", v.distinct_tangents);
            out.field("verdict", if v.accepted { "accepted" } else { "rejected" });
            Ok(true)
        }
        CubicCommand::YgFit { file } => {
            let net: NetOnQuinticRNC = read(file)?.parse()?;
            let fit = y_g_fit(&net, &YgFitOptions::default())?;
            let text = fit.cubic.to_string();
            let hash = hex::encode(Sha256::digest(text.as_bytes()));
            let out = Out {
                json: g.json,
                command: "yg-fit",
            };
            out.field("net", &net);
            out.field("samples", fit.samples);
            out.field("cubic", text);
            out.field("sha256", hash);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify { scope } => run_verify(scope, &cli.global),
        Command::Lattice { expr } => run_lattice(expr, &cli.global),
        Command::Cubic(cmd) => run_cubic(cmd, &cli.global),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}
