//! `evs`: JSON reports over exponential vector space instances.
//!
//! Exit codes: 0 success, 1 domain failure (the report holds the
//! counterexample or refutation), 2 input error.

mod load;
mod request;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use evspace::metric::{BuiltinParams, Carrier, Point2};
use evspace::{Error, Rational, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use request::{AxiomInstance, CombineOp, OrderOp, Request, Status, TransformKind, WeightInput};

#[derive(Parser, Debug)]
#[command(name = "evs", version, about = "Exact checks on exponential vector spaces", arg_required_else_help = true, args_conflicts_with_subcommands = true)]
struct Cli {
    /// Re-run the request embedded in a report and compare verdicts.
    #[arg(long, value_name = "REPORT")]
    replay: Option<PathBuf>,

    /// Seed for sampling (required by `axioms`).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Truncation depth: carrier points, basis size or vector dimension.
    #[arg(long, global = true)]
    depth: Option<usize>,

    /// Witness threshold, as `p/q` or a decimal.
    #[arg(long, global = true)]
    eps: Option<Rational>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the metric axioms exhaustively on a matrix file (JSON or CSV).
    Validate { file: PathBuf },
    /// Add, scale or compare metric matrices.
    Combine {
        #[arg(long, value_enum)]
        op: CombineOp,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<Rational>,
        a: PathBuf,
        b: Option<PathBuf>,
    },
    /// Comparing values in both directions and the resulting classification.
    Compare { d: PathBuf, rho: PathBuf },
    /// Apply `ρ/(1+ρ)` or `min{1, ρ}` to a matrix or lazy metric file.
    Transform {
        #[arg(long, value_enum)]
        kind: TransformKind,
        file: PathBuf,
    },
    /// Materialize a named metric at `--depth` points.
    Builtin {
        name: String,
        #[arg(long)]
        step: Option<Rational>,
        #[arg(long)]
        n: Option<u64>,
        /// JSON list of plane points `[u, v]`.
        #[arg(long)]
        points: Option<PathBuf>,
        /// JSON carrier description (for `discrete`).
        #[arg(long)]
        carrier: Option<PathBuf>,
    },
    /// Depth-indexed pair minima between two lazy metrics.
    PartialCompare {
        /// Lazy-metric file or parameterless builtin name.
        d: String,
        rho: String,
        #[arg(long, value_delimiter = ',', required = true)]
        depths: Vec<usize>,
    },
    /// Cauchy sequence in D(R²) whose pointwise limit is not a metric.
    CauchyDemo {
        #[arg(long, value_delimiter = ',', default_values_t = [10u64, 20, 40])]
        depths: Vec<u64>,
        /// JSON list of point pairs `[[u, u'], [v, v']]`.
        #[arg(long)]
        pairs: Option<PathBuf>,
    },
    /// Weighted sup norms and the norm family.
    Norms {
        #[command(subcommand)]
        action: NormsCommand,
    },
    /// Run the axiom verifier on a seeded sample.
    Axioms {
        #[arg(long, value_enum)]
        instance: AxiomInstance,
        #[arg(long, default_value_t = evspace::evs::DEFAULT_SAMPLE_SIZE)]
        sample_size: usize,
        /// Also run the property suite.
        #[arg(long)]
        properties: bool,
    },
    /// Testing sets, independence, generators, bases and feasibility.
    Order {
        #[command(subcommand)]
        action: OrderCommand,
    },
}

#[derive(Subcommand, Debug)]
enum NormsCommand {
    /// The B / D / E partition of `h0 … h{depth-1}`.
    Partition,
    /// The weight table of a family spec.
    Weights {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Evaluate a norm on a vector.
    Eval {
        #[command(flatten)]
        weights: WeightSource,
        #[arg(long)]
        vector: PathBuf,
    },
    /// Independence witnesses between two family norms at `--eps`.
    Witness {
        #[arg(long, num_args = 1, required = true)]
        spec: Vec<PathBuf>,
    },
    /// The induced metric `f(x - y)` on a list of vectors.
    Embed {
        #[command(flatten)]
        weights: WeightSource,
        /// JSON list of vectors.
        #[arg(long)]
        points: PathBuf,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct WeightSource {
    /// Weight-map file (index → weight).
    #[arg(long)]
    weights: Option<PathBuf>,
    /// Family spec file.
    #[arg(long)]
    spec: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OrderArgs {
    /// Universe manifest: `{"instance": …, "elements": [files]}`.
    #[arg(long)]
    universe: PathBuf,
    /// Element files, resolved against the working directory.
    elements: Vec<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum OrderCommand {
    /// Is the second element in L(first)?
    InL(OrderArgs),
    /// Are the listed elements pairwise orderly independent?
    Indep(OrderArgs),
    /// Do the listed elements generate the universe?
    Generates(OrderArgs),
    /// Generates and independent.
    Basis(OrderArgs),
    /// Is every universe element below the listed one in its testing set?
    Feasible(OrderArgs),
}

#[derive(Serialize, Deserialize)]
struct Report {
    command: String,
    status: Status,
    request: Request,
    result: Value,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ReplayReport {
    command: String,
    status: Status,
    replayed_status: Status,
    verified: bool,
    /// The fresh result, present only when it differs from the stored one.
    #[serde(skip_serializing_if = "Option::is_none")]
    replayed_result: Option<Value>,
}

fn require<T>(v: Option<T>, flag: &str, cmd: &str) -> Result<T> {
    v.ok_or_else(|| Error::Input(format!("{cmd} requires {flag}")))
}

fn weight_input(w: &WeightSource) -> Result<WeightInput> {
    match (&w.weights, &w.spec) {
        (Some(p), _) => Ok(WeightInput::Finite(load::json(p)?)),
        (_, Some(p)) => Ok(WeightInput::Family(load::json(p)?)),
        _ => Err(Error::Input("give --weights or --spec".into())),
    }
}

fn order_request(op: OrderOp, a: &OrderArgs) -> Result<Request> {
    let m = load::manifest(&a.universe)?;
    let args = a
        .elements
        .iter()
        .map(|p| match (&m.instance, p.to_str()) {
            (request::InstanceTag::Lazy { .. }, Some(name)) => load::to_value(&load::lazy(name)?),
            _ => load::element(&m.instance, p),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Request::Order { op, instance: m.instance, args, universe: m.elements })
}

fn default_pairs() -> Vec<[Point2; 2]> {
    let p = |a: i64, b: i64| [Rational::from_integer(a), Rational::from_integer(b)];
    vec![[p(0, 0), p(0, 1)], [p(0, 0), p(1, 0)], [p(1, 2), p(-1, -1)]]
}

fn build(cli: &Cli, command: &Command) -> Result<Request> {
    Ok(match command {
        Command::Validate { file } => Request::Validate { matrix: load::matrix(file)? },
        Command::Combine { op, alpha, a, b } => Request::Combine {
            op: *op,
            a: load::matrix(a)?,
            b: b.as_deref().map(load::matrix).transpose()?,
            alpha: alpha.clone(),
        },
        Command::Compare { d, rho } => Request::Compare { d: load::matrix(d)?, rho: load::matrix(rho)? },
        Command::Transform { kind, file } => {
            Request::Transform { kind: *kind, input: load::from_value(&load::metric_value(file)?)? }
        }
        Command::Builtin { name, step, n, points, carrier } => Request::Builtin {
            name: name.clone(),
            params: BuiltinParams {
                step: step.clone(),
                n: *n,
                points: points.as_deref().map(load::json).transpose()?,
                carrier: carrier.as_deref().map(load::json::<Carrier>).transpose()?,
            },
            depth: require(cli.depth, "--depth", "builtin")?,
        },
        Command::PartialCompare { d, rho, depths } => Request::PartialCompare {
            d: load::lazy(d)?,
            rho: load::lazy(rho)?,
            depths: depths.clone(),
        },
        Command::CauchyDemo { depths, pairs } => Request::CauchyDemo {
            depths: depths.clone(),
            pairs: match pairs {
                Some(p) => load::json(p)?,
                None => default_pairs(),
            },
        },
        Command::Norms { action } => match action {
            NormsCommand::Partition => Request::NormsPartition { depth: require(cli.depth, "--depth", "norms partition")? },
            NormsCommand::Weights { spec } => Request::NormsWeights { spec: load::json(spec)? },
            NormsCommand::Eval { weights, vector } => {
                Request::NormsEval { weights: weight_input(weights)?, vector: load::json(vector)? }
            }
            NormsCommand::Witness { spec } => {
                let [p, q] = spec.as_slice() else {
                    return Err(Error::Input("norms witness takes exactly two --spec files".into()));
                };
                Request::NormsWitness {
                    p: load::json(p)?,
                    q: load::json(q)?,
                    eps: require(cli.eps.clone(), "--eps", "norms witness")?,
                }
            }
            NormsCommand::Embed { weights, points } => {
                Request::NormsEmbed { weights: weight_input(weights)?, points: load::json(points)? }
            }
        },
        Command::Axioms { instance, sample_size, properties } => {
            let default_size = match instance {
                AxiomInstance::Norm | AxiomInstance::NormFamily => 12,
                AxiomInstance::Cone | AxiomInstance::Hyperspace => 2,
                _ => 6,
            };
            Request::Axioms {
                instance: *instance,
                seed: require(cli.seed, "--seed", "axioms")?,
                sample_size: *sample_size,
                size: cli.depth.unwrap_or(default_size),
                properties: *properties,
            }
        }
        Command::Order { action } => match action {
            OrderCommand::InL(a) => order_request(OrderOp::InL, a)?,
            OrderCommand::Indep(a) => order_request(OrderOp::Indep, a)?,
            OrderCommand::Generates(a) => order_request(OrderOp::Generates, a)?,
            OrderCommand::Basis(a) => order_request(OrderOp::Basis, a)?,
            OrderCommand::Feasible(a) => order_request(OrderOp::Feasible, a)?,
        },
    })
}

fn emit<T: Serialize>(value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Error::Io(e.to_string())),
        _ => Ok(()),
    }
}

fn run_request(request: Request) -> Result<u8> {
    let outcome = request.execute()?;
    let report = Report { command: request.name(), status: outcome.status, request, result: outcome.result };
    emit(&report)?;
    Ok(report.status.exit_code())
}

fn replay(path: &PathBuf) -> Result<u8> {
    let stored: Report = load::json(path)?;
    let fresh = stored.request.execute()?;
    let verified = fresh.status == stored.status && fresh.result == stored.result;
    let report = ReplayReport {
        command: stored.command,
        status: stored.status,
        replayed_status: fresh.status,
        verified,
        replayed_result: (!verified).then_some(fresh.result),
    };
    emit(&report)?;
    Ok(if verified { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match (&cli.replay, &cli.command) {
        (Some(path), _) => replay(path),
        (None, Some(command)) => build(&cli, command).and_then(run_request),
        (None, None) => Err(Error::Input("a subcommand or --replay is required".into())),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}\n\n{}", Cli::command().render_usage());
            ExitCode::from(2)
        }
    }
}
