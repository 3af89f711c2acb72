use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use gmswitch::certify::{certify, CertifyOptions, Status};
use gmswitch::construct::{
    block_graph, jt_design, pg_design, switching_partition, twisted_grassmann, Design, Geometry, Parameters,
};
use gmswitch::graph::io::{to_edge_list, to_graph6};
use gmswitch::graph::{validate_gm, gm_switch, GmTally, Graph, InvariantKind, QuotientMatrix, DEFAULT_SPECTRAL_BUDGET};
use gmswitch::subspace::{Polarity, DEFAULT_ENUMERATION_BUDGET};
use gmswitch::{Error, Result};

#[derive(Parser)]
#[command(name = "gmswitch", version, about = "Grassmann graphs, Godsil-McKay switching and twisted Grassmann graphs over GF(q)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a graph or design and write it out.
    Build {
        kind: Kind,
        #[command(flatten)]
        common: Common,
        /// Output format; designs are always JSON.
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Design whose block graph `block-graph` builds.
        #[arg(long, value_enum, default_value = "jt")]
        design: DesignKind,
    },
    /// Switch the Grassmann graph with the polarity partition.
    Switch {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "graph6")]
        format: Format,
    },
    /// Run every check and write a JSON certificate.
    Certify {
        #[command(flatten)]
        common: Common,
        /// Certify cospectrality by intersection arrays only.
        #[arg(long)]
        skip_charpoly: bool,
        /// Largest order for exact characteristic polynomials.
        #[arg(long, env = "GMSWITCH_SPECTRAL_BUDGET", default_value_t = DEFAULT_SPECTRAL_BUDGET)]
        budget: usize,
        #[arg(long, value_enum, default_value = "nbhd-charpoly")]
        invariant: Invariant,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    q: u32,
    #[arg(long)]
    e: usize,
    /// Output path; standard output when omitted (no sidecar files then).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Maximum number of subspaces to enumerate.
    #[arg(long, env = "GMSWITCH_ENUM_BUDGET", default_value_t = DEFAULT_ENUMERATION_BUDGET)]
    enum_budget: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Grassmann,
    Twisted,
    PgDesign,
    JtDesign,
    BlockGraph,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Graph6,
    Edges,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum DesignKind {
    Pg,
    Jt,
}

#[derive(Clone, Copy, ValueEnum)]
enum Invariant {
    NbhdCharpoly,
    CliqueCounts,
}

#[derive(Serialize)]
struct GraphJson {
    n: usize,
    edges: Vec<(usize, usize)>,
}

#[derive(Serialize)]
struct PartitionFile<'a> {
    params: Parameters,
    cells: &'a [Vec<usize>],
    exempt: &'a [usize],
    quotient: Option<&'a QuotientMatrix>,
    tally: GmTally,
}

fn write_out(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn sidecar(out: Option<&Path>, suffix: &str, value: &impl Serialize) -> Result<()> {
    if let Some(p) = out {
        let mut name = p.as_os_str().to_owned();
        name.push(suffix);
        std::fs::write(PathBuf::from(name), serde_json::to_string(value)? + "\n")?;
    }
    Ok(())
}

fn render<L>(g: &Graph<L>, format: Format) -> Result<String> {
    match format {
        Format::Graph6 => to_graph6(g),
        Format::Edges => Ok(to_edge_list(g)),
        Format::Json => Ok(serde_json::to_string(&GraphJson { n: g.n(), edges: g.edges().collect() })? + "\n"),
    }
}

fn write_graph<L: Serialize>(g: &Graph<L>, format: Format, out: Option<&Path>) -> Result<()> {
    write_out(out, &render(g, format)?)?;
    sidecar(out, ".labels.json", &g.labels())
}

fn write_design(d: &Design, geom: &Geometry, out: Option<&Path>) -> Result<()> {
    write_out(out, &(serde_json::to_string(&d.to_json(&geom.points)?)? + "\n"))
}

fn geometry(c: &Common) -> Result<Geometry> {
    Geometry::new(Parameters::new(c.q, c.e)?, c.enum_budget)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Build { kind, common, format, design } => {
            let geom = geometry(&common)?;
            let out = common.out.as_deref();
            let graph_format = format.unwrap_or(Format::Graph6);
            let design_only = |f: Option<Format>| match f {
                None | Some(Format::Json) => Ok(()),
                Some(_) => Err(Error::Parameter("designs are written as JSON only".into())),
            };
            match kind {
                Kind::Grassmann => write_graph(&geom.grassmann()?, graph_format, out)?,
                Kind::Twisted => write_graph(&twisted_grassmann(&geom)?, graph_format, out)?,
                Kind::PgDesign => {
                    design_only(format)?;
                    write_design(&pg_design(&geom)?, &geom, out)?
                }
                Kind::JtDesign => {
                    design_only(format)?;
                    geom.params.require_certifiable()?;
                    let sigma = Polarity::symplectic(&geom.field, geom.params.e);
                    write_design(&jt_design(&geom, &sigma)?, &geom, out)?
                }
                Kind::BlockGraph => {
                    let d = match design {
                        DesignKind::Pg => pg_design(&geom)?,
                        DesignKind::Jt => {
                            geom.params.require_certifiable()?;
                            jt_design(&geom, &Polarity::symplectic(&geom.field, geom.params.e))?
                        }
                    };
                    write_graph(&block_graph(&d, geom.point_count(geom.params.e))?, graph_format, out)?
                }
            }
            Ok(true)
        }
        Command::Switch { common, format } => {
            let geom = geometry(&common)?;
            geom.params.require_certifiable()?;
            let out = common.out.as_deref();
            let gamma = geom.grassmann()?;
            let mut part = switching_partition(&geom, &Polarity::symplectic(&geom.field, geom.params.e))?;
            let report = part.partition.validate(&gamma)?;
            let switched = gm_switch(&gamma, &part.partition)?;
            debug_assert!(validate_gm(&switched, &part.partition)?.passed);
            write_graph(&switched, format, out)?;
            let p = &part.partition;
            sidecar(
                out,
                ".partition.json",
                &PartitionFile { params: geom.params, cells: &p.cells, exempt: &p.exempt, quotient: p.quotient.as_ref(), tally: report.tally },
            )?;
            Ok(true)
        }
        Command::Certify { common, skip_charpoly, budget, invariant } => {
            let opts = CertifyOptions {
                spectral_budget: budget,
                enumeration_budget: common.enum_budget,
                skip_charpoly,
                invariant: match invariant {
                    Invariant::NbhdCharpoly => InvariantKind::NbhdCharpoly,
                    Invariant::CliqueCounts => InvariantKind::CliqueCounts,
                },
            };
            let cert = certify(Parameters::new(common.q, common.e)?, &opts)?;
            write_out(common.out.as_deref(), &(serde_json::to_string_pretty(&cert)? + "\n"))?;
            for (name, v) in cert.verdicts() {
                let tag = match v.status {
                    Status::Pass => "pass",
                    Status::Fail => "FAIL",
                    Status::Skipped => "skip",
                };
                let note = v.reason.as_deref().or(v.detail.as_deref()).unwrap_or("");
                eprintln!("{tag:4} {name}: {note}");
            }
            Ok(cert.passed)
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parameter(_) | Error::Domain(_) | Error::DivisionByZero(_) | Error::Parse(_) | Error::Io(_) => 2,
        Error::Budget { .. } => 3,
        Error::Hypothesis(_) | Error::Precondition(_) | Error::Consistency(_) | Error::Json(_) => 1,
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("gmswitch: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
