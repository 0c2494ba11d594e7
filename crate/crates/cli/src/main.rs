mod commands;
mod load;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use report::{envelope, Failure, Outcome};

#[derive(Parser)]
#[command(name = "sullivan", version, about = "Exact computations with Sullivan minimal models")]
#[command(after_help = "Exit codes: 0 computed, 1 property violated, 2 input error, 3 inconclusive or out of range.\n\
Without -f the fixture catalog is loaded; set SULLIVAN_FIXTURES to a directory of .sul files to replace it.")]
struct Cli {
    /// Input file with model, map and homotopy declarations (repeatable)
    #[arg(short = 'f', long = "file", global = true)]
    files: Vec<PathBuf>,

    /// Load the fixture catalog as well as the input files
    #[arg(long, global = true)]
    with_fixtures: bool,

    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Validate every object in the workspace
    Check,
    /// Cohomology with representatives, degree by degree
    Cohomology {
        #[arg(long)]
        model: String,
        /// defaults to the exactness bound or the top degree
        #[arg(long)]
        max_degree: Option<u32>,
    },
    /// Betti numbers, Euler characteristic, cup length and finiteness flags
    Invariants {
        #[arg(long)]
        model: String,
    },
    /// Rank of the rational Gottlieb group in one degree
    Gottlieb {
        #[arg(long)]
        model: String,
        #[arg(long)]
        degree: u32,
        /// rational category bound; defaults to the model's own
        #[arg(long)]
        cat0: Option<u32>,
    },
    /// DG check and induced maps on cohomology
    MapCheck {
        #[arg(long)]
        map: String,
    },
    /// Decide whether two maps are homotopic
    Homotopic {
        #[arg(long = "f")]
        f: String,
        #[arg(long = "g")]
        g: String,
        /// largest power of t tried in the cylinder
        #[arg(long)]
        t_cap: Option<u32>,
    },
    /// Necessary conditions for a map to be cyclic
    Battery {
        #[arg(long)]
        map: String,
        #[arg(long)]
        cat0: Option<u32>,
    },
    /// Classify cyclic maps A -> X up to homotopy
    Classify {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
    },
    /// Explicit nullhomotopy of a map factoring through an odd model
    Nullhomotopy {
        #[arg(long)]
        map: String,
        /// the map into the odd model, then the map out of it
        #[arg(long, num_args = 2, value_names = ["INTO", "OUT_OF"], required = true)]
        via: Vec<String>,
    },
    /// Fixture catalog maintenance
    Fixtures {
        /// recompute every manifest value
        #[arg(long)]
        selftest: bool,
        /// print the catalog in text form
        #[arg(long, conflicts_with = "selftest")]
        emit: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Cohomology { .. } => "cohomology",
            Command::Invariants { .. } => "invariants",
            Command::Gottlieb { .. } => "gottlieb",
            Command::MapCheck { .. } => "map-check",
            Command::Homotopic { .. } => "homotopic",
            Command::Battery { .. } => "battery",
            Command::Classify { .. } => "classify",
            Command::Nullhomotopy { .. } => "nullhomotopy",
            Command::Fixtures { .. } => "fixtures",
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    if let Command::Fixtures { selftest, emit } = cli.command {
        return commands::fixtures(selftest, emit);
    }
    let loaded = load::workspace(&cli.files, cli.with_fixtures)?;
    let ws = &loaded.workspace;
    match &cli.command {
        Command::Check => commands::check(&loaded),
        Command::Cohomology { model, max_degree } => commands::cohomology(ws, model, *max_degree),
        Command::Invariants { model } => commands::invariants(ws, model),
        Command::Gottlieb { model, degree, cat0 } => commands::gottlieb(ws, model, *degree, *cat0),
        Command::MapCheck { map } => commands::map_check(ws, map),
        Command::Homotopic { f, g, t_cap } => commands::homotopic(ws, f, g, *t_cap),
        Command::Battery { map, cat0 } => commands::battery(ws, map, *cat0),
        Command::Classify { source, target } => commands::classify(ws, source, target),
        Command::Nullhomotopy { map, via } => commands::nullhomotopy(ws, map, via),
        Command::Fixtures { .. } => unreachable!(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = cli.command.name();
    let code = match run(&cli) {
        Ok(o) => {
            match cli.format {
                Format::Human => println!("{}", o.human),
                Format::Structured => println!("{:#}", envelope(command, o.code, ("report", o.data))),
            }
            o.code
        }
        Err(e) => {
            match cli.format {
                Format::Human => eprintln!("{}", e.human()),
                Format::Structured => {
                    let body = serde_json::to_value(&e).expect("errors serialize");
                    println!("{:#}", envelope(command, e.code, ("error", body)));
                }
            }
            e.code
        }
    };
    ExitCode::from(code)
}
