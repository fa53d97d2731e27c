use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use groupwl::analysis::analyze;
use groupwl::catalog;
use groupwl::experiments::{check_equivalence, ExperimentError, GridParams};
use groupwl::game::{spoiler_wins, GameConfig, GameError, GameSpec, Solver, SolverOptions, DEFAULT_MAX_GAME_ORDER};
use groupwl::group::{parse_table, write_table, Group, GroupError, DEFAULT_MAX_ORDER};
use groupwl::wl::{run, Rounds, Version, WlError, WlParams, WlReport};

const EXIT_HELP: &str = "\
Exit codes:
  0  success (wl and game exit 0 whatever the verdict)
  2  usage error
  3  file could not be read or written
  4  input does not parse or is not a group
  5  a size cap or search budget was hit
  6  a checked contract was violated (check-equivalence failures)";

#[derive(Parser)]
#[command(name = "groupwl", version, about = "Weisfeiler-Leman colorings and pebble games on finite groups")]
#[command(after_help = EXIT_HELP)]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "GROUPWL_THREADS")]
    threads: Option<usize>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    /// Line-oriented key=value.
    Kv,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in groups, or write one out as a Cayley table.
    Catalog {
        /// Print this group's table instead of the listing.
        #[arg(long)]
        emit: Option<String>,
        /// Write the table here instead of stdout.
        #[arg(long, short, requires = "emit")]
        output: Option<PathBuf>,
    },
    /// Check that a Cayley-table file describes a group.
    Validate { file: PathBuf },
    /// Report normal-structure invariants (radical, socle, PKer).
    Analyze {
        /// Table file or catalog name.
        group: String,
    },
    /// Run the WL coloring on a pair of groups.
    Wl {
        left: String,
        right: String,
        #[command(flatten)]
        params: PairParams,
        /// Number of rounds, or `stable`.
        #[arg(long, default_value = "stable")]
        r: String,
        /// Run even above the per-k order caps.
        #[arg(long)]
        override_caps: bool,
    },
    /// Solve the pebble game on a pair of groups.
    Game {
        left: String,
        right: String,
        #[command(flatten)]
        params: PairParams,
        #[arg(long, default_value_t = 1)]
        r: usize,
        /// Print Spoiler's strategy tree when Spoiler wins.
        #[arg(long)]
        certificate: bool,
        /// Restrict Duplicator to identity- and inverse-preserving bijections.
        #[arg(long)]
        inverse_pruning: bool,
        /// Starting pebbles on the left group, comma separated.
        #[arg(long, requires = "right_tuple")]
        left_tuple: Option<String>,
        /// Starting pebbles on the right group, comma separated.
        #[arg(long, requires = "left_tuple")]
        right_tuple: Option<String>,
        #[arg(long)]
        max_nodes: Option<usize>,
        /// Time limit in seconds.
        #[arg(long)]
        time_limit: Option<f64>,
        /// Largest group order the solver accepts.
        #[arg(long, default_value_t = DEFAULT_MAX_GAME_ORDER)]
        max_order: usize,
    },
    /// Check the game/coloring equivalences over all catalog pairs.
    CheckEquivalence {
        #[arg(long, default_value_t = 6)]
        max_order: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        r_max: usize,
        /// Random starting pebblings per pair.
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Args)]
struct PairParams {
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 2)]
    q: usize,
    #[arg(long, default_value = "II")]
    version: Version,
}

enum Failure {
    Usage(String),
    Io(String),
    Input(String),
    Budget(String),
    Contract(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
            Failure::Input(_) => 4,
            Failure::Budget(_) => 5,
            Failure::Contract(_) => 6,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Io(m) | Failure::Input(m) | Failure::Budget(m) | Failure::Contract(m) => m,
        }
    }
}

impl From<GroupError> for Failure {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::TooLarge { .. } => Failure::Budget(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<WlError> for Failure {
    fn from(e: WlError) -> Self {
        match e {
            WlError::InvalidParams(_) => Failure::Usage(e.to_string()),
            WlError::TooLarge { .. } => Failure::Budget(e.to_string()),
            WlError::CorollaryViolation { .. } => Failure::Contract(e.to_string()),
        }
    }
}

impl From<GameError> for Failure {
    fn from(e: GameError) -> Self {
        match e {
            GameError::BudgetExceeded | GameError::TooLarge { .. } => Failure::Budget(e.to_string()),
            GameError::InvalidSpec(_) | GameError::InvalidConfig(_) | GameError::SizeMismatch(..) => {
                Failure::Usage(e.to_string())
            }
            GameError::MalformedCertificate(_) => Failure::Contract(e.to_string()),
        }
    }
}

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Group(e) => e.into(),
            ExperimentError::Wl(e) => e.into(),
            ExperimentError::Game(e) => e.into(),
        }
    }
}

/// A table file if the path exists, otherwise a catalog or group name.
fn load_group(spec: &str) -> Result<Group, Failure> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{spec}: {e}")))?;
        return parse_table(&text).map_err(|e| Failure::Input(format!("{spec}: {e}")));
    }
    let name = catalog::resolve(spec).map_err(|e| Failure::Input(format!("{spec}: not a file, and {e}")))?;
    Ok(Group::named_with_limit(&name, DEFAULT_MAX_ORDER)?)
}

fn parse_tuple(text: &str) -> Result<Vec<usize>, Failure> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Failure::Usage(format!("bad element {s:?} in tuple {text:?}")))
        })
        .collect()
}

fn run_command(cli: Cli) -> Result<(), Failure> {
    let kv = cli.format == Format::Kv;
    match cli.command {
        Command::Catalog { emit: None, .. } => {
            let mut out = String::new();
            for e in catalog::catalog() {
                let line = if kv {
                    format!("group.{}={}\n", e.name, e.order())
                } else if e.aliases.is_empty() {
                    format!("{:<22} {:>5}\n", e.name, e.order())
                } else {
                    format!("{:<22} {:>5}  (also {})\n", e.name, e.order(), e.aliases.join(", "))
                };
                out.push_str(&line);
            }
            // A closed pipe (`| head`) is not an error worth reporting.
            let _ = std::io::stdout().write_all(out.as_bytes());
        }
        Command::Catalog { emit: Some(name), output } => {
            let group = Group::named_with_limit(&catalog::resolve(&name)?, usize::MAX)?;
            let text = write_table(&group);
            match output {
                Some(path) => fs::write(&path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
                None => print!("{text}"),
            }
        }
        Command::Validate { file } => {
            let text = fs::read_to_string(&file).map_err(|e| Failure::Io(format!("{}: {e}", file.display())))?;
            match parse_table(&text) {
                Ok(g) => println!("VALID order={}", g.order()),
                Err(e) => {
                    println!("INVALID {e}");
                    return Err(Failure::Input(format!("{}: {e}", file.display())));
                }
            }
        }
        Command::Analyze { group } => {
            let g = load_group(&group)?;
            let report = analyze(&g).map_err(|e| Failure::Contract(e.to_string()))?;
            if kv {
                print!("{}", report.key_values());
            } else {
                print!("{report}");
            }
        }
        Command::Wl {
            left,
            right,
            params,
            r,
            override_caps,
        } => {
            let rounds = if r == "stable" {
                Rounds::Stable
            } else {
                Rounds::Finite(r.parse().map_err(|_| Failure::Usage(format!("--r expects a number or `stable`, got {r:?}")))?)
            };
            let (g, h) = (load_group(&left)?, load_group(&right)?);
            let mut wl = WlParams::new(params.k, params.q, params.version);
            wl.ignore_caps = override_caps;
            let outcome = run(&g, &h, &wl, rounds)?;
            let report = WlReport {
                left: &left,
                right: &right,
                outcome: &outcome,
            };
            if kv {
                print!("{}", report.key_values());
            } else {
                print!("{report}");
            }
        }
        Command::Game {
            left,
            right,
            params,
            r,
            certificate,
            inverse_pruning,
            left_tuple,
            right_tuple,
            max_nodes,
            time_limit,
            max_order,
        } => {
            let (g, h) = (load_group(&left)?, load_group(&right)?);
            let spec = GameSpec::new(params.k, r, params.q, params.version)?;
            if g.order() != h.order() {
                // Unequal orders are a win before any move.
                print_game(kv, &left, &right, &spec, true, Some(0), None);
                return Ok(());
            }
            let start = match (left_tuple, right_tuple) {
                (Some(x), Some(y)) => {
                    let (x, y) = (parse_tuple(&x)?, parse_tuple(&y)?);
                    if x.len() != params.k {
                        return Err(Failure::Usage(format!("start tuples need {} entries", params.k)));
                    }
                    GameConfig::from_tuples(&x, &y)?
                }
                _ => GameConfig::empty(params.k),
            };
            let options = SolverOptions {
                inverse_pruning,
                max_nodes,
                time_limit: time_limit.map(Duration::from_secs_f64),
                max_order,
            };
            let result = spoiler_wins(&g, &h, &spec, &start, options.clone(), certificate)?;
            let minimal = if result.spoiler_wins {
                let mut solver = Solver::new(&g, &h, &spec, options)?;
                solver.minimal_rounds(&start, r)?
            } else {
                None
            };
            print_game(kv, &left, &right, &spec, result.spoiler_wins, minimal, result.certificate.as_ref());
        }
        Command::CheckEquivalence {
            max_order,
            k,
            r_max,
            samples,
            seed,
        } => {
            let report = check_equivalence(&GridParams {
                max_order,
                k,
                max_rounds: r_max,
                samples,
                seed,
            })?;
            if kv {
                print!("{}", report.key_values());
            } else {
                print_grid(&report);
            }
            if !report.passed() {
                return Err(Failure::Contract("some grid cells violate the stated equivalences".into()));
            }
        }
    }
    Ok(())
}

fn print_game(
    kv: bool,
    left: &str,
    right: &str,
    spec: &GameSpec,
    wins: bool,
    minimal: Option<usize>,
    certificate: Option<&groupwl::game::Certificate>,
) {
    let verdict = if wins {
        format!("SPOILER WINS within {} rounds", spec.r)
    } else {
        format!("DUPLICATOR SURVIVES {} rounds", spec.r)
    };
    let minimal = minimal.map_or("none".to_string(), |m| m.to_string());
    if kv {
        println!("left={left}\nright={right}");
        println!("k={}\nr={}\nq={}\nversion={}", spec.k, spec.r, spec.q, spec.version);
        println!("spoiler_wins={wins}\nminimal_rounds={minimal}\nverdict={verdict}");
    } else {
        println!("{left} vs {right}  k={} q={} version {}", spec.k, spec.q, spec.version);
        println!("{verdict}");
        println!("minimal rounds: {minimal}");
    }
    if let Some(cert) = certificate {
        if kv {
            println!("certificate_depth={}", cert.depth());
        } else {
            println!("certificate:");
        }
        print!("{cert}");
    }
}

fn print_grid(report: &groupwl::experiments::GridReport) {
    use std::collections::BTreeMap;
    let mut by_pair: BTreeMap<(String, String), (usize, usize)> = BTreeMap::new();
    for c in &report.game.cells {
        let slot = by_pair.entry((c.left.clone(), c.right.clone())).or_default();
        slot.0 += 1;
        slot.1 += usize::from(!c.agrees());
    }
    println!("game vs coloring");
    for ((a, b), (cells, bad)) in &by_pair {
        println!("  {a:<14} {b:<14} {}  ({cells} cells)", if *bad == 0 { "pass" } else { "FAIL" });
    }
    println!("multiset vs identity colors");
    for c in &report.corollary.cells {
        let ok = c.multiset_equal == c.identity_equal;
        println!("  {:<14} {:<14} k={} {:<2} {}", c.left, c.right, c.k, c.version, if ok { "pass" } else { "FAIL" });
    }
    println!("version comparison");
    for c in &report.versions.cells {
        let r = match c.rounds {
            Rounds::Finite(r) => r.to_string(),
            Rounds::Stable => "stable".into(),
        };
        println!("  {:<14} {:<14} k={} r={:<6} {}", c.left, c.right, c.k, r, if c.holds() { "pass" } else { "FAIL" });
    }
    println!("{}", if report.passed() { "ALL PASS" } else { "FAILURES FOUND" });
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("groupwl: cannot set up {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    match run_command(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("groupwl: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
