use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qnet::freecat::{default_budget, hom_enumerate, hom_nonempty_group, reachable};
use qnet::net::{coproduct, product, validate_net};
use qnet::suites::{run_suite, Suite, SuiteReport};
use qnet::symmetry::{linearization_sum, linearizations};
use qnet::{Error, FreeElem, QNet, TheoryArrow};
use serde_json::{json, Value};

/// Petri nets over algebraic theories.
#[derive(Parser)]
#[command(name = "qnet", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a net's invariants; exits 0 iff it is valid.
    Validate { net: PathBuf },
    /// Translate a net along a theory arrow.
    Translate {
        #[arg(long)]
        via: TheoryArrow,
        net: PathBuf,
    },
    /// Markings reachable in at most N parallel steps.
    Reach {
        net: PathBuf,
        #[arg(long)]
        marking: String,
        #[arg(long)]
        steps: usize,
        /// Emit Graphviz DOT instead of JSON.
        #[arg(long)]
        dot: bool,
    },
    /// Class representatives of a bounded hom-set of the free category.
    Homset {
        net: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        layers: usize,
        #[arg(long)]
        width: usize,
    },
    /// Whether a hom-set of a ℤ-net is nonempty.
    Homgroup {
        net: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// All linearizations of a Petri net or ℤ-net.
    Lin { net: PathBuf },
    /// The sum of all linearizations of a Petri net.
    Linsum { net: PathBuf },
    /// Binary product with its projections.
    Product { a: PathBuf, b: PathBuf },
    /// Binary coproduct with its injections.
    Coproduct { a: PathBuf, b: PathBuf },
    /// Run the randomized property suites; exits 0 iff all pass.
    Check {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Monad,
    #[value(name = "monad-morphism")]
    MonadMorphism,
    Netfunctor,
    #[value(name = "adjA")]
    AdjA,
    #[value(name = "adjB")]
    AdjB,
    Freecat,
    Symmetry,
    All,
}

impl SuiteArg {
    fn suites(self) -> Vec<Suite> {
        match self {
            SuiteArg::Monad => vec![Suite::Monad],
            SuiteArg::MonadMorphism => vec![Suite::MonadMorphism],
            SuiteArg::Netfunctor => vec![Suite::NetFunctor],
            SuiteArg::AdjA => vec![Suite::AdjA],
            SuiteArg::AdjB => vec![Suite::AdjB],
            SuiteArg::Freecat => vec![Suite::FreeCat],
            SuiteArg::Symmetry => vec![Suite::Symmetry],
            SuiteArg::All => Suite::ALL.to_vec(),
        }
    }
}

enum Failure {
    Domain(Error),
    /// Output already written; exit 1 without an error object.
    Rejected(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

fn read_json(path: &Path) -> Result<Value, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Json(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

fn read_net(path: &Path) -> Result<QNet, Error> {
    QNet::from_json(&read_json(path)?)
}

/// An element given inline as JSON, or as the path of a JSON file.
fn read_elem(net: &QNet, arg: &str) -> Result<FreeElem, Error> {
    let v = match serde_json::from_str(arg) {
        Ok(v) => v,
        Err(_) => read_json(Path::new(arg))?,
    };
    FreeElem::from_json(net.theory, &v)
}

fn print(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("values serialize"));
}

fn report_json(r: &SuiteReport) -> Value {
    json!({"name": r.name, "cases": r.cases, "passed": r.passed(), "failures": r.failures})
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Validate { net } => {
            let net = read_net(&net)?;
            let diags = validate_net(&net);
            let list: Vec<Value> = diags.iter().map(|d| json!({"subject": d.subject, "message": d.message})).collect();
            let out = json!({"valid": diags.is_empty(), "diagnostics": list});
            print(&out);
            if !diags.is_empty() {
                return Err(Failure::Domain(Error::InvalidNet(diags)));
            }
        }
        Command::Translate { via, net } => {
            let net = read_net(&net)?.checked()?;
            print(&qnet::net::apply_net_functor(via, &net)?.to_json());
        }
        Command::Reach { net, marking, steps, dot } => {
            let net = read_net(&net)?.checked()?;
            let m = read_elem(&net, &marking)?;
            let r = reachable(&net, &m, steps)?;
            if dot {
                print!("{}", r.to_dot());
            } else {
                let markings: Vec<Value> = r.markings.iter().map(FreeElem::to_json).collect();
                print(&json!({"markings": markings}));
            }
        }
        Command::Homset { net, from, to, layers, width } => {
            let net = read_net(&net)?.checked()?;
            let (x, y) = (read_elem(&net, &from)?, read_elem(&net, &to)?);
            let reps = hom_enumerate(&net, &x, &y, layers, width, default_budget())?;
            print(&json!({"representatives": reps.iter().map(|t| t.to_json()).collect::<Vec<_>>()}));
        }
        Command::Homgroup { net, from, to } => {
            let net = read_net(&net)?.checked()?;
            let (x, y) = (read_elem(&net, &from)?, read_elem(&net, &to)?);
            print(&json!({"nonempty": hom_nonempty_group(&net, &x, &y)?}));
        }
        Command::Lin { net } => {
            let net = read_net(&net)?.checked()?;
            let lins: Vec<Value> = linearizations(&net)?.iter().map(QNet::to_json).collect();
            print(&json!({"linearizations": lins}));
        }
        Command::Linsum { net } => {
            let net = read_net(&net)?.checked()?;
            print(&linearization_sum(&net)?.to_json());
        }
        Command::Product { a, b } => {
            let (a, b) = (read_net(&a)?.checked()?, read_net(&b)?.checked()?);
            let (n, p1, p2) = product(&a, &b)?;
            print(&json!({"net": n.to_json(), "projections": [p1.to_json(), p2.to_json()]}));
        }
        Command::Coproduct { a, b } => {
            let (a, b) = (read_net(&a)?.checked()?, read_net(&b)?.checked()?);
            let (n, i1, i2) = coproduct(&a, &b)?;
            print(&json!({"net": n.to_json(), "injections": [i1.to_json(), i2.to_json()]}));
        }
        Command::Check { suite, seed, cases } => {
            let reports: Vec<SuiteReport> = suite.suites().into_iter().map(|s| run_suite(s, seed, cases)).collect();
            let passed = reports.iter().all(SuiteReport::passed);
            let out = json!({"seed": seed, "passed": passed, "suites": reports.iter().map(report_json).collect::<Vec<_>>()});
            if !passed {
                return Err(Failure::Rejected(out));
            }
            print(&out);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Rejected(out)) => {
            print(&out);
            ExitCode::from(1)
        }
        Err(Failure::Domain(e)) => {
            let mut err = json!({"error": e.to_string()});
            if let Error::InvalidNet(d) | Error::InvalidMorphism(d) = &e {
                err["diagnostics"] = d.iter().map(|d| json!({"subject": d.subject, "message": d.message})).collect();
            }
            eprintln!("{err}");
            ExitCode::from(1)
        }
    }
}
