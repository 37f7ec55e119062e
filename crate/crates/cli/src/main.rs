//! Command-line front end. Exit status: 0 for success or a true answer,
//! 1 for a false answer or an invalid input, 2 for usage and parse errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bignet::bigraph::{compose_bigraphs, eq_bigraphs, Bigraph};
use bignet::format::{
    bigraph_dot, net_dot, parse_bigraph, parse_net, parse_signature, serialize_bigraph, serialize_net, FormatError,
};
use bignet::net::{
    compose_nets, eq_nets, expand, is_correct_fast, is_correct_oracle, normalize, Execution, GenericNet, SwitchGraph,
    DEFAULT_SWITCHING_CAP,
};
use bignet::theory::{BigSignature, TheoryTK};
use bignet::translate::{closed_cod, closed_dom, from_closed_net, t_mor, try_extract};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "bignet", version, about = "Binding bigraphs as proof nets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Sig {
    /// Signature file; without it only structural cells are known.
    #[arg(long, global = true)]
    sig: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a net and decide correctness.
    CheckNet {
        net: PathBuf,
        /// Enumerate every switching instead of contracting.
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        sig: Sig,
    },
    /// Parse and validate a bigraph.
    CheckBigraph {
        bigraph: PathBuf,
        #[command(flatten)]
        sig: Sig,
    },
    /// Print the net of a bigraph.
    Translate {
        bigraph: PathBuf,
        #[command(flatten)]
        sig: Sig,
    },
    /// Print the bigraph a correct net comes from.
    Extract {
        net: PathBuf,
        #[command(flatten)]
        sig: Sig,
    },
    /// Print OUTER ∘ INNER.
    ComposeNets {
        outer: PathBuf,
        inner: PathBuf,
        #[command(flatten)]
        sig: Sig,
    },
    /// Print OUTER ∘ INNER.
    ComposeBigraphs {
        outer: PathBuf,
        inner: PathBuf,
        #[command(flatten)]
        sig: Sig,
    },
    /// Compare two nets; prints the deciding method.
    EqNets {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        sig: Sig,
    },
    /// Compare two bigraphs up to lean-support equivalence.
    EqBigraphs {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        sig: Sig,
    },
    /// Count or list the switchings of a net.
    Switchings {
        net: PathBuf,
        #[arg(long, conflicts_with = "enumerate")]
        count: bool,
        /// One line per switching, up to the cap.
        #[arg(long)]
        enumerate: bool,
        #[arg(long, default_value_t = DEFAULT_SWITCHING_CAP)]
        cap: u64,
        #[command(flatten)]
        sig: Sig,
    },
    /// Graphviz rendering of a net or bigraph document.
    Dot {
        file: PathBuf,
        #[command(flatten)]
        sig: Sig,
    },
}

enum Failure {
    /// A well-formed question with a negative answer, or an invalid input.
    No(String),
    Usage(String),
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        if e.is_parse_error() {
            Failure::Usage(e.to_string())
        } else {
            Failure::No(e.to_string())
        }
    }
}

fn no(e: impl std::fmt::Display) -> Failure {
    Failure::No(e.to_string())
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn context(path: &Path) -> impl Fn(Failure) -> Failure + '_ {
    move |f| match f {
        Failure::No(m) => Failure::No(format!("{}: {m}", path.display())),
        Failure::Usage(m) => Failure::Usage(format!("{}: {m}", path.display())),
    }
}

impl Sig {
    fn load(&self) -> Result<BigSignature, Failure> {
        match &self.sig {
            None => Ok(BigSignature::default()),
            Some(p) => parse_signature(&read(p)?).map_err(Failure::from).map_err(context(p)),
        }
    }

    fn theory(&self) -> Result<TheoryTK, Failure> {
        TheoryTK::derive(&self.load()?).map_err(|e| Failure::Usage(e.to_string()))
    }

    fn net(&self, path: &Path) -> Result<GenericNet, Failure> {
        parse_net(&read(path)?, &self.theory()?).map_err(Failure::from).map_err(context(path))
    }

    fn bigraph(&self, path: &Path) -> Result<Bigraph, Failure> {
        parse_bigraph(&read(path)?, &self.load()?).map_err(Failure::from).map_err(context(path))
    }
}

fn verdict(yes: bool, what: &str) -> Outcome {
    if yes {
        println!("{what}");
        Ok(())
    } else {
        println!("not {what}");
        Err(Failure::No(String::new()))
    }
}

fn extract(net: &GenericNet) -> Result<Bigraph, Failure> {
    let m = normalize(net).map_err(no)?;
    if m.dom == closed_dom() && m.cod == closed_cod() {
        return from_closed_net(&m).map_err(no);
    }
    if !is_correct_fast(net).map_err(no)? {
        return Err(Failure::No("net is not correct".into()));
    }
    try_extract(&m).map_err(no)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::CheckNet { net, oracle, sig } => {
            let n = sig.net(&net)?;
            let ok = if oracle { is_correct_oracle(&n, DEFAULT_SWITCHING_CAP, Execution::default()) } else { is_correct_fast(&n) };
            verdict(ok.map_err(no)?, "correct")
        }
        Command::CheckBigraph { bigraph, sig } => {
            sig.bigraph(&bigraph)?;
            println!("valid");
            Ok(())
        }
        Command::Translate { bigraph, sig } => {
            let g = sig.bigraph(&bigraph)?;
            let net = expand(&t_mor(&g).map_err(no)?).map_err(no)?;
            print!("{}", serialize_net(&net));
            Ok(())
        }
        Command::Extract { net, sig } => {
            let g = extract(&sig.net(&net)?)?;
            print!("{}", serialize_bigraph(&g));
            Ok(())
        }
        Command::ComposeNets { outer, inner, sig } => {
            let net = compose_nets(&sig.net(&outer)?, &sig.net(&inner)?).map_err(no)?;
            print!("{}", serialize_net(&net));
            Ok(())
        }
        Command::ComposeBigraphs { outer, inner, sig } => {
            let g = compose_bigraphs(&sig.bigraph(&outer)?, &sig.bigraph(&inner)?).map_err(no)?;
            print!("{}", serialize_bigraph(&g));
            Ok(())
        }
        Command::EqNets { a, b, sig } => {
            let out = eq_nets(&sig.net(&a)?, &sig.net(&b)?).map_err(no)?;
            verdict(out.equal, &format!("equal ({})", out.method))
        }
        Command::EqBigraphs { a, b, sig } => {
            verdict(eq_bigraphs(&sig.bigraph(&a)?, &sig.bigraph(&b)?).map_err(no)?, "equal (canonical)")
        }
        Command::Switchings { net, enumerate, cap, sig, .. } => {
            let n = sig.net(&net)?;
            n.validate_shape().map_err(no)?;
            let graph = SwitchGraph::from_net(&n).map_err(no)?;
            let total = graph.switching_count().map_err(no)?;
            if !enumerate {
                println!("{total}");
                return Ok(());
            }
            for i in 0..total.min(cap) {
                let r = graph.report(i);
                println!("{i} connected={} acyclic={} vertices={} edges={}", r.connected, r.acyclic, r.vertices, r.edges);
            }
            if total > cap {
                return Err(Failure::No(format!("stopped at the cap of {cap} out of {total} switchings")));
            }
            Ok(())
        }
        Command::Dot { file, sig } => {
            let text = read(&file)?;
            let doc: serde_json::Value = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?;
            if doc.get("prnt").is_some() {
                print!("{}", bigraph_dot(&sig.bigraph(&file)?));
            } else {
                print!("{}", net_dot(&sig.net(&file)?));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::No(m)) => {
            if !m.is_empty() {
                eprintln!("{m}");
            }
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
