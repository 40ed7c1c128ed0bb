use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use flagcoh::render::{self, Document, Format};
use flagcoh::{Error, GroupSpec};

/// Exact cohomology of compact Lie groups and their central quotients.
///
/// Set FLAGCOH_MAX_DIM to raise or lower the per-degree column budget
/// (default 400000); computations past it fail with kind=dimension-budget.
#[derive(Parser, Debug)]
#[command(name = "flagcoh", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format: text, json or latex.
    #[arg(long, global = true, default_value = "text", value_parser = parse_format)]
    format: Format,

    /// Write to this file instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GroupArgs {
    /// SU, PSU, Sp, PSp, E6, PE6, E7 or PE7.
    #[arg(long)]
    group: String,
    /// Rank parameter for SU/Sp; ignored for E6/E7.
    #[arg(long)]
    n: Option<u32>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cartan matrix and basic group data.
    Cartan(GroupArgs),
    /// Borel transgression images τ(tᵢ).
    Transgression {
        #[command(flatten)]
        g: GroupArgs,
        /// Include the circle generator t₀ (adjoint forms only).
        #[arg(long)]
        circle: bool,
    },
    /// Schubert presentation of H*(G/T).
    Flag(GroupArgs),
    /// E₃^{*,0}: the quotient of H*(G/T) by the transgression ideal.
    #[command(name = "e3-base")]
    E3Base {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long, default_value_t = 20)]
        max_degree: u32,
        #[arg(long)]
        prime: Option<u32>,
    },
    /// Koszul homology of H*(G/T) ⊗ Λ(t) under d₂.
    Koszul {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long, default_value_t = 12)]
        max_degree: u32,
        #[arg(long)]
        prime: Option<u32>,
    },
    /// Characteristic polynomials (integral, or mod p with --prime).
    Charpolys {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long)]
        prime: Option<u32>,
    },
    /// H*(PG; F_p).
    Modp {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long)]
        prime: u32,
    },
    /// H*(PG; Z).
    Integral(GroupArgs),
    /// Bockstein β_p on ι and the odd generators.
    Bockstein {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long)]
        prime: u32,
    },
    /// Steenrod squares on the odd generators mod 2.
    Steenrod {
        #[command(flatten)]
        g: GroupArgs,
        /// Fixed Sq^k; default Sq^{2s−2} on ζ_{2s−1}.
        #[arg(long)]
        k: Option<u32>,
    },
    /// θ(γ_I) for n = p^r.
    Theta {
        #[arg(long)]
        n: u64,
        /// Comma-separated members of I ⊆ {1, p, …, p^r}.
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<u64>,
    },
    /// b_{n,k}, a_{n,k} and p-adic valuations of C(n,s).
    Binomial {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Acceptance battery; exit 0 iff every check passes.
    Verify {
        /// Run a single check by number.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=9))]
        check: Option<u32>,
    },
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn spec(g: &GroupArgs) -> Result<GroupSpec, Error> {
    render::group(&g.group, g.n)
}

fn run(cmd: &Command) -> Result<(Document, bool), Error> {
    let doc = match cmd {
        Command::Cartan(g) => render::cartan(&spec(g)?),
        Command::Transgression { g, circle } => render::transgression_doc(&spec(g)?, *circle)?,
        Command::Flag(g) => render::flag_doc(&spec(g)?)?,
        Command::E3Base { g, max_degree, prime } => render::e3_base(&spec(g)?, *max_degree, *prime)?,
        Command::Koszul { g, max_degree, prime } => render::koszul(&spec(g)?, *max_degree, *prime)?,
        Command::Charpolys { g, prime } => render::charpolys(&spec(g)?, *prime)?,
        Command::Modp { g, prime } => render::modp(&spec(g)?, *prime)?,
        Command::Integral(g) => render::integral(&spec(g)?)?,
        Command::Bockstein { g, prime } => render::bockstein(&spec(g)?, *prime)?,
        Command::Steenrod { g, k } => render::steenrod(&spec(g)?, *k)?,
        Command::Theta { n, set } => render::theta(*n, set)?,
        Command::Binomial { n, prime } => render::binomial_doc(*n, *prime)?,
        Command::Verify { check } => return render::verify_doc(*check),
    };
    Ok((doc, true))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let (doc, ok) = match run(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            println!("{}", render::error_line(&e));
            return ExitCode::from(1);
        }
    };
    let bytes = doc.render(cli.format);
    let written = match &cli.output {
        Some(path) => std::fs::write(path, bytes.as_bytes()),
        None => std::io::stdout().lock().write_all(bytes.as_bytes()),
    };
    if let Err(e) = written {
        println!("error kind=io msg={e}");
        return ExitCode::from(1);
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
