use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dkinterp_cli::{
    cmd_countermodel, cmd_interpolate, cmd_prove, cmd_selftest, CommandOutput, InterpolateMode,
    InterpolateRequest, RandomCorpusSpec, SessionConfig,
};

#[derive(Parser)]
#[command(
    name = "dkinterp",
    about = "Decision procedures, uniform interpolants, and countermodels \
             for multi-agent epistemic logics with distributed knowledge",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SessionArgs {
    /// Logic: k, kd, or kt.
    #[arg(long, default_value = "k")]
    logic: String,
    /// Agent universe, comma-separated.
    #[arg(long, value_delimiter = ',', default_value = "a,b")]
    agents: Vec<String>,
    /// Search budget in expanded nodes; DKINTERP_BUDGET overrides the default.
    #[arg(long)]
    budget: Option<u64>,
    /// Output format: text, json, latex, or dot.
    #[arg(long, default_value = "text")]
    format: String,
    /// Random seed for seeded subcommands.
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

impl SessionArgs {
    fn build(&self) -> Result<SessionConfig, CommandOutput> {
        SessionConfig::new(&self.logic, &self.agents, self.budget, &self.format, self.seed)
            .map_err(|e| CommandOutput {
                exit: 2,
                stdout: String::new(),
                stderr: format!("{e}\n"),
            })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    A,
    Pre,
    Post,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a sequent and print the proof or the critical dead ends.
    Prove {
        #[command(flatten)]
        session: SessionArgs,
        /// Sequent, e.g. "D{a}p, q => D{a}(p & q)".
        input: String,
    },
    /// Eliminate propositional variables and agent symbols.
    Interpolate {
        #[command(flatten)]
        session: SessionArgs,
        /// a: eliminate one (--var, --agent) pair from a sequent.
        /// pre/post: weakest antecedent or strongest consequence of a formula
        /// over --vars and --agents-elim.
        #[arg(long, value_enum, default_value = "a")]
        mode: ModeArg,
        /// Variable to eliminate (mode a).
        #[arg(long)]
        var: Option<String>,
        /// Agent to eliminate (mode a).
        #[arg(long)]
        agent: Option<String>,
        /// Variables to eliminate (modes pre/post), comma-separated.
        #[arg(long, value_delimiter = ',')]
        vars: Vec<String>,
        /// Agents to eliminate (modes pre/post), comma-separated.
        #[arg(long = "agents-elim", value_delimiter = ',')]
        agents_elim: Vec<String>,
        /// Re-check the result against the defining conditions.
        #[arg(long)]
        verify: bool,
        /// Sequent (mode a) or formula (modes pre/post).
        input: String,
    },
    /// Build a finite countermodel for an underivable sequent.
    Countermodel {
        #[command(flatten)]
        session: SessionArgs,
        /// Sequent to refute.
        input: String,
    },
    /// Run the seeded self-test suites and print a JSON report.
    Selftest {
        #[command(flatten)]
        session: SessionArgs,
        /// Probe count driving each random suite.
        #[arg(long, default_value_t = 60)]
        count: u64,
        /// Weight cap for generated formulas.
        #[arg(long = "max-weight", default_value_t = 8)]
        max_weight: u64,
        /// Number of propositional variables drawn from.
        #[arg(long = "var-pool", default_value_t = 3)]
        var_pool: usize,
    },
}

fn run(cli: Cli) -> CommandOutput {
    match cli.command {
        Command::Prove { session, input } => match session.build() {
            Err(out) => out,
            Ok(cfg) => cmd_prove(&cfg, &input),
        },
        Command::Interpolate { session, mode, var, agent, vars, agents_elim, verify, input } => {
            match session.build() {
                Err(out) => out,
                Ok(cfg) => {
                    let request = InterpolateRequest {
                        mode: match mode {
                            ModeArg::A => InterpolateMode::A,
                            ModeArg::Pre => InterpolateMode::Pre,
                            ModeArg::Post => InterpolateMode::Post,
                        },
                        var,
                        agent,
                        vars,
                        agents_elim,
                        verify,
                    };
                    cmd_interpolate(&cfg, &request, &input)
                }
            }
        }
        Command::Countermodel { session, input } => match session.build() {
            Err(out) => out,
            Ok(cfg) => cmd_countermodel(&cfg, &input),
        },
        Command::Selftest { session, count, max_weight, var_pool } => match session.build() {
            Err(out) => out,
            Ok(cfg) => {
                let spec = RandomCorpusSpec {
                    formula_count: count,
                    max_weight,
                    var_pool,
                    seed: cfg.seed,
                };
                cmd_selftest(&cfg, &spec)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = run(cli);
    print!("{}", out.stdout);
    let _ = std::io::stdout().flush();
    eprint!("{}", out.stderr);
    ExitCode::from(out.exit as u8)
}
