use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use imcsim::sequencer::Opcode;
use imcsim_cli::asm::{assemble, disassemble};
use imcsim_cli::commands::{
    self, cmd_bench, cmd_check, cmd_check_random, cmd_energy, cmd_run, cmd_tops, CliError, RunPaths,
};

/// Simulator and analytical model of a bit-parallel SRAM in-memory-computing macro.
#[derive(Parser)]
#[command(name = "imcsim", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct CommonOpts {
    /// Key-value model config overriding geometry and parameter tables.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Word precision override (2, 4 or 8 bits).
    #[arg(long, value_parser = ["2", "4", "8"])]
    prec: Option<String>,
}

impl CommonOpts {
    fn precision(&self) -> Option<usize> {
        self.prec.as_deref().map(|p| p.parse().expect("validated by clap"))
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Assemble a program and print (or write) its canonical form.
    Asm {
        program: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
        /// Write the canonical form here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a program: writes the cycle trace, final memory image and energy summary.
    Run {
        program: PathBuf,
        /// Initial memory image (`bank:region:row <bits>` lines).
        #[arg(long)]
        image: Option<PathBuf>,
        #[command(flatten)]
        common: CommonOpts,
        /// Supply voltage for the timing summary.
        #[arg(long)]
        vdd: Option<f64>,
        /// Cycle trace output (JSON lines).
        #[arg(long, default_value = "trace.jsonl")]
        trace_out: PathBuf,
        /// Final memory image output.
        #[arg(long, default_value = "image.out.txt")]
        image_out: PathBuf,
        /// Energy summary CSV output.
        #[arg(long, default_value = "energy_summary.csv")]
        energy_out: PathBuf,
    },
    /// Cross-check a program (or random programs) against the word-level reference.
    Check {
        /// Program to check; omit when using --random.
        program: Option<PathBuf>,
        #[arg(long)]
        image: Option<PathBuf>,
        #[command(flatten)]
        common: CommonOpts,
        /// Check this many seeded random programs instead of a file.
        #[arg(long)]
        random: Option<usize>,
        /// Seed for the random corpus.
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Sweep the bit-serial baseline comparison grid into a CSV.
    Bench {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long, default_value = "sweep.csv")]
        out: PathBuf,
        /// Operations scheduled per sweep point.
        #[arg(long)]
        op_count: Option<u64>,
    },
    /// Dump the energy table, one lookup, or a TOPS/W report.
    Energy {
        #[command(flatten)]
        common: CommonOpts,
        /// Write the full table CSV here (stdout when omitted and no --op).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Look up a single op instead of dumping the table.
        #[arg(long)]
        op: Option<String>,
        /// Separator column for the lookup: with | without.
        #[arg(long, default_value = "with")]
        sep: String,
        /// Print a TOPS/W report for --op at --vdd.
        #[arg(long)]
        tops: bool,
        #[arg(long, default_value_t = 0.6)]
        vdd: f64,
        /// Active lanes for the TOPS/W report (default: whole macro).
        #[arg(long)]
        lanes: Option<u64>,
    },
}

fn main() -> ExitCode {
    match real_main() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn real_main() -> Result<(), CliError> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Asm { program, common, out } => {
            let model = commands::load_model(common.config.as_deref())?;
            let text = std::fs::read_to_string(&program)
                .map_err(|source| CliError::Io { path: program.clone(), source })?;
            let parsed = assemble(&text, &model.macro_cfg)?;
            let canonical = disassemble(&parsed);
            match out {
                Some(path) => commands::write_atomic(&path, &canonical)?,
                None => print!("{canonical}"),
            }
            Ok(())
        }
        Cmd::Run { program, image, common, vdd, trace_out, image_out, energy_out } => {
            let paths = RunPaths { trace_out, image_out, energy_out };
            let summary = cmd_run(
                &program,
                image.as_deref(),
                common.config.as_deref(),
                common.precision(),
                vdd,
                &paths,
            )?;
            print!("{}", summary.render());
            Ok(())
        }
        Cmd::Check { program, image, common, random, seed } => match (program, random) {
            (Some(_), Some(_)) => {
                Err(CliError::Usage("pass either a program file or --random, not both".into()))
            }
            (None, Some(count)) => {
                let (checked, failure) =
                    cmd_check_random(count, seed, common.precision(), common.config.as_deref())?;
                match failure {
                    None => {
                        println!("PASS: {checked} random programs (seed {seed}) match the reference");
                        Ok(())
                    }
                    Some(report) => {
                        print!("random program {checked}: {}", report.render());
                        Err(CliError::Usage("reference mismatch".into()))
                    }
                }
            }
            (Some(path), None) => {
                let report = cmd_check(
                    &path,
                    image.as_deref(),
                    common.config.as_deref(),
                    common.precision(),
                )?;
                print!("{}", report.render());
                if report.passed() {
                    Ok(())
                } else {
                    Err(CliError::Usage("reference mismatch".into()))
                }
            }
            (None, None) => Err(CliError::Usage("check needs a program file or --random <count>".into())),
        },
        Cmd::Bench { common, out, op_count } => {
            let summary = cmd_bench(common.config.as_deref(), &out, op_count)?;
            print!("{}", summary.render());
            Ok(())
        }
        Cmd::Energy { common, out, op, sep, tops, vdd, lanes } => {
            let lookup = match op {
                Some(name) => {
                    let opcode = Opcode::from_mnemonic(&name)
                        .ok_or_else(|| CliError::Usage(format!("unknown op `{name}`")))?;
                    Some(opcode)
                }
                None => None,
            };
            let separator = match sep.as_str() {
                "with" => true,
                "without" => false,
                other => return Err(CliError::Usage(format!("--sep takes with|without, got `{other}`"))),
            };
            let precision = common.precision().unwrap_or(8);
            let text = match (lookup, tops) {
                (Some(opcode), true) => {
                    cmd_tops(common.config.as_deref(), opcode, precision, vdd, lanes, separator)?
                }
                (Some(opcode), false) => {
                    cmd_energy(common.config.as_deref(), None, Some((opcode, precision, separator)))?
                }
                (None, true) => return Err(CliError::Usage("--tops needs --op".into())),
                (None, false) => cmd_energy(common.config.as_deref(), out.as_deref(), None)?,
            };
            print!("{text}");
            Ok(())
        }
    }
}
