use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use prcrypt_cli::commands::{bench_report, parse_hex, render_bench, run_cipher, sbox_dump};
use prcrypt_cli::scenario::{parse_scenario, run_scenario, SimulatorOptions};
use prcrypt_cli::CliError;
use prcrypt_core::aes::CipherVariant;

/// AES coprocessor toolkit: block encryption, S-box inspection, partial-
/// reconfiguration scenarios and performance reports.
///
/// Exit codes: 0 success, 2 usage error, 3 malformed input, 4 failed
/// scenario expectation, 5 I/O failure.
#[derive(Parser)]
#[command(name = "prcrypt", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CipherArgs {
    /// Cipher key as hex.
    #[arg(long)]
    key: String,
    /// Key size in bits: 128, 192 or 256. Must match the key length.
    #[arg(long)]
    key_bits: u16,
    /// Payload as hex (small inputs).
    #[arg(long, conflicts_with = "input")]
    data: Option<String>,
    /// Read the payload from a file instead.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Write raw output bytes here; hex goes to stdout otherwise.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Encrypt block-aligned data (no padding, block-by-block codebook).
    Encrypt(CipherArgs),
    /// Decrypt block-aligned data.
    Decrypt(CipherArgs),
    /// Print the derived 16x16 S-box table.
    Sbox {
        /// Print the inverse table instead.
        #[arg(long)]
        inverse: bool,
    },
    /// Run a reconfiguration scenario file and print the event log.
    Simulate {
        scenario: PathBuf,
        /// Swap cost per bitstream unit (0 = instant swaps).
        #[arg(long, default_value_t = 1)]
        cycles_per_unit: u64,
        /// Variant loaded at reset; the slot starts empty otherwise.
        #[arg(long)]
        initial: Option<u16>,
    },
    /// Print the performance model against the published reference numbers.
    Bench {
        /// Alternate reference-constants file.
        #[arg(long)]
        constants: Option<PathBuf>,
        /// Emit JSON instead of the text table.
        #[arg(long)]
        machine: bool,
    },
}

fn cipher_command(args: &CipherArgs, decrypt: bool) -> Result<String, CliError> {
    let data = match (&args.data, &args.input) {
        (Some(hex_data), None) => parse_hex("data", hex_data)?,
        (None, Some(path)) => std::fs::read(path)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?,
        (None, None) => return Err(CliError::Input("give --data or --input".into())),
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };
    let out = run_cipher(&args.key, args.key_bits, &data, decrypt)?;
    match &args.output {
        Some(path) => {
            std::fs::write(path, &out)
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(format!("{}\n", hex::encode(out))),
    }
}

fn run(cli: Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Encrypt(args) => cipher_command(args, false),
        Command::Decrypt(args) => cipher_command(args, true),
        Command::Sbox { inverse } => Ok(sbox_dump(*inverse)),
        Command::Simulate {
            scenario,
            cycles_per_unit,
            initial,
        } => {
            let text = std::fs::read_to_string(scenario)
                .map_err(|e| CliError::Io(format!("cannot read {}: {e}", scenario.display())))?;
            let lines = parse_scenario(&text)?;
            let initial_variant = initial
                .map(|bits| {
                    CipherVariant::from_key_bits(bits).map_err(|e| CliError::Input(e.to_string()))
                })
                .transpose()?;
            let outcome = run_scenario(
                &lines,
                &SimulatorOptions {
                    cycles_per_unit: *cycles_per_unit,
                    initial_variant,
                },
            )?;
            if outcome.failures.is_empty() {
                Ok(outcome.log)
            } else {
                // The log still goes to stdout; the failures decide the exit.
                print!("{}", outcome.log);
                Err(CliError::ExpectFailed(outcome.failures))
            }
        }
        Command::Bench { constants, machine } => {
            let report = bench_report(constants.as_deref())?;
            Ok(render_bench(&report, *machine))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(output) => {
            print!("{output}");
            let _ = std::io::stdout().flush();
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprint!("{e}");
            eprintln!();
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
