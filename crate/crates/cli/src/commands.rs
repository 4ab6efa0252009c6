//! The encrypt/decrypt/sbox/bench commands. Block data travels as hex on
//! the command line or as raw bytes through files; keys are always hex.

use std::fmt::Write as _;
use std::path::Path;

use prcrypt_core::aes::{apply_blocks, key_expansion, tables, CipherVariant};
use prcrypt_core::fabric::{Direction, Fabric, FabricConfig, FabricEvent, JobRequest};
use prcrypt_core::perf::{
    build_report, cycles_per_block, DeviceProfile, PerfReport, ReferenceConstants, SimMeasurement,
    EMBEDDED_CONSTANTS,
};

use crate::CliError;

pub fn parse_hex(label: &str, s: &str) -> Result<Vec<u8>, CliError> {
    hex::decode(s).map_err(|e| CliError::Input(format!("{label} is not valid hex: {e}")))
}

pub fn parse_key(key_hex: &str, key_bits: u16) -> Result<(CipherVariant, Vec<u8>), CliError> {
    let variant =
        CipherVariant::from_key_bits(key_bits).map_err(|e| CliError::Input(e.to_string()))?;
    let key = parse_hex("key", key_hex)?;
    if key.len() != variant.key_len() {
        return Err(CliError::Input(format!(
            "key is {} bytes but {variant} needs {}",
            key.len(),
            variant.key_len()
        )));
    }
    Ok((variant, key))
}

pub fn split_blocks(data: &[u8]) -> Result<Vec<[u8; 16]>, CliError> {
    if !data.len().is_multiple_of(16) {
        return Err(CliError::Input(format!(
            "data length {} is not a multiple of the 16-byte block size",
            data.len()
        )));
    }
    Ok(data
        .chunks_exact(16)
        .map(|c| <[u8; 16]>::try_from(c).unwrap())
        .collect())
}

/// Block-by-block encryption or decryption of `data` (codebook mode, no
/// padding: the length must already be block-aligned).
pub fn run_cipher(
    key_hex: &str,
    key_bits: u16,
    data: &[u8],
    decrypt: bool,
) -> Result<Vec<u8>, CliError> {
    let (variant, key) = parse_key(key_hex, key_bits)?;
    let blocks = split_blocks(data)?;
    let ks = key_expansion(&key, variant).expect("length checked above");
    Ok(apply_blocks(&blocks, &ks, decrypt).concat())
}

/// 16x16 hex dump of the derived S-box (or its inverse).
pub fn sbox_dump(inverse: bool) -> String {
    let t = tables();
    let table = if inverse { &t.inverse } else { &t.forward };
    let mut out = String::new();
    for row in table.chunks_exact(16) {
        let cells: Vec<String> = row.iter().map(|b| format!("{b:02x}")).collect();
        let _ = writeln!(out, "{}", cells.join(" "));
    }
    out
}

/// Runs one swap-free 100-block job per variant and reports the occupied
/// region cycles, for the simulated-throughput column of the report.
pub fn simulated_measurements() -> Vec<SimMeasurement> {
    CipherVariant::ALL
        .iter()
        .map(|&variant| {
            let mut fabric = Fabric::new(FabricConfig::default());
            fabric
                .load_full_configuration(variant)
                .expect("default catalog covers every variant");
            fabric
                .submit_job(JobRequest {
                    variant,
                    key: vec![0; variant.key_len()],
                    blocks: vec![[0; 16]; 100],
                    direction: Direction::Encrypt,
                })
                .expect("well-formed job");
            let events = fabric.step(100 * cycles_per_block(variant));
            let done = events
                .iter()
                .find_map(|e| match e {
                    FabricEvent::JobDone(c) => Some(c),
                    _ => None,
                })
                .expect("swap-free job finishes on schedule");
            SimMeasurement {
                variant,
                blocks: 100,
                region_cycles: done.completed_at - done.started_at,
            }
        })
        .collect()
}

/// Builds the performance report from a constants file (the embedded copy
/// when `constants_path` is None).
pub fn bench_report(constants_path: Option<&Path>) -> Result<PerfReport, CliError> {
    let text = match constants_path {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?,
        None => EMBEDDED_CONSTANTS.to_string(),
    };
    let pc = ReferenceConstants::parse(&text).map_err(|e| CliError::Input(e.to_string()))?;
    let profiles: Vec<DeviceProfile> = pc
        .timing_devices()
        .iter()
        .map(|name| DeviceProfile::from_constants(&pc, name))
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Input(e.to_string()))?;
    if profiles.iter().all(|p| p.per_variant.is_empty()) {
        return Err(CliError::Input(
            "constants file contains no usable timing rows".into(),
        ));
    }
    build_report(&simulated_measurements(), &profiles).map_err(|e| CliError::Input(e.to_string()))
}

pub fn render_bench(report: &PerfReport, machine: bool) -> String {
    if machine {
        let mut s = serde_json::to_string_pretty(report).expect("report serializes");
        s.push('\n');
        s
    } else {
        report.render_text()
    }
}
