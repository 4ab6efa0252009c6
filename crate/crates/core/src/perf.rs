//! Analytic performance model: per-variant cycle counts, the throughput
//! formula 128 * f / cycles, throughput-per-slice, and a report comparing
//! computed (and optionally simulated) numbers against the published
//! reference measurements.
//!
//! The reference values live in `data/reference_constants.txt`, one pipe-
//! separated record per value with a confidence flag and the printed row
//! label as a quote anchor. The published throughput numbers do not follow
//! exactly from the printed periods and cycle counts under any single
//! formula, so the report treats them as reference points and prints the
//! per-cell deviation instead of asserting equality.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::aes::CipherVariant;

/// Embedded copy of the reference measurement file.
pub const EMBEDDED_CONSTANTS: &str = include_str!("../data/reference_constants.txt");

/// Cycles one 128-bit block occupies the coprocessor, per variant.
pub fn cycles_per_block(v: CipherVariant) -> u64 {
    match v {
        CipherVariant::Aes128 => 250,
        CipherVariant::Aes192 => 300,
        CipherVariant::Aes256 => 350,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PerfError {
    #[error("constants line {line}: {msg}")]
    Constants { line: usize, msg: String },
    #[error("device {0} has no entry for {1}")]
    MissingVariant(String, CipherVariant),
    #[error("device {device} has a non-positive frequency for {variant}")]
    InvalidFrequency {
        device: String,
        variant: CipherVariant,
    },
    #[error("device {device} has no usable slice count for {variant}")]
    MissingSlices {
        device: String,
        variant: CipherVariant,
    },
}

/// One record of the constants file.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantRow {
    pub table: u8,
    /// None for system-level rows (variant column "-").
    pub variant: Option<CipherVariant>,
    pub device: String,
    pub metric: String,
    pub value: f64,
    pub low_confidence: bool,
    pub anchor: String,
}

/// Parsed reference measurements.
#[derive(Debug, Clone, Default)]
pub struct ReferenceConstants {
    rows: Vec<ConstantRow>,
}

impl ReferenceConstants {
    /// Parses the pipe-separated format; `#` starts a comment, blank lines
    /// are skipped, anything else must be a well-formed 7-field record.
    pub fn parse(text: &str) -> Result<Self, PerfError> {
        let mut rows = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = trimmed.split('|').map(str::trim).collect();
            if fields.len() != 7 {
                return Err(PerfError::Constants {
                    line,
                    msg: format!("expected 7 pipe-separated fields, got {}", fields.len()),
                });
            }
            let table: u8 = fields[0].parse().map_err(|_| PerfError::Constants {
                line,
                msg: format!("bad table number {:?}", fields[0]),
            })?;
            let variant = match fields[1] {
                "-" => None,
                bits => Some(
                    bits.parse::<u16>()
                        .ok()
                        .and_then(|b| CipherVariant::from_key_bits(b).ok())
                        .ok_or_else(|| PerfError::Constants {
                            line,
                            msg: format!("bad variant {:?}", fields[1]),
                        })?,
                ),
            };
            let value: f64 = fields[4].parse().map_err(|_| PerfError::Constants {
                line,
                msg: format!("bad value {:?}", fields[4]),
            })?;
            let low_confidence = match fields[5] {
                "ok" => false,
                "low" => true,
                other => {
                    return Err(PerfError::Constants {
                        line,
                        msg: format!("bad confidence {other:?} (ok|low)"),
                    })
                }
            };
            rows.push(ConstantRow {
                table,
                variant,
                device: fields[2].to_string(),
                metric: fields[3].to_string(),
                value,
                low_confidence,
                anchor: fields[6].to_string(),
            });
        }
        Ok(ReferenceConstants { rows })
    }

    /// The copy shipped with the crate.
    pub fn embedded() -> Self {
        Self::parse(EMBEDDED_CONSTANTS).expect("embedded constants file must parse")
    }

    pub fn rows(&self) -> &[ConstantRow] {
        &self.rows
    }

    pub fn lookup(
        &self,
        table: u8,
        variant: Option<CipherVariant>,
        device: &str,
        metric: &str,
    ) -> Option<&ConstantRow> {
        self.rows.iter().find(|r| {
            r.table == table && r.variant == variant && r.device == device && r.metric == metric
        })
    }

    /// Device names appearing in timing rows, in first-seen order.
    pub fn timing_devices(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for r in self.rows.iter().filter(|r| r.table == 3) {
            if !out.contains(&r.device) {
                out.push(r.device.clone());
            }
        }
        out
    }
}

/// Per-variant figures for one device.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariantMetrics {
    pub min_period_ns: f64,
    pub max_freq_mhz: f64,
    pub slices_used: u32,
    pub reference_throughput_mbps: Option<f64>,
    pub reference_tps_kbps_per_slice: Option<f64>,
    pub low_confidence: bool,
}

/// One FPGA device as the model sees it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviceProfile {
    pub name: String,
    pub per_variant: BTreeMap<CipherVariant, VariantMetrics>,
}

impl DeviceProfile {
    /// Assembles a profile from the constants rows for `device`.
    pub fn from_constants(pc: &ReferenceConstants, device: &str) -> Result<Self, PerfError> {
        let mut per_variant = BTreeMap::new();
        for v in CipherVariant::ALL {
            let period = pc.lookup(3, Some(v), device, "min_period_ns");
            let freq = pc.lookup(3, Some(v), device, "max_freq_mhz");
            let slices = pc.lookup(2, Some(v), device, "slices_used");
            let (Some(period), Some(freq), Some(slices)) = (period, freq, slices) else {
                continue;
            };
            if period.value <= 0.0 || freq.value <= 0.0 {
                return Err(PerfError::InvalidFrequency {
                    device: device.to_string(),
                    variant: v,
                });
            }
            let low_confidence = period.low_confidence || freq.low_confidence;
            per_variant.insert(
                v,
                VariantMetrics {
                    min_period_ns: period.value,
                    max_freq_mhz: freq.value,
                    slices_used: slices.value as u32,
                    reference_throughput_mbps: pc
                        .lookup(3, Some(v), device, "throughput_mbps")
                        .map(|r| r.value),
                    reference_tps_kbps_per_slice: pc
                        .lookup(3, Some(v), device, "tps_kbps_per_slice")
                        .map(|r| r.value),
                    low_confidence,
                },
            );
        }
        Ok(DeviceProfile {
            name: device.to_string(),
            per_variant,
        })
    }

    fn metrics(&self, v: CipherVariant) -> Result<&VariantMetrics, PerfError> {
        self.per_variant
            .get(&v)
            .ok_or_else(|| PerfError::MissingVariant(self.name.clone(), v))
    }
}

/// Mbps for one variant on one device: 128 bits per block times the block
/// rate f / cycles.
pub fn throughput_mbps(v: CipherVariant, d: &DeviceProfile) -> Result<f64, PerfError> {
    let m = d.metrics(v)?;
    if m.max_freq_mhz <= 0.0 {
        return Err(PerfError::InvalidFrequency {
            device: d.name.clone(),
            variant: v,
        });
    }
    Ok(128.0 * m.max_freq_mhz / cycles_per_block(v) as f64)
}

/// Area efficiency: computed throughput in kbps divided by occupied slices.
pub fn tps_kbps_per_slice(v: CipherVariant, d: &DeviceProfile) -> Result<f64, PerfError> {
    let m = d.metrics(v)?;
    if m.slices_used == 0 {
        return Err(PerfError::MissingSlices {
            device: d.name.clone(),
            variant: v,
        });
    }
    Ok(tps_from(throughput_mbps(v, d)?, m.slices_used))
}

/// kbps/slice from an arbitrary throughput; zero throughput yields zero.
pub fn tps_from(throughput_mbps: f64, slices: u32) -> f64 {
    if throughput_mbps == 0.0 {
        return 0.0;
    }
    throughput_mbps * 1000.0 / slices as f64
}

/// A swap-free simulator run to fold into the report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SimMeasurement {
    pub variant: CipherVariant,
    pub blocks: u64,
    pub region_cycles: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerfRow {
    pub variant: u16,
    pub device: String,
    pub cycles_per_block: u64,
    pub max_freq_mhz: f64,
    pub slices_used: u32,
    pub computed_throughput_mbps: f64,
    pub reference_throughput_mbps: Option<f64>,
    /// |computed - reference| / reference, when a reference value exists.
    pub throughput_deviation: Option<f64>,
    pub computed_tps_kbps_per_slice: f64,
    pub reference_tps_kbps_per_slice: Option<f64>,
    pub tps_deviation: Option<f64>,
    /// blocks*128*f/cycles from a simulator run, when one was supplied.
    pub simulated_throughput_mbps: Option<f64>,
    pub low_confidence: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct PerfReport {
    pub rows: Vec<PerfRow>,
}

fn deviation(computed: f64, reference: Option<f64>) -> Option<f64> {
    reference.map(|r| (computed - r).abs() / r)
}

/// One row per (variant, device) found in the profiles; sim measurements are
/// joined by variant when present.
pub fn build_report(
    sim_results: &[SimMeasurement],
    profiles: &[DeviceProfile],
) -> Result<PerfReport, PerfError> {
    let mut rows = Vec::new();
    for d in profiles {
        for (&v, m) in &d.per_variant {
            let computed = throughput_mbps(v, d)?;
            let computed_tps = tps_kbps_per_slice(v, d)?;
            let simulated = sim_results
                .iter()
                .find(|s| s.variant == v)
                .map(|s| (s.blocks * 128) as f64 * m.max_freq_mhz / s.region_cycles as f64);
            rows.push(PerfRow {
                variant: v.key_bits(),
                device: d.name.clone(),
                cycles_per_block: cycles_per_block(v),
                max_freq_mhz: m.max_freq_mhz,
                slices_used: m.slices_used,
                computed_throughput_mbps: computed,
                reference_throughput_mbps: m.reference_throughput_mbps,
                throughput_deviation: deviation(computed, m.reference_throughput_mbps),
                computed_tps_kbps_per_slice: computed_tps,
                reference_tps_kbps_per_slice: m.reference_tps_kbps_per_slice,
                tps_deviation: deviation(computed_tps, m.reference_tps_kbps_per_slice),
                simulated_throughput_mbps: simulated,
                low_confidence: m.low_confidence,
            });
        }
    }
    Ok(PerfReport { rows })
}

impl PerfReport {
    /// Fixed-width text rendering, one line per (variant, device).
    pub fn render_text(&self) -> String {
        let fmt_opt = |v: Option<f64>| match v {
            Some(x) => format!("{x:.3}"),
            None => "-".to_string(),
        };
        let header = [
            "variant", "device", "cycles", "f(MHz)", "Mbps", "ref.Mbps", "dev", "TPS", "ref.TPS",
            "dev", "sim.Mbps", "note",
        ];
        let mut table: Vec<Vec<String>> = vec![header.iter().map(|s| s.to_string()).collect()];
        for r in &self.rows {
            table.push(vec![
                r.variant.to_string(),
                r.device.clone(),
                r.cycles_per_block.to_string(),
                format!("{:.3}", r.max_freq_mhz),
                format!("{:.3}", r.computed_throughput_mbps),
                fmt_opt(r.reference_throughput_mbps),
                fmt_opt(r.throughput_deviation),
                format!("{:.3}", r.computed_tps_kbps_per_slice),
                fmt_opt(r.reference_tps_kbps_per_slice),
                fmt_opt(r.tps_deviation),
                fmt_opt(r.simulated_throughput_mbps),
                if r.low_confidence {
                    "low-confidence reference".to_string()
                } else {
                    String::new()
                },
            ]);
        }
        let widths: Vec<usize> = (0..header.len())
            .map(|c| table.iter().map(|row| row[c].len()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for row in &table {
            let line: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(cell, w)| format!("{cell:<w$}"))
                .collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        out
    }
}
