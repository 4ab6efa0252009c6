//! The scenario language driving the simulator: plain text, one directive
//! per line, `#` comments. Directives are applied in file order and the
//! emitted event log is a pure function of the file plus the simulator
//! options, so identical runs produce bit-identical logs.
//!
//! ```text
//! signal-key-length <bits> [static|dynamic]
//! set-constraints [max_latency=<cycles>|max_latency=none] [allow_static=<bool>]
//! submit-job key_bits=<bits> key=<hex> (data=<hex> | blocks=<n>) [direction=encrypt|decrypt]
//! advance <cycles>
//! expect clock=<n> | loaded=<bits|none> | completed=<n> | reconfigs=<n>
//!        | queue=<n> | fsm=<state> | job:<id> <field>=<value>
//! ```
//!
//! `expect job:<id>` fields: `started_at`, `completed_at`, `frozen`,
//! `output` (hex). Job ids are assigned 1, 2, ... in submission order.
//! `reconfigs` counts completed reconfiguration records, including the
//! reset-time full configuration when `--initial` is used.

use std::fmt::Write as _;

use prcrypt_core::aes::CipherVariant;
use prcrypt_core::controller::Constraints;
use prcrypt_core::fabric::{
    Cycle, Direction, FabricConfig, HistoryRecord, JobCompletion, JobRequest, ReconfigMode,
};
use prcrypt_core::system::{EventKind, System, SystemConfig, SystemEvent};

use crate::commands::{parse_hex, split_blocks};
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Directive {
    SignalKeyLength {
        bits: CipherVariant,
        mode: ReconfigMode,
    },
    SetConstraints {
        max_latency: Option<Option<Cycle>>,
        allow_static: Option<bool>,
    },
    SubmitJob(JobRequest),
    Advance(Cycle),
    Expect(Expectation),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expectation {
    Clock(Cycle),
    Loaded(Option<CipherVariant>),
    Completed(usize),
    Reconfigs(usize),
    Queue(usize),
    Fsm(String),
    Job { id: u64, field: JobField },
}

#[derive(Debug, Clone, PartialEq)]
pub enum JobField {
    StartedAt(Cycle),
    CompletedAt(Cycle),
    Frozen(Cycle),
    Output(Vec<u8>),
}

/// One parsed directive with its source line for diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioLine {
    pub number: usize,
    pub directive: Directive,
}

fn err(line: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("line {line}: {msg}"))
}

fn parse_bits(line: usize, s: &str) -> Result<CipherVariant, CliError> {
    s.parse::<u16>()
        .ok()
        .and_then(|b| CipherVariant::from_key_bits(b).ok())
        .ok_or_else(|| err(line, format!("bad key size {s:?} (128|192|256)")))
}

fn parse_u64(line: usize, label: &str, s: &str) -> Result<u64, CliError> {
    s.parse()
        .map_err(|_| err(line, format!("bad {label} {s:?}")))
}

fn kv(line: usize, token: &str) -> Result<(&str, &str), CliError> {
    token
        .split_once('=')
        .ok_or_else(|| err(line, format!("expected key=value, got {token:?}")))
}

fn parse_submit(line: usize, tokens: &[&str]) -> Result<JobRequest, CliError> {
    let mut key_bits = None;
    let mut key = None;
    let mut data = None;
    let mut zero_blocks = None;
    let mut direction = Direction::Encrypt;
    for token in tokens {
        let (k, v) = kv(line, token)?;
        match k {
            "key_bits" => key_bits = Some(parse_bits(line, v)?),
            "key" => key = Some(parse_hex("key", v).map_err(|e| err(line, e))?),
            "data" => data = Some(parse_hex("data", v).map_err(|e| err(line, e))?),
            "blocks" => zero_blocks = Some(parse_u64(line, "block count", v)? as usize),
            "direction" => {
                direction = match v {
                    "encrypt" => Direction::Encrypt,
                    "decrypt" => Direction::Decrypt,
                    other => return Err(err(line, format!("bad direction {other:?}"))),
                }
            }
            other => return Err(err(line, format!("unknown submit-job field {other:?}"))),
        }
    }
    let variant = key_bits.ok_or_else(|| err(line, "submit-job needs key_bits="))?;
    let key = key.ok_or_else(|| err(line, "submit-job needs key="))?;
    let blocks = match (data, zero_blocks) {
        (Some(_), Some(_)) => return Err(err(line, "give either data= or blocks=, not both")),
        (Some(bytes), None) => split_blocks(&bytes).map_err(|e| err(line, e))?,
        (None, Some(n)) => vec![[0u8; 16]; n],
        (None, None) => return Err(err(line, "submit-job needs data= or blocks=")),
    };
    if blocks.is_empty() {
        return Err(err(line, "job carries no blocks"));
    }
    Ok(JobRequest {
        variant,
        key,
        blocks,
        direction,
    })
}

fn parse_expect(line: usize, tokens: &[&str]) -> Result<Expectation, CliError> {
    let first = tokens
        .first()
        .ok_or_else(|| err(line, "expect needs an assertion"))?;
    if let Some(id) = first.strip_prefix("job:") {
        let id = parse_u64(line, "job id", id)?;
        let field_token = tokens
            .get(1)
            .ok_or_else(|| err(line, "expect job:<id> needs a field=value"))?;
        let (k, v) = kv(line, field_token)?;
        let field = match k {
            "started_at" => JobField::StartedAt(parse_u64(line, "cycle", v)?),
            "completed_at" => JobField::CompletedAt(parse_u64(line, "cycle", v)?),
            "frozen" => JobField::Frozen(parse_u64(line, "cycle", v)?),
            "output" => JobField::Output(parse_hex("output", v).map_err(|e| err(line, e))?),
            other => return Err(err(line, format!("unknown job field {other:?}"))),
        };
        return Ok(Expectation::Job { id, field });
    }
    let (k, v) = kv(line, first)?;
    match k {
        "clock" => Ok(Expectation::Clock(parse_u64(line, "cycle", v)?)),
        "loaded" => Ok(Expectation::Loaded(match v {
            "none" => None,
            bits => Some(parse_bits(line, bits)?),
        })),
        "completed" => Ok(Expectation::Completed(parse_u64(line, "count", v)? as usize)),
        "reconfigs" => Ok(Expectation::Reconfigs(parse_u64(line, "count", v)? as usize)),
        "queue" => Ok(Expectation::Queue(parse_u64(line, "count", v)? as usize)),
        "fsm" => Ok(Expectation::Fsm(v.to_string())),
        other => Err(err(line, format!("unknown expectation {other:?}"))),
    }
}

/// Parses a whole scenario file; the first malformed line aborts with its
/// line number.
pub fn parse_scenario(text: &str) -> Result<Vec<ScenarioLine>, CliError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let number = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let directive = match tokens[0] {
            "signal-key-length" => {
                let bits = tokens
                    .get(1)
                    .ok_or_else(|| err(number, "signal-key-length needs a key size"))
                    .and_then(|t| parse_bits(number, t))?;
                let mode = match tokens.get(2) {
                    None | Some(&"dynamic") => ReconfigMode::Dynamic,
                    Some(&"static") => ReconfigMode::Static,
                    Some(other) => {
                        return Err(err(number, format!("bad mode {other:?} (static|dynamic)")))
                    }
                };
                Directive::SignalKeyLength { bits, mode }
            }
            "set-constraints" => {
                let mut max_latency = None;
                let mut allow_static = None;
                for token in &tokens[1..] {
                    let (k, v) = kv(number, token)?;
                    match k {
                        "max_latency" => {
                            max_latency = Some(match v {
                                "none" => None,
                                n => Some(parse_u64(number, "latency bound", n)?),
                            })
                        }
                        "allow_static" => {
                            allow_static = Some(v.parse::<bool>().map_err(|_| {
                                err(number, format!("bad allow_static {v:?} (true|false)"))
                            })?)
                        }
                        other => return Err(err(number, format!("unknown constraint {other:?}"))),
                    }
                }
                Directive::SetConstraints {
                    max_latency,
                    allow_static,
                }
            }
            "submit-job" => Directive::SubmitJob(parse_submit(number, &tokens[1..])?),
            "advance" => {
                let cycles = tokens
                    .get(1)
                    .ok_or_else(|| err(number, "advance needs a cycle count"))
                    .and_then(|t| parse_u64(number, "cycle count", t))?;
                Directive::Advance(cycles)
            }
            "expect" => Directive::Expect(parse_expect(number, &tokens[1..])?),
            other => return Err(err(number, format!("unknown directive {other:?}"))),
        };
        out.push(ScenarioLine { number, directive });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimulatorOptions {
    pub cycles_per_unit: u64,
    pub initial_variant: Option<CipherVariant>,
}

impl Default for SimulatorOptions {
    fn default() -> Self {
        SimulatorOptions {
            cycles_per_unit: 1,
            initial_variant: None,
        }
    }
}

/// Everything a finished run produced. `failures` is empty on success; the
/// log is complete either way.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioOutcome {
    pub log: String,
    pub failures: Vec<String>,
}

fn variant_or_none(v: Option<CipherVariant>) -> String {
    v.map_or_else(|| "none".to_string(), |b| b.key_bits().to_string())
}

fn render_event(e: &SystemEvent) -> String {
    let body = match &e.kind {
        EventKind::FsmMoved { from, to } => format!("fsm {from} -> {to}"),
        EventKind::RegisterWritten(r) => format!(
            "register target={} mode={} slot={}",
            r.params.target_variant.key_bits(),
            r.params.mode,
            r.params.pr_memory_id
        ),
        EventKind::PlanRejected { target, reason } => {
            format!(
                "plan-rejected target={} reason: {reason}",
                target.key_bits()
            )
        }
        EventKind::ReconfigBegun(ev) => format!(
            "reconfig-begin from={} to={} mode={} latency={}",
            variant_or_none(ev.from_variant),
            ev.to_variant.key_bits(),
            ev.mode,
            ev.latency
        ),
        EventKind::ReconfigDone(ev) => format!(
            "reconfig-done from={} to={} mode={} latency={}",
            variant_or_none(ev.from_variant),
            ev.to_variant.key_bits(),
            ev.mode,
            ev.latency
        ),
        EventKind::JobSubmitted {
            id,
            variant,
            blocks,
            direction,
        } => format!(
            "job-submitted id={id} variant={} blocks={blocks} direction={direction}",
            variant.key_bits()
        ),
        EventKind::JobStarted { id, variant } => {
            format!("job-started id={id} variant={}", variant.key_bits())
        }
        EventKind::JobDone(c) => format!(
            "job-done id={} blocks={} cycles={} frozen={} output={}",
            c.id,
            c.blocks,
            c.completed_at - c.started_at,
            c.frozen_cycles,
            hex::encode(&c.output)
        ),
    };
    format!("[{:>8}] {body}\n", e.at)
}

struct Evaluation {
    ok: bool,
    wanted: String,
    actual: String,
}

fn eval(system: &System, completions: &[JobCompletion], expectation: &Expectation) -> Evaluation {
    let status = system.fabric().query_status();
    let check = |wanted: String, actual: String| Evaluation {
        ok: wanted == actual,
        wanted,
        actual,
    };
    match expectation {
        Expectation::Clock(n) => check(n.to_string(), status.clock.to_string()),
        Expectation::Loaded(v) => check(
            variant_or_none(*v),
            variant_or_none(status.loaded.map(|m| m.variant)),
        ),
        Expectation::Completed(n) => {
            let actual = status
                .history
                .iter()
                .filter(|r| matches!(r, HistoryRecord::Job(_)))
                .count();
            check(n.to_string(), actual.to_string())
        }
        Expectation::Reconfigs(n) => {
            let actual = status
                .history
                .iter()
                .filter(|r| matches!(r, HistoryRecord::Reconfig(_)))
                .count();
            check(n.to_string(), actual.to_string())
        }
        Expectation::Queue(n) => check(n.to_string(), status.job_queue.len().to_string()),
        Expectation::Fsm(s) => check(s.clone(), system.fsm_state().to_string()),
        Expectation::Job { id, field } => {
            let Some(c) = completions.iter().find(|c| c.id.0 == *id) else {
                return Evaluation {
                    ok: false,
                    wanted: format!("job {id} completed"),
                    actual: "job not completed".to_string(),
                };
            };
            match field {
                JobField::StartedAt(n) => check(n.to_string(), c.started_at.to_string()),
                JobField::CompletedAt(n) => check(n.to_string(), c.completed_at.to_string()),
                JobField::Frozen(n) => check(n.to_string(), c.frozen_cycles.to_string()),
                JobField::Output(bytes) => check(hex::encode(bytes), hex::encode(&c.output)),
            }
        }
    }
}

/// Applies the directives in order, rendering the cycle-stamped event log.
/// Expectation failures do not abort the run; they are collected and the
/// caller decides the exit status.
pub fn run_scenario(
    lines: &[ScenarioLine],
    options: &SimulatorOptions,
) -> Result<ScenarioOutcome, CliError> {
    let fabric_config = FabricConfig {
        cycles_per_unit: options.cycles_per_unit,
        ..FabricConfig::default()
    };
    let mut system = System::new(SystemConfig {
        fabric: fabric_config,
        initial_variant: options.initial_variant,
        constraints: Constraints::default(),
    })
    .map_err(|e| CliError::Input(e.to_string()))?;

    let mut log = String::new();
    let mut failures = Vec::new();
    let mut completions: Vec<JobCompletion> = Vec::new();

    let absorb = |events: Vec<SystemEvent>, log: &mut String, sink: &mut Vec<JobCompletion>| {
        for e in events {
            if let EventKind::JobDone(c) = &e.kind {
                sink.push(c.clone());
            }
            log.push_str(&render_event(&e));
        }
    };

    for line in lines {
        match &line.directive {
            Directive::SignalKeyLength { bits, mode } => {
                let events = system.signal_key_length(*bits, *mode);
                absorb(events, &mut log, &mut completions);
            }
            Directive::SetConstraints {
                max_latency,
                allow_static,
            } => {
                let mut constraints = system.constraints();
                if let Some(bound) = max_latency {
                    constraints.max_latency_cycles = *bound;
                }
                if let Some(flag) = allow_static {
                    constraints.allow_static_mode = *flag;
                }
                let events = system.set_constraints(constraints);
                absorb(events, &mut log, &mut completions);
            }
            Directive::SubmitJob(request) => {
                let (_, events) = system
                    .submit(request.clone())
                    .map_err(|e| err(line.number, e))?;
                absorb(events, &mut log, &mut completions);
            }
            Directive::Advance(cycles) => {
                let events = system.advance(*cycles);
                absorb(events, &mut log, &mut completions);
            }
            Directive::Expect(expectation) => {
                let result = eval(&system, &completions, expectation);
                let clock = system.fabric().clock();
                if result.ok {
                    let _ = writeln!(
                        log,
                        "[{clock:>8}] expect line={} ok ({})",
                        line.number, result.actual
                    );
                } else {
                    let _ = writeln!(
                        log,
                        "[{clock:>8}] expect line={} FAILED expected={} actual={}",
                        line.number, result.wanted, result.actual
                    );
                    failures.push(format!(
                        "line {}: expected {}, actual {}",
                        line.number, result.wanted, result.actual
                    ));
                }
            }
        }
    }

    Ok(ScenarioOutcome { log, failures })
}
