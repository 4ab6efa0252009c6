//! Cycle-level simulation of a partially reconfigurable device: a static
//! region that keeps running, and one reconfigurable slot holding a single
//! AES coprocessor module at a time.
//!
//! Two swap semantics are modeled. A dynamic (active) swap reprograms the
//! slot while everything already running keeps making progress every cycle.
//! A static (shutdown) swap holds the rest of the device in reset for the
//! whole window: in-flight jobs are frozen and resume afterwards, so their
//! completion moves back by exactly the window length.
//!
//! Jobs are dispatched strictly FIFO. The head of the queue starts only when
//! no swap is in progress, the slot is free, and the loaded module matches
//! the job's key size; a mismatched head waits for the controller to swap
//! and never lets later jobs jump past it. Swap cost is size-proportional:
//! bitstream units times a configurable cycles-per-unit factor (default 1).

use std::collections::VecDeque;

use serde::Serialize;

use crate::aes::{apply_blocks, key_expansion, CipherVariant};
use crate::perf;

pub type Cycle = u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ReconfigMode {
    Static,
    Dynamic,
}

impl std::fmt::Display for ReconfigMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ReconfigMode::Static => write!(f, "static"),
            ReconfigMode::Dynamic => write!(f, "dynamic"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    Encrypt,
    Decrypt,
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Direction::Encrypt => write!(f, "encrypt"),
            Direction::Decrypt => write!(f, "decrypt"),
        }
    }
}

/// A simulated partial bitstream: which cipher it implements and what it
/// costs to load and to run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartialModule {
    pub variant: CipherVariant,
    pub slices: u32,
    pub cycles_per_block: Cycle,
    /// Abstract size units driving swap latency; defaults to the slice count.
    pub bitstream_size: u64,
}

impl PartialModule {
    pub fn new(variant: CipherVariant, slices: u32) -> Self {
        assert!(slices > 0, "a module occupies at least one slice");
        PartialModule {
            variant,
            slices,
            cycles_per_block: perf::cycles_per_block(variant),
            bitstream_size: slices as u64,
        }
    }

    pub fn with_bitstream_size(mut self, units: u64) -> Self {
        self.bitstream_size = units;
        self
    }
}

/// The partial bitstreams available for the reconfigurable slot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
pub struct ModuleCatalog {
    modules: Vec<PartialModule>,
}

impl ModuleCatalog {
    pub fn empty() -> Self {
        ModuleCatalog::default()
    }

    /// One module per variant, sized from the published coprocessor slice
    /// counts (3565 / 3764 / 3632).
    pub fn reference_defaults() -> Self {
        let pc = perf::ReferenceConstants::embedded();
        let mut catalog = ModuleCatalog::empty();
        for v in CipherVariant::ALL {
            let slices = pc
                .lookup(4, Some(v), "XC2VP", "coprocessor_slices")
                .expect("embedded constants carry coprocessor slice counts")
                .value as u32;
            catalog.insert(PartialModule::new(v, slices));
        }
        catalog
    }

    pub fn insert(&mut self, module: PartialModule) {
        self.modules.retain(|m| m.variant != module.variant);
        self.modules.push(module);
        self.modules.sort_by_key(|m| m.variant);
    }

    pub fn get(&self, v: CipherVariant) -> Option<&PartialModule> {
        self.modules.iter().find(|m| m.variant == v)
    }

    pub fn modules(&self) -> &[PartialModule] {
        &self.modules
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FabricConfig {
    pub catalog: ModuleCatalog,
    /// Swap cost per bitstream unit; 0 makes every swap instantaneous.
    pub cycles_per_unit: u64,
}

impl Default for FabricConfig {
    fn default() -> Self {
        FabricConfig {
            catalog: ModuleCatalog::reference_defaults(),
            cycles_per_unit: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FabricError {
    #[error("a reconfiguration is already in progress")]
    Busy,
    #[error("no partial bitstream stored for {0}")]
    ModuleUnavailable(CipherVariant),
    #[error("full configuration is only possible at reset")]
    NotAtReset,
    #[error("job key is {got} bytes but {variant} needs {want}")]
    KeyLength {
        variant: CipherVariant,
        got: usize,
        want: usize,
    },
    #[error("job carries no blocks")]
    EmptyPayload,
}

/// A completed or scheduled reconfiguration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ReconfigEvent {
    pub from_variant: Option<CipherVariant>,
    pub to_variant: CipherVariant,
    pub mode: ReconfigMode,
    pub started_at: Cycle,
    pub finished_at: Cycle,
    pub latency: Cycle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct JobId(pub u64);

impl std::fmt::Display for JobId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Work submitted to the fabric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobRequest {
    pub variant: CipherVariant,
    pub key: Vec<u8>,
    pub blocks: Vec<[u8; 16]>,
    pub direction: Direction,
}

/// Record of one finished job.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JobCompletion {
    pub id: JobId,
    pub variant: CipherVariant,
    pub direction: Direction,
    pub blocks: usize,
    pub submitted_at: Cycle,
    pub started_at: Cycle,
    pub completed_at: Cycle,
    /// Cycles spent frozen under static-mode windows.
    pub frozen_cycles: Cycle,
    /// Variant loaded in the slot when the job started.
    pub executed_on: CipherVariant,
    pub output: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum FabricEvent {
    ReconfigDone(ReconfigEvent),
    JobStarted {
        id: JobId,
        at: Cycle,
        variant: CipherVariant,
    },
    JobDone(JobCompletion),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum HistoryRecord {
    Reconfig(ReconfigEvent),
    Job(JobCompletion),
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct QueuedJob {
    id: JobId,
    request: JobRequest,
    submitted_at: Cycle,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct RunningJob {
    id: JobId,
    request: JobRequest,
    submitted_at: Cycle,
    started_at: Cycle,
    executed_on: CipherVariant,
    cycles_needed: Cycle,
    progress: Cycle,
    frozen: Cycle,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct ActiveWindow {
    from_variant: Option<CipherVariant>,
    to: PartialModule,
    mode: ReconfigMode,
    started_at: Cycle,
    remaining: Cycle,
}

/// Read-only snapshot of a queued job.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QueuedSnapshot {
    pub id: JobId,
    pub variant: CipherVariant,
    pub blocks: usize,
    pub submitted_at: Cycle,
}

/// Read-only snapshot of the executing job.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunningSnapshot {
    pub id: JobId,
    pub variant: CipherVariant,
    pub started_at: Cycle,
    pub progress_cycles: Cycle,
    pub cycles_needed: Cycle,
    pub blocks_done: u64,
    pub frozen_cycles: Cycle,
}

/// Consistent view of the chip at one instant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FabricStatus {
    pub clock: Cycle,
    pub loaded: Option<PartialModule>,
    /// Mode of the in-progress window, if any.
    pub mode: Option<ReconfigMode>,
    /// Cycles left in the in-progress window; 0 when idle.
    pub reconfig_remaining: Cycle,
    pub job_queue: Vec<QueuedSnapshot>,
    pub in_flight: Option<RunningSnapshot>,
    pub history: Vec<HistoryRecord>,
}

/// The simulated chip. Single-writer: all mutation flows through
/// [`Fabric::submit_job`], [`Fabric::begin_partial_reconfig`] and
/// [`Fabric::step`]; snapshots are independent copies.
#[derive(Debug, Clone)]
pub struct Fabric {
    config: FabricConfig,
    clock: Cycle,
    loaded: Option<PartialModule>,
    window: Option<ActiveWindow>,
    queue: VecDeque<QueuedJob>,
    running: Option<RunningJob>,
    history: Vec<HistoryRecord>,
    next_job: u64,
}

impl Fabric {
    pub fn new(config: FabricConfig) -> Self {
        Fabric {
            config,
            clock: 0,
            loaded: None,
            window: None,
            queue: VecDeque::new(),
            running: None,
            history: Vec::new(),
            next_job: 1,
        }
    }

    /// Back to power-on: clock 0, nothing loaded, empty history.
    pub fn reset(&mut self) {
        *self = Fabric::new(self.config.clone());
    }

    pub fn clock(&self) -> Cycle {
        self.clock
    }

    pub fn loaded_variant(&self) -> Option<CipherVariant> {
        self.loaded.as_ref().map(|m| m.variant)
    }

    pub fn reconfig_in_progress(&self) -> bool {
        self.window.is_some()
    }

    /// Key size of the job waiting at the queue head, if any.
    pub fn queue_head_variant(&self) -> Option<CipherVariant> {
        self.queue.front().map(|j| j.request.variant)
    }

    pub fn config(&self) -> &FabricConfig {
        &self.config
    }

    /// Swap cost in cycles for loading `to`: bitstream units times the
    /// configured cycles-per-unit factor.
    pub fn latency_model(&self, to: CipherVariant) -> Result<Cycle, FabricError> {
        let module = self
            .config
            .catalog
            .get(to)
            .ok_or(FabricError::ModuleUnavailable(to))?;
        Ok(module.bitstream_size * self.config.cycles_per_unit)
    }

    /// Initial full configuration: only legal on a fabric that has done
    /// nothing yet. Loads `variant` instantly and records the initial event.
    pub fn load_full_configuration(&mut self, variant: CipherVariant) -> Result<(), FabricError> {
        if self.clock != 0 || self.loaded.is_some() || !self.history.is_empty() {
            return Err(FabricError::NotAtReset);
        }
        let module = self
            .config
            .catalog
            .get(variant)
            .ok_or(FabricError::ModuleUnavailable(variant))?
            .clone();
        let event = ReconfigEvent {
            from_variant: None,
            to_variant: variant,
            mode: ReconfigMode::Static,
            started_at: 0,
            finished_at: 0,
            latency: 0,
        };
        self.loaded = Some(module);
        self.history.push(HistoryRecord::Reconfig(event));
        Ok(())
    }

    /// Starts swapping the slot to `to`. Rejected while another swap runs.
    /// Swapping to the already-loaded variant is a zero-latency no-op event.
    /// Returns the scheduled event; completion is reported again by
    /// [`Fabric::step`] once the window elapses.
    pub fn begin_partial_reconfig(
        &mut self,
        to: CipherVariant,
        mode: ReconfigMode,
    ) -> Result<ReconfigEvent, FabricError> {
        if self.window.is_some() {
            return Err(FabricError::Busy);
        }
        let from_variant = self.loaded_variant();
        if from_variant == Some(to) {
            let event = ReconfigEvent {
                from_variant,
                to_variant: to,
                mode,
                started_at: self.clock,
                finished_at: self.clock,
                latency: 0,
            };
            self.history.push(HistoryRecord::Reconfig(event));
            return Ok(event);
        }
        let module = self
            .config
            .catalog
            .get(to)
            .ok_or(FabricError::ModuleUnavailable(to))?
            .clone();
        let latency = self.latency_model(to)?;
        let event = ReconfigEvent {
            from_variant,
            to_variant: to,
            mode,
            started_at: self.clock,
            finished_at: self.clock + latency,
            latency,
        };
        if latency == 0 {
            // Instant-swap configuration: apply immediately.
            self.loaded = Some(module);
            self.history.push(HistoryRecord::Reconfig(event));
        } else {
            self.window = Some(ActiveWindow {
                from_variant,
                to: module,
                mode,
                started_at: self.clock,
                remaining: latency,
            });
        }
        Ok(event)
    }

    /// Queues a job. The key must match the declared variant and the payload
    /// must be non-empty; accepted jobs are never dropped.
    pub fn submit_job(&mut self, request: JobRequest) -> Result<JobId, FabricError> {
        if request.key.len() != request.variant.key_len() {
            return Err(FabricError::KeyLength {
                variant: request.variant,
                got: request.key.len(),
                want: request.variant.key_len(),
            });
        }
        if request.blocks.is_empty() {
            return Err(FabricError::EmptyPayload);
        }
        let id = JobId(self.next_job);
        self.next_job += 1;
        self.queue.push_back(QueuedJob {
            id,
            request,
            submitted_at: self.clock,
        });
        Ok(id)
    }

    /// True while a static-mode window is holding the rest of the device in
    /// reset.
    fn frozen(&self) -> bool {
        matches!(
            &self.window,
            Some(w) if w.mode == ReconfigMode::Static
        )
    }

    fn job_progressing(&self) -> bool {
        self.running.is_some() && !self.frozen()
    }

    /// Cycles until the next internal boundary (window end or job
    /// completion), capped at `budget`. Equals `budget` when nothing is
    /// pending.
    pub fn cycles_to_next_event(&self, budget: Cycle) -> Cycle {
        let mut dt = budget;
        if let Some(w) = &self.window {
            dt = dt.min(w.remaining);
        }
        if self.job_progressing() {
            let job = self.running.as_ref().unwrap();
            dt = dt.min(job.cycles_needed - job.progress);
        }
        dt
    }

    /// Starts the queue head if the slot is free, no swap is running, and
    /// the loaded module matches. A mismatched head blocks the queue.
    fn try_start_job(&mut self, events: &mut Vec<FabricEvent>) {
        if self.window.is_some() || self.running.is_some() {
            return;
        }
        let Some(module) = self.loaded.clone() else {
            return;
        };
        let matches = self
            .queue
            .front()
            .is_some_and(|job| job.request.variant == module.variant);
        if !matches {
            return;
        }
        let job = self.queue.pop_front().unwrap();
        let cycles_needed = job.request.blocks.len() as Cycle * module.cycles_per_block;
        events.push(FabricEvent::JobStarted {
            id: job.id,
            at: self.clock,
            variant: job.request.variant,
        });
        self.running = Some(RunningJob {
            id: job.id,
            request: job.request,
            submitted_at: job.submitted_at,
            started_at: self.clock,
            executed_on: module.variant,
            cycles_needed,
            progress: 0,
            frozen: 0,
        });
    }

    fn finish_window(&mut self, events: &mut Vec<FabricEvent>) {
        let w = self.window.take().expect("window present");
        let event = ReconfigEvent {
            from_variant: w.from_variant,
            to_variant: w.to.variant,
            mode: w.mode,
            started_at: w.started_at,
            finished_at: self.clock,
            latency: self.clock - w.started_at,
        };
        self.loaded = Some(w.to);
        self.history.push(HistoryRecord::Reconfig(event));
        events.push(FabricEvent::ReconfigDone(event));
    }

    fn finish_job(&mut self, events: &mut Vec<FabricEvent>) {
        let job = self.running.take().expect("job present");
        let ks = key_expansion(&job.request.key, job.request.variant)
            .expect("key length was validated at submit");
        let out_blocks = apply_blocks(
            &job.request.blocks,
            &ks,
            job.request.direction == Direction::Decrypt,
        );
        let completion = JobCompletion {
            id: job.id,
            variant: job.request.variant,
            direction: job.request.direction,
            blocks: job.request.blocks.len(),
            submitted_at: job.submitted_at,
            started_at: job.started_at,
            completed_at: self.clock,
            frozen_cycles: job.frozen,
            executed_on: job.executed_on,
            output: out_blocks.concat(),
        };
        self.history.push(HistoryRecord::Job(completion.clone()));
        events.push(FabricEvent::JobDone(completion));
    }

    /// Advances the clock by `n` cycles, emitting everything that happened.
    /// `step(0)` changes nothing, not even job dispatch.
    pub fn step(&mut self, n: Cycle) -> Vec<FabricEvent> {
        let mut events = Vec::new();
        if n == 0 {
            return events;
        }
        let target = self.clock + n;
        self.try_start_job(&mut events);
        while self.clock < target {
            let dt = self.cycles_to_next_event(target - self.clock);
            debug_assert!(dt > 0);
            self.clock += dt;
            if let Some(w) = &mut self.window {
                w.remaining -= dt;
            }
            if self.job_progressing() {
                self.running.as_mut().unwrap().progress += dt;
            } else if let Some(job) = &mut self.running {
                // Static window: the datapath is held in reset.
                job.frozen += dt;
            }
            if self.window.as_ref().is_some_and(|w| w.remaining == 0) {
                self.finish_window(&mut events);
            }
            if self
                .running
                .as_ref()
                .is_some_and(|j| j.progress == j.cycles_needed)
            {
                self.finish_job(&mut events);
            }
            self.try_start_job(&mut events);
        }
        events
    }

    /// Pure snapshot; advancing time is exclusively [`Fabric::step`]'s job.
    pub fn query_status(&self) -> FabricStatus {
        FabricStatus {
            clock: self.clock,
            loaded: self.loaded.clone(),
            mode: self.window.as_ref().map(|w| w.mode),
            reconfig_remaining: self.window.as_ref().map_or(0, |w| w.remaining),
            job_queue: self
                .queue
                .iter()
                .map(|j| QueuedSnapshot {
                    id: j.id,
                    variant: j.request.variant,
                    blocks: j.request.blocks.len(),
                    submitted_at: j.submitted_at,
                })
                .collect(),
            in_flight: self.running.as_ref().map(|j| {
                let per_block = j.cycles_needed / j.request.blocks.len() as u64;
                RunningSnapshot {
                    id: j.id,
                    variant: j.request.variant,
                    started_at: j.started_at,
                    progress_cycles: j.progress,
                    cycles_needed: j.cycles_needed,
                    blocks_done: j.progress / per_block,
                    frozen_cycles: j.frozen,
                }
            }),
            history: self.history.clone(),
        }
    }
}
