//! Self-reconfiguration control: a four-state FSM that watches the key
//! length signal, plus the two-stage parameter pipeline that picks a stored
//! partial bitstream, checks it against constraints, and writes the
//! configuration register that drives the fabric.
//!
//! The split mirrors the intended hardware roles: the planner (embedded
//! processor) maps a key size to a stored bitstream slot, the optimizer
//! validates the plan against latency/mode constraints and produces the
//! register, and `dispatch` hands the register to the fabric.

use serde::Serialize;

use crate::aes::CipherVariant;
use crate::fabric::{Cycle, Fabric, FabricError, PartialModule, ReconfigEvent, ReconfigMode};

/// Controller FSM. `Reconfigure` and `Operational` carry the variant being
/// (or last) loaded so the machine can tell a fresh request from noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FsmState {
    Start,
    DetectKeyLength,
    Reconfigure(CipherVariant),
    Operational(CipherVariant),
}

impl std::fmt::Display for FsmState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FsmState::Start => write!(f, "start"),
            FsmState::DetectKeyLength => write!(f, "detect-key-length"),
            FsmState::Reconfigure(v) => write!(f, "reconfigure({})", v.key_bits()),
            FsmState::Operational(v) => write!(f, "operational({})", v.key_bits()),
        }
    }
}

/// Everything the FSM can observe in one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ControllerInput {
    pub key_length_signal: Option<CipherVariant>,
    pub reconfig_done: bool,
    pub reset: bool,
}

/// Side effects requested by a transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    SelectPrMemory(CipherVariant),
    RaiseReconfigSignal(CipherVariant),
}

/// Total transition function: every (state, input) pair has exactly one
/// successor and never panics.
///
/// * reset dominates and returns to `Start` from anywhere;
/// * `Start` falls through to `DetectKeyLength` once reset is released;
/// * `DetectKeyLength` waits for a key length signal, then requests the
///   matching bitstream and raises the reconfiguration signal;
/// * `Reconfigure` waits for completion;
/// * `Operational` re-enters `Reconfigure` only when the signal names a
///   different variant than the one loaded.
pub fn fsm_step(state: FsmState, input: &ControllerInput) -> (FsmState, Vec<Action>) {
    if input.reset {
        return (FsmState::Start, vec![]);
    }
    match state {
        FsmState::Start => (FsmState::DetectKeyLength, vec![]),
        FsmState::DetectKeyLength => match input.key_length_signal {
            Some(target) => (
                FsmState::Reconfigure(target),
                vec![
                    Action::SelectPrMemory(target),
                    Action::RaiseReconfigSignal(target),
                ],
            ),
            None => (FsmState::DetectKeyLength, vec![]),
        },
        FsmState::Reconfigure(target) => {
            if input.reconfig_done {
                (FsmState::Operational(target), vec![])
            } else {
                (FsmState::Reconfigure(target), vec![])
            }
        }
        FsmState::Operational(loaded) => match input.key_length_signal {
            Some(target) if target != loaded => (
                FsmState::Reconfigure(target),
                vec![
                    Action::SelectPrMemory(target),
                    Action::RaiseReconfigSignal(target),
                ],
            ),
            _ => (FsmState::Operational(loaded), vec![]),
        },
    }
}

/// Slot index into the partial-bitstream store.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PrMemoryId(pub usize);

impl std::fmt::Display for PrMemoryId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The bitstream store the planner selects from. Slot order is insertion
/// order, so identical setups always yield identical slot ids.
#[derive(Debug, Clone, Default)]
pub struct PrStore {
    slots: Vec<PartialModule>,
}

impl PrStore {
    pub fn new(modules: impl IntoIterator<Item = PartialModule>) -> Self {
        PrStore {
            slots: modules.into_iter().collect(),
        }
    }

    pub fn find(&self, variant: CipherVariant) -> Option<(PrMemoryId, &PartialModule)> {
        self.slots
            .iter()
            .enumerate()
            .find(|(_, m)| m.variant == variant)
            .map(|(i, m)| (PrMemoryId(i), m))
    }

    pub fn get(&self, id: PrMemoryId) -> Option<&PartialModule> {
        self.slots.get(id.0)
    }
}

/// Opaque workload context handed to the planner. Today it can carry the
/// key size of the job waiting at the queue head and a requested swap mode;
/// richer hints can be added without changing the planner signature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct WorkloadHint {
    pub pending_key_bits: Option<CipherVariant>,
    pub requested_mode: Option<ReconfigMode>,
}

/// The parameter block a reconfiguration is described by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ReconfigParams {
    pub target_variant: CipherVariant,
    pub pr_memory_id: PrMemoryId,
    pub mode: ReconfigMode,
}

/// Optimizer constraints: an optional latency ceiling and whether static
/// (shutdown) swaps may be issued at all. The default is unbounded latency
/// and dynamic-only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Constraints {
    pub max_latency_cycles: Option<Cycle>,
    pub allow_static_mode: bool,
}

/// The register the fabric is driven from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConfigRegister {
    pub params: ReconfigParams,
    pub valid: bool,
    pub written_at: Cycle,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ControllerError {
    #[error("no stored bitstream for {0}")]
    MissingBitstream(CipherVariant),
    #[error("swap latency {required} cycles exceeds the {limit}-cycle bound")]
    LatencyBound { required: Cycle, limit: Cycle },
    #[error("static-mode swap requested but not permitted")]
    StaticNotPermitted,
    #[error("configuration register is not valid")]
    InvalidRegister,
    #[error(transparent)]
    Fabric(#[from] FabricError),
}

/// First controller: maps the detected key size to a stored bitstream slot.
/// Deterministic; the target variant is never overridden by the hint.
#[derive(Debug, Clone, Default)]
pub struct Planner {
    store: PrStore,
}

impl Planner {
    pub fn new(store: PrStore) -> Self {
        Planner { store }
    }

    pub fn store(&self) -> &PrStore {
        &self.store
    }

    pub fn plan_parameters(
        &self,
        key_bits: CipherVariant,
        hint: &WorkloadHint,
    ) -> Result<ReconfigParams, ControllerError> {
        let (pr_memory_id, _) = self
            .store
            .find(key_bits)
            .ok_or(ControllerError::MissingBitstream(key_bits))?;
        Ok(ReconfigParams {
            target_variant: key_bits,
            pr_memory_id,
            mode: hint.requested_mode.unwrap_or(ReconfigMode::Dynamic),
        })
    }
}

/// Second controller: validates the candidate under the constraints and
/// writes the register. Dynamic mode is used whenever requested; a static
/// request needs explicit permission and is never silently downgraded.
pub fn optimize_parameters(
    candidate: ReconfigParams,
    constraints: &Constraints,
    fabric: &Fabric,
) -> Result<ConfigRegister, ControllerError> {
    let mode = match candidate.mode {
        ReconfigMode::Dynamic => ReconfigMode::Dynamic,
        ReconfigMode::Static if constraints.allow_static_mode => ReconfigMode::Static,
        ReconfigMode::Static => return Err(ControllerError::StaticNotPermitted),
    };
    let latency = fabric.latency_model(candidate.target_variant)?;
    if let Some(limit) = constraints.max_latency_cycles {
        if latency > limit {
            return Err(ControllerError::LatencyBound {
                required: latency,
                limit,
            });
        }
    }
    Ok(ConfigRegister {
        params: ReconfigParams { mode, ..candidate },
        valid: true,
        written_at: fabric.clock(),
    })
}

/// Hands a valid register to the fabric; a busy fabric propagates as an
/// error rather than queueing.
pub fn dispatch(
    register: &ConfigRegister,
    fabric: &mut Fabric,
) -> Result<ReconfigEvent, ControllerError> {
    if !register.valid {
        return Err(ControllerError::InvalidRegister);
    }
    Ok(fabric.begin_partial_reconfig(register.params.target_variant, register.params.mode)?)
}
