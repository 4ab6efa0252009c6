//! The driving loop that couples the configuration controller to the
//! fabric. All timing still lives in the fabric; the controller is polled
//! at directive boundaries and at every fabric event, so its reactions are
//! stamped with the exact cycle they become possible and consume no
//! simulated time themselves.
//!
//! Controller transitions whose actions fail (missing bitstream, violated
//! constraint) are not committed: the FSM keeps its state, the failure is
//! logged, and the request is latched so it is not retried until the signal
//! or the constraints change.

use crate::aes::CipherVariant;
use crate::controller::{
    dispatch, fsm_step, optimize_parameters, Action, ConfigRegister, Constraints, ControllerError,
    ControllerInput, FsmState, Planner, PrStore, WorkloadHint,
};
use crate::fabric::{
    Cycle, Direction, Fabric, FabricConfig, FabricError, FabricEvent, JobCompletion, JobId,
    JobRequest, ReconfigEvent, ReconfigMode,
};

/// A pending key-length request: the detected size plus the swap mode the
/// workload asked for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignalRequest {
    pub bits: CipherVariant,
    pub mode: ReconfigMode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemEvent {
    pub at: Cycle,
    pub kind: EventKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EventKind {
    FsmMoved {
        from: FsmState,
        to: FsmState,
    },
    RegisterWritten(ConfigRegister),
    PlanRejected {
        target: CipherVariant,
        reason: String,
    },
    ReconfigBegun(ReconfigEvent),
    ReconfigDone(ReconfigEvent),
    JobSubmitted {
        id: JobId,
        variant: CipherVariant,
        blocks: usize,
        direction: Direction,
    },
    JobStarted {
        id: JobId,
        variant: CipherVariant,
    },
    JobDone(JobCompletion),
}

#[derive(Debug, Clone, Default)]
pub struct SystemConfig {
    pub fabric: FabricConfig,
    /// Module loaded at reset; None leaves the slot empty until the first
    /// controller-driven swap.
    pub initial_variant: Option<CipherVariant>,
    pub constraints: Constraints,
}

/// Controller plus fabric under one deterministic, single-writer loop.
#[derive(Debug, Clone)]
pub struct System {
    fabric: Fabric,
    planner: Planner,
    fsm: FsmState,
    constraints: Constraints,
    signal: Option<SignalRequest>,
    /// Set when the current signal already failed planning; cleared when the
    /// signal or the constraints change.
    failed_signal: Option<SignalRequest>,
}

impl System {
    pub fn new(config: SystemConfig) -> Result<Self, FabricError> {
        let planner = Planner::new(PrStore::new(config.fabric.catalog.modules().to_vec()));
        let mut fabric = Fabric::new(config.fabric);
        if let Some(v) = config.initial_variant {
            fabric.load_full_configuration(v)?;
        }
        Ok(System {
            fabric,
            planner,
            fsm: FsmState::Start,
            constraints: config.constraints,
            signal: None,
            failed_signal: None,
        })
    }

    pub fn fabric(&self) -> &Fabric {
        &self.fabric
    }

    pub fn fsm_state(&self) -> FsmState {
        self.fsm
    }

    pub fn constraints(&self) -> Constraints {
        self.constraints
    }

    /// Raises (or re-levels) the key-length signal. The controller reacts at
    /// the current cycle.
    pub fn signal_key_length(
        &mut self,
        bits: CipherVariant,
        mode: ReconfigMode,
    ) -> Vec<SystemEvent> {
        let request = SignalRequest { bits, mode };
        if self.signal != Some(request) {
            self.signal = Some(request);
            self.failed_signal = None;
        }
        let mut out = Vec::new();
        self.tick_controller(&mut out);
        out
    }

    /// Replaces the optimizer constraints; a latched planning failure gets
    /// one fresh attempt under the new bounds.
    pub fn set_constraints(&mut self, constraints: Constraints) -> Vec<SystemEvent> {
        self.constraints = constraints;
        self.failed_signal = None;
        let mut out = Vec::new();
        self.tick_controller(&mut out);
        out
    }

    /// Queues work on the fabric.
    pub fn submit(
        &mut self,
        request: JobRequest,
    ) -> Result<(JobId, Vec<SystemEvent>), FabricError> {
        let variant = request.variant;
        let blocks = request.blocks.len();
        let direction = request.direction;
        let id = self.fabric.submit_job(request)?;
        Ok((
            id,
            vec![SystemEvent {
                at: self.fabric.clock(),
                kind: EventKind::JobSubmitted {
                    id,
                    variant,
                    blocks,
                    direction,
                },
            }],
        ))
    }

    /// Advances simulated time by `n` cycles, polling the controller at
    /// every fabric event boundary.
    pub fn advance(&mut self, n: Cycle) -> Vec<SystemEvent> {
        let mut out = Vec::new();
        self.tick_controller(&mut out);
        let target = self.fabric.clock() + n;
        while self.fabric.clock() < target {
            let dt = self
                .fabric
                .cycles_to_next_event(target - self.fabric.clock());
            for event in self.fabric.step(dt) {
                out.push(wrap_fabric_event(event));
            }
            self.tick_controller(&mut out);
        }
        out
    }

    /// Runs the FSM to a fixed point at the current cycle. Transitions with
    /// actions commit only if planning and dispatch succeed.
    fn tick_controller(&mut self, out: &mut Vec<SystemEvent>) {
        for _ in 0..8 {
            let input = ControllerInput {
                key_length_signal: self.signal.map(|s| s.bits),
                reconfig_done: !self.fabric.reconfig_in_progress(),
                reset: false,
            };
            let (next, actions) = fsm_step(self.fsm, &input);
            if next == self.fsm && actions.is_empty() {
                return;
            }
            let mut action_events = Vec::new();
            if !actions.is_empty() {
                if self.failed_signal == self.signal {
                    return; // already failed under these inputs; wait for a change
                }
                if let Err(err) = self.execute_actions(&actions, &mut action_events) {
                    let target = actions
                        .iter()
                        .find_map(|a| match a {
                            Action::RaiseReconfigSignal(v) => Some(*v),
                            _ => None,
                        })
                        .expect("action list carries the target");
                    out.push(SystemEvent {
                        at: self.fabric.clock(),
                        kind: EventKind::PlanRejected {
                            target,
                            reason: err.to_string(),
                        },
                    });
                    self.failed_signal = self.signal;
                    return;
                }
            }
            out.push(SystemEvent {
                at: self.fabric.clock(),
                kind: EventKind::FsmMoved {
                    from: self.fsm,
                    to: next,
                },
            });
            out.extend(action_events);
            self.fsm = next;
        }
        debug_assert!(false, "controller did not quiesce in 8 steps");
    }

    /// Runs the two-controller pipeline for a raised reconfiguration signal.
    /// A request matching the already-loaded module is satisfied without
    /// touching the fabric, so a level signal never causes a spurious swap.
    fn execute_actions(
        &mut self,
        actions: &[Action],
        out: &mut Vec<SystemEvent>,
    ) -> Result<(), ControllerError> {
        let target = actions
            .iter()
            .find_map(|a| match a {
                Action::RaiseReconfigSignal(v) => Some(*v),
                _ => None,
            })
            .expect("reconfigure transitions always raise the signal");

        if !self.fabric.reconfig_in_progress() && self.fabric.loaded_variant() == Some(target) {
            return Ok(());
        }

        let hint = WorkloadHint {
            pending_key_bits: self.fabric.queue_head_variant(),
            requested_mode: self.signal.map(|s| s.mode),
        };
        let candidate = self.planner.plan_parameters(target, &hint)?;
        let register = optimize_parameters(candidate, &self.constraints, &self.fabric)?;
        let event = dispatch(&register, &mut self.fabric)?;
        out.push(SystemEvent {
            at: register.written_at,
            kind: EventKind::RegisterWritten(register),
        });
        out.push(SystemEvent {
            at: event.started_at,
            kind: EventKind::ReconfigBegun(event),
        });
        if event.latency == 0 {
            // Applied instantly; the fabric will not see a window elapse.
            out.push(SystemEvent {
                at: event.finished_at,
                kind: EventKind::ReconfigDone(event),
            });
        }
        Ok(())
    }
}

fn wrap_fabric_event(event: FabricEvent) -> SystemEvent {
    match event {
        FabricEvent::ReconfigDone(e) => SystemEvent {
            at: e.finished_at,
            kind: EventKind::ReconfigDone(e),
        },
        FabricEvent::JobStarted { id, at, variant } => SystemEvent {
            at,
            kind: EventKind::JobStarted { id, variant },
        },
        FabricEvent::JobDone(c) => SystemEvent {
            at: c.completed_at,
            kind: EventKind::JobDone(c),
        },
    }
}
