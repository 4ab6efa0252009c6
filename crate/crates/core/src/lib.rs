//! A from-scratch AES core (128/192/256) together with a cycle-level
//! simulator of a self-reconfiguring crypto coprocessor: one static region
//! that keeps running, one reconfigurable slot swapped between AES variants
//! under a small configuration-controller FSM, and an analytic performance
//! model tied to published reference measurements.
//!
//! Module map:
//!
//! * [`gf256`]: byte-level arithmetic in GF(2^8);
//! * [`aes`]: S-box construction, round transformations, key schedule,
//!   block encrypt/decrypt;
//! * [`fabric`]: the simulated chip: job queue, swap windows, cycle costs;
//! * [`controller`]: the reconfiguration FSM and parameter pipeline;
//! * [`system`]: the deterministic loop driving controller plus fabric;
//! * [`perf`]: cycle/throughput/TPS model and the comparison report.

pub mod aes;
pub mod controller;
pub mod fabric;
pub mod gf256;
pub mod perf;
pub mod system;
