//! Block encryption and decryption round structure.

use super::{
    add_round_key, inv_mix_columns, inv_shift_rows, inv_sub_bytes, mix_columns, shift_rows,
    sub_bytes, tables, KeySchedule, State,
};

/// Counts of what one encryption actually executed; used to pin the round
/// structure in tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RoundTrace {
    /// Rounds performed (full rounds plus the final round).
    pub rounds: u32,
    /// Round-key additions, including the initial one.
    pub key_additions: u32,
}

/// Encrypts one block: initial key addition, Nr-1 full rounds, then a final
/// round without the column mix.
pub fn encrypt_block(block: &[u8; 16], ks: &KeySchedule) -> [u8; 16] {
    encrypt_block_traced(block, ks).0
}

/// Same as [`encrypt_block`] but also reports the executed round structure.
pub fn encrypt_block_traced(block: &[u8; 16], ks: &KeySchedule) -> ([u8; 16], RoundTrace) {
    let t = tables();
    let nr = ks.variant().nr();
    let mut trace = RoundTrace::default();

    let mut s = State::from_bytes(block);
    s = add_round_key(&s, ks.round_key(0));
    trace.key_additions += 1;

    for round in 1..nr {
        s = sub_bytes(&s, t);
        s = shift_rows(&s);
        s = mix_columns(&s);
        s = add_round_key(&s, ks.round_key(round));
        trace.rounds += 1;
        trace.key_additions += 1;
    }

    s = sub_bytes(&s, t);
    s = shift_rows(&s);
    s = add_round_key(&s, ks.round_key(nr));
    trace.rounds += 1;
    trace.key_additions += 1;

    (s.to_bytes(), trace)
}

/// Inverts [`encrypt_block`] by running the inverse transformations in
/// reverse order.
pub fn decrypt_block(block: &[u8; 16], ks: &KeySchedule) -> [u8; 16] {
    let t = tables();
    let nr = ks.variant().nr();

    let mut s = State::from_bytes(block);
    s = add_round_key(&s, ks.round_key(nr));
    s = inv_shift_rows(&s);
    s = inv_sub_bytes(&s, t);

    for round in (1..nr).rev() {
        s = add_round_key(&s, ks.round_key(round));
        s = inv_mix_columns(&s);
        s = inv_shift_rows(&s);
        s = inv_sub_bytes(&s, t);
    }

    s = add_round_key(&s, ks.round_key(0));
    s.to_bytes()
}

/// Block-by-block application over a sequence (codebook mode, no chaining).
pub fn apply_blocks(blocks: &[[u8; 16]], ks: &KeySchedule, decrypt: bool) -> Vec<[u8; 16]> {
    blocks
        .iter()
        .map(|b| {
            if decrypt {
                decrypt_block(b, ks)
            } else {
                encrypt_block(b, ks)
            }
        })
        .collect()
}
