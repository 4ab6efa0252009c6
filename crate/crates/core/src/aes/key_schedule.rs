//! Key expansion: Nk raw key words grown to 4*(Nr+1) words by the rotate /
//! substitute / round-constant recurrence, with the extra SubWord step for
//! 256-bit keys.

use super::{tables, AesError, CipherVariant};
use crate::gf256;

/// Round constant for index i (1-based): {02}^(i-1) in the field, placed in
/// the top byte of the word.
pub fn rcon(i: usize) -> u32 {
    let mut byte = 0x01u8;
    for _ in 1..i {
        byte = gf256::xtime(byte);
    }
    (byte as u32) << 24
}

/// Expanded round keys for one cipher key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeySchedule {
    variant: CipherVariant,
    round_keys: Vec<[u8; 16]>,
}

impl KeySchedule {
    pub fn variant(&self) -> CipherVariant {
        self.variant
    }

    /// Nr + 1 keys; index 0 is the raw key's first 16 bytes.
    pub fn round_keys(&self) -> &[[u8; 16]] {
        &self.round_keys
    }

    pub fn round_key(&self, round: usize) -> &[u8; 16] {
        &self.round_keys[round]
    }
}

fn sub_word(w: u32) -> u32 {
    let t = tables();
    let b = w.to_be_bytes();
    u32::from_be_bytes([
        t.forward[b[0] as usize],
        t.forward[b[1] as usize],
        t.forward[b[2] as usize],
        t.forward[b[3] as usize],
    ])
}

/// Expands `key` for `variant`; the key length must match the variant.
pub fn key_expansion(key: &[u8], variant: CipherVariant) -> Result<KeySchedule, AesError> {
    if key.len() != variant.key_len() {
        return Err(AesError::KeyLength {
            variant,
            got: key.len(),
            want: variant.key_len(),
        });
    }

    let nk = variant.nk();
    let total_words = 4 * (variant.nr() + 1);
    let mut w: Vec<u32> = key
        .chunks_exact(4)
        .map(|c| u32::from_be_bytes([c[0], c[1], c[2], c[3]]))
        .collect();

    for i in nk..total_words {
        let mut temp = w[i - 1];
        if i % nk == 0 {
            temp = sub_word(temp.rotate_left(8)) ^ rcon(i / nk);
        } else if nk > 6 && i % nk == 4 {
            temp = sub_word(temp);
        }
        w.push(w[i - nk] ^ temp);
    }

    let round_keys = w
        .chunks_exact(4)
        .map(|four| {
            let mut rk = [0u8; 16];
            for (c, word) in four.iter().enumerate() {
                rk[4 * c..4 * c + 4].copy_from_slice(&word.to_be_bytes());
            }
            rk
        })
        .collect();

    Ok(KeySchedule {
        variant,
        round_keys,
    })
}
