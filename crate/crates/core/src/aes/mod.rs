//! The block cipher itself: S-box construction from field inversion plus an
//! affine bit-matrix, the four round transformations and their inverses, the
//! key schedule, and single-block encryption/decryption for the three key
//! sizes.

mod cipher;
mod key_schedule;
mod sbox;
mod transform;

pub use cipher::{apply_blocks, decrypt_block, encrypt_block, encrypt_block_traced, RoundTrace};
pub use key_schedule::{key_expansion, rcon, KeySchedule};
pub use sbox::{affine_transform, build_sbox, inv_affine_transform, tables, SBoxTables};
pub use transform::{
    add_round_key, inv_mix_columns, inv_shift_rows, inv_sub_bytes, mix_column_poly, mix_columns,
    shift_rows, sub_bytes, INV_MIX_MATRIX_ROW, MIX_MATRIX_ROW,
};

use serde::{Deserialize, Serialize};

pub const BLOCK_BYTES: usize = 16;

/// The three standardized key sizes and their (Nk, Nr) parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CipherVariant {
    Aes128,
    Aes192,
    Aes256,
}

impl CipherVariant {
    pub const ALL: [CipherVariant; 3] = [
        CipherVariant::Aes128,
        CipherVariant::Aes192,
        CipherVariant::Aes256,
    ];

    pub fn key_bits(self) -> u16 {
        match self {
            CipherVariant::Aes128 => 128,
            CipherVariant::Aes192 => 192,
            CipherVariant::Aes256 => 256,
        }
    }

    /// Words in the key (Nk).
    pub fn nk(self) -> usize {
        self.key_bits() as usize / 32
    }

    /// Round count (Nr).
    pub fn nr(self) -> usize {
        match self {
            CipherVariant::Aes128 => 10,
            CipherVariant::Aes192 => 12,
            CipherVariant::Aes256 => 14,
        }
    }

    pub fn key_len(self) -> usize {
        self.key_bits() as usize / 8
    }

    pub fn from_key_bits(bits: u16) -> Result<Self, AesError> {
        match bits {
            128 => Ok(CipherVariant::Aes128),
            192 => Ok(CipherVariant::Aes192),
            256 => Ok(CipherVariant::Aes256),
            _ => Err(AesError::UnsupportedKeyBits(bits)),
        }
    }
}

impl std::fmt::Display for CipherVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "AES-{}", self.key_bits())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AesError {
    #[error("unsupported key size: {0} bits (expected 128, 192 or 256)")]
    UnsupportedKeyBits(u16),
    #[error("key is {got} bytes but {variant} needs {want}")]
    KeyLength {
        variant: CipherVariant,
        got: usize,
        want: usize,
    },
    #[error("data length {0} is not a multiple of the 16-byte block size")]
    NotBlockAligned(usize),
}

/// One 128-bit block as the 4x4 byte matrix the round functions operate on.
/// Input byte i lands at row i % 4, column i / 4 (column-major).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct State {
    bytes: [[u8; 4]; 4],
}

impl State {
    pub fn from_bytes(block: &[u8; 16]) -> Self {
        let mut bytes = [[0u8; 4]; 4];
        for (i, &b) in block.iter().enumerate() {
            bytes[i % 4][i / 4] = b;
        }
        State { bytes }
    }

    pub fn to_bytes(self) -> [u8; 16] {
        let mut out = [0u8; 16];
        for (i, b) in out.iter_mut().enumerate() {
            *b = self.bytes[i % 4][i / 4];
        }
        out
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.bytes[row][col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: u8) {
        self.bytes[row][col] = value;
    }

    pub fn row(&self, r: usize) -> [u8; 4] {
        self.bytes[r]
    }

    pub fn column(&self, c: usize) -> [u8; 4] {
        [
            self.bytes[0][c],
            self.bytes[1][c],
            self.bytes[2][c],
            self.bytes[3][c],
        ]
    }

    pub fn set_column(&mut self, c: usize, col: [u8; 4]) {
        for (r, &b) in col.iter().enumerate() {
            self.bytes[r][c] = b;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variant_parameters() {
        assert_eq!(CipherVariant::Aes128.nk(), 4);
        assert_eq!(CipherVariant::Aes128.nr(), 10);
        assert_eq!(CipherVariant::Aes192.nk(), 6);
        assert_eq!(CipherVariant::Aes192.nr(), 12);
        assert_eq!(CipherVariant::Aes256.nk(), 8);
        assert_eq!(CipherVariant::Aes256.nr(), 14);
        assert!(CipherVariant::from_key_bits(512).is_err());
    }

    #[test]
    fn state_mapping_is_column_major() {
        let block: [u8; 16] = [
            0x00, 0x11, 0x22, 0x33, 0x44, 0x55, 0x66, 0x77, 0x88, 0x99, 0xaa, 0xbb, 0xcc, 0xdd,
            0xee, 0xff,
        ];
        let s = State::from_bytes(&block);
        // Column 0 holds the first four bytes, row 0 every fourth byte.
        assert_eq!(s.column(0), [0x00, 0x11, 0x22, 0x33]);
        assert_eq!(s.row(0), [0x00, 0x44, 0x88, 0xcc]);
        assert_eq!(s.to_bytes(), block);
    }
}
