//! S-box construction: multiplicative inverse in GF(2^8) followed by an
//! affine transformation over GF(2).

use std::sync::OnceLock;

use crate::gf256;

/// Row masks of the 8x8 affine bit matrix. Row i selects bits
/// {i, i+4, i+5, i+6, i+7} (mod 8) of the input byte.
const AFFINE_ROWS: [u8; 8] = [0xf1, 0xe3, 0xc7, 0x8f, 0x1f, 0x3e, 0x7c, 0xf8];

/// The affine constant {63}.
const AFFINE_CONST: u8 = 0x63;

/// Rows of the inverse matrix: bit i of the output selects bits
/// {i+2, i+5, i+7} (mod 8), with constant {05}.
const INV_AFFINE_ROWS: [u8; 8] = [0xa4, 0x49, 0x92, 0x25, 0x4a, 0x94, 0x29, 0x52];
const INV_AFFINE_CONST: u8 = 0x05;

fn bit_matrix_apply(rows: &[u8; 8], constant: u8, b: u8) -> u8 {
    let mut out = 0u8;
    for (i, &row) in rows.iter().enumerate() {
        out |= ((b & row).count_ones() as u8 & 1) << i;
    }
    out ^ constant
}

/// Applies the fixed affine bit-matrix to `b` and adds the constant {63}.
/// Maps 0x00 to 0x63.
pub fn affine_transform(b: u8) -> u8 {
    bit_matrix_apply(&AFFINE_ROWS, AFFINE_CONST, b)
}

/// Inverse of [`affine_transform`]; the matrix is the GF(2) inverse of the
/// forward one.
pub fn inv_affine_transform(b: u8) -> u8 {
    bit_matrix_apply(&INV_AFFINE_ROWS, INV_AFFINE_CONST, b)
}

/// Forward and inverse substitution tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SBoxTables {
    pub forward: [u8; 256],
    pub inverse: [u8; 256],
}

/// Builds both tables: forward[b] = affine(inv(b)), inverse as the exact
/// permutation inverse of forward.
pub fn build_sbox() -> SBoxTables {
    let mut forward = [0u8; 256];
    let mut inverse = [0u8; 256];
    for b in 0..=255u8 {
        forward[b as usize] = affine_transform(gf256::inv(b));
    }
    for b in 0..=255usize {
        inverse[forward[b] as usize] = b as u8;
    }
    SBoxTables { forward, inverse }
}

/// Process-wide tables, derived once on first use.
pub fn tables() -> &'static SBoxTables {
    static TABLES: OnceLock<SBoxTables> = OnceLock::new();
    TABLES.get_or_init(build_sbox)
}
