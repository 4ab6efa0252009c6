//! The four round transformations and their inverses, operating on [`State`].

use super::{SBoxTables, State};
use crate::gf256;

/// First row of the column-mixing matrix; row r is this cycled right by r.
pub const MIX_MATRIX_ROW: [u8; 4] = [0x02, 0x03, 0x01, 0x01];

/// First row of the inverse matrix.
pub const INV_MIX_MATRIX_ROW: [u8; 4] = [0x0e, 0x0b, 0x0d, 0x09];

/// Replaces every state byte through the forward table. Bytes are
/// substituted in isolation; positions never interact.
pub fn sub_bytes(s: &State, t: &SBoxTables) -> State {
    map_bytes(s, &t.forward)
}

pub fn inv_sub_bytes(s: &State, t: &SBoxTables) -> State {
    map_bytes(s, &t.inverse)
}

fn map_bytes(s: &State, table: &[u8; 256]) -> State {
    let mut out = *s;
    for row in 0..4 {
        for col in 0..4 {
            out.set(row, col, table[s.get(row, col) as usize]);
        }
    }
    out
}

/// Cyclically shifts row r left by r positions; row 0 is untouched.
pub fn shift_rows(s: &State) -> State {
    let mut out = *s;
    for row in 1..4 {
        for col in 0..4 {
            out.set(row, col, s.get(row, (col + row) % 4));
        }
    }
    out
}

/// Cyclically shifts row r right by r positions.
pub fn inv_shift_rows(s: &State) -> State {
    let mut out = *s;
    for row in 1..4 {
        for col in 0..4 {
            out.set(row, (col + row) % 4, s.get(row, col));
        }
    }
    out
}

fn mix_single_column(col: [u8; 4], top_row: [u8; 4]) -> [u8; 4] {
    let mut out = [0u8; 4];
    for (r, slot) in out.iter_mut().enumerate() {
        // Row r of the matrix is the top row rotated right by r.
        for c in 0..4 {
            let coeff = top_row[(4 + c - r) % 4];
            *slot = gf256::add(*slot, gf256::mul(coeff, col[c]));
        }
    }
    out
}

/// Matrix form of the column mix: each column is replaced by the product of
/// the circulant {02,03,01,01} matrix with the column vector over GF(2^8).
pub fn mix_columns(s: &State) -> State {
    let mut out = *s;
    for c in 0..4 {
        out.set_column(c, mix_single_column(s.column(c), MIX_MATRIX_ROW));
    }
    out
}

pub fn inv_mix_columns(s: &State) -> State {
    let mut out = *s;
    for c in 0..4 {
        out.set_column(c, mix_single_column(s.column(c), INV_MIX_MATRIX_ROW));
    }
    out
}

/// Polynomial form of the same operation: treat the column as a cubic over
/// GF(2^8) (coefficient i from row i) and multiply by
/// a(x) = {03}x^3 + {01}x^2 + {01}x + {02}, reducing modulo x^4 + 1, where
/// x^(i+j) wraps to x^((i+j) mod 4).
pub fn mix_column_poly(col: [u8; 4]) -> [u8; 4] {
    let a = [0x02, 0x01, 0x01, 0x03]; // coefficients of a(x), low degree first
    let mut out = [0u8; 4];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &sj) in col.iter().enumerate() {
            let k = (i + j) % 4;
            out[k] = gf256::add(out[k], gf256::mul(ai, sj));
        }
    }
    out
}

/// XORs the 16-byte round key into the state, column by column.
pub fn add_round_key(s: &State, round_key: &[u8; 16]) -> State {
    let k = State::from_bytes(round_key);
    let mut out = *s;
    for row in 0..4 {
        for col in 0..4 {
            out.set(row, col, s.get(row, col) ^ k.get(row, col));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aes::build_sbox;

    fn state(bytes: [u8; 16]) -> State {
        State::from_bytes(&bytes)
    }

    #[test]
    fn sub_bytes_maps_position_wise() {
        let t = build_sbox();
        let zero = state([0u8; 16]);
        assert_eq!(sub_bytes(&zero, &t).to_bytes(), [0x63u8; 16]);

        // Distinct bytes stay in their slots.
        let distinct: [u8; 16] = core::array::from_fn(|i| i as u8 * 0x11);
        let out = sub_bytes(&state(distinct), &t).to_bytes();
        for (i, &b) in distinct.iter().enumerate() {
            assert_eq!(out[i], t.forward[b as usize]);
        }
    }

    #[test]
    fn sub_bytes_round_trip() {
        let t = build_sbox();
        let s = state(*b"0123456789abcdef");
        assert_eq!(inv_sub_bytes(&sub_bytes(&s, &t), &t), s);
    }

    #[test]
    fn shift_rows_semantics() {
        let mut s = State::from_bytes(&[0u8; 16]);
        for row in 0..4 {
            for col in 0..4 {
                s.set(row, col, (row * 4 + col) as u8);
            }
        }
        let out = shift_rows(&s);
        assert_eq!(out.row(0), s.row(0)); // row 0 untouched
        assert_eq!(out.row(1), [5, 6, 7, 4]); // [a,b,c,d] -> [b,c,d,a]
        assert_eq!(out.row(2), [10, 11, 8, 9]);
        assert_eq!(out.row(3), [15, 12, 13, 14]);
        assert_eq!(inv_shift_rows(&out), s);
    }

    #[test]
    fn mix_columns_known_column() {
        let col = [0xdb, 0x13, 0x53, 0x45];
        assert_eq!(
            mix_single_column(col, MIX_MATRIX_ROW),
            [0x8e, 0x4d, 0xa1, 0xbc]
        );
        assert_eq!(mix_single_column([0; 4], MIX_MATRIX_ROW), [0; 4]);
    }

    #[test]
    fn matrix_and_polynomial_paths_agree_on_known_column() {
        let col = [0xdb, 0x13, 0x53, 0x45];
        assert_eq!(mix_column_poly(col), mix_single_column(col, MIX_MATRIX_ROW));
    }

    #[test]
    fn mix_matrix_times_inverse_is_identity() {
        // Entry (r, c) of the product of the two circulant matrices.
        for r in 0..4 {
            for c in 0..4 {
                let mut acc = 0u8;
                for k in 0..4 {
                    let m = MIX_MATRIX_ROW[(4 + k - r) % 4];
                    let n = INV_MIX_MATRIX_ROW[(4 + c - k) % 4];
                    acc = gf256::add(acc, gf256::mul(m, n));
                }
                assert_eq!(acc, if r == c { 1 } else { 0 }, "entry ({r},{c})");
            }
        }
    }

    #[test]
    fn add_round_key_is_an_involution() {
        let s = state(*b"victoria sponge!");
        let rk = *b"0123456789abcdef";
        let once = add_round_key(&s, &rk);
        assert_ne!(once, s);
        assert_eq!(add_round_key(&once, &rk), s);
        assert_eq!(add_round_key(&s, &[0u8; 16]), s);
        assert_eq!(
            add_round_key(&state(rk), &rk).to_bytes(),
            [0u8; 16] // state equal to the key cancels to zero
        );
    }
}
