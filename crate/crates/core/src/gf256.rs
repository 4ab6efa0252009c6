//! Arithmetic in GF(2^8) with the Rijndael reduction polynomial
//! x^8 + x^4 + x^3 + x + 1 (0x11b). Bytes are field elements directly:
//! bit i of the byte is the coefficient of x^i, and every value 0x00-0xff
//! is valid.

/// Low eight bits of the reduction polynomial; XORed in whenever a product
/// overflows past x^7, since x^8 = x^4 + x^3 + x + 1 (mod 0x11b).
pub const REDUCTION: u8 = 0x1b;

/// Field addition: carry-less, so plain XOR. Every element is its own
/// additive inverse.
#[inline]
pub fn add(a: u8, b: u8) -> u8 {
    a ^ b
}

/// Multiplication by x (i.e. `mul(a, 0x02)`): shift left and reduce.
#[inline]
pub fn xtime(a: u8) -> u8 {
    if a & 0x80 == 0 {
        a << 1
    } else {
        (a << 1) ^ REDUCTION
    }
}

/// Field multiplication by shift-and-add: for each set bit of `b`, add the
/// matching x^i multiple of `a`, reducing as the powers are built up.
pub fn mul(a: u8, b: u8) -> u8 {
    let mut acc = 0;
    let mut a = a;
    let mut b = b;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a;
        }
        a = xtime(a);
        b >>= 1;
    }
    acc
}

/// Multiplicative inverse via Fermat: a^254 = a^-1 for nonzero a, and
/// 0^254 = 0, which gives the conventional 0x00 -> 0x00 mapping without a
/// special case.
pub fn inv(a: u8) -> u8 {
    // 254 = 0b1111_1110, square-and-multiply from the top bit down.
    let mut acc = 1;
    for bit in (0..8).rev() {
        acc = mul(acc, acc);
        if (254 >> bit) & 1 == 1 {
            acc = mul(acc, a);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    // Schoolbook oracle: widen to u16, multiply carry-less, then cancel the
    // high-degree terms one at a time against the full modulus 0x11b.
    fn clmul(a: u8, b: u8) -> u16 {
        let mut p = 0u16;
        for i in 0..8 {
            if (b >> i) & 1 == 1 {
                p ^= (a as u16) << i;
            }
        }
        p
    }

    fn reduce(mut p: u16) -> u8 {
        for deg in (8..16).rev() {
            if (p >> deg) & 1 == 1 {
                p ^= 0x11b << (deg - 8);
            }
        }
        p as u8
    }

    fn mul_oracle(a: u8, b: u8) -> u8 {
        reduce(clmul(a, b))
    }

    fn inv_oracle(a: u8) -> u8 {
        if a == 0 {
            return 0;
        }
        (0..=255u8).find(|&b| mul_oracle(a, b) == 1).unwrap()
    }

    #[test]
    fn add_examples() {
        assert_eq!(add(0x00, 0x00), 0x00);
        assert_eq!(add(0x57, 0x83), 0xd4);
        for a in 0..=255u8 {
            assert_eq!(add(a, 0x00), a);
            assert_eq!(add(a, a), 0x00);
        }
    }

    #[test]
    fn mul_examples() {
        assert_eq!(mul(0x02, 0x80), 0x1b);
        assert_eq!(mul(0x57, 0x13), 0xfe);
        for a in 0..=255u8 {
            assert_eq!(mul(a, 0x01), a);
        }
    }

    #[test]
    fn mul_matches_schoolbook_oracle_exhaustively() {
        for a in 0..=255u8 {
            for b in 0..=255u8 {
                assert_eq!(mul(a, b), mul_oracle(a, b), "a={a:#04x} b={b:#04x}");
            }
        }
    }

    #[test]
    fn xtime_examples_and_equivalence() {
        assert_eq!(xtime(0x00), 0x00);
        assert_eq!(xtime(0x01), 0x02);
        assert_eq!(xtime(0x80), 0x1b);
        for a in 0..=255u8 {
            assert_eq!(xtime(a), mul(a, 0x02));
        }
    }

    #[test]
    fn inv_examples() {
        assert_eq!(inv(0x00), 0x00);
        assert_eq!(inv(0x01), 0x01);
        assert_eq!(inv(0x02), 0x8d);
    }

    #[test]
    fn inv_matches_exhaustive_search_oracle() {
        for a in 0..=255u8 {
            assert_eq!(inv(a), inv_oracle(a), "a={a:#04x}");
        }
    }

    #[test]
    fn all_nonzero_elements_invert_to_one() {
        for a in 1..=255u8 {
            assert_eq!(mul(a, inv(a)), 0x01, "a={a:#04x}");
        }
    }

    #[test]
    fn commutativity_exhaustive() {
        for a in 0..=255u8 {
            for b in 0..=255u8 {
                assert_eq!(mul(a, b), mul(b, a));
            }
        }
    }

    // Full 256^3 is slow under the default debug profile; a fixed-stride
    // sweep still covers ~2M triples deterministically.
    #[test]
    fn associativity_and_distributivity_sampled() {
        let values: Vec<u8> = (0..=255u8).collect();
        for &a in values.iter().step_by(2) {
            for &b in values.iter().step_by(4) {
                for &c in values.iter().step_by(8) {
                    assert_eq!(mul(mul(a, b), c), mul(a, mul(b, c)));
                    assert_eq!(mul(a, add(b, c)), add(mul(a, b), mul(a, c)));
                }
            }
        }
    }
}
