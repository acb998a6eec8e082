//! Small finite fields GF(q) for q in {2, 3, 4, 5, 7, 8}.
//!
//! Prime fields use residues mod q. GF(4) and GF(8) store polynomials over
//! GF(2) as bit patterns, reduced by x^2+x+1 and x^3+x+1 respectively.

use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const SUPPORTED_FIELDS: [u32; 6] = [2, 3, 4, 5, 7, 8];

/// Arithmetic tables for one field. Elements are `0..q`.
#[derive(Debug, PartialEq, Eq)]
pub struct Field {
    q: u8,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

fn clmul_mod(mut a: u8, mut b: u8, modulus: u8, degree: u32) -> u8 {
    let mut out = 0u8;
    while b != 0 {
        if b & 1 == 1 {
            out ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> degree & 1 == 1 {
            a ^= modulus;
        }
    }
    out
}

impl Field {
    fn build(q: u8) -> Field {
        let n = q as usize;
        let extension = match q {
            4 => Some((0b111u8, 2)),
            8 => Some((0b1011u8, 3)),
            _ => None,
        };
        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        for a in 0..q {
            for b in 0..q {
                let i = a as usize * n + b as usize;
                match extension {
                    Some((modulus, degree)) => {
                        add[i] = a ^ b;
                        mul[i] = clmul_mod(a, b, modulus, degree);
                    }
                    None => {
                        add[i] = ((a as u16 + b as u16) % q as u16) as u8;
                        mul[i] = ((a as u16 * b as u16) % q as u16) as u8;
                    }
                }
            }
        }
        let neg = (0..q)
            .map(|a| (0..q).find(|&b| add[a as usize * n + b as usize] == 0).expect("additive inverse"))
            .collect();
        let inv = (0..q)
            .map(|a| (1..q).find(|&b| mul[a as usize * n + b as usize] == 1).unwrap_or(0))
            .collect();
        Field { q, add, mul, neg, inv }
    }

    /// Shared tables for GF(q); errors for sizes outside [`SUPPORTED_FIELDS`].
    pub fn get(q: u32) -> Result<&'static Field> {
        static TABLES: OnceLock<Vec<Field>> = OnceLock::new();
        let tables = TABLES.get_or_init(|| SUPPORTED_FIELDS.iter().map(|&q| Field::build(q as u8)).collect());
        SUPPORTED_FIELDS
            .iter()
            .position(|&s| s == q)
            .map(|i| &tables[i])
            .ok_or(Error::UnsupportedField(q))
    }

    pub fn size(&self) -> u32 {
        self.q as u32
    }

    pub fn characteristic(&self) -> u32 {
        match self.q {
            4 | 8 => 2,
            q => q as u32,
        }
    }

    pub fn contains(&self, a: u8) -> bool {
        a < self.q
    }

    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u8) -> Option<u8> {
        (a != 0).then(|| self.inv[a as usize])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms_hold() {
        for q in SUPPORTED_FIELDS {
            let f = Field::get(q).unwrap();
            let q = q as u8;
            for a in 0..q {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                for b in 0..q {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..q {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                        assert_eq!(f.add(a, f.add(b, c)), f.add(f.add(a, b), c));
                    }
                }
            }
        }
    }

    #[test]
    fn characteristic_two_negation_is_identity() {
        for q in [2, 4, 8] {
            let f = Field::get(q).unwrap();
            assert_eq!(f.characteristic(), 2);
            assert!((0..q as u8).all(|a| f.neg(a) == a));
        }
        assert_eq!(Field::get(3).unwrap().neg(1), 2);
    }

    #[test]
    fn unsupported_sizes() {
        for q in [0, 1, 6, 9, 16] {
            assert_eq!(Field::get(q), Err(Error::UnsupportedField(q)));
        }
    }
}
