//! Small finite fields F_p and F_{p^2} = F_p[s]/(s^2 - d), used as reduction
//! targets for torsion bounding and for the genus-2 Jacobian computations.

use crate::arith::{inv_mod_u64, mul_mod_u64, sqrt_mod_p};
use crate::field::FieldElem;
use std::fmt;

/// Element of F_p (deg 1) or F_{p^2} (deg 2). Coordinates are reduced mod p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FFElem {
    p: u64,
    /// For degree-2 elements: the non-residue d with s^2 = d. None for F_p.
    ext: Option<u64>,
    c0: u64,
    c1: u64,
}

impl FFElem {
    pub fn prime_field(p: u64, c0: u64) -> FFElem {
        FFElem {
            p,
            ext: None,
            c0: c0 % p,
            c1: 0,
        }
    }

    pub fn quadratic(p: u64, d: u64, c0: u64, c1: u64) -> FFElem {
        FFElem {
            p,
            ext: Some(d % p),
            c0: c0 % p,
            c1: c1 % p,
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u8 {
        if self.ext.is_some() {
            2
        } else {
            1
        }
    }

    /// Size of the ambient field.
    pub fn q(&self) -> u64 {
        match self.ext {
            Some(_) => self.p * self.p,
            None => self.p,
        }
    }

    pub fn coords(&self) -> (u64, u64) {
        (self.c0, self.c1)
    }

    fn same_field(&self, other: &FFElem) -> bool {
        self.p == other.p && self.ext == other.ext
    }

    /// All elements of the same ambient field, in a fixed order.
    pub fn enumerate_field(&self) -> Vec<FFElem> {
        let mut out = Vec::with_capacity(self.q() as usize);
        match self.ext {
            None => {
                for c0 in 0..self.p {
                    out.push(FFElem::prime_field(self.p, c0));
                }
            }
            Some(d) => {
                for c1 in 0..self.p {
                    for c0 in 0..self.p {
                        out.push(FFElem::quadratic(self.p, d, c0, c1));
                    }
                }
            }
        }
        out
    }

    /// Frobenius x -> x^p (identity on F_p, conjugation on F_{p^2}).
    pub fn frobenius(&self) -> FFElem {
        match self.ext {
            None => *self,
            Some(d) => FFElem::quadratic(self.p, d, self.c0, self.p - self.c1 % self.p),
        }
    }
}

impl fmt::Display for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.ext {
            None => write!(f, "{}", self.c0),
            Some(_) => write!(f, "{}+{}*s", self.c0, self.c1),
        }
    }
}

impl FieldElem for FFElem {
    fn zero_like(&self) -> Self {
        FFElem {
            c0: 0,
            c1: 0,
            ..*self
        }
    }

    fn one_like(&self) -> Self {
        FFElem {
            c0: 1 % self.p,
            c1: 0,
            ..*self
        }
    }

    fn from_i64_like(&self, n: i64) -> Self {
        FFElem {
            c0: n.rem_euclid(self.p as i64) as u64,
            c1: 0,
            ..*self
        }
    }

    fn add(&self, other: &Self) -> Self {
        debug_assert!(self.same_field(other));
        FFElem {
            c0: (self.c0 + other.c0) % self.p,
            c1: (self.c1 + other.c1) % self.p,
            ..*self
        }
    }

    fn sub(&self, other: &Self) -> Self {
        debug_assert!(self.same_field(other));
        FFElem {
            c0: (self.c0 + self.p - other.c0) % self.p,
            c1: (self.c1 + self.p - other.c1) % self.p,
            ..*self
        }
    }

    fn mul(&self, other: &Self) -> Self {
        debug_assert!(self.same_field(other));
        let p = self.p;
        match self.ext {
            None => FFElem {
                c0: mul_mod_u64(self.c0, other.c0, p),
                c1: 0,
                ..*self
            },
            Some(d) => {
                // (a + b s)(c + e s) = ac + be*d + (ae + bc) s
                let ac = mul_mod_u64(self.c0, other.c0, p);
                let be = mul_mod_u64(self.c1, other.c1, p);
                let ae = mul_mod_u64(self.c0, other.c1, p);
                let bc = mul_mod_u64(self.c1, other.c0, p);
                FFElem {
                    c0: (ac + mul_mod_u64(be, d, p)) % p,
                    c1: (ae + bc) % p,
                    ..*self
                }
            }
        }
    }

    fn neg(&self) -> Self {
        FFElem {
            c0: (self.p - self.c0 % self.p) % self.p,
            c1: (self.p - self.c1 % self.p) % self.p,
            ..*self
        }
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let p = self.p;
        match self.ext {
            None => inv_mod_u64(self.c0, p).map(|c0| FFElem { c0, c1: 0, ..*self }),
            Some(d) => {
                // 1/(a + b s) = (a - b s)/(a^2 - d b^2)
                let nrm = (mul_mod_u64(self.c0, self.c0, p) + p * p
                    - mul_mod_u64(mul_mod_u64(self.c1, self.c1, p), d, p))
                    % p;
                let ninv = inv_mod_u64(nrm, p)?;
                Some(FFElem {
                    c0: mul_mod_u64(self.c0, ninv, p),
                    c1: mul_mod_u64((p - self.c1 % p) % p, ninv, p),
                    ..*self
                })
            }
        }
    }

    fn is_zero(&self) -> bool {
        self.c0 == 0 && self.c1 == 0
    }

    fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(*self);
        }
        match self.ext {
            None => sqrt_mod_p(self.c0, self.p).map(|r| FFElem {
                c0: r.min(self.p - r),
                c1: 0,
                ..*self
            }),
            Some(_) => {
                // Fields here have at most ~10^4 elements; scan.
                for cand in self.enumerate_field() {
                    if cand.mul(&cand) == *self {
                        return Some(cand);
                    }
                }
                None
            }
        }
    }

    fn canon_string(&self) -> String {
        match self.ext {
            None => format!("{}", self.c0),
            Some(_) => format!("{}+{}*s", self.c0, self.c1),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_ops() {
        let a = FFElem::prime_field(7, 3);
        let b = FFElem::prime_field(7, 5);
        assert_eq!(a.add(&b), FFElem::prime_field(7, 1));
        assert_eq!(a.mul(&b), FFElem::prime_field(7, 1));
        assert_eq!(a.inv().unwrap().mul(&a), a.one_like());
        assert_eq!(a.sub(&b), FFElem::prime_field(7, 5));
    }

    #[test]
    fn quadratic_field_axioms() {
        // F_9 = F_3[s]/(s^2 - 2)
        let gen = FFElem::quadratic(3, 2, 0, 1);
        let all = gen.enumerate_field();
        assert_eq!(all.len(), 9);
        for x in &all {
            for y in &all {
                assert_eq!(x.add(y), y.add(x));
                assert_eq!(x.mul(y), y.mul(x));
                for z in &all {
                    assert_eq!(x.mul(&y.add(z)), x.mul(y).add(&x.mul(z)));
                }
            }
            if !x.is_zero() {
                assert_eq!(x.mul(&x.inv().unwrap()), x.one_like());
                // Multiplicative group of F_9 has order 8.
                assert!(x.pow_u32(8).is_one());
            }
        }
    }

    #[test]
    fn sqrt_in_extension() {
        let gen = FFElem::quadratic(5, 3, 0, 1); // F_25, s^2 = 3
        for x in gen.enumerate_field() {
            let sq = x.mul(&x);
            let r = sq.sqrt().expect("squares have roots");
            assert_eq!(r.mul(&r), sq);
        }
    }
}
