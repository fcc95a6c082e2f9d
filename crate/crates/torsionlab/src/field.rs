//! A small field-element abstraction so the curve engines can run over
//! K = Q(sqrt(D)), L = K(sqrt(d)) and small finite fields with one code path.
//!
//! Elements carry their ambient-field context, so "zero of the same field"
//! is derived from an existing element rather than a type-level constant.

/// Exact field element. All operations are pure; `sqrt` returns the
/// canonical representative when a square root exists in the field.
pub trait FieldElem: Clone + PartialEq + std::fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_i64_like(&self, n: i64) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// None exactly when self is zero.
    fn inv(&self) -> Option<Self>;
    fn is_zero(&self) -> bool;
    /// Canonical square root if one exists in this field.
    fn sqrt(&self) -> Option<Self>;
    /// Deterministic rendering, also used as a sort key for stable output.
    fn canon_string(&self) -> String;

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }

    fn is_one(&self) -> bool {
        !self.is_zero() && *self == self.one_like()
    }

    fn square(&self) -> Self {
        self.mul(self)
    }

    fn pow_u32(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}
