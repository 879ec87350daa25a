//! Arithmetic over prime fields GF(p), the alphabet for all codes.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("operands belong to different fields (GF({0}) vs GF({1}))")]
    FieldMismatch(u64, u64),
    #[error("division by zero in GF({0})")]
    DivisionByZero(u64),
    #[error("invalid alpha: alpha must lie outside {{0,1}} and the field must have at least 3 elements")]
    InvalidAlpha,
}

/// A prime field GF(p). Primality is checked at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, GfError> {
        if is_prime(p) {
            Ok(PrimeField { p })
        } else {
            Err(GfError::NotPrime(p))
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Canonical representative of an arbitrary integer.
    pub fn reduce(&self, v: u64) -> u64 {
        v % self.p
    }

    pub fn elem(&self, v: u64) -> FieldElement {
        FieldElement { value: v % self.p, p: self.p }
    }

    pub fn zero(&self) -> FieldElement {
        self.elem(0)
    }

    pub fn one(&self) -> FieldElement {
        self.elem(1)
    }

    /// All field elements in ascending value order.
    pub fn elements(self) -> impl Iterator<Item = FieldElement> {
        (0..self.p).map(move |v| self.elem(v))
    }

    // Raw-value arithmetic used by evaluation/search inner loops. Inputs must
    // already be canonical representatives.
    pub fn add_raw(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub_raw(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    pub fn mul_raw(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn neg_raw(&self, a: u64) -> u64 {
        (self.p - a) % self.p
    }

    pub fn pow_raw(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }

    pub fn inv_raw(&self, a: u64) -> Result<u64, GfError> {
        if a.is_multiple_of(self.p) {
            return Err(GfError::DivisionByZero(self.p));
        }
        // Fermat: a^(p-2) is the inverse for prime p.
        Ok(self.pow_raw(a, self.p - 2))
    }
}

/// An element of GF(p) in canonical form (value in [0, p)).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    value: u64,
    p: u64,
}

impl FieldElement {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn field(&self) -> PrimeField {
        PrimeField { p: self.p }
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_field(&self, other: &FieldElement) -> Result<PrimeField, GfError> {
        if self.p == other.p {
            Ok(PrimeField { p: self.p })
        } else {
            Err(GfError::FieldMismatch(self.p, other.p))
        }
    }

    pub fn add(&self, other: FieldElement) -> Result<FieldElement, GfError> {
        let f = self.same_field(&other)?;
        Ok(f.elem(f.add_raw(self.value, other.value)))
    }

    pub fn sub(&self, other: FieldElement) -> Result<FieldElement, GfError> {
        let f = self.same_field(&other)?;
        Ok(f.elem(f.sub_raw(self.value, other.value)))
    }

    pub fn mul(&self, other: FieldElement) -> Result<FieldElement, GfError> {
        let f = self.same_field(&other)?;
        Ok(f.elem(f.mul_raw(self.value, other.value)))
    }

    pub fn neg(&self) -> FieldElement {
        let f = PrimeField { p: self.p };
        f.elem(f.neg_raw(self.value))
    }

    pub fn inv(&self) -> Result<FieldElement, GfError> {
        let f = PrimeField { p: self.p };
        Ok(f.elem(f.inv_raw(self.value)?))
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Derive the companion constants for an admissible mixing coefficient α:
/// β = (1−α)⁻¹ and γ = 1 − α⁻¹.
///
/// Requires p ≥ 3 and α ∉ {0,1}; over GF(2) no admissible α exists.
pub fn alpha_constants(
    field: PrimeField,
    alpha: FieldElement,
) -> Result<(FieldElement, FieldElement), GfError> {
    if alpha.field() != field {
        return Err(GfError::FieldMismatch(field.modulus(), alpha.field().modulus()));
    }
    if field.modulus() < 3 || alpha.value() == 0 || alpha.value() == 1 {
        return Err(GfError::InvalidAlpha);
    }
    let one = field.one();
    let beta = one.sub(alpha)?.inv()?;
    let gamma = one.sub(alpha.inv()?)?;
    Ok((beta, gamma))
}

/// All admissible α values for a field: everything outside {0,1}.
pub fn admissible_alphas(field: PrimeField) -> impl Iterator<Item = FieldElement> {
    field.elements().filter(|a| a.value() > 1)
}
