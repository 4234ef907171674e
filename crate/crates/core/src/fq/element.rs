use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use super::{make_field, Field};
use crate::error::{Error, Result};

/// An element of a [`Field`]. Arithmetic between elements of different fields
/// panics; use [`super::embed`] to move elements first.
#[derive(Clone)]
pub struct FieldElement {
    field: Field,
    value: u32,
}

impl FieldElement {
    pub(crate) fn from_raw(field: &Field, value: u32) -> FieldElement {
        debug_assert!((value as u64) < field.order());
        FieldElement {
            field: field.clone(),
            value,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Encoded value `sum c_i p^i`.
    pub fn value(&self) -> u32 {
        self.value
    }

    /// Residue coefficients, constant term first.
    pub fn coeffs(&self) -> Vec<u32> {
        self.field.digits(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn is_one(&self) -> bool {
        self.value == 1
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        FieldElement::from_raw(&self.field, self.field.pow_raw(self.value, e))
    }

    pub fn inv(&self) -> Option<FieldElement> {
        self.field
            .inv_raw(self.value)
            .map(|v| FieldElement::from_raw(&self.field, v))
    }

    pub fn frobenius(&self) -> FieldElement {
        self.pow(self.field.p() as u64)
    }

    /// `x^{p^{k-1}}`, the inverse of Frobenius.
    pub fn pth_root(&self) -> FieldElement {
        let mut y = self.clone();
        for _ in 1..self.field.k() {
            y = y.frobenius();
        }
        y
    }

    /// Absolute trace to `F_p`, returned as an element of this field.
    pub fn trace(&self) -> FieldElement {
        let mut acc = self.clone();
        let mut y = self.clone();
        for _ in 1..self.field.k() {
            y = y.frobenius();
            acc += &y;
        }
        acc
    }

    /// `x^p - x`.
    pub fn artin_schreier(&self) -> FieldElement {
        &self.frobenius() - self
    }

    pub fn checked_add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.field.ensure_same(&other.field)?;
        Ok(self + other)
    }

    pub fn checked_mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.field.ensure_same(&other.field)?;
        Ok(self * other)
    }

    pub fn to_json(&self) -> ElementJson {
        ElementJson {
            p: self.field.p(),
            k: self.field.k(),
            coeffs: self.coeffs(),
        }
    }

    fn check(&self, other: &FieldElement) {
        if !self.field.same(&other.field) {
            panic!("{}", Error::MixedFields(self.field.to_string(), other.field.to_string()));
        }
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && self.field.same(&other.field)
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.p().hash(state);
        self.field.k().hash(state);
        self.value.hash(state);
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by encoded value within a field.
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.field.p(), self.field.k(), self.value).cmp(&(
            other.field.p(),
            other.field.k(),
            other.value,
        ))
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $raw:ident) => {
        impl $tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.check(rhs);
                FieldElement::from_raw(&self.field, self.field.$raw(self.value, rhs.value))
            }
        }
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                (&self).$method(rhs)
            }
        }
        impl $tr<FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, add_raw);
binop!(Sub, sub, sub_raw);
binop!(Mul, mul, mul_raw);

impl Div<&FieldElement> for &FieldElement {
    type Output = FieldElement;
    fn div(self, rhs: &FieldElement) -> FieldElement {
        self * &rhs.inv().expect("division by zero")
    }
}

impl Div<FieldElement> for FieldElement {
    type Output = FieldElement;
    fn div(self, rhs: FieldElement) -> FieldElement {
        &self / &rhs
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::from_raw(&self.field, self.field.neg_raw(self.value))
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

impl AddAssign<&FieldElement> for FieldElement {
    fn add_assign(&mut self, rhs: &FieldElement) {
        self.check(rhs);
        self.value = self.field.add_raw(self.value, rhs.value);
    }
}

impl SubAssign<&FieldElement> for FieldElement {
    fn sub_assign(&mut self, rhs: &FieldElement) {
        self.check(rhs);
        self.value = self.field.sub_raw(self.value, rhs.value);
    }
}

impl MulAssign<&FieldElement> for FieldElement {
    fn mul_assign(&mut self, rhs: &FieldElement) {
        self.check(rhs);
        self.value = self.field.mul_raw(self.value, rhs.value);
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.k() == 1 {
            return write!(f, "{}", self.value);
        }
        let coeffs = self.coeffs();
        let mut terms = Vec::new();
        for (i, &c) in coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coef = if c == 1 && i > 0 {
                String::new()
            } else {
                c.to_string()
            };
            terms.push(match i {
                0 => coef,
                1 => format!("{coef}t"),
                _ => format!("{coef}t^{i}"),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self, self.field)
    }
}

/// Serialized element: prime, degree and residue coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub p: u32,
    pub k: u32,
    pub coeffs: Vec<u32>,
}

impl ElementJson {
    pub fn to_element(&self) -> Result<FieldElement> {
        let field = make_field(self.p as u64, self.k)?;
        if self.coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::Parse(format!("coefficient out of range in {:?}", self.coeffs)));
        }
        let coeffs: Vec<i64> = self.coeffs.iter().map(|&c| c as i64).collect();
        field.from_coeffs(&coeffs)
    }
}

/// Accepted input forms: an integer (reduced mod p), a coefficient list, or
/// the full serialized form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementInput {
    Int(i64),
    Coeffs(Vec<i64>),
    Full(ElementJson),
}

impl ElementInput {
    /// Interprets the input in `field`, embedding full-form elements from a
    /// subfield when needed.
    pub fn resolve(&self, field: &Field) -> Result<FieldElement> {
        match self {
            ElementInput::Int(v) => Ok(field.from_int(*v)),
            ElementInput::Coeffs(c) => field.from_coeffs(c),
            ElementInput::Full(j) => super::embed(&j.to_element()?, field),
        }
    }
}

impl From<&FieldElement> for ElementInput {
    fn from(x: &FieldElement) -> Self {
        ElementInput::Full(x.to_json())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_json() {
        let f = make_field(3, 2).unwrap();
        let x = f.from_coeffs(&[2, 1]).unwrap();
        assert_eq!(x.to_string(), "t + 2");
        assert_eq!(x.to_json(), ElementJson { p: 3, k: 2, coeffs: vec![2, 1] });
        let back: ElementInput = serde_json::from_str(r#"{"p":3,"k":2,"coeffs":[2,1]}"#).unwrap();
        assert_eq!(back.resolve(&f).unwrap(), x);
        let int: ElementInput = serde_json::from_str("-1").unwrap();
        assert_eq!(int.resolve(&f).unwrap(), f.from_int(2));
        let list: ElementInput = serde_json::from_str("[2,1]").unwrap();
        assert_eq!(list.resolve(&f).unwrap(), x);
    }

    #[test]
    #[should_panic(expected = "mixed fields")]
    fn mixed_fields_panic() {
        let a = make_field(3, 1).unwrap().one();
        let b = make_field(3, 2).unwrap().one();
        let _ = &a + &b;
    }

    #[test]
    fn trace_lands_in_prime_field() {
        let f = make_field(5, 2).unwrap();
        for x in f.elements() {
            assert!(x.trace().value() < 5);
        }
    }
}
