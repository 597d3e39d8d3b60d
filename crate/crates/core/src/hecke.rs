//! The Hecke algebra over `Z[v, v^{-1}]` in the standard basis, Bott–Samelson
//! classes, Deodhar's defect formula and graded ranks of Hom spaces.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::coxeter::{CoxeterSystem, Element};

/// Laurent polynomial in `v` with integer coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct LaurentInt {
    coeffs: BTreeMap<i32, BigInt>,
}

impl LaurentInt {
    /// Zero.
    pub fn zero() -> Self {
        LaurentInt::default()
    }

    /// One.
    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// `c·v^k`.
    pub fn monomial(k: i32, c: i64) -> Self {
        let mut out = LaurentInt::default();
        if c != 0 {
            out.coeffs.insert(k, BigInt::from(c));
        }
        out
    }

    /// `v^k`.
    pub fn v_pow(k: i32) -> Self {
        Self::monomial(k, 1)
    }

    /// Coefficient of `v^k`.
    pub fn coeff(&self, k: i32) -> BigInt {
        self.coeffs.get(&k).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Nonzero coefficients.
    pub fn coeffs(&self) -> &BTreeMap<i32, BigInt> {
        &self.coeffs
    }

    /// Whether zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn insert_add(&mut self, k: i32, c: &BigInt) {
        let e = self.coeffs.entry(k).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    /// Sum.
    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            out.insert_add(*k, c);
        }
        out
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        LaurentInt { coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c)).collect() }
    }

    /// Difference.
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = LaurentInt::zero();
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                out.insert_add(a + b, &(ca * cb));
            }
        }
        out
    }

    /// Multiplication by `v^k`.
    pub fn shift(&self, k: i32) -> Self {
        LaurentInt { coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }
}

impl fmt::Display for LaurentInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().rev() {
            let neg = c.is_negative();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let a = c.abs();
            let mono = match *k {
                0 => String::new(),
                1 => "v".to_string(),
                k => format!("v^{k}"),
            };
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{a}{mono}")?;
            }
        }
        Ok(())
    }
}

/// An element of the Hecke algebra in the standard basis `{δ_x}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct HeckeElt {
    coords: BTreeMap<Element, LaurentInt>,
}

impl HeckeElt {
    /// Zero.
    pub fn zero() -> Self {
        HeckeElt::default()
    }

    /// `δ_1`.
    pub fn one() -> Self {
        Self::delta(Element::IDENTITY)
    }

    /// `δ_x`.
    pub fn delta(x: Element) -> Self {
        Self::term(x, LaurentInt::one())
    }

    /// `c·δ_x`.
    pub fn term(x: Element, c: LaurentInt) -> Self {
        let mut out = HeckeElt::default();
        if !c.is_zero() {
            out.coords.insert(x, c);
        }
        out
    }

    /// A scalar multiple of `δ_1`.
    pub fn scalar(c: LaurentInt) -> Self {
        Self::term(Element::IDENTITY, c)
    }

    /// Coordinate of `δ_x`.
    pub fn coeff(&self, x: Element) -> LaurentInt {
        self.coords.get(&x).cloned().unwrap_or_default()
    }

    /// Nonzero coordinates.
    pub fn coords(&self) -> &BTreeMap<Element, LaurentInt> {
        &self.coords
    }

    /// Whether zero.
    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    fn insert_add(&mut self, x: Element, c: &LaurentInt) {
        let e = self.coords.entry(x).or_default();
        *e = e.add(c);
        if e.is_zero() {
            self.coords.remove(&x);
        }
    }

    /// Sum.
    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (x, c) in &other.coords {
            out.insert_add(*x, c);
        }
        out
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        HeckeElt { coords: self.coords.iter().map(|(x, c)| (*x, c.neg())).collect() }
    }

    /// Difference.
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Multiplication by a Laurent polynomial.
    pub fn scale(&self, c: &LaurentInt) -> Self {
        let mut out = HeckeElt::zero();
        for (x, a) in &self.coords {
            out.insert_add(*x, &a.mul(c));
        }
        out
    }

    /// Right multiplication by `δ_s`:
    /// `δ_x δ_s = δ_{xs}` if `xs > x`, else `δ_{xs} + (v^{-1} − v) δ_x`.
    pub fn mul_delta_s(&self, sys: &CoxeterSystem, s: usize) -> Self {
        let quad = LaurentInt::v_pow(-1).sub(&LaurentInt::v_pow(1));
        let mut out = HeckeElt::zero();
        for (x, c) in &self.coords {
            let xs = sys.mul_gen_right(*x, s);
            out.insert_add(xs, c);
            if sys.length(xs) < sys.length(*x) {
                out.insert_add(*x, &c.mul(&quad));
            }
        }
        out
    }

    /// Product in the Hecke algebra.
    pub fn mul(&self, sys: &CoxeterSystem, other: &Self) -> Self {
        let mut out = HeckeElt::zero();
        for (y, c) in &other.coords {
            let mut part = self.clone();
            for &s in sys.lexmin_word(*y) {
                part = part.mul_delta_s(sys, s);
            }
            out = out.add(&part.scale(c));
        }
        out
    }

    /// Renders with generator names, e.g. `1`, `d_s`, `(v - v^-1)*d_st + 1`.
    pub fn render(&self, sys: &CoxeterSystem) -> String {
        if self.coords.is_empty() {
            return "0".to_string();
        }
        let single = self.coords.len() == 1;
        self.coords
            .iter()
            .rev()
            .map(|(x, c)| {
                let w = sys.render_word(sys.lexmin_word(*x));
                let coeff = c.to_string();
                let simple = c.coeffs().len() == 1;
                if w.is_empty() {
                    if single || simple { coeff } else { format!("({coeff})") }
                } else if *c == LaurentInt::one() {
                    format!("d_{w}")
                } else {
                    format!("({coeff})*d_{w}")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// `b_s = δ_s + v`.
pub fn b_s(sys: &CoxeterSystem, s: usize) -> HeckeElt {
    HeckeElt::delta(sys.gen_element(s)).add(&HeckeElt::scalar(LaurentInt::v_pow(1)))
}

/// The class `b_{s_1} ⋯ b_{s_k}` of a Bott–Samelson object.
pub fn bott_samelson_class(sys: &CoxeterSystem, w: &[usize]) -> HeckeElt {
    let mut out = HeckeElt::one();
    for &s in w {
        out = out.mul_delta_s(sys, s).add(&out.scale(&LaurentInt::v_pow(1)));
    }
    out
}

/// `Σ_e v^{defect(e)} δ_{w^e}` over all subexpressions of `w`.
pub fn deodhar_sum(sys: &CoxeterSystem, w: &[usize]) -> HeckeElt {
    let mut out = HeckeElt::zero();
    for mask in 0u32..(1u32 << w.len()) {
        let d = sys.decorate_mask(w, mask);
        out.insert_add(d.end(), &LaurentInt::v_pow(d.defect()));
    }
    out
}

/// `Σ v^{defect(e1) + defect(e2)}` over pairs of subexpressions expressing the same element.
pub fn graded_rank_pairing(sys: &CoxeterSystem, w1: &[usize], w2: &[usize]) -> LaurentInt {
    let mut by_elem: BTreeMap<Element, LaurentInt> = BTreeMap::new();
    for mask in 0u32..(1u32 << w2.len()) {
        let d = sys.decorate_mask(w2, mask);
        let e = by_elem.entry(d.end()).or_default();
        *e = e.add(&LaurentInt::v_pow(d.defect()));
    }
    let mut out = LaurentInt::zero();
    for mask in 0u32..(1u32 << w1.len()) {
        let d = sys.decorate_mask(w1, mask);
        if let Some(c) = by_elem.get(&d.end()) {
            out = out.add(&c.shift(d.defect()));
        }
    }
    out
}
