//! Exact scalar arithmetic: rationals, graded polynomials in the simple roots,
//! and the rational functions used by the localized morphism model.
//!
//! Polynomials live in `R = Q[α_0, …, α_{r-1}]` where each `α_i` has degree 2.
//! Rational functions keep their denominator as a product of monic linear forms.
//! Every denominator that arises in the localized calculus is a product of roots,
//! so no general multivariate gcd is ever needed.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar.
pub type Scalar = BigRational;

/// Builds the scalar `n / d`.
pub fn q(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Builds the integral scalar `n`.
pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

/// Maximum number of polynomial variables (simple roots).
pub const MAX_VARS: usize = 8;

/// A monomial `∏ α_i^{a_i}` packed into a `u64`, one byte per variable.
///
/// Variable 0 occupies the most significant byte, so comparing packed values
/// compares exponent vectors lexicographically with `α_0 > α_1 > …`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(u64);

impl Monomial {
    /// The constant monomial 1.
    pub const ONE: Monomial = Monomial(0);

    fn shift(i: usize) -> u32 {
        (56 - 8 * i) as u32
    }

    /// The monomial `α_i`.
    pub fn var(i: usize) -> Monomial {
        assert!(i < MAX_VARS, "at most {MAX_VARS} variables are supported");
        Monomial(1u64 << Self::shift(i))
    }

    /// Builds a monomial from an exponent vector.
    pub fn from_exponents(exps: &[u32]) -> Monomial {
        assert!(exps.len() <= MAX_VARS, "at most {MAX_VARS} variables are supported");
        let mut packed = 0u64;
        for (i, &a) in exps.iter().enumerate() {
            assert!(a < 256, "exponent overflow");
            packed |= (a as u64) << Self::shift(i);
        }
        Monomial(packed)
    }

    /// Exponent of `α_i`.
    pub fn exponent(self, i: usize) -> u32 {
        ((self.0 >> Self::shift(i)) & 0xff) as u32
    }

    /// Sum of exponents (half the polynomial degree).
    pub fn total(self) -> u32 {
        (0..MAX_VARS).map(|i| self.exponent(i)).sum()
    }

    /// Product of monomials.
    pub fn mul(self, other: Monomial) -> Monomial {
        for i in 0..MAX_VARS {
            assert!(self.exponent(i) + other.exponent(i) < 256, "exponent overflow");
        }
        Monomial(self.0 + other.0)
    }

    /// Quotient `self / other` when `other` divides `self`.
    pub fn div(self, other: Monomial) -> Option<Monomial> {
        for i in 0..MAX_VARS {
            if self.exponent(i) < other.exponent(i) {
                return None;
            }
        }
        Some(Monomial(self.0 - other.0))
    }

    /// All monomials of the given total exponent in `nvars` variables, in decreasing order.
    pub fn all_of_total(nvars: usize, total: u32) -> Vec<Monomial> {
        fn rec(i: usize, nvars: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if i + 1 == nvars {
                cur.push(left);
                out.push(Monomial::from_exponents(cur));
                cur.pop();
                return;
            }
            for a in (0..=left).rev() {
                cur.push(a);
                rec(i + 1, nvars, left - a, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if nvars == 0 {
            if total == 0 {
                out.push(Monomial::ONE);
            }
            return out;
        }
        rec(0, nvars, total, &mut Vec::new(), &mut out);
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.total(), self.0).cmp(&(other.total(), other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial with exact rational coefficients.
///
/// Terms are sorted in decreasing graded-lexicographic order; zero
/// coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Polynomial {
    terms: Vec<(Monomial, Scalar)>,
}

impl PartialOrd for Polynomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Polynomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.terms.cmp(&other.terms)
    }
}

impl Polynomial {
    /// The zero polynomial.
    pub fn zero() -> Polynomial {
        Polynomial { terms: Vec::new() }
    }

    /// The constant 1.
    pub fn one() -> Polynomial {
        Polynomial::constant(Scalar::one())
    }

    /// A constant polynomial.
    pub fn constant(c: Scalar) -> Polynomial {
        Polynomial::monomial(Monomial::ONE, c)
    }

    /// The generator `α_i`.
    pub fn var(i: usize) -> Polynomial {
        Polynomial::monomial(Monomial::var(i), Scalar::one())
    }

    /// A single term `c·m`.
    pub fn monomial(m: Monomial, c: Scalar) -> Polynomial {
        if c.is_zero() {
            Polynomial::zero()
        } else {
            Polynomial { terms: vec![(m, c)] }
        }
    }

    /// Builds a polynomial from arbitrary (possibly repeated) terms.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Scalar)>>(terms: I) -> Polynomial {
        let mut map: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (m, c) in terms {
            *map.entry(m).or_insert_with(Scalar::zero) += c;
        }
        Polynomial::from_map(map)
    }

    fn from_map(map: BTreeMap<Monomial, Scalar>) -> Polynomial {
        let terms = map.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect();
        Polynomial { terms }
    }

    /// Builds the linear form `Σ c_i α_i`.
    pub fn linear(coeffs: &[Scalar]) -> Polynomial {
        Polynomial::from_terms(coeffs.iter().enumerate().map(|(i, c)| (Monomial::var(i), c.clone())))
    }

    /// Terms in decreasing monomial order.
    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    /// Whether this is the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Whether this is a constant (including zero).
    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| *m == Monomial::ONE)
    }

    /// The constant coefficient.
    pub fn constant_term(&self) -> Scalar {
        self.coeff(Monomial::ONE)
    }

    /// Coefficient of a monomial.
    pub fn coeff(&self, m: Monomial) -> Scalar {
        self.terms.iter().find(|(n, _)| *n == m).map(|(_, c)| c.clone()).unwrap_or_else(Scalar::zero)
    }

    /// Leading term under the graded-lexicographic order.
    pub fn leading(&self) -> Option<&(Monomial, Scalar)> {
        self.terms.first()
    }

    /// Degree (each `α_i` has degree 2) if the polynomial is homogeneous and nonzero.
    pub fn degree(&self) -> Option<i32> {
        let first = self.terms.first()?.0.total();
        if self.terms.iter().all(|(m, _)| m.total() == first) {
            Some(2 * first as i32)
        } else {
            None
        }
    }

    /// Whether every term has the same degree (true for zero).
    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    /// Sum.
    pub fn add(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match ma.cmp(mb) {
                std::cmp::Ordering::Greater => {
                    out.push((*ma, ca.clone()));
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push((*mb, cb.clone()));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = ca + cb;
                    if !c.is_zero() {
                        out.push((*ma, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Polynomial { terms: out }
    }

    /// Negation.
    pub fn neg(&self) -> Polynomial {
        Polynomial { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }

    /// Difference.
    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    /// Multiplication by a scalar.
    pub fn scale(&self, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect() }
    }

    /// Multiplication by a monomial term.
    pub fn mul_term(&self, m: Monomial, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(n, a)| (n.mul(m), a * c)).collect() }
    }

    /// Product.
    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            return self.mul_term(*m, c);
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return other.mul_term(*m, c);
        }
        let mut map: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let e = map.entry(ma.mul(*mb)).or_insert_with(Scalar::zero);
                *e += ca * cb;
            }
        }
        Polynomial::from_map(map)
    }

    /// Integer power.
    pub fn pow(&self, k: u32) -> Polynomial {
        let mut out = Polynomial::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Exact division; fails with [`Error::NonDivisible`] if `g` does not divide `self`.
    pub fn exact_div(&self, g: &Polynomial) -> Result<Polynomial> {
        self.try_div(g).ok_or(Error::NonDivisible)
    }

    /// Exact division returning `None` when `g` does not divide `self`.
    pub fn try_div(&self, g: &Polynomial) -> Option<Polynomial> {
        let (lm, lc) = g.leading()?.clone();
        if self.is_zero() {
            return Some(Polynomial::zero());
        }
        let mut rem: BTreeMap<Monomial, Scalar> = self.terms.iter().cloned().collect();
        let mut quot: Vec<(Monomial, Scalar)> = Vec::new();
        while let Some((&m, c)) = rem.iter().next_back() {
            let qm = m.div(lm)?;
            let qc = c / &lc;
            for (gm, gc) in &g.terms {
                let key = gm.mul(qm);
                let e = rem.entry(key).or_insert_with(Scalar::zero);
                *e -= gc * &qc;
                if e.is_zero() {
                    rem.remove(&key);
                }
            }
            quot.push((qm, qc));
        }
        Some(Polynomial::from_terms(quot))
    }

    /// Largest variable index that occurs, plus one.
    pub fn nvars_used(&self) -> usize {
        self.terms
            .iter()
            .map(|(m, _)| (0..MAX_VARS).rev().find(|&i| m.exponent(i) > 0).map(|i| i + 1).unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    /// Value at a point (missing coordinates count as zero).
    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        let mut out = Scalar::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, x) in point.iter().enumerate() {
                for _ in 0..m.exponent(i) {
                    v *= x;
                }
            }
            if point.len() < MAX_VARS && (point.len()..MAX_VARS).any(|i| m.exponent(i) > 0) {
                continue;
            }
            out += v;
        }
        out
    }

    /// Substitutes `α_i ↦ images[i]` (a ring homomorphism).
    pub fn substitute(&self, images: &[Polynomial]) -> Polynomial {
        let mut powers: Vec<Vec<Polynomial>> = images.iter().map(|p| vec![Polynomial::one(), p.clone()]).collect();
        let mut out: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(c.clone());
            for (i, pw) in powers.iter_mut().enumerate() {
                let a = m.exponent(i) as usize;
                if a == 0 {
                    continue;
                }
                while pw.len() <= a {
                    let next = pw.last().unwrap().mul(&pw[1]);
                    pw.push(next);
                }
                term = term.mul(&pw[a]);
            }
            for (tm, tc) in term.terms {
                *out.entry(tm).or_insert_with(Scalar::zero) += tc;
            }
        }
        Polynomial::from_map(out)
    }

    /// Renders the polynomial with the given variable names, e.g. `a_s^2 - a_t^2`.
    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            for i in 0..MAX_VARS {
                let a = m.exponent(i);
                if a == 0 {
                    continue;
                }
                let name = names.get(i).map(|n| format!("a_{n}")).unwrap_or_else(|| format!("a{i}"));
                factors.push(if a == 1 { name } else { format!("{name}^{a}") });
            }
            let coeff = render_scalar(&abs);
            if factors.is_empty() {
                out.push_str(&coeff);
            } else {
                if !abs.is_one() {
                    out.push_str(&coeff);
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}

/// Renders a scalar as `n` or `n/d`.
pub fn render_scalar(c: &Scalar) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&[]))
    }
}

/// A nonzero linear form `Σ c_i α_i` normalized so its first nonzero coefficient is 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct LinearForm {
    coeffs: Vec<(usize, Scalar)>,
}

impl LinearForm {
    /// Normalizes a linear polynomial `p = c·ℓ`, returning `(c, ℓ)`.
    ///
    /// Returns `None` if `p` is not a nonzero homogeneous linear polynomial.
    pub fn normalize(p: &Polynomial) -> Option<(Scalar, LinearForm)> {
        if p.is_zero() || p.degree() != Some(2) {
            return None;
        }
        let mut coeffs: Vec<(usize, Scalar)> = Vec::new();
        for (m, c) in p.terms() {
            let i = (0..MAX_VARS).find(|&i| m.exponent(i) == 1)?;
            coeffs.push((i, c.clone()));
        }
        coeffs.sort_by_key(|(i, _)| *i);
        let lead = coeffs[0].1.clone();
        for (_, c) in coeffs.iter_mut() {
            *c = &*c / &lead;
        }
        Some((lead, LinearForm { coeffs }))
    }

    /// The form as a polynomial.
    pub fn to_poly(&self) -> Polynomial {
        Polynomial::from_terms(self.coeffs.iter().map(|(i, c)| (Monomial::var(*i), c.clone())))
    }

    /// Coefficient pairs `(variable, coefficient)`.
    pub fn coeffs(&self) -> &[(usize, Scalar)] {
        &self.coeffs
    }
}

/// A rational function `num / ∏ ℓ_k^{a_k}` in canonical form.
///
/// Canonical form: the denominator is a sorted product of distinct monic
/// linear forms, none of which divides the numerator; zero has an empty
/// denominator. Equality is therefore structural.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct RationalFunction {
    num: Polynomial,
    den: Vec<(LinearForm, u32)>,
}

impl RationalFunction {
    /// Zero.
    pub fn zero() -> Self {
        RationalFunction { num: Polynomial::zero(), den: Vec::new() }
    }

    /// One.
    pub fn one() -> Self {
        Self::from_poly(Polynomial::one())
    }

    /// A polynomial viewed as a rational function.
    pub fn from_poly(p: Polynomial) -> Self {
        RationalFunction { num: p, den: Vec::new() }
    }

    /// A scalar viewed as a rational function.
    pub fn from_scalar(c: Scalar) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    /// `num / ∏ factors`, where each factor is a nonzero linear polynomial.
    pub fn from_parts(num: Polynomial, factors: &[Polynomial]) -> Result<Self> {
        let mut num = num;
        let mut den: BTreeMap<LinearForm, u32> = BTreeMap::new();
        for f in factors {
            let (c, l) = LinearForm::normalize(f).ok_or(Error::NonLinearDenominator)?;
            num = num.scale(&(Scalar::one() / c));
            *den.entry(l).or_insert(0) += 1;
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: Polynomial, den: BTreeMap<LinearForm, u32>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let mut num = num;
        let mut out = Vec::new();
        for (l, mut k) in den {
            let lp = l.to_poly();
            while k > 0 {
                match num.try_div(&lp) {
                    Some(qt) => {
                        num = qt;
                        k -= 1;
                    }
                    None => break,
                }
            }
            if k > 0 {
                out.push((l, k));
            }
        }
        RationalFunction { num, den: out }
    }

    /// Numerator.
    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    /// Denominator factors with multiplicities.
    pub fn denominator_factors(&self) -> &[(LinearForm, u32)] {
        &self.den
    }

    /// Denominator as an expanded polynomial (leading coefficient 1).
    pub fn denominator(&self) -> Polynomial {
        let mut d = Polynomial::one();
        for (l, k) in &self.den {
            d = d.mul(&l.to_poly().pow(*k));
        }
        d
    }

    /// Whether this is zero.
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Whether this is a polynomial.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    /// The polynomial value, if the denominator is trivial.
    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        if self.den.is_empty() {
            Some(&self.num)
        } else {
            None
        }
    }

    /// Degree (numerator degree minus denominator degree) when homogeneous and nonzero.
    pub fn degree(&self) -> Option<i32> {
        let dn = self.num.degree()?;
        let dd: i32 = self.den.iter().map(|(_, k)| 2 * *k as i32).sum();
        Some(dn - dd)
    }

    /// Whether numerator and denominator are homogeneous.
    pub fn is_homogeneous(&self) -> bool {
        self.num.is_homogeneous()
    }

    /// Product.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.den.is_empty() && other.den.is_empty() {
            return Self::from_poly(self.num.mul(&other.num));
        }
        let mut den: BTreeMap<LinearForm, u32> = self.den.iter().cloned().collect();
        for (l, k) in &other.den {
            *den.entry(l.clone()).or_insert(0) += k;
        }
        Self::canonical(self.num.mul(&other.num), den)
    }

    /// Product with a polynomial.
    pub fn mul_poly(&self, p: &Polynomial) -> Self {
        if self.den.is_empty() {
            return Self::from_poly(self.num.mul(p));
        }
        Self::canonical(self.num.mul(p), self.den.iter().cloned().collect())
    }

    /// Product with a scalar.
    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunction { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        RationalFunction { num: self.num.neg(), den: self.den.clone() }
    }

    /// Sum.
    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            if self.den.is_empty() {
                return Self::from_poly(self.num.add(&other.num));
            }
            return Self::canonical(self.num.add(&other.num), self.den.iter().cloned().collect());
        }
        let lcm = lcm_factors([&self.den[..], &other.den[..]]);
        let a = self.num.mul(&cofactor(&lcm, &self.den));
        let b = other.num.mul(&cofactor(&lcm, &other.den));
        Self::canonical(a.add(&b), lcm)
    }

    /// Difference.
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Division by a product of linear forms, given as a rational function whose
    /// numerator is a product of linear forms times a scalar.
    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let factors = factor_into_linear(&other.num).ok_or(Error::NonLinearDenominator)?;
        let (c, lins) = factors;
        let mut num = self.num.scale(&(Scalar::one() / c));
        for (l, k) in &other.den {
            num = num.mul(&l.to_poly().pow(*k));
        }
        let mut den: BTreeMap<LinearForm, u32> = self.den.iter().cloned().collect();
        for l in lins {
            *den.entry(l).or_insert(0) += 1;
        }
        Ok(Self::canonical(num, den))
    }

    /// Applies a linear substitution `α_i ↦ images[i]` (images must be linear).
    pub fn substitute(&self, images: &[Polynomial]) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut num = self.num.substitute(images);
        let mut den: BTreeMap<LinearForm, u32> = BTreeMap::new();
        for (l, k) in &self.den {
            let img = l.to_poly().substitute(images);
            let (c, nl) = LinearForm::normalize(&img).expect("linear substitution must be invertible");
            let inv = Scalar::one() / c;
            for _ in 0..*k {
                num = num.scale(&inv);
            }
            *den.entry(nl).or_insert(0) += k;
        }
        Self::canonical(num, den)
    }

    /// Value at a point, or `None` if a denominator factor vanishes there.
    pub fn eval(&self, point: &[Scalar]) -> Option<Scalar> {
        let mut den = Scalar::one();
        for (l, k) in &self.den {
            let v = l.to_poly().eval(point);
            if v.is_zero() {
                return None;
            }
            for _ in 0..*k {
                den *= &v;
            }
        }
        Some(self.num.eval(point) / den)
    }

    /// Renders as `(num)/(den)` or as a bare polynomial when the denominator is 1.
    pub fn render(&self, names: &[String]) -> String {
        if self.den.is_empty() {
            return self.num.render(names);
        }
        format!("({})/({})", self.num.render(names), self.denominator().render(names))
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&[]))
    }
}

/// Least common multiple of factored denominators.
pub fn lcm_factors<'a, I: IntoIterator<Item = &'a [(LinearForm, u32)]>>(dens: I) -> BTreeMap<LinearForm, u32> {
    let mut lcm: BTreeMap<LinearForm, u32> = BTreeMap::new();
    for d in dens {
        for (l, k) in d {
            let e = lcm.entry(l.clone()).or_insert(0);
            *e = (*e).max(*k);
        }
    }
    lcm
}

/// The polynomial `lcm / den` for a denominator dividing `lcm`.
pub fn cofactor(lcm: &BTreeMap<LinearForm, u32>, den: &[(LinearForm, u32)]) -> Polynomial {
    let mut out = Polynomial::one();
    for (l, k) in lcm {
        let have = den.iter().find(|(m, _)| m == l).map(|(_, j)| *j).unwrap_or(0);
        if *k > have {
            out = out.mul(&l.to_poly().pow(k - have));
        }
    }
    out
}

/// Expands a factored denominator into a polynomial.
pub fn expand_factors(f: &BTreeMap<LinearForm, u32>) -> Polynomial {
    let mut out = Polynomial::one();
    for (l, k) in f {
        out = out.mul(&l.to_poly().pow(*k));
    }
    out
}

/// Writes `p = c · ∏ ℓ_k` with monic linear forms by peeling off variables `α_i`
/// and then a single remaining linear factor. Returns `None` otherwise.
fn factor_into_linear(p: &Polynomial) -> Option<(Scalar, Vec<LinearForm>)> {
    let mut rest = p.clone();
    let mut found = Vec::new();
    loop {
        if rest.is_constant() {
            let c = rest.constant_term();
            return if c.is_zero() { None } else { Some((c, found)) };
        }
        if rest.degree() == Some(2) {
            let (c, l) = LinearForm::normalize(&rest)?;
            found.push(l);
            return Some((c, found));
        }
        let mut progressed = false;
        for i in 0..MAX_VARS {
            let v = Polynomial::var(i);
            if let Some(qt) = rest.try_div(&v) {
                rest = qt;
                found.push(LinearForm::normalize(&v).unwrap().1);
                progressed = true;
                break;
            }
        }
        if !progressed {
            return None;
        }
    }
}
