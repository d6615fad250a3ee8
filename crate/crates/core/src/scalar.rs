//! Exact arithmetic in cyclotomic fields `Q(ζ_N)`.
//!
//! An element of order `N` is stored as `(c_0 + c_1 ζ + ... + c_{φ(N)-1} ζ^{φ(N)-1}) / den`
//! with integer numerators, a positive common denominator, and the power
//! basis taken modulo the cyclotomic polynomial `Φ_N`. The representation is
//! reduced after every operation, so two elements of the same order are equal
//! exactly when their stored data is equal. Elements of different orders are
//! compared by promoting both to the least common multiple of their orders.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest cyclotomic order any promotion may reach.
pub const ORDER_CAP: u32 = 360;

/// Field order used when nothing else is specified; contains every number the
/// built-in categories need (`i`, `e^{±πi/3}`, `e^{±πi/12}`, `√2`, `√3`).
pub const DEFAULT_ORDER: u32 = 24;

/// Precomputed reduction data for one cyclotomic field.
struct Field {
    phi: usize,
    /// `powers[k]` is `x^k mod Φ_N` for `k` in `0..N`.
    powers: Vec<Vec<BigInt>>,
}

fn field(order: u32) -> &'static Field {
    // Memoized immutable tables; no observable state.
    static FIELDS: OnceLock<Mutex<HashMap<u32, &'static Field>>> = OnceLock::new();
    let fields = FIELDS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = fields.lock().unwrap_or_else(|e| e.into_inner());
    guard
        .entry(order)
        .or_insert_with(|| Box::leak(Box::new(Field::new(order))))
}

impl Field {
    fn new(order: u32) -> Self {
        let modulus = cyclotomic_polynomial(order as usize);
        let phi = modulus.len() - 1;
        let n = order as usize;
        let mut powers = Vec::with_capacity(n);
        let mut current = vec![BigInt::zero(); phi];
        current[0] = BigInt::one();
        for _ in 0..n {
            powers.push(current.clone());
            // multiply by x and reduce with the monic modulus
            let top = current[phi - 1].clone();
            let mut next = vec![BigInt::zero(); phi];
            for k in (1..phi).rev() {
                next[k] = current[k - 1].clone();
            }
            if !top.is_zero() {
                for (k, slot) in next.iter_mut().enumerate() {
                    *slot -= &top * &modulus[k];
                }
            }
            current = next;
        }
        Field { phi, powers }
    }
}

/// Integer coefficients (lowest degree first) of the `n`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: usize) -> Vec<BigInt> {
    assert!(n >= 1);
    // x^n - 1 divided by Φ_d for every proper divisor d of n
    let mut poly = vec![BigInt::zero(); n + 1];
    poly[0] = BigInt::from(-1);
    poly[n] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            poly = exact_monic_division(&poly, &cyclotomic_polynomial(d));
        }
    }
    poly
}

fn exact_monic_division(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut quot = vec![BigInt::zero(); qd + 1];
    for k in (0..=qd).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[k + j] -= &c * dj;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

fn checked_lcm(a: u32, b: u32) -> Result<u32> {
    let l = (a as u64).lcm(&(b as u64));
    if l > ORDER_CAP as u64 {
        return Err(Error::OrderTooLarge {
            order: l,
            cap: ORDER_CAP,
        });
    }
    Ok(l as u32)
}

/// Exact element of `Q(ζ_N)`.
#[derive(Clone, Debug)]
pub struct CycloScalar {
    order: u32,
    num: Vec<BigInt>,
    den: BigInt,
}

/// One serialized term `(p/q)·ζ_N^k`; `N` comes from the enclosing file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    #[serde(with = "json_bigint")]
    pub p: BigInt,
    #[serde(with = "json_bigint")]
    pub q: BigInt,
    pub k: i64,
}

/// Integers are written as JSON numbers when they fit in `i64`, else as decimal strings.
mod json_bigint {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        match v.to_i64() {
            Some(small) => s.serialize_i64(small),
            None => s.serialize_str(&v.to_string()),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(i64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Int(v) => Ok(BigInt::from(v)),
            Repr::Text(t) => t
                .parse()
                .map_err(|_| D::Error::custom(format!("invalid integer '{t}'"))),
        }
    }
}

impl CycloScalar {
    fn from_parts(order: u32, num: Vec<BigInt>, den: BigInt) -> Self {
        let mut s = CycloScalar { order, num, den };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            for c in &mut self.num {
                *c = -&*c;
            }
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if self.num.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
            return;
        }
        if !g.is_one() {
            self.den /= &g;
            for c in &mut self.num {
                *c /= &g;
            }
        }
    }

    fn check_order(order: u32) -> Result<()> {
        if order == 0 {
            return Err(Error::ZeroRootDenominator);
        }
        if order > ORDER_CAP {
            return Err(Error::OrderTooLarge {
                order: order as u64,
                cap: ORDER_CAP,
            });
        }
        Ok(())
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(n: i64) -> Self {
        CycloScalar::from_parts(1, vec![BigInt::from(n)], BigInt::one())
    }

    pub fn from_rational(r: &BigRational) -> Self {
        CycloScalar::from_parts(1, vec![r.numer().clone()], r.denom().clone())
    }

    /// `p/q` as a field element.
    pub fn from_ratio(p: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(CycloScalar::from_parts(
            1,
            vec![BigInt::from(p)],
            BigInt::from(q),
        ))
    }

    /// `ζ_order^exponent` inside `Q(ζ_order)`.
    pub fn zeta_power(order: u32, exponent: i64) -> Result<Self> {
        Self::check_order(order)?;
        let f = field(order);
        let k = exponent.rem_euclid(order as i64) as usize;
        Ok(CycloScalar {
            order,
            num: f.powers[k].clone(),
            den: BigInt::one(),
        })
    }

    /// `e^{2πi p/q}`.
    pub fn root_of_unity(p: i64, q: u32) -> Result<Self> {
        if q == 0 {
            return Err(Error::ZeroRootDenominator);
        }
        Self::zeta_power(q, p)
    }

    /// `i = ζ_4`.
    pub fn i() -> Self {
        Self::zeta_power(4, 1).expect("order 4 is within the cap")
    }

    /// `√2 = ζ_8 + ζ_8^{-1}`.
    pub fn sqrt2() -> Self {
        let z = Self::zeta_power(8, 1).expect("order 8");
        &z + &z.conj()
    }

    /// `√3 = ζ_12 + ζ_12^{-1}`.
    pub fn sqrt3() -> Self {
        let z = Self::zeta_power(12, 1).expect("order 12");
        &z + &z.conj()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    /// Re-express the element inside `Q(ζ_target)`; `target` must be a multiple of the order.
    pub fn promote(&self, target: u32) -> Result<Self> {
        if target == self.order {
            return Ok(self.clone());
        }
        Self::check_order(target)?;
        if !target.is_multiple_of(self.order) {
            return Err(Error::InvalidArgument(format!(
                "cannot promote an order-{} element to order {}",
                self.order, target
            )));
        }
        Ok(self.promote_uncapped(target))
    }

    fn promote_uncapped(&self, target: u32) -> Self {
        if target == self.order {
            return self.clone();
        }
        let step = (target / self.order) as usize;
        let exps = self.num.iter().enumerate().map(|(k, c)| (k * step, c));
        Self::from_exponent_terms(target, exps, self.den.clone())
    }

    fn from_exponent_terms<'a>(
        order: u32,
        terms: impl Iterator<Item = (usize, &'a BigInt)>,
        den: BigInt,
    ) -> Self {
        let f = field(order);
        let n = order as usize;
        let mut num = vec![BigInt::zero(); f.phi];
        for (k, c) in terms {
            if c.is_zero() {
                continue;
            }
            for (slot, p) in num.iter_mut().zip(&f.powers[k % n]) {
                if !p.is_zero() {
                    *slot += c * p;
                }
            }
        }
        CycloScalar::from_parts(order, num, den)
    }

    /// Promote both operands to a common field.
    fn unify(a: &Self, b: &Self) -> Result<(Self, Self)> {
        if a.order == b.order {
            return Ok((a.clone(), b.clone()));
        }
        let l = checked_lcm(a.order, b.order)?;
        Ok((a.promote(l)?, b.promote(l)?))
    }

    fn add_same(&self, other: &Self, negate: bool) -> Self {
        debug_assert_eq!(self.order, other.order);
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| {
                let rhs = b * &self.den;
                let lhs = a * &other.den;
                if negate {
                    lhs - rhs
                } else {
                    lhs + rhs
                }
            })
            .collect();
        CycloScalar::from_parts(self.order, num, &self.den * &other.den)
    }

    fn mul_same(&self, other: &Self) -> Self {
        debug_assert_eq!(self.order, other.order);
        let f = field(self.order);
        let phi = f.phi;
        let mut raw = vec![BigInt::zero(); 2 * phi - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    raw[i + j] += a * b;
                }
            }
        }
        let mut num: Vec<BigInt> = raw[..phi].to_vec();
        let n = self.order as usize;
        for (k, c) in raw.iter().enumerate().skip(phi) {
            if c.is_zero() {
                continue;
            }
            for (slot, p) in num.iter_mut().zip(&f.powers[k % n]) {
                if !p.is_zero() {
                    *slot += c * p;
                }
            }
        }
        CycloScalar::from_parts(self.order, num, &self.den * &other.den)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.order == other.order {
            return Ok(self.add_same(other, false));
        }
        let (a, b) = Self::unify(self, other)?;
        Ok(a.add_same(&b, false))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        if self.order == other.order {
            return Ok(self.add_same(other, true));
        }
        let (a, b) = Self::unify(self, other)?;
        Ok(a.add_same(&b, true))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.order == other.order {
            return Ok(self.mul_same(other));
        }
        let (a, b) = Self::unify(self, other)?;
        Ok(a.mul_same(&b))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        let inv = other.inverse()?;
        self.try_mul(&inv)
    }

    /// Image under the Galois automorphism `ζ ↦ ζ^t` (`t` coprime to the order).
    fn galois(&self, t: usize) -> Self {
        let n = self.order as usize;
        let terms = self.num.iter().enumerate().map(|(k, c)| ((k * t) % n, c));
        Self::from_exponent_terms(self.order, terms, self.den.clone())
    }

    /// Complex conjugate: `ζ^k ↦ ζ^{N-k}`.
    pub fn conj(&self) -> Self {
        let n = self.order as usize;
        self.galois(n - 1)
    }

    /// Multiplicative inverse, computed as the product of the nontrivial
    /// Galois conjugates divided by the (rational) field norm.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(CycloScalar::from_parts(
                self.order,
                {
                    let mut v = vec![BigInt::zero(); self.num.len()];
                    v[0] = r.denom().clone();
                    v
                },
                r.numer().clone(),
            ));
        }
        let n = self.order as usize;
        let mut cofactor = CycloScalar::one().promote(self.order)?;
        for t in 2..n {
            if t.gcd(&n) == 1 {
                cofactor = cofactor.mul_same(&self.galois(t));
            }
        }
        let norm = self
            .mul_same(&cofactor)
            .as_rational()
            .expect("field norm is rational");
        let scale = CycloScalar::from_rational(&norm.recip()).promote(self.order)?;
        Ok(cofactor.mul_same(&scale))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = CycloScalar::one()
            .promote(self.order)
            .expect("promotion to own order");
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_same(&base);
            }
            base = base.mul_same(&base);
            e >>= 1;
        }
        acc
    }

    /// Floating-point value, for reporting only.
    pub fn to_complex(&self) -> Complex64 {
        let n = self.order as f64;
        let den = BigRational::from_integer(self.den.clone());
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let coeff = (BigRational::from_integer(c.clone()) / &den)
                .to_f64()
                .unwrap_or(f64::NAN);
            let angle = 2.0 * std::f64::consts::PI * (k as f64) / n;
            acc += Complex64::from_polar(coeff, angle);
        }
        acc
    }

    /// Serialize as terms over `ζ_target`; zero serializes to an empty list.
    pub fn to_terms(&self, target: u32) -> Result<Vec<Term>> {
        let s = self.promote(target)?;
        Ok(s.num
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let r = BigRational::new(c.clone(), s.den.clone());
                Term {
                    p: r.numer().clone(),
                    q: r.denom().clone(),
                    k: k as i64,
                }
            })
            .collect())
    }

    pub fn from_terms(terms: &[Term], order: u32) -> Result<Self> {
        Self::check_order(order)?;
        let mut acc = CycloScalar::zero().promote(order)?;
        for t in terms {
            if t.q.is_zero() {
                return Err(Error::DivisionByZero);
            }
            let k = t.k.rem_euclid(order as i64) as usize;
            let coeff = CycloScalar::from_rational(&BigRational::new(t.p.clone(), t.q.clone()));
            let term = Self::from_exponent_terms(
                order,
                std::iter::once((k, &BigInt::one())),
                BigInt::one(),
            )
            .mul_same(&coeff.promote(order)?);
            acc = acc.add_same(&term, false);
        }
        Ok(acc)
    }

    /// Raw canonical data, for hashing elements that share an order.
    pub(crate) fn raw(&self) -> (&[BigInt], &BigInt) {
        (&self.num, &self.den)
    }
}

impl PartialEq for CycloScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.den == other.den && self.num == other.num;
        }
        // equality is decided even past the cap
        let l = (self.order as u64).lcm(&(other.order as u64)) as u32;
        let a = self.promote_uncapped(l);
        let b = other.promote_uncapped(l);
        a.den == b.den && a.num == b.num
    }
}

impl Eq for CycloScalar {}

impl Default for CycloScalar {
    fn default() -> Self {
        CycloScalar::zero()
    }
}

impl From<i64> for CycloScalar {
    fn from(n: i64) -> Self {
        CycloScalar::from_integer(n)
    }
}

impl fmt::Display for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        if !self.den.is_one() {
            write!(f, "(")?;
        }
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let mag = c.abs();
            match k {
                0 => write!(f, "{mag}")?,
                _ if mag.is_one() => write!(f, "z{}^{}", self.order, k)?,
                _ => write!(f, "{mag}*z{}^{}", self.order, k)?,
            }
        }
        if !self.den.is_one() {
            write!(f, ")/{}", self.den)?;
        }
        Ok(())
    }
}

// Operator impls promote to a common order and panic only if that order
// exceeds ORDER_CAP; use the `try_*` methods where that can happen.
macro_rules! binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&CycloScalar> for &CycloScalar {
            type Output = CycloScalar;
            fn $method(self, rhs: &CycloScalar) -> CycloScalar {
                self.$try(rhs).expect("cyclotomic order exceeds cap")
            }
        }
        impl $trait<CycloScalar> for CycloScalar {
            type Output = CycloScalar;
            fn $method(self, rhs: CycloScalar) -> CycloScalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&CycloScalar> for CycloScalar {
            type Output = CycloScalar;
            fn $method(self, rhs: &CycloScalar) -> CycloScalar {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &CycloScalar {
    type Output = CycloScalar;
    fn neg(self) -> CycloScalar {
        CycloScalar {
            order: self.order,
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for CycloScalar {
    type Output = CycloScalar;
    fn neg(self) -> CycloScalar {
        -&self
    }
}
