//! Arithmetic in GF(p^m) through discrete-log and Zech-logarithm tables.
//!
//! Elements are carried as discrete-log indices with respect to the residue
//! class of the indeterminate modulo a primitive polynomial. Zero is tagged
//! separately, so multiplication and inversion are index arithmetic and
//! addition is one Zech table lookup.
//!
//! Every subfield GF(p^e), e | m, is the set of fixed points of
//! x -> x^(p^e); inside the log representation it is {0} together with the
//! powers of g^((q-1)/(p^e-1)).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_FIELD_ORDER: u64 = 1 << 16;

const NO_ZECH: u32 = u32::MAX;

/// An element of the ambient field: `0` or `g^k` for a fixed generator `g`.
///
/// The raw value is `0` for zero and `k + 1` for `g^k`, so the derived
/// ordering puts zero first and then sorts by discrete log.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElement(u16);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// `g^k`. The caller is responsible for `k < q - 1`.
    #[inline]
    pub const fn from_log(k: u32) -> Self {
        FieldElement((k + 1) as u16)
    }

    #[inline]
    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Discrete log, `None` for zero.
    #[inline]
    pub const fn log(self) -> Option<u32> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0 as u32 - 1)
        }
    }

    /// Dense index in `0..q`: zero is 0, `g^k` is `k + 1`.
    #[inline]
    pub const fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub const fn from_index(i: usize) -> Self {
        FieldElement(i as u16)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.log() {
            None => write!(f, "0"),
            Some(0) => write!(f, "1"),
            Some(k) => write!(f, "g^{k}"),
        }
    }
}

impl FromStr for FieldElement {
    type Err = Error;

    /// Accepts `0`, `1`, `g` and `g^k`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t {
            "0" => Ok(FieldElement::ZERO),
            "1" => Ok(FieldElement::ONE),
            "g" => Ok(FieldElement::from_log(1)),
            _ => {
                let k = t
                    .strip_prefix("g^")
                    .and_then(|k| k.trim().parse::<u32>().ok())
                    .filter(|&k| (k as u64) < MAX_FIELD_ORDER - 1)
                    .ok_or_else(|| Error::BadElement(s.to_string()))?;
                Ok(FieldElement::from_log(k))
            }
        }
    }
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FieldElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2u32;
    while (i as u64) * (i as u64) <= p as u64 {
        if p % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

/// Arithmetic context for GF(p^m).
#[derive(Clone, PartialEq, Eq)]
pub struct FieldCtx {
    p: u32,
    m: u32,
    q: u32,
    /// Monic modulus, coefficients `c_0..=c_m`.
    modulus: Vec<u32>,
    /// `exp[i]` is the vector representation (base-p digits) of `g^i`.
    exp: Vec<u32>,
    /// `log[v]` for vector representation `v != 0`.
    log: Vec<u32>,
    /// `zech[t] = log(1 + g^t)`, `NO_ZECH` when `1 + g^t = 0`.
    zech: Vec<u32>,
    /// log of -1.
    neg_one: u32,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {:?}", self.p, self.m, self.modulus)
    }
}

/// Remainder of `a` modulo the monic polynomial `b` over GF(p).
fn poly_rem_mod_p(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (i, &c) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + (p - (lead * c) % p)) % p;
            }
        }
        r.pop();
    }
    r
}

/// Trial division by every monic polynomial of degree `1..=m/2`.
fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let m = modulus.len() - 1;
    if m == 1 {
        return true;
    }
    for deg in 1..=m / 2 {
        let count = (p as u64).pow(deg as u32);
        for code in 0..count {
            let mut div = Vec::with_capacity(deg + 1);
            let mut c = code;
            for _ in 0..deg {
                div.push((c % p as u64) as u32);
                c /= p as u64;
            }
            div.push(1);
            if poly_rem_mod_p(modulus, &div, p).iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

/// Builds the power table of the indeterminate modulo `modulus`; `None`
/// when its multiplicative order is smaller than `p^m - 1`.
fn power_table(modulus: &[u32], p: u32) -> Option<Vec<u32>> {
    let m = modulus.len() - 1;
    let q = (p as u64).pow(m as u32) as usize;
    let encode = |v: &[u32]| -> u32 {
        v.iter().rev().fold(0u32, |acc, &c| acc * p + c)
    };
    let mut exp = Vec::with_capacity(q - 1);
    let mut cur = vec![0u32; m];
    cur[0] = 1;
    for i in 0..q - 1 {
        let code = encode(&cur);
        if i > 0 && code == 1 {
            return None;
        }
        exp.push(code);
        // multiply by x
        let top = cur[m - 1];
        for t in (1..m).rev() {
            cur[t] = cur[t - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for t in 0..m {
                cur[t] = (cur[t] + p - (top * modulus[t]) % p) % p;
            }
        }
    }
    if encode(&cur) != 1 {
        return None;
    }
    Some(exp)
}

impl FieldCtx {
    /// Builds GF(p^m). Without an explicit modulus the smallest primitive
    /// monic polynomial is chosen, ordering by the integer `sum c_i p^i`.
    pub fn new(p: u32, m: u32, modulus: Option<&[u32]>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::InvalidModulus("extension degree must be positive".into()));
        }
        let q = (p as u64).checked_pow(m).filter(|&q| q <= MAX_FIELD_ORDER);
        let Some(q) = q else {
            return Err(Error::FieldTooLarge { p, m });
        };
        let (modulus, exp) = match modulus {
            Some(c) => {
                if c.len() != m as usize + 1 {
                    return Err(Error::InvalidModulus(format!(
                        "expected {} coefficients, got {}",
                        m + 1,
                        c.len()
                    )));
                }
                if c.iter().any(|&x| x >= p) {
                    return Err(Error::InvalidModulus("coefficient not reduced mod p".into()));
                }
                if c[m as usize] != 1 {
                    return Err(Error::InvalidModulus("modulus must be monic".into()));
                }
                if !is_irreducible(c, p) {
                    return Err(Error::ReducibleModulus(p));
                }
                let exp = power_table(c, p).ok_or(Error::NotPrimitive)?;
                (c.to_vec(), exp)
            }
            None => {
                let lower = (p as u64).pow(m);
                let mut found = None;
                for code in 0..lower {
                    let mut c = Vec::with_capacity(m as usize + 1);
                    let mut x = code;
                    for _ in 0..m {
                        c.push((x % p as u64) as u32);
                        x /= p as u64;
                    }
                    c.push(1);
                    if c[0] == 0 && m > 1 {
                        continue;
                    }
                    if !is_irreducible(&c, p) {
                        continue;
                    }
                    if let Some(exp) = power_table(&c, p) {
                        found = Some((c, exp));
                        break;
                    }
                }
                found.expect("a primitive polynomial exists for every p, m")
            }
        };
        let q = q as u32;
        let mut log = vec![u32::MAX; q as usize];
        for (i, &v) in exp.iter().enumerate() {
            log[v as usize] = i as u32;
        }
        let order = q - 1;
        let mut ctx = FieldCtx {
            p,
            m,
            q,
            modulus,
            exp,
            log,
            zech: Vec::new(),
            neg_one: if p == 2 { 0 } else { order / 2 },
        };
        ctx.zech = (0..order)
            .map(|t| {
                let s = ctx.vec_add(1, ctx.exp[t as usize]);
                if s == 0 {
                    NO_ZECH
                } else {
                    ctx.log[s as usize]
                }
            })
            .collect();
        Ok(ctx)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The generator `g`, i.e. the class of the indeterminate.
    pub fn generator(&self) -> FieldElement {
        FieldElement::from_log(1 % (self.q - 1))
    }

    /// Vector representations of `g^0, g^1, ..., g^(q-2)`.
    pub fn exp_table(&self) -> &[u32] {
        &self.exp
    }

    /// Every element in canonical order (zero, then increasing log).
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q as usize).map(FieldElement::from_index)
    }

    /// Element from its vector representation (base-p digits of the residue).
    pub fn from_vector(&self, v: u32) -> FieldElement {
        if v == 0 {
            FieldElement::ZERO
        } else {
            FieldElement::from_log(self.log[v as usize])
        }
    }

    pub fn to_vector(&self, a: FieldElement) -> u32 {
        match a.log() {
            None => 0,
            Some(k) => self.exp[k as usize],
        }
    }

    /// Image of an integer under Z -> GF(p) -> GF(p^m).
    pub fn from_int(&self, n: i64) -> FieldElement {
        self.from_vector(n.rem_euclid(self.p as i64) as u32)
    }

    /// Digit-wise addition of vector representations.
    #[inline]
    pub fn vec_add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let p = self.p;
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        while a != 0 || b != 0 {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let (Some(i), Some(j)) = (a.log(), b.log()) else {
            return if a.is_zero() { b } else { a };
        };
        let order = self.q - 1;
        let t = if j >= i { j - i } else { j + order - i };
        let z = self.zech[t as usize];
        if z == NO_ZECH {
            FieldElement::ZERO
        } else {
            FieldElement::from_log((i + z) % order)
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        match a.log() {
            None => a,
            Some(i) => FieldElement::from_log((i + self.neg_one) % (self.q - 1)),
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match (a.log(), b.log()) {
            (Some(i), Some(j)) => FieldElement::from_log((i + j) % (self.q - 1)),
            _ => FieldElement::ZERO,
        }
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        let i = a.log().ok_or(Error::DivisionByZero)?;
        let order = self.q - 1;
        Ok(FieldElement::from_log((order - i) % order))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e`, with `0^0 = 1`.
    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        match a.log() {
            None => FieldElement::ZERO,
            Some(i) => {
                let order = (self.q - 1) as u64;
                FieldElement::from_log(((i as u64 * (e % order)) % order) as u32)
            }
        }
    }

    pub fn frobenius(&self, a: FieldElement) -> FieldElement {
        self.pow(a, self.p as u64)
    }

    pub fn contains(&self, a: FieldElement) -> bool {
        a.index() < self.q as usize
    }

    /// The `p^e` elements of the subfield GF(p^e) in canonical order.
    pub fn subfield_elements(&self, e: u32) -> Result<Vec<FieldElement>> {
        if e == 0 || self.m % e != 0 {
            return Err(Error::DegreeNotDividing { e, m: self.m });
        }
        let sub_order = self.p.pow(e) - 1;
        let step = (self.q - 1) / sub_order;
        let mut out = Vec::with_capacity(sub_order as usize + 1);
        out.push(FieldElement::ZERO);
        out.extend((0..sub_order).map(|i| FieldElement::from_log(i * step)));
        Ok(out)
    }

    /// True when `a` lies in GF(p^e).
    pub fn in_subfield(&self, a: FieldElement, e: u32) -> bool {
        match a.log() {
            None => true,
            Some(i) => {
                let step = (self.q - 1) / (self.p.pow(e) - 1);
                i % step == 0
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf2_has_single_entry_tables() {
        let f = FieldCtx::new(2, 1, None).unwrap();
        assert_eq!(f.order(), 2);
        assert_eq!(f.exp_table(), &[1]);
        assert_eq!(f.modulus(), &[1, 1]);
        assert_eq!(f.add(FieldElement::ONE, FieldElement::ONE), FieldElement::ZERO);
    }

    #[test]
    fn gf4_defining_relation() {
        let f = FieldCtx::new(2, 2, Some(&[1, 1, 1])).unwrap();
        let g = f.generator();
        assert_eq!(f.add(g, g), FieldElement::ZERO);
        assert_eq!(f.mul(g, g), f.add(g, FieldElement::ONE));
    }

    #[test]
    fn gf9_default_modulus() {
        let f = FieldCtx::new(3, 2, None).unwrap();
        // x^2 + x + 2 is the smallest primitive quadratic over GF(3)
        assert_eq!(f.modulus(), &[2, 1, 1]);
        assert_eq!(f.exp_table().len(), 8);
        assert_eq!(f.pow(f.generator(), 4), f.neg(FieldElement::ONE));
        let two = f.from_int(2);
        assert_eq!(f.inv(two).unwrap(), two);
    }

    #[test]
    fn gf16_default_is_x4_x_1() {
        let f = FieldCtx::new(2, 4, None).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 0, 0, 1]);
        let sub = f.subfield_elements(2).unwrap();
        let expect = vec![
            FieldElement::ZERO,
            FieldElement::ONE,
            FieldElement::from_log(5),
            FieldElement::from_log(10),
        ];
        assert_eq!(sub, expect);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(FieldCtx::new(4, 1, None).unwrap_err(), Error::NotPrime(4));
        assert_eq!(
            FieldCtx::new(2, 2, Some(&[1, 0, 1])).unwrap_err(),
            Error::ReducibleModulus(2)
        );
        // x^4 + x^3 + x^2 + x + 1 is irreducible over GF(2) with roots of order 5
        assert_eq!(
            FieldCtx::new(2, 4, Some(&[1, 1, 1, 1, 1])).unwrap_err(),
            Error::NotPrimitive
        );
        assert!(matches!(FieldCtx::new(2, 17, None), Err(Error::FieldTooLarge { .. })));
        assert_eq!(
            FieldCtx::new(2, 4, None).unwrap().subfield_elements(3).unwrap_err(),
            Error::DegreeNotDividing { e: 3, m: 4 }
        );
        let f = FieldCtx::new(3, 1, None).unwrap();
        assert_eq!(f.inv(FieldElement::ZERO).unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn whole_field_and_prime_subfield() {
        let f = FieldCtx::new(2, 2, None).unwrap();
        assert_eq!(f.subfield_elements(1).unwrap(), vec![FieldElement::ZERO, FieldElement::ONE]);
        assert_eq!(f.subfield_elements(2).unwrap().len(), 4);
    }

    #[test]
    fn element_text_round_trip() {
        for s in ["0", "1", "g^3"] {
            assert_eq!(s.parse::<FieldElement>().unwrap().to_string(), s);
        }
        assert_eq!("g".parse::<FieldElement>().unwrap(), FieldElement::from_log(1));
        assert!("h^2".parse::<FieldElement>().is_err());
    }
}
