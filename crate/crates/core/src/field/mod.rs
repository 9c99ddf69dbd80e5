//! Exact arithmetic in GF(p^m) for odd p.
//!
//! Elements are stored by their position in the field enumeration order:
//! the coefficient vector `(c_0, .., c_{m-1})` of the polynomial residue maps
//! to `c_0 + c_1 p + .. + c_{m-1} p^{m-1}`. All arithmetic goes through
//! exp/log/Zech tables built once at construction, so every operation is a
//! handful of table lookups.

mod poly;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub(crate) use poly::{is_prime, prime_factors};

/// Default bound on q so the discrete-log tables stay small.
pub const DEFAULT_MAX_FIELD: u64 = 1 << 20;

/// Environment variable overriding [`DEFAULT_MAX_FIELD`].
pub const MAX_FIELD_ENV: &str = "GRSDUAL_MAX_FIELD";

pub(crate) const LOG_ZERO: u32 = u32::MAX;

/// The bound on q in effect: `GRSDUAL_MAX_FIELD` if set and parseable,
/// otherwise [`DEFAULT_MAX_FIELD`].
pub fn max_field_bound() -> u64 {
    std::env::var(MAX_FIELD_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_FIELD)
}

/// A field element. Carries a tag identifying the field it belongs to so
/// that elements of different fields are never mixed silently.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem {
    raw: u32,
    tag: u32,
}

impl Elem {
    /// Position in the field enumeration order.
    pub fn raw(self) -> u32 {
        self.raw
    }

    pub fn is_zero(self) -> bool {
        self.raw == 0
    }
}

/// A checked arithmetic request, see [`Field::eval`].
#[derive(Clone, Copy, Debug)]
pub enum Op {
    Add(Elem, Elem),
    Sub(Elem, Elem),
    Mul(Elem, Elem),
    Div(Elem, Elem),
    Neg(Elem),
    Inv(Elem),
    Pow(Elem, i64),
}

struct Inner {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    primitive: u32,
    tag: u32,
    // exp[j] = raw(w^j), doubled so sums of two logs need no reduction
    exp: Vec<u32>,
    log: Vec<u32>,
    // zech[d] = log(1 + w^d)
    zech: Vec<u32>,
}

/// The field GF(p^m) together with its primitive element and discrete-log
/// tables. Cheap to clone; immutable after construction.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.0.p)
            .field("m", &self.0.m)
            .field("modulus", &self.0.modulus)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.modulus == other.0.modulus
    }
}

impl Eq for Field {}

fn raw_to_coeffs(raw: u64, p: u64, m: usize) -> Vec<u64> {
    let mut r = raw;
    (0..m)
        .map(|_| {
            let c = r % p;
            r /= p;
            c
        })
        .collect()
}

fn coeffs_to_raw(c: &[u64], p: u64) -> u64 {
    c.iter().rev().fold(0, |acc, &x| acc * p + x)
}

fn checked_order(p: u64, m: u32, bound: u64) -> Result<u64> {
    if p < 3 || !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if m == 0 {
        return Err(Error::ZeroDegree);
    }
    let q = p.checked_pow(m).filter(|&q| q <= bound).ok_or(Error::FieldTooLarge {
        q: p.saturating_pow(m),
        bound,
    })?;
    if q > u32::MAX as u64 / 2 {
        return Err(Error::FieldTooLarge { q, bound });
    }
    Ok(q)
}

fn has_full_order(g: &[u64], f: &[u64], p: u64, q: u64) -> bool {
    prime_factors(q - 1)
        .into_iter()
        .all(|l| poly::pow_poly_mod(g, ((q - 1) / l) as u128, f, p) != vec![1])
}

impl Field {
    /// Builds GF(p^m) under the bound from [`max_field_bound`].
    pub fn new(p: u64, m: u32) -> Result<Self> {
        Self::with_bound(p, m, max_field_bound())
    }

    /// Builds GF(p^m) using the lexicographically smallest monic irreducible
    /// polynomial (coefficients read from the leading term down) whose root
    /// `x` is primitive; `x` becomes the primitive element.
    pub fn with_bound(p: u64, m: u32, bound: u64) -> Result<Self> {
        let q = checked_order(p, m, bound)?;
        let x: Vec<u64> = vec![0, 1];
        for low in 0..q {
            let mut f = raw_to_coeffs(low, p, m as usize);
            if f[0] == 0 {
                continue;
            }
            f.push(1);
            if !poly::is_irreducible(&f, p) {
                continue;
            }
            let g = poly::rem(&x, &f, p);
            if has_full_order(&g, &f, p, q) {
                let g_raw = coeffs_to_raw(&g, p);
                return Self::from_parts(p, m, q, f, g_raw);
            }
        }
        unreachable!("every finite field has a primitive polynomial")
    }

    /// Builds a field from an explicit modulus (constant term first, monic).
    /// If `x` is primitive it is used; otherwise the first primitive element
    /// in enumeration order.
    pub fn from_modulus(p: u64, modulus: &[u64], bound: u64) -> Result<Self> {
        if modulus.len() < 2 {
            return Err(Error::BadModulus("degree must be at least 1".into()));
        }
        let m = (modulus.len() - 1) as u32;
        let q = checked_order(p, m, bound)?;
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::BadModulus("coefficient out of range".into()));
        }
        if modulus[m as usize] != 1 {
            return Err(Error::BadModulus("not monic".into()));
        }
        if !poly::is_irreducible(modulus, p) {
            return Err(Error::BadModulus("reducible".into()));
        }
        let f = modulus.to_vec();
        let x = poly::rem(&[0, 1], &f, p);
        let g_raw = if has_full_order(&x, &f, p, q) {
            coeffs_to_raw(&x, p)
        } else {
            (1..q)
                .find(|&raw| has_full_order(&raw_to_coeffs(raw, p, m as usize), &f, p, q))
                .expect("multiplicative group is cyclic")
        };
        Self::from_parts(p, m, q, f, g_raw)
    }

    fn from_parts(p: u64, m: u32, q: u64, f: Vec<u64>, g_raw: u64) -> Result<Self> {
        let order = (q - 1) as usize;
        let g = raw_to_coeffs(g_raw, p, m as usize);
        let mut exp = vec![0u32; 2 * order];
        let mut log = vec![LOG_ZERO; q as usize];
        let mut cur: Vec<u64> = vec![1];
        for j in 0..order {
            let mut c = cur.clone();
            c.resize(m as usize, 0);
            let raw = coeffs_to_raw(&c, p) as u32;
            if log[raw as usize] != LOG_ZERO {
                return Err(Error::BadModulus("element is not primitive".into()));
            }
            exp[j] = raw;
            exp[j + order] = raw;
            log[raw as usize] = j as u32;
            cur = poly::mul_mod(&cur, &g, &f, p);
        }
        let add_digits = |a: u64, b: u64| -> u64 {
            let (ca, cb) = (raw_to_coeffs(a, p, m as usize), raw_to_coeffs(b, p, m as usize));
            let s: Vec<u64> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % p).collect();
            coeffs_to_raw(&s, p)
        };
        let zech = (0..order)
            .map(|d| log[add_digits(1, exp[d] as u64) as usize])
            .collect();
        let modulus: Vec<u32> = f.iter().map(|&c| c as u32).collect();
        // FNV-1a over (p, modulus)
        let mut tag: u32 = 0x811c_9dc5;
        for w in std::iter::once(p as u32).chain(modulus.iter().copied()) {
            for b in w.to_le_bytes() {
                tag ^= b as u32;
                tag = tag.wrapping_mul(0x0100_0193);
            }
        }
        Ok(Field(Arc::new(Inner {
            p: p as u32,
            m,
            q: q as u32,
            modulus,
            primitive: g_raw as u32,
            tag,
            exp,
            log,
            zech,
        })))
    }

    pub fn p(&self) -> u64 {
        self.0.p as u64
    }

    pub fn m(&self) -> u32 {
        self.0.m
    }

    pub fn q(&self) -> u64 {
        self.0.q as u64
    }

    /// Order of the multiplicative group, q - 1.
    pub fn order(&self) -> u64 {
        self.q() - 1
    }

    /// Modulus coefficients, constant term first, including the leading 1.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    #[inline]
    fn elem(&self, raw: u32) -> Elem {
        Elem {
            raw,
            tag: self.0.tag,
        }
    }

    /// Whether `e` belongs to this field.
    pub fn owns(&self, e: Elem) -> bool {
        e.tag == self.0.tag && e.raw < self.0.q
    }

    pub fn check(&self, e: Elem) -> Result<Elem> {
        if self.owns(e) {
            Ok(e)
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn zero(&self) -> Elem {
        self.elem(0)
    }

    pub fn one(&self) -> Elem {
        self.elem(1)
    }

    /// The primitive element w.
    pub fn primitive(&self) -> Elem {
        self.elem(self.0.primitive)
    }

    /// Embeds an integer through GF(p).
    pub fn from_int(&self, n: i64) -> Elem {
        self.elem(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// The element with the given enumeration index.
    pub fn from_raw(&self, raw: u32) -> Result<Elem> {
        if raw < self.0.q {
            Ok(self.elem(raw))
        } else {
            Err(Error::BadCoefficients(format!("index {raw} >= q")))
        }
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<Elem> {
        if coeffs.len() != self.0.m as usize {
            return Err(Error::BadCoefficients(format!(
                "expected {} coefficients, got {}",
                self.0.m,
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|&c| c >= self.p()) {
            return Err(Error::BadCoefficients("coefficient out of range".into()));
        }
        Ok(self.elem(coeffs_to_raw(coeffs, self.p()) as u32))
    }

    /// Coefficient vector of length m, constant term first.
    pub fn coeffs(&self, e: Elem) -> Vec<u64> {
        raw_to_coeffs(e.raw as u64, self.p(), self.0.m as usize)
    }

    /// All elements in enumeration order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.0.q).map(move |r| self.elem(r))
    }

    /// w^j for any integer j.
    pub fn exp(&self, j: i64) -> Elem {
        let j = j.rem_euclid(self.order() as i64) as usize;
        self.elem(self.0.exp[j])
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        debug_assert_eq!(a.tag, b.tag);
        if a.raw == 0 {
            return b;
        }
        if b.raw == 0 {
            return a;
        }
        let ord = self.0.q - 1;
        let la = self.0.log[a.raw as usize];
        let lb = self.0.log[b.raw as usize];
        let mut d = lb + ord - la;
        if d >= ord {
            d -= ord;
        }
        let z = self.0.zech[d as usize];
        if z == LOG_ZERO {
            return self.zero();
        }
        self.elem(self.0.exp[(la + z) as usize])
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if a.raw == 0 {
            return a;
        }
        let l = self.0.log[a.raw as usize] + (self.0.q - 1) / 2;
        self.elem(self.0.exp[l as usize])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        debug_assert_eq!(a.tag, b.tag);
        if a.raw == 0 || b.raw == 0 {
            return self.zero();
        }
        let l = self.0.log[a.raw as usize] + self.0.log[b.raw as usize];
        self.elem(self.0.exp[l as usize])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.raw == 0 {
            return Err(Error::DivisionByZero);
        }
        let ord = self.0.q - 1;
        let l = (ord - self.0.log[a.raw as usize]) % ord;
        Ok(self.elem(self.0.exp[l as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, e: i64) -> Result<Elem> {
        if a.raw == 0 {
            return match e.signum() {
                0 => Ok(self.one()),
                1 => Ok(self.zero()),
                _ => Err(Error::DivisionByZero),
            };
        }
        let l = self.0.log[a.raw as usize] as i128 * e as i128;
        let l = l.rem_euclid(self.order() as i128) as i64;
        Ok(self.exp(l))
    }

    /// `a^e` for `e >= 0`; never fails.
    pub fn pow_u(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return self.one();
        }
        if a.raw == 0 {
            return self.zero();
        }
        let l = self.0.log[a.raw as usize] as u128 * e as u128 % self.order() as u128;
        self.exp(l as i64)
    }

    /// Context-checked arithmetic.
    pub fn eval(&self, op: Op) -> Result<Elem> {
        match op {
            Op::Add(a, b) => Ok(self.add(self.check(a)?, self.check(b)?)),
            Op::Sub(a, b) => Ok(self.sub(self.check(a)?, self.check(b)?)),
            Op::Mul(a, b) => Ok(self.mul(self.check(a)?, self.check(b)?)),
            Op::Div(a, b) => self.div(self.check(a)?, self.check(b)?),
            Op::Neg(a) => Ok(self.neg(self.check(a)?)),
            Op::Inv(a) => self.inv(self.check(a)?),
            Op::Pow(a, e) => self.pow(self.check(a)?, e),
        }
    }

    pub fn sum<I: IntoIterator<Item = Elem>>(&self, it: I) -> Elem {
        it.into_iter().fold(self.zero(), |acc, x| self.add(acc, x))
    }

    pub fn product<I: IntoIterator<Item = Elem>>(&self, it: I) -> Elem {
        it.into_iter().fold(self.one(), |acc, x| self.mul(acc, x))
    }

    /// Discrete logarithm base w, in `[0, q - 2]`.
    pub fn dlog(&self, x: Elem) -> Result<u64> {
        let x = self.check(x)?;
        if x.raw == 0 {
            return Err(Error::ZeroArgument);
        }
        Ok(self.0.log[x.raw as usize] as u64)
    }

    /// Quadratic character: +1 on squares, -1 on non-squares.
    pub fn quadratic_character(&self, x: Elem) -> Result<i8> {
        Ok(if self.dlog(x)? % 2 == 0 { 1 } else { -1 })
    }

    pub fn is_square(&self, x: Elem) -> Result<bool> {
        Ok(self.quadratic_character(x)? == 1)
    }

    /// The square root with discrete log in `[0, (q-1)/2)`.
    pub fn sqrt(&self, x: Elem) -> Result<Elem> {
        let l = self.dlog(x)?;
        if l % 2 == 1 {
            return Err(Error::NotASquare);
        }
        Ok(self.exp((l / 2) as i64))
    }

    /// The subgroup of order `d`, listed as `w^{i (q-1)/d}` for `i = 0..d`.
    pub fn subgroup(&self, d: u64) -> Result<Vec<Elem>> {
        let order = self.order();
        if d == 0 || order % d != 0 {
            return Err(Error::NotADivisor { d, order });
        }
        let step = (order / d) as i64;
        Ok((0..d as i64).map(|i| self.exp(i * step)).collect())
    }

    /// Compact rendering: `0` or `w^j`.
    pub fn fmt_elem(&self, e: Elem) -> String {
        match self.dlog(e) {
            Ok(j) => format!("w^{j}"),
            Err(_) => "0".to_string(),
        }
    }

    #[inline]
    pub(crate) fn log_arith(&self) -> LogArith<'_> {
        LogArith {
            exp: &self.0.exp,
            log: &self.0.log,
            zech: &self.0.zech,
            order: self.0.q - 1,
            half: (self.0.q - 1) / 2,
        }
    }
}

/// Arithmetic on discrete logs, with [`LOG_ZERO`] standing for 0. Used by the
/// elimination kernels where the matrix is converted once up front.
pub(crate) struct LogArith<'a> {
    exp: &'a [u32],
    log: &'a [u32],
    zech: &'a [u32],
    pub(crate) order: u32,
    pub(crate) half: u32,
}

impl LogArith<'_> {
    #[inline]
    pub(crate) fn to_log(&self, e: Elem) -> u32 {
        self.log[e.raw as usize]
    }

    #[allow(dead_code)]
    #[inline]
    pub(crate) fn raw_of(&self, l: u32) -> u32 {
        if l == LOG_ZERO {
            0
        } else {
            self.exp[l as usize]
        }
    }

    /// log(x * y) for nonzero operands.
    #[inline]
    pub(crate) fn mul(&self, x: u32, y: u32) -> u32 {
        let s = x + y;
        if s >= self.order {
            s - self.order
        } else {
            s
        }
    }

    /// log(x / y) for nonzero operands.
    #[inline]
    pub(crate) fn div(&self, x: u32, y: u32) -> u32 {
        if x >= y {
            x - y
        } else {
            x + self.order - y
        }
    }

    /// log(x + y), either operand may be zero.
    #[inline]
    pub(crate) fn add(&self, x: u32, y: u32) -> u32 {
        if x == LOG_ZERO {
            return y;
        }
        if y == LOG_ZERO {
            return x;
        }
        let d = self.div(y, x);
        let z = self.zech[d as usize];
        if z == LOG_ZERO {
            LOG_ZERO
        } else {
            self.mul(x, z)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf9() -> Field {
        Field::new(3, 2).unwrap()
    }

    #[test]
    fn gf3_primitive_is_two() {
        let f = Field::new(3, 1).unwrap();
        assert_eq!(f.primitive(), f.from_int(2));
        // brute force: 2 generates {1, 2}
        let gen: Vec<u32> = (0..2).map(|j| f.exp(j).raw()).collect();
        assert_eq!(gen, vec![1, 2]);
        assert_eq!(f.add(f.from_int(2), f.from_int(2)), f.one());
    }

    #[test]
    fn gf9_modulus_is_smallest_primitive_quadratic() {
        // Monic irreducible quadratics over GF(3) ordered high-degree first:
        // x^2+1 (x has order 4), x^2+x+2 (x primitive), x^2+2x+2.
        let f = gf9();
        assert_eq!(f.modulus(), &[2, 1, 1]);
        assert_eq!(f.coeffs(f.primitive()), vec![0, 1]);
    }

    #[test]
    fn even_characteristic_rejected() {
        assert!(matches!(Field::new(2, 1), Err(Error::NotPrime(2))));
        assert!(matches!(Field::new(9, 1), Err(Error::NotPrime(9))));
    }

    #[test]
    fn bound_enforced() {
        assert!(matches!(
            Field::with_bound(3, 5, 100),
            Err(Error::FieldTooLarge { q: 243, bound: 100 })
        ));
    }

    #[test]
    fn gf9_examples() {
        let f = gf9();
        let w = f.primitive();
        assert_eq!(f.mul(w, f.inv(w).unwrap()), f.one());
        assert_eq!(f.pow(w, 8).unwrap(), f.one());
        let minus_one = f.neg(f.one());
        assert_eq!(f.dlog(minus_one).unwrap(), 4);
        assert_eq!(f.quadratic_character(minus_one).unwrap(), 1);
        assert_eq!(f.quadratic_character(w).unwrap(), -1);
        assert_eq!(f.sqrt(f.pow(w, 2).unwrap()).unwrap(), w);
        assert_eq!(f.sqrt(minus_one).unwrap(), f.pow(w, 2).unwrap());
        assert_eq!(f.sqrt(f.one()).unwrap(), f.one());
        assert!(matches!(f.sqrt(w), Err(Error::NotASquare)));
        assert!(matches!(f.sqrt(f.zero()), Err(Error::ZeroArgument)));
        assert!(matches!(f.dlog(f.zero()), Err(Error::ZeroArgument)));
    }

    #[test]
    fn gf9_squares_subgroup() {
        let f = gf9();
        let sub = f.subgroup(4).unwrap();
        let mut squares: Vec<Elem> = f.elements().skip(1).map(|x| f.mul(x, x)).collect();
        squares.sort();
        squares.dedup();
        let mut s = sub.clone();
        s.sort();
        assert_eq!(s, squares);
        assert_eq!(f.subgroup(1).unwrap(), vec![f.one()]);
        assert_eq!(f.subgroup(8).unwrap().len(), 8);
        assert!(matches!(f.subgroup(3), Err(Error::NotADivisor { .. })));
    }

    #[test]
    fn checked_ops() {
        let f = gf9();
        let g = Field::new(5, 1).unwrap();
        assert!(matches!(
            f.eval(Op::Add(f.one(), g.one())),
            Err(Error::ContextMismatch)
        ));
        assert!(matches!(
            f.eval(Op::Div(f.one(), f.zero())),
            Err(Error::DivisionByZero)
        ));
        assert!(matches!(f.eval(Op::Inv(f.zero())), Err(Error::DivisionByZero)));
        assert_eq!(f.eval(Op::Pow(f.primitive(), -1)).unwrap(), f.exp(7));
    }

    #[test]
    fn arithmetic_matches_polynomial_model() {
        // independent model of GF(9) = GF(3)[x]/(x^2 + x + 2) on coefficient pairs
        let f = gf9();
        let mul_model = |a: (u64, u64), b: (u64, u64)| {
            // (a0 + a1 x)(b0 + b1 x) with x^2 = -x - 2 = 2x + 1
            let c0 = a.0 * b.0;
            let c1 = a.0 * b.1 + a.1 * b.0;
            let c2 = a.1 * b.1;
            ((c0 + c2) % 3, (c1 + 2 * c2) % 3)
        };
        for x in f.elements() {
            for y in f.elements() {
                let (cx, cy) = (f.coeffs(x), f.coeffs(y));
                let (a, b) = ((cx[0], cx[1]), (cy[0], cy[1]));
                let sum = f.coeffs(f.add(x, y));
                assert_eq!((sum[0], sum[1]), ((a.0 + b.0) % 3, (a.1 + b.1) % 3));
                let prod = f.coeffs(f.mul(x, y));
                assert_eq!((prod[0], prod[1]), mul_model(a, b));
            }
        }
    }

    #[test]
    fn explicit_modulus_roundtrip() {
        let f = Field::new(23, 2).unwrap();
        let m: Vec<u64> = f.modulus().iter().map(|&c| c as u64).collect();
        let g = Field::from_modulus(23, &m, DEFAULT_MAX_FIELD).unwrap();
        assert_eq!(f, g);
        assert_eq!(f.primitive().raw(), g.primitive().raw());
        // x^2 + 1 over GF(3): irreducible but x is not primitive
        let h = Field::from_modulus(3, &[1, 0, 1], DEFAULT_MAX_FIELD).unwrap();
        assert_eq!(h.pow(h.primitive(), 4).unwrap() == h.one(), false);
        assert!(Field::from_modulus(3, &[2, 0, 1], DEFAULT_MAX_FIELD).is_err());
    }
}
