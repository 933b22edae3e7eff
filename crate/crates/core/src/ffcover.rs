//! Rational maps over finite fields and their ramification.
//!
//! Field elements of `F_{p^k}` are encoded as integers `Σ c_i p^i`, where
//! `Σ c_i z^i` is the residue modulo the field's modulus. Polynomials are
//! dense coefficient vectors, lowest degree first.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::admissibility::is_prime;

/// Largest field order accepted by [`FiniteField::new`].
pub const MAX_FIELD_ORDER: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroExtension,
    #[error("field of order {p}^{k} is larger than {MAX_FIELD_ORDER}")]
    FieldTooLarge { p: u64, k: u32 },
    #[error("polynomials over different fields")]
    FieldMismatch,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("denominator is zero")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("map is constant")]
    ConstantMap,
    #[error("map is inseparable")]
    Inseparable,
    #[error("wild ramification (index {index}) at {point}")]
    Wild { point: String, index: u64 },
    #[error("parse error at offset {offset}: {reason}")]
    Parse { offset: usize, reason: String },
}

struct FieldInner {
    p: u32,
    k: u32,
    q: u32,
    /// Monic, lowest degree first, length `k + 1`.
    modulus: Vec<u32>,
    primitive: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// The finite field `F_{p^k}`, with the lexicographically smallest monic
/// irreducible modulus of degree `k`.
#[derive(Clone)]
pub struct FiniteField(Arc<FieldInner>);

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.k == other.0.k
    }
}

impl Eq for FiniteField {}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.0.p, self.0.k)
    }
}

// Arithmetic on polynomials over the prime field, used to set up the field.
mod prime_poly {
    pub fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn inv(a: u32, p: u32) -> u32 {
        pow(a, p - 2, p)
    }

    fn pow(a: u32, mut e: u32, p: u32) -> u32 {
        let (mut r, mut base, p) = (1u64, a as u64 % p as u64, p as u64);
        while e > 0 {
            if e & 1 == 1 {
                r = r * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        r as u32
    }

    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut a = trim(a.to_vec());
        let m = trim(m.to_vec());
        let lead_inv = inv(*m.last().unwrap(), p);
        while a.len() >= m.len() {
            let shift = a.len() - m.len();
            let c = (*a.last().unwrap() as u64 * lead_inv as u64 % p as u64) as u32;
            for (i, &mi) in m.iter().enumerate() {
                let sub = (c as u64 * mi as u64 % p as u64) as u32;
                a[shift + i] = (a[shift + i] + p - sub) % p;
            }
            a = trim(a);
        }
        a
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        trim(out.into_iter().map(|c| c as u32).collect())
    }

    pub fn mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        rem(&mul(a, b, p), m, p)
    }

    pub fn powmod(a: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
        let mut r = rem(&[1], m, p);
        let mut base = rem(a, m, p);
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(&r, &base, m, p);
            }
            base = mulmod(&base, &base, m, p);
            e >>= 1;
        }
        r
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// `f` monic of degree `k ≥ 1` is irreducible iff it shares no factor
    /// with `x^{p^i} - x` for `1 ≤ i ≤ k/2`.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let k = f.len() - 1;
        if k == 1 {
            return true;
        }
        let x = [0, 1];
        let mut h = x.to_vec();
        for _ in 1..=k / 2 {
            h = powmod(&h, p as u64, f, p);
            let mut diff = h.clone();
            diff.resize(diff.len().max(2), 0);
            diff[1] = (diff[1] + p - 1) % p;
            let g = gcd(f, &trim(diff), p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }
}

impl FiniteField {
    pub fn new(p: u64, k: u32) -> Result<Self, FfError> {
        if !is_prime(p) {
            return Err(FfError::NotPrime(p));
        }
        if k == 0 {
            return Err(FfError::ZeroExtension);
        }
        let q = p.checked_pow(k).filter(|&q| q <= MAX_FIELD_ORDER).ok_or(FfError::FieldTooLarge { p, k })?;
        let (p32, q32) = (p as u32, q as u32);
        let modulus = (0..q32)
            .map(|n| {
                let mut f = digits(n, p32, k);
                f.push(1);
                f
            })
            .find(|f| prime_poly::is_irreducible(f, p32))
            .expect("an irreducible polynomial of every degree exists");
        let slow_mul = |a: u32, b: u32| -> u32 {
            let prod = prime_poly::mulmod(&digits(a, p32, k), &digits(b, p32, k), &modulus, p32);
            undigits(&prod, p32)
        };
        let order_is_full = |g: u32| {
            let mut x = g;
            for n in 1..q32 - 1 {
                if x == 1 {
                    return n == q32 - 1;
                }
                x = slow_mul(x, g);
            }
            x == 1
        };
        let primitive = (1..q32).find(|&g| order_is_full(g)).expect("multiplicative group is cyclic");
        let mut exp = Vec::with_capacity(q32 as usize - 1);
        let mut log = vec![0u32; q32 as usize];
        let mut x = 1;
        for n in 0..q32 - 1 {
            exp.push(x);
            log[x as usize] = n;
            x = slow_mul(x, primitive);
        }
        Ok(FiniteField(Arc::new(FieldInner { p: p32, k, q: q32, modulus, primitive, exp, log })))
    }

    pub fn p(&self) -> u64 {
        self.0.p as u64
    }

    pub fn k(&self) -> u32 {
        self.0.k
    }

    pub fn order(&self) -> u64 {
        self.0.q as u64
    }

    /// Coefficients of the modulus, lowest degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// The smallest generator of the multiplicative group.
    pub fn primitive(&self) -> u32 {
        self.0.primitive
    }

    /// The class of `z` (the root of the modulus); `z` itself only when
    /// `k > 1`.
    pub fn z(&self) -> u32 {
        if self.0.k == 1 {
            // the modulus is x - c with c its own root
            (self.0.p - self.0.modulus[0]) % self.0.p
        } else {
            self.0.p
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.0.q
    }

    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.0.p as i64) as u32
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.0.k == 1 {
            return (a + b) % self.0.p;
        }
        let p = self.0.p;
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        let p = self.0.p;
        let (mut a, mut out, mut place) = (a, 0, 1);
        while a > 0 {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.0.q - 1;
        self.0.exp[((self.0.log[a as usize] + self.0.log[b as usize]) % n) as usize]
    }

    pub fn inv(&self, a: u32) -> Result<u32, FfError> {
        if a == 0 {
            return Err(FfError::DivisionByZero);
        }
        let n = self.0.q - 1;
        Ok(self.0.exp[((n - self.0.log[a as usize]) % n) as usize])
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32, FfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.0.q - 1) as u64;
        self.0.exp[((self.0.log[a as usize] as u64 * (e % n)) % n) as usize]
    }

    /// Text form as a polynomial in `z`, highest power first, e.g. `2*z+1`.
    pub fn format(&self, a: u32) -> String {
        if a == 0 {
            return "0".into();
        }
        let ds = digits(a, self.0.p, self.0.k);
        let mut terms = Vec::new();
        for (i, &c) in ds.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            terms.push(match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "z".into(),
                (1, c) => format!("{c}*z"),
                (i, 1) => format!("z^{i}"),
                (i, c) => format!("{c}*z^{i}"),
            });
        }
        terms.join("+")
    }

    /// Parses a constant expression (see [`parse_poly`]) as a field element.
    pub fn parse_element(&self, text: &str, params: &HashMap<String, u32>) -> Result<u32, FfError> {
        let f = parse_poly(self, text, params)?;
        if f.degree().unwrap_or(0) > 0 {
            return Err(FfError::Parse { offset: 0, reason: "expected a constant".into() });
        }
        Ok(f.coeff(0))
    }
}

fn digits(mut n: u32, p: u32, k: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(k as usize);
    for _ in 0..k {
        out.push(n % p);
        n /= p;
    }
    out
}

fn undigits(ds: &[u32], p: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// A polynomial over a [`FiniteField`].
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: FiniteField,
    coeffs: Vec<u32>,
}

impl Poly {
    pub fn new(field: &FiniteField, mut coeffs: Vec<u32>) -> Poly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &FiniteField) -> Poly {
        Poly::new(field, Vec::new())
    }

    pub fn constant(field: &FiniteField, c: u32) -> Poly {
        Poly::new(field, vec![c])
    }

    pub fn x(field: &FiniteField) -> Poly {
        Poly::new(field, vec![0, 1])
    }

    pub fn monomial(field: &FiniteField, c: u32, n: usize) -> Poly {
        let mut coeffs = vec![0; n + 1];
        coeffs[n] = c;
        Poly::new(field, coeffs)
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(f, (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly::new(&self.field, self.coeffs.iter().map(|&c| self.field.neg(c)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u32) -> Poly {
        Poly::new(&self.field, self.coeffs.iter().map(|&a| self.field.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        let mut out = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, out)
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut r = Poly::constant(&self.field, 1);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        r
    }

    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly), FfError> {
        let f = &self.field;
        let dd = divisor.degree().ok_or(FfError::DivisionByZero)?;
        let lead_inv = f.inv(divisor.leading())?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0; self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let top = rem.len() - 1;
            let c = f.mul(rem[top], lead_inv);
            if c != 0 {
                let shift = top - dd;
                quot[shift] = c;
                for (i, &b) in divisor.coeffs.iter().enumerate() {
                    rem[shift + i] = f.sub(rem[shift + i], f.mul(c, b));
                }
            }
            rem.pop();
        }
        Ok((Poly::new(f, quot), Poly::new(f, rem)))
    }

    pub fn monic(&self) -> Poly {
        match self.field.inv(self.leading()) {
            Ok(c) => self.scale(c),
            Err(_) => self.clone(),
        }
    }

    /// Monic greatest common divisor; zero only if both are zero.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).expect("nonzero divisor").1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| f.mul(f.from_int(i as i64), c)).collect())
    }

    pub fn eval(&self, x: u32) -> u32 {
        let f = &self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// `x^n f(1/x)`.
    pub fn reverse(&self, n: usize) -> Poly {
        let mut coeffs = vec![0; n + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[n - i] = c;
        }
        Poly::new(&self.field, coeffs)
    }

    /// Multiplicity of `a` as a root.
    pub fn root_multiplicity(&self, a: u32) -> Result<usize, FfError> {
        if self.is_zero() {
            return Err(FfError::ZeroPolynomial);
        }
        let linear = Poly::new(&self.field, vec![self.field.neg(a), 1]);
        let mut g = self.clone();
        let mut m = 0;
        loop {
            let (q, r) = g.div_rem(&linear)?;
            if !r.is_zero() {
                return Ok(m);
            }
            g = q;
            m += 1;
        }
    }

    /// Roots in the field, with multiplicity, in increasing encoding order.
    pub fn roots(&self) -> Result<Vec<u32>, FfError> {
        if self.is_zero() {
            return Err(FfError::ZeroPolynomial);
        }
        let mut out = Vec::new();
        for a in self.field.elements() {
            if self.eval(a) == 0 {
                let m = self.root_multiplicity(a)?;
                out.extend(std::iter::repeat_n(a, m));
            }
        }
        Ok(out)
    }

    /// Every exponent with a nonzero coefficient is divisible by `p`.
    pub fn is_p_power_shaped(&self) -> bool {
        let p = self.field.p() as usize;
        self.coeffs.iter().enumerate().all(|(i, &c)| c == 0 || i % p == 0)
    }

    fn same_field(&self, other: &Poly) -> Result<(), FfError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FfError::FieldMismatch)
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str("+")?;
            }
            first = false;
            let text = self.field.format(c);
            let coeff = if i > 0 && text.contains('+') { format!("({text})") } else { text };
            match i {
                0 => f.write_str(&coeff)?,
                _ => {
                    if c != 1 {
                        write!(f, "{coeff}*")?;
                    }
                    if i == 1 {
                        f.write_str("x")?;
                    } else {
                        write!(f, "x^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{:?}]({self})", self.field)
    }
}

/// A polynomial with integer coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntPoly(pub Vec<i64>);

/// Coefficientwise reduction into the prime field.
pub fn reduce_mod_p(f: &IntPoly, field: &FiniteField) -> Poly {
    Poly::new(field, f.0.iter().map(|&c| field.from_int(c)).collect())
}

/// A polynomial in one variable whose coefficients are integer
/// polynomials in a parameter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamIntPoly(pub Vec<IntPoly>);

/// [`ParamIntPoly`] reduced mod `p`: coefficients are polynomials in the
/// parameter over the field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamPoly(pub Vec<Poly>);

impl ParamIntPoly {
    pub fn reduce_mod_p(&self, field: &FiniteField) -> ParamPoly {
        let mut coeffs: Vec<Poly> = self.0.iter().map(|c| reduce_mod_p(c, field)).collect();
        while coeffs.last().is_some_and(Poly::is_zero) {
            coeffs.pop();
        }
        ParamPoly(coeffs)
    }
}

impl ParamPoly {
    /// Substitutes a value for the parameter.
    pub fn specialize(&self, field: &FiniteField, value: u32) -> Poly {
        Poly::new(field, self.0.iter().map(|c| c.eval(value)).collect())
    }
}

/// `P^1` over the field: a finite element or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Point {
    Finite(u32),
    Infinity,
}

impl Point {
    pub fn format(&self, field: &FiniteField) -> String {
        match self {
            Point::Finite(a) => field.format(*a),
            Point::Infinity => "inf".into(),
        }
    }
}

/// `N / D` with `gcd(N, D) = 1` and `D` monic.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMap {
    num: Poly,
    den: Poly,
}

impl RationalMap {
    pub fn new(num: Poly, den: Poly) -> Result<RationalMap, FfError> {
        num.same_field(&den)?;
        if den.is_zero() {
            return Err(FfError::ZeroDenominator);
        }
        let field = num.field.clone();
        if num.is_zero() {
            return Ok(RationalMap { num, den: Poly::constant(&field, 1) });
        }
        let g = num.gcd(&den);
        let num = num.div_rem(&g)?.0;
        let den = den.div_rem(&g)?.0;
        let c = field.inv(den.leading())?;
        Ok(RationalMap { num: num.scale(c), den: den.scale(c) })
    }

    pub fn polynomial(num: Poly) -> RationalMap {
        let one = Poly::constant(&num.field, 1);
        RationalMap { num, den: one }
    }

    /// `(a x + b) / (c x + d)`; errors if `ad - bc = 0`.
    pub fn mobius(field: &FiniteField, a: u32, b: u32, c: u32, d: u32) -> Result<RationalMap, FfError> {
        if field.sub(field.mul(a, d), field.mul(b, c)) == 0 {
            return Err(FfError::ConstantMap);
        }
        RationalMap::new(Poly::new(field, vec![b, a]), Poly::new(field, vec![d, c]))
    }

    pub fn field(&self) -> &FiniteField {
        &self.num.field
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn degree(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    pub fn eval(&self, point: Point) -> Point {
        let f = self.field();
        match point {
            Point::Finite(a) => {
                let d = self.den.eval(a);
                if d == 0 {
                    Point::Infinity
                } else {
                    Point::Finite(f.div(self.num.eval(a), d).expect("nonzero"))
                }
            }
            Point::Infinity => {
                let (n, m) = (self.num.degree(), self.den.degree().expect("nonzero denominator"));
                match n {
                    None => Point::Finite(0),
                    Some(n) if n > m => Point::Infinity,
                    Some(n) if n < m => Point::Finite(0),
                    Some(_) => Point::Finite(f.div(self.num.leading(), self.den.leading()).expect("nonzero")),
                }
            }
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &RationalMap) -> Result<RationalMap, FfError> {
        self.num.same_field(&other.num)?;
        let n = self.degree();
        let field = self.field();
        let subst = |h: &Poly| {
            let mut acc = Poly::zero(field);
            for (i, &c) in h.coeffs.iter().enumerate() {
                if c != 0 {
                    let term = other.num.pow(i as u32).mul(&other.den.pow((n - i) as u32)).scale(c);
                    acc = acc.add(&term);
                }
            }
            acc
        };
        RationalMap::new(subst(&self.num), subst(&self.den))
    }

    pub fn add(&self, other: &RationalMap) -> Result<RationalMap, FfError> {
        RationalMap::new(self.num.mul(&other.den).add(&other.num.mul(&self.den)), self.den.mul(&other.den))
    }

    pub fn mul(&self, other: &RationalMap) -> Result<RationalMap, FfError> {
        RationalMap::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    /// `N' D - N D'`.
    pub fn wronskian(&self) -> Poly {
        self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative()))
    }

    /// `(N' D - N D') / D²`, reduced.
    pub fn derivative(&self) -> RationalMap {
        RationalMap::new(self.wronskian(), self.den.mul(&self.den)).expect("nonzero denominator")
    }

    pub fn is_separable(&self) -> bool {
        !self.wronskian().is_zero()
    }

    fn check_ramifiable(&self) -> Result<(), FfError> {
        if self.is_constant() {
            return Err(FfError::ConstantMap);
        }
        if !self.is_separable() {
            return Err(FfError::Inseparable);
        }
        Ok(())
    }

    /// Ramification index at `point`.
    pub fn ram_index(&self, point: Point) -> Result<u64, FfError> {
        self.check_ramifiable()?;
        let e = match (point, self.eval(point)) {
            (Point::Finite(a), Point::Finite(b)) => {
                self.num.sub(&self.den.scale(b)).root_multiplicity(a)?
            }
            (Point::Finite(a), Point::Infinity) => self.den.root_multiplicity(a)?,
            (Point::Infinity, value) => {
                let n = self.num.degree().unwrap_or(0);
                let m = self.den.degree().expect("nonzero denominator");
                match value {
                    Point::Infinity => n - m,
                    Point::Finite(_) if n < m => m - n,
                    Point::Finite(b) => {
                        // x = 1/t: f = N~(t) / D~(t) with both reversed at degree n
                        let nr = self.num.reverse(n);
                        let dr = self.den.reverse(n);
                        nr.sub(&dr.scale(b)).root_multiplicity(0)?
                    }
                }
            }
        };
        Ok(e as u64)
    }

    /// Every point of the field, and infinity, with index at least 2.
    pub fn ram_report(&self) -> Result<RamReport, FfError> {
        self.check_ramifiable()?;
        let field = self.field();
        let w = self.wronskian();
        let mut points: Vec<Point> =
            field.elements().filter(|&a| w.eval(a) == 0 || self.den.eval(a) == 0).map(Point::Finite).collect();
        points.push(Point::Infinity);
        let mut entries = Vec::new();
        for point in points {
            let index = self.ram_index(point)?;
            if index >= 2 {
                entries.push(RamEntry {
                    point,
                    value: self.eval(point),
                    index,
                    tame: index % field.p() != 0,
                });
            }
        }
        Ok(RamReport { separable: true, entries })
    }
}

impl fmt::Display for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalMap[{:?}]({self})", self.field())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamEntry {
    pub point: Point,
    pub value: Point,
    pub index: u64,
    pub tame: bool,
}

/// Ramified points found over the working field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamReport {
    pub separable: bool,
    pub entries: Vec<RamEntry>,
}

impl RamReport {
    pub fn points(&self) -> Vec<Point> {
        self.entries.iter().map(|e| e.point).collect()
    }

    pub fn branch_values(&self) -> BTreeMap<Point, usize> {
        let mut out = BTreeMap::new();
        for e in &self.entries {
            *out.entry(e.value).or_insert(0) += 1;
        }
        out
    }

    pub fn ramification_sum(&self) -> u64 {
        self.entries.iter().map(|e| e.index - 1).sum()
    }
}

/// Riemann–Hurwitz for a tame genus-0 cover of degree `d`, assuming every
/// ramification point is rational over the working field.
pub fn tame_rh_check(report: &RamReport, d: u64, field: &FiniteField) -> Result<bool, FfError> {
    if let Some(e) = report.entries.iter().find(|e| !e.tame) {
        return Err(FfError::Wild { point: e.point.format(field), index: e.index });
    }
    Ok(report.ramification_sum() + 2 == 2 * d)
}

/// Parses a polynomial in `x` such as `x^3+(1+u)*x^2` or `(-u-1)*x-u`.
///
/// Integers are reduced mod `p`; `z` is the root of the field's modulus,
/// `g` its primitive element, and other names are looked up in `params`.
pub fn parse_poly(field: &FiniteField, text: &str, params: &HashMap<String, u32>) -> Result<Poly, FfError> {
    let mut parser = Parser { field, params, src: text.as_bytes(), pos: 0 };
    let out = parser.expr()?;
    parser.skip_ws();
    if parser.pos != parser.src.len() {
        return Err(parser.error("unexpected input"));
    }
    Ok(out)
}

/// Parses `N` and `D` and reduces.
pub fn parse_map(
    field: &FiniteField,
    num: &str,
    den: Option<&str>,
    params: &HashMap<String, u32>,
) -> Result<RationalMap, FfError> {
    let n = parse_poly(field, num, params)?;
    let d = match den {
        Some(den) => parse_poly(field, den, params)?,
        None => Poly::constant(field, 1),
    };
    RationalMap::new(n, d)
}

struct Parser<'a> {
    field: &'a FiniteField,
    params: &'a HashMap<String, u32>,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, reason: &str) -> FfError {
        FfError::Parse { offset: self.pos, reason: reason.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly, FfError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, FfError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly, FfError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly, FfError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e = u32::try_from(e).map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u64, FfError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| FfError::Parse { offset: start, reason: "integer too large".into() })
    }

    fn atom(&mut self) -> Result<Poly, FfError> {
        let field = self.field;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(Poly::constant(field, (n % field.p()) as u32))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match name {
                    "x" => Ok(Poly::x(field)),
                    "z" => Ok(Poly::constant(field, field.z())),
                    "g" => Ok(Poly::constant(field, field.primitive())),
                    _ => self
                        .params
                        .get(name)
                        .map(|&v| Poly::constant(field, v))
                        .ok_or(FfError::Parse { offset: start, reason: format!("unknown name {name:?}") }),
                }
            }
            _ => Err(self.error("expected a term")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(p: u64, k: u32) -> FiniteField {
        FiniteField::new(p, k).unwrap()
    }

    fn params(pairs: &[(&str, u32)]) -> HashMap<String, u32> {
        pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
    }

    fn poly(f: &FiniteField, text: &str) -> Poly {
        parse_poly(f, text, &HashMap::new()).unwrap()
    }

    #[test]
    fn moduli_are_smallest_irreducibles() {
        assert_eq!(field(3, 2).modulus(), &[1, 0, 1]);
        assert_eq!(field(5, 2).modulus(), &[2, 0, 1]);
        assert_eq!(field(2, 3).modulus(), &[1, 1, 0, 1]);
        assert_eq!(field(7, 1).modulus(), &[0, 1]);
        assert_eq!(field(3, 2).primitive(), 4);
        assert!(matches!(FiniteField::new(4, 1), Err(FfError::NotPrime(4))));
        assert!(matches!(FiniteField::new(3, 20), Err(FfError::FieldTooLarge { .. })));
    }

    #[test]
    fn element_text() {
        let f9 = field(3, 2);
        assert_eq!(f9.format(0), "0");
        assert_eq!(f9.format(4), "z+1");
        assert_eq!(f9.format(8), "2*z+2");
        assert_eq!(f9.parse_element("z+1", &HashMap::new()).unwrap(), 4);
        assert_eq!(f9.parse_element("g", &HashMap::new()).unwrap(), 4);
        assert_eq!(f9.mul(3, 3), 2); // z^2 = -1
    }

    #[test]
    fn roots_examples() {
        let f3 = field(3, 1);
        assert!(poly(&f3, "x^2+1").roots().unwrap().is_empty());
        assert_eq!(poly(&field(3, 2), "x^2+1").roots().unwrap().len(), 2);
        assert_eq!(poly(&f3, "x^4+x^3").roots().unwrap(), vec![0, 0, 0, 2]);
        assert!(Poly::zero(&f3).roots().is_err());
    }

    #[test]
    fn reduction_examples() {
        let f3 = field(3, 1);
        // b^4 + (2+8u) b^3 + 36u b^2 + 54u b + 27u
        let quartic = ParamIntPoly(vec![
            IntPoly(vec![0, 27]),
            IntPoly(vec![0, 54]),
            IntPoly(vec![0, 36]),
            IntPoly(vec![2, 8]),
            IntPoly(vec![1]),
        ]);
        let reduced = quartic.reduce_mod_p(&f3);
        let coeffs: Vec<Vec<u32>> = reduced.0.iter().map(|c| c.coeffs().to_vec()).collect();
        assert_eq!(coeffs, vec![vec![], vec![], vec![], vec![2, 2], vec![1]]);
        let f7 = field(7, 1);
        assert_eq!(reduce_mod_p(&IntPoly(vec![1, 2, 3]), &f7).coeffs(), &[1, 2, 3]);
    }

    #[test]
    fn power_map_indices() {
        for (p, d) in [(3u64, 4usize), (5, 3), (7, 6)] {
            let f = field(p, 1);
            let m = RationalMap::polynomial(Poly::monomial(&f, 1, d));
            assert_eq!(m.ram_index(Point::Finite(0)).unwrap(), d as u64);
            assert_eq!(m.ram_index(Point::Infinity).unwrap(), d as u64);
            assert_eq!(m.ram_index(Point::Finite(1)).unwrap(), 1);
            let report = m.ram_report().unwrap();
            assert!(tame_rh_check(&report, d as u64, &f).unwrap());
        }
        let f3 = field(3, 1);
        let x2 = RationalMap::polynomial(poly(&f3, "x^2"));
        let report = x2.ram_report().unwrap();
        assert_eq!(
            report.entries,
            vec![
                RamEntry { point: Point::Finite(0), value: Point::Finite(0), index: 2, tame: true },
                RamEntry { point: Point::Infinity, value: Point::Infinity, index: 2, tame: true },
            ]
        );
    }

    #[test]
    fn separability() {
        let f3 = field(3, 1);
        let x3 = RationalMap::polynomial(poly(&f3, "x^3"));
        assert!(!x3.is_separable());
        assert!(matches!(x3.ram_index(Point::Finite(0)), Err(FfError::Inseparable)));
        assert!(RationalMap::polynomial(poly(&f3, "x^4")).is_separable());
        let f5 = field(5, 1);
        for t in 0..5 {
            let m = RationalMap::polynomial(parse_poly(&f5, "x^7+t*x^5-x", &params(&[("t", t)])).unwrap());
            assert!(m.is_separable());
            assert_eq!(m.wronskian(), poly(&f5, "2*x^6-1"));
        }
        let id = RationalMap::polynomial(Poly::x(&f5));
        assert_eq!(id.ram_index(Point::Finite(3)).unwrap(), 1);
    }

    #[test]
    fn example_cubic_in_characteristic_three() {
        let f9 = field(3, 2);
        let mu = f9.primitive();
        let m = parse_map(&f9, "x^3+(1+u)*x^2", Some("(-u-1)*x-u"), &params(&[("u", mu)])).unwrap();
        assert_eq!(m.degree(), 3);
        let report = m.ram_report().unwrap();
        let mut expected = vec![Point::Finite(0), Point::Finite(1), Point::Finite(mu), Point::Infinity];
        expected.sort();
        assert_eq!(report.points(), expected);
        assert!(report.entries.iter().all(|e| e.index == 2 && e.point == e.value));
        assert!(tame_rh_check(&report, 3, &f9).unwrap());
    }

    #[test]
    fn degenerate_parameter_lowers_degree() {
        let f9 = field(3, 2);
        let m = parse_map(&f9, "x^3+(1+u)*x^2", Some("(-u-1)*x-u"), &params(&[("u", 1)])).unwrap();
        assert_eq!(m.degree(), 2);
        assert_eq!(m.to_string(), "x^2");
    }

    #[test]
    fn example_quartic_in_characteristic_three() {
        let f9 = field(3, 2);
        let mu = 5; // z + 2
        let m = RationalMap::polynomial(
            parse_poly(&f9, "(u+1)*x^4+(u+2)*x^3+(u+1)*x^2", &params(&[("u", mu)])).unwrap(),
        );
        assert_eq!(m.ram_index(Point::Infinity).unwrap(), 4);
        for a in [0, 1, f9.from_int(-1)] {
            assert_eq!(m.ram_index(Point::Finite(a)).unwrap(), 2);
        }
        let report = m.ram_report().unwrap();
        assert_eq!(report.entries.len(), 4);
        assert!(tame_rh_check(&report, 4, &f9).unwrap());
        assert_eq!(m.eval(Point::Finite(f9.from_int(-1))), Point::Finite(mu));
    }

    #[test]
    fn parse_errors() {
        let f = field(5, 1);
        assert!(matches!(parse_poly(&f, "x^", &HashMap::new()), Err(FfError::Parse { .. })));
        assert!(matches!(parse_poly(&f, "2*y", &HashMap::new()), Err(FfError::Parse { offset: 2, .. })));
        assert!(matches!(parse_poly(&f, "(x+1", &HashMap::new()), Err(FfError::Parse { .. })));
        assert_eq!(poly(&f, "-(x - 1)^2").to_string(), "4*x^2+2*x+4");
        assert!(matches!(
            RationalMap::new(Poly::x(&f), Poly::zero(&f)),
            Err(FfError::ZeroDenominator)
        ));
    }
}
