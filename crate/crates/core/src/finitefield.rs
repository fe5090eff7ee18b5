//! Arithmetic in `GF(p^b)` as polynomials over `Z/p` reduced modulo a fixed
//! monic irreducible polynomial.
//!
//! The modulus is the first irreducible polynomial in the same order used to
//! enumerate field elements: candidates `x^b + c_{b-1} x^{b-1} + ... + c_0`
//! are ranked by the integer `sum c_i p^i`, so `c_{b-1}` is the most
//! significant coefficient. For `b = 1` the modulus is `x` and elements are
//! plain residues.
//!
//! An element is stored as the same packed integer: its coefficient vector
//! read as base-`p` digits, `c_0` least significant. Element `k` is the
//! `k`-th element of [`FieldContext::elements`].

use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{domain, resource, Error, Result};
use crate::numeric::is_prime;

/// Default upper bound on `p^b` for a field context.
pub const FIELD_SIZE_LIMIT: u64 = 1 << 20;

const MAX_DEGREE: usize = 20;

type Digits = [u64; MAX_DEGREE];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldContext {
    p: u32,
    degree: u32,
    order: u32,
    /// Monic, lowest degree first, length `degree + 1`.
    modulus: Vec<u32>,
    /// Modulus without its leading term, packed as bits (only for `p = 2`).
    modulus_bits: u64,
}

/// A field element. It remembers the order of its field; since the modulus
/// is a function of `(p, b)` alone, that pins down the context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    order: u32,
    index: u32,
}

impl FieldElement {
    /// Position of the element in enumeration order.
    pub fn index(self) -> u32 {
        self.index
    }

    pub fn field_order(self) -> u32 {
        self.order
    }
}

impl FieldContext {
    pub fn new(p: u64, b: u32) -> Result<Self> {
        Self::with_limit(p, b, FIELD_SIZE_LIMIT)
    }

    pub fn with_limit(p: u64, b: u32, limit: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(domain(format!("field characteristic {p} is not prime")));
        }
        if b == 0 {
            return Err(domain("field degree must be at least 1"));
        }
        let order = p
            .checked_pow(b)
            .filter(|&q| q <= limit && q <= FIELD_SIZE_LIMIT)
            .ok_or_else(|| {
                resource(format!(
                    "field GF({p}^{b}) exceeds the size guard {}",
                    limit.min(FIELD_SIZE_LIMIT)
                ))
            })?;
        let p = p as u32;
        let modulus = if b == 1 {
            vec![0, 1]
        } else {
            smallest_irreducible(p, b as usize)
        };
        let modulus_bits = if p == 2 {
            modulus[..b as usize]
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, &c)| acc | (u64::from(c) << i))
        } else {
            0
        };
        Ok(FieldContext {
            p,
            degree: b,
            order: order as u32,
            modulus,
            modulus_bits,
        })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Coefficients of the modulus, lowest degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement {
        self.wrap(0)
    }

    pub fn one(&self) -> FieldElement {
        self.wrap(1)
    }

    /// The class of `t` modulo the field polynomial (zero when `b = 1`).
    pub fn generator(&self) -> FieldElement {
        if self.degree == 1 {
            self.zero()
        } else {
            self.wrap(self.p)
        }
    }

    /// The image of an integer under `Z -> Z/p -> GF(p^b)`.
    pub fn from_int(&self, n: i64) -> FieldElement {
        self.wrap(n.rem_euclid(i64::from(self.p)) as u32)
    }

    pub fn from_index(&self, index: u32) -> Result<FieldElement> {
        if index >= self.order {
            return Err(domain(format!(
                "index {index} out of range for GF({})",
                self.order
            )));
        }
        Ok(self.wrap(index))
    }

    /// Builds an element from its coefficients, lowest degree first.
    pub fn element(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() > self.degree as usize {
            return Err(domain(format!(
                "{} coefficients given for a degree-{} field",
                coeffs.len(),
                self.degree
            )));
        }
        let mut index = 0u64;
        for &c in coeffs.iter().rev() {
            if c >= self.p {
                return Err(domain(format!(
                    "coefficient {c} is not reduced modulo {}",
                    self.p
                )));
            }
            index = index * u64::from(self.p) + u64::from(c);
        }
        Ok(self.wrap(index as u32))
    }

    pub fn coefficients(&self, x: FieldElement) -> Vec<u32> {
        let digits = self.unpack(x.index);
        digits[..self.degree as usize]
            .iter()
            .map(|&d| d as u32)
            .collect()
    }

    /// All `q` elements in enumeration order, starting at zero.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order).map(move |i| self.wrap(i))
    }

    pub fn contains(&self, x: FieldElement) -> bool {
        x.order == self.order
    }

    pub fn add(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.wrap(self.add_raw(x.index, y.index)))
    }

    pub fn sub(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.wrap(self.sub_raw(x.index, y.index)))
    }

    pub fn mul(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.wrap(self.mul_raw(x.index, y.index)))
    }

    pub fn neg(&self, x: FieldElement) -> Result<FieldElement> {
        self.check(x)?;
        Ok(self.wrap(self.neg_raw(x.index)))
    }

    pub fn inv(&self, x: FieldElement) -> Result<FieldElement> {
        self.check(x)?;
        if x.index == 0 {
            return Err(Error::DivisionByZero(format!(
                "inverse of zero in GF({})",
                self.order
            )));
        }
        Ok(self.wrap(self.inv_raw(x.index)))
    }

    pub fn pow(&self, x: FieldElement, exponent: u64) -> Result<FieldElement> {
        self.check(x)?;
        Ok(self.wrap(self.pow_raw(x.index, exponent)))
    }

    /// Renders an element as `c0+c1*t+c2*t^2`, skipping zero terms.
    pub fn render(&self, x: FieldElement) -> String {
        let coeffs = self.coefficients(x);
        let mut out = String::new();
        for (i, &c) in coeffs.iter().enumerate().filter(|(_, &c)| c != 0) {
            if !out.is_empty() {
                out.push('+');
            }
            match (i, c) {
                (0, c) => write!(out, "{c}").unwrap(),
                (1, 1) => out.push('t'),
                (1, c) => write!(out, "{c}*t").unwrap(),
                (i, 1) => write!(out, "t^{i}").unwrap(),
                (i, c) => write!(out, "{c}*t^{i}").unwrap(),
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Renders the modulus highest degree first, e.g. `x^2+x+1`.
    pub fn render_modulus(&self) -> String {
        render_poly(&self.modulus, 'x')
    }

    fn check(&self, x: FieldElement) -> Result<()> {
        if x.order == self.order {
            Ok(())
        } else {
            Err(domain(format!(
                "element of GF({}) used in GF({})",
                x.order, self.order
            )))
        }
    }

    #[inline]
    pub(crate) fn wrap(&self, index: u32) -> FieldElement {
        FieldElement {
            order: self.order,
            index,
        }
    }

    #[inline]
    fn unpack(&self, mut index: u32) -> Digits {
        let mut digits = [0u64; MAX_DEGREE];
        if self.p == 2 {
            for (i, d) in digits.iter_mut().enumerate().take(self.degree as usize) {
                *d = u64::from((index >> i) & 1);
            }
        } else {
            for d in digits.iter_mut().take(self.degree as usize) {
                *d = u64::from(index % self.p);
                index /= self.p;
            }
        }
        digits
    }

    /// Packs digits already reduced modulo `p`.
    #[inline]
    fn pack(&self, digits: &Digits) -> u32 {
        let p = u64::from(self.p);
        digits[..self.degree as usize]
            .iter()
            .rev()
            .fold(0u64, |acc, &d| acc * p + d) as u32
    }

    #[inline]
    pub(crate) fn add_raw(&self, x: u32, y: u32) -> u32 {
        if self.p == 2 {
            return x ^ y;
        }
        if self.degree == 1 {
            let s = x + y;
            return if s >= self.p { s - self.p } else { s };
        }
        let (mut a, b) = (self.unpack(x), self.unpack(y));
        let p = u64::from(self.p);
        for (ai, bi) in a.iter_mut().zip(b.iter()).take(self.degree as usize) {
            *ai = (*ai + bi) % p;
        }
        self.pack(&a)
    }

    #[inline]
    pub(crate) fn neg_raw(&self, x: u32) -> u32 {
        if self.p == 2 {
            return x;
        }
        if self.degree == 1 {
            return if x == 0 { 0 } else { self.p - x };
        }
        let mut a = self.unpack(x);
        let p = u64::from(self.p);
        for ai in a.iter_mut().take(self.degree as usize) {
            *ai = (p - *ai) % p;
        }
        self.pack(&a)
    }

    #[inline]
    pub(crate) fn sub_raw(&self, x: u32, y: u32) -> u32 {
        self.add_raw(x, self.neg_raw(y))
    }

    #[inline]
    pub(crate) fn mul_raw(&self, x: u32, y: u32) -> u32 {
        if self.degree == 1 {
            return (u64::from(x) * u64::from(y) % u64::from(self.p)) as u32;
        }
        let b = self.degree as usize;
        if self.p == 2 {
            let mut acc = 0u64;
            for i in 0..b {
                if (y >> i) & 1 == 1 {
                    acc ^= u64::from(x) << i;
                }
            }
            for i in (b..2 * b - 1).rev() {
                if (acc >> i) & 1 == 1 {
                    acc ^= (1u64 << i) | (self.modulus_bits << (i - b));
                }
            }
            return acc as u32;
        }
        let p = u64::from(self.p);
        let (xd, yd) = (self.unpack(x), self.unpack(y));
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..b {
            if xd[i] == 0 {
                continue;
            }
            for j in 0..b {
                prod[i + j] += xd[i] * yd[j];
            }
        }
        for k in (b..2 * b - 1).rev() {
            let c = prod[k] % p;
            if c == 0 {
                continue;
            }
            // x^b = -(m_0 + ... + m_{b-1} x^{b-1})
            for j in 0..b {
                prod[k - b + j] += c * (p - u64::from(self.modulus[j]));
            }
        }
        let mut out = [0u64; MAX_DEGREE];
        for i in 0..b {
            out[i] = prod[i] % p;
        }
        self.pack(&out)
    }

    pub(crate) fn pow_raw(&self, x: u32, mut exponent: u64) -> u32 {
        let mut base = x;
        let mut acc = 1u32;
        while exponent > 0 {
            if exponent & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            exponent >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero element via `x^(q-2)`.
    pub(crate) fn inv_raw(&self, x: u32) -> u32 {
        self.pow_raw(x, u64::from(self.order) - 2)
    }
}

fn render_poly(coeffs: &[u32], var: char) -> String {
    let mut out = String::new();
    for (i, &c) in coeffs.iter().enumerate().rev().filter(|(_, &c)| c != 0) {
        if !out.is_empty() {
            out.push('+');
        }
        match (i, c) {
            (0, c) => write!(out, "{c}").unwrap(),
            (1, 1) => out.push(var),
            (1, c) => write!(out, "{c}*{var}").unwrap(),
            (i, 1) => write!(out, "{var}^{i}").unwrap(),
            (i, c) => write!(out, "{c}*{var}^{i}").unwrap(),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Monic polynomial of degree `degree` whose lower coefficients are the
/// base-`p` digits of `k`.
fn monic_from_index(p: u32, degree: usize, mut k: u64) -> Vec<u32> {
    let mut coeffs = Vec::with_capacity(degree + 1);
    for _ in 0..degree {
        coeffs.push((k % u64::from(p)) as u32);
        k /= u64::from(p);
    }
    coeffs.push(1);
    coeffs
}

/// Remainder of `f` modulo a monic `g` over `Z/p`; both lowest degree first.
fn poly_rem_monic(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let p = u64::from(p);
    let dg = g.len() - 1;
    let mut r: Vec<u64> = f.iter().map(|&c| u64::from(c)).collect();
    if r.len() <= dg {
        return f.to_vec();
    }
    for k in (dg..r.len()).rev() {
        let c = r[k] % p;
        r[k] = 0;
        if c == 0 {
            continue;
        }
        for j in 0..dg {
            r[k - dg + j] = (r[k - dg + j] + c * (p - u64::from(g[j]))) % p;
        }
    }
    r.truncate(dg);
    r.into_iter().map(|c| c as u32).collect()
}

/// Irreducibility by trial division against every monic polynomial of
/// degree `1..=deg/2`.
pub fn is_irreducible(f: &[u32], p: u32) -> bool {
    let degree = f.len() - 1;
    for d in 1..=degree / 2 {
        let count = u64::from(p).pow(d as u32);
        for k in 0..count {
            let g = monic_from_index(p, d, k);
            if poly_rem_monic(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u32, degree: usize) -> Vec<u32> {
    let count = u64::from(p).pow(degree as u32);
    (0..count)
        .map(|k| monic_from_index(p, degree, k))
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

/// Field homomorphism `GF(p^b) -> GF(p^(b*n))`, fixed by where it sends the
/// generator `t` of the small field.
#[derive(Debug, Clone)]
pub struct FieldEmbedding {
    small_order: u32,
    small_degree: u32,
    big: Arc<FieldContext>,
    generator_image: FieldElement,
    /// Images of `t^0, ..., t^(b-1)`.
    basis_images: Vec<u32>,
}

impl FieldEmbedding {
    pub fn big(&self) -> &Arc<FieldContext> {
        &self.big
    }

    pub fn generator_image(&self) -> FieldElement {
        self.generator_image
    }

    pub fn map(&self, x: FieldElement) -> Result<FieldElement> {
        if x.order != self.small_order {
            return Err(domain(format!(
                "element of GF({}) passed to an embedding of GF({})",
                x.order, self.small_order
            )));
        }
        Ok(self.big.wrap(self.map_raw(x.index)))
    }

    pub(crate) fn map_raw(&self, mut index: u32) -> u32 {
        let p = self.big.p;
        let mut acc = 0u32;
        for &image in &self.basis_images[..self.small_degree as usize] {
            let c = index % p;
            index /= p;
            if c != 0 {
                acc = self.big.add_raw(acc, self.big.mul_raw(c, image));
            }
        }
        acc
    }
}

/// Embeds `small` into `big`, sending `t` to the first root (in enumeration
/// order) of the small field's modulus.
pub fn embed_field(small: &FieldContext, big: Arc<FieldContext>) -> Result<FieldEmbedding> {
    if small.p != big.p {
        return Err(domain(format!(
            "cannot embed GF({}) into GF({}): characteristics differ",
            small.order, big.order
        )));
    }
    if big.degree % small.degree != 0 {
        return Err(domain(format!(
            "cannot embed GF({}^{}) into GF({}^{}): {} does not divide {}",
            small.p, small.degree, big.p, big.degree, small.degree, big.degree
        )));
    }
    let root = (0..big.order)
        .find(|&g| {
            // Horner; modulus coefficients live in the prime subfield
            small
                .modulus
                .iter()
                .rev()
                .fold(0u32, |acc, &c| big.add_raw(big.mul_raw(acc, g), c))
                == 0
        })
        .ok_or_else(|| {
            Error::Internal(format!(
                "no root of {} in GF({})",
                small.render_modulus(),
                big.order
            ))
        })?;
    let mut basis_images = Vec::with_capacity(small.degree as usize);
    let mut power = 1u32;
    for _ in 0..small.degree {
        basis_images.push(power);
        power = big.mul_raw(power, root);
    }
    Ok(FieldEmbedding {
        small_order: small.order,
        small_degree: small.degree,
        generator_image: big.wrap(root),
        basis_images,
        big,
    })
}
