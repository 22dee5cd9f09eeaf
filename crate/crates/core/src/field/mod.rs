//! Exact arithmetic over `F_p`, `F_{p^m}` and the rationals.
//!
//! A [`Field`] is a cheap-to-clone handle describing the field; [`FieldElement`]s are plain
//! values in canonical form and all arithmetic goes through the field handle, in the style of
//! a ring store. Elements carry their kind as an enum tag, and [`Field::check`] rejects any
//! value that does not belong to the field.

mod fp_poly;
mod json;

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub use json::FieldDescription;

/// Coefficient storage for extension-field elements, low degree first.
pub type Coeffs = SmallVec<[u64; 8]>;

/// An element of some [`Field`], always in canonical form so that structural equality is
/// field equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldElement {
    /// Residue in `[0, p)`.
    Prime(u64),
    /// Coefficient vector of length `m` over `F_p`, reduced modulo the field's modulus.
    Ext(Coeffs),
    /// Normalized fraction with positive denominator.
    Rational(BigRational),
}

impl FieldElement {
    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Prime(a) => *a == 0,
            FieldElement::Ext(c) => c.iter().all(|&x| x == 0),
            FieldElement::Rational(r) => r.is_zero(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Prime,
    Extension,
    Rational,
}

#[derive(Debug, PartialEq, Eq, Hash)]
enum Repr {
    Prime { p: u64 },
    /// `modulus` is monic of degree `m`, stored with `m + 1` coefficients.
    Extension { p: u64, modulus: Vec<u64> },
    Rational,
}

/// A validated field: prime, extension (with an irreducible modulus) or `Q`.
#[derive(Clone)]
pub struct Field {
    repr: Arc<Repr>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.repr, &other.repr) || self.repr == other.repr
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.repr {
            Repr::Prime { p } => write!(f, "F_{p}"),
            Repr::Extension { p, modulus } => write!(f, "F_{p}^{} mod {:?}", modulus.len() - 1, modulus),
            Repr::Rational => write!(f, "Q"),
        }
    }
}

/// Deterministic primality test: trial division below `2^32`, Miller-Rabin with a base set
/// that is exact for all 64-bit inputs above it.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < (1 << 32) {
        let mut i = 2u64;
        while i * i <= n {
            if n.is_multiple_of(i) {
                return false;
            }
            i += 1;
        }
        return true;
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = fp_poly::pow_mod(a, d as u128, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = fp_poly::mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Lexicographically first monic irreducible polynomial of degree `m` over `F_p`.
///
/// Candidates are ordered by the base-`p` number whose digits are the coefficients, with the
/// constant term as least significant digit, so the search visits `x^m, x^m + 1, ...`.
/// Irreducibility is decided by exhaustive trial division up to degree `m / 2`.
pub fn find_irreducible(p: u64, m: usize) -> Vec<u64> {
    assert!(m >= 1, "extension degree must be at least 1");
    let mut idx: u128 = 0;
    loop {
        let f = fp_poly::monic_from_index(idx, m, p);
        if fp_poly::is_irreducible_by_trial_division(&f, p) {
            return f;
        }
        idx += 1;
    }
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p.to_string()));
        }
        Ok(Field { repr: Arc::new(Repr::Prime { p }) })
    }

    /// `F_{p^m}`; when `modulus` is `None` the lexicographically first irreducible is used.
    pub fn extension(p: u64, m: usize, modulus: Option<Vec<u64>>) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p.to_string()));
        }
        if m == 0 {
            return Err(Error::BadModulusDegree { expected: 0, got: "extension degree 0".into() });
        }
        let modulus = match modulus {
            None => find_irreducible(p, m),
            Some(mut f) => {
                if f.iter().any(|&c| c >= p) {
                    f.iter_mut().for_each(|c| *c %= p);
                }
                if f.len() != m + 1 || f[m] != 1 {
                    return Err(Error::BadModulusDegree {
                        expected: m,
                        got: format!("{:?}", f),
                    });
                }
                if !fp_poly::is_irreducible_by_trial_division(&f, p) {
                    return Err(Error::ReducibleModulus);
                }
                f
            }
        };
        Ok(Field { repr: Arc::new(Repr::Extension { p, modulus }) })
    }

    pub fn rational() -> Field {
        Field { repr: Arc::new(Repr::Rational) }
    }

    pub fn kind(&self) -> FieldKind {
        match &*self.repr {
            Repr::Prime { .. } => FieldKind::Prime,
            Repr::Extension { .. } => FieldKind::Extension,
            Repr::Rational => FieldKind::Rational,
        }
    }

    /// The characteristic, or `None` for `Q`.
    pub fn characteristic(&self) -> Option<u64> {
        match &*self.repr {
            Repr::Prime { p } | Repr::Extension { p, .. } => Some(*p),
            Repr::Rational => None,
        }
    }

    /// Degree over the prime field (1 for `F_p` and `Q`).
    pub fn degree(&self) -> usize {
        match &*self.repr {
            Repr::Extension { modulus, .. } => modulus.len() - 1,
            _ => 1,
        }
    }

    pub fn modulus(&self) -> Option<&[u64]> {
        match &*self.repr {
            Repr::Extension { modulus, .. } => Some(modulus),
            _ => None,
        }
    }

    /// Number of elements, `None` for `Q`.
    pub fn cardinality(&self) -> Option<BigUint> {
        self.characteristic()
            .map(|p| BigUint::from(p).pow(self.degree() as u32))
    }

    /// Number of elements if finite and representable in a `u128`.
    pub fn size_u128(&self) -> Option<u128> {
        let p = self.characteristic()?;
        (p as u128).checked_pow(self.degree() as u32)
    }

    /// `|F| > bound`.
    pub fn has_more_than(&self, bound: u128) -> bool {
        match self.characteristic() {
            None => true,
            Some(_) => self.size_u128().is_none_or(|s| s > bound),
        }
    }

    pub fn zero(&self) -> FieldElement {
        match &*self.repr {
            Repr::Prime { .. } => FieldElement::Prime(0),
            Repr::Extension { modulus, .. } => FieldElement::Ext(SmallVec::from_elem(0, modulus.len() - 1)),
            Repr::Rational => FieldElement::Rational(BigRational::zero()),
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_i64(1)
    }

    /// Image of an integer under the canonical ring map `Z -> F`.
    pub fn from_i64(&self, v: i64) -> FieldElement {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_bigint(&self, v: &BigInt) -> FieldElement {
        match &*self.repr {
            Repr::Prime { p } => FieldElement::Prime(reduce_bigint(v, *p)),
            Repr::Extension { p, modulus } => {
                let mut c: Coeffs = SmallVec::from_elem(0, modulus.len() - 1);
                c[0] = reduce_bigint(v, *p);
                FieldElement::Ext(c)
            }
            Repr::Rational => FieldElement::Rational(BigRational::from_integer(v.clone())),
        }
    }

    /// The class of `x` in `F_p[x]/(f)`; `None` unless this is an extension of degree ≥ 2.
    pub fn generator(&self) -> Option<FieldElement> {
        match &*self.repr {
            Repr::Extension { modulus, .. } if modulus.len() > 2 => {
                let mut c: Coeffs = SmallVec::from_elem(0, modulus.len() - 1);
                c[1] = 1;
                Some(FieldElement::Ext(c))
            }
            _ => None,
        }
    }

    /// Verifies that `a` is a canonical element of this field.
    pub fn check(&self, a: &FieldElement) -> Result<()> {
        let ok = match (&*self.repr, a) {
            (Repr::Prime { p }, FieldElement::Prime(x)) => x < p,
            (Repr::Extension { p, modulus }, FieldElement::Ext(c)) => {
                c.len() == modulus.len() - 1 && c.iter().all(|x| x < p)
            }
            (Repr::Rational, FieldElement::Rational(r)) => r.denom().is_positive(),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::FieldMismatch(format!("{a:?} is not an element of {self:?}")))
        }
    }

    pub fn check_all(&self, xs: &[FieldElement]) -> Result<()> {
        xs.iter().try_for_each(|x| self.check(x))
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        match (&*self.repr, a, b) {
            (Repr::Prime { p }, FieldElement::Prime(x), FieldElement::Prime(y)) => {
                FieldElement::Prime(fp_poly::add_mod(*x, *y, *p))
            }
            (Repr::Extension { p, .. }, FieldElement::Ext(x), FieldElement::Ext(y)) => {
                FieldElement::Ext(x.iter().zip(y.iter()).map(|(&s, &t)| fp_poly::add_mod(s, t, *p)).collect())
            }
            (Repr::Rational, FieldElement::Rational(x), FieldElement::Rational(y)) => FieldElement::Rational(x + y),
            _ => mismatch(self, a, b),
        }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        match (&*self.repr, a, b) {
            (Repr::Prime { p }, FieldElement::Prime(x), FieldElement::Prime(y)) => {
                FieldElement::Prime(fp_poly::sub_mod(*x, *y, *p))
            }
            (Repr::Extension { p, .. }, FieldElement::Ext(x), FieldElement::Ext(y)) => {
                FieldElement::Ext(x.iter().zip(y.iter()).map(|(&s, &t)| fp_poly::sub_mod(s, t, *p)).collect())
            }
            (Repr::Rational, FieldElement::Rational(x), FieldElement::Rational(y)) => FieldElement::Rational(x - y),
            _ => mismatch(self, a, b),
        }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        self.sub(&self.zero(), a)
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        match (&*self.repr, a, b) {
            (Repr::Prime { p }, FieldElement::Prime(x), FieldElement::Prime(y)) => {
                FieldElement::Prime(fp_poly::mul_mod(*x, *y, *p))
            }
            (Repr::Extension { p, modulus }, FieldElement::Ext(x), FieldElement::Ext(y)) => {
                FieldElement::Ext(ext_mul(x, y, modulus, *p))
            }
            (Repr::Rational, FieldElement::Rational(x), FieldElement::Rational(y)) => FieldElement::Rational(x * y),
            _ => mismatch(self, a, b),
        }
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        self.check(a)?;
        Ok(match (&*self.repr, a) {
            (Repr::Prime { p }, FieldElement::Prime(x)) => {
                FieldElement::Prime(fp_poly::inv_mod(*x, *p).ok_or(Error::DivisionByZero)?)
            }
            (Repr::Extension { p, modulus }, FieldElement::Ext(x)) => {
                let mut poly = x.to_vec();
                fp_poly::trim(&mut poly);
                let mut inv = fp_poly::inv_mod_poly(&poly, modulus, *p).ok_or(Error::DivisionByZero)?;
                inv.resize(modulus.len() - 1, 0);
                FieldElement::Ext(SmallVec::from_vec(inv))
            }
            (Repr::Rational, FieldElement::Rational(x)) => FieldElement::Rational(x.recip()),
            _ => unreachable!("checked above"),
        })
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// `a^e` by square-and-multiply; `a^0 = 1` including `0^0`.
    pub fn pow(&self, a: &FieldElement, mut e: u128) -> FieldElement {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn try_add(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add(a, b))
    }

    pub fn try_sub(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.sub(a, b))
    }

    pub fn try_mul(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    /// The `index`-th element of the canonical enumeration, or `None` past the end.
    ///
    /// Prime fields enumerate `0, 1, 2, ...`; extension fields read `index` in base `p` with
    /// the constant coefficient as least significant digit, so the prime subfield comes first;
    /// `Q` enumerates the naturals `0, 1, 2, ...`.
    pub fn element_at(&self, index: u128) -> Option<FieldElement> {
        if let Some(size) = self.size_u128() {
            if index >= size {
                return None;
            }
        }
        Some(match &*self.repr {
            Repr::Prime { .. } => FieldElement::Prime(index as u64),
            Repr::Extension { p, modulus } => {
                let mut rest = index;
                let c = (0..modulus.len() - 1)
                    .map(|_| {
                        let digit = (rest % *p as u128) as u64;
                        rest /= *p as u128;
                        digit
                    })
                    .collect();
                FieldElement::Ext(c)
            }
            Repr::Rational => FieldElement::Rational(BigRational::from_integer(BigInt::from(index))),
        })
    }

    /// The first `count` elements of the canonical enumeration.
    pub fn first_elements(&self, count: u128) -> Result<Vec<FieldElement>> {
        if count > 0 && !self.has_more_than(count - 1) {
            return Err(Error::FieldTooSmall { bound: self.size_u128().unwrap_or(u128::MAX) });
        }
        Ok((0..count).map(|i| self.element_at(i).expect("size checked")).collect())
    }

    /// Uniform element for finite fields. Rationals are drawn as `a/b` with `a` uniform in
    /// `[-16, 16]` and `b` uniform in `[1, 8]`, then normalized.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        match &*self.repr {
            Repr::Prime { p } => FieldElement::Prime(rng.random_range(0..*p)),
            Repr::Extension { p, modulus } => {
                FieldElement::Ext((0..modulus.len() - 1).map(|_| rng.random_range(0..*p)).collect())
            }
            Repr::Rational => {
                let num: i64 = rng.random_range(-16..=16);
                let den: i64 = rng.random_range(1..=8);
                FieldElement::Rational(BigRational::new(num.into(), den.into()))
            }
        }
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        loop {
            let x = self.random(rng);
            if !x.is_zero() {
                return x;
            }
        }
    }
}

fn mismatch(field: &Field, a: &FieldElement, b: &FieldElement) -> ! {
    panic!("field mismatch: {a:?} and {b:?} are not both elements of {field:?}")
}

fn reduce_bigint(v: &BigInt, p: u64) -> u64 {
    let r = v % BigInt::from(p);
    let r = if r.is_negative() { r + BigInt::from(p) } else { r };
    u64::try_from(r).expect("residue fits in u64")
}

fn ext_mul(x: &[u64], y: &[u64], modulus: &[u64], p: u64) -> Coeffs {
    let m = modulus.len() - 1;
    let mut acc = [0u64; 32];
    let mut heap;
    let buf: &mut [u64] = if 2 * m <= acc.len() {
        &mut acc[..2 * m.max(1)]
    } else {
        heap = vec![0u64; 2 * m];
        &mut heap
    };
    for (i, &a) in x.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in y.iter().enumerate() {
            if b != 0 {
                buf[i + j] = fp_poly::add_mod(buf[i + j], fp_poly::mul_mod(a, b, p), p);
            }
        }
    }
    // x^m = -(f_0 + ... + f_{m-1} x^{m-1}) since the modulus is monic
    for deg in (m..2 * m - 1).rev() {
        let c = buf[deg];
        if c == 0 {
            continue;
        }
        buf[deg] = 0;
        for (t, &f) in modulus.iter().take(m).enumerate() {
            let at = deg - m + t;
            buf[at] = fp_poly::sub_mod(buf[at], fp_poly::mul_mod(c, f, p), p);
        }
    }
    SmallVec::from_slice(&buf[..m])
}

/// An injective ring homomorphism from a field into an extension of it.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: Field,
    target: Field,
    /// Image of the class of `x` when the source is a proper extension.
    generator_image: Option<FieldElement>,
}

impl Embedding {
    pub fn identity(field: &Field) -> Embedding {
        Embedding { source: field.clone(), target: field.clone(), generator_image: None }
    }

    pub fn source(&self) -> &Field {
        &self.source
    }

    pub fn target(&self) -> &Field {
        &self.target
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target
    }

    pub fn apply(&self, x: &FieldElement) -> FieldElement {
        if self.is_identity() {
            return x.clone();
        }
        match x {
            FieldElement::Prime(c) => self.target.element_from_u64(*c),
            FieldElement::Ext(cs) => {
                let theta = self.generator_image.as_ref().expect("extension source has a generator image");
                cs.iter().rev().fold(self.target.zero(), |acc, &c| {
                    self.target.add(&self.target.mul(&acc, theta), &self.target.element_from_u64(c))
                })
            }
            FieldElement::Rational(_) => x.clone(),
        }
    }
}

impl Field {
    fn element_from_u64(&self, c: u64) -> FieldElement {
        self.from_bigint(&BigInt::from(c))
    }

    /// Evaluates a polynomial with prime-field coefficients (low degree first) at `x`.
    fn eval_base_poly(&self, coeffs: &[u64], x: &FieldElement) -> FieldElement {
        coeffs.iter().rev().fold(self.zero(), |acc, &c| self.add(&self.mul(&acc, x), &self.element_from_u64(c)))
    }
}

/// Returns a field with more than `bound` elements that contains `field`, together with the
/// embedding. The input is returned unchanged when it is already large enough; `Q` always is.
///
/// The extension degree is the least multiple of the current degree that exceeds the bound,
/// its modulus comes from [`find_irreducible`], and for an extension source the image of the
/// generator is the first root of the source modulus in canonical enumeration order.
pub fn ensure_min_size(field: &Field, bound: u128) -> (Field, Embedding) {
    if field.has_more_than(bound) {
        return (field.clone(), Embedding::identity(field));
    }
    let p = field.characteristic().expect("Q is never too small");
    let m = field.degree();
    let mut target_degree = m;
    while (p as u128).checked_pow(target_degree as u32).is_some_and(|s| s <= bound) {
        target_degree += m;
    }
    let target = Field::extension(p, target_degree, None).expect("irreducible modulus is valid");
    let generator_image = match field.modulus() {
        None => None,
        Some(f) => {
            let mut idx = 0u128;
            loop {
                let candidate = target.element_at(idx).expect("a root exists in the extension");
                if target.eval_base_poly(f, &candidate).is_zero() {
                    break Some(candidate);
                }
                idx += 1;
            }
        }
    };
    let embedding = Embedding { source: field.clone(), target: target.clone(), generator_image };
    (target, embedding)
}
