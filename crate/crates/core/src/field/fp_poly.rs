//! Dense univariate polynomials over a prime field, coefficients low degree first.
//!
//! These back extension-field arithmetic and the brute-force irreducible search.
//! All vectors are kept trimmed (no trailing zeros); the zero polynomial is empty.

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        ((a as u128 + p as u128 - b as u128) % p as u128) as u64
    }
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u128, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue modulo a prime, by the extended Euclidean algorithm.
pub(crate) fn inv_mod(a: u64, p: u64) -> Option<u64> {
    if a.is_multiple_of(p) {
        return None;
    }
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    Some(s0.rem_euclid(p as i128) as u64)
}

pub(crate) fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub(crate) fn degree(v: &[u64]) -> Option<usize> {
    v.iter().rposition(|&c| c != 0)
}

pub(crate) fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let len = a.len().max(b.len());
    let mut out: Vec<u64> = (0..len)
        .map(|i| sub_mod(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0), p))
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = add_mod(out[i + j], mul_mod(x, y, p), p);
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder of `a` by a nonzero `b`.
pub(crate) fn divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = inv_mod(b[db], p).expect("leading coefficient is a unit");
    let mut rem = a.to_vec();
    trim(&mut rem);
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![0u64; rem.len() - db];
    while let Some(dr) = degree(&rem) {
        if dr < db {
            break;
        }
        let c = mul_mod(rem[dr], lead_inv, p);
        let shift = dr - db;
        quot[shift] = c;
        for (t, &bt) in b.iter().enumerate().take(db + 1) {
            rem[shift + t] = sub_mod(rem[shift + t], mul_mod(c, bt, p), p);
        }
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

pub(crate) fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    divrem(a, b, p).1
}

/// Inverse of `a` modulo `modulus`, if `gcd(a, modulus) = 1`.
pub(crate) fn inv_mod_poly(a: &[u64], modulus: &[u64], p: u64) -> Option<Vec<u64>> {
    let mut r0 = modulus.to_vec();
    let mut r1 = rem(a, modulus, p);
    let mut s0: Vec<u64> = Vec::new();
    let mut s1: Vec<u64> = vec![1 % p];
    trim(&mut s1);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let s = sub(&s0, &mul(&q, &s1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    // r0 is a nonzero constant when a is invertible
    if degree(&r0) != Some(0) {
        return None;
    }
    let c = inv_mod(r0[0], p)?;
    let mut out: Vec<u64> = s0.iter().map(|&x| mul_mod(x, c, p)).collect();
    trim(&mut out);
    Some(rem(&out, modulus, p))
}

/// Monic polynomial of degree `deg` whose lower coefficients are the base-`p` digits of
/// `index`, least significant digit = constant term.
pub(crate) fn monic_from_index(mut index: u128, deg: usize, p: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(deg + 1);
    for _ in 0..deg {
        out.push((index % p as u128) as u64);
        index /= p as u128;
    }
    out.push(1);
    out
}

pub(crate) fn count_monic(deg: usize, p: u64) -> Option<u128> {
    (p as u128).checked_pow(deg as u32)
}

/// True when `f` (monic, degree m) has no monic factor of degree in `1..=m/2`.
pub(crate) fn is_irreducible_by_trial_division(f: &[u64], p: u64) -> bool {
    let m = match degree(f) {
        Some(m) if m >= 1 => m,
        _ => return false,
    };
    for deg in 1..=m / 2 {
        let count = count_monic(deg, p).expect("desk-scale trial division");
        for idx in 0..count {
            let g = monic_from_index(idx, deg, p);
            if rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}
