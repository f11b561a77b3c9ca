//! Dense polynomials over `Z` (constant term first, no trailing zeros),
//! used to keep rational-function arithmetic free of coefficient gcds.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub(crate) type ZPoly = Vec<BigInt>;

const SCREEN_PRIME: u64 = (1 << 61) - 1;

pub(crate) fn trim(mut p: ZPoly) -> ZPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

pub(crate) fn one() -> ZPoly {
    vec![BigInt::one()]
}

pub(crate) fn is_one(p: &[BigInt]) -> bool {
    p.len() == 1 && p[0].is_one()
}

pub(crate) fn degree(p: &[BigInt]) -> usize {
    p.len().saturating_sub(1)
}

pub(crate) fn add(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, s) in out.iter_mut().zip(short) {
        *o += s;
    }
    trim(out)
}

pub(crate) fn scale(p: &[BigInt], c: &BigInt) -> ZPoly {
    if c.is_zero() {
        return Vec::new();
    }
    if c.is_one() {
        return p.to_vec();
    }
    p.iter().map(|x| x * c).collect()
}

pub(crate) fn mul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if is_one(a) {
        return b.to_vec();
    }
    if is_one(b) {
        return a.to_vec();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// Signed content chosen so that the primitive part has a positive leading
/// coefficient; `(0, [])` for the zero polynomial.
pub(crate) fn primitive(p: ZPoly) -> (BigInt, ZPoly) {
    let p = trim(p);
    let Some(lead) = p.last() else { return (BigInt::zero(), p) };
    let mut content = p.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if lead.is_negative() {
        content = -content;
    }
    if content.is_one() {
        return (content, p);
    }
    let prim = p.iter().map(|c| c / &content).collect();
    (content, prim)
}

/// `a / b` when `b` divides `a` in `Z[x]`.
pub(crate) fn div_exact(a: &[BigInt], b: &[BigInt]) -> Option<ZPoly> {
    if is_one(b) {
        return Some(a.to_vec());
    }
    let d = degree(b);
    let lead = &b[d];
    let mut rem = a.to_vec();
    if rem.len() <= d {
        return rem.iter().all(|c| c.is_zero()).then(Vec::new);
    }
    let mut quot = vec![BigInt::zero(); rem.len() - d];
    for i in (0..quot.len()).rev() {
        let top = &rem[i + d];
        if top.is_zero() {
            continue;
        }
        let (c, r) = top.div_rem(lead);
        if !r.is_zero() {
            return None;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[i + j] -= &c * bj;
        }
        quot[i] = c;
    }
    rem.iter().all(|c| c.is_zero()).then(|| trim(quot))
}

/// Converts `Q[x]` to `(content, primitive part)` with `p = content · part`.
pub(crate) fn from_rational(coeffs: &[BigRational]) -> (BigRational, ZPoly) {
    let lcm = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: ZPoly = coeffs.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    let (content, prim) = primitive(ints);
    (BigRational::new(content, lcm), prim)
}

pub(crate) fn to_rational(p: &[BigInt], scale: &BigRational) -> Vec<BigRational> {
    p.iter().map(|c| scale * BigRational::from_integer(c.clone())).collect()
}

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % SCREEN_PRIME as u128) as u64
}

fn inv_mod(a: u64) -> u64 {
    let (mut base, mut exp, mut acc) = (a, SCREEN_PRIME - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        exp >>= 1;
    }
    acc
}

fn reduce_mod_screen(p: &[BigInt]) -> Option<Vec<u64>> {
    let modulus = BigInt::from(SCREEN_PRIME);
    let out: Vec<u64> = p
        .iter()
        .map(|c| u64::try_from(c.mod_floor(&modulus)).expect("reduced below the modulus"))
        .collect();
    (out.last().is_some_and(|&c| c != 0)).then_some(out)
}

/// Sufficient test for `gcd(a, b) = 1`: coprime images modulo a large prime
/// that keeps both degrees.
pub(crate) fn coprime_screen(a: &[BigInt], b: &[BigInt]) -> bool {
    let (Some(mut r0), Some(mut r1)) = (reduce_mod_screen(a), reduce_mod_screen(b)) else {
        return false;
    };
    while !r1.is_empty() {
        let lead_inv = inv_mod(*r1.last().unwrap());
        while r0.len() >= r1.len() {
            let c = mul_mod(*r0.last().unwrap(), lead_inv);
            let shift = r0.len() - r1.len();
            for (j, &d) in r1.iter().enumerate() {
                r0[shift + j] = (r0[shift + j] + SCREEN_PRIME - mul_mod(c, d)) % SCREEN_PRIME;
            }
            while r0.last() == Some(&0) {
                r0.pop();
            }
        }
        std::mem::swap(&mut r0, &mut r1);
    }
    r0.len() == 1
}

/// Heuristic gcd of primitive polynomials: evaluate at a large integer, take
/// the integer gcd, read it back in balanced base `ξ`, and accept only if the
/// candidate divides both inputs.
fn heuristic_gcd(a: &[BigInt], b: &[BigInt]) -> Option<ZPoly> {
    let max_abs = |p: &[BigInt]| p.iter().map(|c| c.abs()).max().unwrap_or_default();
    let mut xi: BigInt = 2 * max_abs(a).min(max_abs(b)) + 29;
    let eval = |p: &[BigInt], x: &BigInt| p.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c);
    for _ in 0..6 {
        let h = eval(a, &xi).gcd(&eval(b, &xi));
        let half = &xi / 2;
        let mut g = Vec::new();
        let mut rest = h;
        while !rest.is_zero() {
            let mut digit = rest.mod_floor(&xi);
            if digit > half {
                digit -= &xi;
            }
            rest = (rest - &digit) / &xi;
            g.push(digit);
        }
        let (_, g) = primitive(g);
        if !g.is_empty() && div_exact(a, &g).is_some() && div_exact(b, &g).is_some() {
            return Some(g);
        }
        xi = (&xi * 73794 * xi.sqrt().sqrt()) / 27011;
    }
    None
}

/// Primitive gcd with positive leading coefficient; both inputs nonzero.
pub(crate) fn gcd(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if degree(a) == 0 || degree(b) == 0 || coprime_screen(a, b) {
        return one();
    }
    let (_, a) = primitive(a.to_vec());
    let (_, b) = primitive(b.to_vec());
    if let Some(g) = heuristic_gcd(&a, &b) {
        return g;
    }
    // Euclid over Q on primitive remainders.
    let (mut r0, mut r1) = (a, b);
    while !r1.is_empty() {
        let rem = pseudo_rem(&r0, &r1);
        r0 = std::mem::replace(&mut r1, primitive(rem).1);
    }
    r0
}

/// `lc(b)^k · a mod b` in `Z[x]`.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let d = degree(b);
    let lead = &b[d];
    let mut rem = a.to_vec();
    while rem.len() > d && !rem.is_empty() {
        let top = rem.last().unwrap().clone();
        let shift = rem.len() - 1 - d;
        for c in rem.iter_mut() {
            *c *= lead;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[shift + j] -= &top * bj;
        }
        rem = trim(rem);
    }
    rem
}
