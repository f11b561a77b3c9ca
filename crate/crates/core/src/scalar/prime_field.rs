use super::{DeterministicSampler, Ring, ScalarDomain};
use crate::error::{Error, Result};

/// The prime field `F_p` for an odd prime `p`; elements are reduced `u64`s.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p == 2 {
            return Err(Error::InvalidModulus("characteristic 2 is not supported".into()));
        }
        if !is_prime(p) {
            return Err(Error::InvalidModulus(format!("{p} is not prime")));
        }
        Ok(Self { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn elem(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    /// All field elements in increasing order.
    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.p
    }

    /// Legendre symbol via Euler's criterion: 0, 1 or -1.
    pub fn legendre(&self, x: u64) -> i8 {
        if x % self.p == 0 {
            return 0;
        }
        if self.pow(&x, (self.p - 1) / 2) == 1 {
            1
        } else {
            -1
        }
    }
}

impl Ring for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn from_i64(&self, n: i64) -> u64 {
        self.elem(n)
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + self.p as u128 - *b as u128) % self.p as u128) as u64
    }

    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }

    fn is_unit(&self, a: &u64) -> bool {
        *a != 0
    }

    fn inverse(&self, a: &u64) -> Result<u64> {
        if *a == 0 {
            return Err(Error::NotAUnit);
        }
        Ok(self.pow(a, self.p - 2))
    }

    fn is_field(&self) -> bool {
        true
    }

    fn render(&self, a: &u64) -> String {
        a.to_string()
    }
}

impl ScalarDomain for PrimeField {
    type Residue = PrimeField;

    fn residue_field(&self) -> PrimeField {
        *self
    }

    fn residue(&self, x: &u64) -> u64 {
        *x
    }

    fn lift(&self, r: &u64) -> u64 {
        *r
    }

    fn is_square(&self, x: &u64) -> Result<bool> {
        Ok(self.legendre(*x) >= 0)
    }

    fn sample(&self, sampler: &mut DeterministicSampler) -> u64 {
        sampler.below(self.p)
    }

    fn tag(&self) -> String {
        format!("Fp:{}", self.p)
    }

    /// Accepts `v` or `v mod p`; the modulus, when present, must match.
    fn parse(&self, text: &str) -> Result<u64> {
        let text = text.trim();
        let (value, modulus) = match text.split_once("mod") {
            Some((v, m)) => (v.trim(), Some(m.trim())),
            None => (text, None),
        };
        if let Some(m) = modulus {
            let m: u64 = m
                .parse()
                .map_err(|_| Error::Parse(format!("malformed modulus in {text:?}")))?;
            if m != self.p {
                return Err(Error::Parse(format!("modulus {m} does not match field F_{}", self.p)));
            }
        }
        let v: i64 = value
            .parse()
            .map_err(|_| Error::Parse(format!("malformed field element {text:?}")))?;
        Ok(self.elem(v))
    }
}
