//! Odd-prime field arithmetic and the coset structure behind `Q_{n,p}`.
//!
//! For an odd prime `n`, a primitive root `g` and an odd prime `p | n-1`, the subgroup
//! `H = <g^p>` has index `p` in `F_n^×`. The coset of `x` is identified with an element of
//! `F_p` (its *index*) through `x^((n-1)/p) = ω_j`, `ω_j = g^(j(n-1)/p)`. `Q_{n,p}` is the union
//! of the cosets whose index is `0` or a quadratic residue mod `p`.

use std::collections::HashMap;
use std::fmt;

use crate::error::{input, Error, Result};

/// Largest supported modulus (exclusive).
pub const MAX_MODULUS: u64 = 1 << 63;

/// Default size limit for the optional full discrete-log table.
pub const DEFAULT_DLOG_CAP: u64 = 1 << 24;

/// Trial division budget used when factoring `n - 1`.
pub const FACTOR_TRIAL_LIMIT: u64 = 1 << 32;

#[inline]
pub fn mulmod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

pub fn powmod(mut base: u64, mut exp: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, n);
        }
        base = mulmod(base, base, n);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin; the first twelve prime bases are exact below 3.3·10^24.
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct prime factors of `m`, by trial division up to `√m` with the cofactor tested for
/// primality.
pub fn prime_factors(mut m: u64) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while m > 1 && !is_prime_u64(m) {
        if d > FACTOR_TRIAL_LIMIT {
            return Err(Error::Budget { name: "factor_trial_division", limit: FACTOR_TRIAL_LIMIT as u128 });
        }
        if (d as u128) * (d as u128) > m as u128 {
            break;
        }
        if m.is_multiple_of(d) {
            out.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push(m);
    }
    Ok(out)
}

fn has_full_order(g: u64, n: u64, factors: &[u64]) -> bool {
    !g.is_multiple_of(n) && factors.iter().all(|&q| powmod(g, (n - 1) / q, n) != 1)
}

/// Least primitive root modulo the odd prime `n`.
pub fn find_primitive_root(n: u64) -> Result<u64> {
    if n < 3 || n.is_multiple_of(2) || !is_prime_u64(n) {
        return input(format!("{n} is not an odd prime"));
    }
    let factors = prime_factors(n - 1)?;
    (2..n)
        .find(|&g| has_full_order(g, n, &factors))
        .ok_or_else(|| Error::Input(format!("no primitive root modulo {n}")))
}

/// Result of scanning `p·k + 1` for a prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ApPrime {
    pub n: u64,
    /// Whether `n < √p · lower`, the window in which primes `≡ 1 (mod p)` are known to exist
    /// for large `p`.
    pub in_window: bool,
}

/// Least prime `n > lower` with `n ≡ 1 (mod p)`.
pub fn next_prime_in_ap(p: u64, lower: u64) -> Result<ApPrime> {
    if p == 0 || lower >= MAX_MODULUS {
        return input("next_prime_in_ap needs p > 0 and lower < 2^63");
    }
    let mut n = (lower / p) * p + 1;
    if n <= lower {
        n += p;
    }
    while !is_prime_u64(n) {
        n = n
            .checked_add(p)
            .filter(|&n| n < MAX_MODULUS)
            .ok_or(Error::Budget { name: "ap_scan", limit: MAX_MODULUS as u128 })?;
    }
    let window = (p as f64).sqrt() * lower as f64;
    Ok(ApPrime { n, in_window: (n as f64) < window })
}

/// Quadratic residues mod an odd prime `p` (nonzero squares), as a membership table.
pub fn quadratic_residues(p: u64) -> Vec<bool> {
    let mut table = vec![false; p as usize];
    for b in 1..p {
        table[(b * b % p) as usize] = true;
    }
    table
}

/// Field context `(n, p, g)` with the `p`-th root-of-unity table.
#[derive(Clone)]
pub struct FieldCtx {
    n: u64,
    p: u64,
    g: u64,
    cofactor: u64,
    omega: HashMap<u64, u64>,
    qr: Vec<bool>,
    dlog: Option<Vec<u32>>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("n", &self.n)
            .field("p", &self.p)
            .field("g", &self.g)
            .field("dlog_table", &self.dlog.is_some())
            .finish()
    }
}

impl FieldCtx {
    /// `g = None` picks the least primitive root.
    pub fn new(n: u64, p: u64, g: Option<u64>) -> Result<Self> {
        if n >= MAX_MODULUS {
            return Err(Error::Unsupported(format!("modulus {n} needs more than 63 bits")));
        }
        if n < 3 || n.is_multiple_of(2) || !is_prime_u64(n) {
            return input(format!("n = {n} is not an odd prime"));
        }
        if p < 3 || p.is_multiple_of(2) || !is_prime_u64(p) {
            return input(format!("p = {p} is not an odd prime"));
        }
        if !(n - 1).is_multiple_of(p) {
            return input(format!("p = {p} does not divide n - 1 = {}", n - 1));
        }
        let g = match g {
            Some(g) => {
                let factors = prime_factors(n - 1)?;
                if !has_full_order(g, n, &factors) {
                    return input(format!("{g} is not a primitive root modulo {n}"));
                }
                g
            }
            None => find_primitive_root(n)?,
        };
        let cofactor = (n - 1) / p;
        let step = powmod(g, cofactor, n);
        let mut omega = HashMap::with_capacity(p as usize);
        let mut w = 1u64;
        for j in 0..p {
            omega.insert(w, j);
            w = mulmod(w, step, n);
        }
        debug_assert_eq!(omega.len(), p as usize);
        Ok(FieldCtx { n, p, g, cofactor, omega, qr: quadratic_residues(p), dlog: None })
    }

    /// Also builds the full discrete-log table when `n <= cap`.
    pub fn with_dlog_table(mut self, cap: u64) -> Self {
        if self.n <= cap && self.n - 1 <= u32::MAX as u64 {
            let mut table = vec![0u32; self.n as usize];
            let mut x = 1u64;
            for e in 0..self.n - 1 {
                table[x as usize] = e as u32;
                x = mulmod(x, self.g, self.n);
            }
            self.dlog = Some(table);
        }
        self
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn g(&self) -> u64 {
        self.g
    }

    pub fn has_dlog_table(&self) -> bool {
        self.dlog.is_some()
    }

    /// `|H| = (n-1)/p`.
    pub fn subgroup_order(&self) -> u64 {
        self.cofactor
    }

    pub fn is_qr_mod_p(&self, j: u64) -> bool {
        self.qr[j as usize]
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.n - (b - a)
        }
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a as u128 + b as u128;
        (s % self.n as u128) as u64
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mulmod(a, b, self.n)
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        powmod(a, e, self.n)
    }

    /// The `j ∈ F_p` with `x ∈ g^j H`.
    pub fn index_mod_p(&self, x: u64) -> Result<u64> {
        let x = x % self.n;
        if x == 0 {
            return input("index of 0 is undefined");
        }
        if let Some(table) = &self.dlog {
            return Ok(table[x as usize] as u64 % self.p);
        }
        Ok(self.index_by_subgroup(x))
    }

    /// Power-and-lookup path, always available.
    pub fn index_by_subgroup(&self, x: u64) -> u64 {
        let w = powmod(x, self.cofactor, self.n);
        *self.omega.get(&w).expect("x^((n-1)/p) is a p-th root of unity")
    }

    /// Index through the full discrete-log table, if built.
    pub fn index_by_dlog(&self, x: u64) -> Option<u64> {
        self.dlog.as_ref().map(|t| t[(x % self.n) as usize] as u64 % self.p)
    }

    pub fn index_in_q(&self, j: u64) -> bool {
        j == 0 || self.qr[j as usize]
    }

    /// `x ∈ Q_{n,p}`.
    pub fn in_qnp(&self, x: u64) -> Result<bool> {
        Ok(self.index_in_q(self.index_mod_p(x)?))
    }

    /// `(p+1)(n-1)/(2p)`.
    pub fn q_size(&self) -> u64 {
        self.p.div_ceil(2) * self.cofactor
    }

    /// `g^j`, a representative of the coset with index `j`.
    pub fn coset_rep(&self, j: u64) -> u64 {
        powmod(self.g, j, self.n)
    }

    /// Canonical spec string `field:n=..,p=..,g=..`.
    pub fn spec_string(&self) -> String {
        format!("field:n={},p={},g={}", self.n, self.p, self.g)
    }
}
