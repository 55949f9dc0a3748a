//! Multiplicative characters of order `m` and the audits of the coset-intersection lemma.
//!
//! Sums of `m`-th roots of unity are kept as integer vectors `a` in the group ring `Z[Z_m]`,
//! standing for `Σ a_k ω^k`. Two sums are compared as vectors; whether a sum is zero as a complex
//! number is decided exactly by reducing modulo the cyclotomic polynomial `Φ_m`.

use rand::Rng;
use serde_json::{json, Value};

use crate::error::{input, Result};
use crate::field::{find_primitive_root, is_prime_u64, mulmod};

/// Largest `q` audited by brute force.
pub const MAX_AUDIT_Q: u64 = 1_000_000;

/// A character of order `m` on `F_q`: `χ(α^k) = ω^{k mod m}`.
#[derive(Clone, Debug)]
pub struct CharCtx {
    q: u64,
    m: u64,
    alpha: u64,
    /// `exps[x]` is the exponent of `χ(x)`, `None` at 0.
    exps: Vec<Option<u32>>,
}

impl CharCtx {
    pub fn new(q: u64, m: u64) -> Result<Self> {
        if q < 3 || q.is_multiple_of(2) || !is_prime_u64(q) {
            return input(format!("q = {q} is not an odd prime"));
        }
        if q > MAX_AUDIT_Q {
            return input(format!("q = {q} exceeds the brute-force cap {MAX_AUDIT_Q}"));
        }
        if m < 2 || !(q - 1).is_multiple_of(m) {
            return input(format!("m = {m} must be at least 2 and divide q - 1"));
        }
        let alpha = find_primitive_root(q)?;
        let mut exps = vec![None; q as usize];
        let mut x = 1u64;
        for k in 0..q - 1 {
            exps[x as usize] = Some((k % m) as u32);
            x = mulmod(x, alpha, q);
        }
        Ok(CharCtx { q, m, alpha, exps })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn alpha(&self) -> u64 {
        self.alpha
    }

    /// Exponent `t` with `χ(x) = ω^t`; `None` for `x = 0`.
    pub fn chi_exponent(&self, x: u64) -> Option<u32> {
        self.exps[(x % self.q) as usize]
    }

    fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.q - b) % self.q
    }
}

/// An element `Σ a_k ω^k` of `Z[Z_m]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSum(pub Vec<i64>);

impl RootSum {
    pub fn zero(m: u64) -> Self {
        RootSum(vec![0; m as usize])
    }

    pub fn unit(m: u64, k: u64) -> Self {
        let mut v = vec![0; m as usize];
        v[(k % m) as usize] = 1;
        RootSum(v)
    }

    fn m(&self) -> usize {
        self.0.len()
    }

    pub fn add_assign(&mut self, other: &RootSum) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += b;
        }
    }

    pub fn mul(&self, other: &RootSum) -> RootSum {
        let m = self.m();
        let mut out = vec![0i64; m];
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.0.iter().enumerate() {
                out[(i + j) % m] += a * b;
            }
        }
        RootSum(out)
    }

    /// `ω^k · self`.
    pub fn rotate(&self, k: u64) -> RootSum {
        let m = self.m();
        let mut out = vec![0i64; m];
        for (i, &a) in self.0.iter().enumerate() {
            out[(i + k as usize) % m] = a;
        }
        RootSum(out)
    }

    pub fn to_complex(&self) -> (f64, f64) {
        let m = self.m() as f64;
        self.0.iter().enumerate().fold((0.0, 0.0), |(re, im), (k, &a)| {
            let th = 2.0 * std::f64::consts::PI * k as f64 / m;
            (re + a as f64 * th.cos(), im + a as f64 * th.sin())
        })
    }

    pub fn magnitude(&self) -> f64 {
        let (re, im) = self.to_complex();
        re.hypot(im)
    }

    /// Remainder modulo `Φ_m`; it is zero iff the sum vanishes as a complex number.
    pub fn reduced(&self) -> Vec<i64> {
        let phi = cyclotomic(self.m() as u64);
        let deg = phi.len() - 1;
        let mut r = self.0.clone();
        for top in (deg..r.len()).rev() {
            let c = r[top];
            if c != 0 {
                for (k, &pk) in phi.iter().enumerate() {
                    r[top - deg + k] -= c * pk;
                }
            }
        }
        r.truncate(deg);
        r
    }

    pub fn is_zero_exact(&self) -> bool {
        self.reduced().iter().all(|&a| a == 0)
    }

    /// Exact equality as complex numbers.
    pub fn equals_exact(&self, other: &RootSum) -> bool {
        let mut d = self.clone();
        for (a, b) in d.0.iter_mut().zip(&other.0) {
            *a -= b;
        }
        d.is_zero_exact()
    }
}

/// Coefficients of `Φ_m`, lowest degree first.
pub fn cyclotomic(m: u64) -> Vec<i64> {
    // t^m - 1 divided by Φ_d for every proper divisor d
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in (1..m).filter(|d| m.is_multiple_of(*d)) {
        num = poly_div_exact(&num, &cyclotomic(d));
    }
    num
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quo = vec![0i64; num.len() - dn];
    for k in (0..quo.len()).rev() {
        let c = rem[k + dn];
        quo[k] = c;
        for (i, &b) in den.iter().enumerate() {
            rem[k + i] -= c * b;
        }
    }
    debug_assert!(rem.iter().all(|&a| a == 0));
    quo
}

/// `Σ_{x ∈ F_q} χ(∏ (x - c_i)^{j_i})` over the roots with `j_i ≢ 0 (mod m)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeilSum {
    pub sum: RootSum,
    /// Number of distinct roots actually present.
    pub d: usize,
    pub magnitude: f64,
    pub bound: f64,
}

impl WeilSum {
    pub fn holds(&self) -> bool {
        self.magnitude <= self.bound + 1e-6
    }
}

/// Weil sum of the factored polynomial `∏ (x - c_i)^{j_i}`.
pub fn weil_sum(ctx: &CharCtx, roots: &[(u64, u64)]) -> Result<WeilSum> {
    let m = ctx.m;
    let active: Vec<(u64, u64)> = roots.iter().map(|&(c, j)| (c % ctx.q, j % m)).filter(|&(_, j)| j != 0).collect();
    if active.is_empty() {
        return input("every multiplicity is divisible by m, so f is an m-th power");
    }
    let mut cs: Vec<u64> = active.iter().map(|&(c, _)| c).collect();
    cs.sort_unstable();
    if cs.windows(2).any(|w| w[0] == w[1]) {
        return input("roots must be distinct");
    }
    let mut sum = RootSum::zero(m);
    for x in 0..ctx.q {
        let mut e = 0u64;
        let mut zero = false;
        for &(c, j) in &active {
            match ctx.chi_exponent(ctx.sub(x, c)) {
                Some(t) => e += t as u64 * j,
                None => zero = true,
            }
        }
        if !zero {
            sum.0[(e % m) as usize] += 1;
        }
    }
    let d = active.len();
    let magnitude = sum.magnitude();
    Ok(WeilSum { sum, d, magnitude, bound: (d as f64 - 1.0) * (ctx.q as f64).sqrt() })
}

/// Shift points `c_i` and coset exponents `t_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetInstance {
    pub pairs: Vec<(u64, u64)>,
}

impl CosetInstance {
    pub fn new(pairs: Vec<(u64, u64)>) -> Result<Self> {
        if pairs.is_empty() {
            return input("need at least one coset condition");
        }
        let mut cs: Vec<u64> = pairs.iter().map(|p| p.0).collect();
        cs.sort_unstable();
        if cs.windows(2).any(|w| w[0] == w[1]) {
            return input("shift points must be distinct");
        }
        Ok(CosetInstance { pairs })
    }

    pub fn d(&self) -> usize {
        self.pairs.len()
    }

    pub fn random<R: Rng>(ctx: &CharCtx, d: usize, rng: &mut R) -> Result<Self> {
        if d as u64 > ctx.q {
            return input("more shift points than field elements");
        }
        let mut pairs: Vec<(u64, u64)> = Vec::with_capacity(d);
        while pairs.len() < d {
            let c = rng.gen_range(0..ctx.q);
            if pairs.iter().all(|p| p.0 != c) {
                pairs.push((c, rng.gen_range(0..ctx.m)));
            }
        }
        Self::new(pairs)
    }
}

/// Everything the audit of one instance checks.
#[derive(Clone, Debug, PartialEq)]
pub struct CosetAudit {
    pub q: u64,
    pub m: u64,
    pub d: usize,
    /// Number of `x` with `x - c_i ∈ α^{t_i} A` for all `i`.
    pub n: u64,
    /// `q/m^d - (d-1)√q - d/m`.
    pub bound: f64,
    /// `N` is at least the bound, decided in exact arithmetic.
    pub bound_holds: bool,
    /// `Σ_x S(x)` from the product formula and from the character-sum expansion.
    pub s_direct: RootSum,
    pub s_expanded: RootSum,
    pub sums_agree: bool,
    pub s_magnitude: f64,
    /// `|Σ S| <= N m^d + d m^{d-1}`.
    pub upper_bracket: bool,
    /// `|Σ S| >= q - (m^d - 1)(d - 1)√q`.
    pub lower_bracket: bool,
    /// Pointwise profile of `S(x)`: `m^d` on counted points, 0 elsewhere off the `c_i`,
    /// magnitude at most `m^{d-1}` at the `c_i`.
    pub profile_ok: bool,
}

impl CosetAudit {
    pub fn passed(&self) -> bool {
        self.bound_holds && self.sums_agree && self.upper_bracket && self.lower_bracket && self.profile_ok
    }

    pub fn to_json(&self, inst: &CosetInstance) -> Value {
        json!({
            "q": self.q, "m": self.m, "d": self.d,
            "c": inst.pairs.iter().map(|p| p.0).collect::<Vec<_>>(),
            "t": inst.pairs.iter().map(|p| p.1).collect::<Vec<_>>(),
            "N": self.n,
            "bound": self.bound,
            "slack": self.n as f64 - self.bound,
            "bound_holds": self.bound_holds,
            "sums_agree": self.sums_agree,
            "upper_bracket": self.upper_bracket,
            "lower_bracket": self.lower_bracket,
            "profile_ok": self.profile_ok,
        })
    }
}

/// Exact check of `N ≥ q/m^d - (d-1)√q - d/m`, i.e. `q·m - d·m^d - N·m^{d+1} ≤ (d-1)√q · m^{d+1}`.
pub fn lemma_bound_holds(q: u64, m: u64, d: usize, n: u64) -> bool {
    let (q, m, n) = (q as i128, m as i128, n as i128);
    let md = m.pow(d as u32);
    let den = md * m;
    let num = q * m - d as i128 * md - n * den;
    if num <= 0 {
        return true;
    }
    let dm1 = d as i128 - 1;
    num * num <= dm1 * dm1 * q * den * den
}

pub fn lemma_bound(q: u64, m: u64, d: usize) -> f64 {
    let (q, m, d) = (q as f64, m as f64, d as f64);
    q / m.powf(d) - (d - 1.0) * q.sqrt() - d / m
}

/// `S(x) = ∏_i Σ_j (ω^{-t_i} χ(x - c_i))^j`, with the `i`-th factor equal to 1 at `x = c_i`.
pub fn s_value(ctx: &CharCtx, inst: &CosetInstance, x: u64) -> RootSum {
    let m = ctx.m;
    let mut acc = RootSum::unit(m, 0);
    for &(c, t) in &inst.pairs {
        let factor = match ctx.chi_exponent(ctx.sub(x, c)) {
            None => RootSum::unit(m, 0),
            Some(e) => {
                let step = (e as u64 + m - t % m) % m;
                let mut f = RootSum::zero(m);
                for j in 0..m {
                    f.0[((step * j) % m) as usize] += 1;
                }
                f
            }
        };
        acc = acc.mul(&factor);
    }
    acc
}

/// `Σ_{j_1..j_d} ω^{-Σ j_i t_i} Σ_x χ(∏ (x - c_i)^{j_i})`, with `χ(·)^0 = 1`.
pub fn s_sum_expanded(ctx: &CharCtx, inst: &CosetInstance) -> RootSum {
    let m = ctx.m;
    let d = inst.d();
    let mut total = RootSum::zero(m);
    let combos = m.pow(d as u32);
    for code in 0..combos {
        let js: Vec<u64> = (0..d).map(|i| code / m.pow(i as u32) % m).collect();
        let mut inner = RootSum::zero(m);
        for x in 0..ctx.q {
            let mut e = 0u64;
            let mut zero = false;
            for (&(c, _), &j) in inst.pairs.iter().zip(&js) {
                if j == 0 {
                    continue;
                }
                match ctx.chi_exponent(ctx.sub(x, c)) {
                    Some(t) => e += t as u64 * j,
                    None => zero = true,
                }
            }
            if !zero {
                inner.0[(e % m) as usize] += 1;
            }
        }
        let shift: u64 = inst.pairs.iter().zip(&js).map(|(&(_, t), &j)| t * j).sum::<u64>() % m;
        total.add_assign(&inner.rotate((m - shift) % m));
    }
    total
}

pub fn coset_count(ctx: &CharCtx, inst: &CosetInstance) -> Result<CosetAudit> {
    let (q, m, d) = (ctx.q, ctx.m, inst.d());
    if let Some(&(c, _)) = inst.pairs.iter().find(|p| p.0 >= q) {
        return input(format!("shift point {c} is not in F_{q}"));
    }
    if (m as f64).powi(d as i32) > 1e12 {
        return input("m^d too large to expand");
    }
    let md = m.pow(d as u32) as i64;
    let counted = |x: u64| inst.pairs.iter().all(|&(c, t)| ctx.chi_exponent(ctx.sub(x, c)) == Some((t % m) as u32));
    let mut n = 0u64;
    let mut s_direct = RootSum::zero(m);
    let mut profile_ok = true;
    let mut target = RootSum::zero(m);
    target.0[0] = md;
    for x in 0..q {
        let s = s_value(ctx, inst, x);
        let is_shift = inst.pairs.iter().any(|p| p.0 == x);
        if counted(x) {
            n += 1;
            profile_ok &= s.equals_exact(&target);
        } else if !is_shift {
            profile_ok &= s.is_zero_exact();
        } else {
            profile_ok &= s.magnitude() <= (md / m as i64) as f64 + 1e-6;
        }
        s_direct.add_assign(&s);
    }
    let s_expanded = s_sum_expanded(ctx, inst);
    let mag = s_direct.magnitude();
    let upper = (n as f64) * md as f64 + d as f64 * (md / m as i64) as f64;
    let lower = q as f64 - (md as f64 - 1.0) * (d as f64 - 1.0) * (q as f64).sqrt();
    Ok(CosetAudit {
        q,
        m,
        d,
        n,
        bound: lemma_bound(q, m, d),
        bound_holds: lemma_bound_holds(q, m, d, n),
        sums_agree: s_direct == s_expanded,
        s_direct,
        s_expanded,
        s_magnitude: mag,
        upper_bracket: mag <= upper + 1e-6,
        lower_bracket: mag >= lower - 1e-6,
        profile_ok,
    })
}

/// A random square-free factored polynomial: `d` distinct roots, each of multiplicity one.
pub fn random_squarefree_roots<R: Rng>(ctx: &CharCtx, d: usize, rng: &mut R) -> Vec<(u64, u64)> {
    let mut roots: Vec<(u64, u64)> = Vec::with_capacity(d);
    while roots.len() < d {
        let c = rng.gen_range(0..ctx.q);
        if roots.iter().all(|r| r.0 != c) {
            roots.push((c, 1));
        }
    }
    roots
}
