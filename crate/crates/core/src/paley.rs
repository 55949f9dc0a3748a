//! Paley graphs, the 13-vertex 2-ample example and the Iterated Paley complex `X_{n,p}`.
//!
//! `σ ⊆ F_n` is a simplex of `X_{n,p}` iff the Vandermonde product of every nonempty subset of
//! `σ` lies in `Q_{n,p}`. The witness solver picks the coset indices `ξ_i = α({u_i, x})` one
//! vertex at a time and then searches for `x` realizing them.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use rand::Rng;
use serde_json::{json, Value};

use crate::error::{input, Error, Result};
use crate::field::{find_primitive_root, is_prime_u64, mulmod, next_prime_in_ap, FieldCtx, MAX_MODULUS};
use crate::seed;
use crate::simplex::{select, ComplexView, ExplicitComplex, Simplex, Vertex};

/// Largest simplex whose full subset condition is checked.
pub const MAX_XNP_SIMPLEX: usize = 12;

/// Largest `|U|` the solver accepts.
pub const MAX_SOLVER_R: usize = 4;

/// Vertex count up to which the `x`-search scans exhaustively.
pub const EXHAUSTIVE_X_LIMIT: u64 = 1 << 20;

const SOLVER_NODE_LIMIT: u64 = 10_000_000;

/// Paley graph on `F_q`: `{i, j}` is an edge iff `i - j` is a nonzero square.
pub fn paley_graph(q: u64) -> Result<ExplicitComplex> {
    if !is_prime_u64(q) || q % 4 != 1 {
        return input(format!("q = {q} must be a prime congruent to 1 mod 4"));
    }
    if q > 1 << 16 {
        return input("Paley graphs are built explicitly only for q <= 65536");
    }
    let squares: BTreeSet<u64> = (1..q).map(|b| b * b % q).collect();
    let mut edges = Vec::new();
    for i in 0..q {
        for j in i + 1..q {
            if squares.contains(&(j - i)) {
                edges.push(Simplex::from_sorted(vec![i, j]));
            }
        }
    }
    ExplicitComplex::from_facets(0..q, &edges, 1)
}

/// The Paley graph of order 13 with the 13 triangles `{i, i+1, i+4}` filled in.
pub fn example13() -> ExplicitComplex {
    let graph = paley_graph(13).expect("13 is a Paley prime");
    let mut facets = graph.simplices(1);
    for i in 0..13u64 {
        facets.push(Simplex::new(vec![i, (i + 1) % 13, (i + 4) % 13]).unwrap());
    }
    ExplicitComplex::from_facets(0..13, &facets, 3).unwrap()
}

fn check_distinct(ctx: &FieldCtx, s: &[u64]) -> Result<()> {
    if s.is_empty() {
        return input("empty vertex set");
    }
    if let Some(v) = s.iter().find(|&&v| v >= ctx.n()) {
        return input(format!("{v} is not an element of F_{}", ctx.n()));
    }
    let mut sorted = s.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return input(format!("repeated vertex in {s:?}"));
    }
    Ok(())
}

/// `∏_{i<j} (x_i - x_j)` (sign left as computed; `±1 ∈ H`).
fn vandermonde(ctx: &FieldCtx, s: &[u64]) -> u64 {
    let mut acc = 1u64;
    for (i, &a) in s.iter().enumerate() {
        for &b in &s[i + 1..] {
            acc = mulmod(acc, ctx.sub(a, b), ctx.n());
        }
    }
    acc
}

/// `α(σ)`: the coset index of the Vandermonde product; 0 for a singleton.
pub fn alpha_index(ctx: &FieldCtx, s: &[u64]) -> Result<u64> {
    check_distinct(ctx, s)?;
    ctx.index_mod_p(vandermonde(ctx, s))
}

/// `σ` is a hyperedge of `H_{n,p}`: its Vandermonde product lies in `Q_{n,p}`.
pub fn hnp_has_hyperedge(ctx: &FieldCtx, s: &[u64]) -> Result<bool> {
    check_distinct(ctx, s)?;
    ctx.in_qnp(vandermonde(ctx, s))
}

/// `σ ∈ X_{n,p}`: every nonempty subset is a hyperedge.
pub fn xnp_contains(ctx: &FieldCtx, s: &[u64]) -> Result<bool> {
    check_distinct(ctx, s)?;
    if s.len() > MAX_XNP_SIMPLEX {
        return Err(Error::Budget { name: "xnp_simplex_size", limit: MAX_XNP_SIMPLEX as u128 });
    }
    for m in 1u64..1 << s.len() {
        if m.count_ones() >= 2 && !ctx.in_qnp(vandermonde(ctx, &select(s, m)))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `X_{n,p}` as a membership oracle on `F_n`, truncated at `dim_cap`.
#[derive(Clone, Debug)]
pub struct XnpOracle {
    ctx: Arc<FieldCtx>,
    dim_cap: usize,
}

impl XnpOracle {
    pub fn new(ctx: FieldCtx, dim_cap: usize) -> Result<Self> {
        if dim_cap + 1 > MAX_XNP_SIMPLEX {
            return Err(Error::Budget { name: "xnp_simplex_size", limit: MAX_XNP_SIMPLEX as u128 });
        }
        Ok(XnpOracle { ctx: Arc::new(ctx), dim_cap })
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }
}

impl fmt::Display for XnpOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "xnp:n={},p={},g={},dim={}", self.ctx.n(), self.ctx.p(), self.ctx.g(), self.dim_cap)
    }
}

impl ComplexView for XnpOracle {
    fn vertex_count(&self) -> u64 {
        self.ctx.n()
    }

    fn vertex_at(&self, index: u64) -> Vertex {
        index
    }

    fn has_vertex(&self, v: Vertex) -> bool {
        v < self.ctx.n()
    }

    fn contains(&self, s: &[Vertex]) -> bool {
        s.len() <= self.dim_cap + 1 && xnp_contains(&self.ctx, s).unwrap_or(false)
    }

    fn dim_cap(&self) -> usize {
        self.dim_cap
    }
}

/// A challenge for the solver: ordered `U` and an arbitrary hypergraph `Y` of nonempty subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessProblem {
    u: Vec<u64>,
    /// Members of `Y` as bitmasks over positions in `u`.
    y: BTreeSet<u64>,
}

impl WitnessProblem {
    /// `U` is ordered ascending; every member of `Y` must be a nonempty subset of `U`.
    pub fn new(mut u: Vec<u64>, y: &[Vec<u64>]) -> Result<Self> {
        u.sort_unstable();
        if u.windows(2).any(|w| w[0] == w[1]) {
            return input("U has repeated vertices");
        }
        if u.is_empty() || u.len() > MAX_SOLVER_R {
            return input(format!("|U| must be between 1 and {MAX_SOLVER_R}"));
        }
        let mut masks = BTreeSet::new();
        for s in y {
            if s.is_empty() {
                return input("Y contains the empty set");
            }
            let mut m = 0u64;
            for v in s {
                match u.iter().position(|w| w == v) {
                    Some(i) => m |= 1 << i,
                    None => return input(format!("{v} is in a member of Y but not in U")),
                }
            }
            masks.insert(m);
        }
        Ok(WitnessProblem { u, y: masks })
    }

    pub fn u(&self) -> &[u64] {
        &self.u
    }

    pub fn y_members(&self) -> Vec<Vec<u64>> {
        self.y.iter().map(|&m| select(&self.u, m).to_vec()).collect()
    }

    fn in_y(&self, m: u64) -> bool {
        self.y.contains(&m)
    }

    fn r(&self) -> usize {
        self.u.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum XSearch {
    Exhaustive,
    Sampled { seed: u64, max_trials: u64 },
}

impl XSearch {
    /// Exhaustive for `n <= 2^20`, else sampling with `200 · p^r` trials.
    pub fn auto(ctx: &FieldCtx, r: usize, seed: u64) -> XSearch {
        if ctx.n() <= EXHAUSTIVE_X_LIMIT {
            XSearch::Exhaustive
        } else {
            let trials = (ctx.p() as u128).pow(r as u32).saturating_mul(200).min(u64::MAX as u128) as u64;
            XSearch::Sampled { seed, max_trials: trials }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelTrace {
    /// `(σ, δ(σ), σ ∈ Y)` for the constraints whose top vertex is this level's.
    pub deltas: Vec<(Vec<u64>, u64, bool)>,
    pub admissible: usize,
    pub excluded: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveTrace {
    pub levels: Vec<LevelTrace>,
    pub backtracks: u64,
    pub x_trials: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessSolution {
    pub x: u64,
    pub xi: Vec<u64>,
    pub trace: SolveTrace,
}

impl WitnessSolution {
    pub fn to_json(&self, problem: &WitnessProblem) -> Value {
        let levels: Vec<Value> = self
            .trace
            .levels
            .iter()
            .map(|l| {
                let deltas: Vec<Value> =
                    l.deltas.iter().map(|(s, d, iny)| json!({"sigma": s, "delta": d, "in_Y": iny})).collect();
                json!({"deltas": deltas, "admissible": l.admissible, "excluded": l.excluded})
            })
            .collect();
        json!({
            "U": problem.u,
            "Y": problem.y_members(),
            "x": self.x,
            "xi": self.xi,
            "trace": {"levels": levels, "backtracks": self.trace.backtracks, "x_trials": self.trace.x_trials},
        })
    }
}

struct Solver<'a> {
    ctx: &'a FieldCtx,
    problem: &'a WitnessProblem,
    /// `α` of every nonempty subset of `U`, indexed by mask.
    alpha: Vec<u64>,
    xi: Vec<u64>,
    nodes: u64,
    backtracks: u64,
    deepest_failure: usize,
}

impl Solver<'_> {
    fn sum_xi(&self, m: u64) -> u64 {
        let p = self.ctx.p();
        (0..self.problem.r()).filter(|i| m >> i & 1 == 1).fold(0, |acc, i| (acc + self.xi[i]) % p)
    }

    /// `δ(σ) = α(σ) + Σ_{v ∈ σ, v ≠ u_i} ξ_v` for `σ` with top vertex `u_i`.
    fn delta(&self, m: u64, i: usize) -> u64 {
        (self.alpha[m as usize] + self.sum_xi(m & !(1 << i))) % self.ctx.p()
    }

    fn level_masks(i: usize) -> impl Iterator<Item = u64> {
        (0u64..1 << i).map(move |low| low | 1 << i)
    }

    fn fits(&self, value: u64, in_y: bool) -> bool {
        value != 0 && self.ctx.is_qr_mod_p(value) == in_y
    }

    /// Values `ξ_j` must avoid so that future `δ`'s sharing a top vertex stay distinct.
    fn forbidden(&self, j: usize) -> BTreeSet<u64> {
        let p = self.ctx.p();
        let r = self.problem.r();
        let mut out = BTreeSet::new();
        for i in j + 1..r {
            for s in Self::level_masks(i) {
                for t in Self::level_masks(i) {
                    let diff = s ^ t;
                    if diff == 0 || 63 - diff.leading_zeros() as usize != j || s >> j & 1 == 0 {
                        continue;
                    }
                    let lhs = (self.alpha[t as usize] + self.sum_xi(t & !s)) % p;
                    let rhs = (self.alpha[s as usize] + self.sum_xi((s & !t) & !(1 << j))) % p;
                    out.insert((lhs + p - rhs) % p);
                }
            }
        }
        out
    }

    fn level(&mut self, i: usize, trace: &mut Vec<LevelTrace>) -> Result<bool> {
        if i == self.problem.r() {
            return Ok(true);
        }
        self.nodes += 1;
        if self.nodes > SOLVER_NODE_LIMIT {
            return Err(Error::Budget { name: "solver_nodes", limit: SOLVER_NODE_LIMIT as u128 });
        }
        let p = self.ctx.p();
        let constraints: Vec<(u64, u64, bool)> =
            Self::level_masks(i).map(|m| (m, self.delta(m, i), self.problem.in_y(m))).collect();
        let admissible: Vec<u64> =
            (0..p).filter(|&v| constraints.iter().all(|&(_, d, iny)| self.fits((v + d) % p, iny))).collect();
        let forbidden = self.forbidden(i);
        let candidates: Vec<u64> = admissible.iter().copied().filter(|v| !forbidden.contains(v)).collect();
        trace.truncate(i);
        trace.push(LevelTrace {
            deltas: constraints.iter().map(|&(m, d, iny)| (select(&self.problem.u, m).to_vec(), d, iny)).collect(),
            admissible: admissible.len(),
            excluded: admissible.len() - candidates.len(),
        });
        if candidates.is_empty() {
            self.deepest_failure = self.deepest_failure.max(i);
        }
        for v in candidates {
            self.xi[i] = v;
            if self.level(i + 1, trace)? {
                return Ok(true);
            }
            self.backtracks += 1;
        }
        self.xi[i] = 0;
        Ok(false)
    }
}

/// Finds `x ∉ U` whose links realize `Y` through constraints (I) and (II).
pub fn solve_witness(ctx: &FieldCtx, problem: &WitnessProblem, search: XSearch) -> Result<WitnessSolution> {
    check_distinct(ctx, &problem.u)?;
    let r = problem.r();
    let mut alpha = vec![0u64; 1 << r];
    for m in 1u64..1 << r {
        alpha[m as usize] = alpha_index(ctx, &select(&problem.u, m))?;
    }
    let mut solver = Solver { ctx, problem, alpha, xi: vec![0; r], nodes: 0, backtracks: 0, deepest_failure: 0 };
    let mut levels = Vec::new();
    if !solver.level(0, &mut levels)? {
        return Err(Error::Unsatisfiable { level: solver.deepest_failure + 1 });
    }
    let xi = solver.xi.clone();
    let (x, x_trials) = find_x(ctx, &problem.u, &xi, search)?;
    if !constraint_one_holds(ctx, problem, x)? || !constraint_two_holds(ctx, &problem.u, &xi, x)? {
        return Err(Error::Unsupported("solver output failed its own constraints".into()));
    }
    Ok(WitnessSolution { x, xi, trace: SolveTrace { levels, backtracks: solver.backtracks, x_trials } })
}

fn matches_indices(ctx: &FieldCtx, u: &[u64], xi: &[u64], x: u64) -> bool {
    u.iter().zip(xi).all(|(&v, &k)| x != v && ctx.index_mod_p(ctx.sub(x, v)).ok() == Some(k))
}

fn find_x(ctx: &FieldCtx, u: &[u64], xi: &[u64], search: XSearch) -> Result<(u64, u64)> {
    match search {
        XSearch::Exhaustive => {
            if ctx.n() > EXHAUSTIVE_X_LIMIT * 64 {
                return Err(Error::Budget { name: "x_scan", limit: (EXHAUSTIVE_X_LIMIT * 64) as u128 });
            }
            for x in 0..ctx.n() {
                if matches_indices(ctx, u, xi, x) {
                    return Ok((x, x + 1));
                }
            }
            Err(Error::Budget { name: "x_scan", limit: ctx.n() as u128 })
        }
        XSearch::Sampled { seed, max_trials } => {
            let mut rng = seed::stream(seed, "x-search", 0);
            for t in 0..max_trials {
                let x = rng.gen_range(0..ctx.n());
                if matches_indices(ctx, u, xi, x) {
                    return Ok((x, t + 1));
                }
            }
            Err(Error::Budget { name: "x_trials", limit: max_trials as u128 })
        }
    }
}

/// Constraint (I): `α(σ ∪ {x})` is a nonzero square iff `σ ∈ Y`, else a nonsquare.
fn constraint_one_holds(ctx: &FieldCtx, problem: &WitnessProblem, x: u64) -> Result<bool> {
    for m in 1u64..1 << problem.r() {
        let mut s = select(&problem.u, m).to_vec();
        s.push(x);
        let a = alpha_index(ctx, &s)?;
        if a == 0 || ctx.is_qr_mod_p(a) != problem.in_y(m) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Constraint (II): `x - u_i ∈ g^{ξ_i} H`.
fn constraint_two_holds(ctx: &FieldCtx, u: &[u64], xi: &[u64], x: u64) -> Result<bool> {
    Ok(matches_indices(ctx, u, xi, x))
}

/// Checks a candidate `x` by raw membership. When `Y` is a subcomplex of `X_U` this is the link
/// condition `σ ∪ {x} ∈ X ⇔ σ ∈ Y` over `σ ∈ X_U`; otherwise it is constraint (I).
pub fn challenge_check(ctx: &FieldCtx, u: &[u64], y: &[Vec<u64>], x: u64) -> Result<bool> {
    let problem = WitnessProblem::new(u.to_vec(), y)?;
    if problem.u.contains(&x) || x >= ctx.n() {
        return input("x must be a field element outside U");
    }
    let u = &problem.u;
    let mut in_xu = vec![false; 1 << u.len()];
    for m in 1u64..1 << u.len() {
        in_xu[m as usize] = xnp_contains(ctx, &select(u, m))?;
    }
    let is_subcomplex = problem.y.iter().all(|&m| {
        in_xu[m as usize]
            && (0..u.len()).filter(|i| m >> i & 1 == 1 && m != 1 << i).all(|i| problem.in_y(m & !(1 << i)))
    });
    if !is_subcomplex {
        return constraint_one_holds(ctx, &problem, x);
    }
    for m in 1u64..1 << u.len() {
        if !in_xu[m as usize] {
            continue;
        }
        let mut s = select(u, m).to_vec();
        s.push(x);
        if xnp_contains(ctx, &s)? != problem.in_y(m) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Parameters at which `X_{n,p}` is proved r-ample.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CertifiedParams {
    pub r: usize,
    pub p: u64,
    pub n: u64,
    pub g: u64,
    /// `n < √p · r²p^{2r}`.
    pub in_window: bool,
}

impl CertifiedParams {
    pub fn ctx(&self) -> Result<FieldCtx> {
        FieldCtx::new(self.n, self.p, Some(self.g))
    }

    pub fn to_json(&self) -> Value {
        json!({"r": self.r, "p": self.p, "n": self.n, "g": self.g, "in_window": self.in_window})
    }
}

/// Least prime `p > 2^{2^r + 2r}`, then the least prime `n ≡ 1 (mod p)` above `r² p^{2r}`.
pub fn certified_params(r: usize) -> Result<CertifiedParams> {
    if r == 0 {
        return input("r must be at least 1");
    }
    let e = (1usize << r.min(20)) + 2 * r;
    if e >= 62 {
        return Err(Error::Unsupported(format!("r = {r} needs p above 2^{e}")));
    }
    let lo = 1u64 << e;
    let p = (lo + 1..lo << 1).find(|&c| is_prime_u64(c)).expect("Bertrand");
    let lower = BigUint::from(r * r) * BigUint::from(p).pow(2 * r as u32);
    if lower >= BigUint::from(MAX_MODULUS) {
        let bits = lower.bits();
        return Err(Error::Unsupported(format!("r = {r} requires ~{bits}-bit modulus")));
    }
    let lower: u64 = lower.try_into().expect("checked above");
    let ap = next_prime_in_ap(p, lower)?;
    let g = find_primitive_root(ap.n)?;
    Ok(CertifiedParams { r, p, n: ap.n, g, in_window: ap.in_window })
}
