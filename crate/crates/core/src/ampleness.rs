//! The r-ampleness verifier and the machinery built on it.
//!
//! A challenge is a pair `(U, A)` with `|U| <= r` and `A` a subcomplex of `X_U`; a witness is a
//! vertex `v ∉ U` with `lk(v) ∩ X_U = A`, equivalently `X_{U ∪ {v}} = X_U ∪ (v ∗ A)`.

use std::collections::{BTreeMap, HashMap};
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{input, Error, Result};
use crate::seed;
use crate::simplex::{select, with_vertex, ComplexView, ExplicitComplex, RemovalFamily, Simplex, Vertex, SCAN_LIMIT};

/// Largest `|U|` the verifier handles (subcomplex masks are 64-bit).
pub const MAX_LOCAL_VERTICES: usize = 6;

/// Largest `k` for which `M'(k)` is enumerated.
pub const DEDEKIND_ENUM_LIMIT: usize = 6;

const CHUNK: usize = 2048;

/// Dedekind numbers `M(0..=9)` (number of antichains of subsets of a k-set).
const DEDEKIND: [&str; 10] = [
    "2",
    "3",
    "6",
    "20",
    "168",
    "7581",
    "7828354",
    "2414682040998",
    "56130437228687557907788",
    "286386577668298411128469151667598498812366",
];

/// `M'(k) = M(k) - 1` from the published table, `k <= 9`.
pub fn reduced_dedekind_table(k: usize) -> Option<BigUint> {
    DEDEKIND.get(k).map(|s| BigUint::from_str(s).unwrap() - 1u32)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmpleChallenge {
    pub u: Vec<Vertex>,
    pub a: ExplicitComplex,
}

impl AmpleChallenge {
    pub fn new(mut u: Vec<Vertex>, a: ExplicitComplex) -> Self {
        u.sort_unstable();
        u.dedup();
        AmpleChallenge { u, a }
    }
}

/// How candidate witnesses are searched.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessSearch {
    /// Ascending vertex order over the whole view.
    Exhaustive,
    /// Up to `trials` uniformly drawn candidates.
    Sampled { seed: u64, trials: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    Exhaustive,
    Sampled { seed: u64, trials: u64 },
}

/// Work limits. Exceeding one is an error, never a partial verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_challenges: u128,
    pub max_witness_scans: u128,
    /// Candidates drawn per challenge in sampled mode before falling back to a full scan.
    pub witness_samples: u64,
    /// Largest vertex count for which a full witness scan is allowed.
    pub max_scan_vertices: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_challenges: 1_000_000_000,
            max_witness_scans: 100_000_000_000,
            witness_samples: 100_000,
            max_scan_vertices: SCAN_LIMIT,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Ample,
    Counterexample(AmpleChallenge),
    NotRefuted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmpleReport {
    pub r: usize,
    pub mode: VerifyMode,
    pub verdict: Verdict,
    pub challenges: u64,
    pub witness_scans: u64,
    pub ms: u64,
}

impl AmpleReport {
    pub fn is_ample(&self) -> bool {
        self.verdict == Verdict::Ample
    }

    /// Report JSON; `ms` is `null` unless `timing` is set so that output stays reproducible.
    pub fn to_json(&self, timing: bool) -> Value {
        let mut obj = serde_json::Map::new();
        obj.insert("r".into(), json!(self.r));
        match self.mode {
            VerifyMode::Exhaustive => {
                obj.insert("mode".into(), json!("exhaustive"));
            }
            VerifyMode::Sampled { seed, trials } => {
                obj.insert("mode".into(), json!("sampled"));
                obj.insert("seed".into(), json!(seed));
                obj.insert("trials".into(), json!(trials));
            }
        }
        let verdict = match &self.verdict {
            Verdict::Ample => "ample",
            Verdict::Counterexample(_) => "counterexample",
            Verdict::NotRefuted => "not-refuted",
        };
        obj.insert("verdict".into(), json!(verdict));
        if let Verdict::Counterexample(c) = &self.verdict {
            obj.insert("counterexample".into(), challenge_json(c));
        }
        obj.insert("challenges".into(), json!(self.challenges));
        obj.insert("ms".into(), if timing { json!(self.ms) } else { Value::Null });
        Value::Object(obj)
    }
}

pub fn challenge_json(c: &AmpleChallenge) -> Value {
    let facets: Vec<Vec<Vertex>> = c.a.facets().into_iter().map(Simplex::into_vec).collect();
    json!({ "U": c.u, "A_facets": facets })
}

/// Parses `{"U":[..],"A_facets":[[..],..]}`.
pub fn challenge_from_json(v: &Value) -> Result<AmpleChallenge> {
    let u: Vec<Vertex> = serde_json::from_value(v["U"].clone()).map_err(|e| Error::Format(e.to_string()))?;
    let facets: Vec<Vec<Vertex>> =
        serde_json::from_value(v["A_facets"].clone()).map_err(|e| Error::Format(e.to_string()))?;
    let facets = facets.into_iter().map(Simplex::new).collect::<Result<Vec<_>>>()?;
    let verts: Vec<Vertex> = facets.iter().flat_map(|f| f.vertices().to_vec()).collect();
    let a = ExplicitComplex::from_facets(verts, &facets, u.len().max(1))?;
    Ok(AmpleChallenge::new(u, a))
}

/// `X_U` encoded as bitmasks over positions in `U`, ordered by dimension then
/// lexicographically. Subcomplexes of `X_U` are bitmasks over these simplex indices.
#[derive(Clone, Debug)]
pub(crate) struct LocalComplex {
    pub(crate) u: Vec<Vertex>,
    pub(crate) simplices: Vec<u64>,
    facets: Vec<Vec<usize>>,
    index: HashMap<u64, usize>,
}

impl LocalComplex {
    pub(crate) fn build<X: ComplexView + ?Sized>(x: &X, u: &[Vertex]) -> Result<Self> {
        if u.len() > MAX_LOCAL_VERTICES {
            return Err(Error::Unsupported(format!("challenges on more than {MAX_LOCAL_VERTICES} vertices")));
        }
        let k = u.len();
        let mut masks: Vec<u64> = (1u64..1 << k).filter(|m| (m.count_ones() as usize) <= x.dim_cap() + 1).collect();
        masks.sort_by_key(|&m| (m.count_ones(), select(u, m)));
        let mut simplices = Vec::new();
        let mut index = HashMap::new();
        for m in masks {
            let present = if m.count_ones() == 1 {
                true
            } else {
                let all_facets = (0..k).filter(|i| m >> i & 1 == 1).all(|i| index.contains_key(&(m & !(1 << i))));
                all_facets && x.contains(&select(u, m))
            };
            if present {
                index.insert(m, simplices.len());
                simplices.push(m);
            }
        }
        let facets = simplices
            .iter()
            .map(|&m| {
                if m.count_ones() == 1 {
                    return Vec::new();
                }
                (0..k).filter(|i| m >> i & 1 == 1).map(|i| index[&(m & !(1 << i))]).collect()
            })
            .collect();
        Ok(LocalComplex { u: u.to_vec(), simplices, facets, index })
    }

    /// All subcomplexes (downward-closed subfamilies), ascending by mask value.
    pub(crate) fn subcomplexes(&self) -> Vec<u64> {
        let mut out = Vec::new();
        self.subcomplex_dfs(0, 0, &mut out);
        out.sort_unstable();
        out
    }

    fn subcomplex_dfs(&self, i: usize, acc: u64, out: &mut Vec<u64>) {
        if i == self.simplices.len() {
            out.push(acc);
            return;
        }
        self.subcomplex_dfs(i + 1, acc, out);
        if self.facets[i].iter().all(|&f| acc >> f & 1 == 1) {
            self.subcomplex_dfs(i + 1, acc | 1 << i, out);
        }
    }

    /// `lk(v) ∩ X_U` as a subcomplex mask.
    pub(crate) fn pattern<X: ComplexView + ?Sized>(&self, x: &X, v: Vertex) -> u64 {
        let mut acc = 0u64;
        for (i, &m) in self.simplices.iter().enumerate() {
            if self.facets[i].iter().any(|&f| acc >> f & 1 == 0) {
                continue;
            }
            if x.contains(&with_vertex(&select(&self.u, m), v)) {
                acc |= 1 << i;
            }
        }
        acc
    }

    /// Vertices of `U` that `A`-masks refer to.
    fn position(&self, v: Vertex) -> Option<usize> {
        self.u.iter().position(|&w| w == v)
    }

    pub(crate) fn mask_of(&self, a: &ExplicitComplex) -> Result<u64> {
        let mut acc = 0u64;
        for s in a.all_simplices() {
            let mut m = 0u64;
            for &v in s.vertices() {
                match self.position(v) {
                    Some(i) => m |= 1 << i,
                    None => return input(format!("A uses vertex {v} outside U")),
                }
            }
            match self.index.get(&m) {
                Some(&i) => acc |= 1 << i,
                None => return input(format!("{:?} is in A but not in X_U", s.vertices())),
            }
        }
        Ok(acc)
    }

    pub(crate) fn to_complex(&self, mask: u64) -> ExplicitComplex {
        let simplices: Vec<Simplex> = self
            .simplices
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, &m)| Simplex::from_sorted(select(&self.u, m).to_vec()))
            .collect();
        let verts: Vec<Vertex> = simplices.iter().filter(|s| s.len() == 1).map(|s| s.vertices()[0]).collect();
        ExplicitComplex::from_facets(verts, &simplices, self.u.len().max(1)).expect("subcomplex of X_U")
    }
}

fn check_exactness<X: ComplexView + ?Sized>(x: &X, needed_dim: usize) -> Result<()> {
    if x.exact_dim() < needed_dim {
        return input(format!("membership is only exact up to dimension {}, need {needed_dim}", x.exact_dim()));
    }
    Ok(())
}

fn check_u<X: ComplexView + ?Sized>(x: &X, u: &[Vertex]) -> Result<()> {
    match u.iter().find(|v| !x.has_vertex(**v)) {
        Some(v) => input(format!("vertex {v} is not in the complex")),
        None => Ok(()),
    }
}

fn scan_for<X: ComplexView + ?Sized>(
    x: &X,
    local: &LocalComplex,
    target: u64,
    search: WitnessSearch,
) -> Result<Option<Vertex>> {
    match search {
        WitnessSearch::Exhaustive => {
            if x.vertex_count() > SCAN_LIMIT {
                return Err(Error::Budget { name: "witness_scan_vertices", limit: SCAN_LIMIT as u128 });
            }
            Ok(x.vertices().find(|v| !local.u.contains(v) && local.pattern(x, *v) == target))
        }
        WitnessSearch::Sampled { seed, trials } => {
            let mut rng = seed::stream(seed, "witness", 0);
            let n = x.vertex_count();
            for _ in 0..trials {
                let v = x.vertex_at(rng.gen_range(0..n));
                if !local.u.contains(&v) && local.pattern(x, v) == target {
                    return Ok(Some(v));
                }
            }
            Ok(None)
        }
    }
}

/// Some `v ∉ U` with `lk(v) ∩ X_U = A`, or `None`.
pub fn find_witness<X: ComplexView + ?Sized>(
    x: &X,
    challenge: &AmpleChallenge,
    search: WitnessSearch,
) -> Result<Option<Vertex>> {
    check_u(x, &challenge.u)?;
    check_exactness(x, challenge.u.len())?;
    let local = LocalComplex::build(x, &challenge.u)?;
    let target = local.mask_of(&challenge.a)?;
    scan_for(x, &local, target, search)
}

/// Exhaustively confirms that a reported counterexample has no witness.
pub fn recheck_counterexample<X: ComplexView + ?Sized>(x: &X, challenge: &AmpleChallenge) -> Result<bool> {
    Ok(find_witness(x, challenge, WitnessSearch::Exhaustive)?.is_none())
}

/// Lexicographic k-subsets of `0..n`.
struct Combinations {
    n: u64,
    cur: Vec<u64>,
    fresh: bool,
    done: bool,
}

impl Combinations {
    fn new(n: u64, k: usize) -> Self {
        Combinations { n, cur: (0..k as u64).collect(), fresh: true, done: k as u64 > n }
    }
}

impl Iterator for Combinations {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        if self.fresh {
            self.fresh = false;
            return Some(self.cur.clone());
        }
        let k = self.cur.len();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if self.cur[i] < self.n - (k - i) as u64 {
                self.cur[i] += 1;
                for j in i + 1..k {
                    self.cur[j] = self.cur[j - 1] + 1;
                }
                return Some(self.cur.clone());
            }
        }
        self.done = true;
        None
    }
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc.saturating_mul(n as u128 - i) / (i + 1);
    }
    acc
}

struct Outcome {
    challenges: u64,
    scans: u64,
    missing: Option<(Vec<Vertex>, u64, ExplicitComplex)>,
}

fn check_all_patterns<X: ComplexView + ?Sized>(x: &X, u: Vec<Vertex>) -> Result<Outcome> {
    let local = LocalComplex::build(x, &u)?;
    let needed = local.subcomplexes();
    let slot: HashMap<u64, usize> = needed.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let mut covered = vec![false; needed.len()];
    let mut remaining = needed.len();
    let mut scans = 0u64;
    for v in x.vertices() {
        if remaining == 0 {
            break;
        }
        if local.u.contains(&v) {
            continue;
        }
        scans += 1;
        if let Some(&i) = slot.get(&local.pattern(x, v)) {
            if !covered[i] {
                covered[i] = true;
                remaining -= 1;
            }
        }
    }
    let missing = covered.iter().position(|c| !c).map(|i| {
        let a = local.to_complex(needed[i]);
        (u.clone(), needed[i], a)
    });
    Ok(Outcome { challenges: needed.len() as u64, scans, missing })
}

/// Decides (exhaustive) or tries to refute (sampled) r-ampleness.
///
/// Exhaustive mode walks `U` by size, then lexicographically, in fixed chunks processed in
/// parallel; the first chunk holding a counterexample reports its least `(U, A)`, so the result
/// does not depend on the number of workers.
pub fn verify_ample<X: ComplexView + ?Sized>(x: &X, r: usize, mode: VerifyMode, budget: Budget) -> Result<AmpleReport> {
    let start = Instant::now();
    let n = x.vertex_count();
    if n == 0 {
        return input("the empty complex is never ample");
    }
    if r == 0 {
        return input("r must be at least 1");
    }
    if r > MAX_LOCAL_VERTICES {
        return Err(Error::Unsupported(format!("r > {MAX_LOCAL_VERTICES}")));
    }
    check_exactness(x, r)?;
    let mut report = AmpleReport { r, mode, verdict: Verdict::Ample, challenges: 0, witness_scans: 0, ms: 0 };
    match mode {
        VerifyMode::Exhaustive => {
            if n > budget.max_scan_vertices {
                return Err(Error::Budget { name: "exhaustive_vertices", limit: budget.max_scan_vertices as u128 });
            }
            let total_u: u128 = (0..=r as u64).map(|k| binomial(n, k)).sum();
            if total_u > budget.max_challenges {
                return Err(Error::Budget { name: "max_challenges", limit: budget.max_challenges });
            }
            // U = ∅ with A = ∅: any vertex is a witness.
            report.challenges = 1;
            'sizes: for k in 1..=r {
                let mut combos = Combinations::new(n, k);
                loop {
                    let chunk: Vec<Vec<Vertex>> =
                        combos.by_ref().take(CHUNK).map(|c| c.into_iter().map(|i| x.vertex_at(i)).collect()).collect();
                    if chunk.is_empty() {
                        break;
                    }
                    let outcomes: Vec<Outcome> =
                        chunk.into_par_iter().map(|u| check_all_patterns(x, u)).collect::<Result<_>>()?;
                    let mut first: Option<(Vec<Vertex>, u64, ExplicitComplex)> = None;
                    for o in outcomes {
                        report.challenges += o.challenges;
                        report.witness_scans += o.scans;
                        if first.is_none() {
                            first = o.missing;
                        }
                    }
                    if report.challenges as u128 > budget.max_challenges {
                        return Err(Error::Budget { name: "max_challenges", limit: budget.max_challenges });
                    }
                    if report.witness_scans as u128 > budget.max_witness_scans {
                        return Err(Error::Budget { name: "max_witness_scans", limit: budget.max_witness_scans });
                    }
                    if let Some((u, _, a)) = first {
                        report.verdict = Verdict::Counterexample(AmpleChallenge::new(u, a));
                        break 'sizes;
                    }
                }
            }
        }
        VerifyMode::Sampled { seed, trials } => {
            if trials as u128 > budget.max_challenges {
                return Err(Error::Budget { name: "max_challenges", limit: budget.max_challenges });
            }
            report.verdict = Verdict::NotRefuted;
            let mut t0 = 0u64;
            while t0 < trials {
                let t1 = (t0 + CHUNK as u64).min(trials);
                let found: Vec<Option<AmpleChallenge>> =
                    (t0..t1).into_par_iter().map(|t| sampled_trial(x, r, seed, t, &budget)).collect::<Result<_>>()?;
                report.challenges += t1 - t0;
                let least = found
                    .into_iter()
                    .flatten()
                    .min_by(|a, b| (a.u.len(), &a.u, a.a.all_simplices()).cmp(&(b.u.len(), &b.u, b.a.all_simplices())));
                if let Some(c) = least {
                    report.verdict = Verdict::Counterexample(c);
                    break;
                }
                t0 = t1;
            }
        }
    }
    report.ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// One random challenge; `Some` only when a full scan confirmed there is no witness.
fn sampled_trial<X: ComplexView + ?Sized>(
    x: &X,
    r: usize,
    seed: u64,
    t: u64,
    budget: &Budget,
) -> Result<Option<AmpleChallenge>> {
    let n = x.vertex_count();
    let mut rng = seed::stream(seed, "verify-challenge", t);
    let k = rng.gen_range(1..=(r as u64).min(n)) as usize;
    let mut u: Vec<Vertex> = Vec::with_capacity(k);
    while u.len() < k {
        let v = x.vertex_at(rng.gen_range(0..n));
        if !u.contains(&v) {
            u.push(v);
        }
    }
    u.sort_unstable();
    let local = LocalComplex::build(x, &u)?;
    let subs = local.subcomplexes();
    let target = subs[rng.gen_range(0..subs.len())];
    let sampled =
        WitnessSearch::Sampled { seed: seed::derive_seed(seed, "verify-witness", t), trials: budget.witness_samples };
    if scan_for(x, &local, target, sampled)?.is_some() {
        return Ok(None);
    }
    if n > budget.max_scan_vertices {
        return Err(Error::Budget { name: "sampled_fallback_scan", limit: budget.max_scan_vertices as u128 });
    }
    match scan_for(x, &local, target, WitnessSearch::Exhaustive)? {
        Some(_) => Ok(None),
        None => Ok(Some(AmpleChallenge::new(u, local.to_complex(target)))),
    }
}

/// A complex `A`, an induced subcomplex `B` and an embedding `f_B: B → X`.
#[derive(Clone, Debug)]
pub struct EmbeddingPair {
    pub a: ExplicitComplex,
    pub b: ExplicitComplex,
    pub f_b: BTreeMap<Vertex, Vertex>,
}

/// Extends `f_B` to an embedding of `A` by adding the vertices of `A − B` one at a time
/// (ascending), each as a witness for the cone it spans over the part already placed.
pub fn extend_embedding<X: ComplexView + ?Sized>(
    x: &X,
    pair: &EmbeddingPair,
    r: usize,
    search: WitnessSearch,
) -> Result<BTreeMap<Vertex, Vertex>> {
    let a = &pair.a;
    if a.vertex_set().len() > r + 1 {
        return input(format!("A has {} vertices, more than r + 1 = {}", a.vertex_set().len(), r + 1));
    }
    let bv = pair.b.vertex_set();
    if a.induced(bv)? != pair.b.clone().with_cap_of(a) {
        return input("B is not an induced subcomplex of A");
    }
    let mut image: Vec<Vertex> = Vec::new();
    for v in bv {
        match pair.f_b.get(v) {
            Some(&w) if x.has_vertex(w) => image.push(w),
            _ => return input(format!("f_B does not map {v} into X")),
        }
    }
    let mut sorted = image.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != image.len() {
        return input("f_B is not injective");
    }
    if !bv.is_empty() {
        check_exactness(x, bv.len() - 1)?;
        let local = LocalComplex::build(x, &sorted)?;
        let full: u64 = (1u64 << local.simplices.len()) - 1;
        let mapped = pair.b.all_simplices().iter().map(|s| map_simplex(s, &pair.f_b)).collect::<Vec<_>>();
        let bmask = local.mask_of(&ExplicitComplex::from_facets(sorted.clone(), &mapped, a.dim_cap())?)?;
        if bmask != full {
            return input("f_B is not an embedding onto an induced subcomplex");
        }
    }

    let mut f = pair.f_b.clone();
    let mut placed: Vec<Vertex> = bv.to_vec();
    for &new in a.vertex_set().iter().filter(|v| !bv.contains(v)) {
        let cone: Vec<Simplex> = a
            .all_simplices()
            .into_iter()
            .filter(|s| s.contains_vertex(new) && s.len() >= 2)
            .filter_map(|s| {
                let rest: Vec<Vertex> = s.vertices().iter().copied().filter(|&w| w != new).collect();
                rest.iter().all(|w| placed.contains(w)).then(|| Simplex::from_sorted(rest))
            })
            .collect();
        let u: Vec<Vertex> = placed.iter().map(|v| f[v]).collect();
        let mapped: Vec<Simplex> = cone.iter().map(|s| map_simplex(s, &f)).collect();
        let verts: Vec<Vertex> = mapped.iter().filter(|s| s.len() == 1).map(|s| s.vertices()[0]).collect();
        let target = ExplicitComplex::from_facets(verts, &mapped, u.len().max(1))?;
        let challenge = AmpleChallenge::new(u, target);
        match find_witness(x, &challenge, search)? {
            Some(v) => {
                f.insert(new, v);
                placed.push(new);
            }
            None => {
                return Err(Error::NoWitness {
                    u: challenge.u.clone(),
                    a_facets: challenge.a.facets().into_iter().map(Simplex::into_vec).collect(),
                })
            }
        }
    }
    Ok(f)
}

fn map_simplex(s: &Simplex, f: &BTreeMap<Vertex, Vertex>) -> Simplex {
    Simplex::new(s.vertices().iter().map(|v| f[v]).collect()).expect("injective map")
}

impl ExplicitComplex {
    fn with_cap_of(self, other: &ExplicitComplex) -> ExplicitComplex {
        let facets = self.facets();
        ExplicitComplex::from_facets(self.vertex_set().to_vec(), &facets, other.dim_cap()).expect("same vertices")
    }
}

/// `M'(k)`: simplicial complexes on `k` labeled vertices (the empty one included), counted by
/// depth-first enumeration of downward-closed families of nonempty subsets.
pub fn dedekind_reduced(k: usize) -> Result<BigUint> {
    if k > DEDEKIND_ENUM_LIMIT {
        return Err(Error::Budget { name: "dedekind_k", limit: DEDEKIND_ENUM_LIMIT as u128 });
    }
    let mut subsets: Vec<u64> = (1u64..1 << k).collect();
    subsets.sort_by_key(|m| (m.count_ones(), *m));
    let mut pos = vec![usize::MAX; 1 << k];
    for (i, &m) in subsets.iter().enumerate() {
        pos[m as usize] = i;
    }
    let facet_pos: Vec<Vec<usize>> = subsets
        .iter()
        .map(|&m| {
            if m.count_ones() == 1 {
                return Vec::new();
            }
            (0..k).filter(|i| m >> i & 1 == 1).map(|i| pos[(m & !(1 << i)) as usize]).collect()
        })
        .collect();

    fn count(i: usize, included: u64, facets: &[Vec<usize>]) -> u64 {
        let mut i = i;
        while i < facets.len() && !facets[i].iter().all(|&f| included >> f & 1 == 1) {
            i += 1;
        }
        if i == facets.len() {
            return 1;
        }
        count(i + 1, included, facets) + count(i + 1, included | 1 << i, facets)
    }

    Ok(BigUint::from(count(0, 0, &facet_pos)))
}

/// Lower bounds on the vertex count of an r-ample complex.
#[derive(Debug)]
pub struct VertexBound {
    pub r: usize,
    /// `M'(r) + r`, subject to the enumeration budget.
    pub exact: Result<BigUint>,
    /// `2^C(r, ⌊r/2⌋) + r`.
    pub binomial: BigUint,
}

pub fn min_vertex_bound(r: usize) -> VertexBound {
    let exact = dedekind_reduced(r).map(|m| m + r);
    let c = binomial(r as u64, r as u64 / 2);
    let binomial = (BigUint::one() << c.to_usize().unwrap_or(usize::MAX)) + r;
    VertexBound { r, exact, binomial }
}

/// What removing a family of simplexes from an r-ample complex still guarantees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resilience {
    pub r: usize,
    /// `|F| + dim(F)` of the antichain-reduced family.
    pub weight: usize,
    /// Least `k` with `weight < M'(k) + k`.
    pub k_min: usize,
    /// `r - k_min`, or `None` if `k_min > r`.
    pub level: Option<usize>,
    pub connected: bool,
    pub simply_connected: bool,
    pub two_connected: bool,
}

impl Resilience {
    pub fn to_json(&self) -> Value {
        json!({
            "r": self.r,
            "weight": self.weight,
            "k": self.k_min,
            "level": self.level,
            "connected": self.connected,
            "simply_connected": self.simply_connected,
            "two_connected": self.two_connected,
        })
    }
}

pub fn resilience_guarantee(r: usize, family: &RemovalFamily) -> Resilience {
    let reduced = family.antichain_reduce();
    let weight = reduced.weight();
    let w = BigUint::from(weight);
    let k_min =
        (0..DEDEKIND.len()).find(|&k| w < reduced_dedekind_table(k).unwrap() + k).expect("weights fit below M'(9) + 9");
    let level = r.checked_sub(k_min);
    let at_least = |l: usize| level.is_some_and(|lv| lv >= l);
    Resilience {
        r,
        weight,
        k_min,
        level,
        connected: at_least(2),
        simply_connected: at_least(4),
        two_connected: at_least(18),
    }
}
