//! The lower-measure random simplicial complex.
//!
//! Simplexes are added skeleton by skeleton: each external face of the current skeleton is kept
//! independently with probability `p_σ`. With every vertex kept, `σ` ends up in the complex iff
//! every face of `σ` of dimension at least one passed its own coin, which is what makes the
//! implicit [`HashComplexOracle`] agree with [`sample_explicit`] run on the same seed.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigUint;
use smallvec::SmallVec;

use crate::error::{input, Result};
use crate::seed::mix64;
use crate::simplex::{ComplexView, ExplicitComplex, Simplex, Vertex};

/// Probability of keeping an external face of dimension at least one.
#[derive(Clone, Debug, PartialEq)]
pub enum FaceProb {
    Constant(f64),
    /// Entry `d - 1` is used for dimension `d`; the last entry covers higher dimensions.
    ByDimension(Vec<f64>),
}

impl FaceProb {
    pub fn at_dim(&self, d: usize) -> f64 {
        match self {
            FaceProb::Constant(p) => *p,
            FaceProb::ByDimension(ps) => ps[(d.max(1) - 1).min(ps.len() - 1)],
        }
    }

    fn values(&self) -> Vec<f64> {
        match self {
            FaceProb::Constant(p) => vec![*p],
            FaceProb::ByDimension(ps) => ps.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbProfile {
    pub p_vertex: f64,
    pub face: FaceProb,
    /// Claimed medial bound `p`: every face probability lies in `[p, 1 - p]`.
    pub medial: Option<f64>,
    /// The `μ` this profile was derived from, if any.
    pub mu: Option<f64>,
}

impl ProbProfile {
    pub fn constant(p: f64) -> Result<Self> {
        ProbProfile { p_vertex: 1.0, face: FaceProb::Constant(p), medial: None, mu: None }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        let all = self.face.values();
        if all.is_empty() {
            return input("empty per-dimension probability list");
        }
        for p in all.iter().chain([&self.p_vertex]) {
            if !(0.0..=1.0).contains(p) {
                return input(format!("probability {p} outside [0, 1]"));
            }
        }
        if let Some(m) = self.medial {
            if !(0.0..=0.5).contains(&m) || all.iter().any(|&p| p < m || p > 1.0 - m) {
                return input(format!("face probabilities are not within [{m}, {}]", 1.0 - m));
            }
        }
        Ok(self)
    }

    pub fn p_of(&self, s: &[Vertex]) -> f64 {
        if s.len() == 1 {
            self.p_vertex
        } else {
            self.face.at_dim(s.len() - 1)
        }
    }
}

/// 64-bit hash of a simplex: the words `dim, v_0, .., v_d` (sorted ids, as little-endian u64)
/// are folded through the SplitMix64 finalizer starting from the seed.
pub fn simplex_hash(s: &[Vertex], seed: u64) -> u64 {
    let mut h = mix64(seed ^ 0x6c6f_7765_725f_6d73);
    h = mix64(h ^ (s.len() as u64 - 1));
    for &v in s {
        h = mix64(h ^ v);
    }
    h
}

/// `hash(σ, seed) < p · 2^64`.
pub fn coin(s: &[Vertex], seed: u64, p: f64) -> bool {
    if p >= 1.0 {
        return true;
    }
    if p <= 0.0 {
        return false;
    }
    let threshold = (p * 18_446_744_073_709_551_616.0) as u64;
    simplex_hash(s, seed) < threshold
}

/// Samples the complex on vertex ids `0..n`, truncated at `dim_cap`.
pub fn sample_explicit(n: u64, profile: &ProbProfile, dim_cap: usize, seed: u64) -> ExplicitComplex {
    let vertices: Vec<Vertex> = (0..n).filter(|&v| coin(&[v], seed, profile.p_vertex)).collect();
    let words = (n as usize).div_ceil(64);
    let mut adj = vec![vec![0u64; words]; n as usize];
    let mut all: Vec<Simplex> = Vec::new();
    let mut layer: Vec<Simplex> = Vec::new();
    if dim_cap >= 1 {
        for (i, &a) in vertices.iter().enumerate() {
            for &b in &vertices[i + 1..] {
                if coin(&[a, b], seed, profile.face.at_dim(1)) {
                    adj[a as usize][b as usize / 64] |= 1 << (b % 64);
                    adj[b as usize][a as usize / 64] |= 1 << (a % 64);
                    layer.push(Simplex::from_sorted(vec![a, b]));
                }
            }
        }
    }
    for d in 2..=dim_cap {
        if layer.is_empty() {
            break;
        }
        let present: HashSet<Simplex> = if d > 2 { layer.iter().cloned().collect() } else { HashSet::new() };
        let p = profile.face.at_dim(d);
        let mut next = Vec::new();
        for s in &layer {
            let verts = s.vertices();
            let top = *verts.last().unwrap();
            let mut common = adj[verts[0] as usize].clone();
            for &v in &verts[1..] {
                for (c, a) in common.iter_mut().zip(&adj[v as usize]) {
                    *c &= a;
                }
            }
            for (w, &word) in common.iter().enumerate() {
                let mut bits = word;
                while bits != 0 {
                    let v = (w * 64) as u64 + bits.trailing_zeros() as u64;
                    bits &= bits - 1;
                    if v <= top {
                        continue;
                    }
                    let mut cand: SmallVec<[Vertex; 8]> = SmallVec::from_slice(verts);
                    cand.push(v);
                    let external = d == 2
                        || (0..verts.len()).all(|skip| {
                            let face: SmallVec<[Vertex; 8]> =
                                cand.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &x)| x).collect();
                            present.contains(face.as_slice())
                        });
                    if external && coin(&cand, seed, p) {
                        next.push(Simplex::from_sorted(cand.to_vec()));
                    }
                }
            }
        }
        all.append(&mut layer);
        layer = next;
    }
    all.append(&mut layer);
    ExplicitComplex::from_closed_family(vertices, all, dim_cap)
}

/// The same random complex, answered per query from the coins; requires `p_vertex = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct HashComplexOracle {
    n: u64,
    face: FaceProb,
    dim_cap: usize,
    seed: u64,
}

impl HashComplexOracle {
    pub fn new(n: u64, profile: &ProbProfile, dim_cap: usize, seed: u64) -> Result<Self> {
        if profile.p_vertex != 1.0 {
            return input("the hash oracle needs p_vertex = 1");
        }
        if n == 0 {
            return input("n must be positive");
        }
        if dim_cap > 62 {
            return input("dim_cap above 62 is not supported");
        }
        Ok(HashComplexOracle { n, face: profile.face.clone(), dim_cap, seed })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

impl fmt::Display for HashComplexOracle {
    /// `hash:n=<n>,p=<p>,dim=<k>,seed=<seed>` for a constant profile.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.face {
            FaceProb::Constant(p) => write!(f, "hash:n={},p={},dim={},seed={}", self.n, p, self.dim_cap, self.seed),
            FaceProb::ByDimension(ps) => {
                let ps: Vec<String> = ps.iter().map(f64::to_string).collect();
                write!(f, "hash:n={},p={},dim={},seed={}", self.n, ps.join(":"), self.dim_cap, self.seed)
            }
        }
    }
}

impl ComplexView for HashComplexOracle {
    fn vertex_count(&self) -> u64 {
        self.n
    }

    fn vertex_at(&self, index: u64) -> Vertex {
        index
    }

    fn has_vertex(&self, v: Vertex) -> bool {
        v < self.n
    }

    fn contains(&self, s: &[Vertex]) -> bool {
        let k = s.len();
        if k == 0 || k > self.dim_cap + 1 || s.iter().any(|&v| v >= self.n) {
            return false;
        }
        let mut buf = Vec::with_capacity(k);
        (1u64..1 << k).filter(|m| m.count_ones() >= 2).all(|m| {
            buf.clear();
            buf.extend((0..k).filter(|i| m >> i & 1 == 1).map(|i| s[i]));
            coin(&buf, self.seed, self.face.at_dim(buf.len() - 1))
        })
    }

    fn dim_cap(&self) -> usize {
        self.dim_cap
    }
}

/// `ln(n^r · 2^{2^r} · (1 - p^{2^r})^{n-r})` and the same value exponentiated and clamped to `[0, 1]`.
pub fn bound_not_ample(n: f64, r: u32, p: f64) -> Result<(f64, f64)> {
    if !(p > 0.0 && p < 1.0) {
        return input("p must lie strictly between 0 and 1");
    }
    if n.is_nan() || n <= r as f64 {
        return input("n must exceed r");
    }
    let k = (1u64 << r.min(62)) as f64;
    let pk = (k * p.ln()).exp();
    let log = r as f64 * n.ln() + k * std::f64::consts::LN_2 + (n - r as f64) * (-pk).ln_1p();
    Ok((log, log.exp().min(1.0)))
}

/// `r · 2^r · 2^{2^r}`.
pub fn existence_threshold(r: u32) -> BigUint {
    BigUint::from(r) << (r as usize + (1usize << r))
}

/// Solves `p^{2^r} = (r ln n + μ) / n` for `p`.
pub fn p_from_mu(n: f64, r: u32, mu: f64) -> Result<f64> {
    let x = (r as f64 * n.ln() + mu) / n;
    if !(x > 0.0 && x < 1.0) {
        return input(format!("(r ln n + μ)/n = {x} is outside (0, 1)"));
    }
    Ok(x.powf(1.0 / 2f64.powi(r as i32)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::select;

    #[test]
    fn extreme_profiles() {
        let full = sample_explicit(6, &ProbProfile::constant(1.0).unwrap(), 2, 1);
        assert_eq!(full.f_vector(), vec![6, 15, 20]);
        let empty = sample_explicit(6, &ProbProfile::constant(0.0).unwrap(), 2, 1);
        assert_eq!(empty.f_vector(), vec![6]);
    }

    #[test]
    fn sampling_is_deterministic() {
        let prof = ProbProfile::constant(0.5).unwrap();
        let a = sample_explicit(40, &prof, 3, 99);
        let b = sample_explicit(40, &prof, 3, 99);
        assert_eq!(a.to_json(), b.to_json());
        assert_ne!(a.to_json(), sample_explicit(40, &prof, 3, 100).to_json());
    }

    #[test]
    fn profile_validation() {
        assert!(ProbProfile::constant(1.5).is_err());
        let medial = ProbProfile { medial: Some(0.3), ..ProbProfile::constant(0.5).unwrap() };
        assert!(medial.validated().is_ok());
        let bad = ProbProfile { medial: Some(0.3), ..ProbProfile::constant(0.8).unwrap() };
        assert!(bad.validated().is_err());
        let thin = ProbProfile { p_vertex: 0.5, ..ProbProfile::constant(0.5).unwrap() };
        assert!(HashComplexOracle::new(5, &thin, 2, 0).is_err());
    }

    #[test]
    fn oracle_matches_explicit_on_small_vertex_sets() {
        let prof = ProbProfile::constant(0.5).unwrap();
        for (n, cap, seed) in [(5u64, 4usize, 1u64), (9, 4, 2), (12, 3, 3), (12, 5, 4)] {
            let x = sample_explicit(n, &prof, cap, seed);
            let o = HashComplexOracle::new(n, &prof, cap, seed).unwrap();
            let all: Vec<Vertex> = (0..n).collect();
            for m in 1u64..1 << n {
                let s = select(&all, m);
                if s.len() <= cap + 1 {
                    assert_eq!(o.contains(&s), x.contains(&s), "n={n} {s:?}");
                }
            }
        }
    }

    #[test]
    fn lower_measure_frequencies_on_three_vertices() {
        // P(Y) = prod over faces of p times prod over external simplexes of (1 - p)
        let prof = ProbProfile::constant(0.5).unwrap();
        let all: Vec<Vec<Vertex>> = (1u64..8).map(|m| select(&[0, 1, 2], m).to_vec()).collect();
        let mut complexes: Vec<Vec<Vec<Vertex>>> = Vec::new();
        for fam in 0u32..1 << 7 {
            let members: Vec<Vec<Vertex>> = (0..7).filter(|i| fam >> i & 1 == 1).map(|i| all[i].clone()).collect();
            let closed = members.iter().all(|s| {
                s.len() == 1
                    || (0..s.len()).all(|k| {
                        let mut f = s.clone();
                        f.remove(k);
                        members.contains(&f)
                    })
            });
            if closed {
                complexes.push(members);
            }
        }
        assert_eq!(complexes.len(), 19);
        let prob = |y: &Vec<Vec<Vertex>>| -> f64 {
            let mut pr = 1.0;
            for s in &all {
                let external = !y.contains(s)
                    && (s.len() == 1
                        || (0..s.len()).all(|k| {
                            let mut f = s.clone();
                            f.remove(k);
                            y.contains(&f)
                        }));
                if y.contains(s) {
                    pr *= prof.p_of(s);
                } else if external {
                    pr *= 1.0 - prof.p_of(s);
                }
            }
            pr
        };
        let total: f64 = complexes.iter().map(prob).sum();
        assert!((total - 1.0).abs() < 1e-12);

        let trials = 100_000u64;
        let mut counts = vec![0u64; complexes.len()];
        for seed in 0..trials {
            let x = sample_explicit(3, &prof, 2, seed);
            let y: Vec<Vec<Vertex>> = all.iter().filter(|s| x.contains(s)).cloned().collect();
            counts[complexes.iter().position(|c| *c == y).unwrap()] += 1;
        }
        for (c, y) in counts.iter().zip(&complexes) {
            let p = prob(y);
            let se = (p * (1.0 - p) / trials as f64).sqrt();
            let freq = *c as f64 / trials as f64;
            assert!((freq - p).abs() <= 3.0 * se.max(1e-9), "{y:?}: {freq} vs {p}");
        }
    }

    #[test]
    fn oracle_agrees_on_all_triangles_n64() {
        let prof = ProbProfile::constant(0.5).unwrap();
        let x = sample_explicit(64, &prof, 2, 17);
        let o = HashComplexOracle::new(64, &prof, 2, 17).unwrap();
        for a in 0..64 {
            for b in a + 1..64 {
                assert_eq!(o.contains(&[a, b]), x.contains(&[a, b]));
                for c in b + 1..64 {
                    assert_eq!(o.contains(&[a, b, c]), x.contains(&[a, b, c]));
                }
            }
        }
    }

    #[test]
    fn oracle_is_downward_closed() {
        use rand::Rng;
        let prof = ProbProfile::constant(0.7).unwrap();
        let o = HashComplexOracle::new(20, &prof, 5, 8).unwrap();
        let mut rng = crate::seed::stream(0, "closure-test", 0);
        let mut hits = 0;
        for _ in 0..100_000 {
            let k = rng.gen_range(2..=6);
            let mut s: Vec<Vertex> = (0..k).map(|_| rng.gen_range(0..20)).collect();
            s.sort_unstable();
            s.dedup();
            if s.len() < 2 || !o.contains(&s) {
                continue;
            }
            hits += 1;
            for skip in 0..s.len() {
                let face: Vec<Vertex> = s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                assert!(o.contains(&face));
            }
        }
        assert!(hits > 1000);
    }

    #[test]
    fn coin_rate_is_close_to_p() {
        let hits = (0..100_000u64).filter(|&i| coin(&[i, i + 1], 5, 0.3)).count();
        assert!((hits as f64 / 1e5 - 0.3).abs() < 0.01);
    }

    #[test]
    fn thresholds() {
        assert_eq!(existence_threshold(5), BigUint::from(687_194_767_360u64));
        assert_eq!(existence_threshold(2), BigUint::from(128u32));
        assert_eq!(existence_threshold(1), BigUint::from(8u32));
    }

    #[test]
    fn bound_values() {
        let (log, v) = bound_not_ample(256.0, 2, 0.5).unwrap();
        assert!((v - 0.0796717063780396).abs() < 1e-12 * 0.08);
        assert!((log + 2.5298407577441714).abs() < 1e-12);
        let n0 = 687_194_767_360f64;
        assert!(bound_not_ample(n0, 5, 0.5).unwrap().1 < 1.0);
        let (log, v) = bound_not_ample(100.0, 2, 1.0 - 1e-9).unwrap();
        assert!(log < -1000.0 && v == 0.0);
        assert!(bound_not_ample(2.0, 2, 0.5).is_err());
    }

    #[test]
    fn bound_is_monotone_past_the_knee() {
        for r in 1..=4u32 {
            let knee = r as f64 * 2f64.powi(1 << r);
            let mut prev = f64::INFINITY;
            for i in 1..200 {
                let n = knee + 1.0 + (i * i) as f64 * knee / 10.0;
                let (log, _) = bound_not_ample(n, r, 0.5).unwrap();
                assert!(log < prev, "r={r} n={n}");
                prev = log;
            }
        }
    }

    #[test]
    fn mu_round_trip() {
        let (n, r, mu) = (1e6, 3, 10.0);
        let p = p_from_mu(n, r, mu).unwrap();
        let back = p.powi(8) * n - r as f64 * n.ln();
        assert!((back - mu).abs() <= 1e-12 * mu.abs());
        assert!((p_from_mu(1e6, 1, 0.0).unwrap() - 0.0037169221888498384).abs() < 1e-15);
        assert!(p_from_mu(1e6, 1, 1e6 - 1e6f64.ln()).is_err());
    }
}
