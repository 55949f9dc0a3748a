//! Constructive topology: filling loops by discs, cone points, GF(2) Betti numbers and
//! triangulated 2-spheres.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use rand::Rng;
use serde_json::{json, Value};

use crate::ampleness::{find_witness, AmpleChallenge, LocalComplex, WitnessSearch};
use crate::error::{input, Error, Result};
use crate::seed;
use crate::simplex::{induced_of, ComplexView, ExplicitComplex, Vertex, SCAN_LIMIT};

/// A closed edge path with distinct vertices, `ℓ >= 3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialLoop(Vec<Vertex>);

impl SimplicialLoop {
    pub fn new<X: ComplexView + ?Sized>(x: &X, vertices: Vec<Vertex>) -> Result<Self> {
        let l = vertices.len();
        if l < 3 {
            return input("a loop needs at least 3 vertices");
        }
        let distinct: HashSet<&Vertex> = vertices.iter().collect();
        if distinct.len() != l {
            return input("loop vertices must be distinct");
        }
        for i in 0..l {
            let (a, b) = (vertices[i], vertices[(i + 1) % l]);
            if !x.contains(&[a.min(b), a.max(b)]) {
                return input(format!("{{{a}, {b}}} is not an edge"));
            }
        }
        Ok(SimplicialLoop(vertices))
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A random loop of length `len`, built as a self-avoiding walk closed back to its start.
pub fn random_loop<X: ComplexView + ?Sized, R: Rng>(
    x: &X,
    len: usize,
    rng: &mut R,
    max_tries: u64,
) -> Result<SimplicialLoop> {
    if len < 3 {
        return input("a loop needs at least 3 vertices");
    }
    let n = x.vertex_count();
    let edge = |a: Vertex, b: Vertex| x.contains(&[a.min(b), a.max(b)]);
    let mut tries = 0u64;
    let mut draw = |rng: &mut R, ok: &dyn Fn(Vertex) -> bool| -> Result<Vertex> {
        loop {
            tries += 1;
            if tries > max_tries {
                return Err(Error::Budget { name: "loop_tries", limit: max_tries as u128 });
            }
            let v = x.vertex_at(rng.gen_range(0..n));
            if ok(v) {
                return Ok(v);
            }
        }
    };
    let mut walk = vec![draw(rng, &|_| true)?];
    while walk.len() < len - 1 {
        let last = *walk.last().unwrap();
        let v = draw(rng, &|v| !walk.contains(&v) && edge(last, v))?;
        walk.push(v);
    }
    let (first, last) = (walk[0], *walk.last().unwrap());
    let v = draw(rng, &|v| !walk.contains(&v) && edge(last, v) && edge(first, v))?;
    walk.push(v);
    SimplicialLoop::new(x, walk)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConeMode {
    /// The cone vertex realizes the arc exactly as its link on the arc's vertex set.
    ExactLink,
    /// The cone vertex only has to span the arc's edges with triangles.
    Containment,
}

/// A triangulated disc (abstract ids: boundary `0..ℓ`, internal vertices negative) with a
/// simplicial map into the target complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscCertificate {
    pub boundary: Vec<Vertex>,
    pub triangles: Vec<[i64; 3]>,
    pub map: BTreeMap<i64, Vertex>,
}

impl DiscCertificate {
    pub fn internal_count(&self) -> usize {
        self.map.keys().filter(|&&k| k < 0).count()
    }

    pub fn to_json(&self) -> Value {
        let map: serde_json::Map<String, Value> = self.map.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
        json!({"boundary": self.boundary, "triangles": self.triangles, "map": map})
    }

    /// Whether the size bounds for loops filled with `r`-vertex arcs hold.
    pub fn within_bounds(&self, r: usize) -> bool {
        let l = self.boundary.len();
        let (i, t) = (self.internal_count(), self.triangles.len());
        let steps = (l.saturating_sub(3)).div_ceil(r - 3);
        let general = i <= steps && t <= steps * (r - 1) + 1;
        let single_cone = l <= r && i <= 1 && t <= l;
        general || single_cone
    }

    /// Checks that the abstract complex is a disc bounded by the loop and the map is simplicial.
    pub fn validate<X: ComplexView + ?Sized>(&self, x: &X) -> Result<()> {
        let bad = |m: String| Err(Error::Input(format!("invalid disc: {m}")));
        let l = self.boundary.len() as i64;
        if l < 3 || self.triangles.is_empty() {
            return bad("too small".into());
        }
        for k in 0..l {
            if self.map.get(&k) != Some(&self.boundary[k as usize]) {
                return bad(format!("boundary vertex {k} is not mapped to the loop"));
            }
        }
        if self.map.keys().any(|&k| k >= l) {
            return bad("unknown non-negative id".into());
        }
        let mut edges: HashMap<(i64, i64), usize> = HashMap::new();
        let mut used: BTreeSet<i64> = BTreeSet::new();
        let mut seen_tri: HashSet<[i64; 3]> = HashSet::new();
        for t in &self.triangles {
            let mut s = *t;
            s.sort_unstable();
            if s[0] == s[1] || s[1] == s[2] {
                return bad(format!("degenerate triangle {t:?}"));
            }
            if !seen_tri.insert(s) {
                return bad(format!("repeated triangle {t:?}"));
            }
            for &v in &s {
                if !self.map.contains_key(&v) {
                    return bad(format!("unmapped vertex {v}"));
                }
                used.insert(v);
            }
            for (a, b) in [(s[0], s[1]), (s[0], s[2]), (s[1], s[2])] {
                *edges.entry((a, b)).or_default() += 1;
            }
            let mut img: Vec<Vertex> = s.iter().map(|v| self.map[v]).collect();
            img.sort_unstable();
            if img[0] == img[1] || img[1] == img[2] || !x.contains(&img) {
                return bad(format!("image of {t:?} is not a triangle of the complex"));
            }
            for (a, b) in [(img[0], img[1]), (img[0], img[2]), (img[1], img[2])] {
                if !x.contains(&[a, b]) {
                    return bad(format!("image edge {{{a}, {b}}} missing"));
                }
            }
        }
        if used.len() != self.map.len() {
            return bad("isolated vertex in the disc".into());
        }
        let boundary_edges: HashSet<(i64, i64)> = (0..l).map(|k| (k.min((k + 1) % l), k.max((k + 1) % l))).collect();
        for be in &boundary_edges {
            if edges.get(be) != Some(&1) {
                return bad(format!("boundary edge {be:?} is not in exactly one triangle"));
            }
        }
        for (e, &c) in &edges {
            if !boundary_edges.contains(e) && c != 2 {
                return bad(format!("interior edge {e:?} is in {c} triangles"));
            }
        }
        let euler = used.len() as i64 - edges.len() as i64 + self.triangles.len() as i64;
        if euler != 1 {
            return bad(format!("Euler characteristic {euler}"));
        }
        // vertex links: cycles inside, paths on the boundary
        for &v in &used {
            let mut link: HashMap<i64, Vec<i64>> = HashMap::new();
            for t in self.triangles.iter().filter(|t| t.contains(&v)) {
                let others: Vec<i64> = t.iter().copied().filter(|&w| w != v).collect();
                link.entry(others[0]).or_default().push(others[1]);
                link.entry(others[1]).or_default().push(others[0]);
            }
            let ends = link.values().filter(|n| n.len() == 1).count();
            let want_ends = if v >= 0 { 2 } else { 0 };
            if ends != want_ends || link.values().any(|n| n.len() > 2) || !connected(&link) {
                return bad(format!("link of {v} is not a {}", if v >= 0 { "path" } else { "cycle" }));
            }
        }
        let mut adj: HashMap<i64, Vec<i64>> = HashMap::new();
        for &(a, b) in edges.keys() {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        if !connected(&adj) {
            return bad("not connected".into());
        }
        Ok(())
    }
}

fn connected(adj: &HashMap<i64, Vec<i64>>) -> bool {
    let Some(&start) = adj.keys().next() else { return true };
    let mut seen = HashSet::from([start]);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &w in &adj[&v] {
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen.len() == adj.len()
}

/// Search order for cone vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConeSearch {
    Exhaustive,
    Sampled { seed: u64, trials: u64 },
}

/// A vertex outside `avoid` coning off `path` (closed when `cyclic`), per `mode`.
fn find_cone<X: ComplexView + ?Sized>(
    x: &X,
    path: &[Vertex],
    cyclic: bool,
    avoid: &HashSet<Vertex>,
    mode: ConeMode,
    search: ConeSearch,
    step: u64,
) -> Result<Option<Vertex>> {
    let k = path.len();
    let edge_pairs: Vec<(Vertex, Vertex)> =
        (0..if cyclic { k } else { k - 1 }).map(|i| (path[i], path[(i + 1) % k])).collect();
    let exact = match mode {
        ConeMode::ExactLink => {
            let mut u = path.to_vec();
            u.sort_unstable();
            let local = LocalComplex::build(x, &u)?;
            let facets: Vec<crate::simplex::Simplex> =
                edge_pairs.iter().map(|&(a, b)| crate::simplex::Simplex::new(vec![a, b])).collect::<Result<_>>()?;
            let a = ExplicitComplex::from_facets(u.clone(), &facets, u.len())?;
            let target = local.mask_of(&a)?;
            Some((local, target))
        }
        ConeMode::Containment => None,
    };
    let ok = |v: Vertex| -> bool {
        if avoid.contains(&v) {
            return false;
        }
        match &exact {
            Some((local, target)) => local.pattern(x, v) == *target,
            None => {
                path.iter().all(|&a| x.contains(&[a.min(v), a.max(v)]))
                    && edge_pairs.iter().all(|&(a, b)| {
                        let mut t = [a, b, v];
                        t.sort_unstable();
                        x.contains(&t)
                    })
            }
        }
    };
    match search {
        ConeSearch::Exhaustive => {
            if x.vertex_count() > SCAN_LIMIT {
                return Err(Error::Budget { name: "cone_scan_vertices", limit: SCAN_LIMIT as u128 });
            }
            Ok(x.vertices().find(|&v| ok(v)))
        }
        ConeSearch::Sampled { seed, trials } => {
            let mut rng = seed::stream(seed, "cone", step);
            let n = x.vertex_count();
            Ok((0..trials).map(|_| x.vertex_at(rng.gen_range(0..n))).find(|&v| ok(v)))
        }
    }
}

/// Fills a loop by repeatedly coning off the arc of `r` vertices at the start of the working
/// loop, then coning the remaining loop of length `<= r`.
pub fn fill_loop<X: ComplexView + ?Sized>(
    x: &X,
    lp: &SimplicialLoop,
    r: usize,
    mode: ConeMode,
    search: ConeSearch,
) -> Result<DiscCertificate> {
    if r < 4 {
        return input("filling needs r >= 4");
    }
    if mode == ConeMode::ExactLink && x.exact_dim() < r {
        return input("exact-link filling needs membership exact up to dimension r");
    }
    let boundary = lp.vertices().to_vec();
    let mut map: BTreeMap<i64, Vertex> = boundary.iter().enumerate().map(|(i, &v)| (i as i64, v)).collect();
    let mut working: Vec<i64> = (0..boundary.len() as i64).collect();
    let mut triangles: Vec<[i64; 3]> = Vec::new();
    let mut next_id = -1i64;
    let mut step = 0u64;
    let stuck = |ids: &[i64], map: &BTreeMap<i64, Vertex>| {
        let arc: Vec<Vertex> = ids.iter().map(|i| map[i]).collect();
        Error::NoWitness { u: arc.clone(), a_facets: arc.windows(2).map(|w| w.to_vec()).collect() }
    };
    while working.len() > r {
        let arc: Vec<i64> = working[..r].to_vec();
        let images: Vec<Vertex> = arc.iter().map(|i| map[i]).collect();
        let avoid: HashSet<Vertex> = working.iter().map(|i| map[i]).collect();
        let v = find_cone(x, &images, false, &avoid, mode, search, step)?.ok_or_else(|| stuck(&arc, &map))?;
        step += 1;
        let id = next_id;
        next_id -= 1;
        map.insert(id, v);
        for w in arc.windows(2) {
            triangles.push([w[0], w[1], id]);
        }
        let mut rest = vec![arc[0], id];
        rest.extend_from_slice(&working[r - 1..]);
        working = rest;
    }
    let images: Vec<Vertex> = working.iter().map(|i| map[i]).collect();
    let mut sorted = images.clone();
    sorted.sort_unstable();
    if working.len() == 3 && x.contains(&sorted) {
        triangles.push([working[0], working[1], working[2]]);
    } else {
        let avoid: HashSet<Vertex> = images.iter().copied().collect();
        let v = find_cone(x, &images, true, &avoid, mode, search, step)?.ok_or_else(|| stuck(&working, &map))?;
        let id = next_id;
        map.insert(id, v);
        let k = working.len();
        for i in 0..k {
            triangles.push([working[i], working[(i + 1) % k], id]);
        }
    }
    let cert = DiscCertificate { boundary, triangles, map };
    cert.validate(x)?;
    Ok(cert)
}

/// A vertex `v ∉ W` whose link contains all of `X_W` exactly: `X_{W ∪ {v}} = v ∗ X_W`.
pub fn cone_point<X: ComplexView + ?Sized>(x: &X, w: &[Vertex], search: WitnessSearch) -> Result<Option<Vertex>> {
    let mut w = w.to_vec();
    w.sort_unstable();
    w.dedup();
    if w.is_empty() {
        return Ok((x.vertex_count() > 0).then(|| x.vertex_at(0)));
    }
    let xw = induced_of(x, &w)?;
    find_witness(x, &AmpleChallenge::new(w, xw), search)
}

/// Largest boundary matrix (rows times columns) reduced by [`betti_gf2`].
pub const BETTI_CELL_LIMIT: u128 = 1 << 34;

/// `b_0, .., b_{max_dim}` over GF(2).
pub fn betti_gf2(x: &ExplicitComplex, max_dim: usize) -> Result<Vec<usize>> {
    let f = |d: usize| x.simplices(d).len();
    let ranks: Vec<usize> = (0..=max_dim + 1).map(|d| boundary_rank(x, d)).collect::<Result<_>>()?;
    Ok((0..=max_dim).map(|d| f(d) - ranks[d] - ranks[d + 1]).collect())
}

/// Rank of `∂_d : C_d → C_{d-1}`.
fn boundary_rank(x: &ExplicitComplex, d: usize) -> Result<usize> {
    if d == 0 {
        return Ok(0);
    }
    let rows = x.simplices(d);
    let cols = x.simplices(d - 1);
    if rows.is_empty() {
        return Ok(0);
    }
    if rows.len() as u128 * cols.len() as u128 > BETTI_CELL_LIMIT {
        return Err(Error::Budget { name: "betti_cells", limit: BETTI_CELL_LIMIT });
    }
    let col_index: HashMap<&[Vertex], usize> = cols.iter().enumerate().map(|(i, s)| (s.vertices(), i)).collect();
    let words = cols.len().div_ceil(64);
    let mut pivots: HashMap<usize, Vec<u64>> = HashMap::new();
    for s in &rows {
        let mut row = vec![0u64; words];
        for face in s.facets() {
            let c = col_index[face.vertices()];
            row[c / 64] ^= 1 << (c % 64);
        }
        while let Some(lead) =
            row.iter().enumerate().find(|(_, w)| **w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
        {
            match pivots.get(&lead) {
                Some(p) => {
                    for (a, b) in row.iter_mut().zip(p) {
                        *a ^= b;
                    }
                }
                None => {
                    pivots.insert(lead, row);
                    break;
                }
            }
        }
    }
    Ok(pivots.len())
}

/// A triangulated 2-sphere given by its triangles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphereTriangulation {
    triangles: Vec<[u64; 3]>,
}

impl SphereTriangulation {
    pub fn new(triangles: Vec<[u64; 3]>) -> Result<Self> {
        let s = SphereTriangulation {
            triangles: triangles
                .into_iter()
                .map(|mut t| {
                    t.sort_unstable();
                    t
                })
                .collect(),
        };
        let edges = s.edge_counts();
        if let Some((e, c)) = edges.iter().find(|(_, &c)| c != 2) {
            return input(format!("edge {e:?} lies in {c} triangles"));
        }
        if s.triangles.iter().any(|t| t[0] == t[1] || t[1] == t[2]) {
            return input("degenerate triangle");
        }
        let mut adj: HashMap<i64, Vec<i64>> = HashMap::new();
        for &(a, b) in edges.keys() {
            adj.entry(a as i64).or_default().push(b as i64);
            adj.entry(b as i64).or_default().push(a as i64);
        }
        if !connected(&adj) {
            return input("not connected");
        }
        let chi = s.vertex_count() as i64 - edges.len() as i64 + s.triangles.len() as i64;
        if chi != 2 {
            return input(format!("V - E + F = {chi}"));
        }
        Ok(s)
    }

    pub fn triangles(&self) -> &[[u64; 3]] {
        &self.triangles
    }

    fn edge_counts(&self) -> BTreeMap<(u64, u64), usize> {
        let mut edges = BTreeMap::new();
        for t in &self.triangles {
            for (a, b) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
                *edges.entry((a, b)).or_default() += 1;
            }
        }
        edges
    }

    pub fn degrees(&self) -> BTreeMap<u64, usize> {
        let mut deg = BTreeMap::new();
        for &(a, b) in self.edge_counts().keys() {
            *deg.entry(a).or_default() += 1;
            *deg.entry(b).or_default() += 1;
        }
        deg
    }

    pub fn vertex_count(&self) -> usize {
        self.triangles.iter().flatten().collect::<BTreeSet<_>>().len()
    }

    pub fn tetrahedron() -> Self {
        Self::new(vec![[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]).unwrap()
    }

    pub fn octahedron() -> Self {
        Self::bipyramid(4)
    }

    /// Suspension of a `k`-gon: equator `0..k`, apexes `k` and `k + 1`.
    pub fn bipyramid(k: u64) -> Self {
        let mut t = Vec::new();
        for i in 0..k {
            let j = (i + 1) % k;
            t.push([i, j, k]);
            t.push([i, j, k + 1]);
        }
        Self::new(t).unwrap()
    }

    pub fn icosahedron() -> Self {
        // apexes 0 and 11, upper ring 1..=5, lower ring 6..=10
        let mut t = Vec::new();
        for i in 0..5u64 {
            let (u, u2) = (1 + i, 1 + (i + 1) % 5);
            let (l, l2) = (6 + i, 6 + (i + 1) % 5);
            t.push([0, u, u2]);
            t.push([u, u2, l]);
            t.push([u2, l, l2]);
            t.push([11, l, l2]);
        }
        Self::new(t).unwrap()
    }

    /// Splits vertex `v` along the chord between link positions `i < j`.
    fn split(&self, v: u64, i: usize, j: usize, fresh: u64) -> Self {
        let cycle = self.link_cycle(v);
        let arc: HashSet<(u64, u64)> = (i..j).map(|k| (cycle[k], cycle[k + 1])).collect();
        let mut out = Vec::with_capacity(self.triangles.len() + 2);
        for t in &self.triangles {
            if t.contains(&v) {
                let o: Vec<u64> = t.iter().copied().filter(|&w| w != v).collect();
                if arc.contains(&(o[0], o[1])) || arc.contains(&(o[1], o[0])) {
                    out.push([fresh, o[0], o[1]]);
                    continue;
                }
            }
            out.push(*t);
        }
        out.push([v, fresh, cycle[i]]);
        out.push([v, fresh, cycle[j]]);
        Self::new(out).expect("vertex splits preserve the sphere")
    }

    /// The link of `v` as a cyclic vertex sequence.
    fn link_cycle(&self, v: u64) -> Vec<u64> {
        let mut nbrs: HashMap<u64, Vec<u64>> = HashMap::new();
        for t in self.triangles.iter().filter(|t| t.contains(&v)) {
            let o: Vec<u64> = t.iter().copied().filter(|&w| w != v).collect();
            nbrs.entry(o[0]).or_default().push(o[1]);
            nbrs.entry(o[1]).or_default().push(o[0]);
        }
        let start = *nbrs.keys().min().unwrap();
        let mut cycle = vec![start];
        let mut prev = start;
        let mut cur = nbrs[&start][0];
        while cur != start {
            cycle.push(cur);
            let next = if nbrs[&cur][0] == prev { nbrs[&cur][1] } else { nbrs[&cur][0] };
            prev = cur;
            cur = next;
        }
        cycle
    }

    /// Grows a sphere from the tetrahedron by `splits` random vertex splits.
    pub fn random<R: Rng>(splits: usize, rng: &mut R) -> Self {
        let mut s = Self::tetrahedron();
        for k in 0..splits {
            let verts: Vec<u64> = s.degrees().into_keys().collect();
            let v = verts[rng.gen_range(0..verts.len())];
            let d = s.link_cycle(v).len();
            let i = rng.gen_range(0..d - 1);
            let j = rng.gen_range(i + 1..d);
            s = s.split(v, i, j, 4 + k as u64);
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphereReport {
    pub v: usize,
    pub e: usize,
    pub f: usize,
    /// `Σ_v (6 - d_v) = 12`, the curvature identity scaled by 6.
    pub curvature_ok: bool,
    pub f_is_2v_minus_4: bool,
    /// Least adjacent pair with both degrees at most 11, with the degrees.
    pub low_degree_pair: Option<(u64, u64, usize, usize)>,
}

impl SphereReport {
    pub fn passed(&self) -> bool {
        self.curvature_ok && self.f_is_2v_minus_4 && self.low_degree_pair.is_some()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "V": self.v, "E": self.e, "F": self.f,
            "curvature_ok": self.curvature_ok,
            "F_eq_2V_minus_4": self.f_is_2v_minus_4,
            "pair": self.low_degree_pair.map(|(a, b, da, db)| json!({"v": a, "w": b, "d_v": da, "d_w": db})),
        })
    }
}

pub fn sphere_audit(s: &SphereTriangulation) -> SphereReport {
    let deg = s.degrees();
    let edges = s.edge_counts();
    let v = deg.len();
    let curvature: i64 = deg.values().map(|&d| 6 - d as i64).sum();
    let low_degree_pair =
        edges.keys().find(|(a, b)| deg[a] <= 11 && deg[b] <= 11).map(|&(a, b)| (a, b, deg[&a], deg[&b]));
    SphereReport {
        v,
        e: edges.len(),
        f: s.triangles.len(),
        curvature_ok: curvature == 12,
        f_is_2v_minus_4: s.triangles.len() as i64 == 2 * v as i64 - 4,
        low_degree_pair,
    }
}
