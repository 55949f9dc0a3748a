//! Finite simplicial complexes: canonical simplexes, stored downward-closed complexes and the
//! read-only [`ComplexView`] interface shared by explicit stores and implicit oracles.

use std::borrow::Borrow;
use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{input, Error, Result};

pub type Vertex = u64;

/// Scratch buffer for small simplexes built during membership queries.
pub type VertexBuf = SmallVec<[Vertex; 8]>;

/// Upper bound on the number of vertices scanned when a view has to be enumerated
/// (links and induced complexes of implicit oracles).
pub const SCAN_LIMIT: u64 = 1 << 24;

/// Most faces an explicit complex may be expanded into.
pub const FACE_LIMIT: u128 = 1 << 27;

/// A nonempty set of vertices stored as a strictly increasing array.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(Vec<Vertex>);

impl Simplex {
    pub fn new(mut vertices: Vec<Vertex>) -> Result<Self> {
        if vertices.is_empty() {
            return input("a simplex needs at least one vertex");
        }
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return input(format!("repeated vertex in simplex {vertices:?}"));
        }
        Ok(Simplex(vertices))
    }

    /// Caller guarantees `vertices` is nonempty and strictly increasing.
    pub(crate) fn from_sorted(vertices: Vec<Vertex>) -> Self {
        debug_assert!(!vertices.is_empty());
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Simplex(vertices)
    }

    pub fn vertex(v: Vertex) -> Self {
        Simplex(vec![v])
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

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// True if `self ⊆ other`.
    pub fn is_face_of(&self, other: &Simplex) -> bool {
        is_sorted_subset(&self.0, &other.0)
    }

    /// Codimension-one faces; empty for a vertex.
    pub fn facets(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = if self.0.len() >= 2 { self.0.len() } else { 0 };
        (0..n)
            .map(move |skip| Simplex(self.0.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect()))
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.0
    }
}

impl Borrow<[Vertex]> for Simplex {
    fn borrow(&self) -> &[Vertex] {
        &self.0
    }
}

/// `a ⊆ b` for strictly increasing slices.
pub fn is_sorted_subset(a: &[Vertex], b: &[Vertex]) -> bool {
    let mut it = b.iter();
    'outer: for x in a {
        for y in it.by_ref() {
            if y == x {
                continue 'outer;
            }
            if y > x {
                return false;
            }
        }
        return false;
    }
    true
}

/// `s ∪ {v}` for sorted `s` not containing `v`.
pub fn with_vertex(s: &[Vertex], v: Vertex) -> VertexBuf {
    let mut out = VertexBuf::with_capacity(s.len() + 1);
    let pos = s.partition_point(|&x| x < v);
    out.extend_from_slice(&s[..pos]);
    out.push(v);
    out.extend_from_slice(&s[pos..]);
    out
}

/// The sorted sub-slice of `vertices` selected by the bits of `mask`.
pub fn select(vertices: &[Vertex], mask: u64) -> VertexBuf {
    vertices.iter().enumerate().filter(|&(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect()
}

/// Read-only membership interface over a finite complex.
///
/// `contains` must be pure and downward closed. It receives a nonempty, strictly increasing
/// slice; for slices longer than `dim_cap() + 1` it returns `false`.
pub trait ComplexView: Sync {
    fn vertex_count(&self) -> u64;

    /// The `index`-th vertex in ascending id order.
    fn vertex_at(&self, index: u64) -> Vertex;

    fn has_vertex(&self, v: Vertex) -> bool;

    fn contains(&self, simplex: &[Vertex]) -> bool;

    fn dim_cap(&self) -> usize;

    /// Highest dimension at which `contains` is exact rather than truncated.
    fn exact_dim(&self) -> usize {
        self.dim_cap()
    }

    fn vertices(&self) -> Box<dyn Iterator<Item = Vertex> + '_> {
        Box::new((0..self.vertex_count()).map(move |i| self.vertex_at(i)))
    }
}

impl<T: ComplexView + ?Sized> ComplexView for &T {
    fn vertex_count(&self) -> u64 {
        (**self).vertex_count()
    }
    fn vertex_at(&self, index: u64) -> Vertex {
        (**self).vertex_at(index)
    }
    fn has_vertex(&self, v: Vertex) -> bool {
        (**self).has_vertex(v)
    }
    fn contains(&self, simplex: &[Vertex]) -> bool {
        (**self).contains(simplex)
    }
    fn dim_cap(&self) -> usize {
        (**self).dim_cap()
    }
    fn exact_dim(&self) -> usize {
        (**self).exact_dim()
    }
}

/// A stored, downward-closed complex truncated at `dim_cap`.
///
/// Every vertex is stored as a 0-simplex; `faces[d]` holds the d-simplexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitComplex {
    vertices: Vec<Vertex>,
    faces: Vec<HashSet<Simplex>>,
    dim_cap: usize,
}

impl ExplicitComplex {
    pub fn empty(dim_cap: usize) -> Self {
        ExplicitComplex { vertices: Vec::new(), faces: Vec::new(), dim_cap }
    }

    /// Smallest complex (truncated at `dim_cap`) containing every vertex and every facet.
    pub fn from_facets(
        vertex_set: impl IntoIterator<Item = Vertex>,
        facets: &[Simplex],
        dim_cap: usize,
    ) -> Result<Self> {
        let verts: BTreeSet<Vertex> = vertex_set.into_iter().collect();
        for f in facets {
            if let Some(v) = f.vertices().iter().find(|v| !verts.contains(v)) {
                return input(format!("facet {:?} uses unknown vertex {v}", f.vertices()));
            }
        }
        let mut faces: u128 = 0;
        for f in facets {
            let k = f.len() as u128;
            let mut c: u128 = 1;
            for i in 0..(dim_cap + 1).min(f.len()) as u128 {
                c = c * (k - i) / (i + 1);
                faces = faces.saturating_add(c);
            }
        }
        if faces > FACE_LIMIT {
            return Err(Error::Budget { name: "face_count", limit: FACE_LIMIT });
        }
        let mut x = ExplicitComplex::empty(dim_cap);
        for v in verts {
            x.insert_closed(&[v]);
        }
        for f in facets {
            x.insert_closed(f.vertices());
        }
        x.vertices.sort_unstable();
        Ok(x)
    }

    /// Inserts `s` and all its faces, cutting everything above `dim_cap`.
    /// Leaves `vertices` unsorted when new vertices appear; callers re-sort.
    fn insert_closed(&mut self, s: &[Vertex]) {
        let d = s.len() - 1;
        if d > self.dim_cap {
            for k in 1..=self.dim_cap + 1 {
                let mut idx: Vec<usize> = (0..k).collect();
                loop {
                    let face: Vec<Vertex> = idx.iter().map(|&i| s[i]).collect();
                    self.insert_closed(&face);
                    let Some(i) = (0..k).rev().find(|&i| idx[i] < s.len() - k + i) else { break };
                    idx[i] += 1;
                    for j in i + 1..k {
                        idx[j] = idx[j - 1] + 1;
                    }
                }
            }
            return;
        }
        if self.faces.len() > d && self.faces[d].contains(s) {
            return;
        }
        while self.faces.len() <= d {
            self.faces.push(HashSet::new());
        }
        let simplex = Simplex::from_sorted(s.to_vec());
        if d == 0 {
            self.vertices.push(s[0]);
        }
        for f in simplex.facets() {
            self.insert_closed(f.vertices());
        }
        self.faces[d].insert(simplex);
    }

    /// Builds from a family already known to be downward closed.
    pub(crate) fn from_closed_family(
        vertices: Vec<Vertex>,
        simplices: impl IntoIterator<Item = Simplex>,
        dim_cap: usize,
    ) -> Self {
        let mut x = ExplicitComplex::empty(dim_cap);
        x.faces.push(vertices.iter().map(|&v| Simplex::vertex(v)).collect());
        x.vertices = vertices;
        x.vertices.sort_unstable();
        for s in simplices {
            let d = s.dim();
            if d == 0 || d > dim_cap {
                continue;
            }
            while x.faces.len() <= d {
                x.faces.push(HashSet::new());
            }
            x.faces[d].insert(s);
        }
        x.trim();
        x
    }

    fn trim(&mut self) {
        while self.faces.last().is_some_and(|f| f.is_empty()) {
            self.faces.pop();
        }
    }

    pub fn vertex_set(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Top dimension of a stored simplex, `None` for the empty complex.
    pub fn dimension(&self) -> Option<usize> {
        self.faces.iter().rposition(|f| !f.is_empty())
    }

    pub fn contains_simplex(&self, s: &Simplex) -> bool {
        self.contains(s.vertices())
    }

    /// d-simplexes in lexicographic order.
    pub fn simplices(&self, d: usize) -> Vec<Simplex> {
        let mut out: Vec<Simplex> = self.faces.get(d).map(|f| f.iter().cloned().collect()).unwrap_or_default();
        out.sort_unstable();
        out
    }

    /// All simplexes ordered by dimension, then lexicographically.
    pub fn all_simplices(&self) -> Vec<Simplex> {
        (0..self.faces.len()).flat_map(|d| self.simplices(d)).collect()
    }

    pub fn num_simplices(&self) -> usize {
        self.faces.iter().map(HashSet::len).sum()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        let mut f: Vec<usize> = self.faces.iter().map(HashSet::len).collect();
        while f.last() == Some(&0) {
            f.pop();
        }
        f
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().iter().enumerate().map(|(d, &n)| if d % 2 == 0 { n as i64 } else { -(n as i64) }).sum()
    }

    /// Maximal simplexes (including isolated vertices), lexicographically sorted.
    pub fn facets(&self) -> Vec<Simplex> {
        let mut covered: HashSet<Simplex> = HashSet::new();
        for d in (1..self.faces.len()).rev() {
            for s in &self.faces[d] {
                covered.extend(s.facets());
            }
        }
        let mut out: Vec<Simplex> =
            self.faces.iter().flat_map(|f| f.iter()).filter(|s| !covered.contains(*s)).cloned().collect();
        out.sort_unstable();
        out
    }

    /// Scans every stored simplex for a missing face.
    pub fn is_downward_closed(&self) -> bool {
        let verts: HashSet<Vertex> = self.vertices.iter().copied().collect();
        if self.faces.first().map_or(0, HashSet::len) != verts.len() {
            return false;
        }
        self.faces.iter().enumerate().all(|(d, layer)| {
            layer.iter().all(|s| {
                s.dim() == d
                    && s.vertices().iter().all(|v| verts.contains(v))
                    && s.facets().all(|f| self.faces[d - 1].contains(&f))
            })
        })
    }

    /// `X_U`: the simplexes of `self` with all vertices in `u`.
    pub fn induced(&self, u: &[Vertex]) -> Result<Self> {
        let uset: HashSet<Vertex> = u.iter().copied().collect();
        if let Some(v) = u.iter().find(|v| !self.has_vertex(**v)) {
            return input(format!("vertex {v} is not in the complex"));
        }
        let keep = self
            .faces
            .iter()
            .skip(1)
            .flat_map(|f| f.iter())
            .filter(|s| s.vertices().iter().all(|v| uset.contains(v)))
            .cloned()
            .collect::<Vec<_>>();
        Ok(Self::from_closed_family(uset.into_iter().collect(), keep, self.dim_cap))
    }

    /// `lk(v)`, read off the stored simplexes containing `v`.
    pub fn link(&self, v: Vertex) -> Result<Self> {
        if !self.has_vertex(v) {
            return input(format!("vertex {v} is not in the complex"));
        }
        let mut verts = Vec::new();
        let mut simplices = Vec::new();
        for layer in self.faces.iter().skip(1) {
            for s in layer.iter().filter(|s| s.contains_vertex(v)) {
                let rest: Vec<Vertex> = s.vertices().iter().copied().filter(|&w| w != v).collect();
                if rest.len() == 1 {
                    verts.push(rest[0]);
                } else {
                    simplices.push(Simplex::from_sorted(rest));
                }
            }
        }
        Ok(Self::from_closed_family(verts, simplices, self.dim_cap.saturating_sub(1)))
    }

    /// `apex ∗ X`, with `dim_cap` raised by one so nothing is cut.
    pub fn cone(&self, apex: Vertex) -> Result<Self> {
        if self.has_vertex(apex) {
            return input(format!("cone apex {apex} is already a vertex"));
        }
        let apex_complex = ExplicitComplex::from_facets([apex], &[], 0)?;
        self.join(&apex_complex, self.dim_cap + 1)
    }

    /// `X ∗ Y` truncated at `dim_cap`.
    pub fn join(&self, other: &Self, dim_cap: usize) -> Result<Self> {
        if let Some(v) = other.vertices.iter().find(|v| self.has_vertex(**v)) {
            return input(format!("join operands share vertex {v}"));
        }
        let mine = self.all_simplices();
        let theirs = other.all_simplices();
        let mut simplices: Vec<Simplex> = mine.iter().chain(theirs.iter()).cloned().collect();
        for s in &mine {
            for t in &theirs {
                if s.len() + t.len() > dim_cap + 1 {
                    continue;
                }
                let mut v: Vec<Vertex> = s.vertices().iter().chain(t.vertices()).copied().collect();
                v.sort_unstable();
                simplices.push(Simplex::from_sorted(v));
            }
        }
        let verts = self.vertices.iter().chain(&other.vertices).copied().collect();
        Ok(Self::from_closed_family(verts, simplices, dim_cap))
    }

    /// Deletes every member of `family` together with all its cofaces.
    ///
    /// In strict mode a member that is not a simplex of `self` is an error; otherwise it is
    /// ignored.
    pub fn remove_family(&self, family: &RemovalFamily, strict: bool) -> Result<Self> {
        let mut members = Vec::new();
        for s in family.members() {
            if self.contains_simplex(s) {
                members.push(s);
            } else if strict {
                return input(format!("{:?} is not a simplex of the complex", s.vertices()));
            }
        }
        let hit = |s: &Simplex| members.iter().any(|m| m.is_face_of(s));
        let verts = self.vertices.iter().copied().filter(|&v| !hit(&Simplex::vertex(v))).collect();
        let keep = self.faces.iter().skip(1).flat_map(|f| f.iter()).filter(|s| !hit(s)).cloned().collect::<Vec<_>>();
        Ok(Self::from_closed_family(verts, keep, self.dim_cap))
    }

    /// d-simplexes on `V(X)` whose proper faces all lie in `X` but which are not in `X`.
    pub fn external_faces(&self, d: usize) -> Result<Vec<Simplex>> {
        if d == 0 {
            return input("external faces need d >= 1");
        }
        let mut out = Vec::new();
        let Some(base) = self.faces.get(d - 1) else {
            return Ok(out);
        };
        for tau in base {
            let top = *tau.vertices().last().unwrap();
            let start = self.vertices.partition_point(|&v| v <= top);
            for &w in &self.vertices[start..] {
                let sigma = with_vertex(tau.vertices(), w);
                if self.contains(&sigma) {
                    continue;
                }
                let faces_present = (0..tau.len()).all(|skip| {
                    let face: VertexBuf =
                        sigma.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                    face.len() <= 1 || self.contains(&face)
                });
                if faces_present {
                    out.push(Simplex::from_sorted(sigma.to_vec()));
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    pub fn to_file(&self) -> ComplexFile {
        let facets = self.facets().into_iter().filter(|s| s.dim() >= 1).map(Simplex::into_vec).collect();
        ComplexFile { version: 1, vertices: self.vertices.clone(), facets, dim_cap: self.dim_cap }
    }

    pub fn from_file(file: &ComplexFile) -> Result<Self> {
        if file.version != 1 {
            return Err(Error::Format(format!("unsupported complex file version {}", file.version)));
        }
        let facets = file.facets.iter().map(|f| Simplex::new(f.clone())).collect::<Result<Vec<_>>>()?;
        Self::from_facets(file.vertices.iter().copied(), &facets, file.dim_cap)
    }

    /// Canonical JSON: sorted vertices, lexicographically sorted facets of dimension >= 1.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("complex file serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: ComplexFile = serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
        Self::from_file(&file)
    }
}

impl ComplexView for ExplicitComplex {
    fn vertex_count(&self) -> u64 {
        self.vertices.len() as u64
    }

    fn vertex_at(&self, index: u64) -> Vertex {
        self.vertices[index as usize]
    }

    fn has_vertex(&self, v: Vertex) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    fn contains(&self, simplex: &[Vertex]) -> bool {
        match self.faces.get(simplex.len() - 1) {
            Some(layer) => layer.contains(simplex),
            None => false,
        }
    }

    fn dim_cap(&self) -> usize {
        self.dim_cap
    }

    /// Below the cap nothing was cut, so an explicit complex whose top dimension stays under
    /// `dim_cap` is exact everywhere.
    fn exact_dim(&self) -> usize {
        match self.dimension() {
            Some(d) if d >= self.dim_cap => self.dim_cap,
            _ => usize::MAX,
        }
    }
}

/// Version-tagged complex file: `{"version":1,"vertices":[..],"facets":[[..],..],"dim_cap":k}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexFile {
    pub version: u32,
    pub vertices: Vec<Vertex>,
    pub facets: Vec<Vec<Vertex>>,
    pub dim_cap: usize,
}

fn check_vertices<X: ComplexView + ?Sized>(x: &X, u: &[Vertex]) -> Result<()> {
    match u.iter().find(|v| !x.has_vertex(**v)) {
        Some(v) => input(format!("vertex {v} is not in the complex")),
        None => Ok(()),
    }
}

/// `X_U` for any view, grown from the vertices of `u` by single-vertex extensions.
pub fn induced_of<X: ComplexView + ?Sized>(x: &X, u: &[Vertex]) -> Result<ExplicitComplex> {
    check_vertices(x, u)?;
    let mut u: Vec<Vertex> = u.to_vec();
    u.sort_unstable();
    u.dedup();
    let cap = x.dim_cap();
    let mut simplices = Vec::new();
    let mut frontier: Vec<Vec<Vertex>> = u.iter().map(|&v| vec![v]).collect();
    while let Some(s) = frontier.pop() {
        if s.len() > cap {
            continue;
        }
        let top = *s.last().unwrap();
        for &w in u.iter().filter(|&&w| w > top) {
            let mut t = s.clone();
            t.push(w);
            if x.contains(&t) {
                simplices.push(Simplex::from_sorted(t.clone()));
                frontier.push(t);
            }
        }
    }
    Ok(ExplicitComplex::from_closed_family(u, simplices, cap))
}

/// `lk(v)` for any view with at most [`SCAN_LIMIT`] vertices.
pub fn link_of<X: ComplexView + ?Sized>(x: &X, v: Vertex) -> Result<ExplicitComplex> {
    check_vertices(x, &[v])?;
    if x.vertex_count() > SCAN_LIMIT {
        return Err(Error::Budget { name: "link_scan", limit: SCAN_LIMIT as u128 });
    }
    let neighbors: Vec<Vertex> = x.vertices().filter(|&w| w != v && x.contains(&with_vertex(&[w], v))).collect();
    let cap = x.dim_cap().saturating_sub(1);
    let mut simplices = Vec::new();
    let mut frontier: Vec<Vec<Vertex>> = neighbors.iter().map(|&w| vec![w]).collect();
    while let Some(s) = frontier.pop() {
        if s.len() > cap {
            continue;
        }
        let top = *s.last().unwrap();
        for &w in neighbors.iter().filter(|&&w| w > top) {
            let mut t = s.clone();
            t.push(w);
            if x.contains(&with_vertex(&t, v)) {
                simplices.push(Simplex::from_sorted(t.clone()));
                frontier.push(t);
            }
        }
    }
    Ok(ExplicitComplex::from_closed_family(neighbors, simplices, cap))
}

/// A family of simplexes to delete, with its size statistics.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RemovalFamily {
    simplices: BTreeSet<Simplex>,
}

impl RemovalFamily {
    pub fn new(simplices: impl IntoIterator<Item = Simplex>) -> Self {
        RemovalFamily { simplices: simplices.into_iter().collect() }
    }

    pub fn from_lists(lists: &[Vec<Vertex>]) -> Result<Self> {
        Ok(Self::new(lists.iter().map(|l| Simplex::new(l.clone())).collect::<Result<Vec<_>>>()?))
    }

    pub fn members(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter()
    }

    /// `|F|`
    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// `dim(F) = Σ dim σ`
    pub fn total_dim(&self) -> usize {
        self.simplices.iter().map(Simplex::dim).sum()
    }

    /// `a_i`: number of i-dimensional members.
    pub fn per_dim_counts(&self) -> Vec<usize> {
        let mut counts = Vec::new();
        for s in &self.simplices {
            if counts.len() <= s.dim() {
                counts.resize(s.dim() + 1, 0);
            }
            counts[s.dim()] += 1;
        }
        counts
    }

    /// `|F| + dim(F) = a_0 + 2a_1 + 3a_2 + …`
    pub fn weight(&self) -> usize {
        self.len() + self.total_dim()
    }

    /// Drops every member that has a proper face in the family.
    pub fn antichain_reduce(&self) -> Self {
        let keep =
            self.simplices.iter().filter(|s| !self.simplices.iter().any(|t| t != *s && t.is_face_of(s))).cloned();
        Self::new(keep)
    }

    pub fn is_antichain(&self) -> bool {
        self.simplices.iter().all(|s| !self.simplices.iter().any(|t| t != s && t.is_face_of(s)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[Vertex]) -> Simplex {
        Simplex::new(v.to_vec()).unwrap()
    }

    fn triangle() -> ExplicitComplex {
        ExplicitComplex::from_facets([1, 2, 3], &[s(&[1, 2, 3])], 3).unwrap()
    }

    fn cycle4() -> ExplicitComplex {
        let edges = [s(&[0, 1]), s(&[1, 2]), s(&[2, 3]), s(&[0, 3])];
        ExplicitComplex::from_facets(0..4, &edges, 3).unwrap()
    }

    #[test]
    fn large_facet_truncates_quickly() {
        let big = s(&(0..40).collect::<Vec<_>>());
        let x = ExplicitComplex::from_facets(0..40, std::slice::from_ref(&big), 2).unwrap();
        assert_eq!(x.f_vector(), vec![40, 780, 9880]);
        let huge = s(&(0..2000).collect::<Vec<_>>());
        assert!(matches!(
            ExplicitComplex::from_facets(0..2000, &[huge], 4),
            Err(Error::Budget { name: "face_count", .. })
        ));
    }

    #[test]
    fn simplex_rejects_bad_input() {
        assert!(Simplex::new(vec![]).is_err());
        assert!(Simplex::new(vec![2, 1, 2]).is_err());
        assert_eq!(s(&[3, 1, 2]).vertices(), &[1, 2, 3]);
        assert_eq!(s(&[3, 1, 2]).dim(), 2);
    }

    #[test]
    fn closure_of_triangle() {
        let x = triangle();
        assert_eq!(x.num_simplices(), 7);
        assert_eq!(x.f_vector(), vec![3, 3, 1]);
        assert_eq!(x.euler_characteristic(), 1);
        assert!(x.is_downward_closed());
    }

    #[test]
    fn vertices_only() {
        let x = ExplicitComplex::from_facets([1, 2, 3, 4], &[], 2).unwrap();
        assert_eq!(x.num_simplices(), 4);
    }

    #[test]
    fn unknown_vertex_is_rejected() {
        assert!(ExplicitComplex::from_facets([1, 2], &[s(&[1, 5])], 2).is_err());
    }

    #[test]
    fn truncation_is_silent() {
        let x = ExplicitComplex::from_facets(0..4, &[s(&[0, 1, 2, 3])], 1).unwrap();
        assert_eq!(x.f_vector(), vec![4, 6]);
        assert_eq!(x.exact_dim(), 1);
        assert_eq!(triangle().exact_dim(), usize::MAX);
    }

    #[test]
    fn induced_and_link_on_triangle() {
        let x = triangle();
        let e = x.induced(&[1, 2]).unwrap();
        assert_eq!(e.f_vector(), vec![2, 1]);
        assert!(x.induced(&[1, 9]).is_err());
        let lk = x.link(1).unwrap();
        assert_eq!(lk.vertex_set(), &[2, 3]);
        assert_eq!(lk.simplices(1), vec![s(&[2, 3])]);
        assert_eq!(link_of(&x, 1).unwrap(), lk);
        assert!(x.link(7).is_err());
    }

    #[test]
    fn link_in_four_cycle() {
        let lk = cycle4().link(0).unwrap();
        assert_eq!(lk.vertex_set(), &[1, 3]);
        assert_eq!(lk.f_vector(), vec![2]);
    }

    #[test]
    fn cones_and_joins() {
        let two = ExplicitComplex::from_facets([1, 2], &[], 1).unwrap();
        let path = two.cone(0).unwrap();
        assert_eq!(path.f_vector(), vec![3, 2]);
        let edge = ExplicitComplex::from_facets([1, 2], &[s(&[1, 2])], 1).unwrap();
        let tri = edge.cone(0).unwrap();
        assert_eq!(tri.f_vector(), vec![3, 3, 1]);
        assert!(edge.cone(1).is_err());

        let e1 = ExplicitComplex::from_facets([0, 1], &[s(&[0, 1])], 1).unwrap();
        let e2 = ExplicitComplex::from_facets([2, 3], &[s(&[2, 3])], 1).unwrap();
        let tet = e1.join(&e2, 3).unwrap();
        assert_eq!(tet.f_vector(), vec![4, 6, 4, 1]);
        let capped = e1.join(&e2, 2).unwrap();
        assert_eq!(capped.f_vector(), vec![4, 6, 4]);
        assert!(e1.join(&e1, 3).is_err());
    }

    #[test]
    fn remove_family_examples() {
        let x = triangle();
        let y = x.remove_family(&RemovalFamily::new([s(&[1, 2])]), true).unwrap();
        assert_eq!(y.vertex_set(), &[1, 2, 3]);
        assert_eq!(y.simplices(1), vec![s(&[1, 3]), s(&[2, 3])]);
        assert!(y.simplices(2).is_empty());

        let z = x.remove_family(&RemovalFamily::new([s(&[1])]), true).unwrap();
        assert_eq!(z.vertex_set(), &[2, 3]);
        assert_eq!(z.f_vector(), vec![2, 1]);

        let missing = RemovalFamily::new([s(&[7])]);
        assert!(x.remove_family(&missing, true).is_err());
        assert_eq!(x.remove_family(&missing, false).unwrap(), x);
    }

    #[test]
    fn antichain_reduction() {
        let f = RemovalFamily::new([s(&[1, 2]), s(&[1, 2, 3])]);
        assert_eq!(f.antichain_reduce(), RemovalFamily::new([s(&[1, 2])]));
        let g = RemovalFamily::new([s(&[1]), s(&[1, 2]), s(&[2, 3])]);
        assert_eq!(g.antichain_reduce(), RemovalFamily::new([s(&[1]), s(&[2, 3])]));
        let h = RemovalFamily::new([s(&[1]), s(&[2, 3])]);
        assert_eq!(h.antichain_reduce(), h);
        assert!(h.is_antichain());
        assert_eq!(g.per_dim_counts(), vec![1, 2]);
        assert_eq!(g.weight(), 3 + 2);
    }

    #[test]
    fn external_faces_examples() {
        assert!(cycle4().external_faces(2).unwrap().is_empty());
        let hollow = ExplicitComplex::from_facets([1, 2, 3], &[s(&[1, 2]), s(&[2, 3]), s(&[1, 3])], 2).unwrap();
        assert_eq!(hollow.external_faces(2).unwrap(), vec![s(&[1, 2, 3])]);
        let two = ExplicitComplex::from_facets([1, 2], &[], 1).unwrap();
        assert_eq!(two.external_faces(1).unwrap(), vec![s(&[1, 2])]);
        assert!(two.external_faces(0).is_err());
    }

    #[test]
    fn octahedron_euler() {
        let mut tris = Vec::new();
        for &a in &[0, 1] {
            for &b in &[2, 3] {
                for &c in &[4, 5] {
                    tris.push(s(&[a, b, c]));
                }
            }
        }
        let x = ExplicitComplex::from_facets(0..6, &tris, 2).unwrap();
        assert_eq!(x.f_vector(), vec![6, 12, 8]);
        assert_eq!(x.euler_characteristic(), 2);
    }

    #[test]
    fn json_is_canonical() {
        let x = ExplicitComplex::from_facets([5, 1, 3, 9], &[s(&[3, 1]), s(&[5, 3, 1])], 2).unwrap();
        let j = x.to_json();
        assert_eq!(j, r#"{"version":1,"vertices":[1,3,5,9],"facets":[[1,3,5]],"dim_cap":2}"#);
        let y = ExplicitComplex::from_json(&j).unwrap();
        assert_eq!(x, y);
        assert_eq!(y.to_json(), j);
        assert!(ExplicitComplex::from_json(r#"{"version":2,"vertices":[],"facets":[],"dim_cap":1}"#).is_err());
    }

    #[test]
    fn subset_helpers() {
        assert!(is_sorted_subset(&[1, 3], &[1, 2, 3]));
        assert!(!is_sorted_subset(&[1, 4], &[1, 2, 3]));
        assert!(is_sorted_subset(&[], &[1]));
        assert_eq!(with_vertex(&[1, 5], 3).as_slice(), &[1, 3, 5]);
        assert_eq!(select(&[4, 6, 8], 0b101).as_slice(), &[4, 8]);
    }
}
