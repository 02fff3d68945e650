//! Locally effective simplicial sets.
//!
//! A simplicial set is given by an oracle for faces of nondegenerate
//! simplices plus an optional basis enumeration per dimension.  Degenerate
//! simplices are handled once and for all through the canonical form of the
//! Eilenberg-Zilber lemma: every simplex is a unique iterated degeneracy
//! `s_{j_1}···s_{j_k} x` of a nondegenerate `x` with `j_1 > ··· > j_k`.  All
//! derived operators (faces and degeneracies of arbitrary simplices,
//! application of monotone maps) reduce to the oracle through the simplicial
//! identities.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;

use crate::chain::{Chain, ChainMap, Complex, ComplexOps, Gen};

mod ez;
mod product;

pub use ez::ez_reduction;
pub(crate) use ez::ez_reduction_onto;
pub use product::{cone, cylinder, product};
pub(crate) use product::{canonical_pair, pair_core, pair_parts};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SimplicialError {
    #[error("facet {0:?} is malformed: {1}")]
    MalformedFacet(Vec<usize>, &'static str),
}

/// A simplex in canonical form: a strictly decreasing degeneracy word
/// applied to a nondegenerate core.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex {
    word: Vec<usize>,
    core_dim: i64,
    core: Gen,
}

impl std::fmt::Debug for Simplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for j in &self.word {
            write!(f, "s{j} ")?;
        }
        write!(f, "{:?}", self.core)
    }
}

impl Simplex {
    pub fn nondegenerate(core_dim: i64, core: Gen) -> Simplex {
        Simplex { word: Vec::new(), core_dim, core }
    }

    /// The fully degenerate `dim`-simplex on a vertex.
    pub fn collapsed_vertex(core: Gen, dim: i64) -> Simplex {
        Simplex {
            word: (0..dim as usize).rev().collect(),
            core_dim: 0,
            core,
        }
    }

    pub fn dim(&self) -> i64 {
        self.core_dim + self.word.len() as i64
    }

    pub fn core(&self) -> &Gen {
        &self.core
    }

    pub fn core_dim(&self) -> i64 {
        self.core_dim
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.word.is_empty()
    }

    /// Applies `s_j`, restoring the canonical decreasing word via
    /// `s_i s_j = s_{j+1} s_i` for `i ≤ j`.
    pub fn degenerate(&self, j: usize) -> Simplex {
        debug_assert!(j as i64 <= self.dim());
        let mut word = Vec::with_capacity(self.word.len() + 1);
        let mut rest = None;
        for (idx, &e) in self.word.iter().enumerate() {
            if j > e {
                rest = Some(idx);
                break;
            }
            word.push(e + 1);
        }
        word.push(j);
        if let Some(idx) = rest {
            word.extend_from_slice(&self.word[idx..]);
        }
        Simplex { word, core_dim: self.core_dim, core: self.core.clone() }
    }

    /// Applies a whole degeneracy index set, smallest first.
    pub fn degenerate_by_set(&self, set: &[usize]) -> Simplex {
        let mut out = self.clone();
        for &j in set {
            out = out.degenerate(j);
        }
        out
    }

    /// The weakly monotone vertex-position expansion: entry `t` is the core
    /// position seen at position `t`, with repeats at the word indices.
    pub fn position_map(&self) -> Vec<usize> {
        let mut out: Vec<usize> = (0..=self.core_dim as usize).collect();
        for &j in self.word.iter().rev() {
            out.insert(j, out[j]);
        }
        out
    }
}

/// Face/basis oracle for the nondegenerate simplices of a simplicial set.
/// `face` may return a degenerate simplex (in canonical form); `basis`
/// returns `None` when a dimension is not enumerable.
pub trait SimplicialObject: Send + Sync {
    fn face(&self, dim: i64, core: &Gen, i: usize) -> Simplex;
    fn basis(&self, dim: i64) -> Option<Vec<Gen>>;
    fn dimension_bound(&self) -> i64;
}

struct SetInner {
    ops: Box<dyn SimplicialObject>,
    face_cache: Mutex<HashMap<(i64, Gen, usize), Simplex>>,
}

/// Shared handle to a simplicial set.  Clones refer to the same object and
/// share the face cache.
#[derive(Clone)]
pub struct SimplicialSet {
    inner: Arc<SetInner>,
}

impl SimplicialSet {
    pub fn new(ops: impl SimplicialObject + 'static) -> SimplicialSet {
        SimplicialSet {
            inner: Arc::new(SetInner {
                ops: Box::new(ops),
                face_cache: Mutex::new(HashMap::new()),
            }),
        }
    }

    pub fn same_as(&self, other: &SimplicialSet) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }

    pub fn dimension_bound(&self) -> i64 {
        self.inner.ops.dimension_bound()
    }

    pub fn basis(&self, dim: i64) -> Option<Vec<Gen>> {
        if dim < 0 {
            return Some(Vec::new());
        }
        self.inner.ops.basis(dim)
    }

    /// Face of a nondegenerate simplex, memoized.
    pub fn face_core(&self, dim: i64, core: &Gen, i: usize) -> Simplex {
        debug_assert!(dim >= 1 && (i as i64) <= dim);
        let key = (dim, core.clone(), i);
        if let Some(hit) = self.inner.face_cache.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let out = self.inner.ops.face(dim, core, i);
        debug_assert_eq!(out.dim(), dim - 1);
        self.inner
            .face_cache
            .lock()
            .unwrap()
            .insert(key, out.clone());
        out
    }

    /// Face of an arbitrary simplex: `∂_i` is pushed through the degeneracy
    /// word with `∂_i s_j = s_{j-1} ∂_i` (i < j), `= id` (i = j, j+1),
    /// `= s_j ∂_{i-1}` (i > j+1).
    pub fn face(&self, s: &Simplex, i: usize) -> Simplex {
        debug_assert!(s.dim() >= 1 && (i as i64) <= s.dim());
        let mut out: Vec<usize> = Vec::with_capacity(s.word.len());
        let mut fi = i;
        for (pos, &j) in s.word.iter().enumerate() {
            if fi < j {
                out.push(j - 1);
            } else if fi == j || fi == j + 1 {
                out.extend_from_slice(&s.word[pos + 1..]);
                return Simplex { word: out, core_dim: s.core_dim, core: s.core.clone() };
            } else {
                out.push(j);
                fi -= 1;
            }
        }
        let mut res = self.face_core(s.core_dim, &s.core, fi);
        for &j in out.iter().rev() {
            res = res.degenerate(j);
        }
        res
    }

    /// Applies a weakly monotone map `[m] → [dim]` contravariantly: faces at
    /// the missing values (largest first), then degeneracies at the repeat
    /// positions (smallest first).
    pub fn apply_operator(&self, s: &Simplex, op: &[usize]) -> Simplex {
        let n = s.dim();
        debug_assert!(!op.is_empty());
        debug_assert!(op.windows(2).all(|w| w[0] <= w[1]));
        debug_assert!((*op.last().unwrap() as i64) <= n);
        let mut cur = s.clone();
        for v in (0..=n as usize).rev() {
            if !op.contains(&v) {
                cur = self.face(&cur, v);
            }
        }
        for j in 0..op.len() - 1 {
            if op[j] == op[j + 1] {
                cur = cur.degenerate(j);
            }
        }
        cur
    }

    /// Normalized chain complex: generators are the nondegenerate simplices,
    /// the differential is the alternating face sum with degenerate faces
    /// dropped.
    pub fn normalized_chains(&self) -> Complex {
        Complex::new(SimplicialChains { set: self.clone() })
    }
}

struct SimplicialChains {
    set: SimplicialSet,
}

impl ComplexOps for SimplicialChains {
    fn d(&self, degree: i64, gen: &Gen) -> Chain {
        let mut out = Chain::zero(degree - 1);
        if degree == 0 {
            return out;
        }
        let mut sign = BigInt::from(1);
        for i in 0..=degree as usize {
            let face = self.set.face_core(degree, gen, i);
            if face.is_nondegenerate() {
                out.add_term(face.core, sign.clone());
            }
            sign = -sign;
        }
        out
    }

    fn basis(&self, degree: i64) -> Option<Vec<Gen>> {
        self.set.basis(degree)
    }

    fn degree_bound(&self) -> i64 {
        self.set.dimension_bound()
    }
}

pub fn normalized_chains(set: &SimplicialSet) -> Complex {
    set.normalized_chains()
}

struct MapInner {
    source: SimplicialSet,
    target: SimplicialSet,
    on_core: Box<dyn Fn(i64, &Gen) -> Simplex + Send + Sync>,
    cache: Mutex<HashMap<(i64, Gen), Simplex>>,
}

/// A simplicial map, defined by its values on nondegenerate simplices and
/// extended to degenerate ones by commuting with degeneracies.
#[derive(Clone)]
pub struct SimplicialMap {
    inner: Arc<MapInner>,
}

impl SimplicialMap {
    pub fn new(
        source: SimplicialSet,
        target: SimplicialSet,
        on_core: impl Fn(i64, &Gen) -> Simplex + Send + Sync + 'static,
    ) -> SimplicialMap {
        SimplicialMap {
            inner: Arc::new(MapInner {
                source,
                target,
                on_core: Box::new(on_core),
                cache: Mutex::new(HashMap::new()),
            }),
        }
    }

    pub fn identity(set: &SimplicialSet) -> SimplicialMap {
        SimplicialMap::new(set.clone(), set.clone(), |dim, core| {
            Simplex::nondegenerate(dim, core.clone())
        })
    }

    /// The constant map onto a vertex of the target.
    pub fn constant(source: SimplicialSet, target: SimplicialSet, vertex: Gen) -> SimplicialMap {
        SimplicialMap::new(source, target, move |dim, _| {
            Simplex::collapsed_vertex(vertex.clone(), dim)
        })
    }

    pub fn source(&self) -> &SimplicialSet {
        &self.inner.source
    }

    pub fn target(&self) -> &SimplicialSet {
        &self.inner.target
    }

    pub fn apply_core(&self, dim: i64, core: &Gen) -> Simplex {
        let key = (dim, core.clone());
        if let Some(hit) = self.inner.cache.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let out = (self.inner.on_core)(dim, core);
        debug_assert_eq!(out.dim(), dim, "simplicial maps preserve dimension");
        self.inner.cache.lock().unwrap().insert(key, out.clone());
        out
    }

    pub fn apply(&self, s: &Simplex) -> Simplex {
        let mut out = self.apply_core(s.core_dim, &s.core);
        for &j in s.word.iter().rev() {
            out = out.degenerate(j);
        }
        out
    }

    /// `self` followed by `g`.
    pub fn then(&self, g: &SimplicialMap) -> SimplicialMap {
        debug_assert!(self.target().same_as(g.source()));
        let first = self.clone();
        let second = g.clone();
        SimplicialMap::new(
            self.source().clone(),
            g.target().clone(),
            move |dim, core| second.apply(&first.apply_core(dim, core)),
        )
    }

    /// The induced map on normalized chains; terms whose image is
    /// degenerate vanish.  The handles must belong to the source and target
    /// sets.
    pub fn chain_map(&self, source_chains: &Complex, target_chains: &Complex) -> ChainMap {
        let me = self.clone();
        ChainMap::new(
            source_chains.clone(),
            target_chains.clone(),
            0,
            move |deg, g| {
                let img = me.apply_core(deg, g);
                if img.is_nondegenerate() {
                    Chain::gen(deg, img.core)
                } else {
                    Chain::zero(deg)
                }
            },
        )
    }

    /// Checks commutation with all faces of the given nondegenerate simplex.
    pub fn commutes_with_faces(&self, dim: i64, core: &Gen) -> bool {
        if dim == 0 {
            return true;
        }
        let s = Simplex::nondegenerate(dim, core.clone());
        (0..=dim as usize).all(|i| {
            self.apply(&self.source().face(&s, i)) == self.target().face(&self.apply(&s), i)
        })
    }
}

pub(crate) fn verts_to_gen(verts: &[usize]) -> Gen {
    Gen::nums(verts.iter().map(|&v| BigInt::from(v)).collect())
}

pub(crate) fn gen_to_verts(g: &Gen) -> Vec<usize> {
    match g {
        Gen::Nums(v) => v
            .iter()
            .map(|b| {
                use num_traits::ToPrimitive;
                b.to_usize().expect("vertex index")
            })
            .collect(),
        other => panic!("not a vertex tuple generator: {other:?}"),
    }
}

/// Canonical simplex of a standard simplex from its weakly increasing vertex
/// sequence: the distinct values form the core, the repeats the word.
pub(crate) fn simplex_from_vertices(verts: &[usize]) -> Simplex {
    debug_assert!(verts.windows(2).all(|w| w[0] <= w[1]));
    let mut distinct = verts.to_vec();
    distinct.dedup();
    let mut out = Simplex::nondegenerate(distinct.len() as i64 - 1, verts_to_gen(&distinct));
    for j in 0..verts.len() - 1 {
        if verts[j] == verts[j + 1] {
            out = out.degenerate(j);
        }
    }
    out
}

/// Vertex sequence of a simplex over a standard simplex (core = vertex
/// tuple), repeats included.
pub(crate) fn vertex_sequence(s: &Simplex) -> Vec<usize> {
    let core = gen_to_verts(&s.core);
    s.position_map().into_iter().map(|p| core[p]).collect()
}

struct FacetSet {
    bases: HashMap<i64, Vec<Gen>>,
    bound: i64,
}

impl SimplicialObject for FacetSet {
    fn face(&self, dim: i64, core: &Gen, i: usize) -> Simplex {
        debug_assert!(dim >= 1);
        let mut verts = gen_to_verts(core);
        verts.remove(i);
        Simplex::nondegenerate(dim - 1, verts_to_gen(&verts))
    }

    fn basis(&self, dim: i64) -> Option<Vec<Gen>> {
        Some(self.bases.get(&dim).cloned().unwrap_or_default())
    }

    fn dimension_bound(&self) -> i64 {
        self.bound
    }
}

/// Simplicial set of a finite simplicial complex: nondegenerate simplices
/// are the increasing vertex tuples contained in some facet, faces delete a
/// vertex.  Every vertex below `vertex_count` is included even if no facet
/// mentions it.
pub fn from_facets(
    vertex_count: usize,
    facets: &[Vec<usize>],
) -> Result<SimplicialSet, SimplicialError> {
    use std::collections::BTreeSet;
    let mut closure: HashMap<i64, BTreeSet<Vec<usize>>> = HashMap::new();
    for v in 0..vertex_count {
        closure.entry(0).or_default().insert(vec![v]);
    }
    for facet in facets {
        if facet.is_empty() {
            return Err(SimplicialError::MalformedFacet(facet.clone(), "empty"));
        }
        let mut sorted = facet.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(SimplicialError::MalformedFacet(
                facet.clone(),
                "repeated vertex",
            ));
        }
        if *sorted.last().unwrap() >= vertex_count {
            return Err(SimplicialError::MalformedFacet(
                facet.clone(),
                "vertex out of range",
            ));
        }
        // All nonempty subsets, by bitmask.
        let k = sorted.len();
        for mask in 1u64..(1 << k) {
            let sub: Vec<usize> = (0..k)
                .filter(|&b| mask & (1 << b) != 0)
                .map(|b| sorted[b])
                .collect();
            closure
                .entry(sub.len() as i64 - 1)
                .or_default()
                .insert(sub);
        }
    }
    let bound = closure.keys().copied().max().unwrap_or(0);
    let bases = closure
        .into_iter()
        .map(|(d, set)| (d, set.iter().map(|v| verts_to_gen(v)).collect()))
        .collect();
    Ok(SimplicialSet::new(FacetSet { bases, bound }))
}

/// The standard `n`-simplex.
pub fn standard_simplex(n: usize) -> SimplicialSet {
    from_facets(n + 1, &[(0..=n).collect()]).expect("standard simplex facets are well formed")
}
