//! Chain complexes, reductions, strong equivalences and the perturbation
//! calculus.
//!
//! Complexes are *locally effective*: they answer differential queries on
//! individual generators and optionally expose a finite basis per degree.
//! Everything the crate computes (homology of spaces, Postnikov invariants,
//! obstruction classes) is phrased through the operators defined here.

mod build;
mod homology;
mod map;
mod reduction;

pub use build::{
    cone, cone_inclusions, cone_strong_equivalence, direct_sum, opaque_basis, shift,
    shift_reduction, shift_strong_equivalence, sum_inject, sum_project, sum_reduction,
    sum_strong_equivalence, tensor, tensor_gen, tensor_map, tensor_reduction,
    tensor_strong_equivalence, untensor_gen, with_min_degree, ConeMaps, CONE_SOURCE, CONE_TARGET,
    SUM_LEFT, SUM_RIGHT,
};
pub(crate) use build::cone_block;
pub use homology::{cohomology, homology, rho, CohomologyData, HomologyData};
pub use map::{ChainMap, Cochain};
pub use reduction::{
    normalize_homotopy, perturb, perturb_bottom, perturb_onto, perturbed_complex, se_compose,
    verify_reduction, LawCheck, LawReport, Reduction, StrongEquivalence, NILPOTENCY_CAP,
};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

/// Degree bound reported by complexes and simplicial sets with cells in
/// every degree.  Derived bounds are clamped to this ceiling by
/// [`bound_sum`], so arbitrarily nested sums cannot overflow.
pub(crate) const UNBOUNDED_DIM: i64 = i64::MAX / 8;

/// Sum of two degree bounds, saturating at [`UNBOUNDED_DIM`].
pub(crate) fn bound_sum(a: i64, b: i64) -> i64 {
    a.saturating_add(b).min(UNBOUNDED_DIM)
}

/// Formal generator of a chain complex.  Meaning is private to the complex
/// that owns the generator; the variants exist so that product, tensor, cone
/// and word-like constructions can build structured identifiers without
/// string encoding.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    Int(i64),
    Str(Arc<str>),
    Nums(Arc<[BigInt]>),
    Pair(Arc<(Gen, Gen)>),
    Seq(Arc<[Gen]>),
    Tag(u16, Arc<Gen>),
}

impl Gen {
    pub fn int(v: i64) -> Gen {
        Gen::Int(v)
    }

    pub fn str(s: &str) -> Gen {
        Gen::Str(Arc::from(s))
    }

    pub fn nums(v: Vec<BigInt>) -> Gen {
        Gen::Nums(Arc::from(v))
    }

    pub fn pair(a: Gen, b: Gen) -> Gen {
        Gen::Pair(Arc::new((a, b)))
    }

    pub fn seq(items: Vec<Gen>) -> Gen {
        Gen::Seq(Arc::from(items))
    }

    pub fn tag(t: u16, g: Gen) -> Gen {
        Gen::Tag(t, Arc::new(g))
    }

    pub fn as_pair(&self) -> Option<(&Gen, &Gen)> {
        match self {
            Gen::Pair(p) => Some((&p.0, &p.1)),
            _ => None,
        }
    }

    pub fn as_seq(&self) -> Option<&[Gen]> {
        match self {
            Gen::Seq(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_tag(&self) -> Option<(u16, &Gen)> {
        match self {
            Gen::Tag(t, g) => Some((*t, g)),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Gen::Int(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_nums(&self) -> Option<&[BigInt]> {
        match self {
            Gen::Nums(v) => Some(v),
            _ => None,
        }
    }
}

impl std::fmt::Debug for Gen {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Gen::Int(v) => write!(f, "{v}"),
            Gen::Str(s) => write!(f, "{s}"),
            Gen::Nums(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "<{}>", parts.join(","))
            }
            Gen::Pair(p) => write!(f, "({:?},{:?})", p.0, p.1),
            Gen::Seq(s) => {
                write!(f, "[")?;
                for (i, g) in s.iter().enumerate() {
                    if i > 0 {
                        write!(f, "|")?;
                    }
                    write!(f, "{g:?}")?;
                }
                write!(f, "]")
            }
            Gen::Tag(t, g) => write!(f, "{t}#{:?}", g),
        }
    }
}

/// Integer linear combination of generators in a single degree.
#[derive(Clone, PartialEq, Eq)]
pub struct Chain {
    degree: i64,
    terms: BTreeMap<Gen, BigInt>,
}

impl Chain {
    pub fn zero(degree: i64) -> Chain {
        Chain { degree, terms: BTreeMap::new() }
    }

    pub fn gen(degree: i64, g: Gen) -> Chain {
        let mut terms = BTreeMap::new();
        terms.insert(g, BigInt::one());
        Chain { degree, terms }
    }

    pub fn term(degree: i64, g: Gen, coeff: BigInt) -> Chain {
        let mut c = Chain::zero(degree);
        c.add_term(g, coeff);
        c
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Gen, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, g: &Gen) -> BigInt {
        self.terms.get(g).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add_term(&mut self, g: Gen, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(g) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Chain) -> Chain {
        assert_eq!(self.degree, other.degree, "degree mismatch in chain sum");
        let mut out = self.clone();
        for (g, c) in other.terms() {
            out.add_term(g.clone(), c.clone());
        }
        out
    }

    pub fn add_assign(&mut self, other: &Chain) {
        assert_eq!(self.degree, other.degree, "degree mismatch in chain sum");
        for (g, c) in other.terms() {
            self.add_term(g.clone(), c.clone());
        }
    }

    pub fn neg(&self) -> Chain {
        self.scale(&BigInt::from(-1))
    }

    pub fn sub(&self, other: &Chain) -> Chain {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigInt) -> Chain {
        if k.is_zero() {
            return Chain::zero(self.degree);
        }
        Chain {
            degree: self.degree,
            terms: self.terms.iter().map(|(g, c)| (g.clone(), c * k)).collect(),
        }
    }

    /// Applies a generator-level linear map; `f` receives the degree of this
    /// chain along with each generator.
    pub fn map_terms(&self, out_degree: i64, mut f: impl FnMut(&Gen) -> Chain) -> Chain {
        let mut out = Chain::zero(out_degree);
        for (g, c) in self.terms() {
            let image = f(g);
            assert_eq!(image.degree, out_degree, "map image degree mismatch");
            out.add_assign(&image.scale(c));
        }
        out
    }
}

impl std::fmt::Debug for Chain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0_({})", self.degree);
        }
        let mut first = true;
        for (g, c) in self.terms() {
            if first {
                write!(f, "{c}·{g:?}")?;
                first = false;
            } else {
                write!(f, " + {c}·{g:?}")?;
            }
        }
        Ok(())
    }
}

/// Errors shared by the chain-level operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChainError {
    #[error("degree {0} exceeds the complex degree bound")]
    DegreeOutOfBound(i64),
    #[error("complex has no finite basis in degree {0}")]
    NotEffective(i64),
    #[error("cochain is not a cocycle")]
    NotACocycle,
    #[error("perturbation is not nilpotent within {0} iterations")]
    NonNilpotent(usize),
}

/// Implementation interface for a locally effective chain complex.
pub trait ComplexOps: Send + Sync {
    /// Differential of a generator living in `degree`; result has degree one
    /// less.
    fn d(&self, degree: i64, gen: &Gen) -> Chain;

    /// Finite ordered basis of the given degree, `None` when the complex is
    /// only locally effective there.  Degrees below zero are empty.
    fn basis(&self, degree: i64) -> Option<Vec<Gen>>;

    fn degree_bound(&self) -> i64;
}

struct ComplexInner {
    ops: Box<dyn ComplexOps>,
    d_cache: Mutex<HashMap<(i64, Gen), Chain>>,
}

/// Shared handle to a chain complex.  Differentials are memoized per
/// generator; clones share the cache.
#[derive(Clone)]
pub struct Complex {
    inner: Arc<ComplexInner>,
}

impl Complex {
    pub fn new(ops: impl ComplexOps + 'static) -> Complex {
        Complex {
            inner: Arc::new(ComplexInner {
                ops: Box::new(ops),
                d_cache: Mutex::new(HashMap::new()),
            }),
        }
    }

    /// Stable identity for sanity checks when composing maps.
    pub fn id(&self) -> usize {
        Arc::as_ptr(&self.inner) as usize
    }

    pub fn same_as(&self, other: &Complex) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }

    pub fn degree_bound(&self) -> i64 {
        self.inner.ops.degree_bound()
    }

    pub fn d_gen(&self, degree: i64, g: &Gen) -> Chain {
        let key = (degree, g.clone());
        {
            let cache = self.inner.d_cache.lock().unwrap();
            if let Some(c) = cache.get(&key) {
                return c.clone();
            }
        }
        let out = self.inner.ops.d(degree, g);
        assert_eq!(out.degree(), degree - 1, "differential must lower degree by one");
        self.inner
            .d_cache
            .lock()
            .unwrap()
            .insert(key, out.clone());
        out
    }

    pub fn d(&self, chain: &Chain) -> Chain {
        chain.map_terms(chain.degree() - 1, |g| self.d_gen(chain.degree(), g))
    }

    pub fn basis(&self, degree: i64) -> Option<Vec<Gen>> {
        if degree < 0 {
            return Some(Vec::new());
        }
        self.inner.ops.basis(degree)
    }

    /// Basis, failing loudly when the complex is not effective there.  Past
    /// the degree bound a missing basis means the complex simply cannot
    /// answer, which gets its own error.
    pub fn basis_checked(&self, degree: i64) -> Result<Vec<Gen>, ChainError> {
        self.basis(degree).ok_or(if degree > self.degree_bound() {
            ChainError::DegreeOutOfBound(degree)
        } else {
            ChainError::NotEffective(degree)
        })
    }

    pub fn is_effective_through(&self, max_degree: i64) -> bool {
        (0..=max_degree).all(|n| self.basis(n).is_some())
    }

    /// The differential as a degree `-1` chain map from the complex to
    /// itself.
    pub fn d_map(&self) -> ChainMap {
        let me = self.clone();
        ChainMap::new(self.clone(), self.clone(), -1, move |deg, g| me.d_gen(deg, g))
    }

    /// Checks `d∘d = 0` on basis generators and on the supplied probe
    /// chains.  The basis scan covers the degrees the probes touch, or every
    /// degree up to a fixed depth when no probes are given; degrees without
    /// an enumerable basis are exercised only through the probes.
    pub fn check_dd(&self, probes: &[Chain]) -> bool {
        let top = probes
            .iter()
            .map(|c| c.degree() + 1)
            .max()
            .unwrap_or(12)
            .min(self.degree_bound());
        let mut ok = true;
        for n in 0..=top {
            if let Some(basis) = self.basis(n) {
                for g in basis {
                    ok &= self.d(&self.d_gen(n, &g)).is_zero();
                }
            }
        }
        for c in probes {
            ok &= self.d(&self.d(c)).is_zero();
        }
        ok
    }
}

impl std::fmt::Debug for Complex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Complex#{:x}", self.id())
    }
}

/// Complex given by explicit bases and differential images; the workhorse
/// for tests and for small effective bottoms.
pub struct ExplicitComplex {
    bases: BTreeMap<i64, Vec<Gen>>,
    diff: HashMap<(i64, Gen), Chain>,
    bound: i64,
}

impl ExplicitComplex {
    pub fn new(bound: i64) -> Self {
        ExplicitComplex { bases: BTreeMap::new(), diff: HashMap::new(), bound }
    }

    pub fn add_generator(&mut self, degree: i64, g: Gen) {
        self.bases.entry(degree).or_default().push(g);
    }

    pub fn set_d(&mut self, degree: i64, g: Gen, image: Chain) {
        assert_eq!(image.degree(), degree - 1);
        self.diff.insert((degree, g), image);
    }

    /// Builds the complex whose degree-n part is free on `ranks[n]`
    /// generators `Int(i)` with differentials given as integer matrices
    /// (entry `(i, j)` = coefficient of generator `i` of degree `n-1` in
    /// `d(generator j of degree n)`).
    pub fn from_matrices(ranks: &[usize], diffs: &[Vec<Vec<i64>>]) -> Complex {
        let bound = ranks.len() as i64 - 1;
        let mut cx = ExplicitComplex::new(bound.max(0));
        for (n, &r) in ranks.iter().enumerate() {
            for i in 0..r {
                cx.add_generator(n as i64, Gen::int(i as i64));
            }
        }
        for (n, m) in diffs.iter().enumerate() {
            let n = n as i64 + 1;
            let rows = if n >= 1 { ranks.get(n as usize - 1).copied().unwrap_or(0) } else { 0 };
            let cols = ranks.get(n as usize).copied().unwrap_or(0);
            for j in 0..cols {
                let mut image = Chain::zero(n - 1);
                for (i, row) in m.iter().enumerate().take(rows) {
                    image.add_term(Gen::int(i as i64), BigInt::from(row[j]));
                }
                cx.set_d(n, Gen::int(j as i64), image);
            }
        }
        Complex::new(cx)
    }
}

impl ComplexOps for ExplicitComplex {
    fn d(&self, degree: i64, gen: &Gen) -> Chain {
        self.diff
            .get(&(degree, gen.clone()))
            .cloned()
            .unwrap_or_else(|| Chain::zero(degree - 1))
    }

    fn basis(&self, degree: i64) -> Option<Vec<Gen>> {
        Some(self.bases.get(&degree).cloned().unwrap_or_default())
    }

    fn degree_bound(&self) -> i64 {
        self.bound
    }
}

/// The chain complex of a point: a single generator in degree zero.
pub fn point_complex(bound: i64) -> Complex {
    let mut cx = ExplicitComplex::new(bound);
    cx.add_generator(0, Gen::str("*"));
    Complex::new(cx)
}

pub fn point_generator() -> Gen {
    Gen::str("*")
}

#[cfg(test)]
mod tests;
