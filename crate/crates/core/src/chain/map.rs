//! Linear maps between chain complexes and group-valued cochains.

use super::{Chain, ChainError, Complex, Gen};
use crate::abelian::{FgAbelianGroup, GroupElement};
use num_bigint::BigInt;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

type GenMap = dyn Fn(i64, &Gen) -> Chain + Send + Sync;

struct MapInner {
    source: Complex,
    target: Complex,
    shift: i64,
    apply: Box<GenMap>,
    cache: Mutex<HashMap<(i64, Gen), Chain>>,
}

/// Degree-homogeneous linear map, defined by its action on generators and
/// memoized per generator.  Cheap to clone; clones share the memo table.
#[derive(Clone)]
pub struct ChainMap {
    inner: Arc<MapInner>,
}

impl ChainMap {
    /// `apply(deg, g)` must return a chain of degree `deg + shift` in the
    /// target complex.
    pub fn new(
        source: Complex,
        target: Complex,
        shift: i64,
        apply: impl Fn(i64, &Gen) -> Chain + Send + Sync + 'static,
    ) -> ChainMap {
        ChainMap {
            inner: Arc::new(MapInner {
                source,
                target,
                shift,
                apply: Box::new(apply),
                cache: Mutex::new(HashMap::new()),
            }),
        }
    }

    pub fn identity(c: &Complex) -> ChainMap {
        ChainMap::new(c.clone(), c.clone(), 0, |deg, g| Chain::gen(deg, g.clone()))
    }

    pub fn zero(source: &Complex, target: &Complex, shift: i64) -> ChainMap {
        ChainMap::new(source.clone(), target.clone(), shift, move |deg, _| {
            Chain::zero(deg + shift)
        })
    }

    pub fn source(&self) -> &Complex {
        &self.inner.source
    }

    pub fn target(&self) -> &Complex {
        &self.inner.target
    }

    pub fn shift(&self) -> i64 {
        self.inner.shift
    }

    pub fn apply_gen(&self, degree: i64, g: &Gen) -> Chain {
        let key = (degree, g.clone());
        {
            let cache = self.inner.cache.lock().unwrap();
            if let Some(c) = cache.get(&key) {
                return c.clone();
            }
        }
        let out = (self.inner.apply)(degree, g);
        assert_eq!(out.degree(), degree + self.inner.shift, "chain map degree violation");
        self.inner.cache.lock().unwrap().insert(key, out.clone());
        out
    }

    pub fn apply(&self, chain: &Chain) -> Chain {
        chain.map_terms(chain.degree() + self.inner.shift, |g| {
            self.apply_gen(chain.degree(), g)
        })
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ChainMap) -> ChainMap {
        debug_assert!(
            other.target().same_as(self.source()),
            "compose: inner target differs from outer source"
        );
        let outer = self.clone();
        let inner = other.clone();
        let shift = self.shift() + other.shift();
        ChainMap::new(other.source().clone(), self.target().clone(), shift, move |deg, g| {
            outer.apply(&inner.apply_gen(deg, g))
        })
    }

    pub fn add(&self, other: &ChainMap) -> ChainMap {
        debug_assert_eq!(self.shift(), other.shift());
        let a = self.clone();
        let b = other.clone();
        ChainMap::new(
            self.source().clone(),
            self.target().clone(),
            self.shift(),
            move |deg, g| a.apply_gen(deg, g).add(&b.apply_gen(deg, g)),
        )
    }

    pub fn sub(&self, other: &ChainMap) -> ChainMap {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ChainMap {
        self.scale(BigInt::from(-1))
    }

    pub fn scale(&self, k: BigInt) -> ChainMap {
        let a = self.clone();
        ChainMap::new(
            self.source().clone(),
            self.target().clone(),
            self.shift(),
            move |deg, g| a.apply_gen(deg, g).scale(&k),
        )
    }

    /// Re-houses the map between complexes that share the generator
    /// encoding, optionally relabelling degrees.  Used by shift and other
    /// structural wrappers where the underlying action is unchanged.
    pub(crate) fn rebase(
        &self,
        source: Complex,
        target: Complex,
        source_degree_offset: i64,
        target_degree_offset: i64,
    ) -> ChainMap {
        let base = self.clone();
        let new_shift = self.shift() + target_degree_offset - source_degree_offset;
        ChainMap::new(source, target, new_shift, move |deg, g| {
            let mut out = Chain::zero(deg + new_shift);
            let inner = base.apply_gen(deg - source_degree_offset, g);
            for (h, c) in inner.terms() {
                out.add_term(h.clone(), c.clone());
            }
            out
        })
    }

    /// Checks `self ∘ d = d ∘ self` (with the sign folded into the maps) on
    /// the supplied chains; degree-0 maps commute plainly.
    pub fn is_chain_map_on(&self, probes: &[Chain]) -> bool {
        probes.iter().all(|c| {
            let lhs = self.apply(&self.source().d(c));
            let rhs = self.target().d(&self.apply(c));
            lhs == rhs
        })
    }
}

impl std::fmt::Debug for ChainMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "ChainMap({:?} -> {:?}, shift {})",
            self.inner.source, self.inner.target, self.inner.shift
        )
    }
}

type CochainFn = dyn Fn(&Gen) -> GroupElement + Send + Sync;

struct CochainInner {
    complex: Complex,
    degree: i64,
    coefficients: FgAbelianGroup,
    values: Box<CochainFn>,
    cache: Mutex<HashMap<Gen, GroupElement>>,
}

/// Cochain on a chain complex with values in a finitely generated abelian
/// group.  Only its values on generators of the fixed degree are defined;
/// evaluation extends linearly.
#[derive(Clone)]
pub struct Cochain {
    inner: Arc<CochainInner>,
}

impl Cochain {
    pub fn new(
        complex: Complex,
        degree: i64,
        coefficients: FgAbelianGroup,
        values: impl Fn(&Gen) -> GroupElement + Send + Sync + 'static,
    ) -> Cochain {
        Cochain {
            inner: Arc::new(CochainInner {
                complex,
                degree,
                coefficients,
                values: Box::new(values),
                cache: Mutex::new(HashMap::new()),
            }),
        }
    }

    pub fn zero(complex: Complex, degree: i64, coefficients: FgAbelianGroup) -> Cochain {
        let g = coefficients.clone();
        Cochain::new(complex, degree, coefficients, move |_| g.zero_element())
    }

    pub fn complex(&self) -> &Complex {
        &self.inner.complex
    }

    pub fn degree(&self) -> i64 {
        self.inner.degree
    }

    pub fn coefficients(&self) -> &FgAbelianGroup {
        &self.inner.coefficients
    }

    pub fn value(&self, g: &Gen) -> GroupElement {
        {
            let cache = self.inner.cache.lock().unwrap();
            if let Some(v) = cache.get(g) {
                return v.clone();
            }
        }
        let out = (self.inner.values)(g);
        self.inner.cache.lock().unwrap().insert(g.clone(), out.clone());
        out
    }

    /// Linear evaluation on a chain of the cochain's degree.
    pub fn evaluate(&self, chain: &Chain) -> GroupElement {
        assert_eq!(chain.degree(), self.inner.degree, "cochain evaluated off-degree");
        let mut acc = self.inner.coefficients.zero_element();
        for (g, c) in chain.terms() {
            acc = acc.add(&self.value(g).scale(c));
        }
        acc
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        let a = self.clone();
        let b = other.clone();
        Cochain::new(
            self.complex().clone(),
            self.degree(),
            self.coefficients().clone(),
            move |g| a.value(g).add(&b.value(g)),
        )
    }

    pub fn sub(&self, other: &Cochain) -> Cochain {
        let a = self.clone();
        let b = other.clone();
        Cochain::new(
            self.complex().clone(),
            self.degree(),
            self.coefficients().clone(),
            move |g| a.value(g).sub(&b.value(g)),
        )
    }

    /// Pullback along a degree-preserving chain map into this cochain's
    /// complex: `(z ∘ φ)(g) = z(φ g)`.
    pub fn pullback(&self, phi: &ChainMap) -> Cochain {
        debug_assert!(phi.target().same_as(self.complex()));
        let z = self.clone();
        let phi = phi.clone();
        let deg = self.degree() - phi.shift();
        Cochain::new(
            phi.source().clone(),
            deg,
            self.coefficients().clone(),
            move |g| z.evaluate(&phi.apply_gen(deg, g)),
        )
    }

    /// Postcomposition with a homomorphism of coefficient groups.
    pub fn push_values(&self, hom: &crate::abelian::AbHom) -> Cochain {
        debug_assert_eq!(hom.domain(), self.coefficients());
        let z = self.clone();
        let hom = hom.clone();
        Cochain::new(
            self.complex().clone(),
            self.degree(),
            hom.codomain().clone(),
            move |g| hom.apply(&z.value(g)),
        )
    }

    /// Coboundary: `(δz)(g) = z(d g)`, one degree higher.
    pub fn coboundary(&self) -> Cochain {
        let z = self.clone();
        let cx = self.complex().clone();
        let deg = self.degree() + 1;
        Cochain::new(
            self.complex().clone(),
            deg,
            self.coefficients().clone(),
            move |g| z.evaluate(&cx.d_gen(deg, g)),
        )
    }

    /// Verifies `δz = 0` on the basis one degree up; requires the complex to
    /// be effective there.
    pub fn is_cocycle_on_basis(&self) -> Result<bool, ChainError> {
        let basis = self.complex().basis_checked(self.degree() + 1)?;
        let delta = self.coboundary();
        Ok(basis.iter().all(|g| delta.value(g).is_zero()))
    }
}

impl std::fmt::Debug for Cochain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Cochain(deg {}, values in {})",
            self.inner.degree, self.inner.coefficients
        )
    }
}
