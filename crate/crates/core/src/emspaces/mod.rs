//! Simplicial models of the spaces that classify cohomology.
//!
//! For an abelian group `pi` and `n >= 1` the set `K(pi, n)` has as
//! `k`-simplices the simplicial `n`-cocycles on the standard `k`-simplex with
//! coefficients in `pi`; `E(pi, n)` has all `n`-cochains.  Face and degeneracy
//! operators act by precomposition with the simplicial structure maps of the
//! standard simplices, so both families are honest simplicial sets and the
//! cochain coboundary induces a fibration `E(pi, n) -> K(pi, n+1)` whose fibre
//! is `K(pi, n)`.
//!
//! The central computational fact is the evaluation bijection: simplicial maps
//! `Y -> K(pi, n)` correspond exactly to `n`-cocycles on `Y` with coefficients
//! in `pi` ([`ev`] / [`ev_inverse`]).  Classifying maps for fibrations are
//! produced and consumed through this bijection.
//!
//! [`em_effective_homology`] equips the chain complex of `K(pi, n)` with an
//! effective model: finite groups are levelwise finite already, and each free
//! factor is handled by an iterated fibration argument over the circle model
//! of `K(Z, 1)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::abelian::{AbHom, FgAbelianGroup, GroupElement};
use crate::chain::{Chain, Cochain, Complex, Gen};
use crate::simplicial::{Simplex, SimplicialMap, SimplicialObject, SimplicialSet};

mod effective;
#[cfg(test)]
mod tests;

pub use effective::em_effective_homology;
pub(crate) use effective::{
    pseudo_section, twisted_product, twisted_tensor_equivalence,
};

pub(crate) use crate::chain::UNBOUNDED_DIM;

/// Which of the two cochain-space families a simplex belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EmSpace {
    /// Cocycles only: the classifying space `K(pi, n)`.
    K,
    /// All cochains: the contractible space `E(pi, n)`.
    E,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EmError {
    /// Operands live over different groups, degrees, or dimensions.
    DimensionMismatch,
    /// A cochain fed to [`ev_inverse`] fails the cocycle condition.
    NotACocycle,
}

impl std::fmt::Display for EmError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EmError::DimensionMismatch => write!(f, "mismatched dimensions or coefficients"),
            EmError::NotACocycle => write!(f, "cochain is not a cocycle"),
        }
    }
}

impl std::error::Error for EmError {}

/// A simplex of `K(pi, n)` or `E(pi, n)` in dimension `k`: a `pi`-valued
/// simplicial `n`-cochain on the standard `k`-simplex, stored sparsely on the
/// strictly increasing `(n+1)`-tuples from `{0, ..., k}` where it is nonzero.
#[derive(Clone, PartialEq, Eq)]
pub struct EmSimplex {
    space: EmSpace,
    group: FgAbelianGroup,
    cochain_degree: i64,
    dim: i64,
    values: BTreeMap<Vec<usize>, GroupElement>,
}

impl std::fmt::Debug for EmSimplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "EmSimplex({:?}, n={}, dim={}, {:?})",
            self.space, self.cochain_degree, self.dim, self.values
        )
    }
}

impl EmSimplex {
    /// The zero cochain (the basepoint simplex in each dimension).
    pub fn zero(space: EmSpace, group: &FgAbelianGroup, n: i64, dim: i64) -> EmSimplex {
        assert!(n >= 0, "cochain degree must be non-negative");
        assert!(dim >= 0);
        EmSimplex {
            space,
            group: group.clone(),
            cochain_degree: n,
            dim,
            values: BTreeMap::new(),
        }
    }

    pub fn from_entries(
        space: EmSpace,
        group: &FgAbelianGroup,
        n: i64,
        dim: i64,
        entries: impl IntoIterator<Item = (Vec<usize>, GroupElement)>,
    ) -> EmSimplex {
        let mut out = EmSimplex::zero(space, group, n, dim);
        for (tuple, value) in entries {
            out.set(tuple, value);
        }
        out
    }

    fn set(&mut self, tuple: Vec<usize>, value: GroupElement) {
        assert_eq!(tuple.len() as i64, self.cochain_degree + 1, "tuple arity");
        assert!(
            tuple.windows(2).all(|w| w[0] < w[1]),
            "tuples must be strictly increasing"
        );
        assert!(
            tuple.last().map_or(true, |&m| (m as i64) <= self.dim),
            "tuple exceeds the simplex dimension"
        );
        assert_eq!(value.group(), &self.group, "value in the wrong group");
        if value.is_zero() {
            self.values.remove(&tuple);
        } else {
            self.values.insert(tuple, value);
        }
    }

    fn add_to(&mut self, tuple: Vec<usize>, value: &GroupElement) {
        let current = self.value(&tuple);
        self.set(tuple, current.add(value));
    }

    pub fn space(&self) -> EmSpace {
        self.space
    }

    pub fn group(&self) -> &FgAbelianGroup {
        &self.group
    }

    /// The cochain degree `n` of the ambient space `K(pi, n)` / `E(pi, n)`.
    pub fn cochain_degree(&self) -> i64 {
        self.cochain_degree
    }

    /// The simplicial dimension `k`.
    pub fn dim(&self) -> i64 {
        self.dim
    }

    pub fn value(&self, tuple: &[usize]) -> GroupElement {
        self.values
            .get(tuple)
            .cloned()
            .unwrap_or_else(|| self.group.zero_element())
    }

    pub fn entries(&self) -> impl Iterator<Item = (&[usize], &GroupElement)> {
        self.values.iter().map(|(t, v)| (t.as_slice(), v))
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Reinterprets the simplex in the other cochain family.  Converting into
    /// `K` requires the value to be a cocycle.
    pub(crate) fn into_space(mut self, space: EmSpace) -> EmSimplex {
        if space == EmSpace::K {
            debug_assert!(self.is_cocycle(), "non-cocycle moved into K");
        }
        self.space = space;
        self
    }

    /// `i`-th face: precomposition with the coface `delta_i`.
    pub fn face(&self, i: usize) -> EmSimplex {
        assert!(self.dim >= 1 && (i as i64) <= self.dim);
        let mut out = EmSimplex::zero(self.space, &self.group, self.cochain_degree, self.dim - 1);
        for (tuple, value) in &self.values {
            if tuple.contains(&i) {
                continue;
            }
            let mapped: Vec<usize> = tuple
                .iter()
                .map(|&m| if m > i { m - 1 } else { m })
                .collect();
            out.set(mapped, value.clone());
        }
        out
    }

    /// `j`-th degeneracy: precomposition with the codegeneracy `sigma_j`.
    /// Tuples whose image under `sigma_j` has a repeat evaluate to zero, so
    /// every entry lifts to at most two tuples upstairs.
    pub fn degeneracy(&self, j: usize) -> EmSimplex {
        assert!((j as i64) <= self.dim);
        let mut out = EmSimplex::zero(self.space, &self.group, self.cochain_degree, self.dim + 1);
        for (tuple, value) in &self.values {
            let lift = |choice: usize| -> Vec<usize> {
                tuple
                    .iter()
                    .map(|&m| {
                        if m < j {
                            m
                        } else if m > j {
                            m + 1
                        } else {
                            choice
                        }
                    })
                    .collect()
            };
            if tuple.contains(&j) {
                out.set(lift(j), value.clone());
                out.set(lift(j + 1), value.clone());
            } else {
                out.set(lift(0), value.clone());
            }
        }
        out
    }

    /// The cochain coboundary, one degree up on the same simplex.
    pub fn coboundary(&self) -> EmSimplex {
        let mut out = EmSimplex::zero(
            self.space,
            &self.group,
            self.cochain_degree + 1,
            self.dim,
        );
        for (tuple, value) in &self.values {
            for x in 0..=(self.dim as usize) {
                if tuple.contains(&x) {
                    continue;
                }
                let mut bigger = tuple.clone();
                let pos = bigger.partition_point(|&m| m < x);
                bigger.insert(pos, x);
                let signed = if pos % 2 == 0 { value.clone() } else { value.neg() };
                out.add_to(bigger, &signed);
            }
        }
        out
    }

    pub fn is_cocycle(&self) -> bool {
        self.coboundary().is_zero()
    }

    pub fn add(&self, other: &EmSimplex) -> Result<EmSimplex, EmError> {
        if self.group != other.group
            || self.cochain_degree != other.cochain_degree
            || self.dim != other.dim
        {
            return Err(EmError::DimensionMismatch);
        }
        let mut out = self.clone();
        for (tuple, value) in &other.values {
            out.add_to(tuple.clone(), value);
        }
        Ok(out)
    }

    pub fn neg(&self) -> EmSimplex {
        let mut out = EmSimplex::zero(self.space, &self.group, self.cochain_degree, self.dim);
        for (tuple, value) in &self.values {
            out.set(tuple.clone(), value.neg());
        }
        out
    }

    pub fn sub(&self, other: &EmSimplex) -> Result<EmSimplex, EmError> {
        self.add(&other.neg())
    }

    /// Applies a coefficient homomorphism to every value.
    pub fn push(&self, hom: &AbHom) -> EmSimplex {
        assert_eq!(hom.domain(), &self.group);
        let mut out = EmSimplex::zero(
            self.space,
            hom.codomain(),
            self.cochain_degree,
            self.dim,
        );
        for (tuple, value) in &self.values {
            out.set(tuple.clone(), hom.apply(value));
        }
        out
    }

    /// Whether the simplex equals `s_j` of its `j`-th face.
    pub fn is_degenerate_at(&self, j: usize) -> bool {
        self.face(j).degeneracy(j) == *self
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.dim == 0 || !(0..self.dim as usize).any(|j| self.is_degenerate_at(j))
    }

    /// Canonical form as a simplex of the ambient simplicial set: the unique
    /// expression as an iterated degeneracy of a nondegenerate simplex.
    pub fn canonical_simplex(&self) -> Simplex {
        let mut word = Vec::new();
        let mut current = self.clone();
        'strip: loop {
            for j in 0..current.dim as usize {
                if current.is_degenerate_at(j) {
                    word.push(j);
                    current = current.face(j);
                    continue 'strip;
                }
            }
            break;
        }
        let mut out = Simplex::nondegenerate(current.dim, current.to_gen());
        for &j in word.iter().rev() {
            out = out.degenerate(j);
        }
        debug_assert_eq!(out.dim(), self.dim);
        out
    }

    /// Stable generator encoding (entries in tuple order).
    pub fn to_gen(&self) -> Gen {
        let items = self
            .values
            .iter()
            .map(|(tuple, value)| {
                let t = Gen::nums(tuple.iter().map(|&m| BigInt::from(m)).collect());
                let v = Gen::nums(value.coords().to_vec());
                Gen::pair(t, v)
            })
            .collect();
        Gen::seq(items)
    }

    pub fn from_gen(
        space: EmSpace,
        group: &FgAbelianGroup,
        n: i64,
        dim: i64,
        gen: &Gen,
    ) -> EmSimplex {
        let mut out = EmSimplex::zero(space, group, n, dim);
        let items = gen.as_seq().expect("cochain-space generator");
        for item in items {
            let (t, v) = item.as_pair().expect("cochain-space entry");
            let tuple: Vec<usize> = t
                .as_nums()
                .expect("entry tuple")
                .iter()
                .map(|m| usize::try_from(m.clone()).expect("tuple index"))
                .collect();
            let coords = v.as_nums().expect("entry value").to_vec();
            out.set(tuple, group.element(coords));
        }
        out
    }
}

/// The value of an arbitrary (possibly degenerate) simplex of `K(pi, n)` or
/// `E(pi, n)`, reconstructed from its core by applying the recorded
/// degeneracies innermost first.
pub(crate) fn em_simplex_value(
    space: EmSpace,
    group: &FgAbelianGroup,
    n: i64,
    s: &Simplex,
) -> EmSimplex {
    let mut out = EmSimplex::from_gen(space, group, n, s.core_dim(), s.core());
    for &j in s.word().iter().rev() {
        out = out.degeneracy(j);
    }
    out
}

// ---------------------------------------------------------------------------
// the simplicial sets

struct EmOps {
    space: EmSpace,
    group: FgAbelianGroup,
    n: i64,
}

impl EmOps {
    fn decode(&self, dim: i64, core: &Gen) -> EmSimplex {
        EmSimplex::from_gen(self.space, &self.group, self.n, dim, core)
    }

    /// All nondegenerate simplices in dimension `dim`, in a deterministic
    /// order.  E-simplices are free cochains; K-simplices are parametrised
    /// bijectively by `(n-1)`-cochains supported away from vertex 0, sent to
    /// their coboundary (the standard simplex is contractible, so every
    /// cocycle arises exactly once).
    fn enumerate(&self, dim: i64) -> Vec<EmSimplex> {
        let elements = self
            .group
            .elements()
            .expect("levelwise enumeration requires finite coefficients");
        let nonzero: Vec<GroupElement> =
            elements.into_iter().filter(|e| !e.is_zero()).collect();
        let (param_degree, lowest) = match self.space {
            EmSpace::K => (self.n - 1, 1usize),
            EmSpace::E => (self.n, 0usize),
        };
        let tuples = increasing_tuples(lowest, dim as usize, param_degree as usize + 1);
        let mut out = Vec::new();
        // Odometer over sparse assignments: each tuple is either absent or
        // carries one of the nonzero values.
        let mut counters = vec![0usize; tuples.len()];
        loop {
            let mut param = EmSimplex::zero(EmSpace::E, &self.group, param_degree, dim);
            for (slot, &choice) in counters.iter().enumerate() {
                if choice > 0 {
                    param.set(tuples[slot].clone(), nonzero[choice - 1].clone());
                }
            }
            let simplex = match self.space {
                EmSpace::E => param,
                EmSpace::K => param.coboundary().into_space(EmSpace::K),
            };
            if simplex.is_nondegenerate() {
                out.push(simplex);
            }
            // advance the odometer
            let mut pos = 0;
            loop {
                if pos == counters.len() {
                    out.sort_by(|a, b| a.to_gen().cmp(&b.to_gen()));
                    return out;
                }
                counters[pos] += 1;
                if counters[pos] <= nonzero.len() {
                    break;
                }
                counters[pos] = 0;
                pos += 1;
            }
        }
    }
}

/// Strictly increasing `arity`-tuples from `{lowest, ..., top}`.
fn increasing_tuples(lowest: usize, top: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if arity == 0 {
        out.push(Vec::new());
        return out;
    }
    if top + 1 < lowest || top + 1 - lowest < arity {
        return out;
    }
    let mut current: Vec<usize> = (lowest..lowest + arity).collect();
    loop {
        out.push(current.clone());
        // next combination
        let mut i = arity;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] < top - (arity - 1 - i) {
                current[i] += 1;
                for j in i + 1..arity {
                    current[j] = current[j - 1] + 1;
                }
                break;
            }
        }
    }
}

impl SimplicialObject for EmOps {
    fn face(&self, dim: i64, core: &Gen, i: usize) -> Simplex {
        self.decode(dim, core).face(i).canonical_simplex()
    }

    fn basis(&self, dim: i64) -> Option<Vec<Gen>> {
        if !self.group.is_finite() {
            return None;
        }
        if dim == 0 {
            return Some(vec![EmSimplex::zero(self.space, &self.group, self.n, 0).to_gen()]);
        }
        if dim < self.n {
            // Below the cochain degree there are no tuples to carry values:
            // only the iterated degeneracy of the basepoint exists.
            return Some(Vec::new());
        }
        Some(self.enumerate(dim).iter().map(EmSimplex::to_gen).collect())
    }

    fn dimension_bound(&self) -> i64 {
        UNBOUNDED_DIM
    }
}

/// The simplicial set whose `k`-simplices are the `n`-cocycles on the
/// standard `k`-simplex with coefficients in `pi`.
pub fn k_space(pi: &FgAbelianGroup, n: i64) -> SimplicialSet {
    assert!(n >= 1);
    SimplicialSet::new(EmOps {
        space: EmSpace::K,
        group: pi.clone(),
        n,
    })
}

/// The simplicial set of all `n`-cochains on standard simplices; it is
/// contractible and carries the coboundary fibration onto `K(pi, n+1)`.
pub fn e_space(pi: &FgAbelianGroup, n: i64) -> SimplicialSet {
    assert!(n >= 1);
    SimplicialSet::new(EmOps {
        space: EmSpace::E,
        group: pi.clone(),
        n,
    })
}

/// The coboundary map `E(pi, n) -> K(pi, n+1)`.
pub fn delta_fibration(pi: &FgAbelianGroup, n: i64) -> SimplicialMap {
    assert!(n >= 1);
    let source = e_space(pi, n);
    let target = k_space(pi, n + 1);
    let group = pi.clone();
    SimplicialMap::new(source, target, move |dim, core| {
        EmSimplex::from_gen(EmSpace::E, &group, n, dim, core)
            .coboundary()
            .into_space(EmSpace::K)
            .canonical_simplex()
    })
}

/// The fibre inclusion `K(pi, n) -> E(pi, n)` (cocycles are cochains).
pub fn cocycle_inclusion(pi: &FgAbelianGroup, n: i64) -> SimplicialMap {
    assert!(n >= 1);
    let source = k_space(pi, n);
    let target = e_space(pi, n);
    let group = pi.clone();
    SimplicialMap::new(source, target, move |dim, core| {
        EmSimplex::from_gen(EmSpace::K, &group, n, dim, core)
            .into_space(EmSpace::E)
            .canonical_simplex()
    })
}

// ---------------------------------------------------------------------------
// the evaluation bijection

/// The cocycle represented by a simplicial map `f: Y -> K(pi, n)`: the value
/// on a nondegenerate `n`-simplex of `Y` is the top-tuple value of its image.
pub fn ev(f: &SimplicialMap, source_chains: &Complex, pi: &FgAbelianGroup, n: i64) -> Cochain {
    let f = f.clone();
    let group = pi.clone();
    let top: Vec<usize> = (0..=n as usize).collect();
    Cochain::new(source_chains.clone(), n, pi.clone(), move |g| {
        let image = f.apply_core(n, g);
        em_simplex_value(EmSpace::K, &group, n, &image).value(&top)
    })
}

/// The simplicial map `Y -> K(pi, n)` represented by a cocycle `z` on the
/// chains of `Y`.  A simplex maps to the cochain recording `z` on each of its
/// nondegenerate faces of dimension `n`.
///
/// When the chain complex of `Y` can enumerate its basis one degree above
/// `z`, the cocycle condition is checked eagerly and a failure reports
/// [`EmError::NotACocycle`]; otherwise the condition is trusted (it is
/// rechecked degreewise on every simplex actually produced in debug builds).
pub fn ev_inverse(z: &Cochain, y: &SimplicialSet) -> Result<SimplicialMap, EmError> {
    let chains = z.complex().clone();
    if let Some(basis) = chains.basis(z.degree() + 1) {
        for g in basis {
            if !z.evaluate(&chains.d(&Chain::gen(z.degree() + 1, g))).is_zero() {
                return Err(EmError::NotACocycle);
            }
        }
    }
    let target = k_space(z.coefficients(), z.degree());
    Ok(cochain_map(z, y, target, EmSpace::K))
}

/// The simplicial map `Y -> E(pi, n)` represented by an arbitrary cochain.
pub fn ev_inverse_e(z: &Cochain, y: &SimplicialSet) -> SimplicialMap {
    let target = e_space(z.coefficients(), z.degree());
    cochain_map(z, y, target, EmSpace::E)
}

/// [`ev_inverse`] without the eager cocycle scan, for callers that have
/// already certified `δz = 0` by other means (the scan can be prohibitively
/// large on enumerable-but-huge complexes).  Every simplex image still
/// rechecks the cocycle condition in debug builds.
pub(crate) fn ev_inverse_trusted(z: &Cochain, y: &SimplicialSet) -> SimplicialMap {
    let target = k_space(z.coefficients(), z.degree());
    cochain_map(z, y, target, EmSpace::K)
}

fn cochain_map(
    z: &Cochain,
    y: &SimplicialSet,
    target: SimplicialSet,
    space: EmSpace,
) -> SimplicialMap {
    let z = z.clone();
    let y = y.clone();
    let n = z.degree();
    let group = z.coefficients().clone();
    SimplicialMap::new(y.clone(), target, move |dim, core| {
        let s = Simplex::nondegenerate(dim, core.clone());
        let mut out = EmSimplex::zero(space, &group, n, dim);
        for tuple in increasing_tuples(0, dim as usize, n as usize + 1) {
            let face = y.apply_operator(&s, &tuple);
            if face.is_nondegenerate() {
                out.set(tuple, z.value(face.core()));
            }
        }
        if space == EmSpace::K {
            debug_assert!(out.is_cocycle(), "cochain map produced a non-cocycle");
        }
        out.canonical_simplex()
    })
}

/// The cocycle on the chains of `K(pi, n)` represented by the identity map;
/// its class generates `H^n(K(pi, n); pi)`.
pub fn fundamental_cocycle(
    set: &SimplicialSet,
    chains: &Complex,
    pi: &FgAbelianGroup,
    n: i64,
) -> Cochain {
    ev(&SimplicialMap::identity(set), chains, pi, n)
}

// ---------------------------------------------------------------------------
// the fibre action

/// Translates the fibre coordinate of a simplex of a total space built from
/// component pairs (products of a base with `E(pi, n)` or `K(pi, n)`, and
/// their twisted and pullback variants) by a cochain simplex `kappa`.
///
/// `base` and `fiber` are the component simplicial sets, `dim` the simplex
/// dimension.  Errors when `kappa` does not match the fibre family or the
/// dimension.
pub fn action(
    base: &SimplicialSet,
    fiber: &SimplicialSet,
    dim: i64,
    y: &Simplex,
    kappa: &EmSimplex,
) -> Result<Simplex, EmError> {
    if y.dim() != dim || kappa.dim() != dim {
        return Err(EmError::DimensionMismatch);
    }
    let (u, v) = crate::simplicial::pair_parts(y.core_dim(), y.core());
    let mut u_full = u;
    let mut v_full = v;
    for &j in y.word().iter().rev() {
        u_full = u_full.degenerate(j);
        v_full = v_full.degenerate(j);
    }
    let v_value = em_simplex_value(kappa.space(), kappa.group(), kappa.cochain_degree(), &v_full);
    let translated = v_value.add(kappa)?;
    let v_new = translated.canonical_simplex();
    Ok(crate::simplicial::canonical_pair(base, fiber, u_full, v_new))
}
