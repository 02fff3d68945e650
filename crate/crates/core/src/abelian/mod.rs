//! Integer linear algebra and finitely generated abelian groups.
//!
//! Everything here is exact: matrices hold [`BigInt`] entries and the Smith
//! normal form drives every quotient, solvability and canonicalisation
//! question asked by the rest of the crate.

mod hom;
mod matrix;
mod smith;

pub use hom::{enumerate_isomorphisms, AbHom, EnumerationError};
pub(crate) use hom::relation_matrix;
pub use matrix::IntMatrix;
pub use smith::{smith_normal_form, SmithNormalForm};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A finitely generated abelian group in canonical form:
/// `Z^free_rank + Z/t_1 + ... + Z/t_k` with `t_1 | t_2 | ... | t_k`
/// and every `t_i >= 2`.
///
/// Two groups are isomorphic iff their canonical forms are equal, so the
/// derived `PartialEq` decides isomorphism.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FgAbelianGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl FgAbelianGroup {
    /// Builds a group from any list of torsion numbers, normalising on the
    /// way in: zero entries add to the free rank, units are dropped, and the
    /// rest is rewritten into a divisibility chain.
    pub fn new(free_rank: usize, torsion: Vec<BigInt>) -> Self {
        let mut free = free_rank;
        let mut tors: Vec<BigInt> = Vec::new();
        for t in torsion {
            let t = t.abs();
            if t.is_zero() {
                free += 1;
            } else if !t.is_one() {
                tors.push(t);
            }
        }
        // Elementary divisor normalisation: repeatedly replace a pair
        // (a, b) by (gcd, lcm) until the chain condition holds.
        let mut changed = true;
        while changed {
            changed = false;
            for i in 0..tors.len() {
                for j in i + 1..tors.len() {
                    if !(&tors[j] % &tors[i]).is_zero() {
                        let g = tors[i].gcd(&tors[j]);
                        let l = &tors[i] / &g * &tors[j];
                        tors[i] = g;
                        tors[j] = l;
                        changed = true;
                    }
                }
            }
        }
        tors.retain(|t| !t.is_one());
        tors.sort();
        FgAbelianGroup { free_rank: free, torsion: tors }
    }

    pub fn trivial() -> Self {
        FgAbelianGroup { free_rank: 0, torsion: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        FgAbelianGroup { free_rank: rank, torsion: Vec::new() }
    }

    pub fn cyclic(order: u64) -> Self {
        FgAbelianGroup::new(0, vec![BigInt::from(order)])
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    /// Torsion coefficients in ascending divisibility order, each `>= 2`.
    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    /// Number of coordinates of an element: free ones first, then one per
    /// torsion coefficient.
    pub fn rank(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        if self.free_rank > 0 {
            return None;
        }
        let mut n = BigInt::one();
        for t in &self.torsion {
            n *= t;
        }
        Some(n)
    }

    /// Order of the torsion coordinate `i` of an element.
    fn coord_modulus(&self, i: usize) -> Option<&BigInt> {
        if i < self.free_rank {
            None
        } else {
            Some(&self.torsion[i - self.free_rank])
        }
    }

    /// Reduces raw coordinates into the canonical range: torsion coordinate
    /// `i` lands in `[0, t_i)`.
    pub fn reduce_coords(&self, coords: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(coords.len(), self.rank(), "coordinate length mismatch");
        coords
            .iter()
            .enumerate()
            .map(|(i, c)| match self.coord_modulus(i) {
                None => c.clone(),
                Some(t) => c.mod_floor(t),
            })
            .collect()
    }

    pub fn element(&self, coords: Vec<BigInt>) -> GroupElement {
        let coords = self.reduce_coords(&coords);
        GroupElement { group: self.clone(), coords }
    }

    pub fn element_from_i64(&self, coords: &[i64]) -> GroupElement {
        self.element(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero_element(&self) -> GroupElement {
        GroupElement {
            group: self.clone(),
            coords: vec![BigInt::zero(); self.rank()],
        }
    }

    /// All elements of a finite group in lexicographic coordinate order.
    pub fn elements(&self) -> Result<Vec<GroupElement>, EnumerationError> {
        if !self.is_finite() {
            return Err(EnumerationError::InfiniteEnumeration);
        }
        let mut out = vec![self.zero_element()];
        for (i, t) in self.torsion.iter().enumerate() {
            let t: u64 = t.try_into().map_err(|_| EnumerationError::TooLarge)?;
            let mut next = Vec::with_capacity(out.len() * t as usize);
            for e in &out {
                for v in 0..t {
                    let mut c = e.coords.clone();
                    c[i] = BigInt::from(v);
                    next.push(GroupElement { group: self.clone(), coords: c });
                }
            }
            out = next;
            if out.len() > 4_000_000 {
                return Err(EnumerationError::TooLarge);
            }
        }
        Ok(out)
    }
}

impl std::fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl std::fmt::Debug for FgAbelianGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self}")
    }
}

/// An element of an [`FgAbelianGroup`], stored as reduced coordinates with
/// respect to the canonical generators (free generators first).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    group: FgAbelianGroup,
    coords: Vec<BigInt>,
}

impl GroupElement {
    pub fn group(&self) -> &FgAbelianGroup {
        &self.group
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &GroupElement) -> GroupElement {
        assert_eq!(self.group, other.group, "elements of different groups");
        let coords: Vec<BigInt> = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        self.group.element(coords)
    }

    pub fn neg(&self) -> GroupElement {
        let coords: Vec<BigInt> = self.coords.iter().map(|c| -c).collect();
        self.group.element(coords)
    }

    pub fn sub(&self, other: &GroupElement) -> GroupElement {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigInt) -> GroupElement {
        let coords: Vec<BigInt> = self.coords.iter().map(|c| c * k).collect();
        self.group.element(coords)
    }

    /// Additive order; `None` for elements of infinite order.
    pub fn order(&self) -> Option<BigInt> {
        for i in 0..self.group.free_rank {
            if !self.coords[i].is_zero() {
                return None;
            }
        }
        let mut n = BigInt::one();
        for (c, t) in self.coords[self.group.free_rank..]
            .iter()
            .zip(&self.group.torsion)
        {
            if !c.is_zero() {
                n = n.lcm(&(t / t.gcd(c)));
            }
        }
        Some(n)
    }
}

impl std::fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({:?} in {})", self.coords, self.group)
    }
}

/// Presentation quotient `Z^n / (row lattice of `relations`)` where `n` is
/// the number of columns, together with the data needed to map vectors into
/// canonical coordinates and to lift canonical generators back.
pub struct Cokernel {
    pub group: FgAbelianGroup,
    /// Unimodular change of basis: canonical coordinates of `x` are read off
    /// `transform * x` at the positions in `kept`.
    transform: IntMatrix,
    transform_inv: IntMatrix,
    /// Row indices of `transform * x` carrying the canonical coordinates,
    /// free positions first, then torsion in ascending order.
    kept: Vec<usize>,
}

impl Cokernel {
    /// Canonical coordinates of a vector `x` of length `relations.cols()`.
    pub fn project(&self, x: &[BigInt]) -> GroupElement {
        let w = self.transform.mul_vec(x);
        let coords: Vec<BigInt> = self.kept.iter().map(|&i| w[i].clone()).collect();
        self.group.element(coords)
    }

    /// A preferred preimage of a group element under [`Cokernel::project`].
    pub fn lift(&self, e: &GroupElement) -> Vec<BigInt> {
        assert_eq!(*e.group(), self.group);
        let n = self.transform.rows();
        let mut w = vec![BigInt::zero(); n];
        for (&pos, c) in self.kept.iter().zip(e.coords()) {
            w[pos] = c.clone();
        }
        self.transform_inv.mul_vec(&w)
    }

    pub fn ambient_rank(&self) -> usize {
        self.transform.rows()
    }
}

/// Quotient of `Z^cols(relations)` by the lattice spanned by the rows of
/// `relations`.
pub fn cokernel(relations: &IntMatrix) -> Cokernel {
    let mt = relations.transpose();
    let snf = smith_normal_form(&mt);
    let n = mt.rows();
    let r = mt.cols().min(n);

    // In coordinates w = U x the relation lattice is spanned by d_i * e_i,
    // so coordinate i survives as Z/d_i (dropped if d_i = 1, free if d_i = 0
    // or i beyond the diagonal).
    let mut free_pos = Vec::new();
    let mut tors_pos = Vec::new();
    let mut torsion = Vec::new();
    for i in 0..n {
        let d = if i < r { snf.d.get(i, i).clone() } else { BigInt::zero() };
        if d.is_zero() {
            free_pos.push(i);
        } else if !d.is_one() {
            tors_pos.push(i);
            torsion.push(d);
        }
    }
    let group = FgAbelianGroup { free_rank: free_pos.len(), torsion };
    let mut kept = free_pos;
    kept.extend(tors_pos);
    let transform_inv = snf
        .u
        .integer_inverse()
        .expect("smith transform is unimodular");
    Cokernel { group, transform: snf.u, transform_inv, kept }
}

/// Solves `m * x = b` over the integers.
pub fn solve_integer(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(b.len(), m.rows(), "right-hand side length mismatch");
    let snf = smith_normal_form(m);
    // m = U^-1 D V^-1, so m x = b becomes D y = U b with x = V y.
    let ub = snf.u.mul_vec(b);
    let mut y = vec![BigInt::zero(); m.cols()];
    let r = m.rows().min(m.cols());
    for i in 0..m.rows() {
        let d = if i < r { snf.d.get(i, i) } else { &BigInt::ZERO };
        if d.is_zero() {
            if !ub[i].is_zero() {
                return None;
            }
        } else {
            let (q, rem) = ub[i].div_rem(d);
            if !rem.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    Some(snf.v.mul_vec(&y))
}

/// A basis (as columns) of the lattice `{ x : m x = 0 }`.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let r = (0..m.rows().min(m.cols()))
        .take_while(|&i| !snf.d.get(i, i).is_zero())
        .count();
    // Kernel of D is spanned by e_{r..cols}; push through x = V y.
    let mut cols = Vec::new();
    for j in r..m.cols() {
        cols.push(snf.v.column(j));
    }
    IntMatrix::from_columns(m.cols(), &cols)
}

#[cfg(test)]
mod tests;
