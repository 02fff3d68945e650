use super::{solve_integer, FgAbelianGroup, GroupElement, IntMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum EnumerationError {
    #[error("enumeration over a group with elements of infinite order")]
    InfiniteEnumeration,
    #[error("enumeration exceeds the supported size")]
    TooLarge,
}

/// Homomorphism between finitely generated abelian groups, stored as an
/// integer matrix on canonical generators (one column per domain generator).
///
/// The matrix is kept in reduced form: rows indexed by torsion generators of
/// the codomain are reduced modulo their coefficient, which makes the derived
/// equality decide equality of homomorphisms.
#[derive(Clone, PartialEq, Eq)]
pub struct AbHom {
    domain: FgAbelianGroup,
    codomain: FgAbelianGroup,
    matrix: IntMatrix,
}

impl AbHom {
    /// Checks that torsion relations of the domain map to zero; a matrix
    /// failing this does not define a homomorphism.
    pub fn try_new(
        domain: FgAbelianGroup,
        codomain: FgAbelianGroup,
        matrix: IntMatrix,
    ) -> Option<AbHom> {
        assert_eq!(matrix.rows(), codomain.rank(), "matrix height mismatch");
        assert_eq!(matrix.cols(), domain.rank(), "matrix width mismatch");
        for j in domain.free_rank()..domain.rank() {
            let t = &domain.torsion()[j - domain.free_rank()];
            for i in 0..codomain.rank() {
                let v = t * matrix.get(i, j);
                match codomain.coord_modulus(i) {
                    None => {
                        if !v.is_zero() {
                            return None;
                        }
                    }
                    Some(ti) => {
                        if !(&v % ti).is_zero() {
                            return None;
                        }
                    }
                }
            }
        }
        Some(AbHom { matrix: reduce_matrix(&codomain, matrix), domain, codomain })
    }

    pub fn new(domain: FgAbelianGroup, codomain: FgAbelianGroup, matrix: IntMatrix) -> AbHom {
        AbHom::try_new(domain, codomain, matrix)
            .expect("matrix does not respect the domain relations")
    }

    pub fn from_i64(
        domain: FgAbelianGroup,
        codomain: FgAbelianGroup,
        rows: &[Vec<i64>],
    ) -> AbHom {
        AbHom::new(domain, codomain, IntMatrix::from_rows(rows))
    }

    pub fn identity(group: &FgAbelianGroup) -> AbHom {
        AbHom {
            domain: group.clone(),
            codomain: group.clone(),
            matrix: IntMatrix::identity(group.rank()),
        }
    }

    pub fn zero(domain: &FgAbelianGroup, codomain: &FgAbelianGroup) -> AbHom {
        AbHom {
            domain: domain.clone(),
            codomain: codomain.clone(),
            matrix: IntMatrix::zero(codomain.rank(), domain.rank()),
        }
    }

    pub fn domain(&self) -> &FgAbelianGroup {
        &self.domain
    }

    pub fn codomain(&self) -> &FgAbelianGroup {
        &self.codomain
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &GroupElement) -> GroupElement {
        assert_eq!(*x.group(), self.domain, "element not in the domain");
        self.codomain.element(self.matrix.mul_vec(x.coords()))
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &AbHom) -> AbHom {
        assert_eq!(other.codomain, self.domain, "composition mismatch");
        AbHom {
            domain: other.domain.clone(),
            codomain: self.codomain.clone(),
            matrix: reduce_matrix(&self.codomain, self.matrix.mul(&other.matrix)),
        }
    }

    pub fn sub(&self, other: &AbHom) -> AbHom {
        assert_eq!(self.domain, other.domain);
        assert_eq!(self.codomain, other.codomain);
        let m = IntMatrix::from_fn(self.matrix.rows(), self.matrix.cols(), |i, j| {
            self.matrix.get(i, j) - other.matrix.get(i, j)
        });
        AbHom {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            matrix: reduce_matrix(&self.codomain, m),
        }
    }

    pub fn is_identity_map(&self) -> bool {
        self.domain == self.codomain && *self == AbHom::identity(&self.domain)
    }

    pub fn is_zero_map(&self) -> bool {
        self.matrix.is_zero()
    }

    /// Two-sided inverse, or `None` when the map is not an isomorphism.
    pub fn inverse(&self) -> Option<AbHom> {
        let relations = relation_matrix(&self.codomain);
        let aug = self.matrix.hstack(&relations);
        let mut cols = Vec::with_capacity(self.codomain.rank());
        for i in 0..self.codomain.rank() {
            let mut e = vec![BigInt::zero(); self.codomain.rank()];
            e[i] = BigInt::one();
            // Preimage of the i-th canonical generator, allowing slack along
            // the codomain relations.
            let sol = solve_integer(&aug, &e)?;
            cols.push(sol[..self.domain.rank()].to_vec());
        }
        let candidate = AbHom::try_new(
            self.codomain.clone(),
            self.domain.clone(),
            IntMatrix::from_columns(self.domain.rank(), &cols),
        )?;
        if candidate.compose(self).is_identity_map() && self.compose(&candidate).is_identity_map()
        {
            Some(candidate)
        } else {
            None
        }
    }

    pub fn is_isomorphism(&self) -> bool {
        self.inverse().is_some()
    }
}

impl std::fmt::Debug for AbHom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "AbHom {} -> {} {:?}", self.domain, self.codomain, self.matrix)
    }
}

fn reduce_matrix(codomain: &FgAbelianGroup, m: IntMatrix) -> IntMatrix {
    IntMatrix::from_fn(m.rows(), m.cols(), |i, j| match codomain.coord_modulus(i) {
        None => m.get(i, j).clone(),
        Some(t) => m.get(i, j).mod_floor(t),
    })
}

/// Columns spanning the relation lattice of the canonical presentation:
/// `t_k` times the k-th torsion generator.
pub(crate) fn relation_matrix(group: &FgAbelianGroup) -> IntMatrix {
    let mut m = IntMatrix::zero(group.rank(), group.torsion().len());
    for (k, t) in group.torsion().iter().enumerate() {
        m.set(group.free_rank() + k, k, t.clone());
    }
    m
}

/// Elements `x` of a finite group with `t * x = 0`, in lexicographic
/// coordinate order.
fn elements_killed_by(group: &FgAbelianGroup, t: &BigInt) -> Vec<Vec<BigInt>> {
    assert!(group.is_finite());
    let mut lists: Vec<Vec<BigInt>> = Vec::new();
    for ti in group.torsion() {
        let g = ti.gcd(t);
        let step = ti / &g;
        let count: u64 = (&g).try_into().unwrap_or(u64::MAX);
        lists.push((0..count).map(|k| BigInt::from(k) * &step).collect());
    }
    cartesian(&lists)
}

fn cartesian<T: Clone>(lists: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for list in lists {
        let mut next = Vec::with_capacity(out.len() * list.len());
        for prefix in &out {
            for item in list {
                let mut v = prefix.clone();
                v.push(item.clone());
                next.push(v);
            }
        }
        out = next;
    }
    out
}

const CANDIDATE_LIMIT: usize = 4_000_000;

/// All automorphisms of a finite group, candidate-by-candidate: every matrix
/// whose columns are killed by the corresponding torsion coefficient defines
/// an endomorphism, and the invertible ones are kept.
fn finite_automorphisms(group: &FgAbelianGroup) -> Result<Vec<AbHom>, EnumerationError> {
    assert!(group.is_finite());
    let mut lists = Vec::new();
    let mut total: usize = 1;
    for t in group.torsion() {
        let l = elements_killed_by(group, t);
        total = total.saturating_mul(l.len());
        if total > CANDIDATE_LIMIT {
            return Err(EnumerationError::TooLarge);
        }
        lists.push(l);
    }
    let mut out = Vec::new();
    for cols in cartesian(&lists) {
        let m = IntMatrix::from_columns(group.rank(), &cols);
        let h = AbHom { domain: group.clone(), codomain: group.clone(), matrix: m };
        if h.inverse().is_some() {
            out.push(h);
        }
    }
    Ok(out)
}

/// All isomorphisms between two groups in a fixed deterministic order.
///
/// Supported shapes: any finite group, and free rank one plus torsion (where
/// an isomorphism is a sign on the free generator, a mixing element into the
/// torsion part, and an automorphism of the torsion part).  Higher free rank
/// has infinitely many isomorphisms.
pub fn enumerate_isomorphisms(
    a: &FgAbelianGroup,
    b: &FgAbelianGroup,
) -> Result<Vec<AbHom>, EnumerationError> {
    if a != b {
        return Ok(Vec::new());
    }
    if a.free_rank() >= 2 {
        return Err(EnumerationError::InfiniteEnumeration);
    }
    if a.free_rank() == 0 {
        return finite_automorphisms(a);
    }

    let torsion_part = FgAbelianGroup::new(0, a.torsion().to_vec());
    let autos = finite_automorphisms(&torsion_part)?;
    let mixables = torsion_part.elements()?;
    let n = a.rank();
    let mut out = Vec::new();
    for sign in [1i64, -1] {
        for mix in &mixables {
            for theta in &autos {
                let mut m = IntMatrix::zero(n, n);
                m.set(0, 0, BigInt::from(sign));
                for (k, c) in mix.coords().iter().enumerate() {
                    m.set(1 + k, 0, c.clone());
                }
                for i in 0..theta.matrix.rows() {
                    for j in 0..theta.matrix.cols() {
                        m.set(1 + i, 1 + j, theta.matrix.get(i, j).clone());
                    }
                }
                let h = AbHom { domain: a.clone(), codomain: a.clone(), matrix: m };
                debug_assert!(h.inverse().is_some());
                out.push(h);
            }
        }
    }
    Ok(out)
}
