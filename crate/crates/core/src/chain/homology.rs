//! Integral homology and group-valued cohomology of effective complexes,
//! computed through Smith normal form.

use super::{Chain, ChainError, Cochain, Complex, Gen};
use crate::abelian::{
    cokernel, integer_kernel, smith_normal_form, solve_integer, Cokernel, FgAbelianGroup,
    GroupElement, IntMatrix,
};
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::HashMap;
use std::sync::Arc;

fn chain_to_vec(chain: &Chain, index: &HashMap<Gen, usize>, len: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); len];
    for (g, c) in chain.terms() {
        let i = *index
            .get(g)
            .unwrap_or_else(|| panic!("generator {g:?} missing from basis"));
        v[i] = c.clone();
    }
    v
}

fn boundary_matrix(c: &Complex, degree: i64, rows: &HashMap<Gen, usize>, cols: &[Gen]) -> IntMatrix {
    let columns: Vec<Vec<BigInt>> = cols
        .iter()
        .map(|g| chain_to_vec(&c.d_gen(degree, g), rows, rows.len()))
        .collect();
    IntMatrix::from_columns(rows.len(), &columns)
}

fn index_of(basis: &[Gen]) -> HashMap<Gen, usize> {
    basis
        .iter()
        .enumerate()
        .map(|(i, g)| (g.clone(), i))
        .collect()
}

/// Homology of an effective complex in one degree, together with a total
/// classifying map.
pub struct HomologyData {
    group: FgAbelianGroup,
    generators: Vec<Chain>,
    degree: i64,
    complex: Complex,
    basis: Vec<Gen>,
    index: HashMap<Gen, usize>,
    v_inv: IntMatrix,
    rank: usize,
    coke: Cokernel,
}

impl HomologyData {
    pub fn group(&self) -> &FgAbelianGroup {
        &self.group
    }

    /// Cycles representing the canonical generators of the group, in order.
    pub fn generators(&self) -> &[Chain] {
        &self.generators
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// Total linear extension of the quotient map: defined on every chain of
    /// the degree, restricting to the homology class on cycles.  The kernel
    /// coordinates are read off through the fixed Smith decomposition, so the
    /// splitting is deterministic.
    pub fn rho(&self, chain: &Chain) -> GroupElement {
        assert_eq!(chain.degree(), self.degree);
        let vec = chain_to_vec(chain, &self.index, self.basis.len());
        let y = self.v_inv.mul_vec(&vec);
        let kernel_coords: Vec<BigInt> = y[self.rank..].to_vec();
        self.coke.project(&kernel_coords)
    }

    /// Class of a cycle.  Debug builds verify the cycle condition.
    pub fn class_of(&self, cycle: &Chain) -> GroupElement {
        debug_assert!(
            self.complex.d(cycle).is_zero(),
            "class_of expects a cycle"
        );
        self.rho(cycle)
    }
}

/// Computes `H_n` of an effective complex: the group, representing cycles
/// for its generators, and the classifying map.
pub fn homology(c: &Complex, n: i64) -> Result<HomologyData, ChainError> {
    let basis = c.basis_checked(n)?;
    let below = if n == 0 { Vec::new() } else { c.basis_checked(n - 1)? };
    let above = c.basis_checked(n + 1)?;
    let index = index_of(&basis);
    let index_below = index_of(&below);

    let d_n = boundary_matrix(c, n, &index_below, &basis);
    let snf = smith_normal_form(&d_n);
    let rank = snf.rank();
    let v = snf.v.clone();
    let v_inv = v
        .integer_inverse()
        .expect("Smith transform must be unimodular");
    let kernel_dim = basis.len() - rank;

    // Boundaries from one degree up, written in kernel coordinates.
    let mut rel_rows: Vec<Vec<BigInt>> = Vec::with_capacity(above.len());
    for g in &above {
        let vec = chain_to_vec(&c.d_gen(n + 1, g), &index, basis.len());
        let y = v_inv.mul_vec(&vec);
        debug_assert!(
            y[..rank].iter().all(|x| x.is_zero()),
            "boundary must be a cycle"
        );
        rel_rows.push(y[rank..].to_vec());
    }
    let relations = IntMatrix::from_fn(rel_rows.len(), kernel_dim, |i, j| rel_rows[i][j].clone());
    let coke = cokernel(&relations);
    let group = coke.group.clone();

    let mut generators = Vec::new();
    for i in 0..group.rank() {
        let mut coords = vec![BigInt::zero(); group.rank()];
        coords[i] = BigInt::from(1);
        let elem = group.element(coords);
        let kc = coke.lift(&elem);
        let mut full = vec![BigInt::zero(); basis.len()];
        for (j, val) in kc.iter().enumerate() {
            full[rank + j] = val.clone();
        }
        let x = v.mul_vec(&full);
        let mut chain = Chain::zero(n);
        for (j, coeff) in x.iter().enumerate() {
            chain.add_term(basis[j].clone(), coeff.clone());
        }
        generators.push(chain);
    }

    Ok(HomologyData {
        group,
        generators,
        degree: n,
        complex: c.clone(),
        basis,
        index,
        v_inv,
        rank,
        coke,
    })
}

/// The total classifying map in degree `n` (see [`HomologyData::rho`]).
pub fn rho(c: &Complex, n: i64) -> Result<HomologyData, ChainError> {
    homology(c, n)
}

/// Cohomology of an effective complex with coefficients in a finitely
/// generated abelian group, with constructive witnesses.
pub struct CohomologyData {
    group: FgAbelianGroup,
    coefficients: FgAbelianGroup,
    complex: Complex,
    degree: i64,
    basis: Vec<Gen>,
    basis_below: Vec<Gen>,
    basis_above: Vec<Gen>,
    /// Columns generate the lattice of integer vectors representing cocycles.
    cocycle_lattice: IntMatrix,
    /// Columns generate coboundaries plus coefficient relations.
    boundary_lattice: IntMatrix,
    coke: Cokernel,
}

impl CohomologyData {
    pub fn group(&self) -> &FgAbelianGroup {
        &self.group
    }

    pub fn coefficients(&self) -> &FgAbelianGroup {
        &self.coefficients
    }

    fn pi_rank(&self) -> usize {
        self.coefficients.rank()
    }

    fn cochain_to_vec(&self, z: &Cochain) -> Vec<BigInt> {
        let mut out = Vec::with_capacity(self.basis.len() * self.pi_rank());
        for g in &self.basis {
            out.extend(z.value(g).coords().iter().cloned());
        }
        out
    }

    fn vec_to_cochain(&self, vec: &[BigInt], degree: i64, basis: &[Gen]) -> Cochain {
        let pi = self.coefficients.clone();
        let r = self.pi_rank();
        let mut table: HashMap<Gen, GroupElement> = HashMap::new();
        for (i, g) in basis.iter().enumerate() {
            let coords = vec[i * r..(i + 1) * r].to_vec();
            table.insert(g.clone(), pi.element(coords));
        }
        let table = Arc::new(table);
        let pi2 = pi.clone();
        Cochain::new(self.complex.clone(), degree, pi, move |g| {
            table.get(g).cloned().unwrap_or_else(|| pi2.zero_element())
        })
    }

    fn check_cocycle(&self, z: &Cochain) -> Result<(), ChainError> {
        for tau in &self.basis_above {
            let val = z.evaluate(&self.complex.d_gen(self.degree + 1, tau));
            if !val.is_zero() {
                return Err(ChainError::NotACocycle);
            }
        }
        Ok(())
    }

    /// Cohomology class of a cocycle; errors when the coboundary does not
    /// vanish on the basis one degree up.
    pub fn class_of_cocycle(&self, z: &Cochain) -> Result<GroupElement, ChainError> {
        self.check_cocycle(z)?;
        let vec = self.cochain_to_vec(z);
        let y = solve_integer(&self.cocycle_lattice, &vec)
            .expect("cocycle vector must lie in the cocycle lattice");
        Ok(self.coke.project(&y))
    }

    /// For a cocycle of trivial class, a cochain `μ` one degree lower with
    /// `δμ = z`; `None` when the class is nonzero.
    pub fn coboundary_witness(&self, z: &Cochain) -> Result<Option<Cochain>, ChainError> {
        self.check_cocycle(z)?;
        let vec = self.cochain_to_vec(z);
        match solve_integer(&self.boundary_lattice, &vec) {
            None => Ok(None),
            Some(w) => {
                let keep = self.basis_below.len() * self.pi_rank();
                let below = self.basis_below.clone();
                let mu = self.vec_to_cochain(&w[..keep], self.degree - 1, &below);
                Ok(Some(mu))
            }
        }
    }

    /// A cocycle representing the given class.
    pub fn representative(&self, class: &GroupElement) -> Cochain {
        let y = self.coke.lift(class);
        let vec = self.cocycle_lattice.mul_vec(&y);
        let basis = self.basis.clone();
        self.vec_to_cochain(&vec, self.degree, &basis)
    }

    /// The zero cochain in this degree.
    pub fn zero_cochain(&self) -> Cochain {
        Cochain::zero(self.complex.clone(), self.degree, self.coefficients.clone())
    }
}

/// Computes `H^n(C; π)` for an effective complex `C` and f.g. abelian `π`.
///
/// Integer vectors of length `|basis_n| · rank(π)` represent cochains; the
/// lattice of cocycle representatives and the lattice of coboundaries plus
/// coefficient relations are produced by integer kernels, and the quotient
/// is put in Smith form.
pub fn cohomology(c: &Complex, n: i64, pi: &FgAbelianGroup) -> Result<CohomologyData, ChainError> {
    let basis = c.basis_checked(n)?;
    let basis_below = if n == 0 { Vec::new() } else { c.basis_checked(n - 1)? };
    let basis_above = c.basis_checked(n + 1)?;
    let r = pi.rank();
    let torsion = pi.torsion().to_vec();
    let n_cols = basis.len() * r;

    // Relation block for one π value: t_k on the k-th torsion coordinate.
    let pi_relations = crate::abelian::relation_matrix(pi);

    let block_relations = |count: usize| -> IntMatrix {
        let tcount = torsion.len();
        IntMatrix::from_fn(count * r, count * tcount, |i, j| {
            let (gi, ci) = (i / r, i % r);
            let (gj, cj) = (j / tcount, j % tcount);
            if gi == gj {
                pi_relations.get(ci, cj).clone()
            } else {
                BigInt::zero()
            }
        })
    };

    // Coboundary matrix Δ_k: value of δz on each generator one degree up.
    let delta_matrix = |upper: &[Gen], upper_degree: i64| -> IntMatrix {
        let rows = upper.len() * r;
        IntMatrix::from_fn(rows, n_cols, |i, j| {
            let (ti, ci) = (i / r, i % r);
            let (sj, cj) = (j / r, j % r);
            if ci != cj {
                return BigInt::zero();
            }
            let boundary = c.d_gen(upper_degree, &upper[ti]);
            boundary.coefficient(&basis[sj])
        })
    };

    let delta_n = delta_matrix(&basis_above, n + 1);
    let kernel_stack = delta_n.hstack(&block_relations(basis_above.len()));
    let kernel_cols = integer_kernel(&kernel_stack);
    let cocycle_lattice = IntMatrix::from_fn(n_cols, kernel_cols.cols(), |i, j| {
        kernel_cols.get(i, j).clone()
    });

    // Coboundaries: δ of every unit cochain one degree down, then π-relations.
    let coboundary_cols = {
        let below_cols = basis_below.len() * r;
        IntMatrix::from_fn(n_cols, below_cols, |i, j| {
            let (si, ci) = (i / r, i % r);
            let (gj, cj) = (j / r, j % r);
            if ci != cj {
                return BigInt::zero();
            }
            // coefficient of basis_below[gj] in d(basis[si])
            let boundary = c.d_gen(n, &basis[si]);
            boundary.coefficient(&basis_below[gj])
        })
    };
    let boundary_lattice = coboundary_cols.hstack(&block_relations(basis.len()));

    // Relations among the cocycle generators: combinations landing in the
    // boundary lattice.
    let rel_stack = cocycle_lattice.hstack(&boundary_lattice);
    let rel_kernel = integer_kernel(&rel_stack);
    let k = cocycle_lattice.cols();
    let relations = IntMatrix::from_fn(rel_kernel.cols(), k, |i, j| rel_kernel.get(j, i).clone());
    let coke = cokernel(&relations);

    Ok(CohomologyData {
        group: coke.group.clone(),
        coefficients: pi.clone(),
        complex: c.clone(),
        degree: n,
        basis,
        basis_below,
        basis_above,
        cocycle_lattice,
        boundary_lattice,
        coke,
    })
}
