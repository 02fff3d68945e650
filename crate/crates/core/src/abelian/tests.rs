use super::*;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

/// Independent determinant oracle (fraction-free Gaussian elimination), used
/// to certify that the Smith transforms are unimodular.
fn det_bareiss(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows(), m.cols());
    let n = m.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| m.row(i)).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(s) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                let (q, r) = num.div_rem(&prev);
                assert!(r.is_zero(), "Bareiss division is exact");
                a[i][j] = q;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

fn assert_snf_contract(m: &IntMatrix) {
    let snf = smith_normal_form(m);
    assert_eq!(snf.u.mul(m).mul(&snf.v), snf.d, "u*m*v = d");
    assert_eq!(det_bareiss(&snf.u).magnitude().to_string(), "1");
    assert_eq!(det_bareiss(&snf.v).magnitude().to_string(), "1");
    let r = m.rows().min(m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if i != j {
                assert!(snf.d.get(i, j).is_zero(), "off-diagonal zero");
            }
        }
    }
    let inv = snf.invariants();
    for w in inv.windows(2) {
        assert!((&w[1] % &w[0]).is_zero(), "divisibility chain");
    }
    for i in 0..r {
        assert!(!snf.d.get(i, i).is_negative(), "nonnegative diagonal");
    }
    for i in inv.len()..r {
        assert!(snf.d.get(i, i).is_zero());
    }
}

#[test]
fn smith_small_frozen() {
    let m = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
    let snf = smith_normal_form(&m);
    assert_snf_contract(&m);
    assert_eq!(snf.invariants(), vec![BigInt::from(2), BigInt::from(4)]);
}

#[test]
fn smith_tetrahedron_boundary() {
    // Edge boundaries of the four triangles of the hollow tetrahedron on
    // vertices 0..4; edges ordered 01,02,03,12,13,23, triangles 012,013,023,123.
    let m = IntMatrix::from_rows(&[
        vec![1, -1, 0, 1, 0, 0],
        vec![1, 0, -1, 0, 1, 0],
        vec![0, 1, -1, 0, 0, 1],
        vec![0, 0, 0, 1, -1, 1],
    ]);
    let snf = smith_normal_form(&m.transpose());
    assert_snf_contract(&m.transpose());
    assert_eq!(snf.invariants(), vec![BigInt::one(); 3]);
}

#[test]
fn smith_zero_and_empty() {
    assert_snf_contract(&IntMatrix::zero(3, 2));
    assert_snf_contract(&IntMatrix::zero(0, 4));
    assert_snf_contract(&IntMatrix::zero(4, 0));
    assert_snf_contract(&IntMatrix::zero(0, 0));
    let snf = smith_normal_form(&IntMatrix::zero(3, 2));
    assert!(snf.invariants().is_empty());
}

#[test]
fn group_canonicalisation() {
    let g = FgAbelianGroup::new(0, vec![BigInt::from(2), BigInt::from(3)]);
    assert_eq!(g, FgAbelianGroup::cyclic(6));
    let h = FgAbelianGroup::new(1, vec![BigInt::from(4), BigInt::from(6)]);
    assert_eq!(h.free_rank(), 1);
    assert_eq!(h.torsion(), &[BigInt::from(2), BigInt::from(12)]);
    assert_eq!(h.to_string(), "Z + Z/2 + Z/12");
    let z = FgAbelianGroup::new(0, vec![BigInt::zero(), BigInt::one()]);
    assert_eq!(z, FgAbelianGroup::free(1));
    assert_eq!(FgAbelianGroup::trivial().to_string(), "0");
}

#[test]
fn cokernel_frozen() {
    let m = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
    let c = cokernel(&m);
    assert_eq!(c.group, FgAbelianGroup::new(0, vec![BigInt::from(2), BigInt::from(4)]));
    // The rows themselves must die in the quotient.
    for i in 0..m.rows() {
        assert!(c.project(&m.row(i)).is_zero());
    }
}

#[test]
fn cokernel_with_free_part() {
    // One relation 2x = 0 in Z^2 leaves Z + Z/2.
    let m = IntMatrix::from_rows(&[vec![2, 0]]);
    let c = cokernel(&m);
    assert_eq!(c.group, FgAbelianGroup::new(1, vec![BigInt::from(2)]));
    // Lifting each canonical generator and projecting back is the identity.
    for coords in [vec![1i64, 0], vec![0, 1]] {
        let e = c.group.element_from_i64(&coords);
        let lifted = c.lift(&e);
        assert_eq!(c.project(&lifted), e);
    }
}

#[test]
fn cokernel_no_relations() {
    let c = cokernel(&IntMatrix::zero(0, 3));
    assert_eq!(c.group, FgAbelianGroup::free(3));
}

#[test]
fn solve_frozen() {
    let m = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
    let b = vec![BigInt::from(6), BigInt::from(14)];
    let x = solve_integer(&m, &b).expect("solvable");
    assert_eq!(m.mul_vec(&x), b);
    // 2x + 4y = 1 has no integer solution.
    assert!(solve_integer(&m, &[BigInt::one(), BigInt::from(3)]).is_none());
}

#[test]
fn kernel_of_projection() {
    let m = IntMatrix::from_rows(&[vec![1, 1, 1]]);
    let k = integer_kernel(&m);
    assert_eq!(k.cols(), 2);
    assert!(m.mul(&k).is_zero());
}

#[test]
fn element_arithmetic() {
    let g = FgAbelianGroup::new(1, vec![BigInt::from(6)]);
    let a = g.element_from_i64(&[2, 5]);
    let b = g.element_from_i64(&[-1, 3]);
    assert_eq!(a.add(&b), g.element_from_i64(&[1, 2]));
    assert_eq!(a.neg(), g.element_from_i64(&[-2, 1]));
    assert_eq!(a.scale(&BigInt::from(3)), g.element_from_i64(&[6, 3]));
    assert_eq!(g.element_from_i64(&[0, 2]).order(), Some(BigInt::from(3)));
    assert_eq!(a.order(), None);
    assert_eq!(g.zero_element().order(), Some(BigInt::one()));
}

#[test]
fn element_enumeration() {
    let g = FgAbelianGroup::new(0, vec![BigInt::from(2), BigInt::from(3)]);
    let elems = g.elements().unwrap();
    assert_eq!(elems.len(), 6);
    assert!(elems.iter().all(|e| e.group() == &g));
    assert_eq!(
        FgAbelianGroup::free(1).elements().unwrap_err(),
        EnumerationError::InfiniteEnumeration
    );
}

#[test]
fn hom_well_definedness() {
    let z2 = FgAbelianGroup::cyclic(2);
    let z4 = FgAbelianGroup::cyclic(4);
    // Z/2 -> Z/4 must land in the 2-torsion.
    assert!(AbHom::try_new(z2.clone(), z4.clone(), IntMatrix::from_rows(&[vec![1]])).is_none());
    assert!(AbHom::try_new(z2.clone(), z4.clone(), IntMatrix::from_rows(&[vec![2]])).is_some());
    // Z/2 -> Z has no nonzero maps.
    assert!(AbHom::try_new(z2.clone(), FgAbelianGroup::free(1), IntMatrix::from_rows(&[vec![1]]))
        .is_none());
    let doubling = AbHom::from_i64(z4.clone(), z4.clone(), &[vec![2]]);
    let x = z4.element_from_i64(&[3]);
    assert_eq!(doubling.apply(&x), z4.element_from_i64(&[2]));
}

#[test]
fn hom_inverse() {
    let z4 = FgAbelianGroup::cyclic(4);
    let times3 = AbHom::from_i64(z4.clone(), z4.clone(), &[vec![3]]);
    let inv = times3.inverse().expect("3 is a unit mod 4");
    assert_eq!(inv, times3);
    let times2 = AbHom::from_i64(z4.clone(), z4.clone(), &[vec![2]]);
    assert!(times2.inverse().is_none());

    let z = FgAbelianGroup::free(1);
    assert!(AbHom::from_i64(z.clone(), z.clone(), &[vec![2]]).inverse().is_none());
    assert!(AbHom::from_i64(z.clone(), z.clone(), &[vec![-1]]).inverse().is_some());

    // Mixed group: swap-like iso on Z^2 realised as an explicit matrix.
    let z2f = FgAbelianGroup::free(2);
    let swap = AbHom::from_i64(z2f.clone(), z2f.clone(), &[vec![0, 1], vec![1, 0]]);
    assert_eq!(swap.inverse().unwrap(), swap);
}

#[test]
fn automorphism_counts() {
    // |GL_2(F_2)| = 6.
    let klein = FgAbelianGroup::new(0, vec![BigInt::from(2), BigInt::from(2)]);
    assert_eq!(enumerate_isomorphisms(&klein, &klein).unwrap().len(), 6);
    // |Aut(Z/4 + Z/2)| = 8.
    let g = FgAbelianGroup::new(0, vec![BigInt::from(2), BigInt::from(4)]);
    assert_eq!(enumerate_isomorphisms(&g, &g).unwrap().len(), 8);
    // Units mod 6.
    let z6 = FgAbelianGroup::cyclic(6);
    assert_eq!(enumerate_isomorphisms(&z6, &z6).unwrap().len(), 2);
    // Sign times mixing for Z + Z/2: 2 * 2 * 1.
    let g = FgAbelianGroup::new(1, vec![BigInt::from(2)]);
    let isos = enumerate_isomorphisms(&g, &g).unwrap();
    assert_eq!(isos.len(), 4);
    for iso in &isos {
        assert!(iso.inverse().is_some());
    }
    // Distinct canonical forms admit no isomorphism.
    assert!(enumerate_isomorphisms(&z6, &klein).unwrap().is_empty());
    // Two free generators give infinitely many isomorphisms.
    assert_eq!(
        enumerate_isomorphisms(&FgAbelianGroup::free(2), &FgAbelianGroup::free(2)).unwrap_err(),
        EnumerationError::InfiniteEnumeration
    );
}

#[test]
fn isomorphisms_respect_presentation_normalisation() {
    let a = FgAbelianGroup::new(0, vec![BigInt::from(2), BigInt::from(3)]);
    let b = FgAbelianGroup::cyclic(6);
    let isos = enumerate_isomorphisms(&a, &b).unwrap();
    assert_eq!(isos.len(), 2);
    for iso in isos {
        assert!(iso.inverse().is_some());
    }
}

fn small_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(-20i64..20, c), r)
            .prop_map(|rows| IntMatrix::from_rows(&rows))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prop_snf_contract(m in small_matrix()) {
        assert_snf_contract(&m);
    }

    #[test]
    fn prop_solve_roundtrip(m in small_matrix(), xs in proptest::collection::vec(-9i64..9, 4)) {
        let x: Vec<BigInt> = xs.iter().take(m.cols()).map(|&v| BigInt::from(v)).collect();
        if x.len() == m.cols() {
            let b = m.mul_vec(&x);
            let sol = solve_integer(&m, &b).expect("constructed to be solvable");
            prop_assert_eq!(m.mul_vec(&sol), b);
        }
    }

    #[test]
    fn prop_cokernel_kills_relations(m in small_matrix()) {
        let c = cokernel(&m);
        for i in 0..m.rows() {
            prop_assert!(c.project(&m.row(i)).is_zero());
        }
        // project is additive.
        let x: Vec<BigInt> = (0..m.cols()).map(|j| BigInt::from(j as i64 + 1)).collect();
        let y: Vec<BigInt> = (0..m.cols()).map(|j| BigInt::from(2 - j as i64)).collect();
        let sum: Vec<BigInt> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        prop_assert_eq!(c.project(&sum), c.project(&x).add(&c.project(&y)));
    }

    #[test]
    fn prop_cokernel_lift_section(m in small_matrix()) {
        let c = cokernel(&m);
        let rank = c.group.rank();
        for i in 0..rank {
            let mut coords = vec![BigInt::zero(); rank];
            coords[i] = BigInt::one();
            let e = c.group.element(coords);
            prop_assert_eq!(c.project(&c.lift(&e)), e);
        }
    }

    #[test]
    fn prop_kernel_contract(m in small_matrix()) {
        let k = integer_kernel(&m);
        prop_assert!(m.mul(&k).is_zero());
        // Columns are independent: the kernel matrix has full column rank.
        let snf = smith_normal_form(&k);
        prop_assert_eq!(snf.rank(), k.cols());
    }
}
