use super::*;
use crate::chain::verify_reduction;
use crate::simplicial::from_facets;

fn boundary_of_tetrahedron() -> SimplicialSet {
    from_facets(4, &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]).unwrap()
}

fn boundary_of_four_simplex() -> SimplicialSet {
    from_facets(
        5,
        &[
            vec![0, 1, 2, 3],
            vec![0, 1, 2, 4],
            vec![0, 1, 3, 4],
            vec![0, 2, 3, 4],
            vec![1, 2, 3, 4],
        ],
    )
    .unwrap()
}

fn octahedron() -> SimplicialSet {
    from_facets(
        6,
        &[
            vec![0, 1, 2],
            vec![0, 2, 3],
            vec![0, 3, 4],
            vec![0, 1, 4],
            vec![1, 2, 5],
            vec![2, 3, 5],
            vec![3, 4, 5],
            vec![1, 4, 5],
        ],
    )
    .unwrap()
}

/// Six-vertex triangulation of the real projective plane (antipodal
/// quotient of the icosahedron): every pair of vertices is an edge and
/// every edge lies in exactly two of the ten triangles.
fn projective_plane_facets() -> Vec<Vec<usize>> {
    vec![
        vec![0, 1, 2],
        vec![0, 2, 3],
        vec![0, 3, 4],
        vec![0, 4, 5],
        vec![0, 1, 5],
        vec![1, 2, 4],
        vec![2, 3, 5],
        vec![1, 3, 4],
        vec![2, 4, 5],
        vec![1, 3, 5],
    ]
}

fn projective_plane() -> SimplicialSet {
    from_facets(6, &projective_plane_facets()).unwrap()
}

/// Suspension of the projective plane: two apexes coned over every
/// triangle.  Simply connected, with second homology of order two.
fn suspended_projective_plane() -> SimplicialSet {
    let mut facets = Vec::new();
    for apex in [6, 7] {
        for t in projective_plane_facets() {
            let mut f = t.clone();
            f.push(apex);
            facets.push(f);
        }
    }
    from_facets(8, &facets).unwrap()
}

#[test]
fn point_tower_is_trivial() {
    let x = EffectiveSpace::finite(&standard_simplex(0));
    let tower = build_tower(x, 2).unwrap();
    assert!(tower.homotopy_group(1).is_trivial());
    assert!(tower.homotopy_group(2).is_trivial());
    let report = verify_stage(tower.stage(2));
    assert!(report.all_ok(), "{report}");
}

#[test]
fn circle_is_rejected() {
    let circle = from_facets(3, &[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
    match build_tower(EffectiveSpace::finite(&circle), 2) {
        Err(TowerError::NotSimplyConnected) => {}
        Err(other) => panic!("unexpected error: {other}"),
        Ok(_) => panic!("circle was accepted as simply connected"),
    }
}

#[test]
fn two_sphere_second_stage() {
    let x = EffectiveSpace::finite(&boundary_of_tetrahedron());
    let tower = build_tower(x, 2).unwrap();
    assert!(tower.homotopy_group(1).is_trivial());
    assert_eq!(*tower.homotopy_group(2), FgAbelianGroup::free(1));

    // The effective model of the second stage must have the homology of
    // the classifying space of the integers in degree two: one free
    // generator in each even degree.
    let stage = tower.stage(2);
    let eff = stage.effective().effective();
    for k in 0..=4 {
        let h = homology(eff, k).unwrap();
        let want = if k % 2 == 0 { FgAbelianGroup::free(1) } else { FgAbelianGroup::trivial() };
        assert_eq!(*h.group(), want, "effective homology in degree {k}");
    }

    let report = verify_stage(stage);
    assert!(report.all_ok(), "{report}");
}

#[test]
fn two_sphere_third_stage() {
    let x = EffectiveSpace::finite(&boundary_of_tetrahedron());
    let tower = build_tower(x, 3).unwrap();
    assert_eq!(*tower.homotopy_group(2), FgAbelianGroup::free(1));
    assert_eq!(*tower.homotopy_group(3), FgAbelianGroup::free(1));
    let report = verify_stage(tower.stage(3));
    assert!(report.all_ok(), "{report}");
}

#[test]
fn three_sphere_tower() {
    let x = EffectiveSpace::finite(&boundary_of_four_simplex());
    let tower = build_tower(x, 3).unwrap();
    assert!(tower.homotopy_group(2).is_trivial());
    assert_eq!(*tower.homotopy_group(3), FgAbelianGroup::free(1));
}

#[test]
fn octahedron_matches_tetrahedron_boundary() {
    let oct = build_tower(EffectiveSpace::finite(&octahedron()), 2).unwrap();
    let tet = build_tower(EffectiveSpace::finite(&boundary_of_tetrahedron()), 2).unwrap();
    assert_eq!(oct.homotopy_group(2), tet.homotopy_group(2));
}

#[test]
fn suspended_projective_plane_second_stage() {
    let rp2 = projective_plane();
    let rp2_chains = rp2.normalized_chains();
    assert_eq!(*homology(&rp2_chains, 0).unwrap().group(), FgAbelianGroup::free(1));
    assert_eq!(*homology(&rp2_chains, 1).unwrap().group(), FgAbelianGroup::cyclic(2));
    assert!(homology(&rp2_chains, 2).unwrap().group().is_trivial());

    let sus = suspended_projective_plane();
    let chains = sus.normalized_chains();
    assert!(homology(&chains, 1).unwrap().group().is_trivial());
    assert_eq!(*homology(&chains, 2).unwrap().group(), FgAbelianGroup::cyclic(2));
    assert!(homology(&chains, 3).unwrap().group().is_trivial());

    let tower = build_tower(EffectiveSpace::finite(&sus), 2).unwrap();
    assert_eq!(*tower.homotopy_group(2), FgAbelianGroup::cyclic(2));
    let stage = tower.stage(2);

    // This stage set is levelwise finite, so its homology can be computed
    // both directly and through the effective model; the answers must
    // agree.
    for k in 0..=3 {
        let brute = homology(stage.chains(), k).unwrap();
        let eff = homology(stage.effective().effective(), k).unwrap();
        assert_eq!(brute.group(), eff.group(), "homology mismatch in degree {k}");
    }

    // The two reductions inside the stage equivalence satisfy their laws
    // on generator chains of the middle complex.
    let middle = stage.effective().middle().clone();
    let mut samples = Vec::new();
    for degree in 0..=4 {
        if let Some(basis) = middle.basis(degree) {
            for g in basis.into_iter().take(40) {
                samples.push(Chain::gen(degree, g));
            }
        }
    }
    assert!(!samples.is_empty());
    assert!(verify_reduction(&stage.effective().left, &samples).is_ok());
    assert!(verify_reduction(&stage.effective().right, &samples).is_ok());

    let report = verify_stage(stage);
    assert!(report.all_ok(), "{report}");
}

#[test]
fn suspended_projective_plane_third_stage() {
    let tower =
        build_tower(EffectiveSpace::finite(&suspended_projective_plane()), 3).unwrap();
    assert_eq!(*tower.homotopy_group(2), FgAbelianGroup::cyclic(2));
    assert_eq!(*tower.homotopy_group(3), FgAbelianGroup::cyclic(4));
}

#[test]
fn fiber_translation_is_a_free_action() {
    let sus = suspended_projective_plane();
    let tower = build_tower(EffectiveSpace::finite(&sus), 2).unwrap();
    let stage = tower.stage(2);
    let pi = stage.pi().clone();

    // The unique nondegenerate two-simplex of the fiber is the nonzero
    // translation in dimension two.
    let fiber = stage.fiber_k().unwrap();
    let gens = fiber.basis(2).unwrap();
    assert_eq!(gens.len(), 1);
    let z = EmSimplex::from_gen(EmSpace::K, &pi, 2, 2, &gens[0]);
    assert!(!z.is_zero());
    let zero = EmSimplex::zero(EmSpace::K, &pi, 2, 2);
    assert!(z.add(&z).unwrap().is_zero());

    let core = sus.basis(2).unwrap()[0].clone();
    let y = stage.phi().apply(&Simplex::nondegenerate(2, core));

    // Zero acts as the identity, the nonzero element moves the simplex,
    // and acting twice returns it: a free two-element orbit.
    assert_eq!(stage.act(&y, &zero).unwrap(), y);
    let moved = stage.act(&y, &z).unwrap();
    assert_ne!(moved, y);
    assert_eq!(stage.act(&moved, &z).unwrap(), y);

    // Translation does not change the projection to the base.
    let p = stage.projection().unwrap();
    assert_eq!(p.apply(&moved), p.apply(&y));
}

#[test]
fn misdirected_lift_is_rejected() {
    let x = EffectiveSpace::finite(&boundary_of_tetrahedron());
    let mut tower = build_tower(x, 2).unwrap();

    // Replace the stage-two lift by the constant map to the basepoint.
    // That map is simplicial but does not carry second homology, so
    // building the next stage must fail the acyclicity precondition.
    let constant = {
        let stage = &tower.stages[1];
        SimplicialMap::constant(
            tower.space.set().clone(),
            stage.set.clone(),
            stage.basepoint.clone(),
        )
    };
    tower.stages[1].phi = constant;

    match next_stage(&tower) {
        Err(TowerError::ConnectivityFailure(k)) => assert_eq!(k, 2),
        Err(other) => panic!("unexpected error: {other}"),
        Ok(_) => panic!("corrupted tower was accepted"),
    }
}
