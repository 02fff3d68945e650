//! Products of simplicial sets, mapping cylinders and cones.
//!
//! A simplex of `X×Y` is a pair of equal-dimension simplices; it is
//! nondegenerate exactly when the two degeneracy words share no index.  Pair
//! cores store both components in canonical form, so equality of product
//! simplices is plain structural equality.

use itertools::Itertools;

use super::{
    gen_to_verts, verts_to_gen, Simplex, SimplicialMap, SimplicialObject, SimplicialSet,
};
use crate::chain::Gen;
use num_bigint::BigInt;

fn simplex_to_gen(s: &Simplex) -> Gen {
    let word = Gen::nums(s.word().iter().map(|&j| BigInt::from(j)).collect());
    Gen::seq(vec![word, s.core().clone()])
}

fn gen_to_simplex(dim: i64, g: &Gen) -> Simplex {
    let parts = g.as_seq().expect("component simplex encoding");
    let word: Vec<usize> = gen_to_verts(&parts[0]);
    let core_dim = dim - word.len() as i64;
    let mut out = Simplex::nondegenerate(core_dim, parts[1].clone());
    for &j in word.iter().rev() {
        out = out.degenerate(j);
    }
    debug_assert_eq!(out.word(), &word[..]);
    out
}

/// Encodes a jointly nondegenerate pair as a product core.
pub(crate) fn pair_core(u: &Simplex, v: &Simplex) -> Gen {
    debug_assert_eq!(u.dim(), v.dim());
    debug_assert!(
        u.word().iter().all(|j| !v.word().contains(j)),
        "pair core components must not share degeneracies"
    );
    Gen::pair(simplex_to_gen(u), simplex_to_gen(v))
}

pub(crate) fn pair_parts(dim: i64, core: &Gen) -> (Simplex, Simplex) {
    let (a, b) = core.as_pair().expect("product core");
    (gen_to_simplex(dim, a), gen_to_simplex(dim, b))
}

/// Canonical form of an arbitrary component pair: common degeneracies are
/// stripped (largest first) into the word of the product simplex.
pub(crate) fn canonical_pair(
    x: &SimplicialSet,
    y: &SimplicialSet,
    mut u: Simplex,
    mut v: Simplex,
) -> Simplex {
    debug_assert_eq!(u.dim(), v.dim());
    let mut word = Vec::new();
    loop {
        let common = u
            .word()
            .iter()
            .filter(|j| v.word().contains(j))
            .max()
            .copied();
        match common {
            Some(j) => {
                word.push(j);
                u = x.face(&u, j);
                v = y.face(&v, j);
            }
            None => break,
        }
    }
    let core_dim = u.dim();
    let core = pair_core(&u, &v);
    let mut out = Simplex::nondegenerate(core_dim, core);
    for &j in word.iter().rev() {
        out = out.degenerate(j);
    }
    out
}

struct ProductOps {
    x: SimplicialSet,
    y: SimplicialSet,
}

impl SimplicialObject for ProductOps {
    fn face(&self, dim: i64, core: &Gen, i: usize) -> Simplex {
        let (u, v) = pair_parts(dim, core);
        canonical_pair(&self.x, &self.y, self.x.face(&u, i), self.y.face(&v, i))
    }

    fn basis(&self, dim: i64) -> Option<Vec<Gen>> {
        let n = dim as usize;
        let mut out = Vec::new();
        for p in 0..=dim {
            let bx = self.x.basis(p)?;
            if bx.is_empty() {
                continue;
            }
            for q in 0..=dim {
                let by = self.y.basis(q)?;
                if by.is_empty() {
                    continue;
                }
                for xc in &bx {
                    for yc in &by {
                        // Degeneracy sets lifting (p,q) to a common dim n.
                        for b in (0..n).combinations(n - p as usize) {
                            let left: Vec<usize> =
                                (0..n).filter(|j| !b.contains(j)).collect();
                            for a in left.iter().copied().combinations(n - q as usize) {
                                let u = Simplex::nondegenerate(p, xc.clone())
                                    .degenerate_by_set(&b);
                                let v = Simplex::nondegenerate(q, yc.clone())
                                    .degenerate_by_set(&a);
                                out.push(pair_core(&u, &v));
                            }
                        }
                    }
                }
            }
        }
        Some(out)
    }

    fn dimension_bound(&self) -> i64 {
        crate::chain::bound_sum(self.x.dimension_bound(), self.y.dimension_bound())
    }
}

pub fn product(x: &SimplicialSet, y: &SimplicialSet) -> SimplicialSet {
    SimplicialSet::new(ProductOps { x: x.clone(), y: y.clone() })
}

const TAG_BODY: u16 = 10;
const TAG_END: u16 = 11;
const TAG_TIP: u16 = 12;

fn tip_gen() -> Gen {
    Gen::tag(TAG_TIP, Gen::str("tip"))
}

fn retag(s: Simplex, tag: u16) -> Simplex {
    let mut out = Simplex::nondegenerate(s.core_dim(), Gen::tag(tag, s.core().clone()));
    for &j in s.word().iter().rev() {
        out = out.degenerate(j);
    }
    out
}

/// Which end of `Δ¹` a component simplex sits on, if it is constant.
fn interval_end(v: &Simplex) -> Option<usize> {
    if v.core_dim() == 0 {
        Some(gen_to_verts(v.core())[0])
    } else {
        None
    }
}

struct CylinderOps {
    f: SimplicialMap,
    body: SimplicialSet,
    collapse_top: bool,
}

impl CylinderOps {
    fn x(&self) -> &SimplicialSet {
        self.f.source()
    }

    fn y(&self) -> &SimplicialSet {
        self.f.target()
    }
}

impl SimplicialObject for CylinderOps {
    fn face(&self, dim: i64, core: &Gen, i: usize) -> Simplex {
        let (tag, inner) = core.as_tag().expect("cylinder core");
        match tag {
            TAG_END => retag(self.y().face_core(dim, inner, i), TAG_END),
            TAG_BODY => {
                let s = self.body.face(&Simplex::nondegenerate(dim, inner.clone()), i);
                let (u, v) = pair_parts(s.core_dim(), s.core());
                let projected = match interval_end(&v) {
                    // The glued end: (x, 0) is identified with f(x).
                    Some(0) => retag(self.f.apply(&u), TAG_END),
                    Some(1) if self.collapse_top => {
                        Simplex::collapsed_vertex(tip_gen(), s.core_dim())
                    }
                    _ => Simplex::nondegenerate(
                        s.core_dim(),
                        Gen::tag(TAG_BODY, s.core().clone()),
                    ),
                };
                let mut out = projected;
                for &j in s.word().iter().rev() {
                    out = out.degenerate(j);
                }
                out
            }
            TAG_TIP => unreachable!("the tip has dimension zero"),
            other => panic!("unexpected cylinder tag {other}"),
        }
    }

    fn basis(&self, dim: i64) -> Option<Vec<Gen>> {
        let mut out = Vec::new();
        if self.collapse_top && dim == 0 {
            out.push(tip_gen());
        }
        for y in self.y().basis(dim)? {
            out.push(Gen::tag(TAG_END, y));
        }
        for pair in self.body.basis(dim)? {
            let (_, v) = pair_parts(dim, &pair);
            match interval_end(&v) {
                Some(0) => {}
                Some(1) if self.collapse_top => {}
                _ => out.push(Gen::tag(TAG_BODY, pair)),
            }
        }
        Some(out)
    }

    fn dimension_bound(&self) -> i64 {
        crate::chain::bound_sum(self.x().dimension_bound(), 1).max(self.y().dimension_bound())
    }
}

/// Mapping cylinder `(X×Δ¹ ⊔ Y)/((x,0) ∼ f(x))` with the structure maps:
/// inclusion of `X` at the free end, inclusion of `Y`, and the retraction
/// collapsing the interval direction.
pub fn cylinder(
    f: &SimplicialMap,
) -> (SimplicialSet, SimplicialMap, SimplicialMap, SimplicialMap) {
    let x = f.source().clone();
    let y = f.target().clone();
    let interval = super::standard_simplex(1);
    let body = product(&x, &interval);
    let cyl = SimplicialSet::new(CylinderOps {
        f: f.clone(),
        body,
        collapse_top: false,
    });

    let incl_x = SimplicialMap::new(x.clone(), cyl.clone(), |dim, core| {
        let u = Simplex::nondegenerate(dim, core.clone());
        let v = Simplex::collapsed_vertex(verts_to_gen(&[1]), dim);
        Simplex::nondegenerate(dim, Gen::tag(TAG_BODY, pair_core(&u, &v)))
    });
    let incl_y = SimplicialMap::new(y.clone(), cyl.clone(), |dim, core| {
        Simplex::nondegenerate(dim, Gen::tag(TAG_END, core.clone()))
    });
    let fm = f.clone();
    let retraction = SimplicialMap::new(cyl.clone(), y, move |dim, core| {
        let (tag, inner) = core.as_tag().expect("cylinder core");
        match tag {
            TAG_END => Simplex::nondegenerate(dim, inner.clone()),
            TAG_BODY => {
                let (u, _) = pair_parts(dim, inner);
                fm.apply(&u)
            }
            other => panic!("unexpected cylinder tag {other}"),
        }
    });
    (cyl, incl_x, incl_y, retraction)
}

/// Mapping cone: the cylinder with the free end `X×{1}` collapsed to a
/// point.
pub fn cone(f: &SimplicialMap) -> SimplicialSet {
    let x = f.source().clone();
    let interval = super::standard_simplex(1);
    let body = product(&x, &interval);
    SimplicialSet::new(CylinderOps {
        f: f.clone(),
        body,
        collapse_top: true,
    })
}
