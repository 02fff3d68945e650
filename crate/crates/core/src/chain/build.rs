//! Structural constructions on complexes: direct sums, degree shifts,
//! tensor products, mapping cones, and the transfer of reductions and
//! strong equivalences through each of them.

use super::reduction::{Reduction, StrongEquivalence};
use super::{Chain, ChainError, ChainMap, Complex, ComplexOps, Gen};
use num_bigint::BigInt;
use num_traits::One;

pub const SUM_LEFT: u16 = 1;
pub const SUM_RIGHT: u16 = 2;
/// Cone summand holding the (degree-shifted) source of the map.
pub const CONE_SOURCE: u16 = 3;
/// Cone summand holding the target of the map.
pub const CONE_TARGET: u16 = 4;

// ---------------------------------------------------------------------------
// direct sum

struct SumOps {
    left: Complex,
    right: Complex,
}

impl ComplexOps for SumOps {
    fn d(&self, degree: i64, gen: &Gen) -> Chain {
        let (tag, inner) = gen.as_tag().expect("sum generator");
        let part = if tag == SUM_LEFT { &self.left } else { &self.right };
        let image = part.d_gen(degree, inner);
        let mut out = Chain::zero(degree - 1);
        for (g, c) in image.terms() {
            out.add_term(Gen::tag(tag, g.clone()), c.clone());
        }
        out
    }

    fn basis(&self, degree: i64) -> Option<Vec<Gen>> {
        let a = self.left.basis(degree)?;
        let b = self.right.basis(degree)?;
        let mut out: Vec<Gen> = a.into_iter().map(|g| Gen::tag(SUM_LEFT, g)).collect();
        out.extend(b.into_iter().map(|g| Gen::tag(SUM_RIGHT, g)));
        Some(out)
    }

    fn degree_bound(&self) -> i64 {
        self.left.degree_bound().max(self.right.degree_bound())
    }
}

pub fn direct_sum(a: &Complex, b: &Complex) -> Complex {
    Complex::new(SumOps { left: a.clone(), right: b.clone() })
}

/// Injection of one summand into a tagged sum complex.
pub fn sum_inject(sum: &Complex, tag: u16, part: &Complex) -> ChainMap {
    ChainMap::new(part.clone(), sum.clone(), 0, move |deg, g| {
        Chain::gen(deg, Gen::tag(tag, g.clone()))
    })
}

/// Projection of a tagged sum complex onto one summand.
pub fn sum_project(sum: &Complex, tag: u16, part: &Complex) -> ChainMap {
    ChainMap::new(sum.clone(), part.clone(), 0, move |deg, g| {
        match g.as_tag() {
            Some((t, inner)) if t == tag => Chain::gen(deg, inner.clone()),
            _ => Chain::zero(deg),
        }
    })
}

/// Componentwise reduction of direct sums; fresh sum complexes are created
/// for top and bottom.
pub fn sum_reduction(ra: &Reduction, rb: &Reduction) -> Reduction {
    let top = direct_sum(ra.top(), rb.top());
    let bottom = direct_sum(ra.bottom(), rb.bottom());
    sum_reduction_onto(&top, &bottom, ra, rb)
}

pub(crate) fn sum_reduction_onto(
    top: &Complex,
    bottom: &Complex,
    ra: &Reduction,
    rb: &Reduction,
) -> Reduction {
    let blockwise = |ma: &ChainMap, mb: &ChainMap, src: &Complex, tgt: &Complex, shift: i64| {
        let (ma, mb) = (ma.clone(), mb.clone());
        ChainMap::new(src.clone(), tgt.clone(), shift, move |deg, g| {
            let (tag, inner) = g.as_tag().expect("sum generator");
            let image = if tag == SUM_LEFT {
                ma.apply_gen(deg, inner)
            } else {
                mb.apply_gen(deg, inner)
            };
            let mut out = Chain::zero(deg + shift);
            for (h, c) in image.terms() {
                out.add_term(Gen::tag(tag, h.clone()), c.clone());
            }
            out
        })
    };
    Reduction::new(
        blockwise(&ra.f, &rb.f, top, bottom, 0),
        blockwise(&ra.g, &rb.g, bottom, top, 0),
        blockwise(&ra.h, &rb.h, top, top, 1),
    )
}

/// Componentwise strong equivalence of direct sums (one shared middle).
pub fn sum_strong_equivalence(
    a: &StrongEquivalence,
    b: &StrongEquivalence,
) -> StrongEquivalence {
    let middle = direct_sum(a.middle(), b.middle());
    let original = direct_sum(a.original(), b.original());
    let effective = direct_sum(a.effective(), b.effective());
    StrongEquivalence::new(
        sum_reduction_onto(&middle, &original, &a.left, &b.left),
        sum_reduction_onto(&middle, &effective, &a.right, &b.right),
    )
}

// ---------------------------------------------------------------------------
// basis hiding and lower truncation

struct OpaqueOps {
    inner: Complex,
}

impl ComplexOps for OpaqueOps {
    fn d(&self, degree: i64, gen: &Gen) -> Chain {
        self.inner.d_gen(degree, gen)
    }

    fn basis(&self, _degree: i64) -> Option<Vec<Gen>> {
        None
    }

    fn degree_bound(&self) -> i64 {
        self.inner.degree_bound()
    }
}

/// Same differential, but the basis is withheld.  Used for middles whose
/// tagged-sum presentation overcounts the mathematical complex.
pub fn opaque_basis(c: &Complex) -> Complex {
    Complex::new(OpaqueOps { inner: c.clone() })
}

struct MinDegreeOps {
    inner: Complex,
    min_degree: i64,
}

impl ComplexOps for MinDegreeOps {
    fn d(&self, degree: i64, gen: &Gen) -> Chain {
        self.inner.d_gen(degree, gen)
    }

    fn basis(&self, degree: i64) -> Option<Vec<Gen>> {
        if degree < self.min_degree {
            Some(Vec::new())
        } else {
            self.inner.basis(degree)
        }
    }

    fn degree_bound(&self) -> i64 {
        self.inner.degree_bound()
    }
}

/// Declares that the complex is zero below `min_degree`, so truncated tails
/// report an empty basis there even when the inner complex cannot enumerate
/// one.  The caller asserts the vanishing.
pub fn with_min_degree(c: &Complex, min_degree: i64) -> Complex {
    Complex::new(MinDegreeOps { inner: c.clone(), min_degree })
}

// ---------------------------------------------------------------------------
// degree shift

struct ShiftOps {
    inner: Complex,
    offset: i64,
}

impl ComplexOps for ShiftOps {
    fn d(&self, degree: i64, gen: &Gen) -> Chain {
        let image = self.inner.d_gen(degree - self.offset, gen);
        let sign = if self.offset % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        let mut out = Chain::zero(degree - 1);
        for (g, c) in image.terms() {
            out.add_term(g.clone(), c * &sign);
        }
        out
    }

    fn basis(&self, degree: i64) -> Option<Vec<Gen>> {
        self.inner.basis(degree - self.offset)
    }

    fn degree_bound(&self) -> i64 {
        super::bound_sum(self.inner.degree_bound(), self.offset)
    }
}

/// Suspension: `shift(C, k)_n = C_{n-k}` with differential `(-1)^k d`.
pub fn shift(c: &Complex, offset: i64) -> Complex {
    Complex::new(ShiftOps { inner: c.clone(), offset })
}

/// A reduction between the shifted complexes; the homotopy picks up the
/// sign `(-1)^k`.
pub fn shift_reduction(r: &Reduction, offset: i64) -> Reduction {
    let top = shift(r.top(), offset);
    let bottom = shift(r.bottom(), offset);
    shift_reduction_onto(&top, &bottom, r, offset)
}

pub(crate) fn shift_reduction_onto(
    top: &Complex,
    bottom: &Complex,
    r: &Reduction,
    offset: i64,
) -> Reduction {
    let h = r.h.rebase(top.clone(), top.clone(), offset, offset);
    let h = if offset % 2 == 0 { h } else { h.neg() };
    Reduction::new(
        r.f.rebase(top.clone(), bottom.clone(), offset, offset),
        r.g.rebase(bottom.clone(), top.clone(), offset, offset),
        h,
    )
}

pub fn shift_strong_equivalence(se: &StrongEquivalence, offset: i64) -> StrongEquivalence {
    let middle = shift(se.middle(), offset);
    let original = shift(se.original(), offset);
    let effective = shift(se.effective(), offset);
    StrongEquivalence::new(
        shift_reduction_onto(&middle, &original, &se.left, offset),
        shift_reduction_onto(&middle, &effective, &se.right, offset),
    )
}

// ---------------------------------------------------------------------------
// tensor product

/// Generator of a tensor product: the left factor's degree is recorded so
/// Koszul signs are computable without consulting the factors.
pub fn tensor_gen(left_degree: i64, a: &Gen, b: &Gen) -> Gen {
    Gen::seq(vec![Gen::int(left_degree), a.clone(), b.clone()])
}

pub fn untensor_gen(g: &Gen) -> (i64, &Gen, &Gen) {
    let parts = g.as_seq().expect("tensor generator");
    assert_eq!(parts.len(), 3, "tensor generator");
    (parts[0].as_int().expect("tensor degree"), &parts[1], &parts[2])
}

struct TensorOps {
    left: Complex,
    right: Complex,
}

impl ComplexOps for TensorOps {
    fn d(&self, degree: i64, gen: &Gen) -> Chain {
        let (p, a, b) = untensor_gen(gen);
        let q = degree - p;
        let mut out = Chain::zero(degree - 1);
        for (a2, c) in self.left.d_gen(p, a).terms() {
            out.add_term(tensor_gen(p - 1, a2, b), c.clone());
        }
        let sign = if p % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        for (b2, c) in self.right.d_gen(q, b).terms() {
            out.add_term(tensor_gen(p, a, b2), c * &sign);
        }
        out
    }

    /// A degree splits as `p + q`; a split contributes nothing when either
    /// factor is empty there, and such splits must not force the *other*
    /// factor to enumerate (it may be unbounded in degrees that never pair
    /// with anything).  The right factor is consulted first.
    fn basis(&self, degree: i64) -> Option<Vec<Gen>> {
        let mut out = Vec::new();
        for p in 0..=degree {
            let right = self.right.basis(degree - p);
            if matches!(&right, Some(r) if r.is_empty()) {
                continue;
            }
            let left = self.left.basis(p)?;
            if left.is_empty() {
                continue;
            }
            let right = right?;
            for a in &left {
                for b in &right {
                    out.push(tensor_gen(p, a, b));
                }
            }
        }
        Some(out)
    }

    fn degree_bound(&self) -> i64 {
        super::bound_sum(self.left.degree_bound(), self.right.degree_bound())
    }
}

pub fn tensor(a: &Complex, b: &Complex) -> Complex {
    Complex::new(TensorOps { left: a.clone(), right: b.clone() })
}

/// `φ ⊗ ψ` with the Koszul sign `(-1)^{|ψ|·p}` on a generator whose left
/// factor has degree `p`.
pub fn tensor_map(
    source: &Complex,
    target: &Complex,
    phi: &ChainMap,
    psi: &ChainMap,
) -> ChainMap {
    let shift = phi.shift() + psi.shift();
    let (phi, psi) = (phi.clone(), psi.clone());
    ChainMap::new(source.clone(), target.clone(), shift, move |deg, g| {
        let (p, a, b) = untensor_gen(g);
        let q = deg - p;
        let img_a = phi.apply_gen(p, a);
        let img_b = psi.apply_gen(q, b);
        let sign_neg = (psi.shift() * p) % 2 != 0;
        let mut out = Chain::zero(deg + shift);
        for (a2, ca) in img_a.terms() {
            for (b2, cb) in img_b.terms() {
                let mut coeff = ca * cb;
                if sign_neg {
                    coeff = -coeff;
                }
                out.add_term(tensor_gen(p + phi.shift(), a2, b2), coeff);
            }
        }
        out
    })
}

/// Tensor product of reductions: `f = f_A⊗f_B`, `g = g_A⊗g_B`,
/// `h = h_A⊗(g_B f_B) + id⊗h_B`.
pub fn tensor_reduction(ra: &Reduction, rb: &Reduction) -> Reduction {
    let top = tensor(ra.top(), rb.top());
    let bottom = tensor(ra.bottom(), rb.bottom());
    tensor_reduction_onto(&top, &bottom, ra, rb)
}

pub(crate) fn tensor_reduction_onto(
    top: &Complex,
    bottom: &Complex,
    ra: &Reduction,
    rb: &Reduction,
) -> Reduction {
    let f = tensor_map(top, bottom, &ra.f, &rb.f);
    let g = tensor_map(bottom, top, &ra.g, &rb.g);
    let gf_b = rb.g.compose(&rb.f);
    let id_a = ChainMap::identity(ra.top());
    let h = tensor_map(top, top, &ra.h, &gf_b).add(&tensor_map(top, top, &id_a, &rb.h));
    Reduction::new(f, g, h)
}

pub fn tensor_strong_equivalence(
    a: &StrongEquivalence,
    b: &StrongEquivalence,
) -> StrongEquivalence {
    let middle = tensor(a.middle(), b.middle());
    let original = tensor(a.original(), b.original());
    let effective = tensor(a.effective(), b.effective());
    StrongEquivalence::new(
        tensor_reduction_onto(&middle, &original, &a.left, &b.left),
        tensor_reduction_onto(&middle, &effective, &a.right, &b.right),
    )
}

// ---------------------------------------------------------------------------
// mapping cone

struct ConeOps {
    source: Complex,
    target: Complex,
    map: Option<ChainMap>,
}

impl ComplexOps for ConeOps {
    fn d(&self, degree: i64, gen: &Gen) -> Chain {
        let (tag, inner) = gen.as_tag().expect("cone generator");
        let mut out = Chain::zero(degree - 1);
        if tag == CONE_SOURCE {
            for (g, c) in self.source.d_gen(degree - 1, inner).terms() {
                out.add_term(Gen::tag(CONE_SOURCE, g.clone()), -c);
            }
            if let Some(map) = &self.map {
                for (g, c) in map.apply_gen(degree - 1, inner).terms() {
                    out.add_term(Gen::tag(CONE_TARGET, g.clone()), c.clone());
                }
            }
        } else {
            for (g, c) in self.target.d_gen(degree, inner).terms() {
                out.add_term(Gen::tag(CONE_TARGET, g.clone()), c.clone());
            }
        }
        out
    }

    fn basis(&self, degree: i64) -> Option<Vec<Gen>> {
        let src = self.source.basis(degree - 1)?;
        let tgt = self.target.basis(degree)?;
        let mut out: Vec<Gen> = src.into_iter().map(|g| Gen::tag(CONE_SOURCE, g)).collect();
        out.extend(tgt.into_iter().map(|g| Gen::tag(CONE_TARGET, g)));
        Some(out)
    }

    fn degree_bound(&self) -> i64 {
        super::bound_sum(self.source.degree_bound(), 1).max(self.target.degree_bound())
    }
}

/// Mapping cone of a degree-0 chain map `φ: C → D`:
/// `cone_n = C_{n-1} ⊕ D_n`, `d(x, y) = (−d x, d y + φ x)`.
pub fn cone(phi: &ChainMap) -> Complex {
    debug_assert_eq!(phi.shift(), 0);
    Complex::new(ConeOps {
        source: phi.source().clone(),
        target: phi.target().clone(),
        map: Some(phi.clone()),
    })
}

/// The block complex `C[1] ⊕ D` without the gluing map (the cone of the zero
/// map); the cone differential is this plus the stitch perturbation.
pub(crate) fn cone_block(source: &Complex, target: &Complex) -> Complex {
    Complex::new(ConeOps {
        source: source.clone(),
        target: target.clone(),
        map: None,
    })
}

/// The stitch `δ(x, y) = (0, φ x)` as a perturbation of the block complex.
pub(crate) fn cone_stitch(block: &Complex, phi: &ChainMap) -> ChainMap {
    let phi = phi.clone();
    ChainMap::new(block.clone(), block.clone(), -1, move |deg, g| {
        let mut out = Chain::zero(deg - 1);
        if let Some((tag, inner)) = g.as_tag() {
            if tag == CONE_SOURCE {
                for (h, c) in phi.apply_gen(deg - 1, inner).terms() {
                    out.add_term(Gen::tag(CONE_TARGET, h.clone()), c.clone());
                }
            }
        }
        out
    })
}

/// Structure maps of a cone: inclusions of the two summands and the
/// corresponding projections.
pub struct ConeMaps {
    /// `C_n → cone_{n+1}` (degree `+1`).
    pub incl_source: ChainMap,
    /// `D_n → cone_n`.
    pub incl_target: ChainMap,
    /// `cone_n → C_{n-1}` (degree `-1`).
    pub proj_source: ChainMap,
    /// `cone_n → D_n`.
    pub proj_target: ChainMap,
}

pub fn cone_inclusions(cone: &Complex, source: &Complex, target: &Complex) -> ConeMaps {
    let incl_source = ChainMap::new(source.clone(), cone.clone(), 1, |deg, g| {
        Chain::gen(deg + 1, Gen::tag(CONE_SOURCE, g.clone()))
    });
    let incl_target = ChainMap::new(target.clone(), cone.clone(), 0, |deg, g| {
        Chain::gen(deg, Gen::tag(CONE_TARGET, g.clone()))
    });
    let proj_source = ChainMap::new(cone.clone(), source.clone(), -1, |deg, g| {
        match g.as_tag() {
            Some((t, inner)) if t == CONE_SOURCE => Chain::gen(deg - 1, inner.clone()),
            _ => Chain::zero(deg - 1),
        }
    });
    let proj_target = ChainMap::new(cone.clone(), target.clone(), 0, |deg, g| {
        match g.as_tag() {
            Some((t, inner)) if t == CONE_TARGET => Chain::gen(deg, inner.clone()),
            _ => Chain::zero(deg),
        }
    });
    ConeMaps { incl_source, incl_target, proj_source, proj_target }
}

/// Componentwise reduction between cone blocks; the homotopy on the shifted
/// source summand changes sign.
pub(crate) fn cone_block_reduction_onto(
    top: &Complex,
    bottom: &Complex,
    rc: &Reduction,
    rd: &Reduction,
) -> Reduction {
    let blockwise = |mc: &ChainMap, md: &ChainMap, src: &Complex, tgt: &Complex, shift: i64, flip: bool| {
        let (mc, md) = (mc.clone(), md.clone());
        ChainMap::new(src.clone(), tgt.clone(), shift, move |deg, g| {
            let (tag, inner) = g.as_tag().expect("cone generator");
            let mut out = Chain::zero(deg + shift);
            if tag == CONE_SOURCE {
                let image = mc.apply_gen(deg - 1, inner);
                for (h, c) in image.terms() {
                    let coeff = if flip { -c } else { c.clone() };
                    out.add_term(Gen::tag(CONE_SOURCE, h.clone()), coeff);
                }
            } else {
                let image = md.apply_gen(deg, inner);
                for (h, c) in image.terms() {
                    out.add_term(Gen::tag(CONE_TARGET, h.clone()), c.clone());
                }
            }
            out
        })
    };
    Reduction::new(
        blockwise(&rc.f, &rd.f, top, bottom, 0, false),
        blockwise(&rc.g, &rd.g, bottom, top, 0, false),
        blockwise(&rc.h, &rd.h, top, top, 1, true),
    )
}

/// Strong equivalence for a mapping cone, assembled from equivalences of
/// the two sides.
///
/// The effective model is `E_C[1] ⊕ E_D` whose gluing differential is the
/// conjugated map `toEffective_D ∘ φ ∘ fromEffective_C`; the perturbation
/// series collapses after one term, so no nilpotency assumption is needed.
/// On the `D` summand all six structure maps restrict to those of `eq_d`.
pub fn cone_strong_equivalence(
    eq_c: &StrongEquivalence,
    eq_d: &StrongEquivalence,
    phi: &ChainMap,
    cap: usize,
) -> Result<StrongEquivalence, ChainError> {
    debug_assert!(phi.source().same_as(eq_c.original()));
    debug_assert!(phi.target().same_as(eq_d.original()));
    let middle = cone_block(eq_c.middle(), eq_d.middle());
    let original = cone_block(eq_c.original(), eq_d.original());
    let effective = cone_block(eq_c.effective(), eq_d.effective());
    let block = StrongEquivalence::new(
        cone_block_reduction_onto(&middle, &original, &eq_c.left, &eq_d.left),
        cone_block_reduction_onto(&middle, &effective, &eq_c.right, &eq_d.right),
    );
    let stitch = cone_stitch(&original, phi);
    block.perturb(&stitch, cap)
}
