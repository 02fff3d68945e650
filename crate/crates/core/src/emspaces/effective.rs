//! Effective models for the chain complexes of the cochain classifying
//! spaces.
//!
//! Normalized chains of `K(pi, n)` with infinite `pi` cannot enumerate
//! their generators, so their homology is reached through strong
//! equivalences onto small complexes assembled here:
//!
//! * for finite `pi` the chains are already effective and the identity
//!   equivalence suffices;
//! * for `pi = Z` the model is built inductively over `n`: the contractible
//!   cochain space over `K(Z, n)` is presented as a twisted product with
//!   fiber `K(Z, n-1)`, its chains are traded for a twisted tensor product
//!   of the base chains with the model one level down, and a mapping-cone
//!   rearrangement replaces the contractible total complex by a point,
//!   leaving a cone model for the base;
//! * a general infinite finitely generated group splits off a free factor,
//!   and the models of the factors are tensored together along the
//!   coordinate decomposition of the classifying space.
//!
//! All structure maps are exact chain maps; enumeration of a model is only
//! guaranteed up to the degree bound it was built for, and queries beyond
//! it return `None` rather than a wrong answer.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use crate::abelian::{AbHom, FgAbelianGroup};
use crate::chain::{
    cone, cone_block, cone_strong_equivalence, normalize_homotopy, perturb_onto, point_complex,
    point_generator, se_compose, tensor, tensor_gen, tensor_strong_equivalence, untensor_gen,
    with_min_degree, Chain, ChainError, ChainMap, Complex, ComplexOps, ExplicitComplex, Gen,
    Reduction, StrongEquivalence, CONE_SOURCE, CONE_TARGET, NILPOTENCY_CAP,
};
use crate::simplicial::{
    canonical_pair, ez_reduction_onto, normalized_chains, pair_parts, product, Simplex,
    SimplicialObject, SimplicialSet,
};

use super::{e_space, em_simplex_value, k_space, EmSimplex, EmSpace, UNBOUNDED_DIM};

fn sign(k: i64) -> BigInt {
    if k.rem_euclid(2) == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

// ---------------------------------------------------------------------------
// pseudo-section and twisting cochain

/// Partial inverse of the coboundary fibration `E(pi, n-1) -> K(pi, n)`:
/// keeps the entries whose tuple starts at vertex `0` and drops that vertex.
/// Applying the coboundary afterwards recovers any *cocycle* exactly, and
/// the construction commutes with all faces except the `0`-th and with all
/// degeneracies.
pub(crate) fn pseudo_section(z: &EmSimplex) -> EmSimplex {
    debug_assert_eq!(z.space(), EmSpace::K);
    debug_assert!(z.cochain_degree() >= 1);
    let mut out = EmSimplex::zero(EmSpace::E, z.group(), z.cochain_degree() - 1, z.dim());
    for (tuple, value) in z.entries() {
        if tuple[0] == 0 {
            out.add_to(tuple[1..].to_vec(), value);
        }
    }
    out
}

/// Failure of the pseudo-section to commute with the `0`-th face; the result
/// is a cocycle one cochain degree and one dimension lower.  This is the
/// twisting operator of the canonical fibration.
pub(crate) fn em_twist(z: &EmSimplex) -> EmSimplex {
    debug_assert!(z.dim() >= 1);
    let section = pseudo_section(z);
    section
        .face(0)
        .sub(&pseudo_section(&z.face(0)))
        .expect("pseudo-section preserves shape")
        .into_space(EmSpace::K)
}

/// The extra degeneracy of a cochain simplex: every tuple index moves up by
/// one, the dimension grows by one.  Squares to a degenerate simplex and
/// sends degenerate simplices to degenerate ones, so it descends to the
/// normalized chains, where it contracts `E(pi, n)` onto its basepoint.
fn shift_entries_up(e: &EmSimplex) -> EmSimplex {
    let mut out = EmSimplex::zero(e.space(), e.group(), e.cochain_degree(), e.dim() + 1);
    for (tuple, value) in e.entries() {
        let lifted: Vec<usize> = tuple.iter().map(|&t| t + 1).collect();
        out.add_to(lifted, value);
    }
    out
}

/// Contraction of the normalized chains of `E(pi, n)` onto a point, with
/// the homotopy induced by the extra degeneracy.  All reduction laws hold
/// exactly.
pub(crate) fn e_contraction(pi: &FgAbelianGroup, n: i64, chains: &Complex) -> Reduction {
    let bottom = point_complex(UNBOUNDED_DIM);
    let f = ChainMap::new(chains.clone(), bottom.clone(), 0, |deg, _g| {
        if deg == 0 {
            Chain::gen(0, point_generator())
        } else {
            Chain::zero(deg)
        }
    });
    let basepoint = EmSimplex::zero(EmSpace::E, pi, n, 0).to_gen();
    let g = ChainMap::new(bottom.clone(), chains.clone(), 0, move |_deg, _g| {
        Chain::gen(0, basepoint.clone())
    });
    let (group, degree) = (pi.clone(), n);
    let h = ChainMap::new(chains.clone(), chains.clone(), 1, move |deg, g| {
        let simplex = EmSimplex::from_gen(EmSpace::E, &group, degree, deg, g);
        let lifted = shift_entries_up(&simplex);
        if lifted.is_nondegenerate() {
            Chain::gen(deg + 1, lifted.to_gen())
        } else {
            Chain::zero(deg + 1)
        }
    });
    Reduction::new(f, g, h)
}

// ---------------------------------------------------------------------------
// twisted products

/// A fibration presented as a product of a base simplicial set with a
/// cochain classifying-space fiber, where only the `0`-th face is twisted:
/// it translates the fiber component by the twisting operator of the value
/// attached to the base simplex.
pub(crate) struct TwistedProduct {
    /// The twisted simplicial set itself.
    pub(crate) set: SimplicialSet,
    /// The same simplices with the untwisted product faces.
    pub(crate) plain: SimplicialSet,
    pub(crate) base: SimplicialSet,
    pub(crate) fiber: SimplicialSet,
    pub(crate) pi: FgAbelianGroup,
    /// Cochain degree of the fiber `K(pi, fiber_degree)`.
    pub(crate) fiber_degree: i64,
}

struct TwistedOps {
    base: SimplicialSet,
    fiber: SimplicialSet,
    plain: SimplicialSet,
    pi: FgAbelianGroup,
    fiber_degree: i64,
    /// Attaches to each base simplex the cocycle (one cochain degree above
    /// the fiber) whose twist corrects the `0`-th face.
    k_value: Arc<dyn Fn(&Simplex) -> EmSimplex + Send + Sync>,
}

impl SimplicialObject for TwistedOps {
    fn face(&self, dim: i64, core: &Gen, i: usize) -> Simplex {
        if i > 0 {
            return self.plain.face_core(dim, core, i);
        }
        let (u, v) = pair_parts(dim, core);
        let tau = em_twist(&(self.k_value)(&u));
        let fv = em_simplex_value(EmSpace::K, &self.pi, self.fiber_degree, &v)
            .face(0)
            .add(&tau)
            .expect("twist matches the fiber shape");
        let fu = self.base.face(&u, 0);
        canonical_pair(&self.base, &self.fiber, fu, fv.canonical_simplex())
    }

    fn basis(&self, dim: i64) -> Option<Vec<Gen>> {
        self.plain.basis(dim)
    }

    fn dimension_bound(&self) -> i64 {
        self.plain.dimension_bound()
    }
}

/// Builds the twisted product of `base` with the fiber `K(pi, fiber_degree)`.
/// `k_value` assigns to every base simplex the cocycle driving the twist.
pub(crate) fn twisted_product(
    base: &SimplicialSet,
    pi: &FgAbelianGroup,
    fiber_degree: i64,
    k_value: impl Fn(&Simplex) -> EmSimplex + Send + Sync + 'static,
) -> TwistedProduct {
    let fiber = k_space(pi, fiber_degree);
    let plain = product(base, &fiber);
    let set = SimplicialSet::new(TwistedOps {
        base: base.clone(),
        fiber: fiber.clone(),
        plain: plain.clone(),
        pi: pi.clone(),
        fiber_degree,
        k_value: Arc::new(k_value),
    });
    TwistedProduct {
        set,
        plain,
        base: base.clone(),
        fiber,
        pi: pi.clone(),
        fiber_degree,
    }
}

/// Difference between the twisted and the untwisted differential on the
/// normalized product chains: only the `0`-th face changes, so the
/// perturbation is the twisted minus the plain `0`-th face, each kept when
/// nondegenerate.
fn twist_delta(tw: &TwistedProduct, cprod: &Complex) -> ChainMap {
    let twisted = tw.set.clone();
    let plain = tw.plain.clone();
    ChainMap::new(cprod.clone(), cprod.clone(), -1, move |deg, g| {
        let mut out = Chain::zero(deg - 1);
        if deg == 0 {
            return out;
        }
        let tface = twisted.face_core(deg, g, 0);
        if tface.is_nondegenerate() {
            out.add_term(tface.core().clone(), BigInt::one());
        }
        let pface = plain.face_core(deg, g, 0);
        if pface.is_nondegenerate() {
            out.add_term(pface.core().clone(), -BigInt::one());
        }
        out
    })
}

/// Strong equivalence from the normalized chains of a twisted product onto
/// a perturbed tensor product of effective models of the two factors.
///
/// The untwisted chains reduce onto the tensor product of the factor chains
/// (Eilenberg–Zilber), the factor equivalences are tensored, and the twist
/// is carried across by the perturbation lemma.  Returns the chains of the
/// twisted set together with the equivalence based on them.
pub(crate) fn twisted_tensor_equivalence(
    tw: &TwistedProduct,
    base_se: &StrongEquivalence,
    fiber_se: &StrongEquivalence,
    cap: usize,
) -> Result<(Complex, StrongEquivalence), ChainError> {
    let cprod = normalized_chains(&tw.plain);
    let tens = tensor(base_se.original(), fiber_se.original());
    let r_ez = ez_reduction_onto(&tw.base, &tw.fiber, &cprod, &tens);
    let se_ez = StrongEquivalence::new(Reduction::identity(&cprod), r_ez);
    let se_t0 = tensor_strong_equivalence(base_se, fiber_se);
    let se_t = StrongEquivalence::new(se_t0.left.rehouse(se_t0.middle(), &tens), se_t0.right);
    let se_plain = se_compose(&se_ez, &se_t);
    let se_perturbed = se_plain.perturb(&twist_delta(tw, &cprod), cap)?;
    // The twisted chains have the same generators as the plain ones and
    // differ from them exactly by the perturbation, so the perturbed
    // original may be re-housed onto them.
    let ctw = normalized_chains(&tw.set);
    let se = StrongEquivalence::new(
        se_perturbed.left.rehouse(se_perturbed.middle(), &ctw),
        se_perturbed.right,
    );
    Ok((ctw, se))
}

// ---------------------------------------------------------------------------
// contraction of the canonical twisted product

/// Contraction of the normalized chains of the twisted product
/// `K(pi, m) ×_τ K(pi, m-1)` onto a point.
///
/// Sending `(u, v)` to `section(value(u)) + value(v)` is a simplicial
/// isomorphism onto `E(pi, m-1)`, so the contraction of that cochain space
/// conjugates to one of the twisted product.
fn kz_tw_contraction(tw: &TwistedProduct, ctw: &Complex) -> Reduction {
    let pi = tw.pi.clone();
    let nf = tw.fiber_degree;
    let nb = nf + 1;
    let e_set = e_space(&pi, nf);
    let ce = normalized_chains(&e_set);
    let contraction = e_contraction(&pi, nf, &ce);

    let forward = {
        let pi = pi.clone();
        ChainMap::new(ctw.clone(), ce.clone(), 0, move |deg, g| {
            let (u, v) = pair_parts(deg, g);
            let zu = em_simplex_value(EmSpace::K, &pi, nb, &u);
            let xv = em_simplex_value(EmSpace::K, &pi, nf, &v).into_space(EmSpace::E);
            let e = pseudo_section(&zu).add(&xv).expect("components share a simplex shape");
            let s = e.canonical_simplex();
            debug_assert!(s.is_nondegenerate(), "isomorphism must preserve nondegeneracy");
            Chain::gen(deg, s.core().clone())
        })
    };
    let backward = {
        let pi = pi.clone();
        let base = tw.base.clone();
        let fiber = tw.fiber.clone();
        ChainMap::new(ce.clone(), ctw.clone(), 0, move |deg, g| {
            let e = EmSimplex::from_gen(EmSpace::E, &pi, nf, deg, g);
            let zu = e.coboundary().into_space(EmSpace::K);
            let xv = e
                .sub(&pseudo_section(&zu))
                .expect("pseudo-section preserves shape")
                .into_space(EmSpace::K);
            let s = canonical_pair(&base, &fiber, zu.canonical_simplex(), xv.canonical_simplex());
            debug_assert!(s.is_nondegenerate(), "isomorphism must preserve nondegeneracy");
            Chain::gen(deg, s.core().clone())
        })
    };
    Reduction::new(
        contraction.f.compose(&forward),
        backward.compose(&contraction.g),
        backward.compose(&contraction.h).compose(&forward),
    )
}

// ---------------------------------------------------------------------------
// collapsing an equivalence against a contraction

/// Given a strong equivalence `original ⇐ middle ⇒ effective` and a
/// reduction of `original` onto a complex `P` concentrated in degree zero
/// with zero differential, produces a genuine reduction `effective ⇒ P`.
///
/// The candidate maps compose the legs of the equivalence with the
/// contraction; a homotopy correction restores the side conditions.
fn reduction_through(se: &StrongEquivalence, rho: &Reduction) -> Reduction {
    debug_assert!(rho.top().same_as(se.original()));
    let f = rho.f.compose(&se.left.f).compose(&se.right.g);
    let g = se.right.f.compose(&se.left.g).compose(&rho.g);
    let correction = se.left.g.compose(&rho.h).compose(&se.left.f);
    let k = se.left.h.add(&correction);
    let h = se.right.f.compose(&k).compose(&se.right.g);
    normalize_homotopy(f, g, h)
}

// ---------------------------------------------------------------------------
// the circle model: K(Z, 1)

/// Letters of a `K(Z, 1)` simplex: the values on consecutive vertex pairs.
/// A simplex is nondegenerate exactly when no letter vanishes.
fn kz_one_word(dim: i64, g: &Gen) -> Vec<BigInt> {
    let z = FgAbelianGroup::free(1);
    let s = EmSimplex::from_gen(EmSpace::K, &z, 1, dim, g);
    (0..dim as usize)
        .map(|i| s.value(&[i, i + 1]).coords()[0].clone())
        .collect()
}

/// The simplex with the given letters; entry `(i, j)` carries the sum of
/// letters `i..j`.
fn kz_one_simplex(word: &[BigInt]) -> EmSimplex {
    let z = FgAbelianGroup::free(1);
    let dim = word.len() as i64;
    let mut out = EmSimplex::zero(EmSpace::K, &z, 1, dim);
    for i in 0..word.len() {
        let mut acc = BigInt::from(0);
        for j in i..word.len() {
            acc += &word[j];
            out.set(vec![i, j + 1], z.element(vec![acc.clone()]));
        }
    }
    out
}

fn kz_one_gen(word: &[BigInt]) -> Gen {
    kz_one_simplex(word).to_gen()
}

/// The fragment of the boundary kept by the discrete vector field on words:
/// a word ending in the letter `1` (of length at least two) is matched with
/// the word that absorbs that letter into its predecessor.  Everything else
/// maps to zero.
fn kz_one_matched_d(degree: i64, g: &Gen) -> Chain {
    let mut out = Chain::zero(degree - 1);
    if degree < 2 {
        return out;
    }
    let w = kz_one_word(degree, g);
    let m = degree as usize;
    if w[m - 1] != BigInt::one() {
        return out;
    }
    let b = w[m - 2].clone();
    if b > BigInt::from(0) {
        let mut shorter = w[..m - 2].to_vec();
        shorter.push(b + 1);
        out.add_term(kz_one_gen(&shorter), sign(degree - 1));
    } else {
        let shorter = w[..m - 1].to_vec();
        out.add_term(kz_one_gen(&shorter), sign(degree));
    }
    out
}

/// The vector-field homotopy pairing each unmatched word with the matched
/// word above it: the last letter sheds a `1` (positive case) or gains one
/// (negative case).
fn kz_one_matched_h(degree: i64, g: &Gen) -> Chain {
    let mut out = Chain::zero(degree + 1);
    if degree < 1 {
        return out;
    }
    let w = kz_one_word(degree, g);
    let k = degree as usize;
    let c = w[k - 1].clone();
    if c == BigInt::one() {
        return out;
    }
    if c > BigInt::from(0) {
        let mut longer = w.clone();
        longer[k - 1] = c - 1;
        longer.push(BigInt::one());
        out.add_term(kz_one_gen(&longer), sign(degree));
    } else {
        let mut longer = w;
        longer.push(BigInt::one());
        out.add_term(kz_one_gen(&longer), sign(degree + 1));
    }
    out
}

struct KzOneMatchedOps;

impl ComplexOps for KzOneMatchedOps {
    fn d(&self, degree: i64, gen: &Gen) -> Chain {
        kz_one_matched_d(degree, gen)
    }

    fn basis(&self, _degree: i64) -> Option<Vec<Gen>> {
        None
    }

    fn degree_bound(&self) -> i64 {
        UNBOUNDED_DIM
    }
}

/// Strong equivalence of the chains of `K(Z, 1)` with a two-generator
/// circle complex, obtained from a discrete vector field on words and the
/// perturbation lemma.
fn kz_one(cap: usize) -> Result<StrongEquivalence, ChainError> {
    let ck = normalized_chains(&k_space(&FgAbelianGroup::free(1), 1));
    let matched = Complex::new(KzOneMatchedOps);

    let mut circle = ExplicitComplex::new(UNBOUNDED_DIM);
    let vertex = kz_one_gen(&[]);
    let loop_gen = kz_one_gen(&[BigInt::one()]);
    circle.add_generator(0, vertex.clone());
    circle.add_generator(1, loop_gen.clone());
    let circle = Complex::new(circle);

    let f0 = {
        let (vertex, loop_gen) = (vertex.clone(), loop_gen.clone());
        ChainMap::new(matched.clone(), circle.clone(), 0, move |deg, g| {
            let critical = (deg == 0 && *g == vertex) || (deg == 1 && *g == loop_gen);
            if critical {
                Chain::gen(deg, g.clone())
            } else {
                Chain::zero(deg)
            }
        })
    };
    let g0 = ChainMap::new(circle.clone(), matched.clone(), 0, |deg, g| {
        Chain::gen(deg, g.clone())
    });
    let h0 = ChainMap::new(matched.clone(), matched.clone(), 1, |deg, g| {
        kz_one_matched_h(deg, g)
    });
    let r0 = Reduction::new(f0, g0, h0);

    let delta = {
        let ck = ck.clone();
        ChainMap::new(matched.clone(), matched.clone(), -1, move |deg, g| {
            ck.d_gen(deg, g).sub(&kz_one_matched_d(deg, g))
        })
    };
    let right = perturb_onto(&r0, &delta, cap, ck.clone())?;
    Ok(StrongEquivalence::new(Reduction::identity(&ck), right))
}

// ---------------------------------------------------------------------------
// the telescope: K(Z, n) for n >= 2

fn fiber_degree_of(degree: i64, g: &Gen) -> i64 {
    degree - untensor_gen(g).0
}

/// Subcomplex of a twisted tensor product spanned by the generators with a
/// positive fiber degree.  Requires the twisted differential to preserve
/// fiber positivity, which holds when the fiber model is trivial in degree
/// zero apart from its basepoint and has no differential out of degree one.
struct FiberPositiveOps {
    total: Complex,
}

impl ComplexOps for FiberPositiveOps {
    fn d(&self, degree: i64, gen: &Gen) -> Chain {
        let image = self.total.d_gen(degree, gen);
        debug_assert!(
            image.terms().all(|(g, _)| fiber_degree_of(degree - 1, g) >= 1),
            "twisted differential must preserve fiber positivity"
        );
        image
    }

    fn basis(&self, degree: i64) -> Option<Vec<Gen>> {
        let full = self.total.basis(degree)?;
        Some(
            full.into_iter()
                .filter(|g| fiber_degree_of(degree, g) >= 1)
                .collect(),
        )
    }

    fn degree_bound(&self) -> i64 {
        self.total.degree_bound()
    }
}

/// One level of the inductive model for `K(Z, n)`: everything that depends
/// only on the level below, shared by all budget instantiations.
struct KzLevel {
    n: i64,
    cap: usize,
    /// Effective fiber model truncated at its minimal positive degree.
    a_tilde: Complex,
    /// Fiber-positive part of the twisted tensor model of the total space.
    s: Complex,
    /// One-point target of the total-space contraction.
    p: Complex,
    /// Cone of the inclusion of the fiber-positive part into the total
    /// model; reduces both onto the base chains and onto the cone model.
    m: Complex,
    /// The cone model: shifted fiber-positive part plus the point.
    bot: Complex,
    /// Equivalence `base chains ⇐ cone ⇒ cone model`.
    se_step: StrongEquivalence,
    /// Twist summand of the differential of the fiber-positive part (the
    /// difference from the untwisted tensor differential).
    delta_s: ChainMap,
}

fn kz_level(n: i64, degree_bound: i64, cap: usize) -> Result<KzLevel, ChainError> {
    debug_assert!(n >= 2);
    let z = FgAbelianGroup::free(1);
    let fiber_se = kz_strong_equivalence(n - 1, degree_bound, cap)?;
    let base_set = k_space(&z, n);
    let cb = normalized_chains(&base_set);

    let a = fiber_se.effective().clone();
    let a0 = a.basis(0).expect("fiber model enumerates degree zero");
    assert_eq!(a0.len(), 1, "fiber model must be a single point in degree zero");
    let pt_a = a0[0].clone();
    debug_assert!(a
        .basis(1)
        .map_or(true, |b1| b1.iter().all(|g| a.d_gen(1, g).is_zero())));
    let a_tilde = with_min_degree(&a, n - 1);

    let tw = {
        let group = z.clone();
        twisted_product(&base_set, &z, n - 1, move |u| {
            em_simplex_value(EmSpace::K, &group, n, u)
        })
    };
    let base_se = StrongEquivalence::identity(&cb);
    let (ctw, se_total) = twisted_tensor_equivalence(&tw, &base_se, &fiber_se, cap)?;
    let total = se_total.effective().clone();
    let plain = tensor(&cb, &a);

    let s = Complex::new(FiberPositiveOps { total: total.clone() });
    let rho_tw = kz_tw_contraction(&tw, &ctw);
    let rho_total = reduction_through(&se_total, &rho_tw);
    let p = rho_total.bottom().clone();

    let inclusion = {
        let total = total.clone();
        ChainMap::new(s.clone(), total, 0, |deg, g| Chain::gen(deg, g.clone()))
    };
    let m = cone(&inclusion);
    let bot = cone_block(&s, &p);

    // Left leg: the cone reduces onto the base chains.  The fiber-degree
    // zero part of the total model is a copy of the base chains because the
    // twisted differential never lands in fiber degree zero.
    let big_f = {
        let cb = cb.clone();
        ChainMap::new(m.clone(), cb.clone(), 0, move |deg, g| {
            let (tag, inner) = g.as_tag().expect("cone generator");
            if tag == CONE_TARGET && fiber_degree_of(deg, inner) == 0 {
                let (_, base_gen, _) = untensor_gen(inner);
                Chain::gen(deg, base_gen.clone())
            } else {
                Chain::zero(deg)
            }
        })
    };
    let big_g = {
        let (total, cb, pt_a) = (total.clone(), cb.clone(), pt_a.clone());
        ChainMap::new(cb.clone(), m.clone(), 0, move |deg, base_gen| {
            let lift = tensor_gen(deg, base_gen, &pt_a);
            let mut out = Chain::gen(deg, Gen::tag(CONE_TARGET, lift.clone()));
            let image = total.d_gen(deg, &lift);
            debug_assert!({
                let mut fiber_zero = Chain::zero(deg - 1);
                for (g, c) in image.terms() {
                    if fiber_degree_of(deg - 1, g) == 0 {
                        fiber_zero.add_term(g.clone(), c.clone());
                    }
                }
                let expected = cb
                    .d_gen(deg, base_gen)
                    .map_terms(deg - 1, |h| Chain::gen(deg - 1, tensor_gen(deg - 1, h, &pt_a)));
                fiber_zero == expected
            });
            for (g, c) in image.terms() {
                if fiber_degree_of(deg - 1, g) >= 1 {
                    out.add_term(Gen::tag(CONE_SOURCE, g.clone()), -c);
                }
            }
            out
        })
    };
    let big_h = ChainMap::new(m.clone(), m.clone(), 1, move |deg, g| {
        let mut out = Chain::zero(deg + 1);
        if let Some((tag, inner)) = g.as_tag() {
            if tag == CONE_TARGET && fiber_degree_of(deg, inner) >= 1 {
                out.add_term(Gen::tag(CONE_SOURCE, inner.clone()), BigInt::one());
            }
        }
        out
    });
    let left = Reduction::new(big_f, big_g, big_h);

    // Right leg: the cone reduces onto the cone model, using the
    // total-space contraction on the target summand.
    let f_right = {
        let rho_f = rho_total.f.clone();
        ChainMap::new(m.clone(), bot.clone(), 0, move |deg, g| {
            let (tag, inner) = g.as_tag().expect("cone generator");
            if tag == CONE_SOURCE {
                Chain::gen(deg, g.clone())
            } else {
                rho_f
                    .apply_gen(deg, inner)
                    .map_terms(deg, |pg| Chain::gen(deg, Gen::tag(CONE_TARGET, pg.clone())))
            }
        })
    };
    let g_right = {
        let (rho_g, rho_h) = (rho_total.g.clone(), rho_total.h.clone());
        ChainMap::new(bot.clone(), m.clone(), 0, move |deg, g| {
            let (tag, inner) = g.as_tag().expect("cone generator");
            if tag == CONE_SOURCE {
                let mut out = Chain::gen(deg, g.clone());
                for (t, c) in rho_h.apply_gen(deg - 1, inner).terms() {
                    out.add_term(Gen::tag(CONE_TARGET, t.clone()), -c);
                }
                out
            } else {
                rho_g
                    .apply_gen(deg, inner)
                    .map_terms(deg, |t| Chain::gen(deg, Gen::tag(CONE_TARGET, t.clone())))
            }
        })
    };
    let h_right = {
        let rho_h = rho_total.h.clone();
        ChainMap::new(m.clone(), m.clone(), 1, move |deg, g| {
            let (tag, inner) = g.as_tag().expect("cone generator");
            let mut out = Chain::zero(deg + 1);
            if tag == CONE_TARGET {
                for (t, c) in rho_h.apply_gen(deg, inner).terms() {
                    out.add_term(Gen::tag(CONE_TARGET, t.clone()), c.clone());
                }
            }
            out
        })
    };
    let right = Reduction::new(f_right, g_right, h_right);
    let se_step = StrongEquivalence::new(left, right);

    let delta_s = {
        let (total, plain) = (total.clone(), plain.clone());
        ChainMap::new(s.clone(), s.clone(), -1, move |deg, g| {
            let diff = total.d_gen(deg, g).sub(&plain.d_gen(deg, g));
            debug_assert!(
                diff.terms().all(|(h, _)| fiber_degree_of(deg - 1, h) >= 1),
                "twist summand must be fiber positive"
            );
            diff
        })
    };

    Ok(KzLevel { n, cap, a_tilde, s, p, m, bot, se_step, delta_s })
}

/// Unrolls the model of one level to the requested enumeration budget.
///
/// The fiber-positive part of the total model is a tensor product of the
/// base chains with the truncated fiber model, so substituting the model of
/// the *same* level with a smaller budget for the base-chain factor (and
/// restoring the twist by perturbation) yields a model whose cone with the
/// point enumerates one step further.  Each substitution costs `n` degrees
/// of budget, and the recursion bottoms out in the truncated cone model,
/// which is exact up to degree `n`.
fn kz_rec(lvl: &KzLevel, budget: i64) -> Result<StrongEquivalence, ChainError> {
    if lvl.n > budget {
        let s_trunc = with_min_degree(&lvl.s, lvl.n - 1);
        let bot_trunc = cone_block(&s_trunc, &lvl.p);
        let right = lvl.se_step.right.rehouse(&lvl.m, &bot_trunc);
        return Ok(StrongEquivalence::new(lvl.se_step.left.clone(), right));
    }
    let inner = kz_rec(lvl, budget - lvl.n)?;
    let se_s0 = tensor_strong_equivalence(&inner, &StrongEquivalence::identity(&lvl.a_tilde));
    let delta = lvl
        .delta_s
        .rebase(se_s0.original().clone(), se_s0.original().clone(), 0, 0);
    let se_s1 = se_s0.perturb(&delta, lvl.cap)?;
    // The perturbed tensor product has the differential of the
    // fiber-positive part, so it may be re-housed onto it.
    let se_s = StrongEquivalence::new(se_s1.left.rehouse(se_s1.middle(), &lvl.s), se_s1.right);
    let zero_glue = ChainMap::zero(&lvl.s, &lvl.p, 0);
    let cone_se0 = cone_strong_equivalence(
        &se_s,
        &StrongEquivalence::identity(&lvl.p),
        &zero_glue,
        lvl.cap,
    )?;
    let cone_se = StrongEquivalence::new(
        cone_se0.left.rehouse(cone_se0.middle(), &lvl.bot),
        cone_se0.right,
    );
    Ok(se_compose(&lvl.se_step, &cone_se))
}

/// Strong equivalence from the normalized chains of `K(Z, n)` onto a model
/// whose basis is enumerable (and exact) at least up to `degree_bound`.
pub(crate) fn kz_strong_equivalence(
    n: i64,
    degree_bound: i64,
    cap: usize,
) -> Result<StrongEquivalence, ChainError> {
    assert!(n >= 1);
    if n == 1 {
        return kz_one(cap);
    }
    let lvl = kz_level(n, degree_bound, cap)?;
    kz_rec(&lvl, degree_bound)
}

// ---------------------------------------------------------------------------
// dispatch over the coefficient group

/// Strong equivalence from the normalized chains of `K(pi, n)` onto a
/// complex with enumerable basis in all degrees up to `degree_bound`.
///
/// The original side of the returned equivalence is generator-compatible
/// with `normalized_chains(&k_space(pi, n))`: the same generator encodings
/// and the same differential, though possibly a distinct handle.
pub fn em_effective_homology(
    pi: &FgAbelianGroup,
    n: i64,
    degree_bound: i64,
) -> Result<StrongEquivalence, ChainError> {
    assert!(n >= 1, "cochain degree must be positive");
    assert!(degree_bound >= 0);
    if pi.is_finite() {
        let chains = normalized_chains(&k_space(pi, n));
        return Ok(StrongEquivalence::identity(&chains));
    }
    if pi.torsion().is_empty() && pi.free_rank() == 1 {
        return kz_strong_equivalence(n, degree_bound, NILPOTENCY_CAP);
    }

    // Split off one free factor: K(pi, n) is the product of the classifying
    // spaces of the factor and the complement, and the chains of a product
    // reduce onto the tensor product of the factor models.
    let z = FgAbelianGroup::free(1);
    let rest = FgAbelianGroup::new(pi.free_rank() - 1, pi.torsion().to_vec());
    let se_z = em_effective_homology(&z, n, degree_bound)?;
    let se_rest = em_effective_homology(&rest, n, degree_bound)?;

    let z_set = k_space(&z, n);
    let rest_set = k_space(&rest, n);
    let prod_set = product(&z_set, &rest_set);
    let cprod = normalized_chains(&prod_set);
    let tens = tensor(se_z.original(), se_rest.original());
    let r_ez = ez_reduction_onto(&z_set, &rest_set, &cprod, &tens);
    let se_ez = StrongEquivalence::new(Reduction::identity(&cprod), r_ez);
    let se_t0 = tensor_strong_equivalence(&se_z, &se_rest);
    let se_t = StrongEquivalence::new(se_t0.left.rehouse(se_t0.middle(), &tens), se_t0.right);
    let se_prod = se_compose(&se_ez, &se_t);

    // Conjugate through the coordinate isomorphism between K(pi, n) and the
    // product of the factor spaces.
    let rank = pi.rank();
    let rest_rank = rank - 1;
    let mut proj_z_rows = vec![vec![0i64; rank]];
    proj_z_rows[0][0] = 1;
    let proj_z = AbHom::from_i64(pi.clone(), z.clone(), &proj_z_rows);
    let mut proj_rest_rows = vec![vec![0i64; rank]; rest_rank];
    for (j, row) in proj_rest_rows.iter_mut().enumerate() {
        row[j + 1] = 1;
    }
    let proj_rest = AbHom::from_i64(pi.clone(), rest.clone(), &proj_rest_rows);
    let mut emb_z_rows = vec![vec![0i64; 1]; rank];
    emb_z_rows[0][0] = 1;
    let emb_z = AbHom::from_i64(z.clone(), pi.clone(), &emb_z_rows);
    let mut emb_rest_rows = vec![vec![0i64; rest_rank]; rank];
    for j in 0..rest_rank {
        emb_rest_rows[j + 1][j] = 1;
    }
    let emb_rest = AbHom::from_i64(rest.clone(), pi.clone(), &emb_rest_rows);

    let ck = normalized_chains(&k_space(pi, n));
    let split = {
        let (pi, z_set, rest_set) = (pi.clone(), z_set.clone(), rest_set.clone());
        ChainMap::new(ck.clone(), cprod.clone(), 0, move |deg, g| {
            let value = EmSimplex::from_gen(EmSpace::K, &pi, n, deg, g);
            let u = value.push(&proj_z).canonical_simplex();
            let v = value.push(&proj_rest).canonical_simplex();
            let s = canonical_pair(&z_set, &rest_set, u, v);
            debug_assert!(s.is_nondegenerate(), "coordinate split must stay nondegenerate");
            Chain::gen(deg, s.core().clone())
        })
    };
    let merge = {
        let (z, rest) = (z.clone(), rest.clone());
        ChainMap::new(cprod.clone(), ck.clone(), 0, move |deg, g| {
            let (u, v) = pair_parts(deg, g);
            let zu = em_simplex_value(EmSpace::K, &z, n, &u).push(&emb_z);
            let zv = em_simplex_value(EmSpace::K, &rest, n, &v).push(&emb_rest);
            let s = zu
                .add(&zv)
                .expect("components share a simplex shape")
                .canonical_simplex();
            debug_assert!(s.is_nondegenerate(), "coordinate merge must stay nondegenerate");
            Chain::gen(deg, s.core().clone())
        })
    };

    let left = Reduction::new(
        merge.compose(&se_prod.left.f),
        se_prod.left.g.compose(&split),
        se_prod.left.h.clone(),
    );
    Ok(StrongEquivalence::new(left, se_prod.right))
}
