//! Reductions (strong deformation retract data), their verification, the
//! perturbation lemmas, and strong equivalences.
//!
//! A reduction `(f, g, h): C ⇒ D` consists of chain maps `f: C → D`,
//! `g: D → C` and a degree `+1` operator `h` on `C` subject to
//!
//! 1. `f ∘ g = id`
//! 2. `g ∘ f + d∘h + h∘d = id`
//! 3. `f ∘ h = 0`
//! 4. `h ∘ g = 0`
//! 5. `h ∘ h = 0`
//!
//! A strong equivalence is a span of two reductions out of a common middle
//! complex; the bottom of the right leg is the effective model.

use super::build::{direct_sum, opaque_basis, sum_inject, sum_project, SUM_LEFT, SUM_RIGHT};
use super::{Chain, ChainError, ChainMap, Complex, ComplexOps, Gen};

/// Iteration budget for the geometric series in the perturbation lemma.  The
/// splittings used in this crate all terminate after at most
/// `degree_bound`-many steps or after paths of bounded combinatorial length;
/// the cap exists to turn a misuse into an error instead of a hang.
pub const NILPOTENCY_CAP: usize = 10_000;

#[derive(Clone)]
pub struct Reduction {
    pub f: ChainMap,
    pub g: ChainMap,
    pub h: ChainMap,
}

impl Reduction {
    pub fn new(f: ChainMap, g: ChainMap, h: ChainMap) -> Reduction {
        debug_assert_eq!(f.shift(), 0);
        debug_assert_eq!(g.shift(), 0);
        debug_assert_eq!(h.shift(), 1);
        Reduction { f, g, h }
    }

    pub fn top(&self) -> &Complex {
        self.f.source()
    }

    pub fn bottom(&self) -> &Complex {
        self.f.target()
    }

    pub fn identity(c: &Complex) -> Reduction {
        Reduction::new(
            ChainMap::identity(c),
            ChainMap::identity(c),
            ChainMap::zero(c, c, 1),
        )
    }

    /// Serial composition: `self: A ⇒ B` followed by `next: B ⇒ C` yields
    /// `A ⇒ C` with homotopy `h₁ + g₁∘h₂∘f₁`.
    pub fn then(&self, next: &Reduction) -> Reduction {
        debug_assert!(self.bottom().same_as(next.top()));
        let f = next.f.compose(&self.f);
        let g = self.g.compose(&next.g);
        let h = self.h.add(&self.g.compose(&next.h).compose(&self.f));
        Reduction::new(f, g, h)
    }

    /// Rebuilds the three maps over replacement complex handles that share
    /// the generator encoding (used after perturbing differentials).
    pub(crate) fn rehouse(&self, top: &Complex, bottom: &Complex) -> Reduction {
        Reduction::new(
            self.f.rebase(top.clone(), bottom.clone(), 0, 0),
            self.g.rebase(bottom.clone(), top.clone(), 0, 0),
            self.h.rebase(top.clone(), top.clone(), 0, 0),
        )
    }
}

impl std::fmt::Debug for Reduction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Reduction({:?} => {:?})", self.top(), self.bottom())
    }
}

#[derive(Clone, Debug)]
pub struct LawCheck {
    pub law: &'static str,
    pub samples: usize,
    pub failures: usize,
}

/// Outcome of checking the five reduction laws (plus chain-map conditions)
/// on a set of sample chains.
#[derive(Clone, Debug)]
pub struct LawReport {
    pub checks: Vec<LawCheck>,
}

impl LawReport {
    pub fn is_ok(&self) -> bool {
        self.checks.iter().all(|c| c.failures == 0)
    }

    pub fn total_samples(&self) -> usize {
        self.checks.iter().map(|c| c.samples).sum()
    }
}

impl std::fmt::Display for LawReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in &self.checks {
            writeln!(f, "{}: {}/{} failed", c.law, c.failures, c.samples)?;
        }
        Ok(())
    }
}

/// Checks all reduction laws on the supplied top-level sample chains.  Bottom
/// samples are taken to be the `f`-images together with any finite basis of
/// the bottom complex.
pub fn verify_reduction(r: &Reduction, samples: &[Chain]) -> LawReport {
    let top = r.top().clone();
    let bottom = r.bottom().clone();

    let mut bottom_samples: Vec<Chain> = samples.iter().map(|x| r.f.apply(x)).collect();
    for n in 0..=bottom.degree_bound().min(64) {
        if let Some(basis) = bottom.basis(n) {
            for g in basis {
                bottom_samples.push(Chain::gen(n, g));
            }
        }
    }

    let mut checks = Vec::new();
    let mut run = |law: &'static str, chains: &[Chain], test: &dyn Fn(&Chain) -> bool| {
        let failures = chains.iter().filter(|c| !test(c)).count();
        checks.push(LawCheck { law, samples: chains.len(), failures });
    };

    run("f∘g = id", &bottom_samples, &|y| r.f.apply(&r.g.apply(y)) == *y);
    run("g∘f + [d,h] = id", samples, &|x| {
        let gf = r.g.apply(&r.f.apply(x));
        let dh = top.d(&r.h.apply(x));
        let hd = r.h.apply(&top.d(x));
        gf.add(&dh).add(&hd) == *x
    });
    run("f∘h = 0", samples, &|x| r.f.apply(&r.h.apply(x)).is_zero());
    run("h∘g = 0", &bottom_samples, &|y| r.h.apply(&r.g.apply(y)).is_zero());
    run("h∘h = 0", samples, &|x| r.h.apply(&r.h.apply(x)).is_zero());
    run("f chain map", samples, &|x| {
        r.f.apply(&top.d(x)) == bottom.d(&r.f.apply(x))
    });
    run("g chain map", &bottom_samples, &|y| {
        r.g.apply(&bottom.d(y)) == top.d(&r.g.apply(y))
    });

    LawReport { checks }
}

/// Repairs the side conditions of near-reduction data.  Requires only
/// `f∘g = id`, the homotopy law, and that `f`, `g` are chain maps; returns a
/// reduction satisfying all five laws.
///
/// First `h ← (1−gf)∘h∘(1−gf)` enforces `f∘h = 0` and `h∘g = 0`, then
/// `h ← h∘d∘h` enforces `h∘h = 0` while preserving the rest.
pub fn normalize_homotopy(f: ChainMap, g: ChainMap, h: ChainMap) -> Reduction {
    let top = f.source().clone();
    let id = ChainMap::identity(&top);
    let p = id.sub(&g.compose(&f));
    let h1 = p.compose(&h).compose(&p);
    let d = top.d_map();
    let h2 = h1.compose(&d).compose(&h1);
    Reduction::new(f, g, h2)
}

/// Complex with the differential of `base` shifted by a degree `-1`
/// perturbation.  The caller is responsible for `(d + δ)² = 0`.
struct PerturbedOps {
    base: Complex,
    delta: ChainMap,
}

impl ComplexOps for PerturbedOps {
    fn d(&self, degree: i64, gen: &Gen) -> Chain {
        self.base
            .d_gen(degree, gen)
            .add(&self.delta.apply_gen(degree, gen))
    }

    fn basis(&self, degree: i64) -> Option<Vec<Gen>> {
        self.base.basis(degree)
    }

    fn degree_bound(&self) -> i64 {
        self.base.degree_bound()
    }
}

/// `base` with `delta` added to its differential.
pub fn perturbed_complex(base: &Complex, delta: &ChainMap) -> Complex {
    debug_assert_eq!(delta.shift(), -1);
    Complex::new(PerturbedOps { base: base.clone(), delta: delta.clone() })
}

/// One application of the geometric series `Σ (-1)^i (h∘δ)^i`.
fn series_apply(h: &ChainMap, delta: &ChainMap, x: &Chain, cap: usize) -> Result<Chain, ChainError> {
    let mut acc = x.clone();
    let mut term = x.clone();
    for _ in 0..cap {
        if term.is_zero() {
            return Ok(acc);
        }
        term = h.apply(&delta.apply(&term)).neg();
        acc.add_assign(&term);
    }
    if term.is_zero() {
        Ok(acc)
    } else {
        Err(ChainError::NonNilpotent(cap))
    }
}

fn series_apply_or_panic(h: &ChainMap, delta: &ChainMap, x: &Chain, cap: usize) -> Chain {
    series_apply(h, delta, x, cap)
        .expect("perturbation series failed to terminate; complex violates the nilpotency assumption")
}

/// Basic perturbation lemma.  Perturbs the top differential of `r` by
/// `delta` and transfers the perturbation to the bottom.
///
/// With `φ = Σ (-1)^i (h∘δ)^i` the new reduction is
/// `f' = f∘(1 − δ∘φ∘h)`, `g' = φ∘g`, `h' = φ∘h`, over the bottom
/// differential perturbed by `δ_D = f∘δ∘φ∘g`.
///
/// If the top complex is effective the series is validated eagerly on every
/// basis generator and `NonNilpotent` is reported as an error; otherwise
/// termination is checked lazily per query.
pub fn perturb(r: &Reduction, delta: &ChainMap, cap: usize) -> Result<Reduction, ChainError> {
    let new_top = perturbed_complex(r.top(), delta);
    perturb_onto(r, delta, cap, new_top)
}

/// As [`perturb`] but the caller supplies the already-perturbed top complex
/// (so several reductions can share one handle).
pub fn perturb_onto(
    r: &Reduction,
    delta: &ChainMap,
    cap: usize,
    new_top: Complex,
) -> Result<Reduction, ChainError> {
    let top = r.top().clone();
    // Eager validation walks every generator up to the degree bound, which is
    // only affordable on small bounded complexes; unbounded carriers (chains
    // of simplicial sets) are validated lazily as elements are touched.
    let eager = top.degree_bound() <= 64;
    if eager && top.is_effective_through(top.degree_bound()) {
        for n in 0..=top.degree_bound() {
            if let Some(basis) = top.basis(n) {
                for gen in basis {
                    series_apply(&r.h, delta, &Chain::gen(n, gen), cap)?;
                }
            }
        }
    }

    let (f, g, h) = (r.f.clone(), r.g.clone(), r.h.clone());
    let (hc, dc) = (h.clone(), delta.clone());
    let bottom = r.bottom().clone();

    let delta_bottom = {
        let (f, g, h, d) = (f.clone(), g.clone(), hc.clone(), dc.clone());
        ChainMap::new(bottom.clone(), bottom.clone(), -1, move |deg, y| {
            let lifted = g.apply_gen(deg, y);
            let phi = series_apply_or_panic(&h, &d, &lifted, cap);
            f.apply(&d.apply(&phi))
        })
    };
    let new_bottom = perturbed_complex(&bottom, &delta_bottom);

    let f_new = {
        let (f, h, d) = (f.clone(), hc.clone(), dc.clone());
        let nb = new_bottom.clone();
        ChainMap::new(new_top.clone(), nb, 0, move |deg, x| {
            let hx = h.apply_gen(deg, x);
            let phi = series_apply_or_panic(&h, &d, &hx, cap);
            let x_chain = Chain::gen(deg, x.clone());
            f.apply(&x_chain.sub(&d.apply(&phi)))
        })
    };
    let g_new = {
        let (g, h, d) = (g.clone(), hc.clone(), dc.clone());
        let nt = new_top.clone();
        ChainMap::new(new_bottom.clone(), nt, 0, move |deg, y| {
            let lifted = g.apply_gen(deg, y);
            series_apply_or_panic(&h, &d, &lifted, cap)
        })
    };
    let h_new = {
        let (h, d) = (hc.clone(), dc.clone());
        ChainMap::new(new_top.clone(), new_top.clone(), 1, move |deg, x| {
            let hx = h.apply_gen(deg, x);
            series_apply_or_panic(&h, &d, &hx, cap)
        })
    };

    Ok(Reduction::new(f_new, g_new, h_new))
}

/// Easy perturbation lemma: a perturbation `δ` of the *bottom* differential
/// lifts to the top as `g∘δ∘f` with the three structure maps unchanged.
pub fn perturb_bottom(r: &Reduction, delta: &ChainMap) -> Reduction {
    let lifted = r.g.compose(delta).compose(&r.f);
    let new_top = perturbed_complex(r.top(), &lifted);
    let new_bottom = perturbed_complex(r.bottom(), delta);
    r.rehouse(&new_top, &new_bottom)
}

/// Span of reductions `original ⇐ middle ⇒ effective`.
#[derive(Clone)]
pub struct StrongEquivalence {
    /// Reduction from the middle onto the complex being modelled.
    pub left: Reduction,
    /// Reduction from the middle onto the effective model.
    pub right: Reduction,
}

impl StrongEquivalence {
    pub fn new(left: Reduction, right: Reduction) -> StrongEquivalence {
        debug_assert!(left.top().same_as(right.top()));
        StrongEquivalence { left, right }
    }

    pub fn identity(c: &Complex) -> StrongEquivalence {
        StrongEquivalence::new(Reduction::identity(c), Reduction::identity(c))
    }

    pub fn original(&self) -> &Complex {
        self.left.bottom()
    }

    pub fn middle(&self) -> &Complex {
        self.left.top()
    }

    pub fn effective(&self) -> &Complex {
        self.right.bottom()
    }

    /// The zigzag `original → effective`.
    pub fn to_effective(&self) -> ChainMap {
        self.right.f.compose(&self.left.g)
    }

    /// The zigzag `effective → original`.
    pub fn from_effective(&self) -> ChainMap {
        self.left.f.compose(&self.right.g)
    }

    /// Degree `+1` operator `H` on the original with
    /// `from_effective ∘ to_effective = id − d∘H − H∘d`.
    pub fn homotopy_correction(&self) -> ChainMap {
        self.left.f.compose(&self.right.h).compose(&self.left.g)
    }

    /// Perturbs the original complex's differential by `delta` and carries
    /// the perturbation through both legs (easy lemma on the left, basic
    /// lemma on the right).
    pub fn perturb(&self, delta: &ChainMap, cap: usize) -> Result<StrongEquivalence, ChainError> {
        let lifted = self.left.g.compose(delta).compose(&self.left.f);
        let new_middle = perturbed_complex(self.middle(), &lifted);
        let new_original = perturbed_complex(self.original(), delta);
        let left = self.left.rehouse(&new_middle, &new_original);
        let right = perturb_onto(&self.right, &lifted, cap, new_middle)?;
        Ok(StrongEquivalence::new(left, right))
    }
}

impl std::fmt::Debug for StrongEquivalence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "StrongEquivalence({:?} <= {:?} => {:?})",
            self.original(),
            self.middle(),
            self.effective()
        )
    }
}

/// Composes two strong equivalences `O ⇐ M₁ ⇒ E₁` and `E₁ ⇐ M₂ ⇒ E₂` into
/// `O ⇐ M ⇒ E₂`.
///
/// The new middle is `M₂ ⊕ K` where `K` carries those elements of `M₁`
/// killed by the right-leg projection of the first equivalence (`K` is
/// contractible via the right homotopy).  The summand is stored as all of
/// `M₁`; every element produced by the structure maps respects the kernel
/// invariant, and only such elements are fed back in.
pub fn se_compose(se1: &StrongEquivalence, se2: &StrongEquivalence) -> StrongEquivalence {
    debug_assert!(se1.effective().same_as(se2.original()));
    let m1 = se1.middle().clone();
    let m2 = se2.middle().clone();
    let middle = opaque_basis(&direct_sum(&m2, &m1));

    let in_m2 = sum_inject(&middle, SUM_LEFT, &m2);
    let in_k = sum_inject(&middle, SUM_RIGHT, &m1);
    let pr_m2 = sum_project(&middle, SUM_LEFT, &m2);
    let pr_k = sum_project(&middle, SUM_RIGHT, &m1);

    let r1 = se1.right.clone();
    let r2 = se2.right.clone();
    let l1 = se1.left.clone();
    let l2 = se2.left.clone();

    // Right leg  M ⇒ E₂:  F(m,k) = r2.f m,  G = (r2.g, 0),  H = (r2.h m, r1.h k).
    let right = Reduction::new(
        r2.f.compose(&pr_m2),
        in_m2.compose(&r2.g),
        in_m2
            .compose(&r2.h)
            .compose(&pr_m2)
            .add(&in_k.compose(&r1.h).compose(&pr_k)),
    );

    // Intermediate reduction  M ⇒ M₁:
    //   F(m,k) = r1.g(l2.f m) + k
    //   G(x)   = (l2.g(r1.f x),  x − r1.g(r1.f x))
    //   H(m,k) = (l2.h m, 0)
    let f_mid = r1
        .g
        .compose(&l2.f)
        .compose(&pr_m2)
        .add(&pr_k);
    let g_mid = {
        let first = in_m2.compose(&l2.g).compose(&r1.f);
        let id_m1 = ChainMap::identity(&m1);
        let second = in_k.compose(&id_m1.sub(&r1.g.compose(&r1.f)));
        first.add(&second)
    };
    let h_mid = in_m2.compose(&l2.h).compose(&pr_m2);
    let to_m1 = Reduction::new(f_mid, g_mid, h_mid);

    let left = to_m1.then(&l1);
    StrongEquivalence::new(left, right)
}
