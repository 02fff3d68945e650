//! The Eilenberg-Zilber reduction from the chains of a product to the
//! tensor product of the factors' chains.
//!
//! The projection is the front-face/back-face (Alexander-Whitney) map, the
//! inclusion is the shuffle map with inversion signs, and the homotopy is
//! built once per dimension on the universal pair over `Δⁿ×Δⁿ` and
//! transported to arbitrary simplices by operator application.  The raw
//! homotopy satisfies the homotopy law by construction; normalization then
//! enforces the side conditions.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Zero;

use super::{
    canonical_pair, normalized_chains, pair_core, pair_parts, product, simplex_from_vertices,
    standard_simplex, vertex_sequence, verts_to_gen, Simplex, SimplicialSet,
};
use crate::chain::{
    normalize_homotopy, tensor, tensor_gen, untensor_gen, Chain, ChainMap, Complex, Gen,
    Reduction,
};

/// Front-face/back-face decomposition of one product simplex; terms with a
/// degenerate component are dropped.
fn aw_terms(
    x: &SimplicialSet,
    y: &SimplicialSet,
    n: i64,
    u: &Simplex,
    v: &Simplex,
) -> Vec<(i64, Gen, Gen)> {
    let mut out = Vec::new();
    for p in 0..=n {
        let front: Vec<usize> = (0..=p as usize).collect();
        let back: Vec<usize> = (p as usize..=n as usize).collect();
        let fr = x.apply_operator(u, &front);
        let bk = y.apply_operator(v, &back);
        if fr.is_nondegenerate() && bk.is_nondegenerate() {
            out.push((p, fr.core().clone(), bk.core().clone()));
        }
    }
    out
}

/// All shuffles of a `p`-simplex with a `q`-simplex: complementary
/// degeneracy sets with the inversion-count sign.
fn shuffle_terms(p: i64, q: i64, xc: &Gen, yc: &Gen) -> Vec<(Simplex, Simplex, BigInt)> {
    let n = (p + q) as usize;
    let x0 = Simplex::nondegenerate(p, xc.clone());
    let y0 = Simplex::nondegenerate(q, yc.clone());
    let mut out = Vec::new();
    for b in (0..n).combinations(q as usize) {
        let a: Vec<usize> = (0..n).filter(|j| !b.contains(j)).collect();
        let inversions: usize = a
            .iter()
            .map(|&ai| b.iter().filter(|&&bi| bi < ai).count())
            .sum();
        let sign = if inversions % 2 == 0 {
            BigInt::from(1)
        } else {
            BigInt::from(-1)
        };
        out.push((
            x0.degenerate_by_set(&b),
            y0.degenerate_by_set(&a),
            sign,
        ));
    }
    out
}

type PairChain = Vec<(Simplex, Simplex, BigInt)>;

fn add_term(acc: &mut BTreeMap<(Simplex, Simplex), BigInt>, a: Simplex, b: Simplex, c: BigInt) {
    let entry = acc.entry((a, b)).or_insert_with(BigInt::zero);
    *entry += c;
    // Zero entries are harmless and rare; keep the map simple.
}

fn h_univ_store() -> &'static Mutex<HashMap<i64, Arc<PairChain>>> {
    static STORE: OnceLock<Mutex<HashMap<i64, Arc<PairChain>>>> = OnceLock::new();
    STORE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Contracting-homotopy value on the universal element `(ι,ι)` of
/// `Δⁿ×Δⁿ`, as a chain of jointly nondegenerate pairs in degree `n+1`.
///
/// Recursion: subtract the shuffle-of-front-back part and the pushforwards
/// of the lower universal values along the diagonal faces; the remainder is
/// a cycle (asserted) and is coned off by prepending the minimum vertex
/// `(0,0)`.
fn h_univ(n: i64) -> Arc<PairChain> {
    if let Some(hit) = h_univ_store().lock().unwrap().get(&n) {
        return hit.clone();
    }
    let value = Arc::new(compute_h_univ(n));
    h_univ_store()
        .lock()
        .unwrap()
        .insert(n, value.clone());
    value
}

fn compute_h_univ(n: i64) -> PairChain {
    if n <= 0 {
        return Vec::new();
    }
    let dn = standard_simplex(n as usize);
    let iota_verts: Vec<usize> = (0..=n as usize).collect();
    let iota = Simplex::nondegenerate(n, verts_to_gen(&iota_verts));

    let mut w: BTreeMap<(Simplex, Simplex), BigInt> = BTreeMap::new();
    add_term(&mut w, iota.clone(), iota.clone(), BigInt::from(1));
    for (p, frc, bkc) in aw_terms(&dn, &dn, n, &iota, &iota) {
        for (su, sv, sign) in shuffle_terms(p, n - p, &frc, &bkc) {
            add_term(&mut w, su, sv, -sign);
        }
    }
    let lower = h_univ(n - 1);
    for i in 0..=n as usize {
        let face_sign = if i % 2 == 0 {
            BigInt::from(-1)
        } else {
            BigInt::from(1)
        };
        for (a, b, c) in lower.iter() {
            let sa = simplex_from_vertices(&coface_shift(&vertex_sequence(a), i));
            let sb = simplex_from_vertices(&coface_shift(&vertex_sequence(b), i));
            add_term(&mut w, sa, sb, &face_sign * c);
        }
    }

    #[cfg(debug_assertions)]
    assert_cycle(&dn, n, &w);

    // Prepend the minimum vertex of the poset [n]×[n].
    let mut out: BTreeMap<(Simplex, Simplex), BigInt> = BTreeMap::new();
    for ((a, b), c) in w {
        if c.is_zero() {
            continue;
        }
        let va = vertex_sequence(&a);
        let vb = vertex_sequence(&b);
        if va[0] == 0 && vb[0] == 0 {
            continue;
        }
        let mut xs = vec![0];
        xs.extend_from_slice(&va);
        let mut ys = vec![0];
        ys.extend_from_slice(&vb);
        add_term(
            &mut out,
            simplex_from_vertices(&xs),
            simplex_from_vertices(&ys),
            c,
        );
    }
    out.into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((a, b), c)| (a, b, c))
        .collect()
}

/// Vertex relabeling along the coface skipping `i`.
fn coface_shift(verts: &[usize], i: usize) -> Vec<usize> {
    verts
        .iter()
        .map(|&v| if v >= i { v + 1 } else { v })
        .collect()
}

#[cfg(debug_assertions)]
fn assert_cycle(dn: &SimplicialSet, n: i64, w: &BTreeMap<(Simplex, Simplex), BigInt>) {
    let prod = product(dn, dn);
    let chains = normalized_chains(&prod);
    let mut chain = Chain::zero(n);
    for ((a, b), c) in w {
        if !c.is_zero() {
            chain.add_term(pair_core(a, b), c.clone());
        }
    }
    assert!(
        chains.d(&chain).is_zero(),
        "universal homotopy remainder must be a cycle in dimension {n}"
    );
}

/// Builds the reduction onto caller-supplied handles: `top` must be the
/// normalized chains of `product(x, y)` and `bottom` the tensor product of
/// the factors' normalized chains.
pub(crate) fn ez_reduction_onto(
    x: &SimplicialSet,
    y: &SimplicialSet,
    top: &Complex,
    bottom: &Complex,
) -> Reduction {
    let (xs, ys) = (x.clone(), y.clone());
    let f = ChainMap::new(top.clone(), bottom.clone(), 0, move |n, g| {
        let (u, v) = pair_parts(n, g);
        let mut out = Chain::zero(n);
        for (p, a, b) in aw_terms(&xs, &ys, n, &u, &v) {
            out.add_term(tensor_gen(p, &a, &b), BigInt::from(1));
        }
        out
    });

    let g = ChainMap::new(bottom.clone(), top.clone(), 0, move |n, tg| {
        let (p, xc, yc) = untensor_gen(tg);
        let mut out = Chain::zero(n);
        for (su, sv, sign) in shuffle_terms(p, n - p, xc, yc) {
            out.add_term(pair_core(&su, &sv), sign);
        }
        out
    });

    let (xs, ys) = (x.clone(), y.clone());
    let h_raw = ChainMap::new(top.clone(), top.clone(), 1, move |n, g| {
        let (u, v) = pair_parts(n, g);
        let mut out = Chain::zero(n + 1);
        for (a, b, c) in h_univ(n).iter() {
            let ua = xs.apply_operator(&u, &vertex_sequence(a));
            let vb = ys.apply_operator(&v, &vertex_sequence(b));
            let pr = canonical_pair(&xs, &ys, ua, vb);
            if pr.is_nondegenerate() {
                out.add_term(pr.core().clone(), c.clone());
            }
        }
        out
    });

    normalize_homotopy(f, g, h_raw)
}

/// The Eilenberg-Zilber reduction `C(X×Y) ⇒ C(X)⊗C(Y)` with fresh
/// complexes.
pub fn ez_reduction(x: &SimplicialSet, y: &SimplicialSet) -> Reduction {
    let xy = product(x, y);
    let top = normalized_chains(&xy);
    let bottom = tensor(&normalized_chains(x), &normalized_chains(y));
    ez_reduction_onto(x, y, &top, &bottom)
}
