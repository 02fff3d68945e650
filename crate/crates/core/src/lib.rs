//! Exact algebraic-topology computations for finite simplicial complexes.
//!
//! The crate is organised bottom-up:
//!
//! * [`abelian`]: integer matrices, Smith normal form, finitely generated
//!   abelian groups in canonical form, and homomorphism enumeration.
//! * [`chain`]: chain complexes with lazily evaluated differentials,
//!   reductions, strong equivalences, and the perturbation calculus on top
//!   of which every larger construction is built.
//! * [`simplicial`]: simplicial sets, finite complexes given by facet lists,
//!   products and the Eilenberg-Zilber reduction.
//! * [`emspaces`]: simplicial Eilenberg-MacLane spaces `K(pi, n)` and
//!   `E(pi, n)`, the evaluation bijection, and their effective homology.
//! * [`postnikov`]: Postnikov stages of a simply connected complex, built
//!   from iterated principal fibrations.
//! * [`equivalence`]: the stage-by-stage homotopy-equivalence decider.

pub mod abelian;
pub mod chain;
pub mod emspaces;
pub mod equivalence;
pub mod postnikov;
pub mod simplicial;
