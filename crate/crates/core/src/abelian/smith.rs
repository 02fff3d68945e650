use super::IntMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Decomposition `u * m * v = d` with `u`, `v` unimodular and `d` diagonal,
/// diagonal entries nonnegative and forming a divisibility chain.
pub struct SmithNormalForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithNormalForm {
    /// Diagonal entries up to the last nonzero one.
    pub fn invariants(&self) -> Vec<BigInt> {
        let r = self.d.rows().min(self.d.cols());
        (0..r)
            .map(|i| self.d.get(i, i).clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariants().len()
    }
}

/// Position of a nonzero entry of minimal absolute value in the submatrix
/// starting at `(t, t)`; ties broken by row then column so the reduction is
/// deterministic.
fn pivot(m: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    let mut best_abs = BigInt::zero();
    for i in t..m.rows() {
        for j in t..m.cols() {
            let v = m.get(i, j);
            if v.is_zero() {
                continue;
            }
            let a = v.abs();
            if best.is_none() || a < best_abs {
                best = Some((i, j));
                best_abs = a;
            }
        }
    }
    best
}

/// Smith normal form by repeated pivoting on the smallest remaining entry.
pub fn smith_normal_form(m: &IntMatrix) -> SmithNormalForm {
    let mut d = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut v = IntMatrix::identity(m.cols());

    let limit = m.rows().min(m.cols());
    let mut t = 0;
    while t < limit {
        let Some((pi, pj)) = pivot(&d, t) else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        // Clear row and column t.  Division leaves remainders smaller than
        // the pivot, so re-pivoting on the minimum terminates.
        loop {
            let mut dirty = false;
            for i in t + 1..d.rows() {
                if !d.get(i, t).is_zero() {
                    let q = -rounddiv(d.get(i, t), d.get(t, t));
                    d.add_row_multiple(i, t, &q);
                    u.add_row_multiple(i, t, &q);
                    if !d.get(i, t).is_zero() {
                        dirty = true;
                    }
                }
            }
            for j in t + 1..d.cols() {
                if !d.get(t, j).is_zero() {
                    let q = -rounddiv(d.get(t, j), d.get(t, t));
                    d.add_col_multiple(j, t, &q);
                    v.add_col_multiple(j, t, &q);
                    if !d.get(t, j).is_zero() {
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
            // A nonzero remainder is strictly smaller than the old pivot;
            // move the new minimum into place and repeat.
            let (pi, pj) = pivot(&d, t).expect("remainder left nonzero entry");
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
        }
        t += 1;
    }

    // Enforce the divisibility chain.  Folding column j into column i puts
    // gcd(d_i, d_j) at (i, i) after another round of clearing.
    loop {
        let mut fixed = true;
        for i in 0..t {
            for j in i + 1..t {
                if !(d.get(j, j) % d.get(i, i)).is_zero() {
                    fixed = false;
                    let one = BigInt::from(1);
                    d.add_col_multiple(i, j, &one);
                    v.add_col_multiple(i, j, &one);
                    // The 2x2 block at (i, i), (j, j) is no longer diagonal;
                    // clear it with the same pivot loop restricted there.
                    clear_pair(&mut d, &mut u, &mut v, i, j);
                }
            }
        }
        if fixed {
            break;
        }
    }

    for i in 0..t {
        if d.get(i, i).is_negative() {
            d.negate_row(i);
            u.negate_row(i);
        }
    }

    SmithNormalForm { u, d, v }
}

/// Restores diagonal form on the 2x2 block at rows/columns `{i, j}` after
/// column `j` was folded into column `i`.  Outside the block the two rows
/// and columns are zero, so elementary operations stay inside it.
fn clear_pair(d: &mut IntMatrix, u: &mut IntMatrix, v: &mut IntMatrix, i: usize, j: usize) {
    loop {
        if d.get(j, i).is_zero() && d.get(i, j).is_zero() {
            return;
        }
        // Smallest nonzero block entry becomes the pivot at (i, i).
        let mut best = (i, i);
        let mut best_abs: Option<BigInt> = None;
        for &(r, c) in &[(i, i), (i, j), (j, i), (j, j)] {
            let x = d.get(r, c);
            if x.is_zero() {
                continue;
            }
            let a = x.abs();
            if best_abs.as_ref().map_or(true, |b| a < *b) {
                best = (r, c);
                best_abs = Some(a);
            }
        }
        if best.0 == j {
            d.swap_rows(i, j);
            u.swap_rows(i, j);
        }
        if best.1 == j {
            d.swap_cols(i, j);
            v.swap_cols(i, j);
        }
        if !d.get(j, i).is_zero() {
            let q = -rounddiv(d.get(j, i), d.get(i, i));
            d.add_row_multiple(j, i, &q);
            u.add_row_multiple(j, i, &q);
        }
        if !d.get(i, j).is_zero() {
            let q = -rounddiv(d.get(i, j), d.get(i, i));
            d.add_col_multiple(j, i, &q);
            v.add_col_multiple(j, i, &q);
        }
    }
}

/// Quotient with remainder of minimal absolute value.
fn rounddiv(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    let two_r = BigInt::from(2) * r.abs();
    if two_r > b.abs() {
        if (a * b).is_negative() {
            q - 1
        } else {
            q + 1
        }
    } else {
        q
    }
}
