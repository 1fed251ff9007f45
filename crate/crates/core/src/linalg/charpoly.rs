use crate::arithmetic::Scalar;

use super::Mat;

/// Characteristic polynomial `det(zI − M)` as coefficients `[a₀, …, a_{n−1}, 1]`.
///
/// Exact scalars use the division-free Berkowitz recurrence; approximate ones
/// reduce to Hessenberg form first.
pub fn char_poly<S: Scalar>(m: &Mat<S>) -> Vec<S> {
    if S::EXACT {
        berkowitz(m)
    } else {
        hessenberg_char_poly(m)
    }
}

/// Berkowitz: `c_r = T_r c_{r−1}` with Toeplitz `T_r` built from the bordered
/// leading submatrices. Only ring operations.
pub fn berkowitz<S: Scalar>(m: &Mat<S>) -> Vec<S> {
    let n = m.n();
    let ctx = m.ctx();
    // highest degree first while iterating
    let mut c: Vec<S> = vec![S::one(ctx)];
    for r in 0..n {
        let a = m.get(r, r).clone();
        // column of T_r: [1, −a, −R·C, −R·A·C, …] with A the leading r×r block
        let mut col = vec![S::one(ctx), -a];
        if r > 0 {
            let lead = m.block(0, 0, r, r);
            let row: Vec<S> = (0..r).map(|j| m.get(r, j).clone()).collect();
            let mut v: Vec<S> = (0..r).map(|i| m.get(i, r).clone()).collect();
            for _ in 0..r {
                let dot = row.iter().zip(&v).fold(S::zero(ctx), |acc, (x, y)| acc + x.clone() * y);
                col.push(-dot);
                v = lead.mul_vec(&v);
            }
        }
        let mut next = vec![S::zero(ctx); r + 2];
        for (i, ni) in next.iter_mut().enumerate() {
            for (j, cj) in c.iter().enumerate() {
                if i >= j && i - j < col.len() {
                    *ni = ni.clone() + col[i - j].clone() * cj;
                }
            }
        }
        c = next;
    }
    c.reverse();
    c
}

fn hessenberg<S: Scalar>(m: &Mat<S>) -> Mat<S> {
    let n = m.n();
    let mut h = m.clone();
    for j in 0..n.saturating_sub(2) {
        let mut best = j + 1;
        let mut best_mag = h.get(j + 1, j).magnitude();
        for i in j + 2..n {
            let mag = h.get(i, j).magnitude();
            if mag > best_mag {
                best = i;
                best_mag = mag;
            }
        }
        if h.get(best, j).is_zero() {
            continue;
        }
        if best != j + 1 {
            let (rb, rj) = (h.row(best), h.row(j + 1));
            h.set_row(best, &rj);
            h.set_row(j + 1, &rb);
            for i in 0..n {
                let (x, y) = (h.get(i, best).clone(), h.get(i, j + 1).clone());
                h.set(i, best, y);
                h.set(i, j + 1, x);
            }
        }
        let inv = h.get(j + 1, j).recip().expect("non-zero pivot");
        for i in j + 2..n {
            let f = h.get(i, j).clone() * &inv;
            if f.is_zero() {
                continue;
            }
            for c in 0..n {
                let v = h.get(i, c).clone() - f.clone() * h.get(j + 1, c);
                h.set(i, c, v);
            }
            for r in 0..n {
                let v = h.get(r, j + 1).clone() + f.clone() * h.get(r, i);
                h.set(r, j + 1, v);
            }
        }
    }
    h
}

/// Characteristic polynomial through an upper Hessenberg similarity and the
/// standard three-term style recurrence on its leading blocks.
pub fn hessenberg_char_poly<S: Scalar>(m: &Mat<S>) -> Vec<S> {
    let n = m.n();
    let ctx = m.ctx();
    let h = hessenberg(m);
    // p[k] holds the coefficients (low to high) for the leading k×k block
    let mut p: Vec<Vec<S>> = vec![vec![S::one(ctx)]];
    for k in 1..=n {
        let hk = h.get(k - 1, k - 1).clone();
        let prev = &p[k - 1];
        let mut next = vec![S::zero(ctx); k + 1];
        for (i, c) in prev.iter().enumerate() {
            next[i + 1] = next[i + 1].clone() + c;
            next[i] = next[i].clone() - hk.clone() * c;
        }
        let mut prod = S::one(ctx);
        for i in (1..k).rev() {
            prod = prod * h.get(i, i - 1);
            if prod.is_zero() {
                break;
            }
            let coef = h.get(i - 1, k - 1).clone() * &prod;
            for (j, c) in p[i - 1].iter().enumerate() {
                next[j] = next[j].clone() - coef.clone() * c;
            }
        }
        p.push(next);
    }
    p.pop().expect("n + 1 entries")
}
