//! Brute-force minimum distance: projective enumeration of the whole code and
//! a low-weight support search.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};
use crate::gf::{Elem, FieldCtx};
use crate::linalg::{Matrix, RowSpace};

pub const DEFAULT_EXHAUSTIVE_BUDGET: u128 = 100_000_000;
pub const DEFAULT_SUPPORT_BUDGET: u128 = 10_000_000;

const CHUNK: u64 = 1 << 16;

/// `(q^K - 1)/(q - 1)`, the number of codewords up to scalars, saturating.
pub fn exhaustive_cost(q: u64, k: u32) -> u128 {
    (0..k).fold(0u128, |acc, _| acc.saturating_mul(q as u128).saturating_add(1))
}

/// `Σ_{w=1}^{w_max} C(n, w)`, saturating.
pub fn support_search_cost(n: u64, w_max: u64) -> u128 {
    let mut total = 0u128;
    let mut binom = 1u128;
    for w in 1..=w_max.min(n) {
        binom = binom.saturating_mul((n - w + 1) as u128) / w as u128;
        total = total.saturating_add(binom);
    }
    total
}

/// Minimum nonzero weight of the row space of `g`, using every available core.
pub fn min_distance_exhaustive(g: &Matrix, field: &FieldCtx, budget: u128) -> Result<u64> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    min_distance_exhaustive_with_workers(g, field, budget, workers)
}

struct Item {
    lead: usize,
    start: u64,
    end: u64,
}

/// Enumerates coefficient vectors whose first nonzero entry is 1. Each block
/// with a fixed leading position is walked in a `p`-ary Gray code over the
/// `F_p`-coordinates of the remaining coefficients, so every step adds one
/// precomputed row. Blocks are cut into fixed chunks, so the answer does not
/// depend on `workers`.
pub fn min_distance_exhaustive_with_workers(
    g: &Matrix,
    field: &FieldCtx,
    budget: u128,
    workers: usize,
) -> Result<u64> {
    let k = g.rows();
    if k == 0 {
        return Err(Error::NoNonzeroWords);
    }
    let needed = exhaustive_cost(field.q() as u64, k as u32);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let (p, e) = (field.p(), field.e() as usize);
    // scaled[i * e + d] = p^d · g_i
    let mut scaled = Vec::with_capacity(k * e);
    for i in 0..k {
        for d in 0..e {
            let s = Elem(p.pow(d as u32));
            scaled.push(g.row(i).iter().map(|&x| field.mul(s, x).0).collect::<Vec<u32>>());
        }
    }
    let mut items = Vec::new();
    for lead in 0..k {
        let total = (p as u64).pow((e * (k - 1 - lead)) as u32);
        let mut start = 0;
        while start < total {
            let end = (start + CHUNK).min(total);
            items.push(Item { lead, start, end });
            start = end;
        }
    }
    let next = AtomicUsize::new(0);
    let worker = || {
        let mut best = u64::MAX;
        loop {
            let idx = next.fetch_add(1, Ordering::Relaxed);
            let Some(item) = items.get(idx) else { break };
            let w = if e == 1 {
                walk(item, g, field, &scaled, |a, b| {
                    let s = a + b;
                    if s >= p {
                        s - p
                    } else {
                        s
                    }
                })
            } else {
                walk(item, g, field, &scaled, |a, b| field.add(Elem(a), Elem(b)).0)
            };
            best = best.min(w);
        }
        best
    };
    let workers = workers.clamp(1, items.len().max(1));
    let best = if workers == 1 {
        worker()
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..workers).map(|_| s.spawn(worker)).collect();
            handles.into_iter().map(|h| h.join().expect("oracle worker panicked")).min().unwrap()
        })
    };
    if best == u64::MAX {
        Err(Error::NoNonzeroWords)
    } else {
        Ok(best)
    }
}

/// Minimum nonzero weight over Gray-code positions `start..end` of one block.
fn walk<A: Fn(u32, u32) -> u32>(item: &Item, g: &Matrix, field: &FieldCtx, scaled: &[Vec<u32>], add: A) -> u64 {
    let (p, e) = (field.p() as u64, field.e() as usize);
    let row_of = |digit: usize| &scaled[(item.lead + 1 + digit / e) * e + digit % e];
    let mut word: Vec<u32> = g.row(item.lead).iter().map(|x| x.0).collect();
    let digits = e * (g.rows() - 1 - item.lead);
    // Gray digits of `start`: g_t = d_t - d_{t+1} mod p
    let mut plain = Vec::with_capacity(digits + 1);
    let mut v = item.start;
    for _ in 0..digits {
        plain.push(v % p);
        v /= p;
    }
    plain.push(0);
    for t in 0..digits {
        let gray = (plain[t] + p - plain[t + 1]) % p;
        if gray != 0 {
            let c = Elem(gray as u32);
            for (x, &y) in word.iter_mut().zip(row_of(t)) {
                *x = add(*x, field.mul(c, Elem(y)).0);
            }
        }
    }
    let weight = |w: &[u32]| w.iter().filter(|&&x| x != 0).count() as u64;
    let mut best = match weight(&word) {
        0 => u64::MAX,
        w => w,
    };
    for i in item.start..item.end - 1 {
        let mut t = 0;
        let mut j = i;
        while j % p == p - 1 {
            j /= p;
            t += 1;
        }
        let mut w = 0u64;
        for (x, &y) in word.iter_mut().zip(row_of(t)) {
            *x = add(*x, y);
            w += (*x != 0) as u64;
        }
        if w != 0 && w < best {
            best = w;
        }
    }
    best
}

/// Smallest `w <= w_max` such that some nonzero codeword vanishes outside a
/// `w`-set `S` of positions: the columns of a parity-check matrix indexed by
/// `S` are then dependent.
pub fn min_distance_support_search(g: &Matrix, field: &FieldCtx, w_max: u64, budget: u128) -> Result<Option<u64>> {
    let n = g.cols();
    let h = parity_check(g, field);
    if h.rows() == n {
        return Err(Error::NoNonzeroWords);
    }
    let needed = support_search_cost(n as u64, w_max);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let ht = h.transpose();
    for w in 1..=(w_max as usize).min(n) {
        let mut subset: Vec<usize> = (0..w).collect();
        loop {
            let cols: Vec<Vec<Elem>> = subset.iter().map(|&j| ht.row(j).to_vec()).collect();
            if h.rows() == 0 || Matrix::from_rows(cols)?.rank(field) < w {
                return Ok(Some(w as u64));
            }
            if !next_combination(&mut subset, n) {
                break;
            }
        }
    }
    Ok(None)
}

/// Basis of the dual code, one row per non-pivot column of the echelon form.
fn parity_check(g: &Matrix, field: &FieldCtx) -> Matrix {
    let n = g.cols();
    let rs = RowSpace::new(field, g);
    let (echelon, pivots) = (rs.echelon(), rs.pivots());
    let mut is_pivot = vec![false; n];
    pivots.iter().for_each(|&c| is_pivot[c] = true);
    let mut h = Matrix::empty(n);
    for free in (0..n).filter(|&c| !is_pivot[c]) {
        let mut row = vec![Elem::ZERO; n];
        row[free] = Elem::ONE;
        for (i, &pc) in pivots.iter().enumerate() {
            row[pc] = field.neg(echelon[(i, free)]);
        }
        h.push_row(&row).expect("row length");
    }
    h
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let w = c.len();
    for i in (0..w).rev() {
        if c[i] < n - w + i {
            c[i] += 1;
            for j in i + 1..w {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evalcode::EvalModel;
    use crate::spaces::{build_space, code_space, CodeParams};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Plain odometer over all `q^K` coefficient vectors.
    fn naive_min(g: &Matrix, f: &FieldCtx) -> u64 {
        let (k, n, q) = (g.rows(), g.cols(), f.q());
        let mut coeffs = vec![0u32; k];
        let mut best = u64::MAX;
        loop {
            let mut i = 0;
            while i < k && coeffs[i] == q - 1 {
                coeffs[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
            coeffs[i] += 1;
            let v: Vec<Elem> = coeffs.iter().map(|&c| Elem(c)).collect();
            let w = g.vec_mul(f, &v).unwrap().iter().filter(|x| !x.is_zero()).count() as u64;
            if w > 0 {
                best = best.min(w);
            }
            let _ = n;
        }
        best
    }

    fn random_matrix(f: &FieldCtx, k: usize, n: usize, rng: &mut ChaCha8Rng) -> Matrix {
        Matrix::from_rows((0..k).map(|_| (0..n).map(|_| f.random(rng)).collect()).collect()).unwrap()
    }

    #[test]
    fn costs() {
        assert_eq!(exhaustive_cost(7, 3), 57);
        assert_eq!(exhaustive_cost(7, 0), 0);
        assert_eq!(support_search_cost(16, 2), 16 + 120);
        assert_eq!(support_search_cost(16, 0), 0);
        assert_eq!(exhaustive_cost(1 << 16, 100), u128::MAX);
    }

    #[test]
    fn exhaustive_matches_odometer() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            let f = FieldCtx::of_order(q).unwrap();
            for _ in 0..6 {
                let k = rng.gen_range(1..=4);
                let n = rng.gen_range(k..=9);
                let g = random_matrix(&f, k, n, &mut rng);
                let want = naive_min(&g, &f);
                if want == u64::MAX {
                    continue;
                }
                for workers in [1, 3] {
                    assert_eq!(min_distance_exhaustive_with_workers(&g, &f, 1 << 30, workers).unwrap(), want);
                }
                assert_eq!(min_distance_support_search(&g, &f, n as u64, 1 << 30).unwrap(), Some(want));
            }
        }
    }

    #[test]
    fn small_code_examples() {
        let model = EvalModel::new(7, 2, 3).unwrap();
        let f = model.field().clone();
        let g = model.generator_matrix(&code_space(&CodeParams::new(7, 2, 3, 2).unwrap()).unwrap()).unwrap();
        assert_eq!(g.rows(), 3);
        assert_eq!(min_distance_exhaustive(&g, &f, 57).unwrap(), 12);
        assert_eq!(
            min_distance_exhaustive(&g, &f, 56).unwrap_err(),
            Error::BudgetExceeded { needed: 57, budget: 56 }
        );
        assert_eq!(min_distance_support_search(&g, &f, 3, 1000).unwrap(), None);
        assert_eq!(min_distance_support_search(&g, &f, 0, 1000).unwrap(), None);

        let g8 = model.generator_matrix(&code_space(&CodeParams::new(7, 2, 3, 8).unwrap()).unwrap()).unwrap();
        assert_eq!(min_distance_support_search(&g8, &f, 3, 1000).unwrap(), Some(2));
    }

    #[test]
    fn worker_count_does_not_change_result() {
        let model = EvalModel::new(7, 2, 3).unwrap();
        let f = model.field().clone();
        let g = model.generator_matrix(&build_space(7, 2, 3, 3, 0).unwrap()).unwrap();
        let one = min_distance_exhaustive_with_workers(&g, &f, 1 << 30, 1).unwrap();
        for workers in [2, 4, 7] {
            assert_eq!(min_distance_exhaustive_with_workers(&g, &f, 1 << 30, workers).unwrap(), one);
        }
        assert_eq!(one, 9);
    }

    #[test]
    fn empty_code() {
        let f = FieldCtx::of_order(7).unwrap();
        assert_eq!(min_distance_exhaustive(&Matrix::empty(5), &f, 10).unwrap_err(), Error::NoNonzeroWords);
        assert_eq!(
            min_distance_support_search(&Matrix::zeros(2, 5), &f, 3, 10).unwrap_err(),
            Error::NoNonzeroWords
        );
    }
}
