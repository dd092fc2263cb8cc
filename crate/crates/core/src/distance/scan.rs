//! Obstruction scan for first-weight words: on the quotient line, an attaining
//! support is a cylinder over a deleted set `B ⊆ F_q` with `0 ∈ B` and
//! `μ_r B = B`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{Elem, FieldCtx};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanResult {
    /// Every admissible deleted set, sorted.
    pub candidates: Vec<Vec<Elem>>,
    /// Candidates up to dilation by `F_q^*`.
    pub classes: usize,
}

fn mu_stable(field: &FieldCtx, mu: &[Elem], set: &BTreeSet<Elem>) -> bool {
    set.iter().all(|&x| mu.iter().all(|&a| set.contains(&field.mul(a, x))))
}

fn canonical(field: &FieldCtx, set: &[Elem]) -> Vec<Elem> {
    field
        .nonzero_elements()
        .map(|alpha| {
            let mut v: Vec<Elem> = set.iter().map(|&x| field.mul(alpha, x)).collect();
            v.sort();
            v
        })
        .min()
        .unwrap_or_default()
}

/// All `B ⊆ F_q` with `|B| = b`, `0 ∈ B`, `μ_r B = B`, by plain subset
/// enumeration of `B \ {0}`.
pub fn first_layer_candidates(q: u64, r: u64, b: u64) -> Result<Vec<Vec<Elem>>> {
    let field = FieldCtx::of_order(q)?;
    let mu = field.mu_subgroup(r)?;
    if b == 0 || b > q - 2 {
        return Ok(Vec::new());
    }
    let rest = (b - 1) as usize;
    let nonzero: Vec<Elem> = field.nonzero_elements().collect();
    let mut out = Vec::new();
    let mut pick: Vec<usize> = (0..rest).collect();
    loop {
        let set: BTreeSet<Elem> = std::iter::once(Elem::ZERO).chain(pick.iter().map(|&i| nonzero[i])).collect();
        if mu_stable(&field, &mu, &set) {
            out.push(set.into_iter().collect());
        }
        // next `rest`-subset of the q-1 nonzero elements
        let n = nonzero.len();
        let Some(i) = (0..rest).rev().find(|&i| pick[i] < n - rest + i) else { break };
        pick[i] += 1;
        for j in i + 1..rest {
            pick[j] = pick[j - 1] + 1;
        }
    }
    Ok(out)
}

/// Deleted sets that could carry a word of the first weight `(q-b)q^{m-a-1}`
/// in the residue class of `b`, counted up to dilation.
pub fn first_layer_scan(q: u64, m: u32, r: u64, a: u64, b: u64) -> Result<ScanResult> {
    if a + 1 > m as u64 {
        return Err(Error::OutOfValidity);
    }
    if b > q - 2 {
        return Err(Error::InvalidRange(format!("b = {b} exceeds q - 2")));
    }
    let field = FieldCtx::of_order(q)?;
    let candidates = first_layer_candidates(q, r, b)?;
    let classes: BTreeSet<Vec<Elem>> = candidates.iter().map(|c| canonical(&field, c)).collect();
    Ok(ScanResult { classes: classes.len(), candidates })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::intermediate_divisors;

    #[test]
    fn examples() {
        assert_eq!(first_layer_scan(7, 2, 3, 0, 2).unwrap().classes, 0);
        assert_eq!(first_layer_scan(7, 2, 3, 0, 5).unwrap().classes, 0);
        let four = first_layer_scan(7, 2, 3, 0, 4).unwrap();
        assert_eq!(four.classes, 1);
        assert_eq!(
            four.candidates,
            vec![
                vec![Elem(0), Elem(1), Elem(2), Elem(4)],
                vec![Elem(0), Elem(3), Elem(5), Elem(6)]
            ]
        );
        assert_eq!(first_layer_scan(7, 2, 3, 0, 1).unwrap().candidates, vec![vec![Elem(0)]]);
        assert!(first_layer_scan(7, 2, 3, 2, 2).is_err());
    }

    #[test]
    fn survivors_follow_the_congruence() {
        for q in [7u64, 9, 13, 16, 17, 19] {
            let orbits_total = |r: u64| (q - 1) / r;
            for r in intermediate_divisors(q) {
                for b in 1..=q - 2 {
                    let res = first_layer_scan(q, 2, r, 0, b).unwrap();
                    if (b - 1) % r == 0 {
                        // choose (b-1)/r of the ν orbits
                        let (nu, k) = (orbits_total(r), (b - 1) / r);
                        let binom = (0..k).fold(1u64, |acc, i| acc * (nu - i) / (i + 1));
                        assert_eq!(res.candidates.len() as u64, binom, "q={q} r={r} b={b}");
                        assert!(res.classes >= 1);
                    } else {
                        assert_eq!(res.classes, 0, "q={q} r={r} b={b}");
                    }
                }
            }
        }
    }
}
