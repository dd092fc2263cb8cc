use constacode::distance::{
    exact_distance, exhaustive_cost, min_distance_exhaustive, min_distance_exhaustive_with_workers,
    min_distance_support_search, residue_layer_distance, support_search_cost,
};
use constacode::evalcode::EvalModel;
use constacode::gf::{Elem, FieldCtx};
use constacode::linalg::Matrix;
use constacode::spaces::{admissible_degrees, build_space, code_space, intermediate_divisors, CodeParams};
use constacode::witnesses::residue_layer_witness;
use proptest::prelude::*;
use std::sync::Arc;

const BUDGET: u128 = 20_000_000;

#[test]
fn formula_matches_exhaustive_oracle_within_budget() {
    let mut ran = Vec::new();
    for q in [7u64, 9, 13, 16, 17, 19, 25] {
        for r in intermediate_divisors(q) {
            for m in 2..=3u32 {
                for ell in admissible_degrees(q, m, r).unwrap() {
                    let p = CodeParams::new(q, m, r, ell).unwrap();
                    let space = code_space(&p).unwrap();
                    let steps = exhaustive_cost(q, space.dim() as u32);
                    if steps > BUDGET || steps * p.n as u128 > 2_000_000_000 {
                        continue;
                    }
                    let model = EvalModel::for_params(&p).unwrap();
                    let g = model.generator_matrix(&space).unwrap();
                    let d = min_distance_exhaustive(&g, model.field(), BUDGET).unwrap();
                    assert_eq!(d, exact_distance(&p).unwrap(), "{p:?}");
                    ran.push((q, m, r, ell));
                }
            }
        }
    }
    assert!(ran.len() >= 15, "only {} cases ran", ran.len());
}

#[test]
fn terminal_formula_matches_support_search() {
    let mut ran = 0;
    for q in [7u64, 9, 13, 16, 17, 19] {
        for r in intermediate_divisors(q) {
            for ell in admissible_degrees(q, 2, r).unwrap() {
                let p = CodeParams::new(q, 2, r, ell).unwrap();
                if !p.terminal {
                    continue;
                }
                let d = exact_distance(&p).unwrap();
                if support_search_cost(p.n, d) > 2_000_000 {
                    continue;
                }
                let model = EvalModel::for_params(&p).unwrap();
                let g = model.generator_matrix(&code_space(&p).unwrap()).unwrap();
                let found = min_distance_support_search(&g, model.field(), d, 2_000_000).unwrap();
                assert_eq!(found, Some(d), "{p:?}");
                ran += 1;
            }
        }
    }
    assert!(ran >= 10, "only {ran} terminal cases ran");
}

#[test]
fn residue_layers_by_exhaustive_oracle() {
    // every layer of (7,2,3) small enough to enumerate
    let model = EvalModel::new(7, 2, 3).unwrap();
    let mut ran = 0;
    for s in 0..=6u64 {
        let c = (s % 6) % 3;
        let space = build_space(7, 2, 3, s, c).unwrap();
        if exhaustive_cost(7, space.dim() as u32) > BUDGET {
            continue;
        }
        let g = model.generator_matrix(&space).unwrap();
        let d = min_distance_exhaustive(&g, model.field(), BUDGET).unwrap();
        assert_eq!(d, residue_layer_distance(7, 2, 3, s, c).unwrap().1, "s={s} c={c}");
        ran += 1;
    }
    assert!(ran >= 5);
}

#[test]
fn residue_layer_witnesses_attain_first_and_second_weights() {
    for q in [7u64, 9, 13] {
        let field = Arc::new(FieldCtx::of_order(q).unwrap());
        for r in intermediate_divisors(q) {
            for m in 2..=3u32 {
                for s in 0..=(q - 1) * (m as u64 - 1) - 1 {
                    let c = (s % (q - 1)) % r;
                    let (big_d, _) = residue_layer_distance(q, m, r, s, c).unwrap();
                    let b = s % (q - 1);
                    if c >= 2 && b < 2 {
                        continue;
                    }
                    let f = match residue_layer_witness(&field, m as usize, r, s, c) {
                        Ok(f) => f,
                        // not enough orbits for a deleted set of size b
                        Err(_) => continue,
                    };
                    assert!(f.total_degree().unwrap() <= s);
                    assert_eq!(f.support_size(), big_d, "q={q} r={r} m={m} s={s} c={c}");
                }
            }
        }
    }
}

fn arb_code() -> impl Strategy<Value = (u64, Vec<Vec<u32>>)> {
    (prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9]), 1usize..=4, 1usize..=8).prop_flat_map(|(q, k, extra)| {
        let n = k + extra;
        (Just(q), prop::collection::vec(prop::collection::vec(0..q as u32, n), k))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exhaustive_and_support_search_agree((q, rows) in arb_code()) {
        let f = FieldCtx::of_order(q).unwrap();
        let g = Matrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(Elem).collect()).collect()).unwrap();
        prop_assume!(g.rank(&f) > 0);
        let d = min_distance_exhaustive_with_workers(&g, &f, 1 << 30, 1).unwrap();
        prop_assert_eq!(min_distance_exhaustive_with_workers(&g, &f, 1 << 30, 3).unwrap(), d);
        let n = g.cols() as u64;
        prop_assert_eq!(min_distance_support_search(&g, &f, n, 1 << 30).unwrap(), Some(d));
        prop_assert_eq!(min_distance_support_search(&g, &f, d - 1, 1 << 30).unwrap(), None);
        // Singleton bound for the row space
        prop_assert!(d + g.rank(&f) as u64 <= n + 1);
    }
}
