//! Closed-form distances and bounds for `C(q,m,r,ℓ)`, the residue-layer
//! dichotomy, block tables, and the report that ties them to an oracle.

mod oracle;
mod scan;

pub use oracle::{
    exhaustive_cost, min_distance_exhaustive, min_distance_exhaustive_with_workers, min_distance_support_search,
    support_search_cost, DEFAULT_EXHAUSTIVE_BUDGET, DEFAULT_SUPPORT_BUDGET,
};
pub use scan::{first_layer_candidates, first_layer_scan, ScanResult};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::evalcode::{EvalModel, MAX_MODEL_ORDER};
use crate::gf::checked_pow;
use crate::spaces::{code_space, decompose_ab, CodeParams};
use crate::witnesses::{pencil, PencilSpec};

fn pow(q: u64, e: u64) -> Result<u64> {
    checked_pow(q, e as u32).ok_or(Error::InvalidRange(format!("{q}^{e} overflows")))
}

/// First and second weights of `RM_q((q-1)a+b, m)`; `d2` only for
/// `a <= m-2`, `2 <= b <= q-2`.
pub fn rm_weights(q: u64, m: u32, a: u64, b: u64) -> Result<(u64, Option<u64>)> {
    let m = m as u64;
    if a >= m || b > q - 2 {
        return Err(Error::OutOfValidity);
    }
    let d1 = (q - b) * pow(q, m - a - 1)?;
    let d2 = if a + 2 <= m && b >= 2 { Some((q - 1) * (q - b + 1) * pow(q, m - a - 2)?) } else { None };
    Ok((d1, d2))
}

fn require_intermediate(p: &CodeParams) -> Result<()> {
    if !p.intermediate {
        return Err(Error::NotIntermediate { r: p.r, qm1: p.q - 1 });
    }
    if p.b % p.r != p.r - 1 {
        return Err(Error::WrongResidue { b: p.b, rm1: p.r - 1 });
    }
    p.require_admissible()
}

fn require_non_terminal(p: &CodeParams) -> Result<()> {
    p.require_admissible()?;
    if p.terminal {
        return Err(Error::NotAdmissible(format!("a = m - 1 = {} is the terminal block", p.a)));
    }
    Ok(())
}

/// `ν(q-b+1)q^{m-a-2}` below the terminal block, `(q-b+r-2)/r` in it.
pub fn exact_distance(p: &CodeParams) -> Result<u64> {
    require_intermediate(p)?;
    if p.terminal {
        let num = p.q - p.b + p.r - 2;
        debug_assert_eq!(num % p.r, 0);
        return Ok(num / p.r);
    }
    Ok(p.nu * (p.q - p.b + 1) * pow(p.q, p.m as u64 - p.a - 2)?)
}

/// The earlier pair `((q-b)q^{m-a-1} - 2)/r + 1` and `ν(q-b+1)q^{m-a-2}`.
pub fn sdw_bounds(p: &CodeParams) -> Result<(u64, u64)> {
    require_non_terminal(p)?;
    let tail = pow(p.q, p.m as u64 - p.a - 2)?;
    let lower_num = (p.q - p.b) * tail * p.q - 2;
    if lower_num % p.r != 0 {
        return Err(Error::NotAdmissible(format!("{lower_num} not divisible by r = {}", p.r)));
    }
    Ok((lower_num / p.r + 1, p.nu * (p.q - p.b + 1) * tail))
}

/// `((b-1)q^{m-a-2} - (r-2))/r`, or `None` when the division is not exact.
pub fn kappa_closed_form(q: u64, m: u32, r: u64, a: u64, b: u64) -> Option<u64> {
    let tail = checked_pow(q, (m as u64).checked_sub(a + 2)? as u32)?;
    let num = ((b as i128 - 1) * tail as i128) - (r as i128 - 2);
    (num >= 0 && num % r as i128 == 0).then(|| (num / r as i128) as u64)
}

/// Gap between the exact distance and the earlier lower bound, computed as
/// a difference and checked against the closed form.
pub fn kappa(p: &CodeParams) -> Result<u64> {
    let (lower, _) = sdw_bounds(p)?;
    let d = exact_distance(p)?;
    let diff = d - lower;
    match kappa_closed_form(p.q, p.m, p.r, p.a, p.b) {
        Some(k) if k == diff => Ok(diff),
        other => Err(Error::NotAdmissible(format!("kappa routes disagree: {diff} vs {other:?}"))),
    }
}

/// Improvement `Δ = d - sdw_lower`, via `(q^{m-a-2}(b-1) + 2 - r)/r`.
pub fn delta(p: &CodeParams) -> Result<u64> {
    require_intermediate(p)?;
    require_non_terminal(p)?;
    kappa_closed_form(p.q, p.m, p.r, p.a, p.b).ok_or(Error::NotAdmissible("Δ is not integral".into()))
}

/// `(D_c, δ_c)`: minimum support in `𝓡_s^{(c)}` and the distance of the
/// matching code on orbit representatives.
pub fn residue_layer_distance(q: u64, m: u32, r: u64, s: u64, c: u64) -> Result<(u64, u64)> {
    if r == 0 || (q - 1) % r != 0 {
        return Err(Error::RNotDivisor { r, qm1: q - 1 });
    }
    if c >= r {
        return Err(Error::BadResidue { c, r });
    }
    let (a, b) = decompose_ab(s, q);
    if b % r != c {
        return Err(Error::ResidueMismatch { b, c });
    }
    if a + 2 > m as u64 {
        return Err(Error::OutOfValidity);
    }
    let (d1, d2) = rm_weights(q, m, a, b)?;
    let big_d = match c {
        0 | 1 => d1,
        _ => d2.ok_or(Error::OutOfValidity)?,
    };
    let small = if c == 0 { (big_d - 1) / r } else { big_d / r };
    Ok((big_d, small))
}

/// `Π (q - u_i)`.
pub fn footprint_product(q: u64, u: &[u32]) -> Result<u64> {
    let mut acc = 1u64;
    for &e in u {
        if e as u64 > q - 1 {
            return Err(Error::ExponentOutOfRange { e: e as u64, max: q - 1 });
        }
        acc = acc.checked_mul(q - e as u64).ok_or(Error::InvalidRange("footprint overflows".into()))?;
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BlockRow {
    pub h: u64,
    pub b: u64,
    pub q_minus_b_plus_1: u64,
    /// `d / q^{m-a-2} = ν(q-b+1)`.
    pub normalized: u64,
    /// `d` itself, when `q^{m-a-2}` fits.
    pub d: Option<u64>,
}

/// Rows `h = 0..ν-1` of the distance block at fixed `a`.
pub fn block_table(q: u64, m: u32, r: u64, a: u64) -> Result<Vec<BlockRow>> {
    if r == 0 || (q - 1) % r != 0 {
        return Err(Error::RNotDivisor { r, qm1: q - 1 });
    }
    if !(2 < r && r < q - 1) {
        return Err(Error::NotIntermediate { r, qm1: q - 1 });
    }
    if a + 2 > m as u64 {
        return Err(Error::OutOfValidity);
    }
    let nu = (q - 1) / r;
    let tail = checked_pow(q, (m as u64 - a - 2) as u32);
    Ok((0..nu)
        .map(|h| {
            let b = r * h + r - 1;
            let normalized = nu * (q - b + 1);
            BlockRow { h, b, q_minus_b_plus_1: q - b + 1, normalized, d: tail.and_then(|t| t.checked_mul(normalized)) }
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleMethod {
    Exhaustive,
    SupportSearch,
    WitnessUpperOnly,
}

impl OracleMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            OracleMethod::Exhaustive => "exhaustive",
            OracleMethod::SupportSearch => "support-search",
            OracleMethod::WitnessUpperOnly => "witness-upper-only",
        }
    }
}

/// Field additions allowed to the exhaustive oracle under `Auto`.
pub const AUTO_WORK_LIMIT: u128 = 2_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleChoice {
    None,
    Witness,
    Exhaustive,
    Support,
    /// Exhaustive within budget, else support search for short distances,
    /// else the pencil witness.
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub choice: OracleChoice,
    pub exhaustive_budget: u128,
    pub support_budget: u128,
    /// Support search limit; the formula value when absent.
    pub w_max: Option<u64>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            choice: OracleChoice::None,
            exhaustive_budget: DEFAULT_EXHAUSTIVE_BUDGET,
            support_budget: DEFAULT_SUPPORT_BUDGET,
            w_max: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistanceReport {
    pub params: CodeParams,
    pub k: u64,
    pub d_exact: u64,
    pub d1: u64,
    pub d2: Option<u64>,
    pub sdw_lower: Option<u64>,
    pub sdw_upper: Option<u64>,
    pub delta: Option<u64>,
    pub kappa: Option<u64>,
    pub terminal: bool,
    /// `σ = n - K + 1 - d`.
    pub singleton_defect: i64,
    pub relative_distance: f64,
    pub oracle_d: Option<u64>,
    pub oracle_method: Option<OracleMethod>,
    /// Why a requested oracle did not run.
    pub oracle_note: Option<String>,
}

pub const CSV_HEADER: &str = "q,m,r,ell,a,b,n,k,d_exact,sdw_lower,sdw_upper,kappa,oracle_d,oracle_method";

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl DistanceReport {
    pub fn compute(p: &CodeParams, oracle: &OracleConfig) -> Result<Self> {
        let d_exact = exact_distance(p)?;
        let k = code_space(p)?.dim() as u64;
        let (d1, d2) = rm_weights(p.q, p.m, p.a, p.b)?;
        let (sdw_lower, sdw_upper, kap, del) = if p.terminal {
            (None, None, None, None)
        } else {
            let (lo, hi) = sdw_bounds(p)?;
            (Some(lo), Some(hi), Some(kappa(p)?), Some(delta(p)?))
        };
        let mut report = DistanceReport {
            params: *p,
            k,
            d_exact,
            d1,
            d2,
            sdw_lower,
            sdw_upper,
            delta: del,
            kappa: kap,
            terminal: p.terminal,
            singleton_defect: p.n as i64 - k as i64 + 1 - d_exact as i64,
            relative_distance: d_exact as f64 / p.n as f64,
            oracle_d: None,
            oracle_method: None,
            oracle_note: None,
        };
        report.run_oracle(oracle);
        Ok(report)
    }

    fn run_oracle(&mut self, cfg: &OracleConfig) {
        let p = self.params;
        let order = checked_pow(p.q, p.m).unwrap_or(u64::MAX);
        if cfg.choice == OracleChoice::None {
            return;
        }
        if order > MAX_MODEL_ORDER {
            self.oracle_note = Some(format!("q^m = {order} exceeds the evaluation model limit"));
            return;
        }
        let outcome = (|| -> Result<Option<(u64, OracleMethod)>> {
            let model = EvalModel::for_params(&p)?;
            let field = model.field().clone();
            let exhaustive = || -> Result<Option<(u64, OracleMethod)>> {
                let g = model.generator_matrix(&code_space(&p)?)?;
                let d = min_distance_exhaustive(&g, &field, cfg.exhaustive_budget)?;
                Ok(Some((d, OracleMethod::Exhaustive)))
            };
            let support = || -> Result<Option<(u64, OracleMethod)>> {
                let g = model.generator_matrix(&code_space(&p)?)?;
                let w = cfg.w_max.unwrap_or(self.d_exact);
                Ok(min_distance_support_search(&g, &field, w, cfg.support_budget)?
                    .map(|d| (d, OracleMethod::SupportSearch)))
            };
            let witness = || -> Result<Option<(u64, OracleMethod)>> {
                if p.terminal {
                    return Ok(None);
                }
                let f = pencil(&field, p.m as usize, &PencilSpec::for_params(&p))?;
                Ok(Some((model.encode(&f)?.weight as u64, OracleMethod::WitnessUpperOnly)))
            };
            match cfg.choice {
                OracleChoice::None => Ok(None),
                OracleChoice::Exhaustive => exhaustive(),
                OracleChoice::Support => support(),
                OracleChoice::Witness => witness(),
                OracleChoice::Auto => {
                    let k = self.k as u32;
                    // auto also caps the word arithmetic, steps · n
                    let steps = exhaustive_cost(p.q, k);
                    if steps <= cfg.exhaustive_budget && steps.saturating_mul(p.n as u128) <= AUTO_WORK_LIMIT {
                        return exhaustive();
                    }
                    let w = cfg.w_max.unwrap_or(self.d_exact);
                    if support_search_cost(p.n, w) <= cfg.support_budget {
                        return support();
                    }
                    witness()
                }
            }
        })();
        match outcome {
            Ok(Some((d, method))) => {
                self.oracle_d = Some(d);
                self.oracle_method = Some(method);
            }
            Ok(None) => {
                if cfg.choice == OracleChoice::Support {
                    self.oracle_note = Some(format!("no codeword of weight <= {}", cfg.w_max.unwrap_or(self.d_exact)));
                } else if p.terminal && matches!(cfg.choice, OracleChoice::Witness | OracleChoice::Auto) {
                    self.oracle_note = Some("no pencil in the terminal block; use the support-search oracle".into());
                }
            }
            Err(e) => self.oracle_note = Some(e.to_string()),
        }
    }

    /// Whether the oracle value equals the formula. For the pencil witness
    /// this is the tightness of the upper bound.
    pub fn oracle_agrees(&self) -> Option<bool> {
        let d = self.oracle_d?;
        self.oracle_method?;
        Some(d == self.d_exact)
    }

    pub fn csv_row(&self) -> String {
        let p = &self.params;
        [
            p.q.to_string(),
            p.m.to_string(),
            p.r.to_string(),
            p.ell.to_string(),
            p.a.to_string(),
            p.b.to_string(),
            p.n.to_string(),
            self.k.to_string(),
            self.d_exact.to_string(),
            opt(self.sdw_lower),
            opt(self.sdw_upper),
            opt(self.kappa),
            opt(self.oracle_d),
            opt(self.oracle_method.map(OracleMethod::as_str)),
        ]
        .join(",")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{admissible_degrees, intermediate_divisors};

    fn params(q: u64, m: u32, r: u64, ell: u64) -> CodeParams {
        CodeParams::new(q, m, r, ell).unwrap()
    }

    #[test]
    fn rm_weight_examples() {
        assert_eq!(rm_weights(7, 2, 0, 2).unwrap(), (35, Some(36)));
        assert_eq!(rm_weights(7, 2, 0, 5).unwrap(), (14, Some(18)));
        assert_eq!(rm_weights(13, 3, 0, 5).unwrap(), (1352, Some(1404)));
        assert_eq!(rm_weights(7, 2, 1, 2).unwrap(), (5, None));
        assert_eq!(rm_weights(7, 2, 0, 1).unwrap(), (42, None));
        assert_eq!(rm_weights(7, 2, 2, 0), Err(Error::OutOfValidity));
    }

    #[test]
    fn exact_distance_examples() {
        assert_eq!(exact_distance(&params(7, 2, 3, 2)).unwrap(), 12);
        assert_eq!(exact_distance(&params(7, 2, 3, 5)).unwrap(), 6);
        assert_eq!(exact_distance(&params(7, 2, 3, 8)).unwrap(), 2);
        assert_eq!(exact_distance(&params(17, 4, 4, 19)).unwrap(), 1020);
        assert_eq!(exact_distance(&params(13, 3, 3, 5)).unwrap(), 468);
        assert_eq!(exact_distance(&params(13, 3, 4, 7)).unwrap(), 273);
        assert_eq!(exact_distance(&params(7, 3, 2, 5)).unwrap_err(), Error::NotIntermediate { r: 2, qm1: 6 });
        assert_eq!(exact_distance(&params(7, 2, 6, 5)).unwrap_err(), Error::NotIntermediate { r: 6, qm1: 6 });
        assert_eq!(exact_distance(&params(7, 2, 3, 4)).unwrap_err(), Error::WrongResidue { b: 4, rm1: 2 });
        assert!(matches!(exact_distance(&params(7, 2, 3, 11)), Err(Error::NotAdmissible(_))));
    }

    #[test]
    fn sdw_and_kappa_examples() {
        assert_eq!(sdw_bounds(&params(7, 2, 3, 5)).unwrap(), (5, 6));
        assert_eq!(sdw_bounds(&params(7, 2, 3, 2)).unwrap(), (12, 12));
        assert_eq!(sdw_bounds(&params(13, 3, 3, 5)).unwrap(), (451, 468));
        assert!(matches!(sdw_bounds(&params(7, 2, 3, 8)), Err(Error::NotAdmissible(_))));
        assert_eq!(kappa(&params(7, 2, 3, 5)).unwrap(), 1);
        assert_eq!(kappa(&params(7, 2, 3, 2)).unwrap(), 0);
        assert_eq!(kappa(&params(7, 3, 3, 5)).unwrap(), 9);
        assert_eq!(delta(&params(7, 3, 3, 5)).unwrap(), 9);
    }

    #[test]
    fn residue_layer_examples() {
        assert_eq!(residue_layer_distance(7, 2, 3, 3, 0).unwrap(), (28, 9));
        assert_eq!(residue_layer_distance(7, 2, 3, 4, 1).unwrap(), (21, 7));
        assert_eq!(residue_layer_distance(7, 2, 3, 5, 2).unwrap(), (18, 6));
        assert_eq!(residue_layer_distance(7, 2, 3, 5, 1).unwrap_err(), Error::ResidueMismatch { b: 5, c: 1 });
    }

    #[test]
    fn footprint_examples() {
        assert_eq!(footprint_product(7, &[2, 0]).unwrap(), 35);
        assert_eq!(footprint_product(7, &[1, 1]).unwrap(), 36);
        assert_eq!(footprint_product(7, &[0, 0]).unwrap(), 49);
        assert_eq!(footprint_product(7, &[7, 0]).unwrap_err(), Error::ExponentOutOfRange { e: 7, max: 6 });
    }

    #[test]
    fn block_tables() {
        let col = |q, r| block_table(q, 3, r, 0).unwrap().iter().map(|row| row.normalized).collect::<Vec<_>>();
        assert_eq!(col(13, 3), vec![48, 36, 24, 12]);
        assert_eq!(col(17, 4), vec![60, 44, 28, 12]);
        assert_eq!(col(19, 6), vec![45, 27, 9]);
        let rows = block_table(19, 3, 6, 0).unwrap();
        assert_eq!(rows.iter().map(|r| r.b).collect::<Vec<_>>(), vec![5, 11, 17]);
        assert_eq!(rows[0].d, Some(45 * 19));
        assert!(matches!(block_table(7, 3, 2, 0), Err(Error::NotIntermediate { .. })));
    }

    #[test]
    fn formula_laws_over_sweep() {
        for q in [7u64, 9, 13, 16, 17, 19, 25] {
            for r in intermediate_divisors(q) {
                for m in 2..=4u32 {
                    for ell in admissible_degrees(q, m, r).unwrap() {
                        let p = params(q, m, r, ell);
                        let d = exact_distance(&p).unwrap();
                        assert!(d > 0 && d < p.n);
                        if p.terminal {
                            assert_eq!((q - p.b + r - 2) % r, 0);
                            assert!(p.b <= q - 3);
                            continue;
                        }
                        let (lo, hi) = sdw_bounds(&p).unwrap();
                        assert!(lo <= d && d == hi);
                        let k = kappa(&p).unwrap();
                        assert_eq!(k, d - lo);
                        assert_eq!(k == 0, p.b == r - 1 && p.a == m as u64 - 2);
                        let tail = p.tail_power().unwrap();
                        assert!(3 * p.nu * tail <= d && d <= p.nu * (q - 1) * tail);
                        let (_, d2) = rm_weights(q, m, p.a, p.b).unwrap();
                        assert_eq!(d * r, d2.unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn block_steps_are_constant() {
        for q in [7u64, 13, 16, 17, 19, 25] {
            for r in intermediate_divisors(q) {
                for a in 0..=1u64 {
                    let rows = block_table(q, 3, r, a).unwrap();
                    let tail = q.pow((1 - a) as u32);
                    for pair in rows.windows(2) {
                        assert_eq!(pair[0].d.unwrap() - pair[1].d.unwrap(), (q - 1) * tail);
                    }
                }
            }
        }
    }

    #[test]
    fn report_and_csv() {
        let p = params(7, 2, 3, 5);
        let cfg = OracleConfig { choice: OracleChoice::Exhaustive, ..Default::default() };
        let rep = DistanceReport::compute(&p, &cfg).unwrap();
        assert_eq!(rep.k, 9);
        assert_eq!(rep.oracle_d, Some(6));
        assert_eq!(rep.singleton_defect, 16 - 9 + 1 - 6);
        assert_eq!(rep.csv_row(), "7,2,3,5,0,5,16,9,6,5,6,1,6,exhaustive");
        let rep = DistanceReport::compute(&params(7, 2, 3, 8), &OracleConfig::default()).unwrap();
        assert_eq!(rep.csv_row(), "7,2,3,8,1,2,16,14,2,,,,,");
        let json = serde_json::to_string(&rep).unwrap();
        assert!(json.contains("\"d_exact\":2"));
        let big = DistanceReport::compute(
            &params(13, 3, 3, 5),
            &OracleConfig { choice: OracleChoice::Auto, ..Default::default() },
        )
        .unwrap();
        assert_eq!(big.oracle_method, Some(OracleMethod::WitnessUpperOnly));
        assert_eq!(big.oracle_d, Some(468));
    }
}
