//! Parameter bookkeeping for `C(q,m,r,ℓ)` and the monomial spaces behind it:
//! the code space `𝓜(q,m,r,ℓ)` and the residue layers `𝓡_s^{(c)}`.

use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{checked_pow, prime_power, Elem, FieldCtx, MAX_EXTENSION_ORDER};
use crate::rpoly::{Monomial, ReducedPoly};

/// Validated `(q, m, r, ℓ)` with every derived quantity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CodeParams {
    pub q: u64,
    pub m: u32,
    pub r: u64,
    pub ell: u64,
    /// `ℓ = (q-1)a + b`, `0 <= b <= q-2`.
    pub a: u64,
    pub b: u64,
    /// `ν = (q-1)/r`.
    pub nu: u64,
    /// `b = rh + r - 1`, present when `b ≡ r-1 (mod r)`.
    pub h: Option<u64>,
    /// `L = νa + h`.
    pub big_l: Option<u64>,
    /// Code length `(q^m - 1)/r`.
    pub n: u64,
    pub intermediate: bool,
    pub admissible: bool,
    pub terminal: bool,
}

impl CodeParams {
    pub fn new(q: u64, m: u32, r: u64, ell: u64) -> Result<Self> {
        prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if q < 3 {
            return Err(Error::InvalidRange(format!("q = {q} must be at least 3")));
        }
        if m < 2 {
            return Err(Error::InvalidRange(format!("m = {m} must be at least 2")));
        }
        if r == 0 || (q - 1) % r != 0 {
            return Err(Error::RNotDivisor { r, qm1: q - 1 });
        }
        let qm = match checked_pow(q, m) {
            Some(v) if v <= MAX_EXTENSION_ORDER => v,
            _ => return Err(Error::ExtensionTooLarge { q, m }),
        };
        let (a, b) = decompose_ab(ell, q);
        let nu = (q - 1) / r;
        let h = (b % r == r - 1).then(|| (b - (r - 1)) / r);
        Ok(CodeParams {
            q,
            m,
            r,
            ell,
            a,
            b,
            nu,
            h,
            big_l: h.map(|h| nu * a + h),
            n: (qm - 1) / r,
            intermediate: 2 < r && r < q - 1,
            admissible: r - 1 <= ell && ell < (q - 1) * m as u64 - 1 && ell % r == r - 1,
            terminal: a == m as u64 - 1,
        })
    }

    /// `q^{m-a-2}`, defined in the non-terminal range.
    pub fn tail_power(&self) -> Option<u64> {
        let exp = (self.m as u64).checked_sub(self.a + 2)?;
        checked_pow(self.q, exp as u32)
    }

    pub fn require_admissible(&self) -> Result<()> {
        if self.admissible {
            Ok(())
        } else {
            Err(Error::NotAdmissible(format!(
                "(q,m,r,ℓ) = ({},{},{},{}) needs r-1 <= ℓ < (q-1)m-1 and ℓ ≡ r-1 mod r",
                self.q, self.m, self.r, self.ell
            )))
        }
    }

    pub fn field(&self) -> Result<FieldCtx> {
        FieldCtx::of_order(self.q)
    }
}

/// `ℓ = (q-1)a + b` with `0 <= b <= q-2`.
pub fn decompose_ab(ell: u64, q: u64) -> (u64, u64) {
    (ell / (q - 1), ell % (q - 1))
}

/// Translation of the block parameter `L = νa + h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LTranslation {
    pub a: u64,
    pub h: u64,
    pub b: u64,
    pub ell: u64,
}

pub fn translate_l(q: u64, r: u64, big_l: u64) -> Result<LTranslation> {
    if r == 0 || q < 2 || (q - 1) % r != 0 {
        return Err(Error::RNotDivisor { r, qm1: q.saturating_sub(1) });
    }
    let nu = (q - 1) / r;
    let a = big_l / nu;
    let h = big_l - nu * a;
    Ok(LTranslation { a, h, b: r * h + r - 1, ell: r * big_l + r - 1 })
}

/// All `ℓ ≡ r-1 (mod r)` with `r-1 <= ℓ < (q-1)m - 1`, ascending.
pub fn admissible_degrees(q: u64, m: u32, r: u64) -> Result<Vec<u64>> {
    if r == 0 || q < 2 || (q - 1) % r != 0 {
        return Err(Error::RNotDivisor { r, qm1: q.saturating_sub(1) });
    }
    let bound = ((q - 1) * m as u64).saturating_sub(1);
    Ok((r - 1..bound).step_by(r as usize).collect())
}

/// Divisors `r` of `q-1` in the intermediate range `2 < r < q-1`.
pub fn intermediate_divisors(q: u64) -> Vec<u64> {
    (3..q.saturating_sub(1)).filter(|r| (q - 1) % r == 0).collect()
}

/// Span of reduced monomials `X^i` with `|i| <= s` and `|i| ≡ c (mod r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialSpace {
    pub q: u64,
    pub m: u32,
    pub r: u64,
    pub c: u64,
    pub s: u64,
    basis: Vec<Monomial>,
}

impl MonomialSpace {
    /// Basis in ascending graded lex order.
    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    /// Dimension `K`.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_poly(&self, field: &Arc<FieldCtx>, i: usize) -> ReducedPoly {
        ReducedPoly::monomial(field.clone(), self.m as usize, self.basis[i].clone(), Elem::ONE)
    }

    /// `Σ coeffs[i] · basis[i]`.
    pub fn combination(&self, field: &Arc<FieldCtx>, coeffs: &[Elem]) -> Result<ReducedPoly> {
        if coeffs.len() != self.basis.len() {
            return Err(Error::DimensionMismatch { expected: self.basis.len(), got: coeffs.len() });
        }
        Ok(ReducedPoly::from_terms(
            field.clone(),
            self.m as usize,
            self.basis.iter().cloned().zip(coeffs.iter().copied()),
        ))
    }

    pub fn random_poly<R: Rng + ?Sized>(&self, field: &Arc<FieldCtx>, rng: &mut R) -> ReducedPoly {
        let coeffs: Vec<Elem> = self.basis.iter().map(|_| field.random(rng)).collect();
        self.combination(field, &coeffs).expect("length matches")
    }

    /// A random element written straight onto the dense exponent grid.
    pub fn random_dense<R: Rng + ?Sized>(&self, field: &FieldCtx, rng: &mut R) -> Vec<Elem> {
        let q = self.q as u32;
        let mut grid = vec![Elem::ZERO; (self.q as usize).pow(self.m)];
        for mono in &self.basis {
            grid[mono.grid_index(q)] = field.random(rng);
        }
        grid
    }
}

fn enumerate_boxes(q: u64, m: u32, s: u64, r: u64, c: u64) -> Vec<Monomial> {
    fn rec(q: u64, left: u32, budget: u64, cur: &mut Vec<u32>, r: u64, c: u64, out: &mut Vec<Monomial>) {
        if left == 0 {
            let deg: u64 = cur.iter().map(|&e| e as u64).sum();
            if deg % r == c {
                out.push(Monomial::new(cur.clone()));
            }
            return;
        }
        for e in 0..=(q - 1).min(budget) {
            cur.push(e as u32);
            rec(q, left - 1, budget - e, cur, r, c, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(q, m, s, &mut Vec::with_capacity(m as usize), r, c, &mut out);
    out.sort();
    out
}

/// `𝓡_s^{(c)}` inside `F_q[X_1..X_m]` reduced.
pub fn build_space(q: u64, m: u32, r: u64, s: u64, c: u64) -> Result<MonomialSpace> {
    if r == 0 || c >= r {
        return Err(Error::BadResidue { c, r });
    }
    let max = m as u64 * (q - 1);
    if s > max {
        return Err(Error::OrderOutOfRange { s, max });
    }
    Ok(MonomialSpace { q, m, r, c, s, basis: enumerate_boxes(q, m, s, r, c) })
}

/// The code space `𝓜(q,m,r,ℓ) = 𝓡_ℓ^{(r-1)}`.
pub fn code_space(params: &CodeParams) -> Result<MonomialSpace> {
    params.require_admissible()?;
    build_space(params.q, params.m, params.r, params.ell, params.r - 1)
}

/// `K(q,m,r,ℓ)` by enumeration.
pub fn dimension_k(params: &CodeParams) -> Result<usize> {
    Ok(code_space(params)?.dim())
}
