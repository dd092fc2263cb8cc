//! The constacyclic evaluation model: points `eM^i`, the encoder `f ↦ c_f`,
//! generator matrices, the scalar-orbit decomposition of `F_q^m \ {0}` and
//! the constacyclic shift.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{checked_pow, Elem, ExtCtx, FieldCtx};
use crate::linalg::{Matrix, RowSpace};
use crate::rpoly::{GridEvaluator, ReducedPoly, Residue};
use crate::spaces::{CodeParams, MonomialSpace};

/// Largest `q^m` for which the model materializes the orbit index.
pub const MAX_MODEL_ORDER: u64 = 1 << 26;

/// `F_{q^m}` with primitive `β`, `λ = β^n`, the matrix `M` of multiplication by
/// `β` (row-vector convention) and the evaluation points `eM^0, ..., eM^{n-1}`.
pub struct EvalModel {
    ext: ExtCtx,
    q: u64,
    m: u32,
    r: u64,
    n: u64,
    lambda: Elem,
    mmat: Matrix,
    /// Grid index of `eM^i` for `i < n`.
    point_index: Vec<u32>,
    /// For each grid point, `t` with `P = eM^t`; `u32::MAX` at the origin.
    log_index: Vec<u32>,
    grid: GridEvaluator,
}

impl std::fmt::Debug for EvalModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EvalModel")
            .field("q", &self.q)
            .field("m", &self.m)
            .field("r", &self.r)
            .field("n", &self.n)
            .field("lambda", &self.lambda)
            .finish()
    }
}

impl EvalModel {
    /// Builds and verifies the model: `M^n = λI`, `ord(λ) = r`, and the walk
    /// `eM^t` covers every nonzero point exactly once.
    pub fn new(q: u64, m: u32, r: u64) -> Result<Self> {
        let field = Arc::new(FieldCtx::of_order(q)?);
        Self::with_field(field, m, r)
    }

    pub fn with_field(field: Arc<FieldCtx>, m: u32, r: u64) -> Result<Self> {
        let q = field.q() as u64;
        if r == 0 || (q - 1) % r != 0 {
            return Err(Error::RNotDivisor { r, qm1: q - 1 });
        }
        match checked_pow(q, m) {
            Some(order) if order <= MAX_MODEL_ORDER => {}
            _ => return Err(Error::ExtensionTooLarge { q, m }),
        }
        let ext = ExtCtx::new(field.clone(), m)?;
        let order = ext.order();
        let n = (order - 1) / r;
        let lam_coords = ext.pow(&ext.beta(), n);
        let lambda = ext
            .as_base(&lam_coords)
            .ok_or_else(|| Error::InvalidRange("β^n does not lie in F_q".into()))?;
        if field.element_order(lambda)? != r {
            return Err(Error::InvalidRange("λ = β^n does not have order r".into()));
        }

        let mu = m as usize;
        let mut rows = Vec::with_capacity(mu);
        for k in 0..mu {
            let mut unit = ext.zero();
            unit[k] = Elem::ONE;
            rows.push(ext.mul_by_beta(&unit));
        }
        let mmat = Matrix::from_rows(rows)?;
        if mmat.pow(&field, n)? != Matrix::scalar(mu, lambda) {
            return Err(Error::InvalidRange("M^n != λI".into()));
        }

        let mut log_index = vec![u32::MAX; order as usize];
        let mut point_index = Vec::with_capacity(n as usize);
        let mut cur = ext.one();
        for t in 0..order - 1 {
            let idx = ext.coords_to_index(&cur) as usize;
            if idx == 0 || log_index[idx] != u32::MAX {
                return Err(Error::InvalidRange("eM^t revisits a point before q^m - 1 steps".into()));
            }
            log_index[idx] = t as u32;
            if t < n {
                point_index.push(idx as u32);
            }
            cur = ext.mul_by_beta(&cur);
        }
        if cur != ext.one() {
            return Err(Error::InvalidRange("M^{q^m-1} != I".into()));
        }

        let grid = GridEvaluator::new(field, mu);
        Ok(EvalModel { ext, q, m, r, n, lambda, mmat, point_index, log_index, grid })
    }

    pub fn for_params(params: &CodeParams) -> Result<Self> {
        Self::new(params.q, params.m, params.r)
    }

    pub fn field(&self) -> &Arc<FieldCtx> {
        self.ext.base()
    }
    pub fn ext(&self) -> &ExtCtx {
        &self.ext
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn r(&self) -> u64 {
        self.r
    }
    /// Code length `(q^m - 1)/r`.
    pub fn n(&self) -> usize {
        self.n as usize
    }
    /// `λ = β^n`, of multiplicative order `r`.
    pub fn lambda(&self) -> Elem {
        self.lambda
    }
    /// Matrix of multiplication by `β` in the basis `1, β, ..., β^{m-1}`.
    pub fn beta_matrix(&self) -> &Matrix {
        &self.mmat
    }
    pub fn grid_evaluator(&self) -> &GridEvaluator {
        &self.grid
    }
    /// Grid indices of the evaluation points.
    pub fn point_indices(&self) -> &[u32] {
        &self.point_index
    }

    /// The `i`-th evaluation point `eM^i`.
    pub fn point(&self, i: usize) -> Vec<Elem> {
        self.ext.index_to_coords(self.point_index[i] as u64)
    }

    /// `(i, j)` with `P = λ^j eM^i`, or `None` for the origin.
    pub fn orbit_of(&self, point: &[Elem]) -> Option<(usize, usize)> {
        let t = self.log_index[self.ext.coords_to_index(point) as usize];
        (t != u32::MAX).then(|| ((t as u64 % self.n) as usize, (t as u64 / self.n) as usize))
    }

    fn check_poly(&self, f: &ReducedPoly) -> Result<()> {
        if f.m() != self.m as usize {
            return Err(Error::DimensionMismatch { expected: self.m as usize, got: f.m() });
        }
        if f.field().q() as u64 != self.q {
            return Err(Error::DimensionMismatch { expected: self.q as usize, got: f.field().q() as usize });
        }
        Ok(())
    }

    /// `c_f = (f(e), f(eM), ..., f(eM^{n-1}))`.
    pub fn encode(&self, f: &ReducedPoly) -> Result<Codeword> {
        self.check_poly(f)?;
        let grid_cost = (self.log_index.len() as u64) * self.q * self.m as u64;
        let values = if (f.num_terms() as u64) * self.n <= grid_cost {
            (0..self.n())
                .map(|i| f.evaluate(&self.point(i)))
                .collect::<Result<Vec<_>>>()?
        } else {
            self.restrict(&f.evaluate_all())
        };
        Ok(Codeword::new(values, Some(f.clone())))
    }

    /// Picks the evaluation coordinates out of a full value table.
    pub fn restrict(&self, all_values: &[Elem]) -> Vec<Elem> {
        self.point_index.iter().map(|&i| all_values[i as usize]).collect()
    }

    /// Rows are the codewords of the basis monomials, in basis order.
    pub fn generator_matrix(&self, space: &MonomialSpace) -> Result<Matrix> {
        if space.q != self.q || space.m != self.m {
            return Err(Error::DimensionMismatch { expected: self.m as usize, got: space.m as usize });
        }
        let f = self.field();
        let mut g = Matrix::empty(self.n());
        let points: Vec<Vec<Elem>> = (0..self.n()).map(|i| self.point(i)).collect();
        for mono in space.basis() {
            let row: Vec<Elem> = points
                .iter()
                .map(|p| {
                    p.iter()
                        .zip(mono.exps())
                        .fold(Elem::ONE, |acc, (&x, &e)| f.mul(acc, f.pow(x, e as u64)))
                })
                .collect();
            g.push_row(&row)?;
        }
        Ok(g)
    }

    /// Compares `wt(c_f)` with `|Supp(f)|` counted over all of `F_q^m`.
    pub fn orbit_weight_check(&self, f: &ReducedPoly) -> Result<OrbitWeight> {
        self.check_poly(f)?;
        if f.is_zero() {
            return Ok(OrbitWeight { weight: 0, support_size: 0, consistent: true });
        }
        if f.residue_class(self.r)? == Residue::Mixed {
            return Err(Error::MixedResidue);
        }
        Ok(self.orbit_weight_of_values(&f.evaluate_all()))
    }

    /// Same check from a full value table (indexed by grid point).
    pub fn orbit_weight_of_values(&self, all_values: &[Elem]) -> OrbitWeight {
        let support_size = all_values.iter().filter(|v| !v.is_zero()).count() as u64;
        let weight = self.point_index.iter().filter(|&&i| !all_values[i as usize].is_zero()).count() as u64;
        OrbitWeight { weight, support_size, consistent: support_size == self.r * weight }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitWeight {
    pub weight: u64,
    pub support_size: u64,
    pub consistent: bool,
}

/// A word of length `n` over `F_q`, optionally with the polynomial it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Codeword {
    pub values: Vec<Elem>,
    pub source: Option<ReducedPoly>,
    pub weight: usize,
}

impl Codeword {
    pub fn new(values: Vec<Elem>, source: Option<ReducedPoly>) -> Self {
        let weight = values.iter().filter(|v| !v.is_zero()).count();
        Codeword { values, source, weight }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `(μ·c_{n-1}, c_0, ..., c_{n-2})`.
pub fn constacyclic_shift(f: &FieldCtx, word: &Codeword, mu: Elem) -> Codeword {
    let n = word.values.len();
    if n == 0 {
        return word.clone();
    }
    let mut values = Vec::with_capacity(n);
    values.push(f.mul(mu, word.values[n - 1]));
    values.extend_from_slice(&word.values[..n - 1]);
    Codeword::new(values, None)
}

/// Whether `word` lies in the row space of `g`.
pub fn membership(f: &FieldCtx, word: &Codeword, g: &Matrix) -> Result<bool> {
    RowSpace::new(f, g).contains(&word.values)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ParamsJson {
    pub q: u64,
    pub m: u32,
    pub r: u64,
    pub ell: u64,
}

impl From<&CodeParams> for ParamsJson {
    fn from(p: &CodeParams) -> Self {
        ParamsJson { q: p.q, m: p.m, r: p.r, ell: p.ell }
    }
}

/// JSON dump of a codeword and its polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodewordDump {
    pub params: ParamsJson,
    pub polynomial: String,
    pub word: Vec<u32>,
    pub weight: usize,
}

impl CodewordDump {
    pub fn new(params: &CodeParams, word: &Codeword) -> Self {
        CodewordDump {
            params: params.into(),
            polynomial: word.source.as_ref().map_or_else(|| "0".to_string(), |p| p.to_string()),
            word: word.values.iter().map(|e| e.0).collect(),
            weight: word.weight,
        }
    }
}
