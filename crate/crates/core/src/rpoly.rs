//! Reduced multivariate polynomials over `F_q`, i.e. polynomials modulo
//! `(X_1^q - X_1, ..., X_m^q - X_m)`, which are in bijection with functions
//! `F_q^m -> F_q`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{Elem, FieldCtx};
use crate::linalg::Matrix;

/// Exponent vector with every entry in `[0, q-1]`.
///
/// Ordered by graded lex: total degree first, then lexicographically with
/// `X_1` heaviest.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(m: usize) -> Self {
        Monomial(vec![0; m])
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    /// `|i| = i_1 + ... + i_m`.
    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    /// Position in the dense exponent grid, `i_1` least significant.
    pub fn grid_index(&self, q: u32) -> usize {
        self.0.iter().rev().fold(0usize, |acc, &e| acc * q as usize + e as usize)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exponent of `x^a · x^b` as a function on `F_q`: `e > 0` maps to
/// `1 + ((e - 1) mod (q - 1))`.
#[inline]
pub fn reduce_exponent(e: u64, q: u32) -> u32 {
    if e == 0 {
        0
    } else {
        (1 + (e - 1) % (q as u64 - 1)) as u32
    }
}

/// Outcome of the residue-class test.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Residue {
    Class(u64),
    Mixed,
}

#[derive(Clone, PartialEq, Eq)]
pub struct ReducedPoly {
    field: Arc<FieldCtx>,
    m: usize,
    terms: BTreeMap<Monomial, Elem>,
}

impl fmt::Debug for ReducedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ReducedPoly({})", self)
    }
}

impl ReducedPoly {
    pub fn zero(field: Arc<FieldCtx>, m: usize) -> Self {
        ReducedPoly { field, m, terms: BTreeMap::new() }
    }

    pub fn constant(field: Arc<FieldCtx>, m: usize, c: Elem) -> Self {
        Self::monomial(field, m, Monomial::one(m), c)
    }

    /// `c · X^i`; exponents above `q-1` are reduced.
    pub fn monomial(field: Arc<FieldCtx>, m: usize, mono: Monomial, c: Elem) -> Self {
        assert_eq!(mono.0.len(), m, "monomial arity");
        let q = field.q();
        let mono = Monomial(mono.0.iter().map(|&e| reduce_exponent(e as u64, q)).collect());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mono, c);
        }
        ReducedPoly { field, m, terms }
    }

    /// The variable `X_{i+1}` (0-based `i`).
    pub fn var(field: Arc<FieldCtx>, m: usize, i: usize) -> Self {
        let mut e = vec![0; m];
        e[i] = 1;
        Self::monomial(field, m, Monomial(e), Elem::ONE)
    }

    /// Sums terms, combining repeated monomials.
    pub fn from_terms<I>(field: Arc<FieldCtx>, m: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Elem)>,
    {
        let q = field.q();
        let mut map: BTreeMap<Monomial, Elem> = BTreeMap::new();
        for (mono, c) in terms {
            assert_eq!(mono.0.len(), m, "monomial arity");
            let mono = Monomial(mono.0.iter().map(|&e| reduce_exponent(e as u64, q)).collect());
            let entry = map.entry(mono).or_insert(Elem::ZERO);
            *entry = field.add(*entry, c);
        }
        map.retain(|_, c| !c.is_zero());
        ReducedPoly { field, m, terms: map }
    }

    pub fn field(&self) -> &Arc<FieldCtx> {
        &self.field
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, Elem)> {
        self.terms.iter().map(|(k, &v)| (k, v))
    }

    pub fn coeff(&self, mono: &Monomial) -> Elem {
        self.terms.get(mono).copied().unwrap_or(Elem::ZERO)
    }

    /// `deg_q(f)`; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(Monomial::degree).max()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch { expected: self.m, got: other.m });
        }
        if *self.field != *other.field {
            return Err(Error::DimensionMismatch { expected: self.field.q() as usize, got: other.field.q() as usize });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let f = &self.field;
        let mut terms = self.terms.clone();
        for (mono, &c) in &other.terms {
            let entry = terms.entry(mono.clone()).or_insert(Elem::ZERO);
            *entry = f.add(*entry, c);
            if entry.is_zero() {
                terms.remove(mono);
            }
        }
        Ok(ReducedPoly { field: self.field.clone(), m: self.m, terms })
    }

    pub fn scale(&self, c: Elem) -> Self {
        if c.is_zero() {
            return Self::zero(self.field.clone(), self.m);
        }
        let f = &self.field;
        let terms = self.terms.iter().map(|(k, &v)| (k.clone(), f.mul(v, c))).collect();
        ReducedPoly { field: self.field.clone(), m: self.m, terms }
    }

    pub fn neg(&self) -> Self {
        self.scale(self.field.neg(Elem::ONE))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Reduced representative of the pointwise product, computed term by term.
    pub fn reduce_product(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let f = &self.field;
        let q = f.q();
        let mut terms: BTreeMap<Monomial, Elem> = BTreeMap::new();
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                let exps = ma
                    .0
                    .iter()
                    .zip(&mb.0)
                    .map(|(&x, &y)| reduce_exponent(x as u64 + y as u64, q))
                    .collect();
                let entry = terms.entry(Monomial(exps)).or_insert(Elem::ZERO);
                *entry = f.add(*entry, f.mul(ca, cb));
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(ReducedPoly { field: self.field.clone(), m: self.m, terms })
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.field.clone(), self.m, Elem::ONE);
        for _ in 0..k {
            acc = acc.reduce_product(self).expect("same ring");
        }
        acc
    }

    pub fn evaluate(&self, point: &[Elem]) -> Result<Elem> {
        if point.len() != self.m {
            return Err(Error::DimensionMismatch { expected: self.m, got: point.len() });
        }
        let f = &self.field;
        let mut acc = Elem::ZERO;
        for (mono, &c) in &self.terms {
            let mut t = c;
            for (&x, &e) in point.iter().zip(&mono.0) {
                t = f.mul(t, f.pow(x, e as u64));
                if t.is_zero() {
                    break;
                }
            }
            acc = f.add(acc, t);
        }
        Ok(acc)
    }

    /// Residue class of the monomial degrees modulo `r`.
    pub fn residue_class(&self, r: u64) -> Result<Residue> {
        let mut it = self.terms.keys().map(|k| k.degree() % r);
        let first = it.next().ok_or(Error::ZeroPolynomial)?;
        Ok(if it.all(|c| c == first) { Residue::Class(first) } else { Residue::Mixed })
    }

    /// `P ↦ f(αP)`: each monomial `X^i` picks up `α^{|i|}`.
    pub fn scalar_dilate(&self, alpha: Elem) -> Result<Self> {
        if alpha.is_zero() {
            return Err(Error::ZeroScalar);
        }
        let f = &self.field;
        let terms = self
            .terms
            .iter()
            .map(|(k, &c)| (k.clone(), f.mul(c, f.pow(alpha, k.degree()))))
            .collect();
        Ok(ReducedPoly { field: self.field.clone(), m: self.m, terms })
    }

    /// Reduced representative of `X ↦ f(X T^{-1})` for row vectors `X`.
    pub fn substitute_linear(&self, t: &Matrix) -> Result<Self> {
        if t.rows() != self.m || t.cols() != self.m {
            return Err(Error::DimensionMismatch { expected: self.m, got: t.rows() });
        }
        let f = &self.field;
        let tinv = t.inverse(f)?;
        // (X T^{-1})_j = Σ_i X_i (T^{-1})_{ij}
        let forms: Vec<ReducedPoly> = (0..self.m)
            .map(|j| {
                let terms = (0..self.m).map(|i| {
                    let mut e = vec![0; self.m];
                    e[i] = 1;
                    (Monomial(e), tinv[(i, j)])
                });
                ReducedPoly::from_terms(f.clone(), self.m, terms)
            })
            .collect();
        let q = f.q() as usize;
        let mut powers: Vec<Vec<Option<ReducedPoly>>> = vec![vec![None; q]; self.m];
        let mut out = Self::zero(f.clone(), self.m);
        for (mono, &c) in &self.terms {
            let mut term = Self::constant(f.clone(), self.m, c);
            for (j, &e) in mono.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = powers[j][e as usize].get_or_insert_with(|| forms[j].pow(e)).clone();
                term = term.reduce_product(&pw)?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Largest monomial under graded lex.
    pub fn leading_monomial(&self) -> Result<&Monomial> {
        self.terms.keys().next_back().ok_or(Error::ZeroPolynomial)
    }

    /// Coefficients laid out on the dense exponent grid of size `q^m`.
    pub fn dense_coefficients(&self) -> Vec<Elem> {
        let q = self.field.q();
        let mut out = vec![Elem::ZERO; (q as usize).pow(self.m as u32)];
        for (mono, &c) in &self.terms {
            out[mono.grid_index(q)] = c;
        }
        out
    }

    /// Values at every point of `F_q^m`, indexed by `Σ x_i q^{i-1}`.
    pub fn evaluate_all(&self) -> Vec<Elem> {
        GridEvaluator::new(self.field.clone(), self.m).evaluate(&self.dense_coefficients())
    }

    /// `|Supp(f)|` over all of `F_q^m`.
    pub fn support_size(&self) -> u64 {
        self.evaluate_all().iter().filter(|v| !v.is_zero()).count() as u64
    }

    /// Parses the text form written by `Display`.
    pub fn parse(field: Arc<FieldCtx>, m: usize, s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero(field, m));
        }
        let bad = |msg: &str| Error::Parse(format!("{msg} in {s:?}"));
        let mut terms = Vec::new();
        for term in s.split('+') {
            let mut parts = term.trim().split('*');
            let c: u32 = parts.next().ok_or_else(|| bad("empty term"))?.trim().parse().map_err(|_| bad("bad coefficient"))?;
            if c >= field.q() {
                return Err(bad("coefficient out of range"));
            }
            let mut exps = vec![0u32; m];
            for factor in parts {
                let rest = factor.trim().strip_prefix('X').ok_or_else(|| bad("expected variable"))?;
                let (idx, e) = rest.split_once('^').ok_or_else(|| bad("expected exponent"))?;
                let idx: usize = idx.parse().map_err(|_| bad("bad variable index"))?;
                let e: u32 = e.parse().map_err(|_| bad("bad exponent"))?;
                if idx == 0 || idx > m {
                    return Err(bad("variable index out of range"));
                }
                if e >= field.q() {
                    return Err(bad("exponent not reduced"));
                }
                exps[idx - 1] += e;
            }
            terms.push((Monomial(exps), Elem(c)));
        }
        Ok(Self::from_terms(field, m, terms))
    }
}

/// Text form `c*X1^e1*...*Xm^em` joined by `+`, leading term first,
/// coefficients as field indices.
impl fmt::Display for ReducedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (mono, c)) in self.terms.iter().rev().enumerate() {
            if n > 0 {
                write!(f, "+")?;
            }
            write!(f, "{}", c.0)?;
            for (i, e) in mono.0.iter().enumerate() {
                write!(f, "*X{}^{}", i + 1, e)?;
            }
        }
        Ok(())
    }
}

/// Evaluates dense coefficient grids at every point of `F_q^m`.
///
/// Each pass applies the `q × q` Vandermonde map `x^t` along the most
/// significant axis and rotates that axis to the least significant slot, so
/// after `m` passes the grid holds values indexed by point. Field elements
/// are split into `e` digit planes over `F_p` so the inner loop is a plain
/// integer multiply-accumulate.
pub struct GridEvaluator {
    field: Arc<FieldCtx>,
    m: usize,
    /// `kernel[((x q + t) e + out) e + inp]`: digit `out` of `x^t · p^inp`.
    kernel: Vec<u32>,
    chunk: usize,
}

impl GridEvaluator {
    pub fn new(field: Arc<FieldCtx>, m: usize) -> Self {
        let (q, e, p) = (field.q() as usize, field.e() as usize, field.p() as u64);
        let mut kernel = vec![0u32; q * q * e * e];
        for x in 0..q {
            for t in 0..q {
                let xt = field.pow(Elem(x as u32), t as u64);
                for inp in 0..e {
                    let basis = Elem(p.pow(inp as u32) as u32);
                    let digits = field.digits(field.mul(xt, basis));
                    for (out, d) in digits.into_iter().enumerate() {
                        kernel[((x * q + t) * e + out) * e + inp] = d;
                    }
                }
            }
        }
        let sq = (p - 1).max(1) * (p - 1).max(1);
        let chunk = ((u32::MAX as u64 - p) / sq).clamp(1, usize::MAX as u64) as usize;
        GridEvaluator { field, m, kernel, chunk }
    }

    pub fn field(&self) -> &Arc<FieldCtx> {
        &self.field
    }

    /// `coeffs` is indexed by exponent grid position; the result by point index.
    pub fn evaluate(&self, coeffs: &[Elem]) -> Vec<Elem> {
        let (q, e, p) = (self.field.q() as usize, self.field.e() as usize, self.field.p());
        let total = q.pow(self.m as u32);
        assert_eq!(coeffs.len(), total, "dense grid size");
        let n = total / q;
        let mut planes = vec![0u32; e * total];
        for (i, c) in coeffs.iter().enumerate() {
            let mut v = c.0;
            for d in 0..e {
                planes[d * total + i] = v % p;
                v /= p;
            }
        }
        let mut next = vec![0u32; e * total];
        let mut acc = vec![0u32; n];
        let mut live = vec![false; q];
        for _ in 0..self.m {
            for (t, flag) in live.iter_mut().enumerate() {
                *flag = (0..e).any(|d| planes[d * total + t * n..d * total + (t + 1) * n].iter().any(|&v| v != 0));
            }
            for x in 0..q {
                for out in 0..e {
                    acc.fill(0);
                    let mut pending = 0usize;
                    for t in 0..q {
                        if !live[t] {
                            continue;
                        }
                        for inp in 0..e {
                            let c = self.kernel[((x * q + t) * e + out) * e + inp];
                            if c == 0 {
                                continue;
                            }
                            let src = &planes[inp * total + t * n..inp * total + (t + 1) * n];
                            for (a, &s) in acc.iter_mut().zip(src) {
                                *a = a.wrapping_add(c.wrapping_mul(s));
                            }
                            pending += 1;
                            if pending == self.chunk {
                                acc.iter_mut().for_each(|a| *a %= p);
                                pending = 0;
                            }
                        }
                    }
                    let dst = &mut next[out * total..(out + 1) * total];
                    for (j, &a) in acc.iter().enumerate() {
                        dst[x + q * j] = a % p;
                    }
                }
            }
            std::mem::swap(&mut planes, &mut next);
        }
        (0..total)
            .map(|i| {
                let mut v = 0u32;
                for d in (0..e).rev() {
                    v = v * p + planes[d * total + i];
                }
                Elem(v)
            })
            .collect()
    }
}

/// Point of `F_q^m` with grid index `idx` (first coordinate least significant).
pub fn point_from_index(q: u32, m: usize, mut idx: usize) -> Vec<Elem> {
    (0..m)
        .map(|_| {
            let c = Elem((idx % q as usize) as u32);
            idx /= q as usize;
            c
        })
        .collect()
}

pub fn point_index(q: u32, point: &[Elem]) -> usize {
    point.iter().rev().fold(0usize, |acc, c| acc * q as usize + c.index())
}
