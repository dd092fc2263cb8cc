//! Explicit extremal words: the homogeneous pencil `F_{a,b}`, the affine
//! cylinders `f_B`, coordinate-free flag supports, and the univariate root
//! product `P_B(T)`.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{Elem, FieldCtx};
use crate::linalg::Matrix;
use crate::rpoly::{point_index, Monomial, ReducedPoly};
use crate::spaces::{decompose_ab, CodeParams};

/// `F_{a,b} = Π_{i<=a} (1 - X_i^{q-1}) · Π_j (X_{a+1} - θ_j X_{a+2})`.
/// Support size `(q-1)(q-b+1)q^{m-a-2}` once `b >= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PencilSpec {
    pub a: usize,
    pub b: usize,
    pub thetas: Vec<Elem>,
}

impl PencilSpec {
    /// Slopes are the first `b` elements in enumeration order.
    pub fn first_elements(a: usize, b: usize) -> Self {
        PencilSpec { a, b, thetas: (0..b as u32).map(Elem).collect() }
    }

    pub fn for_params(params: &CodeParams) -> Self {
        Self::first_elements(params.a as usize, params.b as usize)
    }
}

/// `1 - X_i^{q-1}`, the indicator of `x_i = 0`.
fn zero_indicator(field: &Arc<FieldCtx>, m: usize, i: usize) -> ReducedPoly {
    let mut e = vec![0; m];
    e[i] = field.q() - 1;
    ReducedPoly::from_terms(
        field.clone(),
        m,
        [(Monomial::one(m), Elem::ONE), (Monomial::new(e), field.neg(Elem::ONE))],
    )
}

fn linear_form(field: &Arc<FieldCtx>, m: usize, terms: &[(usize, Elem)], constant: Elem) -> ReducedPoly {
    let mut all: Vec<(Monomial, Elem)> = terms
        .iter()
        .map(|&(i, c)| {
            let mut e = vec![0; m];
            e[i] = 1;
            (Monomial::new(e), c)
        })
        .collect();
    all.push((Monomial::one(m), constant));
    ReducedPoly::from_terms(field.clone(), m, all)
}

pub fn pencil(field: &Arc<FieldCtx>, m: usize, spec: &PencilSpec) -> Result<ReducedPoly> {
    if spec.a + 2 > m {
        return Err(Error::TooFewVariables { needed: spec.a + 2, m });
    }
    if spec.thetas.len() != spec.b {
        return Err(Error::DimensionMismatch { expected: spec.b, got: spec.thetas.len() });
    }
    let distinct: BTreeSet<Elem> = spec.thetas.iter().copied().collect();
    if distinct.len() != spec.thetas.len() {
        return Err(Error::DuplicateTheta);
    }
    let mut out = ReducedPoly::constant(field.clone(), m, Elem::ONE);
    for i in 0..spec.a {
        out = out.reduce_product(&zero_indicator(field, m, i))?;
    }
    let (u, v) = (spec.a, spec.a + 1);
    for &theta in &spec.thetas {
        let form = linear_form(field, m, &[(u, Elem::ONE), (v, field.neg(theta))], Elem::ZERO);
        out = out.reduce_product(&form)?;
    }
    Ok(out)
}

/// `f_B = Π_{i<=a} (1 - X_i^{q-1}) · Π_{η∈B} (X_{a+1} - η)`.
pub fn cylinder(field: &Arc<FieldCtx>, m: usize, a: usize, deleted: &[Elem]) -> Result<ReducedPoly> {
    if a + 1 > m {
        return Err(Error::TooFewVariables { needed: a + 1, m });
    }
    let mut out = ReducedPoly::constant(field.clone(), m, Elem::ONE);
    for i in 0..a {
        out = out.reduce_product(&zero_indicator(field, m, i))?;
    }
    for &eta in deleted {
        out = out.reduce_product(&linear_form(field, m, &[(a, Elem::ONE)], field.neg(eta)))?;
    }
    Ok(out)
}

/// Cosets of `μ_r` in `F_q^*`, ordered by their smallest member.
pub fn mu_orbits(field: &FieldCtx, r: u64) -> Result<Vec<Vec<Elem>>> {
    let mu = field.mu_subgroup(r)?;
    let mut seen = vec![false; field.q() as usize];
    let mut orbits = Vec::new();
    for x in field.nonzero_elements() {
        if seen[x.index()] {
            continue;
        }
        let mut orbit: Vec<Elem> = mu.iter().map(|&a| field.mul(a, x)).collect();
        orbit.sort();
        for y in &orbit {
            seen[y.index()] = true;
        }
        orbits.push(orbit);
    }
    Ok(orbits)
}

/// A `μ_r`-stable deleted set of size `size`: whole orbits taken greedily in
/// order, with `0` prepended when `with_zero`.
pub fn orbit_union(field: &FieldCtx, r: u64, size: usize, with_zero: bool) -> Result<Vec<Elem>> {
    let rest = size.checked_sub(with_zero as usize).ok_or(Error::ResidueMismatch { b: size as u64, c: with_zero as u64 })?;
    if rest as u64 % r != 0 {
        return Err(Error::ResidueMismatch { b: size as u64, c: with_zero as u64 });
    }
    let orbits = mu_orbits(field, r)?;
    let need = rest / r as usize;
    if need > orbits.len() {
        return Err(Error::InvalidRange(format!("only {} orbits available", orbits.len())));
    }
    let mut out = Vec::with_capacity(size);
    if with_zero {
        out.push(Elem::ZERO);
    }
    for orbit in orbits.into_iter().take(need) {
        out.extend(orbit);
    }
    Ok(out)
}

/// Extremal word of `𝓡_s^{(c)}` for `s = (q-1)a + b`, `b ≡ c (mod r)`,
/// `a <= m-2`: a cylinder for `c ∈ {0, 1}`, the pencil otherwise.
pub fn residue_layer_witness(field: &Arc<FieldCtx>, m: usize, r: u64, s: u64, c: u64) -> Result<ReducedPoly> {
    let q = field.q() as u64;
    let (a, b) = decompose_ab(s, q);
    if b % r != c % r {
        return Err(Error::ResidueMismatch { b, c });
    }
    if a as usize + 2 > m {
        return Err(Error::TooFewVariables { needed: a as usize + 2, m });
    }
    match c {
        0 | 1 => cylinder(field, m, a as usize, &orbit_union(field, r, b as usize, c == 1)?),
        _ => pencil(field, m, &PencilSpec::first_elements(a as usize, b as usize)),
    }
}

/// Data `W ⊕ Z` with `b` deleted projective points of `P(W)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagSupport {
    /// Basis of the plane `W`.
    pub w: [Vec<Elem>; 2],
    /// Basis of the complement `Z`, `dim Z = m - a - 2`.
    pub z: Vec<Vec<Elem>>,
    /// Deleted directions as coordinates `(s, t)` in the basis of `W`.
    pub theta: Vec<(Elem, Elem)>,
}

impl FlagSupport {
    /// `W = <e_{a+1}, e_{a+2}>`, `Z = <e_{a+3}, ..., e_m>`, directions `(θ_j, 1)`:
    /// the support of the pencil with slopes `θ_j`.
    pub fn standard(m: usize, a: usize, thetas: &[Elem]) -> Self {
        let unit = |i: usize| {
            let mut v = vec![Elem::ZERO; m];
            v[i] = Elem::ONE;
            v
        };
        FlagSupport {
            w: [unit(a), unit(a + 1)],
            z: (a + 2..m).map(unit).collect(),
            theta: thetas.iter().map(|&t| (t, Elem::ONE)).collect(),
        }
    }
}

fn normalize_direction(field: &FieldCtx, (s, t): (Elem, Elem)) -> Option<(Elem, Elem)> {
    let lead = if !s.is_zero() { s } else { t };
    let inv = field.inv(lead)?;
    Some((field.mul(s, inv), field.mul(t, inv)))
}

/// `S = {z + w : z ∈ Z, w ∈ W \ (0 ∪ Θ-lines)}` as sorted grid indices.
pub fn flag_support(field: &FieldCtx, m: usize, a: usize, flag: &FlagSupport) -> Result<Vec<usize>> {
    let bad = |msg: &str| Error::BadFlag(msg.to_string());
    if a + 2 > m {
        return Err(Error::TooFewVariables { needed: a + 2, m });
    }
    if flag.z.len() != m - a - 2 {
        return Err(bad("dim Z must be m - a - 2"));
    }
    let mut rows: Vec<Vec<Elem>> = flag.w.to_vec();
    rows.extend(flag.z.iter().cloned());
    if rows.iter().any(|v| v.len() != m) {
        return Err(bad("vector length differs from m"));
    }
    if Matrix::from_rows(rows)?.rank(field) != m - a {
        return Err(bad("W and Z must be independent with W ∩ Z = 0"));
    }
    let mut deleted = BTreeSet::new();
    for &d in &flag.theta {
        let nd = normalize_direction(field, d).ok_or_else(|| bad("zero direction"))?;
        if !deleted.insert(nd) {
            return Err(bad("repeated projective point"));
        }
    }

    let q = field.q();
    let combine = |acc: &mut Vec<Elem>, c: Elem, v: &[Elem]| {
        for (x, &y) in acc.iter_mut().zip(v) {
            *x = field.add(*x, field.mul(c, y));
        }
    };
    let mut w_part = Vec::new();
    for s in field.elements() {
        for t in field.elements() {
            match normalize_direction(field, (s, t)) {
                Some(d) if !deleted.contains(&d) => {
                    let mut v = vec![Elem::ZERO; m];
                    combine(&mut v, s, &flag.w[0]);
                    combine(&mut v, t, &flag.w[1]);
                    w_part.push(v);
                }
                _ => {}
            }
        }
    }
    let dz = flag.z.len();
    let mut out = Vec::with_capacity(w_part.len() * (q as usize).pow(dz as u32));
    for zi in 0..(q as usize).pow(dz as u32) {
        let mut z = vec![Elem::ZERO; m];
        let mut k = zi;
        for basis in &flag.z {
            combine(&mut z, Elem((k % q as usize) as u32), basis);
            k /= q as usize;
        }
        for w in &w_part {
            let p: Vec<Elem> = z.iter().zip(w).map(|(&x, &y)| field.add(x, y)).collect();
            out.push(point_index(q, &p));
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// A formal univariate polynomial, coefficients low degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly(pub Vec<Elem>);

impl UniPoly {
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    /// Exponents carrying a nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        self.0.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(j, _)| j).collect()
    }

    /// `P(αT)`.
    pub fn dilate(&self, field: &FieldCtx, alpha: Elem) -> UniPoly {
        UniPoly(self.0.iter().enumerate().map(|(j, &c)| field.mul(c, field.pow(alpha, j as u64))).collect())
    }

    pub fn scale(&self, field: &FieldCtx, c: Elem) -> UniPoly {
        UniPoly(self.0.iter().map(|&x| field.mul(x, c)).collect())
    }
}

/// `P_B(T) = Π_{η∈B} (T - η)`, expanded formally (no reduction by `T^q - T`).
pub fn root_product(field: &FieldCtx, deleted: &[Elem]) -> UniPoly {
    let mut coeffs = vec![Elem::ONE];
    for &eta in deleted {
        let neg = field.neg(eta);
        let mut next = vec![Elem::ZERO; coeffs.len() + 1];
        for (j, &c) in coeffs.iter().enumerate() {
            next[j + 1] = field.add(next[j + 1], c);
            next[j] = field.add(next[j], field.mul(c, neg));
        }
        coeffs = next;
    }
    UniPoly(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rpoly::{point_from_index, Residue};
    use crate::spaces::{admissible_degrees, intermediate_divisors};

    fn f(q: u64) -> Arc<FieldCtx> {
        Arc::new(FieldCtx::of_order(q).unwrap())
    }

    fn support_by_points(p: &ReducedPoly) -> Vec<usize> {
        let q = p.field().q();
        let total = (q as usize).pow(p.m() as u32);
        (0..total).filter(|&i| !p.evaluate(&point_from_index(q, p.m(), i)).unwrap().is_zero()).collect()
    }

    #[test]
    fn pencil_examples() {
        let f7 = f(7);
        let p = pencil(&f7, 2, &PencilSpec::first_elements(0, 2)).unwrap();
        assert_eq!(p.to_string(), "1*X1^2*X2^0+6*X1^1*X2^1");
        assert_eq!(support_by_points(&p).len(), 36);
        let p3 = pencil(&f7, 3, &PencilSpec::first_elements(1, 2)).unwrap();
        assert_eq!(support_by_points(&p3).len(), 6 * 6);
        assert_eq!(
            pencil(&f7, 2, &PencilSpec::first_elements(1, 2)).unwrap_err(),
            Error::TooFewVariables { needed: 3, m: 2 }
        );
        let dup = PencilSpec { a: 0, b: 2, thetas: vec![Elem(1), Elem(1)] };
        assert_eq!(pencil(&f7, 2, &dup).unwrap_err(), Error::DuplicateTheta);
    }

    #[test]
    fn pencil_laws() {
        for q in [7u64, 9, 13, 16] {
            let fq = f(q);
            for m in 2..=3usize {
                for a in 0..=m - 2 {
                    for b in 0..=(q as usize - 2) {
                        let p = pencil(&fq, m, &PencilSpec::first_elements(a, b)).unwrap();
                        let s = (q as u64 - 1) * a as u64 + b as u64;
                        assert_eq!(p.total_degree(), Some(s));
                        for r in (1..q).filter(|r| (q - 1) % r == 0) {
                            assert_eq!(p.residue_class(r).unwrap(), Residue::Class(b as u64 % r));
                        }
                        for d in p.terms().map(|(mono, _)| mono.degree()) {
                            assert!(d >= b as u64 && (d - b as u64) % (q - 1) == 0);
                            assert!((d - b as u64) / (q - 1) <= a as u64);
                        }
                        for alpha in fq.nonzero_elements() {
                            let ab = fq.pow(alpha, b as u64);
                            assert_eq!(p.scalar_dilate(alpha).unwrap(), p.scale(ab));
                        }
                        if b >= 1 && (q as usize).pow(m as u32) <= 4096 {
                            let want = (q - 1) * (q - b as u64 + 1) * q.pow((m - a - 2) as u32);
                            assert_eq!(p.support_size(), want);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn pencil_needs_no_reduction() {
        // Formal expansion with raw exponent addition agrees with the reduced product.
        let f7 = f(7);
        for a in 0..=1usize {
            for b in 0..=5usize {
                let spec = PencilSpec::first_elements(a, b);
                let p = pencil(&f7, 3, &spec).unwrap();
                let mut formal: Vec<(Vec<u32>, Elem)> = vec![(vec![0, 0, 0], Elem::ONE)];
                let mut mul = |factor: Vec<(Vec<u32>, Elem)>| {
                    let mut next = Vec::new();
                    for (e1, c1) in &formal {
                        for (e2, c2) in &factor {
                            let e: Vec<u32> = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                            next.push((e, f7.mul(*c1, *c2)));
                        }
                    }
                    formal = next;
                };
                for i in 0..a {
                    let mut e = vec![0, 0, 0];
                    e[i] = 6;
                    mul(vec![(vec![0, 0, 0], Elem::ONE), (e, f7.neg(Elem::ONE))]);
                }
                for &t in &spec.thetas {
                    let (mut e1, mut e2) = (vec![0, 0, 0], vec![0, 0, 0]);
                    e1[a] = 1;
                    e2[a + 1] = 1;
                    mul(vec![(e1, Elem::ONE), (e2, f7.neg(t))]);
                }
                assert!(formal.iter().all(|(e, _)| e.iter().all(|&x| x <= 6)));
                let rebuilt = ReducedPoly::from_terms(
                    f7.clone(),
                    3,
                    formal.into_iter().map(|(e, c)| (Monomial::new(e), c)),
                );
                assert_eq!(rebuilt, p);
            }
        }
    }

    #[test]
    fn cylinder_examples() {
        let f7 = f(7);
        let b1 = [Elem(1), Elem(2), Elem(4)];
        let c = cylinder(&f7, 2, 0, &b1).unwrap();
        assert_eq!(support_by_points(&c).len(), 28);
        assert_eq!(c.residue_class(3).unwrap(), Residue::Class(0));
        let b2 = [Elem(0), Elem(1), Elem(2), Elem(4)];
        let c2 = cylinder(&f7, 2, 0, &b2).unwrap();
        assert_eq!(support_by_points(&c2).len(), 21);
        assert_eq!(c2.residue_class(3).unwrap(), Residue::Class(1));
        assert_eq!(c2.evaluate(&[Elem(0), Elem(0)]).unwrap(), Elem(0));
        let c3 = cylinder(&f7, 2, 0, &[]).unwrap();
        assert_eq!(c3, ReducedPoly::constant(f7.clone(), 2, Elem::ONE));
        assert_eq!(support_by_points(&c3).len(), 49);
        assert!(cylinder(&f7, 2, 2, &[]).is_err());
        // support shape: x_1 = ... = x_a = 0, x_{a+1} ∉ B
        let c4 = cylinder(&f7, 3, 1, &b2).unwrap();
        let want: Vec<usize> = (0..343)
            .filter(|&i| {
                let p = point_from_index(7, 3, i);
                p[0].is_zero() && !b2.contains(&p[1])
            })
            .collect();
        assert_eq!(support_by_points(&c4), want);
    }

    #[test]
    fn default_orbit_unions() {
        let f7 = f(7);
        assert_eq!(orbit_union(&f7, 3, 3, false).unwrap(), vec![Elem(1), Elem(2), Elem(4)]);
        assert_eq!(orbit_union(&f7, 3, 4, true).unwrap(), vec![Elem(0), Elem(1), Elem(2), Elem(4)]);
        assert!(orbit_union(&f7, 3, 2, false).is_err());
    }

    #[test]
    fn flag_examples() {
        let f7 = f(7);
        let thetas = [Elem(0), Elem(1)];
        let flag = FlagSupport::standard(2, 0, &thetas);
        let s = flag_support(&f7, 2, 0, &flag).unwrap();
        assert_eq!(s.len(), 36);
        let p = pencil(&f7, 2, &PencilSpec { a: 0, b: 2, thetas: thetas.to_vec() }).unwrap();
        assert_eq!(s, support_by_points(&p));
        let empty = flag_support(&f7, 2, 0, &FlagSupport::standard(2, 0, &[])).unwrap();
        assert_eq!(empty.len(), 48);
        // with b = 0 the pencil is constant and also fires at the origin
        let one = pencil(&f7, 2, &PencilSpec::first_elements(0, 0)).unwrap();
        assert_eq!(one.support_size(), 49);

        for (m, a) in [(3usize, 0usize), (3, 1), (4, 1)] {
            for b in [1usize, 2, 5] {
                let spec = PencilSpec::first_elements(a, b);
                let flag = FlagSupport::standard(m, a, &spec.thetas);
                let s = flag_support(&f7, m, a, &flag).unwrap();
                let want = 7u64.pow((m - a - 2) as u32) * (8 - b as u64) * 6;
                assert_eq!(s.len() as u64, want);
                assert_eq!(s, support_by_points(&pencil(&f7, m, &spec).unwrap()));
            }
        }
    }

    #[test]
    fn flag_support_is_scalar_stable_in_any_basis() {
        let f13 = f(13);
        let flag = FlagSupport {
            w: [vec![Elem(1), Elem(2), Elem(3)], vec![Elem(0), Elem(1), Elem(5)]],
            z: vec![vec![Elem(4), Elem(0), Elem(1)]],
            theta: vec![(Elem(1), Elem(0)), (Elem(3), Elem(7)), (Elem(0), Elem(1))],
        };
        let s = flag_support(&f13, 3, 0, &flag).unwrap();
        assert_eq!(s.len() as u64, 13 * (14 - 3) * 12);
        let set: BTreeSet<usize> = s.iter().copied().collect();
        for &idx in &s {
            let p = point_from_index(13, 3, idx);
            for alpha in f13.nonzero_elements() {
                let ap: Vec<Elem> = p.iter().map(|&x| f13.mul(alpha, x)).collect();
                assert!(set.contains(&point_index(13, &ap)));
            }
        }
    }

    #[test]
    fn bad_flags() {
        let f7 = f(7);
        let mut flag = FlagSupport::standard(3, 0, &[Elem(1)]);
        flag.z = vec![flag.w[0].clone()];
        assert!(matches!(flag_support(&f7, 3, 0, &flag), Err(Error::BadFlag(_))));
        let mut flag = FlagSupport::standard(2, 0, &[Elem(1)]);
        flag.theta.push((Elem(2), Elem(2)));
        assert!(matches!(flag_support(&f7, 2, 0, &flag), Err(Error::BadFlag(_))));
        let flag = FlagSupport::standard(3, 0, &[]);
        assert!(matches!(flag_support(&f7, 3, 1, &flag), Err(Error::BadFlag(_))));
    }

    #[test]
    fn root_products() {
        let f7 = f(7);
        let p = root_product(&f7, &[Elem(0), Elem(1), Elem(2), Elem(4)]);
        assert_eq!(p, UniPoly(vec![Elem(0), Elem(6), Elem(0), Elem(0), Elem(1)]));
        assert_eq!(p.support(), vec![1, 4]);
        assert_eq!(root_product(&f7, &[]), UniPoly(vec![Elem(1)]));
        let p3 = root_product(&f7, &[Elem(1), Elem(2), Elem(4)]);
        assert_eq!(p3, UniPoly(vec![Elem(6), Elem(0), Elem(0), Elem(1)]));
    }

    #[test]
    fn root_product_eigen_relation() {
        for q in [7u64, 13, 16, 25] {
            let fq = f(q);
            for r in intermediate_divisors(q) {
                let mu = fq.mu_subgroup(r).unwrap();
                let orbits = mu_orbits(&fq, r).unwrap();
                for k in 0..=orbits.len().min(3) {
                    for with_zero in [false, true] {
                        let b = orbit_union(&fq, r, k * r as usize + with_zero as usize, with_zero).unwrap();
                        let p = root_product(&fq, &b);
                        assert_eq!(p.degree(), b.len());
                        assert!(p.support().iter().all(|&j| (j as u64) % r == b.len() as u64 % r));
                        for &alpha in &mu {
                            let lhs = p.dilate(&fq, alpha);
                            assert_eq!(lhs, p.scale(&fq, fq.pow(alpha, b.len() as u64)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn residue_layer_witness_shapes() {
        let f7 = f(7);
        for (s, c, supp) in [(3u64, 0u64, 28u64), (4, 1, 21), (5, 2, 18)] {
            let w = residue_layer_witness(&f7, 2, 3, s, c).unwrap();
            assert_eq!(w.residue_class(3).unwrap(), Residue::Class(c));
            assert!(w.total_degree().unwrap() <= s);
            assert_eq!(w.support_size(), supp);
        }
        assert!(residue_layer_witness(&f7, 2, 3, 3, 1).is_err());
        let _ = admissible_degrees(7, 2, 3).unwrap();
    }
}
