//! Finite-field arithmetic: the base field `F_q = F_p[X]/(g)` with log/antilog
//! tables, and the extension `F_{q^m}` used for the evaluation points.
//!
//! Elements of `F_q` are identified with integers in `[0, q)`: the index of an
//! element is its coefficient vector over `F_p`, read little-endian in base `p`.
//! Index 0 is zero and index 1 is one.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest base field supported by the table arithmetic.
pub const MAX_FIELD_ORDER: u64 = 1 << 16;
/// Largest extension `q^m` supported by the index arithmetic.
pub const MAX_EXTENSION_ORDER: u64 = 1 << 48;
/// Below this order the extension constructor walks every power of `β`.
const FULL_CHECK_ORDER: u64 = 1 << 24;
/// Addition goes through a `q × q` table below this order.
const ADD_TABLE_ORDER: u32 = 1 << 10;

/// An element of `F_q`, stored as its canonical enumeration index.
#[derive(
    Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Debug, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors of `n`, ascending.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits `q = p^e`, or returns `None` when `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let factors = prime_factors(q);
    if factors.len() != 1 {
        return None;
    }
    let p = factors[0];
    let mut e = 0;
    let mut t = q;
    while t > 1 {
        t /= p;
        e += 1;
    }
    Some((p, e))
}

pub(crate) fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

// Dense polynomials over F_p, coefficients low-degree first.

fn fp_trim(a: &mut Vec<u32>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

fn fp_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = fp_inv(b[db], p);
    while r.len() > db && !(r.len() == 1 && r[0] == 0) {
        let top = r.len() - 1;
        let coef = (r[top] as u64 * lead_inv as u64 % p as u64) as u32;
        if coef != 0 {
            for (i, &bi) in b.iter().enumerate() {
                let idx = top - db + i;
                let sub = (coef as u64 * bi as u64 % p as u64) as u32;
                r[idx] = (r[idx] + p - sub) % p;
            }
        }
        r.pop();
        if r.is_empty() {
            r.push(0);
        }
    }
    fp_trim(&mut r);
    r
}

fn fp_inv(a: u32, p: u32) -> u32 {
    // Fermat; p is prime.
    let mut base = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// Digits `c_0, ..., c_{len-1}` of `k` in base `p`, with `c_0` most significant.
fn digits_msb_first(mut k: u64, p: u64, len: usize) -> Vec<u32> {
    let mut out = vec![0u32; len];
    for slot in out.iter_mut().rev() {
        *slot = (k % p) as u32;
        k /= p;
    }
    out
}

fn fp_is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    if deg <= 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for k in 0..count {
            let mut g: Vec<u32> = (0..d).map(|i| ((k / (p as u64).pow(i as u32)) % p as u64) as u32).collect();
            g.push(1);
            let r = fp_rem(f, &g, p);
            if r.len() == 1 && r[0] == 0 {
                return false;
            }
        }
    }
    true
}

/// `F_q` with `q = p^e`, enumeration and log/antilog tables.
#[derive(Clone)]
pub struct FieldCtx {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    primitive: Elem,
    log: Vec<u32>,
    exp: Vec<u32>,
    neg: Vec<u32>,
    add_table: Option<Vec<u16>>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("modulus", &self.modulus)
            .field("primitive", &self.primitive)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

impl FieldCtx {
    /// Builds `F_{p^e}` with the lexicographically smallest monic irreducible
    /// modulus, coefficients compared from the constant term upward.
    pub fn new(p: u64, e: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NonPrimeP(p));
        }
        if e == 0 {
            return Err(Error::InvalidRange("extension degree must be positive".into()));
        }
        let q = match checked_pow(p, e) {
            Some(q) if q <= MAX_FIELD_ORDER => q,
            _ => return Err(Error::FieldTooLarge(checked_pow(p, e).unwrap_or(u64::MAX))),
        };
        let p32 = p as u32;
        let modulus = (0..q)
            .map(|k| {
                let mut f = digits_msb_first(k, p, e as usize);
                f.push(1);
                f
            })
            .find(|f| fp_is_irreducible(f, p32))
            .expect("an irreducible polynomial of every degree exists");

        let mut ctx = FieldCtx {
            p: p32,
            e,
            q: q as u32,
            modulus,
            primitive: Elem::ONE,
            log: Vec::new(),
            exp: Vec::new(),
            neg: Vec::new(),
            add_table: None,
        };
        ctx.neg = (0..ctx.q)
            .map(|x| ctx.from_digits(&ctx.digits(Elem(x)).iter().map(|&d| (p32 - d) % p32).collect::<Vec<_>>()).0)
            .collect();
        if ctx.q <= ADD_TABLE_ORDER && e > 1 {
            let qq = ctx.q as usize;
            let mut tab = vec![0u16; qq * qq];
            for a in 0..ctx.q {
                for b in 0..ctx.q {
                    tab[a as usize * qq + b as usize] = ctx.add_digitwise(Elem(a), Elem(b)).0 as u16;
                }
            }
            ctx.add_table = Some(tab);
        }

        let order = ctx.q as u64 - 1;
        let factors = prime_factors(order);
        let primitive = (1..ctx.q)
            .map(Elem)
            .find(|&x| {
                order == 1
                    || factors
                        .iter()
                        .all(|&f| ctx.pow_slow(x, order / f) != Elem::ONE)
            })
            .expect("multiplicative group is cyclic");
        ctx.primitive = primitive;

        let n = order as usize;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![u32::MAX; ctx.q as usize];
        let mut cur = Elem::ONE;
        for i in 0..n {
            exp[i] = cur.0;
            log[cur.index()] = i as u32;
            cur = ctx.mul_slow(cur, primitive);
        }
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }
        ctx.exp = exp;
        ctx.log = log;
        Ok(ctx)
    }

    /// Builds `F_q` for a prime power `q`.
    pub fn of_order(q: u64) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Self::new(p, e)
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }
    #[inline]
    pub fn e(&self) -> u32 {
        self.e
    }
    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }
    /// Monic modulus over `F_p`, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q).map(Elem)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Elem> {
        (1..self.q).map(Elem)
    }

    /// Base-`p` digits of `x`, least significant first (length `e`).
    pub fn digits(&self, x: Elem) -> Vec<u32> {
        let mut v = x.0;
        (0..self.e)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> Elem {
        let mut acc = 0u32;
        for &d in digits.iter().rev() {
            acc = acc * self.p + d;
        }
        Elem(acc)
    }

    /// Image of the integer `k` in the prime subfield.
    pub fn from_int(&self, k: i64) -> Elem {
        Elem(k.rem_euclid(self.p as i64) as u32)
    }

    fn add_digitwise(&self, a: Elem, b: Elem) -> Elem {
        let (mut x, mut y) = (a.0, b.0);
        let mut acc = 0u32;
        let mut place = 1u32;
        for _ in 0..self.e {
            let d = (x % self.p + y % self.p) % self.p;
            acc += d * place;
            place = place.wrapping_mul(self.p);
            x /= self.p;
            y /= self.p;
        }
        Elem(acc)
    }

    fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        let p = self.p as u64;
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u32; da.len() + db.len()];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p) as u32;
            }
        }
        fp_trim(&mut prod);
        let mut r = fp_rem(&prod, &self.modulus, self.p);
        r.resize(self.e as usize, 0);
        self.from_digits(&r)
    }

    fn pow_slow(&self, x: Elem, mut k: u64) -> Elem {
        let mut base = x;
        let mut acc = Elem::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            k >>= 1;
        }
        acc
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.e == 1 {
            let s = a.0 + b.0;
            Elem(if s >= self.p { s - self.p } else { s })
        } else if let Some(tab) = &self.add_table {
            Elem(tab[a.index() * self.q as usize + b.index()] as u32)
        } else {
            self.add_digitwise(a, b)
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.neg[a.index()])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        Elem(self.exp[(self.log[a.index()] + self.log[b.index()]) as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a.0 == 0 {
            return None;
        }
        let n = self.q - 1;
        Some(Elem(self.exp[((n - self.log[a.index()]) % n) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b).ok_or(Error::ZeroElement)?))
    }

    /// `x^k` with the convention `0^0 = 1`.
    pub fn pow(&self, x: Elem, k: u64) -> Elem {
        if k == 0 {
            return Elem::ONE;
        }
        if x.0 == 0 {
            return Elem::ZERO;
        }
        let n = (self.q - 1) as u64;
        let l = (self.log[x.index()] as u64 * (k % n)) % n;
        Elem(self.exp[l as usize])
    }

    /// Discrete logarithm to the base of [`FieldCtx::primitive_element`].
    #[inline]
    pub fn log(&self, x: Elem) -> Option<u32> {
        (x.0 != 0).then(|| self.log[x.index()])
    }

    /// `g^k` for the primitive element `g`.
    #[inline]
    pub fn exp(&self, k: u64) -> Elem {
        Elem(self.exp[(k % (self.q as u64 - 1)) as usize])
    }

    /// The enumeration-smallest element of multiplicative order `q - 1`.
    pub fn primitive_element(&self) -> Elem {
        self.primitive
    }

    /// Least `t >= 1` with `x^t = 1`.
    pub fn element_order(&self, x: Elem) -> Result<u64> {
        let l = self.log(x).ok_or(Error::ZeroElement)? as u64;
        let n = self.q as u64 - 1;
        Ok(n / gcd(n, l))
    }

    /// `μ_r = {α : α^r = 1}`, sorted by enumeration index.
    pub fn mu_subgroup(&self, r: u64) -> Result<Vec<Elem>> {
        let n = self.q as u64 - 1;
        if r == 0 || n % r != 0 {
            return Err(Error::RNotDivisor { r, qm1: n });
        }
        let step = n / r;
        let mut out: Vec<Elem> = (0..r).map(|k| self.exp(k * step)).collect();
        out.sort();
        Ok(out)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        Elem(rng.gen_range(0..self.q))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        Elem(rng.gen_range(1..self.q))
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// A vector over `F_q`; for the extension it holds coordinates in the basis
/// `1, β, ..., β^{m-1}`.
pub type Coords = Vec<Elem>;

/// `F_{q^m} = F_q[X]/(g)` where `g` is chosen so that `β = X` is primitive.
///
/// Coordinates of an extension element in the basis `1, β, ..., β^{m-1}` are its
/// coefficients modulo `g`, so the coordinate map is the identity on vectors.
#[derive(Clone, Debug)]
pub struct ExtCtx {
    base: Arc<FieldCtx>,
    m: u32,
    modulus: Vec<Elem>,
    order: u64,
}

impl ExtCtx {
    /// Builds `F_{q^m}` from the lexicographically smallest monic polynomial of
    /// degree `m` over `F_q` whose root has multiplicative order `q^m - 1`.
    pub fn new(base: Arc<FieldCtx>, m: u32) -> Result<Self> {
        let q = base.q() as u64;
        if m < 2 {
            return Err(Error::InvalidRange("extension degree m must be at least 2".into()));
        }
        let order = match checked_pow(q, m) {
            Some(o) if o <= MAX_EXTENSION_ORDER => o,
            _ => return Err(Error::ExtensionTooLarge { q, m }),
        };
        let group = order - 1;
        let factors = prime_factors(group);
        let mut candidate = None;
        // c_0 is the most significant digit; c_0 = 0 makes X a zero divisor.
        let first = checked_pow(q, m - 1).unwrap();
        for k in first..order {
            let mut g: Vec<Elem> = digits_msb_first(k, q, m as usize)
                .into_iter()
                .map(Elem)
                .collect();
            g.push(Elem::ONE);
            let trial = ExtCtx {
                base: base.clone(),
                m,
                modulus: g,
                order,
            };
            let x = trial.beta();
            if trial.pow(&x, group) == trial.one()
                && factors.iter().all(|&f| trial.pow(&x, group / f) != trial.one())
            {
                candidate = Some(trial);
                break;
            }
        }
        let ext = candidate.expect("primitive polynomials exist in every degree");
        ext.verify_coordinates()?;
        Ok(ext)
    }

    fn verify_coordinates(&self) -> Result<()> {
        let bad = || Error::InvalidRange("β failed the primitivity walk".into());
        if self.order <= FULL_CHECK_ORDER {
            let mut seen = vec![false; self.order as usize];
            let mut cur = self.one();
            for _ in 0..self.order - 1 {
                let idx = self.coords_to_index(&cur) as usize;
                if idx == 0 || seen[idx] {
                    return Err(bad());
                }
                seen[idx] = true;
                cur = self.mul_by_beta(&cur);
            }
            if cur != self.one() {
                return Err(bad());
            }
        } else {
            // Sampled: β^k · β^{-k} = 1 and index round-trips.
            let group = self.order - 1;
            let mut k = 0x9e37_79b9_7f4a_7c15u64 % group;
            for _ in 0..256 {
                let a = self.pow(&self.beta(), k);
                let b = self.pow(&self.beta(), group - k);
                if self.mul(&a, &b) != self.one() || self.index_to_coords(self.coords_to_index(&a)) != a {
                    return Err(bad());
                }
                k = (k.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407)) % group;
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &Arc<FieldCtx> {
        &self.base
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    /// `q^m`.
    pub fn order(&self) -> u64 {
        self.order
    }
    /// Minimal polynomial of `β` over `F_q`, monic, constant term first.
    pub fn modulus(&self) -> &[Elem] {
        &self.modulus
    }

    pub fn one(&self) -> Coords {
        let mut v = vec![Elem::ZERO; self.m as usize];
        v[0] = Elem::ONE;
        v
    }

    pub fn zero(&self) -> Coords {
        vec![Elem::ZERO; self.m as usize]
    }

    /// The primitive element `β`.
    pub fn beta(&self) -> Coords {
        let mut v = self.zero();
        v[1] = Elem::ONE;
        v
    }

    /// Embeds `a ∈ F_q`.
    pub fn embed(&self, a: Elem) -> Coords {
        let mut v = self.zero();
        v[0] = a;
        v
    }

    /// Returns `Some(a)` when the element lies in `F_q`.
    pub fn as_base(&self, x: &[Elem]) -> Option<Elem> {
        x[1..].iter().all(|c| c.is_zero()).then(|| x[0])
    }

    pub fn add(&self, a: &[Elem], b: &[Elem]) -> Coords {
        a.iter().zip(b).map(|(&x, &y)| self.base.add(x, y)).collect()
    }

    /// `β · a`, a shift followed by one reduction step.
    pub fn mul_by_beta(&self, a: &[Elem]) -> Coords {
        let f = &self.base;
        let m = self.m as usize;
        let top = a[m - 1];
        let mut out = Vec::with_capacity(m);
        out.push(f.neg(f.mul(top, self.modulus[0])));
        for i in 1..m {
            out.push(f.sub(a[i - 1], f.mul(top, self.modulus[i])));
        }
        out
    }

    pub fn mul(&self, a: &[Elem], b: &[Elem]) -> Coords {
        let f = &self.base;
        let m = self.m as usize;
        let mut prod = vec![Elem::ZERO; 2 * m - 1];
        for (i, &x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = f.add(prod[i + j], f.mul(x, y));
            }
        }
        for top in (m..2 * m - 1).rev() {
            let c = prod[top];
            if c.is_zero() {
                continue;
            }
            for i in 0..m {
                let idx = top - m + i;
                prod[idx] = f.sub(prod[idx], f.mul(c, self.modulus[i]));
            }
            prod[top] = Elem::ZERO;
        }
        prod.truncate(m);
        prod
    }

    pub fn pow(&self, x: &[Elem], mut k: u64) -> Coords {
        let mut base = x.to_vec();
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        acc
    }

    /// Index of a coordinate vector: `Σ x_i q^i`, first coordinate least significant.
    pub fn coords_to_index(&self, x: &[Elem]) -> u64 {
        let q = self.base.q() as u64;
        x.iter().rev().fold(0u64, |acc, c| acc * q + c.0 as u64)
    }

    pub fn index_to_coords(&self, mut idx: u64) -> Coords {
        let q = self.base.q() as u64;
        (0..self.m)
            .map(|_| {
                let c = Elem((idx % q) as u32);
                idx /= q;
                c
            })
            .collect()
    }
}
