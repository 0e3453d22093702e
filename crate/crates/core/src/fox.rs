//! Fox calculus along u: G → Z over GF(2)[t, t⁻¹], ranks over GF(2)(t) and
//! the bound n ≥ q + 1 − (p + r).

use crate::error::{malformed, precondition, Error, Result};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::fmt;

/// Polynomial over GF(2), bit i = coefficient of tⁱ.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly2 {
    words: Vec<u64>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2 { words: Vec::new() }
    }

    pub fn one() -> Self {
        Poly2::monomial(0)
    }

    pub fn monomial(k: usize) -> Self {
        let mut p = Poly2 { words: vec![0; k / 64 + 1] };
        p.words[k / 64] = 1 << (k % 64);
        p
    }

    fn trim(mut self) -> Self {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        let w = self.words.last()?;
        Some((self.words.len() - 1) * 64 + 63 - w.leading_zeros() as usize)
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words.get(i / 64).is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    /// Number of trailing zero coefficients.
    pub fn valuation(&self) -> Option<usize> {
        let (i, w) = self.words.iter().enumerate().find(|(_, w)| **w != 0)?;
        Some(i * 64 + w.trailing_zeros() as usize)
    }

    pub fn add(&self, o: &Poly2) -> Poly2 {
        let mut w = vec![0; self.words.len().max(o.words.len())];
        for (i, x) in w.iter_mut().enumerate() {
            *x = self.words.get(i).copied().unwrap_or(0) ^ o.words.get(i).copied().unwrap_or(0);
        }
        Poly2 { words: w }.trim()
    }

    pub fn shl(&self, k: usize) -> Poly2 {
        if self.is_zero() {
            return Poly2::zero();
        }
        let (ws, bs) = (k / 64, k % 64);
        let mut w = vec![0; self.words.len() + ws + 1];
        for (i, &x) in self.words.iter().enumerate() {
            w[i + ws] ^= x << bs;
            if bs > 0 {
                w[i + ws + 1] ^= x >> (64 - bs);
            }
        }
        Poly2 { words: w }.trim()
    }

    pub fn shr(&self, k: usize) -> Poly2 {
        let d = match self.degree() {
            Some(d) if d >= k => d,
            _ => return Poly2::zero(),
        };
        let mut out = Poly2 { words: vec![0; (d - k) / 64 + 1] };
        for i in k..=d {
            if self.coeff(i) {
                out.words[(i - k) / 64] |= 1 << ((i - k) % 64);
            }
        }
        out.trim()
    }

    pub fn mul(&self, o: &Poly2) -> Poly2 {
        let mut acc = Poly2::zero();
        if let Some(d) = o.degree() {
            for i in 0..=d {
                if o.coeff(i) {
                    acc = acc.add(&self.shl(i));
                }
            }
        }
        acc
    }

    pub fn divrem(&self, d: &Poly2) -> Result<(Poly2, Poly2)> {
        let dd = d.degree().ok_or_else(|| Error::Failed("division by the zero polynomial".into()))?;
        let mut q = Poly2::zero();
        let mut r = self.clone();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            q = q.add(&Poly2::monomial(rd - dd));
            r = r.add(&d.shl(rd - dd));
        }
        Ok((q, r))
    }

    pub fn gcd(&self, o: &Poly2) -> Poly2 {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).map(|x| x.1).unwrap_or_default();
            a = b;
            b = r;
        }
        a
    }

    pub fn eval(&self, x: Gf16) -> Gf16 {
        let mut acc = Gf16(0);
        if let Some(d) = self.degree() {
            for i in (0..=d).rev() {
                acc = acc.mul(x);
                if self.coeff(i) {
                    acc = acc.add(Gf16(1));
                }
            }
        }
        acc
    }
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = (0..=self.degree().map_or(0, |d| d + 1)).filter(|&i| self.coeff(i)).map(|i| format!("t^{i}")).collect();
        if terms.is_empty() { write!(f, "0") } else { write!(f, "{}", terms.join("+")) }
    }
}

/// Element of GF(2)[t, t⁻¹]: t^shift · poly with poly(0) = 1 unless zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Laurent {
    poly: Poly2,
    shift: i64,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent::default()
    }

    pub fn one() -> Self {
        Laurent::monomial(0)
    }

    pub fn monomial(k: i64) -> Self {
        Laurent { poly: Poly2::one(), shift: k }
    }

    /// Sum of t^e over the given exponents, repeated exponents cancelling.
    pub fn from_exponents(exps: &[i64]) -> Self {
        exps.iter().fold(Laurent::zero(), |acc, &e| acc.add(&Laurent::monomial(e)))
    }

    /// Exponents with nonzero coefficient, ascending.
    pub fn exponents(&self) -> Vec<i64> {
        match self.poly.degree() {
            None => Vec::new(),
            Some(d) => (0..=d).filter(|&i| self.poly.coeff(i)).map(|i| i as i64 + self.shift).collect(),
        }
    }

    fn normal(poly: Poly2, shift: i64) -> Self {
        match poly.valuation() {
            None => Laurent::zero(),
            Some(v) => Laurent { poly: poly.shr(v), shift: shift + v as i64 },
        }
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn add(&self, o: &Laurent) -> Laurent {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let s = self.shift.min(o.shift);
        let a = self.poly.shl((self.shift - s) as usize);
        let b = o.poly.shl((o.shift - s) as usize);
        Laurent::normal(a.add(&b), s)
    }

    pub fn mul(&self, o: &Laurent) -> Laurent {
        if self.is_zero() || o.is_zero() {
            return Laurent::zero();
        }
        Laurent::normal(self.poly.mul(&o.poly), self.shift + o.shift)
    }

    pub fn to_rat(&self) -> RatFunc {
        if self.shift >= 0 {
            RatFunc::new(self.poly.shl(self.shift as usize), Poly2::one())
        } else {
            RatFunc::new(self.poly.clone(), Poly2::monomial((-self.shift) as usize))
        }
    }

    pub fn eval(&self, x: Gf16) -> Gf16 {
        let base = self.poly.eval(x);
        let m = if self.shift >= 0 { x.pow(self.shift as u64) } else { x.inv().pow((-self.shift) as u64) };
        base.mul(m)
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = self.exponents();
        if e.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = e.iter().map(|&k| if k == 0 { "1".into() } else { format!("t^{k}") }).collect();
        write!(f, "{}", terms.join("+"))
    }
}

/// Element of GF(2)(t) in lowest terms.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFunc {
    pub num: Poly2,
    pub den: Poly2,
}

impl RatFunc {
    pub fn new(num: Poly2, den: Poly2) -> Self {
        if num.is_zero() {
            return RatFunc { num, den: Poly2::one() };
        }
        let g = num.gcd(&den);
        let n = num.divrem(&g).map(|x| x.0).unwrap_or_default();
        let d = den.divrem(&g).map(|x| x.0).unwrap_or_default();
        RatFunc { num: n, den: d }
    }

    pub fn zero() -> Self {
        RatFunc { num: Poly2::zero(), den: Poly2::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::Failed("inverse of zero".into()));
        }
        Ok(RatFunc::new(self.den.clone(), self.num.clone()))
    }
}

/// GF(2¹⁶) modulo x¹⁶ + x¹² + x³ + x + 1.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Gf16(pub u16);

impl Gf16 {
    const MODULUS: u32 = 0x1100B;

    pub fn add(self, o: Gf16) -> Gf16 {
        Gf16(self.0 ^ o.0)
    }

    pub fn mul(self, o: Gf16) -> Gf16 {
        let mut acc: u32 = 0;
        let a = self.0 as u32;
        for i in 0..16 {
            if (o.0 >> i) & 1 == 1 {
                acc ^= a << i;
            }
        }
        for i in (16..32).rev() {
            if (acc >> i) & 1 == 1 {
                acc ^= Self::MODULUS << (i - 16);
            }
        }
        Gf16(acc as u16)
    }

    pub fn pow(self, mut k: u64) -> Gf16 {
        let (mut base, mut acc) = (self, Gf16(1));
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            k >>= 1;
        }
        acc
    }

    pub fn inv(self) -> Gf16 {
        self.pow((1 << 16) - 2)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Laurent>,
}

impl LaurentMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        LaurentMatrix { rows, cols, entries: vec![Laurent::zero(); rows * cols] }
    }

    pub fn get(&self, i: usize, j: usize) -> &Laurent {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Laurent) {
        self.entries[i * self.cols + j] = x;
    }

    pub fn mul(&self, o: &LaurentMatrix) -> Result<LaurentMatrix> {
        if self.cols != o.rows {
            return Err(malformed(format!("cannot compose {}x{} with {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        let mut out = LaurentMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = Laurent::zero();
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).mul(o.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Laurent::is_zero)
    }

    pub fn to_json(&self) -> Value {
        Value::Array((0..self.rows).map(|i| Value::Array((0..self.cols).map(|j| json!(self.get(i, j).exponents())).collect())).collect())
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let rows = v.as_array().ok_or_else(|| malformed("matrix must be an array of rows"))?;
        let cols = rows.first().and_then(Value::as_array).map_or(0, Vec::len);
        let mut m = LaurentMatrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_array().filter(|r| r.len() == cols).ok_or_else(|| malformed("ragged matrix"))?;
            for (j, e) in r.iter().enumerate() {
                let exps: Vec<i64> = serde_json::from_value(e.clone()).map_err(|e| malformed(format!("entry must be a list of exponents: {e}")))?;
                m.set(i, j, Laurent::from_exponents(&exps));
            }
        }
        Ok(m)
    }
}

/// Rank over GF(2)(t) by exact Gaussian elimination.
pub fn rank_over_fraction_field(m: &LaurentMatrix) -> usize {
    let mut a: Vec<Vec<RatFunc>> = (0..m.rows).map(|i| (0..m.cols).map(|j| m.get(i, j).to_rat()).collect()).collect();
    let mut rank = 0;
    for c in 0..m.cols {
        let Some(p) = (rank..m.rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(rank, p);
        let pinv = a[rank][c].inv().expect("pivot is nonzero");
        for i in rank + 1..m.rows {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].mul(&pinv);
            for j in c..m.cols {
                let d = f.mul(&a[rank][j]);
                a[i][j] = a[i][j].add(&d);
            }
        }
        rank += 1;
    }
    rank
}

/// Rank of M(t₀) over GF(2¹⁶).
pub fn specialized_rank(m: &LaurentMatrix, t0: Gf16) -> usize {
    let mut a: Vec<Vec<Gf16>> = (0..m.rows).map(|i| (0..m.cols).map(|j| m.get(i, j).eval(t0)).collect()).collect();
    let mut rank = 0;
    for c in 0..m.cols {
        let Some(p) = (rank..m.rows).find(|&i| a[i][c].0 != 0) else { continue };
        a.swap(rank, p);
        let pinv = a[rank][c].inv();
        for i in rank + 1..m.rows {
            if a[i][c].0 == 0 {
                continue;
            }
            let f = a[i][c].mul(pinv);
            for j in c..m.cols {
                let d = f.mul(a[rank][j]);
                a[i][j] = a[i][j].add(d);
            }
        }
        rank += 1;
    }
    rank
}

/// Generators, relators as (generator, ±1) letters, u on generators, and
/// an optional boundary matrix for r three-cells.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<Vec<(usize, i8)>>,
    pub u: Vec<i64>,
    pub d3: Option<LaurentMatrix>,
}

#[derive(Deserialize)]
struct PresentationJson {
    generators: Vec<String>,
    relators: Vec<Value>,
    u: std::collections::BTreeMap<String, i64>,
    #[serde(default)]
    r3: usize,
    #[serde(default)]
    d3: Option<Value>,
}

impl Presentation {
    pub fn new(generators: &[&str], relators: &[&str], u: &[i64]) -> Result<Self> {
        let generators: Vec<String> = generators.iter().map(|s| s.to_string()).collect();
        let relators = relators.iter().map(|r| parse_relator(&generators, &Value::String(r.to_string()))).collect::<Result<_>>()?;
        Presentation { generators, relators, u: u.to_vec(), d3: None }.checked()
    }

    fn checked(self) -> Result<Self> {
        if self.u.len() != self.generators.len() {
            return Err(malformed("u needs one value per generator"));
        }
        for (k, r) in self.relators.iter().enumerate() {
            let s: i64 = r.iter().map(|&(g, e)| e as i64 * self.u[g]).sum();
            if s != 0 {
                return Err(precondition(format!("u does not vanish on relator {k} (u = {s})")));
            }
        }
        if let Some(d3) = &self.d3 {
            if d3.cols != self.relators.len() {
                return Err(malformed("D3 must have one column per relator"));
            }
        }
        Ok(self)
    }

    pub fn p(&self) -> usize {
        self.generators.len()
    }

    pub fn q(&self) -> usize {
        self.relators.len()
    }

    pub fn r(&self) -> usize {
        self.d3.as_ref().map_or(0, |d| d.rows)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let j: PresentationJson = serde_json::from_value(v.clone()).map_err(|e| malformed(format!("presentation: {e}")))?;
        let relators = j.relators.iter().map(|r| parse_relator(&j.generators, r)).collect::<Result<_>>()?;
        let u = j.generators.iter().map(|g| j.u.get(g).copied().ok_or_else(|| malformed(format!("u missing for generator {g}")))).collect::<Result<_>>()?;
        let d3 = j.d3.as_ref().map(LaurentMatrix::from_json).transpose()?;
        if j.r3 != d3.as_ref().map_or(0, |d| d.rows) {
            return Err(malformed("r3 > 0 needs an explicit d3 matrix with r3 rows"));
        }
        Presentation { generators: j.generators, relators, u, d3 }.checked()
    }
}

/// "acAC" (lowercase generator, uppercase inverse) or ["a", "c", "a^-1", ...].
fn parse_relator(gens: &[String], v: &Value) -> Result<Vec<(usize, i8)>> {
    let find = |name: &str| gens.iter().position(|g| g == name).ok_or_else(|| malformed(format!("unknown generator {name}")));
    match v {
        Value::String(s) => s
            .chars()
            .map(|c| {
                let lower = c.to_lowercase().to_string();
                let e = if c.is_uppercase() { -1 } else { 1 };
                Ok((find(&lower)?, e))
            })
            .collect(),
        Value::Array(a) => a
            .iter()
            .map(|t| {
                let t = t.as_str().ok_or_else(|| malformed("relator tokens must be strings"))?;
                match t.strip_suffix("^-1") {
                    Some(g) => Ok((find(g)?, -1)),
                    None => Ok((find(t)?, 1)),
                }
            })
            .collect(),
        _ => Err(malformed("relator must be a string or a list of tokens")),
    }
}

#[derive(Clone, Debug)]
pub struct FoxMatrices {
    /// p × 1, entries t^{u(x_i)} + 1.
    pub d1: LaurentMatrix,
    /// q × p, Fox derivatives ∂r_j/∂x_i specialized along u.
    pub d2: LaurentMatrix,
    pub d3: Option<LaurentMatrix>,
}

/// ∂w/∂x_i specialized g ↦ t^{u(g)}.
pub fn fox_derivative(word: &[(usize, i8)], gen: usize, u: &[i64]) -> Laurent {
    let mut acc = Laurent::zero();
    let mut prefix = 0i64;
    for &(g, e) in word {
        if g == gen {
            let exp = if e > 0 { prefix } else { prefix - u[g] };
            acc = acc.add(&Laurent::monomial(exp));
        }
        prefix += e as i64 * u[g];
    }
    acc
}

pub fn fox_matrix(p: &Presentation) -> Result<FoxMatrices> {
    let mut d1 = LaurentMatrix::zeros(p.p(), 1);
    for i in 0..p.p() {
        d1.set(i, 0, Laurent::monomial(p.u[i]).add(&Laurent::one()));
    }
    let mut d2 = LaurentMatrix::zeros(p.q(), p.p());
    for (j, r) in p.relators.iter().enumerate() {
        for i in 0..p.p() {
            d2.set(j, i, fox_derivative(r, i, &p.u));
        }
    }
    Ok(FoxMatrices { d1, d2, d3: p.d3.clone() })
}

impl FoxMatrices {
    /// D₂·D₁ = 0 and D₃·D₂ = 0.
    pub fn chain_condition(&self) -> Result<bool> {
        let a = self.d2.mul(&self.d1)?.is_zero();
        let b = match &self.d3 {
            Some(d3) => d3.mul(&self.d2)?.is_zero(),
            None => true,
        };
        Ok(a && b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiReport {
    pub p: usize,
    pub q: usize,
    pub r: usize,
    pub rank_d2: usize,
    pub rank_d3: usize,
    pub n: i64,
    pub bound: i64,
    pub satisfied: bool,
    pub certificate: bool,
}

pub fn betti_bound(p: &Presentation) -> Result<BettiReport> {
    let m = fox_matrix(p)?;
    if m.d1.is_zero() {
        return Err(precondition("u must be nonzero"));
    }
    if !m.chain_condition()? {
        return Err(Error::Failed("chain condition fails: D2 D1 or D3 D2 is nonzero".into()));
    }
    let rank_d2 = rank_over_fraction_field(&m.d2);
    let rank_d3 = m.d3.as_ref().map_or(0, rank_over_fraction_field);
    let (pp, q, r) = (p.p(), p.q(), p.r());
    let n = (q - rank_d2) as i64 - rank_d3 as i64;
    let bound = q as i64 + 1 - (pp + r) as i64;
    if n < bound {
        return Err(Error::Failed(format!("n = {n} is below the bound {bound}; rank computation is inconsistent")));
    }
    Ok(BettiReport { p: pp, q, r, rank_d2, rank_d3, n, bound, satisfied: true, certificate: n > 0 })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductCounts {
    pub p: i64,
    pub q: i64,
    pub r: i64,
    /// q − (p + r) from the counts themselves.
    pub excess: i64,
    /// (1 − p₁ + q₁)(1 − p₂ + q₂) − 1; equals `excess` + q₁q₂.
    pub formula: i64,
}

pub fn product_presentation_counts(p1: i64, q1: i64, p2: i64, q2: i64) -> Result<ProductCounts> {
    if [p1, q1, p2, q2].iter().any(|&x| x < 0) {
        return Err(precondition("counts must be nonnegative"));
    }
    let (p, q, r) = (p1 + p2, p1 * p2 + q1 + q2, p1 * q2 + q1 * p2);
    Ok(ProductCounts { p, q, r, excess: q - (p + r), formula: (1 - p1 + q1) * (1 - p2 + q2) - 1 })
}

/// Cell counts of Σ_{g₁} × Σ_{g₂}: p = r = 2g₁ + 2g₂, q = 4g₁g₂ + 2.
pub fn surface_product_counts(g1: i64, g2: i64) -> (i64, i64, i64) {
    (2 * g1 + 2 * g2, 4 * g1 * g2 + 2, 2 * g1 + 2 * g2)
}
