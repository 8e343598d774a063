//! Truncated multivariate power series in the edge couplings, with exact
//! rational coefficients.
//!
//! Coefficients are stored densely: an exponent vector `(n_1, .., n_r)` with
//! `n_i <= cap_i` lives at the mixed-radix index `sum n_i * stride_i`.
//! Componentwise `a <= b` implies `index(a) <= index(b)`, which is what the
//! division recursion relies on.

use std::collections::hash_map::{Entry, HashMap};
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{check_cap, invalid, Error, Result};
use crate::graph::{BaseGraph, Current, EdgeId, VertexId, VertexSet};
use crate::partition::{r_current, SetPartitions};
use crate::rational::{factorial, partition_weight, Rational};

/// Largest number of stored coefficients.
pub const MAX_TERMS: usize = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    caps: Vec<u32>,
    strides: Vec<usize>,
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    pub fn zero(caps: &[u32]) -> Result<Self> {
        let mut strides = Vec::with_capacity(caps.len());
        let mut size = 1usize;
        for &c in caps {
            strides.push(size);
            size = size
                .checked_mul(c as usize + 1)
                .filter(|&s| s <= MAX_TERMS)
                .ok_or(Error::CapExceeded {
                    what: "series size",
                    value: usize::MAX,
                    cap: MAX_TERMS,
                })?;
        }
        check_cap("series size", size, MAX_TERMS)?;
        Ok(TruncatedSeries {
            caps: caps.to_vec(),
            strides,
            coeffs: vec![Rational::zero(); size],
        })
    }

    pub fn constant(caps: &[u32], c: Rational) -> Result<Self> {
        let mut s = Self::zero(caps)?;
        s.coeffs[0] = c;
        Ok(s)
    }

    pub fn one(caps: &[u32]) -> Result<Self> {
        Self::constant(caps, Rational::one())
    }

    /// The coordinate `x_var` (zero when its cap is 0).
    pub fn variable(caps: &[u32], var: usize) -> Result<Self> {
        let mut s = Self::zero(caps)?;
        if caps[var] > 0 {
            s.coeffs[s.strides[var]] = Rational::one();
        }
        Ok(s)
    }

    pub fn caps(&self) -> &[u32] {
        &self.caps
    }

    fn index(&self, exps: &[u32]) -> Option<usize> {
        if exps.len() != self.caps.len() {
            return None;
        }
        let mut i = 0;
        for ((&e, &c), &s) in exps.iter().zip(&self.caps).zip(&self.strides) {
            if e > c {
                return None;
            }
            i += e as usize * s;
        }
        Some(i)
    }

    fn exponents(&self, mut i: usize) -> Vec<u32> {
        self.caps
            .iter()
            .map(|&c| {
                let e = i % (c as usize + 1);
                i /= c as usize + 1;
                e as u32
            })
            .collect()
    }

    /// Coefficient of `x^exps`; zero outside the caps.
    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.index(exps)
            .map(|i| self.coeffs[i].clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn set_coeff(&mut self, exps: &[u32], value: Rational) -> Result<()> {
        let i = self
            .index(exps)
            .ok_or_else(|| invalid("exponent outside the series caps"))?;
        self.coeffs[i] = value;
        Ok(())
    }

    pub fn constant_term(&self) -> &Rational {
        &self.coeffs[0]
    }

    fn same_caps(&self, other: &Self) -> Result<()> {
        if self.caps == other.caps {
            Ok(())
        } else {
            Err(invalid("series caps differ"))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_caps(other)?;
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_caps(other)?;
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a -= b;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = self.clone();
        for a in &mut out.coeffs {
            *a *= c;
        }
        out
    }

    /// Index of `a + b` when it stays within the caps.
    fn add_index(&self, a: usize, b: usize) -> Option<usize> {
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        for (&c, &s) in self.caps.iter().zip(&self.strides) {
            let r = c as usize + 1;
            let e = a % r + b % r;
            if e > c as usize {
                return None;
            }
            out += e * s;
            a /= r;
            b /= r;
        }
        Some(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_caps(other)?;
        let mut out = Self::zero(&self.caps)?;
        let nz: Vec<usize> = (0..other.coeffs.len())
            .filter(|&j| !other.coeffs[j].is_zero())
            .collect();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for &j in &nz {
                if let Some(k) = self.add_index(i, j) {
                    out.coeffs[k] += a * &other.coeffs[j];
                }
            }
        }
        Ok(out)
    }

    /// `self / other`; needs a nonzero constant term in `other`.
    pub fn div(&self, other: &Self) -> Result<Self> {
        self.same_caps(other)?;
        let b0 = other.coeffs[0].clone();
        if b0.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let nz: Vec<usize> = (1..other.coeffs.len())
            .filter(|&j| !other.coeffs[j].is_zero())
            .collect();
        let mut c = Self::zero(&self.caps)?;
        for n in 0..self.coeffs.len() {
            let ne = self.exponents(n);
            let mut acc = self.coeffs[n].clone();
            for &k in &nz {
                let ke = other.exponents(k);
                if ke.iter().zip(&ne).all(|(a, b)| a <= b) {
                    let diff: Vec<u32> = ne.iter().zip(&ke).map(|(a, b)| a - b).collect();
                    let j = c.index(&diff).unwrap();
                    acc -= &other.coeffs[k] * &c.coeffs[j];
                }
            }
            c.coeffs[n] = acc / &b0;
        }
        Ok(c)
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        let mut out = Self::one(&self.caps)?;
        for _ in 0..n {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// `∂/∂x_var`; the cap of `x_var` drops by one (stays 0 at 0).
    pub fn derivative(&self, var: usize) -> Result<Self> {
        let mut caps = self.caps.clone();
        caps[var] = caps[var].saturating_sub(1);
        let mut out = Self::zero(&caps)?;
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let mut e = self.exponents(i);
            if e[var] == 0 {
                continue;
            }
            let k = e[var];
            e[var] -= 1;
            out.set_coeff(&e, a * Rational::from_integer(k.into()))?;
        }
        Ok(out)
    }

    /// Keeps only exponents within `caps` (each no larger than the current cap).
    pub fn truncate(&self, caps: &[u32]) -> Result<Self> {
        if caps.len() != self.caps.len() || caps.iter().zip(&self.caps).any(|(a, b)| a > b) {
            return Err(invalid("truncation caps must not exceed the current caps"));
        }
        let mut out = Self::zero(caps)?;
        for (i, a) in self.coeffs.iter().enumerate() {
            if let Some(j) = out.index(&self.exponents(i)) {
                out.coeffs[j] = a.clone();
            }
        }
        Ok(out)
    }

    /// Nonzero terms as `(exponents, coefficient)`, in index order.
    pub fn terms(&self) -> Vec<(Vec<u32>, Rational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(i, a)| (self.exponents(i), a.clone()))
            .collect()
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = terms
            .iter()
            .map(|(e, a)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x > 0)
                    .map(|(i, &x)| if x == 1 { format!("J{i}") } else { format!("J{i}^{x}") })
                    .collect();
                if mono.is_empty() {
                    crate::rational::format_rational(a)
                } else {
                    format!("{}*{}", crate::rational::format_rational(a), mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `sum_{n <= caps, ∂n = A} prod_e J_e^{n_e} / n_e!`.
pub fn source_series(base: &BaseGraph, a: &VertexSet, caps: &[u32]) -> Result<TruncatedSeries> {
    if caps.len() != base.num_edges() {
        return Err(invalid("one cap per edge"));
    }
    let mut out = TruncatedSeries::zero(caps)?;
    let target = base.mask(a)?;
    let index = base.index();
    let emasks: Vec<u64> = base.edges().iter().map(|e| index.edge_mask(e)).collect();
    let facts: Vec<Vec<Rational>> = caps
        .iter()
        .map(|&c| (0..=c).map(|n| Rational::from_integer(factorial(n)).recip()).collect())
        .collect();
    for i in 0..out.coeffs.len() {
        let e = out.exponents(i);
        let mask = e
            .iter()
            .zip(&emasks)
            .filter(|(n, _)| *n % 2 == 1)
            .fold(0, |acc, (_, m)| acc ^ m);
        if mask == target {
            out.coeffs[i] = e
                .iter()
                .enumerate()
                .map(|(k, &n)| facts[k][n as usize].clone())
                .product();
        }
    }
    Ok(out)
}

/// Both sides of the coefficient identity at multi-index `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaOutcome {
    /// `[J^m] (Z/2^|V|)^{k+1} ∂u_2k/∂J_e0`
    pub series_coefficient: Rational,
    /// `R(m) / m!`
    pub partition_side: Rational,
}

impl LemmaOutcome {
    pub fn holds(&self) -> bool {
        self.series_coefficient == self.partition_side
    }
}

/// Computes `[J^m] (Z/2^|V|)^{k+1} ∂u_2k(σ_sources)/∂J_e0` from source series
/// and compares with `R(m)/m!` evaluated over current tuples.
pub fn lemma_u2krcr(
    base: &BaseGraph,
    sources: &[VertexId],
    e0: EdgeId,
    marked: (VertexId, VertexId),
    m: &Current<'_>,
) -> Result<LemmaOutcome> {
    if !std::ptr::eq(m.base(), base) && m.base() != base {
        return Err(invalid("current lives on a different graph"));
    }
    let pos = base.edge_position(e0).ok_or(Error::UnknownEdge(e0))?;
    let (u0, v0) = marked;
    if !base.edges()[pos].joins(u0, v0) {
        return Err(invalid(format!("edge {e0} does not join {u0} and {v0}")));
    }
    if sources.is_empty() || sources.len() % 2 == 1 {
        return Err(Error::OddSourceSet(sources.len()));
    }
    let mut distinct: Vec<VertexId> = sources.to_vec();
    distinct.sort();
    distinct.dedup();
    if distinct.len() != sources.len() {
        return Err(invalid("sources must be distinct"));
    }
    if distinct.contains(&v0) {
        return Err(invalid(format!("v0 = {v0} is a source")));
    }
    let k = sources.len() / 2;
    let caps: Vec<u32> = m.values().to_vec();
    let mut wide = caps.clone();
    wide[pos] += 1;

    let z = source_series(base, &VertexSet::new(), &wide)?;
    let n = sources.len();
    let mut u = TruncatedSeries::zero(&wide)?;
    // cache <σ_B> per block bitmask
    let mut cache: HashMap<u64, TruncatedSeries> = Default::default();
    'partitions: for p in SetPartitions::new(n) {
        if p.iter().any(|b| b.count_ones() % 2 == 1) {
            continue 'partitions;
        }
        let mut prod = TruncatedSeries::one(&wide)?;
        for &b in &p {
            if let Entry::Vacant(slot) = cache.entry(b) {
                let set: VertexSet = (0..n).filter(|i| b >> i & 1 == 1).map(|i| sources[i]).collect();
                slot.insert(source_series(base, &set, &wide)?.div(&z)?);
            }
            prod = prod.mul(&cache[&b])?;
        }
        let w = Rational::from_integer(partition_weight(p.len()).into());
        u = u.add(&prod.scale(&w))?;
    }
    let du = u.derivative(pos)?;
    let z_m = z.truncate(&caps)?;
    let lhs = z_m.pow(k as u32 + 1)?.mul(&du)?;
    let series_coefficient = lhs.coeff(&caps);

    let r = r_current(m, sources, marked)?;
    let mfact: Rational = Rational::from_integer(crate::partition::current_factorial(m));
    let partition_side = Rational::from_integer(r.into()) / mfact;
    Ok(LemmaOutcome {
        series_coefficient,
        partition_side,
    })
}

pub fn lemma_u2krcr_check(
    base: &BaseGraph,
    sources: &[VertexId],
    e0: EdgeId,
    marked: (VertexId, VertexId),
    m: &Current<'_>,
) -> Result<bool> {
    lemma_u2krcr(base, sources, e0, marked, m).map(|o| o.holds())
}

/// `S_A * S_{uv}` against the switched form
/// `sum_m 1[u <-> v in m] w(m) sum_{n <= m, ∂n = A^{u,v}, ∂m = A^{u,v}} C(m, n)`,
/// coefficient by coefficient up to `caps`.
pub fn switching_series_check(
    base: &BaseGraph,
    a: &VertexSet,
    u: VertexId,
    v: VertexId,
    caps: &[u32],
) -> Result<bool> {
    let uv: VertexSet = [u, v].into_iter().collect();
    let lhs = source_series(base, a, caps)?.mul(&source_series(base, &uv, caps)?)?;
    let switched = crate::graph::symmetric_difference(a, &uv);
    let mut rhs = TruncatedSeries::zero(caps)?;
    for i in 0..rhs.coeffs.len() {
        let exps = rhs.exponents(i);
        let m = Current::new(base, exps.clone())?;
        if m.boundary() != switched || !m.connects(u, v) {
            continue;
        }
        let count: u64 = m.sub_currents(&switched).map(|(_, w)| w).sum();
        let mfact = Rational::from_integer(crate::partition::current_factorial(&m));
        rhs.coeffs[i] = Rational::from_integer(count.into()) / mfact;
    }
    Ok(lhs == rhs)
}
