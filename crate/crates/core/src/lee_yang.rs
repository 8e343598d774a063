//! Partition function in a weighted complex field and its zeros.
//!
//! With `X = sum_u λ_u σ_u`, rational `λ` and `q` the common denominator,
//! `Z(h) = e^{h Λmax} sum_j c_j ζ^j` where `ζ = e^{-2h/q}` and
//! `c_j = sum { W(σ) : q * sum_{σ_u = -1} λ_u = j }`, `W(σ) = exp(sum J σσ)`.
//! A zero `ζ` with argument `θ` is a zero of `Z` at `h = iα`, `α = q|θ|/2`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::corpus::{corpus_rng, random_graph, CorpusRng};
use crate::error::{check_cap, invalid, Error, Result};
use crate::graph::{BaseGraph, VertexId};
use crate::ising::{cumulants, Couplings};
use crate::rational::{factorial, format_rational, rat, to_f64, Rational};
use rand::Rng;

/// Couplings above this are rejected.
pub const MAX_COUPLING: f64 = 3.0;
/// Largest polynomial degree `q * sum λ`.
pub const MAX_DEGREE: usize = 256;
const MAX_SPINS: usize = 20;

/// Nonnegative rational field weights; unlisted vertices weigh 0.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightedField {
    weights: BTreeMap<VertexId, Rational>,
}

impl WeightedField {
    pub fn new<I: IntoIterator<Item = (VertexId, Rational)>>(entries: I) -> Result<Self> {
        let mut weights = BTreeMap::new();
        for (v, l) in entries {
            if l.is_negative() {
                return Err(invalid(format!("field weight {l} on {v} is negative")));
            }
            weights.insert(v, l);
        }
        Ok(WeightedField { weights })
    }

    pub fn uniform(base: &BaseGraph, lambda: Rational) -> Self {
        WeightedField {
            weights: base.vertices().iter().map(|&v| (v, lambda.clone())).collect(),
        }
    }

    pub fn weight(&self, v: VertexId) -> Rational {
        self.weights.get(&v).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&VertexId, &Rational)> {
        self.weights.iter()
    }

    /// The same field with every weight multiplied by `s`.
    pub fn scaled(&self, s: &Rational) -> Self {
        WeightedField {
            weights: self.weights.iter().map(|(v, l)| (*v, l * s)).collect(),
        }
    }
}

/// Parses a float field weight as an exact rational with a small denominator;
/// anything else is rejected.
pub fn rational_weight(x: f64) -> Result<Rational> {
    for q in 1..=1000i64 {
        let p = (x * q as f64).round();
        if ((p / q as f64) - x).abs() <= 1e-12 * x.abs().max(1.0) {
            return Ok(rat(p as i64, q));
        }
    }
    Err(invalid(format!("field weight {x} is not a rational with denominator <= 1000")))
}

/// `sum_j c_j ζ^j`, palindromic by construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldPolynomial {
    pub coefficients: Vec<f64>,
    /// common denominator of the field weights
    pub denominator: u64,
}

impl FieldPolynomial {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn is_palindromic(&self) -> bool {
        let c = &self.coefficients;
        c.iter().zip(c.iter().rev()).all(|(a, b)| a == b)
    }

    /// `Λmax = sum λ = D / q`.
    pub fn max_field(&self) -> f64 {
        self.degree() as f64 / self.denominator as f64
    }

    /// `Re <e^{iαX}> * Z e^{-...}`: `sum_j c_j cos(α (D - 2j) / q)`.
    pub fn characteristic(&self, alpha: f64) -> f64 {
        let d = self.degree() as f64;
        let q = self.denominator as f64;
        self.coefficients
            .iter()
            .enumerate()
            .map(|(j, c)| c * (alpha * (d - 2.0 * j as f64) / q).cos())
            .sum()
    }

    /// `r`-th derivative of [`Self::characteristic`] and the matching scale
    /// `sum_j c_j |w_j|^r`.
    pub fn characteristic_derivative(&self, alpha: f64, r: u32) -> (f64, f64) {
        let d = self.degree() as f64;
        let q = self.denominator as f64;
        let shift = r as f64 * PI / 2.0;
        self.coefficients
            .iter()
            .enumerate()
            .fold((0.0, 0.0), |(value, scale), (j, c)| {
                let w = (d - 2.0 * j as f64) / q;
                let wr = w.powi(r as i32);
                (value + c * wr * (alpha * w + shift).cos(), scale + c * wr.abs())
            })
    }

    fn characteristic_slope(&self, alpha: f64) -> f64 {
        let d = self.degree() as f64;
        let q = self.denominator as f64;
        self.coefficients
            .iter()
            .enumerate()
            .map(|(j, c)| {
                let w = (d - 2.0 * j as f64) / q;
                -c * w * (alpha * w).sin()
            })
            .sum()
    }
}

fn check_couplings(base: &BaseGraph, j: &[f64]) -> Result<()> {
    if j.len() != base.num_edges() {
        return Err(invalid(format!("{} couplings for {} edges", j.len(), base.num_edges())));
    }
    for (e, &x) in base.edges().iter().zip(j) {
        if !(0.0..=MAX_COUPLING).contains(&x) {
            return Err(invalid(format!(
                "coupling {x} on edge {} outside [0, {MAX_COUPLING}]",
                e.id
            )));
        }
    }
    Ok(())
}

/// Integer exponents `q λ_u` in vertex order, and `q`.
fn integer_weights(base: &BaseGraph, lambda: &WeightedField) -> Result<(Vec<u64>, u64)> {
    for v in lambda.weights.keys() {
        if !base.contains_vertex(*v) {
            return Err(Error::UnknownVertex(*v));
        }
    }
    let lams: Vec<Rational> = base.vertices().iter().map(|&v| lambda.weight(v)).collect();
    let q = lams
        .iter()
        .fold(num_bigint::BigInt::one(), |acc, l| acc.lcm(l.denom()));
    let a: Option<Vec<u64>> = lams
        .iter()
        .map(|l| (l * Rational::from_integer(q.clone())).to_integer().to_u64())
        .collect();
    let a = a.ok_or_else(|| invalid("field weights too large"))?;
    let q = q.to_u64().ok_or_else(|| invalid("field denominator too large"))?;
    Ok((a, q))
}

pub fn partition_polynomial(base: &BaseGraph, j: &[f64], lambda: &WeightedField) -> Result<FieldPolynomial> {
    check_couplings(base, j)?;
    let n = base.num_vertices();
    if n == 0 {
        return Err(invalid("no spins"));
    }
    check_cap("spin count", n, MAX_SPINS)?;
    let (a, q) = integer_weights(base, lambda)?;
    let d: u64 = a.iter().sum();
    if d == 0 {
        return Err(invalid("field weights are all zero"));
    }
    check_cap("polynomial degree", d as usize, MAX_DEGREE)?;
    let index = base.index();
    let ends: Vec<(usize, usize)> = base
        .edges()
        .iter()
        .map(|e| (index.position(e.u).unwrap(), index.position(e.v).unwrap()))
        .collect();
    let mut c = vec![0.0f64; d as usize + 1];
    // spin 0 up; the flipped configuration lands on the mirrored coefficient
    for half in 0u64..(1 << (n - 1)) {
        let config = half << 1;
        let energy: f64 = ends
            .iter()
            .zip(j)
            .map(|(&(x, y), &jv)| if (config >> x & 1) == (config >> y & 1) { jv } else { -jv })
            .sum();
        let w = energy.exp();
        let down: u64 = (0..n).filter(|i| config >> i & 1 == 1).map(|i| a[i]).sum();
        c[down as usize] += w;
        c[(d - down) as usize] += w;
    }
    Ok(FieldPolynomial {
        coefficients: c,
        denominator: q,
    })
}

/// Roots of a field polynomial with derived `α` values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroSpectrum {
    pub roots: Vec<Complex64>,
    /// `q |arg ζ| / 2` for roots in the closed upper half plane, ascending.
    pub alphas: Vec<f64>,
}

impl ZeroSpectrum {
    pub fn alpha1(&self) -> f64 {
        self.alphas[0]
    }

    pub fn max_circle_deviation(&self) -> f64 {
        self.roots
            .iter()
            .map(|z| (z.norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// `α` for every root, conjugates included, ascending.
    pub fn all_alphas(&self, q: u64) -> Vec<f64> {
        let mut out: Vec<f64> = self.roots.iter().map(|z| q as f64 * z.arg().abs() / 2.0).collect();
        out.sort_by(f64::total_cmp);
        out
    }
}

#[derive(Clone, Copy)]
struct Cdd {
    re: TwoFloat,
    im: TwoFloat,
}

impl Cdd {
    fn zero() -> Self {
        Cdd {
            re: TwoFloat::from(0.0),
            im: TwoFloat::from(0.0),
        }
    }

    fn from_c64(z: Complex64) -> Self {
        Cdd {
            re: TwoFloat::from(z.re),
            im: TwoFloat::from(z.im),
        }
    }

    fn mul(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }

    fn add(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }

    fn add_real(self, c: TwoFloat) -> Cdd {
        Cdd {
            re: self.re + c,
            im: self.im,
        }
    }

    fn to_c64(self) -> Complex64 {
        Complex64::new(f64::from(self.re), f64::from(self.im))
    }
}

/// `p(z)` and `p'(z)` in double-double arithmetic; coefficients low to high.
fn horner(coeffs: &[TwoFloat], z: Complex64) -> (Complex64, Complex64) {
    let zz = Cdd::from_c64(z);
    let mut p = Cdd::zero();
    let mut dp = Cdd::zero();
    for &c in coeffs.iter().rev() {
        dp = dp.mul(zz).add(p);
        p = p.mul(zz).add_real(c);
    }
    (p.to_c64(), dp.to_c64())
}

/// `sum |c_k| |z|^k`, the natural scale of a residual.
fn magnitude(coeffs: &[TwoFloat], z: Complex64) -> f64 {
    let r = z.norm();
    coeffs
        .iter()
        .rev()
        .fold(0.0, |acc, c| acc * r + f64::from(*c).abs())
}

fn derivative(coeffs: &[TwoFloat]) -> Vec<TwoFloat> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| c * TwoFloat::from(k as f64))
        .collect()
}

const ABERTH_ITERATIONS: usize = 2000;
const CLUSTER_RADIUS: f64 = 1e-2;
const RESIDUAL_TOLERANCE: f64 = 1e-9;

/// All roots by Aberth-Ehrlich iteration from perturbed unit-circle guesses,
/// with double-double evaluation. Near-coincident groups are tested for a
/// genuine multiple root and collapsed onto it.
pub fn polynomial_roots(coefficients: &[f64]) -> Result<Vec<Complex64>> {
    let d = coefficients.len().saturating_sub(1);
    if d == 0 {
        return Err(invalid("polynomial has degree 0"));
    }
    let top = coefficients.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if coefficients[d] == 0.0 || !top.is_finite() {
        return Err(invalid("leading coefficient must be finite and nonzero"));
    }
    // power-of-two scaling keeps the coefficients exact
    let scale = 2f64.powi(-(top.log2().floor() as i32));
    let coeffs: Vec<TwoFloat> = coefficients.iter().map(|c| TwoFloat::from(c * scale)).collect();
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| {
            let angle = 2.0 * PI * (k as f64 + 0.25) / d as f64 + 0.1;
            let radius = 1.0 + 0.03 * ((k % 3) as f64 - 1.0);
            Complex64::from_polar(radius, angle)
        })
        .collect();
    let mut quiet = 0;
    for _ in 0..ABERTH_ITERATIONS {
        let mut largest = 0.0f64;
        for i in 0..d {
            let (p, dp) = horner(&coeffs, z[i]);
            if p == Complex64::zero() {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..d)
                .filter(|&j| j != i)
                .map(|j| {
                    let diff = z[i] - z[j];
                    if diff == Complex64::zero() {
                        Complex64::zero()
                    } else {
                        diff.inv()
                    }
                })
                .sum();
            let step = ratio / (Complex64::one() - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                largest = largest.max(step.norm() / z[i].norm().max(1.0));
            }
        }
        if largest <= 1e-15 {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    collapse_clusters(&coeffs, &mut z);
    let worst = z
        .iter()
        .map(|&r| horner(&coeffs, r).0.norm() / magnitude(&coeffs, r))
        .fold(0.0, f64::max);
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // also rejects NaN
    if !(worst <= RESIDUAL_TOLERANCE) {
        return Err(Error::NoConvergence {
            iterations: ABERTH_ITERATIONS,
            residual: worst,
        });
    }
    Ok(z)
}

fn collapse_clusters(coeffs: &[TwoFloat], z: &mut [Complex64]) {
    let d = z.len();
    let mut group: Vec<usize> = (0..d).collect();
    fn find(g: &mut [usize], mut x: usize) -> usize {
        while g[x] != x {
            g[x] = g[g[x]];
            x = g[x];
        }
        x
    }
    for i in 0..d {
        for j in i + 1..d {
            if (z[i] - z[j]).norm() < CLUSTER_RADIUS {
                let (a, b) = (find(&mut group, i), find(&mut group, j));
                group[a] = b;
            }
        }
    }
    let mut clusters: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..d {
        let r = find(&mut group, i);
        clusters.entry(r).or_default().push(i);
    }
    for members in clusters.values().filter(|m| m.len() > 1) {
        let m = members.len();
        let centroid = members.iter().map(|&i| z[i]).sum::<Complex64>() / m as f64;
        let mut derivs = vec![coeffs.to_vec()];
        for _ in 1..m {
            let next = derivative(derivs.last().unwrap());
            derivs.push(next);
        }
        // Newton on the (m-1)-th derivative, whose simple root is the
        // multiple root when one exists
        let target = &derivs[m - 1];
        let mut c = centroid;
        for _ in 0..50 {
            let (p, dp) = horner(target, c);
            if dp == Complex64::zero() {
                break;
            }
            let step = p / dp;
            c -= step;
            if step.norm() <= 1e-17 {
                break;
            }
        }
        let genuine = (0..m).all(|j| {
            let (p, _) = horner(&derivs[j], c);
            p.norm() <= 1e-7f64.powi((m - j) as i32) * magnitude(&derivs[j], c)
        });
        if genuine && c.is_finite() {
            for &i in members {
                z[i] = c;
            }
        }
    }
}

fn spectrum_from_roots(roots: Vec<Complex64>, q: u64) -> ZeroSpectrum {
    let mut alphas: Vec<f64> = roots
        .iter()
        .filter(|z| z.im >= -1e-9)
        .map(|z| q as f64 * z.arg().abs() / 2.0)
        .collect();
    alphas.sort_by(f64::total_cmp);
    ZeroSpectrum { roots, alphas }
}

pub fn roots(p: &FieldPolynomial) -> Result<ZeroSpectrum> {
    Ok(spectrum_from_roots(polynomial_roots(&p.coefficients)?, p.denominator))
}

/// First positive zero of `α ↦ sum_j c_j cos(α (D - 2j) / q)`: scan with step
/// `π / (64 Λmax)`, then bisection. A zero touched without a sign change is
/// found as a sign change of the slope with a vanishing value.
pub fn alpha1_of(p: &FieldPolynomial) -> Result<f64> {
    let lmax = p.max_field();
    let step = PI / (64.0 * lmax);
    let bound = p.denominator as f64 * PI / 2.0;
    let scale: f64 = p.coefficients.iter().sum();
    let steps = (bound / step).ceil() as usize + 2;
    let mut prev_a = 0.0;
    let mut prev_g = p.characteristic(0.0);
    let mut prev_s = p.characteristic_slope(0.0);
    for i in 1..=steps {
        let a = i as f64 * step;
        let g = p.characteristic(a);
        let s = p.characteristic_slope(a);
        if g <= 0.0 {
            return Ok(refine_multiple(p, bisect(|x| p.characteristic(x), prev_a, a)));
        }
        if prev_s < 0.0 && s >= 0.0 {
            let m = bisect(|x| -p.characteristic_slope(x), prev_a, a);
            if p.characteristic(m).abs() <= 1e-12 * scale {
                return Ok(refine_multiple(p, m));
            }
        }
        prev_a = a;
        prev_g = g;
        prev_s = s;
    }
    let _ = prev_g;
    Err(Error::NoFirstZero { bound })
}

/// At a zero of multiplicity `m` the value is too flat for bisection to
/// pin down; the `(m-1)`-th derivative has a simple zero there instead.
fn refine_multiple(p: &FieldPolynomial, a0: f64) -> f64 {
    let mut a = a0;
    for _ in 0..6 {
        let next = refine_once(p, a);
        if next == a {
            break;
        }
        a = next;
    }
    let window = 4.0 * PI / (64.0 * p.max_field());
    let scale: f64 = p.coefficients.iter().sum();
    if (a - a0).abs() <= window && p.characteristic(a).abs() <= 1e-12 * scale {
        a
    } else {
        a0
    }
}

fn refine_once(p: &FieldPolynomial, a0: f64) -> f64 {
    let mut r = 1;
    while r < 24 {
        let (v, scale) = p.characteristic_derivative(a0, r);
        if v.abs() > 1e-6 * scale {
            break;
        }
        r += 1;
    }
    if r == 1 {
        return a0;
    }
    let mut a = a0;
    for _ in 0..50 {
        let (v, _) = p.characteristic_derivative(a, r - 1);
        let (dv, _) = p.characteristic_derivative(a, r);
        if dv == 0.0 {
            break;
        }
        let step = v / dv;
        a -= step;
        if step.abs() <= 1e-15 * a.abs().max(1.0) {
            break;
        }
    }
    a
}

/// Root of `f` in `[lo, hi]` with `f(lo) > 0 >= f(hi)`, to the last bit.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn alpha1_scan(base: &BaseGraph, j: &[f64], lambda: &WeightedField) -> Result<f64> {
    alpha1_of(&partition_polynomial(base, j, lambda)?)
}

/// `½ arccos(-e^{-2J})`, the first zero for two coupled spins in a unit field.
pub fn two_spin_alpha1(j: f64) -> f64 {
    0.5 * (-(-2.0 * j).exp()).acos()
}

/// One instance of the coupling-monotonicity harness.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FieldInstance {
    pub vertices: usize,
    pub edges: Vec<(u32, u32)>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// `p/q` per vertex
    pub lambda: Vec<String>,
}

impl FieldInstance {
    pub fn graph(&self) -> BaseGraph {
        BaseGraph::from_pairs(self.vertices as u32, &self.edges).expect("stored instance is valid")
    }

    pub fn field(&self) -> WeightedField {
        WeightedField::new(self.lambda.iter().enumerate().map(|(i, s)| {
            (
                VertexId(i as u32),
                crate::rational::parse_rational(s).expect("stored weight parses"),
            )
        }))
        .expect("stored weights are nonnegative")
    }
}

/// Connected graph on `2..=max_vertices` spins, `J <= J̃` componentwise in
/// `[0, 3]`, and either `λ ≡ 1` or small rationals with denominator 1 or 2.
pub fn random_field_instance(rng: &mut CorpusRng, max_vertices: usize) -> FieldInstance {
    let n = rng.random_range(2..=max_vertices);
    let extra = rng.random_range(0..=n);
    let g = random_graph(rng, n, n - 1 + extra, true);
    let lower: Vec<f64> = (0..g.num_edges()).map(|_| rng.random_range(0.0..=MAX_COUPLING)).collect();
    let upper: Vec<f64> = lower
        .iter()
        .map(|&x| {
            if rng.random_bool(0.5) {
                x + rng.random_range(0.0..=(MAX_COUPLING - x))
            } else {
                x
            }
        })
        .collect();
    let lambda: Vec<Rational> = if rng.random_bool(0.5) {
        vec![Rational::one(); n]
    } else {
        loop {
            let w: Vec<Rational> = (0..n)
                .map(|_| rat(rng.random_range(0..=4), rng.random_range(1..=2)))
                .collect();
            if w.iter().any(|x| !x.is_zero()) {
                break w;
            }
        }
    };
    FieldInstance {
        vertices: n,
        edges: g.edges().iter().map(|e| (e.u.0, e.v.0)).collect(),
        lower,
        upper,
        lambda: lambda.iter().map(format_rational).collect(),
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct MonotonicityViolation {
    pub index: usize,
    pub alpha_lower: f64,
    pub alpha_upper: f64,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct AlphaReport {
    pub instances: usize,
    pub violations: Vec<MonotonicityViolation>,
    /// largest `|scan - roots|` for the first zero over both coupling sets
    pub max_disagreement: f64,
    /// largest `||z| - 1|` over all roots
    pub max_circle_deviation: f64,
    pub errors: Vec<String>,
}

/// `α₁(J) >= α₁(J̃) - tolerance` on `count` random ordered pairs.
pub fn alpha1_monotonicity_harness(seed: u64, count: usize, max_vertices: usize, tolerance: f64) -> AlphaReport {
    let mut rng = corpus_rng(seed);
    let mut report = AlphaReport::default();
    for index in 0..count {
        let inst = random_field_instance(&mut rng, max_vertices);
        let g = inst.graph();
        let field = inst.field();
        let run = || -> Result<(f64, f64, f64, f64)> {
            let pl = partition_polynomial(&g, &inst.lower, &field)?;
            let pu = partition_polynomial(&g, &inst.upper, &field)?;
            let (sl, su) = (roots(&pl)?, roots(&pu)?);
            let (al, au) = (alpha1_of(&pl)?, alpha1_of(&pu)?);
            let dis = (al - sl.alpha1()).abs().max((au - su.alpha1()).abs());
            let dev = sl.max_circle_deviation().max(su.max_circle_deviation());
            Ok((al, au, dis, dev))
        };
        report.instances += 1;
        match run() {
            Ok((al, au, dis, dev)) => {
                report.max_disagreement = report.max_disagreement.max(dis);
                report.max_circle_deviation = report.max_circle_deviation.max(dev);
                if al < au - tolerance {
                    report.violations.push(MonotonicityViolation {
                        index,
                        alpha_lower: al,
                        alpha_upper: au,
                    });
                }
            }
            Err(e) => report.errors.push(format!("instance {index}: {e}")),
        }
    }
    report
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExplorerFinding {
    pub instance: FieldInstance,
    /// edge whose coupling was raised, and by how much
    pub edge: usize,
    pub delta: f64,
    /// 1-based index of the zero that moved outward
    pub zero_index: usize,
    pub before: Vec<f64>,
    pub after: Vec<f64>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ExplorerReport {
    pub instances: usize,
    pub findings: Vec<ExplorerFinding>,
    pub errors: Vec<String>,
}

/// Searches for a zero beyond the first whose modulus grows when a single
/// coupling grows. Findings carry the full instance for replay.
pub fn principal_zero_explorer(seed: u64, count: usize, max_vertices: usize) -> ExplorerReport {
    let mut rng = corpus_rng(seed);
    let mut report = ExplorerReport::default();
    for _ in 0..count {
        let mut inst = random_field_instance(&mut rng, max_vertices);
        let edge = rng.random_range(0..inst.edges.len());
        let delta = rng.random_range(0.01..=0.2f64).min(MAX_COUPLING - inst.lower[edge]);
        inst.upper = inst.lower.clone();
        inst.upper[edge] += delta;
        report.instances += 1;
        let g = inst.graph();
        let field = inst.field();
        let run = || -> Result<(Vec<f64>, Vec<f64>)> {
            let a = roots(&partition_polynomial(&g, &inst.lower, &field)?)?.alphas;
            let b = roots(&partition_polynomial(&g, &inst.upper, &field)?)?.alphas;
            Ok((a, b))
        };
        match run() {
            Ok((before, after)) => {
                if let Some(j) = (1..before.len().min(after.len())).find(|&j| after[j] > before[j] + 1e-7) {
                    report.findings.push(ExplorerFinding {
                        instance: inst.clone(),
                        edge,
                        delta,
                        zero_index: j + 1,
                        before,
                        after,
                    });
                }
            }
            Err(e) => report.errors.push(e.to_string()),
        }
    }
    report
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RadiusDiagnostic {
    /// `(k, |u_k(X) / k!|^{1/k})` for even `k`
    pub roots: Vec<(usize, f64)>,
    pub inverse_alpha1: f64,
}

/// Compares the growth of the field cumulants with `1/α₁`. Nothing is asserted.
pub fn cumulant_radius_diagnostic(
    base: &BaseGraph,
    t: &Couplings,
    lambda: &WeightedField,
    max_order: usize,
) -> Result<RadiusDiagnostic> {
    if max_order % 2 == 1 || !(2..=12).contains(&max_order) {
        return Err(invalid("order must be even and between 2 and 12"));
    }
    let kappa = cumulants(base, t, lambda, max_order)?;
    let roots = (2..=max_order)
        .step_by(2)
        .map(|k| {
            let v = &kappa[k - 1] / Rational::from_integer(factorial(k as u32));
            (k, to_f64(&v.abs()).powf(1.0 / k as f64))
        })
        .collect();
    let j: Vec<f64> = t.to_f64().iter().map(|x| x.atanh()).collect();
    let alpha = alpha1_scan(base, &j, lambda)?;
    Ok(RadiusDiagnostic {
        roots,
        inverse_alpha1: 1.0 / alpha,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn single() -> BaseGraph {
        BaseGraph::new([VertexId(0)], []).unwrap()
    }

    fn pair() -> BaseGraph {
        BaseGraph::from_pairs(2, &[(0, 1)]).unwrap()
    }

    #[test]
    fn polynomial_examples() {
        let g = single();
        let p = partition_polynomial(&g, &[], &WeightedField::uniform(&g, int(1))).unwrap();
        assert_eq!(p.coefficients, vec![1.0, 1.0]);

        let g = pair();
        let j = 0.7f64;
        let p = partition_polynomial(&g, &[j], &WeightedField::uniform(&g, int(1))).unwrap();
        assert_eq!(p.coefficients, vec![j.exp(), 2.0 * (-j).exp(), j.exp()]);

        let g = BaseGraph::new((0..4).map(VertexId), []).unwrap();
        let p = partition_polynomial(&g, &[], &WeightedField::uniform(&g, int(1))).unwrap();
        assert_eq!(p.coefficients, vec![1.0, 4.0, 6.0, 4.0, 1.0]);
    }

    #[test]
    fn rejects_bad_input() {
        let g = pair();
        let f = WeightedField::uniform(&g, int(1));
        assert!(partition_polynomial(&g, &[3.5], &f).is_err());
        assert!(partition_polynomial(&g, &[-0.1], &f).is_err());
        assert!(WeightedField::new([(VertexId(0), int(-1))]).is_err());
        assert!(rational_weight(std::f64::consts::PI).is_err());
        assert_eq!(rational_weight(0.5).unwrap(), rat(1, 2));
    }

    #[test]
    fn single_spin_zero() {
        let g = single();
        let p = partition_polynomial(&g, &[], &WeightedField::uniform(&g, int(1))).unwrap();
        let s = roots(&p).unwrap();
        assert!((s.roots[0] + 1.0).norm() < 1e-14);
        assert!((s.alpha1() - PI / 2.0).abs() < 1e-12);
        assert!((alpha1_of(&p).unwrap() - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn multiple_root_at_minus_one() {
        for n in 2..=8u32 {
            let g = BaseGraph::new((0..n).map(VertexId), []).unwrap();
            let p = partition_polynomial(&g, &[], &WeightedField::uniform(&g, int(1))).unwrap();
            let s = roots(&p).unwrap();
            for z in &s.roots {
                assert!((z + 1.0).norm() < 1e-9, "n = {n}: {z}");
            }
            assert!((alpha1_of(&p).unwrap() - PI / 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn two_spin_closed_form() {
        let g = pair();
        for &j in &[0.05, 0.5 * 2f64.ln(), 1.0, 2.9] {
            let f = WeightedField::uniform(&g, int(1));
            let a = alpha1_scan(&g, &[j], &f).unwrap();
            assert!((a - two_spin_alpha1(j)).abs() < 1e-12, "J = {j}");
            let s = roots(&partition_polynomial(&g, &[j], &f).unwrap()).unwrap();
            assert!((s.alpha1() - two_spin_alpha1(j)).abs() < 1e-12);
        }
        assert!((two_spin_alpha1(0.5 * 2f64.ln()) - PI / 3.0).abs() < 1e-15);
    }

    #[test]
    fn rescaled_field() {
        let g = BaseGraph::from_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        let half = WeightedField::new([(VertexId(0), rat(1, 2)), (VertexId(1), int(1)), (VertexId(2), rat(3, 2))]).unwrap();
        let doubled = half.scaled(&int(2));
        let j = [0.4, 1.1];
        let a = alpha1_scan(&g, &j, &half).unwrap();
        let b = alpha1_scan(&g, &j, &doubled).unwrap();
        assert!((a - 2.0 * b).abs() < 1e-10);
        let p = partition_polynomial(&g, &j, &half).unwrap();
        assert_eq!(p.denominator, 2);
        assert!((roots(&p).unwrap().alpha1() - a).abs() < 1e-9);
    }

    #[test]
    fn free_spin_radius() {
        let g = single();
        let t = Couplings::new(&g, vec![]).unwrap();
        let d = cumulant_radius_diagnostic(&g, &t, &WeightedField::uniform(&g, int(1)), 4).unwrap();
        assert!((d.roots[0].1 - 0.5f64.sqrt()).abs() < 1e-12);
        assert!((d.roots[1].1 - (2.0f64 / 24.0).powf(0.25)).abs() < 1e-12);
        assert!((d.inverse_alpha1 - 2.0 / PI).abs() < 1e-12);
    }
}
