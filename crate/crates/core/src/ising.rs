//! Exact Ising correlations, Ursell functions and cumulants on small graphs.
//!
//! Couplings are carried as `t_e = tanh J_e`. Correlations come from the
//! even-subgraph expansion
//! `<σ_A> = sum_{S ⊆ E, ∂S = A} prod t_e / sum_{∂S = ∅} prod t_e`,
//! tabulated for every `A` at once by a dynamic program over edges, so every
//! quantity below is an exact rational when `t` is rational.

use num_traits::{FromPrimitive, Num, One, Signed, Zero};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use serde::Serialize;

use crate::corpus::{corpus_rng, random_coupling_chain, random_graph, CorpusRng};
use crate::error::{check_cap, invalid, Error, Result};
use crate::graph::{BaseGraph, Edge, EdgeId, VertexId, VertexIndex, VertexSet};
use crate::lee_yang::WeightedField;
use crate::partition::SetPartitions;
use crate::rational::{binomial, partition_weight, signed_by_order, Rational};

/// Largest vertex count for tabulated or enumerated correlations.
pub const MAX_TABLE_VERTICES: usize = 16;
/// Largest edge count accepted by the even-subgraph table.
pub const MAX_TABLE_EDGES: usize = 64;

/// Per-edge `t_e = tanh J_e` in `[0, 1)`, stored in edge order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Couplings {
    t: Vec<Rational>,
}

impl Couplings {
    pub fn new(base: &BaseGraph, t: Vec<Rational>) -> Result<Self> {
        if t.len() != base.num_edges() {
            return Err(invalid(format!(
                "{} couplings for {} edges",
                t.len(),
                base.num_edges()
            )));
        }
        for (e, x) in base.edges().iter().zip(&t) {
            if *x < Rational::zero() || *x >= Rational::one() {
                return Err(invalid(format!("t on edge {} is {x}, outside [0,1)", e.id)));
            }
        }
        Ok(Couplings { t })
    }

    pub fn uniform(base: &BaseGraph, t: Rational) -> Result<Self> {
        Couplings::new(base, vec![t; base.num_edges()])
    }

    /// Unlisted edges get `t = 0`.
    pub fn from_labels(base: &BaseGraph, entries: &[(EdgeId, Rational)]) -> Result<Self> {
        let mut t = vec![Rational::zero(); base.num_edges()];
        for (id, x) in entries {
            let i = base.edge_position(*id).ok_or(Error::UnknownEdge(*id))?;
            t[i] = x.clone();
        }
        Couplings::new(base, t)
    }

    pub fn values(&self) -> &[Rational] {
        &self.t
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.t.iter().map(crate::rational::to_f64).collect()
    }
}

/// `sum_{∂S = A} prod_{e ∈ S} t_e` for every vertex mask `A`.
#[derive(Clone, Debug)]
pub struct CorrelationTable<T> {
    index: VertexIndex,
    sums: Vec<T>,
}

impl<T: Clone + Num> CorrelationTable<T> {
    fn build(base: &BaseGraph, t: &[T]) -> Result<Self> {
        check_cap("vertex count", base.num_vertices(), MAX_TABLE_VERTICES)?;
        check_cap("edge count", base.num_edges(), MAX_TABLE_EDGES)?;
        let index = base.index().clone();
        let mut sums = vec![T::zero(); 1 << index.len()];
        sums[0] = T::one();
        for (e, te) in base.edges().iter().zip(t) {
            if te.is_zero() {
                continue;
            }
            let em = index.edge_mask(e) as usize;
            let old = sums.clone();
            for (mask, slot) in sums.iter_mut().enumerate() {
                let from = &old[mask ^ em];
                if !from.is_zero() {
                    *slot = slot.clone() + te.clone() * from.clone();
                }
            }
        }
        Ok(CorrelationTable { index, sums })
    }

    /// `<σ_A>` for a vertex bitmask.
    pub(crate) fn at(&self, mask: u64) -> T {
        self.sums[mask as usize].clone() / self.sums[0].clone()
    }

    pub fn correlation(&self, a: &VertexSet) -> Result<T> {
        Ok(self.at(self.index.mask(a)?))
    }

    /// Bitmask of a spin product; repeated vertices cancel since `σ² = 1`.
    pub fn spin_mask(&self, spins: &[VertexId]) -> Result<u64> {
        self.index.mask(spins)
    }

    fn spin_bits(&self, spins: &[VertexId]) -> Result<Vec<u64>> {
        spins.iter().map(|&v| self.index.bit(v)).collect()
    }
}

impl CorrelationTable<Rational> {
    pub fn exact(base: &BaseGraph, t: &Couplings) -> Result<Self> {
        Self::build(base, t.values())
    }
}

impl CorrelationTable<f64> {
    /// Float table from couplings `J_e` (not `t_e`).
    pub fn from_j(base: &BaseGraph, j: &[f64]) -> Result<Self> {
        let t: Vec<f64> = j.iter().map(|x| x.tanh()).collect();
        Self::build(base, &t)
    }
}

/// `<σ_A>` by the even-subgraph expansion.
pub fn correlation(base: &BaseGraph, t: &Couplings, a: &VertexSet) -> Result<Rational> {
    CorrelationTable::exact(base, t)?.correlation(a)
}

/// `<σ_A>` by summing over all `2^|V|` spin configurations with weights
/// `prod_{uv} (1 + t_uv σ_u σ_v)`.
pub fn correlation_oracle(base: &BaseGraph, t: &Couplings, a: &VertexSet) -> Result<Rational> {
    let n = base.num_vertices();
    check_cap("vertex count", n, MAX_TABLE_VERTICES)?;
    let index = base.index();
    let amask = index.mask(a)?;
    let ends: Vec<(usize, usize)> = base.edges().iter().map(|e| edge_positions(index, e)).collect();
    let mut z = Rational::zero();
    let mut num = Rational::zero();
    for config in 0u64..(1 << n) {
        // bit set = spin down
        let mut w = Rational::one();
        for ((a, b), te) in ends.iter().zip(t.values()) {
            let aligned = (config >> a & 1) == (config >> b & 1);
            w *= if aligned {
                Rational::one() + te
            } else {
                Rational::one() - te
            };
        }
        if (config & amask).count_ones() % 2 == 1 {
            num -= &w;
        } else {
            num += &w;
        }
        z += w;
    }
    Ok(num / z)
}

fn edge_positions(index: &VertexIndex, e: &Edge) -> (usize, usize) {
    (index.position(e.u).unwrap(), index.position(e.v).unwrap())
}

/// `u_k` with its order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UrsellValue {
    pub value: Rational,
    pub order: usize,
}

fn mobius<T: FromPrimitive>(blocks: usize) -> T {
    T::from_i128(partition_weight(blocks)).expect("partition weight fits")
}

fn block_mask(bits: &[u64], block: u64) -> u64 {
    (0..bits.len())
        .filter(|i| block >> i & 1 == 1)
        .fold(0, |acc, i| acc ^ bits[i])
}

/// `sum_P (-1)^{|P|-1} (|P|-1)! prod_{B ∈ P} <σ_B>` over partitions of the
/// spin positions.
pub fn ursell_in<T: Clone + Num + FromPrimitive>(
    table: &CorrelationTable<T>,
    spins: &[VertexId],
) -> Result<T> {
    if spins.is_empty() {
        return Err(invalid("Ursell function of no spins"));
    }
    let bits = table.spin_bits(spins)?;
    let mut total = T::zero();
    'partitions: for p in SetPartitions::new(spins.len()) {
        let mut prod = T::one();
        for &b in &p {
            if b.count_ones() % 2 == 1 {
                continue 'partitions;
            }
            prod = prod * table.at(block_mask(&bits, b));
        }
        total = total + mobius::<T>(p.len()) * prod;
    }
    Ok(total)
}

/// `∂u/∂J_e0` from `∂<σ_B>/∂J_uv = <σ_B σ_u σ_v> - <σ_B><σ_u σ_v>`.
pub fn ursell_derivative_in<T: Clone + Num + FromPrimitive>(
    table: &CorrelationTable<T>,
    base: &BaseGraph,
    spins: &[VertexId],
    e0: EdgeId,
) -> Result<T> {
    if spins.is_empty() || spins.len() % 2 == 1 {
        return Err(invalid(format!(
            "derivative needs an even nonempty spin list, got {}",
            spins.len()
        )));
    }
    let e = base.edge(e0).ok_or(Error::UnknownEdge(e0))?;
    let uv = table.index.edge_mask(e);
    let bits = table.spin_bits(spins)?;
    let corr_uv = table.at(uv);
    let mut total = T::zero();
    'partitions: for p in SetPartitions::new(spins.len()) {
        let masks: Vec<u64> = p.iter().map(|&b| block_mask(&bits, b)).collect();
        if p.iter().any(|b| b.count_ones() % 2 == 1) {
            continue 'partitions;
        }
        let values: Vec<T> = masks.iter().map(|&m| table.at(m)).collect();
        let mut sum = T::zero();
        for (i, &m) in masks.iter().enumerate() {
            let mut term = table.at(m ^ uv) - values[i].clone() * corr_uv.clone();
            for (j, v) in values.iter().enumerate() {
                if j != i {
                    term = term * v.clone();
                }
            }
            sum = sum + term;
        }
        total = total + mobius::<T>(p.len()) * sum;
    }
    Ok(total)
}

pub fn ursell(base: &BaseGraph, t: &Couplings, spins: &[VertexId]) -> Result<UrsellValue> {
    let table = CorrelationTable::exact(base, t)?;
    Ok(UrsellValue {
        value: ursell_in(&table, spins)?,
        order: spins.len(),
    })
}

pub fn ursell_derivative(
    base: &BaseGraph,
    t: &Couplings,
    spins: &[VertexId],
    e0: EdgeId,
) -> Result<Rational> {
    let table = CorrelationTable::exact(base, t)?;
    ursell_derivative_in(&table, base, spins, e0)
}

/// Float Ursell function at couplings `J`.
pub fn ursell_f64(base: &BaseGraph, j: &[f64], spins: &[VertexId]) -> Result<f64> {
    ursell_in(&CorrelationTable::from_j(base, j)?, spins)
}

pub fn ursell_derivative_f64(
    base: &BaseGraph,
    j: &[f64],
    spins: &[VertexId],
    e0: EdgeId,
) -> Result<f64> {
    ursell_derivative_in(&CorrelationTable::from_j(base, j)?, base, spins, e0)
}

/// Central difference of `ursell_f64` in `J_e0` with step `h`.
pub fn ursell_central_difference(
    base: &BaseGraph,
    j: &[f64],
    spins: &[VertexId],
    e0: EdgeId,
    h: f64,
) -> Result<f64> {
    let pos = base.edge_position(e0).ok_or(Error::UnknownEdge(e0))?;
    let mut plus = j.to_vec();
    let mut minus = j.to_vec();
    plus[pos] += h;
    minus[pos] -= h;
    Ok((ursell_f64(base, &plus, spins)? - ursell_f64(base, &minus, spins)?) / (2.0 * h))
}

/// Exact moments `<X^j>` for `j = 0..=r`, `X = sum_u λ_u σ_u`.
pub fn moments(base: &BaseGraph, t: &Couplings, lambda: &WeightedField, r: usize) -> Result<Vec<Rational>> {
    let n = base.num_vertices();
    check_cap("vertex count", n, MAX_TABLE_VERTICES)?;
    let index = base.index();
    let lam: Vec<Rational> = index.ids().iter().map(|&v| lambda.weight(v)).collect();
    let ends: Vec<(usize, usize)> = base.edges().iter().map(|e| edge_positions(index, e)).collect();
    let mut z = Rational::zero();
    let mut acc = vec![Rational::zero(); r + 1];
    for config in 0u64..(1 << n) {
        let mut w = Rational::one();
        for ((a, b), te) in ends.iter().zip(t.values()) {
            let aligned = (config >> a & 1) == (config >> b & 1);
            w *= if aligned {
                Rational::one() + te
            } else {
                Rational::one() - te
            };
        }
        let x: Rational = lam
            .iter()
            .enumerate()
            .map(|(i, l)| if config >> i & 1 == 1 { -l.clone() } else { l.clone() })
            .sum();
        let mut power = Rational::one();
        for slot in acc.iter_mut() {
            *slot += &w * &power;
            power *= &x;
        }
        z += w;
    }
    Ok(acc.into_iter().map(|m| m / &z).collect())
}

/// `u_r(X)` from exact moments by
/// `κ_n = μ_n - sum_{m=1}^{n-1} C(n-1, m-1) κ_m μ_{n-m}`.
pub fn cumulant(base: &BaseGraph, t: &Couplings, lambda: &WeightedField, r: usize) -> Result<Rational> {
    Ok(cumulants(base, t, lambda, r)?.pop().unwrap())
}

/// `[κ_1, .., κ_r]`.
pub fn cumulants(base: &BaseGraph, t: &Couplings, lambda: &WeightedField, r: usize) -> Result<Vec<Rational>> {
    if r < 1 {
        return Err(invalid("cumulant order must be at least 1"));
    }
    let mu = moments(base, t, lambda, r)?;
    let mut kappa: Vec<Rational> = vec![Rational::zero(); r + 1];
    for n in 1..=r {
        let mut k = mu[n].clone();
        for m in 1..n {
            let c = Rational::from_integer(binomial((n - 1) as u32, (m - 1) as u32).into());
            k -= c * &kappa[m] * &mu[n - m];
        }
        kappa[n] = k;
    }
    kappa.remove(0);
    Ok(kappa)
}

/// `sum_{j_1..j_r} λ_{j_1}..λ_{j_r} u_r(σ_{j_1}, .., σ_{j_r})`.
pub fn cumulant_from_ursell(
    base: &BaseGraph,
    t: &Couplings,
    lambda: &WeightedField,
    r: usize,
) -> Result<Rational> {
    if r < 1 {
        return Err(invalid("cumulant order must be at least 1"));
    }
    let table = CorrelationTable::exact(base, t)?;
    let support: Vec<(VertexId, Rational)> = base
        .vertices()
        .iter()
        .map(|&v| (v, lambda.weight(v)))
        .filter(|(_, l)| !l.is_zero())
        .collect();
    if support.is_empty() {
        return Ok(Rational::zero());
    }
    check_cap("tuple count", support.len().pow(r as u32), 1 << 20)?;
    let mut total = Rational::zero();
    let mut idx = vec![0usize; r];
    loop {
        let spins: Vec<VertexId> = idx.iter().map(|&i| support[i].0).collect();
        let weight: Rational = idx.iter().map(|&i| support[i].1.clone()).product();
        total += weight * ursell_in(&table, &spins)?;
        let mut p = 0;
        loop {
            if p == r {
                return Ok(total);
            }
            idx[p] += 1;
            if idx[p] < support.len() {
                break;
            }
            idx[p] = 0;
            p += 1;
        }
    }
}

/// Both sides of the reduction formula for a spin list whose first two
/// entries coincide:
/// `u_2k = - sum_{A ∋ 1, 2 ∉ A} u_|A|(σ_A) u_{2k-|A|}(σ_{A^c})`.
pub fn reduction_sides(
    base: &BaseGraph,
    t: &Couplings,
    spins: &[VertexId],
) -> Result<(Rational, Rational)> {
    if spins.len() % 2 == 1 {
        return Err(Error::OddSourceSet(spins.len()));
    }
    if spins.len() < 4 {
        return Err(invalid(
            "the reduction formula does not hold for k = 1 (u_2(σ_j, σ_j) = 1)",
        ));
    }
    if spins[0] != spins[1] {
        return Err(invalid("the first two spins must coincide"));
    }
    let table = CorrelationTable::exact(base, t)?;
    let lhs = ursell_in(&table, spins)?;
    let n = spins.len();
    let mut rhs = Rational::zero();
    // positions 2.. are free; position 0 is in A, position 1 is not
    for free in 0u64..(1 << (n - 2)) {
        let a_mask = 1 | (free << 2);
        let a: Vec<VertexId> = (0..n).filter(|i| a_mask >> i & 1 == 1).map(|i| spins[i]).collect();
        let c: Vec<VertexId> = (0..n).filter(|i| a_mask >> i & 1 == 0).map(|i| spins[i]).collect();
        if a.len() % 2 == 1 {
            continue;
        }
        rhs -= ursell_in(&table, &a)? * ursell_in(&table, &c)?;
    }
    Ok((lhs, rhs))
}

pub fn reduction_check(base: &BaseGraph, t: &Couplings, spins: &[VertexId]) -> Result<bool> {
    let (lhs, rhs) = reduction_sides(base, t, spins)?;
    Ok(lhs == rhs)
}

/// `Ĝ` with the marked edge replaced by a two-step path through a new vertex.
#[derive(Clone, Debug)]
pub struct Gadget {
    pub graph: BaseGraph,
    pub middle: VertexId,
    pub halves: (EdgeId, EdgeId),
    /// `β̂ = ½ arccosh(e^{2β})`
    pub beta_hat: f64,
}

impl Gadget {
    /// Couplings of `Ĝ` given those of `G` in `G`'s edge order.
    pub fn couplings(&self, base: &BaseGraph, j: &[f64]) -> Vec<f64> {
        self.graph
            .edges()
            .iter()
            .map(|e| {
                if e.id == self.halves.0 || e.id == self.halves.1 {
                    self.beta_hat
                } else {
                    j[base.edge_position(e.id).unwrap()]
                }
            })
            .collect()
    }
}

pub fn gadget_split(base: &BaseGraph, e0: EdgeId, beta: f64) -> Result<Gadget> {
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // also rejects NaN
    if !(beta >= 0.0) {
        return Err(invalid(format!("coupling {beta} must be nonnegative")));
    }
    let e = *base.edge(e0).ok_or(Error::UnknownEdge(e0))?;
    let w = base.fresh_vertex_id();
    let a = base.fresh_edge_id();
    let b = EdgeId(a.0 + 1);
    let mut edges: Vec<Edge> = base.edges().iter().filter(|x| x.id != e0).copied().collect();
    edges.push(Edge { id: a, u: e.u, v: w });
    edges.push(Edge { id: b, u: w, v: e.v });
    let graph = BaseGraph::new(base.vertices().iter().copied().chain([w]), edges)?;
    Ok(Gadget {
        graph,
        middle: w,
        halves: (a, b),
        beta_hat: 0.5 * (2.0 * beta).exp().acosh(),
    })
}

/// `<σ_A>` in floats from Boltzmann weights `exp(sum J σσ)` by spin enumeration.
pub fn correlation_boltzmann(base: &BaseGraph, j: &[f64], a: &VertexSet) -> Result<f64> {
    let n = base.num_vertices();
    check_cap("vertex count", n, MAX_TABLE_VERTICES)?;
    let index = base.index();
    let amask = index.mask(a)?;
    let ends: Vec<(usize, usize)> = base.edges().iter().map(|e| edge_positions(index, e)).collect();
    let (mut z, mut num) = (0.0, 0.0);
    for config in 0u64..(1 << n) {
        let energy: f64 = ends
            .iter()
            .zip(j)
            .map(|((a, b), x)| if (config >> a & 1) == (config >> b & 1) { *x } else { -*x })
            .sum();
        let w = energy.exp();
        z += w;
        num += if (config & amask).count_ones() % 2 == 1 { -w } else { w };
    }
    Ok(num / z)
}

/// Spin list shapes exercised by [`monotonicity_harness`], cycled by index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SpinShape {
    Distinct,
    Repeated,
    OneEndpoint,
    BothEndpoints,
}

/// One exact sign instance: graph, coupling chain `t <= t'`, spins, marked edge.
#[derive(Clone, Debug)]
pub struct SignInstance {
    pub base: BaseGraph,
    pub lower: Vec<Rational>,
    pub upper: Vec<Rational>,
    pub spins: Vec<VertexId>,
    pub marked: EdgeId,
    pub shape: SpinShape,
}

impl SignInstance {
    pub fn k(&self) -> usize {
        self.spins.len() / 2
    }
}

pub fn random_sign_instance(rng: &mut CorpusRng, max_vertices: usize, shape: SpinShape) -> SignInstance {
    let n = rng.random_range(2..=max_vertices.max(2));
    let extra = rng.random_range(0..=n.min(4));
    let connected = rng.random_bool(0.8);
    let base = random_graph(rng, n, n - 1 + extra, connected);
    let (lower, upper) = random_coupling_chain(rng, base.num_edges(), 6);
    let marked_edge = base.edges()[rng.random_range(0..base.num_edges())];
    let k = rng.random_range(1..=3usize);
    let vertices = base.vertices().to_vec();
    let mut spins: Vec<VertexId> = match shape {
        SpinShape::Distinct if n >= 2 * k => {
            let mut pool = vertices.clone();
            pool.shuffle(rng);
            pool.truncate(2 * k);
            pool
        }
        _ => (0..2 * k).map(|_| *vertices.choose(rng).unwrap()).collect(),
    };
    match shape {
        SpinShape::Repeated => spins[1] = spins[0],
        SpinShape::OneEndpoint => spins[0] = marked_edge.u,
        SpinShape::BothEndpoints => {
            spins[0] = marked_edge.u;
            spins[1] = marked_edge.v;
        }
        SpinShape::Distinct => {}
    }
    spins.shuffle(rng);
    SignInstance {
        base,
        lower,
        upper,
        spins,
        marked: marked_edge.id,
        shape,
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SignHarnessReport {
    pub instances: usize,
    /// indices where `(-1)^{k-1} ∂u_2k/∂J < 0`
    pub derivative_violations: Vec<usize>,
    /// indices where `(-1)^{k-1} u_2k < 0` at either end of the chain
    pub value_violations: Vec<usize>,
    /// indices where `(-1)^{k-1} u_2k(t) > (-1)^{k-1} u_2k(t')`
    pub chain_violations: Vec<usize>,
    /// indices with distinct spins where `u_2k != 0` at zero coupling
    pub zero_coupling_violations: Vec<usize>,
    pub errors: Vec<String>,
}

impl SignHarnessReport {
    pub fn violations(&self) -> usize {
        self.derivative_violations.len()
            + self.value_violations.len()
            + self.chain_violations.len()
            + self.zero_coupling_violations.len()
            + self.errors.len()
    }
}

/// Exact sign and chain-monotonicity checks on `count` random instances with
/// `k <= 3`, cycling through distinct, repeated and endpoint-overlap spins.
pub fn monotonicity_harness(seed: u64, count: usize, max_vertices: usize) -> SignHarnessReport {
    const SHAPES: [SpinShape; 4] = [
        SpinShape::Distinct,
        SpinShape::Repeated,
        SpinShape::OneEndpoint,
        SpinShape::BothEndpoints,
    ];
    let mut rng = corpus_rng(seed);
    let mut report = SignHarnessReport::default();
    for index in 0..count {
        let inst = random_sign_instance(&mut rng, max_vertices, SHAPES[index % SHAPES.len()]);
        report.instances += 1;
        if let Err(e) = check_sign_instance(&inst, index, &mut report) {
            report.errors.push(format!("instance {index}: {e}"));
        }
    }
    report
}

fn check_sign_instance(inst: &SignInstance, index: usize, report: &mut SignHarnessReport) -> Result<()> {
    let k = inst.k();
    let g = &inst.base;
    let low = CorrelationTable::exact(g, &Couplings::new(g, inst.lower.clone())?)?;
    let high = CorrelationTable::exact(g, &Couplings::new(g, inst.upper.clone())?)?;
    let d = signed_by_order(k, ursell_derivative_in(&low, g, &inst.spins, inst.marked)?);
    let d_high = signed_by_order(k, ursell_derivative_in(&high, g, &inst.spins, inst.marked)?);
    if d.is_negative() || d_high.is_negative() {
        report.derivative_violations.push(index);
    }
    let u_low = signed_by_order(k, ursell_in(&low, &inst.spins)?);
    let u_high = signed_by_order(k, ursell_in(&high, &inst.spins)?);
    if u_low.is_negative() || u_high.is_negative() {
        report.value_violations.push(index);
    }
    if u_low > u_high {
        report.chain_violations.push(index);
    }
    let mut distinct = inst.spins.clone();
    distinct.sort();
    distinct.dedup();
    if distinct.len() == inst.spins.len() {
        let free = CorrelationTable::exact(g, &Couplings::uniform(g, Rational::zero())?)?;
        if !ursell_in(&free, &inst.spins)?.is_zero() {
            report.zero_coupling_violations.push(index);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::vertex_set;
    use crate::rational::{int, rat};

    fn edge() -> BaseGraph {
        BaseGraph::from_pairs(2, &[(0, 1)]).unwrap()
    }

    fn triangle() -> BaseGraph {
        BaseGraph::from_pairs(3, &[(0, 1), (0, 2), (1, 2)]).unwrap()
    }

    #[test]
    fn correlation_examples() {
        let g = edge();
        let t = Couplings::uniform(&g, rat(1, 3)).unwrap();
        assert_eq!(correlation(&g, &t, &vertex_set([0, 1])).unwrap(), rat(1, 3));
        assert_eq!(correlation_oracle(&g, &t, &vertex_set([0, 1])).unwrap(), rat(1, 3));

        let g = triangle();
        let t = Couplings::uniform(&g, rat(1, 2)).unwrap();
        assert_eq!(correlation(&g, &t, &vertex_set([0, 1])).unwrap(), rat(2, 3));
        assert_eq!(correlation_oracle(&g, &t, &vertex_set([0, 1])).unwrap(), rat(2, 3));
        assert_eq!(correlation(&g, &t, &vertex_set([0])).unwrap(), int(0));
    }

    #[test]
    fn couplings_are_checked() {
        let g = edge();
        assert!(Couplings::uniform(&g, int(1)).is_err());
        assert!(Couplings::uniform(&g, rat(-1, 2)).is_err());
        assert!(Couplings::new(&g, vec![]).is_err());
    }

    #[test]
    fn ursell_examples() {
        let g = edge();
        let t = Couplings::uniform(&g, rat(1, 3)).unwrap();
        let u = ursell(&g, &t, &[VertexId(0), VertexId(0)]).unwrap();
        assert_eq!(u.value, int(1));
        let u = ursell(&g, &t, &[VertexId(0), VertexId(1)]).unwrap();
        assert_eq!(u.value, rat(1, 3));
        assert_eq!(ursell(&g, &t, &[VertexId(0)]).unwrap().value, int(0));

        let two = BaseGraph::from_pairs(4, &[(0, 1), (2, 3)]).unwrap();
        let t = Couplings::uniform(&two, rat(1, 2)).unwrap();
        let spins: Vec<_> = (0..4).map(VertexId).collect();
        assert_eq!(ursell(&two, &t, &spins).unwrap().value, int(0));
    }

    #[test]
    fn derivative_of_two_point_function() {
        let g = edge();
        let t = Couplings::uniform(&g, rat(1, 3)).unwrap();
        let d = ursell_derivative(&g, &t, &[VertexId(0), VertexId(1)], EdgeId(0)).unwrap();
        assert_eq!(d, rat(8, 9));
    }

    #[test]
    fn free_spin_cumulants() {
        let g = BaseGraph::new([VertexId(0)], []).unwrap();
        let t = Couplings::new(&g, vec![]).unwrap();
        let lam = WeightedField::uniform(&g, int(1));
        let k = cumulants(&g, &t, &lam, 4).unwrap();
        assert_eq!(k, vec![int(0), int(1), int(0), int(-2)]);
        assert_eq!(cumulant_from_ursell(&g, &t, &lam, 4).unwrap(), int(-2));
    }

    #[test]
    fn reduction_rejects_k1() {
        let g = edge();
        let t = Couplings::uniform(&g, rat(1, 3)).unwrap();
        assert!(reduction_check(&g, &t, &[VertexId(0), VertexId(0)]).is_err());
        assert!(reduction_check(&g, &t, &[VertexId(0), VertexId(0), VertexId(0), VertexId(1)]).unwrap());
    }

    #[test]
    fn gadget_two_step_path() {
        let g = edge();
        let gad = gadget_split(&g, EdgeId(0), 1.0).unwrap();
        assert!((gad.beta_hat.tanh().powi(2) - 1f64.tanh()).abs() < 1e-12);
        let j = gad.couplings(&g, &[1.0]);
        let c = correlation_boltzmann(&gad.graph, &j, &vertex_set([0, 1])).unwrap();
        assert!((c - 1f64.tanh()).abs() < 1e-12);
        assert_eq!(gadget_split(&g, EdgeId(0), 0.0).unwrap().beta_hat, 0.0);
    }

    #[test]
    fn small_sign_harness_is_clean() {
        let r = monotonicity_harness(3, 40, 5);
        assert_eq!(r.instances, 40);
        assert_eq!(r.violations(), 0, "{r:?}");
    }
}
