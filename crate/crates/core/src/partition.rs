//! Partitions of a marked multigraph and the signed functional
//! `R = sum_T (-1)^{n(T)-1} (n(T)-1)!`.
//!
//! A partition `T` of a multigraph with `2k` sources is an assignment of every
//! labelled edge to one of `k + 1` slots:
//!
//! * one slot per block `b` of an even set partition `P` of the sources,
//!   except a distinguished block `Q`; that slot's boundary must be `b`;
//! * the twisted slot, whose boundary must be `Q ^ {u0, v0}`;
//! * `k + 1 - |P|` ordered tail slots with empty boundary.
//!
//! Additionally `u0` and `v0` must be disconnected by the twisted slot together
//! with the first tail slot. A partition is identified by `(P, Q, slots)`: block
//! slots are keyed by their boundary, the twisted slot is the only one whose
//! boundary contains `v0`, and tail slots are compared position by position.
//! Enumerating that triple therefore lists each distinct partition exactly once
//! without any deduplication.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::{
    symmetric_difference, Current, Edge, EdgeId, MultiGraph, UnionFind, VertexId, VertexSet,
};
use crate::rational::{factorial, partition_weight, signed_by_order};

/// All set partitions of `{0, .., n-1}` as block bitmasks, blocks ordered by
/// least element. Restricted-growth-string order.
pub struct SetPartitions {
    rgs: Vec<usize>,
    done: bool,
}

impl SetPartitions {
    pub fn new(n: usize) -> Self {
        assert!(n <= 64);
        SetPartitions {
            rgs: vec![0; n],
            done: false,
        }
    }
}

impl Iterator for SetPartitions {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        let blocks = self.rgs.iter().max().map_or(0, |m| m + 1);
        let mut out = vec![0u64; blocks];
        for (i, &b) in self.rgs.iter().enumerate() {
            out[b] |= 1 << i;
        }
        // advance: rightmost position that may still grow
        let n = self.rgs.len();
        let mut prefix_max = vec![0usize; n];
        for i in 1..n {
            prefix_max[i] = prefix_max[i - 1].max(self.rgs[i - 1]);
        }
        self.done = true;
        for i in (1..n).rev() {
            if self.rgs[i] <= prefix_max[i] {
                self.rgs[i] += 1;
                for x in &mut self.rgs[i + 1..] {
                    *x = 0;
                }
                self.done = false;
                break;
            }
        }
        Some(out)
    }
}

/// Even-block set partitions of `{0, .., n-1}` (`n` even), blocks ordered by
/// least element.
pub fn even_index_partitions(n: usize) -> Vec<Vec<u64>> {
    fn rec(rest: u64, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rest == 0 {
            out.push(acc.clone());
            return;
        }
        let first = rest & rest.wrapping_neg();
        let others = rest ^ first;
        // subsets of `others` of odd size join `first`
        let mut sub = others;
        let mut subsets = Vec::new();
        loop {
            if sub.count_ones() % 2 == 1 {
                subsets.push(sub);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & others;
        }
        subsets.sort_by_key(|s| (s.count_ones(), s.reverse_bits()));
        for s in subsets {
            acc.push(first | s);
            rec(others ^ s, acc, out);
            acc.pop();
        }
    }
    assert!(n.is_multiple_of(2) && n <= 64);
    let mut out = Vec::new();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    rec(all, &mut Vec::new(), &mut out);
    out
}

/// A partition of a source set into nonempty blocks of even size.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EvenSetPartition {
    blocks: Vec<VertexSet>,
}

impl EvenSetPartition {
    pub fn blocks(&self) -> &[VertexSet] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

impl fmt::Display for EvenSetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(fmt_set).collect();
        write!(f, "{}", parts.join("|"))
    }
}

fn fmt_set<T: fmt::Display>(set: impl IntoIterator<Item = T>) -> String {
    let items: Vec<String> = set.into_iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

/// Each even-block partition of `sources`, once, blocks sorted by least element.
pub fn even_partitions(sources: &[VertexId]) -> Result<Vec<EvenSetPartition>> {
    if sources.len() % 2 == 1 {
        return Err(Error::OddSourceSet(sources.len()));
    }
    let mut sorted = sources.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != sources.len() {
        return Err(invalid("repeated vertex in source set"));
    }
    Ok(even_index_partitions(sorted.len())
        .into_iter()
        .map(|masks| EvenSetPartition {
            blocks: masks
                .into_iter()
                .map(|m| {
                    (0..sorted.len())
                        .filter(|i| m >> i & 1 == 1)
                        .map(|i| sorted[i])
                        .collect()
                })
                .collect(),
        })
        .collect())
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RestrictionMode {
    /// The two edges lie in different subgraphs.
    Separate,
    /// The two edges lie in the same subgraph.
    Together,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Restriction {
    pub a: EdgeId,
    pub b: EdgeId,
    pub mode: RestrictionMode,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictionSet {
    items: Vec<Restriction>,
}

impl RestrictionSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, a: EdgeId, b: EdgeId, mode: RestrictionMode) -> Result<()> {
        if a == b {
            return Err(Error::DegenerateRestriction(a));
        }
        self.items.push(Restriction { a, b, mode });
        Ok(())
    }

    pub fn separate(mut self, a: u32, b: u32) -> Result<Self> {
        self.push(EdgeId(a), EdgeId(b), RestrictionMode::Separate)?;
        Ok(self)
    }

    pub fn together(mut self, a: u32, b: u32) -> Result<Self> {
        self.push(EdgeId(a), EdgeId(b), RestrictionMode::Together)?;
        Ok(self)
    }

    pub fn items(&self) -> &[Restriction] {
        &self.items
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Labels mentioned by any restriction.
    pub fn labels(&self) -> BTreeSet<EdgeId> {
        self.items.iter().flat_map(|r| [r.a, r.b]).collect()
    }
}

/// One distinct partition of a multigraph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphPartition {
    /// The even set partition `P` of the sources.
    pub blocks: EvenSetPartition,
    /// Index of the twisted block `Q` within `blocks`.
    pub twisted: usize,
    /// `Γ_1 .. Γ_{k+1}`: the block slots of `P \ {Q}` in block order, then the
    /// twisted slot, then the ordered tail.
    pub subgraphs: Vec<Vec<EdgeId>>,
}

impl GraphPartition {
    /// `n(T) = |P|`
    pub fn n(&self) -> usize {
        self.blocks.len()
    }

    pub fn weight(&self) -> i128 {
        partition_weight(self.n())
    }

    pub fn twisted_block(&self) -> &VertexSet {
        &self.blocks.blocks[self.twisted]
    }

    pub fn twisted_edges(&self) -> &[EdgeId] {
        &self.subgraphs[self.n() - 1]
    }

    pub fn tail(&self) -> &[Vec<EdgeId>] {
        &self.subgraphs[self.n()..]
    }

    /// Index of the subgraph holding `label`.
    pub fn slot_of(&self, label: EdgeId) -> Option<usize> {
        self.subgraphs.iter().position(|s| s.contains(&label))
    }
}

impl fmt::Display for GraphPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} P={} Q={}",
            self.n(),
            self.blocks,
            fmt_set(self.twisted_block())
        )?;
        for (i, s) in self.subgraphs.iter().enumerate() {
            write!(f, " E{}={}", i + 1, fmt_set(s))?;
        }
        Ok(())
    }
}

/// Signed sum together with the number of partitions it ranges over.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub struct PartitionSum {
    pub value: i128,
    pub count: u64,
}

/// Precomputed search order and pruning tables for one multigraph.
struct Search<'a> {
    g: &'a MultiGraph,
    k: usize,
    /// edge positions in processing order
    order: Vec<usize>,
    masks: Vec<u64>,
    /// vertices whose last incident edge is placed at this step
    finalized: Vec<u64>,
    /// vertices with no non-loop edge at all
    isolated: u64,
    /// (earlier step, mode) pairs checked when placing a step
    links: Vec<Vec<(usize, RestrictionMode)>>,
    endpoints: Vec<(usize, usize)>,
    u0: usize,
    v0: usize,
    source_masks: Vec<u64>,
}

impl<'a> Search<'a> {
    fn new(g: &'a MultiGraph, restrictions: &RestrictionSet) -> Result<Self> {
        let index = g.index();
        let edges = g.edges();
        let mut step_of = vec![usize::MAX; edges.len()];
        let order = processing_order(g);
        for (step, &pos) in order.iter().enumerate() {
            step_of[pos] = step;
        }
        let masks: Vec<u64> = order.iter().map(|&p| index.edge_mask(&edges[p])).collect();
        let mut last_step = vec![None::<usize>; index.len()];
        for (step, &p) in order.iter().enumerate() {
            let e = &edges[p];
            if !e.is_loop() {
                for x in [e.u, e.v] {
                    last_step[index.position(x).unwrap()] = Some(step);
                }
            }
        }
        let mut finalized = vec![0u64; order.len()];
        let mut isolated = 0u64;
        for (v, s) in last_step.iter().enumerate() {
            match s {
                Some(s) => finalized[*s] |= 1 << v,
                None => isolated |= 1 << v,
            }
        }
        let mut links = vec![Vec::new(); order.len()];
        for r in restrictions.items() {
            let pa = g.edge_position(r.a).ok_or(Error::UnknownEdge(r.a))?;
            let pb = g.edge_position(r.b).ok_or(Error::UnknownEdge(r.b))?;
            let (sa, sb) = (step_of[pa], step_of[pb]);
            let (early, late) = if sa < sb { (sa, sb) } else { (sb, sa) };
            links[late].push((early, r.mode));
        }
        let endpoints = order
            .iter()
            .map(|&p| {
                let e = &edges[p];
                (
                    index.position(e.u).unwrap(),
                    index.position(e.v).unwrap(),
                )
            })
            .collect();
        let (u0, v0) = g.marked();
        let mut sorted_sources = g.sources().to_vec();
        sorted_sources.sort();
        Ok(Search {
            g,
            k: g.k(),
            order,
            masks,
            finalized,
            isolated,
            links,
            endpoints,
            u0: index.position(u0).unwrap(),
            v0: index.position(v0).unwrap(),
            source_masks: sorted_sources
                .iter()
                .map(|&s| index.bit(s).unwrap())
                .collect(),
        })
    }

    /// Visits every partition as `(P as index masks, Q index, slot per step)`.
    fn run(&self, mut visit: impl FnMut(&[u64], usize, &[usize])) {
        if !self.g.is_admissible() {
            return;
        }
        let nsrc = self.source_masks.len();
        let uv = (1u64 << self.u0) ^ (1u64 << self.v0);
        for pidx in even_index_partitions(nsrc) {
            let blocks: Vec<u64> = pidx
                .iter()
                .map(|&m| {
                    (0..nsrc)
                        .filter(|i| m >> i & 1 == 1)
                        .fold(0, |acc, i| acc | self.source_masks[i])
                })
                .collect();
            let n = blocks.len();
            for q in 0..n {
                let mut targets: Vec<u64> = blocks
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != q)
                    .map(|(_, &b)| b)
                    .collect();
                targets.push(blocks[q] ^ uv);
                targets.resize(self.k + 1, 0);
                if targets.iter().any(|t| t & self.isolated != 0) {
                    continue;
                }
                let mut state = DfsState {
                    parity: vec![0; self.k + 1],
                    slots: vec![0; self.order.len()],
                };
                self.dfs(0, n, &targets, &mut state, &mut |slots| {
                    visit(&blocks, q, slots)
                });
            }
        }
    }

    fn dfs(
        &self,
        step: usize,
        n: usize,
        targets: &[u64],
        st: &mut DfsState,
        emit: &mut dyn FnMut(&[usize]),
    ) {
        if step == self.order.len() {
            if !self.marked_connected(n, &st.slots) {
                emit(&st.slots);
            }
            return;
        }
        let fin = self.finalized[step];
        'slot: for s in 0..=self.k {
            for &(early, mode) in &self.links[step] {
                let same = st.slots[early] == s;
                match mode {
                    RestrictionMode::Separate if same => continue 'slot,
                    RestrictionMode::Together if !same => continue 'slot,
                    _ => {}
                }
            }
            st.parity[s] ^= self.masks[step];
            if st
                .parity
                .iter()
                .zip(targets)
                .all(|(p, t)| (p ^ t) & fin == 0)
            {
                st.slots[step] = s;
                self.dfs(step + 1, n, targets, st, emit);
            }
            st.parity[s] ^= self.masks[step];
        }
    }

    /// `u0 <-> v0` through the twisted slot and the first tail slot.
    fn marked_connected(&self, n: usize, slots: &[usize]) -> bool {
        let (twisted, first_tail) = (n - 1, n);
        let mut uf = UnionFind::new(self.g.vertices().len());
        for (step, &s) in slots.iter().enumerate() {
            if s == twisted || s == first_tail {
                let (a, b) = self.endpoints[step];
                uf.union(a, b);
            }
        }
        uf.find(self.u0) == uf.find(self.v0)
    }
}

struct DfsState {
    parity: Vec<u64>,
    slots: Vec<usize>,
}

/// Greedy edge order that finalizes vertices early: repeatedly take an edge
/// touching the most recently used vertices.
fn processing_order(g: &MultiGraph) -> Vec<usize> {
    let edges = g.edges();
    let mut remaining: Vec<usize> = (0..edges.len()).collect();
    let mut order = Vec::with_capacity(edges.len());
    let mut seen: BTreeSet<VertexId> = BTreeSet::new();
    seen.insert(g.marked().1);
    while !remaining.is_empty() {
        let score = |e: &Edge| usize::from(seen.contains(&e.u)) + usize::from(seen.contains(&e.v));
        let (i, _) = remaining
            .iter()
            .enumerate()
            .max_by_key(|(i, &p)| (score(&edges[p]), std::cmp::Reverse(*i)))
            .unwrap();
        let p = remaining.remove(i);
        seen.insert(edges[p].u);
        seen.insert(edges[p].v);
        order.push(p);
    }
    order
}

fn build_partition(
    g: &MultiGraph,
    search: &Search<'_>,
    blocks: &[u64],
    q: usize,
    slots: &[usize],
) -> GraphPartition {
    let index = g.index();
    let evens = EvenSetPartition {
        blocks: blocks.iter().map(|&m| index.set(m)).collect(),
    };
    let mut subgraphs = vec![Vec::new(); search.k + 1];
    for (step, &s) in slots.iter().enumerate() {
        subgraphs[s].push(g.edges()[search.order[step]].id);
    }
    for s in &mut subgraphs {
        s.sort();
    }
    GraphPartition {
        blocks: evens,
        twisted: q,
        subgraphs,
    }
}

/// Calls `f` on every distinct partition of `g` obeying `restrictions`.
pub fn for_each_partition(
    g: &MultiGraph,
    restrictions: &RestrictionSet,
    mut f: impl FnMut(&GraphPartition),
) -> Result<()> {
    let search = Search::new(g, restrictions)?;
    search.run(|blocks, q, slots| f(&build_partition(g, &search, blocks, q, slots)));
    Ok(())
}

/// Every distinct partition of `g` obeying `restrictions`, in a stable order.
pub fn enumerate_partitions(
    g: &MultiGraph,
    restrictions: &RestrictionSet,
) -> Result<Vec<GraphPartition>> {
    let mut out = Vec::new();
    for_each_partition(g, restrictions, |p| out.push(p.clone()))?;
    Ok(out)
}

pub fn partition_sum(g: &MultiGraph, restrictions: &RestrictionSet) -> Result<PartitionSum> {
    let search = Search::new(g, restrictions)?;
    let mut sum = PartitionSum::default();
    search.run(|blocks, _, _| {
        sum.value += partition_weight(blocks.len());
        sum.count += 1;
    });
    Ok(sum)
}

/// `R(g; restrictions)`.
pub fn r_graph(g: &MultiGraph, restrictions: &RestrictionSet) -> Result<i128> {
    partition_sum(g, restrictions).map(|s| s.value)
}

/// `R(m)` evaluated directly over tuples of sub-currents `n^1 + .. + n^{k+1} = m`
/// with multinomial weights, independently of the multigraph enumeration.
pub fn r_current(
    m: &Current<'_>,
    sources: &[VertexId],
    marked: (VertexId, VertexId),
) -> Result<i128> {
    let base = m.base();
    let (u0, v0) = marked;
    if sources.len() % 2 == 1 {
        return Err(Error::OddSourceSet(sources.len()));
    }
    let set: VertexSet = sources.iter().copied().collect();
    if set.len() != sources.len() {
        return Err(invalid("repeated vertex in source set"));
    }
    if set.contains(&v0) {
        return Err(invalid(format!("v0 = {v0} is a source")));
    }
    if u0 == v0 {
        return Err(invalid("marked pair repeats a vertex"));
    }
    let index = base.index();
    let uv = index.bit(u0)? ^ index.bit(v0)?;
    let smask = index.mask(sources)?;
    if m.boundary_mask() != smask ^ uv {
        return Ok(0);
    }
    let k = sources.len() / 2;
    let parts = k + 1;

    // active edges with their composition tables
    let active: Vec<usize> = (0..base.num_edges()).filter(|&i| m.values()[i] > 0).collect();
    let compositions: Vec<Vec<Composition>> = active
        .iter()
        .map(|&i| compositions_of(m.values()[i], parts))
        .collect();
    let emasks: Vec<u64> = active
        .iter()
        .map(|&i| index.edge_mask(&base.edges()[i]))
        .collect();
    let mut last = vec![None::<usize>; index.len()];
    for (step, &i) in active.iter().enumerate() {
        let e = &base.edges()[i];
        last[index.position(e.u).unwrap()] = Some(step);
        last[index.position(e.v).unwrap()] = Some(step);
    }
    let mut finalized = vec![0u64; active.len()];
    let mut untouched = 0u64;
    for (v, s) in last.iter().enumerate() {
        match s {
            Some(s) => finalized[*s] |= 1 << v,
            None => untouched |= 1 << v,
        }
    }
    let ends: Vec<(usize, usize)> = active
        .iter()
        .map(|&i| {
            let e = &base.edges()[i];
            (index.position(e.u).unwrap(), index.position(e.v).unwrap())
        })
        .collect();

    let mut sorted = sources.to_vec();
    sorted.sort();
    let src_bits: Vec<u64> = sorted.iter().map(|&s| index.bit(s).unwrap()).collect();
    let (pu, pv) = (
        index.position(u0).unwrap(),
        index.position(v0).unwrap(),
    );

    struct Ctx<'c> {
        compositions: &'c [Vec<Composition>],
        emasks: &'c [u64],
        finalized: &'c [u64],
        ends: &'c [(usize, usize)],
        targets: Vec<u64>,
        twisted: usize,
        nverts: usize,
        pu: usize,
        pv: usize,
    }

    fn dfs(c: &Ctx<'_>, step: usize, parity: &mut [u64], chosen: &mut Vec<usize>) -> i128 {
        if step == c.compositions.len() {
            let mut uf = UnionFind::new(c.nverts);
            let mut weight: i128 = 1;
            for (s, &ci) in chosen.iter().enumerate() {
                let comp = &c.compositions[s][ci];
                weight *= comp.multinomial as i128;
                if comp.parts[c.twisted] + comp.parts[c.twisted + 1] > 0 {
                    uf.union(c.ends[s].0, c.ends[s].1);
                }
            }
            return if uf.find(c.pu) == uf.find(c.pv) { 0 } else { weight };
        }
        let mut total = 0;
        for (ci, comp) in c.compositions[step].iter().enumerate() {
            for (j, &x) in comp.parts.iter().enumerate() {
                if x % 2 == 1 {
                    parity[j] ^= c.emasks[step];
                }
            }
            let fin = c.finalized[step];
            if parity.iter().zip(&c.targets).all(|(p, t)| (p ^ t) & fin == 0) {
                chosen.push(ci);
                total += dfs(c, step + 1, parity, chosen);
                chosen.pop();
            }
            for (j, &x) in comp.parts.iter().enumerate() {
                if x % 2 == 1 {
                    parity[j] ^= c.emasks[step];
                }
            }
        }
        total
    }

    let mut r = 0i128;
    for pidx in even_index_partitions(sorted.len()) {
        let blocks: Vec<u64> = pidx
            .iter()
            .map(|&bm| {
                (0..sorted.len())
                    .filter(|i| bm >> i & 1 == 1)
                    .fold(0, |acc, i| acc | src_bits[i])
            })
            .collect();
        let n = blocks.len();
        let mut inner = 0i128;
        for q in 0..n {
            let mut targets: Vec<u64> = (0..n).filter(|&i| i != q).map(|i| blocks[i]).collect();
            targets.push(blocks[q] ^ uv);
            targets.resize(parts, 0);
            if targets.iter().any(|t| t & untouched != 0) {
                continue;
            }
            let ctx = Ctx {
                compositions: &compositions,
                emasks: &emasks,
                finalized: &finalized,
                ends: &ends,
                targets,
                twisted: n - 1,
                nverts: index.len(),
                pu,
                pv,
            };
            let mut parity = vec![0u64; parts];
            inner += dfs(&ctx, 0, &mut parity, &mut Vec::new());
        }
        r += partition_weight(n) * inner;
    }
    Ok(r)
}

struct Composition {
    parts: Vec<u32>,
    multinomial: u128,
}

fn compositions_of(total: u32, parts: usize) -> Vec<Composition> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; parts];
    fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Composition>, total: u32) {
        if pos + 1 == cur.len() {
            cur[pos] = left;
            let denom: u128 = cur
                .iter()
                .map(|&x| (1..=x as u128).product::<u128>())
                .product();
            let num: u128 = (1..=total as u128).product();
            out.push(Composition {
                parts: cur.clone(),
                multinomial: num / denom,
            });
            return;
        }
        for x in 0..=left {
            cur[pos] = x;
            rec(pos + 1, left - x, cur, out, total);
        }
    }
    rec(0, total, &mut cur, &mut out, total);
    out
}

/// `I_p`: signed count of even partitions of `{1..2p}` keeping `2q-1, 2q`
/// together.
pub fn i_p(p: usize) -> Result<i128> {
    if p < 1 {
        return Err(invalid("I_p needs p >= 1"));
    }
    if 2 * p > 64 {
        return Err(Error::CapExceeded {
            what: "I_p order",
            value: p,
            cap: 32,
        });
    }
    Ok(even_index_partitions(2 * p)
        .into_iter()
        .filter(|blocks| {
            (0..p).all(|q| {
                let pair = 0b11u64 << (2 * q);
                blocks.iter().any(|&b| b & pair == pair)
            })
        })
        .map(|blocks| partition_weight(blocks.len()))
        .sum())
}

/// `N(L)`: ways to put `2L` distinct objects into `boxes` distinct boxes
/// with every box holding an even number. Brute force over all assignments.
pub fn n_l(l: u32, boxes: u32) -> u128 {
    let objects = 2 * l as usize;
    if boxes == 0 {
        return u128::from(objects == 0);
    }
    let mut assign = vec![0u32; objects];
    let mut count = 0u128;
    loop {
        let mut occupancy = vec![0u32; boxes as usize];
        for &b in &assign {
            occupancy[b as usize] += 1;
        }
        if occupancy.iter().all(|c| c % 2 == 0) {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == objects {
                return count;
            }
            assign[i] += 1;
            if assign[i] < boxes {
                break;
            }
            assign[i] = 0;
            i += 1;
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpecialFamily {
    /// `u0 = j1` with edges `j1j2, j1j3, j4v0`, then pairs `j5j6, ..`; `k >= 2`.
    H,
    /// `u0 = j1` isolated, edges `j2v0, j3j4, ..`; `k >= 1`.
    KI,
    /// `u0` a non-source, edges `j1u0, j2v0, j3j4, ..`; `k >= 1`.
    KII,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpecialGraphSpec {
    pub family: SpecialFamily,
    pub k: usize,
    pub l: usize,
}

impl SpecialGraphSpec {
    pub fn new(family: SpecialFamily, k: usize, l: usize) -> Self {
        SpecialGraphSpec { family, k, l }
    }
}

/// Vertex numbering: sources `j_i = i` for `i = 1..=2k`, `v0 = 2k + 1`, and
/// for `KII` the non-source `u0 = 2k + 2`. Edges are labelled `0, 1, ..` in
/// the order listed on [`SpecialFamily`], followed by the `2L` parallel
/// `u0v0` edges.
pub fn make_special(spec: SpecialGraphSpec) -> Result<MultiGraph> {
    let k = spec.k as u32;
    let min_k = match spec.family {
        SpecialFamily::H => 2,
        SpecialFamily::KI | SpecialFamily::KII => 1,
    };
    if spec.k < min_k {
        return Err(invalid(format!(
            "{:?} needs k >= {min_k}, got {}",
            spec.family, spec.k
        )));
    }
    if 2 * k + 2 > 64 {
        return Err(Error::CapExceeded {
            what: "special graph order",
            value: spec.k,
            cap: 31,
        });
    }
    let v0 = 2 * k + 1;
    let pairs_from = |first: u32| (first..=k).map(|i| (2 * i - 1, 2 * i));
    let (u0, mut pairs): (u32, Vec<(u32, u32)>) = match spec.family {
        SpecialFamily::H => (1, vec![(1, 2), (1, 3), (4, v0)]),
        SpecialFamily::KI => (1, vec![(2, v0)]),
        SpecialFamily::KII => (2 * k + 2, vec![(1, 2 * k + 2), (2, v0)]),
    };
    let first_pair = match spec.family {
        SpecialFamily::H => 3,
        _ => 2,
    };
    pairs.extend(pairs_from(first_pair));
    pairs.extend(std::iter::repeat_n((u0, v0), 2 * spec.l));
    let mut vertices: Vec<VertexId> = (1..=v0).map(VertexId).collect();
    if spec.family == SpecialFamily::KII {
        vertices.push(VertexId(u0));
    }
    let edges = pairs
        .into_iter()
        .enumerate()
        .map(|(i, (a, b))| Edge::new(i as u32, a, b))
        .collect();
    MultiGraph::new(
        vertices,
        edges,
        (VertexId(u0), VertexId(v0)),
        (1..=2 * k).map(VertexId).collect(),
    )
}

/// Deletes a self-loop. Callers rely on `R(g) = (k + 1) R(result)`.
pub fn reduce_self_loop(g: &MultiGraph, label: EdgeId) -> Result<MultiGraph> {
    let e = g.edge(label).ok_or(Error::UnknownEdge(label))?;
    if !e.is_loop() {
        return Err(invalid(format!("edge {label} is not a self-loop")));
    }
    g.without_edge(label)
}

/// Replaces `e1 = v v1` and `e2 = v v2` by a single edge `v1 v2` under a
/// fresh label (a self-loop when `v1 == v2`). The shared endpoint `v` must be
/// unmarked.
pub fn contract_pair(
    g: &MultiGraph,
    e1: EdgeId,
    e2: EdgeId,
    at: VertexId,
) -> Result<(MultiGraph, EdgeId)> {
    if e1 == e2 {
        return Err(Error::DegenerateRestriction(e1));
    }
    let (u0, v0) = g.marked();
    if at == u0 || at == v0 {
        return Err(invalid(format!("cannot contract at marked vertex {at}")));
    }
    let a = *g.edge(e1).ok_or(Error::UnknownEdge(e1))?;
    let b = *g.edge(e2).ok_or(Error::UnknownEdge(e2))?;
    let (Some(v1), Some(v2)) = (a.opposite(at), b.opposite(at)) else {
        return Err(invalid(format!("edges {e1} and {e2} do not share vertex {at}")));
    };
    let id = g.fresh_label();
    let mut edges: Vec<Edge> = g
        .edges()
        .iter()
        .filter(|e| e.id != e1 && e.id != e2)
        .copied()
        .collect();
    edges.push(Edge { id, u: v1, v: v2 });
    let out = MultiGraph::new(
        g.vertices().iter().copied(),
        edges,
        g.marked(),
        g.sources().to_vec(),
    )?;
    Ok((out, id))
}

/// Unordered pairs of distinct edges meeting at an unmarked vertex, as
/// `(e1, e2, shared vertex)`.
pub fn contractible_pairs(g: &MultiGraph) -> Vec<(EdgeId, EdgeId, VertexId)> {
    let (u0, v0) = g.marked();
    let mut out = Vec::new();
    for &v in g.vertices() {
        if v == u0 || v == v0 {
            continue;
        }
        let incident: Vec<EdgeId> = g.edges().iter().filter(|e| e.touches(v)).map(|e| e.id).collect();
        for i in 0..incident.len() {
            for j in i + 1..incident.len() {
                out.push((incident[i], incident[j], v));
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignViolation {
    pub index: usize,
    pub k: usize,
    pub value: i128,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignScanReport {
    pub checked: usize,
    /// Instances outside the hypotheses of the sign statement: a restriction
    /// touching a `u0v0` edge or a self-loop, or a `Together` restriction.
    pub skipped: usize,
    pub violations: Vec<SignViolation>,
}

impl SignScanReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Whether the restrictions fall under the sign statement for restricted sums.
pub fn restrictions_in_scope(g: &MultiGraph, restrictions: &RestrictionSet) -> bool {
    let (u0, v0) = g.marked();
    restrictions.items().iter().all(|r| {
        r.mode == RestrictionMode::Separate
            && [r.a, r.b].iter().all(|&l| {
                g.edge(l)
                    .is_some_and(|e| !e.is_loop() && !e.joins(u0, v0))
            })
    })
}

/// Checks `(-1)^{k-1} R(g; restrictions) >= 0` on each instance.
pub fn sign_scan<I>(instances: I) -> Result<SignScanReport>
where
    I: IntoIterator<Item = (MultiGraph, RestrictionSet)>,
{
    let mut report = SignScanReport::default();
    for (index, (g, restrictions)) in instances.into_iter().enumerate() {
        if !restrictions_in_scope(&g, &restrictions) {
            report.skipped += 1;
            continue;
        }
        let value = r_graph(&g, &restrictions)?;
        report.checked += 1;
        if signed_by_order(g.k(), value) < 0 {
            report.violations.push(SignViolation {
                index,
                k: g.k(),
                value,
            });
        }
    }
    Ok(report)
}

/// Boundary of the `Q`-twisted slot for a given block.
pub fn twisted_boundary(g: &MultiGraph, q: &VertexSet) -> VertexSet {
    let (u0, v0) = g.marked();
    symmetric_difference(q, &[u0, v0].into_iter().collect())
}

/// `m!` as used to turn `R(m)` into a Taylor coefficient.
pub fn current_factorial(m: &Current<'_>) -> num_bigint::BigInt {
    m.values().iter().map(|&x| factorial(x)).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::vertex_set;

    fn h2() -> MultiGraph {
        make_special(SpecialGraphSpec::new(SpecialFamily::H, 2, 0)).unwrap()
    }

    #[test]
    fn set_partitions_are_bell_numbers() {
        let bell = [1, 1, 2, 5, 15, 52, 203];
        for (n, &b) in bell.iter().enumerate() {
            assert_eq!(SetPartitions::new(n).count(), b, "n = {n}");
        }
    }

    #[test]
    fn even_partition_counts() {
        let s = |n: u32| (1..=n).map(VertexId).collect::<Vec<_>>();
        assert_eq!(even_partitions(&s(2)).unwrap().len(), 1);
        assert_eq!(even_partitions(&s(4)).unwrap().len(), 4);
        assert_eq!(even_partitions(&s(6)).unwrap().len(), 31);
        assert_eq!(even_partitions(&s(3)), Err(Error::OddSourceSet(3)));
        let four = even_partitions(&s(4)).unwrap();
        assert!(four.iter().any(|p| p.blocks() == [vertex_set([1, 2, 3, 4])]));
        for p in &four {
            let mins: Vec<_> = p.blocks().iter().map(|b| *b.iter().next().unwrap()).collect();
            assert!(mins.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn even_partitions_match_filtered_set_partitions() {
        for n in [2usize, 4, 6, 8] {
            let mut filtered: Vec<Vec<u64>> = SetPartitions::new(n)
                .filter(|p| p.iter().all(|b| b.count_ones() % 2 == 0))
                .collect();
            let mut direct = even_index_partitions(n);
            filtered.sort();
            direct.sort();
            assert_eq!(filtered, direct);
        }
    }

    #[test]
    fn h2_has_four_partitions() {
        let g = h2();
        let sum = partition_sum(&g, &RestrictionSet::new()).unwrap();
        assert_eq!(sum, PartitionSum { value: -2, count: 4 });
    }

    #[test]
    fn restriction_rejects_equal_pair() {
        assert_eq!(
            RestrictionSet::new().separate(3, 3),
            Err(Error::DegenerateRestriction(EdgeId(3)))
        );
    }

    #[test]
    fn unknown_restriction_label_is_an_error() {
        let r = RestrictionSet::new().separate(0, 42).unwrap();
        assert_eq!(r_graph(&h2(), &r), Err(Error::UnknownEdge(EdgeId(42))));
    }

    #[test]
    fn i_p_values() {
        assert_eq!(i_p(1).unwrap(), 1);
        assert_eq!(i_p(2).unwrap(), 0);
        assert_eq!(i_p(3).unwrap(), 0);
        assert_eq!(i_p(4).unwrap(), 0);
        assert!(i_p(0).is_err());
    }

    #[test]
    fn n_l_values() {
        assert_eq!(n_l(0, 0), 1);
        assert_eq!(n_l(0, 3), 1);
        assert_eq!(n_l(1, 1), 1);
        assert_eq!(n_l(1, 2), 2);
        assert_eq!(n_l(1, 0), 0);
        // 2^{2L-1}-style closed forms for two boxes: (2^4 + 0^4)/2 = 8
        assert_eq!(n_l(2, 2), 8);
    }

    #[test]
    fn special_graph_shapes() {
        let g = h2();
        assert_eq!(g.marked(), (VertexId(1), VertexId(5)));
        let pairs: Vec<_> = g.edges().iter().map(|e| (e.u.0, e.v.0)).collect();
        assert_eq!(pairs, vec![(1, 2), (1, 3), (4, 5)]);

        let k1 = make_special(SpecialGraphSpec::new(SpecialFamily::KI, 1, 0)).unwrap();
        assert_eq!(k1.sources(), &[VertexId(1), VertexId(2)]);
        assert_eq!(k1.degree(VertexId(1)), 0);
        assert_eq!(k1.num_edges(), 1);

        let k11 = make_special(SpecialGraphSpec::new(SpecialFamily::KI, 1, 1)).unwrap();
        assert_eq!(k11.num_edges(), 3);
        assert_eq!(
            k11.edges().iter().filter(|e| e.joins(VertexId(1), VertexId(3))).count(),
            2
        );
        assert!(k11.is_admissible());

        assert!(make_special(SpecialGraphSpec::new(SpecialFamily::H, 1, 0)).is_err());
        assert!(make_special(SpecialGraphSpec::new(SpecialFamily::KII, 0, 0)).is_err());
    }

    #[test]
    fn contraction_preconditions() {
        let g = h2();
        // j1 = u0: rejected
        assert!(contract_pair(&g, EdgeId(0), EdgeId(1), VertexId(1)).is_err());
        assert!(contract_pair(&g, EdgeId(0), EdgeId(0), VertexId(2)).is_err());
        assert!(contract_pair(&g, EdgeId(0), EdgeId(2), VertexId(2)).is_err());
    }

    #[test]
    fn contraction_can_produce_a_self_loop() {
        // two parallel edges x-v, contracted at v, leave a loop at x
        let g = MultiGraph::new(
            (0..4).map(VertexId),
            vec![Edge::new(0, 2, 3), Edge::new(1, 2, 3), Edge::new(2, 0, 1)],
            (VertexId(0), VertexId(1)),
            vec![VertexId(0), VertexId(3)],
        )
        .unwrap();
        let (c, id) = contract_pair(&g, EdgeId(0), EdgeId(1), VertexId(2)).unwrap();
        assert!(c.edge(id).unwrap().is_loop());
    }

    #[test]
    fn reduce_self_loop_rejects_ordinary_edges() {
        assert!(reduce_self_loop(&h2(), EdgeId(0)).is_err());
    }

    #[test]
    fn r_current_wrong_boundary_is_zero() {
        let base = crate::graph::BaseGraph::from_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        let m = Current::new(&base, vec![1, 0]).unwrap();
        let r = r_current(&m, &[VertexId(0), VertexId(1)], (VertexId(0), VertexId(2))).unwrap();
        assert_eq!(r, 0);
    }

    fn special(f: SpecialFamily, k: usize, l: usize) -> MultiGraph {
        make_special(SpecialGraphSpec::new(f, k, l)).unwrap()
    }

    fn r(g: &MultiGraph) -> i128 {
        r_graph(g, &RestrictionSet::new()).unwrap()
    }

    #[test]
    fn special_graph_values() {
        use SpecialFamily::*;
        assert_eq!(r(&special(H, 2, 0)), -2);
        assert_eq!(r(&special(H, 3, 0)), 0);
        assert_eq!(r(&special(KI, 1, 0)), 1);
        assert_eq!(r(&special(KII, 1, 0)), 1);
        for p in [2, 3] {
            assert_eq!(r(&special(KI, p, 0)), 0);
            assert_eq!(r(&special(KII, p, 0)), 0);
        }
    }

    #[test]
    fn h21_restricted_single_partition() {
        let g = special(SpecialFamily::H, 2, 1);
        let rs = RestrictionSet::new().separate(3, 0).unwrap().separate(4, 1).unwrap();
        let parts = enumerate_partitions(&g, &rs).unwrap();
        assert_eq!(parts.len(), 1);
        let p = &parts[0];
        assert_eq!(p.n(), 1);
        assert_eq!(p.subgraphs[0], vec![EdgeId(0), EdgeId(1), EdgeId(2)]);
        assert!(p.subgraphs[1].is_empty());
        assert_eq!(p.subgraphs[2], vec![EdgeId(3), EdgeId(4)]);
        assert_eq!(signed_by_order(2, r_graph(&g, &rs).unwrap()), -1);
    }

    #[test]
    fn looped_k2_restricted_three_partitions() {
        let (g, lp) = special(SpecialFamily::KI, 2, 0)
            .with_edge(VertexId(1), VertexId(1))
            .unwrap();
        let rs = RestrictionSet::new()
            .separate(lp.0, 0)
            .unwrap()
            .separate(lp.0, 1)
            .unwrap();
        let parts = enumerate_partitions(&g, &rs).unwrap();
        assert_eq!(parts.len(), 3);
        assert_eq!(parts.iter().filter(|p| p.n() == 1).count(), 2);
        assert_eq!(r_graph(&g, &rs).unwrap(), 1);
        assert_eq!(r(&g), 3 * r(&reduce_self_loop(&g, lp).unwrap()));
    }

    #[test]
    fn h2_mixed_restriction() {
        let rs = RestrictionSet::new().separate(0, 1).unwrap().together(0, 2).unwrap();
        assert_eq!(r_graph(&h2(), &rs).unwrap(), -1);
    }

    #[test]
    fn r_current_matches_graph_on_h2() {
        let base = crate::graph::BaseGraph::from_pairs(6, &[(1, 2), (1, 3), (4, 5)]).unwrap();
        let m = Current::new(&base, vec![1, 1, 1]).unwrap();
        let s: Vec<_> = (1..=4).map(VertexId).collect();
        assert_eq!(r_current(&m, &s, (VertexId(1), VertexId(5))).unwrap(), -2);
    }
}
