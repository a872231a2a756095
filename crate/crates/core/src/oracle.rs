//! Exhaustive ground truth for small instances.
//!
//! Perfect matchings are enumerated by always pairing the smallest unmatched vertex,
//! which yields each of the `(V-1)!!` matchings exactly once. The top-level branch
//! (the partner of vertex 0) is the unit of parallel work, and partial results are
//! merged in branch order so the output equals a sequential run.

use serde::Serialize;

use crate::error::OracleError;
use crate::generate::rng;
use crate::model::{
    f_score, g_score, ColourHistogram, ColouredClique, PerfectMatching, ScoredMatching,
};
use crate::par::{map_range, map_slice, Exec};
use crate::search::is_local_minimum;

pub const DEFAULT_VERTEX_CAP: usize = 14;

/// `(v-1)!!` for even `v`.
pub fn matching_count(num_vertices: usize) -> u64 {
    (1..num_vertices as u64).step_by(2).product()
}

/// Iterator over every perfect matching of `K_v`, optionally restricted to those
/// containing the pair `{0, first}`.
#[derive(Debug, Clone)]
pub struct MatchingEnumerator {
    partner: Vec<usize>,
    stack: Vec<(usize, usize)>,
    started: bool,
    done: bool,
}

const UNMATCHED: usize = usize::MAX;

impl MatchingEnumerator {
    fn unchecked(num_vertices: usize, first: Option<usize>) -> Self {
        let mut partner = vec![UNMATCHED; num_vertices];
        if let Some(p) = first {
            partner[0] = p;
            partner[p] = 0;
        }
        Self {
            partner,
            stack: Vec::new(),
            started: false,
            done: false,
        }
    }

    fn next_free(&self, from: usize) -> Option<usize> {
        (from..self.partner.len()).find(|&w| self.partner[w] == UNMATCHED)
    }

    fn fill(&mut self) {
        while let Some(u) = self.next_free(0) {
            let v = self
                .next_free(u + 1)
                .expect("even vertex count leaves a partner");
            self.partner[u] = v;
            self.partner[v] = u;
            self.stack.push((u, v));
        }
    }

    fn snapshot(&self) -> PerfectMatching {
        PerfectMatching::from_partner(self.partner.clone())
    }
}

impl Iterator for MatchingEnumerator {
    type Item = PerfectMatching;

    fn next(&mut self) -> Option<PerfectMatching> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.fill();
            return Some(self.snapshot());
        }
        while let Some((u, v)) = self.stack.pop() {
            self.partner[u] = UNMATCHED;
            self.partner[v] = UNMATCHED;
            if let Some(w) = self.next_free(v + 1) {
                self.partner[u] = w;
                self.partner[w] = u;
                self.stack.push((u, w));
                self.fill();
                return Some(self.snapshot());
            }
        }
        self.done = true;
        None
    }
}

fn check_size(num_vertices: usize, cap: usize) -> Result<(), OracleError> {
    if num_vertices % 2 == 1 {
        return Err(OracleError::OddVertexCount(num_vertices));
    }
    if num_vertices > cap {
        return Err(OracleError::CapExceeded {
            vertices: num_vertices,
            cap,
        });
    }
    Ok(())
}

/// Streams every perfect matching of `K_v`, refusing sizes above `cap`.
pub fn enumerate_matchings(
    num_vertices: usize,
    cap: usize,
) -> Result<MatchingEnumerator, OracleError> {
    check_size(num_vertices, cap)?;
    Ok(MatchingEnumerator::unchecked(num_vertices, None))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub cap: usize,
    /// Maximum number of argmin matchings kept per score.
    pub argmin_cap: usize,
    pub exec: Exec,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            cap: DEFAULT_VERTEX_CAP,
            argmin_cap: 32,
            exec: Exec::Parallel,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalMinimum {
    pub matching: Vec<(usize, usize)>,
    pub f: u64,
    pub g: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub matching_count: u64,
    pub min_f: u64,
    pub min_g: u64,
    pub argmin_f: Vec<PerfectMatching>,
    pub argmin_g: Vec<PerfectMatching>,
    /// Swap-local minima of `g`, in enumeration order.
    pub local_minima: Vec<(PerfectMatching, u64, u64)>,
}

impl OracleResult {
    pub fn is_enumerated_local_minimum(&self, matching: &PerfectMatching) -> bool {
        self.local_minima.iter().any(|(m, _, _)| m == matching)
    }

    /// Largest `f` among swap-local minima of `g`.
    pub fn max_local_min_f(&self) -> Option<u64> {
        self.local_minima.iter().map(|&(_, f, _)| f).max()
    }

    pub fn local_minima_rows(&self) -> Vec<LocalMinimum> {
        self.local_minima
            .iter()
            .map(|(m, f, g)| LocalMinimum {
                matching: m.canonical_pairs(),
                f: *f,
                g: *g,
            })
            .collect()
    }
}

struct Argmin {
    value: u64,
    items: Vec<PerfectMatching>,
}

impl Argmin {
    fn new() -> Self {
        Self {
            value: u64::MAX,
            items: Vec::new(),
        }
    }

    fn offer(&mut self, value: u64, m: &PerfectMatching, cap: usize) {
        if value < self.value {
            self.value = value;
            self.items.clear();
        }
        if value == self.value && self.items.len() < cap {
            self.items.push(m.clone());
        }
    }

    fn merge(&mut self, other: Argmin, cap: usize) {
        if other.value < self.value {
            *self = other;
        } else if other.value == self.value {
            let room = cap - self.items.len();
            self.items.extend(other.items.into_iter().take(room));
        }
    }
}

struct Partial {
    count: u64,
    f: Argmin,
    g: Argmin,
    local: Vec<(PerfectMatching, u64, u64)>,
}

fn scan_branch(
    clique: &ColouredClique,
    first: usize,
    argmin_cap: usize,
) -> Partial {
    let mut part = Partial {
        count: 0,
        f: Argmin::new(),
        g: Argmin::new(),
        local: Vec::new(),
    };
    let mut counts = vec![0u64; clique.k()];
    for m in MatchingEnumerator::unchecked(clique.num_vertices(), Some(first)) {
        counts.iter_mut().for_each(|c| *c = 0);
        for &(u, v) in m.pairs() {
            counts[clique.colour(u, v) as usize - 1] += 1;
        }
        let hist = ColourHistogram::from_counts(counts.clone());
        let (f, g) = (f_score(&hist, clique.n()), g_score(&hist));
        part.count += 1;
        part.f.offer(f, &m, argmin_cap);
        part.g.offer(g, &m, argmin_cap);
        let state = ScoredMatching::new(clique, m).expect("enumerated matching fits clique");
        if is_local_minimum(clique, &state) {
            part.local.push((state.into_matching(), f, g));
        }
    }
    part
}

/// Exact `min f`, `min g` and the full set of swap-local minima of `g`.
pub fn exact_minima(
    clique: &ColouredClique,
    config: &OracleConfig,
) -> Result<OracleResult, OracleError> {
    let v = clique.num_vertices();
    check_size(v, config.cap)?;
    let parts = map_range(config.exec, 1..v, |first| {
        scan_branch(clique, first, config.argmin_cap)
    });
    let mut count = 0;
    let mut f = Argmin::new();
    let mut g = Argmin::new();
    let mut local = Vec::new();
    for p in parts {
        count += p.count;
        f.merge(p.f, config.argmin_cap);
        g.merge(p.g, config.argmin_cap);
        local.extend(p.local);
    }
    Ok(OracleResult {
        matching_count: count,
        min_f: f.value,
        min_g: g.value,
        argmin_f: f.items,
        argmin_g: g.items,
        local_minima: local,
    })
}

const K6_EDGES: usize = 15;
const K6_SHARE: usize = 5;
/// `C(15,5) * C(10,5)` balanced 3-colourings of `K_6`.
pub const K6_COLOURINGS: u64 = 3003 * 252;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum K6Mode {
    Exhaustive,
    Sampled { seed: u64, count: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct K6Report {
    pub colourings_checked: u64,
    /// Max over colourings of the min `f` over the 15 perfect matchings.
    pub max_min_f: u64,
    /// Smallest enumeration index attaining `max_min_f`.
    pub witness_index: u64,
    pub witness: ColouredClique,
    /// Colourings with no colour-balanced perfect matching.
    pub positive_min_f: u64,
    /// `min_f_counts[f]` colourings have min `f` equal to `f`.
    pub min_f_counts: Vec<u64>,
}

/// Lexicographic `r`-subsets of `0..n`.
fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..=n - (r - cur.len()) {
            cur.push(i);
            rec(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, r, &mut Vec::with_capacity(r), &mut out);
    out
}

struct K6Tables {
    first: Vec<u16>,
    // positions 0..10 into the complement of the first mask
    second: Vec<Vec<usize>>,
    matchings: Vec<u16>,
}

impl K6Tables {
    fn build() -> Self {
        let mask = |idx: &[usize]| idx.iter().fold(0u16, |m, &i| m | (1 << i));
        let first = combinations(K6_EDGES, K6_SHARE)
            .iter()
            .map(|c| mask(c))
            .collect();
        let second = combinations(K6_EDGES - K6_SHARE, K6_SHARE);
        let matchings = MatchingEnumerator::unchecked(6, None)
            .map(|m| {
                m.pairs()
                    .iter()
                    .fold(0u16, |acc, &(u, v)| acc | (1 << crate::model::edge_index(u, v, 6)))
            })
            .collect();
        Self {
            first,
            second,
            matchings,
        }
    }

    fn masks(&self, index: u64) -> (u16, u16) {
        let per = self.second.len() as u64;
        let c1 = self.first[(index / per) as usize];
        let free: Vec<usize> = (0..K6_EDGES).filter(|&e| c1 & (1 << e) == 0).collect();
        let c2 = self.second[(index % per) as usize]
            .iter()
            .fold(0u16, |m, &p| m | (1 << free[p]));
        (c1, c2)
    }

    fn min_f(&self, c1: u16, c2: u16) -> u64 {
        self.matchings
            .iter()
            .map(|&m| {
                let a = (m & c1).count_ones() as i64;
                let b = (m & c2).count_ones() as i64;
                let c = 3 - a - b;
                ((a - 1).abs() + (b - 1).abs() + (c - 1).abs()) as u64
            })
            .min()
            .expect("K6 has matchings")
    }

    fn clique(&self, index: u64) -> ColouredClique {
        let (c1, c2) = self.masks(index);
        let colours = (0..K6_EDGES)
            .map(|e| {
                if c1 & (1 << e) != 0 {
                    1
                } else if c2 & (1 << e) != 0 {
                    2
                } else {
                    3
                }
            })
            .collect();
        ColouredClique::new(1, 3, colours).expect("15 colours in 1..=3")
    }
}

/// The balanced 3-colouring of `K_6` with the given enumeration index: colour 1 takes the
/// `index / 252`-th lexicographic 5-subset of edges, colour 2 the `index % 252`-th
/// 5-subset of the remaining ten.
pub fn k6_colouring(index: u64) -> ColouredClique {
    assert!(index < K6_COLOURINGS);
    K6Tables::build().clique(index)
}

#[derive(Clone)]
struct K6Partial {
    checked: u64,
    max: u64,
    witness: u64,
    positive: u64,
    counts: Vec<u64>,
}

impl K6Partial {
    fn empty() -> Self {
        Self {
            checked: 0,
            max: 0,
            witness: u64::MAX,
            positive: 0,
            counts: vec![0; 5],
        }
    }

    fn record(&mut self, index: u64, f: u64) {
        self.checked += 1;
        self.counts[f as usize] += 1;
        if f > 0 {
            self.positive += 1;
        }
        if f > self.max || (f == self.max && index < self.witness) {
            self.max = f;
            self.witness = index;
        }
    }

    fn merge(mut self, other: K6Partial) -> Self {
        self.checked += other.checked;
        self.positive += other.positive;
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        if other.max > self.max || (other.max == self.max && other.witness < self.witness) {
            self.max = other.max;
            self.witness = other.witness;
        }
        self
    }
}

/// Max over balanced 3-colourings of `K_6` of the best achievable `f`.
pub fn k6_search(mode: K6Mode, exec: Exec) -> K6Report {
    let tables = K6Tables::build();
    let per = tables.second.len() as u64;
    let total = match mode {
        K6Mode::Exhaustive => {
            let parts = map_range(exec, 0..tables.first.len(), |i| {
                let mut part = K6Partial::empty();
                for j in 0..per {
                    let index = i as u64 * per + j;
                    let (c1, c2) = tables.masks(index);
                    part.record(index, tables.min_f(c1, c2));
                }
                part
            });
            parts.into_iter().fold(K6Partial::empty(), K6Partial::merge)
        }
        K6Mode::Sampled { seed, count } => {
            use rand::Rng;
            let mut r = rng(seed);
            let indices: Vec<u64> = (0..count)
                .map(|_| r.random_range(0..K6_COLOURINGS))
                .collect();
            let parts = map_slice(exec, &indices, |&index| {
                let (c1, c2) = tables.masks(index);
                (index, tables.min_f(c1, c2))
            });
            let mut acc = K6Partial::empty();
            for (index, f) in parts {
                acc.record(index, f);
            }
            acc
        }
    };
    let witness = tables.clique(total.witness.min(K6_COLOURINGS - 1));
    K6Report {
        colourings_checked: total.checked,
        max_min_f: total.max,
        witness_index: total.witness,
        witness,
        positive_min_f: total.positive,
        min_f_counts: total.counts,
    }
}
