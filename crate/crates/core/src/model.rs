//! Instances, matchings, colour histograms, the two scores and exact swap deltas.
//!
//! Vertices are `0..2nk`, colours are `1..=k`, and edges `{u, v}` with `u < v`
//! are indexed in lexicographic order: `(0,1), (0,2), .., (0,V-1), (1,2), ..`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::ModelError;

pub type Colour = u32;

/// Number of edges of `K_v`.
pub fn edge_count(num_vertices: usize) -> usize {
    num_vertices * num_vertices.saturating_sub(1) / 2
}

/// Lexicographic index of edge `{u, v}` in `K_v`. Order of `u` and `v` does not matter.
pub fn edge_index(u: usize, v: usize, num_vertices: usize) -> usize {
    let (u, v) = if u < v { (u, v) } else { (v, u) };
    debug_assert!(u != v && v < num_vertices);
    u * num_vertices - u * (u + 1) / 2 + (v - u - 1)
}

/// All edges of `K_v` in lexicographic order.
pub fn edges(num_vertices: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..num_vertices).flat_map(move |u| (u + 1..num_vertices).map(move |v| (u, v)))
}

/// An edge colouring of `K_{2nk}` with palette `1..=k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColouredClique {
    n: usize,
    k: usize,
    colours: Vec<Colour>,
    // dense V x V lookup, diagonal unused
    table: Vec<Colour>,
}

impl ColouredClique {
    pub fn new(n: usize, k: usize, colours: Vec<Colour>) -> Result<Self, ModelError> {
        if n == 0 || k == 0 {
            return Err(ModelError::NonPositiveParameters { n, k });
        }
        let vertices = 2 * n * k;
        let expected = edge_count(vertices);
        if colours.len() != expected {
            return Err(ModelError::ColourCount {
                vertices,
                expected,
                found: colours.len(),
            });
        }
        if let Some((edge, &colour)) = colours
            .iter()
            .enumerate()
            .find(|(_, &c)| c == 0 || c as usize > k)
        {
            return Err(ModelError::ColourOutOfRange { edge, colour, k });
        }
        let mut table = vec![0; vertices * vertices];
        for ((u, v), &c) in edges(vertices).zip(&colours) {
            table[u * vertices + v] = c;
            table[v * vertices + u] = c;
        }
        Ok(Self {
            n,
            k,
            colours,
            table,
        })
    }

    /// Every edge coloured `colour`; balanced only when `k == 1`.
    pub fn monochromatic(n: usize, k: usize, colour: Colour) -> Result<Self, ModelError> {
        let vertices = 2 * n * k;
        Self::new(n, k, vec![colour; edge_count(vertices)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn num_vertices(&self) -> usize {
        2 * self.n * self.k
    }

    /// Number of edges in a perfect matching, `nk`.
    pub fn matching_size(&self) -> usize {
        self.n * self.k
    }

    /// Colours in lexicographic edge order.
    pub fn colours(&self) -> &[Colour] {
        &self.colours
    }

    #[inline]
    pub fn colour(&self, u: usize, v: usize) -> Colour {
        self.table[u * self.num_vertices() + v]
    }

    /// How many edges carry each colour; index `c - 1`.
    pub fn colour_totals(&self) -> Vec<u64> {
        let mut totals = vec![0u64; self.k];
        for &c in &self.colours {
            totals[c as usize - 1] += 1;
        }
        totals
    }

    /// Edges per colour in a balanced colouring: `n(2nk - 1)`.
    pub fn balanced_share(&self) -> u64 {
        (self.n * (self.num_vertices() - 1)) as u64
    }

    pub fn is_balanced(&self) -> bool {
        let share = self.balanced_share();
        self.colour_totals().iter().all(|&t| t == share)
    }
}

/// A perfect matching on `0..V`. Equality ignores the order in which pairs are stored.
#[derive(Debug, Clone)]
pub struct PerfectMatching {
    pairs: Vec<(usize, usize)>,
    partner: Vec<usize>,
}

impl PartialEq for PerfectMatching {
    fn eq(&self, other: &Self) -> bool {
        self.partner == other.partner
    }
}

impl Eq for PerfectMatching {}

impl std::hash::Hash for PerfectMatching {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.partner.hash(state);
    }
}

impl PerfectMatching {
    /// Validates that `pairs` is a disjoint cover of `0..num_vertices`. Each pair is stored with `u < v`.
    pub fn new(pairs: Vec<(usize, usize)>, num_vertices: usize) -> Result<Self, ModelError> {
        if 2 * pairs.len() != num_vertices {
            return Err(ModelError::DimensionMismatch {
                expected: num_vertices,
                found: 2 * pairs.len(),
            });
        }
        let mut partner = vec![usize::MAX; num_vertices];
        let mut normalised = Vec::with_capacity(pairs.len());
        for (u, v) in pairs {
            for w in [u, v] {
                if w >= num_vertices {
                    return Err(ModelError::VertexOutOfRange {
                        vertex: w,
                        vertices: num_vertices,
                    });
                }
            }
            if u == v || partner[u] != usize::MAX {
                return Err(ModelError::RepeatedVertex(u));
            }
            if partner[v] != usize::MAX {
                return Err(ModelError::RepeatedVertex(v));
            }
            partner[u] = v;
            partner[v] = u;
            normalised.push((u.min(v), u.max(v)));
        }
        if let Some(missing) = partner.iter().position(|&p| p == usize::MAX) {
            return Err(ModelError::MissingVertex(missing));
        }
        Ok(Self {
            pairs: normalised,
            partner,
        })
    }

    /// Builds from a partner table; used by the enumerator, which already guarantees validity.
    pub(crate) fn from_partner(partner: Vec<usize>) -> Self {
        let pairs = partner
            .iter()
            .enumerate()
            .filter(|&(u, &v)| u < v)
            .map(|(u, &v)| (u, v))
            .collect();
        Self { pairs, partner }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn partner(&self, v: usize) -> usize {
        self.partner[v]
    }

    pub fn partners(&self) -> &[usize] {
        &self.partner
    }

    pub fn num_vertices(&self) -> usize {
        self.partner.len()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Pairs sorted by their smaller endpoint.
    pub fn canonical_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = self.pairs.clone();
        pairs.sort_unstable();
        pairs
    }

    pub fn contains_edge(&self, u: usize, v: usize) -> bool {
        self.partner[u] == v
    }
}

impl std::fmt::Display for PerfectMatching {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, (u, v)) in self.canonical_pairs().into_iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{u}-{v}")?;
        }
        Ok(())
    }
}

/// Colour counts `m_1..m_k` of a matching.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColourHistogram {
    counts: Vec<u64>,
}

impl ColourHistogram {
    pub fn from_counts(counts: Vec<u64>) -> Self {
        Self { counts }
    }

    /// Count for colour `c` (1-based).
    pub fn count(&self, c: Colour) -> u64 {
        self.counts[c as usize - 1]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn k(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Counts matching edges of each colour.
pub fn compute_histogram(
    clique: &ColouredClique,
    matching: &PerfectMatching,
) -> Result<ColourHistogram, ModelError> {
    if matching.num_vertices() != clique.num_vertices() {
        return Err(ModelError::DimensionMismatch {
            expected: clique.num_vertices(),
            found: matching.num_vertices(),
        });
    }
    let mut counts = vec![0u64; clique.k()];
    for &(u, v) in matching.pairs() {
        counts[clique.colour(u, v) as usize - 1] += 1;
    }
    Ok(ColourHistogram { counts })
}

/// `f = sum |m_i - n|`.
pub fn f_score(hist: &ColourHistogram, n: usize) -> u64 {
    let n = n as u64;
    hist.counts.iter().map(|&m| m.abs_diff(n)).sum()
}

/// `g = sum m_i^2`.
pub fn g_score(hist: &ColourHistogram) -> u64 {
    hist.counts.iter().map(|&m| m * m).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Scores {
    pub f: u64,
    pub g: u64,
}

impl Scores {
    pub fn of(hist: &ColourHistogram, n: usize) -> Self {
        Self {
            f: f_score(hist, n),
            g: g_score(hist),
        }
    }
}

/// Number of matching edges sharing the colour of edge `{u, v}`.
pub fn weight(clique: &ColouredClique, hist: &ColourHistogram, u: usize, v: usize) -> u64 {
    hist.count(clique.colour(u, v))
}

/// Which cross pairing replaces two matching edges `{u,v}, {x,y}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Reconnection {
    /// `{u,x}, {v,y}`
    Cross1,
    /// `{u,y}, {v,x}`
    Cross2,
}

impl Reconnection {
    pub const ALL: [Reconnection; 2] = [Reconnection::Cross1, Reconnection::Cross2];

    pub fn name(self) -> &'static str {
        match self {
            Reconnection::Cross1 => "cross-1",
            Reconnection::Cross2 => "cross-2",
        }
    }
}

/// A swap of two matching pairs (by position in [`PerfectMatching::pairs`]) with its exact change in `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SwapMove {
    pub edge_a: usize,
    pub edge_b: usize,
    pub reconnection: Reconnection,
    pub delta_g: i64,
}

fn check_pair_indices(matching: &PerfectMatching, a: usize, b: usize) -> Result<(), ModelError> {
    if a == b || a >= matching.len() || b >= matching.len() {
        return Err(ModelError::InvalidMove {
            a,
            b,
            pairs: matching.len(),
        });
    }
    Ok(())
}

/// The two edges that replace pairs `a` and `b`.
#[inline]
pub fn reconnected_edges(
    matching: &PerfectMatching,
    a: usize,
    b: usize,
    reconnection: Reconnection,
) -> ((usize, usize), (usize, usize)) {
    let (u, v) = matching.pairs[a];
    let (x, y) = matching.pairs[b];
    match reconnection {
        Reconnection::Cross1 => ((u, x), (v, y)),
        Reconnection::Cross2 => ((u, y), (v, x)),
    }
}

/// Change of `sum m^2` when two colours lose an edge and two gain one.
#[inline]
fn histogram_delta(counts: &[u64], removed: [Colour; 2], added: [Colour; 2]) -> i64 {
    let mut touched: [(Colour, i64); 4] = [(0, 0); 4];
    let mut len = 0;
    let changes = [
        (removed[0], -1),
        (removed[1], -1),
        (added[0], 1),
        (added[1], 1),
    ];
    for (c, d) in changes {
        match touched[..len].iter_mut().find(|(tc, _)| *tc == c) {
            Some(slot) => slot.1 += d,
            None => {
                touched[len] = (c, d);
                len += 1;
            }
        }
    }
    touched[..len]
        .iter()
        .map(|&(c, d)| {
            let m = counts[c as usize - 1] as i64;
            2 * m * d + d * d
        })
        .sum()
}

#[inline]
fn delta_unchecked(
    clique: &ColouredClique,
    matching: &PerfectMatching,
    counts: &[u64],
    a: usize,
    b: usize,
    reconnection: Reconnection,
) -> i64 {
    let (u, v) = matching.pairs[a];
    let (x, y) = matching.pairs[b];
    let (e1, e2) = reconnected_edges(matching, a, b, reconnection);
    histogram_delta(
        counts,
        [clique.colour(u, v), clique.colour(x, y)],
        [clique.colour(e1.0, e1.1), clique.colour(e2.0, e2.1)],
    )
}

/// `g(M') - g(M)` for the swap of pairs `a`, `b`, in O(1) from the four colours involved.
pub fn swap_delta_g(
    clique: &ColouredClique,
    matching: &PerfectMatching,
    hist: &ColourHistogram,
    a: usize,
    b: usize,
    reconnection: Reconnection,
) -> Result<i64, ModelError> {
    check_pair_indices(matching, a, b)?;
    Ok(delta_unchecked(
        clique,
        matching,
        &hist.counts,
        a,
        b,
        reconnection,
    ))
}

/// Returns the matching with pairs `edge_a`, `edge_b` reconnected. The new edges keep
/// the positions of the old ones.
pub fn apply_swap(matching: &PerfectMatching, mv: &SwapMove) -> Result<PerfectMatching, ModelError> {
    check_pair_indices(matching, mv.edge_a, mv.edge_b)?;
    let mut next = matching.clone();
    next.reconnect(mv.edge_a, mv.edge_b, mv.reconnection);
    Ok(next)
}

impl PerfectMatching {
    fn reconnect(&mut self, a: usize, b: usize, reconnection: Reconnection) {
        let (e1, e2) = reconnected_edges(self, a, b, reconnection);
        for (slot, (p, q)) in [(a, e1), (b, e2)] {
            self.partner[p] = q;
            self.partner[q] = p;
            self.pairs[slot] = (p.min(q), p.max(q));
        }
    }
}

/// Average weights `(w(M)/|M|, w(E\M)/|E\M|)` as exact rationals, summed edge by edge.
pub fn average_weights(
    clique: &ColouredClique,
    matching: &PerfectMatching,
) -> Result<(BigRational, BigRational), ModelError> {
    let hist = compute_histogram(clique, matching)?;
    let nk = clique.matching_size();
    if nk < 2 {
        return Err(ModelError::DegenerateInstance(nk));
    }
    let (mut in_m, mut out_m) = (0u64, 0u64);
    for (u, v) in edges(clique.num_vertices()) {
        let w = weight(clique, &hist, u, v);
        if matching.contains_edge(u, v) {
            in_m += w;
        } else {
            out_m += w;
        }
    }
    let outside = (edge_count(clique.num_vertices()) - nk) as u64;
    Ok((
        BigRational::new(BigInt::from(in_m), BigInt::from(nk as u64)),
        BigRational::new(BigInt::from(out_m), BigInt::from(outside)),
    ))
}

/// A matching together with its cached histogram and `g`, updated incrementally by swaps.
#[derive(Debug, Clone)]
pub struct ScoredMatching {
    matching: PerfectMatching,
    hist: ColourHistogram,
    g: u64,
}

impl ScoredMatching {
    pub fn new(clique: &ColouredClique, matching: PerfectMatching) -> Result<Self, ModelError> {
        let hist = compute_histogram(clique, &matching)?;
        let g = g_score(&hist);
        Ok(Self { matching, hist, g })
    }

    pub fn matching(&self) -> &PerfectMatching {
        &self.matching
    }

    pub fn into_matching(self) -> PerfectMatching {
        self.matching
    }

    pub fn histogram(&self) -> &ColourHistogram {
        &self.hist
    }

    pub fn g(&self) -> u64 {
        self.g
    }

    pub fn scores(&self, n: usize) -> Scores {
        Scores {
            f: f_score(&self.hist, n),
            g: self.g,
        }
    }

    /// Number of swaps in the neighbourhood, `2 * C(nk, 2)`.
    pub fn neighbourhood_size(&self) -> usize {
        let p = self.matching.len();
        p * p.saturating_sub(1)
    }

    /// Delta for a pair of positions known to be valid.
    #[inline]
    pub(crate) fn delta(
        &self,
        clique: &ColouredClique,
        a: usize,
        b: usize,
        reconnection: Reconnection,
    ) -> i64 {
        delta_unchecked(clique, &self.matching, &self.hist.counts, a, b, reconnection)
    }

    pub fn evaluate(
        &self,
        clique: &ColouredClique,
        a: usize,
        b: usize,
        reconnection: Reconnection,
    ) -> Result<SwapMove, ModelError> {
        let delta_g = swap_delta_g(clique, &self.matching, &self.hist, a, b, reconnection)?;
        Ok(SwapMove {
            edge_a: a,
            edge_b: b,
            reconnection,
            delta_g,
        })
    }

    /// Applies `mv` in place, updating the histogram and `g` incrementally.
    /// Debug builds recompute both from scratch and compare.
    pub fn apply(&mut self, clique: &ColouredClique, mv: &SwapMove) -> Result<(), ModelError> {
        check_pair_indices(&self.matching, mv.edge_a, mv.edge_b)?;
        let (u, v) = self.matching.pairs[mv.edge_a];
        let (x, y) = self.matching.pairs[mv.edge_b];
        let before = [clique.colour(u, v), clique.colour(x, y)];
        let delta = self.delta(clique, mv.edge_a, mv.edge_b, mv.reconnection);
        self.matching.reconnect(mv.edge_a, mv.edge_b, mv.reconnection);
        let (p, q) = self.matching.pairs[mv.edge_a];
        let (r, s) = self.matching.pairs[mv.edge_b];
        for c in before {
            self.hist.counts[c as usize - 1] -= 1;
        }
        for c in [clique.colour(p, q), clique.colour(r, s)] {
            self.hist.counts[c as usize - 1] += 1;
        }
        self.g = self
            .g
            .checked_add_signed(delta)
            .expect("g underflow: delta inconsistent with histogram");
        debug_assert_eq!(
            compute_histogram(clique, &self.matching).as_ref(),
            Ok(&self.hist)
        );
        debug_assert_eq!(g_score(&self.hist), self.g);
        debug_assert_eq!(delta, mv.delta_g, "stale delta on applied move");
        Ok(())
    }
}
