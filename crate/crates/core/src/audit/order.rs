//! The dominance order on ordered pairs of colour groups, its incomparability relation,
//! and the ordered classes of that relation's transitive closure.
//!
//! `(i,j)` dominates `(i',j')` when every swap from colours in `A_i x A_j` to colours in
//! `A_i' x A_j'` is contradicting, i.e. `lo_i + lo_j > hi_i' + hi_j' + 4`.

use crate::audit::grouping::ColourGrouping;

/// Disjoint sets with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(len: usize) -> Self {
        Self {
            parent: (0..len).collect(),
            size: vec![1; len],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small] = big;
        self.size[big] += self.size[small];
        true
    }
}

pub type GroupPair = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairClassification {
    pub t: usize,
    lo: Vec<u64>,
    hi: Vec<u64>,
    /// `B_1..B_s`, each sorted; earlier classes dominate later ones.
    pub classes: Vec<Vec<GroupPair>>,
    class_of: Vec<usize>,
    /// Every element of an earlier class dominates every element of a later one.
    pub totally_ordered: bool,
    /// `s >= 2t - 1`.
    pub class_count_bound: bool,
    /// `(x,z)` and `(y,z)` (and `(z,x)`, `(z,y)`) fall in different classes whenever `x != y`.
    pub coordinate_separation: bool,
}

impl PairClassification {
    pub fn s(&self) -> usize {
        self.classes.len()
    }

    pub fn min_sum(&self, (i, j): GroupPair) -> u64 {
        self.lo[i] + self.lo[j]
    }

    pub fn max_sum(&self, (i, j): GroupPair) -> u64 {
        self.hi[i] + self.hi[j]
    }

    pub fn dominates(&self, p: GroupPair, q: GroupPair) -> bool {
        self.min_sum(p) > self.max_sum(q) + 4
    }

    pub fn incomparable(&self, p: GroupPair, q: GroupPair) -> bool {
        !self.dominates(p, q) && !self.dominates(q, p)
    }

    /// 0-based class index of a pair.
    pub fn class_of(&self, (i, j): GroupPair) -> usize {
        self.class_of[i * self.t + j]
    }

    pub fn pairs(&self) -> impl Iterator<Item = GroupPair> + '_ {
        let t = self.t;
        (0..t).flat_map(move |i| (0..t).map(move |j| (i, j)))
    }
}

pub fn classify_pairs(grouping: &ColourGrouping) -> PairClassification {
    let t = grouping.t();
    let mut c = PairClassification {
        t,
        lo: grouping.lo.clone(),
        hi: grouping.hi.clone(),
        classes: Vec::new(),
        class_of: vec![0; t * t],
        totally_ordered: true,
        class_count_bound: true,
        coordinate_separation: true,
    };
    let pairs: Vec<GroupPair> = c.pairs().collect();
    let idx = |(i, j): GroupPair| i * t + j;

    let mut uf = UnionFind::new(t * t);
    for (n, &p) in pairs.iter().enumerate() {
        for &q in &pairs[n + 1..] {
            if c.incomparable(p, q) {
                uf.union(idx(p), idx(q));
            }
        }
    }
    let mut by_root: std::collections::BTreeMap<usize, Vec<GroupPair>> = Default::default();
    for &p in &pairs {
        by_root.entry(uf.find(idx(p))).or_default().push(p);
    }
    let mut classes: Vec<Vec<GroupPair>> = by_root.into_values().collect();
    // if B dominates C then every min-sum in B exceeds every min-sum in C
    classes.sort_by_key(|class| {
        let top = class.iter().map(|&p| c.min_sum(p)).max().unwrap_or(0);
        (std::cmp::Reverse(top), class[0])
    });
    for (q, class) in classes.iter().enumerate() {
        for &p in class {
            c.class_of[idx(p)] = q;
        }
    }
    c.totally_ordered = classes.iter().enumerate().all(|(q, earlier)| {
        classes[q + 1..].iter().all(|later| {
            earlier
                .iter()
                .all(|&p| later.iter().all(|&r| c.dominates(p, r)))
        })
    });
    c.classes = classes;
    c.class_count_bound = c.s() + 1 >= 2 * t;
    c.coordinate_separation = (0..t).all(|z| {
        (0..t).all(|x| {
            (0..t).filter(|&y| y != x).all(|y| {
                c.class_of((x, z)) != c.class_of((y, z)) && c.class_of((z, x)) != c.class_of((z, y))
            })
        })
    });
    c
}
