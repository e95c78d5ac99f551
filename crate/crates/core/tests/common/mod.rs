//! Random generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use gbsknot::graph::RawEdge;
use gbsknot::{expand, KnotVerdict, LabeledGraph, NKnot, OneKnot, SpanningTree, Word};
use num_bigint::BigInt;
use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn nonzero_label<R: Rng>(rng: &mut R, bound: i64) -> i64 {
    loop {
        let x = rng.gen_range(-bound..=bound);
        if x != 0 {
            return x;
        }
    }
}

/// Connected graph on `1..=max_vertices` vertices: a random tree plus
/// `extra` further edges (loops allowed).
pub fn random_graph<R: Rng>(rng: &mut R, max_vertices: usize, extra: usize, bound: i64) -> LabeledGraph {
    let n = rng.gen_range(1..=max_vertices);
    let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::new();
    let add = |rng: &mut R, a: usize, b: usize, edges: &mut Vec<RawEdge>| {
        let id = format!("e{}", edges.len());
        edges.push(RawEdge::new(
            &id,
            &vertices[a],
            nonzero_label(rng, bound),
            &vertices[b],
            nonzero_label(rng, bound),
        ));
    };
    for v in 1..n {
        let parent = rng.gen_range(0..v);
        add(rng, parent, v, &mut edges);
    }
    for _ in 0..extra {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        add(rng, a, b, &mut edges);
    }
    LabeledGraph::new(vertices, edges).expect("generator builds valid graphs")
}

/// Signed divisors of `x`.
pub fn divisors(x: &BigInt) -> Vec<BigInt> {
    let n: i64 = x.try_into().expect("small label");
    let n = n.abs();
    (1..=n)
        .filter(|d| n % d == 0)
        .flat_map(|d| [BigInt::from(d), BigInt::from(-d)])
        .collect()
}

/// One expansion at a random edge end with a random factorization.
pub fn random_expand<R: Rng>(rng: &mut R, g: &LabeledGraph) -> LabeledGraph {
    let e = g.edges().choose(rng).expect("graph has an edge").clone();
    let end = rng.gen_range(0..2);
    let m = divisors(&e.labels[end]).choose(rng).unwrap().clone();
    let n = &e.labels[end] / &m;
    expand(g, &e.id, end, &m, &n).expect("valid factorization")
}

/// Spanning tree from a random edge order (randomized Kruskal).
pub fn random_spanning_tree<R: Rng>(rng: &mut R, g: &LabeledGraph) -> SpanningTree {
    let mut order: Vec<usize> = (0..g.edges().len()).collect();
    order.shuffle(rng);
    let mut comp: Vec<usize> = (0..g.vertices().len()).collect();
    fn find(c: &mut Vec<usize>, x: usize) -> usize {
        if c[x] != x {
            let r = find(c, c[x]);
            c[x] = r;
        }
        c[x]
    }
    let mut ids = Vec::new();
    for i in order {
        let e = &g.edges()[i];
        let (a, b) = (find(&mut comp, e.ends[0]), find(&mut comp, e.ends[1]));
        if a != b {
            comp[a] = b;
            ids.push(e.id.clone());
        }
    }
    SpanningTree::from_edge_ids(g, &ids).expect("kruskal gives a spanning tree")
}

/// Verdicts with free-text reasons dropped and unordered pairs sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Summary {
    Yes(BigInt, BigInt),
    YesTorus(BigInt, BigInt),
    YesBs(BigInt, BigInt),
    No,
    Unknot,
}

fn sorted(a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
    if a <= b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    }
}

pub fn summarize(v: &KnotVerdict) -> (Summary, Summary) {
    let one = match &v.one_knot {
        OneKnot::Yes { p, q, .. } => {
            let (a, b) = sorted(p, q);
            Summary::Yes(a, b)
        }
        OneKnot::No(_) => Summary::No,
        OneKnot::Unknot => Summary::Unknot,
    };
    let n = match &v.n_knot_ge3 {
        NKnot::Yes(gbsknot::KnotSource::TorusImage { k, l }) => {
            let (a, b) = sorted(k, l);
            Summary::YesTorus(a, b)
        }
        NKnot::Yes(gbsknot::KnotSource::BsImage { k, l }) => {
            let (a, b) = sorted(k, l);
            Summary::YesBs(a, b)
        }
        NKnot::No(_) => Summary::No,
        NKnot::Unknot => Summary::Unknot,
    };
    (one, n)
}

/// gcd of all `i x i` minors, for `i = 1..=min(rows, cols)`, by direct
/// cofactor expansion.
pub fn minor_gcds(m: &[Vec<i64>]) -> Vec<i128> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    for i in 1..=rows.min(cols) {
        let mut g: i128 = 0;
        for rs in subsets(rows, i) {
            for cs in subsets(cols, i) {
                let sub: Vec<Vec<i128>> = rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| m[r][c] as i128).collect())
                    .collect();
                g = g.gcd(&det(&sub));
            }
        }
        out.push(g);
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut with: Vec<Vec<usize>> = subsets(n - 1, k - 1);
    for s in &mut with {
        s.push(n - 1);
    }
    let mut out = subsets(n - 1, k);
    out.extend(with);
    out
}

fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i128>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * det(&minor)
        })
        .sum()
}

/// Letters of `<a, t>`: `1 = a`, `-1 = a^-1`, `2 = t`, `-2 = t^-1`.
pub type Letters = Vec<i8>;

pub fn free_reduce(w: &[i8]) -> Letters {
    let mut out: Letters = Vec::with_capacity(w.len());
    for &x in w {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

pub fn to_word(w: &[i8]) -> Word {
    let mut out = Word::identity();
    for &x in w {
        let sym = if x.abs() == 1 { "a" } else { "t" };
        out.push(sym.to_string(), BigInt::from(x.signum()));
    }
    out
}

/// `t^-1 a^p t a^-q`.
pub fn bs_relator(p: usize, q: usize) -> Letters {
    let mut r = vec![-2];
    r.extend(std::iter::repeat(1).take(p));
    r.push(2);
    r.extend(std::iter::repeat(-1).take(q));
    r
}

/// Freely reduced words of length at most `bound` that are trivial in
/// `<a, t | r>`, found by breadth-first search from the empty word. A move
/// inserts a cyclic conjugate of `r` or `r^-1` anywhere and freely reduces;
/// this realizes every replacement `u -> v` with `u v^-1` a relator piece.
/// Intermediate words are capped at `bound`.
pub fn trivial_words(relator: &[i8], bound: usize) -> HashSet<Letters> {
    let inv: Letters = relator.iter().rev().map(|x| -x).collect();
    let mut pieces: Vec<Letters> = Vec::new();
    for r in [relator.to_vec(), inv] {
        for k in 0..r.len() {
            let mut c = r[k..].to_vec();
            c.extend_from_slice(&r[..k]);
            let c = free_reduce(&c);
            if !pieces.contains(&c) {
                pieces.push(c);
            }
        }
    }
    let mut seen: HashSet<Letters> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(vec![]);
    queue.push_back(vec![]);
    while let Some(w) = queue.pop_front() {
        for pos in 0..=w.len() {
            for c in &pieces {
                let mut x = w[..pos].to_vec();
                x.extend_from_slice(c);
                x.extend_from_slice(&w[pos..]);
                let x = free_reduce(&x);
                if x.len() <= bound && seen.insert(x.clone()) {
                    queue.push_back(x);
                }
            }
        }
    }
    seen
}

/// All words over `{a, a^-1, t, t^-1}` of length at most `n`.
pub fn all_words(n: usize) -> Vec<Letters> {
    let mut out = vec![vec![]];
    let mut layer: Vec<Letters> = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &layer {
            for x in [1i8, -1, 2, -2] {
                let mut v = w.clone();
                v.push(x);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Segment `a1 - a2 - ... - a(s+1)` with `gcd(l_i, k_j) = 1` for all i, j
/// and every |label| in `2..=bound`.
pub fn random_coprime_segment<R: Rng>(rng: &mut R, max_edges: usize, bound: i64) -> LabeledGraph {
    loop {
        let s = rng.gen_range(1..=max_edges);
        let pick = |rng: &mut R| {
            let x = rng.gen_range(2..=bound);
            if rng.gen_bool(0.25) {
                -x
            } else {
                x
            }
        };
        let ks: Vec<i64> = (0..s).map(|_| pick(rng)).collect();
        let ls: Vec<i64> = (0..s).map(|_| pick(rng)).collect();
        if ls.iter().all(|l| ks.iter().all(|k| l.gcd(k) == 1)) {
            let edges = (0..s)
                .map(|i| RawEdge::new(format!("e{}", i + 1), format!("a{}", i + 1), ks[i], format!("a{}", i + 2), ls[i]))
                .collect();
            return LabeledGraph::new(Vec::<String>::new(), edges).unwrap();
        }
    }
}
