//! The modular homomorphism `Δ: π₁ → Q*`, evaluated on the edge generators.
//!
//! For an edge `e` outside the spanning tree, `Δ(t_e)` is the product of
//! `(label where the walk enters an edge) / (label where it leaves)` along the
//! closed walk that follows the tree from `∂1 e` to `∂0 e` and returns through
//! `e`. Vertex generators are elliptic and always map to 1.

use std::collections::VecDeque;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::graph::{Edge, LabeledGraph, SpanningTree};
use crate::snf::{hermite_normal_form, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModularError {
    #[error("edge `{0}` lies in the spanning tree")]
    EdgeInTree(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
}

/// Nonzero rational in lowest terms with positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReducedFraction {
    num: BigInt,
    den: BigInt,
}

impl ReducedFraction {
    pub fn new(num: BigInt, den: BigInt) -> Self {
        assert!(!num.is_zero() && !den.is_zero(), "zero in modular fraction");
        let g = num.gcd(&den);
        let (mut num, mut den) = (num / &g, den / &g);
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        ReducedFraction { num, den }
    }

    pub fn one() -> Self {
        ReducedFraction {
            num: BigInt::one(),
            den: BigInt::one(),
        }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn mul(&self, other: &ReducedFraction) -> ReducedFraction {
        ReducedFraction::new(&self.num * &other.num, &self.den * &other.den)
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_minus_one(&self) -> bool {
        self.den.is_one() && self.num == BigInt::from(-1)
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }
}

impl fmt::Display for ReducedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModularTag {
    Trivial,
    PlusMinusOne,
    General,
}

impl fmt::Display for ModularTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModularTag::Trivial => "trivial",
            ModularTag::PlusMinusOne => "plus_minus_one",
            ModularTag::General => "general",
        })
    }
}

/// Generators of `Δ(G) ⊆ Q*`, one per edge outside the spanning tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModularImage {
    pub generators: Vec<ReducedFraction>,
    pub tag: ModularTag,
}

impl ModularImage {
    pub fn from_generators(generators: Vec<ReducedFraction>) -> Self {
        let tag = if generators.iter().all(ReducedFraction::is_one) {
            ModularTag::Trivial
        } else if generators.iter().all(|f| f.is_one() || f.is_minus_one()) {
            ModularTag::PlusMinusOne
        } else {
            ModularTag::General
        };
        ModularImage { generators, tag }
    }

    /// Whether the two generating sets span the same subgroup of `Q*`.
    ///
    /// Numerators and denominators are split over a common coprime base, so
    /// each fraction becomes an integer vector (sign bit first); the
    /// subgroups agree iff the lattices spanned together with `2 e_0` agree.
    pub fn same_subgroup(&self, other: &ModularImage) -> bool {
        let all: Vec<&ReducedFraction> = self.generators.iter().chain(&other.generators).collect();
        let base = coprime_base(
            all.iter()
                .flat_map(|f| [f.num.magnitude().clone(), f.den.magnitude().clone()]),
        );
        let lattice = |gens: &[ReducedFraction]| -> IntMatrix {
            let cols = base.len() + 1;
            let mut rows: IntMatrix = gens.iter().map(|f| exponent_vector(f, &base)).collect();
            let mut two = vec![BigInt::zero(); cols];
            two[0] = BigInt::from(2);
            rows.push(two);
            hermite_normal_form(&rows, cols)
        };
        lattice(&self.generators) == lattice(&other.generators)
    }
}

impl fmt::Display for ModularImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        write!(f, "<{}> ({})", gens.join(", "), self.tag)
    }
}

/// Pairwise coprime integers `> 1` such that every input is a product of
/// their powers. Distinct base elements are multiplicatively independent.
fn coprime_base(inputs: impl Iterator<Item = BigUint>) -> Vec<BigUint> {
    let mut base: Vec<BigUint> = Vec::new();
    let mut work: Vec<BigUint> = inputs.filter(|x| *x > BigUint::one()).collect();
    while let Some(y) = work.pop() {
        if y.is_one() {
            continue;
        }
        match base.iter().position(|b| !b.gcd(&y).is_one()) {
            Some(i) => {
                let b = base.swap_remove(i);
                let g = b.gcd(&y);
                if g == b && g == y {
                    base.push(b);
                    continue;
                }
                work.push(&b / &g);
                work.push(&y / &g);
                work.push(g);
            }
            None => base.push(y),
        }
    }
    base.sort();
    base
}

fn exponent_vector(f: &ReducedFraction, base: &[BigUint]) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); base.len() + 1];
    if f.num.sign() == Sign::Minus {
        v[0] = BigInt::one();
    }
    let valuation = |mut x: BigUint, p: &BigUint| -> i64 {
        let mut k = 0;
        while x.is_multiple_of(p) && !x.is_zero() {
            x /= p;
            k += 1;
        }
        k
    };
    for (i, p) in base.iter().enumerate() {
        let k = valuation(f.num.magnitude().clone(), p) - valuation(f.den.magnitude().clone(), p);
        v[i + 1] = BigInt::from(k);
    }
    v
}

/// `Δ(t_e)` for an edge `e` outside the spanning tree `t`.
pub fn loop_modulus(g: &LabeledGraph, t: &SpanningTree, edge_id: &str) -> Result<ReducedFraction, ModularError> {
    let ei = g
        .edge_index(edge_id)
        .ok_or_else(|| ModularError::UnknownEdge(edge_id.to_string()))?;
    if t.contains(ei) {
        return Err(ModularError::EdgeInTree(edge_id.to_string()));
    }
    let e = &g.edges()[ei];
    let mut acc = ReducedFraction::one();
    for (f, enter) in tree_path(g, t, e.ends[1], e.ends[0]) {
        let edge = &g.edges()[f];
        acc = acc.mul(&ReducedFraction::new(
            edge.labels[enter].clone(),
            edge.labels[Edge::other(enter)].clone(),
        ));
    }
    Ok(acc.mul(&ReducedFraction::new(e.labels[0].clone(), e.labels[1].clone())))
}

/// Tree path from `from` to `to` as `(edge index, end we enter at)` steps.
pub(crate) fn tree_path(g: &LabeledGraph, t: &SpanningTree, from: usize, to: usize) -> Vec<(usize, usize)> {
    let adj = g.adjacency();
    let n = g.vertices().len();
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if v == to {
            break;
        }
        for &(e, end) in &adj[v] {
            if !t.contains(e) {
                continue;
            }
            let w = g.edges()[e].ends[Edge::other(end)];
            if !seen[w] {
                seen[w] = true;
                prev[w] = Some((e, end));
                queue.push_back(w);
            }
        }
    }
    let mut path = Vec::new();
    let mut v = to;
    while v != from {
        let (e, end) = prev[v].expect("spanning tree connects all vertices");
        path.push((e, end));
        v = g.edges()[e].ends[end];
    }
    path.reverse();
    path
}

pub fn modular_image_with_tree(g: &LabeledGraph, t: &SpanningTree) -> ModularImage {
    let generators = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(i, _)| !t.contains(*i))
        .map(|(_, e)| loop_modulus(g, t, &e.id).expect("edge outside tree"))
        .collect();
    ModularImage::from_generators(generators)
}

pub fn modular_image(g: &LabeledGraph) -> ModularImage {
    modular_image_with_tree(g, &g.spanning_tree())
}
