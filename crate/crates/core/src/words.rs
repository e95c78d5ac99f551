//! Word problem for the fundamental group of a labeled graph.
//!
//! A word in the presentation generators is lifted to a closed path in the
//! graph of groups based at the root vertex (the smallest vertex id): `g_v`
//! becomes "walk the tree to `v`, apply `g_v`, walk back" and `t_e` becomes
//! "walk to `∂0 e`, cross `e`, walk back from `∂1 e`". Tree edges appear as
//! edge letters too, which turns every relation into an HNN-style one:
//!
//! ```text
//! t_e^-1 g_{∂0}^{m λ(e)} t_e = g_{∂1}^{m λ(ē)}
//! ```
//!
//! Reduction keeps a stack of `(edge letter, vertex exponent)` pairs and
//! performs a pinch whenever the incoming edge letter undoes the top one and
//! the exponent between them lies in the edge group. The stack is reduced
//! after every push, so by the normal form theorem for graphs of groups the
//! element is trivial exactly when the stack ends empty with zero exponent.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::graph::{Edge, LabeledGraph, SpanningTree};
use crate::modular::tree_path;
use crate::presentation::{PresentationError, Word};

pub const DEFAULT_STEP_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("rewrite step budget of {0} exceeded")]
    BudgetExceeded(u64),
    #[error("spanning tree does not match the graph")]
    TreeMismatch,
}

impl From<PresentationError> for WordError {
    fn from(e: PresentationError) -> Self {
        match e {
            PresentationError::TreeMismatch => WordError::TreeMismatch,
            PresentationError::UnknownGenerator(g) => WordError::UnknownGenerator(g),
        }
    }
}

/// Crossing of an edge: `forward` goes from end 0 to end 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Step {
    edge: usize,
    forward: bool,
}

impl Step {
    fn inverse(self) -> Step {
        Step {
            edge: self.edge,
            forward: !self.forward,
        }
    }

    fn from_end(self) -> usize {
        if self.forward {
            0
        } else {
            1
        }
    }

    fn to_end(self) -> usize {
        1 - self.from_end()
    }
}

#[derive(Debug, Clone)]
enum Generator {
    Vertex(usize),
    Edge(usize),
}

/// Word-problem solver for one labeled graph and spanning tree.
#[derive(Debug, Clone)]
pub struct WordEngine<'g> {
    graph: &'g LabeledGraph,
    tree: SpanningTree,
    generators: BTreeMap<String, Generator>,
    /// tree path from the root to each vertex
    down: Vec<Vec<Step>>,
    budget: u64,
}

/// Partially reduced path word: `c_0 (y_1 c_1) ... (y_n c_n)`.
#[derive(Debug, Clone, Default)]
struct PathWord {
    base: BigInt,
    stack: Vec<(Step, BigInt)>,
}

impl<'g> WordEngine<'g> {
    pub fn new(graph: &'g LabeledGraph) -> Self {
        Self::with_tree(graph, graph.spanning_tree()).expect("default tree matches")
    }

    pub fn with_tree(graph: &'g LabeledGraph, tree: SpanningTree) -> Result<Self, WordError> {
        if !tree.is_spanning_tree_of(graph) {
            return Err(WordError::TreeMismatch);
        }
        let mut generators = BTreeMap::new();
        for (i, v) in graph.vertices().iter().enumerate() {
            generators.insert(v.clone(), Generator::Vertex(i));
        }
        for (i, e) in graph.edges().iter().enumerate() {
            if !tree.contains(i) {
                generators.insert(e.id.clone(), Generator::Edge(i));
            }
        }
        let down = (0..graph.vertices().len())
            .map(|v| {
                tree_path(graph, &tree, 0, v)
                    .into_iter()
                    .map(|(edge, enter)| Step {
                        edge,
                        forward: enter == 0,
                    })
                    .collect()
            })
            .collect();
        Ok(WordEngine {
            graph,
            tree,
            generators,
            down,
            budget: DEFAULT_STEP_BUDGET,
        })
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn graph(&self) -> &LabeledGraph {
        self.graph
    }

    pub fn tree(&self) -> &SpanningTree {
        &self.tree
    }

    fn edge(&self, s: Step) -> &Edge {
        &self.graph.edges()[s.edge]
    }

    fn lift(&self, w: &Word) -> Result<PathWord, WordError> {
        let mut pw = PathWord::default();
        let mut steps = 0u64;
        self.append(&mut pw, w, &mut steps)?;
        Ok(pw)
    }

    fn append(&self, pw: &mut PathWord, w: &Word, steps: &mut u64) -> Result<(), WordError> {
        for f in w.factors() {
            let gen = self
                .generators
                .get(&f.symbol)
                .ok_or_else(|| WordError::UnknownGenerator(f.symbol.clone()))?;
            match *gen {
                Generator::Vertex(v) => {
                    for &s in &self.down[v] {
                        self.push_step(pw, s, steps)?;
                    }
                    self.push_exp(pw, &f.exp);
                    for &s in self.down[v].iter().rev() {
                        self.push_step(pw, s.inverse(), steps)?;
                    }
                }
                Generator::Edge(e) => {
                    let edge = &self.graph.edges()[e];
                    let (first, cross) = if f.exp.is_positive() {
                        (0, Step { edge: e, forward: true })
                    } else {
                        (1, Step { edge: e, forward: false })
                    };
                    let mut letter = PathWord::default();
                    for &s in &self.down[edge.ends[first]] {
                        self.push_step(&mut letter, s, steps)?;
                    }
                    self.push_step(&mut letter, cross, steps)?;
                    for &s in self.down[edge.ends[1 - first]].iter().rev() {
                        self.push_step(&mut letter, s.inverse(), steps)?;
                    }
                    let power = self.pow(&letter, &f.exp.abs(), steps)?;
                    self.concat(pw, &power, steps)?;
                }
            }
        }
        Ok(())
    }

    /// Appends `b` to `a`, pinching at the junction as needed.
    fn concat(&self, a: &mut PathWord, b: &PathWord, steps: &mut u64) -> Result<(), WordError> {
        self.tick(steps)?;
        self.push_exp(a, &b.base);
        for (s, c) in &b.stack {
            self.push_step(a, *s, steps)?;
            self.push_exp(a, c);
        }
        Ok(())
    }

    /// `p^n` by repeated squaring, so powers of elliptic elements stay cheap.
    fn pow(&self, p: &PathWord, n: &BigInt, steps: &mut u64) -> Result<PathWord, WordError> {
        let mut result = PathWord::default();
        let mut square = p.clone();
        let mut n = n.clone();
        while !n.is_zero() {
            if n.is_odd() {
                self.concat(&mut result, &square, steps)?;
            }
            n >>= 1;
            if !n.is_zero() {
                let copy = square.clone();
                self.concat(&mut square, &copy, steps)?;
            }
        }
        Ok(result)
    }

    fn tick(&self, steps: &mut u64) -> Result<(), WordError> {
        *steps += 1;
        if *steps > self.budget {
            return Err(WordError::BudgetExceeded(self.budget));
        }
        Ok(())
    }

    fn push_exp(&self, pw: &mut PathWord, exp: &BigInt) {
        match pw.stack.last_mut() {
            Some((_, c)) => *c += exp,
            None => pw.base += exp,
        }
    }

    fn push_step(&self, pw: &mut PathWord, s: Step, steps: &mut u64) -> Result<(), WordError> {
        self.tick(steps)?;
        if let Some(&(top, ref c)) = pw.stack.last() {
            if top == s.inverse() {
                let e = self.edge(top);
                let here = &e.labels[top.to_end()];
                if c.is_multiple_of(here) {
                    let there = &e.labels[top.from_end()];
                    let moved = c / here * there;
                    pw.stack.pop();
                    self.push_exp(pw, &moved);
                    return Ok(());
                }
            }
        }
        pw.stack.push((s, BigInt::zero()));
        Ok(())
    }

    /// Reads a path word back as a presentation word: tree letters vanish,
    /// edge letters outside the tree become `t_e^{±1}`.
    fn project(&self, pw: &PathWord) -> Word {
        let mut w = Word::identity();
        w.push(self.graph.vertices()[0].clone(), pw.base.clone());
        for (s, c) in &pw.stack {
            let e = self.edge(*s);
            if !self.tree.contains(s.edge) {
                w.push(e.id.clone(), BigInt::from(if s.forward { 1 } else { -1 }));
            }
            let v = e.ends[s.to_end()];
            w.push(self.graph.vertices()[v].clone(), c.clone());
        }
        w
    }

    /// A word equal to `w` in the group whose lift admits no pinch.
    pub fn normal_form(&self, w: &Word) -> Result<Word, WordError> {
        Ok(self.project(&self.lift(w)?))
    }

    pub fn is_identity(&self, w: &Word) -> Result<bool, WordError> {
        let pw = self.lift(w)?;
        Ok(pw.stack.is_empty() && pw.base.is_zero())
    }

    pub fn equal(&self, a: &Word, b: &Word) -> Result<bool, WordError> {
        self.is_identity(&a.mul(&b.inverse()))
    }

    /// Whether `w` is conjugate into a vertex group.
    pub fn is_elliptic(&self, w: &Word) -> Result<bool, WordError> {
        let pw = self.lift(w)?;
        if pw.stack.is_empty() {
            return Ok(true);
        }
        // cyclic word (y_1 c_1) ... (y_n c_n + c_0)
        let mut cyc = pw.stack;
        cyc.last_mut().unwrap().1 += pw.base;
        let mut steps = 0u64;
        loop {
            steps += 1;
            if steps > self.budget {
                return Err(WordError::BudgetExceeded(self.budget));
            }
            let n = cyc.len();
            if n == 0 {
                return Ok(true);
            }
            let (last, c) = cyc[n - 1].clone();
            let first = cyc[0].0;
            if n == 1 || first != last.inverse() {
                return Ok(false);
            }
            let e = self.edge(last);
            let here = &e.labels[last.to_end()];
            if !c.is_multiple_of(here) {
                return Ok(false);
            }
            let moved = &c / here * &e.labels[last.from_end()];
            let c1 = cyc[0].1.clone();
            cyc.pop();
            cyc.remove(0);
            match cyc.last_mut() {
                Some((_, c_last)) => *c_last += moved + c1,
                // n == 2: the element is conjugate to g^{c_1 + moved}
                None => return Ok(true),
            }
        }
    }

    /// Whether mapping source generators to `images` sends every source
    /// relator to the identity.
    pub fn verify_homomorphism(
        &self,
        source_relators: &[Word],
        images: &BTreeMap<String, Word>,
    ) -> Result<bool, WordError> {
        for r in source_relators {
            let mut pw = PathWord::default();
            let mut steps = 0u64;
            for f in r.factors() {
                let img = images
                    .get(&f.symbol)
                    .ok_or_else(|| WordError::UnknownGenerator(f.symbol.clone()))?;
                let base = if f.exp.is_negative() { img.inverse() } else { img.clone() };
                let mut lifted = PathWord::default();
                self.append(&mut lifted, &base, &mut steps)?;
                let power = self.pow(&lifted, &f.exp.abs(), &mut steps)?;
                self.concat(&mut pw, &power, &mut steps)?;
            }
            if !(pw.stack.is_empty() && pw.base.is_zero()) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::RawEdge;
    use crate::presentation::build_presentation;

    fn g(edges: Vec<RawEdge>) -> LabeledGraph {
        LabeledGraph::new(Vec::<String>::new(), edges).unwrap()
    }

    fn e(id: &str, a: &str, la: i64, b: &str, lb: i64) -> RawEdge {
        RawEdge::new(id, a, la, b, lb)
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn normal_forms() {
        let t23 = g(vec![e("e", "a", 2, "b", 3)]);
        let eng = WordEngine::new(&t23);
        assert_eq!(eng.normal_form(&w("a^2 b^-3")).unwrap(), Word::identity());

        let bs12 = g(vec![e("t", "a", 1, "a", 2)]);
        let eng = WordEngine::new(&bs12);
        assert_eq!(eng.normal_form(&w("t^-1 a t")).unwrap(), w("a^2"));

        let bs23 = g(vec![e("t", "a", 2, "a", 3)]);
        let eng = WordEngine::new(&bs23);
        assert_eq!(eng.normal_form(&w("t^-1 a t")).unwrap(), w("t^-1 a t"));
        assert_eq!(eng.normal_form(&w("t a^3 t^-1")).unwrap(), w("a^2"));
    }

    #[test]
    fn identities() {
        let t23 = g(vec![e("e", "a", 2, "b", 3)]);
        assert!(WordEngine::new(&t23).is_identity(&w("a^2 b^-3")).unwrap());
        let bs23 = g(vec![e("t", "a", 2, "a", 3)]);
        let eng = WordEngine::new(&bs23);
        assert!(eng.is_identity(&w("t^-1 a^2 t a^-3")).unwrap());
        assert!(!eng.is_identity(&w("t^-1 a t a^-1")).unwrap());
        assert_eq!(
            eng.is_identity(&w("x")),
            Err(WordError::UnknownGenerator("x".into()))
        );
    }

    #[test]
    fn equalities() {
        let bs12 = g(vec![e("t", "a", 1, "a", 2)]);
        let eng = WordEngine::new(&bs12);
        assert!(eng.equal(&w("t^-1 a t"), &w("a^2")).unwrap());
        assert!(eng.equal(&w("t a"), &w("t a")).unwrap());
        let t23 = g(vec![e("e", "a", 2, "b", 3)]);
        assert!(WordEngine::new(&t23).equal(&w("a^2"), &w("b^3")).unwrap());
        assert!(!WordEngine::new(&t23).equal(&w("a"), &w("b")).unwrap());
    }

    #[test]
    fn ellipticity() {
        let seg = g(vec![e("e1", "a1", 2, "a2", 3), e("e2", "a2", 5, "a3", 7)]);
        let eng = WordEngine::new(&seg);
        assert!(eng.is_elliptic(&w("a1^5")).unwrap());
        assert!(eng.is_elliptic(&w("a3 a1 a3^-1")).unwrap());
        assert!(!eng.is_elliptic(&w("a1 a3")).unwrap());

        let bs23 = g(vec![e("t", "a", 2, "a", 3)]);
        let eng = WordEngine::new(&bs23);
        assert!(!eng.is_elliptic(&w("t")).unwrap());
        assert!(eng.is_elliptic(&w("t^-1 a^2 t")).unwrap());
        assert!(eng.is_elliptic(&w("a t^-1 a t a^-1")).unwrap());
        assert!(!eng.is_elliptic(&w("t^-1 a t a")).unwrap());
        assert!(eng.is_elliptic(&Word::identity()).unwrap());
    }

    #[test]
    fn homomorphisms() {
        let t23 = g(vec![e("e", "a", 2, "b", 3)]);
        let eng = WordEngine::new(&t23);
        let images = BTreeMap::from([("a".to_string(), w("a")), ("b".to_string(), w("b"))]);
        assert!(eng.verify_homomorphism(&[w("a^2 b^-3")], &images).unwrap());

        let seg = g(vec![e("e1", "a1", 2, "a2", 3), e("e2", "a2", 5, "a3", 7)]);
        let eng = WordEngine::new(&seg);
        let images = BTreeMap::from([("x".to_string(), w("a1")), ("y".to_string(), w("a3"))]);
        assert!(eng.verify_homomorphism(&[w("x^10 y^-21")], &images).unwrap());
        assert!(!eng.verify_homomorphism(&[w("x^10 y^-20")], &images).unwrap());

        let bs23 = g(vec![e("t", "a", 2, "a", 3)]);
        let eng = WordEngine::new(&bs23);
        let images = BTreeMap::from([
            ("a".to_string(), w("a")),
            ("r".to_string(), w("t a^-1 t^-1 a t")),
        ]);
        assert!(eng.verify_homomorphism(&[w("r^-1 a^2 r a^-3")], &images).unwrap());
    }

    #[test]
    fn relators_are_identities() {
        let gr = g(vec![
            e("e1", "a", 2, "b", 3),
            e("e2", "b", 4, "c", -6),
            e("e3", "c", 5, "a", 7),
            e("e4", "b", -3, "b", 9),
        ]);
        let t = gr.spanning_tree();
        let p = build_presentation(&gr, &t).unwrap();
        let eng = WordEngine::new(&gr);
        for r in &p.relators {
            assert!(eng.is_identity(r).unwrap(), "{r}");
        }
    }

    #[test]
    fn budget_is_enforced() {
        let bs = g(vec![e("t", "a", 2, "a", 3)]);
        let eng = WordEngine::new(&bs).with_budget(3);
        assert_eq!(
            eng.is_identity(&w("t^5")),
            Err(WordError::BudgetExceeded(3))
        );
    }
}
