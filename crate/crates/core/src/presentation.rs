//! The standard presentation of the fundamental group of a labeled graph,
//! and abelianizations computed from it.
//!
//! Given a spanning tree `T`, the generators are one vertex element `g_v`
//! per vertex and one edge element `t_e` per edge outside `T`. Each edge
//! contributes one relator:
//!
//! * tree edge: `g_{∂0 e}^{λ(e)} g_{∂1 e}^{-λ(ē)}`
//! * other edge: `t_e^-1 g_{∂0 e}^{λ(e)} t_e g_{∂1 e}^{-λ(ē)}`
//!
//! Vertex generators are named by vertex id, edge generators by edge id.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::graph::{LabeledGraph, SpanningTree};
use crate::snf::{smith_normal_form, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("spanning tree does not match the graph")]
    TreeMismatch,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bad word syntax at column {col}: {message}")]
pub struct WordSyntaxError {
    pub col: usize,
    pub message: String,
}

/// One run `symbol^exp` of a word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factor {
    pub symbol: String,
    pub exp: BigInt,
}

/// A freely reduced word in exponent-run form: no zero exponents and no two
/// adjacent runs on the same symbol.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Factor>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn gen(symbol: impl Into<String>) -> Self {
        Self::power(symbol, 1)
    }

    pub fn power(symbol: impl Into<String>, exp: impl Into<BigInt>) -> Self {
        let mut w = Word::identity();
        w.push(symbol.into(), exp.into());
        w
    }

    /// Builds a word from runs, freely reducing as it goes.
    pub fn from_factors<I, S, E>(factors: I) -> Self
    where
        I: IntoIterator<Item = (S, E)>,
        S: Into<String>,
        E: Into<BigInt>,
    {
        let mut w = Word::identity();
        for (s, e) in factors {
            w.push(s.into(), e.into());
        }
        w
    }

    pub fn factors(&self) -> &[Factor] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of letters, counting `a^3` as three.
    pub fn letter_len(&self) -> BigInt {
        self.0.iter().map(|f| f.exp.abs()).sum()
    }

    /// Appends `symbol^exp`, merging with the last run.
    pub fn push(&mut self, symbol: String, exp: BigInt) {
        if exp.is_zero() {
            return;
        }
        if let Some(last) = self.0.last_mut() {
            if last.symbol == symbol {
                last.exp += exp;
                if last.exp.is_zero() {
                    self.0.pop();
                }
                return;
            }
        }
        self.0.push(Factor { symbol, exp });
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for f in &other.0 {
            w.push(f.symbol.clone(), f.exp.clone());
        }
        w
    }

    pub fn inverse(&self) -> Word {
        Word(
            self.0
                .iter()
                .rev()
                .map(|f| Factor {
                    symbol: f.symbol.clone(),
                    exp: -&f.exp,
                })
                .collect(),
        )
    }

    /// `self^n` by repetition; `n` may be negative.
    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut w = Word::identity();
        for _ in 0..n.unsigned_abs() {
            w = w.mul(&base);
        }
        w
    }

    /// Replaces every generator by its image. Missing generators are an error.
    pub fn substitute(&self, images: &BTreeMap<String, Word>) -> Result<Word, PresentationError> {
        let mut out = Word::identity();
        for f in &self.0 {
            let img = images
                .get(&f.symbol)
                .ok_or_else(|| PresentationError::UnknownGenerator(f.symbol.clone()))?;
            let base = if f.exp.is_negative() { img.inverse() } else { img.clone() };
            let mut n = f.exp.abs();
            while !n.is_zero() {
                out = out.mul(&base);
                n -= 1;
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, fac) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if fac.exp.is_one() {
                write!(f, "{}", fac.symbol)?;
            } else {
                write!(f, "{}^{}", fac.symbol, fac.exp)?;
            }
        }
        Ok(())
    }
}

/// Parses whitespace-separated `name^exp` factors (`^1` may be omitted).
/// A bare `1` denotes the identity.
impl FromStr for Word {
    type Err = WordSyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut w = Word::identity();
        let mut col = 1;
        for token in s.split_inclusive(char::is_whitespace) {
            let tok = token.trim_end();
            if !tok.is_empty() {
                if tok != "1" {
                    let (sym, exp) = parse_factor(tok).map_err(|message| WordSyntaxError {
                        col,
                        message,
                    })?;
                    w.push(sym, exp);
                }
            }
            col += token.chars().count();
        }
        Ok(w)
    }
}

fn parse_factor(tok: &str) -> Result<(String, BigInt), String> {
    let (sym, exp) = match tok.split_once('^') {
        Some((s, e)) => {
            let exp = BigInt::from_str(e).map_err(|_| format!("bad exponent `{e}`"))?;
            (s, exp)
        }
        None => (tok, BigInt::one()),
    };
    if sym.is_empty() {
        return Err(format!("missing generator name in `{tok}`"));
    }
    if sym.contains('#') {
        return Err(format!("bad generator name `{sym}`"));
    }
    Ok((sym.to_string(), exp))
}

/// Generators and relators of the fundamental group for one spanning tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub vertex_generators: Vec<String>,
    pub edge_generators: Vec<String>,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn generators(&self) -> impl Iterator<Item = &String> {
        self.vertex_generators.iter().chain(&self.edge_generators)
    }

    pub fn generator_count(&self) -> usize {
        self.vertex_generators.len() + self.edge_generators.len()
    }

    fn column_of(&self) -> BTreeMap<&str, usize> {
        self.generators()
            .enumerate()
            .map(|(i, g)| (g.as_str(), i))
            .collect()
    }

    /// Exponent-sum matrix: one row per relator, one column per generator
    /// (vertex generators first).
    pub fn relation_matrix(&self) -> IntMatrix {
        self.rows_for(&self.relators)
            .expect("relators only use the presentation's generators")
    }

    fn rows_for(&self, words: &[Word]) -> Result<IntMatrix, PresentationError> {
        let cols = self.column_of();
        words
            .iter()
            .map(|w| {
                let mut row = vec![BigInt::zero(); cols.len()];
                for f in w.factors() {
                    let &j = cols
                        .get(f.symbol.as_str())
                        .ok_or_else(|| PresentationError::UnknownGenerator(f.symbol.clone()))?;
                    row[j] += &f.exp;
                }
                Ok(row)
            })
            .collect()
    }

    pub fn abelianization(&self) -> AbelianStructure {
        AbelianStructure::from_matrix(&self.relation_matrix(), self.generator_count())
    }

    /// Abelianization of the quotient by the normal closure of `extra`.
    pub fn quotient_abelianization(&self, extra: &[Word]) -> Result<AbelianStructure, PresentationError> {
        let mut m = self.relation_matrix();
        m.extend(self.rows_for(extra)?);
        Ok(AbelianStructure::from_matrix(&m, self.generator_count()))
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<&str> = self.generators().map(String::as_str).collect();
        let rels: Vec<String> = self.relators.iter().map(Word::to_string).collect();
        write!(f, "< {} | {} >", gens.join(", "), rels.join(", "))
    }
}

pub fn build_presentation(g: &LabeledGraph, t: &SpanningTree) -> Result<Presentation, PresentationError> {
    if !t.is_spanning_tree_of(g) {
        return Err(PresentationError::TreeMismatch);
    }
    let v = |i: usize| g.vertices()[i].clone();
    let mut edge_generators = Vec::new();
    let mut relators = Vec::new();
    for (i, e) in g.edges().iter().enumerate() {
        let head = (v(e.ends[0]), e.labels[0].clone());
        let tail = (v(e.ends[1]), -&e.labels[1]);
        if t.contains(i) {
            relators.push(Word::from_factors([head, tail]));
        } else {
            edge_generators.push(e.id.clone());
            relators.push(Word::from_factors([
                (e.id.clone(), BigInt::from(-1)),
                head,
                (e.id.clone(), BigInt::one()),
                tail,
            ]));
        }
    }
    Ok(Presentation {
        vertex_generators: g.vertices().to_vec(),
        edge_generators,
        relators,
    })
}

/// `Z^free_rank ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k` with `d_1 | ... | d_k`, every `d_i >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbelianStructure {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianStructure {
    /// Cokernel of the integer matrix `m` with `cols` columns.
    pub fn from_matrix(m: &IntMatrix, cols: usize) -> Self {
        let snf = smith_normal_form(m, cols);
        AbelianStructure {
            free_rank: snf.free_rank,
            torsion: snf.divisors.into_iter().filter(|d| !d.is_one()).collect(),
        }
    }

    /// The group is infinite cyclic.
    pub fn is_z(&self) -> bool {
        self.free_rank == 1 && self.torsion.is_empty()
    }

    pub fn has_torsion(&self) -> bool {
        !self.torsion.is_empty()
    }
}

impl fmt::Display for AbelianStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Abelianization of the fundamental group, using the default spanning tree.
pub fn abelianization(g: &LabeledGraph) -> AbelianStructure {
    build_presentation(g, &g.spanning_tree())
        .expect("default spanning tree matches")
        .abelianization()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::RawEdge;
    use crate::snf::matrix_from_i64;

    fn g(edges: Vec<RawEdge>) -> LabeledGraph {
        LabeledGraph::new(Vec::<String>::new(), edges).unwrap()
    }

    fn e(id: &str, a: &str, la: i64, b: &str, lb: i64) -> RawEdge {
        RawEdge::new(id, a, la, b, lb)
    }

    fn present(gr: &LabeledGraph) -> Presentation {
        build_presentation(gr, &gr.spanning_tree()).unwrap()
    }

    fn ab(rank: usize, torsion: &[i64]) -> AbelianStructure {
        AbelianStructure {
            free_rank: rank,
            torsion: torsion.iter().map(|&d| d.into()).collect(),
        }
    }

    #[test]
    fn word_syntax() {
        let w: Word = "t^-1 a1^2 t a1^-3".parse().unwrap();
        assert_eq!(w.factors().len(), 4);
        assert_eq!(w.to_string(), "t^-1 a1^2 t a1^-3");
        assert_eq!("a a a^-2 b".parse::<Word>().unwrap().to_string(), "b");
        assert_eq!("a a b".parse::<Word>().unwrap().to_string(), "a^2 b");
        assert_eq!("a a^-1".parse::<Word>().unwrap(), Word::identity());
        assert_eq!("1".parse::<Word>().unwrap(), Word::identity());
        assert_eq!(Word::identity().to_string(), "1");
        let err = "a b^x".parse::<Word>().unwrap_err();
        assert_eq!(err.col, 3);
        assert!("^2".parse::<Word>().is_err());
    }

    #[test]
    fn presentations() {
        let t = g(vec![e("e", "a", 2, "b", 3)]);
        let p = present(&t);
        assert_eq!(p.relators, vec!["a^2 b^-3".parse().unwrap()]);
        assert!(p.edge_generators.is_empty());

        let bs = g(vec![e("t", "a", 2, "a", 3)]);
        let p = present(&bs);
        assert_eq!(p.edge_generators, vec!["t"]);
        assert_eq!(p.relators, vec!["t^-1 a^2 t a^-3".parse().unwrap()]);

        let seg = g(vec![e("e1", "a1", 2, "a2", 3), e("e2", "a2", 5, "a3", 7)]);
        let p = present(&seg);
        assert_eq!(p.to_string(), "< a1, a2, a3 | a1^2 a2^-3, a2^5 a3^-7 >");
    }

    #[test]
    fn tree_mismatch() {
        let seg = g(vec![e("e1", "a1", 2, "a2", 3), e("e2", "a2", 5, "a3", 7)]);
        let lp = g(vec![e("t", "a", 2, "a", 3)]);
        assert_eq!(
            build_presentation(&seg, &lp.spanning_tree()),
            Err(PresentationError::TreeMismatch)
        );
    }

    #[test]
    fn relation_matrices() {
        let t = g(vec![e("e", "a", 2, "b", 3)]);
        assert_eq!(present(&t).relation_matrix(), matrix_from_i64(&[&[2, -3]]));
        let bs = g(vec![e("t", "a", 2, "a", 4)]);
        assert_eq!(present(&bs).relation_matrix(), matrix_from_i64(&[&[-2, 0]]));
        let seg = g(vec![e("e1", "a1", 2, "a2", 3), e("e2", "a2", 5, "a3", 7)]);
        assert_eq!(
            present(&seg).relation_matrix(),
            matrix_from_i64(&[&[2, -3, 0], &[0, 5, -7]])
        );
    }

    #[test]
    fn abelianizations() {
        assert_eq!(abelianization(&g(vec![e("e", "a", 2, "b", 3)])), ab(1, &[]));
        assert_eq!(abelianization(&g(vec![e("t", "a", 2, "a", 4)])), ab(1, &[2]));
        assert_eq!(abelianization(&g(vec![e("t", "a", 1, "a", 2)])), ab(1, &[]));
        assert_eq!(abelianization(&g(vec![e("t", "a", 3, "a", 3)])), ab(2, &[]));
        assert_eq!(abelianization(&g(vec![e("t", "a", 2, "a", -2)])), ab(1, &[4]));
    }

    #[test]
    fn quotient_abelianizations() {
        let trident = g(vec![
            e("e1", "c", 7, "u", 2),
            e("e2", "c", 11, "v", 3),
            e("e3", "c", 13, "w", 5),
        ]);
        let p = present(&trident);
        assert_eq!(p.quotient_abelianization(&[Word::gen("c")]).unwrap(), ab(0, &[30]));
        assert_eq!(p.quotient_abelianization(&[]).unwrap(), p.abelianization());

        let pendant = g(vec![e("t", "a", 2, "a", 3), e("e", "a", 5, "u", 3)]);
        let p = present(&pendant);
        assert_eq!(p.quotient_abelianization(&[Word::gen("a")]).unwrap(), ab(1, &[3]));

        assert_eq!(
            p.quotient_abelianization(&[Word::gen("nope")]),
            Err(PresentationError::UnknownGenerator("nope".into()))
        );
    }

    #[test]
    fn loop_abelianization_formula() {
        for p in -20i64..=20 {
            for q in -20i64..=20 {
                if p == 0 || q == 0 {
                    continue;
                }
                let got = abelianization(&g(vec![e("t", "a", p, "a", q)]));
                let d = (p - q).abs();
                let want = match d {
                    0 => ab(2, &[]),
                    1 => ab(1, &[]),
                    d => ab(1, &[d]),
                };
                assert_eq!(got, want, "loop ({p},{q})");
            }
        }
    }
}
