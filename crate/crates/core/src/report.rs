//! Machine-readable classification reports.
//!
//! Keys appear in a fixed order and integers are written in full decimal,
//! so identical inputs always give byte-identical JSON.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};

use crate::classifier::{Exceptional, KnotSource, KnotVerdict, NKnot, OneKnot, SourceGroup, Witness};
use crate::dsl::serialize;
use crate::graph::Shape;
use crate::modular::ModularImage;
use crate::presentation::AbelianStructure;

fn big<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    let n: serde_json::Number = x.to_string().parse().map_err(serde::ser::Error::custom)?;
    n.serialize(s)
}

#[derive(Serialize)]
struct Big(#[serde(serialize_with = "big")] BigInt);

fn bigs(v: &[BigInt]) -> Vec<Big> {
    v.iter().cloned().map(Big).collect()
}

#[derive(Serialize)]
pub struct AbelianReport {
    rank: usize,
    torsion: Vec<Big>,
}

impl From<&AbelianStructure> for AbelianReport {
    fn from(a: &AbelianStructure) -> Self {
        AbelianReport {
            rank: a.free_rank,
            torsion: bigs(&a.torsion),
        }
    }
}

#[derive(Serialize)]
pub struct ModularReport {
    generators: Vec<String>,
    tag: String,
}

impl From<&ModularImage> for ModularReport {
    fn from(m: &ModularImage) -> Self {
        ModularReport {
            generators: m.generators.iter().map(|f| f.to_string()).collect(),
            tag: m.tag.to_string(),
        }
    }
}

#[derive(Serialize)]
struct ShapeReport {
    kind: &'static str,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    vertices: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pairs: Vec<(Big, Big)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
}

impl From<&Shape> for ShapeReport {
    fn from(s: &Shape) -> Self {
        let pairs = |p: &[(BigInt, BigInt)]| p.iter().map(|(k, l)| (Big(k.clone()), Big(l.clone()))).collect();
        let (vertices, pairs, reason) = match s {
            Shape::SingleVertex => (vec![], vec![], None),
            Shape::Segment(v) => (v.vertices.clone(), pairs(&v.pairs), None),
            Shape::Cycle(v) => (v.vertices.clone(), pairs(&v.pairs), None),
            Shape::Other(r) => (vec![], vec![], Some(r.clone())),
        };
        ShapeReport {
            kind: s.kind(),
            vertices,
            pairs,
            reason,
        }
    }
}

#[derive(Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
enum OneKnotReport {
    Yes {
        #[serde(serialize_with = "big")]
        p: BigInt,
        #[serde(serialize_with = "big")]
        q: BigInt,
        both_prime: bool,
    },
    No {
        reason: String,
    },
    Unknot,
}

#[derive(Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
enum NKnotReport {
    Yes {
        source: &'static str,
        #[serde(serialize_with = "big")]
        k: BigInt,
        #[serde(serialize_with = "big")]
        l: BigInt,
        #[serde(skip_serializing_if = "Option::is_none")]
        cycle_test: Option<CycleTestReport>,
    },
    No {
        reason: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        cycle_test: Option<CycleTestReport>,
    },
    Unknot,
}

/// Present only when the signed and sign-insensitive cycle tests disagree.
#[derive(Serialize)]
struct CycleTestReport {
    strict: bool,
    lenient: bool,
}

#[derive(Serialize)]
struct EliminationReport {
    vertex: String,
    #[serde(serialize_with = "big")]
    alpha: BigInt,
    #[serde(serialize_with = "big")]
    beta: BigInt,
    word: String,
    verified: bool,
}

#[derive(Serialize)]
pub struct WitnessReport {
    source: String,
    relators: Vec<String>,
    images: BTreeMap<String, String>,
    verified: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    elimination: Vec<EliminationReport>,
}

impl From<&Witness> for WitnessReport {
    fn from(w: &Witness) -> Self {
        let source = match &w.source {
            SourceGroup::Torus { k, l } => format!("T({k},{l})"),
            SourceGroup::BaumslagSolitar { k, l } => format!("BS({k},{l})"),
        };
        WitnessReport {
            source,
            relators: w.source.relators().iter().map(|r| r.to_string()).collect(),
            images: w.images.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
            verified: w.verified,
            elimination: w
                .elimination
                .iter()
                .map(|s| EliminationReport {
                    vertex: s.vertex.clone(),
                    alpha: s.alpha.clone(),
                    beta: s.beta.clone(),
                    word: s.word.to_string(),
                    verified: s.verified,
                })
                .collect(),
        }
    }
}

/// Full classification report for one input.
#[derive(Serialize)]
pub struct Report {
    input: String,
    reduced_graph: String,
    shape: ShapeReport,
    betti1: usize,
    abelianization: AbelianReport,
    modular: ModularReport,
    one_knot: OneKnotReport,
    n_knot_ge3: NKnotReport,
    exceptional: Option<&'static str>,
    witnesses: Vec<WitnessReport>,
}

impl Report {
    pub fn new(input: impl Into<String>, v: &KnotVerdict) -> Self {
        let one_knot = match &v.one_knot {
            OneKnot::Yes { p, q, both_prime } => OneKnotReport::Yes {
                p: p.clone(),
                q: q.clone(),
                both_prime: *both_prime,
            },
            OneKnot::No(r) => OneKnotReport::No { reason: r.clone() },
            OneKnot::Unknot => OneKnotReport::Unknot,
        };
        let cycle_test = v
            .cycle_check
            .as_ref()
            .filter(|c| c.strict != c.lenient)
            .map(|c| CycleTestReport {
                strict: c.strict,
                lenient: c.lenient,
            });
        let n_knot_ge3 = match &v.n_knot_ge3 {
            NKnot::Yes(src) => {
                let (source, k, l) = match src {
                    KnotSource::TorusImage { k, l } => ("torus_image", k, l),
                    KnotSource::BsImage { k, l } => ("bs_image", k, l),
                };
                NKnotReport::Yes {
                    source,
                    k: k.clone(),
                    l: l.clone(),
                    cycle_test,
                }
            }
            NKnot::No(r) => NKnotReport::No {
                reason: r.clone(),
                cycle_test,
            },
            NKnot::Unknot => NKnotReport::Unknot,
        };
        Report {
            input: input.into(),
            reduced_graph: serialize(&v.reduced),
            shape: (&v.shape).into(),
            betti1: v.betti1,
            abelianization: (&v.abelianization).into(),
            modular: (&v.modular).into(),
            one_knot,
            n_knot_ge3,
            exceptional: v.exceptional.map(|e| match e {
                Exceptional::Z => "Z",
                Exceptional::Z2 => "Z^2",
                Exceptional::KleinBottle => "Klein bottle group",
            }),
            witnesses: v.witnesses.iter().map(WitnessReport::from).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// JSON for an abelian group alone, `{"rank":..,"torsion":[..]}`.
pub fn abelian_json(a: &AbelianStructure) -> String {
    serde_json::to_string(&AbelianReport::from(a)).expect("serializes")
}

/// JSON for a modular image alone.
pub fn modular_json(m: &ModularImage) -> String {
    serde_json::to_string(&ModularReport::from(m)).expect("serializes")
}

/// JSON list of witnesses.
pub fn witnesses_json(ws: &[Witness]) -> String {
    let reports: Vec<WitnessReport> = ws.iter().map(WitnessReport::from).collect();
    serde_json::to_string(&reports).expect("serializes")
}
