//! Labeled graphs, their fundamental groups (generalized Baumslag-Solitar
//! groups) and a decision procedure for which of them are knot groups.
//!
//! The usual entry point is [`dsl::parse`] followed by [`classify`]:
//!
//! ```
//! let g = gbsknot::parse("edge e1 a 2 b 3").unwrap();
//! let verdict = gbsknot::classify(&g).unwrap();
//! assert!(verdict.is_knot_group());
//! ```

pub mod classifier;
pub mod dsl;
pub mod graph;
pub mod modular;
pub mod moves;
pub mod presentation;
pub mod report;
pub mod snf;
pub mod words;

pub use classifier::{
    classify, classify_1knot, classify_nknot, classify_with_budget, ClassifyError, Exceptional, KnotSource,
    KnotVerdict, NKnot, OneKnot, SourceGroup, Witness,
};
pub use dsl::{parse, parse_file, serialize, ParseError};
pub use graph::{Edge, GraphError, LabeledGraph, RawEdge, Shape, SpanningTree};
pub use modular::{modular_image, ModularImage, ModularTag, ReducedFraction};
pub use moves::{canonicalize_signs, collapse, expand, reduce, MoveError};
pub use presentation::{abelianization, build_presentation, AbelianStructure, Presentation, Word};
pub use report::Report;
pub use snf::{smith_normal_form, SmithForm};
pub use words::{WordEngine, WordError, DEFAULT_STEP_BUDGET};
