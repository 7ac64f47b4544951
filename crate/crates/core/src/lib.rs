//! Process semantics of star expressions.
//!
//! Star expressions (regular expressions read as process terms) are
//! interpreted as charts, finite rooted transition systems, and as
//! 1-charts whose empty steps record the exit from an iteration. The crate
//! decides loop existence and elimination (LEE) on charts by search,
//! validates layered entry/body labelings (LLEE-witnesses) with two
//! independent checkers, computes bisimulations by partition refinement,
//! and checks on concrete expressions that the induced chart of the 1-chart
//! interpretation maps onto the chart interpretation by a functional
//! bisimulation and that the labeled 1-chart interpretation is always a
//! LLEE-witness.
//!
//! ```
//! use loopchart::lee::decide_lee;
//! use loopchart::semantics::{chart_of, labeled_onechart_of};
//! use loopchart::verify::verify_p1;
//!
//! let e = loopchart::parse_star_expr("(a*.b*)*")?;
//! let chart = chart_of(&e)?;
//! assert_eq!((chart.num_vertices(), chart.transitions().len()), (3, 6));
//! assert!(!decide_lee(&chart)?.holds);
//! let witness = labeled_onechart_of(&e)?;
//! assert_eq!(witness.entries().len(), 3);
//! assert!(verify_p1(&e)?.passed);
//! # Ok::<(), loopchart::Error>(())
//! ```

pub mod bisim;
pub mod charts;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod fixtures;
pub mod lee;
pub mod semantics;
pub mod syntax;
pub mod verify;

pub use charts::{Chart, EntryBodyLabeling, OneChart, Transition, TransitionId, VertexId};
pub use error::{Error, ParseError, Result};
pub use semantics::{Marking, StepLabel};
pub use syntax::{parse_star_expr, Action, AppCxt, StackedExpr, StarExpr};
