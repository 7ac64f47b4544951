//! Star expressions, stacked star expressions and applicative contexts.
//!
//! Stacked expressions extend star expressions with a second product form,
//! the stacked product `E @ e*`, which records that execution has descended
//! into the body of the iteration `e*`. The ordinary product `E . e` with a
//! plain head is identified with the star expression `e1 . e`, so the smart
//! constructor [`StackedExpr::prod`] never builds a product whose head is
//! plain.

mod parse;
mod render;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use parse::{parse_stacked_expr, parse_star_expr};
pub use render::{render, render_star};

/// An action name: letters optionally followed by digits (`a`, `b2`, `ab`).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Action(Arc<str>);

impl Action {
    pub fn new(name: &str) -> Result<Self> {
        if is_action_name(name) {
            Ok(Action(Arc::from(name)))
        } else {
            Err(Error::InvalidAction(name.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_action_name(name: &str) -> bool {
    let letters = name.bytes().take_while(u8::is_ascii_alphabetic).count();
    letters > 0 && name.bytes().skip(letters).all(|b| b.is_ascii_digit())
}

impl TryFrom<String> for Action {
    type Error = Error;

    fn try_from(value: String) -> Result<Self> {
        Action::new(&value)
    }
}

impl From<Action> for String {
    fn from(a: Action) -> String {
        a.0.to_string()
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Regular expression read as a process term.
///
/// The derived ordering (`0 < 1 < actions < sums < products < stars`, then
/// children left to right) is the lexicographic order used by the corpus
/// enumerator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StarExpr {
    Zero,
    One,
    Act(Action),
    Sum(Arc<StarExpr>, Arc<StarExpr>),
    Prod(Arc<StarExpr>, Arc<StarExpr>),
    Star(Arc<StarExpr>),
}

impl StarExpr {
    pub fn act(name: &str) -> Result<Self> {
        Action::new(name).map(StarExpr::Act)
    }

    pub fn sum(left: StarExpr, right: StarExpr) -> Self {
        StarExpr::Sum(Arc::new(left), Arc::new(right))
    }

    pub fn prod(left: StarExpr, right: StarExpr) -> Self {
        StarExpr::Prod(Arc::new(left), Arc::new(right))
    }

    pub fn star(body: StarExpr) -> Self {
        StarExpr::Star(Arc::new(body))
    }

    /// Maximal nesting depth of stars.
    pub fn star_height(&self) -> usize {
        match self {
            StarExpr::Zero | StarExpr::One | StarExpr::Act(_) => 0,
            StarExpr::Sum(l, r) | StarExpr::Prod(l, r) => l.star_height().max(r.star_height()),
            StarExpr::Star(body) => 1 + body.star_height(),
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            StarExpr::Zero | StarExpr::One | StarExpr::Act(_) => 1,
            StarExpr::Sum(l, r) | StarExpr::Prod(l, r) => 1 + l.size() + r.size(),
            StarExpr::Star(body) => 1 + body.size(),
        }
    }

    pub fn is_star(&self) -> bool {
        matches!(self, StarExpr::Star(_))
    }

    /// Actions occurring in the expression.
    pub fn actions(&self) -> std::collections::BTreeSet<Action> {
        let mut out = std::collections::BTreeSet::new();
        self.collect_actions(&mut out);
        out
    }

    fn collect_actions(&self, out: &mut std::collections::BTreeSet<Action>) {
        match self {
            StarExpr::Zero | StarExpr::One => {}
            StarExpr::Act(a) => {
                out.insert(a.clone());
            }
            StarExpr::Sum(l, r) | StarExpr::Prod(l, r) => {
                l.collect_actions(out);
                r.collect_actions(out);
            }
            StarExpr::Star(body) => body.collect_actions(out),
        }
    }
}

impl fmt::Display for StarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_star(self))
    }
}

impl fmt::Debug for StarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

impl std::str::FromStr for StarExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_star_expr(s)
    }
}

/// A star expression under layers of `.` and the stacked product `@`.
///
/// Invariants maintained by the constructors: the tail of `SStack` is a
/// star, and the head of `SProd` is never `Plain`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StackedExpr {
    Plain(StarExpr),
    SProd(Arc<StackedExpr>, StarExpr),
    SStack(Arc<StackedExpr>, StarExpr),
}

impl StackedExpr {
    /// `head . tail`, collapsing to a plain product when `head` is plain.
    pub fn prod(head: StackedExpr, tail: StarExpr) -> Self {
        match head {
            StackedExpr::Plain(e) => StackedExpr::Plain(StarExpr::prod(e, tail)),
            head => StackedExpr::SProd(Arc::new(head), tail),
        }
    }

    /// `head @ tail`; `tail` must be a star.
    pub fn stack(head: StackedExpr, tail: StarExpr) -> Result<Self> {
        if tail.is_star() {
            Ok(StackedExpr::SStack(Arc::new(head), tail))
        } else {
            Err(Error::InvalidChart(format!("stacked product tail `{tail}` is not a star")))
        }
    }

    pub(crate) fn stack_unchecked(head: StackedExpr, tail: StarExpr) -> Self {
        debug_assert!(tail.is_star());
        StackedExpr::SStack(Arc::new(head), tail)
    }

    pub fn is_plain(&self) -> bool {
        matches!(self, StackedExpr::Plain(_))
    }

    pub fn as_plain(&self) -> Option<&StarExpr> {
        match self {
            StackedExpr::Plain(e) => Some(e),
            _ => None,
        }
    }

    /// Star height, taking the maximum over the components of `.` and `@`.
    pub fn star_height(&self) -> usize {
        match self {
            StackedExpr::Plain(e) => e.star_height(),
            StackedExpr::SProd(head, tail) | StackedExpr::SStack(head, tail) => {
                head.star_height().max(tail.star_height())
            }
        }
    }

    /// Reads every `@` as `.`.
    pub fn project(&self) -> StarExpr {
        match self {
            StackedExpr::Plain(e) => e.clone(),
            StackedExpr::SProd(head, tail) | StackedExpr::SStack(head, tail) => {
                StarExpr::prod(head.project(), tail.clone())
            }
        }
    }

    /// Splits into the applicative context and the innermost plain
    /// expression, so that `fill(&cxt, Plain(e))` rebuilds `self`.
    pub fn decompose(&self) -> (AppCxt, StarExpr) {
        let mut layers = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                StackedExpr::Plain(e) => {
                    // layers were collected outside-in
                    let cxt = layers.into_iter().rev().fold(AppCxt::Hole, |inner, layer| match layer {
                        Layer::Prod(t) => AppCxt::CProd(Box::new(inner), t),
                        Layer::Stack(t) => AppCxt::CStack(Box::new(inner), t),
                    });
                    return (cxt, e.clone());
                }
                StackedExpr::SProd(head, tail) => {
                    layers.push(Layer::Prod(tail.clone()));
                    cur = head;
                }
                StackedExpr::SStack(head, tail) => {
                    layers.push(Layer::Stack(tail.clone()));
                    cur = head;
                }
            }
        }
    }

    /// Like [`decompose`](Self::decompose), but additionally peels the left
    /// factors of a plain product head into `CProd` layers, so the returned
    /// expression is never a product. This is the decomposition under which
    /// every loop-entry step departs from a star.
    pub fn decompose_head(&self) -> (AppCxt, StarExpr) {
        let (mut cxt, mut e) = self.decompose();
        while let StarExpr::Prod(l, r) = e {
            cxt = cxt.wrap_innermost_prod((*r).clone());
            e = (*l).clone();
        }
        (cxt, e)
    }
}

enum Layer {
    Prod(StarExpr),
    Stack(StarExpr),
}

impl fmt::Display for StackedExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

impl fmt::Debug for StackedExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

impl From<StarExpr> for StackedExpr {
    fn from(e: StarExpr) -> Self {
        StackedExpr::Plain(e)
    }
}

/// Applicative context: a hole under layers of `. e` and `@ e*`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum AppCxt {
    Hole,
    CProd(Box<AppCxt>, StarExpr),
    CStack(Box<AppCxt>, StarExpr),
}

impl AppCxt {
    /// Substitutes `expr` for the hole.
    pub fn fill(&self, expr: StackedExpr) -> StackedExpr {
        match self {
            AppCxt::Hole => expr,
            AppCxt::CProd(inner, tail) => StackedExpr::prod(inner.fill(expr), tail.clone()),
            AppCxt::CStack(inner, tail) => StackedExpr::stack_unchecked(inner.fill(expr), tail.clone()),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            AppCxt::Hole => 0,
            AppCxt::CProd(inner, _) | AppCxt::CStack(inner, _) => 1 + inner.depth(),
        }
    }

    /// True when the layer directly around the hole is a `CProd`.
    pub fn innermost_is_prod(&self) -> bool {
        match self {
            AppCxt::Hole => false,
            AppCxt::CProd(inner, _) if matches!(**inner, AppCxt::Hole) => true,
            AppCxt::CProd(inner, _) | AppCxt::CStack(inner, _) => inner.innermost_is_prod(),
        }
    }

    // Inserts a new `. tail` layer directly around the hole.
    fn wrap_innermost_prod(self, tail: StarExpr) -> AppCxt {
        match self {
            AppCxt::Hole => AppCxt::CProd(Box::new(AppCxt::Hole), tail),
            AppCxt::CProd(inner, t) => AppCxt::CProd(Box::new(inner.wrap_innermost_prod(tail)), t),
            AppCxt::CStack(inner, t) => AppCxt::CStack(Box::new(inner.wrap_innermost_prod(tail)), t),
        }
    }
}

impl fmt::Debug for AppCxt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppCxt::Hole => f.write_str("[]"),
            AppCxt::CProd(inner, t) => write!(f, "({inner:?} . {t})"),
            AppCxt::CStack(inner, t) => write!(f, "({inner:?} @ {t})"),
        }
    }
}

/// Free-function form of [`StackedExpr::decompose`].
pub fn decompose(expr: &StackedExpr) -> (AppCxt, StarExpr) {
    expr.decompose()
}

/// Free-function form of [`AppCxt::fill`].
pub fn fill(cxt: &AppCxt, expr: StackedExpr) -> StackedExpr {
    cxt.fill(expr)
}

/// Free-function form of [`StackedExpr::project`].
pub fn project(expr: &StackedExpr) -> StarExpr {
    expr.project()
}

/// Free-function form of [`StackedExpr::star_height`].
pub fn star_height(expr: &StackedExpr) -> usize {
    expr.star_height()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> StarExpr {
        parse_star_expr(s).unwrap()
    }

    fn plain(s: &str) -> StackedExpr {
        StackedExpr::Plain(p(s))
    }

    fn stack(head: StackedExpr, tail: &str) -> StackedExpr {
        StackedExpr::stack(head, p(tail)).unwrap()
    }

    #[test]
    fn action_names() {
        assert!(Action::new("a").is_ok());
        assert!(Action::new("b2").is_ok());
        assert!(Action::new("ab12").is_ok());
        assert!(Action::new("0").is_err());
        assert!(Action::new("1").is_err());
        assert!(Action::new("a1b").is_err());
        assert!(Action::new("").is_err());
    }

    #[test]
    fn star_heights() {
        assert_eq!(p("0").star_height(), 0);
        assert_eq!(p("(a*.b*)*").star_height(), 2);
        // (1 @ a*) . b*
        let e = StackedExpr::prod(stack(plain("1"), "a*"), p("b*"));
        assert_eq!(e.star_height(), 1);
        assert_eq!(stack(plain("1"), "a*").star_height(), 1);
    }

    #[test]
    fn projection() {
        let e = p("(a*.b*)*");
        assert_eq!(StackedExpr::Plain(e.clone()).project(), e);

        let e2 = stack(plain("b*"), "(a*.b*)*");
        assert_eq!(e2.project(), StarExpr::prod(p("b*"), e.clone()));

        let b0 = "(a1.(1 + b1.0) + (a2.(1 + b2.0) + a3.(1 + b3.0)))*";
        let sink = StackedExpr::prod(stack(plain("1.0"), b0), StarExpr::Zero);
        assert_eq!(sink.project(), p(&format!("((1.0).{b0}).0")));
    }

    #[test]
    fn prod_with_plain_head_is_plain() {
        assert_eq!(StackedExpr::prod(plain("a"), p("b")), plain("a.b"));
        assert!(StackedExpr::stack(plain("a"), p("b")).is_err());
    }

    #[test]
    fn decompose_examples() {
        assert_eq!(plain("a").decompose(), (AppCxt::Hole, p("a")));

        let e = p("(a*.b*)*");
        let s = stack(plain("b*"), "(a*.b*)*");
        assert_eq!(s.decompose(), (AppCxt::CStack(Box::new(AppCxt::Hole), e), p("b*")));

        let sink = StackedExpr::prod(stack(plain("1.0"), "b*"), StarExpr::Zero);
        let expected = AppCxt::CProd(Box::new(AppCxt::CStack(Box::new(AppCxt::Hole), p("b*"))), StarExpr::Zero);
        assert_eq!(sink.decompose(), (expected, p("1.0")));
    }

    #[test]
    fn decompose_is_outside_in() {
        // ((x @ s) . t) @ u
        let x = stack(StackedExpr::prod(stack(plain("a"), "s*"), p("t")), "u*");
        let (cxt, inner) = x.decompose();
        assert_eq!(inner, p("a"));
        assert_eq!(
            cxt,
            AppCxt::CStack(
                Box::new(AppCxt::CProd(Box::new(AppCxt::CStack(Box::new(AppCxt::Hole), p("s*"))), p("t"))),
                p("u*")
            )
        );
        assert_eq!(cxt.fill(StackedExpr::Plain(inner)), x);
    }

    #[test]
    fn fill_examples() {
        assert_eq!(AppCxt::Hole.fill(plain("a")), plain("a"));
        let e = p("(a*.b*)*");
        let c = AppCxt::CStack(Box::new(AppCxt::Hole), e.clone());
        assert_eq!(c.fill(plain("b*")), stack(plain("b*"), "(a*.b*)*"));
        let g = "(c.a + a.(b + b.a))*";
        let c = AppCxt::CProd(Box::new(AppCxt::Hole), StarExpr::Zero);
        assert_eq!(c.fill(stack(plain("1"), g)), StackedExpr::SProd(Arc::new(stack(plain("1"), g)), StarExpr::Zero));
    }

    #[test]
    fn head_decomposition_peels_plain_products() {
        let (cxt, head) = plain("a*.b.c").decompose_head();
        assert_eq!(head, p("a*"));
        assert!(cxt.innermost_is_prod());
        assert_eq!(cxt.fill(plain("a*")), plain("a*.b.c"));
    }
}
