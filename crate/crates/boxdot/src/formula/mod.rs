//! Modal formulas and their syntactic transformations.
//!
//! The AST keeps every connective primitive so formulas print exactly as
//! written; provers normalize internally. `[.]` (boxdot) is parser sugar
//! for `phi & []phi`, not a constructor.

use std::collections::BTreeSet;
use std::fmt;

mod parse;

pub use parse::{parse, ParseError};

/// A formula of monomodal logic.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(String),
    Falsum,
    Verum,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Box(Box<Formula>),
    Dia(Box<Formula>),
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Formula {
        Formula::Var(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn boxed(f: Formula) -> Formula {
        Formula::Box(Box::new(f))
    }

    pub fn dia(f: Formula) -> Formula {
        Formula::Dia(Box::new(f))
    }
}

/// The sign of the fresh variable `q` in the assumption set: `q` under
/// `Pos`, `~q` under `Neg`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Polarity {
    Pos,
    Neg,
}

impl Polarity {
    pub fn literal(self, name: &str) -> Formula {
        match self {
            Polarity::Pos => Formula::var(name),
            Polarity::Neg => Formula::not(Formula::var(name)),
        }
    }
}

// Printer precedence, loosest binds lowest. `&` and `|` associate left,
// `->` and `<->` associate right.
const PREC_IFF: u8 = 1;
const PREC_IMP: u8 = 2;
const PREC_OR: u8 = 3;
const PREC_AND: u8 = 4;
const PREC_UNARY: u8 = 5;
const PREC_ATOM: u8 = 6;

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Var(_) | Formula::Falsum | Formula::Verum => PREC_ATOM,
        Formula::Not(_) | Formula::Box(_) | Formula::Dia(_) => PREC_UNARY,
        Formula::And(..) => PREC_AND,
        Formula::Or(..) => PREC_OR,
        Formula::Imp(..) => PREC_IMP,
        Formula::Iff(..) => PREC_IFF,
    }
}

fn fmt_prec(f: &Formula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let parens = prec(f) < min;
    if parens {
        write!(out, "(")?;
    }
    match f {
        Formula::Var(name) => write!(out, "{name}")?,
        Formula::Falsum => write!(out, "false")?,
        Formula::Verum => write!(out, "true")?,
        Formula::Not(a) => {
            write!(out, "~")?;
            fmt_prec(a, PREC_UNARY, out)?;
        }
        Formula::Box(a) => {
            write!(out, "[]")?;
            fmt_prec(a, PREC_UNARY, out)?;
        }
        Formula::Dia(a) => {
            write!(out, "<>")?;
            fmt_prec(a, PREC_UNARY, out)?;
        }
        Formula::And(a, b) => {
            fmt_prec(a, PREC_AND, out)?;
            write!(out, " & ")?;
            fmt_prec(b, PREC_AND + 1, out)?;
        }
        Formula::Or(a, b) => {
            fmt_prec(a, PREC_OR, out)?;
            write!(out, " | ")?;
            fmt_prec(b, PREC_OR + 1, out)?;
        }
        Formula::Imp(a, b) => {
            fmt_prec(a, PREC_IMP + 1, out)?;
            write!(out, " -> ")?;
            fmt_prec(b, PREC_IMP, out)?;
        }
        Formula::Iff(a, b) => {
            fmt_prec(a, PREC_IFF + 1, out)?;
            write!(out, " <-> ")?;
            fmt_prec(b, PREC_IFF, out)?;
        }
    }
    if parens {
        write!(out, ")")?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_prec(self, 0, out)
    }
}

/// Render `f` in the ASCII grammar with minimal parentheses.
/// `parse(&print(f))` returns `f` back.
pub fn print(f: &Formula) -> String {
    f.to_string()
}

/// The boxdot translation: identity on variables and constants,
/// homomorphic on Boolean connectives, `[]f` becomes `t & []t` for the
/// translated body `t`, and `<>` is translated as `~[]~`.
pub fn boxdot_translate(f: &Formula) -> Formula {
    match f {
        Formula::Var(_) | Formula::Falsum | Formula::Verum => f.clone(),
        Formula::Not(a) => Formula::not(boxdot_translate(a)),
        Formula::And(a, b) => Formula::and(boxdot_translate(a), boxdot_translate(b)),
        Formula::Or(a, b) => Formula::or(boxdot_translate(a), boxdot_translate(b)),
        Formula::Imp(a, b) => Formula::imp(boxdot_translate(a), boxdot_translate(b)),
        Formula::Iff(a, b) => Formula::iff(boxdot_translate(a), boxdot_translate(b)),
        Formula::Box(a) => dotted_box(&boxdot_translate(a)),
        Formula::Dia(a) => {
            let u = boxdot_translate(&Formula::not((**a).clone()));
            Formula::not(dotted_box(&u))
        }
    }
}

/// `[.]f`, that is `f & []f`.
pub fn dotted_box(f: &Formula) -> Formula {
    Formula::and(f.clone(), Formula::boxed(f.clone()))
}

/// All subformulas of `f` (including `f` itself), deduplicated, in order
/// of first occurrence along a left-to-right pre-order traversal. The
/// order is what makes `build_x` deterministic.
pub fn subformulas(f: &Formula) -> Vec<Formula> {
    fn walk<'a>(f: &'a Formula, seen: &mut Vec<&'a Formula>) {
        if seen.contains(&f) {
            return;
        }
        seen.push(f);
        match f {
            Formula::Var(_) | Formula::Falsum | Formula::Verum => {}
            Formula::Not(a) | Formula::Box(a) | Formula::Dia(a) => walk(a, seen),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Imp(a, b)
            | Formula::Iff(a, b) => {
                walk(a, seen);
                walk(b, seen);
            }
        }
    }
    let mut seen = Vec::new();
    walk(f, &mut seen);
    seen.into_iter().cloned().collect()
}

/// Maximum nesting depth of `[]`/`<>` in `f`.
pub fn modal_degree(f: &Formula) -> usize {
    match f {
        Formula::Var(_) | Formula::Falsum | Formula::Verum => 0,
        Formula::Not(a) => modal_degree(a),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
            modal_degree(a).max(modal_degree(b))
        }
        Formula::Box(a) | Formula::Dia(a) => 1 + modal_degree(a),
    }
}

/// All variable names occurring in `f`.
pub fn variables(f: &Formula) -> BTreeSet<String> {
    fn walk(f: &Formula, out: &mut BTreeSet<String>) {
        match f {
            Formula::Var(name) => {
                out.insert(name.clone());
            }
            Formula::Falsum | Formula::Verum => {}
            Formula::Not(a) | Formula::Box(a) | Formula::Dia(a) => walk(a, out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Imp(a, b)
            | Formula::Iff(a, b) => {
                walk(a, out);
                walk(b, out);
            }
        }
    }
    let mut out = BTreeSet::new();
    walk(f, &mut out);
    out
}

/// `f` prefixed with `n` boxes.
pub fn box_n(n: usize, f: &Formula) -> Formula {
    let mut out = f.clone();
    for _ in 0..n {
        out = Formula::boxed(out);
    }
    out
}

/// The conjunction of `[]^i f` for `i = 0..=n`, right-nested with `i`
/// ascending: `box_le_n(2, p)` is `p & ([]p & [][]p)`.
pub fn box_le_n(n: usize, f: &Formula) -> Formula {
    conjoin((0..=n).map(|i| box_n(i, f)))
}

/// Right-nested conjunction in list order; the empty conjunction is `true`.
pub fn conjoin<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
    let items: Vec<Formula> = items.into_iter().collect();
    let mut iter = items.into_iter().rev();
    match iter.next() {
        None => Formula::Verum,
        Some(last) => iter.fold(last, |acc, f| Formula::and(f, acc)),
    }
}

/// The fresh variable `q` did occur in the formula it must avoid.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("variable {q:?} occurs in the input formula")]
pub struct QOccursError {
    pub q: String,
}

/// The assumption set `X`: for every boxed subformula `[]psi` of `phi`
/// (in first-occurrence order) and each sign `e` (positive first), the
/// formula `[](q^e -> psi) -> psi`. Rejects a `q` occurring in `phi`.
pub fn build_x(phi: &Formula, q: &str) -> Result<Vec<Formula>, QOccursError> {
    if variables(phi).contains(q) {
        return Err(QOccursError { q: q.to_owned() });
    }
    let mut out = Vec::new();
    for sub in subformulas(phi) {
        if let Formula::Box(psi) = &sub {
            for pol in [Polarity::Pos, Polarity::Neg] {
                let body = Formula::imp(pol.literal(q), (**psi).clone());
                out.push(Formula::imp(Formula::boxed(body), (**psi).clone()));
            }
        }
    }
    Ok(out)
}

/// The separating formula `chi = []^n /\X -> phi`, with `/\X` the
/// right-nested conjunction of `x` in list order (`true` when empty).
pub fn build_chi(phi: &Formula, x: &[Formula], n: usize) -> Formula {
    Formula::imp(box_n(n, &conjoin(x.iter().cloned())), phi.clone())
}

/// First variable of the scheme `q, q1, q2, ...` not occurring in any of
/// the formulas to avoid.
pub fn fresh_variable<'a>(avoid: impl IntoIterator<Item = &'a Formula>) -> String {
    let mut used = BTreeSet::new();
    for f in avoid {
        used.append(&mut variables(f));
    }
    if !used.contains("q") {
        return "q".to_owned();
    }
    for i in 1.. {
        let name = format!("q{i}");
        if !used.contains(&name) {
            return name;
        }
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::arb_formula;
    use proptest::prelude::*;

    fn p() -> Formula {
        Formula::var("p")
    }

    fn q() -> Formula {
        Formula::var("q")
    }

    #[test]
    fn parse_examples() {
        assert_eq!(
            parse("[]p -> p").unwrap(),
            Formula::imp(Formula::boxed(p()), p())
        );
        assert_eq!(parse("[.]q").unwrap(), Formula::and(q(), Formula::boxed(q())));
        // the motivating formula from the two-frame example
        assert_eq!(
            parse("p & []([]p -> p) -> []p").unwrap(),
            Formula::imp(
                Formula::and(
                    p(),
                    Formula::boxed(Formula::imp(Formula::boxed(p()), p()))
                ),
                Formula::boxed(p())
            )
        );
    }

    #[test]
    fn parse_precedence_and_associativity() {
        assert_eq!(
            parse("p & q | r").unwrap(),
            Formula::or(Formula::and(p(), q()), Formula::var("r"))
        );
        assert_eq!(
            parse("p -> q -> r").unwrap(),
            Formula::imp(p(), Formula::imp(q(), Formula::var("r")))
        );
        assert_eq!(
            parse("p & q & r").unwrap(),
            Formula::and(Formula::and(p(), q()), Formula::var("r"))
        );
        assert_eq!(
            parse("~[]p").unwrap(),
            Formula::not(Formula::boxed(p()))
        );
        assert_eq!(parse("true -> false").unwrap(), Formula::imp(Formula::Verum, Formula::Falsum));
    }

    #[test]
    fn parse_errors_carry_offsets() {
        let err = parse("p &").unwrap_err();
        assert_eq!(err.offset, 3);
        assert!(err.expected.contains("formula"), "{err}");

        let err = parse("[p").unwrap_err();
        assert_eq!(err.offset, 0);

        let err = parse("p $ q").unwrap_err();
        assert_eq!(err.offset, 2);

        let err = parse("P").unwrap_err();
        assert_eq!(err.offset, 0);

        let err = parse("(p").unwrap_err();
        assert_eq!(err.offset, 2);
        assert!(err.found.contains("end of input"), "{err}");

        // non-ASCII input errors cleanly at the offending byte
        let err = parse("p ∧ q").unwrap_err();
        assert_eq!(err.offset, 2);
        assert!(err.found.contains('∧'), "{err}");
    }

    #[test]
    fn print_examples() {
        assert_eq!(print(&Formula::boxed(p())), "[]p");
        assert_eq!(print(&Formula::and(p(), Formula::boxed(p()))), "p & []p");
        assert_eq!(
            print(&Formula::imp(
                Formula::boxed(p()),
                Formula::boxed(Formula::boxed(p()))
            )),
            "[]p -> [][]p"
        );
    }

    #[test]
    fn print_minimal_parens() {
        assert_eq!(print(&parse("(p -> q) -> r").unwrap()), "(p -> q) -> r");
        assert_eq!(print(&parse("p -> (q -> r)").unwrap()), "p -> q -> r");
        assert_eq!(print(&parse("p & (q & r)").unwrap()), "p & (q & r)");
        assert_eq!(print(&parse("(p | q) & r").unwrap()), "(p | q) & r");
        assert_eq!(print(&parse("[](p -> q)").unwrap()), "[](p -> q)");
        assert_eq!(print(&parse("~(p & q)").unwrap()), "~(p & q)");
    }

    #[test]
    fn boxdot_translate_examples() {
        assert_eq!(boxdot_translate(&parse("[]p").unwrap()), parse("p & []p").unwrap());
        // identity on box-free formulas
        assert_eq!(boxdot_translate(&parse("p -> q").unwrap()), parse("p -> q").unwrap());
        // unfolding the definition twice
        assert_eq!(
            boxdot_translate(&parse("[][]p").unwrap()),
            parse("(p & []p) & [](p & []p)").unwrap()
        );
    }

    #[test]
    fn dotted_box_examples() {
        assert_eq!(dotted_box(&p()), parse("p & []p").unwrap());
        assert_eq!(dotted_box(&Formula::Falsum), parse("false & []false").unwrap());
        assert_eq!(dotted_box(&parse("[]p").unwrap()), parse("[]p & [][]p").unwrap());
    }

    #[test]
    fn subformula_examples() {
        let subs = subformulas(&parse("[]p").unwrap());
        assert_eq!(subs, vec![parse("[]p").unwrap(), p()]);

        let subs = subformulas(&parse("[]p -> [][]p").unwrap());
        assert_eq!(
            subs,
            vec![
                parse("[]p -> [][]p").unwrap(),
                parse("[]p").unwrap(),
                p(),
                parse("[][]p").unwrap(),
            ]
        );

        assert_eq!(subformulas(&p()), vec![p()]);
    }

    #[test]
    fn modal_degree_examples() {
        assert_eq!(modal_degree(&parse("p & q").unwrap()), 0);
        assert_eq!(modal_degree(&parse("[]p -> [][]p").unwrap()), 2);
        assert_eq!(modal_degree(&boxdot_translate(&parse("[][]p").unwrap())), 2);
    }

    // independent oracle: the degree is the largest number of modal
    // operators on any root-to-leaf path, computed by enumerating paths
    fn degree_oracle(f: &Formula) -> usize {
        fn leaf_depths(f: &Formula, depth: usize, out: &mut Vec<usize>) {
            match f {
                Formula::Var(_) | Formula::Falsum | Formula::Verum => out.push(depth),
                Formula::Not(a) => leaf_depths(a, depth, out),
                Formula::Box(a) | Formula::Dia(a) => leaf_depths(a, depth + 1, out),
                Formula::And(a, b)
                | Formula::Or(a, b)
                | Formula::Imp(a, b)
                | Formula::Iff(a, b) => {
                    leaf_depths(a, depth, out);
                    leaf_depths(b, depth, out);
                }
            }
        }
        let mut out = Vec::new();
        leaf_depths(f, 0, &mut out);
        out.into_iter().max().unwrap_or(0)
    }

    #[test]
    fn box_n_examples() {
        assert_eq!(box_n(0, &p()), p());
        assert_eq!(box_le_n(1, &p()), parse("p & []p").unwrap());
        assert_eq!(box_le_n(2, &p()), parse("p & ([]p & [][]p)").unwrap());
    }

    #[test]
    fn build_x_examples() {
        let x = build_x(&parse("[]p").unwrap(), "q").unwrap();
        assert_eq!(
            x,
            vec![
                parse("[](q -> p) -> p").unwrap(),
                parse("[](~q -> p) -> p").unwrap(),
            ]
        );

        assert_eq!(build_x(&p(), "q").unwrap(), Vec::new());

        let x = build_x(&parse("[]p -> [][]p").unwrap(), "q").unwrap();
        assert_eq!(
            x,
            vec![
                parse("[](q -> p) -> p").unwrap(),
                parse("[](~q -> p) -> p").unwrap(),
                parse("[](q -> []p) -> []p").unwrap(),
                parse("[](~q -> []p) -> []p").unwrap(),
            ]
        );

        assert_eq!(
            build_x(&parse("q -> []q").unwrap(), "q"),
            Err(QOccursError { q: "q".to_owned() })
        );
    }

    #[test]
    fn build_chi_examples() {
        assert_eq!(build_chi(&p(), &[], 0), parse("true -> p").unwrap());

        let phi = parse("[]p").unwrap();
        let x = build_x(&phi, "q").unwrap();
        assert_eq!(
            build_chi(&phi, &x, 1),
            parse("[](([](q -> p) -> p) & ([](~q -> p) -> p)) -> []p").unwrap()
        );

        let phi = parse("[]p -> [][]p").unwrap();
        let x = build_x(&phi, "q").unwrap();
        let chi = build_chi(&phi, &x, 2);
        assert_eq!(
            chi,
            Formula::imp(
                box_n(2, &conjoin(x.iter().cloned())),
                phi.clone()
            )
        );
    }

    #[test]
    fn fresh_variable_examples() {
        assert_eq!(fresh_variable([&parse("[]p").unwrap()]), "q");
        assert_eq!(fresh_variable([&parse("q -> p").unwrap()]), "q1");
        assert_eq!(fresh_variable([&parse("q & q1").unwrap()]), "q2");
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(f in arb_formula(6)) {
            prop_assert_eq!(parse(&print(&f)).unwrap(), f);
        }

        #[test]
        fn translation_commutes_with_booleans(a in arb_formula(3), b in arb_formula(3)) {
            prop_assert_eq!(
                boxdot_translate(&Formula::and(a.clone(), b.clone())),
                Formula::and(boxdot_translate(&a), boxdot_translate(&b))
            );
            prop_assert_eq!(
                boxdot_translate(&Formula::imp(a.clone(), b.clone())),
                Formula::imp(boxdot_translate(&a), boxdot_translate(&b))
            );
            prop_assert_eq!(
                boxdot_translate(&Formula::not(a.clone())),
                Formula::not(boxdot_translate(&a))
            );
        }

        #[test]
        fn translation_is_identity_exactly_on_modal_free(f in arb_formula(5)) {
            prop_assert_eq!(boxdot_translate(&f) == f, modal_degree(&f) == 0);
        }

        #[test]
        fn translation_preserves_modal_degree(f in arb_formula(5)) {
            prop_assert_eq!(modal_degree(&boxdot_translate(&f)), modal_degree(&f));
        }

        #[test]
        fn modal_degree_matches_the_path_oracle(f in arb_formula(5)) {
            prop_assert_eq!(modal_degree(&f), degree_oracle(&f));
            prop_assert_eq!(modal_degree(&boxdot_translate(&f)), degree_oracle(&boxdot_translate(&f)));
        }

        #[test]
        fn translating_a_box_stack_iterates_the_dotted_box(f in arb_formula(3), n in 0usize..4) {
            let mut iterated = boxdot_translate(&f);
            for _ in 0..n {
                iterated = dotted_box(&iterated);
            }
            prop_assert_eq!(boxdot_translate(&box_n(n, &f)), iterated);
        }

        #[test]
        fn x_has_two_entries_per_boxed_subformula(f in arb_formula(4)) {
            let boxed = subformulas(&f)
                .into_iter()
                .filter(|s| matches!(s, Formula::Box(_)))
                .count();
            // "zz" never occurs in generated formulas
            let x = build_x(&f, "zz").unwrap();
            prop_assert_eq!(x.len(), 2 * boxed);
        }

        #[test]
        fn fresh_variable_is_fresh(f in arb_formula(5)) {
            let name = fresh_variable([&f]);
            prop_assert!(!variables(&f).contains(&name));
        }
    }
}
