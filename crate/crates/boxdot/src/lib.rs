//! A workbench for the boxdot translation of modal logic.
//!
//! The library provides:
//!
//! - [`formula`]: modal formulas, parsing/printing, the boxdot translation,
//!   and the syntactic builders for the assumption set `X` and the
//!   separating formula `chi`;
//! - [`semantics`]: finite Kripke and general frames, models, evaluation,
//!   and frame validity by exhaustive valuation search;
//! - [`frame_ops`]: validity-preserving frame constructions (generated
//!   subframes, p-morphisms, frame doubling, reflexivization);
//! - [`prover`]: tableau decision procedures for K, T, K4, S4 with
//!   certified countermodels, plus global consequence via the deduction
//!   theorem;
//! - [`theorem_engine`]: end-to-end construction and verification of the
//!   separating-formula witness on concrete instances;
//! - [`cli`]: the `boxdot` command-line front end.

pub mod cli;
pub mod formula;
pub mod frame_ops;
pub mod gen;
pub mod io;
pub mod prover;
pub mod selftest;
pub mod semantics;
pub mod theorem_engine;

/// Resource caps for the exhaustive searches.
///
/// `valuations` bounds the number of candidate valuations a frame-validity
/// check (or candidate maps a p-morphism search) may enumerate;
/// `tableau_nodes` bounds the number of rule applications in a single
/// tableau run. Exceeding a cap is reported as a distinct error, never as
/// a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub valuations: u64,
    pub tableau_nodes: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            valuations: 1 << 22,
            tableau_nodes: 1_000_000,
        }
    }
}

impl Limits {
    /// Limits with both caps set to the same value, as used by the
    /// `BOXDOT_BUDGET` environment override.
    pub fn uniform(budget: u64) -> Self {
        Limits {
            valuations: budget,
            tableau_nodes: budget,
        }
    }
}

#[cfg(test)]
pub(crate) mod testutil {
    use crate::formula::Formula;
    use proptest::prelude::*;

    /// Random formulas over `p`, `q`, `r` for property tests.
    pub fn arb_formula(max_depth: u32) -> impl Strategy<Value = Formula> {
        let leaf = prop_oneof![
            4 => prop_oneof![Just("p"), Just("q"), Just("r")].prop_map(Formula::var),
            1 => Just(Formula::Falsum),
            1 => Just(Formula::Verum),
        ];
        leaf.prop_recursive(max_depth, 64, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                inner.clone().prop_map(Formula::boxed),
                inner.clone().prop_map(Formula::dia),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| Formula::iff(a, b)),
            ]
        })
    }
}
