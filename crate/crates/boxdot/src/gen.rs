//! Seeded random formulas, frames, and models for the property checks.
//! Everything here is deterministic given the seed, which keeps the
//! selftest and the golden CLI outputs byte-stable.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::formula::Formula;
use crate::semantics::{Frame, KripkeFrame, Model, World, WorldSet};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Debug)]
pub struct FormulaGenConfig {
    pub vars: Vec<String>,
    pub max_degree: usize,
    pub max_connectives: usize,
}

/// A random formula with at most `max_connectives` connectives and modal
/// degree at most `max_degree`.
pub fn random_formula(rng: &mut impl Rng, cfg: &FormulaGenConfig) -> Formula {
    build(rng, cfg, cfg.max_connectives, cfg.max_degree)
}

fn build(rng: &mut impl Rng, cfg: &FormulaGenConfig, budget: usize, degree: usize) -> Formula {
    if budget == 0 {
        return leaf(rng, cfg);
    }
    let max_kind = if degree > 0 { 7 } else { 5 };
    match rng.gen_range(0..max_kind) {
        0 => leaf(rng, cfg),
        1 => Formula::not(build(rng, cfg, budget - 1, degree)),
        2..=4 => {
            let left = rng.gen_range(0..budget);
            let a = build(rng, cfg, left, degree);
            let b = build(rng, cfg, budget - 1 - left, degree);
            match rng.gen_range(0..4) {
                0 => Formula::and(a, b),
                1 => Formula::or(a, b),
                2 => Formula::imp(a, b),
                _ => Formula::iff(a, b),
            }
        }
        5 => Formula::boxed(build(rng, cfg, budget - 1, degree - 1)),
        _ => Formula::dia(build(rng, cfg, budget - 1, degree - 1)),
    }
}

fn leaf(rng: &mut impl Rng, cfg: &FormulaGenConfig) -> Formula {
    // mostly variables, occasionally a constant
    if !cfg.vars.is_empty() && rng.gen_range(0..8) < 7 {
        let i = rng.gen_range(0..cfg.vars.len());
        Formula::var(cfg.vars[i].clone())
    } else if rng.gen_bool(0.5) {
        Formula::Verum
    } else {
        Formula::Falsum
    }
}

/// A random frame with 1..=`max_worlds` worlds named `w0..` and edge
/// density drawn from a small spread.
pub fn random_frame(rng: &mut impl Rng, max_worlds: usize) -> KripkeFrame {
    let n = rng.gen_range(1..=max_worlds);
    let density = [0.2, 0.45, 0.7][rng.gen_range(0..3)];
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if rng.gen_bool(density) {
                edges.push((i, j));
            }
        }
    }
    let worlds = (0..n).map(|i| format!("w{i}")).collect();
    KripkeFrame::new(worlds, &edges).expect("generated frame is well-formed")
}

/// A random Kripke model over `vars`, rooted at `w0`.
pub fn random_model(rng: &mut impl Rng, max_worlds: usize, vars: &[&str]) -> Model {
    let fr = random_frame(rng, max_worlds);
    let full = fr.full_set().0;
    let valuation = vars
        .iter()
        .map(|v| ((*v).to_owned(), WorldSet(rng.gen_range(0..=full))))
        .collect();
    Model::new(Frame::Kripke(fr), valuation, Some(World(0)))
        .expect("generated model is well-formed")
}
