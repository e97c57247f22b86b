//! Mechanical execution of the separating-formula construction on
//! concrete instances: given a theorem `phi` of `L` refuted in a model on
//! an `L0`-frame, build the assumption set `X`, find the deduction index
//! `n`, assemble `chi = []^n /\X -> phi`, double the model, and certify
//! every step of the argument semantically.

use std::collections::BTreeMap;

use crate::formula::{boxdot_translate, build_chi, build_x, fresh_variable, Formula};
use crate::frame_ops::{double, double_model, DoubledWorld, FrameOpsError};
use crate::prover::{global_consequence, prove, LogicId, ProverError, Verdict};
use crate::semantics::{
    eval, is_l_frame, valid_in_frame, Frame, KripkeFrame, Model, SemanticsError, World, WorldSet,
};
use crate::Limits;

/// The two-element cluster: both worlds see both worlds.
pub fn c2() -> KripkeFrame {
    KripkeFrame::cluster(2)
}

/// The irreflexive swap frame on two worlds: each sees only the other.
pub fn i2() -> KripkeFrame {
    KripkeFrame::new(vec!["w0".into(), "w1".into()], &[(0, 1), (1, 0)]).unwrap()
}

/// The reflexive (non-transitive) 3-chain with `p` at the first two
/// worlds and root `w0`: a reflexive countermodel of `[]p -> [][]p`.
pub fn reflexive_chain3_model() -> Model {
    let fr = KripkeFrame::new(
        vec!["w0".into(), "w1".into(), "w2".into()],
        &[(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)],
    )
    .unwrap();
    Model::new(
        Frame::Kripke(fr),
        [("p".to_owned(), WorldSet(0b011))].into(),
        Some(World(0)),
    )
    .unwrap()
}

/// The named verdicts of a witness run, in report order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ChecksRecord {
    pub x_translation_consequence: bool,
    pub two_m_satisfies_x: bool,
    pub two_m_refutes_phi: bool,
    pub chi_refuted_in_doubled_frame: bool,
    pub doubled_frame_is_l0_frame: bool,
    pub chi_bd_proved_in_l: bool,
}

impl ChecksRecord {
    pub fn all_pass(&self) -> bool {
        self.x_translation_consequence
            && self.two_m_satisfies_x
            && self.two_m_refutes_phi
            && self.chi_refuted_in_doubled_frame
            && self.doubled_frame_is_l0_frame
            && self.chi_bd_proved_in_l
    }
}

/// Full record of one witness construction.
#[derive(Clone, Debug)]
pub struct WitnessReport {
    pub phi: Formula,
    pub q: String,
    pub x: Vec<Formula>,
    pub n: usize,
    pub chi: Formula,
    pub chi_bd: Formula,
    pub source_model: Model,
    pub doubled_model: Model,
    pub checks: ChecksRecord,
    /// A world of the doubled model falsifying `chi`, when one exists.
    pub chi_refuting_world: Option<String>,
    /// The stronger conclusion: `X` does not globally yield `phi` over
    /// `L0`-frames, read off from the doubled model (checks b, c, e).
    pub x_nonconsequence_in_l0: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum WitnessError {
    #[error("phi is not a theorem of {0}")]
    PhiNotTheorem(LogicId),
    #[error("phi is not refuted at the chosen root of the source model")]
    PhiNotRefutedAtRoot,
    #[error("source frame does not validate the L0 axioms")]
    SourceFrameNotL0,
    #[error("no deduction index n <= {0} proves the translated consequence")]
    NoDeductionIndex(usize),
    #[error(transparent)]
    Prover(#[from] ProverError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    FrameOps(#[from] FrameOpsError),
}

/// Run the whole construction for `phi` (a theorem of `logic` refuted at
/// `root` of `source`, whose frame validates `l0_axioms`) and certify
/// each step. The fresh variable avoids `phi`, the axioms, and every
/// variable valued in the source model.
pub fn witness(
    phi: &Formula,
    source: &Model,
    root: World,
    logic: LogicId,
    l0_axioms: &[Formula],
    n_max: usize,
    limits: &Limits,
) -> Result<WitnessReport, WitnessError> {
    if prove(logic, phi, limits)?.verdict != Verdict::Proved {
        return Err(WitnessError::PhiNotTheorem(logic));
    }
    if eval(source, root, phi) {
        return Err(WitnessError::PhiNotRefutedAtRoot);
    }
    if !is_l_frame(source.frame(), l0_axioms, limits)? {
        return Err(WitnessError::SourceFrameNotL0);
    }

    let valuation_vars: Vec<Formula> = source
        .valuation()
        .keys()
        .map(|v| Formula::var(v.clone()))
        .collect();
    let q = fresh_variable(
        std::iter::once(phi)
            .chain(l0_axioms)
            .chain(valuation_vars.iter()),
    );
    let x = build_x(phi, &q).expect("q was chosen fresh");

    let x_bd: Vec<Formula> = x.iter().map(boxdot_translate).collect();
    let phi_bd = boxdot_translate(phi);
    let n = global_consequence(logic, &x_bd, &phi_bd, n_max, limits)?
        .ok_or(WitnessError::NoDeductionIndex(n_max))?;

    let chi = build_chi(phi, &x, n);
    let chi_bd = boxdot_translate(&chi);

    let chi_bd_proved_in_l = prove(logic, &chi_bd, limits)?.verdict == Verdict::Proved;

    let doubled = double_model(source, &q)?;
    let two_m_satisfies_x = verify_x_holds(&doubled, &x).is_ok();
    let base_count = source.frame().kripke().len();
    let root_copy = DoubledWorld::new(root, 0).index(base_count);
    let two_m_refutes_phi = !eval(&doubled, root_copy, phi);

    let dk = doubled.frame().kripke();
    let chi_refuting_world = (0..dk.len())
        .map(World)
        .find(|w| !eval(&doubled, *w, &chi))
        .map(|w| dk.world_name(w).to_owned());

    let doubled_frame = double(source.frame())?;
    let doubled_frame_is_l0_frame = is_l_frame(&doubled_frame, l0_axioms, limits)?;

    let checks = ChecksRecord {
        x_translation_consequence: true,
        two_m_satisfies_x,
        two_m_refutes_phi,
        chi_refuted_in_doubled_frame: chi_refuting_world.is_some(),
        doubled_frame_is_l0_frame,
        chi_bd_proved_in_l,
    };
    let x_nonconsequence_in_l0 =
        two_m_satisfies_x && two_m_refutes_phi && doubled_frame_is_l0_frame;

    Ok(WitnessReport {
        phi: phi.clone(),
        q,
        x,
        n,
        chi,
        chi_bd,
        source_model: source.clone(),
        doubled_model: doubled,
        checks,
        chi_refuting_world,
        x_nonconsequence_in_l0,
    })
}

/// A member of `X` failing somewhere in a doubled model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XViolation {
    pub formula: Formula,
    pub world: String,
}

/// Check that every member of `x` holds at every world of the doubled
/// model; the first failure is reported with its formula and world.
pub fn verify_x_holds(doubled: &Model, x: &[Formula]) -> Result<(), XViolation> {
    let k = doubled.frame().kripke();
    for member in x {
        for i in 0..k.len() {
            if !eval(doubled, World(i), member) {
                return Err(XViolation {
                    formula: member.clone(),
                    world: k.world_name(World(i)).to_owned(),
                });
            }
        }
    }
    Ok(())
}

/// Report of the two-frame motivating example: the swap frame's logic
/// embeds into the cluster's by the boxdot translation while exceeding it.
#[derive(Clone, Debug)]
pub struct Example31Report {
    pub reflexivized_i2_equals_c2: bool,
    pub formula: Formula,
    pub valid_in_i2: bool,
    pub invalid_in_c2: bool,
    pub c2_counter_valuation: Option<BTreeMap<String, WorldSet>>,
    pub c2_counter_world: Option<String>,
    pub corpus_size: usize,
    pub bdi_mismatches: Vec<Formula>,
}

impl Example31Report {
    pub fn all_pass(&self) -> bool {
        self.reflexivized_i2_equals_c2
            && self.valid_in_i2
            && self.invalid_in_c2
            && self.bdi_mismatches.is_empty()
    }
}

const EXAMPLE31_CORPUS_SEED: u64 = 0x31;
const EXAMPLE31_CORPUS_SIZE: usize = 50;

/// The fixed formula corpus for the bdi-agreement sample.
pub fn example31_corpus() -> Vec<Formula> {
    use rand::Rng;
    let mut rng = crate::gen::seeded(EXAMPLE31_CORPUS_SEED);
    (0..EXAMPLE31_CORPUS_SIZE)
        .map(|_| {
            let cfg = crate::gen::FormulaGenConfig {
                vars: vec!["p".into(), "q".into(), "r".into()],
                max_degree: 2,
                max_connectives: rng.gen_range(1..9),
            };
            crate::gen::random_formula(&mut rng, &cfg)
        })
        .collect()
}

/// Reproduce the motivating example: reflexivizing the swap frame gives
/// the cluster, the formula `p & []([]p -> p) -> []p` separates the two
/// frames, and translated validity on the swap frame tracks plain
/// validity on the cluster over a fixed 50-formula corpus.
pub fn example_31(limits: &Limits) -> Result<Example31Report, SemanticsError> {
    let i2_frame = Frame::Kripke(i2());
    let c2_frame = Frame::Kripke(c2());

    let reflexivized_i2_equals_c2 =
        crate::frame_ops::reflexivize(&i2_frame) == c2_frame;

    let formula = crate::formula::parse("p & []([]p -> p) -> []p").unwrap();
    let valid_in_i2 = valid_in_frame(&i2_frame, &formula, limits)?.is_valid();
    let (invalid_in_c2, c2_counter_valuation, c2_counter_world) =
        match valid_in_frame(&c2_frame, &formula, limits)? {
            crate::semantics::Validity::Valid => (false, None, None),
            crate::semantics::Validity::Invalid { valuation, world } => (
                true,
                Some(valuation),
                Some(c2_frame.kripke().world_name(world).to_owned()),
            ),
        };

    let corpus = example31_corpus();
    let mut bdi_mismatches = Vec::new();
    for f in &corpus {
        let translated_on_i2 =
            valid_in_frame(&i2_frame, &boxdot_translate(f), limits)?.is_valid();
        let plain_on_c2 = valid_in_frame(&c2_frame, f, limits)?.is_valid();
        if translated_on_i2 != plain_on_c2 {
            bdi_mismatches.push(f.clone());
        }
    }

    Ok(Example31Report {
        reflexivized_i2_equals_c2,
        formula,
        valid_in_i2,
        invalid_in_c2,
        c2_counter_valuation,
        c2_counter_world,
        corpus_size: corpus.len(),
        bdi_mismatches,
    })
}

/// One row of a doubling-assumption check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssumptionRow {
    pub label: String,
    pub frame_is_l0: bool,
    pub doubled_is_l0: bool,
}

/// For each frame, whether it and its double validate the axioms.
pub fn check_assumption(
    frames: &[(String, Frame)],
    l0_axioms: &[Formula],
    limits: &Limits,
) -> Result<Vec<AssumptionRow>, SemanticsError> {
    frames
        .iter()
        .map(|(label, fr)| {
            let doubled = double(fr)?;
            Ok(AssumptionRow {
                label: label.clone(),
                frame_is_l0: is_l_frame(fr, l0_axioms, limits)?,
                doubled_is_l0: is_l_frame(&doubled, l0_axioms, limits)?,
            })
        })
        .collect()
}

/// The end-to-end demo instance: `phi = []p -> [][]p` over K4, with the
/// T axiom for `L0` and the reflexive 3-chain countermodel.
pub fn demo_conjecture(limits: &Limits) -> Result<WitnessReport, WitnessError> {
    let phi = crate::formula::parse("[]p -> [][]p").unwrap();
    let source = reflexive_chain3_model();
    let axioms = [crate::formula::parse("[]p -> p").unwrap()];
    witness(&phi, &source, World(0), LogicId::K4, &axioms, 4, limits)
}
