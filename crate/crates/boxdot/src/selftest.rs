//! The acceptance checks behind `boxdot selftest`, one function per
//! criterion. The integration test suite runs the same functions, so the
//! CLI and `cargo test` agree on what passing means.

use std::sync::OnceLock;

use rand::Rng;

use crate::formula::{boxdot_translate, build_x, modal_degree, parse, print, Formula};
use crate::frame_ops::{
    double, double_model, is_p_morphism, irreflexivize, projection, reflexivize,
    symmetric_closure, transitive_closure, DoubledWorld,
};
use crate::gen;
use crate::prover::{boxdot_member, certify, global_consequence, prove, LogicId, Verdict};
use crate::semantics::{
    check_admissible_closure, eval, is_reflexive, is_serial, is_symmetric, is_total,
    is_transitive, valid_in_frame, Frame, GeneralFrame, KripkeFrame, Model, Validity, World,
    WorldSet,
};
use crate::theorem_engine::{c2, demo_conjecture, i2};
use crate::Limits;

#[derive(Clone, Debug)]
pub struct CriterionOutcome {
    pub index: usize,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "criterion {:2} {:<24} {}  {}",
            self.index,
            self.name,
            if self.pass { "pass" } else { "FAIL" },
            self.detail
        )
    }
}

fn outcome(index: usize, name: &'static str, pass: bool, detail: String) -> CriterionOutcome {
    CriterionOutcome {
        index,
        name,
        pass,
        detail,
    }
}

const CLOSURE_SEED: u64 = 0xD0B1;
const TRUTH_LEMMA_SEED: u64 = 0x7A;
const SAMPLE_SEED: u64 = 0x6A11;

/// The shared 100-formula sample (degree <= 3, <= 12 connectives, q-free).
fn sample_formulas() -> &'static [Formula] {
    static SAMPLE: OnceLock<Vec<Formula>> = OnceLock::new();
    SAMPLE.get_or_init(|| {
        let mut rng = gen::seeded(SAMPLE_SEED);
        (0..100)
            .map(|_| {
                let cfg = gen::FormulaGenConfig {
                    vars: vec!["p".into(), "r".into(), "s".into()],
                    max_degree: 3,
                    max_connectives: rng.gen_range(1..=12),
                };
                gen::random_formula(&mut rng, &cfg)
            })
            .collect()
    })
}

fn closure_sample() -> Vec<KripkeFrame> {
    let mut rng = gen::seeded(CLOSURE_SEED);
    (0..500).map(|_| gen::random_frame(&mut rng, 8)).collect()
}

/// Every frame with up to three worlds (530 in total).
fn all_small_frames() -> Vec<KripkeFrame> {
    let mut out = Vec::new();
    for n in 1..=3usize {
        let worlds: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
        for mask in 0u32..(1 << (n * n)) {
            let mut edges = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    if mask & (1 << (i * n + j)) != 0 {
                        edges.push((i, j));
                    }
                }
            }
            out.push(KripkeFrame::new(worlds.clone(), &edges).unwrap());
        }
    }
    out
}

pub fn criterion_1(limits: &Limits) -> CriterionOutcome {
    let f = parse("p & []([]p -> p) -> []p").unwrap();
    let on_i2 = valid_in_frame(&Frame::Kripke(i2()), &f, limits);
    let on_c2 = valid_in_frame(&Frame::Kripke(c2()), &f, limits);
    let pass = matches!(on_i2, Ok(Validity::Valid))
        && matches!(
            &on_c2,
            Ok(Validity::Invalid { valuation, world: World(0) })
                if valuation.get("p") == Some(&WorldSet(0b01))
        );
    outcome(
        1,
        "example31-reproduction",
        pass,
        "valid on i2, refuted on c2 with p = {w0}".into(),
    )
}

pub fn criterion_2(_limits: &Limits) -> CriterionOutcome {
    let pass = reflexivize(&Frame::Kripke(i2())) == Frame::Kripke(c2())
        && irreflexivize(&Frame::Kripke(c2())) == Frame::Kripke(i2());
    outcome(
        2,
        "reflexivization-identity",
        pass,
        "i2 and c2 swap under (ir)reflexivization".into(),
    )
}

pub fn criterion_3(_limits: &Limits) -> CriterionOutcome {
    let mut failures = 0usize;
    for fr in closure_sample() {
        let refl = reflexivize(&Frame::Kripke(fr.clone()));
        if !is_reflexive(double(&refl).unwrap().kripke()) {
            failures += 1;
        }
        let sym = symmetric_closure(&fr);
        if !is_symmetric(double(&Frame::Kripke(sym)).unwrap().kripke()) {
            failures += 1;
        }
        let trans = transitive_closure(&fr);
        if !is_transitive(double(&Frame::Kripke(trans)).unwrap().kripke()) {
            failures += 1;
        }
        // sanity extensions: seriality and totality transfer too
        if is_serial(&fr) && !is_serial(double(&Frame::Kripke(fr.clone())).unwrap().kripke()) {
            failures += 1;
        }
        if is_total(&fr) && !is_total(double(&Frame::Kripke(fr)).unwrap().kripke()) {
            failures += 1;
        }
    }
    outcome(
        3,
        "doubling-closure",
        failures == 0,
        format!("500 frames, {failures} failures"),
    )
}

pub fn criterion_4(_limits: &Limits) -> CriterionOutcome {
    let mut failures = 0usize;
    for fr in closure_sample() {
        let source = Frame::Kripke(fr);
        let doubled = double(&source).unwrap();
        let pi = projection(&doubled).unwrap();
        if is_p_morphism(&doubled, &source, &pi).is_err() {
            failures += 1;
        }
    }
    outcome(
        4,
        "projection-certificate",
        failures == 0,
        format!("500 projections certified, {failures} failures"),
    )
}

pub fn criterion_5(_limits: &Limits) -> CriterionOutcome {
    let mut rng = gen::seeded(TRUTH_LEMMA_SEED);
    let mut failures = 0usize;
    for _ in 0..300 {
        let m = gen::random_model(&mut rng, 6, &["p", "r", "s"]);
        let cfg = gen::FormulaGenConfig {
            vars: vec!["p".into(), "r".into(), "s".into()],
            max_degree: 3,
            max_connectives: rng.gen_range(1..=10),
        };
        let f = gen::random_formula(&mut rng, &cfg);
        let doubled = double_model(&m, "q").unwrap();
        let n = m.frame().kripke().len();
        for w in 0..n {
            for tag in 0..2 {
                let copy = DoubledWorld::new(World(w), tag).index(n);
                if eval(&doubled, copy, &f) != eval(&m, World(w), &f) {
                    failures += 1;
                }
            }
        }
    }
    outcome(
        5,
        "truth-lemma",
        failures == 0,
        format!("300 doubled models, {failures} disagreements"),
    )
}

pub fn criterion_6(limits: &Limits) -> CriterionOutcome {
    let mut failures = 0usize;
    let mut budget_hit = false;
    for f in sample_formulas() {
        let equivalence = Formula::iff(f.clone(), boxdot_translate(f));
        match prove(LogicId::T, &equivalence, limits) {
            Ok(result) if result.verdict == Verdict::Proved => {}
            Ok(_) => failures += 1,
            Err(_) => budget_hit = true,
        }
    }
    outcome(
        6,
        "t-equivalence",
        failures == 0 && !budget_hit,
        format!(
            "100 equivalences proved in T, {failures} failures{}",
            if budget_hit { ", budget exceeded" } else { "" }
        ),
    )
}

pub fn criterion_7(limits: &Limits) -> CriterionOutcome {
    let mut disagreements = 0usize;
    for f in sample_formulas() {
        let member = match boxdot_member(LogicId::K, f, limits) {
            Ok(b) => b,
            Err(_) => {
                disagreements += 1;
                continue;
            }
        };
        let in_t = match prove(LogicId::T, f, limits) {
            Ok(result) => result.verdict == Verdict::Proved,
            Err(_) => {
                disagreements += 1;
                continue;
            }
        };
        if member != in_t {
            disagreements += 1;
        }
    }
    outcome(
        7,
        "bdi-k-equals-t",
        disagreements == 0,
        format!("100 formulas, {disagreements} disagreements"),
    )
}

pub fn criterion_8(limits: &Limits) -> CriterionOutcome {
    let phi = parse("[]p -> [][]p").unwrap();
    let x = build_x(&phi, "q").unwrap();
    let x_bd: Vec<Formula> = x.iter().map(boxdot_translate).collect();

    let mut pass = true;
    let mut notes = Vec::new();
    for psi in [parse("p").unwrap(), parse("[]p").unwrap()] {
        let psi_bd = boxdot_translate(&psi);
        let goal = Formula::imp(Formula::boxed(psi_bd.clone()), psi_bd);
        match global_consequence(LogicId::K, &x_bd, &goal, 0, limits) {
            Ok(Some(0)) => {}
            other => {
                pass = false;
                notes.push(format!("unboxing of {} gave {:?}", print(&psi), other));
            }
        }
    }

    let equivalence = Formula::iff(phi.clone(), boxdot_translate(&phi));
    match global_consequence(LogicId::K, &x_bd, &equivalence, 3, limits) {
        Ok(Some(n)) if n <= modal_degree(&phi) => notes.push(format!("equivalence at n = {n}")),
        other => {
            pass = false;
            notes.push(format!("equivalence gave {other:?}"));
        }
    }
    outcome(
        8,
        "claim-instances",
        pass,
        format!("unboxings at n = 0; {}", notes.join("; ")),
    )
}

pub fn criterion_9(limits: &Limits) -> CriterionOutcome {
    match demo_conjecture(limits) {
        Ok(report) => {
            let doubled_reflexive = is_reflexive(report.doubled_model.frame().kripke());
            let pass = report.checks.all_pass() && doubled_reflexive && report.n <= 2;
            outcome(
                9,
                "main-theorem-witness",
                pass,
                format!(
                    "|X| = {}, n = {}, all six checks {}",
                    report.x.len(),
                    report.n,
                    if report.checks.all_pass() { "true" } else { "FALSE" }
                ),
            )
        }
        Err(err) => outcome(9, "main-theorem-witness", false, format!("error: {err}")),
    }
}

pub fn criterion_10(limits: &Limits) -> CriterionOutcome {
    let frames = all_small_frames();
    let reflexive: Vec<&KripkeFrame> = frames.iter().filter(|f| is_reflexive(f)).collect();

    let mut uncertified = 0usize;
    let mut unsound = 0usize;

    // refuted verdicts across the sample must certify; proved verdicts
    // must be valid on every small frame of the matching class
    let mut check = |logic: LogicId, f: &Formula| {
        let result = match prove(logic, f, limits) {
            Ok(r) => r,
            Err(_) => return,
        };
        match result.verdict {
            Verdict::Refuted => {
                if !certify(&result, f).unwrap_or(false) {
                    uncertified += 1;
                }
            }
            Verdict::Proved => {
                let frames_of_class: Vec<&KripkeFrame> = match logic {
                    LogicId::K => frames.iter().collect(),
                    LogicId::T => reflexive.clone(),
                    LogicId::K4 => frames.iter().filter(|fr| is_transitive(fr)).collect(),
                    LogicId::S4 => frames
                        .iter()
                        .filter(|fr| is_reflexive(fr) && is_transitive(fr))
                        .collect(),
                };
                for fr in frames_of_class {
                    match valid_in_frame(&Frame::Kripke(fr.clone()), f, limits) {
                        Ok(Validity::Valid) => {}
                        _ => unsound += 1,
                    }
                }
            }
        }
    };

    for f in sample_formulas() {
        check(LogicId::T, f);
        check(LogicId::K, &boxdot_translate(f));
        let equivalence = Formula::iff(f.clone(), boxdot_translate(f));
        check(LogicId::T, &equivalence);
    }
    for text in ["[]p -> [][]p", "[]p -> p", "<>p -> []p", "[]<>p -> <>[]p"] {
        let f = parse(text).unwrap();
        for logic in [LogicId::K, LogicId::T, LogicId::K4, LogicId::S4] {
            check(logic, &f);
        }
    }

    outcome(
        10,
        "prover-certificates",
        uncertified == 0 && unsound == 0,
        format!(
            "{uncertified} bad certificates, {unsound} soundness failures on {} small frames",
            frames.len()
        ),
    )
}

pub fn criterion_11(_limits: &Limits) -> CriterionOutcome {
    let gf = GeneralFrame::new(c2(), vec![WorldSet::EMPTY, WorldSet(0b11)]).unwrap();
    let doubled = double(&Frame::General(gf)).unwrap();
    let family_size = doubled.admissible().map(<[WorldSet]>::len);
    let closed = match &doubled {
        Frame::General(g) => check_admissible_closure(g).is_ok(),
        Frame::Kripke(_) => false,
    };
    outcome(
        11,
        "general-frame-doubling",
        closed && family_size == Some(4),
        format!(
            "doubled family has {} sets, closure {}",
            family_size.unwrap_or(0),
            if closed { "holds" } else { "FAILS" }
        ),
    )
}

/// A doubled model evaluates formulas exactly as its source, which is the
/// workhorse behind criterion 5; exposed for reuse.
pub fn truth_lemma_holds(m: &Model, f: &Formula) -> bool {
    let doubled = match double_model(m, "q") {
        Ok(d) => d,
        Err(_) => return false,
    };
    let n = m.frame().kripke().len();
    (0..n).all(|w| {
        (0..2).all(|tag| {
            let copy = DoubledWorld::new(World(w), tag).index(n);
            eval(&doubled, copy, f) == eval(m, World(w), f)
        })
    })
}

pub fn run_all(limits: &Limits) -> Vec<CriterionOutcome> {
    vec![
        criterion_1(limits),
        criterion_2(limits),
        criterion_3(limits),
        criterion_4(limits),
        criterion_5(limits),
        criterion_6(limits),
        criterion_7(limits),
        criterion_8(limits),
        criterion_9(limits),
        criterion_10(limits),
        criterion_11(limits),
    ]
}
