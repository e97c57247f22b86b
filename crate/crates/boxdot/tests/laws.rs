//! Cross-module laws: the algebra connecting the translation, the
//! semantics, and the frame constructions.

use rand::Rng;

use boxdot::formula::{box_le_n, boxdot_translate, dotted_box, Formula};
use boxdot::frame_ops::{find_p_morphism, generated_subframe, reflexivize};
use boxdot::gen;
use boxdot::prover::{prove, LogicId, Verdict};
use boxdot::semantics::{valid_in_frame, Frame, WorldSet};
use boxdot::Limits;

fn random_small_formula(rng: &mut impl Rng, max_degree: usize) -> Formula {
    let cfg = gen::FormulaGenConfig {
        vars: vec!["p".into(), "r".into()],
        max_degree,
        max_connectives: rng.gen_range(1..=6),
    };
    gen::random_formula(rng, &cfg)
}

/// Iterating the dotted box n times is K-equivalent to the bounded box
/// stack, which is what lets the deduction-theorem form and the
/// separating formula exchange their antecedents under translation.
#[test]
fn dotted_box_iteration_matches_bounded_box_stack() {
    let limits = Limits::default();
    let mut rng = gen::seeded(31);
    for _ in 0..25 {
        let f = random_small_formula(&mut rng, 2);
        for n in 0..=3 {
            let mut iterated = f.clone();
            for _ in 0..n {
                iterated = dotted_box(&iterated);
            }
            let law = Formula::iff(iterated, box_le_n(n, &f));
            let result = prove(LogicId::K, &law, &limits).unwrap();
            assert_eq!(result.verdict, Verdict::Proved, "n = {n}, f = {f}");
        }
    }
}

/// Validity transfers to generated subframes.
#[test]
fn generated_subframes_preserve_validity() {
    let limits = Limits::default();
    let mut rng = gen::seeded(32);
    let mut transfers = 0;
    for _ in 0..120 {
        let fr = Frame::Kripke(gen::random_frame(&mut rng, 5));
        let f = random_small_formula(&mut rng, 2);
        if !valid_in_frame(&fr, &f, &limits).unwrap().is_valid() {
            continue;
        }
        let n = fr.kripke().len();
        let seed = WorldSet(rng.gen_range(1..(1u64 << n)));
        let (sub, _) = generated_subframe(&fr, seed);
        assert!(
            valid_in_frame(&sub, &f, &limits).unwrap().is_valid(),
            "formula {f} lost on a generated subframe"
        );
        transfers += 1;
    }
    assert!(transfers > 10, "sample too thin: {transfers} valid cases");
}

/// Validity transfers along surjective p-morphisms.
#[test]
fn onto_p_morphisms_preserve_validity() {
    let limits = Limits::default();
    let mut rng = gen::seeded(33);
    let mut transfers = 0;
    let mut attempts = 0;
    while transfers < 15 && attempts < 5000 {
        attempts += 1;
        let src = Frame::Kripke(gen::random_frame(&mut rng, 4));
        let dst = Frame::Kripke(gen::random_frame(&mut rng, 3));
        let Some(_map) = find_p_morphism(&src, &dst, true, &limits).unwrap() else {
            continue;
        };
        let f = random_small_formula(&mut rng, 2);
        if !valid_in_frame(&src, &f, &limits).unwrap().is_valid() {
            continue;
        }
        assert!(
            valid_in_frame(&dst, &f, &limits).unwrap().is_valid(),
            "formula {f} lost along a p-morphic image"
        );
        transfers += 1;
    }
    assert_eq!(transfers, 15, "sample too thin after {attempts} attempts");
}

/// The translation evaluates over the reflexivized frame: a frame
/// validates the translation exactly when its reflexivization validates
/// the original formula.
#[test]
fn translated_validity_is_validity_on_the_reflexivization() {
    let limits = Limits::default();
    let mut rng = gen::seeded(34);
    for _ in 0..150 {
        let fr = Frame::Kripke(gen::random_frame(&mut rng, 4));
        let f = random_small_formula(&mut rng, 2);
        let translated = valid_in_frame(&fr, &boxdot_translate(&f), &limits)
            .unwrap()
            .is_valid();
        let reflexivized = valid_in_frame(&reflexivize(&fr), &f, &limits)
            .unwrap()
            .is_valid();
        assert_eq!(translated, reflexivized, "formula {f}");
    }
}
