//! Validity-preserving frame constructions: generated subframes,
//! p-morphisms (check and search), frame doubling with its projection,
//! reflexivization, and model doubling.

use std::collections::BTreeMap;
use std::fmt;

use crate::semantics::{
    Frame, GeneralFrame, KripkeFrame, Model, SemanticsError, World, WorldSet,
};
use crate::Limits;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FrameOpsError {
    #[error("world {0:?} is not in doubled naming form (name@0 / name@1)")]
    NotDoubledNaming(String),
    #[error("variable {0:?} is already valued in the model")]
    QAlreadyValued(String),
    #[error(
        "p-morphism search needs {required} candidate maps, over the budget of {budget}"
    )]
    SearchBudgetExceeded { required: u128, budget: u64 },
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

/// A total map from the worlds of a source frame to the worlds of a
/// target frame, stored by world index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorldMap(Vec<usize>);

impl WorldMap {
    pub fn new(map: Vec<usize>) -> WorldMap {
        WorldMap(map)
    }

    pub fn apply(&self, w: World) -> World {
        World(self.0[w.0])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Render as a name-to-name map for reports and JSON output.
    pub fn to_names(&self, src: &KripkeFrame, dst: &KripkeFrame) -> BTreeMap<String, String> {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &j)| {
                (
                    src.world_name(World(i)).to_owned(),
                    dst.world_name(World(j)).to_owned(),
                )
            })
            .collect()
    }

    /// Image of the map as a world set of the target frame.
    pub fn image(&self) -> WorldSet {
        let mut out = WorldSet::EMPTY;
        for &j in &self.0 {
            out.insert(World(j));
        }
        out
    }
}

/// First failed p-morphism condition, with the witnessing worlds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PMorphismViolation {
    /// `wRv` but not `f(w) R' f(v)`.
    Forth { w: World, v: World },
    /// `f(w) R' target` but no `u` with `wRu` and `f(u) = target`.
    Back { w: World, target: World },
    /// The preimage of an admissible target set is not admissible.
    Preimage { target_set: WorldSet },
}

impl fmt::Display for PMorphismViolation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PMorphismViolation::Forth { w, v } => {
                write!(out, "condition (1) fails at the pair ({}, {})", w.0, v.0)
            }
            PMorphismViolation::Back { w, target } => write!(
                out,
                "condition (2) fails at world {} for target {}",
                w.0, target.0
            ),
            PMorphismViolation::Preimage { target_set } => write!(
                out,
                "condition (3) fails for target set {:?}",
                target_set
            ),
        }
    }
}

/// Check the p-morphism conditions for `map : src -> dst`.
///
/// Condition (3) (admissible preimages) only constrains a general source:
/// a Kripke source carries the full powerset. When the target is general
/// the check runs over its admissible family; when the target is Kripke
/// it runs over the target singletons, which generate the powerset under
/// the Boolean closure of the source family.
pub fn is_p_morphism(
    src: &Frame,
    dst: &Frame,
    map: &WorldMap,
) -> Result<(), PMorphismViolation> {
    let s = src.kripke();
    let d = dst.kripke();
    assert_eq!(map.len(), s.len(), "map must be total on the source frame");

    for i in 0..s.len() {
        let w = World(i);
        for v in s.successors(w).iter() {
            if !d.relates(map.apply(w), map.apply(v)) {
                return Err(PMorphismViolation::Forth { w, v });
            }
        }
    }

    for i in 0..s.len() {
        let w = World(i);
        for target in d.successors(map.apply(w)).iter() {
            let witnessed = s.successors(w).iter().any(|u| map.apply(u) == target);
            if !witnessed {
                return Err(PMorphismViolation::Back { w, target });
            }
        }
    }

    if let Some(src_adm) = src.admissible() {
        let preimage = |set: WorldSet| -> WorldSet {
            let mut out = WorldSet::EMPTY;
            for i in 0..s.len() {
                if set.contains(map.apply(World(i))) {
                    out.insert(World(i));
                }
            }
            out
        };
        let targets: Vec<WorldSet> = match dst.admissible() {
            Some(family) => family.to_vec(),
            None => (0..d.len()).map(|j| WorldSet::singleton(World(j))).collect(),
        };
        for target_set in targets {
            if !src_adm.contains(&preimage(target_set)) {
                return Err(PMorphismViolation::Preimage { target_set });
            }
        }
    }

    Ok(())
}

/// Search for a p-morphism from `src` to `dst` (onto `dst` when `onto`),
/// by backtracking over assignments in world order with target candidates
/// in world order. The returned map is the lexicographically least one.
pub fn find_p_morphism(
    src: &Frame,
    dst: &Frame,
    onto: bool,
    limits: &Limits,
) -> Result<Option<WorldMap>, FrameOpsError> {
    let s = src.kripke();
    let d = dst.kripke();
    if d.is_empty() {
        return Ok(if s.is_empty() && !onto {
            Some(WorldMap::new(Vec::new()))
        } else {
            None
        });
    }
    let required = (d.len() as u128)
        .checked_pow(s.len() as u32)
        .unwrap_or(u128::MAX);
    if required > limits.valuations as u128 {
        return Err(FrameOpsError::SearchBudgetExceeded {
            required,
            budget: limits.valuations,
        });
    }

    fn assign(
        src: &Frame,
        dst: &Frame,
        onto: bool,
        map: &mut Vec<usize>,
    ) -> Option<WorldMap> {
        let s = src.kripke();
        let d = dst.kripke();
        if map.len() == s.len() {
            let candidate = WorldMap::new(map.clone());
            if onto && candidate.image() != d.full_set() {
                return None;
            }
            return is_p_morphism(src, dst, &candidate).ok().map(|()| candidate);
        }
        let w = map.len();
        for target in 0..d.len() {
            // forward pruning on condition (1) over the assigned prefix
            let consistent = (0..w).all(|u| {
                (!s.relates(World(u), World(w)) || d.relates(World(map[u]), World(target)))
                    && (!s.relates(World(w), World(u))
                        || d.relates(World(target), World(map[u])))
            }) && (!s.relates(World(w), World(w)) || d.relates(World(target), World(target)));
            if !consistent {
                continue;
            }
            map.push(target);
            if onto {
                let mut covered = WorldSet::EMPTY;
                for &j in map.iter() {
                    covered.insert(World(j));
                }
                let missing = d.len() - covered.count();
                if missing > s.len() - map.len() {
                    map.pop();
                    continue;
                }
            }
            if let Some(found) = assign(src, dst, onto, map) {
                return Some(found);
            }
            map.pop();
        }
        None
    }

    Ok(assign(src, dst, onto, &mut Vec::new()))
}

/// The generated subframe with carrier the upward R-closure of `seed`,
/// together with the embedding (carrier positions as source indices).
/// For general frames the admissible family is traced to the carrier.
pub fn generated_subframe(fr: &Frame, seed: WorldSet) -> (Frame, Vec<World>) {
    let k = fr.kripke();
    let mut carrier = seed;
    loop {
        let mut grown = carrier;
        for w in carrier.iter() {
            grown = grown.union(k.successors(w));
        }
        if grown == carrier {
            break;
        }
        carrier = grown;
    }

    let embedding: Vec<World> = carrier.iter().collect();
    let position = |w: World| embedding.iter().position(|x| *x == w).unwrap();
    let worlds: Vec<String> = embedding.iter().map(|w| k.world_name(*w).to_owned()).collect();
    let mut edges = Vec::new();
    for (i, w) in embedding.iter().enumerate() {
        for v in k.successors(*w).intersect(carrier).iter() {
            edges.push((i, position(v)));
        }
    }
    let base = KripkeFrame::new(worlds, &edges).expect("carrier is a subset of a valid frame");

    let trace = |set: WorldSet| -> WorldSet {
        let mut out = WorldSet::EMPTY;
        for (i, w) in embedding.iter().enumerate() {
            if set.contains(*w) {
                out.insert(World(i));
            }
        }
        out
    };
    let frame = match fr {
        Frame::Kripke(_) => Frame::Kripke(base),
        Frame::General(gf) => {
            let traced: Vec<WorldSet> = gf.admissible().iter().map(|&x| trace(x)).collect();
            Frame::General(GeneralFrame::new(base, traced).expect("traced sets are in range"))
        }
    };
    (frame, embedding)
}

/// A world of a doubled frame: a base world plus a one-bit tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DoubledWorld {
    pub base: World,
    pub tag: usize,
}

impl DoubledWorld {
    pub fn new(base: World, tag: usize) -> DoubledWorld {
        debug_assert!(tag < 2);
        DoubledWorld { base, tag }
    }

    /// Index in the doubled frame, whose worlds list all tag-0 copies
    /// first (in base order) and then all tag-1 copies.
    pub fn index(self, base_count: usize) -> World {
        World(self.base.0 + self.tag * base_count)
    }

    pub fn from_index(w: World, base_count: usize) -> DoubledWorld {
        DoubledWorld {
            base: World(w.0 % base_count),
            tag: w.0 / base_count,
        }
    }
}

/// Doubled world names: `w@0` for the base copy, `w@1` for the tagged
/// copy.
pub fn doubled_name(base: &str, tag: usize) -> String {
    format!("{base}@{tag}")
}

/// The doubled frame `2W`: two copies of every world, with `(w,a)`
/// related to `(v,b)` iff `w R v`. For a general frame the admissible
/// family becomes all unions of one admissible set on the tag-0 layer
/// with one on the tag-1 layer (size `|A|^2`, materialized eagerly).
pub fn double(fr: &Frame) -> Result<Frame, SemanticsError> {
    let k = fr.kripke();
    let n = k.len();
    if 2 * n > 64 {
        return Err(SemanticsError::TooManyWorlds(2 * n));
    }
    let mut worlds = Vec::with_capacity(2 * n);
    for tag in 0..2 {
        for name in k.world_names() {
            worlds.push(doubled_name(name, tag));
        }
    }
    let spread = |set: WorldSet| WorldSet(set.0 | (set.0 << n));
    let succ: Vec<WorldSet> = (0..2 * n)
        .map(|i| spread(k.successors(World(i % n))))
        .collect();
    let base = KripkeFrame::from_parts(worlds, succ);

    Ok(match fr {
        Frame::Kripke(_) => Frame::Kripke(base),
        Frame::General(gf) => {
            let mut family = Vec::with_capacity(gf.admissible().len().pow(2));
            for &x in gf.admissible() {
                for &y in gf.admissible() {
                    family.push(WorldSet(x.0 | (y.0 << n)));
                }
            }
            Frame::General(GeneralFrame::new(base, family)?)
        }
    })
}

/// The natural projection of a doubled frame onto its base: `w@a` maps to
/// `w`. Target indices follow the first occurrence of each base name,
/// which for frames produced by [`double`] is the original world order.
pub fn projection(doubled: &Frame) -> Result<WorldMap, FrameOpsError> {
    let k = doubled.kripke();
    let mut base_names: Vec<&str> = Vec::new();
    let mut map = Vec::with_capacity(k.len());
    for name in k.world_names() {
        let base = name
            .strip_suffix("@0")
            .or_else(|| name.strip_suffix("@1"))
            .ok_or_else(|| FrameOpsError::NotDoubledNaming(name.clone()))?;
        let index = match base_names.iter().position(|b| *b == base) {
            Some(i) => i,
            None => {
                base_names.push(base);
                base_names.len() - 1
            }
        };
        map.push(index);
    }
    Ok(WorldMap::new(map))
}

/// The frame with all loops added.
pub fn reflexivize(fr: &Frame) -> Frame {
    rewrite_relation(fr, |w, set| {
        let mut out = set;
        out.insert(w);
        out
    })
}

/// The frame with all loops removed.
pub fn irreflexivize(fr: &Frame) -> Frame {
    rewrite_relation(fr, |w, set| {
        WorldSet(set.0 & !WorldSet::singleton(w).0)
    })
}

fn rewrite_relation(fr: &Frame, f: impl Fn(World, WorldSet) -> WorldSet) -> Frame {
    let k = fr.kripke();
    let succ: Vec<WorldSet> = (0..k.len())
        .map(|i| f(World(i), k.successors(World(i))))
        .collect();
    let base = KripkeFrame::from_parts(k.world_names().to_vec(), succ);
    match fr {
        Frame::Kripke(_) => Frame::Kripke(base),
        Frame::General(gf) => Frame::General(
            GeneralFrame::new(base, gf.admissible().to_vec()).expect("same world count"),
        ),
    }
}

/// Transitive closure of the relation (Warshall over successor sets).
pub fn transitive_closure(fr: &KripkeFrame) -> KripkeFrame {
    let n = fr.len();
    let mut succ: Vec<WorldSet> = (0..n).map(|i| fr.successors(World(i))).collect();
    for k in 0..n {
        for i in 0..n {
            if succ[i].contains(World(k)) {
                succ[i] = succ[i].union(succ[k]);
            }
        }
    }
    KripkeFrame::from_parts(fr.world_names().to_vec(), succ)
}

/// Symmetric closure of the relation.
pub fn symmetric_closure(fr: &KripkeFrame) -> KripkeFrame {
    let n = fr.len();
    let mut succ: Vec<WorldSet> = (0..n).map(|i| fr.successors(World(i))).collect();
    for i in 0..n {
        for j in fr.successors(World(i)).iter() {
            succ[j.0].insert(World(i));
        }
    }
    KripkeFrame::from_parts(fr.world_names().to_vec(), succ)
}

/// The doubled model `2M` on `2W`: `q` holds exactly on the tag-1 layer,
/// every other variable on the preimage of its old extension under the
/// projection. The root, if any, moves to the tag-0 copy.
pub fn double_model(m: &Model, q: &str) -> Result<Model, FrameOpsError> {
    if m.valuation().contains_key(q) {
        return Err(FrameOpsError::QAlreadyValued(q.to_owned()));
    }
    let n = m.frame().kripke().len();
    let dframe = double(m.frame())?;
    let mut valuation: BTreeMap<String, WorldSet> = m
        .valuation()
        .iter()
        .map(|(var, set)| (var.clone(), WorldSet(set.0 | (set.0 << n))))
        .collect();
    valuation.insert(q.to_owned(), WorldSet(WorldSet::full(n).0 << n));
    Ok(Model::new(dframe, valuation, m.root())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::semantics::{eval, is_reflexive, is_symmetric, is_transitive};
    use crate::theorem_engine::{c2, i2, reflexive_chain3_model};

    #[test]
    fn generated_subframe_examples() {
        let chain = KripkeFrame::new(vec!["w0".into(), "w1".into()], &[(0, 1)]).unwrap();
        let (sub, embedding) =
            generated_subframe(&Frame::Kripke(chain), WorldSet(0b10));
        assert_eq!(sub.kripke().world_names(), ["w1"]);
        assert_eq!(sub.kripke().edges(), Vec::new());
        assert_eq!(embedding, vec![World(1)]);

        let (sub, _) = generated_subframe(&Frame::Kripke(c2()), WorldSet(0b01));
        assert_eq!(sub, Frame::Kripke(c2()));

        let gf = GeneralFrame::new(c2(), vec![WorldSet::EMPTY, WorldSet(0b11)]).unwrap();
        let (sub, _) = generated_subframe(&Frame::General(gf), WorldSet(0b01));
        assert_eq!(sub.kripke(), &c2());
        assert_eq!(
            sub.admissible().unwrap(),
            &[WorldSet::EMPTY, WorldSet(0b11)]
        );
    }

    #[test]
    fn is_p_morphism_examples() {
        let identity = WorldMap::new(vec![0, 1]);
        assert_eq!(
            is_p_morphism(&Frame::Kripke(c2()), &Frame::Kripke(c2()), &identity),
            Ok(())
        );

        let doubled = double(&Frame::Kripke(c2())).unwrap();
        let pi = projection(&doubled).unwrap();
        assert_eq!(is_p_morphism(&doubled, &Frame::Kripke(c2()), &pi), Ok(()));

        // irreflexive two-chain onto the reflexive point: world 1 has no
        // successor but its image does
        let chain = KripkeFrame::new(vec!["w0".into(), "w1".into()], &[(0, 1)]).unwrap();
        let point = KripkeFrame::new(vec!["c".into()], &[(0, 0)]).unwrap();
        let constant = WorldMap::new(vec![0, 0]);
        assert_eq!(
            is_p_morphism(&Frame::Kripke(chain), &Frame::Kripke(point), &constant),
            Err(PMorphismViolation::Back {
                w: World(1),
                target: World(0)
            })
        );
    }

    #[test]
    fn find_p_morphism_examples() {
        let limits = Limits::default();
        let found = find_p_morphism(&Frame::Kripke(c2()), &Frame::Kripke(c2()), true, &limits)
            .unwrap()
            .unwrap();
        assert_eq!(found, WorldMap::new(vec![0, 1]));

        let doubled = double(&Frame::Kripke(i2())).unwrap();
        let found = find_p_morphism(&doubled, &Frame::Kripke(i2()), true, &limits)
            .unwrap()
            .unwrap();
        assert_eq!(found, projection(&doubled).unwrap());

        // the constant map from the swap frame onto the reflexive point
        // satisfies both conditions: every world has a successor mapping
        // wherever needed
        let point = KripkeFrame::new(vec!["c".into()], &[(0, 0)]).unwrap();
        let found = find_p_morphism(&Frame::Kripke(i2()), &Frame::Kripke(point), true, &limits)
            .unwrap();
        assert_eq!(found, Some(WorldMap::new(vec![0, 0])));
    }

    #[test]
    fn find_p_morphism_budget() {
        let limits = Limits {
            valuations: 3,
            ..Limits::default()
        };
        let err =
            find_p_morphism(&Frame::Kripke(c2()), &Frame::Kripke(c2()), false, &limits)
                .unwrap_err();
        assert!(matches!(err, FrameOpsError::SearchBudgetExceeded { .. }));
    }

    #[test]
    fn double_examples() {
        let point = KripkeFrame::new(vec!["w0".into()], &[(0, 0)]).unwrap();
        let doubled = double(&Frame::Kripke(point)).unwrap();
        assert_eq!(doubled.kripke().world_names(), ["w0@0", "w0@1"]);
        assert!(crate::semantics::is_total(doubled.kripke()));

        let doubled = double(&Frame::Kripke(i2())).unwrap();
        let k = doubled.kripke();
        assert_eq!(k.len(), 4);
        for i in 0..4 {
            for j in 0..4 {
                let sees = k.relates(World(i), World(j));
                assert_eq!(sees, i % 2 != j % 2, "pair ({i}, {j})");
            }
        }

        let gf = GeneralFrame::new(c2(), vec![WorldSet::EMPTY, WorldSet(0b11)]).unwrap();
        let doubled = double(&Frame::General(gf)).unwrap();
        let family = doubled.admissible().unwrap();
        assert_eq!(
            family,
            &[
                WorldSet(0b0000),
                WorldSet(0b1100),
                WorldSet(0b0011),
                WorldSet(0b1111),
            ]
        );
    }

    #[test]
    fn projection_examples() {
        let doubled = double(&Frame::Kripke(c2())).unwrap();
        let pi = projection(&doubled).unwrap();
        assert_eq!(pi, WorldMap::new(vec![0, 1, 0, 1]));
        assert_eq!(is_p_morphism(&doubled, &Frame::Kripke(c2()), &pi), Ok(()));

        let bare = KripkeFrame::new(vec!["w0".into()], &[]).unwrap();
        let doubled = double(&Frame::Kripke(bare.clone())).unwrap();
        let pi = projection(&doubled).unwrap();
        assert_eq!(pi, WorldMap::new(vec![0, 0]));
        assert_eq!(is_p_morphism(&doubled, &Frame::Kripke(bare), &pi), Ok(()));

        let gf = GeneralFrame::new(c2(), vec![WorldSet::EMPTY, WorldSet(0b11)]).unwrap();
        let source = Frame::General(gf);
        let doubled = double(&source).unwrap();
        let pi = projection(&doubled).unwrap();
        assert_eq!(is_p_morphism(&doubled, &source, &pi), Ok(()));

        let err = projection(&Frame::Kripke(c2())).unwrap_err();
        assert!(matches!(err, FrameOpsError::NotDoubledNaming(_)));
    }

    #[test]
    fn reflexivize_examples() {
        assert_eq!(reflexivize(&Frame::Kripke(i2())), Frame::Kripke(c2()));
        assert_eq!(irreflexivize(&Frame::Kripke(c2())), Frame::Kripke(i2()));
        assert_eq!(reflexivize(&Frame::Kripke(c2())), Frame::Kripke(c2()));
    }

    #[test]
    fn doubled_world_indexing_round_trips() {
        for n in 1..=6 {
            for base in 0..n {
                for tag in 0..2 {
                    let dw = DoubledWorld::new(World(base), tag);
                    assert_eq!(DoubledWorld::from_index(dw.index(n), n), dw);
                }
            }
        }
        // index layout matches the doubled world-name layout
        let doubled = double(&Frame::Kripke(i2())).unwrap();
        let dw = DoubledWorld::new(World(1), 1);
        assert_eq!(doubled.kripke().world_name(dw.index(2)), "w1@1");
    }

    #[test]
    fn double_model_examples() {
        let point = KripkeFrame::new(vec!["w0".into()], &[(0, 0)]).unwrap();
        let m = Model::new(
            Frame::Kripke(point),
            [("p".to_owned(), WorldSet(0b1))].into(),
            None,
        )
        .unwrap();
        let dm = double_model(&m, "q").unwrap();
        assert_eq!(dm.var_set("p"), WorldSet(0b11));
        assert_eq!(dm.var_set("q"), WorldSet(0b10));

        // truth-lemma instance on the reflexive 3-chain countermodel
        let m = reflexive_chain3_model();
        let phi = parse("[]p -> [][]p").unwrap();
        assert!(!eval(&m, World(0), &phi));
        let dm = double_model(&m, "q").unwrap();
        assert!(!eval(&dm, World(0), &phi));
        assert!(eval(&dm, World(3), &parse("q").unwrap()));

        let err = double_model(&dm, "q").unwrap_err();
        assert_eq!(err, FrameOpsError::QAlreadyValued("q".to_owned()));
    }

    #[test]
    fn closure_properties_preserved_by_double() {
        use crate::gen;
        let mut rng = gen::seeded(21);
        for _ in 0..60 {
            let fr = gen::random_frame(&mut rng, 5);
            let refl = reflexivize(&Frame::Kripke(fr.clone()));
            assert!(is_reflexive(double(&refl).unwrap().kripke()));
            let sym = symmetric_closure(&fr);
            assert!(is_symmetric(double(&Frame::Kripke(sym)).unwrap().kripke()));
            let trans = transitive_closure(&fr);
            assert!(is_transitive(
                double(&Frame::Kripke(trans)).unwrap().kripke()
            ));
        }
    }

    #[test]
    fn irreflexivize_then_reflexivize_is_identity_on_reflexive_frames() {
        use crate::gen;
        let mut rng = gen::seeded(22);
        for _ in 0..60 {
            let fr = reflexivize(&Frame::Kripke(gen::random_frame(&mut rng, 6)));
            assert_eq!(reflexivize(&irreflexivize(&fr)), fr);
        }
    }

    #[test]
    fn p_morphism_images_are_upward_closed() {
        use crate::gen;
        let limits = Limits::default();
        let mut rng = gen::seeded(23);
        for _ in 0..40 {
            let src = Frame::Kripke(gen::random_frame(&mut rng, 4));
            let dst = Frame::Kripke(gen::random_frame(&mut rng, 3));
            if let Some(map) = find_p_morphism(&src, &dst, false, &limits).unwrap() {
                let image = map.image();
                for w in image.iter() {
                    assert!(dst.kripke().successors(w).is_subset(image));
                }
            }
        }
    }
}
