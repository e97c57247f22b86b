//! Finite Kripke frames, general frames, models, and frame validity by
//! exhaustive valuation search.
//!
//! World sets are 64-bit masks, which caps frames at 64 worlds; every
//! construction in the workbench is desk-scale, and the valuation budget
//! in [`Limits`] is hit long before the world cap matters.

use std::collections::BTreeMap;
use std::fmt;

use crate::formula::Formula;
use crate::Limits;

/// Index of a world in its frame's world list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct World(pub usize);

/// A set of worlds of one frame, as a bitmask over world indices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WorldSet(pub u64);

impl WorldSet {
    pub const EMPTY: WorldSet = WorldSet(0);

    pub fn full(n: usize) -> WorldSet {
        debug_assert!(n <= 64);
        if n == 64 {
            WorldSet(u64::MAX)
        } else {
            WorldSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(w: World) -> WorldSet {
        WorldSet(1u64 << w.0)
    }

    pub fn contains(self, w: World) -> bool {
        self.0 & (1u64 << w.0) != 0
    }

    pub fn insert(&mut self, w: World) {
        self.0 |= 1u64 << w.0;
    }

    pub fn union(self, other: WorldSet) -> WorldSet {
        WorldSet(self.0 | other.0)
    }

    pub fn intersect(self, other: WorldSet) -> WorldSet {
        WorldSet(self.0 & other.0)
    }

    pub fn complement(self, n: usize) -> WorldSet {
        WorldSet(!self.0 & WorldSet::full(n).0)
    }

    pub fn is_subset(self, other: WorldSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn count(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = World> {
        (0..64)
            .filter(move |i| self.0 & (1u64 << i) != 0)
            .map(World)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SemanticsError {
    #[error("frame has {0} worlds, more than the supported 64")]
    TooManyWorlds(usize),
    #[error("duplicate world name {0:?}")]
    DuplicateWorld(String),
    #[error("unknown world {0:?}")]
    UnknownWorld(String),
    #[error("valuation of {var:?} is not an admissible set")]
    ValuationNotAdmissible { var: String },
    #[error("world index {0} is outside the frame")]
    WorldIndexOutOfRange(usize),
    #[error(
        "validity check needs {required} candidate valuations, over the budget of {budget}"
    )]
    BudgetExceeded { required: u128, budget: u64 },
    #[error("frame is not transitive: {w:?} R {v:?} R {u:?} but not {w:?} R {u:?}")]
    NotTransitive { w: String, v: String, u: String },
}

/// A finite Kripke frame: ordered world names and a relation stored as
/// per-world successor sets. World order is significant and preserved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeFrame {
    worlds: Vec<String>,
    succ: Vec<WorldSet>,
}

impl KripkeFrame {
    pub fn new(worlds: Vec<String>, edges: &[(usize, usize)]) -> Result<KripkeFrame, SemanticsError> {
        if worlds.len() > 64 {
            return Err(SemanticsError::TooManyWorlds(worlds.len()));
        }
        for (i, name) in worlds.iter().enumerate() {
            if worlds[..i].contains(name) {
                return Err(SemanticsError::DuplicateWorld(name.clone()));
            }
        }
        let mut succ = vec![WorldSet::EMPTY; worlds.len()];
        for &(from, to) in edges {
            if from >= worlds.len() {
                return Err(SemanticsError::WorldIndexOutOfRange(from));
            }
            if to >= worlds.len() {
                return Err(SemanticsError::WorldIndexOutOfRange(to));
            }
            succ[from].insert(World(to));
        }
        Ok(KripkeFrame { worlds, succ })
    }

    /// The complete frame on `n` worlds `w0..`, a single n-element cluster.
    pub fn cluster(n: usize) -> KripkeFrame {
        let worlds = (0..n).map(|i| format!("w{i}")).collect();
        let succ = vec![WorldSet::full(n); n];
        KripkeFrame { worlds, succ }
    }

    pub fn len(&self) -> usize {
        self.worlds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.worlds.is_empty()
    }

    pub fn world_names(&self) -> &[String] {
        &self.worlds
    }

    pub fn world_name(&self, w: World) -> &str {
        &self.worlds[w.0]
    }

    pub fn world_index(&self, name: &str) -> Option<World> {
        self.worlds.iter().position(|n| n == name).map(World)
    }

    pub fn successors(&self, w: World) -> WorldSet {
        self.succ[w.0]
    }

    pub fn relates(&self, w: World, v: World) -> bool {
        self.succ[w.0].contains(v)
    }

    pub fn full_set(&self) -> WorldSet {
        WorldSet::full(self.len())
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, set) in self.succ.iter().enumerate() {
            for v in set.iter() {
                out.push((i, v.0));
            }
        }
        out
    }

    pub(crate) fn from_parts(worlds: Vec<String>, succ: Vec<WorldSet>) -> KripkeFrame {
        KripkeFrame { worlds, succ }
    }
}

/// A general frame: a Kripke frame plus a family of admissible world sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralFrame {
    base: KripkeFrame,
    admissible: Vec<WorldSet>,
}

impl GeneralFrame {
    /// Duplicate admissible entries collapse (the family is a set); order
    /// of first occurrence is preserved and significant for reporting.
    pub fn new(base: KripkeFrame, admissible: Vec<WorldSet>) -> Result<GeneralFrame, SemanticsError> {
        let full = base.full_set();
        let mut sets = Vec::new();
        for set in admissible {
            if !set.is_subset(full) {
                let bad = set.iter().find(|w| !full.contains(*w)).unwrap();
                return Err(SemanticsError::WorldIndexOutOfRange(bad.0));
            }
            if !sets.contains(&set) {
                sets.push(set);
            }
        }
        Ok(GeneralFrame {
            base,
            admissible: sets,
        })
    }

    pub fn base(&self) -> &KripkeFrame {
        &self.base
    }

    pub fn admissible(&self) -> &[WorldSet] {
        &self.admissible
    }
}

/// Either flavor of frame. Operations that only need the relation go
/// through [`Frame::kripke`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Frame {
    Kripke(KripkeFrame),
    General(GeneralFrame),
}

impl Frame {
    pub fn kripke(&self) -> &KripkeFrame {
        match self {
            Frame::Kripke(fr) => fr,
            Frame::General(gf) => gf.base(),
        }
    }

    pub fn admissible(&self) -> Option<&[WorldSet]> {
        match self {
            Frame::Kripke(_) => None,
            Frame::General(gf) => Some(gf.admissible()),
        }
    }
}

impl From<KripkeFrame> for Frame {
    fn from(fr: KripkeFrame) -> Frame {
        Frame::Kripke(fr)
    }
}

impl From<GeneralFrame> for Frame {
    fn from(gf: GeneralFrame) -> Frame {
        Frame::General(gf)
    }
}

/// A model: a frame plus a valuation. Variables absent from the valuation
/// map denote the empty set. For general frames every valuation set must
/// be admissible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    frame: Frame,
    valuation: BTreeMap<String, WorldSet>,
    root: Option<World>,
}

impl Model {
    pub fn new(
        frame: Frame,
        valuation: BTreeMap<String, WorldSet>,
        root: Option<World>,
    ) -> Result<Model, SemanticsError> {
        let full = frame.kripke().full_set();
        for (var, set) in &valuation {
            if !set.is_subset(full) {
                let bad = set.iter().find(|w| !full.contains(*w)).unwrap();
                return Err(SemanticsError::WorldIndexOutOfRange(bad.0));
            }
            if let Some(admissible) = frame.admissible() {
                if !admissible.contains(set) {
                    return Err(SemanticsError::ValuationNotAdmissible { var: var.clone() });
                }
            }
        }
        if let Some(w) = root {
            if w.0 >= frame.kripke().len() {
                return Err(SemanticsError::UnknownWorld(format!("#{}", w.0)));
            }
        }
        Ok(Model {
            frame,
            valuation,
            root,
        })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn valuation(&self) -> &BTreeMap<String, WorldSet> {
        &self.valuation
    }

    pub fn root(&self) -> Option<World> {
        self.root
    }

    pub fn var_set(&self, name: &str) -> WorldSet {
        self.valuation.get(name).copied().unwrap_or(WorldSet::EMPTY)
    }

    pub(crate) fn set_valuation(&mut self, valuation: BTreeMap<String, WorldSet>) {
        self.valuation = valuation;
    }
}

/// Truth of `f` at world `w` of `m`, by the standard clauses; `<>` is the
/// dual of `[]`.
pub fn eval(m: &Model, w: World, f: &Formula) -> bool {
    match f {
        Formula::Var(name) => m.var_set(name).contains(w),
        Formula::Falsum => false,
        Formula::Verum => true,
        Formula::Not(a) => !eval(m, w, a),
        Formula::And(a, b) => eval(m, w, a) && eval(m, w, b),
        Formula::Or(a, b) => eval(m, w, a) || eval(m, w, b),
        Formula::Imp(a, b) => !eval(m, w, a) || eval(m, w, b),
        Formula::Iff(a, b) => eval(m, w, a) == eval(m, w, b),
        Formula::Box(a) => m
            .frame
            .kripke()
            .successors(w)
            .iter()
            .all(|v| eval(m, v, a)),
        Formula::Dia(a) => m
            .frame
            .kripke()
            .successors(w)
            .iter()
            .any(|v| eval(m, v, a)),
    }
}

/// The truth set of `f` in `m`, computed bottom-up over world sets.
/// This is the second evaluation route; `eval` and `extension` check each
/// other in tests, and validity search uses this one.
pub fn extension(m: &Model, f: &Formula) -> WorldSet {
    let fr = m.frame.kripke();
    let n = fr.len();
    match f {
        Formula::Var(name) => m.var_set(name),
        Formula::Falsum => WorldSet::EMPTY,
        Formula::Verum => fr.full_set(),
        Formula::Not(a) => extension(m, a).complement(n),
        Formula::And(a, b) => extension(m, a).intersect(extension(m, b)),
        Formula::Or(a, b) => extension(m, a).union(extension(m, b)),
        Formula::Imp(a, b) => extension(m, a).complement(n).union(extension(m, b)),
        Formula::Iff(a, b) => {
            let ea = extension(m, a);
            let eb = extension(m, b);
            ea.intersect(eb).union(ea.complement(n).intersect(eb.complement(n)))
        }
        Formula::Box(a) => box_of_set(fr, extension(m, a)),
        Formula::Dia(a) => box_of_set(fr, extension(m, a).complement(n)).complement(n),
    }
}

/// `f` holds at every world of `m`.
pub fn holds_in_model(m: &Model, f: &Formula) -> bool {
    (0..m.frame.kripke().len()).all(|i| eval(m, World(i), f))
}

/// `box X = {w : every successor of w is in X}`.
pub fn box_of_set(fr: &KripkeFrame, x: WorldSet) -> WorldSet {
    let mut out = WorldSet::EMPTY;
    for i in 0..fr.len() {
        if fr.successors(World(i)).is_subset(x) {
            out.insert(World(i));
        }
    }
    out
}

/// Outcome of a frame-validity check. A refutation carries the valuation
/// and world that falsify the formula; the valuation is the
/// lexicographically least refuting one (variables in name order, each
/// set enumerated as an ascending bitmask for Kripke frames, admissible
/// sets in family order for general frames) and the world is the least
/// refuting index under it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validity {
    Valid,
    Invalid {
        valuation: BTreeMap<String, WorldSet>,
        world: World,
    },
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid)
    }
}

/// Validity of `f` in `fr`: every model based on `fr` satisfies `f`
/// everywhere. Kripke frames range over all `2^(worlds*vars)` valuations,
/// general frames over admissible valuations only.
pub fn valid_in_frame(
    fr: &Frame,
    f: &Formula,
    limits: &Limits,
) -> Result<Validity, SemanticsError> {
    let vars: Vec<String> = crate::formula::variables(f).into_iter().collect();
    let n = fr.kripke().len();
    let base: u128 = match fr {
        Frame::Kripke(_) => 1u128 << n,
        Frame::General(gf) => gf.admissible().len() as u128,
    };
    let required = base
        .checked_pow(vars.len() as u32)
        .unwrap_or(u128::MAX);
    if required > limits.valuations as u128 {
        return Err(SemanticsError::BudgetExceeded {
            required,
            budget: limits.valuations,
        });
    }
    // an empty admissible family admits no model at all
    if required == 0 {
        return Ok(Validity::Valid);
    }

    let candidate = |index: u64| -> WorldSet {
        match fr {
            Frame::Kripke(_) => WorldSet(index),
            Frame::General(gf) => gf.admissible()[index as usize],
        }
    };

    let mut model = Model {
        frame: fr.clone(),
        valuation: BTreeMap::new(),
        root: None,
    };
    // odometer over per-variable candidate indices; the first variable is
    // the most significant digit, so the scan order is lexicographic
    let mut digits = vec![0u64; vars.len()];
    loop {
        let valuation: BTreeMap<String, WorldSet> = vars
            .iter()
            .zip(&digits)
            .map(|(v, &d)| (v.clone(), candidate(d)))
            .collect();
        model.set_valuation(valuation);
        let ext = extension(&model, f);
        if ext != fr.kripke().full_set() {
            let world = (0..n).map(World).find(|w| !ext.contains(*w)).unwrap();
            // certificate check, always on: the pointwise evaluator must
            // agree before we report a refutation
            assert!(
                !eval(&model, world, f),
                "internal disagreement between extension and eval"
            );
            return Ok(Validity::Invalid {
                valuation: model.valuation.clone(),
                world,
            });
        }
        // advance the odometer, least significant digit last
        let mut k = vars.len();
        loop {
            if k == 0 {
                return Ok(Validity::Valid);
            }
            k -= 1;
            digits[k] += 1;
            if (digits[k] as u128) < base {
                break;
            }
            digits[k] = 0;
        }
    }
}

/// `fr` validates every formula in `axioms`. Frame validity is closed
/// under substitution, modus ponens, and necessitation, so checking the
/// axiom formulas decides the generated logic.
pub fn is_l_frame(
    fr: &Frame,
    axioms: &[Formula],
    limits: &Limits,
) -> Result<bool, SemanticsError> {
    for axiom in axioms {
        if !valid_in_frame(fr, axiom, limits)?.is_valid() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Why an admissible family fails to be closed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosureViolation {
    Complement { of: WorldSet, missing: WorldSet },
    Intersection { a: WorldSet, b: WorldSet, missing: WorldSet },
    BoxOp { of: WorldSet, missing: WorldSet },
}

impl fmt::Display for ClosureViolation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosureViolation::Complement { of, .. } => {
                write!(out, "complement of {:?} missing", of)
            }
            ClosureViolation::Intersection { a, b, .. } => {
                write!(out, "intersection of {:?} and {:?} missing", a, b)
            }
            ClosureViolation::BoxOp { of, .. } => write!(out, "box of {:?} missing", of),
        }
    }
}

/// Check that the admissible family is closed under complement, binary
/// intersection, and the box operation.
pub fn check_admissible_closure(gf: &GeneralFrame) -> Result<(), ClosureViolation> {
    let n = gf.base().len();
    let family = gf.admissible();
    let present = |s: WorldSet| family.contains(&s);
    for &a in family {
        let c = a.complement(n);
        if !present(c) {
            return Err(ClosureViolation::Complement { of: a, missing: c });
        }
        let b = box_of_set(gf.base(), a);
        if !present(b) {
            return Err(ClosureViolation::BoxOp { of: a, missing: b });
        }
        for &other in family {
            let i = a.intersect(other);
            if !present(i) {
                return Err(ClosureViolation::Intersection {
                    a,
                    b: other,
                    missing: i,
                });
            }
        }
    }
    Ok(())
}

/// The partition of a transitive frame into clusters: equivalence classes
/// of `w ~ v  iff  w = v or (wRv and vRw)`. Errors on non-transitive
/// input, where `~` need not be transitive.
pub fn clusters(fr: &KripkeFrame) -> Result<Vec<WorldSet>, SemanticsError> {
    if let Some((w, v, u)) = transitivity_witness(fr) {
        return Err(SemanticsError::NotTransitive {
            w: fr.world_name(w).to_owned(),
            v: fr.world_name(v).to_owned(),
            u: fr.world_name(u).to_owned(),
        });
    }
    let mut assigned = WorldSet::EMPTY;
    let mut out = Vec::new();
    for i in 0..fr.len() {
        let w = World(i);
        if assigned.contains(w) {
            continue;
        }
        let mut cluster = WorldSet::singleton(w);
        for j in 0..fr.len() {
            let v = World(j);
            if i != j && fr.relates(w, v) && fr.relates(v, w) {
                cluster.insert(v);
            }
        }
        assigned = assigned.union(cluster);
        out.push(cluster);
    }
    Ok(out)
}

fn transitivity_witness(fr: &KripkeFrame) -> Option<(World, World, World)> {
    for i in 0..fr.len() {
        for v in fr.successors(World(i)).iter() {
            if !fr.successors(v).is_subset(fr.successors(World(i))) {
                let u = fr
                    .successors(v)
                    .iter()
                    .find(|u| !fr.successors(World(i)).contains(*u))
                    .unwrap();
                return Some((World(i), v, u));
            }
        }
    }
    None
}

pub fn is_reflexive(fr: &KripkeFrame) -> bool {
    (0..fr.len()).all(|i| fr.relates(World(i), World(i)))
}

pub fn is_symmetric(fr: &KripkeFrame) -> bool {
    (0..fr.len()).all(|i| {
        fr.successors(World(i))
            .iter()
            .all(|v| fr.relates(v, World(i)))
    })
}

pub fn is_transitive(fr: &KripkeFrame) -> bool {
    transitivity_witness(fr).is_none()
}

/// Every world has a successor.
pub fn is_serial(fr: &KripkeFrame) -> bool {
    (0..fr.len()).all(|i| !fr.successors(World(i)).is_empty())
}

/// Every pair of worlds (in both directions, including loops) is related.
pub fn is_total(fr: &KripkeFrame) -> bool {
    (0..fr.len()).all(|i| fr.successors(World(i)) == fr.full_set())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::theorem_engine::{c2, i2};

    fn model_on(fr: KripkeFrame, vals: &[(&str, &[usize])]) -> Model {
        let valuation = vals
            .iter()
            .map(|(v, ws)| {
                let mut set = WorldSet::EMPTY;
                for &w in *ws {
                    set.insert(World(w));
                }
                ((*v).to_owned(), set)
            })
            .collect();
        Model::new(Frame::Kripke(fr), valuation, None).unwrap()
    }

    fn reflexive_chain3() -> KripkeFrame {
        KripkeFrame::new(
            vec!["w0".into(), "w1".into(), "w2".into()],
            &[(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)],
        )
        .unwrap()
    }

    #[test]
    fn eval_examples() {
        let single = KripkeFrame::new(vec!["w0".into()], &[(0, 0)]).unwrap();
        let m = model_on(single, &[("p", &[0])]);
        assert!(eval(&m, World(0), &parse("[]p").unwrap()));

        let chain = KripkeFrame::new(vec!["w0".into(), "w1".into()], &[(0, 1)]).unwrap();
        let m = model_on(chain, &[("p", &[0])]);
        assert!(!eval(&m, World(0), &parse("[]p").unwrap()));

        // the motivating formula fails at world 0 of the two-element
        // cluster when p holds at world 0 only
        let m = model_on(c2(), &[("p", &[0])]);
        let f = parse("p & []([]p -> p) -> []p").unwrap();
        assert!(!eval(&m, World(0), &f));
        // ...because []p fails everywhere, so []p -> p holds at both worlds
        assert!(eval(&m, World(0), &parse("[]([]p -> p)").unwrap()));
    }

    #[test]
    fn holds_in_model_examples() {
        let m = model_on(c2(), &[("p", &[0])]);
        assert!(holds_in_model(&m, &Formula::Verum));
        let f = parse("p & []([]p -> p) -> []p").unwrap();
        assert!(!holds_in_model(&m, &f));

        let m = model_on(i2(), &[("p", &[0])]);
        assert!(holds_in_model(&m, &f));
    }

    #[test]
    fn missing_variables_default_to_empty() {
        let m = model_on(c2(), &[]);
        assert!(!eval(&m, World(0), &parse("p").unwrap()));
        assert!(eval(&m, World(0), &parse("~p").unwrap()));
    }

    #[test]
    fn valid_in_frame_examples() {
        let limits = Limits::default();
        let refl = Frame::Kripke(reflexive_chain3());
        assert!(valid_in_frame(&refl, &parse("[]p -> p").unwrap(), &limits)
            .unwrap()
            .is_valid());

        let f = parse("p & []([]p -> p) -> []p").unwrap();
        assert!(valid_in_frame(&Frame::Kripke(i2()), &f, &limits)
            .unwrap()
            .is_valid());

        match valid_in_frame(&Frame::Kripke(c2()), &f, &limits).unwrap() {
            Validity::Invalid { valuation, world } => {
                assert_eq!(world, World(0));
                assert_eq!(valuation["p"], WorldSet(0b01));
            }
            Validity::Valid => panic!("expected a refutation"),
        }
    }

    #[test]
    fn valid_in_frame_budget() {
        let limits = Limits {
            valuations: 16,
            ..Limits::default()
        };
        let err = valid_in_frame(
            &Frame::Kripke(c2()),
            &parse("p & q & r").unwrap(),
            &limits,
        )
        .unwrap_err();
        assert_eq!(
            err,
            SemanticsError::BudgetExceeded {
                required: 64,
                budget: 16
            }
        );
    }

    #[test]
    fn is_l_frame_examples() {
        let limits = Limits::default();
        let t_axiom = [parse("[]p -> p").unwrap()];
        assert!(is_l_frame(&Frame::Kripke(reflexive_chain3()), &t_axiom, &limits).unwrap());
        assert!(!is_l_frame(&Frame::Kripke(i2()), &t_axiom, &limits).unwrap());

        let s5_axioms = [
            parse("[]p -> p").unwrap(),
            parse("p -> []<>p").unwrap(),
            parse("[]p -> [][]p").unwrap(),
        ];
        assert!(is_l_frame(&Frame::Kripke(c2()), &s5_axioms, &limits).unwrap());
    }

    #[test]
    fn box_of_set_examples() {
        assert_eq!(box_of_set(&c2(), WorldSet::EMPTY), WorldSet::EMPTY);
        assert_eq!(box_of_set(&c2(), c2().full_set()), c2().full_set());

        let chain = KripkeFrame::new(vec!["w0".into(), "w1".into()], &[(0, 1)]).unwrap();
        // world 1 has no successors, so it lands in box X vacuously
        assert_eq!(box_of_set(&chain, WorldSet(0b10)), WorldSet(0b11));
    }

    #[test]
    fn admissible_closure_examples() {
        let full: Vec<WorldSet> = (0..4).map(WorldSet).collect();
        let gf = GeneralFrame::new(c2(), full).unwrap();
        assert_eq!(check_admissible_closure(&gf), Ok(()));

        let gf = GeneralFrame::new(c2(), vec![WorldSet::EMPTY, WorldSet(0b11)]).unwrap();
        assert_eq!(check_admissible_closure(&gf), Ok(()));

        let gf = GeneralFrame::new(
            c2(),
            vec![WorldSet::EMPTY, WorldSet(0b01), WorldSet(0b11)],
        )
        .unwrap();
        assert_eq!(
            check_admissible_closure(&gf),
            Err(ClosureViolation::Complement {
                of: WorldSet(0b01),
                missing: WorldSet(0b10)
            })
        );
    }

    #[test]
    fn empty_admissible_family_validates_everything_vacuously() {
        let limits = Limits::default();
        let gf = GeneralFrame::new(c2(), Vec::new()).unwrap();
        // no admissible valuation exists, so even p is vacuously valid
        let verdict =
            valid_in_frame(&Frame::General(gf), &parse("p").unwrap(), &limits).unwrap();
        assert!(verdict.is_valid());
    }

    #[test]
    fn cluster_examples() {
        assert_eq!(clusters(&c2()).unwrap(), vec![WorldSet(0b11)]);

        let chain = KripkeFrame::new(
            vec!["w0".into(), "w1".into()],
            &[(0, 0), (1, 1), (0, 1)],
        )
        .unwrap();
        assert_eq!(
            clusters(&chain).unwrap(),
            vec![WorldSet(0b01), WorldSet(0b10)]
        );

        let mixed = KripkeFrame::new(
            vec!["a".into(), "b".into(), "c".into()],
            &[(0, 1), (1, 0), (0, 0), (1, 1)],
        )
        .unwrap();
        assert_eq!(
            clusters(&mixed).unwrap(),
            vec![WorldSet(0b011), WorldSet(0b100)]
        );

        let err = clusters(&i2()).unwrap_err();
        assert!(matches!(err, SemanticsError::NotTransitive { .. }));
    }

    #[test]
    fn relation_property_examples() {
        assert!(is_reflexive(&c2()) && is_symmetric(&c2()) && is_transitive(&c2()));

        assert!(!is_reflexive(&i2()));
        assert!(is_symmetric(&i2()));
        assert!(!is_transitive(&i2()));

        let chain = reflexive_chain3();
        assert!(is_reflexive(&chain));
        assert!(!is_symmetric(&chain));
        assert!(!is_transitive(&chain));
    }

    #[test]
    fn powerset_general_frame_agrees_with_kripke() {
        use crate::gen;
        use rand::Rng;
        let mut rng = gen::seeded(11);
        let limits = Limits::default();
        for _ in 0..40 {
            let fr = gen::random_frame(&mut rng, 3);
            let n = fr.len();
            let powerset: Vec<WorldSet> = (0..(1u64 << n)).map(WorldSet).collect();
            let gf = GeneralFrame::new(fr.clone(), powerset).unwrap();
            let cfg = gen::FormulaGenConfig {
                vars: vec!["p".into(), "r".into()],
                max_degree: 2,
                max_connectives: rng.gen_range(1..8),
            };
            let f = gen::random_formula(&mut rng, &cfg);
            let kripke = valid_in_frame(&Frame::Kripke(fr), &f, &limits).unwrap();
            let general = valid_in_frame(&Frame::General(gf), &f, &limits).unwrap();
            assert_eq!(kripke.is_valid(), general.is_valid(), "formula {f}");
        }
    }

    #[test]
    fn eval_and_extension_agree_on_random_triples() {
        use crate::gen;
        use rand::Rng;
        let mut rng = gen::seeded(12);
        let mut checked = 0;
        while checked < 1000 {
            let m = gen::random_model(&mut rng, 5, &["p", "q", "r"]);
            let cfg = gen::FormulaGenConfig {
                vars: vec!["p".into(), "q".into(), "r".into()],
                max_degree: 3,
                max_connectives: rng.gen_range(1..10),
            };
            let f = gen::random_formula(&mut rng, &cfg);
            let ext = extension(&m, &f);
            for i in 0..m.frame().kripke().len() {
                assert_eq!(eval(&m, World(i), &f), ext.contains(World(i)), "formula {f}");
                checked += 1;
            }
        }
    }

    #[test]
    fn box_of_set_is_monotone() {
        use crate::gen;
        use rand::Rng;
        let mut rng = gen::seeded(13);
        for _ in 0..200 {
            let fr = gen::random_frame(&mut rng, 6);
            let full = fr.full_set().0;
            let x = WorldSet(rng.gen_range(0..=full));
            let y = WorldSet(x.0 | rng.gen_range(0..=full));
            assert!(box_of_set(&fr, x).is_subset(box_of_set(&fr, y)));
        }
    }
}
