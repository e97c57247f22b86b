//! Tableau decision procedures for K, T, K4, and S4 with countermodel
//! extraction, plus global consequence via the deduction theorem and
//! boxdot-interpretation membership.
//!
//! To decide theoremhood the prover searches for a model of the negated
//! formula in negation normal form. Worlds are saturated under the local
//! rules (conjunctions split, disjunctions branch, boxed formulas unbox in
//! place for the reflexive logics), then every diamond spawns a successor
//! demand: the diamond body plus the unboxings (K, T), the unboxings and
//! the boxes themselves (K4), or the boxes (S4). The transitive logics
//! block a demand that is contained in an ancestor world on the current
//! branch and loop back instead, which guarantees termination.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::formula::{box_le_n, boxdot_translate, conjoin, Formula};
use crate::frame_ops::transitive_closure;
use crate::semantics::{
    eval, is_reflexive, is_transitive, Frame, KripkeFrame, Model, World, WorldSet,
};
use crate::Limits;

/// One of the supported normal modal logics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LogicId {
    K,
    T,
    K4,
    S4,
}

impl LogicId {
    pub fn reflexive(self) -> bool {
        matches!(self, LogicId::T | LogicId::S4)
    }

    pub fn transitive(self) -> bool {
        matches!(self, LogicId::K4 | LogicId::S4)
    }

    /// The frame condition a countermodel of this logic must satisfy.
    pub fn frame_condition_holds(self, fr: &KripkeFrame) -> bool {
        (!self.reflexive() || is_reflexive(fr)) && (!self.transitive() || is_transitive(fr))
    }
}

impl fmt::Display for LogicId {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            LogicId::K => "K",
            LogicId::T => "T",
            LogicId::K4 => "K4",
            LogicId::S4 => "S4",
        };
        write!(out, "{name}")
    }
}

impl FromStr for LogicId {
    type Err = String;

    fn from_str(s: &str) -> Result<LogicId, String> {
        match s.to_ascii_uppercase().as_str() {
            "K" => Ok(LogicId::K),
            "T" => Ok(LogicId::T),
            "K4" => Ok(LogicId::K4),
            "S4" => Ok(LogicId::S4),
            other => Err(format!("unknown logic {other:?}, expected K, T, K4, or S4")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Proved,
    Refuted,
}

/// Search effort: `nodes` counts rule applications over the whole search
/// including backtracked branches, `depth` the deepest successor chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProverStats {
    pub nodes: u64,
    pub depth: usize,
}

/// Outcome of a proof attempt. A refutation carries a finite countermodel
/// whose frame satisfies the logic's frame condition and whose root
/// (world `w0`) falsifies the formula; `certify` re-checks both.
#[derive(Clone, Debug)]
pub struct ProofResult {
    pub logic: LogicId,
    pub verdict: Verdict,
    pub countermodel: Option<Model>,
    pub stats: ProverStats,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ProverError {
    #[error("tableau node budget of {0} exceeded")]
    NodeBudget(u64),
    #[error("certify called on a proved result")]
    CertifyOnProved,
}

// Negation-normal-form nodes, hash-consed so that world sets are bitsets
// over node ids. Saturation and successor demands only ever mention
// subformulas of the initial formula, so the arena is built once.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Node {
    Top,
    Bot,
    Lit { var: u32, pos: bool },
    And(u32, u32),
    Or(u32, u32),
    Box(u32),
    Dia(u32),
}

#[derive(Default)]
struct Arena {
    nodes: Vec<Node>,
    index: HashMap<Node, u32>,
    var_names: Vec<String>,
    var_index: HashMap<String, u32>,
}

impl Arena {
    fn intern(&mut self, node: Node) -> u32 {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = self.nodes.len() as u32;
        self.nodes.push(node);
        self.index.insert(node, id);
        id
    }

    fn var(&mut self, name: &str) -> u32 {
        if let Some(&v) = self.var_index.get(name) {
            return v;
        }
        let v = self.var_names.len() as u32;
        self.var_names.push(name.to_owned());
        self.var_index.insert(name.to_owned(), v);
        v
    }

    fn node(&self, id: u32) -> Node {
        self.nodes[id as usize]
    }

    /// NNF of `f` (positive) or of its negation.
    fn nnf(&mut self, f: &Formula, positive: bool) -> u32 {
        let node = match (f, positive) {
            (Formula::Var(name), pos) => {
                let var = self.var(name);
                Node::Lit { var, pos }
            }
            (Formula::Verum, true) | (Formula::Falsum, false) => Node::Top,
            (Formula::Verum, false) | (Formula::Falsum, true) => Node::Bot,
            (Formula::Not(a), pos) => return self.nnf(a, !pos),
            (Formula::And(a, b), true) | (Formula::Or(a, b), false) => {
                let x = self.nnf(a, positive);
                let y = self.nnf(b, positive);
                Node::And(x, y)
            }
            (Formula::And(a, b), false) | (Formula::Or(a, b), true) => {
                let x = self.nnf(a, positive);
                let y = self.nnf(b, positive);
                Node::Or(x, y)
            }
            (Formula::Imp(a, b), true) => {
                let x = self.nnf(a, false);
                let y = self.nnf(b, true);
                Node::Or(x, y)
            }
            (Formula::Imp(a, b), false) => {
                let x = self.nnf(a, true);
                let y = self.nnf(b, false);
                Node::And(x, y)
            }
            (Formula::Iff(a, b), _) => {
                let pp = self.nnf(a, true);
                let pn = self.nnf(a, false);
                let qp = self.nnf(b, true);
                let qn = self.nnf(b, false);
                let (left, right) = if positive {
                    (Node::And(pp, qp), Node::And(pn, qn))
                } else {
                    (Node::And(pp, qn), Node::And(pn, qp))
                };
                let l = self.intern(left);
                let r = self.intern(right);
                Node::Or(l, r)
            }
            (Formula::Box(a), true) | (Formula::Dia(a), false) => {
                let x = self.nnf(a, positive);
                Node::Box(x)
            }
            (Formula::Box(a), false) | (Formula::Dia(a), true) => {
                let x = self.nnf(a, positive);
                Node::Dia(x)
            }
        };
        self.intern(node)
    }

    fn complement_lit(&self, id: u32) -> Option<u32> {
        if let Node::Lit { var, pos } = self.node(id) {
            self.index.get(&Node::Lit { var, pos: !pos }).copied()
        } else {
            None
        }
    }
}

/// A set of arena node ids.
#[derive(Clone, PartialEq, Eq)]
struct IdSet {
    bits: Vec<u64>,
}

impl IdSet {
    fn new(width: usize) -> IdSet {
        IdSet {
            bits: vec![0; width.div_ceil(64)],
        }
    }

    fn contains(&self, id: u32) -> bool {
        self.bits[(id / 64) as usize] & (1u64 << (id % 64)) != 0
    }

    /// Insert; reports whether the id was new.
    fn insert(&mut self, id: u32) -> bool {
        let slot = &mut self.bits[(id / 64) as usize];
        let mask = 1u64 << (id % 64);
        let fresh = *slot & mask == 0;
        *slot |= mask;
        fresh
    }

    fn is_subset(&self, other: &IdSet) -> bool {
        self.bits
            .iter()
            .zip(&other.bits)
            .all(|(a, b)| a & !b == 0)
    }

    fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.bits.iter().enumerate().flat_map(|(w, &bits)| {
            (0..64)
                .filter(move |b| bits & (1u64 << b) != 0)
                .map(move |b| (w * 64 + b) as u32)
        })
    }
}

struct Search<'a> {
    arena: &'a Arena,
    logic: LogicId,
    limits: &'a Limits,
    ticks: u64,
    max_depth: usize,
    worlds: Vec<IdSet>,
    edges: Vec<(usize, usize)>,
    path: Vec<usize>,
}

impl Search<'_> {
    fn tick(&mut self) -> Result<(), ProverError> {
        self.ticks += 1;
        if self.ticks > self.limits.tableau_nodes {
            Err(ProverError::NodeBudget(self.limits.tableau_nodes))
        } else {
            Ok(())
        }
    }

    /// Add a formula to a world under construction; false on clash.
    fn try_add(&self, set: &mut IdSet, todo: &mut Vec<u32>, id: u32) -> bool {
        match self.arena.node(id) {
            Node::Bot => return false,
            Node::Lit { .. } => {
                if let Some(c) = self.arena.complement_lit(id) {
                    if set.contains(c) {
                        return false;
                    }
                }
            }
            _ => {}
        }
        if set.insert(id) {
            todo.push(id);
        }
        true
    }

    fn sat_from(&mut self, ids: &[u32]) -> Result<Option<usize>, ProverError> {
        let mut set = IdSet::new(self.arena.nodes.len());
        let mut todo = Vec::new();
        for &id in ids {
            if !self.try_add(&mut set, &mut todo, id) {
                return Ok(None);
            }
        }
        self.saturate(set, todo)
    }

    fn saturate(&mut self, mut set: IdSet, mut todo: Vec<u32>) -> Result<Option<usize>, ProverError> {
        while let Some(id) = todo.pop() {
            self.tick()?;
            match self.arena.node(id) {
                Node::Top | Node::Bot | Node::Lit { .. } | Node::Dia(_) => {}
                Node::And(a, b) => {
                    if !self.try_add(&mut set, &mut todo, a)
                        || !self.try_add(&mut set, &mut todo, b)
                    {
                        return Ok(None);
                    }
                }
                Node::Box(a) => {
                    if self.logic.reflexive() && !self.try_add(&mut set, &mut todo, a) {
                        return Ok(None);
                    }
                }
                Node::Or(a, b) => {
                    if set.contains(a) || set.contains(b) {
                        continue;
                    }
                    let mut set_a = set.clone();
                    let mut todo_a = todo.clone();
                    if self.try_add(&mut set_a, &mut todo_a, a) {
                        if let Some(w) = self.saturate(set_a, todo_a)? {
                            return Ok(Some(w));
                        }
                    }
                    if self.try_add(&mut set, &mut todo, b) {
                        return self.saturate(set, todo);
                    }
                    return Ok(None);
                }
            }
        }
        self.realize(set)
    }

    /// Turn a saturated set into a world and satisfy its diamonds.
    /// Restores the search state when a demand is unsatisfiable.
    fn realize(&mut self, set: IdSet) -> Result<Option<usize>, ProverError> {
        self.tick()?;
        let widx = self.worlds.len();
        let saved_edges = self.edges.len();
        self.worlds.push(set);
        self.path.push(widx);
        self.max_depth = self.max_depth.max(self.path.len());

        let dias: Vec<u32> = self.worlds[widx]
            .iter()
            .filter(|&id| matches!(self.arena.node(id), Node::Dia(_)))
            .collect();
        let boxes: Vec<u32> = self.worlds[widx]
            .iter()
            .filter(|&id| matches!(self.arena.node(id), Node::Box(_)))
            .collect();

        let mut ok = true;
        for dia in dias {
            let Node::Dia(body) = self.arena.node(dia) else {
                unreachable!()
            };
            let mut demand = vec![body];
            for &b in &boxes {
                let Node::Box(arg) = self.arena.node(b) else {
                    unreachable!()
                };
                match self.logic {
                    LogicId::K | LogicId::T => demand.push(arg),
                    LogicId::K4 => {
                        demand.push(arg);
                        demand.push(b);
                    }
                    LogicId::S4 => demand.push(b),
                }
            }

            if self.logic.transitive() {
                let mut demand_set = IdSet::new(self.arena.nodes.len());
                for &id in &demand {
                    demand_set.insert(id);
                }
                if let Some(&anc) = self
                    .path
                    .iter()
                    .find(|&&j| demand_set.is_subset(&self.worlds[j]))
                {
                    self.edges.push((widx, anc));
                    continue;
                }
            }

            match self.sat_from(&demand)? {
                Some(child) => self.edges.push((widx, child)),
                None => {
                    ok = false;
                    break;
                }
            }
        }

        self.path.pop();
        if ok {
            Ok(Some(widx))
        } else {
            self.worlds.truncate(widx);
            self.edges.truncate(saved_edges);
            Ok(None)
        }
    }

    /// Countermodel from a finished search: worlds in creation order named
    /// `w0..`, root `w0`, loops added for the reflexive logics and the
    /// transitive closure taken for the transitive ones.
    fn extract_model(&self) -> Model {
        let n = self.worlds.len();
        let names: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
        let mut edges = self.edges.clone();
        if self.logic.reflexive() {
            edges.extend((0..n).map(|i| (i, i)));
        }
        let mut fr = KripkeFrame::new(names, &edges).expect("world names are unique");
        if self.logic.transitive() {
            fr = transitive_closure(&fr);
        }
        let mut valuation: BTreeMap<String, WorldSet> = BTreeMap::new();
        for (v, name) in self.arena.var_names.iter().enumerate() {
            let lit = Node::Lit {
                var: v as u32,
                pos: true,
            };
            let mut set = WorldSet::EMPTY;
            if let Some(&id) = self.arena.index.get(&lit) {
                for (w, world) in self.worlds.iter().enumerate() {
                    if world.contains(id) {
                        set.insert(World(w));
                    }
                }
            }
            valuation.insert(name.clone(), set);
        }
        Model::new(Frame::Kripke(fr), valuation, Some(World(0)))
            .expect("extracted model is well-formed")
    }
}

/// Decide whether `f` is a theorem of `logic`; refutations carry a
/// countermodel.
pub fn prove(logic: LogicId, f: &Formula, limits: &Limits) -> Result<ProofResult, ProverError> {
    let mut arena = Arena::default();
    let negated = arena.nnf(f, false);
    let mut search = Search {
        arena: &arena,
        logic,
        limits,
        ticks: 0,
        max_depth: 0,
        worlds: Vec::new(),
        edges: Vec::new(),
        path: Vec::new(),
    };
    let outcome = search.sat_from(&[negated])?;
    let stats = ProverStats {
        nodes: search.ticks,
        depth: search.max_depth,
    };
    Ok(match outcome {
        None => ProofResult {
            logic,
            verdict: Verdict::Proved,
            countermodel: None,
            stats,
        },
        Some(root) => {
            debug_assert_eq!(root, 0);
            ProofResult {
                logic,
                verdict: Verdict::Refuted,
                countermodel: Some(search.extract_model()),
                stats,
            }
        }
    })
}

/// Least `n <= n_max` such that `[]^<=n /\assumptions -> goal` is a
/// theorem of `logic`, if any. This is the deduction-theorem form of
/// global consequence from the assumption set.
pub fn global_consequence(
    logic: LogicId,
    assumptions: &[Formula],
    goal: &Formula,
    n_max: usize,
    limits: &Limits,
) -> Result<Option<usize>, ProverError> {
    let conj = conjoin(assumptions.iter().cloned());
    for n in 0..=n_max {
        let candidate = Formula::imp(box_le_n(n, &conj), goal.clone());
        if prove(logic, &candidate, limits)?.verdict == Verdict::Proved {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Membership of `f` in the boxdot interpretation of `logic`: theoremhood
/// of the translation.
pub fn boxdot_member(logic: LogicId, f: &Formula, limits: &Limits) -> Result<bool, ProverError> {
    Ok(prove(logic, &boxdot_translate(f), limits)?.verdict == Verdict::Proved)
}

/// Re-validate a refutation: the countermodel's frame satisfies the
/// logic's frame condition and the formula fails at the root.
pub fn certify(result: &ProofResult, f: &Formula) -> Result<bool, ProverError> {
    let model = match (result.verdict, &result.countermodel) {
        (Verdict::Refuted, Some(m)) => m,
        _ => return Err(ProverError::CertifyOnProved),
    };
    let root = model.root().unwrap_or(World(0));
    let frame_ok = result.logic.frame_condition_holds(model.frame().kripke());
    Ok(frame_ok && !eval(model, root, f))
}
