use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;

use varisat::{ExtendFormula, Lit, Solver, Var};

use super::enumerate::{increment, Layout};
use super::{
    check_formula, enumerate_models, eval_generic, EnumerationBound, EvalError, Interp, Model,
    Signature, Truth,
};
use crate::scope::DeterminerTable;
use crate::stlc::Term;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// No counterexample up to the bound. Not a proof of entailment.
    EntailedWithinBound { worlds: usize, individuals: usize },
    /// The first model (by size, then enumeration order) where the premise
    /// holds at `actual` and the conclusion fails.
    Counterexample { model: Model, actual: usize },
}

impl Verdict {
    pub fn is_entailed(&self) -> bool {
        matches!(self, Verdict::EntailedWithinBound { .. })
    }
}

#[derive(Debug)]
enum Node {
    True,
    False,
    Atom(usize),
    Not(Prop),
    And(Prop, Prop),
    Or(Prop, Prop),
}

/// Ground propositional formula over model facts, with sharing.
#[derive(Debug, Clone)]
struct Prop(Rc<Node>);

impl Prop {
    fn atom(bit: usize) -> Prop {
        Prop(Rc::new(Node::Atom(bit)))
    }
}

impl Truth for Prop {
    fn constant(value: bool) -> Prop {
        Prop(Rc::new(if value { Node::True } else { Node::False }))
    }

    fn and(&self, other: &Prop) -> Prop {
        match (&*self.0, &*other.0) {
            (Node::False, _) | (_, Node::True) => self.clone(),
            (Node::True, _) | (_, Node::False) => other.clone(),
            _ => Prop(Rc::new(Node::And(self.clone(), other.clone()))),
        }
    }

    fn or(&self, other: &Prop) -> Prop {
        match (&*self.0, &*other.0) {
            (Node::True, _) | (_, Node::False) => self.clone(),
            (Node::False, _) | (_, Node::True) => other.clone(),
            _ => Prop(Rc::new(Node::Or(self.clone(), other.clone()))),
        }
    }

    fn not(&self) -> Prop {
        match &*self.0 {
            Node::True => Prop::constant(false),
            Node::False => Prop::constant(true),
            Node::Not(p) => p.clone(),
            _ => Prop(Rc::new(Node::Not(self.clone()))),
        }
    }
}

/// A model of fixed size whose facts are unknowns.
struct Symbolic<'s> {
    layout: Layout<'s>,
    constants: BTreeMap<String, usize>,
}

impl Interp for Symbolic<'_> {
    type B = Prop;

    fn worlds(&self) -> usize {
        self.layout.worlds
    }

    fn individuals(&self) -> usize {
        self.layout.individuals
    }

    fn predicate(&self, name: &str, world: usize, x: usize) -> Prop {
        self.layout
            .predicate_bit(name, world, x)
            .map_or_else(|| Prop::constant(false), Prop::atom)
    }

    fn role(&self, name: &str, world: usize, x: usize, y: usize) -> Prop {
        self.layout
            .role_bit(name, world, x, y)
            .map_or_else(|| Prop::constant(false), Prop::atom)
    }

    fn content(&self, x: usize, world: usize, target: usize) -> Prop {
        self.layout
            .content_bit(x, world, target)
            .map_or_else(|| Prop::constant(false), Prop::atom)
    }

    fn constant(&self, name: &str) -> Option<usize> {
        self.constants.get(name).copied()
    }
}

/// Tseitin encoding into a solver whose first variables are the model facts.
struct Encoder {
    solver: Solver<'static>,
    memo: HashMap<*const Node, Lit>,
    atoms: BTreeSet<usize>,
    next: usize,
}

impl Encoder {
    fn new(facts: usize) -> Encoder {
        Encoder {
            solver: Solver::new(),
            memo: HashMap::new(),
            atoms: BTreeSet::new(),
            next: facts,
        }
    }

    fn fresh(&mut self) -> Lit {
        let v = Var::from_index(self.next);
        self.next += 1;
        Lit::positive(v)
    }

    /// Literal for a non-constant formula.
    fn lit(&mut self, p: &Prop) -> Lit {
        let key = Rc::as_ptr(&p.0);
        if let Some(l) = self.memo.get(&key) {
            return *l;
        }
        let l = match &*p.0 {
            Node::Atom(bit) => {
                self.atoms.insert(*bit);
                Lit::positive(Var::from_index(*bit))
            }
            Node::Not(q) => !self.lit(q),
            Node::And(a, b) | Node::Or(a, b) => {
                let (a, b) = (self.lit(a), self.lit(b));
                let v = self.fresh();
                if matches!(&*p.0, Node::And(..)) {
                    self.solver.add_clause(&[!v, a]);
                    self.solver.add_clause(&[!v, b]);
                    self.solver.add_clause(&[v, !a, !b]);
                } else {
                    self.solver.add_clause(&[v, !a]);
                    self.solver.add_clause(&[v, !b]);
                    self.solver.add_clause(&[!v, a, b]);
                }
                v
            }
            Node::True | Node::False => unreachable!("constants are folded away"),
        };
        self.memo.insert(key, l);
        l
    }

    fn solve(&mut self, assumptions: &[Lit]) -> Result<bool, EvalError> {
        self.solver.assume(assumptions);
        self.solver
            .solve()
            .map_err(|e| EvalError::Solver(e.to_string()))
    }

    /// The least satisfying assignment of the facts, reading the first fact
    /// as the most significant bit; `None` if unsatisfiable.
    fn least_model(mut self, goal: &Prop, facts: usize) -> Result<Option<Vec<bool>>, EvalError> {
        match &*goal.0 {
            Node::False => return Ok(None),
            Node::True => return Ok(Some(vec![false; facts])),
            _ => {}
        }
        let root = self.lit(goal);
        self.solver.add_clause(&[root]);
        if !self.solve(&[])? {
            return Ok(None);
        }
        let mut fixed = Vec::new();
        let mut bits = vec![false; facts];
        for bit in self.atoms.clone() {
            let off = Lit::negative(Var::from_index(bit));
            fixed.push(off);
            if !self.solve(&fixed)? {
                fixed.pop();
                fixed.push(!off);
                bits[bit] = true;
            }
        }
        Ok(Some(bits))
    }
}

fn sizes(bound: &EnumerationBound, actual: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
    (1..=bound.worlds)
        .filter(move |w| *w > actual)
        .flat_map(move |w| (1..=bound.individuals).map(move |i| (w, i)))
}

fn prepare(
    premise: &Term,
    conclusion: &Term,
    bound: &EnumerationBound,
    actual: usize,
    table: &DeterminerTable,
) -> Result<Signature, EvalError> {
    bound.check()?;
    let (p, c) = (check_formula(premise)?, check_formula(conclusion)?);
    if p != c {
        return Err(EvalError::TypeMismatch {
            premise: p.to_string(),
            conclusion: c.to_string(),
        });
    }
    if actual >= bound.worlds {
        return Err(EvalError::WorldOutOfRange {
            world: actual,
            worlds: bound.worlds,
        });
    }
    Signature::of_terms(&[premise, conclusion], table)
}

/// Searches every model up to the bound (worlds ascending, then
/// individuals) for one where `premise` holds at world `actual` and
/// `conclusion` does not. Each size is grounded and handed to a SAT solver;
/// the counterexample reported is the first in [`super::enumerate_models`]
/// order.
pub fn entails(
    premise: &Term,
    conclusion: &Term,
    bound: &EnumerationBound,
    actual: usize,
    table: &DeterminerTable,
) -> Result<Verdict, EvalError> {
    let sig = prepare(premise, conclusion, bound, actual, table)?;
    for (worlds, individuals) in sizes(bound, actual) {
        let layout = Layout {
            sig: &sig,
            worlds,
            individuals,
        };
        let mut assignment = vec![0; sig.constants.len()];
        loop {
            let symbolic = Symbolic {
                layout: layout.clone(),
                constants: sig
                    .constants
                    .iter()
                    .cloned()
                    .zip(assignment.iter().copied())
                    .collect(),
            };
            let p = eval_generic(&symbolic, table, actual, premise)?;
            let c = eval_generic(&symbolic, table, actual, conclusion)?;
            let goal = p.and(&c.not());
            let facts = layout.bits();
            if let Some(bits) = Encoder::new(facts).least_model(&goal, facts)? {
                return Ok(Verdict::Counterexample {
                    model: layout.model(&bits, &assignment),
                    actual,
                });
            }
            if !increment(&mut assignment, individuals) {
                break;
            }
        }
    }
    Ok(Verdict::EntailedWithinBound {
        worlds: bound.worlds,
        individuals: bound.individuals,
    })
}

/// [`entails`] by evaluating every enumerated model; subject to the
/// enumeration cap at each size.
pub fn entails_exhaustive(
    premise: &Term,
    conclusion: &Term,
    bound: &EnumerationBound,
    actual: usize,
    table: &DeterminerTable,
) -> Result<Verdict, EvalError> {
    let sig = prepare(premise, conclusion, bound, actual, table)?;
    for (worlds, individuals) in sizes(bound, actual) {
        let size = EnumerationBound {
            worlds,
            individuals,
            ..*bound
        };
        for model in enumerate_models(&sig, &size)? {
            if eval_generic(&model, table, actual, premise)?
                && !eval_generic(&model, table, actual, conclusion)?
            {
                return Ok(Verdict::Counterexample { model, actual });
            }
        }
    }
    Ok(Verdict::EntailedWithinBound {
        worlds: bound.worlds,
        individuals: bound.individuals,
    })
}
