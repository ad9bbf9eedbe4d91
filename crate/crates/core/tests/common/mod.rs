//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

pub mod checks;
pub mod derivations;

use std::collections::{BTreeMap, BTreeSet};

use amr_intens::amr::{validate, AmrNode, Instance};
use amr_intens::stlc::{Term, Type};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const CONCEPTS: &[&str] = &[
    "boy",
    "girl",
    "dog",
    "want-01",
    "believe-01",
    "sick-05",
    "hope-01",
    "buy-01",
    "violin",
    "see-01",
    "walk-01",
    "white",
    "class",
    "professor",
];
const ROLES: &[&str] = &[
    "ARG0",
    "ARG1",
    "ARG2",
    "mod",
    "domain",
    "location",
    "prep-with",
];
const CONSTANTS: &[&str] = &["-", "2", "Mary", "+", "17"];
const DETERMINERS: &[&str] = &["every", "a", "some", "2", "3"];

#[derive(Debug, Clone, Copy)]
pub struct GraphShape {
    /// Allow `:content` roles.
    pub content: bool,
    /// Allow `:R-of` roles.
    pub inverse: bool,
    /// Allow constants such as `:polarity -`.
    pub constants: bool,
    /// Allow re-entrancies to arbitrary visible variables.
    pub reentrancy: bool,
    pub max_depth: usize,
    pub max_roles: usize,
}

impl GraphShape {
    pub fn extensional() -> GraphShape {
        GraphShape {
            content: false,
            inverse: true,
            constants: true,
            reentrancy: true,
            max_depth: 4,
            max_roles: 3,
        }
    }

    pub fn intensional() -> GraphShape {
        GraphShape {
            content: true,
            ..GraphShape::extensional()
        }
    }
}

struct Gen {
    rng: ChaCha8Rng,
    shape: GraphShape,
    used: BTreeSet<String>,
    /// Variables visible for re-entrancy, one frame per `:content` level.
    frames: Vec<Vec<String>>,
    /// Variables on the path from the root.
    ancestors: Vec<String>,
    quantify: bool,
    quantified: Vec<String>,
}

impl Gen {
    fn fresh_var(&mut self, concept: &str) -> String {
        let stem = &concept[..1];
        let mut name = stem.to_string();
        let mut n = 2;
        while self.used.contains(&name) {
            name = format!("{stem}{n}");
            n += 1;
        }
        self.used.insert(name.clone());
        name
    }

    fn visible(&self) -> Vec<String> {
        let pool: Vec<String> = self.frames.iter().flatten().cloned().collect();
        pool.into_iter()
            .filter(|v| !self.ancestors.contains(v))
            .filter(|v| !self.quantify || self.quantified.contains(v))
            .collect()
    }

    fn instance(&mut self, depth: usize) -> AmrNode {
        let concept = *CONCEPTS.choose(&mut self.rng).unwrap();
        let var = self.fresh_var(concept);
        self.frames.last_mut().unwrap().push(var.clone());
        let mut node = AmrNode::instance(&var, concept);
        if self.quantify && self.rng.gen_bool(0.4) {
            let d = *DETERMINERS.choose(&mut self.rng).unwrap();
            node = node.with_role("quant", AmrNode::constant(d));
            self.quantified.push(var.clone());
        }
        self.ancestors.push(var.clone());
        let roles = if depth >= self.shape.max_depth {
            0
        } else {
            self.rng.gen_range(0..=self.shape.max_roles)
        };
        for _ in 0..roles {
            let pick = self.rng.gen_range(0..10);
            if pick == 0 && self.shape.content {
                self.frames.push(Vec::new());
                let target = self.instance(depth + 1);
                self.frames.pop();
                node = node.with_role("content", target);
                continue;
            }
            let mut role = ROLES.choose(&mut self.rng).unwrap().to_string();
            let target = match pick {
                1 if self.shape.constants => match *CONSTANTS.choose(&mut self.rng).unwrap() {
                    "Mary" => AmrNode::string("Mary"),
                    c => AmrNode::constant(c),
                },
                2 | 3 if self.shape.reentrancy => match self.visible().choose(&mut self.rng) {
                    Some(v) => AmrNode::var(v),
                    None => self.instance(depth + 1),
                },
                _ => self.instance(depth + 1),
            };
            let constant = matches!(target, AmrNode::Constant { .. });
            if self.shape.inverse && !constant && self.rng.gen_bool(0.15) {
                role.push_str("-of");
            }
            node = node.with_role(&role, target);
        }
        self.ancestors.pop();
        node
    }
}

fn generate(seed: u64, shape: GraphShape, quantify: bool) -> AmrNode {
    let mut rng = rng(seed);
    loop {
        let mut gen = Gen {
            rng: ChaCha8Rng::seed_from_u64(rng.gen()),
            shape,
            used: BTreeSet::new(),
            frames: vec![Vec::new()],
            ancestors: Vec::new(),
            quantify,
            quantified: Vec::new(),
        };
        let g = gen.instance(0);
        if validate(&g).is_valid() {
            return g;
        }
    }
}

/// A well-formed graph without `:quant` or scope nodes.
pub fn graph(seed: u64, shape: GraphShape) -> AmrNode {
    generate(seed, shape, false)
}

fn instances(node: &AmrNode, out: &mut Vec<(Instance, bool)>, in_content: bool) {
    if let AmrNode::Instance(inst) = node {
        out.push((inst.clone(), in_content));
        for r in &inst.roles {
            instances(&r.target, out, in_content || r.name.base() == "content");
        }
    }
}

fn mentioned(node: &AmrNode, out: &mut BTreeSet<String>) {
    match node {
        AmrNode::VarRef { var, .. } => {
            out.insert(var.clone());
        }
        AmrNode::Instance(inst) => {
            out.insert(inst.var.clone());
            for r in &inst.roles {
                mentioned(&r.target, out);
            }
        }
        AmrNode::Constant { .. } => {}
    }
}

/// A root scope node over a graph with `:quant` nodes. Every quantified
/// variable is retrieved at the root, ordered so that a quantifier whose
/// restrictor mentions another is retrieved inside it; quantifiers under
/// `:content` that nothing depends on are sometimes left to the content
/// boundary. Re-entrancies only target quantified variables.
pub fn scope_graph(seed: u64, intensional: bool) -> AmrNode {
    let shape = GraphShape {
        content: intensional,
        inverse: false,
        constants: true,
        reentrancy: true,
        max_depth: 3,
        max_roles: 3,
    };
    let mut r = rng(seed ^ 0x5c09e);
    let mut attempt = 0u64;
    loop {
        attempt += 1;
        let pred = generate(seed.wrapping_mul(31).wrapping_add(attempt), shape, true);
        let mut all = Vec::new();
        instances(&pred, &mut all, false);
        let quantified: Vec<(Instance, bool)> = all
            .into_iter()
            .filter(|(i, _)| i.roles_named("quant").next().is_some())
            .collect();
        let deps: BTreeMap<String, BTreeSet<String>> = quantified
            .iter()
            .map(|(inst, _)| {
                let mut m = BTreeSet::new();
                mentioned(&AmrNode::Instance(inst.clone()), &mut m);
                m.remove(&inst.var);
                let q: BTreeSet<String> = quantified
                    .iter()
                    .map(|(i, _)| i.var.clone())
                    .filter(|v| m.contains(v))
                    .collect();
                (inst.var.clone(), q)
            })
            .collect();
        // Depended-on quantifiers come first, so they take wider scope.
        let mut order: Vec<String> = Vec::new();
        let mut remaining: Vec<String> = quantified.iter().map(|(i, _)| i.var.clone()).collect();
        while !remaining.is_empty() {
            let ready: Vec<String> = remaining
                .iter()
                .filter(|v| deps[*v].iter().all(|d| order.contains(d)))
                .cloned()
                .collect();
            if ready.is_empty() {
                break;
            }
            remaining.retain(|v| !ready.contains(v));
            order.extend(ready);
        }
        if !remaining.is_empty() {
            continue;
        }
        let depended: BTreeSet<&String> = deps.values().flatten().collect();
        let mut node = AmrNode::instance("s9", "scope");
        let mut i = 0;
        for v in &order {
            let (inst, in_content) = quantified.iter().find(|(q, _)| &q.var == v).unwrap();
            let independent = deps[v].is_empty() && !depended.contains(v);
            if *in_content && independent && r.gen_bool(0.5) && inst.roles.len() == 1 {
                continue;
            }
            node = node.with_role(&format!("ARG{i}"), AmrNode::var(v));
            i += 1;
        }
        let g = node.with_role("pred", pred);
        if validate(&g).is_valid() {
            return g;
        }
    }
}

const BINDERS: &[&str] = &["x", "y", "z", "w"];

fn small_type(rng: &mut ChaCha8Rng) -> Type {
    match rng.gen_range(0..4) {
        0 => Type::E,
        1 => Type::S,
        2 => Type::arrow(Type::E, Type::T),
        _ => Type::T,
    }
}

fn term_of(rng: &mut ChaCha8Rng, ty: &Type, env: &mut Vec<(String, Type)>, depth: usize) -> Term {
    let mut in_scope: Vec<String> = Vec::new();
    for (n, _) in env.iter() {
        let innermost = env.iter().rev().find(|(m, _)| m == n).map(|(_, t)| t);
        if innermost == Some(ty) && !in_scope.contains(n) {
            in_scope.push(n.clone());
        }
    }
    let leaf = depth == 0 || rng.gen_bool(0.25);
    if leaf {
        if let Some(n) = in_scope.choose(rng) {
            if rng.gen_bool(0.7) {
                return Term::var(n.clone(), ty.clone());
            }
        }
        return match ty {
            Type::T if rng.gen_bool(0.2) => Term::Top,
            _ => Term::constant(format!("k{}", type_tag(ty)), ty.clone()),
        };
    }
    if let Type::Arrow(from, to) = ty {
        if rng.gen_bool(0.7) {
            let v = BINDERS.choose(rng).unwrap().to_string();
            env.push((v.clone(), (**from).clone()));
            let body = term_of(rng, to, env, depth - 1);
            env.pop();
            return Term::lam(v, (**from).clone(), body);
        }
    }
    match (ty, rng.gen_range(0..4)) {
        (Type::T, 0) => term_of(rng, ty, env, depth - 1).and(term_of(rng, ty, env, depth - 1)),
        (Type::T, 1) => {
            let v = BINDERS.choose(rng).unwrap().to_string();
            env.push((v.clone(), Type::E));
            let body = term_of(rng, ty, env, depth - 1);
            env.pop();
            Term::exists(v, body)
        }
        _ => {
            let arg_ty = small_type(rng);
            let f = term_of(
                rng,
                &Type::arrow(arg_ty.clone(), ty.clone()),
                env,
                depth - 1,
            );
            f.app(term_of(rng, &arg_ty, env, depth - 1))
        }
    }
}

fn type_tag(ty: &Type) -> String {
    ty.to_string()
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect::<String>()
        .replace("__", "_")
}

/// A random well-typed term, typically full of redexes and shadowing.
pub fn term(seed: u64) -> (Term, Type) {
    let mut r = rng(seed);
    let ty = small_type(&mut r);
    let depth = r.gen_range(1..6);
    (term_of(&mut r, &ty, &mut Vec::new(), depth), ty)
}

/// A random extensional formula over unary `P` and binary `R`, with
/// free variables drawn from `free` and binders from `x`, `y`.
pub fn formula(rng: &mut ChaCha8Rng, free: &[&str], depth: usize) -> Term {
    let pred = |n: &str| Term::constant(n, Type::arrow(Type::E, Type::T));
    let rel = Term::constant("R", Type::function([Type::E, Type::E], Type::T));
    let vars: Vec<&str> = free.to_vec();
    let pick = |rng: &mut ChaCha8Rng| Term::var(*vars.choose(rng).unwrap(), Type::E);
    if depth == 0 || vars.is_empty() || rng.gen_bool(0.3) {
        if vars.is_empty() {
            return Term::Top;
        }
        return match rng.gen_range(0..2) {
            0 => pred("P").app(pick(rng)),
            _ => rel.apply([pick(rng), pick(rng)]),
        };
    }
    if rng.gen_bool(0.5) {
        formula(rng, free, depth - 1).and(formula(rng, free, depth - 1))
    } else {
        let v = ["x", "y"].choose(rng).unwrap();
        let mut inner = free.to_vec();
        if !inner.contains(v) {
            inner.push(v);
        }
        Term::exists(*v, formula(rng, &inner, depth - 1))
    }
}
