use std::collections::HashMap;

use super::{Term, Type};

/// Equality up to consistent renaming of bound variables.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    fn lookup(env: &[(String, String)], name: &str, left: bool) -> Option<usize> {
        env.iter()
            .rposition(|(l, r)| if left { l == name } else { r == name })
    }
    fn go(a: &Term, b: &Term, env: &mut Vec<(String, String)>) -> bool {
        match (a, b) {
            (Term::Var { name: x, ty: tx }, Term::Var { name: y, ty: ty_ }) => {
                if tx != ty_ {
                    return false;
                }
                match (lookup(env, x, true), lookup(env, y, false)) {
                    (None, None) => x == y,
                    (i, j) => i == j,
                }
            }
            (Term::Const { name: x, ty: tx }, Term::Const { name: y, ty: ty_ }) => {
                x == y && tx == ty_
            }
            (Term::Top, Term::Top) => true,
            (
                Term::Lam {
                    var: x,
                    ty: tx,
                    body: bx,
                },
                Term::Lam {
                    var: y,
                    ty: ty_,
                    body: by,
                },
            ) => {
                if tx != ty_ {
                    return false;
                }
                env.push((x.clone(), y.clone()));
                let ok = go(bx, by, env);
                env.pop();
                ok
            }
            (Term::Exists { var: x, body: bx }, Term::Exists { var: y, body: by }) => {
                env.push((x.clone(), y.clone()));
                let ok = go(bx, by, env);
                env.pop();
                ok
            }
            (Term::App(f1, a1), Term::App(f2, a2)) | (Term::And(f1, a1), Term::And(f2, a2)) => {
                go(f1, f2, env) && go(a1, a2, env)
            }
            _ => false,
        }
    }
    go(a, b, &mut Vec::new())
}

/// Flattened form: conjunctions as lists, `exists` chains as binder lists,
/// and every binder renamed to a name no free variable can have.
#[derive(Debug, Clone)]
enum Canon {
    Const(String, Type),
    Var(String, Type),
    Lam(String, Type, Box<Canon>),
    App(Box<Canon>, Box<Canon>),
    And(Vec<Canon>),
    Exists(Vec<String>, Box<Canon>),
    Top,
}

const BOUND_MARK: char = '%';

fn canonize(t: &Term, side: char, counter: &mut usize, env: &mut Vec<(String, String)>) -> Canon {
    let mut bind = |env: &mut Vec<(String, String)>, v: &str| {
        let fresh = format!("{BOUND_MARK}{side}{counter}");
        *counter += 1;
        env.push((v.to_string(), fresh.clone()));
        fresh
    };
    match t {
        Term::Const { name, ty } => Canon::Const(name.clone(), ty.clone()),
        Term::Var { name, ty } => {
            let resolved = env
                .iter()
                .rev()
                .find(|(orig, _)| orig == name)
                .map(|(_, fresh)| fresh.clone())
                .unwrap_or_else(|| name.clone());
            Canon::Var(resolved, ty.clone())
        }
        Term::Top => Canon::Top,
        Term::Lam { var, ty, body } => {
            let fresh = bind(env, var);
            let body = canonize(body, side, counter, env);
            env.pop();
            Canon::Lam(fresh, ty.clone(), Box::new(body))
        }
        Term::Exists { .. } => {
            let mut binders = Vec::new();
            let mut cur = t;
            while let Term::Exists { var, body } = cur {
                binders.push(bind(env, var));
                cur = body;
            }
            let body = canonize(cur, side, counter, env);
            for _ in &binders {
                env.pop();
            }
            match body {
                Canon::Exists(inner, body) => {
                    binders.extend(inner);
                    Canon::Exists(binders, body)
                }
                body => Canon::Exists(binders, Box::new(body)),
            }
        }
        Term::App(f, a) => Canon::App(
            Box::new(canonize(f, side, counter, env)),
            Box::new(canonize(a, side, counter, env)),
        ),
        Term::And(..) => {
            let mut parts = Vec::new();
            for c in t.conjuncts() {
                match canonize(c, side, counter, env) {
                    Canon::And(inner) => parts.extend(inner),
                    other => parts.push(other),
                }
            }
            Canon::And(parts)
        }
    }
}

/// A binder-blind fingerprint; equal fingerprints are necessary for a match.
fn skeleton(c: &Canon) -> String {
    match c {
        Canon::Const(n, ty) => format!("c:{n}:{ty}"),
        Canon::Var(n, ty) if n.starts_with(BOUND_MARK) => format!("b:{ty}"),
        Canon::Var(n, ty) => format!("v:{n}:{ty}"),
        Canon::Lam(_, ty, body) => format!("L{ty}[{}]", skeleton(body)),
        Canon::App(f, a) => format!("A[{}][{}]", skeleton(f), skeleton(a)),
        Canon::And(parts) => {
            let mut s: Vec<String> = parts.iter().map(skeleton).collect();
            s.sort();
            format!("C[{}]", s.join(","))
        }
        Canon::Exists(vs, body) => format!("E{}[{}]", vs.len(), skeleton(body)),
        Canon::Top => "T".into(),
    }
}

#[derive(Clone, Default)]
struct Matching {
    forward: HashMap<String, String>,
    backward: HashMap<String, String>,
    /// Binder of an `exists` chain -> chain id; members of one chain on
    /// either side may pair up in any order.
    group: HashMap<String, usize>,
    next_group: usize,
}

impl Matching {
    fn pair(&mut self, x: &str, y: &str) {
        self.forward.insert(x.to_string(), y.to_string());
        self.backward.insert(y.to_string(), x.to_string());
    }
}

fn unify(a: &Canon, b: &Canon, m: &mut Matching) -> bool {
    match (a, b) {
        (Canon::Const(x, tx), Canon::Const(y, ty_)) => x == y && tx == ty_,
        (Canon::Top, Canon::Top) => true,
        (Canon::Var(x, tx), Canon::Var(y, ty_)) => {
            if tx != ty_ {
                return false;
            }
            let xb = x.starts_with(BOUND_MARK);
            let yb = y.starts_with(BOUND_MARK);
            if !xb && !yb {
                return x == y;
            }
            if xb != yb {
                return false;
            }
            match (m.forward.get(x), m.backward.get(y)) {
                (Some(y2), _) => y2 == y,
                (None, Some(_)) => false,
                (None, None) => match (m.group.get(x), m.group.get(y)) {
                    (Some(g1), Some(g2)) if g1 == g2 => {
                        m.pair(x, y);
                        true
                    }
                    _ => false,
                },
            }
        }
        (Canon::Lam(x, tx, bx), Canon::Lam(y, ty_, by)) => {
            if tx != ty_ {
                return false;
            }
            m.pair(x, y);
            unify(bx, by, m)
        }
        (Canon::Exists(xs, bx), Canon::Exists(ys, by)) => {
            if xs.len() != ys.len() {
                return false;
            }
            let g = m.next_group;
            m.next_group += 1;
            for v in xs.iter().chain(ys) {
                m.group.insert(v.clone(), g);
            }
            unify(bx, by, m)
        }
        (Canon::App(f1, a1), Canon::App(f2, a2)) => unify(f1, f2, m) && unify(a1, a2, m),
        (Canon::And(xs), Canon::And(ys)) => {
            if xs.len() != ys.len() {
                return false;
            }
            let ys_skel: Vec<String> = ys.iter().map(skeleton).collect();
            let xs_skel: Vec<String> = xs.iter().map(skeleton).collect();
            let mut sorted_x = xs_skel.clone();
            let mut sorted_y = ys_skel.clone();
            sorted_x.sort();
            sorted_y.sort();
            if sorted_x != sorted_y {
                return false;
            }
            let mut used = vec![false; ys.len()];
            match_conjuncts(xs, &xs_skel, ys, &ys_skel, &mut used, 0, m)
        }
        _ => false,
    }
}

fn match_conjuncts(
    xs: &[Canon],
    xs_skel: &[String],
    ys: &[Canon],
    ys_skel: &[String],
    used: &mut [bool],
    i: usize,
    m: &mut Matching,
) -> bool {
    if i == xs.len() {
        return true;
    }
    for j in 0..ys.len() {
        if used[j] || xs_skel[i] != ys_skel[j] {
            continue;
        }
        let mut trial = m.clone();
        if unify(&xs[i], &ys[j], &mut trial) {
            used[j] = true;
            if match_conjuncts(xs, xs_skel, ys, ys_skel, used, i + 1, &mut trial) {
                *m = trial;
                return true;
            }
            used[j] = false;
        }
    }
    false
}

/// Equality up to alpha-renaming, associativity and commutativity of `&`,
/// and reordering within chains of adjacent `exists`.
pub fn equiv_mod_ac_alpha(a: &Term, b: &Term) -> bool {
    let mut counter = 0;
    let ca = canonize(a, 'a', &mut counter, &mut Vec::new());
    let cb = canonize(b, 'b', &mut counter, &mut Vec::new());
    if skeleton(&ca) != skeleton(&cb) {
        return false;
    }
    unify(&ca, &cb, &mut Matching::default())
}
