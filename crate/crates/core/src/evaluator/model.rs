use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::Interp;

/// A finite intensional model. Worlds and individuals are indices into the
/// name lists; missing predicates and roles have empty extensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    worlds: Vec<String>,
    domain: Vec<String>,
    predicates: BTreeMap<String, BTreeSet<(usize, usize)>>,
    roles: BTreeMap<String, BTreeSet<(usize, usize, usize)>>,
    content: BTreeSet<(usize, usize, usize)>,
    constants: BTreeMap<String, usize>,
}

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("malformed model JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("model needs at least one world and one individual")]
    Empty,
    #[error("duplicate identifier {0}")]
    Duplicate(String),
    #[error("undeclared world {0}")]
    UnknownWorld(String),
    #[error("undeclared individual {0}")]
    UnknownIndividual(String),
}

#[derive(Serialize, Deserialize)]
struct ModelJson {
    worlds: Vec<String>,
    domain: Vec<String>,
    #[serde(default)]
    predicates: BTreeMap<String, BTreeMap<String, Vec<String>>>,
    #[serde(default)]
    roles: BTreeMap<String, BTreeMap<String, Vec<[String; 2]>>>,
    #[serde(default)]
    content: BTreeMap<String, BTreeMap<String, Vec<String>>>,
    #[serde(default)]
    constants: BTreeMap<String, String>,
}

impl Model {
    /// Worlds `w0..` and individuals `i0..`, all extensions empty.
    ///
    /// # Panics
    /// If either size is zero.
    pub fn new(worlds: usize, individuals: usize) -> Model {
        assert!(worlds > 0 && individuals > 0, "empty model");
        Model {
            worlds: (0..worlds).map(|w| format!("w{w}")).collect(),
            domain: (0..individuals).map(|i| format!("i{i}")).collect(),
            predicates: BTreeMap::new(),
            roles: BTreeMap::new(),
            content: BTreeSet::new(),
            constants: BTreeMap::new(),
        }
    }

    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn individual_count(&self) -> usize {
        self.domain.len()
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn domain(&self) -> &[String] {
        &self.domain
    }

    pub fn world_index(&self, name: &str) -> Option<usize> {
        self.worlds.iter().position(|w| w == name)
    }

    fn check(&self, world: usize, inds: &[usize]) {
        assert!(world < self.worlds.len(), "world {world} out of range");
        for &i in inds {
            assert!(i < self.domain.len(), "individual {i} out of range");
        }
    }

    /// Declares a predicate with an empty extension.
    pub fn declare_predicate(&mut self, name: &str) -> &mut Model {
        self.predicates.entry(name.to_string()).or_default();
        self
    }

    pub fn declare_role(&mut self, name: &str) -> &mut Model {
        self.roles.entry(name.to_string()).or_default();
        self
    }

    pub fn add_predicate(&mut self, name: &str, world: usize, x: usize) -> &mut Model {
        self.check(world, &[x]);
        self.predicates
            .entry(name.to_string())
            .or_default()
            .insert((world, x));
        self
    }

    pub fn add_role(&mut self, name: &str, world: usize, x: usize, y: usize) -> &mut Model {
        self.check(world, &[x, y]);
        self.roles
            .entry(name.to_string())
            .or_default()
            .insert((world, x, y));
        self
    }

    /// Adds `target` to the content set of `x` at `world`.
    pub fn add_content(&mut self, x: usize, world: usize, target: usize) -> &mut Model {
        self.check(world, &[x]);
        self.check(target, &[]);
        self.content.insert((x, world, target));
        self
    }

    pub fn set_constant(&mut self, name: &str, x: usize) -> &mut Model {
        self.check(0, &[x]);
        self.constants.insert(name.to_string(), x);
        self
    }

    pub fn holds(&self, name: &str, world: usize, x: usize) -> bool {
        self.predicates
            .get(name)
            .is_some_and(|ext| ext.contains(&(world, x)))
    }

    pub fn relates(&self, name: &str, world: usize, x: usize, y: usize) -> bool {
        self.roles
            .get(name)
            .is_some_and(|ext| ext.contains(&(world, x, y)))
    }

    pub fn content_worlds(&self, x: usize, world: usize) -> Vec<usize> {
        (0..self.worlds.len())
            .filter(|v| self.content.contains(&(x, world, *v)))
            .collect()
    }

    /// Worlds, domain, per-world extensions, the content set of every
    /// (individual, world) pair, and constant denotations.
    pub fn to_json(&self) -> serde_json::Value {
        let w = |i: usize| self.worlds[i].clone();
        let d = |i: usize| self.domain[i].clone();
        let per_world = |pairs: &BTreeSet<(usize, usize)>| {
            let mut out: BTreeMap<String, Vec<String>> = BTreeMap::new();
            for &(world, x) in pairs {
                out.entry(w(world)).or_default().push(d(x));
            }
            out
        };
        let json = ModelJson {
            worlds: self.worlds.clone(),
            domain: self.domain.clone(),
            predicates: self
                .predicates
                .iter()
                .map(|(name, ext)| (name.clone(), per_world(ext)))
                .collect(),
            roles: self
                .roles
                .iter()
                .map(|(name, ext)| {
                    let mut out: BTreeMap<String, Vec<[String; 2]>> = BTreeMap::new();
                    for &(world, x, y) in ext {
                        out.entry(w(world)).or_default().push([d(x), d(y)]);
                    }
                    (name.clone(), out)
                })
                .collect(),
            content: (0..self.domain.len())
                .map(|x| {
                    let sets = (0..self.worlds.len())
                        .map(|world| {
                            let targets =
                                self.content_worlds(x, world).into_iter().map(w).collect();
                            (w(world), targets)
                        })
                        .collect();
                    (d(x), sets)
                })
                .collect(),
            constants: self
                .constants
                .iter()
                .map(|(name, &x)| (name.clone(), d(x)))
                .collect(),
        };
        serde_json::to_value(json).expect("model JSON is serializable")
    }

    pub fn from_json(text: &str) -> Result<Model, ModelError> {
        let json: ModelJson = serde_json::from_str(text)?;
        if json.worlds.is_empty() || json.domain.is_empty() {
            return Err(ModelError::Empty);
        }
        for names in [&json.worlds, &json.domain] {
            let mut seen = BTreeSet::new();
            for n in names {
                if !seen.insert(n) {
                    return Err(ModelError::Duplicate(n.clone()));
                }
            }
        }
        let world = |n: &str| {
            json.worlds
                .iter()
                .position(|w| w == n)
                .ok_or_else(|| ModelError::UnknownWorld(n.to_string()))
        };
        let ind = |n: &str| {
            json.domain
                .iter()
                .position(|d| d == n)
                .ok_or_else(|| ModelError::UnknownIndividual(n.to_string()))
        };
        let mut model = Model {
            worlds: json.worlds.clone(),
            domain: json.domain.clone(),
            predicates: BTreeMap::new(),
            roles: BTreeMap::new(),
            content: BTreeSet::new(),
            constants: BTreeMap::new(),
        };
        for (name, ext) in &json.predicates {
            model.declare_predicate(name);
            for (w, xs) in ext {
                for x in xs {
                    model.add_predicate(name, world(w)?, ind(x)?);
                }
            }
        }
        for (name, ext) in &json.roles {
            model.declare_role(name);
            for (w, pairs) in ext {
                for [x, y] in pairs {
                    model.add_role(name, world(w)?, ind(x)?, ind(y)?);
                }
            }
        }
        for (x, sets) in &json.content {
            for (w, targets) in sets {
                for v in targets {
                    model.add_content(ind(x)?, world(w)?, world(v)?);
                }
            }
        }
        for (name, x) in &json.constants {
            model.set_constant(name, ind(x)?);
        }
        Ok(model)
    }
}

impl Interp for Model {
    type B = bool;

    fn worlds(&self) -> usize {
        self.worlds.len()
    }

    fn individuals(&self) -> usize {
        self.domain.len()
    }

    fn predicate(&self, name: &str, world: usize, x: usize) -> bool {
        self.holds(name, world, x)
    }

    fn role(&self, name: &str, world: usize, x: usize, y: usize) -> bool {
        self.relates(name, world, x, y)
    }

    fn content(&self, x: usize, world: usize, target: usize) -> bool {
        self.content.contains(&(x, world, target))
    }

    fn constant(&self, name: &str) -> Option<usize> {
        self.constants.get(name).copied()
    }
}
