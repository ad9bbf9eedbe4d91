use super::{EvalError, Model, Signature};

/// Model sizes to consider, plus a cap on how many models an exhaustive
/// enumeration may produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBound {
    pub worlds: usize,
    pub individuals: usize,
    pub cap: u128,
}

impl EnumerationBound {
    pub const DEFAULT_CAP: u128 = 1 << 22;

    pub fn new(worlds: usize, individuals: usize) -> EnumerationBound {
        EnumerationBound {
            worlds,
            individuals,
            cap: Self::DEFAULT_CAP,
        }
    }

    pub fn with_cap(self, cap: u128) -> EnumerationBound {
        EnumerationBound { cap, ..self }
    }

    pub(crate) fn check(&self) -> Result<(), EvalError> {
        if self.worlds == 0 || self.individuals == 0 {
            Err(EvalError::ZeroBound)
        } else {
            Ok(())
        }
    }
}

/// Number of models with exactly `worlds` worlds and `individuals`
/// individuals: `2^(P·W·I + R·W·I² + C·I·W²) · I^K` for P predicates,
/// R roles, C = 1 when `cont` occurs, and K individual constants. `None` on
/// overflow.
pub fn model_count(sig: &Signature, worlds: usize, individuals: usize) -> Option<u128> {
    let bits = u32::try_from(sig.bit_count(worlds, individuals)).ok()?;
    let choices = 1u128.checked_shl(bits).filter(|_| bits < 128)?;
    let consts = u32::try_from(sig.constants.len()).ok()?;
    (individuals as u128)
        .checked_pow(consts)
        .and_then(|c| c.checked_mul(choices))
}

/// Canonical numbering of the yes/no facts of a model: predicates (by name)
/// × world × individual, then roles × world × individual², then content
/// individual × world × world.
#[derive(Debug, Clone)]
pub(crate) struct Layout<'s> {
    pub sig: &'s Signature,
    pub worlds: usize,
    pub individuals: usize,
}

impl<'s> Layout<'s> {
    pub fn bits(&self) -> usize {
        self.sig.bit_count(self.worlds, self.individuals)
    }

    fn roles_offset(&self) -> usize {
        self.sig.predicates.len() * self.worlds * self.individuals
    }

    fn content_offset(&self) -> usize {
        self.roles_offset()
            + self.sig.roles.len() * self.worlds * self.individuals * self.individuals
    }

    pub fn predicate_bit(&self, name: &str, w: usize, x: usize) -> Option<usize> {
        let p = self.sig.predicates.iter().position(|n| n == name)?;
        Some((p * self.worlds + w) * self.individuals + x)
    }

    pub fn role_bit(&self, name: &str, w: usize, x: usize, y: usize) -> Option<usize> {
        let r = self.sig.roles.iter().position(|n| n == name)?;
        let i = self.individuals;
        Some(self.roles_offset() + ((r * self.worlds + w) * i + x) * i + y)
    }

    pub fn content_bit(&self, x: usize, w: usize, v: usize) -> Option<usize> {
        if !self.sig.content {
            return None;
        }
        Some(self.content_offset() + (x * self.worlds + w) * self.worlds + v)
    }

    /// The model whose facts are `bits` and whose constants denote
    /// `assignment` (in constant-name order).
    pub fn model(&self, bits: &[bool], assignment: &[usize]) -> Model {
        let mut m = Model::new(self.worlds, self.individuals);
        for name in &self.sig.predicates {
            m.declare_predicate(name);
            for w in 0..self.worlds {
                for x in 0..self.individuals {
                    if bits[self.predicate_bit(name, w, x).unwrap()] {
                        m.add_predicate(name, w, x);
                    }
                }
            }
        }
        for name in &self.sig.roles {
            m.declare_role(name);
            for w in 0..self.worlds {
                for x in 0..self.individuals {
                    for y in 0..self.individuals {
                        if bits[self.role_bit(name, w, x, y).unwrap()] {
                            m.add_role(name, w, x, y);
                        }
                    }
                }
            }
        }
        for x in 0..self.individuals {
            for w in 0..self.worlds {
                for v in 0..self.worlds {
                    if self.content_bit(x, w, v).is_some_and(|b| bits[b]) {
                        m.add_content(x, w, v);
                    }
                }
            }
        }
        for (name, &x) in self.sig.constants.iter().zip(assignment) {
            m.set_constant(name, x);
        }
        m
    }
}

/// Counts in base `radix` over `digits` positions, first position most
/// significant. Returns false after wrapping around.
pub(crate) fn increment(digits: &mut [usize], radix: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

/// Every model of one size, each exactly once: constant assignments vary
/// slowest, then the facts count up in binary with the first fact (in
/// canonical order) most significant.
pub struct ModelStream<'s> {
    layout: Layout<'s>,
    bits: Vec<usize>,
    assignment: Vec<usize>,
    done: bool,
}

impl Iterator for ModelStream<'_> {
    type Item = Model;

    fn next(&mut self) -> Option<Model> {
        if self.done {
            return None;
        }
        let flags: Vec<bool> = self.bits.iter().map(|b| *b == 1).collect();
        let model = self.layout.model(&flags, &self.assignment);
        if !increment(&mut self.bits, 2)
            && !increment(&mut self.assignment, self.layout.individuals)
        {
            self.done = true;
        }
        Some(model)
    }
}

/// All models over `sig` with exactly `bound.worlds` worlds and
/// `bound.individuals` individuals.
pub fn enumerate_models<'s>(
    sig: &'s Signature,
    bound: &EnumerationBound,
) -> Result<ModelStream<'s>, EvalError> {
    bound.check()?;
    let count = model_count(sig, bound.worlds, bound.individuals);
    match count {
        Some(n) if n <= bound.cap => {}
        _ => {
            return Err(EvalError::BoundTooLarge {
                count: count.map_or_else(|| "too many".to_string(), |n| n.to_string()),
                cap: bound.cap,
            })
        }
    }
    let layout = Layout {
        sig,
        worlds: bound.worlds,
        individuals: bound.individuals,
    };
    Ok(ModelStream {
        bits: vec![0; layout.bits()],
        assignment: vec![0; sig.constants.len()],
        layout,
        done: false,
    })
}
