//! Operators, problems, and the builder that interns proposition names.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::prop::{Prop, PropSet};

/// A conditional effect `⟨deps, effect⟩`. `marked` records that role
/// selection has decided not to use the effect; it is always false in a
/// library schema.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Conditional {
    pub deps: PropSet,
    pub effect: Prop,
    pub marked: bool,
}

/// The condition/effect lists of an operator or of a (possibly specialized)
/// plan step.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Effects {
    pub pre: PropSet,
    pub adds: PropSet,
    pub dels: PropSet,
    pub cadds: Vec<Conditional>,
    pub cdels: Vec<Conditional>,
}

impl Effects {
    /// Adds plus every conditional add effect.
    pub fn possibly_adds(&self, p: Prop) -> bool {
        self.adds.contains(p) || self.cadds.iter().any(|c| c.effect == p)
    }

    pub fn possibly_deletes(&self, p: Prop) -> bool {
        self.dels.contains(p) || self.cdels.iter().any(|c| c.effect == p)
    }

    /// Preconditions plus every dependency condition.
    pub fn requires_or_depends(&self, p: Prop) -> bool {
        self.pre.contains(p)
            || self
                .cadds
                .iter()
                .chain(self.cdels.iter())
                .any(|c| c.deps.contains(p))
    }

    pub fn is_conditional(&self) -> bool {
        !self.cadds.is_empty() || !self.cdels.is_empty()
    }

    /// Largest field size, the per-domain constant the cost analysis assumes.
    pub fn size(&self) -> usize {
        let cond = |cs: &[Conditional]| cs.iter().map(|c| c.deps.len() + 1).sum::<usize>();
        self.pre.len() + self.adds.len() + self.dels.len() + cond(&self.cadds) + cond(&self.cdels)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorSchema {
    pub name: String,
    pub effects: Arc<Effects>,
}

impl OperatorSchema {
    pub fn pre(&self) -> &PropSet {
        &self.effects.pre
    }

    pub fn adds(&self) -> &PropSet {
        &self.effects.adds
    }

    pub fn dels(&self) -> &PropSet {
        &self.effects.dels
    }
}

/// Checks the two language conventions: deletes are preconditions, and a
/// conditional delete is one of its own dependency conditions.
pub fn check_effects(name: &str, e: &Effects, symbols: &[String]) -> Result<()> {
    if let Some(p) = e.dels.iter().find(|p| !e.pre.contains(*p)) {
        return Err(Error::DeleteNotPrecondition {
            operator: name.to_string(),
            prop: symbols[p.index()].clone(),
        });
    }
    if let Some(c) = e.cdels.iter().find(|c| !c.deps.contains(c.effect)) {
        return Err(Error::ConditionalDeleteOutsideDeps {
            operator: name.to_string(),
            prop: symbols[c.effect.index()].clone(),
        });
    }
    Ok(())
}

/// Initial state, goals, and operator library over an interned, sorted
/// symbol table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Problem {
    name: String,
    symbols: Vec<String>,
    init: PropSet,
    goals: PropSet,
    library: Vec<OperatorSchema>,
}

impl Problem {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn init(&self) -> &PropSet {
        &self.init
    }

    pub fn goals(&self) -> &PropSet {
        &self.goals
    }

    pub fn library(&self) -> &[OperatorSchema] {
        &self.library
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn n_props(&self) -> usize {
        self.symbols.len()
    }

    pub fn prop(&self, name: &str) -> Option<Prop> {
        self.symbols
            .binary_search_by(|s| s.as_str().cmp(name))
            .ok()
            .map(Prop::from_index)
    }

    pub fn prop_name(&self, p: Prop) -> &str {
        &self.symbols[p.index()]
    }

    pub fn operator(&self, name: &str) -> Option<usize> {
        self.library.iter().position(|o| o.name == name)
    }

    pub fn has_conditional_effects(&self) -> bool {
        self.library.iter().any(|o| o.effects.is_conditional())
    }

    /// Init and goal propositions that no operator mentions. Informational.
    pub fn lint(&self) -> Vec<String> {
        let mut mentioned = BTreeSet::new();
        for op in &self.library {
            let e = &op.effects;
            mentioned.extend(e.pre.iter().chain(e.adds.iter()).chain(e.dels.iter()));
            for c in e.cadds.iter().chain(e.cdels.iter()) {
                mentioned.insert(c.effect);
                mentioned.extend(c.deps.iter());
            }
        }
        let mut out = Vec::new();
        for (what, set) in [("init", &self.init), ("goal", &self.goals)] {
            for p in set.iter().filter(|p| !mentioned.contains(p)) {
                if what == "goal" && self.init.contains(p) {
                    continue;
                }
                out.push(alloc::format!("{what} proposition `{}` is not mentioned by any operator", self.prop_name(p)));
            }
        }
        out
    }
}

/// An operator written with proposition names, before interning.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OperatorDraft {
    pub name: String,
    pub pre: Vec<String>,
    pub adds: Vec<String>,
    pub dels: Vec<String>,
    pub cadds: Vec<(Vec<String>, String)>,
    pub cdels: Vec<(Vec<String>, String)>,
}

fn owned<I, S>(xs: I) -> Vec<String>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    xs.into_iter().map(|s| s.as_ref().to_string()).collect()
}

impl OperatorDraft {
    pub fn new(name: impl Into<String>) -> Self {
        OperatorDraft { name: name.into(), ..Default::default() }
    }

    pub fn pre<I: IntoIterator<Item = S>, S: AsRef<str>>(mut self, xs: I) -> Self {
        self.pre.extend(owned(xs));
        self
    }

    pub fn adds<I: IntoIterator<Item = S>, S: AsRef<str>>(mut self, xs: I) -> Self {
        self.adds.extend(owned(xs));
        self
    }

    pub fn dels<I: IntoIterator<Item = S>, S: AsRef<str>>(mut self, xs: I) -> Self {
        self.dels.extend(owned(xs));
        self
    }

    pub fn cadd<I: IntoIterator<Item = S>, S: AsRef<str>>(mut self, deps: I, effect: &str) -> Self {
        self.cadds.push((owned(deps), effect.to_string()));
        self
    }

    pub fn cdel<I: IntoIterator<Item = S>, S: AsRef<str>>(mut self, deps: I, effect: &str) -> Self {
        self.cdels.push((owned(deps), effect.to_string()));
        self
    }
}

#[derive(Clone, Debug, Default)]
pub struct ProblemBuilder {
    name: String,
    init: Vec<String>,
    goals: Vec<String>,
    ops: Vec<OperatorDraft>,
}

impl ProblemBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        ProblemBuilder { name: name.into(), ..Default::default() }
    }

    pub fn init<I: IntoIterator<Item = S>, S: AsRef<str>>(mut self, xs: I) -> Self {
        self.init.extend(owned(xs));
        self
    }

    pub fn goals<I: IntoIterator<Item = S>, S: AsRef<str>>(mut self, xs: I) -> Self {
        self.goals.extend(owned(xs));
        self
    }

    pub fn operator(mut self, op: OperatorDraft) -> Self {
        self.ops.push(op);
        self
    }

    pub fn push_operator(&mut self, op: OperatorDraft) {
        self.ops.push(op);
    }

    /// Interns names and validates every operator against the language
    /// conventions.
    pub fn build(self) -> Result<Problem> {
        let p = self.build_unchecked();
        for op in &p.library {
            check_effects(&op.name, &op.effects, &p.symbols)?;
        }
        Ok(p)
    }

    /// Like [`build`](Self::build) but skips the convention checks. Planners
    /// may then fail with [`Error::NoUniqueLastDeleter`].
    pub fn build_unchecked(self) -> Problem {
        let mut names: BTreeSet<&str> = BTreeSet::new();
        names.extend(self.init.iter().map(String::as_str));
        names.extend(self.goals.iter().map(String::as_str));
        for op in &self.ops {
            for s in op.pre.iter().chain(&op.adds).chain(&op.dels) {
                names.insert(s);
            }
            for (deps, e) in op.cadds.iter().chain(&op.cdels) {
                names.extend(deps.iter().map(String::as_str));
                names.insert(e);
            }
        }
        let symbols: Vec<String> = names.into_iter().map(ToString::to_string).collect();
        let intern = |s: &String| Prop::from_index(symbols.binary_search(s).unwrap());
        let set = |xs: &[String]| xs.iter().map(intern).collect::<PropSet>();
        let conds = |xs: &[(Vec<String>, String)]| {
            xs.iter()
                .map(|(d, e)| Conditional { deps: set(d), effect: intern(e), marked: false })
                .collect::<Vec<_>>()
        };
        let library = self
            .ops
            .iter()
            .map(|op| OperatorSchema {
                name: op.name.clone(),
                effects: Arc::new(Effects {
                    pre: set(&op.pre),
                    adds: set(&op.adds),
                    dels: set(&op.dels),
                    cadds: conds(&op.cadds),
                    cdels: conds(&op.cdels),
                }),
            })
            .collect();
        Problem {
            init: set(&self.init),
            goals: set(&self.goals),
            library,
            symbols,
            name: self.name,
        }
    }
}

impl Problem {
    /// Back to name-level drafts; `ProblemBuilder` over these rebuilds an
    /// identical problem.
    pub fn to_builder(&self) -> ProblemBuilder {
        let names = |s: &PropSet| s.iter().map(|p| self.prop_name(p).to_string()).collect::<Vec<_>>();
        let conds = |cs: &[Conditional]| {
            cs.iter()
                .map(|c| (names(&c.deps), self.prop_name(c.effect).to_string()))
                .collect::<Vec<_>>()
        };
        ProblemBuilder {
            name: self.name.clone(),
            init: names(&self.init),
            goals: names(&self.goals),
            ops: self
                .library
                .iter()
                .map(|o| OperatorDraft {
                    name: o.name.clone(),
                    pre: names(&o.effects.pre),
                    adds: names(&o.effects.adds),
                    dels: names(&o.effects.dels),
                    cadds: conds(&o.effects.cadds),
                    cdels: conds(&o.effects.cdels),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbols_sorted_and_props_ordered_by_name() {
        let p = ProblemBuilder::new("t")
            .init(["zeta", "alpha"])
            .goals(["mid"])
            .operator(OperatorDraft::new("o").pre(["alpha"]).adds(["mid"]))
            .build()
            .unwrap();
        assert_eq!(p.symbols(), ["alpha", "mid", "zeta"]);
        assert!(p.prop("alpha").unwrap() < p.prop("mid").unwrap());
        assert_eq!(p.prop("nope"), None);
    }

    #[test]
    fn delete_must_be_precondition() {
        let err = ProblemBuilder::new("t")
            .operator(OperatorDraft::new("o").pre(["a"]).dels(["b"]))
            .build()
            .unwrap_err();
        assert!(matches!(err, Error::DeleteNotPrecondition { ref prop, .. } if prop == "b"));
    }

    #[test]
    fn conditional_delete_must_be_dependency() {
        let err = ProblemBuilder::new("t")
            .operator(OperatorDraft::new("o").cdel(["d"], "e"))
            .build()
            .unwrap_err();
        assert!(matches!(err, Error::ConditionalDeleteOutsideDeps { ref prop, .. } if prop == "e"));
        assert!(ProblemBuilder::new("t")
            .operator(OperatorDraft::new("o").cdel(["d", "e"], "e"))
            .build()
            .is_ok());
    }

    #[test]
    fn lint_flags_unmentioned_goals() {
        let p = ProblemBuilder::new("t")
            .goals(["ghost"])
            .operator(OperatorDraft::new("o").adds(["x"]))
            .build()
            .unwrap();
        assert_eq!(p.lint().len(), 1);
    }

    #[test]
    fn builder_round_trip() {
        let p = ProblemBuilder::new("t")
            .init(["a"])
            .goals(["c"])
            .operator(OperatorDraft::new("o").pre(["a"]).adds(["b"]).dels(["a"]).cadd(["b"], "c"))
            .build()
            .unwrap();
        assert_eq!(p.to_builder().build().unwrap(), p);
    }
}
