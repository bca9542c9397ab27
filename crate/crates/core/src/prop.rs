//! Interned propositions and small sorted proposition sets.

use alloc::vec::Vec;
use core::fmt;

/// A non-negated ground atom, interned in a [`Problem`](crate::Problem)'s
/// symbol table.
///
/// Symbol tables are sorted, so ordering two `Prop`s orders their names
/// lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prop(pub(crate) u32);

impl Prop {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn from_index(i: usize) -> Self {
        Prop(i as u32)
    }
}

/// Sorted, deduplicated set of propositions. Operator fields are tiny, so a
/// sorted vector beats a tree or hash set here.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PropSet(Vec<Prop>);

impl PropSet {
    pub fn new() -> Self {
        PropSet(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, p: Prop) -> bool {
        self.0.binary_search(&p).is_ok()
    }

    pub fn insert(&mut self, p: Prop) -> bool {
        match self.0.binary_search(&p) {
            Ok(_) => false,
            Err(pos) => {
                self.0.insert(pos, p);
                true
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Prop> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[Prop] {
        &self.0
    }

    pub fn is_subset(&self, other: &PropSet) -> bool {
        let mut it = other.0.iter();
        'outer: for p in &self.0 {
            for q in it.by_ref() {
                if q == p {
                    continue 'outer;
                }
                if q > p {
                    return false;
                }
            }
            return false;
        }
        true
    }

    pub fn intersects(&self, other: &PropSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                core::cmp::Ordering::Less => i += 1,
                core::cmp::Ordering::Greater => j += 1,
                core::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    pub fn union(&self, other: &PropSet) -> PropSet {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                core::cmp::Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                core::cmp::Ordering::Greater => {
                    out.push(other.0[j]);
                    j += 1;
                }
                core::cmp::Ordering::Equal => {
                    out.push(self.0[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        PropSet(out)
    }

    pub fn difference(&self, other: &PropSet) -> PropSet {
        PropSet(self.0.iter().copied().filter(|p| !other.contains(*p)).collect())
    }
}

impl FromIterator<Prop> for PropSet {
    fn from_iter<I: IntoIterator<Item = Prop>>(iter: I) -> Self {
        let mut v: Vec<Prop> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        PropSet(v)
    }
}

impl<'a> IntoIterator for &'a PropSet {
    type Item = &'a Prop;
    type IntoIter = core::slice::Iter<'a, Prop>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Dense world state over a problem's propositions.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct State(Vec<u64>);

impl State {
    pub fn empty(n_props: usize) -> Self {
        State(alloc::vec![0; n_props.div_ceil(64).max(1)])
    }

    pub fn contains(&self, p: Prop) -> bool {
        self.0[p.index() / 64] >> (p.index() % 64) & 1 == 1
    }

    pub fn set(&mut self, p: Prop) {
        self.0[p.index() / 64] |= 1 << (p.index() % 64);
    }

    pub fn clear(&mut self, p: Prop) {
        self.0[p.index() / 64] &= !(1 << (p.index() % 64));
    }

    pub fn contains_all(&self, set: &PropSet) -> bool {
        set.iter().all(|p| self.contains(p))
    }
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}
