//! The fixed 44-problem blocksworld suite: four length classes of eleven.
//!
//! Every problem has four blocks. Seeds were found by [`scan`]: walk seeds
//! upward from 0, keep the first eleven whose minimal solution length is
//! each class. The list is frozen here so regeneration never depends on
//! the scan itself.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::BlocksworldSpec;
use crate::error::Result;
use crate::oracle::minimal_length;
use crate::Problem;

pub const SUITE_BLOCKS: usize = 4;
pub const LENGTH_CLASSES: [usize; 4] = [3, 4, 5, 6];
pub const PROBLEMS_PER_CLASS: usize = 11;

/// Seeds per length class, in the order of [`LENGTH_CLASSES`].
pub const SUITE_SEEDS: [[u64; PROBLEMS_PER_CLASS]; 4] = [
    [2, 5, 7, 11, 14, 20, 22, 25, 29, 33, 35],
    [10, 12, 13, 15, 19, 21, 23, 24, 26, 28, 38],
    [6, 30, 47, 54, 55, 78, 88, 92, 95, 101, 118],
    [32, 183, 230, 239, 345, 380, 468, 540, 570, 584, 730],
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteEntry {
    /// `len<class>_bw<blocks>_<seed>`, unique within the suite.
    pub id: String,
    pub length_class: usize,
    pub spec: BlocksworldSpec,
}

impl SuiteEntry {
    /// The problem, named by `id`.
    pub fn problem(&self) -> Result<Problem> {
        self.spec.problem_named(&self.id)
    }
}

pub fn entry(length_class: usize, seed: u64) -> Result<SuiteEntry> {
    Ok(SuiteEntry {
        id: format!("len{length_class}_bw{SUITE_BLOCKS}_{seed}"),
        length_class,
        spec: BlocksworldSpec::random(SUITE_BLOCKS, seed)?,
    })
}

/// All 44 entries, class by class.
pub fn suite() -> Vec<SuiteEntry> {
    LENGTH_CLASSES
        .iter()
        .zip(SUITE_SEEDS.iter())
        .flat_map(|(&c, seeds)| seeds.iter().map(move |&s| entry(c, s).expect("suite block count is in range")))
        .collect()
}

/// The first `per_class` seeds (from 0, below `max_seed`) for each class.
/// A class that cannot be filled comes back short.
pub fn scan(n_blocks: usize, classes: &[usize], per_class: usize, max_seed: u64) -> Result<Vec<Vec<u64>>> {
    let mut found: Vec<Vec<u64>> = classes.iter().map(|_| Vec::new()).collect();
    for seed in 0..max_seed {
        if found.iter().all(|f| f.len() >= per_class) {
            break;
        }
        let problem = BlocksworldSpec::random(n_blocks, seed)?.problem()?;
        if let Some(len) = minimal_length(&problem)? {
            if let Some(i) = classes.iter().position(|&c| c == len) {
                if found[i].len() < per_class {
                    found[i].push(seed);
                }
            }
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frozen_seeds_match_a_fresh_scan() {
        let found = scan(SUITE_BLOCKS, &LENGTH_CLASSES, PROBLEMS_PER_CLASS, 1000).unwrap();
        for (f, frozen) in found.iter().zip(SUITE_SEEDS.iter()) {
            assert_eq!(f.as_slice(), frozen.as_slice());
        }
    }

    #[test]
    fn suite_shape() {
        let s = suite();
        assert_eq!(s.len(), 44);
        let mut ids: Vec<&str> = s.iter().map(|e| e.id.as_str()).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), 44);
        assert_eq!(s[0].id, "len3_bw4_2");
        assert_eq!(s[0].problem().unwrap().name(), "len3_bw4_2");
    }

    #[test]
    fn entries_are_deterministic() {
        assert_eq!(entry(5, 47).unwrap(), entry(5, 47).unwrap());
    }
}
