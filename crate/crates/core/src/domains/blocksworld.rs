//! Ground blocksworld with three-place moves.
//!
//! Propositions are `on_X_Y`, `on_table_X` and `clear_X` for blocks named
//! `a`, `b`, ... Operators:
//!
//! * `move_X_from_Y_to_Z`: pre `on_X_Y clear_X clear_Z`, add `on_X_Z clear_Y`,
//!   del `on_X_Y clear_Z`
//! * `move_X_from_table_to_Z`: pre `on_table_X clear_X clear_Z`, add `on_X_Z`,
//!   del `on_table_X clear_Z`
//! * `move_X_from_Y_to_table`: pre `on_X_Y clear_X`, add `on_table_X clear_Y`,
//!   del `on_X_Y`

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::problem::{OperatorDraft, Problem, ProblemBuilder};

pub const MIN_BLOCKS: usize = 2;
pub const MAX_BLOCKS: usize = 6;

pub fn block_name(i: usize) -> String {
    String::from((b'a' + i as u8) as char)
}

/// A stacking forest: each stack lists blocks bottom to top.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Config {
    pub stacks: Vec<Vec<usize>>,
}

impl Config {
    /// Checks that the stacks mention blocks `0..n` exactly once each.
    pub fn validate(&self, n: usize) -> Result<()> {
        let mut seen = alloc::vec![false; n];
        for &b in self.stacks.iter().flatten() {
            if b >= n {
                return Err(Error::InvalidBlocks(format!("block {b} out of range for {n} blocks")));
            }
            if core::mem::replace(&mut seen[b], true) {
                return Err(Error::InvalidBlocks(format!("block `{}` appears twice", block_name(b))));
            }
        }
        if let Some(b) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidBlocks(format!("block `{}` is missing", block_name(b))));
        }
        if self.stacks.iter().any(Vec::is_empty) {
            return Err(Error::InvalidBlocks("empty stack".into()));
        }
        Ok(())
    }

    /// `(X, Y)` for every block `X` directly on block `Y`.
    pub fn on_pairs(&self) -> Vec<(usize, usize)> {
        self.stacks
            .iter()
            .flat_map(|s| s.windows(2).map(|w| (w[1], w[0])))
            .collect()
    }

    fn facts(&self) -> Vec<String> {
        let mut out = Vec::new();
        for s in &self.stacks {
            out.push(format!("on_table_{}", block_name(s[0])));
            out.push(format!("clear_{}", block_name(*s.last().unwrap())));
        }
        for (x, y) in self.on_pairs() {
            out.push(format!("on_{}_{}", block_name(x), block_name(y)));
        }
        out
    }

    /// Random forest: blocks shuffled, each one starting a new stack or
    /// going on the previous block with equal probability.
    pub fn random<R: Rng>(n: usize, rng: &mut R) -> Config {
        let mut blocks: Vec<usize> = (0..n).collect();
        blocks.shuffle(rng);
        let mut stacks: Vec<Vec<usize>> = Vec::new();
        for b in blocks {
            match stacks.last_mut() {
                Some(s) if rng.gen_bool(0.5) => s.push(b),
                _ => stacks.push(alloc::vec![b]),
            }
        }
        Config { stacks }
    }
}

/// Initial configuration plus goal `on` constraints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlocksworldSpec {
    pub n_blocks: usize,
    pub initial: Config,
    pub goal: Vec<(usize, usize)>,
    pub seed: u64,
}

impl BlocksworldSpec {
    /// Random initial and goal configurations. Resamples until the goal
    /// has at least one `on` fact not already true initially.
    pub fn random(n_blocks: usize, seed: u64) -> Result<Self> {
        check_size(n_blocks)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let initial = Config::random(n_blocks, &mut rng);
            let goal = Config::random(n_blocks, &mut rng).on_pairs();
            let init_pairs = initial.on_pairs();
            if goal.iter().any(|g| !init_pairs.contains(g)) {
                return Ok(BlocksworldSpec { n_blocks, initial, goal, seed });
            }
        }
    }

    pub fn problem(&self) -> Result<Problem> {
        self.problem_named(&format!("bw{}_{}", self.n_blocks, self.seed))
    }

    pub fn problem_named(&self, name: &str) -> Result<Problem> {
        check_size(self.n_blocks)?;
        self.initial.validate(self.n_blocks)?;
        for &(x, y) in &self.goal {
            if x == y || x >= self.n_blocks || y >= self.n_blocks {
                return Err(Error::InvalidBlocks(format!("bad goal pair ({x}, {y})")));
            }
        }
        let mut b = ProblemBuilder::new(name)
            .init(self.initial.facts())
            .goals(self.goal.iter().map(|&(x, y)| format!("on_{}_{}", block_name(x), block_name(y))));
        for op in operators(self.n_blocks) {
            b.push_operator(op);
        }
        b.build()
    }
}

fn check_size(n: usize) -> Result<()> {
    if (MIN_BLOCKS..=MAX_BLOCKS).contains(&n) {
        Ok(())
    } else {
        Err(Error::InvalidBlocks(format!("{n} blocks; supported range is {MIN_BLOCKS}..={MAX_BLOCKS}")))
    }
}

/// All ground move operators for `n` blocks.
pub fn operators(n: usize) -> Vec<OperatorDraft> {
    let nm = block_name;
    let mut out = Vec::new();
    for x in 0..n {
        for y in (0..n).filter(|&y| y != x) {
            for z in (0..n).filter(|&z| z != x && z != y) {
                out.push(
                    OperatorDraft::new(format!("move_{}_from_{}_to_{}", nm(x), nm(y), nm(z)))
                        .pre([format!("on_{}_{}", nm(x), nm(y)), format!("clear_{}", nm(x)), format!("clear_{}", nm(z))])
                        .adds([format!("on_{}_{}", nm(x), nm(z)), format!("clear_{}", nm(y))])
                        .dels([format!("on_{}_{}", nm(x), nm(y)), format!("clear_{}", nm(z))]),
                );
            }
        }
        for z in (0..n).filter(|&z| z != x) {
            out.push(
                OperatorDraft::new(format!("move_{}_from_table_to_{}", nm(x), nm(z)))
                    .pre([format!("on_table_{}", nm(x)), format!("clear_{}", nm(x)), format!("clear_{}", nm(z))])
                    .adds([format!("on_{}_{}", nm(x), nm(z))])
                    .dels([format!("on_table_{}", nm(x)), format!("clear_{}", nm(z))]),
            );
        }
        for y in (0..n).filter(|&y| y != x) {
            out.push(
                OperatorDraft::new(format!("move_{}_from_{}_to_table", nm(x), nm(y)))
                    .pre([format!("on_{}_{}", nm(x), nm(y)), format!("clear_{}", nm(x))])
                    .adds([format!("on_table_{}", nm(x)), format!("clear_{}", nm(y))])
                    .dels([format!("on_{}_{}", nm(x), nm(y))]),
            );
        }
    }
    out
}
