//! Seeded random instances and one executable suite per theorem.
//!
//! Every trial draws from its own generator seeded by
//! [`trial_seed`]`(seed, trial)`, so a failure is reproduced from the
//! derived seed alone and suites can run in any order.

pub mod gen;
mod suites;

use std::fmt;
use std::str::FromStr;

use drazin_core::{Error, OperatorDesc, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use suites::{run_suite, AXIOM_RESIDUAL, Failure, Status, TrialError, VerificationReport};

/// Relative weights of the diagonal component kinds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyMix {
    pub points: f64,
    pub geometric: f64,
    pub harmonic: f64,
    pub segment: f64,
}

impl FamilyMix {
    pub fn weights(&self) -> [f64; 4] {
        [self.points, self.geometric, self.harmonic, self.segment]
    }
}

impl Default for FamilyMix {
    fn default() -> Self {
        FamilyMix {
            points: 3.0,
            geometric: 2.0,
            harmonic: 2.0,
            segment: 1.0,
        }
    }
}

/// Relative weights of matrix, diagonal and shift blocks.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockMix {
    pub matrix: f64,
    pub diagonal: f64,
    pub shift: f64,
}

impl BlockMix {
    pub fn weights(&self) -> [f64; 3] {
        [self.matrix, self.diagonal, self.shift]
    }
}

impl Default for BlockMix {
    fn default() -> Self {
        BlockMix {
            matrix: 2.0,
            diagonal: 2.0,
            shift: 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorProfile {
    pub seed: u64,
    pub max_matrix_dim: usize,
    pub max_blocks: usize,
    pub family_mix: FamilyMix,
    pub block_mix: BlockMix,
    pub value_pool: i64,
}

impl Default for GeneratorProfile {
    fn default() -> Self {
        GeneratorProfile {
            seed: 0,
            max_matrix_dim: 5,
            max_blocks: 4,
            family_mix: FamilyMix::default(),
            block_mix: BlockMix::default(),
            value_pool: 10,
        }
    }
}

fn check_weights(name: &str, w: &[f64]) -> Result<()> {
    if w.iter().any(|x| !x.is_finite() || *x < 0.0) || w.iter().all(|x| *x == 0.0) {
        return Err(Error::InvalidValue(format!("{name} weights must be nonnegative and not all zero, got {w:?}")));
    }
    Ok(())
}

impl GeneratorProfile {
    pub fn with_seed(seed: u64) -> Self {
        GeneratorProfile {
            seed,
            ..Self::default()
        }
    }

    /// Finite diagonal operators only.
    pub fn points_only(seed: u64) -> Self {
        GeneratorProfile {
            seed,
            family_mix: FamilyMix {
                points: 1.0,
                geometric: 0.0,
                harmonic: 0.0,
                segment: 0.0,
            },
            block_mix: BlockMix {
                matrix: 0.0,
                diagonal: 1.0,
                shift: 0.0,
            },
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_weights("family_mix", &self.family_mix.weights())?;
        check_weights("block_mix", &self.block_mix.weights())?;
        if self.max_matrix_dim == 0 || self.max_blocks == 0 {
            return Err(Error::InvalidValue("max_matrix_dim and max_blocks must be at least 1".into()));
        }
        if self.value_pool < 1 {
            return Err(Error::InvalidValue("value_pool must be at least 1".into()));
        }
        Ok(())
    }

    /// The generator for one trial.
    pub fn rng(&self, trial: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(trial_seed(self.seed, trial))
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// The per-trial seed, a pure function of `(seed, trial)`.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    splitmix64(splitmix64(seed) ^ trial.wrapping_mul(0xd1b5_4a32_d192_ed03))
}

/// A random operator, deterministic in `(profile.seed, trial)`.
pub fn gen_operator(profile: &GeneratorProfile, trial: u64) -> Result<OperatorDesc> {
    profile.validate()?;
    Ok(gen::operator(&mut profile.rng(trial), profile, false))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Suite {
    #[serde(rename = "FIXTURES")]
    Fixtures,
    #[serde(rename = "AXIOMS")]
    Axioms,
    #[serde(rename = "ORACLE")]
    Oracle,
    T1,
    T2,
    T3,
    T5,
    T6,
    #[serde(rename = "MERO")]
    Mero,
    #[serde(rename = "SMT")]
    Smt,
    #[serde(rename = "PROFILE")]
    Profile,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Fixtures,
        Suite::Axioms,
        Suite::Oracle,
        Suite::T1,
        Suite::T2,
        Suite::T3,
        Suite::T5,
        Suite::T6,
        Suite::Mero,
        Suite::Smt,
        Suite::Profile,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Fixtures => "FIXTURES",
            Suite::Axioms => "AXIOMS",
            Suite::Oracle => "ORACLE",
            Suite::T1 => "T1",
            Suite::T2 => "T2",
            Suite::T3 => "T3",
            Suite::T5 => "T5",
            Suite::T6 => "T6",
            Suite::Mero => "MERO",
            Suite::Smt => "SMT",
            Suite::Profile => "PROFILE",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidValue(format!("unknown suite {s:?}")))
    }
}
