//! Verification suites. Each suite is deterministic given its seed and maps
//! to one acceptance criterion; the CLI `verify` verb and the acceptance test
//! both call these functions.

mod billiard;
mod directions;
mod languages;
mod sections;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::scalar::Scalar;

pub use billiard::prop1_equivalence;
pub use directions::{attractor_measure, direction_grid, thm4, weighted_tree};
pub use languages::{bk_attractor, bk_map, cassaigne, prop12};
pub use sections::thm9;

pub const DEFAULT_SEED: u64 = 20_111;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Prop1Equivalence,
    Cassaigne,
    Thm4,
    Thm9,
    BkAttractor,
    AttractorMeasure,
    Prop12,
    WeightedTree,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Prop1Equivalence,
        Suite::Cassaigne,
        Suite::Thm4,
        Suite::Thm9,
        Suite::BkAttractor,
        Suite::AttractorMeasure,
        Suite::Prop12,
        Suite::WeightedTree,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Prop1Equivalence => "prop1-equivalence",
            Suite::Cassaigne => "cassaigne",
            Suite::Thm4 => "thm4",
            Suite::Thm9 => "thm9",
            Suite::BkAttractor => "bk-attractor",
            Suite::AttractorMeasure => "attractor-measure",
            Suite::Prop12 => "prop12",
            Suite::WeightedTree => "weighted-tree",
        }
    }

    /// Acceptance criterion number.
    pub fn criterion(self) -> usize {
        Suite::ALL.iter().position(|s| *s == self).unwrap() + 1
    }

    pub fn run(self, opts: &SuiteOptions) -> SuiteReport {
        match self {
            Suite::Prop1Equivalence => prop1_equivalence(opts),
            Suite::Cassaigne => cassaigne(opts),
            Suite::Thm4 => thm4(opts),
            Suite::Thm9 => thm9(opts),
            Suite::BkAttractor => bk_attractor(opts),
            Suite::AttractorMeasure => attractor_measure(opts),
            Suite::Prop12 => prop12(opts),
            Suite::WeightedTree => weighted_tree(opts),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
                format!("unknown suite {s:?}; expected one of {}", names.join(", "))
            })
    }
}

/// Overrides shared by all suites; `None` keeps the suite's own default.
#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    pub n_max: Option<usize>,
    pub cap: Option<usize>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { seed: DEFAULT_SEED, n_max: None, cap: None }
    }
}

/// A failed check: where it happened and which claim it contradicts.
#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub module: &'static str,
    pub operation: &'static str,
    pub parameters: String,
    pub claim: &'static str,
    pub detail: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}::{} at {}: {} [claim: {}]",
            self.module, self.operation, self.parameters, self.detail, self.claim
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    /// One-line summary of what was checked.
    pub summary: String,
    pub failures: Vec<Failure>,
    /// Informational lines that do not affect the verdict.
    pub notes: Vec<String>,
    /// Report files (name, contents) written by the CLI.
    #[serde(skip)]
    pub files: Vec<(String, String)>,
}

impl SuiteReport {
    pub(crate) fn new(suite: Suite) -> Self {
        SuiteReport {
            suite,
            passed: true,
            summary: String::new(),
            failures: Vec::new(),
            notes: Vec::new(),
            files: Vec::new(),
        }
    }

    pub(crate) fn fail(&mut self, f: Failure) {
        self.passed = false;
        self.failures.push(f);
    }

    /// The single pass/fail line of the suite.
    pub fn verdict_line(&self) -> String {
        format!(
            "[{}] criterion {} {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.suite.criterion(),
            self.suite,
            self.summary
        )
    }

    pub fn to_text(&self) -> String {
        let mut out = self.verdict_line();
        out.push('\n');
        for n in &self.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        for f in self.failures.iter().take(20) {
            out.push_str(&format!("  failure: {f}\n"));
        }
        if self.failures.len() > 20 {
            out.push_str(&format!("  ... {} more failures\n", self.failures.len() - 20));
        }
        out
    }
}

/// Uniform rational in the open interval (lo, hi) with denominator ≤ max_den.
pub(crate) fn random_between(rng: &mut ChaCha8Rng, lo: &Scalar, hi: &Scalar, max_den: i64) -> Scalar {
    loop {
        let den = rng.gen_range(2..=max_den);
        let num = rng.gen_range(1..den);
        let u = Scalar::ratio(num, den);
        let x = lo + &(&(hi - lo) * &u);
        if x > *lo && x < *hi {
            return x;
        }
    }
}

/// Uniform rational in [0,1) with denominator ≤ max_den.
pub(crate) fn random_unit(rng: &mut ChaCha8Rng, max_den: i64) -> Scalar {
    let den = rng.gen_range(1..=max_den);
    Scalar::ratio(rng.gen_range(0..den), den)
}
