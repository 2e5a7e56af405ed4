use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::funcrep::{Func, PowLogFn, StepFn};

pub const DEFAULT_SEED: u64 = 0x5eed_0001;

#[derive(Debug, Clone, PartialEq)]
pub struct Member {
    pub label: String,
    pub f: Func,
}

/// Functions an operator-norm estimate is taken over.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFamily {
    members: Vec<Member>,
}

impl TestFamily {
    pub fn new(members: Vec<Member>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::Parameter("empty test family".into()));
        }
        Ok(TestFamily { members })
    }

    /// `χ_(0,10^-k)` for `k = 1..9`, the atoms `t^a (log 2/t)^b` with
    /// `a ∈ {−0.9, −0.6, −0.3, 0}`, `b ∈ {−2, …, 2}`, and `random` seeded
    /// non-increasing step functions.
    pub fn standard(random: usize, seed: u64) -> Self {
        let mut members = Vec::new();
        for k in 1..=9 {
            let a = 10f64.powi(-k);
            members.push(Member {
                label: format!("chi(0,1e-{k})"),
                f: Func::Step(StepFn::indicator(a, 1.0)),
            });
        }
        for a in [-0.9, -0.6, -0.3, 0.0] {
            for b in -2..=2 {
                let b = b as f64;
                members.push(Member {
                    label: format!("t^{a}*log^{b}"),
                    f: Func::PowLog(PowLogFn::atom(1.0, a, b)),
                });
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in 0..random {
            members.push(Member {
                label: format!("random#{i}"),
                f: Func::Step(random_nonincreasing(&mut rng, 12)),
            });
        }
        TestFamily { members }
    }

    /// Standard family of 100 random members plus the witness
    /// `t^{-γ} (log 2/t)^β`.
    pub fn with_witness(gamma: f64, beta: f64) -> Self {
        let mut fam = Self::standard(100, DEFAULT_SEED);
        fam.push(witness_member(gamma, beta));
        fam
    }

    pub fn push(&mut self, m: Member) {
        self.members.push(m);
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

pub fn witness_member(gamma: f64, beta: f64) -> Member {
    Member {
        label: format!("witness t^-{gamma}*log^{beta}"),
        f: Func::PowLog(PowLogFn::atom(1.0, -gamma, beta)),
    }
}

/// A positive non-increasing step function with at most `max_cells` cells,
/// breakpoints log-uniform in `[1e-9, 1)`.
pub fn random_nonincreasing<R: Rng>(rng: &mut R, max_cells: usize) -> StepFn {
    let k = rng.random_range(1..=max_cells);
    let mut ends: Vec<f64> = (0..k - 1).map(|_| 10f64.powf(rng.random_range(-9.0..0.0))).collect();
    ends.sort_by(f64::total_cmp);
    ends.dedup();
    ends.push(1.0);
    let mut v = rng.random_range(0.0..3.0f64).exp();
    let values = ends
        .iter()
        .map(|_| {
            let cur = v;
            v *= rng.random_range(0.1..1.0);
            cur
        })
        .collect();
    StepFn::new(ends, values).expect("sorted breakpoints")
}
