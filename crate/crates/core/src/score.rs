//! Verdicts and mutation scores.

use core::fmt;
use core::str::FromStr;

/// Outcome of verifying one mutant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Status {
    Killed,
    Alive,
    Invalid,
    TimedOut,
}

impl Status {
    pub const ALL: [Status; 4] = [Status::Killed, Status::Alive, Status::Invalid, Status::TimedOut];

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Killed => "killed",
            Status::Alive => "alive",
            Status::Invalid => "invalid",
            Status::TimedOut => "timedout",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Status {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s.trim().to_ascii_lowercase().as_str() {
            "killed" => Ok(Status::Killed),
            "alive" | "survived" => Ok(Status::Alive),
            "invalid" => Ok(Status::Invalid),
            "timedout" | "timed_out" | "timeout" => Ok(Status::TimedOut),
            _ => Err(()),
        }
    }
}

/// Verdict tallies. `survived` counts alive mutants.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MutationScore {
    pub killed: usize,
    pub survived: usize,
    pub invalid: usize,
    pub timed_out: usize,
}

impl MutationScore {
    pub fn from_statuses<I: IntoIterator<Item = Status>>(it: I) -> Self {
        let mut s = MutationScore::default();
        for st in it {
            s.add(st);
        }
        s
    }

    pub fn add(&mut self, st: Status) {
        match st {
            Status::Killed => self.killed += 1,
            Status::Alive => self.survived += 1,
            Status::Invalid => self.invalid += 1,
            Status::TimedOut => self.timed_out += 1,
        }
    }

    pub fn merge(&mut self, other: &MutationScore) {
        self.killed += other.killed;
        self.survived += other.survived;
        self.invalid += other.invalid;
        self.timed_out += other.timed_out;
    }

    pub fn total(&self) -> usize {
        self.killed + self.survived + self.invalid + self.timed_out
    }

    /// K / (K + S), or `None` when nothing was killed or survived.
    pub fn score(&self) -> Option<f64> {
        let d = self.killed + self.survived;
        (d > 0).then(|| self.killed as f64 / d as f64)
    }

    /// K / M over every mutant, invalid and timed-out included.
    pub fn killed_ratio(&self) -> Option<f64> {
        let m = self.total();
        (m > 0).then(|| self.killed as f64 / m as f64)
    }
}
