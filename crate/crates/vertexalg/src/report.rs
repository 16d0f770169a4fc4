//! Check reports: every verifier returns one of these, and a failing check
//! always carries an exact counterexample.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    /// Inputs rendered as state literals / parameter strings.
    pub inputs: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    pub samples_run: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(name: &str) -> Self {
        CheckReport {
            name: name.to_string(),
            status: Status::Pass,
            counterexample: None,
            samples_run: 0,
            seed: None,
            notes: Vec::new(),
        }
    }

    pub fn with_seed(name: &str, seed: u64) -> Self {
        let mut r = Self::new(name);
        r.seed = Some(seed);
        r
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    /// Record one comparison; the first mismatch freezes the counterexample.
    pub fn check_eq<L: std::fmt::Display, R: std::fmt::Display>(
        &mut self,
        inputs: &[String],
        lhs: &L,
        rhs: &R,
        equal: bool,
    ) {
        self.samples_run += 1;
        if !equal && self.status == Status::Pass {
            self.status = Status::Fail;
            self.counterexample = Some(Counterexample {
                inputs: inputs.to_vec(),
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            });
        }
    }

    pub fn fail(&mut self, inputs: &[String], lhs: String, rhs: String) {
        self.samples_run += 1;
        if self.status == Status::Pass {
            self.status = Status::Fail;
            self.counterexample = Some(Counterexample { inputs: inputs.to_vec(), lhs, rhs });
        }
    }

    pub fn bump(&mut self) {
        self.samples_run += 1;
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.samples_run += other.samples_run;
        if other.status == Status::Fail && self.status == Status::Pass {
            self.status = Status::Fail;
            self.counterexample = other.counterexample;
        }
        self.notes.extend(other.notes);
    }
}
