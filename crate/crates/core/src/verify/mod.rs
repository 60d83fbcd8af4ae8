//! Verification suites: every difference equation, determinant identity and cross-check as a
//! list of cases, run in parallel and collected into a deterministic report.

mod suites;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::Window;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    QSystem,
    DesnanotJacobi,
    ZeroCurvature2,
    Birkhoff2,
    Gl3Four,
    Gl3Components,
    ZeroCurvature3,
    Birkhoff3,
    FockCross,
    Correlations,
    DetIdentities,
    OperatorIdentities,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::QSystem,
        Suite::DesnanotJacobi,
        Suite::ZeroCurvature2,
        Suite::Birkhoff2,
        Suite::Gl3Four,
        Suite::Gl3Components,
        Suite::ZeroCurvature3,
        Suite::Birkhoff3,
        Suite::FockCross,
        Suite::Correlations,
        Suite::DetIdentities,
        Suite::OperatorIdentities,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::QSystem => "q-system",
            Suite::DesnanotJacobi => "desnanot-jacobi",
            Suite::ZeroCurvature2 => "zero-curvature-2",
            Suite::Birkhoff2 => "birkhoff-2",
            Suite::Gl3Four => "gl3-four",
            Suite::Gl3Components => "gl3-components",
            Suite::ZeroCurvature3 => "zero-curvature-3",
            Suite::Birkhoff3 => "birkhoff-3",
            Suite::FockCross => "fock-cross",
            Suite::Correlations => "correlations",
            Suite::DetIdentities => "det-identities",
            Suite::OperatorIdentities => "operator-identities",
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

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite {s}")))
    }
}

/// Suite selector: one suite or the full battery.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selection {
    One(Suite),
    All,
}

impl FromStr for Selection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Selection> {
        if s == "all" {
            Ok(Selection::All)
        } else {
            s.parse().map(Selection::One)
        }
    }
}

impl Selection {
    pub fn suites(self) -> Vec<Suite> {
        match self {
            Selection::One(s) => vec![s],
            Selection::All => Suite::ALL.to_vec(),
        }
    }

    pub fn name(self) -> String {
        match self {
            Selection::One(s) => s.name().to_string(),
            Selection::All => "all".to_string(),
        }
    }
}

/// Overrides for suite defaults; `None` keeps each suite's own default.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    #[serde(serialize_with = "ser_window")]
    pub window: Option<Window>,
    pub kmax: Option<i64>,
    pub lmax: Option<i64>,
    pub alpha: Option<(i64, i64)>,
    pub beta: Option<(i64, i64)>,
    pub truncation: Option<i64>,
    pub order: Option<i32>,
    pub max_size: Option<usize>,
    pub trials: Option<usize>,
    pub seed: u64,
    #[serde(skip)]
    pub timings: bool,
}

fn ser_window<S: serde::Serializer>(w: &Option<Window>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match w {
        Some(w) => [w.lo, w.hi].serialize(s),
        None => s.serialize_none(),
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if let Some(w) = self.window {
            if w.hi - w.lo > 16 {
                return bad("window wider than 17 indices");
            }
        }
        for (name, v, cap) in [("kmax", self.kmax, 5), ("lmax", self.lmax, 4)] {
            if let Some(v) = v {
                if !(0..=cap).contains(&v) {
                    return Err(Error::Config(format!("{name} must lie in 0..={cap}")));
                }
            }
        }
        for (name, r) in [("alpha", self.alpha), ("beta", self.beta)] {
            if let Some((lo, hi)) = r {
                if lo > hi || lo < -4 || hi > 4 {
                    return Err(Error::Config(format!("{name} range must be nonempty within -4..4")));
                }
            }
        }
        if self.truncation.is_some_and(|n| !(1..=10).contains(&n)) {
            return bad("truncation must lie in 1..=10");
        }
        if self.order.is_some_and(|m| !(1..=8).contains(&m)) {
            return bad("expansion order must lie in 1..=8");
        }
        if self.max_size.is_some_and(|m| m > 6) {
            return bad("determinant size must be at most 6");
        }
        if self.trials == Some(0) {
            return bad("trials must be positive");
        }
        Ok(())
    }

    fn window_or(&self, lo: i64, hi: i64) -> Window {
        self.window.unwrap_or(Window::new(lo, hi))
    }

    fn alphas_or(&self, lo: i64, hi: i64) -> Vec<i64> {
        let (a, b) = self.alpha.unwrap_or((lo, hi));
        (a..=b).collect()
    }

    fn betas_or(&self, lo: i64, hi: i64) -> Vec<i64> {
        let (a, b) = self.beta.unwrap_or((lo, hi));
        (a..=b).collect()
    }
}

/// What a single case found: the number of nonzero residual terms and a description of the
/// first nonzero one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub residual_terms: usize,
    pub witness: Option<String>,
}

impl Outcome {
    pub fn ok() -> Outcome {
        Outcome { residual_terms: 0, witness: None }
    }

    pub fn from_terms(terms: usize, witness: impl FnOnce() -> String) -> Outcome {
        Outcome { residual_terms: terms, witness: (terms > 0).then(witness) }
    }

    pub fn from_flag(ok: bool, witness: impl FnOnce() -> String) -> Outcome {
        Outcome::from_terms(usize::from(!ok), witness)
    }
}

type CaseFn<'a> = Box<dyn Fn() -> Result<Outcome> + Send + Sync + 'a>;

/// A named instance with integer parameters.
pub struct Case<'a> {
    pub name: String,
    pub params: BTreeMap<&'static str, i64>,
    pub truncation: Option<i64>,
    run: CaseFn<'a>,
}

impl<'a> Case<'a> {
    pub fn new<F>(name: impl Into<String>, params: &[(&'static str, i64)], run: F) -> Case<'a>
    where
        F: Fn() -> Result<Outcome> + Send + Sync + 'a,
    {
        Case { name: name.into(), params: params.iter().copied().collect(), truncation: None, run: Box::new(run) }
    }

    pub fn truncated(mut self, n: i64) -> Case<'a> {
        self.truncation = Some(n);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseRecord {
    pub suite: String,
    pub name: String,
    pub params: BTreeMap<&'static str, i64>,
    pub residual_terms: usize,
    pub witness: Option<String>,
    pub passed: bool,
    pub truncation: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub suite: String,
    pub config: RunConfig,
    pub total: usize,
    pub failed: usize,
    pub passed: bool,
    pub cases: Vec<CaseRecord>,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseRecord> {
        self.cases.iter().filter(|c| !c.passed)
    }
}

fn run_cases(suite: Suite, cases: Vec<Case<'_>>, timings: bool) -> Vec<CaseRecord> {
    cases
        .into_par_iter()
        .map(|case| {
            let start = Instant::now();
            let outcome = (case.run)().unwrap_or_else(|e| Outcome { residual_terms: 1, witness: Some(format!("error: {e}")) });
            CaseRecord {
                suite: suite.name().to_string(),
                name: case.name,
                params: case.params,
                passed: outcome.residual_terms == 0,
                residual_terms: outcome.residual_terms,
                witness: outcome.witness,
                truncation: case.truncation,
                wall_ms: timings.then(|| start.elapsed().as_millis() as u64),
            }
        })
        .collect()
}

/// Runs the selected suites; configuration errors are returned, identity failures are recorded.
/// Cases run on the global rayon pool (sized by `TAUSYS_THREADS` through [`init_threads`]).
pub fn run(selection: Selection, config: &RunConfig) -> Result<VerificationReport> {
    config.validate()?;
    let mut cases = Vec::new();
    for suite in selection.suites() {
        cases.extend(suites::run_suite(suite, config)?);
    }
    let failed = cases.iter().filter(|c| !c.passed).count();
    Ok(VerificationReport {
        schema: SCHEMA_VERSION,
        suite: selection.name(),
        config: config.clone(),
        total: cases.len(),
        failed,
        passed: failed == 0,
        cases,
    })
}

/// Sizes the global rayon pool from `TAUSYS_THREADS` when set; later calls are no-ops.
pub fn init_threads() -> Result<()> {
    match std::env::var("TAUSYS_THREADS") {
        Ok(v) => {
            let n: usize = v.trim().parse().map_err(|_| Error::Config(format!("TAUSYS_THREADS={v} is not a count")))?;
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            Ok(())
        }
        Err(_) => Ok(()),
    }
}
