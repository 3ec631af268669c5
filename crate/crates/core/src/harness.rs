//! Seeded randomized battery over every checker in the crate.
//!
//! A suite runs each requested check `trials` times. Trial `t` of check `c`
//! draws its inputs from `substream(seed, (c << 32) | t)`, so a report is a
//! pure function of the configuration no matter how trials are scheduled
//! across threads. For each check the trial with the smallest slack is kept
//! as a witness together with its serialized inputs; [`replay_witness`]
//! re-evaluates it.
//!
//! Output formats are described in `docs/report-schema.md`.

use std::collections::BTreeMap;
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::divergence::{
    audenaert_bound, check_reverse_alt, check_sandwich, equality_condition, q_alpha, reverse_alt_sides,
    AltExponents, DivergenceFamily,
};
use crate::entropy::{
    check_cor5, check_minlike_bounds, check_prop6, duality_check, h_down, qtilde_directional_derivative,
    stationarity_residual, DualityRelation,
};
use crate::error::{Error, Result};
use crate::matcore::io::MatrixJson;
use crate::matcore::{commutator_norm, DimensionProfile, HermitianOperator};
use crate::pretty_good::{
    check_fidelity_bounds, check_guessing_bounds, pgm_guess_probability, pgm_optimality, singlet_optimality,
};
use crate::report::InequalityReport;
use crate::sdpsolve::{solve_fidelity_primal, solve_guessing, solve_min_entropy, verify_fidelity_certificate};
use crate::states::{
    cq_state, random_block_state, random_commuting_pair, random_density_from, random_ensemble,
    random_flagged_mixture, random_hermitian, random_pure, random_state, random_unitary, substream, DensityOperator,
    Ensemble, EnsembleJson, PureState,
};

pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable capping the worker threads of a suite.
pub const THREADS_ENV: &str = "RENYI_TOOLKIT_THREADS";

/// Step of the central finite differences in the `derivative` check.
pub const FD_STEP: f64 = 1e-5;
pub const FD_REL_TOL: f64 = 1e-6;
pub const STATIONARITY_TOL: f64 = 1e-8;
/// Divergence gap on commuting pairs, and the gap generic pairs must exceed.
pub const COMMUTING_GAP_TOL: f64 = 1e-8;
pub const GENERIC_GAP_MIN: f64 = 1e-6;
/// Commutator norm below which a random pair is redrawn in `equality`.
pub const GENERIC_COMMUTATOR_MIN: f64 = 1e-3;
pub const REMARK_TOL: f64 = 1e-10;
pub const FPG_MATCH_TOL: f64 = 1e-10;
pub const CERTIFICATE_SDP_TOL: f64 = 1e-6;
pub const PGM_IDENTITY_TOL: f64 = 1e-10;
pub const MIN_ENTROPY_CQ_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// `αD̄ ≤ D̃ ≤ D̄`, normalized and unnormalized.
    Sandwich,
    /// Reverse ALT in both directions, plus the `b = ∞` specialization.
    ReverseAlt,
    /// `D̄ = D̃` on commuting pairs and not on generic ones.
    Equality,
    /// The three duality relations on pure tripartite states.
    Duality,
    /// `H̄ ≤ H̃ ≤ αH̄ + (1−α) log|A|`, both arrows.
    PetzMinimalChain,
    /// `H̃ ≤ αH̄` on classically coherent states.
    CoherentBound,
    /// Min-like `↓` bounds by `↑` entropies, general states.
    MinlikeBound,
    /// The same on cq states, without the dimension term.
    MinlikeBoundCq,
    /// Directional derivative of `Q̃` against finite differences.
    Derivative,
    /// Stationarity of the Petz optimizer for `Q̃` on commuting states.
    Stationarity,
    /// Dual feasibility of the explicit fidelity certificate.
    Certificate,
    /// `μ* = F_pg²` for the certificate.
    CertificateFpg,
    /// `μ*` equals the SDP optimum on commuting states.
    CertificateCommuting,
    /// Fidelity / pretty good fidelity / trace distance chains.
    FidelityBounds,
    /// PGM success probability equals `2^{−H̃↓₂}`.
    PgmIdentity,
    /// `p_pg ≤ p_guess ≤ √p_pg`.
    GuessingChain,
    /// Commutator criterion vs PGM optimality.
    PgmOptimality,
    /// Commutator criterion vs singlet-fraction optimality.
    SingletOptimality,
    /// Min-entropy program against the guessing program on cq states.
    MinEntropyCq,
}

impl Check {
    pub const ALL: [Check; 19] = [
        Check::Sandwich,
        Check::ReverseAlt,
        Check::Equality,
        Check::Duality,
        Check::PetzMinimalChain,
        Check::CoherentBound,
        Check::MinlikeBound,
        Check::MinlikeBoundCq,
        Check::Derivative,
        Check::Stationarity,
        Check::Certificate,
        Check::CertificateFpg,
        Check::CertificateCommuting,
        Check::FidelityBounds,
        Check::PgmIdentity,
        Check::GuessingChain,
        Check::PgmOptimality,
        Check::SingletOptimality,
        Check::MinEntropyCq,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Check::Sandwich => "sandwich",
            Check::ReverseAlt => "reverse_alt",
            Check::Equality => "equality",
            Check::Duality => "duality",
            Check::PetzMinimalChain => "petz_minimal_chain",
            Check::CoherentBound => "coherent_bound",
            Check::MinlikeBound => "minlike_bound",
            Check::MinlikeBoundCq => "minlike_bound_cq",
            Check::Derivative => "derivative",
            Check::Stationarity => "stationarity",
            Check::Certificate => "certificate",
            Check::CertificateFpg => "certificate_fpg",
            Check::CertificateCommuting => "certificate_commuting",
            Check::FidelityBounds => "fidelity_bounds",
            Check::PgmIdentity => "pgm_identity",
            Check::GuessingChain => "guessing_chain",
            Check::PgmOptimality => "pgm_optimality",
            Check::SingletOptimality => "singlet_optimality",
            Check::MinEntropyCq => "min_entropy_cq",
        }
    }

    pub fn parse(id: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.id() == id)
            .ok_or_else(|| Error::UnknownCheck(id.to_string()))
    }

    fn index(self) -> u64 {
        Self::ALL.iter().position(|&c| c == self).unwrap() as u64
    }

    /// Orders used when the configuration lists none.
    pub fn default_alphas(self) -> Vec<f64> {
        match self {
            Check::Sandwich => vec![0.1, 0.25, 0.5, 0.75, 0.9],
            Check::Equality => vec![0.5],
            Check::Duality => vec![0.0, 0.5, 0.75, 1.5, 2.0, 4.0, f64::INFINITY],
            Check::PetzMinimalChain | Check::CoherentBound => vec![0.25, 0.5, 0.75, 0.9, 1.0],
            Check::MinlikeBound | Check::MinlikeBoundCq => vec![1.0, 1.25, 1.5, 1.75, 2.0],
            Check::Derivative | Check::Stationarity => vec![0.25, 0.5, 0.75],
            _ => Vec::new(),
        }
    }

    /// Dimension profiles used when the configuration lists none.
    pub fn default_dims(self) -> Vec<Vec<usize>> {
        match self {
            Check::Sandwich | Check::ReverseAlt | Check::Equality | Check::Derivative | Check::FidelityBounds => {
                vec![vec![2], vec![3], vec![4]]
            }
            Check::Duality => vec![vec![2, 2, 2], vec![2, 3, 2]],
            Check::PgmIdentity | Check::GuessingChain | Check::PgmOptimality | Check::MinEntropyCq => {
                vec![vec![2, 2], vec![3, 2], vec![3, 3]]
            }
            _ => vec![vec![2, 2], vec![2, 3]],
        }
    }
}

/// Orders in JSON: numbers, with `"inf"` for `+∞`.
mod orders {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Order {
        Finite(f64),
        Named(String),
    }

    pub fn serialize<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|&a| if a == f64::INFINITY { Order::Named("inf".into()) } else { Order::Finite(a) })
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        Vec::<Order>::deserialize(d)?
            .into_iter()
            .map(|o| match o {
                Order::Finite(a) => Ok(a),
                Order::Named(s) if s == "inf" => Ok(f64::INFINITY),
                Order::Named(s) => Err(serde::de::Error::custom(format!("bad order `{s}`"))),
            })
            .collect()
    }
}

/// Parses an order, accepting `inf` / `∞`.
pub fn parse_order(s: &str) -> Result<f64> {
    match s.trim() {
        "inf" | "infinity" | "∞" => Ok(f64::INFINITY),
        t => t
            .parse::<f64>()
            .ok()
            .filter(|a| !a.is_nan())
            .ok_or_else(|| Error::InvalidArgument(format!("bad order `{s}`"))),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Dimension profiles as factor lists; trial `t` uses entry
    /// `t mod len`. Empty means each check's default.
    #[serde(default)]
    pub dims: Vec<Vec<usize>>,
    pub trials: usize,
    /// Empty means each check's default orders.
    #[serde(default, with = "orders")]
    pub alphas: Vec<f64>,
    pub checks: Vec<String>,
    /// Per-check replacement for the slack allowance of every inequality
    /// the check evaluates.
    #[serde(default)]
    pub tolerance_overrides: BTreeMap<String, f64>,
}

impl SuiteConfig {
    pub fn new(seed: u64, checks: &[Check], trials: usize) -> Self {
        Self {
            seed,
            dims: Vec::new(),
            trials,
            alphas: Vec::new(),
            checks: checks.iter().map(|c| c.id().to_string()).collect(),
            tolerance_overrides: BTreeMap::new(),
        }
    }

    pub fn validate(&self) -> Result<Vec<Check>> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if self.checks.is_empty() {
            return Err(Error::InvalidArgument("no checks requested".into()));
        }
        for d in &self.dims {
            if d.is_empty() || d.len() > 3 || d.iter().any(|&f| f < 2) {
                return Err(Error::InvalidArgument(format!(
                    "dimension profile {d:?} needs 1 to 3 factors, each at least 2"
                )));
            }
        }
        if self.alphas.iter().any(|a| a.is_nan() || *a < 0.0) {
            return Err(Error::InvalidArgument("orders must be non-negative".into()));
        }
        for (k, v) in &self.tolerance_overrides {
            Check::parse(k)?;
            if !(*v >= 0.0) {
                return Err(Error::InvalidArgument(format!("tolerance for `{k}` must be non-negative")));
            }
        }
        self.checks.iter().map(|c| Check::parse(c)).collect()
    }
}

/// The acceptance battery: every check with the trial counts it is
/// specified at.
pub fn full_battery(seed: u64) -> Vec<SuiteConfig> {
    let entry = |check: Check, trials: usize| SuiteConfig::new(seed, &[check], trials);
    vec![
        // 10⁴ pairs per dimension, three dimensions
        entry(Check::Sandwich, 30_000),
        entry(Check::ReverseAlt, 1000),
        entry(Check::Equality, 1000),
        // 500 per dimension profile
        entry(Check::Duality, 1000),
        entry(Check::PetzMinimalChain, 1000),
        entry(Check::CoherentBound, 1000),
        entry(Check::MinlikeBound, 1000),
        entry(Check::MinlikeBoundCq, 1000),
        entry(Check::Derivative, 500),
        entry(Check::Stationarity, 500),
        entry(Check::Certificate, 1000),
        entry(Check::CertificateFpg, 1000),
        entry(Check::CertificateCommuting, 200),
        entry(Check::FidelityBounds, 10_000),
        entry(Check::PgmIdentity, 1000),
        entry(Check::GuessingChain, 1000),
        entry(Check::PgmOptimality, 1000),
        entry(Check::SingletOptimality, 1000),
        entry(Check::MinEntropyCq, 1000),
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PureJson {
    pub profile: Vec<usize>,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl PureJson {
    fn from_state(psi: &PureState) -> Self {
        Self {
            profile: psi.profile().factors().to_vec(),
            re: psi.amplitudes().iter().map(|z| z.re).collect(),
            im: psi.amplitudes().iter().map(|z| z.im).collect(),
        }
    }

    fn to_state(&self) -> Result<PureState> {
        if self.re.len() != self.im.len() {
            return Err(Error::InvalidArgument("amplitude parts differ in length".into()));
        }
        let amps = self.re.iter().zip(&self.im).map(|(&a, &b)| Complex64::new(a, b)).collect();
        PureState::new(amps, DimensionProfile::new(self.profile.clone())?)
    }
}

/// Serialized inputs of one trial.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrialInput {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub operators: Vec<MatrixJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ensembles: Vec<EnsembleJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pure: Vec<PureJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty", with = "orders")]
    pub alphas: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<f64>,
}

impl TrialInput {
    fn op(&self, i: usize) -> Result<HermitianOperator> {
        self.operators
            .get(i)
            .ok_or_else(|| Error::InvalidArgument(format!("witness lacks operator {i}")))?
            .to_operator()
    }

    fn state(&self, i: usize) -> Result<DensityOperator> {
        let m = self
            .operators
            .get(i)
            .ok_or_else(|| Error::InvalidArgument(format!("witness lacks state {i}")))?;
        DensityOperator::from_json(m)
    }

    fn ensemble(&self, i: usize) -> Result<Ensemble> {
        Ensemble::from_json(
            self.ensembles
                .get(i)
                .ok_or_else(|| Error::InvalidArgument(format!("witness lacks ensemble {i}")))?,
        )
    }

    fn param(&self, i: usize) -> Result<f64> {
        self.params
            .get(i)
            .copied()
            .ok_or_else(|| Error::InvalidArgument(format!("witness lacks parameter {i}")))
    }

    fn push_op(&mut self, m: &HermitianOperator) {
        self.operators.push(MatrixJson::from_operator(m, None));
    }

    fn push_state(&mut self, s: &DensityOperator) {
        self.operators.push(s.to_json());
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub trial: usize,
    pub dims: Vec<usize>,
    /// Smallest signed margin over the inequalities of the trial; absent if
    /// the trial raised an error.
    pub slack: Option<f64>,
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub trial: usize,
    pub dims: Vec<usize>,
    pub slack: Option<f64>,
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub input: TrialInput,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: Check,
    pub trials: usize,
    pub failures: usize,
    /// Trials that raised an error; also counted in `failures`.
    pub errors: usize,
    pub worst_slack: Option<f64>,
    pub tolerance_override: Option<f64>,
    pub witness: Option<Witness>,
    pub rows: Vec<TrialRow>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub config: Vec<SuiteConfig>,
    pub checks: Vec<CheckReport>,
    /// Seconds; the only field that varies between identical runs.
    pub wall_time: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckReport::passed)
    }

    pub fn check(&self, c: Check) -> Option<&CheckReport> {
        self.checks.iter().find(|r| r.check == c)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let r: Self = serde_json::from_str(text)?;
        if r.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidArgument(format!("unsupported schema version {}", r.schema_version)));
        }
        Ok(r)
    }

    /// One row per (check, trial).
    pub fn to_csv(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Row<'a> {
            check: &'a str,
            trial: usize,
            dims: String,
            slack: Option<f64>,
            holds: bool,
            error: &'a str,
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        for c in &self.checks {
            for r in &c.rows {
                w.serialize(Row {
                    check: c.check.id(),
                    trial: r.trial,
                    dims: r.dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("x"),
                    slack: r.slack,
                    holds: r.holds,
                    error: r.error.as_deref().unwrap_or(""),
                })
                .map_err(|e| Error::InvalidArgument(e.to_string()))?;
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }

    pub fn write(&self, path: &std::path::Path, csv: bool) -> Result<()> {
        let text = if csv { self.to_csv()? } else { self.to_json()? };
        std::fs::write(path, text)?;
        Ok(())
    }
}

/// Runs one configuration.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    run_battery(std::slice::from_ref(config))
}

/// Runs several configurations into one report, in order.
pub fn run_battery(configs: &[SuiteConfig]) -> Result<SuiteReport> {
    let checks: Vec<Vec<Check>> = configs.iter().map(SuiteConfig::validate).collect::<Result<_>>()?;
    let start = Instant::now();
    let work = || -> Vec<CheckReport> {
        configs
            .iter()
            .zip(&checks)
            .flat_map(|(cfg, cs)| cs.iter().map(move |&c| run_check(c, cfg)))
            .collect()
    };
    let reports = match thread_cap()? {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?
            .install(work),
        None => work(),
    };
    Ok(SuiteReport {
        schema_version: SCHEMA_VERSION,
        config: configs.to_vec(),
        checks: reports,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

fn thread_cap() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(Error::InvalidArgument(format!("{THREADS_ENV} must be a positive integer, got `{v}`"))),
        },
        Err(_) => Ok(None),
    }
}

fn run_check(check: Check, cfg: &SuiteConfig) -> CheckReport {
    let dims = if cfg.dims.is_empty() { check.default_dims() } else { cfg.dims.clone() };
    let alphas = if cfg.alphas.is_empty() { check.default_alphas() } else { cfg.alphas.clone() };
    let tol = cfg.tolerance_overrides.get(check.id()).copied();
    let results: Vec<(TrialRow, TrialInput)> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let profile = &dims[t % dims.len()];
            let mut rng = substream(cfg.seed, (check.index() << 32) | t as u64);
            let input = draw(check, profile, &alphas, &mut rng);
            let outcome = input.as_ref().map_err(|e| e.to_string()).and_then(|i| {
                evaluate(check, i, tol).map_err(|e| e.to_string())
            });
            let row = match outcome {
                Ok(o) => TrialRow {
                    trial: t,
                    dims: profile.clone(),
                    slack: Some(o.slack),
                    holds: o.holds,
                    error: None,
                },
                Err(e) => TrialRow {
                    trial: t,
                    dims: profile.clone(),
                    slack: None,
                    holds: false,
                    error: Some(e),
                },
            };
            (row, input.unwrap_or_default())
        })
        .collect();
    let failures = results.iter().filter(|(r, _)| !r.holds).count();
    let errors = results.iter().filter(|(r, _)| r.error.is_some()).count();
    // errors rank below every finite slack; ties go to the earliest trial
    let rank = |r: &TrialRow| r.slack.filter(|s| !s.is_nan()).unwrap_or(f64::NEG_INFINITY);
    let worst = results
        .iter()
        .min_by(|a, b| rank(&a.0).total_cmp(&rank(&b.0)).then(a.0.trial.cmp(&b.0.trial)));
    let worst_slack = results.iter().filter_map(|(r, _)| r.slack).reduce(f64::min);
    let witness = worst.map(|(r, i)| Witness {
        trial: r.trial,
        dims: r.dims.clone(),
        slack: r.slack,
        holds: r.holds,
        error: r.error.clone(),
        input: i.clone(),
    });
    CheckReport {
        check,
        trials: cfg.trials,
        failures,
        errors,
        worst_slack,
        tolerance_override: tol,
        witness,
        rows: results.into_iter().map(|(r, _)| r).collect(),
    }
}

/// Re-evaluates a persisted witness.
pub fn replay_witness(check: Check, witness: &Witness, tolerance_override: Option<f64>) -> Result<TrialOutcome> {
    evaluate(check, &witness.input, tolerance_override)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub slack: f64,
    pub holds: bool,
}

fn judge(reports: &[InequalityReport], tol: Option<f64>) -> TrialOutcome {
    let slack = reports.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min);
    let holds = reports.iter().all(|r| match tol {
        None => r.holds,
        Some(t) => r.slack >= -t * r.rhs.abs().max(1.0),
    });
    TrialOutcome { slack, holds }
}

/// Boolean agreement as an inequality: slack 0 when equal, −1 otherwise.
fn agree(a: bool, b: bool) -> InequalityReport {
    InequalityReport::eq(a as u8 as f64, b as u8 as f64, 0.0)
}

/// `value ≤ bound` with no extra allowance.
fn at_most(value: f64, bound: f64) -> InequalityReport {
    InequalityReport::le(value, bound, 0.0)
}

fn bipartite(p: &[usize]) -> (usize, usize) {
    match p {
        [d] => (*d, *d),
        [a, b, ..] => (*a, *b),
        [] => unreachable!("validated profile"),
    }
}

fn tripartite(p: &[usize]) -> Vec<usize> {
    match p {
        [d] => vec![*d, *d, *d],
        [a, b] => vec![*a, *b, *b],
        _ => p[..3].to_vec(),
    }
}

/// Random positive definite operator with trace in `[0.2, 5]`.
fn random_unnormalized(dim: usize, rng: &mut impl Rng) -> HermitianOperator {
    let scale = rng.random_range(0.2..5.0);
    random_density_from(dim, dim, rng).op().scale(scale)
}

/// `U diag(p) U†`, `U diag(q) U†` with a shared random `U`.
fn commuting_densities(dim: usize, rng: &mut impl Rng) -> (HermitianOperator, HermitianOperator) {
    let u = random_unitary(dim, rng);
    let p = crate::states::random_probs(dim, rng);
    let q = crate::states::random_probs(dim, rng);
    (HermitianOperator::from_spectrum(&p, &u), HermitianOperator::from_spectrum(&q, &u))
}

fn draw(check: Check, profile: &[usize], alphas: &[f64], rng: &mut impl Rng) -> Result<TrialInput> {
    let n: usize = profile.iter().product();
    let mut input = TrialInput {
        alphas: alphas.to_vec(),
        ..Default::default()
    };
    match check {
        Check::Sandwich => {
            let rank = rng.random_range(1..=n);
            input.push_state(&random_density_from(n, rank, rng));
            input.push_state(&random_density_from(n, n, rng));
            input.push_op(&random_unnormalized(n, rng));
            input.push_op(&random_unnormalized(n, rng));
        }
        Check::ReverseAlt => {
            input.alphas.clear();
            input.push_op(&random_unnormalized(n, rng));
            input.push_op(&random_unnormalized(n, rng));
            // (q, r, 1/b as a fraction of the room left by the constraint), r ≤ 1 then r > 1
            input.params = vec![
                rng.random_range(0.5..3.0),
                rng.random_range(0.1..0.9),
                rng.random_range(0.05..0.95),
                rng.random_range(0.5..3.0),
                rng.random_range(1.1..3.0),
                rng.random_range(0.05..0.95),
            ];
        }
        Check::Equality => {
            let (r, s) = commuting_densities(n, rng);
            input.push_op(&r);
            input.push_op(&s);
            loop {
                let r = random_density_from(n, n, rng).into_operator();
                let s = random_density_from(n, n, rng).into_operator();
                if commutator_norm(&r, &s)? >= GENERIC_COMMUTATOR_MIN {
                    input.push_op(&r);
                    input.push_op(&s);
                    break;
                }
            }
        }
        Check::Duality => {
            let p = DimensionProfile::new(tripartite(profile))?;
            input.pure.push(PureJson::from_state(&random_pure(&p, rng)));
        }
        Check::PetzMinimalChain | Check::MinlikeBound => {
            let (a, b) = bipartite(profile);
            let rank = rng.random_range(1..=a * b);
            input.push_state(&random_state(&DimensionProfile::bipartite(a, b), rank, rng));
        }
        Check::CoherentBound | Check::MinlikeBoundCq | Check::PgmIdentity | Check::GuessingChain
        | Check::PgmOptimality | Check::MinEntropyCq => {
            let (nx, d) = bipartite(profile);
            let mixed = rng.random_bool(0.5);
            input.ensembles.push(random_ensemble(nx, d, mixed, rng).to_json());
        }
        Check::Derivative => {
            let (b, a0) = random_commuting_pair(n, rng);
            input.push_op(&b);
            input.push_op(&a0);
            input.push_op(&random_hermitian(n, rng));
        }
        Check::Stationarity | Check::CertificateCommuting => {
            let (a, b) = bipartite(profile);
            input.push_state(&random_block_state(a, b, rng));
        }
        Check::Certificate | Check::CertificateFpg => {
            let (a, b) = bipartite(profile);
            let rank = rng.random_range(1..=a * b);
            input.push_state(&random_state(&DimensionProfile::bipartite(a, b), rank, rng));
        }
        Check::FidelityBounds => {
            let rank = rng.random_range(1..=n);
            input.push_state(&random_density_from(n, rank, rng));
            let rank = rng.random_range(1..=n);
            input.push_state(&random_density_from(n, rank, rng));
        }
        Check::SingletOptimality => {
            let (a, b) = bipartite(profile);
            let p = DimensionProfile::bipartite(a, b);
            let rank = rng.random_range(2..=a * b);
            input.push_state(&random_state(&p, rank, rng));
            input.push_state(&random_pure(&p, rng).density());
            input.push_state(&random_flagged_mixture(a, b, 2, rng));
        }
    }
    if check.default_alphas().is_empty() {
        input.alphas.clear();
    }
    Ok(input)
}

fn evaluate(check: Check, input: &TrialInput, tol: Option<f64>) -> Result<TrialOutcome> {
    use DivergenceFamily::Minimal;
    let mut reports = Vec::new();
    match check {
        Check::Sandwich => {
            let pairs = [(input.op(0)?, input.op(1)?), (input.op(2)?, input.op(3)?)];
            for &alpha in &input.alphas {
                for (r, s) in &pairs {
                    let rep = check_sandwich(r, s, alpha)?;
                    reports.push(rep.lower);
                    reports.push(rep.upper);
                }
            }
        }
        Check::ReverseAlt => {
            let (a, b) = (input.op(0)?, input.op(1)?);
            for k in 0..2 {
                let (q, r, u) = (input.param(3 * k)?, input.param(3 * k + 1)?, input.param(3 * k + 2)?);
                let room = (1.0 / (2.0 * r * q) - 1.0 / (2.0 * q)).abs();
                let e = AltExponents::solve_a(q, r, 1.0 / (u * room))?;
                reports.push(check_reverse_alt(&a, &b, &e)?);
            }
            // b = ∞, a = 2rq/(1−r) gives the earlier bound
            let (q, r) = (input.param(0)?, input.param(1)?);
            let e = AltExponents::new(q, r, 2.0 * r * q / (1.0 - r), f64::INFINITY)?;
            let (_, rhs) = reverse_alt_sides(&a, &b, &e)?;
            reports.push(InequalityReport::eq(rhs, audenaert_bound(&a, &b, q, r)?, REMARK_TOL));
        }
        Check::Equality => {
            for &alpha in &input.alphas {
                let c = equality_condition(&input.op(0)?, &input.op(1)?, alpha)?;
                reports.push(at_most(c.gap, COMMUTING_GAP_TOL));
                let g = equality_condition(&input.op(2)?, &input.op(3)?, alpha)?;
                reports.push(InequalityReport::ge(g.gap, GENERIC_GAP_MIN, 0.0));
            }
        }
        Check::Duality => {
            let psi = input
                .pure
                .first()
                .ok_or_else(|| Error::InvalidArgument("witness lacks pure state".into()))?
                .to_state()?;
            for rel in DualityRelation::ALL {
                for &alpha in &input.alphas {
                    if rel.dual_order(alpha).is_err() {
                        continue;
                    }
                    let r = duality_check(&psi, alpha, rel)?;
                    reports.push(InequalityReport::eq(r.sum, 0.0, r.tolerance));
                }
            }
        }
        Check::PetzMinimalChain => {
            let s = input.state(0)?;
            for &alpha in &input.alphas {
                let r = check_cor5(&s, alpha)?;
                reports.extend([r.down.lower, r.down.upper, r.up.lower, r.up.upper]);
            }
        }
        Check::CoherentBound => {
            let e = input.ensemble(0)?;
            for &alpha in &input.alphas {
                let r = check_prop6(&e, alpha)?;
                reports.extend(r.down.into_iter().chain(r.up));
            }
        }
        Check::MinlikeBound | Check::MinlikeBoundCq => {
            let (s, cq) = if check == Check::MinlikeBound {
                (input.state(0)?, false)
            } else {
                (cq_state(&input.ensemble(0)?), true)
            };
            for &alpha in &input.alphas {
                let r = check_minlike_bounds(&s, alpha, cq)?;
                reports.extend(std::iter::once(r.minimal).chain(r.petz));
            }
        }
        Check::Derivative => {
            let (b, a0, a1) = (input.op(0)?, input.op(1)?, input.op(2)?);
            for &alpha in &input.alphas {
                let an = qtilde_directional_derivative(&b, &a0, &a1, alpha)?;
                let q = |t: f64| q_alpha(Minimal, &b, &a0.add(&a1.scale(t)), alpha);
                let fd = (q(FD_STEP)? - q(-FD_STEP)?) / (2.0 * FD_STEP);
                reports.push(at_most((an - fd).abs() / an.abs().max(1.0), FD_REL_TOL));
            }
        }
        Check::Stationarity => {
            let s = input.state(0)?;
            for &alpha in &input.alphas {
                reports.push(at_most(stationarity_residual(alpha, &s)?, STATIONARITY_TOL));
            }
        }
        Check::Certificate => {
            let r = verify_fidelity_certificate(&input.state(0)?)?;
            let tol = crate::sdpsolve::FEASIBILITY_TOL;
            reports.push(InequalityReport::ge(r.min_eig_operator, 0.0, tol));
            reports.push(InequalityReport::ge(r.min_eig_trace, 0.0, tol));
            reports.push(InequalityReport::le(r.non_hermiticity, 0.0, tol));
        }
        Check::CertificateFpg => {
            let r = verify_fidelity_certificate(&input.state(0)?)?;
            reports.push(at_most((r.mu_star - r.f_pg_squared).abs(), FPG_MATCH_TOL));
        }
        Check::CertificateCommuting => {
            let tau = input.state(0)?;
            let r = verify_fidelity_certificate(&tau)?;
            let gamma = solve_fidelity_primal(&tau)?.primal_value;
            reports.push(at_most((r.mu_star - gamma).abs(), CERTIFICATE_SDP_TOL));
        }
        Check::FidelityBounds => {
            let r = check_fidelity_bounds(&input.state(0)?, &input.state(1)?)?;
            for c in [r.fidelities, r.pg_distance, r.distance] {
                reports.extend([c.lower, c.upper]);
            }
        }
        Check::PgmIdentity => {
            let e = input.ensemble(0)?;
            let p_pg = pgm_guess_probability(&e)?;
            let via_entropy = (-h_down(Minimal, 2.0, &cq_state(&e))?).exp2();
            reports.push(at_most((p_pg - via_entropy).abs(), PGM_IDENTITY_TOL));
        }
        Check::GuessingChain => {
            let r = check_guessing_bounds(&input.ensemble(0)?)?;
            reports.extend([r.chain.lower, r.chain.upper]);
        }
        Check::PgmOptimality => {
            let r = pgm_optimality(&input.ensemble(0)?)?;
            reports.push(agree(r.commutes, r.optimal));
        }
        Check::SingletOptimality => {
            for i in 0..3 {
                let r = singlet_optimality(&input.state(i)?)?;
                reports.push(agree(r.commutes, r.optimal));
                if i > 0 {
                    // pure states and flagged mixtures of pure states commute
                    reports.push(agree(r.commutes, true));
                }
            }
        }
        Check::MinEntropyCq => {
            let e = input.ensemble(0)?;
            let min = solve_min_entropy(&cq_state(&e))?;
            let guess = solve_guessing(&e)?;
            reports.push(at_most((min.primal_value.log2() - guess.primal_value.log2()).abs(), MIN_ENTROPY_CQ_TOL));
        }
    }
    if reports.is_empty() {
        return Err(Error::InvalidArgument(format!("no admissible order for `{}`", check.id())));
    }
    Ok(judge(&reports, tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_ids_round_trip() {
        for c in Check::ALL {
            assert_eq!(Check::parse(c.id()).unwrap(), c);
            let json = serde_json::to_string(&c).unwrap();
            assert_eq!(json, format!("\"{}\"", c.id()));
        }
        assert!(matches!(Check::parse("nope"), Err(Error::UnknownCheck(_))));
    }

    #[test]
    fn orders_serialize_infinity() {
        let mut cfg = SuiteConfig::new(1, &[Check::Duality], 1);
        cfg.alphas = vec![0.5, f64::INFINITY];
        let text = serde_json::to_string(&cfg).unwrap();
        assert!(text.contains("\"inf\""));
        let back: SuiteConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn parse_order_accepts_infinity() {
        assert_eq!(parse_order("inf").unwrap(), f64::INFINITY);
        assert_eq!(parse_order("0.5").unwrap(), 0.5);
        assert!(parse_order("x").is_err());
    }
}
