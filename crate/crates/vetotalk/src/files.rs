//! JSON game, profile and result files. Every number is an exact rational
//! written as a string such as `"-110/3"` or `"40"`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};
use vetotalk_core::{
    AffineFn, GameSpec, Halfspace, LotteryOutcome, MediatedMechanism, Polytope, Rational, ReceiverStrategy,
    SenderStrategy, TypeData,
};

use crate::error::CliError;

/// A rational that travels as a string.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Q(pub Rational);

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<Rational> for Q {
    fn from(r: Rational) -> Self {
        Q(r)
    }
}

impl From<&Rational> for Q {
    fn from(r: &Rational) -> Self {
        Q(r.clone())
    }
}

/// Parses `"a"` or `"a/b"` with integer `a`, `b` and `b ≠ 0`.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let t = s.trim();
    let ok = !t.is_empty()
        && t.split('/').count() <= 2
        && t.split('/').all(|part| {
            let digits = part.strip_prefix('-').unwrap_or(part);
            !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
        });
    if !ok {
        return Err(format!("{s:?} is not a rational like \"-7\" or \"3/5\""));
    }
    t.parse::<Rational>()
        .map_err(|_| format!("{s:?} has a zero denominator"))
}

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map(Q).map_err(serde::de::Error::custom)
    }
}

fn qs(v: &[Rational]) -> Vec<Q> {
    v.iter().map(Q::from).collect()
}

fn rs(v: &[Q]) -> Vec<Rational> {
    v.iter().map(|q| q.0.clone()).collect()
}

// ---- game files ------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RowFile {
    pub normal: Vec<Q>,
    pub rhs: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecisionSetFile {
    pub rows: Vec<RowFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineFile {
    pub coeffs: Vec<Q>,
    pub constant: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypeFile {
    pub name: String,
    pub prior: Q,
    pub reserve: Q,
    #[serde(rename = "U")]
    pub u: AffineFile,
    #[serde(rename = "V")]
    pub v: AffineFile,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameFile {
    pub dimension: usize,
    pub decision_set: DecisionSetFile,
    pub types: Vec<TypeFile>,
}

impl AffineFile {
    fn to_core(&self) -> AffineFn {
        AffineFn::new(rs(&self.coeffs), self.constant.0.clone())
    }

    fn from_core(f: &AffineFn) -> Self {
        AffineFile {
            coeffs: qs(&f.coeffs),
            constant: Q::from(&f.constant),
        }
    }
}

impl RowFile {
    pub fn from_core(h: &Halfspace) -> Self {
        RowFile {
            normal: qs(&h.normal),
            rhs: Q::from(&h.rhs),
        }
    }
}

impl GameFile {
    /// Runs every load-time validation of the model.
    pub fn to_game(&self) -> vetotalk_core::Result<GameSpec> {
        let rows = self
            .decision_set
            .rows
            .iter()
            .map(|r| Halfspace::new(rs(&r.normal), r.rhs.0.clone()))
            .collect();
        let x = Polytope::new(self.dimension, rows)?;
        let types = self
            .types
            .iter()
            .map(|t| TypeData {
                name: t.name.clone(),
                prior: t.prior.0.clone(),
                reserve: t.reserve.0.clone(),
                sender: t.u.to_core(),
                receiver: t.v.to_core(),
            })
            .collect();
        GameSpec::new(x, types)
    }

    pub fn from_game(game: &GameSpec) -> Self {
        GameFile {
            dimension: game.dim(),
            decision_set: DecisionSetFile {
                rows: game.decisions().rows().iter().map(RowFile::from_core).collect(),
            },
            types: game
                .types()
                .iter()
                .map(|t| TypeFile {
                    name: t.name.clone(),
                    prior: Q::from(&t.prior),
                    reserve: Q::from(&t.reserve),
                    u: AffineFile::from_core(&t.sender),
                    v: AffineFile::from_core(&t.receiver),
                })
                .collect(),
        }
    }

    /// SHA-256 of the compact re-serialization, so layout and whitespace do
    /// not change the digest.
    pub fn digest(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("game files always serialize");
        format!("sha256:{}", hex::encode(Sha256::digest(&bytes)))
    }
}

// ---- profiles --------------------------------------------------------------

/// A sender strategy (one row per type over `messages`) and the receiver's
/// proposal after each message.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileFile {
    pub messages: Vec<String>,
    pub sigma: Vec<Vec<Q>>,
    pub tau: BTreeMap<String, Vec<Q>>,
}

impl ProfileFile {
    pub fn to_core(&self) -> vetotalk_core::Result<(SenderStrategy, ReceiverStrategy)> {
        let sigma = SenderStrategy::new(self.messages.clone(), self.sigma.iter().map(|r| rs(r)).collect())?;
        let tau = ReceiverStrategy::new(self.tau.iter().map(|(m, x)| (m.clone(), rs(x))).collect());
        Ok((sigma, tau))
    }

    pub fn from_core(sigma: &SenderStrategy, tau: &ReceiverStrategy) -> Self {
        ProfileFile {
            messages: sigma.messages().to_vec(),
            sigma: sigma.rows().iter().map(|r| qs(r)).collect(),
            tau: tau.proposals().iter().map(|(m, x)| (m.clone(), qs(x))).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutcomeFile {
    pub label: String,
    pub probability: Q,
    pub decision: Vec<Q>,
}

/// Lotteries of a mediator, one per reported type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MechanismFile {
    pub lotteries: Vec<Vec<OutcomeFile>>,
}

impl MechanismFile {
    pub fn to_core(&self, game: &GameSpec) -> vetotalk_core::Result<MediatedMechanism> {
        let lotteries = self
            .lotteries
            .iter()
            .map(|l| {
                l.iter()
                    .map(|o| LotteryOutcome {
                        label: o.label.clone(),
                        probability: o.probability.0.clone(),
                        decision: rs(&o.decision),
                    })
                    .collect()
            })
            .collect();
        MediatedMechanism::new(game, lotteries)
    }

    pub fn from_core(m: &MediatedMechanism) -> Self {
        MechanismFile {
            lotteries: m
                .lotteries
                .iter()
                .map(|l| {
                    l.iter()
                        .map(|o| OutcomeFile {
                            label: o.label.clone(),
                            probability: Q::from(&o.probability),
                            decision: qs(&o.decision),
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

/// What `check` and `threshold` accept: a profile file, or a result file
/// carrying a profile or a mechanism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlayInput {
    Profile(ProfileFile),
    Mechanism(MechanismFile),
}

// ---- result files ----------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommandEcho {
    pub name: String,
    pub arguments: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AcceptanceSetOut {
    /// 1-based type indices.
    pub set: Vec<usize>,
    pub rows: Vec<RowFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureOut {
    pub maximal: Vec<Vec<usize>>,
    pub classification: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pivot: Option<usize>,
    pub acceptance_sets: Vec<AcceptanceSetOut>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosteriorOut {
    pub message: String,
    pub mass: Q,
    pub belief: Vec<Q>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExitViolationOut {
    #[serde(rename = "type")]
    pub ty: usize,
    pub message: String,
    pub shortfall: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoExitOut {
    pub enforced: bool,
    pub holds: bool,
    pub violations: Vec<ExitViolationOut>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptimalityOut {
    pub message: String,
    pub value: Q,
    pub best: Option<Q>,
    pub best_decision: Option<Vec<Q>>,
    pub best_exit_set: Vec<usize>,
    pub gap: Option<Q>,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IcViolationOut {
    #[serde(rename = "type")]
    pub ty: usize,
    pub message: String,
    pub deviation: String,
    pub gap: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileChecksOut {
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub v0: Option<Q>,
    pub no_exit: NoExitOut,
    pub constrained_optimality: Vec<OptimalityOut>,
    pub constrained_optimality_holds: bool,
    pub incentive_compatibility: Vec<IcViolationOut>,
    pub incentive_compatibility_holds: bool,
    pub exit_types: Vec<usize>,
    pub overall: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObedienceOut {
    pub label: String,
    pub posterior: Vec<Q>,
    pub decision: Vec<Q>,
    pub value: Q,
    pub best: Option<Q>,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MisreportOut {
    #[serde(rename = "type")]
    pub ty: usize,
    pub report: usize,
    pub truthful: Q,
    pub deviating: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MediatedChecksOut {
    pub participation: bool,
    pub obedience: Vec<ObedienceOut>,
    pub misreports: Vec<MisreportOut>,
    pub truthful: bool,
    pub overall: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChecksOut {
    Profile(ProfileChecksOut),
    Mediated(MediatedChecksOut),
}

impl ChecksOut {
    pub fn overall(&self) -> bool {
        match self {
            ChecksOut::Profile(p) => p.overall,
            ChecksOut::Mediated(m) => m.overall,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MessageThresholdOut {
    pub message: String,
    pub threshold: Q,
    pub binding: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdOut {
    pub per_message: Vec<MessageThresholdOut>,
    pub uncapped: Q,
    pub admissibility_cap: Q,
    pub overall: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundOut {
    pub v_star: Q,
    pub partition: Vec<Vec<usize>>,
    pub v_bar: Q,
    pub smallest_prior_type: usize,
    pub p_min: Q,
    pub bound: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttemptOut {
    pub method: String,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultFile {
    pub command: CommandEcho,
    pub game_digest: String,
    /// `structure`, `equilibrium`, `unresolved`, `checked`, `threshold` or `bound`.
    pub outcome: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub provenance: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub kind: Option<String>,
    /// 1-based; the type that mixes in a posterior-splitting equilibrium.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pivot: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub structure: Option<StructureOut>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub profile: Option<ProfileFile>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mechanism: Option<MechanismFile>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub posteriors: Option<Vec<PosteriorOut>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub interim_payoffs: Option<Vec<Q>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub receiver_ex_ante: Option<Q>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub checks: Option<ChecksOut>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub threshold: Option<ThresholdOut>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bound: Option<BoundOut>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub attempts: Option<Vec<AttemptOut>>,
}

impl ResultFile {
    pub fn new(name: &str, arguments: BTreeMap<String, String>, digest: String, outcome: &str) -> Self {
        ResultFile {
            command: CommandEcho {
                name: name.to_string(),
                arguments,
            },
            game_digest: digest,
            outcome: outcome.to_string(),
            provenance: None,
            kind: None,
            pivot: None,
            structure: None,
            profile: None,
            mechanism: None,
            posteriors: None,
            interim_payoffs: None,
            receiver_ex_ante: None,
            checks: None,
            threshold: None,
            bound: None,
            attempts: None,
        }
    }
}

// ---- reading ---------------------------------------------------------------

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_json<T: DeserializeOwned>(path: &Path, text: &str) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let member = e.path().to_string();
        let inner = e.into_inner();
        CliError::Parse {
            path: path.to_path_buf(),
            line: inner.line(),
            column: inner.column(),
            member: if member == "." { None } else { Some(member) },
            detail: inner.to_string(),
        }
    })
}

/// Reads and validates a game file.
pub fn load_game(path: &Path) -> Result<(GameFile, GameSpec), CliError> {
    let text = read(path)?;
    let file: GameFile = parse_json(path, &text)?;
    let game = file.to_game().map_err(|source| CliError::Validation {
        path: path.to_path_buf(),
        source,
    })?;
    Ok((file, game))
}

/// Reads a profile file, or the profile or mechanism inside a result file.
pub fn load_play(path: &Path) -> Result<PlayInput, CliError> {
    let text = read(path)?;
    let value: serde_json::Value = parse_json(path, &text)?;
    let nested = |key: &str| value.get(key).filter(|v| !v.is_null()).map(|v| v.to_string());
    if value.get("command").is_some() {
        if let Some(p) = nested("profile") {
            return parse_json(path, &p).map(PlayInput::Profile);
        }
        if let Some(m) = nested("mechanism") {
            return parse_json(path, &m).map(PlayInput::Mechanism);
        }
        return Err(CliError::Parse {
            path: path.to_path_buf(),
            line: 0,
            column: 0,
            member: None,
            detail: "result file holds neither a profile nor a mechanism".into(),
        });
    }
    if value.get("lotteries").is_some() {
        return parse_json(path, &text).map(PlayInput::Mechanism);
    }
    parse_json(path, &text).map(PlayInput::Profile)
}
