//! Existence of tame genus-0 covers with prescribed ramification, and the
//! block-system non-existence test for arbitrary monodromy tuples.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::admissibility::{self, AdmissibilityError, ChainWitness, InseparableWitness, RamProfile, Verdict};
use crate::hurwitz::{self, HurwitzError, HurwitzTuple};
use crate::permgroup::{self, BlockSystem, GroupClass, PermError};

/// Certificates are only built up to this degree.
pub const CERTIFICATE_MAX_DEGREE: u64 = 4096;

/// Carried on every verdict: statements are about covers branched over
/// points in general position.
pub const GENERAL_POINTS_NOTE: &str = "for general branch points";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExistenceError {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Hurwitz(#[from] HurwitzError),
    #[error(transparent)]
    Admissibility(#[from] AdmissibilityError),
    #[error("no certificate: {0}")]
    NoCertificate(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Exists,
    NotExists,
    OutOfScope,
    Invalid,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Exists => "EXISTS",
            Status::NotExists => "NOT_EXISTS",
            Status::OutOfScope => "OUT_OF_SCOPE",
            Status::Invalid => "INVALID",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExistenceVerdict {
    pub p: u64,
    pub indices: Vec<u64>,
    pub status: Status,
    pub reason: String,
    pub degree: Option<u64>,
    /// A Hurwitz factorization with the prescribed lengths, on `EXISTS`.
    pub certificate: Option<HurwitzTuple>,
    /// Intermediate lengths, on `EXISTS` in the chain regime.
    pub chain: Option<ChainWitness>,
    /// On `NOT_EXISTS` for three points.
    pub witness: Option<InseparableWitness>,
    pub note: String,
}

impl ExistenceVerdict {
    fn new(p: u64, indices: &[u64], status: Status, reason: impl Into<String>) -> Self {
        ExistenceVerdict {
            p,
            indices: indices.to_vec(),
            status,
            reason: reason.into(),
            degree: None,
            certificate: None,
            chain: None,
            witness: None,
            note: GENERAL_POINTS_NOTE.into(),
        }
    }
}

/// Decides whether a tame cover `P^1 → P^1` of degree `d` exists in
/// characteristic `p` with one ramification point of each index `e_i` over
/// `r` general points. Invalid input is a verdict, not an error.
pub fn decide(p: u64, indices: &[u64]) -> ExistenceVerdict {
    let profile = match RamProfile::new(p, indices.to_vec()) {
        Ok(profile) => profile,
        Err(e) => return ExistenceVerdict::new(p, indices, Status::Invalid, e.to_string()),
    };
    let Some(d) = profile.degree() else {
        return ExistenceVerdict::new(p, indices, Status::Invalid, AdmissibilityError::Parity.to_string());
    };
    let mut verdict = ExistenceVerdict::new(p, indices, Status::Invalid, "");
    verdict.degree = Some(d);
    if let Some(pos) = indices.iter().position(|&e| e > d) {
        verdict.status = Status::NotExists;
        verdict.reason = format!("degree bound: e_{} = {} exceeds d = {d}", pos + 1, indices[pos]);
        return verdict;
    }
    let numerical = match admissibility::admissible(&profile) {
        Ok(v) => v,
        Err(e) => {
            verdict.reason = e.to_string();
            return verdict;
        }
    };
    match numerical {
        Verdict::Wild { position, index } => {
            verdict.status = Status::OutOfScope;
            verdict.reason = format!("wild: e_{} = {index} is divisible by p", position + 1);
        }
        Verdict::OutOfScope => {
            verdict.status = Status::OutOfScope;
            verdict.reason = "more than three points with some index at least p".into();
        }
        Verdict::Inadmissible(witness) => {
            verdict.status = Status::NotExists;
            verdict.reason = match &witness {
                Some(w) => format!("not numerically {p}-admissible: {w}"),
                None => format!("not numerically {p}-admissible: no admissible chain"),
            };
            verdict.witness = witness;
        }
        Verdict::Admissible(chain) => {
            verdict.status = Status::Exists;
            verdict.reason = match &chain {
                Some(c) => format!("numerically {p}-admissible via {c}"),
                None => format!("numerically {p}-admissible"),
            };
            verdict.certificate = certificate(&profile, d, chain.as_ref()).ok();
            verdict.chain = chain;
        }
    }
    verdict
}

fn certificate(profile: &RamProfile, d: u64, chain: Option<&ChainWitness>) -> Result<HurwitzTuple, ExistenceError> {
    if d > CERTIFICATE_MAX_DEGREE {
        return Err(ExistenceError::NoCertificate(format!("degree {d} above {CERTIFICATE_MAX_DEGREE}")));
    }
    let lengths: Vec<usize> = profile.indices().iter().map(|&e| e as usize).collect();
    let t = match chain {
        Some(chain) => hurwitz::construct(profile.p(), &lengths, chain)?,
        None if lengths.len() == 3 => hurwitz::three_point_factorization(lengths[0], lengths[1], lengths[2])?,
        None => return Err(ExistenceError::NoCertificate("no chain witness".into())),
    };
    debug_assert!(t.validate(Some(&lengths)).is_valid());
    Ok(t)
}

/// Group generated by the certificate of an existing cover.
pub fn monodromy_class_of_certificate(p: u64, indices: &[u64]) -> Result<GroupClass, ExistenceError> {
    let verdict = decide(p, indices);
    let t = verdict.certificate.ok_or_else(|| ExistenceError::NoCertificate(verdict.reason.clone()))?;
    Ok(permgroup::classify_group(t.perms(), permgroup::DEFAULT_CLASSIFY_BOUND)?)
}

/// Which numerical criterion applies to the induced lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    AllBelowP,
    ThreePoint,
    OutOfScope,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SystemVerdict {
    Admissible,
    Inadmissible,
    NotEvaluated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockReport {
    pub system: BlockSystem,
    pub block_size: usize,
    pub induced_degree: usize,
    pub induced: Vec<String>,
    /// Cycle lengths of the induced permutations, fixed points removed,
    /// in decreasing order.
    pub lengths: Vec<u64>,
    pub regime: Regime,
    pub genus_zero: bool,
    pub verdict: SystemVerdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AnalysisStatus {
    NotExists,
    Inconclusive,
}

impl fmt::Display for AnalysisStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AnalysisStatus::NotExists => "NOT_EXISTS",
            AnalysisStatus::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImprimitiveReport {
    pub p: u64,
    pub degree: usize,
    pub genus: u64,
    pub systems: Vec<BlockReport>,
    pub status: AnalysisStatus,
    /// Index into `systems` of the first system ruling the cover out.
    pub witness: Option<usize>,
}

fn regime(lengths: &[u64], p: u64) -> Regime {
    if lengths.iter().any(|e| e % p == 0) {
        Regime::OutOfScope
    } else if lengths.iter().all(|&e| e < p) {
        Regime::AllBelowP
    } else if lengths.len() == 3 {
        Regime::ThreePoint
    } else {
        Regime::OutOfScope
    }
}

fn block_report(t: &HurwitzTuple, system: BlockSystem, p: u64) -> Result<BlockReport, ExistenceError> {
    let induced: Vec<_> = t
        .perms()
        .iter()
        .map(|g| permgroup::induced_on_blocks(g, &system))
        .collect::<Result<_, _>>()?;
    let mut lengths: Vec<u64> =
        induced.iter().flat_map(|g| g.cycle_type().nontrivial()).map(|e| e as u64).collect();
    lengths.sort_unstable_by(|a, b| b.cmp(a));
    let n = system.num_blocks() as u64;
    let sum: u64 = lengths.iter().map(|e| e - 1).sum();
    let genus_zero = 2 * n == sum + 2;
    let regime = regime(&lengths, p);
    let verdict = if genus_zero && regime != Regime::OutOfScope && lengths.len() >= 3 {
        let profile = RamProfile::new(p, lengths.clone())?;
        match admissibility::admissible(&profile)? {
            Verdict::Admissible(_) => SystemVerdict::Admissible,
            Verdict::Inadmissible(_) => SystemVerdict::Inadmissible,
            _ => SystemVerdict::NotEvaluated,
        }
    } else {
        SystemVerdict::NotEvaluated
    };
    Ok(BlockReport {
        block_size: system.block_size(),
        induced_degree: system.num_blocks(),
        induced: induced.iter().map(|g| g.to_string()).collect(),
        system,
        lengths,
        regime,
        genus_zero,
        verdict,
    })
}

/// Checks every block system of the monodromy group: a cover with this
/// monodromy cannot exist in characteristic `p` if some quotient is a
/// genus-0 cover whose ramification is not numerically `p`-admissible.
pub fn analyze_monodromy(t: &HurwitzTuple, p: u64) -> Result<ImprimitiveReport, ExistenceError> {
    if !admissibility::is_prime(p) {
        return Err(AdmissibilityError::NotPrime(p).into());
    }
    if !t.is_transitive() {
        return Err(PermError::NotTransitive.into());
    }
    if !t.product().is_identity() {
        return Err(HurwitzError::Invalid.into());
    }
    let d = t.degree() as u64;
    let sum: u64 = t.perms().iter().map(|g| g.cycle_type().nontrivial().iter().map(|&e| e as u64 - 1).sum::<u64>()).sum();
    // trivial product forces the sum to be even, transitivity makes it at least 2d - 2
    let genus = (sum + 2 - 2 * d) / 2;
    let systems = permgroup::block_systems(t.perms())?
        .into_iter()
        .map(|s| block_report(t, s, p))
        .collect::<Result<Vec<_>, _>>()?;
    let witness = systems.iter().position(|s| s.verdict == SystemVerdict::Inadmissible);
    Ok(ImprimitiveReport {
        p,
        degree: t.degree(),
        genus,
        status: if witness.is_some() { AnalysisStatus::NotExists } else { AnalysisStatus::Inconclusive },
        witness,
        systems,
    })
}
