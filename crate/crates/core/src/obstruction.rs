//! Existence thresholds and Chern-class obstructions.
//!
//! A totally real immersion `M^n -> C^N` forces a complex bundle `Q` of
//! rank `N - n` with `(C⊗TM) ⊕ Q` trivial, so `c(Q) = c(C⊗TM)^{-1}` and
//! `N ≥ n + rank Q`. An independent map forces `C⊗TM ≅ Nε ⊕ B` with
//! `rank B = n - N` and `c(B) = c(C⊗TM)`. On the existence side generic
//! maps avoid a determinantal stratum in the 1-jet space once its
//! codimension exceeds `n`.

use std::fmt;

use thiserror::Error;

use crate::catalog::{CatalogError, ManifoldDescriptor};
use crate::classify::{classify4, ClassifyError, Condition, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObstructionError {
    #[error("existence threshold for {kind} maps is undefined in dimension {n}")]
    UndefinedThreshold { kind: QueryKind, n: u32 },
    #[error("dimension and target must be positive (got n = {n}, N = {target})")]
    InvalidArgument { n: u32, target: u32 },
    #[error("no decision route for `{manifold}`: {missing}")]
    NoDecisionRoute { manifold: String, missing: String },
    #[error("inconsistent bounds for `{manifold}`: {detail}")]
    Internal { manifold: String, detail: String },
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QueryKind {
    TotallyReal,
    Independent,
}

impl QueryKind {
    pub fn as_str(self) -> &'static str {
        match self {
            QueryKind::TotallyReal => "totally-real",
            QueryKind::Independent => "independent",
        }
    }
}

impl fmt::Display for QueryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Smallest `N` (totally real) or largest `N` (independent) for which the
/// generic-map argument guarantees existence.
pub fn existence_threshold(n: u32, kind: QueryKind) -> Result<u32, ObstructionError> {
    match kind {
        QueryKind::TotallyReal if n < 2 => Err(ObstructionError::UndefinedThreshold { kind, n }),
        QueryKind::TotallyReal => Ok(3 * n / 2),
        QueryKind::Independent if n < 1 => Err(ObstructionError::UndefinedThreshold { kind, n }),
        QueryKind::Independent => Ok(n.div_ceil(2)),
    }
}

/// Codimension of `{rank ≤ k}` in the space of `rows × cols` matrices;
/// zero when the condition holds for every matrix.
pub fn determinantal_codimension(rows: u32, cols: u32, max_rank: u32) -> u32 {
    if max_rank >= rows.min(cols) {
        0
    } else {
        (rows - max_rank) * (cols - max_rank)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransversalityCheck {
    pub applies: bool,
    pub dim_m: u32,
    /// Real codimension of the bad stratum in the 1-jet space.
    pub codim_sigma: u32,
}

/// Compares `dim M` with the codimension of the degenerate 1-jet stratum.
///
/// Both strata are complex determinantal loci in the `N × n` matrix of
/// complex differentials: rank `< n` for totally real maps, rank `< N`
/// for independent maps. Real codimension is twice the complex one.
pub fn transversality_check(
    n: u32,
    target: u32,
    kind: QueryKind,
) -> Result<TransversalityCheck, ObstructionError> {
    if n == 0 || target == 0 {
        return Err(ObstructionError::InvalidArgument { n, target });
    }
    let complex = match kind {
        QueryKind::TotallyReal => determinantal_codimension(target, n, n - 1),
        QueryKind::Independent => determinantal_codimension(target, n, target - 1),
    };
    let codim_sigma = 2 * complex;
    Ok(TransversalityCheck {
        applies: n < codim_sigma,
        dim_m: n,
        codim_sigma,
    })
}

/// Inclusive range of target dimensions; `max = None` is unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NRange {
    pub min: u32,
    pub max: Option<u32>,
}

impl NRange {
    /// `[min, max]`, or `None` when empty.
    pub fn bounded(min: u32, max: u32) -> Option<NRange> {
        (min <= max).then_some(NRange {
            min,
            max: Some(max),
        })
    }

    pub fn from(min: u32) -> NRange {
        NRange { min, max: None }
    }

    pub fn contains(&self, n: u32) -> bool {
        n >= self.min && self.max.is_none_or(|m| n <= m)
    }
}

impl fmt::Display for NRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.max {
            None => write!(f, "N ≥ {}", self.min),
            Some(m) if m == self.min => write!(f, "N = {m}"),
            Some(m) if self.min <= 1 => write!(f, "N ≤ {m}"),
            Some(m) => write!(f, "{} ≤ N ≤ {}", self.min, m),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImpossibleReason {
    /// `N < n` (totally real) or `N > n` (independent).
    DimensionBound,
    ChernObstruction,
    FourManifoldClassification,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExistsReason {
    TransversalityThreshold,
    FourManifoldStrengthening,
}

impl ImpossibleReason {
    pub fn as_str(self) -> &'static str {
        match self {
            ImpossibleReason::DimensionBound => "dimension bound",
            ImpossibleReason::ChernObstruction => "Chern obstruction",
            ImpossibleReason::FourManifoldClassification => "4-manifold classification",
        }
    }
}

impl ExistsReason {
    pub fn as_str(self) -> &'static str {
        match self {
            ExistsReason::TransversalityThreshold => "transversality threshold",
            ExistsReason::FourManifoldStrengthening => "4-manifold strengthening",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    /// `c(Q)` for totally real queries, `c(B)` for independent ones.
    pub class: String,
    pub top_degree: u32,
    pub min_rank: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionReport {
    pub kind: QueryKind,
    pub manifold: String,
    pub dimension: u32,
    pub impossible: Option<(NRange, ImpossibleReason)>,
    pub exists: Option<(NRange, ExistsReason)>,
    pub unknown: Option<NRange>,
    pub witness: Option<Witness>,
    pub trace: Vec<String>,
}

impl ObstructionReport {
    pub fn verdict_at(&self, target: u32) -> Verdict {
        if self.impossible.is_some_and(|(r, _)| r.contains(target)) {
            Verdict::False
        } else if self.exists.is_some_and(|(r, _)| r.contains(target)) {
            Verdict::True
        } else {
            Verdict::Unknown
        }
    }
}

/// Least rank of a complement `Q` with `(C⊗TM) ⊕ Q` trivial allowed by
/// Chern classes: half the top degree of `c(C⊗TM)^{-1}`.
pub fn min_complement_rank(m: &ManifoldDescriptor) -> Result<u32, ObstructionError> {
    let c = m.chern_complexified()?;
    let dual = c.invert_unit().map_err(CatalogError::from)?;
    Ok(dual.top_nonzero_degree().unwrap_or(0).div_ceil(2))
}

/// Least rank of a kernel `B` with `C⊗TM ≅ Nε ⊕ B` allowed by Chern
/// classes: half the top degree of `c(C⊗TM)`.
pub fn min_kernel_rank(m: &ManifoldDescriptor) -> Result<u32, ObstructionError> {
    let c = m.chern_complexified()?;
    Ok(c.top_nonzero_degree().unwrap_or(0).div_ceil(2))
}

struct Bounds {
    /// Strongest non-existence bound and its source.
    impossible: Option<(u32, ImpossibleReason)>,
    exists: Option<(u32, ExistsReason)>,
}

pub fn obstruction_report(
    m: &ManifoldDescriptor,
    kind: QueryKind,
) -> Result<ObstructionReport, ObstructionError> {
    let n = m.dimension();
    let mut trace = Vec::new();

    let chern = if m.is_connected_sum() {
        None
    } else {
        m.chern_complexified().ok()
    };
    let classification = if n == 4 { Some(classify4(m)?) } else { None };
    if chern.is_none() && classification.is_none() {
        return Err(ObstructionError::NoDecisionRoute {
            manifold: m.canonical_name().to_string(),
            missing: "no integral Chern data, and the 4-manifold criteria do not apply".into(),
        });
    }

    let witness = match chern {
        Some(c) => {
            let (class, min_rank) = match kind {
                QueryKind::TotallyReal => (
                    c.invert_unit().map_err(CatalogError::from)?,
                    min_complement_rank(m)?,
                ),
                QueryKind::Independent => (c.clone(), min_kernel_rank(m)?),
            };
            let top_degree = class.top_nonzero_degree().unwrap_or(0);
            let label = match kind {
                QueryKind::TotallyReal => "c(Q) = c(C⊗TM)^-1",
                QueryKind::Independent => "c(B) = c(C⊗TM)",
            };
            trace.push(format!(
                "{label} = {class}; top degree {top_degree}, so rank ≥ {min_rank}"
            ));
            Some(Witness {
                class: class.to_string(),
                top_degree,
                min_rank,
            })
        }
        None => {
            trace.push("integral Chern data unavailable; using the 4-manifold criteria".into());
            None
        }
    };

    let mut bounds = Bounds {
        impossible: None,
        exists: None,
    };
    match kind {
        QueryKind::TotallyReal => {
            // Impossible for N ≤ bound; keep the largest bound.
            let mut impossible = |b: u32, why: ImpossibleReason| {
                if bounds.impossible.is_none_or(|(cur, _)| b > cur) {
                    bounds.impossible = Some((b, why));
                }
            };
            impossible(n - 1, ImpossibleReason::DimensionBound);
            if let Some(w) = &witness {
                impossible(n + w.min_rank - 1, ImpossibleReason::ChernObstruction);
            }
            if let Some(r) = &classification {
                if r.value(Condition::TotallyRealC5) == Verdict::False {
                    trace.push("no totally real immersion into C^5 (4-manifold criteria)".into());
                    impossible(5, ImpossibleReason::FourManifoldClassification);
                }
                if r.value(Condition::TotallyRealC4) == Verdict::False {
                    impossible(4, ImpossibleReason::FourManifoldClassification);
                }
            }
            let mut exists = |b: u32, why: ExistsReason| {
                if bounds.exists.is_none_or(|(cur, _)| b < cur) {
                    bounds.exists = Some((b, why));
                }
            };
            match existence_threshold(n, kind) {
                Ok(t) => exists(t, ExistsReason::TransversalityThreshold),
                Err(_) => trace.push(format!(
                    "existence threshold undefined for n = {n}; upper range left unknown"
                )),
            }
            if let Some(r) = &classification {
                if r.value(Condition::TotallyRealC5) == Verdict::True {
                    exists(5, ExistsReason::FourManifoldStrengthening);
                }
                if r.value(Condition::TotallyRealC4) == Verdict::True {
                    trace.push("C⊗TM trivial: totally real immersion into C^4".into());
                    exists(4, ExistsReason::FourManifoldStrengthening);
                }
            }
        }
        QueryKind::Independent => {
            // Impossible for N ≥ bound; keep the smallest bound.
            let mut impossible = |b: u32, why: ImpossibleReason| {
                if bounds.impossible.is_none_or(|(cur, _)| b < cur) {
                    bounds.impossible = Some((b, why));
                }
            };
            impossible(n + 1, ImpossibleReason::DimensionBound);
            if let Some(w) = &witness {
                impossible(n - w.min_rank + 1, ImpossibleReason::ChernObstruction);
            }
            if let Some(r) = &classification {
                if r.value(Condition::IndependentC3) == Verdict::False {
                    trace.push("no independent map into C^3 (4-manifold criteria)".into());
                    impossible(3, ImpossibleReason::FourManifoldClassification);
                }
                if r.value(Condition::IndependentC4) == Verdict::False {
                    impossible(4, ImpossibleReason::FourManifoldClassification);
                }
            }
            let mut exists = |b: u32, why: ExistsReason| {
                if bounds.exists.is_none_or(|(cur, _)| b > cur) {
                    bounds.exists = Some((b, why));
                }
            };
            exists(
                existence_threshold(n, kind)?,
                ExistsReason::TransversalityThreshold,
            );
            if let Some(r) = &classification {
                if r.value(Condition::IndependentC3) == Verdict::True {
                    exists(3, ExistsReason::FourManifoldStrengthening);
                }
                if r.value(Condition::IndependentC4) == Verdict::True {
                    trace.push("C⊗TM trivial: independent map into C^4".into());
                    exists(4, ExistsReason::FourManifoldStrengthening);
                }
            }
        }
    }

    let inconsistent = |detail: String| ObstructionError::Internal {
        manifold: m.canonical_name().to_string(),
        detail,
    };
    let (impossible, exists, unknown) = match kind {
        QueryKind::TotallyReal => {
            let imp = bounds
                .impossible
                .map(|(b, why)| (b, NRange::bounded(1, b), why));
            let hi = imp.as_ref().map_or(0, |(b, _, _)| *b);
            if let Some((e, _)) = bounds.exists {
                if e <= hi {
                    return Err(inconsistent(format!(
                        "existence from N = {e} but impossible up to N = {hi}"
                    )));
                }
            }
            let unknown = match bounds.exists {
                Some((e, _)) => NRange::bounded(hi + 1, e - 1),
                None => Some(NRange::from(hi + 1)),
            };
            (
                imp.and_then(|(_, r, why)| r.map(|r| (r, why))),
                bounds.exists.map(|(e, why)| (NRange::from(e), why)),
                unknown,
            )
        }
        QueryKind::Independent => {
            let (lo, why_imp) = bounds.impossible.expect("dimension bound always present");
            let (e, why_exists) = bounds.exists.expect("threshold always present");
            if e >= lo {
                return Err(inconsistent(format!(
                    "existence up to N = {e} but impossible from N = {lo}"
                )));
            }
            (
                Some((NRange::from(lo), why_imp)),
                NRange::bounded(1, e).map(|r| (r, why_exists)),
                NRange::bounded(e + 1, lo - 1),
            )
        }
    };

    if let Some((r, why)) = &impossible {
        trace.push(format!("impossible: {r} ({})", why.as_str()));
    }
    if let Some((r, why)) = &exists {
        trace.push(format!("exists: {r} ({})", why.as_str()));
    }
    if let Some(r) = &unknown {
        trace.push(format!("unknown: {r} (no rule decides these targets)"));
    }

    Ok(ObstructionReport {
        kind,
        manifold: m.canonical_name().to_string(),
        dimension: n,
        impossible,
        exists,
        unknown,
        witness,
        trace,
    })
}
