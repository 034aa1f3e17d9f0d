//! Seven-condition classification of four-manifolds.
//!
//! The engine only applies proven implications between the conditions;
//! anything they do not settle is reported as [`Verdict::Unknown`] with a
//! trace line naming what was missing.

use std::fmt;

use thiserror::Error;

use crate::catalog::{CatalogError, ManifoldDescriptor};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("`{manifold}` has dimension {dimension}; the classification is for 4-manifolds only")]
    NotFourDimensional { manifold: String, dimension: u32 },
    #[error("classification invariant violated for `{manifold}`: {detail}")]
    Internal { manifold: String, detail: String },
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    True,
    False,
    Unknown,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::True => "true",
            Verdict::False => "false",
            Verdict::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriState {
    pub value: Verdict,
    pub reason: String,
}

impl TriState {
    fn new(value: Verdict, reason: impl Into<String>) -> Self {
        TriState {
            value,
            reason: reason.into(),
        }
    }
}

/// The seven conditions, in their conventional order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Condition {
    TotallyRealC5 = 1,
    TotallyRealC4 = 2,
    IndependentC3 = 3,
    IndependentC4 = 4,
    ComplexifiedTangentTrivial = 5,
    DualPontryaginVanishes = 6,
    PontryaginVanishes = 7,
}

impl Condition {
    pub const ALL: [Condition; 7] = [
        Condition::TotallyRealC5,
        Condition::TotallyRealC4,
        Condition::IndependentC3,
        Condition::IndependentC4,
        Condition::ComplexifiedTangentTrivial,
        Condition::DualPontryaginVanishes,
        Condition::PontryaginVanishes,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn description(self) -> &'static str {
        match self {
            Condition::TotallyRealC5 => "totally real immersion into C^5",
            Condition::TotallyRealC4 => "totally real immersion into C^4",
            Condition::IndependentC3 => "independent map into C^3",
            Condition::IndependentC4 => "independent map into C^4",
            Condition::ComplexifiedTangentTrivial => "C⊗TM is trivial",
            Condition::DualPontryaginVanishes => "dual Pontryagin class p̄1 vanishes",
            Condition::PontryaginVanishes => "Pontryagin class p1 vanishes",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classify4Report {
    pub manifold: String,
    pub conditions: [TriState; 7],
    pub trace: Vec<String>,
}

impl Classify4Report {
    pub fn get(&self, c: Condition) -> &TriState {
        &self.conditions[c.index() - 1]
    }

    pub fn value(&self, c: Condition) -> Verdict {
        self.get(c).value
    }

    /// Structural invariants every report must satisfy.
    pub fn check_invariants(&self, orientable: bool) -> Result<(), String> {
        use Condition::*;
        let v = |c| self.value(c);
        if v(TotallyRealC4) != v(IndependentC4) || v(IndependentC4) != v(ComplexifiedTangentTrivial)
        {
            return Err("conditions (2), (4), (5) disagree".into());
        }
        if v(TotallyRealC5) != v(DualPontryaginVanishes) {
            return Err("conditions (1) and (6) disagree".into());
        }
        if v(IndependentC3) != v(PontryaginVanishes) {
            return Err("conditions (3) and (7) disagree".into());
        }
        if v(ComplexifiedTangentTrivial) == Verdict::True
            && Condition::ALL.iter().any(|&c| v(c) != Verdict::True)
        {
            return Err("(5) holds but some condition does not".into());
        }
        if orientable
            && Condition::ALL
                .iter()
                .any(|&c| v(c) != v(PontryaginVanishes))
        {
            return Err("orientable manifold with unequal conditions".into());
        }
        Ok(())
    }
}

fn require_dim4(m: &ManifoldDescriptor) -> Result<(), ClassifyError> {
    if m.dimension() != 4 {
        return Err(ClassifyError::NotFourDimensional {
            manifold: m.canonical_name().to_string(),
            dimension: m.dimension(),
        });
    }
    Ok(())
}

/// Does `p1(M)` vanish?
pub fn pontryagin_vanishes(m: &ManifoldDescriptor) -> Result<TriState, ClassifyError> {
    require_dim4(m)?;
    if !m.closed() {
        return Ok(TriState::new(
            Verdict::True,
            "open 4-manifold: H^4(M;Z) = 0, so p1 = 0",
        ));
    }
    if m.orientable() {
        if !m.is_connected_sum() {
            if let Ok(c) = m.chern_complexified() {
                let c2 = c.component(4).map_err(CatalogError::from)?;
                return Ok(TriState::new(
                    Verdict::from_bool(c2.is_zero()),
                    format!("p1 = -c2(C⊗TM), c2(C⊗TM) = {c2}"),
                ));
            }
        }
        return Ok(match m.char_numbers4()?.and_then(|n| n.p1_number) {
            Some(p) => TriState::new(
                Verdict::from_bool(p == 0.into()),
                format!("closed orientable: <p1, [M]> = {p}"),
            ),
            None => TriState::new(
                Verdict::Unknown,
                "closed orientable without integral Chern data: p1 not computable",
            ),
        });
    }
    Ok(match m.char_numbers4()? {
        Some(n) => TriState::new(
            Verdict::from_bool(!n.w2_sq),
            format!(
                "closed non-orientable: H^4(M;Z) = Z/2 and p1 reduces to w2^2, <w2^2, [M]> = {}",
                u8::from(n.w2_sq)
            ),
        ),
        None => TriState::new(Verdict::Unknown, "characteristic numbers unavailable"),
    })
}

/// Does the dual Pontryagin class `p̄1(M)` vanish?
pub fn dual_pontryagin_vanishes(m: &ManifoldDescriptor) -> Result<TriState, ClassifyError> {
    require_dim4(m)?;
    if !m.closed() {
        return Ok(TriState::new(
            Verdict::True,
            "open 4-manifold: H^4(M;Z) = 0, so p̄1 = 0",
        ));
    }
    if m.orientable() {
        let p = pontryagin_vanishes(m)?;
        return Ok(TriState::new(
            p.value,
            format!("closed orientable: p̄1 = -p1 ({})", p.reason),
        ));
    }
    Ok(match m.char_numbers4()? {
        Some(n) => TriState::new(
            Verdict::from_bool(!n.dual_w2_sq),
            format!(
                "closed non-orientable: p̄1 reduces to w̄2^2, <w̄2^2, [M]> = {}",
                u8::from(n.dual_w2_sq)
            ),
        ),
        None => TriState::new(Verdict::Unknown, "characteristic numbers unavailable"),
    })
}

/// Classifies a four-manifold against the seven conditions.
pub fn classify4(m: &ManifoldDescriptor) -> Result<Classify4Report, ClassifyError> {
    require_dim4(m)?;
    let mut trace = Vec::new();

    let dual = dual_pontryagin_vanishes(m)?;
    trace.push(format!("(6) {}: {}", dual.value, dual.reason));
    let pont = pontryagin_vanishes(m)?;
    trace.push(format!("(7) {}: {}", pont.value, pont.reason));

    let tr5 = TriState::new(
        dual.value,
        "totally real immersion into C^5 exists iff p̄1 vanishes",
    );
    trace.push(format!("(1) {} from (6)", tr5.value));
    let ind3 = TriState::new(
        pont.value,
        "independent map into C^3 exists iff p1 vanishes",
    );
    trace.push(format!("(3) {} from (7)", ind3.value));

    let trivial = if m.orientable() {
        let reason = match pont.value {
            Verdict::True => "orientable: c1(C⊗TM) = 0 and p1 = 0 make C⊗TM trivial",
            Verdict::False => "orientable: p1 ≠ 0 obstructs triviality of C⊗TM",
            Verdict::Unknown => {
                "orientable: all seven conditions are equivalent, but p1 is undecided"
            }
        };
        trace.push(format!(
            "(2)(4)(5) {} from (7): all conditions equivalent",
            pont.value
        ));
        TriState::new(pont.value, reason)
    } else {
        let c1 = match (m.is_connected_sum(), m.chern_complexified()) {
            (false, Ok(c)) => Some(c.component(2).map_err(CatalogError::from)?),
            _ => None,
        };
        match c1 {
            Some(c1) if !c1.is_zero() => {
                trace.push(format!("(2)(4)(5) false: c1(C⊗TM) = {c1} ≠ 0"));
                TriState::new(
                    Verdict::False,
                    format!("c1(C⊗TM) = {c1} ≠ 0, so C⊗TM is not trivial"),
                )
            }
            _ if tr5.value == Verdict::False || ind3.value == Verdict::False => {
                trace.push("(2)(4)(5) false: they imply (1) and (3), one of which fails".into());
                TriState::new(
                    Verdict::False,
                    "C⊗TM trivial would imply (1) and (3), one of which fails",
                )
            }
            Some(_) => {
                trace.push(
                    "(2)(4)(5) unknown: non-orientable with c1(C⊗TM) = 0 and (1), (3) not false"
                        .into(),
                );
                TriState::new(
                    Verdict::Unknown,
                    "closed non-orientable with c1(C⊗TM) = 0: no rule decides triviality",
                )
            }
            None => {
                trace.push("(2)(4)(5) unknown: no integral data to test c1(C⊗TM)".into());
                TriState::new(
                    Verdict::Unknown,
                    "c1(C⊗TM) unavailable and (1), (3) do not rule out triviality",
                )
            }
        }
    };

    let conditions = [
        tr5,
        TriState::new(
            trivial.value,
            format!("equivalent to (5): {}", trivial.reason),
        ),
        ind3,
        TriState::new(
            trivial.value,
            format!("equivalent to (5): {}", trivial.reason),
        ),
        trivial,
        dual,
        pont,
    ];
    let report = Classify4Report {
        manifold: m.canonical_name().to_string(),
        conditions,
        trace,
    };
    report
        .check_invariants(m.orientable())
        .map_err(|detail| ClassifyError::Internal {
            manifold: m.canonical_name().to_string(),
            detail,
        })?;
    Ok(report)
}
