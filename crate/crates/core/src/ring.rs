//! Truncated graded-commutative rings with exact coefficients.
//!
//! A [`RingPresentation`] lists nilpotent generators of positive degree,
//! a truncation degree above which every class vanishes, and a coefficient
//! mode. Elements are sparse maps from [`Monomial`] to nonzero integers.
//!
//! Two coefficient regimes are supported:
//!
//! * [`CoeffMode::Mod2`]: every coefficient lives in `Z/2`.
//! * [`CoeffMode::Integer`]: arbitrary-precision integers, except that a
//!   monomial containing a generator marked [`Torsion::Two`] has additive
//!   order two, so its coefficient is stored reduced mod 2.
//!
//! All generators commute. Only even-degree generators carry integral
//! characteristic classes, so no sign rule is needed.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("generator `{name}`: {reason}")]
    InvalidGenerator { name: String, reason: String },
    #[error("elements belong to different ring presentations")]
    PresentationMismatch,
    #[error("element with constant term {0} is not a unit")]
    NotAUnit(BigInt),
    #[error("degree {degree} outside 0..={truncation}")]
    DegreeOutOfRange { degree: u32, truncation: u32 },
    #[error("monomial has {found} exponents, ring has {expected} generators")]
    MonomialShape { expected: usize, found: usize },
    #[error("monomial exponent {exponent} of `{generator}` reaches nilpotence {nilpotence}")]
    ExponentTooLarge {
        generator: String,
        exponent: u32,
        nilpotence: u32,
    },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("no image given for generator `{0}`")]
    MissingImage(String),
    #[error("image of `{generator}` must be homogeneous of degree {expected}")]
    ImageDegreeMismatch { generator: String, expected: u32 },
    #[error("image of `{generator}` does not satisfy its nilpotence relation")]
    ImageNotNilpotent { generator: String },
    #[error("expected a {expected} ring, found a {found} ring")]
    WrongMode {
        expected: CoeffMode,
        found: CoeffMode,
    },
    #[error("fundamental monomial has degree {degree}, truncation is {truncation}")]
    FundamentalDegree { degree: u32, truncation: u32 },
}

/// Additive order of classes divisible by a generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Torsion {
    Free,
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoeffMode {
    Integer,
    Mod2,
}

impl fmt::Display for CoeffMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffMode::Integer => f.write_str("integral"),
            CoeffMode::Mod2 => f.write_str("mod 2"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
    /// Least `e` with `g^e = 0`.
    pub nilpotence: u32,
    pub torsion: Torsion,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: u32, nilpotence: u32, torsion: Torsion) -> Self {
        Generator {
            name: name.into(),
            degree,
            nilpotence,
            torsion,
        }
    }

    pub fn free(name: impl Into<String>, degree: u32, nilpotence: u32) -> Self {
        Self::new(name, degree, nilpotence, Torsion::Free)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingPresentation {
    generators: Vec<Generator>,
    truncation: u32,
    mode: CoeffMode,
}

impl RingPresentation {
    pub fn new(
        generators: Vec<Generator>,
        truncation: u32,
        mode: CoeffMode,
    ) -> Result<Arc<Self>, RingError> {
        for (i, g) in generators.iter().enumerate() {
            if g.degree == 0 {
                return Err(RingError::InvalidGenerator {
                    name: g.name.clone(),
                    reason: "degree must be at least 1".into(),
                });
            }
            if g.nilpotence == 0 {
                return Err(RingError::InvalidGenerator {
                    name: g.name.clone(),
                    reason: "nilpotence must be at least 1".into(),
                });
            }
            if generators[..i].iter().any(|h| h.name == g.name) {
                return Err(RingError::DuplicateGenerator(g.name.clone()));
            }
        }
        Ok(Arc::new(RingPresentation {
            generators,
            truncation,
            mode,
        }))
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn mode(&self) -> CoeffMode {
        self.mode
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// Validates raw exponents against the nilpotence and truncation bounds.
    pub fn monomial(&self, exponents: &[u32]) -> Result<Monomial, RingError> {
        if exponents.len() != self.generators.len() {
            return Err(RingError::MonomialShape {
                expected: self.generators.len(),
                found: exponents.len(),
            });
        }
        for (g, &e) in self.generators.iter().zip(exponents) {
            if e >= g.nilpotence {
                return Err(RingError::ExponentTooLarge {
                    generator: g.name.clone(),
                    exponent: e,
                    nilpotence: g.nilpotence,
                });
            }
        }
        let m = Monomial(exponents.to_vec());
        let degree = self.degree_of(&m);
        if degree > self.truncation {
            return Err(RingError::DegreeOutOfRange {
                degree,
                truncation: self.truncation,
            });
        }
        Ok(m)
    }

    pub fn unit_monomial(&self) -> Monomial {
        Monomial(vec![0; self.generators.len()])
    }

    pub fn degree_of(&self, m: &Monomial) -> u32 {
        m.0.iter()
            .zip(&self.generators)
            .map(|(e, g)| e * g.degree)
            .sum()
    }

    fn survives(&self, m: &Monomial) -> bool {
        m.0.iter()
            .zip(&self.generators)
            .all(|(e, g)| *e < g.nilpotence)
            && self.degree_of(m) <= self.truncation
    }

    fn is_torsion(&self, m: &Monomial) -> bool {
        m.0.iter()
            .zip(&self.generators)
            .any(|(e, g)| *e > 0 && g.torsion == Torsion::Two)
    }

    fn normalize(&self, m: &Monomial, c: BigInt) -> BigInt {
        match self.mode {
            CoeffMode::Mod2 => c.mod_floor(&BigInt::from(2)),
            CoeffMode::Integer if self.is_torsion(m) => c.mod_floor(&BigInt::from(2)),
            CoeffMode::Integer => c,
        }
    }

    pub fn zero(self: &Arc<Self>) -> GradedElement {
        GradedElement {
            ring: Arc::clone(self),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(self: &Arc<Self>) -> GradedElement {
        self.constant(1)
    }

    pub fn constant(self: &Arc<Self>, c: i64) -> GradedElement {
        GradedElement::from_terms(self, [(self.unit_monomial(), BigInt::from(c))])
            .expect("unit monomial always has the right shape")
    }

    pub fn generator(self: &Arc<Self>, name: &str) -> Result<GradedElement, RingError> {
        let idx = self
            .generator_index(name)
            .ok_or_else(|| RingError::UnknownGenerator(name.to_string()))?;
        let mut exps = vec![0; self.generators.len()];
        exps[idx] = 1;
        GradedElement::from_terms(self, [(Monomial(exps), BigInt::one())])
    }

    fn same(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || **self == **other
    }
}

/// Exponent vector aligned with a presentation's generator list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn times(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// A class in a truncated graded ring: a sparse sum of monomials with
/// nonzero normalized coefficients.
#[derive(Debug, Clone)]
pub struct GradedElement {
    ring: Arc<RingPresentation>,
    terms: BTreeMap<Monomial, BigInt>,
}

impl PartialEq for GradedElement {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same(&other.ring) && self.terms == other.terms
    }
}

impl Eq for GradedElement {}

impl GradedElement {
    /// Builds an element from raw terms. Monomials that vanish in the ring
    /// are dropped; coefficients are summed and normalized.
    pub fn from_terms<I>(ring: &Arc<RingPresentation>, terms: I) -> Result<Self, RingError>
    where
        I: IntoIterator<Item = (Monomial, BigInt)>,
    {
        let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m, c) in terms {
            if m.0.len() != ring.generators.len() {
                return Err(RingError::MonomialShape {
                    expected: ring.generators.len(),
                    found: m.0.len(),
                });
            }
            if ring.survives(&m) {
                *acc.entry(m).or_insert_with(BigInt::zero) += c;
            }
        }
        Ok(Self::normalized(ring, acc))
    }

    fn normalized(ring: &Arc<RingPresentation>, raw: BTreeMap<Monomial, BigInt>) -> Self {
        let terms = raw
            .into_iter()
            .filter_map(|(m, c)| {
                let c = ring.normalize(&m, c);
                (!c.is_zero()).then_some((m, c))
            })
            .collect();
        GradedElement {
            ring: Arc::clone(ring),
            terms,
        }
    }

    pub fn ring(&self) -> &Arc<RingPresentation> {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term().is_one()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coefficient(&self.ring.unit_monomial())
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    fn check_same(&self, other: &Self) -> Result<(), RingError> {
        if self.ring.same(&other.ring) {
            Ok(())
        } else {
            Err(RingError::PresentationMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, RingError> {
        self.check_same(other)?;
        let mut acc = self.terms.clone();
        for (m, c) in &other.terms {
            *acc.entry(m.clone()).or_insert_with(BigInt::zero) += c;
        }
        Ok(Self::normalized(&self.ring, acc))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, RingError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let acc = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        Self::normalized(&self.ring, acc)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let acc = self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect();
        Self::normalized(&self.ring, acc)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, RingError> {
        self.check_same(other)?;
        let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.times(m2);
                if self.ring.survives(&m) {
                    *acc.entry(m).or_insert_with(BigInt::zero) += c1 * c2;
                }
            }
        }
        Ok(Self::normalized(&self.ring, acc))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = self.ring.one();
        for _ in 0..k {
            out = out.mul(self).expect("same ring");
        }
        out
    }

    /// Multiplicative inverse of an element whose constant term is `±1`.
    ///
    /// Writes `u = c(1 + m)` with `m` nilpotent and sums the geometric
    /// series `c · Σ (-m)^k`, which stops once a power of `m` vanishes.
    pub fn invert_unit(&self) -> Result<Self, RingError> {
        let c = self.constant_term();
        if !(c.is_one() || (c == -BigInt::one() && self.ring.mode == CoeffMode::Integer)) {
            return Err(RingError::NotAUnit(c));
        }
        // u = c(1 + m), c = ±1, so m = c·u - 1 and u⁻¹ = c·Σ(-m)^k.
        let neg_m = self.ring.one().sub(&self.scale(&c)).expect("same ring");
        let mut sum = self.ring.one();
        let mut power = self.ring.one();
        for _ in 0..=self.ring.truncation {
            power = power.mul(&neg_m).expect("same ring");
            if power.is_zero() {
                break;
            }
            sum = sum.add(&power).expect("same ring");
        }
        Ok(sum.scale(&c))
    }

    /// Homogeneous part of degree `d`.
    pub fn component(&self, d: u32) -> Result<Self, RingError> {
        if d > self.ring.truncation {
            return Err(RingError::DegreeOutOfRange {
                degree: d,
                truncation: self.ring.truncation,
            });
        }
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| self.ring.degree_of(m) == d)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Ok(GradedElement {
            ring: Arc::clone(&self.ring),
            terms,
        })
    }

    pub fn top_nonzero_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| self.ring.degree_of(m)).max()
    }

    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.terms.keys().all(|m| self.ring.degree_of(m) == d)
    }

    /// Applies the mod-2 reduction homomorphism described by `table`.
    pub fn reduce_mod2(&self, table: &ImageTable) -> Result<Self, RingError> {
        if !self.ring.same(&table.source) {
            return Err(RingError::PresentationMismatch);
        }
        let mut out = table.target.zero();
        for (m, c) in &self.terms {
            if c.is_even() {
                continue;
            }
            let mut term = table.target.one();
            for (image, &e) in table.images.iter().zip(&m.0) {
                if e > 0 {
                    term = term.mul(&image.pow(e))?;
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Coefficient of the top-degree `fundamental` monomial: the
    /// characteristic number of this class.
    pub fn pair_fundamental(&self, fundamental: &Monomial) -> Result<BigInt, RingError> {
        if fundamental.0.len() != self.ring.generators.len() {
            return Err(RingError::MonomialShape {
                expected: self.ring.generators.len(),
                found: fundamental.0.len(),
            });
        }
        let degree = self.ring.degree_of(fundamental);
        if degree != self.ring.truncation {
            return Err(RingError::FundamentalDegree {
                degree,
                truncation: self.ring.truncation,
            });
        }
        Ok(self.coefficient(fundamental))
    }

    /// Terms in graded-lex order: ascending degree, then descending
    /// exponents along the generator list.
    pub fn ordered_terms(&self) -> Vec<(&Monomial, &BigInt)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| {
            self.ring
                .degree_of(a)
                .cmp(&self.ring.degree_of(b))
                .then_with(|| b.0.cmp(&a.0))
        });
        v
    }

    fn render_monomial(&self, m: &Monomial) -> String {
        m.0.iter()
            .zip(&self.ring.generators)
            .filter(|(e, _)| **e > 0)
            .map(|(e, g)| {
                if *e == 1 {
                    g.name.clone()
                } else {
                    format!("{}^{}", g.name, e)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl fmt::Display for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.ordered_terms().into_iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_unit() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                f.write_str(&self.render_monomial(m))?;
            } else {
                write!(f, "{abs}*{}", self.render_monomial(m))?;
            }
        }
        Ok(())
    }
}

/// Substitution data for the mod-2 reduction map from an integral ring
/// to a mod-2 ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageTable {
    source: Arc<RingPresentation>,
    target: Arc<RingPresentation>,
    images: Vec<GradedElement>,
}

impl ImageTable {
    pub fn new(
        source: &Arc<RingPresentation>,
        target: &Arc<RingPresentation>,
        images: &BTreeMap<String, GradedElement>,
    ) -> Result<Self, RingError> {
        if source.mode != CoeffMode::Integer {
            return Err(RingError::WrongMode {
                expected: CoeffMode::Integer,
                found: source.mode,
            });
        }
        if target.mode != CoeffMode::Mod2 {
            return Err(RingError::WrongMode {
                expected: CoeffMode::Mod2,
                found: target.mode,
            });
        }
        if let Some(name) = images.keys().find(|k| source.generator_index(k).is_none()) {
            return Err(RingError::UnknownGenerator(name.clone()));
        }
        let mut ordered = Vec::with_capacity(source.generators.len());
        for g in &source.generators {
            let image = images
                .get(&g.name)
                .ok_or_else(|| RingError::MissingImage(g.name.clone()))?;
            if !image.ring.same(target) {
                return Err(RingError::PresentationMismatch);
            }
            if !image.is_homogeneous_of(g.degree) {
                return Err(RingError::ImageDegreeMismatch {
                    generator: g.name.clone(),
                    expected: g.degree,
                });
            }
            if !image.pow(g.nilpotence).is_zero() {
                return Err(RingError::ImageNotNilpotent {
                    generator: g.name.clone(),
                });
            }
            ordered.push(image.clone());
        }
        Ok(ImageTable {
            source: Arc::clone(source),
            target: Arc::clone(target),
            images: ordered,
        })
    }

    pub fn source(&self) -> &Arc<RingPresentation> {
        &self.source
    }

    pub fn target(&self) -> &Arc<RingPresentation> {
        &self.target
    }

    pub fn image(&self, generator: usize) -> &GradedElement {
        &self.images[generator]
    }
}
