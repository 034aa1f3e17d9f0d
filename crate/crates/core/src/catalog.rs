//! Catalog manifolds and their characteristic classes.
//!
//! Primitives are the five families `CPn`, `RPn`, `Sn`, `Tn` and `Rn`.
//! Products concatenate the factors' cohomology presentations and multiply
//! the pulled-back total classes. Connected sums keep only the additive
//! characteristic numbers, which is all the four-dimensional decisions use.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::ring::{
    CoeffMode, Generator, GradedElement, ImageTable, Monomial, RingError, RingPresentation, Torsion,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unsupported manifold family `{0}` (expected CP, RP, S, T or R)")]
    UnsupportedFamily(String),
    #[error("{family}{n}: dimension index must be at least 1")]
    ZeroIndex { family: Family, n: u32 },
    #[error("connected sum needs closed summands, `{0}` is open")]
    OpenSummand(String),
    #[error("connected sum of `{left}` (dim {left_dim}) and `{right}` (dim {right_dim}): dimensions differ")]
    DimensionMismatch {
        left: String,
        left_dim: u32,
        right: String,
        right_dim: u32,
    },
    #[error("product with connected sum `{0}` is not supported")]
    ProductOfConnectedSum(String),
    #[error("{query} is not available for `{manifold}`: {reason}")]
    Unsupported {
        manifold: String,
        query: String,
        reason: String,
    },
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    CP,
    RP,
    S,
    T,
    R,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::CP, Family::RP, Family::S, Family::T, Family::R];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::CP => "CP",
            Family::RP => "RP",
            Family::S => "S",
            Family::T => "T",
            Family::R => "R",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| CatalogError::UnsupportedFamily(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Primitive {
    pub family: Family,
    pub n: u32,
}

impl Primitive {
    pub fn dimension(&self) -> u32 {
        match self.family {
            Family::CP => 2 * self.n,
            _ => self.n,
        }
    }

    pub fn orientable(&self) -> bool {
        self.family != Family::RP || self.n % 2 == 1
    }

    pub fn closed(&self) -> bool {
        self.family != Family::R
    }
}

impl fmt::Display for Primitive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ManifoldKind {
    Primitive(Primitive),
    Product(Box<ManifoldDescriptor>, Box<ManifoldDescriptor>),
    ConnectedSum(Box<ManifoldDescriptor>, Box<ManifoldDescriptor>),
}

/// Characteristic numbers of a closed connected 4-manifold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharNumbers4 {
    /// `<w2^2, [M]>` mod 2.
    pub w2_sq: bool,
    /// `<w̄2^2, [M]>` mod 2.
    pub dual_w2_sq: bool,
    /// `<p1, [M]>`, closed orientable manifolds with integral data only.
    pub p1_number: Option<BigInt>,
}

impl CharNumbers4 {
    /// Additive combination under connected sum.
    pub fn connected_sum(&self, other: &CharNumbers4) -> CharNumbers4 {
        CharNumbers4 {
            w2_sq: self.w2_sq ^ other.w2_sq,
            dual_w2_sq: self.dual_w2_sq ^ other.dual_w2_sq,
            p1_number: match (&self.p1_number, &other.p1_number) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralData {
    pub ring: Arc<RingPresentation>,
    pub c_complexified: GradedElement,
    pub mod2_images: ImageTable,
    /// Top-degree integral monomial, when the named generators reach it.
    pub fundamental: Option<Monomial>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingData {
    pub mod2_ring: Arc<RingPresentation>,
    pub w_total: GradedElement,
    pub integral: Option<IntegralData>,
    pub fundamental_mod2: Option<Monomial>,
    pub factors: Vec<Primitive>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum ClassData {
    Ring(RingData),
    Numbers(Option<CharNumbers4>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifoldDescriptor {
    kind: ManifoldKind,
    name: String,
    dimension: u32,
    orientable: bool,
    closed: bool,
    data: ClassData,
}

impl ManifoldDescriptor {
    pub fn primitive(family: Family, n: u32) -> Result<Self, CatalogError> {
        if n == 0 {
            return Err(CatalogError::ZeroIndex { family, n });
        }
        let p = Primitive { family, n };
        Ok(ManifoldDescriptor {
            kind: ManifoldKind::Primitive(p),
            name: p.to_string(),
            dimension: p.dimension(),
            orientable: p.orientable(),
            closed: p.closed(),
            data: ClassData::Ring(build_ring_data(&[p])?),
        })
    }

    /// Parses a family name such as `"CP"` and builds the primitive.
    pub fn primitive_named(family: &str, n: u32) -> Result<Self, CatalogError> {
        Self::primitive(family.parse()?, n)
    }

    pub fn product(a: &Self, b: &Self) -> Result<Self, CatalogError> {
        let (ra, rb) = match (&a.data, &b.data) {
            (ClassData::Ring(ra), ClassData::Ring(rb)) => (ra, rb),
            (ClassData::Numbers(_), _) => {
                return Err(CatalogError::ProductOfConnectedSum(a.name.clone()))
            }
            (_, ClassData::Numbers(_)) => {
                return Err(CatalogError::ProductOfConnectedSum(b.name.clone()))
            }
        };
        let factors: Vec<Primitive> = ra.factors.iter().chain(&rb.factors).copied().collect();
        let name = factors
            .iter()
            .map(Primitive::to_string)
            .collect::<Vec<_>>()
            .join("*");
        Ok(ManifoldDescriptor {
            kind: ManifoldKind::Product(Box::new(a.clone()), Box::new(b.clone())),
            name,
            dimension: a.dimension + b.dimension,
            orientable: a.orientable && b.orientable,
            closed: a.closed && b.closed,
            data: ClassData::Ring(build_ring_data(&factors)?),
        })
    }

    pub fn connected_sum(a: &Self, b: &Self) -> Result<Self, CatalogError> {
        for m in [a, b] {
            if !m.closed {
                return Err(CatalogError::OpenSummand(m.name.clone()));
            }
        }
        if a.dimension != b.dimension {
            return Err(CatalogError::DimensionMismatch {
                left: a.name.clone(),
                left_dim: a.dimension,
                right: b.name.clone(),
                right_dim: b.dimension,
            });
        }
        let numbers = if a.dimension == 4 {
            match (a.char_numbers4()?, b.char_numbers4()?) {
                (Some(x), Some(y)) => Some(x.connected_sum(&y)),
                _ => None,
            }
        } else {
            None
        };
        let right = if matches!(b.kind, ManifoldKind::ConnectedSum(..)) {
            format!("({})", b.name)
        } else {
            b.name.clone()
        };
        Ok(ManifoldDescriptor {
            kind: ManifoldKind::ConnectedSum(Box::new(a.clone()), Box::new(b.clone())),
            name: format!("{} # {}", a.name, right),
            dimension: a.dimension,
            orientable: a.orientable && b.orientable,
            closed: true,
            data: ClassData::Numbers(numbers),
        })
    }

    pub fn kind(&self) -> &ManifoldKind {
        &self.kind
    }

    pub fn canonical_name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn orientable(&self) -> bool {
        self.orientable
    }

    pub fn closed(&self) -> bool {
        self.closed
    }

    pub fn connected(&self) -> bool {
        true
    }

    pub fn is_connected_sum(&self) -> bool {
        matches!(self.kind, ManifoldKind::ConnectedSum(..))
    }

    fn unsupported(&self, query: &str, reason: &str) -> CatalogError {
        CatalogError::Unsupported {
            manifold: self.name.clone(),
            query: query.to_string(),
            reason: reason.to_string(),
        }
    }

    pub fn ring_data(&self) -> Result<&RingData, CatalogError> {
        match &self.data {
            ClassData::Ring(r) => Ok(r),
            ClassData::Numbers(_) => Err(self.unsupported(
                "ring-wise characteristic classes",
                "connected sums carry only characteristic numbers",
            )),
        }
    }

    /// Total Stiefel-Whitney class `w(M)`.
    pub fn sw_total(&self) -> Result<&GradedElement, CatalogError> {
        Ok(&self.ring_data()?.w_total)
    }

    /// Dual Stiefel-Whitney class `w̄(M) = w(M)^{-1}`.
    pub fn dual_sw_total(&self) -> Result<GradedElement, CatalogError> {
        Ok(self.sw_total()?.invert_unit()?)
    }

    pub fn integral_data(&self) -> Result<&IntegralData, CatalogError> {
        self.ring_data()?.integral.as_ref().ok_or_else(|| {
            self.unsupported(
                "integral Chern data",
                "no integral presentation is stored for this manifold",
            )
        })
    }

    /// Total Chern class of the complexified tangent bundle.
    pub fn chern_complexified(&self) -> Result<&GradedElement, CatalogError> {
        Ok(&self.integral_data()?.c_complexified)
    }

    /// Characteristic numbers; `None` unless the manifold is closed of
    /// dimension 4 (or when a connected-sum summand lacks them).
    pub fn char_numbers4(&self) -> Result<Option<CharNumbers4>, CatalogError> {
        if self.dimension != 4 || !self.closed {
            return Ok(None);
        }
        let data = match &self.data {
            ClassData::Numbers(n) => return Ok(n.clone()),
            ClassData::Ring(r) => r,
        };
        let fundamental = data.fundamental_mod2.as_ref().ok_or_else(|| {
            CatalogError::Internal(format!("{} lacks a fundamental class", self.name))
        })?;
        let w2 = data.w_total.component(2)?;
        let dual_w2 = data.w_total.invert_unit()?.component(2)?;
        let w2_sq = w2.mul(&w2)?.pair_fundamental(fundamental)?.is_one();
        let dual_w2_sq = dual_w2
            .mul(&dual_w2)?
            .pair_fundamental(fundamental)?
            .is_one();
        let p1_number = match (&data.integral, self.orientable) {
            (Some(int), true) => {
                // p1 = -c2(C ⊗ TM)
                let c2 = int.c_complexified.component(4)?;
                if c2.is_zero() {
                    Some(BigInt::zero())
                } else {
                    int.fundamental
                        .as_ref()
                        .map(|f| c2.pair_fundamental(f).map(|v| -v))
                        .transpose()?
                }
            }
            _ => None,
        };
        Ok(Some(CharNumbers4 {
            w2_sq,
            dual_w2_sq,
            p1_number,
        }))
    }
}

impl fmt::Display for ManifoldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

type ClassBuilder = Box<dyn Fn(&Arc<RingPresentation>) -> Result<GradedElement, RingError>>;

/// Cohomology data of one primitive in its own rings, before renaming.
struct LocalFactor {
    mod2_gens: Vec<(&'static str, u32, u32)>,
    w: ClassBuilder,
    fundamental: Option<Vec<u32>>,
    integral: Option<LocalIntegral>,
}

struct LocalIntegral {
    gens: Vec<(&'static str, u32, u32, Torsion)>,
    c: ClassBuilder,
    /// Per integral generator: image as mod-2 monomial exponents.
    images: Vec<Vec<u32>>,
    fundamental: Option<Vec<u32>>,
}

fn local_factor(p: Primitive) -> LocalFactor {
    let n = p.n;
    match p.family {
        Family::CP => LocalFactor {
            mod2_gens: vec![("a", 2, n + 1)],
            // w = (1 + a)^{n+1}
            w: Box::new(move |r| Ok(r.one().add(&r.generator("a")?)?.pow(n + 1))),
            fundamental: Some(vec![n]),
            integral: Some(LocalIntegral {
                gens: vec![("a", 2, n + 1, Torsion::Free)],
                // c(C ⊗ T) = c(T^{1,0}) c(conj T^{1,0}) = (1 + a)^{n+1} (1 - a)^{n+1}
                c: Box::new(move |r| {
                    let a = r.generator("a")?;
                    Ok(r.one().sub(&a.pow(2))?.pow(n + 1))
                }),
                images: vec![vec![1]],
                fundamental: Some(vec![n]),
            }),
        },
        Family::RP => LocalFactor {
            mod2_gens: vec![("x", 1, n + 1)],
            w: Box::new(move |r| Ok(r.one().add(&r.generator("x")?)?.pow(n + 1))),
            fundamental: Some(vec![n]),
            integral: match n {
                1 => Some(LocalIntegral {
                    gens: vec![],
                    c: Box::new(|r| Ok(r.one())),
                    images: vec![],
                    fundamental: None,
                }),
                // b = c1 of the complexified tautological bundle, 2b = 0;
                // C ⊗ T RP2 ⊕ C ≅ 3 (C ⊗ λ), so c = (1 + b)^3 = 1 + 3b.
                2 => Some(LocalIntegral {
                    gens: vec![("b", 2, 2, Torsion::Two)],
                    c: Box::new(|r| Ok(r.one().add(&r.generator("b")?)?.pow(3))),
                    images: vec![vec![2]],
                    fundamental: None,
                }),
                _ => None,
            },
        },
        Family::S => LocalFactor {
            mod2_gens: vec![("s", n, 2)],
            w: Box::new(|r| Ok(r.one())),
            fundamental: Some(vec![1]),
            integral: Some(trivial_integral()),
        },
        Family::T => LocalFactor {
            mod2_gens: vec![("t", 1, 2); n as usize],
            w: Box::new(|r| Ok(r.one())),
            fundamental: Some(vec![1; n as usize]),
            integral: Some(trivial_integral()),
        },
        Family::R => LocalFactor {
            mod2_gens: vec![],
            w: Box::new(|r| Ok(r.one())),
            fundamental: None,
            integral: Some(trivial_integral()),
        },
    }
}

fn trivial_integral() -> LocalIntegral {
    LocalIntegral {
        gens: vec![],
        c: Box::new(|r| Ok(r.one())),
        images: vec![],
        fundamental: None,
    }
}

/// Appends an occurrence index to every base name used more than once.
fn rename(bases: &[&str]) -> Vec<String> {
    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
    bases
        .iter()
        .map(|b| {
            let total = bases.iter().filter(|c| *c == b).count();
            let k = seen.entry(b).or_insert(0);
            *k += 1;
            if total > 1 {
                format!("{b}{k}")
            } else {
                b.to_string()
            }
        })
        .collect()
}

/// Copies `elem` into `target`, shifting exponents to start at `offset`.
fn embed(
    elem: &GradedElement,
    target: &Arc<RingPresentation>,
    offset: usize,
) -> Result<GradedElement, RingError> {
    let width = target.generators().len();
    GradedElement::from_terms(
        target,
        elem.terms().map(|(m, c)| {
            let mut exps = vec![0; width];
            exps[offset..offset + m.exponents().len()].copy_from_slice(m.exponents());
            (
                target.monomial(&exps).expect("embedded monomial is valid"),
                c.clone(),
            )
        }),
    )
}

fn build_ring_data(factors: &[Primitive]) -> Result<RingData, CatalogError> {
    let locals: Vec<LocalFactor> = factors.iter().map(|&p| local_factor(p)).collect();
    let dimension: u32 = factors.iter().map(Primitive::dimension).sum();

    let mod2_bases: Vec<&str> = locals
        .iter()
        .flat_map(|l| l.mod2_gens.iter().map(|g| g.0))
        .collect();
    let mod2_names = rename(&mod2_bases);
    let mod2_gens: Vec<Generator> = locals
        .iter()
        .flat_map(|l| l.mod2_gens.iter())
        .zip(&mod2_names)
        .map(|(&(_, deg, nilp), name)| Generator::free(name.clone(), deg, nilp))
        .collect();
    let mod2_ring = RingPresentation::new(mod2_gens, dimension, CoeffMode::Mod2)
        .map_err(|e| CatalogError::Internal(e.to_string()))?;

    let mut w_total = mod2_ring.one();
    let mut mod2_offsets = Vec::with_capacity(locals.len());
    let mut offset = 0;
    for (p, l) in factors.iter().zip(&locals) {
        let local_names = rename(&l.mod2_gens.iter().map(|g| g.0).collect::<Vec<_>>());
        let local_ring = RingPresentation::new(
            l.mod2_gens
                .iter()
                .zip(local_names)
                .map(|(&(_, d, e), name)| Generator::free(name, d, e))
                .collect(),
            p.dimension(),
            CoeffMode::Mod2,
        )?;
        let w_local = (l.w)(&local_ring)?;
        w_total = w_total.mul(&embed(&w_local, &mod2_ring, offset)?)?;
        mod2_offsets.push(offset);
        offset += l.mod2_gens.len();
    }

    let fundamental_mod2 = locals
        .iter()
        .map(|l| l.fundamental.clone())
        .collect::<Option<Vec<_>>>()
        .map(|parts| mod2_ring.monomial(&parts.concat()))
        .transpose()?;

    let integral = if locals.iter().all(|l| l.integral.is_some()) {
        let ints: Vec<&LocalIntegral> = locals.iter().filter_map(|l| l.integral.as_ref()).collect();
        let bases: Vec<&str> = ints
            .iter()
            .flat_map(|i| i.gens.iter().map(|g| g.0))
            .collect();
        let names = rename(&bases);
        let gens: Vec<Generator> = ints
            .iter()
            .flat_map(|i| i.gens.iter())
            .zip(&names)
            .map(|(&(_, d, e, t), name)| Generator::new(name.clone(), d, e, t))
            .collect();
        let ring = RingPresentation::new(gens, dimension, CoeffMode::Integer)
            .map_err(|e| CatalogError::Internal(e.to_string()))?;

        let mut c = ring.one();
        let mut images = BTreeMap::new();
        let mut int_offset = 0;
        let mut name_iter = names.iter();
        for ((p, int), &m2_off) in factors.iter().zip(&ints).zip(&mod2_offsets) {
            let local_ring = RingPresentation::new(
                int.gens
                    .iter()
                    .map(|&(b, d, e, t)| Generator::new(b, d, e, t))
                    .collect(),
                p.dimension(),
                CoeffMode::Integer,
            )?;
            c = c.mul(&embed(&(int.c)(&local_ring)?, &ring, int_offset)?)?;
            for image in &int.images {
                let mut exps = vec![0; mod2_ring.generators().len()];
                exps[m2_off..m2_off + image.len()].copy_from_slice(image);
                let elem = GradedElement::from_terms(
                    &mod2_ring,
                    [(mod2_ring.monomial(&exps)?, BigInt::one())],
                )?;
                let name = name_iter.next().expect("one name per generator");
                images.insert(name.clone(), elem);
            }
            int_offset += int.gens.len();
        }
        let mod2_images = ImageTable::new(&ring, &mod2_ring, &images)?;

        let fundamental = ints
            .iter()
            .map(|i| i.fundamental.clone())
            .collect::<Option<Vec<_>>>()
            .map(|parts| ring.monomial(&parts.concat()))
            .transpose()?
            .filter(|m| ring.degree_of(m) == dimension);

        // Complexification bridge: c(C ⊗ TM) reduces to w(M)^2 mod 2.
        let w_sq = w_total.mul(&w_total)?;
        if c.reduce_mod2(&mod2_images)? != w_sq {
            return Err(CatalogError::Internal(format!(
                "c(C⊗TM) = {c} does not reduce to w^2 = {w_sq}"
            )));
        }
        Some(IntegralData {
            ring,
            c_complexified: c,
            mod2_images,
            fundamental,
        })
    } else {
        None
    };

    Ok(RingData {
        mod2_ring,
        w_total,
        integral,
        fundamental_mod2,
        factors: factors.to_vec(),
    })
}
