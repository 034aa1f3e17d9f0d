//! Shared strategies, a dense brute-force ring oracle, and the property
//! checks used by both the property suites and the acceptance target.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use totally_real::catalog::{Family, ManifoldDescriptor};
use totally_real::classify::{classify4, Condition, Verdict};
use totally_real::expr::ManifoldExpr;
use totally_real::ring::{
    CoeffMode, Generator, GradedElement, ImageTable, RingPresentation, Torsion,
};

#[derive(Debug, Clone)]
pub struct RingSpec {
    /// (degree, nilpotence, torsion-2)
    pub gens: Vec<(u32, u32, bool)>,
    pub truncation: u32,
    pub mode: CoeffMode,
}

impl RingSpec {
    pub fn build(&self) -> Arc<RingPresentation> {
        let gens = self
            .gens
            .iter()
            .enumerate()
            .map(|(i, &(d, e, t))| {
                Generator::new(
                    format!("g{i}"),
                    d,
                    e,
                    if t { Torsion::Two } else { Torsion::Free },
                )
            })
            .collect();
        RingPresentation::new(gens, self.truncation, self.mode).unwrap()
    }

    fn degree(&self, exps: &[u32]) -> u32 {
        exps.iter().zip(&self.gens).map(|(e, g)| e * g.0).sum()
    }

    /// Every exponent vector below the nilpotence bounds, in mixed-radix
    /// order (not filtered by truncation).
    pub fn boxes(&self) -> Vec<Vec<u32>> {
        let mut out = vec![vec![]];
        for &(_, nilp, _) in &self.gens {
            out = out
                .into_iter()
                .flat_map(|p| {
                    (0..nilp).map(move |e| {
                        let mut q = p.clone();
                        q.push(e);
                        q
                    })
                })
                .collect();
        }
        out
    }

    /// Monomials that survive truncation.
    pub fn monomials(&self) -> Vec<Vec<u32>> {
        self.boxes()
            .into_iter()
            .filter(|m| self.degree(m) <= self.truncation)
            .collect()
    }

    fn torsion(&self, exps: &[u32]) -> bool {
        exps.iter().zip(&self.gens).any(|(e, g)| *e > 0 && g.2)
    }

    pub fn element(&self, ring: &Arc<RingPresentation>, coeffs: &[i64]) -> GradedElement {
        let terms = self
            .monomials()
            .into_iter()
            .zip(coeffs)
            .map(|(m, &c)| (ring.monomial(&m).unwrap(), BigInt::from(c)));
        GradedElement::from_terms(ring, terms).unwrap()
    }
}

/// Dense brute-force model: full coefficient table over the exponent box.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    pub table: BTreeMap<Vec<u32>, i128>,
}

impl Dense {
    pub fn from_coeffs(spec: &RingSpec, coeffs: &[i64]) -> Dense {
        let mut table: BTreeMap<Vec<u32>, i128> =
            spec.boxes().into_iter().map(|m| (m, 0)).collect();
        for (m, &c) in spec.monomials().into_iter().zip(coeffs) {
            *table.get_mut(&m).unwrap() += c as i128;
        }
        Dense { table }.normalized(spec)
    }

    fn normalized(mut self, spec: &RingSpec) -> Dense {
        for (m, c) in self.table.iter_mut() {
            if spec.degree(m) > spec.truncation {
                *c = 0;
            } else if spec.mode == CoeffMode::Mod2 || spec.torsion(m) {
                *c = c.rem_euclid(2);
            }
        }
        self
    }

    pub fn add(&self, other: &Dense, spec: &RingSpec) -> Dense {
        let table = self
            .table
            .iter()
            .map(|(m, c)| (m.clone(), c + other.table[m]))
            .collect();
        Dense { table }.normalized(spec)
    }

    /// Schoolbook product over every pair of cells.
    pub fn mul(&self, other: &Dense, spec: &RingSpec) -> Dense {
        let mut table: BTreeMap<Vec<u32>, i128> =
            self.table.keys().map(|m| (m.clone(), 0)).collect();
        for (m1, c1) in &self.table {
            for (m2, c2) in &other.table {
                let m: Vec<u32> = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                if let Some(slot) = table.get_mut(&m) {
                    *slot += c1 * c2;
                }
            }
        }
        Dense { table }.normalized(spec)
    }

    pub fn nonzero(&self) -> BTreeMap<Vec<u32>, i128> {
        self.table
            .iter()
            .filter(|(_, c)| **c != 0)
            .map(|(m, c)| (m.clone(), *c))
            .collect()
    }
}

pub fn sparse_map(u: &GradedElement) -> BTreeMap<Vec<u32>, i128> {
    u.terms()
        .map(|(m, c)| (m.exponents().to_vec(), c.to_i128().unwrap()))
        .collect()
}

pub fn ring_spec() -> impl Strategy<Value = RingSpec> {
    (
        prop::collection::vec((1u32..=3, 1u32..=4, prop::bool::weighted(0.25)), 0..=4),
        0u32..=8,
        prop::bool::ANY,
    )
        .prop_map(|(gens, truncation, mod2)| RingSpec {
            gens,
            truncation,
            mode: if mod2 {
                CoeffMode::Mod2
            } else {
                CoeffMode::Integer
            },
        })
}

fn sparse_coeffs(len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(prop_oneof![3 => Just(0i64), 2 => -3i64..=3], len)
}

pub fn ring_with(k: usize) -> impl Strategy<Value = (RingSpec, Vec<Vec<i64>>)> {
    ring_spec().prop_flat_map(move |spec| {
        let len = spec.monomials().len();
        (Just(spec), prop::collection::vec(sparse_coeffs(len), k))
    })
}

pub fn check_ring_laws(spec: &RingSpec, coeffs: &[Vec<i64>]) -> Result<(), TestCaseError> {
    let ring = spec.build();
    let [a, b, c] = [0, 1, 2].map(|i| spec.element(&ring, &coeffs[i]));
    let [da, db, dc] = [0, 1, 2].map(|i| Dense::from_coeffs(spec, &coeffs[i]));

    prop_assert_eq!(sparse_map(&a), da.nonzero());
    prop_assert_eq!(sparse_map(&a.mul(&b).unwrap()), da.mul(&db, spec).nonzero());
    prop_assert_eq!(sparse_map(&a.add(&b).unwrap()), da.add(&db, spec).nonzero());

    let ab_c = a.mul(&b).unwrap().mul(&c).unwrap();
    let a_bc = a.mul(&b.mul(&c).unwrap()).unwrap();
    prop_assert_eq!(&ab_c, &a_bc);
    prop_assert_eq!(
        sparse_map(&ab_c),
        da.mul(&db, spec).mul(&dc, spec).nonzero()
    );
    prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
    let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
    let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
    prop_assert_eq!(&lhs, &rhs);
    prop_assert_eq!(sparse_map(&lhs), da.mul(&db.add(&dc, spec), spec).nonzero());
    Ok(())
}

pub fn check_grading(spec: &RingSpec, coeffs: &[Vec<i64>]) -> Result<(), TestCaseError> {
    let ring = spec.build();
    let a = spec.element(&ring, &coeffs[0]);
    let b = spec.element(&ring, &coeffs[1]);
    let ab = a.mul(&b).unwrap();
    for d in 0..=spec.truncation {
        let mut sum = ring.zero();
        for i in 0..=d {
            let part = a
                .component(i)
                .unwrap()
                .mul(&b.component(d - i).unwrap())
                .unwrap();
            sum = sum.add(&part).unwrap();
        }
        prop_assert_eq!(ab.component(d).unwrap(), sum);
    }
    Ok(())
}

/// Forces the constant term to `sign` and checks `u · u⁻¹ = 1`.
pub fn check_inversion(
    spec: &RingSpec,
    coeffs: &[i64],
    negative: bool,
) -> Result<(), TestCaseError> {
    let ring = spec.build();
    let mut coeffs = coeffs.to_vec();
    let sign = if negative && spec.mode == CoeffMode::Integer {
        -1
    } else {
        1
    };
    if let Some(c) = coeffs.first_mut() {
        *c = sign;
    } else {
        coeffs.push(sign);
    }
    let u = spec.element(&ring, &coeffs);
    let inv = u.invert_unit().unwrap();
    prop_assert!(
        u.mul(&inv).unwrap().is_one(),
        "u = {}, inverse = {}",
        u,
        inv
    );
    prop_assert!(inv.mul(&u).unwrap().is_one());
    Ok(())
}

/// Random integral ring mapped onto a mod-2 copy of itself.
pub fn check_homomorphism(spec: &RingSpec, coeffs: &[Vec<i64>]) -> Result<(), TestCaseError> {
    let spec = RingSpec {
        mode: CoeffMode::Integer,
        ..spec.clone()
    };
    let source = spec.build();
    let target_spec = RingSpec {
        mode: CoeffMode::Mod2,
        gens: spec.gens.iter().map(|&(d, e, _)| (d, e, false)).collect(),
        ..spec.clone()
    };
    let target = target_spec.build();
    let images: BTreeMap<String, GradedElement> = source
        .generators()
        .iter()
        .map(|g| (g.name.clone(), target.generator(&g.name).unwrap()))
        .collect();
    let table = ImageTable::new(&source, &target, &images).unwrap();
    let a = spec.element(&source, &coeffs[0]);
    let b = spec.element(&source, &coeffs[1]);
    let ra = a.reduce_mod2(&table).unwrap();
    let rb = b.reduce_mod2(&table).unwrap();
    prop_assert_eq!(
        a.mul(&b).unwrap().reduce_mod2(&table).unwrap(),
        ra.mul(&rb).unwrap()
    );
    prop_assert_eq!(
        a.add(&b).unwrap().reduce_mod2(&table).unwrap(),
        ra.add(&rb).unwrap()
    );
    prop_assert_eq!(source.one().reduce_mod2(&table).unwrap(), target.one());
    Ok(())
}

pub fn check_torsion_soundness(spec: &RingSpec, coeffs: &[i64]) -> Result<(), TestCaseError> {
    let ring = spec.build();
    let keep: Vec<i64> = spec
        .monomials()
        .iter()
        .zip(coeffs)
        .map(|(m, &c)| if spec.torsion(m) { c } else { 0 })
        .collect();
    let u = spec.element(&ring, &keep);
    prop_assert!(u.add(&u).unwrap().is_zero());
    Ok(())
}

pub fn primitive() -> impl Strategy<Value = (Family, u32)> {
    prop_oneof![
        (1u32..=3).prop_map(|n| (Family::CP, n)),
        (1u32..=5).prop_map(|n| (Family::RP, n)),
        (1u32..=4).prop_map(|n| (Family::S, n)),
        (1u32..=3).prop_map(|n| (Family::T, n)),
        (1u32..=3).prop_map(|n| (Family::R, n)),
    ]
}

pub fn product_of(parts: &[(Family, u32)]) -> ManifoldDescriptor {
    let ms: Vec<_> = parts
        .iter()
        .map(|&(f, n)| ManifoldDescriptor::primitive(f, n).unwrap())
        .collect();
    ms[1..].iter().fold(ms[0].clone(), |acc, m| {
        ManifoldDescriptor::product(&acc, m).unwrap()
    })
}

pub fn catalog_product() -> impl Strategy<Value = Vec<(Family, u32)>> {
    prop::collection::vec(primitive(), 1..=4)
}

/// `w · w̄ = 1`, fundamental degree, and `c(C⊗TM) mod 2 = w²`.
pub fn check_catalog_manifold(parts: &[(Family, u32)]) -> Result<(), TestCaseError> {
    let m = product_of(parts);
    let w = m.sw_total().unwrap();
    prop_assert!(w.mul(&m.dual_sw_total().unwrap()).unwrap().is_one());
    let data = m.ring_data().unwrap();
    if let Some(f) = &data.fundamental_mod2 {
        prop_assert_eq!(data.mod2_ring.degree_of(f), m.dimension());
    }
    prop_assert_eq!(data.fundamental_mod2.is_some(), m.closed());
    if let Ok(int) = m.integral_data() {
        let reduced = int.c_complexified.reduce_mod2(&int.mod2_images).unwrap();
        prop_assert_eq!(reduced, w.mul(w).unwrap());
        let c = &int.c_complexified;
        prop_assert!(c.mul(&c.invert_unit().unwrap()).unwrap().is_one());
    }
    Ok(())
}

pub fn manifold_expr() -> impl Strategy<Value = ManifoldExpr> {
    let leaf = (prop::sample::select(Family::ALL.to_vec()), 0u32..=20)
        .prop_map(|(f, n)| ManifoldExpr::atom(f, n));
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ManifoldExpr::product(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| ManifoldExpr::connected_sum(a, b)),
        ]
    })
}

/// Every 4-manifold buildable from primitives: ordered products whose
/// dimensions sum to 4, plus connected sums of pairs of closed ones.
pub fn all_four_manifolds() -> Vec<ManifoldDescriptor> {
    let mut prims: Vec<(Family, u32)> = Vec::new();
    for n in 1..=4 {
        for f in Family::ALL {
            let dim = if f == Family::CP { 2 * n } else { n };
            if dim <= 4 {
                prims.push((f, n));
            }
        }
    }
    let dim = |&(f, n): &(Family, u32)| if f == Family::CP { 2 * n } else { n };
    let mut chains: Vec<Vec<(Family, u32)>> = Vec::new();
    let mut stack: Vec<(Vec<(Family, u32)>, u32)> = vec![(vec![], 0)];
    while let Some((chain, d)) = stack.pop() {
        if d == 4 {
            chains.push(chain);
            continue;
        }
        for p in &prims {
            if d + dim(p) <= 4 {
                let mut next = chain.clone();
                next.push(*p);
                stack.push((next, d + dim(p)));
            }
        }
    }
    let mut out: Vec<ManifoldDescriptor> = chains.iter().map(|c| product_of(c)).collect();
    out.sort_by(|a, b| a.canonical_name().cmp(b.canonical_name()));
    out.dedup_by(|a, b| a.canonical_name() == b.canonical_name());
    // Connected sums over one representative per distinct multiset of
    // factors keeps the count manageable.
    let closed: Vec<ManifoldDescriptor> = out
        .iter()
        .filter(|m| m.closed())
        .filter(|m| {
            let name = m.canonical_name();
            let mut parts: Vec<&str> = name.split('*').collect();
            parts.sort();
            parts.join("*") == name
        })
        .cloned()
        .collect();
    let mut sums = Vec::new();
    for (i, a) in closed.iter().enumerate() {
        for b in &closed[i..] {
            sums.push(ManifoldDescriptor::connected_sum(a, b).unwrap());
        }
    }
    out.extend(sums);
    out
}

pub fn check_classification(m: &ManifoldDescriptor) -> Result<(), String> {
    let r = classify4(m).map_err(|e| e.to_string())?;
    r.check_invariants(m.orientable())?;
    let v = |c| r.value(c);
    use Condition::*;
    if v(TotallyRealC4) != v(IndependentC4) || v(IndependentC4) != v(ComplexifiedTangentTrivial) {
        return Err(format!("{}: (2)(4)(5) differ", m));
    }
    if v(TotallyRealC5) != v(DualPontryaginVanishes) || v(IndependentC3) != v(PontryaginVanishes) {
        return Err(format!("{}: (1)=(6) or (3)=(7) fails", m));
    }
    if v(ComplexifiedTangentTrivial) == Verdict::True
        && Condition::ALL.iter().any(|&c| v(c) != Verdict::True)
    {
        return Err(format!("{}: (5) true but not all true", m));
    }
    if m.orientable()
        && Condition::ALL
            .iter()
            .any(|&c| v(c) != v(PontryaginVanishes))
    {
        return Err(format!("{}: orientable with unequal conditions", m));
    }
    if (m.orientable() || !m.closed()) && v(TotallyRealC5) != v(IndependentC3) {
        return Err(format!(
            "{}: (1) and (3) differ on an open or orientable manifold",
            m
        ));
    }
    Ok(())
}
