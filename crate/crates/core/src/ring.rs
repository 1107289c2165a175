//! Finite local Gorenstein group rings (Z/p^m)[G] for abelian p-groups G.
//!
//! Restricting G to abelian p-groups makes the group ring local with
//! maximal ideal generated by p together with g - 1 for the generators g
//! of the cyclic factors, and the socle is one-dimensional over F_p, so
//! the ring is self-injective.  Every higher construction in this crate
//! reduces its arithmetic to these rings.

use crate::linalg::{self, BaseMatrix};
use serde::{Deserialize, Serialize};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RingError {
    #[error("modulus base {0} is not prime")]
    NonPrimeModulus(u64),
    #[error("cyclic order {0} is not a power of the prime {1}")]
    NonLocalGroup(u64, u64),
    #[error("socle has F_p-dimension {0}, expected 1")]
    SocleNotSimple(u64),
    #[error("elements belong to different rings")]
    RingMismatch,
    #[error("quotient depth {requested} exceeds coefficient exponent {available}")]
    DepthExceeded { requested: u32, available: u32 },
}

/// Cyclic factor orders of the abelian group G, each a power of p.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub cyclic_orders: Vec<u64>,
}

impl GroupSpec {
    pub fn trivial() -> Self {
        GroupSpec { cyclic_orders: Vec::new() }
    }

    pub fn new(cyclic_orders: Vec<u64>) -> Self {
        GroupSpec { cyclic_orders }
    }

    pub fn cardinality(&self) -> u64 {
        self.cyclic_orders.iter().product()
    }
}

#[derive(Debug)]
struct RingData {
    p: u64,
    m: u32,
    modulus: u64,
    group: GroupSpec,
    /// |G|
    size: usize,
    /// index multiplication table for group elements
    mul_table: Vec<u32>,
    /// maximal-ideal generators: p together with g - 1 per cyclic factor
    max_ideal_gens: Vec<RingElement>,
    socle_basis: BaseMatrix,
}

/// The ring (Z/p^m)[G].  Cheap to clone; equality compares the defining
/// data (p, m, group), not the allocation.
#[derive(Clone)]
pub struct GorensteinRing {
    data: Arc<RingData>,
}

impl PartialEq for GorensteinRing {
    fn eq(&self, other: &Self) -> bool {
        self.data.p == other.data.p
            && self.data.m == other.data.m
            && self.data.group == other.data.group
    }
}
impl Eq for GorensteinRing {}

impl std::fmt::Debug for GorensteinRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "(Z/{}^{})[{}]",
            self.data.p,
            self.data.m,
            self.data
                .group
                .cyclic_orders
                .iter()
                .map(|o| format!("C{}", o))
                .collect::<Vec<_>>()
                .join("x")
        )
    }
}

/// Element of the group ring: coefficients indexed by group elements in
/// lexicographic order of cyclic-factor exponent tuples.  Serializes as
/// the bare coefficient array.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RingElement {
    pub coeffs: Vec<u64>,
}

impl std::fmt::Debug for RingElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.coeffs)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn is_power_of(mut n: u64, p: u64) -> bool {
    if n == 0 {
        return false;
    }
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

/// Construct (Z/p^m)[G], checking locality and the Gorenstein socle.
pub fn make_ring(p: u64, m: u32, group: GroupSpec) -> Result<GorensteinRing, RingError> {
    if !is_prime(p) {
        return Err(RingError::NonPrimeModulus(p));
    }
    assert!(m >= 1, "coefficient exponent must be positive");
    for &o in &group.cyclic_orders {
        if o < 2 || !is_power_of(o, p) {
            return Err(RingError::NonLocalGroup(o, p));
        }
    }
    let modulus = p.checked_pow(m).expect("modulus overflow");
    let size = group.cardinality() as usize;
    let orders = &group.cyclic_orders;

    // lexicographic index arithmetic on exponent tuples
    let idx_of = |expts: &[u64]| -> usize {
        let mut idx = 0usize;
        for (e, &o) in expts.iter().zip(orders.iter()) {
            idx = idx * (o as usize) + (*e as usize);
        }
        idx
    };
    let expts_of = |mut idx: usize| -> Vec<u64> {
        let mut out = vec![0u64; orders.len()];
        for k in (0..orders.len()).rev() {
            let o = orders[k] as usize;
            out[k] = (idx % o) as u64;
            idx /= o;
        }
        out
    };
    let mut mul_table = vec![0u32; size * size];
    for i in 0..size {
        let ei = expts_of(i);
        for j in 0..size {
            let ej = expts_of(j);
            let sum: Vec<u64> = ei
                .iter()
                .zip(ej.iter())
                .zip(orders.iter())
                .map(|((&a, &b), &o)| (a + b) % o)
                .collect();
            mul_table[i * size + j] = idx_of(&sum) as u32;
        }
    }

    let mut max_ideal_gens = Vec::new();
    let mut pe = vec![0u64; size];
    pe[0] = p % modulus;
    max_ideal_gens.push(RingElement { coeffs: pe });
    for k in 0..orders.len() {
        // generator of the k-th cyclic factor, minus one
        let mut expts = vec![0u64; orders.len()];
        expts[k] = 1;
        let gi = idx_of(&expts);
        let mut coeffs = vec![0u64; size];
        coeffs[gi] = 1;
        coeffs[0] = (coeffs[0] + modulus - 1) % modulus;
        max_ideal_gens.push(RingElement { coeffs });
    }

    let data = RingData {
        p,
        m,
        modulus,
        group,
        size,
        mul_table,
        max_ideal_gens,
        socle_basis: BaseMatrix::zero(0, size, modulus),
    };
    let mut ring = GorensteinRing { data: Arc::new(data) };

    // socle = simultaneous annihilator of the maximal-ideal generators
    let socle = ring.annihilator_span(&ring.data.max_ideal_gens.clone());
    let dim = linalg::span_size_exp(&socle);
    if dim != 1 {
        return Err(RingError::SocleNotSimple(dim));
    }
    Arc::get_mut(&mut ring.data).unwrap().socle_basis = socle;
    Ok(ring)
}

impl GorensteinRing {
    pub fn p(&self) -> u64 {
        self.data.p
    }
    pub fn m(&self) -> u32 {
        self.data.m
    }
    pub fn modulus(&self) -> u64 {
        self.data.modulus
    }
    pub fn group(&self) -> &GroupSpec {
        &self.data.group
    }
    /// |G|, the coefficient length of elements.
    pub fn size(&self) -> usize {
        self.data.size
    }
    /// log_p |R| = m · |G|.
    pub fn cardinality_exp(&self) -> u64 {
        self.data.m as u64 * self.data.size as u64
    }

    pub fn zero(&self) -> RingElement {
        RingElement { coeffs: vec![0; self.data.size] }
    }

    pub fn one(&self) -> RingElement {
        let mut c = vec![0; self.data.size];
        c[0] = 1 % self.data.modulus;
        RingElement { coeffs: c }
    }

    pub fn from_scalar(&self, s: u64) -> RingElement {
        let mut c = vec![0; self.data.size];
        c[0] = s % self.data.modulus;
        RingElement { coeffs: c }
    }

    /// The group element with exponent 1 at cyclic factor `k`.
    pub fn group_generator(&self, k: usize) -> RingElement {
        let orders = &self.data.group.cyclic_orders;
        assert!(k < orders.len());
        let mut stride = 1usize;
        for j in (k + 1)..orders.len() {
            stride *= orders[j] as usize;
        }
        let mut c = vec![0; self.data.size];
        c[stride] = 1;
        RingElement { coeffs: c }
    }

    pub fn basis_element(&self, idx: usize) -> RingElement {
        let mut c = vec![0; self.data.size];
        c[idx] = 1;
        RingElement { coeffs: c }
    }

    pub fn max_ideal_gens(&self) -> &[RingElement] {
        &self.data.max_ideal_gens
    }

    pub fn add(&self, x: &RingElement, y: &RingElement) -> RingElement {
        let n = self.data.modulus;
        RingElement {
            coeffs: x.coeffs.iter().zip(y.coeffs.iter()).map(|(&a, &b)| (a + b) % n).collect(),
        }
    }

    pub fn sub(&self, x: &RingElement, y: &RingElement) -> RingElement {
        let n = self.data.modulus;
        RingElement {
            coeffs: x
                .coeffs
                .iter()
                .zip(y.coeffs.iter())
                .map(|(&a, &b)| (a + n - b) % n)
                .collect(),
        }
    }

    pub fn neg(&self, x: &RingElement) -> RingElement {
        let n = self.data.modulus;
        RingElement { coeffs: x.coeffs.iter().map(|&a| (n - a) % n).collect() }
    }

    pub fn mul(&self, x: &RingElement, y: &RingElement) -> RingElement {
        let n = self.data.modulus;
        let size = self.data.size;
        let mut out = vec![0u64; size];
        for i in 0..size {
            let a = x.coeffs[i];
            if a == 0 {
                continue;
            }
            for j in 0..size {
                let b = y.coeffs[j];
                if b == 0 {
                    continue;
                }
                let k = self.data.mul_table[i * size + j] as usize;
                out[k] = (out[k] + a * b) % n;
            }
        }
        RingElement { coeffs: out }
    }

    pub fn scalar_mul(&self, s: u64, x: &RingElement) -> RingElement {
        let n = self.data.modulus;
        RingElement { coeffs: x.coeffs.iter().map(|&a| (a * (s % n)) % n).collect() }
    }

    pub fn pow(&self, x: &RingElement, e: u32) -> RingElement {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, x);
        }
        acc
    }

    pub fn is_zero(&self, x: &RingElement) -> bool {
        x.coeffs.iter().all(|&a| a == 0)
    }

    /// Image in the residue field F_p (sum of coefficients mod p).
    pub fn residue(&self, x: &RingElement) -> u64 {
        x.coeffs.iter().fold(0, |acc, &a| (acc + a) % self.data.p)
    }

    /// A group-ring element is a unit exactly when its residue is nonzero.
    pub fn is_unit(&self, x: &RingElement) -> bool {
        self.residue(x) != 0
    }

    /// Multiplicative inverse of a unit, via the regular representation.
    pub fn inverse(&self, x: &RingElement) -> Option<RingElement> {
        if !self.is_unit(x) {
            return None;
        }
        let rep = self.regular_rep(x);
        let sol = linalg::solve_left(&rep, &self.one().coeffs)?;
        Some(RingElement { coeffs: sol })
    }

    /// Matrix of multiplication by `x` on the group-element basis:
    /// `coeffs(y·x) = coeffs(y) · regular_rep(x)`.
    pub fn regular_rep(&self, x: &RingElement) -> BaseMatrix {
        let size = self.data.size;
        let mut m = BaseMatrix::zero(size, size, self.data.modulus);
        for g in 0..size {
            let row = self.mul(&self.basis_element(g), x);
            for (c, &v) in row.coeffs.iter().enumerate() {
                m.set(g, c, v);
            }
        }
        m
    }

    /// Howell basis of `{ r : r·g = 0 for all g in gens }` as a Z/p^m-span.
    pub fn annihilator_span(&self, gens: &[RingElement]) -> BaseMatrix {
        if gens.is_empty() {
            return linalg::howell(&BaseMatrix::identity(self.data.size, self.data.modulus));
        }
        let mut stacked = self.regular_rep(&gens[0]);
        for g in &gens[1..] {
            stacked = stacked.hconcat(&self.regular_rep(g));
        }
        linalg::howell(&linalg::left_kernel(&stacked))
    }

    pub fn socle(&self) -> Ideal {
        Ideal::from_basis(self.clone(), self.data.socle_basis.clone())
    }

    /// A generator of the (principal) socle.
    pub fn socle_generator(&self) -> RingElement {
        RingElement { coeffs: self.data.socle_basis.row(0).to_vec() }
    }

    /// The quotient ring (Z/p^i)[G] carrying the canonical projection.
    pub fn quotient_ring(&self, i: u32) -> Result<GorensteinRing, RingError> {
        if i > self.data.m {
            return Err(RingError::DepthExceeded { requested: i, available: self.data.m });
        }
        make_ring(self.data.p, i, self.data.group.clone())
    }

    /// Canonical projection of an element into a quotient (or any ring with
    /// the same group and smaller modulus).
    pub fn project(&self, target: &GorensteinRing, x: &RingElement) -> RingElement {
        assert_eq!(self.data.group, target.data.group, "projection needs the same group");
        let n = target.data.modulus;
        RingElement { coeffs: x.coeffs.iter().map(|&a| a % n).collect() }
    }

    /// Enumerate all ring elements; only for rings within the given bound.
    pub fn enumerate(&self, bound: u64) -> Option<Vec<RingElement>> {
        let total = (self.data.modulus as u128).checked_pow(self.data.size as u32)?;
        if total > bound as u128 {
            return None;
        }
        let n = self.data.modulus;
        let size = self.data.size;
        let mut out = Vec::with_capacity(total as usize);
        let mut cur = vec![0u64; size];
        loop {
            out.push(RingElement { coeffs: cur.clone() });
            let mut i = 0;
            loop {
                if i == size {
                    return Some(out);
                }
                cur[i] += 1;
                if cur[i] < n {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
        }
    }
}

/// An ideal, stored as generators plus the canonical Howell basis of the
/// expanded Z/p^m-span of { g·b : g generator, b group element }.
#[derive(Clone)]
pub struct Ideal {
    pub ring: GorensteinRing,
    pub generators: Vec<RingElement>,
    basis: BaseMatrix,
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.basis == other.basis
    }
}
impl Eq for Ideal {}

impl std::fmt::Debug for Ideal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Ideal{:?}", self.basis.row_vecs())
    }
}

impl Ideal {
    pub fn new(ring: GorensteinRing, generators: Vec<RingElement>) -> Ideal {
        let size = ring.size();
        let mut rows = Vec::new();
        for g in &generators {
            let rep = ring.regular_rep(g);
            rows.extend(rep.row_vecs());
        }
        let basis = linalg::howell(&BaseMatrix::from_rows(rows, size, ring.modulus()));
        Ideal { ring, generators, basis }
    }

    pub fn from_basis(ring: GorensteinRing, basis: BaseMatrix) -> Ideal {
        let generators = basis.row_vecs().into_iter().map(|coeffs| RingElement { coeffs }).collect();
        Ideal::new(ring, generators)
    }

    pub fn zero(ring: GorensteinRing) -> Ideal {
        Ideal::new(ring, Vec::new())
    }

    pub fn unit(ring: GorensteinRing) -> Ideal {
        let one = ring.one();
        Ideal::new(ring, vec![one])
    }

    pub fn principal(ring: GorensteinRing, g: RingElement) -> Ideal {
        Ideal::new(ring, vec![g])
    }

    pub fn basis(&self) -> &BaseMatrix {
        &self.basis
    }

    /// log_p of the cardinality.
    pub fn size_exp(&self) -> u64 {
        linalg::span_size_exp(&self.basis)
    }

    pub fn is_zero(&self) -> bool {
        self.basis.rows == 0
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.contains(&self.ring.one())
    }

    pub fn contains(&self, x: &RingElement) -> bool {
        linalg::span_contains(&self.basis, &x.coeffs)
    }

    pub fn contains_ideal(&self, other: &Ideal) -> bool {
        linalg::span_contains_all(&self.basis, &other.basis)
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal, RingError> {
        if self.ring != other.ring {
            return Err(RingError::RingMismatch);
        }
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        Ok(Ideal::new(self.ring.clone(), gens))
    }

    pub fn product(&self, other: &Ideal) -> Result<Ideal, RingError> {
        if self.ring != other.ring {
            return Err(RingError::RingMismatch);
        }
        let mut gens = Vec::new();
        for a in &self.generators {
            for b in &other.generators {
                gens.push(self.ring.mul(a, b));
            }
        }
        Ok(Ideal::new(self.ring.clone(), gens))
    }

    pub fn intersection(&self, other: &Ideal) -> Result<Ideal, RingError> {
        if self.ring != other.ring {
            return Err(RingError::RingMismatch);
        }
        let basis = linalg::span_intersection(&self.basis, &other.basis);
        Ok(Ideal::from_basis(self.ring.clone(), basis))
    }

    /// Ann_R(I), by linear solving over Z/p^m via the regular representation.
    pub fn annihilator(&self) -> Ideal {
        let span = self.ring.annihilator_span(&self.generators);
        Ideal::from_basis(self.ring.clone(), span)
    }

    /// Ann(Ann(I)); equals I over these self-injective rings.
    pub fn double_annihilator(&self) -> Ideal {
        self.annihilator().annihilator()
    }

    /// Image of the ideal in a quotient ring (coefficientwise reduction).
    pub fn project(&self, target: &GorensteinRing) -> Ideal {
        let gens = self.generators.iter().map(|g| self.ring.project(target, g)).collect();
        Ideal::new(target.clone(), gens)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z4() -> GorensteinRing {
        make_ring(2, 2, GroupSpec::trivial()).unwrap()
    }

    fn f3c3() -> GorensteinRing {
        make_ring(3, 1, GroupSpec::new(vec![3])).unwrap()
    }

    fn z4c2() -> GorensteinRing {
        make_ring(2, 2, GroupSpec::new(vec![2])).unwrap()
    }

    #[test]
    fn make_ring_rejects_bad_input() {
        assert_eq!(make_ring(4, 1, GroupSpec::trivial()).unwrap_err(), RingError::NonPrimeModulus(4));
        assert_eq!(
            make_ring(2, 1, GroupSpec::new(vec![2, 3])).unwrap_err(),
            RingError::NonLocalGroup(3, 2)
        );
    }

    #[test]
    fn z4_socle_is_two() {
        let r = z4();
        let socle = r.socle();
        assert_eq!(socle, Ideal::principal(r.clone(), r.from_scalar(2)));
    }

    #[test]
    fn f3c3_socle_is_sigma_minus_one_squared() {
        let r = f3c3();
        let sigma = r.group_generator(0);
        let t = r.sub(&sigma, &r.one());
        let expected = Ideal::principal(r.clone(), r.mul(&t, &t));
        assert_eq!(r.socle(), expected);

        // brute-force oracle over all 27 elements
        let all = r.enumerate(1 << 16).unwrap();
        let mgens = r.max_ideal_gens().to_vec();
        for x in &all {
            let killed = mgens.iter().all(|g| r.is_zero(&r.mul(x, g)));
            assert_eq!(killed, r.socle().contains(x), "mismatch at {:?}", x);
        }
    }

    #[test]
    fn z4c2_socle_by_enumeration() {
        let r = z4c2();
        let tau = r.group_generator(0);
        let gen = r.scalar_mul(2, &r.add(&r.one(), &tau));
        assert_eq!(r.socle(), Ideal::principal(r.clone(), gen));
        let all = r.enumerate(1 << 16).unwrap();
        let mgens = r.max_ideal_gens().to_vec();
        for x in &all {
            let killed = mgens.iter().all(|g| r.is_zero(&r.mul(x, g)));
            assert_eq!(killed, r.socle().contains(x));
        }
    }

    #[test]
    fn arithmetic_examples() {
        let r = z4();
        assert!(r.is_zero(&r.add(&r.from_scalar(2), &r.from_scalar(2))));

        let r3 = f3c3();
        let t = r3.sub(&r3.group_generator(0), &r3.one());
        assert!(r3.is_zero(&r3.pow(&t, 3)));

        let r2 = z4c2();
        let tau = r2.group_generator(0);
        let a = r2.add(&r2.one(), &tau);
        let b = r2.sub(&r2.one(), &tau);
        assert!(r2.is_zero(&r2.mul(&a, &b)));
    }

    #[test]
    fn regular_rep_examples() {
        let r2 = z4c2();
        assert_eq!(r2.regular_rep(&r2.one()), BaseMatrix::identity(2, 4));
        let tau = r2.regular_rep(&r2.group_generator(0));
        assert_eq!(tau.row_vecs(), vec![vec![0, 1], vec![1, 0]]);

        let r3 = f3c3();
        let t = r3.sub(&r3.group_generator(0), &r3.one());
        let rep = r3.regular_rep(&t);
        let sq = rep.mul(&rep);
        let cube = sq.mul(&rep);
        assert!(!sq.is_zero());
        assert!(cube.is_zero());
    }

    #[test]
    fn regular_rep_is_multiplicative_random() {
        let r = z4c2();
        let mut rng = crate::rng::SplitMix64::new(3);
        for _ in 0..50 {
            let x = RingElement { coeffs: (0..2).map(|_| rng.below(4)).collect() };
            let y = RingElement { coeffs: (0..2).map(|_| rng.below(4)).collect() };
            assert_eq!(r.regular_rep(&r.mul(&x, &y)), r.regular_rep(&x).mul(&r.regular_rep(&y)));
        }
    }

    #[test]
    fn ideal_examples() {
        let r = z4();
        let two = Ideal::principal(r.clone(), r.from_scalar(2));
        assert!(two.product(&two).unwrap().is_zero());
        assert!(two == two.clone());

        let r2 = z4c2();
        let tau = r2.group_generator(0);
        let a = Ideal::principal(r2.clone(), r2.add(&r2.one(), &tau));
        let b = Ideal::principal(r2.clone(), r2.sub(&r2.one(), &tau));
        let int = a.intersection(&b).unwrap();
        let expected = Ideal::principal(r2.clone(), r2.scalar_mul(2, &r2.add(&r2.one(), &tau)));
        assert_eq!(int, expected);

        // exhaustive oracle for the intersection
        let all = r2.enumerate(1 << 16).unwrap();
        for x in &all {
            assert_eq!(int.contains(x), a.contains(x) && b.contains(x));
        }
    }

    #[test]
    fn annihilator_examples() {
        let r = z4();
        assert!(Ideal::zero(r.clone()).annihilator().is_unit_ideal());
        let two = Ideal::principal(r.clone(), r.from_scalar(2));
        assert_eq!(two.annihilator(), two);
        assert_eq!(two.double_annihilator(), two);

        let r3 = f3c3();
        let t = r3.sub(&r3.group_generator(0), &r3.one());
        let it = Ideal::principal(r3.clone(), t.clone());
        let expected = Ideal::principal(r3.clone(), r3.mul(&t, &t));
        assert_eq!(it.annihilator(), expected);

        // brute force over 27 elements
        let all = r3.enumerate(1 << 16).unwrap();
        for x in &all {
            let kills = r3.is_zero(&r3.mul(x, &t));
            assert_eq!(kills, it.annihilator().contains(x));
        }
    }

    #[test]
    fn locality_every_element_unit_or_in_max_ideal() {
        for r in [z4(), f3c3(), z4c2()] {
            let max_ideal = Ideal::new(r.clone(), r.max_ideal_gens().to_vec());
            for x in r.enumerate(1 << 16).unwrap() {
                if r.is_unit(&x) {
                    let inv = r.inverse(&x).unwrap();
                    assert_eq!(r.mul(&x, &inv), r.one());
                } else {
                    assert!(max_ideal.contains(&x));
                }
            }
        }
    }

    #[test]
    fn quotient_ring_examples() {
        let r = z4();
        let q = r.quotient_ring(1).unwrap();
        assert_eq!(q.modulus(), 2);
        assert_eq!(q.size(), 1);

        let r8 = make_ring(2, 3, GroupSpec::new(vec![2])).unwrap();
        let q2 = r8.quotient_ring(2).unwrap();
        assert_eq!(q2, z4c2());
        assert!(r8.quotient_ring(4).is_err());

        // projections of units stay units: enumerate Z/4 -> Z/2
        for x in r.enumerate(1 << 16).unwrap() {
            if r.is_unit(&x) {
                assert!(q.is_unit(&r.project(&q, &x)));
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn elem() -> impl Strategy<Value = RingElement> {
            proptest::collection::vec(0u64..4, 2).prop_map(|coeffs| RingElement { coeffs })
        }

        proptest! {
            #[test]
            fn convolution_laws(x in elem(), y in elem(), z in elem()) {
                let r = make_ring(2, 2, GroupSpec::new(vec![2])).unwrap();
                prop_assert_eq!(r.mul(&x, &y), r.mul(&y, &x));
                prop_assert_eq!(r.mul(&r.mul(&x, &y), &z), r.mul(&x, &r.mul(&y, &z)));
                prop_assert_eq!(
                    r.mul(&r.add(&x, &y), &z),
                    r.add(&r.mul(&x, &z), &r.mul(&y, &z))
                );
            }

            #[test]
            fn annihilator_reverses_containment(a in elem(), b in elem()) {
                let r = make_ring(2, 2, GroupSpec::new(vec![2])).unwrap();
                let small = Ideal::principal(r.clone(), a.clone());
                let big = Ideal::new(r.clone(), vec![a, b]);
                prop_assert!(small.annihilator().contains_ideal(&big.annihilator()));
            }
        }
    }

    #[test]
    fn double_annihilator_identity_for_random_ideals() {
        let mut rng = crate::rng::SplitMix64::new(5);
        for r in [z4(), f3c3(), z4c2()] {
            for _ in 0..25 {
                let k = 1 + rng.below(2) as usize;
                let gens: Vec<RingElement> = (0..k)
                    .map(|_| RingElement {
                        coeffs: (0..r.size()).map(|_| rng.below(r.modulus())).collect(),
                    })
                    .collect();
                let ideal = Ideal::new(r.clone(), gens);
                assert_eq!(ideal.double_annihilator(), ideal);
            }
        }
    }
}
