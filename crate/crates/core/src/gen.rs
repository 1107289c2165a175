//! Seeded instance generation for the property suites.  Every instance is
//! a serializable value produced deterministically from a SplitMix64
//! stream, so a dumped counterexample can be re-loaded and re-run.

use crate::complexes::QuadraticComplex;
use crate::modules::PresentedModule;
use crate::ring::{make_ring, GorensteinRing, GroupSpec, RingElement, RingError};
use crate::rmatrix::RMatrix;
use crate::rng::SplitMix64;
use crate::stark::StarkFamily;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingDescriptor {
    pub p: u64,
    pub m: u32,
    pub group: Vec<u64>,
}

impl RingDescriptor {
    pub fn of(ring: &GorensteinRing) -> Self {
        RingDescriptor { p: ring.p(), m: ring.m(), group: ring.group().cyclic_orders.clone() }
    }

    pub fn build(&self) -> Result<GorensteinRing, RingError> {
        make_ring(self.p, self.m, GroupSpec::new(self.group.clone()))
    }

    pub fn label(&self) -> String {
        if self.group.is_empty() {
            format!("Z/{}", self.p.pow(self.m))
        } else {
            format!(
                "Z/{}[{}]",
                self.p.pow(self.m),
                self.group.iter().map(|o| format!("C{}", o)).collect::<Vec<_>>().join("x")
            )
        }
    }
}

pub fn rand_element(ring: &GorensteinRing, rng: &mut SplitMix64) -> RingElement {
    RingElement { coeffs: (0..ring.size()).map(|_| rng.below(ring.modulus())).collect() }
}

pub fn rand_unit(ring: &GorensteinRing, rng: &mut SplitMix64) -> RingElement {
    loop {
        let x = rand_element(ring, rng);
        if ring.is_unit(&x) {
            return x;
        }
    }
}

pub fn rand_rmatrix(
    ring: &GorensteinRing,
    rows: usize,
    cols: usize,
    rng: &mut SplitMix64,
) -> RMatrix {
    if rows == 0 || cols == 0 {
        return RMatrix::zero(ring, rows, cols);
    }
    RMatrix::from_rows((0..rows).map(|_| (0..cols).map(|_| rand_element(ring, rng)).collect()).collect())
}

/// A random invertible matrix: a product of elementary operations applied
/// to the identity.
pub fn rand_invertible(ring: &GorensteinRing, n: usize, rng: &mut SplitMix64) -> RMatrix {
    let mut u = RMatrix::identity(ring, n);
    if n == 0 {
        return u;
    }
    let ops = 2 * n as u64 + 2;
    for _ in 0..ops {
        match rng.below(3) {
            0 => {
                // scale a row by a unit
                let i = rng.below(n as u64) as usize;
                let c = rand_unit(ring, rng);
                for j in 0..n {
                    u.set(i, j, ring.mul(&c, u.at(i, j)));
                }
            }
            1 => {
                // swap two rows
                let i = rng.below(n as u64) as usize;
                let j = rng.below(n as u64) as usize;
                if i != j {
                    for c in 0..n {
                        let a = u.at(i, c).clone();
                        let b = u.at(j, c).clone();
                        u.set(i, c, b);
                        u.set(j, c, a);
                    }
                }
            }
            _ => {
                // add a multiple of one row to another
                let i = rng.below(n as u64) as usize;
                let j = rng.below(n as u64) as usize;
                if i != j {
                    let c = rand_element(ring, rng);
                    for col in 0..n {
                        let add = ring.mul(&c, u.at(i, col));
                        let cur = ring.add(u.at(j, col), &add);
                        u.set(j, col, cur);
                    }
                }
            }
        }
    }
    u
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModuleInstance {
    pub gens: usize,
    pub relations: RMatrix,
}

impl ModuleInstance {
    pub fn build(&self, ring: &GorensteinRing) -> PresentedModule {
        PresentedModule::new(ring.clone(), self.gens, self.relations.clone())
    }

    pub fn of(m: &PresentedModule) -> Self {
        ModuleInstance { gens: m.gens, relations: m.relations.clone() }
    }
}

pub fn rand_module_instance(
    ring: &GorensteinRing,
    rng: &mut SplitMix64,
    max_gens: usize,
    max_rels: usize,
) -> ModuleInstance {
    let gens = 1 + rng.below(max_gens as u64) as usize;
    let rels = 1 + rng.below(max_rels as u64) as usize;
    ModuleInstance { gens, relations: rand_rmatrix(ring, rels, gens, rng) }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexInstance {
    pub d: usize,
    pub e: usize,
    pub phi: RMatrix,
}

impl ComplexInstance {
    pub fn build(&self, ring: &GorensteinRing) -> QuadraticComplex {
        QuadraticComplex::new(ring.clone(), self.phi.clone())
    }

    pub fn of(c: &QuadraticComplex) -> Self {
        ComplexInstance { d: c.d, e: c.e, phi: c.phi.clone() }
    }
}

/// A quadratic complex with 1 ≤ r ≤ max_r and e ≤ max_e.
pub fn rand_complex_instance(
    ring: &GorensteinRing,
    rng: &mut SplitMix64,
    max_r: usize,
    max_e: usize,
) -> ComplexInstance {
    let r = 1 + rng.below(max_r as u64) as usize;
    let e = rng.below(max_e as u64 + 1) as usize;
    let d = r + e;
    ComplexInstance { d, e, phi: rand_rmatrix(ring, d, e, rng) }
}

/// A complex with d ≥ e (chi ≥ 0), for Eagon-Northcott runs with d ≤ max_d.
pub fn rand_en_instance(
    ring: &GorensteinRing,
    rng: &mut SplitMix64,
    max_d: usize,
) -> ComplexInstance {
    let d = 1 + rng.below(max_d as u64) as usize;
    let e = 1 + rng.below(d as u64) as usize;
    ComplexInstance { d, e, phi: rand_rmatrix(ring, d, e, rng) }
}

/// A complex together with a split free quotient of H^1, built from the
/// trimmed data so the quotient always splits: phi = [phi_Y | 0]·U and
/// rho = the last r_Y columns of U^{-1}.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuotientInstance {
    pub complex: ComplexInstance,
    pub rho: RMatrix,
}

pub fn rand_quotient_instance(
    ring: &GorensteinRing,
    rng: &mut SplitMix64,
    max_r: usize,
    max_e: usize,
) -> QuotientInstance {
    let r_total = 1 + rng.below(max_r as u64) as usize;
    let e = 1 + rng.below(max_e as u64) as usize;
    let r_y = rng.below((r_total.min(e) as u64) + 1) as usize;
    let ek = e - r_y; // rank of the trimmed target
    let d = e + r_total - r_y; // so the trimmed complex has chi = r_total
    let phi_y = rand_rmatrix(ring, d, ek, rng);
    let u = rand_invertible(ring, e, rng);
    // phi = [phi_y | 0] · u
    let mut padded = RMatrix::zero(ring, d, e);
    for i in 0..d {
        for j in 0..ek {
            padded.set(i, j, phi_y.at(i, j).clone());
        }
    }
    let phi = padded.mul(ring, &u);
    let u_inv = crate::complexes::invert(ring, &u).expect("constructed invertible");
    let rho = RMatrix::from_rows(
        (0..e).map(|i| (ek..e).map(|j| u_inv.at(i, j).clone()).collect()).collect(),
    );
    QuotientInstance { complex: ComplexInstance { d, e, phi }, rho }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyInstance {
    pub base: ComplexInstance,
    pub order: Vec<String>,
    pub columns: BTreeMap<String, Vec<RingElement>>,
}

impl FamilyInstance {
    pub fn build(&self, ring: &GorensteinRing) -> StarkFamily {
        let base = self.base.build(ring);
        let columns: Vec<Vec<RingElement>> =
            self.order.iter().map(|l| self.columns[l].clone()).collect();
        StarkFamily::new(ring.clone(), base, self.order.clone(), columns)
    }
}

pub fn rand_family_instance(
    ring: &GorensteinRing,
    rng: &mut SplitMix64,
    max_vertices: usize,
) -> FamilyInstance {
    let r = 1 + rng.below(2) as usize;
    let e = 1 + rng.below(2) as usize;
    let d0 = r + e;
    let base = ComplexInstance { d: d0, e, phi: rand_rmatrix(ring, d0, e, rng) };
    let q = 1 + rng.below(max_vertices as u64) as usize;
    let order: Vec<String> = (0..q).map(|i| format!("q{}", i + 1)).collect();
    let mut columns = BTreeMap::new();
    for l in &order {
        columns.insert(l.clone(), (0..e).map(|_| rand_element(ring, rng)).collect());
    }
    FamilyInstance { base, order, columns }
}

/// τ with corank-one residual and singular τ − 1: τ = I + U·diag(units,
/// 0)·V for invertible U, V.
pub fn rand_corank_one_tau(
    ring: &GorensteinRing,
    rng: &mut SplitMix64,
    max_k: usize,
) -> RMatrix {
    let k = 1 + rng.below(max_k as u64) as usize;
    let mut diag = RMatrix::zero(ring, k, k);
    for i in 0..k - 1 {
        diag.set(i, i, rand_unit(ring, rng));
    }
    let u = rand_invertible(ring, k, rng);
    let v = rand_invertible(ring, k, rng);
    let t = u.mul(ring, &diag).mul(ring, &v);
    let mut tau = t;
    for i in 0..k {
        tau.set(i, i, ring.add(tau.at(i, i), &ring.one()));
    }
    tau
}

/// Transition-table instance for Kolyvagin runs, keyed "l|q".
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableInstance {
    pub x: BTreeMap<String, Vec<u64>>,
}

impl TableInstance {
    pub fn build(&self) -> crate::kolyvagin::TransitionTable {
        let mut entries = BTreeMap::new();
        for (k, v) in &self.x {
            let parts: Vec<&str> = k.split('|').collect();
            let l: usize = parts[0].parse().unwrap();
            let q: usize = parts[1].parse().unwrap();
            entries.insert((l, q), RingElement { coeffs: v.clone() });
        }
        crate::kolyvagin::TransitionTable { entries }
    }
}

pub fn rand_table_instance(
    ring: &GorensteinRing,
    rng: &mut SplitMix64,
    primes: usize,
) -> TableInstance {
    let mut x = BTreeMap::new();
    for l in 0..primes {
        for q in 0..primes {
            if l != q {
                x.insert(format!("{}|{}", l, q), rand_element(ring, rng).coeffs);
            }
        }
    }
    TableInstance { x }
}
