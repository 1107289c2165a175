//! Finite-depth tower checks: Fitting-ideal base change and containment
//! down coefficient towers (Z/p^i)[G], the torsion-dual isomorphism
//! (M[a_n])^* ≅ M^*/a_n·M^*, and Tor_1 transition maps across commuting
//! squares of quotient rings.

use crate::fitting;
use crate::linalg::{self, BaseMatrix};
use crate::modules::{self, PresentedModule, Subquotient};
use crate::ring::{GorensteinRing, GroupSpec, Ideal, RingElement, RingError};
use crate::rmatrix::{self, RMatrix};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LimitError {
    #[error("the embedding image does not generate the torsion submodule")]
    BadEmbedding,
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// The tower R_i = (Z/p^i)[G] for 1 ≤ i ≤ m_max, with projections given
/// by coefficient reduction.
pub struct RingTower {
    pub levels: Vec<GorensteinRing>,
}

impl RingTower {
    pub fn new(p: u64, m_max: u32, group: GroupSpec) -> Result<Self, RingError> {
        let mut levels = Vec::new();
        for i in 1..=m_max {
            levels.push(crate::ring::make_ring(p, i, group.clone())?);
        }
        Ok(RingTower { levels })
    }

    pub fn level(&self, i: usize) -> &GorensteinRing {
        &self.levels[i - 1]
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn top(&self) -> &GorensteinRing {
        self.levels.last().unwrap()
    }
}

/// M over the top level together with its reductions M_i = M ⊗ R_i.
pub struct ModuleTower<'a> {
    pub tower: &'a RingTower,
    pub levels: Vec<PresentedModule>,
}

impl<'a> ModuleTower<'a> {
    pub fn new(tower: &'a RingTower, top_module: PresentedModule) -> Self {
        assert!(top_module.ring == *tower.top());
        let mut levels = Vec::with_capacity(tower.depth());
        for i in 1..=tower.depth() {
            let target = tower.level(i);
            let rel = top_module.relations.project(&top_module.ring, target);
            levels.push(PresentedModule::new(target.clone(), top_module.gens, rel));
        }
        ModuleTower { tower, levels }
    }

    pub fn level(&self, i: usize) -> &PresentedModule {
        &self.levels[i - 1]
    }
}

/// Per-level verdicts of the tower checks for Fitting ideals.
#[derive(Debug, Clone)]
pub struct FittingTowerReport {
    /// image of Fitt^r(M_{i+1}) inside Fitt^r(M_i), per adjacent pair
    pub containment: Vec<bool>,
    /// base change Fitt^r(M_i) = image of Fitt^r(M_top), per level
    pub base_change: Vec<bool>,
}

impl FittingTowerReport {
    pub fn all_pass(&self) -> bool {
        self.containment.iter().all(|&b| b) && self.base_change.iter().all(|&b| b)
    }
}

pub fn fitting_tower_check(t: &ModuleTower, r: usize) -> FittingTowerReport {
    let depth = t.tower.depth();
    let top_fitt = fitting::fitting_ideal(t.level(depth), r);
    let mut containment = Vec::new();
    let mut base_change = Vec::new();
    let fitts: Vec<Ideal> =
        (1..=depth).map(|i| fitting::fitting_ideal(t.level(i), r)).collect();
    for i in 1..depth {
        let upper = &fitts[i]; // level i+1
        let lower = &fitts[i - 1];
        let image = upper.project(t.tower.level(i));
        containment.push(lower.contains_ideal(&image));
    }
    for i in 1..=depth {
        let image = top_fitt.project(t.tower.level(i));
        base_change.push(image == fitts[i - 1]);
    }
    FittingTowerReport { containment, base_change }
}

/// The canonical embedding R_n ↪ R_{n+1}, 1 ↦ p (smallest representative
/// generating the a_n-torsion of R_{n+1}).
pub fn canonical_embedding(
    small: &GorensteinRing,
    big: &GorensteinRing,
) -> Result<(), LimitError> {
    assert_eq!(small.group(), big.group());
    assert_eq!(small.m() + 1, big.m());
    // image p·R_big must equal { y : p^n·y = 0 }
    let p_big = big.from_scalar(big.p());
    let image = Ideal::principal(big.clone(), p_big);
    let pn = big.from_scalar(mod_pow(big.p(), small.m(), big.modulus()));
    let torsion = Ideal::principal(big.clone(), pn).annihilator();
    if image != torsion {
        return Err(LimitError::BadEmbedding);
    }
    Ok(())
}

fn mod_pow(base: u64, exp: u32, modulus: u64) -> u64 {
    let mut acc = 1u64 % modulus;
    for _ in 0..exp {
        acc = acc * base % modulus;
    }
    acc
}

/// Reinterpret a module over R_big killed by a_n = (p^n) as a presented
/// module over R_small = R_big/(p^n): keep the generators, project the
/// relation span.
fn descend_module(big_mod: &PresentedModule, small: &GorensteinRing) -> PresentedModule {
    let big = &big_mod.ring;
    let rows: Vec<Vec<RingElement>> = (0..big_mod.relspan().rows)
        .map(|r| {
            rmatrix::group_vec(big, big_mod.relspan().row(r))
                .into_iter()
                .map(|e| big.project(small, &e))
                .collect()
        })
        .collect();
    let rel = if rows.is_empty() {
        RMatrix::zero(small, 0, big_mod.gens)
    } else {
        RMatrix::from_rows(rows)
    };
    PresentedModule::new(small.clone(), big_mod.gens, rel)
}

/// The a_n-torsion submodule M[p^n] of M over R_{n+1}, as a subquotient
/// of the ambient free module, together with its R_n-presentation.
pub struct TorsionSubmodule {
    /// generators inside R_big^b
    pub gens: Vec<Vec<RingElement>>,
    /// presented over R_small
    pub module: PresentedModule,
}

fn torsion_submodule(
    m: &PresentedModule,
    small: &GorensteinRing,
) -> TorsionSubmodule {
    let big = &m.ring;
    let g = big.size();
    let pn = mod_pow(big.p(), small.m(), big.modulus());
    // x with p^n·x in the relation span
    let mut scaled = BaseMatrix::identity(m.gens * g, big.modulus());
    for e in scaled.entries.iter_mut() {
        *e = *e * pn % big.modulus();
    }
    let pre = modules::preimage_span(&scaled, m.relspan());
    let candidates: Vec<Vec<RingElement>> =
        (0..pre.rows).map(|r| rmatrix::group_vec(big, pre.row(r))).collect();
    let sub = modules::present_subquotient(big, m.gens, &candidates, m.relspan());
    // the R_big-presentation of the torsion is killed by p^n, so its
    // relation span descends
    let module = descend_module(&sub.module, small);
    TorsionSubmodule { gens: sub.gens, module }
}

/// Verify (M[a_n])^* ≅ M^*/a_n·M^* via the canonical embedding 1 ↦ p.
pub fn torsion_dual_check(m: &PresentedModule, small: &GorensteinRing) -> Result<bool, LimitError> {
    let big = m.ring.clone();
    canonical_embedding(small, &big)?;
    let pn = mod_pow(big.p(), small.m(), big.modulus());

    let torsion = torsion_submodule(m, small);
    let lhs = modules::dual(&torsion.module); // over R_small

    // rhs: M^*/p^n·M^*, presented over R_small
    let m_dual = modules::dual(m);
    let s = m_dual.module.gens;
    let mut rel_rows = m_dual.module.relations.row_vecs();
    for i in 0..s {
        let mut row = vec![big.zero(); s];
        row[i] = big.from_scalar(pn);
        rel_rows.push(row);
    }
    let rhs_big = PresentedModule::new(
        big.clone(),
        s,
        if rel_rows.is_empty() {
            RMatrix::zero(&big, 0, s)
        } else {
            RMatrix::from_rows(rel_rows)
        },
    );
    let rhs = descend_module(&rhs_big, small);

    // the induced map: restrict each functional to the torsion and divide
    // by p (the inverse of the embedding)
    let mut rows = Vec::with_capacity(s);
    for h in &m_dual.hom_vectors {
        let mut vals = Vec::with_capacity(torsion.gens.len());
        for gen in &torsion.gens {
            let mut v = big.zero();
            for (hj, xj) in h.iter().zip(gen.iter()) {
                v = big.add(&v, &big.mul(hj, xj));
            }
            // v lies in p·R_big; divide coefficients by p
            let coeffs: Vec<u64> = v
                .coeffs
                .iter()
                .map(|&c| {
                    debug_assert_eq!(c % big.p(), 0, "value must be divisible by p");
                    c / big.p()
                })
                .collect();
            vals.push(RingElement { coeffs });
        }
        let coords = match rmatrix::rspan_solve(small, &lhs.hom_vectors, &vals) {
            Some(c) => c,
            None => return Ok(false),
        };
        rows.push(coords);
    }
    let matrix = if s == 0 {
        RMatrix::zero(small, 0, lhs.module.gens)
    } else {
        RMatrix::from_rows(rows)
    };
    let map = match modules::ModuleMap::new(rhs.clone(), lhs.module.clone(), matrix) {
        Ok(f) => f,
        Err(_) => return Ok(false),
    };
    Ok(map.is_bijective())
}

/// Tor_1 over a ring against a coefficient quotient ring S = R/(p^s),
/// presented over S as ker(Ā)/im(B̄) from a two-step resolution.
pub struct TorModule {
    pub s_ring: GorensteinRing,
    pub width: usize,
    /// Howell span of the cycles inside S^a
    pub cycles: BaseMatrix,
    /// Howell span of the boundaries
    pub boundaries: BaseMatrix,
    pub subquotient: Subquotient,
}

pub fn tor_one(m: &PresentedModule, s_ring: &GorensteinRing) -> TorModule {
    let r_ring = &m.ring;
    let a_mat = &m.relations; // R^a → R^b
    let a = a_mat.rows;
    // second resolution step: syzygies of the relation rows
    let b_rows: Vec<Vec<RingElement>> = if a == 0 {
        Vec::new()
    } else {
        let ker = linalg::left_kernel(&a_mat.expand(r_ring));
        (0..ker.rows).map(|r| rmatrix::group_vec(r_ring, ker.row(r))).collect()
    };
    // tensor with S: reduce both matrices
    let a_s = a_mat.project(r_ring, s_ring);
    let g = s_ring.size();
    let cycles = if a == 0 {
        BaseMatrix::zero(0, 0, s_ring.modulus())
    } else if m.gens == 0 {
        linalg::howell(&BaseMatrix::identity(a * g, s_ring.modulus()))
    } else {
        linalg::howell(&linalg::left_kernel(&a_s.expand(s_ring)))
    };
    let b_s: Vec<Vec<RingElement>> = b_rows
        .iter()
        .map(|row| row.iter().map(|e| r_ring.project(s_ring, e)).collect())
        .collect();
    let boundaries = rmatrix::rspan(s_ring, &b_s, a);
    let candidates: Vec<Vec<RingElement>> =
        (0..cycles.rows).map(|r| rmatrix::group_vec(s_ring, cycles.row(r))).collect();
    let subquotient = modules::present_subquotient(s_ring, a, &candidates, &boundaries);
    TorModule {
        s_ring: s_ring.clone(),
        width: a,
        cycles,
        boundaries,
        subquotient,
    }
}

impl TorModule {
    pub fn cardinality_exp(&self) -> u64 {
        self.subquotient.module.cardinality_exp()
    }
}

/// Image span of reducing the cycles of `src` into the codomain of `dst`
/// (same resolution width, smaller coefficients), inside dst's quotient.
fn transition_image_exp(src: &TorModule, dst: &TorModule) -> Option<u64> {
    if src.width != dst.width {
        return None;
    }
    let small = &dst.s_ring;
    let big = &src.s_ring;
    // reduce the source cycle span
    let reduced_rows: Vec<Vec<u64>> = (0..src.cycles.rows)
        .map(|r| {
            let grouped = rmatrix::group_vec(big, src.cycles.row(r));
            let projected: Vec<RingElement> =
                grouped.iter().map(|e| big.project(small, e)).collect();
            rmatrix::expand_vec(small, &projected)
        })
        .collect();
    let reduced = linalg::howell(&BaseMatrix::from_rows(
        reduced_rows,
        dst.width * small.size(),
        small.modulus(),
    ));
    // must land inside the destination cycles
    if !linalg::span_contains_all(&dst.cycles, &reduced) {
        return None;
    }
    let total = linalg::span_sum(&reduced, &dst.boundaries);
    Some(linalg::span_size_exp(&total) - linalg::span_size_exp(&dst.boundaries))
}

/// Verdicts for the Tor transition between adjacent tower levels.
#[derive(Debug, Clone)]
pub struct TorTransitionReport {
    pub cycles_map_to_cycles: bool,
    pub fitting_annihilates: bool,
    /// |coker(Tor transition)| against the predicted cokernel of the base
    /// change map
    pub cokernel_cardinalities_match: bool,
}

impl TorTransitionReport {
    pub fn all_pass(&self) -> bool {
        self.cycles_map_to_cycles && self.fitting_annihilates && self.cokernel_cardinalities_match
    }
}

/// Check the Tor_1 transition square for M over R_{n+1} with coefficient
/// quotients S_i = R_i/(p^{s_i}); `s_big` and `s_small` are the exponents
/// at the two levels (s_small ≤ s_big, both ≥ 1).
pub fn tor_transition_check(
    m_big: &PresentedModule,
    r_small: &GorensteinRing,
    s_big_exp: u32,
    s_small_exp: u32,
) -> TorTransitionReport {
    let r_big = &m_big.ring;
    let s_big = r_big.quotient_ring(s_big_exp).expect("quotient exists");
    let s_small = r_small.quotient_ring(s_small_exp).expect("quotient exists");

    let m_small = PresentedModule::new(
        r_small.clone(),
        m_big.gens,
        m_big.relations.project(r_big, r_small),
    );

    let tor_big = tor_one(m_big, &s_big);
    let tor_small = tor_one(&m_small, &s_small);
    let image_exp = transition_image_exp(&tor_big, &tor_small);
    let cycles_map_to_cycles = image_exp.is_some();

    // Fitt^0(M_i) annihilates Tor_1(M_i, S_i): check on generators at the
    // small level
    let fitt0 = fitting::fitting_ideal(&m_small, 0).project(&s_small);
    let mut fitting_annihilates = true;
    for a in &fitt0.generators {
        for gen in &tor_small.subquotient.gens {
            let scaled: Vec<RingElement> = gen.iter().map(|x| s_small.mul(a, x)).collect();
            let flat = rmatrix::expand_vec(&s_small, &scaled);
            let reduced = linalg::reduce_mod_span(
                &flat,
                &linalg::span_sum(&tor_small.boundaries, &BaseMatrix::zero(0, flat.len(), s_small.modulus())),
            );
            if reduced.iter().any(|&v| v != 0) {
                fitting_annihilates = false;
            }
        }
    }

    // cokernel comparison: coker(transition) against
    // coker(Tor_1^{R_big}(M, R_small) → Tor_1^{S_big}(M⊗S_big, S_small))
    let cokernel_cardinalities_match = match image_exp {
        None => false,
        Some(img) => {
            let coker1 = tor_small.cardinality_exp() - img;
            let tor_mixed_src = tor_one(m_big, r_small);
            let m_sbig = PresentedModule::new(
                s_big.clone(),
                m_big.gens,
                m_big.relations.project(r_big, &s_big),
            );
            let tor_mixed_dst = tor_one(&m_sbig, &s_small);
            let coker2 = match transition_image_exp(&tor_mixed_src, &tor_mixed_dst) {
                None => return TorTransitionReport {
                    cycles_map_to_cycles,
                    fitting_annihilates,
                    cokernel_cardinalities_match: false,
                },
                Some(img2) => tor_mixed_dst.cardinality_exp() - img2,
            };
            coker1 == coker2
        }
    };

    TorTransitionReport { cycles_map_to_cycles, fitting_annihilates, cokernel_cardinalities_match }
}
