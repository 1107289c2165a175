//! Abstract Stark systems over finite vertex sets: families of quadratic
//! complexes indexed by the subset lattice, the module of compatible
//! bidual families, the determinant-to-Stark map, the regulator map, and
//! the core-theorem verifier.
//!
//! A family is realized by column adjunction: C_S extends the base
//! complex by one generator per vertex of S, mapping to the prescribed
//! column.  New generators sit first in the basis, ordered by the vertex
//! order, so every sign is pinned down.

use crate::biduals::contract_free;
use crate::complexes::{self, QuadraticComplex};
use crate::fitting;
use crate::linalg::{self, BaseMatrix};
use crate::modules::{self, PresentedModule};
use crate::ring::{GorensteinRing, Ideal, RingElement};
use crate::rmatrix::{self, RMatrix};
use crate::wedge;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StarkError {
    #[error("subset relation violated")]
    NotASubset,
    #[error("family rank must equal d0 − e and be non-negative")]
    ShapeMismatch,
    #[error("determinant family is not transition-compatible")]
    IncompatibleFamily,
}

#[derive(Clone, Debug)]
pub struct StarkFamily {
    pub ring: GorensteinRing,
    /// base complex R^(d0) → R^e
    pub base: QuadraticComplex,
    /// vertex labels in the fixed order ≺
    pub labels: Vec<String>,
    /// one column vector h_v in R^e per vertex
    pub columns: Vec<Vec<RingElement>>,
}

/// Subsets are sorted lists of vertex indices.
pub type Subset = Vec<usize>;

/// sgn(S', S): the sign moving ∧_(S'∖S) past ∧_S into sorted order.
pub fn sign(s_prime: &Subset, s: &Subset) -> Result<i64, StarkError> {
    if !s.iter().all(|v| s_prime.contains(v)) {
        return Err(StarkError::NotASubset);
    }
    let diff: Vec<usize> = s_prime.iter().copied().filter(|v| !s.contains(v)).collect();
    let mut inversions = 0usize;
    for &a in &diff {
        for &b in s {
            if a > b {
                inversions += 1;
            }
        }
    }
    Ok(if inversions.is_multiple_of(2) { 1 } else { -1 })
}

/// Merge sign of the disjoint difference blocks, the correction term in
/// the chain rule for sgn (plain multiplicativity fails: moving the outer
/// block past the middle one costs the shuffle of the two differences).
pub fn sign_chain_correction(s2: &Subset, s1: &Subset, s0: &Subset) -> i64 {
    let outer: Vec<usize> = s2.iter().copied().filter(|v| !s1.contains(v)).collect();
    let inner: Vec<usize> = s1.iter().copied().filter(|v| !s0.contains(v)).collect();
    wedge::shuffle_sign(&outer, &inner)
}

impl StarkFamily {
    pub fn new(
        ring: GorensteinRing,
        base: QuadraticComplex,
        labels: Vec<String>,
        columns: Vec<Vec<RingElement>>,
    ) -> Self {
        assert_eq!(labels.len(), columns.len());
        for c in &columns {
            assert_eq!(c.len(), base.e);
        }
        StarkFamily { ring, base, labels, columns }
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    /// The Stark rank r = d0 − e.
    pub fn rank(&self) -> i64 {
        self.base.chi()
    }

    pub fn all_subsets(&self) -> Vec<Subset> {
        let n = self.vertex_count();
        let mut out = Vec::new();
        for size in 0..=n {
            out.extend(wedge::subsets(n, size));
        }
        out
    }

    /// C_S: the vertex generators come first (in vertex order), then the
    /// base generators.
    pub fn complex_for(&self, s: &Subset) -> QuadraticComplex {
        let mut rows: Vec<Vec<RingElement>> = s.iter().map(|&v| self.columns[v].clone()).collect();
        rows.extend(self.base.phi.row_vecs());
        let phi = if rows.is_empty() {
            RMatrix::zero(&self.ring, 0, self.base.e)
        } else {
            RMatrix::from_rows(rows)
        };
        QuadraticComplex::new(self.ring.clone(), phi)
    }

    /// Rank of the bidual carrier at subset S: r + |S|.
    pub fn carrier_rank(&self, s: &Subset) -> usize {
        (self.rank() as usize) + s.len()
    }

    /// Width of the wedge carrier Λ^(r+|S|) F0(S) in R-coordinates.
    pub fn carrier_width(&self, s: &Subset) -> usize {
        let c = self.complex_for(s);
        wedge::binomial(c.d, self.carrier_rank(s))
    }

    /// ∩^(r+|S|) M_S inside its wedge carrier.
    pub fn carrier_span(&self, s: &Subset) -> BaseMatrix {
        self.complex_for(s).kernel_bidual().carrier_span(self.carrier_rank(s))
    }

    /// The coordinate functional f_v on F0(S ∪ {v}) as a covector.
    fn coordinate_covector(&self, s_with_v: &Subset, v: usize) -> Vec<RingElement> {
        let d = self.base.d + s_with_v.len();
        let pos = s_with_v.iter().position(|&w| w == v).expect("vertex present");
        let mut cov = vec![self.ring.zero(); d];
        cov[pos] = self.ring.one();
        cov
    }

    /// Transition sgn(S∪{v}, S)·f_v from the carrier at S∪{v} to the
    /// carrier at S, including the coordinate re-indexing.
    pub fn transition(&self, s: &Subset, v: usize, w: &[RingElement]) -> Vec<RingElement> {
        let ring = &self.ring;
        let mut s_with_v = s.clone();
        s_with_v.push(v);
        s_with_v.sort_unstable();
        let cov = self.coordinate_covector(&s_with_v, v);
        let d_big = self.base.d + s_with_v.len();
        let rank_big = self.carrier_rank(&s_with_v);
        let contracted = contract_free(ring, d_big, rank_big, w, &cov);
        // re-index wedge monomials from F0(S∪{v}) to F0(S)
        let v_pos = s_with_v.iter().position(|&x| x == v).unwrap();
        let d_small = d_big - 1;
        let rank_small = rank_big - 1;
        let mut out = vec![ring.zero(); wedge::binomial(d_small, rank_small)];
        for (ki, k_set) in wedge::subsets(d_big, rank_small).iter().enumerate() {
            if ring.is_zero(&contracted[ki]) {
                continue;
            }
            assert!(
                !k_set.contains(&v_pos),
                "transition output must avoid the contracted coordinate"
            );
            let shifted: Vec<usize> =
                k_set.iter().map(|&x| if x > v_pos { x - 1 } else { x }).collect();
            out[wedge::subset_index(d_small, &shifted)] = contracted[ki].clone();
        }
        let sgn = sign(&s_with_v, s).unwrap();
        if sgn < 0 {
            out = out.iter().map(|x| ring.neg(x)).collect();
        }
        out
    }

    /// Embed a rank-`rank` wedge vector over F0(S) into the layout of
    /// F0(S ∪ {v}).
    pub fn embed_into(
        &self,
        s: &Subset,
        v: usize,
        rank: usize,
        w: &[RingElement],
    ) -> Vec<RingElement> {
        let ring = &self.ring;
        let mut s_with_v = s.clone();
        s_with_v.push(v);
        s_with_v.sort_unstable();
        let v_pos = s_with_v.iter().position(|&x| x == v).unwrap();
        let d_small = self.base.d + s.len();
        let d_big = d_small + 1;
        let mut out = vec![ring.zero(); wedge::binomial(d_big, rank)];
        for (ji, j_set) in wedge::subsets(d_small, rank).iter().enumerate() {
            if ring.is_zero(&w[ji]) {
                continue;
            }
            let shifted: Vec<usize> =
                j_set.iter().map(|&x| if x >= v_pos { x + 1 } else { x }).collect();
            out[wedge::subset_index(d_big, &shifted)] = w[ji].clone();
        }
        out
    }

    /// H^1(C_∅) together with the boundary classes g_v(1) = [h_v].
    pub fn z_empty(&self) -> PresentedModule {
        self.base.h1()
    }

    /// Ω = im(Σ_v g_v) ⊆ H^1(C_∅) as a presented module.
    pub fn omega(&self, s: &Subset) -> PresentedModule {
        let ring = &self.ring;
        let rows: Vec<Vec<RingElement>> = s.iter().map(|&v| self.columns[v].clone()).collect();
        let im_span = rmatrix::rspan(ring, &self.base.phi.row_vecs(), self.base.e);
        modules::present_subquotient(ring, self.base.e, &rows, &im_span).module
    }

    /// Exactness of 0 → M_S → M_S' → ⊕R → Z_S → Z_S' → 0 for a covering
    /// pair, by cardinality bookkeeping and span comparisons.
    pub fn five_term_exact(&self, s: &Subset, v: usize) -> bool {
        let ring = &self.ring;
        let mut s_with_v = s.clone();
        s_with_v.push(v);
        s_with_v.sort_unstable();
        let c_small = self.complex_for(s);
        let c_big = self.complex_for(&s_with_v);
        let m_small = c_small.h0().module.cardinality_exp();
        let m_big = c_big.h0().module.cardinality_exp();
        let z_small = c_small.h1().cardinality_exp();
        let z_big = c_big.h1().cardinality_exp();
        let r_exp = ring.cardinality_exp();
        // alternating cardinality identity for the five-term sequence
        if m_small + r_exp + z_big != m_big + z_small {
            return false;
        }
        // im(f_v on M_big) = ker(g_v: R → Z_small): both are ideals of R
        let v_pos = s_with_v.iter().position(|&x| x == v).unwrap();
        let ker_big = linalg::left_kernel(&c_big.phi.expand(ring));
        let mut image_rows = Vec::new();
        for rrow in 0..ker_big.rows {
            let grouped = rmatrix::group_vec(ring, ker_big.row(rrow));
            image_rows.push(vec![grouped[v_pos].clone()]);
        }
        let image = rmatrix::rspan(ring, &image_rows, 1);
        // ker(g_v) = { a : a·h_v ∈ im(phi_S) }
        let z = c_small.h1();
        let hv = self.columns[v].clone();
        let mut blocks = ring.regular_rep(&hv[0]);
        for j in 1..self.base.e {
            blocks = blocks.hconcat(&ring.regular_rep(&hv[j]));
        }
        let kernel_ideal = modules::preimage_span(&blocks, z.relspan());
        image == kernel_ideal
    }
}

/// A Stark system: one carrier vector per subset, compatible under the
/// signed transitions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarkSystem {
    /// indexed like StarkFamily::all_subsets()
    pub components: Vec<Vec<RingElement>>,
}

/// The solution module SS^r of the finite compatibility system over the
/// subset lattice, returned through a generating set.
#[derive(Debug)]
pub struct StarkSpace {
    pub subsets: Vec<Subset>,
    /// generator systems
    pub generators: Vec<StarkSystem>,
    /// per-subset carrier spans (Howell)
    pub carriers: Vec<BaseMatrix>,
    /// rows of the unknown-coefficient space, for membership tests
    solution_rows: BaseMatrix,
    carrier_rows: Vec<usize>,
}

pub fn stark_space(family: &StarkFamily, r: usize) -> Result<StarkSpace, StarkError> {
    if family.rank() < 0 || family.rank() as usize != r {
        return Err(StarkError::ShapeMismatch);
    }
    let ring = &family.ring;
    let g = ring.size();
    let n_mod = ring.modulus();
    let subsets = family.all_subsets();
    let carriers: Vec<BaseMatrix> = subsets.iter().map(|s| family.carrier_span(s)).collect();
    let carrier_rows: Vec<usize> = carriers.iter().map(|c| c.rows).collect();
    let unknowns: usize = carrier_rows.iter().sum();
    if unknowns == 0 {
        return Ok(StarkSpace {
            subsets,
            generators: Vec::new(),
            carriers,
            solution_rows: BaseMatrix::zero(0, 0, n_mod),
            carrier_rows,
        });
    }
    // equations: for each cover (S, S∪{v}):
    //   transition(c_{S∪v}·W_{S∪v}) − c_S·W_S = 0
    let mut eq_cols = 0usize;
    let mut covers = Vec::new();
    for (si, s) in subsets.iter().enumerate() {
        for v in 0..family.vertex_count() {
            if s.contains(&v) {
                continue;
            }
            let mut sv = s.clone();
            sv.push(v);
            sv.sort_unstable();
            let ti = subsets.iter().position(|x| *x == sv).unwrap();
            let width = family.carrier_width(s) * g;
            covers.push((si, ti, v, eq_cols));
            eq_cols += width;
        }
    }
    let mut mat = BaseMatrix::zero(unknowns, eq_cols, n_mod);
    let offsets: Vec<usize> = {
        let mut acc = 0;
        carrier_rows
            .iter()
            .map(|&r| {
                let o = acc;
                acc += r;
                o
            })
            .collect()
    };
    for &(si, ti, v, col0) in &covers {
        let s = &subsets[si];
        // −identity contribution of the small-side coefficients
        for row in 0..carrier_rows[si] {
            let w = carriers[si].row(row);
            for (c, &val) in w.iter().enumerate() {
                if val != 0 {
                    mat.set(offsets[si] + row, col0 + c, (n_mod - val) % n_mod);
                }
            }
        }
        // +transition contribution of the big-side coefficients
        for row in 0..carrier_rows[ti] {
            let w = rmatrix::group_vec(ring, carriers[ti].row(row));
            let t = family.transition(s, v, &w);
            let flat = rmatrix::expand_vec(ring, &t);
            for (c, &val) in flat.iter().enumerate() {
                if val != 0 {
                    let cur = mat.at(offsets[ti] + row, col0 + c);
                    mat.set(offsets[ti] + row, col0 + c, (cur + val) % n_mod);
                }
            }
        }
    }
    let solution_rows = if eq_cols == 0 {
        linalg::howell(&BaseMatrix::identity(unknowns, n_mod))
    } else {
        linalg::howell(&linalg::left_kernel(&mat))
    };
    let mut generators = Vec::new();
    for row in 0..solution_rows.rows {
        let lambda = solution_rows.row(row);
        let mut components = Vec::with_capacity(subsets.len());
        for (si, s) in subsets.iter().enumerate() {
            let width = family.carrier_width(s) * g;
            let mut flat = vec![0u64; width];
            for r2 in 0..carrier_rows[si] {
                let coef = lambda[offsets[si] + r2];
                if coef == 0 {
                    continue;
                }
                for (c, &val) in carriers[si].row(r2).iter().enumerate() {
                    flat[c] = (flat[c] + coef * val) % n_mod;
                }
            }
            components.push(rmatrix::group_vec(ring, &flat));
        }
        generators.push(StarkSystem { components });
    }
    Ok(StarkSpace { subsets, generators, carriers, solution_rows, carrier_rows })
}

impl StarkSpace {
    pub fn subset_index(&self, s: &Subset) -> usize {
        self.subsets.iter().position(|x| x == s).unwrap()
    }

    /// Sample a random element of the solution module.
    pub fn sample(
        &self,
        family: &StarkFamily,
        rng: &mut crate::rng::SplitMix64,
    ) -> StarkSystem {
        let ring = &family.ring;
        let n_mod = ring.modulus();
        let mut components: Vec<Vec<RingElement>> = self
            .subsets
            .iter()
            .map(|s| vec![ring.zero(); family.carrier_width(s)])
            .collect();
        for gen in &self.generators {
            let c = rng.below(n_mod);
            if c == 0 {
                continue;
            }
            let scalar = ring.from_scalar(c);
            for (acc, comp) in components.iter_mut().zip(gen.components.iter()) {
                for (a, b) in acc.iter_mut().zip(comp.iter()) {
                    *a = ring.add(a, &ring.mul(&scalar, b));
                }
            }
        }
        StarkSystem { components }
    }

    /// Verify the compatibility relations of a system on every covering
    /// pair.
    pub fn is_compatible(&self, family: &StarkFamily, sys: &StarkSystem) -> bool {
        let ring = &family.ring;
        for (si, s) in self.subsets.iter().enumerate() {
            for v in 0..family.vertex_count() {
                if s.contains(&v) {
                    continue;
                }
                let mut sv = s.clone();
                sv.push(v);
                sv.sort_unstable();
                let ti = self.subset_index(&sv);
                let got = family.transition(s, v, &sys.components[ti]);
                let want = &sys.components[si];
                if rmatrix::expand_vec(ring, &got) != rmatrix::expand_vec(ring, want) {
                    return false;
                }
            }
        }
        true
    }

    /// The kernel of projection to the component at S, inside the
    /// solution module: generators with vanishing S-component.
    pub fn projection_kernel(&self, family: &StarkFamily, s: &Subset) -> Vec<StarkSystem> {
        let ring = &family.ring;
        let g = ring.size();
        let n_mod = ring.modulus();
        let si = self.subset_index(s);
        if self.solution_rows.rows == 0 {
            return Vec::new();
        }
        // restrict the generator matrix to the S-block of carrier coords
        let width = family.carrier_width(s) * g;
        let offset: usize = self.carrier_rows[..si]
            .iter()
            .sum::<usize>();
        let mut block = BaseMatrix::zero(self.solution_rows.rows, width, n_mod);
        for row in 0..self.solution_rows.rows {
            let lambda = self.solution_rows.row(row);
            let mut flat = vec![0u64; width];
            for r2 in 0..self.carrier_rows[si] {
                let coef = lambda[offset + r2];
                if coef == 0 {
                    continue;
                }
                for (c, &val) in self.carriers[si].row(r2).iter().enumerate() {
                    flat[c] = (flat[c] + coef * val) % n_mod;
                }
            }
            for (c, &val) in flat.iter().enumerate() {
                block.set(row, c, val);
            }
        }
        let lam_ker = linalg::left_kernel(&block);
        let mut out = Vec::new();
        for kr in 0..lam_ker.rows {
            let mix = lam_ker.row(kr);
            // combine generators with these weights
            let mut components: Vec<Vec<RingElement>> = self
                .subsets
                .iter()
                .map(|t| vec![ring.zero(); family.carrier_width(t)])
                .collect();
            for (gi, gen) in self.generators.iter().enumerate() {
                let c = mix[gi];
                if c == 0 {
                    continue;
                }
                let scalar = ring.from_scalar(c);
                for (acc, comp) in components.iter_mut().zip(gen.components.iter()) {
                    for (a, b) in acc.iter_mut().zip(comp.iter()) {
                        *a = ring.add(a, &ring.mul(&scalar, b));
                    }
                }
            }
            out.push(StarkSystem { components });
        }
        out
    }
}

/// Build the transition-compatible determinant family from the value at
/// the empty set.  On canonical determinant bases the triangle-induced
/// transition isomorphisms are the identity (verified by the tested
/// compatibility of det_to_stark outputs), so the family is constant.
pub fn det_family_from_empty(
    family: &StarkFamily,
    alpha_empty: &RingElement,
) -> Vec<RingElement> {
    family.all_subsets().iter().map(|_| alpha_empty.clone()).collect()
}

/// (ϑ_{φ_S}(a_S))_S for a compatible determinant family; the output is
/// verified to satisfy the Stark compatibility relations.
pub fn det_to_stark(
    family: &StarkFamily,
    alphas: &[RingElement],
    space: &StarkSpace,
) -> Result<StarkSystem, StarkError> {
    // input compatibility: the canonical-basis transitions are trivial,
    // so the scalars must agree across covers
    let subsets = family.all_subsets();
    for (si, s) in subsets.iter().enumerate() {
        for v in 0..family.vertex_count() {
            if s.contains(&v) {
                continue;
            }
            let mut sv = s.clone();
            sv.push(v);
            sv.sort_unstable();
            let ti = subsets.iter().position(|x| *x == sv).unwrap();
            if alphas[si] != alphas[ti] {
                return Err(StarkError::IncompatibleFamily);
            }
        }
    }
    let mut components = Vec::with_capacity(subsets.len());
    for (si, s) in subsets.iter().enumerate() {
        let c = family.complex_for(s);
        let t = complexes::theta(&c, &alphas[si]).map_err(|_| StarkError::ShapeMismatch)?;
        components.push(t);
    }
    let sys = StarkSystem { components };
    if !space.is_compatible(family, &sys) {
        return Err(StarkError::IncompatibleFamily);
    }
    Ok(sys)
}

/// The regulator: wedge the per-vertex functionals against each value,
/// ((∧_{v∈S} ψ_v)(eps_S))_S, one element of ∩^r M_S per subset.
pub fn regulator(
    family: &StarkFamily,
    psi: &[Vec<RingElement>],
    eps: &StarkSystem,
) -> Vec<Vec<RingElement>> {
    let ring = &family.ring;
    assert_eq!(psi.len(), family.vertex_count());
    let subsets = family.all_subsets();
    let mut out = Vec::with_capacity(subsets.len());
    for (si, s) in subsets.iter().enumerate() {
        let d_s = family.base.d + s.len();
        let mut cur = eps.components[si].clone();
        let mut rank = family.carrier_rank(s);
        for &v in s {
            // restrict the ambient functional to the coordinates of F0(S)
            let mut cov = vec![ring.zero(); d_s];
            for (pos, &w) in s.iter().enumerate() {
                cov[pos] = psi[v][w].clone();
            }
            for j in 0..family.base.d {
                cov[s.len() + j] = psi[v][family.vertex_count() + j].clone();
            }
            cur = contract_free(ring, d_s, rank, &cur, &cov);
            rank -= 1;
        }
        out.push(cur);
    }
    out
}

/// Report of the core-theorem checks.
#[derive(Debug, Clone)]
pub struct CoreReport {
    pub stabilizing_subset: Subset,
    pub kernel_annihilated: bool,
    pub image_in_char_omega: bool,
    pub fitting_multiple_in_theta_image: bool,
    pub fitting_image_in_reflexive_fitting: bool,
}

impl CoreReport {
    pub fn all_pass(&self) -> bool {
        self.kernel_annihilated
            && self.image_in_char_omega
            && self.fitting_multiple_in_theta_image
            && self.fitting_image_in_reflexive_fitting
    }
}

/// Precomputed family-level data for the core-theorem checks, so that
/// many sampled systems can be verified against one family cheaply.
pub struct CoreVerifier {
    pub stabilizing_subset: Subset,
    pub kernel_annihilated: bool,
    char_omega: Ideal,
    j_ideal: Ideal,
    theta_empty: Vec<RingElement>,
    reflexive_fitt: Ideal,
    empty_index: usize,
    ring: GorensteinRing,
}

impl CoreVerifier {
    pub fn new(
        family: &StarkFamily,
        r: usize,
        space: &StarkSpace,
    ) -> Result<CoreVerifier, StarkError> {
        if family.rank() < 0 || family.rank() as usize != r {
            return Err(StarkError::ShapeMismatch);
        }
        let ring = family.ring.clone();
        let full: Subset = (0..family.vertex_count()).collect();
        let omega_full = family.omega(&full);
        let omega_exp = omega_full.cardinality_exp();
        // (1) stabilizing subset: smallest S with im(Σ_{v∈S} g_v) = Ω
        let mut stabilizing = full.clone();
        'outer: for size in 0..=family.vertex_count() {
            for s in wedge::subsets(family.vertex_count(), size) {
                if family.omega(&s).cardinality_exp() == omega_exp {
                    stabilizing = s;
                    break 'outer;
                }
            }
        }
        let s = &stabilizing;

        // (2) Fitt^{r+|S|}(M_S^*) annihilates ker(SS^r → ∩^{r+|S|} M_S)
        let c_s = family.complex_for(s);
        let m_s = c_s.h0();
        let m_s_dual = modules::dual(&m_s.module);
        let fitt = fitting::fitting_ideal(&m_s_dual.module, r + s.len());
        let kernel = space.projection_kernel(family, s);
        let mut kernel_annihilated = true;
        for sys in &kernel {
            for a in &fitt.generators {
                for comp in &sys.components {
                    let scaled: Vec<RingElement> = comp.iter().map(|x| ring.mul(a, x)).collect();
                    if scaled.iter().any(|x| !ring.is_zero(x)) {
                        kernel_annihilated = false;
                    }
                }
            }
        }

        let char_omega = fitting::characteristic_ideal(&omega_full);
        let h1_mod_omega = family.complex_for(&full).h1();
        let j_ideal = fitting::fitting_ideal(&h1_mod_omega, 0);
        let theta_empty =
            complexes::theta(&family.base, &ring.one()).map_err(|_| StarkError::ShapeMismatch)?;
        let fitt_h1 = fitting::fitting_ideal(&family.base.h1(), 0);
        let reflexive_fitt = fitt_h1.double_annihilator();
        let empty_index = space.subset_index(&Vec::new());
        Ok(CoreVerifier {
            stabilizing_subset: stabilizing,
            kernel_annihilated,
            char_omega,
            j_ideal,
            theta_empty,
            reflexive_fitt,
            empty_index,
            ring,
        })
    }

    pub fn check(&self, eps: &StarkSystem) -> CoreReport {
        let ring = &self.ring;
        let eps_empty = &eps.components[self.empty_index];
        // (3) im(eps_∅) ⊆ char(Ω)
        let im_eps = Ideal::new(ring.clone(), eps_empty.clone());
        let image_in_char_omega = self.char_omega.contains_ideal(&im_eps);
        // (4) J·eps_∅ ⊆ im(ϑ_∅) and J·im(eps_∅) ⊆ Fitt^0(H^1(C_∅))^{**}
        let mut fitting_multiple_in_theta_image = true;
        for a in &self.j_ideal.generators {
            let scaled: Vec<RingElement> = eps_empty.iter().map(|x| ring.mul(a, x)).collect();
            if rmatrix::rspan_solve(ring, std::slice::from_ref(&self.theta_empty), &scaled).is_none() {
                fitting_multiple_in_theta_image = false;
            }
        }
        let product = self.j_ideal.product(&im_eps).expect("same ring");
        let fitting_image_in_reflexive_fitting = self.reflexive_fitt.contains_ideal(&product);
        CoreReport {
            stabilizing_subset: self.stabilizing_subset.clone(),
            kernel_annihilated: self.kernel_annihilated,
            image_in_char_omega,
            fitting_multiple_in_theta_image,
            fitting_image_in_reflexive_fitting,
        }
    }
}

pub fn verify_core(
    family: &StarkFamily,
    r: usize,
    space: &StarkSpace,
    eps: &StarkSystem,
) -> Result<CoreReport, StarkError> {
    Ok(CoreVerifier::new(family, r, space)?.check(eps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{make_ring, GroupSpec};

    fn z4() -> GorensteinRing {
        make_ring(2, 2, GroupSpec::trivial()).unwrap()
    }

    fn simple_family(ring: &GorensteinRing) -> StarkFamily {
        // base: R^2 → R with phi = (2, 0)^T, rank 1; one vertex with a
        // column spanning H^1 after adjunction
        let phi = RMatrix::from_rows(vec![vec![ring.from_scalar(2)], vec![ring.zero()]]);
        let base = QuadraticComplex::new(ring.clone(), phi);
        StarkFamily::new(
            ring.clone(),
            base,
            vec!["q1".into()],
            vec![vec![ring.one()]],
        )
    }

    #[test]
    fn sign_examples() {
        // Q = {v1 ≺ v2}
        assert_eq!(sign(&vec![0, 1], &vec![0, 1]).unwrap(), 1);
        assert_eq!(sign(&vec![0, 1], &vec![0]).unwrap(), -1); // v2 ∧ v1 = −v1 ∧ v2
        assert_eq!(sign(&vec![0, 1], &vec![1]).unwrap(), 1);
        assert_eq!(sign(&vec![0], &vec![0, 1]).unwrap_err(), StarkError::NotASubset);
    }

    #[test]
    fn sign_chain_rule_with_merge_correction() {
        // plain multiplicativity fails (e.g. ∅ ⊂ {1} ⊂ {0,1,2}), but the
        // corrected rule with the merge shuffle holds on every chain
        let subs: Vec<Subset> = vec![
            vec![],
            vec![0],
            vec![1],
            vec![2],
            vec![0, 1],
            vec![0, 2],
            vec![1, 2],
            vec![0, 1, 2],
        ];
        let mut plain_fails = false;
        for s0 in &subs {
            for s1 in &subs {
                for s2 in &subs {
                    if s0.iter().all(|v| s1.contains(v)) && s1.iter().all(|v| s2.contains(v)) {
                        let lhs = sign(s2, s0).unwrap();
                        let rhs = sign(s2, s1).unwrap()
                            * sign(s1, s0).unwrap()
                            * sign_chain_correction(s2, s1, s0);
                        assert_eq!(lhs, rhs);
                        if lhs != sign(s2, s1).unwrap() * sign(s1, s0).unwrap() {
                            plain_fails = true;
                        }
                    }
                }
            }
        }
        assert!(plain_fails);
    }

    #[test]
    fn empty_vertex_set_is_base_bidual() {
        let r = z4();
        let phi = RMatrix::from_rows(vec![vec![r.from_scalar(2)], vec![r.zero()]]);
        let base = QuadraticComplex::new(r.clone(), phi);
        let fam = StarkFamily::new(r.clone(), base, vec![], vec![]);
        let space = stark_space(&fam, 1).unwrap();
        assert_eq!(space.subsets, vec![Vec::<usize>::new()]);
        // SS^r = ∩^r M_∅: the solution space is the whole carrier
        let carrier = fam.carrier_span(&vec![]);
        assert_eq!(space.solution_rows.rows, carrier.rows);
    }

    #[test]
    fn stark_space_is_transition_compatible() {
        let r = z4();
        let fam = simple_family(&r);
        let space = stark_space(&fam, 1).unwrap();
        assert!(!space.generators.is_empty());
        for gen in &space.generators {
            assert!(space.is_compatible(&fam, gen));
        }
        let mut rng = crate::rng::SplitMix64::new(9);
        for _ in 0..5 {
            let sys = space.sample(&fam, &mut rng);
            assert!(space.is_compatible(&fam, &sys));
        }
    }

    #[test]
    fn five_term_exactness_for_simple_family() {
        let r = z4();
        let fam = simple_family(&r);
        assert!(fam.five_term_exact(&vec![], 0));
    }

    #[test]
    fn det_to_stark_lands_in_space() {
        let r = z4();
        let fam = simple_family(&r);
        let space = stark_space(&fam, 1).unwrap();
        let alphas = det_family_from_empty(&fam, &r.one());
        let sys = det_to_stark(&fam, &alphas, &space).unwrap();
        assert!(space.is_compatible(&fam, &sys));

        // zero family gives the zero system
        let zeros = det_family_from_empty(&fam, &r.zero());
        let zsys = det_to_stark(&fam, &zeros, &space).unwrap();
        for comp in &zsys.components {
            assert!(comp.iter().all(|x| r.is_zero(x)));
        }

        // incompatible family rejected
        let mut bad = alphas.clone();
        bad[1] = r.add(&bad[1], &r.one());
        assert!(matches!(
            det_to_stark(&fam, &bad, &space),
            Err(StarkError::IncompatibleFamily)
        ));
    }

    #[test]
    fn regulator_reproduces_transitions_for_coordinate_functionals() {
        let r = z4();
        let fam = simple_family(&r);
        let space = stark_space(&fam, 1).unwrap();
        let mut rng = crate::rng::SplitMix64::new(10);
        let eps = space.sample(&fam, &mut rng);
        // ψ_v = f_v: the ambient coordinate functional of vertex v
        let mut psi = Vec::new();
        for v in 0..fam.vertex_count() {
            let mut cov = vec![r.zero(); fam.vertex_count() + fam.base.d];
            cov[v] = r.one();
            psi.push(cov);
        }
        let reg = regulator(&fam, &psi, &eps);
        // at S the output is sgn(S, ∅)·eps_∅ embedded in the S-carrier;
        // for |S| = 1 the sign is +1
        let empty_idx = space.subset_index(&vec![]);
        let s_idx = space.subset_index(&vec![0]);
        let expected = fam.embed_into(&vec![], 0, 1, &eps.components[empty_idx]);
        assert_eq!(
            rmatrix::expand_vec(&r, &reg[s_idx]),
            rmatrix::expand_vec(&r, &expected)
        );
        // ψ_v = 0 kills the subsets containing v
        let zero_psi = vec![vec![r.zero(); fam.vertex_count() + fam.base.d]];
        let reg0 = regulator(&fam, &zero_psi, &eps);
        assert!(reg0[s_idx].iter().all(|x| r.is_zero(x)));
        // S = ∅ returns eps_∅ unchanged
        assert_eq!(
            rmatrix::expand_vec(&r, &reg0[empty_idx]),
            rmatrix::expand_vec(&r, &eps.components[empty_idx])
        );
    }

    #[test]
    fn verify_core_on_simple_family() {
        let r = z4();
        let fam = simple_family(&r);
        let space = stark_space(&fam, 1).unwrap();
        let mut rng = crate::rng::SplitMix64::new(11);
        for _ in 0..10 {
            let eps = space.sample(&fam, &mut rng);
            let report = verify_core(&fam, 1, &space, &eps).unwrap();
            assert!(report.all_pass(), "{:?}", report);
        }
        // the single vertex kills H^1, so the stabilizing subset is {0}
        let eps = space.sample(&fam, &mut rng);
        let report = verify_core(&fam, 1, &space, &eps).unwrap();
        assert_eq!(report.stabilizing_subset, vec![0]);
    }

    #[test]
    fn split_family_space_matches_base_kernel_bidual() {
        // base with H^1 = 0 and h_v = 0: transitions split, and SS^r has
        // the size of ∩^r ker(φ0)
        let r = z4();
        let phi = RMatrix::from_rows(vec![vec![r.one()], vec![r.from_scalar(2)]]);
        let base = QuadraticComplex::new(r.clone(), phi);
        assert!(base.h1().is_zero_module());
        let fam = StarkFamily::new(r.clone(), base, vec!["q1".into()], vec![vec![r.zero()]]);
        let space = stark_space(&fam, 1).unwrap();
        let empty: Subset = Vec::new();
        let base_carrier = fam.carrier_span(&empty);
        // distinct systems in the solution module, by enumeration
        let count = count_distinct_systems(&r, &space);
        assert_eq!(count, 1u64 << linalg::span_size_exp(&base_carrier));
        // the projection onto the ∅-component is onto the base carrier
        let ei = space.subset_index(&empty);
        let mut hit = Vec::new();
        for g in &space.generators {
            hit.push(rmatrix::expand_vec(&r, &g.components[ei]));
        }
        let hit_span = linalg::howell(&crate::linalg::BaseMatrix::from_rows(
            hit,
            base_carrier.cols,
            r.modulus(),
        ));
        assert_eq!(hit_span, base_carrier);
    }

    /// Enumerate all coefficient combinations of the generators and count
    /// the distinct systems they produce.
    fn count_distinct_systems(ring: &GorensteinRing, space: &StarkSpace) -> u64 {
        let n = ring.modulus();
        let k = space.generators.len();
        assert!(n.pow(k as u32) <= 1 << 16, "enumeration too large for the oracle");
        let flats: Vec<Vec<u64>> = space
            .generators
            .iter()
            .map(|g| rmatrix::expand_vec(ring, &g.components.concat()))
            .collect();
        let width = flats.first().map_or(0, |f| f.len());
        let mut seen = std::collections::BTreeSet::new();
        let mut coeffs = vec![0u64; k];
        loop {
            let mut acc = vec![0u64; width];
            for (i, f) in flats.iter().enumerate() {
                let c = coeffs[i];
                if c == 0 {
                    continue;
                }
                for (a, v) in acc.iter_mut().zip(f.iter()) {
                    *a = (*a + c * v) % n;
                }
            }
            seen.insert(acc);
            let mut i = 0;
            loop {
                if i == k {
                    return seen.len() as u64;
                }
                coeffs[i] += 1;
                if coeffs[i] < n {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn one_vertex_space_matches_exhaustive_lattice_solve() {
        // brute-force oracle: enumerate all pairs (c_∅, c_v) in the two
        // carriers and count the compatible ones
        let r = z4();
        let fam = simple_family(&r);
        let space = stark_space(&fam, 1).unwrap();
        let empty: Subset = Vec::new();
        let sv: Subset = vec![0];
        let w0 = fam.carrier_span(&empty);
        let w1 = fam.carrier_span(&sv);
        let enumerate = |h: &crate::linalg::BaseMatrix| -> Vec<Vec<u64>> {
            let mut out = std::collections::BTreeSet::new();
            let rows = h.rows;
            let mut coeffs = vec![0u64; rows];
            loop {
                let mut acc = vec![0u64; h.cols];
                for (i, &c) in coeffs.iter().enumerate() {
                    for (j, &v) in h.row(i).iter().enumerate() {
                        acc[j] = (acc[j] + c * v) % h.modulus;
                    }
                }
                out.insert(acc);
                let mut i = 0;
                loop {
                    if i == rows {
                        return out.into_iter().collect();
                    }
                    coeffs[i] += 1;
                    if coeffs[i] < h.modulus {
                        break;
                    }
                    coeffs[i] = 0;
                    i += 1;
                }
            }
        };
        let mut compatible = 0u64;
        for big in enumerate(&w1) {
            let grouped = rmatrix::group_vec(&r, &big);
            let t = fam.transition(&empty, 0, &grouped);
            let flat = rmatrix::expand_vec(&r, &t);
            // c_∅ is determined; it must lie in the ∅-carrier
            if linalg::span_contains(&w0, &flat) {
                compatible += 1;
            }
        }
        let count = count_distinct_systems(&r, &space);
        assert_eq!(compatible, count, "lattice solve disagrees with brute force");
    }

    #[test]
    fn stark_space_shape_mismatch() {
        let r = z4();
        let fam = simple_family(&r);
        assert_eq!(stark_space(&fam, 2).unwrap_err(), StarkError::ShapeMismatch);
    }

    #[test]
    fn verify_core_trivial_h1() {
        let r = z4();
        // H^1(C_∅) = 0: all checks pass trivially
        let phi = RMatrix::from_rows(vec![vec![r.one()], vec![r.zero()]]);
        let base = QuadraticComplex::new(r.clone(), phi);
        let fam = StarkFamily::new(r.clone(), base, vec!["q1".into()], vec![vec![r.zero()]]);
        let space = stark_space(&fam, 1).unwrap();
        let mut rng = crate::rng::SplitMix64::new(12);
        let eps = space.sample(&fam, &mut rng);
        let report = verify_core(&fam, 1, &space, &eps).unwrap();
        assert!(report.all_pass());
        assert_eq!(report.stabilizing_subset, Vec::<usize>::new());
    }
}
