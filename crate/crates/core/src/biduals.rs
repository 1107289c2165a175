//! Exterior biduals ∩^r M = (Λ^r M^*)^*, rank-reduction maps, the
//! kernel-bidual exact sequence for kernels of maps to free modules, and
//! the identity im(a) = Ann(Ann(a)).
//!
//! Two representations coexist: a presented route for arbitrary modules
//! (dualize, wedge, dualize again) and a carrier route for N = ker(R^d →
//! R^s), where ∩^r N sits inside Λ^r R^d as the joint kernel of the
//! contractions against the coordinate functionals.  Contractions follow
//! the left convention f(a): g ↦ a(f ∧ g).

use crate::linalg::{self, BaseMatrix};
use crate::modules::{self, DualModule, ModuleElement, ModuleMap, PresentedModule};
use crate::ring::{GorensteinRing, Ideal, RingElement};
use crate::rmatrix::{self, RMatrix};
use crate::wedge;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BidualError {
    #[error("contraction rank {0} exceeds element rank {1}")]
    RankTooLarge(usize, usize),
    #[error("the supplied generators do not span the kernel")]
    NotExact,
}

/// One rank level of the bidual tower of a module.
pub struct BidualLevel {
    pub r: usize,
    /// Λ^r M
    pub lambda_m: PresentedModule,
    /// Λ^r M^* on the wedge-monomial basis of the dual generators
    pub lambda_dual: PresentedModule,
    /// ∩^r M = (Λ^r M^*)^*; its hom_vectors evaluate on the monomials
    pub bidual: DualModule,
    /// canonical map Λ^r M → ∩^r M
    pub canonical: ModuleMap,
}

/// Bidual data of a fixed module for every rank up to `max_r`.
pub struct BidualSetting {
    pub base: PresentedModule,
    pub m_dual: DualModule,
    pub levels: Vec<BidualLevel>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BidualElement {
    pub r: usize,
    pub coords: ModuleElement,
}

impl BidualSetting {
    pub fn new(m: &PresentedModule, max_r: usize) -> Self {
        let ring = m.ring.clone();
        let m_dual = modules::dual(m);
        let mut levels = Vec::with_capacity(max_r + 1);
        for r in 0..=max_r {
            let lambda_m = modules::exterior_power(m, r);
            let lambda_dual = modules::exterior_power(&m_dual.module, r);
            let bidual = modules::dual(&lambda_dual);
            // canonical: e_I ↦ [h_K ↦ det(h_{k_a}(e_{i_b}))]
            let monomials_m = wedge::subsets(m.gens, r);
            let monomials_d = wedge::subsets(m_dual.module.gens, r);
            let mut rows = Vec::new();
            for i_set in &monomials_m {
                let mut v = vec![ring.zero(); monomials_d.len()];
                for (kidx, k_set) in monomials_d.iter().enumerate() {
                    let pair_matrix = RMatrix::from_rows(
                        k_set
                            .iter()
                            .map(|&ka| {
                                i_set
                                    .iter()
                                    .map(|&ib| m_dual.hom_vectors[ka][ib].clone())
                                    .collect()
                            })
                            .collect(),
                    );
                    let idx: Vec<usize> = (0..r).collect();
                    v[kidx] = crate::fitting::minor_det(&ring, &pair_matrix, &idx, &idx);
                }
                let coords = bidual
                    .coords_of_vector(&v)
                    .expect("canonical evaluation lies in the bidual");
                rows.push(coords.coords);
            }
            let matrix = if monomials_m.is_empty() {
                RMatrix::zero(&ring, 0, bidual.module.gens)
            } else {
                RMatrix::from_rows(rows)
            };
            let canonical = ModuleMap::new(lambda_m.clone(), bidual.module.clone(), matrix)
                .expect("canonical map is well defined");
            levels.push(BidualLevel { r, lambda_m, lambda_dual, bidual, canonical });
        }
        BidualSetting { base: m.clone(), m_dual, levels }
    }

    pub fn level(&self, r: usize) -> &BidualLevel {
        &self.levels[r]
    }

    /// Evaluate a bidual element on an element of Λ^r M^* given in
    /// wedge-monomial coordinates.
    pub fn evaluate(&self, a: &BidualElement, f: &[RingElement]) -> RingElement {
        let ring = &self.base.ring;
        let level = self.level(a.r);
        let mut acc = ring.zero();
        for (c, h) in a.coords.coords.iter().zip(level.bidual.hom_vectors.iter()) {
            let mut val = ring.zero();
            for (hk, fk) in h.iter().zip(f.iter()) {
                val = ring.add(&val, &ring.mul(hk, fk));
            }
            acc = ring.add(&acc, &ring.mul(c, &val));
        }
        acc
    }

    /// Wedge product of monomial-coordinate vectors over the dual
    /// generators: (u ∧ v)_K = Σ_{L ⊔ J = K} sign(L, J)·u_L·v_J.
    pub fn wedge_coords(
        &self,
        s: usize,
        u: &[RingElement],
        t: usize,
        v: &[RingElement],
    ) -> Vec<RingElement> {
        let ring = &self.base.ring;
        let n = self.m_dual.module.gens;
        wedge_product(ring, n, s, u, t, v)
    }

    /// The rank-reduction map a ↦ [g ↦ a(f ∧ g)] for f in Λ^s M^*.
    pub fn rank_reduce(
        &self,
        a: &BidualElement,
        s: usize,
        f: &[RingElement],
    ) -> Result<BidualElement, BidualError> {
        if s > a.r {
            return Err(BidualError::RankTooLarge(s, a.r));
        }
        let ring = &self.base.ring;
        let r_out = a.r - s;
        let n = self.m_dual.module.gens;
        let out_monomials = wedge::subsets(n, r_out);
        let mut v = Vec::with_capacity(out_monomials.len());
        for j_set in &out_monomials {
            let mut basis = vec![ring.zero(); out_monomials.len()];
            basis[wedge::subset_index(n, j_set)] = ring.one();
            let fw = self.wedge_coords(s, f, r_out, &basis);
            v.push(self.evaluate(a, &fw));
        }
        let level = self.level(r_out);
        let coords = level
            .bidual
            .coords_of_vector(&v)
            .expect("rank reduction lands in the lower bidual");
        Ok(BidualElement { r: r_out, coords })
    }

    /// im(a) = { a(f) : f ∈ Λ^r M^* }, generated by the values on the
    /// wedge monomials.
    pub fn image_of_element(&self, a: &BidualElement) -> Ideal {
        let ring = &self.base.ring;
        let level = self.level(a.r);
        let count = level.lambda_dual.gens;
        let mut gens = Vec::with_capacity(count);
        for k in 0..count {
            let mut f = vec![ring.zero(); count];
            f[k] = ring.one();
            gens.push(self.evaluate(a, &f));
        }
        Ideal::new(ring.clone(), gens)
    }

    /// Ann_R(Ann_R(a)) for a bidual element.
    pub fn double_annihilator_of_element(&self, a: &BidualElement) -> Ideal {
        let level = self.level(a.r);
        level.bidual.module.element_annihilator(&a.coords).annihilator()
    }
}

/// Wedge product in monomial coordinates over n generators.
pub fn wedge_product(
    ring: &GorensteinRing,
    n: usize,
    s: usize,
    u: &[RingElement],
    t: usize,
    v: &[RingElement],
) -> Vec<RingElement> {
    let s_monos = wedge::subsets(n, s);
    let t_monos = wedge::subsets(n, t);
    let out_monos = wedge::subsets(n, s + t);
    let mut out = vec![ring.zero(); out_monos.len()];
    for (li, l_set) in s_monos.iter().enumerate() {
        if ring.is_zero(&u[li]) {
            continue;
        }
        for (ji, j_set) in t_monos.iter().enumerate() {
            if ring.is_zero(&v[ji]) {
                continue;
            }
            if l_set.iter().any(|x| j_set.contains(x)) {
                continue;
            }
            let (merged, sign) = wedge::merge_with_sign(l_set, j_set);
            let idx = wedge::subset_index(n, &merged);
            let term = ring.mul(&u[li], &v[ji]);
            let term = if sign >= 0 { term } else { ring.neg(&term) };
            out[idx] = ring.add(&out[idx], &term);
        }
    }
    out
}

/// Contraction of a wedge-coordinate vector over the standard basis of
/// R^d by a covector g: (g(a))_J = Σ_{j ∉ J} sign({j}, J)·g_j·a_{J∪{j}}.
pub fn contract_free(
    ring: &GorensteinRing,
    d: usize,
    r: usize,
    a: &[RingElement],
    g: &[RingElement],
) -> Vec<RingElement> {
    assert!(r >= 1);
    let out_monos = wedge::subsets(d, r - 1);
    let mut out = vec![ring.zero(); out_monos.len()];
    for (ji, j_set) in out_monos.iter().enumerate() {
        let mut acc = ring.zero();
        for j in 0..d {
            if j_set.contains(&j) || ring.is_zero(&g[j]) {
                continue;
            }
            let (merged, sign) = wedge::merge_with_sign(&[j], j_set);
            let idx = wedge::subset_index(d, &merged);
            let term = ring.mul(&g[j], &a[idx]);
            let term = if sign >= 0 { term } else { ring.neg(&term) };
            acc = ring.add(&acc, &term);
        }
        out[ji] = acc;
    }
    out
}

/// The exact data 0 → N → R^d → R^s with N the kernel of the coordinate
/// maps (the columns of `f`); carries the concrete model of ∩^r N inside
/// Λ^r R^d.
#[derive(Debug)]
pub struct KernelBidual {
    pub ring: GorensteinRing,
    pub ambient: usize,
    /// d × s matrix; the coordinate maps are its columns
    pub f: RMatrix,
}

impl KernelBidual {
    /// Validates that the supplied generators span exactly ker(f).
    pub fn new(
        ring: GorensteinRing,
        ambient: usize,
        f: RMatrix,
        n_gens: &[Vec<RingElement>],
    ) -> Result<Self, BidualError> {
        assert_eq!(f.rows, ambient);
        let kernel = linalg::howell(&linalg::left_kernel(&f.expand(&ring)));
        let claimed = rmatrix::rspan(&ring, n_gens, ambient);
        if kernel != claimed {
            return Err(BidualError::NotExact);
        }
        Ok(KernelBidual { ring, ambient, f })
    }

    pub fn from_map(ring: GorensteinRing, ambient: usize, f: RMatrix) -> Self {
        assert_eq!(f.rows, ambient);
        KernelBidual { ring, ambient, f }
    }

    /// Generators of ker(f) inside R^d.
    pub fn kernel_gens(&self) -> Vec<Vec<RingElement>> {
        let kernel = linalg::left_kernel(&self.f.expand(&self.ring));
        let candidates: Vec<Vec<RingElement>> = (0..kernel.rows)
            .map(|r| rmatrix::group_vec(&self.ring, kernel.row(r)))
            .collect();
        modules::minimal_rgens(
            &self.ring,
            &candidates,
            self.ambient,
            &BaseMatrix::zero(0, self.ambient * self.ring.size(), self.ring.modulus()),
        )
    }

    /// ∩^r N inside Λ^r R^d: the joint kernel of the contractions by the
    /// coordinate functionals, as a Howell span of expanded coordinates.
    pub fn carrier_span(&self, r: usize) -> BaseMatrix {
        let ring = &self.ring;
        let d = self.ambient;
        let width = wedge::binomial(d, r);
        if r == 0 || width == 0 {
            // ∩^0 N = R; the span is everything (or empty when r > d)
            return if width == 0 {
                BaseMatrix::zero(0, 0, ring.modulus())
            } else {
                linalg::howell(&BaseMatrix::identity(width * ring.size(), ring.modulus()))
            };
        }
        let sub_width = wedge::binomial(d, r - 1);
        let mut big: Option<BaseMatrix> = None;
        for i in 0..self.f.cols {
            let g = self.f.col(i);
            // R-matrix of the contraction map on monomials
            let mut cm = RMatrix::zero(ring, width, sub_width);
            for (ki, k_set) in wedge::subsets(d, r).iter().enumerate() {
                for &j in k_set {
                    if ring.is_zero(&g[j]) {
                        continue;
                    }
                    let j_set: Vec<usize> =
                        k_set.iter().copied().filter(|&x| x != j).collect();
                    let sign = wedge::shuffle_sign(&[j], &j_set);
                    let term = if sign >= 0 { g[j].clone() } else { ring.neg(&g[j]) };
                    let cur = ring.add(cm.at(ki, wedge::subset_index(d, &j_set)), &term);
                    cm.set(ki, wedge::subset_index(d, &j_set), cur);
                }
            }
            let e = cm.expand(ring);
            big = Some(match big.take() {
                None => e,
                Some(acc) => acc.hconcat(&e),
            });
        }
        match big {
            None => linalg::howell(&BaseMatrix::identity(width * ring.size(), ring.modulus())),
            Some(b) => linalg::howell(&linalg::left_kernel(&b)),
        }
    }

    /// The reduced map ∧_{i∈[s]} f_i : Λ^r R^d ⊇ ∩^r R^d → Λ^{r-s} R^d,
    /// contracting by all columns in order.
    pub fn reduced_map(&self, r: usize, w: &[RingElement]) -> Vec<RingElement> {
        let ring = &self.ring;
        let s = self.f.cols;
        assert!(s <= r);
        let mut cur = w.to_vec();
        let mut rank = r;
        for i in 0..s {
            cur = contract_free(ring, self.ambient, rank, &cur, &self.f.col(i));
            rank -= 1;
        }
        cur
    }

    /// Membership of a wedge-coordinate vector in the carrier of ∩^r N.
    pub fn carrier_contains(&self, r: usize, w: &[RingElement]) -> bool {
        let span = self.carrier_span(r);
        linalg::span_contains(&span, &rmatrix::expand_vec(&self.ring, w))
    }
}
