//! Finitely presented modules over a Gorenstein group ring: presentations,
//! element normal forms, kernels, duals with their evaluation pairing,
//! exterior powers, and the socle-multiplier search.
//!
//! A module is R^b modulo the R-span of the rows of its relation matrix.
//! Kernels and syzygies are computed set-theoretically over Z/p^m after
//! expansion, then grouped back into R-rows; this is exact because an
//! R-linear condition is a Z/p^m-linear condition on coefficients.

use crate::linalg::{self, BaseMatrix};
use crate::ring::{GorensteinRing, Ideal, RingElement, RingError};
use crate::rmatrix::{self, RMatrix};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModuleError {
    #[error("modules belong to different rings")]
    RingMismatch,
    #[error("map does not send relations into the target relation span")]
    IllDefinedMap,
    #[error("the zero element has no socle multiplier")]
    ZeroElement,
}

#[derive(Clone)]
pub struct PresentedModule {
    pub ring: GorensteinRing,
    /// number of generators b; elements live in R^b
    pub gens: usize,
    pub relations: RMatrix,
    relspan: BaseMatrix,
}

impl PartialEq for PresentedModule {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.gens == other.gens && self.relspan == other.relspan
    }
}
impl Eq for PresentedModule {}

impl std::fmt::Debug for PresentedModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PresentedModule(gens={}, |M|=p^{})", self.gens, self.cardinality_exp())
    }
}

/// An element of a presented module, stored in the canonical normal form
/// of its coordinate vector modulo the expanded relation span.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModuleElement {
    pub coords: Vec<RingElement>,
}

impl PresentedModule {
    pub fn new(ring: GorensteinRing, gens: usize, relations: RMatrix) -> Self {
        assert_eq!(relations.cols, gens);
        let relspan = rmatrix::rspan(&ring, &relations.row_vecs(), gens);
        PresentedModule { ring, gens, relations, relspan }
    }

    pub fn free(ring: GorensteinRing, n: usize) -> Self {
        let relations = RMatrix::zero(&ring, 0, n);
        PresentedModule::new(ring, n, relations)
    }

    pub fn zero_module(ring: GorensteinRing) -> Self {
        PresentedModule::free(ring, 0)
    }

    /// R/I as a cyclic module.
    pub fn quotient_by_ideal(ring: GorensteinRing, ideal: &Ideal) -> Self {
        let rows: Vec<Vec<RingElement>> =
            ideal.generators.iter().map(|g| vec![g.clone()]).collect();
        let relations =
            if rows.is_empty() { RMatrix::zero(&ring, 0, 1) } else { RMatrix::from_rows(rows) };
        PresentedModule::new(ring, 1, relations)
    }

    pub fn relspan(&self) -> &BaseMatrix {
        &self.relspan
    }

    /// log_p |M| = log_p |R^b| - log_p |relation span|.
    pub fn cardinality_exp(&self) -> u64 {
        self.ring.cardinality_exp() * self.gens as u64 - linalg::span_size_exp(&self.relspan)
    }

    pub fn is_zero_module(&self) -> bool {
        self.cardinality_exp() == 0
    }

    /// Minimal number of generators: b minus the F_p-rank of the relation
    /// matrix modulo the maximal ideal.
    pub fn min_generators(&self) -> usize {
        let p = self.ring.p();
        if self.gens == 0 {
            return 0;
        }
        let rows: Vec<Vec<u64>> = (0..self.relations.rows)
            .map(|r| (0..self.gens).map(|c| self.ring.residue(self.relations.at(r, c))).collect())
            .collect();
        let m = BaseMatrix::from_rows(rows, self.gens, p);
        self.gens - linalg::howell(&m).rows
    }

    pub fn element(&self, coords: Vec<RingElement>) -> ModuleElement {
        assert_eq!(coords.len(), self.gens);
        let flat = rmatrix::expand_vec(&self.ring, &coords);
        let red = linalg::reduce_mod_span(&flat, &self.relspan);
        ModuleElement { coords: rmatrix::group_vec(&self.ring, &red) }
    }

    pub fn zero_element(&self) -> ModuleElement {
        ModuleElement { coords: vec![self.ring.zero(); self.gens] }
    }

    pub fn generator(&self, i: usize) -> ModuleElement {
        let mut coords = vec![self.ring.zero(); self.gens];
        coords[i] = self.ring.one();
        self.element(coords)
    }

    pub fn is_zero_element(&self, x: &ModuleElement) -> bool {
        rmatrix::rvec_is_zero(&self.ring, &x.coords)
    }

    pub fn add(&self, x: &ModuleElement, y: &ModuleElement) -> ModuleElement {
        self.element(rmatrix::rvec_add(&self.ring, &x.coords, &y.coords))
    }

    pub fn scale(&self, r: &RingElement, x: &ModuleElement) -> ModuleElement {
        self.element(rmatrix::rvec_scale(&self.ring, r, &x.coords))
    }

    /// Ann_R(x) = { r : r·x = 0 in M }.
    pub fn element_annihilator(&self, x: &ModuleElement) -> Ideal {
        let ring = &self.ring;
        if self.gens == 0 {
            return Ideal::unit(ring.clone());
        }
        let mut blocks = ring.regular_rep(&x.coords[0]);
        for j in 1..self.gens {
            blocks = blocks.hconcat(&ring.regular_rep(&x.coords[j]));
        }
        let rows = preimage_span(&blocks, &self.relspan);
        Ideal::from_basis(ring.clone(), rows)
    }

    /// Enumerate all elements (normal forms); only for small modules.
    pub fn enumerate(&self, bound: u64) -> Option<Vec<ModuleElement>> {
        let exp = self.cardinality_exp();
        let card = (self.ring.p() as u128).checked_pow(exp as u32)?;
        if card > bound as u128 {
            return None;
        }
        if self.gens == 0 {
            return Some(vec![self.zero_element()]);
        }
        let n = self.ring.modulus();
        let width = self.gens * self.ring.size();
        let mut seen = std::collections::BTreeSet::new();
        let mut out = Vec::new();
        let mut cur = vec![0u64; width];
        loop {
            let red = linalg::reduce_mod_span(&cur, &self.relspan);
            if seen.insert(red.clone()) {
                out.push(ModuleElement { coords: rmatrix::group_vec(&self.ring, &red) });
            }
            if out.len() as u128 == card {
                return Some(out);
            }
            let mut i = 0;
            loop {
                if i == width {
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

/// Howell basis of { x : x·big lies in the span }.
pub fn preimage_span(big: &BaseMatrix, span: &BaseMatrix) -> BaseMatrix {
    let stacked = if span.rows > 0 { big.vconcat(span) } else { big.clone() };
    let ker = linalg::left_kernel(&stacked);
    let mut rows = Vec::new();
    for r in 0..ker.rows {
        let x = ker.row(r)[..big.rows].to_vec();
        if x.iter().any(|&v| v != 0) {
            rows.push(x);
        }
    }
    linalg::howell(&BaseMatrix::from_rows(rows, big.rows, big.modulus))
}

/// Minimal R-generating set for the subquotient (span of `rows` + V)/V,
/// chosen by Nakayama: keep a row when its class is nonzero in the
/// quotient by V + m·(span of rows).
pub fn minimal_rgens(
    ring: &GorensteinRing,
    rows: &[Vec<RingElement>],
    cols: usize,
    v_span: &BaseMatrix,
) -> Vec<Vec<RingElement>> {
    let mut mk_rows: Vec<Vec<RingElement>> = Vec::new();
    for g in ring.max_ideal_gens() {
        for r in rows {
            mk_rows.push(r.iter().map(|e| ring.mul(g, e)).collect());
        }
    }
    let mk_span = rmatrix::rspan(ring, &mk_rows, cols);
    let mut wall = linalg::span_sum(v_span, &mk_span);
    let mut kept = Vec::new();
    for r in rows {
        let flat = rmatrix::expand_vec(ring, r);
        if !linalg::span_contains(&wall, &flat) {
            wall = linalg::span_sum(
                &wall,
                &BaseMatrix::from_rows(vec![flat], cols * ring.size(), ring.modulus()),
            );
            kept.push(r.clone());
        }
    }
    kept
}

/// A subquotient (span of generator rows + V)/V of a free module R^cols,
/// presented by the kept generators and their syzygies relative to V.
#[derive(Debug)]
pub struct Subquotient {
    /// generator rows inside R^cols
    pub gens: Vec<Vec<RingElement>>,
    pub module: PresentedModule,
}

pub fn present_subquotient(
    ring: &GorensteinRing,
    cols: usize,
    candidate_rows: &[Vec<RingElement>],
    v_span: &BaseMatrix,
) -> Subquotient {
    let gens = minimal_rgens(ring, candidate_rows, cols, v_span);
    let relations = rmatrix::rsyzygies(ring, &gens, cols, v_span);
    let module = PresentedModule::new(
        ring.clone(),
        gens.len(),
        if relations.is_empty() {
            RMatrix::zero(ring, 0, gens.len())
        } else {
            RMatrix::from_rows(relations)
        },
    );
    Subquotient { gens, module }
}

#[derive(Clone, Debug)]
pub struct ModuleMap {
    pub source: PresentedModule,
    pub target: PresentedModule,
    /// b_src × b_tgt matrix; x maps to x·matrix
    pub matrix: RMatrix,
}

impl ModuleMap {
    pub fn new(
        source: PresentedModule,
        target: PresentedModule,
        matrix: RMatrix,
    ) -> Result<Self, ModuleError> {
        if source.ring != target.ring {
            return Err(ModuleError::RingMismatch);
        }
        assert_eq!(matrix.rows, source.gens);
        assert_eq!(matrix.cols, target.gens);
        let ring = &source.ring;
        for r in 0..source.relations.rows {
            let image = rmatrix::rvec_mul(ring, &source.relations.row(r), &matrix);
            let flat = rmatrix::expand_vec(ring, &image);
            if !linalg::span_contains(target.relspan(), &flat) {
                return Err(ModuleError::IllDefinedMap);
            }
        }
        Ok(ModuleMap { source, target, matrix })
    }

    pub fn identity(m: &PresentedModule) -> Self {
        let matrix = RMatrix::identity(&m.ring, m.gens);
        ModuleMap { source: m.clone(), target: m.clone(), matrix }
    }

    pub fn apply(&self, x: &ModuleElement) -> ModuleElement {
        let v = rmatrix::rvec_mul(&self.source.ring, &x.coords, &self.matrix);
        self.target.element(v)
    }

    /// log_p of the image cardinality.
    pub fn image_exp(&self) -> u64 {
        let ring = &self.source.ring;
        let img_rows = rmatrix::rspan(ring, &self.matrix.row_vecs(), self.target.gens);
        let total = linalg::span_sum(&img_rows, self.target.relspan());
        linalg::span_size_exp(&total) - linalg::span_size_exp(self.target.relspan())
    }

    pub fn is_surjective(&self) -> bool {
        self.image_exp() == self.target.cardinality_exp()
    }

    pub fn is_injective(&self) -> bool {
        self.image_exp() == self.source.cardinality_exp()
    }

    pub fn is_bijective(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }
}

/// Kernel of a module map: generators inside the source, plus a
/// presentation of the kernel as a module in its own right.
pub fn kernel_module(f: &ModuleMap) -> (Vec<ModuleElement>, PresentedModule) {
    let ring = &f.source.ring;
    if f.source.gens == 0 {
        return (Vec::new(), PresentedModule::zero_module(ring.clone()));
    }
    let expanded = f.matrix.expand(ring);
    let pre = if f.target.gens == 0 {
        linalg::howell(&BaseMatrix::identity(f.source.gens * ring.size(), ring.modulus()))
    } else {
        preimage_span(&expanded, f.target.relspan())
    };
    let candidates: Vec<Vec<RingElement>> =
        (0..pre.rows).map(|r| rmatrix::group_vec(ring, pre.row(r))).collect();
    let sub = present_subquotient(ring, f.source.gens, &candidates, f.source.relspan());
    let gens = sub.gens.iter().map(|g| f.source.element(g.clone())).collect();
    (gens, sub.module)
}

/// The linear dual Hom_R(M, R), carried as honest vectors in R^b so that
/// the evaluation pairing stays available.
#[derive(Clone, Debug)]
pub struct DualModule {
    pub base: PresentedModule,
    /// hom_vectors[i] is the i-th generator of M^*, a vector h with
    /// h(x) = sum_j h_j·x_j
    pub hom_vectors: Vec<Vec<RingElement>>,
    pub module: PresentedModule,
}

pub fn dual(m: &PresentedModule) -> DualModule {
    let ring = &m.ring;
    if m.gens == 0 {
        return DualModule {
            base: m.clone(),
            hom_vectors: Vec::new(),
            module: PresentedModule::zero_module(ring.clone()),
        };
    }
    // y in R^b is a functional iff every relation row pairs to zero
    let g = ring.size();
    let hom_span = if m.relations.rows == 0 {
        linalg::howell(&BaseMatrix::identity(m.gens * g, ring.modulus()))
    } else {
        let mut cond: Option<BaseMatrix> = None;
        for r in 0..m.relations.rows {
            let mut block = ring.regular_rep(m.relations.at(r, 0));
            for j in 1..m.gens {
                block = block.vconcat(&ring.regular_rep(m.relations.at(r, j)));
            }
            cond = Some(match cond {
                None => block,
                Some(c) => c.hconcat(&block),
            });
        }
        linalg::howell(&linalg::left_kernel(&cond.unwrap()))
    };
    let candidates: Vec<Vec<RingElement>> =
        (0..hom_span.rows).map(|r| rmatrix::group_vec(ring, hom_span.row(r))).collect();
    let zero_span = BaseMatrix::zero(0, m.gens * g, ring.modulus());
    let gens = minimal_rgens(ring, &candidates, m.gens, &zero_span);
    let relations = rmatrix::rsyzygies(ring, &gens, m.gens, &zero_span);
    let module = PresentedModule::new(
        ring.clone(),
        gens.len(),
        if relations.is_empty() {
            RMatrix::zero(ring, 0, gens.len())
        } else {
            RMatrix::from_rows(relations)
        },
    );
    DualModule { base: m.clone(), hom_vectors: gens, module }
}

impl DualModule {
    /// Evaluate a dual element (coords in the dual presentation) on a
    /// module element.
    pub fn pair(&self, phi: &ModuleElement, x: &ModuleElement) -> RingElement {
        let ring = &self.base.ring;
        let mut acc = ring.zero();
        for (c, h) in phi.coords.iter().zip(self.hom_vectors.iter()) {
            let mut val = ring.zero();
            for (hj, xj) in h.iter().zip(x.coords.iter()) {
                val = ring.add(&val, &ring.mul(hj, xj));
            }
            acc = ring.add(&acc, &ring.mul(c, &val));
        }
        acc
    }

    /// The functional x -> h(x) for an explicit vector h in R^b, expressed
    /// in the coordinates of the dual presentation.
    pub fn coords_of_vector(&self, h: &[RingElement]) -> Option<ModuleElement> {
        let ring = &self.base.ring;
        let sol = rmatrix::rspan_solve(ring, &self.hom_vectors, h)?;
        Some(self.module.element(sol))
    }
}

/// The canonical evaluation map M -> (M^*)^*.
pub struct Biduality {
    pub dual: DualModule,
    pub double_dual: DualModule,
    pub map: ModuleMap,
}

pub fn biduality_map(m: &PresentedModule) -> Result<Biduality, ModuleError> {
    let ring = m.ring.clone();
    let d = dual(m);
    let dd = dual(&d.module);
    // e_j evaluates functionals: its image in (M^*)^* is the vector
    // (h_i(e_j))_i over the dual generators
    let mut rows = Vec::new();
    for j in 0..m.gens {
        let v: Vec<RingElement> = d.hom_vectors.iter().map(|h| h[j].clone()).collect();
        let coords = rmatrix::rspan_solve(&ring, &dd.hom_vectors, &v)
            .expect("evaluation functional must lie in the double dual");
        rows.push(coords);
    }
    let matrix = if m.gens == 0 {
        RMatrix::zero(&ring, 0, dd.module.gens)
    } else {
        RMatrix::from_rows(rows)
    };
    let map = ModuleMap::new(m.clone(), dd.module.clone(), matrix)?;
    Ok(Biduality { dual: d, double_dual: dd, map })
}

/// Presentation of the r-th exterior power on the wedge-monomial basis in
/// lexicographic order.
pub fn exterior_power(m: &PresentedModule, r: usize) -> PresentedModule {
    let ring = m.ring.clone();
    if r == 0 {
        return PresentedModule::free(ring, 1);
    }
    if r > m.gens {
        return PresentedModule::zero_module(ring);
    }
    let monomials = crate::wedge::subsets(m.gens, r);
    let sub_monomials = crate::wedge::subsets(m.gens, r - 1);
    let mut rows = Vec::new();
    for rel in 0..m.relations.rows {
        let a = m.relations.row(rel);
        for j_set in &sub_monomials {
            let mut row = vec![ring.zero(); monomials.len()];
            for (jpos, coeff) in a.iter().enumerate() {
                if ring.is_zero(coeff) || j_set.contains(&jpos) {
                    continue;
                }
                let (merged, sign) = crate::wedge::merge_with_sign(&[jpos], j_set);
                let idx = crate::wedge::subset_index(m.gens, &merged);
                let signed = if sign >= 0 { coeff.clone() } else { ring.neg(coeff) };
                row[idx] = ring.add(&row[idx], &signed);
            }
            rows.push(row);
        }
    }
    let relations = if rows.is_empty() {
        RMatrix::zero(&ring, 0, monomials.len())
    } else {
        RMatrix::from_rows(rows)
    };
    PresentedModule::new(ring, monomials.len(), relations)
}

pub fn direct_sum(m: &PresentedModule, n: &PresentedModule) -> Result<PresentedModule, RingError> {
    if m.ring != n.ring {
        return Err(RingError::RingMismatch);
    }
    let ring = m.ring.clone();
    let gens = m.gens + n.gens;
    let mut rows = Vec::new();
    for r in 0..m.relations.rows {
        let mut row = m.relations.row(r);
        row.extend(vec![ring.zero(); n.gens]);
        rows.push(row);
    }
    for r in 0..n.relations.rows {
        let mut row = vec![ring.zero(); m.gens];
        row.extend(n.relations.row(r));
        rows.push(row);
    }
    let relations =
        if rows.is_empty() { RMatrix::zero(&ring, 0, gens) } else { RMatrix::from_rows(rows) };
    Ok(PresentedModule::new(ring, gens, relations))
}

pub fn tensor(m: &PresentedModule, n: &PresentedModule) -> Result<PresentedModule, RingError> {
    if m.ring != n.ring {
        return Err(RingError::RingMismatch);
    }
    let ring = m.ring.clone();
    let gens = m.gens * n.gens;
    let mut rows = Vec::new();
    for r in 0..m.relations.rows {
        let a = m.relations.row(r);
        for j in 0..n.gens {
            let mut row = vec![ring.zero(); gens];
            for i in 0..m.gens {
                row[i * n.gens + j] = a[i].clone();
            }
            rows.push(row);
        }
    }
    for r in 0..n.relations.rows {
        let b = n.relations.row(r);
        for i in 0..m.gens {
            let mut row = vec![ring.zero(); gens];
            for j in 0..n.gens {
                row[i * n.gens + j] = b[j].clone();
            }
            rows.push(row);
        }
    }
    let relations =
        if rows.is_empty() { RMatrix::zero(&ring, 0, gens) } else { RMatrix::from_rows(rows) };
    Ok(PresentedModule::new(ring, gens, relations))
}

/// Hom_R(M, N) presented as a module: maps are b_M × b_N matrices sending
/// relations into the target relation span, modulo matrices whose rows all
/// lie in that span.
pub fn hom(m: &PresentedModule, n: &PresentedModule) -> Result<PresentedModule, RingError> {
    if m.ring != n.ring {
        return Err(RingError::RingMismatch);
    }
    let ring = m.ring.clone();
    if m.gens == 0 || n.gens == 0 {
        return Ok(PresentedModule::zero_module(ring));
    }
    let g = ring.size();
    let width = m.gens * n.gens;
    let k_span = if m.relations.rows == 0 {
        linalg::howell(&BaseMatrix::identity(width * g, ring.modulus()))
    } else {
        let mut big: Option<BaseMatrix> = None;
        let mut vrows_cols = 0usize;
        let mut blocks = Vec::new();
        for r in 0..m.relations.rows {
            let mut block = BaseMatrix::zero(width * g, n.gens * g, ring.modulus());
            for i in 0..m.gens {
                let rep = ring.regular_rep(m.relations.at(r, i));
                for j in 0..n.gens {
                    for a in 0..g {
                        for b in 0..g {
                            block.set((i * n.gens + j) * g + a, j * g + b, rep.at(a, b));
                        }
                    }
                }
            }
            vrows_cols += block.cols;
            blocks.push(block);
        }
        for b in &blocks {
            big = Some(match big.take() {
                None => b.clone(),
                Some(acc) => acc.hconcat(b),
            });
        }
        let big = big.unwrap();
        // block-diagonal copy of the target relation span per condition
        let mut vrows = Vec::new();
        let mut offset = 0usize;
        for _ in 0..blocks.len() {
            for r in 0..n.relspan().rows {
                let mut row = vec![0u64; vrows_cols];
                row[offset..offset + n.gens * g].copy_from_slice(n.relspan().row(r));
                vrows.push(row);
            }
            offset += n.gens * g;
        }
        let vspan = linalg::howell(&BaseMatrix::from_rows(vrows, vrows_cols, ring.modulus()));
        preimage_span(&big, &vspan)
    };
    // zero maps: every generator row of the matrix lies in the target span
    let mut zrows = Vec::new();
    for i in 0..m.gens {
        for r in 0..n.relspan().rows {
            let mut row = vec![0u64; width * g];
            row[i * n.gens * g..(i + 1) * n.gens * g].copy_from_slice(n.relspan().row(r));
            zrows.push(row);
        }
    }
    let zspan = linalg::howell(&BaseMatrix::from_rows(zrows, width * g, ring.modulus()));
    let candidates: Vec<Vec<RingElement>> =
        (0..k_span.rows).map(|r| rmatrix::group_vec(&ring, k_span.row(r))).collect();
    let sub = present_subquotient(&ring, width, &candidates, &zspan);
    Ok(sub.module)
}

/// An r with r·x nonzero and contained in the socle of the module: walk
/// down the chain M ⊇ m·x ⊇ m²·x ⊇ … and stop one step before it dies.
pub fn socle_multiplier(
    m: &PresentedModule,
    x: &ModuleElement,
) -> Result<RingElement, ModuleError> {
    let ring = &m.ring;
    if m.is_zero_element(x) {
        return Err(ModuleError::ZeroElement);
    }
    let mut level: Vec<RingElement> = vec![ring.one()];
    loop {
        let next: Vec<RingElement> = {
            let mut set = std::collections::BTreeSet::new();
            for s in &level {
                for g in ring.max_ideal_gens() {
                    set.insert(ring.mul(s, g).coeffs);
                }
            }
            set.into_iter().map(|coeffs| RingElement { coeffs }).collect()
        };
        let all_kill = next.iter().all(|s| m.is_zero_element(&m.scale(s, x)));
        if all_kill {
            for s in &level {
                if !m.is_zero_element(&m.scale(s, x)) {
                    return Ok(s.clone());
                }
            }
            unreachable!("previous level must contain a surviving multiplier");
        }
        level = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{make_ring, GroupSpec};

    fn z4() -> GorensteinRing {
        make_ring(2, 2, GroupSpec::trivial()).unwrap()
    }
    fn z4c2() -> GorensteinRing {
        make_ring(2, 2, GroupSpec::new(vec![2])).unwrap()
    }

    fn r_mod_two(ring: &GorensteinRing) -> PresentedModule {
        PresentedModule::new(ring.clone(), 1, RMatrix::from_rows(vec![vec![ring.from_scalar(2)]]))
    }

    #[test]
    fn cardinality_and_min_generators() {
        let r = z4();
        let free = PresentedModule::free(r.clone(), 2);
        assert_eq!(free.cardinality_exp(), 4); // |R^2| = 16 = 2^4
        assert_eq!(free.min_generators(), 2);
        let m = r_mod_two(&r);
        assert_eq!(m.cardinality_exp(), 1);
        assert_eq!(m.min_generators(), 1);
    }

    #[test]
    fn kernel_of_identity_is_zero() {
        let r = z4();
        let m = PresentedModule::free(r.clone(), 2);
        let (gens, ker) = kernel_module(&ModuleMap::identity(&m));
        assert!(gens.is_empty());
        assert!(ker.is_zero_module());
    }

    #[test]
    fn kernel_of_multiplication_by_two() {
        let r = z4();
        let free = PresentedModule::free(r.clone(), 1);
        let f = ModuleMap::new(
            free.clone(),
            free.clone(),
            RMatrix::from_rows(vec![vec![r.from_scalar(2)]]),
        )
        .unwrap();
        let (gens, ker) = kernel_module(&f);
        assert_eq!(gens.len(), 1);
        assert_eq!(gens[0].coords[0], r.from_scalar(2));
        assert_eq!(ker.cardinality_exp(), 1); // kernel = (2) = R/(2)
    }

    #[test]
    fn kernel_of_one_minus_tau() {
        let r = z4c2();
        let tau = r.group_generator(0);
        let free = PresentedModule::free(r.clone(), 1);
        let f = ModuleMap::new(
            free.clone(),
            free.clone(),
            RMatrix::from_rows(vec![vec![r.sub(&r.one(), &tau)]]),
        )
        .unwrap();
        let (gens, ker) = kernel_module(&f);
        // oracle: enumerate the whole ring; x = a + b·tau is killed exactly
        // when a = b, so the kernel is (1 + tau)·R of cardinality 4
        let mut count = 0u64;
        let gen_rows: Vec<Vec<RingElement>> = gens.iter().map(|g| g.coords.clone()).collect();
        for x in r.enumerate(1 << 16).unwrap() {
            if r.is_zero(&r.mul(&x, &r.sub(&r.one(), &tau))) {
                count += 1;
                assert!(rmatrix::rspan_solve(&r, &gen_rows, &vec![x.clone()]).is_some());
            }
        }
        assert_eq!(count, 4);
        assert_eq!(ker.cardinality_exp(), 2);
    }

    #[test]
    fn dual_examples() {
        let r = z4();
        let free = PresentedModule::free(r.clone(), 2);
        let d = dual(&free);
        assert_eq!(d.module.cardinality_exp(), free.cardinality_exp());

        let m = r_mod_two(&r);
        let dm = dual(&m);
        assert_eq!(dm.module.cardinality_exp(), 1);
        // oracle: maps 1 -> x with 2x = 0 over Z/4, so the generator is 2
        assert_eq!(dm.hom_vectors.len(), 1);
        assert_eq!(dm.hom_vectors[0][0], r.from_scalar(2));

        let zero = PresentedModule::zero_module(r.clone());
        assert!(dual(&zero).module.is_zero_module());
    }

    #[test]
    fn biduality_is_bijective() {
        let r = z4();
        for m in [
            PresentedModule::free(r.clone(), 1),
            r_mod_two(&r),
            PresentedModule::zero_module(r.clone()),
        ] {
            let bi = biduality_map(&m).unwrap();
            assert!(bi.map.is_bijective(), "biduality failed for {:?}", m);
            assert_eq!(m.cardinality_exp(), bi.dual.module.cardinality_exp());
        }
    }

    #[test]
    fn exterior_power_examples() {
        let r = z4();
        let free2 = PresentedModule::free(r.clone(), 2);
        let lambda2 = exterior_power(&free2, 2);
        assert_eq!(lambda2.gens, 1);
        assert_eq!(lambda2.cardinality_exp(), r.cardinality_exp());

        let m = r_mod_two(&r);
        assert!(exterior_power(&m, 2).is_zero_module());

        let mm = direct_sum(&m, &m).unwrap();
        let l2 = exterior_power(&mm, 2);
        assert_eq!(l2.cardinality_exp(), 1); // cardinality 2

        assert_eq!(exterior_power(&mm, 0).cardinality_exp(), r.cardinality_exp());
    }

    #[test]
    fn exterior_power_of_free_is_binomial() {
        let r = z4c2();
        let free3 = PresentedModule::free(r.clone(), 3);
        for k in 0..=3usize {
            let l = exterior_power(&free3, k);
            let expected = crate::wedge::binomial(3, k) as u64 * r.cardinality_exp();
            assert_eq!(l.cardinality_exp(), expected);
        }
    }

    #[test]
    fn sum_tensor_hom_examples() {
        let r = z4();
        let free = PresentedModule::free(r.clone(), 1);
        let zero = PresentedModule::zero_module(r.clone());
        let m = r_mod_two(&r);

        let s = direct_sum(&free, &zero).unwrap();
        assert_eq!(s.cardinality_exp(), free.cardinality_exp());

        let t = tensor(&m, &m).unwrap();
        assert_eq!(t.cardinality_exp(), 1);

        let h = hom(&free, &m).unwrap();
        assert_eq!(h.cardinality_exp(), m.cardinality_exp());

        let h2 = hom(&m, &free).unwrap();
        assert_eq!(h2.cardinality_exp(), 1);
    }

    #[test]
    fn socle_multiplier_contract() {
        let r = z4c2();
        let m = r_mod_two(&r); // R/(2)
        let x = m.generator(0);
        let s = socle_multiplier(&m, &x).unwrap();
        let sx = m.scale(&s, &x);
        assert!(!m.is_zero_element(&sx));
        for g in r.max_ideal_gens() {
            assert!(m.is_zero_element(&m.scale(&r.mul(g, &s), &x)));
        }

        // x generator of R -> multiplier generates the socle
        let free = PresentedModule::free(r.clone(), 1);
        let one = free.generator(0);
        let s2 = socle_multiplier(&free, &one).unwrap();
        assert!(r.socle().contains(&s2));
        assert!(!r.is_zero(&s2));

        // element already in the socle -> multiplier 1
        let soc = free.element(vec![r.socle_generator()]);
        assert_eq!(socle_multiplier(&free, &soc).unwrap(), r.one());

        // zero element errors
        assert_eq!(
            socle_multiplier(&free, &free.zero_element()).unwrap_err(),
            ModuleError::ZeroElement
        );
    }

    #[test]
    fn kernel_composes_to_zero_and_cardinality_splits() {
        let mut rng = crate::rng::SplitMix64::new(21);
        for ring in [z4(), z4c2()] {
            for _ in 0..10 {
                let b_src = 1 + rng.below(2) as usize;
                let b_tgt = 1 + rng.below(2) as usize;
                let src = PresentedModule::free(ring.clone(), b_src);
                let rows: Vec<Vec<RingElement>> = (0..b_src)
                    .map(|_| {
                        (0..b_tgt)
                            .map(|_| RingElement {
                                coeffs: (0..ring.size())
                                    .map(|_| rng.below(ring.modulus()))
                                    .collect(),
                            })
                            .collect()
                    })
                    .collect();
                let tgt = PresentedModule::free(ring.clone(), b_tgt);
                let f = ModuleMap::new(src.clone(), tgt, RMatrix::from_rows(rows)).unwrap();
                let (gens, ker) = kernel_module(&f);
                for g in &gens {
                    assert!(f.target.is_zero_element(&f.apply(g)));
                }
                assert_eq!(ker.cardinality_exp() + f.image_exp(), f.source.cardinality_exp());
            }
        }
    }
}
