//! Fitting ideals via minor enumeration, characteristic ideals via the
//! top exterior bidual of a presentation kernel, and the brute-force
//! annihilator that serves as their oracle.

use crate::linalg::BaseMatrix;
use crate::modules::{self, PresentedModule};
use crate::ring::{GorensteinRing, Ideal, RingElement};
use crate::rmatrix::{self, RMatrix};
use crate::wedge;

/// Determinant of the square submatrix picked by `rows` × `cols`, by
/// Laplace expansion with subset memoization (column by column).
pub fn minor_det(
    ring: &GorensteinRing,
    m: &RMatrix,
    rows: &[usize],
    cols: &[usize],
) -> RingElement {
    let k = rows.len();
    assert_eq!(k, cols.len());
    if k == 0 {
        return ring.one();
    }
    // f(mask) = det of the submatrix on the rows in `mask` and the first
    // popcount(mask) columns
    let mut table = vec![None::<RingElement>; 1 << k];
    table[0] = Some(ring.one());
    let mut masks: Vec<u32> = (0..(1u32 << k)).collect();
    masks.sort_by_key(|m| m.count_ones());
    for mask in masks {
        if mask == 0 {
            continue;
        }
        let j = mask.count_ones() as usize - 1; // column position
        let mut acc = ring.zero();
        let mut sign_pos = j; // cofactor sign along column j is (-1)^(pos+j)
        for (pos, &ri) in rows.iter().enumerate() {
            if mask & (1 << pos) == 0 {
                continue;
            }
            let entry = m.at(ri, cols[j]);
            if !ring.is_zero(entry) {
                let sub = table[(mask ^ (1 << pos)) as usize].as_ref().unwrap();
                let term = ring.mul(entry, sub);
                if sign_pos.is_multiple_of(2) {
                    acc = ring.add(&acc, &term);
                } else {
                    acc = ring.sub(&acc, &term);
                }
            }
            sign_pos += 1;
        }
        table[mask as usize] = Some(acc);
    }
    table[(1 << k) - 1].clone().unwrap()
}

/// Determinant of a square R-matrix.
pub fn det(ring: &GorensteinRing, m: &RMatrix) -> RingElement {
    assert_eq!(m.rows, m.cols);
    let idx: Vec<usize> = (0..m.rows).collect();
    minor_det(ring, m, &idx, &idx)
}

/// Classical cofactor-recursion determinant, kept as an independent route
/// for cross-checking the memoized expansion.
pub fn det_recursive(
    ring: &GorensteinRing,
    m: &RMatrix,
    rows: &[usize],
    cols: &[usize],
) -> RingElement {
    let k = rows.len();
    if k == 0 {
        return ring.one();
    }
    if k == 1 {
        return m.at(rows[0], cols[0]).clone();
    }
    let mut acc = ring.zero();
    for (pos, &ri) in rows.iter().enumerate() {
        let entry = m.at(ri, cols[0]);
        if ring.is_zero(entry) {
            continue;
        }
        let rest: Vec<usize> = rows.iter().copied().filter(|&r| r != ri).collect();
        let sub = det_recursive(ring, m, &rest, &cols[1..]);
        let term = ring.mul(entry, &sub);
        if pos % 2 == 0 {
            acc = ring.add(&acc, &term);
        } else {
            acc = ring.sub(&acc, &term);
        }
    }
    acc
}

/// Fitt^i_R(M): the ideal of (n−i)×(n−i) minors of the relation matrix of
/// a presentation with n generators, with the empty-minor convention
/// det(∅) = 1.  Enumeration stops early once the ideal reaches R.
pub fn fitting_ideal(m: &PresentedModule, i: usize) -> Ideal {
    let ring = m.ring.clone();
    let n = m.gens;
    if i >= n {
        return Ideal::unit(ring);
    }
    let k = n - i;
    let a = m.relations.rows;
    if a < k {
        // too few relations: pad with zero rows, every k-minor vanishes
        return Ideal::zero(ring);
    }
    let mut gens = Vec::new();
    let row_sets = wedge::subsets(a, k);
    let col_sets = wedge::subsets(n, k);
    let mut ideal = Ideal::zero(ring.clone());
    for rs in &row_sets {
        for cs in &col_sets {
            let d = minor_det(&ring, &m.relations, rs, cs);
            if !ring.is_zero(&d) && !ideal.contains(&d) {
                gens.push(d);
                ideal = Ideal::new(ring.clone(), gens.clone());
                if ideal.is_unit_ideal() {
                    return ideal;
                }
            }
        }
    }
    ideal
}

/// Ann_R(M), by linear solving: r annihilates M exactly when r·e_j lies in
/// the relation span for every generator.
pub fn annihilator_module(m: &PresentedModule) -> Ideal {
    let ring = &m.ring;
    if m.gens == 0 {
        return Ideal::unit(ring.clone());
    }
    let g = ring.size();
    // r ↦ (r in slot 0, …, r in slot b-1); each slot condition is the same
    // identity block, so the stacked map is one g × (b·g) identity pattern
    // per slot with the relation span imposed blockwise
    let mut big: Option<BaseMatrix> = None;
    for j in 0..m.gens {
        let mut blk = BaseMatrix::zero(g, m.gens * g, ring.modulus());
        for a in 0..g {
            blk.set(a, j * g + a, 1);
        }
        big = Some(match big.take() {
            None => blk,
            Some(acc) => acc.hconcat(&blk),
        });
    }
    let big = big.unwrap();
    let total = m.gens * m.gens * g;
    let mut vrows = Vec::new();
    for blk in 0..m.gens {
        for r in 0..m.relspan().rows {
            let mut row = vec![0u64; total];
            row[blk * m.gens * g..(blk + 1) * m.gens * g].copy_from_slice(m.relspan().row(r));
            vrows.push(row);
        }
    }
    let vspan = crate::linalg::howell(&BaseMatrix::from_rows(vrows, total, ring.modulus()));
    let pre = modules::preimage_span(&big, &vspan);
    Ideal::from_basis(ring.clone(), pre)
}

/// Exhaustive annihilator for rings within the enumeration bound.
pub fn annihilator_module_bruteforce(m: &PresentedModule, bound: u64) -> Option<Ideal> {
    let ring = &m.ring;
    let elements = ring.enumerate(bound)?;
    let mut gens = Vec::new();
    for r in &elements {
        let kills = (0..m.gens).all(|j| {
            let e = m.generator(j);
            m.is_zero_element(&m.scale(r, &e))
        });
        if kills {
            gens.push(r.clone());
        }
    }
    Some(Ideal::new(ring.clone(), gens))
}

/// char_R(Z): choose the presentation surjection R^s → Z, present its
/// kernel N, and take the image of evaluating the top exterior bidual of
/// N against the wedge of the coordinate functionals.
pub fn characteristic_ideal(z: &PresentedModule) -> Ideal {
    let ring = z.ring.clone();
    let s = z.gens;
    if s == 0 {
        return Ideal::unit(ring);
    }
    // N = ker(R^s → Z) is the relation span, as a set
    let n_rows: Vec<Vec<RingElement>> =
        (0..z.relspan().rows).map(|r| rmatrix::group_vec(&ring, z.relspan().row(r))).collect();
    let zero_span = BaseMatrix::zero(0, s * ring.size(), ring.modulus());
    let n_sub = modules::present_subquotient(&ring, s, &n_rows, &zero_span);
    let n_mod = &n_sub.module;
    if n_mod.gens == 0 {
        // Z is free of rank s ≥ 1, so its characteristic ideal vanishes
        return Ideal::zero(ring);
    }
    let n_dual = modules::dual(n_mod);
    // the coordinate functionals restricted to N, in dual coordinates
    let mut coord_functionals = Vec::with_capacity(s);
    for i in 0..s {
        let vec_i: Vec<RingElement> = n_sub.gens.iter().map(|g| g[i].clone()).collect();
        let phi = n_dual
            .coords_of_vector(&vec_i)
            .expect("coordinate functional restricts to the kernel module");
        coord_functionals.push(phi.coords);
    }
    // wedge f_1 ∧ … ∧ f_s in the wedge-monomial coordinates of Λ^s N^*
    let sd = n_dual.module.gens;
    let monomials = wedge::subsets(sd, s);
    if monomials.is_empty() {
        return Ideal::zero(ring);
    }
    let mut wedge_coords = vec![ring.zero(); monomials.len()];
    let fmat = RMatrix::from_rows(coord_functionals);
    for (idx, mono) in monomials.iter().enumerate() {
        wedge_coords[idx] = minor_det(&ring, &fmat, &(0..s).collect::<Vec<_>>(), mono);
    }
    // generators of (Λ^s N^*)^* evaluated at the wedge give the image
    let lambda = modules::exterior_power(&n_dual.module, s);
    let lambda_dual = modules::dual(&lambda);
    let mut gens = Vec::new();
    for u in &lambda_dual.hom_vectors {
        let mut val = ring.zero();
        for (uk, wk) in u.iter().zip(wedge_coords.iter()) {
            val = ring.add(&val, &ring.mul(uk, wk));
        }
        gens.push(val);
    }
    Ideal::new(ring, gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modules::PresentedModule;
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
    fn det_routes_agree_random() {
        let ring = z4c2();
        let mut rng = crate::rng::SplitMix64::new(33);
        for _ in 0..30 {
            let k = 1 + rng.below(4) as usize;
            let m = RMatrix::from_rows(
                (0..k)
                    .map(|_| {
                        (0..k)
                            .map(|_| RingElement { coeffs: (0..2).map(|_| rng.below(4)).collect() })
                            .collect()
                    })
                    .collect(),
            );
            let idx: Vec<usize> = (0..k).collect();
            assert_eq!(minor_det(&ring, &m, &idx, &idx), det_recursive(&ring, &m, &idx, &idx));
        }
    }

    #[test]
    fn det_is_multiplicative_random() {
        let ring = z4();
        let mut rng = crate::rng::SplitMix64::new(35);
        for _ in 0..20 {
            let k = 2 + rng.below(2) as usize;
            let rand = |rng: &mut crate::rng::SplitMix64| {
                RMatrix::from_rows(
                    (0..k)
                        .map(|_| {
                            (0..k).map(|_| RingElement { coeffs: vec![rng.below(4)] }).collect()
                        })
                        .collect(),
                )
            };
            let a = rand(&mut rng);
            let b = rand(&mut rng);
            let ab = a.mul(&ring, &b);
            assert_eq!(det(&ring, &ab), ring.mul(&det(&ring, &a), &det(&ring, &b)));
        }
    }

    #[test]
    fn fitting_of_free_module() {
        let r = z4();
        let free = PresentedModule::free(r.clone(), 1);
        assert!(fitting_ideal(&free, 0).is_zero());
        assert!(fitting_ideal(&free, 1).is_unit_ideal());
    }

    #[test]
    fn fitting_of_r_mod_two() {
        let r = z4();
        let m = r_mod_two(&r);
        assert_eq!(fitting_ideal(&m, 0), Ideal::principal(r.clone(), r.from_scalar(2)));
        assert!(fitting_ideal(&m, 1).is_unit_ideal());
    }

    #[test]
    fn fitting_is_presentation_independent() {
        let r = z4();
        // R/(2) ⊕ R presented two ways
        let a = PresentedModule::new(
            r.clone(),
            2,
            RMatrix::from_rows(vec![vec![r.from_scalar(2), r.zero()]]),
        );
        // redundant generator z = x + y alongside 2x = 0
        let b = PresentedModule::new(
            r.clone(),
            3,
            RMatrix::from_rows(vec![
                vec![r.from_scalar(2), r.zero(), r.zero()],
                vec![r.one(), r.one(), r.neg(&r.one())],
            ]),
        );
        for i in 0..3 {
            assert_eq!(fitting_ideal(&a, i), fitting_ideal(&b, i), "Fitt^{} differs", i);
        }
    }

    #[test]
    fn char_examples() {
        let r = z4();
        let zero = PresentedModule::zero_module(r.clone());
        assert!(characteristic_ideal(&zero).is_unit_ideal());

        let m = r_mod_two(&r);
        assert_eq!(characteristic_ideal(&m), Ideal::principal(r.clone(), r.from_scalar(2)));
        assert_eq!(characteristic_ideal(&m), annihilator_module_bruteforce(&m, 1 << 16).unwrap());

        let free = PresentedModule::free(r.clone(), 1);
        assert!(characteristic_ideal(&free).is_zero());
    }

    #[test]
    fn annihilator_paths_agree() {
        let r = z4c2();
        let tau = r.group_generator(0);
        let m = PresentedModule::new(
            r.clone(),
            1,
            RMatrix::from_rows(vec![vec![r.sub(&r.one(), &tau)]]),
        );
        let solver = annihilator_module(&m);
        let brute = annihilator_module_bruteforce(&m, 1 << 16).unwrap();
        assert_eq!(solver, brute);

        assert!(annihilator_module(&PresentedModule::free(r.clone(), 1)).is_zero());
        let two = r_mod_two(&z4());
        assert_eq!(annihilator_module(&two), Ideal::principal(z4(), z4().from_scalar(2)));
    }

    #[test]
    fn char_equals_annihilator_random() {
        let mut rng = crate::rng::SplitMix64::new(55);
        for ring in [z4(), z4c2()] {
            for _ in 0..8 {
                let gens = 1 + rng.below(2) as usize;
                let rels = 1 + rng.below(2) as usize;
                let m = PresentedModule::new(
                    ring.clone(),
                    gens,
                    RMatrix::from_rows(
                        (0..rels)
                            .map(|_| {
                                (0..gens)
                                    .map(|_| RingElement {
                                        coeffs: (0..ring.size())
                                            .map(|_| rng.below(ring.modulus()))
                                            .collect(),
                                    })
                                    .collect()
                            })
                            .collect(),
                    ),
                );
                let c = characteristic_ideal(&m);
                let a = annihilator_module(&m);
                assert_eq!(c, a, "char != ann for {:?}", m);
                assert!(c.contains_ideal(&fitting_ideal(&m, 0)), "Fitt^0 not inside char");
            }
        }
    }
}
