//! Matrices over a Gorenstein group ring, acting on row vectors, together
//! with the expansion to Z/p^m that every solver runs on.
//!
//! A row vector x in R^rows expands to the concatenation of the
//! coefficient vectors of its entries; a matrix expands blockwise through
//! the regular representation so that expand(x·A) = expand(x)·expand(A).

use crate::linalg::{self, BaseMatrix};
use crate::ring::{GorensteinRing, RingElement};
use serde::{Deserialize, Serialize};

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RMatrix {
    pub rows: usize,
    pub cols: usize,
    /// row-major ring elements
    pub entries: Vec<RingElement>,
}

impl std::fmt::Debug for RMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "RMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.entries[r * self.cols..(r + 1) * self.cols])?;
        }
        Ok(())
    }
}

impl RMatrix {
    pub fn zero(ring: &GorensteinRing, rows: usize, cols: usize) -> Self {
        RMatrix { rows, cols, entries: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: &GorensteinRing, n: usize) -> Self {
        let mut m = Self::zero(ring, n, n);
        for i in 0..n {
            m.entries[i * n + i] = ring.one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<RingElement>>) -> Self {
        let n = rows.len();
        let cols = rows.first().map_or(0, |r| r.len());
        let mut entries = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            entries.extend(r);
        }
        RMatrix { rows: n, cols, entries }
    }

    pub fn at(&self, r: usize, c: usize) -> &RingElement {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: RingElement) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> Vec<RingElement> {
        self.entries[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn col(&self, c: usize) -> Vec<RingElement> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<RingElement>> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn transpose(&self) -> RMatrix {
        let mut t = RMatrix { rows: self.cols, cols: self.rows, entries: Vec::new() };
        let mut entries = Vec::with_capacity(self.rows * self.cols);
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.at(r, c).clone());
            }
        }
        t.entries = entries;
        t
    }

    pub fn vconcat(&self, other: &RMatrix) -> RMatrix {
        assert_eq!(self.cols, other.cols);
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        RMatrix { rows: self.rows + other.rows, cols: self.cols, entries }
    }

    pub fn mul(&self, ring: &GorensteinRing, other: &RMatrix) -> RMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = RMatrix::zero(ring, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if ring.is_zero(a) {
                    continue;
                }
                for c in 0..other.cols {
                    let add = ring.mul(a, other.at(k, c));
                    let cur = ring.add(out.at(r, c), &add);
                    out.set(r, c, cur);
                }
            }
        }
        out
    }

    pub fn is_zero(&self, ring: &GorensteinRing) -> bool {
        self.entries.iter().all(|e| ring.is_zero(e))
    }

    /// Blockwise expansion over Z/p^m: block (i, j) is regular_rep(A[i][j]).
    pub fn expand(&self, ring: &GorensteinRing) -> BaseMatrix {
        let g = ring.size();
        let mut out = BaseMatrix::zero(self.rows * g, self.cols * g, ring.modulus());
        for i in 0..self.rows {
            for j in 0..self.cols {
                let rep = ring.regular_rep(self.at(i, j));
                for a in 0..g {
                    for b in 0..g {
                        out.set(i * g + a, j * g + b, rep.at(a, b));
                    }
                }
            }
        }
        out
    }

    /// Entrywise projection into a quotient ring.
    pub fn project(&self, from: &GorensteinRing, to: &GorensteinRing) -> RMatrix {
        RMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| from.project(to, e)).collect(),
        }
    }
}

/// Flatten an R-row into its expanded coefficient vector.
pub fn expand_vec(ring: &GorensteinRing, v: &[RingElement]) -> Vec<u64> {
    let mut out = Vec::with_capacity(v.len() * ring.size());
    for e in v {
        out.extend_from_slice(&e.coeffs);
    }
    out
}

/// Inverse of `expand_vec`: group a flat coefficient vector into ring
/// elements (length must be a multiple of |G|).
pub fn group_vec(ring: &GorensteinRing, flat: &[u64]) -> Vec<RingElement> {
    let g = ring.size();
    assert_eq!(flat.len() % g, 0);
    flat.chunks(g).map(|c| RingElement { coeffs: c.to_vec() }).collect()
}

pub fn rvec_mul(ring: &GorensteinRing, x: &[RingElement], a: &RMatrix) -> Vec<RingElement> {
    assert_eq!(x.len(), a.rows);
    let mut out = vec![ring.zero(); a.cols];
    for (i, xi) in x.iter().enumerate() {
        if ring.is_zero(xi) {
            continue;
        }
        for c in 0..a.cols {
            out[c] = ring.add(&out[c], &ring.mul(xi, a.at(i, c)));
        }
    }
    out
}

pub fn rvec_add(ring: &GorensteinRing, x: &[RingElement], y: &[RingElement]) -> Vec<RingElement> {
    x.iter().zip(y.iter()).map(|(a, b)| ring.add(a, b)).collect()
}

pub fn rvec_scale(ring: &GorensteinRing, s: &RingElement, x: &[RingElement]) -> Vec<RingElement> {
    x.iter().map(|a| ring.mul(s, a)).collect()
}

pub fn rvec_is_zero(ring: &GorensteinRing, x: &[RingElement]) -> bool {
    x.iter().all(|a| ring.is_zero(a))
}

/// The Howell basis of the Z/p^m-span of the R-span of the given R-rows.
pub fn rspan(ring: &GorensteinRing, rows: &[Vec<RingElement>], cols: usize) -> BaseMatrix {
    let g = ring.size();
    let n = ring.modulus();
    let mut flat_rows = Vec::new();
    for row in rows {
        assert_eq!(row.len(), cols);
        // gamma * row for every group element gamma spans the R-row over Z
        for gamma in 0..g {
            let gam = ring.basis_element(gamma);
            let scaled: Vec<RingElement> = row.iter().map(|e| ring.mul(&gam, e)).collect();
            flat_rows.push(expand_vec(ring, &scaled));
        }
    }
    linalg::howell(&BaseMatrix::from_rows(flat_rows, cols * g, n))
}

/// Solve x_1·g_1 + ... + x_k·g_k = target over R, the g_i given as R-rows.
pub fn rspan_solve(
    ring: &GorensteinRing,
    gens: &[Vec<RingElement>],
    target: &[RingElement],
) -> Option<Vec<RingElement>> {
    let g = ring.size();
    let cols = target.len();
    let mut flat_rows = Vec::new();
    for row in gens {
        for gamma in 0..g {
            let gam = ring.basis_element(gamma);
            let scaled: Vec<RingElement> = row.iter().map(|e| ring.mul(&gam, e)).collect();
            flat_rows.push(expand_vec(ring, &scaled));
        }
    }
    let mat = BaseMatrix::from_rows(flat_rows, cols * g, ring.modulus());
    let sol = linalg::solve_left(&mat, &expand_vec(ring, target))?;
    // coefficient at (generator i, gamma) is the gamma-coefficient of x_i
    let mut out = Vec::with_capacity(gens.len());
    for i in 0..gens.len() {
        out.push(RingElement { coeffs: sol[i * g..(i + 1) * g].to_vec() });
    }
    Some(out)
}

/// Generators over R of { c in R^t : c·gens ∈ span }, i.e. the syzygies of
/// the rows `gens` relative to a Z-span (`span` may be empty for syzygies
/// into the free module).
pub fn rsyzygies(
    ring: &GorensteinRing,
    gens: &[Vec<RingElement>],
    cols: usize,
    span: &BaseMatrix,
) -> Vec<Vec<RingElement>> {
    let g = ring.size();
    let t = gens.len();
    let n = ring.modulus();
    if t == 0 {
        return Vec::new();
    }
    let mut flat_rows = Vec::new();
    for row in gens {
        for gamma in 0..g {
            let gam = ring.basis_element(gamma);
            let scaled: Vec<RingElement> = row.iter().map(|e| ring.mul(&gam, e)).collect();
            flat_rows.push(expand_vec(ring, &scaled));
        }
    }
    let top = BaseMatrix::from_rows(flat_rows, cols * g, n);
    let stacked = if span.rows > 0 { top.vconcat(span) } else { top };
    let ker = linalg::left_kernel(&stacked);
    let mut out = Vec::new();
    for r in 0..ker.rows {
        let x = &ker.row(r)[..t * g];
        if x.iter().any(|&v| v != 0) {
            out.push(group_vec(ring, x));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{make_ring, GroupSpec};

    #[test]
    fn expansion_is_compatible_with_action() {
        let r = make_ring(2, 2, GroupSpec::new(vec![2])).unwrap();
        let mut rng = crate::rng::SplitMix64::new(1);
        for _ in 0..20 {
            let a = RMatrix::from_rows(
                (0..2)
                    .map(|_| {
                        (0..3)
                            .map(|_| RingElement {
                                coeffs: (0..2).map(|_| rng.below(4)).collect(),
                            })
                            .collect()
                    })
                    .collect(),
            );
            let x: Vec<RingElement> =
                (0..2).map(|_| RingElement { coeffs: (0..2).map(|_| rng.below(4)).collect() }).collect();
            let lhs = expand_vec(&r, &rvec_mul(&r, &x, &a));
            let rhs = linalg::row_mul_vec(&expand_vec(&r, &x), &a.expand(&r));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn rspan_solve_round_trip() {
        let r = make_ring(3, 1, GroupSpec::new(vec![3])).unwrap();
        let mut rng = crate::rng::SplitMix64::new(2);
        for _ in 0..20 {
            let gens: Vec<Vec<RingElement>> = (0..2)
                .map(|_| {
                    (0..2)
                        .map(|_| RingElement { coeffs: (0..3).map(|_| rng.below(3)).collect() })
                        .collect()
                })
                .collect();
            let coeffs: Vec<RingElement> =
                (0..2).map(|_| RingElement { coeffs: (0..3).map(|_| rng.below(3)).collect() }).collect();
            let mut target = vec![r.zero(); 2];
            for (c, g) in coeffs.iter().zip(gens.iter()) {
                target = rvec_add(&r, &target, &rvec_scale(&r, c, g));
            }
            let sol = rspan_solve(&r, &gens, &target).expect("solvable");
            let mut check = vec![r.zero(); 2];
            for (c, g) in sol.iter().zip(gens.iter()) {
                check = rvec_add(&r, &check, &rvec_scale(&r, c, g));
            }
            assert_eq!(expand_vec(&r, &check), expand_vec(&r, &target));
        }
    }

    #[test]
    fn syzygies_annihilate() {
        let r = make_ring(2, 3, GroupSpec::trivial()).unwrap();
        let gens = vec![
            vec![r.from_scalar(2), r.from_scalar(4)],
            vec![r.from_scalar(4), r.from_scalar(0)],
        ];
        let syz = rsyzygies(&r, &gens, 2, &BaseMatrix::zero(0, 2, 8));
        assert!(!syz.is_empty());
        for s in &syz {
            let mut acc = vec![r.zero(); 2];
            for (c, g) in s.iter().zip(gens.iter()) {
                acc = rvec_add(&r, &acc, &rvec_scale(&r, c, g));
            }
            assert!(rvec_is_zero(&r, &acc));
        }
    }
}
