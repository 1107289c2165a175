//! Exact linear algebra over Z/p^m.
//!
//! Row spans over Z/p^m are not determined by a basis in the field sense;
//! the Howell normal form is the canonical echelon form that is complete
//! for row-span membership: two matrices have the same row span exactly
//! when they have the same Howell form, and every span element reduces to
//! zero against it.
//!
//! Matrices act on row vectors throughout: the span of `A` is
//! `{ x·A : x }`, kernels are left kernels `{ x : x·A = 0 }`.

use serde::{Deserialize, Serialize};

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub modulus: u64,
    /// row-major, entries reduced into `[0, modulus)`
    pub entries: Vec<u64>,
}

impl std::fmt::Debug for BaseMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BaseMatrix {}x{} mod {}", self.rows, self.cols, self.modulus)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl BaseMatrix {
    pub fn zero(rows: usize, cols: usize, modulus: u64) -> Self {
        BaseMatrix { rows, cols, modulus, entries: vec![0; rows * cols] }
    }

    pub fn identity(n: usize, modulus: u64) -> Self {
        let mut m = Self::zero(n, n, modulus);
        for i in 0..n {
            m.entries[i * n + i] = 1 % modulus;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<u64>>, cols: usize, modulus: u64) -> Self {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            entries.extend(r.into_iter().map(|x| x % modulus));
        }
        BaseMatrix { rows: n, cols, modulus, entries }
    }

    pub fn at(&self, r: usize, c: usize) -> u64 {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.entries[r * self.cols + c] = v % self.modulus;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> BaseMatrix {
        let mut t = BaseMatrix::zero(self.cols, self.rows, self.modulus);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.entries[c * self.rows + r] = self.at(r, c);
            }
        }
        t
    }

    pub fn mul(&self, other: &BaseMatrix) -> BaseMatrix {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.modulus, other.modulus);
        let n = self.modulus;
        let mut out = BaseMatrix::zero(self.rows, other.cols, n);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let v = (out.at(r, c) + a * other.at(k, c)) % n;
                    out.entries[r * other.cols + c] = v;
                }
            }
        }
        out
    }

    /// `[self | other]` side by side.
    pub fn hconcat(&self, other: &BaseMatrix) -> BaseMatrix {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.modulus, other.modulus);
        let cols = self.cols + other.cols;
        let mut out = BaseMatrix::zero(self.rows, cols, self.modulus);
        for r in 0..self.rows {
            out.entries[r * cols..r * cols + self.cols].copy_from_slice(self.row(r));
            out.entries[r * cols + self.cols..(r + 1) * cols].copy_from_slice(other.row(r));
        }
        out
    }

    /// `self` on top of `other`.
    pub fn vconcat(&self, other: &BaseMatrix) -> BaseMatrix {
        assert_eq!(self.cols, other.cols);
        assert_eq!(self.modulus, other.modulus);
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        BaseMatrix { rows: self.rows + other.rows, cols: self.cols, modulus: self.modulus, entries }
    }
}

pub fn row_mul_vec(x: &[u64], a: &BaseMatrix) -> Vec<u64> {
    assert_eq!(x.len(), a.rows);
    let n = a.modulus;
    let mut out = vec![0u64; a.cols];
    for (i, &xi) in x.iter().enumerate() {
        if xi == 0 {
            continue;
        }
        for c in 0..a.cols {
            out[c] = (out[c] + xi * a.at(i, c)) % n;
        }
    }
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Modular inverse of `a` mod `n` for `a` a unit.
pub fn mod_inv(a: u64, n: u64) -> u64 {
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (n as i128, (a % n) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert!(r == 1, "not a unit: {} mod {}", a, n);
    (((t % n as i128) + n as i128) % n as i128) as u64
}

pub fn smallest_prime_factor(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return d;
        }
        d += 2;
    }
    n
}

/// Canonical Howell normal form of the row span of `a`.
///
/// Every row is led by a pivot `p^v` (unit part normalized away), pivot
/// columns strictly increase, entries above a pivot are reduced modulo the
/// pivot, and for every row the annihilator multiple `p^(m-v)·row` lies in
/// the span of the later rows.  The form is unique for the row span.
pub fn howell(a: &BaseMatrix) -> BaseMatrix {
    let n = a.modulus;
    let cols = a.cols;
    let mut work: Vec<Vec<u64>> = a.row_vecs().into_iter().filter(|r| r.iter().any(|&x| x != 0)).collect();
    let mut result: Vec<Vec<u64>> = Vec::new();

    for col in 0..cols {
        // pick among rows (all zero before `col`) the entry generating the
        // largest ideal at this column, i.e. minimal gcd with the modulus
        let mut best: Option<(usize, u64)> = None;
        for (i, r) in work.iter().enumerate() {
            if r[col] != 0 {
                let g = gcd(r[col], n);
                if best.is_none_or(|(_, bg)| g < bg) {
                    best = Some((i, g));
                }
            }
        }
        let Some((idx, g)) = best else { continue };
        let mut pivot_row = work.swap_remove(idx);
        // normalize so the pivot entry is exactly g
        let u = mod_inv(pivot_row[col] / g, n);
        for x in pivot_row.iter_mut() {
            *x = (*x * u) % n;
        }
        debug_assert_eq!(pivot_row[col], g);
        // clear the column below (every other work row has valuation >= v)
        for r in work.iter_mut() {
            if r[col] != 0 {
                let q = r[col] / g;
                for (x, &pv) in r.iter_mut().zip(pivot_row.iter()) {
                    *x = (*x + (n - (q * pv) % n)) % n;
                }
                debug_assert_eq!(r[col], 0);
            }
        }
        // annihilator closure: (n/g)·pivot_row is in the span and is zero at
        // this column; keep it so the span stays reduction-complete
        let ann = n / g;
        if ann != 1 {
            let extra: Vec<u64> = pivot_row.iter().map(|&x| (x * (ann % n)) % n).collect();
            if extra.iter().any(|&x| x != 0) {
                work.push(extra);
            }
        }
        work.retain(|r| r.iter().any(|&x| x != 0));
        result.push(pivot_row);
    }

    // reduce entries above each pivot modulo the pivot
    let pivots: Vec<(usize, u64)> = result
        .iter()
        .map(|r| {
            let c = r.iter().position(|&x| x != 0).unwrap();
            (c, r[c])
        })
        .collect();
    for i in 0..result.len() {
        for j in (i + 1)..result.len() {
            let (c, g) = pivots[j];
            let q = result[i][c] / g;
            if q != 0 {
                let rj = result[j].clone();
                for (x, &pv) in result[i].iter_mut().zip(rj.iter()) {
                    *x = (*x + (n - (q * pv) % n)) % n;
                }
            }
        }
    }

    BaseMatrix::from_rows(result, cols, n)
}

/// Reduce `x` to its canonical representative modulo the row span of the
/// Howell form `h`.  The result is zero exactly when `x` lies in the span.
pub fn reduce_mod_span(x: &[u64], h: &BaseMatrix) -> Vec<u64> {
    let n = h.modulus;
    let mut v = x.iter().map(|&e| e % n).collect::<Vec<u64>>();
    for r in 0..h.rows {
        let row = h.row(r);
        let c = row.iter().position(|&e| e != 0).unwrap();
        let g = row[c];
        let q = v[c] / g;
        if q != 0 {
            for (xv, &pv) in v.iter_mut().zip(row.iter()) {
                *xv = (*xv + (n - (q * pv) % n)) % n;
            }
        }
    }
    v
}

pub fn span_contains(h: &BaseMatrix, x: &[u64]) -> bool {
    reduce_mod_span(x, h).iter().all(|&e| e == 0)
}

/// Does the span of `h_sub` contain every row of `other`?
pub fn span_contains_all(h_sub: &BaseMatrix, other: &BaseMatrix) -> bool {
    (0..other.rows).all(|r| span_contains(h_sub, other.row(r)))
}

/// log_p of the cardinality of the row span of a Howell form.
pub fn span_size_exp(h: &BaseMatrix) -> u64 {
    if h.modulus == 1 {
        return 0;
    }
    let p = smallest_prime_factor(h.modulus);
    let mut total = 0u64;
    for r in 0..h.rows {
        let c = h.row(r).iter().position(|&e| e != 0).unwrap();
        let mut count = h.modulus / gcd(h.at(r, c), h.modulus);
        while count > 1 {
            count /= p;
            total += 1;
        }
    }
    total
}

/// Generators of the left kernel `{ x : x·a = 0 }`.
pub fn left_kernel(a: &BaseMatrix) -> BaseMatrix {
    let aug = a.hconcat(&BaseMatrix::identity(a.rows, a.modulus));
    let h = howell(&aug);
    let mut rows = Vec::new();
    for r in 0..h.rows {
        if h.row(r)[..a.cols].iter().all(|&x| x == 0) {
            rows.push(h.row(r)[a.cols..].to_vec());
        }
    }
    BaseMatrix::from_rows(rows, a.rows, a.modulus)
}

/// A witness `x` with `x·a = b`, if one exists.
pub fn solve_left(a: &BaseMatrix, b: &[u64]) -> Option<Vec<u64>> {
    assert_eq!(b.len(), a.cols);
    let n = a.modulus;
    let aug = a.hconcat(&BaseMatrix::identity(a.rows, n));
    let h = howell(&aug);
    let mut target: Vec<u64> = b.iter().map(|&x| x % n).collect();
    let mut acc = vec![0u64; a.rows];
    for r in 0..h.rows {
        let row = h.row(r);
        let c = row.iter().position(|&e| e != 0).unwrap();
        if c >= a.cols {
            break;
        }
        let g = row[c];
        let q = target[c] / g;
        if q != 0 {
            for i in 0..a.cols {
                target[i] = (target[i] + (n - (q * row[i]) % n)) % n;
            }
            for i in 0..a.rows {
                acc[i] = (acc[i] + q * row[a.cols + i]) % n;
            }
        }
    }
    if target.iter().all(|&x| x == 0) {
        Some(acc)
    } else {
        None
    }
}

/// Canonical form of the sum of two row spans.
pub fn span_sum(a: &BaseMatrix, b: &BaseMatrix) -> BaseMatrix {
    howell(&a.vconcat(b))
}

/// Canonical form of the intersection of two row spans.
pub fn span_intersection(a: &BaseMatrix, b: &BaseMatrix) -> BaseMatrix {
    let n = a.modulus;
    assert_eq!(a.cols, b.cols);
    if a.rows == 0 || b.rows == 0 {
        return BaseMatrix::zero(0, a.cols, n);
    }
    // pairs (x, y) with x·a = y·b correspond to kernel rows of [a; -b]
    let mut neg_b = b.clone();
    for e in neg_b.entries.iter_mut() {
        *e = (n - *e) % n;
    }
    let stacked = a.vconcat(&neg_b);
    let ker = left_kernel(&stacked);
    let mut rows = Vec::new();
    for r in 0..ker.rows {
        let x = &ker.row(r)[..a.rows];
        let v = row_mul_vec(x, a);
        if v.iter().any(|&e| e != 0) {
            rows.push(v);
        }
    }
    howell(&BaseMatrix::from_rows(rows, a.cols, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn mat(rows: Vec<Vec<u64>>, cols: usize, n: u64) -> BaseMatrix {
        BaseMatrix::from_rows(rows, cols, n)
    }

    /// Brute-force row span as a sorted set of vectors (oracle).
    fn enumerate_span(a: &BaseMatrix) -> Vec<Vec<u64>> {
        let n = a.modulus;
        let k = a.rows;
        let mut coeffs = vec![0u64; k];
        let mut out = std::collections::BTreeSet::new();
        loop {
            out.insert(row_mul_vec(&coeffs, a));
            // odometer increment
            let mut i = 0;
            loop {
                if i == k {
                    return out.into_iter().collect();
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
    fn identity_is_fixed() {
        let id = BaseMatrix::identity(3, 4);
        assert_eq!(howell(&id), id);
    }

    #[test]
    fn diagonal_two_already_howell() {
        let a = mat(vec![vec![2, 0], vec![0, 2]], 2, 4);
        assert_eq!(howell(&a), a);
    }

    #[test]
    fn same_span_same_form() {
        let a = mat(vec![vec![1, 2], vec![2, 0]], 2, 4);
        let b = mat(vec![vec![1, 2], vec![2, 0], vec![3, 2]], 2, 4);
        assert_eq!(howell(&a), howell(&b));
        assert_eq!(enumerate_span(&a), enumerate_span(&b));
    }

    #[test]
    fn howell_is_idempotent_and_span_preserving_exhaustive() {
        // random small matrices over Z/4, Z/8, Z/9: the span enumerated by
        // brute force must agree with the span enumerated from the form
        let mut rng = SplitMix64::new(42);
        for &n in &[4u64, 8, 9] {
            for _ in 0..60 {
                let rows = 1 + (rng.below(3) as usize);
                let cols = 1 + (rng.below(3) as usize);
                let a = mat(
                    (0..rows).map(|_| (0..cols).map(|_| rng.below(n)).collect()).collect(),
                    cols,
                    n,
                );
                let h = howell(&a);
                assert_eq!(howell(&h), h, "idempotence failed");
                assert_eq!(enumerate_span(&a), enumerate_span(&h), "span changed");
                let exp = span_size_exp(&h);
                let p = smallest_prime_factor(n);
                assert_eq!(enumerate_span(&a).len() as u64, p.pow(exp as u32));
                // every span member reduces to zero
                for v in enumerate_span(&a) {
                    assert!(span_contains(&h, &v));
                }
            }
        }
    }

    #[test]
    fn kernel_of_identity_is_trivial() {
        let ker = left_kernel(&BaseMatrix::identity(3, 8));
        assert_eq!(ker.rows, 0);
    }

    #[test]
    fn kernel_of_two_mod_four() {
        let a = mat(vec![vec![2]], 1, 4);
        let ker = left_kernel(&a);
        assert_eq!(howell(&ker), mat(vec![vec![2]], 1, 4));
    }

    #[test]
    fn kernel_of_column_two_two() {
        // map Z/4^2 -> Z/4 sending (x, y) to 2x + 2y
        let a = mat(vec![vec![2], vec![2]], 1, 4);
        let ker = howell(&left_kernel(&a));
        let expected = howell(&mat(vec![vec![1, 1], vec![2, 0]], 2, 4));
        assert_eq!(ker, expected);
        // oracle: all 16 candidates
        for x in 0..4u64 {
            for y in 0..4u64 {
                let is_ker = (2 * x + 2 * y) % 4 == 0;
                assert_eq!(span_contains(&ker, &[x, y]), is_ker);
            }
        }
    }

    #[test]
    fn kernel_rows_satisfy_equation_random() {
        let mut rng = SplitMix64::new(7);
        for &n in &[4u64, 8, 9, 16] {
            for _ in 0..40 {
                let rows = 1 + (rng.below(4) as usize);
                let cols = 1 + (rng.below(4) as usize);
                let a = mat(
                    (0..rows).map(|_| (0..cols).map(|_| rng.below(n)).collect()).collect(),
                    cols,
                    n,
                );
                let ker = left_kernel(&a);
                for r in 0..ker.rows {
                    assert!(row_mul_vec(ker.row(r), &a).iter().all(|&x| x == 0));
                }
            }
        }
    }

    #[test]
    fn solve_examples() {
        let id = BaseMatrix::identity(2, 4);
        assert_eq!(solve_left(&id, &[3, 1]), Some(vec![3, 1]));
        let a = mat(vec![vec![2]], 1, 4);
        let x = solve_left(&a, &[2]).unwrap();
        assert_eq!(row_mul_vec(&x, &a), vec![2]);
        assert_eq!(solve_left(&a, &[1]), None);
    }

    #[test]
    fn solve_random_in_span() {
        let mut rng = SplitMix64::new(9);
        for &n in &[4u64, 8, 9, 27] {
            for _ in 0..40 {
                let rows = 1 + (rng.below(3) as usize);
                let cols = 1 + (rng.below(3) as usize);
                let a = mat(
                    (0..rows).map(|_| (0..cols).map(|_| rng.below(n)).collect()).collect(),
                    cols,
                    n,
                );
                let coeff: Vec<u64> = (0..rows).map(|_| rng.below(n)).collect();
                let b = row_mul_vec(&coeff, &a);
                let x = solve_left(&a, &b).expect("b is in the span");
                assert_eq!(row_mul_vec(&x, &a), b);
            }
        }
    }

    #[test]
    fn double_kernel_contains_row_span() {
        let mut rng = SplitMix64::new(11);
        for &n in &[4u64, 9] {
            for _ in 0..30 {
                let rows = 1 + (rng.below(3) as usize);
                let cols = 1 + (rng.below(3) as usize);
                let a = mat(
                    (0..rows).map(|_| (0..cols).map(|_| rng.below(n)).collect()).collect(),
                    cols,
                    n,
                );
                let right_ker = left_kernel(&a.transpose());
                let closure = howell(&left_kernel(&right_ker.transpose()));
                for r in 0..a.rows {
                    assert!(span_contains(&closure, a.row(r)));
                }
            }
        }
    }

    #[test]
    fn intersection_exhaustive() {
        let mut rng = SplitMix64::new(13);
        for &n in &[4u64, 8, 9] {
            for _ in 0..30 {
                let cols = 1 + (rng.below(2) as usize);
                let mk = |rng: &mut SplitMix64| {
                    mat(
                        (0..2).map(|_| (0..cols).map(|_| rng.below(n)).collect()).collect(),
                        cols,
                        n,
                    )
                };
                let a = mk(&mut rng);
                let b = mk(&mut rng);
                let int = span_intersection(&howell(&a), &howell(&b));
                let sa: std::collections::BTreeSet<_> = enumerate_span(&a).into_iter().collect();
                let sb: std::collections::BTreeSet<_> = enumerate_span(&b).into_iter().collect();
                let expected: Vec<Vec<u64>> = sa.intersection(&sb).cloned().collect();
                let got = enumerate_span(&int);
                assert_eq!(got, expected);
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn rows(n: u64) -> impl Strategy<Value = Vec<Vec<u64>>> {
            proptest::collection::vec(proptest::collection::vec(0..n, 3), 1..4)
        }

        proptest! {
            #[test]
            fn howell_invariant_under_appended_combinations(
                r in rows(8),
                mix in proptest::collection::vec(0u64..8, 3),
            ) {
                let a = BaseMatrix::from_rows(r, 3, 8);
                let mut extended = a.row_vecs();
                let coeffs: Vec<u64> = mix.iter().take(a.rows).copied().collect();
                if coeffs.len() == a.rows {
                    extended.push(row_mul_vec(&coeffs, &a));
                }
                let b = BaseMatrix::from_rows(extended, 3, 8);
                prop_assert_eq!(howell(&a), howell(&b));
            }

            #[test]
            fn solve_always_finds_appended_combinations(
                r in rows(9),
                mix in proptest::collection::vec(0u64..9, 3),
            ) {
                let a = BaseMatrix::from_rows(r, 3, 9);
                let coeffs: Vec<u64> = mix.iter().take(a.rows).copied().collect();
                prop_assume!(coeffs.len() == a.rows);
                let b = row_mul_vec(&coeffs, &a);
                let x = solve_left(&a, &b).expect("combination must solve");
                prop_assert_eq!(row_mul_vec(&x, &a), b);
            }
        }
    }

    #[test]
    fn reduction_gives_canonical_normal_form() {
        // two vectors congruent mod the span reduce to the same representative
        let mut rng = SplitMix64::new(17);
        for _ in 0..50 {
            let n = 8u64;
            let cols = 3usize;
            let a = mat(
                (0..2).map(|_| (0..cols).map(|_| rng.below(n)).collect()).collect(),
                cols,
                n,
            );
            let h = howell(&a);
            let x: Vec<u64> = (0..cols).map(|_| rng.below(n)).collect();
            let coeff: Vec<u64> = (0..a.rows).map(|_| rng.below(n)).collect();
            let shift = row_mul_vec(&coeff, &a);
            let y: Vec<u64> = x.iter().zip(shift.iter()).map(|(&u, &v)| (u + v) % n).collect();
            assert_eq!(reduce_mod_span(&x, &h), reduce_mod_span(&y, &h));
        }
    }
}
