//! Combinatorics of wedge-monomial and symmetric-monomial bases: subsets
//! in lexicographic order, shuffle signs, and multi-indices in degree-lex
//! order.  Fixing these orders makes every matrix in the crate bit-exact.

/// All `r`-element subsets of `0..n`, lexicographically.
pub fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    if r > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..r).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic combination
        let mut i = r;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - r {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in (i + 1)..r {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Position of a sorted subset in the lexicographic list.
pub fn subset_index(n: usize, subset: &[usize]) -> usize {
    let r = subset.len();
    let mut idx = 0usize;
    let mut prev = 0usize;
    for (i, &s) in subset.iter().enumerate() {
        for v in prev..s {
            idx += binomial(n - v - 1, r - i - 1);
        }
        prev = s + 1;
    }
    idx
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut num = 1usize;
    for i in 0..k {
        num = num * (n - i) / (i + 1);
    }
    num
}

/// Sign of the shuffle that sorts the concatenation of two disjoint sorted
/// index sets: (-1)^(number of pairs (a, b) with a in `left`, b in `right`,
/// a > b).
pub fn shuffle_sign(left: &[usize], right: &[usize]) -> i64 {
    let mut inversions = 0usize;
    for &a in left {
        for &b in right {
            debug_assert_ne!(a, b);
            if a > b {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Merge two disjoint sorted sets, returning (union, shuffle sign).
pub fn merge_with_sign(left: &[usize], right: &[usize]) -> (Vec<usize>, i64) {
    let mut out = Vec::with_capacity(left.len() + right.len());
    out.extend_from_slice(left);
    out.extend_from_slice(right);
    let sign = shuffle_sign(left, right);
    out.sort_unstable();
    (out, sign)
}

/// Multi-indices of total degree `d` over `n` variables, in degree-lex
/// order (here all indices share the degree, so plain lex on exponents).
pub fn multi_indices(n: usize, d: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return if d == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    let mut cur = vec![0usize; n];
    fn rec(cur: &mut Vec<usize>, pos: usize, left: usize, out: &mut Vec<Vec<usize>>) {
        if pos == cur.len() - 1 {
            cur[pos] = left;
            out.push(cur.clone());
            return;
        }
        for v in (0..=left).rev() {
            cur[pos] = v;
            rec(cur, pos + 1, left - v, out);
        }
    }
    rec(&mut cur, 0, d, &mut out);
    out
}

/// Permutations of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    fn heap(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(cur.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, cur, out);
            if k.is_multiple_of(2) {
                cur.swap(i, k - 1);
            } else {
                cur.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut cur, &mut out);
    out
}

/// Sign of a permutation given in one-line notation.
pub fn permutation_sign(perm: &[usize]) -> i64 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1i64;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0usize;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len.is_multiple_of(2) {
            sign = -sign;
        }
    }
    sign
}
