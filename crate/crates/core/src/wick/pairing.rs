//! Perfect matchings of 2n ordered positions.

use num_complex::Complex64;

/// Σ over perfect matchings of Π C[i][j] (i < j), memoized on the set of
/// still-unpaired positions. `pair(i, j)` is only called with i < j.
pub fn pairing_sum(n: usize, pair: &dyn Fn(usize, usize) -> Complex64) -> Complex64 {
    if n % 2 == 1 {
        return Complex64::new(0.0, 0.0);
    }
    let mut table = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in i + 1..n {
            table[i * n + j] = pair(i, j);
        }
    }
    let full = (1usize << n) - 1;
    let mut memo: Vec<Option<Complex64>> = vec![None; 1 << n];
    memo[0] = Some(Complex64::new(1.0, 0.0));
    fn go(mask: usize, n: usize, table: &[Complex64], memo: &mut [Option<Complex64>]) -> Complex64 {
        if let Some(v) = memo[mask] {
            return v;
        }
        let first = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << first);
        let mut total = Complex64::new(0.0, 0.0);
        let mut m = rest;
        while m != 0 {
            let j = m.trailing_zeros() as usize;
            m &= m - 1;
            total += table[first * n + j] * go(rest & !(1 << j), n, table, memo);
        }
        memo[mask] = Some(total);
        total
    }
    go(full, n, &table, &mut memo)
}

/// Visits every perfect matching of `0..n` explicitly, as a list of pairs
/// (i, j) with i < j, and returns how many were visited.
pub fn for_each_pairing(n: usize, mut visit: impl FnMut(&[(usize, usize)])) -> u64 {
    if n % 2 == 1 {
        return 0;
    }
    fn go(
        free: &mut Vec<usize>,
        pairs: &mut Vec<(usize, usize)>,
        visit: &mut dyn FnMut(&[(usize, usize)]),
        count: &mut u64,
    ) {
        if free.is_empty() {
            visit(pairs);
            *count += 1;
            return;
        }
        let first = free.remove(0);
        for k in 0..free.len() {
            let j = free.remove(k);
            pairs.push((first, j));
            go(free, pairs, visit, count);
            pairs.pop();
            free.insert(k, j);
        }
        free.insert(0, first);
    }
    let mut count = 0;
    go(&mut (0..n).collect(), &mut Vec::new(), &mut visit, &mut count);
    count
}

/// (n-1)!! for even n, the number of perfect matchings.
pub fn double_factorial_odd(n: usize) -> u64 {
    if n % 2 == 1 {
        return 0;
    }
    (1..n as u64).step_by(2).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_double_factorial() {
        for n in (0..=12).step_by(2) {
            assert_eq!(for_each_pairing(n, |_| {}), double_factorial_odd(n));
        }
        assert_eq!(double_factorial_odd(12), 10395);
        assert_eq!(for_each_pairing(5, |_| {}), 0);
    }

    #[test]
    fn memoized_sum_equals_explicit_enumeration() {
        let pair = |i: usize, j: usize| Complex64::new((i + 2 * j) as f64 * 0.1, (i * j) as f64 * 0.05 - 0.2);
        for n in [2, 4, 6, 8] {
            let mut explicit = Complex64::new(0.0, 0.0);
            for_each_pairing(n, |ps| explicit += ps.iter().map(|&(i, j)| pair(i, j)).product::<Complex64>());
            let memo = pairing_sum(n, &pair);
            assert!((explicit - memo).norm() < 1e-12 * explicit.norm().max(1.0));
        }
    }
}
