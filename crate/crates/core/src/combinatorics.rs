//! Binomial coefficients and subset enumeration.

use smallvec::SmallVec;

pub type Subset<T> = SmallVec<[T; 6]>;

/// `C(n, k)` in exact integer arithmetic; saturates at `u128::MAX`.
pub fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// The real-valued binomial `x (x-1) ... (x-k+1) / k!`.
pub fn binom_real(x: f64, k: usize) -> f64 {
    let mut acc = 1.0;
    for i in 0..k {
        acc *= (x - i as f64) / (i as f64 + 1.0);
    }
    acc
}

/// Calls `f` on every `size`-subset of `items`, in lexicographic order of
/// positions.
pub fn for_each_subset<T: Copy>(items: &[T], size: usize, mut f: impl FnMut(&[T])) {
    let n = items.len();
    if size > n {
        return;
    }
    if size == 0 {
        f(&[]);
        return;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    let mut buf: Vec<T> = idx.iter().map(|&i| items[i]).collect();
    loop {
        f(&buf);
        let Some(i) = (0..size).rev().find(|&i| idx[i] < i + n - size) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
        for j in i..size {
            buf[j] = items[idx[j]];
        }
    }
}

pub fn subsets<T: Copy>(items: &[T], size: usize) -> Vec<Subset<T>> {
    let mut out = Vec::new();
    for_each_subset(items, size, |s| out.push(Subset::from_slice(s)));
    out
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (0..n).collect();
    let mut out = vec![current.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
        out.push(current.clone());
    }
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binom(4, 3), 4);
        assert_eq!(binom(6, 4), 15);
        assert_eq!(binom(3, 5), 0);
        assert_eq!(binom(40, 3), 9880);
        assert_eq!(binom(0, 0), 1);
        assert!((binom_real(4.0, 3) - 4.0).abs() < 1e-12);
        assert!((binom_real(5.5, 2) - 12.375).abs() < 1e-12);
    }

    #[test]
    fn subset_enumeration_matches_binomial() {
        let items: Vec<u32> = (0..7).collect();
        for size in 0..=8 {
            let all = subsets(&items, size);
            assert_eq!(all.len() as u128, binom(7, size));
            assert!(all.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn permutation_count() {
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(permutations(0).len(), 1);
        assert_eq!(factorial(5), 120);
    }
}
