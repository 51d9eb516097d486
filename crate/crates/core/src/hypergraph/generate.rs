use num::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{is_dense, Color, ColoredHypergraph, Hypergraph};
use crate::error::{Error, Result};
use crate::rational::{in_unit_interval, ratio, Rational};

/// Exact Bernoulli trial: draws uniformly from `0..den` and compares with
/// `num`, so `p = 0` and `p = 1` are honoured without rounding.
pub(crate) struct Bernoulli {
    num: u64,
    den: u64,
}

impl Bernoulli {
    pub(crate) fn new(p: &Rational) -> Result<Self> {
        if !in_unit_interval(p) {
            return Err(Error::InvalidParameter(format!("probability {p} outside [0, 1]")));
        }
        let num = p.numer().to_u64();
        let den = p.denom().to_u64();
        match (num, den) {
            (Some(num), Some(den)) => Ok(Bernoulli { num, den }),
            _ => Err(Error::InvalidParameter(format!("probability {p} too fine-grained"))),
        }
    }

    pub(crate) fn sample(&self, rng: &mut impl Rng) -> bool {
        rng.gen_range(0..self.den) < self.num
    }
}

fn complete_or_empty(k: usize, n: usize) -> Result<Hypergraph> {
    if k < 2 {
        return Err(Error::InvalidUniformity { k, n });
    }
    if n < k {
        Hypergraph::empty(k, n)
    } else {
        Hypergraph::complete(k, n)
    }
}

/// Complete k-graph with every edge red independently with probability
/// `p_red`. `n < k` yields the empty graph.
pub fn random_colored_complete(
    k: usize,
    n: usize,
    p_red: &Rational,
    seed: u64,
) -> Result<ColoredHypergraph> {
    let coin = Bernoulli::new(p_red)?;
    let base = complete_or_empty(k, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let colors = (0..base.len())
        .map(|_| if coin.sample(&mut rng) { Color::Red } else { Color::Blue })
        .collect();
    ColoredHypergraph::new(base, colors)
}

/// Binomial random k-graph: each k-set is an edge with probability `p`.
pub fn random_hypergraph(k: usize, n: usize, p: &Rational, seed: u64) -> Result<Hypergraph> {
    let coin = Bernoulli::new(p)?;
    let base = complete_or_empty(k, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let keep: Vec<usize> = (0..base.len()).filter(|_| coin.sample(&mut rng)).collect();
    Ok(base.edge_subgraph(keep))
}

/// A `(1-ε, ε)`-dense k-graph obtained from `K_n^(k)` by deleting each edge
/// with probability `ε/4`, resampling until the density census passes.
pub fn random_dense(k: usize, n: usize, eps: &Rational, seed: u64) -> Result<Hypergraph> {
    let mu = Rational::one() - eps;
    let p_keep = Rational::one() - eps * ratio(1, 4);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..1000 {
        let h = random_hypergraph(k, n, &p_keep, rng.gen())?;
        if is_dense(&h, &mu, eps).passes {
            return Ok(h);
        }
    }
    Err(Error::InvalidParameter(format!(
        "no ({mu}, {eps})-dense sample found for k={k}, n={n}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extreme_probabilities() {
        let red = random_colored_complete(3, 7, &ratio(1, 1), 3).unwrap();
        assert_eq!(red.count(Color::Red), 35);
        let blue = random_colored_complete(3, 7, &ratio(0, 1), 3).unwrap();
        assert_eq!(blue.count(Color::Blue), 35);
        assert!(random_colored_complete(3, 7, &ratio(3, 2), 3).is_err());
    }

    #[test]
    fn degenerate_sizes_give_empty_graphs() {
        let g = random_colored_complete(4, 2, &ratio(1, 2), 0).unwrap();
        assert!(g.base().is_empty());
        assert!(random_hypergraph(3, 1, &ratio(1, 2), 0).unwrap().is_empty());
    }

    #[test]
    fn seeded_colourings_are_reproducible() {
        let a = random_colored_complete(3, 10, &ratio(1, 2), 7).unwrap();
        let b = random_colored_complete(3, 10, &ratio(1, 2), 7).unwrap();
        let c = random_colored_complete(3, 10, &ratio(1, 2), 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn dense_samples_pass_their_census() {
        let eps = ratio(1, 10);
        for seed in 0..5 {
            let h = random_dense(3, 12, &eps, seed).unwrap();
            assert!(is_dense(&h, &(Rational::one() - &eps), &eps).passes);
        }
    }
}
