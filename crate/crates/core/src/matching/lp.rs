//! Exact rational simplex for `max c·x` subject to `A x <= b`, `x >= 0`
//! with `b >= 0`, so the slack basis is feasible from the start. Bland's
//! rule guarantees termination; optima come with a dual certificate.

use std::collections::{BTreeMap, BTreeSet};

use num::{Signed, Zero};

use super::fractional::FractionalMatching;
use crate::error::{Error, Result};
use crate::hypergraph::{ColoredHypergraph, Hypergraph, Vertex};
use crate::rational::Rational;
use crate::tight::{ComponentId, MonoComponents};

/// Ceiling on tableau entries.
pub const DEFAULT_LP_CAP: usize = 1 << 20;

#[derive(Debug, Clone)]
pub struct LinearProgram {
    /// Sparse rows: `(column, coefficient)`.
    pub rows: Vec<Vec<(usize, Rational)>>,
    pub rhs: Vec<Rational>,
    pub objective: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub value: Rational,
    pub primal: Vec<Rational>,
    pub dual: Vec<Rational>,
    pub pivots: usize,
}

impl LinearProgram {
    pub fn columns(&self) -> usize {
        self.objective.len()
    }

    pub fn solve(&self, cap: usize) -> Result<LpSolution> {
        let m = self.rows.len();
        let n = self.columns();
        let width = n + m + 1;
        if (m + 1).saturating_mul(width) > cap {
            return Err(Error::LpSizeCap {
                rows: m + 1,
                cols: width,
                cap,
            });
        }
        if self.rhs.iter().any(Signed::is_negative) {
            return Err(Error::InvalidParameter("negative right-hand side".into()));
        }
        let mut t = vec![vec![Rational::zero(); width]; m + 1];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, a) in row {
                t[i][*j] += a;
            }
            t[i][n + i] = Rational::from_integer(1.into());
            t[i][width - 1] = self.rhs[i].clone();
        }
        for (j, c) in self.objective.iter().enumerate() {
            t[m][j] = -c;
        }
        let mut basis: Vec<usize> = (n..n + m).collect();
        let mut pivots = 0;
        while let Some(enter) = (0..n + m).find(|&j| t[m][j].is_negative()) {
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..m {
                if !t[i][enter].is_positive() {
                    continue;
                }
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((l, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*l]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((row, _)) = leave else {
                return Err(Error::Unbounded);
            };
            pivot(&mut t, row, enter);
            basis[row] = enter;
            pivots += 1;
        }
        let mut primal = vec![Rational::zero(); n];
        for (i, &b) in basis.iter().enumerate() {
            if b < n {
                primal[b] = t[i][width - 1].clone();
            }
        }
        let dual: Vec<Rational> = (0..m).map(|i| t[m][n + i].clone()).collect();
        let solution = LpSolution {
            value: t[m][width - 1].clone(),
            primal,
            dual,
            pivots,
        };
        self.certify(&solution)?;
        Ok(solution)
    }

    /// Primal and dual feasibility plus equal objectives.
    pub fn certify(&self, s: &LpSolution) -> Result<()> {
        let fail = |what: &str| Err(Error::InternalConsistency(format!("LP certificate: {what}")));
        if s.primal.iter().any(Signed::is_negative) || s.dual.iter().any(Signed::is_negative) {
            return fail("negative variable");
        }
        for (row, b) in self.rows.iter().zip(&self.rhs) {
            let lhs: Rational = row.iter().map(|(j, a)| a * &s.primal[*j]).sum();
            if lhs > *b {
                return fail("primal row violated");
            }
        }
        let mut reduced = vec![Rational::zero(); self.columns()];
        for (row, y) in self.rows.iter().zip(&s.dual) {
            for (j, a) in row {
                reduced[*j] += a * y;
            }
        }
        if reduced.iter().zip(&self.objective).any(|(lhs, c)| lhs < c) {
            return fail("dual row violated");
        }
        let primal: Rational = self.objective.iter().zip(&s.primal).map(|(c, x)| c * x).sum();
        let dual: Rational = self.rhs.iter().zip(&s.dual).map(|(b, y)| b * y).sum();
        if primal != s.value || dual != s.value {
            return fail("objective gap");
        }
        Ok(())
    }
}

fn pivot(t: &mut [Vec<Rational>], row: usize, col: usize) {
    let p = t[row][col].clone();
    for x in t[row].iter_mut() {
        *x /= &p;
    }
    let pivot_row = t[row].clone();
    let nonzero: Vec<usize> = (0..pivot_row.len()).filter(|&j| !pivot_row[j].is_zero()).collect();
    for (i, r) in t.iter_mut().enumerate() {
        if i == row || r[col].is_zero() {
            continue;
        }
        let f = r[col].clone();
        for &j in &nonzero {
            r[j] -= &f * &pivot_row[j];
        }
    }
}

/// Maximum-weight fractional matching on the edges `ids` of `h`.
pub fn max_fractional_on(h: &Hypergraph, ids: &[usize], cap: usize) -> Result<FractionalMatching> {
    let ids: Vec<usize> = ids.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let vertices: BTreeSet<Vertex> = ids
        .iter()
        .flat_map(|&id| h.edge(id).vertices().iter().copied())
        .collect();
    let row_of: BTreeMap<Vertex, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut rows = vec![Vec::new(); vertices.len()];
    for (j, &id) in ids.iter().enumerate() {
        for v in h.edge(id).vertices() {
            rows[row_of[v]].push((j, Rational::from_integer(1.into())));
        }
    }
    let lp = LinearProgram {
        rhs: vec![Rational::from_integer(1.into()); rows.len()],
        rows,
        objective: vec![Rational::from_integer(1.into()); ids.len()],
    };
    let s = lp.solve(cap)?;
    FractionalMatching::new(
        h.k(),
        (0..h.n() as Vertex).collect(),
        ids.iter().zip(s.primal).map(|(&id, x)| (h.edge(id).clone(), x)),
    )
}

/// The fractional matching number of the whole graph.
pub fn max_fractional_value(h: &Hypergraph) -> Result<Rational> {
    let ids: Vec<usize> = (0..h.len()).collect();
    Ok(max_fractional_on(h, &ids, DEFAULT_LP_CAP)?.weight())
}

/// LP optimum supported on the union of the given monochromatic components.
pub fn max_fractional_confined(
    g: &ColoredHypergraph,
    comps: &MonoComponents,
    components: &[ComponentId],
    cap: usize,
) -> Result<FractionalMatching> {
    if components.is_empty() {
        return Err(Error::InvalidParameter("no components given".into()));
    }
    let mut ids = Vec::new();
    for &c in components {
        let index = comps.of(c.color);
        if c.index >= index.len() {
            return Err(Error::IndexOutOfRange {
                index: c.index,
                detail: format!("{} components of colour {}", index.len(), c.color),
            });
        }
        ids.extend_from_slice(comps.edges(c));
    }
    max_fractional_on(g.base(), &ids, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::Color;
    use crate::rational::ratio;
    use crate::tight::mono_components;

    #[test]
    fn textbook_program() {
        // max 3x + 2y  s.t.  x + y <= 4, x + 3y <= 6, x <= 3  -> (3, 1), value 11
        let one = || Rational::from_integer(1.into());
        let lp = LinearProgram {
            rows: vec![
                vec![(0, one()), (1, one())],
                vec![(0, one()), (1, ratio(3, 1))],
                vec![(0, one())],
            ],
            rhs: vec![ratio(4, 1), ratio(6, 1), ratio(3, 1)],
            objective: vec![ratio(3, 1), ratio(2, 1)],
        };
        let s = lp.solve(DEFAULT_LP_CAP).unwrap();
        assert_eq!(s.value, ratio(11, 1));
        assert_eq!(s.primal, vec![ratio(3, 1), ratio(1, 1)]);
    }

    #[test]
    fn unbounded_and_capped() {
        let lp = LinearProgram {
            rows: vec![vec![(0, ratio(1, 1)), (1, ratio(-1, 1))]],
            rhs: vec![ratio(1, 1)],
            objective: vec![ratio(0, 1), ratio(1, 1)],
        };
        assert_eq!(lp.solve(DEFAULT_LP_CAP).unwrap_err(), Error::Unbounded);
        assert_eq!(lp.solve(2).unwrap_err().code(), "lp-size-cap");
    }

    #[test]
    fn complete_graph_optimum_is_n_over_k() {
        for n in 3..=9 {
            for k in 3..=n.min(5) {
                let h = Hypergraph::complete(k, n).unwrap();
                assert_eq!(max_fractional_value(&h).unwrap(), ratio(n as i64, k as i64), "k={k} n={n}");
            }
        }
    }

    #[test]
    fn confined_optima() {
        let g = ColoredHypergraph::monochromatic(Hypergraph::complete(3, 6).unwrap(), Color::Red);
        let comps = mono_components(&g);
        let ids = comps.all_ids();
        assert_eq!(max_fractional_confined(&g, &comps, &ids, DEFAULT_LP_CAP).unwrap().weight(), ratio(2, 1));
        let k4 = ColoredHypergraph::monochromatic(Hypergraph::complete(3, 4).unwrap(), Color::Blue);
        let comps = mono_components(&k4);
        let phi = max_fractional_confined(&k4, &comps, &comps.all_ids(), DEFAULT_LP_CAP).unwrap();
        assert_eq!(phi.weight(), ratio(4, 3));
        let single = ColoredHypergraph::monochromatic(Hypergraph::new(3, 5, [[0, 1, 2]]).unwrap(), Color::Red);
        let comps = mono_components(&single);
        assert_eq!(
            max_fractional_confined(&single, &comps, &comps.all_ids(), DEFAULT_LP_CAP).unwrap().weight(),
            ratio(1, 1)
        );
        assert!(max_fractional_confined(&single, &comps, &[], DEFAULT_LP_CAP).is_err());
    }
}
