//! The two-part colouring with no long monochromatic tight cycle: split the
//! vertices into `X` and `Y` and colour an edge red iff it meets `X` in an
//! even number of vertices.

use num::integer::gcd;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{Color, ColoredHypergraph, Hypergraph, Vertex};
use crate::tight::{find_tight_cycle, mono_components, ColorFilter, SearchOptions, SearchOutcome, Shape, Witness};

#[derive(Debug, Clone)]
pub struct ExtremalInstance {
    pub k: usize,
    pub n: usize,
    pub i: usize,
    /// `gcd(k, i)`, with `gcd(k, 0) = k`.
    pub d: usize,
    /// Total vertex count `(d+1)/d · k n - 2`.
    pub vertex_count: usize,
    pub x: Vec<Vertex>,
    pub y: Vec<Vertex>,
    pub coloring: ColoredHypergraph,
}

impl ExtremalInstance {
    pub fn cycle_length(&self) -> usize {
        self.k * self.n + self.i
    }

    pub fn x_meets(&self, e: &crate::hypergraph::Edge) -> usize {
        e.vertices().iter().filter(|&&v| (v as usize) < self.x.len()).count()
    }
}

pub fn extremal_coloring(k: usize, n: usize, i: usize) -> Result<ExtremalInstance> {
    if k < 3 || i >= k || n < 1 {
        return Err(Error::InvalidParameter(format!(
            "need k >= 3, 0 <= i <= k-1, n >= 1; got k={k}, n={n}, i={i}"
        )));
    }
    let d = if i == 0 { k } else { gcd(k, i) };
    let x_len = k / d * n - 1;
    let y_len = k * n - 1;
    let vertex_count = x_len + y_len;
    debug_assert_eq!(vertex_count, (d + 1) * k * n / d - 2);
    let x: Vec<Vertex> = (0..x_len as Vertex).collect();
    let y: Vec<Vertex> = (x_len as Vertex..vertex_count as Vertex).collect();
    let base = Hypergraph::complete(k, vertex_count)?;
    let coloring = ColoredHypergraph::from_rule(base, |e| {
        let meets = e.vertices().iter().filter(|&&v| (v as usize) < x_len).count();
        if meets % 2 == 0 {
            Color::Red
        } else {
            Color::Blue
        }
    });
    Ok(ExtremalInstance {
        k,
        n,
        i,
        d,
        vertex_count,
        x,
        y,
        coloring,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtremalReport {
    pub k: usize,
    pub n: usize,
    pub i: usize,
    pub vertex_count: usize,
    pub x_size: usize,
    pub y_size: usize,
    pub cycle_length: usize,
    /// Red iff `|e ∩ X|` is even, checked edge by edge.
    pub parity_rule_holds: bool,
    /// `|e ∩ X|` is constant on every red tight component.
    pub red_components_uniform: bool,
    pub red_components: usize,
    pub blue_components: usize,
    pub mono_cycle: Option<Witness>,
    pub nodes: u64,
}

pub fn verify_extremal(inst: &ExtremalInstance, opts: SearchOptions) -> Result<ExtremalReport> {
    let g = &inst.coloring;
    let parity_rule_holds = g.base().edges().iter().enumerate().all(|(id, e)| {
        inst.x_meets(e).is_multiple_of(2) == (g.color(id) == Color::Red)
    });
    let comps = mono_components(g);
    let red_components_uniform = comps.red.components().iter().all(|c| {
        let first = inst.x_meets(g.base().edge(c.edges[0]));
        c.edges.iter().all(|&id| inst.x_meets(g.base().edge(id)) == first)
    });
    let len = inst.cycle_length();
    let outcome = find_tight_cycle(g, len, ColorFilter::Any, opts)?;
    let nodes = outcome.nodes();
    let mono_cycle = match outcome {
        SearchOutcome::Found { witness, .. } => {
            debug_assert!(crate::tight::validate_witness(g, &witness, Shape::Cycle));
            Some(witness)
        }
        SearchOutcome::Absent { .. } => None,
        SearchOutcome::BudgetExhausted { .. } => return Err(Error::BudgetExhausted(opts.max_nodes)),
    };
    Ok(ExtremalReport {
        k: inst.k,
        n: inst.n,
        i: inst.i,
        vertex_count: inst.vertex_count,
        x_size: inst.x.len(),
        y_size: inst.y.len(),
        cycle_length: len,
        parity_rule_holds,
        red_components_uniform,
        red_components: comps.red.len(),
        blue_components: comps.blue.len(),
        mono_cycle,
        nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        for (k, n, i, total, x, y) in [(3, 2, 0, 6, 1, 5), (3, 2, 1, 10, 5, 5), (4, 2, 0, 8, 1, 7)] {
            let inst = extremal_coloring(k, n, i).unwrap();
            assert_eq!((inst.vertex_count, inst.x.len(), inst.y.len()), (total, x, y));
        }
        assert!(extremal_coloring(2, 2, 0).is_err());
        assert!(extremal_coloring(3, 2, 3).is_err());
        assert!(extremal_coloring(3, 0, 0).is_err());
    }

    #[test]
    fn smallest_instance_has_no_monochromatic_six_cycle() {
        let inst = extremal_coloring(3, 2, 0).unwrap();
        // edges inside Y are red, edges meeting X blue
        for (id, e) in inst.coloring.base().edges().iter().enumerate() {
            let expected = if e.contains(0) { Color::Blue } else { Color::Red };
            assert_eq!(inst.coloring.color(id), expected);
        }
        let report = verify_extremal(&inst, SearchOptions::default()).unwrap();
        assert!(report.parity_rule_holds && report.red_components_uniform);
        assert!(report.mono_cycle.is_none());
    }
}
