//! Checker for the closed-walk structure lemma: if a closed tight
//! pseudo-walk `e_1 .. e_m` has `e_1` and `e_i` in different blue tight
//! components, some red edge strictly between them shares a red tight
//! component with some red edge after `e_i`.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::components::{mono_components, MonoComponents};
use super::walk::{vertex_sequence_windows, PseudoWalk};
use crate::error::{Error, Result};
use crate::hypergraph::{Color, ColoredHypergraph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "witness", rename_all = "kebab-case")]
pub enum Verdict {
    /// 0-based positions in the walk: `first` lies strictly between the
    /// start and the pivot, `second` after the pivot.
    Holds { first: usize, second: usize },
    Violated,
    PreconditionFailed { reason: String },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Holds { .. } => "holds",
            Verdict::Violated => "violated",
            Verdict::PreconditionFailed { .. } => "precondition-failed",
        }
    }
}

/// `pivot` is the 0-based position of `e_i`, so `0 < pivot < m - 1`.
/// With `reversed` the roles of red and blue swap.
pub fn check_structure_lemma_with(
    g: &ColoredHypergraph,
    comps: &MonoComponents,
    q: &PseudoWalk,
    pivot: usize,
    reversed: bool,
) -> Result<Verdict> {
    let m = q.len();
    if pivot == 0 || pivot + 1 >= m {
        return Err(Error::IndexOutOfRange {
            index: pivot,
            detail: format!("pivot must satisfy 0 < i < {}", m.saturating_sub(1)),
        });
    }
    if !q.is_closed() {
        return Err(Error::WalkNotClosed);
    }
    q.validate(g.base())?;
    let (split, join) = if reversed {
        (Color::Red, Color::Blue)
    } else {
        (Color::Blue, Color::Red)
    };
    let ids: Vec<usize> = q
        .edges()
        .iter()
        .map(|e| g.base().edge_id(e).expect("validated"))
        .collect();
    let (start, mid) = (ids[0], ids[pivot]);
    if g.color(start) != split || g.color(mid) != split {
        return Ok(Verdict::PreconditionFailed {
            reason: format!("endpoints are not both {split}"),
        });
    }
    if comps.of(split).same_component(start, mid) {
        return Ok(Verdict::PreconditionFailed {
            reason: format!("endpoints share a {split} tight component"),
        });
    }
    let joiners = comps.of(join);
    let mut after: HashMap<usize, usize> = HashMap::new();
    for (pos, &id) in ids.iter().enumerate().skip(pivot + 1) {
        if g.color(id) == join {
            after.entry(joiners.component_of(id).expect("indexed")).or_insert(pos);
        }
    }
    for (pos, &id) in ids.iter().enumerate().take(pivot).skip(1) {
        if g.color(id) != join {
            continue;
        }
        if let Some(&second) = after.get(&joiners.component_of(id).expect("indexed")) {
            return Ok(Verdict::Holds { first: pos, second });
        }
    }
    Ok(Verdict::Violated)
}

pub fn check_structure_lemma(
    g: &ColoredHypergraph,
    q: &PseudoWalk,
    pivot: usize,
    reversed: bool,
) -> Result<Verdict> {
    check_structure_lemma_with(g, &mono_components(g), q, pivot, reversed)
}

/// A closed walk and pivot, enough to rerun the checker.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureCase {
    pub walk: PseudoWalk,
    pub pivot: usize,
    pub reversed: bool,
}

impl StructureCase {
    pub fn check(&self, g: &ColoredHypergraph, comps: &MonoComponents) -> Result<Verdict> {
        check_structure_lemma_with(g, comps, &self.walk, self.pivot, self.reversed)
    }
}

/// Draws a case meeting the checker's precondition on a complete colouring:
/// two split-coloured edges from different split components, joined into a
/// closed walk through up to `max_filler` random vertices on each side.
/// `None` when the split colour has fewer than two components or no
/// sequence was found in 64 tries.
pub fn sample_structure_case(
    g: &ColoredHypergraph,
    comps: &MonoComponents,
    reversed: bool,
    max_filler: usize,
    seed: u64,
) -> Option<StructureCase> {
    let split = if reversed { Color::Red } else { Color::Blue };
    let index = comps.of(split);
    if index.len() < 2 {
        return None;
    }
    let k = g.k();
    let n = g.n() as Vertex;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..64 {
        let picked: Vec<usize> = (0..index.len()).collect::<Vec<_>>().choose_multiple(&mut rng, 2).copied().collect();
        let start = *index.component(picked[0]).edges.choose(&mut rng)?;
        let mid = *index.component(picked[1]).edges.choose(&mut rng)?;
        let mut head = g.base().edge(start).to_vec();
        let mut centre = g.base().edge(mid).to_vec();
        head.shuffle(&mut rng);
        centre.shuffle(&mut rng);
        let mut seq = head.clone();
        for _ in 0..rng.gen_range(0..=max_filler) {
            seq.push(rng.gen_range(0..n));
        }
        let pivot = seq.len();
        seq.extend_from_slice(&centre);
        for _ in 0..rng.gen_range(0..=max_filler) {
            seq.push(rng.gen_range(0..n));
        }
        seq.extend_from_slice(&head[..k - 1]);
        let Ok(edges) = vertex_sequence_windows(k, &seq) else {
            continue;
        };
        let Ok(walk) = PseudoWalk::new(g.base(), edges) else {
            continue;
        };
        return Some(StructureCase { walk, pivot, reversed });
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{Edge, Hypergraph};
    use crate::tight::walk::induced_walk;

    #[test]
    fn all_red_has_no_blue_endpoints() {
        let g = ColoredHypergraph::monochromatic(Hypergraph::complete(3, 5).unwrap(), Color::Red);
        let q = induced_walk(g.base(), &[0, 1, 2, 3, 4, 0, 1]).unwrap();
        assert!(q.is_closed());
        let v = check_structure_lemma(&g, &q, 2, false).unwrap();
        assert_eq!(v.label(), "precondition-failed");
        // reversed roles: every edge is red, so the red endpoints share a component
        let v = check_structure_lemma(&g, &q, 2, true).unwrap();
        assert_eq!(v.label(), "precondition-failed");
    }

    #[test]
    fn equal_endpoints_fail_the_precondition() {
        let g = ColoredHypergraph::monochromatic(Hypergraph::complete(3, 5).unwrap(), Color::Blue);
        let e = Edge::from([0, 1, 2]);
        let q = PseudoWalk::new(g.base(), vec![e.clone(), Edge::from([1, 2, 3]), e.clone(), e])
            .unwrap();
        assert_eq!(check_structure_lemma(&g, &q, 2, false).unwrap().label(), "precondition-failed");
    }

    #[test]
    fn argument_errors() {
        let g = ColoredHypergraph::monochromatic(Hypergraph::complete(3, 6).unwrap(), Color::Blue);
        let open = induced_walk(g.base(), &[0, 1, 2, 3, 4, 5]).unwrap();
        assert_eq!(check_structure_lemma(&g, &open, 1, false).unwrap_err().code(), "walk-not-closed");
        assert_eq!(check_structure_lemma(&g, &open, 0, false).unwrap_err().code(), "index-out-of-range");
        assert_eq!(check_structure_lemma(&g, &open, 3, false).unwrap_err().code(), "index-out-of-range");
    }

    #[test]
    fn finds_a_red_bridge() {
        // blue: {0,1,2} and {3,4,5} (separate components); everything else red
        let base = Hypergraph::complete(3, 6).unwrap();
        let g = ColoredHypergraph::from_rule(base, |e| {
            if *e == Edge::from([0, 1, 2]) || *e == Edge::from([3, 4, 5]) {
                Color::Blue
            } else {
                Color::Red
            }
        });
        let forward = induced_walk(g.base(), &[0, 1, 2, 3, 4, 5]).unwrap();
        let back = induced_walk(g.base(), &[4, 5, 0, 1, 2]).unwrap();
        let q = forward.concat(&back).unwrap();
        assert!(q.is_closed());
        let v = check_structure_lemma(&g, &q, 3, false).unwrap();
        assert_eq!(v, Verdict::Holds { first: 1, second: 4 });
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(json, r#"{"verdict":"holds","witness":{"first":1,"second":4}}"#);
    }

    #[test]
    fn sampled_cases_meet_the_precondition() {
        let mut found = 0;
        for seed in 0..20 {
            let g = crate::hypergraph::random_colored_complete(3, 12, &crate::rational::ratio(19, 20), seed).unwrap();
            let comps = mono_components(&g);
            if let Some(case) = sample_structure_case(&g, &comps, false, 4, seed) {
                assert!(case.walk.is_closed());
                let v = case.check(&g, &comps).unwrap();
                assert_ne!(v.label(), "precondition-failed");
                assert_eq!(case.walk.edges()[case.pivot].len(), 3);
                found += 1;
            }
        }
        assert!(found > 10);
    }

    #[test]
    fn violations_replay_from_json() {
        // the host is just the walk, so no two edges of one colour are tightly adjacent
        let vs = [0, 1, 2, 3, 4, 5, 0, 1];
        let edges = vertex_sequence_windows(3, &vs).unwrap();
        let base = Hypergraph::new(3, 6, edges.iter().map(|e| e.to_vec())).unwrap();
        let g = ColoredHypergraph::from_rule(base, |e| {
            let pos = edges.iter().position(|f| f == e).unwrap();
            if pos % 2 == 0 {
                Color::Blue
            } else {
                Color::Red
            }
        });
        let case = StructureCase {
            walk: induced_walk(g.base(), &vs).unwrap(),
            pivot: 2,
            reversed: false,
        };
        let comps = mono_components(&g);
        assert_eq!(case.check(&g, &comps).unwrap(), Verdict::Violated);
        let back: StructureCase = serde_json::from_str(&serde_json::to_string(&case).unwrap()).unwrap();
        assert_eq!(back, case);
        assert_eq!(back.check(&g, &comps).unwrap(), Verdict::Violated);
    }
}
