use std::collections::{BTreeMap, BTreeSet};

use num::bigint::BigInt;
use num::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use super::integral::Matching;
use crate::error::{Error, Result};
use crate::hypergraph::{Edge, Hypergraph, Vertex};
use crate::rational::{format_rational, in_unit_interval, is_multiple_of_inverse, lcm_of_denominators, Rational};
use crate::tight::{ComponentId, MonoComponents};

/// Exact edge weights with per-vertex load at most one. `domain` is the
/// vertex set of the host the matching lives on; weights are only stored
/// when nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalMatching {
    k: usize,
    domain: BTreeSet<Vertex>,
    weights: BTreeMap<Edge, Rational>,
}

impl FractionalMatching {
    pub fn new(
        k: usize,
        domain: BTreeSet<Vertex>,
        weights: impl IntoIterator<Item = (Edge, Rational)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<Edge, Rational> = BTreeMap::new();
        for (e, w) in weights {
            if e.len() != k {
                return Err(Error::BadArity {
                    edge: e.to_vec(),
                    found: e.len(),
                    expected: k,
                });
            }
            if !in_unit_interval(&w) {
                return Err(Error::Infeasible(format!("weight {w} on {e:?} outside [0, 1]")));
            }
            if let Some(&v) = e.vertices().iter().find(|v| !domain.contains(v)) {
                return Err(Error::Infeasible(format!("edge {e:?} leaves the host at vertex {v}")));
            }
            if !w.is_zero() {
                *map.entry(e).or_insert_with(Rational::zero) += w;
            }
        }
        let phi = FractionalMatching {
            k,
            domain,
            weights: map,
        };
        phi.check_loads()?;
        Ok(phi)
    }

    pub fn zero(k: usize, domain: BTreeSet<Vertex>) -> Self {
        FractionalMatching {
            k,
            domain,
            weights: BTreeMap::new(),
        }
    }

    /// Weight one on each edge of `m`, over the host `H[V(M)]`.
    pub fn induced(m: &Matching) -> Self {
        FractionalMatching {
            k: m.k(),
            domain: m.covered(),
            weights: m.edges().iter().map(|e| (e.clone(), Rational::one())).collect(),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn domain(&self) -> &BTreeSet<Vertex> {
        &self.domain
    }

    pub fn weights(&self) -> &BTreeMap<Edge, Rational> {
        &self.weights
    }

    pub fn get(&self, e: &Edge) -> Rational {
        self.weights.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = &Edge> {
        self.weights.keys()
    }

    pub fn support_len(&self) -> usize {
        self.weights.len()
    }

    pub fn weight(&self) -> Rational {
        self.weights.values().fold(Rational::zero(), |acc, w| acc + w)
    }

    pub fn loads(&self) -> BTreeMap<Vertex, Rational> {
        let mut loads: BTreeMap<Vertex, Rational> = BTreeMap::new();
        for (e, w) in &self.weights {
            for &v in e.vertices() {
                *loads.entry(v).or_insert_with(Rational::zero) += w;
            }
        }
        loads
    }

    pub fn check_loads(&self) -> Result<()> {
        for (v, load) in self.loads() {
            if load > Rational::one() {
                return Err(Error::Infeasible(format!("vertex {v} has load {load}")));
            }
        }
        Ok(())
    }

    pub fn is_r_fractional(&self, r: i64) -> Result<bool> {
        if r < 1 {
            return Err(Error::InvalidParameter(format!("r must be positive, got {r}")));
        }
        Ok(self.weights.values().all(|w| is_multiple_of_inverse(w, r as u64)))
    }

    /// Least common denominator of the weights.
    pub fn denominator(&self) -> BigInt {
        lcm_of_denominators(self.weights.values())
    }

    pub fn min_positive_weight(&self) -> Option<&Rational> {
        self.weights.values().min()
    }

    /// Extends the domain to all of `V(H)`; the support must lie in `H`.
    pub fn completion(&self, h: &Hypergraph) -> Result<Self> {
        if h.k() != self.k {
            return Err(Error::HostNotSubgraph(format!("uniformity {} vs {}", self.k, h.k())));
        }
        if let Some(&v) = self.domain.iter().find(|&&v| v as usize >= h.n()) {
            return Err(Error::HostNotSubgraph(format!("vertex {v} outside the host")));
        }
        if let Some(e) = self.weights.keys().find(|e| !h.contains(e)) {
            return Err(Error::HostNotSubgraph(format!("edge {e:?} not in the host")));
        }
        Ok(FractionalMatching {
            k: self.k,
            domain: (0..h.n() as Vertex).collect(),
            weights: self.weights.clone(),
        })
    }

    /// Juxtaposition of two matchings on vertex-disjoint hosts.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        if self.k != other.k || !self.domain.is_disjoint(&other.domain) {
            return Err(Error::HostsNotDisjoint);
        }
        let mut weights = self.weights.clone();
        weights.extend(other.weights.iter().map(|(e, w)| (e.clone(), w.clone())));
        Ok(FractionalMatching {
            k: self.k,
            domain: self.domain.union(&other.domain).copied().collect(),
            weights,
        })
    }

    /// True iff every supported edge lies in one of the listed components.
    pub fn is_confined(
        &self,
        h: &Hypergraph,
        comps: &MonoComponents,
        allowed: &[ComponentId],
    ) -> bool {
        self.weights.keys().all(|e| {
            h.edge_id(e)
                .is_some_and(|id| allowed.iter().any(|&c| comps.contains(c, id)))
        })
    }

    /// Full revalidation against a host: membership, range and loads.
    pub fn validate_in(&self, h: &Hypergraph) -> Result<()> {
        if let Some(e) = self.weights.keys().find(|e| !h.contains(e)) {
            return Err(Error::EdgeNotInHost(e.to_vec()));
        }
        if self.weights.values().any(|w| !in_unit_interval(w)) {
            return Err(Error::Infeasible("weight outside [0, 1]".into()));
        }
        self.check_loads()
    }

    pub fn to_json(&self) -> Value {
        let number = |x: &BigInt| match x.to_i64() {
            Some(v) => json!(v),
            None => json!(x.to_string()),
        };
        let weights: Vec<Value> = self
            .weights
            .iter()
            .map(|(e, w)| json!({"edge": e.vertices(), "num": number(w.numer()), "den": number(w.denom())}))
            .collect();
        json!({ "weights": weights })
    }

    /// Parses the `{"weights": [...]}` form; the domain becomes the union
    /// of the supported edges.
    pub fn from_json(k: usize, value: &Value) -> Result<Self> {
        let bad = |what: &str| Error::MalformedJson(format!("fractional matching: {what}"));
        let list = value
            .get("weights")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing weights"))?;
        let big = |v: &Value| -> Result<BigInt> {
            match v {
                Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| bad("non-integer")),
                Value::String(s) => s.parse().map_err(|_| bad("non-integer")),
                _ => Err(bad("non-integer")),
            }
        };
        let mut entries = Vec::with_capacity(list.len());
        let mut domain = BTreeSet::new();
        for item in list {
            let edge: Vec<Vertex> = serde_json::from_value(item.get("edge").cloned().unwrap_or(Value::Null))
                .map_err(|_| bad("edge"))?;
            let den = big(item.get("den").ok_or_else(|| bad("den"))?)?;
            if den.is_zero() || den.is_negative() {
                return Err(bad("den"));
            }
            let num = big(item.get("num").ok_or_else(|| bad("num"))?)?;
            let e = Hypergraph::check_edge(k, usize::MAX, &edge)?;
            domain.extend(e.vertices().iter().copied());
            entries.push((e, Rational::new(num, den)));
        }
        FractionalMatching::new(k, domain, entries)
    }

    pub fn describe(&self) -> String {
        format!(
            "weight {} on {} edges",
            format_rational(&self.weight()),
            self.weights.len()
        )
    }
}

impl serde::Serialize for FractionalMatching {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn dom(vs: &[Vertex]) -> BTreeSet<Vertex> {
        vs.iter().copied().collect()
    }

    #[test]
    fn uniform_weight_on_a_clique() {
        for k in 3..=5 {
            let h = Hypergraph::complete(k, k + 1).unwrap();
            let phi = FractionalMatching::new(
                k,
                (0..=k as Vertex).collect(),
                h.edges().iter().map(|e| (e.clone(), ratio(1, k as i64))),
            )
            .unwrap();
            assert_eq!(phi.weight(), ratio(k as i64 + 1, k as i64));
        }
    }

    #[test]
    fn overloaded_vertices_are_rejected() {
        let e = [(Edge::from([0, 1, 2]), ratio(2, 3)), (Edge::from([0, 3, 4]), ratio(1, 2))];
        assert_eq!(
            FractionalMatching::new(3, dom(&[0, 1, 2, 3, 4]), e).unwrap_err().code(),
            "infeasible"
        );
    }

    #[test]
    fn fractionality() {
        let m = Matching::new(3, vec![Edge::from([0, 1, 2])]).unwrap();
        let phi = FractionalMatching::induced(&m);
        assert!((1..8).all(|r| phi.is_r_fractional(r).unwrap()));
        let third = FractionalMatching::new(3, dom(&[0, 1, 2]), [(Edge::from([0, 1, 2]), ratio(1, 3))])
            .unwrap();
        assert!(third.is_r_fractional(6).unwrap());
        assert!(!third.is_r_fractional(2).unwrap());
        assert!(third.is_r_fractional(0).is_err());
    }

    #[test]
    fn induced_completion_and_sums() {
        let empty = FractionalMatching::induced(&Matching::new(3, vec![]).unwrap());
        assert_eq!(empty.weight(), ratio(0, 1));
        let m = Matching::new(3, vec![Edge::from([0, 1, 2]), Edge::from([3, 4, 5])]).unwrap();
        let phi = FractionalMatching::induced(&m);
        assert_eq!(phi.weight(), ratio(2, 1));
        assert_eq!(phi.domain(), &dom(&[0, 1, 2, 3, 4, 5]));

        let h = Hypergraph::complete(3, 8).unwrap();
        let c = phi.completion(&h).unwrap();
        assert_eq!(c.weight(), phi.weight());
        assert_eq!(c.completion(&h).unwrap(), c);
        assert_eq!(c.domain().len(), 8);
        let small = Hypergraph::complete(3, 5).unwrap();
        assert_eq!(phi.completion(&small).unwrap_err().code(), "host-not-subgraph");

        let a = FractionalMatching::induced(&Matching::new(3, vec![Edge::from([0, 1, 2])]).unwrap());
        let b = FractionalMatching::induced(&Matching::new(3, vec![Edge::from([3, 4, 5])]).unwrap());
        assert_eq!(a.sum(&b).unwrap().weight(), ratio(2, 1));
        assert_eq!(a.sum(&FractionalMatching::zero(3, BTreeSet::new())).unwrap(), a);
        assert_eq!(a.sum(&a).unwrap_err().code(), "hosts-not-disjoint");
    }

    #[test]
    fn json_round_trip() {
        let phi = FractionalMatching::new(
            3,
            dom(&[0, 1, 2, 3]),
            [(Edge::from([0, 1, 2]), ratio(1, 3)), (Edge::from([1, 2, 3]), ratio(1, 2))],
        )
        .unwrap();
        let v = phi.to_json();
        assert_eq!(
            v.to_string(),
            r#"{"weights":[{"den":3,"edge":[0,1,2],"num":1},{"den":2,"edge":[1,2,3],"num":1}]}"#
        );
        assert_eq!(FractionalMatching::from_json(3, &v).unwrap(), phi);
    }
}
