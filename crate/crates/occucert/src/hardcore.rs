//! Exact hard-core model computations on small graphs: independent-set
//! enumeration, partition functions, marginals, and occupancy, all in
//! arbitrary-precision rational arithmetic.
//!
//! Everything factors over connected components, so the enumeration cap
//! applies per component rather than to the whole graph.

use crate::graph::{Graph, GraphError};
use crate::rat::{fmt_rat, parse_rat, Rat};
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HardcoreError {
    #[error("fugacity has {got} entries, graph has {want} vertices")]
    LengthMismatch { got: usize, want: usize },
    #[error("fugacity at vertex {v} is negative")]
    NegativeFugacity { v: usize },
    #[error("component of size {size} exceeds the enumeration cap {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Per-vertex activity vector; entries are nonnegative exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fugacity {
    values: Vec<Rat>,
}

impl Fugacity {
    pub fn uniform(n: usize, value: Rat) -> Result<Fugacity, HardcoreError> {
        if value.is_negative() {
            return Err(HardcoreError::NegativeFugacity { v: 0 });
        }
        Ok(Fugacity {
            values: vec![value; n],
        })
    }

    pub fn per_vertex(values: Vec<Rat>) -> Result<Fugacity, HardcoreError> {
        if let Some(v) = values.iter().position(|x| x.is_negative()) {
            return Err(HardcoreError::NegativeFugacity { v });
        }
        Ok(Fugacity { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, v: usize) -> &Rat {
        &self.values[v]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rat> {
        self.values.iter()
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    /// The common value when all entries agree.
    pub fn as_uniform(&self) -> Option<&Rat> {
        let first = self.values.first()?;
        self.values.iter().all(|v| v == first).then_some(first)
    }

    fn check_len(&self, g: &Graph) -> Result<(), HardcoreError> {
        if self.len() != g.n() {
            return Err(HardcoreError::LengthMismatch {
                got: self.len(),
                want: g.n(),
            });
        }
        Ok(())
    }
}

// JSON form: {"uniform": "p/q"} or {"values": ["p/q", ...]}.
impl Serialize for Fugacity {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = ser.serialize_map(Some(1))?;
        if let Some(u) = self.as_uniform() {
            map.serialize_entry("uniform", &fmt_rat(u))?;
        } else {
            let vals: Vec<String> = self.values.iter().map(fmt_rat).collect();
            map.serialize_entry("values", &vals)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for Fugacity {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Repr {
            uniform: Option<String>,
            values: Option<Vec<String>>,
        }
        let repr = Repr::deserialize(de)?;
        match (repr.uniform, repr.values) {
            (Some(u), None) => {
                let r = parse_rat(&u).map_err(D::Error::custom)?;
                if r.is_negative() {
                    return Err(D::Error::custom("fugacity must be nonnegative"));
                }
                // Length is resolved against a graph later; store the single value.
                Ok(Fugacity { values: vec![r] })
            }
            (None, Some(vals)) => {
                let values = vals
                    .iter()
                    .map(|s| parse_rat(s).map_err(D::Error::custom))
                    .collect::<Result<Vec<_>, _>>()?;
                Fugacity::per_vertex(values).map_err(D::Error::custom)
            }
            _ => Err(D::Error::custom(
                "expected exactly one of `uniform` or `values`",
            )),
        }
    }
}

impl Fugacity {
    /// Resolves a parsed JSON fugacity against a graph: a single `uniform`
    /// value broadcasts to n vertices, `values` must match exactly.
    pub fn resolve(self, g: &Graph) -> Result<Fugacity, HardcoreError> {
        if self.values.len() == 1 && g.n() != 1 {
            return Fugacity::uniform(g.n(), self.values[0].clone());
        }
        self.check_len(g)?;
        Ok(self)
    }
}

/// All independent sets of `g` as bitmasks, in ascending mask order
/// (equivalently, lexicographic in the indicator vector read from bit 0).
pub fn enumerate_independent_sets(g: &Graph, cap: usize) -> Result<Vec<u64>, HardcoreError> {
    if g.n() > cap {
        return Err(HardcoreError::CapExceeded {
            size: g.n(),
            cap,
        });
    }
    let mut out = Vec::new();
    // Branch on the highest undecided vertex, excluding before including, so
    // emission order is ascending by mask value.
    fn rec(g: &Graph, v: isize, chosen: u64, out: &mut Vec<u64>) {
        if v < 0 {
            out.push(chosen);
            return;
        }
        rec(g, v - 1, chosen, out);
        if g.adj_mask(v as usize) & chosen == 0 {
            rec(g, v - 1, chosen | 1 << v, out);
        }
    }
    rec(g, g.n() as isize - 1, 0, &mut out);
    out.sort_unstable();
    Ok(out)
}

/// Exact per-component accumulation: partition function and unnormalized
/// per-vertex occupation weights for one component, by pruned recursion.
struct ComponentSums {
    z: Rat,
    vertex_weight: Vec<Rat>, // indexed by position within the component
}

fn component_sums(g: &Graph, lam: &[Rat]) -> ComponentSums {
    let n = g.n();
    let mut z = Rat::zero();
    let mut vertex_weight = vec![Rat::zero(); n];

    fn rec(
        g: &Graph,
        lam: &[Rat],
        v: isize,
        chosen: u64,
        weight: &Rat,
        z: &mut Rat,
        vw: &mut [Rat],
    ) {
        if v < 0 {
            *z += weight;
            let mut s = chosen;
            while s != 0 {
                let u = s.trailing_zeros() as usize;
                s &= s - 1;
                vw[u] += weight;
            }
            return;
        }
        rec(g, lam, v - 1, chosen, weight, z, vw);
        let u = v as usize;
        if g.adj_mask(u) & chosen == 0 && !lam[u].is_zero() {
            let w = weight * &lam[u];
            rec(g, lam, v - 1, chosen | 1 << u, &w, z, vw);
        }
    }
    rec(
        g,
        lam,
        n as isize - 1,
        0,
        &Rat::one(),
        &mut z,
        &mut vertex_weight,
    );
    ComponentSums { z, vertex_weight }
}

fn per_component(
    g: &Graph,
    lam: &Fugacity,
    cap: usize,
) -> Result<(Rat, Vec<Rat>), HardcoreError> {
    lam.check_len(g)?;
    let mut z = Rat::one();
    let mut marginals = vec![Rat::zero(); g.n()];
    for comp in g.components() {
        if comp.len() > cap {
            return Err(HardcoreError::CapExceeded {
                size: comp.len(),
                cap,
            });
        }
        let sub = g.induced(&comp)?;
        let sub_lam: Vec<Rat> = comp.iter().map(|&v| lam.get(v).clone()).collect();
        let sums = component_sums(&sub, &sub_lam);
        debug_assert!(sums.z.is_positive());
        for (i, &v) in comp.iter().enumerate() {
            marginals[v] = &sums.vertex_weight[i] / &sums.z;
        }
        z *= sums.z;
    }
    Ok((z, marginals))
}

/// Z_G(lambda) = sum over independent sets of the product of activities.
pub fn partition_function(g: &Graph, lam: &Fugacity, cap: usize) -> Result<Rat, HardcoreError> {
    Ok(per_component(g, lam, cap)?.0)
}

/// Pr(v in X) for every vertex, exactly.
pub fn marginals(g: &Graph, lam: &Fugacity, cap: usize) -> Result<Vec<Rat>, HardcoreError> {
    Ok(per_component(g, lam, cap)?.1)
}

/// E|X| = sum of the marginals, exactly.
pub fn expected_size(g: &Graph, lam: &Fugacity, cap: usize) -> Result<Rat, HardcoreError> {
    Ok(per_component(g, lam, cap)?
        .1
        .into_iter()
        .fold(Rat::zero(), |acc, m| acc + m))
}

/// ln Z as a double; exact rational Z is computed first, so the only error is
/// the final logarithm (~1e-15 relative).
pub fn log_partition(g: &Graph, lam: &Fugacity, cap: usize) -> Result<f64, HardcoreError> {
    let z = partition_function(g, lam, cap)?;
    Ok(crate::rat::ln_rat(&z))
}

#[derive(Debug, Clone)]
pub struct HardcoreSummary {
    pub partition_function: Rat,
    pub marginals: Vec<Rat>,
    pub expected_size: Rat,
    pub log_partition: f64,
}

pub fn summary(g: &Graph, lam: &Fugacity, cap: usize) -> Result<HardcoreSummary, HardcoreError> {
    let (z, marginals) = per_component(g, lam, cap)?;
    let expected_size = marginals.iter().fold(Rat::zero(), |acc, m| acc + m);
    let log_partition = crate::rat::ln_rat(&z);
    Ok(HardcoreSummary {
        partition_function: z,
        marginals,
        expected_size,
        log_partition,
    })
}

/// The full distribution as (mask, probability) pairs in ascending mask
/// order. This materializes every independent set; the cap applies to the
/// whole graph.
pub fn hardcore_distribution(
    g: &Graph,
    lam: &Fugacity,
    cap: usize,
) -> Result<Vec<(u64, Rat)>, HardcoreError> {
    lam.check_len(g)?;
    let sets = enumerate_independent_sets(g, cap)?;
    let mut weights: Vec<(u64, Rat)> = Vec::with_capacity(sets.len());
    let mut z = Rat::zero();
    for mask in sets {
        let mut w = Rat::one();
        let mut s = mask;
        while s != 0 {
            let v = s.trailing_zeros() as usize;
            s &= s - 1;
            w *= lam.get(v);
        }
        z += &w;
        weights.push((mask, w));
    }
    for (_, w) in &mut weights {
        *w /= &z;
    }
    Ok(weights)
}

#[derive(Debug, Clone)]
pub struct InducedModel {
    pub graph: Graph,
    pub fugacity: Fugacity,
    /// vertex_map[i] is the original index of vertex i in the induced graph.
    pub vertex_map: Vec<usize>,
}

/// Restriction of a model to `keep` (sorted, nonempty): induced subgraph with
/// the matching activity entries.
pub fn induced_model(
    g: &Graph,
    lam: &Fugacity,
    keep: &[usize],
) -> Result<InducedModel, HardcoreError> {
    lam.check_len(g)?;
    let graph = g.induced(keep)?;
    let fugacity = Fugacity::per_vertex(keep.iter().map(|&v| lam.get(v).clone()).collect())?;
    Ok(InducedModel {
        graph,
        fugacity,
        vertex_map: keep.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};
    use crate::tol::DEFAULT_ENUM_CAP;

    const CAP: usize = DEFAULT_ENUM_CAP;

    fn star2() -> Graph {
        Graph::new(3, &[(0, 1), (0, 2)]).unwrap()
    }

    fn triangle() -> Graph {
        Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn enumeration_order_and_content() {
        let sets = enumerate_independent_sets(&star2(), CAP).unwrap();
        // Empty, {0}, {1}, {2}, {1,2} in ascending mask order.
        assert_eq!(sets, vec![0b000, 0b001, 0b010, 0b100, 0b110]);
        let k3 = enumerate_independent_sets(&triangle(), CAP).unwrap();
        assert_eq!(k3, vec![0b000, 0b001, 0b010, 0b100]);
    }

    #[test]
    fn star_partition_function_and_marginals() {
        let g = star2();
        let lam = Fugacity::uniform(3, rat(7, 5)).unwrap();
        assert_eq!(partition_function(&g, &lam, CAP).unwrap(), rat(179, 25));
        let m = marginals(&g, &lam, CAP).unwrap();
        assert_eq!(m, vec![rat(35, 179), rat(84, 179), rat(84, 179)]);
        assert_eq!(expected_size(&g, &lam, CAP).unwrap(), rat(203, 179));
    }

    #[test]
    fn triangle_expected_size() {
        let lam = Fugacity::uniform(3, rat_int(1)).unwrap();
        assert_eq!(expected_size(&triangle(), &lam, CAP).unwrap(), rat(3, 4));
    }

    #[test]
    fn zero_fugacity_vertex_never_occupied() {
        let g = star2();
        let lam =
            Fugacity::per_vertex(vec![rat_int(0), rat_int(1), rat_int(2)]).unwrap();
        let m = marginals(&g, &lam, CAP).unwrap();
        assert_eq!(m[0], rat_int(0));
        // With the center pinned out, leaves behave independently: lam/(1+lam).
        assert_eq!(m[1], rat(1, 2));
        assert_eq!(m[2], rat(2, 3));
    }

    #[test]
    fn partition_function_factorizes_over_components() {
        let g = Graph::new(5, &[(0, 1), (1, 2), (3, 4)]).unwrap();
        let lam = Fugacity::uniform(5, rat(1, 3)).unwrap();
        let whole = partition_function(&g, &lam, CAP).unwrap();
        let p3 = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let k2 = Graph::new(2, &[(0, 1)]).unwrap();
        let z1 = partition_function(&p3, &Fugacity::uniform(3, rat(1, 3)).unwrap(), CAP).unwrap();
        let z2 = partition_function(&k2, &Fugacity::uniform(2, rat(1, 3)).unwrap(), CAP).unwrap();
        assert_eq!(whole, z1 * z2);
    }

    #[test]
    fn spatial_markov_identity() {
        // Pr(u in X) = lam_u/(1+lam_u) * Pr(X misses N(u)), exactly.
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let lam = Fugacity::per_vertex(vec![rat(1, 2), rat(2, 3), rat(3, 4), rat(1, 5)])
            .unwrap();
        let dist = hardcore_distribution(&g, &lam, CAP).unwrap();
        let marg = marginals(&g, &lam, CAP).unwrap();
        for u in 0..4 {
            let miss: Rat = dist
                .iter()
                .filter(|(mask, _)| mask & g.adj_mask(u) == 0)
                .map(|(_, p)| p.clone())
                .fold(Rat::zero(), |a, b| a + b);
            let lhs = marg[u].clone();
            let lam_u = lam.get(u);
            let rhs = lam_u / (Rat::one() + lam_u) * miss;
            assert_eq!(lhs, rhs, "vertex {u}");
        }
    }

    #[test]
    fn marginal_upper_bound() {
        // Pr(v in X) <= lam_v/(1+lam_v), equality only for isolated vertices.
        let g = star2();
        let lam = Fugacity::uniform(3, rat(7, 5)).unwrap();
        let m = marginals(&g, &lam, CAP).unwrap();
        let cap_v = rat(7, 5) / (rat_int(1) + rat(7, 5));
        for v in 0..3 {
            assert!(m[v] < cap_v);
        }
        let iso = Graph::new(1, &[]).unwrap();
        let m = marginals(&iso, &Fugacity::uniform(1, rat(7, 5)).unwrap(), CAP).unwrap();
        assert_eq!(m[0], cap_v);
    }

    #[test]
    fn log_partition_matches_reference() {
        let g = star2();
        let lam = Fugacity::uniform(3, rat(7, 5)).unwrap();
        let got = log_partition(&g, &lam, CAP).unwrap();
        assert!((got - 1.9685099809725542).abs() <= 1e-13);
        // Empty-activity model: Z = 1 exactly.
        let zero = Fugacity::uniform(3, rat_int(0)).unwrap();
        assert_eq!(log_partition(&g, &zero, CAP).unwrap(), 0.0);
    }

    #[test]
    fn distribution_sums_to_one() {
        let g = triangle();
        let lam = Fugacity::uniform(3, rat(2, 7)).unwrap();
        let dist = hardcore_distribution(&g, &lam, CAP).unwrap();
        let total: Rat = dist.iter().map(|(_, p)| p.clone()).fold(Rat::zero(), |a, b| a + b);
        assert_eq!(total, Rat::one());
    }

    #[test]
    fn induced_model_restricts_consistently() {
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let lam = Fugacity::per_vertex(vec![rat(1, 2), rat(1, 3), rat(1, 4), rat(1, 5)])
            .unwrap();
        let sub = induced_model(&g, &lam, &[0, 2, 3]).unwrap();
        assert_eq!(sub.vertex_map, vec![0, 2, 3]);
        assert_eq!(sub.graph, Graph::new(3, &[(1, 2)]).unwrap());
        assert_eq!(sub.fugacity.get(0), &rat(1, 2));
        assert_eq!(sub.fugacity.get(1), &rat(1, 4));
    }

    #[test]
    fn cap_is_per_component() {
        // Two K2 components: fine with cap 2 even though n = 4.
        let g = Graph::new(4, &[(0, 1), (2, 3)]).unwrap();
        let lam = Fugacity::uniform(4, rat_int(1)).unwrap();
        assert!(partition_function(&g, &lam, 2).is_ok());
        // A connected 3-path trips the same cap.
        let p3 = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let lam3 = Fugacity::uniform(3, rat_int(1)).unwrap();
        assert!(matches!(
            partition_function(&p3, &lam3, 2),
            Err(HardcoreError::CapExceeded { size: 3, cap: 2 })
        ));
    }

    #[test]
    fn fugacity_json_round_trip() {
        let uni = Fugacity::uniform(3, rat(7, 5)).unwrap();
        let json = serde_json::to_string(&uni).unwrap();
        assert_eq!(json, r#"{"uniform":"7/5"}"#);
        let back: Fugacity = serde_json::from_str(&json).unwrap();
        assert_eq!(back.resolve(&star2()).unwrap(), uni);

        let pv = Fugacity::per_vertex(vec![rat(1, 2), rat(1, 3), rat_int(2)]).unwrap();
        let json = serde_json::to_string(&pv).unwrap();
        assert_eq!(json, r#"{"values":["1/2","1/3","2"]}"#);
        let back: Fugacity = serde_json::from_str(&json).unwrap();
        assert_eq!(back.resolve(&star2()).unwrap(), pv);

        assert!(serde_json::from_str::<Fugacity>(r#"{"uniform":"-1"}"#).is_err());
        assert!(serde_json::from_str::<Fugacity>(r#"{}"#).is_err());
        assert!(
            serde_json::from_str::<Fugacity>(r#"{"uniform":"1","values":[]}"#).is_err()
        );
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let lam = Fugacity::per_vertex(vec![rat_int(1); 2]).unwrap();
        assert!(matches!(
            partition_function(&star2(), &lam, CAP),
            Err(HardcoreError::LengthMismatch { got: 2, want: 3 })
        ));
    }
}
