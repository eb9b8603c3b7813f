//! Graph family constructors, seeded random generators, and exhaustive
//! enumeration of small connected graphs up to isomorphism.

use crate::graph::{Graph, GraphError};
use rand::Rng;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("{what} needs at least {min} vertices, got {got}")]
    TooSmall {
        what: &'static str,
        min: usize,
        got: usize,
    },
    #[error("edge probability {p} outside [0, 1]")]
    BadProbability { p: f64 },
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("bad arguments for `{family}`: {msg}")]
    BadArguments { family: String, msg: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub fn complete(n: usize) -> Result<Graph, FamilyError> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u as u32, v as u32));
        }
    }
    Ok(Graph::new(n, &edges)?)
}

pub fn path(n: usize) -> Result<Graph, FamilyError> {
    let edges: Vec<(u32, u32)> = (1..n).map(|v| (v as u32 - 1, v as u32)).collect();
    Ok(Graph::new(n, &edges)?)
}

pub fn cycle(n: usize) -> Result<Graph, FamilyError> {
    if n < 3 {
        return Err(FamilyError::TooSmall {
            what: "cycle",
            min: 3,
            got: n,
        });
    }
    let mut edges: Vec<(u32, u32)> = (1..n).map(|v| (v as u32 - 1, v as u32)).collect();
    edges.push((0, n as u32 - 1));
    Ok(Graph::new(n, &edges)?)
}

/// Star with the given number of leaves; vertex 0 is the center. Zero leaves
/// gives the one-vertex graph.
pub fn star(leaves: usize) -> Result<Graph, FamilyError> {
    let edges: Vec<(u32, u32)> = (1..=leaves).map(|v| (0, v as u32)).collect();
    Ok(Graph::new(leaves + 1, &edges)?)
}

/// Complete bipartite graph; vertices 0..a on one side, a..a+b on the other.
pub fn complete_bipartite(a: usize, b: usize) -> Result<Graph, FamilyError> {
    if a == 0 || b == 0 {
        return Err(FamilyError::TooSmall {
            what: "complete bipartite side",
            min: 1,
            got: 0,
        });
    }
    let mut edges = Vec::new();
    for u in 0..a {
        for v in 0..b {
            edges.push((u as u32, (a + v) as u32));
        }
    }
    Ok(Graph::new(a + b, &edges)?)
}

/// Disjoint union; part i's vertices are shifted past all earlier parts.
pub fn disjoint_union(parts: &[Graph]) -> Result<Graph, FamilyError> {
    let total: usize = parts.iter().map(Graph::n).sum();
    let mut edges = Vec::new();
    let mut offset = 0u32;
    for g in parts {
        for &(u, v) in g.edges() {
            edges.push((u + offset, v + offset));
        }
        offset += g.n() as u32;
    }
    Ok(Graph::new(total, &edges)?)
}

/// G(n, p): each pair appears independently with probability p. Pairs are
/// drawn in lexicographic order, so output is a pure function of (n, p, rng
/// state).
pub fn erdos_renyi<R: Rng>(n: usize, p: f64, rng: &mut R) -> Result<Graph, FamilyError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(FamilyError::BadProbability { p });
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((u as u32, v as u32));
            }
        }
    }
    Ok(Graph::new(n, &edges)?)
}

/// G(n, p) conditioned on connectivity: sample once, then stitch any extra
/// components to the first one with random bridge edges.
pub fn random_connected_graph<R: Rng>(
    n: usize,
    p: f64,
    rng: &mut R,
) -> Result<Graph, FamilyError> {
    let g = erdos_renyi(n, p, rng)?;
    let comps = g.components();
    if comps.len() == 1 {
        return Ok(g);
    }
    let mut edges: Vec<(u32, u32)> = g.edges().to_vec();
    let mut reached: Vec<usize> = comps[0].clone();
    for comp in &comps[1..] {
        let a = reached[rng.gen_range(0..reached.len())];
        let b = comp[rng.gen_range(0..comp.len())];
        edges.push((a as u32, b as u32));
        reached.extend_from_slice(comp);
    }
    Ok(Graph::new(n, &edges)?)
}

/// Disjoint union of cliques with random part sizes in 1..=5 summing to n.
pub fn random_clique_union<R: Rng>(n: usize, rng: &mut R) -> Result<Graph, FamilyError> {
    if n == 0 {
        return Err(FamilyError::Graph(GraphError::Empty));
    }
    let mut parts = Vec::new();
    let mut left = n;
    while left > 0 {
        let size = rng.gen_range(1..=left.min(5));
        parts.push(complete(size)?);
        left -= size;
    }
    disjoint_union(&parts)
}

fn neighborhoods_are_matchings(adj: &[u64]) -> bool {
    adj.iter().all(|&nb| {
        let mut s = nb;
        while s != 0 {
            let v = s.trailing_zeros() as usize;
            s &= s - 1;
            if (adj[v] & nb).count_ones() > 1 {
                return false;
            }
        }
        true
    })
}

/// Random graph in which every neighborhood induces a matching (each vertex
/// has at most one neighbor inside any neighborhood it belongs to), with no
/// isolated vertices. Grows by rejection: candidate edges that would break
/// the property are dropped; leftover isolated vertices get a pendant edge,
/// which always preserves the property.
pub fn random_neighborhood_matching_graph<R: Rng>(
    n: usize,
    target_edges: usize,
    rng: &mut R,
) -> Result<Graph, FamilyError> {
    if n < 2 {
        return Err(FamilyError::TooSmall {
            what: "neighborhood-matching generator",
            min: 2,
            got: n,
        });
    }
    let mut adj = vec![0u64; n];
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut attempts = 0usize;
    while edges.len() < target_edges && attempts < 10 * target_edges + 50 {
        attempts += 1;
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u == v || adj[u] >> v & 1 == 1 {
            continue;
        }
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
        if neighborhoods_are_matchings(&adj) {
            edges.push((u.min(v) as u32, u.max(v) as u32));
        } else {
            adj[u] &= !(1 << v);
            adj[v] &= !(1 << u);
        }
    }
    for u in 0..n {
        if adj[u] == 0 {
            let mut v = rng.gen_range(0..n - 1);
            if v >= u {
                v += 1;
            }
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
            edges.push((u.min(v) as u32, u.max(v) as u32));
        }
    }
    debug_assert!(neighborhoods_are_matchings(&adj));
    Ok(Graph::new(n, &edges)?)
}

/// Parses generator specs like `complete:4`, `biclique:2,3`, `er:8,0.35`, or
/// disjoint unions of those joined by `+`. Random families draw from `rng`.
pub fn parse_family_spec<R: Rng>(spec: &str, rng: &mut R) -> Result<Graph, FamilyError> {
    let parts: Vec<Graph> = spec
        .split('+')
        .map(|part| parse_one(part.trim(), rng))
        .collect::<Result<_, _>>()?;
    if parts.len() == 1 {
        Ok(parts.into_iter().next().unwrap())
    } else {
        disjoint_union(&parts)
    }
}

fn parse_one<R: Rng>(part: &str, rng: &mut R) -> Result<Graph, FamilyError> {
    let (name, args) = part.split_once(':').unwrap_or((part, ""));
    let bad = |msg: &str| FamilyError::BadArguments {
        family: name.to_string(),
        msg: msg.to_string(),
    };
    let ints = || -> Result<Vec<usize>, FamilyError> {
        args.split(',')
            .map(|a| a.trim().parse::<usize>().map_err(|e| bad(&e.to_string())))
            .collect()
    };
    match name {
        "complete" | "clique" => match ints()?[..] {
            [n] => complete(n),
            _ => Err(bad("expected one size")),
        },
        "cycle" => match ints()?[..] {
            [n] => cycle(n),
            _ => Err(bad("expected one size")),
        },
        "path" => match ints()?[..] {
            [n] => path(n),
            _ => Err(bad("expected one size")),
        },
        "star" => match ints()?[..] {
            [k] => star(k),
            _ => Err(bad("expected one leaf count")),
        },
        "biclique" => match ints()?[..] {
            [a, b] => complete_bipartite(a, b),
            _ => Err(bad("expected two side sizes")),
        },
        "er" => {
            let (ns, ps) = args
                .split_once(',')
                .ok_or_else(|| bad("expected `n,p`"))?;
            let n: usize = ns.trim().parse().map_err(|e: std::num::ParseIntError| bad(&e.to_string()))?;
            let p: f64 = ps.trim().parse().map_err(|e: std::num::ParseFloatError| bad(&e.to_string()))?;
            erdos_renyi(n, p, rng)
        }
        other => Err(FamilyError::UnknownFamily(other.to_string())),
    }
}

/// Vertex-invariant signature used to bucket isomorphism candidates. Equal
/// signatures do not imply isomorphism; unequal ones refute it.
fn fingerprint(g: &Graph) -> Vec<u64> {
    let n = g.n();
    let mut fp = vec![n as u64, g.m() as u64];
    let mut degs: Vec<u64> = g.degrees().iter().map(|&d| d as u64).collect();
    degs.sort_unstable();
    fp.extend_from_slice(&degs);
    // Per-vertex code: own degree, sorted neighbor degrees, triangle count.
    let mut codes: Vec<Vec<u64>> = (0..n)
        .map(|u| {
            let mut nd: Vec<u64> = g.neighbors(u).map(|v| g.degree(v) as u64).collect();
            nd.sort_unstable();
            let tri = g
                .neighbors(u)
                .map(|v| (g.adj_mask(u) & g.adj_mask(v)).count_ones() as u64)
                .sum::<u64>()
                / 2;
            let mut code = vec![g.degree(u) as u64, tri];
            code.extend(nd);
            code
        })
        .collect();
    codes.sort_unstable();
    for code in codes {
        fp.push(u64::MAX); // separator
        fp.extend(code);
    }
    fp
}

/// Exact isomorphism test by backtracking on a degree-descending vertex
/// order. Intended for small graphs (the enumeration range, n <= 10 or so).
pub fn are_isomorphic(a: &Graph, b: &Graph) -> bool {
    let n = a.n();
    if n != b.n() || a.m() != b.m() {
        return false;
    }
    let mut da: Vec<u32> = a.degrees().to_vec();
    let mut db: Vec<u32> = b.degrees().to_vec();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return false;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&u| std::cmp::Reverse(a.degree(u)));
    let mut image = vec![usize::MAX; n];
    let mut used = 0u64;
    backtrack(a, b, &order, 0, &mut image, &mut used)
}

fn backtrack(
    a: &Graph,
    b: &Graph,
    order: &[usize],
    i: usize,
    image: &mut [usize],
    used: &mut u64,
) -> bool {
    if i == order.len() {
        return true;
    }
    let u = order[i];
    for v in 0..b.n() {
        if *used >> v & 1 == 1 || a.degree(u) != b.degree(v) {
            continue;
        }
        let consistent = order[..i]
            .iter()
            .all(|&w| a.has_edge(u, w) == b.has_edge(v, image[w]));
        if !consistent {
            continue;
        }
        image[u] = v;
        *used |= 1 << v;
        if backtrack(a, b, order, i + 1, image, used) {
            return true;
        }
        *used &= !(1 << v);
        image[u] = usize::MAX;
    }
    false
}

fn is_independent_mask(g: &Graph, mask: u64) -> bool {
    let mut s = mask;
    while s != 0 {
        let v = s.trailing_zeros() as usize;
        s &= s - 1;
        if g.adj_mask(v) & mask != 0 {
            return false;
        }
    }
    true
}

/// One extension step: attach a new vertex to every nonempty subset of each
/// representative (independent subsets only in triangle-free mode), then
/// deduplicate up to isomorphism. Every connected graph on k+1 vertices
/// arises this way because deleting a non-cut vertex leaves it connected.
fn augment(reps: &[Graph], k: usize, triangle_free: bool) -> Vec<Graph> {
    let mut out: Vec<Graph> = Vec::new();
    let mut buckets: BTreeMap<Vec<u64>, Vec<usize>> = BTreeMap::new();
    for g in reps {
        for mask in 1u64..1 << k {
            if triangle_free && !is_independent_mask(g, mask) {
                continue;
            }
            let mut edges: Vec<(u32, u32)> = g.edges().to_vec();
            let mut s = mask;
            while s != 0 {
                let v = s.trailing_zeros();
                s &= s - 1;
                edges.push((v, k as u32));
            }
            let cand = Graph::new(k + 1, &edges).expect("augmented graph is valid");
            let bucket = buckets.entry(fingerprint(&cand)).or_default();
            if !bucket.iter().any(|&i| are_isomorphic(&out[i], &cand)) {
                bucket.push(out.len());
                out.push(cand);
            }
        }
    }
    out
}

/// All connected graphs on n vertices, one representative per isomorphism
/// class, in a deterministic order. Exponential in n; intended for n <= 8.
pub fn connected_graphs(n: usize) -> Result<Vec<Graph>, GraphError> {
    if n == 0 {
        return Err(GraphError::Empty);
    }
    let mut reps = vec![Graph::new(1, &[])?];
    for k in 1..n {
        reps = augment(&reps, k, false);
    }
    Ok(reps)
}

/// Triangle-free restriction of `connected_graphs`; feasible up to n = 9.
pub fn connected_triangle_free_graphs(n: usize) -> Result<Vec<Graph>, GraphError> {
    if n == 0 {
        return Err(GraphError::Empty);
    }
    let mut reps = vec![Graph::new(1, &[])?];
    for k in 1..n {
        reps = augment(&reps, k, true);
    }
    Ok(reps)
}
