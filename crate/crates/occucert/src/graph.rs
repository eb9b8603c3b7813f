//! Simple undirected graphs at desk scale (adjacency bitmasks, n <= 64),
//! plus the exact degree/density statistics the certificates consume.

use crate::linalg::RealMatrix;
use crate::rat::Rat;
use crate::tol::{MAD_CAP, MAX_VERTICES};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("graph has {n} vertices; at most {MAX_VERTICES} are supported")]
    TooManyVertices { n: usize },
    #[error("vertex {v} out of range for {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("self-loop at vertex {v}")]
    SelfLoop { v: usize },
    #[error("vertex {v} is isolated")]
    IsolatedVertex { v: usize },
    #[error("subset enumeration needs n <= {cap}, got {n}")]
    SubsetCapExceeded { n: usize, cap: usize },
    #[error("edge-list parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Immutable simple graph. Multi-edges are deduplicated on construction;
/// self-loops are rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(u32, u32)>,
    adj: Vec<u64>,
    deg: Vec<u32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DegreeProfile {
    pub degrees: Vec<u32>,
    pub max_degree: u32,
    pub disparity_energy: u64,
}

impl Graph {
    pub fn new(n: usize, edges: &[(u32, u32)]) -> Result<Graph, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices { n });
        }
        let mut set = std::collections::BTreeSet::new();
        for &(a, b) in edges {
            let (a, b) = (a as usize, b as usize);
            if a >= n {
                return Err(GraphError::VertexOutOfRange { v: a, n });
            }
            if b >= n {
                return Err(GraphError::VertexOutOfRange { v: b, n });
            }
            if a == b {
                return Err(GraphError::SelfLoop { v: a });
            }
            set.insert((a.min(b) as u32, a.max(b) as u32));
        }
        let edges: Vec<(u32, u32)> = set.into_iter().collect();
        let mut adj = vec![0u64; n];
        let mut deg = vec![0u32; n];
        for &(a, b) in &edges {
            adj[a as usize] |= 1 << b;
            adj[b as usize] |= 1 << a;
            deg[a as usize] += 1;
            deg[b as usize] += 1;
        }
        Ok(Graph { n, edges, adj, deg })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn adj_mask(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.deg[v] as usize
    }

    pub fn degrees(&self) -> &[u32] {
        &self.deg
    }

    pub fn max_degree(&self) -> usize {
        self.deg.iter().copied().max().unwrap_or(0) as usize
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let mask = self.adj[v];
        (0..self.n).filter(move |&u| mask >> u & 1 == 1)
    }

    pub fn degree_profile(&self) -> DegreeProfile {
        DegreeProfile {
            degrees: self.deg.clone(),
            max_degree: self.deg.iter().copied().max().unwrap_or(0),
            disparity_energy: self.disparity_energy(),
        }
    }

    /// Sum of (d_u - d_v)^2 over edges; zero exactly on degree-regular graphs.
    pub fn disparity_energy(&self) -> u64 {
        self.edges
            .iter()
            .map(|&(a, b)| {
                let d = self.deg[a as usize] as i64 - self.deg[b as usize] as i64;
                (d * d) as u64
            })
            .sum()
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = 1u64;
        let mut frontier = 1u64;
        while frontier != 0 {
            let mut next = 0u64;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= self.adj[v] & !seen;
            }
            seen |= next;
            frontier = next;
        }
        seen.count_ones() as usize == self.n
    }

    /// Connected components as sorted vertex lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut unvisited = if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        };
        let mut comps = Vec::new();
        while unvisited != 0 {
            let start = unvisited.trailing_zeros() as usize;
            let mut seen = 1u64 << start;
            let mut frontier = seen;
            while frontier != 0 {
                let mut next = 0u64;
                let mut f = frontier;
                while f != 0 {
                    let v = f.trailing_zeros() as usize;
                    f &= f - 1;
                    next |= self.adj[v] & !seen;
                }
                seen |= next;
                frontier = next;
            }
            let verts: Vec<usize> = (0..self.n).filter(|&v| seen >> v & 1 == 1).collect();
            unvisited &= !seen;
            comps.push(verts);
        }
        comps
    }

    /// Induced subgraph on `verts` (must be sorted, deduped, in range).
    /// Vertex i of the result is verts[i].
    pub fn induced(&self, verts: &[usize]) -> Result<Graph, GraphError> {
        for &v in verts {
            if v >= self.n {
                return Err(GraphError::VertexOutOfRange { v, n: self.n });
            }
        }
        debug_assert!(verts.windows(2).all(|w| w[0] < w[1]), "sorted unique");
        if verts.is_empty() {
            return Err(GraphError::Empty);
        }
        let mut edges = Vec::new();
        for (i, &u) in verts.iter().enumerate() {
            for (j, &v) in verts.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    edges.push((i as u32, j as u32));
                }
            }
        }
        Graph::new(verts.len(), &edges)
    }

    pub fn is_triangle_free(&self) -> bool {
        self.edges
            .iter()
            .all(|&(a, b)| self.adj[a as usize] & self.adj[b as usize] == 0)
    }

    pub fn adjacency_matrix(&self) -> RealMatrix {
        RealMatrix::from_fn(self.n, self.n, |i, j| {
            if i != j && self.has_edge(i, j) {
                1.0
            } else {
                0.0
            }
        })
    }

    /// Combinatorial Laplacian D - A.
    pub fn laplacian(&self) -> RealMatrix {
        RealMatrix::from_fn(self.n, self.n, |i, j| {
            if i == j {
                self.deg[i] as f64
            } else if self.has_edge(i, j) {
                -1.0
            } else {
                0.0
            }
        })
    }

    /// Normalized Laplacian D^{-1/2} (D - A) D^{-1/2}; isolated vertices have
    /// no normalization and are rejected.
    pub fn normalized_laplacian(&self) -> Result<RealMatrix, GraphError> {
        if let Some(v) = (0..self.n).find(|&v| self.deg[v] == 0) {
            return Err(GraphError::IsolatedVertex { v });
        }
        let inv_sqrt: Vec<f64> = self.deg.iter().map(|&d| 1.0 / (d as f64).sqrt()).collect();
        Ok(RealMatrix::from_fn(self.n, self.n, |i, j| {
            if i == j {
                1.0
            } else if self.has_edge(i, j) {
                -inv_sqrt[i] * inv_sqrt[j]
            } else {
                0.0
            }
        }))
    }

    /// Maximum average degree: max over nonempty vertex subsets S of
    /// 2|E(S)|/|S|, exact, by subset enumeration.
    pub fn mad(&self) -> Result<Rat, GraphError> {
        if self.n > MAD_CAP {
            return Err(GraphError::SubsetCapExceeded {
                n: self.n,
                cap: MAD_CAP,
            });
        }
        // Track the max as an integer pair (2*edges, vertices), compared by
        // cross-multiplication; convert to a rational once at the end.
        let mut best = (0u64, 1u64); // single vertex: average degree 0
        let full: u64 = if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        };
        let mut subset: u64 = 0;
        loop {
            subset = subset.wrapping_sub(full) & full; // next subset, skipping 0 on entry
            if subset == 0 {
                break;
            }
            let k = subset.count_ones() as u64;
            let mut twice_edges = 0u64;
            let mut s = subset;
            while s != 0 {
                let v = s.trailing_zeros() as usize;
                s &= s - 1;
                twice_edges += (self.adj[v] & subset).count_ones() as u64;
            }
            // twice_edges already counts each edge twice (once per endpoint).
            if twice_edges * best.1 > best.0 * k {
                best = (twice_edges, k);
            }
        }
        Ok(Rat::new(best.0.into(), best.1.into()))
    }

    /// mad of the subgraph induced by each vertex's neighborhood.
    /// Errors on isolated vertices (their neighborhood is empty).
    pub fn neighborhood_mad_profile(&self) -> Result<Vec<Rat>, GraphError> {
        let mut out = Vec::with_capacity(self.n);
        for v in 0..self.n {
            if self.deg[v] == 0 {
                return Err(GraphError::IsolatedVertex { v });
            }
            let hood: Vec<usize> = self.neighbors(v).collect();
            out.push(self.induced(&hood)?.mad()?);
        }
        Ok(out)
    }
}

/// Parses the plain text edge-list format: a header line `n m` followed by
/// m lines `u v` with 0-indexed endpoints.
pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| GraphError::Parse {
            line: 1,
            msg: "missing header line".into(),
        })?;
    let mut it = header.split_whitespace();
    let n: usize = parse_tok(it.next(), 1, "vertex count")?;
    let m: usize = parse_tok(it.next(), 1, "edge count")?;
    if it.next().is_some() {
        return Err(GraphError::Parse {
            line: 1,
            msg: "header must be exactly `n m`".into(),
        });
    }
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (idx, line) = lines.next().ok_or_else(|| GraphError::Parse {
            line: m + 1,
            msg: format!("expected {m} edge lines"),
        })?;
        let mut it = line.split_whitespace();
        let u: u32 = parse_tok(it.next(), idx + 1, "endpoint")? as u32;
        let v: u32 = parse_tok(it.next(), idx + 1, "endpoint")? as u32;
        if it.next().is_some() {
            return Err(GraphError::Parse {
                line: idx + 1,
                msg: "edge line must be exactly `u v`".into(),
            });
        }
        edges.push((u, v));
    }
    if let Some((idx, line)) = lines.next() {
        if !line.trim().is_empty() {
            return Err(GraphError::Parse {
                line: idx + 1,
                msg: "trailing content after edge list".into(),
            });
        }
    }
    Graph::new(n, &edges)
}

fn parse_tok(tok: Option<&str>, line: usize, what: &str) -> Result<usize, GraphError> {
    tok.ok_or_else(|| GraphError::Parse {
        line,
        msg: format!("missing {what}"),
    })?
    .parse()
    .map_err(|_| GraphError::Parse {
        line,
        msg: format!("invalid {what}"),
    })
}

/// Canonical edge-list text: sorted edges, one per line, trailing newline.
/// Byte-stable under parse -> write round trips.
pub fn to_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    pub(crate) fn star(leaves: usize) -> Graph {
        let edges: Vec<(u32, u32)> = (1..=leaves as u32).map(|v| (0, v)).collect();
        Graph::new(leaves + 1, &edges).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for i in 0..n as u32 {
            for j in (i + 1)..n as u32 {
                edges.push((i, j));
            }
        }
        Graph::new(n, &edges).unwrap()
    }

    #[test]
    fn construction_rules() {
        assert_eq!(Graph::new(0, &[]), Err(GraphError::Empty));
        assert_eq!(
            Graph::new(2, &[(0, 0)]),
            Err(GraphError::SelfLoop { v: 0 })
        );
        assert_eq!(
            Graph::new(2, &[(0, 2)]),
            Err(GraphError::VertexOutOfRange { v: 2, n: 2 })
        );
        // Multi-edges and reversed duplicates collapse silently.
        let g = Graph::new(3, &[(0, 1), (1, 0), (0, 1), (1, 2)]).unwrap();
        assert_eq!(g.m(), 2);
        assert_eq!(g.degrees(), &[1, 2, 1]);
    }

    #[test]
    fn degree_profile_and_disparity() {
        let g = star(2);
        assert_eq!(g.disparity_energy(), 2);
        assert_eq!(star(4).disparity_energy(), 36);
        let p = g.degree_profile();
        assert_eq!(p.max_degree, 2);
        assert_eq!(p.degrees, vec![2, 1, 1]);
    }

    #[test]
    fn disparity_matches_quadratic_form() {
        // d^T L d computed densely must equal the edge sum.
        for g in [star(3), complete(4), Graph::new(5, &[(0, 1), (1, 2), (3, 4)]).unwrap()] {
            let l = g.laplacian();
            let d: Vec<f64> = g.degrees().iter().map(|&x| x as f64).collect();
            let ld = l.matvec(&d);
            let quad: f64 = d.iter().zip(&ld).map(|(a, b)| a * b).sum();
            assert_eq!(quad as u64, g.disparity_energy());
        }
    }

    #[test]
    fn connectivity_and_components() {
        let g = Graph::new(5, &[(0, 1), (1, 2), (3, 4)]).unwrap();
        assert!(!g.is_connected());
        assert_eq!(g.components(), vec![vec![0, 1, 2], vec![3, 4]]);
        assert!(star(3).is_connected());
        let k1 = Graph::new(1, &[]).unwrap();
        assert!(k1.is_connected());
        assert_eq!(k1.components(), vec![vec![0]]);
    }

    #[test]
    fn mad_of_path_is_four_thirds() {
        let p3 = star(2);
        assert_eq!(p3.mad().unwrap(), rat(4, 3));
    }

    #[test]
    fn mad_examples() {
        assert_eq!(complete(4).mad().unwrap(), rat(3, 1));
        assert_eq!(Graph::new(1, &[]).unwrap().mad().unwrap(), rat(0, 1));
        // Cycle C5: every proper subgraph is sparser than the cycle itself.
        let c5 = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert_eq!(c5.mad().unwrap(), rat(2, 1));
    }

    #[test]
    fn neighborhood_mad_profile_examples() {
        let k4 = complete(4);
        assert_eq!(
            k4.neighborhood_mad_profile().unwrap(),
            vec![rat(2, 1); 4]
        );
        // Star neighborhoods are singletons (mad 0) or the center (edgeless leaves).
        assert_eq!(
            star(2).neighborhood_mad_profile().unwrap(),
            vec![rat(0, 1); 3]
        );
        let with_isolated = Graph::new(3, &[(0, 1)]).unwrap();
        assert_eq!(
            with_isolated.neighborhood_mad_profile(),
            Err(GraphError::IsolatedVertex { v: 2 })
        );
    }

    #[test]
    fn triangle_detection() {
        assert!(star(5).is_triangle_free());
        assert!(!complete(3).is_triangle_free());
        let c5 = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert!(c5.is_triangle_free());
    }

    #[test]
    fn normalized_laplacian_requires_degrees() {
        let g = Graph::new(2, &[]).unwrap();
        assert!(matches!(
            g.normalized_laplacian(),
            Err(GraphError::IsolatedVertex { v: 0 })
        ));
    }

    #[test]
    fn edge_list_round_trip_is_byte_stable() {
        let text = "3 2\n0 1\n0 2\n";
        let g = parse_edge_list(text).unwrap();
        assert_eq!(g, star(2));
        assert_eq!(to_edge_list(&g), text);
        // Unsorted input parses to the same graph; canonical output is sorted.
        let g2 = parse_edge_list("3 2\n0 2\n1 0\n").unwrap();
        assert_eq!(g2, g);
        assert_eq!(to_edge_list(&g2), text);
    }

    #[test]
    fn edge_list_parse_errors_carry_line_numbers() {
        assert!(matches!(
            parse_edge_list(""),
            Err(GraphError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_edge_list("2 2\n0 1\n"),
            Err(GraphError::Parse { .. })
        ));
        assert!(matches!(
            parse_edge_list("2 1\n0 x\n"),
            Err(GraphError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_edge_list("2 1\n0 1\nleftover\n"),
            Err(GraphError::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn induced_subgraph_maps_vertices() {
        let g = complete(4);
        let h = g.induced(&[1, 2, 3]).unwrap();
        assert_eq!(h, complete(3));
        let p = Graph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let h = p.induced(&[0, 2, 3]).unwrap();
        assert_eq!(h, Graph::new(3, &[(1, 2)]).unwrap());
    }
}
