//! Weighted graph data model: a symmetric edge weight `b`, a killing term
//! `c` and a measure `m` over a finite vertex set, together with the formal
//! Laplacian, its quadratic form, combinatorial metric annotation and the
//! Dirichlet restriction used to emulate infinite graphs.

use ndarray::{Array1, Array2};
use std::collections::HashMap;
use std::collections::VecDeque;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Dense real vector indexed by the graph's vertex ordering.
pub type VertexFunction = Array1<f64>;

/// A connected weighted graph `(b, c)` over `(X, m)`.
///
/// Vertex order is the order of first appearance (file or generator order)
/// and fixes the indexing of every dense vector in the crate. Immutable
/// after construction.
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    m: Array1<f64>,
    c: Array1<f64>,
    deg: Array1<f64>,
    nbrs: Vec<Vec<(usize, f64)>>,
    edges: Vec<(usize, usize, f64)>,
    coords: Option<Array2<f64>>,
}

impl WeightedGraph {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, x: usize) -> &str {
        &self.ids[x]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Measure `m` (strictly positive).
    pub fn measure(&self) -> &Array1<f64> {
        &self.m
    }

    /// Killing term `c` (non-negative).
    pub fn killing(&self) -> &Array1<f64> {
        &self.c
    }

    /// Weighted degree `deg(x) = Σ_y b(x,y)`.
    pub fn degree(&self) -> &Array1<f64> {
        &self.deg
    }

    /// Neighbors of `x` with their edge weights, ascending by index.
    pub fn neighbors(&self, x: usize) -> &[(usize, f64)] {
        &self.nbrs[x]
    }

    /// Canonical edge list `(i, j, b)` with `i < j`, sorted.
    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Generator coordinates, when the graph came from a generator.
    pub fn coords(&self) -> Option<&Array2<f64>> {
        self.coords.as_ref()
    }

    pub(crate) fn set_coords(&mut self, coords: Array2<f64>) {
        self.coords = Some(coords);
    }

    /// `Σ_x m(x)`.
    pub fn total_measure(&self) -> f64 {
        self.m.sum()
    }

    /// m-weighted inner product `⟨f, g⟩_m = Σ m f g`.
    pub fn inner_m(&self, f: &VertexFunction, g: &VertexFunction) -> f64 {
        self.m
            .iter()
            .zip(f.iter())
            .zip(g.iter())
            .map(|((m, a), b)| m * a * b)
            .sum()
    }

    fn check_len(&self, f: &VertexFunction) -> Result<()> {
        if f.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), got: f.len() });
        }
        Ok(())
    }
}

/// Build a graph from vertex records `(id, m, c)` and edge records
/// `(id1, id2, b)`.
///
/// Duplicate edges are accepted only when the weights agree; the graph must
/// come out connected.
pub fn build_graph(
    vertex_records: &[(String, f64, f64)],
    edge_records: &[(String, String, f64)],
) -> Result<WeightedGraph> {
    let mut ids = Vec::with_capacity(vertex_records.len());
    let mut index = HashMap::with_capacity(vertex_records.len());
    let mut m = Vec::with_capacity(vertex_records.len());
    let mut c = Vec::with_capacity(vertex_records.len());
    for (id, mv, cv) in vertex_records {
        if index.contains_key(id) {
            return Err(Error::DuplicateVertex(id.clone()));
        }
        if !(*mv > 0.0) || !mv.is_finite() {
            return Err(Error::NonpositiveMeasure { id: id.clone(), m: *mv });
        }
        if *cv < 0.0 || !cv.is_finite() {
            return Err(Error::NegativeKilling { id: id.clone(), c: *cv });
        }
        index.insert(id.clone(), ids.len());
        ids.push(id.clone());
        m.push(*mv);
        c.push(*cv);
    }

    let n = ids.len();
    let mut weights: HashMap<(usize, usize), f64> = HashMap::new();
    for (a, b, w) in edge_records {
        let i = *index.get(a).ok_or_else(|| Error::UnknownVertex(a.clone()))?;
        let j = *index.get(b).ok_or_else(|| Error::UnknownVertex(b.clone()))?;
        if i == j {
            return Err(Error::SelfLoop(a.clone()));
        }
        if !(*w > 0.0) || !w.is_finite() {
            return Err(Error::NonpositiveEdgeWeight { a: a.clone(), b: b.clone(), w: *w });
        }
        let key = (i.min(j), i.max(j));
        if let Some(prev) = weights.get(&key) {
            if (prev - w).abs() > 0.0 {
                return Err(Error::ConflictingEdge {
                    a: a.clone(),
                    b: b.clone(),
                    w1: *prev,
                    w2: *w,
                });
            }
        } else {
            weights.insert(key, *w);
        }
    }

    let mut edges: Vec<(usize, usize, f64)> = weights
        .into_iter()
        .map(|((i, j), w)| (i, j, w))
        .collect();
    edges.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));

    let mut nbrs = vec![Vec::new(); n];
    let mut deg = vec![0.0f64; n];
    for &(i, j, w) in &edges {
        nbrs[i].push((j, w));
        nbrs[j].push((i, w));
        deg[i] += w;
        deg[j] += w;
    }
    for list in &mut nbrs {
        list.sort_unstable_by_key(|&(j, _)| j);
    }

    let graph = WeightedGraph {
        ids,
        index,
        m: Array1::from_vec(m),
        c: Array1::from_vec(c),
        deg: Array1::from_vec(deg),
        nbrs,
        edges,
        coords: None,
    };

    if n > 0 && !is_connected(&graph) {
        return Err(Error::Disconnected);
    }
    Ok(graph)
}

fn is_connected(g: &WeightedGraph) -> bool {
    let n = g.len();
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    seen[0] = true;
    queue.push_back(0usize);
    let mut count = 1;
    while let Some(u) = queue.pop_front() {
        for &(v, _) in g.neighbors(u) {
            if !seen[v] {
                seen[v] = true;
                count += 1;
                queue.push_back(v);
            }
        }
    }
    count == n
}

/// Formal Laplacian:
/// `(𝓛f)(x) = (1/m(x)) Σ_y b(x,y)(f(x) − f(y)) + (c(x)/m(x)) f(x)`.
pub fn apply_laplacian(g: &WeightedGraph, f: &VertexFunction) -> Result<VertexFunction> {
    g.check_len(f)?;
    let mut out = Array1::zeros(g.len());
    for x in 0..g.len() {
        let mut acc = 0.0;
        for &(y, w) in g.neighbors(x) {
            acc += w * (f[x] - f[y]);
        }
        out[x] = (acc + g.c[x] * f[x]) / g.m[x];
    }
    Ok(out)
}

/// Quadratic form `Q(f) = ½ Σ_{x,y} b(x,y)(f(x)−f(y))² + Σ_x c(x) f(x)²`.
pub fn quadratic_form(g: &WeightedGraph, f: &VertexFunction) -> Result<f64> {
    g.check_len(f)?;
    let mut q = 0.0;
    for &(i, j, w) in g.edges() {
        let d = f[i] - f[j];
        q += w * d * d;
    }
    for x in 0..g.len() {
        q += g.c[x] * f[x] * f[x];
    }
    Ok(q)
}

/// Combinatorial metric from a root: hop distances over positive-b edges
/// and the distance balls they induce.
#[derive(Debug, Clone)]
pub struct MetricAnnotation {
    root: usize,
    dist: Vec<usize>,
    shells: Vec<Vec<usize>>,
}

impl MetricAnnotation {
    pub fn root(&self) -> usize {
        self.root
    }

    /// `|x| = ρ(o, x)`.
    pub fn distance(&self, x: usize) -> usize {
        self.dist[x]
    }

    pub fn distances(&self) -> &[usize] {
        &self.dist
    }

    /// Largest distance from the root.
    pub fn max_distance(&self) -> usize {
        self.shells.len().saturating_sub(1)
    }

    /// Vertices at distance exactly `r`, ascending by index.
    pub fn shell(&self, r: usize) -> &[usize] {
        self.shells.get(r).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Vertices of the closed ball `B_r(o)`, ascending by (distance, index).
    pub fn ball(&self, r: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for s in 0..=r.min(self.max_distance()) {
            out.extend_from_slice(&self.shells[s]);
        }
        out
    }
}

/// BFS metric annotation rooted at `o`.
pub fn metric_annotation(g: &WeightedGraph, o: usize) -> Result<MetricAnnotation> {
    if o >= g.len() {
        return Err(Error::UnknownVertex(format!("#{o}")));
    }
    let n = g.len();
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    dist[o] = 0;
    queue.push_back(o);
    while let Some(u) = queue.pop_front() {
        for &(v, _) in g.neighbors(u) {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    // connectivity is a construction invariant
    debug_assert!(dist.iter().all(|&d| d != usize::MAX));
    let maxd = dist.iter().copied().max().unwrap_or(0);
    let mut shells = vec![Vec::new(); maxd + 1];
    for (x, &d) in dist.iter().enumerate() {
        shells[d].push(x);
    }
    Ok(MetricAnnotation { root: o, dist, shells })
}

/// Induced subgraph on `keep` with outgoing edges folded into the killing
/// term: `c_K(x) = c(x) + Σ_{y∉K} b(x,y)`. Measure and edge weights are
/// restricted unchanged.
pub fn dirichlet_restriction(g: &WeightedGraph, keep: &[usize]) -> Result<WeightedGraph> {
    if keep.is_empty() {
        return Err(Error::EmptyRestriction);
    }
    let n = g.len();
    let mut mask = vec![false; n];
    for &x in keep {
        if x >= n {
            return Err(Error::UnknownVertex(format!("#{x}")));
        }
        mask[x] = true;
    }
    // preserve the original vertex order
    let kept: Vec<usize> = (0..n).filter(|&x| mask[x]).collect();
    let mut vrec = Vec::with_capacity(kept.len());
    for &x in &kept {
        let folded: f64 = g
            .neighbors(x)
            .iter()
            .filter(|(y, _)| !mask[*y])
            .map(|(_, w)| w)
            .sum();
        vrec.push((g.ids[x].clone(), g.m[x], g.c[x] + folded));
    }
    let mut erec = Vec::new();
    for &(i, j, w) in g.edges() {
        if mask[i] && mask[j] {
            erec.push((g.ids[i].clone(), g.ids[j].clone(), w));
        }
    }
    let mut out = build_graph(&vrec, &erec)?;
    if let Some(coords) = &g.coords {
        let dim = coords.ncols();
        let mut sub = Array2::zeros((kept.len(), dim));
        for (row, &x) in kept.iter().enumerate() {
            sub.row_mut(row).assign(&coords.row(x));
        }
        out.set_coords(sub);
    }
    Ok(out)
}

/// Parse the canonical graph file format.
///
/// Lines: `# comment`, `v <id> <m> <c>`, `e <id1> <id2> <b>`; tokens are
/// whitespace separated, vertex order of appearance is the canonical order.
pub fn read_graph<R: BufRead>(reader: R) -> Result<WeightedGraph> {
    let mut vrec = Vec::new();
    let mut erec = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        let parse_f64 = |t: &str| -> Result<f64> {
            t.parse::<f64>()
                .map_err(|_| Error::Parse { line: lineno, msg: format!("bad float `{t}`") })
        };
        match tokens[0] {
            "v" => {
                if tokens.len() != 4 {
                    return Err(Error::Parse { line: lineno, msg: "want `v <id> <m> <c>`".into() });
                }
                vrec.push((tokens[1].to_string(), parse_f64(tokens[2])?, parse_f64(tokens[3])?));
            }
            "e" => {
                if tokens.len() != 4 {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: "want `e <id1> <id2> <b>`".into(),
                    });
                }
                erec.push((tokens[1].to_string(), tokens[2].to_string(), parse_f64(tokens[3])?));
            }
            other => {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("unknown record type `{other}`"),
                });
            }
        }
    }
    build_graph(&vrec, &erec)
}

/// Write the canonical graph file format; floats carry 17 significant digits.
pub fn write_graph<W: Write>(g: &WeightedGraph, mut w: W, header: &[String]) -> Result<()> {
    for line in header {
        writeln!(w, "# {line}")?;
    }
    for x in 0..g.len() {
        writeln!(w, "v {} {:.16e} {:.16e}", g.ids[x], g.m[x], g.c[x])?;
    }
    for &(i, j, wt) in g.edges() {
        writeln!(w, "e {} {} {:.16e}", g.ids[i], g.ids[j], wt)?;
    }
    Ok(())
}
