//! Generators for the example graphs: lattice boxes, the Sierpinski gasket
//! and the Vicsek tree, plus their Dirichlet truncations (the finite graph
//! one level up restricted back, so boundary edges fold into the killing
//! term and the measure stays the ambient one).

use ndarray::Array2;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{build_graph, dirichlet_restriction, WeightedGraph};

/// Which measure the generator attaches to the vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureMode {
    /// `m = deg` (within the generated graph). Default, matches the
    /// normalization used for the example graphs.
    Degree,
    /// `m ≡ 1`.
    Unit,
}

impl std::str::FromStr for MeasureMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "degree" => Ok(MeasureMode::Degree),
            "unit" => Ok(MeasureMode::Unit),
            other => Err(Error::Config(format!("unknown measure mode `{other}`"))),
        }
    }
}

fn assemble(
    coords: Vec<Vec<i64>>,
    edges: Vec<(usize, usize)>,
    mode: MeasureMode,
) -> Result<WeightedGraph> {
    let n = coords.len();
    let mut degree = vec![0usize; n];
    for &(i, j) in &edges {
        degree[i] += 1;
        degree[j] += 1;
    }
    let ids: Vec<String> = coords
        .iter()
        .map(|c| c.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("_"))
        .collect();
    let vrec: Vec<(String, f64, f64)> = (0..n)
        .map(|i| {
            let m = match mode {
                MeasureMode::Degree => degree[i] as f64,
                MeasureMode::Unit => 1.0,
            };
            (ids[i].clone(), m, 0.0)
        })
        .collect();
    let erec: Vec<(String, String, f64)> = edges
        .iter()
        .map(|&(i, j)| (ids[i].clone(), ids[j].clone(), 1.0))
        .collect();
    let mut g = build_graph(&vrec, &erec)?;
    let dim = coords[0].len();
    let mut arr = Array2::zeros((n, dim));
    for (i, c) in coords.iter().enumerate() {
        for (d, v) in c.iter().enumerate() {
            arr[[i, d]] = *v as f64;
        }
    }
    g.set_coords(arr);
    Ok(g)
}

/// Box `{−radius..radius}^dim` with nearest-neighbor edges `b = 1`, `c ≡ 0`.
pub fn lattice_box(dim: usize, radius: usize, mode: MeasureMode) -> Result<WeightedGraph> {
    if dim == 0 {
        return Err(Error::ParameterRange { name: "dim", value: 0.0, range: "[1, inf)" });
    }
    let side = 2 * radius as i64 + 1;
    let n = (side as usize).pow(dim as u32);
    let mut coords = Vec::with_capacity(n);
    // lexicographic enumeration, last coordinate fastest
    let mut cur = vec![-(radius as i64); dim];
    'odometer: loop {
        coords.push(cur.clone());
        let mut d = dim;
        loop {
            if d == 0 {
                break 'odometer;
            }
            d -= 1;
            cur[d] += 1;
            if cur[d] <= radius as i64 {
                break;
            }
            cur[d] = -(radius as i64);
        }
    }
    debug_assert_eq!(coords.len(), n);

    let index: std::collections::HashMap<Vec<i64>, usize> =
        coords.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    let mut edges = Vec::new();
    for (i, c) in coords.iter().enumerate() {
        for d in 0..dim {
            let mut nb = c.clone();
            nb[d] += 1;
            if let Some(&j) = index.get(&nb) {
                edges.push((i, j));
            }
        }
    }
    assemble(coords, edges, mode)
}

/// Dirichlet box of the infinite lattice: the box of radius `radius + 1`
/// restricted to `{−radius..radius}^dim`. With [`MeasureMode::Degree`] every
/// kept vertex gets the full lattice measure `m = 2·dim` and boundary
/// vertices pick up the folded killing.
pub fn dirichlet_lattice_box(dim: usize, radius: usize, mode: MeasureMode) -> Result<WeightedGraph> {
    let ambient = lattice_box(dim, radius + 1, mode)?;
    let coords = ambient.coords().expect("generator coords");
    let keep: Vec<usize> = (0..ambient.len())
        .filter(|&x| (0..dim).all(|d| coords[[x, d]].abs() <= radius as f64))
        .collect();
    dirichlet_restriction(&ambient, &keep)
}

fn gasket_cells(level: usize) -> (BTreeSet<(i64, i64)>, BTreeSet<((i64, i64), (i64, i64))>) {
    let mut verts: BTreeSet<(i64, i64)> = [(0, 0), (1, 0), (0, 1)].into_iter().collect();
    let mut edges: BTreeSet<((i64, i64), (i64, i64))> =
        [((0, 0), (1, 0)), ((0, 0), (0, 1)), ((0, 1), (1, 0))].into_iter().collect();
    for n in 0..level {
        let s = 1i64 << n;
        let mut nv = BTreeSet::new();
        let mut ne = BTreeSet::new();
        for shift in [(0, 0), (s, 0), (0, s)] {
            for &(x, y) in &verts {
                nv.insert((x + shift.0, y + shift.1));
            }
            for &((ax, ay), (bx, by)) in &edges {
                let a = (ax + shift.0, ay + shift.1);
                let b = (bx + shift.0, by + shift.1);
                ne.insert((a.min(b), a.max(b)));
            }
        }
        verts = nv;
        edges = ne;
    }
    (verts, edges)
}

/// Level-n Sierpinski gasket graph, `b = 1`, `c ≡ 0`.
///
/// Corner-anchored in triangular integer coordinates so that level n is a
/// subgraph of level n+1. Vertex count `3(3^n + 1)/2`.
pub fn sierpinski_gasket(level: usize, mode: MeasureMode) -> Result<WeightedGraph> {
    let (verts, edges) = gasket_cells(level);
    let order: Vec<(i64, i64)> = verts.into_iter().collect();
    let index: std::collections::HashMap<(i64, i64), usize> =
        order.iter().copied().enumerate().map(|(i, v)| (v, i)).collect();
    let coords: Vec<Vec<i64>> = order.iter().map(|&(x, y)| vec![x, y]).collect();
    let e: Vec<(usize, usize)> = edges.into_iter().map(|(a, b)| (index[&a], index[&b])).collect();
    assemble(coords, e, mode)
}

/// Dirichlet truncation of the infinite gasket at level `level`: the level
/// `level + 1` gasket restricted to the level-`level` vertex set.
pub fn dirichlet_sierpinski_gasket(level: usize, mode: MeasureMode) -> Result<WeightedGraph> {
    let ambient = sierpinski_gasket(level + 1, mode)?;
    let (keep_verts, _) = gasket_cells(level);
    let keep: Vec<usize> = (0..ambient.len())
        .filter(|&x| {
            let c = ambient.coords().expect("coords");
            keep_verts.contains(&(c[[x, 0]] as i64, c[[x, 1]] as i64))
        })
        .collect();
    dirichlet_restriction(&ambient, &keep)
}

fn vicsek_cells(level: usize) -> (BTreeSet<(i64, i64)>, BTreeSet<((i64, i64), (i64, i64))>) {
    // level 0: plus-sign, center plus 4 arm tips
    let mut verts: BTreeSet<(i64, i64)> =
        [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)].into_iter().collect();
    let mut edges: BTreeSet<((i64, i64), (i64, i64))> = [
        ((-1, 0), (0, 0)),
        ((0, -1), (0, 0)),
        ((0, 0), (0, 1)),
        ((0, 0), (1, 0)),
    ]
    .into_iter()
    .collect();
    for n in 0..level {
        let s = 2 * 3i64.pow(n as u32);
        let mut nv = BTreeSet::new();
        let mut ne = BTreeSet::new();
        for shift in [(0, 0), (s, 0), (-s, 0), (0, s), (0, -s)] {
            for &(x, y) in &verts {
                nv.insert((x + shift.0, y + shift.1));
            }
            for &((ax, ay), (bx, by)) in &edges {
                let a = (ax + shift.0, ay + shift.1);
                let b = (bx + shift.0, by + shift.1);
                ne.insert((a.min(b), a.max(b)));
            }
        }
        verts = nv;
        edges = ne;
    }
    (verts, edges)
}

/// Level-n Vicsek tree with 4 arms (5-fold replication glued at arm tips),
/// `b = 1`, `c ≡ 0`. Vertex count `4·5^n + 1`.
pub fn vicsek(level: usize, mode: MeasureMode) -> Result<WeightedGraph> {
    let (verts, edges) = vicsek_cells(level);
    let order: Vec<(i64, i64)> = verts.into_iter().collect();
    let index: std::collections::HashMap<(i64, i64), usize> =
        order.iter().copied().enumerate().map(|(i, v)| (v, i)).collect();
    let coords: Vec<Vec<i64>> = order.iter().map(|&(x, y)| vec![x, y]).collect();
    let e: Vec<(usize, usize)> = edges.into_iter().map(|(a, b)| (index[&a], index[&b])).collect();
    assemble(coords, e, mode)
}

/// Dirichlet truncation of the infinite Vicsek tree at level `level`.
pub fn dirichlet_vicsek(level: usize, mode: MeasureMode) -> Result<WeightedGraph> {
    let ambient = vicsek(level + 1, mode)?;
    let (keep_verts, _) = vicsek_cells(level);
    let keep: Vec<usize> = (0..ambient.len())
        .filter(|&x| {
            let c = ambient.coords().expect("coords");
            keep_verts.contains(&(c[[x, 0]] as i64, c[[x, 1]] as i64))
        })
        .collect();
    dirichlet_restriction(&ambient, &keep)
}
