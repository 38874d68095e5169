use super::{Family, Graph, VertexLabel};
use crate::error::{Error, Result};

/// Largest order any generator will build unless told otherwise.
pub const DEFAULT_SIZE_CAP: usize = 10_000;

fn check_nk(n: usize, k: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::param(format!("n >= 2 required (got n = {n})")));
    }
    if k < 2 {
        return Err(Error::param(format!("k >= 2 required (got k = {k})")));
    }
    Ok(())
}

fn check_cap(order: Option<usize>, cap: usize) -> Result<usize> {
    match order {
        Some(o) if o <= cap => Ok(o),
        Some(o) => Err(Error::SizeCap { order: o, cap }),
        None => Err(Error::SizeCap {
            order: usize::MAX,
            cap,
        }),
    }
}

/// Canonical index of a W(n,k) vertex label.
pub fn wnk_index(n: usize, k: usize, label: VertexLabel) -> usize {
    debug_assert!((1..=n).contains(&label.ring) && (1..=k).contains(&label.column));
    let base = match label.side {
        super::Side::V => 0,
        super::Side::W => n * k,
    };
    base + (label.ring - 1) * k + (label.column - 1)
}

fn wnk_labels(n: usize, k: usize) -> Vec<VertexLabel> {
    let ring_major = |mk: fn(usize, usize) -> VertexLabel| {
        (1..=n).flat_map(move |i| (1..=k).map(move |j| mk(i, j)))
    };
    ring_major(VertexLabel::v)
        .chain(ring_major(VertexLabel::w))
        .collect()
}

pub fn build_wnk(n: usize, k: usize) -> Result<Graph> {
    build_wnk_with_cap(n, k, DEFAULT_SIZE_CAP)
}

/// W(n,k): `n` rings, each a complete bipartite join between
/// `v(i,1..k)` and `w(i,1..k)`, plus the matching `w(i,j) ~ v(i+1,j)` with
/// ring `n+1` read as ring `1`.
pub fn build_wnk_with_cap(n: usize, k: usize, cap: usize) -> Result<Graph> {
    check_nk(n, k)?;
    let order = check_cap(n.checked_mul(k).and_then(|nk| nk.checked_mul(2)), cap)?;
    let idx = |l| wnk_index(n, k, l);
    let mut edges = Vec::with_capacity(n * k * (k + 1));
    for i in 1..=n {
        for j in 1..=k {
            let v = idx(VertexLabel::v(i, j));
            for l in 1..=k {
                edges.push((v, idx(VertexLabel::w(i, l))));
            }
            let next = i % n + 1;
            edges.push((idx(VertexLabel::w(i, j)), idx(VertexLabel::v(next, j))));
        }
    }
    debug_assert_eq!(order, 2 * n * k);
    Graph::from_edges(order, edges, Some(wnk_labels(n, k)), Family::Wnk { n, k })
}

pub fn build_pnk(n: usize, k: usize) -> Result<Graph> {
    build_pnk_with_cap(n, k, DEFAULT_SIZE_CAP)
}

/// P(n,k): W(n,k) with `w(n,1..k)` deleted. Those are the last `k`
/// canonical indices, so every surviving vertex keeps its W(n,k) index.
pub fn build_pnk_with_cap(n: usize, k: usize, cap: usize) -> Result<Graph> {
    let w = build_wnk_with_cap(n, k, cap)?;
    let removed: Vec<usize> = (1..=k)
        .map(|j| wnk_index(n, k, VertexLabel::w(n, j)))
        .collect();
    w.without_vertices(&removed, Family::Pnk { n, k })
}

/// The Heawood graph as a 14-cycle with chords `i ~ i+5 (mod 14)` from each
/// even `i`. Even and odd vertices form the bipartition.
pub fn build_heawood() -> Graph {
    let cycle = (0..14).map(|i| (i, (i + 1) % 14));
    let chords = (0..14).step_by(2).map(|i| (i, (i + 5) % 14));
    Graph::from_edges(14, cycle.chain(chords), None, Family::Heawood)
        .expect("Heawood presentation is a simple graph")
}

pub fn build_cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::param(format!(
            "n >= 3 required for a cycle (got n = {n})"
        )));
    }
    check_cap(Some(n), DEFAULT_SIZE_CAP)?;
    Graph::from_edges(
        n,
        (0..n).map(|i| (i, (i + 1) % n)),
        None,
        Family::Cycle { n },
    )
}

/// Path on `n` vertices.
pub fn build_path(n: usize) -> Result<Graph> {
    if n < 1 {
        return Err(Error::param("n >= 1 required for a path"));
    }
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i)), None, Family::Other)
}

/// The 3-cube Q3.
pub fn build_cube() -> Graph {
    let edges = (0..8usize).flat_map(|u| {
        (0..3)
            .map(move |b| (u, u ^ (1 << b)))
            .filter(|&(u, v)| u < v)
    });
    Graph::from_edges(8, edges, None, Family::Other).expect("Q3 is simple")
}

/// K(t,t) with a perfect matching removed; parts are `0..t` and `t..2t`.
pub fn build_complete_bipartite_minus_matching(t: usize) -> Result<Graph> {
    if t < 2 {
        return Err(Error::param("t >= 2 required"));
    }
    let edges = (0..t).flat_map(|i| (0..t).filter(move |&j| j != i).map(move |j| (i, t + j)));
    Graph::from_edges(2 * t, edges, None, Family::Other)
}
