use nalgebra::DMatrix;

use super::{Family, Graph, Side};
use crate::error::{Error, Result};

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> i64) -> Self {
        let data = (0..rows)
            .flat_map(|r| (0..cols).map(move |c| (r, c)))
            .map(|(r, c)| f(r, c))
            .collect();
        IntMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_sums(&self) -> Vec<i64> {
        (0..self.rows).map(|r| self.row(r).iter().sum()).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| (0..r).all(|c| self.get(r, c) == self.get(c, r)))
    }

    pub fn diagonal_is_zero(&self) -> bool {
        (0..self.rows.min(self.cols)).all(|i| self.get(i, i) == 0)
    }

    /// `self + scale * other`.
    pub fn add_scaled(&self, other: &IntMatrix, scale: i64) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + scale * b)
                .collect(),
        }
    }

    /// Contiguous sub-block `[r0, r0+rows) x [c0, c0+cols)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> IntMatrix {
        IntMatrix::from_fn(rows, cols, |r, c| self.get(r0 + r, c0 + c))
    }

    pub fn to_real(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |r, c| self.get(r, c) as f64)
    }
}

/// The 0/1 adjacency matrix in the graph's vertex order.
pub fn adjacency_matrix(g: &Graph) -> IntMatrix {
    let n = g.order();
    let mut m = IntMatrix::zeros(n, n);
    for (u, v) in g.edges() {
        m.set(u, v, 1);
        m.set(v, u, 1);
    }
    m
}

/// The two diagonal blocks of `A^2 - (k+1)I` for W(n,k).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareBlocks {
    pub n: usize,
    pub k: usize,
    pub a_v: IntMatrix,
    pub a_w: IntMatrix,
}

impl SquareBlocks {
    /// Checks `A_V = B1 + k B2` against the ring structure.
    pub fn matches_ring_structure(&self) -> bool {
        let b2 = column_adjacency(self.n, self.k);
        let expected = ring_adjacency(self.n, self.k).add_scaled(&b2, self.k as i64);
        self.a_v == expected && self.a_w == expected
    }
}

/// Computes `A' = A^2 - (k+1)I` for a W(n,k) instance, checks that no
/// length-two walk crosses the bipartition, and returns the V and W blocks.
pub fn square_decompose(g: &Graph) -> Result<SquareBlocks> {
    let Family::Wnk { n, k } = g.family() else {
        return Err(Error::NotApplicable(format!(
            "square_decompose needs a W(n,k) graph, got {}",
            g.family()
        )));
    };
    let order = g.order();
    let half = n * k;
    // Count walks of length two through each middle vertex.
    let mut sq = IntMatrix::zeros(order, order);
    for mid in 0..order {
        let nb = g.neighbors(mid);
        for &a in nb {
            for &b in nb {
                let cur = sq.get(a, b);
                sq.set(a, b, cur + 1);
            }
        }
    }
    for i in 0..order {
        let cur = sq.get(i, i);
        sq.set(i, i, cur - (k as i64 + 1));
    }
    let labels = g.labels();
    let side = |v: usize| labels.map_or(if v < half { Side::V } else { Side::W }, |l| l[v].side);
    for r in 0..order {
        for c in 0..order {
            if side(r) != side(c) && sq.get(r, c) != 0 {
                return Err(Error::CrossBlock {
                    row: r,
                    col: c,
                    value: sq.get(r, c),
                });
            }
        }
    }
    Ok(SquareBlocks {
        n,
        k,
        a_v: sq.block(0, 0, half, half),
        a_w: sq.block(half, half, half, half),
    })
}

/// Adjacency of the n-cycle as a multigraph. For `n = 2` the two rings are
/// joined both "forwards" and "backwards", so the off-diagonal entry is 2.
pub fn cycle_multigraph_adjacency(n: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(n, n);
    if n < 2 {
        return m;
    }
    for i in 0..n {
        let next = (i + 1) % n;
        let prev = (i + n - 1) % n;
        m.set(i, next, m.get(i, next) + 1);
        m.set(i, prev, m.get(i, prev) + 1);
    }
    m
}

/// B1: every vertex of ring `i` adjacent to every vertex of rings `i +- 1`.
pub fn ring_adjacency(n: usize, k: usize) -> IntMatrix {
    let c = cycle_multigraph_adjacency(n);
    IntMatrix::from_fn(n * k, n * k, |r, s| c.get(r / k, s / k))
}

/// B2: every vertex adjacent to the other `k - 1` vertices of its own ring.
pub fn column_adjacency(n: usize, k: usize) -> IntMatrix {
    IntMatrix::from_fn(n * k, n * k, |r, s| i64::from(r / k == s / k && r != s))
}
