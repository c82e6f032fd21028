use alloc::vec;
use alloc::vec::Vec;

use super::{EDGE_EPS, STEADY_TOL};

/// One closed (no outgoing edges) strongly connected component of the
/// population digraph, with its stationary distribution embedded into the
/// eight-dimensional basis.
#[derive(Debug, Clone)]
pub struct ClosedClass {
    pub members: Vec<usize>,
    /// Stationary distribution over the full basis (zero off the class).
    pub stationary: [f64; 8],
    /// l1 residual of `t8 * stationary - stationary`.
    pub residual: f64,
}

/// Strongly-connected-component condensation of the population block.
#[derive(Debug, Clone)]
pub struct ClosedClassDecomposition {
    /// All strongly connected components, in Tarjan discovery order.
    pub components: Vec<Vec<usize>>,
    pub closed: Vec<ClosedClass>,
    /// Mixing weight of each closed class for the given initial
    /// distribution, when one was supplied.
    pub weights: Option<Vec<f64>>,
    /// The limit distribution from the initial one, when supplied.
    pub limit: Option<[f64; 8]>,
}

impl ClosedClassDecomposition {
    /// The limit as a basis distribution; requires an initial distribution to
    /// have been supplied.
    pub fn limit_distribution(&self) -> Option<[f64; 8]> {
        self.limit
    }
}

/// Edge i -> j iff t8[j][i] clears the phantom-edge threshold.
fn digraph(t8: &[[f64; 8]; 8]) -> [[bool; 8]; 8] {
    let mut adj = [[false; 8]; 8];
    for (j, row) in t8.iter().enumerate() {
        for (i, &w) in row.iter().enumerate() {
            if i != j && w > EDGE_EPS {
                adj[i][j] = true;
            }
        }
    }
    adj
}

/// Tarjan's strongly connected components on the 8-node digraph.
fn tarjan(adj: &[[bool; 8]; 8]) -> Vec<Vec<usize>> {
    struct State {
        index: usize,
        idx: [Option<usize>; 8],
        low: [usize; 8],
        on_stack: [bool; 8],
        stack: Vec<usize>,
        comps: Vec<Vec<usize>>,
    }
    fn connect(v: usize, adj: &[[bool; 8]; 8], st: &mut State) {
        st.idx[v] = Some(st.index);
        st.low[v] = st.index;
        st.index += 1;
        st.stack.push(v);
        st.on_stack[v] = true;
        for w in 0..8 {
            if !adj[v][w] {
                continue;
            }
            if st.idx[w].is_none() {
                connect(w, adj, st);
                st.low[v] = st.low[v].min(st.low[w]);
            } else if st.on_stack[w] {
                st.low[v] = st.low[v].min(st.idx[w].unwrap());
            }
        }
        if st.low[v] == st.idx[v].unwrap() {
            let mut comp = Vec::new();
            loop {
                let w = st.stack.pop().unwrap();
                st.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            comp.sort_unstable();
            st.comps.push(comp);
        }
    }
    let mut st = State {
        index: 0,
        idx: [None; 8],
        low: [0; 8],
        on_stack: [false; 8],
        stack: Vec::new(),
        comps: Vec::new(),
    };
    for v in 0..8 {
        if st.idx[v].is_none() {
            connect(v, adj, &mut st);
        }
    }
    st.comps
}

/// Solve a dense linear system by Gaussian elimination with partial pivoting.
fn solve(a: &mut [f64], b: &mut [f64], n: usize) -> bool {
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if a[r * n + col].abs() > a[piv * n + col].abs() {
                piv = r;
            }
        }
        if a[piv * n + col].abs() < 1e-14 {
            return false;
        }
        if piv != col {
            for k in 0..n {
                a.swap(piv * n + k, col * n + k);
            }
            b.swap(piv, col);
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[r * n + col] / a[col * n + col];
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                a[r * n + k] -= f * a[col * n + k];
            }
            b[r] -= f * b[col];
        }
    }
    for r in 0..n {
        b[r] /= a[r * n + r];
    }
    true
}

/// Stationary distribution of the class-restricted matrix: null space of
/// (T_C - I) with the normalization row, cross-checked by power iteration.
fn stationary(t8: &[[f64; 8]; 8], members: &[usize]) -> ([f64; 8], f64) {
    let n = members.len();
    // (T_C - I) x = 0 with the last equation replaced by sum(x) = 1
    let mut a = vec![0.0; n * n];
    let mut b = vec![0.0; n];
    for (r, &i) in members.iter().enumerate() {
        for (c, &j) in members.iter().enumerate() {
            a[r * n + c] = t8[i][j] - if r == c { 1.0 } else { 0.0 };
        }
    }
    for c in 0..n {
        a[(n - 1) * n + c] = 1.0;
    }
    b[n - 1] = 1.0;
    let solved = solve(&mut a, &mut b, n);

    // power-iteration cross-check (and fallback); the (T+I)/2 damping keeps
    // the same fixed points but converges for periodic classes too
    let mut p = vec![1.0 / n as f64; n];
    for _ in 0..1_000_000usize {
        let mut q = vec![0.0; n];
        for (r, &i) in members.iter().enumerate() {
            for (c, &j) in members.iter().enumerate() {
                q[r] += 0.5 * t8[i][j] * p[c];
            }
            q[r] += 0.5 * p[r];
        }
        let total: f64 = q.iter().sum();
        for x in q.iter_mut() {
            *x /= total;
        }
        let delta: f64 = q.iter().zip(&p).map(|(x, y)| (x - y).abs()).sum();
        p = q;
        if delta < 1e-15 {
            break;
        }
    }
    let chosen = if solved {
        let disagreement: f64 = b.iter().zip(&p).map(|(x, y)| (x - y).abs()).sum();
        debug_assert!(disagreement < 1e-8, "null space and power iteration disagree");
        b
    } else {
        p
    };
    let mut full = [0.0; 8];
    for (r, &i) in members.iter().enumerate() {
        full[i] = chosen[r].max(0.0);
    }
    let total: f64 = full.iter().sum();
    for x in full.iter_mut() {
        *x /= total;
    }
    let mut residual = 0.0;
    for i in 0..8 {
        let ti: f64 = (0..8).map(|j| t8[i][j] * full[j]).sum();
        residual += (ti - full[i]).abs();
    }
    (full, residual)
}

/// Absorption probabilities from each transient state into each closed
/// class: solve (I - Q^T) b_c = r_c per class.
fn absorption(
    t8: &[[f64; 8]; 8],
    transient: &[usize],
    closed: &[ClosedClass],
) -> Vec<Vec<f64>> {
    let n = transient.len();
    let mut out = Vec::with_capacity(closed.len());
    for class in closed {
        let mut a = vec![0.0; n * n];
        let mut b = vec![0.0; n];
        for (r, &i) in transient.iter().enumerate() {
            for (c, &j) in transient.iter().enumerate() {
                // b(i) = sum_j P(i -> j) b(j) + direct(i); P(i -> j) = t8[j][i]
                a[r * n + c] = (if r == c { 1.0 } else { 0.0 }) - t8[j][i];
            }
            b[r] = class.members.iter().map(|&m| t8[m][i]).sum();
        }
        let ok = solve(&mut a, &mut b, n);
        debug_assert!(ok, "transient block must be invertible");
        out.push(b);
    }
    out
}

pub(super) fn decompose(
    t8: &[[f64; 8]; 8],
    initial: Option<&[f64; 8]>,
) -> ClosedClassDecomposition {
    let adj = digraph(t8);
    let components = tarjan(&adj);
    let mut closed = Vec::new();
    for comp in &components {
        let is_closed = comp
            .iter()
            .all(|&i| (0..8).all(|j| !adj[i][j] || comp.contains(&j)));
        if is_closed {
            let (stationary, residual) = stationary(t8, comp);
            debug_assert!(residual < STEADY_TOL);
            closed.push(ClosedClass { members: comp.clone(), stationary, residual });
        }
    }
    let (weights, limit) = match initial {
        None => (None, None),
        Some(p0) => {
            let transient: Vec<usize> = (0..8)
                .filter(|i| !closed.iter().any(|c| c.members.contains(i)))
                .collect();
            let absorb = absorption(t8, &transient, &closed);
            let mut weights = vec![0.0; closed.len()];
            for (ci, class) in closed.iter().enumerate() {
                for &m in &class.members {
                    weights[ci] += p0[m];
                }
                for (ti, &t) in transient.iter().enumerate() {
                    weights[ci] += p0[t] * absorb[ci][ti];
                }
            }
            let mut limit = [0.0; 8];
            for (ci, class) in closed.iter().enumerate() {
                for i in 0..8 {
                    limit[i] += weights[ci] * class.stationary[i];
                }
            }
            (Some(weights), Some(limit))
        }
    };
    ClosedClassDecomposition { components, closed, weights, limit }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(t8: &mut [[f64; 8]; 8], src: usize, entries: &[(usize, f64)]) {
        for &(dst, w) in entries {
            t8[dst][src] = w;
        }
    }

    #[test]
    fn two_state_chain_stationary() {
        // closed class {0,1} with T = [[2/3,1/3],[1/3,2/3]], everything else
        // absorbing self-loops
        let mut t8 = [[0.0; 8]; 8];
        col(&mut t8, 0, &[(0, 2.0 / 3.0), (1, 1.0 / 3.0)]);
        col(&mut t8, 1, &[(0, 1.0 / 3.0), (1, 2.0 / 3.0)]);
        for i in 2..8 {
            t8[i][i] = 1.0;
        }
        let d = decompose(&t8, None);
        let class = d.closed.iter().find(|c| c.members == vec![0, 1]).unwrap();
        assert!((class.stationary[0] - 0.5).abs() < 1e-12);
        assert!((class.stationary[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn absorption_weights_sum_to_one() {
        // 2 -> {0} with prob 0.25 + 1/3... use: from 2: 0.4 to 0, 0.1 to 1, 0.5 stays
        let mut t8 = [[0.0; 8]; 8];
        t8[0][0] = 1.0;
        t8[1][1] = 1.0;
        col(&mut t8, 2, &[(0, 0.4), (1, 0.1), (2, 0.5)]);
        for i in 3..8 {
            t8[i][i] = 1.0;
        }
        let mut p0 = [0.0; 8];
        p0[2] = 1.0;
        let d = decompose(&t8, Some(&p0));
        let w = d.weights.unwrap();
        let total: f64 = w.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
        let limit = d.limit.unwrap();
        assert!((limit[0] - 0.8).abs() < 1e-12);
        assert!((limit[1] - 0.2).abs() < 1e-12);
    }
}
