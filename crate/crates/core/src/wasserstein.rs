//! Exact 1-Wasserstein distance between finitely supported measures.
//!
//! The transportation linear program is solved by a primal network simplex on
//! the bipartite supply/demand graph with Bland's smallest-index anti-cycling
//! rule; a factorial brute-force matcher over permutations serves as the
//! independent oracle for uniform measures.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;
use crate::spd::riem_dist;

/// Weights below this threshold are dropped before solving, to keep the LP
/// basis non-degenerate.
pub const SUPPORT_DROP_TOL: f64 = 1e-15;

/// Largest support size accepted by the factorial permutation oracle.
pub const ORACLE_MAX_SUPPORT: usize = 9;

const PIVOT_TOL_SCALE: f64 = 1e-12;

/// Pairwise ground-distance matrix between the atoms of two measures.
#[derive(Clone, Debug)]
pub struct CostMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl CostMatrix {
    pub fn between(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<Self> {
        if mu.dim() != nu.dim() {
            return Err(Error::invalid("cost matrix dimension mismatch"));
        }
        let rows = mu.len();
        let cols = nu.len();
        let mut data = Vec::with_capacity(rows * cols);
        for a in mu.atoms() {
            for b in nu.atoms() {
                data.push(riem_dist(a, b)?);
            }
        }
        Ok(CostMatrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }
}

/// Transport plan between two measures: nonnegative masses whose row sums
/// reproduce the source weights and column sums the target weights.
#[derive(Clone, Debug)]
pub struct CouplingPlan {
    rows: usize,
    cols: usize,
    mass: Vec<f64>,
}

impl CouplingPlan {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mass(&self, i: usize, j: usize) -> f64 {
        self.mass[i * self.cols + j]
    }

    /// Cells carrying strictly positive mass, in row-major order.
    pub fn support(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let cols = self.cols;
        self.mass
            .iter()
            .enumerate()
            .filter(|(_, m)| **m > 0.0)
            .map(move |(e, m)| (e / cols, e % cols, *m))
    }

    pub fn row_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.rows];
        for (i, j, m) in self.support() {
            let _ = j;
            sums[i] += m;
        }
        sums
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.cols];
        for (_, j, m) in self.support() {
            sums[j] += m;
        }
        sums
    }

    /// Worst absolute violation of the two marginal constraints.
    pub fn max_marginal_error(&self, mu_weights: &[f64], nu_weights: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for (s, w) in self.row_sums().iter().zip(mu_weights) {
            worst = worst.max((s - w).abs());
        }
        for (s, w) in self.col_sums().iter().zip(nu_weights) {
            worst = worst.max((s - w).abs());
        }
        worst
    }
}

/// Exact 1-Wasserstein distance together with an optimal coupling.
pub fn d1w(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<(f64, CouplingPlan)> {
    let cost = CostMatrix::between(mu, nu)?;

    // drop negligible weights, then rebalance the target side exactly
    let rows_kept: Vec<usize> = (0..mu.len())
        .filter(|&i| mu.weight(i) > SUPPORT_DROP_TOL)
        .collect();
    let cols_kept: Vec<usize> = (0..nu.len())
        .filter(|&j| nu.weight(j) > SUPPORT_DROP_TOL)
        .collect();
    if rows_kept.is_empty() || cols_kept.is_empty() {
        return Err(Error::invalid("measure has no effective support"));
    }
    let supply: Vec<f64> = rows_kept.iter().map(|&i| mu.weight(i)).collect();
    let mut demand: Vec<f64> = cols_kept.iter().map(|&j| nu.weight(j)).collect();
    let supply_total: f64 = supply.iter().sum();
    let demand_total: f64 = demand.iter().sum();
    let rescale = supply_total / demand_total;
    for d in &mut demand {
        *d *= rescale;
    }

    let reduced_cost: Vec<f64> = rows_kept
        .iter()
        .flat_map(|&i| cols_kept.iter().map(move |&j| (i, j)))
        .map(|(i, j)| cost.get(i, j))
        .collect();
    let flow = solve_transport(&supply, &demand, &reduced_cost)?;

    let mut mass = vec![0.0; mu.len() * nu.len()];
    let mut value = 0.0;
    for (r, &i) in rows_kept.iter().enumerate() {
        for (c, &j) in cols_kept.iter().enumerate() {
            let f = flow[r * cols_kept.len() + c];
            if f > 0.0 {
                mass[i * nu.len() + j] = f;
                value += f * cost.get(i, j);
            }
        }
    }
    Ok((
        value,
        CouplingPlan {
            rows: mu.len(),
            cols: nu.len(),
            mass,
        },
    ))
}

/// Brute-force matcher for uniform measures of equal support size n ≤ 9:
/// the minimum over all n! permutations of the mean matched distance.
pub fn permutation_oracle(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<f64> {
    let n = mu.len();
    if nu.len() != n {
        return Err(Error::invalid("oracle requires equal support sizes"));
    }
    if n > ORACLE_MAX_SUPPORT {
        return Err(Error::invalid(format!(
            "oracle support size {n} exceeds the factorial guard {ORACLE_MAX_SUPPORT}"
        )));
    }
    let uniform = 1.0 / n as f64;
    for w in mu.weights().iter().chain(nu.weights()) {
        if (w - uniform).abs() > 1e-9 {
            return Err(Error::invalid("oracle requires uniform weights"));
        }
    }
    let cost = CostMatrix::between(mu, nu)?;

    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = f64::INFINITY;
    permute(&mut perm, 0, &mut |p| {
        let total: f64 = p.iter().enumerate().map(|(i, &j)| cost.get(i, j)).sum();
        best = best.min(total);
    });
    Ok(best / n as f64)
}

fn permute(items: &mut [usize], start: usize, visit: &mut impl FnMut(&[usize])) {
    if start == items.len() {
        visit(items);
        return;
    }
    for i in start..items.len() {
        items.swap(start, i);
        permute(items, start + 1, visit);
        items.swap(start, i);
    }
}

/// Primal network simplex for the balanced transportation problem.
///
/// Node ids 0..n are supply rows, n..n+k demand columns; arc e = i·k + j.
/// Both the entering arc (most negative? no: lowest index with negative
/// reduced cost) and the leaving arc (lowest index among the blocking arcs)
/// follow Bland's rule, so the pivot cap is a defect detector rather than a
/// tuning knob.
fn solve_transport(supply: &[f64], demand: &[f64], cost: &[f64]) -> Result<Vec<f64>> {
    let n = supply.len();
    let k = demand.len();
    let n_nodes = n + k;
    let n_arcs = n * k;

    let mut flow = vec![0.0; n_arcs];
    let mut in_basis = vec![false; n_arcs];
    let mut basic: Vec<usize> = Vec::with_capacity(n_nodes - 1);

    // northwest-corner staircase: n + k - 1 basic arcs forming a spanning tree
    {
        let mut a_rem = supply.to_vec();
        let mut b_rem = demand.to_vec();
        let (mut i, mut j) = (0usize, 0usize);
        loop {
            let e = i * k + j;
            let x = a_rem[i].min(b_rem[j]).max(0.0);
            flow[e] = x;
            in_basis[e] = true;
            basic.push(e);
            a_rem[i] -= x;
            b_rem[j] -= x;
            if i == n - 1 && j == k - 1 {
                break;
            }
            if a_rem[i] <= b_rem[j] && i < n - 1 {
                i += 1;
            } else if j < k - 1 {
                j += 1;
            } else {
                i += 1;
            }
        }
    }

    let cmax = cost.iter().fold(0.0_f64, |m, &c| m.max(c.abs()));
    let enter_tol = PIVOT_TOL_SCALE * (1.0 + cmax);
    let pivot_cap = 1000 + 50 * n_arcs;

    for _ in 0..pivot_cap {
        // adjacency of the basic spanning tree
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n_nodes];
        for &e in &basic {
            let (i, j) = (e / k, e % k);
            adj[i].push((n + j, e));
            adj[n + j].push((i, e));
        }

        // node potentials from u[0] = 0, propagated along basic arcs
        let mut u = vec![0.0; n];
        let mut v = vec![0.0; k];
        let mut seen = vec![false; n_nodes];
        let mut queue = VecDeque::new();
        seen[0] = true;
        queue.push_back(0usize);
        while let Some(node) = queue.pop_front() {
            for &(nb, e) in &adj[node] {
                if seen[nb] {
                    continue;
                }
                seen[nb] = true;
                let (i, j) = (e / k, e % k);
                if nb >= n {
                    v[nb - n] = cost[e] - u[i];
                } else {
                    u[nb] = cost[e] - v[j];
                }
                queue.push_back(nb);
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::numerical("transport basis lost connectivity"));
        }

        // entering arc: lowest index with negative reduced cost
        let mut entering = None;
        for (e, &c) in cost.iter().enumerate() {
            if in_basis[e] {
                continue;
            }
            if c - u[e / k] - v[e % k] < -enter_tol {
                entering = Some(e);
                break;
            }
        }
        let Some(enter) = entering else {
            return Ok(flow);
        };
        let (ei, ej) = (enter / k, enter % k);

        // unique tree path from the entering row node to its column node
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; n_nodes];
        let mut reached = vec![false; n_nodes];
        let mut queue = VecDeque::new();
        reached[ei] = true;
        queue.push_back(ei);
        while let Some(node) = queue.pop_front() {
            if node == n + ej {
                break;
            }
            for &(nb, e) in &adj[node] {
                if reached[nb] {
                    continue;
                }
                reached[nb] = true;
                parent[nb] = Some((node, e));
                queue.push_back(nb);
            }
        }
        let mut path_arcs = Vec::new();
        let mut node = n + ej;
        while node != ei {
            let (p, e) = parent[node]
                .ok_or_else(|| Error::numerical("transport pivot path not found"))?;
            path_arcs.push(e);
            node = p;
        }

        // cycle signs: entering +, then alternating starting with - at the
        // column end of the path
        let minus: Vec<usize> = path_arcs
            .iter()
            .enumerate()
            .filter(|(idx, _)| idx % 2 == 0)
            .map(|(_, &e)| e)
            .collect();
        let delta = minus.iter().map(|&e| flow[e]).fold(f64::INFINITY, f64::min);
        let leave = minus
            .iter()
            .copied()
            .filter(|&e| flow[e] <= delta)
            .min()
            .expect("cycle always has a leaving candidate");

        flow[enter] = delta;
        for (idx, &e) in path_arcs.iter().enumerate() {
            if idx % 2 == 0 {
                flow[e] = (flow[e] - delta).max(0.0);
            } else {
                flow[e] += delta;
            }
        }
        in_basis[leave] = false;
        in_basis[enter] = true;
        let pos = basic.iter().position(|&e| e == leave).unwrap();
        basic[pos] = enter;
    }

    Err(Error::numerical(
        "transport simplex exceeded its pivot cap".to_string(),
    ))
}
