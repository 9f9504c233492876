//! p-layer QAOA circuits for Ising cost Hamiltonians.
//!
//! Layer `k` applies `exp(-i γ_k H_C)` with `H_C = -Σ J_ij Z_i Z_j`, i.e. one
//! `RZZ(-2 γ_k J_ij)` per coupled pair, then `exp(-i β_k Σ X_i)`, i.e.
//! `RX(2 β_k)` on every qubit.

use std::collections::{HashMap, HashSet};

use crate::circuit::{Circuit, Cycle, CycleClass, Gate};
use crate::error::{Error, Result};
use crate::ising::IsingModel;

#[derive(Clone, Debug, PartialEq)]
pub struct QaoaParams {
    angles: Vec<(f64, f64)>,
}

impl QaoaParams {
    /// One `(γ, β)` pair per layer.
    pub fn new(angles: Vec<(f64, f64)>) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::InvalidConfig("QAOA needs at least one layer".into()));
        }
        if angles.iter().any(|(g, b)| !g.is_finite() || !b.is_finite()) {
            return Err(Error::InvalidConfig("QAOA angles must be finite".into()));
        }
        Ok(QaoaParams { angles })
    }

    pub fn single(gamma: f64, beta: f64) -> Result<Self> {
        QaoaParams::new(vec![(gamma, beta)])
    }

    pub fn p(&self) -> usize {
        self.angles.len()
    }

    pub fn angles(&self) -> &[(f64, f64)] {
        &self.angles
    }
}

type Edge = (usize, usize);

/// Partitions the coupled pairs into matchings, one per hard cycle.
///
/// Edges are colored greedily in ascending pair order, which splits an even
/// ring into `{(0,1), (2,3), ...}` and `{(0,n-1), (1,2), ...}`. If greedy
/// needs more than `Δ+1` colors the Misra–Gries construction is used instead.
pub fn edge_coloring(m: &IsingModel) -> Vec<Vec<Edge>> {
    let edges: Vec<Edge> = m.couplings().map(|(i, j, _)| (i, j)).collect();
    if edges.is_empty() {
        return Vec::new();
    }
    let max_degree = max_degree(m.n(), &edges);
    let greedy = greedy_coloring(&edges);
    if greedy.len() <= max_degree + 1 {
        return greedy;
    }
    misra_gries(m.n(), &edges, max_degree)
}

fn max_degree(n: usize, edges: &[Edge]) -> usize {
    let mut degree = vec![0usize; n];
    for &(i, j) in edges {
        degree[i] += 1;
        degree[j] += 1;
    }
    degree.into_iter().max().unwrap_or(0)
}

fn greedy_coloring(edges: &[Edge]) -> Vec<Vec<Edge>> {
    let mut classes: Vec<(HashSet<usize>, Vec<Edge>)> = Vec::new();
    for &(i, j) in edges {
        match classes
            .iter_mut()
            .find(|(used, _)| !used.contains(&i) && !used.contains(&j))
        {
            Some((used, members)) => {
                used.extend([i, j]);
                members.push((i, j));
            }
            None => classes.push((HashSet::from([i, j]), vec![(i, j)])),
        }
    }
    classes.into_iter().map(|(_, members)| members).collect()
}

struct Coloring {
    neighbors: Vec<Vec<usize>>,
    color: HashMap<Edge, usize>,
}

impl Coloring {
    fn key(a: usize, b: usize) -> Edge {
        (a.min(b), a.max(b))
    }

    fn get(&self, a: usize, b: usize) -> Option<usize> {
        self.color.get(&Self::key(a, b)).copied()
    }

    fn set(&mut self, a: usize, b: usize, c: Option<usize>) {
        match c {
            Some(c) => self.color.insert(Self::key(a, b), c),
            None => self.color.remove(&Self::key(a, b)),
        };
    }

    fn is_free(&self, x: usize, c: usize) -> bool {
        self.neighbors[x].iter().all(|&y| self.get(x, y) != Some(c))
    }

    fn first_free(&self, x: usize, palette: usize) -> usize {
        (0..palette)
            .find(|&c| self.is_free(x, c))
            .expect("Δ+1 colors always leave one free")
    }

    fn neighbor_with(&self, x: usize, c: usize) -> Option<usize> {
        self.neighbors[x].iter().copied().find(|&y| self.get(x, y) == Some(c))
    }

    fn is_fan(&self, u: usize, fan: &[usize]) -> bool {
        fan.windows(2)
            .all(|w| self.get(u, w[1]).is_some_and(|c| self.is_free(w[0], c)))
    }
}

fn misra_gries(n: usize, edges: &[Edge], max_degree: usize) -> Vec<Vec<Edge>> {
    let palette = max_degree + 1;
    let mut neighbors = vec![Vec::new(); n];
    for &(i, j) in edges {
        neighbors[i].push(j);
        neighbors[j].push(i);
    }
    let mut col = Coloring {
        neighbors,
        color: HashMap::new(),
    };
    for &(u, v) in edges {
        // maximal fan at u starting with v
        let mut fan = vec![v];
        loop {
            let last = *fan.last().unwrap();
            let next = col.neighbors[u]
                .iter()
                .copied()
                .find(|&w| !fan.contains(&w) && col.get(u, w).is_some_and(|c| col.is_free(last, c)));
            match next {
                Some(w) => fan.push(w),
                None => break,
            }
        }
        let c = col.first_free(u, palette);
        let d = col.first_free(*fan.last().unwrap(), palette);

        // invert the cd-path starting at u
        if c != d {
            let mut path = Vec::new();
            let (mut at, mut want) = (u, d);
            while let Some(next) = col.neighbor_with(at, want) {
                if path.contains(&Coloring::key(at, next)) {
                    break;
                }
                path.push(Coloring::key(at, next));
                at = next;
                want = if want == d { c } else { d };
            }
            for &(a, b) in &path {
                let old = col.get(a, b).unwrap();
                col.set(a, b, Some(if old == c { d } else { c }));
            }
        }

        let w_at = (0..fan.len())
            .find(|&k| col.is_free(fan[k], d) && col.is_fan(u, &fan[..=k]))
            .expect("Misra-Gries guarantees a rotatable prefix");
        for k in 0..w_at {
            let next = col.get(u, fan[k + 1]);
            col.set(u, fan[k], next);
        }
        col.set(u, fan[w_at], Some(d));
    }

    let mut classes = vec![Vec::new(); palette];
    for &(i, j) in edges {
        classes[col.get(i, j).unwrap()].push((i, j));
    }
    classes.retain(|c| !c.is_empty());
    classes
}

/// Builds `[H all] ([RZZ hard cycles] [RX all])^p [measure all]`.
pub fn build_qaoa_circuit(m: &IsingModel, params: &QaoaParams) -> Result<Circuit> {
    if m.has_fields() {
        return Err(Error::InvalidModel(
            "QAOA circuits are only built for models without fields".into(),
        ));
    }
    let n = m.n();
    let coloring = edge_coloring(m);
    let mut cycles = vec![Cycle::easy((0..n).map(Gate::H).collect())];
    for &(gamma, beta) in params.angles() {
        for class in &coloring {
            let gates = class
                .iter()
                .map(|&(i, j)| {
                    let coupling = m.coupling(i, j).expect("colored edge is coupled");
                    Gate::Rzz(i, j, -2.0 * gamma * coupling)
                })
                .collect();
            cycles.push(Cycle::hard(gates));
        }
        cycles.push(Cycle::easy((0..n).map(|q| Gate::Rx(q, 2.0 * beta)).collect()));
    }
    cycles.push(Cycle::measurement(n));
    Circuit::new(n, cycles)
}

/// Rewrites every `RZZ(θ)` as `CNOT · RZ(θ) on the target · CNOT`, turning
/// each hard RZZ cycle into `[hard CNOTs] [easy RZs] [hard CNOTs]`.
pub fn decompose_rzz(c: &Circuit) -> Result<Circuit> {
    let mut cycles = Vec::with_capacity(c.cycles().len() * 2);
    for cycle in c.cycles() {
        let has_rzz = cycle.gates.iter().any(|g| matches!(g, Gate::Rzz(..)));
        if cycle.class != CycleClass::Hard || !has_rzz {
            cycles.push(cycle.clone());
            continue;
        }
        let mut first = Vec::new();
        let mut middle = Vec::new();
        let mut last = Vec::new();
        for gate in &cycle.gates {
            match *gate {
                Gate::Rzz(a, b, theta) => {
                    first.push(Gate::Cnot(a, b));
                    middle.push(Gate::Rz(b, theta));
                    last.push(Gate::Cnot(a, b));
                }
                ref other => first.push(other.clone()),
            }
        }
        cycles.push(Cycle::hard(first));
        cycles.push(Cycle::easy(middle));
        cycles.push(Cycle::hard(last));
    }
    Circuit::new(c.n_qubits(), cycles)
}
