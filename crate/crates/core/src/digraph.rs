//! Signed digraph of a sign pattern, connectivity tests, and recognition of
//! patterns whose undirected graph is a single cycle.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::pattern::{Sign, SignPattern};

/// Default bound on the order for exhaustive path enumeration.
pub const PATH_ENUMERATION_BOUND: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedArc {
    pub from: usize,
    pub to: usize,
    pub sign: Sign,
}

/// `D(A)`: arc `(i, j)` present iff `a_ij != 0`, carrying the sign of `a_ij`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedDigraph {
    n: usize,
    arcs: Vec<SignedArc>,
}

impl SignedDigraph {
    pub fn from_pattern(a: &SignPattern) -> Self {
        let n = a.n();
        let mut arcs = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let s = a.get(i, j);
                if s.is_nonzero() {
                    arcs.push(SignedArc { from: i, to: j, sign: s });
                }
            }
        }
        SignedDigraph { n, arcs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Arcs in row-major order.
    pub fn arcs(&self) -> &[SignedArc] {
        &self.arcs
    }

    /// Out-neighbours of every vertex, loops excluded.
    pub fn successors(&self) -> Vec<Vec<(usize, Sign)>> {
        let mut adj = vec![Vec::new(); self.n];
        for arc in &self.arcs {
            if arc.from != arc.to {
                adj[arc.from].push((arc.to, arc.sign));
            }
        }
        adj
    }

    pub fn is_strongly_connected(&self) -> bool {
        let mut fwd = vec![Vec::new(); self.n];
        let mut bwd = vec![Vec::new(); self.n];
        for arc in &self.arcs {
            fwd[arc.from].push(arc.to);
            bwd[arc.to].push(arc.from);
        }
        reaches_all(&fwd) && reaches_all(&bwd)
    }
}

pub fn build_digraph(a: &SignPattern) -> SignedDigraph {
    SignedDigraph::from_pattern(a)
}

fn reaches_all(adj: &[Vec<usize>]) -> bool {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

pub fn is_irreducible(a: &SignPattern) -> bool {
    SignedDigraph::from_pattern(a).is_strongly_connected()
}

/// Every row and column has a `+`, and both `A` and `B_A` are irreducible.
pub fn is_ap_irreducible(a: &SignPattern) -> bool {
    let n = a.n();
    let rows_ok = (0..n).all(|i| a.row(i).contains(&Sign::Plus));
    let cols_ok = (0..n).all(|j| a.col(j).any(|s| s == Sign::Plus));
    rows_ok && cols_ok && is_irreducible(a) && is_irreducible(&a.split_parts().b_a)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoCycle {
    pub i: usize,
    pub j: usize,
    pub sign: Sign,
}

/// One record per pair `i < j` with `a_ij` and `a_ji` both nonzero.
pub fn two_cycle_signs(a: &SignPattern) -> Vec<TwoCycle> {
    let n = a.n();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let s = a.get(i, j) * a.get(j, i);
            if s.is_nonzero() {
                out.push(TwoCycle { i, j, sign: s });
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    /// Arcs `1 -> 2 -> ... -> n -> 1`.
    Forward,
    /// Arcs `1 -> n -> n-1 -> ... -> 2 -> 1`.
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonotoneCycle {
    pub orientation: Orientation,
    pub sign: Sign,
}

/// Check that the nonzero entries of `a` sit only on the diagonal, the
/// cycle-adjacent positions `(i, i±1 mod n)`, and that every cycle edge is
/// present in at least one direction. Requires `n >= 3`.
pub fn is_cycle_form(a: &SignPattern) -> bool {
    cycle_form_problem(a).is_none()
}

fn cycle_form_problem(a: &SignPattern) -> Option<String> {
    let n = a.n();
    if n < 3 {
        return Some(format!("order {n} is below 3"));
    }
    for i in 0..n {
        for j in 0..n {
            let adjacent = i == j || j == (i + 1) % n || i == (j + 1) % n;
            if !adjacent && a.get(i, j).is_nonzero() {
                return Some(format!("nonzero entry at ({}, {})", i + 1, j + 1));
            }
        }
        let j = (i + 1) % n;
        if a.get(i, j).is_zero() && a.get(j, i).is_zero() {
            return Some(format!("missing cycle edge {{{}, {}}}", i + 1, j + 1));
        }
    }
    None
}

pub(crate) fn require_cycle_form(a: &SignPattern) -> Result<()> {
    match cycle_form_problem(a) {
        None => Ok(()),
        Some(msg) => Err(Error::NotCycleForm(msg)),
    }
}

/// The common sign of the arcs `(i, i+1 mod n)`, if all are nonzero and equal.
pub fn forward_sign(a: &SignPattern) -> Option<Sign> {
    uniform_sign((0..a.n()).map(|i| a.get(i, (i + 1) % a.n())))
}

/// The common sign of the arcs `(i+1 mod n, i)`, if all are nonzero and equal.
pub fn backward_sign(a: &SignPattern) -> Option<Sign> {
    uniform_sign((0..a.n()).map(|i| a.get((i + 1) % a.n(), i)))
}

fn uniform_sign(mut it: impl Iterator<Item = Sign>) -> Option<Sign> {
    let first = it.next()?;
    if first.is_zero() {
        return None;
    }
    it.all(|s| s == first).then_some(first)
}

/// The directed Hamiltonian cycles of a cycle-form pattern that use arcs of
/// a single sign.
pub fn monotone_n_cycles(a: &SignPattern) -> Result<BTreeSet<MonotoneCycle>> {
    require_cycle_form(a)?;
    let mut out = BTreeSet::new();
    if let Some(sign) = forward_sign(a) {
        out.insert(MonotoneCycle {
            orientation: Orientation::Forward,
            sign,
        });
    }
    if let Some(sign) = backward_sign(a) {
        out.insert(MonotoneCycle {
            orientation: Orientation::Backward,
            sign,
        });
    }
    Ok(out)
}

/// A relabeling that puts a pattern into cycle form: position `k` of the
/// relabeled pattern holds original vertex `perm[k]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleLabeling {
    pub perm: Vec<usize>,
    pub reflected: bool,
}

impl CycleLabeling {
    pub fn apply(&self, a: &SignPattern) -> SignPattern {
        a.permute_similar(&self.perm)
            .expect("labeling holds a valid permutation")
    }

    /// 1-based original vertex at relabeled position `k` (0-based).
    pub fn original_vertex(&self, k: usize) -> usize {
        self.perm[k] + 1
    }
}

/// The undirected graph `G(A)` traversed as a cycle, starting at vertex 0
/// and moving to its smaller neighbour; `None` unless `G(A)` is an n-cycle.
pub fn undirected_cycle_order(a: &SignPattern) -> Option<Vec<usize>> {
    let n = a.n();
    if n < 3 {
        return None;
    }
    let mut nbrs = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            if a.get(i, j).is_nonzero() || a.get(j, i).is_nonzero() {
                nbrs[i].push(j);
                nbrs[j].push(i);
            }
        }
    }
    if nbrs.iter().any(|v| v.len() != 2) {
        return None;
    }
    let mut order = Vec::with_capacity(n);
    let mut prev = 0;
    let mut cur = nbrs[0][0].min(nbrs[0][1]);
    order.push(0);
    while cur != 0 {
        if order.len() >= n {
            return None;
        }
        order.push(cur);
        let next = if nbrs[cur][0] == prev {
            nbrs[cur][1]
        } else {
            nbrs[cur][0]
        };
        prev = cur;
        cur = next;
    }
    (order.len() == n).then_some(order)
}

/// All `2n` rotations and reflections placing `a` in cycle form, sorted
/// lexicographically by permutation; empty when `G(A)` is not an n-cycle.
pub fn cycle_form_labelings(a: &SignPattern) -> Vec<CycleLabeling> {
    let Some(order) = undirected_cycle_order(a) else {
        return Vec::new();
    };
    let n = order.len();
    let mut out = Vec::with_capacity(2 * n);
    for start in 0..n {
        for reflected in [false, true] {
            let perm = (0..n)
                .map(|k| {
                    if reflected {
                        order[(start + n - k) % n]
                    } else {
                        order[(start + k) % n]
                    }
                })
                .collect();
            let lab = CycleLabeling { perm, reflected };
            debug_assert!(is_cycle_form(&lab.apply(a)));
            out.push(lab);
        }
    }
    out.sort();
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedPath {
    pub vertices: Vec<usize>,
    pub sign: Sign,
}

impl SignedPath {
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.len() <= 1
    }
}

/// All simple directed paths from `s` to `r` (loops ignored), in
/// lexicographic order of their vertex sequences.
pub fn signed_paths(a: &SignPattern, s: usize, r: usize) -> Result<Vec<SignedPath>> {
    signed_paths_bounded(a, s, r, PATH_ENUMERATION_BOUND)
}

pub fn signed_paths_bounded(
    a: &SignPattern,
    s: usize,
    r: usize,
    bound: usize,
) -> Result<Vec<SignedPath>> {
    let n = a.n();
    if n > bound {
        return Err(Error::BoundExceeded { n, bound });
    }
    if s >= n || r >= n || s == r {
        return Err(Error::Precondition(format!(
            "path endpoints must be distinct vertices, got {s} and {r}"
        )));
    }
    let mut out = Vec::new();
    let mut on_path = vec![false; n];
    let mut path = vec![s];
    on_path[s] = true;
    dfs_paths(a, r, &mut path, &mut on_path, Sign::Plus, &mut out);
    Ok(out)
}

fn dfs_paths(
    a: &SignPattern,
    target: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    sign: Sign,
    out: &mut Vec<SignedPath>,
) {
    let v = *path.last().unwrap();
    for w in 0..a.n() {
        let arc = a.get(v, w);
        if w == v || arc.is_zero() || on_path[w] {
            continue;
        }
        let s = sign * arc;
        path.push(w);
        if w == target {
            out.push(SignedPath {
                vertices: path.clone(),
                sign: s,
            });
        } else {
            on_path[w] = true;
            dfs_paths(a, target, path, on_path, s, out);
            on_path[w] = false;
        }
        path.pop();
    }
}
