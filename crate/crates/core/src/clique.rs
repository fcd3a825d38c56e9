//! Maximum cliques in Cayley graphs on `𝔽_p`: the largest `A ∋ 0` with
//! `A − A ⊆ allowed ∪ {0}`.

use serde::Serialize;

use crate::bitset::Bitset;
use crate::error::{Error, Result};
use crate::fp::{FpSet, PrimeCtx, Subgroup};

/// Cayley graph with connection set `allowed = ξΓ ∩ −ξΓ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueInstance {
    pub ctx: PrimeCtx,
    pub gamma_order: u64,
    pub xi: u64,
    pub allowed: FpSet,
}

impl CliqueInstance {
    /// A graph given directly by a symmetric connection set without zero.
    pub fn from_connection_set(allowed: FpSet) -> Result<Self> {
        if allowed.contains(0) {
            return Err(Error::InvalidParameter("connection set must not contain 0".into()));
        }
        if allowed != allowed.neg() {
            return Err(Error::InvalidParameter("connection set must be symmetric".into()));
        }
        Ok(CliqueInstance { ctx: allowed.ctx().clone(), gamma_order: 0, xi: 1, allowed })
    }

    pub fn p(&self) -> u64 {
        self.ctx.p()
    }

    #[inline]
    pub fn adjacent(&self, u: u64, v: u64) -> bool {
        self.allowed.contains(self.ctx.sub(u, v))
    }

    /// Neighbourhood of 0 and its induced adjacency, as local indices.
    fn rooted_graph(&self) -> (Vec<u64>, Vec<Bitset>) {
        let verts = self.allowed.to_vec();
        let m = verts.len();
        let adj = (0..m)
            .map(|i| {
                let mut row = Bitset::new(m);
                for j in 0..m {
                    if i != j && self.adjacent(verts[i], verts[j]) {
                        row.insert(j);
                    }
                }
                row
            })
            .collect();
        (verts, adj)
    }
}

/// `allowed = {x ∈ ξΓ : −x ∈ ξΓ}`; empty when `ξΓ ∩ −ξΓ = ∅`.
pub fn build_clique_instance(g: &Subgroup, xi: u64) -> Result<CliqueInstance> {
    let coset = g.coset(xi)?;
    let allowed = coset.intersection(&coset.neg())?;
    Ok(CliqueInstance { ctx: g.ctx().clone(), gamma_order: g.order(), xi: xi % g.ctx().p(), allowed })
}

/// `A − A ⊆ allowed ∪ {0}`, checked pair by pair.
pub fn satisfies_difference_condition(a: &FpSet, allowed: &FpSet) -> bool {
    let v = a.to_vec();
    let ctx = a.ctx();
    v.iter().all(|&x| v.iter().all(|&y| x == y || allowed.contains(ctx.sub(x, y))))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliqueResult {
    #[serde(serialize_with = "ser_fpset")]
    pub best: FpSet,
    pub size: usize,
    /// True when the search finished inside the node budget.
    pub optimal: bool,
    pub nodes_explored: u64,
    /// Independent recheck of the difference condition on `best`.
    pub verified: bool,
}

fn ser_fpset<S: serde::Serializer>(s: &FpSet, ser: S) -> std::result::Result<S::Ok, S::Error> {
    s.to_vec().serialize(ser)
}

/// Smallest-last order: repeatedly remove a vertex of minimum remaining
/// degree; the reversed removal order is returned.
fn degeneracy_order(adj: &[Bitset]) -> Vec<usize> {
    let m = adj.len();
    let mut alive = Bitset::full(m);
    let mut deg: Vec<usize> = adj.iter().map(Bitset::count).collect();
    let mut removed = Vec::with_capacity(m);
    for _ in 0..m {
        let v = alive.iter().min_by_key(|&v| (deg[v], v)).expect("vertices remain");
        alive.remove(v);
        for u in adj[v].iter() {
            if alive.contains(u) {
                deg[u] -= 1;
            }
        }
        removed.push(v);
    }
    removed.reverse();
    removed
}

struct Search<'a> {
    adj: &'a [Bitset],
    budget: u64,
    nodes: u64,
    exhausted: bool,
    current: Vec<usize>,
    best: Vec<usize>,
}

impl Search<'_> {
    /// Greedy colouring of `p` in index order; returns vertices with
    /// their colour numbers, sorted by colour.
    fn colour(&self, p: &Bitset) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(p.count());
        let mut uncoloured = p.clone();
        let mut colour = 0;
        while !uncoloured.is_empty() {
            colour += 1;
            let mut q = uncoloured.clone();
            while let Some(v) = q.first() {
                q.remove(v);
                q.and_not_assign(&self.adj[v]);
                uncoloured.remove(v);
                out.push((v, colour));
            }
        }
        out
    }

    fn expand(&mut self, mut p: Bitset) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        let order = self.colour(&p);
        for &(v, c) in order.iter().rev() {
            if self.current.len() + c <= self.best.len() {
                return;
            }
            self.current.push(v);
            let next = p.and(&self.adj[v]);
            if next.is_empty() {
                if self.current.len() > self.best.len() {
                    self.best = self.current.clone();
                }
            } else {
                self.expand(next);
            }
            self.current.pop();
            if self.exhausted {
                return;
            }
            p.remove(v);
        }
    }
}

/// Branch-and-bound with greedy-colouring bounds over bitset candidate sets,
/// rooted at 0 (the graph is vertex-transitive).
pub fn max_clique(inst: &CliqueInstance, budget: u64) -> Result<CliqueResult> {
    if budget == 0 {
        return Err(Error::InvalidParameter("budget must be at least 1".into()));
    }
    let (verts, adj) = inst.rooted_graph();
    // relabel so index order is the degeneracy order
    let order = degeneracy_order(&adj);
    let mut pos = vec![0; order.len()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let m = verts.len();
    let relabelled: Vec<Bitset> = order
        .iter()
        .map(|&v| {
            let mut row = Bitset::new(m);
            for u in adj[v].iter() {
                row.insert(pos[u]);
            }
            row
        })
        .collect();
    // greedy incumbent, scanning from the end of the degeneracy order
    let mut greedy = Vec::new();
    let mut cand = Bitset::full(m);
    for v in (0..m).rev() {
        if cand.contains(v) {
            greedy.push(v);
            cand.and_assign(&relabelled[v]);
        }
    }
    let mut search = Search { adj: &relabelled, budget, nodes: 0, exhausted: false, current: Vec::new(), best: greedy };
    if m > 0 {
        search.expand(Bitset::full(m));
    }
    let mut best = FpSet::empty(&inst.ctx);
    best.insert(0);
    for &i in &search.best {
        best.insert(verts[order[i]]);
    }
    let verified = satisfies_difference_condition(&best, &inst.allowed);
    Ok(CliqueResult { size: best.len(), best, optimal: !search.exhausted, nodes_explored: search.nodes, verified })
}

/// Independent maximum: subset enumeration when `|allowed| ≤ 20`, otherwise
/// Bron–Kerbosch with pivoting on 64-bit masks for `p ≤ 61`.
pub fn clique_oracle(inst: &CliqueInstance) -> Result<usize> {
    let verts = inst.allowed.to_vec();
    let m = verts.len();
    if m > 20 && inst.p() > 61 {
        return Err(Error::Oversized(format!("p = {}, |allowed| = {m}", inst.p())));
    }
    let adj: Vec<u64> = (0..m)
        .map(|i| (0..m).filter(|&j| j != i && inst.adjacent(verts[i], verts[j])).fold(0u64, |acc, j| acc | 1 << j))
        .collect();
    let best = if m <= 20 {
        (0u64..1 << m)
            .filter(|&mask| {
                let mut rest = mask;
                while rest != 0 {
                    let v = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    if rest & !adj[v] != 0 {
                        return false;
                    }
                }
                true
            })
            .map(|mask| mask.count_ones() as usize)
            .max()
            .unwrap_or(0)
    } else {
        let all = if m == 64 { !0 } else { (1u64 << m) - 1 };
        bron_kerbosch(&adj, 0, all, 0)
    };
    Ok(best + 1)
}

fn bron_kerbosch(adj: &[u64], r_size: usize, mut p: u64, mut x: u64) -> usize {
    if p == 0 {
        return if x == 0 { r_size } else { 0 };
    }
    let pivot_pool = p | x;
    let mut pivot = pivot_pool.trailing_zeros() as usize;
    let mut most = 0;
    let mut rest = pivot_pool;
    while rest != 0 {
        let u = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let c = (p & adj[u]).count_ones();
        if c >= most {
            most = c;
            pivot = u;
        }
    }
    let mut best = r_size;
    let mut cand = p & !adj[pivot];
    while cand != 0 {
        let v = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        best = best.max(bron_kerbosch(adj, r_size + 1, p & adj[v], x & adj[v]));
        p &= !(1 << v);
        x |= 1 << v;
    }
    best
}
