//! Folded subgroup graphs of `F(x,h)`.
//!
//! A [`SubgroupGraph`] is the basepointed core of the Schreier graph of a
//! finitely generated subgroup. When every transition is defined it is the
//! full coset table of a finite-index subgroup, and states are right cosets
//! `H w` with `w` acting on the right.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::snf::{smith_normal_form, IntegerMatrixNF};
use crate::word::{CyclicHom, FreeWord, Gen, Letter};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StallingsError {
    #[error("infinite index")]
    InfiniteIndex,
    #[error("kernel has index < n in image subgroup (hom {0:?} is not surjective)")]
    NotSurjective(CyclicHom),
    #[error("relator `{0}` is not in the subgroup")]
    NotInSubgroup(FreeWord),
    #[error("homomorphism covers {got} Schreier generators, subgroup has {expected}")]
    BasisMismatch { expected: usize, got: usize },
    #[error("H1 is not infinite cyclic: invariant factors {0}")]
    NotInfiniteCyclic(IntegerMatrixNF),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Index {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Finite(n) => write!(f, "{n}"),
            Index::Infinite => f.write_str("infinite"),
        }
    }
}

type Row = [Option<usize>; 4];

/// Folded, trimmed, canonically labelled subgroup graph. State 0 is the basepoint.
///
/// Canonical labelling is breadth-first from the basepoint in the letter
/// order `x, x^-1, h, h^-1`, so two graphs are equal iff they represent the
/// same subgroup.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubgroupGraph {
    adj: Vec<Row>,
}

impl SubgroupGraph {
    /// Graph of the whole group: one state with both loops.
    pub fn whole_group() -> SubgroupGraph {
        SubgroupGraph {
            adj: vec![[Some(0); 4]],
        }
    }

    /// Graph of the trivial subgroup: one state, no edges.
    pub fn trivial() -> SubgroupGraph {
        SubgroupGraph {
            adj: vec![[None; 4]],
        }
    }

    pub fn num_states(&self) -> usize {
        self.adj.len()
    }

    pub fn is_complete(&self) -> bool {
        self.adj.iter().all(|r| r.iter().all(Option::is_some))
    }

    pub fn index(&self) -> Index {
        if self.is_complete() {
            Index::Finite(self.adj.len())
        } else {
            Index::Infinite
        }
    }

    pub fn finite_index(&self) -> Result<usize, StallingsError> {
        match self.index() {
            Index::Finite(n) => Ok(n),
            Index::Infinite => Err(StallingsError::InfiniteIndex),
        }
    }

    /// Number of positive (x or h) edges.
    pub fn num_edges(&self) -> usize {
        self.adj
            .iter()
            .map(|r| r[0].is_some() as usize + r[2].is_some() as usize)
            .sum()
    }

    /// Free rank of the subgroup, `E - V + 1` on the core.
    pub fn rank(&self) -> usize {
        self.num_edges() + 1 - self.adj.len()
    }

    pub fn step(&self, state: usize, l: Letter) -> Option<usize> {
        self.adj[state][l.index()]
    }

    /// Reads `w` from `state`; `None` if the path leaves the graph.
    pub fn read_from(&self, state: usize, w: &FreeWord) -> Option<usize> {
        w.letters()
            .iter()
            .try_fold(state, |s, &l| self.step(s, l))
    }

    /// Follows `w` from the basepoint as far as possible. Returns the state
    /// reached and how many letters were consumed.
    pub fn read_prefix(&self, w: &FreeWord) -> (usize, usize) {
        let mut s = 0;
        for (i, &l) in w.letters().iter().enumerate() {
            match self.step(s, l) {
                Some(t) => s = t,
                None => return (s, i),
            }
        }
        (s, w.len())
    }

    pub fn contains(&self, w: &FreeWord) -> bool {
        self.read_from(0, w) == Some(0)
    }

    /// Adjacency rows, indexed by `Letter::index`.
    pub fn rows(&self) -> &[[Option<usize>; 4]] {
        &self.adj
    }

    /// Adjacency list rendering: `state: x->t h->u` per line.
    pub fn to_adjacency_list(&self) -> Vec<String> {
        self.adj
            .iter()
            .enumerate()
            .map(|(s, r)| {
                let mut parts = vec![format!("{s}:")];
                for g in Gen::ALL {
                    if let Some(t) = r[Letter::pos(g).index()] {
                        parts.push(format!("{}->{t}", g.name()));
                    }
                }
                parts.join(" ")
            })
            .collect()
    }

    /// Builds from raw adjacency rooted at `base`: folds, trims hanging
    /// trees and relabels canonically.
    fn from_raw(adj: Vec<Row>, base: usize) -> SubgroupGraph {
        let mut folder = Folder::new(adj);
        folder.fold_all();
        let (adj, base) = folder.finish(base);
        let (adj, base) = trim(adj, base);
        canonical(&adj, base)
    }

    /// The permutation `state -> state . w` on cosets.
    pub fn coset_action(&self, w: &FreeWord) -> Result<Vec<usize>, StallingsError> {
        if !self.is_complete() {
            return Err(StallingsError::InfiniteIndex);
        }
        Ok((0..self.adj.len())
            .map(|s| self.read_from(s, w).expect("complete graph"))
            .collect())
    }

    /// Orbits of the subgroup generated by `gens` acting on the cosets,
    /// each listed in increasing state order, ordered by smallest member.
    pub fn orbits(&self, gens: &[FreeWord]) -> Result<Vec<Vec<usize>>, StallingsError> {
        let perms: Vec<Vec<usize>> = gens
            .iter()
            .map(|g| self.coset_action(g))
            .collect::<Result<_, _>>()?;
        let n = self.adj.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut orbit = vec![start];
            let mut i = 0;
            while i < orbit.len() {
                let s = orbit[i];
                for p in &perms {
                    let t = p[s];
                    if !seen[t] {
                        seen[t] = true;
                        orbit.push(t);
                    }
                }
                i += 1;
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        Ok(out)
    }

    pub fn orbit_decomposition(&self, gens: &[FreeWord]) -> Result<Vec<usize>, StallingsError> {
        Ok(self.orbits(gens)?.iter().map(Vec::len).collect())
    }

    /// Shortlex-minimal words reaching each state, with the spanning tree
    /// they define. Works on any core graph.
    pub fn schreier_basis(&self) -> SchreierBasis {
        let n = self.adj.len();
        let mut transversal: Vec<Option<FreeWord>> = vec![None; n];
        let mut tree = vec![[false; 2]; n];
        transversal[0] = Some(FreeWord::identity());
        let mut queue = VecDeque::from([0usize]);
        while let Some(s) = queue.pop_front() {
            let ts = transversal[s].clone().expect("visited");
            for l in Letter::ALL {
                if let Some(t) = self.adj[s][l.index()] {
                    if transversal[t].is_none() {
                        transversal[t] = Some(ts.mul(&FreeWord::from_letters([l])));
                        let (from, g) = if l.is_inverse() { (t, l.gen()) } else { (s, l.gen()) };
                        tree[from][g.index()] = true;
                        queue.push_back(t);
                    }
                }
            }
        }
        let transversal: Vec<FreeWord> = transversal
            .into_iter()
            .map(|t| t.expect("core graphs are connected"))
            .collect();
        let mut basis = Vec::new();
        let mut edge_index = BTreeMap::new();
        for s in 0..n {
            for g in Gen::ALL {
                if let Some(t) = self.adj[s][Letter::pos(g).index()] {
                    if !tree[s][g.index()] {
                        edge_index.insert((s, g), basis.len());
                        basis.push(
                            transversal[s]
                                .mul(&FreeWord::gen(g))
                                .mul(&transversal[t].inverse()),
                        );
                    }
                }
            }
        }
        SchreierBasis {
            transversal,
            basis,
            edge_index,
        }
    }

    /// Canonical representative of the right coset `H w`: the shortlex
    /// minimal element. Off the core, the coset is a vertex in a hanging
    /// tree and the unread suffix of `w` is its path from the core.
    pub fn coset_reduce(&self, w: &FreeWord) -> FreeWord {
        let (state, consumed) = self.read_prefix(w);
        let prefix = self.shortlex_word_to(state);
        let suffix = FreeWord::from_letters(w.letters()[consumed..].iter().copied());
        prefix.mul(&suffix)
    }

    /// Shortlex-minimal path label from the basepoint to `target`.
    pub fn shortlex_word_to(&self, target: usize) -> FreeWord {
        // BFS with predecessor links; discovery order is shortlex order
        let n = self.adj.len();
        let mut pred: Vec<Option<(usize, Letter)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(s) = queue.pop_front() {
            if s == target {
                break;
            }
            for l in Letter::ALL {
                if let Some(t) = self.adj[s][l.index()] {
                    if !seen[t] {
                        seen[t] = true;
                        pred[t] = Some((s, l));
                        queue.push_back(t);
                    }
                }
            }
        }
        let mut letters = Vec::new();
        let mut cur = target;
        while let Some((p, l)) = pred[cur] {
            letters.push(l);
            cur = p;
        }
        letters.reverse();
        FreeWord::from_letters(letters)
    }
}

/// Folded core of the subgroup generated by `gens`.
pub fn graph_from_generators(gens: &[FreeWord]) -> SubgroupGraph {
    let mut adj: Vec<Row> = vec![[None; 4]];
    let mut edges: Vec<(usize, Letter, usize)> = Vec::new();
    for g in gens {
        if g.is_identity() {
            continue;
        }
        let mut cur = 0;
        let letters = g.letters();
        for (i, &l) in letters.iter().enumerate() {
            let next = if i + 1 == letters.len() {
                0
            } else {
                adj.push([None; 4]);
                adj.len() - 1
            };
            edges.push((cur, l, next));
            cur = next;
        }
    }
    let mut folder = Folder::new(adj);
    for (u, l, v) in edges {
        folder.link(u, l, v);
        folder.drain();
    }
    let (adj, base) = folder.finish(0);
    let (adj, base) = trim(adj, base);
    canonical(&adj, base)
}

/// Cayley graph of `Z/n` for a surjective `f`; represents `ker f`.
pub fn kernel_graph(f: &CyclicHom) -> Result<SubgroupGraph, StallingsError> {
    if !f.is_surjective() {
        return Err(StallingsError::NotSurjective(*f));
    }
    let n = f.modulus() as usize;
    let adj: Vec<Row> = (0..n)
        .map(|i| {
            let mut row = [None; 4];
            for l in Letter::ALL {
                row[l.index()] = Some((i + f.letter_image(l) as usize) % n);
            }
            row
        })
        .collect();
    Ok(canonical(&adj, 0))
}

pub fn membership(g: &SubgroupGraph, w: &FreeWord) -> bool {
    g.contains(w)
}

/// Core of the basepointed product graph; represents the intersection.
pub fn intersect(g1: &SubgroupGraph, g2: &SubgroupGraph) -> SubgroupGraph {
    let mut ids: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut pairs = vec![(0usize, 0usize)];
    ids.insert((0, 0), 0);
    let mut adj: Vec<Row> = vec![[None; 4]];
    let mut i = 0;
    while i < pairs.len() {
        let (a, b) = pairs[i];
        for l in Letter::ALL {
            if let (Some(a2), Some(b2)) = (g1.step(a, l), g2.step(b, l)) {
                let id = *ids.entry((a2, b2)).or_insert_with(|| {
                    pairs.push((a2, b2));
                    adj.push([None; 4]);
                    pairs.len() - 1
                });
                adj[i][l.index()] = Some(id);
            }
        }
        i += 1;
    }
    SubgroupGraph::from_raw(adj, 0)
}

/// Homomorphism from a subgroup to `Z/m`, given on its Schreier basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisHom {
    pub modulus: u64,
    pub images: Vec<u64>,
}

impl BasisHom {
    pub fn new(modulus: u64, images: &[i64]) -> BasisHom {
        let m = modulus as i64;
        BasisHom {
            modulus,
            images: images.iter().map(|v| v.rem_euclid(m) as u64).collect(),
        }
    }

    /// Evaluates on a rewritten exponent vector.
    pub fn apply_vector(&self, v: &[i64]) -> u64 {
        let m = self.modulus as i64;
        v.iter()
            .zip(&self.images)
            .map(|(&e, &im)| e * im as i64)
            .sum::<i64>()
            .rem_euclid(m) as u64
    }
}

/// Coset table of `ker(inner)` as a subgroup of `F`, where `inner` is a
/// homomorphism from the finite-index subgroup `outer` given on
/// `outer.schreier_basis()`.
pub fn coset_extension(
    outer: &SubgroupGraph,
    inner: &BasisHom,
) -> Result<SubgroupGraph, StallingsError> {
    let d = outer.finite_index()?;
    let sb = outer.schreier_basis();
    if inner.images.len() != sb.basis.len() {
        return Err(StallingsError::BasisMismatch {
            expected: sb.basis.len(),
            got: inner.images.len(),
        });
    }
    let m = inner.modulus as usize;
    let mut adj: Vec<Row> = vec![[None; 4]; d * m];
    for s in 0..d {
        for g in Gen::ALL {
            let t = outer.step(s, Letter::pos(g)).expect("complete");
            let shift = sb
                .edge_index
                .get(&(s, g))
                .map_or(0, |&k| inner.images[k] as usize);
            for r in 0..m {
                let from = s * m + r;
                let to = t * m + (r + shift) % m;
                adj[from][Letter::pos(g).index()] = Some(to);
                adj[to][Letter::neg(g).index()] = Some(from);
            }
        }
    }
    Ok(SubgroupGraph::from_raw(adj, 0))
}

/// Spanning-tree data for Reidemeister–Schreier rewriting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchreierBasis {
    /// Shortlex-minimal word reaching each state.
    pub transversal: Vec<FreeWord>,
    /// Free basis, one element per non-tree positive edge.
    pub basis: Vec<FreeWord>,
    /// Non-tree edge `(state, generator)` to its basis position.
    pub edge_index: BTreeMap<(usize, Gen), usize>,
}

impl SchreierBasis {
    /// Exponent vector of `w` in the free basis (abelianised rewrite).
    /// `None` if `w` does not label a closed path at the basepoint.
    pub fn rewrite(&self, g: &SubgroupGraph, w: &FreeWord) -> Option<Vec<i64>> {
        let mut v = vec![0i64; self.basis.len()];
        let mut s = 0;
        for &l in w.letters() {
            let t = g.step(s, l)?;
            let (from, sign) = if l.is_inverse() { (t, -1) } else { (s, 1) };
            if let Some(&k) = self.edge_index.get(&(from, l.gen())) {
                v[k] += sign;
            }
            s = t;
        }
        (s == 0).then_some(v)
    }

    /// Non-abelian rewrite: the sequence of signed basis indices.
    pub fn rewrite_word(&self, g: &SubgroupGraph, w: &FreeWord) -> Option<Vec<(usize, i64)>> {
        let mut out: Vec<(usize, i64)> = Vec::new();
        let mut s = 0;
        for &l in w.letters() {
            let t = g.step(s, l)?;
            let (from, sign) = if l.is_inverse() { (t, -1) } else { (s, 1) };
            if let Some(&k) = self.edge_index.get(&(from, l.gen())) {
                if out.last() == Some(&(k, -sign)) {
                    out.pop();
                } else {
                    out.push((k, sign));
                }
            }
            s = t;
        }
        (s == 0).then_some(out)
    }
}

/// Invariant factors of the abelianisation of `H / <<extra_relators>>`.
pub fn abelianized_quotient(
    g: &SubgroupGraph,
    extra_relators: &[FreeWord],
) -> Result<IntegerMatrixNF, StallingsError> {
    Ok(relation_smith_form(g, extra_relators)?.0.invariant_factors())
}

fn relation_smith_form(
    g: &SubgroupGraph,
    relators: &[FreeWord],
) -> Result<(crate::snf::SmithForm, SchreierBasis), StallingsError> {
    let sb = g.schreier_basis();
    let mut rows = Vec::new();
    for r in relators {
        let v = sb
            .rewrite(g, r)
            .ok_or_else(|| StallingsError::NotInSubgroup(r.clone()))?;
        rows.push(v.into_iter().map(BigInt::from).collect::<Vec<_>>());
    }
    let snf = smith_normal_form(&rows, sb.basis.len());
    Ok((snf, sb))
}

/// The fibration homomorphism `Gamma_2 -> Z/6` and the data defining it.
#[derive(Debug, Clone)]
pub struct FibrationHom {
    /// `ker(x -> 1, h -> 1 mod 2)`.
    pub gamma2: SubgroupGraph,
    pub schreier: SchreierBasis,
    pub hom: BasisHom,
    /// Projection onto the free part of `H1`, before reduction mod 6.
    pub integral: Vec<i64>,
}

impl FibrationHom {
    /// Value on an element of `Gamma_2`, `None` outside it.
    pub fn apply(&self, w: &FreeWord) -> Option<u64> {
        self.schreier
            .rewrite(&self.gamma2, w)
            .map(|v| self.hom.apply_vector(&v))
    }
}

/// Meridian lifts `h^2` and `(h x h x^-2)^2` in `Gamma_2`.
pub fn filled_meridians_gamma2() -> Vec<FreeWord> {
    let h = FreeWord::h();
    let m2 = FreeWord::parse("h x h x^-2").expect("literal");
    vec![h.pow(2), m2.pow(2)]
}

/// Derives `Gamma_2 -> Z/6` as the projection of `Gamma_2` onto the free
/// part of `H1` of the filled double cover, reduced mod 6. The sign is fixed
/// so that the first basis element with nonzero image lands in `[1, 3]`.
pub fn derive_fibration_hom() -> Result<FibrationHom, StallingsError> {
    let gamma2 = kernel_graph(&CyclicHom::pi_2())?;
    let (snf, schreier) = relation_smith_form(&gamma2, &filled_meridians_gamma2())?;
    let nf = snf.invariant_factors();
    if nf.factors().len() != 1 || !nf.factors()[0].is_zero() {
        return Err(StallingsError::NotInfiniteCyclic(nf));
    }
    let functional = snf.free_functionals().remove(0);
    let mut integral: Vec<i64> = functional
        .iter()
        .map(|v| v.to_i64().expect("small entries"))
        .collect();
    let content = integral.iter().fold(0i64, |g, v| g.gcd(v));
    debug_assert_eq!(content, 1);
    if let Some(first) = integral.iter().map(|v| v.rem_euclid(6)).find(|&r| r != 0) {
        if first > 3 {
            integral.iter_mut().for_each(|v| *v = -*v);
        }
    }
    let hom = BasisHom::new(6, &integral);
    Ok(FibrationHom {
        gamma2,
        schreier,
        hom,
        integral,
    })
}

/// `Lambda = < h, h x h x^-2, (x h x) h^-1 (x h x)^-1 >`.
pub fn lambda_generators() -> Vec<FreeWord> {
    ["h", "h x h x^-2", "(x h x) h^-1 (x h x)^-1"]
        .iter()
        .map(|s| FreeWord::parse(s).expect("literal"))
        .collect()
}

/// Union-find folding of a labelled graph.
struct Folder {
    adj: Vec<Row>,
    parent: Vec<usize>,
    pending: Vec<(usize, usize)>,
}

impl Folder {
    fn new(adj: Vec<Row>) -> Folder {
        let n = adj.len();
        Folder {
            adj,
            parent: (0..n).collect(),
            pending: Vec::new(),
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn link(&mut self, u: usize, l: Letter, v: usize) {
        self.half_link(u, l, v);
        self.half_link(v, l.inverse(), u);
    }

    fn half_link(&mut self, u: usize, l: Letter, v: usize) {
        let u = self.find(u);
        let v = self.find(v);
        match self.adj[u][l.index()] {
            None => self.adj[u][l.index()] = Some(v),
            Some(w) => {
                let w = self.find(w);
                if w != v {
                    self.pending.push((w, v));
                }
            }
        }
    }

    fn drain(&mut self) {
        while let Some((a, b)) = self.pending.pop() {
            let a = self.find(a);
            let b = self.find(b);
            if a == b {
                continue;
            }
            let (keep, gone) = if a < b { (a, b) } else { (b, a) };
            self.parent[gone] = keep;
            let row = std::mem::replace(&mut self.adj[gone], [None; 4]);
            for l in Letter::ALL {
                if let Some(t) = row[l.index()] {
                    self.half_link(keep, l, t);
                }
            }
        }
    }

    /// Re-links every stored edge so that pre-existing conflicts are folded.
    fn fold_all(&mut self) {
        let n = self.adj.len();
        for u in 0..n {
            let row = std::mem::replace(&mut self.adj[u], [None; 4]);
            for l in Letter::ALL {
                if let Some(t) = row[l.index()] {
                    self.link(u, l, t);
                }
            }
            self.drain();
        }
    }

    /// Compacted adjacency over surviving representatives.
    fn finish(mut self, base: usize) -> (Vec<Row>, usize) {
        self.drain();
        let n = self.adj.len();
        let mut new_id = vec![usize::MAX; n];
        let mut count = 0;
        for v in 0..n {
            if self.find(v) == v {
                new_id[v] = count;
                count += 1;
            }
        }
        let mut out = vec![[None; 4]; count];
        for v in 0..n {
            if self.find(v) != v {
                continue;
            }
            for l in Letter::ALL {
                if let Some(t) = self.adj[v][l.index()] {
                    let t = self.find(t);
                    out[new_id[v]][l.index()] = Some(new_id[t]);
                }
            }
        }
        let base = new_id[self.find(base)];
        (out, base)
    }
}

/// Removes hanging trees (non-basepoint states of degree at most one),
/// keeping only the component of the basepoint.
fn trim(mut adj: Vec<Row>, base: usize) -> (Vec<Row>, usize) {
    let n = adj.len();
    let mut alive = vec![true; n];
    loop {
        let mut changed = false;
        for v in 0..n {
            if !alive[v] || v == base {
                continue;
            }
            let deg = adj[v].iter().filter(|e| e.is_some()).count();
            if deg <= 1 {
                alive[v] = false;
                changed = true;
                for l in Letter::ALL {
                    if let Some(t) = adj[v][l.index()].take() {
                        adj[t][l.inverse().index()] = None;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    (adj, base)
}

/// Breadth-first relabelling from `base` in letter order; drops states
/// unreachable from `base`.
fn canonical(adj: &[Row], base: usize) -> SubgroupGraph {
    let n = adj.len();
    let mut id = vec![usize::MAX; n];
    let mut order = vec![base];
    id[base] = 0;
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        for l in Letter::ALL {
            if let Some(t) = adj[v][l.index()] {
                if id[t] == usize::MAX {
                    id[t] = order.len();
                    order.push(t);
                }
            }
        }
        i += 1;
    }
    let out = order
        .iter()
        .map(|&v| {
            let mut row = [None; 4];
            for l in Letter::ALL {
                row[l.index()] = adj[v][l.index()].map(|t| id[t]);
            }
            row
        })
        .collect();
    SubgroupGraph { adj: out }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> FreeWord {
        FreeWord::parse(s).unwrap()
    }

    fn lambda() -> SubgroupGraph {
        graph_from_generators(&lambda_generators())
    }

    #[test]
    fn lambda_is_rank_three_infinite_index() {
        let g = lambda();
        assert_eq!(g.index(), Index::Infinite);
        assert_eq!(g.rank(), 3);
        // an undefined transition witnesses incompleteness
        assert!(g.rows().iter().any(|r| r.iter().any(Option::is_none)));
        for gen in lambda_generators() {
            assert!(g.contains(&gen));
        }
        assert!(g.contains(&w("h x h x^-2")));
        assert!(!g.contains(&w("x")));
    }

    #[test]
    fn whole_and_trivial() {
        let g = graph_from_generators(&[w("x"), w("h")]);
        assert_eq!(g, SubgroupGraph::whole_group());
        assert_eq!(g.index(), Index::Finite(1));
        let t = graph_from_generators(&[]);
        assert_eq!(t, SubgroupGraph::trivial());
        assert_eq!(t.index(), Index::Infinite);
        assert!(t.contains(&FreeWord::identity()));
    }

    #[test]
    fn x_squared_x_cubed_fold_to_x() {
        let g = graph_from_generators(&[w("x^2"), w("x^3")]);
        assert!(g.contains(&w("x")));
        assert_eq!(g, graph_from_generators(&[w("x")]));
        assert_eq!(g.num_states(), 1);
    }

    #[test]
    fn kernels() {
        let g41 = kernel_graph(&CyclicHom::pi_nk(4, 1)).unwrap();
        assert_eq!(g41.index(), Index::Finite(4));
        assert!(g41.contains(&w("h^4")));
        assert!(!g41.contains(&w("h")));
        assert!(g41.contains(&FreeWord::identity()));
        assert_eq!(kernel_graph(&CyclicHom::pi_2()).unwrap().index(), Index::Finite(2));
        assert_eq!(kernel_graph(&CyclicHom::new(1, 0, 0)).unwrap(), SubgroupGraph::whole_group());
        assert!(matches!(
            kernel_graph(&CyclicHom::new(4, 2, 0)),
            Err(StallingsError::NotSurjective(_))
        ));
    }

    #[test]
    fn gamma2_contains_gamma41() {
        let g2 = kernel_graph(&CyclicHom::pi_2()).unwrap();
        let g41 = kernel_graph(&CyclicHom::pi_nk(4, 1)).unwrap();
        assert_eq!(intersect(&g2, &g41), g41);
        assert_eq!(intersect(&g41, &g41), g41);
    }

    #[test]
    fn coset_actions() {
        let g41 = kernel_graph(&CyclicHom::pi_nk(4, 1)).unwrap();
        let p = g41.coset_action(&w("h")).unwrap();
        // a single 4-cycle
        let mut s = 0;
        for _ in 0..4 {
            s = p[s];
        }
        assert_eq!(s, 0);
        assert_ne!(p[0], 0);
        assert_ne!(p[p[0]], 0);
        assert_eq!(g41.coset_action(&FreeWord::identity()).unwrap(), vec![0, 1, 2, 3]);
        let g2 = kernel_graph(&CyclicHom::pi_2()).unwrap();
        assert_eq!(g2.coset_action(&w("h x h x^-2")).unwrap(), vec![1, 0]);
        assert_eq!(
            lambda().coset_action(&w("x")),
            Err(StallingsError::InfiniteIndex)
        );
    }

    #[test]
    fn orbit_examples() {
        let g41 = kernel_graph(&CyclicHom::pi_nk(4, 1)).unwrap();
        assert_eq!(g41.orbit_decomposition(&[w("h")]).unwrap(), vec![4]);
        let g2 = kernel_graph(&CyclicHom::pi_2()).unwrap();
        assert_eq!(g2.orbit_decomposition(&lambda_generators()).unwrap(), vec![2]);
        assert_eq!(
            g41.orbit_decomposition(&[FreeWord::identity()]).unwrap(),
            vec![1, 1, 1, 1]
        );
    }

    #[test]
    fn schreier_bases() {
        let g2 = kernel_graph(&CyclicHom::pi_2()).unwrap();
        let sb = g2.schreier_basis();
        assert_eq!(sb.basis.len(), 3);
        for b in &sb.basis {
            assert_eq!(CyclicHom::pi_2().apply(b), 0);
            assert!(g2.contains(b));
        }
        assert_eq!(sb.transversal, vec![FreeWord::identity(), w("x")]);
        let whole = SubgroupGraph::whole_group().schreier_basis();
        assert_eq!(whole.basis, vec![w("x"), w("h")]);
        let g41 = kernel_graph(&CyclicHom::pi_nk(4, 1)).unwrap();
        assert_eq!(g41.schreier_basis().basis.len(), 5);
    }

    #[test]
    fn coset_reduce_examples() {
        let l = lambda();
        assert!(l.coset_reduce(&w("h")).is_identity());
        assert_eq!(l.coset_reduce(&w("x")), w("x"));
        assert!(l.coset_reduce(&FreeWord::identity()).is_identity());
        // brute force: every word of length <= 1 in the coset of x is >= x
        for cand in [FreeWord::identity(), w("x"), w("x^-1"), w("h"), w("h^-1")] {
            if l.contains(&cand.mul(&w("x").inverse())) {
                assert!(cand >= w("x"));
            }
        }
    }

    #[test]
    fn abelianizations() {
        let g2 = kernel_graph(&CyclicHom::pi_2()).unwrap();
        let nf = abelianized_quotient(&g2, &filled_meridians_gamma2()).unwrap();
        assert_eq!(nf.as_i64(), vec![0]);
        let whole = abelianized_quotient(&SubgroupGraph::whole_group(), &[]).unwrap();
        assert_eq!(whole.as_i64(), vec![0, 0]);
        assert_eq!(
            abelianized_quotient(&g2, &[w("h")]),
            Err(StallingsError::NotInSubgroup(w("h")))
        );
    }

    #[test]
    fn fibration_hom() {
        let fib = derive_fibration_hom().unwrap();
        assert_eq!(fib.apply(&w("h^2")), Some(0));
        assert_eq!(fib.apply(&w("(h x h x^-2)^2")), Some(0));
        assert_eq!(fib.apply(&w("h")), None);
        let gp = coset_extension(&fib.gamma2, &fib.hom).unwrap();
        assert_eq!(gp.index(), Index::Finite(12));
        assert!(gp.contains(&w("h^2")));
        assert!(gp.contains(&w("(h x h x^-2)^2")));
        // m = 1 returns the outer graph
        let trivial = BasisHom::new(1, &[0, 0, 0]);
        assert_eq!(coset_extension(&fib.gamma2, &trivial).unwrap(), fib.gamma2);
        assert!(matches!(
            coset_extension(&fib.gamma2, &BasisHom::new(6, &[1])),
            Err(StallingsError::BasisMismatch { expected: 3, got: 1 })
        ));
    }

    #[test]
    fn diamond_index() {
        let fib = derive_fibration_hom().unwrap();
        let gp = coset_extension(&fib.gamma2, &fib.hom).unwrap();
        let g41 = kernel_graph(&CyclicHom::pi_nk(4, 1)).unwrap();
        assert_eq!(intersect(&g41, &gp).index(), Index::Finite(24));
    }
}
