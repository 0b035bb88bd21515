//! Transverse-fibering certificates: curve systems meeting every projected
//! link curve with coherent signs, found by exhaustive search over normal
//! multicurves.

use std::collections::{BTreeMap, HashMap};

use num_rational::Rational64;
use rayon::prelude::*;

use super::complex::PolygonComplex;
use super::curves::{chord_crossing, intersection_numbers, Chord, Curve, CurveError};
use crate::cover::{genus_from_chi, riemann_hurwitz, BranchPointDatum, CoverError};

/// Pairwise intersection data and the orientation witness, if one exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpinCheck {
    Valid {
        gamma_signs: Vec<i8>,
        lambda_signs: Vec<i8>,
        /// `(geometric, algebraic)` for each `(gamma, lambda)` pair.
        pairs: Vec<Vec<(usize, i64)>>,
    },
    /// Some link curve meets no system curve.
    Untouched { lambda: usize },
    /// A pair whose crossings carry both signs.
    Incoherent { gamma: usize, lambda: usize },
    /// Pairwise coherent but no global orientation choice works.
    NoOrientation,
}

impl SpinCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, SpinCheck::Valid { .. })
    }
}

pub fn pair_table(
    c: &PolygonComplex,
    gammas: &[Curve],
    lambdas: &[Curve],
) -> Result<Vec<Vec<(usize, i64)>>, CurveError> {
    gammas
        .iter()
        .map(|g| lambdas.iter().map(|l| intersection_numbers(c, g, l)).collect())
        .collect()
}

/// Decides the spinning hypothesis from a pair table: every link curve is
/// met, and some orientation of all curves makes every crossing positive.
pub fn check_pairs(pairs: &[Vec<(usize, i64)>], nlambda: usize) -> SpinCheck {
    let ngamma = pairs.len();
    for j in 0..nlambda {
        if pairs.iter().all(|row| row[j].0 == 0) {
            return SpinCheck::Untouched { lambda: j };
        }
    }
    for (i, row) in pairs.iter().enumerate() {
        for (j, &(geo, alg)) in row.iter().enumerate() {
            if alg.unsigned_abs() as usize != geo {
                return SpinCheck::Incoherent { gamma: i, lambda: j };
            }
        }
    }
    let total = ngamma + nlambda;
    for mask in 0u64..(1u64 << total) {
        let sign = |k: usize| -> i64 { if mask >> k & 1 == 1 { -1 } else { 1 } };
        let ok = pairs.iter().enumerate().all(|(i, row)| {
            row.iter()
                .enumerate()
                .all(|(j, &(_, alg))| alg * sign(i) * sign(ngamma + j) >= 0)
        });
        if ok {
            return SpinCheck::Valid {
                gamma_signs: (0..ngamma).map(|i| sign(i) as i8).collect(),
                lambda_signs: (0..nlambda).map(|j| sign(ngamma + j) as i8).collect(),
                pairs: pairs.to_vec(),
            };
        }
    }
    SpinCheck::NoOrientation
}

pub fn check_spin_hypothesis(
    c: &PolygonComplex,
    gammas: &[Curve],
    lambdas: &[Curve],
) -> Result<SpinCheck, CurveError> {
    Ok(check_pairs(&pair_table(c, gammas, lambdas)?, lambdas.len()))
}

/// Normal arcs in one polygon: weights per side and a non-crossing perfect
/// matching of the points, each chord joining distinct sides. Point `k` on
/// a side of weight `w` sits at `t = k / (w + 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolygonConfig {
    pub weights: Vec<u8>,
    pub chords: Vec<((usize, u8), (usize, u8))>,
}

/// All configurations with at most `bound` chords on a polygon with
/// `nsides` sides, in a fixed order.
pub fn polygon_configs(nsides: usize, bound: usize) -> Vec<PolygonConfig> {
    let mut out = Vec::new();
    let mut weights = vec![0u8; nsides];
    fn rec(
        i: usize,
        budget: usize,
        weights: &mut Vec<u8>,
        out: &mut Vec<PolygonConfig>,
    ) {
        if i == weights.len() {
            let total: usize = weights.iter().map(|&w| w as usize).sum();
            if total % 2 == 0 {
                let points: Vec<(usize, u8)> = weights
                    .iter()
                    .enumerate()
                    .flat_map(|(s, &w)| (1..=w).map(move |k| (s, k)))
                    .collect();
                for m in matchings(&points) {
                    out.push(PolygonConfig {
                        weights: weights.clone(),
                        chords: m,
                    });
                }
            }
            return;
        }
        for w in 0..=budget {
            weights[i] = w as u8;
            rec(i + 1, budget - w, weights, out);
        }
        weights[i] = 0;
    }
    rec(0, 2 * bound, &mut weights, &mut out);
    out
}

/// Non-crossing perfect matchings of points in cyclic order with no chord
/// inside a single side.
fn matchings(points: &[(usize, u8)]) -> Vec<Vec<((usize, u8), (usize, u8))>> {
    if points.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let first = points[0];
    for j in (1..points.len()).step_by(2) {
        if points[j].0 == first.0 {
            continue;
        }
        let inner = matchings(&points[1..j]);
        let outer = matchings(&points[j + 1..]);
        for a in &inner {
            for b in &outer {
                let mut m = vec![(first, points[j])];
                m.extend(a.iter().copied());
                m.extend(b.iter().copied());
                out.push(m);
            }
        }
    }
    out
}

fn weight_groups(configs: &[PolygonConfig]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for (i, c) in configs.iter().enumerate() {
        match out.last_mut() {
            Some((lo, hi)) if configs[*lo].weights == c.weights => *hi = i + 1,
            _ => out.push((i, i + 1)),
        }
    }
    out
}

/// A multicurve found by the search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinSystem {
    pub curves: Vec<Curve>,
    /// Configuration index chosen in each polygon.
    pub configs: Vec<usize>,
    pub total: usize,
    pub check: SpinCheck,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub bound: usize,
    pub candidates: usize,
    pub valid: usize,
    /// Least total geometric count among valid systems, with the first
    /// witness in search order.
    pub best: Option<SpinSystem>,
    /// First valid system, in search order, with the requested total.
    pub target: Option<SpinSystem>,
    pub target_total: Option<usize>,
    /// Number of valid systems for each total.
    pub histogram: BTreeMap<usize, usize>,
}

struct Search<'a> {
    c: &'a PolygonComplex,
    lambdas: &'a [Curve],
    configs: Vec<Vec<PolygonConfig>>,
    /// Ranges of consecutive configurations sharing side weights.
    groups: Vec<Vec<(usize, usize)>>,
    /// Point ids of each chord's ends.
    points: Vec<Vec<Vec<[usize; 2]>>>,
    group_index: Vec<HashMap<Vec<u8>, (usize, usize)>>,
    /// `crossings[p][config][chord][lambda] = (geometric, algebraic)`.
    crossings: Vec<Vec<Vec<Vec<(usize, i64)>>>>,
    /// Edge id of each side.
    edge_of: Vec<Vec<usize>>,
    /// Polygons in assignment order, each adjacent to an earlier one.
    order: Vec<usize>,
    stride: usize,
    nedges: usize,
    max_components: usize,
}

/// Per-worker buffers reused across leaves.
#[derive(Default)]
struct Scratch {
    ends: Vec<[usize; 2]>,
    touched: Vec<usize>,
    chords: Vec<(usize, usize, usize, [usize; 2])>,
    used: Vec<bool>,
    table: Vec<Vec<(usize, i64)>>,
}

#[derive(Default)]
struct Partial {
    scratch: Scratch,
    candidates: usize,
    valid: usize,
    best: Option<SpinSystem>,
    target: Option<SpinSystem>,
    histogram: BTreeMap<usize, usize>,
}

impl Partial {
    fn merge(mut self, other: Partial) -> Partial {
        // `self` precedes `other` in search order
        self.candidates += other.candidates;
        self.valid += other.valid;
        for (k, v) in other.histogram {
            *self.histogram.entry(k).or_default() += v;
        }
        self.best = match (self.best, other.best) {
            (Some(a), Some(b)) => Some(if b.total < a.total { b } else { a }),
            (a, b) => a.or(b),
        };
        self.target = self.target.or(other.target);
        self
    }
}

impl Search<'_> {
    fn point_id(&self, p: usize, (s, k): (usize, u8), w: u8) -> usize {
        let canon = if self.c.is_canonical((p, s)) { k } else { w + 1 - k };
        self.edge_of[p][s] * self.stride + canon as usize
    }

    fn param(&self, p: usize, ci: usize, (s, k): (usize, u8)) -> (usize, Rational64) {
        let w = self.configs[p][ci].weights[s];
        (s, Rational64::new(k as i64, w as i64 + 1))
    }

    fn chord(&self, p: usize, ci: usize, (a, b): ((usize, u8), (usize, u8))) -> Chord {
        Chord {
            poly: p,
            from: self.param(p, ci, a),
            to: self.param(p, ci, b),
        }
    }

    /// Builds the curves of a full assignment by walking chord to chord.
    fn trace(&self, choice: &[usize]) -> Vec<Curve> {
        let mut ends: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        let mut chords: Vec<(usize, (usize, u8), (usize, u8))> = Vec::new();
        for (p, &ci) in choice.iter().enumerate() {
            let cfg = &self.configs[p][ci];
            for &(a, b) in &cfg.chords {
                let id = chords.len();
                chords.push((p, a, b));
                ends.entry(self.point_id(p, a, cfg.weights[a.0])).or_default().push((id, 0));
                ends.entry(self.point_id(p, b, cfg.weights[b.0])).or_default().push((id, 1));
            }
        }
        let mut used = vec![false; chords.len()];
        let mut curves = Vec::new();
        while let Some(start) = used.iter().position(|u| !u) {
            let mut out = Vec::new();
            let (mut id, mut entry) = (start, 0usize);
            loop {
                used[id] = true;
                let (p, a, b) = chords[id];
                let (from, to) = if entry == 0 { (a, b) } else { (b, a) };
                out.push(self.chord(p, choice[p], (from, to)));
                let w = self.configs[p][choice[p]].weights[to.0];
                let (nid, nend) = ends[&self.point_id(p, to, w)]
                    .iter()
                    .copied()
                    .find(|&end| end != (id, 1 - entry))
                    .expect("every point has two chord ends");
                if nid == start {
                    break;
                }
                id = nid;
                entry = nend;
            }
            curves.push(Curve { chords: out });
        }
        curves
    }

    fn evaluate(&self, choice: &[usize], target_total: Option<usize>, acc: &mut Partial) {
        let nl = self.lambdas.len();
        const NONE: usize = usize::MAX;
        let sc = &mut acc.scratch;
        if sc.ends.len() != self.nedges * self.stride {
            sc.ends = vec![[NONE; 2]; self.nedges * self.stride];
        }
        for &pt in &sc.touched {
            sc.ends[pt] = [NONE; 2];
        }
        sc.touched.clear();
        sc.chords.clear();
        // chord list and, per point, the two chord ends meeting there
        for (p, &ci) in choice.iter().enumerate() {
            for (k, &pts) in self.points[p][ci].iter().enumerate() {
                let id = sc.chords.len();
                for (e, &pt) in pts.iter().enumerate() {
                    if sc.ends[pt][0] == NONE {
                        sc.ends[pt][0] = 2 * id + e;
                        sc.touched.push(pt);
                    } else {
                        sc.ends[pt][1] = 2 * id + e;
                    }
                }
                sc.chords.push((p, ci, k, pts));
            }
        }
        if sc.chords.is_empty() {
            return;
        }
        sc.used.clear();
        sc.used.resize(sc.chords.len(), false);
        sc.table.resize(self.max_components, Vec::new());
        for row in sc.table.iter_mut() {
            row.clear();
            row.resize(nl, (0, 0));
        }
        let mut components = 0;
        let mut next_unused = 0;
        loop {
            while next_unused < sc.chords.len() && sc.used[next_unused] {
                next_unused += 1;
            }
            if next_unused == sc.chords.len() {
                break;
            }
            if components == self.max_components {
                return;
            }
            let start = next_unused;
            let row = &mut sc.table[components];
            components += 1;
            let (mut id, mut entry) = (start, 0usize);
            loop {
                sc.used[id] = true;
                let (p, ci, k, pts) = sc.chords[id];
                let sign = if entry == 0 { 1 } else { -1 };
                for (j, &(g, a)) in self.crossings[p][ci][k].iter().enumerate() {
                    row[j].0 += g;
                    row[j].1 += sign * a;
                }
                let exit = 1 - entry;
                let here = sc.ends[pts[exit]];
                let next = if here[0] == 2 * id + exit { here[1] } else { here[0] };
                id = next / 2;
                entry = next % 2;
                if id == start {
                    break;
                }
            }
        }
        let table = &sc.table[..components];
        acc.candidates += 1;
        if (0..nl).any(|j| table.iter().all(|row| row[j].0 == 0))
            || table
                .iter()
                .flatten()
                .any(|&(g, a)| a.unsigned_abs() as usize != g)
        {
            return;
        }
        let table = table.to_vec();
        if !check_pairs(&table, nl).is_valid() {
            return;
        }
        // rebuild the curves and recount from scratch
        let curves = self.trace(choice);
        let pairs = pair_table(self.c, &curves, self.lambdas)
            .expect("search positions avoid the link curves");
        let mut fast = table.clone();
        let mut slow = pairs.clone();
        fast.sort();
        slow.sort();
        assert_eq!(fast, slow, "tabulated crossings disagree with the traced curves");
        let check = check_pairs(&pairs, nl);
        let total: usize = pairs.iter().flatten().map(|p| p.0).sum();
        acc.valid += 1;
        *acc.histogram.entry(total).or_default() += 1;
        let make = || SpinSystem {
            curves: curves.clone(),
            configs: choice.to_vec(),
            total,
            check: check.clone(),
        };
        if acc.best.as_ref().is_none_or(|b| total < b.total) {
            acc.best = Some(make());
        }
        if Some(total) == target_total && acc.target.is_none() {
            acc.target = Some(make());
        }
    }

    fn extend(
        &self,
        level: usize,
        choice: &mut [usize],
        weights: &mut [Option<u8>],
        target_total: Option<usize>,
        acc: &mut Partial,
    ) {
        if level == self.order.len() {
            self.evaluate(choice, target_total, acc);
            return;
        }
        let p = self.order[level];
        let mut key = [0u8; 16];
        let n = self.edge_of[p].len();
        let all_fixed = self.edge_of[p].iter().enumerate().all(|(s, &e)| {
            weights[e].map(|w| key[s] = w).is_some()
        });
        if all_fixed {
            if let Some(&(lo, hi)) = self.group_index[p].get(&key[..n]) {
                for ci in lo..hi {
                    choice[p] = ci;
                    self.extend(level + 1, choice, weights, target_total, acc);
                }
            }
            return;
        }
        for &(lo, hi) in &self.groups[p] {
            let mut set = Vec::new();
            let mut ok = true;
            for (s, &w) in self.configs[p][lo].weights.iter().enumerate() {
                let e = self.edge_of[p][s];
                match weights[e] {
                    Some(x) if x != w => {
                        ok = false;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        weights[e] = Some(w);
                        set.push(e);
                    }
                }
            }
            if ok {
                for ci in lo..hi {
                    choice[p] = ci;
                    self.extend(level + 1, choice, weights, target_total, acc);
                }
            }
            for e in set {
                weights[e] = None;
            }
        }
    }
}

/// Exhaustive search over normal multicurves with at most `bound` chords in
/// every polygon and at most two components. Results are independent of
/// scheduling: partial results are merged in search order.
pub fn search_spin_system(
    c: &PolygonComplex,
    lambdas: &[Curve],
    bound: usize,
    target_total: Option<usize>,
) -> Result<SearchResult, CurveError> {
    let edge_index = c.edge_index();
    let edge_of: Vec<Vec<usize>> = (0..c.polygons.len())
        .map(|p| (0..c.num_sides(p)).map(|s| edge_index[&(p, s)]).collect())
        .collect();
    let configs: Vec<Vec<PolygonConfig>> = (0..c.polygons.len())
        .map(|p| polygon_configs(c.num_sides(p), bound))
        .collect();
    // most-constrained first: next is the polygon with the most sides
    // glued to polygons already placed
    let mut order: Vec<usize> = Vec::new();
    let mut placed = vec![false; c.polygons.len()];
    while order.len() < c.polygons.len() {
        let score = |p: usize| -> (usize, std::cmp::Reverse<usize>) {
            let glued = (0..c.num_sides(p))
                .filter(|&s| c.partner((p, s)).is_some_and(|(q, _)| placed[q]))
                .count();
            (glued, std::cmp::Reverse(p))
        };
        let next = (0..c.polygons.len())
            .filter(|&p| !placed[p])
            .max_by_key(|&p| score(p))
            .expect("unplaced polygon");
        placed[next] = true;
        order.push(next);
    }
    let mut search = Search {
        c,
        lambdas,
        groups: configs.iter().map(|cs| weight_groups(cs)).collect(),
        group_index: configs
            .iter()
            .map(|cs| {
                weight_groups(cs)
                    .into_iter()
                    .map(|(lo, hi)| (cs[lo].weights.clone(), (lo, hi)))
                    .collect()
            })
            .collect(),
        configs,
        crossings: Vec::new(),
        points: Vec::new(),
        edge_of,
        order,
        stride: 2 * bound + 1,
        nedges: c.edges().len(),
        max_components: 2,
    };
    let mut crossings = Vec::new();
    for p in 0..c.polygons.len() {
        let n = c.num_sides(p);
        let mut per_config = Vec::new();
        for (ci, cfg) in search.configs[p].iter().enumerate() {
            let mut per_chord = Vec::new();
            for &ends in &cfg.chords {
                let ch = search.chord(p, ci, ends);
                let mut row = Vec::new();
                for l in lambdas {
                    let (mut g, mut a) = (0usize, 0i64);
                    for lc in l.chords.iter().filter(|lc| lc.poly == p) {
                        if let Some(sign) = chord_crossing(n, &ch, lc)? {
                            g += 1;
                            a += sign;
                        }
                    }
                    row.push((g, a));
                }
                per_chord.push(row);
            }
            per_config.push(per_chord);
        }
        crossings.push(per_config);
    }
    search.crossings = crossings;
    search.points = (0..c.polygons.len())
        .map(|p| {
            search.configs[p]
                .iter()
                .map(|cfg| {
                    cfg.chords
                        .iter()
                        .map(|&(a, b)| {
                            [
                                search.point_id(p, a, cfg.weights[a.0]),
                                search.point_id(p, b, cfg.weights[b.0]),
                            ]
                        })
                        .collect()
                })
                .collect()
        })
        .collect();

    let acc = if search.order.is_empty() || bound == 0 {
        Partial::default()
    } else {
        let root = search.order[0];
        let parts: Vec<Partial> = (0..search.configs[root].len())
            .into_par_iter()
            .map(|ci| {
                let mut acc = Partial::default();
                let mut weights = vec![None; search.nedges];
                for (s, &w) in search.configs[root][ci].weights.iter().enumerate() {
                    weights[search.edge_of[root][s]] = Some(w);
                }
                let mut choice = vec![0; c.polygons.len()];
                choice[root] = ci;
                search.extend(1, &mut choice, &mut weights, target_total, &mut acc);
                acc
            })
            .collect();
        parts.into_iter().fold(Partial::default(), Partial::merge)
    };
    Ok(SearchResult {
        bound,
        candidates: acc.candidates,
        valid: acc.valid,
        best: acc.best,
        target: acc.target,
        target_total,
        histogram: acc.histogram,
    })
}

/// Genus of the double cover of the closed surface of Euler characteristic
/// `chi` branched at the two preimages of each of `count` crossings.
pub fn spun_fiber_genus(chi: i64, count: usize) -> Result<i64, CoverError> {
    let branch = vec![BranchPointDatum::new(vec![2]); 2 * count];
    genus_from_chi(riemann_hurwitz(chi, 2, &branch)?, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::chart::standard_gluing;
    use crate::surface::complex::{build_surface, double_map, double_surface, monodromy_map};
    use crate::surface::curves::{branch_curves, general_position, lift_link_curves};

    fn catalan_free_count(nsides: usize, bound: usize) -> usize {
        // brute force: all weight vectors, all perfect matchings, filtered
        let mut count = 0;
        let mut ws = vec![0usize; nsides];
        loop {
            let total: usize = ws.iter().sum();
            if total % 2 == 0 && total / 2 <= bound {
                let pts: Vec<usize> = ws
                    .iter()
                    .enumerate()
                    .flat_map(|(s, &w)| std::iter::repeat(s).take(w))
                    .collect();
                count += brute_matchings(&pts, &mut vec![false; pts.len()]);
            }
            let mut i = 0;
            loop {
                if i == nsides {
                    return count;
                }
                ws[i] += 1;
                if ws[i] <= 2 * bound {
                    break;
                }
                ws[i] = 0;
                i += 1;
            }
        }
    }

    fn brute_matchings(pts: &[usize], used: &mut Vec<bool>) -> usize {
        let Some(a) = used.iter().position(|u| !u) else { return 1 };
        used[a] = true;
        let mut n = 0;
        for b in a + 1..pts.len() {
            if used[b] || pts[a] == pts[b] {
                continue;
            }
            // points are in cyclic order, so chord (a, b) separates the
            // points strictly between them from the rest
            let inside = (a + 1..b).filter(|&k| !used[k]).count();
            let crosses = (a + 1..b).any(|k| used[k]);
            if inside % 2 == 1 || crosses {
                continue;
            }
            used[b] = true;
            n += brute_matchings(pts, used);
            used[b] = false;
        }
        used[a] = false;
        n
    }

    #[test]
    fn config_counts_match_brute_force() {
        for (n, b) in [(4, 1), (4, 2), (6, 1), (6, 2)] {
            assert_eq!(polygon_configs(n, b).len(), catalan_free_count(n, b), "{n} sides, bound {b}");
        }
        assert_eq!(polygon_configs(6, 2).len(), 121);
        assert_eq!(polygon_configs(4, 2).len(), 27);
    }

    #[test]
    fn configs_are_distinct_and_bounded() {
        let cs = polygon_configs(6, 2);
        let set: std::collections::HashSet<_> = cs.iter().collect();
        assert_eq!(set.len(), cs.len());
        for c in &cs {
            assert!(c.chords.len() <= 2);
            assert!(c.chords.iter().all(|(a, b)| a.0 != b.0));
        }
    }

    #[test]
    fn pair_checks() {
        assert_eq!(check_pairs(&[], 2), SpinCheck::Untouched { lambda: 0 });
        assert_eq!(
            check_pairs(&[vec![(2, 0)]], 1),
            SpinCheck::Incoherent { gamma: 0, lambda: 0 }
        );
        // gamma 0 meets both negatively, gamma 1 meets lambda 1 positively
        let pairs = vec![vec![(1, -1), (1, -1)], vec![(0, 0), (1, 1)]];
        match check_pairs(&pairs, 2) {
            SpinCheck::Valid { gamma_signs, lambda_signs, .. } => {
                for (i, row) in pairs.iter().enumerate() {
                    for (j, &(_, a)) in row.iter().enumerate() {
                        assert!(a * gamma_signs[i] as i64 * lambda_signs[j] as i64 >= 0);
                    }
                }
            }
            other => panic!("{other:?}"),
        }
        // frustrated sign cycle
        let pairs = vec![vec![(1, 1), (1, 1)], vec![(1, 1), (1, -1)]];
        assert_eq!(check_pairs(&pairs, 2), SpinCheck::NoOrientation);
    }

    #[test]
    fn spun_genus() {
        assert_eq!(spun_fiber_genus(-2, 16).unwrap(), 19);
        assert_eq!(spun_fiber_genus(-2, 0).unwrap(), 3);
    }

    #[test]
    fn bound_one_has_no_system() {
        let table = standard_gluing();
        let f = build_surface(&table).unwrap();
        let d = double_surface(&f).unwrap();
        let ds = double_map(&d, &monodromy_map(&f).unwrap());
        let b = branch_curves(&table, &f, &d).unwrap();
        let lift = lift_link_curves(&d, &ds, &b, 6).unwrap();
        let l = general_position(&d, &lift.projected);
        let r = search_spin_system(&d, &l, 1, Some(16)).unwrap();
        assert_eq!(r.valid, 0);
        assert!(r.best.is_none());
        assert!(r.candidates > 0);
    }
}
