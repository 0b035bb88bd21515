//! Seeded randomized property suites over the whole library.
//!
//! Each suite draws its cases from a ChaCha stream derived from the run seed
//! and the suite name, so a run is reproducible. A failing case is shrunk
//! greedily before it is reported.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::amalgam::{
    amalgam_equal, kernel_decompose, normal_form, AmalgamContext, DoubledWord, EquivariantHom, Side,
};
use crate::cover::{chi_from_genus, genus_from_chi, riemann_hurwitz, BranchPointDatum, CoverError};
use crate::stallings::{
    coset_extension, derive_fibration_hom, graph_from_generators, intersect, kernel_graph,
    SubgroupGraph,
};
use crate::surface::complex::{
    build_f, double_map, double_surface, monodromy_map, CombinatorialMap, PolygonComplex,
};
use crate::surface::curves::{intersection_numbers, trace_midpoint_arcs, Curve};
use crate::word::{CyclicHom, FreeWord, Letter};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    /// Minimized counterexample, if any case failed.
    pub witness: Option<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

impl fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => write!(f, "{}: ok ({} cases)", self.name, self.cases),
            Some(w) => write!(f, "{}: FAILED after {} cases: {}", self.name, self.cases, w),
        }
    }
}

/// Repeatedly replaces `x` by its first failing shrink until none fails.
pub fn minimize<T: Clone>(
    mut x: T,
    shrinks: impl Fn(&T) -> Vec<T>,
    fails: impl Fn(&T) -> bool,
) -> T {
    'outer: loop {
        for y in shrinks(&x) {
            if fails(&y) {
                x = y;
                continue 'outer;
            }
        }
        return x;
    }
}

/// Words obtained by deleting one letter.
pub fn shrink_word(w: &FreeWord) -> Vec<FreeWord> {
    let ls = w.letters();
    (0..ls.len())
        .map(|i| FreeWord::from_letters(ls[..i].iter().chain(&ls[i + 1..]).copied()))
        .collect()
}

/// Lists with one entry dropped or one word shrunk.
pub fn shrink_words(ws: &[FreeWord]) -> Vec<Vec<FreeWord>> {
    let mut out = Vec::new();
    for i in 0..ws.len() {
        let mut v = ws.to_vec();
        v.remove(i);
        out.push(v);
    }
    for i in 0..ws.len() {
        for s in shrink_word(&ws[i]) {
            let mut v = ws.to_vec();
            v[i] = s;
            out.push(v);
        }
    }
    out
}

fn shrink_doubled(w: &DoubledWord) -> Vec<DoubledWord> {
    let syl = w.syllables();
    let mut out = Vec::new();
    for i in 0..syl.len() {
        let mut v = syl.to_vec();
        v.remove(i);
        out.push(DoubledWord::new(v));
    }
    for i in 0..syl.len() {
        for s in shrink_word(&syl[i].1) {
            let mut v = syl.to_vec();
            v[i].1 = s;
            out.push(DoubledWord::new(v));
        }
    }
    out
}

fn rng_for(seed: u64, suite: &str) -> ChaCha8Rng {
    let salt = suite
        .bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    ChaCha8Rng::seed_from_u64(seed ^ salt)
}

pub fn random_word(rng: &mut impl Rng, max_len: usize) -> FreeWord {
    let len = rng.gen_range(0..=max_len);
    FreeWord::from_letters((0..len).map(|_| Letter::ALL[rng.gen_range(0..4)]))
}

fn random_doubled(rng: &mut impl Rng, max_syllables: usize) -> DoubledWord {
    let n = rng.gen_range(1..=max_syllables);
    let mut side = if rng.gen() { Side::Plain } else { Side::Mirror };
    let mut syl = Vec::new();
    for _ in 0..n {
        syl.push((side, random_word(rng, 4)));
        side = side.flip();
    }
    DoubledWord::new(syl)
}

fn fold_confluence(seed: u64, n: usize) -> SuiteResult {
    let mut rng = rng_for(seed, "fold");
    let fails = |gens: &Vec<FreeWord>, order: &[usize], inverted: &[bool]| {
        let shuffled: Vec<FreeWord> = order
            .iter()
            .map(|&i| if inverted[i] { gens[i].inverse() } else { gens[i].clone() })
            .collect();
        graph_from_generators(gens) != graph_from_generators(&shuffled)
    };
    for case in 0..n {
        let k = rng.gen_range(1..=4);
        let gens: Vec<FreeWord> = (0..k).map(|_| random_word(&mut rng, 7)).collect();
        let mut order: Vec<usize> = (0..k).collect();
        order.shuffle(&mut rng);
        let inverted: Vec<bool> = (0..k).map(|_| rng.gen()).collect();
        if fails(&gens, &order, &inverted) {
            // shrinking keeps the permutation, so only letters are removed
            let min = minimize(
                gens,
                |g| {
                    let ls = g.iter().map(shrink_word).collect::<Vec<_>>();
                    ls.iter()
                        .enumerate()
                        .flat_map(|(i, s)| {
                            s.iter().map(move |w| (i, w.clone()))
                        })
                        .map(|(i, w)| {
                            let mut v = g.clone();
                            v[i] = w;
                            v
                        })
                        .collect()
                },
                |g| fails(g, &order, &inverted),
            );
            return failed("fold confluence", case + 1, format!("generators {min:?}, order {order:?}"));
        }
    }
    passed("fold confluence", n)
}

fn passed(name: &'static str, cases: usize) -> SuiteResult {
    SuiteResult {
        name,
        cases,
        witness: None,
    }
}

fn failed(name: &'static str, cases: usize, witness: String) -> SuiteResult {
    SuiteResult {
        name,
        cases,
        witness: Some(witness),
    }
}

/// Finite-index subgroups used by several suites.
fn finite_index_pool() -> Vec<(String, SubgroupGraph)> {
    let mut pool = Vec::new();
    for n in 2..=6u64 {
        for (a, b) in [(1, 0), (0, 1), (1, 1), (1, n as i64 - 1), (2 % n as i64, 1)] {
            let f = CyclicHom::new(n, a, b);
            if let Ok(g) = kernel_graph(&f) {
                pool.push((format!("ker({f:?})"), g));
            }
        }
    }
    if let Ok(fib) = derive_fibration_hom() {
        if let Ok(gp) = coset_extension(&fib.gamma2, &fib.hom) {
            pool.push(("Gamma'".into(), gp));
        }
    }
    pool
}

fn intersect_conjunction(seed: u64, n: usize) -> SuiteResult {
    let mut rng = rng_for(seed, "intersect");
    let pool = finite_index_pool();
    let mut infinite: Vec<(String, SubgroupGraph)> = Vec::new();
    for _ in 0..8 {
        let gens: Vec<FreeWord> = (0..rng.gen_range(1..=3)).map(|_| random_word(&mut rng, 5)).collect();
        infinite.push((format!("<{gens:?}>"), graph_from_generators(&gens)));
    }
    let all: Vec<&(String, SubgroupGraph)> = pool.iter().chain(&infinite).collect();
    let mut cache = std::collections::HashMap::new();
    let mut positive = 0;
    for case in 0..n {
        let i = rng.gen_range(0..all.len());
        let j = rng.gen_range(0..all.len());
        let meet = cache
            .entry((i, j))
            .or_insert_with(|| intersect(&all[i].1, &all[j].1))
            .clone();
        // half the words are drawn from the intersection's own cosets
        let w = if case % 2 == 0 {
            random_word(&mut rng, 12)
        } else {
            let u = meet.shortlex_word_to(rng.gen_range(0..meet.num_states()));
            u.mul(&random_word(&mut rng, 6)).mul(&u.inverse())
        };
        positive += meet.contains(&w) as usize;
        let fails = |w: &FreeWord| {
            meet.contains(w) != (all[i].1.contains(w) && all[j].1.contains(w))
        };
        if fails(&w) {
            let min = minimize(w, shrink_word, fails);
            return failed(
                "intersect membership",
                case + 1,
                format!("{} and {} on word `{min}`", all[i].0, all[j].0),
            );
        }
    }
    if positive == 0 {
        return failed("intersect membership", n, "no sampled word lies in an intersection".into());
    }
    passed("intersect membership", n)
}

/// Rank and orbit checks on every finite-index graph built here.
fn index_formulas(seed: u64, n: usize) -> (SuiteResult, SuiteResult) {
    let mut rng = rng_for(seed, "index");
    let mut pool = finite_index_pool();
    let base = pool.len();
    for _ in 0..n {
        let i = rng.gen_range(0..base);
        let j = rng.gen_range(0..base);
        let g = intersect(&pool[i].1, &pool[j].1);
        pool.push((format!("{} ^ {}", pool[i].0, pool[j].0), g));
    }
    let mut rank_fail = None;
    let mut orbit_fail = None;
    for (name, g) in &pool {
        let Ok(d) = g.finite_index() else {
            rank_fail.get_or_insert_with(|| format!("{name} has infinite index"));
            continue;
        };
        let basis = g.schreier_basis().basis.len();
        if g.rank() != d + 1 || basis != d + 1 {
            rank_fail.get_or_insert_with(|| format!("{name}: index {d}, rank {}, basis {basis}", g.rank()));
        }
        let gens: Vec<FreeWord> = (0..rng.gen_range(1..=3)).map(|_| random_word(&mut rng, 6)).collect();
        match g.orbit_decomposition(&gens) {
            Ok(sizes) if sizes.iter().sum::<usize>() == d => {}
            other => {
                let fails = |gs: &Vec<FreeWord>| {
                    !matches!(g.orbit_decomposition(gs), Ok(s) if s.iter().sum::<usize>() == d)
                };
                let min = minimize(gens.clone(), |v| shrink_words(v), fails);
                orbit_fail.get_or_insert_with(|| format!("{name} under {min:?}: {other:?}"));
            }
        }
    }
    let cases = pool.len();
    let r = |name, w: Option<String>| SuiteResult {
        name,
        cases,
        witness: w,
    };
    (r("Nielsen-Schreier rank", rank_fail), r("orbit sizes sum to index", orbit_fail))
}

fn normal_form_canonical(seed: u64, n: usize) -> SuiteResult {
    let mut rng = rng_for(seed, "normal form");
    let ctx = AmalgamContext::new();
    let lgens = ctx.lambda_generators().to_vec();
    for case in 0..n {
        let a = random_doubled(&mut rng, 4);
        // insert lambda * mirror(lambda)^-1 and u u^-1 at random places
        let mut b = a.syllables().to_vec();
        for _ in 0..rng.gen_range(1..=3) {
            let lambda = (0..rng.gen_range(1..=2)).fold(FreeWord::identity(), |acc, _| {
                let g = &lgens[rng.gen_range(0..lgens.len())];
                acc.mul(&if rng.gen() { g.clone() } else { g.inverse() })
            });
            let u = random_word(&mut rng, 3);
            let side = if rng.gen() { Side::Plain } else { Side::Mirror };
            let at = rng.gen_range(0..=b.len());
            let ins = if rng.gen() {
                vec![(side, lambda.clone()), (side.flip(), lambda.inverse())]
            } else {
                vec![(side, u.clone()), (side, u.inverse())]
            };
            b.splice(at..at, ins);
        }
        let b = DoubledWord::new(b);
        let nf = normal_form(&ctx, &a);
        let ok = nf == normal_form(&ctx, &b)
            && normal_form(&ctx, &nf.to_doubled()) == nf
            && !amalgam_equal(&ctx, &a, &a.mul(&DoubledWord::mirrored(FreeWord::x())));
        if !ok {
            let fails = |w: &DoubledWord| normal_form(&ctx, &normal_form(&ctx, w).to_doubled()) != normal_form(&ctx, w);
            let min = if fails(&a) { minimize(a.clone(), shrink_doubled, fails) } else { a.clone() };
            return failed("normal form canonicality", case + 1, format!("`{min}` vs `{b}`"));
        }
    }
    passed("normal form canonicality", n)
}

fn kernel_decomposition(seed: u64, n: usize) -> SuiteResult {
    let mut rng = rng_for(seed, "kernel");
    let ctx = AmalgamContext::new();
    let homs = [CyclicHom::pi_2(), CyclicHom::pi_nk(4, 1)];
    let to_kernel = |f: &EquivariantHom, w: &DoubledWord| -> DoubledWord {
        let m = f.base.modulus();
        let r = f.apply(w);
        let t = (0..m)
            .find(|t| (r + t * f.base.image(crate::word::Gen::X)) % m == 0)
            .expect("x generates the image");
        w.mul(&DoubledWord::plain(FreeWord::x().pow(t as i64)))
    };
    let sound = |f: &EquivariantHom, w: &DoubledWord| -> bool {
        let Ok(factors) = kernel_decompose(&ctx, f, w) else { return false };
        let product = factors.iter().fold(DoubledWord::identity(), |a, b| a.mul(b));
        factors.iter().all(|x| x.is_single_sided() && f.apply(x) == 0) && amalgam_equal(&ctx, &product, w)
    };
    for case in 0..n {
        let f = EquivariantHom::new(homs[case % homs.len()]);
        let w = to_kernel(&f, &random_doubled(&mut rng, 5));
        if !sound(&f, &w) {
            let min = minimize(
                w,
                |v| shrink_doubled(v).iter().map(|s| to_kernel(&f, s)).collect(),
                |v| !sound(&f, v),
            );
            return failed("kernel decomposition", case + 1, format!("{:?} on `{min}`", f.base));
        }
    }
    passed("kernel decomposition", n)
}

fn parity_guard(seed: u64, n: usize) -> SuiteResult {
    let mut rng = rng_for(seed, "parity");
    for case in 0..n {
        let chi = rng.gen_range(-6..=2i64);
        let degree = rng.gen_range(1..=6usize);
        let branch: Vec<BranchPointDatum> = (0..rng.gen_range(0..=4))
            .map(|_| {
                let mut parts = Vec::new();
                let mut left = degree;
                while left > 0 {
                    let k = rng.gen_range(1..=left);
                    parts.push(k);
                    left -= k;
                }
                BranchPointDatum::new(parts)
            })
            .collect();
        let boundary = rng.gen_range(0..=3usize);
        let expected: i64 = degree as i64 * chi
            - branch.iter().map(|b| (degree - b.preimages()) as i64).sum::<i64>();
        let problem = match riemann_hurwitz(chi, degree, &branch) {
            Ok(c) if c != expected => Some(format!("chi {c}, expected {expected}")),
            Err(e) => Some(format!("rejected consistent data: {e}")),
            Ok(c) => {
                let twice = 2 - boundary as i64 - c;
                match genus_from_chi(c, boundary) {
                    Ok(g) if twice >= 0 && twice % 2 == 0 && chi_from_genus(g, boundary) == c => None,
                    Err(CoverError::Parity { .. }) if twice.rem_euclid(2) == 1 => None,
                    Err(CoverError::NegativeGenus { .. }) if twice < 0 && twice % 2 == 0 => None,
                    other => Some(format!("genus_from_chi({c}, {boundary}) = {other:?}")),
                }
            }
        };
        let bad = BranchPointDatum::new(vec![degree + 1]);
        let guard = riemann_hurwitz(chi, degree, &[bad]).is_err()
            && riemann_hurwitz(chi, degree, &[]) == Ok(degree as i64 * chi);
        if problem.is_some() || !guard {
            let w = problem.unwrap_or_else(|| "inconsistent datum accepted".into());
            return failed(
                "Riemann-Hurwitz parity guard",
                case + 1,
                format!("chi {chi}, degree {degree}, branch {branch:?}, boundary {boundary}: {w}"),
            );
        }
    }
    passed("Riemann-Hurwitz parity guard", n)
}

/// A random closed multicurve through side midpoints: a uniform element of
/// the cycle space of the dual graph, paired randomly in each polygon.
fn random_curves(rng: &mut impl Rng, d: &PolygonComplex) -> Vec<Curve> {
    let np = d.polygons.len();
    let edges = d.edges();
    // spanning tree of the dual graph by BFS
    let mut parent_edge: Vec<Option<usize>> = vec![None; np];
    let mut seen = vec![false; np];
    let mut order = vec![0usize];
    seen[0] = true;
    let mut i = 0;
    while i < order.len() {
        let p = order[i];
        for (e, &(a, s)) in edges.iter().enumerate() {
            let (b, _) = d.partner((a, s)).expect("closed");
            for (x, y) in [(a, b), (b, a)] {
                if x == p && !seen[y] {
                    seen[y] = true;
                    parent_edge[y] = Some(e);
                    order.push(y);
                }
            }
        }
        i += 1;
    }
    let tree: Vec<bool> = (0..edges.len()).map(|e| parent_edge.contains(&Some(e))).collect();
    let mut chosen: Vec<bool> = (0..edges.len()).map(|e| !tree[e] && rng.gen_bool(0.4)).collect();
    let ends = |e: usize| {
        let a = edges[e];
        (a, d.partner(a).expect("closed"))
    };
    for &p in order.iter().rev() {
        let Some(e) = parent_edge[p] else { continue };
        let degree = (0..edges.len())
            .filter(|&f| chosen[f])
            .map(|f| {
                let (a, b) = ends(f);
                (a.0 == p) as usize + (b.0 == p) as usize
            })
            .sum::<usize>();
        if degree % 2 == 1 {
            chosen[e] = true;
        }
    }
    let mut arcs = Vec::new();
    for p in 0..np {
        let mut sides: Vec<usize> = (0..edges.len())
            .filter(|&f| chosen[f])
            .flat_map(|f| {
                let (a, b) = ends(f);
                [a, b]
            })
            .filter(|s| s.0 == p)
            .map(|s| s.1)
            .collect();
        sides.shuffle(rng);
        for pair in sides.chunks(2) {
            arcs.push((p, pair[0], pair[1]));
        }
    }
    trace_midpoint_arcs(d, &arcs).unwrap_or_default()
}

fn intersection_symmetry(seed: u64, n: usize) -> SuiteResult {
    let mut rng = rng_for(seed, "intersection");
    let Ok(f) = build_f() else {
        return failed("intersection symmetry", 0, "fiber surface does not build".into());
    };
    let d = double_surface(&f).expect("F has boundary");
    let ds: CombinatorialMap = double_map(&d, &monodromy_map(&f).expect("monodromy"));
    let mut cases = 0;
    let mut crossing = 0;
    while cases < n {
        let pool: Vec<Curve> = random_curves(&mut rng, &d)
            .into_iter()
            .chain(random_curves(&mut rng, &d))
            .collect();
        if pool.len() < 2 {
            continue;
        }
        let i = rng.gen_range(0..pool.len());
        let mut j = rng.gen_range(0..pool.len() - 1);
        if j >= i {
            j += 1;
        }
        let da = rng.gen_range(1..250);
        let db = rng.gen_range(250..499);
        let a = pool[i].offset(&d, num_rational::Rational64::new(da, 1000));
        let b = pool[j].offset(&d, num_rational::Rational64::new(db, 1000));
        cases += 1;
        let ab = intersection_numbers(&d, &a, &b);
        let ba = intersection_numbers(&d, &b, &a);
        let moved = intersection_numbers(&d, &a.apply_map(&ds), &b.apply_map(&ds));
        let ok = match (&ab, &ba, &moved) {
            (Ok((g1, a1)), Ok((g2, a2)), Ok(m)) => {
                crossing += (*g1 > 0) as usize;
                g1 == g2 && *a1 == -a2 && m == &(*g1, *a1)
            }
            _ => false,
        };
        if !ok {
            return failed(
                "intersection symmetry",
                cases,
                format!("{a:?} and {b:?}: {ab:?}, {ba:?}, after monodromy {moved:?}"),
            );
        }
    }
    if crossing == 0 {
        return failed("intersection symmetry", n, "no sampled pair crosses".into());
    }
    passed("intersection symmetry", n)
}

/// Sizes of the suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SelftestConfig {
    pub seed: u64,
    pub fold_sets: usize,
    pub membership_words: usize,
    pub extra_intersections: usize,
    pub equal_pairs: usize,
    pub kernel_elements: usize,
    pub parity_cases: usize,
    pub curve_pairs: usize,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            seed: 0x5eed,
            fold_sets: 100,
            membership_words: 1000,
            extra_intersections: 40,
            equal_pairs: 500,
            kernel_elements: 200,
            parity_cases: 500,
            curve_pairs: 200,
        }
    }
}

pub fn run_selftest(cfg: &SelftestConfig) -> Vec<SuiteResult> {
    let (rank, orbits) = index_formulas(cfg.seed, cfg.extra_intersections);
    vec![
        fold_confluence(cfg.seed, cfg.fold_sets),
        intersect_conjunction(cfg.seed, cfg.membership_words),
        rank,
        orbits,
        normal_form_canonical(cfg.seed, cfg.equal_pairs),
        kernel_decomposition(cfg.seed, cfg.kernel_elements),
        parity_guard(cfg.seed, cfg.parity_cases),
        intersection_symmetry(cfg.seed, cfg.curve_pairs),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass() {
        let results = run_selftest(&SelftestConfig::default());
        for r in &results {
            assert!(r.passed(), "{r}");
        }
        assert_eq!(results.len(), 8);
    }

    #[test]
    fn minimizer_finds_small_witness() {
        let w = FreeWord::parse("x h x^2 h^-1 x h h").unwrap();
        let fails = |w: &FreeWord| w.letters().iter().filter(|l| l.gen() == crate::word::Gen::H).count() >= 2;
        let min = minimize(w, shrink_word, fails);
        assert_eq!(min.len(), 2);
        assert!(fails(&min));
    }

    #[test]
    fn deterministic() {
        let cfg = SelftestConfig {
            membership_words: 50,
            equal_pairs: 20,
            kernel_elements: 20,
            curve_pairs: 20,
            ..SelftestConfig::default()
        };
        assert_eq!(run_selftest(&cfg), run_selftest(&cfg));
    }

    #[test]
    fn random_curves_are_closed() {
        let d = double_surface(&build_f().unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let total: usize = (0..20).map(|_| random_curves(&mut rng, &d).len()).sum();
        assert!(total > 0);
    }
}
