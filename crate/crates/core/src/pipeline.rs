//! End-to-end computation of the fibered cover of the doubled tetrus and
//! the numbers attached to it.
//!
//! Every stage recomputes its quantities from the group and surface data;
//! where two independent routes exist both are taken and compared.

use num_integer::Integer;
use thiserror::Error;

use crate::amalgam::{AmalgamContext, AmalgamError, EquivariantHom};
use crate::cover::{
    analyze_branched_cover, complete_diamond, genus_from_chi, heegaard_genera, riemann_hurwitz,
    BranchAnalysis, BranchPointDatum, CoverError, MeridianSpec,
};
use crate::stallings::{
    abelianized_quotient, coset_extension, derive_fibration_hom, filled_meridians_gamma2,
    kernel_graph, StallingsError, SubgroupGraph,
};
use crate::surface::chart::{derive_gluing, standard_gluing, AnnulusChart, ChartError, ChartKind};
use crate::surface::complex::{
    build_surface, double_map, double_surface, doubling_involution,
    find_isomorphism, monodromy_map, ComplexError, Topology,
};
use crate::surface::curves::{
    branch_curves, distinct_heights, general_position, lift_link_curves, CurveError,
};
use crate::surface::spin::{check_spin_hypothesis, search_spin_system, spun_fiber_genus, SpinSystem};
use crate::word::{CyclicHom, Letter};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error("invariant `{invariant}` failed: {detail}")]
    Invariant {
        invariant: &'static str,
        detail: String,
    },
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Stallings(#[from] StallingsError),
    #[error(transparent)]
    Amalgam(#[from] AmalgamError),
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

fn ensure(ok: bool, invariant: &'static str, detail: impl FnOnce() -> String) -> Result<(), PipelineError> {
    if ok {
        Ok(())
    } else {
        Err(PipelineError::Invariant {
            invariant,
            detail: detail(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PipelineOptions {
    /// Maximum number of normal arcs per polygon in the spin search.
    pub search_bound: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { search_bound: 2 }
    }
}

/// One cover in the tower, read through its coset table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerLevel {
    pub name: String,
    pub analysis: BranchAnalysis,
    /// Euler characteristic of the preimage of the boundary sphere, branched
    /// over the four tangle endpoints.
    pub boundary_chi: i64,
    /// Genus of that preimage when it is connected.
    pub boundary_genus: Option<i64>,
    /// Index of the doubled subgroup in the doubled group.
    pub doubled_index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexFact {
    pub group: String,
    pub subgroup: String,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceSummary {
    pub fiber: Topology,
    pub monodromy_order: usize,
    pub double: Topology,
    /// Edges fixed by the exchange of the two copies.
    pub involution_fixed_edges: usize,
    pub double_monodromy_order: usize,
    pub link_components: usize,
    pub link_heights: usize,
    pub projected_curves: usize,
    /// The cube of the doubled monodromy fixes each projected curve.
    pub cube_fixes_each: bool,
    /// The other Bezout choice for the `1/3` chart gives an isomorphic
    /// complex.
    pub alternate_bezout_isomorphic: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinSummary {
    pub bound: usize,
    pub candidates: usize,
    pub valid: usize,
    /// Least total geometric intersection count among valid systems.
    pub min_total: usize,
    pub witness: SpinSystem,
    pub branch_points: usize,
    pub fiber_chi: i64,
    pub fiber_genus: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverReport {
    pub levels: Vec<TowerLevel>,
    pub indices: Vec<IndexFact>,
    /// `[F : cover]` through `Gamma_{4,1}` and through `Gamma'`.
    pub tower_index: (usize, usize),
    /// Every meridian has the same local degrees over the fiber product as
    /// over `Gamma_{4,1}`.
    pub filling_compatible: bool,
    pub cover_degree: usize,
    pub base_boundary_genus: i64,
    pub cover_boundary_connected: bool,
    pub cover_boundary_genus: i64,
    /// The same genus as a branched cover of the boundary sphere.
    pub cover_boundary_genus_direct: i64,
    /// Invariant factors of `H1` of the filled double cover.
    pub h1_double_cover: Vec<i64>,
    pub surface: SurfaceSummary,
    pub spin: SpinSummary,
    pub base_splitting_genus: i64,
    pub heegaard: (i64, i64),
}

impl CoverReport {
    pub fn level(&self, name: &str) -> Option<&TowerLevel> {
        self.levels.iter().find(|l| l.name == name)
    }

    pub fn index(&self, group: &str, subgroup: &str) -> Option<usize> {
        self.indices
            .iter()
            .find(|f| f.group == group && f.subgroup == subgroup)
            .map(|f| f.index)
    }
}

/// Each meridian word marks the two endpoints of one tangle arc on the
/// boundary sphere.
fn endpoint_data(a: &BranchAnalysis) -> Vec<BranchPointDatum> {
    a.meridians
        .iter()
        .flat_map(|m| [m.datum.clone(), m.datum.clone()])
        .collect()
}

fn tower_level(
    name: &str,
    g: &SubgroupGraph,
    spec: &MeridianSpec,
) -> Result<TowerLevel, PipelineError> {
    let analysis = analyze_branched_cover(g, spec)?;
    let boundary_chi = riemann_hurwitz(2, analysis.index, &endpoint_data(&analysis))?;
    let boundary_genus = if analysis.boundary_connected() {
        Some(genus_from_chi(boundary_chi, 0)?)
    } else {
        None
    };
    // the doubled cover has the same degree exactly when the boundary
    // subgroup acts transitively on the cosets
    ensure(
        analysis.boundary_connected(),
        "doubled index equals one-sided index",
        || format!("{name}: boundary orbits {:?}", analysis.boundary_orbits),
    )?;
    Ok(TowerLevel {
        name: name.to_string(),
        doubled_index: analysis.index,
        analysis,
        boundary_chi,
        boundary_genus,
    })
}

/// Whether the cosets of `small` map onto those of `big` compatibly with
/// the action, i.e. `small` lies in `big`.
fn refines(small: &SubgroupGraph, big: &SubgroupGraph) -> bool {
    let proj: Vec<Option<usize>> = (0..small.num_states())
        .map(|s| big.read_from(0, &small.shortlex_word_to(s)))
        .collect();
    (0..small.num_states()).all(|s| {
        Letter::ALL.iter().all(|&l| match (small.step(s, l), proj[s]) {
            (Some(t), Some(ps)) => proj[t] == big.step(ps, l),
            _ => false,
        })
    })
}

/// Transitivity of the boundary subgroup on `Z/n` read off the equivariant
/// homomorphism: the images of its generators generate `Z/n`.
fn lambda_surjects(ctx: &AmalgamContext, f: &CyclicHom) -> bool {
    let e = EquivariantHom::new(f.clone());
    let n = f.modulus();
    let g = ctx
        .lambda_generators()
        .iter()
        .map(|w| e.apply(&crate::amalgam::DoubledWord::plain(w.clone())))
        .fold(n, |g, v| g.gcd(&v));
    g == 1
}

fn surface_stage(
    bound: usize,
) -> Result<(SurfaceSummary, SpinSummary), PipelineError> {
    let table = standard_gluing();
    let f = build_surface(&table)?;
    let ft = f.topology();
    ensure(ft.connected && ft.boundary_components == 1, "fiber surface has one boundary circle", || {
        format!("{ft:?}")
    })?;
    let sigma = monodromy_map(&f)?;
    let monodromy_order = sigma.order(64).ok_or_else(|| PipelineError::Invariant {
        invariant: "monodromy has finite order",
        detail: "no power up to 64 is the identity".into(),
    })?;

    let d = double_surface(&f)?;
    let dt = d.topology();
    ensure(dt.boundary_components == 0 && dt.chi == 2 * ft.chi, "double has chi twice the fiber", || {
        format!("fiber {ft:?}, double {dt:?}")
    })?;
    let ds = double_map(&d, &sigma);
    ds.check(&d)?;
    let tau = doubling_involution(&d);
    ensure(ds.compose(&tau) == tau.compose(&ds), "doubled monodromy commutes with the exchange", String::new)?;
    let double_monodromy_order = ds.order(64).unwrap_or(0);
    ensure(double_monodromy_order == monodromy_order, "doubling preserves the monodromy order", || {
        format!("{double_monodromy_order} vs {monodromy_order}")
    })?;

    let base = branch_curves(&table, &f, &d)?;
    let lift = lift_link_curves(&d, &ds, &base, monodromy_order)?;
    let cube = ds.power(monodromy_order / 2, &d);
    let cube_fixes_each = lift
        .projected
        .iter()
        .all(|c| c.apply_map(&cube).same_set(c));

    let psi_alt = AnnulusChart::new(1, 3, -2, 1, ChartKind::Psi)?;
    let phi12 = AnnulusChart::standard(1, 2, ChartKind::Phi)?;
    let alt = build_surface(&derive_gluing(&psi_alt, &phi12)?)?;
    let alternate_bezout_isomorphic = find_isomorphism(&f, &alt).is_some();

    let surface = SurfaceSummary {
        fiber: ft,
        monodromy_order,
        double: dt,
        involution_fixed_edges: tau.fixed_edges(&d).len(),
        double_monodromy_order,
        link_components: lift.components.len(),
        link_heights: distinct_heights(&lift),
        projected_curves: lift.projected.len(),
        cube_fixes_each,
        alternate_bezout_isomorphic,
    };

    let lambdas = general_position(&d, &lift.projected);
    let result = search_spin_system(&d, &lambdas, bound, None)?;
    let witness = result.best.ok_or_else(|| PipelineError::Invariant {
        invariant: "spin system exists",
        detail: format!("no valid system with at most {bound} arcs per polygon"),
    })?;
    // recheck the witness from scratch
    let recheck = check_spin_hypothesis(&d, &witness.curves, &lambdas)?;
    ensure(recheck == witness.check && recheck.is_valid(), "spin witness rechecks", || {
        format!("{recheck:?}")
    })?;
    let min_total = witness.total;
    let branch_points = 2 * min_total;
    let fiber_genus = spun_fiber_genus(dt.chi, min_total)?;
    let fiber_chi = riemann_hurwitz(
        dt.chi,
        2,
        &vec![BranchPointDatum::new(vec![2]); branch_points],
    )?;
    ensure(genus_from_chi(fiber_chi, 0)? == fiber_genus, "fiber genus by two routes", || {
        format!("chi {fiber_chi}, genus {fiber_genus}")
    })?;
    let spin = SpinSummary {
        bound,
        candidates: result.candidates,
        valid: result.valid,
        min_total,
        witness,
        branch_points,
        fiber_chi,
        fiber_genus,
    };
    Ok((surface, spin))
}

pub fn theorem1_pipeline() -> Result<CoverReport, PipelineError> {
    theorem1_pipeline_with(PipelineOptions::default())
}

pub fn theorem1_pipeline_with(opts: PipelineOptions) -> Result<CoverReport, PipelineError> {
    let spec = MeridianSpec::standard();
    let ctx = AmalgamContext::new();
    let whole = SubgroupGraph::whole_group();
    let pi2 = CyclicHom::pi_2();
    let pi41 = CyclicHom::pi_nk(4, 1);
    let g2 = kernel_graph(&pi2)?;
    let g41 = kernel_graph(&pi41)?;
    let fib = derive_fibration_hom()?;
    let gp = coset_extension(&fib.gamma2, &fib.hom)?;
    let diamond = complete_diamond(&g41, &gp, &spec)?;
    let cover = &diamond.cover;

    let levels = vec![
        tower_level("F", &whole, &spec)?,
        tower_level("Gamma_2", &g2, &spec)?,
        tower_level("Gamma_4_1", &g41, &spec)?,
        tower_level("Gamma_prime", &gp, &spec)?,
        tower_level("Gamma_tilde", cover, &spec)?,
    ];
    for f in [&pi2, &pi41] {
        ensure(lambda_surjects(&ctx, f), "boundary subgroup surjects under the equivariant map", || {
            format!("{f:?}")
        })?;
    }

    let index_of = |name: &str| levels.iter().find(|l| l.name == name).expect("level").analysis.index;
    let fact = |group: &str, sub: &str, index: usize| IndexFact {
        group: group.into(),
        subgroup: sub.into(),
        index,
    };
    let rel = |big: &str, small: &str| -> Result<usize, PipelineError> {
        let (a, b) = (index_of(big), index_of(small));
        ensure(b % a == 0, "relative index is integral", || format!("[{big}:{small}] = {b}/{a}"))?;
        Ok(b / a)
    };
    let indices = vec![
        fact("F", "Gamma_2", index_of("Gamma_2")),
        fact("F", "Gamma_4_1", index_of("Gamma_4_1")),
        fact("F", "Gamma_prime", index_of("Gamma_prime")),
        fact("Gamma_2", "Gamma_prime", rel("Gamma_2", "Gamma_prime")?),
        fact("Gamma_4_1", "Gamma_tilde", diamond.over_g1),
        fact("Gamma_prime", "Gamma_tilde", diamond.over_g2),
        fact("F", "Gamma_tilde", diamond.index),
    ];
    // Gamma' lies in Gamma_2, so the fibration kernel is checked against it
    ensure(refines(&gp, &g2), "Gamma' is contained in Gamma_2", String::new)?;
    let tower_index = (
        index_of("Gamma_4_1") * diamond.over_g1,
        index_of("Gamma_prime") * diamond.over_g2,
    );
    ensure(
        tower_index.0 == diamond.index && tower_index.1 == diamond.index,
        "index multiplicativity around the diamond",
        || format!("{tower_index:?} vs {}", diamond.index),
    )?;
    let filling_compatible = diamond.filling.iter().all(|c| c.compatible);
    ensure(filling_compatible, "filled meridians lift with unchanged local degree", || {
        format!("{:?}", diamond.filling)
    })?;

    let base = levels.iter().find(|l| l.name == "Gamma_4_1").expect("level");
    let top = levels.iter().find(|l| l.name == "Gamma_tilde").expect("level");
    let base_boundary_genus = base.boundary_genus.ok_or_else(|| PipelineError::Invariant {
        invariant: "tetrus boundary is connected",
        detail: format!("{:?}", base.analysis.boundary_orbits),
    })?;
    let cover_degree = diamond.over_g1;
    let cover_boundary_connected = top.analysis.boundary_connected();
    // unbranched cover of the tetrus boundary
    let cover_chi = riemann_hurwitz(base.boundary_chi, cover_degree, &[])?;
    let cover_boundary_genus = genus_from_chi(cover_chi, 0)?;
    let cover_boundary_genus_direct = top.boundary_genus.ok_or_else(|| PipelineError::Invariant {
        invariant: "cover boundary is connected",
        detail: format!("{:?}", top.analysis.boundary_orbits),
    })?;
    ensure(
        cover_boundary_genus == cover_boundary_genus_direct && cover_chi == top.boundary_chi,
        "cover boundary genus by two routes",
        || format!("{cover_boundary_genus} vs {cover_boundary_genus_direct}"),
    )?;

    let h1 = abelianized_quotient(&g2, &filled_meridians_gamma2())?;
    let h1_double_cover = h1.as_i64();

    let (surface, spin) = surface_stage(opts.search_bound)?;

    // a splitting of the tetrus adds one handle to its boundary; the double
    // amalgamates two copies along the boundary
    let tetrus_splitting = base_boundary_genus + 1;
    let base_splitting_genus = 2 * tetrus_splitting - base_boundary_genus;
    let doubled_degree = top.doubled_index / base.doubled_index;
    ensure(doubled_degree == cover_degree, "doubled cover has the same degree", || {
        format!("{doubled_degree} vs {cover_degree}")
    })?;
    let heegaard = heegaard_genera(
        spin.fiber_genus,
        cover_boundary_genus,
        doubled_degree as i64,
        base_splitting_genus,
    );

    Ok(CoverReport {
        levels,
        indices,
        tower_index,
        filling_compatible,
        cover_degree,
        base_boundary_genus,
        cover_boundary_connected,
        cover_boundary_genus,
        cover_boundary_genus_direct,
        h1_double_cover,
        surface,
        spin,
        base_splitting_genus,
        heegaard,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_run() {
        let r = theorem1_pipeline().unwrap();
        assert_eq!(r.index("F", "Gamma_2"), Some(2));
        assert_eq!(r.index("F", "Gamma_4_1"), Some(4));
        assert_eq!(r.index("Gamma_2", "Gamma_prime"), Some(6));
        assert_eq!(r.index("Gamma_4_1", "Gamma_tilde"), Some(6));
        assert_eq!(r.index("Gamma_prime", "Gamma_tilde"), Some(2));
        assert_eq!(r.tower_index, (24, 24));
        assert_eq!(r.base_boundary_genus, 3);
        assert!(r.cover_boundary_connected);
        assert_eq!((r.cover_boundary_genus, r.cover_boundary_genus_direct), (13, 13));
        assert_eq!(r.h1_double_cover, vec![0]);
        assert_eq!(r.surface.monodromy_order, 6);
        assert_eq!(r.surface.double.genus, 2);
        assert_eq!((r.surface.link_components, r.surface.link_heights), (12, 12));
        assert_eq!(r.surface.projected_curves, 6);
        assert!(r.surface.cube_fixes_each && r.surface.alternate_bezout_isomorphic);
        assert_eq!((r.spin.min_total, r.spin.branch_points), (16, 32));
        assert_eq!((r.spin.fiber_chi, r.spin.fiber_genus), (-36, 19));
        assert_eq!(r.base_splitting_genus, 5);
        assert_eq!(r.heegaard, (25, 39));
        let g41 = r.level("Gamma_4_1").unwrap();
        let degs: Vec<_> = g41.analysis.meridians.iter().map(|m| m.datum.local_degrees.clone()).collect();
        assert_eq!(degs, vec![vec![4], vec![4]]);
    }
}
