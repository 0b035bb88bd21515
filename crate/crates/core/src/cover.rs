//! Branched-cover bookkeeping over coset tables.
//!
//! A finite-index subgroup of `F(x,h)` is read as a cover of the tangle
//! exterior; orbits of a meridian word on the cosets are the components of
//! its preimage, and the orbit sizes are the local branching degrees once
//! the meridians are filled.

use thiserror::Error;

use crate::stallings::{intersect, lambda_generators, StallingsError, SubgroupGraph};
use crate::word::FreeWord;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error(transparent)]
    Stallings(#[from] StallingsError),
    #[error("branch datum {degrees:?} does not sum to the covering degree {degree}")]
    InconsistentBranch { degree: usize, degrees: Vec<usize> },
    #[error("meridian `{0}` is not in the boundary subgroup")]
    MeridianOutsideBoundary(FreeWord),
    #[error("chi {chi} with {boundary} boundary components has the wrong parity")]
    Parity { chi: i64, boundary: usize },
    #[error("chi {chi} with {boundary} boundary components gives negative genus")]
    NegativeGenus { chi: i64, boundary: usize },
    #[error("covering degree must be positive")]
    ZeroDegree,
    #[error("index arithmetic fails: {0}")]
    IndexMismatch(String),
}

/// Meridian words of the two branch arcs and the boundary subgroup they
/// live in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeridianSpec {
    pub meridians: Vec<(String, FreeWord)>,
    pub boundary: Vec<FreeWord>,
}

impl MeridianSpec {
    pub fn new(
        meridians: Vec<(String, FreeWord)>,
        boundary: Vec<FreeWord>,
    ) -> Result<MeridianSpec, CoverError> {
        let graph = crate::stallings::graph_from_generators(&boundary);
        for (_, m) in &meridians {
            if !graph.contains(m) {
                return Err(CoverError::MeridianOutsideBoundary(m.clone()));
            }
        }
        Ok(MeridianSpec {
            meridians,
            boundary,
        })
    }

    /// Meridians `h` and `h x h x^-2` inside `Lambda`.
    pub fn standard() -> MeridianSpec {
        let meridians = vec![
            ("h".to_string(), FreeWord::h()),
            (
                "hxhx^-2".to_string(),
                FreeWord::parse("h x h x^-2").expect("literal"),
            ),
        ];
        MeridianSpec::new(meridians, lambda_generators()).expect("meridians lie in Lambda")
    }
}

/// Local degrees of the preimages of one branch point (or arc).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BranchPointDatum {
    pub local_degrees: Vec<usize>,
}

impl BranchPointDatum {
    pub fn new(mut local_degrees: Vec<usize>) -> BranchPointDatum {
        local_degrees.sort_unstable();
        BranchPointDatum { local_degrees }
    }

    /// `k` simple preimages each of local degree `degree / k`.
    pub fn uniform(degree: usize, preimages: usize) -> BranchPointDatum {
        BranchPointDatum::new(vec![degree / preimages; preimages])
    }

    pub fn degree(&self) -> usize {
        self.local_degrees.iter().sum()
    }

    pub fn preimages(&self) -> usize {
        self.local_degrees.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeridianOrbits {
    pub name: String,
    pub word: FreeWord,
    pub datum: BranchPointDatum,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchAnalysis {
    pub index: usize,
    pub meridians: Vec<MeridianOrbits>,
    /// Orbit sizes of the boundary subgroup on the cosets.
    pub boundary_orbits: Vec<usize>,
}

impl BranchAnalysis {
    pub fn boundary_components(&self) -> usize {
        self.boundary_orbits.len()
    }

    pub fn boundary_connected(&self) -> bool {
        self.boundary_orbits.len() == 1
    }
}

pub fn analyze_branched_cover(
    g: &SubgroupGraph,
    spec: &MeridianSpec,
) -> Result<BranchAnalysis, CoverError> {
    let index = g.finite_index()?;
    let mut meridians = Vec::new();
    for (name, w) in &spec.meridians {
        let sizes = g.orbit_decomposition(std::slice::from_ref(w))?;
        meridians.push(MeridianOrbits {
            name: name.clone(),
            word: w.clone(),
            datum: BranchPointDatum::new(sizes),
        });
    }
    let boundary_orbits = g.orbit_decomposition(&spec.boundary)?;
    for m in &meridians {
        if m.datum.degree() != index {
            return Err(CoverError::IndexMismatch(format!(
                "orbits of `{}` sum to {} on {} cosets",
                m.word,
                m.datum.degree(),
                index
            )));
        }
    }
    Ok(BranchAnalysis {
        index,
        meridians,
        boundary_orbits,
    })
}

/// Per-meridian comparison of local degrees over the fiber product and over
/// `g1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FillingCheck {
    pub name: String,
    pub over_product: BranchPointDatum,
    pub over_g1: BranchPointDatum,
    /// Every orbit upstairs has the size of the orbit it maps onto.
    pub compatible: bool,
}

#[derive(Debug, Clone)]
pub struct Diamond {
    pub cover: SubgroupGraph,
    pub index: usize,
    pub index_g1: usize,
    pub index_g2: usize,
    pub over_g1: usize,
    pub over_g2: usize,
    pub filling: Vec<FillingCheck>,
}

/// Coset of `g` containing the coset of `cover` at `state`.
fn project_state(cover: &SubgroupGraph, g: &SubgroupGraph, state: usize) -> usize {
    let u = cover.shortlex_word_to(state);
    g.read_from(0, &u).expect("complete graph reads every word")
}

pub fn complete_diamond(
    g1: &SubgroupGraph,
    g2: &SubgroupGraph,
    spec: &MeridianSpec,
) -> Result<Diamond, CoverError> {
    let i1 = g1.finite_index()?;
    let i2 = g2.finite_index()?;
    let cover = intersect(g1, g2);
    let index = cover.finite_index()?;
    if index % i1 != 0 || index % i2 != 0 {
        return Err(CoverError::IndexMismatch(format!(
            "index {index} of the intersection is not a multiple of {i1} and {i2}"
        )));
    }
    // the product automaton must project onto both factors
    for (g, ig) in [(g1, i1), (g2, i2)] {
        let mut fibers = vec![0usize; ig];
        for s in 0..index {
            fibers[project_state(&cover, g, s)] += 1;
        }
        if fibers.iter().any(|&n| n != index / ig) {
            return Err(CoverError::IndexMismatch(format!(
                "fibers of the projection are {fibers:?}"
            )));
        }
    }

    let mut filling = Vec::new();
    for (name, w) in &spec.meridians {
        let upstairs = cover.orbits(std::slice::from_ref(w))?;
        let downstairs = g1.orbits(std::slice::from_ref(w))?;
        let mut orbit_of = vec![0usize; i1];
        for (k, o) in downstairs.iter().enumerate() {
            for &s in o {
                orbit_of[s] = k;
            }
        }
        let compatible = upstairs.iter().all(|o| {
            let image = orbit_of[project_state(&cover, g1, o[0])];
            o.len() == downstairs[image].len()
        });
        filling.push(FillingCheck {
            name: name.clone(),
            over_product: BranchPointDatum::new(upstairs.iter().map(Vec::len).collect()),
            over_g1: BranchPointDatum::new(downstairs.iter().map(Vec::len).collect()),
            compatible,
        });
    }

    Ok(Diamond {
        cover,
        index,
        index_g1: i1,
        index_g2: i2,
        over_g1: index / i1,
        over_g2: index / i2,
        filling,
    })
}

/// Euler characteristic of a degree-`degree` branched cover.
pub fn riemann_hurwitz(
    chi_base: i64,
    degree: usize,
    branch: &[BranchPointDatum],
) -> Result<i64, CoverError> {
    if degree == 0 {
        return Err(CoverError::ZeroDegree);
    }
    let mut chi = degree as i64 * chi_base;
    for b in branch {
        if b.degree() != degree || b.local_degrees.contains(&0) {
            return Err(CoverError::InconsistentBranch {
                degree,
                degrees: b.local_degrees.clone(),
            });
        }
        chi -= (degree - b.preimages()) as i64;
    }
    Ok(chi)
}

/// Genus of a connected orientable surface.
pub fn genus_from_chi(chi: i64, boundary: usize) -> Result<i64, CoverError> {
    let twice = 2 - boundary as i64 - chi;
    if twice.rem_euclid(2) != 0 {
        return Err(CoverError::Parity { chi, boundary });
    }
    if twice < 0 {
        return Err(CoverError::NegativeGenus { chi, boundary });
    }
    Ok(twice / 2)
}

pub fn chi_from_genus(genus: i64, boundary: usize) -> i64 {
    2 - 2 * genus - boundary as i64
}

/// Heegaard genera of the covering manifold: the lift of a base splitting
/// surface along a degree-`cover_degree` cover, and the splitting built from
/// two copies of a fiber. The doubling surface genus is carried for the
/// report only.
pub fn heegaard_genera(
    fiber_genus: i64,
    _doubling_surface_genus: i64,
    cover_degree: i64,
    base_splitting_genus: i64,
) -> (i64, i64) {
    (
        1 + cover_degree * (base_splitting_genus - 1),
        2 * fiber_genus + 1,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stallings::{graph_from_generators, kernel_graph};
    use crate::word::CyclicHom;

    #[test]
    fn whole_group_is_unbranched() {
        let a = analyze_branched_cover(&SubgroupGraph::whole_group(), &MeridianSpec::standard())
            .unwrap();
        assert_eq!(a.index, 1);
        for m in &a.meridians {
            assert_eq!(m.datum.local_degrees, vec![1]);
        }
        assert!(a.boundary_connected());
    }

    #[test]
    fn gamma41_branching() {
        let g = kernel_graph(&CyclicHom::pi_nk(4, 1)).unwrap();
        let a = analyze_branched_cover(&g, &MeridianSpec::standard()).unwrap();
        assert_eq!(a.index, 4);
        for m in &a.meridians {
            assert_eq!(m.datum.local_degrees, vec![4]);
        }
        assert_eq!(a.boundary_components(), 1);
    }

    #[test]
    fn infinite_index_rejected() {
        let g = graph_from_generators(&lambda_generators());
        assert!(matches!(
            analyze_branched_cover(&g, &MeridianSpec::standard()),
            Err(CoverError::Stallings(StallingsError::InfiniteIndex))
        ));
    }

    #[test]
    fn trivial_diamond() {
        let g = kernel_graph(&CyclicHom::pi_2()).unwrap();
        let d = complete_diamond(&g, &g, &MeridianSpec::standard()).unwrap();
        assert_eq!((d.index, d.over_g1, d.over_g2), (2, 1, 1));
        assert!(d.filling.iter().all(|f| f.compatible));
    }

    #[test]
    fn rh_examples() {
        let four = vec![BranchPointDatum::uniform(4, 1); 4];
        assert_eq!(riemann_hurwitz(2, 4, &four), Ok(-4));
        assert_eq!(riemann_hurwitz(-4, 6, &[]), Ok(-24));
        let simple = vec![BranchPointDatum::new(vec![2]); 32];
        assert_eq!(riemann_hurwitz(-2, 2, &simple), Ok(-36));
        assert!(riemann_hurwitz(2, 3, &[BranchPointDatum::new(vec![2])]).is_err());
        assert_eq!(riemann_hurwitz(2, 0, &[]), Err(CoverError::ZeroDegree));
    }

    #[test]
    fn genus_examples() {
        assert_eq!(genus_from_chi(-24, 0), Ok(13));
        assert_eq!(genus_from_chi(2, 0), Ok(0));
        assert_eq!(genus_from_chi(-1, 1), Ok(1));
        assert_eq!(genus_from_chi(-4, 0), Ok(3));
        assert_eq!(genus_from_chi(-5, 0), Err(CoverError::Parity { chi: -5, boundary: 0 }));
        assert!(matches!(genus_from_chi(4, 0), Err(CoverError::NegativeGenus { .. })));
        assert_eq!(chi_from_genus(13, 0), -24);
    }

    #[test]
    fn heegaard_examples() {
        assert_eq!(heegaard_genera(19, 13, 6, 5), (25, 39));
        assert_eq!(heegaard_genera(19, 13, 1, 5).0, 5);
        assert_eq!(heegaard_genera(1, 1, 1, 1).1, 3);
    }
}
