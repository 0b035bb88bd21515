//! Boundary charts of the fibered solid tori and the edge identifications
//! they induce between hexagons and squares.
//!
//! Points of the unit torus are pairs of angles measured in turns and kept
//! as exact rationals reduced into `[0, 1)`.

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChartError {
    #[error("p = {p}, q = {q} are not coprime")]
    NotCoprime { p: i64, q: i64 },
    #[error("a = {a}, b = {b} do not satisfy a p + b q = 1 for p = {p}, q = {q}")]
    BadBezout { p: i64, q: i64, a: i64, b: i64 },
    #[error("chart parameter {0} outside [0, 1]")]
    OutOfRange(Rational64),
    #[error("edge label {0} has no partner")]
    UnmatchedLabel(Rational64),
    #[error("arcs on disk {0} do not tile its boundary")]
    BadTiling(String),
}

pub fn turns(n: i64, d: i64) -> Rational64 {
    reduce_turn(Rational64::new(n, d))
}

/// Reduces an angle into `[0, 1)`.
pub fn reduce_turn(t: Rational64) -> Rational64 {
    t - t.floor()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartKind {
    /// `phi`, parametrising the annulus `A`.
    Phi,
    /// `psi`, parametrising the annulus `B`.
    Psi,
}

/// One of the two boundary charts of the solid torus fibered by
/// `(p, q)`-curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnnulusChart {
    pub p: i64,
    pub q: i64,
    pub a: i64,
    pub b: i64,
    pub kind: ChartKind,
}

impl AnnulusChart {
    pub fn new(p: i64, q: i64, a: i64, b: i64, kind: ChartKind) -> Result<AnnulusChart, ChartError> {
        if p.gcd(&q) != 1 {
            return Err(ChartError::NotCoprime { p, q });
        }
        if a * p + b * q != 1 {
            return Err(ChartError::BadBezout { p, q, a, b });
        }
        Ok(AnnulusChart { p, q, a, b, kind })
    }

    /// The Bezout pair with the least nonnegative `a`.
    pub fn standard(p: i64, q: i64, kind: ChartKind) -> Result<AnnulusChart, ChartError> {
        let a = (0..q.abs().max(1))
            .find(|a| (a * p - 1).rem_euclid(q) == 0)
            .ok_or(ChartError::NotCoprime { p, q })?;
        AnnulusChart::new(p, q, a, (1 - a * p) / q, kind)
    }

    pub fn with_kind(self, kind: ChartKind) -> AnnulusChart {
        AnnulusChart { kind, ..self }
    }

    /// Height shift `a / 2q` applied by `psi`.
    fn shift(&self) -> Rational64 {
        match self.kind {
            ChartKind::Phi => Rational64::zero(),
            ChartKind::Psi => Rational64::new(self.a, 2 * self.q),
        }
    }

    /// Angles `(arg z, arg w)` of the chart image of `(x, y)`.
    pub fn point(&self, x: Rational64, y: Rational64) -> Result<(Rational64, Rational64), ChartError> {
        for v in [x, y] {
            if v < Rational64::zero() || v > Rational64::one() {
                return Err(ChartError::OutOfRange(v));
            }
        }
        let q4 = Rational64::from_integer(4 * self.q);
        let two = Rational64::from_integer(2);
        let one = Rational64::one();
        let spread = match self.kind {
            ChartKind::Phi => (one - two * x) / q4,
            ChartKind::Psi => (two * x + one) / q4,
        };
        let yy = y - self.shift();
        let z = spread + Rational64::from_integer(self.p) * yy;
        let w = Rational64::from_integer(self.q) * yy;
        Ok((reduce_turn(z), reduce_turn(w)))
    }

    /// Heights `y` whose horizontal arc lies on the meridian disk at angle
    /// `w`, in increasing order.
    pub fn heights_over(&self, w: Rational64) -> Vec<Rational64> {
        let q = Rational64::from_integer(self.q);
        let mut ys: Vec<Rational64> = (0..self.q)
            .map(|j| reduce_turn(self.shift() + (w + Rational64::from_integer(j)) / q))
            .collect();
        ys.sort();
        ys
    }

    /// The horizontal arc at height `y`, as `(start, end)` angles on the
    /// disk boundary taken counterclockwise, and the chart parameter `x`
    /// at the start.
    pub fn arc(&self, y: Rational64) -> Result<Arc, ChartError> {
        let (z0, _) = self.point(Rational64::zero(), y)?;
        let (z1, _) = self.point(Rational64::one(), y)?;
        Ok(match self.kind {
            // phi runs clockwise in x
            ChartKind::Phi => Arc {
                start: z1,
                end: z0,
                x_at_start: Rational64::one(),
            },
            ChartKind::Psi => Arc {
                start: z0,
                end: z1,
                x_at_start: Rational64::zero(),
            },
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub start: Rational64,
    pub end: Rational64,
    pub x_at_start: Rational64,
}

/// A side of one of the meridian disks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiskSide {
    pub arc: Arc,
    /// Height under the chart that glues this side, if it is glued.
    pub label: Option<Rational64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disk {
    pub name: String,
    /// Angle of the disk in the core circle.
    pub w: Rational64,
    /// Sides in counterclockwise order starting from the smallest angle.
    pub sides: Vec<DiskSide>,
}

/// Labelled sides of the hexagons and squares, with the chart parameters
/// that fix how glued sides meet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluingTable {
    pub hexagons: Vec<Disk>,
    pub squares: Vec<Disk>,
    pub labels: Vec<Rational64>,
    /// For each label: hexagon index, side, square index, side.
    pub pairs: Vec<(Rational64, (usize, usize), (usize, usize))>,
}

fn disk(
    name: String,
    w: Rational64,
    glued: &AnnulusChart,
    free: &AnnulusChart,
) -> Result<Disk, ChartError> {
    let mut sides = Vec::new();
    for y in glued.heights_over(w) {
        sides.push(DiskSide {
            arc: glued.arc(y)?,
            label: Some(y),
        });
    }
    for y in free.heights_over(w) {
        sides.push(DiskSide {
            arc: free.arc(y)?,
            label: None,
        });
    }
    sides.sort_by_key(|s| s.arc.start);
    // consecutive arcs must abut and alternate glued/free
    let n = sides.len();
    for i in 0..n {
        let next = &sides[(i + 1) % n];
        if sides[i].arc.end != next.arc.start || sides[i].label.is_some() == next.label.is_some() {
            return Err(ChartError::BadTiling(name));
        }
    }
    // both of the boundary circle's charts must cover it exactly once
    let total: Rational64 = sides
        .iter()
        .map(|s| reduce_turn(s.arc.end - s.arc.start))
        .sum();
    if total != Rational64::one() {
        return Err(ChartError::BadTiling(name));
    }
    Ok(Disk { name, w, sides })
}

/// Derives the side identifications of the fiber surface from the charts:
/// hexagons are meridian disks of the `1/3` torus glued along its `B`
/// annulus, squares those of the `1/2` torus glued along its `A` annulus.
pub fn derive_gluing(psi13: &AnnulusChart, phi12: &AnnulusChart) -> Result<GluingTable, ChartError> {
    let psi13 = psi13.with_kind(ChartKind::Psi);
    let phi13 = psi13.with_kind(ChartKind::Phi);
    let phi12 = phi12.with_kind(ChartKind::Phi);
    let psi12 = phi12.with_kind(ChartKind::Psi);

    let hexagons: Vec<Disk> = (0..2)
        .map(|m| disk(format!("H{m}"), turns(m - 1, 2), &psi13, &phi13))
        .collect::<Result<_, _>>()?;
    let squares: Vec<Disk> = (0..3)
        .map(|n| disk(format!("S{n}"), turns(n, 3), &phi12, &psi12))
        .collect::<Result<_, _>>()?;

    let mut labels = Vec::new();
    let mut pairs = Vec::new();
    for (hi, h) in hexagons.iter().enumerate() {
        for (si, side) in h.sides.iter().enumerate() {
            let Some(y) = side.label else { continue };
            labels.push(y);
            let partner = squares.iter().enumerate().find_map(|(qi, sq)| {
                sq.sides
                    .iter()
                    .position(|s| s.label == Some(y))
                    .map(|sj| (qi, sj))
            });
            match partner {
                Some(p) => pairs.push((y, (hi, si), p)),
                None => return Err(ChartError::UnmatchedLabel(y)),
            }
        }
    }
    let square_labels = squares
        .iter()
        .flat_map(|s| s.sides.iter().filter_map(|d| d.label))
        .count();
    if square_labels != labels.len() {
        let mut seen: Vec<Rational64> = labels.clone();
        seen.sort();
        for s in &squares {
            for d in &s.sides {
                if let Some(y) = d.label {
                    if seen.binary_search(&y).is_err() {
                        return Err(ChartError::UnmatchedLabel(y));
                    }
                }
            }
        }
    }
    labels.sort();
    Ok(GluingTable {
        hexagons,
        squares,
        labels,
        pairs,
    })
}

/// Gluing table for the standard Bezout choices.
pub fn standard_gluing() -> GluingTable {
    let psi13 = AnnulusChart::standard(1, 3, ChartKind::Psi).expect("coprime");
    let phi12 = AnnulusChart::standard(1, 2, ChartKind::Phi).expect("coprime");
    derive_gluing(&psi13, &phi12).expect("standard charts tile")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn bezout_validation() {
        assert!(AnnulusChart::new(2, 4, 1, 0, ChartKind::Phi).is_err());
        assert!(AnnulusChart::new(1, 3, 2, 0, ChartKind::Phi).is_err());
        let c = AnnulusChart::standard(1, 3, ChartKind::Psi).unwrap();
        assert_eq!((c.a, c.b), (1, 0));
        let c = AnnulusChart::standard(1, 2, ChartKind::Phi).unwrap();
        assert_eq!((c.a, c.b), (1, 0));
    }

    #[test]
    fn chart_values() {
        let phi = AnnulusChart::standard(1, 2, ChartKind::Phi).unwrap();
        assert_eq!(phi.point(r(1, 2), r(0, 1)).unwrap(), (r(0, 1), r(0, 1)));
        let psi = AnnulusChart::standard(1, 3, ChartKind::Psi).unwrap();
        // z = 1/12 + (1/6 - 1/6), w = 3 (1/6 - 1/6)
        assert_eq!(psi.point(r(0, 1), r(1, 6)).unwrap(), (r(1, 12), r(0, 1)));
        assert!(psi.point(r(2, 1), r(0, 1)).is_err());
    }

    #[test]
    fn conjugation_symmetry() {
        for chart in [
            AnnulusChart::standard(1, 3, ChartKind::Psi).unwrap(),
            AnnulusChart::standard(1, 3, ChartKind::Phi).unwrap(),
            AnnulusChart::standard(1, 2, ChartKind::Psi).unwrap(),
            AnnulusChart::standard(1, 2, ChartKind::Phi).unwrap(),
        ] {
            for xn in 0..=6 {
                for yn in 0..=6 {
                    let (x, y) = (r(xn, 6), r(yn, 6));
                    let (z, w) = chart.point(x, y).unwrap();
                    let (zc, wc) = chart.point(Rational64::one() - x, Rational64::one() - y).unwrap();
                    assert_eq!((reduce_turn(-z), reduce_turn(-w)), (zc, wc));
                }
            }
        }
    }

    #[test]
    fn labels_and_pairs() {
        let g = standard_gluing();
        assert_eq!(g.pairs.len(), 6);
        for h in &g.hexagons {
            assert_eq!(h.sides.len(), 6);
            assert_eq!(h.sides.iter().filter(|s| s.label.is_some()).count(), 3);
        }
        for s in &g.squares {
            assert_eq!(s.sides.len(), 4);
            assert_eq!(s.sides.iter().filter(|s| s.label.is_some()).count(), 2);
        }
        assert_eq!(
            g.labels,
            (0..6).map(|k| r(k, 6)).collect::<Vec<_>>()
        );
        let hex_labels = |m: usize| -> Vec<Rational64> {
            let mut v: Vec<_> = g.hexagons[m].sides.iter().filter_map(|s| s.label).collect();
            v.sort();
            v
        };
        assert_eq!(hex_labels(0), vec![r(0, 1), r(1, 3), r(2, 3)]);
        assert_eq!(hex_labels(1), vec![r(1, 6), r(1, 2), r(5, 6)]);
        let sq_labels = |n: usize| -> Vec<Rational64> {
            let mut v: Vec<_> = g.squares[n].sides.iter().filter_map(|s| s.label).collect();
            v.sort();
            v
        };
        assert_eq!(sq_labels(0), vec![r(0, 1), r(1, 2)]);
        assert_eq!(sq_labels(1), vec![r(1, 6), r(2, 3)]);
        assert_eq!(sq_labels(2), vec![r(1, 3), r(5, 6)]);
    }

    #[test]
    fn alternate_bezout_swaps_hexagon_labels() {
        let psi13 = AnnulusChart::new(1, 3, -2, 1, ChartKind::Psi).unwrap();
        let phi12 = AnnulusChart::standard(1, 2, ChartKind::Phi).unwrap();
        let g = derive_gluing(&psi13, &phi12).unwrap();
        let mut h0: Vec<_> = g.hexagons[0].sides.iter().filter_map(|s| s.label).collect();
        h0.sort();
        assert_eq!(h0, vec![r(1, 6), r(1, 2), r(5, 6)]);
    }
}
