//! Closed curves on polygon complexes as cyclic chains of chords.
//!
//! A chord joins two points on distinct sides of one polygon. Points are
//! `(side, t)` with `t` the counterclockwise side parameter; consecutive
//! chords meet at identified points (`t` on one side is `1 - t` on its
//! partner).

use std::collections::BTreeSet;

use num_rational::Rational64;
use num_traits::{One, Zero};
use thiserror::Error;

use super::chart::{reduce_turn, turns, GluingTable};
use super::complex::{CombinatorialMap, PolygonComplex, SideRef};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("chord {0} does not continue across its exit side")]
    Broken(usize),
    #[error("chord {0} leaves through a free side")]
    FreeExit(usize),
    #[error("chord {0} has both ends on one side")]
    Degenerate(usize),
    #[error("arcs fail to close into simple curves: {0}")]
    NotClosed(String),
    #[error("curves share an endpoint in polygon {0}")]
    SharedEndpoint(usize),
    #[error("branch point at angle {angle} on {polygon} is not a side midpoint")]
    NotMidpoint { polygon: String, angle: Rational64 },
    #[error("expected {expected} distinct projected curves, found {found}")]
    ProjectionCount { expected: usize, found: usize },
}

/// Point on side `side` of the chord's polygon.
pub type Endpoint = (usize, Rational64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chord {
    pub poly: usize,
    pub from: Endpoint,
    pub to: Endpoint,
}

impl Chord {
    pub fn reversed(&self) -> Chord {
        Chord {
            poly: self.poly,
            from: self.to,
            to: self.from,
        }
    }

    /// Endpoints as positions on the polygon boundary, `side + t`.
    fn coords(&self) -> (Rational64, Rational64) {
        (coord(self.from), coord(self.to))
    }

    fn unordered(&self) -> (usize, Endpoint, Endpoint) {
        if self.from <= self.to {
            (self.poly, self.from, self.to)
        } else {
            (self.poly, self.to, self.from)
        }
    }
}

fn coord(e: Endpoint) -> Rational64 {
    Rational64::from_integer(e.0 as i64) + e.1
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Curve {
    pub chords: Vec<Chord>,
}

impl Curve {
    /// Validates that the chords close up across the gluing.
    pub fn new(c: &PolygonComplex, chords: Vec<Chord>) -> Result<Curve, CurveError> {
        let n = chords.len();
        for (k, ch) in chords.iter().enumerate() {
            if ch.from.0 == ch.to.0 {
                return Err(CurveError::Degenerate(k));
            }
            let next = &chords[(k + 1) % n];
            let (q, j) = c
                .partner((ch.poly, ch.to.0))
                .ok_or(CurveError::FreeExit(k))?;
            if next.poly != q || next.from != (j, Rational64::one() - ch.to.1) {
                return Err(CurveError::Broken(k));
            }
        }
        Ok(Curve { chords })
    }

    pub fn len(&self) -> usize {
        self.chords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chords.is_empty()
    }

    pub fn reversed(&self) -> Curve {
        Curve {
            chords: self.chords.iter().rev().map(Chord::reversed).collect(),
        }
    }

    pub fn apply_map(&self, m: &CombinatorialMap) -> Curve {
        let ep = |p: usize, e: Endpoint| -> Endpoint { (m.sides[p][e.0], m.apply_param(e.1)) };
        Curve {
            chords: self
                .chords
                .iter()
                .map(|ch| Chord {
                    poly: m.polys[ch.poly],
                    from: ep(ch.poly, ch.from),
                    to: ep(ch.poly, ch.to),
                })
                .collect(),
        }
    }

    /// Slides every point along its edge by `delta`, measured in the
    /// coordinate of the edge's canonical side.
    pub fn offset(&self, c: &PolygonComplex, delta: Rational64) -> Curve {
        let ep = |p: usize, e: Endpoint| -> Endpoint {
            if c.is_canonical((p, e.0)) {
                (e.0, e.1 + delta)
            } else {
                (e.0, e.1 - delta)
            }
        };
        Curve {
            chords: self
                .chords
                .iter()
                .map(|ch| Chord {
                    poly: ch.poly,
                    from: ep(ch.poly, ch.from),
                    to: ep(ch.poly, ch.to),
                })
                .collect(),
        }
    }

    /// Parallel copy on the left of the curve: exit points slide
    /// counterclockwise along their side, entry points clockwise.
    pub fn push_left(&self, delta: Rational64) -> Curve {
        Curve {
            chords: self
                .chords
                .iter()
                .map(|ch| Chord {
                    poly: ch.poly,
                    from: (ch.from.0, ch.from.1 - delta),
                    to: (ch.to.0, ch.to.1 + delta),
                })
                .collect(),
        }
    }

    /// Unoriented chord set; equal keys mean the same subset of the surface.
    pub fn setwise_key(&self) -> Vec<(usize, Endpoint, Endpoint)> {
        let mut v: Vec<_> = self.chords.iter().map(Chord::unordered).collect();
        v.sort();
        v
    }

    /// Key of the oriented curve: rotation starting at the least chord.
    pub fn oriented_key(&self) -> Vec<Chord> {
        let n = self.chords.len();
        let start = (0..n).min_by_key(|&k| self.chords[k]).unwrap_or(0);
        (0..n).map(|k| self.chords[(start + k) % n]).collect()
    }

    pub fn same_set(&self, other: &Curve) -> bool {
        self.setwise_key() == other.setwise_key()
    }

    /// Edges crossed, as canonical sides with multiplicity.
    pub fn edge_crossings(&self, c: &PolygonComplex) -> Vec<SideRef> {
        let mut v: Vec<SideRef> = self
            .chords
            .iter()
            .map(|ch| {
                let s = (ch.poly, ch.to.0);
                if c.is_canonical(s) {
                    s
                } else {
                    c.partner(s).expect("curves cross glued sides")
                }
            })
            .collect();
        v.sort();
        v
    }
}

/// Whether `x` lies in the open counterclockwise arc from `a` to `b` on a
/// boundary of perimeter `n`.
fn in_arc(x: Rational64, a: Rational64, b: Rational64, n: Rational64) -> bool {
    let m = |v: Rational64| v - (v / n).floor() * n;
    let (dx, db) = (m(x - a), m(b - a));
    !dx.is_zero() && dx < db
}

/// Geometric and algebraic intersection numbers of two curves in general
/// position. A crossing counts `+1` when `b` enters `a`'s chord from its
/// right, i.e. when `b`'s chord starts in the counterclockwise arc from
/// `a`'s start to `a`'s end.
pub fn intersection_numbers(
    c: &PolygonComplex,
    a: &Curve,
    b: &Curve,
) -> Result<(usize, i64), CurveError> {
    let mut geo = 0;
    let mut alg = 0;
    for ca in &a.chords {
        let n = c.num_sides(ca.poly);
        for cb in b.chords.iter().filter(|cb| cb.poly == ca.poly) {
            if let Some(sign) = chord_crossing(n, ca, cb)? {
                geo += 1;
                alg += sign;
            }
        }
    }
    Ok((geo, alg))
}

/// Sign of the crossing of two chords of one `n`-gon, if they cross.
pub fn chord_crossing(n: usize, a: &Chord, b: &Chord) -> Result<Option<i64>, CurveError> {
    let n = Rational64::from_integer(n as i64);
    let (a0, a1) = a.coords();
    let (b0, b1) = b.coords();
    if a0 == b0 || a0 == b1 || a1 == b0 || a1 == b1 {
        return Err(CurveError::SharedEndpoint(a.poly));
    }
    let s0 = in_arc(b0, a0, a1, n);
    let s1 = in_arc(b1, a0, a1, n);
    Ok((s0 != s1).then_some(if s0 { 1 } else { -1 }))
}

/// Number of transverse self-crossings; points shared between two chords of
/// the curve are an error.
pub fn self_crossings(c: &PolygonComplex, a: &Curve) -> Result<usize, CurveError> {
    let mut count = 0;
    for (i, ca) in a.chords.iter().enumerate() {
        let n = Rational64::from_integer(c.num_sides(ca.poly) as i64);
        let (a0, a1) = ca.coords();
        for cb in a.chords[i + 1..].iter().filter(|cb| cb.poly == ca.poly) {
            let (b0, b1) = cb.coords();
            if a0 == b0 || a0 == b1 || a1 == b0 || a1 == b1 {
                return Err(CurveError::SharedEndpoint(ca.poly));
            }
            if in_arc(b0, a0, a1, n) != in_arc(b1, a0, a1, n) {
                count += 1;
            }
        }
    }
    Ok(count)
}

pub fn is_simple(c: &PolygonComplex, a: &Curve) -> bool {
    matches!(self_crossings(c, a), Ok(0))
}

pub fn are_disjoint(c: &PolygonComplex, a: &Curve, b: &Curve) -> bool {
    matches!(intersection_numbers(c, a, b), Ok((0, _)))
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CurveSystem {
    pub curves: Vec<Curve>,
}

/// Joins polygon-local arcs `(polygon, side, side)` between side midpoints
/// into closed curves.
pub fn trace_midpoint_arcs(
    c: &PolygonComplex,
    arcs: &[(usize, usize, usize)],
) -> Result<Vec<Curve>, CurveError> {
    let half = Rational64::new(1, 2);
    let mut used = vec![false; arcs.len()];
    let mut curves = Vec::new();
    while let Some(first) = used.iter().position(|u| !u) {
        let mut chords = Vec::new();
        let (p, i, j) = arcs[first];
        let mut cur = (first, p, i, j);
        loop {
            let (k, p, i, j) = cur;
            used[k] = true;
            chords.push(Chord {
                poly: p,
                from: (i, half),
                to: (j, half),
            });
            let (q, s) = c
                .partner((p, j))
                .ok_or_else(|| CurveError::NotClosed(format!("arc exits free side {p}.{j}")))?;
            let next = arcs.iter().enumerate().find_map(|(m, &(ap, ai, aj))| {
                if ap != q {
                    None
                } else if ai == s {
                    Some((m, ap, ai, aj))
                } else if aj == s {
                    Some((m, ap, aj, ai))
                } else {
                    None
                }
            });
            match next {
                Some((m, ..)) if m == first => break,
                Some(n) if used[n.0] => {
                    return Err(CurveError::NotClosed(format!("arc {} reused", n.0)))
                }
                Some(n) => cur = n,
                None => {
                    return Err(CurveError::NotClosed(format!(
                        "no arc continues at {q}.{s}"
                    )))
                }
            }
        }
        curves.push(Curve::new(c, chords)?);
    }
    Ok(curves)
}

/// A branch-locus curve at a normalized height in the fiber direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchCurve {
    pub curve: Curve,
    pub height: Rational64,
}

/// Side of polygon `p` of the model surface whose angular span contains
/// `angle` at its midpoint.
fn midpoint_side(
    c: &PolygonComplex,
    p: usize,
    angle: Rational64,
) -> Result<usize, CurveError> {
    let poly = &c.polygons[p];
    for (i, s) in poly.sides.iter().enumerate() {
        let len = reduce_turn(s.end - s.start);
        let off = reduce_turn(angle - s.start);
        if off < len {
            if off * 2 == len {
                return Ok(i);
            }
            break;
        }
    }
    Err(CurveError::NotMidpoint {
        polygon: poly.name.clone(),
        angle,
    })
}

/// The fixed set of complex conjugation on the fiber bundle, pushed back
/// along the fibers to the fiber surface and doubled.
///
/// Conjugation fixes `z` real on the meridian disks at `w = 1` and
/// `w = -1`. Each such diameter lies either on a disk of the fiber surface
/// (height 0) or between two of them; in the latter case it is flowed back
/// along the fibers `(z e^{2 pi i p t}, w e^{2 pi i q t})` to the previous
/// disk, and its height is the fraction of the way to the next one.
pub fn branch_curves(
    table: &GluingTable,
    f: &PolygonComplex,
    d: &PolygonComplex,
) -> Result<Vec<BranchCurve>, CurveError> {
    let n = d.mirror_offset.expect("doubled complex");
    let mut arcs: Vec<(Rational64, usize, usize, usize)> = Vec::new();
    let tori: [(&[_], i64, i64, usize); 2] = [
        (&table.hexagons, 1, 3, 0),
        (&table.squares, 1, 2, table.hexagons.len()),
    ];
    for (disks, p, q, base) in tori {
        let step = Rational64::new(1, disks.len() as i64);
        for w in [turns(0, 1), turns(1, 2)] {
            // previous disk in the core-angle order
            let (k, dw) = disks
                .iter()
                .enumerate()
                .map(|(k, dsk)| (k, reduce_turn(w - dsk.w)))
                .min_by_key(|&(_, dw)| dw)
                .expect("nonempty");
            let dtheta = -Rational64::from_integer(p) * dw / Rational64::from_integer(q);
            let height = dw / step;
            let poly = base + k;
            debug_assert_eq!(f.polygons[poly].name, disks[k].name);
            let s0 = midpoint_side(f, poly, reduce_turn(dtheta))?;
            let s1 = midpoint_side(f, poly, reduce_turn(dtheta + Rational64::new(1, 2)))?;
            arcs.push((height, poly, s0, s1));
        }
    }
    let mut heights: Vec<Rational64> = arcs.iter().map(|a| a.0).collect();
    heights.sort();
    heights.dedup();
    let mut out = Vec::new();
    for h in heights {
        let mut local = Vec::new();
        for &(_, p, s0, s1) in arcs.iter().filter(|a| a.0 == h) {
            let len = d.num_sides(p);
            local.push((p, s0, s1));
            local.push((p + n, len - 1 - s0, len - 1 - s1));
        }
        let curves = trace_midpoint_arcs(d, &local)?;
        if curves.len() != 1 {
            return Err(CurveError::NotClosed(format!(
                "height {h} gives {} curves",
                curves.len()
            )));
        }
        out.push(BranchCurve {
            curve: curves.into_iter().next().expect("one curve"),
            height: h,
        });
    }
    Ok(out)
}

/// A component of the lifted link in the sixfold product cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkComponent {
    pub height: Rational64,
    pub base: usize,
    pub power: usize,
    /// Index into [`LinkLift::projected`].
    pub projection: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkLift {
    pub components: Vec<LinkComponent>,
    pub projected: Vec<Curve>,
}

/// Lifts the branch curves to the cover where the monodromy becomes
/// trivial: the component over base curve `c` at sheet `k` sits at height
/// `(k + height(c)) / order` and projects to `m^k (c)`.
pub fn lift_link_curves(
    d: &PolygonComplex,
    m: &CombinatorialMap,
    base: &[BranchCurve],
    expected_projections: usize,
) -> Result<LinkLift, CurveError> {
    let order = m.order(64).expect("finite order monodromy");
    let mut projected: Vec<Curve> = Vec::new();
    let mut components = Vec::new();
    for (b, bc) in base.iter().enumerate() {
        let mut image = bc.curve.clone();
        for k in 0..order {
            let idx = match projected.iter().position(|c| c.same_set(&image)) {
                Some(i) => i,
                None => {
                    projected.push(image.clone());
                    projected.len() - 1
                }
            };
            components.push(LinkComponent {
                height: (Rational64::from_integer(k as i64) + bc.height)
                    / Rational64::from_integer(order as i64),
                base: b,
                power: k,
                projection: idx,
            });
            image = image.apply_map(m);
        }
    }
    let _ = d;
    if projected.len() != expected_projections {
        return Err(CurveError::ProjectionCount {
            expected: expected_projections,
            found: projected.len(),
        });
    }
    components.sort_by_key(|c| c.height);
    Ok(LinkLift {
        components,
        projected,
    })
}

/// Denominator of the general-position offsets.
pub const OFFSET_DENOMINATOR: i64 = 1000;

/// Offsets curve `k` of a family by `(k + 1) / OFFSET_DENOMINATOR`.
pub fn general_position(c: &PolygonComplex, curves: &[Curve]) -> Vec<Curve> {
    curves
        .iter()
        .enumerate()
        .map(|(k, cv)| cv.offset(c, Rational64::new(k as i64 + 1, OFFSET_DENOMINATOR)))
        .collect()
}

/// Distinct heights in a component table.
pub fn distinct_heights(lift: &LinkLift) -> usize {
    lift.components
        .iter()
        .map(|c| c.height)
        .collect::<BTreeSet<_>>()
        .len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::chart::standard_gluing;
    use crate::surface::complex::{
        build_surface, double_map, double_surface, doubling_involution, monodromy_map,
    };

    struct Setup {
        table: GluingTable,
        f: PolygonComplex,
        d: PolygonComplex,
        ds: CombinatorialMap,
    }

    fn setup() -> Setup {
        let table = standard_gluing();
        let f = build_surface(&table).unwrap();
        let d = double_surface(&f).unwrap();
        let ds = double_map(&d, &monodromy_map(&f).unwrap());
        Setup { table, f, d, ds }
    }

    #[test]
    fn branch_curve_shapes() {
        let s = setup();
        let b = branch_curves(&s.table, &s.f, &s.d).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(b[0].height, Rational64::zero());
        assert_eq!(b[1].height, Rational64::new(1, 2));
        assert_eq!(b[0].curve.len(), 6);
        assert_eq!(b[1].curve.len(), 2);
        let tau = doubling_involution(&s.d);
        for bc in &b {
            assert!(is_simple(&s.d, &bc.curve));
            assert!(bc.curve.apply_map(&tau).same_set(&bc.curve));
        }
        assert!(are_disjoint(&s.d, &b[0].curve, &b[1].curve));
        // component B lives in S1 and its mirror, between free sides
        assert!(b[1].curve.chords.iter().all(|c| s.d.polygons[c.poly].name.starts_with("S1")));
    }

    #[test]
    fn lift_gives_six_curves() {
        let s = setup();
        let b = branch_curves(&s.table, &s.f, &s.d).unwrap();
        let lift = lift_link_curves(&s.d, &s.ds, &b, 6).unwrap();
        assert_eq!(lift.components.len(), 12);
        assert_eq!(distinct_heights(&lift), 12);
        let cube = s.ds.power(3, &s.d);
        for c in &lift.projected {
            assert!(c.apply_map(&cube).same_set(c));
        }
        // closed under the monodromy
        for c in &lift.projected {
            let img = c.apply_map(&s.ds);
            assert!(lift.projected.iter().any(|p| p.same_set(&img)));
        }
    }

    #[test]
    fn intersection_basics() {
        let s = setup();
        let b = branch_curves(&s.table, &s.f, &s.d).unwrap();
        let a = &b[0].curve;
        let pushed = a.push_left(Rational64::new(1, 100));
        Curve::new(&s.d, pushed.chords.clone()).unwrap();
        assert_eq!(intersection_numbers(&s.d, a, &pushed).unwrap(), (0, 0));
        assert!(intersection_numbers(&s.d, a, a).is_err());
        let lift = lift_link_curves(&s.d, &s.ds, &b, 6).unwrap();
        let curves = general_position(&s.d, &lift.projected);
        for x in &curves {
            for y in &curves {
                if std::ptr::eq(x, y) {
                    continue;
                }
                let (g1, a1) = intersection_numbers(&s.d, x, y).unwrap();
                let (g2, a2) = intersection_numbers(&s.d, y, x).unwrap();
                assert_eq!(g1, g2);
                assert_eq!(a1, -a2);
                assert!(a1.unsigned_abs() as usize <= g1);
                let (g3, a3) = intersection_numbers(
                    &s.d,
                    &x.apply_map(&s.ds),
                    &y.apply_map(&s.ds),
                )
                .unwrap();
                assert_eq!((g3, a3), (g1, a1));
            }
        }
    }

    #[test]
    fn broken_curve_rejected() {
        let s = setup();
        let b = branch_curves(&s.table, &s.f, &s.d).unwrap();
        let mut chords = b[0].curve.chords.clone();
        chords.pop();
        assert!(Curve::new(&s.d, chords).is_err());
    }
}
