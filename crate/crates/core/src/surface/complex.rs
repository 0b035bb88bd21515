//! Oriented polygon complexes and their combinatorial automorphisms.
//!
//! Every polygon lists its sides counterclockwise; a point on side `i` has a
//! parameter `t in [0, 1]` running counterclockwise. All identifications
//! reverse the parameter (`t <-> 1 - t`), which is exactly the condition for
//! the glued surface to be oriented compatibly with every polygon.

use std::collections::BTreeMap;

use num_rational::Rational64;
use num_traits::Zero;
use thiserror::Error;

use super::chart::{reduce_turn, turns, ChartError, GluingTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error("identification of {0} preserves orientation")]
    OrientationPreserving(String),
    #[error("gluing is not an involution at polygon {0} side {1}")]
    NotInvolution(usize, usize),
    #[error("nothing to double: the complex is closed")]
    NothingToDouble,
    #[error("map does not respect the gluing at polygon {0} side {1}")]
    NotAutomorphism(usize, usize),
    #[error("label shift inconsistent at polygon {0} side {1}")]
    LabelShift(usize, usize),
    #[error("rotation does not carry {0} onto a polygon")]
    NoImage(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SideData {
    pub label: Option<Rational64>,
    /// Counterclockwise angular extent on the model disk.
    pub start: Rational64,
    pub end: Rational64,
    pub partner: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polygon {
    pub name: String,
    pub sides: Vec<SideData>,
}

impl Polygon {
    pub fn len(&self) -> usize {
        self.sides.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sides.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolygonComplex {
    pub polygons: Vec<Polygon>,
    /// For doubled complexes, the number of polygons in the first copy.
    pub mirror_offset: Option<usize>,
}

/// Summary counts of a complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Topology {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub chi: i64,
    pub boundary_components: usize,
    pub connected: bool,
    pub genus: i64,
}

/// A side of a polygon: `(polygon, side)`.
pub type SideRef = (usize, usize);

impl PolygonComplex {
    pub fn new(polygons: Vec<Polygon>) -> Result<PolygonComplex, ComplexError> {
        let c = PolygonComplex {
            polygons,
            mirror_offset: None,
        };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<(), ComplexError> {
        for (p, poly) in self.polygons.iter().enumerate() {
            for (i, s) in poly.sides.iter().enumerate() {
                if let Some((q, j)) = s.partner {
                    let back = self
                        .polygons
                        .get(q)
                        .and_then(|pq| pq.sides.get(j))
                        .and_then(|sj| sj.partner);
                    if back != Some((p, i)) || (q, j) == (p, i) {
                        return Err(ComplexError::NotInvolution(p, i));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn side(&self, s: SideRef) -> &SideData {
        &self.polygons[s.0].sides[s.1]
    }

    pub fn partner(&self, s: SideRef) -> Option<SideRef> {
        self.side(s).partner
    }

    pub fn num_sides(&self, p: usize) -> usize {
        self.polygons[p].sides.len()
    }

    pub fn sides(&self) -> impl Iterator<Item = SideRef> + '_ {
        self.polygons
            .iter()
            .enumerate()
            .flat_map(|(p, poly)| (0..poly.sides.len()).map(move |i| (p, i)))
    }

    /// One representative per edge: free sides, and the smaller side of
    /// every glued pair.
    pub fn edges(&self) -> Vec<SideRef> {
        self.sides()
            .filter(|&s| self.partner(s).is_none_or(|t| s < t))
            .collect()
    }

    /// Whether `s` is the representative of its edge.
    pub fn is_canonical(&self, s: SideRef) -> bool {
        self.partner(s).is_none_or(|t| s < t)
    }

    pub fn edge_index(&self) -> BTreeMap<SideRef, usize> {
        let mut out = BTreeMap::new();
        for (k, e) in self.edges().into_iter().enumerate() {
            out.insert(e, k);
            if let Some(t) = self.partner(e) {
                out.insert(t, k);
            }
        }
        out
    }

    pub fn free_sides(&self) -> Vec<SideRef> {
        self.sides().filter(|&s| self.partner(s).is_none()).collect()
    }

    pub fn is_closed(&self) -> bool {
        self.free_sides().is_empty()
    }

    /// Vertex classes by union-find over corners. Corner `(p, i)` is the
    /// start of side `i`, equal to the end of side `i - 1`.
    pub fn vertex_classes(&self) -> Vec<Vec<SideRef>> {
        let corners: Vec<SideRef> = self.sides().collect();
        let index: BTreeMap<SideRef, usize> =
            corners.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        let mut parent: Vec<usize> = (0..corners.len()).collect();
        fn find(parent: &mut [usize], mut a: usize) -> usize {
            while parent[a] != a {
                parent[a] = parent[parent[a]];
                a = parent[a];
            }
            a
        }
        for &(p, i) in &corners {
            if let Some((q, j)) = self.partner((p, i)) {
                // start of (p,i) meets end of (q,j), the start of (q, j+1)
                let n = self.num_sides(q);
                let a = index[&(p, i)];
                let b = index[&(q, (j + 1) % n)];
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
        let mut classes: BTreeMap<usize, Vec<SideRef>> = BTreeMap::new();
        for (k, &c) in corners.iter().enumerate() {
            let r = find(&mut parent, k);
            classes.entry(r).or_default().push(c);
        }
        classes.into_values().collect()
    }

    /// Vertex count by walking around each vertex, an independent check of
    /// [`Self::vertex_classes`].
    pub fn vertex_count_by_walk(&self) -> usize {
        let mut seen: BTreeMap<SideRef, bool> = self.sides().map(|c| (c, false)).collect();
        let mut count = 0;
        let corners: Vec<SideRef> = self.sides().collect();
        for &c0 in &corners {
            if seen[&c0] {
                continue;
            }
            count += 1;
            // rotate clockwise from the corner until returning or hitting a
            // free side, then rotate counterclockwise likewise
            let mut c = c0;
            loop {
                seen.insert(c, true);
                // corner c = start of side c.1; the side before it is c.1 - 1
                let n = self.num_sides(c.0);
                let prev = (c.0, (c.1 + n - 1) % n);
                match self.partner(prev) {
                    Some((q, j)) => {
                        // end of prev = start of (q, j)
                        c = (q, j);
                        if c == c0 {
                            break;
                        }
                    }
                    None => break,
                }
            }
            let mut c = c0;
            while let Some((q, j)) = self.partner(c) {
                // start of c = end of (q, j) = corner (q, j + 1)
                let n = self.num_sides(q);
                c = (q, (j + 1) % n);
                if seen[&c] {
                    break;
                }
                seen.insert(c, true);
            }
        }
        count
    }

    /// Cycles of free sides forming the boundary circles.
    pub fn boundary_cycles(&self) -> Vec<Vec<SideRef>> {
        let free = self.free_sides();
        let mut seen: BTreeMap<SideRef, bool> = free.iter().map(|&s| (s, false)).collect();
        let mut out = Vec::new();
        for &s0 in &free {
            if seen[&s0] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut s = s0;
            loop {
                seen.insert(s, true);
                cycle.push(s);
                // walk to the end corner of s and rotate until a free side
                let mut next = (s.0, (s.1 + 1) % self.num_sides(s.0));
                while let Some((q, j)) = self.partner(next) {
                    next = (q, (j + 1) % self.num_sides(q));
                }
                s = next;
                if s == s0 {
                    break;
                }
            }
            out.push(cycle);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        let n = self.polygons.len();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(p) = stack.pop() {
            for s in &self.polygons[p].sides {
                if let Some((q, _)) = s.partner {
                    if !seen[q] {
                        seen[q] = true;
                        stack.push(q);
                    }
                }
            }
        }
        seen.into_iter().all(|b| b)
    }

    pub fn topology(&self) -> Topology {
        let vertices = self.vertex_classes().len();
        let edges = self.edges().len();
        let faces = self.polygons.len();
        let chi = vertices as i64 - edges as i64 + faces as i64;
        let boundary_components = self.boundary_cycles().len();
        let connected = self.is_connected();
        let genus = (2 - boundary_components as i64 - chi) / 2;
        Topology {
            vertices,
            edges,
            faces,
            chi,
            boundary_components,
            connected,
            genus,
        }
    }

    /// Canonical edge-list text: one line per polygon, then one per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (p, poly) in self.polygons.iter().enumerate() {
            let labels: Vec<String> = poly
                .sides
                .iter()
                .map(|s| s.label.map_or("-".to_string(), |l| l.to_string()))
                .collect();
            out.push_str(&format!("polygon {p} {} {}\n", poly.name, labels.join(" ")));
        }
        for (p, i) in self.edges() {
            match self.partner((p, i)) {
                Some((q, j)) => out.push_str(&format!("edge {p}.{i} {q}.{j}\n")),
                None => out.push_str(&format!("edge {p}.{i} free\n")),
            }
        }
        out
    }
}

/// Builds the fiber surface from a gluing table: hexagons first, then
/// squares.
pub fn build_surface(table: &GluingTable) -> Result<PolygonComplex, ComplexError> {
    let mut polygons: Vec<Polygon> = table
        .hexagons
        .iter()
        .chain(&table.squares)
        .map(|d| Polygon {
            name: d.name.clone(),
            sides: d
                .sides
                .iter()
                .map(|s| SideData {
                    label: s.label,
                    start: s.arc.start,
                    end: s.arc.end,
                    partner: None,
                })
                .collect(),
        })
        .collect();
    let nh = table.hexagons.len();
    for &(y, (hi, hs), (si, ss)) in &table.pairs {
        let hx = table.hexagons[hi].sides[hs].arc.x_at_start;
        let sx = table.squares[si].sides[ss].arc.x_at_start;
        // the same chart parameter x meets from both sides; the gluing
        // reverses the counterclockwise parameters iff the charts start at
        // opposite ends
        if hx == sx {
            return Err(ComplexError::OrientationPreserving(format!("label {y}")));
        }
        polygons[hi].sides[hs].partner = Some((nh + si, ss));
        polygons[nh + si].sides[ss].partner = Some((hi, hs));
    }
    PolygonComplex::new(polygons)
}

/// The fiber surface for the standard chart choices.
pub fn build_f() -> Result<PolygonComplex, ComplexError> {
    build_surface(&super::chart::standard_gluing())
}

/// Mirror copy reflected in the real axis, glued to the original along every
/// free side. Mirror polygon `p'` is `p + n`; its side `k` is the reflection
/// of side `len - 1 - k` of `p`.
pub fn double_surface(x: &PolygonComplex) -> Result<PolygonComplex, ComplexError> {
    if x.is_closed() {
        return Err(ComplexError::NothingToDouble);
    }
    let n = x.polygons.len();
    let mirror_side = |p: usize, i: usize| -> SideRef { (p + n, x.num_sides(p) - 1 - i) };
    let mut polygons = x.polygons.clone();
    for (p, poly) in x.polygons.iter().enumerate() {
        let len = poly.sides.len();
        let sides = (0..len)
            .map(|k| {
                let i = len - 1 - k;
                let s = &poly.sides[i];
                SideData {
                    label: s.label,
                    start: reduce_turn(-s.end),
                    end: reduce_turn(-s.start),
                    partner: Some(match s.partner {
                        Some((q, j)) => mirror_side(q, j),
                        None => (p, i),
                    }),
                }
            })
            .collect();
        polygons.push(Polygon {
            name: format!("{}'", poly.name),
            sides,
        });
    }
    for (p, poly) in x.polygons.iter().enumerate() {
        for (i, s) in poly.sides.iter().enumerate() {
            if s.partner.is_none() {
                polygons[p].sides[i].partner = Some(mirror_side(p, i));
            }
        }
    }
    let mut d = PolygonComplex::new(polygons)?;
    d.mirror_offset = Some(n);
    Ok(d)
}

/// A cellular map sending side `i` of polygon `p` to side
/// `sides[p][i]` of polygon `polys[p]`, with the side parameter preserved or
/// reversed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CombinatorialMap {
    pub polys: Vec<usize>,
    pub sides: Vec<Vec<usize>>,
    pub reverses: bool,
}

impl CombinatorialMap {
    pub fn identity(c: &PolygonComplex) -> CombinatorialMap {
        CombinatorialMap {
            polys: (0..c.polygons.len()).collect(),
            sides: c.polygons.iter().map(|p| (0..p.len()).collect()).collect(),
            reverses: false,
        }
    }

    pub fn apply_side(&self, s: SideRef) -> SideRef {
        (self.polys[s.0], self.sides[s.0][s.1])
    }

    pub fn apply_param(&self, t: Rational64) -> Rational64 {
        if self.reverses {
            Rational64::from_integer(1) - t
        } else {
            t
        }
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &CombinatorialMap) -> CombinatorialMap {
        let polys = other.polys.iter().map(|&q| self.polys[q]).collect();
        let sides = other
            .sides
            .iter()
            .enumerate()
            .map(|(p, row)| {
                let q = other.polys[p];
                row.iter().map(|&j| self.sides[q][j]).collect()
            })
            .collect();
        CombinatorialMap {
            polys,
            sides,
            reverses: self.reverses != other.reverses,
        }
    }

    pub fn power(&self, k: usize, c: &PolygonComplex) -> CombinatorialMap {
        let mut out = CombinatorialMap::identity(c);
        for _ in 0..k {
            out = self.compose(&out);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        !self.reverses
            && self.polys.iter().enumerate().all(|(p, &q)| p == q)
            && self
                .sides
                .iter()
                .all(|row| row.iter().enumerate().all(|(i, &j)| i == j))
    }

    /// Smallest positive power equal to the identity, up to `limit`.
    pub fn order(&self, limit: usize) -> Option<usize> {
        let mut m = self.clone();
        for k in 1..=limit {
            if m.is_identity() {
                return Some(k);
            }
            m = self.compose(&m);
        }
        None
    }

    /// Bijective on sides, cyclic on each polygon with the orientation
    /// behaviour declared by `reverses`, and sending glued pairs to glued
    /// pairs and free sides to free sides.
    pub fn check(&self, c: &PolygonComplex) -> Result<(), ComplexError> {
        let n = c.polygons.len();
        let mut hit = vec![false; n];
        for (p, &q) in self.polys.iter().enumerate() {
            if q >= n || hit[q] || c.num_sides(q) != c.num_sides(p) {
                return Err(ComplexError::NotAutomorphism(p, 0));
            }
            hit[q] = true;
            let len = c.num_sides(p);
            let row = &self.sides[p];
            for i in 0..len {
                let step = if self.reverses { len - 1 } else { 1 };
                if row[(i + 1) % len] != (row[i] + step) % len {
                    return Err(ComplexError::NotAutomorphism(p, i));
                }
            }
        }
        for s in c.sides() {
            let image = self.apply_side(s);
            let ok = match c.partner(s) {
                Some(t) => c.partner(image) == Some(self.apply_side(t)),
                None => c.partner(image).is_none(),
            };
            if !ok {
                return Err(ComplexError::NotAutomorphism(s.0, s.1));
            }
        }
        Ok(())
    }

    /// Sides sent to themselves.
    pub fn fixed_sides(&self, c: &PolygonComplex) -> Vec<SideRef> {
        c.sides().filter(|&s| self.apply_side(s) == s).collect()
    }

    /// Edges sent to themselves, as canonical representatives.
    pub fn fixed_edges(&self, c: &PolygonComplex) -> Vec<SideRef> {
        c.edges()
            .into_iter()
            .filter(|&e| {
                let img = self.apply_side(e);
                img == e || Some(img) == c.partner(e)
            })
            .collect()
    }
}

/// Rotation of the model disks by `turn`, carrying each polygon to the one
/// named by `target`.
pub fn rotation_map(
    c: &PolygonComplex,
    turn: Rational64,
    target: impl Fn(usize) -> usize,
) -> Result<CombinatorialMap, ComplexError> {
    let mut sides = Vec::new();
    let mut polys = Vec::new();
    for (p, poly) in c.polygons.iter().enumerate() {
        let q = target(p);
        let dest = &c.polygons[q];
        let row: Option<Vec<usize>> = poly
            .sides
            .iter()
            .map(|s| {
                let start = reduce_turn(s.start + turn);
                let end = reduce_turn(s.end + turn);
                dest.sides
                    .iter()
                    .position(|d| d.start == start && d.end == end)
            })
            .collect();
        let row = row.ok_or_else(|| ComplexError::NoImage(poly.name.clone()))?;
        polys.push(q);
        sides.push(row);
    }
    Ok(CombinatorialMap {
        polys,
        sides,
        reverses: false,
    })
}

/// The first-return map of the fiber surface: a sixth of a turn in every
/// disk, exchanging the two hexagons and cycling the squares.
pub fn monodromy_map(f: &PolygonComplex) -> Result<CombinatorialMap, ComplexError> {
    let names: Vec<&str> = f.polygons.iter().map(|p| p.name.as_str()).collect();
    let find = |name: &str| names.iter().position(|n| *n == name);
    let target = |p: usize| -> usize {
        let name = names[p];
        let k: usize = name[1..].parse().expect("polygon names carry an index");
        let next = if name.starts_with('H') {
            format!("H{}", 1 - k)
        } else {
            format!("S{}", (k + 1) % 3)
        };
        find(&next).expect("target polygon exists")
    };
    let sigma = rotation_map(f, turns(1, 6), target)?;
    sigma.check(f)?;
    let shift = turns(1, 6);
    for s in f.sides() {
        if let Some(l) = f.side(s).label {
            let img = f.side(sigma.apply_side(s)).label;
            if img != Some(reduce_turn(l + shift)) {
                return Err(ComplexError::LabelShift(s.0, s.1));
            }
        }
    }
    Ok(sigma)
}

/// Extends an automorphism of the first copy of a double to both copies.
pub fn double_map(d: &PolygonComplex, m: &CombinatorialMap) -> CombinatorialMap {
    let n = d.mirror_offset.expect("doubled complex");
    let mut polys = m.polys.clone();
    let mut sides = m.sides.clone();
    for p in 0..n {
        let len = d.num_sides(p);
        polys.push(m.polys[p] + n);
        // mirror side k is the reflection of side len-1-k
        let row: Vec<usize> = (0..len)
            .map(|k| {
                let i = len - 1 - k;
                len - 1 - m.sides[p][i]
            })
            .collect();
        sides.push(row);
    }
    CombinatorialMap {
        polys,
        sides,
        reverses: m.reverses,
    }
}

/// Exchange of the two copies of a double.
pub fn doubling_involution(d: &PolygonComplex) -> CombinatorialMap {
    let n = d.mirror_offset.expect("doubled complex");
    let mut polys = Vec::new();
    let mut sides = Vec::new();
    for p in 0..2 * n {
        polys.push(if p < n { p + n } else { p - n });
        let len = d.num_sides(p);
        sides.push((0..len).map(|i| len - 1 - i).collect());
    }
    CombinatorialMap {
        polys,
        sides,
        reverses: true,
    }
}

/// Searches for an orientation-preserving isomorphism `a -> b` that matches
/// free sides to free sides and gluings to gluings.
pub fn find_isomorphism(a: &PolygonComplex, b: &PolygonComplex) -> Option<CombinatorialMap> {
    if a.polygons.len() != b.polygons.len() || !a.is_connected() {
        return None;
    }
    if a.polygons.is_empty() {
        return Some(CombinatorialMap::identity(a));
    }
    let len0 = a.num_sides(0);
    for q0 in 0..b.polygons.len() {
        if b.num_sides(q0) != len0 {
            continue;
        }
        for rot in 0..len0 {
            if let Some(m) = propagate(a, b, q0, rot) {
                return Some(m);
            }
        }
    }
    None
}

fn propagate(a: &PolygonComplex, b: &PolygonComplex, q0: usize, rot: usize) -> Option<CombinatorialMap> {
    let n = a.polygons.len();
    let mut image: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut used = vec![false; n];
    image[0] = Some((q0, rot));
    used[q0] = true;
    let mut stack = vec![0usize];
    while let Some(p) = stack.pop() {
        let (q, r) = image[p].expect("assigned");
        let len = a.num_sides(p);
        for i in 0..len {
            let bi = (q, (i + r) % len);
            match (a.partner((p, i)), b.partner(bi)) {
                (None, None) => {}
                (Some((p2, j)), Some((q2, k))) => {
                    let l2 = a.num_sides(p2);
                    if b.num_sides(q2) != l2 {
                        return None;
                    }
                    let r2 = (k + l2 - j) % l2;
                    match image[p2] {
                        Some(existing) if existing != (q2, r2) => return None,
                        Some(_) => {}
                        None => {
                            if used[q2] {
                                return None;
                            }
                            used[q2] = true;
                            image[p2] = Some((q2, r2));
                            stack.push(p2);
                        }
                    }
                }
                _ => return None,
            }
        }
    }
    let mut polys = Vec::new();
    let mut sides = Vec::new();
    for (p, im) in image.iter().enumerate() {
        let (q, r) = (*im)?;
        let len = a.num_sides(p);
        polys.push(q);
        sides.push((0..len).map(|i| (i + r) % len).collect());
    }
    let m = CombinatorialMap {
        polys,
        sides,
        reverses: false,
    };
    m.check_between(a, b).then_some(m)
}

impl CombinatorialMap {
    fn check_between(&self, a: &PolygonComplex, b: &PolygonComplex) -> bool {
        a.sides().all(|s| {
            let img = self.apply_side(s);
            match a.partner(s) {
                Some(t) => b.partner(img) == Some(self.apply_side(t)),
                None => b.partner(img).is_none(),
            }
        })
    }
}

/// Total angle of each polygon, which must be one full turn.
pub fn angles_close(c: &PolygonComplex) -> bool {
    c.polygons.iter().all(|p| {
        let total: Rational64 = p.sides.iter().map(|s| reduce_turn(s.end - s.start)).sum();
        total == Rational64::from_integer(1) || (p.sides.is_empty() && total.is_zero())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::chart::{derive_gluing, AnnulusChart, ChartKind};

    fn disk() -> PolygonComplex {
        let sides = (0..4)
            .map(|k| SideData {
                label: None,
                start: turns(k, 4),
                end: turns(k + 1, 4),
                partner: None,
            })
            .collect();
        PolygonComplex::new(vec![Polygon {
            name: "D".into(),
            sides,
        }])
        .unwrap()
    }

    #[test]
    fn fiber_surface_is_one_holed_torus() {
        let f = build_f().unwrap();
        let t = f.topology();
        assert_eq!((t.faces, t.edges, t.vertices), (5, 18, 12));
        assert_eq!((t.chi, t.boundary_components, t.genus), (-1, 1, 1));
        assert!(t.connected);
        assert_eq!(f.vertex_count_by_walk(), t.vertices);
        assert_eq!(f.free_sides().len(), 12);
        assert!(angles_close(&f));
    }

    #[test]
    fn monodromy_has_order_six() {
        let f = build_f().unwrap();
        let s = monodromy_map(&f).unwrap();
        assert_eq!(s.order(12), Some(6));
        let s3 = s.power(3, &f);
        for p in 2..5 {
            assert_eq!(s3.polys[p], p);
        }
        assert_eq!(s3.polys[0], 1);
        assert_eq!(s.power(2, &f).order(12), Some(3));
        assert_eq!(f.boundary_cycles().len(), 1);
    }

    #[test]
    fn doubles() {
        let f = build_f().unwrap();
        let d = double_surface(&f).unwrap();
        let t = d.topology();
        assert_eq!((t.chi, t.boundary_components, t.genus), (-2, 0, 2));
        assert_eq!(d.vertex_count_by_walk(), t.vertices);
        assert!(angles_close(&d));
        let tau = doubling_involution(&d);
        tau.check(&d).unwrap();
        assert_eq!(tau.order(4), Some(2));
        assert_eq!(tau.fixed_edges(&d).len(), 12);

        let s = monodromy_map(&f).unwrap();
        let ds = double_map(&d, &s);
        ds.check(&d).unwrap();
        assert_eq!(ds.order(12), Some(6));
        assert_eq!(ds.compose(&tau), tau.compose(&ds));

        let sphere = double_surface(&disk()).unwrap().topology();
        assert_eq!((sphere.chi, sphere.genus), (2, 0));
        assert_eq!(double_surface(&d), Err(ComplexError::NothingToDouble));
    }

    #[test]
    fn alternate_bezout_is_isomorphic() {
        let f = build_f().unwrap();
        let psi13 = AnnulusChart::new(1, 3, -2, 1, ChartKind::Psi).unwrap();
        let phi12 = AnnulusChart::standard(1, 2, ChartKind::Phi).unwrap();
        let g = build_surface(&derive_gluing(&psi13, &phi12).unwrap()).unwrap();
        assert_ne!(f, g);
        let iso = find_isomorphism(&f, &g).unwrap();
        assert_eq!(iso.polys[2..], [2, 3, 4]);
    }

    #[test]
    fn non_isomorphic_detected() {
        let f = build_f().unwrap();
        let d = double_surface(&f).unwrap();
        assert!(find_isomorphism(&f, &d).is_none());
        assert!(find_isomorphism(&f, &disk()).is_none());
    }
}
