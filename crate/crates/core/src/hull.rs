//! Exact convex hulls and halfspace intersections in two and three
//! dimensions.
//!
//! Halfspace intersections go through polar duality: with an interior point
//! `p`, the constraint `⟨a, x⟩ ≤ b` becomes the dual point `a / (b - ⟨a, p⟩)`,
//! facets of the dual hull are vertices of the intersection.

use crate::error::{Error, Result};
use crate::prelude::*;
use crate::quadrature::CompensatedSum;
use alloc::collections::BTreeMap;

// ---------------------------------------------------------------- 2-D

#[inline]
fn cross2(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Andrew's monotone chain. Returns indices of hull vertices in
/// counter-clockwise order without collinear points. Fewer than three
/// indices means the input is degenerate.
pub fn convex_hull_2d(points: &[[f64; 2]]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).filter(|&i| points[i].iter().all(|x| x.is_finite())).collect();
    idx.sort_by(|&i, &j| {
        points[i][0]
            .partial_cmp(&points[j][0])
            .unwrap()
            .then(points[i][1].partial_cmp(&points[j][1]).unwrap())
    });
    idx.dedup_by(|a, b| points[*a] == points[*b]);
    if idx.len() < 3 {
        return idx;
    }
    let mut hull: Vec<usize> = Vec::with_capacity(2 * idx.len());
    for &i in &idx {
        while hull.len() >= 2 && cross2(points[hull[hull.len() - 2]], points[hull[hull.len() - 1]], points[i]) <= 0.0 {
            hull.pop();
        }
        hull.push(i);
    }
    let lower = hull.len() + 1;
    for &i in idx.iter().rev().skip(1) {
        while hull.len() >= lower && cross2(points[hull[hull.len() - 2]], points[hull[hull.len() - 1]], points[i]) <= 0.0 {
            hull.pop();
        }
        hull.push(i);
    }
    hull.pop();
    hull
}

/// Signed area (positive for counter-clockwise order), computed relative
/// to the first vertex.
pub fn polygon_area(poly: &[[f64; 2]]) -> f64 {
    if poly.len() < 3 {
        return 0.0;
    }
    let o = poly[0];
    let mut s = CompensatedSum::new();
    for k in 1..poly.len() - 1 {
        s.add(cross2(o, poly[k], poly[k + 1]));
    }
    0.5 * s.value()
}

pub fn polygon_centroid(poly: &[[f64; 2]]) -> [f64; 2] {
    let o = poly[0];
    let mut a = 0.0;
    let mut cx = 0.0;
    let mut cy = 0.0;
    for k in 1..poly.len().saturating_sub(1) {
        let w = cross2(o, poly[k], poly[k + 1]);
        a += w;
        cx += w * (o[0] + poly[k][0] + poly[k + 1][0]) / 3.0;
        cy += w * (o[1] + poly[k][1] + poly[k + 1][1]) / 3.0;
    }
    if a == 0.0 {
        return o;
    }
    [cx / a, cy / a]
}

/// Area of the convex hull of a planar point set (0 when degenerate).
pub fn hull_area_2d(points: &[[f64; 2]]) -> f64 {
    let h = convex_hull_2d(points);
    if h.len() < 3 {
        return 0.0;
    }
    let poly: Vec<[f64; 2]> = h.iter().map(|&i| points[i]).collect();
    polygon_area(&poly)
}

/// Vertices (counter-clockwise) of `{x : ⟨a_i, x⟩ ≤ b_i}` given a strictly
/// interior point.
pub fn halfplane_intersection(normals: &[[f64; 2]], offsets: &[f64], interior: [f64; 2]) -> Result<Vec<[f64; 2]>> {
    let mut duals = Vec::with_capacity(normals.len());
    for (a, &b) in normals.iter().zip(offsets) {
        let s = b - (a[0] * interior[0] + a[1] * interior[1]);
        if s <= 0.0 {
            return Err(Error::Degenerate("interior point violates a halfplane".into()));
        }
        duals.push([a[0] / s, a[1] / s]);
    }
    let h = convex_hull_2d(&duals);
    if h.len() < 3 {
        return Err(Error::UnboundedBody);
    }
    let k = h.len();
    let mut verts = Vec::with_capacity(k);
    for e in 0..k {
        let di = duals[h[e]];
        let dj = duals[h[(e + 1) % k]];
        // Origin must lie strictly left of every dual edge.
        if cross2(di, dj, [0.0, 0.0]) <= 0.0 {
            return Err(Error::UnboundedBody);
        }
        let det = di[0] * dj[1] - di[1] * dj[0];
        let qx = (dj[1] - di[1]) / det;
        let qy = (di[0] - dj[0]) / det;
        verts.push([qx + interior[0], qy + interior[1]]);
    }
    if polygon_area(&verts) < 0.0 {
        verts.reverse();
    }
    Ok(verts)
}

// ---------------------------------------------------------------- 3-D

#[inline]
fn sub3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

#[inline]
fn norm3(a: [f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

#[derive(Clone, Debug)]
struct Face {
    v: [usize; 3],
    normal: [f64; 3],
    offset: f64,
    outside: Vec<usize>,
    alive: bool,
}

impl Face {
    fn new(points: &[[f64; 3]], v: [usize; 3]) -> Self {
        let n = cross3(sub3(points[v[1]], points[v[0]]), sub3(points[v[2]], points[v[0]]));
        let len = norm3(n);
        let normal = if len > 0.0 { [n[0] / len, n[1] / len, n[2] / len] } else { [0.0; 3] };
        let offset = dot3(normal, points[v[0]]);
        Self { v, normal, offset, outside: Vec::new(), alive: true }
    }

    #[inline]
    fn distance(&self, p: [f64; 3]) -> f64 {
        dot3(self.normal, p) - self.offset
    }
}

/// Triangulated 3-D convex hull. Triangles are oriented counter-clockwise
/// seen from outside; indices refer to the input point slice.
#[derive(Clone, Debug)]
pub struct Hull3 {
    pub points: Vec<[f64; 3]>,
    pub triangles: Vec<[usize; 3]>,
    interior: [f64; 3],
}

/// A planar facet of a 3-D hull after merging coplanar triangles.
#[derive(Clone, Debug)]
pub struct PlanarFacet {
    pub normal: [f64; 3],
    pub offset: f64,
    pub area: f64,
    /// Boundary vertices in counter-clockwise order seen from outside.
    pub polygon: Vec<[f64; 3]>,
}

/// Quickhull. Returns `Degenerate` for inputs without four affinely
/// independent points.
pub fn convex_hull_3d(points: &[[f64; 3]]) -> Result<Hull3> {
    let finite: Vec<usize> = (0..points.len()).filter(|&i| points[i].iter().all(|x| x.is_finite())).collect();
    if finite.len() < 4 {
        return Err(Error::Degenerate("fewer than four points".into()));
    }
    let extent = finite
        .iter()
        .flat_map(|&i| points[i].iter().map(|x| x.abs()))
        .fold(0.0, f64::max)
        .max(1e-300);
    let eps = 1e-12 * extent;

    // Initial tetrahedron.
    let mut i0 = finite[0];
    let mut i1 = finite[0];
    let mut best_axis = (0usize, 0.0);
    for axis in 0..3 {
        let (lo, hi) = finite.iter().fold((finite[0], finite[0]), |(lo, hi), &i| {
            (
                if points[i][axis] < points[lo][axis] { i } else { lo },
                if points[i][axis] > points[hi][axis] { i } else { hi },
            )
        });
        let spread = points[hi][axis] - points[lo][axis];
        if spread > best_axis.1 {
            best_axis = (axis, spread);
            i0 = lo;
            i1 = hi;
        }
    }
    if best_axis.1 <= eps {
        return Err(Error::Degenerate("all points coincide".into()));
    }
    let dir = sub3(points[i1], points[i0]);
    let mut i2 = i0;
    let mut best = 0.0;
    for &i in &finite {
        let d = norm3(cross3(dir, sub3(points[i], points[i0])));
        if d > best {
            best = d;
            i2 = i;
        }
    }
    if best <= eps * norm3(dir) {
        return Err(Error::Degenerate("points are collinear".into()));
    }
    let plane = Face::new(points, [i0, i1, i2]);
    let mut i3 = i0;
    let mut best = 0.0;
    for &i in &finite {
        let d = plane.distance(points[i]).abs();
        if d > best {
            best = d;
            i3 = i;
        }
    }
    if best <= eps {
        return Err(Error::Degenerate("points are coplanar".into()));
    }
    let interior = {
        let mut c = [0.0; 3];
        for &i in &[i0, i1, i2, i3] {
            for k in 0..3 {
                c[k] += points[i][k] / 4.0;
            }
        }
        c
    };

    let mut faces: Vec<Face> = Vec::new();
    let mut edges: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let tet = [[i0, i1, i2], [i0, i1, i3], [i0, i2, i3], [i1, i2, i3]];
    for t in tet {
        let mut f = Face::new(points, t);
        if f.distance(interior) > 0.0 {
            f = Face::new(points, [t[0], t[2], t[1]]);
        }
        let id = faces.len();
        for k in 0..3 {
            edges.insert((f.v[k], f.v[(k + 1) % 3]), id);
        }
        faces.push(f);
    }
    for &i in &finite {
        if [i0, i1, i2, i3].contains(&i) {
            continue;
        }
        for f in faces.iter_mut() {
            if f.distance(points[i]) > eps {
                f.outside.push(i);
                break;
            }
        }
    }

    let mut pending: Vec<usize> = (0..faces.len()).filter(|&f| !faces[f].outside.is_empty()).collect();
    while let Some(fid) = pending.pop() {
        if !faces[fid].alive || faces[fid].outside.is_empty() {
            continue;
        }
        let eye = *faces[fid]
            .outside
            .iter()
            .max_by(|&&a, &&b| faces[fid].distance(points[a]).partial_cmp(&faces[fid].distance(points[b])).unwrap())
            .unwrap();
        let ep = points[eye];

        // Visible region by flood fill from fid.
        let mut visible = vec![fid];
        let mut is_visible: BTreeMap<usize, bool> = BTreeMap::new();
        is_visible.insert(fid, true);
        let mut horizon: Vec<(usize, usize)> = Vec::new();
        let mut k = 0;
        while k < visible.len() {
            let f = visible[k];
            k += 1;
            let v = faces[f].v;
            for e in 0..3 {
                let (a, b) = (v[e], v[(e + 1) % 3]);
                let Some(&g) = edges.get(&(b, a)) else { continue };
                match is_visible.get(&g) {
                    Some(true) => {}
                    Some(false) => horizon.push((a, b)),
                    None => {
                        if faces[g].distance(ep) > eps {
                            is_visible.insert(g, true);
                            visible.push(g);
                        } else {
                            is_visible.insert(g, false);
                            horizon.push((a, b));
                        }
                    }
                }
            }
        }

        let mut orphans: Vec<usize> = Vec::new();
        for &f in &visible {
            faces[f].alive = false;
            let v = faces[f].v;
            for e in 0..3 {
                let key = (v[e], v[(e + 1) % 3]);
                if edges.get(&key) == Some(&f) {
                    edges.remove(&key);
                }
            }
            orphans.append(&mut faces[f].outside);
        }
        let first_new = faces.len();
        for &(a, b) in &horizon {
            let f = Face::new(points, [a, b, eye]);
            let id = faces.len();
            for e in 0..3 {
                edges.insert((f.v[e], f.v[(e + 1) % 3]), id);
            }
            faces.push(f);
        }
        for p in orphans {
            if p == eye {
                continue;
            }
            for id in first_new..faces.len() {
                if faces[id].distance(points[p]) > eps {
                    faces[id].outside.push(p);
                    break;
                }
            }
        }
        for id in first_new..faces.len() {
            if !faces[id].outside.is_empty() {
                pending.push(id);
            }
        }
    }

    let triangles = faces.iter().filter(|f| f.alive).map(|f| f.v).collect();
    Ok(Hull3 { points: points.to_vec(), triangles, interior })
}

impl Hull3 {
    pub fn volume(&self) -> f64 {
        let c = self.interior;
        let mut s = CompensatedSum::new();
        for t in &self.triangles {
            let a = sub3(self.points[t[0]], c);
            let b = sub3(self.points[t[1]], c);
            let d = sub3(self.points[t[2]], c);
            s.add(dot3(a, cross3(b, d)) / 6.0);
        }
        s.value()
    }

    pub fn centroid(&self) -> [f64; 3] {
        let c = self.interior;
        let mut vol = 0.0;
        let mut m = [0.0; 3];
        for t in &self.triangles {
            let (a, b, d) = (self.points[t[0]], self.points[t[1]], self.points[t[2]]);
            let v = dot3(sub3(a, c), cross3(sub3(b, c), sub3(d, c))) / 6.0;
            vol += v;
            for k in 0..3 {
                m[k] += v * (a[k] + b[k] + d[k] + c[k]) / 4.0;
            }
        }
        [m[0] / vol, m[1] / vol, m[2] / vol]
    }

    pub fn surface_area(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| {
                let (a, b, d) = (self.points[t[0]], self.points[t[1]], self.points[t[2]]);
                0.5 * norm3(cross3(sub3(b, a), sub3(d, a)))
            })
            .sum()
    }

    /// Indices of points used as hull vertices, sorted and deduplicated.
    pub fn vertex_indices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.triangles.iter().flat_map(|t| t.iter().copied()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Merge coplanar adjacent triangles into planar facets.
    pub fn facets(&self, tol: f64) -> Vec<PlanarFacet> {
        let nt = self.triangles.len();
        let tri_normal = |t: &[usize; 3]| {
            let (a, b, d) = (self.points[t[0]], self.points[t[1]], self.points[t[2]]);
            cross3(sub3(b, a), sub3(d, a))
        };
        let mut edge_owner: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (i, t) in self.triangles.iter().enumerate() {
            for e in 0..3 {
                edge_owner.insert((t[e], t[(e + 1) % 3]), i);
            }
        }
        let unit: Vec<[f64; 3]> = self
            .triangles
            .iter()
            .map(|t| {
                let n = tri_normal(t);
                let l = norm3(n);
                if l > 0.0 { [n[0] / l, n[1] / l, n[2] / l] } else { [0.0; 3] }
            })
            .collect();
        let mut group = vec![usize::MAX; nt];
        let mut out = Vec::new();
        for seed in 0..nt {
            if group[seed] != usize::MAX {
                continue;
            }
            let gid = out.len();
            group[seed] = gid;
            let mut stack = vec![seed];
            let mut members = Vec::new();
            let n0 = unit[seed];
            let d0 = dot3(n0, self.points[self.triangles[seed][0]]);
            while let Some(t) = stack.pop() {
                members.push(t);
                let tv = self.triangles[t];
                for e in 0..3 {
                    if let Some(&g) = edge_owner.get(&(tv[(e + 1) % 3], tv[e])) {
                        if group[g] == usize::MAX {
                            let coplanar = g_coplanar(&self.points, &self.triangles[g], n0, d0, tol);
                            if coplanar {
                                group[g] = gid;
                                stack.push(g);
                            }
                        }
                    }
                }
            }
            let mut area = 0.0;
            let mut nsum = [0.0; 3];
            for &t in &members {
                let n = tri_normal(&self.triangles[t]);
                area += 0.5 * norm3(n);
                for k in 0..3 {
                    nsum[k] += 0.5 * n[k];
                }
            }
            let l = norm3(nsum);
            let normal = if l > 0.0 { [nsum[0] / l, nsum[1] / l, nsum[2] / l] } else { n0 };
            let mut vids: Vec<usize> = members.iter().flat_map(|&t| self.triangles[t].iter().copied()).collect();
            vids.sort_unstable();
            vids.dedup();
            let pts: Vec<[f64; 3]> = vids.iter().map(|&i| self.points[i]).collect();
            let offset = pts.iter().map(|p| dot3(normal, *p)).sum::<f64>() / pts.len() as f64;
            let polygon = order_planar_polygon(&pts, normal);
            out.push(PlanarFacet { normal, offset, area, polygon });
        }
        out
    }
}

fn g_coplanar(points: &[[f64; 3]], t: &[usize; 3], n0: [f64; 3], d0: f64, tol: f64) -> bool {
    t.iter().all(|&i| (dot3(n0, points[i]) - d0).abs() <= tol)
}

/// Order coplanar points counter-clockwise around their mean, seen from the
/// side `normal` points to. Collinear interior points are dropped.
pub fn order_planar_polygon(pts: &[[f64; 3]], normal: [f64; 3]) -> Vec<[f64; 3]> {
    if pts.len() < 3 {
        return pts.to_vec();
    }
    let mut c = [0.0; 3];
    for p in pts {
        for k in 0..3 {
            c[k] += p[k] / pts.len() as f64;
        }
    }
    let basis = crate::linalg::orthonormal_complement(&normal);
    let (e1, e2) = (&basis[0], &basis[1]);
    // Orientation: (e1, e2, normal) must be right-handed.
    let right = dot3(cross3([e1[0], e1[1], e1[2]], [e2[0], e2[1], e2[2]]), normal) > 0.0;
    let flat: Vec<[f64; 2]> = pts
        .iter()
        .map(|p| {
            let d = sub3(*p, c);
            let y = dot3(d, [e2[0], e2[1], e2[2]]);
            [dot3(d, [e1[0], e1[1], e1[2]]), if right { y } else { -y }]
        })
        .collect();
    let hull = convex_hull_2d(&flat);
    hull.iter().map(|&i| pts[i]).collect()
}

/// Area of a planar polygon in 3-D (vertices in order).
pub fn planar_polygon_area(poly: &[[f64; 3]]) -> f64 {
    if poly.len() < 3 {
        return 0.0;
    }
    let mut n = [0.0; 3];
    let o = poly[0];
    for k in 1..poly.len() - 1 {
        let c = cross3(sub3(poly[k], o), sub3(poly[k + 1], o));
        for j in 0..3 {
            n[j] += c[j];
        }
    }
    0.5 * norm3(n)
}

/// Volume of the convex hull of a 3-D point set (0 when degenerate).
pub fn hull_volume_3d(points: &[[f64; 3]]) -> f64 {
    match convex_hull_3d(points) {
        Ok(h) => h.volume(),
        Err(_) => 0.0,
    }
}

/// Vertices of `{x : ⟨a_i, x⟩ ≤ b_i}` in 3-D given a strictly interior point.
pub fn halfspace_intersection_3d(normals: &[[f64; 3]], offsets: &[f64], interior: [f64; 3]) -> Result<Vec<[f64; 3]>> {
    let mut duals = Vec::with_capacity(normals.len());
    for (a, &b) in normals.iter().zip(offsets) {
        let s = b - dot3(*a, interior);
        if s <= 0.0 {
            return Err(Error::Degenerate("interior point violates a halfspace".into()));
        }
        duals.push([a[0] / s, a[1] / s, a[2] / s]);
    }
    let hull = convex_hull_3d(&duals).map_err(|_| Error::UnboundedBody)?;
    let scale = duals.iter().flat_map(|d| d.iter().map(|x| x.abs())).fold(0.0, f64::max);
    let facets = hull.facets(1e-10 * scale);
    let mut verts = Vec::with_capacity(facets.len());
    for f in &facets {
        if f.offset <= 1e-12 * scale {
            return Err(Error::UnboundedBody);
        }
        verts.push([
            f.normal[0] / f.offset + interior[0],
            f.normal[1] / f.offset + interior[1],
            f.normal[2] / f.offset + interior[2],
        ]);
    }
    Ok(verts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_hull_and_area() {
        let pts = [[0.0, 0.0], [1.0, 0.0], [0.5, 0.5], [1.0, 1.0], [0.0, 1.0], [0.5, 0.0]];
        let h = convex_hull_2d(&pts);
        assert_eq!(h.len(), 4);
        assert!((hull_area_2d(&pts) - 1.0).abs() < 1e-15);
        assert_eq!(hull_area_2d(&[[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]), 0.0);
    }

    #[test]
    fn halfplanes_square() {
        let n = [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0], [core::f64::consts::FRAC_1_SQRT_2, core::f64::consts::FRAC_1_SQRT_2]];
        let b = [1.0, 1.0, 1.0, 1.0, 10.0];
        let v = halfplane_intersection(&n, &b, [0.1, 0.2]).unwrap();
        assert_eq!(v.len(), 4);
        assert!((polygon_area(&v) - 4.0).abs() < 1e-12);
        let open = halfplane_intersection(&n[..3], &b[..3], [0.0, 0.0]);
        assert_eq!(open, Err(Error::UnboundedBody));
    }

    #[test]
    fn cube_hull() {
        let mut pts = Vec::new();
        for i in 0..8 {
            pts.push([
                if i & 1 == 0 { -1.0 } else { 1.0 },
                if i & 2 == 0 { -1.0 } else { 1.0 },
                if i & 4 == 0 { -1.0 } else { 1.0 },
            ]);
        }
        pts.push([0.0, 0.0, 0.0]);
        pts.push([1.0, 0.0, 0.0]);
        let h = convex_hull_3d(&pts).unwrap();
        assert!((h.volume() - 8.0).abs() < 1e-12);
        assert!((h.surface_area() - 24.0).abs() < 1e-12);
        let f = h.facets(1e-9);
        assert_eq!(f.len(), 6);
        for facet in &f {
            assert!((facet.area - 4.0).abs() < 1e-12);
            assert_eq!(facet.polygon.len(), 4);
            assert!((planar_polygon_area(&facet.polygon) - 4.0).abs() < 1e-12);
        }
        assert_eq!(h.vertex_indices().len(), 8);
    }

    #[test]
    fn degenerate_3d() {
        let pts = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 1.0, 0.0]];
        assert!(convex_hull_3d(&pts).is_err());
        assert_eq!(hull_volume_3d(&pts), 0.0);
    }

    #[test]
    fn octahedron_from_halfspaces() {
        let s = 1.0 / 3f64.sqrt();
        let mut normals = Vec::new();
        for i in 0..8 {
            normals.push([
                if i & 1 == 0 { -s } else { s },
                if i & 2 == 0 { -s } else { s },
                if i & 4 == 0 { -s } else { s },
            ]);
        }
        let offsets = vec![s; 8];
        let v = halfspace_intersection_3d(&normals, &offsets, [0.01, 0.02, -0.03]).unwrap();
        assert_eq!(v.len(), 6);
        let h = convex_hull_3d(&v).unwrap();
        assert!((h.volume() - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn random_sphere_points() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let pts: Vec<[f64; 3]> = (0..3000)
            .map(|_| loop {
                let p: [f64; 3] = [rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0];
                let r = norm3(p);
                if r > 0.1 && r <= 1.0 {
                    break [p[0] / r, p[1] / r, p[2] / r];
                }
            })
            .collect();
        let h = convex_hull_3d(&pts).unwrap();
        let v = h.volume();
        assert!(v < 4.0 * core::f64::consts::PI / 3.0 && v > 4.0);
        // Euler: every point on the sphere is a vertex, F = 2V - 4.
        assert_eq!(h.vertex_indices().len(), 3000);
        assert_eq!(h.triangles.len(), 2 * 3000 - 4);
    }
}
