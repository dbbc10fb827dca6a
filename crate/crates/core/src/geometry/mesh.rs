//! Structured boundary-conforming triangulation: a polar tensor grid
//! `(θᵢ, rⱼ·ρ(θᵢ))` with an origin fan.

use crate::error::{Error, Result};
use crate::geometry::domain::{BoundarySample, DomainSpec};
use crate::operator::Point;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryEdge<T> {
    /// Vertex indices in counterclockwise order.
    pub vertices: [usize; 2],
    /// Sample on the exact boundary at the mid-angle of the edge, weighted by
    /// the edge length.
    pub sample: BoundarySample<T>,
}

#[derive(Debug, Clone)]
pub struct Mesh<T> {
    pub vertices: Vec<Point<T>>,
    /// Counterclockwise vertex triples.
    pub triangles: Vec<[usize; 3]>,
    /// Closed counterclockwise loop.
    pub boundary_edges: Vec<BoundaryEdge<T>>,
    pub n_theta: usize,
    pub n_r: usize,
    /// Angles of the boundary vertices.
    pub thetas: Vec<T>,
}

/// Splits `n` segments among pieces proportionally to their extents, with at
/// least one segment per nonempty piece (largest remainder rounding).
fn allocate_segments(extents: &[f64], n: usize) -> Vec<usize> {
    let total: f64 = extents.iter().sum();
    let nonempty = extents.iter().filter(|&&e| e > 0.0).count();
    let free = n - nonempty;
    let ideal: Vec<f64> = extents
        .iter()
        .map(|&e| if e > 0.0 { free as f64 * e / total } else { 0.0 })
        .collect();
    let mut counts: Vec<usize> = extents
        .iter()
        .zip(&ideal)
        .map(|(&e, &v)| if e > 0.0 { 1 + v.floor() as usize } else { 0 })
        .collect();
    let mut assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..extents.len()).filter(|&i| extents[i] > 0.0).collect();
    order.sort_by(|&a, &b| {
        let ra = ideal[a] - ideal[a].floor();
        let rb = ideal[b] - ideal[b].floor();
        rb.partial_cmp(&ra).unwrap().then(a.cmp(&b))
    });
    let mut k = 0;
    while assigned < n {
        counts[order[k % order.len()]] += 1;
        assigned += 1;
        k += 1;
    }
    counts
}

impl<T: Scalar> DomainSpec<T> {
    /// Boundary vertex angles: the piece junctions are always nodes, so
    /// every edge lies on a single analytic piece.
    pub fn boundary_angles(&self, n_theta: usize) -> Vec<T> {
        let pi = T::PI();
        let ta = self.fillet_half_angle();
        let breaks = [
            -T::lit(0.75) * pi,
            T::lit(0.75) * pi,
            pi - ta,
            pi + ta,
            T::lit(1.25) * pi,
        ];
        let extents: Vec<f64> = breaks.windows(2).map(|w| (w[1] - w[0]).as_f64()).collect();
        let counts = allocate_segments(&extents, n_theta);
        let mut out = Vec::with_capacity(n_theta);
        for (w, &m) in breaks.windows(2).zip(&counts) {
            for k in 0..m {
                let frac = T::from_usize(k).unwrap() / T::from_usize(m).unwrap();
                out.push(w[0] + (w[1] - w[0]) * frac);
            }
        }
        out
    }

    /// Triangulates the domain with `n_theta` boundary segments and `n_r` rings.
    pub fn generate_mesh(&self, n_theta: usize, n_r: usize) -> Result<Mesh<T>> {
        if n_theta < 16 {
            return Err(Error::Parameter { name: "n_theta", value: n_theta as f64, reason: "need at least 16 angular segments" });
        }
        if n_r < 4 {
            return Err(Error::Parameter { name: "n_r", value: n_r as f64, reason: "need at least 4 rings" });
        }
        if let Some(theta) = self.star_shape_violation(4 * n_theta)? {
            return Err(Error::MeshDomain { theta: theta.as_f64() });
        }
        let thetas = self.boundary_angles(n_theta);
        let rays: Vec<Point<T>> = thetas
            .iter()
            .map(|&t| {
                let rho = self.boundary_radius(t)?;
                let (s, c) = t.sin_cos();
                Ok(Point::new(rho * c, rho * s))
            })
            .collect::<Result<_>>()?;

        let mut vertices = Vec::with_capacity(1 + n_theta * n_r);
        vertices.push(Point::new(T::zero(), T::zero()));
        for j in 1..=n_r {
            let r = T::from_usize(j).unwrap() / T::from_usize(n_r).unwrap();
            vertices.extend(rays.iter().map(|b| Point::new(b.x * r, b.y * r)));
        }
        let vid = |j: usize, i: usize| 1 + (j - 1) * n_theta + (i % n_theta);

        let mut triangles = Vec::with_capacity(n_theta * (2 * n_r - 1));
        for i in 0..n_theta {
            triangles.push([0, vid(1, i), vid(1, i + 1)]);
        }
        for j in 1..n_r {
            for i in 0..n_theta {
                let (a, b, c, d) = (vid(j, i), vid(j + 1, i), vid(j + 1, i + 1), vid(j, i + 1));
                triangles.push([a, b, c]);
                triangles.push([a, c, d]);
            }
        }

        let mut boundary_edges = Vec::with_capacity(n_theta);
        for i in 0..n_theta {
            let t0 = thetas[i];
            let t1 = if i + 1 < n_theta { thetas[i + 1] } else { thetas[0] + T::TAU() };
            let (va, vb) = (vid(n_r, i), vid(n_r, i + 1));
            let length = vertices[va].dist(vertices[vb]);
            let sample = self.sample_at((t0 + t1) * T::half(), length)?;
            boundary_edges.push(BoundaryEdge { vertices: [va, vb], sample });
        }

        let mesh = Mesh { vertices, triangles, boundary_edges, n_theta, n_r, thetas };
        for (k, _) in mesh.triangles.iter().enumerate() {
            let area = mesh.triangle_area(k);
            if !(area > T::zero()) {
                return Err(Error::MeshQuality { triangle: k, area: area.as_f64() });
            }
        }
        Ok(mesh)
    }
}

impl<T: Scalar> Mesh<T> {
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn corners(&self, k: usize) -> [Point<T>; 3] {
        let t = self.triangles[k];
        [self.vertices[t[0]], self.vertices[t[1]], self.vertices[t[2]]]
    }

    /// Signed area (positive for counterclockwise triangles).
    pub fn triangle_area(&self, k: usize) -> T {
        let [a, b, c] = self.corners(k);
        ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y)) * T::half()
    }

    pub fn centroid(&self, k: usize) -> Point<T> {
        let [a, b, c] = self.corners(k);
        let third = T::one() / T::lit(3.0);
        Point::new((a.x + b.x + c.x) * third, (a.y + b.y + c.y) * third)
    }

    /// Constant gradients `(∂ₓφ, ∂ᵧφ)` of the three linear hat functions.
    pub fn basis_gradients(&self, k: usize) -> [(T, T); 3] {
        let [a, b, c] = self.corners(k);
        let two_area = T::two() * self.triangle_area(k);
        [
            ((b.y - c.y) / two_area, (c.x - b.x) / two_area),
            ((c.y - a.y) / two_area, (a.x - c.x) / two_area),
            ((a.y - b.y) / two_area, (b.x - a.x) / two_area),
        ]
    }

    pub fn area(&self) -> T {
        (0..self.triangles.len()).fold(T::zero(), |acc, k| acc + self.triangle_area(k))
    }

    /// Longest edge length.
    pub fn h_max(&self) -> T {
        let mut h = T::zero();
        for k in 0..self.triangles.len() {
            let [a, b, c] = self.corners(k);
            h = h.max(a.dist(b)).max(b.dist(c)).max(c.dist(a));
        }
        h
    }

    /// Nominal boundary spacing `perimeter / n_theta`.
    pub fn h_boundary(&self) -> T {
        let perimeter = self.boundary_edges.iter().fold(T::zero(), |acc, e| acc + e.sample.weight);
        perimeter / T::from_usize(self.n_theta).unwrap()
    }

    pub fn boundary_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.boundary_edges.iter().map(|e| e.vertices[0])
    }
}
