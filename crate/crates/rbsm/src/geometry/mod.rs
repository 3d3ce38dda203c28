//! Tessellation generation and contact-element geometry.
//!
//! Four tessellation families are produced, all filling a rectangular
//! domain with rigid polygonal bodies carrying one governing node each:
//!
//! * **Voronoi**: clipped Voronoi diagram of a sequentially placed point
//!   set with minimum spacing; contact faces are perpendicular to the
//!   vectors between governing nodes.
//! * **Randomized Voronoi**: Voronoi vertices pushed in random directions
//!   by random distances bounded by half the spacing to the nearest vertex.
//! * **Random**: a Delaunay triangulation of a finer auxiliary point set,
//!   with triangles flood-assigned to the basic nodes they contain or touch.
//! * **Centered random**: the random tessellation with governing nodes
//!   moved into the body centroids.

pub mod checks;
mod contacts;
mod delaunay;
mod grid;
mod points;
mod random_tess;
mod randomize;
mod stats;
mod voronoi;

pub use contacts::{boundary_faces, extract_contacts, volume_closure, BoundaryFace};
pub use points::place_points;
pub use random_tess::{center_nodes, random_tessellate, RANDOM_TESSELLATION_TRIALS};
pub use randomize::randomize_vertices;
pub use stats::chi_statistics;
pub use voronoi::voronoi_tessellate;

use crate::vec2::Vec2;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("degenerate domain (non-positive extent)")]
    DegenerateDomain,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("need at least {need} points, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("point {index} lies outside the domain")]
    PointOutsideDomain { index: usize },
    #[error("duplicate input points (indices {0} and {1})")]
    DuplicatePoints(usize, usize),
    #[error("input points are collinear; no triangulation exists")]
    CollinearPoints,
    #[error("expected a {expected:?} tessellation, got {got:?}")]
    WrongKind {
        expected: TessellationKind,
        got: TessellationKind,
    },
    #[error("empty element list")]
    EmptyElements,
    #[error("inconsistent tessellation topology: {0}")]
    Topology(String),
    #[error("triangulation failed: {0}")]
    Triangulation(String),
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization failure: {0}")]
    Serde(#[from] serde_json::Error),
}

/// Axis-aligned rectangular domain.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct DomainBox {
    pub min: Vec2,
    pub max: Vec2,
}

impl DomainBox {
    pub fn new(min: Vec2, max: Vec2) -> Result<Self, GeometryError> {
        if !(max.x > min.x && max.y > min.y) {
            return Err(GeometryError::DegenerateDomain);
        }
        Ok(DomainBox { min, max })
    }

    pub fn sized(width: f64, height: f64) -> Result<Self, GeometryError> {
        DomainBox::new(Vec2::ZERO, Vec2::new(width, height))
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn contains(&self, p: Vec2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    /// Corners in counterclockwise order starting at `min`.
    pub fn corners(&self) -> [Vec2; 4] {
        [
            self.min,
            Vec2::new(self.max.x, self.min.y),
            self.max,
            Vec2::new(self.min.x, self.max.y),
        ]
    }

    /// Distance from `p` to the nearest domain side (0 on the boundary).
    pub fn boundary_distance(&self, p: Vec2) -> f64 {
        (p.x - self.min.x)
            .min(self.max.x - p.x)
            .min(p.y - self.min.y)
            .min(self.max.y - p.y)
    }

    /// Is `p` within `tol` of the domain boundary?
    pub fn on_boundary(&self, p: Vec2, tol: f64) -> bool {
        self.boundary_distance(p) <= tol
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TessellationKind {
    #[serde(rename = "voronoi")]
    Voronoi,
    #[serde(rename = "rand-voronoi")]
    RandomizedVoronoi,
    #[serde(rename = "random")]
    Random,
    #[serde(rename = "centered")]
    CenteredRandom,
}

impl std::fmt::Display for TessellationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            TessellationKind::Voronoi => "voronoi",
            TessellationKind::RandomizedVoronoi => "rand-voronoi",
            TessellationKind::Random => "random",
            TessellationKind::CenteredRandom => "centered",
        };
        write!(f, "{s}")
    }
}

/// Shape of one rigid body, referencing the shared vertex pool.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BodyShape {
    Polygon { polygon: Vec<usize> },
    Triangles { triangles: Vec<[usize; 3]> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Body {
    pub node_id: usize,
    #[serde(flatten)]
    pub shape: BodyShape,
}

/// A tessellation of the domain into rigid bodies. Vertices are shared
/// objects: moving one moves it in every incident body.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Tessellation {
    pub version: u32,
    pub dim: u32,
    pub domain: DomainBox,
    pub seed: u64,
    pub kind: TessellationKind,
    /// Minimum point spacing used during generation; the length unit of
    /// boundary tolerances and homogenization margins.
    pub lmin: f64,
    pub nodes: Vec<Vec2>,
    pub vertices: Vec<Vec2>,
    pub bodies: Vec<Body>,
    /// Contact elements extracted at generation time.
    pub contacts: Vec<ContactElement>,
}

pub const TESSELLATION_FORMAT_VERSION: u32 = 1;

impl Tessellation {
    /// Signed area of body `i` (positive for counterclockwise loops).
    pub fn body_area(&self, i: usize) -> f64 {
        match &self.bodies[i].shape {
            BodyShape::Polygon { polygon } => polygon_area(&self.vertices, polygon),
            BodyShape::Triangles { triangles } => triangles
                .iter()
                .map(|t| triangle_area(&self.vertices, t))
                .sum(),
        }
    }

    pub fn body_centroid(&self, i: usize) -> Vec2 {
        match &self.bodies[i].shape {
            BodyShape::Polygon { polygon } => polygon_centroid(&self.vertices, polygon),
            BodyShape::Triangles { triangles } => {
                let mut area = 0.0;
                let mut c = Vec2::ZERO;
                for t in triangles {
                    let a = triangle_area(&self.vertices, t);
                    let centroid =
                        (self.vertices[t[0]] + self.vertices[t[1]] + self.vertices[t[2]])
                            * (1.0 / 3.0);
                    area += a;
                    c += centroid * a;
                }
                c * (1.0 / area)
            }
        }
    }

    pub fn total_body_area(&self) -> f64 {
        (0..self.bodies.len()).map(|i| self.body_area(i)).sum()
    }

    /// Relative defect of the partition-of-domain invariant.
    pub fn partition_defect(&self) -> f64 {
        (self.total_body_area() - self.domain.area()).abs() / self.domain.area()
    }

    /// Nodes of bodies touching the domain boundary (any body vertex within
    /// `1e-9 * lmin` of a side).
    pub fn boundary_nodes(&self) -> Vec<usize> {
        let tol = 1e-9 * self.lmin;
        let mut out = Vec::new();
        for (i, body) in self.bodies.iter().enumerate() {
            let touches = match &body.shape {
                BodyShape::Polygon { polygon } => polygon
                    .iter()
                    .any(|&v| self.domain.on_boundary(self.vertices[v], tol)),
                BodyShape::Triangles { triangles } => triangles
                    .iter()
                    .flatten()
                    .any(|&v| self.domain.on_boundary(self.vertices[v], tol)),
            };
            if touches {
                out.push(i);
            }
        }
        out
    }

    pub fn save_json(&self, path: &std::path::Path) -> Result<(), GeometryError> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn load_json(path: &std::path::Path) -> Result<Self, GeometryError> {
        let text = std::fs::read_to_string(path)?;
        let t: Tessellation = serde_json::from_str(&text)?;
        Ok(t)
    }
}

/// One mechanical element: the shared face between bodies `a < b`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContactElement {
    pub a: usize,
    pub b: usize,
    /// Face endpoints (vertex ids) in body-a traversal order.
    #[serde(skip)]
    pub face: (usize, usize),
    /// Face measure: edge length times unit thickness.
    #[serde(rename = "A")]
    pub area: f64,
    /// Distance between the governing nodes.
    pub l: f64,
    /// Unit face normal, outward from body `a`.
    pub n: Vec2,
    /// Unit contact vector from node `a` to node `b`.
    pub t: Vec2,
    /// Face centroid.
    pub c: Vec2,
    /// Signed angle from `n` to `t` in `(-pi, pi]`.
    pub chi: f64,
}

impl ContactElement {
    /// Element volume `cos(chi) * A * l / 2`; negative when `|chi| > pi/2`.
    pub fn volume(&self) -> f64 {
        self.chi.cos() * self.area * self.l / 2.0
    }
}

/// Binned density of the contact angle together with its first two cosine
/// moments. The density is stored as nodal values on the bin-edge grid, so
/// the trapezoid rule integrates it to exactly one.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChiStatistics {
    pub grid: Vec<f64>,
    pub density: Vec<f64>,
    pub i1: f64,
    pub i2: f64,
    pub sample_count: usize,
}

impl ChiStatistics {
    pub fn integral(&self) -> f64 {
        self.grid
            .windows(2)
            .zip(self.density.windows(2))
            .map(|(x, v)| 0.5 * (x[1] - x[0]) * (v[0] + v[1]))
            .sum()
    }
}

pub(crate) fn polygon_area(vertices: &[Vec2], loop_ids: &[usize]) -> f64 {
    let n = loop_ids.len();
    let mut s = 0.0;
    for i in 0..n {
        let p = vertices[loop_ids[i]];
        let q = vertices[loop_ids[(i + 1) % n]];
        s += p.cross(q);
    }
    0.5 * s
}

pub(crate) fn polygon_centroid(vertices: &[Vec2], loop_ids: &[usize]) -> Vec2 {
    let n = loop_ids.len();
    let mut area = 0.0;
    let mut c = Vec2::ZERO;
    for i in 0..n {
        let p = vertices[loop_ids[i]];
        let q = vertices[loop_ids[(i + 1) % n]];
        let w = p.cross(q);
        area += w;
        c += (p + q) * w;
    }
    c * (1.0 / (3.0 * area))
}

pub(crate) fn triangle_area(vertices: &[Vec2], t: &[usize; 3]) -> f64 {
    let a = vertices[t[0]];
    let b = vertices[t[1]];
    let c = vertices[t[2]];
    0.5 * (b - a).cross(c - a)
}

/// Generate a tessellation of the requested kind in one call.
///
/// `max_trials` bounds the consecutive-rejection count of the Voronoi-family
/// point process; the random tessellation runs its own termination constant
/// (see [`RANDOM_TESSELLATION_TRIALS`]).
pub fn generate(
    kind: TessellationKind,
    domain: DomainBox,
    l_min: f64,
    seed: u64,
    max_trials: usize,
) -> Result<Tessellation, GeometryError> {
    match kind {
        TessellationKind::Voronoi => {
            let pts = place_points(&domain, l_min, crate::rng::subseed(seed, 0), max_trials)?;
            let mut t = voronoi_tessellate(&pts, &domain)?;
            t.seed = seed;
            t.lmin = l_min;
            t.contacts = extract_contacts(&t)?;
            Ok(t)
        }
        TessellationKind::RandomizedVoronoi => {
            let base = generate(TessellationKind::Voronoi, domain, l_min, seed, max_trials)?;
            let mut t = randomize_vertices(&base, crate::rng::subseed(seed, 2))?;
            t.seed = seed;
            Ok(t)
        }
        TessellationKind::Random => random_tessellate(&domain, l_min, seed),
        TessellationKind::CenteredRandom => {
            let base = random_tessellate(&domain, l_min, seed)?;
            center_nodes(&base)
        }
    }
}
