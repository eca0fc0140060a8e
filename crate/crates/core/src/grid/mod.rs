//! Grid shapes, paths, segments and the kissing relation.
//!
//! A shape is a finite induced subgraph of the square lattice. Coordinates
//! follow the usual convention: `y` grows to the North, so a South step
//! decreases `y` and an East step increases `x`.

mod io;
mod walk;

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use io::ShapeJson;
pub use walk::{
    compare_at_edge, compose, containment_order, enumerate_paths, enumerate_segments, kissing_runs, kissing_segments,
    BendingVector, CommonRun, Path, PathKind, Segment, SubsegmentKind,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GridError {
    #[error("shape has no vertices")]
    EmptyShape,
    #[error("unexpected character {ch:?} at line {line}, column {column}")]
    BadCharacter { line: usize, column: usize, ch: char },
    #[error("malformed shape JSON: {0}")]
    Json(String),
    #[error("vertex {0} is not in the shape")]
    MissingVertex(Vertex),
    #[error("{0} and {1} are not joined by a South or East step")]
    NotAStep(Vertex, Vertex),
    #[error("walk must have at least {0} vertices")]
    TooShort(usize),
    #[error("path endpoint {0} is not a boundary vertex")]
    InteriorEndpoint(Vertex),
    #[error("intermediate vertex {0} is not interior")]
    BoundaryIntermediate(Vertex),
    #[error("segment vertex {0} is not interior")]
    BoundarySegmentVertex(Vertex),
    #[error("edge {0} does not lie on both paths")]
    EdgeNotShared(Edge),
    #[error("paths are identical")]
    IdenticalPaths,
    #[error("paths kiss along the common run through edge {0}")]
    KissAtEdge(Edge),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub x: i32,
    pub y: i32,
}

impl Vertex {
    pub const fn new(x: i32, y: i32) -> Self {
        Vertex { x, y }
    }

    pub const fn north(self) -> Self {
        Vertex::new(self.x, self.y + 1)
    }

    pub const fn south(self) -> Self {
        Vertex::new(self.x, self.y - 1)
    }

    pub const fn east(self) -> Self {
        Vertex::new(self.x + 1, self.y)
    }

    pub const fn west(self) -> Self {
        Vertex::new(self.x - 1, self.y)
    }

    pub const fn step(self, step: Step) -> Self {
        match step {
            Step::East => self.east(),
            Step::South => self.south(),
        }
    }

    /// Reflection across the anti-diagonal. Swaps East and South steps.
    pub const fn transpose(self) -> Self {
        Vertex::new(-self.y, -self.x)
    }

    /// The step leading from `self` to `to`, if they are adjacent that way.
    pub fn step_to(self, to: Vertex) -> Option<Step> {
        if to == self.east() {
            Some(Step::East)
        } else if to == self.south() {
            Some(Step::South)
        } else {
            None
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// A unit step of a walk. Paths only ever move South or East.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    East,
    South,
}

impl Step {
    pub const fn letter(self) -> char {
        match self {
            Step::East => 'E',
            Step::South => 'S',
        }
    }

    pub const fn transpose(self) -> Step {
        match self {
            Step::East => Step::South,
            Step::South => Step::East,
        }
    }
}

/// A unit square, named by its South-West corner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub x: i32,
    pub y: i32,
}

impl Cell {
    pub const fn new(x: i32, y: i32) -> Self {
        Cell { x, y }
    }

    pub fn corners(self) -> [Vertex; 4] {
        let sw = Vertex::new(self.x, self.y);
        [sw, sw.east(), sw.north(), sw.north().east()]
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.x, self.y)
    }
}

/// A directed grid edge, always oriented South or East.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub from: Vertex,
    pub to: Vertex,
}

impl Edge {
    pub fn new(from: Vertex, to: Vertex) -> Result<Self, GridError> {
        from.step_to(to).map(|_| Edge { from, to }).ok_or(GridError::NotAStep(from, to))
    }

    pub fn vertical(top: Vertex) -> Self {
        Edge { from: top, to: top.south() }
    }

    pub fn horizontal(left: Vertex) -> Self {
        Edge { from: left, to: left.east() }
    }

    pub fn is_vertical(self) -> bool {
        self.to == self.from.south()
    }

    pub fn transpose(self) -> Self {
        Edge { from: self.from.transpose(), to: self.to.transpose() }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.from, self.to)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shape {
    vertices: BTreeSet<Vertex>,
    interior: BTreeSet<Vertex>,
}

impl Shape {
    pub fn from_vertices<I: IntoIterator<Item = Vertex>>(vertices: I) -> Result<Self, GridError> {
        let vertices: BTreeSet<Vertex> = vertices.into_iter().collect();
        if vertices.is_empty() {
            return Err(GridError::EmptyShape);
        }
        let interior = vertices
            .iter()
            .copied()
            .filter(|v| (-1..=1).all(|dx| (-1..=1).all(|dy| vertices.contains(&Vertex::new(v.x + dx, v.y + dy)))))
            .collect();
        Ok(Shape { vertices, interior })
    }

    /// The shape spanned by a set of unit cells.
    pub fn from_cells<I: IntoIterator<Item = Cell>>(cells: I) -> Result<Self, GridError> {
        Shape::from_vertices(cells.into_iter().flat_map(Cell::corners))
    }

    /// A rectangle of `rows` rows and `cols` columns of cells, with its
    /// South-West corner at the origin.
    pub fn rectangle(rows: u32, cols: u32) -> Self {
        let (rows, cols) = (rows as i32, cols as i32);
        let vertices = (0..=cols).flat_map(|x| (0..=rows).map(move |y| Vertex::new(x, y)));
        Shape::from_vertices(vertices).expect("rectangle is nonempty")
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.vertices.iter().copied()
    }

    pub fn interior_vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.interior.iter().copied()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_interior(&self) -> usize {
        self.interior.len()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices.contains(&v)
    }

    pub fn is_interior(&self, v: Vertex) -> bool {
        self.interior.contains(&v)
    }

    pub fn is_boundary(&self, v: Vertex) -> bool {
        self.contains(v) && !self.is_interior(v)
    }

    /// A vertex with neither a South nor an East neighbour.
    pub fn is_se_corner(&self, v: Vertex) -> bool {
        self.contains(v) && !self.contains(v.south()) && !self.contains(v.east())
    }

    pub fn se_corners(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.vertices().filter(|&v| self.is_se_corner(v))
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.vertices().map(|v| Cell::new(v.x, v.y)).filter(|c| c.corners().iter().all(|&v| self.contains(v)))
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.vertices().flat_map(move |v| {
            [v.south(), v.east()].into_iter().filter(|&w| self.contains(w)).map(move |w| Edge { from: v, to: w })
        })
    }

    pub fn vertical_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges().filter(|e| e.is_vertical())
    }

    /// Vertical edges with at least one interior endpoint.
    pub fn interior_vertical_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.vertical_edges().filter(|e| self.is_interior(e.from) || self.is_interior(e.to))
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.contains(e.from) && self.contains(e.to) && e.from.step_to(e.to).is_some()
    }

    pub fn without(&self, v: Vertex) -> Result<Shape, GridError> {
        Shape::from_vertices(self.vertices().filter(|&w| w != v))
    }

    pub fn transpose(&self) -> Shape {
        Shape::from_vertices(self.vertices().map(Vertex::transpose)).expect("nonempty")
    }

    pub fn is_connected(&self) -> bool {
        let start = *self.vertices.first().expect("nonempty");
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for w in [v.north(), v.south(), v.east(), v.west()] {
                if self.contains(w) && seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen.len() == self.vertices.len()
    }

    /// Parses the `#`/`.` picture format. Each character is a cell and the
    /// first line is the northmost row.
    pub fn parse_ascii(text: &str) -> Result<Shape, GridError> {
        io::parse_ascii(text)
    }

    pub fn from_json(text: &str) -> Result<Shape, GridError> {
        io::from_json(text)
    }

    pub fn to_json(&self) -> ShapeJson {
        ShapeJson { vertices: self.vertices().map(|v| [v.x, v.y]).collect() }
    }
}
