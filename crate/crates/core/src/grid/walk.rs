use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::Add;

use super::{Cell, Edge, GridError, Shape, Step, Vertex};
use crate::poset::FinitePoset;

fn write_walk(f: &mut fmt::Formatter<'_>, vertices: &[Vertex]) -> fmt::Result {
    write!(f, "{}", vertices[0])?;
    for w in vertices.windows(2) {
        let step = w[0].step_to(w[1]).expect("walks move South or East");
        write!(f, "{}", step.letter())?;
    }
    Ok(())
}

fn check_steps(vertices: &[Vertex]) -> Result<(), GridError> {
    for w in vertices.windows(2) {
        if w[0].step_to(w[1]).is_none() {
            return Err(GridError::NotAStep(w[0], w[1]));
        }
    }
    Ok(())
}

fn entry_step(walk: &[Vertex], i: usize) -> Option<Step> {
    (i > 0).then(|| walk[i - 1].step_to(walk[i]).expect("valid walk"))
}

fn exit_step(walk: &[Vertex], i: usize) -> Option<Step> {
    (i + 1 < walk.len()).then(|| walk[i].step_to(walk[i + 1]).expect("valid walk"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PathKind {
    Horizontal,
    Vertical,
    Essential,
}

/// A South/East walk between two boundary vertices whose intermediate
/// vertices are all interior.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    vertices: Vec<Vertex>,
}

impl Path {
    pub fn new(shape: &Shape, vertices: Vec<Vertex>) -> Result<Self, GridError> {
        if vertices.len() < 2 {
            return Err(GridError::TooShort(2));
        }
        if let Some(&v) = vertices.iter().find(|&&v| !shape.contains(v)) {
            return Err(GridError::MissingVertex(v));
        }
        check_steps(&vertices)?;
        let (first, last) = (vertices[0], vertices[vertices.len() - 1]);
        for v in [first, last] {
            if shape.is_interior(v) {
                return Err(GridError::InteriorEndpoint(v));
            }
        }
        if let Some(&v) = vertices[1..vertices.len() - 1].iter().find(|&&v| !shape.is_interior(v)) {
            return Err(GridError::BoundaryIntermediate(v));
        }
        Ok(Path { vertices })
    }

    /// Builds a path without checking it against a shape.
    pub(crate) fn from_vertices_unchecked(vertices: Vec<Vertex>) -> Self {
        debug_assert!(vertices.len() >= 2);
        Path { vertices }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn start(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn end(&self) -> Vertex {
        self.vertices[self.vertices.len() - 1]
    }

    pub fn steps(&self) -> impl Iterator<Item = Step> + '_ {
        self.vertices.windows(2).map(|w| w[0].step_to(w[1]).expect("valid walk"))
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.vertices.windows(2).map(|w| Edge { from: w[0], to: w[1] })
    }

    pub fn kind(&self) -> PathKind {
        let (mut east, mut south) = (false, false);
        for s in self.steps() {
            match s {
                Step::East => east = true,
                Step::South => south = true,
            }
        }
        match (east, south) {
            (true, false) => PathKind::Horizontal,
            (false, true) => PathKind::Vertical,
            _ => PathKind::Essential,
        }
    }

    pub fn is_essential(&self) -> bool {
        self.kind() == PathKind::Essential
    }

    pub fn position(&self, v: Vertex) -> Option<usize> {
        self.vertices.iter().position(|&w| w == v)
    }

    pub fn edge_position(&self, e: Edge) -> Option<usize> {
        self.position(e.from).filter(|&i| self.vertices.get(i + 1) == Some(&e.to))
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.edge_position(e).is_some()
    }

    pub fn entry_step(&self, i: usize) -> Option<Step> {
        entry_step(&self.vertices, i)
    }

    pub fn exit_step(&self, i: usize) -> Option<Step> {
        exit_step(&self.vertices, i)
    }

    /// Whether the path changes direction at vertex index `i`.
    pub fn turns_at(&self, i: usize) -> bool {
        matches!((self.entry_step(i), self.exit_step(i)), (Some(a), Some(b)) if a != b)
    }

    /// The subwalk between vertex indices `i..=j` as a segment. Both ends
    /// must be intermediate vertices.
    pub fn segment(&self, i: usize, j: usize) -> Segment {
        debug_assert!(0 < i && i <= j && j + 1 < self.len());
        Segment { vertices: self.vertices[i..=j].to_vec() }
    }

    /// Subsegments entered from the North and left to the East.
    pub fn sw_subsegments(&self) -> Vec<Segment> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 1..n - 1 {
            if self.entry_step(i) != Some(Step::South) {
                continue;
            }
            for j in i..n - 1 {
                if self.exit_step(j) == Some(Step::East) {
                    out.push(self.segment(i, j));
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Path {
        Path { vertices: self.vertices.iter().map(|v| v.transpose()).collect() }
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_walk(f, &self.vertices)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SubsegmentKind {
    /// Entered vertically (or at its start) and left horizontally (or at its end).
    SouthWest,
    /// Entered horizontally (or at its start) and left vertically (or at its end).
    NorthEast,
}

/// A nonempty South/East walk through interior vertices only.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Segment {
    vertices: Vec<Vertex>,
}

impl Segment {
    pub fn new(shape: &Shape, vertices: Vec<Vertex>) -> Result<Self, GridError> {
        if vertices.is_empty() {
            return Err(GridError::TooShort(1));
        }
        if let Some(&v) = vertices.iter().find(|&&v| !shape.is_interior(v)) {
            return Err(GridError::BoundarySegmentVertex(v));
        }
        check_steps(&vertices)?;
        Ok(Segment { vertices })
    }

    pub fn lazy(v: Vertex) -> Self {
        Segment { vertices: vec![v] }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_lazy(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn init(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn term(&self) -> Vertex {
        self.vertices[self.vertices.len() - 1]
    }

    /// Whether `self` appears as a contiguous piece of `other`.
    pub fn is_subsegment_of(&self, other: &Segment) -> bool {
        other
            .vertices
            .iter()
            .position(|&v| v == self.init())
            .is_some_and(|i| other.vertices[i..].starts_with(&self.vertices))
    }

    pub fn subsegments(&self, kind: SubsegmentKind) -> Vec<Segment> {
        let n = self.len();
        let (start_step, end_step) = match kind {
            SubsegmentKind::SouthWest => (Step::South, Step::East),
            SubsegmentKind::NorthEast => (Step::East, Step::South),
        };
        let mut out = Vec::new();
        for i in 0..n {
            if i > 0 && entry_step(&self.vertices, i) != Some(start_step) {
                continue;
            }
            for j in i..n {
                if j + 1 == n || exit_step(&self.vertices, j) == Some(end_step) {
                    out.push(Segment { vertices: self.vertices[i..=j].to_vec() });
                }
            }
        }
        out
    }

    pub fn bending_vector(&self) -> BendingVector {
        self.vertices.iter().map(|&v| BendingVector::at_vertex(v)).fold(BendingVector::default(), |a, b| a + b)
    }

    pub fn transpose(&self) -> Segment {
        Segment { vertices: self.vertices.iter().map(|v| v.transpose()).collect() }
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_walk(f, &self.vertices)
    }
}

/// `s` followed by `t`, when `t` starts one step South or East of the end of `s`.
pub fn compose(s: &Segment, t: &Segment) -> Option<Segment> {
    s.term().step_to(t.init())?;
    let mut vertices = s.vertices.clone();
    vertices.extend_from_slice(&t.vertices);
    Some(Segment { vertices })
}

/// Sparse integer vector indexed by cells.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BendingVector(BTreeMap<Cell, i32>);

impl BendingVector {
    /// `+1` on the North-West and South-East cells around `v`, `-1` on the
    /// North-East and South-West ones.
    pub fn at_vertex(v: Vertex) -> Self {
        BendingVector(BTreeMap::from([
            (Cell::new(v.x - 1, v.y), 1),
            (Cell::new(v.x, v.y - 1), 1),
            (Cell::new(v.x, v.y), -1),
            (Cell::new(v.x - 1, v.y - 1), -1),
        ]))
    }

    pub fn get(&self, c: Cell) -> i32 {
        self.0.get(&c).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (Cell, i32)> + '_ {
        self.0.iter().map(|(&c, &x)| (c, x))
    }
}

impl Add for BendingVector {
    type Output = BendingVector;

    fn add(mut self, rhs: BendingVector) -> BendingVector {
        for (c, x) in rhs.0 {
            let e = self.0.entry(c).or_insert(0);
            *e += x;
            if *e == 0 {
                self.0.remove(&c);
            }
        }
        self
    }
}

/// A maximal stretch shared by two walks: `p[p_start..p_start+len]` equals
/// `q[q_start..q_start+len]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CommonRun {
    pub p_start: usize,
    pub q_start: usize,
    pub len: usize,
}

fn common_runs(p: &[Vertex], q: &[Vertex]) -> Vec<CommonRun> {
    let q_index: HashMap<Vertex, usize> = q.iter().enumerate().map(|(j, &v)| (v, j)).collect();
    let mut runs = Vec::new();
    let mut i = 0;
    while i < p.len() {
        let Some(&j) = q_index.get(&p[i]) else {
            i += 1;
            continue;
        };
        let mut len = 1;
        while i + len < p.len() && j + len < q.len() && p[i + len] == q[j + len] {
            len += 1;
        }
        runs.push(CommonRun { p_start: i, q_start: j, len });
        i += len;
    }
    runs
}

fn run_kisses(p: &Path, q: &Path, run: &CommonRun) -> bool {
    let last = run.len - 1;
    let ends = (
        p.entry_step(run.p_start),
        p.exit_step(run.p_start + last),
        q.entry_step(run.q_start),
        q.exit_step(run.q_start + last),
    );
    use Step::{East, South};
    matches!(
        ends,
        (Some(East), Some(South), Some(South), Some(East)) | (Some(South), Some(East), Some(East), Some(South))
    )
}

/// Common runs along which one path enters from the West and leaves South
/// while the other enters from the North and leaves East.
pub fn kissing_runs(p: &Path, q: &Path) -> Vec<CommonRun> {
    common_runs(&p.vertices, &q.vertices).into_iter().filter(|r| run_kisses(p, q, r)).collect()
}

pub fn kissing_segments(p: &Path, q: &Path) -> Vec<Segment> {
    kissing_runs(p, q).into_iter().map(|r| p.segment(r.p_start, r.p_start + r.len - 1)).collect()
}

impl Path {
    pub fn kisses(&self, other: &Path) -> bool {
        common_runs(&self.vertices, &other.vertices).iter().any(|r| run_kisses(self, other, r))
    }
}

/// Compares two non-kissing paths through `e`. `Less` means `p` sits below
/// `q` at `e`: along their common run through `e`, `p` enters from the North
/// or leaves to the South.
pub fn compare_at_edge(e: Edge, p: &Path, q: &Path) -> Result<Ordering, GridError> {
    let (Some(i), Some(j)) = (p.edge_position(e), q.edge_position(e)) else {
        return Err(GridError::EdgeNotShared(e));
    };
    let (pv, qv) = (&p.vertices, &q.vertices);
    let (mut a, mut b) = (i, j);
    while a > 0 && b > 0 && pv[a - 1] == qv[b - 1] {
        a -= 1;
        b -= 1;
    }
    let (mut c, mut d) = (i + 1, j + 1);
    while c + 1 < pv.len() && d + 1 < qv.len() && pv[c + 1] == qv[d + 1] {
        c += 1;
        d += 1;
    }
    let at_start = match (p.entry_step(a), q.entry_step(b)) {
        (Some(x), Some(y)) if x != y => Some(x == Step::South),
        _ => None,
    };
    let at_end = match (p.exit_step(c), q.exit_step(d)) {
        (Some(x), Some(y)) if x != y => Some(x == Step::South),
        _ => None,
    };
    let below = match (at_start, at_end) {
        (None, None) => return Err(GridError::IdenticalPaths),
        (Some(s), Some(t)) if s != t => return Err(GridError::KissAtEdge(e)),
        (Some(s), _) | (None, Some(s)) => s,
    };
    Ok(if below { Ordering::Less } else { Ordering::Greater })
}

/// Every path of the shape in canonical (lexicographic vertex) order,
/// including the single-edge boundary paths.
pub fn enumerate_paths(shape: &Shape) -> Vec<Path> {
    fn extend(shape: &Shape, walk: &mut Vec<Vertex>, out: &mut Vec<Path>) {
        let v = *walk.last().expect("nonempty");
        for w in [v.east(), v.south()] {
            if !shape.contains(w) {
                continue;
            }
            walk.push(w);
            if shape.is_interior(w) {
                extend(shape, walk, out);
            } else {
                out.push(Path { vertices: walk.clone() });
            }
            walk.pop();
        }
    }
    let mut out = Vec::new();
    for v in shape.vertices().filter(|&v| shape.is_boundary(v)) {
        extend(shape, &mut vec![v], &mut out);
    }
    out.sort();
    out
}

/// Every segment of the shape, ordered by length and then lexicographically.
pub fn enumerate_segments(shape: &Shape) -> Vec<Segment> {
    fn extend(shape: &Shape, walk: &mut Vec<Vertex>, out: &mut Vec<Segment>) {
        out.push(Segment { vertices: walk.clone() });
        let v = *walk.last().expect("nonempty");
        for w in [v.east(), v.south()] {
            if shape.is_interior(w) {
                walk.push(w);
                extend(shape, walk, out);
                walk.pop();
            }
        }
    }
    let mut out = Vec::new();
    for v in shape.interior_vertices() {
        extend(shape, &mut vec![v], &mut out);
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Segments ordered by inclusion.
pub fn containment_order(segments: &[Segment]) -> FinitePoset {
    let names = segments.iter().map(ToString::to_string).collect();
    FinitePoset::from_order(names, |i, j| segments[i].is_subsegment_of(&segments[j]))
        .expect("inclusion is a partial order")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: i32, y: i32) -> Vertex {
        Vertex::new(x, y)
    }

    fn path(vs: &[(i32, i32)]) -> Path {
        Path::from_vertices_unchecked(vs.iter().map(|&(x, y)| v(x, y)).collect())
    }

    fn seg(vs: &[(i32, i32)]) -> Segment {
        Segment { vertices: vs.iter().map(|&(x, y)| v(x, y)).collect() }
    }

    #[test]
    fn two_by_three_paths() {
        let shape = Shape::rectangle(2, 3);
        let paths = enumerate_paths(&shape);
        let essential: Vec<_> = paths.iter().filter(|p| p.is_essential()).collect();
        assert_eq!(essential.len(), 5);
        let expected = [
            path(&[(0, 1), (1, 1), (1, 0)]),
            path(&[(0, 1), (1, 1), (2, 1), (2, 0)]),
            path(&[(1, 2), (1, 1), (2, 1), (2, 0)]),
            path(&[(1, 2), (1, 1), (2, 1), (3, 1)]),
            path(&[(2, 2), (2, 1), (3, 1)]),
        ];
        for p in &expected {
            assert!(essential.contains(&p), "missing {p}");
            assert!(Path::new(&shape, p.vertices.clone()).is_ok());
        }
    }

    #[test]
    fn path_validation() {
        let shape = Shape::rectangle(2, 3);
        assert_eq!(Path::new(&shape, vec![v(1, 1), v(1, 0)]).unwrap_err(), GridError::InteriorEndpoint(v(1, 1)));
        assert_eq!(
            Path::new(&shape, vec![v(0, 2), v(1, 2), v(1, 1), v(1, 0)]).unwrap_err(),
            GridError::BoundaryIntermediate(v(1, 2))
        );
        assert_eq!(Path::new(&shape, vec![v(0, 1), v(1, 0)]).unwrap_err(), GridError::NotAStep(v(0, 1), v(1, 0)));
    }

    #[test]
    fn square_segments() {
        let segs = enumerate_segments(&Shape::rectangle(3, 3));
        assert_eq!(segs.len(), 10);
        assert_eq!(segs.iter().filter(|s| s.is_lazy()).count(), 4);
        assert_eq!(segs.iter().filter(|s| s.len() == 2).count(), 4);
        assert_eq!(segs.iter().filter(|s| s.len() == 3).count(), 2);
    }

    #[test]
    fn kissing_in_two_by_three() {
        let a = path(&[(0, 1), (1, 1), (1, 0)]);
        let d = path(&[(1, 2), (1, 1), (2, 1), (2, 0)]);
        let b = path(&[(0, 1), (1, 1), (2, 1), (2, 0)]);
        assert!(a.kisses(&d));
        assert_eq!(kissing_segments(&a, &d), vec![Segment::lazy(v(1, 1))]);
        assert!(!a.kisses(&b));
        assert!(!b.kisses(&d));
    }

    #[test]
    fn order_at_edge() {
        let a = path(&[(0, 1), (1, 1), (1, 0)]);
        let b = path(&[(0, 1), (1, 1), (2, 1), (2, 0)]);
        let e = Edge::horizontal(v(0, 1));
        // b leaves the shared run East, a leaves South: a is below.
        assert_eq!(compare_at_edge(e, &a, &b).unwrap(), Ordering::Less);
        assert_eq!(compare_at_edge(e, &b, &a).unwrap(), Ordering::Greater);
        assert_eq!(compare_at_edge(e, &a, &a).unwrap_err(), GridError::IdenticalPaths);
        let d = path(&[(1, 2), (1, 1), (2, 1), (2, 0)]);
        assert_eq!(compare_at_edge(e, &a, &d).unwrap_err(), GridError::EdgeNotShared(e));
    }

    #[test]
    fn subsegments_of_hook() {
        let hook = seg(&[(1, 2), (1, 1), (2, 1)]);
        let sw = hook.subsegments(SubsegmentKind::SouthWest);
        let expected = [seg(&[(1, 2), (1, 1), (2, 1)]), seg(&[(1, 2), (1, 1)]), seg(&[(1, 1)]), seg(&[(1, 1), (2, 1)])];
        assert_eq!(sw.len(), 4);
        for s in &expected {
            assert!(sw.contains(s));
        }
        let ne = hook.subsegments(SubsegmentKind::NorthEast);
        assert_eq!(ne.len(), 3);
        assert!(ne.contains(&hook) && ne.contains(&seg(&[(1, 2)])) && ne.contains(&seg(&[(2, 1)])));
    }

    #[test]
    fn compose_segments() {
        let s = seg(&[(1, 2)]);
        let t = seg(&[(1, 1), (2, 1)]);
        assert_eq!(compose(&s, &t), Some(seg(&[(1, 2), (1, 1), (2, 1)])));
        assert_eq!(compose(&t, &s), None);
    }

    #[test]
    fn bending_vector_cancels_inside() {
        let s = seg(&[(1, 1), (2, 1)]);
        let b = s.bending_vector();
        assert_eq!(b.get(Cell::new(0, 1)), 1);
        assert_eq!(b.get(Cell::new(2, 0)), 1);
        assert_eq!(b.get(Cell::new(2, 1)), -1);
        assert_eq!(b.get(Cell::new(0, 0)), -1);
        // The middle cells get +1 from one vertex and -1 from the other.
        assert_eq!(b.get(Cell::new(1, 0)), 0);
        assert_eq!(b.entries().count(), 4);
    }

    #[test]
    fn sw_subsegments_of_path() {
        let p = path(&[(1, 3), (1, 2), (2, 2), (2, 1), (2, 0)]);
        assert_eq!(p.sw_subsegments(), vec![seg(&[(1, 2)])]);
    }
}
