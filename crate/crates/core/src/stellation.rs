//! Abstract simplicial complexes with suspension and edge stellation, and the
//! corner-by-corner construction of the reduced non-kissing complex.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;

use serde_json::{json, Value};
use thiserror::Error;

use crate::grid::{compare_at_edge, Edge, Path, Shape, Step, Vertex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StellationError {
    #[error("label {0} is already a vertex")]
    LabelCollision(String),
    #[error("{0} is not a face")]
    NotAFace(String),
}

/// A simplicial complex given by its facets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex<L: Ord> {
    facets: BTreeSet<BTreeSet<L>>,
}

impl<L: Ord + Clone + Debug> SimplicialComplex<L> {
    /// The complex `{∅}`.
    pub fn void_face() -> Self {
        SimplicialComplex { facets: BTreeSet::from([BTreeSet::new()]) }
    }

    /// Keeps only the maximal sets.
    pub fn from_facets<I: IntoIterator<Item = BTreeSet<L>>>(sets: I) -> Self {
        let all: BTreeSet<BTreeSet<L>> = sets.into_iter().collect();
        let facets = all.iter().filter(|f| !all.iter().any(|g| g != *f && f.is_subset(g))).cloned().collect();
        SimplicialComplex { facets }
    }

    pub fn facets(&self) -> &BTreeSet<BTreeSet<L>> {
        &self.facets
    }

    pub fn vertices(&self) -> BTreeSet<L> {
        self.facets.iter().flatten().cloned().collect()
    }

    pub fn is_face(&self, f: &BTreeSet<L>) -> bool {
        self.facets.iter().any(|g| f.is_subset(g))
    }

    pub fn map<M: Ord + Clone + Debug>(&self, f: impl Fn(&L) -> M) -> SimplicialComplex<M> {
        SimplicialComplex { facets: self.facets.iter().map(|g| g.iter().map(&f).collect()).collect() }
    }

    fn fresh(&self, labels: &[&L]) -> Result<(), StellationError> {
        let vs = self.vertices();
        match labels.iter().find(|l| vs.contains(l)) {
            Some(l) => Err(StellationError::LabelCollision(format!("{l:?}"))),
            None if labels.len() == 2 && labels[0] == labels[1] => {
                Err(StellationError::LabelCollision(format!("{:?}", labels[0])))
            }
            None => Ok(()),
        }
    }

    /// Join with the two-point complex `{a}, {b}`.
    pub fn suspension(&self, a: L, b: L) -> Result<Self, StellationError> {
        self.fresh(&[&a, &b])?;
        let facets = self
            .facets
            .iter()
            .flat_map(|g| {
                [&a, &b].map(|x| {
                    let mut h = g.clone();
                    h.insert(x.clone());
                    h
                })
            })
            .collect();
        Ok(SimplicialComplex { facets })
    }

    /// Stellar subdivision of the face `f` at the new vertex `v`: facets
    /// not containing `f` survive, and each facet `G ⊇ f` is replaced by the
    /// sets `(G − x) ∪ {v}` for `x ∈ f`.
    pub fn stellate(&self, f: &BTreeSet<L>, v: L) -> Result<Self, StellationError> {
        if f.is_empty() || !self.is_face(f) {
            return Err(StellationError::NotAFace(format!("{f:?}")));
        }
        self.fresh(&[&v])?;
        let mut facets = BTreeSet::new();
        for g in &self.facets {
            if !f.is_subset(g) {
                facets.insert(g.clone());
                continue;
            }
            for x in f {
                let mut h = g.clone();
                h.remove(x);
                h.insert(v.clone());
                facets.insert(h);
            }
        }
        Ok(SimplicialComplex { facets })
    }

    pub fn is_pure(&self) -> bool {
        let mut sizes = self.facets.iter().map(BTreeSet::len);
        let first = sizes.next();
        sizes.all(|s| Some(s) == first)
    }

    /// Every codimension-one face lies in exactly two facets.
    pub fn is_thin(&self) -> bool {
        let mut ridges: BTreeMap<BTreeSet<L>, usize> = BTreeMap::new();
        for g in &self.facets {
            for x in g {
                let mut r = g.clone();
                r.remove(x);
                *ridges.entry(r).or_default() += 1;
            }
        }
        ridges.values().all(|&c| c == 2)
    }
}

/// One step of the construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LogEntry {
    Suspend { labels: [Path; 2] },
    Stellate { edge: [Path; 2], new: Path },
}

impl LogEntry {
    pub fn to_json(&self) -> Value {
        let s = |ps: &[Path; 2]| ps.iter().map(Path::to_string).collect::<Vec<_>>();
        match self {
            LogEntry::Suspend { labels } => json!({"op": "suspend", "labels": s(labels)}),
            LogEntry::Stellate { edge, new } => json!({"op": "stellate", "edge": s(edge), "new": new.to_string()}),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Construction {
    pub complex: SimplicialComplex<Path>,
    /// Operations in order, with every path written as a path of the full shape.
    pub log: Vec<LogEntry>,
}

/// The SE-corner peeled first: largest in `(x, y)` order. This order
/// reproduces the vertex-introduction order of the 3×3 square figure.
pub fn peel_corner(shape: &Shape) -> Option<Vertex> {
    shape.se_corners().max()
}

/// Extends a path of the shape with `w` on its boundary so that it does not
/// turn at `w`.
fn straighten_through(p: &Path, w: Vertex, shape: &Shape) -> Path {
    if p.end() != w {
        return p.clone();
    }
    let step = p.entry_step(p.len() - 1).expect("path has an edge");
    let mut vs = p.vertices().to_vec();
    let mut cur = w;
    loop {
        cur = cur.step(step);
        vs.push(cur);
        if !shape.is_interior(cur) {
            break;
        }
    }
    Path::from_vertices_unchecked(vs)
}

/// The path through `w` that only turns there.
fn hook(shape: &Shape, w: Vertex, from_west: bool) -> Path {
    let (back, forward): (fn(Vertex) -> Vertex, Step) =
        if from_west { (Vertex::west, Step::South) } else { (Vertex::north, Step::East) };
    let mut head = vec![w];
    while shape.is_interior(head[0]) {
        head.insert(0, back(head[0]));
    }
    let mut cur = w;
    loop {
        cur = cur.step(forward);
        head.push(cur);
        if !shape.is_interior(cur) {
            break;
        }
    }
    Path::from_vertices_unchecked(head)
}

/// Builds the reduced non-kissing complex by peeling SE-corners: each time
/// the vertex diagonally inside the corner stops being interior, the
/// complex of the smaller shape is suspended and then stellated once per
/// path turning at that vertex.
pub fn build_by_stellation(shape: &Shape) -> Construction {
    let Some(c) = peel_corner(shape).filter(|_| shape.num_interior() > 0) else {
        return Construction { complex: SimplicialComplex::void_face(), log: Vec::new() };
    };
    let smaller = shape.without(c).expect("peeling a corner of a shape with interior vertices");
    let inner = build_by_stellation(&smaller);
    let w = Vertex::new(c.x - 1, c.y + 1);
    if !shape.is_interior(w) {
        return inner;
    }
    let extend = |p: &Path| straighten_through(p, w, shape);
    let mut complex = inner.complex.map(extend);
    let mut log: Vec<LogEntry> = inner
        .log
        .iter()
        .map(|e| match e {
            LogEntry::Suspend { labels } => LogEntry::Suspend { labels: labels.clone().map(|p| extend(&p)) },
            LogEntry::Stellate { edge, new } => {
                LogEntry::Stellate { edge: edge.clone().map(|p| extend(&p)), new: extend(new) }
            }
        })
        .collect();

    let (q_w, q_n) = (hook(shape, w, true), hook(shape, w, false));
    complex = complex.suspension(q_w.clone(), q_n.clone()).expect("hooks at w are new");
    log.push(LogEntry::Suspend { labels: [q_w.clone(), q_n.clone()] });

    let turning: Vec<Path> = crate::grid::enumerate_paths(shape)
        .into_iter()
        .filter(|p| p.position(w).is_some_and(|i| p.turns_at(i)))
        .collect();
    let (e_w, e_n) = (Edge::horizontal(w.west()), Edge::vertical(w.north()));
    let mut west: Vec<&Path> = turning.iter().filter(|p| p.contains_edge(e_w) && **p != q_w).collect();
    let mut north: Vec<&Path> = turning.iter().filter(|p| p.contains_edge(e_n) && **p != q_n).collect();
    let order = |e: Edge| move |a: &&Path, b: &&Path| compare_at_edge(e, a, b).expect("paths share their end at w");
    west.sort_by(order(e_w));
    north.sort_by(order(e_n));
    north.reverse();

    for (paths, hub) in [(west, &q_w), (north, &q_n)] {
        for p in paths {
            let i = p.position(w).expect("turns at w");
            let r = straighten_through(&Path::from_vertices_unchecked(p.vertices()[..=i].to_vec()), w, shape);
            let edge = BTreeSet::from([r.clone(), hub.clone()]);
            complex = complex.stellate(&edge, p.clone()).expect("edge of the current complex");
            log.push(LogEntry::Stellate { edge: [r, hub.clone()], new: p.clone() });
        }
    }
    Construction { complex, log }
}
