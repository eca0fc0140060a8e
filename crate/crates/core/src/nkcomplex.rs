//! The reduced non-kissing complex of a shape, facet flips, and the
//! Grid-Tamari order on facets.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::grid::{
    compare_at_edge, enumerate_paths, kissing_runs, Edge, GridError, Path, Segment, Shape, Step, Vertex,
};
use crate::poset::{FinitePoset, PosetError};

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error("path index {0} is not in the facet")]
    NotInFacet(usize),
    #[error("paths {0} and {1} kiss")]
    Kissing(usize, usize),
    #[error("face is not maximal: path {0} can be added")]
    NotMaximal(usize),
    #[error("no path of the face contains edge {0}")]
    NoPathAt(Edge),
    #[error("flip of path {removed}: {reason}")]
    Flip { removed: usize, reason: String },
    #[error("flip {from} -> {to} is not a cover of the transitive closure")]
    FlipNotCover { from: usize, to: usize },
}

/// A facet of the reduced complex: sorted indices of essential paths.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Facet(Vec<usize>);

impl Facet {
    pub fn new(mut paths: Vec<usize>) -> Self {
        paths.sort_unstable();
        paths.dedup();
        Facet(paths)
    }

    pub fn paths(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, p: usize) -> bool {
        self.0.binary_search(&p).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn replace(&self, out: usize, inn: usize) -> Facet {
        Facet::new(self.0.iter().map(|&x| if x == out { inn } else { x }).collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlipDirection {
    /// The removed path enters the kissing segment from the West.
    Outgoing,
    Incoming,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flip {
    pub facet: Facet,
    pub removed: usize,
    pub added: usize,
    /// The unique segment along which the exchanged paths kiss.
    pub segment: Segment,
    pub direction: FlipDirection,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnumerationMethod {
    /// Breadth-first search over flips from the initial facet.
    Flips,
    /// Maximal cliques of the compatibility graph.
    Cliques,
}

#[derive(Clone, Debug)]
pub struct NonKissingComplex {
    shape: Shape,
    paths: Vec<Path>,
    essential: Vec<usize>,
    cones: Vec<usize>,
    essential_index: HashMap<Path, usize>,
    compatible: Vec<FixedBitSet>,
}

impl NonKissingComplex {
    pub fn new(shape: Shape) -> Self {
        let paths = enumerate_paths(&shape);
        let (essential, cones): (Vec<usize>, Vec<usize>) = (0..paths.len()).partition(|&i| paths[i].is_essential());
        let essential_index = essential.iter().enumerate().map(|(k, &i)| (paths[i].clone(), k)).collect();
        let n = essential.len();
        let mut compatible = vec![FixedBitSet::with_capacity(n); n];
        for a in 0..n {
            for b in a + 1..n {
                if !paths[essential[a]].kisses(&paths[essential[b]]) {
                    compatible[a].insert(b);
                    compatible[b].insert(a);
                }
            }
        }
        NonKissingComplex { shape, paths, essential, cones, essential_index, compatible }
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    /// All paths, including the straight ones.
    pub fn all_paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn num_essential(&self) -> usize {
        self.essential.len()
    }

    pub fn essential(&self, i: usize) -> &Path {
        &self.paths[self.essential[i]]
    }

    pub fn essential_paths(&self) -> impl Iterator<Item = &Path> + '_ {
        self.essential.iter().map(|&i| &self.paths[i])
    }

    pub fn essential_index(&self, p: &Path) -> Option<usize> {
        self.essential_index.get(p).copied()
    }

    /// Straight paths. They kiss nothing and lie in every facet of the
    /// unreduced complex.
    pub fn cone_paths(&self) -> impl Iterator<Item = &Path> + '_ {
        self.cones.iter().map(|&i| &self.paths[i])
    }

    pub fn compatible(&self, a: usize, b: usize) -> bool {
        a == b || self.compatible[a].contains(b)
    }

    /// Dimension of the reduced complex (facet size minus one).
    pub fn dimension(&self) -> isize {
        self.initial_facet().len() as isize - 1
    }

    pub fn check_facet(&self, f: &Facet) -> Result<(), ComplexError> {
        let n = self.num_essential();
        if let Some(&p) = f.paths().iter().find(|&&p| p >= n) {
            return Err(ComplexError::NotInFacet(p));
        }
        for (i, &a) in f.paths().iter().enumerate() {
            for &b in &f.paths()[i + 1..] {
                if !self.compatible(a, b) {
                    return Err(ComplexError::Kissing(a, b));
                }
            }
        }
        match (0..n).find(|&q| !f.contains(q) && f.paths().iter().all(|&a| self.compatible[a].contains(q))) {
            Some(q) => Err(ComplexError::NotMaximal(q)),
            None => Ok(()),
        }
    }

    pub fn facet_paths<'a>(&'a self, f: &'a Facet) -> impl Iterator<Item = &'a Path> + 'a {
        f.paths().iter().map(|&i| self.essential(i))
    }

    pub fn facet_label(&self, f: &Facet) -> String {
        let parts: Vec<String> = self.facet_paths(f).map(ToString::to_string).collect();
        format!("{{{}}}", parts.join(" "))
    }

    fn with_cones(&self, f: &Facet) -> Vec<&Path> {
        f.paths().iter().map(|&i| self.essential(i)).chain(self.cone_paths()).collect()
    }

    /// Walks through `e` in both directions. Going backwards from the top of
    /// `e`, `enter_north` decides (given the walk so far, from the current
    /// vertex to the top of `e`) whether to arrive from the North; going
    /// forwards from the bottom, `exit_east` decides whether to leave East.
    pub fn path_through_edge(
        &self,
        e: Edge,
        mut enter_north: impl FnMut(&[Vertex]) -> bool,
        mut exit_east: impl FnMut(&[Vertex]) -> bool,
    ) -> Path {
        let mut head = vec![e.from];
        while self.shape.is_interior(head[0]) {
            let cur = head[0];
            let prev = if enter_north(&head) { cur.north() } else { cur.west() };
            head.insert(0, prev);
        }
        let mut tail = vec![e.to];
        while self.shape.is_interior(*tail.last().expect("nonempty")) {
            let cur = *tail.last().expect("nonempty");
            let next = if exit_east(&tail) { cur.east() } else { cur.south() };
            tail.push(next);
        }
        head.extend(tail);
        Path::from_vertices_unchecked(head)
    }

    /// The bottom facet: through every interior vertical edge, the path that
    /// arrives from the West and leaves to the South.
    pub fn initial_facet(&self) -> Facet {
        let paths = self
            .shape
            .interior_vertical_edges()
            .map(|e| self.path_through_edge(e, |_| false, |_| false))
            .filter_map(|p| self.essential_index(&p))
            .collect();
        Facet::new(paths)
    }

    pub fn top_path(&self, f: &Facet, e: Edge) -> Result<&Path, ComplexError> {
        extreme_at(&self.with_cones(f), e, Ordering::Greater)
    }

    pub fn bottom_path(&self, f: &Facet, e: Edge) -> Result<&Path, ComplexError> {
        extreme_at(&self.with_cones(f), e, Ordering::Less)
    }

    /// Replaces `removed` by the unique other path completing the face.
    pub fn flip(&self, f: &Facet, removed: usize) -> Result<Flip, ComplexError> {
        if !f.contains(removed) {
            return Err(ComplexError::NotInFacet(removed));
        }
        let fail = |reason: &str| ComplexError::Flip { removed, reason: reason.to_string() };
        let rest = Facet::new(f.paths().iter().copied().filter(|&x| x != removed).collect());
        let candidates = self.with_cones(&rest);

        // Some path is now on top at two vertical edges.
        let mut tops: HashMap<&Path, Vec<Edge>> = HashMap::new();
        for e in self.shape.vertical_edges() {
            tops.entry(extreme_at(&candidates, e, Ordering::Greater)?).or_default().push(e);
        }
        let (r, mut edges) = tops
            .into_iter()
            .find(|(_, es)| es.len() >= 2)
            .ok_or_else(|| fail("no path is on top at two vertical edges"))?;
        if edges.len() != 2 {
            return Err(fail("a path is on top at more than two vertical edges"));
        }
        edges.sort_by_key(|e| r.edge_position(*e));
        let (v1, v2) = (edges[0].to, edges[1].from);
        let r2 = extreme_at(&candidates, Edge::horizontal(v1.west()), Ordering::Less)?;
        let (i, j) = match (r.position(v2), r2.position(v2)) {
            (Some(i), Some(j)) => (i, j),
            _ => return Err(fail("bottom path at the West edge misses the kissing segment")),
        };
        let splice = |a: &Path, ai: usize, b: &Path, bj: usize| {
            let mut vs = a.vertices()[..=ai].to_vec();
            vs.extend_from_slice(&b.vertices()[bj + 1..]);
            Path::from_vertices_unchecked(vs)
        };
        let q1 = splice(r, i, r2, j);
        let q2 = splice(r2, j, r, i);
        let old = self.essential(removed);
        let new = if &q1 == old {
            q2
        } else if &q2 == old {
            q1
        } else {
            return Err(fail("neither spliced path is the removed one"));
        };
        let added = self.essential_index(&new).ok_or_else(|| fail("spliced path is not essential"))?;
        let runs = kissing_runs(old, &new);
        let [run] = runs.as_slice() else {
            return Err(fail("exchanged paths do not kiss exactly once"));
        };
        let segment = old.segment(run.p_start, run.p_start + run.len - 1);
        let direction = if old.entry_step(run.p_start) == Some(Step::East) {
            FlipDirection::Outgoing
        } else {
            FlipDirection::Incoming
        };
        Ok(Flip { facet: f.replace(removed, added), removed, added, segment, direction })
    }

    /// Every essential path that can replace `removed`, by exhaustive search.
    pub fn flip_brute_force(&self, f: &Facet, removed: usize) -> Vec<usize> {
        let rest: Vec<usize> = f.paths().iter().copied().filter(|&x| x != removed).collect();
        (0..self.num_essential())
            .filter(|&q| !f.contains(q) && rest.iter().all(|&a| self.compatible[a].contains(q)))
            .collect()
    }

    pub fn enumerate_facets(&self, method: EnumerationMethod) -> Result<Vec<Facet>, ComplexError> {
        let mut facets = match method {
            EnumerationMethod::Flips => {
                let start = self.initial_facet();
                let mut seen = BTreeSet::from([start.clone()]);
                let mut queue = VecDeque::from([start]);
                while let Some(f) = queue.pop_front() {
                    for &p in f.paths() {
                        let g = self.flip(&f, p)?.facet;
                        if seen.insert(g.clone()) {
                            queue.push_back(g);
                        }
                    }
                }
                seen.into_iter().collect()
            }
            EnumerationMethod::Cliques => self.maximal_cliques(),
        };
        facets.sort();
        Ok(facets)
    }

    fn maximal_cliques(&self) -> Vec<Facet> {
        fn bron_kerbosch(
            g: &[FixedBitSet],
            r: &mut Vec<usize>,
            p: FixedBitSet,
            mut x: FixedBitSet,
            out: &mut Vec<Facet>,
        ) {
            if p.is_clear() && x.is_clear() {
                out.push(Facet::new(r.clone()));
                return;
            }
            let pivot =
                p.ones().chain(x.ones()).max_by_key(|&u| g[u].intersection(&p).count()).expect("p or x is nonempty");
            let mut p = p;
            let branch: Vec<usize> = p.ones().filter(|&v| !g[pivot].contains(v)).collect();
            for v in branch {
                r.push(v);
                bron_kerbosch(g, r, intersect(&p, &g[v]), intersect(&x, &g[v]), out);
                r.pop();
                p.set(v, false);
                x.insert(v);
            }
        }
        fn intersect(a: &FixedBitSet, b: &FixedBitSet) -> FixedBitSet {
            let mut c = a.clone();
            c.intersect_with(b);
            c
        }
        let n = self.num_essential();
        let mut all = FixedBitSet::with_capacity(n);
        all.insert_range(..);
        let mut out = Vec::new();
        bron_kerbosch(&self.compatible, &mut Vec::new(), all, FixedBitSet::with_capacity(n), &mut out);
        out
    }

    /// Face counts of the reduced complex by size, starting with the empty face.
    pub fn f_vector(&self) -> Vec<u64> {
        fn count(g: &[FixedBitSet], cand: &FixedBitSet, size: usize, f: &mut Vec<u64>) {
            if f.len() <= size {
                f.resize(size + 1, 0);
            }
            f[size] += 1;
            for v in cand.ones() {
                let mut next = cand.clone();
                next.intersect_with(&g[v]);
                next.remove_range(..v + 1);
                count(g, &next, size + 1, f);
            }
        }
        let n = self.num_essential();
        let mut all = FixedBitSet::with_capacity(n);
        all.insert_range(..);
        let mut f = Vec::new();
        count(&self.compatible, &all, 0, &mut f);
        f
    }

    /// All outgoing flips, and the order they generate.
    pub fn grid_tamari(&self) -> Result<GridTamari, ComplexError> {
        let facets = self.enumerate_facets(EnumerationMethod::Flips)?;
        let index: HashMap<&Facet, usize> = facets.iter().enumerate().map(|(i, f)| (f, i)).collect();
        let mut flips = Vec::new();
        for (i, f) in facets.iter().enumerate() {
            for &p in f.paths() {
                let flip = self.flip(f, p)?;
                if flip.direction == FlipDirection::Outgoing {
                    let to = index[&flip.facet];
                    flips.push(FlipEdge { from: i, to, removed: p, added: flip.added, segment: flip.segment });
                }
            }
        }
        flips.sort_by_key(|e| (e.from, e.to));
        let names = facets.iter().map(|f| self.facet_label(f)).collect();
        let relations: Vec<(usize, usize)> = flips.iter().map(|e| (e.from, e.to)).collect();
        let poset = FinitePoset::from_relations(names, &relations)?;
        if let Some(e) = flips.iter().find(|e| !poset.is_cover(e.from, e.to)) {
            return Err(ComplexError::FlipNotCover { from: e.from, to: e.to });
        }
        let labels: HashMap<(usize, usize), String> =
            flips.iter().map(|e| ((e.from, e.to), e.segment.to_string())).collect();
        let poset = poset.label_covers(|a, b| labels[&(a, b)].clone());
        Ok(GridTamari { facets, flips, poset })
    }
}

fn extreme_at<'a>(candidates: &[&'a Path], e: Edge, want: Ordering) -> Result<&'a Path, ComplexError> {
    let mut best: Option<&Path> = None;
    for &p in candidates.iter().filter(|p| p.contains_edge(e)) {
        best = match best {
            Some(b) if compare_at_edge(e, p, b)? != want => Some(b),
            _ => Some(p),
        };
    }
    best.ok_or(ComplexError::NoPathAt(e))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlipEdge {
    pub from: usize,
    pub to: usize,
    pub removed: usize,
    pub added: usize,
    pub segment: Segment,
}

/// Facets ordered by outgoing flips. Every flip is a cover.
#[derive(Clone, Debug)]
pub struct GridTamari {
    pub facets: Vec<Facet>,
    pub flips: Vec<FlipEdge>,
    pub poset: FinitePoset,
}

impl GridTamari {
    pub fn facet_index(&self, f: &Facet) -> Option<usize> {
        self.facets.binary_search(f).ok()
    }
}

impl fmt::Display for Facet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}
