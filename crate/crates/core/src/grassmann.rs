//! k-subsets of `[n]`, the crossing relation, and their paths in the
//! `k × (n−k)` rectangle.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::grid::{Path, PathKind, Shape, Vertex};
use crate::poset::{FinitePoset, PosetError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GrassmannError {
    #[error("{0:?} is not a subset of [{1}] with distinct elements")]
    BadSubset(Vec<u32>, u32),
    #[error("subsets of different sizes or ground sets")]
    Mismatch,
    #[error("{0} does not fit the {1}×{2} rectangle")]
    NotInRectangle(String, u32, u32),
    #[error("facets are not adjacent")]
    NotAdjacent,
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// A subset of `{1, …, n}`, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KSubset {
    n: u32,
    elements: Vec<u32>,
}

impl KSubset {
    pub fn new(n: u32, mut elements: Vec<u32>) -> Result<Self, GrassmannError> {
        elements.sort_unstable();
        let distinct = elements.windows(2).all(|w| w[0] < w[1]);
        if !distinct || elements.iter().any(|&e| e == 0 || e > n) {
            return Err(GrassmannError::BadSubset(elements, n));
        }
        Ok(KSubset { n, elements })
    }

    /// Parses a digit string such as `"145"`.
    pub fn parse(n: u32, digits: &str) -> Result<Self, GrassmannError> {
        let elements = digits.chars().map(|c| c.to_digit(10).unwrap_or(0)).collect();
        KSubset::new(n, elements)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.elements.len() as u32
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn contains(&self, e: u32) -> bool {
        self.elements.binary_search(&e).is_ok()
    }

    /// `{a, a+1, …}` modulo `n`. These are exactly the subsets whose paths are
    /// cones or degenerate.
    pub fn is_cyclic_interval(&self) -> bool {
        let k = self.elements.len() as u32;
        if k == 0 || k == self.n {
            return true;
        }
        (1..=self.n).any(|a| (0..k).all(|i| self.contains((a - 1 + i) % self.n + 1)))
    }

    /// All k-subsets of `[n]` in lexicographic order.
    pub fn all(k: u32, n: u32) -> Vec<KSubset> {
        fn go(next: u32, k: u32, n: u32, cur: &mut Vec<u32>, out: &mut Vec<KSubset>) {
            if cur.len() as u32 == k {
                out.push(KSubset { n, elements: cur.clone() });
                return;
            }
            for e in next..=n {
                cur.push(e);
                go(e + 1, k, n, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(1, k, n, &mut Vec::new(), &mut out);
        out
    }

    fn difference(&self, other: &KSubset) -> Vec<u32> {
        self.elements.iter().copied().filter(|&e| !other.contains(e)).collect()
    }
}

impl fmt::Display for KSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.n > 9 { "," } else { "" };
        let parts: Vec<String> = self.elements.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(sep))
    }
}

/// Indices `t` where `i_t < j_t < i_{t+1} < j_{t+1}`, for the sorted differences.
fn crossing_positions(i: &[u32], j: &[u32]) -> Vec<usize> {
    (0..i.len().saturating_sub(1)).filter(|&t| i[t] < j[t] && j[t] < i[t + 1] && i[t + 1] < j[t + 1]).collect()
}

pub fn is_crossing(i: &KSubset, j: &KSubset) -> Result<bool, GrassmannError> {
    if i.n != j.n || i.k() != j.k() {
        return Err(GrassmannError::Mismatch);
    }
    let (a, b) = (i.difference(j), j.difference(i));
    Ok(!crossing_positions(&a, &b).is_empty() || !crossing_positions(&b, &a).is_empty())
}

/// The rectangle with `k` rows and `n − k` columns.
pub fn rectangle(k: u32, n: u32) -> Shape {
    Shape::rectangle(k, n - k)
}

/// Walks from the NW corner with a South step at each position of `i` and
/// keeps the part that visits interior vertices. `None` for walks that hug
/// the boundary.
pub fn subset_to_path(i: &KSubset) -> Option<Path> {
    let (k, m) = (i.k() as i32, (i.n - i.k()) as i32);
    let interior = |v: Vertex| v.x > 0 && v.x < m && v.y > 0 && v.y < k;
    let mut walk = vec![Vertex::new(0, k)];
    for t in 1..=i.n {
        let v = *walk.last().expect("nonempty");
        walk.push(if i.contains(t) { v.south() } else { v.east() });
    }
    let first = walk.iter().position(|&v| interior(v))?;
    let last = walk.iter().rposition(|&v| interior(v))?;
    Some(Path::from_vertices_unchecked(walk[first - 1..=last + 1].to_vec()))
}

pub fn path_to_subset(p: &Path, k: u32, n: u32) -> Result<KSubset, GrassmannError> {
    let m = (n - k) as i32;
    let bad = || GrassmannError::NotInRectangle(p.to_string(), k, n - k);
    let (s, e) = (p.start(), p.end());
    let mut steps = Vec::new();
    match (s.x, s.y) {
        (0, y) if y <= k as i32 => steps.extend(std::iter::repeat_n(true, (k as i32 - y) as usize)),
        (x, y) if y == k as i32 && x <= m => steps.extend(std::iter::repeat_n(false, x as usize)),
        _ => return Err(bad()),
    }
    steps.extend(p.vertices().windows(2).map(|w| w[1].y < w[0].y));
    match (e.x, e.y) {
        (x, 0) if x <= m => steps.extend(std::iter::repeat_n(false, (m - x) as usize)),
        (x, y) if x == m && y >= 0 => steps.extend(std::iter::repeat_n(true, y as usize)),
        _ => return Err(bad()),
    }
    if steps.len() != n as usize {
        return Err(bad());
    }
    let elements = steps.iter().enumerate().filter(|(_, &s)| s).map(|(t, _)| t as u32 + 1).collect();
    KSubset::new(n, elements)
}

/// Whether the subset is a vertex of the reduced complex.
pub fn is_essential(i: &KSubset) -> bool {
    subset_to_path(i).is_some_and(|p| p.kind() == PathKind::Essential)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    FirstToSecond,
    SecondToFirst,
}

/// Orients the flip between two facets that differ in one subset: towards
/// the facet whose exchanged subset contributes the lexicographically larger
/// pair at the crossing.
pub fn lex_orientation(f1: &BTreeSet<KSubset>, f2: &BTreeSet<KSubset>) -> Result<Direction, GrassmannError> {
    let a: Vec<&KSubset> = f1.difference(f2).collect();
    let b: Vec<&KSubset> = f2.difference(f1).collect();
    let ([i], [j]) = (a.as_slice(), b.as_slice()) else {
        return Err(GrassmannError::NotAdjacent);
    };
    let (di, dj) = (i.difference(j), j.difference(i));
    let pairs = |x: &[u32], y: &[u32], t: usize| ([x[t], x[t + 1]], [y[t], y[t + 1]]);
    let found: Vec<([u32; 2], [u32; 2])> = crossing_positions(&di, &dj)
        .into_iter()
        .map(|t| pairs(&di, &dj, t))
        .chain(crossing_positions(&dj, &di).into_iter().map(|t| {
            let (y, x) = pairs(&dj, &di, t);
            (x, y)
        }))
        .collect();
    match found.as_slice() {
        [(pi, pj)] if pi < pj => Ok(Direction::FirstToSecond),
        [_] => Ok(Direction::SecondToFirst),
        _ => Err(GrassmannError::NotAdjacent),
    }
}

/// The Grassmann–Tamari order built from subsets alone: maximal non-crossing
/// families of non-interval subsets, with lexicographically oriented flips.
#[derive(Clone, Debug)]
pub struct GrassmannTamari {
    pub facets: Vec<BTreeSet<KSubset>>,
    pub poset: FinitePoset,
}

pub fn facet_name(f: &BTreeSet<KSubset>) -> String {
    let parts: Vec<String> = f.iter().map(KSubset::to_string).collect();
    format!("{{{}}}", parts.join(" "))
}

pub fn grassmann_tamari(k: u32, n: u32) -> Result<GrassmannTamari, GrassmannError> {
    let vertices: Vec<KSubset> = KSubset::all(k, n).into_iter().filter(|s| !s.is_cyclic_interval()).collect();
    let compatible = |s: &KSubset, f: &BTreeSet<KSubset>| f.iter().all(|t| !is_crossing(s, t).unwrap_or(true));
    let mut start = BTreeSet::new();
    for s in &vertices {
        if compatible(s, &start) {
            start.insert(s.clone());
        }
    }
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    let mut adjacent = Vec::new();
    while let Some(f) = queue.pop_front() {
        for s in &f {
            let mut rest = f.clone();
            rest.remove(s);
            for t in vertices.iter().filter(|t| !f.contains(*t) && compatible(t, &rest)) {
                let mut g = rest.clone();
                g.insert(t.clone());
                adjacent.push((f.clone(), g.clone()));
                if seen.insert(g.clone()) {
                    queue.push_back(g);
                }
            }
        }
    }
    let facets: Vec<BTreeSet<KSubset>> = seen.into_iter().collect();
    let index: HashMap<&BTreeSet<KSubset>, usize> = facets.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let mut relations = Vec::new();
    for (f, g) in &adjacent {
        if lex_orientation(f, g)? == Direction::FirstToSecond {
            relations.push((index[f], index[g]));
        }
    }
    relations.sort_unstable();
    relations.dedup();
    let poset = FinitePoset::from_relations(facets.iter().map(facet_name).collect(), &relations)?;
    Ok(GrassmannTamari { facets, poset })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(digits: &str) -> KSubset {
        KSubset::parse(6, digits).unwrap()
    }

    fn family(xs: &[&str]) -> BTreeSet<KSubset> {
        xs.iter().map(|x| s(x)).collect()
    }

    #[test]
    fn crossing_examples() {
        assert!(!is_crossing(&s("145"), &s("236")).unwrap());
        assert!(is_crossing(&s("145"), &s("246")).unwrap());
        assert!(is_crossing(&s("246"), &s("145")).unwrap());
        assert!(!is_crossing(&s("145"), &s("145")).unwrap());
        assert_eq!(is_crossing(&s("145"), &s("14")), Err(GrassmannError::Mismatch));
        assert!(KSubset::parse(6, "147").is_err());
        assert!(KSubset::parse(6, "114").is_err());
    }

    #[test]
    fn subset_paths() {
        let p = subset_to_path(&s("145")).unwrap();
        assert_eq!(
            p.to_string(),
            Path::from_vertices_unchecked(
                [(0, 2), (1, 2), (2, 2), (2, 1), (2, 0)].map(|(x, y)| Vertex::new(x, y)).to_vec()
            )
            .to_string()
        );
        let q = subset_to_path(&s("234")).unwrap();
        assert_eq!(q.vertices(), [(1, 3), (1, 2), (1, 1), (1, 0)].map(|(x, y)| Vertex::new(x, y)));
        assert_eq!(q.kind(), PathKind::Vertical);
        assert!(subset_to_path(&s("123")).is_none());
        assert!(subset_to_path(&s("456")).is_none());
    }

    #[test]
    fn round_trip_on_rectangles() {
        for (k, n) in [(2, 5), (3, 6), (2, 6), (3, 7)] {
            let shape = rectangle(k, n);
            for sub in KSubset::all(k, n) {
                if let Some(p) = subset_to_path(&sub) {
                    assert!(Path::new(&shape, p.vertices().to_vec()).is_ok());
                    assert_eq!(path_to_subset(&p, k, n).unwrap(), sub);
                }
                assert_eq!(is_essential(&sub), !sub.is_cyclic_interval(), "{sub}");
            }
        }
    }

    #[test]
    fn orientation_example() {
        let f1 = family(&["145", "146", "236", "245"]);
        let f2 = family(&["146", "236", "245", "246"]);
        assert_eq!(lex_orientation(&f1, &f2), Ok(Direction::FirstToSecond));
        assert_eq!(lex_orientation(&f2, &f1), Ok(Direction::SecondToFirst));
        assert_eq!(lex_orientation(&f1, &f1), Err(GrassmannError::NotAdjacent));
    }

    #[test]
    fn small_grassmann_tamari() {
        let gt = grassmann_tamari(2, 5).unwrap();
        assert_eq!(gt.facets.len(), 5);
        let gt = grassmann_tamari(3, 6).unwrap();
        assert_eq!(gt.facets.len(), 42);
        assert!(gt.facets.contains(&family(&["145", "146", "236", "245"])));
    }
}
