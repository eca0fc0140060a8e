//! Type A Cambrian lattices as triangulations of a polygon, and their
//! identification with the Grid-Tamari order of a double ribbon.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};
use thiserror::Error;

use crate::grid::{Cell, Path, Shape, Vertex};
use crate::nkcomplex::{ComplexError, NonKissingComplex};
use crate::poset::{FinitePoset, PosetError};

#[derive(Debug, Error)]
pub enum CambrianError {
    #[error("orientation symbol {ch:?} at position {pos}: expected '<' or '>'")]
    BadSymbol { pos: usize, ch: char },
    #[error("realizations disagree on the flip {0} <-> {1}")]
    SlopeDisagreement(Diagonal, Diagonal),
    #[error("flip {0} <-> {1} has equal slopes")]
    SlopeTie(Diagonal, Diagonal),
    #[error("tau is not a bijection: {0}")]
    NotBijective(String),
    #[error("paths {0} and {1}: kissing is {2} but crossing is {3}")]
    KissCross(String, String, bool, bool),
    #[error("tau does not carry the flip order onto the slope order")]
    CoverMismatch,
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// Direction of the edge between consecutive quiver vertices `v_{i−1}`, `v_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Arrow {
    /// `v_{i−1} → v_i`, written `>`.
    Forward,
    /// `v_i → v_{i−1}`, written `<`.
    Backward,
}

/// An orientation of the path quiver on `v_1, …, v_{n−1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Orientation(Vec<Arrow>);

impl Orientation {
    pub fn new(arrows: Vec<Arrow>) -> Self {
        Orientation(arrows)
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.0
    }

    /// The polygon has `n + 2` vertices.
    pub fn n(&self) -> usize {
        self.0.len() + 2
    }

    /// Every orientation with `len` arrows.
    pub fn all(len: usize) -> Vec<Orientation> {
        (0..1usize << len)
            .map(|m| {
                Orientation((0..len).map(|i| if m >> i & 1 == 1 { Arrow::Forward } else { Arrow::Backward }).collect())
            })
            .collect()
    }

    /// Whether `w_i` lies above the axis.
    pub fn above(&self, i: usize) -> bool {
        let n = self.n();
        match i {
            0 => true,
            i if i == n + 1 => true,
            1 => false,
            i if i == n => false,
            i => self.0[i - 2] == Arrow::Forward,
        }
    }
}

impl FromStr for Orientation {
    type Err = CambrianError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .enumerate()
            .map(|(pos, ch)| match ch {
                '>' => Ok(Arrow::Forward),
                '<' => Ok(Arrow::Backward),
                _ => Err(CambrianError::BadSymbol { pos, ch }),
            })
            .collect::<Result<_, _>>()
            .map(Orientation)
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|a| f.write_str(if *a == Arrow::Forward { ">" } else { "<" }))
    }
}

/// A diagonal `w_i w_j`, stored with `i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Diagonal(pub usize, pub usize);

impl Diagonal {
    pub fn new(a: usize, b: usize) -> Self {
        Diagonal(a.min(b), a.max(b))
    }
}

impl fmt::Display for Diagonal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w{}w{}", self.0, self.1)
    }
}

/// Two convex placements of the polygon, used to double-check slope comparisons.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Realization {
    Parabola,
    Cubic,
}

/// The polygon attached to an orientation, with vertices kept in cyclic order.
#[derive(Clone, Debug)]
pub struct Polygon {
    orientation: Orientation,
    /// Upper chain left to right, then lower chain right to left.
    cyclic: Vec<usize>,
    position: Vec<usize>,
}

impl Polygon {
    pub fn new(q: &Orientation) -> Self {
        let n = q.n();
        let upper = (0..=n + 1).filter(|&i| q.above(i));
        let lower = (0..=n + 1).rev().filter(|&i| !q.above(i));
        let cyclic: Vec<usize> = upper.chain(lower).collect();
        let mut position = vec![0; n + 2];
        for (p, &w) in cyclic.iter().enumerate() {
            position[w] = p;
        }
        Polygon { orientation: q.clone(), cyclic, position }
    }

    pub fn orientation(&self) -> &Orientation {
        &self.orientation
    }

    pub fn num_vertices(&self) -> usize {
        self.cyclic.len()
    }

    pub fn coordinates(&self, r: Realization) -> Vec<(i64, i64)> {
        let n = self.orientation.n() as i64;
        (0..=n + 1)
            .map(|i| {
                let x = 2 * i - (n + 1);
                let h = match r {
                    Realization::Parabola => (n + 1).pow(2) + 1 - x * x,
                    Realization::Cubic => (n + 1).pow(3) + 1 - x.abs().pow(3),
                };
                (i, if self.orientation.above(i as usize) { h } else { -h })
            })
            .collect()
    }

    pub fn is_side(&self, a: usize, b: usize) -> bool {
        let (p, q) = (self.position[a], self.position[b]);
        let m = self.cyclic.len();
        (p + 1) % m == q || (q + 1) % m == p
    }

    pub fn diagonals(&self) -> Vec<Diagonal> {
        let m = self.cyclic.len();
        let mut out: Vec<Diagonal> =
            (0..m).flat_map(|a| (a + 1..m).map(move |b| Diagonal(a, b))).filter(|d| !self.is_side(d.0, d.1)).collect();
        out.sort();
        out
    }

    pub fn crosses(&self, d: Diagonal, e: Diagonal) -> bool {
        if d.0 == e.0 || d.0 == e.1 || d.1 == e.0 || d.1 == e.1 {
            return false;
        }
        let (p, q) = {
            let (a, b) = (self.position[d.0], self.position[d.1]);
            (a.min(b), a.max(b))
        };
        let inside = |w: usize| (p + 1..q).contains(&self.position[w]);
        inside(e.0) != inside(e.1)
    }

    /// All triangulations, each a sorted list of diagonals.
    pub fn triangulations(&self) -> Vec<Vec<Diagonal>> {
        fn go(poly: &Polygon, a: usize, b: usize) -> Vec<Vec<Diagonal>> {
            if b - a < 2 {
                return vec![Vec::new()];
            }
            let chord = |x: usize, y: usize| Diagonal::new(poly.cyclic[x], poly.cyclic[y]);
            let mut out = Vec::new();
            for m in a + 1..b {
                for left in go(poly, a, m) {
                    for right in go(poly, m, b) {
                        let mut t: Vec<Diagonal> = left.iter().chain(&right).copied().collect();
                        if m > a + 1 {
                            t.push(chord(a, m));
                        }
                        if b > m + 1 {
                            t.push(chord(m, b));
                        }
                        out.push(t);
                    }
                }
            }
            out
        }
        let mut all: Vec<Vec<Diagonal>> = go(self, 0, self.cyclic.len() - 1)
            .into_iter()
            .map(|mut t| {
                t.sort();
                t
            })
            .collect();
        all.sort();
        all
    }

    /// The diagonal replacing `d` in the triangulation `t`.
    pub fn flip(&self, t: &[Diagonal], d: Diagonal) -> Diagonal {
        let linked = |a: usize, b: usize| self.is_side(a, b) || t.contains(&Diagonal::new(a, b));
        let apexes: Vec<usize> =
            (0..self.cyclic.len()).filter(|&c| c != d.0 && c != d.1 && linked(c, d.0) && linked(c, d.1)).collect();
        assert_eq!(apexes.len(), 2, "{d} must bound two triangles");
        Diagonal::new(apexes[0], apexes[1])
    }

    /// Compares the slopes of two diagonals.
    pub fn compare_slopes(&self, d: Diagonal, e: Diagonal, r: Realization) -> Ordering {
        let c = self.coordinates(r);
        let slope = |d: Diagonal| (c[d.1].1 - c[d.0].1, c[d.1].0 - c[d.0].0);
        let ((a, b), (x, y)) = (slope(d), slope(e));
        (a as i128 * y as i128).cmp(&(x as i128 * b as i128))
    }

    pub fn to_json(&self) -> Value {
        let coords = self.coordinates(Realization::Parabola);
        json!({
            "orientation": self.orientation.to_string(),
            "vertices": coords.iter().enumerate().map(|(i, &(x, y))| json!({
                "name": format!("w{i}"), "x": x, "y": y, "above": self.orientation.above(i)
            })).collect::<Vec<_>>(),
            "cyclic_order": self.cyclic,
        })
    }
}

/// The interior vertices `v_1, …, v_{n−1}` of the double ribbon.
pub fn ribbon_chain(q: &Orientation) -> Vec<Vertex> {
    let mut chain = vec![Vertex::new(0, 0)];
    for a in q.arrows() {
        let v = *chain.last().expect("nonempty");
        chain.push(match a {
            Arrow::Forward => v.south(),
            Arrow::Backward => v.east(),
        });
    }
    let (min_x, min_y) = (chain.iter().map(|v| v.x).min().unwrap_or(0), chain.iter().map(|v| v.y).min().unwrap_or(0));
    chain.into_iter().map(|v| Vertex::new(v.x - min_x + 1, v.y - min_y + 1)).collect()
}

/// The double ribbon: the four cells around each `v_i`.
pub fn ribbon(q: &Orientation) -> Shape {
    let cells = ribbon_chain(q)
        .into_iter()
        .flat_map(|v| [(-1, -1), (-1, 0), (0, -1), (0, 0)].map(|(dx, dy)| Cell { x: v.x + dx, y: v.y + dy }));
    Shape::from_cells(cells).expect("a ribbon has cells")
}

/// Boundary labels: `u_i` at the start of paths, `u'_j` at their end.
pub fn boundary_labels(q: &Orientation) -> (BTreeMap<Vertex, usize>, BTreeMap<Vertex, usize>) {
    let v = ribbon_chain(q);
    let n = q.n();
    let mut starts = BTreeMap::from([(v[0].west(), 0), (v[0].north(), 1)]);
    let mut ends = BTreeMap::from([(v[n - 2].east(), n + 1), (v[n - 2].south(), n)]);
    for i in 2..n {
        let (prev, cur) = (v[i - 2], v[i - 1]);
        if q.arrows()[i - 2] == Arrow::Forward {
            starts.insert(cur.west(), i);
            ends.insert(prev.east(), i);
        } else {
            starts.insert(cur.north(), i);
            ends.insert(prev.south(), i);
        }
    }
    (starts, ends)
}

/// Sends the path from `u_i` to `u'_j` to the diagonal `w_i w_j`.
pub fn tau(q: &Orientation, p: &Path) -> Option<Diagonal> {
    let (starts, ends) = boundary_labels(q);
    Some(Diagonal::new(*starts.get(&p.start())?, *ends.get(&p.end())?))
}

#[derive(Clone, Debug)]
pub struct Cambrian {
    pub polygon: Polygon,
    pub triangulations: Vec<Vec<Diagonal>>,
    pub poset: FinitePoset,
}

fn triangulation_name(t: &[Diagonal]) -> String {
    let parts: Vec<String> = t.iter().map(Diagonal::to_string).collect();
    format!("{{{}}}", parts.join(" "))
}

/// Triangulations ordered by flips that increase the slope of the exchanged
/// diagonal.
pub fn cambrian_poset(q: &Orientation) -> Result<Cambrian, CambrianError> {
    let polygon = Polygon::new(q);
    let triangulations = polygon.triangulations();
    let index: HashMap<&[Diagonal], usize> =
        triangulations.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect();
    let mut covers = Vec::new();
    for (i, t) in triangulations.iter().enumerate() {
        for &d in t {
            let e = polygon.flip(t, d);
            let [a, b] = [Realization::Parabola, Realization::Cubic].map(|r| polygon.compare_slopes(d, e, r));
            if a != b {
                return Err(CambrianError::SlopeDisagreement(d, e));
            }
            match a {
                Ordering::Equal => return Err(CambrianError::SlopeTie(d, e)),
                Ordering::Less => {
                    let mut u: Vec<Diagonal> = t.iter().map(|&x| if x == d { e } else { x }).collect();
                    u.sort();
                    covers.push((i, index[u.as_slice()]));
                }
                Ordering::Greater => {}
            }
        }
    }
    covers.sort_unstable();
    let names = triangulations.iter().map(|t| triangulation_name(t)).collect();
    let poset = FinitePoset::from_relations(names, &covers)?;
    Ok(Cambrian { polygon, triangulations, poset })
}

/// A verified isomorphism from `GT(ribbon(q))` to `Camb(q)`.
#[derive(Clone, Debug)]
pub struct CambrianIsomorphism {
    pub cambrian: Cambrian,
    pub grid_tamari: FinitePoset,
    /// GT element index to triangulation index.
    pub map: Vec<usize>,
}

/// Checks that τ is a bijection onto the diagonals, that kissing corresponds
/// to crossing, and that τ carries the flip order onto the slope order.
pub fn tau_isomorphism(q: &Orientation) -> Result<CambrianIsomorphism, CambrianError> {
    let cambrian = cambrian_poset(q)?;
    let nk = NonKissingComplex::new(ribbon(q));
    let images: Vec<Diagonal> = nk
        .essential_paths()
        .map(|p| tau(q, p).ok_or_else(|| CambrianError::NotBijective(format!("{p} has an unlabelled end"))))
        .collect::<Result<_, _>>()?;
    let distinct: BTreeSet<Diagonal> = images.iter().copied().collect();
    if distinct.len() != images.len() || distinct != cambrian.polygon.diagonals().into_iter().collect() {
        return Err(CambrianError::NotBijective(format!("{} paths, {} diagonals", images.len(), distinct.len())));
    }
    for a in 0..images.len() {
        for b in a + 1..images.len() {
            let kiss = !nk.compatible(a, b);
            let cross = cambrian.polygon.crosses(images[a], images[b]);
            if kiss != cross {
                return Err(CambrianError::KissCross(
                    nk.essential(a).to_string(),
                    nk.essential(b).to_string(),
                    kiss,
                    cross,
                ));
            }
        }
    }
    let gt = nk.grid_tamari()?;
    let index: HashMap<&[Diagonal], usize> =
        cambrian.triangulations.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect();
    let map: Vec<usize> = gt
        .facets
        .iter()
        .map(|f| {
            let mut t: Vec<Diagonal> = f.paths().iter().map(|&i| images[i]).collect();
            t.sort();
            index.get(t.as_slice()).copied().ok_or(CambrianError::CoverMismatch)
        })
        .collect::<Result<_, _>>()?;
    if !gt.poset.is_isomorphism(&cambrian.poset, &map) {
        return Err(CambrianError::CoverMismatch);
    }
    Ok(CambrianIsomorphism { cambrian, grid_tamari: gt.poset, map })
}
