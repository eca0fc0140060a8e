//! Biclosed sets of segments, the lattice they form under inclusion, and the
//! quotient of that lattice onto the Grid-Tamari order.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::grid::{compose, enumerate_segments, Segment, Shape, SubsegmentKind};
use crate::nkcomplex::{ComplexError, Facet, GridTamari, NonKissingComplex};
use crate::poset::{Congruence, FinitePoset, Lattice, LatticeFailure};

/// The number of segments a [`SegSet`] can index.
pub const MAX_SEGMENTS: usize = 128;

#[derive(Debug, Error)]
pub enum BiclosedError {
    #[error("shape has {0} segments; at most {MAX_SEGMENTS} are supported")]
    TooManySegments(usize),
    #[error("segment set is not biclosed")]
    NotBiclosed,
    #[error("segment {0} does not belong to the shape")]
    UnknownSegment(Segment),
    #[error(transparent)]
    Lattice(#[from] LatticeFailure),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("quotient check failed: {0}")]
    Quotient(String),
}

/// A set of segments as a bit mask over a canonical segment order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SegSet(u128);

impl SegSet {
    pub const EMPTY: SegSet = SegSet(0);

    pub fn singleton(i: usize) -> Self {
        SegSet(1 << i)
    }

    pub fn full(n: usize) -> Self {
        if n == 128 {
            SegSet(u128::MAX)
        } else {
            SegSet((1u128 << n) - 1)
        }
    }

    pub fn bits(self) -> u128 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Self {
        SegSet(self.0 | 1 << i)
    }

    pub fn without(self, i: usize) -> Self {
        SegSet(self.0 & !(1 << i))
    }

    pub fn union(self, o: SegSet) -> Self {
        SegSet(self.0 | o.0)
    }

    pub fn intersection(self, o: SegSet) -> Self {
        SegSet(self.0 & o.0)
    }

    pub fn difference(self, o: SegSet) -> Self {
        SegSet(self.0 & !o.0)
    }

    pub fn is_subset(self, o: SegSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            (bits != 0).then(|| {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                i
            })
        })
    }
}

impl FromIterator<usize> for SegSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter().fold(SegSet::EMPTY, SegSet::with)
    }
}

/// A set that is closed and whose complement is closed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BiclosedSet(SegSet);

impl BiclosedSet {
    pub fn set(self) -> SegSet {
        self.0
    }
}

/// The segments of a shape with their composition table.
#[derive(Clone, Debug)]
pub struct SegmentClosure {
    shape: Shape,
    segments: Vec<Segment>,
    index: HashMap<Segment, usize>,
    /// `(s, t, s∘t)`, sorted by the length of the composite.
    compositions: Vec<(usize, usize, usize)>,
    sw: Vec<SegSet>,
    ne: Vec<SegSet>,
    containing: Vec<SegSet>,
}

impl SegmentClosure {
    pub fn new(shape: &Shape) -> Result<Self, BiclosedError> {
        let segments = enumerate_segments(shape);
        if segments.len() > MAX_SEGMENTS {
            return Err(BiclosedError::TooManySegments(segments.len()));
        }
        let index: HashMap<Segment, usize> = segments.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let mut compositions = Vec::new();
        for (i, s) in segments.iter().enumerate() {
            for (j, t) in segments.iter().enumerate() {
                if let Some(u) = compose(s, t) {
                    compositions.push((i, j, index[&u]));
                }
            }
        }
        compositions.sort_by_key(|&(_, _, u)| (segments[u].len(), u));
        let mask = |kind| {
            segments.iter().map(|s| s.subsegments(kind).iter().map(|t| index[t]).collect()).collect::<Vec<SegSet>>()
        };
        let (sw, ne) = (mask(SubsegmentKind::SouthWest), mask(SubsegmentKind::NorthEast));
        let containing = segments
            .iter()
            .map(|s| (0..segments.len()).filter(|&j| s.is_subsegment_of(&segments[j])).collect())
            .collect();
        Ok(SegmentClosure { shape: shape.clone(), segments, index, compositions, sw, ne, containing })
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn index_of(&self, s: &Segment) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn set_of<'a, I: IntoIterator<Item = &'a Segment>>(&self, segs: I) -> Result<SegSet, BiclosedError> {
        segs.into_iter().map(|s| self.index_of(s).ok_or_else(|| BiclosedError::UnknownSegment(s.clone()))).collect()
    }

    pub fn segments_of(&self, x: SegSet) -> Vec<&Segment> {
        x.iter().map(|i| &self.segments[i]).collect()
    }

    pub fn full(&self) -> SegSet {
        SegSet::full(self.len())
    }

    pub fn complement(&self, x: SegSet) -> SegSet {
        self.full().difference(x)
    }

    pub fn compositions(&self) -> &[(usize, usize, usize)] {
        &self.compositions
    }

    /// Segments containing segment `i`.
    pub fn containing(&self, i: usize) -> SegSet {
        self.containing[i]
    }

    /// The SW-subsegments of segment `i`, itself included.
    pub fn sw_subsegments(&self, i: usize) -> SegSet {
        self.sw[i]
    }

    pub fn ne_subsegments(&self, i: usize) -> SegSet {
        self.ne[i]
    }

    /// Smallest composition-closed superset. Composites are visited by
    /// increasing length, so both factors are final when a composite is seen.
    pub fn closure(&self, x: SegSet) -> SegSet {
        self.compositions.iter().fold(
            x,
            |acc, &(s, t, u)| {
                if acc.contains(s) && acc.contains(t) {
                    acc.with(u)
                } else {
                    acc
                }
            },
        )
    }

    pub fn is_closed(&self, x: SegSet) -> bool {
        self.compositions.iter().all(|&(s, t, u)| !(x.contains(s) && x.contains(t)) || x.contains(u))
    }

    pub fn is_biclosed(&self, x: SegSet) -> bool {
        self.is_closed(x) && self.is_closed(self.complement(x))
    }

    pub fn biclosed(&self, x: SegSet) -> Result<BiclosedSet, BiclosedError> {
        if self.is_biclosed(x) {
            Ok(BiclosedSet(x))
        } else {
            Err(BiclosedError::NotBiclosed)
        }
    }

    pub fn join(&self, x: BiclosedSet, y: BiclosedSet) -> BiclosedSet {
        BiclosedSet(self.closure(x.0.union(y.0)))
    }

    pub fn meet(&self, x: BiclosedSet, y: BiclosedSet) -> BiclosedSet {
        let co = self.closure(self.complement(x.0).union(self.complement(y.0)));
        BiclosedSet(self.complement(co))
    }

    /// Members all of whose SW-subsegments are members.
    pub fn down(&self, x: BiclosedSet) -> BiclosedSet {
        BiclosedSet(x.0.iter().filter(|&i| self.sw[i].is_subset(x.0)).collect())
    }

    /// Segments with some NE-subsegment in the set.
    pub fn up(&self, x: BiclosedSet) -> BiclosedSet {
        BiclosedSet((0..self.len()).filter(|&i| !self.ne[i].intersection(x.0).is_empty()).collect())
    }

    /// `closure(X↓ − S_{≥s})`.
    pub fn down_avoiding(&self, x: BiclosedSet, s: usize) -> BiclosedSet {
        BiclosedSet(self.closure(self.down(x).0.difference(self.containing[s])))
    }

    /// The set of SW-subsegments of segment `s`.
    pub fn a_s(&self, s: usize) -> BiclosedSet {
        BiclosedSet(self.sw[s])
    }

    /// `X ↦ (S − X)^tr` as a set on the transposed shape.
    pub fn complement_transpose(&self, x: SegSet, transposed: &SegmentClosure) -> SegSet {
        self.complement(x)
            .iter()
            .map(|i| transposed.index_of(&self.segments[i].transpose()).expect("transpose is a bijection"))
            .collect()
    }

    pub fn transpose_set(&self, x: SegSet, transposed: &SegmentClosure) -> SegSet {
        x.iter()
            .map(|i| transposed.index_of(&self.segments[i].transpose()).expect("transpose is a bijection"))
            .collect()
    }

    pub fn format_set(&self, x: SegSet) -> String {
        let parts: Vec<String> = x.iter().map(|i| self.segments[i].to_string()).collect();
        format!("{{{}}}", parts.join(" "))
    }

    /// All biclosed sets by breadth-first search from the empty set, adding
    /// one segment at a time.
    pub fn enumerate_biclosed(&self) -> Result<BicLattice, BiclosedError> {
        let mut sets = vec![SegSet::EMPTY];
        let mut index = HashMap::from([(SegSet::EMPTY, 0)]);
        let mut covers = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(k) = queue.pop_front() {
            let x = sets[k];
            for s in self.complement(x).iter() {
                let y = x.with(s);
                if !self.is_biclosed(y) {
                    continue;
                }
                let j = *index.entry(y).or_insert_with(|| {
                    sets.push(y);
                    queue.push_back(sets.len() - 1);
                    sets.len() - 1
                });
                covers.push((k, j, s));
            }
        }
        let cover_segment: HashMap<(usize, usize), usize> = covers.iter().map(|&(a, b, s)| ((a, b), s)).collect();
        let names = sets.iter().map(|&x| self.format_set(x)).collect();
        let poset = FinitePoset::from_covers(names, covers.iter().map(|&(a, b, _)| (a, b)).collect())
            .map_err(|e| BiclosedError::Quotient(e.to_string()))?
            .label_covers(|a, b| self.segments[cover_segment[&(a, b)]].to_string());
        let lattice = Lattice::new(poset)?;
        Ok(BicLattice { sets: sets.into_iter().map(BiclosedSet).collect(), index, cover_segment, lattice })
    }
}

/// `Bic(S)` ordered by inclusion; every cover adds a single segment.
#[derive(Clone, Debug)]
pub struct BicLattice {
    sets: Vec<BiclosedSet>,
    index: HashMap<SegSet, usize>,
    cover_segment: HashMap<(usize, usize), usize>,
    lattice: Lattice,
}

impl BicLattice {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sets(&self) -> &[BiclosedSet] {
        &self.sets
    }

    pub fn index_of(&self, x: BiclosedSet) -> Option<usize> {
        self.index.get(&x.0).copied()
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// The segment added along the cover `a ⋖ b`.
    pub fn cover_segment(&self, a: usize, b: usize) -> Option<usize> {
        self.cover_segment.get(&(a, b)).copied()
    }
}

/// One fiber of η: the interval `[X↓, X↑]` and its facet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaClass {
    pub bottom: BiclosedSet,
    pub top: BiclosedSet,
    pub facet: Facet,
}

/// For each interior vertical edge, the path built by rules that consult
/// `x` along the walk; the essential ones form a facet.
pub fn eta(closure: &SegmentClosure, complex: &NonKissingComplex, x: BiclosedSet) -> Facet {
    let member = |walk: &[crate::grid::Vertex]| {
        let s = Segment::new(closure.shape(), walk.to_vec()).expect("walk through interior vertices");
        x.0.contains(closure.index_of(&s).expect("segment of the shape"))
    };
    let paths = closure
        .shape()
        .interior_vertical_edges()
        .map(|e| complex.path_through_edge(e, member, member))
        .filter_map(|p| complex.essential_index(&p))
        .collect();
    Facet::new(paths)
}

/// Closure of the SW-subsegments of the facet's paths.
pub fn phi(closure: &SegmentClosure, complex: &NonKissingComplex, f: &Facet) -> BiclosedSet {
    let generators = complex
        .facet_paths(f)
        .flat_map(|p| p.sw_subsegments())
        .map(|s| closure.index_of(&s).expect("segment of the shape"))
        .collect();
    BiclosedSet(closure.closure(generators))
}

/// `Bic(S)/Θ` built from biclosed sets and checked against the flip order.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub closure: SegmentClosure,
    pub complex: NonKissingComplex,
    pub bic: BicLattice,
    pub gt: GridTamari,
    /// Sorted by the index of their facet in `gt`.
    pub classes: Vec<ThetaClass>,
    /// For each element of `bic`, the index of its class (and of its facet in `gt`).
    pub class_of: Vec<usize>,
    /// `Bic(S)/Θ`: classes ordered by comparing bottoms.
    pub poset: FinitePoset,
}

pub fn quotient_gt(shape: &Shape) -> Result<Quotient, BiclosedError> {
    let closure = SegmentClosure::new(shape)?;
    let complex = NonKissingComplex::new(shape.clone());
    let bic = closure.enumerate_biclosed()?;
    let gt = complex.grid_tamari()?;
    let fail = |msg: String| Err(BiclosedError::Quotient(msg));

    let mut classes: Vec<Option<ThetaClass>> = vec![None; gt.facets.len()];
    let mut class_of = Vec::with_capacity(bic.len());
    for &x in bic.sets() {
        let f = eta(&closure, &complex, x);
        let Some(k) = gt.facet_index(&f) else {
            return fail(format!("η({}) is not a facet", closure.format_set(x.0)));
        };
        let class = ThetaClass { bottom: closure.down(x), top: closure.up(x), facet: f };
        match &classes[k] {
            Some(c) if c.bottom != class.bottom || c.top != class.top => {
                return fail(format!("fiber of facet {k} is not a single Θ-class"));
            }
            Some(_) => {}
            None => classes[k] = Some(class),
        }
        class_of.push(k);
    }
    let Some(classes) = classes.into_iter().collect::<Option<Vec<ThetaClass>>>() else {
        return fail("some facet is not hit by η".into());
    };
    for (i, &x) in bic.sets().iter().enumerate() {
        let c = &classes[class_of[i]];
        let inside = c.bottom.0.is_subset(x.0) && x.0.is_subset(c.top.0);
        if !inside || closure.down(x) != c.bottom {
            return fail(format!("{} lies outside its class interval", closure.format_set(x.0)));
        }
    }
    let names = gt.poset.names().to_vec();
    let poset = FinitePoset::from_order(names, |i, j| classes[i].bottom.0.is_subset(classes[j].bottom.0))
        .map_err(|e| BiclosedError::Quotient(e.to_string()))?;
    if poset.covers() != gt.poset.covers() {
        return fail("quotient order differs from the flip order".into());
    }
    Ok(Quotient { closure, complex, bic, gt, classes, class_of, poset })
}

impl Quotient {
    /// The congruence of the flip order identifying facets whose classes have
    /// equal `X^{↓s}`.
    pub fn theta_s(&self, s: usize) -> Congruence {
        let keys: Vec<SegSet> = self.classes.iter().map(|c| self.closure.down_avoiding(c.bottom, s).0).collect();
        let mut first: HashMap<SegSet, usize> = HashMap::new();
        let ids: Vec<usize> = keys.iter().enumerate().map(|(i, k)| *first.entry(*k).or_insert(i)).collect();
        Congruence::from_classes(&ids)
    }
}

impl fmt::Display for SegSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}
