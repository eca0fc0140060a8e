use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use super::{FinitePoset, Lattice};

/// A lattice congruence stored as a partition. Each element maps to the
/// smallest index in its class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Congruence {
    class_of: Vec<usize>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CongruenceDefect {
    #[error("class of {0} has no least element")]
    NoClassBottom(usize),
    #[error("class of {0} has no greatest element")]
    NoClassTop(usize),
    #[error("element {inside} lies in the interval of the class of {class} but not in the class")]
    NotInterval { class: usize, inside: usize },
    #[error("projection down is not monotone on cover ({0}, {1})")]
    DownNotMonotone(usize, usize),
    #[error("projection up is not monotone on cover ({0}, {1})")]
    UpNotMonotone(usize, usize),
    #[error("{x} and {y} are equivalent but their joins with {z} are not")]
    Join { x: usize, y: usize, z: usize },
    #[error("{x} and {y} are equivalent but their meets with {z} are not")]
    Meet { x: usize, y: usize, z: usize },
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            y = std::mem::replace(&mut self.0[y], r);
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.0[hi] = lo;
        true
    }
}

impl Congruence {
    pub fn trivial(n: usize) -> Self {
        Congruence { class_of: (0..n).collect() }
    }

    /// Normalises an arbitrary labelling of classes.
    pub fn from_classes(class_of: &[usize]) -> Self {
        let mut first: HashMap<usize, usize> = HashMap::new();
        let class_of = class_of.iter().enumerate().map(|(x, c)| *first.entry(*c).or_insert(x)).collect();
        Congruence { class_of }
    }

    fn from_union_find(uf: &mut UnionFind) -> Self {
        let n = uf.0.len();
        let roots: Vec<usize> = (0..n).map(|x| uf.find(x)).collect();
        Congruence::from_classes(&roots)
    }

    pub fn len(&self) -> usize {
        self.class_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class_of.is_empty()
    }

    pub fn class_id(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn same_class(&self, x: usize, y: usize) -> bool {
        self.class_of[x] == self.class_of[y]
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut by_id: Vec<Vec<usize>> = vec![Vec::new(); self.len()];
        for (x, &c) in self.class_of.iter().enumerate() {
            by_id[c].push(x);
        }
        by_id.into_iter().filter(|c| !c.is_empty()).collect()
    }

    pub fn num_classes(&self) -> usize {
        self.class_of.iter().enumerate().filter(|&(x, &c)| x == c).count()
    }

    pub fn is_trivial(&self) -> bool {
        self.num_classes() == self.len()
    }

    /// Every class of `self` sits inside a class of `other`.
    pub fn refines(&self, other: &Congruence) -> bool {
        (0..self.len()).all(|x| other.same_class(x, self.class_of[x]))
    }
}

impl Lattice {
    /// The finest congruence identifying every given pair.
    pub fn congruence_generated(&self, pairs: &[(usize, usize)]) -> Congruence {
        let n = self.len();
        let mut uf = UnionFind::new(n);
        for &(a, b) in pairs {
            uf.union(a, b);
        }
        let mut changed = true;
        while changed {
            changed = false;
            for x in 0..n {
                let r = uf.find(x);
                if r == x {
                    continue;
                }
                for z in 0..n {
                    changed |= uf.union(self.join(x, z), self.join(r, z));
                    changed |= uf.union(self.meet(x, z), self.meet(r, z));
                }
            }
        }
        Congruence::from_union_find(&mut uf)
    }

    pub fn con(&self, x: usize, y: usize) -> Congruence {
        self.congruence_generated(&[(x, y)])
    }

    pub fn join_congruences(&self, a: &Congruence, b: &Congruence) -> Congruence {
        let pairs: Vec<(usize, usize)> =
            (0..self.len()).flat_map(|x| [(x, a.class_id(x)), (x, b.class_id(x))]).collect();
        self.congruence_generated(&pairs)
    }

    /// Direct check of compatibility with joins and meets.
    pub fn check_congruence(&self, theta: &Congruence) -> Result<(), CongruenceDefect> {
        let n = self.len();
        for x in 0..n {
            let y = theta.class_id(x);
            if x == y {
                continue;
            }
            for z in 0..n {
                if !theta.same_class(self.join(x, z), self.join(y, z)) {
                    return Err(CongruenceDefect::Join { x, y, z });
                }
                if !theta.same_class(self.meet(x, z), self.meet(y, z)) {
                    return Err(CongruenceDefect::Meet { x, y, z });
                }
            }
        }
        Ok(())
    }

    /// Interval characterisation: classes are intervals and both
    /// projections to the class ends are order preserving.
    pub fn check_interval_classes(&self, theta: &Congruence) -> Result<(), CongruenceDefect> {
        let (down, up) = self.projections(theta)?;
        let p = self.poset();
        for x in 0..self.len() {
            let c = theta.class_id(x);
            for z in p.up_set(down[c]).intersection(p.down_set(up[c])) {
                if !theta.same_class(z, x) {
                    return Err(CongruenceDefect::NotInterval { class: x, inside: z });
                }
            }
        }
        for &(x, y) in p.covers() {
            if !p.leq(down[theta.class_id(x)], down[theta.class_id(y)]) {
                return Err(CongruenceDefect::DownNotMonotone(x, y));
            }
            if !p.leq(up[theta.class_id(x)], up[theta.class_id(y)]) {
                return Err(CongruenceDefect::UpNotMonotone(x, y));
            }
        }
        Ok(())
    }

    /// Class minimum and maximum, indexed by class id.
    fn projections(&self, theta: &Congruence) -> Result<(Vec<usize>, Vec<usize>), CongruenceDefect> {
        let n = self.len();
        let (mut down, mut up) = (vec![usize::MAX; n], vec![usize::MAX; n]);
        for class in theta.classes() {
            let c = theta.class_id(class[0]);
            let meet = class.iter().fold(class[0], |m, &x| self.meet(m, x));
            let join = class.iter().fold(class[0], |j, &x| self.join(j, x));
            if !theta.same_class(meet, c) {
                return Err(CongruenceDefect::NoClassBottom(c));
            }
            if !theta.same_class(join, c) {
                return Err(CongruenceDefect::NoClassTop(c));
            }
            down[c] = meet;
            up[c] = join;
        }
        Ok((down, up))
    }

    /// `L / θ`, ordered by comparing class bottoms. Each class is named after
    /// its bottom element.
    pub fn quotient(&self, theta: &Congruence) -> Result<FinitePoset, CongruenceDefect> {
        let (down, _) = self.projections(theta)?;
        let reps: Vec<usize> = (0..self.len()).filter(|&x| theta.class_id(x) == x).collect();
        let names = reps.iter().map(|&c| self.poset().name(down[c]).to_string()).collect();
        let p = self.poset();
        Ok(FinitePoset::from_order(names, |i, j| p.leq(down[reps[i]], down[reps[j]]))
            .expect("quotient of a lattice is a poset"))
    }

    pub fn congruence_lattice(&self) -> CongruenceLattice {
        CongruenceLattice::new(self)
    }
}

/// The congruence lattice of a finite lattice, described through its join
/// irreducibles: the congruences generated by a single cover.
#[derive(Clone, Debug)]
pub struct CongruenceLattice {
    irreducibles: Vec<Congruence>,
    cover_class: Vec<usize>,
    forcing: FinitePoset,
}

impl CongruenceLattice {
    fn new(l: &Lattice) -> Self {
        let covers = l.poset().covers();
        let generated: Vec<Congruence> = covers.iter().map(|&(x, y)| l.con(x, y)).collect();
        let distinct: BTreeSet<&Congruence> = generated.iter().collect();
        let irreducibles: Vec<Congruence> = distinct.into_iter().cloned().collect();
        let cover_class = generated.iter().map(|c| irreducibles.binary_search(c).expect("collected above")).collect();
        let names = (0..irreducibles.len()).map(|i| format!("c{i}")).collect();
        let forcing = FinitePoset::from_order(names, |i, j| irreducibles[i].refines(&irreducibles[j]))
            .expect("refinement is a partial order");
        CongruenceLattice { irreducibles, cover_class, forcing }
    }

    pub fn irreducibles(&self) -> &[Congruence] {
        &self.irreducibles
    }

    /// Index into [`CongruenceLattice::irreducibles`] of `con(x, y)` for the
    /// `i`th cover of the lattice.
    pub fn cover_class(&self, i: usize) -> usize {
        self.cover_class[i]
    }

    /// Irreducible congruences ordered by refinement.
    pub fn forcing_order(&self) -> &FinitePoset {
        &self.forcing
    }

    /// Size of `Con L`, as the number of order ideals of the forcing order.
    pub fn count(&self) -> u64 {
        self.forcing.count_order_ideals()
    }

    /// Size of `Con L`, by closing the irreducibles under joins.
    pub fn count_by_joins(&self, l: &Lattice) -> usize {
        let mut seen = BTreeSet::from([Congruence::trivial(l.len())]);
        let mut frontier: Vec<Congruence> = seen.iter().cloned().collect();
        while let Some(c) = frontier.pop() {
            for j in &self.irreducibles {
                let next = l.join_congruences(&c, j);
                if seen.insert(next.clone()) {
                    frontier.push(next);
                }
            }
        }
        seen.len()
    }
}

/// Congruence-uniformity data: the maps `j ↦ con(j_*, j)` on join
/// irreducibles and `m ↦ con(m, m^*)` on meet irreducibles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Uniformity {
    pub join_irreducibles: usize,
    pub meet_irreducibles: usize,
    pub congruence_irreducibles: usize,
    pub join_map_bijective: bool,
    pub meet_map_bijective: bool,
}

impl Uniformity {
    pub fn holds(&self) -> bool {
        self.join_map_bijective && self.meet_map_bijective
    }
}

impl Lattice {
    pub fn uniformity(&self, con: &CongruenceLattice) -> Uniformity {
        let p = self.poset();
        let class_of_cover = |x: usize, y: usize| {
            let i = p.covers().binary_search(&(x, y)).expect("cover");
            con.cover_class(i)
        };
        let bijective = |images: Vec<usize>| {
            let distinct: BTreeSet<usize> = images.iter().copied().collect();
            distinct.len() == images.len() && images.len() == con.irreducibles().len()
        };
        let joins = self.join_irreducibles();
        let meets = self.meet_irreducibles();
        let join_images = joins.iter().map(|&j| class_of_cover(p.lower_covers(j)[0], j)).collect();
        let meet_images = meets.iter().map(|&m| class_of_cover(m, p.upper_covers(m)[0])).collect();
        Uniformity {
            join_irreducibles: joins.len(),
            meet_irreducibles: meets.len(),
            congruence_irreducibles: con.irreducibles().len(),
            join_map_bijective: bijective(join_images),
            meet_map_bijective: bijective(meet_images),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lattice(n: usize, covers: &[(usize, usize)]) -> Lattice {
        let p = FinitePoset::from_covers((0..n).map(|i| i.to_string()).collect(), covers.to_vec()).unwrap();
        Lattice::new(p).unwrap()
    }

    fn pentagon() -> Lattice {
        lattice(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)])
    }

    #[test]
    fn pentagon_congruences() {
        let l = pentagon();
        // The middle cover of the long side forces nothing else.
        assert_eq!(l.con(1, 2).num_classes(), 4);
        // The short side's top cover pulls the bottom of the long side with it.
        let c = l.con(3, 4);
        assert!(c.same_class(1, 2) && c.same_class(0, 1));
        assert_eq!(c.num_classes(), 2);
        assert!(l.check_congruence(&c).is_ok());
        assert!(l.check_interval_classes(&c).is_ok());
        let con = l.congruence_lattice();
        assert_eq!(con.irreducibles().len(), 3);
        assert_eq!(con.count(), 5);
        assert_eq!(con.count_by_joins(&l), 5);
        assert!(l.uniformity(&con).holds());
    }

    #[test]
    fn non_congruence_is_caught() {
        let l = pentagon();
        let bad = Congruence::from_classes(&[0, 0, 2, 3, 4]);
        assert!(l.check_congruence(&bad).is_err());
        assert!(l.check_interval_classes(&bad).is_err());
    }

    #[test]
    fn diamond_is_simple_and_not_uniform() {
        let l = lattice(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]);
        let con = l.congruence_lattice();
        assert_eq!(con.irreducibles().len(), 1);
        assert_eq!(con.count(), 2);
        assert!(!l.uniformity(&con).holds());
    }

    #[test]
    fn quotient_of_chain() {
        let l = lattice(3, &[(0, 1), (1, 2)]);
        let q = l.quotient(&l.con(1, 2)).unwrap();
        assert_eq!(q.len(), 2);
        assert_eq!(q.names(), &["0", "1"]);
    }
}
