use fixedbitset::FixedBitSet;
use thiserror::Error;

use super::FinitePoset;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeFailure {
    #[error("no bottom element")]
    NoBottom,
    #[error("no top element")]
    NoTop,
    #[error("elements {0} and {1} have no least upper bound")]
    NoJoin(usize, usize),
    #[error("elements {0} and {1} have no greatest lower bound")]
    NoMeet(usize, usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SdFailure {
    #[error("meet-semidistributivity fails at x={x}, y={y}, z={z}")]
    Meet { x: usize, y: usize, z: usize },
    #[error("join-semidistributivity fails at x={x}, y={y}, z={z}")]
    Join { x: usize, y: usize, z: usize },
}

/// A finite lattice with tabulated joins and meets.
#[derive(Clone, Debug)]
pub struct Lattice {
    poset: FinitePoset,
    join: Vec<usize>,
    meet: Vec<usize>,
}

/// The least element of `set`, if `set` has a minimum.
fn minimum(p: &FinitePoset, set: &FixedBitSet, up: bool) -> Option<usize> {
    let candidate = if up {
        p.linear_extension().iter().copied().find(|&z| set.contains(z))?
    } else {
        p.linear_extension().iter().rev().copied().find(|&z| set.contains(z))?
    };
    let cone = if up { p.up_set(candidate) } else { p.down_set(candidate) };
    set.is_subset(cone).then_some(candidate)
}

fn join_in(p: &FinitePoset, x: usize, y: usize) -> Option<usize> {
    let mut common = p.up_set(x).clone();
    common.intersect_with(p.up_set(y));
    minimum(p, &common, true)
}

fn meet_in(p: &FinitePoset, x: usize, y: usize) -> Option<usize> {
    let mut common = p.down_set(x).clone();
    common.intersect_with(p.down_set(y));
    minimum(p, &common, false)
}

/// Lattice test that only looks at pairs of upper covers of a common
/// element: a finite poset with a top and a bottom is a lattice as soon as
/// every such pair has a join.
pub fn local_join_test(p: &FinitePoset) -> Result<(), LatticeFailure> {
    p.bottom().ok_or(LatticeFailure::NoBottom)?;
    p.top().ok_or(LatticeFailure::NoTop)?;
    for z in 0..p.len() {
        let ups = p.upper_covers(z);
        for (i, &x) in ups.iter().enumerate() {
            for &y in &ups[i + 1..] {
                join_in(p, x, y).ok_or(LatticeFailure::NoJoin(x, y))?;
            }
        }
    }
    Ok(())
}

impl Lattice {
    pub fn new(poset: FinitePoset) -> Result<Self, LatticeFailure> {
        poset.bottom().ok_or(LatticeFailure::NoBottom)?;
        poset.top().ok_or(LatticeFailure::NoTop)?;
        let n = poset.len();
        let mut join = vec![0; n * n];
        let mut meet = vec![0; n * n];
        for x in 0..n {
            for y in x..n {
                let j = join_in(&poset, x, y).ok_or(LatticeFailure::NoJoin(x, y))?;
                let m = meet_in(&poset, x, y).ok_or(LatticeFailure::NoMeet(x, y))?;
                join[x * n + y] = j;
                join[y * n + x] = j;
                meet[x * n + y] = m;
                meet[y * n + x] = m;
            }
        }
        Ok(Lattice { poset, join, meet })
    }

    /// Checks the lattice property with [`local_join_test`] before building
    /// the full tables. Both routes must agree.
    pub fn local_test(poset: &FinitePoset) -> Result<(), LatticeFailure> {
        local_join_test(poset)
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn into_poset(self) -> FinitePoset {
        self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.len() + y]
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.len() + y]
    }

    pub fn bottom(&self) -> usize {
        self.poset.bottom().expect("lattice")
    }

    pub fn top(&self) -> usize {
        self.poset.top().expect("lattice")
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.poset.leq(x, y)
    }

    pub fn dual(&self) -> Lattice {
        Lattice { poset: self.poset.dual(), join: self.meet.clone(), meet: self.join.clone() }
    }

    /// Elements with exactly one lower cover.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.poset.lower_covers(x).len() == 1).collect()
    }

    /// Elements with exactly one upper cover.
    pub fn meet_irreducibles(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.poset.upper_covers(x).len() == 1).collect()
    }

    /// `x ∧ z = y ∧ z` implies `(x ∨ y) ∧ z = x ∧ z`, and dually.
    pub fn check_semidistributive(&self) -> Result<(), SdFailure> {
        let n = self.len();
        for z in 0..n {
            for x in 0..n {
                for y in x + 1..n {
                    let m = self.meet(x, z);
                    if m == self.meet(y, z) && self.meet(self.join(x, y), z) != m {
                        return Err(SdFailure::Meet { x, y, z });
                    }
                    let j = self.join(x, z);
                    if j == self.join(y, z) && self.join(self.meet(x, y), z) != j {
                        return Err(SdFailure::Join { x, y, z });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_semidistributive(&self) -> bool {
        self.check_semidistributive().is_ok()
    }
}
