use std::fmt;

use thiserror::Error;

use super::{FinitePoset, Lattice};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CnCondition {
    Cn1,
    Cn2,
    Cn3,
}

impl fmt::Display for CnCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CnCondition::Cn1 => "CN1",
            CnCondition::Cn2 => "CN2",
            CnCondition::Cn3 => "CN3",
        };
        f.write_str(s)
    }
}

/// A failing instance: `z` with upper covers `x`, `y`, and the offending
/// maximal chain from `z` through `x` to `x ∨ y`.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{condition} fails{} at z={z}, x={x}, y={y}, chain {chain:?}", if *.dual { " in the dual" } else { "" })]
pub struct CnViolation {
    pub condition: CnCondition,
    pub dual: bool,
    pub z: usize,
    pub x: usize,
    pub y: usize,
    pub chain: Vec<usize>,
}

/// Checks that `label` (cover to an element of `order`) is a CN-labeling of
/// `l`, on `l` and on its dual.
pub fn check_cn_labeling(
    l: &Lattice,
    label: impl Fn(usize, usize) -> usize,
    order: &FinitePoset,
) -> Result<(), CnViolation> {
    check_one_side(l, &label, order, false)?;
    let dual = l.dual();
    check_one_side(&dual, &|a, b| label(b, a), order, true)
}

fn check_one_side(
    l: &Lattice,
    label: &dyn Fn(usize, usize) -> usize,
    order: &FinitePoset,
    dual: bool,
) -> Result<(), CnViolation> {
    let p = l.poset();
    for z in 0..l.len() {
        for &x in p.upper_covers(z) {
            for &y in p.upper_covers(z) {
                if x == y {
                    continue;
                }
                let (lx, ly) = (label(z, x), label(z, y));
                let top = l.join(x, y);
                let mut failure = None;
                let mut chain = vec![z, x];
                each_chain(p, &mut chain, top, &mut |c| {
                    if failure.is_none() {
                        failure = check_chain(c, lx, ly, label, order).err().map(|cond| (cond, c.to_vec()));
                    }
                });
                if let Some((condition, chain)) = failure {
                    return Err(CnViolation { condition, dual, z, x, y, chain });
                }
            }
        }
    }
    Ok(())
}

fn each_chain(p: &FinitePoset, chain: &mut Vec<usize>, top: usize, f: &mut dyn FnMut(&[usize])) {
    let last = *chain.last().expect("nonempty");
    if last == top {
        f(chain);
        return;
    }
    for &u in p.upper_covers(last) {
        if p.leq(u, top) {
            chain.push(u);
            each_chain(p, chain, top, f);
            chain.pop();
        }
    }
}

/// `chain` runs `z, x, ..., x ∨ y`, where `z ⋖ x` is labelled `lx` and
/// `z ⋖ y` is labelled `ly`.
fn check_chain(
    chain: &[usize],
    lx: usize,
    ly: usize,
    label: &dyn Fn(usize, usize) -> usize,
    order: &FinitePoset,
) -> Result<(), CnCondition> {
    let labels: Vec<usize> = chain.windows(2).map(|w| label(w[0], w[1])).collect();
    let k = labels.len();
    if labels[k - 1] != ly {
        return Err(CnCondition::Cn1);
    }
    // Covers strictly inside the chain: not starting at z, not ending at the top.
    for &l in labels.iter().take(k - 1).skip(1) {
        if !(order.lt(lx, l) && order.lt(ly, l)) {
            return Err(CnCondition::Cn2);
        }
    }
    let mut sorted = labels;
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(CnCondition::Cn3);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain_order(n: usize) -> FinitePoset {
        let covers = (1..n).map(|i| (i - 1, i)).collect();
        FinitePoset::from_covers((0..n).map(|i| i.to_string()).collect(), covers).unwrap()
    }

    fn pentagon() -> Lattice {
        // 0 < 1 < 2 < 4 and 0 < 3 < 4
        let p = FinitePoset::from_covers(
            (0..5).map(|i| i.to_string()).collect(),
            vec![(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)],
        )
        .unwrap();
        Lattice::new(p).unwrap()
    }

    #[test]
    fn pentagon_labelling() {
        let l = pentagon();
        // Labels a=0 < b=1 < c=2: short side top gets a's label, the inner
        // long cover the largest label.
        let label = |x: usize, y: usize| match (x, y) {
            (0, 1) | (3, 4) => 0,
            (0, 3) | (2, 4) => 1,
            (1, 2) => 2,
            _ => unreachable!(),
        };
        assert_eq!(check_cn_labeling(&l, label, &chain_order(3)), Ok(()));
    }

    #[test]
    fn bad_pentagon_labelling() {
        let l = pentagon();
        let label = |x: usize, y: usize| match (x, y) {
            (0, 1) | (3, 4) => 0,
            (0, 3) | (2, 4) => 2,
            (1, 2) => 1,
            _ => unreachable!(),
        };
        let err = check_cn_labeling(&l, label, &chain_order(3)).unwrap_err();
        assert_eq!(err.condition, CnCondition::Cn2);
    }

    #[test]
    fn repeated_label_breaks_cn1() {
        let p = FinitePoset::from_covers((0..4).map(|i| i.to_string()).collect(), vec![(0, 1), (0, 2), (1, 3), (2, 3)])
            .unwrap();
        let l = Lattice::new(p).unwrap();
        assert!(check_cn_labeling(&l, |_, _| 0, &chain_order(1)).is_err());
        let ok = |x: usize, y: usize| usize::from((x, y) == (0, 2) || (x, y) == (1, 3));
        assert_eq!(check_cn_labeling(&l, ok, &chain_order(2)), Ok(()));
    }
}
