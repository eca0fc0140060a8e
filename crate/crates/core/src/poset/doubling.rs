use std::collections::HashSet;

use super::{FinitePoset, PosetError};

/// The doubling `P[C]` of a poset at an order-convex subset `C`.
#[derive(Clone, Debug)]
pub struct Doubling {
    pub poset: FinitePoset,
    /// For each new element, the element of `P` it projects to and its copy
    /// (`0` below the doubled region, `1` above).
    pub origin: Vec<(usize, u8)>,
}

/// `(P_{≤C} × {0}) ⊔ (((P − P_{≤C}) ∪ C) × {1})` under the product order.
pub fn double(p: &FinitePoset, c: &[usize]) -> Result<Doubling, PosetError> {
    if let Some(&x) = c.iter().find(|&&x| x >= p.len()) {
        return Err(PosetError::BadIndex(x));
    }
    if !p.is_order_convex(c) {
        return Err(PosetError::NotConvex);
    }
    let in_c: HashSet<usize> = c.iter().copied().collect();
    let below_c = |x: usize| c.iter().any(|&y| p.leq(x, y));
    let mut origin = Vec::new();
    let mut names = Vec::new();
    for x in 0..p.len() {
        if in_c.contains(&x) {
            origin.push((x, 0));
            names.push(format!("{}.0", p.name(x)));
            origin.push((x, 1));
            names.push(format!("{}.1", p.name(x)));
        } else {
            origin.push((x, u8::from(!below_c(x))));
            names.push(p.name(x).to_string());
        }
    }
    let poset = FinitePoset::from_order(names, |i, j| {
        let ((x, a), (y, b)) = (origin[i], origin[j]);
        a <= b && p.leq(x, y)
    })?;
    Ok(Doubling { poset, origin })
}

impl Doubling {
    /// Cover labels for the doubled poset: covers between two copies of the
    /// same element get `new_label`, every other cover keeps the label of the
    /// cover it projects to. Returned in the order of `self.poset.covers()`.
    pub fn inherited_labels(&self, parent: impl Fn(usize, usize) -> usize, new_label: usize) -> Vec<usize> {
        self.poset
            .covers()
            .iter()
            .map(|&(i, j)| {
                let (x, y) = (self.origin[i].0, self.origin[j].0);
                if x == y {
                    new_label
                } else {
                    parent(x, y)
                }
            })
            .collect()
    }
}
