//! Independent oracles shared by the integration tests. Nothing here uses
//! the paths, segments or complexes of the library.

#![allow(dead_code)]

use grid_tamari::grid::Shape;
use grid_tamari::poset::FinitePoset;

pub fn catalan(n: u64) -> u64 {
    (0..n).fold(1, |c, i| c * 2 * (2 * i + 1) / (i + 2))
}

pub fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tree {
    Leaf,
    Node(Box<Tree>, Box<Tree>),
}

impl Tree {
    fn all(n: usize) -> Vec<Tree> {
        if n == 0 {
            return vec![Tree::Leaf];
        }
        let mut out = Vec::new();
        for k in 0..n {
            for l in Tree::all(k) {
                for r in Tree::all(n - 1 - k) {
                    out.push(Tree::Node(Box::new(l.clone()), Box::new(r)));
                }
            }
        }
        out
    }

    fn brackets(&self) -> String {
        match self {
            Tree::Leaf => "x".into(),
            Tree::Node(l, r) => format!("({}{})", l.brackets(), r.brackets()),
        }
    }

    /// Every tree reached by one right rotation `(ab)c → a(bc)`.
    fn rotations(&self) -> Vec<Tree> {
        let Tree::Node(l, r) = self else { return Vec::new() };
        let mut out = Vec::new();
        if let Tree::Node(a, b) = l.as_ref() {
            out.push(Tree::Node(a.clone(), Box::new(Tree::Node(b.clone(), r.clone()))));
        }
        out.extend(l.rotations().into_iter().map(|t| Tree::Node(Box::new(t), r.clone())));
        out.extend(r.rotations().into_iter().map(|t| Tree::Node(l.clone(), Box::new(t))));
        out
    }
}

/// The Tamari lattice on bracketings of `n + 1` letters, ordered by rotation.
pub fn tamari(n: usize) -> FinitePoset {
    let trees = Tree::all(n);
    let names: Vec<String> = trees.iter().map(Tree::brackets).collect();
    let mut covers = Vec::new();
    for (i, t) in trees.iter().enumerate() {
        for u in t.rotations() {
            let j = trees.iter().position(|x| *x == u).expect("rotation stays in the set");
            covers.push((i, j));
        }
    }
    FinitePoset::from_relations(names, &covers).expect("rotation is acyclic")
}

/// Linear extensions of a finite poset, counted by exhaustive search.
pub fn count_linear_extensions(n: usize, lt: impl Fn(usize, usize) -> bool + Copy) -> u64 {
    fn go(placed: &mut Vec<bool>, left: usize, lt: impl Fn(usize, usize) -> bool + Copy) -> u64 {
        if left == 0 {
            return 1;
        }
        let n = placed.len();
        let mut total = 0;
        for x in 0..n {
            if !placed[x] && (0..n).all(|y| placed[y] || !lt(y, x)) {
                placed[x] = true;
                total += go(placed, left - 1, lt);
                placed[x] = false;
            }
        }
        total
    }
    go(&mut vec![false; n], n, lt)
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v + 1);
                go(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Value pairs `{i < j}` with `j` appearing before `i`.
pub fn inversions(sigma: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for a in 0..sigma.len() {
        for b in a + 1..sigma.len() {
            if sigma[a] > sigma[b] {
                out.push((sigma[b], sigma[a]));
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn contains_312(sigma: &[usize]) -> bool {
    let n = sigma.len();
    (0..n).any(|a| (a + 1..n).any(|b| (b + 1..n).any(|c| sigma[b] < sigma[c] && sigma[c] < sigma[a])))
}

/// The weak order on permutations of `[n]`, by inclusion of inversion sets.
pub fn weak_order(n: usize) -> (Vec<Vec<usize>>, FinitePoset) {
    let perms = permutations(n);
    let inv: Vec<Vec<(usize, usize)>> = perms.iter().map(|p| inversions(p)).collect();
    let names = perms.iter().map(|p| p.iter().map(usize::to_string).collect::<String>()).collect();
    let poset = FinitePoset::from_order(names, |a, b| inv[a].iter().all(|x| inv[b].contains(x))).unwrap();
    (perms, poset)
}

pub fn shape(ascii: &str) -> Shape {
    Shape::parse_ascii(ascii).unwrap()
}

pub fn l_shapes() -> Vec<Shape> {
    ["###\n###\n##.", "##.\n###\n###", "###\n###\n.##", "##..\n####\n####"].into_iter().map(shape).collect()
}

pub fn staircase() -> Shape {
    shape("##..\n###.\n####\n####")
}
