//! The ten acceptance criteria, one line each. Runs without the libtest
//! harness so the table is always printed.

mod common;

use std::collections::{BTreeSet, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use grid_tamari::biclosed::{eta, phi, quotient_gt, SegmentClosure};
use grid_tamari::cambrian::{tau_isomorphism, Orientation};
use grid_tamari::grassmann::{
    grassmann_tamari, is_crossing, lex_orientation, path_to_subset, rectangle, subset_to_path, Direction, KSubset,
};
use grid_tamari::grid::{compose, containment_order, enumerate_segments, Segment, Shape, Vertex};
use grid_tamari::nkcomplex::{EnumerationMethod, NonKissingComplex};
use grid_tamari::poset::{check_cn_labeling, Lattice};
use grid_tamari::stellation::{build_by_stellation, LogEntry, SimplicialComplex};
use grid_tamari::verify::{verify, Status, VerifyOptions};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    if t > limit {
        return Err(format!("took {t:.1?}, limit {limit:?}"));
    }
    Ok(())
}

fn square() -> Shape {
    Shape::rectangle(3, 3)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let nk = NonKissingComplex::new(square());
    let gt = nk.grid_tamari().map_err(|e| e.to_string())?;
    ensure!(gt.facets.len() == 42, "{} facets", gt.facets.len());
    let grid = |a: usize, b: usize| a != b && a / 3 <= b / 3 && a % 3 <= b % 3;
    let extensions = count_linear_extensions(9, grid);
    ensure!(extensions == 42, "{extensions} linear extensions of the 3×3 grid poset");
    ensure!(nk.num_essential() == 14, "{} essential paths", nk.num_essential());
    ensure!(nk.dimension() == 3, "dimension {}", nk.dimension());
    let lattice = Lattice::new(gt.poset).map_err(|e| format!("{e:?}"))?;
    ensure!(lattice.is_semidistributive(), "not semidistributive");
    within(start, Duration::from_secs(5))?;
    Ok("42 facets = 42 linear extensions, 14 vertices, dimension 3, semidistributive lattice".into())
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let q = quotient_gt(&square()).map_err(|e| e.to_string())?;
    let gt = &q.gt;
    let lattice = Lattice::new(gt.poset.clone()).map_err(|e| format!("{e:?}"))?;
    let con = lattice.congruence_lattice();
    let segments = enumerate_segments(&square());
    ensure!(con.irreducibles().len() == 10, "{} join-irreducible congruences", con.irreducibles().len());

    let covers = gt.poset.covers();
    let label: HashMap<(usize, usize), &Segment> = gt.flips.iter().map(|e| ((e.from, e.to), &e.segment)).collect();
    let mut con_of_segment = vec![None; segments.len()];
    for (i, cover) in covers.iter().enumerate() {
        let s = label[cover];
        let k = segments.iter().position(|t| t == s).expect("label is a segment");
        con_of_segment[k] = Some(con.cover_class(i));
        let theta = &con.irreducibles()[con.cover_class(i)];
        for other in covers {
            let t = label[other];
            ensure!(theta.same_class(other.0, other.1) == s.is_subsegment_of(t), "con of a {s} cover vs the {t} cover");
        }
        let closure_index = q.closure.index_of(s).expect("segment");
        ensure!(q.theta_s(closure_index) == *theta, "Θ_s differs from con for {s}");
    }
    let map: Vec<usize> = con_of_segment.into_iter().collect::<Option<_>>().ok_or("some segment labels no cover")?;
    let reverse_inclusion = containment_order(&segments).dual();
    ensure!(
        reverse_inclusion.is_isomorphism(con.forcing_order(), &map),
        "forcing order is not the segments under reverse inclusion"
    );
    ensure!(con.count() == reverse_inclusion.count_order_ideals(), "|Con| mismatch");
    within(start, Duration::from_secs(30))?;
    Ok(format!("J(Con) = 10 ≅ segments reversed, {} congruences, con(s) contracts exactly t ⊇ s", con.count()))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut counts = Vec::new();
    for n in 2..=5u32 {
        let closure = SegmentClosure::new(&Shape::rectangle(2, n)).map_err(|e| e.to_string())?;
        let bic = closure.enumerate_biclosed().map_err(|e| e.to_string())?;
        ensure!(bic.len() as u64 == factorial(n as u64), "2×{n}: {} biclosed sets", bic.len());
        ensure!(bic.lattice().is_semidistributive(), "2×{n}: not semidistributive");
        let order = containment_order(closure.segments());
        check_cn_labeling(bic.lattice(), |a, b| bic.cover_segment(a, b).expect("cover"), &order)
            .map_err(|v| format!("2×{n}: {v:?}"))?;
        let (_, weak) = weak_order(n as usize);
        ensure!(weak.is_isomorphic(bic.lattice().poset()), "2×{n}: not the weak order");
        counts.push(bic.len());
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("|Bic| = {counts:?}, CN-labelled by containment, ≅ weak order"))
}

fn criterion_4() -> Outcome {
    let mut shapes =
        vec![square(), Shape::rectangle(2, 2), Shape::rectangle(2, 3), Shape::rectangle(2, 4), Shape::rectangle(2, 5)];
    shapes.extend(l_shapes());
    let mut total = 0;
    for shape in &shapes {
        let q = quotient_gt(shape).map_err(|e| e.to_string())?;
        ensure!(q.closure.len() <= 10, "{} segments", q.closure.len());
        for f in &q.gt.facets {
            let back = eta(&q.closure, &q.complex, phi(&q.closure, &q.complex, f));
            ensure!(back == *f, "η∘φ moves {}", q.complex.facet_label(f));
        }
        for &x in q.bic.sets() {
            let f = eta(&q.closure, &q.complex, x);
            ensure!(
                phi(&q.closure, &q.complex, &f) == q.closure.down(x),
                "φ∘η ≠ ↓ at {}",
                q.closure.format_set(x.set())
            );
        }
        total += q.bic.len();
    }
    Ok(format!("{} shapes, {total} biclosed sets: η∘φ = id, φ∘η = ↓, fibres = [X↓, X↑], Bic/Θ ≅ GT", shapes.len()))
}

fn criterion_5() -> Outcome {
    let mut sizes = Vec::new();
    for n in 2..=5usize {
        let gt = NonKissingComplex::new(Shape::rectangle(2, n as u32)).grid_tamari().map_err(|e| e.to_string())?;
        let oracle = tamari(n);
        ensure!(gt.poset.is_isomorphic(&oracle), "2×{n} is not the Tamari lattice");
        sizes.push(gt.poset.len());
    }
    ensure!(sizes == [2, 5, 14, 42], "sizes {sizes:?}");
    Ok(format!("GT(2×n) ≅ rotation order on bracketings, sizes {sizes:?}"))
}

fn criterion_6() -> Outcome {
    let wanted = [
        "facets by flips = cliques",
        "pure",
        "top-path bijection",
        "bottom-path bijection",
        "flip uniqueness",
        "unique kissing segment",
    ];
    let mut shapes = vec![square(), Shape::rectangle(2, 5), Shape::rectangle(3, 4), staircase()];
    shapes.extend(l_shapes());
    let mut facets = 0;
    for shape in &shapes {
        let report = verify(shape, &VerifyOptions { max_bic_segments: 0 });
        for name in wanted {
            let c = report.checks.iter().find(|c| c.name == name).ok_or(format!("missing check {name}"))?;
            ensure!(c.status == Status::Pass, "{name}: {}", c.detail);
        }
        facets += report.facets;
    }
    Ok(format!(
        "{} shapes, {facets} facets: pure, thin, top/bottom-path bijections, unique flips and kisses",
        shapes.len()
    ))
}

fn criterion_7() -> Outcome {
    let shapes = [square(), Shape::rectangle(2, 2), Shape::rectangle(2, 3), Shape::rectangle(2, 4), staircase()];
    for shape in &shapes {
        let nk = NonKissingComplex::new(shape.clone());
        let facets = nk.enumerate_facets(EnumerationMethod::Cliques).map_err(|e| e.to_string())?;
        let enumerated = SimplicialComplex::from_facets(facets.iter().map(|f| nk.facet_paths(f).cloned().collect()));
        ensure!(build_by_stellation(shape).complex == enumerated, "stellation differs on {shape:?}");
    }
    let name = |p: &grid_tamari::grid::Path| path_to_subset(p, 3, 6).map(|s| s.to_string()).unwrap_or_default();
    let log: Vec<String> = build_by_stellation(&square())
        .log
        .iter()
        .map(|e| match e {
            LogEntry::Suspend { labels } => {
                let pair: BTreeSet<String> = labels.iter().map(name).collect();
                format!("suspend {}", pair.into_iter().collect::<Vec<_>>().join(" "))
            }
            LogEntry::Stellate { new, .. } => format!("stellate {}", name(new)),
        })
        .collect();
    let expected = [
        "suspend 134 256",
        "suspend 124 236",
        "stellate 136",
        "suspend 145 356",
        "stellate 245",
        "suspend 125 346",
        "stellate 235",
        "stellate 135",
        "stellate 146",
        "stellate 246",
    ];
    ensure!(log == expected, "introduction order {log:?}");
    Ok(format!("{} shapes match enumeration; 3×3 introduction order reproduced", shapes.len()))
}

fn criterion_8() -> Outcome {
    let mut words = 0;
    for len in 0..=4 {
        for q in Orientation::all(len) {
            let iso = tau_isomorphism(&q).map_err(|e| format!("{q}: {e}"))?;
            let expected = catalan(q.n() as u64) as usize;
            ensure!(iso.map.len() == expected, "{q}: {} elements, expected {expected}", iso.map.len());
            words += 1;
        }
    }
    ensure!(words == 31, "{words} words");
    Ok("all 31 words of length ≤ 4 (16 of length 4): Camb ≅ GT(double ribbon), Catalan sizes".into())
}

fn criterion_9() -> Outcome {
    let mut pairs = 0;
    let mut flips = 0;
    for (k, n) in [(2, 5), (2, 6), (3, 6)] {
        let subsets = KSubset::all(k, n);
        for a in &subsets {
            for b in &subsets {
                if let (Some(p), Some(q)) = (subset_to_path(a), subset_to_path(b)) {
                    let crossing = is_crossing(a, b).map_err(|e| e.to_string())?;
                    ensure!(p.kisses(&q) == crossing, "{a} and {b}: kissing {}, crossing {crossing}", p.kisses(&q));
                    pairs += 1;
                }
            }
        }
        let nk = NonKissingComplex::new(rectangle(k, n));
        let gt = nk.grid_tamari().map_err(|e| e.to_string())?;
        let as_subsets = |i: usize| -> BTreeSet<KSubset> {
            nk.facet_paths(&gt.facets[i]).map(|p| path_to_subset(p, k, n).expect("rectangle path")).collect()
        };
        for e in &gt.flips {
            let dir = lex_orientation(&as_subsets(e.from), &as_subsets(e.to)).map_err(|e| e.to_string())?;
            ensure!(dir == Direction::FirstToSecond, "flip {} -> {} is oriented backwards", e.from, e.to);
            flips += 1;
        }
        let sub = grassmann_tamari(k, n).map_err(|e| e.to_string())?;
        let map: Vec<usize> = (0..gt.facets.len())
            .map(|i| sub.facets.iter().position(|f| *f == as_subsets(i)))
            .collect::<Option<_>>()
            .ok_or("a facet has no subset counterpart")?;
        ensure!(gt.poset.is_isomorphism(&sub.poset, &map), "GT_{{{k},{n}}} differs from GT of the rectangle");
    }
    Ok(format!("{pairs} path pairs, {flips} flips agree; subset and path orders coincide"))
}

fn criterion_10() -> Outcome {
    // 312-avoiding permutations are the fixed points of ↓.
    for n in 2..=5usize {
        let shape = Shape::rectangle(2, n as u32);
        let closure = SegmentClosure::new(&shape).map_err(|e| e.to_string())?;
        let bic = closure.enumerate_biclosed().map_err(|e| e.to_string())?;
        let fixed: BTreeSet<_> = bic.sets().iter().filter(|&&x| closure.down(x) == x).map(|x| x.set()).collect();
        ensure!(fixed.len() as u64 == catalan(n as u64), "2×{n}: {} fixed points", fixed.len());
        let pair =
            |i: usize, j: usize| Segment::new(&shape, (i..j).map(|x| Vertex::new(x as i32, 1)).collect()).unwrap();
        for sigma in permutations(n) {
            let segs: Vec<Segment> = inversions(&sigma).into_iter().map(|(i, j)| pair(i, j)).collect();
            let x = closure.set_of(&segs).map_err(|e| e.to_string())?;
            ensure!(fixed.contains(&x) == !contains_312(&sigma), "{sigma:?}");
        }
    }

    // Composability in some order by bending vectors.
    let segments = enumerate_segments(&square());
    let vectors: Vec<_> = segments.iter().map(Segment::bending_vector).collect();
    for (s, fs) in segments.iter().zip(&vectors) {
        for (t, ft) in segments.iter().zip(&vectors) {
            let sum = fs.clone() + ft.clone();
            let composable = compose(s, t).or_else(|| compose(t, s)).is_some();
            ensure!(composable == vectors.contains(&sum), "{s} and {t}");
        }
    }

    // Projection identities on every biclosed set.
    let mut shapes = vec![square(), Shape::rectangle(2, 3), Shape::rectangle(2, 4), Shape::rectangle(2, 5)];
    shapes.extend(l_shapes());
    let mut checked = 0;
    for shape in &shapes {
        let c = SegmentClosure::new(shape).map_err(|e| e.to_string())?;
        let ct = SegmentClosure::new(&shape.transpose()).map_err(|e| e.to_string())?;
        let bic = c.enumerate_biclosed().map_err(|e| e.to_string())?;
        for &x in bic.sets() {
            let (down, up) = (c.down(x), c.up(x));
            let show = || c.format_set(x.set());
            let xct = ct
                .biclosed(c.complement_transpose(x.set(), &ct))
                .map_err(|_| format!("X^ct not biclosed: {}", show()))?;
            ensure!(c.complement_transpose(up.set(), &ct) == ct.down(xct).set(), "duality at {}", show());
            ensure!(c.is_biclosed(down.set()) && c.is_biclosed(up.set()), "projection not biclosed at {}", show());
            ensure!(c.down(down) == down && c.up(up) == up, "not idempotent at {}", show());
            ensure!(c.up(down) == up && c.down(up) == down, "(X↓)↑ ≠ X↑ at {}", show());
            ensure!(down.set().is_subset(x.set()) && x.set().is_subset(up.set()), "X outside [X↓, X↑] at {}", show());
            for &y in bic.sets() {
                if x.set().is_subset(y.set()) {
                    ensure!(down.set().is_subset(c.down(y).set()), "↓ not monotone");
                    ensure!(up.set().is_subset(c.up(y).set()), "↑ not monotone");
                }
            }
            checked += 1;
        }
    }

    // The five-segment example on the 3×3 square.
    let sq = square();
    let c = SegmentClosure::new(&sq).map_err(|e| e.to_string())?;
    let seg = |vs: &[(i32, i32)]| Segment::new(&sq, vs.iter().map(|&(x, y)| Vertex::new(x, y)).collect()).unwrap();
    let (l12, l21) = (seg(&[(1, 2)]), seg(&[(2, 1)]));
    let ne_hook = seg(&[(1, 2), (2, 2), (2, 1)]);
    let x = c
        .biclosed(
            c.set_of(&[
                l12.clone(),
                l21.clone(),
                ne_hook.clone(),
                seg(&[(1, 2), (1, 1)]),
                seg(&[(1, 2), (1, 1), (2, 1)]),
            ])
            .unwrap(),
        )
        .map_err(|e| e.to_string())?;
    ensure!(c.down(x).set() == c.set_of(&[l12, l21, ne_hook]).unwrap(), "X↓ = {}", c.format_set(c.down(x).set()));
    let expected_up = x.set().union(c.set_of(&[seg(&[(1, 1), (2, 1)])]).unwrap());
    ensure!(c.up(x).set() == expected_up, "X↑ = {}", c.format_set(c.up(x).set()));

    Ok(format!("312 ↔ Catalan for n ≤ 5, composability on 3×3, {checked} biclosed sets satisfy the projection identities, five-segment example exact"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("GT(3×3) facets, dimension, lattice", criterion_1),
        ("congruence structure of GT(3×3)", criterion_2),
        ("Bic of 2×n rectangles is the weak order", criterion_3),
        ("Bic/Θ ≅ GT on shapes with ≤ 10 segments", criterion_4),
        ("GT(2×n) is the Tamari lattice", criterion_5),
        ("purity, thinness and flips", criterion_6),
        ("stellation", criterion_7),
        ("Cambrian lattices of double ribbons", criterion_8),
        ("crossing and kissing agree", criterion_9),
        ("property suite", criterion_10),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let (tag, detail) = match result {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} {tag} {title} ({:.2?}): {detail}", i + 1, start.elapsed());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
