//! Randomised invariants over small shapes and segment sets. The seed is
//! fixed so failures reproduce.

use std::collections::BTreeSet;

use grid_tamari::biclosed::{SegSet, SegmentClosure};
use grid_tamari::grid::{Cell, Shape};
use grid_tamari::nkcomplex::NonKissingComplex;
use grid_tamari::stellation::{build_by_stellation, SimplicialComplex};
use grid_tamari::verify::{verify, VerifyOptions};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

const SEED: u64 = 0x6772_6964;

fn config(cases: u32) -> ProptestConfig {
    eprintln!("proptest seed {SEED:#x}");
    ProptestConfig { cases, rng_seed: RngSeed::Fixed(SEED), failure_persistence: None, ..ProptestConfig::default() }
}

/// Connected shapes made of cells in a box of three rows and four columns,
/// with at least one interior vertex.
fn small_shape() -> impl Strategy<Value = Shape> {
    (1u16..1 << 12)
        .prop_map(|mask| {
            Shape::from_cells((0..12).filter(|i| mask >> i & 1 == 1).map(|i| Cell::new(i % 4, i / 4))).unwrap()
        })
        .prop_filter("connected, with an interior vertex", |s| s.is_connected() && s.num_interior() > 0)
}

fn square_closure() -> SegmentClosure {
    SegmentClosure::new(&Shape::rectangle(3, 3)).unwrap()
}

fn subset(n: usize) -> impl Strategy<Value = SegSet> {
    prop::collection::vec(any::<bool>(), n).prop_map(|bits| {
        bits.iter().enumerate().filter(|(_, &b)| b).fold(SegSet::EMPTY, |x, (i, _)| x.union(SegSet::singleton(i)))
    })
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn verify_passes_on_small_shapes(shape in small_shape()) {
        let report = verify(&shape, &VerifyOptions::new());
        prop_assert!(report.passed(), "{report}");
    }

    #[test]
    fn stellation_matches_enumeration(shape in small_shape()) {
        let nk = NonKissingComplex::new(shape.clone());
        let gt = nk.grid_tamari().unwrap();
        let enumerated = SimplicialComplex::from_facets(
            gt.facets.iter().map(|f| nk.facet_paths(f).cloned().collect::<BTreeSet<_>>()),
        );
        prop_assert_eq!(build_by_stellation(&shape).complex, enumerated);
    }

    #[test]
    fn flips_are_involutions(shape in small_shape()) {
        let nk = NonKissingComplex::new(shape);
        for f in nk.grid_tamari().unwrap().facets {
            for &p in f.paths() {
                let there = nk.flip(&f, p).unwrap();
                let back = nk.flip(&there.facet, there.added).unwrap();
                prop_assert_eq!(back.added, p);
                prop_assert_eq!(&back.facet, &f);
                prop_assert_eq!(&back.segment, &there.segment);
                prop_assert_ne!(back.direction, there.direction);
            }
        }
    }
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn closure_is_a_closure_operator(x in subset(10), y in subset(10)) {
        let c = square_closure();
        let cx = c.closure(x);
        prop_assert!(x.is_subset(cx));
        prop_assert_eq!(c.closure(cx), cx);
        prop_assert!(c.is_closed(cx));
        let xy = x.intersection(y);
        prop_assert!(c.closure(xy).is_subset(cx));
    }
}
