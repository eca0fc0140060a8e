//! The invariant suite for a single shape, as a table of named checks with
//! witnesses for failures.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde_json::{json, Value};

use crate::biclosed::quotient_gt;
use crate::grid::{containment_order, enumerate_segments, kissing_runs, PathKind, Segment, Shape};
use crate::nkcomplex::{EnumerationMethod, GridTamari, NonKissingComplex};
use crate::poset::{check_cn_labeling, Lattice};
use crate::stellation::{build_by_stellation, SimplicialComplex};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skip => "skip",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub status: Status,
    /// A witness on failure, a short note otherwise.
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    /// Shapes with more segments skip the checks that enumerate `Bic(S)`.
    pub max_bic_segments: usize,
}

impl VerifyOptions {
    pub fn new() -> Self {
        VerifyOptions { max_bic_segments: 10 }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub essential_paths: usize,
    pub facets: usize,
    pub segments: usize,
    pub biclosed: Option<usize>,
    pub congruence_uniform: bool,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn summary(&self) -> String {
        let bic = self.biclosed.map_or("skipped".to_string(), |b| b.to_string());
        let yes = if self.congruence_uniform { "yes" } else { "no" };
        format!(
            "paths={}, segments={}, biclosed={bic}, facets={}, congruence-uniform={yes}",
            self.essential_paths, self.segments, self.facets
        )
    }

    pub fn to_json(&self) -> Value {
        json!({
            "essential_paths": self.essential_paths,
            "facets": self.facets,
            "segments": self.segments,
            "biclosed": self.biclosed,
            "congruence_uniform": self.congruence_uniform,
            "passed": self.passed(),
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name, "status": c.status.to_string(), "detail": c.detail
            })).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            writeln!(f, "{:<width$}  {}  {}", c.name, c.status, c.detail)?;
        }
        write!(f, "{}", self.summary())
    }
}

struct Collector(Vec<Check>);

impl Collector {
    fn record(&mut self, name: &'static str, result: Result<String, String>) -> bool {
        let (status, detail) = match result {
            Ok(d) => (Status::Pass, d),
            Err(d) => (Status::Fail, d),
        };
        self.0.push(Check { name, status, detail });
        status == Status::Pass
    }

    fn skip(&mut self, name: &'static str, why: String) {
        self.0.push(Check { name, status: Status::Skip, detail: why });
    }
}

fn facet_checks(nk: &NonKissingComplex, gt: &GridTamari, out: &mut Collector) {
    let shape = nk.shape();
    let size = gt.facets.first().map_or(0, |f| f.len());
    out.record(
        "pure",
        match gt.facets.iter().find(|f| f.len() != size) {
            None => Ok(format!("every facet has {size} essential paths")),
            Some(f) => Err(format!("{} has {} paths", nk.facet_label(f), f.len())),
        },
    );

    let edge_bijection = |vertical: bool| -> Result<String, String> {
        for f in &gt.facets {
            let mut hit = BTreeSet::new();
            let edges: Vec<_> = shape.edges().filter(|e| e.is_vertical() == vertical).collect();
            for &e in &edges {
                let p = if vertical { nk.top_path(f, e) } else { nk.bottom_path(f, e) };
                let p = p.map_err(|err| format!("{}: {err}", nk.facet_label(f)))?;
                if !hit.insert(p.clone()) {
                    return Err(format!("{} is extreme at two edges of {}", p, nk.facet_label(f)));
                }
            }
            let excluded = if vertical { PathKind::Horizontal } else { PathKind::Vertical };
            let expected = nk.facet_paths(f).count() + nk.cone_paths().filter(|p| p.kind() != excluded).count();
            if hit.len() != expected {
                return Err(format!("{}: {} edges but {expected} paths", nk.facet_label(f), hit.len()));
            }
        }
        Ok(format!("{} facets", gt.facets.len()))
    };
    out.record("top-path bijection", edge_bijection(true));
    out.record("bottom-path bijection", edge_bijection(false));

    let mut unique = Ok(format!("{} flips", gt.facets.len() * size / 2));
    let mut single_kiss = Ok("every exchanged pair kisses once".to_string());
    'outer: for f in &gt.facets {
        for &p in f.paths() {
            let flip = match nk.flip(f, p) {
                Ok(flip) => flip,
                Err(e) => {
                    unique = Err(format!("{}: {e}", nk.facet_label(f)));
                    break 'outer;
                }
            };
            let brute = nk.flip_brute_force(f, p);
            if brute != [flip.added] {
                unique = Err(format!(
                    "removing {} from {} allows {} paths",
                    nk.essential(p),
                    nk.facet_label(f),
                    brute.len()
                ));
                break 'outer;
            }
            if kissing_runs(nk.essential(p), nk.essential(flip.added)).len() != 1 && single_kiss.is_ok() {
                single_kiss = Err(format!("{} and {}", nk.essential(p), nk.essential(flip.added)));
            }
        }
    }
    out.record("flip uniqueness", unique);
    out.record("unique kissing segment", single_kiss);
}

fn lattice_checks(gt: &GridTamari, segments: &[Segment], out: &mut Collector) -> bool {
    let lattice = match Lattice::new(gt.poset.clone()) {
        Ok(l) => l,
        Err(e) => {
            out.record("lattice", Err(e.to_string()));
            return false;
        }
    };
    out.record("lattice", Ok(format!("{} elements", lattice.len())));
    out.record(
        "semidistributive",
        lattice.check_semidistributive().map(|_| String::new()).map_err(|e| format!("{e:?}")),
    );

    let seg_index: HashMap<&Segment, usize> = segments.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let cover_segment: HashMap<(usize, usize), usize> =
        gt.flips.iter().map(|e| ((e.from, e.to), seg_index[&e.segment])).collect();
    let order = containment_order(segments);
    out.record(
        "CN-labeling",
        check_cn_labeling(&lattice, |a, b| cover_segment[&(a, b)], &order)
            .map(|_| "segment labels, ordered by containment".to_string())
            .map_err(|v| format!("{v:?}")),
    );

    let con = lattice.congruence_lattice();
    let u = lattice.uniformity(&con);
    let uniform = out.record(
        "congruence-uniform",
        if u.holds() {
            Ok(format!("|J(L)| = |M(L)| = |J(Con L)| = {}", u.congruence_irreducibles))
        } else {
            Err(format!("{u:?}"))
        },
    );

    let covers = gt.poset.covers();
    let structure = (|| {
        if con.irreducibles().len() != segments.len() {
            return Err(format!("{} irreducible congruences, {} segments", con.irreducibles().len(), segments.len()));
        }
        for (i, &(x, y)) in covers.iter().enumerate() {
            let s = &segments[cover_segment[&(x, y)]];
            let theta = &con.irreducibles()[con.cover_class(i)];
            for &(a, b) in covers {
                let t = &segments[cover_segment[&(a, b)]];
                if theta.same_class(a, b) != s.is_subsegment_of(t) {
                    return Err(format!("con of a {s} cover and the {t} cover {a}<{b}"));
                }
            }
        }
        Ok(format!("Con ≅ order ideals of {} segments", segments.len()))
    })();
    out.record("congruence structure", structure);
    uniform
}

/// Runs every check on `shape`.
pub fn verify(shape: &Shape, opts: &VerifyOptions) -> Report {
    let mut out = Collector(Vec::new());
    let nk = NonKissingComplex::new(shape.clone());
    let segments = enumerate_segments(shape);
    let gt = match nk.grid_tamari() {
        Ok(gt) => gt,
        Err(e) => {
            out.record("flip order", Err(e.to_string()));
            return Report {
                essential_paths: nk.num_essential(),
                facets: 0,
                segments: segments.len(),
                biclosed: None,
                congruence_uniform: false,
                checks: out.0,
            };
        }
    };

    let cliques = nk.enumerate_facets(EnumerationMethod::Cliques).map_err(|e| e.to_string());
    out.record(
        "facets by flips = cliques",
        match cliques {
            Ok(c) if c == gt.facets => Ok(format!("{} facets", c.len())),
            Ok(c) => Err(format!("{} by cliques, {} by flips", c.len(), gt.facets.len())),
            Err(e) => Err(e),
        },
    );
    facet_checks(&nk, &gt, &mut out);

    let built = build_by_stellation(shape);
    let enumerated =
        SimplicialComplex::from_facets(gt.facets.iter().map(|f| nk.facet_paths(f).cloned().collect::<BTreeSet<_>>()));
    out.record(
        "stellation",
        if built.complex == enumerated {
            Ok(format!("{} operations", built.log.len()))
        } else {
            Err(format!("{} facets built, {} enumerated", built.complex.facets().len(), enumerated.facets().len()))
        },
    );

    let congruence_uniform = lattice_checks(&gt, &segments, &mut out);

    let mut biclosed = None;
    if segments.len() > opts.max_bic_segments {
        out.skip(
            "biclosed quotient",
            format!("{} segments exceed the cap of {}", segments.len(), opts.max_bic_segments),
        );
    } else {
        match quotient_gt(shape) {
            Ok(q) => {
                biclosed = Some(q.bic.len());
                out.record(
                    "biclosed quotient",
                    Ok(format!("{} biclosed sets onto {} classes", q.bic.len(), q.classes.len())),
                );
                let bic = q.bic.lattice();
                let order = containment_order(q.closure.segments());
                out.record(
                    "Bic semidistributive",
                    bic.check_semidistributive().map(|_| String::new()).map_err(|e| format!("{e:?}")),
                );
                out.record(
                    "Bic CN-labeling",
                    check_cn_labeling(bic, |a, b| q.bic.cover_segment(a, b).expect("cover"), &order)
                        .map(|_| String::new())
                        .map_err(|v| format!("{v:?}")),
                );
            }
            Err(e) => {
                out.record("biclosed quotient", Err(e.to_string()));
            }
        }
    }

    Report {
        essential_paths: nk.num_essential(),
        facets: gt.facets.len(),
        segments: segments.len(),
        biclosed,
        congruence_uniform,
        checks: out.0,
    }
}
