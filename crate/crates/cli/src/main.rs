use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use grid_tamari::biclosed::{quotient_gt, SegmentClosure};
use grid_tamari::cambrian::{cambrian_poset, ribbon, tau_isomorphism, Orientation};
use grid_tamari::grassmann::{grassmann_tamari, path_to_subset, rectangle};
use grid_tamari::grid::Shape;
use grid_tamari::nkcomplex::NonKissingComplex;
use grid_tamari::poset::{FinitePoset, Lattice};
use grid_tamari::stellation::{build_by_stellation, LogEntry};
use grid_tamari::verify::{verify, VerifyOptions};

const DEFAULT_MAX_PATHS: usize = 64;

#[derive(Parser)]
#[command(name = "gt", version, about = "Non-kissing complexes, Grid-Tamari orders and biclosed segment sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Facets of the reduced non-kissing complex.
    Facets(ShapeCmd),
    /// The Grid-Tamari order, covers labelled by kissing segments.
    Poset(ShapeCmd),
    /// The lattice of biclosed segment sets.
    Biclosed(ShapeCmd),
    /// Θ-classes of the biclosed lattice and their facets.
    Quotient(ShapeCmd),
    /// Join-irreducible congruences of the Grid-Tamari order.
    Congruences(ShapeCmd),
    /// The complex rebuilt by suspensions and edge stellations.
    Stellate(ShapeCmd),
    /// The Grassmann-Tamari order on non-crossing k-subsets of [n].
    Grassmann {
        k: u32,
        n: u32,
        #[arg(long, value_enum, default_value_t = Format::Summary)]
        format: Format,
    },
    /// The Cambrian lattice of an orientation word over {<,>}.
    Cambrian {
        #[arg(allow_hyphen_values = true)]
        word: String,
        /// Also build GT of the double ribbon and verify the isomorphism.
        #[arg(long)]
        check_iso: bool,
        #[arg(long, value_enum, default_value_t = Format::Summary)]
        format: Format,
    },
    /// Run the full invariant suite on a shape.
    Verify(ShapeCmd),
}

#[derive(Args)]
struct ShapeCmd {
    #[command(flatten)]
    source: ShapeSource,
    #[arg(long, value_enum, default_value_t = Format::Summary)]
    format: Format,
    /// Ignore the essential-path cap (GT_MAX_PATHS, default 64).
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ShapeSource {
    /// ASCII art (`#` for a cell) or JSON `{"vertices": [[x, y], ...]}`.
    #[arg(long, value_name = "FILE")]
    shape: Option<PathBuf>,
    /// K rows and M columns of cells.
    #[arg(long, num_args = 2, value_names = ["K", "M"])]
    rect: Option<Vec<u32>>,
    /// Double ribbon of an orientation word over {<,>}.
    #[arg(long, value_name = "WORD", allow_hyphen_values = true)]
    ribbon: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Dot,
    Json,
    Summary,
}

enum Failure {
    Input(String),
    Verification(String),
}

type Outcome = Result<String, Failure>;

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn load_shape(src: &ShapeSource) -> Result<Shape, Failure> {
    if let Some(path) = &src.shape {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        let parsed =
            if text.trim_start().starts_with('{') { Shape::from_json(&text) } else { Shape::parse_ascii(&text) };
        return parsed.map_err(|e| Failure::Input(format!("{}: {e}", path.display())));
    }
    if let Some(rc) = &src.rect {
        let (k, m) = (rc[0], rc[1]);
        if k == 0 || m == 0 {
            return Err(Failure::Input("--rect needs K, M ≥ 1".into()));
        }
        return Ok(Shape::rectangle(k, m));
    }
    let word = src.ribbon.as_deref().unwrap_or_default();
    Ok(ribbon(&word.parse::<Orientation>().map_err(input)?))
}

fn max_paths() -> Result<usize, Failure> {
    match std::env::var("GT_MAX_PATHS") {
        Ok(v) => v.trim().parse().map_err(|_| Failure::Input(format!("GT_MAX_PATHS={v} is not a number"))),
        Err(_) => Ok(DEFAULT_MAX_PATHS),
    }
}

/// Loads the shape and applies the size guard.
fn prepare(cmd: &ShapeCmd) -> Result<(Shape, NonKissingComplex), Failure> {
    let shape = load_shape(&cmd.source)?;
    let nk = NonKissingComplex::new(shape.clone());
    let cap = max_paths()?;
    if !cmd.force && nk.num_essential() > cap {
        return Err(Failure::Input(format!(
            "shape has {} essential paths, above the cap of {cap}; pass --force or raise GT_MAX_PATHS",
            nk.num_essential()
        )));
    }
    Ok((shape, nk))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn poset_out(p: &FinitePoset, format: Format, summary: impl FnOnce() -> String) -> String {
    match format {
        Format::Dot => p.to_dot(),
        Format::Json => pretty(&serde_json::to_value(p.to_json()).expect("serializable")),
        Format::Summary => summary(),
    }
}

fn lattice_line(p: &FinitePoset) -> String {
    match Lattice::new(p.clone()) {
        Ok(l) => format!("lattice=yes, semidistributive={}", if l.is_semidistributive() { "yes" } else { "no" }),
        Err(_) => "lattice=no".into(),
    }
}

fn facets(cmd: &ShapeCmd) -> Outcome {
    let (shape, nk) = prepare(cmd)?;
    let gt = nk.grid_tamari().map_err(input)?;
    let fv = nk.f_vector();
    Ok(match cmd.format {
        Format::Dot => gt.poset.to_dot(),
        Format::Json => pretty(&json!({
            "shape": shape.to_json(),
            "essential_paths": nk.essential_paths().map(ToString::to_string).collect::<Vec<_>>(),
            "f_vector": fv,
            "facets": gt.facets.iter().map(|f| nk.facet_paths(f).map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })),
        Format::Summary => {
            let mut s =
                format!("essential paths: {}\nfacets: {}\nf-vector: {:?}\n", nk.num_essential(), gt.facets.len(), fv);
            for f in &gt.facets {
                let _ = writeln!(s, "{}", nk.facet_label(f));
            }
            s
        }
    })
}

fn poset(cmd: &ShapeCmd) -> Outcome {
    let (_, nk) = prepare(cmd)?;
    let gt = nk.grid_tamari().map_err(input)?;
    Ok(poset_out(&gt.poset, cmd.format, || {
        format!("elements: {}\ncovers: {}\n{}\n", gt.poset.len(), gt.poset.covers().len(), lattice_line(&gt.poset))
    }))
}

fn biclosed(cmd: &ShapeCmd) -> Outcome {
    let (shape, _) = prepare(cmd)?;
    let closure = SegmentClosure::new(&shape).map_err(input)?;
    let bic = closure.enumerate_biclosed().map_err(input)?;
    let p = bic.lattice().poset();
    Ok(poset_out(p, cmd.format, || {
        let mut s = format!("segments: {}\nbiclosed sets: {}\n{}\n", closure.len(), bic.len(), lattice_line(p));
        for name in p.names() {
            let _ = writeln!(s, "{name}");
        }
        s
    }))
}

fn quotient(cmd: &ShapeCmd) -> Outcome {
    let (shape, _) = prepare(cmd)?;
    let q = quotient_gt(&shape).map_err(|e| Failure::Verification(e.to_string()))?;
    let rows: Vec<(String, String, String, usize)> = q
        .classes
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let size = q.class_of.iter().filter(|&&x| x == k).count();
            (
                q.complex.facet_label(&c.facet),
                q.closure.format_set(c.bottom.set()),
                q.closure.format_set(c.top.set()),
                size,
            )
        })
        .collect();
    Ok(match cmd.format {
        Format::Dot => q.poset.to_dot(),
        Format::Json => pretty(&json!({
            "biclosed": q.bic.len(),
            "classes": rows.iter().map(|(f, b, t, n)| json!({"facet": f, "bottom": b, "top": t, "size": n})).collect::<Vec<_>>(),
        })),
        Format::Summary => {
            let mut s = format!("biclosed sets: {}\nΘ-classes: {}\nBic/Θ ≅ GT: yes\n", q.bic.len(), q.classes.len());
            for (f, b, t, n) in &rows {
                let _ = writeln!(s, "{f}  [{b}, {t}]  size {n}");
            }
            s
        }
    })
}

fn congruences(cmd: &ShapeCmd) -> Outcome {
    let (_, nk) = prepare(cmd)?;
    let gt = nk.grid_tamari().map_err(input)?;
    let lattice = Lattice::new(gt.poset.clone()).map_err(|e| Failure::Verification(e.to_string()))?;
    let con = lattice.congruence_lattice();
    let covers = gt.poset.covers();
    let names: Vec<String> = (0..con.irreducibles().len())
        .map(|i| {
            let mut labels: Vec<&str> = (0..covers.len())
                .filter(|&c| con.cover_class(c) == i)
                .filter_map(|c| gt.poset.cover_label(covers[c].0, covers[c].1))
                .collect();
            labels.sort_unstable();
            labels.dedup();
            format!("con({})", labels.join(","))
        })
        .collect();
    let forcing = FinitePoset::from_covers(names.clone(), con.forcing_order().covers().to_vec()).map_err(input)?;
    Ok(poset_out(&forcing, cmd.format, || {
        let mut s = format!("join-irreducible congruences: {}\ncongruences: {}\n", names.len(), con.count());
        for (i, name) in names.iter().enumerate() {
            let contracted: Vec<&str> = covers
                .iter()
                .filter(|&&(a, b)| con.irreducibles()[i].same_class(a, b))
                .filter_map(|&(a, b)| gt.poset.cover_label(a, b))
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .collect();
            let _ = writeln!(s, "{name} contracts covers labelled {}", contracted.join(" "));
        }
        s
    }))
}

fn stellate(cmd: &ShapeCmd) -> Outcome {
    let (shape, _) = prepare(cmd)?;
    let built = build_by_stellation(&shape);
    Ok(match cmd.format {
        Format::Json => pretty(&json!({
            "log": built.log.iter().map(LogEntry::to_json).collect::<Vec<_>>(),
            "facets": built.complex.facets().iter().map(|f| f.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })),
        Format::Dot => {
            let mut s = String::from("graph {\n");
            let facets = built.complex.facets();
            let edges: std::collections::BTreeSet<(String, String)> = facets
                .iter()
                .flat_map(|f| {
                    let v: Vec<String> = f.iter().map(ToString::to_string).collect();
                    (0..v.len()).flat_map(move |i| {
                        (i + 1..v.len()).map({
                            let v = v.clone();
                            move |j| (v[i].clone(), v[j].clone())
                        })
                    })
                })
                .collect();
            for (a, b) in edges {
                let _ = writeln!(s, "  \"{a}\" -- \"{b}\";");
            }
            s.push_str("}\n");
            s
        }
        Format::Summary => {
            let mut s = String::new();
            for e in &built.log {
                match e {
                    LogEntry::Suspend { labels } => {
                        let _ = writeln!(s, "suspend {} {}", labels[0], labels[1]);
                    }
                    LogEntry::Stellate { edge, new } => {
                        let _ = writeln!(s, "stellate {} {} -> {}", edge[0], edge[1], new);
                    }
                }
            }
            let _ = writeln!(s, "facets: {}", built.complex.facets().len());
            s
        }
    })
}

fn grassmann(k: u32, n: u32, format: Format) -> Outcome {
    if k == 0 || k >= n || n > 9 {
        return Err(Failure::Input(format!("need 0 < k < n ≤ 9, got k={k}, n={n}")));
    }
    let gt = grassmann_tamari(k, n).map_err(input)?;
    let nk = NonKissingComplex::new(rectangle(k, n));
    let paths = nk.grid_tamari().map_err(input)?;
    let same = paths.facets.len() == gt.facets.len()
        && paths.facets.iter().all(|f| {
            let s = nk.facet_paths(f).map(|p| path_to_subset(p, k, n)).collect::<Result<_, _>>();
            s.is_ok_and(|s| gt.facets.contains(&s))
        })
        && gt.poset.is_isomorphic(&paths.poset);
    if !same {
        return Err(Failure::Verification(format!("GT_{{{k},{n}}} differs from GT of the {k}×{} rectangle", n - k)));
    }
    Ok(poset_out(&gt.poset, format, || {
        format!(
            "elements: {}\ncovers: {}\nGT_{{{k},{n}}} ≅ GT({k}×{} rectangle): yes\n",
            gt.poset.len(),
            gt.poset.covers().len(),
            n - k
        )
    }))
}

fn cambrian(word: &str, check_iso: bool, format: Format) -> Outcome {
    let q: Orientation = word.parse().map_err(input)?;
    let camb = cambrian_poset(&q).map_err(|e| Failure::Verification(e.to_string()))?;
    let mut summary = format!("elements: {}\ncovers: {}\n", camb.poset.len(), camb.poset.covers().len());
    if check_iso {
        let iso = tau_isomorphism(&q).map_err(|e| Failure::Verification(e.to_string()))?;
        summary = format!("Camb ≅ GT(ribbon): {} elements\n", iso.map.len());
    }
    Ok(match format {
        Format::Json => pretty(&json!({
            "polygon": camb.polygon.to_json(),
            "ribbon": ribbon(&q).to_json(),
            "poset": camb.poset.to_json(),
        })),
        Format::Dot => camb.poset.to_dot(),
        Format::Summary => summary,
    })
}

fn verify_cmd(cmd: &ShapeCmd) -> Outcome {
    let (shape, _) = prepare(cmd)?;
    let report = verify(&shape, &VerifyOptions::new());
    let text = match cmd.format {
        Format::Json => pretty(&report.to_json()),
        _ => format!("{report}\n"),
    };
    if report.passed() {
        Ok(text)
    } else {
        Err(Failure::Verification(text))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Facets(c) => facets(c),
        Command::Poset(c) => poset(c),
        Command::Biclosed(c) => biclosed(c),
        Command::Quotient(c) => quotient(c),
        Command::Congruences(c) => congruences(c),
        Command::Stellate(c) => stellate(c),
        Command::Grassmann { k, n, format } => grassmann(*k, *n, *format),
        Command::Cambrian { word, check_iso, format } => cambrian(word, *check_iso, *format),
        Command::Verify(c) => verify_cmd(c),
    };
    match outcome {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(msg)) => {
            print!("{msg}");
            eprintln!("verification failed");
            ExitCode::from(2)
        }
    }
}
