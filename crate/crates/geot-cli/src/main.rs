//! `geot`: command-line front end for the geot library.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use geot::constructions::{
    gen_margulis, gen_random_regular, gen_standard, girth, graft_tree, StandardKind,
};
use geot::cost::{
    coarse_distortion, cost_upper_bound, max_short_cycle_free_subgraph, CostOptions, CostReport,
    CostRow, DEFAULT_ALL_PAIRS_CAP,
};
use geot::cycles::{
    bridges, cycle_space_dim, nice_cycle_vector, select_b, short_cycle_rank, solve_rho,
    CycleOptions, DEFAULT_CYCLE_CAP, DEFAULT_MAX_RETRIES,
};
use geot::expansion::{
    cheeger_certificate, cheeger_exact, graft_expansion_bound, CheegerMode, DEFAULT_BRUTE_FORCE_CAP,
};
use geot::graph::{ball, component_labels, is_connected, max_degree};
use geot::spectral::{spectral_gap, SpectrumOptions};
use geot::witnesses::{derive_constants, spectral_witness, ConstantsBundle, WitnessOptions};
use geot::{parse_graph, Error, Graph, GraphFamily};
use serde::Serialize;
use serde_json::{json, Value};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "geot",
    version,
    about = "Spectral, cycle-space and cost witnesses for finite graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// Short-cycle length bound R (default depends on the subcommand).
    #[arg(long = "R", global = true)]
    r: Option<usize>,
    /// Twist parameter for `witness`, overriding the derived t.
    #[arg(long, global = true)]
    t: Option<f64>,
    /// Degree bound (defaults to the maximum degree of the input).
    #[arg(long, global = true)]
    d: Option<usize>,
    /// Spectral gap gamma used to derive the constants.
    #[arg(long, global = true, default_value_t = 1.0)]
    gamma: f64,
    /// Density threshold epsilon (defaults to the derived constant).
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest vertex count for exhaustive Cheeger enumeration.
    #[arg(long = "brute-cap", global = true, default_value_t = DEFAULT_BRUTE_FORCE_CAP)]
    brute_cap: usize,
    /// Largest number of short cycles enumerated before giving up.
    #[arg(long = "cycle-cap", global = true, default_value_t = DEFAULT_CYCLE_CAP)]
    cycle_cap: usize,
    /// Worker threads for family-level work.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, short, global = true)]
    verbose: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Degrees, components, girth, gap, bridges, dim Z_R and small Cheeger constants.
    Analyze { files: Vec<PathBuf> },
    /// Short cycles, the selected edges B, a nice cycle vector and rho.
    Cycles { file: PathBuf },
    /// Runs the spectral witness pipeline on one graph.
    Witness { file: PathBuf },
    /// Edge bound for short-cycle-free subgraphs over a directory of graphs.
    Cost { dir: PathBuf },
    /// Grafts a depth-R tree onto a base graph.
    Graft {
        file: PathBuf,
        /// Also write the grafted graph as an edge list.
        #[arg(long = "graph-out")]
        graph_out: Option<PathBuf>,
    },
    /// Generates a graph as an edge list.
    Gen {
        /// cycle, path, complete, petersen, regular or margulis.
        kind: String,
        n: usize,
    },
    /// The constant chain for (d, gamma).
    Constants,
    /// Coarse distortion between two graphs on one vertex set; with one
    /// file, against its maximal R-cycle-free subgraph.
    Distortion { x: PathBuf, y: Option<PathBuf> },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e.root() {
        Error::TooLarge { .. }
        | Error::CycleBudgetExceeded { .. }
        | Error::RetriesExhausted { .. }
        | Error::GenerationFailed { .. } => 3,
        Error::Singular | Error::Residual { .. } | Error::Eigen(_) | Error::Invariant(_) => 4,
        _ => 2,
    }
}

/// What a subcommand produced: the rendered output and the exit code to
/// return after writing it.
struct Output {
    body: String,
    code: u8,
}

impl Output {
    fn ok(body: String) -> Self {
        Output { body, code: 0 }
    }
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    parse_graph(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Failure {
            code: 4,
            message: format!("serialization failed: {e}"),
        })
}

fn envelope(kind: &str, seed: u64, body: impl Serialize) -> Result<Value, Failure> {
    let mut v = serde_json::to_value(body).map_err(|e| Failure {
        code: 4,
        message: format!("serialization failed: {e}"),
    })?;
    let Value::Object(map) = &mut v else {
        return Err(Failure {
            code: 4,
            message: "report is not an object".into(),
        });
    };
    let mut out = serde_json::Map::new();
    out.insert(
        "schema".into(),
        json!(format!("geot.{kind}/{SCHEMA_VERSION}")),
    );
    out.insert("seed".into(), json!(seed));
    out.append(map);
    Ok(Value::Object(out))
}

fn no_csv(format: Format, command: &str) -> Result<(), Failure> {
    if format == Format::Csv {
        return Err(input_error(format!(
            "`{command}` has no tabular output; use json or text"
        )));
    }
    Ok(())
}

fn cycle_options(c: &Common) -> CycleOptions {
    CycleOptions { cap: c.cycle_cap }
}

fn log(c: &Common, msg: impl AsRef<str>) {
    if c.verbose {
        eprintln!("geot: {}", msg.as_ref());
    }
}

#[derive(Serialize)]
struct CheegerSummary {
    half: Option<f64>,
    mid_range: Option<f64>,
    half_witness: Vec<usize>,
}

#[derive(Serialize)]
struct AnalyzeRecord {
    file: String,
    vertices: usize,
    edges: usize,
    min_degree: usize,
    max_degree: usize,
    components: usize,
    girth: Option<usize>,
    gap: Option<f64>,
    bridge_count: usize,
    all_bridges: bool,
    bridges: Vec<(usize, usize)>,
    #[serde(rename = "dim_Z")]
    dim_z: usize,
    #[serde(rename = "R")]
    r: usize,
    #[serde(rename = "dim_Z_R")]
    dim_z_r: Option<usize>,
    cheeger: Option<CheegerSummary>,
    partial: bool,
    notes: Vec<String>,
}

fn analyze_one(path: &Path, g: &Graph, c: &Common, r: usize) -> Result<AnalyzeRecord, Failure> {
    let n = g.vertex_count();
    let br = bridges(g);
    let bridge_edges: Vec<_> = (0..g.edge_count())
        .filter(|&e| br.is_bridge(e))
        .map(|e| g.edge(e))
        .collect();
    let mut notes = Vec::new();
    let mut partial = false;
    let dim_z_r = match short_cycle_rank(g, r, cycle_options(c)) {
        Ok(set) => set.rank,
        Err(e) if exit_code(&e) == 3 => {
            partial = true;
            notes.push(e.to_string());
            None
        }
        Err(e) => return Err(e.into()),
    };
    let cheeger = if n >= 2 && n <= c.brute_cap && is_connected(g) {
        let half = cheeger_exact(g, CheegerMode::Half, c.brute_cap)?;
        let mid = cheeger_exact(g, CheegerMode::MidRange, c.brute_cap).ok();
        Some(CheegerSummary {
            half: Some(half.minimum_ratio),
            mid_range: mid.map(|m| m.minimum_ratio),
            half_witness: half.witness_subset,
        })
    } else {
        None
    };
    Ok(AnalyzeRecord {
        file: path.display().to_string(),
        vertices: n,
        edges: g.edge_count(),
        min_degree: (0..n).map(|x| g.degree(x)).min().unwrap_or(0),
        max_degree: max_degree(g),
        components: component_labels(g).1,
        girth: girth(g),
        gap: spectral_gap(g, &SpectrumOptions::default())?.gap,
        bridge_count: bridge_edges.len(),
        all_bridges: bridge_edges.len() == g.edge_count(),
        bridges: bridge_edges,
        dim_z: cycle_space_dim(g),
        r,
        dim_z_r,
        cheeger,
        partial,
        notes,
    })
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map(T::to_string).unwrap_or_default()
}

fn cmd_analyze(files: &[PathBuf], c: &Common, format: Format) -> Result<Output, Failure> {
    if files.is_empty() {
        return Err(input_error("no input files"));
    }
    let r = c.r.unwrap_or(4);
    let mut records = Vec::new();
    for path in files {
        log(c, format!("analyze {}", path.display()));
        let g = read_graph(path)?;
        records.push(analyze_one(path, &g, c, r)?);
    }
    let code = if records.iter().any(|r| r.partial) {
        3
    } else {
        0
    };
    let body = match format {
        Format::Json => to_json(&envelope(
            "analyze",
            c.seed,
            json!({ "R": r, "graphs": records }),
        )?)?,
        Format::Csv | Format::Text => {
            let sep = if format == Format::Csv { "," } else { " " };
            let mut s = [
                "file",
                "vertices",
                "edges",
                "components",
                "girth",
                "gap",
                "bridges",
                "dim_Z",
                "dim_Z_R",
                "partial",
            ]
            .join(sep)
                + "\n";
            for rec in &records {
                let row = [
                    rec.file.clone(),
                    rec.vertices.to_string(),
                    rec.edges.to_string(),
                    rec.components.to_string(),
                    opt(&rec.girth),
                    opt(&rec.gap),
                    rec.bridge_count.to_string(),
                    rec.dim_z.to_string(),
                    opt(&rec.dim_z_r),
                    rec.partial.to_string(),
                ];
                s += &(row.join(sep) + "\n");
            }
            s
        }
    };
    Ok(Output { body, code })
}

fn cmd_cycles(file: &Path, c: &Common, format: Format) -> Result<Output, Failure> {
    no_csv(format, "cycles")?;
    let g = read_graph(file)?;
    let r = c.r.unwrap_or(4);
    let set = short_cycle_rank(&g, r, cycle_options(c))?;
    let pipeline = if is_connected(&g) {
        let b = select_b(&g, r, cycle_options(c))?;
        let v = nice_cycle_vector(&b.remainder(&g), c.seed, DEFAULT_MAX_RETRIES)?.lift_to(&g)?;
        let rho = solve_rho(&g, r, &v, &b)?;
        Some(json!({ "B": b.edges, "v": v.0.records(), "rho": rho.0.records() }))
    } else {
        log(c, "graph is disconnected; skipping B, v and rho");
        None
    };
    let body = match format {
        Format::Json => to_json(&envelope(
            "cycles",
            c.seed,
            json!({
                "R": r,
                "vertices": g.vertex_count(),
                "edges": g.edge_count(),
                "dim_Z": cycle_space_dim(&g),
                "dim_Z_R": set.rank,
                "count": set.cycles.len(),
                "cycles": set.cycles,
                "pipeline": pipeline,
            }),
        )?)?,
        _ => {
            let mut s = format!(
                "R = {r}: {} cycles, dim Z_R = {}, dim Z = {}\n",
                set.cycles.len(),
                opt(&set.rank),
                cycle_space_dim(&g)
            );
            for cyc in &set.cycles {
                s += &format!("{cyc:?}\n");
            }
            s
        }
    };
    Ok(Output::ok(body))
}

fn bundle_for(c: &Common, d: usize) -> Result<ConstantsBundle, Failure> {
    let mut bundle = derive_constants(d, c.gamma)?;
    if let Some(t) = c.t {
        if !(t.is_finite() && t > 0.0) {
            return Err(input_error(format!("--t must be positive, got {t}")));
        }
        bundle.t = t;
        bundle.checks = bundle.verify();
    }
    if let Some(eps) = c.epsilon {
        bundle.epsilon = eps;
        bundle.checks = bundle.verify();
    }
    Ok(bundle)
}

fn cmd_witness(file: &Path, c: &Common, format: Format) -> Result<Output, Failure> {
    no_csv(format, "witness")?;
    let g = read_graph(file)?;
    let r = c.r.unwrap_or(4);
    let d = c.d.unwrap_or_else(|| max_degree(&g).max(2));
    let bundle = bundle_for(c, d)?;
    let opts = WitnessOptions {
        seed: c.seed,
        brute_force_cap: c.brute_cap,
        cycles: cycle_options(c),
        ..Default::default()
    };
    let report = spectral_witness(&g, r, &bundle, &opts)?;
    for stage in &report.stages {
        log(c, stage);
    }
    let code = if report.violated() { 4 } else { 0 };
    let body = match format {
        Format::Json => to_json(&envelope(
            "witness",
            c.seed,
            json!({ "constants": bundle, "report": report }),
        )?)?,
        _ => {
            let mut s = report.stages.join("\n") + "\n";
            s += &format!(
                "regime {} asserting {} defect {:e} bound {:e} holds {} window_hit {}\n",
                report.regime,
                report.asserting,
                report.defect_norm,
                report.bound,
                report.defect_holds,
                report.window_hit
            );
            s
        }
    };
    Ok(Output { body, code })
}

fn graph_files(dir: &Path) -> Result<Vec<PathBuf>, Failure> {
    let entries = fs::read_dir(dir).map_err(|e| input_error(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(input_error(format!("{}: no graph files", dir.display())));
    }
    Ok(files)
}

fn cmd_cost(dir: &Path, c: &Common, format: Format) -> Result<Output, Failure> {
    let r = c.r.unwrap_or(3);
    let files = graph_files(dir)?;
    let mut family = GraphFamily::new();
    let mut failures: Vec<(usize, String, String)> = Vec::new();
    for (i, path) in files.iter().enumerate() {
        let label = path
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        match read_graph(path) {
            Ok(g) => family.push(label, g),
            Err(f) => failures.push((i, label, f.message)),
        }
    }
    let d = c.d.unwrap_or_else(|| {
        family
            .members
            .iter()
            .map(|m| max_degree(&m.graph))
            .max()
            .unwrap_or(2)
            .max(2)
    });
    let epsilon = match c.epsilon {
        Some(e) => e,
        None => derive_constants(d, c.gamma)?.epsilon,
    };
    let opts = CostOptions {
        order_seed: c.seed,
        cycles: cycle_options(c),
        ..Default::default()
    };
    let mut report = if family.is_empty() {
        CostReport {
            r,
            epsilon,
            d,
            order_seed: c.seed,
            rows: Vec::new(),
            window: 0,
            ratio_x: None,
            ratio_y: None,
            density_bound: None,
        }
    } else {
        cost_upper_bound(&family, r, epsilon, d, &opts)?
    };
    // Put unreadable files back in directory order.
    let mut rows: Vec<CostRow> = Vec::with_capacity(files.len());
    let mut parsed = report.rows.drain(..);
    for i in 0..files.len() {
        let row = match failures.iter().find(|f| f.0 == i) {
            Some((_, label, msg)) => CostRow {
                index: i,
                label: label.clone(),
                vertices: 0,
                edges_x: 0,
                edges_y: 0,
                ratio_y: 0.0,
                density: None,
                bound: None,
                bound_holds: None,
                status: format!("input error: {msg}"),
            },
            None => {
                let mut row = parsed.next().ok_or_else(|| Failure {
                    code: 4,
                    message: "cost rows out of step with inputs".into(),
                })?;
                row.index = i;
                row
            }
        };
        rows.push(row);
    }
    drop(parsed);
    report.rows = rows;
    let code = if report.rows.iter().any(|r| r.bound_holds == Some(false)) {
        4
    } else {
        0
    };
    let body = match format {
        Format::Json => to_json(&envelope("cost", c.seed, &report)?)?,
        Format::Csv => report.to_csv()?,
        Format::Text => {
            let mut s = String::new();
            for row in &report.rows {
                s += &format!(
                    "{} {}: |V| {} |E(X)| {} |E(Y)| {} bound {} {}\n",
                    row.index,
                    row.label,
                    row.vertices,
                    row.edges_x,
                    row.edges_y,
                    opt(&row.bound),
                    row.status
                );
            }
            s += &format!(
                "liminf ratio X {} Y {} bound {}\n",
                opt(&report.ratio_x),
                opt(&report.ratio_y),
                opt(&report.density_bound)
            );
            s
        }
    };
    Ok(Output { body, code })
}

fn cmd_graft(
    file: &Path,
    graph_out: Option<&Path>,
    c: &Common,
    format: Format,
) -> Result<Output, Failure> {
    no_csv(format, "graft")?;
    let y = read_graph(file)?;
    let r = c.r.unwrap_or(2);
    let x = graft_tree(&y, r)?;
    let b = ball(&x.graph, x.root, r)?;
    let ball_components = component_labels(&b.graph).1;
    let ball_cycle_free = b.graph.edge_count() + ball_components == b.graph.vertex_count();
    let expansion = match (
        cheeger_certificate(&y, CheegerMode::MidRange, c.brute_cap),
        cheeger_certificate(&x.graph, CheegerMode::Half, c.brute_cap),
    ) {
        (Ok(base), Ok(grafted)) => {
            let bound = graft_expansion_bound(base.minimum_ratio).ok();
            Some(json!({
                "base_mid_range": base.minimum_ratio,
                "base_exact": base.exact,
                "grafted_half": grafted.minimum_ratio,
                "grafted_exact": grafted.exact,
                "bound": bound,
                "holds": bound.map(|b| grafted.minimum_ratio >= b - 1e-12),
            }))
        }
        _ => None,
    };
    let comments = vec![format!(
        "graft of {} with R = {r}, root {}",
        file.display(),
        x.root
    )];
    let edge_list = x.graph.to_edge_list(&comments);
    if let Some(p) = graph_out {
        fs::write(p, &edge_list).map_err(|e| input_error(format!("{}: {e}", p.display())))?;
    }
    let body = match format {
        Format::Json => {
            let mut v = envelope("graft", c.seed, &x)?;
            let map = v.as_object_mut().expect("envelope is an object");
            map.insert("R".into(), json!(r));
            map.insert("vertices".into(), json!(x.graph.vertex_count()));
            map.insert("edges".into(), json!(x.graph.edge_count()));
            map.insert("ball_vertices".into(), json!(b.graph.vertex_count()));
            map.insert("ball_edges".into(), json!(b.graph.edge_count()));
            map.insert("ball_cycle_free".into(), json!(ball_cycle_free));
            map.insert("expansion".into(), json!(expansion));
            match graph_out {
                Some(p) => map.insert("graph_file".into(), json!(p.display().to_string())),
                None => map.insert("edge_list".into(), json!(edge_list)),
            };
            to_json(&v)?
        }
        _ => edge_list,
    };
    Ok(Output::ok(body))
}

fn cmd_gen(kind: &str, n: usize, c: &Common, format: Format) -> Result<Output, Failure> {
    no_csv(format, "gen")?;
    let mut header = format!("geot gen {kind} n={n}");
    let g = match kind {
        "regular" => {
            let d = c.d.ok_or_else(|| input_error("`gen regular` needs --d"))?;
            header += &format!(" d={d} seed={}", c.seed);
            gen_random_regular(n, d, c.seed)?
        }
        "margulis" => {
            let m = gen_margulis(n)?;
            header += &format!(
                " dropped_loops={} dropped_multi_edges={}",
                m.dropped_loops, m.dropped_multi_edges
            );
            m.graph
        }
        other => {
            let kind: StandardKind = other
                .parse()
                .map_err(|e: Error| input_error(e.to_string()))?;
            gen_standard(kind, n)?
        }
    };
    let body = match format {
        Format::Json => to_json(&envelope(
            "gen",
            c.seed,
            json!({ "kind": kind, "n": n, "vertices": g.vertex_count(), "edges": g.edges() }),
        )?)?,
        _ => g.to_edge_list(&[header]),
    };
    Ok(Output::ok(body))
}

fn cmd_constants(c: &Common, format: Format) -> Result<Output, Failure> {
    no_csv(format, "constants")?;
    let bundle = bundle_for(c, c.d.unwrap_or(3))?;
    let body = match format {
        Format::Json => to_json(&envelope("constants", c.seed, &bundle)?)?,
        _ => {
            let mut s = format!(
                "d {} gamma {}\nh {:e}\nc1 {:e}\nc2 {:e}\nc3 {:e}\nt {:e}\nepsilon {:e}\n",
                bundle.d,
                bundle.gamma,
                bundle.h,
                bundle.c1,
                bundle.c2,
                bundle.c3,
                bundle.t,
                bundle.epsilon
            );
            for check in &bundle.checks {
                s += &format!(
                    "{} {:e} {:e} {}\n",
                    check.name, check.lhs, check.rhs, check.holds
                );
            }
            s
        }
    };
    let code = if bundle.checks.iter().all(|ch| ch.holds) {
        0
    } else {
        4
    };
    Ok(Output { body, code })
}

fn cmd_distortion(
    x: &Path,
    y: Option<&Path>,
    c: &Common,
    format: Format,
) -> Result<Output, Failure> {
    no_csv(format, "distortion")?;
    let gx = read_graph(x)?;
    let (gy, source) = match y {
        Some(p) => (read_graph(p)?, p.display().to_string()),
        None => {
            let r = c.r.unwrap_or(3);
            (
                max_short_cycle_free_subgraph(&gx, r, c.seed)?,
                format!("maximal {r}-cycle-free subgraph"),
            )
        }
    };
    let w = coarse_distortion(&gx, &gy, DEFAULT_ALL_PAIRS_CAP)?;
    let body = match format {
        Format::Json => to_json(&envelope(
            "distortion",
            c.seed,
            json!({ "x": x.display().to_string(), "y": source, "edges_x": gx.edge_count(), "edges_y": gy.edge_count(), "witness": w }),
        )?)?,
        _ => format!(
            "L = {} (x/y {}, y/x {}), worst pair {:?}\n",
            w.l, w.x_over_y, w.y_over_x, w.worst_pair
        ),
    };
    Ok(Output::ok(body))
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let c = &cli.common;
    if let Some(jobs) = c.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| input_error(format!("--jobs: {e}")))?;
    }
    let fmt = |default| c.format.unwrap_or(default);
    match &cli.command {
        Command::Analyze { files } => cmd_analyze(files, c, fmt(Format::Json)),
        Command::Cycles { file } => cmd_cycles(file, c, fmt(Format::Json)),
        Command::Witness { file } => cmd_witness(file, c, fmt(Format::Json)),
        Command::Cost { dir } => cmd_cost(dir, c, fmt(Format::Json)),
        Command::Graft { file, graph_out } => {
            cmd_graft(file, graph_out.as_deref(), c, fmt(Format::Json))
        }
        Command::Gen { kind, n } => cmd_gen(kind, *n, c, fmt(Format::Text)),
        Command::Constants => cmd_constants(c, fmt(Format::Json)),
        Command::Distortion { x, y } => cmd_distortion(x, y.as_deref(), c, fmt(Format::Json)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|out| {
        match &cli.common.out {
            Some(path) => fs::write(path, &out.body)
                .map_err(|e| input_error(format!("{}: {e}", path.display())))?,
            None => {
                let mut stdout = std::io::stdout().lock();
                // A closed pipe is not worth reporting.
                let _ = stdout.write_all(out.body.as_bytes());
            }
        }
        Ok(out.code)
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("geot: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
