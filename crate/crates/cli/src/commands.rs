use std::io::Read;

use serde::Serialize;
use serde_json::{json, Value};
use tightram_core::blowup::{blowup_matching_from_fractional, fractional_from_blowup_matching, project_component};
use tightram_core::combinatorics::factorial;
use tightram_core::hypergraph::{
    is_dense, parse_document, random_colored_complete, random_dense, random_hypergraph, GraphDocument,
};
use tightram_core::matching::{
    max_fractional_on, maximal_matching_greedy, maximum_matching, mu_exact, MuMode, MuOptions, DEFAULT_LP_CAP,
};
use tightram_core::pipeline::{run_pipeline, InconclusiveReason, PipelineConfig, PipelineStatus};
use tightram_core::rational::{format_rational, int, parse_rational};
use tightram_core::search::{extremal_coloring, ramsey_search, verify_extremal, RamseyOptions};
use tightram_core::tight::{
    find_tight_cycle, find_tight_path, find_walk, induced_walk, mono_components, sample_structure_case,
    tight_components, ColorFilter, ComponentIndex, SearchOptions, SearchOutcome, Shape, StructureCase, Verdict,
};
use tightram_core::{
    Blowup, Color, ColoredHypergraph, ComponentId, Edge, Error, ErrorClass, FractionalMatching, Hypergraph, Rational,
    Vertex,
};

use crate::{
    BlowupCommand, Cli, ColorArg, Command, CycleArgs, DensityArgs, Direction, ExtremalArgs, Format, GenArgs,
    MatchingArgs, MatchingMethod, MuArgs, MuModeArg, RamseyArgs, ShapeArg, WalkArgs,
};

pub struct Emit {
    pub body: String,
    pub exit: u8,
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Usage(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) => match e.class() {
                ErrorClass::InvalidInput => 2,
                ErrorClass::BudgetExhausted => 3,
                ErrorClass::InternalConsistency => 4,
            },
            CliError::Usage(_) | CliError::Io(_) => 2,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

const OK: u8 = 0;
const BUDGET: u8 = 3;
const VIOLATION: u8 = 5;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn json_line(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string(value).expect("reports serialize");
    s.push('\n');
    s
}

fn emit_json(value: &impl Serialize, exit: u8) -> Result<Emit> {
    Ok(Emit { body: json_line(value), exit })
}

fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| CliError::Io(e.to_string()))?;
    for row in rows {
        w.write_record(&row).map_err(|e| CliError::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn no_table(cli: &Cli, what: &str) -> Result<()> {
    if cli.format == Format::Csv {
        return Err(usage(format!("{what} has no tabular form; use --format json")));
    }
    Ok(())
}

fn read_input(cli: &Cli) -> Result<String> {
    match &cli.input {
        Some(path) => std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Io(e.to_string()))?;
            Ok(s)
        }
    }
}

enum Graph {
    Plain(Hypergraph),
    Colored(ColoredHypergraph),
}

impl Graph {
    fn base(&self) -> &Hypergraph {
        match self {
            Graph::Plain(h) => h,
            Graph::Colored(g) => g.base(),
        }
    }
}

fn read_graph(cli: &Cli) -> Result<Graph> {
    let doc = parse_document(&read_input(cli)?)?;
    Ok(if doc.colors.is_some() {
        Graph::Colored(doc.to_colored()?)
    } else {
        Graph::Plain(doc.to_hypergraph()?)
    })
}

fn read_colored(cli: &Cli) -> Result<ColoredHypergraph> {
    match read_graph(cli)? {
        Graph::Colored(g) => Ok(g),
        Graph::Plain(_) => Err(usage("this subcommand needs a coloured graph")),
    }
}

fn rational(text: &str) -> Result<Rational> {
    Ok(parse_rational(text)?)
}

fn vertex_list(text: &str) -> Result<Vec<Vertex>> {
    text.split(',')
        .map(|t| t.trim().parse::<Vertex>().map_err(|_| usage(format!("bad vertex list `{text}`"))))
        .collect()
}

fn edge_arg(h: &Hypergraph, text: &str) -> Result<Edge> {
    let vs = vertex_list(text)?;
    let e = Edge::new(vs);
    if !h.contains(&e) {
        return Err(Error::EdgeNotInHost(e.to_vec()).into());
    }
    Ok(e)
}

fn component_arg(g: &ColoredHypergraph, text: &str) -> Result<ComponentId> {
    let (color, index) = text.split_once(':').ok_or_else(|| usage("component must look like red:0"))?;
    let color = match color.to_ascii_lowercase().as_str() {
        "red" | "r" => Color::Red,
        "blue" | "b" => Color::Blue,
        other => return Err(usage(format!("unknown colour `{other}`"))),
    };
    let index: usize = index.parse().map_err(|_| usage("component index must be a number"))?;
    let comps = mono_components(g);
    if index >= comps.of(color).len() {
        return Err(Error::IndexOutOfRange {
            index,
            detail: format!("{} components of colour {color}", comps.of(color).len()),
        }
        .into());
    }
    Ok(ComponentId { color, index })
}

fn search_options(cli: &Cli) -> SearchOptions {
    let mut opts = SearchOptions::default();
    if let Some(b) = cli.budget_nodes {
        opts.max_nodes = b;
    }
    opts.parallel = cli.workers.is_some_and(|w| w > 1);
    opts
}

fn seed(cli: &Cli) -> u64 {
    cli.seed.unwrap_or(0)
}

pub fn run(cli: &Cli) -> Result<Emit> {
    match cli.workers {
        Some(w) if w > 1 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| CliError::Io(e.to_string()))?;
            pool.install(|| dispatch(cli))
        }
        _ => dispatch(cli),
    }
}

fn dispatch(cli: &Cli) -> Result<Emit> {
    match &cli.command {
        Command::Gen(a) => gen(cli, a),
        Command::Components => components(cli),
        Command::Walk(a) => walk(cli, a),
        Command::Cycle(a) => cycle(cli, a),
        Command::Matching(a) => matching(cli, a),
        Command::Blowup(c) => blowup(cli, c),
        Command::Pipeline => pipeline(cli),
        Command::ExtremalVerify(a) => extremal(cli, a),
        Command::Ramsey(a) => ramsey(cli, a),
        Command::Mu(a) => mu(cli, a),
        Command::Density(a) => density(cli, a),
    }
}

fn gen(cli: &Cli, a: &GenArgs) -> Result<Emit> {
    no_table(cli, "gen")?;
    let doc = if a.extremal {
        GraphDocument::from_colored(&extremal_coloring(a.k, a.n, a.i)?.coloring)
    } else {
        let base = if let Some(p) = &a.random {
            random_hypergraph(a.k, a.n, &rational(p)?, seed(cli))?
        } else if let Some(eps) = &a.dense {
            random_dense(a.k, a.n, &rational(eps)?, seed(cli))?
        } else if a.complete {
            Hypergraph::complete(a.k, a.n)?
        } else {
            return Err(usage("choose one of --complete, --random, --dense, --extremal"));
        };
        match (&a.p_red, &a.color) {
            (Some(_), Some(_)) => return Err(usage("--p-red and --color are exclusive")),
            (Some(p), None) => {
                let p = rational(p)?;
                let colored = if a.complete {
                    random_colored_complete(a.k, a.n, &p, seed(cli))?
                } else {
                    let coin = random_colored_complete(a.k, a.n, &p, seed(cli))?;
                    let colors = base.edges().iter().map(|e| coin.color_of(e).expect("complete host")).collect();
                    ColoredHypergraph::new(base, colors)?
                };
                GraphDocument::from_colored(&colored)
            }
            (None, Some(c)) => GraphDocument::from_colored(&ColoredHypergraph::monochromatic(base, Color::from_symbol(c)?)),
            (None, None) => GraphDocument::from_hypergraph(&base),
        }
    };
    emit_json(&doc, OK)
}

fn component_rows(index: &ComponentIndex, h: &Hypergraph, label: &str) -> (Vec<Value>, Vec<Vec<String>>) {
    let mut docs = Vec::new();
    let mut rows = Vec::new();
    for (i, c) in index.components().iter().enumerate() {
        let edges: Vec<Vec<Vertex>> = c.edges.iter().map(|&id| h.edge(id).to_vec()).collect();
        docs.push(json!({"index": i, "size": c.edges.len(), "edges": edges}));
        rows.push(vec![label.to_string(), i.to_string(), c.edges.len().to_string()]);
    }
    (docs, rows)
}

fn components(cli: &Cli) -> Result<Emit> {
    let (doc, rows) = match read_graph(cli)? {
        Graph::Plain(h) => {
            let (docs, rows) = component_rows(&tight_components(&h), &h, "uncoloured");
            (json!({ "components": docs }), rows)
        }
        Graph::Colored(g) => {
            let comps = mono_components(&g);
            let (red, mut rows) = component_rows(&comps.red, g.base(), "red");
            let (blue, blue_rows) = component_rows(&comps.blue, g.base(), "blue");
            rows.extend(blue_rows);
            (json!({ "red": red, "blue": blue }), rows)
        }
    };
    match cli.format {
        Format::Json => emit_json(&doc, OK),
        Format::Csv => Ok(Emit { body: csv_table(&["color", "index", "size"], rows)?, exit: OK }),
    }
}

fn structure_report(g: &ColoredHypergraph, case: StructureCase) -> Result<Emit> {
    let verdict = case.check(g, &mono_components(g))?;
    let exit = if verdict == Verdict::Violated { VIOLATION } else { OK };
    emit_json(&json!({ "case": case, "verdict": verdict }), exit)
}

fn walk(cli: &Cli, a: &WalkArgs) -> Result<Emit> {
    no_table(cli, "walk")?;
    if a.sample {
        let g = read_colored(cli)?;
        let comps = mono_components(&g);
        return match sample_structure_case(&g, &comps, a.reversed, a.max_filler, seed(cli)) {
            Some(case) => structure_report(&g, case),
            None => emit_json(&json!({ "case": null, "verdict": null }), OK),
        };
    }
    if let Some(seq) = &a.sequence {
        let vs = vertex_list(seq)?;
        return match a.pivot {
            Some(pivot) => {
                let g = read_colored(cli)?;
                let walk = induced_walk(g.base(), &vs)?;
                structure_report(&g, StructureCase { walk, pivot, reversed: a.reversed })
            }
            None => {
                let graph = read_graph(cli)?;
                let walk = induced_walk(graph.base(), &vs)?;
                emit_json(&json!({ "walk": walk, "closed": walk.is_closed() }), OK)
            }
        };
    }
    let (Some(from), Some(to)) = (&a.from, &a.to) else {
        return Err(usage("give --from/--to, --sequence or --sample"));
    };
    let graph = read_graph(cli)?;
    let h = graph.base();
    let walk = find_walk(h, &edge_arg(h, from)?, &edge_arg(h, to)?)?;
    emit_json(&json!({ "walk": walk }), OK)
}

fn cycle(cli: &Cli, a: &CycleArgs) -> Result<Emit> {
    no_table(cli, "cycle")?;
    let g = read_colored(cli)?;
    let filter = match a.color {
        ColorArg::Any => ColorFilter::Any,
        ColorArg::Red => ColorFilter::Red,
        ColorArg::Blue => ColorFilter::Blue,
    };
    let outcome = match a.shape {
        ShapeArg::Cycle => find_tight_cycle(&g, a.length, filter, search_options(cli))?,
        ShapeArg::Path => find_tight_path(&g, a.length, filter, search_options(cli))?,
    };
    let exit = if matches!(outcome, SearchOutcome::BudgetExhausted { .. }) { BUDGET } else { OK };
    emit_json(&outcome, exit)
}

fn matching_rows(phi: &FractionalMatching) -> Vec<Vec<String>> {
    phi.weights()
        .iter()
        .map(|(e, w)| {
            let vs: Vec<String> = e.vertices().iter().map(|v| v.to_string()).collect();
            vec![vs.join(" "), format_rational(w)]
        })
        .collect()
}

fn emit_fractional(cli: &Cli, phi: &FractionalMatching, extra: Value) -> Result<Emit> {
    match cli.format {
        Format::Json => {
            let mut doc = phi.to_json();
            doc["weight"] = json!(format_rational(&phi.weight()));
            if let (Value::Object(target), Value::Object(more)) = (&mut doc, extra) {
                target.extend(more);
            }
            emit_json(&doc, OK)
        }
        Format::Csv => Ok(Emit { body: csv_table(&["edge", "weight"], matching_rows(phi))?, exit: OK }),
    }
}

fn matching(cli: &Cli, a: &MatchingArgs) -> Result<Emit> {
    let graph = read_graph(cli)?;
    let h = graph.base();
    let ids: Vec<usize> = match (&a.component, &graph) {
        (None, _) => (0..h.len()).collect(),
        (Some(text), Graph::Colored(g)) => {
            let id = component_arg(g, text)?;
            mono_components(g).edges(id).to_vec()
        }
        (Some(_), Graph::Plain(_)) => return Err(usage("--component needs a coloured graph")),
    };
    let phi = match a.method {
        MatchingMethod::Greedy => FractionalMatching::induced(&maximal_matching_greedy(h, Some(&ids), seed(cli))),
        MatchingMethod::Max => {
            let sub = h.edge_subgraph(ids.iter().copied());
            let budget = cli.budget_nodes.unwrap_or(tightram_core::tight::DEFAULT_NODE_BUDGET);
            FractionalMatching::induced(&maximum_matching(&sub, a.edge_cap, budget)?)
        }
        MatchingMethod::Lp => max_fractional_on(h, &ids, DEFAULT_LP_CAP)?,
    };
    emit_fractional(cli, &phi, json!({ "method": format!("{:?}", a.method).to_lowercase() }))
}

fn blowup(cli: &Cli, c: &BlowupCommand) -> Result<Emit> {
    let g = read_colored(cli)?;
    match c {
        BlowupCommand::Build { r } => {
            no_table(cli, "blowup build")?;
            let b = Blowup::build(&g, *r)?;
            let map: Vec<(ComponentId, ComponentId)> = project_component(&b)?.into_iter().collect();
            emit_json(&json!({ "r": r, "blown": b.blown(), "component_map": map }), OK)
        }
        BlowupCommand::Convert { r, matching, direction, rprime } => {
            let b = Blowup::build(&g, *r)?;
            let text = std::fs::read_to_string(matching).map_err(|e| CliError::Io(format!("{}: {e}", matching.display())))?;
            let value: Value = serde_json::from_str(&text).map_err(|e| Error::MalformedJson(e.to_string()))?;
            let phi = FractionalMatching::from_json(g.k(), &value)?;
            let out = match direction {
                Direction::Lift => blowup_matching_from_fractional(&b, &phi, *rprime)?,
                Direction::Project => fractional_from_blowup_matching(&b, &phi, *rprime)?,
            };
            let ratio = if phi.weight() == Rational::from_integer(0.into()) {
                None
            } else {
                Some(format_rational(&(out.weight() / phi.weight())))
            };
            emit_fractional(cli, &out, json!({ "r": r, "rprime": rprime, "weight_ratio": ratio }))
        }
    }
}

fn pipeline(cli: &Cli) -> Result<Emit> {
    let g = read_colored(cli)?;
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            PipelineConfig::parse(&text, g.k())?
        }
        None => PipelineConfig::defaults(g.k()),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    let result = run_pipeline(&g, &cfg)?;
    let violated = result.status == PipelineStatus::Inconclusive
        && result.archive.as_ref().is_some_and(|a| a.reason == InconclusiveReason::StructureViolation);
    let exit = if violated { VIOLATION } else { OK };
    let body = match cli.format {
        Format::Json => {
            let mut body = result.trace_jsonl();
            let mut summary = serde_json::to_value(&result).expect("results serialize");
            if let Value::Object(map) = &mut summary {
                map.remove("trace");
            }
            body.push_str(&json_line(&summary));
            body
        }
        Format::Csv => csv_table(
            &["L", "iteration", "outcome", "matching_size", "vertices"],
            result.trace.iter().map(|t| {
                vec![
                    t.level.to_string(),
                    t.iteration.to_string(),
                    t.outcome.clone(),
                    t.matching_size.to_string(),
                    t.vertices.to_string(),
                ]
            }),
        )?,
    };
    Ok(Emit { body, exit })
}

fn extremal(cli: &Cli, a: &ExtremalArgs) -> Result<Emit> {
    no_table(cli, "extremal-verify")?;
    let inst = extremal_coloring(a.k, a.n, a.i)?;
    let report = verify_extremal(&inst, search_options(cli))?;
    let exit = if report.mono_cycle.is_some() || !report.parity_rule_holds { 4 } else { OK };
    emit_json(&report, exit)
}

fn ramsey(cli: &Cli, a: &RamseyArgs) -> Result<Emit> {
    let shape = match a.shape {
        ShapeArg::Cycle => Shape::Cycle,
        ShapeArg::Path => Shape::Path,
    };
    let parallel = cli.workers.is_some_and(|w| w > 1);
    let opts = RamseyOptions {
        edge_cap: a.edge_cap,
        search: SearchOptions { parallel: false, ..search_options(cli) },
        parallel,
    };
    let result = ramsey_search(shape, a.k, a.m, a.n_max.unwrap_or(a.m + 3), opts)?;
    match cli.format {
        Format::Json => emit_json(&result, OK),
        Format::Csv => Ok(Emit {
            body: csv_table(
                &["vertices", "canonical_colorings", "avoiding_found"],
                result.levels.iter().map(|l| {
                    vec![l.vertices.to_string(), l.canonical_colorings.to_string(), l.avoiding_found.to_string()]
                }),
            )?,
            exit: OK,
        }),
    }
}

fn mu(cli: &Cli, a: &MuArgs) -> Result<Emit> {
    let beta = match &a.beta {
        Some(b) => rational(b)?,
        None => Rational::from_integer(1.into()) / int(factorial(a.k) as u128),
    };
    let mode = match a.mode {
        MuModeArg::Single => MuMode::Single,
        MuModeArg::RedBlue => MuMode::RedBlue,
    };
    let opts = MuOptions { edge_cap: a.edge_cap, parallel: cli.workers.is_some_and(|w| w > 1) };
    let result = mu_exact(a.k, a.n, &beta, mode, opts)?;
    match cli.format {
        Format::Json => emit_json(&result, OK),
        Format::Csv => Ok(Emit {
            body: csv_table(
                &["k", "n", "beta", "value", "normalized", "colorings"],
                [vec![
                    a.k.to_string(),
                    a.n.to_string(),
                    format_rational(&result.beta),
                    format_rational(&result.value),
                    format_rational(&result.normalized),
                    result.colorings.to_string(),
                ]],
            )?,
            exit: OK,
        }),
    }
}

fn density(cli: &Cli, a: &DensityArgs) -> Result<Emit> {
    let graph = read_graph(cli)?;
    let report = is_dense(graph.base(), &rational(&a.mu)?, &rational(&a.alpha)?);
    match cli.format {
        Format::Json => emit_json(&report, OK),
        Format::Csv => Ok(Emit {
            body: csv_table(
                &["level", "violators", "zeros", "degree_threshold", "zero_allowance"],
                report.per_level.iter().map(|l| {
                    vec![
                        l.level.to_string(),
                        l.violators.to_string(),
                        l.zeros.to_string(),
                        format_rational(&l.degree_threshold),
                        format_rational(&l.zero_allowance),
                    ]
                }),
            )?,
            exit: OK,
        }),
    }
}
