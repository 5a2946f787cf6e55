use std::io::{self, BufRead, Write};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use nonsep_core::apex::{apex_number, is_k_apex, ApexOptions};
use nonsep_core::budget::{Budget, ENV_BUDGET_NODES, ENV_BUDGET_SECONDS};
use nonsep_core::canon::{canonical_form, canonical_graph};
use nonsep_core::families::{
    all_graphs, enumerate_elongated_prisms, max_outerplanar_classes, maximal_nonseparating, prism_subdivisions,
    FamilySpec, NamedGraph, PrismSubdivision,
};
use nonsep_core::io::{parse_graph_line, to_graph6};
use nonsep_core::minors::{has_minor, hadwiger_number, MinorResult};
use nonsep_core::moves::{closure, ClosureConfig, MoveKind, YNablaPolicy};
use nonsep_core::mu::{check_klv, mu_bounds, MuOptions};
use nonsep_core::nonsep::{classify_nonseparating, is_maximal_nonseparating, NonsepClassification};
use nonsep_core::planarity::{is_outerplanar, is_planar};
use nonsep_core::topology::{certify_max_nik, ik_status, is_il, is_max_nil, IkOptions};
use nonsep_core::verify::{verify_paper, Suite, VerifyOptions};
use nonsep_core::Graph;

/// Tools for non-separating planar graphs and their complements.
#[derive(Parser)]
#[command(name = "nonsep", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Global {
    /// Node budget for each exhaustive search.
    #[arg(long, global = true, env = ENV_BUDGET_NODES)]
    budget_nodes: Option<u64>,
    /// Wall-clock budget in seconds for each exhaustive search.
    #[arg(long, global = true, env = ENV_BUDGET_SECONDS)]
    budget_seconds: Option<f64>,
    /// Lexicographically least certificates and no timings, for byte-identical output.
    #[arg(long, global = true)]
    deterministic: bool,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// One JSON document per result.
    #[arg(long, global = true)]
    json: bool,
    /// Skip the externally sourced μ rules (outerplanar and linear-forest characterisations).
    #[arg(long, global = true)]
    paper_rules_only: bool,
}

impl Global {
    fn budget(&self) -> Budget {
        let mut b = Budget::default();
        if let Some(n) = self.budget_nodes {
            b.max_nodes = Some(n);
        }
        if self.budget_seconds.is_some() {
            b.max_seconds = self.budget_seconds;
        }
        b
    }

    fn apex(&self) -> ApexOptions {
        ApexOptions {
            deterministic: self.deterministic,
            ..ApexOptions::default()
        }
    }

    fn ik(&self) -> IkOptions {
        IkOptions {
            budget: self.budget(),
            apex: self.apex(),
            ..IkOptions::default()
        }
    }

    fn mu(&self) -> MuOptions {
        MuOptions {
            paper_rules_only: self.paper_rules_only,
            budget: self.budget(),
            ..MuOptions::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print family instances as graph6, one per line.
    Gen {
        #[command(subcommand)]
        family: GenFamily,
    },
    /// Read graph6/sparse6 lines from standard input and check a property of each.
    Check {
        property: Property,
        /// Further steps applied to the result of a transform (complement, canon).
        #[arg(long = "then")]
        then: Vec<Property>,
        /// Minor target: a named graph (K5, K33, K6, K7, K331_1, Petersen) or graph6.
        #[arg(long)]
        target: Option<String>,
        /// Deletion-set size for `kapex`.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Closure of seed graphs under ∇Y and Y∇ moves, one class per line.
    Closure {
        /// Named graphs or graph6 strings; standard input when empty.
        seeds: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "ty,yt")]
        moves: Vec<MoveKind>,
        #[arg(long, default_value_t = 10)]
        max_order: usize,
        #[arg(long, value_enum, default_value_t = Policy::Merge)]
        policy: Policy,
        #[arg(long, default_value_t = 100_000)]
        max_graphs: usize,
    },
    /// Replay a theorem over its family instances and report each verdict.
    VerifyPaper {
        #[arg(value_parser = parse_suite)]
        suite: Suite,
        /// Order or order range, e.g. 9 or 7..11.
        #[arg(long, value_parser = parse_range)]
        n: Option<(usize, usize)>,
    },
    /// graph6/sparse6 lines to JSON objects.
    ToJson,
    /// JSON objects (as written by to-json) to graph6 lines.
    FromJson,
}

#[derive(Subcommand)]
enum GenFamily {
    Wheel { n: usize },
    /// Three subdivision counts, or a single order for every prism of that order.
    Eprism {
        #[arg(num_args = 1..=3, required = true)]
        sizes: Vec<usize>,
    },
    /// Every maximal outerplanar graph of order n, up to isomorphism.
    Maxouterplanar { n: usize },
    /// Every maximal non-separating planar graph of order n.
    Nonsep { n: usize },
    Complete { n: usize },
    Cycle { n: usize },
    Path { edges: usize },
    Empty { n: usize },
    Named { id: String },
    /// Every graph of order n, up to isomorphism (n ≤ 8).
    All { n: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Property {
    Planar,
    Outerplanar,
    Nonsep,
    Maxnonsep,
    Apex,
    Kapex,
    Minor,
    Hadwiger,
    Il,
    Ik,
    Maxnil,
    Maxnik,
    Mu,
    Klv,
    Complement,
    Canon,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Policy {
    Merge,
    Strict,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: nonsep_core::verify::UnknownSuite| e.to_string())
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let num = |x: &str| x.trim().parse::<usize>().map_err(|_| format!("not an order: {x:?}"));
    if let Some((a, b)) = s.split_once("..=").or_else(|| s.split_once("..")).or_else(|| s.split_once('-')) {
        Ok((num(a)?, num(b)?))
    } else {
        let n = num(s)?;
        Ok((n, n))
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    order: usize,
    edges: Vec<(usize, usize)>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let g = &cli.global;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match &cli.command {
        Command::Gen { family } => {
            for (spec, graph) in generate(family)? {
                if g.json {
                    writeln!(out, "{}", json!({ "spec": spec, "graph6": to_graph6(&graph) }))?;
                } else {
                    writeln!(out, "{}", to_graph6(&graph))?;
                }
            }
        }
        Command::Check {
            property,
            then,
            target,
            k,
        } => {
            let target = target.as_deref().map(parse_target).transpose()?;
            let steps: Vec<Property> = std::iter::once(*property).chain(then.iter().copied()).collect();
            for (i, line) in input_lines()?.into_iter().enumerate() {
                let graph = parse_graph_line(&line).with_context(|| format!("line {}", i + 1))?;
                let mut current = graph;
                for (s, step) in steps.iter().enumerate() {
                    let last = s + 1 == steps.len();
                    match step {
                        Property::Complement | Property::Canon if !last => {
                            current = transform(*step, &current)?;
                        }
                        Property::Complement | Property::Canon => {
                            let h = transform(*step, &current)?;
                            writeln!(out, "{}", to_graph6(&h))?;
                        }
                        _ if !last => bail!("only complement and canon can be followed by --then"),
                        _ => {
                            let (text, value) = check(*step, &current, target.as_ref(), *k, g)?;
                            if g.json {
                                writeln!(out, "{value}")?;
                            } else {
                                writeln!(out, "{text}")?;
                            }
                        }
                    }
                }
            }
        }
        Command::Closure {
            seeds,
            moves,
            max_order,
            policy,
            max_graphs,
        } => {
            let graphs: Vec<Graph> = if seeds.is_empty() {
                input_lines()?
                    .iter()
                    .map(|l| parse_graph_line(l).map_err(anyhow::Error::from))
                    .collect::<Result<_>>()?
            } else {
                seeds.iter().map(|s| parse_target(s)).collect::<Result<_>>()?
            };
            let policy = match policy {
                Policy::Merge => YNablaPolicy::Merge,
                Policy::Strict => YNablaPolicy::Strict,
            };
            let config = ClosureConfig::new(moves, *max_order)
                .with_policy(policy)
                .with_max_graphs(*max_graphs);
            let members = closure(&graphs, &config)?;
            for m in members {
                if g.json {
                    writeln!(out, "{}", serde_json::to_string(&m)?)?;
                } else {
                    writeln!(out, "{}", to_graph6(&m.graph))?;
                }
            }
        }
        Command::VerifyPaper { suite, n } => {
            let opts = VerifyOptions {
                orders: *n,
                budget: g.budget(),
                deterministic: g.deterministic,
                seed: g.seed,
                paper_rules_only: g.paper_rules_only,
            };
            let report = verify_paper(*suite, &opts)?;
            if g.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            } else {
                write!(out, "{}", report.to_text())?;
            }
            if !report.passed() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::ToJson => {
            for (i, line) in input_lines()?.into_iter().enumerate() {
                let graph = parse_graph_line(&line).with_context(|| format!("line {}", i + 1))?;
                let j = GraphJson {
                    order: graph.order(),
                    edges: graph.edges().collect(),
                };
                writeln!(out, "{}", serde_json::to_string(&j)?)?;
            }
        }
        Command::FromJson => {
            for (i, line) in input_lines()?.into_iter().enumerate() {
                let j: GraphJson = serde_json::from_str(&line).with_context(|| format!("line {}", i + 1))?;
                let graph = Graph::from_edges(j.order, &j.edges).with_context(|| format!("line {}", i + 1))?;
                writeln!(out, "{}", to_graph6(&graph))?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn input_lines() -> Result<Vec<String>> {
    let stdin = io::stdin();
    let mut lines = Vec::new();
    for line in stdin.lock().lines() {
        let line = line?;
        if !line.trim().is_empty() {
            lines.push(line.trim().to_string());
        }
    }
    Ok(lines)
}

fn parse_target(s: &str) -> Result<Graph> {
    match s.parse::<NamedGraph>() {
        Ok(id) => Ok(id.graph()),
        Err(_) => parse_graph_line(s).map_err(|e| anyhow!("{s:?} is neither a named graph nor graph6: {e}")),
    }
}

type Generated = Vec<(Option<FamilySpec>, Graph)>;

fn generate(family: &GenFamily) -> Result<Generated> {
    let one = |spec: FamilySpec| -> Result<Generated> {
        let g = spec.build()?;
        Ok(vec![(Some(spec), g)])
    };
    match family {
        GenFamily::Wheel { n } => one(FamilySpec::Wheel { order: *n }),
        GenFamily::Eprism { sizes } => match sizes.as_slice() {
            [n] => Ok(prism_subdivisions(*n)
                .into_iter()
                .zip(enumerate_elongated_prisms(*n))
                .map(|(s, g)| (Some(FamilySpec::ElongatedPrism { subdivision: s }), g))
                .collect()),
            [a, b, c] => {
                let s = PrismSubdivision::new(*a, *b, *c);
                one(FamilySpec::ElongatedPrism { subdivision: s })
            }
            _ => bail!("eprism takes an order or three subdivision counts"),
        },
        GenFamily::Maxouterplanar { n } => max_outerplanar_classes(*n)?
            .into_iter()
            .map(|(_, chords)| {
                let spec = FamilySpec::MaxOuterplanar { order: *n, chords };
                let g = spec.build()?;
                Ok((Some(spec), g))
            })
            .collect(),
        GenFamily::Nonsep { n } => maximal_nonseparating(*n)?
            .into_iter()
            .map(|spec| {
                let g = spec.build()?;
                Ok((Some(spec), g))
            })
            .collect(),
        GenFamily::Complete { n } => one(FamilySpec::Complete { order: *n }),
        GenFamily::Cycle { n } => one(FamilySpec::Cycle { order: *n }),
        GenFamily::Path { edges } => one(FamilySpec::Path { edges: *edges }),
        GenFamily::Empty { n } => one(FamilySpec::Empty { order: *n }),
        GenFamily::Named { id } => one(FamilySpec::Named { id: id.parse()? }),
        GenFamily::All { n } => Ok(all_graphs(*n)?.into_iter().map(|g| (None, g)).collect()),
    }
}

fn transform(p: Property, g: &Graph) -> Result<Graph> {
    Ok(match p {
        Property::Complement => g.complement(),
        Property::Canon => canonical_graph(g)?,
        _ => unreachable!("only transforms reach here"),
    })
}

fn check(p: Property, g: &Graph, target: Option<&Graph>, k: Option<usize>, opts: &Global) -> Result<(String, Value)> {
    Ok(match p {
        Property::Planar => {
            let r = is_planar(g);
            let text = if r.is_planar() { "planar" } else { "nonplanar" };
            (text.to_string(), v(&r))
        }
        Property::Outerplanar => {
            let r = is_outerplanar(g);
            let text = if r.is_outerplanar() { "outerplanar" } else { "not outerplanar" };
            (text.to_string(), v(&r))
        }
        Property::Nonsep => {
            let r = classify_nonseparating(g);
            (r.name().to_string(), v(&r))
        }
        Property::Maxnonsep => {
            let r = is_maximal_nonseparating(g);
            let text = match (&r.classification, r.maximal) {
                (NonsepClassification::NotNonseparating, _) => "not non-separating".to_string(),
                (c, true) => format!("maximal {}", c.name()),
                (c, false) => format!("not maximal {}", c.name()),
            };
            (text, v(&r))
        }
        Property::Apex => {
            let r = apex_number(g, &opts.apex())?;
            (format!("apex number {} (delete {:?})", r.k(), r.deleted), v(&r))
        }
        Property::Kapex => {
            let k = k.context("kapex needs --k")?;
            match is_k_apex(g, k, &opts.apex())? {
                Some(c) => (format!("{k}-apex (delete {:?})", c.deleted), v(&c)),
                None => (format!("not {k}-apex"), json!({ "k": k, "apex": false })),
            }
        }
        Property::Minor => {
            let h = target.context("minor needs --target")?;
            let r = has_minor(g, h, &opts.budget());
            let text = match &r {
                MinorResult::Found { certificate } => format!("minor found: branch sets {:?}", certificate.branch_sets),
                MinorResult::NotFound => "no minor".to_string(),
                MinorResult::Inconclusive { reason } => format!("inconclusive: {reason}"),
            };
            (text, v(&r))
        }
        Property::Hadwiger => {
            let r = hadwiger_number(g, &opts.budget());
            let text = format!("hadwiger number {}{}", r.value, if r.exact { "" } else { " (lower bound)" });
            (text, v(&r))
        }
        Property::Il => {
            let r = is_il(g, &opts.budget())?;
            let text = match &r.witness {
                Some(hit) => format!("intrinsically linked ({} minor)", hit.entry),
                None => "linklessly embeddable".to_string(),
            };
            (text, v(&r))
        }
        Property::Ik => {
            let r = ik_status(g, &opts.ik())?;
            let text = format!("{:?}", r.status).to_lowercase();
            (text, v(&r))
        }
        Property::Maxnil => {
            let r = is_max_nil(g, &opts.budget())?;
            let text = if r.maximal { "maximal nIL" } else { "not maximal nIL" };
            (text.to_string(), v(&r))
        }
        Property::Maxnik => {
            let r = certify_max_nik(g, &opts.ik())?;
            (format!("{:?}", r.verdict).to_lowercase(), v(&r))
        }
        Property::Mu => {
            let r = mu_bounds(g, &opts.mu())?;
            let rules: Vec<&str> = r.trace.iter().map(|s| s.rule.id()).collect();
            let text = format!("mu in [{}, {}] via {}", r.lo, r.hi, rules.join(", "));
            (text, v(&r))
        }
        Property::Klv => {
            let r = check_klv(g, &opts.mu())?;
            let text = format!(
                "{:?}: mu(g) in [{}, {}], mu(cg) in [{}, {}], n - 2 = {}",
                r.verdict,
                r.graph.lo,
                r.graph.hi,
                r.complement.lo,
                r.complement.hi,
                r.order.saturating_sub(2)
            )
            .to_lowercase();
            (text, v(&r))
        }
        Property::Complement | Property::Canon => {
            let h = transform(p, g)?;
            (to_graph6(&h), json!({ "graph6": to_graph6(&h), "canonical": canonical_form(&h)?.as_str() }))
        }
    })
}

fn v<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("results serialize")
}
