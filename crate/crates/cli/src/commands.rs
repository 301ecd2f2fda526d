use crate::{Failure, Output};
use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use superalg::acceptance::run_all;
use superalg::artin::{semilocal_lengths, super_length, AlgebraWire, FiniteSuperAlgebra, GradedModule, ModuleWire};
use superalg::cohomology::{
    affine_super_poincare, frolicher_report, hodge::render_table, hodge_table, koszul_acyclicity, HodgeInput,
    HodgeRecord, LineBundle,
};
use superalg::curve::{divisor_degree, FunctionWire, ModelWire, Point, SuperCurveModel};
use superalg::cycles::{
    divisor_cycle, flat_pullback, pushforward, verify_rational_equivalence, Embedding, EmbeddingWire, FlatPullbackData,
    MapWire, ProperMapData, PullbackWire, SuperCycle, Witness,
};
use superalg::graded_linalg::{berezinian, SuperMatrix, SuperMatrixWire, DEFAULT_GENERATOR_CAP};
use superalg::moduli::{
    arithmetic_genus, beta_good_filter, fiber_class, is_prestable, is_stable, is_stable_supermap, stability_violations,
    susy_degree_check, DualGraph, FamilyWire, SuperMapFiberData,
};
use superalg::nori::{
    category_diagram, check_graph, effective_pairs_diagram, end_algebra, DiagramRep, EmbeddingPoset, FiniteCategory,
    NoriGraph, RepWire,
};
use superalg::par::{self, Execution};
use superalg::rational::num_string;

/// Overrides the cap on Grassmann generators accepted in input files.
pub const GENERATOR_CAP_VAR: &str = "SUPERALG_GENERATOR_CAP";

#[derive(Parser, Debug)]
#[command(name = "superalg", version, about = "Exact computations in algebraic supergeometry")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Berezinian of one or more supermatrix files (several files run as a batch).
    Ber {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        sequential: bool,
    },
    /// Super length of a module over a local Artin superalgebra.
    Length {
        #[arg(long)]
        algebra: PathBuf,
        /// Defaults to the regular module.
        #[arg(long)]
        module: Option<PathBuf>,
        /// Report lengths at every local factor instead.
        #[arg(long)]
        semilocal: bool,
    },
    /// Order of an even rational function at a point of a curve model.
    Order {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        function: PathBuf,
        /// `inf`, an integer `a` for `t = a`, or a JSON coefficient list.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Divisor of an even rational function on a curve model.
    Div {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        function: PathBuf,
    },
    /// Proper push-forward of a supercycle.
    Pushforward {
        #[arg(long)]
        cycle: PathBuf,
        #[arg(long)]
        map: PathBuf,
    },
    /// Flat pull-back of a supercycle.
    Pullback {
        #[arg(long)]
        cycle: PathBuf,
        #[arg(long)]
        data: PathBuf,
    },
    /// Checks a rational-equivalence witness list against a cycle.
    Rateq {
        #[arg(long)]
        cycle: PathBuf,
        #[arg(long)]
        witnesses: PathBuf,
    },
    /// Hodge table of the split supercurve `(C, L)`.
    Hodge {
        #[command(flatten)]
        input: HodgeArgs,
        /// Print the aligned text table instead of the JSON record.
        #[arg(long)]
        text: bool,
    },
    /// Frölicher comparison of Betti numbers with even Hodge sums.
    Frolicher {
        #[command(flatten)]
        input: HodgeArgs,
    },
    /// Koszul acyclicity, or with `--cutoff` the truncated super Poincaré lemma.
    Koszul {
        /// Number of odd variables.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        wmax: usize,
        /// Number of even variables (Poincaré mode).
        #[arg(long, default_value_t = 0)]
        m: usize,
        #[arg(long)]
        cutoff: Option<usize>,
        #[arg(long)]
        sequential: bool,
    },
    /// Genus, prestability and stability of a dual graph.
    Stability {
        #[arg(long)]
        graph: PathBuf,
    },
    /// SUSY degree condition `2 deg L_i = 2g_i - 2 + branches + RR markings`.
    Susy {
        #[arg(long)]
        graph: PathBuf,
        /// JSON object from component name to deg L on it.
        #[arg(long)]
        degrees: PathBuf,
    },
    /// Stable-supermap conditions for `{beta, fibers}`.
    Stablemap {
        #[arg(long)]
        input: PathBuf,
    },
    /// Labels of a family `{beta, family: [{label, fibers}]}` that are stable supermaps of class beta.
    Betagood {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        sequential: bool,
    },
    /// Builds or checks a Nori graph.
    NoriBuild {
        #[command(flatten)]
        source: NoriSource,
        #[arg(long, default_value_t = 0)]
        imax: usize,
    },
    /// Endomorphism algebra of a representation of a Nori graph.
    NoriEnd {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        rep: PathBuf,
    },
    /// Runs the acceptance suite.
    Selftest {
        #[arg(long, default_value_t = 20_241_017)]
        seed: u64,
        #[arg(long)]
        sequential: bool,
        /// Emit the JSON record instead of the table.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
pub struct HodgeArgs {
    /// A `HodgeInput` JSON file; overrides the flags below.
    #[arg(long, conflicts_with_all = ["genus", "bundle"])]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub genus: Option<u32>,
    /// `trivial`, `canonical`, `generic:DEG` or `explicit:DEG:H0`.
    #[arg(long)]
    pub bundle: Option<String>,
    #[arg(long)]
    pub l_squared: Option<String>,
    #[arg(long)]
    pub l_omega: Option<String>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct NoriSource {
    /// Finite category `{objects, morphisms, identities, composition}`.
    #[arg(long)]
    pub category: Option<PathBuf>,
    /// Embedding poset `{elements, relations, good}`.
    #[arg(long)]
    pub poset: Option<PathBuf>,
    /// Existing graph `{flags, vertices, boundary, involution}` to check.
    #[arg(long)]
    pub check: Option<PathBuf>,
}

fn exec(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn generator_cap() -> Result<usize, Failure> {
    match std::env::var(GENERATOR_CAP_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Malformed(format!("{GENERATOR_CAP_VAR}={v} is not a nonnegative integer"))),
        Err(_) => Ok(DEFAULT_GENERATOR_CAP),
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Malformed(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("records serialize")
}

fn parse_bundle(s: &str) -> Result<LineBundle, Failure> {
    let parts: Vec<&str> = s.split(':').collect();
    let int = |x: &str| {
        x.trim()
            .parse::<i64>()
            .map_err(|_| Failure::Malformed(format!("bad integer {x:?} in bundle {s:?}")))
    };
    match parts.as_slice() {
        ["trivial"] => Ok(LineBundle::Trivial),
        ["canonical"] => Ok(LineBundle::Canonical),
        ["generic", d] => Ok(LineBundle::Generic { degree: int(d)? }),
        ["explicit", d, h] => Ok(LineBundle::Explicit {
            degree: int(d)?,
            h0: int(h)?,
        }),
        _ => Err(Failure::Malformed(format!(
            "bundle {s:?}: expected trivial, canonical, generic:DEG or explicit:DEG:H0"
        ))),
    }
}

fn hodge_input(a: &HodgeArgs) -> Result<HodgeInput, Failure> {
    if let Some(p) = &a.input {
        return read_json(p);
    }
    let genus = a
        .genus
        .ok_or_else(|| Failure::Malformed("--genus is required without --input".into()))?;
    let bundle = a.bundle.as_deref().unwrap_or("trivial");
    let mut input = HodgeInput::new(genus, parse_bundle(bundle)?);
    input.l_squared = a.l_squared.as_deref().map(parse_bundle).transpose()?;
    input.l_omega = a.l_omega.as_deref().map(parse_bundle).transpose()?;
    Ok(input)
}

fn parse_point(s: &str) -> Result<Point, Failure> {
    let t = s.trim();
    if t == "inf" {
        return Ok(Point::Infinity);
    }
    if let Ok(a) = t.parse::<i64>() {
        return Ok(Point::rational(a));
    }
    let v: Value = serde_json::from_str(t).map_err(|e| Failure::Malformed(format!("point {s:?}: {e}")))?;
    Point::from_json(&v).map_err(Failure::domain)
}

fn model_and_function(
    model: &Path,
    function: &Path,
) -> Result<(SuperCurveModel, superalg::poly::RationalFunction), Failure> {
    let m = SuperCurveModel::from_wire(&read_json::<ModelWire>(model)?).map_err(Failure::domain)?;
    let g = read_json::<FunctionWire>(function)?.parse().map_err(Failure::domain)?;
    Ok((m, g))
}

#[derive(Deserialize)]
struct WitnessWire {
    embedding: EmbeddingWire,
    model: ModelWire,
    function: FunctionWire,
}

#[derive(Deserialize)]
struct Int(#[serde(with = "num_string")] i64);

#[derive(Deserialize)]
struct StableMapInput {
    beta: SuperCycle,
    fibers: Vec<SuperMapFiberData>,
}

pub fn run(cli: Cli) -> Result<Output, Failure> {
    match cli.command {
        Command::Ber { files, sequential } => {
            let cap = generator_cap()?;
            let mats = files
                .iter()
                .map(|f| read_json::<SuperMatrixWire>(f))
                .collect::<Result<Vec<_>, _>>()?;
            let results = par::map(&mats, exec(sequential), |w| {
                SuperMatrix::from_wire(w, cap)
                    .and_then(|m| berezinian(&m))
                    .map(|b| b.to_wire())
                    .map_err(|e| e.to_string())
            });
            if let [single] = results.as_slice() {
                return single
                    .as_ref()
                    .map(|b| Output::Record(json!({ "berezinian": b })))
                    .map_err(|e| Failure::Domain(e.clone()));
            }
            let mut diagnostics = Vec::new();
            let entries: Vec<Value> = files
                .iter()
                .zip(&results)
                .map(|(f, r)| match r {
                    Ok(b) => json!({ "file": f.display().to_string(), "berezinian": b }),
                    Err(e) => {
                        diagnostics.push(format!("{}: {e}", f.display()));
                        json!({ "file": f.display().to_string(), "error": e })
                    }
                })
                .collect();
            let payload = json!({ "results": entries });
            Ok(if diagnostics.is_empty() {
                Output::Record(payload)
            } else {
                Output::Failed(payload, diagnostics)
            })
        }
        Command::Length {
            algebra,
            module,
            semilocal,
        } => {
            let a = FiniteSuperAlgebra::from_wire(&read_json::<AlgebraWire>(&algebra)?).map_err(Failure::domain)?;
            let m = match module {
                Some(p) => GradedModule::from_wire(&a, &read_json::<ModuleWire>(&p)?).map_err(Failure::domain)?,
                None => GradedModule::regular(&a),
            };
            let (e, o) = m.superdim();
            if semilocal {
                let ls = semilocal_lengths(&a, &m).map_err(Failure::domain)?;
                Ok(Output::Record(json!({ "superdim": [e, o], "lengths": ls })))
            } else {
                let l = super_length(&a, &m).map_err(Failure::domain)?;
                Ok(Output::Record(json!({ "superdim": [e, o], "length": l })))
            }
        }
        Command::Order { model, function, point } => {
            let (m, g) = model_and_function(&model, &function)?;
            let p = parse_point(&point)?;
            let ord = m.ord_at(&p, &g).map_err(Failure::domain)?;
            Ok(Output::Record(json!({ "point": p.to_json(), "order": ord })))
        }
        Command::Div { model, function } => {
            let (m, g) = model_and_function(&model, &function)?;
            let d = m.div_model(&g).map_err(Failure::domain)?;
            let terms: Vec<Value> = d.iter().map(|(p, z)| json!([p.to_json(), z])).collect();
            Ok(Output::Record(
                json!({ "divisor": terms, "degree": divisor_degree(&d) }),
            ))
        }
        Command::Pushforward { cycle, map } => {
            let c: SuperCycle = read_json(&cycle)?;
            let f = ProperMapData::from_wire(&read_json::<MapWire>(&map)?).map_err(Failure::domain)?;
            Ok(Output::Record(to_value(&pushforward(&c, &f).map_err(Failure::domain)?)))
        }
        Command::Pullback { cycle, data } => {
            let c: SuperCycle = read_json(&cycle)?;
            let d = FlatPullbackData::from_wire(&read_json::<PullbackWire>(&data)?).map_err(Failure::domain)?;
            Ok(Output::Record(to_value(
                &flat_pullback(&c, &d).map_err(Failure::domain)?,
            )))
        }
        Command::Rateq { cycle, witnesses } => {
            let c: SuperCycle = read_json(&cycle)?;
            let ws = read_json::<Vec<WitnessWire>>(&witnesses)?
                .into_iter()
                .map(|w| {
                    Ok(Witness {
                        embedding: Embedding::from_wire(&w.embedding).map_err(Failure::domain)?,
                        model: SuperCurveModel::from_wire(&w.model).map_err(Failure::domain)?,
                        g: w.function.parse().map_err(Failure::domain)?,
                    })
                })
                .collect::<Result<Vec<_>, Failure>>()?;
            let equivalent = verify_rational_equivalence(&c, &ws).map_err(Failure::domain)?;
            let mut sum = SuperCycle::zero(c.dim);
            for w in &ws {
                let d = divisor_cycle(&w.embedding, &w.model, &w.g).map_err(Failure::domain)?;
                sum = sum.add(&d).map_err(Failure::domain)?;
            }
            Ok(Output::Record(json!({ "equivalent": equivalent, "witness_sum": sum })))
        }
        Command::Hodge { input, text } => {
            let t = hodge_table(&hodge_input(&input)?).map_err(Failure::domain)?;
            Ok(if text {
                Output::Text(render_table(&t))
            } else {
                Output::Record(to_value(&HodgeRecord::new(&t)))
            })
        }
        Command::Frolicher { input } => {
            let t = hodge_table(&hodge_input(&input)?).map_err(Failure::domain)?;
            Ok(Output::Record(to_value(&frolicher_report(&t))))
        }
        Command::Koszul {
            n,
            wmax,
            m,
            cutoff,
            sequential,
        } => {
            let e = exec(sequential);
            Ok(Output::Record(match cutoff {
                Some(c) => to_value(&affine_super_poincare(m, n, c, e).map_err(Failure::domain)?),
                None => to_value(&koszul_acyclicity(n, wmax, e).map_err(Failure::domain)?),
            }))
        }
        Command::Stability { graph } => {
            let g: DualGraph = read_json(&graph)?;
            let prestable = is_prestable(&g).map_err(Failure::domain)?;
            if !prestable {
                let why = g.validate().err().map(|e| e.to_string()).unwrap_or_default();
                return Ok(Output::Record(
                    json!({ "prestable": false, "stable": false, "violations": [why] }),
                ));
            }
            Ok(Output::Record(json!({
                "arithmetic_genus": arithmetic_genus(&g).map_err(Failure::domain)?,
                "prestable": true,
                "stable": is_stable(&g).map_err(Failure::domain)?,
                "violations": stability_violations(&g).map_err(Failure::domain)?,
            })))
        }
        Command::Susy { graph, degrees } => {
            let g: DualGraph = read_json(&graph)?;
            let deg: BTreeMap<String, i64> = read_json::<BTreeMap<String, Int>>(&degrees)?
                .into_iter()
                .map(|(k, v)| (k, v.0))
                .collect();
            let holds = susy_degree_check(&g, &deg).map_err(Failure::domain)?;
            let components: Vec<Value> = g
                .components
                .iter()
                .map(|(name, k)| {
                    let rhs = 2 * k.0 as i64 - 2 + g.node_branches(name) as i64 + g.rr_count(name) as i64;
                    json!({ "component": name, "lhs": 2 * deg[name], "rhs": rhs })
                })
                .collect();
            Ok(Output::Record(json!({ "holds": holds, "components": components })))
        }
        Command::Stablemap { input } => {
            let s: StableMapInput = read_json(&input)?;
            let classes = s
                .fibers
                .iter()
                .map(fiber_class)
                .collect::<Result<Vec<_>, _>>()
                .map_err(Failure::domain)?;
            let stable = is_stable_supermap(&s.fibers, &s.beta).map_err(Failure::domain)?;
            Ok(Output::Record(json!({ "stable": stable, "fiber_classes": classes })))
        }
        Command::Betagood { input, sequential } => {
            let fam: FamilyWire = read_json(&input)?;
            let members: Vec<(String, Vec<SuperMapFiberData>)> =
                fam.family.into_iter().map(|m| (m.label, m.fibers)).collect();
            let labels = beta_good_filter(&members, &fam.beta, exec(sequential));
            Ok(Output::Record(json!({ "labels": labels })))
        }
        Command::NoriBuild { source, imax } => {
            let graph = if let Some(p) = source.category {
                category_diagram(&read_json::<FiniteCategory>(&p)?).map_err(Failure::domain)?
            } else if let Some(p) = source.poset {
                effective_pairs_diagram(&read_json::<EmbeddingPoset>(&p)?, imax).map_err(Failure::domain)?
            } else {
                let p = source.check.expect("clap requires one source");
                let g: NoriGraph = read_json(&p)?;
                let verdict = check_graph(&g);
                let payload = to_value(&verdict);
                return Ok(if verdict.valid {
                    Output::Record(payload)
                } else {
                    Output::Failed(payload, verdict.violations)
                });
            };
            let verdict = check_graph(&graph);
            let edges = graph.edges().map_err(Failure::domain)?;
            Ok(Output::Record(
                json!({ "graph": graph, "edges": edges, "verdict": verdict }),
            ))
        }
        Command::NoriEnd { graph, rep } => {
            let g: NoriGraph = read_json(&graph)?;
            let r = DiagramRep::from_wire(&read_json::<RepWire>(&rep)?).map_err(Failure::domain)?;
            let alg = end_algebra(&g, &r).map_err(Failure::domain)?;
            Ok(Output::Record(to_value(&alg.to_wire())))
        }
        Command::Selftest { seed, sequential, json } => {
            let reports = run_all(seed, exec(sequential));
            let failed: Vec<String> = reports.iter().filter(|r| !r.passed).map(|r| r.to_string()).collect();
            if json {
                let payload = json!({ "seed": seed, "criteria": reports });
                return Ok(if failed.is_empty() {
                    Output::Record(payload)
                } else {
                    Output::Failed(payload, failed)
                });
            }
            let table: String = reports.iter().map(|r| format!("{r}\n")).collect();
            if failed.is_empty() {
                Ok(Output::Text(table))
            } else {
                print!("{table}");
                Err(Failure::Domain(format!("{} criteria failed", failed.len())))
            }
        }
    }
}
