//! `arr`: command-line frontend for the hyperarr toolkit.

mod selftest;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hyperarr::cells::{adjacency_graph, bounded_chambers, chambers, faces, sphere_is_trivial};
use hyperarr::cw_posets::{df_poset, salvetti_poset};
use hyperarr::flag::{flag_partition, generic_flag};
use hyperarr::gallery::ChamberGraph;
use hyperarr::local_system::{twisted_complex, LocalSystem};
use hyperarr::os_algebra::{os_algebra, os_degree};
use hyperarr::pi1::{abelianization, minimal_presentation, randell_falk_presentation, ConjugationStyle};
use hyperarr::poset::{
    betti_from_char_poly, char_poly, char_poly_delres, char_poly_whitney, chromatic_poly,
    count_points_mod_q,
};
use hyperarr::{Arrangement, CoefficientField, Error, SignVector, SimpleGraph};

#[derive(Parser, Debug)]
#[command(name = "arr", version, about = "Exact computations for real hyperplane arrangements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Input file (`.arr` arrangement or `.graph` graph).
    input: PathBuf,
    /// Input format; defaults to `graph` for `.graph` files and `arr` otherwise.
    #[arg(long, value_enum)]
    format: Option<InputFormat>,
    /// Emit JSON.
    #[arg(long)]
    json: bool,
    /// Write output to a file instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum InputFormat {
    Arr,
    Graph,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ChiMethod {
    Mobius,
    Whitney,
    Delres,
    Chromatic,
    All,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Pi1Style {
    Minimal,
    RandellFalk,
    RandellFalkFull,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Characteristic polynomial.
    Chi {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "mobius")]
        method: ChiMethod,
    },
    /// Chambers with sign vectors and witness points.
    Chambers {
        #[command(flatten)]
        common: Common,
        /// Print only the number of chambers.
        #[arg(long)]
        count: bool,
        /// Only chambers with compact closure.
        #[arg(long)]
        bounded: bool,
    },
    /// All faces and the f-vector.
    Faces {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        count: bool,
    },
    /// Chamber adjacency graph.
    Graph {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        dot: bool,
    },
    /// A certified generic flag and the chamber partition it induces.
    Flag {
        #[command(flatten)]
        common: Common,
    },
    /// Betti numbers of the complement.
    Betti {
        #[command(flatten)]
        common: Common,
    },
    /// Orlik–Solomon algebra: dimensions and bases.
    Os {
        #[command(flatten)]
        common: Common,
        /// Only this degree.
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Salvetti poset.
    Salvetti {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        dot: bool,
    },
    /// Delucchi–Falk poset.
    Df {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        dot: bool,
    },
    /// Presentation of the fundamental group of the complement.
    Pi1 {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "minimal")]
        style: Pi1Style,
        /// Eliminate upper edges literally instead of using `Y_m = X_m`.
        #[arg(long)]
        literal: bool,
        /// Emit GAP input.
        #[arg(long)]
        gap: bool,
    },
    /// Flip classes of positive galleries.
    Galplus {
        #[command(flatten)]
        common: Common,
        /// Start chamber as a sign vector.
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        /// End chamber as a sign vector.
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        /// Path length; defaults to the distance between the chambers.
        #[arg(long)]
        length: Option<usize>,
    },
    /// Twisted cohomology of a rank-one local system.
    Cohomology {
        #[command(flatten)]
        common: Common,
        /// Monodromy values, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        rho: String,
        /// `Q`, `Fp:<p>` or `cyclo:<m>`.
        #[arg(long, default_value = "Q")]
        field: String,
    },
    /// Points of the complement over F_q.
    CountFq {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        q: u64,
    },
    /// Triviality of the sphere attached to a sign vector.
    Sphere {
        #[command(flatten)]
        common: Common,
        /// Sign vector over the hyperplanes, e.g. `++-`
        #[arg(long, allow_hyphen_values = true)]
        eps: String,
    },
    /// Golden and property checks.
    Selftest {
        /// Directory holding the example data files.
        #[arg(long)]
        data: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    std::panic::set_hook(Box::new(|info| {
        eprintln!("internal error: {info}");
    }));
    let outcome = std::panic::catch_unwind(|| run(cli.command));
    match outcome {
        Ok(Ok(code)) => code,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(_) => ExitCode::from(3),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Validation(_) | Error::Parse { .. } | Error::Unsupported(_) => 1,
        Error::Resource(_) => 2,
        Error::Internal(_) => 3,
    }
}

enum Input {
    Arrangement(Arrangement),
    Graph(SimpleGraph, Arrangement),
}

impl Input {
    fn arrangement(&self) -> &Arrangement {
        match self {
            Input::Arrangement(a) | Input::Graph(_, a) => a,
        }
    }
}

fn load(common: &Common) -> hyperarr::Result<Input> {
    let path = &common.input;
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Validation(format!("cannot read {}: {e}", path.display())))?;
    let name = path.display().to_string();
    let format = common.format.unwrap_or_else(|| {
        if path.extension().is_some_and(|x| x == "graph") {
            InputFormat::Graph
        } else {
            InputFormat::Arr
        }
    });
    Ok(match format {
        InputFormat::Arr => Input::Arrangement(Arrangement::parse_named(&text, &name)?),
        InputFormat::Graph => {
            let g = SimpleGraph::parse_named(&text, &name)?;
            let a = Arrangement::graphical(&g)?;
            Input::Graph(g, a)
        }
    })
}

fn emit(common: &Common, text: String, value: Value) -> hyperarr::Result<ExitCode> {
    let body = if common.json {
        serde_json::to_string_pretty(&value).expect("JSON values serialize") + "\n"
    } else {
        text
    };
    write_out(common.output.as_deref(), &body)?;
    Ok(ExitCode::SUCCESS)
}

fn write_out(path: Option<&Path>, body: &str) -> hyperarr::Result<()> {
    match path {
        Some(p) => fs::write(p, body)
            .map_err(|e| Error::Validation(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Error::Internal(format!("cannot write output: {e}")))
        }
    }
}

fn bigs(v: &[num_bigint::BigInt]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn run(command: Command) -> hyperarr::Result<ExitCode> {
    match command {
        Command::Chi { common, method } => {
            let input = load(&common)?;
            let a = input.arrangement();
            let chi = match method {
                ChiMethod::Mobius => char_poly(a),
                ChiMethod::Whitney => char_poly_whitney(a)?,
                ChiMethod::Delres => char_poly_delres(a),
                ChiMethod::Chromatic => match &input {
                    Input::Graph(g, _) => chromatic_poly(g),
                    Input::Arrangement(_) => {
                        return Err(Error::Validation("--method chromatic needs graph input".into()))
                    }
                },
                ChiMethod::All => {
                    let m = char_poly(a);
                    let mut others = vec![char_poly_whitney(a)?, char_poly_delres(a)];
                    if let Input::Graph(g, _) = &input {
                        others.push(chromatic_poly(g));
                    }
                    if others.iter().any(|p| *p != m) {
                        return Err(Error::Internal("characteristic polynomial methods disagree".into()));
                    }
                    m
                }
            };
            emit(&common, format!("{chi}\n"), json!({ "chi": chi, "text": chi.to_string() }))
        }
        Command::Chambers { common, count, bounded } => {
            let a = load(&common)?.arrangement().clone();
            let ch = if bounded { bounded_chambers(&a)? } else { chambers(&a)? };
            if count {
                return emit(&common, format!("{}\n", ch.len()), json!({ "count": ch.len() }));
            }
            let text: String = ch
                .iter()
                .map(|c| {
                    let w: Vec<String> = c.witness.iter().map(hyperarr::linalg::format_rat).collect();
                    format!("{} ({})\n", c.sign, w.join(", "))
                })
                .collect();
            let value = json!({
                "count": ch.len(),
                "chambers": ch.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            });
            emit(&common, text, value)
        }
        Command::Faces { common, count } => {
            let a = load(&common)?.arrangement().clone();
            let fp = faces(&a)?;
            let f = fp.f_vector();
            let fv: Vec<String> = f.iter().map(ToString::to_string).collect();
            if count {
                return emit(&common, format!("{}\n", fv.join(" ")), json!({ "f_vector": f }));
            }
            let mut text = format!("f-vector: {}\n", fv.join(" "));
            for c in &fp.cells {
                text.push_str(&format!("{} dim {}\n", c.sign, c.dim));
            }
            let value = json!({
                "f_vector": f,
                "faces": fp.cells.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            });
            emit(&common, text, value)
        }
        Command::Graph { common, dot } => {
            let a = load(&common)?.arrangement().clone();
            let g = adjacency_graph(&a)?;
            let text = if dot {
                g.to_dot()
            } else {
                let mut s = format!("{} chambers, {} edges\n", g.chambers.len(), g.edges.len());
                for (i, j) in &g.edges {
                    s.push_str(&format!("{} -- {}\n", g.chambers[*i].sign, g.chambers[*j].sign));
                }
                s
            };
            let value = json!({
                "chambers": g.chambers.iter().map(|c| c.sign.to_string()).collect::<Vec<_>>(),
                "edges": g.edges.iter().map(|&(i, j)| [i, j]).collect::<Vec<_>>(),
                "connected": g.is_connected(),
            });
            emit(&common, text, value)
        }
        Command::Flag { common } => {
            let a = load(&common)?.arrangement().clone();
            let f = generic_flag(&a)?;
            let part = flag_partition(&a, &f)?;
            let sizes = part.sizes();
            let mut text = String::new();
            for (k, s) in f.levels().iter().enumerate() {
                let p: Vec<String> = s.point.iter().map(hyperarr::linalg::format_rat).collect();
                let d: Vec<String> = s
                    .directions
                    .iter()
                    .map(|d| {
                        let v: Vec<String> = d.iter().map(hyperarr::linalg::format_rat).collect();
                        format!("({})", v.join(", "))
                    })
                    .collect();
                text.push_str(&format!("F{k}: point ({}) directions [{}]\n", p.join(", "), d.join(", ")));
            }
            let sz: Vec<String> = sizes.iter().map(ToString::to_string).collect();
            text.push_str(&format!("sizes: {}\n", sz.join(" ")));
            let levels: Vec<Vec<String>> = part
                .levels
                .iter()
                .map(|lv| lv.iter().map(|&c| part.chambers[c].sign.to_string()).collect())
                .collect();
            let value = json!({ "flag": f.to_json(), "sizes": sizes, "levels": levels });
            emit(&common, text, value)
        }
        Command::Betti { common } => {
            let a = load(&common)?.arrangement().clone();
            let b = betti_from_char_poly(&char_poly(&a), a.dim());
            let strs = bigs(&b);
            emit(&common, format!("{}\n", strs.join(" ")), json!({ "betti": strs }))
        }
        Command::Os { common, degree } => {
            let a = load(&common)?.arrangement().clone();
            let degrees = match degree {
                Some(k) => vec![os_degree(&a, k)?],
                None => os_algebra(&a)?,
            };
            let mut text = String::new();
            for d in &degrees {
                let basis: Vec<String> = d
                    .basis
                    .iter()
                    .map(|m| {
                        let idx: Vec<String> = m.iter().map(|i| (i + 1).to_string()).collect();
                        format!("e{}", idx.join(","))
                    })
                    .collect();
                text.push_str(&format!("degree {}: dim {} basis {}\n", d.k, d.dim(), basis.join(" ")));
            }
            let value = json!({ "degrees": degrees.iter().map(|d| d.to_json()).collect::<Vec<_>>() });
            emit(&common, text, value)
        }
        Command::Salvetti { common, dot } => {
            let a = load(&common)?.arrangement().clone();
            let s = salvetti_poset(&a)?;
            let labels = s.labels();
            let f = s.f_vector();
            let text = if dot {
                s.order.to_dot("salvetti", &labels)
            } else {
                let fv: Vec<String> = f.iter().map(ToString::to_string).collect();
                format!("f-vector: {}\neuler characteristic: {}\n", fv.join(" "), s.euler_characteristic())
            };
            let mut value = s.order.to_json(&labels);
            value["f_vector"] = json!(f);
            value["euler_characteristic"] = json!(s.euler_characteristic());
            value["cell_dims"] = json!((0..s.elements.len()).map(|e| s.cell_dim(e)).collect::<Vec<_>>());
            emit(&common, text, value)
        }
        Command::Df { common, dot } => {
            let a = load(&common)?.arrangement().clone();
            let df = df_poset(&a)?;
            df.order.check_axioms()?;
            let labels = df.labels();
            let text = if dot {
                df.order.to_dot("df", &labels)
            } else {
                format!(
                    "elements: {}\ncover relations: {}\n",
                    df.elements.len(),
                    df.order.covers().len()
                )
            };
            emit(&common, text, df.order.to_json(&labels))
        }
        Command::Pi1 { common, style, literal, gap } => {
            let a = load(&common)?.arrangement().clone();
            let (p, perm) = match style {
                Pi1Style::Minimal => {
                    let (p, n) = minimal_presentation(&a)?;
                    (p, n.permutation)
                }
                Pi1Style::RandellFalk | Pi1Style::RandellFalkFull => {
                    let cs = if literal { ConjugationStyle::Literal } else { ConjugationStyle::TrailingCommute };
                    let rf = randell_falk_presentation(&a, cs)?;
                    let p = if style == Pi1Style::RandellFalk { rf.reduced } else { rf.full };
                    (p, rf.normalized.permutation)
                }
            };
            let ab = abelianization(&p);
            let text = if gap { p.to_gap() } else { p.to_text() };
            let mut value = p.to_json();
            value["permutation"] = json!(perm.iter().map(|i| i + 1).collect::<Vec<_>>());
            value["abelianization"] = json!({ "rank": ab.rank, "torsion": bigs(&ab.torsion) });
            emit(&common, text, value)
        }
        Command::Galplus { common, from, to, length } => {
            let a = load(&common)?.arrangement().clone();
            let g = ChamberGraph::new(&a)?;
            let c = g.chamber_of(&SignVector::parse(&from)?)?;
            let d = g.chamber_of(&SignVector::parse(&to)?)?;
            let k = length.unwrap_or_else(|| g.distance(c, d));
            let classes = g.flip_classes(c, d, k)?;
            let name = |p: &Vec<usize>| -> Vec<String> {
                p.iter().map(|&i| g.chambers[i].sign.to_string()).collect()
            };
            let mut text = format!("{} paths of length {k} in {} classes\n", classes.iter().map(Vec::len).sum::<usize>(), classes.len());
            for cl in &classes {
                text.push_str(&format!("[{}] size {}\n", name(&cl[0]).join(" "), cl.len()));
            }
            let value = json!({
                "length": k,
                "classes": classes
                    .iter()
                    .map(|cl| json!({ "representative": name(&cl[0]), "size": cl.len() }))
                    .collect::<Vec<_>>(),
            });
            emit(&common, text, value)
        }
        Command::Cohomology { common, rho, field } => {
            let a = load(&common)?.arrangement().clone();
            let field = CoefficientField::parse(&field)?;
            let ls = LocalSystem::parse(field, &rho)?;
            let cx = twisted_complex(&a, &ls)?;
            if !cx.is_cochain_complex() {
                return Err(Error::Internal("twisted differential does not square to zero".into()));
            }
            let dims = cx.cohomology();
            let euler: i64 = dims
                .iter()
                .enumerate()
                .map(|(k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) })
                .sum();
            let ds: Vec<String> = dims.iter().map(ToString::to_string).collect();
            emit(&common, format!("{}\neuler characteristic: {euler}\n", ds.join(" ")), json!({ "dims": dims, "euler": euler }))
        }
        Command::CountFq { common, q } => {
            let a = load(&common)?.arrangement().clone();
            let count = count_points_mod_q(&a, q)?;
            let chi = char_poly(&a).eval_i64(q as i64);
            let value = json!({ "q": q, "count": count, "chi_at_q": chi.to_string() });
            emit(&common, format!("{count}\n"), value)
        }
        Command::Sphere { common, eps } => {
            let a = load(&common)?.arrangement().clone();
            let eps = SignVector::parse(&eps)?;
            let trivial = sphere_is_trivial(&a, &eps)?;
            let word = if trivial { "trivial" } else { "nontrivial" };
            emit(&common, format!("{word}\n"), json!({ "sign": eps.to_string(), "trivial": trivial }))
        }
        Command::Selftest { data } => {
            let ok = selftest::run(data.as_deref())?;
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}
