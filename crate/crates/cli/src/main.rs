mod manifest;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use gsc_core::ball::{cayley_ball, verify_embedding_by_length_gap, verify_isometric_embedding, Coverage};
use gsc_core::boxspace::box_space;
use gsc_core::codec;
use gsc_core::covers::{cover_from_action, deck_and_normality, iterate_z2_cover};
use gsc_core::pipeline::{self, PipelineConfig, Transcript};
use gsc_core::quotients::{check_conditions, search_quotient, SearchBudget, SearchOutcome};
use gsc_core::smallcancel::{check_cprime, check_strong_condition, default_piece_bound, enumerate_pieces};
use gsc_core::walls::{walling_diagnostics_seeded, walls_from_cover, SAMPLE_SEED};
use gsc_core::{DehnEngine, GraphicalPresentation, GscError, Lambda};
use manifest::{digest, RunManifest};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "gsc", version, about = "Graphical small cancellation toolkit")]
struct Cli {
    /// Worker threads for parallel checks.
    #[arg(long, global = true, env = "GSC_JOBS")]
    jobs: Option<usize>,
    /// Seed for randomized steps.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the JSON result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(flatten)]
    budgets: Budgets,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
struct Budgets {
    /// Cayley ball element cap.
    #[arg(long, global = true, env = "GSC_BUDGET_MAX_BALL", default_value_t = 200_000)]
    max_ball: usize,
    /// Vertex cap for constructed covers.
    #[arg(long, global = true, env = "GSC_BUDGET_MAX_COVER_VERTICES", default_value_t = 200_000)]
    max_cover_vertices: usize,
    /// Node cap for the permutation search.
    #[arg(long, global = true, env = "GSC_BUDGET_MAX_NODES", default_value_t = 50_000_000)]
    max_nodes: u64,
    /// Order cap for enumerated quotient groups.
    #[arg(long, global = true, env = "GSC_BUDGET_MAX_ORDER", default_value_t = 5_000)]
    max_order: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Check a graph or presentation file.
    Validate { input: PathBuf },
    /// List maximal pieces of a presentation.
    Pieces {
        input: PathBuf,
        #[arg(long)]
        max_length: Option<usize>,
    },
    /// Decide C'(λ), or the strong condition with --strong.
    Check {
        input: PathBuf,
        #[arg(long)]
        lambda: Option<Lambda>,
        #[arg(long)]
        strong: bool,
    },
    /// Build a Z/2-homology cover or a cover induced by a permutation action.
    Cover {
        graph: PathBuf,
        #[arg(long, conflicts_with = "action")]
        z2: bool,
        #[arg(long, default_value_t = 1, requires = "z2")]
        iterate: usize,
        #[arg(long)]
        action: Option<PathBuf>,
        /// Keep every component of the pullback.
        #[arg(long, requires = "action")]
        full: bool,
    },
    /// Walls of a cover and walling diagnostics.
    Walls {
        cover: PathBuf,
        /// Write sampled distance ratios as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Dehn reduction of a word.
    Word {
        presentation: PathBuf,
        #[arg(long)]
        check: String,
        /// Also decide equality with this word.
        #[arg(long)]
        equal: Option<String>,
    },
    /// Enumerate a Cayley ball.
    Ball {
        presentation: PathBuf,
        #[arg(long)]
        radius: usize,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Check that a component embeds isometrically.
    Embed {
        presentation: PathBuf,
        #[arg(long, default_value_t = 0)]
        component: usize,
        #[arg(long)]
        radius: usize,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// Search a finite permutation quotient.
    Quotient {
        presentation: PathBuf,
        #[arg(long, env = "GSC_BUDGET_N_MAX", default_value_t = 8)]
        nmax: usize,
        #[arg(long, default_value_t = 1)]
        radius: usize,
    },
    /// Quotient tower certificates.
    Tower {
        #[command(subcommand)]
        command: TowerCommand,
    },
    /// Box-space diagnostics of a tower.
    Boxspace {
        tower: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// The inductive construction.
    Pipeline {
        #[command(subcommand)]
        command: PipelineCommand,
    },
}

#[derive(Subcommand)]
enum TowerCommand {
    Check { tower: PathBuf },
}

#[derive(Subcommand)]
enum PipelineCommand {
    /// Run the construction and write a transcript.
    Run {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Start from the toy configuration instead of the default one.
        #[arg(long)]
        toy: bool,
        #[arg(long, default_value_t = 3)]
        levels: usize,
        /// Presentation whose components are the inputs, in order.
        #[arg(long)]
        inputs: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Also write the quotient tower of the completed levels.
        #[arg(long)]
        tower: Option<PathBuf>,
    },
    /// Recompute every certificate of a transcript.
    Verify { transcript: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Ball,
    Gap,
    Auto,
}

struct Outcome {
    result: Value,
    pass: bool,
    budget: bool,
}

struct Ctx {
    manifest: RunManifest,
    budgets: Budgets,
    seed: Option<u64>,
}

impl Ctx {
    fn read(&mut self, path: &Path) -> anyhow::Result<String> {
        let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        self.manifest.inputs.push(digest(path, &bytes));
        String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))
    }

    fn json(&mut self, path: &Path) -> anyhow::Result<Value> {
        let text = self.read(path)?;
        let v = codec::parse_json(&text)?;
        match (v.get("manifest"), v.get("result")) {
            (Some(_), Some(r)) => Ok(r.clone()),
            _ => Ok(v),
        }
    }

    fn presentation(&mut self, path: &Path) -> anyhow::Result<GraphicalPresentation> {
        let v = self.json(path)?;
        Ok(codec::presentation_from_value(&v, "")?)
    }
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn search_budget(b: &Budgets) -> SearchBudget {
    SearchBudget {
        max_nodes: b.max_nodes,
        max_ball: b.max_ball,
    }
}

fn env_override<T: std::str::FromStr>(name: &str, slot: &mut T) -> anyhow::Result<()> {
    if let Ok(v) = std::env::var(name) {
        *slot = v.parse().map_err(|_| anyhow::anyhow!("{name}={v:?} is not a valid value"))?;
    }
    Ok(())
}

fn pipeline_config(ctx: &mut Ctx, path: Option<&Path>, toy: bool) -> anyhow::Result<PipelineConfig> {
    let mut config = match path {
        Some(p) => {
            let v = ctx.json(p)?;
            let base = serde_json::to_value(if toy { PipelineConfig::toy() } else { PipelineConfig::default() })?;
            let mut merged = base.as_object().cloned().unwrap_or_default();
            for (k, x) in v.as_object().context("config must be a JSON object")? {
                merged.insert(k.clone(), x.clone());
            }
            serde_json::from_value(Value::Object(merged)).map_err(|e| GscError::Schema {
                path: "/".into(),
                message: e.to_string(),
            })?
        }
        None if toy => PipelineConfig::toy(),
        None => PipelineConfig::default(),
    };
    env_override("GSC_BUDGET_MAX_COVER_VERTICES", &mut config.max_cover_vertices)?;
    env_override("GSC_BUDGET_MAX_STAGES", &mut config.max_cover_stages)?;
    env_override("GSC_BUDGET_N_MAX", &mut config.n_max)?;
    env_override("GSC_BUDGET_MAX_NODES", &mut config.max_search_nodes)?;
    env_override("GSC_BUDGET_MAX_BALL", &mut config.max_ball)?;
    env_override("GSC_BUDGET_MAX_ATTEMPTS", &mut config.max_attempts)?;
    if let Some(seed) = ctx.seed {
        config.seed = seed;
    }
    Ok(config)
}

fn run(ctx: &mut Ctx, command: Command, out: Option<&Path>) -> anyhow::Result<Outcome> {
    let b = ctx.budgets.clone();
    match command {
        Command::Validate { input } => {
            let v = ctx.json(&input)?;
            if v.get("components").is_some() {
                let p = codec::presentation_from_value(&v, "")?;
                let sizes: Vec<usize> = p.components().iter().map(|c| c.vertex_count()).collect();
                Ok(Outcome {
                    budget: false,
                    result: json!({ "kind": "presentation", "valid": true, "component_vertices": sizes }),
                    pass: true,
                })
            } else {
                let g = codec::graph_from_value(&v, "", None)?;
                let report = g.validate();
                Ok(Outcome {
                    budget: false,
                    pass: report.is_ok(),
                    result: json!({
                        "kind": "graph",
                        "valid": report.is_ok(),
                        "vertices": g.vertex_count(),
                        "edges": g.edge_count(),
                        "report": report,
                    }),
                })
            }
        }
        Command::Pieces { input, max_length } => {
            let p = ctx.presentation(&input)?;
            let bound = max_length.unwrap_or_else(|| default_piece_bound(&p));
            let pieces = enumerate_pieces(&p, bound)?;
            let list: Vec<Value> = pieces.iter().map(|x| report::piece(&p, x)).collect();
            Ok(Outcome {
                budget: false,
                result: json!({ "max_length": bound, "count": list.len(), "pieces": list }),
                pass: true,
            })
        }
        Command::Check { input, lambda, strong } => {
            let mut p = ctx.presentation(&input)?;
            if let Some(l) = lambda {
                p = p.with_lambda(l);
            }
            if strong {
                let v = check_strong_condition(&p, None)?;
                Ok(Outcome {
                    budget: false,
                    pass: v.pass,
                    result: report::strong(&p, &v),
                })
            } else {
                let v = check_cprime(&p)?;
                Ok(Outcome {
                    budget: false,
                    pass: v.pass,
                    result: report::cprime(&p, &v),
                })
            }
        }
        Command::Cover { graph, z2, iterate, action, full } => {
            let v = ctx.json(&graph)?;
            let g = codec::graph_from_value(&v, "", None)?;
            let cover = match action {
                Some(path) => {
                    let a = ctx.json(&path)?;
                    let action = codec::action_from_value(&a, "", g.alphabet())?;
                    cover_from_action(&g, &action, full)?
                }
                None if z2 => iterate_z2_cover(&g, iterate, b.max_cover_vertices)?,
                None => bail!(GscError::Precondition("give --z2 or --action".into())),
            };
            let mut result = codec::cover_to_value(&cover);
            if cover.total.is_connected() {
                let deck = deck_and_normality(&cover)?;
                result["deck_size"] = json!(deck.deck.len());
                result["normal"] = json!(deck.is_normal);
            }
            Ok(Outcome { budget: false, result, pass: true })
        }
        Command::Walls { cover, csv } => {
            let v = ctx.json(&cover)?;
            let cover = codec::cover_from_value(&v, "")?;
            let system = walls_from_cover(&cover);
            let diag = walling_diagnostics_seeded(&system, ctx.seed.unwrap_or(SAMPLE_SEED));
            if let Some(path) = csv {
                write(&path, &diag.to_csv())?;
            }
            let mut result = report::walls(&system);
            result["diagnostics"] = serde_json::to_value(&diag)?;
            Ok(Outcome { budget: false, result, pass: true })
        }
        Command::Word { presentation, check, equal } => {
            let p = ctx.presentation(&presentation)?;
            let engine = DehnEngine::new(&p)?;
            let s = p.alphabet();
            let w = s.parse_word(&check)?;
            let r = engine.dehn_reduce(&w);
            let trace: Vec<Value> = r
                .trace
                .iter()
                .map(|t| {
                    json!({
                        "position": t.position,
                        "component": t.component,
                        "removed": s.format_word(&t.removed),
                        "inserted": s.format_word(&t.inserted),
                        "result": s.format_word(&t.result),
                    })
                })
                .collect();
            let mut result = json!({
                "word": s.format_word(&w),
                "reduced": s.format_word(&r.word),
                "trivial": engine.is_trivial(&w),
                "trace": trace,
            });
            if let Some(e) = equal {
                let u = s.parse_word(&e)?;
                result["equal"] = json!(engine.is_equal(&w, &u));
            }
            Ok(Outcome { budget: false, result, pass: true })
        }
        Command::Ball { presentation, radius, dot } => {
            let p = ctx.presentation(&presentation)?;
            let engine = DehnEngine::new(&p)?;
            let ball = cayley_ball(&engine, radius, b.max_ball);
            if let Some(path) = dot {
                write(&path, &report::ball_dot(p.alphabet(), &ball))?;
            }
            Ok(Outcome {
                budget: ball.truncated,
                pass: !ball.truncated,
                result: report::ball(p.alphabet(), &ball, 10_000),
            })
        }
        Command::Embed { presentation, component, radius, method } => {
            let p = ctx.presentation(&presentation)?;
            let engine = DehnEngine::new(&p)?;
            let by_ball = || verify_isometric_embedding(&engine, component, radius, b.max_ball, Coverage::Strict);
            let report = match method {
                Method::Ball => by_ball()?,
                Method::Gap => verify_embedding_by_length_gap(&engine, component)?,
                Method::Auto => match by_ball() {
                    Err(GscError::BallTruncated { .. }) => verify_embedding_by_length_gap(&engine, component)?,
                    other => other?,
                },
            };
            Ok(Outcome {
                budget: false,
                pass: report.pass(),
                result: serde_json::to_value(&report)?,
            })
        }
        Command::Quotient { presentation, nmax, radius } => {
            let p = ctx.presentation(&presentation)?;
            match search_quotient(&p, nmax, radius, search_budget(&b))? {
                SearchOutcome::Found { quotient, stats } => Ok(Outcome {
                    budget: false,
                    pass: true,
                    result: json!({
                        "found": true,
                        "quotient": codec::quotient_to_value(p.alphabet(), &quotient.action),
                        "stats": stats,
                    }),
                }),
                SearchOutcome::Exhausted { n_max, stats } => Ok(Outcome {
                    budget: false,
                    pass: false,
                    result: json!({ "found": false, "n_max": n_max, "stats": stats }),
                }),
            }
        }
        Command::Tower { command: TowerCommand::Check { tower } } => {
            let v = ctx.json(&tower)?;
            let tower = codec::tower_from_value(&v, "")?;
            let cert = check_conditions(&tower, b.max_ball)?;
            Ok(Outcome {
                budget: false,
                pass: cert.pass(),
                result: json!({ "pass": cert.pass(), "certificate": cert }),
            })
        }
        Command::Boxspace { tower, csv } => {
            let v = ctx.json(&tower)?;
            let tower = codec::tower_from_value(&v, "")?;
            let report = box_space(&tower, b.max_order)?;
            if let Some(path) = csv {
                write(&path, &report.to_csv())?;
            }
            Ok(Outcome {
                budget: false,
                pass: true,
                result: serde_json::to_value(&report)?,
            })
        }
        Command::Pipeline { command } => pipeline_command(ctx, command, out),
    }
}

fn pipeline_command(ctx: &mut Ctx, command: PipelineCommand, out: Option<&Path>) -> anyhow::Result<Outcome> {
    match command {
        PipelineCommand::Run { config, toy, levels, inputs, csv, tower } => {
            let config = pipeline_config(ctx, config.as_deref(), toy)?;
            ctx.manifest.config = serde_json::to_value(&config)?;
            ctx.manifest.seed = Some(config.seed);
            let inputs = match inputs {
                Some(path) => Some(ctx.presentation(&path)?.components().to_vec()),
                None => None,
            };
            let state = pipeline::run(&config, inputs, levels)?;
            let transcript = pipeline::certify(&state);
            if let Some(path) = csv {
                write(&path, &transcript.to_csv())?;
            }
            if let Some(path) = tower {
                write(&path, &codec::to_canonical_string(&codec::tower_to_value(&state.tower()?)))?;
            }
            let budget = transcript
                .failure
                .as_ref()
                .is_some_and(|f| f.message.starts_with("budget exceeded") || f.message.contains("truncated"));
            if budget {
                return Err(GscError::Budget(
                    transcript.failure.as_ref().map(|f| format!("level {} {}: {}", f.level, f.stage, f.message)).unwrap_or_default(),
                ))
                .map_err(anyhow::Error::from)
                .inspect_err(|_| {
                    if let Some(path) = out {
                        let _ = write(path, &transcript.to_json());
                    }
                });
            }
            Ok(Outcome {
                budget: false,
                pass: transcript.pass,
                result: serde_json::to_value(&transcript)?,
            })
        }
        PipelineCommand::Verify { transcript } => {
            let text = ctx.read(&transcript)?;
            let t = Transcript::from_json(&text)?;
            let report = pipeline::verify(&t)?;
            Ok(Outcome {
                budget: false,
                pass: report.pass,
                result: json!({ "verify": report, "transcript_pass": t.pass }),
            })
        }
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(j) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global();
    }
    let is_transcript = matches!(cli.command, Command::Pipeline { command: PipelineCommand::Run { .. } });
    let mut ctx = Ctx {
        manifest: RunManifest::new(argv[1..].to_vec(), cli.seed, cli.jobs),
        budgets: cli.budgets.clone(),
        seed: cli.seed,
    };
    ctx.manifest.config = json!({
        "max_ball": cli.budgets.max_ball,
        "max_cover_vertices": cli.budgets.max_cover_vertices,
        "max_nodes": cli.budgets.max_nodes,
        "max_order": cli.budgets.max_order,
    });
    let start = Instant::now();
    let out = cli.out.clone();
    let outcome = run(&mut ctx, cli.command, out.as_deref());
    ctx.manifest.wall_clock_ms = start.elapsed().as_millis();
    match outcome {
        Ok(o) => {
            let manifest = serde_json::to_value(&ctx.manifest).expect("manifest serializes");
            let text = if is_transcript {
                codec::to_canonical_string(&o.result)
            } else {
                codec::to_canonical_string(&json!({ "manifest": manifest, "result": o.result }))
            };
            let written = match &out {
                Some(path) => {
                    let sidecar = is_transcript.then(|| {
                        let mut p = path.clone().into_os_string();
                        p.push(".manifest.json");
                        PathBuf::from(p)
                    });
                    write(path, &text).and_then(|_| match sidecar {
                        Some(s) => write(&s, &codec::to_canonical_string(&manifest)),
                        None => Ok(()),
                    })
                }
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            ExitCode::from(if o.budget { 3 } else if o.pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(report::exit_code(&e) as u8)
        }
    }
}
