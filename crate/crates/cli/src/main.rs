use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use qaoa_maxcut::graph::{exact_maxcut, generate_unique_maxcut_regular, RegularFamily, MAX_EXACT_VERTICES};
use qaoa_maxcut::gw::{self, WarmStart};
use qaoa_maxcut::lightcone::{graph_expectation_detailed, edge_dump_csv, Backend, LightConeOptions};
use qaoa_maxcut::qaoa::{self, ascend_from, evaluate_on_graph, tree, Engine};
use qaoa_maxcut::{Graph, MixerSpec, QaoaParams};
use qaoa_harness::config::{ExperimentConfig, Strategy};
use qaoa_harness::record::{graph_hash, to_csv, ResultRecord, RESULTS_HEADER};

#[derive(Parser)]
#[command(name = "qaoa-maxcut", version, about = "QAOA MaxCut experiments with tree parameters and warm starts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Dense,
    Lightcone,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Tensor,
    Dense,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random 3-regular (or D-regular) graph.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        degree: usize,
        #[arg(long)]
        bipartite: bool,
        /// Resample until the graph has a single best cut.
        #[arg(long)]
        unique_maxcut: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2000)]
        max_attempts: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exact MaxCut by exhaustive search (n <= 32).
    Maxcut {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Solve the relaxation and report the expected rounded cut.
    Gw {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long, default_value_t = gw::DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = gw::DEFAULT_MAX_ITERS)]
        max_iters: usize,
        /// Also round once with this seed.
        #[arg(long)]
        round_seed: Option<u64>,
        /// Best of this many rounding lines inside the plane from --plane-seed.
        #[arg(long)]
        in_plane_lines: Option<usize>,
        #[arg(long, default_value_t = 0)]
        plane_seed: u64,
    },
    /// Build a warm start and write it to a file.
    Warmstart {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 0)]
        sdp_seed: u64,
        #[arg(long, default_value_t = 0)]
        plane_seed: u64,
        #[arg(long)]
        optimize_alpha: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate QAOA on a graph and print one result record.
    Qaoa {
        #[arg(long)]
        graph: PathBuf,
        /// `tree` for the bundled table, or a table file path.
        #[arg(long, default_value = "tree")]
        params: String,
        #[arg(long)]
        p: usize,
        #[arg(long, value_enum, default_value = "dense")]
        engine: EngineArg,
        #[arg(long, value_enum, default_value = "tensor")]
        backend: BackendArg,
        /// Warm-start file; selects the rotated mixer.
        #[arg(long)]
        warmstart: Option<PathBuf>,
        /// Ascend from the parameters with this many evaluations.
        #[arg(long, default_value_t = 0)]
        ascend: usize,
        /// Write per-edge terms (lightcone engine) to this CSV file.
        #[arg(long)]
        edge_dump: Option<PathBuf>,
    },
    /// Print, optimize or check tree parameters.
    TreeParams {
        #[arg(long)]
        p: Option<usize>,
        #[arg(long, default_value_t = 3)]
        degree: usize,
        /// Optimize instead of reading the table.
        #[arg(long)]
        optimize: bool,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Table file instead of the bundled one.
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Run an experiment recipe from a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Permit sizes above desk scale.
        #[arg(long)]
        allow_large: bool,
    },
    /// Print the default config of a recipe.
    Preset {
        #[arg(value_parser = ["fig1", "fig2", "fig3-p0-sweep", "fig4", "custom"])]
        recipe: String,
    },
}

fn read_graph(path: &PathBuf) -> Result<Graph> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Graph::from_text(&text).with_context(|| format!("parsing {}", path.display()))
}

fn params_for(spec: &str, degree: usize, p: usize) -> Result<QaoaParams> {
    if p == 0 {
        return Ok(QaoaParams::empty());
    }
    let table = if spec == "tree" {
        qaoa::bundled_tree_table()
    } else {
        qaoa::load_param_table(spec)?
    };
    Ok(tree::lookup(&table, degree, p)
        .with_context(|| format!("no D={degree} p={p} entry in {spec}"))?
        .params
        .clone())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen {
            n,
            degree,
            bipartite,
            unique_maxcut,
            seed,
            max_attempts,
            out,
        } => {
            let family = if bipartite { RegularFamily::Bipartite } else { RegularFamily::Random };
            let g = if unique_maxcut {
                generate_unique_maxcut_regular(n, degree, family, seed, max_attempts)?
            } else {
                family.sample(n, degree, seed)?
            };
            std::fs::write(&out, g.to_text()).with_context(|| format!("writing {}", out.display()))?;
            print!("graph {} n={} edges={} hash={}", out.display(), n, g.edge_count(), graph_hash(&g));
            if n <= MAX_EXACT_VERTICES {
                let s = exact_maxcut(&g)?;
                print!(" maxcut={} maxima={}", s.best.value, s.count_of_maxima);
            }
            println!();
        }
        Command::Maxcut { graph } => {
            let g = read_graph(&graph)?;
            let s = exact_maxcut(&g)?;
            let bits: String = s.best.assignment.iter().map(|&x| if x > 0 { '0' } else { '1' }).collect();
            println!("maxcut={} maxima={} assignment={bits}", s.best.value, s.count_of_maxima);
        }
        Command::Gw {
            graph,
            seed,
            rank,
            tol,
            max_iters,
            round_seed,
            in_plane_lines,
            plane_seed,
        } => {
            let g = read_graph(&graph)?;
            let sol = gw::solve_sdp(&g, rank, tol, max_iters, seed)?;
            let report = gw::gw_report(&sol, &g, round_seed)?;
            print!(
                "relaxed={} expected_gw={} rank={} converged={} gradient_norm={:.3e} iterations={}",
                report.relaxed_value, report.expected_cut, sol.rank, sol.converged, sol.gradient_norm, sol.iterations
            );
            if let Some(c) = report.sampled_cut {
                print!(" sampled_cut={}", c.value);
            }
            if let Some(lines) = in_plane_lines {
                print!(" in_plane_cut={}", gw::round_in_plane_best(&sol, &g, plane_seed, lines)?.value);
            }
            println!();
        }
        Command::Warmstart {
            graph,
            sdp_seed,
            plane_seed,
            optimize_alpha,
            out,
        } => {
            let g = read_graph(&graph)?;
            let sol = gw::solve_sdp(&g, None, gw::DEFAULT_TOL, gw::DEFAULT_MAX_ITERS, sdp_seed)?;
            let mut ws = gw::project_to_plane(&sol, plane_seed)?;
            if optimize_alpha {
                ws = ws.with_optimized_alpha(&g);
            }
            if let Some(path) = &out {
                ws.write(path)?;
            }
            println!(
                "alpha={} p0_expectation={} expected_gw={} relaxed={}",
                ws.alpha,
                gw::p0_expectation(&ws.thetas, ws.alpha, &g),
                gw::expected_gw_cut(&sol, &g),
                sol.relaxed_value
            );
        }
        Command::Qaoa {
            graph,
            params,
            p,
            engine,
            backend,
            warmstart,
            ascend,
            edge_dump,
        } => {
            let g = read_graph(&graph)?;
            let q = params_for(&params, 3, p)?;
            let (mixer, strategy) = match &warmstart {
                Some(path) => {
                    let ws = WarmStart::read(path)?;
                    if ws.thetas.len() != g.vertex_count() {
                        bail!("warm start has {} angles, graph has {} vertices", ws.thetas.len(), g.vertex_count());
                    }
                    let s = if ascend > 0 { Strategy::WarmstartAscend } else { Strategy::WarmstartTree };
                    (gw::build_warmstart_qaoa_inputs(&ws), s)
                }
                None => (
                    MixerSpec::Standard,
                    if ascend > 0 { Strategy::StandardAscend } else { Strategy::StandardTree },
                ),
            };
            let opts = LightConeOptions::with_backend(match backend {
                BackendArg::Tensor => Backend::TensorNetwork,
                BackendArg::Dense => Backend::Dense,
            });
            let eng = match engine {
                EngineArg::Dense => Engine::Dense,
                EngineArg::Lightcone => Engine::LightCone(opts),
            };
            let maxcut = (g.vertex_count() <= MAX_EXACT_VERTICES)
                .then(|| exact_maxcut(&g).map(|s| s.best.value))
                .transpose()?;
            let (q, report) = if ascend > 0 {
                ascend_from(&g, &mixer, &q, ascend, &eng, maxcut)?
            } else {
                (q.clone(), evaluate_on_graph(&g, &mixer, &q, &eng, maxcut)?)
            };
            if let Some(path) = &edge_dump {
                let (_, outcomes) = graph_expectation_detailed(&g, &mixer, &q, &opts)?;
                std::fs::write(path, edge_dump_csv(&outcomes)).with_context(|| format!("writing {}", path.display()))?;
            }
            let rec = ResultRecord {
                graph_hash: graph_hash(&g),
                strategy,
                n: g.vertex_count(),
                p: Some(p),
                expectation: report.total_expectation,
                cut_fraction: report.cut_fraction,
                approx_ratio: report.approx_ratio,
                gw_expected: None,
                best_cut_prob: report.best_cut_probability,
                seed: 0,
                wall_ms: None,
            };
            print!("{}", to_csv(RESULTS_HEADER, &[rec])?);
        }
        Command::TreeParams {
            p,
            degree,
            optimize,
            restarts,
            seed,
            table,
        } => {
            if optimize {
                let p = p.context("--optimize needs --p")?;
                println!("{}", qaoa::optimize_tree_params(degree, p, restarts, seed)?);
            } else {
                let entries = match &table {
                    Some(path) => qaoa::load_param_table(path)?,
                    None => qaoa::bundled_tree_table(),
                };
                println!("# D p f gamma_1..gamma_p beta_1..beta_p");
                for e in entries.iter().filter(|e| e.degree == degree && p.is_none_or(|p| e.depth == p)) {
                    println!("{e}");
                }
            }
        }
        Command::Run {
            config,
            out,
            allow_large,
        } => {
            let mut cfg = ExperimentConfig::read(&config)?;
            if let Some(dir) = out {
                cfg.output_dir = dir;
            }
            cfg.allow_large |= allow_large;
            let out = qaoa_harness::execute(&cfg)?;
            for note in &out.estimates {
                eprintln!("estimate: {note}");
            }
            let files = qaoa_harness::recipe::write_outputs(&cfg, &out)?;
            println!(
                "records={} errors={} files={}",
                out.records.len(),
                out.errors.len(),
                files.iter().map(|f| f.display().to_string()).collect::<Vec<_>>().join(",")
            );
        }
        Command::Preset { recipe } => {
            let r: qaoa_harness::Recipe = toml::Value::String(recipe).try_into()?;
            print!("{}", ExperimentConfig::preset(r).to_toml());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let first = e.to_string().lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
            eprintln!("error: usage: {first}");
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", format!("{e:#}").replace('\n', " "));
            ExitCode::FAILURE
        }
    }
}
