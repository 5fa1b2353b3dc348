use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

use adapt_xstate::{
    ansatz_cnot_count, excited_ladder, exact_spectrum, fixed_ansatz_ladder, fermionic_pool, pool_csv, spin_preserving,
    trace_csv, uccsd_elements, AdaptConfig, AdaptTrace, CnotCostModel, ExcitationElement, Flavor, MolecularProblem,
    ScreeningMethod, ScreeningStrategy,
};

use crate::{Ansatz, Axis, CompareArgs, PoolArgs, SolveArgs, SolverArgs, SpectrumArgs, SweepArgs};

pub enum Status {
    Converged,
    NotConverged,
}

impl Status {
    fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Converged
        } else {
            Status::NotConverged
        }
    }
}

fn load_problem(path: &Path) -> Result<MolecularProblem> {
    MolecularProblem::load(path).with_context(|| format!("cannot load problem {}", path.display()))
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        Some(0) => bail!("--threads must be at least 1"),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build()?;
            Ok(pool.install(f))
        }
        None => Ok(f()),
    }
}

fn cost_model(args: &SolverArgs) -> Result<CnotCostModel> {
    match &args.cost_model {
        Some(p) => CnotCostModel::load(p).with_context(|| format!("cannot load cost model {}", p.display())),
        None => Ok(CnotCostModel::default()),
    }
}

fn adapt_config(args: &SolverArgs, flavor: Flavor, strategy: ScreeningStrategy) -> Result<AdaptConfig> {
    let config = AdaptConfig {
        epsilon: args.epsilon,
        n_candidates: args.n_candidates,
        max_iterations: args.max_iterations,
        flavor,
        strategy,
        screening_method: if args.fast_screen {
            ScreeningMethod::ClosedForm
        } else {
            ScreeningMethod::NelderMead
        },
        gradient_switch_iteration: args.gradient_switch,
        spin_preserving: args.spin_preserving,
        target_state: args.target_state,
        alphas: args.alpha.map(|a| vec![a; args.target_state.max(1)]),
        cost_model: cost_model(args)?,
        ..Default::default()
    };
    config.validate()?;
    Ok(config)
}

/// Reproducibility stamp; thread count is left out since it never changes results.
fn stamp(command: &str, inputs: &[(&str, String)], args: &SolverArgs) -> String {
    let mut s = format!("# adapt-xstate {} {command}", env!("CARGO_PKG_VERSION"));
    for (k, v) in inputs {
        let _ = write!(s, " {k}={v}");
    }
    let _ = write!(
        s,
        " pool={} strategy={} epsilon={:e} n_candidates={} target_state={} alpha={} max_iterations={} cost_model={} fast_screen={} spin_preserving={} gradient_switch={}",
        Flavor::from(args.pool),
        ScreeningStrategy::from(args.strategy),
        args.epsilon,
        args.n_candidates,
        args.target_state,
        args.alpha.map_or("default".to_string(), |a| format!("{a:e}")),
        args.max_iterations,
        args.cost_model.as_ref().map_or("builtin".to_string(), |p| p.display().to_string()),
        args.fast_screen,
        args.spin_preserving,
        args.gradient_switch.map_or("off".to_string(), |m| m.to_string()),
    );
    s + "\n"
}

fn fmt_opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn fmt_err(energy: f64, fci: Option<f64>) -> String {
    fci.map(|f| format!("{:e}", energy - f)).unwrap_or_default()
}

fn fixed_elements(problem: &MolecularProblem, ansatz: Ansatz) -> Result<Vec<ExcitationElement>> {
    Ok(match ansatz {
        Ansatz::Uccsd => uccsd_elements(problem.n_qubits, problem.n_electrons)?,
        Ansatz::Guccsd => fermionic_pool(problem.n_qubits)?,
        Ansatz::Adapt => unreachable!("adaptive ansatz has no fixed element list"),
    })
}

struct Solution {
    energy: f64,
    n_params: usize,
    cnot_count: Option<u64>,
    converged: bool,
    trace: Option<AdaptTrace>,
    csv: String,
}

fn solve_problem(
    problem: &MolecularProblem,
    ansatz: Ansatz,
    config: &AdaptConfig,
    state_dir: Option<&Path>,
) -> Result<Solution> {
    let k = config.target_state;
    let fci = problem.fci_energy(k);
    match ansatz {
        Ansatz::Adapt => {
            let ladder = excited_ladder(problem, config, k, state_dir)?;
            for s in &ladder.stages {
                eprintln!(
                    "level {}: energy {:.12} error_vs_fci {} params {} converged {}",
                    s.level,
                    s.bare_energy,
                    fmt_err(s.bare_energy, problem.fci_energy(s.level)),
                    s.trace.n_params(),
                    s.trace.converged
                );
            }
            let last = ladder.stages.last().expect("ladder has a stage");
            let reached = last.level == k && ladder.aborted_at.is_none();
            Ok(Solution {
                energy: last.bare_energy,
                n_params: last.trace.n_params(),
                cnot_count: last.trace.cnot_count(&config.cost_model),
                converged: reached,
                csv: trace_csv(&last.trace),
                trace: Some(last.trace.clone()),
            })
        }
        Ansatz::Uccsd | Ansatz::Guccsd => {
            let elements = fixed_elements(problem, ansatz)?;
            let stages = fixed_ansatz_ladder(problem, &elements, k, config.alphas.as_deref(), &config.bfgs)?;
            let cnot = ansatz_cnot_count(&elements, &config.cost_model).ok();
            let mut csv = String::from("level,energy,error_vs_fci,n_params,cnot_count,evaluations,converged\n");
            for s in &stages {
                let _ = writeln!(
                    csv,
                    "{},{:e},{},{},{},{},{}",
                    s.level,
                    s.bare_energy,
                    fmt_err(s.bare_energy, problem.fci_energy(s.level)),
                    elements.len(),
                    fmt_opt(cnot),
                    s.result.evaluations,
                    s.result.converged
                );
            }
            let last = stages.last().expect("ladder has a stage");
            eprintln!(
                "{} level {k}: energy {:.12} error_vs_fci {} params {}",
                ansatz.name(),
                last.bare_energy,
                fmt_err(last.bare_energy, fci),
                elements.len()
            );
            Ok(Solution {
                energy: last.bare_energy,
                n_params: elements.len(),
                cnot_count: cnot,
                converged: stages.iter().all(|s| s.result.converged),
                trace: None,
                csv,
            })
        }
    }
}

pub fn solve(args: &SolveArgs) -> Result<Status> {
    let problem = load_problem(&args.hamiltonian)?;
    let s = &args.solver;
    let config = adapt_config(s, s.pool.into(), s.strategy.into())?;
    if let Some(dir) = &args.state_dir {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    let solution = with_threads(s.threads, || {
        solve_problem(&problem, args.ansatz, &config, args.state_dir.as_deref())
    })??;
    let inputs = [
        ("hamiltonian", args.hamiltonian.display().to_string()),
        ("ansatz", args.ansatz.name().to_string()),
    ];
    let text = stamp("solve", &inputs, s) + &solution.csv;
    emit(args.output.as_deref(), &text)?;
    eprintln!(
        "final energy {:.12} error_vs_fci {} params {} cnots {} converged {}",
        solution.energy,
        fmt_err(solution.energy, problem.fci_energy(s.target_state)),
        solution.n_params,
        fmt_opt(solution.cnot_count),
        solution.converged
    );
    Ok(Status::from_bool(solution.converged))
}

fn problem_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).with_context(|| format!("cannot read directory {}", dir.display()))?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry.with_context(|| format!("cannot read directory {}", dir.display()))?.path();
        if path.extension().is_some_and(|e| e == "prob") {
            files.push(path);
        }
    }
    files.sort();
    if files.is_empty() {
        bail!("no .prob files in {}", dir.display());
    }
    Ok(files)
}

fn distance_of(path: &Path, problem: Option<&MolecularProblem>) -> Option<f64> {
    problem.and_then(|p| p.bond_length()).or_else(|| {
        let stem = path.file_stem()?.to_str()?;
        stem.rsplit('_').next()?.parse().ok()
    })
}

pub fn sweep(args: &SweepArgs) -> Result<Status> {
    let files = problem_files(&args.dir)?;
    let s = &args.solver;
    let config = adapt_config(s, s.pool.into(), s.strategy.into())?;
    let adapt_name = format!("adapt-{}-{}", Flavor::from(s.pool), ScreeningStrategy::from(s.strategy));
    let mut methods = vec![(Ansatz::Adapt, adapt_name)];
    if args.ansatz != Ansatz::Adapt {
        methods.push((args.ansatz, args.ansatz.name().to_string()));
    }
    let mut csv = stamp("sweep", &[("dir", args.dir.display().to_string())], s);
    csv.push_str("distance,method,energy,error_vs_fci,n_params,cnot_count,status\n");
    let mut all_ok = true;
    for file in &files {
        let problem = load_problem(file);
        let distance = fmt_opt(distance_of(file, problem.as_ref().ok()));
        let problem = match problem {
            Ok(p) => p,
            Err(e) => {
                all_ok = false;
                eprintln!("{}: {e:#}", file.display());
                for (_, name) in &methods {
                    let _ = writeln!(csv, "{distance},{name},,,,,error");
                }
                continue;
            }
        };
        for (ansatz, name) in &methods {
            eprintln!("{} {name}", file.display());
            match with_threads(s.threads, || solve_problem(&problem, *ansatz, &config, None))? {
                Ok(sol) => {
                    all_ok &= sol.converged;
                    let _ = writeln!(
                        csv,
                        "{distance},{name},{:e},{},{},{},{}",
                        sol.energy,
                        fmt_err(sol.energy, problem.fci_energy(s.target_state)),
                        sol.n_params,
                        fmt_opt(sol.cnot_count),
                        if sol.converged { "ok" } else { "not-converged" }
                    );
                }
                Err(e) => {
                    all_ok = false;
                    eprintln!("{}: {e:#}", file.display());
                    let _ = writeln!(csv, "{distance},{name},,,,,error");
                }
            }
        }
    }
    emit(args.output.as_deref(), &csv)?;
    Ok(Status::from_bool(all_ok))
}

pub fn compare(args: &CompareArgs) -> Result<Status> {
    let problem = load_problem(&args.hamiltonian)?;
    let s = &args.solver;
    let flavor: Flavor = s.pool.into();
    let strategy: ScreeningStrategy = s.strategy.into();
    let sides: [(String, AdaptConfig); 2] = match args.axis {
        Axis::Strategy => [
            ("energy".into(), adapt_config(s, flavor, ScreeningStrategy::EnergyReduction)?),
            ("gradient".into(), adapt_config(s, flavor, ScreeningStrategy::Gradient)?),
        ],
        Axis::Flavor => [
            ("qubit".into(), adapt_config(s, Flavor::Qubit, strategy)?),
            ("fermionic".into(), adapt_config(s, Flavor::Fermionic, strategy)?),
        ],
    };
    let mut traces = Vec::new();
    let mut all_ok = true;
    for (name, config) in &sides {
        eprintln!("{name}:");
        let sol = with_threads(s.threads, || solve_problem(&problem, Ansatz::Adapt, config, None))??;
        all_ok &= sol.converged;
        traces.push(sol.trace.expect("adaptive run has a trace"));
    }
    let fci = problem.fci_energy(s.target_state);
    let inputs = [
        ("hamiltonian", args.hamiltonian.display().to_string()),
        ("axis", format!("{:?}", args.axis).to_lowercase()),
    ];
    let mut csv = stamp("compare", &inputs, s);
    let (a, b) = (&sides[0].0, &sides[1].0);
    let _ = writeln!(csv, "iteration,energy_{a},error_{a},n_params_{a},energy_{b},error_{b},n_params_{b}");
    let series = |t: &AdaptTrace| -> Vec<(f64, usize)> {
        std::iter::once((t.initial_energy, 0))
            .chain(t.records.iter().map(|r| (r.energy, r.theta.len())))
            .collect()
    };
    let (sa, sb) = (series(&traces[0]), series(&traces[1]));
    for m in 0..sa.len().max(sb.len()) {
        let cell = |v: Option<&(f64, usize)>| match v {
            Some(&(e, n)) => format!("{e:e},{},{n}", fmt_err(e, fci)),
            None => ",,".to_string(),
        };
        let _ = writeln!(csv, "{m},{},{}", cell(sa.get(m)), cell(sb.get(m)));
    }
    emit(args.output.as_deref(), &csv)?;
    Ok(Status::from_bool(all_ok))
}

pub fn spectrum(args: &SpectrumArgs) -> Result<Status> {
    let mut csv = format!(
        "# adapt-xstate {} spectrum k={} all_sectors={} files={}\n",
        env!("CARGO_PKG_VERSION"),
        args.k,
        args.all_sectors,
        args.hamiltonian.iter().map(|p| p.display().to_string()).collect::<Vec<_>>().join(";")
    );
    csv.push_str("file,level,energy\n");
    for file in &args.hamiltonian {
        let problem = load_problem(file)?;
        let sector = (!args.all_sectors).then_some(problem.n_electrons);
        let spec = exact_spectrum(&problem, args.k, sector, false)
            .with_context(|| format!("cannot diagonalize {}", file.display()))?;
        for (level, e) in spec.energies.iter().enumerate() {
            let _ = writeln!(csv, "{},{level},{e:e}", file.display());
        }
    }
    emit(args.output.as_deref(), &csv)?;
    Ok(Status::Converged)
}

pub fn pool(args: &PoolArgs) -> Result<Status> {
    let problem = args.hamiltonian.as_deref().map(load_problem).transpose()?;
    let n_qubits = match (args.n_qubits, &problem) {
        (Some(n), _) => n,
        (None, Some(p)) => p.n_qubits,
        (None, None) => bail!("either --n-qubits or --hamiltonian is required"),
    };
    let elements = if args.uccsd {
        let ne = args
            .n_electrons
            .or(problem.as_ref().map(|p| p.n_electrons))
            .context("--uccsd needs --n-electrons or --hamiltonian")?;
        uccsd_elements(n_qubits, ne)?
    } else {
        adapt_xstate::pool::pool(n_qubits, args.pool.into())?
    };
    let elements = if args.spin_preserving {
        spin_preserving(elements)
    } else {
        elements
    };
    let header = format!(
        "# adapt-xstate {} pool n_qubits={n_qubits} flavor={} uccsd={} spin_preserving={} count={}\n",
        env!("CARGO_PKG_VERSION"),
        Flavor::from(if args.uccsd { crate::PoolFlavor::Fermionic } else { args.pool }),
        args.uccsd,
        args.spin_preserving,
        elements.len()
    )
    .to_lowercase();
    emit(args.output.as_deref(), &(header + &pool_csv(&elements)))?;
    Ok(Status::Converged)
}
