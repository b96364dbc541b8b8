//! `nsbox`: command-line front end for the box-state and coupler library.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use num::Zero;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use nsbox::catalog::{
    all_extremal_states, chsh_value, local_extremal, local_membership, nonlocal_extremal,
    ns_polytope_hrep, LocalExtremalId, NonlocalExtremalId,
};
use nsbox::coupler::{
    analyze_naive_coupler, build_coupler_polytope, classify_triviality, Coupler,
};
use nsbox::io::{BoxStateFile, HRepFile, VRepFile};
use nsbox::polytope::{affine_dimension, enumerate_vertices};
use nsbox::rational::format_rational;
use nsbox::wiring::{
    enumerate_wiring_couplers, expected_swapped_state, swapping_by_wiring, Wiring,
};
use nsbox::BoxState;

#[derive(Parser)]
#[command(name = "nsbox", version, about = "Exact no-signalling box calculus")]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Verb {
    /// List the 24 extremal two-box states with their CHSH values
    Catalog,
    /// Print the CHSH value of a box-state file
    Chsh { file: PathBuf },
    /// Check a box-state file for signalling; exit 1 with violation detail
    VerifyNs { file: PathBuf },
    /// Test membership in the local polytope and print a decomposition
    Membership { file: PathBuf },
    /// Enumerate the deterministic sequential strategies on two boxes
    Wirings {
        /// Print every strategy instead of the summary
        #[arg(long)]
        list: bool,
    },
    /// Run one sequential strategy on the middle boxes of PR x PR
    SwapDemo {
        #[arg(long, default_value_t = 0)]
        first_box: usize,
        #[arg(long)]
        lambda: bool,
        #[arg(long)]
        mu: bool,
        #[arg(long)]
        nu: bool,
    },
    /// Coupler-polytope operations
    #[command(subcommand)]
    Couplers(CouplerVerb),
    /// Convert an H-representation file to its V-representation
    Polytope {
        file: PathBuf,
        /// Write the V-representation here instead of standard output
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the full reproduction pipeline and print a summary
    Repro,
}

#[derive(Subcommand)]
enum CouplerVerb {
    /// Enumerate the vertices of the coupler polytope
    Enumerate,
    /// Classify every vertex against the wiring families
    Classify,
    /// Report the impossibility analysis for the naive swapping coupler
    Naive,
    /// Apply one vertex coupler to the middle boxes of PR x PR
    Swap {
        /// Vertex index from `couplers enumerate`
        #[arg(long)]
        coupler: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn read_state(path: &Path) -> Result<BoxState> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let file: BoxStateFile = serde_json::from_str(&text)
        .with_context(|| format!("parsing {}", path.display()))?;
    file.to_state()
        .with_context(|| format!("validating {}", path.display()))
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.verb {
        Verb::Catalog => catalog(cli.format),
        Verb::Chsh { file } => {
            let state = read_state(file)?;
            let value = chsh_value(&state)?;
            match cli.format {
                Format::Table => println!("{}", format_rational(&value)),
                Format::Json => print_json(&serde_json::json!({
                    "chsh": format_rational(&value)
                }))?,
            }
            Ok(ExitCode::SUCCESS)
        }
        Verb::VerifyNs { file } => verify_ns(cli.format, file),
        Verb::Membership { file } => membership(cli.format, file),
        Verb::Wirings { list } => wirings(cli.format, *list),
        Verb::SwapDemo {
            first_box,
            lambda,
            mu,
            nu,
        } => swap_demo(cli.format, *first_box, *lambda, *mu, *nu),
        Verb::Couplers(c) => couplers(cli.format, c),
        Verb::Polytope { file, output } => polytope(cli.format, file, output.as_deref()),
        Verb::Repro => repro(cli.format),
    }
}

fn local_label(id: LocalExtremalId) -> String {
    format!(
        "L_{}{}{}{}",
        id.alpha as u8, id.beta as u8, id.gamma as u8, id.delta as u8
    )
}

fn nonlocal_label(id: NonlocalExtremalId) -> String {
    format!("N_{}{}{}", id.alpha as u8, id.beta as u8, id.gamma as u8)
}

fn catalog(format: Format) -> Result<ExitCode> {
    #[derive(Serialize)]
    struct Entry {
        name: String,
        chsh: String,
        state: BoxStateFile,
    }
    let mut entries = Vec::new();
    for id in LocalExtremalId::all() {
        let s = local_extremal(id);
        entries.push(Entry {
            name: local_label(id),
            chsh: format_rational(&chsh_value(&s)?),
            state: BoxStateFile::from_state(&s),
        });
    }
    for id in NonlocalExtremalId::all() {
        let s = nonlocal_extremal(id);
        entries.push(Entry {
            name: nonlocal_label(id),
            chsh: format_rational(&chsh_value(&s)?),
            state: BoxStateFile::from_state(&s),
        });
    }
    match format {
        Format::Json => print_json(&entries)?,
        Format::Table => {
            println!("{:<8} {:>5}", "state", "chsh");
            for e in &entries {
                println!("{:<8} {:>5}", e.name, e.chsh);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn verify_ns(format: Format, file: &Path) -> Result<ExitCode> {
    let state = read_state(file)?;
    let report = state.check_no_signalling();
    match format {
        Format::Json => print_json(&serde_json::json!({
            "no_signalling": report.ok,
            "violations": report
                .violations
                .iter()
                .map(|v| serde_json::json!({
                    "receiver": v.receiver,
                    "receiver_inputs": v.receiver_inputs,
                    "receiver_outputs": v.receiver_outputs,
                    "sender_inputs": [&v.sender_inputs_a, &v.sender_inputs_b],
                    "values": [format_rational(&v.value_a), format_rational(&v.value_b)],
                }))
                .collect::<Vec<_>>(),
        }))?,
        Format::Table => {
            if report.ok {
                println!("no-signalling: ok");
            } else {
                println!("no-signalling: violated");
                for v in &report.violations {
                    println!(
                        "  receiver {:?} inputs {:?} outputs {:?}: {} vs {} for sender inputs {:?} / {:?}",
                        v.receiver,
                        v.receiver_inputs,
                        v.receiver_outputs,
                        format_rational(&v.value_a),
                        format_rational(&v.value_b),
                        v.sender_inputs_a,
                        v.sender_inputs_b,
                    );
                }
            }
        }
    }
    Ok(if report.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn membership(format: Format, file: &Path) -> Result<ExitCode> {
    let state = read_state(file)?;
    let decomposition = local_membership(&state)?;
    match format {
        Format::Json => print_json(&serde_json::json!({
            "local": decomposition.is_some(),
            "weights": decomposition.as_ref().map(|d| d
                .weights
                .iter()
                .map(|(id, w)| serde_json::json!({
                    "vertex": local_label(*id),
                    "weight": format_rational(w),
                }))
                .collect::<Vec<_>>()),
        }))?,
        Format::Table => match &decomposition {
            Some(d) => {
                println!("local: yes");
                for (id, w) in &d.weights {
                    if !w.is_zero() {
                        println!("  {:<8} {}", local_label(*id), format_rational(w));
                    }
                }
            }
            None => println!("local: no"),
        },
    }
    Ok(ExitCode::SUCCESS)
}

fn wiring_json(w: &Wiring) -> serde_json::Value {
    serde_json::json!({
        "first_box": w.first_box,
        "first_input": w.first_input as u8,
        "mu": w.mu as u8,
        "nu": w.nu as u8,
        "output_table": w.output_table.iter().map(|&b| b as u8).collect::<Vec<_>>(),
    })
}

fn wirings(format: Format, list: bool) -> Result<ExitCode> {
    let all = Wiring::all();
    let distinct = enumerate_wiring_couplers();
    match format {
        Format::Json => print_json(&serde_json::json!({
            "strategies": all.len(),
            "distinct_actions": distinct.len(),
            "list": if list {
                Some(all.iter().map(wiring_json).collect::<Vec<_>>())
            } else {
                None
            },
        }))?,
        Format::Table => {
            println!("strategies: {}", all.len());
            println!("distinct actions: {}", distinct.len());
            if list {
                for w in &all {
                    println!(
                        "  first_box={} first_input={} mu={} nu={} output_table={:?}",
                        w.first_box,
                        w.first_input as u8,
                        w.mu as u8,
                        w.nu as u8,
                        w.output_table.map(|b| b as u8),
                    );
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn swap_demo(
    format: Format,
    first_box: usize,
    lambda: bool,
    mu: bool,
    nu: bool,
) -> Result<ExitCode> {
    let outcomes = swapping_by_wiring(first_box, lambda, mu, nu)?;
    #[derive(Serialize)]
    struct Outcome {
        b1: usize,
        b2: usize,
        probability: String,
        collapsed_to: String,
        state: BoxStateFile,
    }
    let mut rows = Vec::new();
    for ((b1, b2), p, state) in &outcomes {
        let expected = expected_swapped_state(first_box, lambda, mu, nu, *b1, *b2);
        rows.push(Outcome {
            b1: *b1,
            b2: *b2,
            probability: format_rational(p),
            collapsed_to: local_label(expected),
            state: BoxStateFile::from_state(state),
        });
    }
    match format {
        Format::Json => print_json(&rows)?,
        Format::Table => {
            println!("{:<8} {:>12} {:<8}", "outcome", "probability", "state");
            for r in &rows {
                println!(
                    "({}, {})   {:>12} {:<8}",
                    r.b1, r.b2, r.probability, r.collapsed_to
                );
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn couplers(format: Format, verb: &CouplerVerb) -> Result<ExitCode> {
    match verb {
        CouplerVerb::Enumerate => {
            let h = build_coupler_polytope();
            let v = enumerate_vertices(&h)?;
            let dim = affine_dimension(&h)?;
            match format {
                Format::Json => print_json(&serde_json::json!({
                    "inequalities": h.inequalities.len(),
                    "dim": dim,
                    "vertices": v.vertices.len(),
                    "linearities": v.linearity_dirs.len(),
                    "vrep": VRepFile::from_vrep(&v),
                }))?,
                Format::Table => {
                    println!("inequalities: {}", h.inequalities.len());
                    println!("dim: {dim}");
                    println!("vertices: {}", v.vertices.len());
                    println!("linearities: {}", v.linearity_dirs.len());
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        CouplerVerb::Classify => {
            let report = classify_triviality()?;
            match format {
                Format::Json => print_json(&serde_json::json!({
                    "vertices": report.vertices.len(),
                    "non_trivial": report.non_trivial_count,
                    "histogram": report
                        .histogram
                        .iter()
                        .map(|(c, n)| serde_json::json!({"class": c.name(), "count": n}))
                        .collect::<Vec<_>>(),
                    "classes": report
                        .vertices
                        .iter()
                        .map(|v| serde_json::json!({
                            "chi0": v.chi0.iter().map(format_rational).collect::<Vec<_>>(),
                            "class": v.family.as_ref().map(|(c, _)| c.name()),
                            "wiring": v.wiring_equivalent.as_ref().map(wiring_json),
                        }))
                        .collect::<Vec<_>>(),
                }))?,
                Format::Table => {
                    println!("vertices: {}", report.vertices.len());
                    for (class, n) in &report.histogram {
                        println!("  {:<14} {n}", class.name());
                    }
                    println!("non-trivial: {}", report.non_trivial_count);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        CouplerVerb::Naive => {
            let report = analyze_naive_coupler();
            let (lower, forced) = &report.contradiction;
            match format {
                Format::Json => print_json(&serde_json::json!({
                    "feasible": report.local_rule_chi_feasible,
                    "noise_lower_bound": format_rational(lower),
                    "forced_value": format_rational(forced),
                    "affine_solution": report
                        .affine_solution
                        .iter()
                        .map(format_rational)
                        .collect::<Vec<_>>(),
                }))?,
                Format::Table => {
                    println!("feasible: {}", report.local_rule_chi_feasible);
                    println!(
                        "contradiction: P'(1) >= {} from the noise decomposition, = {} from the all-local decomposition",
                        format_rational(lower),
                        format_rational(forced)
                    );
                    println!(
                        "affine solution [P'(0), P'(1)]: [{}]",
                        report
                            .affine_solution
                            .iter()
                            .map(format_rational)
                            .collect::<Vec<_>>()
                            .join(", ")
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        CouplerVerb::Swap { coupler } => coupler_swap(format, *coupler),
    }
}

fn coupler_swap(format: Format, index: usize) -> Result<ExitCode> {
    use nsbox::catalog::standard_pr;
    let v = enumerate_vertices(&build_coupler_polytope())?;
    let chi0 = v
        .vertices
        .get(index)
        .ok_or_else(|| anyhow::anyhow!("coupler index {index} out of range 0..{}", v.vertices.len()))?;
    let coupler = Coupler::binary_from_chi0(chi0.clone())?;
    let four = standard_pr().tensor(&standard_pr());
    let joined = coupler.apply_embedded(&four, (1, 2))?;
    #[derive(Serialize)]
    struct Outcome {
        output: usize,
        probability: String,
        local: bool,
        state: BoxStateFile,
    }
    let mut rows = Vec::new();
    for b in 0..2 {
        let (p, conditioned) = match joined.condition(2, 0, b) {
            Ok(pair) => pair,
            Err(nsbox::Error::ZeroProbabilityOutcome { .. }) => continue,
            Err(e) => return Err(e.into()),
        };
        let local = local_membership(&conditioned)?.is_some();
        rows.push(Outcome {
            output: b,
            probability: format_rational(&p),
            local,
            state: BoxStateFile::from_state(&conditioned),
        });
    }
    match format {
        Format::Json => print_json(&rows)?,
        Format::Table => {
            println!("{:<7} {:>12} {:<6}", "output", "probability", "local");
            for r in &rows {
                println!("{:<7} {:>12} {:<6}", r.output, r.probability, r.local);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn polytope(format: Format, file: &Path, output: Option<&Path>) -> Result<ExitCode> {
    let text = std::fs::read_to_string(file)
        .with_context(|| format!("reading {}", file.display()))?;
    let hfile: HRepFile = serde_json::from_str(&text)
        .with_context(|| format!("parsing {}", file.display()))?;
    let h = hfile.to_hrep()?;
    let v = enumerate_vertices(&h)?;
    let vfile = VRepFile::from_vrep(&v);
    if let Some(path) = output {
        std::fs::write(path, serde_json::to_string_pretty(&vfile)?)
            .with_context(|| format!("writing {}", path.display()))?;
        return Ok(ExitCode::SUCCESS);
    }
    match format {
        Format::Json => print_json(&vfile)?,
        Format::Table => {
            println!("vertices: {}", v.vertices.len());
            println!("rays: {}", v.rays.len());
            println!("linearities: {}", v.linearity_dirs.len());
            for vertex in &v.vertices {
                println!(
                    "  [{}]",
                    vertex.iter().map(format_rational).collect::<Vec<_>>().join(", ")
                );
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn repro(format: Format) -> Result<ExitCode> {
    let ns = enumerate_vertices(&ns_polytope_hrep())?;
    let ns_dim = affine_dimension(&ns_polytope_hrep())?;
    let catalog: Vec<Vec<_>> = all_extremal_states().iter().map(|s| s.flatten()).collect();
    let mut enumerated = ns.vertices.clone();
    enumerated.sort();
    let mut expected = catalog.clone();
    expected.sort();
    let ns_match = enumerated == expected;

    let ch = build_coupler_polytope();
    let cv = enumerate_vertices(&ch)?;
    let c_dim = affine_dimension(&ch)?;
    let report = classify_triviality()?;

    let naive = analyze_naive_coupler();

    let mut swap_ok = true;
    for first_box in 0..2 {
        for bits in 0..8 {
            let (lambda, mu, nu) = (bits & 4 != 0, bits & 2 != 0, bits & 1 != 0);
            for ((b1, b2), p, state) in swapping_by_wiring(first_box, lambda, mu, nu)? {
                let expected =
                    local_extremal(expected_swapped_state(first_box, lambda, mu, nu, b1, b2));
                if p != nsbox::rational::rat(1, 4) || state != expected {
                    swap_ok = false;
                }
            }
        }
    }

    match format {
        Format::Json => print_json(&serde_json::json!({
            "ns_polytope": {
                "vertices": ns.vertices.len(),
                "dim": ns_dim,
                "matches_catalog": ns_match,
            },
            "coupler_polytope": {
                "inequalities": ch.inequalities.len(),
                "dim": c_dim,
                "vertices": cv.vertices.len(),
                "linearities": cv.linearity_dirs.len(),
            },
            "classification": {
                "histogram": report
                    .histogram
                    .iter()
                    .map(|(c, n)| serde_json::json!({"class": c.name(), "count": n}))
                    .collect::<Vec<_>>(),
                "non_trivial": report.non_trivial_count,
            },
            "naive_coupler": {
                "feasible": naive.local_rule_chi_feasible,
                "noise_lower_bound": format_rational(&naive.contradiction.0),
                "forced_value": format_rational(&naive.contradiction.1),
                "affine_solution": naive
                    .affine_solution
                    .iter()
                    .map(format_rational)
                    .collect::<Vec<_>>(),
            },
            "swapping_sweep_ok": swap_ok,
        }))?,
        Format::Table => {
            println!(
                "no-signalling polytope: {} vertices, dim {}, catalog match: {}",
                ns.vertices.len(),
                ns_dim,
                ns_match
            );
            println!(
                "coupler polytope: {} inequalities, dim {}, {} vertices, {} linearities",
                ch.inequalities.len(),
                c_dim,
                cv.vertices.len(),
                cv.linearity_dirs.len()
            );
            print!("classification:");
            for (class, n) in &report.histogram {
                print!(" {}={}", class.name(), n);
            }
            println!("; non-trivial: {}", report.non_trivial_count);
            println!(
                "naive coupler: feasible={}, lower bound {}, forced {}, affine solution [{}]",
                naive.local_rule_chi_feasible,
                format_rational(&naive.contradiction.0),
                format_rational(&naive.contradiction.1),
                naive
                    .affine_solution
                    .iter()
                    .map(format_rational)
                    .collect::<Vec<_>>()
                    .join(", ")
            );
            println!("swapping sweep: {}", if swap_ok { "ok" } else { "FAILED" });
        }
    }
    Ok(ExitCode::SUCCESS)
}
