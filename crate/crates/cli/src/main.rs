use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use grouptensor::conjugacy::conjugacy_classes;
use grouptensor::matching::{
    exact_max_matching, gowers_matching_upper, heuristic_matching, quasirandom_degree, verify_matching, Matching,
    MatchingFile,
};
use grouptensor::modrep::{radical_trace_chain, semisimple_summary};
use grouptensor::report::{
    bounds_report, gap_eval, gap_scan, quasirandom_probe, render, to_json_envelope, Format, GOWERS_CONSTANT,
};
use grouptensor::slicerank::{
    build_group_tensor, c_p, clp_count, exact_slice_rank, sr_lower_from_matching, vanishing_triple_to_slices, Tensor3,
};
use grouptensor::{Config, ElementId, Error, Group, Result};

#[derive(Parser)]
#[command(name = "grouptensor", version, about = "Group algebras, matchings and slice-rank bounds")]
struct Cli {
    #[command(flatten)]
    caps: CapArgs,
    #[command(subcommand)]
    command: Command,
}

/// Overrides for the caps read from `GROUPTENSOR_CONFIG`.
#[derive(Args)]
struct CapArgs {
    /// Largest group that may be constructed
    #[arg(long, global = true)]
    max_group_order: Option<usize>,
    /// Largest group for conjugacy-class enumeration
    #[arg(long, global = true)]
    conjugacy_cap: Option<usize>,
    /// Largest group whose regular module is chopped
    #[arg(long, global = true)]
    modrep_cap: Option<usize>,
    /// Largest group whose multiplication tensor is built
    #[arg(long, global = true)]
    tensor_cap: Option<usize>,
    /// Largest group for exact matching search
    #[arg(long, global = true)]
    exact_matching_cap: Option<usize>,
    /// Largest group for the trace-chain oracle
    #[arg(long, global = true)]
    trace_chain_cap: Option<usize>,
    /// Largest p^n for subspace enumeration
    #[arg(long, global = true)]
    subspace_guard: Option<u64>,
    /// Random elements tried per block before chopping gives up
    #[arg(long, global = true)]
    chop_retry_budget: Option<usize>,
}

impl CapArgs {
    fn apply(&self, cfg: &mut Config) {
        macro_rules! set {
            ($($f:ident),*) => { $(if let Some(v) = self.$f { cfg.$f = v; })* };
        }
        set!(
            max_group_order,
            conjugacy_cap,
            modrep_cap,
            tensor_cap,
            exact_matching_cap,
            trace_chain_cap,
            subspace_guard,
            chop_retry_budget
        );
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build a group and print its basic data.
    Group {
        #[arg(long)]
        group: String,
        /// Also list every element code with its order.
        #[arg(long)]
        elements: bool,
    },
    /// Conjugacy classes, optionally with the ell-regular count.
    Classes {
        #[arg(long)]
        group: String,
        #[arg(long)]
        ell: Option<u64>,
    },
    /// Simple modules of F_ell[G] and the semisimple quotient dimension.
    Semisimple {
        #[arg(long)]
        group: String,
        #[arg(long)]
        ell: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Radical dimension from the trace-chain oracle (small groups only).
    RadicalOracle {
        #[arg(long)]
        group: String,
        #[arg(long)]
        ell: u32,
    },
    /// Multiplicative 3-matchings.
    Matching {
        #[command(subcommand)]
        action: MatchingCmd,
    },
    /// Slice-rank bounds and exact slice rank.
    Slicerank {
        #[command(subcommand)]
        action: SlicerankCmd,
    },
    /// Count of F_p^n vectors with coordinate sum at most (p-1)n/3, and the
    /// resulting slice-rank bound.
    Clp {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
    },
    /// The exponential growth constant c_p.
    Cp {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Per-group bounds table.
    Report {
        #[arg(long, required = true, num_args = 1..)]
        group: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form slice-rank lower bound against the Gowers matching bound
    /// for psl2:p.
    Gap {
        #[arg(long, required_unless_present = "scan", conflicts_with = "scan")]
        p: Option<u64>,
        /// Scan every odd prime up to --limit for the first ratio above 1.
        #[arg(long)]
        scan: bool,
        #[arg(long, default_value_t = 100_003)]
        limit: u64,
    },
    /// Minimum over ell of dim F_ell[G]/J divided by the order.
    Probe {
        #[arg(long, required = true, num_args = 1..)]
        groups: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum MatchingCmd {
    /// Exact maximum matching by branch and bound.
    Exact {
        #[arg(long)]
        group: String,
        /// Write the matching to this file.
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Randomized local search.
    Heuristic {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        iters: usize,
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Check a matching file.
    Verify {
        #[arg(long)]
        file: PathBuf,
        /// Must agree with the group named in the file when given.
        #[arg(long)]
        group: Option<String>,
    },
    /// Gowers upper bound.
    Bound {
        #[arg(long)]
        group: String,
    },
}

#[derive(Subcommand)]
enum SlicerankCmd {
    /// Lower bounds on SR(T_{F_ell[G]}) from the semisimple quotient and a
    /// heuristic matching.
    Bounds {
        #[arg(long)]
        group: String,
        #[arg(long)]
        ell: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exact slice rank of a tensor file.
    Exact {
        #[arg(long)]
        tensor: PathBuf,
    },
    /// Write the multiplication tensor of F_ell[G].
    Tensor {
        #[arg(long)]
        group: String,
        #[arg(long)]
        ell: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn build(desc: &str, cfg: &Config) -> Result<Arc<Group>> {
    Group::from_descriptor(desc, cfg).map(Arc::new)
}

fn write_out(text: &str, out: Option<&Path>) -> Result<()> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn print_json<T: Serialize>(body: &T) -> Result<()> {
    write_out(&to_json_envelope(body)?, None)
}

#[derive(Serialize)]
struct ElementOut {
    code: ElementId,
    order: usize,
}

#[derive(Serialize)]
struct GroupOut {
    group: String,
    order: usize,
    abelian: bool,
    generators: Vec<ElementId>,
    identity: ElementId,
    #[serde(skip_serializing_if = "Option::is_none")]
    elements: Option<Vec<ElementOut>>,
}

#[derive(Serialize)]
struct ClassOut {
    rep: ElementId,
    size: usize,
    order: usize,
}

#[derive(Serialize)]
struct ClassesOut {
    group: String,
    order: usize,
    classes: Vec<ClassOut>,
    ell: Option<u64>,
    ell_regular_count: Option<usize>,
}

#[derive(Serialize)]
struct SimpleOut {
    d: usize,
    e: usize,
    mult: usize,
}

#[derive(Serialize)]
struct SemisimpleOut {
    group: String,
    ell: u32,
    seed: u64,
    simples: Vec<SimpleOut>,
    brauer_count: usize,
    dim_semisimple: usize,
    dim_radical: usize,
}

#[derive(Serialize)]
struct RadicalOut {
    group: String,
    ell: u32,
    order: usize,
    dim_radical: usize,
    dim_semisimple: usize,
}

#[derive(Serialize)]
struct MatchingOut {
    group: String,
    method: &'static str,
    m: usize,
    #[serde(flatten)]
    matching: Matching,
}

#[derive(Serialize)]
struct VerifyOut {
    group: String,
    m: usize,
    valid: bool,
    violation: Option<(usize, usize, usize)>,
}

#[derive(Serialize)]
struct BoundOut {
    group: String,
    order: usize,
    #[serde(rename = "D_lower")]
    d_lower: u128,
    matching_upper: u128,
    vacuous: bool,
    gowers_constant: &'static str,
}

#[derive(Serialize)]
struct SlicerankBoundsOut {
    group: String,
    ell: u32,
    order: usize,
    semisimple_lower: usize,
    matching_lower: usize,
    lower: usize,
    upper: usize,
}

#[derive(Serialize)]
struct SliceOut {
    mode: usize,
    covector: Vec<u32>,
}

#[derive(Serialize)]
struct ExactOut {
    dims: [usize; 3],
    char: u32,
    slice_rank: usize,
    codims: [usize; 3],
    slices: Vec<SliceOut>,
}

#[derive(Serialize)]
struct ClpOut {
    p: u64,
    n: u32,
    count: u128,
    bound: u128,
}

#[derive(Serialize)]
struct CpOut {
    p: u64,
    tol: f64,
    c_p: f64,
}

#[derive(Serialize)]
struct Rows<T: Serialize> {
    rows: Vec<T>,
}

fn run(cli: Cli) -> Result<()> {
    let mut cfg = Config::from_env()?;
    cli.caps.apply(&mut cfg);
    match cli.command {
        Command::Group { group, elements } => {
            let g = build(&group, &cfg)?;
            print_json(&GroupOut {
                group: g.descriptor(),
                order: g.order(),
                abelian: g.is_abelian(),
                generators: g.generators(),
                identity: g.identity(),
                elements: elements.then(|| {
                    (0..g.order())
                        .map(|i| ElementOut {
                            code: g.element(i),
                            order: g.order_idx(i),
                        })
                        .collect()
                }),
            })
        }
        Command::Classes { group, ell } => {
            let g = build(&group, &cfg)?;
            if let Some(l) = ell {
                if !grouptensor::arith::is_prime(l) {
                    return Err(Error::Parameter(format!("{l} is not prime")));
                }
            }
            let data = conjugacy_classes(&g, &cfg)?;
            print_json(&ClassesOut {
                group: g.descriptor(),
                order: g.order(),
                classes: data
                    .classes
                    .iter()
                    .map(|c| ClassOut {
                        rep: g.element(c.rep),
                        size: c.size,
                        order: c.element_order,
                    })
                    .collect(),
                ell,
                ell_regular_count: ell.map(|l| data.ell_regular_count(l)),
            })
        }
        Command::Semisimple { group, ell, seed } => {
            let g = build(&group, &cfg)?;
            let s = semisimple_summary(&g, ell, seed, &cfg)?;
            print_json(&SemisimpleOut {
                group: s.group.clone(),
                ell,
                seed,
                simples: s
                    .simples
                    .iter()
                    .map(|x| SimpleOut {
                        d: x.d,
                        e: x.e,
                        mult: x.mult,
                    })
                    .collect(),
                brauer_count: s.brauer_count(),
                dim_semisimple: s.dim_semisimple,
                dim_radical: s.dim_radical,
            })
        }
        Command::RadicalOracle { group, ell } => {
            let g = build(&group, &cfg)?;
            let r = radical_trace_chain(&g, ell, &cfg)?;
            print_json(&RadicalOut {
                group: g.descriptor(),
                ell,
                order: g.order(),
                dim_radical: r,
                dim_semisimple: g.order() - r,
            })
        }
        Command::Matching { action } => run_matching(action, &cfg),
        Command::Slicerank { action } => run_slicerank(action, &cfg),
        Command::Clp { p, n } => {
            let (count, bound) = clp_count(p, n)?;
            print_json(&ClpOut { p, n, count, bound })
        }
        Command::Cp { p, tol } => print_json(&CpOut { p, tol, c_p: c_p(p, tol)? }),
        Command::Report {
            group,
            seed,
            format,
            out,
        } => {
            let format: Format = format.parse()?;
            let reports = group
                .iter()
                .map(|d| bounds_report(&build(d, &cfg)?, seed, &cfg))
                .collect::<Result<Vec<_>>>()?;
            write_out(&render(&reports, format)?, out.as_deref())
        }
        Command::Gap { p, scan, limit } => {
            if scan {
                print_json(&gap_scan(limit)?)
            } else {
                print_json(&gap_eval(p.expect("clap requires --p without --scan"))?)
            }
        }
        Command::Probe { groups, seed } => {
            let gs = groups.iter().map(|d| build(d, &cfg)).collect::<Result<Vec<_>>>()?;
            print_json(&Rows {
                rows: quasirandom_probe(&gs, seed, &cfg),
            })
        }
    }
}

fn run_matching(action: MatchingCmd, cfg: &Config) -> Result<()> {
    let emit = |g: &Group, method, matching: Matching, file: Option<PathBuf>| {
        if let Some(path) = file {
            MatchingFile {
                group: g.descriptor(),
                matching: matching.clone(),
            }
            .write(&path)?;
        }
        print_json(&MatchingOut {
            group: g.descriptor(),
            method,
            m: matching.m(),
            matching,
        })
    };
    match action {
        MatchingCmd::Exact { group, file } => {
            let g = build(&group, cfg)?;
            let (_, m) = exact_max_matching(&g, cfg)?;
            emit(&g, "exact", m, file)
        }
        MatchingCmd::Heuristic {
            group,
            seed,
            iters,
            file,
        } => {
            let g = build(&group, cfg)?;
            let m = heuristic_matching(&g, seed, iters)?;
            emit(&g, "heuristic", m, file)
        }
        MatchingCmd::Verify { file, group } => {
            let mf = MatchingFile::read(&file)?;
            if let Some(d) = group {
                let named: grouptensor::Family = d.parse()?;
                if named.to_string() != mf.group {
                    return Err(Error::Parameter(format!(
                        "--group {d} differs from the file's group {}",
                        mf.group
                    )));
                }
            }
            let g = build(&mf.group, cfg)?;
            let violation = verify_matching(&g, &mf.matching)?;
            print_json(&VerifyOut {
                group: g.descriptor(),
                m: mf.matching.m(),
                valid: violation.is_none(),
                violation,
            })
        }
        MatchingCmd::Bound { group } => {
            let g = build(&group, cfg)?;
            let d = quasirandom_degree(&g);
            let upper = gowers_matching_upper(g.order() as u128, d)?;
            print_json(&BoundOut {
                group: g.descriptor(),
                order: g.order(),
                d_lower: d,
                matching_upper: upper,
                vacuous: upper >= g.order() as u128,
                gowers_constant: GOWERS_CONSTANT,
            })
        }
    }
}

fn run_slicerank(action: SlicerankCmd, cfg: &Config) -> Result<()> {
    match action {
        SlicerankCmd::Bounds { group, ell, seed } => {
            let g = build(&group, cfg)?;
            let t = build_group_tensor(&g, ell, cfg)?;
            let semisimple = semisimple_summary(&g, ell, seed, cfg)?.dim_semisimple;
            let m = heuristic_matching(&g, seed, 200)?;
            let (matching_lower, _) = sr_lower_from_matching(&g, &t, &m)?;
            print_json(&SlicerankBoundsOut {
                group: g.descriptor(),
                ell,
                order: g.order(),
                semisimple_lower: semisimple,
                matching_lower,
                lower: semisimple.max(matching_lower),
                upper: g.order(),
            })
        }
        SlicerankCmd::Exact { tensor } => {
            let t = Tensor3::read(&tensor)?;
            let (v, w) = exact_slice_rank(&t, cfg)?;
            let slices = vanishing_triple_to_slices(&t, &w)?;
            let dims = t.dims();
            print_json(&ExactOut {
                dims,
                char: t.p(),
                slice_rank: v,
                codims: [0, 1, 2].map(|i| dims[i] - w.v[i].dim()),
                slices: slices
                    .into_iter()
                    .map(|s| SliceOut {
                        mode: s.mode,
                        covector: s.covector,
                    })
                    .collect(),
            })
        }
        SlicerankCmd::Tensor { group, ell, out } => {
            let g = build(&group, cfg)?;
            let t = build_group_tensor(&g, ell, cfg)?;
            write_out(&t.to_json()?, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
