//! Command-line front end. Every command prints one JSON report on stdout;
//! `--pretty` adds a human-readable table on stderr.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use gybe::finder::{
    check_dim_integrality, distinct_channels, eigenvalue_bound_l, find_gybe_objects, fp_dimensions,
    is_gybe_object, FpDims, GybeCertificate,
};
use gybe::fusion::{
    builtin_category, gen_so_odd_level2, parse_category, parse_label_list, relabel_so3_as_jk,
    CategoryData, FusionRing, ObjectExpr,
};
use gybe::linalg::{lcm_order, MatrixFile};
use gybe::rep::{assemble_R, braid_rep, tree_basis, Assembly};
use gybe::scalar::{DEFAULT_ORDER, ORDER_CAP};
use gybe::verify::{
    braid_relations_report, certify_eigenvalues, far_commutativity_report, group_closure,
    gybe_report, CheckReport, ClosureOrder, DEFAULT_CLOSURE_CAP,
};
use gybe::{CycloScalar, Error, ExactMatrix, Result};

pub const FIELD_ORDER_VAR: &str = "GYBE_FIELD_ORDER";

const JK6_PRINTED: &str = include_str!("../data/jk6_printed_r.json");
const ISING_PRINTED: &str = include_str!("../data/ising_printed_r.json");

const GENERAL_HELP: &str = "\
Every command writes a single JSON object on stdout. Exit status is 0 on
success, 1 when a mathematical check fails (the report is still written) and
2 for usage or data errors (one line on stderr).

Exact scalars are lists of terms {\"p\", \"q\", \"k\"} meaning the sum of
(p/q)·ζ^k with ζ = exp(2πi/N); matrix files are
{\"cyclotomic_order\": N, \"rows\", \"cols\", \"entries\": [[term...] ...]} in row-major
order. GYBE_FIELD_ORDER sets the N used for written scalars (default 24).";

#[derive(Debug, Parser)]
#[command(
    name = "gybe",
    version,
    about = "Exact generalized Yang-Baxter solutions from fusion category data"
)]
#[command(after_long_help = GENERAL_HELP)]
pub struct Cli {
    /// Also print a human-readable table on stderr.
    #[arg(long, global = true)]
    pub pretty: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load and validate a category or fusion-ring file.
    #[command(
        after_long_help = "Output: {\"command\": \"validate\", \"valid\": true, \"name\", \
\"labels\": [..], \"rank\", \"unit\", \"unitary\", \"r_symbols\": count, \"f_matrices\": count, \
\"fp_dimensions\": {label: {\"value\", \"exact\", \"error_bound\"}}}"
    )]
    Validate { category: PathBuf },

    /// Emit the fusion ring of SO(2r+1) at level 2.
    #[command(name = "gen-so")]
    #[command(
        after_long_help = "Output: the category file {\"name\", \"cyclotomic_order\", \"labels\", \
\"unit\", \"dual\", \"fusion\": [{\"a\", \"b\", \"c\": [..]}], \"R\": [], \"F\": []}. With --out the \
file is written there and the report is {\"command\": \"gen-so\", \"out\", \"labels\"}."
    )]
    GenSo {
        #[arg(long)]
        r: usize,
        /// Rename the labels of the r = 1 ring to 0..4.
        #[arg(long, value_enum)]
        relabel: Option<Relabel>,
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Search for gYBE objects X with X ⊗ i = ⊕ S for all i in S.
    #[command(name = "find-gybe")]
    #[command(
        after_long_help = "Output: {\"command\": \"find-gybe\", \"max_summands\", \
\"certificates\": [{\"object\": [..], \"set\": [..], \"d\", \"decompositions\": {label: [..]}, \
\"summands_outside_set\": [..], \"eigenvalue_bound_l\", \"distinct_channels\", \
\"dimension_integral\"}]}"
    )]
    FindGybe {
        category: PathBuf,
        #[arg(long, default_value_t = 1)]
        max_summands: usize,
    },

    /// Assemble the (d,3,1) R-matrix for an object and label set.
    #[command(name = "build-r")]
    #[command(
        after_long_help = "Output: {\"command\": \"build-r\", \"certificate\": {..}, \"path\", \
\"basis\": [..], \"sectors\": [[i, j] ..], \"blocks\": [matrix ..], \"permutation\": matrix, \
\"matrix\": matrix}. With --out the R-matrix file is also written there."
    )]
    BuildR {
        category: PathBuf,
        /// Comma-separated summands of X.
        #[arg(long)]
        object: String,
        /// Comma-separated label set S, in basis order.
        #[arg(long)]
        set: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Check the gYBE, and optionally far commutativity and braid relations.
    #[command(
        after_long_help = "Output: {\"command\": \"verify\", \"result\": bool, \"checks\": \
[{\"check\", \"result\", \"dimensions\", \"witness\": {\"relation\", \"indices\": [relation, row, col]}}]}. \
The witness is present only for failed checks."
    )]
    Verify {
        matrix: PathBuf,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        far_comm: bool,
        /// Also check the braid relations of the B_n representation.
        #[arg(long, value_name = "N")]
        braid_rep: Option<usize>,
    },

    /// Certify eigenvalues exactly.
    #[command(
        after_long_help = "Output: {\"command\": \"eigs\", \"source\": \"category\" | \"numeric\", \
\"candidates\": count, \"certified\": [scalar ..], \"certified_decimal\": [[re, im] ..], \"count\", \
\"annihilates\": bool, \"eigenvalue_bound_l\" (with --category)}. Candidates are braiding scalars of \
the object when --category is given, otherwise numerically proposed roots of unity."
    )]
    Eigs {
        matrix: PathBuf,
        #[arg(long, requires = "object")]
        category: Option<PathBuf>,
        #[arg(long, requires = "category")]
        object: Option<String>,
    },

    /// Enumerate the group generated by the braid generators.
    #[command(name = "group-order")]
    #[command(
        after_long_help = "Output: {\"check\": \"group_closure\", \"result\": order | \
\"exceeded_cap\", \"dimensions\", \"generator_count\", \"projective\", \"cap\", \"closure_verified\", \
\"element_sample\": [matrix ..]}. Exit status 1 when the cap is exceeded."
    )]
    GroupOrder {
        matrix: PathBuf,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        /// Identify matrices that differ by a scalar.
        #[arg(long)]
        projective: bool,
        #[arg(long, default_value_t = DEFAULT_CLOSURE_CAP)]
        cap: usize,
    },

    /// Rebuild a worked example from built-in data and compare with the stored matrix.
    #[command(
        after_long_help = "Output: {\"command\": \"demo\", \"example\", \"certificate\", \"path\", \
\"basis\", \"sectors\", \"blocks\", \"permutation\", \"matrix\", \"matches_printed\": bool, \
\"eigenvalues\": {..}, \"eigenvalue_bound_l\", \"checks\": [..], \"result\": bool}"
    )]
    Demo {
        #[arg(value_enum)]
        example: Example,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Relabel {
    Jk,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Example {
    Jk6,
    Ising,
}

struct Outcome {
    passed: bool,
    report: Value,
    table: String,
}

impl Outcome {
    fn ok(report: Value, table: String) -> Self {
        Outcome {
            passed: true,
            report,
            table,
        }
    }
}

pub fn run(cli: Cli) -> u8 {
    match execute(cli.command) {
        Ok(outcome) => {
            // a closed pipe downstream is not our failure
            let mut stdout = std::io::stdout().lock();
            let _ = writeln!(stdout, "{}", outcome.report).and_then(|_| stdout.flush());
            if cli.pretty {
                eprint!("{}", outcome.table);
            }
            if outcome.passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn field_order() -> Result<u32> {
    match std::env::var(FIELD_ORDER_VAR) {
        Err(_) => Ok(DEFAULT_ORDER),
        Ok(text) => match text.trim().parse::<u32>() {
            Ok(n) if (1..=ORDER_CAP).contains(&n) => Ok(n),
            _ => Err(Error::InvalidArgument(format!(
                "{FIELD_ORDER_VAR} must be an integer in 1..={ORDER_CAP}, got '{text}'"
            ))),
        },
    }
}

fn read_matrix(path: &Path) -> Result<ExactMatrix> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let file: MatrixFile = serde_json::from_str(&text)?;
    ExactMatrix::from_file(&file)
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn matrix_json(m: &ExactMatrix, order: u32) -> Result<Value> {
    Ok(serde_json::to_value(m.to_file(Some(order))?)?)
}

fn execute(command: Command) -> Result<Outcome> {
    let order = field_order()?;
    match command {
        Command::Validate { category } => validate(&category),
        Command::GenSo { r, relabel, out } => gen_so(r, relabel, out.as_deref(), order),
        Command::FindGybe {
            category,
            max_summands,
        } => find_gybe(&category, max_summands),
        Command::BuildR {
            category,
            object,
            set,
            out,
        } => build_r(&category, &object, &set, out.as_deref(), order),
        Command::Verify {
            matrix,
            d,
            m,
            far_comm,
            braid_rep,
        } => verify(&matrix, d, m, far_comm, braid_rep),
        Command::Eigs {
            matrix,
            category,
            object,
        } => eigs(&matrix, category.as_deref().zip(object.as_deref()), order),
        Command::GroupOrder {
            matrix,
            d,
            n,
            projective,
            cap,
        } => group_order(&matrix, d, n, projective, cap, order),
        Command::Demo { example } => demo(example, order),
    }
}

fn validate(path: &Path) -> Result<Outcome> {
    let cat = parse_category(path)?;
    let ring = cat.ring();
    let dims = fp_dimensions(ring)?;
    let report = json!({
        "command": "validate",
        "valid": true,
        "name": cat.name(),
        "labels": ring.names(),
        "rank": ring.rank(),
        "unit": ring.name(ring.unit()),
        "unitary": cat.is_unitary(),
        "r_symbols": cat.r_symbols().len(),
        "f_matrices": cat.f_matrices().len(),
        "fp_dimensions": dims.to_json(ring),
    });
    let mut table = format!("{cat}\n");
    for (l, d) in dims.iter() {
        table.push_str(&format!("  d({}) = {:.12}\n", ring.name(l), d.value));
    }
    Ok(Outcome::ok(report, table))
}

fn gen_so(r: usize, relabel: Option<Relabel>, out: Option<&Path>, order: u32) -> Result<Outcome> {
    let mut ring = gen_so_odd_level2(r)?;
    let mut name = format!("so{}_2", 2 * r + 1);
    if let Some(Relabel::Jk) = relabel {
        ring = relabel_so3_as_jk(&ring)?;
        name.push_str("_jk");
    }
    let file = ring.to_file(&name, order);
    let table = format!(
        "{name}: {} labels: {}\n",
        ring.rank(),
        ring.names().join(", ")
    );
    let report = match out {
        Some(path) => {
            write_json(path, &file)?;
            json!({"command": "gen-so", "out": path, "labels": ring.names()})
        }
        None => serde_json::to_value(&file)?,
    };
    Ok(Outcome::ok(report, table))
}

fn certificate_json(ring: &FusionRing, cert: &GybeCertificate, dims: &FpDims) -> Value {
    let mut v = cert.to_json(ring);
    v["eigenvalue_bound_l"] = json!(eigenvalue_bound_l(ring, cert.object()));
    v["distinct_channels"] = json!(distinct_channels(ring, cert.object()));
    v["dimension_integral"] = json!(check_dim_integrality(cert, dims));
    v
}

fn find_gybe(path: &Path, max_summands: usize) -> Result<Outcome> {
    let cat = parse_category(path)?;
    let ring = cat.ring();
    let dims = fp_dimensions(ring)?;
    let certs = find_gybe_objects(ring, max_summands)?;
    let mut table = format!("{} certificate(s)\n", certs.len());
    for c in &certs {
        table.push_str(&format!(
            "  X = {}  S = {{{}}}\n",
            c.object().names(ring).join("+"),
            c.set()
                .iter()
                .map(|&l| ring.name(l))
                .collect::<Vec<_>>()
                .join(", ")
        ));
    }
    let report = json!({
        "command": "find-gybe",
        "max_summands": max_summands,
        "certificates": certs.iter().map(|c| certificate_json(ring, c, &dims)).collect::<Vec<_>>(),
    });
    Ok(Outcome::ok(report, table))
}

fn certify(cat: &CategoryData, object: &str, set: &str) -> Result<GybeCertificate> {
    let ring = cat.ring();
    let x = ObjectExpr::parse(ring, object)?;
    let s = parse_label_list(ring, set)?;
    is_gybe_object(ring, &x, &s).map_err(|refusal| {
        Error::InvalidArgument(format!("not a gYBE pair: {}", refusal.describe(ring)))
    })
}

fn assembly_json(
    cat: &CategoryData,
    cert: &GybeCertificate,
    asm: &Assembly,
    order: u32,
) -> Result<Value> {
    let ring = cat.ring();
    let basis = tree_basis(cert, 2)?;
    let sectors: Vec<[&str; 2]> = asm
        .sectors
        .iter()
        .map(|&(i, j)| [ring.name(i), ring.name(j)])
        .collect();
    Ok(json!({
        "certificate": cert.to_json(ring),
        "path": asm.path,
        "basis": basis.names(ring),
        "sectors": sectors,
        "blocks": asm.blocks.iter().map(|b| matrix_json(b, order)).collect::<Result<Vec<_>>>()?,
        "permutation": matrix_json(&asm.permutation, order)?,
        "matrix": matrix_json(&asm.r, order)?,
    }))
}

fn assembly_table(cat: &CategoryData, cert: &GybeCertificate, asm: &Assembly) -> Result<String> {
    let ring = cat.ring();
    let basis = tree_basis(cert, 2)?;
    let mut table = String::new();
    for ((i, j), block) in asm.sectors.iter().zip(&asm.blocks) {
        table.push_str(&format!(
            "block ({}, {}):\n{block}",
            ring.name(*i),
            ring.name(*j)
        ));
    }
    table.push_str(&format!("P:\n{}", asm.permutation));
    table.push_str(&format!(
        "basis: {}\nR:\n{}",
        basis.names(ring).join(" "),
        asm.r
    ));
    Ok(table)
}

fn build_r(
    path: &Path,
    object: &str,
    set: &str,
    out: Option<&Path>,
    order: u32,
) -> Result<Outcome> {
    let cat = parse_category(path)?;
    let cert = certify(&cat, object, set)?;
    let asm = assemble_R(&cat, &cert)?;
    let mut report = assembly_json(&cat, &cert, &asm, order)?;
    report["command"] = json!("build-r");
    if let Some(out) = out {
        write_json(out, &asm.r.to_file(Some(order))?)?;
        report["out"] = json!(out);
    }
    let table = assembly_table(&cat, &cert, &asm)?;
    Ok(Outcome::ok(report, table))
}

fn checks_table(checks: &[CheckReport]) -> String {
    checks
        .iter()
        .map(|c| {
            let verdict = if c.result { "pass" } else { "FAIL" };
            let witness = c
                .witness
                .as_ref()
                .map(|w| format!("  ({} at {:?})", w.relation, w.indices))
                .unwrap_or_default();
            format!(
                "{:<20} {:>6}  dim {}{witness}\n",
                c.check, verdict, c.dimensions
            )
        })
        .collect()
}

fn run_checks(
    r: &ExactMatrix,
    d: usize,
    m: usize,
    far_comm: bool,
    braid: Option<usize>,
) -> Result<Vec<CheckReport>> {
    let mut checks = vec![gybe_report(r, d, m)?];
    if far_comm {
        checks.push(far_commutativity_report(r, d, m)?);
    }
    if let Some(n) = braid {
        if m != 3 {
            return Err(Error::InvalidArgument("--braid-rep needs m = 3".into()));
        }
        checks.push(braid_relations_report(&braid_rep(r, d, n)?)?);
    }
    Ok(checks)
}

fn verify(
    path: &Path,
    d: usize,
    m: usize,
    far_comm: bool,
    braid: Option<usize>,
) -> Result<Outcome> {
    let r = read_matrix(path)?;
    let checks = run_checks(&r, d, m, far_comm, braid)?;
    let passed = checks.iter().all(|c| c.result);
    Ok(Outcome {
        passed,
        report: json!({
            "command": "verify",
            "result": passed,
            "checks": checks.iter().map(CheckReport::to_json).collect::<Vec<_>>(),
        }),
        table: checks_table(&checks),
    })
}

/// Braiding scalars `R^{ab}_c` over pairs of summands, without repeats.
fn braiding_candidates(cat: &CategoryData, x: &ObjectExpr) -> Vec<CycloScalar> {
    let ring = cat.ring();
    let mut out: Vec<CycloScalar> = Vec::new();
    for &a in x.summands() {
        for &b in x.summands() {
            for &c in ring.fuse(a, b) {
                if let Ok(v) = cat.r_symbol(a, b, c) {
                    if !out.contains(v) {
                        out.push(v.clone());
                    }
                }
            }
        }
    }
    out
}

fn eigs(path: &Path, category: Option<(&Path, &str)>, order: u32) -> Result<Outcome> {
    let r = read_matrix(path)?;
    let (source, candidates, bound) = match category {
        Some((cat_path, object)) => {
            let cat = parse_category(cat_path)?;
            let x = ObjectExpr::parse(cat.ring(), object)?;
            let bound = eigenvalue_bound_l(cat.ring(), &x);
            ("category", braiding_candidates(&cat, &x), Some(bound))
        }
        None => (
            "numeric",
            r.propose_roots_of_unity(lcm_order(order, r.order())?)?,
            None,
        ),
    };
    let result = certify_eigenvalues(&r, &candidates)?;
    let mut report = result.to_json(Some(order))?;
    report["command"] = json!("eigs");
    report["source"] = json!(source);
    report["candidates"] = json!(candidates.len());
    if let Some(l) = bound {
        report["eigenvalue_bound_l"] = json!(l);
    }
    let mut table = format!(
        "{} of {} candidate(s) certified ({source})\n",
        result.certified.len(),
        candidates.len()
    );
    for v in &result.certified {
        table.push_str(&format!("  {v}\n"));
    }
    table.push_str(&format!("annihilates: {}\n", result.annihilates));
    Ok(Outcome {
        passed: result.annihilates,
        report,
        table,
    })
}

fn group_order(
    path: &Path,
    d: usize,
    n: usize,
    projective: bool,
    cap: usize,
    order: u32,
) -> Result<Outcome> {
    let r = read_matrix(path)?;
    let rep = braid_rep(&r, d, n)?;
    let report = group_closure(&rep.generators, cap, projective)?;
    let passed = report.closure_verified && matches!(report.order, ClosureOrder::Finite(_));
    let shown = match report.order {
        ClosureOrder::Finite(k) => k.to_string(),
        ClosureOrder::ExceededCap => format!("more than {cap}"),
    };
    let mode = if projective { "projective" } else { "linear" };
    let table = format!(
        "{mode} closure of {} generator(s): order {shown}\n",
        report.generator_count
    );
    Ok(Outcome {
        passed,
        report: report.to_json(Some(order))?,
        table,
    })
}

fn demo(example: Example, order: u32) -> Result<Outcome> {
    let (name, object, set, printed) = match example {
        Example::Jk6 => ("jk6", "2", "1,3", JK6_PRINTED),
        Example::Ising => ("ising", "1,psi", "1,psi", ISING_PRINTED),
    };
    let cat = builtin_category(name)?;
    let cert = certify(&cat, object, set)?;
    let asm = assemble_R(&cat, &cert)?;
    let printed = ExactMatrix::from_file(&serde_json::from_str(printed)?)?;
    let matches = asm.r == printed;

    let d = cert.d();
    let checks = run_checks(&asm.r, d, 3, true, Some(3))?;
    let candidates = braiding_candidates(&cat, cert.object());
    let eigen = certify_eigenvalues(&asm.r, &candidates)?;
    let bound = eigenvalue_bound_l(cat.ring(), cert.object());
    let passed = matches && eigen.annihilates && checks.iter().all(|c| c.result);

    let mut report = assembly_json(&cat, &cert, &asm, order)?;
    report["command"] = json!("demo");
    report["example"] = json!(name);
    report["matches_printed"] = json!(matches);
    report["eigenvalues"] = eigen.to_json(Some(order))?;
    report["eigenvalue_bound_l"] = json!(bound);
    report["checks"] = json!(checks.iter().map(CheckReport::to_json).collect::<Vec<_>>());
    report["result"] = json!(passed);

    let mut table = assembly_table(&cat, &cert, &asm)?;
    table.push_str(&format!("matches printed matrix: {matches}\n"));
    table.push_str("eigenvalues:");
    for v in &eigen.certified {
        table.push_str(&format!(" {v}"));
    }
    table.push_str(&format!("  (bound l = {bound})\n"));
    table.push_str(&checks_table(&checks));
    Ok(Outcome {
        passed,
        report,
        table,
    })
}
