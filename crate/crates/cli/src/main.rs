use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use grasscov::bounds::{identity_checks, Bounds, Variant};
use grasscov::codes::{dualize, is_covering_code, is_multiple_code, profile, GrassCode};
use grasscov::formats::{format_grasscode, parse_strings, read_grasscode, read_matrix, read_subspace};
use grasscov::gfq::make_field;
use grasscov::grassmann::{enumerate_grassmannian, gaussian_binomial, GrassmannIter};
use grasscov::hamming::{
    covering_hierarchy, exact_set_packing, generalized_weights, generator_to_grasscode, greedy_set_packing,
    parity_to_covering, set_packing_check, turan_values, LinearCode,
};
use grasscov::netsim::{assign_scalar, nonlinear_check, run, MessagePlan, NetworkInstance, DEFAULT_SAMPLES};
use grasscov::search::{
    exact_max_covering, exact_max_multiple, exact_min_cover, greedy_covering_code, greedy_max_multiple,
    spread_construct, Mode, SearchConfig, SearchResult,
};
use grasscov::store::{Provenance, Quantity, ResultsStore, Side, StoreKey};
use grasscov::Error;

#[derive(Parser)]
#[command(
    name = "grasscov",
    version,
    about = "Covering and multiple Grassmannian codes: bounds, searches, checks and network-coding simulation"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// Print the full JSON report on stdout instead of a summary
    #[arg(long, global = true)]
    json: bool,
    /// Also write the JSON report to this file
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Branch-and-bound node budget
    #[arg(long, global = true, default_value_t = 100_000_000)]
    budget_nodes: u64,
    /// Wall-clock budget for searches
    #[arg(long, global = true, default_value_t = 600.0)]
    budget_seconds: f64,
    /// Seed for every randomized step
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Results store (JSON file); without one, the built-in literature table is used
    #[arg(long, global = true, env = "GRASSCOV_STORE", value_name = "FILE")]
    store: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Upper and lower bounds on A_q(n,k,t;λ) or B_q(n,k,δ;α)
    Bounds(BoundsArgs),
    /// Search for codes, or build a spread
    Search(SearchArgs),
    /// Check a code's covering and multiple parameters
    Check(CheckArgs),
    /// Replace every codeword by its orthogonal complement
    Dualize(DualizeArgs),
    /// Assign a code to a generalized combination network and simulate it
    Netsim(NetsimArgs),
    /// Hamming-scheme bridges
    #[command(subcommand)]
    Hamming(HammingCmd),
    /// List or count subspaces of F_q^n
    Enumerate(EnumerateArgs),
    /// Inspect or update the results store
    #[command(subcommand)]
    Store(StoreCmd),
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Simple,
    Repeats,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Simple => Variant::Simple,
            VariantArg::Repeats => Variant::Repeats,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Greedy,
    Exact,
    GreedyRestarts,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Greedy => Mode::Greedy,
            ModeArg::Exact => Mode::Exact,
            ModeArg::GreedyRestarts => Mode::GreedyRestarts,
        }
    }
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    q: u32,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, requires = "lambda", conflicts_with_all = ["delta", "alpha"])]
    t: Option<usize>,
    #[arg(long, requires = "t")]
    lambda: Option<u64>,
    #[arg(long, requires = "alpha")]
    delta: Option<usize>,
    #[arg(long, requires = "delta")]
    alpha: Option<u64>,
    #[arg(long, value_enum, default_value = "simple")]
    variant: VariantArg,
    /// Also check the identities tying A to C against exact values in the store
    #[arg(long)]
    identities: bool,
    /// Show each bound's recursion chain in the text table
    #[arg(long)]
    trace: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Multiple,
    Covering,
}

#[derive(Args)]
struct SearchArgs {
    /// Which family the parameters describe; inferred from them when omitted
    #[arg(long, value_enum)]
    side: Option<SideArg>,
    #[arg(long)]
    q: u32,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    t: Option<usize>,
    /// Maximum t-subspace load (multiple codes)
    #[arg(long, requires = "t", conflicts_with = "mu")]
    lambda: Option<u64>,
    /// Minimum t-subspace load (covers, C_q(n,k,t;μ))
    #[arg(long, requires = "t")]
    mu: Option<u64>,
    #[arg(long, requires = "alpha", conflicts_with = "t")]
    delta: Option<usize>,
    #[arg(long, requires = "delta")]
    alpha: Option<u64>,
    /// Build the k-spread of F_q^n instead of searching
    #[arg(long, conflicts_with_all = ["t", "delta"])]
    spread: bool,
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "simple")]
    variant: VariantArg,
    /// Greedy runs in greedy-restarts mode
    #[arg(long, default_value_t = 20)]
    restarts: u32,
    /// Write the code found in grasscode text format
    #[arg(long, visible_alias = "emit", value_name = "FILE")]
    code_out: Option<PathBuf>,
    /// Record the result in the store
    #[arg(long)]
    record: bool,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, value_name = "FILE")]
    code: PathBuf,
    #[arg(long, requires = "lambda")]
    t: Option<usize>,
    #[arg(long, requires = "t")]
    lambda: Option<u64>,
    #[arg(long, requires = "delta")]
    alpha: Option<u64>,
    #[arg(long, requires = "alpha")]
    delta: Option<usize>,
    /// Report α-coverings up to --max-alpha and every t's load
    #[arg(long)]
    profile: bool,
    #[arg(long, default_value_t = 4)]
    max_alpha: u64,
}

#[derive(Args)]
struct DualizeArgs {
    #[arg(long, value_name = "FILE")]
    code: PathBuf,
    #[arg(long, visible_alias = "emit", value_name = "FILE")]
    code_out: Option<PathBuf>,
}

#[derive(Args)]
struct NetsimArgs {
    #[arg(long)]
    h: usize,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    eps: usize,
    #[arg(long)]
    alpha: usize,
    #[arg(long)]
    q: u32,
    /// Linear solution from a Grassmannian code
    #[arg(long, value_name = "FILE", required_unless_present = "strings")]
    code: Option<PathBuf>,
    /// Nonlinear solution: q^h strings of r·k symbols, one per message tuple
    #[arg(long, value_name = "FILE", conflicts_with_all = ["code", "ell"])]
    strings: Option<PathBuf>,
    /// Vector coding over packets of ℓ symbols
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long, conflicts_with = "samples")]
    exhaustive: bool,
    #[arg(long)]
    samples: Option<u64>,
}

#[derive(Subcommand)]
enum HammingCmd {
    /// Minimum distance and the d_r and c_α hierarchies of a linear code
    Weights {
        #[arg(long, value_name = "FILE")]
        gen: PathBuf,
        /// Longest c_α prefix to compute
        #[arg(long, default_value_t = 15)]
        max_alpha: usize,
    },
    /// Read a generator or parity-check matrix as a code of lines
    Bridge {
        #[arg(long, value_name = "FILE", required_unless_present = "parity", requires = "alpha")]
        gen: Option<PathBuf>,
        #[arg(long, value_name = "FILE", conflicts_with = "gen", requires = "d")]
        parity: Option<PathBuf>,
        #[arg(long)]
        alpha: Option<u64>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, value_name = "FILE")]
        code_out: Option<PathBuf>,
    },
    /// Closed forms for A(n,n−2,n−3;λ), λ = 1,2,3
    Turan {
        #[arg(long)]
        n: usize,
        /// Confirm each value by exhaustive set-packing search
        #[arg(long)]
        verify: bool,
    },
    /// Largest family of k-subsets with every t-subset in at most λ blocks
    Packing {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        lambda: u64,
        #[arg(long)]
        exact: bool,
    },
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    q: u32,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    /// Only report how many there are
    #[arg(long)]
    count: bool,
    /// List at most this many
    #[arg(long, default_value_t = 1000)]
    limit: usize,
    /// Count the k-subspaces containing this subspace
    #[arg(long, value_name = "FILE")]
    containing: Option<PathBuf>,
}

#[derive(Args)]
struct KeyArgs {
    /// A, A~, B, B~ or C
    #[arg(long)]
    quantity: String,
    #[arg(long)]
    q: u32,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    /// t, or δ for B quantities
    #[arg(long)]
    t: usize,
    /// λ, or α for B quantities
    #[arg(long)]
    lambda: u64,
}

impl KeyArgs {
    fn key(&self) -> Result<StoreKey, Error> {
        Ok(StoreKey::new(Quantity::parse(&self.quantity)?, self.q, self.n, self.k, self.t, self.lambda))
    }
}

#[derive(Subcommand)]
enum StoreCmd {
    /// Every entry
    Show,
    /// One entry
    Get(KeyArgs),
    /// Tighten a bound
    Record {
        #[command(flatten)]
        key: KeyArgs,
        #[arg(long)]
        lower: Option<u64>,
        #[arg(long)]
        upper: Option<u64>,
        #[arg(long, conflicts_with = "formula", required_unless_present = "formula")]
        citation: Option<String>,
        #[arg(long)]
        formula: Option<String>,
    },
    /// Write the literature table to the store file if it is empty
    Init,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Ok,
    /// The command ran but the answer is negative (invalid code, failed decode).
    Negative,
    BudgetExhausted,
}

impl Status {
    fn name(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Negative => "negative",
            Status::BudgetExhausted => "budget_exhausted",
        }
    }

    fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Negative => 1,
            Status::BudgetExhausted => 2,
        }
    }
}

struct Report {
    value: Value,
    summary: String,
    status: Status,
}

impl Report {
    fn ok(value: Value, summary: String) -> Report {
        Report {
            value,
            summary,
            status: Status::Ok,
        }
    }

    fn verdict(value: Value, summary: String, good: bool) -> Report {
        Report {
            value,
            summary,
            status: if good { Status::Ok } else { Status::Negative },
        }
    }
}

type Res<T> = Result<T, Error>;

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn load_store(g: &Global) -> Res<ResultsStore> {
    match &g.store {
        Some(p) => ResultsStore::load(p),
        None => Ok(ResultsStore::with_literature()),
    }
}

fn need_store(g: &Global) -> Res<&Path> {
    g.store
        .as_deref()
        .ok_or_else(|| Error::InvalidArgs("no store file: pass --store or set GRASSCOV_STORE".into()))
}

fn write_code(path: &Option<PathBuf>, code: &GrassCode) -> Res<()> {
    if let Some(p) = path {
        std::fs::write(p, format_grasscode(code))?;
    }
    Ok(())
}

fn bounds_cmd(g: &Global, a: &BoundsArgs) -> Res<Report> {
    let store = load_store(g)?;
    let mut b = Bounds::new(Some(&store));
    let variant = a.variant.into();
    let q = a.q as u64;
    let rep = match (a.t, a.lambda, a.delta, a.alpha) {
        (Some(t), Some(l), _, _) => b.report_a(a.n, a.k, t, l, q, variant)?,
        (_, _, Some(d), Some(al)) => b.report_b(a.n, a.k, d, al, q, variant)?,
        _ => return Err(Error::InvalidArgs("give --t and --lambda, or --delta and --alpha".into())),
    };
    let mut s = format!("{}\n", rep.params);
    for e in &rep.upper {
        let _ = writeln!(s, "  upper {:<22} {}", e.rule, e.value);
        if a.trace {
            for step in &e.trace {
                let _ = writeln!(s, "        {step}");
            }
        }
    }
    for e in &rep.lower {
        let _ = writeln!(s, "  lower {:<22} {}", e.rule, e.value);
    }
    let show = |v: &Option<num_bigint::BigUint>| v.as_ref().map_or("-".to_string(), |x| x.to_string());
    let _ = write!(s, "  best: {} <= {} <= {}", show(&rep.best_lower), rep.params, show(&rep.best_upper));
    let mut value = json!({ "bounds": to_json(&rep) });
    if a.identities {
        let t = a.t.ok_or_else(|| Error::InvalidArgs("--identities needs --t and --lambda".into()))?;
        let ids = identity_checks(q, a.n, a.k, t, a.lambda.unwrap(), &store)?;
        for c in &ids.checks {
            let _ = write!(s, "\n  identity {:<22} {:?}: {}", c.name, c.status, c.detail);
        }
        value["identities"] = to_json(&ids);
    }
    Ok(Report::ok(value, s))
}

fn search_summary(r: &SearchResult) -> String {
    format!(
        "{}: size {}{}{} ({} nodes/runs)",
        r.params,
        r.size,
        if r.optimal { ", optimal" } else { "" },
        if r.budget_exhausted { ", budget exhausted" } else { "" },
        r.explored
    )
}

fn search_cmd(g: &Global, a: &SearchArgs) -> Res<Report> {
    if a.spread {
        let code = spread_construct(a.n, a.k, a.q)?;
        write_code(&a.code_out, &code)?;
        let s = format!("{}-spread of F_{}^{}: {} subspaces", a.k, a.q, a.n, code.size());
        return Ok(Report::ok(json!({ "construction": "spread", "size": code.size(), "code": to_json(&code) }), s));
    }
    let cfg = SearchConfig {
        node_budget: g.budget_nodes,
        time_budget: g.budget_seconds,
        seed: g.seed,
        mode: a.mode.into(),
        restarts: if matches!(a.mode, ModeArg::GreedyRestarts) { a.restarts } else { 1 },
        variant: a.variant.into(),
        ..SearchConfig::default()
    };
    match (a.side, a.t.is_some(), a.delta.is_some()) {
        (Some(SideArg::Multiple), false, _) => return Err(Error::InvalidArgs("--side multiple needs --t".into())),
        (Some(SideArg::Covering), _, false) => {
            return Err(Error::InvalidArgs("--side covering needs --delta and --alpha".into()))
        }
        _ => {}
    }
    let exact = matches!(a.mode, ModeArg::Exact);
    let (res, minimizing) = match (a.t, a.lambda, a.mu, a.delta, a.alpha) {
        (Some(t), _, Some(mu), _, _) => (exact_min_cover(a.n, a.k, t, mu, a.q, &cfg)?, true),
        (Some(t), Some(l), None, _, _) if exact => (exact_max_multiple(a.n, a.k, t, l, a.q, &cfg)?, false),
        (Some(t), Some(l), None, _, _) => (greedy_max_multiple(a.n, a.k, t, l, a.q, &cfg)?, false),
        (_, _, _, Some(d), Some(al)) if exact => (exact_max_covering(a.n, a.k, d, al, a.q, &cfg)?, false),
        (_, _, _, Some(d), Some(al)) => (greedy_covering_code(a.n, a.k, d, al, a.q, &cfg)?, false),
        _ => {
            return Err(Error::InvalidArgs(
                "give --t with --lambda or --mu, --delta with --alpha, or --spread".into(),
            ))
        }
    };
    write_code(&a.code_out, &res.code)?;
    let mut value = to_json(&res);
    if a.record {
        let path = need_store(g)?;
        let mode = format!("{:?}", cfg.mode).to_lowercase();
        ResultsStore::update(path, |st| {
            if res.optimal {
                st.record_certificate(res.params, res.size, &mode, cfg.seed, res.explored)
            } else {
                let side = if minimizing { Side::Upper } else { Side::Lower };
                st.record(
                    res.params,
                    side,
                    res.size,
                    Provenance::SearchCertificate {
                        mode: mode.clone(),
                        seed: cfg.seed,
                        explored: res.explored,
                    },
                )
            }
        })?;
        value["recorded"] = json!(true);
    }
    let status = if res.budget_exhausted { Status::BudgetExhausted } else { Status::Ok };
    Ok(Report {
        summary: search_summary(&res),
        value,
        status,
    })
}

fn code_line(c: &GrassCode) -> String {
    format!(
        "code in G_{}({},{}): {} codewords, {} distinct",
        c.q(),
        c.n(),
        c.k(),
        c.size(),
        c.distinct()
    )
}

fn check_cmd(a: &CheckArgs) -> Res<Report> {
    let code = read_grasscode(&a.code)?;
    let mut s = code_line(&code);
    let mut value = json!({ "q": code.q(), "n": code.n(), "k": code.k(), "size": code.size(), "simple": code.is_simple() });
    let mut good = true;
    if let (Some(t), Some(l)) = (a.t, a.lambda) {
        let r = is_multiple_code(&code, t, l)?;
        let _ = write!(s, "\n  {t}-(n,k,{l})^m: {}", if r.valid { "valid" } else { "invalid" });
        good &= r.valid;
        value["multiple"] = to_json(&r);
    }
    if let (Some(al), Some(d)) = (a.alpha, a.delta) {
        let r = is_covering_code(&code, al, d)?;
        let _ = write!(
            s,
            "\n  {al}-(n,k,{d})^c: {}{}",
            if r.valid { "valid" } else { "invalid" },
            if r.vacuous { " (vacuous)" } else { "" }
        );
        good &= r.valid;
        value["covering"] = to_json(&r);
    }
    if a.profile || (a.t.is_none() && a.alpha.is_none()) {
        let p = profile(&code, a.max_alpha)?;
        for (al, c) in &p.alpha_covering {
            let _ = write!(s, "\n  alpha={al}: every {al} words span >= {c}");
        }
        for (t, l) in &p.max_multiplicity {
            let _ = write!(s, "\n  t={t}: max load {l}");
        }
        value["profile"] = to_json(&p);
    }
    Ok(Report::verdict(value, s, good))
}

fn dualize_cmd(a: &DualizeArgs) -> Res<Report> {
    let code = read_grasscode(&a.code)?;
    let dual = dualize(&code);
    write_code(&a.code_out, &dual)?;
    Ok(Report::ok(json!({ "code": to_json(&dual) }), code_line(&dual)))
}

fn netsim_cmd(g: &Global, a: &NetsimArgs) -> Res<Report> {
    let base = NetworkInstance::new(a.h, a.r, a.k, a.eps, a.alpha, a.q)?;
    let classification = base.classification();
    let mut value = json!({
        "network": to_json(&base),
        "classification": to_json(&classification),
        "receivers": base.receivers().to_string(),
    });
    if let Some(path) = &a.strings {
        let words = parse_strings(&std::fs::read_to_string(path)?, a.q)?;
        let rep = nonlinear_check(&words, &base)?;
        let good = rep.valid && rep.decoded_all == Some(true);
        value["assigned"] = json!(rep.valid);
        value["simulated"] = json!(rep.decoded_all.is_some());
        value["receivers_checked"] = json!(rep.receivers_checked);
        value["failures"] = match &rep.witness {
            Some((rec, pat, count)) => json!([{ "kind": "collision", "receiver": rec, "pattern": pat, "count": count }]),
            None => json!([]),
        };
        value["nonlinear"] = to_json(&rep);
        let s = format!(
            "{:?} network, nonlinear code: {}",
            classification,
            if good { "every receiver decodes" } else { "invalid" }
        );
        return Ok(Report::verdict(value, s, good));
    }
    let code = read_grasscode(a.code.as_ref().expect("clap enforces --code or --strings"))?;
    let net = match a.ell {
        Some(l) => base.vector(l)?,
        None => base,
    };
    value["expanded"] = to_json(&net);
    let asg = match assign_scalar(&net, &code) {
        Ok(x) => x,
        Err(e @ (Error::CodeInvalid { .. } | Error::CodeTooSmall { .. })) => {
            value["assigned"] = json!(false);
            value["simulated"] = json!(false);
            value["receivers_checked"] = json!(0);
            value["failures"] = json!([{ "kind": e.kind(), "message": e.to_string() }]);
            let s = format!("{classification:?} network: code rejected: {e}");
            return Ok(Report::verdict(value, s, false));
        }
        Err(e) => return Err(e),
    };
    let plan = if a.exhaustive {
        MessagePlan::Exhaustive
    } else if let Some(n) = a.samples {
        MessagePlan::Sampled { samples: n, seed: g.seed }
    } else {
        MessagePlan::Auto {
            samples: DEFAULT_SAMPLES,
            seed: g.seed,
        }
    };
    let rep = run(&asg, plan)?;
    value["assigned"] = json!(true);
    value["simulated"] = json!(true);
    value["receivers_checked"] = json!(rep.receivers_checked);
    value["failures"] = to_json(&rep.failures);
    value["simulation"] = to_json(&rep);
    let s = format!(
        "{:?} network, {} receivers x {} messages ({}): {}",
        classification,
        rep.receivers_checked,
        rep.messages_checked,
        if rep.exhaustive { "exhaustive" } else { "sampled" },
        if rep.success {
            "every receiver decodes".to_string()
        } else {
            format!("{} failures", rep.failure_count)
        }
    );
    Ok(Report::verdict(value, s, rep.success))
}

fn hamming_cmd(g: &Global, c: &HammingCmd) -> Res<Report> {
    match c {
        HammingCmd::Weights { gen, max_alpha } => {
            let code = LinearCode::new(read_matrix(gen)?)?;
            let d = code.min_distance()?;
            let dr = generalized_weights(&code)?;
            let cs = covering_hierarchy(&code, *max_alpha)?;
            let s = format!(
                "[{}, {}, {}] code\n  d_r: {:?}\n  c_alpha: {:?}",
                code.length(),
                code.dim(),
                d,
                dr,
                cs
            );
            let value = json!({
                "length": code.length(), "dim": code.dim(), "min_distance": d,
                "generalized_weights": dr, "covering_hierarchy": cs,
            });
            Ok(Report::ok(value, s))
        }
        HammingCmd::Bridge {
            gen,
            parity,
            alpha,
            d,
            code_out,
        } => {
            if let Some(p) = gen {
                let g = read_matrix(p)?;
                let alpha = alpha.expect("clap requires --alpha with --gen");
                let grass = generator_to_grasscode(&g)?;
                let dist = LinearCode::new(g.clone())?.min_distance()?;
                let (h, r) = (g.rows(), g.cols());
                let by_distance = dist as u64 + alpha > r as u64;
                let cov = if h >= 2 { Some(is_covering_code(&grass, alpha, h - 1)?) } else { None };
                let by_covering = cov.as_ref().map_or(by_distance, |c| c.valid);
                write_code(code_out, &grass)?;
                let s = format!(
                    "[{r}, {h}, {dist}] code, alpha={alpha}: distance test {by_distance}, covering test {by_covering}"
                );
                let value = json!({
                    "min_distance": dist, "alpha": alpha, "distance_condition": by_distance,
                    "covering": to_json(&cov), "agree": by_distance == by_covering, "code": to_json(&grass),
                });
                Ok(Report::verdict(value, s, by_distance && by_covering))
            } else {
                let hm = read_matrix(parity.as_ref().expect("clap requires --gen or --parity"))?;
                let d = d.expect("clap requires --d with --parity");
                let grass = parity_to_covering(&hm, d)?;
                write_code(code_out, &grass)?;
                let m = hm.rows();
                let cov = if d >= 3 { Some(is_covering_code(&grass, d as u64 - 1, d - 2)?) } else { None };
                let eps = (m + 1).checked_sub(d);
                let s = format!(
                    "{}-({m},1,{})^c code of {} lines{}",
                    d - 1,
                    d.saturating_sub(2),
                    grass.size(),
                    eps.map_or(String::new(), |e| format!("; solves the ({e},1)-N_{{{m},{},{m}}} network", hm.cols()))
                );
                let value = json!({
                    "d": d, "covering": to_json(&cov), "code": to_json(&grass),
                    "network": eps.map(|e| json!({ "h": m, "r": hm.cols(), "k": 1, "eps": e, "s": m })),
                });
                Ok(Report::ok(value, s))
            }
        }
        HammingCmd::Turan { n, verify } => {
            let v = turan_values(*n)?;
            let mut s = format!("A({n},{},{};λ) for λ=1,2,3: {} {} {}", n - 2, n - 3, v.lambda1, v.lambda2, v.lambda3);
            let mut value = json!({ "values": to_json(&v) });
            let mut good = true;
            if *verify {
                let mut found = Vec::new();
                for (l, want) in [(1, v.lambda1), (2, v.lambda2), (3, v.lambda3)] {
                    let r = exact_set_packing(*n, n - 2, n - 3, l, g.budget_nodes, g.budget_seconds)?;
                    good &= r.optimal && r.size as u64 == want;
                    found.push(json!({ "lambda": l, "size": r.size, "optimal": r.optimal }));
                }
                let _ = write!(s, "\n  exhaustive search {}", if good { "agrees" } else { "disagrees" });
                value["search"] = json!(found);
            }
            Ok(Report::verdict(value, s, good))
        }
        HammingCmd::Packing {
            n,
            k,
            t,
            lambda,
            exact,
        } => {
            if *exact {
                let r = exact_set_packing(*n, *k, *t, *lambda, g.budget_nodes, g.budget_seconds)?;
                let s = format!(
                    "A({n},{k},{t};{lambda}) {} {}",
                    if r.optimal { "=" } else { ">=" },
                    r.size
                );
                let status = if r.budget_exhausted { Status::BudgetExhausted } else { Status::Ok };
                Ok(Report {
                    value: to_json(&r),
                    summary: s,
                    status,
                })
            } else {
                let p = greedy_set_packing(*n, *k, *t, *lambda)?;
                let check = set_packing_check(&p, *t, *lambda)?;
                let s = format!("A({n},{k},{t};{lambda}) >= {} (greedy)", p.size());
                Ok(Report::ok(json!({ "size": p.size(), "packing": to_json(&p), "check": to_json(&check) }), s))
            }
        }
    }
}

fn enumerate_cmd(a: &EnumerateArgs) -> Res<Report> {
    let f = make_field(a.q)?;
    let total = gaussian_binomial(a.n, a.k, a.q as u64)?;
    let mut value = json!({ "q": a.q, "n": a.n, "k": a.k, "count": total.to_string() });
    let mut s = format!("[{},{}]_{} = {}", a.n, a.k, a.q, total);
    if let Some(path) = &a.containing {
        let sub = read_subspace(path)?;
        if sub.ambient_dim() != a.n || sub.dim() > a.k {
            return Err(Error::DimensionMismatch(format!(
                "a {}-subspace of F_q^{} cannot lie in a {}-subspace of F_q^{}",
                sub.dim(),
                sub.ambient_dim(),
                a.k,
                a.n
            )));
        }
        let t = sub.dim();
        let all = enumerate_grassmannian(&f, a.n, a.k, grasscov::grassmann::DEFAULT_ENUMERATION_BUDGET)?;
        let found = all.iter().filter(|w| w.contains(&sub)).count();
        let expected = gaussian_binomial(a.n - t, a.k - t, a.q as u64)?;
        let good = expected == num_bigint::BigUint::from(found);
        let _ = write!(s, "\n  containing the given {t}-subspace: {found} (expected [{},{}]_{} = {expected})", a.n - t, a.k - t, a.q);
        value["containing"] = json!({ "t": t, "found": found, "expected": expected.to_string(), "agree": good });
        return Ok(Report::verdict(value, s, good));
    }
    if !a.count {
        let list: Vec<Value> = GrassmannIter::new(&f, a.n, a.k)?.take(a.limit).map(|x| to_json(&x)).collect();
        let _ = write!(s, "\n  listed {}", list.len());
        value["subspaces"] = json!(list);
    }
    Ok(Report::ok(value, s))
}

fn store_cmd(g: &Global, c: &StoreCmd) -> Res<Report> {
    match c {
        StoreCmd::Show => {
            let st = load_store(g)?;
            let mut s = String::new();
            for e in st.entries() {
                let show = |b: &Option<grasscov::store::Bound>| b.as_ref().map_or("-".to_string(), |b| b.value.to_string());
                let _ = writeln!(
                    s,
                    "{:<20} [{}, {}]{}",
                    e.key.to_string(),
                    show(&e.lower),
                    show(&e.upper),
                    if e.optimal { " certified" } else { "" }
                );
            }
            Ok(Report::ok(to_json(&st), s.trim_end().to_string()))
        }
        StoreCmd::Get(k) => {
            let key = k.key()?;
            let st = load_store(g)?;
            match st.get(&key) {
                Some(e) => Ok(Report::ok(to_json(e), format!("{key}: {}", serde_json::to_string(e).unwrap()))),
                None => Ok(Report::verdict(json!(null), format!("{key}: no entry"), false)),
            }
        }
        StoreCmd::Record {
            key,
            lower,
            upper,
            citation,
            formula,
        } => {
            let key = key.key()?;
            if lower.is_none() && upper.is_none() {
                return Err(Error::InvalidArgs("give --lower and/or --upper".into()));
            }
            let prov = match (citation, formula) {
                (Some(c), _) => Provenance::literature(c),
                (None, Some(f)) => Provenance::formula(f),
                (None, None) => unreachable!("clap requires one"),
            };
            let entry = ResultsStore::update(need_store(g)?, |st| {
                if let Some(v) = lower {
                    st.record(key, Side::Lower, *v, prov.clone())?;
                }
                if let Some(v) = upper {
                    st.record(key, Side::Upper, *v, prov.clone())?;
                }
                Ok(st.get(&key).cloned())
            })?;
            Ok(Report::ok(to_json(&entry), format!("{key} recorded")))
        }
        StoreCmd::Init => {
            let path = need_store(g)?;
            let n = ResultsStore::update(path, |st| Ok(st.entries().len()))?;
            Ok(Report::ok(json!({ "path": path, "entries": n }), format!("{} holds {n} entries", path.display())))
        }
    }
}

fn command_name(c: &Cmd) -> &'static str {
    match c {
        Cmd::Bounds(_) => "bounds",
        Cmd::Search(_) => "search",
        Cmd::Check(_) => "check",
        Cmd::Dualize(_) => "dualize",
        Cmd::Netsim(_) => "netsim",
        Cmd::Hamming(_) => "hamming",
        Cmd::Enumerate(_) => "enumerate",
        Cmd::Store(_) => "store",
    }
}

fn dispatch(cli: &Cli) -> Res<Report> {
    let g = &cli.global;
    match &cli.cmd {
        Cmd::Bounds(a) => bounds_cmd(g, a),
        Cmd::Search(a) => search_cmd(g, a),
        Cmd::Check(a) => check_cmd(a),
        Cmd::Dualize(a) => dualize_cmd(a),
        Cmd::Netsim(a) => netsim_cmd(g, a),
        Cmd::Hamming(c) => hamming_cmd(g, c),
        Cmd::Enumerate(a) => enumerate_cmd(a),
        Cmd::Store(c) => store_cmd(g, c),
    }
}

fn emit(g: &Global, envelope: &Value, summary: Option<&str>) -> ExitCode {
    let text = serde_json::to_string_pretty(envelope).expect("json");
    if let Some(p) = &g.out {
        if let Err(e) = std::fs::write(p, &text) {
            eprintln!("{}", json!({ "status": "error", "error": { "kind": "io", "message": e.to_string() } }));
            return ExitCode::from(1);
        }
    }
    // a closed pipe on stdout is not worth a panic
    use std::io::Write;
    let _ = match summary {
        Some(s) if !g.json => writeln!(std::io::stdout(), "{s}"),
        Some(_) => writeln!(std::io::stdout(), "{text}"),
        None => writeln!(std::io::stderr(), "{text}"),
    };
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let diag = json!({
                "status": "error",
                "error": { "kind": "usage", "message": e.render().to_string().trim() },
            });
            eprintln!("{}", serde_json::to_string_pretty(&diag).unwrap());
            return ExitCode::from(1);
        }
    };
    let name = command_name(&cli.cmd);
    match dispatch(&cli) {
        Ok(r) => {
            let env = json!({ "command": name, "status": r.status.name(), "seed": cli.global.seed, "report": r.value });
            let code = emit(&cli.global, &env, Some(&r.summary));
            if code != ExitCode::SUCCESS {
                return code;
            }
            ExitCode::from(r.status.code())
        }
        Err(e) => {
            let budget = matches!(e, Error::BudgetExceeded { .. });
            let env = json!({
                "command": name,
                "status": if budget { "budget_exhausted" } else { "error" },
                "seed": cli.global.seed,
                "error": { "kind": e.kind(), "message": e.to_string() },
            });
            emit(&cli.global, &env, None);
            ExitCode::from(if budget { 2 } else { 1 })
        }
    }
}
