//! Command-line surface: parameter tables, verification runs and witness export.

use std::fmt::Write as _;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::distance::{
    block_table, exact_distance, first_layer_scan, kappa, kappa_closed_form, sdw_bounds, BlockRow, DistanceReport,
    OracleChoice, OracleConfig, CSV_HEADER, DEFAULT_EXHAUSTIVE_BUDGET, DEFAULT_SUPPORT_BUDGET,
};
use crate::error::{Error, Result};
use crate::evalcode::{constacyclic_shift, CodewordDump, EvalModel};
use crate::gf::{checked_pow, prime_power, FieldCtx};
use crate::linalg::RowSpace;
use crate::spaces::{admissible_degrees, code_space, intermediate_divisors, CodeParams};
use crate::witnesses::{pencil, PencilSpec};

/// Rows of the representative table, as `(q, r, m, ℓ)`.
pub const TABLE1: [(u64, u64, u32, u64); 5] = [(7, 3, 2, 2), (7, 3, 2, 5), (13, 3, 3, 5), (13, 4, 3, 7), (17, 4, 4, 19)];

#[derive(Parser, Debug)]
#[command(name = "constacode", about = "Distances of intermediate constacyclic evaluation codes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// One row per admissible (q, m, r, ℓ), or a block table.
    Table(CommonArgs),
    /// Run the check suites and report pass/fail per check.
    Verify(CommonArgs),
    /// Export the pencil word and compare its weight with the distance.
    Witness(CommonArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OracleArg {
    None,
    Witness,
    Exhaustive,
    Support,
    Auto,
}

impl From<OracleArg> for OracleChoice {
    fn from(o: OracleArg) -> Self {
        match o {
            OracleArg::None => OracleChoice::None,
            OracleArg::Witness => OracleChoice::Witness,
            OracleArg::Exhaustive => OracleChoice::Exhaustive,
            OracleArg::Support => OracleChoice::Support,
            OracleArg::Auto => OracleChoice::Auto,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Field orders, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub q: Vec<u64>,
    /// Numbers of variables, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub m: Vec<u32>,
    /// Divisors of q-1, comma separated, or `auto` for every 2 < r < q-1.
    #[arg(long, default_value = "auto")]
    pub r: String,
    /// Restrict to these ℓ.
    #[arg(long, value_delimiter = ',')]
    pub ell: Vec<u64>,
    /// Block table at this `a`; `a` prints the column normalized by q^{m-a-2}.
    #[arg(long)]
    pub block: Option<String>,
    /// Step budget for the exhaustive oracle.
    #[arg(long)]
    pub budget: Option<u128>,
    /// Largest weight tried by the support search.
    #[arg(long)]
    pub wmax: Option<u64>,
    #[arg(long, value_enum)]
    pub oracle: Option<OracleArg>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// The five representative rows.
    #[arg(long)]
    pub paper_table1: bool,
}

/// Rendered output and process exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub exit_code: i32,
}

pub fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Table(a) => cmd_table(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Witness(a) => cmd_witness(&a),
    }
}

fn r_values(arg: &str, q: u64) -> Result<Vec<u64>> {
    if arg == "auto" {
        return Ok(intermediate_divisors(q));
    }
    arg.split(',')
        .map(|s| s.trim().parse::<u64>().map_err(|_| Error::InvalidRange(format!("bad r value `{s}`"))))
        .collect()
}

fn oracle_config(a: &CommonArgs, default: OracleChoice) -> OracleConfig {
    OracleConfig {
        choice: a.oracle.map_or(default, Into::into),
        exhaustive_budget: a.budget.unwrap_or(DEFAULT_EXHAUSTIVE_BUDGET),
        support_budget: a.budget.unwrap_or(DEFAULT_SUPPORT_BUDGET),
        w_max: a.wmax,
    }
}

/// Every `(q, m, r, ℓ)` selected by the range flags, in sorted order.
fn selected_params(a: &CommonArgs, default_m: &[u32]) -> Result<Vec<CodeParams>> {
    if a.q.is_empty() {
        return Err(Error::InvalidRange("--q is required".into()));
    }
    let ms: Vec<u32> = if a.m.is_empty() { default_m.to_vec() } else { a.m.clone() };
    let mut out = Vec::new();
    for &q in &a.q {
        prime_power(q).ok_or(Error::NotPrimePower(q))?;
        for &m in &ms {
            for r in r_values(&a.r, q)? {
                for ell in admissible_degrees(q, m, r)? {
                    if a.ell.is_empty() || a.ell.contains(&ell) {
                        out.push(CodeParams::new(q, m, r, ell)?);
                    }
                }
            }
        }
    }
    Ok(out)
}

fn text_table(header: &str, rows: &[String]) -> String {
    let cells: Vec<Vec<&str>> = std::iter::once(header).chain(rows.iter().map(String::as_str)).map(|l| l.split(',').collect()).collect();
    let cols = cells[0].len();
    let widths: Vec<usize> =
        (0..cols).map(|c| cells.iter().map(|r| r.get(c).map_or(0, |s| s.chars().count())).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in &cells {
        let line: Vec<String> = row.iter().zip(&widths).map(|(s, w)| format!("{s:>w$}")).collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn render<T: Serialize>(format: Format, header: &str, rows: &[String], items: &T) -> Result<String> {
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(items).map_err(|e| Error::Parse(e.to_string()))? + "\n",
        Format::Csv => {
            let mut s = String::from(header);
            s.push('\n');
            for r in rows {
                s.push_str(r);
                s.push('\n');
            }
            s
        }
        Format::Text => text_table(header, rows),
    })
}

#[derive(Serialize)]
struct BlockOut {
    q: u64,
    r: u64,
    m: Option<u32>,
    a: Option<u64>,
    rows: Vec<BlockRow>,
}

const BLOCK_HEADER: &str = "q,r,m,a,h,b,q_minus_b_plus_1,normalized,d";

fn cmd_block(a: &CommonArgs, block: &str, format: Format) -> Result<Outcome> {
    if a.q.is_empty() {
        return Err(Error::InvalidRange("--q is required".into()));
    }
    let fixed_a = match block {
        "a" => None,
        s => Some(s.parse::<u64>().map_err(|_| Error::InvalidRange(format!("--block expects an integer or `a`, got `{s}`")))?),
    };
    let mut blocks = Vec::new();
    for &q in &a.q {
        prime_power(q).ok_or(Error::NotPrimePower(q))?;
        for r in r_values(&a.r, q)? {
            match fixed_a {
                None => {
                    let rows = block_table(q, 2, r, 0)?.into_iter().map(|row| BlockRow { d: None, ..row }).collect();
                    blocks.push(BlockOut { q, r, m: None, a: None, rows });
                }
                Some(av) => {
                    let ms: Vec<u32> = if a.m.is_empty() { vec![av as u32 + 2] } else { a.m.clone() };
                    for m in ms {
                        blocks.push(BlockOut { q, r, m: Some(m), a: Some(av), rows: block_table(q, m, r, av)? });
                    }
                }
            }
        }
    }
    let mut rows = Vec::new();
    for blk in &blocks {
        for row in &blk.rows {
            let d = row.d.map(|d| d.to_string()).unwrap_or_default();
            rows.push(format!(
                "{},{},{},{},{},{},{},{},{}",
                blk.q,
                blk.r,
                blk.m.map(|m| m.to_string()).unwrap_or_default(),
                blk.a.map(|x| x.to_string()).unwrap_or_default(),
                row.h,
                row.b,
                row.q_minus_b_plus_1,
                row.normalized,
                d
            ));
        }
    }
    Ok(Outcome { text: render(format, BLOCK_HEADER, &rows, &blocks)?, exit_code: 0 })
}

pub fn cmd_table(a: &CommonArgs) -> Result<Outcome> {
    let format = a.format.unwrap_or(Format::Csv);
    if let Some(block) = &a.block {
        return cmd_block(a, block, format);
    }
    let params: Vec<CodeParams> = if a.paper_table1 {
        TABLE1.iter().map(|&(q, r, m, ell)| CodeParams::new(q, m, r, ell)).collect::<Result<_>>()?
    } else {
        selected_params(a, &[2, 3])?
    };
    let cfg = oracle_config(a, OracleChoice::None);
    let reports: Vec<DistanceReport> = params.iter().map(|p| DistanceReport::compute(p, &cfg)).collect::<Result<_>>()?;
    let rows: Vec<String> = reports.iter().map(DistanceReport::csv_row).collect();
    Ok(Outcome { text: render(format, CSV_HEADER, &rows, &reports)?, exit_code: 0 })
}

#[derive(Serialize)]
struct WitnessOut {
    #[serde(flatten)]
    dump: CodewordDump,
    d_exact: u64,
    equality: bool,
}

pub fn cmd_witness(a: &CommonArgs) -> Result<Outcome> {
    let (&q, &m, &ell) = match (a.q.as_slice(), a.m.as_slice(), a.ell.as_slice()) {
        ([q], [m], [ell]) => (q, m, ell),
        _ => return Err(Error::InvalidRange("witness needs exactly one --q, --m and --ell".into())),
    };
    let r = match r_values(&a.r, q)?.as_slice() {
        [r] => *r,
        _ => return Err(Error::InvalidRange("witness needs exactly one --r".into())),
    };
    let p = CodeParams::new(q, m, r, ell)?;
    p.require_admissible()?;
    if p.terminal {
        return Err(Error::NotAdmissible(format!(
            "no pencil word for ℓ = {ell}: a = m - 1 is the terminal block; use `verify --oracle support`"
        )));
    }
    let d = exact_distance(&p)?;
    let model = EvalModel::for_params(&p)?;
    let f = pencil(model.field(), m as usize, &PencilSpec::for_params(&p))?;
    let word = model.encode(&f)?;
    let out = WitnessOut { dump: CodewordDump::new(&p, &word), d_exact: d, equality: word.weight as u64 == d };
    let text = match a.format.unwrap_or(Format::Json) {
        Format::Json => serde_json::to_string_pretty(&out).map_err(|e| Error::Parse(e.to_string()))? + "\n",
        _ => format!(
            "params: q={} m={} r={} ell={}\npolynomial: {}\nweight: {}\nd_exact: {}\nequality: {}\n",
            q, m, r, ell, out.dump.polynomial, out.dump.weight, d, out.equality
        ),
    };
    Ok(Outcome { text, exit_code: if out.equality { 0 } else { 1 } })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub params: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub ok: bool,
}

struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, name: &str, params: String, status: Status, detail: String) {
        self.0.push(Check { name: name.into(), params, status, detail });
    }

    fn result(&mut self, name: &str, params: String, r: Result<(bool, String)>) {
        match r {
            Ok((ok, d)) => self.push(name, params, if ok { Status::Pass } else { Status::Fail }, d),
            Err(e @ Error::BudgetExceeded { .. }) => self.push(name, params, Status::Skipped, e.to_string()),
            Err(e) => self.push(name, params, Status::Fail, e.to_string()),
        }
    }
}

const TRIALS: usize = 20;
/// Row-space checks are skipped above this `K · n`.
const CLOSURE_LIMIT: u64 = 200_000;

fn field_axioms(field: &FieldCtx, rng: &mut ChaCha8Rng) -> (bool, String) {
    let mut bad = 0;
    for _ in 0..1000 {
        let (x, y, z) = (field.random(rng), field.random(rng), field.random(rng));
        let ok = field.add(x, y) == field.add(y, x)
            && field.mul(x, field.add(y, z)) == field.add(field.mul(x, y), field.mul(x, z))
            && field.mul(field.mul(x, y), z) == field.mul(x, field.mul(y, z))
            && field.add(x, field.neg(x)).is_zero()
            && (x.is_zero() || field.mul(x, field.inv(x).unwrap()) == crate::gf::Elem::ONE);
        bad += !ok as usize;
    }
    (bad == 0, format!("{bad} violations in 1000 trials"))
}

fn verify_params(p: &CodeParams, model: &EvalModel, cfg: &OracleConfig, rng: &mut ChaCha8Rng, checks: &mut Checks) {
    let tag = format!("q={} m={} r={} ell={}", p.q, p.m, p.r, p.ell);
    let field = model.field().clone();

    checks.result(
        "orbit-weight",
        tag.clone(),
        (|| {
            let space = code_space(p)?;
            let mut bad = 0;
            for _ in 0..TRIALS {
                let values = model.grid_evaluator().evaluate(&space.random_dense(&field, rng));
                bad += !model.orbit_weight_of_values(&values).consistent as usize;
            }
            Ok((bad == 0, format!("{bad} of {TRIALS} random words violate wt·r = |Supp|")))
        })(),
    );

    let space = code_space(p);
    match space {
        Ok(space) if (space.dim() as u64) * p.n <= CLOSURE_LIMIT => checks.result(
            "constacyclic-closure",
            tag.clone(),
            (|| {
                let g = model.generator_matrix(&space)?;
                let rs = RowSpace::new(&field, &g);
                let mult = field.pow(field.inv(model.lambda()).unwrap(), p.r - 1);
                let mut bad = 0;
                for i in 0..space.dim() {
                    let word = model.encode(&space.basis_poly(&field, i))?;
                    bad += !rs.contains(&constacyclic_shift(&field, &word, mult).values)? as usize;
                }
                Ok((bad == 0, format!("{bad} of {} shifted basis words outside the code", space.dim())))
            })(),
        ),
        Ok(space) => checks.push(
            "constacyclic-closure",
            tag.clone(),
            Status::Skipped,
            format!("K·n = {} above {CLOSURE_LIMIT}", space.dim() as u64 * p.n),
        ),
        Err(e) => checks.push("constacyclic-closure", tag.clone(), Status::Fail, e.to_string()),
    }

    if !p.terminal {
        checks.result(
            "pencil-support",
            tag.clone(),
            (|| {
                let f = pencil(&field, p.m as usize, &PencilSpec::for_params(p))?;
                let want = (p.q - 1) * (p.q - p.b + 1) * p.tail_power().unwrap();
                let supp = f.support_size();
                let weight = model.encode(&f)?.weight as u64;
                let d = exact_distance(p)?;
                Ok((supp == want && weight == d, format!("support {supp} (want {want}), weight {weight} (d = {d})")))
            })(),
        );
        checks.result(
            "properties",
            tag.clone(),
            (|| {
                let d = exact_distance(p)?;
                let (lo, hi) = sdw_bounds(p)?;
                let k = kappa(p)?;
                let tail = p.tail_power().unwrap();
                let dim = code_space(p)?.dim() as u64;
                let ok = lo <= d
                    && d == hi
                    && kappa_closed_form(p.q, p.m, p.r, p.a, p.b) == Some(k)
                    && 3 * p.nu * tail <= d
                    && d <= p.nu * (p.q - 1) * tail
                    && d < p.n
                    && d + dim <= p.n + 1;
                Ok((ok, format!("d={d} sdw=[{lo},{hi}] kappa={k} K={dim}")))
            })(),
        );
    }

    if cfg.choice != OracleChoice::None {
        let (status, detail) = oracle_check(p, cfg);
        checks.push("oracle", tag, status, detail);
    }
}

fn oracle_check(p: &CodeParams, cfg: &OracleConfig) -> (Status, String) {
    let rep = match DistanceReport::compute(p, cfg) {
        Ok(rep) => rep,
        Err(e) => return (Status::Fail, e.to_string()),
    };
    match (rep.oracle_d, rep.oracle_method) {
        (Some(d), Some(m)) => {
            let status = if d == rep.d_exact { Status::Pass } else { Status::Fail };
            (status, format!("oracle_d={d} via {} (d = {})", m.as_str(), rep.d_exact))
        }
        _ => {
            let note = rep.oracle_note.unwrap_or_else(|| "no oracle value".into());
            // a search up to w_max >= d that finds nothing contradicts the formula
            let missed = cfg.choice == OracleChoice::Support && cfg.w_max.unwrap_or(rep.d_exact) >= rep.d_exact
                && note.starts_with("no codeword");
            (if missed { Status::Fail } else { Status::Skipped }, note)
        }
    }
}

pub fn cmd_verify(a: &CommonArgs) -> Result<Outcome> {
    let mut args = a.clone();
    if args.q.is_empty() {
        args.q = vec![7];
    }
    let params = selected_params(&args, &[2])?;
    let cfg = oracle_config(&args, OracleChoice::Auto);
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut checks = Checks(Vec::new());

    for &q in &args.q {
        let field = FieldCtx::of_order(q)?;
        let (ok, detail) = field_axioms(&field, &mut rng);
        checks.push("field-axioms", format!("q={q}"), if ok { Status::Pass } else { Status::Fail }, detail);
        for r in r_values(&args.r, q)? {
            checks.result(
                "first-layer-scan",
                format!("q={q} r={r}"),
                (|| {
                    let mut bad = Vec::new();
                    for b in 1..=q - 2 {
                        let survives = first_layer_scan(q, 2, r, 0, b)?.classes > 0;
                        if survives != ((b - 1) % r == 0) {
                            bad.push(b);
                        }
                    }
                    Ok((bad.is_empty(), format!("mismatching b: {bad:?}")))
                })(),
            );
        }
    }

    let mut models: Vec<((u64, u32, u64), Arc<EvalModel>)> = Vec::new();
    for p in &params {
        let key = (p.q, p.m, p.r);
        let model = match models.iter().find(|(k, _)| *k == key) {
            Some((_, m)) => m.clone(),
            None => {
                let tag = format!("q={} m={} r={}", p.q, p.m, p.r);
                let built = if checked_pow(p.q, p.m).unwrap_or(u64::MAX) > crate::evalcode::MAX_MODEL_ORDER {
                    Err(Error::ExtensionTooLarge { q: p.q, m: p.m })
                } else {
                    EvalModel::for_params(p)
                };
                match built {
                    Ok(m) => {
                        checks.push("model", tag, Status::Pass, format!("M^n = λI, {} orbits cover F_q^m \\ 0", m.n()));
                        let m = Arc::new(m);
                        models.push((key, m.clone()));
                        m
                    }
                    Err(e @ Error::ExtensionTooLarge { .. }) => {
                        checks.push("model", tag, Status::Skipped, e.to_string());
                        continue;
                    }
                    Err(e) => {
                        checks.push("model", tag, Status::Fail, e.to_string());
                        continue;
                    }
                }
            }
        };
        verify_params(p, &model, &cfg, &mut rng, &mut checks);
    }

    let checks = checks.0;
    let count = |s: Status| checks.iter().filter(|c| c.status == s).count();
    let report = VerifyReport { passed: count(Status::Pass), failed: count(Status::Fail), skipped: count(Status::Skipped), ok: count(Status::Fail) == 0, checks };
    let text = match args.format.unwrap_or(Format::Json) {
        Format::Json => serde_json::to_string_pretty(&report).map_err(|e| Error::Parse(e.to_string()))? + "\n",
        Format::Csv => {
            let mut s = String::from("name,params,status,detail\n");
            for c in &report.checks {
                let _ = writeln!(s, "{},{},{:?},\"{}\"", c.name, c.params, c.status, c.detail.replace('"', "'"));
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for c in &report.checks {
                let _ = writeln!(s, "{:<8} {:<22} {:<28} {}", format!("{:?}", c.status).to_uppercase(), c.name, c.params, c.detail);
            }
            let _ = writeln!(s, "passed {} failed {} skipped {}", report.passed, report.failed, report.skipped);
            s
        }
    };
    Ok(Outcome { text, exit_code: if report.ok { 0 } else { 1 } })
}
