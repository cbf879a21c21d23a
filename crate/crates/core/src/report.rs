//! Per-group bounds tables, the closed-form gap curve for `psl2:p`, the
//! semisimple-ratio probe, and JSON/CSV emission.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{is_prime, prime_divisors};
use crate::config::Config;
use crate::conjugacy::conjugacy_classes;
use crate::error::{param_err, Error, Result};
use crate::group::{Family, Group};
use crate::matching::{exact_max_matching, gowers_matching_upper, heuristic_matching, quasirandom_degree};
use crate::modrep::semisimple_summary;

pub const SCHEMA: &str = "grouptensor/v1";

/// Label attached to every Gowers value.
pub const GOWERS_CONSTANT: &str =
    "threshold |A||B||C| <= |G|^3/D, m <= 3*floor(cbrt(|G|^3/D)) + 2, clamped at |G|";

/// Groups up to this order also get an exact maximum matching.
pub const EXACT_MATCHING_ORDER: usize = 16;

/// Largest prime accepted by [`gap_eval`]; keeps every quantity in `u128`.
pub const GAP_MAX_PRIME: u64 = 1 << 40;

/// Heuristic matching iterations used by [`bounds_report`].
pub const REPORT_HEURISTIC_ITERS: usize = 200;

/// A characteristic: a prime dividing the order, or every prime coprime to it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ell {
    Prime(u32),
    Coprime,
}

impl fmt::Display for Ell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ell::Prime(p) => write!(f, "{p}"),
            Ell::Coprime => f.write_str("coprime"),
        }
    }
}

impl Serialize for Ell {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Ell::Prime(p) => s.serialize_u32(*p),
            Ell::Coprime => s.serialize_str("coprime"),
        }
    }
}

impl<'de> Deserialize<'de> for Ell {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u32),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(p) => Ok(Ell::Prime(p)),
            Raw::Str(s) if s == "coprime" => Ok(Ell::Coprime),
            Raw::Str(s) => s
                .parse()
                .map(Ell::Prime)
                .map_err(|_| serde::de::Error::custom(format!("bad characteristic {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowSource {
    /// Computed by chopping the regular module.
    Modrep,
    /// Closed-form lower bound; the group was above the modrep cap.
    Formula,
    /// Semisimple group algebra, value `|G|`.
    Maschke,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllRow {
    pub ell: Ell,
    pub dim_semisimple: Option<usize>,
    pub dim_radical: Option<usize>,
    pub source: RowSource,
    pub simple_count: Option<usize>,
    pub ell_regular_classes: Option<usize>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VacuousFlags {
    /// Upper bound at least the order.
    pub matching_upper: bool,
    /// Lower bound at most 1.
    pub matching_lower: bool,
    /// Lower bound at most 1.
    pub sr_group_lower: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub group: String,
    pub order: usize,
    #[serde(rename = "D_lower")]
    pub d_lower: u64,
    pub seed: u64,
    pub class_count: Option<usize>,
    pub matching_lower: usize,
    pub matching_heuristic: usize,
    pub matching_exact: Option<usize>,
    pub matching_upper: u64,
    pub gowers_constant: String,
    pub per_ell: Vec<EllRow>,
    pub sr_group_lower: usize,
    pub vacuous_flags: VacuousFlags,
    pub errors: Vec<String>,
}

fn derive_seed(seed: u64, tag: u64) -> u64 {
    seed ^ tag.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Run `f` over `jobs` on a bounded pool of scoped threads, keeping order.
fn run_pool<J: Sync, T: Send>(jobs: &[J], f: impl Fn(&J) -> T + Sync) -> Vec<T> {
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(jobs.len())
        .max(1);
    let next = AtomicUsize::new(0);
    let out: Mutex<Vec<Option<T>>> = Mutex::new((0..jobs.len()).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= jobs.len() {
                    break;
                }
                let r = f(&jobs[i]);
                out.lock().expect("pool poisoned")[i] = Some(r);
            });
        }
    });
    out.into_inner()
        .expect("pool poisoned")
        .into_iter()
        .map(|r| r.expect("every job ran"))
        .collect()
}

/// `Σ_{i=0}^{(p-1)/2} (2i+1)^2`.
pub fn char_p_formula(p: u128) -> u128 {
    (0..=(p - 1) / 2).map(|i| (2 * i + 1) * (2 * i + 1)).sum()
}

/// `max(1, (ceil((p-5)/4) - 1) * ((p-1)/2)^2 + 1)`.
pub fn char_ell_formula(p: u128) -> u128 {
    // ceil((p-5)/4) - 1
    let k = (p as i128 - 2).div_euclid(4) - 1;
    let h = ((p - 1) / 2) as i128;
    (k * h * h + 1).max(1) as u128
}

/// Lower bound on `dim F_ℓ[G]/J` without constructing modules.
fn formula_lower(g: &Group, ell: u64) -> usize {
    match *g.family() {
        Family::Psl2(p) if ell == p => char_p_formula(p as u128) as usize,
        Family::Sl2(p) if ell == p => (p * (p + 1) * (2 * p + 1) / 6) as usize,
        Family::Psl2(p) | Family::Sl2(p) => char_ell_formula(p as u128) as usize,
        _ => 1,
    }
}

fn ell_row(g: &Arc<Group>, ell: u64, seed: u64, cfg: &Config, regular: Option<usize>) -> EllRow {
    let n = g.order();
    let mut row = EllRow {
        ell: Ell::Prime(ell as u32),
        dim_semisimple: None,
        dim_radical: None,
        source: RowSource::Modrep,
        simple_count: None,
        ell_regular_classes: regular,
        error: None,
    };
    if n > cfg.modrep_cap {
        let v = formula_lower(g, ell);
        row.source = RowSource::Formula;
        row.dim_semisimple = Some(v);
        row.dim_radical = Some(n - v);
        return row;
    }
    match semisimple_summary(g, ell as u32, derive_seed(seed, ell), cfg) {
        Ok(s) => {
            row.dim_semisimple = Some(s.dim_semisimple);
            row.dim_radical = Some(s.dim_radical);
            row.simple_count = Some(s.simples.len());
            if let Some(r) = regular {
                if s.brauer_count() != r {
                    row.error = Some(format!(
                        "Brauer count {} differs from {r} ell-regular classes",
                        s.brauer_count()
                    ));
                }
            }
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

/// Bounds table for one group.
///
/// Rows for individual characteristics that fail carry an error marker and
/// no value; the rest of the report is still filled in.
pub fn bounds_report(g: &Arc<Group>, seed: u64, cfg: &Config) -> Result<BoundsReport> {
    let n = g.order();
    let mut errors = Vec::new();
    let classes = match conjugacy_classes(g, cfg) {
        Ok(c) => Some(c),
        Err(e) => {
            errors.push(format!("conjugacy: {e}"));
            None
        }
    };
    let primes = prime_divisors(n as u64);
    let mut per_ell = run_pool(&primes, |&ell| {
        let regular = classes.as_ref().map(|c| c.ell_regular_count(ell));
        ell_row(g, ell, seed, cfg, regular)
    });
    per_ell.push(EllRow {
        ell: Ell::Coprime,
        dim_semisimple: Some(n),
        dim_radical: Some(0),
        source: RowSource::Maschke,
        simple_count: None,
        ell_regular_classes: classes.as_ref().map(|c| c.len()),
        error: None,
    });
    let sr_group_lower = per_ell
        .iter()
        .filter_map(|r| r.dim_semisimple)
        .min()
        .expect("coprime row always has a value");

    let heuristic = heuristic_matching(g, derive_seed(seed, 0), REPORT_HEURISTIC_ITERS)?;
    let matching_heuristic = heuristic.m();
    let matching_exact = if n <= EXACT_MATCHING_ORDER {
        match exact_max_matching(g, cfg) {
            Ok((m, _)) => Some(m),
            Err(e) => {
                errors.push(format!("exact matching: {e}"));
                None
            }
        }
    } else {
        None
    };
    let matching_lower = matching_exact.unwrap_or(0).max(matching_heuristic);
    let d_lower = quasirandom_degree(g);
    let matching_upper = gowers_matching_upper(n as u128, d_lower)? as u64;

    Ok(BoundsReport {
        group: g.descriptor(),
        order: n,
        d_lower: d_lower as u64,
        seed,
        class_count: classes.as_ref().map(|c| c.len()),
        matching_lower,
        matching_heuristic,
        matching_exact,
        matching_upper,
        gowers_constant: GOWERS_CONSTANT.to_string(),
        per_ell,
        sr_group_lower,
        vacuous_flags: VacuousFlags {
            matching_upper: matching_upper >= n as u64,
            matching_lower: matching_lower <= 1,
            sr_group_lower: sr_group_lower <= 1,
        },
        errors,
    })
}

/// Closed-form lower bound on `SR(psl2:p)` against the Gowers upper bound
/// on `M(psl2:p)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapCurve {
    pub p: u64,
    pub sr_lb_coprime: u128,
    pub sr_lb_char_p: u128,
    pub sr_lb_char_ell: u128,
    pub sr_lb: u128,
    pub m_ub: u128,
    /// `sr_lb / m_ub` in lowest terms.
    pub ratio_num: u128,
    pub ratio_den: u128,
    pub ratio: f64,
    pub ratio_exceeds_one: bool,
}

pub fn gap_eval(p: u64) -> Result<GapCurve> {
    if p == 2 || !is_prime(p) {
        return Err(param_err!("{p} is not an odd prime"));
    }
    if p > GAP_MAX_PRIME {
        return Err(param_err!("{p} above the largest supported prime {GAP_MAX_PRIME}"));
    }
    let q = p as u128;
    let order = (q - 1) * q * (q + 1) / 2;
    let sr_lb_char_p = char_p_formula(q);
    let sr_lb_char_ell = char_ell_formula(q);
    let sr_lb = order.min(sr_lb_char_p).min(sr_lb_char_ell);
    let m_ub = gowers_matching_upper(order, (q - 1) / 2)?;
    let g = sr_lb.gcd(&m_ub);
    Ok(GapCurve {
        p,
        sr_lb_coprime: order,
        sr_lb_char_p,
        sr_lb_char_ell,
        sr_lb,
        m_ub,
        ratio_num: sr_lb / g,
        ratio_den: m_ub / g,
        ratio: sr_lb as f64 / m_ub as f64,
        ratio_exceeds_one: sr_lb > m_ub,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapScan {
    pub limit: u64,
    pub primes_scanned: usize,
    /// First odd prime whose ratio exceeds 1.
    pub crossover: Option<u64>,
    /// Whether every prime from the crossover up to the limit stays above 1.
    pub stays_above_one: bool,
    pub last_below: Option<GapCurve>,
    pub at_crossover: Option<GapCurve>,
}

/// Evaluate the gap curve at every odd prime up to `limit`.
pub fn gap_scan(limit: u64) -> Result<GapScan> {
    let mut primes_scanned = 0;
    let mut crossover = None;
    let mut last_below = None;
    let mut at_crossover = None;
    let mut stays_above_one = true;
    for p in (3..=limit.min(GAP_MAX_PRIME)).step_by(2).filter(|&p| is_prime(p)) {
        primes_scanned += 1;
        let c = gap_eval(p)?;
        if crossover.is_none() {
            if c.ratio_exceeds_one {
                crossover = Some(p);
                at_crossover = Some(c);
            } else {
                last_below = Some(c);
            }
        } else if !c.ratio_exceeds_one {
            stays_above_one = false;
        }
    }
    Ok(GapScan {
        limit,
        primes_scanned,
        crossover,
        stays_above_one: crossover.is_some() && stays_above_one,
        last_below,
        at_crossover,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeRow {
    pub group: String,
    pub order: usize,
    pub min_ell: Option<u32>,
    pub min_dim_semisimple: Option<usize>,
    pub ratio: Option<f64>,
    pub error: Option<String>,
}

/// `min_ℓ dim F_ℓ[G]/J / |G|` over primes dividing the order, computed
/// exactly. The trivial group has no such prime and reports ratio 1.
pub fn quasirandom_probe(groups: &[Arc<Group>], seed: u64, cfg: &Config) -> Vec<ProbeRow> {
    let jobs: Vec<(usize, u64)> = groups
        .iter()
        .enumerate()
        .flat_map(|(i, g)| prime_divisors(g.order() as u64).into_iter().map(move |l| (i, l)))
        .collect();
    let results = run_pool(&jobs, |&(i, ell)| {
        semisimple_summary(&groups[i], ell as u32, derive_seed(seed, ell), cfg)
    });
    groups
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let n = g.order();
            let mut row = ProbeRow {
                group: g.descriptor(),
                order: n,
                min_ell: None,
                min_dim_semisimple: None,
                ratio: None,
                error: None,
            };
            let mut best: Option<(usize, u32)> = None;
            for ((j, ell), r) in jobs.iter().zip(&results) {
                if *j != i {
                    continue;
                }
                match r {
                    Ok(s) if best.is_none_or(|(b, _)| s.dim_semisimple < b) => {
                        best = Some((s.dim_semisimple, *ell as u32))
                    }
                    Ok(_) => {}
                    Err(e) if row.error.is_none() => row.error = Some(format!("ell = {ell}: {e}")),
                    Err(_) => {}
                }
            }
            if row.error.is_none() {
                let (v, ell) = best.unwrap_or((n, 0));
                row.min_ell = (ell != 0).then_some(ell);
                row.min_dim_semisimple = Some(v);
                row.ratio = Some(v as f64 / n as f64);
            }
            row
        })
        .collect()
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: &'static str,
    #[serde(flatten)]
    body: &'a T,
}

/// `{"schema": "grouptensor/v1", ...fields of body}`. The body must
/// serialize as a map.
pub fn to_json_envelope<T: Serialize>(body: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(&Envelope { schema: SCHEMA, body })?)
}

#[derive(Serialize, Deserialize)]
struct ReportList {
    reports: Vec<BoundsReport>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(param_err!("unknown format {s:?}; expected json or csv")),
        }
    }
}

pub fn reports_to_json(reports: &[BoundsReport]) -> Result<String> {
    to_json_envelope(&ReportList {
        reports: reports.to_vec(),
    })
}

pub fn reports_from_json(text: &str) -> Result<Vec<BoundsReport>> {
    #[derive(Deserialize)]
    struct Tagged {
        schema: String,
        reports: Vec<BoundsReport>,
    }
    let t: Tagged = serde_json::from_str(text).map_err(|e| Error::Input(format!("report JSON: {e}")))?;
    if t.schema != SCHEMA {
        return Err(Error::Input(format!("unsupported schema {:?}", t.schema)));
    }
    Ok(t.reports)
}

/// One CSV line per `per_ell` row, after a header.
pub fn reports_to_csv(reports: &[BoundsReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Serde(e.to_string());
    w.write_record([
        "group",
        "order",
        "ell",
        "dim_semisimple",
        "dim_radical",
        "source",
        "simple_count",
        "ell_regular_classes",
        "error",
    ])
    .map_err(csv_err)?;
    let opt = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
    for r in reports {
        for row in &r.per_ell {
            let source = match row.source {
                RowSource::Modrep => "modrep",
                RowSource::Formula => "formula",
                RowSource::Maschke => "maschke",
            };
            w.write_record([
                r.group.clone(),
                r.order.to_string(),
                row.ell.to_string(),
                opt(row.dim_semisimple),
                opt(row.dim_radical),
                source.to_string(),
                opt(row.simple_count),
                opt(row.ell_regular_classes),
                row.error.clone().unwrap_or_default(),
            ])
            .map_err(csv_err)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Serde(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Serde(e.to_string()))
}

pub fn render(reports: &[BoundsReport], format: Format) -> Result<String> {
    match format {
        Format::Json => reports_to_json(reports),
        Format::Csv => reports_to_csv(reports),
    }
}

/// Write rendered reports to `path`.
pub fn emit(reports: &[BoundsReport], format: Format, path: &Path) -> Result<()> {
    let text = render(reports, format)?;
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut f = std::fs::File::create(path).map_err(io)?;
    f.write_all(text.as_bytes()).map_err(io)?;
    if !text.ends_with('\n') {
        f.write_all(b"\n").map_err(io)?;
    }
    Ok(())
}
