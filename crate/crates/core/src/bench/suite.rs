use std::io;
use std::time::Duration;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gen::{gen_accepted, gen_interaction, gen_prefix, mutate_noise, mutate_swap_act, mutate_swap_comp, GenError, GenParams};
use crate::analysis::{explore, ExploreConfig, Verdict};
use crate::ir::{Interaction, Signature};
use crate::traces::MultiTrace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TraceKind {
    #[serde(rename = "ACPT")]
    Accepted,
    #[serde(rename = "PREF")]
    Prefix,
    #[serde(rename = "NOIS")]
    Noise,
    #[serde(rename = "SACT")]
    SwapAction,
    #[serde(rename = "SCMP")]
    SwapComponent,
}

impl TraceKind {
    pub const ALL: [TraceKind; 5] = [
        TraceKind::Accepted,
        TraceKind::Prefix,
        TraceKind::Noise,
        TraceKind::SwapAction,
        TraceKind::SwapComponent,
    ];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "base")]
    Base,
    #[serde(rename = "por")]
    Por,
    #[serde(rename = "loc")]
    Loc,
    #[serde(rename = "por+loc")]
    PorLoc,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Base, Method::Por, Method::Loc, Method::PorLoc];

    pub fn config(self, mode: Mode, timeout: Duration) -> ExploreConfig {
        ExploreConfig {
            por: matches!(self, Method::Por | Method::PorLoc),
            loc: matches!(self, Method::Loc | Method::PorLoc),
            stop_on_ok: mode == Mode::StopOnOk,
            timeout: Some(timeout),
            ..ExploreConfig::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Full,
    StopOnOk,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteConfig {
    pub seed: u64,
    pub interactions: usize,
    /// Traces drawn per kind and interaction.
    pub traces_per_kind: usize,
    pub min_trace_len: usize,
    pub max_trace_len: usize,
    pub timeout_ms: u64,
    pub methods: Vec<Method>,
    pub modes: Vec<Mode>,
    pub generator: GenParams,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            interactions: 10,
            traces_per_kind: 24,
            min_trace_len: 1,
            max_trace_len: 30,
            timeout_ms: 3000,
            methods: Method::ALL.to_vec(),
            modes: vec![Mode::Full, Mode::StopOnOk],
            generator: GenParams::paper_preset(),
        }
    }
}

/// One multi-trace to analyze against one generated interaction.
#[derive(Clone, Debug)]
pub struct Instance {
    pub interaction_id: usize,
    pub trace_id: usize,
    pub kind: TraceKind,
    pub signature: Signature,
    pub interaction: Interaction,
    pub mtrace: MultiTrace,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub interaction_id: usize,
    pub trace_id: usize,
    pub trace_kind: TraceKind,
    pub trace_len: usize,
    pub method: Method,
    pub mode: Mode,
    pub verdict: Verdict,
    /// Baseline verdict for the same instance, used to label mutants.
    pub truth: Verdict,
    pub node_count: usize,
    pub elapsed_us: u128,
}

fn interaction_seed(master: u64, k: usize) -> u64 {
    master ^ (k as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Generates the interactions and every trace kind for each of them.
/// Duplicate interactions are skipped so the corpus holds distinct terms.
pub fn build_instances(cfg: &SuiteConfig) -> Result<Vec<Instance>, GenError> {
    let mut out = Vec::new();
    let mut terms: Vec<Interaction> = Vec::new();
    let mut attempt = 0usize;
    while terms.len() < cfg.interactions {
        let params = GenParams { rng_seed: interaction_seed(cfg.seed, attempt), ..cfg.generator.clone() };
        attempt += 1;
        let (sig, i) = gen_interaction(&params)?;
        if terms.contains(&i) {
            if attempt > cfg.interactions * 100 + 100 {
                return Err(GenError::Exhausted(attempt));
            }
            continue;
        }
        let k = terms.len();
        terms.push(i.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(params.rng_seed.rotate_left(17) ^ 0xA5A5);
        out.extend(instances_for(cfg, k, &sig, &i, &mut rng));
    }
    Ok(out)
}

fn instances_for(
    cfg: &SuiteConfig,
    k: usize,
    sig: &Signature,
    i: &Interaction,
    rng: &mut impl Rng,
) -> Vec<Instance> {
    let accepted: Vec<MultiTrace> = (0..cfg.traces_per_kind)
        .filter_map(|_| gen_accepted(sig, i, cfg.min_trace_len..=cfg.max_trace_len, rng).map(|(_, mu)| mu))
        .collect();
    let prefixes: Vec<MultiTrace> = accepted.iter().map(|mu| gen_prefix(mu, rng)).collect();
    let noise: Vec<MultiTrace> = prefixes.iter().map(|mu| mutate_noise(sig, mu, rng)).collect();
    let swap_act: Vec<MultiTrace> = prefixes.iter().filter_map(|mu| mutate_swap_act(mu, rng)).collect();
    let swap_comp: Vec<MultiTrace> = (0..prefixes.len())
        .filter_map(|j| {
            let other = &prefixes[(j + 1) % prefixes.len()];
            mutate_swap_comp(&prefixes[j], other, rng)
        })
        .collect();
    let mut out = Vec::new();
    for (kind, set) in [
        (TraceKind::Accepted, accepted),
        (TraceKind::Prefix, prefixes),
        (TraceKind::Noise, noise),
        (TraceKind::SwapAction, swap_act),
        (TraceKind::SwapComponent, swap_comp),
    ] {
        for (trace_id, mtrace) in set.into_iter().enumerate() {
            out.push(Instance {
                interaction_id: k,
                trace_id,
                kind,
                signature: sig.clone(),
                interaction: i.clone(),
                mtrace,
            });
        }
    }
    out
}

/// Analyzes one instance with every configured method and mode.
pub fn run_instance(cfg: &SuiteConfig, inst: &Instance) -> Vec<Row> {
    let timeout = Duration::from_millis(cfg.timeout_ms);
    let mut rows = Vec::new();
    let mut truth = None;
    for &mode in &cfg.modes {
        for &method in &cfg.methods {
            let report = explore(&inst.signature, &inst.interaction, &inst.mtrace, &method.config(mode, timeout))
                .expect("generated instances share their signature");
            if method == Method::Base && truth.is_none() && report.verdict != Verdict::Timeout {
                truth = Some(report.verdict);
            }
            rows.push(Row {
                interaction_id: inst.interaction_id,
                trace_id: inst.trace_id,
                trace_kind: inst.kind,
                trace_len: inst.mtrace.len(),
                method,
                mode,
                verdict: report.verdict,
                truth: Verdict::Timeout,
                node_count: report.node_count,
                elapsed_us: report.elapsed.as_micros(),
            });
        }
    }
    let truth = truth.unwrap_or(Verdict::Timeout);
    for r in &mut rows {
        r.truth = truth;
    }
    rows
}

/// Runs the whole suite on the rayon pool. Rows come out in instance order.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<Row>, GenError> {
    let instances = build_instances(cfg)?;
    if let Some(first) = instances.first() {
        // Warm-up run, discarded.
        let _ = run_instance(cfg, first);
    }
    let rows: Vec<Vec<Row>> = instances.par_iter().map(|inst| run_instance(cfg, inst)).collect();
    Ok(rows.into_iter().flatten().collect())
}

pub fn write_csv<W: io::Write>(rows: &[Row], out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: io::Read>(input: R) -> Result<Vec<Row>, csv::Error> {
    csv::Reader::from_reader(input).deserialize().collect()
}

/// Trace-length buckets used when summarizing: 1-6, 7-13, 14-20, 21+.
pub fn length_bucket(len: usize) -> &'static str {
    match len {
        0..=6 => "1-6",
        7..=13 => "7-13",
        14..=20 => "14-20",
        _ => "21+",
    }
}

pub const BUCKETS: [&str; 4] = ["1-6", "7-13", "14-20", "21+"];

pub fn median(values: &mut [usize]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_unstable();
    let n = values.len();
    Some(if n % 2 == 1 {
        values[n / 2] as f64
    } else {
        (values[n / 2 - 1] + values[n / 2]) as f64 / 2.0
    })
}

/// Median node count of `method` in full mode per length bucket, over
/// instances that did not time out. Returns `(bucket, samples, median)`.
pub fn bucket_medians(rows: &[Row], method: Method) -> Vec<(&'static str, usize, Option<f64>)> {
    BUCKETS
        .iter()
        .map(|b| {
            let mut v: Vec<usize> = rows
                .iter()
                .filter(|r| {
                    r.method == method
                        && r.mode == Mode::Full
                        && r.verdict != Verdict::Timeout
                        && length_bucket(r.trace_len) == *b
                })
                .map(|r| r.node_count)
                .collect();
            let n = v.len();
            (*b, n, median(&mut v))
        })
        .collect()
}
