//! The analysis graph and its exploration.
//!
//! Vertices pair an interaction with the part of the multi-trace still to be
//! explained. From a vertex, exactly one kind of move applies, tried in this
//! order: the multi-trace is empty (the verdict is `Ok`); some components are
//! exhausted (their lifelines are removed in one step); otherwise every
//! enabled action heading its component is executed.

mod export;
mod rules;

use std::collections::{HashMap, HashSet, VecDeque};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::ir::{Action, Interaction, LifelineSet, Position, Signature};
use crate::traces::MultiTrace;

pub use export::{export_dot, export_jsonl};
pub use rules::{one_unambiguous, por_successors, succ_executions, succ_removal, Successor, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Ok,
    Nok,
    Timeout,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Ok => "Ok",
            Verdict::Nok => "Nok",
            Verdict::Timeout => "Timeout",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    #[default]
    Dfs,
    Bfs,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExploreConfig {
    /// Follow a single one-unambiguous step when one is enabled.
    pub por: bool,
    /// Discard vertices failing a per-lifeline check.
    pub loc: bool,
    /// Length cap applied to each component before the per-lifeline check; `None` means no cap.
    pub loc_depth: Option<usize>,
    pub strategy: Strategy,
    pub timeout: Option<Duration>,
    pub stop_on_ok: bool,
    /// Keep every vertex and edge in the report for export.
    pub record_graph: bool,
}

impl Default for ExploreConfig {
    fn default() -> Self {
        ExploreConfig {
            por: false,
            loc: false,
            loc_depth: None,
            strategy: Strategy::Dfs,
            timeout: None,
            stop_on_ok: true,
            record_graph: false,
        }
    }
}

impl ExploreConfig {
    /// Plain exploration of the whole reachable graph.
    pub fn full() -> Self {
        ExploreConfig { stop_on_ok: false, ..Self::default() }
    }
}

/// Label of an edge of the analysis graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Execute(Action, Position),
    Remove(LifelineSet),
    Ok,
}

#[derive(Clone, Debug)]
pub struct DumpVertex {
    pub vertex: Vertex,
    /// Expanded without producing any successor.
    pub dead: bool,
    /// Rejected by the per-lifeline check.
    pub loc_failed: bool,
}

#[derive(Clone, Debug)]
pub struct GraphDump {
    pub signature: Signature,
    pub vertices: Vec<DumpVertex>,
    /// `(source, target, label)`; a `None` target is the `Ok` verdict node.
    pub edges: Vec<(usize, Option<usize>, Step)>,
}

#[derive(Clone, Debug)]
pub struct ExploreReport {
    pub verdict: Verdict,
    /// Distinct vertices discovered, excluding the `Ok` verdict node.
    pub node_count: usize,
    /// Edges traversed, including edges into already discovered vertices and into `Ok`.
    pub edge_count: usize,
    pub elapsed: Duration,
    pub graph: Option<GraphDump>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("the multi-trace does not have one component per declared lifeline")]
    TraceSignatureMismatch,
    #[error("the interaction uses a lifeline or message outside the signature")]
    InteractionSignatureMismatch,
}

/// Decides whether `mu` is a multi-prefix of a behavior of `i`.
pub fn explore(
    sig: &Signature,
    i: &Interaction,
    mu: &MultiTrace,
    cfg: &ExploreConfig,
) -> Result<ExploreReport, AnalysisError> {
    if mu.lifelines() != sig.all_lifelines() {
        return Err(AnalysisError::TraceSignatureMismatch);
    }
    let mut ok = true;
    i.for_each_action(&mut |a| {
        ok &= sig.contains_lifeline(a.lifeline) && (a.message.0 as usize) < sig.message_count();
    });
    if !ok {
        return Err(AnalysisError::InteractionSignatureMismatch);
    }
    Ok(explore_vertex(sig, Vertex::new(i.simplify(), mu.clone()), cfg))
}

/// Explores from an arbitrary vertex, whose lifeline set may be a subset of `sig`'s.
pub fn explore_vertex(sig: &Signature, start: Vertex, cfg: &ExploreConfig) -> ExploreReport {
    let started = Instant::now();
    let deadline = cfg.timeout.map(|t| started + t);
    let mut memo = LocalMemo::default();
    let graph = cfg.record_graph.then(|| GraphDump {
        signature: sig.clone(),
        vertices: Vec::new(),
        edges: Vec::new(),
    });
    let mut search = Search::new(cfg, deadline, &mut memo, graph);
    let verdict = search.run(start);
    let node_count = search.node_count;
    let edge_count = search.edge_count;
    let graph = search.graph.take();
    ExploreReport { verdict, node_count, edge_count, elapsed: started.elapsed(), graph }
}

/// Whether every lifeline's component, cut to `depth` actions, is accepted by
/// the interaction restricted to that lifeline.
pub fn local_analysis(v: &Vertex, depth: Option<usize>) -> bool {
    let mut memo = LocalMemo::default();
    local_check(v, depth, None, &mut memo).unwrap_or(false)
}

type LocalMemo = HashMap<(Vec<u8>, Vec<u8>), bool>;

struct TimedOut;

fn local_check(
    v: &Vertex,
    depth: Option<usize>,
    deadline: Option<Instant>,
    memo: &mut LocalMemo,
) -> Result<bool, TimedOut> {
    for (l, comp) in v.mtrace.components() {
        let comp = match depth {
            Some(d) if comp.len() > d => &comp[..d],
            _ => comp,
        };
        let local_i = v.interaction.isolate_lifeline(l).simplify();
        let local_mu = v
            .mtrace
            .isolate(l)
            .expect("component of the trace")
            .truncate_each(comp.len());
        let key = (local_i.canonical_key(), local_mu.key_bytes());
        let accepted = match memo.get(&key) {
            Some(r) => *r,
            None => {
                let cfg = ExploreConfig::default();
                let mut inner = LocalMemo::default();
                let mut s = Search::new(&cfg, deadline, &mut inner, None);
                let r = match s.run(Vertex::new(local_i, local_mu)) {
                    Verdict::Ok => true,
                    Verdict::Nok => false,
                    Verdict::Timeout => return Err(TimedOut),
                };
                memo.insert(key, r);
                r
            }
        };
        if !accepted {
            return Ok(false);
        }
    }
    Ok(true)
}

struct Search<'a> {
    cfg: &'a ExploreConfig,
    deadline: Option<Instant>,
    memo: &'a mut LocalMemo,
    seen: HashSet<Vec<u8>>,
    node_count: usize,
    edge_count: usize,
    graph: Option<GraphDump>,
    /// Vertex ids by key, kept only when recording the graph.
    ids: HashMap<Vec<u8>, usize>,
}

enum Discovery {
    Known(Option<usize>),
    New { id: Option<usize>, expand: bool },
    Ok(Option<usize>),
}

impl<'a> Search<'a> {
    fn new(
        cfg: &'a ExploreConfig,
        deadline: Option<Instant>,
        memo: &'a mut LocalMemo,
        graph: Option<GraphDump>,
    ) -> Self {
        Search {
            cfg,
            deadline,
            memo,
            seen: HashSet::new(),
            node_count: 0,
            edge_count: 0,
            graph,
            ids: HashMap::new(),
        }
    }

    /// Registers a vertex. `Ok` is reported when its multi-trace is empty.
    fn discover(&mut self, v: &Vertex) -> Result<Discovery, TimedOut> {
        let key = v.key();
        if self.seen.contains(&key) {
            return Ok(Discovery::Known(self.ids.get(&key).copied()));
        }
        self.node_count += 1;
        let is_ok = v.mtrace.is_empty();
        let loc_failed = !is_ok && self.cfg.loc && !local_check(v, self.cfg.loc_depth, self.deadline, self.memo)?;
        let id = self.graph.as_mut().map(|g| {
            g.vertices.push(DumpVertex { vertex: v.clone(), dead: false, loc_failed });
            g.vertices.len() - 1
        });
        if let Some(id) = id {
            self.ids.insert(key.clone(), id);
        }
        self.seen.insert(key);
        if is_ok {
            self.edge_count += 1;
            if let (Some(g), Some(id)) = (self.graph.as_mut(), id) {
                g.edges.push((id, None, Step::Ok));
            }
            return Ok(Discovery::Ok(id));
        }
        Ok(Discovery::New { id, expand: !loc_failed })
    }

    fn record_edge(&mut self, from: Option<usize>, to: Option<usize>, step: Step) {
        self.edge_count += 1;
        if let (Some(g), Some(from)) = (self.graph.as_mut(), from) {
            g.edges.push((from, to, step));
        }
    }

    fn run(&mut self, start: Vertex) -> Verdict {
        match self.search(start) {
            Ok(v) => v,
            Err(TimedOut) => Verdict::Timeout,
        }
    }

    fn search(&mut self, start: Vertex) -> Result<Verdict, TimedOut> {
        let mut found = false;
        let mut pending: VecDeque<(Vertex, Option<usize>)> = VecDeque::new();
        match self.discover(&start)? {
            Discovery::Ok(_) => return Ok(Verdict::Ok),
            Discovery::New { id, expand: true } => pending.push_back((start, id)),
            _ => {}
        }
        while let Some((v, id)) = match self.cfg.strategy {
            Strategy::Dfs => pending.pop_back(),
            Strategy::Bfs => pending.pop_front(),
        } {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    return Err(TimedOut);
                }
            }
            let children: Vec<(Step, Vertex)> = match succ_removal(&v) {
                Some((h, next)) => vec![(Step::Remove(h), next)],
                None => {
                    let succ = if self.cfg.por { por_successors(&v) } else { succ_executions(&v) };
                    succ.into_iter()
                        .map(|s| (Step::Execute(s.action, s.position), s.vertex))
                        .collect()
                }
            };
            if children.is_empty() {
                if let (Some(g), Some(id)) = (self.graph.as_mut(), id) {
                    g.vertices[id].dead = true;
                }
                continue;
            }
            let mut fresh = Vec::new();
            for (step, child) in children {
                match self.discover(&child)? {
                    Discovery::Known(cid) => self.record_edge(id, cid, step),
                    Discovery::Ok(cid) => {
                        self.record_edge(id, cid, step);
                        found = true;
                        if self.cfg.stop_on_ok {
                            return Ok(Verdict::Ok);
                        }
                    }
                    Discovery::New { id: cid, expand } => {
                        self.record_edge(id, cid, step);
                        if expand {
                            fresh.push((child, cid));
                        }
                    }
                }
            }
            match self.cfg.strategy {
                Strategy::Dfs => pending.extend(fresh.into_iter().rev()),
                Strategy::Bfs => pending.extend(fresh),
            }
        }
        Ok(if found { Verdict::Ok } else { Verdict::Nok })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::{ambiguous_alt, ambiguous_alt_trace, optional_reply, pubsub, pubsub_partial_trace};

    #[test]
    fn empty_trace_is_accepted_immediately() {
        let (sig, i) = pubsub();
        let r = explore(&sig, &i, &MultiTrace::empty_for(&sig), &ExploreConfig::full()).unwrap();
        assert_eq!(r.verdict, Verdict::Ok);
        assert_eq!(r.node_count, 1);
    }

    #[test]
    fn pubsub_partial_observation() {
        let (sig, i) = pubsub();
        let mu = pubsub_partial_trace();
        let full = explore(&sig, &i, &mu, &ExploreConfig::full()).unwrap();
        assert_eq!(full.verdict, Verdict::Ok);
        assert_eq!(full.node_count, 10);
        let early = explore(&sig, &i, &mu, &ExploreConfig::default()).unwrap();
        assert_eq!(early.verdict, Verdict::Ok);
        assert!(early.node_count <= 10);
    }

    #[test]
    fn local_checks_miss_global_mismatch() {
        let (sig, i) = ambiguous_alt();
        let mu = ambiguous_alt_trace();
        assert!(local_analysis(&Vertex::new(i.clone(), mu.clone()), None));
        let r = explore(&sig, &i, &mu, &ExploreConfig::full()).unwrap();
        assert_eq!(r.verdict, Verdict::Nok);
    }

    #[test]
    fn signature_mismatch_is_reported() {
        let (sig, i) = pubsub();
        let (reply_sig, _) = optional_reply();
        assert_eq!(
            explore(&sig, &i, &MultiTrace::empty_for(&reply_sig), &ExploreConfig::default()).unwrap_err(),
            AnalysisError::TraceSignatureMismatch
        );
        let (alt_sig, _) = ambiguous_alt();
        assert_eq!(
            explore(&alt_sig, &i, &MultiTrace::empty_for(&alt_sig), &ExploreConfig::default()).unwrap_err(),
            AnalysisError::InteractionSignatureMismatch
        );
    }

    #[test]
    fn zero_timeout_reports_timeout() {
        let (sig, i) = pubsub();
        let cfg = ExploreConfig { timeout: Some(Duration::ZERO), ..ExploreConfig::full() };
        let r = explore(&sig, &i, &pubsub_partial_trace(), &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Timeout);
    }
}
