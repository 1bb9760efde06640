use std::ops::RangeInclusive;

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ir::{Action, BinOp, Interaction, Kind, LifelineId, LoopKind, MessageId, Signature};
use crate::opsem::{frontier, terminates};
use crate::traces::{GlobalTrace, MultiTrace};

/// Relative weights of the nine symbols drawn at each node.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SymbolWeights {
    pub empty: f64,
    pub action: f64,
    pub strict: f64,
    pub seq: f64,
    pub par: f64,
    pub alt: f64,
    pub loop_s: f64,
    pub loop_w: f64,
    pub loop_p: f64,
}

impl Default for SymbolWeights {
    fn default() -> Self {
        SymbolWeights {
            empty: 1.0,
            action: 1.0,
            strict: 1.0,
            seq: 1.0,
            par: 1.0,
            alt: 1.0,
            loop_s: 1.0,
            loop_w: 1.0,
            loop_p: 1.0,
        }
    }
}

impl SymbolWeights {
    fn as_array(&self) -> [f64; 9] {
        [
            self.empty,
            self.action,
            self.strict,
            self.seq,
            self.par,
            self.alt,
            self.loop_s,
            self.loop_w,
            self.loop_p,
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenParams {
    pub lifeline_count: usize,
    pub message_count: usize,
    /// Depth counts nodes on the longest root-to-leaf path; a single leaf has depth 1.
    pub min_depth: usize,
    pub max_depth: usize,
    pub min_symbols: usize,
    pub symbol_weights: SymbolWeights,
    pub rng_seed: u64,
    /// Rejection-sampling budget.
    pub max_attempts: usize,
}

impl Default for GenParams {
    fn default() -> Self {
        Self::paper_preset()
    }
}

impl GenParams {
    /// Five lifelines, six messages, depth at least 6 and at least 20 symbols.
    pub fn paper_preset() -> Self {
        GenParams {
            lifeline_count: 5,
            message_count: 6,
            min_depth: 6,
            max_depth: 8,
            min_symbols: 20,
            symbol_weights: SymbolWeights::default(),
            rng_seed: 0,
            max_attempts: 100_000,
        }
    }

    pub fn signature(&self) -> Signature {
        Signature::new(
            (1..=self.lifeline_count).map(|k| format!("l{k}")),
            (1..=self.message_count).map(|k| format!("m{k}")),
        )
        .expect("generated names are valid")
    }

    pub fn validate(&self) -> Result<(), GenError> {
        if self.lifeline_count == 0 || self.message_count == 0 {
            return Err(GenError::Infeasible("the signature needs a lifeline and a message".into()));
        }
        if self.min_depth > self.max_depth {
            return Err(GenError::Infeasible(format!(
                "min_depth {} exceeds max_depth {}",
                self.min_depth, self.max_depth
            )));
        }
        if self.max_depth == 0 || self.min_symbols == 0 {
            return Err(GenError::Infeasible("depth and symbol bounds must be positive".into()));
        }
        let max_nodes = if self.max_depth >= 63 { u64::MAX } else { (1u64 << self.max_depth) - 1 };
        if self.min_symbols as u64 > max_nodes {
            return Err(GenError::Infeasible(format!(
                "{} symbols do not fit within depth {}",
                self.min_symbols, self.max_depth
            )));
        }
        let w = self.symbol_weights.as_array();
        if w.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(GenError::Infeasible("symbol weights must be finite and non-negative".into()));
        }
        if w[1] <= 0.0 {
            return Err(GenError::Infeasible("the action weight must be positive".into()));
        }
        if self.min_depth > 1 && w[2..].iter().all(|x| *x == 0.0) {
            return Err(GenError::Infeasible("no operator can be drawn".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("infeasible generation parameters: {0}")]
    Infeasible(String),
    #[error("no conforming term found within {0} attempts")]
    Exhausted(usize),
}

/// Draws simplified terms until one meets the depth and size minima.
pub fn gen_interaction(params: &GenParams) -> Result<(Signature, Interaction), GenError> {
    params.validate()?;
    let sig = params.signature();
    let mut rng = ChaCha8Rng::seed_from_u64(params.rng_seed);
    let weights = params.symbol_weights.as_array();
    let all = WeightedIndex::new(weights).expect("validated weights");
    let leaves = WeightedIndex::new(&weights[..2]).expect("action weight is positive");
    for _ in 0..params.max_attempts {
        let i = draw(&sig, &mut rng, &all, &leaves, 1, params.max_depth).simplify();
        if i.depth() >= params.min_depth && i.symbol_count() >= params.min_symbols {
            return Ok((sig, i));
        }
    }
    Err(GenError::Exhausted(params.max_attempts))
}

fn draw(
    sig: &Signature,
    rng: &mut ChaCha8Rng,
    all: &WeightedIndex<f64>,
    leaves: &WeightedIndex<f64>,
    depth: usize,
    max_depth: usize,
) -> Interaction {
    let symbol = if depth >= max_depth { leaves.sample(rng) } else { all.sample(rng) };
    let sub = |rng: &mut ChaCha8Rng| draw(sig, rng, all, leaves, depth + 1, max_depth);
    match symbol {
        0 => Interaction::Empty,
        1 => Interaction::Act(random_action(sig, rng)),
        2..=5 => {
            let op = [BinOp::Strict, BinOp::Seq, BinOp::Par, BinOp::Alt][symbol - 2];
            let l = sub(rng);
            let r = sub(rng);
            Interaction::binary(op, l, r)
        }
        _ => {
            let k = [LoopKind::Strict, LoopKind::Weak, LoopKind::Par][symbol - 6];
            Interaction::looped(k, sub(rng))
        }
    }
}

fn random_action(sig: &Signature, rng: &mut impl Rng) -> Action {
    let l = LifelineId(rng.gen_range(0..sig.lifeline_count() as u32));
    random_action_on(sig, l, rng)
}

fn random_action_on(sig: &Signature, l: LifelineId, rng: &mut impl Rng) -> Action {
    let kind = if rng.gen_bool(0.5) { Kind::Emit } else { Kind::Recv };
    let message = MessageId(rng.gen_range(0..sig.message_count() as u32));
    Action { lifeline: l, kind, message }
}

const RETRY_BUDGET: usize = 100;

/// Samples an accepted trace by a random walk over execution steps. A
/// target length is drawn uniformly from `len_range`; the walk is accepted at
/// the first point at or beyond the target where the residual interaction
/// terminates, provided the length is still in range. Returns the global
/// trace and its projection over `sig`.
pub fn gen_accepted(
    sig: &Signature,
    i: &Interaction,
    len_range: RangeInclusive<usize>,
    rng: &mut impl Rng,
) -> Option<(GlobalTrace, MultiTrace)> {
    let (lo, hi) = (*len_range.start(), *len_range.end());
    if lo > hi {
        return None;
    }
    for _ in 0..RETRY_BUDGET {
        let target = rng.gen_range(lo..=hi);
        let mut cur = i.simplify();
        let mut walk = Vec::new();
        loop {
            if walk.len() >= target && walk.len() <= hi && terminates(&cur) {
                let t = GlobalTrace(walk);
                let mu = MultiTrace::project(&sig.all_lifelines(), &t).expect("actions over sig");
                return Some((t, mu));
            }
            if walk.len() >= hi {
                break;
            }
            let steps = frontier(&cur);
            if steps.is_empty() {
                break;
            }
            let k = rng.gen_range(0..steps.len());
            let s = steps.into_iter().nth(k).expect("index in range");
            walk.push(s.action);
            cur = s.follow_up;
        }
    }
    None
}

/// Independently truncates every component at a uniform length.
pub fn gen_prefix(mu: &MultiTrace, rng: &mut impl Rng) -> MultiTrace {
    let comps: Vec<_> = mu
        .components()
        .map(|(l, c)| (l, c[..rng.gen_range(0..=c.len())].to_vec()))
        .collect();
    MultiTrace::from_components(&mu.lifelines(), comps).expect("same components")
}

/// Inserts a random action of a random component's lifeline at a random index.
pub fn mutate_noise(sig: &Signature, mu: &MultiTrace, rng: &mut impl Rng) -> MultiTrace {
    let lifelines: Vec<LifelineId> = mu.lifelines().into_iter().collect();
    let l = lifelines[rng.gen_range(0..lifelines.len())];
    let a = random_action_on(sig, l, rng);
    let mut comp = mu.component(l).expect("chosen from the trace").to_vec();
    let at = rng.gen_range(0..=comp.len());
    comp.insert(at, a);
    let mut out = mu.clone();
    out.set_component(l, comp).expect("chosen from the trace");
    out
}

/// Exchanges two distinct positions of one component holding at least two actions.
pub fn mutate_swap_act(mu: &MultiTrace, rng: &mut impl Rng) -> Option<MultiTrace> {
    let eligible: Vec<LifelineId> = mu.components().filter(|(_, c)| c.len() >= 2).map(|(l, _)| l).collect();
    if eligible.is_empty() {
        return None;
    }
    let l = eligible[rng.gen_range(0..eligible.len())];
    let mut comp = mu.component(l).expect("eligible").to_vec();
    let x = rng.gen_range(0..comp.len());
    let mut y = rng.gen_range(0..comp.len() - 1);
    if y >= x {
        y += 1;
    }
    comp.swap(x, y);
    let mut out = mu.clone();
    out.set_component(l, comp).expect("eligible");
    Some(out)
}

/// Copies into `mu1` the component of `mu2` on a lifeline where they differ.
pub fn mutate_swap_comp(mu1: &MultiTrace, mu2: &MultiTrace, rng: &mut impl Rng) -> Option<MultiTrace> {
    if mu1.lifelines() != mu2.lifelines() {
        return None;
    }
    let differing: Vec<LifelineId> = mu1
        .components()
        .zip(mu2.components())
        .filter(|((_, a), (_, b))| a != b)
        .map(|((l, _), _)| l)
        .collect();
    if differing.is_empty() {
        return None;
    }
    let l = differing[rng.gen_range(0..differing.len())];
    let mut out = mu1.clone();
    out.set_component(l, mu2.component(l).expect("same lifelines").to_vec()).expect("same lifelines");
    Some(out)
}
