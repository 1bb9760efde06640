use crate::ir::{Action, Interaction, LifelineSet, Position};
use crate::opsem::{frontier, frontier_unsimplified};
use crate::traces::MultiTrace;

/// A node of the analysis graph: a (simplified) interaction together with the
/// multi-trace that remains to be explained. The vertex's lifeline set is the
/// one carried by its multi-trace.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub interaction: Interaction,
    pub mtrace: MultiTrace,
}

impl Vertex {
    pub fn new(interaction: Interaction, mtrace: MultiTrace) -> Self {
        Vertex { interaction, mtrace }
    }

    pub fn lifelines(&self) -> LifelineSet {
        self.mtrace.lifelines()
    }

    /// Deduplication key: interaction bytes followed by multi-trace bytes.
    pub fn key(&self) -> Vec<u8> {
        let mut out = self.interaction.canonical_key();
        out.extend_from_slice(&self.mtrace.key_bytes());
        out
    }
}

/// An execution edge of the analysis graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Successor {
    pub action: Action,
    pub position: Position,
    pub vertex: Vertex,
}

/// Removes every lifeline whose component is exhausted, when there is at
/// least one such lifeline and at least one other is still observed.
pub fn succ_removal(v: &Vertex) -> Option<(LifelineSet, Vertex)> {
    let h = v.mtrace.empty_lifelines();
    if h.is_empty() || h.len() == v.mtrace.lifeline_count() {
        return None;
    }
    let interaction = v.interaction.remove_lifelines(&h).simplify();
    let mtrace = v.mtrace.remove_lifelines(&h).expect("empty lifelines belong to the trace");
    Some((h, Vertex { interaction, mtrace }))
}

/// One successor per enabled step whose action heads its component, in
/// tie-break order.
pub fn succ_executions(v: &Vertex) -> Vec<Successor> {
    let heads: Vec<Action> = v.mtrace.components().filter_map(|(_, c)| c.first().copied()).collect();
    if heads.is_empty() {
        return Vec::new();
    }
    frontier(&v.interaction)
        .into_iter()
        .filter_map(|s| {
            if !heads.contains(&s.action) {
                return None;
            }
            let mtrace = v.mtrace.head_consume(s.action)?;
            Some(Successor {
                action: s.action,
                position: s.position,
                vertex: Vertex { interaction: s.follow_up, mtrace },
            })
        })
        .collect()
}

/// Whether `a` has exactly one enabled occurrence once `i` is restricted to
/// the lifeline of `a`. The restriction keeps the term structure so that
/// positions coincide with those of `i`.
pub fn one_unambiguous(i: &Interaction, a: Action) -> bool {
    let local = i.isolate_lifeline(a.lifeline);
    frontier_unsimplified(&local).iter().filter(|s| s.action == a).count() == 1
}

/// Keeps only the first successor whose action is one-unambiguous, if any;
/// otherwise every execution successor.
pub fn por_successors(v: &Vertex) -> Vec<Successor> {
    let all = succ_executions(v);
    let mut checked: Vec<Action> = Vec::new();
    for (idx, s) in all.iter().enumerate() {
        if checked.contains(&s.action) {
            continue;
        }
        checked.push(s.action);
        if one_unambiguous(&v.interaction, s.action) {
            let mut all = all;
            return vec![all.swap_remove(idx)];
        }
    }
    all
}
