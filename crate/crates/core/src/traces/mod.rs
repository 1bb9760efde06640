//! Global traces, multi-traces and their algebra.

mod algebra;
mod text;

use std::fmt;

use crate::ir::{Action, LifelineId, LifelineSet, Signature};

pub use algebra::{
    denotational_multitraces, denotational_traces, global_concat, global_shuffle, global_weak_seq,
    kleene_bounded, mt_interleave, mt_strict_seq, mt_union, oracle_prefix_membership, KleeneOp,
    MultiTraceSet, TraceSet,
};
pub use text::{display_multitrace, parse_global_trace, parse_multitrace, print_multitrace};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TraceError {
    #[error("lifeline #{0} is not part of the multi-trace")]
    UnknownLifeline(u32),
    #[error("multi-traces are defined over different lifeline sets")]
    SignatureMismatch,
    #[error("the oracle only accepts loop-free interactions")]
    LoopNotSupported,
}

/// A finite sequence of actions over any lifelines.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GlobalTrace(pub Vec<Action>);

impl GlobalTrace {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Whether some action occurs on `l`.
    pub fn conflicts(&self, l: LifelineId) -> bool {
        conflict(&self.0, l)
    }
}

pub fn conflict(t: &[Action], l: LifelineId) -> bool {
    t.iter().any(|a| a.lifeline == l)
}

/// One local trace per lifeline of a lifeline set, kept sorted by lifeline.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiTrace {
    components: Vec<(LifelineId, Vec<Action>)>,
}

impl MultiTrace {
    /// The empty multi-trace `ε_L`.
    pub fn empty(lifelines: &LifelineSet) -> Self {
        MultiTrace { components: lifelines.iter().map(|l| (*l, Vec::new())).collect() }
    }

    pub fn empty_for(sig: &Signature) -> Self {
        Self::empty(&sig.all_lifelines())
    }

    /// Dispatches each action of `t` to its lifeline's component.
    pub fn project(lifelines: &LifelineSet, t: &GlobalTrace) -> Result<Self, TraceError> {
        let mut mu = Self::empty(lifelines);
        for a in &t.0 {
            mu.component_mut(a.lifeline)?.push(*a);
        }
        Ok(mu)
    }

    /// Builds a multi-trace from explicit components. Actions placed on the
    /// wrong component are rejected.
    pub fn from_components(
        lifelines: &LifelineSet,
        components: impl IntoIterator<Item = (LifelineId, Vec<Action>)>,
    ) -> Result<Self, TraceError> {
        let mut mu = Self::empty(lifelines);
        for (l, actions) in components {
            if let Some(a) = actions.iter().find(|a| a.lifeline != l) {
                return Err(TraceError::UnknownLifeline(a.lifeline.0));
            }
            *mu.component_mut(l)? = actions;
        }
        Ok(mu)
    }

    pub fn lifelines(&self) -> LifelineSet {
        self.components.iter().map(|(l, _)| *l).collect()
    }

    pub fn lifeline_count(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> impl Iterator<Item = (LifelineId, &[Action])> {
        self.components.iter().map(|(l, c)| (*l, c.as_slice()))
    }

    pub fn component(&self, l: LifelineId) -> Option<&[Action]> {
        self.index(l).map(|i| self.components[i].1.as_slice())
    }

    fn index(&self, l: LifelineId) -> Option<usize> {
        self.components.binary_search_by_key(&l, |(x, _)| *x).ok()
    }

    fn component_mut(&mut self, l: LifelineId) -> Result<&mut Vec<Action>, TraceError> {
        let i = self.index(l).ok_or(TraceError::UnknownLifeline(l.0))?;
        Ok(&mut self.components[i].1)
    }

    pub(crate) fn set_component(&mut self, l: LifelineId, actions: Vec<Action>) -> Result<(), TraceError> {
        *self.component_mut(l)? = actions;
        Ok(())
    }

    /// Cumulative length `|μ|`.
    pub fn len(&self) -> usize {
        self.components.iter().map(|(_, c)| c.len()).sum()
    }

    /// True iff every component is empty.
    pub fn is_empty(&self) -> bool {
        self.components.iter().all(|(_, c)| c.is_empty())
    }

    /// Lifelines whose component is empty.
    pub fn empty_lifelines(&self) -> LifelineSet {
        self.components.iter().filter(|(_, c)| c.is_empty()).map(|(l, _)| *l).collect()
    }

    /// Removes `a` from the head of its component, if it is there.
    pub fn head_consume(&self, a: Action) -> Option<MultiTrace> {
        let i = self.index(a.lifeline)?;
        if self.components[i].1.first() != Some(&a) {
            return None;
        }
        let mut out = self.clone();
        out.components[i].1.remove(0);
        Some(out)
    }

    /// The action at the head of component `l`.
    pub fn head(&self, l: LifelineId) -> Option<Action> {
        self.component(l).and_then(|c| c.first().copied())
    }

    /// `a ^ μ`: prepends `a` to its component.
    pub fn push_front(&self, a: Action) -> Result<MultiTrace, TraceError> {
        let mut out = self.clone();
        out.component_mut(a.lifeline)?.insert(0, a);
        Ok(out)
    }

    /// `μ ^ a`: appends `a` to its component.
    pub fn push_back(&self, a: Action) -> Result<MultiTrace, TraceError> {
        let mut out = self.clone();
        out.component_mut(a.lifeline)?.push(a);
        Ok(out)
    }

    /// Drops the components of `h`. Every lifeline of `h` must be present.
    pub fn remove_lifelines(&self, h: &LifelineSet) -> Result<MultiTrace, TraceError> {
        if let Some(l) = h.iter().find(|l| self.index(**l).is_none()) {
            return Err(TraceError::UnknownLifeline(l.0));
        }
        Ok(MultiTrace {
            components: self.components.iter().filter(|(l, _)| !h.contains(l)).cloned().collect(),
        })
    }

    /// Keeps only component `l`.
    pub fn isolate(&self, l: LifelineId) -> Result<MultiTrace, TraceError> {
        let i = self.index(l).ok_or(TraceError::UnknownLifeline(l.0))?;
        Ok(MultiTrace { components: vec![self.components[i].clone()] })
    }

    /// Whether each component of `self` is a word-prefix of the matching component of `other`.
    pub fn is_multiprefix_of(&self, other: &MultiTrace) -> Result<bool, TraceError> {
        if self.components.len() != other.components.len()
            || self.components.iter().zip(&other.components).any(|((a, _), (b, _))| a != b)
        {
            return Err(TraceError::SignatureMismatch);
        }
        Ok(self.components.iter().zip(&other.components).all(|((_, p), (_, c))| c.starts_with(p)))
    }

    /// Cuts every component to at most `max` actions.
    pub fn truncate_each(&self, max: usize) -> MultiTrace {
        let mut out = self.clone();
        for (_, c) in &mut out.components {
            c.truncate(max);
        }
        out
    }

    /// Componentwise concatenation `μ1 ; μ2`.
    pub fn concat(&self, other: &MultiTrace) -> Result<MultiTrace, TraceError> {
        if self.lifelines() != other.lifelines() {
            return Err(TraceError::SignatureMismatch);
        }
        let mut out = self.clone();
        for ((_, c), (_, d)) in out.components.iter_mut().zip(&other.components) {
            c.extend_from_slice(d);
        }
        Ok(out)
    }

    /// Every multi-prefix of `self`.
    pub fn multiprefixes(&self) -> Vec<MultiTrace> {
        let mut out = vec![MultiTrace {
            components: self.components.iter().map(|(l, _)| (*l, Vec::new())).collect(),
        }];
        for (idx, (_, c)) in self.components.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * (c.len() + 1));
            for mu in &out {
                for k in 0..=c.len() {
                    let mut m = mu.clone();
                    m.components[idx].1 = c[..k].to_vec();
                    next.push(m);
                }
            }
            out = next;
        }
        out
    }

    /// Compact byte encoding, injective over multi-traces.
    pub fn key_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(4 + self.len() * 9);
        for (l, c) in &self.components {
            out.extend_from_slice(&l.0.to_le_bytes());
            out.extend_from_slice(&(c.len() as u32).to_le_bytes());
            for a in c {
                out.push(a.kind as u8);
                out.extend_from_slice(&a.message.0.to_le_bytes());
            }
        }
        out
    }
}

impl fmt::Display for TraceSummary<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", display_multitrace(self.0, self.1))
    }
}

/// Display adaptor pairing a multi-trace with the signature naming its actions.
pub struct TraceSummary<'a>(pub &'a Signature, pub &'a MultiTrace);
