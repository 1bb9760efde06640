use std::collections::BTreeSet;

use super::{conflict, GlobalTrace, MultiTrace, TraceError};
use crate::ir::{Action, BinOp, Interaction, LifelineSet, LoopKind};

pub type TraceSet = BTreeSet<GlobalTrace>;
pub type MultiTraceSet = BTreeSet<MultiTrace>;

/// Composition used to iterate a multi-trace set under the bounded Kleene closure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KleeneOp {
    /// Componentwise concatenation `;`.
    Strict,
    /// Componentwise interleaving `||`.
    Interleave,
}

pub fn mt_union(s1: &MultiTraceSet, s2: &MultiTraceSet) -> MultiTraceSet {
    s1.union(s2).cloned().collect()
}

pub fn mt_strict_seq(s1: &MultiTraceSet, s2: &MultiTraceSet) -> MultiTraceSet {
    mt_strict_seq_bounded(s1, s2, usize::MAX)
}

pub fn mt_interleave(s1: &MultiTraceSet, s2: &MultiTraceSet) -> MultiTraceSet {
    mt_interleave_bounded(s1, s2, usize::MAX)
}

fn mt_strict_seq_bounded(s1: &MultiTraceSet, s2: &MultiTraceSet, n: usize) -> MultiTraceSet {
    let mut out = MultiTraceSet::new();
    for x in s1 {
        let lx = x.len();
        for y in s2 {
            if lx + y.len() <= n {
                out.insert(x.concat(y).expect("operands share a lifeline set"));
            }
        }
    }
    out
}

fn mt_interleave_bounded(s1: &MultiTraceSet, s2: &MultiTraceSet, n: usize) -> MultiTraceSet {
    let mut out = MultiTraceSet::new();
    for x in s1 {
        let lx = x.len();
        for y in s2 {
            if lx + y.len() > n {
                continue;
            }
            let mut partial = vec![Vec::new()];
            for ((l, cx), (_, cy)) in x.components().zip(y.components()) {
                let mut locals = BTreeSet::new();
                shuffle_into(cx, cy, &mut Vec::new(), &mut |t| {
                    locals.insert(t.to_vec());
                });
                let mut next = Vec::with_capacity(partial.len() * locals.len());
                for p in &partial {
                    for loc in &locals {
                        let mut q: Vec<(crate::ir::LifelineId, Vec<Action>)> = Vec::clone(p);
                        q.push((l, loc.clone()));
                        next.push(q);
                    }
                }
                partial = next;
            }
            let lifelines = x.lifelines();
            for comps in partial {
                out.insert(MultiTrace::from_components(&lifelines, comps).expect("same lifelines"));
            }
        }
    }
    out
}

fn shuffle_into(a: &[Action], b: &[Action], buf: &mut Vec<Action>, emit: &mut dyn FnMut(&[Action])) {
    match (a.split_first(), b.split_first()) {
        (None, None) => emit(buf),
        (None, Some(_)) | (Some(_), None) => {
            let len = buf.len();
            buf.extend_from_slice(a);
            buf.extend_from_slice(b);
            emit(buf);
            buf.truncate(len);
        }
        (Some((x, xs)), Some((y, ys))) => {
            buf.push(*x);
            shuffle_into(xs, b, buf, emit);
            buf.pop();
            buf.push(*y);
            shuffle_into(a, ys, buf, emit);
            buf.pop();
        }
    }
}

/// Interleavings of `a` and `b` where an action of `b` may overtake the
/// remainder of `a` only if that remainder has no action on its lifeline.
fn weak_seq_into(a: &[Action], b: &[Action], buf: &mut Vec<Action>, emit: &mut dyn FnMut(&[Action])) {
    match (a.split_first(), b.split_first()) {
        (None, _) | (_, None) => {
            let len = buf.len();
            buf.extend_from_slice(a);
            buf.extend_from_slice(b);
            emit(buf);
            buf.truncate(len);
        }
        (Some((x, xs)), Some((y, ys))) => {
            buf.push(*x);
            weak_seq_into(xs, b, buf, emit);
            buf.pop();
            if !conflict(a, y.lifeline) {
                buf.push(*y);
                weak_seq_into(a, ys, buf, emit);
                buf.pop();
            }
        }
    }
}

pub fn global_concat(t1: &TraceSet, t2: &TraceSet) -> TraceSet {
    global_bounded(t1, t2, usize::MAX, |a, b, buf, emit| {
        buf.extend_from_slice(a);
        buf.extend_from_slice(b);
        emit(buf);
        buf.clear();
    })
}

pub fn global_shuffle(t1: &TraceSet, t2: &TraceSet) -> TraceSet {
    global_bounded(t1, t2, usize::MAX, shuffle_into)
}

pub fn global_weak_seq(t1: &TraceSet, t2: &TraceSet) -> TraceSet {
    global_bounded(t1, t2, usize::MAX, weak_seq_into)
}

type PairEnum = fn(&[Action], &[Action], &mut Vec<Action>, &mut dyn FnMut(&[Action]));

fn global_bounded(t1: &TraceSet, t2: &TraceSet, n: usize, f: PairEnum) -> TraceSet {
    let mut out = TraceSet::new();
    let mut buf = Vec::new();
    for x in t1 {
        for y in t2 {
            if x.len() + y.len() <= n {
                f(&x.0, &y.0, &mut buf, &mut |t| {
                    out.insert(GlobalTrace(t.to_vec()));
                });
            }
        }
    }
    out
}

/// `{ x ∈ S^* : |x| ≤ n }` over multi-traces on `lifelines`.
pub fn kleene_bounded(s: &MultiTraceSet, lifelines: &LifelineSet, op: KleeneOp, n: usize) -> MultiTraceSet {
    kleene_capped(s, lifelines, op, n, n)
}

/// `⋃_{j ≤ cap} S^j` restricted to length `≤ n`.
pub fn kleene_capped(
    s: &MultiTraceSet,
    lifelines: &LifelineSet,
    op: KleeneOp,
    n: usize,
    cap: usize,
) -> MultiTraceSet {
    let compose = match op {
        KleeneOp::Strict => mt_strict_seq_bounded,
        KleeneOp::Interleave => mt_interleave_bounded,
    };
    iterate(MultiTrace::empty(lifelines), s, n, cap, compose)
}

fn iterate<T: Ord + Clone>(
    unit: T,
    s: &BTreeSet<T>,
    n: usize,
    cap: usize,
    compose: impl Fn(&BTreeSet<T>, &BTreeSet<T>, usize) -> BTreeSet<T>,
) -> BTreeSet<T> {
    let mut result = BTreeSet::from([unit]);
    let mut fresh = result.clone();
    for _ in 0..cap {
        let next: BTreeSet<T> = compose(&fresh, s, n).into_iter().filter(|x| !result.contains(x)).collect();
        if next.is_empty() {
            break;
        }
        result.extend(next.iter().cloned());
        fresh = next;
    }
    result
}

/// Accepted global traces of length at most `n`.
pub fn denotational_traces(i: &Interaction, n: usize) -> TraceSet {
    match i {
        Interaction::Empty => TraceSet::from([GlobalTrace::default()]),
        Interaction::Act(a) => {
            if n >= 1 {
                TraceSet::from([GlobalTrace(vec![*a])])
            } else {
                TraceSet::new()
            }
        }
        Interaction::Binary(op, l, r) => {
            let sl = denotational_traces(l, n);
            let sr = denotational_traces(r, n);
            match op {
                BinOp::Alt => sl.union(&sr).cloned().collect(),
                BinOp::Strict => global_bounded(&sl, &sr, n, |a, b, buf, emit| {
                    buf.extend_from_slice(a);
                    buf.extend_from_slice(b);
                    emit(buf);
                    buf.clear();
                }),
                BinOp::Seq => global_bounded(&sl, &sr, n, weak_seq_into),
                BinOp::Par => global_bounded(&sl, &sr, n, shuffle_into),
            }
        }
        Interaction::Loop(k, b) => {
            let sb = denotational_traces(b, n);
            let f: PairEnum = match k {
                LoopKind::Strict => |a, b, buf, emit| {
                    buf.extend_from_slice(a);
                    buf.extend_from_slice(b);
                    emit(buf);
                    buf.clear();
                },
                LoopKind::Weak => weak_seq_into,
                LoopKind::Par => shuffle_into,
            };
            iterate(GlobalTrace::default(), &sb, n, n, |x, y, n| global_bounded(x, y, n, f))
        }
    }
}

/// Accepted multi-traces over `lifelines` of cumulative length at most `n`,
/// computed directly with the multi-trace operators.
pub fn denotational_multitraces(
    i: &Interaction,
    lifelines: &LifelineSet,
    n: usize,
) -> Result<MultiTraceSet, TraceError> {
    Ok(match i {
        Interaction::Empty => MultiTraceSet::from([MultiTrace::empty(lifelines)]),
        Interaction::Act(a) => {
            let mu = MultiTrace::empty(lifelines).push_back(*a)?;
            if n >= 1 {
                MultiTraceSet::from([mu])
            } else {
                MultiTraceSet::new()
            }
        }
        Interaction::Binary(op, l, r) => {
            let sl = denotational_multitraces(l, lifelines, n)?;
            let sr = denotational_multitraces(r, lifelines, n)?;
            match op {
                BinOp::Alt => mt_union(&sl, &sr),
                BinOp::Strict | BinOp::Seq => mt_strict_seq_bounded(&sl, &sr, n),
                BinOp::Par => mt_interleave_bounded(&sl, &sr, n),
            }
        }
        Interaction::Loop(k, b) => {
            let sb = denotational_multitraces(b, lifelines, n)?;
            let op = match k {
                LoopKind::Strict | LoopKind::Weak => KleeneOp::Strict,
                LoopKind::Par => KleeneOp::Interleave,
            };
            kleene_bounded(&sb, lifelines, op, n)
        }
    })
}

/// Whether `mu` is a multi-prefix of the projection of some accepted global
/// trace of the loop-free interaction `i`, by full enumeration.
pub fn oracle_prefix_membership(i: &Interaction, mu: &MultiTrace) -> Result<bool, TraceError> {
    if i.has_loop() {
        return Err(TraceError::LoopNotSupported);
    }
    let lifelines = mu.lifelines();
    for t in denotational_traces(i, i.action_count()) {
        if mu.is_multiprefix_of(&MultiTrace::project(&lifelines, &t)?)? {
            return Ok(true);
        }
    }
    Ok(false)
}
