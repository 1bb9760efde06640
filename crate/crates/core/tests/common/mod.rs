//! Shared generators and reference oracles for the integration suites.
#![allow(dead_code)]

use std::collections::BTreeSet;

use mtv_core::ir::{Action, BinOp, Interaction, Kind, LifelineId, LifelineSet, LoopKind, MessageId, Signature};
use mtv_core::traces::MultiTrace;
use proptest::prelude::*;

pub fn signature(lifelines: usize, messages: usize) -> Signature {
    Signature::new(
        (1..=lifelines).map(|k| format!("l{k}")),
        (1..=messages).map(|k| format!("m{k}")),
    )
    .unwrap()
}

pub fn action(lifelines: usize, messages: usize) -> impl Strategy<Value = Action> {
    (0..lifelines as u32, any::<bool>(), 0..messages as u32).prop_map(|(l, emit, m)| Action {
        lifeline: LifelineId(l),
        kind: if emit { Kind::Emit } else { Kind::Recv },
        message: MessageId(m),
    })
}

fn binop() -> impl Strategy<Value = BinOp> {
    prop_oneof![Just(BinOp::Strict), Just(BinOp::Seq), Just(BinOp::Par), Just(BinOp::Alt)]
}

fn loopkind() -> impl Strategy<Value = LoopKind> {
    prop_oneof![Just(LoopKind::Strict), Just(LoopKind::Weak), Just(LoopKind::Par)]
}

/// Random terms (not simplified) with at most `max_actions` actions.
pub fn term(lifelines: usize, messages: usize, loops: bool, max_actions: usize) -> BoxedStrategy<Interaction> {
    let leaf = prop_oneof![
        1 => Just(Interaction::Empty),
        4 => action(lifelines, messages).prop_map(Interaction::Act),
    ];
    let t = leaf.prop_recursive(5, 24, 2, move |inner| {
        if loops {
            prop_oneof![
                4 => (binop(), inner.clone(), inner.clone()).prop_map(|(op, l, r)| Interaction::binary(op, l, r)),
                1 => (loopkind(), inner).prop_map(|(k, b)| Interaction::looped(k, b)),
            ]
            .boxed()
        } else {
            (binop(), inner.clone(), inner).prop_map(|(op, l, r)| Interaction::binary(op, l, r)).boxed()
        }
    });
    t.prop_filter("action budget", move |i| i.action_count() <= max_actions).boxed()
}

pub fn lifeline_subset(lifelines: usize) -> impl Strategy<Value = LifelineSet> {
    proptest::collection::vec(any::<bool>(), lifelines).prop_map(|bits| {
        bits.iter().enumerate().filter(|(_, b)| **b).map(|(k, _)| LifelineId(k as u32)).collect()
    })
}

/// A random multi-trace over all `lifelines` with components up to `max_len`.
pub fn multitrace(lifelines: usize, messages: usize, max_len: usize) -> impl Strategy<Value = MultiTrace> {
    proptest::collection::vec(
        proptest::collection::vec((any::<bool>(), 0..messages as u32), 0..=max_len),
        lifelines,
    )
    .prop_map(move |comps| {
        let all: LifelineSet = (0..lifelines as u32).map(LifelineId).collect();
        let comps = comps.into_iter().enumerate().map(|(l, c)| {
            let l = LifelineId(l as u32);
            let actions = c
                .into_iter()
                .map(|(e, m)| Action { lifeline: l, kind: if e { Kind::Emit } else { Kind::Recv }, message: MessageId(m) })
                .collect();
            (l, actions)
        });
        MultiTrace::from_components(&all, comps).unwrap()
    })
}

pub fn global_trace(lifelines: usize, messages: usize, max_len: usize) -> impl Strategy<Value = Vec<Action>> {
    proptest::collection::vec(action(lifelines, messages), 0..=max_len)
}

pub type Traces = BTreeSet<Vec<Action>>;

fn local(t: &[Action], l: LifelineId) -> Vec<Action> {
    t.iter().filter(|a| a.lifeline == l).copied().collect()
}

/// All interleavings of `a` and `b`.
pub fn interleavings(a: &[Action], b: &[Action]) -> Vec<Vec<Action>> {
    if a.is_empty() {
        return vec![b.to_vec()];
    }
    if b.is_empty() {
        return vec![a.to_vec()];
    }
    let mut out = Vec::new();
    for mut rest in interleavings(&a[1..], b) {
        rest.insert(0, a[0]);
        out.push(rest);
    }
    for mut rest in interleavings(a, &b[1..]) {
        rest.insert(0, b[0]);
        out.push(rest);
    }
    out
}

/// Weak sequencing by filtering interleavings: on every lifeline, all of
/// `a`'s actions precede `b`'s. Actions are tagged with their operand so that
/// identical actions stay distinguishable.
pub fn naive_weak_seq(a: &[Action], b: &[Action]) -> Vec<Vec<Action>> {
    let tagged = |t: &[Action], side: bool| t.iter().map(|x| (side, *x)).collect::<Vec<_>>();
    tagged_interleavings(&tagged(a, false), &tagged(b, true))
        .into_iter()
        .filter(|t| {
            t.iter().enumerate().all(|(k, (side, x))| {
                !*side || t[k + 1..].iter().all(|(s2, y)| *s2 || y.lifeline != x.lifeline)
            })
        })
        .map(|t| t.into_iter().map(|(_, x)| x).collect())
        .collect()
}

fn tagged_interleavings(a: &[(bool, Action)], b: &[(bool, Action)]) -> Vec<Vec<(bool, Action)>> {
    if a.is_empty() {
        return vec![b.to_vec()];
    }
    if b.is_empty() {
        return vec![a.to_vec()];
    }
    let mut out = Vec::new();
    for mut rest in tagged_interleavings(&a[1..], b) {
        rest.insert(0, a[0]);
        out.push(rest);
    }
    for mut rest in tagged_interleavings(a, &b[1..]) {
        rest.insert(0, b[0]);
        out.push(rest);
    }
    out
}

fn combine(x: &Traces, y: &Traces, n: usize, f: &dyn Fn(&[Action], &[Action]) -> Vec<Vec<Action>>) -> Traces {
    let mut out = Traces::new();
    for a in x {
        for b in y {
            if a.len() + b.len() <= n {
                out.extend(f(a, b));
            }
        }
    }
    out
}

fn concat(a: &[Action], b: &[Action]) -> Vec<Vec<Action>> {
    vec![a.iter().chain(b).copied().collect()]
}

/// Reference semantics: accepted global traces of length at most `n`.
/// Loops are unfolded `n` times, each unfolding composed on the left.
pub fn naive_sigma(i: &Interaction, n: usize) -> Traces {
    match i {
        Interaction::Empty => Traces::from([Vec::new()]),
        Interaction::Act(a) => {
            if n == 0 {
                Traces::new()
            } else {
                Traces::from([vec![*a]])
            }
        }
        Interaction::Binary(op, l, r) => {
            let x = naive_sigma(l, n);
            let y = naive_sigma(r, n);
            match op {
                BinOp::Alt => x.union(&y).cloned().collect(),
                BinOp::Strict => combine(&x, &y, n, &concat),
                BinOp::Seq => combine(&x, &y, n, &naive_weak_seq),
                BinOp::Par => combine(&x, &y, n, &interleavings),
            }
        }
        Interaction::Loop(k, b) => {
            let body = naive_sigma(b, n);
            let f: &dyn Fn(&[Action], &[Action]) -> Vec<Vec<Action>> = match k {
                LoopKind::Strict => &concat,
                LoopKind::Weak => &naive_weak_seq,
                LoopKind::Par => &interleavings,
            };
            let mut acc = Traces::from([Vec::new()]);
            let mut power = acc.clone();
            for _ in 0..n {
                power = combine(&power, &body, n, f);
                acc.extend(power.iter().cloned());
            }
            acc
        }
    }
}

/// Reference membership: some accepted trace extends `mu` on every lifeline.
pub fn naive_membership(i: &Interaction, mu: &MultiTrace) -> bool {
    naive_sigma(i, i.action_count()).iter().any(|t| {
        mu.components().all(|(l, c)| local(t, l).starts_with(c))
    })
}

pub fn project(lifelines: &LifelineSet, t: &[Action]) -> MultiTrace {
    let comps = lifelines.iter().map(|l| (*l, local(t, *l)));
    MultiTrace::from_components(lifelines, comps).unwrap()
}

/// Satisfiability by enumerating every assignment.
pub fn brute_force_sat(vars: usize, clauses: &[[i32; 3]]) -> bool {
    (0u32..(1 << vars)).any(|bits| {
        clauses.iter().all(|c| {
            c.iter().any(|lit| {
                let v = lit.unsigned_abs() - 1;
                ((bits >> v) & 1 == 1) == (*lit > 0)
            })
        })
    })
}

pub fn cases(n: u32) -> ProptestConfig {
    ProptestConfig { cases: n, failure_persistence: None, ..ProptestConfig::default() }
}
