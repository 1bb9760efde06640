mod common;

use std::collections::BTreeSet;

use common::{cases, global_trace, interleavings, lifeline_subset, multitrace, naive_sigma, naive_weak_seq, project, term};
use mtv_core::analysis::{explore, ExploreConfig, Verdict};
use mtv_core::ir::{parse_model, Action, BinOp, Interaction, Kind, LifelineId, LifelineSet, LoopKind, MessageId, Signature};
use mtv_core::traces::{
    denotational_multitraces, denotational_traces, global_concat, global_shuffle, global_weak_seq, mt_interleave,
    mt_strict_seq, mt_union, oracle_prefix_membership, parse_multitrace, GlobalTrace, MultiTrace, MultiTraceSet,
    TraceSet,
};
use proptest::prelude::*;

fn lifelines(n: u32) -> LifelineSet {
    (0..n).map(LifelineId).collect()
}

fn remove_all(s: &MultiTraceSet, h: &LifelineSet) -> MultiTraceSet {
    s.iter().map(|mu| mu.remove_lifelines(h).unwrap()).collect()
}

fn project_all(l: &LifelineSet, ts: &TraceSet) -> MultiTraceSet {
    ts.iter().map(|t| project(l, &t.0)).collect()
}

fn closure(s: &MultiTraceSet) -> MultiTraceSet {
    s.iter().flat_map(|mu| mu.multiprefixes()).collect()
}

fn mt_set(max: usize) -> impl Strategy<Value = MultiTraceSet> {
    proptest::collection::btree_set(multitrace(3, 2, 2), 0..=max)
}

/// Every global trace over `alphabet` of length exactly `len`.
fn words(alphabet: &[Action], len: usize) -> Vec<Vec<Action>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                alphabet.iter().map(move |a| {
                    let mut w = w.clone();
                    w.push(*a);
                    w
                })
            })
            .collect();
    }
    out
}

#[test]
fn projection_is_a_homomorphism() {
    let l = lifelines(2);
    let alphabet: Vec<Action> = [0, 1]
        .into_iter()
        .flat_map(|k| [Kind::Emit, Kind::Recv].map(|kind| Action { lifeline: LifelineId(k), kind, message: MessageId(0) }))
        .collect();
    let mut pairs = 0;
    let mut lax = 0;
    for total in 0..=4 {
        for left in 0..=total {
            for t1 in words(&alphabet, left) {
                for t2 in words(&alphabet, total - left) {
                    let s1 = TraceSet::from([GlobalTrace(t1.clone())]);
                    let s2 = TraceSet::from([GlobalTrace(t2.clone())]);
                    let p1 = project_all(&l, &s1);
                    let p2 = project_all(&l, &s2);

                    let union: TraceSet = s1.union(&s2).cloned().collect();
                    assert_eq!(project_all(&l, &union), mt_union(&p1, &p2));
                    assert_eq!(project_all(&l, &global_concat(&s1, &s2)), mt_strict_seq(&p1, &p2));
                    assert_eq!(project_all(&l, &global_weak_seq(&s1, &s2)), mt_strict_seq(&p1, &p2));

                    let shuffle = global_shuffle(&s1, &s2);
                    let projected = project_all(&l, &shuffle);
                    let componentwise = mt_interleave(&p1, &p2);
                    assert!(projected.is_subset(&componentwise));
                    if projected != componentwise {
                        lax += 1;
                    }

                    let naive_shuffle: TraceSet = interleavings(&t1, &t2).into_iter().map(GlobalTrace).collect();
                    assert_eq!(shuffle, naive_shuffle);
                    let naive_weak: TraceSet = naive_weak_seq(&t1, &t2).into_iter().map(GlobalTrace).collect();
                    assert_eq!(global_weak_seq(&s1, &s2), naive_weak);
                    pairs += 1;
                }
            }
        }
    }
    assert_eq!(pairs, 1593);
    // Only pairs where both operands touch both lifelines can lose an ordering.
    assert!(lax > 0 && lax < pairs);
}

fn has_interleaving(i: &Interaction) -> bool {
    match i {
        Interaction::Empty | Interaction::Act(_) => false,
        Interaction::Binary(op, l, r) => *op == BinOp::Par || has_interleaving(l) || has_interleaving(r),
        Interaction::Loop(k, b) => *k == LoopKind::Par || has_interleaving(b),
    }
}

#[test]
fn componentwise_interleaving_overapproximates_projection() {
    let sig = Signature::new(["l1", "l2"], ["m"]).unwrap();
    let (sig2, i) = parse_model(
        "lifelines: l1, l2\nmessages: m\ninteraction: par(strict(l1!m, l2?m), strict(l2!m, l1?m))\n",
    )
    .unwrap();
    assert_eq!(sig, sig2);
    let mu = parse_multitrace(&sig, "l1: l1?m.l1!m\nl2: l2?m.l2!m\n").unwrap();
    let l = sig.all_lifelines();
    assert!(denotational_multitraces(&i, &l, 4).unwrap().contains(&mu));
    let projected = project_all(&l, &denotational_traces(&i, 4));
    assert!(!projected.contains(&mu));
    assert_eq!(oracle_prefix_membership(&i, &mu), Ok(false));
    assert_eq!(explore(&sig, &i, &mu, &ExploreConfig::full()).unwrap().verdict, Verdict::Nok);
}

#[test]
fn multiprefix_counterexample() {
    let t = [
        Action::emit(LifelineId(0), MessageId(0)),
        Action::recv(LifelineId(1), MessageId(0)),
    ];
    let l = lifelines(2);
    let full = MultiTrace::project(&l, &GlobalTrace(t.to_vec())).unwrap();
    let from_words: MultiTraceSet = (0..=t.len()).map(|k| project(&l, &t[..k])).collect();
    let all: MultiTraceSet = full.multiprefixes().into_iter().collect();
    assert!(from_words.is_subset(&all));
    assert_eq!(from_words.len(), 3);
    assert_eq!(all.len(), 4);

    let witness = MultiTrace::from_components(&l, [(LifelineId(0), vec![]), (LifelineId(1), vec![t[1]])]).unwrap();
    assert!(witness.is_multiprefix_of(&full).unwrap());
    assert!(all.contains(&witness));
    assert!(!from_words.contains(&witness));
}

proptest! {
    #![proptest_config(cases(1000))]

    #[test]
    fn removal_after_adding_an_action(mu in multitrace(3, 2, 3), a in common::action(3, 2), h in lifeline_subset(3)) {
        let front = mu.push_front(a).unwrap().remove_lifelines(&h).unwrap();
        let back = mu.push_back(a).unwrap().remove_lifelines(&h).unwrap();
        let rest = mu.remove_lifelines(&h).unwrap();
        if h.contains(&a.lifeline) {
            prop_assert_eq!(&front, &rest);
            prop_assert_eq!(&back, &rest);
        } else {
            prop_assert_eq!(front, rest.push_front(a).unwrap());
            prop_assert_eq!(back, rest.push_back(a).unwrap());
        }
    }

    #[test]
    fn removal_distributes_over_operators(s1 in mt_set(3), s2 in mt_set(3), h in lifeline_subset(3)) {
        let r1 = remove_all(&s1, &h);
        let r2 = remove_all(&s2, &h);
        prop_assert_eq!(remove_all(&mt_union(&s1, &s2), &h), mt_union(&r1, &r2));
        prop_assert_eq!(remove_all(&mt_strict_seq(&s1, &s2), &h), mt_strict_seq(&r1, &r2));
        prop_assert_eq!(remove_all(&mt_interleave(&s1, &s2), &h), mt_interleave(&r1, &r2));
    }

    #[test]
    fn removal_commutes_with_semantics(i in term(3, 2, false, 8), h in lifeline_subset(3)) {
        let l = lifelines(3);
        let rest: LifelineSet = l.difference(&h).copied().collect();
        let n = i.action_count();
        let before = remove_all(&denotational_multitraces(&i, &l, n).unwrap(), &h);
        let after = denotational_multitraces(&i.remove_lifelines(&h), &rest, n).unwrap();
        prop_assert_eq!(before, after);

        let projected: MultiTraceSet = naive_sigma(&i, n).iter().map(|t| project(&l, t)).collect();
        let projected_after: MultiTraceSet =
            naive_sigma(&i.remove_lifelines(&h), n).iter().map(|t| project(&rest, t)).collect();
        prop_assert_eq!(remove_all(&projected, &h), projected_after);
    }

    #[test]
    fn projected_semantics_within_multitrace_semantics(i in term(3, 2, true, 6), n in 0usize..6) {
        let l = lifelines(3);
        let n = if i.has_loop() { n.min(4) } else { i.action_count() };
        let projected: MultiTraceSet = naive_sigma(&i, n).iter().map(|t| project(&l, t)).collect();
        let direct = denotational_multitraces(&i, &l, n).unwrap();
        prop_assert!(projected.is_subset(&direct));
        if !has_interleaving(&i) {
            prop_assert_eq!(direct, projected);
        }
    }

    #[test]
    fn word_prefixes_are_multiprefixes(t in global_trace(3, 2, 6)) {
        let l = lifelines(3);
        let full = MultiTrace::project(&l, &GlobalTrace(t.clone())).unwrap();
        prop_assert_eq!(&full, &project(&l, &t));
        let all: BTreeSet<MultiTrace> = full.multiprefixes().into_iter().collect();
        for k in 0..=t.len() {
            prop_assert!(all.contains(&project(&l, &t[..k])));
        }
    }

    #[test]
    fn removal_commutes_with_prefix_closure(m in mt_set(4), h in lifeline_subset(3)) {
        prop_assert_eq!(remove_all(&closure(&m), &h), closure(&remove_all(&m, &h)));
    }
}
