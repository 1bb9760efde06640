//! Structural operational semantics: termination, collision, pruning and
//! position-annotated execution.

use std::sync::Arc;

use crate::ir::{Action, BinOp, Interaction, LifelineId, LoopKind, Position};

/// One application of the execution relation `i --a@p--> i'`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExecStep {
    pub action: Action,
    /// Address of the executed action node in the source term.
    pub position: Position,
    pub follow_up: Interaction,
}

/// Whether the empty trace is accepted.
pub fn terminates(i: &Interaction) -> bool {
    match i {
        Interaction::Empty => true,
        Interaction::Act(_) => false,
        Interaction::Binary(BinOp::Alt, l, r) => terminates(l) || terminates(r),
        Interaction::Binary(_, l, r) => terminates(l) && terminates(r),
        Interaction::Loop(..) => true,
    }
}

/// Whether every accepted trace contains an action on `l`.
pub fn collides(i: &Interaction, l: LifelineId) -> bool {
    match i {
        Interaction::Empty | Interaction::Loop(..) => false,
        Interaction::Act(a) => a.lifeline == l,
        Interaction::Binary(BinOp::Alt, a, b) => collides(a, l) && collides(b, l),
        Interaction::Binary(_, a, b) => collides(a, l) || collides(b, l),
    }
}

/// The largest sub-behavior of `i` avoiding lifeline `l`, or `None` when
/// every behavior of `i` touches `l`. The result is simplified.
pub fn prune(i: &Interaction, l: LifelineId) -> Option<Interaction> {
    prune_with(i, l, true)
}

/// As [`prune`], but keeps the term structure (no ∅ elimination).
pub fn prune_unsimplified(i: &Interaction, l: LifelineId) -> Option<Interaction> {
    prune_with(i, l, false)
}

fn prune_with(i: &Interaction, l: LifelineId, simp: bool) -> Option<Interaction> {
    match i {
        Interaction::Empty => Some(Interaction::Empty),
        Interaction::Act(a) => (a.lifeline != l).then(|| i.clone()),
        Interaction::Binary(BinOp::Alt, a, b) => {
            match (prune_with(a, l, simp), prune_with(b, l, simp)) {
                (Some(pa), Some(pb)) => {
                    Some(Interaction::make_binary(BinOp::Alt, Arc::new(pa), Arc::new(pb), simp))
                }
                (Some(p), None) | (None, Some(p)) => Some(p),
                (None, None) => None,
            }
        }
        Interaction::Binary(op, a, b) => {
            let pa = prune_with(a, l, simp)?;
            let pb = prune_with(b, l, simp)?;
            Some(Interaction::make_binary(*op, Arc::new(pa), Arc::new(pb), simp))
        }
        Interaction::Loop(k, b) => Some(match prune_with(b, l, simp) {
            Some(p) => Interaction::make_loop(*k, Arc::new(p), simp),
            None => Interaction::Empty,
        }),
    }
}

/// All execution steps enabled in `i`, with simplified follow-ups, in
/// tie-break order: action (lifeline, kind, message), then position.
pub fn frontier(i: &Interaction) -> Vec<ExecStep> {
    sorted(exec(i, true))
}

/// As [`frontier`], but follow-ups keep every ∅ produced by the rules.
pub fn frontier_unsimplified(i: &Interaction) -> Vec<ExecStep> {
    sorted(exec(i, false))
}

fn sorted(raw: Vec<RawStep>) -> Vec<ExecStep> {
    let mut steps: Vec<ExecStep> = raw
        .into_iter()
        .map(|(action, mut rev, follow_up)| {
            rev.reverse();
            ExecStep { action, position: Position::from_digits(&rev), follow_up }
        })
        .collect();
    steps.sort_by(|x, y| (x.action, &x.position).cmp(&(y.action, &y.position)));
    steps
}

/// Position digits are accumulated leaf-first and reversed once at the end.
type RawStep = (Action, Vec<u8>, Interaction);

fn exec(i: &Interaction, simp: bool) -> Vec<RawStep> {
    let bin = |op, l: Interaction, r: &Arc<Interaction>| {
        Interaction::make_binary(op, Arc::new(l), r.clone(), simp)
    };
    match i {
        Interaction::Empty => Vec::new(),
        Interaction::Act(a) => vec![(*a, Vec::new(), Interaction::Empty)],
        Interaction::Binary(BinOp::Alt, l, r) => {
            let mut out = descend(exec(l, simp), 1, |_, f| f);
            out.extend(descend(exec(r, simp), 2, |_, f| f));
            out
        }
        Interaction::Binary(BinOp::Par, l, r) => {
            let mut out = descend(exec(l, simp), 1, |_, f| bin(BinOp::Par, f, r));
            out.extend(descend(exec(r, simp), 2, |_, f| {
                Interaction::make_binary(BinOp::Par, l.clone(), Arc::new(f), simp)
            }));
            out
        }
        Interaction::Binary(BinOp::Strict, l, r) => {
            let mut out = descend(exec(l, simp), 1, |_, f| bin(BinOp::Strict, f, r));
            if terminates(l) {
                out.extend(descend(exec(r, simp), 2, |_, f| f));
            }
            out
        }
        Interaction::Binary(BinOp::Seq, l, r) => {
            let mut out = descend(exec(l, simp), 1, |_, f| bin(BinOp::Seq, f, r));
            let right = exec(r, simp);
            if !right.is_empty() {
                // Pruning depends only on the lifeline, so it is computed once per lifeline.
                let mut pruned: Vec<(LifelineId, Option<Arc<Interaction>>)> = Vec::new();
                for (a, mut rev, f) in right {
                    let lf = a.lifeline;
                    let p = match pruned.iter().find(|(x, _)| *x == lf) {
                        Some((_, p)) => p.clone(),
                        None => {
                            let p = prune_with(l, lf, simp).map(Arc::new);
                            pruned.push((lf, p.clone()));
                            p
                        }
                    };
                    if let Some(p) = p {
                        rev.push(2);
                        out.push((a, rev, Interaction::make_binary(BinOp::Seq, p, Arc::new(f), simp)));
                    }
                }
            }
            out
        }
        Interaction::Loop(k, b) => {
            let whole = Arc::new(i.clone());
            descend(exec(b, simp), 1, |a, f| match k {
                LoopKind::Strict => {
                    Interaction::make_binary(BinOp::Strict, Arc::new(f), whole.clone(), simp)
                }
                LoopKind::Par => Interaction::make_binary(BinOp::Par, Arc::new(f), whole.clone(), simp),
                LoopKind::Weak => {
                    let rest = Interaction::make_binary(BinOp::Seq, Arc::new(f), whole.clone(), simp);
                    let p = prune_with(i, a.lifeline, simp).expect("loops never collide");
                    Interaction::make_binary(BinOp::Seq, Arc::new(p), Arc::new(rest), simp)
                }
            })
        }
    }
}

fn descend(
    steps: Vec<RawStep>,
    digit: u8,
    wrap: impl Fn(&Action, Interaction) -> Interaction,
) -> Vec<RawStep> {
    steps
        .into_iter()
        .map(|(a, mut rev, f)| {
            rev.push(digit);
            let f = wrap(&a, f);
            (a, rev, f)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::{LoopKind, Signature};
    use crate::samples::{pubsub, pubsub_signature};

    fn act(sig: &Signature, s: &str) -> Interaction {
        Interaction::act(sig.action(s).unwrap())
    }

    #[test]
    fn termination_examples() {
        let sig = pubsub_signature();
        assert!(terminates(&Interaction::Empty));
        let lw = Interaction::looped(
            LoopKind::Weak,
            Interaction::strict(act(&sig, "lp!pub"), act(&sig, "lb?pub")),
        );
        assert!(terminates(&lw));
        assert!(!terminates(&pubsub().1));
    }

    #[test]
    fn collision_examples() {
        let sig = pubsub_signature();
        let lb = sig.lifeline("lb").unwrap();
        let lp = sig.lifeline("lp").unwrap();
        assert!(collides(&act(&sig, "lb?pub"), lb));
        assert!(!collides(&Interaction::Empty, lb));
        assert!(!collides(&Interaction::alt(act(&sig, "lp!pub"), Interaction::Empty), lp));
    }

    #[test]
    fn pruning_examples() {
        let sig = pubsub_signature();
        let lb = sig.lifeline("lb").unwrap();
        let lw = Interaction::looped(
            LoopKind::Weak,
            Interaction::strict(act(&sig, "lp!pub"), act(&sig, "lb?pub")),
        );
        assert_eq!(prune(&lw, lb), Some(Interaction::Empty));
        let a = act(&sig, "lp!pub");
        assert_eq!(prune(&a, lb), Some(a));
        assert_eq!(prune(&Interaction::strict(act(&sig, "ls!sub"), act(&sig, "lb?sub")), lb), None);
    }

    #[test]
    fn single_action_frontier() {
        let sig = pubsub_signature();
        let a = act(&sig, "lp!pub");
        let steps = frontier(&a);
        assert_eq!(steps.len(), 1);
        assert_eq!(steps[0].action, sig.action("lp!pub").unwrap());
        assert!(steps[0].position.is_root());
        assert_eq!(steps[0].follow_up, Interaction::Empty);
        assert!(frontier(&Interaction::Empty).is_empty());
    }

    #[test]
    fn subscriber_removed_frontier_has_three_steps() {
        let (sig, i) = pubsub();
        let ls = sig.lifeline_set(["ls"]).unwrap();
        let term = i.remove_lifelines(&ls).simplify();
        let steps = frontier(&term);
        let names: Vec<String> = steps
            .iter()
            .map(|s| format!("{}@{}", sig.display_action(s.action), s.position))
            .collect();
        assert_eq!(steps.len(), 3, "{names:?}");
        let pubs: Vec<_> = steps.iter().filter(|s| s.action == sig.action("lp!pub").unwrap()).collect();
        assert_eq!(pubs.len(), 2);
        assert_ne!(pubs[0].position, pubs[1].position);
        assert_eq!(steps.iter().filter(|s| s.action == sig.action("lb?sub").unwrap()).count(), 1);
    }

    #[test]
    fn frontier_positions_address_the_action() {
        let (_, i) = pubsub();
        for s in frontier(&i) {
            assert_eq!(i.at(&s.position), Some(&Interaction::Act(s.action)));
        }
    }

    #[test]
    fn weak_sequence_right_side_needs_pruning() {
        let sig = Signature::new(["l1", "l2"], ["m"]).unwrap();
        // l1!m collides on l1, so the right occurrence is not reachable first.
        let t = Interaction::seq(act(&sig, "l1!m"), act(&sig, "l1!m"));
        let steps = frontier(&t);
        assert_eq!(steps.len(), 1);
        assert_eq!(steps[0].position.to_string(), "1");
        let t = Interaction::seq(act(&sig, "l1!m"), act(&sig, "l2?m"));
        assert_eq!(frontier(&t).len(), 2);
    }
}
