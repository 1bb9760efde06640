//! Small reference models used by the documentation, tests and the CLI.

use crate::ir::{parse_model, Interaction, Signature};
use crate::traces::{parse_multitrace, MultiTrace};

/// A publisher `lp`, broker `lb` and subscriber `ls`. The publisher may
/// publish any number of times before the subscription; afterwards each
/// publication is forwarded to the subscriber.
pub const PUBSUB_MODEL: &str = "\
# publish/subscribe through a broker
lifelines: lp, lb, ls
messages: pub, sub
interaction:
  seq(
    seq(
      loopW(strict(lp!pub, lb?pub)),
      strict(ls!sub, lb?sub)
    ),
    loopW(seq(strict(lp!pub, lb?pub), strict(lb!pub, ls?pub)))
  )
";

/// A partial observation of [`PUBSUB_MODEL`]: the subscriber has not logged anything.
pub const PUBSUB_PARTIAL_TRACE: &str = "lp: lp!pub\nlb: lb?sub\nls:\n";

pub fn pubsub() -> (Signature, Interaction) {
    parse_model(PUBSUB_MODEL).expect("sample model parses")
}

pub fn pubsub_signature() -> Signature {
    pubsub().0
}

pub fn pubsub_partial_trace() -> MultiTrace {
    parse_multitrace(&pubsub_signature(), PUBSUB_PARTIAL_TRACE).expect("sample trace parses")
}

/// A request from `l1` to `l2` optionally followed by a reply.
pub fn optional_reply() -> (Signature, Interaction) {
    parse_model(
        "lifelines: l1, l2\nmessages: m\n\
         interaction: seq(strict(l1!m, l2?m), alt(strict(l2!m, l1?m), 0))",
    )
    .expect("sample model parses")
}

/// `l1` sends `m` to either `l2` or `l3`. Every local view of the trace
/// `(l1!m, l2?m, l3?m)` is accepted while the whole is not.
pub fn ambiguous_alt() -> (Signature, Interaction) {
    parse_model(
        "lifelines: l1, l2, l3\nmessages: m\n\
         interaction: alt(strict(l1!m, l2?m), strict(l1!m, l3?m))",
    )
    .expect("sample model parses")
}

pub fn ambiguous_alt_trace() -> MultiTrace {
    parse_multitrace(&ambiguous_alt().0, "l1: l1!m\nl2: l2?m\nl3: l3?m").expect("sample trace parses")
}

/// A family of rejected instances whose global analysis grows with `n`
/// while per-lifeline checks reject it at the root.
///
/// The model is `seq(i*, l2!m2 ; … ; l2!mn)` with
/// `i* = seq(loopW(strict(l1!m1, l2?m1)), alt(seq(l1!m1, l1!m2), 0))`, and the
/// trace is `(l1!m1.l1!m2, l2?m1.l2!m2…l2!mn)`.
///
/// # Panics
/// If `n < 2`.
pub fn lifeline_check_family(n: usize) -> (Signature, Interaction, MultiTrace) {
    assert!(n >= 2, "family is defined for n >= 2");
    let messages: Vec<String> = (1..=n).map(|k| format!("m{k}")).collect();
    let mut tail = format!("l2!m{n}");
    for k in (2..n).rev() {
        tail = format!("seq(l2!m{k}, {tail})");
    }
    let text = format!(
        "lifelines: l1, l2\nmessages: {}\ninteraction: seq(seq(loopW(strict(l1!m1, l2?m1)), alt(seq(l1!m1, l1!m2), 0)), {tail})",
        messages.join(", ")
    );
    let (sig, i) = parse_model(&text).expect("family model parses");
    let l2: Vec<String> = std::iter::once("l2?m1".to_string())
        .chain((2..=n).map(|k| format!("l2!m{k}")))
        .collect();
    let mu = parse_multitrace(&sig, &format!("l1: l1!m1.l1!m2\nl2: {}", l2.join(".")))
        .expect("family trace parses");
    (sig, i, mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::print_interaction;

    #[test]
    fn family_shape() {
        let (sig, i, mu) = lifeline_check_family(3);
        assert_eq!(
            print_interaction(&sig, &i),
            "seq(seq(loopW(strict(l1!m1, l2?m1)), alt(seq(l1!m1, l1!m2), 0)), seq(l2!m2, l2!m3))"
        );
        assert_eq!(mu.len(), 5);
        let (sig, i, _) = lifeline_check_family(2);
        assert!(print_interaction(&sig, &i).ends_with(", l2!m2)"));
    }
}
