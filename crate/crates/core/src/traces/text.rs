use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::{GlobalTrace, MultiTrace};
use crate::ir::{Cursor, ParseError, Signature};

/// Parses a multi-trace file: one `lifeline: a.b.c` line per observed
/// lifeline. Lifelines without a line get the empty local trace.
pub fn parse_multitrace(sig: &Signature, text: &str) -> Result<MultiTrace, ParseError> {
    let mut mu = MultiTrace::empty_for(sig);
    let mut seen = BTreeSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let mut cur = Cursor::with_line(raw, idx + 1);
        if cur.at_end() {
            continue;
        }
        let (name, line, column) = cur.word()?;
        let l = sig
            .lifeline(&name)
            .map_err(|source| ParseError::Declaration { line, column, source })?;
        if !seen.insert(l) {
            return Err(ParseError::Syntax {
                line,
                column,
                message: format!("duplicate line for lifeline '{name}'"),
            });
        }
        cur.expect(b':')?;
        let mut actions = Vec::new();
        if !cur.at_end() {
            loop {
                let (a, aline, acol) = cur.action(sig)?;
                if a.lifeline != l {
                    return Err(ParseError::Syntax {
                        line: aline,
                        column: acol,
                        message: format!(
                            "action '{}' does not occur on lifeline '{name}'",
                            sig.display_action(a)
                        ),
                    });
                }
                actions.push(a);
                if !cur.eat(b'.') {
                    break;
                }
            }
            if !cur.at_end() {
                return Err(cur.error("expected '.' or end of line"));
            }
        }
        mu.set_component(l, actions).expect("lifeline declared");
    }
    Ok(mu)
}

/// Parses a dot-separated global trace such as `l1!m.l2?m`; `ε` or an empty
/// string is the empty trace.
pub fn parse_global_trace(sig: &Signature, text: &str) -> Result<GlobalTrace, ParseError> {
    let trimmed = text.trim();
    if trimmed.is_empty() || trimmed == "ε" {
        return Ok(GlobalTrace::default());
    }
    let mut cur = Cursor::new(trimmed);
    let mut out = Vec::new();
    loop {
        out.push(cur.action(sig)?.0);
        if !cur.eat(b'.') {
            break;
        }
    }
    if !cur.at_end() {
        return Err(cur.error("expected '.' or end of input"));
    }
    Ok(GlobalTrace(out))
}

/// Canonical file text: one line per lifeline of the multi-trace, in declaration order.
pub fn print_multitrace(sig: &Signature, mu: &MultiTrace) -> String {
    let mut out = String::new();
    for (l, c) in mu.components() {
        out.push_str(sig.lifeline_name(l));
        out.push(':');
        for (k, a) in c.iter().enumerate() {
            out.push(if k == 0 { ' ' } else { '.' });
            let _ = write!(out, "{}", sig.display_action(*a));
        }
        out.push('\n');
    }
    out
}

/// One-line rendering such as `(lp: lp!pub | lb: ε)`.
pub fn display_multitrace(sig: &Signature, mu: &MultiTrace) -> String {
    let parts: Vec<String> = mu
        .components()
        .map(|(l, c)| {
            let body = if c.is_empty() {
                "ε".to_string()
            } else {
                c.iter().map(|a| sig.display_action(*a).to_string()).collect::<Vec<_>>().join(".")
            };
            format!("{}: {}", sig.lifeline_name(l), body)
        })
        .collect();
    format!("({})", parts.join(" | "))
}
