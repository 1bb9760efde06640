use std::fmt;
use std::sync::Arc;

use super::{Action, LifelineId, LifelineSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BinOp {
    Strict,
    Seq,
    Par,
    Alt,
}

impl BinOp {
    pub const ALL: [BinOp; 4] = [BinOp::Strict, BinOp::Seq, BinOp::Par, BinOp::Alt];

    pub fn keyword(self) -> &'static str {
        match self {
            BinOp::Strict => "strict",
            BinOp::Seq => "seq",
            BinOp::Par => "par",
            BinOp::Alt => "alt",
        }
    }

    fn tag(self) -> u8 {
        match self {
            BinOp::Strict => 2,
            BinOp::Seq => 3,
            BinOp::Par => 4,
            BinOp::Alt => 5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LoopKind {
    /// Repetition with strict sequencing.
    Strict,
    /// Repetition with weak sequencing.
    Weak,
    /// Repetition with interleaving.
    Par,
}

impl LoopKind {
    pub const ALL: [LoopKind; 3] = [LoopKind::Strict, LoopKind::Weak, LoopKind::Par];

    pub fn keyword(self) -> &'static str {
        match self {
            LoopKind::Strict => "loopS",
            LoopKind::Weak => "loopW",
            LoopKind::Par => "loopP",
        }
    }

    fn tag(self) -> u8 {
        match self {
            LoopKind::Strict => 6,
            LoopKind::Weak => 7,
            LoopKind::Par => 8,
        }
    }
}

/// An interaction term. Immutable; sub-terms are shared through `Arc`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Interaction {
    Empty,
    Act(Action),
    Binary(BinOp, Arc<Interaction>, Arc<Interaction>),
    Loop(LoopKind, Arc<Interaction>),
}

/// Dewey address of a node: `1` is the left (or only) child, `2` the right.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position(Vec<u8>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn from_digits(digits: &[u8]) -> Self {
        assert!(digits.iter().all(|d| *d == 1 || *d == 2), "position digits are 1 or 2");
        Position(digits.to_vec())
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for d in &self.0 {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Position {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "ε" || s.is_empty() {
            return Ok(Position::root());
        }
        s.bytes()
            .map(|b| match b {
                b'1' => Ok(1),
                b'2' => Ok(2),
                _ => Err(format!("invalid position '{s}'")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Position)
    }
}

impl From<Action> for Interaction {
    fn from(a: Action) -> Self {
        Interaction::Act(a)
    }
}

impl Interaction {
    pub fn act(a: Action) -> Self {
        Interaction::Act(a)
    }

    pub fn binary(op: BinOp, left: Interaction, right: Interaction) -> Self {
        Interaction::Binary(op, Arc::new(left), Arc::new(right))
    }

    pub fn strict(left: Interaction, right: Interaction) -> Self {
        Self::binary(BinOp::Strict, left, right)
    }

    pub fn seq(left: Interaction, right: Interaction) -> Self {
        Self::binary(BinOp::Seq, left, right)
    }

    pub fn par(left: Interaction, right: Interaction) -> Self {
        Self::binary(BinOp::Par, left, right)
    }

    pub fn alt(left: Interaction, right: Interaction) -> Self {
        Self::binary(BinOp::Alt, left, right)
    }

    pub fn looped(kind: LoopKind, body: Interaction) -> Self {
        Interaction::Loop(kind, Arc::new(body))
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Interaction::Empty)
    }

    /// Builds `op(left, right)`, applying the ∅ rules at the root when `simplify` is set.
    pub(crate) fn make_binary(
        op: BinOp,
        left: Arc<Interaction>,
        right: Arc<Interaction>,
        simplify: bool,
    ) -> Interaction {
        if simplify {
            match op {
                BinOp::Strict | BinOp::Seq | BinOp::Par => {
                    if left.is_empty() {
                        return Arc::unwrap_or_clone(right);
                    }
                    if right.is_empty() {
                        return Arc::unwrap_or_clone(left);
                    }
                }
                BinOp::Alt => {
                    if left.is_empty() && right.is_empty() {
                        return Interaction::Empty;
                    }
                }
            }
        }
        Interaction::Binary(op, left, right)
    }

    pub(crate) fn make_loop(kind: LoopKind, body: Arc<Interaction>, simplify: bool) -> Interaction {
        if simplify && body.is_empty() {
            Interaction::Empty
        } else {
            Interaction::Loop(kind, body)
        }
    }

    /// All positions of the term, in lexicographic order.
    pub fn positions(&self) -> Vec<Position> {
        fn walk(i: &Interaction, prefix: &mut Vec<u8>, out: &mut Vec<Position>) {
            out.push(Position(prefix.clone()));
            match i {
                Interaction::Empty | Interaction::Act(_) => {}
                Interaction::Binary(_, l, r) => {
                    prefix.push(1);
                    walk(l, prefix, out);
                    prefix.pop();
                    prefix.push(2);
                    walk(r, prefix, out);
                    prefix.pop();
                }
                Interaction::Loop(_, b) => {
                    prefix.push(1);
                    walk(b, prefix, out);
                    prefix.pop();
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut Vec::new(), &mut out);
        out.sort();
        out
    }

    /// The sub-term at `pos`, if `pos` addresses a node of this term.
    pub fn at(&self, pos: &Position) -> Option<&Interaction> {
        let mut cur = self;
        for d in pos.digits() {
            cur = match (cur, d) {
                (Interaction::Binary(_, l, _), 1) => l,
                (Interaction::Binary(_, _, r), 2) => r,
                (Interaction::Loop(_, b), 1) => b,
                _ => return None,
            };
        }
        Some(cur)
    }

    /// Replaces every action on a lifeline of `h` by ∅. Structure is kept
    /// intact: no simplification is applied.
    pub fn remove_lifelines(&self, h: &LifelineSet) -> Interaction {
        self.remove_where(&|l| h.contains(&l))
    }

    /// Removes every lifeline except `keep`.
    pub fn isolate_lifeline(&self, keep: LifelineId) -> Interaction {
        self.remove_where(&|l| l != keep)
    }

    pub(crate) fn remove_where(&self, drop: &dyn Fn(LifelineId) -> bool) -> Interaction {
        match self {
            Interaction::Empty => Interaction::Empty,
            Interaction::Act(a) => {
                if drop(a.lifeline) {
                    Interaction::Empty
                } else {
                    Interaction::Act(*a)
                }
            }
            Interaction::Binary(op, l, r) => Interaction::Binary(
                *op,
                Arc::new(l.remove_where(drop)),
                Arc::new(r.remove_where(drop)),
            ),
            Interaction::Loop(k, b) => Interaction::Loop(*k, Arc::new(b.remove_where(drop))),
        }
    }

    /// Rewrites to the fixpoint of the ∅-elimination rules:
    /// `f(x,∅) → x`, `f(∅,x) → x` for `f ∈ {strict, seq, par}`,
    /// `alt(∅,∅) → ∅` and `loop_k(∅) → ∅`.
    pub fn simplify(&self) -> Interaction {
        match self {
            Interaction::Empty | Interaction::Act(_) => self.clone(),
            Interaction::Binary(op, l, r) => Interaction::make_binary(
                *op,
                Arc::new(l.simplify()),
                Arc::new(r.simplify()),
                true,
            ),
            Interaction::Loop(k, b) => Interaction::make_loop(*k, Arc::new(b.simplify()), true),
        }
    }

    /// True iff no ∅-elimination redex occurs in the term.
    pub fn is_simplified(&self) -> bool {
        match self {
            Interaction::Empty | Interaction::Act(_) => true,
            Interaction::Binary(op, l, r) => {
                let redex = match op {
                    BinOp::Alt => l.is_empty() && r.is_empty(),
                    _ => l.is_empty() || r.is_empty(),
                };
                !redex && l.is_simplified() && r.is_simplified()
            }
            Interaction::Loop(_, b) => !b.is_empty() && b.is_simplified(),
        }
    }

    /// Prefix-code serialization: one tag byte per node, actions carry their
    /// lifeline, kind and message indices. Injective on terms.
    pub fn canonical_key(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.write_key(&mut out);
        out
    }

    pub(crate) fn write_key(&self, out: &mut Vec<u8>) {
        match self {
            Interaction::Empty => out.push(0),
            Interaction::Act(a) => {
                out.push(1);
                out.extend_from_slice(&a.lifeline.0.to_le_bytes());
                out.push(a.kind as u8);
                out.extend_from_slice(&a.message.0.to_le_bytes());
            }
            Interaction::Binary(op, l, r) => {
                out.push(op.tag());
                l.write_key(out);
                r.write_key(out);
            }
            Interaction::Loop(k, b) => {
                out.push(k.tag());
                b.write_key(out);
            }
        }
    }

    /// Number of nodes (symbols).
    pub fn symbol_count(&self) -> usize {
        match self {
            Interaction::Empty | Interaction::Act(_) => 1,
            Interaction::Binary(_, l, r) => 1 + l.symbol_count() + r.symbol_count(),
            Interaction::Loop(_, b) => 1 + b.symbol_count(),
        }
    }

    /// Length of the longest root-to-leaf path, counting nodes (a leaf has depth 1).
    pub fn depth(&self) -> usize {
        match self {
            Interaction::Empty | Interaction::Act(_) => 1,
            Interaction::Binary(_, l, r) => 1 + l.depth().max(r.depth()),
            Interaction::Loop(_, b) => 1 + b.depth(),
        }
    }

    pub fn action_count(&self) -> usize {
        match self {
            Interaction::Empty => 0,
            Interaction::Act(_) => 1,
            Interaction::Binary(_, l, r) => l.action_count() + r.action_count(),
            Interaction::Loop(_, b) => b.action_count(),
        }
    }

    pub fn has_loop(&self) -> bool {
        match self {
            Interaction::Empty | Interaction::Act(_) => false,
            Interaction::Binary(_, l, r) => l.has_loop() || r.has_loop(),
            Interaction::Loop(..) => true,
        }
    }

    /// Lifelines carrying at least one action of the term.
    pub fn lifelines(&self) -> LifelineSet {
        let mut out = LifelineSet::new();
        self.for_each_action(&mut |a| {
            out.insert(a.lifeline);
        });
        out
    }

    pub fn for_each_action(&self, f: &mut dyn FnMut(&Action)) {
        match self {
            Interaction::Empty => {}
            Interaction::Act(a) => f(a),
            Interaction::Binary(_, l, r) => {
                l.for_each_action(f);
                r.for_each_action(f);
            }
            Interaction::Loop(_, b) => b.for_each_action(f),
        }
    }
}
