//! Signatures, actions and interaction terms.

mod term;
mod text;

use std::collections::BTreeSet;
use std::fmt;

pub use term::{BinOp, Interaction, LoopKind, Position};
pub(crate) use text::Cursor;
pub use text::{parse_model, print_interaction, print_model, ParseError};

/// Index of a lifeline in its [`Signature`] (declaration order).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LifelineId(pub u32);

/// Index of a message in its [`Signature`] (declaration order).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MessageId(pub u32);

/// A set of lifelines, ordered by declaration index.
pub type LifelineSet = BTreeSet<LifelineId>;

/// Emission (`!`) or reception (`?`). Emissions sort first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Emit,
    Recv,
}

impl Kind {
    pub fn symbol(self) -> char {
        match self {
            Kind::Emit => '!',
            Kind::Recv => '?',
        }
    }
}

/// An atomic observable event: a message emitted or received on a lifeline.
///
/// The derived ordering (lifeline index, then kind, then message index) is
/// the global tie-breaking order used throughout the engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Action {
    pub lifeline: LifelineId,
    pub kind: Kind,
    pub message: MessageId,
}

impl Action {
    pub fn emit(lifeline: LifelineId, message: MessageId) -> Self {
        Action { lifeline, kind: Kind::Emit, message }
    }

    pub fn recv(lifeline: LifelineId, message: MessageId) -> Self {
        Action { lifeline, kind: Kind::Recv, message }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SignatureError {
    #[error("the lifeline set is empty")]
    NoLifelines,
    #[error("the message set is empty")]
    NoMessages,
    #[error("invalid identifier '{0}'")]
    BadIdentifier(String),
    #[error("duplicate lifeline '{0}'")]
    DuplicateLifeline(String),
    #[error("duplicate message '{0}'")]
    DuplicateMessage(String),
    #[error("undeclared lifeline '{0}'")]
    UndeclaredLifeline(String),
    #[error("undeclared message '{0}'")]
    UndeclaredMessage(String),
}

/// The declared lifelines and messages that scope terms and multi-traces.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    lifelines: Vec<String>,
    messages: Vec<String>,
}

pub(crate) fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Signature {
    pub fn new<L, M>(lifelines: L, messages: M) -> Result<Self, SignatureError>
    where
        L: IntoIterator,
        L::Item: Into<String>,
        M: IntoIterator,
        M::Item: Into<String>,
    {
        let lifelines: Vec<String> = lifelines.into_iter().map(Into::into).collect();
        let messages: Vec<String> = messages.into_iter().map(Into::into).collect();
        if lifelines.is_empty() {
            return Err(SignatureError::NoLifelines);
        }
        if messages.is_empty() {
            return Err(SignatureError::NoMessages);
        }
        for (idx, name) in lifelines.iter().enumerate() {
            if !is_ident(name) {
                return Err(SignatureError::BadIdentifier(name.clone()));
            }
            if lifelines[..idx].contains(name) {
                return Err(SignatureError::DuplicateLifeline(name.clone()));
            }
        }
        for (idx, name) in messages.iter().enumerate() {
            if !is_ident(name) {
                return Err(SignatureError::BadIdentifier(name.clone()));
            }
            if messages[..idx].contains(name) {
                return Err(SignatureError::DuplicateMessage(name.clone()));
            }
        }
        Ok(Signature { lifelines, messages })
    }

    pub fn lifeline_count(&self) -> usize {
        self.lifelines.len()
    }

    pub fn message_count(&self) -> usize {
        self.messages.len()
    }

    pub fn lifeline_ids(&self) -> impl Iterator<Item = LifelineId> + '_ {
        (0..self.lifelines.len() as u32).map(LifelineId)
    }

    pub fn message_ids(&self) -> impl Iterator<Item = MessageId> + '_ {
        (0..self.messages.len() as u32).map(MessageId)
    }

    pub fn all_lifelines(&self) -> LifelineSet {
        self.lifeline_ids().collect()
    }

    pub fn lifeline(&self, name: &str) -> Result<LifelineId, SignatureError> {
        self.lifelines
            .iter()
            .position(|l| l == name)
            .map(|i| LifelineId(i as u32))
            .ok_or_else(|| SignatureError::UndeclaredLifeline(name.to_string()))
    }

    pub fn message(&self, name: &str) -> Result<MessageId, SignatureError> {
        self.messages
            .iter()
            .position(|m| m == name)
            .map(|i| MessageId(i as u32))
            .ok_or_else(|| SignatureError::UndeclaredMessage(name.to_string()))
    }

    /// Resolves a set of lifeline names, rejecting undeclared ones.
    pub fn lifeline_set<'a>(
        &self,
        names: impl IntoIterator<Item = &'a str>,
    ) -> Result<LifelineSet, SignatureError> {
        names.into_iter().map(|n| self.lifeline(n)).collect()
    }

    pub fn contains_lifeline(&self, l: LifelineId) -> bool {
        (l.0 as usize) < self.lifelines.len()
    }

    pub fn lifeline_name(&self, l: LifelineId) -> &str {
        &self.lifelines[l.0 as usize]
    }

    pub fn message_name(&self, m: MessageId) -> &str {
        &self.messages[m.0 as usize]
    }

    pub fn lifeline_names(&self) -> &[String] {
        &self.lifelines
    }

    pub fn message_names(&self) -> &[String] {
        &self.messages
    }

    /// Parses `l!m` / `l?m`.
    pub fn action(&self, text: &str) -> Result<Action, SignatureError> {
        let split = text
            .find(['!', '?'])
            .ok_or_else(|| SignatureError::BadIdentifier(text.to_string()))?;
        let kind = if text.as_bytes()[split] == b'!' { Kind::Emit } else { Kind::Recv };
        let lifeline = self.lifeline(text[..split].trim())?;
        let message = self.message(text[split + 1..].trim())?;
        Ok(Action { lifeline, kind, message })
    }

    pub fn display_action(&self, a: Action) -> ActionDisplay<'_> {
        ActionDisplay { sig: self, action: a }
    }

    /// Every action expressible over this signature, in tie-break order.
    pub fn all_actions(&self) -> Vec<Action> {
        let mut out = Vec::with_capacity(self.lifelines.len() * self.messages.len() * 2);
        for l in self.lifeline_ids() {
            for kind in [Kind::Emit, Kind::Recv] {
                for m in self.message_ids() {
                    out.push(Action { lifeline: l, kind, message: m });
                }
            }
        }
        out
    }
}

pub struct ActionDisplay<'a> {
    sig: &'a Signature,
    action: Action,
}

impl fmt::Display for ActionDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}{}",
            self.sig.lifeline_name(self.action.lifeline),
            self.action.kind.symbol(),
            self.sig.message_name(self.action.message)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signature_rejects_bad_declarations() {
        assert_eq!(
            Signature::new(Vec::<String>::new(), ["m"]),
            Err(SignatureError::NoLifelines)
        );
        assert_eq!(
            Signature::new(["a", "a"], ["m"]),
            Err(SignatureError::DuplicateLifeline("a".into()))
        );
        assert_eq!(
            Signature::new(["a"], ["1m"]),
            Err(SignatureError::BadIdentifier("1m".into()))
        );
    }

    #[test]
    fn action_order_follows_declaration() {
        let sig = Signature::new(["lp", "lb"], ["pub", "sub"]).unwrap();
        let a = sig.action("lp?pub").unwrap();
        let b = sig.action("lb!pub").unwrap();
        let c = sig.action("lp!sub").unwrap();
        assert!(c < a, "emission before reception on one lifeline");
        assert!(a < b, "lifeline declaration index dominates");
        assert_eq!(sig.display_action(b).to_string(), "lb!pub");
        assert!(sig.action("lx!pub").is_err());
    }
}
