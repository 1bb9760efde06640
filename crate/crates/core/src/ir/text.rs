use std::fmt::Write as _;

use super::{is_ident, Action, BinOp, Interaction, Kind, LoopKind, Signature, SignatureError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("{line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{line}:{column}: {source}")]
    Declaration {
        line: usize,
        column: usize,
        #[source]
        source: SignatureError,
    },
}

impl ParseError {
    pub fn line(&self) -> usize {
        match self {
            ParseError::Syntax { line, .. } | ParseError::Declaration { line, .. } => *line,
        }
    }
}

/// Character cursor over comment-stripped text, tracking line and column.
pub(crate) struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    column: usize,
    /// When false, newlines are significant and not skipped as whitespace.
    skip_newlines: bool,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Cursor { src: src.as_bytes(), pos: 0, line: 1, column: 1, skip_newlines: true }
    }

    pub(crate) fn with_line(src: &'a str, line: usize) -> Self {
        Cursor { src: src.as_bytes(), pos: 0, line, column: 1, skip_newlines: false }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.column = 1;
        } else if c & 0xC0 != 0x80 {
            self.column += 1;
        }
        Some(c)
    }

    pub(crate) fn skip_ws(&mut self) {
        loop {
            match self.peek() {
                Some(b'#') => {
                    while !matches!(self.peek(), None | Some(b'\n')) {
                        self.bump();
                    }
                }
                Some(b'\n') if !self.skip_newlines => return,
                Some(c) if c.is_ascii_whitespace() => {
                    self.bump();
                }
                _ => return,
            }
        }
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.peek().is_none()
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax { line: self.line, column: self.column, message: message.into() }
    }

    fn decl_error(&self, line: usize, column: usize, source: SignatureError) -> ParseError {
        ParseError::Declaration { line, column, source }
    }

    pub(crate) fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(got) if got == c => {
                self.bump();
                Ok(())
            }
            Some(got) => Err(self.error(format!("expected '{}', found '{}'", c as char, got as char))),
            None => Err(self.error(format!("expected '{}', found end of input", c as char))),
        }
    }

    pub(crate) fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    /// Reads an identifier or a bare `0`, returning it with its start location.
    pub(crate) fn word(&mut self) -> Result<(String, usize, usize), ParseError> {
        self.skip_ws();
        let (line, column) = (self.line, self.column);
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
            self.bump();
        }
        if start == self.pos {
            return Err(match self.peek() {
                Some(c) => self.error(format!("expected identifier, found '{}'", c as char)),
                None => self.error("expected identifier, found end of input"),
            });
        }
        let w = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii slice");
        Ok((w.to_string(), line, column))
    }

    fn ident(&mut self) -> Result<(String, usize, usize), ParseError> {
        let (w, line, column) = self.word()?;
        if !is_ident(&w) {
            return Err(ParseError::Syntax { line, column, message: format!("invalid identifier '{w}'") });
        }
        Ok((w, line, column))
    }

    fn header(&mut self, keyword: &str) -> Result<(), ParseError> {
        let (w, line, column) = self.word()?;
        if w != keyword {
            return Err(ParseError::Syntax {
                line,
                column,
                message: format!("expected '{keyword}:', found '{w}'"),
            });
        }
        self.expect(b':')
    }

    fn ident_list(&mut self) -> Result<Vec<(String, usize, usize)>, ParseError> {
        let mut out = vec![self.ident()?];
        while self.eat(b',') {
            out.push(self.ident()?);
        }
        Ok(out)
    }

    /// Parses the remainder of an action whose lifeline word was already read.
    fn action_after(
        &mut self,
        sig: &Signature,
        lifeline: &str,
        line: usize,
        column: usize,
    ) -> Result<Action, ParseError> {
        self.skip_ws();
        let kind = match self.bump() {
            Some(b'!') => Kind::Emit,
            Some(b'?') => Kind::Recv,
            _ => {
                return Err(ParseError::Syntax {
                    line,
                    column,
                    message: format!("expected '!' or '?' after '{lifeline}'"),
                })
            }
        };
        if !is_ident(lifeline) {
            return Err(ParseError::Syntax { line, column, message: format!("invalid identifier '{lifeline}'") });
        }
        let (msg, mline, mcol) = self.ident()?;
        let l = sig.lifeline(lifeline).map_err(|e| self.decl_error(line, column, e))?;
        let m = sig.message(&msg).map_err(|e| self.decl_error(mline, mcol, e))?;
        Ok(Action { lifeline: l, kind, message: m })
    }

    pub(crate) fn action(&mut self, sig: &Signature) -> Result<(Action, usize, usize), ParseError> {
        let (w, line, column) = self.word()?;
        let a = self.action_after(sig, &w, line, column)?;
        Ok((a, line, column))
    }

    fn expr(&mut self, sig: &Signature, depth: usize) -> Result<Interaction, ParseError> {
        if depth > MAX_NESTING {
            return Err(self.error("expression nested too deeply"));
        }
        let (w, line, column) = self.word()?;
        if w == "0" {
            return Ok(Interaction::Empty);
        }
        let op = match w.as_str() {
            "strict" => Some(BinOp::Strict),
            "seq" => Some(BinOp::Seq),
            "par" => Some(BinOp::Par),
            "alt" => Some(BinOp::Alt),
            _ => None,
        };
        let lk = match w.as_str() {
            "loopS" => Some(LoopKind::Strict),
            "loopW" => Some(LoopKind::Weak),
            "loopP" => Some(LoopKind::Par),
            _ => None,
        };
        self.skip_ws();
        let is_call = self.peek() == Some(b'(');
        if let (Some(op), true) = (op, is_call) {
            self.expect(b'(')?;
            let left = self.expr(sig, depth + 1)?;
            self.expect(b',')?;
            let right = self.expr(sig, depth + 1)?;
            self.expect(b')')?;
            return Ok(Interaction::binary(op, left, right));
        }
        if let (Some(k), true) = (lk, is_call) {
            self.expect(b'(')?;
            let body = self.expr(sig, depth + 1)?;
            self.expect(b')')?;
            return Ok(Interaction::looped(k, body));
        }
        Ok(Interaction::Act(self.action_after(sig, &w, line, column)?))
    }
}

const MAX_NESTING: usize = 10_000;

/// Parses a model file: signature header followed by one interaction expression.
pub fn parse_model(text: &str) -> Result<(Signature, Interaction), ParseError> {
    let mut cur = Cursor::new(text);
    cur.header("lifelines")?;
    let lifelines = cur.ident_list()?;
    cur.header("messages")?;
    let messages = cur.ident_list()?;
    let sig = build_signature(&lifelines, &messages)?;
    cur.header("interaction")?;
    let i = cur.expr(&sig, 0)?;
    if !cur.at_end() {
        return Err(cur.error("unexpected trailing input"));
    }
    Ok((sig, i))
}

fn build_signature(
    lifelines: &[(String, usize, usize)],
    messages: &[(String, usize, usize)],
) -> Result<Signature, ParseError> {
    let locate = |list: &[(String, usize, usize)], name: &str| {
        list.iter()
            .filter(|(n, _, _)| n == name)
            .nth(1)
            .or_else(|| list.first())
            .map(|(_, l, c)| (*l, *c))
            .unwrap_or((1, 1))
    };
    Signature::new(
        lifelines.iter().map(|(n, _, _)| n.clone()),
        messages.iter().map(|(n, _, _)| n.clone()),
    )
    .map_err(|e| {
        let (line, column) = match &e {
            SignatureError::DuplicateLifeline(n) => locate(lifelines, n),
            SignatureError::DuplicateMessage(n) => locate(messages, n),
            _ => (1, 1),
        };
        ParseError::Declaration { line, column, source: e }
    })
}

pub fn print_interaction(sig: &Signature, i: &Interaction) -> String {
    let mut out = String::new();
    write_expr(sig, i, &mut out);
    out
}

fn write_expr(sig: &Signature, i: &Interaction, out: &mut String) {
    match i {
        Interaction::Empty => out.push('0'),
        Interaction::Act(a) => {
            let _ = write!(out, "{}", sig.display_action(*a));
        }
        Interaction::Binary(op, l, r) => {
            out.push_str(op.keyword());
            out.push('(');
            write_expr(sig, l, out);
            out.push_str(", ");
            write_expr(sig, r, out);
            out.push(')');
        }
        Interaction::Loop(k, b) => {
            out.push_str(k.keyword());
            out.push('(');
            write_expr(sig, b, out);
            out.push(')');
        }
    }
}

/// Canonical model text: one header line per declaration list, then the term on one line.
pub fn print_model(sig: &Signature, i: &Interaction) -> String {
    format!(
        "lifelines: {}\nmessages: {}\ninteraction: {}\n",
        sig.lifeline_names().join(", "),
        sig.message_names().join(", "),
        print_interaction(sig, i)
    )
}
