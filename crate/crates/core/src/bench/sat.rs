use rand::Rng;

use crate::ir::{Action, Interaction, LifelineId, MessageId, Signature};
use crate::traces::MultiTrace;

/// A 3-CNF formula. Literal `v` is variable `v`, `-v` its negation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf {
    vars: usize,
    clauses: Vec<[i32; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SatError {
    #[error("line {line}: {message}")]
    Dimacs { line: usize, message: String },
    #[error("clause {index} is not made of three distinct literals over variables 1..={vars}")]
    BadClause { index: usize, vars: usize },
}

impl Cnf {
    pub fn new(vars: usize, clauses: Vec<[i32; 3]>) -> Result<Self, SatError> {
        for (index, c) in clauses.iter().enumerate() {
            let in_range = c.iter().all(|l| *l != 0 && (l.unsigned_abs() as usize) <= vars);
            let distinct = c[0] != c[1] && c[0] != c[2] && c[1] != c[2];
            if !in_range || !distinct {
                return Err(SatError::BadClause { index, vars });
            }
        }
        Ok(Cnf { vars, clauses })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn clauses(&self) -> &[[i32; 3]] {
        &self.clauses
    }

    /// Whether `assignment[v - 1]` satisfies every clause.
    pub fn eval(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter().any(|l| assignment[l.unsigned_abs() as usize - 1] == (*l > 0))
        })
    }

    /// Parses DIMACS CNF text. Every clause must hold exactly three literals.
    pub fn parse_dimacs(text: &str) -> Result<Self, SatError> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut pending: Vec<i32> = Vec::new();
        let err = |line: usize, message: String| SatError::Dimacs { line, message };
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            if line.starts_with('%') {
                break;
            }
            if line.starts_with('p') {
                let parts: Vec<&str> = line.split_whitespace().collect();
                if header.is_some() || parts.len() != 4 || parts[1] != "cnf" {
                    return Err(err(line_no, "malformed problem line".into()));
                }
                let vars = parts[2].parse().map_err(|_| err(line_no, "bad variable count".into()))?;
                let count = parts[3].parse().map_err(|_| err(line_no, "bad clause count".into()))?;
                header = Some((vars, count));
                continue;
            }
            if header.is_none() {
                return Err(err(line_no, "clause before the problem line".into()));
            }
            for tok in line.split_whitespace() {
                let lit: i32 = tok.parse().map_err(|_| err(line_no, format!("bad literal '{tok}'")))?;
                if lit == 0 {
                    if pending.len() != 3 {
                        return Err(err(line_no, format!("clause has {} literals, expected 3", pending.len())));
                    }
                    clauses.push([pending[0], pending[1], pending[2]]);
                    pending.clear();
                } else {
                    pending.push(lit);
                }
            }
        }
        let (vars, count) = header.ok_or_else(|| err(1, "missing problem line".into()))?;
        if !pending.is_empty() {
            return Err(err(text.lines().count(), "unterminated clause".into()));
        }
        if clauses.len() != count {
            return Err(err(1, format!("declared {count} clauses, found {}", clauses.len())));
        }
        Cnf::new(vars, clauses)
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.vars, self.clauses.len());
        for c in &self.clauses {
            out.push_str(&format!("{} {} {} 0\n", c[0], c[1], c[2]));
        }
        out
    }

    /// A formula with `k` clauses of three distinct variables drawn uniformly
    /// with uniform signs. Needs `vars >= 3`.
    pub fn random(vars: usize, k: usize, rng: &mut impl Rng) -> Self {
        assert!(vars >= 3, "three distinct variables per clause");
        let clauses = (0..k)
            .map(|_| {
                let picked = rand::seq::index::sample(rng, vars, 3);
                let mut c = [0i32; 3];
                for (slot, v) in c.iter_mut().zip(picked.iter()) {
                    let lit = v as i32 + 1;
                    *slot = if rng.gen_bool(0.5) { lit } else { -lit };
                }
                c
            })
            .collect();
        Cnf { vars, clauses }
    }
}

/// Builds an instance whose verdict is `Ok` iff `cnf` is satisfiable.
///
/// Each clause `j` gets a lifeline `l{j}` and there is a single message `m`.
/// For every variable the interaction chooses between the receptions on the
/// clauses its positive literal satisfies and those its negative literal
/// satisfies. The multi-trace expects one reception per clause.
pub fn encode_3sat(cnf: &Cnf) -> (Signature, Interaction, MultiTrace) {
    let k = cnf.clauses().len();
    let names: Vec<String> = if k == 0 { vec!["l0".into()] } else { (1..=k).map(|j| format!("l{j}")).collect() };
    let sig = Signature::new(names, ["m"]).expect("generated names are valid");
    let recv = |j: usize| Interaction::Act(Action::recv(LifelineId(j as u32), MessageId(0)));
    let literal = |lit: i32| {
        let receptions: Vec<Interaction> =
            (0..k).filter(|j| cnf.clauses()[*j].contains(&lit)).map(recv).collect();
        right_nested_seq(receptions)
    };
    let choices: Vec<Interaction> = (1..=cnf.vars() as i32)
        .map(|v| Interaction::alt(literal(v), literal(-v)))
        .collect();
    let i = right_nested_seq(choices);
    let mut mu = MultiTrace::empty_for(&sig);
    for j in 0..k {
        mu = mu
            .push_back(Action::recv(LifelineId(j as u32), MessageId(0)))
            .expect("clause lifeline");
    }
    (sig, i, mu)
}

fn right_nested_seq(mut items: Vec<Interaction>) -> Interaction {
    let Some(mut acc) = items.pop() else {
        return Interaction::Empty;
    };
    while let Some(x) = items.pop() {
        acc = Interaction::seq(x, acc);
    }
    acc
}
