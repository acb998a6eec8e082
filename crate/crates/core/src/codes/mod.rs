//! Scalar linear index codes: the cyclic construction, decodability checks,
//! the GF(2) minrank oracle and bounds reports.

pub mod field;
pub mod matrix;
mod minrank;
mod report;

use std::collections::BTreeSet;
use std::fmt::Write as _;

pub use field::{Field, SUPPORTED_FIELDS};
pub use matrix::GfMatrix;
pub use minrank::{minrank_oracle, Minrank, DEFAULT_ORACLE_MAX_EDGES};
pub use report::{bounds_report, bounds_report_for, BoundsReport, ProblemClass, ReportOptions};

use crate::error::{Error, Result};
use crate::graphs::parse_index;
use crate::model::{is_generalized_cycle, DemandEdge, DemandSupergraph, MessageId, SupergraphCycle};
use crate::solvers::{self, PackingMode, SolverLimits};
use crate::transforms;

/// An `l x n` coding matrix over GF(q). Row `k` is the transmission
/// `sum_i matrix[k][i] * x_i`, columns following `messages`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexCode {
    pub matrix: GfMatrix,
    pub messages: Vec<MessageId>,
    /// Label of the cycle each row came from, when known.
    pub row_provenance: Vec<Option<String>>,
}

impl IndexCode {
    pub fn new(matrix: GfMatrix, messages: Vec<MessageId>) -> Result<Self> {
        if matrix.cols() != messages.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} columns for {} messages",
                matrix.cols(),
                messages.len()
            )));
        }
        let row_provenance = vec![None; matrix.rows()];
        Ok(IndexCode {
            matrix,
            messages,
            row_provenance,
        })
    }

    /// Sends every message uncoded.
    pub fn identity(problem: &DemandSupergraph, q: u32) -> Result<Self> {
        let n = problem.message_count();
        Self::new(GfMatrix::identity(Field::get(q)?, n), problem.messages().cloned().collect())
    }

    pub fn field_size(&self) -> u32 {
        self.matrix.field().size()
    }

    /// Broadcast length l.
    pub fn len(&self) -> usize {
        self.matrix.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.rows() == 0
    }

    /// Human-readable form of row `k`, e.g. `x1 - x3` or `x1 + 2*x3`.
    pub fn describe_row(&self, k: usize) -> String {
        let f = self.matrix.field();
        let mut out = String::new();
        for (c, &a) in self.matrix.row(k).iter().enumerate() {
            if a == 0 {
                continue;
            }
            let m = &self.messages[c];
            let minus_one = f.neg(1);
            if out.is_empty() {
                match a {
                    1 => write!(out, "{m}"),
                    _ if a == minus_one => write!(out, "-{m}"),
                    _ => write!(out, "{a}*{m}"),
                }
            } else {
                match a {
                    1 => write!(out, " + {m}"),
                    _ if a == minus_one => write!(out, " - {m}"),
                    _ => write!(out, " + {a}*{m}"),
                }
            }
            .expect("writing to a string");
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Code file text: `field`, `length` and `messages` header lines followed
    /// by one line of coefficients per transmission.
    pub fn to_text(&self) -> String {
        let mut out = format!("field {}\nlength {}\nmessages", self.field_size(), self.len());
        for m in &self.messages {
            write!(out, " {m}").expect("writing to a string");
        }
        out.push('\n');
        for (k, row) in self.matrix.row_iter().enumerate() {
            let coeffs: Vec<String> = row.iter().map(u8::to_string).collect();
            out.push_str(&coeffs.join(" "));
            if let Some(label) = &self.row_provenance[k] {
                write!(out, "  # {label}").expect("writing to a string");
            }
            out.push('\n');
        }
        out
    }
}

/// Parses a code file. `#` starts a comment; a comment on a row line is
/// kept as that row's provenance label.
pub fn parse_code(text: &str) -> Result<IndexCode> {
    let mut field: Option<&'static Field> = None;
    let mut length: Option<usize> = None;
    let mut messages: Option<Vec<MessageId>> = None;
    let mut rows: Vec<Vec<u8>> = Vec::new();
    let mut labels: Vec<Option<String>> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let (content, comment) = match raw.split_once('#') {
            Some((c, rest)) => (c.trim(), Some(rest.trim().to_owned())),
            None => (raw.trim(), None),
        };
        if content.is_empty() {
            continue;
        }
        let syntax = |message: String| Error::Syntax { line, message };
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens[0] {
            "field" if field.is_none() && tokens.len() == 2 => {
                let q = parse_index(tokens[1]).map_err(syntax)?;
                field = Some(Field::get(q as u32).map_err(|e| syntax(e.to_string()))?);
            }
            "length" if length.is_none() && tokens.len() == 2 => {
                length = Some(parse_index(tokens[1]).map_err(syntax)?);
            }
            "messages" if messages.is_none() => {
                messages = Some(tokens[1..].iter().map(|&t| MessageId::new(t)).collect());
            }
            _ => {
                let (Some(f), Some(_), Some(ms)) = (field, length, messages.as_ref()) else {
                    return Err(syntax("coefficient row before the field, length and messages lines".into()));
                };
                let mut row = Vec::with_capacity(tokens.len());
                for t in &tokens {
                    let a = parse_index(t).map_err(syntax)?;
                    if a >= f.size() as usize {
                        return Err(syntax(format!("coefficient {a} is not in GF({})", f.size())));
                    }
                    row.push(a as u8);
                }
                if row.len() != ms.len() {
                    return Err(syntax(format!("row has {} entries, expected {}", row.len(), ms.len())));
                }
                rows.push(row);
                labels.push(comment.filter(|c| !c.is_empty()));
            }
        }
    }
    let last = text.lines().count().max(1);
    let missing = |what: &str| Error::Syntax {
        line: last,
        message: format!("missing `{what}` line"),
    };
    let f = field.ok_or_else(|| missing("field"))?;
    let l = length.ok_or_else(|| missing("length"))?;
    let ms = messages.ok_or_else(|| missing("messages"))?;
    if rows.len() != l {
        return Err(Error::Syntax {
            line: last,
            message: format!("length says {l} rows, found {}", rows.len()),
        });
    }
    let mut code = IndexCode::new(GfMatrix::from_rows(f, ms.len(), rows)?, ms)?;
    code.row_provenance = labels;
    Ok(code)
}

fn check_packing_in(gc: &DemandSupergraph, packing: &[SupergraphCycle]) -> Result<()> {
    let mut used = BTreeSet::new();
    for c in packing {
        SupergraphCycle::new(gc, c.edges().to_vec()).map_err(|e| Error::InvalidPacking(e.to_string()))?;
        if let Some(e) = c.edges().iter().find(|e| !used.insert(*e)) {
            return Err(Error::InvalidPacking(format!("edge {e} is in two cycles")));
        }
    }
    Ok(())
}

/// The cyclic code of an edge-disjoint packing: for each cycle through
/// messages `m_0, ..., m_{L-1}`, the `L-1` rows `m_k - m_{k+1}`. Every
/// message outside the packing is sent uncoded, so the length is always
/// `n - |packing|`.
pub fn cyclic_code_for_packing(gc: &DemandSupergraph, packing: &[SupergraphCycle], q: u32) -> Result<IndexCode> {
    let f = Field::get(q)?;
    check_packing_in(gc, packing)?;
    let messages: Vec<MessageId> = gc.messages().cloned().collect();
    let col = |m: &MessageId| messages.binary_search(m).expect("validated message");
    let mut matrix = GfMatrix::zeros(f, 0, messages.len());
    let mut provenance = Vec::new();
    let mut covered = vec![false; messages.len()];
    for (i, c) in packing.iter().enumerate() {
        let ms: Vec<&MessageId> = c.messages().collect();
        for m in &ms {
            covered[col(m)] = true;
        }
        for k in 0..ms.len() - 1 {
            let mut row = vec![0u8; messages.len()];
            row[col(ms[k])] = 1;
            row[col(ms[k + 1])] = f.neg(1);
            matrix.push_row(&row)?;
            provenance.push(Some(format!("C{}", i + 1)));
        }
    }
    for (c, _) in covered.iter().enumerate().filter(|(_, &done)| !done) {
        let mut row = vec![0u8; messages.len()];
        row[c] = 1;
        matrix.push_row(&row)?;
        provenance.push(None);
    }
    let mut code = IndexCode::new(matrix, messages)?;
    code.row_provenance = provenance;
    Ok(code)
}

/// Cyclic code of a maximum packing of a generalized cycle (length `n - ν_e`).
///
/// Errors with `PackingNotMaximum` when the packing is smaller than ν_e.
pub fn cyclic_code(gc: &DemandSupergraph, packing: &[SupergraphCycle], q: u32) -> Result<IndexCode> {
    if let Some(v) = is_generalized_cycle(gc).violation {
        return Err(Error::NotGeneralizedCycle(v.to_string()));
    }
    check_packing_in(gc, packing)?;
    let view = transforms::to_eulerian(gc)?;
    let maximum = solvers::max_edge_disjoint_packing(&view.graph, PackingMode::Exact, SolverLimits::default())?.len();
    if packing.len() < maximum {
        return Err(Error::PackingNotMaximum {
            found: packing.len(),
            maximum,
        });
    }
    cyclic_code_for_packing(gc, packing, q)
}

/// Decodability of each demand of a problem under a code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeReport {
    /// Demands in canonical order with their verdicts.
    pub verdicts: Vec<(DemandEdge, bool)>,
}

impl DecodeReport {
    pub fn all_decodable(&self) -> bool {
        self.verdicts.iter().all(|(_, ok)| *ok)
    }

    pub fn decodable_count(&self) -> usize {
        self.verdicts.iter().filter(|(_, ok)| *ok).count()
    }

    pub fn total(&self) -> usize {
        self.verdicts.len()
    }

    pub fn failures(&self) -> impl Iterator<Item = &DemandEdge> {
        self.verdicts.iter().filter(|(_, ok)| !ok).map(|(d, _)| d)
    }
}

/// A receiver can decode `x_d` iff the unit vector of `x_d` lies in the span
/// of the code rows together with the unit vectors of its side information.
pub fn verify_code(problem: &DemandSupergraph, code: &IndexCode) -> Result<DecodeReport> {
    let messages: Vec<&MessageId> = problem.messages().collect();
    if code.messages.len() != messages.len() || code.messages.iter().zip(&messages).any(|(a, b)| a != *b) {
        return Err(Error::DimensionMismatch(
            "code columns do not match the problem's messages in canonical order".into(),
        ));
    }
    let n = messages.len();
    let unit = |i: usize| {
        let mut v = vec![0u8; n];
        v[i] = 1;
        v
    };
    let mut verdicts = Vec::with_capacity(problem.demands().len());
    let mut current: Option<(&crate::model::ReceiverId, GfMatrix)> = None;
    for d in problem.demands() {
        let known = match &current {
            Some((r, m)) if *r == &d.receiver => m,
            _ => {
                let mut m = code.matrix.clone();
                for s in problem.side_info(&d.receiver).expect("validated receiver") {
                    m.push_row(&unit(messages.binary_search(&s).expect("validated message")))?;
                }
                &current.insert((&d.receiver, m)).1
            }
        };
        let target = unit(messages.binary_search(&&d.message).expect("validated message"));
        verdicts.push((d.clone(), known.spans(&target)?));
    }
    Ok(DecodeReport { verdicts })
}
