//! Bridge to external solvers: DIMACS output and model input.

use super::{ClauseSink, ClauseSource, Lit};
use crate::graph::{edge_from_index, edge_index, num_edges, Color, EdgeColoring};
use std::io::{self, Write};
use thiserror::Error;

/// Writes clauses as DIMACS lines, `0`-terminated.
pub struct DimacsWriter<W: Write> {
    out: W,
    line: String,
}

impl<W: Write> DimacsWriter<W> {
    pub fn new(out: W) -> Self {
        DimacsWriter { out, line: String::new() }
    }

    pub fn header(&mut self, vars: u64, clauses: u64) -> io::Result<()> {
        writeln!(self.out, "p cnf {vars} {clauses}")
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

impl<W: Write> ClauseSink for DimacsWriter<W> {
    type Error = io::Error;

    fn add_clause(&mut self, lits: &[Lit]) -> io::Result<()> {
        use std::fmt::Write as _;
        self.line.clear();
        for l in lits {
            let _ = write!(self.line, "{l} ");
        }
        self.line.push_str("0\n");
        self.out.write_all(self.line.as_bytes())
    }
}

/// Writes the instance: header with exact counts, hard clauses, then Z-clauses.
pub fn emit_dimacs<W: Write>(source: &ClauseSource, out: W) -> io::Result<W> {
    let hard = source.count_hard();
    let z = source.z_clauses();
    let mut writer = DimacsWriter::new(out);
    writer.header(source.num_vars(), hard + z.len() as u64)?;
    let streamed = source.stream_hard(&mut writer)?;
    debug_assert_eq!(streamed, hard);
    for clause in &z {
        writer.add_clause(clause)?;
    }
    writer.out.flush()?;
    Ok(writer.into_inner())
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("solver reported the instance unsatisfiable")]
    Unsatisfiable,
    #[error("line {line}: bad literal {token:?}")]
    BadToken { line: usize, token: String },
    #[error("variable {var} assigned both polarities")]
    Contradictory { var: u32 },
    #[error("no value for edge ({i}, {j}) (variable {var})")]
    MissingEdge { i: usize, j: usize, var: u32 },
}

/// An edge disagreeing with its distance variable in a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZInconsistency {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodedModel {
    pub coloring: EdgeColoring,
    /// Warning-grade: the coloring is still what the edge literals say.
    pub z_inconsistencies: Vec<ZInconsistency>,
}

/// Reads a solver model for `K_n`.
///
/// Accepts MiniSat output (`SAT` then a literal line), competition output
/// (`s SATISFIABLE`, `v ...` lines, `c` comments) and bare literal lines.
pub fn parse_model(text: &str, n: usize) -> Result<DecodedModel, ModelError> {
    let edges = num_edges(n);
    let max_var = edges + n.saturating_sub(1) as u64;
    let mut values: Vec<Option<bool>> = vec![None; max_var as usize + 1];

    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let upper = line.to_ascii_uppercase();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if upper == "UNSAT" || upper == "S UNSATISFIABLE" || upper == "UNSATISFIABLE" {
            return Err(ModelError::Unsatisfiable);
        }
        if upper == "SAT" || upper == "S SATISFIABLE" || upper == "SATISFIABLE" {
            continue;
        }
        let body = line.strip_prefix('v').unwrap_or(line);
        for token in body.split_whitespace() {
            let value: i64 = token
                .parse()
                .map_err(|_| ModelError::BadToken { line: idx + 1, token: token.to_string() })?;
            if value == 0 {
                continue;
            }
            let var = value.unsigned_abs();
            if var > max_var {
                continue;
            }
            let slot = &mut values[var as usize];
            let positive = value > 0;
            match slot {
                Some(prev) if *prev != positive => {
                    return Err(ModelError::Contradictory { var: var as u32 });
                }
                _ => *slot = Some(positive),
            }
        }
    }

    let mut coloring = EdgeColoring::undecided(n).map_err(|_| ModelError::MissingEdge { i: 0, j: 0, var: 0 })?;
    for var in 1..=edges {
        let (i, j) = edge_from_index(var, n).expect("var in range");
        match values[var as usize] {
            Some(v) => coloring.set(i, j, Some(Color::from_bool(v))),
            None => return Err(ModelError::MissingEdge { i, j, var: var as u32 }),
        }
    }

    let mut z_inconsistencies = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let k = j - i;
            if let Some(z) = values[(edges + k as u64) as usize] {
                let e = values[edge_index(i, j, n).expect("pair") as usize];
                if e != Some(z) {
                    z_inconsistencies.push(ZInconsistency { i, j, k });
                }
            }
        }
    }
    Ok(DecodedModel { coloring, z_inconsistencies })
}

/// Model text (`SAT` line plus one literal line) for a total coloring.
pub fn model_text(coloring: &EdgeColoring) -> Result<String, crate::graph::GraphError> {
    coloring.require_total()?;
    let mut out = String::from("SAT\n");
    for (var, cell) in coloring.cells().iter().enumerate() {
        let var = var as i64 + 1;
        let lit = if *cell == Some(Color::One) { var } else { -var };
        out.push_str(&lit.to_string());
        out.push(' ');
    }
    out.push_str("0\n");
    Ok(out)
}
