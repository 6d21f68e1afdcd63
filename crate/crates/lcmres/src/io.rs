//! Text and JSON input formats: generator files, depth tables, and
//! explicit lattice files for the DGA entry point.

use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::dga::GradedLattice;
use crate::error::Error;
use crate::field::Rationals;
use crate::lattice::LcmLattice;
use crate::matrix::Mat;
use crate::model::{ExponentVector, FactorAlphabet, GeneratorSet, LinearRealization};

/// A parsed generator file: the generators plus an optional realization.
#[derive(Debug)]
pub struct ParsedInput {
    pub gens: GeneratorSet,
    pub realization: Option<LinearRealization>,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Grammar:
/// ```text
/// alphabet: x y z u v
/// G1 = x y
/// G2 = x^2 z
/// realize x = 1 0 0
/// ```
/// Caret-power tokens, exponent 1 may be omitted; `#` starts a comment.
/// Realization rows are exact rationals and must cover every factor.
pub fn parse_generator_file(text: &str) -> Result<ParsedInput, Error> {
    let mut labels: Option<Vec<String>> = None;
    let mut gens: Vec<ExponentVector> = Vec::new();
    let mut realize_rows: Vec<(usize, usize, Vec<BigRational>)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("alphabet:") {
            if labels.is_some() {
                return Err(parse_err(lineno, "duplicate alphabet line"));
            }
            let names: Vec<String> =
                rest.split_whitespace().map(|s| s.to_string()).collect();
            if names.is_empty() {
                return Err(parse_err(lineno, "empty alphabet"));
            }
            labels = Some(names);
            continue;
        }
        let Some(labels) = labels.as_ref() else {
            return Err(parse_err(lineno, "expected `alphabet:` before this line"));
        };
        let Some((lhs, rhs)) = line.split_once('=') else {
            return Err(parse_err(lineno, "expected `name = ...`"));
        };
        let lhs = lhs.trim();
        let rhs = rhs.trim();
        if let Some(factor) = lhs.strip_prefix("realize ") {
            let factor = factor.trim();
            let col = labels
                .iter()
                .position(|l| l == factor)
                .ok_or_else(|| parse_err(lineno, format!("unknown factor `{factor}`")))?;
            let mut row = Vec::new();
            for tok in rhs.split_whitespace() {
                let q = BigRational::from_str(tok).map_err(|_| {
                    parse_err(lineno, format!("bad rational `{tok}`"))
                })?;
                row.push(q);
            }
            if row.is_empty() {
                return Err(parse_err(lineno, "empty realization row"));
            }
            realize_rows.push((lineno, col, row));
            continue;
        }
        if lhs.is_empty() || lhs.contains(char::is_whitespace) {
            return Err(parse_err(lineno, "generator name must be a single token"));
        }
        let mut exps = vec![0u32; labels.len()];
        for tok in rhs.split_whitespace() {
            let (name, power) = match tok.split_once('^') {
                Some((n, p)) => {
                    let power: u32 = p.parse().map_err(|_| {
                        parse_err(lineno, format!("bad exponent in `{tok}`"))
                    })?;
                    (n, power)
                }
                None => (tok, 1),
            };
            let col = labels
                .iter()
                .position(|l| l == name)
                .ok_or_else(|| parse_err(lineno, format!("unknown factor `{name}`")))?;
            exps[col] += power;
        }
        gens.push(ExponentVector(exps));
    }
    let labels = labels.ok_or_else(|| parse_err(0, "missing `alphabet:` line"))?;
    let r = labels.len();
    let alphabet = FactorAlphabet::new(labels.clone())?;
    let gens = GeneratorSet::new(alphabet, gens)?;
    let realization = if realize_rows.is_empty() {
        None
    } else {
        let n = realize_rows[0].2.len();
        let mut rows: Vec<Option<Vec<BigRational>>> = vec![None; r];
        for (lineno, col, row) in realize_rows {
            if row.len() != n {
                return Err(parse_err(lineno, "realization rows of unequal length"));
            }
            if rows[col].is_some() {
                return Err(parse_err(
                    lineno,
                    format!("duplicate realization row for `{}`", labels[col]),
                ));
            }
            rows[col] = Some(row);
        }
        if let Some(missing) = rows.iter().position(|r| r.is_none()) {
            return Err(Error::Realization(format!(
                "missing realization row for `{}`",
                labels[missing]
            )));
        }
        Some(LinearRealization::new(Mat::from_rows(
            Rationals,
            rows.into_iter().map(|r| r.unwrap()).collect(),
        ))?)
    };
    Ok(ParsedInput { gens, realization })
}

/// Depth table grammar: one line per saturated set,
/// `x z = 2` (factor labels, then the depth). `#` starts a comment.
pub fn parse_depth_table(
    text: &str,
    alphabet: &FactorAlphabet,
) -> Result<Vec<(Vec<usize>, u32)>, Error> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((lhs, rhs)) = line.split_once('=') else {
            return Err(parse_err(lineno, "expected `factors = depth`"));
        };
        let mut indices = Vec::new();
        for tok in lhs.split_whitespace() {
            let i = alphabet
                .index_of(tok)
                .ok_or_else(|| parse_err(lineno, format!("unknown factor `{tok}`")))?;
            indices.push(i);
        }
        indices.sort_unstable();
        indices.dedup();
        let depth: u32 = rhs
            .trim()
            .parse()
            .map_err(|_| parse_err(lineno, "bad depth value"))?;
        if !indices.is_empty() && depth == 0 {
            return Err(parse_err(lineno, "depth of a nonempty flat must be ≥ 1"));
        }
        out.push((indices, depth));
    }
    Ok(out)
}

/// Serialized lattice: the `lattice` subcommand's payload, also accepted
/// back by `dga --lattice`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LatticeFile {
    pub alphabet: Vec<String>,
    /// Exponent vectors; these double as rank vectors for the DGA.
    pub elements: Vec<Vec<u32>>,
    /// Covering relation as (lower, upper) index pairs.
    pub hasse: Vec<(usize, usize)>,
    #[serde(rename = "fiberSizes")]
    pub fiber_sizes: Vec<usize>,
}

pub fn lattice_payload(lat: &LcmLattice) -> Result<LatticeFile, Error> {
    let fiber_sizes = (0..lat.len())
        .map(|q| Ok(lat.fiber(q)?.masks.len()))
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(LatticeFile {
        alphabet: lat.gens().alphabet().labels().to_vec(),
        elements: lat.elements().iter().map(|e| e.0.clone()).collect(),
        hasse: lat.hasse_edges(),
        fiber_sizes,
    })
}

/// Rebuild a graded lattice from an explicit file: the order is the
/// reflexive-transitive closure of the covers, the rank vectors are the
/// element exponent vectors.
pub fn graded_lattice_from_file(file: &LatticeFile) -> Result<GradedLattice, Error> {
    let n = file.elements.len();
    if n == 0 {
        return Err(Error::InvalidLattice("no elements".into()));
    }
    let mut leq = vec![vec![false; n]; n];
    for (i, row) in leq.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in &file.hasse {
        if a >= n || b >= n {
            return Err(Error::InvalidLattice(format!(
                "cover ({a}, {b}) out of range"
            )));
        }
        leq[a][b] = true;
    }
    // Warshall closure.
    for k in 0..n {
        for i in 0..n {
            if leq[i][k] {
                for j in 0..n {
                    if leq[k][j] {
                        leq[i][j] = true;
                    }
                }
            }
        }
    }
    let alphabet = FactorAlphabet::new(file.alphabet.clone())?;
    let labels: Vec<String> = file
        .elements
        .iter()
        .map(|e| ExponentVector(e.clone()).render(&alphabet))
        .collect();
    GradedLattice::from_order(file.elements.clone(), leq, labels)
}
