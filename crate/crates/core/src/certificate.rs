//! Reduction certificates: a serialized transvection word plus metadata
//! that allows an independent exact replay and bound check.
//!
//! A certificate is a single JSON document. Verification re-applies the
//! word, re-checks isotropy (or orthogonality) at every prefix, recomputes
//! the bound from the ring parameters, and compares lengths; every check is
//! reported pass/fail rather than thrown.

use crate::error::{Error, Result};
use crate::orthocore::{OrthoIndex, OrthoMatrix, OrthoVector, Parity, Shape, Word};
use crate::pipeline::{
    compute_bound, reduce_column, reduce_matrix, residual_block, verify_reduced_shape, Mode,
    PhaseRecord, PipelineCfg,
};
use crate::polyring::{CoeffKind, CoeffRing, Poly, Ring};
use serde_json::{json, Value};

pub const FORMAT_VERSION: u32 = 1;

/// A packaged reduction proof.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub ring: Ring,
    pub shape: Shape,
    pub mode: Mode,
    pub seed: Option<u64>,
    pub input_column: Option<OrthoVector>,
    pub input_matrix: Option<OrthoMatrix>,
    pub word: Word,
    pub output_column: Option<OrthoVector>,
    pub output_matrix: Option<OrthoMatrix>,
    pub claimed_bound: u64,
    pub actual_length: usize,
    pub phases: Vec<PhaseRecord>,
}

// ---- construction ----

/// Run the column pipeline and package the result.
pub fn certify_column(
    b: &OrthoVector,
    cfg: &PipelineCfg,
    seed: Option<u64>,
) -> Result<Certificate> {
    let ring = b.ring();
    let shape = b.shape();
    let red = reduce_column(b, cfg)?;
    let claimed = compute_bound(
        ring.nvars as u64,
        ring.coeff.declared_dim(),
        shape.r as u64,
        shape.parity,
        Mode::Column,
    )?;
    Ok(Certificate {
        ring,
        shape,
        mode: Mode::Column,
        seed,
        input_column: Some(b.clone()),
        input_matrix: None,
        actual_length: red.word.len(),
        output_column: Some(red.output),
        output_matrix: None,
        word: red.word,
        claimed_bound: claimed,
        phases: red.phases,
    })
}

/// Run the matrix pipeline and package the result.
pub fn certify_matrix(
    g: &OrthoMatrix,
    cfg: &PipelineCfg,
    seed: Option<u64>,
) -> Result<Certificate> {
    let ring = g.ring();
    let shape = g.shape();
    let red = reduce_matrix(g, cfg)?;
    let claimed = compute_bound(
        ring.nvars as u64,
        ring.coeff.declared_dim(),
        shape.r as u64,
        shape.parity,
        Mode::Matrix,
    )?;
    Ok(Certificate {
        ring,
        shape,
        mode: Mode::Matrix,
        seed,
        input_column: None,
        input_matrix: Some(g.clone()),
        actual_length: red.word.len(),
        output_column: None,
        output_matrix: Some(red.output),
        word: red.word,
        claimed_bound: claimed,
        phases: red.phases,
    })
}

// ---- JSON serialization ----

fn ring_to_json(ring: Ring) -> Value {
    json!({
        "kind": match ring.coeff.kind() {
            CoeffKind::PrimeField => "prime_field",
            CoeffKind::Rationals => "rationals",
            CoeffKind::Integers => "integers",
        },
        "modulus": ring.coeff.modulus(),
        "nvars": ring.nvars,
        "declared_dim": ring.coeff.declared_dim(),
    })
}

fn ring_from_json(v: &Value) -> Result<Ring> {
    let kind = v
        .get("kind")
        .and_then(|k| k.as_str())
        .ok_or_else(|| Error::Parse("ring kind missing".into()))?;
    let nvars = v
        .get("nvars")
        .and_then(|n| n.as_u64())
        .ok_or_else(|| Error::Parse("ring nvars missing".into()))? as usize;
    let coeff = match kind {
        "prime_field" => {
            let p = v
                .get("modulus")
                .and_then(|m| m.as_u64())
                .ok_or_else(|| Error::Parse("modulus missing".into()))?;
            CoeffRing::prime_field(p)?
        }
        "rationals" => CoeffRing::rationals(),
        "integers" => CoeffRing::integers(),
        other => return Err(Error::Parse(format!("unknown ring kind {other}"))),
    };
    Ok(Ring::new(coeff, nvars))
}

fn column_to_json(v: &OrthoVector) -> Value {
    Value::Array(v.entries().iter().map(|p| Value::String(p.to_string())).collect())
}

fn column_from_json(shape: Shape, ring: Ring, v: &Value) -> Result<OrthoVector> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse("column must be a JSON array".into()))?;
    let entries = arr
        .iter()
        .map(|e| {
            e.as_str()
                .ok_or_else(|| Error::Parse("column entry must be a string".into()))
                .and_then(|s| Poly::parse(ring, s))
        })
        .collect::<Result<Vec<_>>>()?;
    OrthoVector::from_entries(shape, ring, entries)
}

fn matrix_to_json(m: &OrthoMatrix) -> Value {
    let d = m.shape().dim();
    let rows: Vec<Value> = (0..d)
        .map(|i| {
            Value::Array(
                (0..d)
                    .map(|j| Value::String(m.get_pos(i, j).to_string()))
                    .collect(),
            )
        })
        .collect();
    Value::Array(rows)
}

fn matrix_from_json(shape: Shape, ring: Ring, v: &Value) -> Result<OrthoMatrix> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Parse("matrix must be a JSON array of rows".into()))?;
    let d = shape.dim();
    if rows.len() != d {
        return Err(Error::Parse(format!("matrix must have {d} rows")));
    }
    let mut m = OrthoMatrix::identity(shape, ring)?;
    for (i, row) in rows.iter().enumerate() {
        let cols = row
            .as_array()
            .ok_or_else(|| Error::Parse("matrix row must be a JSON array".into()))?;
        if cols.len() != d {
            return Err(Error::Parse(format!("matrix row must have {d} entries")));
        }
        for (j, e) in cols.iter().enumerate() {
            let text = e
                .as_str()
                .ok_or_else(|| Error::Parse("matrix entry must be a string".into()))?;
            m.set_pos(i, j, Poly::parse(ring, text)?);
        }
    }
    Ok(m)
}

fn phase_to_json(p: &PhaseRecord) -> Value {
    match p {
        PhaseRecord::MakeMonic { variable, length, steps } => json!({
            "phase": "make_monic",
            "variable": variable + 1,
            "length": length,
            "steps": steps.iter().map(|(l, n)| json!({"label": l.as_str(), "length": n})).collect::<Vec<_>>(),
        }),
        PhaseRecord::Normalize { variable, k } => {
            json!({"phase": "normalize", "variable": variable + 1, "k": k})
        }
        PhaseRecord::KillVariable { variable, length, rounds } => json!({
            "phase": "kill_variable",
            "variable": variable + 1,
            "length": length,
            "rounds": rounds.iter().map(|r| json!({
                "s": r.s,
                "m": r.m,
                "ideals": r.ideals,
                "prepare_length": r.prepare_length,
                "shift_length": r.shift_length,
            })).collect::<Vec<_>>(),
        }),
        PhaseRecord::BaseReduce { length } => json!({"phase": "base_reduce", "length": length}),
        PhaseRecord::ClearFirstRow { length } => {
            json!({"phase": "clear_first_row", "length": length})
        }
    }
}

fn phase_length(p: &Value) -> u64 {
    p.get("length").and_then(|l| l.as_u64()).unwrap_or(0)
}

impl Certificate {
    pub fn to_json(&self) -> Value {
        let mut obj = json!({
            "format_version": FORMAT_VERSION,
            "ring": ring_to_json(self.ring),
            "r": self.shape.r,
            "parity": match self.shape.parity { Parity::Even => "even", Parity::Odd => "odd" },
            "mode": self.mode.as_str(),
            "word": self.word.to_json(),
            "claimed_bound": self.claimed_bound,
            "actual_length": self.actual_length,
            "phases": self.phases.iter().map(phase_to_json).collect::<Vec<_>>(),
        });
        if let Some(seed) = self.seed {
            obj["seed"] = json!(seed);
        }
        match self.mode {
            Mode::Column => {
                obj["input"] = column_to_json(self.input_column.as_ref().expect("column input"));
                obj["output"] = column_to_json(self.output_column.as_ref().expect("column output"));
            }
            Mode::Matrix => {
                obj["input"] = matrix_to_json(self.input_matrix.as_ref().expect("matrix input"));
                obj["output"] = matrix_to_json(self.output_matrix.as_ref().expect("matrix output"));
            }
        }
        obj
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("serializable")
    }
}

/// Parse a certificate document; parse failures are hard errors.
pub fn parse_certificate(v: &Value) -> Result<ParsedCertificate> {
    let version = v
        .get("format_version")
        .and_then(|x| x.as_u64())
        .ok_or_else(|| Error::Parse("format_version missing".into()))?;
    if version != FORMAT_VERSION as u64 {
        return Err(Error::Parse(format!("unsupported format version {version}")));
    }
    let ring = ring_from_json(v.get("ring").ok_or_else(|| Error::Parse("ring missing".into()))?)?;
    let r = v.get("r").and_then(|x| x.as_u64()).ok_or_else(|| Error::Parse("r missing".into()))?
        as usize;
    let parity = match v.get("parity").and_then(|x| x.as_str()) {
        Some("even") => Parity::Even,
        Some("odd") => Parity::Odd,
        _ => return Err(Error::Parse("parity missing".into())),
    };
    let shape = Shape::new(r, parity);
    shape.check_ring(ring)?;
    let mode = match v.get("mode").and_then(|x| x.as_str()) {
        Some("column") => Mode::Column,
        Some("matrix") => Mode::Matrix,
        _ => return Err(Error::Parse("mode missing".into())),
    };
    let word = Word::from_json(ring, v.get("word").ok_or_else(|| Error::Parse("word missing".into()))?)?;
    let claimed = v
        .get("claimed_bound")
        .and_then(|x| x.as_u64())
        .ok_or_else(|| Error::Parse("claimed_bound missing".into()))?;
    let actual = v
        .get("actual_length")
        .and_then(|x| x.as_u64())
        .ok_or_else(|| Error::Parse("actual_length missing".into()))? as usize;
    let input = v.get("input").ok_or_else(|| Error::Parse("input missing".into()))?;
    let output = v.get("output").ok_or_else(|| Error::Parse("output missing".into()))?;
    let phases = v
        .get("phases")
        .and_then(|x| x.as_array())
        .cloned()
        .unwrap_or_default();
    Ok(match mode {
        Mode::Column => ParsedCertificate {
            ring,
            shape,
            mode,
            word,
            claimed,
            actual,
            phases,
            input_column: Some(column_from_json(shape, ring, input)?),
            output_column: Some(column_from_json(shape, ring, output)?),
            input_matrix: None,
            output_matrix: None,
        },
        Mode::Matrix => ParsedCertificate {
            ring,
            shape,
            mode,
            word,
            claimed,
            actual,
            phases,
            input_column: None,
            output_column: None,
            input_matrix: Some(matrix_from_json(shape, ring, input)?),
            output_matrix: Some(matrix_from_json(shape, ring, output)?),
        },
    })
}

/// A parsed certificate ready for replay.
#[derive(Clone, Debug)]
pub struct ParsedCertificate {
    pub ring: Ring,
    pub shape: Shape,
    pub mode: Mode,
    pub word: Word,
    pub claimed: u64,
    pub actual: usize,
    pub phases: Vec<Value>,
    pub input_column: Option<OrthoVector>,
    pub output_column: Option<OrthoVector>,
    pub input_matrix: Option<OrthoMatrix>,
    pub output_matrix: Option<OrthoMatrix>,
}

/// A problem instance as exchanged with the command line: a column or a
/// matrix over a declared ring and shape.
#[derive(Clone, Debug)]
pub enum Instance {
    Column(OrthoVector),
    Matrix(OrthoMatrix),
}

impl Instance {
    pub fn to_json(&self) -> Value {
        match self {
            Instance::Column(c) => json!({
                "ring": ring_to_json(c.ring()),
                "r": c.shape().r,
                "parity": match c.shape().parity { Parity::Even => "even", Parity::Odd => "odd" },
                "mode": "column",
                "entries": column_to_json(c),
            }),
            Instance::Matrix(m) => json!({
                "ring": ring_to_json(m.ring()),
                "r": m.shape().r,
                "parity": match m.shape().parity { Parity::Even => "even", Parity::Odd => "odd" },
                "mode": "matrix",
                "rows": matrix_to_json(m),
            }),
        }
    }
}

/// Parse an instance document.
pub fn parse_instance(v: &Value) -> Result<Instance> {
    let ring = ring_from_json(v.get("ring").ok_or_else(|| Error::Parse("ring missing".into()))?)?;
    let r = v
        .get("r")
        .and_then(|x| x.as_u64())
        .ok_or_else(|| Error::Parse("r missing".into()))? as usize;
    let parity = match v.get("parity").and_then(|x| x.as_str()) {
        Some("even") => Parity::Even,
        Some("odd") => Parity::Odd,
        _ => return Err(Error::Parse("parity missing".into())),
    };
    let shape = Shape::new(r, parity);
    match v.get("mode").and_then(|x| x.as_str()) {
        Some("matrix") => Ok(Instance::Matrix(matrix_from_json(
            shape,
            ring,
            v.get("rows").ok_or_else(|| Error::Parse("rows missing".into()))?,
        )?)),
        _ => Ok(Instance::Column(column_from_json(
            shape,
            ring,
            v.get("entries").ok_or_else(|| Error::Parse("entries missing".into()))?,
        )?)),
    }
}

/// One verification check with its outcome.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

/// The verification report: one line per check.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub checks: Vec<CheckResult>,
}

impl Report {
    fn push(&mut self, name: &'static str, pass: bool, detail: impl Into<String>) {
        self.checks.push(CheckResult { name, pass, detail: detail.into() });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{} {}{}\n",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                if c.detail.is_empty() { String::new() } else { format!(": {}", c.detail) }
            ));
        }
        out
    }
}

/// Independent replay of a certificate. Mismatches are flagged in the
/// report, not thrown.
pub fn verify_certificate(cert: &ParsedCertificate) -> Result<Report> {
    let mut report = Report::default();
    let word_ok = cert.word.check_shape(cert.shape).is_ok();
    report.push("word_shape", word_ok, "");

    // recompute the bound from the ring parameters
    match compute_bound(
        cert.ring.nvars as u64,
        cert.ring.coeff.declared_dim(),
        cert.shape.r as u64,
        cert.shape.parity,
        cert.mode,
    ) {
        Ok(n) => report.push(
            "bound_formula",
            n == cert.claimed,
            format!("claimed {}, recomputed {n}", cert.claimed),
        ),
        Err(e) => report.push("bound_formula", false, e.to_string()),
    }
    report.push(
        "recorded_length",
        cert.actual == cert.word.len(),
        format!("recorded {}, word has {}", cert.actual, cert.word.len()),
    );
    report.push(
        "length_within_bound",
        (cert.word.len() as u64) <= cert.claimed,
        format!("{} <= {}", cert.word.len(), cert.claimed),
    );
    let phase_sum: u64 = cert.phases.iter().map(phase_length).sum();
    report.push(
        "phase_breakdown",
        cert.phases.is_empty() || phase_sum == cert.actual as u64,
        format!("phases sum to {phase_sum}"),
    );

    if !word_ok {
        return Ok(report);
    }
    match cert.mode {
        Mode::Column => {
            let input = cert.input_column.as_ref().expect("parsed column input");
            let output = cert.output_column.as_ref().expect("parsed column output");
            report.push(
                "input_isotropic_unimodular",
                matches!(input.is_isotropic_unimodular(), Ok(Some(_))),
                "",
            );
            // prefix isotropy: q is preserved after every factor
            let q0 = input.quad_form();
            let mut cur = input.clone();
            let mut prefix_ok = true;
            for t in cert.word.factors().iter().rev() {
                let mut next = cur.clone();
                if t.apply_to_vector(&mut next).is_err() {
                    prefix_ok = false;
                    break;
                }
                if next.quad_form() != q0 {
                    prefix_ok = false;
                    break;
                }
                cur = next;
            }
            report.push("prefix_isotropy", prefix_ok, "");
            report.push("replay_matches_output", prefix_ok && &cur == output, "");
            let e1 = OrthoVector::basis(cert.shape, cert.ring, OrthoIndex(1))?;
            report.push("output_is_e1", output == &e1, "");
        }
        Mode::Matrix => {
            let input = cert.input_matrix.as_ref().expect("parsed matrix input");
            let output = cert.output_matrix.as_ref().expect("parsed matrix output");
            report.push(
                "input_orthogonal",
                matches!(input.is_orthogonal(), Ok(true)),
                "",
            );
            let replay = cert.word.apply_to_matrix(input);
            let replay_ok = matches!(&replay, Ok(m) if m == output);
            report.push("replay_matches_output", replay_ok, "");
            report.push(
                "output_orthogonal",
                matches!(output.is_orthogonal(), Ok(true)),
                "",
            );
            let shape_ok = verify_reduced_shape(output).is_ok();
            report.push("residual_shape", shape_ok, "");
            if shape_ok {
                let beta_ok = residual_block(output)
                    .and_then(|b| b.is_orthogonal())
                    .unwrap_or(false);
                report.push("residual_orthogonal", beta_ok, "");
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::{random_instance, random_matrix, InstanceCfg};

    fn setup() -> (Shape, Ring) {
        (
            Shape::new(3, Parity::Even),
            Ring::new(CoeffRing::prime_field(5).unwrap(), 1),
        )
    }

    #[test]
    fn column_certificate_round_trip() {
        let (shape, ring) = setup();
        let icfg = InstanceCfg { length: 8, max_degree: 1, seed: 11 };
        let b = random_instance(shape, ring, &icfg).unwrap();
        let cert = certify_column(&b, &PipelineCfg::default(), Some(11)).unwrap();
        let text = cert.to_json_string();
        let parsed = parse_certificate(&serde_json::from_str(&text).unwrap()).unwrap();
        let report = verify_certificate(&parsed).unwrap();
        assert!(report.all_passed(), "{}", report.render());
    }

    #[test]
    fn matrix_certificate_round_trip() {
        let (shape, ring) = setup();
        let icfg = InstanceCfg { length: 9, max_degree: 1, seed: 13 };
        let g = random_matrix(shape, ring, &icfg).unwrap();
        let cert = certify_matrix(&g, &PipelineCfg::default(), Some(13)).unwrap();
        let parsed =
            parse_certificate(&serde_json::from_str(&cert.to_json_string()).unwrap()).unwrap();
        let report = verify_certificate(&parsed).unwrap();
        assert!(report.all_passed(), "{}", report.render());
    }

    #[test]
    fn tampering_is_flagged() {
        let (shape, ring) = setup();
        let icfg = InstanceCfg { length: 8, max_degree: 1, seed: 17 };
        let b = random_instance(shape, ring, &icfg).unwrap();
        let cert = certify_column(&b, &PipelineCfg::default(), None).unwrap();
        let mut doc: Value = serde_json::from_str(&cert.to_json_string()).unwrap();
        // lower the claimed bound below the actual length
        doc["claimed_bound"] = json!(cert.actual_length.saturating_sub(1));
        let parsed = parse_certificate(&doc).unwrap();
        let report = verify_certificate(&parsed).unwrap();
        assert!(!report.all_passed());

        // perturb an output entry: replay must mismatch
        let mut doc: Value = serde_json::from_str(&cert.to_json_string()).unwrap();
        doc["output"][0] = json!("1 + x1");
        let parsed = parse_certificate(&doc).unwrap();
        let report = verify_certificate(&parsed).unwrap();
        assert!(!report.all_passed());
    }
}
