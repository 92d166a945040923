//! Versioned JSON and CSV encodings.
//!
//! Every JSON document carries `"format": 1`. Decoders validate structure
//! (indices in range, permutations, group consistency) and return
//! [`Error::Format`] or a domain error rather than panicking.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::constraints::{ConstraintSystem, Convention, SemigroupSpec};
use crate::engine::{Certificate, Rule, Step, Verdict};
use crate::error::{Error, Result};
use crate::group::{GeneratorSet, GroupElement, GroupId};
use crate::order::OrderMatrix;
use crate::sampler::ReconstructionRow;
use crate::sl3::Sl3Instance;
use crate::stats::{ChiSquare, InvarianceReport, PatternRow};
use crate::window::Window;

pub const FORMAT_VERSION: u32 = 1;

fn check_version(v: u32) -> Result<()> {
    if v != FORMAT_VERSION {
        return Err(Error::Format(format!("unsupported format version {v}")));
    }
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data always serialises")
}

fn window_of(group: Option<&str>, elements: Vec<GroupElement>) -> Result<Window> {
    match group {
        Some(g) => Window::new(GroupId::parse(g)?, elements),
        None if elements.is_empty() => Err(Error::Format("empty window needs a group".into())),
        None => Window::from_elements(elements),
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WindowFile {
    format: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    group: Option<String>,
    window: Vec<GroupElement>,
}

pub fn encode_window(w: &Window) -> String {
    to_json(&WindowFile {
        format: FORMAT_VERSION,
        group: Some(w.group().to_string()),
        window: w.elements().to_vec(),
    })
}

pub fn decode_window(s: &str) -> Result<Window> {
    let f: WindowFile = serde_json::from_str(s)?;
    check_version(f.format)?;
    window_of(f.group.as_deref(), f.window)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OrderFile {
    format: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    group: Option<String>,
    window: Vec<GroupElement>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pairs: Option<Vec<(usize, usize)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    closed: Option<bool>,
    /// Window indices in increasing order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    permutation: Option<Vec<usize>>,
}

/// Total orders may use the compact permutation form.
pub fn encode_order(m: &OrderMatrix, compact: bool) -> String {
    let w = m.window();
    let mut f = OrderFile {
        format: FORMAT_VERSION,
        group: Some(w.group().to_string()),
        window: w.elements().to_vec(),
        pairs: None,
        closed: None,
        permutation: None,
    };
    match m.to_ranked() {
        Ok(r) if compact => f.permutation = Some(r.permutation().to_vec()),
        _ => {
            f.pairs = Some(m.pairs());
            f.closed = Some(m.is_closed());
        }
    }
    to_json(&f)
}

/// Decodes an order. A relation marked `closed` must already be
/// transitively closed and acyclic.
pub fn decode_order(s: &str) -> Result<OrderMatrix> {
    let f: OrderFile = serde_json::from_str(s)?;
    check_version(f.format)?;
    let w = window_of(f.group.as_deref(), f.window)?;
    match (f.permutation, f.pairs) {
        (Some(p), None) => OrderMatrix::from_permutation(w, &p),
        (None, Some(pairs)) => {
            let m = OrderMatrix::from_pairs(w, &pairs)?;
            if f.closed == Some(true) {
                let c = m.transitive_closure()?;
                if c.pairs() != m.pairs() {
                    return Err(Error::Format("relation marked closed is not transitive".into()));
                }
                return Ok(c);
            }
            Ok(m)
        }
        _ => Err(Error::Format("order needs exactly one of pairs or permutation".into())),
    }
}

/// One order per line.
pub fn encode_batch(orders: &[OrderMatrix], compact: bool) -> String {
    let mut out = String::new();
    for m in orders {
        out.push_str(&encode_order(m, compact));
        out.push('\n');
    }
    out
}

pub fn decode_batch(s: &str) -> Result<Vec<OrderMatrix>> {
    s.lines().filter(|l| !l.trim().is_empty()).map(decode_order).collect()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemFile {
    format: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    group: Option<String>,
    window: Vec<GroupElement>,
    atoms: Vec<(usize, usize)>,
    /// The first `invariance_rules` atoms are invariance rules.
    #[serde(default)]
    invariance_rules: usize,
    #[serde(default)]
    convention: Convention,
}

pub fn encode_system(cs: &ConstraintSystem) -> String {
    let w = cs.window();
    to_json(&SystemFile {
        format: FORMAT_VERSION,
        group: Some(w.group().to_string()),
        window: w.elements().to_vec(),
        atoms: cs.atoms().to_vec(),
        invariance_rules: cs.invariance_rules(),
        convention: cs.convention(),
    })
}

pub fn decode_system(s: &str) -> Result<ConstraintSystem> {
    let f: SystemFile = serde_json::from_str(s)?;
    check_version(f.format)?;
    let w = window_of(f.group.as_deref(), f.window)?;
    if f.invariance_rules > f.atoms.len() {
        return Err(Error::Format("invariance_rules exceeds the atom count".into()));
    }
    let mut atoms = f.atoms;
    let extra = atoms.split_off(f.invariance_rules);
    ConstraintSystem::new(w, atoms, extra, f.convention)
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum RuleRepr {
    Atom(usize),
    Transitivity([usize; 3]),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StepRepr {
    pair: (usize, usize),
    rule: RuleRepr,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateFile {
    format: u32,
    verdict: String,
    /// Witness as window indices in increasing order.
    witness: Option<Vec<usize>>,
    trace: Vec<StepRepr>,
    cycle: Vec<usize>,
}

pub fn encode_certificate(cert: &Certificate) -> String {
    // a non-total witness cannot verify, so it is dropped
    let witness = cert
        .witness
        .as_ref()
        .and_then(|m| m.to_ranked().ok())
        .map(|r| r.permutation().to_vec());
    let trace = cert
        .trace
        .iter()
        .map(|s| StepRepr {
            pair: s.pair,
            rule: match s.rule {
                Rule::Atom(k) => RuleRepr::Atom(k),
                Rule::Transitivity(i, j, k) => RuleRepr::Transitivity([i, j, k]),
            },
        })
        .collect();
    to_json(&CertificateFile {
        format: FORMAT_VERSION,
        verdict: match cert.verdict {
            Verdict::Sat => "SAT".into(),
            Verdict::Unsat => "UNSAT".into(),
        },
        witness,
        trace,
        cycle: cert.cycle.clone(),
    })
}

/// Decodes a certificate over `w`, the window of the system it answers.
pub fn decode_certificate(s: &str, w: &Window) -> Result<Certificate> {
    let f: CertificateFile = serde_json::from_str(s)?;
    check_version(f.format)?;
    let verdict = match f.verdict.as_str() {
        "SAT" => Verdict::Sat,
        "UNSAT" => Verdict::Unsat,
        v => return Err(Error::Format(format!("unknown verdict `{v}`"))),
    };
    let witness = f
        .witness
        .map(|p| OrderMatrix::from_permutation(w.clone(), &p))
        .transpose()?;
    let trace = f
        .trace
        .into_iter()
        .map(|s| Step {
            pair: s.pair,
            rule: match s.rule {
                RuleRepr::Atom(k) => Rule::Atom(k),
                RuleRepr::Transitivity([i, j, k]) => Rule::Transitivity(i, j, k),
            },
        })
        .collect();
    Ok(Certificate {
        verdict,
        witness,
        trace,
        cycle: f.cycle,
    })
}

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    format: u32,
    #[serde(flatten)]
    instance: Sl3Instance,
}

pub fn encode_instance(inst: &Sl3Instance) -> String {
    to_json(&InstanceFile {
        format: FORMAT_VERSION,
        instance: inst.clone(),
    })
}

pub fn decode_instance(s: &str) -> Result<Sl3Instance> {
    let f: InstanceFile = serde_json::from_str(s)?;
    check_version(f.format)?;
    f.instance.validate()?;
    Ok(f.instance)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SemigroupFile {
    format: u32,
    group: String,
    positive: Vec<GroupElement>,
}

pub fn encode_semigroup(s: &SemigroupSpec) -> String {
    to_json(&SemigroupFile {
        format: FORMAT_VERSION,
        group: s.group().to_string(),
        positive: s.generators().to_vec(),
    })
}

pub fn decode_semigroup(s: &str) -> Result<SemigroupSpec> {
    let f: SemigroupFile = serde_json::from_str(s)?;
    check_version(f.format)?;
    SemigroupSpec::new(GroupId::parse(&f.group)?, f.positive)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorsFile {
    format: u32,
    group: String,
    generators: Vec<GroupElement>,
}

pub fn encode_generators(g: &GeneratorSet) -> String {
    to_json(&GeneratorsFile {
        format: FORMAT_VERSION,
        group: g.group().to_string(),
        generators: g.generators().to_vec(),
    })
}

pub fn decode_generators(s: &str) -> Result<GeneratorSet> {
    let f: GeneratorsFile = serde_json::from_str(s)?;
    check_version(f.format)?;
    GeneratorSet::new(GroupId::parse(&f.group)?, f.generators)
}

/// `pattern_id,count,frequency,stderr`.
pub fn patterns_csv(rows: &[PatternRow]) -> String {
    let mut out = String::from("pattern_id,count,frequency,stderr\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{}", r.pattern_id, r.count, r.frequency, r.stderr);
    }
    out
}

pub fn invariance_csv(r: &InvarianceReport) -> String {
    let mut out = String::from("pattern_id,count,translated_count,gap,stderr\n");
    for row in &r.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            row.pattern_id, row.count, row.translated_count, row.gap, row.stderr
        );
    }
    out
}

pub fn chisq_csv(c: &ChiSquare, quantile: Option<f64>) -> String {
    let q = quantile.map(|q| q.to_string()).unwrap_or_default();
    format!(
        "statistic,dof,samples,quantile_0.999\n{},{},{},{}\n",
        c.statistic, c.dof, c.samples, q
    )
}

/// `n,estimate,abs_error`; the error column is empty when the truth is unknown.
pub fn reconstruction_csv(rows: &[ReconstructionRow]) -> String {
    let mut out = String::from("n,estimate,abs_error\n");
    for r in rows {
        let e = r.abs_error.map(|e| e.to_string()).unwrap_or_default();
        let _ = writeln!(out, "{},{},{}", r.n, r.estimate, e);
    }
    out
}
