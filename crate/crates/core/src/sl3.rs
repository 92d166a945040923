//! The finite non-extendability instance for the non-negative-entry order on
//! `SL_3(Z)`.
//!
//! For `q` and `n_1, ..., n_6 > q` the instance asks for a total order on a
//! window that extends the positive-entry partial order and lies in every
//! translate `a_{i-1}^{-n_i} B(q, i)`, where `B(q, i)` requires
//! `e ≺ a_i^q a_{i-1}^{-n}` for `1 <= n <= N`. Under the convention that
//! reproduces the chain `a_{i-1}^q ≺ a_{i-1}^{n_i} ≺ a_i^q`, the atoms close
//! into the cycle `a_1^q ≺ a_2^q ≺ ... ≺ a_6^q ≺ a_1^q`.

use serde::{Deserialize, Serialize};

use crate::constraints::{build_extension_system, sl3_positive_order, ConstraintSystem, Convention};
use crate::engine::{propagate_only, solve, verify_certificate, Budget, Certificate, Propagation, Verdict};
use crate::error::{Error, Result};
use crate::group::{sl3_unipotent, GroupElement, GroupId};
use crate::window::Window;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sl3Instance {
    pub q: u32,
    pub n: [u32; 6],
    /// How many membership atoms `n = 1..=N` are generated per `i`.
    pub truncation: u32,
    #[serde(default)]
    pub convention: Convention,
}

impl Sl3Instance {
    /// Instance with `N = max(n_i)`.
    pub fn new(q: u32, n: [u32; 6], convention: Convention) -> Sl3Instance {
        let truncation = n.iter().copied().max().unwrap_or(0);
        Sl3Instance {
            q,
            n,
            truncation,
            convention,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.q == 0 {
            return Err(Error::InvalidParameter("q must be positive".into()));
        }
        if let Some((i, &ni)) = self.n.iter().enumerate().find(|(_, &ni)| ni <= self.q) {
            return Err(Error::InvalidParameter(format!(
                "n_{} = {ni} must exceed q = {}",
                i + 1,
                self.q
            )));
        }
        let max_n = *self.n.iter().max().expect("six entries");
        if self.truncation < max_n {
            return Err(Error::InvalidParameter(format!(
                "truncation {} is below max n_i = {max_n}",
                self.truncation
            )));
        }
        // keeps every exponent far from i64 overflow
        if self.truncation > 1_000_000 {
            return Err(Error::InvalidParameter("truncation above 10^6".into()));
        }
        Ok(())
    }

    pub fn with_convention(&self, convention: Convention) -> Sl3Instance {
        Sl3Instance {
            convention,
            ..self.clone()
        }
    }

    /// `a_i^q` for `i = 1..=6`.
    pub fn chain_elements(&self) -> Vec<GroupElement> {
        (1..=6)
            .map(|i| sl3_unipotent(i).power(self.q as i64).expect("validated exponent"))
            .collect()
    }
}

/// Window and atoms of the instance, under `inst.convention`.
///
/// The window lists the identity and the powers `a_j^p`, `1 <= p <= max n_i`,
/// followed by the endpoints of the membership atoms in generation order.
pub fn build_sl3_instance(inst: &Sl3Instance, size_limit: usize) -> Result<ConstraintSystem> {
    inst.validate()?;
    let max_n = *inst.n.iter().max().expect("six entries") as i64;
    let mut elements = vec![GroupElement::identity(GroupId::Sl3)];
    for j in 1..=6 {
        for p in 1..=max_n {
            elements.push(sl3_unipotent(j).power(p)?);
        }
    }
    let mut atoms = Vec::new();
    for i in 1..=6i64 {
        let prev = sl3_unipotent(i - 1);
        let cur_q = sl3_unipotent(i).power(inst.q as i64)?;
        let ni = inst.n[(i - 1) as usize] as i64;
        let t = inst.convention.translator(&prev.power(-ni)?)?;
        for n in 1..=inst.truncation as i64 {
            let target = t.multiply(&cur_q)?.multiply(&prev.power(-n)?)?;
            atoms.push((t.clone(), target));
        }
    }
    let mut seen: std::collections::HashSet<GroupElement> = elements.iter().cloned().collect();
    for (a, b) in &atoms {
        for g in [a, b] {
            if seen.insert(g.clone()) {
                elements.push(g.clone());
            }
        }
    }
    if elements.len() > size_limit {
        return Err(Error::SizeLimitExceeded { limit: size_limit });
    }
    let w = Window::new(GroupId::Sl3, elements)?;
    build_extension_system(&w, &sl3_positive_order(), &atoms, inst.convention)
}

/// How a convention's system was decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sl3Verdict {
    /// Propagation alone closed a cycle.
    UnsatByPropagation,
    /// Branching was needed to find the cycle (not expected).
    UnsatBySearch,
    Sat,
}

#[derive(Clone, Debug)]
pub struct Sl3Outcome {
    pub convention: Convention,
    pub system: ConstraintSystem,
    pub verdict: Sl3Verdict,
    pub certificate: Certificate,
    pub verified: bool,
    /// Trace derives `a_i^q ≺ a_{i+1}^q` for every `i` mod 6.
    pub six_cycle: bool,
}

#[derive(Clone, Debug)]
pub struct Sl3Report {
    pub instance: Sl3Instance,
    pub outcomes: Vec<Sl3Outcome>,
}

impl Sl3Report {
    pub fn unsat_conventions(&self) -> Vec<Convention> {
        self.outcomes
            .iter()
            .filter(|o| o.verdict != Sl3Verdict::Sat)
            .map(|o| o.convention)
            .collect()
    }

    /// Some convention is UNSAT by propagation with a verified six-cycle trace.
    pub fn witnessed(&self) -> bool {
        self.outcomes
            .iter()
            .any(|o| o.verdict == Sl3Verdict::UnsatByPropagation && o.verified && o.six_cycle)
    }
}

/// Whether the certificate derives `a_i^q ≺ a_{i+1}^q` for all `i` mod 6.
pub fn has_six_cycle(inst: &Sl3Instance, cs: &ConstraintSystem, cert: &Certificate) -> bool {
    if cert.verdict != Verdict::Unsat {
        return false;
    }
    let chain = inst.chain_elements();
    let Some(idx) = chain
        .iter()
        .map(|g| cs.window().index_of(g))
        .collect::<Option<Vec<_>>>()
    else {
        return false;
    };
    let derived: std::collections::HashSet<(usize, usize)> = cert.derived_pairs().collect();
    (0..6).all(|i| derived.contains(&(idx[i], idx[(i + 1) % 6])))
}

/// Builds and decides the instance under one convention.
pub fn run_convention(inst: &Sl3Instance, budget: Budget) -> Result<Sl3Outcome> {
    let cs = build_sl3_instance(inst, budget.size_limit)?;
    let (verdict, certificate) = match propagate_only(&cs) {
        Propagation::Unsat(cert) => (Sl3Verdict::UnsatByPropagation, cert),
        Propagation::Inconclusive => {
            let cert = solve(&cs, budget)?;
            let v = if cert.is_sat() {
                Sl3Verdict::Sat
            } else {
                Sl3Verdict::UnsatBySearch
            };
            (v, cert)
        }
    };
    let verified = verify_certificate(&cs, &certificate);
    let six_cycle = has_six_cycle(inst, &cs, &certificate);
    Ok(Sl3Outcome {
        convention: inst.convention,
        system: cs,
        verdict,
        certificate,
        verified,
        six_cycle,
    })
}

/// Runs both conventions.
pub fn run_both(inst: &Sl3Instance, budget: Budget) -> Result<Sl3Report> {
    inst.validate()?;
    let outcomes = Convention::BOTH
        .iter()
        .map(|&c| run_convention(&inst.with_convention(c), budget))
        .collect::<Result<Vec<_>>>()?;
    Ok(Sl3Report {
        instance: inst.clone(),
        outcomes,
    })
}
