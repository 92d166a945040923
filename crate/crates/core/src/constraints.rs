//! Constraint systems for "a total order on a window extending an invariant
//! partial order", and the deterministic invariant orders on `Z^n`.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{heisenberg_generators, sl3_generators, unit_vector, GroupElement, GroupId};
use crate::order::OrderMatrix;
use crate::quad::QuadInt;
use crate::window::Window;

/// Word length up to which semigroups are checked not to contain `e`.
pub const IDENTITY_CHECK_DEPTH: usize = 6;

/// Generators of a semigroup of positive elements, defining the left-invariant
/// partial order `x ⊏ y` iff `x^{-1} y` lies in the semigroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemigroupSpec {
    group: GroupId,
    positive_generators: Vec<GroupElement>,
}

impl SemigroupSpec {
    /// Rejects generator lists whose products of length at most
    /// [`IDENTITY_CHECK_DEPTH`] reach the identity. Longer words are not
    /// examined.
    pub fn new(group: GroupId, positive_generators: Vec<GroupElement>) -> Result<SemigroupSpec> {
        if positive_generators.is_empty() {
            return Err(Error::InvalidParameter("semigroup needs generators".into()));
        }
        for g in &positive_generators {
            if g.group() != group {
                return Err(Error::GroupMismatch(group, g.group()));
            }
        }
        let mut layer: HashSet<GroupElement> = positive_generators.iter().cloned().collect();
        for depth in 1..=IDENTITY_CHECK_DEPTH {
            if layer.iter().any(GroupElement::is_identity) {
                return Err(Error::InvalidParameter(format!(
                    "semigroup contains the identity at word length {depth}"
                )));
            }
            if depth == IDENTITY_CHECK_DEPTH {
                break;
            }
            let mut next = HashSet::with_capacity(layer.len() * positive_generators.len());
            for w in &layer {
                for s in &positive_generators {
                    next.insert(w.multiply(s)?);
                }
            }
            layer = next;
        }
        Ok(SemigroupSpec {
            group,
            positive_generators,
        })
    }

    pub fn group(&self) -> GroupId {
        self.group
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.positive_generators
    }
}

/// The positive orthant `Z_+^n \ {0}`, generated by the unit vectors.
pub fn quadrant_order(n: usize) -> SemigroupSpec {
    SemigroupSpec::new(GroupId::Zn(n), (0..n).map(|i| unit_vector(n, i)).collect())
        .expect("unit vectors generate a pointed cone")
}

/// Non-negative-entry matrices in `SL_3(Z)`, generated by `a_1, ..., a_6`.
pub fn sl3_positive_order() -> SemigroupSpec {
    SemigroupSpec::new(GroupId::Sl3, sl3_generators()).expect("a_1..a_6 generate a pointed semigroup")
}

/// The Heisenberg semigroup generated by `x, y, z`.
pub fn heisenberg_positive_order() -> SemigroupSpec {
    SemigroupSpec::new(GroupId::Heisenberg, heisenberg_generators().to_vec())
        .expect("x, y, z generate a pointed semigroup")
}

/// Which direction of left translation encodes membership in a translated
/// set `hB` of orders.
///
/// `InverseLeft` uses the action `x g(≺) y ⟺ g^{-1}x ≺ g^{-1}y`, so an atom
/// `u ≺ v` required of `B` becomes `hu ≺ hv` for `hB`. `PlainLeft` uses
/// `x g(≺) y ⟺ gx ≺ gy`, turning the atom into `h^{-1}u ≺ h^{-1}v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    #[default]
    InverseLeft,
    PlainLeft,
}

impl Convention {
    pub const BOTH: [Convention; 2] = [Convention::InverseLeft, Convention::PlainLeft];

    /// The element by which atoms of `B` are left-multiplied to describe `hB`.
    pub fn translator(&self, h: &GroupElement) -> Result<GroupElement> {
        match self {
            Convention::InverseLeft => Ok(h.clone()),
            Convention::PlainLeft => h.inverse(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Convention::InverseLeft => "inverse_left",
            Convention::PlainLeft => "plain_left",
        }
    }

    pub fn parse(s: &str) -> Result<Convention> {
        match s.replace('-', "_").as_str() {
            "inverse_left" => Ok(Convention::InverseLeft),
            "plain_left" => Ok(Convention::PlainLeft),
            other => Err(Error::InvalidParameter(format!("unknown convention `{other}`"))),
        }
    }
}

/// Required pairs `i ≺ j` over a window.
///
/// The first `invariance_rules` atoms are the rules `g ≺ g·s` generated by a
/// semigroup; the rest are extra atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSystem {
    window: Window,
    atoms: Vec<(usize, usize)>,
    invariance_rules: usize,
    convention: Convention,
}

impl ConstraintSystem {
    /// Deduplicates atoms; an extra atom repeating a rule is dropped.
    pub fn new(
        window: Window,
        rules: Vec<(usize, usize)>,
        extra: Vec<(usize, usize)>,
        convention: Convention,
    ) -> Result<ConstraintSystem> {
        let n = window.len();
        let mut seen = HashSet::new();
        let mut atoms = Vec::with_capacity(rules.len() + extra.len());
        for &(i, j) in rules.iter().chain(&extra) {
            if i >= n || j >= n {
                return Err(Error::Format(format!("atom ({i}, {j}) out of range for window of {n}")));
            }
        }
        for p in rules {
            if seen.insert(p) {
                atoms.push(p);
            }
        }
        let invariance_rules = atoms.len();
        for p in extra {
            if seen.insert(p) {
                atoms.push(p);
            }
        }
        Ok(ConstraintSystem {
            window,
            atoms,
            invariance_rules,
            convention,
        })
    }

    /// Plain system of atoms with no rule/extra distinction.
    pub fn from_atoms(window: Window, atoms: Vec<(usize, usize)>) -> Result<ConstraintSystem> {
        ConstraintSystem::new(window, Vec::new(), atoms, Convention::default())
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn atoms(&self) -> &[(usize, usize)] {
        &self.atoms
    }

    pub fn invariance_rules(&self) -> usize {
        self.invariance_rules
    }

    pub fn is_rule(&self, k: usize) -> bool {
        k < self.invariance_rules
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    /// Same system with additional extra atoms.
    pub fn with_extra_atoms(&self, more: &[(usize, usize)]) -> Result<ConstraintSystem> {
        let rules = self.atoms[..self.invariance_rules].to_vec();
        let mut extra = self.atoms[self.invariance_rules..].to_vec();
        extra.extend_from_slice(more);
        ConstraintSystem::new(self.window.clone(), rules, extra, self.convention)
    }

    /// Whether `order` contains every atom.
    pub fn satisfied_by(&self, order: &OrderMatrix) -> bool {
        order.window() == &self.window && self.atoms.iter().all(|&(i, j)| order.precedes(i, j))
    }

    /// Indices of atoms `order` violates.
    pub fn violations(&self, order: &OrderMatrix) -> Vec<usize> {
        self.atoms
            .iter()
            .enumerate()
            .filter(|(_, &(i, j))| !order.precedes(i, j))
            .map(|(k, _)| k)
            .collect()
    }
}

/// The invariance rules `g ≺ g·s` for every `g` in `w` and generator `s` with
/// `g·s` in `w`, plus `extra_atoms`.
pub fn build_extension_system(
    w: &Window,
    s: &SemigroupSpec,
    extra_atoms: &[(GroupElement, GroupElement)],
    convention: Convention,
) -> Result<ConstraintSystem> {
    if s.group() != w.group() {
        return Err(Error::GroupMismatch(w.group(), s.group()));
    }
    let mut rules = Vec::new();
    for (i, g) in w.elements().iter().enumerate() {
        for gen in s.generators() {
            if let Some(j) = w.index_of(&g.multiply(gen)?) {
                rules.push((i, j));
            }
        }
    }
    let extra = extra_atoms
        .iter()
        .map(|(a, b)| Ok((w.require(a)?, w.require(b)?)))
        .collect::<Result<Vec<_>>>()?;
    ConstraintSystem::new(w.clone(), rules, extra, convention)
}

/// An invariant total order on `Z^n` given by a linear functional with
/// coefficients in `Z[√2]`, refined on ties by a cascade of further
/// functionals and finally by lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearFunctionalOrder {
    coefficients: Vec<QuadInt>,
    tie_breaker: Option<Box<LinearFunctionalOrder>>,
}

impl LinearFunctionalOrder {
    pub fn new(coefficients: Vec<QuadInt>, tie_breaker: Option<LinearFunctionalOrder>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::InvalidParameter("functional needs a coefficient".into()));
        }
        if let Some(t) = &tie_breaker {
            if t.dimension() != coefficients.len() {
                return Err(Error::InvalidParameter("tie-breaker dimension mismatch".into()));
            }
        }
        Ok(LinearFunctionalOrder {
            coefficients,
            tie_breaker: tie_breaker.map(Box::new),
        })
    }

    /// Integer functional.
    pub fn integer(coefficients: &[i64], tie_breaker: Option<LinearFunctionalOrder>) -> Result<Self> {
        LinearFunctionalOrder::new(
            coefficients.iter().map(|&c| QuadInt::int(c as i128)).collect(),
            tie_breaker,
        )
    }

    /// Lexicographic order on `Z^n`: `e_1`, then `e_2`, and so on.
    pub fn lex(n: usize) -> LinearFunctionalOrder {
        let mut order: Option<LinearFunctionalOrder> = None;
        for i in (0..n).rev() {
            let mut c = vec![QuadInt::ZERO; n];
            c[i] = QuadInt::int(1);
            order = Some(LinearFunctionalOrder {
                coefficients: c,
                tie_breaker: order.map(Box::new),
            });
        }
        order.expect("dimension at least one")
    }

    pub fn dimension(&self) -> usize {
        self.coefficients.len()
    }

    fn eval(&self, v: &[i64]) -> Result<QuadInt> {
        let mut acc = QuadInt::ZERO;
        for (c, &x) in self.coefficients.iter().zip(v) {
            acc = acc.checked_add(c.checked_scale(x as i128)?)?;
        }
        Ok(acc)
    }

    /// `Less` iff `x` precedes `y`. Errors when `x == y` or when either
    /// argument is not in `Z^n` of the right dimension.
    pub fn compare(&self, x: &GroupElement, y: &GroupElement) -> Result<Ordering> {
        let (GroupElement::Zn(a), GroupElement::Zn(b)) = (x, y) else {
            return Err(Error::InvalidParameter("functional orders live on Z^n".into()));
        };
        if a.len() != self.dimension() || b.len() != self.dimension() {
            return Err(Error::GroupMismatch(GroupId::Zn(self.dimension()), x.group()));
        }
        if a == b {
            return Err(Error::InvalidParameter("comparison of an element with itself".into()));
        }
        let diff = b
            .iter()
            .zip(a)
            .map(|(p, q)| p.checked_sub(*q).ok_or(Error::IntegerOverflow))
            .collect::<Result<Vec<i64>>>()?;
        self.compare_difference(&diff)
    }

    // Ordering of x against y where diff = y - x != 0.
    fn compare_difference(&self, diff: &[i64]) -> Result<Ordering> {
        match self.eval(diff)?.signum()? {
            Ordering::Greater => Ok(Ordering::Less),
            Ordering::Less => Ok(Ordering::Greater),
            Ordering::Equal => match &self.tie_breaker {
                Some(t) => t.compare_difference(diff),
                None => {
                    let first = diff.iter().find(|&&d| d != 0).expect("nonzero difference");
                    Ok(if *first > 0 { Ordering::Less } else { Ordering::Greater })
                }
            },
        }
    }

    /// True iff every unit vector is positive.
    pub fn extends_quadrant(&self) -> bool {
        let n = self.dimension();
        let zero = GroupElement::Zn(vec![0; n]);
        (0..n).all(|i| matches!(self.compare(&zero, &unit_vector(n, i)), Ok(Ordering::Less)))
    }

    /// The induced total order on a window of `Z^n`.
    pub fn order_on(&self, w: &Window) -> Result<OrderMatrix> {
        if w.group() != GroupId::Zn(self.dimension()) {
            return Err(Error::GroupMismatch(GroupId::Zn(self.dimension()), w.group()));
        }
        let failure = RefCell::new(None);
        let m = OrderMatrix::from_comparator(w.clone(), |x, y| {
            if x == y {
                return Ordering::Equal;
            }
            self.compare(x, y).unwrap_or_else(|e| {
                failure.borrow_mut().get_or_insert(e);
                Ordering::Equal
            })
        });
        match failure.into_inner() {
            Some(e) => Err(e),
            None => Ok(m),
        }
    }
}
