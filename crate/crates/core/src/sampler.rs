//! Window-level maps producing invariant random orders.
//!
//! Randomness is keyed by group element (see [`crate::rng`]), so the uniform
//! order on a window restricts exactly to the uniform order on a sub-window
//! drawn with the same seed.

use std::cell::Cell;
use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GeneratorSet, GroupElement, GroupId};
use crate::order::{BitMatrix, OrderMatrix, RankedOrder, Relation};
use crate::quad::QuadInt;
use crate::rng::{distinct_labels, domain_seed, raw_labels};
use crate::window::Window;

/// Anything that draws a total order on a fixed window from a seed.
pub trait OrderSampler: Sync {
    fn window(&self) -> &Window;
    fn sample(&self, seed: u64) -> Result<OrderMatrix>;
}

/// Uniform order: compare iid labels, one per element.
pub fn uniform_ranked(w: &Window, seed: u64) -> RankedOrder {
    let labels = distinct_labels(seed, w.elements());
    let mut perm: Vec<usize> = (0..w.len()).collect();
    perm.sort_unstable_by_key(|&i| labels[i]);
    RankedOrder::from_permutation(w.clone(), perm).expect("sorted indices form a permutation")
}

pub fn uniform_order(w: &Window, seed: u64) -> OrderMatrix {
    uniform_ranked(w, seed).to_matrix()
}

#[derive(Clone, Debug)]
pub struct UniformSampler {
    pub window: Window,
}

impl OrderSampler for UniformSampler {
    fn window(&self) -> &Window {
        &self.window
    }

    fn sample(&self, seed: u64) -> Result<OrderMatrix> {
        Ok(uniform_order(&self.window, seed))
    }
}

/// Always returns the same order.
#[derive(Clone, Debug)]
pub struct FixedSampler {
    pub order: OrderMatrix,
}

impl OrderSampler for FixedSampler {
    fn window(&self) -> &Window {
        self.order.window()
    }

    fn sample(&self, _seed: u64) -> Result<OrderMatrix> {
        Ok(self.order.clone())
    }
}

/// Subgroups with a canonical coset representative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubgroupSpec {
    Whole,
    Trivial,
    /// Span of the listed unit vectors in `Z^n`.
    Coordinates(Vec<usize>),
    /// Centre `{[0, 0, c]}` of the Heisenberg group.
    Centre,
}

impl SubgroupSpec {
    /// `whole`, `trivial`, `centre` or `coords:i,j,...`.
    pub fn parse(s: &str) -> Result<SubgroupSpec> {
        let s = s.trim();
        match s {
            "whole" => return Ok(SubgroupSpec::Whole),
            "trivial" => return Ok(SubgroupSpec::Trivial),
            "centre" | "center" => return Ok(SubgroupSpec::Centre),
            _ => {}
        }
        let rest = s
            .strip_prefix("coords:")
            .ok_or_else(|| Error::InvalidParameter(format!("unknown subgroup `{s}`")))?;
        let coords = rest
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidParameter(format!("bad coordinate `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SubgroupSpec::Coordinates(coords))
    }

    pub fn check_group(&self, group: GroupId) -> Result<()> {
        match (self, group) {
            (SubgroupSpec::Whole | SubgroupSpec::Trivial, _) => Ok(()),
            (SubgroupSpec::Coordinates(cs), GroupId::Zn(n)) => {
                if let Some(c) = cs.iter().find(|&&c| c >= n) {
                    return Err(Error::NotASubgroup(format!("coordinate {c} out of range for Z^{n}")));
                }
                Ok(())
            }
            (SubgroupSpec::Centre, GroupId::Heisenberg) => Ok(()),
            (s, g) => Err(Error::NotASubgroup(format!("{s} is not defined in {g}"))),
        }
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        match (self, g) {
            (SubgroupSpec::Whole, _) => true,
            (SubgroupSpec::Trivial, g) => g.is_identity(),
            (SubgroupSpec::Coordinates(cs), GroupElement::Zn(v)) => {
                v.iter().enumerate().all(|(i, &x)| x == 0 || cs.contains(&i))
            }
            (SubgroupSpec::Centre, GroupElement::Heis([a, b, _])) => *a == 0 && *b == 0,
            _ => false,
        }
    }

    /// Canonical `r` with `r^{-1} g` in the subgroup; equal for `g`, `h` in
    /// the same left coset.
    pub fn coset_rep(&self, g: &GroupElement) -> GroupElement {
        match (self, g) {
            (SubgroupSpec::Whole, g) => GroupElement::identity(g.group()),
            (SubgroupSpec::Coordinates(cs), GroupElement::Zn(v)) => GroupElement::Zn(
                v.iter()
                    .enumerate()
                    .map(|(i, &x)| if cs.contains(&i) { 0 } else { x })
                    .collect(),
            ),
            (SubgroupSpec::Centre, GroupElement::Heis([a, b, _])) => GroupElement::Heis([*a, *b, 0]),
            (_, g) => g.clone(),
        }
    }

    /// Checks identity membership and closure under `x^{-1} y` on `w`.
    pub fn spot_check(&self, w: &Window) -> Result<()> {
        self.check_group(w.group())?;
        if !self.contains(&GroupElement::identity(w.group())) {
            return Err(Error::NotASubgroup("identity not contained".into()));
        }
        let members: Vec<&GroupElement> = w.elements().iter().filter(|g| self.contains(g)).take(64).collect();
        for x in &members {
            for y in &members {
                if !self.contains(&x.left_divide(y)?) {
                    return Err(Error::NotASubgroup(format!("{x}^-1 {y} not contained")));
                }
            }
        }
        for g in w.elements() {
            if !self.contains(&self.coset_rep(g).left_divide(g)?) {
                return Err(Error::NotASubgroup(format!("bad coset representative for {g}")));
            }
        }
        Ok(())
    }
}

impl fmt::Display for SubgroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubgroupSpec::Whole => write!(f, "whole"),
            SubgroupSpec::Trivial => write!(f, "trivial"),
            SubgroupSpec::Centre => write!(f, "centre"),
            SubgroupSpec::Coordinates(cs) => {
                let parts: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
                write!(f, "coords:{}", parts.join(","))
            }
        }
    }
}

/// Extends an order on the subgroup to the whole window.
///
/// Each coset meeting `w` gets one iid label; different cosets compare by
/// label. Inside the coset of `r`, `g` and `h` compare as `r^{-1} g` and
/// `r^{-1} h` do under `inner`, which must decide every such pair.
pub fn coset_extension(w: &Window, sub: &SubgroupSpec, inner: &OrderMatrix, seed: u64) -> Result<OrderMatrix> {
    sub.spot_check(w)?;
    if inner.window().group() != w.group() {
        return Err(Error::GroupMismatch(w.group(), inner.window().group()));
    }
    let inner = if inner.is_closed() {
        inner.clone()
    } else {
        inner.transitive_closure()?
    };
    if !inner.is_valid() {
        return Err(Error::InvalidParameter("inner relation is not an order".into()));
    }

    let mut coset_of = Vec::with_capacity(w.len());
    let mut reps: Vec<GroupElement> = Vec::new();
    let mut rep_index: HashMap<GroupElement, usize> = HashMap::new();
    let mut delta = Vec::with_capacity(w.len());
    for g in w.elements() {
        let r = sub.coset_rep(g);
        delta.push(inner.window().index_of(&r.left_divide(g)?));
        let next = reps.len();
        let c = *rep_index.entry(r.clone()).or_insert(next);
        if c == next {
            reps.push(r);
        }
        coset_of.push(c);
    }
    let labels = distinct_labels(domain_seed(seed, "coset"), reps.iter());

    let mut members: Vec<Vec<usize>> = vec![Vec::new(); reps.len()];
    for (i, &c) in coset_of.iter().enumerate() {
        members[c].push(i);
    }
    for m in &members {
        for (a, &i) in m.iter().enumerate() {
            for &j in &m[a + 1..] {
                let decided = match (delta[i], delta[j]) {
                    (Some(di), Some(dj)) => inner.precedes(di, dj) || inner.precedes(dj, di),
                    _ => false,
                };
                if !decided {
                    return Err(Error::InnerOrderIncomplete(i, j));
                }
            }
        }
    }
    let mut perm: Vec<usize> = (0..w.len()).collect();
    perm.sort_by(|&i, &j| {
        let (ci, cj) = (coset_of[i], coset_of[j]);
        if ci != cj {
            return labels[ci].cmp(&labels[cj]);
        }
        let (di, dj) = (delta[i].expect("checked"), delta[j].expect("checked"));
        if di == dj {
            Ordering::Equal
        } else if inner.precedes(di, dj) {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    });
    Ok(RankedOrder::from_permutation(w.clone(), perm)?.to_matrix())
}

#[derive(Clone, Debug)]
pub struct CosetSampler {
    pub window: Window,
    pub subgroup: SubgroupSpec,
    pub inner: OrderMatrix,
}

impl OrderSampler for CosetSampler {
    fn window(&self) -> &Window {
        &self.window
    }

    fn sample(&self, seed: u64) -> Result<OrderMatrix> {
        coset_extension(&self.window, &self.subgroup, &self.inner, seed)
    }
}

fn require_total(m: &OrderMatrix) -> Result<()> {
    if !m.is_total() || !m.is_valid() {
        return Err(Error::NotTotal);
    }
    Ok(())
}

/// Membership mask of `K^{-1} D` in `w`.
pub fn glue_region(w: &Window, k: &[GroupElement], d: &Window) -> Result<Vec<bool>> {
    let mut mask = vec![false; w.len()];
    for g in k.iter().chain(d.elements()) {
        if !w.contains(g) {
            return Err(Error::DomainNotCovered(format!("{g} outside the window")));
        }
    }
    for g in k {
        let ginv = g.inverse()?;
        for x in d.elements() {
            let y = ginv.multiply(x)?;
            let i = w
                .index_of(&y)
                .ok_or_else(|| Error::DomainNotCovered(format!("{g}^-1 {x} = {y} outside the window")))?;
            mask[i] = true;
        }
    }
    Ok(mask)
}

/// Glues `m1` on `K^{-1} D` with `m2` on the rest, placing `K^{-1} D` below.
pub fn specification_glue(m1: &OrderMatrix, m2: &OrderMatrix, k: &[GroupElement], d: &Window) -> Result<OrderMatrix> {
    let w = m1.window();
    if m2.window() != w {
        return Err(Error::InvalidParameter("glued orders must share a window".into()));
    }
    require_total(m1)?;
    require_total(m2)?;
    let inside = glue_region(w, k, d)?;
    let n = w.len();
    let mut rel = BitMatrix::new(n);
    for i in 0..n {
        for j in 0..n {
            let b = match (inside[i], inside[j]) {
                (true, true) => m1.precedes(i, j),
                (false, false) => m2.precedes(i, j),
                (a, _) => a,
            };
            if b {
                rel.set(i, j);
            }
        }
    }
    Ok(OrderMatrix::from_parts(w.clone(), rel, true))
}

/// Outcome of the two shadowing identities on every testable translate.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShadowingReport {
    pub k_checked: usize,
    pub k_failed: Vec<GroupElement>,
    pub far_checked: usize,
    pub far_failed: Vec<GroupElement>,
    /// Window elements `g` outside `F K` whose `g^{-1} D` leaves the window.
    pub far_skipped: usize,
}

impl ShadowingReport {
    pub fn all_pass(&self) -> bool {
        self.k_failed.is_empty() && self.far_failed.is_empty()
    }
}

/// `[g·m]_D` as a bit per ordered pair of `D`, or `None` if `g^{-1} D ⊄ w`.
fn translated_pattern(m: &OrderMatrix, g: &GroupElement, d: &Window) -> Result<Option<Vec<bool>>> {
    let ginv = g.inverse()?;
    let mut idx = Vec::with_capacity(d.len());
    for x in d.elements() {
        match m.window().index_of(&ginv.multiply(x)?) {
            Some(i) => idx.push(i),
            None => return Ok(None),
        }
    }
    let mut bits = Vec::with_capacity(idx.len() * idx.len());
    for &a in &idx {
        for &b in &idx {
            bits.push(m.precedes(a, b));
        }
    }
    Ok(Some(bits))
}

/// Checks `[g·glued]_D = [g·m1]_D` for `g` in `K` and `[g·glued]_D =
/// [g·m2]_D` for window elements outside `D D^{-1} K`.
pub fn shadowing_check(
    glued: &OrderMatrix,
    m1: &OrderMatrix,
    m2: &OrderMatrix,
    k: &[GroupElement],
    d: &Window,
) -> Result<ShadowingReport> {
    let mut report = ShadowingReport::default();
    for g in k {
        let a = translated_pattern(glued, g, d)?;
        let b = translated_pattern(m1, g, d)?;
        let (Some(a), Some(b)) = (a, b) else {
            return Err(Error::DomainNotCovered(format!("{g}^-1 D outside the window")));
        };
        report.k_checked += 1;
        if a != b {
            report.k_failed.push(g.clone());
        }
    }
    let mut fk = HashSet::new();
    for x in d.elements() {
        for y in d.elements() {
            let f = x.multiply(&y.inverse()?)?;
            for g in k {
                fk.insert(f.multiply(g)?);
            }
        }
    }
    for g in glued.window().elements() {
        if fk.contains(g) {
            continue;
        }
        match (translated_pattern(glued, g, d)?, translated_pattern(m2, g, d)?) {
            (Some(a), Some(b)) => {
                report.far_checked += 1;
                if a != b {
                    report.far_failed.push(g.clone());
                }
            }
            _ => report.far_skipped += 1,
        }
    }
    Ok(report)
}

/// `p / q` with `0 <= p < q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rational {
    pub num: i64,
    pub den: i64,
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Result<Rational> {
        if den <= 0 || num < 0 || num >= den {
            return Err(Error::InvalidParameter(format!("{num}/{den} is not in [0, 1)")));
        }
        Ok(Rational { num, den })
    }

    /// `p/q` or a decimal such as `0.3`.
    pub fn parse(s: &str) -> Result<Rational> {
        let s = s.trim();
        let bad = || Error::InvalidParameter(format!("bad point `{s}`"));
        if let Some((p, q)) = s.split_once('/') {
            return Rational::new(p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.len() > 17 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let int: i64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let den = 10i64.pow(frac.len() as u32);
        let f: i64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let num = int.checked_mul(den).and_then(|v| v.checked_add(f)).ok_or_else(bad)?;
        Rational::new(num, den)
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

/// The angle `(a + b√2) / d` with `b != 0`, `d > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadAngle {
    pub a: i64,
    pub b: i64,
    pub d: i64,
}

impl QuadAngle {
    pub const SQRT2_MINUS_1: QuadAngle = QuadAngle { a: -1, b: 1, d: 1 };

    pub fn new(a: i64, b: i64, d: i64) -> Result<QuadAngle> {
        if b == 0 {
            return Err(Error::InvalidParameter("rotation angle must be irrational (b != 0)".into()));
        }
        if d <= 0 {
            return Err(Error::InvalidParameter("angle denominator must be positive".into()));
        }
        Ok(QuadAngle { a, b, d })
    }

    /// `a,b,d`.
    pub fn parse(s: &str) -> Result<QuadAngle> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [a, b, d] = parts[..] else {
            return Err(Error::InvalidParameter(format!("angle `{s}` is not a,b,d")));
        };
        let p = |t: &str| {
            t.parse::<i64>()
                .map_err(|_| Error::InvalidParameter(format!("bad angle part `{t}`")))
        };
        QuadAngle::new(p(a)?, p(b)?, p(d)?)
    }

    pub fn to_f64(self) -> f64 {
        (self.a as f64 + self.b as f64 * std::f64::consts::SQRT_2) / self.d as f64
    }

    /// Numerator of `frac(x + k α)` over the denominator `x.den · d`.
    fn orbit_numerator(self, x: Rational, k: i64) -> Result<(QuadInt, i128)> {
        let q = x.den as i128;
        let den = q.checked_mul(self.d as i128).ok_or(Error::IntegerOverflow)?;
        let kq = (k as i128).checked_mul(q).ok_or(Error::IntegerOverflow)?;
        let r = (x.num as i128)
            .checked_mul(self.d as i128)
            .and_then(|v| kq.checked_mul(self.a as i128).and_then(|w| v.checked_add(w)))
            .ok_or(Error::IntegerOverflow)?;
        let s = kq.checked_mul(self.b as i128).ok_or(Error::IntegerOverflow)?;
        let v = QuadInt::new(r, s);
        let fl = v.floor_div(den)?;
        let frac = v.checked_sub(QuadInt::int(fl.checked_mul(den).ok_or(Error::IntegerOverflow)?))?;
        Ok((frac, den))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionSpec {
    /// `x ↦ x + α mod 1` on `[0, 1)`, acted on by `Z`.
    Rotation(QuadAngle),
    /// Generator `i` of `Z^n` rotates coordinate `i` of `[0, 1)^n`; points
    /// compare lexicographically.
    TorusRotation(Vec<QuadAngle>),
    /// Shift on iid site labels over any group; `g` compares by the label
    /// at `g^{-1}`.
    BernoulliShift,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Point {
    Scalar(Rational),
    Vector(Vec<Rational>),
    /// Site labels drawn from this seed.
    Labels(u64),
}

impl ActionSpec {
    pub fn check(&self, group: GroupId, x: &Point) -> Result<()> {
        match (self, x) {
            (ActionSpec::Rotation(_), Point::Scalar(_)) if group == GroupId::Zn(1) => Ok(()),
            (ActionSpec::TorusRotation(a), Point::Vector(v)) if group == GroupId::Zn(a.len()) && v.len() == a.len() => {
                Ok(())
            }
            (ActionSpec::BernoulliShift, Point::Labels(_)) => Ok(()),
            _ => Err(Error::InvalidParameter(format!(
                "action {self:?} does not apply to point {x:?} on {group}"
            ))),
        }
    }

    /// The coordinate a reconstruction recovers, when known.
    pub fn true_value(&self, x: &Point) -> Option<f64> {
        match (self, x) {
            (ActionSpec::Rotation(_), Point::Scalar(r)) => Some(r.to_f64()),
            (ActionSpec::TorusRotation(_), Point::Vector(v)) => v.first().map(|r| r.to_f64()),
            _ => None,
        }
    }
}

/// Exact orbit value, comparable within one action.
#[derive(Clone, Debug)]
enum OrbitValue {
    Quad(Vec<(QuadInt, i128)>),
    Label(u64),
}

fn cmp_values(a: &OrbitValue, b: &OrbitValue) -> Result<Ordering> {
    match (a, b) {
        (OrbitValue::Quad(x), OrbitValue::Quad(y)) => {
            for ((u, du), (v, dv)) in x.iter().zip(y) {
                debug_assert_eq!(du, dv);
                let o = u.cmp_exact(*v)?;
                if o != Ordering::Equal {
                    return Ok(o);
                }
            }
            Ok(Ordering::Equal)
        }
        (OrbitValue::Label(x), OrbitValue::Label(y)) => Ok(x.cmp(y)),
        _ => unreachable!("one action yields one value kind"),
    }
}

/// `g ≺ h` iff `g(x) < h(x)`, decided exactly.
pub fn realize(action: &ActionSpec, x: &Point, w: &Window) -> Result<RankedOrder> {
    action.check(w.group(), x)?;
    let values: Vec<OrbitValue> = match (action, x) {
        (ActionSpec::Rotation(alpha), Point::Scalar(r)) => w
            .elements()
            .iter()
            .map(|g| Ok(OrbitValue::Quad(vec![alpha.orbit_numerator(*r, g.payload()[0])?])))
            .collect::<Result<_>>()?,
        (ActionSpec::TorusRotation(alphas), Point::Vector(rs)) => w
            .elements()
            .iter()
            .map(|g| {
                let k = g.payload();
                alphas
                    .iter()
                    .zip(rs)
                    .zip(k)
                    .map(|((a, r), ki)| a.orbit_numerator(*r, ki))
                    .collect::<Result<Vec<_>>>()
                    .map(OrbitValue::Quad)
            })
            .collect::<Result<_>>()?,
        (ActionSpec::BernoulliShift, Point::Labels(seed)) => {
            let inverses: Vec<GroupElement> = w.elements().iter().map(|g| g.inverse()).collect::<Result<_>>()?;
            raw_labels(*seed, inverses.iter()).into_iter().map(OrbitValue::Label).collect()
        }
        _ => unreachable!("checked above"),
    };
    let err = Cell::new(None);
    let mut perm: Vec<usize> = (0..w.len()).collect();
    perm.sort_by(|&i, &j| {
        cmp_values(&values[i], &values[j]).unwrap_or_else(|e| {
            err.set(Some(e));
            Ordering::Equal
        })
    });
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    for p in perm.windows(2) {
        if cmp_values(&values[p[0]], &values[p[1]])? == Ordering::Equal {
            return Err(Error::StabilizerCollision(p[0].min(p[1]), p[0].max(p[1])));
        }
    }
    RankedOrder::from_permutation(w.clone(), perm)
}

/// Averaging measures on `Z^d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AveragingScheme {
    /// Uniform on `{0, ..., n-1}` in `Z`.
    Cesaro(u64),
    /// Uniform on `[0, n)^d`.
    Box(u64),
}

impl AveragingScheme {
    pub fn n(&self) -> u64 {
        match self {
            AveragingScheme::Cesaro(n) | AveragingScheme::Box(n) => *n,
        }
    }

    /// The support as a window of `group`.
    pub fn support(&self, group: GroupId, size_limit: usize) -> Result<Window> {
        let n = self.n();
        if n == 0 {
            return Err(Error::InvalidParameter("averaging scheme needs n >= 1".into()));
        }
        let n = i64::try_from(n).map_err(|_| Error::SizeLimitExceeded { limit: size_limit })?;
        match (self, group) {
            (AveragingScheme::Cesaro(_), GroupId::Zn(1)) => {
                if n as u64 > size_limit as u64 {
                    return Err(Error::SizeLimitExceeded { limit: size_limit });
                }
                Ok(Window::interval(0, n - 1))
            }
            (AveragingScheme::Box(_), GroupId::Zn(d)) => {
                let w = Window::cube(d, n)?;
                if w.len() > size_limit {
                    return Err(Error::SizeLimitExceeded { limit: size_limit });
                }
                Ok(w)
            }
            (s, g) => Err(Error::InvalidParameter(format!("{s:?} does not average over {g}"))),
        }
    }
}

/// Share of the support lying below the identity.
pub fn reconstruct<R: Relation>(m: &R, scheme: AveragingScheme) -> Result<f64> {
    let w = m.window();
    let support = scheme.support(w.group(), usize::MAX)?;
    let e = w
        .index_of(&GroupElement::identity(w.group()))
        .ok_or_else(|| Error::DomainNotCovered("identity outside the window".into()))?;
    let mut below = 0u64;
    for h in support.elements() {
        let i = w
            .index_of(h)
            .ok_or_else(|| Error::DomainNotCovered(format!("{h} in the support but outside the window")))?;
        if m.precedes(i, e) {
            below += 1;
        }
    }
    Ok(below as f64 / support.len() as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionRow {
    pub n: u64,
    pub estimate: f64,
    pub abs_error: Option<f64>,
}

/// Realizes on each support window and reports the finite-`n` averages.
pub fn reconstruction_table(
    action: &ActionSpec,
    x: &Point,
    group: GroupId,
    scheme: fn(u64) -> AveragingScheme,
    ns: &[u64],
    size_limit: usize,
) -> Result<Vec<ReconstructionRow>> {
    let truth = action.true_value(x);
    ns.iter()
        .map(|&n| {
            let s = scheme(n);
            let w = s.support(group, size_limit)?;
            let m = realize(action, x, &w)?;
            let estimate = reconstruct(&m, s)?;
            Ok(ReconstructionRow {
                n,
                estimate,
                abs_error: truth.map(|t| (estimate - t).abs()),
            })
        })
        .collect()
}

/// Generators `g` with `x ≺ y ⟺ g^{-1} x ≺ g^{-1} y` whenever all four
/// elements lie in the window.
pub fn stabilizer_check<R: Relation>(m: &R, gens: &GeneratorSet) -> Result<Vec<GroupElement>> {
    let w = m.window();
    let mut fixed = Vec::new();
    for g in gens.generators() {
        if g.group() != w.group() {
            return Err(Error::GroupMismatch(w.group(), g.group()));
        }
        let ginv = g.inverse()?;
        let pre: Vec<(usize, usize)> = w
            .elements()
            .iter()
            .enumerate()
            .filter_map(|(i, x)| match ginv.multiply(x) {
                Ok(y) => w.index_of(&y).map(|p| Ok((i, p))),
                Err(e) => Some(Err(e)),
            })
            .collect::<Result<_>>()?;
        let keeps = pre.iter().all(|&(x, px)| {
            pre.iter()
                .all(|&(y, py)| m.precedes(x, y) == m.precedes(px, py))
        });
        if keeps {
            fixed.push(g.clone());
        }
    }
    Ok(fixed)
}
