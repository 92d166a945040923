//! Exact arithmetic in the three concrete groups: `Z^n`, the discrete
//! Heisenberg group and `SL_3(Z)`.
//!
//! All integer arithmetic is checked; overflow surfaces as
//! [`Error::IntegerOverflow`] instead of wrapping.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which group an element lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupId {
    /// The free abelian group of rank `n >= 1`.
    Zn(usize),
    Heisenberg,
    Sl3,
}

impl GroupId {
    pub fn tag(&self) -> &'static str {
        match self {
            GroupId::Zn(_) => "zn",
            GroupId::Heisenberg => "heis",
            GroupId::Sl3 => "sl3",
        }
    }

    /// Parses `zn:<n>`, `z<n>`, `heis` or `sl3`.
    pub fn parse(s: &str) -> Result<GroupId> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "heis" | "heisenberg" | "h" => return Ok(GroupId::Heisenberg),
            "sl3" | "sl3z" => return Ok(GroupId::Sl3),
            _ => {}
        }
        let dim = s
            .strip_prefix("zn:")
            .or_else(|| s.strip_prefix("z^"))
            .or_else(|| s.strip_prefix('z'));
        match dim.and_then(|d| d.parse::<usize>().ok()) {
            Some(n) if n >= 1 => Ok(GroupId::Zn(n)),
            _ => Err(Error::InvalidParameter(format!("unknown group `{s}`"))),
        }
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupId::Zn(n) => write!(f, "zn:{n}"),
            GroupId::Heisenberg => f.write_str("heis"),
            GroupId::Sl3 => f.write_str("sl3"),
        }
    }
}

pub type Matrix3 = [[i64; 3]; 3];

pub const IDENTITY3: Matrix3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];

/// An exact group element.
///
/// The derived ordering is lexicographic on the canonical payload within a
/// group, which is what window enumeration uses to break ties.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "ElementRepr", into = "ElementRepr")]
pub enum GroupElement {
    Zn(Vec<i64>),
    /// `[a, b, c]`, the unitriangular matrix with `a` at (1,2), `b` at (2,3)
    /// and `c` at (1,3).
    Heis([i64; 3]),
    Sl3(Matrix3),
}

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    group: String,
    data: Vec<i64>,
}

impl TryFrom<ElementRepr> for GroupElement {
    type Error = Error;

    fn try_from(r: ElementRepr) -> Result<Self> {
        GroupElement::from_payload(&r.group, &r.data)
    }
}

impl From<GroupElement> for ElementRepr {
    fn from(g: GroupElement) -> Self {
        ElementRepr {
            group: g.group().tag().to_string(),
            data: g.payload(),
        }
    }
}

fn add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::IntegerOverflow)
}

fn mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::IntegerOverflow)
}

fn neg(a: i64) -> Result<i64> {
    a.checked_neg().ok_or(Error::IntegerOverflow)
}

fn mat_mul(a: &Matrix3, b: &Matrix3) -> Result<Matrix3> {
    let mut out = [[0i64; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let mut acc = 0i64;
            for (k, bk) in b.iter().enumerate() {
                acc = add(acc, mul(a[i][k], bk[j])?)?;
            }
            *cell = acc;
        }
    }
    Ok(out)
}

fn det3(m: &Matrix3) -> Result<i64> {
    let minor = |r1: usize, r2: usize, c1: usize, c2: usize| -> Result<i64> {
        add(mul(m[r1][c1], m[r2][c2])?, neg(mul(m[r1][c2], m[r2][c1])?)?)
    };
    let t0 = mul(m[0][0], minor(1, 2, 1, 2)?)?;
    let t1 = mul(m[0][1], minor(1, 2, 0, 2)?)?;
    let t2 = mul(m[0][2], minor(1, 2, 0, 1)?)?;
    add(add(t0, neg(t1)?)?, t2)
}

/// Inverse of a determinant-one matrix: its adjugate.
fn adjugate(m: &Matrix3) -> Result<Matrix3> {
    let mut out = [[0i64; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            // cofactor C_ji
            let rows: Vec<usize> = (0..3).filter(|&r| r != j).collect();
            let cols: Vec<usize> = (0..3).filter(|&c| c != i).collect();
            let d = add(
                mul(m[rows[0]][cols[0]], m[rows[1]][cols[1]])?,
                neg(mul(m[rows[0]][cols[1]], m[rows[1]][cols[0]])?)?,
            )?;
            *cell = if (i + j) % 2 == 0 { d } else { neg(d)? };
        }
    }
    Ok(out)
}

impl GroupElement {
    pub fn identity(group: GroupId) -> GroupElement {
        match group {
            GroupId::Zn(n) => GroupElement::Zn(vec![0; n]),
            GroupId::Heisenberg => GroupElement::Heis([0; 3]),
            GroupId::Sl3 => GroupElement::Sl3(IDENTITY3),
        }
    }

    /// Builds an element from its canonical JSON pieces. Matrices are
    /// row-major and must have determinant exactly one.
    pub fn from_payload(tag: &str, data: &[i64]) -> Result<GroupElement> {
        match tag {
            "zn" => {
                if data.is_empty() {
                    return Err(Error::InvalidElement("zn element needs at least one coordinate".into()));
                }
                Ok(GroupElement::Zn(data.to_vec()))
            }
            "heis" => match data {
                [a, b, c] => Ok(GroupElement::Heis([*a, *b, *c])),
                _ => Err(Error::InvalidElement(format!(
                    "heis element needs 3 entries, got {}",
                    data.len()
                ))),
            },
            "sl3" => {
                if data.len() != 9 {
                    return Err(Error::InvalidElement(format!(
                        "sl3 element needs 9 entries, got {}",
                        data.len()
                    )));
                }
                let mut m = [[0i64; 3]; 3];
                for (k, v) in data.iter().enumerate() {
                    m[k / 3][k % 3] = *v;
                }
                GroupElement::sl3(m)
            }
            other => Err(Error::InvalidElement(format!("unknown group tag `{other}`"))),
        }
    }

    pub fn sl3(m: Matrix3) -> Result<GroupElement> {
        match det3(&m) {
            Ok(1) => Ok(GroupElement::Sl3(m)),
            Ok(d) => Err(Error::InvalidElement(format!("sl3 matrix has determinant {d}"))),
            Err(e) => Err(e),
        }
    }

    pub fn group(&self) -> GroupId {
        match self {
            GroupElement::Zn(v) => GroupId::Zn(v.len()),
            GroupElement::Heis(_) => GroupId::Heisenberg,
            GroupElement::Sl3(_) => GroupId::Sl3,
        }
    }

    /// Canonical integer payload (row-major for matrices).
    pub fn payload(&self) -> Vec<i64> {
        match self {
            GroupElement::Zn(v) => v.clone(),
            GroupElement::Heis(t) => t.to_vec(),
            GroupElement::Sl3(m) => m.iter().flatten().copied().collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == GroupElement::identity(self.group())
    }

    /// Matrix form; `Z^n` elements have none.
    pub fn as_matrix(&self) -> Option<Matrix3> {
        match self {
            GroupElement::Zn(_) => None,
            GroupElement::Heis([a, b, c]) => Some([[1, *a, *c], [0, 1, *b], [0, 0, 1]]),
            GroupElement::Sl3(m) => Some(*m),
        }
    }

    fn check_same(&self, other: &GroupElement) -> Result<()> {
        if self.group() == other.group() {
            Ok(())
        } else {
            Err(Error::GroupMismatch(self.group(), other.group()))
        }
    }

    pub fn multiply(&self, other: &GroupElement) -> Result<GroupElement> {
        self.check_same(other)?;
        match (self, other) {
            (GroupElement::Zn(a), GroupElement::Zn(b)) => a
                .iter()
                .zip(b)
                .map(|(x, y)| add(*x, *y))
                .collect::<Result<Vec<_>>>()
                .map(GroupElement::Zn),
            (GroupElement::Heis([a, b, c]), GroupElement::Heis([a2, b2, c2])) => {
                Ok(GroupElement::Heis([
                    add(*a, *a2)?,
                    add(*b, *b2)?,
                    add(add(*c, *c2)?, mul(*a, *b2)?)?,
                ]))
            }
            (GroupElement::Sl3(m), GroupElement::Sl3(n)) => Ok(GroupElement::Sl3(mat_mul(m, n)?)),
            _ => unreachable!("group ids already compared"),
        }
    }

    pub fn inverse(&self) -> Result<GroupElement> {
        match self {
            GroupElement::Zn(v) => v.iter().map(|x| neg(*x)).collect::<Result<Vec<_>>>().map(GroupElement::Zn),
            // [a,b,c]^{-1} = [-a, -b, ab - c]
            GroupElement::Heis([a, b, c]) => Ok(GroupElement::Heis([
                neg(*a)?,
                neg(*b)?,
                add(mul(*a, *b)?, neg(*c)?)?,
            ])),
            GroupElement::Sl3(m) => Ok(GroupElement::Sl3(adjugate(m)?)),
        }
    }

    /// `g h g^{-1} h^{-1}`.
    pub fn commutator(&self, other: &GroupElement) -> Result<GroupElement> {
        self.check_same(other)?;
        self.multiply(other)?
            .multiply(&self.inverse()?)?
            .multiply(&other.inverse()?)
    }

    /// `g^k` by repeated squaring; negative `k` powers the inverse.
    pub fn power(&self, k: i64) -> Result<GroupElement> {
        let mut base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut exp = k.unsigned_abs();
        let mut acc = GroupElement::identity(self.group());
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.multiply(&base)?;
            }
            exp >>= 1;
            if exp > 0 {
                base = base.multiply(&base)?;
            }
        }
        Ok(acc)
    }

    /// `g^{-1} h`, the relative position used by left-invariant orders.
    pub fn left_divide(&self, other: &GroupElement) -> Result<GroupElement> {
        self.inverse()?.multiply(other)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Zn(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "({})", parts.join(","))
            }
            GroupElement::Heis([a, b, c]) => write!(f, "[{a},{b},{c}]"),
            GroupElement::Sl3(m) => {
                let rows: Vec<String> = m
                    .iter()
                    .map(|r| format!("{},{},{}", r[0], r[1], r[2]))
                    .collect();
                write!(f, "[{}]", rows.join(";"))
            }
        }
    }
}

/// `e_i` in `Z^n`.
pub fn unit_vector(n: usize, i: usize) -> GroupElement {
    let mut v = vec![0; n];
    v[i] = 1;
    GroupElement::Zn(v)
}

pub fn zn(coords: &[i64]) -> GroupElement {
    GroupElement::Zn(coords.to_vec())
}

pub fn heis(a: i64, b: i64, c: i64) -> GroupElement {
    GroupElement::Heis([a, b, c])
}

/// The Heisenberg generators `x = [1,0,0]`, `y = [0,1,0]`, `z = [0,0,1]`.
pub fn heisenberg_generators() -> [GroupElement; 3] {
    [heis(1, 0, 0), heis(0, 1, 0), heis(0, 0, 1)]
}

/// Positions (row, column) of the off-diagonal one in `a_1, ..., a_6`.
const SL3_UNIPOTENT_POSITIONS: [(usize, usize); 6] = [(0, 1), (0, 2), (1, 2), (1, 0), (2, 0), (2, 1)];

/// The elementary unipotent matrix `a_i`, with `i` read modulo 6 so that
/// `a_0 = a_6` and `a_7 = a_1`.
pub fn sl3_unipotent(i: i64) -> GroupElement {
    let (r, c) = SL3_UNIPOTENT_POSITIONS[(i - 1).rem_euclid(6) as usize];
    let mut m = IDENTITY3;
    m[r][c] = 1;
    GroupElement::Sl3(m)
}

/// `a_1, ..., a_6`, the generators of the non-negative-entry semigroup.
pub fn sl3_generators() -> Vec<GroupElement> {
    (1..=6).map(sl3_unipotent).collect()
}

/// A finite list of generators of one group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    group: GroupId,
    generators: Vec<GroupElement>,
    symmetric: bool,
}

impl GeneratorSet {
    pub fn new(group: GroupId, generators: Vec<GroupElement>) -> Result<GeneratorSet> {
        for g in &generators {
            if g.group() != group {
                return Err(Error::GroupMismatch(group, g.group()));
            }
            if g.is_identity() {
                return Err(Error::InvalidParameter("generator equals the identity".into()));
            }
        }
        let mut symmetric = true;
        for g in &generators {
            if !generators.contains(&g.inverse()?) {
                symmetric = false;
                break;
            }
        }
        Ok(GeneratorSet {
            group,
            generators,
            symmetric,
        })
    }

    /// Unit vectors for `Z^n`, `x, y, z` for Heisenberg, `a_1..a_6` for SL3.
    pub fn standard(group: GroupId) -> GeneratorSet {
        let generators = match group {
            GroupId::Zn(n) => (0..n).map(|i| unit_vector(n, i)).collect(),
            GroupId::Heisenberg => heisenberg_generators().to_vec(),
            GroupId::Sl3 => sl3_generators(),
        };
        GeneratorSet::new(group, generators).expect("standard generators are valid")
    }

    pub fn group(&self) -> GroupId {
        self.group
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Generators followed by the inverses not already present.
    pub fn symmetrized(&self) -> Result<Vec<GroupElement>> {
        let mut out = self.generators.clone();
        for g in &self.generators {
            let inv = g.inverse()?;
            if !out.contains(&inv) {
                out.push(inv);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Plain 3x3 product, independent of the checked implementation.
    fn oracle_mul(a: Matrix3, b: Matrix3) -> Matrix3 {
        let mut c = [[0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
            }
        }
        c
    }

    #[test]
    fn identities() {
        assert_eq!(GroupElement::identity(GroupId::Zn(2)), zn(&[0, 0]));
        assert_eq!(GroupElement::identity(GroupId::Heisenberg), heis(0, 0, 0));
        assert_eq!(GroupElement::identity(GroupId::Sl3), GroupElement::Sl3(IDENTITY3));
    }

    #[test]
    fn heisenberg_product_matches_matrix() {
        let p = heis(1, 0, 0).multiply(&heis(0, 1, 0)).unwrap();
        assert_eq!(p, heis(1, 1, 1));
        let m = oracle_mul(
            heis(1, 0, 0).as_matrix().unwrap(),
            heis(0, 1, 0).as_matrix().unwrap(),
        );
        assert_eq!(p.as_matrix().unwrap(), m);
    }

    #[test]
    fn zn_product_and_inverse() {
        assert_eq!(zn(&[1, 2]).multiply(&zn(&[3, -1])).unwrap(), zn(&[4, 1]));
        assert_eq!(zn(&[4, 1]).inverse().unwrap(), zn(&[-4, -1]));
    }

    #[test]
    fn sl3_product() {
        let p = sl3_unipotent(6).multiply(&sl3_unipotent(2)).unwrap();
        let mut want = IDENTITY3;
        want[0][2] = 1;
        want[2][1] = 1;
        assert_eq!(p, GroupElement::Sl3(want));
        let GroupElement::Sl3(a6) = sl3_unipotent(6) else { unreachable!() };
        let GroupElement::Sl3(a2) = sl3_unipotent(2) else { unreachable!() };
        assert_eq!(oracle_mul(a6, a2), want);
    }

    #[test]
    fn inverses() {
        let h = heis(1, 1, 1);
        assert_eq!(h.inverse().unwrap(), heis(-1, -1, 0));
        assert!(h.multiply(&h.inverse().unwrap()).unwrap().is_identity());
        let mut want = IDENTITY3;
        want[0][1] = -1;
        assert_eq!(sl3_unipotent(1).inverse().unwrap(), GroupElement::Sl3(want));
    }

    #[test]
    fn commutators() {
        let [x, y, z] = heisenberg_generators();
        assert_eq!(x.commutator(&y).unwrap(), z);
        assert_eq!(
            x.power(2).unwrap().commutator(&y.power(3).unwrap()).unwrap(),
            z.power(6).unwrap()
        );
        assert_eq!(sl3_unipotent(2).commutator(&sl3_unipotent(6)).unwrap(), sl3_unipotent(1));
        assert_eq!(
            sl3_unipotent(6).commutator(&sl3_unipotent(2)).unwrap(),
            sl3_unipotent(1).inverse().unwrap()
        );
    }

    #[test]
    fn powers() {
        let mut want = IDENTITY3;
        want[0][1] = 5;
        assert_eq!(sl3_unipotent(1).power(5).unwrap(), GroupElement::Sl3(want));
        let mut by_hand = GroupElement::identity(GroupId::Sl3);
        for _ in 0..5 {
            by_hand = by_hand.multiply(&sl3_unipotent(1)).unwrap();
        }
        assert_eq!(by_hand, GroupElement::Sl3(want));
        assert!(heis(3, -2, 7).power(0).unwrap().is_identity());
        assert_eq!(heis(1, 1, 0).power(2).unwrap(), heis(2, 2, 1));
    }

    #[test]
    fn mismatch_and_overflow() {
        assert!(matches!(
            zn(&[1]).multiply(&heis(0, 0, 0)),
            Err(Error::GroupMismatch(..))
        ));
        assert!(matches!(
            zn(&[i64::MAX]).multiply(&zn(&[1])),
            Err(Error::IntegerOverflow)
        ));
        assert!(matches!(zn(&[i64::MIN]).inverse(), Err(Error::IntegerOverflow)));
        assert!(matches!(heis(1 << 40, 1 << 40, 0).power(4), Err(Error::IntegerOverflow)));
    }

    #[test]
    fn payload_validation() {
        assert!(GroupElement::from_payload("sl3", &[2, 0, 0, 0, 1, 0, 0, 0, 1]).is_err());
        assert!(GroupElement::from_payload("heis", &[1, 2]).is_err());
        assert!(GroupElement::from_payload("zn", &[]).is_err());
        assert!(GroupElement::from_payload("free", &[1]).is_err());
        let g = GroupElement::from_payload("sl3", &[1, 1, 0, 0, 1, 0, 0, 0, 1]).unwrap();
        assert_eq!(g, sl3_unipotent(1));
    }

    #[test]
    fn json_encoding() {
        let s = serde_json::to_string(&sl3_unipotent(3)).unwrap();
        assert_eq!(s, r#"{"group":"sl3","data":[1,0,0,0,1,1,0,0,1]}"#);
        let back: GroupElement = serde_json::from_str(&s).unwrap();
        assert_eq!(back, sl3_unipotent(3));
        assert!(serde_json::from_str::<GroupElement>(r#"{"group":"heis","data":[1]}"#).is_err());
    }

    #[test]
    fn generator_sets() {
        assert!(GeneratorSet::new(GroupId::Zn(1), vec![zn(&[0])]).is_err());
        assert!(GeneratorSet::new(GroupId::Zn(2), vec![zn(&[1])]).is_err());
        let s = GeneratorSet::new(GroupId::Zn(1), vec![zn(&[1]), zn(&[-1])]).unwrap();
        assert!(s.is_symmetric());
        assert!(!GeneratorSet::standard(GroupId::Sl3).is_symmetric());
        assert_eq!(GeneratorSet::standard(GroupId::Sl3).symmetrized().unwrap().len(), 12);
    }

    #[test]
    fn group_id_parse() {
        assert_eq!(GroupId::parse("zn:3").unwrap(), GroupId::Zn(3));
        assert_eq!(GroupId::parse("z2").unwrap(), GroupId::Zn(2));
        assert_eq!(GroupId::parse("heis").unwrap(), GroupId::Heisenberg);
        assert!(GroupId::parse("zn:0").is_err());
        assert!(GroupId::parse("free").is_err());
    }
}
