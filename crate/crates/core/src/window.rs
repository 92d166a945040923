//! Finite indexed subsets of a group, and Cayley-ball enumeration.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::{GeneratorSet, GroupElement, GroupId};

/// Default cap on the number of elements in an enumerated window.
pub const DEFAULT_SIZE_LIMIT: usize = 100_000;

/// A finite list of distinct elements of one group with an element-to-index
/// map. Index order is the order elements were supplied in.
#[derive(Clone, Debug)]
pub struct Window {
    group: GroupId,
    elements: Vec<GroupElement>,
    index: HashMap<GroupElement, usize>,
}

impl PartialEq for Window {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.elements == other.elements
    }
}

impl Eq for Window {}

impl Window {
    pub fn new(group: GroupId, elements: Vec<GroupElement>) -> Result<Window> {
        let mut index = HashMap::with_capacity(elements.len());
        for (i, g) in elements.iter().enumerate() {
            if g.group() != group {
                return Err(Error::GroupMismatch(group, g.group()));
            }
            if index.insert(g.clone(), i).is_some() {
                return Err(Error::InvalidParameter(format!("duplicate window element {g}")));
            }
        }
        Ok(Window {
            group,
            elements,
            index,
        })
    }

    /// Window over the group of the first element.
    pub fn from_elements(elements: Vec<GroupElement>) -> Result<Window> {
        let group = elements
            .first()
            .map(GroupElement::group)
            .ok_or_else(|| Error::InvalidParameter("empty window".into()))?;
        Window::new(group, elements)
    }

    pub fn singleton(g: GroupElement) -> Window {
        Window::new(g.group(), vec![g]).expect("one element is always distinct")
    }

    /// `{lo, ..., hi}` in `Z`.
    pub fn interval(lo: i64, hi: i64) -> Window {
        Window::new(GroupId::Zn(1), (lo..=hi).map(|k| GroupElement::Zn(vec![k])).collect())
            .expect("interval points are distinct")
    }

    /// The lattice rectangle `[x0, x1] x [y0, y1]` in `Z^2`, row-major in x.
    pub fn rectangle(x0: i64, x1: i64, y0: i64, y1: i64) -> Window {
        let mut els = Vec::new();
        for x in x0..=x1 {
            for y in y0..=y1 {
                els.push(GroupElement::Zn(vec![x, y]));
            }
        }
        Window::new(GroupId::Zn(2), els).expect("rectangle points are distinct")
    }

    /// `[0, n)^dim` in `Z^dim`, in lexicographic order.
    pub fn cube(dim: usize, n: i64) -> Result<Window> {
        let total = (n.max(0) as u128).checked_pow(dim as u32).unwrap_or(u128::MAX);
        if total > DEFAULT_SIZE_LIMIT as u128 {
            return Err(Error::SizeLimitExceeded {
                limit: DEFAULT_SIZE_LIMIT,
            });
        }
        let mut els = vec![Vec::new()];
        for _ in 0..dim {
            els = els
                .into_iter()
                .flat_map(|p: Vec<i64>| {
                    (0..n).map(move |k| {
                        let mut q = p.clone();
                        q.push(k);
                        q
                    })
                })
                .collect();
        }
        Window::new(GroupId::Zn(dim), els.into_iter().map(GroupElement::Zn).collect())
    }

    pub fn group(&self) -> GroupId {
        self.group
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, i: usize) -> &GroupElement {
        &self.elements[i]
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.index.contains_key(g)
    }

    /// Index of `g`, or `ElementNotInWindow`.
    pub fn require(&self, g: &GroupElement) -> Result<usize> {
        self.index_of(g)
            .ok_or_else(|| Error::ElementNotInWindow(g.to_string()))
    }

    pub fn is_subset_of(&self, other: &Window) -> bool {
        self.group == other.group && self.elements.iter().all(|g| other.contains(g))
    }
}

impl Serialize for Window {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.elements.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Window {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let elements = Vec::<GroupElement>::deserialize(d)?;
        Window::from_elements(elements).map_err(serde::de::Error::custom)
    }
}

/// Breadth-first ball of word length `<= radius` over `gens` and their
/// inverses. Elements are ordered by layer, then lexicographically by
/// canonical payload.
pub fn ball(gens: &GeneratorSet, radius: usize, size_limit: usize) -> Result<Window> {
    if gens.is_empty() {
        return Err(Error::InvalidParameter("ball needs at least one generator".into()));
    }
    let steps = gens.symmetrized()?;
    let e = GroupElement::identity(gens.group());
    let mut seen: HashSet<GroupElement> = HashSet::from([e.clone()]);
    let mut elements = vec![e];
    let mut frontier_start = 0;
    for _ in 0..radius {
        let frontier_end = elements.len();
        let mut layer = Vec::new();
        for g in &elements[frontier_start..frontier_end] {
            for s in &steps {
                let h = g.multiply(s)?;
                if seen.insert(h.clone()) {
                    layer.push(h);
                }
            }
        }
        if elements.len() + layer.len() > size_limit {
            return Err(Error::SizeLimitExceeded { limit: size_limit });
        }
        if layer.is_empty() {
            break;
        }
        layer.sort();
        elements.extend(layer);
        frontier_start = frontier_end;
    }
    Window::new(gens.group(), elements)
}

/// `w` together with every product `g * m` for `g` in `w` and `m` in
/// `multipliers`. Original indices are kept; new elements are appended in
/// lexicographic payload order.
pub fn window_closure(w: &Window, multipliers: &[GroupElement], size_limit: usize) -> Result<Window> {
    let mut added = Vec::new();
    let mut seen: HashSet<GroupElement> = HashSet::new();
    for m in multipliers {
        if m.group() != w.group() {
            return Err(Error::GroupMismatch(w.group(), m.group()));
        }
        for g in w.elements() {
            let h = g.multiply(m)?;
            if !w.contains(&h) && seen.insert(h.clone()) {
                added.push(h);
            }
        }
    }
    if w.len() + added.len() > size_limit {
        return Err(Error::SizeLimitExceeded { limit: size_limit });
    }
    added.sort();
    let mut elements = w.elements().to_vec();
    elements.extend(added);
    Window::new(w.group(), elements)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{sl3_unipotent, unit_vector, zn};

    // Brute-force oracle: all integer points with l1 norm <= r.
    fn l1_ball_count(dim: usize, r: i64) -> usize {
        let mut pts = vec![vec![]];
        for _ in 0..dim {
            pts = pts
                .into_iter()
                .flat_map(|p: Vec<i64>| {
                    (-r..=r).map(move |k| {
                        let mut q = p.clone();
                        q.push(k);
                        q
                    })
                })
                .collect();
        }
        pts.iter()
            .filter(|p| p.iter().map(|x| x.abs()).sum::<i64>() <= r)
            .count()
    }

    #[test]
    fn z2_ball_sizes() {
        let gens = GeneratorSet::standard(GroupId::Zn(2));
        assert_eq!(ball(&gens, 0, 100).unwrap().len(), 1);
        assert_eq!(ball(&gens, 1, 100).unwrap().len(), 5);
        assert_eq!(ball(&gens, 2, 100).unwrap().len(), 13);
        for r in 0..6 {
            assert_eq!(ball(&gens, r, 10_000).unwrap().len(), l1_ball_count(2, r as i64));
        }
        let g3 = GeneratorSet::standard(GroupId::Zn(3));
        assert_eq!(ball(&g3, 2, 10_000).unwrap().len(), l1_ball_count(3, 2));
    }

    #[test]
    fn ball_ordering_is_layered_then_lex() {
        let w = ball(&GeneratorSet::standard(GroupId::Zn(2)), 1, 100).unwrap();
        let got: Vec<_> = w.elements().to_vec();
        assert_eq!(
            got,
            vec![zn(&[0, 0]), zn(&[-1, 0]), zn(&[0, -1]), zn(&[0, 1]), zn(&[1, 0])]
        );
    }

    #[test]
    fn size_limit() {
        let gens = GeneratorSet::standard(GroupId::Sl3);
        assert!(matches!(
            ball(&gens, 3, 50),
            Err(Error::SizeLimitExceeded { limit: 50 })
        ));
    }

    #[test]
    fn closure_examples() {
        let e = GroupElement::identity(GroupId::Sl3);
        let w = Window::singleton(e.clone());
        let c = window_closure(&w, &[sl3_unipotent(1)], 100).unwrap();
        assert_eq!(c.elements(), &[e, sl3_unipotent(1)]);

        let b = ball(&GeneratorSet::standard(GroupId::Zn(2)), 1, 100).unwrap();
        let c = window_closure(&b, &[unit_vector(2, 0)], 100).unwrap();
        assert_eq!(c.len(), 8);
        for p in [zn(&[2, 0]), zn(&[1, 1]), zn(&[1, -1])] {
            assert!(c.contains(&p));
        }
        assert_eq!(window_closure(&b, &[], 100).unwrap(), b);
    }

    #[test]
    fn window_validation() {
        assert!(Window::new(GroupId::Zn(1), vec![zn(&[1]), zn(&[1])]).is_err());
        assert!(Window::new(GroupId::Zn(1), vec![zn(&[1, 2])]).is_err());
        assert!(serde_json::from_str::<Window>("[]").is_err());
        let w: Window =
            serde_json::from_str(r#"[{"group":"zn","data":[0]},{"group":"zn","data":[3]}]"#).unwrap();
        assert_eq!(w.index_of(&zn(&[3])), Some(1));
        assert!(matches!(w.require(&zn(&[4])), Err(Error::ElementNotInWindow(_))));
    }

    #[test]
    fn rectangle_and_cube() {
        assert_eq!(Window::rectangle(0, 2, 0, 2).len(), 9);
        assert_eq!(Window::cube(2, 4).unwrap().len(), 16);
        assert_eq!(Window::interval(-2, 2).len(), 5);
    }
}
