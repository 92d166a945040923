//! Strict orders restricted to a finite window.
//!
//! [`OrderMatrix`] stores a relation as a packed bit matrix
//! (`rel[i][j]` means `element_i ≺ element_j`). [`RankedOrder`] is the compact
//! form of a total order, used where a dense matrix would not fit.

use std::fmt;

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupId};
use crate::window::Window;

/// Square bit matrix with 64-bit word packing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    n: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: usize) -> BitMatrix {
        let stride = n.div_ceil(64);
        BitMatrix {
            n,
            stride,
            data: vec![0; n * stride],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.stride + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize) {
        self.data[i * self.stride + j / 64] |= 1 << (j % 64);
    }

    #[inline]
    pub fn clear(&mut self, i: usize, j: usize) {
        self.data[i * self.stride + j / 64] &= !(1 << (j % 64));
    }

    pub fn flip(&mut self, i: usize, j: usize) {
        self.data[i * self.stride + j / 64] ^= 1 << (j % 64);
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    /// `row[dst] |= row[src]`.
    pub fn or_row(&mut self, dst: usize, src: usize) {
        if dst == src {
            return;
        }
        let (d, s) = (dst * self.stride, src * self.stride);
        for w in 0..self.stride {
            let v = self.data[s + w];
            self.data[d + w] |= v;
        }
    }

    pub fn row_count(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn count(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Set bits of row `i`, ascending.
    pub fn row_ones(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(i).iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let b = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * 64 + b)
            })
        })
    }

    /// Warshall closure by row OR.
    pub fn close_transitively(&mut self) {
        for k in 0..self.n {
            for i in 0..self.n {
                if self.get(i, k) {
                    self.or_row(i, k);
                }
            }
        }
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|i| self.row_ones(i).map(move |j| (i, j)))
            .collect()
    }
}

/// Read access to a strict relation on a window.
pub trait Relation {
    fn window(&self) -> &Window;
    fn precedes(&self, i: usize, j: usize) -> bool;
}

/// A strict binary relation on a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderMatrix {
    window: Window,
    rel: BitMatrix,
    closed: bool,
}

impl Relation for OrderMatrix {
    fn window(&self) -> &Window {
        &self.window
    }

    fn precedes(&self, i: usize, j: usize) -> bool {
        self.rel.get(i, j)
    }
}

impl OrderMatrix {
    pub fn empty(window: Window) -> OrderMatrix {
        let n = window.len();
        OrderMatrix {
            window,
            rel: BitMatrix::new(n),
            closed: true,
        }
    }

    /// Raw relation from index pairs; not closed, not validated beyond bounds.
    pub fn from_pairs(window: Window, pairs: &[(usize, usize)]) -> Result<OrderMatrix> {
        let n = window.len();
        let mut rel = BitMatrix::new(n);
        for &(i, j) in pairs {
            if i >= n || j >= n {
                return Err(Error::Format(format!("pair ({i}, {j}) out of range for window of {n}")));
            }
            rel.set(i, j);
        }
        Ok(OrderMatrix {
            window,
            rel,
            closed: false,
        })
    }

    pub(crate) fn from_parts(window: Window, rel: BitMatrix, closed: bool) -> OrderMatrix {
        debug_assert_eq!(window.len(), rel.size());
        OrderMatrix { window, rel, closed }
    }

    /// Total order in which `perm[0] ≺ perm[1] ≺ ...`.
    pub fn from_permutation(window: Window, perm: &[usize]) -> Result<OrderMatrix> {
        RankedOrder::from_permutation(window, perm.to_vec()).map(|r| r.to_matrix())
    }

    /// Total order induced by a strict comparison of window elements.
    pub fn from_comparator<F>(window: Window, cmp: F) -> OrderMatrix
    where
        F: FnMut(&GroupElement, &GroupElement) -> std::cmp::Ordering,
    {
        RankedOrder::from_comparator(window, cmp).to_matrix()
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn rel(&self) -> &BitMatrix {
        &self.rel
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn len(&self) -> usize {
        self.window.len()
    }

    pub fn is_empty(&self) -> bool {
        self.window.is_empty()
    }

    pub fn precedes(&self, i: usize, j: usize) -> bool {
        self.rel.get(i, j)
    }

    pub fn precedes_elements(&self, x: &GroupElement, y: &GroupElement) -> Result<bool> {
        Ok(self.rel.get(self.window.require(x)?, self.window.require(y)?))
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.rel.pairs()
    }

    /// Flips one relation bit. Used to build mutation corpora.
    pub fn flip_bit(&mut self, i: usize, j: usize) {
        self.rel.flip(i, j);
    }

    /// Non-reflexive and antisymmetric; transitive too when flagged closed.
    pub fn is_valid(&self) -> bool {
        let n = self.len();
        for i in 0..n {
            if self.rel.get(i, i) {
                return false;
            }
            for j in self.rel.row_ones(i) {
                if self.rel.get(j, i) {
                    return false;
                }
                if self.closed {
                    for k in self.rel.row_ones(j) {
                        if !self.rel.get(i, k) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Smallest transitive superset, or the cycle that makes it reflexive.
    pub fn transitive_closure(&self) -> Result<OrderMatrix> {
        let mut rel = self.rel.clone();
        rel.close_transitively();
        if let Some(i) = (0..self.len()).find(|&i| rel.get(i, i)) {
            return Err(Error::Contradiction {
                cycle: self.cycle_through(i),
            });
        }
        Ok(OrderMatrix {
            window: self.window.clone(),
            rel,
            closed: true,
        })
    }

    // Shortest path i -> ... -> i in the raw relation.
    fn cycle_through(&self, start: usize) -> Vec<usize> {
        let n = self.len();
        let mut parent = vec![usize::MAX; n];
        let mut queue = std::collections::VecDeque::new();
        for j in self.rel.row_ones(start) {
            if j == start {
                return vec![start, start];
            }
            if parent[j] == usize::MAX {
                parent[j] = start;
                queue.push_back(j);
            }
        }
        while let Some(u) = queue.pop_front() {
            for v in self.rel.row_ones(u) {
                if v == start {
                    let mut back = Vec::new();
                    let mut cur = u;
                    while cur != start {
                        back.push(cur);
                        cur = parent[cur];
                    }
                    let mut out = vec![start];
                    out.extend(back.into_iter().rev());
                    out.push(start);
                    return out;
                }
                if parent[v] == usize::MAX {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        vec![start, start]
    }

    /// Every off-diagonal pair decided.
    pub fn is_total(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| ((i + 1)..n).all(|j| self.rel.get(i, j) || self.rel.get(j, i)))
    }

    /// Left translate: `x m' y` iff `g^{-1} x ≺ g^{-1} y`, on the same window.
    /// Pairs whose preimages leave the window are left undecided.
    pub fn translate(&self, g: &GroupElement) -> Result<OrderMatrix> {
        if g.group() != self.window.group() {
            return Err(Error::GroupMismatch(self.window.group(), g.group()));
        }
        let ginv = g.inverse()?;
        let pre: Vec<Option<usize>> = self
            .window
            .elements()
            .iter()
            .map(|x| ginv.multiply(x).map(|y| self.window.index_of(&y)))
            .collect::<Result<_>>()?;
        let n = self.len();
        let mut rel = BitMatrix::new(n);
        for (x, px) in pre.iter().enumerate() {
            let Some(px) = *px else { continue };
            for (y, py) in pre.iter().enumerate() {
                if py.is_some_and(|py| self.rel.get(px, py)) {
                    rel.set(x, y);
                }
            }
        }
        Ok(OrderMatrix {
            window: self.window.clone(),
            rel,
            closed: self.closed,
        })
    }

    /// Indices of window elements whose preimage under `g` stays inside.
    pub fn translate_domain(&self, g: &GroupElement) -> Result<Vec<usize>> {
        let ginv = g.inverse()?;
        let mut out = Vec::new();
        for (i, x) in self.window.elements().iter().enumerate() {
            if self.window.contains(&ginv.multiply(x)?) {
                out.push(i);
            }
        }
        Ok(out)
    }

    /// Restriction to a sub-window, re-indexed by the sub-window.
    pub fn restrict(&self, sub: &Window) -> Result<OrderMatrix> {
        let idx: Vec<usize> = sub
            .elements()
            .iter()
            .map(|g| {
                self.window
                    .index_of(g)
                    .ok_or_else(|| Error::DomainNotCovered(format!("{g} outside order window")))
            })
            .collect::<Result<_>>()?;
        let k = idx.len();
        let mut rel = BitMatrix::new(k);
        for a in 0..k {
            for b in 0..k {
                if self.rel.get(idx[a], idx[b]) {
                    rel.set(a, b);
                }
            }
        }
        Ok(OrderMatrix {
            window: sub.clone(),
            rel,
            closed: self.closed,
        })
    }

    /// `{y : x ≺ y}`, in window order.
    pub fn past_set(&self, x: &GroupElement) -> Result<Vec<GroupElement>> {
        let i = self.window.require(x)?;
        Ok(self
            .rel
            .row_ones(i)
            .map(|j| self.window.get(j).clone())
            .collect())
    }

    /// `{γ : x ≺ xγ}` over the γ with `xγ` in the window.
    pub fn direction_set(&self, x: &GroupElement) -> Result<Vec<GroupElement>> {
        let i = self.window.require(x)?;
        let xinv = x.inverse()?;
        self.rel
            .row_ones(i)
            .map(|j| xinv.multiply(self.window.get(j)))
            .collect()
    }

    /// 0-based position of each element in a total order.
    pub fn ranks(&self) -> Result<Vec<usize>> {
        if !self.is_total() {
            return Err(Error::NotTotal);
        }
        let n = self.len();
        Ok((0..n).map(|i| n - 1 - self.rel.row_count(i)).collect())
    }

    pub fn to_ranked(&self) -> Result<RankedOrder> {
        let ranks = self.ranks()?;
        let mut perm = vec![0; ranks.len()];
        for (i, &r) in ranks.iter().enumerate() {
            perm[r] = i;
        }
        RankedOrder::from_permutation(self.window.clone(), perm)
    }

    /// True iff this order agrees with the cylinder pattern on its domain.
    pub fn matches_cylinder(&self, c: &CylinderSpec) -> Result<bool> {
        let d = c.domain();
        let idx: Vec<usize> = d
            .elements()
            .iter()
            .map(|g| {
                self.window
                    .index_of(g)
                    .ok_or_else(|| Error::DomainNotCovered(format!("{g} outside order window")))
            })
            .collect::<Result<_>>()?;
        for a in 0..idx.len() {
            for b in (a + 1)..idx.len() {
                let ab = self.rel.get(idx[a], idx[b]);
                if !ab && !self.rel.get(idx[b], idx[a]) {
                    return Err(Error::NotTotal);
                }
                if ab != c.pattern.precedes(a, b) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Rank grid of a total order on a full rectangle of `Z^2`.
    pub fn render_levels(&self) -> Result<LevelGrid> {
        if self.window.group() != GroupId::Zn(2) {
            return Err(Error::NotRectangular);
        }
        let pts: Vec<(i64, i64)> = self
            .window
            .elements()
            .iter()
            .map(|g| match g {
                GroupElement::Zn(v) => (v[0], v[1]),
                _ => unreachable!("window group checked"),
            })
            .collect();
        let x0 = pts.iter().map(|p| p.0).min().ok_or(Error::NotRectangular)?;
        let x1 = pts.iter().map(|p| p.0).max().ok_or(Error::NotRectangular)?;
        let y0 = pts.iter().map(|p| p.1).min().ok_or(Error::NotRectangular)?;
        let y1 = pts.iter().map(|p| p.1).max().ok_or(Error::NotRectangular)?;
        let width = (x1 - x0 + 1) as usize;
        let height = (y1 - y0 + 1) as usize;
        if width.checked_mul(height) != Some(pts.len()) {
            return Err(Error::NotRectangular);
        }
        let ranks = self.ranks()?;
        let mut grid = vec![vec![0usize; width]; height];
        for (i, &(x, y)) in pts.iter().enumerate() {
            grid[(y - y0) as usize][(x - x0) as usize] = ranks[i];
        }
        Ok(LevelGrid { x0, y0, grid })
    }
}

/// Ranks on a rectangle; `grid[row][col]` is the point `(x0 + col, y0 + row)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelGrid {
    pub x0: i64,
    pub y0: i64,
    pub grid: Vec<Vec<usize>>,
}

impl LevelGrid {
    pub fn rank_at(&self, x: i64, y: i64) -> Option<usize> {
        let row = self.grid.get(usize::try_from(y - self.y0).ok()?)?;
        row.get(usize::try_from(x - self.x0).ok()?).copied()
    }
}

impl fmt::Display for LevelGrid {
    /// One line per y, highest y first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .grid
            .iter()
            .flatten()
            .map(|r| r.to_string().len())
            .max()
            .unwrap_or(1);
        for row in self.grid.iter().rev() {
            let cells: Vec<String> = row.iter().map(|r| format!("{r:>width$}")).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// A total order stored as the list of window indices in increasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankedOrder {
    window: Window,
    perm: Vec<usize>,
    rank: Vec<usize>,
}

impl Relation for RankedOrder {
    fn window(&self) -> &Window {
        &self.window
    }

    fn precedes(&self, i: usize, j: usize) -> bool {
        self.rank[i] < self.rank[j]
    }
}

impl RankedOrder {
    pub fn from_permutation(window: Window, perm: Vec<usize>) -> Result<RankedOrder> {
        let n = window.len();
        if perm.len() != n {
            return Err(Error::Format(format!(
                "permutation has {} entries for a window of {n}",
                perm.len()
            )));
        }
        let mut rank = vec![usize::MAX; n];
        for (r, &i) in perm.iter().enumerate() {
            if i >= n || rank[i] != usize::MAX {
                return Err(Error::Format("not a permutation of window indices".into()));
            }
            rank[i] = r;
        }
        Ok(RankedOrder { window, perm, rank })
    }

    pub fn from_comparator<F>(window: Window, mut cmp: F) -> RankedOrder
    where
        F: FnMut(&GroupElement, &GroupElement) -> std::cmp::Ordering,
    {
        let mut perm: Vec<usize> = (0..window.len()).collect();
        perm.sort_by(|&a, &b| cmp(window.get(a), window.get(b)));
        RankedOrder::from_permutation(window, perm).expect("sorted indices form a permutation")
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn rank(&self, i: usize) -> usize {
        self.rank[i]
    }

    pub fn to_matrix(&self) -> OrderMatrix {
        let n = self.window.len();
        let mut rel = BitMatrix::new(n);
        for (r, &i) in self.perm.iter().enumerate() {
            for &j in &self.perm[r + 1..] {
                rel.set(i, j);
            }
        }
        OrderMatrix {
            window: self.window.clone(),
            rel,
            closed: true,
        }
    }
}

/// The cylinder set of total orders agreeing with `pattern` on its window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CylinderSpec {
    pattern: OrderMatrix,
}

impl CylinderSpec {
    pub fn new(pattern: OrderMatrix) -> Result<CylinderSpec> {
        let pattern = if pattern.is_closed() {
            pattern
        } else {
            pattern.transitive_closure()?
        };
        if !pattern.is_valid() {
            return Err(Error::InvalidParameter("cylinder pattern is not an order".into()));
        }
        if !pattern.is_total() {
            return Err(Error::NotTotal);
        }
        Ok(CylinderSpec { pattern })
    }

    pub fn domain(&self) -> &Window {
        self.pattern.window()
    }

    pub fn pattern(&self) -> &OrderMatrix {
        &self.pattern
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{unit_vector, zn, GeneratorSet};
    use crate::window::ball;

    fn lex(w: Window) -> OrderMatrix {
        OrderMatrix::from_comparator(w, |a, b| a.cmp(b))
    }

    #[test]
    fn closure_examples() {
        let w = Window::interval(0, 2);
        let m = OrderMatrix::from_pairs(w.clone(), &[(0, 1), (1, 2)]).unwrap();
        let c = m.transitive_closure().unwrap();
        assert_eq!(c.pairs(), vec![(0, 1), (0, 2), (1, 2)]);
        assert!(c.is_closed());

        let bad = OrderMatrix::from_pairs(Window::interval(0, 1), &[(0, 1), (1, 0)]).unwrap();
        match bad.transitive_closure() {
            Err(Error::Contradiction { cycle }) => assert_eq!(cycle, vec![0, 1, 0]),
            other => panic!("expected contradiction, got {other:?}"),
        }

        let total = lex(Window::interval(0, 3));
        assert_eq!(total.transitive_closure().unwrap(), total);
    }

    #[test]
    fn longer_cycle_witness() {
        let w = Window::interval(0, 4);
        let m = OrderMatrix::from_pairs(w, &[(0, 2), (2, 4), (4, 1), (1, 0), (3, 3)]).unwrap();
        match m.transitive_closure() {
            Err(Error::Contradiction { cycle }) => assert_eq!(cycle, vec![0, 2, 4, 1, 0]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn totality() {
        let w = ball(&GeneratorSet::standard(GroupId::Zn(2)), 1, 100).unwrap();
        assert!(lex(w.clone()).is_total());
        assert!(!OrderMatrix::empty(w).is_total());
        let m = OrderMatrix::from_pairs(Window::interval(0, 2), &[(0, 1)])
            .unwrap()
            .transitive_closure()
            .unwrap();
        assert!(!m.is_total());
    }

    #[test]
    fn translation_of_lex_is_lex_on_overlap() {
        let w = ball(&GeneratorSet::standard(GroupId::Zn(2)), 2, 100).unwrap();
        let m = lex(w.clone());
        let g = zn(&[1, -1]);
        let t = m.translate(&g).unwrap();
        let dom = m.translate_domain(&g).unwrap();
        for &i in &dom {
            for &j in &dom {
                assert_eq!(t.precedes(i, j), m.precedes(i, j));
            }
        }
        let back = t.translate(&g.inverse().unwrap()).unwrap();
        for i in 0..w.len() {
            for j in 0..w.len() {
                if back.precedes(i, j) {
                    assert!(m.precedes(i, j));
                }
            }
        }
        assert_eq!(m.translate(&zn(&[0, 0])).unwrap(), m);
    }

    #[test]
    fn past_and_direction_sets() {
        // quadrant partial order on ball(2): x ≺ y iff y - x in Z_+^2 \ {0}
        let w = ball(&GeneratorSet::standard(GroupId::Zn(2)), 2, 100).unwrap();
        let pairs: Vec<_> = (0..w.len())
            .flat_map(|i| (0..w.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| {
                let (GroupElement::Zn(a), GroupElement::Zn(b)) = (w.get(i), w.get(j)) else {
                    unreachable!()
                };
                i != j && b[0] >= a[0] && b[1] >= a[1]
            })
            .collect();
        let m = OrderMatrix::from_pairs(w.clone(), &pairs).unwrap().transitive_closure().unwrap();
        let mut past = m.past_set(&zn(&[0, 0])).unwrap();
        past.sort();
        let mut want = vec![zn(&[1, 0]), zn(&[0, 1]), zn(&[1, 1]), zn(&[2, 0]), zn(&[0, 2])];
        want.sort();
        assert_eq!(past, want);
        let dirs = m.direction_set(&zn(&[-1, 0])).unwrap();
        assert!(dirs.contains(&unit_vector(2, 0)));
        assert!(dirs.contains(&zn(&[1, 1])));

        let t = lex(w.clone());
        let top = w.get(t.to_ranked().unwrap().permutation()[w.len() - 1]).clone();
        assert!(t.past_set(&top).unwrap().is_empty());
        assert!(t.direction_set(&top).unwrap().is_empty());
        assert!(matches!(t.past_set(&zn(&[5, 5])), Err(Error::ElementNotInWindow(_))));
    }

    #[test]
    fn cylinders() {
        let w = ball(&GeneratorSet::standard(GroupId::Zn(2)), 1, 100).unwrap();
        let m = lex(w.clone());
        let d = Window::from_elements(vec![zn(&[0, 0]), zn(&[1, 0]), zn(&[0, 1])]).unwrap();
        let c = CylinderSpec::new(m.restrict(&d).unwrap()).unwrap();
        assert!(m.matches_cylinder(&c).unwrap());
        let mut flipped = c.pattern().clone();
        // (1,0) and (0,1) are adjacent in lex, so swapping them stays an order
        flipped.flip_bit(1, 2);
        flipped.flip_bit(2, 1);
        let c2 = CylinderSpec::new(flipped).unwrap();
        assert!(!m.matches_cylinder(&c2).unwrap());
        let single = CylinderSpec::new(OrderMatrix::empty(Window::singleton(zn(&[0, 0])))).unwrap();
        assert!(m.matches_cylinder(&single).unwrap());
        let outside = CylinderSpec::new(OrderMatrix::empty(Window::singleton(zn(&[7, 0])))).unwrap();
        assert!(matches!(m.matches_cylinder(&outside), Err(Error::DomainNotCovered(_))));
    }

    #[test]
    fn levels_of_lex() {
        let w = Window::rectangle(0, 2, 0, 2);
        let grid = lex(w).render_levels().unwrap();
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(grid.rank_at(x, y), Some((3 * x + y) as usize));
            }
        }
        assert_eq!(grid.to_string(), "2 5 8\n1 4 7\n0 3 6\n");
    }

    #[test]
    fn levels_errors() {
        let w = ball(&GeneratorSet::standard(GroupId::Zn(2)), 1, 100).unwrap();
        assert!(matches!(lex(w).render_levels(), Err(Error::NotRectangular)));
        let r = Window::rectangle(0, 1, 0, 1);
        assert!(matches!(OrderMatrix::empty(r).render_levels(), Err(Error::NotTotal)));
        assert!(matches!(lex(Window::interval(0, 3)).render_levels(), Err(Error::NotRectangular)));
    }

    #[test]
    fn ranked_round_trip() {
        let w = Window::interval(0, 4);
        let r = RankedOrder::from_permutation(w.clone(), vec![3, 1, 4, 0, 2]).unwrap();
        let m = r.to_matrix();
        assert!(m.is_valid() && m.is_total());
        assert_eq!(m.to_ranked().unwrap(), r);
        assert!(RankedOrder::from_permutation(w.clone(), vec![0, 0, 1, 2, 3]).is_err());
        assert!(RankedOrder::from_permutation(w, vec![0]).is_err());
    }
}
