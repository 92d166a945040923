//! Deciding whether a constraint system admits a total order on its window.
//!
//! Propagation is transitive closure of the decided pairs. If the atoms close
//! up into a cycle the system is UNSAT and the certificate is a replayable
//! derivation of that cycle. Otherwise the solver branches on the lowest
//! undecided pair, trying `i ≺ j` first, and returns the resulting total
//! order as the witness.

use std::collections::{HashMap, HashSet, VecDeque};
use std::time::{Duration, Instant};

use crate::constraints::ConstraintSystem;
use crate::error::{Error, Result};
use crate::order::{BitMatrix, OrderMatrix};

/// Largest window the solver accepts by default (dense `n x n` bits).
pub const DEFAULT_ENGINE_SIZE_LIMIT: usize = 16_384;

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(10);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub timeout: Duration,
    pub size_limit: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            timeout: DEFAULT_TIMEOUT,
            size_limit: DEFAULT_ENGINE_SIZE_LIMIT,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Sat,
    Unsat,
}

/// Justification of one derived pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    /// The pair is atom number `k` of the system.
    Atom(usize),
    /// `(i, k)` from previously derived `(i, j)` and `(j, k)`.
    Transitivity(usize, usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Step {
    pub pair: (usize, usize),
    pub rule: Rule,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub verdict: Verdict,
    pub witness: Option<OrderMatrix>,
    pub trace: Vec<Step>,
    /// `c_0, c_1, ..., c_0`, each consecutive pair an atom.
    pub cycle: Vec<usize>,
}

impl Certificate {
    pub fn is_sat(&self) -> bool {
        self.verdict == Verdict::Sat
    }

    /// Every pair the trace derives, in step order.
    pub fn derived_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.trace.iter().map(|s| s.pair)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Propagation {
    Unsat(Certificate),
    Inconclusive,
}

/// UNSAT certificate if the atoms alone close into a cycle; never branches.
pub fn propagate_only(cs: &ConstraintSystem) -> Propagation {
    match shortest_cycle(cs.window().len(), cs.atoms()) {
        Some(cycle) => Propagation::Unsat(unsat_certificate(cs, cycle)),
        None => Propagation::Inconclusive,
    }
}

/// Complete decision procedure for the window.
pub fn solve(cs: &ConstraintSystem, budget: Budget) -> Result<Certificate> {
    let n = cs.window().len();
    if n > budget.size_limit {
        return Err(Error::SizeLimitExceeded {
            limit: budget.size_limit,
        });
    }
    let start = Instant::now();
    let mut state = Closure::new(n);
    for &(i, j) in cs.atoms() {
        if !state.assert(i, j) {
            let cycle = shortest_cycle(n, cs.atoms()).expect("closure conflict implies an atom cycle");
            return Ok(unsat_certificate(cs, cycle));
        }
    }

    // Decision stack: (pair, undo mark, whether the reversed literal was tried).
    let mut stack: Vec<((usize, usize), usize, bool)> = Vec::new();
    let mut cursor = (0usize, 1usize);
    loop {
        if start.elapsed() >= budget.timeout {
            return Err(Error::Timeout {
                seconds: budget.timeout.as_secs_f64(),
            });
        }
        let Some((i, j)) = state.next_undecided(cursor) else {
            break;
        };
        cursor = (i, j);
        let mark = state.mark();
        if state.assert(i, j) {
            stack.push(((i, j), mark, false));
            continue;
        }
        state.undo(mark);
        if state.assert(j, i) {
            stack.push(((i, j), mark, true));
            continue;
        }
        state.undo(mark);
        // both literals fail: backtrack to the last untried alternative
        loop {
            let Some(((a, b), m, flipped)) = stack.pop() else {
                let cycle = shortest_cycle(n, cs.atoms()).expect("root conflict implies an atom cycle");
                return Ok(unsat_certificate(cs, cycle));
            };
            state.undo(m);
            if !flipped && state.assert(b, a) {
                stack.push(((a, b), m, true));
                cursor = (a, b);
                break;
            }
            state.undo(m);
        }
    }
    let witness = OrderMatrix::from_parts(cs.window().clone(), state.rel, true);
    Ok(Certificate {
        verdict: Verdict::Sat,
        witness: Some(witness),
        trace: Vec::new(),
        cycle: Vec::new(),
    })
}

/// Transitively closed relation with an undo log of set bits.
struct Closure {
    rel: BitMatrix,
    log: Vec<(usize, usize)>,
}

impl Closure {
    fn new(n: usize) -> Closure {
        Closure {
            rel: BitMatrix::new(n),
            log: Vec::new(),
        }
    }

    fn mark(&self) -> usize {
        self.log.len()
    }

    fn set(&mut self, a: usize, b: usize) {
        if !self.rel.get(a, b) {
            self.rel.set(a, b);
            self.log.push((a, b));
        }
    }

    fn undo(&mut self, mark: usize) {
        while self.log.len() > mark {
            let (a, b) = self.log.pop().expect("log longer than mark");
            self.rel.clear(a, b);
        }
    }

    /// Adds `i ≺ j` and closes; false if that creates a cycle.
    fn assert(&mut self, i: usize, j: usize) -> bool {
        if i == j || self.rel.get(j, i) {
            return false;
        }
        if self.rel.get(i, j) {
            return true;
        }
        let n = self.rel.size();
        let succ: Vec<usize> = std::iter::once(j).chain(self.rel.row_ones(j)).collect();
        let preds: Vec<usize> = (0..n).filter(|&a| a == i || self.rel.get(a, i)).collect();
        for &a in &preds {
            for &b in &succ {
                self.set(a, b);
            }
        }
        true
    }

    fn next_undecided(&self, from: (usize, usize)) -> Option<(usize, usize)> {
        let n = self.rel.size();
        let (mut i, mut j) = from;
        while i < n {
            while j < n {
                if !self.rel.get(i, j) && !self.rel.get(j, i) {
                    return Some((i, j));
                }
                j += 1;
            }
            i += 1;
            j = i + 1;
        }
        None
    }
}

/// Shortest directed cycle among the atoms, ties broken by lowest start
/// vertex; `None` when the atom graph is acyclic.
pub fn shortest_cycle(n: usize, atoms: &[(usize, usize)]) -> Option<Vec<usize>> {
    if let Some(&(i, _)) = atoms.iter().filter(|(i, j)| i == j).min() {
        return Some(vec![i, i]);
    }
    let mut adj = vec![Vec::new(); n];
    let mut indeg = vec![0usize; n];
    for &(i, j) in atoms {
        adj[i].push(j);
        indeg[j] += 1;
    }
    // strip vertices not reachable from a cycle
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut removed = vec![false; n];
    while let Some(v) = queue.pop_front() {
        removed[v] = true;
        for &w in &adj[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                queue.push_back(w);
            }
        }
    }
    let mut best: Option<Vec<usize>> = None;
    let mut parent = vec![usize::MAX; n];
    let mut dist = vec![usize::MAX; n];
    for start in (0..n).filter(|&v| !removed[v]) {
        let limit = best.as_ref().map_or(usize::MAX, |c| c.len() - 1);
        if limit <= 2 {
            break;
        }
        let mut touched = vec![start];
        dist[start] = 0;
        let mut q = VecDeque::from([start]);
        let mut found = None;
        'bfs: while let Some(u) = q.pop_front() {
            if dist[u] + 1 >= limit {
                break;
            }
            for &v in &adj[u] {
                if removed[v] {
                    continue;
                }
                if v == start {
                    found = Some(u);
                    break 'bfs;
                }
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    parent[v] = u;
                    touched.push(v);
                    q.push_back(v);
                }
            }
        }
        if let Some(last) = found {
            let mut back = Vec::new();
            let mut cur = last;
            while cur != start {
                back.push(cur);
                cur = parent[cur];
            }
            let mut cycle = vec![start];
            cycle.extend(back.into_iter().rev());
            cycle.push(start);
            best = Some(cycle);
        }
        for v in touched {
            dist[v] = usize::MAX;
            parent[v] = usize::MAX;
        }
    }
    best
}

/// Derivation of a cycle of atoms. The cycle is cut into segments, each ending
/// with an extra (non-rule) atom; each segment is composed into one pair, then
/// the segment pairs are composed into `(c_0, c_0)`.
fn unsat_certificate(cs: &ConstraintSystem, cycle: Vec<usize>) -> Certificate {
    let index: HashMap<(usize, usize), usize> = cs
        .atoms()
        .iter()
        .enumerate()
        .map(|(k, &p)| (p, k))
        .collect();
    let mut verts: Vec<usize> = cycle[..cycle.len() - 1].to_vec();
    let len = verts.len();
    let edge_atom = |verts: &[usize], t: usize| index[&(verts[t], verts[(t + 1) % len])];

    // targets of extra atoms are segment starts
    let starts: Vec<usize> = (0..len)
        .filter(|&t| !cs.is_rule(edge_atom(&verts, t)))
        .map(|t| (t + 1) % len)
        .collect();
    let rotate_to = if starts.is_empty() {
        (0..len).min_by_key(|&t| verts[t]).expect("non-empty cycle")
    } else {
        *starts.iter().min_by_key(|&&t| verts[t]).expect("non-empty")
    };
    verts.rotate_left(rotate_to);
    let mut cuts: Vec<usize> = (0..len)
        .filter(|&t| !cs.is_rule(edge_atom(&verts, t)))
        .map(|t| t + 1)
        .collect();
    if cuts.last() != Some(&len) {
        cuts.push(len);
    }

    let mut trace = Vec::new();
    let mut seg_start = 0;
    let mut waypoints = vec![verts[0]];
    for &cut in &cuts {
        let s0 = verts[seg_start];
        for t in seg_start..cut {
            let (a, b) = (verts[t], verts[(t + 1) % len]);
            trace.push(Step {
                pair: (a, b),
                rule: Rule::Atom(index[&(a, b)]),
            });
            if t > seg_start {
                trace.push(Step {
                    pair: (s0, b),
                    rule: Rule::Transitivity(s0, a, b),
                });
            }
        }
        waypoints.push(verts[cut % len]);
        seg_start = cut;
    }
    let w0 = waypoints[0];
    for t in 1..waypoints.len() - 1 {
        let (a, b) = (waypoints[t], waypoints[t + 1]);
        trace.push(Step {
            pair: (w0, b),
            rule: Rule::Transitivity(w0, a, b),
        });
    }
    let mut cycle = verts;
    cycle.push(cycle[0]);
    Certificate {
        verdict: Verdict::Unsat,
        witness: None,
        trace,
        cycle,
    }
}

/// Independent replay of a certificate against a system.
pub fn verify_certificate(cs: &ConstraintSystem, cert: &Certificate) -> bool {
    match cert.verdict {
        Verdict::Sat => verify_sat(cs, cert),
        Verdict::Unsat => verify_unsat(cs, cert),
    }
}

fn verify_sat(cs: &ConstraintSystem, cert: &Certificate) -> bool {
    let Some(w) = &cert.witness else { return false };
    if !cert.trace.is_empty() || !cert.cycle.is_empty() || w.window() != cs.window() {
        return false;
    }
    let n = w.len();
    for i in 0..n {
        if w.precedes(i, i) {
            return false;
        }
        for j in (i + 1)..n {
            if w.precedes(i, j) == w.precedes(j, i) {
                return false;
            }
        }
    }
    // a tournament is transitive iff its out-degrees are 0..n-1
    let mut outdeg: Vec<usize> = (0..n).map(|i| w.rel().row_count(i)).collect();
    outdeg.sort_unstable();
    if outdeg.iter().enumerate().any(|(k, &d)| d != k) {
        return false;
    }
    cs.atoms().iter().all(|&(i, j)| w.precedes(i, j))
}

fn verify_unsat(cs: &ConstraintSystem, cert: &Certificate) -> bool {
    if cert.witness.is_some() || cert.trace.is_empty() {
        return false;
    }
    let n = cs.window().len();
    let atoms = cs.atoms();
    let mut derived: HashMap<(usize, usize), usize> = HashMap::new();
    let mut used = vec![false; cert.trace.len()];
    let mut atom_pairs = Vec::new();
    for (s, step) in cert.trace.iter().enumerate() {
        let (a, b) = step.pair;
        if a >= n || b >= n {
            return false;
        }
        match step.rule {
            Rule::Atom(k) => {
                if atoms.get(k) != Some(&step.pair) {
                    return false;
                }
                atom_pairs.push(step.pair);
            }
            Rule::Transitivity(i, j, k) => {
                if (i, k) != step.pair {
                    return false;
                }
                let (Some(&p), Some(&q)) = (derived.get(&(i, j)), derived.get(&(j, k))) else {
                    return false;
                };
                used[p] = true;
                used[q] = true;
            }
        }
        if derived.insert(step.pair, s).is_some() {
            return false;
        }
    }
    let last = cert.trace.len() - 1;
    let (c, c2) = cert.trace[last].pair;
    if c != c2 || used[..last].iter().any(|u| !u) {
        return false;
    }
    // the cycle must be simple, start at c, and consist of the trace's atoms
    let cycle = &cert.cycle;
    if cycle.len() < 2 || cycle[0] != c || cycle[cycle.len() - 1] != c {
        return false;
    }
    let interior = &cycle[..cycle.len() - 1];
    let distinct: HashSet<usize> = interior.iter().copied().collect();
    if distinct.len() != interior.len() {
        return false;
    }
    let edges: HashSet<(usize, usize)> = cycle.windows(2).map(|w| (w[0], w[1])).collect();
    let atom_set: HashSet<(usize, usize)> = atom_pairs.iter().copied().collect();
    edges.len() == atom_pairs.len() && edges == atom_set
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::{build_extension_system, quadrant_order, Convention, LinearFunctionalOrder};
    use crate::group::{GeneratorSet, GroupId};
    use crate::window::{ball, Window};

    #[test]
    fn two_cycle_is_unsat() {
        let w = Window::interval(0, 1);
        let cs = ConstraintSystem::from_atoms(w, vec![(0, 1), (1, 0)]).unwrap();
        let cert = solve(&cs, Budget::default()).unwrap();
        assert_eq!(cert.verdict, Verdict::Unsat);
        assert_eq!(cert.cycle, vec![0, 1, 0]);
        assert_eq!(
            cert.trace,
            vec![
                Step { pair: (0, 1), rule: Rule::Atom(0) },
                Step { pair: (1, 0), rule: Rule::Atom(1) },
                Step { pair: (0, 0), rule: Rule::Transitivity(0, 1, 0) },
            ]
        );
        assert!(verify_certificate(&cs, &cert));
    }

    #[test]
    fn empty_system_gets_canonical_order() {
        let w = Window::interval(0, 4);
        let cs = ConstraintSystem::from_atoms(w, vec![]).unwrap();
        let cert = solve(&cs, Budget::default()).unwrap();
        let wit = cert.witness.as_ref().unwrap();
        assert_eq!(wit.to_ranked().unwrap().permutation(), &[0, 1, 2, 3, 4]);
        assert!(verify_certificate(&cs, &cert));
    }

    #[test]
    fn quadrant_system_is_sat_and_lex_validates() {
        let w = ball(&GeneratorSet::standard(GroupId::Zn(2)), 3, 100).unwrap();
        let cs = build_extension_system(&w, &quadrant_order(2), &[], Convention::default()).unwrap();
        let cert = solve(&cs, Budget::default()).unwrap();
        assert!(cert.is_sat());
        assert!(verify_certificate(&cs, &cert));
        let lex = LinearFunctionalOrder::lex(2).order_on(&w).unwrap();
        assert!(cs.satisfied_by(&lex));
    }

    #[test]
    fn propagate_only_cases() {
        let w = Window::interval(0, 2);
        let one = ConstraintSystem::from_atoms(w.clone(), vec![(0, 1)]).unwrap();
        assert_eq!(propagate_only(&one), Propagation::Inconclusive);
        let tri = ConstraintSystem::from_atoms(w, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        let Propagation::Unsat(cert) = propagate_only(&tri) else { panic!() };
        assert_eq!(cert.cycle, vec![0, 1, 2, 0]);
        assert!(verify_certificate(&tri, &cert));
    }

    #[test]
    fn self_loop_atom() {
        let cs = ConstraintSystem::from_atoms(Window::interval(0, 2), vec![(0, 1), (2, 2)]).unwrap();
        let cert = solve(&cs, Budget::default()).unwrap();
        assert_eq!(cert.cycle, vec![2, 2]);
        assert!(verify_certificate(&cs, &cert));
    }

    #[test]
    fn rejects_bad_certificates() {
        let w = Window::interval(0, 3);
        let cs = ConstraintSystem::from_atoms(w.clone(), vec![(0, 2), (2, 1)]).unwrap();
        let cert = solve(&cs, Budget::default()).unwrap();
        assert!(verify_certificate(&cs, &cert));
        // violate an atom by swapping two adjacent ranks
        let mut bad = cert.clone();
        let wit = bad.witness.as_mut().unwrap();
        wit.flip_bit(0, 2);
        wit.flip_bit(2, 0);
        assert!(!verify_certificate(&cs, &bad));

        let unsat = ConstraintSystem::from_atoms(w, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        let Propagation::Unsat(cert) = propagate_only(&unsat) else { panic!() };
        let mut bad = cert.clone();
        bad.trace[3] = Step { pair: (0, 3), rule: Rule::Transitivity(0, 1, 3) };
        assert!(!verify_certificate(&unsat, &bad));
        let mut bad = cert;
        bad.cycle = vec![0, 1, 0];
        assert!(!verify_certificate(&unsat, &bad));
    }

    #[test]
    fn size_limit_and_timeout() {
        let w = Window::interval(0, 9);
        let cs = ConstraintSystem::from_atoms(w, vec![]).unwrap();
        let tight = Budget { timeout: DEFAULT_TIMEOUT, size_limit: 5 };
        assert!(matches!(solve(&cs, tight), Err(Error::SizeLimitExceeded { limit: 5 })));
        let zero = Budget { timeout: Duration::ZERO, size_limit: 100 };
        assert!(matches!(solve(&cs, zero), Err(Error::Timeout { .. })));
    }

    #[test]
    fn deterministic_certificates() {
        let w = ball(&GeneratorSet::standard(GroupId::Zn(2)), 2, 100).unwrap();
        let cs = build_extension_system(&w, &quadrant_order(2), &[], Convention::default()).unwrap();
        assert_eq!(solve(&cs, Budget::default()).unwrap(), solve(&cs, Budget::default()).unwrap());
    }
}
