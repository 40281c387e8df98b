//! The index set `S(m_1,...,m_n)`, its two orderings, retraction, index
//! queues and the transposition functions used to assemble the integrand.
//!
//! Positions are 0-based: `u_s` for `s in 0..n`, and step `r` of a queue
//! runs over `0..K` with step 0 being the first unit increment.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bounds `(m_1,...,m_n)` of an index family.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bounds {
    m: Arc<[u32]>,
}

impl Bounds {
    pub fn new(m: &[u32]) -> Result<Self> {
        if m.is_empty() {
            return Err(Error::InvalidBounds("depth must be at least 1".into()));
        }
        if m.iter().any(|&v| v == 0) {
            return Err(Error::InvalidBounds(format!("every bound must be positive, got {m:?}")));
        }
        Ok(Bounds { m: m.into() })
    }

    /// All-ones bounds of the multiple logarithm of depth `n`.
    pub fn ones(n: usize) -> Result<Self> {
        Bounds::new(&vec![1; n])
    }

    pub fn m(&self) -> &[u32] {
        &self.m
    }

    pub fn depth(&self) -> usize {
        self.m.len()
    }

    pub fn weight(&self) -> usize {
        self.m.iter().map(|&v| v as usize).sum()
    }

    pub fn max_bound(&self) -> u32 {
        self.m.iter().copied().max().unwrap_or(0)
    }

    pub fn is_multilog(&self) -> bool {
        self.m.iter().all(|&v| v == 1)
    }

    pub fn zero(&self) -> MultiIndex {
        MultiIndex { components: vec![0; self.depth()], bounds: self.clone() }
    }

    /// The unique index of highest weight, `1_K = (m_1,...,m_n)`.
    pub fn top(&self) -> MultiIndex {
        MultiIndex { components: self.m.to_vec(), bounds: self.clone() }
    }

    pub fn index(&self, components: &[u32]) -> Result<MultiIndex> {
        MultiIndex::new(self, components)
    }

    /// Every index of the family, in lexicographic order of components.
    pub fn all_indices(&self) -> Vec<MultiIndex> {
        let mut out = vec![];
        let mut cur = vec![0u32; self.depth()];
        loop {
            out.push(MultiIndex { components: cur.clone(), bounds: self.clone() });
            let mut pos = self.depth();
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                if cur[pos] < self.m[pos] {
                    cur[pos] += 1;
                    for c in cur.iter_mut().skip(pos + 1) {
                        *c = 0;
                    }
                    break;
                }
            }
        }
    }
}

impl fmt::Debug for Bounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bounds{:?}", &*self.m)
    }
}

/// Element `(i_1,...,i_n)` of `S(m_1,...,m_n)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    components: Vec<u32>,
    bounds: Bounds,
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.components.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl MultiIndex {
    pub fn new(bounds: &Bounds, components: &[u32]) -> Result<Self> {
        if components.len() != bounds.depth() {
            return Err(Error::BoundsMismatch { left: components.to_vec(), right: bounds.m().to_vec() });
        }
        if let Some(pos) = components.iter().zip(bounds.m()).position(|(c, m)| c > m) {
            return Err(Error::ComponentOutOfRange { index: components.to_vec(), position: pos });
        }
        Ok(MultiIndex { components: components.to_vec(), bounds: bounds.clone() })
    }

    pub fn components(&self) -> &[u32] {
        &self.components
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// `|i| = i_1 + ... + i_n`.
    pub fn weight(&self) -> usize {
        self.components.iter().map(|&c| c as usize).sum()
    }

    /// Number of nonzero components.
    pub fn depth(&self) -> usize {
        self.components.iter().filter(|&&c| c != 0).count()
    }

    /// Positions of the nonzero components, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.components.iter().enumerate().filter(|(_, &c)| c != 0).map(|(k, _)| k).collect()
    }

    fn check_same(&self, other: &MultiIndex) -> Result<()> {
        if self.bounds != other.bounds {
            return Err(Error::BoundsMismatch {
                left: self.bounds.m().to_vec(),
                right: other.bounds.m().to_vec(),
            });
        }
        Ok(())
    }

    /// The complete ordering: weight first, then the components sorted in
    /// descending order (largest first), then left-to-right lexicographic.
    pub fn complete_cmp(&self, other: &MultiIndex) -> Result<Ordering> {
        self.check_same(other)?;
        let by_weight = self.weight().cmp(&other.weight());
        if by_weight != Ordering::Equal {
            return Ok(by_weight);
        }
        let mut a = self.components.clone();
        let mut b = other.components.clone();
        a.sort_unstable_by(|x, y| y.cmp(x));
        b.sort_unstable_by(|x, y| y.cmp(x));
        let by_sorted = a.cmp(&b);
        if by_sorted != Ordering::Equal {
            return Ok(by_sorted);
        }
        Ok(self.components.cmp(&other.components))
    }

    /// `self ≼ other`: every component of `self` is at most that of `other`.
    pub fn partial_leq(&self, other: &MultiIndex) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.components.iter().zip(&other.components).all(|(a, b)| a <= b))
    }

    /// Retraction `ρ_self(j)` into `S(i_{τ_1},...,i_{τ_k})`, where `τ` are the
    /// nonzero positions of `self`.
    pub fn retract(&self, j: &MultiIndex) -> Result<MultiIndex> {
        if !j.partial_leq(self)? {
            return Err(Error::Precondition(format!("{j:?} is not below {self:?}")));
        }
        let support = self.support();
        if support.is_empty() {
            return Err(Error::Precondition("cannot retract onto the zero index".into()));
        }
        let target: Vec<u32> = support.iter().map(|&t| self.components[t]).collect();
        let comps: Vec<u32> = support.iter().map(|&t| j.components[t]).collect();
        MultiIndex::new(&Bounds::new(&target)?, &comps)
    }

    /// `self + u_s`.
    pub fn add_unit(&self, s: usize) -> Result<MultiIndex> {
        if s >= self.len() || self.components[s] >= self.bounds.m()[s] {
            return Err(Error::ComponentOutOfRange { index: self.components.clone(), position: s });
        }
        let mut out = self.clone();
        out.components[s] += 1;
        Ok(out)
    }

    /// `self - u_s`.
    pub fn sub_unit(&self, s: usize) -> Result<MultiIndex> {
        if s >= self.len() || self.components[s] == 0 {
            return Err(Error::ComponentOutOfRange { index: self.components.clone(), position: s });
        }
        let mut out = self.clone();
        out.components[s] -= 1;
        Ok(out)
    }

    /// Reinterpret the components inside `S(m,...,m)` with `m` the largest bound.
    pub fn padded(&self) -> MultiIndex {
        let m = self.bounds.max_bound();
        let padded = Bounds { m: vec![m; self.len()].into() };
        MultiIndex { components: self.components.clone(), bounds: padded }
    }
}

/// `u_s`: the weight-one index with a 1 at position `s`.
pub fn unit(bounds: &Bounds, s: usize) -> Result<MultiIndex> {
    bounds.zero().add_unit(s)
}

/// `v_s = 1_K - m_s u_s`: the top index with component `s` cleared.
pub fn v_index(bounds: &Bounds, s: usize) -> Result<MultiIndex> {
    if s >= bounds.depth() {
        return Err(Error::ComponentOutOfRange { index: bounds.m().to_vec(), position: s });
    }
    let mut top = bounds.top();
    top.components[s] = 0;
    Ok(top)
}

/// Element of `S^K(m_1,...,m_n)`: a maximal chain `j_1 ≺ ... ≺ j_K = 1_K`
/// growing by one unit per step.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IndexQueue {
    entries: Vec<MultiIndex>,
    steps: Vec<usize>,
}

impl fmt::Debug for IndexQueue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.iter()).finish()
    }
}

impl IndexQueue {
    /// Build a queue from the sequence of increment positions.
    pub fn from_steps(bounds: &Bounds, steps: &[usize]) -> Result<Self> {
        if steps.len() != bounds.weight() {
            return Err(Error::Precondition(format!(
                "a queue for {bounds:?} needs {} steps, got {}",
                bounds.weight(),
                steps.len()
            )));
        }
        let mut cur = bounds.zero();
        let mut entries = Vec::with_capacity(steps.len());
        for &s in steps {
            cur = cur.add_unit(s)?;
            entries.push(cur.clone());
        }
        Ok(IndexQueue { entries, steps: steps.to_vec() })
    }

    /// Build a queue from explicit entries, checking every invariant.
    pub fn from_entries(entries: Vec<MultiIndex>) -> Result<Self> {
        let first = entries.first().ok_or_else(|| Error::Precondition("empty queue".into()))?;
        let bounds = first.bounds().clone();
        let mut prev = bounds.zero();
        let mut steps = vec![];
        for e in &entries {
            prev.check_same(e)?;
            let diff: Vec<usize> = (0..e.len())
                .filter(|&t| e.components[t] != prev.components[t])
                .collect();
            if diff.len() != 1 || e.components[diff[0]] != prev.components[diff[0]] + 1 {
                return Err(Error::Precondition(format!("{prev:?} -> {e:?} is not a unit step")));
            }
            steps.push(diff[0]);
            prev = e.clone();
        }
        if prev != bounds.top() {
            return Err(Error::Precondition("queue must end at the top index".into()));
        }
        Ok(IndexQueue { entries, steps })
    }

    pub fn entries(&self) -> &[MultiIndex] {
        &self.entries
    }

    /// Increment position `s` at each step: `j_r = j_{r-1} + u_s`.
    pub fn steps(&self) -> &[usize] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn bounds(&self) -> &Bounds {
        self.entries[0].bounds()
    }

    /// The transposition `T^r_delta` attached to step `r` (0-based, `r >= 1`),
    /// applied to `i`. `T^r_0` is the identity; `T^r_1` swaps position `s`
    /// with the next nonzero position `a` of `j_r`, unless `j_r` has `s`-th
    /// component greater than one or no nonzero component after `s`.
    pub fn transpose(&self, i: &MultiIndex, r: usize, delta: bool) -> Result<MultiIndex> {
        if r == 0 || r >= self.len() {
            return Err(Error::Precondition(format!(
                "transposition step {r} outside 1..{}",
                self.len()
            )));
        }
        if i.len() != self.bounds().depth() {
            return Err(Error::BoundsMismatch { left: i.components.clone(), right: self.bounds().m().to_vec() });
        }
        let mut out = i.padded();
        if !delta {
            return Ok(out);
        }
        if let Some((s, a)) = self.swap_pair(r) {
            out.components.swap(s, a);
        }
        Ok(out)
    }

    /// The pair `(s, a)` exchanged by `T^r_1`, if it is not the identity.
    pub fn swap_pair(&self, r: usize) -> Option<(usize, usize)> {
        let jr = &self.entries[r];
        let s = self.steps[r];
        if jr.components[s] > 1 {
            return None;
        }
        let a = (s + 1..jr.len()).find(|&t| jr.components[t] != 0)?;
        Some((s, a))
    }

    /// The index `j_r` after the transpositions of all later steps have been
    /// applied, `T^{r+1}` first and `T^{K}` last.
    pub fn effective_index(&self, r: usize, deltas: &[bool]) -> Result<MultiIndex> {
        if deltas.len() != self.len() {
            return Err(Error::Precondition(format!(
                "expected {} switches, got {}",
                self.len(),
                deltas.len()
            )));
        }
        let mut idx = self.entries[r].padded();
        for (rho, &d) in deltas.iter().enumerate().skip(r + 1) {
            idx = self.transpose(&idx, rho, d)?;
        }
        Ok(idx)
    }

    /// Position functions of a multiple-logarithm queue: `f^1 = 1` and `f^t`
    /// the 1-based rank of the step-`t` increment among the nonzero
    /// components of `j_t`.
    pub fn position_functions(&self) -> Result<Vec<usize>> {
        if !self.bounds().is_multilog() {
            return Err(Error::Precondition(format!(
                "position functions need all-ones bounds, got {:?}",
                self.bounds()
            )));
        }
        Ok(self
            .entries
            .iter()
            .zip(&self.steps)
            .enumerate()
            .map(|(t, (jt, &s))| if t == 0 { 1 } else { rank_in_support(jt, s) + 1 })
            .collect())
    }
}

/// 0-based rank of position `s` among the nonzero positions of `i`.
pub fn rank_in_support(i: &MultiIndex, s: usize) -> usize {
    i.components[..s].iter().filter(|&&c| c != 0).count()
}

/// `pos(i, i + u_s) = s` (0-based).
pub fn pos(from: &MultiIndex, to: &MultiIndex) -> Result<usize> {
    let diff: Vec<usize> = (0..from.len()).filter(|&t| from.components[t] != to.components[t]).collect();
    match diff.as_slice() {
        [s] if to.components[*s] == from.components[*s] + 1 => Ok(*s),
        _ => Err(Error::Precondition(format!("{from:?} -> {to:?} is not a unit step"))),
    }
}

/// Every queue of `S^K(bounds)`, ordered lexicographically by the sequence of
/// increment positions.
pub fn enumerate_queues(bounds: &Bounds) -> Vec<IndexQueue> {
    fn rec(bounds: &Bounds, used: &mut Vec<u32>, steps: &mut Vec<usize>, out: &mut Vec<IndexQueue>) {
        if steps.len() == bounds.weight() {
            out.push(IndexQueue::from_steps(bounds, steps).expect("valid by construction"));
            return;
        }
        for s in 0..bounds.depth() {
            if used[s] < bounds.m()[s] {
                used[s] += 1;
                steps.push(s);
                rec(bounds, used, steps, out);
                steps.pop();
                used[s] -= 1;
            }
        }
    }
    let mut out = vec![];
    rec(bounds, &mut vec![0; bounds.depth()], &mut vec![], &mut out);
    out
}

/// Serializable form of an index: its components plus the bounds.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct IndexRecord {
    pub bounds: Vec<u32>,
    pub components: Vec<u32>,
}

impl From<&MultiIndex> for IndexRecord {
    fn from(i: &MultiIndex) -> Self {
        IndexRecord { bounds: i.bounds().m().to_vec(), components: i.components().to_vec() }
    }
}
