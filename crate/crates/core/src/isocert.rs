//! Isomorphism growth with conflict detection, transport of elements between
//! cellular crystals on different reduced words of one Weyl group element,
//! and connectedness certificates on boxes.

use alloc::collections::{BTreeMap, BTreeSet, BinaryHeap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use thiserror::Error;

use crate::cellular::{CellVec, CellularCrystal, CellularError};
use crate::crystal::Crystal;
use crate::subcrystal::{greedy_raise, BInfty, Membership};
use crate::weight::Weight;
use crate::weyl;

/// Default node budget for searches.
pub const DEFAULT_BUDGET: usize = 100_000;

/// Largest box (in elements) a connectedness certificate will allocate.
pub const MAX_BOX: u64 = 1 << 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IsoError {
    #[error("the two words are not reduced words of the same Weyl group element")]
    NotSameElement,
    #[error("path search exhausted its budget of {0} nodes")]
    PathSearchExhausted(usize),
    #[error("isomorphism growth exhausted its budget of {0} pairs")]
    BudgetExhausted(usize),
    #[error("transport conflict: {0}")]
    TransportConflict(TransportConflict),
    #[error("box of {0} elements is too large")]
    BoxTooLarge(u64),
    #[error(transparent)]
    Cellular(#[from] CellularError),
}

/// Which statistic disagreed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stat {
    Wt,
    Eps(usize),
    Phi(usize),
}

/// Evidence that no isomorphism extends the current fragment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Conflict<A, B> {
    StatMismatch { a: A, b: B, stat: Stat },
    /// One side returned null and the other did not.
    NullMismatch { a: A, b: B, i: usize, raise: bool },
    DoubleImage { a: A, b1: B, b2: B },
    DoublePreimage { b: B, a1: A, a2: A },
}

pub type TransportConflict = Conflict<CellVec, CellVec>;

impl core::fmt::Display for Conflict<CellVec, CellVec> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Conflict::StatMismatch { a, b, stat } => write!(f, "{a} and {b} differ in {stat:?}"),
            Conflict::NullMismatch { a, b, i, raise } => {
                let op = if *raise { 'e' } else { 'f' };
                write!(f, "{op}_{i} is null on exactly one of {a}, {b}")
            }
            Conflict::DoubleImage { a, b1, b2 } => write!(f, "{a} maps to both {b1} and {b2}"),
            Conflict::DoublePreimage { b, a1, a2 } => write!(f, "{b} is the image of both {a1} and {a2}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoStatus<A, B> {
    Ok,
    Conflict(Conflict<A, B>),
}

#[derive(Debug, Clone)]
pub struct IsoCertificate<A, B> {
    pub anchor: (A, B),
    /// The explored bijection fragment.
    pub map: BTreeMap<A, B>,
    /// Operator edges compared on both sides.
    pub edges_checked: usize,
    pub status: IsoStatus<A, B>,
}

impl<A, B> IsoCertificate<A, B> {
    pub fn explored(&self) -> usize {
        self.map.len()
    }

    pub fn is_ok(&self) -> bool {
        matches!(self.status, IsoStatus::Ok)
    }
}

fn stat_mismatch<A: Crystal, B: Crystal>(ca: &A, cb: &B, a: &A::Elem, b: &B::Elem) -> Option<Stat> {
    if ca.wt(a) != cb.wt(b) {
        return Some(Stat::Wt);
    }
    for i in 0..ca.datum().rank() {
        if ca.eps(i, a) != cb.eps(i, b) {
            return Some(Stat::Eps(i));
        }
        if ca.phi(i, a) != cb.phi(i, b) {
            return Some(Stat::Phi(i));
        }
    }
    None
}

/// Grows a map from `(a0, b0)` along `f̃_i` and `ẽ_i` in both crystals at
/// once, stopping at the first conflict. Pairs failing `keep` are not
/// entered. `budget` caps the number of mapped pairs.
pub fn grow_isomorphism<A, B, K>(
    ca: &A,
    cb: &B,
    a0: A::Elem,
    b0: B::Elem,
    budget: usize,
    keep: K,
) -> Result<IsoCertificate<A::Elem, B::Elem>, IsoError>
where
    A: Crystal,
    B: Crystal,
    B::Elem: Ord,
    K: Fn(&A::Elem, &B::Elem) -> bool,
{
    let mut cert = IsoCertificate {
        anchor: (a0.clone(), b0.clone()),
        map: BTreeMap::new(),
        edges_checked: 0,
        status: IsoStatus::Ok,
    };
    if let Some(stat) = stat_mismatch(ca, cb, &a0, &b0) {
        cert.status = IsoStatus::Conflict(Conflict::StatMismatch { a: a0, b: b0, stat });
        return Ok(cert);
    }
    let mut inverse: BTreeMap<B::Elem, A::Elem> = BTreeMap::new();
    cert.map.insert(a0.clone(), b0.clone());
    inverse.insert(b0.clone(), a0.clone());
    let mut queue = VecDeque::from([(a0, b0)]);
    let n = ca.datum().rank();
    while let Some((a, b)) = queue.pop_front() {
        for i in 0..n {
            for raise in [false, true] {
                let (na, nb) = if raise {
                    (ca.e(i, &a), cb.e(i, &b))
                } else {
                    (ca.f(i, &a), cb.f(i, &b))
                };
                cert.edges_checked += 1;
                let (na, nb) = match (na, nb) {
                    (None, None) => continue,
                    (Some(na), Some(nb)) => (na, nb),
                    _ => {
                        cert.status = IsoStatus::Conflict(Conflict::NullMismatch {
                            a: a.clone(),
                            b: b.clone(),
                            i,
                            raise,
                        });
                        return Ok(cert);
                    }
                };
                if !keep(&na, &nb) {
                    continue;
                }
                match (cert.map.get(&na), inverse.get(&nb)) {
                    (Some(b1), _) if *b1 != nb => {
                        cert.status = IsoStatus::Conflict(Conflict::DoubleImage {
                            b1: b1.clone(),
                            a: na,
                            b2: nb,
                        });
                        return Ok(cert);
                    }
                    (_, Some(a1)) if *a1 != na => {
                        cert.status = IsoStatus::Conflict(Conflict::DoublePreimage {
                            a1: a1.clone(),
                            b: nb,
                            a2: na,
                        });
                        return Ok(cert);
                    }
                    (Some(_), _) => continue,
                    _ => {}
                }
                if let Some(stat) = stat_mismatch(ca, cb, &na, &nb) {
                    cert.status = IsoStatus::Conflict(Conflict::StatMismatch { a: na, b: nb, stat });
                    return Ok(cert);
                }
                if cert.map.len() >= budget {
                    return Err(IsoError::BudgetExhausted(budget));
                }
                cert.map.insert(na.clone(), nb.clone());
                inverse.insert(nb.clone(), na.clone());
                queue.push_back((na, nb));
            }
        }
    }
    Ok(cert)
}

/// One crystal edge traversal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Step {
    E(usize),
    F(usize),
}

impl Step {
    pub fn apply(self, c: &CellularCrystal, x: &CellVec) -> Option<CellVec> {
        match self {
            Step::E(i) => c.e_op(i, x),
            Step::F(i) => c.f_op(i, x),
        }
    }

    pub fn inverse(self) -> Step {
        match self {
            Step::E(i) => Step::F(i),
            Step::F(i) => Step::E(i),
        }
    }
}

/// Carries elements between `B_u` and `B_v` for two reduced words `u`, `v`
/// of the same element, through the isomorphism anchored at `0 ↦ 0`.
///
/// Every transported element is reached from an already mapped element by
/// a crystal path, and the path is replayed on the other side. All pairs
/// met on the way are cached and checked for injectivity and for equal
/// `wt`, `ε_i`, `φ_i`; any disagreement surfaces as
/// [`IsoError::TransportConflict`].
#[derive(Debug, Clone)]
pub struct Transporter {
    from: CellularCrystal,
    to: CellularCrystal,
    budget: usize,
    identity: bool,
    fwd: BTreeMap<CellVec, CellVec>,
    bwd: BTreeMap<CellVec, CellVec>,
}

impl Transporter {
    pub fn new(from: CellularCrystal, to: CellularCrystal, budget: usize) -> Result<Self, IsoError> {
        if from.datum() != to.datum()
            || from.len() != to.len()
            || !weyl::same_element(from.datum(), from.letters(), to.letters())
        {
            return Err(IsoError::NotSameElement);
        }
        let identity = from.letters() == to.letters();
        let mut t = Transporter {
            from,
            to,
            budget,
            identity,
            fwd: BTreeMap::new(),
            bwd: BTreeMap::new(),
        };
        let (z0, z1) = (t.from.zero(), t.to.zero());
        t.fwd.insert(z0.clone(), z1.clone());
        t.bwd.insert(z1, z0);
        Ok(t)
    }

    pub fn source(&self) -> &CellularCrystal {
        &self.from
    }

    pub fn target(&self) -> &CellularCrystal {
        &self.to
    }

    /// Number of cached pairs.
    pub fn cached(&self) -> usize {
        self.fwd.len()
    }

    pub fn forward(&mut self, x: &CellVec) -> Result<CellVec, IsoError> {
        self.from.check_len(x)?;
        if self.identity {
            return Ok(x.clone());
        }
        if let Some(y) = self.fwd.get(x) {
            return Ok(y.clone());
        }
        self.carry(x, true)
    }

    pub fn backward(&mut self, y: &CellVec) -> Result<CellVec, IsoError> {
        self.to.check_len(y)?;
        if self.identity {
            return Ok(y.clone());
        }
        if let Some(x) = self.bwd.get(y) {
            return Ok(x.clone());
        }
        self.carry(y, false)
    }

    fn carry(&mut self, x: &CellVec, forward: bool) -> Result<CellVec, IsoError> {
        let (src, dst) = if forward { (&self.from, &self.to) } else { (&self.to, &self.from) };
        let known = if forward { &self.fwd } else { &self.bwd };
        let (anchor, steps) = match central_path(src, x, self.budget) {
            Some(steps) => (src.zero(), steps),
            None => search_to_known(src, x, known, self.budget)?,
        };
        // steps lead from x to anchor; walk back from the anchor.
        let mut s = anchor.clone();
        let mut t = known[&anchor].clone();
        let mut pairs = Vec::with_capacity(steps.len());
        for step in steps.iter().rev() {
            let inv = step.inverse();
            s = inv.apply(src, &s).expect("steps come from present letters");
            t = match inv.apply(dst, &t) {
                Some(t) => t,
                None => {
                    let (i, raise) = match inv {
                        Step::E(i) => (i, true),
                        Step::F(i) => (i, false),
                    };
                    return Err(IsoError::TransportConflict(Conflict::NullMismatch { a: s, b: t, i, raise }));
                }
            };
            pairs.push((s.clone(), t.clone()));
        }
        debug_assert_eq!(&s, x);
        for (s, t) in pairs {
            let (a, b) = if forward { (s, t) } else { (t, s) };
            self.insert(a, b)?;
        }
        Ok(if forward { self.fwd[x].clone() } else { self.bwd[x].clone() })
    }

    fn insert(&mut self, a: CellVec, b: CellVec) -> Result<(), IsoError> {
        if let Some(b1) = self.fwd.get(&a) {
            if *b1 != b {
                return Err(IsoError::TransportConflict(Conflict::DoubleImage { a, b1: b1.clone(), b2: b }));
            }
            return Ok(());
        }
        if let Some(a1) = self.bwd.get(&b) {
            return Err(IsoError::TransportConflict(Conflict::DoublePreimage { b, a1: a1.clone(), a2: a }));
        }
        if let Some(stat) = stat_mismatch(&self.from, &self.to, &a, &b) {
            return Err(IsoError::TransportConflict(Conflict::StatMismatch { a, b, stat }));
        }
        self.fwd.insert(a.clone(), b.clone());
        self.bwd.insert(b, a);
        Ok(())
    }
}

/// A path from `x` to `0` through central translates. Translation by
/// `c = CP(C̃_{tρ})` commutes with every `ẽ_i` and `f̃_i`, so if greedy
/// raising takes `x + c` to `0` along `P`, then `P` takes `x` to `−c`, and
/// the reversed greedy path of `c` takes `−c` to `0`. The path is replayed
/// and checked before use; `None` sends the caller to the general search.
fn central_path(c: &CellularCrystal, x: &CellVec, budget: usize) -> Option<Vec<Step>> {
    let n = c.datum().rank();
    let rho = Weight::from_fundamental(&vec![1; n]);
    let unit = c.central_cp(&rho).ok()?;
    let mut shift = c.zero();
    let mut spent = 0usize;
    for _ in 0..=64 {
        let y = x + &shift;
        let up = greedy_raise(c, &y);
        spent += up.path.len();
        if up.member {
            let back = greedy_raise(c, &shift);
            if !back.member {
                return None;
            }
            let mut steps: Vec<Step> = up.path.iter().map(|&i| Step::E(i)).collect();
            steps.extend(back.path.iter().rev().map(|&i| Step::F(i)));
            let end = steps.iter().try_fold(x.clone(), |cur, s| s.apply(c, &cur))?;
            return end.is_zero().then_some(steps);
        }
        if spent > budget {
            return None;
        }
        shift = &shift + &unit;
    }
    None
}

/// Best-first search from `x` along `ẽ_i`/`f̃_i` edges until an element of
/// `known` is reached, ordered by steps taken plus `‖y‖₁` with ties broken
/// on the vector, so the result is deterministic. Returns the element hit
/// and the steps from `x` to it.
fn search_to_known(
    c: &CellularCrystal,
    x: &CellVec,
    known: &BTreeMap<CellVec, CellVec>,
    budget: usize,
) -> Result<(CellVec, Vec<Step>), IsoError> {
    let n = c.datum().rank();
    let present: Vec<usize> = (0..n).filter(|&i| c.contains(i)).collect();
    let mut parent: BTreeMap<CellVec, Option<(CellVec, Step)>> = BTreeMap::new();
    let mut dist: BTreeMap<CellVec, i64> = BTreeMap::new();
    let mut heap = BinaryHeap::new();
    parent.insert(x.clone(), None);
    dist.insert(x.clone(), 0);
    heap.push(Reverse((x.norm1(), 0i64, x.clone())));
    let mut expanded = 0usize;
    while let Some(Reverse((_, g, cur))) = heap.pop() {
        if dist.get(&cur).is_some_and(|&d| d < g) {
            continue;
        }
        if known.contains_key(&cur) {
            let mut steps = Vec::new();
            let mut node = cur.clone();
            while let Some(Some((prev, step))) = parent.get(&node) {
                steps.push(*step);
                node = prev.clone();
            }
            steps.reverse();
            return Ok((cur, steps));
        }
        expanded += 1;
        if expanded > budget {
            return Err(IsoError::PathSearchExhausted(budget));
        }
        for &i in &present {
            for step in [Step::E(i), Step::F(i)] {
                let nb = step.apply(c, &cur).expect("present letter");
                let ng = g + 1;
                if dist.get(&nb).is_none_or(|&d| ng < d) {
                    dist.insert(nb.clone(), ng);
                    parent.insert(nb.clone(), Some((cur.clone(), step)));
                    heap.push(Reverse((ng + nb.norm1(), ng, nb)));
                }
            }
        }
    }
    Err(IsoError::PathSearchExhausted(budget))
}

/// One-shot transport of `x` from `B_from` to `B_to`.
pub fn transport(
    x: &CellVec,
    from: &CellularCrystal,
    to: &CellularCrystal,
    budget: usize,
) -> Result<CellVec, IsoError> {
    Transporter::new(from.clone(), to.clone(), budget)?.forward(x)
}

/// Coverage of the inner box `[−r, r]^ℓ` by the connected component of `0`
/// within the padded box `[−r−p, r+p]^ℓ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectivityReport {
    pub inner_radius: u32,
    pub pad: u32,
    pub inner_total: u64,
    pub reached: u64,
    /// Up to ten unreached inner elements, lexicographically first.
    pub unreached: Vec<CellVec>,
}

impl ConnectivityReport {
    pub fn fraction(&self) -> f64 {
        self.reached as f64 / self.inner_total as f64
    }

    pub fn is_complete(&self) -> bool {
        self.reached == self.inner_total
    }
}

struct BoxIndex {
    radius: i64,
    side: u64,
    len: usize,
}

impl BoxIndex {
    fn new(radius: i64, len: usize) -> Result<Self, IsoError> {
        let side = (2 * radius + 1) as u64;
        let total = (0..len).try_fold(1u64, |acc, _| acc.checked_mul(side));
        match total {
            Some(t) if t <= MAX_BOX => Ok(BoxIndex { radius, side, len }),
            Some(t) => Err(IsoError::BoxTooLarge(t)),
            None => Err(IsoError::BoxTooLarge(u64::MAX)),
        }
    }

    fn total(&self) -> u64 {
        self.side.pow(self.len as u32)
    }

    fn index(&self, x: &[i64]) -> Option<u64> {
        let mut idx = 0u64;
        for &c in x.iter().rev() {
            if c.abs() > self.radius {
                return None;
            }
            idx = idx * self.side + (c + self.radius) as u64;
        }
        Some(idx)
    }

    fn decode(&self, mut idx: u64, out: &mut [i64]) {
        for c in out.iter_mut() {
            *c = (idx % self.side) as i64 - self.radius;
            idx /= self.side;
        }
    }
}

/// Breadth-first search from `0` over `ẽ_i` and `f̃_i` edges kept inside the
/// padded box, then the fraction of the inner box reached.
pub fn connectedness_certificate(crystal: &CellularCrystal, r: u32, p: u32) -> Result<ConnectivityReport, IsoError> {
    let len = crystal.len();
    let outer = BoxIndex::new((r + p) as i64, len)?;
    let total = outer.total();
    let mut visited = vec![0u64; total.div_ceil(64) as usize];
    let mark = |v: &mut [u64], idx: u64| -> bool {
        let (w, b) = ((idx / 64) as usize, idx % 64);
        let fresh = v[w] & (1 << b) == 0;
        v[w] |= 1 << b;
        fresh
    };
    let n = crystal.datum().rank();
    let present: Vec<usize> = (0..n).filter(|&i| crystal.contains(i)).collect();
    let start = outer.index(&vec![0; len]).expect("origin is inside");
    mark(&mut visited, start);
    let mut stack = vec![start];
    let mut buf = CellVec::zero(len);
    while let Some(idx) = stack.pop() {
        outer.decode(idx, &mut buf.0);
        for &i in &present {
            for y in [crystal.e_op(i, &buf), crystal.f_op(i, &buf)].into_iter().flatten() {
                if let Some(j) = outer.index(&y.0) {
                    if mark(&mut visited, j) {
                        stack.push(j);
                    }
                }
            }
        }
    }
    let inner = BoxIndex::new(r as i64, len)?;
    let inner_total = inner.total();
    let mut reached = 0;
    let mut unreached = Vec::new();
    for k in 0..inner_total {
        inner.decode(k, &mut buf.0);
        let idx = outer.index(&buf.0).expect("inner box lies in outer box");
        if visited[(idx / 64) as usize] & (1 << (idx % 64)) != 0 {
            reached += 1;
        } else if unreached.len() < 10 {
            unreached.push(buf.clone());
        }
    }
    unreached.sort();
    Ok(ConnectivityReport {
        inner_radius: r,
        pad: p,
        inner_total,
        reached,
        unreached,
    })
}

/// A decomposition `x = −h_Λ + y` with `y ∈ B(∞)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HShift {
    pub t: u32,
    /// `Λ = t ρ` with `ρ = Σ Λ_i`.
    pub lambda: Weight,
    pub shifted: CellVec,
    pub membership: Membership,
}

/// Searches `Λ = tρ` for `t = 0..=t_max` with `x + h_Λ ∈ B(∞)`. `None` means
/// `t_max` was too small, not that no decomposition exists.
pub fn hshift_certificate(binfty: &BInfty, x: &CellVec, t_max: u32) -> Result<Option<HShift>, CellularError> {
    let host = binfty.host();
    host.check_len(x)?;
    let n = host.datum().rank();
    let rho = Weight::from_fundamental(&vec![1; n]);
    let h_rho = host.h_vector(&rho)?;
    let mut shifted = x.clone();
    for t in 0..=t_max {
        let m = binfty.member(&shifted).expect("length checked");
        if m.member {
            return Ok(Some(HShift {
                t,
                lambda: rho.scale(t as i64),
                shifted,
                membership: m,
            }));
        }
        // h_{tρ} = t h_ρ by linearity of the central coordinates
        shifted = &shifted + &h_rho;
    }
    Ok(None)
}

/// Elements whose images are known, in order; for reporting.
pub fn fragment_domain<A: Ord + Clone, B>(cert: &IsoCertificate<A, B>) -> BTreeSet<A> {
    cert.map.keys().cloned().collect()
}
