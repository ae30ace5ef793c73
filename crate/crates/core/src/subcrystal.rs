//! `B(∞)` inside a cellular crystal of the longest element, Demazure
//! crystals `B_w(∞)`, star operators by reduced-word transport, and `B(λ)`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use thiserror::Error;

use crate::cartan::CartanDatum;
use crate::cellular::{CellVec, CellularCrystal, CellularError};
use crate::crystal::{Crystal, CrystalValue};
use crate::isocert::{IsoError, Transporter, DEFAULT_BUDGET};
use crate::weight::Weight;
use crate::weyl::{self, WeylError, DEFAULT_WORD_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubcrystalError {
    #[error("host word is not a reduced word of the longest element")]
    WrongMode,
    #[error("element is not in the image of B(infinity)")]
    NotInBInfty,
    #[error("weight is not dominant")]
    NotDominant,
    #[error("enumeration exceeded {0} elements")]
    CapExceeded(usize),
    #[error("no reduced word of w ends in index {0}; star operators unavailable")]
    StarNotAvailable(usize),
    #[error("target word does not end in index {0}")]
    BadTargetWord(usize),
    #[error(transparent)]
    Iso(#[from] IsoError),
    #[error(transparent)]
    Cellular(#[from] CellularError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
}

/// Outcome of greedy raising.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    /// The `ẽ_i` applied, in order. For members, applying the reversed
    /// sequence of `f̃_i` to `0` regenerates the input.
    pub path: Vec<usize>,
    /// Where raising stopped.
    pub end: CellVec,
}

/// Greedy raising with smallest-index-first choice: apply `ẽ_i` while some
/// `ε_i > 0`. Accepts iff the zero vector is reached. Without a longest-word
/// host this only decides membership in the `f̃`-closure of `0` under the
/// greedy strategy.
pub fn greedy_raise(crystal: &CellularCrystal, x: &CellVec) -> Membership {
    let n = crystal.datum().rank();
    let present: Vec<usize> = (0..n).filter(|&i| crystal.contains(i)).collect();
    let mut path = Vec::new();
    let mut cur = x.clone();
    loop {
        if cur.is_zero() {
            return Membership { member: true, path, end: cur };
        }
        let wt = crystal.weight(&cur);
        if cur.height() < 0 || wt.rt.iter().any(|&c| c > 0) {
            return Membership { member: false, path, end: cur };
        }
        let next = present
            .iter()
            .copied()
            .find(|&i| crystal.eps(i, &cur) > CrystalValue::Finite(0));
        match next {
            Some(i) => {
                cur = crystal.e_op(i, &cur).expect("present index");
                path.push(i);
            }
            None => return Membership { member: false, path, end: cur },
        }
    }
}

/// `ẽ_i^max`: `ẽ_i` applied `ε_i(x)` times when `ε_i(x) > 0`, otherwise the
/// identity.
pub fn raise_max(crystal: &CellularCrystal, i: usize, x: &CellVec) -> CellVec {
    match crystal.eps(i, x) {
        CrystalValue::Finite(k) if k > 0 => crystal.f_pow(i, x, -k).expect("present index"),
        _ => x.clone(),
    }
}

/// `B(∞)` realized as the `f̃`-closure of `0` in `B_{w₀}`.
#[derive(Debug, Clone)]
pub struct BInfty {
    host: CellularCrystal,
}

impl BInfty {
    /// Fails with [`SubcrystalError::WrongMode`] unless the host word is a
    /// reduced word of the longest element.
    pub fn new(host: CellularCrystal) -> Result<Self, SubcrystalError> {
        let datum = host.datum();
        let longest = (0..datum.rank()).all(|j| weyl::has_right_descent(datum, host.letters(), j));
        if !longest {
            return Err(SubcrystalError::WrongMode);
        }
        Ok(BInfty { host })
    }

    /// Host on the greedy longest word of a finite-type datum.
    pub fn for_datum(datum: &CartanDatum) -> Result<Self, SubcrystalError> {
        let word = weyl::longest_word(datum, 4096).map_err(|_| SubcrystalError::WrongMode)?;
        Self::new(CellularCrystal::new(datum.clone(), word)?)
    }

    pub fn host(&self) -> &CellularCrystal {
        &self.host
    }

    pub fn member(&self, x: &CellVec) -> Result<Membership, SubcrystalError> {
        self.host.check_len(x)?;
        Ok(greedy_raise(&self.host, x))
    }

    pub fn is_member(&self, x: &CellVec) -> bool {
        self.member(x).map(|m| m.member).unwrap_or(false)
    }

    /// `x ∈ B_w(∞)` for a reduced word `uw = (i_1, …, i_ℓ)`, tested by
    /// `ẽ_{i_ℓ}^max ⋯ ẽ_{i_1}^max x = 0` (`ẽ_{i_1}^max` applied first).
    pub fn demazure_member(&self, x: &CellVec, uw: &[usize]) -> Result<bool, SubcrystalError> {
        weyl::beta_sequence(self.host.datum(), uw)?;
        if !self.member(x)?.member {
            return Err(SubcrystalError::NotInBInfty);
        }
        let end = uw.iter().fold(x.clone(), |acc, &i| raise_max(&self.host, i, &acc));
        Ok(end.is_zero())
    }

    /// `B_w(∞)` truncated at height `bound`, built as
    /// `B_w = ⋃_k f̃_{i_1}^k B_{s_{i_1} w}` by peeling the first letter.
    pub fn demazure_enumerate(&self, uw: &[usize], bound: i64) -> Result<BTreeSet<CellVec>, SubcrystalError> {
        weyl::beta_sequence(self.host.datum(), uw)?;
        let mut set = BTreeSet::from([self.host.zero()]);
        for &i in uw.iter().rev() {
            let mut grown = BTreeSet::new();
            for x in &set {
                let mut y = x.clone();
                while y.height() <= bound {
                    grown.insert(y.clone());
                    y = self.host.f_op(i, &y).expect("letter of a w0 word");
                }
            }
            set = grown;
        }
        Ok(set)
    }

    /// `B(∞)` up to height `bound`.
    pub fn enumerate(&self, bound: i64) -> BTreeSet<CellVec> {
        self.demazure_enumerate(self.host.letters(), bound)
            .expect("host word is reduced")
    }
}

/// `ε*_j`, `ẽ*_j`, `f̃*_j` on a cellular crystal, computed by transporting to
/// a reduced word ending in `j` and reading or moving the last coordinate.
#[derive(Debug, Clone)]
pub struct StarOps {
    host: CellularCrystal,
    budget: usize,
    targets: BTreeMap<usize, Vec<usize>>,
    transporters: BTreeMap<Vec<usize>, Transporter>,
}

impl StarOps {
    pub fn new(host: CellularCrystal) -> Self {
        Self::with_budget(host, DEFAULT_BUDGET)
    }

    pub fn with_budget(host: CellularCrystal, budget: usize) -> Self {
        StarOps {
            host,
            budget,
            targets: BTreeMap::new(),
            transporters: BTreeMap::new(),
        }
    }

    pub fn host(&self) -> &CellularCrystal {
        &self.host
    }

    /// The reduced word ending in `j` used for `j`-star operators.
    pub fn target_word(&mut self, j: usize) -> Result<Vec<usize>, SubcrystalError> {
        if let Some(w) = self.targets.get(&j) {
            return Ok(w.clone());
        }
        let w = match weyl::word_ending_in(self.host.datum(), self.host.letters(), j, DEFAULT_WORD_CAP) {
            Ok(w) => w,
            Err(WeylError::NoSuchWord(_)) | Err(WeylError::IndexOutOfRange(_)) => {
                return Err(SubcrystalError::StarNotAvailable(j))
            }
            Err(e) => return Err(e.into()),
        };
        self.targets.insert(j, w.clone());
        Ok(w)
    }

    fn transporter(&mut self, target: &[usize]) -> Result<&mut Transporter, SubcrystalError> {
        if !self.transporters.contains_key(target) {
            let to = CellularCrystal::new(self.host.datum().clone(), target.to_vec())?;
            let t = Transporter::new(self.host.clone(), to, self.budget)?;
            self.transporters.insert(target.to_vec(), t);
        }
        Ok(self.transporters.get_mut(target).expect("inserted above"))
    }

    fn checked_target(&mut self, j: usize, target: &[usize]) -> Result<(), SubcrystalError> {
        if target.last() != Some(&j) {
            return Err(SubcrystalError::BadTargetWord(j));
        }
        self.target_word(j).map(|_| ())
    }

    /// `ε*_j(x)` through the default target word.
    pub fn eps_star(&mut self, x: &CellVec, j: usize) -> Result<i64, SubcrystalError> {
        let target = self.target_word(j)?;
        self.eps_star_via(x, j, &target)
    }

    /// `ε*_j(x)` through an explicit reduced word of `w` ending in `j`.
    pub fn eps_star_via(&mut self, x: &CellVec, j: usize, target: &[usize]) -> Result<i64, SubcrystalError> {
        self.host.check_len(x)?;
        self.checked_target(j, target)?;
        let y = self.transporter(target)?.forward(x)?;
        Ok(y.last().expect("nonempty word"))
    }

    /// Moves the last coordinate on the target word by `delta` (or to zero
    /// when `delta` is `None` and it is positive) and transports back.
    fn move_last(&mut self, j: usize, x: &CellVec, delta: Option<i64>) -> Result<CellVec, SubcrystalError> {
        self.host.check_len(x)?;
        let target = self.target_word(j)?;
        let t = self.transporter(&target)?;
        let mut y = t.forward(x)?;
        let last = y.0.len() - 1;
        match delta {
            Some(d) => y.0[last] += d,
            None if y.0[last] > 0 => y.0[last] = 0,
            None => return Ok(x.clone()),
        }
        Ok(t.backward(&y)?)
    }

    pub fn f_star(&mut self, j: usize, x: &CellVec) -> Result<CellVec, SubcrystalError> {
        self.move_last(j, x, Some(1))
    }

    pub fn e_star(&mut self, j: usize, x: &CellVec) -> Result<CellVec, SubcrystalError> {
        self.move_last(j, x, Some(-1))
    }

    /// `ẽ*_j^max`.
    pub fn e_star_max(&mut self, j: usize, x: &CellVec) -> Result<CellVec, SubcrystalError> {
        self.move_last(j, x, None)
    }

    /// `x ∈ B_w(∞)` tested by `ẽ*_{i_1}^max ⋯ ẽ*_{i_ℓ}^max x = 0`
    /// (`ẽ*_{i_ℓ}^max` applied first).
    pub fn demazure_member_star(&mut self, x: &CellVec, uw: &[usize]) -> Result<bool, SubcrystalError> {
        weyl::beta_sequence(self.host.datum(), uw)?;
        let mut cur = x.clone();
        for &j in uw.iter().rev() {
            cur = self.e_star_max(j, &cur)?;
        }
        Ok(cur.is_zero())
    }
}

/// `B(λ)` inside `B(∞) ⊗ T_λ`, elements stored by their `B(∞)` part.
/// `f̃_i` survives only while `φ_i(b ⊗ t_λ) > 0`; `ẽ_i` is the induced
/// operator of `B(∞)`.
#[derive(Debug, Clone)]
pub struct BLambda {
    binfty: BInfty,
    lambda: Weight,
}

impl BLambda {
    pub fn new(binfty: BInfty, lambda: Weight) -> Result<Self, SubcrystalError> {
        let d = binfty.host().datum();
        if (0..d.rank()).any(|i| d.pairing(i, &lambda) < 0) {
            return Err(SubcrystalError::NotDominant);
        }
        Ok(BLambda { binfty, lambda })
    }

    pub fn lambda(&self) -> &Weight {
        &self.lambda
    }

    pub fn highest(&self) -> CellVec {
        self.binfty.host().zero()
    }

    /// Breadth-first closure of `u_∞ ⊗ t_λ` under the surviving `f̃_i`.
    pub fn enumerate(&self, cap: usize) -> Result<BTreeSet<CellVec>, SubcrystalError> {
        let n = self.datum().rank();
        let mut seen = BTreeSet::from([self.highest()]);
        let mut layer = alloc::vec![self.highest()];
        while !layer.is_empty() {
            let mut next = Vec::new();
            for b in &layer {
                for i in 0..n {
                    if let Some(c) = self.f(i, b) {
                        if seen.insert(c.clone()) {
                            if seen.len() > cap {
                                return Err(SubcrystalError::CapExceeded(cap));
                            }
                            next.push(c);
                        }
                    }
                }
            }
            layer = next;
        }
        Ok(seen)
    }
}

impl Crystal for BLambda {
    type Elem = CellVec;

    fn datum(&self) -> &CartanDatum {
        self.binfty.host().datum()
    }

    fn wt(&self, b: &CellVec) -> Weight {
        &self.binfty.host().weight(b) + &self.lambda
    }

    fn eps(&self, i: usize, b: &CellVec) -> CrystalValue {
        self.binfty.host().eps(i, b)
    }

    fn phi(&self, i: usize, b: &CellVec) -> CrystalValue {
        self.eps(i, b) + self.datum().pairing(i, &self.wt(b))
    }

    fn e(&self, i: usize, b: &CellVec) -> Option<CellVec> {
        if self.eps(i, b) > CrystalValue::Finite(0) {
            self.binfty.host().e_op(i, b)
        } else {
            None
        }
    }

    fn f(&self, i: usize, b: &CellVec) -> Option<CellVec> {
        if self.phi(i, b) > CrystalValue::Finite(0) {
            self.binfty.host().f_op(i, b)
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::CartanType;
    use crate::crystal::axiom_check;
    use alloc::vec;

    fn datum(s: &str) -> CartanDatum {
        CartanDatum::builtin(s.parse::<CartanType>().unwrap())
    }

    fn a2() -> BInfty {
        BInfty::new(CellularCrystal::new(datum("A2"), vec![0, 1, 0]).unwrap()).unwrap()
    }

    fn v(c: &[i64]) -> CellVec {
        CellVec(c.to_vec())
    }

    #[test]
    fn mode_is_checked() {
        let c = CellularCrystal::new(datum("A2"), vec![0, 1]).unwrap();
        assert!(matches!(BInfty::new(c), Err(SubcrystalError::WrongMode)));
        assert!(matches!(BInfty::for_datum(&datum("A1^(1)")), Err(SubcrystalError::WrongMode)));
    }

    #[test]
    fn binfty_examples() {
        let b = a2();
        let m = b.member(&b.host().zero()).unwrap();
        assert!(m.member && m.path.is_empty());
        let m = b.member(&v(&[0, 1, 0])).unwrap();
        assert!(m.member);
        assert_eq!(m.path, vec![1]);
        let m = b.member(&v(&[1, 0, 0])).unwrap();
        assert!(!m.member);
        assert_eq!(m.end, v(&[0, 0, -1]));
    }

    #[test]
    fn demazure_examples() {
        let b = a2();
        assert!(b.demazure_member(&v(&[1, 1, 0]), &[0, 1]).unwrap());
        assert!(!b.demazure_member(&v(&[0, 1, 1]), &[0, 1]).unwrap());
        assert!(b.demazure_member(&b.host().zero(), &[1]).unwrap());
        assert_eq!(
            b.demazure_member(&v(&[1, 0, 0]), &[0]),
            Err(SubcrystalError::NotInBInfty)
        );
        let e = b.demazure_enumerate(&[0, 1], 2).unwrap();
        assert_eq!(e.len(), 6);
        let s = b.demazure_enumerate(&[1], 3).unwrap();
        assert_eq!(s.len(), 4);
    }

    #[test]
    fn star_examples() {
        let mut s = StarOps::new(a2().host().clone());
        assert_eq!(s.eps_star(&v(&[1, 1, 0]), 0).unwrap(), 0);
        assert_eq!(s.eps_star(&v(&[0, 1, 1]), 0).unwrap(), 1);
        assert_eq!(s.eps_star(&v(&[0, 1, 1]), 1).unwrap(), 0);
        let x = v(&[2, -1, 3]);
        let y = s.f_star(1, &x).unwrap();
        assert_eq!(s.e_star(1, &y).unwrap(), x);
        let mut t = StarOps::new(CellularCrystal::new(datum("A2"), vec![0, 1]).unwrap());
        assert_eq!(t.eps_star(&v(&[0, 0]), 0), Err(SubcrystalError::StarNotAvailable(0)));
        assert_eq!(t.eps_star_via(&v(&[0, 0]), 1, &[1, 0]), Err(SubcrystalError::BadTargetWord(1)));
    }

    #[test]
    fn blambda_small_sizes() {
        let b = a2();
        let zero = BLambda::new(b.clone(), Weight::zero(2)).unwrap();
        assert_eq!(zero.enumerate(100).unwrap().len(), 1);
        let l1 = BLambda::new(b.clone(), Weight::fundamental(2, 0)).unwrap();
        let elems: Vec<CellVec> = l1.enumerate(100).unwrap().into_iter().collect();
        assert_eq!(elems.len(), 3);
        assert!(axiom_check(&l1, &elems).is_empty());
        let adj = BLambda::new(b.clone(), Weight::from_fundamental(&[1, 1])).unwrap();
        assert_eq!(adj.enumerate(100).unwrap().len(), 8);
        assert!(matches!(adj.enumerate(5), Err(SubcrystalError::CapExceeded(5))));
        assert!(matches!(
            BLambda::new(b, Weight::from_fundamental(&[-1, 0])),
            Err(SubcrystalError::NotDominant)
        ));
    }
}
