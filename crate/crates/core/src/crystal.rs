//! Abstract crystals, the elementary crystals `B_i` and `T_λ`, the tensor
//! product rule, and axiom/morphism checkers.
//!
//! The null element `0` adjoined to every crystal is `None` wherever an
//! operator returns `Option`.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Sub};

use crate::cartan::CartanDatum;
use crate::weight::Weight;

/// Value of `ε_i` or `φ_i`: an integer or `−∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CrystalValue {
    NegInf,
    Finite(i64),
}

impl CrystalValue {
    pub fn finite(self) -> Option<i64> {
        match self {
            CrystalValue::Finite(n) => Some(n),
            CrystalValue::NegInf => None,
        }
    }

    pub fn is_neg_inf(self) -> bool {
        self == CrystalValue::NegInf
    }
}

impl Ord for CrystalValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (CrystalValue::NegInf, CrystalValue::NegInf) => Ordering::Equal,
            (CrystalValue::NegInf, _) => Ordering::Less,
            (_, CrystalValue::NegInf) => Ordering::Greater,
            (CrystalValue::Finite(a), CrystalValue::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for CrystalValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add<i64> for CrystalValue {
    type Output = CrystalValue;

    fn add(self, rhs: i64) -> CrystalValue {
        match self {
            CrystalValue::NegInf => CrystalValue::NegInf,
            CrystalValue::Finite(n) => CrystalValue::Finite(n + rhs),
        }
    }
}

impl Sub<i64> for CrystalValue {
    type Output = CrystalValue;

    fn sub(self, rhs: i64) -> CrystalValue {
        self + (-rhs)
    }
}

impl From<i64> for CrystalValue {
    fn from(n: i64) -> Self {
        CrystalValue::Finite(n)
    }
}

impl fmt::Display for CrystalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CrystalValue::NegInf => f.write_str("-inf"),
            CrystalValue::Finite(n) => write!(f, "{n}"),
        }
    }
}

/// A crystal over a Cartan datum. Indices are positions in the datum's
/// index set.
pub trait Crystal {
    type Elem: Clone + Ord + fmt::Debug;

    fn datum(&self) -> &CartanDatum;
    fn wt(&self, b: &Self::Elem) -> Weight;
    fn eps(&self, i: usize, b: &Self::Elem) -> CrystalValue;
    fn phi(&self, i: usize, b: &Self::Elem) -> CrystalValue;
    fn e(&self, i: usize, b: &Self::Elem) -> Option<Self::Elem>;
    fn f(&self, i: usize, b: &Self::Elem) -> Option<Self::Elem>;
}

/// Elements of tensor products of elementary crystals.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    /// `(n)_i ∈ B_i`.
    B { i: usize, n: i64 },
    /// `t_λ ∈ T_λ`.
    T { lam: Weight },
    /// `p_1 ⊗ ⋯ ⊗ p_k`, bracketed from the left. The empty tensor behaves
    /// as `t_0`.
    Tensor(Vec<Element>),
}

impl Element {
    pub fn b(i: usize, n: i64) -> Self {
        Element::B { i, n }
    }

    pub fn t(lam: Weight) -> Self {
        Element::T { lam }
    }
}

/// The crystal structure on [`Element`] given by the elementary crystals
/// and the tensor product rule.
#[derive(Debug, Clone)]
pub struct ElementCrystal {
    datum: CartanDatum,
}

impl ElementCrystal {
    pub fn new(datum: CartanDatum) -> Self {
        ElementCrystal { datum }
    }

    fn stats(&self, i: usize, b: &Element) -> (Weight, CrystalValue, CrystalValue) {
        let wt = self.wt(b);
        (wt, self.eps(i, b), self.phi(i, b))
    }

    /// Prefix statistics of a tensor: `(wt, ε_i, φ_i)` of `p_1 ⊗ ⋯ ⊗ p_k`
    /// for every `k`.
    fn prefixes(&self, i: usize, parts: &[Element]) -> Vec<(Weight, CrystalValue, CrystalValue)> {
        let n = self.datum.rank();
        let mut out = Vec::with_capacity(parts.len() + 1);
        let mut acc = (Weight::zero(n), CrystalValue::NegInf, CrystalValue::NegInf);
        out.push(acc.clone());
        for p in parts {
            let (w2, e2, p2) = self.stats(i, p);
            let (w1, e1, p1) = acc;
            let eps = tensor_eps_value(e1, e2, self.datum.pairing(i, &w1));
            let phi = tensor_phi_value(p1, p2, self.datum.pairing(i, &w2));
            acc = (&w1 + &w2, eps, phi);
            out.push(acc.clone());
        }
        out
    }

    fn tensor_op(&self, i: usize, parts: &[Element], raise: bool) -> Option<Element> {
        if parts.is_empty() {
            return None;
        }
        let pre = self.prefixes(i, parts);
        let mut k = parts.len();
        // Descend: act on the last factor of the length-k prefix, or recurse left.
        let target = loop {
            if k == 1 {
                break 0;
            }
            let left_phi = pre[k - 1].2;
            let right_eps = self.eps(i, &parts[k - 1]);
            let go_left = if raise {
                left_phi >= right_eps
            } else {
                left_phi > right_eps
            };
            if go_left {
                k -= 1;
            } else {
                break k - 1;
            }
        };
        let moved = if raise {
            self.e(i, &parts[target])?
        } else {
            self.f(i, &parts[target])?
        };
        let mut out = parts.to_vec();
        out[target] = moved;
        Some(Element::Tensor(out))
    }
}

/// `ε_i(b₁⊗b₂) = max(ε_i(b₁), ε_i(b₂) − ⟨h_i, wt(b₁)⟩)`.
pub fn tensor_eps_value(eps1: CrystalValue, eps2: CrystalValue, h_wt1: i64) -> CrystalValue {
    eps1.max(eps2 - h_wt1)
}

/// `φ_i(b₁⊗b₂) = max(φ_i(b₂), φ_i(b₁) + ⟨h_i, wt(b₂)⟩)`.
pub fn tensor_phi_value(phi1: CrystalValue, phi2: CrystalValue, h_wt2: i64) -> CrystalValue {
    phi2.max(phi1 + h_wt2)
}

impl Crystal for ElementCrystal {
    type Elem = Element;

    fn datum(&self) -> &CartanDatum {
        &self.datum
    }

    fn wt(&self, b: &Element) -> Weight {
        let n = self.datum.rank();
        match b {
            Element::B { i, n: k } => {
                let mut w = Weight::zero(n);
                w.add_root(*i, *k);
                w
            }
            Element::T { lam } => lam.clone(),
            Element::Tensor(parts) => parts
                .iter()
                .fold(Weight::zero(n), |acc, p| &acc + &self.wt(p)),
        }
    }

    fn eps(&self, i: usize, b: &Element) -> CrystalValue {
        match b {
            Element::B { i: j, n } if *j == i => CrystalValue::Finite(-n),
            Element::B { .. } | Element::T { .. } => CrystalValue::NegInf,
            Element::Tensor(parts) => self.prefixes(i, parts).last().unwrap().1,
        }
    }

    fn phi(&self, i: usize, b: &Element) -> CrystalValue {
        match b {
            Element::B { i: j, n } if *j == i => CrystalValue::Finite(*n),
            Element::B { .. } | Element::T { .. } => CrystalValue::NegInf,
            Element::Tensor(parts) => self.prefixes(i, parts).last().unwrap().2,
        }
    }

    fn e(&self, i: usize, b: &Element) -> Option<Element> {
        match b {
            Element::B { i: j, n } if *j == i => Some(Element::b(i, n + 1)),
            Element::B { .. } | Element::T { .. } => None,
            Element::Tensor(parts) => self.tensor_op(i, parts, true),
        }
    }

    fn f(&self, i: usize, b: &Element) -> Option<Element> {
        match b {
            Element::B { i: j, n } if *j == i => Some(Element::b(i, n - 1)),
            Element::B { .. } | Element::T { .. } => None,
            Element::Tensor(parts) => self.tensor_op(i, parts, false),
        }
    }
}

/// Which crystal axiom failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    /// `φ_i = ε_i + ⟨h_i, wt⟩`.
    PhiEpsWt,
    /// `wt`, `ε_i`, `φ_i` shift by `(+α_i, −1, +1)` under `ẽ_i`.
    RaiseShift,
    /// `wt`, `ε_i`, `φ_i` shift by `(−α_i, +1, −1)` under `f̃_i`.
    LowerShift,
    /// `f̃_i b = b'` iff `b = ẽ_i b'`.
    Inverse,
    /// `φ_i = −∞` forces `ẽ_i b = f̃_i b = 0`.
    NegInfNull,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomViolation<E> {
    pub element: E,
    pub i: usize,
    pub axiom: Axiom,
}

/// Checks the crystal axioms on a finite window of elements. Conditions
/// whose operands leave the window are skipped.
pub fn axiom_check<C: Crystal>(crystal: &C, elements: &[C::Elem]) -> Vec<AxiomViolation<C::Elem>> {
    let set: BTreeSet<&C::Elem> = elements.iter().collect();
    let datum = crystal.datum();
    let mut out = Vec::new();
    let mut flag = |b: &C::Elem, i: usize, axiom: Axiom| {
        out.push(AxiomViolation {
            element: b.clone(),
            i,
            axiom,
        })
    };
    for b in elements {
        let wt = crystal.wt(b);
        for i in 0..datum.rank() {
            let eps = crystal.eps(i, b);
            let phi = crystal.phi(i, b);
            let hw = datum.pairing(i, &wt);
            let consistent = match (eps, phi) {
                (CrystalValue::NegInf, CrystalValue::NegInf) => true,
                (CrystalValue::Finite(e), CrystalValue::Finite(p)) => p == e + hw,
                _ => false,
            };
            if !consistent {
                flag(b, i, Axiom::PhiEpsWt);
            }
            let up = crystal.e(i, b);
            let down = crystal.f(i, b);
            if phi.is_neg_inf() && (up.is_some() || down.is_some()) {
                flag(b, i, Axiom::NegInfNull);
            }
            if let Some(u) = up.as_ref().filter(|u| set.contains(u)) {
                let mut w = wt.clone();
                w.add_root(i, 1);
                if crystal.wt(u) != w || crystal.eps(i, u) != eps - 1 || crystal.phi(i, u) != phi + 1 {
                    flag(b, i, Axiom::RaiseShift);
                }
                if crystal.f(i, u).as_ref() != Some(b) {
                    flag(b, i, Axiom::Inverse);
                }
            }
            if let Some(d) = down.as_ref().filter(|d| set.contains(d)) {
                let mut w = wt.clone();
                w.add_root(i, -1);
                if crystal.wt(d) != w || crystal.eps(i, d) != eps + 1 || crystal.phi(i, d) != phi - 1 {
                    flag(b, i, Axiom::LowerShift);
                }
                if crystal.e(i, d).as_ref() != Some(b) {
                    flag(b, i, Axiom::Inverse);
                }
            }
        }
    }
    out
}

/// Which morphism condition failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MorphismCondition {
    Wt,
    Eps,
    Phi,
    /// `f̃_i b₁ = b₂` with both images defined but `f̃_i ψ(b₁) ≠ ψ(b₂)`.
    FIntertwine,
    /// strict: `f̃_i ψ(b) ≠ ψ(f̃_i b)`.
    StrictF,
    /// strict: `ẽ_i ψ(b) ≠ ψ(ẽ_i b)`.
    StrictE,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismViolation<E> {
    pub element: E,
    pub i: Option<usize>,
    pub condition: MorphismCondition,
}

/// Checks that `map` (with `None` meaning the null element) is a morphism
/// on the given source window. With `strict`, additionally checks that
/// `ẽ_i`, `f̃_i` commute with `map` wherever the operator result lies in the
/// window or is null.
pub fn morphism_check<A, B, M>(
    source: &A,
    elements: &[A::Elem],
    target: &B,
    map: M,
    strict: bool,
) -> Vec<MorphismViolation<A::Elem>>
where
    A: Crystal,
    B: Crystal,
    M: Fn(&A::Elem) -> Option<B::Elem>,
{
    let set: BTreeSet<&A::Elem> = elements.iter().collect();
    let n = source.datum().rank();
    let mut out = Vec::new();
    let mut flag = |b: &A::Elem, i: Option<usize>, condition| {
        out.push(MorphismViolation {
            element: b.clone(),
            i,
            condition,
        })
    };
    for b in elements {
        let image = map(b);
        if let Some(y) = &image {
            if target.wt(y) != source.wt(b) {
                flag(b, None, MorphismCondition::Wt);
            }
            for i in 0..n {
                if target.eps(i, y) != source.eps(i, b) {
                    flag(b, Some(i), MorphismCondition::Eps);
                }
                if target.phi(i, y) != source.phi(i, b) {
                    flag(b, Some(i), MorphismCondition::Phi);
                }
            }
        }
        for i in 0..n {
            let down = source.f(i, b);
            if let (Some(y), Some(d)) = (&image, &down) {
                if set.contains(d) {
                    if let Some(yd) = map(d) {
                        if target.f(i, y).as_ref() != Some(&yd) {
                            flag(b, Some(i), MorphismCondition::FIntertwine);
                        }
                    }
                }
            }
            if !strict {
                continue;
            }
            let up = source.e(i, b);
            let mapped = |r: &Option<A::Elem>| -> Option<Option<B::Elem>> {
                match r {
                    None => Some(None),
                    Some(r) if set.contains(r) => Some(map(r)),
                    Some(_) => None,
                }
            };
            let apply = |op: fn(&B, usize, &B::Elem) -> Option<B::Elem>| {
                image.as_ref().and_then(|y| op(target, i, y))
            };
            if let Some(rhs) = mapped(&down) {
                if apply(B::f) != rhs {
                    flag(b, Some(i), MorphismCondition::StrictF);
                }
            }
            if let Some(rhs) = mapped(&up) {
                if apply(B::e) != rhs {
                    flag(b, Some(i), MorphismCondition::StrictE);
                }
            }
        }
    }
    out
}

/// The elements reachable from `seeds` by `ẽ_i`, `f̃_i` while `keep` holds.
pub fn closure<C: Crystal>(
    crystal: &C,
    seeds: &[C::Elem],
    keep: impl Fn(&C::Elem) -> bool,
    cap: usize,
) -> Option<BTreeSet<C::Elem>> {
    let n = crystal.datum().rank();
    let mut seen: BTreeSet<C::Elem> = seeds.iter().cloned().collect();
    let mut stack: Vec<C::Elem> = seeds.to_vec();
    while let Some(b) = stack.pop() {
        for i in 0..n {
            for nb in [crystal.e(i, &b), crystal.f(i, &b)].into_iter().flatten() {
                if keep(&nb) && !seen.contains(&nb) {
                    if seen.len() >= cap {
                        return None;
                    }
                    seen.insert(nb.clone());
                    stack.push(nb);
                }
            }
        }
    }
    Some(seen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::CartanType;
    use alloc::vec;

    fn crystal(s: &str) -> ElementCrystal {
        ElementCrystal::new(CartanDatum::builtin(s.parse::<CartanType>().unwrap()))
    }

    fn t2(a: Element, b: Element) -> Element {
        Element::Tensor(vec![a, b])
    }

    #[test]
    fn neg_inf_arithmetic() {
        let ni = CrystalValue::NegInf;
        assert_eq!(ni + 5, ni);
        assert_eq!(ni - 5, ni);
        assert_eq!(ni.max(CrystalValue::Finite(-100)), CrystalValue::Finite(-100));
        assert!(ni < CrystalValue::Finite(i64::MIN));
        assert_eq!(CrystalValue::Finite(3) + 2, CrystalValue::Finite(5));
    }

    #[test]
    fn elementary_crystals() {
        let c = crystal("A2");
        let b = Element::b(0, 2);
        assert_eq!(c.wt(&b), Weight { lam: vec![0, 0], rt: vec![2, 0] });
        assert_eq!(c.eps(0, &b), CrystalValue::Finite(-2));
        assert_eq!(c.phi(0, &b), CrystalValue::Finite(2));
        assert_eq!(c.eps(1, &b), CrystalValue::NegInf);
        assert_eq!(c.e(0, &b), Some(Element::b(0, 3)));
        assert_eq!(c.f(0, &b), Some(Element::b(0, 1)));
        assert_eq!(c.e(1, &b), None);
        let t = Element::t(Weight::fundamental(2, 1));
        assert_eq!(c.eps(0, &t), CrystalValue::NegInf);
        assert_eq!(c.f(0, &t), None);
        assert_eq!(c.wt(&t), Weight::fundamental(2, 1));
    }

    #[test]
    fn signature_rule_on_a1() {
        let c = crystal("A1");
        let x = t2(Element::b(0, 0), Element::b(0, 0));
        assert_eq!(c.eps(0, &x), CrystalValue::Finite(0));
        let y = t2(Element::b(0, 0), Element::b(0, -2));
        assert_eq!(c.eps(0, &y), CrystalValue::Finite(2));
        let fx = c.f(0, &x).unwrap();
        assert_eq!(fx, t2(Element::b(0, 0), Element::b(0, -1)));
        assert_eq!(c.e(0, &fx), Some(x));
    }

    #[test]
    fn tensor_with_t_lambda() {
        let c = crystal("A2");
        let b = Element::b(0, 1);
        let t = Element::t(Weight::fundamental(2, 0));
        let x = t2(b.clone(), t.clone());
        assert_eq!(c.eps(0, &x), c.eps(0, &b));
        assert_eq!(c.f(0, &x), Some(t2(Element::b(0, 0), t.clone())));
        assert_eq!(c.f(1, &x), None);
    }

    #[test]
    fn axioms_hold_on_a_box() {
        let c = crystal("A2");
        let mut elems = Vec::new();
        for a in -2..=2 {
            for b in -2..=2 {
                for d in -2..=2 {
                    elems.push(Element::Tensor(vec![
                        Element::b(0, a),
                        Element::b(1, b),
                        Element::b(0, d),
                    ]));
                }
            }
        }
        assert!(axiom_check(&c, &elems).is_empty());
        let single: Vec<Element> = (-3..=3).map(|n| Element::b(0, n)).collect();
        assert!(axiom_check(&c, &single).is_empty());
    }

    struct Corrupt(ElementCrystal);

    impl Crystal for Corrupt {
        type Elem = Element;
        fn datum(&self) -> &CartanDatum {
            self.0.datum()
        }
        fn wt(&self, b: &Element) -> Weight {
            self.0.wt(b)
        }
        fn eps(&self, i: usize, b: &Element) -> CrystalValue {
            if *b == Element::b(0, 0) {
                CrystalValue::Finite(7)
            } else {
                self.0.eps(i, b)
            }
        }
        fn phi(&self, i: usize, b: &Element) -> CrystalValue {
            self.0.phi(i, b)
        }
        fn e(&self, i: usize, b: &Element) -> Option<Element> {
            self.0.e(i, b)
        }
        fn f(&self, i: usize, b: &Element) -> Option<Element> {
            self.0.f(i, b)
        }
    }

    #[test]
    fn corrupted_eps_is_reported() {
        let c = Corrupt(crystal("A1"));
        let elems: Vec<Element> = (-3..=3).map(|n| Element::b(0, n)).collect();
        let v = axiom_check(&c, &elems);
        assert!(v.contains(&AxiomViolation {
            element: Element::b(0, 0),
            i: 0,
            axiom: Axiom::PhiEpsWt
        }));
        assert!(v.iter().any(|x| x.axiom == Axiom::RaiseShift));
    }

    #[test]
    fn morphisms() {
        let c = crystal("A1");
        let elems: Vec<Element> = (-3..=3).map(|n| Element::b(0, n)).collect();
        assert!(morphism_check(&c, &elems, &c, |b| Some(b.clone()), true).is_empty());
        // inclusion of a window is a non-strict morphism
        let window: Vec<Element> = (-1..=1).map(|n| Element::b(0, n)).collect();
        assert!(morphism_check(&c, &window, &c, |b| Some(b.clone()), false).is_empty());
        let shifted = |b: &Element| match b {
            Element::B { i, n } => Some(Element::b(*i, n + 1)),
            _ => None,
        };
        let v = morphism_check(&c, &[Element::b(0, 0)], &c, shifted, false);
        assert!(v.iter().any(|x| x.condition == MorphismCondition::Wt));
    }

    #[test]
    fn closure_of_a_point_in_b_i() {
        let c = crystal("A1");
        let s = closure(&c, &[Element::b(0, 0)], |b| matches!(b, Element::B { n, .. } if n.abs() <= 3), 100)
            .unwrap();
        assert_eq!(s.len(), 7);
        assert!(closure(&c, &[Element::b(0, 0)], |_| true, 50).is_none());
    }
}
