use std::collections::{BTreeMap, VecDeque};

use cck_core::crystal::Crystal;
use cck_core::subcrystal::greedy_raise;
use cck_core::weyl::{act, act_root, beta_sequence, braid_neighbors, is_reduced, reflect_root, same_element};
use cck_core::{
    BInfty, CartanDatum, CartanType, CellVec, CellularCrystal, CrystalValue, Element, ElementCrystal, RootVec,
    StarOps, Transporter, Weight,
};
use proptest::prelude::*;

fn finite_types() -> Vec<CartanDatum> {
    [CartanType::A(2), CartanType::B(2), CartanType::G2, CartanType::A(3)]
        .into_iter()
        .map(CartanDatum::builtin)
        .collect()
}

fn datum_strategy() -> impl Strategy<Value = CartanDatum> {
    prop::sample::select(finite_types())
}

fn rho(n: usize) -> Weight {
    Weight::from_fundamental(&vec![1; n])
}

/// Lengths of all Weyl group elements by BFS on the orbit of `ρ`, which is
/// regular, so the orbit is in bijection with the group.
fn orbit_lengths(d: &CartanDatum) -> BTreeMap<Weight, usize> {
    let start = rho(d.rank());
    let mut seen = BTreeMap::from([(start.clone(), 0)]);
    let mut queue = VecDeque::from([start]);
    while let Some(w) = queue.pop_front() {
        let l = seen[&w];
        for i in 0..d.rank() {
            let v = act(d, &[i], &w);
            if !seen.contains_key(&v) {
                seen.insert(v.clone(), l + 1);
                queue.push_back(v);
            }
        }
    }
    seen
}

fn word_strategy() -> impl Strategy<Value = (CartanDatum, Vec<usize>)> {
    datum_strategy().prop_flat_map(|d| {
        let n = d.rank();
        (Just(d), prop::collection::vec(0..n, 0..9))
    })
}

fn reduced_strategy() -> impl Strategy<Value = (CartanDatum, Vec<usize>)> {
    word_strategy().prop_map(|(d, w)| {
        let mut r = Vec::new();
        for i in w {
            r.push(i);
            if !is_reduced(&d, &r) {
                r.pop();
            }
        }
        (d, r)
    })
}

fn cell_strategy() -> impl Strategy<Value = (CellularCrystal, CellVec)> {
    reduced_strategy()
        .prop_filter("nonempty", |(_, w)| !w.is_empty())
        .prop_flat_map(|(d, w)| {
            let l = w.len();
            let c = CellularCrystal::new(d, w).unwrap();
            (Just(c), prop::collection::vec(-4i64..=4, l).prop_map(CellVec))
        })
}

fn b_tensor(n: usize) -> impl Strategy<Value = Vec<(usize, i64)>> {
    prop::collection::vec((0..n, -4i64..=4), 1..6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reduced_matches_orbit_length((d, w) in word_strategy()) {
        let lengths = orbit_lengths(&d);
        let image = act(&d, &w, &rho(d.rank()));
        prop_assert_eq!(is_reduced(&d, &w), lengths[&image] == w.len());
    }

    #[test]
    fn braid_moves_keep_element((d, w) in reduced_strategy()) {
        let lam = rho(d.rank());
        for v in braid_neighbors(&d, &w) {
            prop_assert!(is_reduced(&d, &v));
            prop_assert_eq!(act(&d, &v, &lam), act(&d, &w, &lam));
            prop_assert!(same_element(&d, &v, &w));
        }
    }

    #[test]
    fn beta_sum_is_rho_minus_w_rho((d, w) in reduced_strategy()) {
        let betas = beta_sequence(&d, &w).unwrap();
        let mut sum = RootVec::zero(d.rank());
        for b in &betas {
            prop_assert!(b.is_positive());
            sum = &sum + b;
        }
        let moved = act(&d, &w, &rho(d.rank()));
        let neg: Vec<i64> = moved.rt.iter().map(|c| -c).collect();
        prop_assert_eq!(sum.coeffs, neg);
    }

    #[test]
    fn reflections_preserve_form(
        d in datum_strategy(),
        i in 0usize..3,
        b in prop::collection::vec(-3i64..=3, 3),
        g in prop::collection::vec(-3i64..=3, 3),
    ) {
        let n = d.rank();
        let i = i % n;
        let b = RootVec::new(b[..n].to_vec());
        let g = RootVec::new(g[..n].to_vec());
        let (sb, sg) = (reflect_root(&d, i, &b), reflect_root(&d, i, &g));
        prop_assert_eq!(d.root_form(&sb, &sg), d.root_form(&b, &g));
        prop_assert_eq!(reflect_root(&d, i, &sb), b.clone());
        prop_assert_eq!(act_root(&d, &[i, i], &b), b);
    }

    #[test]
    fn tensor_matches_max_rule(d in datum_strategy(), i in 0usize..3, parts in b_tensor(3)) {
        let n = d.rank();
        let i = i % n;
        let parts: Vec<(usize, i64)> = parts.into_iter().map(|(j, k)| (j % n, k)).collect();
        let ec = ElementCrystal::new(d.clone());
        let t = Element::Tensor(parts.iter().map(|&(j, k)| Element::b(j, k)).collect());
        let mut scores = Vec::new();
        let mut pair = 0i64;
        for &(j, k) in &parts {
            let b = Element::b(j, k);
            if let Some(e) = ec.eps(i, &b).finite() {
                scores.push(Some(e - pair));
            } else {
                scores.push(None);
            }
            pair += d.pairing(i, &ec.wt(&b));
        }
        let best = scores.iter().flatten().max().copied();
        match best {
            None => {
                prop_assert!(ec.eps(i, &t).is_neg_inf());
                prop_assert!(ec.f(i, &t).is_none());
            }
            Some(m) => {
                prop_assert_eq!(ec.eps(i, &t), CrystalValue::Finite(m));
                let last = scores.iter().rposition(|s| *s == Some(m)).unwrap();
                let first = scores.iter().position(|s| *s == Some(m)).unwrap();
                let shifted = |pos: usize, delta: i64| {
                    Element::Tensor(
                        parts
                            .iter()
                            .enumerate()
                            .map(|(p, &(j, k))| Element::b(j, if p == pos { k + delta } else { k }))
                            .collect(),
                    )
                };
                prop_assert_eq!(ec.f(i, &t), Some(shifted(last, -1)));
                prop_assert_eq!(ec.e(i, &t), Some(shifted(first, 1)));
            }
        }
    }

    #[test]
    fn cellular_operators((c, x) in cell_strategy()) {
        let d = c.datum().clone();
        for i in (0..d.rank()).filter(|&i| c.contains(i)) {
            let fx = c.f(i, &x).unwrap();
            let ex = c.e(i, &x).unwrap();
            prop_assert_eq!(c.e(i, &fx), Some(x.clone()));
            prop_assert_eq!(c.f(i, &ex), Some(x.clone()));
            prop_assert_eq!(c.wt(&fx), &c.wt(&x) - &Weight::simple_root(d.rank(), i));
            let (eps, phi) = (c.eps(i, &x).finite().unwrap(), c.phi(i, &x).finite().unwrap());
            prop_assert_eq!(phi, eps + d.pairing(i, &c.wt(&x)));
            prop_assert_eq!(c.eps(i, &fx), CrystalValue::Finite(eps + 1));
            let ecx = ElementCrystal::new(d.clone());
            let el = c.to_element(&x);
            prop_assert_eq!(ecx.eps(i, &el), c.eps(i, &x));
            prop_assert_eq!(ecx.f(i, &el).and_then(|y| c.from_element(&y)), Some(fx));
        }
    }

    #[test]
    fn central_translation_commutes((c, x) in cell_strategy(), lam in prop::collection::vec(-2i64..=2, 3)) {
        let n = c.datum().rank();
        let shift = c.central_cp(&Weight::from_fundamental(&lam[..n])).unwrap();
        let y = &x + &shift;
        for i in (0..n).filter(|&i| c.contains(i)) {
            prop_assert_eq!(c.f(i, &y).unwrap(), &c.f(i, &x).unwrap() + &shift);
            prop_assert_eq!(c.e(i, &y).unwrap(), &c.e(i, &x).unwrap() + &shift);
        }
    }

    #[test]
    fn greedy_certificate_replays((c, x) in cell_strategy()) {
        let m = greedy_raise(&c, &x);
        let mut cur = m.end.clone();
        for &i in m.path.iter().rev() {
            cur = c.f(i, &cur).unwrap();
        }
        prop_assert_eq!(cur, x);
        prop_assert_eq!(m.member, m.end.is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn greedy_agrees_with_closure(x in prop::collection::vec(0i64..=3, 3)) {
        let b = BInfty::for_datum(&CartanDatum::builtin(CartanType::A(2))).unwrap();
        let x = CellVec(x);
        let closure = b.enumerate(x.height());
        prop_assert_eq!(b.is_member(&x), closure.contains(&x));
    }

    #[test]
    fn transport_round_trip(x in prop::collection::vec(-2i64..=2, 4), i in 0usize..2) {
        let d = CartanDatum::builtin(CartanType::B(2));
        let u = CellularCrystal::new(d.clone(), vec![0, 1, 0, 1]).unwrap();
        let v = CellularCrystal::new(d, vec![1, 0, 1, 0]).unwrap();
        let mut t = Transporter::new(u.clone(), v.clone(), 100_000).unwrap();
        let x = CellVec(x);
        let y = t.forward(&x).unwrap();
        prop_assert_eq!(t.backward(&y).unwrap(), x.clone());
        prop_assert_eq!(v.wt(&y), u.wt(&x));
        for j in 0..2 {
            prop_assert_eq!(v.eps(j, &y), u.eps(j, &x));
        }
        let fy = t.forward(&u.f(i, &x).unwrap()).unwrap();
        prop_assert_eq!(Some(fy), v.f(i, &y));
    }

    #[test]
    fn star_operators(x in prop::collection::vec(0i64..=2, 3), j in 0usize..2) {
        let d = CartanDatum::builtin(CartanType::A(2));
        let host = CellularCrystal::new(d, vec![0, 1, 0]).unwrap();
        let b = BInfty::new(host.clone()).unwrap();
        let mut s = StarOps::new(host);
        let x = CellVec(x);
        let fx = s.f_star(j, &x).unwrap();
        prop_assert_eq!(s.e_star(j, &fx).unwrap(), x.clone());
        prop_assert_eq!(s.eps_star(&fx, j).unwrap(), s.eps_star(&x, j).unwrap() + 1);
        if b.is_member(&x) {
            prop_assert!(b.is_member(&fx));
            prop_assert!(s.eps_star(&x, j).unwrap() >= 0);
        }
    }
}
