//! Bundled verification suites. Each suite runs a family of exact checks and
//! records failures with concrete witnesses.

use std::collections::BTreeSet;

use cck_core::crystal::{self, Crystal, CrystalValue, Element, ElementCrystal};
use cck_core::isocert::{self, grow_isomorphism, IsoError, IsoStatus};
use cck_core::subcrystal::{BInfty, BLambda, StarOps, SubcrystalError};
use cck_core::{weyl, CartanDatum, CartanType, CellVec, CellularCrystal, RootVec, Transporter, Weight};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::format::{word_labels, CartanJson};
use crate::graph::box_elements;

/// Witnesses kept per report; the failure count is always exact.
pub const MAX_WITNESSES: usize = 20;

pub const SUITES: &[&str] = &[
    "a3-example",
    "fC",
    "demazure",
    "main-theorem",
    "connectedness",
    "cluster-regions",
    "cartan",
    "crystal",
    "cellular",
    "subcrystal",
    "isocert",
    "all",
];

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("unknown suite {0:?}; available: {list}", list = SUITES.join(", "))]
    Unknown(String),
    #[error("suite {suite}: {detail}")]
    Config { suite: String, detail: String },
    #[error("suite {suite}: search budget exhausted: {detail}")]
    Budget { suite: String, detail: String },
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct TargetJson {
    pub cartan: CartanJson,
    pub word: Vec<String>,
}

impl TargetJson {
    fn of(c: &CellularCrystal) -> Self {
        TargetJson {
            cartan: CartanJson::from_datum(c.datum()),
            word: word_labels(c.datum(), c.letters()),
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Witness {
    pub case: String,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub targets: Vec<TargetJson>,
    pub cases: u64,
    pub failed: u64,
    pub failures: Vec<Witness>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

/// Knobs shared by the suites. `target` replaces a suite's default crystals
/// where that makes sense.
#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub target: Option<CellularCrystal>,
    pub seed: u64,
    pub samples: usize,
    pub budget: usize,
    pub radius: u32,
    pub pad: u32,
    pub height: i64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            target: None,
            seed: 0,
            samples: 1000,
            budget: isocert::DEFAULT_BUDGET,
            radius: 2,
            pad: 4,
            height: 4,
        }
    }
}

struct Recorder {
    suite: String,
    targets: Vec<TargetJson>,
    cases: u64,
    failed: u64,
    failures: Vec<Witness>,
}

impl Recorder {
    fn new(suite: &str) -> Self {
        Recorder {
            suite: suite.to_string(),
            targets: Vec::new(),
            cases: 0,
            failed: 0,
            failures: Vec::new(),
        }
    }

    fn target(&mut self, c: &CellularCrystal) {
        let t = TargetJson::of(c);
        if !self.targets.contains(&t) {
            self.targets.push(t);
        }
    }

    fn check(&mut self, ok: bool, case: impl FnOnce() -> String, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < MAX_WITNESSES {
                self.failures.push(Witness {
                    case: case(),
                    detail: detail(),
                });
            }
        }
    }

    fn config(&self, detail: impl ToString) -> SuiteError {
        SuiteError::Config {
            suite: self.suite.clone(),
            detail: detail.to_string(),
        }
    }

    fn budget(&self, detail: impl ToString) -> SuiteError {
        SuiteError::Budget {
            suite: self.suite.clone(),
            detail: detail.to_string(),
        }
    }

    fn sub_error(&self, e: SubcrystalError) -> SuiteError {
        match e {
            SubcrystalError::Iso(IsoError::PathSearchExhausted(_) | IsoError::BudgetExhausted(_))
            | SubcrystalError::CapExceeded(_) => self.budget(e),
            e => self.config(e),
        }
    }

    fn finish(self, seed: u64) -> SuiteReport {
        SuiteReport {
            suite: self.suite,
            seed,
            targets: self.targets,
            cases: self.cases,
            failed: self.failed,
            failures: self.failures,
        }
    }
}

pub fn run(name: &str, opts: &SuiteOptions) -> Result<Vec<SuiteReport>, SuiteError> {
    if name == "all" {
        let mut out = Vec::new();
        for s in SUITES.iter().filter(|s| **s != "all") {
            out.extend(run(s, opts)?);
        }
        return Ok(out);
    }
    let mut rec = Recorder::new(name);
    match name {
        "a3-example" => a3_example(&mut rec),
        "fC" => fc(&mut rec, opts),
        "demazure" => demazure(&mut rec, opts)?,
        "main-theorem" => main_theorem(&mut rec, opts),
        "connectedness" => connectedness(&mut rec, opts)?,
        "cluster-regions" => cluster_regions(&mut rec, opts),
        "cartan" => cartan(&mut rec, opts),
        "crystal" => crystal_suite(&mut rec, opts),
        "cellular" => cellular(&mut rec, opts),
        "subcrystal" => subcrystal(&mut rec, opts)?,
        "isocert" => isocert_suite(&mut rec, opts)?,
        _ => return Err(SuiteError::Unknown(name.to_string())),
    }
    Ok(vec![rec.finish(opts.seed)])
}

fn builtin(ty: &str) -> CartanDatum {
    CartanDatum::builtin(ty.parse::<CartanType>().expect("built-in type name"))
}

fn cell(ty: &str, word: &[usize]) -> CellularCrystal {
    CellularCrystal::new(builtin(ty), word.to_vec()).expect("reduced built-in word")
}

/// The four crystals used by the sampled and exhaustive checks.
pub fn standard_crystals() -> Vec<CellularCrystal> {
    vec![
        cell("A2", &[0, 1, 0]),
        cell("A3", &[0, 1, 2, 1, 0]),
        cell("G2", &[0, 1, 0, 1, 0, 1]),
        cell("A1^(1)", &[0, 1, 0, 1]),
    ]
}

fn targets_or(opts: &SuiteOptions, default: Vec<CellularCrystal>) -> Vec<CellularCrystal> {
    match &opts.target {
        Some(c) => vec![c.clone()],
        None => default,
    }
}

fn present(c: &CellularCrystal) -> Vec<usize> {
    (0..c.datum().rank()).filter(|&i| c.contains(i)).collect()
}

fn random_vec(rng: &mut ChaCha8Rng, len: usize, r: i64) -> CellVec {
    CellVec((0..len).map(|_| rng.gen_range(-r..=r)).collect())
}

fn random_weight(rng: &mut ChaCha8Rng, n: usize) -> Weight {
    Weight {
        lam: (0..n).map(|_| rng.gen_range(-3..=3)).collect(),
        rt: (0..n).map(|_| rng.gen_range(-2..=2)).collect(),
    }
}

fn rng_for(opts: &SuiteOptions, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(opts.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn a3_example(rec: &mut Recorder) {
    let c = cell("A3", &[0, 1, 2, 1, 0]);
    rec.target(&c);
    // f̃ sequences written left to right as operators, so the last is applied first
    let cases: [(&[usize], [i64; 5]); 3] = [
        (&[2, 1, 0], [0, 0, 1, 1, 1]),
        (&[0, 2, 1], [1, 0, 1, 1, 0]),
        (&[0, 1, 2], [1, 1, 1, 0, 0]),
    ];
    for (ops, expected) in cases {
        let got = ops
            .iter()
            .rev()
            .try_fold(c.zero(), |x, &i| c.f_op(i, &x));
        let expected = CellVec(expected.to_vec());
        rec.check(
            got.as_ref() == Some(&expected),
            || {
                let name: String = ops.iter().map(|&i| format!("f{}", i + 1)).collect();
                format!("{name}·0")
            },
            || format!("got {got:?}, expected {expected}"),
        );
    }
}

fn fc(rec: &mut Recorder, opts: &SuiteOptions) {
    for (t, c) in targets_or(opts, standard_crystals()).into_iter().enumerate() {
        rec.target(&c);
        let mut rng = rng_for(opts, 1 + t as u64);
        let idx = present(&c);
        let n = c.datum().rank();
        for _ in 0..opts.samples {
            let lambda = random_weight(&mut rng, n);
            let b = random_vec(&mut rng, c.len(), 5);
            let i = *idx.choose(&mut rng).expect("nonempty word");
            let report = c.check_fc(&lambda, &b, i);
            rec.check(
                report.as_ref().is_ok_and(|r| r.passed()),
                || format!("lambda={lambda:?} b={b} i={}", c.datum().label(i)),
                || format!("{report:?}"),
            );
        }
    }
}

/// All reduced words of length at most `max_len`, including the empty word.
pub fn reduced_words_up_to(d: &CartanDatum, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for i in 0..d.rank() {
                let mut v: Vec<usize> = w.clone();
                v.push(i);
                if weyl::is_reduced(d, &v) {
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// A reduced word of `s_i w` given one of `w`.
pub fn left_multiply(d: &CartanDatum, i: usize, uw: &[usize]) -> Vec<usize> {
    let mut up = vec![i];
    up.extend_from_slice(uw);
    if weyl::is_reduced(d, &up) {
        return up;
    }
    let rev: Vec<usize> = uw.iter().rev().copied().collect();
    let ending = weyl::word_ending_in(d, &rev, i, weyl::DEFAULT_WORD_CAP).expect("s_i w < w");
    ending.iter().rev().skip(1).copied().collect()
}

fn w0_hosts(opts: &SuiteOptions) -> Result<Vec<BInfty>, SubcrystalError> {
    match &opts.target {
        Some(c) => Ok(vec![BInfty::new(c.clone())?]),
        None => ["A2", "A3", "B2"]
            .iter()
            .map(|t| BInfty::for_datum(&builtin(t)))
            .collect(),
    }
}

fn demazure(rec: &mut Recorder, opts: &SuiteOptions) -> Result<(), SuiteError> {
    let hosts = w0_hosts(opts).map_err(|e| rec.config(e))?;
    let h = opts.height;
    for b in hosts {
        rec.target(b.host());
        let d = b.host().datum().clone();
        let all = b.enumerate(h);
        let mut star = StarOps::with_budget(b.host().clone(), opts.budget);
        let words = reduced_words_up_to(&d, 3);
        let mut by_word = std::collections::BTreeMap::new();
        for uw in &words {
            let rec_set = b.demazure_enumerate(uw, h).map_err(|e| rec.config(e))?;
            let mut peel = BTreeSet::new();
            let mut starred = BTreeSet::new();
            for x in &all {
                if b.demazure_member(x, uw).map_err(|e| rec.config(e))? {
                    peel.insert(x.clone());
                }
                if star.demazure_member_star(x, uw).map_err(|e| rec.sub_error(e))? {
                    starred.insert(x.clone());
                }
            }
            let label = word_labels(&d, uw).join(",");
            rec.check(
                rec_set == peel && peel == starred,
                || format!("uw=({label})"),
                || {
                    format!(
                        "enumerated {} / peeling {} / star peeling {}",
                        rec_set.len(),
                        peel.len(),
                        starred.len()
                    )
                },
            );
            by_word.insert(uw.clone(), rec_set);
        }
        for uw in &words {
            let set = &by_word[uw];
            for i in 0..d.rank() {
                // ẽ_i keeps B_w(∞) inside itself, and inside B_{s_i w}(∞) once s_i w > w
                let up = left_multiply(&d, i, uw);
                let raised: Vec<CellVec> = set
                    .iter()
                    .filter(|x| b.host().eps(i, x) > CrystalValue::Finite(0))
                    .map(|x| b.host().e_op(i, x).expect("present letter"))
                    .collect();
                let escaped = raised.iter().find(|y| !set.contains(*y));
                rec.check(
                    escaped.is_none(),
                    || format!("e{} B_w stays in B_w, uw=({})", d.label(i), word_labels(&d, uw).join(",")),
                    || format!("{:?} escapes", escaped),
                );
                if up.len() > uw.len() {
                    let big = b.demazure_enumerate(&up, h).map_err(|e| rec.config(e))?;
                    let escaped = raised.iter().find(|y| !big.contains(*y));
                    rec.check(
                        escaped.is_none(),
                        || format!("e{} B_w in B_(s_i w), uw=({})", d.label(i), word_labels(&d, uw).join(",")),
                        || format!("{:?} escapes", escaped),
                    );
                }
            }
            // reduced subwords name smaller elements
            for k in 0..uw.len() {
                let mut sub = uw.clone();
                sub.remove(k);
                if !weyl::is_reduced(&d, &sub) {
                    continue;
                }
                let small = b.demazure_enumerate(&sub, h).map_err(|e| rec.config(e))?;
                rec.check(
                    small.is_subset(&by_word[uw]),
                    || format!("monotone ({}) <= ({})", word_labels(&d, &sub).join(","), word_labels(&d, uw).join(",")),
                    || "subword set not contained".to_string(),
                );
            }
        }
    }
    Ok(())
}

fn main_theorem(rec: &mut Recorder, opts: &SuiteOptions) {
    for (t, c) in targets_or(opts, standard_crystals()).into_iter().enumerate() {
        rec.target(&c);
        if c.len() < 2 {
            continue;
        }
        let l = c.len();
        let il = c.letters()[l - 1];
        let short = CellularCrystal::new(c.datum().clone(), c.letters()[..l - 1].to_vec())
            .expect("prefix of a reduced word");
        let mut rng = rng_for(opts, 100 + t as u64);
        for _ in 0..opts.samples {
            let x = random_vec(&mut rng, l, 5);
            let xp = x.drop_last();
            let xl = x[l - 1];
            for i in present(&c) {
                let h_wt = c.datum().pairing(i, &c.weight(&x));
                let expected = if i == il {
                    short.eps(i, &xp).max(CrystalValue::Finite(-xl - h_wt))
                } else {
                    short.eps(i, &xp)
                };
                let eps = c.eps(i, &x);
                rec.check(
                    eps == expected,
                    || format!("(i) x={x} i={}", c.datum().label(i)),
                    || format!("eps={eps}, recursion gives {expected}"),
                );
                let fx = c.f_op(i, &x).expect("present letter");
                let eps_i = eps.finite().expect("present letter");
                let frak_d = eps_i + xl + h_wt;
                let bumped = fx[l - 1] == xl + 1;
                let iv = if i == il { frak_d >= 0 && bumped == (frak_d == 0) } else { !bumped };
                rec.check(
                    iv,
                    || format!("(iv) x={x} i={}", c.datum().label(i)),
                    || format!("d={frak_d}, last coordinate {xl} -> {}", fx[l - 1]),
                );
                if i != il {
                    let fxp = short.f_op(i, &xp);
                    rec.check(
                        fxp.as_ref() == Some(&fx.drop_last()) && fx[l - 1] == xl,
                        || format!("(ii) x={x} i={}", c.datum().label(i)),
                        || format!("f x = {fx}, f x' = {fxp:?}"),
                    );
                }
            }
        }
    }
}

fn connectedness(rec: &mut Recorder, opts: &SuiteOptions) -> Result<(), SuiteError> {
    for c in targets_or(opts, standard_crystals()) {
        rec.target(&c);
        let report = isocert::connectedness_certificate(&c, opts.radius, opts.pad).map_err(|e| rec.config(e))?;
        rec.check(
            report.is_complete(),
            || format!("r={} p={} word ({})", opts.radius, opts.pad, word_labels(c.datum(), c.letters()).join(",")),
            || {
                format!(
                    "reached {}/{}; unreached {:?}",
                    report.reached,
                    report.inner_total,
                    report.unreached.iter().map(|x| x.to_string()).collect::<Vec<_>>()
                )
            },
        );
    }
    Ok(())
}

/// The four parametrized families of central-object coordinates on
/// `A_3, w = (1,2,3,2,1)`, each with its inversion and region test.
pub struct ClusterFamily {
    pub name: &'static str,
    pub tuple: fn([i64; 5]) -> [i64; 5],
    pub inverse: fn([i64; 5]) -> [i64; 5],
    /// Signs required of `(c₃−c₂−c₄, c₁+c₅−c₂−c₄)`: `+1` for `≥ 0`, `−1`
    /// for `≤ 0`.
    pub signs: (i64, i64),
}

pub fn cluster_families() -> [ClusterFamily; 4] {
    // parameters (x, y, a, b, c)
    [
        ClusterFamily {
            name: "C1",
            tuple: |[x, y, a, b, c]| [c + b, c, y + a + b + c, a + b, x + a],
            inverse: |[c1, c2, c3, c4, c5]| {
                let (c, b) = (c2, c1 - c2);
                let a = c4 - b;
                [c1 + c5 - c2 - c4, c3 - c2 - c4, a, b, c]
            },
            signs: (1, 1),
        },
        ClusterFamily {
            name: "C2",
            tuple: |[x, y, a, b, c]| [c + b, c, y + x + a + b + c, x + a + b, a],
            inverse: |[c1, c2, c3, c4, c5]| {
                let (c, b, a) = (c2, c1 - c2, c5);
                [c4 - a - b, c3 - c2 - c4, a, b, c]
            },
            signs: (1, -1),
        },
        ClusterFamily {
            name: "C3",
            tuple: |[x, y, a, b, c]| [y + c + b, c, x + a + b + c, x + y + a + b, a],
            inverse: |[c1, c2, c3, c4, c5]| {
                let (c, a) = (c2, c5);
                let y = -(c3 - c2 - c4);
                [-(c1 + c5 - c2 - c4), y, a, c1 - y - c, c]
            },
            signs: (-1, -1),
        },
        ClusterFamily {
            name: "C4",
            tuple: |[x, y, a, b, c]| [y + c + b, c, a + b + c, y + a + b, a + x],
            inverse: |[c1, c2, c3, c4, c5]| {
                let c = c2;
                let y = -(c3 - c2 - c4);
                let b = c1 - y - c;
                [c1 + c5 - c2 - c4, y, c4 - y - b, b, c]
            },
            signs: (-1, 1),
        },
    ]
}

fn cluster_regions(rec: &mut Recorder, opts: &SuiteOptions) {
    let host = cell("A3", &[0, 1, 2, 1, 0]);
    rec.target(&host);
    let families = cluster_families();
    let mut rng = rng_for(opts, 7);
    for _ in 0..opts.samples {
        let p = [
            rng.gen_range(0..=30),
            rng.gen_range(0..=30),
            rng.gen_range(-30..=30),
            rng.gen_range(-30..=30),
            rng.gen_range(-30..=30),
        ];
        for f in &families {
            let t = (f.tuple)(p);
            let [c1, c2, c3, c4, c5] = t;
            let (q1, q2) = (c3 - c2 - c4, c1 + c5 - c2 - c4);
            rec.check(
                q1 * f.signs.0 >= 0 && q2 * f.signs.1 >= 0,
                || format!("{} region at {p:?}", f.name),
                || format!("tuple {t:?}: c3-c2-c4={q1}, c1+c5-c2-c4={q2}"),
            );
            let back = (f.inverse)(t);
            rec.check(
                back == p,
                || format!("{} inverse at {p:?}", f.name),
                || format!("recovered {back:?}"),
            );
        }
    }
    // with x = y = 0 every family is a·C_{Λ1} + b·C_{Λ2} + c·C_{Λ3}
    let frozen: Vec<CellVec> = (0..3)
        .map(|k| host.central_cp(&Weight::fundamental(3, k)).expect("integral"))
        .collect();
    for f in &families {
        for (k, unit) in [[0, 0, 1, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1]].iter().enumerate() {
            let t = CellVec((f.tuple)(*unit).to_vec());
            rec.check(
                t == frozen[k],
                || format!("{} frozen Λ{}", f.name, k + 1),
                || format!("{t} vs {}", frozen[k]),
            );
        }
    }
}

/// Positive roots of a finite-type datum, by closing the simple roots under
/// simple reflections.
pub fn positive_roots(d: &CartanDatum) -> BTreeSet<RootVec> {
    let n = d.rank();
    let mut seen: BTreeSet<RootVec> = (0..n).map(|i| RootVec::simple(n, i)).collect();
    let mut stack: Vec<RootVec> = seen.iter().cloned().collect();
    while let Some(b) = stack.pop() {
        for i in 0..n {
            let r = weyl::reflect_root(d, i, &b);
            if r.is_positive() && seen.insert(r.clone()) {
                stack.push(r);
            }
        }
    }
    seen
}

/// `∏_{β>0} (λ+ρ, β) / (ρ, β)`.
pub fn weyl_dimension(d: &CartanDatum, lambda: &Weight) -> u64 {
    let rho = Weight::from_fundamental(&vec![1; d.rank()]);
    let lr = lambda + &rho;
    let (mut num, mut den) = (1i128, 1i128);
    for b in positive_roots(d) {
        num *= d.form(&b, &lr) as i128;
        den *= d.form(&b, &rho) as i128;
    }
    (num / den) as u64
}

fn cartan(rec: &mut Recorder, opts: &SuiteOptions) {
    let defaults = vec![
        cell("A2", &[0, 1, 0]),
        cell("A3", &[0, 1, 0, 2, 1, 0]),
        cell("B2", &[0, 1, 0, 1]),
        cell("G2", &[0, 1, 0, 1, 0, 1]),
        cell("A1^(1)", &[0, 1, 0, 1]),
    ];
    let mut rng = rng_for(opts, 11);
    for c in targets_or(opts, defaults) {
        rec.target(&c);
        let d = c.datum().clone();
        let n = d.rank();
        let class = match weyl::all_reduced_words(&d, c.letters(), weyl::DEFAULT_WORD_CAP) {
            Ok(cl) => cl,
            Err(e) => {
                rec.check(false, || "matsumoto class".to_string(), || e.to_string());
                continue;
            }
        };
        let probes: Vec<Weight> = (0..n)
            .flat_map(|i| [Weight::fundamental(n, i), Weight::simple_root(n, i)])
            .collect();
        let beta_sum = |w: &[usize]| {
            weyl::beta_sequence(&d, w)
                .expect("reduced")
                .iter()
                .fold(RootVec::zero(n), |acc, b| &acc + b)
        };
        let base_sum = beta_sum(c.letters());
        for w in &class {
            let same = probes
                .iter()
                .all(|p| weyl::act(&d, w, p) == weyl::act(&d, c.letters(), p));
            rec.check(same, || format!("act on ({})", word_labels(&d, w).join(",")), || "differs".into());
            let s = beta_sum(w);
            rec.check(
                s == base_sum,
                || format!("beta sum on ({})", word_labels(&d, w).join(",")),
                || format!("{s:?} vs {base_sum:?}"),
            );
        }
        for _ in 0..opts.samples.min(200) {
            let i = rng.gen_range(0..n);
            let lambda = random_weight(&mut rng, n);
            let beta = RootVec::new((0..n).map(|_| rng.gen_range(-3..=3)).collect());
            let lhs = d.form(&weyl::reflect_root(&d, i, &beta), &weyl::reflect(&d, i, &lambda));
            rec.check(
                lhs == d.form(&beta, &lambda),
                || format!("reflect s{} preserves form", d.label(i)),
                || format!("beta={beta:?} lambda={lambda:?}"),
            );
        }
        if d.is_finite_type() && n <= 4 {
            let roots = positive_roots(&d);
            for w in all_words(n, 5) {
                let inv: Vec<usize> = w.iter().rev().copied().collect();
                let inversions = roots
                    .iter()
                    .filter(|b| !weyl::act_root(&d, &inv, b).is_positive())
                    .count();
                let brute = inversions == w.len();
                rec.check(
                    weyl::is_reduced(&d, &w) == brute,
                    || format!("is_reduced ({})", word_labels(&d, &w).join(",")),
                    || format!("{inversions} inversions"),
                );
            }
        }
    }
}

fn all_words(n: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let next: Vec<Vec<usize>> = layer
            .iter()
            .flat_map(|w: &Vec<usize>| {
                (0..n).map(move |i| {
                    let mut v = w.clone();
                    v.push(i);
                    v
                })
            })
            .collect();
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn flatten(e: &Element, out: &mut Vec<Element>) {
    match e {
        Element::Tensor(parts) => parts.iter().for_each(|p| flatten(p, out)),
        e => out.push(e.clone()),
    }
}

fn flat(e: Option<Element>) -> Option<Vec<Element>> {
    e.map(|e| {
        let mut v = Vec::new();
        flatten(&e, &mut v);
        v
    })
}

fn crystal_suite(rec: &mut Recorder, opts: &SuiteOptions) {
    let data = match &opts.target {
        Some(c) => vec![c.datum().clone()],
        None => vec![builtin("A1"), builtin("A2"), builtin("B2"), builtin("A3")],
    };
    for d in data {
        let n = d.rank();
        if n > 3 {
            continue;
        }
        let ec = ElementCrystal::new(d.clone());
        let singles: Vec<Element> = (0..n).flat_map(|i| (-3..=3).map(move |k| Element::b(i, k))).collect();
        for b1 in &singles {
            for b2 in &singles {
                for b3 in &singles {
                    let left = Element::Tensor(vec![Element::Tensor(vec![b1.clone(), b2.clone()]), b3.clone()]);
                    let right = Element::Tensor(vec![b1.clone(), Element::Tensor(vec![b2.clone(), b3.clone()])]);
                    let mut ok = ec.wt(&left) == ec.wt(&right);
                    for i in 0..n {
                        ok &= ec.eps(i, &left) == ec.eps(i, &right);
                        ok &= ec.phi(i, &left) == ec.phi(i, &right);
                        ok &= flat(ec.f(i, &left)) == flat(ec.f(i, &right));
                        ok &= flat(ec.e(i, &left)) == flat(ec.e(i, &right));
                    }
                    rec.check(ok, || format!("associativity {b1:?} {b2:?} {b3:?}"), || "differs".into());
                }
            }
        }
        let pairs: Vec<Element> = singles
            .iter()
            .flat_map(|a| singles.iter().map(move |b| Element::Tensor(vec![a.clone(), b.clone()])))
            .collect();
        let v = crystal::axiom_check(&ec, &pairs);
        rec.check(v.is_empty(), || format!("axioms on pairs, rank {n}"), || format!("{:?}", v.first()));
        let colors = |p: &Element| -> Vec<usize> {
            match p {
                Element::Tensor(parts) => parts
                    .iter()
                    .filter_map(|b| match b {
                        Element::B { i, .. } => Some(*i),
                        _ => None,
                    })
                    .collect(),
                _ => Vec::new(),
            }
        };
        let totals = pairs.iter().all(|p| {
            colors(p).into_iter().all(|i| {
                let (f, e) = (ec.f(i, p), ec.e(i, p));
                f.is_some() && e.is_some() && ec.e(i, f.as_ref().unwrap()).as_ref() == Some(p)
            })
        });
        rec.check(totals, || format!("operators total and inverse, rank {n}"), || "null or mismatch".into());
    }
}

fn cellular(rec: &mut Recorder, opts: &SuiteOptions) {
    let ec_check = |rec: &mut Recorder, c: &CellularCrystal| {
        let ec = ElementCrystal::new(c.datum().clone());
        for x in box_elements(c.len(), 2) {
            let t = c.to_element(&x);
            let mut ok = ec.wt(&t) == c.weight(&x);
            for i in 0..c.datum().rank() {
                ok &= ec.eps(i, &t) == c.eps(i, &x);
                ok &= ec.phi(i, &t) == c.phi(i, &x);
                ok &= ec.f(i, &t).map(|y| c.from_element(&y)) == c.f_op(i, &x).map(Some);
                ok &= ec.e(i, &t).map(|y| c.from_element(&y)) == c.e_op(i, &x).map(Some);
            }
            rec.check(ok, || format!("closed form vs tensor rule at {x}"), || "differs".into());
        }
    };
    for (t, c) in targets_or(opts, standard_crystals()).into_iter().enumerate() {
        rec.target(&c);
        ec_check(rec, &c);
        let mut rng = rng_for(opts, 200 + t as u64);
        let n = c.datum().rank();
        for _ in 0..opts.samples {
            let x = random_vec(&mut rng, c.len(), 6);
            for i in present(&c) {
                let f = c.f_op(i, &x).unwrap();
                let e = c.e_op(i, &x).unwrap();
                let phi_eps = c.phi(i, &x) == c.eps(i, &x) + c.datum().pairing(i, &c.weight(&x));
                rec.check(
                    c.e_op(i, &f).as_ref() == Some(&x) && c.f_op(i, &e).as_ref() == Some(&x) && phi_eps,
                    || format!("e/f inverse at {x} i={}", c.datum().label(i)),
                    || format!("f x = {f}, e x = {e}"),
                );
            }
            let (l1, l2) = (random_weight(&mut rng, n), random_weight(&mut rng, n));
            let lin = match (c.central_cp(&(&l1 + &l2)), c.central_cp(&l1), c.central_cp(&l2)) {
                (Ok(s), Ok(a), Ok(b)) => s == &a + &b,
                _ => false,
            };
            rec.check(lin, || format!("central_cp linear at {l1:?} + {l2:?}"), || "not additive".into());
        }
    }
    let w0s = match &opts.target {
        Some(c) => vec![c.clone()],
        None => ["A2", "A3", "B2"]
            .iter()
            .map(|t| BInfty::for_datum(&builtin(t)).expect("finite").host().clone())
            .collect(),
    };
    for c in w0s {
        rec.target(&c);
        let n = c.datum().rank();
        for coeffs in all_words(3, n).into_iter().filter(|w| w.len() == n) {
            let coeffs: Vec<i64> = coeffs.iter().map(|&k| k as i64).collect();
            let lambda = Weight::from_fundamental(&coeffs);
            let h = c.h_vector(&lambda);
            let m = CellVec(c.h_exponents(&lambda));
            let cp = c.central_cp(&lambda);
            rec.check(
                h.as_ref().ok() == Some(&m) && cp.as_ref().ok() == Some(&m),
                || format!("h_vector at {coeffs:?}"),
                || format!("h={h:?} m={m} cp={cp:?}"),
            );
        }
    }
}

fn subcrystal(rec: &mut Recorder, opts: &SuiteOptions) -> Result<(), SuiteError> {
    let hosts = w0_hosts(opts).map_err(|e| rec.config(e))?;
    for (t, b) in hosts.iter().enumerate() {
        let c = b.host();
        rec.target(c);
        let d = c.datum().clone();
        let n = d.rank();
        let h = 6.min(opts.height.max(0) + 2);
        let enumerated = b.enumerate(h);
        // oracle: layered breadth-first f̃-closure of 0
        let mut reached = BTreeSet::from([c.zero()]);
        let mut layer = vec![c.zero()];
        for _ in 0..h {
            let mut next = Vec::new();
            for x in &layer {
                for i in 0..n {
                    let y = c.f_op(i, x).expect("w0 word holds every letter");
                    if reached.insert(y.clone()) {
                        next.push(y);
                    }
                }
            }
            layer = next;
        }
        rec.check(
            reached == enumerated,
            || format!("B(inf) enumeration to height {h}"),
            || format!("bfs {} vs enumerate {}", reached.len(), enumerated.len()),
        );
        let candidates: BTreeSet<CellVec> = box_elements(c.len(), 3)
            .filter(|x| (0..=h).contains(&x.height()))
            .chain(reached.iter().cloned())
            .collect();
        for x in candidates {
            let m = b.member(&x).map_err(|e| rec.config(e))?;
            let truth = reached.contains(&x);
            rec.check(
                m.member == truth,
                || format!("greedy raising at {x}"),
                || format!("greedy says {}, closure says {truth}", m.member),
            );
            if m.member {
                let regen = m.path.iter().rev().try_fold(c.zero(), |y, &i| c.f_op(i, &y));
                let eps_ok = (0..n).all(|i| c.eps(i, &x) >= CrystalValue::Finite(0));
                rec.check(
                    regen.as_ref() == Some(&x) && eps_ok,
                    || format!("certificate path at {x}"),
                    || format!("regenerated {regen:?}"),
                );
            }
        }
        for coeffs in all_words(3, n).into_iter().filter(|w| w.len() == n && w.iter().sum::<usize>() <= 2) {
            let coeffs: Vec<i64> = coeffs.iter().map(|&k| k as i64).collect();
            let lambda = Weight::from_fundamental(&coeffs);
            let bl = BLambda::new(b.clone(), lambda.clone()).map_err(|e| rec.config(e))?;
            let size = bl.enumerate(100_000).map_err(|e| rec.sub_error(e))?.len() as u64;
            let dim = weyl_dimension(&d, &lambda);
            rec.check(
                size == dim,
                || format!("|B(lambda)| at {coeffs:?}"),
                || format!("{size} elements, dimension {dim}"),
            );
        }
        let mut star = StarOps::with_budget(c.clone(), opts.budget);
        let mut rng = rng_for(opts, 300 + t as u64);
        let samples = opts.samples.min(100);
        let class: Vec<Vec<usize>> = weyl::all_reduced_words(&d, c.letters(), weyl::DEFAULT_WORD_CAP)
            .map_err(|e| rec.config(e))?
            .into_iter()
            .collect();
        for _ in 0..samples {
            let x = random_vec(&mut rng, c.len(), 2);
            for j in 0..n {
                let fs = star.f_star(j, &x).map_err(|e| rec.sub_error(e))?;
                let back = star.e_star(j, &fs).map_err(|e| rec.sub_error(e))?;
                rec.check(back == x, || format!("e*{}f*{} at {x}", d.label(j), d.label(j)), || format!("{back}"));
                for i in (0..n).filter(|&i| i != j) {
                    let a = star.f_star(j, &c.f_op(i, &x).unwrap()).map_err(|e| rec.sub_error(e))?;
                    let bb = c.f_op(i, &fs).unwrap();
                    rec.check(
                        a == bb,
                        || format!("f*{} f{} commute at {x}", d.label(j), d.label(i)),
                        || format!("{a} vs {bb}"),
                    );
                }
                let ending: Vec<&Vec<usize>> = class.iter().filter(|w| w.last() == Some(&j)).take(3).collect();
                let values = ending
                    .iter()
                    .map(|w| star.eps_star_via(&x, j, w))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| rec.sub_error(e))?;
                rec.check(
                    values.windows(2).all(|p| p[0] == p[1]),
                    || format!("eps*{} transport independence at {x}", d.label(j)),
                    || format!("{values:?} over {} words", ending.len()),
                );
            }
        }
    }
    Ok(())
}

fn isocert_suite(rec: &mut Recorder, opts: &SuiteOptions) -> Result<(), SuiteError> {
    let pairs: Vec<(CellularCrystal, CellularCrystal, i64)> = match &opts.target {
        Some(c) => {
            let class = weyl::all_reduced_words(c.datum(), c.letters(), weyl::DEFAULT_WORD_CAP)
                .map_err(|e| rec.config(e))?;
            let other = class.iter().find(|w| w.as_slice() != c.letters()).unwrap_or(&c.letters().to_vec()).clone();
            vec![(c.clone(), CellularCrystal::new(c.datum().clone(), other).map_err(|e| rec.config(e))?, 2)]
        }
        None => vec![
            (cell("A2", &[0, 1, 0]), cell("A2", &[1, 0, 1]), 3),
            (cell("A3", &[0, 1, 0, 2, 1, 0]), cell("A3", &[2, 1, 2, 0, 1, 2]), 1),
            (cell("B2", &[0, 1, 0, 1]), cell("B2", &[1, 0, 1, 0]), 2),
            (cell("G2", &[0, 1, 0, 1, 0, 1]), cell("G2", &[1, 0, 1, 0, 1, 0]), 1),
        ],
    };
    let mut rng = rng_for(opts, 400);
    for (a, b, r) in pairs {
        rec.target(&a);
        rec.target(&b);
        let inside = move |x: &CellVec| x.0.iter().all(|k| k.abs() <= r);
        let cert = grow_isomorphism(&a, &b, a.zero(), b.zero(), opts.budget, move |x, _| inside(x))
            .map_err(|e| rec.budget(e))?;
        rec.check(
            cert.is_ok(),
            || format!("grow ({}) -> ({})", word_labels(a.datum(), a.letters()).join(","), word_labels(b.datum(), b.letters()).join(",")),
            || format!("{:?}", cert.status),
        );
        if let IsoStatus::Ok = cert.status {
            let domain: Vec<CellVec> = cert.map.keys().cloned().collect();
            let map = &cert.map;
            let v = crystal::morphism_check(&a, &domain, &b, |x| map.get(x).cloned(), true);
            rec.check(v.is_empty(), || "fragment is a strict morphism".into(), || format!("{:?}", v.first()));
        }
        let mut fwd = Transporter::new(a.clone(), b.clone(), opts.budget).map_err(|e| rec.config(e))?;
        let mut bwd = Transporter::new(b.clone(), a.clone(), opts.budget).map_err(|e| rec.config(e))?;
        for _ in 0..opts.samples.min(50) {
            let x = random_vec(&mut rng, a.len(), 2);
            let y = fwd.forward(&x).map_err(|e| rec.budget(e))?;
            let z = bwd.forward(&y).map_err(|e| rec.budget(e))?;
            rec.check(z == x, || format!("round trip at {x}"), || format!("{x} -> {y} -> {z}"));
            // through the identity word and back
            let mut via = Transporter::new(a.clone(), a.clone(), opts.budget).map_err(|e| rec.config(e))?;
            let direct = via.forward(&x).map_err(|e| rec.budget(e))?;
            rec.check(
                fwd.forward(&direct).map_err(|e| rec.budget(e))? == y,
                || format!("functoriality at {x}"),
                || "composite differs".into(),
            );
        }
    }
    // decomposition of w0 crystals into shifted B(∞)
    let b = BInfty::for_datum(&builtin("A2")).expect("finite");
    for x in box_elements(3, 2) {
        let t_max = x.norm1() as u32;
        let found = isocert::hshift_certificate(&b, &x, t_max).map_err(|e| rec.config(e))?;
        rec.check(found.is_some(), || format!("hshift at {x}"), || format!("none up to t={t_max}"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weyl_dimensions() {
        let a2 = builtin("A2");
        assert_eq!(positive_roots(&a2).len(), 3);
        assert_eq!(positive_roots(&builtin("E8")).len(), 120);
        assert_eq!(weyl_dimension(&a2, &Weight::from_fundamental(&[1, 0])), 3);
        assert_eq!(weyl_dimension(&a2, &Weight::from_fundamental(&[1, 1])), 8);
        assert_eq!(weyl_dimension(&builtin("G2"), &Weight::from_fundamental(&[1, 0])), 7);
    }

    #[test]
    fn left_multiplication() {
        let a2 = builtin("A2");
        assert_eq!(left_multiply(&a2, 0, &[1]), vec![0, 1]);
        assert_eq!(left_multiply(&a2, 0, &[0, 1]), vec![1]);
        let w = left_multiply(&a2, 1, &[0, 1, 0]);
        assert_eq!(w.len(), 2);
        let mut back = vec![1];
        back.extend(&w);
        assert!(weyl::same_element(&a2, &back, &[0, 1, 0]));
    }

    #[test]
    fn small_suites_pass() {
        let opts = SuiteOptions {
            samples: 50,
            ..SuiteOptions::default()
        };
        for s in ["a3-example", "fC", "cluster-regions", "main-theorem"] {
            let r = run(s, &opts).unwrap();
            assert!(r[0].passed(), "{s}: {:?}", r[0].failures);
        }
        assert!(matches!(run("nope", &opts), Err(SuiteError::Unknown(_))));
    }
}
