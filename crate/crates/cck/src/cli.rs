//! The `cck` command line.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use cck_core::crystal::Crystal;
use cck_core::isocert::{self, IsoError, IsoStatus};
use cck_core::program::{self, Op, ProgramError};
use cck_core::subcrystal::{BInfty, BLambda, StarOps, SubcrystalError};
use cck_core::{weyl, CartanError, CellVec, CellularCrystal, CellularError, Transporter, WeylError};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::config::{self, ConfigError, OutputFormat, RunConfig};
use crate::format::{cellvec_json, membership_json, word_labels, CartanJson};
use crate::graph::Graph;
use crate::suites::{self, SuiteError, SuiteOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "cck", version, about = "Exact computations with cellular crystals")]
pub struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Output format: json, text or dot.
    #[arg(long, global = true, default_value = "json")]
    format: String,
    /// Seed for sampled checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Search budget; overrides CCK_BUDGET.
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Report wall time on stderr.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Debug, Clone, Args)]
struct DatumArgs {
    /// Built-in Cartan type such as A3, G2 or A1^(1).
    #[arg(long = "type")]
    ty: Option<String>,
    /// Cartan datum JSON file.
    #[arg(long)]
    cartan: Option<PathBuf>,
    /// Comma-separated reduced word; defaults to a longest word when the
    /// datum is of finite type.
    #[arg(long)]
    word: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Cartan data.
    #[command(subcommand)]
    Cartan(CartanCmd),
    /// Reduced words and braid moves.
    #[command(subcommand)]
    Word(WordCmd),
    /// Run an operator program such as "f3,f2,f1" or "emax1,f*2^3".
    Act {
        #[command(flatten)]
        d: DatumArgs,
        #[arg(long, default_value = "")]
        program: String,
        #[arg(long, allow_hyphen_values = true)]
        start: Option<String>,
    },
    /// Crystal graph of the box [-r, r]^l.
    Graph {
        #[command(flatten)]
        d: DatumArgs,
        #[arg(long, default_value_t = 1)]
        radius: i64,
    },
    /// Membership tests.
    #[command(subcommand)]
    Member(MemberCmd),
    /// The star statistic eps*_j by transport to a word ending in j.
    Estar {
        #[command(flatten)]
        d: DatumArgs,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long)]
        j: String,
        /// Explicit target word ending in j.
        #[arg(long)]
        target: Option<String>,
    },
    /// Isomorphisms between cellular crystals of one Weyl group element.
    #[command(subcommand)]
    Iso(IsoCmd),
    /// Connectedness certificate on a box.
    Connect {
        #[command(flatten)]
        d: DatumArgs,
        #[arg(long, default_value_t = 2)]
        radius: u32,
        #[arg(long, default_value_t = 4)]
        pad: u32,
    },
    /// Search t with x + h_{t rho} in B(infinity).
    Hshift {
        #[command(flatten)]
        d: DatumArgs,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value_t = 10)]
        tmax: u32,
    },
    /// Enumerate B(lambda) inside B(infinity) tensor T_lambda.
    Blambda {
        #[command(flatten)]
        d: DatumArgs,
        /// Coefficients of the fundamental weights.
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, default_value_t = 100_000)]
        cap: usize,
        /// Stream elements as JSON lines.
        #[arg(long)]
        lines: bool,
    },
    /// Run a verification suite.
    Verify {
        suite: String,
        #[command(flatten)]
        d: DatumArgs,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 2)]
        radius: u32,
        #[arg(long, default_value_t = 4)]
        pad: u32,
        #[arg(long, default_value_t = 4)]
        height: i64,
    },
}

#[derive(Debug, Subcommand)]
enum CartanCmd {
    Validate {
        #[command(flatten)]
        d: DatumArgs,
    },
}

#[derive(Debug, Subcommand)]
enum WordCmd {
    /// Reducedness and the inversion sequence.
    Reduce {
        #[command(flatten)]
        d: DatumArgs,
    },
    /// Words one braid move away.
    Braid {
        #[command(flatten)]
        d: DatumArgs,
    },
    /// All reduced words of the same element.
    All {
        #[command(flatten)]
        d: DatumArgs,
        #[arg(long, default_value_t = weyl::DEFAULT_WORD_CAP)]
        cap: usize,
    },
    /// A reduced word of the same element ending in j.
    Endin {
        #[command(flatten)]
        d: DatumArgs,
        #[arg(long)]
        j: String,
    },
}

#[derive(Debug, Subcommand)]
enum MemberCmd {
    Binfty {
        #[command(flatten)]
        d: DatumArgs,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    Demazure {
        #[command(flatten)]
        d: DatumArgs,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        /// Reduced word of the Demazure parameter.
        #[arg(long)]
        uw: String,
    },
}

#[derive(Debug, Subcommand)]
enum IsoCmd {
    /// Grow an isomorphism anchored at 0 -> 0 on a box.
    Grow {
        #[command(flatten)]
        d: DatumArgs,
        /// The second reduced word.
        #[arg(long)]
        to: String,
        #[arg(long, default_value_t = 3)]
        radius: i64,
        /// Write the explored fragment as DOT.
        #[arg(long)]
        emit_dot: Option<PathBuf>,
    },
    /// Carry an element to the crystal on another reduced word.
    Transport {
        #[command(flatten)]
        d: DatumArgs,
        #[arg(long)]
        to: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
}

/// What a run produced.
#[derive(Debug, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn config(e: impl ToString) -> Self {
        Failure {
            code: EXIT_CONFIG,
            message: e.to_string(),
        }
    }

    fn budget(e: impl ToString) -> Self {
        Failure {
            code: EXIT_BUDGET,
            message: e.to_string(),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::config(e)
    }
}

impl From<CartanError> for Failure {
    fn from(e: CartanError) -> Self {
        Failure::config(e)
    }
}

impl From<CellularError> for Failure {
    fn from(e: CellularError) -> Self {
        match e {
            CellularError::Weyl(w) => w.into(),
            e => Failure::config(e),
        }
    }
}

impl From<WeylError> for Failure {
    fn from(e: WeylError) -> Self {
        match e {
            WeylError::ExplosionGuard(_) => Failure::budget(e),
            e => Failure::config(e),
        }
    }
}

impl From<IsoError> for Failure {
    fn from(e: IsoError) -> Self {
        match e {
            IsoError::PathSearchExhausted(_) | IsoError::BudgetExhausted(_) => Failure::budget(e),
            IsoError::TransportConflict(_) => Failure {
                code: EXIT_VERIFY,
                message: e.to_string(),
            },
            e => Failure::config(e),
        }
    }
}

impl From<SubcrystalError> for Failure {
    fn from(e: SubcrystalError) -> Self {
        match e {
            SubcrystalError::Iso(i) => i.into(),
            SubcrystalError::Weyl(w) => w.into(),
            SubcrystalError::CapExceeded(_) => Failure::budget(e),
            e => Failure::config(e),
        }
    }
}

impl From<ProgramError> for Failure {
    fn from(e: ProgramError) -> Self {
        match e {
            ProgramError::Subcrystal(s) => s.into(),
            e => Failure::config(e),
        }
    }
}

impl From<SuiteError> for Failure {
    fn from(e: SuiteError) -> Self {
        match e {
            SuiteError::Budget { .. } => Failure::budget(e),
            e => Failure::config(e),
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code, stderr: text, ..Outcome::default() }
            } else {
                Outcome { code, stdout: text, ..Outcome::default() }
            };
        }
    };
    let started = Instant::now();
    let timing = cli.timing;
    let mut out = match execute(cli) {
        Ok(o) => o,
        Err(f) => Outcome {
            code: f.code,
            stderr: format!("error: {}\n", f.message),
            ..Outcome::default()
        },
    };
    if timing {
        out.stderr
            .push_str(&format!("wall time: {:.3}s\n", started.elapsed().as_secs_f64()));
    }
    out
}

struct Ctx {
    format: OutputFormat,
    seed: u64,
    budget: usize,
}

impl Ctx {
    fn config(&self, d: &DatumArgs) -> Result<RunConfig, Failure> {
        let datum = config::resolve_datum(d.ty.as_deref(), d.cartan.as_deref())?;
        let word = d.word.as_deref().map(|w| config::parse_word(&datum, w)).transpose()?;
        Ok(RunConfig {
            datum,
            word,
            budget: self.budget,
            seed: self.seed,
            format: self.format,
        })
    }

    fn crystal(&self, d: &DatumArgs) -> Result<(RunConfig, CellularCrystal), Failure> {
        let cfg = self.config(d)?;
        let c = cfg.crystal()?;
        Ok((cfg, c))
    }

    /// JSON on one line, or pretty JSON for `text`.
    fn emit(&self, v: &Value) -> String {
        match self.format {
            OutputFormat::Text => format!("{}\n", serde_json::to_string_pretty(v).expect("json")),
            _ => format!("{}\n", serde_json::to_string(v).expect("json")),
        }
    }
}

fn ok(stdout: String) -> Result<Outcome, Failure> {
    Ok(Outcome {
        code: EXIT_OK,
        stdout,
        stderr: String::new(),
    })
}

fn labels(c: &CellularCrystal, w: &[usize]) -> Value {
    json!(word_labels(c.datum(), w))
}

fn execute(cli: Cli) -> Result<Outcome, Failure> {
    let format: OutputFormat = cli.format.parse()?;
    let budget = match cli.budget {
        Some(0) => return Err(Failure::config("--budget must be positive")),
        Some(b) => b,
        None => config::budget_from_env()?,
    };
    let ctx = Ctx {
        format,
        seed: cli.seed.unwrap_or(config::DEFAULT_SEED),
        budget,
    };
    match cli.cmd {
        Cmd::Cartan(CartanCmd::Validate { d }) => {
            let cfg = ctx.config(&d)?;
            let mut v = json!({"valid": true, "cartan": CartanJson::from_datum(&cfg.datum)});
            v["finite_type"] = json!(cfg.datum.is_finite_type());
            ok(ctx.emit(&v))
        }
        Cmd::Word(w) => word_cmd(&ctx, w),
        Cmd::Act { d, program, start } => {
            let (_, c) = ctx.crystal(&d)?;
            let prog = config::parse_program(c.datum(), &program)?;
            let x = config::parse_vec_for(&c, start.as_deref())?;
            let mut star = (!prog.is_empty()).then(|| StarOps::with_budget(c.clone(), ctx.budget));
            let (y, trace) = program::apply_program(&c, &mut star, &x, &prog)?;
            let name = |op: Op| match op {
                Op::E => "e",
                Op::F => "f",
                Op::EStar => "e*",
                Op::FStar => "f*",
            };
            if ctx.format == OutputFormat::Text {
                let mut s = format!("{y}\n");
                for t in &trace {
                    let pos = t.position.map_or("-".to_string(), |p| (p + 1).to_string());
                    s.push_str(&format!(
                        "{}{} position={} sigma={} -> {}\n",
                        name(t.op),
                        c.datum().label(t.i),
                        pos,
                        t.sigma,
                        t.result
                    ));
                }
                return ok(s);
            }
            let steps: Vec<Value> = trace
                .iter()
                .map(|t| {
                    json!({
                        "op": name(t.op),
                        "i": c.datum().label(t.i),
                        "position": t.position.map(|p| p + 1),
                        "sigma": t.sigma.finite(),
                        "result": cellvec_json(&t.result),
                    })
                })
                .collect();
            ok(ctx.emit(&json!({"result": cellvec_json(&y), "trace": steps})))
        }
        Cmd::Graph { d, radius } => {
            if radius < 0 {
                return Err(Failure::config("--radius must be nonnegative"));
            }
            let (_, c) = ctx.crystal(&d)?;
            let g = Graph::of_box(&c, radius);
            match ctx.format {
                OutputFormat::Dot => ok(g.to_dot(c.datum())),
                _ => ok(ctx.emit(&g.to_json(c.datum()))),
            }
        }
        Cmd::Member(MemberCmd::Binfty { d, x }) => {
            let (_, c) = ctx.crystal(&d)?;
            let x = config::parse_vec_for(&c, Some(&x))?;
            let b = BInfty::new(c.clone())?;
            let m = b.member(&x)?;
            ok(ctx.emit(&membership_json(c.datum(), &m)))
        }
        Cmd::Member(MemberCmd::Demazure { d, x, uw }) => {
            let (_, c) = ctx.crystal(&d)?;
            let x = config::parse_vec_for(&c, Some(&x))?;
            let uw = config::parse_word(c.datum(), &uw)?;
            let b = BInfty::new(c.clone())?;
            let member = b.demazure_member(&x, &uw)?;
            ok(ctx.emit(&json!({"member": member, "uw": labels(&c, &uw)})))
        }
        Cmd::Estar { d, x, j, target } => {
            let (_, c) = ctx.crystal(&d)?;
            let x = config::parse_vec_for(&c, Some(&x))?;
            let j = config::parse_label(c.datum(), &j)?;
            let mut star = StarOps::with_budget(c.clone(), ctx.budget);
            let target = match target {
                Some(t) => config::parse_word(c.datum(), &t)?,
                None => star.target_word(j)?,
            };
            let e = star.eps_star_via(&x, j, &target)?;
            ok(ctx.emit(&json!({"eps_star": e, "j": c.datum().label(j), "target": labels(&c, &target)})))
        }
        Cmd::Iso(IsoCmd::Grow { d, to, radius, emit_dot }) => {
            let (_, a) = ctx.crystal(&d)?;
            let to = config::parse_word(a.datum(), &to)?;
            let b = CellularCrystal::new(a.datum().clone(), to)?;
            if !weyl::same_element(a.datum(), a.letters(), b.letters()) {
                return Err(Failure::config(IsoError::NotSameElement));
            }
            let inside = move |x: &CellVec| x.0.iter().all(|k| k.abs() <= radius);
            let cert = isocert::grow_isomorphism(&a, &b, a.zero(), b.zero(), ctx.budget, move |x, _| inside(x))?;
            if let Some(path) = emit_dot {
                let g = Graph::induced(&a, cert.map.keys().cloned().collect());
                std::fs::write(&path, g.to_dot(a.datum()))
                    .map_err(|e| Failure::config(format!("cannot write {}: {e}", path.display())))?;
            }
            let status = match &cert.status {
                IsoStatus::Ok => json!("ok"),
                IsoStatus::Conflict(c) => json!({"conflict": c.to_string()}),
            };
            let v = json!({
                "source": labels(&a, a.letters()),
                "target": labels(&b, b.letters()),
                "cartan": CartanJson::from_datum(a.datum()),
                "anchor": [cellvec_json(&cert.anchor.0), cellvec_json(&cert.anchor.1)],
                "explored": cert.explored(),
                "edges_checked": cert.edges_checked,
                "status": status,
            });
            Ok(Outcome {
                code: if cert.is_ok() { EXIT_OK } else { EXIT_VERIFY },
                stdout: ctx.emit(&v),
                stderr: String::new(),
            })
        }
        Cmd::Iso(IsoCmd::Transport { d, to, x }) => {
            let (_, a) = ctx.crystal(&d)?;
            let x = config::parse_vec_for(&a, Some(&x))?;
            let to = config::parse_word(a.datum(), &to)?;
            let b = CellularCrystal::new(a.datum().clone(), to)?;
            let mut t = Transporter::new(a.clone(), b.clone(), ctx.budget)?;
            let y = t.forward(&x)?;
            ok(ctx.emit(&json!({"result": cellvec_json(&y), "target": labels(&b, b.letters())})))
        }
        Cmd::Connect { d, radius, pad } => {
            let (_, c) = ctx.crystal(&d)?;
            let r = isocert::connectedness_certificate(&c, radius, pad)?;
            let v = json!({
                "cartan": CartanJson::from_datum(c.datum()),
                "word": labels(&c, c.letters()),
                "inner_radius": r.inner_radius,
                "pad": r.pad,
                "inner_total": r.inner_total,
                "reached": r.reached,
                "fraction": r.fraction(),
                "unreached": r.unreached.iter().map(cellvec_json).collect::<Vec<_>>(),
            });
            Ok(Outcome {
                code: if r.is_complete() { EXIT_OK } else { EXIT_VERIFY },
                stdout: ctx.emit(&v),
                stderr: String::new(),
            })
        }
        Cmd::Hshift { d, x, tmax } => {
            let (_, c) = ctx.crystal(&d)?;
            let x = config::parse_vec_for(&c, Some(&x))?;
            let b = BInfty::new(c.clone())?;
            let v = match isocert::hshift_certificate(&b, &x, tmax)? {
                Some(h) => json!({
                    "found": true,
                    "t": h.t,
                    "lambda": h.lambda.lam,
                    "shifted": cellvec_json(&h.shifted),
                    "membership": membership_json(c.datum(), &h.membership),
                }),
                None => json!({"found": false, "tmax": tmax}),
            };
            ok(ctx.emit(&v))
        }
        Cmd::Blambda { d, lambda, cap, lines } => {
            let (_, c) = ctx.crystal(&d)?;
            let lambda = config::parse_lambda(c.datum(), &lambda)?;
            let bl = BLambda::new(BInfty::new(c.clone())?, lambda.clone())?;
            let set = bl.enumerate(cap)?;
            if lines {
                let mut s = String::new();
                for x in &set {
                    s.push_str(&serde_json::to_string(&x.0).expect("json"));
                    s.push('\n');
                }
                return ok(s);
            }
            let v = json!({
                "lambda": lambda.lam,
                "size": set.len(),
                "elements": set.iter().map(cellvec_json).collect::<Vec<_>>(),
                "word": labels(&c, c.letters()),
            });
            ok(ctx.emit(&v))
        }
        Cmd::Verify {
            suite,
            d,
            samples,
            radius,
            pad,
            height,
        } => {
            let target = if d.ty.is_some() || d.cartan.is_some() {
                Some(ctx.crystal(&d)?.1)
            } else if d.word.is_some() {
                return Err(Failure::config("--word needs --type or --cartan"));
            } else {
                None
            };
            let opts = SuiteOptions {
                target,
                seed: ctx.seed,
                samples,
                budget: ctx.budget,
                radius,
                pad,
                height,
            };
            let started = Instant::now();
            let reports = suites::run(&suite, &opts)?;
            let passed = reports.iter().all(|r| r.passed());
            let mut stderr = String::new();
            if cli.timing {
                stderr = format!("suite {suite}: {:.3}s\n", started.elapsed().as_secs_f64());
            }
            if ctx.format == OutputFormat::Text {
                let mut s = String::new();
                for r in &reports {
                    let verdict = if r.passed() { "PASS" } else { "FAIL" };
                    s.push_str(&format!("{verdict} {}: {}/{} cases\n", r.suite, r.cases - r.failed, r.cases));
                    for w in &r.failures {
                        s.push_str(&format!("  {}: {}\n", w.case, w.detail));
                    }
                }
                return Ok(Outcome {
                    code: if passed { EXIT_OK } else { EXIT_VERIFY },
                    stdout: s,
                    stderr,
                });
            }
            let v = json!({"passed": passed, "reports": reports});
            Ok(Outcome {
                code: if passed { EXIT_OK } else { EXIT_VERIFY },
                stdout: ctx.emit(&v),
                stderr,
            })
        }
    }
}

fn word_cmd(ctx: &Ctx, w: WordCmd) -> Result<Outcome, Failure> {
    let d = match &w {
        WordCmd::Reduce { d } | WordCmd::Braid { d } | WordCmd::All { d, .. } | WordCmd::Endin { d, .. } => d,
    };
    let cfg = ctx.config(d)?;
    let datum = &cfg.datum;
    let word = cfg.word_or_longest()?;
    let lab = |w: &[usize]| json!(word_labels(datum, w));
    let v = match w {
        WordCmd::Reduce { .. } => match weyl::beta_sequence(datum, &word) {
            Ok(betas) => json!({
                "reduced": true,
                "word": lab(&word),
                "betas": betas.iter().map(|b| json!(b.coeffs)).collect::<Vec<_>>(),
            }),
            Err(WeylError::NotReduced(k)) => json!({"reduced": false, "word": lab(&word), "first_failure": k}),
            Err(e) => return Err(e.into()),
        },
        WordCmd::Braid { .. } => {
            weyl::beta_sequence(datum, &word)?;
            let nb = weyl::braid_neighbors(datum, &word);
            json!({"word": lab(&word), "neighbors": nb.iter().map(|w| lab(w)).collect::<Vec<_>>()})
        }
        WordCmd::All { cap, .. } => {
            let all = weyl::all_reduced_words(datum, &word, cap)?;
            json!({"word": lab(&word), "count": all.len(), "words": all.iter().map(|w| lab(w)).collect::<Vec<_>>()})
        }
        WordCmd::Endin { j, .. } => {
            let j = config::parse_label(datum, &j)?;
            let e = weyl::word_ending_in(datum, &word, j, weyl::DEFAULT_WORD_CAP)?;
            json!({"word": lab(&word), "ending": lab(&e)})
        }
    };
    ok(ctx.emit(&v))
}
