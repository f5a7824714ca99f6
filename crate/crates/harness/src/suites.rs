use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};

use drazin_core::linalg::drazin_inverse;
use drazin_core::operator::{annihilates, matrix_dsl, Block, Component, DiagonalBlock, ShiftBlock, Weights};
use drazin_core::sequence::Sequence;
use drazin_core::spectra::Multiplicity;
use drazin_core::{
    duality_report, is_algebraic, perturb_finite_rank, spectral_profile, AnyPolynomial, ComplexValue, Error, GaussRat,
    MatrixBlock, OperatorDesc, Polynomial, Result, SpectralProfile, SpectralSet, ToleranceFrame, Truth,
};
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::{gen, trial_seed, BlockMix, GeneratorProfile, Suite};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

/// A violated assertion. Fixtures carry no trial index or seed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub trial: Option<u64>,
    pub seed: Option<u64>,
    pub instance: String,
    pub assertion: String,
}

/// A trial that could not be decided (ambiguous rank, undecidable set
/// relation, unrepresentable intermediate). Never counted as a failure.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialError {
    pub trial: Option<u64>,
    pub seed: Option<u64>,
    pub instance: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite: Suite,
    pub trials: u64,
    pub failures: Vec<Failure>,
    pub errors: Vec<TrialError>,
    /// Suite-specific tallies, e.g. how many trials had segments.
    pub counters: BTreeMap<String, u64>,
    pub status: Status,
}

impl VerificationReport {
    fn new(suite: Suite) -> Self {
        VerificationReport {
            suite,
            trials: 0,
            failures: Vec::new(),
            errors: Vec::new(),
            counters: BTreeMap::new(),
            status: Status::Pass,
        }
    }

    pub fn counter(&self, key: &str) -> u64 {
        self.counters.get(key).copied().unwrap_or(0)
    }

    fn bump(&mut self, key: &str) {
        *self.counters.entry(key.to_string()).or_default() += 1;
    }

    fn finish(mut self) -> Self {
        self.status = if !self.failures.is_empty() {
            Status::Fail
        } else if !self.errors.is_empty() {
            Status::Error
        } else {
            Status::Pass
        };
        self
    }
}

/// State of one trial: its generator, the instance text for the report
/// and the assertions that failed so far.
struct Trial {
    index: Option<u64>,
    seed: Option<u64>,
    rng: ChaCha8Rng,
    instance: String,
    failed: Vec<String>,
    counters: Vec<&'static str>,
    tf: ToleranceFrame,
}

impl Trial {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failed.push(what());
        }
    }

    fn count(&mut self, key: &'static str) {
        self.counters.push(key);
    }

    fn set_instance(&mut self, s: impl Into<String>) {
        self.instance = s.into();
    }
}

fn decide(t: Truth, what: impl FnOnce() -> String) -> Result<bool> {
    match t {
        Truth::Yes => Ok(true),
        Truth::No => Ok(false),
        Truth::Unknown => Err(Error::Undecided(what())),
    }
}

fn set_eq(a: &SpectralSet, b: &SpectralSet, tf: &ToleranceFrame) -> Result<bool> {
    decide(a.equals(b, tf), || format!("whether {a} = {b}"))
}

fn subset(a: &SpectralSet, b: &SpectralSet, tf: &ToleranceFrame) -> Result<bool> {
    decide(a.subset_of(b, tf), || format!("whether {a} ⊆ {b}"))
}

fn disjoint(a: &SpectralSet, b: &SpectralSet, tf: &ToleranceFrame) -> Result<bool> {
    decide(a.intersects(b, tf), || format!("whether {a} meets {b}")).map(|x| !x)
}

fn record(report: &mut VerificationReport, trial: Trial, outcome: std::thread::Result<Result<()>>) {
    for k in &trial.counters {
        report.bump(k);
    }
    let message = match outcome {
        Ok(Ok(())) => None,
        Ok(Err(e)) => Some(e.to_string()),
        Err(panic) => Some(format!(
            "internal error: {}",
            panic
                .downcast_ref::<String>()
                .map(String::as_str)
                .or_else(|| panic.downcast_ref::<&str>().copied())
                .unwrap_or("panic")
        )),
    };
    if let Some(message) = message {
        report.errors.push(TrialError {
            trial: trial.index,
            seed: trial.seed,
            instance: trial.instance.clone(),
            message,
        });
    }
    for assertion in trial.failed {
        report.failures.push(Failure {
            trial: trial.index,
            seed: trial.seed,
            instance: trial.instance.clone(),
            assertion,
        });
    }
}

fn run_one(
    report: &mut VerificationReport,
    index: Option<u64>,
    seed: u64,
    tf: ToleranceFrame,
    body: &dyn Fn(&mut Trial) -> Result<()>,
) {
    let mut trial = Trial {
        index,
        seed: index.map(|_| seed),
        rng: rand::SeedableRng::seed_from_u64(seed),
        instance: String::new(),
        failed: Vec::new(),
        counters: Vec::new(),
        tf,
    };
    let outcome = catch_unwind(AssertUnwindSafe(|| body(&mut trial)));
    report.trials += 1;
    record(report, trial, outcome);
}

/// Trials `offset..offset + n` of `profile.seed`.
fn run_trials(
    report: &mut VerificationReport,
    profile: &GeneratorProfile,
    offset: u64,
    n: u64,
    body: &dyn Fn(&mut Trial, &GeneratorProfile) -> Result<()>,
) {
    for t in offset..offset + n {
        let seed = trial_seed(profile.seed, t);
        run_one(report, Some(t), seed, ToleranceFrame::default(), &|tr| body(tr, profile));
    }
}

fn run_fixture(report: &mut VerificationReport, name: &str, body: &dyn Fn(&mut Trial) -> Result<()>) {
    run_one(report, None, 0, ToleranceFrame::default(), &|tr| {
        tr.set_instance(name);
        body(tr)
    });
}

/// Runs one suite. Ambiguity aborts and undecidable relations land in
/// `errors`; only genuine violations land in `failures`.
pub fn run_suite(suite: Suite, trials: u64, profile: &GeneratorProfile) -> Result<VerificationReport> {
    profile.validate()?;
    let mut r = VerificationReport::new(suite);
    match suite {
        Suite::Fixtures => run_fixture(&mut r, "ST = diag { 0: 1, 1: inf }, TS = diag { 1: inf }", &st_ts_fixture),
        Suite::Axioms => {
            run_trials(&mut r, profile, 0, trials, &axioms_exact);
            run_trials(&mut r, profile, trials, trials / 3, &axioms_approx);
        }
        Suite::Oracle => run_trials(&mut r, profile, 0, trials, &oracle),
        Suite::T1 => run_trials(&mut r, profile, 0, trials, &t1),
        Suite::T2 => run_trials(&mut r, profile, 0, trials, &t2),
        Suite::T3 => run_trials(&mut r, profile, 0, trials, &t3),
        Suite::T5 => run_trials(&mut r, profile, 0, trials, &t5),
        Suite::T6 => run_trials(&mut r, profile, 0, trials, &t6),
        Suite::Mero => {
            for (name, body) in MERO_FIXTURES {
                run_fixture(&mut r, name, body);
            }
            run_trials(&mut r, profile, 0, trials, &mero);
            run_trials(&mut r, profile, trials, trials / 2, &mero_perturbed);
        }
        Suite::Smt => {
            let p = GeneratorProfile {
                block_mix: BlockMix {
                    shift: 0.0,
                    ..profile.block_mix
                },
                ..*profile
            };
            if p.block_mix.weights().iter().all(|w| *w == 0.0) {
                return Err(Error::InvalidValue("SMT needs matrix or diagonal blocks in block_mix".into()));
            }
            run_trials(&mut r, &p, 0, trials, &smt);
        }
        Suite::Profile => run_trials(&mut r, profile, 0, trials, &profile_coherence),
    }
    Ok(r.finish())
}

// ---------------------------------------------------------------- fixtures

fn konst(v: i64, m: Multiplicity) -> Component {
    Component::constant(GaussRat::int(v), m).expect("valid multiplicity")
}

fn st_ts_fixture(tr: &mut Trial) -> Result<()> {
    let tf = tr.tf;
    let st: OperatorDesc = DiagonalBlock::new(vec![konst(0, Multiplicity::Finite(1)), konst(1, Multiplicity::Infinite)])?.into();
    let ts: OperatorDesc = DiagonalBlock::scalar(GaussRat::int(1)).into();
    let (pst, pts) = (spectral_profile(&st, &tf)?, spectral_profile(&ts, &tf)?);
    let want_st = vec![(ComplexValue::int(0), 1), (ComplexValue::int(1), 1)];
    let want_ts = vec![(ComplexValue::int(1), 1)];
    tr.check(pst.poles.orders() == want_st.as_slice() && pst.poles.set().families().is_empty(), || {
        format!("Π(ST) = {:?}, expected {{(0,1), (1,1)}}", pst.poles.orders())
    });
    tr.check(pts.poles.orders() == want_ts.as_slice() && pts.poles.set().families().is_empty(), || {
        format!("Π(TS) = {:?}, expected {{(1,1)}}", pts.poles.orders())
    });
    tr.check(pst.drazin_spectrum.is_empty(), || format!("σ_DR(ST) = {}", pst.drazin_spectrum));
    tr.check(pts.drazin_spectrum.is_empty(), || format!("σ_DR(TS) = {}", pts.drazin_spectrum));
    let zero = ComplexValue::zero();
    let same = pst.poles.without(&zero, &tf)?.matches(&pts.poles.without(&zero, &tf)?, &tf)?;
    tr.check(same, || "Π(ST) minus 0 differs from Π(TS) minus 0".into());
    Ok(())
}

type Fixture = (&'static str, &'static (dyn Fn(&mut Trial) -> Result<()> + Sync));

const MERO_FIXTURES: [Fixture; 3] = [
    ("diag { seq harmonic(1, 1) -> 0 }", &|tr| {
        let op: OperatorDesc = DiagonalBlock::new(vec![Component::family(Sequence::harmonic(GaussRat::int(1), 1)?)])?.into();
        let p = spectral_profile(&op, &tr.tf)?;
        tr.check(p.meromorphic, || "diag{1/n} should be meromorphic".into());
        tr.check(set_eq(&p.drazin_spectrum, &SpectralSet::from_values([ComplexValue::zero()]), &tr.tf)?, || {
            format!("σ_DR(diag{{1/n}}) = {}, expected {{0}}", p.drazin_spectrum)
        });
        Ok(())
    }),
    ("diag { seq harmonic(1, 1) + 1 -> 1 }", &|tr| {
        let seq = Sequence::harmonic(GaussRat::int(1), 1)?.add_const(&GaussRat::int(1));
        let op: OperatorDesc = DiagonalBlock::new(vec![Component::family(seq)])?.into();
        let p = spectral_profile(&op, &tr.tf)?;
        tr.check(!p.meromorphic, || "diag{1+1/n} should not be meromorphic".into());
        tr.check(set_eq(&p.drazin_spectrum, &SpectralSet::from_values([ComplexValue::int(1)]), &tr.tf)?, || {
            format!("σ_DR(diag{{1+1/n}}) = {}, expected {{1}}", p.drazin_spectrum)
        });
        Ok(())
    }),
    ("shift { weights: geometric(1, 1/2), nilpotent: none }", &|tr| {
        let op: OperatorDesc = ShiftBlock::new(Weights::Geometric(GaussRat::int(1), GaussRat::ratio(1, 2)), None)?.into();
        let p = spectral_profile(&op, &tr.tf)?;
        let zero = SpectralSet::from_values([ComplexValue::zero()]);
        tr.check(p.meromorphic, || "a quasinilpotent shift should be meromorphic".into());
        tr.check(set_eq(&p.ies, &zero, &tr.tf)?, || format!("IES = {}, expected {{0}}", p.ies));
        tr.check(!p.algebraic.flag, || "an infinite shift is not algebraic".into());
        Ok(())
    }),
];

// ---------------------------------------------------------------- AXIOMS, ORACLE

fn axioms_exact(tr: &mut Trial, p: &GeneratorProfile) -> Result<()> {
    let n = tr.rng.random_range(1..=p.max_matrix_dim);
    let pres = gen::presented(&mut tr.rng, p, n, 0.3);
    let raw = MatrixBlock::Presented(pres.clone()).raw();
    tr.set_instance(matrix_dsl(&MatrixBlock::Presented(pres.clone())));
    let a = raw.to_exact().expect("exact");
    let (x, m) = drazin_inverse(&a, &tr.tf)?;
    let am = a.pow(m as u32);
    tr.check(am.matmul(&x).matmul(&a) == am, || format!("a^m a^D a ≠ a^m with m = {m}"));
    tr.check(x.matmul(&a).matmul(&x) == x, || "a^D a a^D ≠ a^D".into());
    tr.check(a.matmul(&x) == x.matmul(&a), || "a a^D ≠ a^D a".into());
    let oracle = pres.largest_block(&GaussRat::zero());
    tr.check(m == oracle, || format!("index {m}, largest Jordan block at 0 is {oracle}"));
    let (y, _) = pres.drazin_inverse();
    tr.check(x == y, || "rank-based and presentation Drazin inverses differ".into());
    Ok(())
}

/// Approximate Drazin axioms hold up to `AXIOM_RESIDUAL·(1+‖a‖)^(m+1)`.
pub const AXIOM_RESIDUAL: f64 = 1e-8;

fn axioms_approx(tr: &mut Trial, p: &GeneratorProfile) -> Result<()> {
    tr.count("approx_trials");
    let a = gen::approx_matrix(&mut tr.rng, p);
    tr.set_instance(matrix_dsl(&MatrixBlock::Approx(a.clone())));
    let (x, m) = drazin_inverse(&a, &tr.tf)?;
    let bound = AXIOM_RESIDUAL * (1.0 + a.frobenius_norm()).powi(m as i32 + 1);
    let am = a.pow(m as u32);
    let residuals = [
        ("a^m a^D a - a^m", am.matmul(&x).matmul(&a).sub(&am).frobenius_norm()),
        ("a^D a a^D - a^D", x.matmul(&a).matmul(&x).sub(&x).frobenius_norm()),
        ("a a^D - a^D a", a.matmul(&x).sub(&x.matmul(&a)).frobenius_norm()),
    ];
    for (name, r) in residuals {
        tr.check(r <= bound, || format!("‖{name}‖ = {r:.3e} exceeds {bound:.3e} (m = {m})"));
    }
    Ok(())
}

fn oracle(tr: &mut Trial, p: &GeneratorProfile) -> Result<()> {
    let n = tr.rng.random_range(1..=p.max_matrix_dim);
    let pres = gen::presented(&mut tr.rng, p, n, 0.3);
    let presented = MatrixBlock::Presented(pres.clone());
    tr.set_instance(matrix_dsl(&presented));
    let raw = presented.raw();
    for (l, _) in pres.eigenvalues() {
        let s = pres.largest_block(&l);
        let got = raw.ascent_descent(&ComplexValue::Exact(l.clone()), &tr.tf)?;
        tr.check(got == (s, s), || format!("at {l}: (ascent, descent) = {got:?}, largest block {s}"));
    }
    let idx = raw.drazin_inverse(&tr.tf)?.index;
    let s0 = pres.largest_block(&GaussRat::zero());
    tr.check(idx == s0, || format!("index {idx}, largest block at 0 is {s0}"));
    let mp = raw.minimal_polynomial(&tr.tf)?;
    tr.check(mp == AnyPolynomial::Exact(pres.minimal_polynomial()), || {
        format!("minimal polynomial {mp}, presentation gives {}", pres.minimal_polynomial())
    });
    let (pr, pp) = (raw.poles(&tr.tf)?, presented.poles(&tr.tf)?);
    tr.check(pr == pp, || format!("poles {pr:?} against {pp:?}"));
    Ok(())
}

// ---------------------------------------------------------------- T1, T2

fn profile_of(tr: &mut Trial, op: &OperatorDesc) -> Result<SpectralProfile> {
    spectral_profile(op, &tr.tf)
}

fn t1(tr: &mut Trial, p: &GeneratorProfile) -> Result<()> {
    let op = gen::operator(&mut tr.rng, p, false);
    tr.set_instance(op.to_string());
    let prof = profile_of(tr, &op)?;
    let tf = tr.tf;
    let dr_empty = prof.drazin_spectrum.is_empty();
    let boundary_ok = disjoint(&prof.sigma.boundary(), &prof.drazin_spectrum, &tf)?;
    let alg = prof.algebraic.flag;
    if alg {
        tr.count("algebraic");
    }
    tr.check(dr_empty == boundary_ok && boundary_ok == alg, || {
        format!("σ_DR = ∅: {dr_empty}, ∂σ ⊆ ρ_DR: {boundary_ok}, algebraic: {alg}")
    });
    let (flag, _) = is_algebraic(&op, &tf)?;
    tr.check(flag == alg, || "profile and is_algebraic disagree".into());
    if alg {
        let Some(pp) = prof.algebraic.min_poly.as_ref() else {
            tr.check(false, || "algebraic verdict without a polynomial".into());
            return Ok(());
        };
        tr.check(annihilates(&op, pp, &tf)?, || format!("P = {pp} does not annihilate"));
        if let AnyPolynomial::Exact(q) = pp {
            let (roots, _) = q.gaussian_roots();
            for (r, _) in roots {
                let smaller = AnyPolynomial::Exact(q.div_rem(&Polynomial::linear_root(&r)).0);
                tr.check(!annihilates(&op, &smaller, &tf)?, || format!("P/(x - {r}) still annihilates, P = {q}"));
            }
        }
    }
    Ok(())
}

fn t2(tr: &mut Trial, p: &GeneratorProfile) -> Result<()> {
    let force = tr.index.is_some_and(|t| t % 5 == 0);
    let op = gen::operator(&mut tr.rng, p, force);
    tr.set_instance(op.to_string());
    let prof = profile_of(tr, &op)?;
    if !prof.sigma.segments().is_empty() {
        tr.count("segment_trials");
    }
    let (cs, cd) = (prof.sigma.is_countable(), prof.drazin_spectrum.is_countable());
    tr.check(cs == cd, || format!("σ countable: {cs}, σ_DR countable: {cd}"));
    tr.check(prof.countable == cs, || "countable flag disagrees with σ".into());
    Ok(())
}

// ---------------------------------------------------------------- T3

fn t3(tr: &mut Trial, p: &GeneratorProfile) -> Result<()> {
    let (a, b) = gen::pair(&mut tr.rng, p);
    tr.set_instance(format!("a = {a}; b = {b}"));
    let tf = tr.tf;
    let ab = OperatorDesc::mul(a.clone(), b.clone()).normalize()?;
    let ba = OperatorDesc::mul(b, a).normalize()?;
    let (pab, pba) = (profile_of(tr, &ab)?, profile_of(tr, &ba)?);
    tr.check(set_eq(&pab.drazin_spectrum, &pba.drazin_spectrum, &tf)?, || {
        format!("σ_DR(ab) = {}, σ_DR(ba) = {}", pab.drazin_spectrum, pba.drazin_spectrum)
    });
    let zero = ComplexValue::zero();
    let (qa, qb) = (pab.poles.without(&zero, &tf)?, pba.poles.without(&zero, &tf)?);
    tr.check(qa.matches(&qb, &tf)?, || {
        format!("Π(ab) minus 0 = {:?} ∪ {}, Π(ba) minus 0 = {:?} ∪ {}", qa.orders(), qa.set(), qb.orders(), qb.set())
    });
    tr.check(pab.meromorphic == pba.meromorphic, || "meromorphy of ab and ba differs".into());
    if !pab.poles.set().is_empty() && pab.poles.order_at(&zero, &tf)? != pba.poles.order_at(&zero, &tf)? {
        tr.count("pole_at_0_differs");
    }
    Ok(())
}

// ---------------------------------------------------------------- T5, T6

fn t5(tr: &mut Trial, p: &GeneratorProfile) -> Result<()> {
    let n = tr.rng.random_range(1..=p.max_matrix_dim.min(4));
    let m = MatrixBlock::Presented(gen::presented(&mut tr.rng, p, n, 0.4));
    tr.set_instance(matrix_dsl(&m));
    let rep = duality_report(&m, &tr.tf)?;
    for v in rep.violations() {
        tr.check(false, || v);
    }
    Ok(())
}

fn t6(tr: &mut Trial, p: &GeneratorProfile) -> Result<()> {
    let n = tr.rng.random_range(1..=p.max_matrix_dim.min(4));
    let m = MatrixBlock::Presented(gen::hermitian(&mut tr.rng, p, n));
    tr.set_instance(matrix_dsl(&m));
    let tf = tr.tf;
    let rep = duality_report(&m, &tf)?;
    tr.check(rep.hermitian, || "generated matrix is not hermitian".into());
    for pt in &rep.points {
        tr.check(pt.right.is_some() && pt.base.is_some(), || format!("eigenvalue {} is not real", pt.lambda));
    }
    for v in rep.violations() {
        tr.check(false, || v);
    }
    let prof = profile_of(tr, &OperatorDesc::Block(Block::Matrix(m)))?;
    let sets = [
        ("σ", &prof.sigma),
        ("iso", &prof.iso),
        ("acc", &prof.acc),
        ("Π", prof.poles.set()),
        ("σ_DR", &prof.drazin_spectrum),
        ("IES", &prof.ies),
        ("σ_asc", &prof.asc_spectrum),
        ("σ_dsc", &prof.dsc_spectrum),
        ("σ_LD", &prof.ld_spectrum),
        ("σ_RD", &prof.rd_spectrum),
    ];
    for (name, s) in sets {
        tr.check(s.is_real(&tf), || format!("{name} = {s} is not real"));
    }
    Ok(())
}

// ---------------------------------------------------------------- MERO

fn zero_set() -> SpectralSet {
    SpectralSet::from_values([ComplexValue::zero()])
}

fn mero(tr: &mut Trial, p: &GeneratorProfile) -> Result<()> {
    let op = gen::operator(&mut tr.rng, p, false);
    tr.set_instance(op.to_string());
    let prof = profile_of(tr, &op)?;
    let in_zero = subset(&prof.drazin_spectrum, &zero_set(), &tr.tf)?;
    if prof.meromorphic {
        tr.count("meromorphic");
    }
    tr.check(prof.meromorphic == in_zero, || {
        format!("meromorphic: {}, σ_DR = {} ⊆ {{0}}: {in_zero}", prof.meromorphic, prof.drazin_spectrum)
    });
    Ok(())
}

fn mero_perturbed(tr: &mut Trial, p: &GeneratorProfile) -> Result<()> {
    let op = gen::operator(&mut tr.rng, p, false).normalize()?;
    let f = gen::commuting_finite_rank(&mut tr.rng, p, &op);
    tr.set_instance(format!("T = {op}; F = {f}"));
    let tf = tr.tf;
    let g = perturb_finite_rank(&op, &f, &tf)?;
    let (p0, p1) = (profile_of(tr, &op)?, profile_of(tr, &g)?);
    tr.check(set_eq(&p0.drazin_spectrum, &p1.drazin_spectrum, &tf)?, || {
        format!("σ_DR(T) = {}, σ_DR(T + F) = {}", p0.drazin_spectrum, p1.drazin_spectrum)
    });
    tr.check(p0.meromorphic == p1.meromorphic, || {
        format!("meromorphic(T) = {}, meromorphic(T + F) = {}", p0.meromorphic, p1.meromorphic)
    });
    Ok(())
}

// ---------------------------------------------------------------- SMT

fn smt(tr: &mut Trial, p: &GeneratorProfile) -> Result<()> {
    let op = gen::operator(&mut tr.rng, p, false).normalize()?;
    let tf = tr.tf;
    let prof = profile_of(tr, &op)?;
    let real = !prof.sigma.segments().is_empty();
    let q = gen::test_polynomial(&mut tr.rng, real);
    tr.set_instance(format!("T = {op}; p = {q}"));
    let image = OperatorDesc::poly(op.clone(), q.clone()).normalize()?;
    let pi = profile_of(tr, &image)?;
    let want_dr = prof.drazin_spectrum.map_poly(&q, &tf)?;
    tr.check(set_eq(&pi.drazin_spectrum, &want_dr, &tf)?, || {
        format!("σ_DR(p(T)) = {}, p(σ_DR(T)) = {want_dr}", pi.drazin_spectrum)
    });
    let want_sigma = prof.sigma.map_poly(&q, &tf)?;
    tr.check(set_eq(&pi.sigma, &want_sigma, &tf)?, || format!("σ(p(T)) = {}, p(σ(T)) = {want_sigma}", pi.sigma));
    for b in op.blocks()? {
        let Block::Matrix(m) = b else { continue };
        let mut want: Vec<(GaussRat, usize)> = Vec::new();
        for (l, k) in m.eigen_clusters(&tf)? {
            let v = q.eval(l.as_exact().expect("exact"));
            match want.iter_mut().find(|(w, _)| *w == v) {
                Some(e) => e.1 += k,
                None => want.push((v, k)),
            }
        }
        want.sort();
        let x = q.eval_matrix(&m.to_exact().expect("exact"));
        let mut got: Vec<(GaussRat, usize)> = drazin_core::linalg::exact_eigenvalues(&x)?;
        got.sort();
        tr.check(got == want, || format!("eigenvalues of p(M) {got:?}, p of eigenvalues {want:?}"));
    }
    Ok(())
}

// ---------------------------------------------------------------- PROFILE

fn profile_coherence(tr: &mut Trial, p: &GeneratorProfile) -> Result<()> {
    let op = gen::operator(&mut tr.rng, p, false);
    tr.set_instance(op.to_string());
    let tf = tr.tf;
    let pr = profile_of(tr, &op)?;
    let dr = &pr.drazin_spectrum;
    let pole = pr.poles.set();

    tr.check(disjoint(dr, pole, &tf)?, || format!("σ_DR = {dr} meets Π = {pole}"));
    let whole = dr.union(pole, &tf);
    tr.check(set_eq(&whole, &pr.sigma, &tf)?, || format!("σ_DR ∪ Π = {whole}, σ = {}", pr.sigma));
    let acc_ies = pr.acc.union(&pr.ies, &tf);
    tr.check(set_eq(dr, &acc_ies, &tf)?, || format!("σ_DR = {dr}, acc ∪ IES = {acc_ies}"));

    let chain = [
        ("σ_asc", &pr.asc_spectrum, "σ_LD", &pr.ld_spectrum),
        ("σ_LD", &pr.ld_spectrum, "σ_DR", dr),
        ("σ_dsc", &pr.dsc_spectrum, "σ_RD", &pr.rd_spectrum),
        ("σ_RD", &pr.rd_spectrum, "σ_DR", dr),
        ("σ_DR", dr, "σ", &pr.sigma),
        ("IES", &pr.ies, "σ_DR", dr),
    ];
    for (na, a, nb, b) in chain {
        tr.check(subset(a, b, &tf)?, || format!("{na} = {a} ⊄ {nb} = {b}"));
    }

    tr.check(disjoint(&pr.iso, &pr.acc, &tf)?, || format!("iso = {} meets acc = {}", pr.iso, pr.acc));
    let parts = pr.iso.union(&pr.acc, &tf);
    tr.check(set_eq(&parts, &pr.sigma, &tf)?, || format!("iso ∪ acc = {parts}, σ = {}", pr.sigma));
    let closed = pr.sigma.closure(&tf);
    tr.check(set_eq(&closed, &pr.sigma, &tf)?, || format!("σ = {} is not closed", pr.sigma));
    let closed_dr = dr.closure(&tf);
    tr.check(set_eq(&closed_dr, dr, &tf)?, || format!("σ_DR = {dr} is not closed"));

    tr.check(pr.countable == pr.sigma.is_countable(), || "countable flag disagrees with σ".into());
    tr.check(!pr.algebraic.flag || dr.is_empty(), || "algebraic with nonempty σ_DR".into());
    tr.check(!pr.algebraic.flag || pr.sigma.is_finite(), || "algebraic with infinite σ".into());
    let in_zero = subset(dr, &zero_set(), &tf)?;
    tr.check(pr.meromorphic == in_zero, || format!("meromorphic: {}, σ_DR ⊆ {{0}}: {in_zero}", pr.meromorphic));
    if let Some(k) = pr.drazin_index_at_0 {
        let has = pr.poles.order_at(&ComplexValue::zero(), &tf)?.unwrap_or(0);
        tr.check(k == has, || format!("Drazin index at 0 is {k}, pole order {has}"));
    }

    let blocks = op.blocks()?;
    if blocks.len() > 1 {
        let mut union = SpectralSet::empty();
        for b in &blocks {
            union = union.union(&spectral_profile(&OperatorDesc::Block(b.clone()), &tf)?.drazin_spectrum, &tf);
        }
        tr.check(set_eq(&union, dr, &tf)?, || format!("σ_DR = {dr}, union over blocks = {union}"));
    }

    let adj = profile_of(tr, &OperatorDesc::adjoint(op.clone()))?;
    let pairs = [
        ("σ", &pr.sigma, &adj.sigma),
        ("iso", &pr.iso, &adj.iso),
        ("acc", &pr.acc, &adj.acc),
        ("σ_DR", dr, &adj.drazin_spectrum),
        ("IES", &pr.ies, &adj.ies),
        ("Π", pole, adj.poles.set()),
    ];
    for (name, s, t) in pairs {
        let c = s.conjugate();
        tr.check(set_eq(&c, t, &tf)?, || format!("{name}(T*) = {t}, conj {name}(T) = {c}"));
    }
    tr.check(adj.meromorphic == pr.meromorphic, || "meromorphy not preserved by the adjoint".into());
    tr.check(adj.algebraic.flag == pr.algebraic.flag, || "algebraicity not preserved by the adjoint".into());
    Ok(())
}
