//! Seeded property suites behind `darboux selftest`, plus the random
//! generators they use.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bell::{
    bell_complete, bell_complete_det, bell_number, derivative_args, negated_derivative_args,
};
use crate::combinat::binomial;
use crate::darboux::{verify_darboux_gauge_covariance, DarbouxQuadruple};
use crate::invariants::{
    frame_restricted_coefficients, invariants_bell, invariants_omega, p_op,
    verify_gauge_invariance, InvariantSet, PArgument,
};
use crate::operators::{GaugeParameter, LaplaceOperator, LinearDiffOperator, NormalizedM};
use crate::ring::{DiffPolynomial, Dir, JetVariable, Monomial, Rational, Symbol};
use crate::textio::{format_operator, parse_operator};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small nonzero-denominator rational in `[-9, 9] / [1, 5]`.
pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    Rational::new(
        rng.gen_range(-9i64..=9).into(),
        rng.gen_range(1i64..=5).into(),
    )
}

/// Random polynomial over jets of `symbols` with derivative order at most
/// `jet_order`.
pub fn random_poly<R: Rng>(
    rng: &mut R,
    symbols: &[&str],
    max_terms: usize,
    max_degree: u32,
    jet_order: u32,
) -> DiffPolynomial {
    let terms = rng.gen_range(0..=max_terms);
    let mut p = DiffPolynomial::zero();
    for _ in 0..terms {
        let degree = rng.gen_range(0..=max_degree);
        let factors = (0..degree).map(|_| {
            let name = symbols[rng.gen_range(0..symbols.len())];
            let nx = rng.gen_range(0..=jet_order);
            let ny = rng.gen_range(0..=jet_order - nx);
            (JetVariable::new(Symbol::from(name), nx, ny), 1)
        });
        let m = Monomial::from_factors(factors.collect::<Vec<_>>());
        p += &DiffPolynomial::term(random_rational(rng), m);
    }
    p
}

/// Random operator of total order at most `max_order` with small
/// coefficients in the jets of `a`, `b`, `c`.
pub fn random_operator<R: Rng>(rng: &mut R, max_order: u32) -> LinearDiffOperator {
    let mut terms = Vec::new();
    for i in 0..=max_order {
        for j in 0..=max_order - i {
            if rng.gen_bool(0.4) {
                terms.push(((i, j), random_poly(rng, &["a", "b", "c"], 2, 2, 1)));
            }
        }
    }
    LinearDiffOperator::from_terms(terms)
}

/// Random point binding every jet in `jets`.
pub fn random_point<R: Rng>(
    rng: &mut R,
    jets: &BTreeSet<JetVariable>,
) -> BTreeMap<JetVariable, Rational> {
    jets.iter()
        .map(|v| (v.clone(), random_rational(rng)))
        .collect()
}

/// Checks gauge invariance of the generic order-`d` invariant set at random
/// exact-rational jet values.
///
/// The invariants are computed once symbolically; the gauged pair enters
/// only through the values of its coefficients' jets, so each point tests
/// `I(L, M) = I(L^g, M^g)` without expanding the gauged invariants.
pub struct NumericInvarianceCheck {
    invariants: InvariantSet,
    // jet of the original pair -> the same jet of the gauged pair
    gauged_jets: BTreeMap<JetVariable, DiffPolynomial>,
    needed: BTreeSet<JetVariable>,
}

impl NumericInvarianceCheck {
    pub fn new(d: u32) -> Self {
        let l = LaplaceOperator::generic();
        let m = NormalizedM::generic(d);
        let alpha = GaugeParameter::default();
        let lg = l.gauge_action(&alpha);
        let mg = m.gauge_conjugate(&alpha);
        let mut gauged = BTreeMap::from([
            (Symbol::new("a"), lg.a),
            (Symbol::new("b"), lg.b),
            (Symbol::new("c"), lg.c),
        ]);
        for i in -(d as i64)..=d as i64 {
            gauged.insert(Symbol::indexed("m", i), mg.coefficient(i).clone());
        }
        let invariants = invariants_bell(&l, &m);
        let jets: BTreeSet<JetVariable> = invariants
            .entries()
            .iter()
            .flat_map(|(_, p)| p.jets())
            .collect();
        let mut needed = jets.clone();
        let mut gauged_jets = BTreeMap::new();
        for v in jets {
            let g = gauged[&v.symbol].derivative(v.nx, v.ny);
            needed.extend(g.jets());
            gauged_jets.insert(v, g);
        }
        NumericInvarianceCheck {
            invariants,
            gauged_jets,
            needed,
        }
    }

    /// Labels of the invariants whose two values disagree at one random
    /// point.
    pub fn failures_at_random_point<R: Rng>(&self, rng: &mut R) -> Vec<String> {
        let point = random_point(rng, &self.needed);
        let gauged_point: BTreeMap<JetVariable, Rational> = self
            .gauged_jets
            .iter()
            .map(|(v, g)| {
                (
                    v.clone(),
                    g.evaluate(&point).expect("point binds every jet"),
                )
            })
            .collect();
        self.invariants
            .entries()
            .into_iter()
            .filter(|(_, p)| {
                p.evaluate(&point).expect("bound") != p.evaluate(&gauged_point).expect("bound")
            })
            .map(|(label, _)| label)
            .collect()
    }
}

/// Result of one property suite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    pub failures: Vec<String>,
}

impl CheckReport {
    fn new(name: &'static str) -> Self {
        CheckReport {
            name,
            passed: 0,
            failed: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            self.failures.push(what());
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Debug, Clone)]
pub struct SelftestConfig {
    /// Bound on `d` for the symbolic identities.
    pub max_order: u32,
    /// Bound on `d` for the randomized numeric invariance check.
    pub numeric_max_order: u32,
    pub seed: u64,
    pub random_cases: usize,
    pub numeric_points: usize,
}

impl SelftestConfig {
    pub fn new(max_order: u32, seed: u64) -> Self {
        SelftestConfig {
            max_order,
            numeric_max_order: max_order + 4,
            seed,
            random_cases: 200,
            numeric_points: 20,
        }
    }
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig::new(6, 0)
    }
}

fn ring_axioms(cfg: &SelftestConfig, rng: &mut TestRng) -> CheckReport {
    let mut report = CheckReport::new("ring axioms and derivations");
    let syms = ["a", "b", "c"];
    for case in 0..cfg.random_cases {
        let p = random_poly(rng, &syms, 4, 3, 2);
        let q = random_poly(rng, &syms, 4, 3, 2);
        let r = random_poly(rng, &syms, 4, 3, 2);
        let ok = &(&p * &q) * &r == &p * &(&q * &r)
            && &p * &q == &q * &p
            && &p + &q == &q + &p
            && &p * &(&q + &r) == &(&p * &q) + &(&p * &r)
            && p.total_derivative(Dir::X).total_derivative(Dir::Y)
                == p.total_derivative(Dir::Y).total_derivative(Dir::X)
            && (&p * &q).total_derivative(Dir::X)
                == &(&p.total_derivative(Dir::X) * &q) + &(&p * &q.total_derivative(Dir::X));
        report.record(ok, || format!("case {case}"));
    }
    report
}

fn symbols(prefix: &str, n: usize) -> Vec<DiffPolynomial> {
    (1..=n)
        .map(|i| DiffPolynomial::symbol(&format!("{prefix}{i}")))
        .collect()
}

fn count_set_partitions(n: usize) -> u64 {
    // restricted growth strings
    fn walk(pos: usize, n: usize, max_block: usize) -> u64 {
        if pos == n {
            return 1;
        }
        (0..=max_block + 1)
            .map(|b| walk(pos + 1, n, max_block.max(b)))
            .sum()
    }
    if n == 0 {
        1
    } else {
        walk(1, n, 0)
    }
}

fn bell_identities(_cfg: &SelftestConfig) -> CheckReport {
    let mut report = CheckReport::new("Bell determinant and Bell numbers");
    let xs = symbols("x", 8);
    for n in 1..=8 {
        let ok = bell_complete(n, &xs) == bell_complete_det(n, &xs);
        report.record(ok, || format!("determinant n={n}"));
    }
    for n in 0..=8 {
        let ok = bell_number(n) == count_set_partitions(n).into();
        report.record(ok, || format!("Bell number n={n}"));
    }
    let l = LaplaceOperator::generic();
    for w in 1..=8u32 {
        for (f, arg, dir) in [(&l.b, PArgument::B, Dir::X), (&l.a, PArgument::A, Dir::Y)] {
            let args = negated_derivative_args(f, dir, w as usize);
            let ok = bell_complete(w as usize, &args).as_ref() == Ok(&p_op(&l, arg, w));
            report.record(ok, || format!("Bell/Omega bridge w={w}"));
        }
    }
    report
}

fn theorem_forms(cfg: &SelftestConfig) -> CheckReport {
    let mut report = CheckReport::new("Bell form equals Omega form");
    let l = LaplaceOperator::generic();
    for d in 1..=cfg.max_order.max(8) {
        let m = NormalizedM::generic(d);
        let (bell, omega) = (invariants_bell(&l, &m), invariants_omega(&l, &m));
        report.record(bell == omega, || {
            format!("d={d}: {:?}", bell.differing_entries(&omega))
        });
    }
    report
}

fn symbolic_invariance(cfg: &SelftestConfig) -> CheckReport {
    let mut report = CheckReport::new("symbolic gauge invariance");
    let l = LaplaceOperator::generic();
    let alpha = GaugeParameter::default();
    for d in 1..=cfg.max_order {
        let ok = verify_gauge_invariance(&l, &NormalizedM::generic(d), &alpha);
        report.record(ok, || format!("d={d}"));
    }
    report
}

fn numeric_invariance(cfg: &SelftestConfig, rng: &mut TestRng) -> CheckReport {
    let mut report = CheckReport::new("randomized gauge invariance");
    for d in 1..=cfg.numeric_max_order {
        let check = NumericInvarianceCheck::new(d);
        for point in 0..cfg.numeric_points {
            let bad = check.failures_at_random_point(rng);
            report.record(bad.is_empty(), || format!("d={d} point {point}: {bad:?}"));
        }
    }
    report
}

fn conjugation_identity(_cfg: &SelftestConfig) -> CheckReport {
    let mut report = CheckReport::new("conjugation equals Bell formula");
    let alpha = GaugeParameter::default();
    let args = derivative_args(&alpha.jet(0, 0), Dir::X, 8);
    for i in 0..=8u32 {
        let mi = DiffPolynomial::symbol(&format!("m[{i}]"));
        let conj = LinearDiffOperator::term(mi.clone(), i, 0).gauge_conjugate(&alpha);
        for k in 0..=i {
            let bell = bell_complete((i - k) as usize, &args).expect("enough arguments");
            let expected =
                (&mi * &bell).scale(&Rational::from_integer(binomial(i as usize, k as usize)));
            report.record(conj.coefficient(k, 0) == expected, || {
                format!("i={i} k={k}")
            });
        }
    }
    report
}

fn frame_replay(cfg: &SelftestConfig) -> CheckReport {
    let mut report = CheckReport::new("frame restriction replays the invariants");
    let l = LaplaceOperator::generic();
    let alpha = GaugeParameter::default();
    for d in 1..=cfg.max_order {
        let m = NormalizedM::generic(d);
        let set = invariants_bell(&l, &m);
        let ok = frame_restricted_coefficients(&l, &m, &alpha).is_ok_and(|r| r == set.r);
        report.record(ok, || format!("d={d}"));
    }
    report
}

/// `(Dy + a)` intertwining `L = (Dx + b)(Dy + a)` with
/// `L1 = Dx Dy + a Dx + b Dy + (ab + b_y)`.
pub fn factorization_quadruple() -> DarbouxQuadruple {
    let l = parse_operator("Dx*Dy + a*Dx + b*Dy + a*b + a_x").expect("valid");
    let l1 = parse_operator("Dx*Dy + a*Dx + b*Dy + a*b + b_y").expect("valid");
    let m = parse_operator("Dy + a").expect("valid");
    DarbouxQuadruple::new(m.clone(), l, l1, m).expect("Laplace symbols")
}

fn random_laplace<R: Rng>(rng: &mut R) -> LinearDiffOperator {
    let a = random_poly(rng, &["a", "b", "c"], 2, 2, 1);
    let b = random_poly(rng, &["a", "b", "c"], 2, 2, 1);
    let c = random_poly(rng, &["a", "b", "c"], 2, 2, 1);
    LaplaceOperator::new(a, b, c).to_operator()
}

/// Random quadruple with `N`, `M` of order at most 2 and `L`, `L1` of
/// Laplace shape with random lower-order coefficients.
pub fn random_quadruple<R: Rng>(rng: &mut R) -> DarbouxQuadruple {
    let l = random_laplace(rng);
    let l1 = random_laplace(rng);
    DarbouxQuadruple::new(random_operator(rng, 2), l, l1, random_operator(rng, 2))
        .expect("Laplace symbols")
}

fn darboux_checks(cfg: &SelftestConfig, rng: &mut TestRng) -> CheckReport {
    let mut report = CheckReport::new("Darboux residuals and gauge covariance");
    let alpha = GaugeParameter::default();
    let l = LaplaceOperator::generic().to_operator();
    let trivial =
        DarbouxQuadruple::new(l.clone(), l.clone(), l.clone(), l).expect("Laplace symbols");
    report.record(trivial.is_darboux(), || "trivial quadruple".into());
    let fact = factorization_quadruple();
    report.record(fact.is_darboux(), || "factorization quadruple".into());
    report.record(verify_darboux_gauge_covariance(&fact, &alpha), || {
        "factorization covariance".into()
    });
    for case in 0..cfg.random_cases / 10 {
        let q = random_quadruple(rng);
        report.record(verify_darboux_gauge_covariance(&q, &alpha), || {
            format!("random quadruple {case}")
        });
    }
    report
}

fn round_trip(cfg: &SelftestConfig, rng: &mut TestRng) -> CheckReport {
    let mut report = CheckReport::new("parse/format round trip");
    for case in 0..cfg.random_cases {
        let op = random_operator(rng, 6);
        let text = format_operator(&op);
        let ok = parse_operator(&text).as_ref() == Ok(&op);
        report.record(ok, || format!("case {case}: {text}"));
    }
    report
}

/// Runs every suite in a fixed order with one RNG seeded from `cfg.seed`.
pub fn run_selftest(cfg: &SelftestConfig) -> Vec<CheckReport> {
    let mut rng = rng(cfg.seed);
    vec![
        ring_axioms(cfg, &mut rng),
        bell_identities(cfg),
        conjugation_identity(cfg),
        theorem_forms(cfg),
        frame_replay(cfg),
        symbolic_invariance(cfg),
        numeric_invariance(cfg, &mut rng),
        darboux_checks(cfg, &mut rng),
        round_trip(cfg, &mut rng),
    ]
}
