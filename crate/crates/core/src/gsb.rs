//! Bounded Gröbner–Shirshov checking: enumerate every ambiguity up to a
//! degree/depth bound, form the composition, and reduce it.
//!
//! A composition is certified trivial when it reduces to zero. Anything else
//! is reported as non-reduced (with the residual) or diverged (the reduction
//! ran out of budget); neither is a proof of nontriviality.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::rewrite::{Budget, RewriteError, Rewriter, Trace};
use crate::rules::{Family, Occurrence, RuleInstance, RuleSet, RuleSystem};
use crate::terms::{enumerate_words_with_breadth, Context, Poly, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Intersection,
    Including,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Intersection => "intersection",
            Kind::Including => "including",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// `w = f̄ u = v ḡ`.
    Intersection { u: Word, v: Word },
    /// `w = f̄ = q|ḡ`.
    Including { context: Context },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionCase {
    pub kind: Kind,
    pub f: RuleInstance,
    pub g: RuleInstance,
    pub w: Word,
    pub witness: Witness,
    pub composition: Poly,
}

impl CompositionCase {
    pub fn pair(&self) -> PairKey {
        PairKey {
            kind: self.kind,
            f: self.f.id.family(),
            g: self.g.id.family(),
        }
    }

    /// Whether the composition's leading monomial fails to lie below `w`.
    /// The order is not bracket-compatible, so including compositions with
    /// a bracketed context can have terms above the ambiguity.
    pub fn order_violation(&self) -> bool {
        self.composition
            .leading_monomial()
            .is_some_and(|lead| *lead >= self.w)
    }

    /// Whether the case's shape is among the ambiguities tabulated for the
    /// six lead forms. Equal-lead pairs and rules added by completion never
    /// are.
    pub fn tabulated(&self) -> bool {
        use Family::*;
        let (f, g) = (self.f.id.family(), self.g.id.family());
        match &self.witness {
            Witness::Intersection { .. } => matches!(
                (f, g),
                (R2, R2)
                    | (R2, R4)
                    | (R2, R6)
                    | (R3, R3)
                    | (R3, R5)
                    | (R4, R3)
                    | (R4, R5)
                    | (R5, R2)
                    | (R5, R4)
                    | (R5, R6)
                    | (R6, R2)
                    | (R6, R4)
                    | (R6, R6)
            ),
            Witness::Including { context } => {
                !context.is_identity() && matches!(f, R3 | R4 | R5) && g != Added
            }
        }
    }
}

/// Counts are kept per (kind, family of f, family of g). For including
/// compositions `f` is the outer rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairKey {
    pub kind: Kind,
    pub f: Family,
    pub g: Family,
}

impl fmt::Display for PairKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})^({})", self.kind, self.f.form(), self.g.form())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Trivial,
    NonReduced { residual: Poly, trace: Trace },
    Diverged { error: RewriteError },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckedCase {
    pub case: CompositionCase,
    pub verdict: Verdict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub max_degree: usize,
    pub max_depth: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PairStats {
    pub cases: usize,
    pub trivial: usize,
    pub non_reduced: usize,
    pub diverged: usize,
}

#[derive(Clone, Debug)]
pub struct GsbReport {
    pub rules: RuleSet,
    pub bounds: Bounds,
    pub pairs: BTreeMap<PairKey, PairStats>,
    /// Non-reduced and diverged cases, in enumeration order.
    pub failures: Vec<CheckedCase>,
    pub order_violations: usize,
    pub untabulated: usize,
}

impl GsbReport {
    pub fn total(&self) -> usize {
        self.pairs.values().map(|s| s.cases).sum()
    }

    pub fn total_by_kind(&self, kind: Kind) -> usize {
        self.pairs
            .iter()
            .filter(|(k, _)| k.kind == kind)
            .map(|(_, s)| s.cases)
            .sum()
    }

    pub fn non_reduced(&self) -> usize {
        self.pairs.values().map(|s| s.non_reduced).sum()
    }

    pub fn diverged(&self) -> usize {
        self.pairs.values().map(|s| s.diverged).sum()
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn is_prefix(o: &Occurrence) -> bool {
    let frames = o.context.frames();
    frames.len() == 1 && frames[0].left.is_empty() && !frames[0].right.is_empty()
}

fn is_suffix(o: &Occurrence) -> bool {
    let frames = o.context.frames();
    frames.len() == 1 && !frames[0].left.is_empty() && frames[0].right.is_empty()
}

/// All ambiguities whose word is exactly `w`.
pub fn cases_for_word(rules: &RuleSystem, w: &Word) -> Vec<CompositionCase> {
    let occs = rules.occurrences(w);
    let mut out = Vec::new();
    for f in occs.iter().filter(|o| o.context.is_identity()) {
        for g in &occs {
            if g.context.is_identity() && g.rule.id == f.rule.id {
                continue;
            }
            out.push(CompositionCase {
                kind: Kind::Including,
                f: f.rule.clone(),
                g: g.rule.clone(),
                w: w.clone(),
                witness: Witness::Including {
                    context: g.context.clone(),
                },
                composition: &f.rule.polynomial - &g.context.substitute_poly(&g.rule.polynomial),
            });
        }
    }
    for f in occs.iter().filter(|o| is_prefix(o)) {
        for g in occs.iter().filter(|o| is_suffix(o)) {
            let (bf, bg) = (f.rule.lead.breadth(), g.rule.lead.breadth());
            if bf + bg <= w.breadth() {
                continue;
            }
            debug_assert!(bf.max(bg) < w.breadth() && w.breadth() < bf + bg);
            let u = Word::from_factors(f.context.frames()[0].right.clone());
            let v = Word::from_factors(g.context.frames()[0].left.clone());
            let composition =
                f.rule.polynomial.mul_word_right(&u) - g.rule.polynomial.mul_word_left(&v);
            out.push(CompositionCase {
                kind: Kind::Intersection,
                f: f.rule.clone(),
                g: g.rule.clone(),
                w: w.clone(),
                witness: Witness::Intersection { u, v },
                composition,
            });
        }
    }
    out
}

/// Candidate ambiguity words: every word within bounds short enough to be an
/// overlap of two leads.
fn candidate_words(rules: &RuleSystem, bounds: Bounds) -> Vec<Word> {
    let b = rules.max_lead_breadth();
    enumerate_words_with_breadth(
        rules.algebra().dim(),
        bounds.max_degree,
        bounds.max_depth,
        (2 * b).saturating_sub(1).max(b),
    )
}

/// Every ambiguity within bounds, ordered by ambiguity word, then including
/// before intersection, then occurrence order.
pub fn enumerate_ambiguities(rules: &RuleSystem, bounds: Bounds) -> Vec<CompositionCase> {
    candidate_words(rules, bounds)
        .iter()
        .flat_map(|w| cases_for_word(rules, w))
        .collect()
}

pub fn check_case(rw: &mut Rewriter<'_>, case: CompositionCase) -> CheckedCase {
    let (result, trace) = rw.normal_form_traced(&case.composition);
    let verdict = match result {
        Ok(r) if r.is_zero() => Verdict::Trivial,
        Ok(residual) => Verdict::NonReduced { residual, trace },
        Err(error) => Verdict::Diverged { error },
    };
    CheckedCase { case, verdict }
}

#[derive(Default)]
struct Partial {
    pairs: Vec<(PairKey, Outcome)>,
    failures: Vec<CheckedCase>,
    order_violations: usize,
    untabulated: usize,
}

#[derive(Clone, Copy)]
enum Outcome {
    Trivial,
    NonReduced,
    Diverged,
}

fn check_word(rw: &mut Rewriter<'_>, w: &Word) -> Partial {
    let mut p = Partial::default();
    for case in cases_for_word(rw.rules(), w) {
        p.order_violations += usize::from(case.order_violation());
        p.untabulated += usize::from(!case.tabulated());
        let key = case.pair();
        let checked = check_case(rw, case);
        let outcome = match checked.verdict {
            Verdict::Trivial => Outcome::Trivial,
            Verdict::NonReduced { .. } => Outcome::NonReduced,
            Verdict::Diverged { .. } => Outcome::Diverged,
        };
        p.pairs.push((key, outcome));
        if !matches!(outcome, Outcome::Trivial) {
            p.failures.push(checked);
        }
    }
    p
}

/// Checks every ambiguity within `bounds` on `jobs` worker threads. The
/// report does not depend on `jobs`.
pub fn check_gsb(rules: &RuleSystem, bounds: Bounds, budget: Budget, jobs: usize) -> GsbReport {
    let words = candidate_words(rules, bounds);
    let work = || -> Vec<Partial> {
        words
            .par_iter()
            .map_init(
                || Rewriter::with_budget(rules, budget),
                |rw, w| check_word(rw, w),
            )
            .collect()
    };
    let partials = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool")
        .install(work);

    let mut report = GsbReport {
        rules: rules.set(),
        bounds,
        pairs: BTreeMap::new(),
        failures: Vec::new(),
        order_violations: 0,
        untabulated: 0,
    };
    for p in partials {
        for (key, outcome) in p.pairs {
            let s = report.pairs.entry(key).or_default();
            s.cases += 1;
            match outcome {
                Outcome::Trivial => s.trivial += 1,
                Outcome::NonReduced => s.non_reduced += 1,
                Outcome::Diverged => s.diverged += 1,
            }
        }
        report.failures.extend(p.failures);
        report.order_violations += p.order_violations;
        report.untabulated += p.untabulated;
    }
    report
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeStatus {
    /// A round added nothing.
    Fixpoint,
    /// Every round added rules.
    RoundsExhausted,
    /// Some composition could not be reduced within budget, so completion
    /// cannot continue soundly.
    Diverged,
}

#[derive(Clone, Debug)]
pub struct ProbeResult {
    pub status: ProbeStatus,
    pub rounds: usize,
    /// Monic rules added, in order of discovery.
    pub added: Vec<Poly>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProbeError {
    #[error("max_rounds must be at least 1")]
    NoRounds,
}

/// Completion by saturation: add the residual of every non-reduced
/// composition as a new rule until a round adds nothing.
pub fn completion_probe(
    rules: &RuleSystem,
    bounds: Bounds,
    budget: Budget,
    max_rounds: usize,
    jobs: usize,
) -> Result<ProbeResult, ProbeError> {
    if max_rounds == 0 {
        return Err(ProbeError::NoRounds);
    }
    let first = check_gsb(rules, bounds, budget, jobs);
    completion_probe_from(rules, first, budget, max_rounds, jobs)
}

/// [`completion_probe`] with its first round taken from an existing
/// `check_gsb` report on `rules`.
pub fn completion_probe_from(
    rules: &RuleSystem,
    first_round: GsbReport,
    budget: Budget,
    max_rounds: usize,
    jobs: usize,
) -> Result<ProbeResult, ProbeError> {
    if max_rounds == 0 {
        return Err(ProbeError::NoRounds);
    }
    let bounds = first_round.bounds;
    let mut current = rules.clone();
    let mut added: Vec<Poly> = Vec::new();
    let mut next = Some(first_round);
    for round in 1..=max_rounds {
        let report = match next.take() {
            Some(r) => r,
            None => check_gsb(&current, bounds, budget, jobs),
        };
        let mut fresh = BTreeSet::new();
        let mut diverged = false;
        for c in &report.failures {
            match &c.verdict {
                Verdict::NonReduced { residual, .. } => {
                    let m = residual.monic();
                    if !added.contains(&m) {
                        fresh.insert(PolyKey(m));
                    }
                }
                Verdict::Diverged { .. } => diverged = true,
                Verdict::Trivial => {}
            }
        }
        let progressed = !fresh.is_empty();
        for PolyKey(m) in fresh {
            current.add_rule(&m).expect("residuals are nonzero");
            added.push(m);
        }
        let status = if diverged {
            Some(ProbeStatus::Diverged)
        } else if !progressed {
            Some(ProbeStatus::Fixpoint)
        } else {
            None
        };
        if let Some(status) = status {
            return Ok(ProbeResult {
                status,
                rounds: round,
                added,
            });
        }
    }
    Ok(ProbeResult {
        status: ProbeStatus::RoundsExhausted,
        rounds: max_rounds,
        added,
    })
}

/// Orders polynomials by lead first so added rules come out deterministically.
#[derive(PartialEq, Eq)]
struct PolyKey(Poly);

impl Ord for PolyKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.iter().cmp(other.0.iter())
    }
}

impl PartialOrd for PolyKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::{PMode, RbLieAlgebra};

    fn system(text: &str, set: RuleSet, mode: PMode) -> RuleSystem {
        RuleSystem::new(Arc::new(RbLieAlgebra::parse(text).unwrap()), set, mode).unwrap()
    }

    const ABELIAN1: &str = "weight = 0\nbasis = x\nP x = x\n";
    const NULL3: &str = "weight = 0\nbasis = x, y, z\nbracket y x = z\n";

    fn b(max_degree: usize, max_depth: usize) -> Bounds {
        Bounds {
            max_degree,
            max_depth,
        }
    }

    #[test]
    fn zero_bounds_are_vacuous() {
        let rules = system(ABELIAN1, RuleSet::T, PMode::Strict);
        let r = check_gsb(&rules, b(0, 0), Budget::default(), 1);
        assert_eq!(r.total(), 0);
        assert!(r.passed());
    }

    #[test]
    fn degree_two_has_no_r1_r3_overlap() {
        let rules = system(ABELIAN1, RuleSet::T, PMode::Strict);
        let a = rules.alphabet();
        let cases = enumerate_ambiguities(&rules, b(2, 2));
        let target = a.parse_word("{x} {}").unwrap();
        assert!(cases.iter().all(|c| c.w != target));
        assert!(cases.iter().all(|c| c.w.degree() <= 2));
    }

    #[test]
    fn descending_triple_needs_three_letters() {
        let two = system(
            "weight = 0\nbasis = x, y\n",
            RuleSet::T,
            PMode::AllowDegenerate,
        );
        let r22 = |rules: &RuleSystem| {
            enumerate_ambiguities(rules, b(4, 1))
                .into_iter()
                .filter(|c| {
                    c.kind == Kind::Intersection
                        && c.f.id.family() == Family::R2
                        && c.g.id.family() == Family::R2
                })
                .count()
        };
        assert_eq!(r22(&two), 0);
        let three = system(NULL3, RuleSet::T, PMode::AllowDegenerate);
        let a = three.alphabet();
        let zyx = a.parse_word("z y x").unwrap();
        assert_eq!(r22(&three), 1);
        assert!(enumerate_ambiguities(&three, b(4, 1))
            .iter()
            .any(|c| c.w == zyx));
    }

    #[test]
    fn s_fails_on_bracket_times_bracketed_square() {
        let rules = system(ABELIAN1, RuleSet::S, PMode::Strict);
        let a = rules.alphabet();
        let target = a.parse_word("{x} {x x}").unwrap();
        let cases: Vec<_> = enumerate_ambiguities(&rules, b(5, 1))
            .into_iter()
            .filter(|c| c.w == target)
            .collect();
        // R3 outer with R1 inside at {*} {x x}
        assert!(cases
            .iter()
            .any(|c| matches!(&c.witness, Witness::Including { context }
            if a.context(context).to_string() == "* {x x}")));
        let r = check_gsb(&rules, b(5, 1), Budget::default(), 2);
        assert!(!r.passed());
        let hit = r
            .failures
            .iter()
            .find(|c| c.case.w == target)
            .expect("listed");
        match &hit.verdict {
            Verdict::NonReduced { residual, .. } => assert!(!residual.is_zero()),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn equal_lead_pairs_are_included() {
        // with P = id, R2(x, y) and R6(x, y) share the lead x y
        let rules = system(
            "weight = -1\nbasis = y, x\nbracket x y = y\nP x = x\nP y = y\n",
            RuleSet::T,
            PMode::Strict,
        );
        let a = rules.alphabet();
        let xy = a.parse_word("x y").unwrap();
        let cases: Vec<_> = enumerate_ambiguities(&rules, b(2, 0))
            .into_iter()
            .filter(|c| c.w == xy)
            .collect();
        assert_eq!(cases.len(), 2);
        assert!(cases
            .iter()
            .all(|c| c.kind == Kind::Including && !c.tabulated()));
    }

    #[test]
    fn compositions_cancel_the_ambiguity() {
        let rules = system(ABELIAN1, RuleSet::T, PMode::Strict);
        for c in enumerate_ambiguities(&rules, b(5, 2)) {
            assert!(!c.composition.contains(&c.w));
            if let Witness::Intersection { u, v } = &c.witness {
                assert_eq!(c.f.lead.concat(u), c.w);
                assert_eq!(v.concat(&c.g.lead), c.w);
            }
        }
    }

    #[test]
    fn zero_operator_leaves_bracket_sandwiches_unreduced() {
        // P(x) = 0 puts {x {v}} and {{u} x} in the ideal, hence also
        // {{u} x {v}}, which no rule of T rewrites
        let rules = system(NULL3, RuleSet::T, PMode::AllowDegenerate);
        let a = rules.alphabet();
        let r = check_gsb(&rules, b(4, 2), Budget::default(), 2);
        assert_eq!(r.diverged(), 0);
        assert_eq!(r.non_reduced(), 6);
        for c in &r.failures {
            let Verdict::NonReduced { residual, .. } = &c.verdict else {
                panic!("expected a residual");
            };
            let name = a.name(match &c.case.g.id {
                crate::rules::RuleId::R4(x, _) | crate::rules::RuleId::R5(_, x) => *x,
                other => panic!("unexpected {other:?}"),
            });
            assert_eq!(a.format_poly(residual), format!("-{{{{}} {name} {{}}}}"));
        }
    }

    #[test]
    fn report_independent_of_jobs() {
        let rules = system(ABELIAN1, RuleSet::S, PMode::Strict);
        let one = check_gsb(&rules, b(5, 2), Budget::default(), 1);
        let four = check_gsb(&rules, b(5, 2), Budget::default(), 4);
        assert_eq!(one.pairs, four.pairs);
        assert_eq!(one.failures, four.failures);
    }

    #[test]
    fn probe_rejects_zero_rounds() {
        let rules = system(ABELIAN1, RuleSet::S, PMode::Strict);
        assert_eq!(
            completion_probe(&rules, b(2, 1), Budget::default(), 0, 1).unwrap_err(),
            ProbeError::NoRounds
        );
    }

    #[test]
    fn probe_adds_rules_for_s() {
        let rules = system(ABELIAN1, RuleSet::S, PMode::Strict);
        let r = completion_probe(&rules, b(5, 1), Budget::default(), 1, 1).unwrap();
        assert!(!r.added.is_empty());
        assert_eq!(r.rounds, 1);
    }

    #[test]
    fn probe_adds_sandwich_rules_for_zero_operator() {
        let rules = system(NULL3, RuleSet::T, PMode::AllowDegenerate);
        let a = rules.alphabet();
        let r = completion_probe(&rules, b(4, 2), Budget::default(), 3, 2).unwrap();
        assert_eq!(r.status, ProbeStatus::Fixpoint);
        let added: Vec<String> = r.added.iter().map(|f| a.format_poly(f)).collect();
        assert_eq!(added, ["{{} x {}}", "{{} y {}}", "{{} z {}}"]);
        assert_eq!(r.rounds, 2);
    }
}
