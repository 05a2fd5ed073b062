//! Reduction of operated polynomials modulo a [`RuleSystem`].
//!
//! Every step rewrites the greatest reducible monomial of the whole
//! polynomial with the first occurrence in scan order. Two budgets bound a
//! call: a step count, and a cap on how far the degree of any monomial may
//! rise above the input's largest degree. The order is not compatible with
//! the bracket, so some rule sets (T with `P != 0` among them) admit infinite
//! reduction sequences; those all raise the degree and trip the second
//! budget quickly.

use std::collections::HashSet;
use std::fmt::Write as _;

use rand::Rng;
use thiserror::Error;

use crate::rules::{Occurrence, RuleSystem};
use crate::terms::{Alphabet, Poly, Scalar, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_steps: usize,
    /// Largest allowed degree of any monomial, as an excess over the input's
    /// largest degree.
    pub max_degree_growth: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_steps: 1_000_000,
            max_degree_growth: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("reduction did not terminate within {limit} steps")]
    StepBudget { limit: usize },
    #[error("reduction produced a monomial of degree {degree}, above the limit {limit}; the rewriting does not terminate on this input")]
    DegreeBudget { degree: usize, limit: usize },
}

/// One rewriting step: `coeff * word` was replaced using `occurrence`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub word: Word,
    pub coeff: Scalar,
    pub occurrence: Occurrence,
    /// Number of terms after the step.
    pub size: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Trace {
    pub steps: Vec<Step>,
}

impl Trace {
    /// One line per step: `R4(x, {}) @ * : x {} -> 3 terms`.
    pub fn render(&self, alphabet: &Alphabet) -> String {
        let mut out = String::new();
        for s in &self.steps {
            let _ = writeln!(
                out,
                "{} @ {} : {} -> {} term{}",
                s.occurrence.rule.id.display(alphabet),
                alphabet.context(&s.occurrence.context),
                alphabet.word(&s.word),
                s.size,
                if s.size == 1 { "" } else { "s" }
            );
        }
        out
    }
}

/// Memoizes irreducible words across calls; not shared between threads.
pub struct Rewriter<'r> {
    rules: &'r RuleSystem,
    budget: Budget,
    irreducible: HashSet<Word>,
}

const CACHE_LIMIT: usize = 1 << 20;

impl<'r> Rewriter<'r> {
    pub fn new(rules: &'r RuleSystem) -> Self {
        Self::with_budget(rules, Budget::default())
    }

    pub fn with_budget(rules: &'r RuleSystem, budget: Budget) -> Self {
        Rewriter {
            rules,
            budget,
            irreducible: HashSet::new(),
        }
    }

    pub fn rules(&self) -> &'r RuleSystem {
        self.rules
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    fn first_occurrence(&mut self, w: &Word) -> Option<Occurrence> {
        if self.irreducible.contains(w) {
            return None;
        }
        let occ = self.rules.first_occurrence(w);
        if occ.is_none() {
            if self.irreducible.len() >= CACHE_LIMIT {
                self.irreducible.clear();
            }
            self.irreducible.insert(w.clone());
        }
        occ
    }

    pub fn is_irreducible(&mut self, w: &Word) -> bool {
        self.first_occurrence(w).is_none()
    }

    /// The greatest reducible monomial of `f` and its first occurrence.
    fn greatest_reducible(&mut self, f: &Poly) -> Option<(Word, Occurrence)> {
        for w in f.words() {
            if let Some(occ) = self.first_occurrence(w) {
                return Some((w.clone(), occ));
            }
        }
        None
    }

    fn apply(f: &mut Poly, w: Word, occurrence: Occurrence) -> Step {
        let coeff = f.coeff(&w);
        let replaced = occurrence
            .context
            .substitute_poly(&occurrence.rule.polynomial)
            .scale(&coeff);
        *f -= &replaced;
        Step {
            word: w,
            coeff,
            occurrence,
            size: f.len(),
        }
    }

    /// One step on the greatest reducible monomial; `None` if `f` is
    /// irreducible.
    pub fn reduce_once(&mut self, f: &Poly) -> Option<(Poly, Step)> {
        let (w, occ) = self.greatest_reducible(f)?;
        let mut g = f.clone();
        let step = Self::apply(&mut g, w, occ);
        Some((g, step))
    }

    pub fn normal_form(&mut self, f: &Poly) -> Result<Poly, RewriteError> {
        self.run(f, &mut |_| {})
    }

    pub fn normal_form_traced(&mut self, f: &Poly) -> (Result<Poly, RewriteError>, Trace) {
        let mut trace = Trace::default();
        let r = self.run(f, &mut |s| trace.steps.push(s));
        (r, trace)
    }

    /// Whether `f` lies in the ideal, read off as `NF(f) = 0`.
    pub fn ideal_member(&mut self, f: &Poly) -> Result<bool, RewriteError> {
        Ok(self.normal_form(f)?.is_zero())
    }

    fn degree_limit(&self, f: &Poly) -> usize {
        f.max_degree() + self.budget.max_degree_growth
    }

    fn check(&self, f: &Poly, steps: usize, limit: usize) -> Result<(), RewriteError> {
        if steps > self.budget.max_steps {
            return Err(RewriteError::StepBudget {
                limit: self.budget.max_steps,
            });
        }
        let degree = f.max_degree();
        if degree > limit {
            return Err(RewriteError::DegreeBudget { degree, limit });
        }
        Ok(())
    }

    fn run(&mut self, f: &Poly, on_step: &mut dyn FnMut(Step)) -> Result<Poly, RewriteError> {
        let limit = self.degree_limit(f);
        let mut f = f.clone();
        let mut steps = 0;
        while let Some((w, occ)) = self.greatest_reducible(&f) {
            steps += 1;
            let step = Self::apply(&mut f, w, occ);
            on_step(step);
            self.check(&f, steps, limit)?;
        }
        Ok(f)
    }

    /// Reduction with a random reducible monomial and a random occurrence
    /// at every step.
    pub fn normal_form_random<R: Rng>(
        &mut self,
        f: &Poly,
        rng: &mut R,
    ) -> Result<Poly, RewriteError> {
        let limit = self.degree_limit(f);
        let mut f = f.clone();
        let mut steps = 0;
        loop {
            let words: Vec<Word> = f.words().cloned().collect();
            let reducible: Vec<Word> = words
                .into_iter()
                .filter(|w| !self.is_irreducible(w))
                .collect();
            if reducible.is_empty() {
                return Ok(f);
            }
            let w = reducible[rng.gen_range(0..reducible.len())].clone();
            let mut occs = self.rules.occurrences(&w);
            let occ = occs.swap_remove(rng.gen_range(0..occs.len()));
            steps += 1;
            Self::apply(&mut f, w, occ);
            self.check(&f, steps, limit)?;
        }
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::algebra::{PMode, RbLieAlgebra};
    use crate::rules::RuleSet;

    fn system(text: &str, set: RuleSet, mode: PMode) -> RuleSystem {
        RuleSystem::new(Arc::new(RbLieAlgebra::parse(text).unwrap()), set, mode).unwrap()
    }

    const ABELIAN1: &str = "weight = 0\nbasis = x\nP x = x\n";
    const AFFINE: &str = "weight = -1\nbasis = y, x\nbracket x y = y\nP x = x\nP y = y\n";
    const NULL2: &str = "weight = -1\nbasis = y, x\nbracket x y = y\n";

    #[test]
    fn single_r1_step() {
        let rules = system(ABELIAN1, RuleSet::T, PMode::Strict);
        let a = rules.alphabet();
        let mut rw = Rewriter::new(&rules);
        let (g, step) = rw.reduce_once(&a.parse_poly("{x}").unwrap()).unwrap();
        assert_eq!(g, a.parse_poly("x").unwrap());
        assert_eq!(step.word, a.parse_word("{x}").unwrap());
        assert_eq!(
            rw.normal_form(&a.parse_poly("{x}").unwrap()).unwrap(),
            a.parse_poly("x").unwrap()
        );
    }

    #[test]
    fn square_is_reducible_via_form_vi() {
        // x x = ld(P(x)) ld(P(x)) rewrites to 2 {x x}
        let rules = system(ABELIAN1, RuleSet::T, PMode::Strict);
        let a = rules.alphabet();
        let mut rw = Rewriter::new(&rules);
        let (g, _) = rw.reduce_once(&a.parse_poly("x x").unwrap()).unwrap();
        assert_eq!(g, a.parse_poly("2*{x x}").unwrap());
    }

    #[test]
    fn first_step_on_product_of_brackets_eliminates_it() {
        let rules = system(ABELIAN1, RuleSet::T, PMode::Strict);
        let a = rules.alphabet();
        let mut rw = Rewriter::new(&rules);
        let f = a.parse_poly("{x} {x}").unwrap();
        let (g, step) = rw.reduce_once(&f).unwrap();
        assert!(!g.contains(&step.word));
        assert!(g.words().all(|w| *w < step.word));
    }

    #[test]
    fn t_with_identity_operator_does_not_terminate() {
        let rules = system(ABELIAN1, RuleSet::T, PMode::Strict);
        let a = rules.alphabet();
        let mut rw = Rewriter::new(&rules);
        for src in ["{x} {x}", "x x", "x {}"] {
            let err = rw.normal_form(&a.parse_poly(src).unwrap()).unwrap_err();
            assert!(
                matches!(err, RewriteError::DegreeBudget { .. }),
                "{src}: {err}"
            );
        }
        let rules = system(AFFINE, RuleSet::T, PMode::Strict);
        let a = rules.alphabet();
        let mut rw = Rewriter::new(&rules);
        let (g, _) = rw.reduce_once(&a.parse_poly("x y").unwrap()).unwrap();
        assert_eq!(g, a.parse_poly("y x + y").unwrap());
        assert!(rw.normal_form(&a.parse_poly("x y").unwrap()).is_err());
    }

    #[test]
    fn s_reduction_of_bracket_square() {
        // R1 comes first in scan order, so the product of brackets goes to x x
        let rules = system(ABELIAN1, RuleSet::S, PMode::Strict);
        let a = rules.alphabet();
        let mut rw = Rewriter::new(&rules);
        assert_eq!(
            rw.normal_form(&a.parse_poly("{x} {x}").unwrap()).unwrap(),
            a.parse_poly("x x").unwrap()
        );
        // while the R3-first path ends at 2 {x x}
        let r3 = rules.occurrences(&a.parse_word("{x} {x}").unwrap())[1].clone();
        let mut f = a.parse_poly("{x} {x}").unwrap();
        f -= &r3.context.substitute_poly(&r3.rule.polynomial);
        assert_eq!(
            rw.normal_form(&f).unwrap(),
            a.parse_poly("2*{x x}").unwrap()
        );
    }

    #[test]
    fn degenerate_affine_normal_forms() {
        let rules = system(NULL2, RuleSet::T, PMode::AllowDegenerate);
        let a = rules.alphabet();
        let mut rw = Rewriter::new(&rules);
        let nf = |rw: &mut Rewriter, s: &str| {
            a.format_poly(&rw.normal_form(&a.parse_poly(s).unwrap()).unwrap())
        };
        assert_eq!(nf(&mut rw, "x y"), "y x + y");
        assert_eq!(nf(&mut rw, "0"), "0");
        assert_eq!(nf(&mut rw, "{x}"), "0");
        // {x} {y} -> {x {y}} + {{x} y} + {x y} -> ... ; P = 0 kills every R1 tail
        assert_eq!(nf(&mut rw, "{x} {y}"), "0");
        assert_eq!(nf(&mut rw, "{} {}"), "2*{{}} - {}");
    }

    #[test]
    fn trace_lines() {
        let rules = system(NULL2, RuleSet::T, PMode::AllowDegenerate);
        let a = rules.alphabet();
        let mut rw = Rewriter::new(&rules);
        let (r, trace) = rw.normal_form_traced(&a.parse_poly("x y").unwrap());
        assert_eq!(a.format_poly(&r.unwrap()), "y x + y");
        assert_eq!(trace.render(a), "R2(x, y) @ * : x y -> 2 terms\n");
    }

    #[test]
    fn ideal_membership() {
        let rules = system(NULL2, RuleSet::T, PMode::AllowDegenerate);
        let a = rules.alphabet();
        let mut rw = Rewriter::new(&rules);
        assert!(rw
            .ideal_member(&a.parse_poly("x y - y x - y").unwrap())
            .unwrap());
        assert!(!rw.ideal_member(&a.parse_poly("x").unwrap()).unwrap());
        for w in crate::terms::enumerate_words(2, 4, 2) {
            for o in rules.occurrences(&w) {
                assert!(rw.ideal_member(&o.rule.polynomial).unwrap());
            }
        }
    }

    #[test]
    fn step_budget_is_reported() {
        let rules = system(ABELIAN1, RuleSet::T, PMode::Strict);
        let a = rules.alphabet();
        let mut rw = Rewriter::with_budget(
            &rules,
            Budget {
                max_steps: 3,
                max_degree_growth: 1000,
            },
        );
        assert_eq!(
            rw.normal_form(&a.parse_poly("x x").unwrap()),
            Err(RewriteError::StepBudget { limit: 3 })
        );
    }

    #[test]
    fn random_strategy_matches_on_terminating_system() {
        let rules = system(NULL2, RuleSet::T, PMode::AllowDegenerate);
        let a = rules.alphabet();
        let mut rw = Rewriter::new(&rules);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for src in ["x y x", "{x} {y} x", "{} {} {}", "x {y x} y"] {
            let f = a.parse_poly(src).unwrap();
            let det = rw.normal_form(&f).unwrap();
            for _ in 0..5 {
                assert_eq!(rw.normal_form_random(&f, &mut rng).unwrap(), det, "{src}");
            }
        }
    }
}
