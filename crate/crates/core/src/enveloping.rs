//! Arithmetic in the quotient `kM(X)/Id(T)` through normal forms, the
//! spanning set `Irr(T)`, and checks that the quotient is a Rota-Baxter
//! algebra receiving `g`.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{to_poly, AlgebraError, RbLieAlgebra};
use crate::rewrite::{Budget, RewriteError, Rewriter};
use crate::rules::RuleSystem;
use crate::sample::random_combination;
use crate::terms::{enumerate_words, Factor, Letter, Poly, Scalar, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnvelopingError {
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A coset, stored by its normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element(Poly);

impl Element {
    pub fn poly(&self) -> &Poly {
        &self.0
    }

    pub fn into_poly(self) -> Poly {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

pub struct Enveloping {
    rules: RuleSystem,
    budget: Budget,
}

impl Enveloping {
    pub fn new(rules: RuleSystem) -> Self {
        Self::with_budget(rules, Budget::default())
    }

    pub fn with_budget(rules: RuleSystem, budget: Budget) -> Self {
        Enveloping { rules, budget }
    }

    pub fn rules(&self) -> &RuleSystem {
        &self.rules
    }

    pub fn algebra(&self) -> &RbLieAlgebra {
        self.rules.algebra()
    }

    fn rewriter(&self) -> Rewriter<'_> {
        Rewriter::with_budget(&self.rules, self.budget)
    }

    /// The class of an arbitrary operated polynomial.
    pub fn element(&self, f: &Poly) -> Result<Element, RewriteError> {
        self.rewriter().normal_form(f).map(Element)
    }

    /// The image of a Lie element (a combination of basis letters).
    pub fn embed(&self, a: &Poly) -> Result<Element, EnvelopingError> {
        self.algebra().to_vector(a)?;
        Ok(self.element(a)?)
    }

    pub fn add(&self, a: &Element, b: &Element) -> Element {
        // a sum of irreducible words is irreducible
        Element(&a.0 + &b.0)
    }

    pub fn scalar_mul(&self, c: &Scalar, a: &Element) -> Element {
        Element(a.0.scale(c))
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element, RewriteError> {
        self.element(&(&a.0 * &b.0))
    }

    pub fn apply_rb(&self, a: &Element) -> Result<Element, RewriteError> {
        self.element(&a.0.bracket())
    }

    /// Words within bounds that no rule rewrites, ascending.
    pub fn enumerate_irr_basis(&self, max_degree: usize, max_depth: usize) -> Vec<Word> {
        enumerate_words(self.algebra().dim(), max_degree, max_depth)
            .into_iter()
            .filter(|w| !self.rules.is_reducible(w))
            .collect()
    }

    /// Checks the embedding identities on every basis letter and pair, and
    /// the associative and Rota-Baxter laws on `sample` seeded random
    /// triples of elements spanned by irreducible words of degree ≤ 3 and
    /// depth ≤ 2.
    pub fn verify_hom_properties(&self, sample: usize, seed: u64) -> HomReport {
        let g = self.algebra();
        let mut rw = self.rewriter();
        let mut report = HomReport::default();
        let letters: Vec<Letter> = g.letters().collect();
        let alphabet = g.alphabet();
        let name = |x: &Letter| alphabet.name(*x).to_string();
        let lw = |x: &Letter| Poly::from_word(Word::letter(*x));

        let mut commutator = Law::new("commutator = bracket");
        for x in &letters {
            for y in &letters {
                let lhs = rw.normal_form(&(&lw(x) * &lw(y) - &lw(y) * &lw(x)));
                let rhs = rw.normal_form(&to_poly(&g.bracket_letters(*x, *y)));
                commutator.record(lhs, rhs, || format!("({}, {})", name(x), name(y)));
            }
        }
        let mut operator = Law::new("operator restricts to P");
        for x in &letters {
            let lhs = rw.normal_form(&lw(x).bracket());
            let rhs = rw.normal_form(&to_poly(g.p_letter(*x)));
            operator.record(lhs, rhs, || name(x));
        }
        let mut injective = Law::new("letters stay distinct");
        let images: Vec<_> = letters.iter().map(|x| rw.normal_form(&lw(x))).collect();
        for (i, x) in letters.iter().enumerate() {
            for (j, y) in letters.iter().enumerate().skip(i + 1) {
                injective.checked += 1;
                match (&images[i], &images[j]) {
                    (Ok(a), Ok(b)) if a == b => {
                        injective
                            .violations
                            .push(format!("({}, {})", name(x), name(y)))
                    }
                    (Ok(_), Ok(_)) => {}
                    _ => injective.diverged += 1,
                }
            }
        }

        let pool = self.enumerate_irr_basis(3, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lambda = g.weight();
        let mut assoc = Law::new("associativity");
        let mut rota = Law::new("Rota-Baxter identity");
        for k in 0..sample {
            let a = random_combination(&mut rng, &pool, 3);
            let b = random_combination(&mut rng, &pool, 3);
            let c = random_combination(&mut rng, &pool, 3);
            let lhs = (|| {
                let ab = rw.normal_form(&(&a * &b))?;
                rw.normal_form(&(&ab * &c))
            })();
            let rhs = (|| {
                let bc = rw.normal_form(&(&b * &c))?;
                rw.normal_form(&(&a * &bc))
            })();
            assoc.record(lhs, rhs, || format!("triple #{k}"));

            let lhs = (|| {
                let pa = rw.normal_form(&a.bracket())?;
                let pb = rw.normal_form(&b.bracket())?;
                rw.normal_form(&(&pa * &pb))
            })();
            let rhs = (|| {
                let pa = rw.normal_form(&a.bracket())?;
                let pb = rw.normal_form(&b.bracket())?;
                let t1 = rw.normal_form(&(&a * &pb).bracket())?;
                let t2 = rw.normal_form(&(&pa * &b).bracket())?;
                let t3 = rw.normal_form(&(&a * &b).bracket())?;
                Ok(t1 + t2 + t3.scale(lambda))
            })();
            rota.record(lhs, rhs, || format!("pair #{k}"));
        }
        report.laws = vec![commutator, operator, injective, assoc, rota];
        report
    }
}

/// Outcome of one identity family.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Law {
    pub name: &'static str,
    pub checked: usize,
    /// Instances where both sides reduced but differ.
    pub violations: Vec<String>,
    /// Instances where some normal form ran out of budget.
    pub diverged: usize,
}

impl Law {
    fn new(name: &'static str) -> Self {
        Law {
            name,
            ..Law::default()
        }
    }

    fn record(
        &mut self,
        lhs: Result<Poly, RewriteError>,
        rhs: Result<Poly, RewriteError>,
        label: impl FnOnce() -> String,
    ) {
        self.checked += 1;
        match (lhs, rhs) {
            (Ok(l), Ok(r)) if l != r => self.violations.push(label()),
            (Ok(_), Ok(_)) => {}
            _ => self.diverged += 1,
        }
    }

    pub fn holds(&self) -> bool {
        self.violations.is_empty() && self.diverged == 0
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} checked, {} violated, {} diverged",
            self.name,
            self.checked,
            self.violations.len(),
            self.diverged
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HomReport {
    pub laws: Vec<Law>,
}

impl HomReport {
    pub fn holds(&self) -> bool {
        self.laws.iter().all(Law::holds)
    }
}

/// Whether `w` contains a subword of one of the six lead shapes of T,
/// decided from the algebra alone: `{x}`; `x y` with `x > y`; `{u}{v}`;
/// `z {u}`; `{u} z`; `z z'` where `z`, `z'` are leading letters of `P` of
/// some basis element. This is the description of the irreducible words of
/// T when `P` has no kernel, written independently of the rule matcher.
pub fn contains_leading_form(g: &RbLieAlgebra, w: &Word) -> bool {
    let mut is_lead = vec![false; g.dim()];
    for x in g.letters() {
        if let Some((z, _)) = g.p_letter(x).iter().next_back() {
            is_lead[z.index()] = true;
        }
    }
    fn walk(fs: &[Factor], is_lead: &[bool]) -> bool {
        let lead = |f: &Factor| matches!(f, Factor::Letter(z) if is_lead[z.index()]);
        let bracket = |f: &Factor| matches!(f, Factor::Bracket(_));
        for (i, f) in fs.iter().enumerate() {
            if let Factor::Bracket(inner) = f {
                if matches!(inner.factors(), [Factor::Letter(_)]) || walk(inner.factors(), is_lead)
                {
                    return true;
                }
            }
            let Some(next) = fs.get(i + 1) else { continue };
            let hit = match (f, next) {
                (Factor::Letter(x), Factor::Letter(y)) if x > y => true,
                _ if bracket(f) && bracket(next) => true,
                _ if lead(f) && bracket(next) => true,
                _ if bracket(f) && lead(next) => true,
                _ => lead(f) && lead(next),
            };
            if hit {
                return true;
            }
        }
        false
    }
    walk(w.factors(), &is_lead)
}
