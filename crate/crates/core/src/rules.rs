//! The rewriting systems S and T, their monic rule instances, and matching of
//! rule leads inside bracketed words.
//!
//! T consists of six families:
//!
//! | family | element                                   | lead            |
//! |--------|-------------------------------------------|-----------------|
//! | R1(x)  | ⌊x⌋ − P(x)                                | ⌊x⌋             |
//! | R2(x,y)| xy − yx − [x,y], x > y                    | xy              |
//! | R3(u,v)| ⌊u⌋⌊v⌋ − ⌊u⌊v⌋⌋ − ⌊⌊u⌋v⌋ − λ⌊uv⌋          | ⌊u⌋⌊v⌋          |
//! | R4(x,u)| P(x)⌊u⌋ − ⌊x⌊u⌋⌋ − ⌊P(x)u⌋ − λ⌊xu⌋        | ld(P(x))⌊u⌋     |
//! | R5(u,x)| ⌊u⌋P(x) − ⌊uP(x)⌋ − ⌊⌊u⌋x⌋ − λ⌊ux⌋        | ⌊u⌋ld(P(x))     |
//! | R6(x,y)| P(x)P(y) − ⌊xP(y)⌋ − ⌊P(x)y⌋ − λ⌊xy⌋      | ld(P(x))ld(P(y))|
//!
//! and S is R1–R3. R3–R5 are schematic in the words `u`, `v` and are only
//! ever instantiated for a concrete match.
//!
//! When `P(x) = 0` (only admitted with [`PMode::AllowDegenerate`]) the
//! R4–R6 elements involving `x` lose their `P(x)` part; they are built from
//! the raw element and keep whatever leading monomial the order assigns.

use std::fmt;
use std::ops::ControlFlow;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{to_poly, PMode, RbLieAlgebra};
use crate::terms::{Alphabet, Context, Factor, Frame, Letter, Poly, Scalar, Word};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleSet {
    S,
    #[default]
    T,
}

impl fmt::Display for RuleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RuleSet::S => "S",
            RuleSet::T => "T",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    /// Rules added by completion.
    Added,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::R1,
        Family::R2,
        Family::R3,
        Family::R4,
        Family::R5,
        Family::R6,
        Family::Added,
    ];

    /// Roman numeral of the family's lead form, `i` through `vi`.
    pub fn form(self) -> &'static str {
        match self {
            Family::R1 => "i",
            Family::R2 => "ii",
            Family::R3 => "iii",
            Family::R4 => "iv",
            Family::R5 => "v",
            Family::R6 => "vi",
            Family::Added => "added",
        }
    }

    /// The family whose leads are the opposite words of this family's leads.
    pub fn opposite(self) -> Family {
        match self {
            Family::R4 => Family::R5,
            Family::R5 => Family::R4,
            other => other,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Added => f.write_str("added"),
            other => write!(f, "R{}", *other as u8 + 1),
        }
    }
}

/// A rule family together with its parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleId {
    R1(Letter),
    R2(Letter, Letter),
    R3(Word, Word),
    R4(Letter, Word),
    R5(Word, Letter),
    R6(Letter, Letter),
    Added(usize),
}

impl RuleId {
    pub fn family(&self) -> Family {
        match self {
            RuleId::R1(..) => Family::R1,
            RuleId::R2(..) => Family::R2,
            RuleId::R3(..) => Family::R3,
            RuleId::R4(..) => Family::R4,
            RuleId::R5(..) => Family::R5,
            RuleId::R6(..) => Family::R6,
            RuleId::Added(..) => Family::Added,
        }
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        RuleIdDisplay { id: self, alphabet }
    }
}

struct RuleIdDisplay<'a> {
    id: &'a RuleId,
    alphabet: &'a Alphabet,
}

impl fmt::Display for RuleIdDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = self.alphabet;
        let l = |x: &Letter| a.name(*x).to_string();
        let w = |u: &Word| a.format_word(u);
        match self.id {
            RuleId::R1(x) => write!(f, "R1({})", l(x)),
            RuleId::R2(x, y) => write!(f, "R2({}, {})", l(x), l(y)),
            RuleId::R3(u, v) => write!(f, "R3({}, {})", w(u), w(v)),
            RuleId::R4(x, u) => write!(f, "R4({}, {})", l(x), w(u)),
            RuleId::R5(u, x) => write!(f, "R5({}, {})", w(u), l(x)),
            RuleId::R6(x, y) => write!(f, "R6({}, {})", l(x), l(y)),
            RuleId::Added(k) => write!(f, "added#{k}"),
        }
    }
}

/// A monic rule: `lead -> -tail`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleInstance {
    pub id: RuleId,
    pub polynomial: Poly,
    pub lead: Word,
    /// `polynomial - lead`.
    pub tail: Poly,
}

impl RuleInstance {
    fn from_monic(id: RuleId, polynomial: Poly) -> Self {
        let lead = polynomial
            .leading_monomial()
            .expect("monic rules are nonzero")
            .clone();
        let tail = polynomial.tail();
        RuleInstance {
            id,
            polynomial,
            lead,
            tail,
        }
    }
}

/// A place in a word where a rule's lead occurs: `context|lead` is the word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Occurrence {
    pub context: Context,
    pub rule: RuleInstance,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("P({0}) = 0, so ld(P({0})) is undefined (use --allow-degenerate-p to admit kernels)")]
    DegenerateP(String),
    #[error("{0}: parameters are not valid for this family")]
    BadParameters(String),
    #[error("{0}: the rule element vanishes")]
    Vanishes(String),
    #[error(
        "{rule}: computed leading monomial {actual} differs from the family's form {expected}"
    )]
    Inconsistent {
        rule: String,
        expected: String,
        actual: String,
    },
    #[error("added rule {0} has no leading monomial")]
    ZeroRule(usize),
}

/// A location found while scanning a word, before the rule is instantiated.
pub struct Site<'a> {
    /// Enclosing levels, outermost first: each level's factors and the
    /// position of the bracket that leads one level deeper.
    path: &'a [(&'a [Factor], usize)],
    level: &'a [Factor],
    start: usize,
    len: usize,
    pub id: RuleId,
}

impl Site<'_> {
    pub fn context(&self) -> Context {
        let mut frames: Vec<Frame> = self
            .path
            .iter()
            .map(|(lvl, j)| Frame {
                left: lvl[..*j].to_vec(),
                right: lvl[j + 1..].to_vec(),
            })
            .collect();
        frames.push(Frame {
            left: self.level[..self.start].to_vec(),
            right: self.level[self.start + self.len..].to_vec(),
        });
        Context::from_frames(frames)
    }

    /// Number of brackets enclosing the matched lead.
    pub fn depth(&self) -> usize {
        self.path.len()
    }
}

/// The rules of S or T for one algebra, plus any rules added by completion.
#[derive(Clone, Debug)]
pub struct RuleSystem {
    algebra: Arc<RbLieAlgebra>,
    set: RuleSet,
    mode: PMode,
    /// `ld(P(x))`, `None` on the kernel.
    ld_p: Vec<Option<Letter>>,
    /// `z -> {x : ld(P(x)) = z}`, ascending.
    preimages: Vec<Vec<Letter>>,
    kernel: Vec<bool>,
    /// R6 instances involving a kernel letter, matched literally.
    concrete: Vec<RuleInstance>,
    added: Vec<RuleInstance>,
}

impl RuleSystem {
    pub fn new(algebra: Arc<RbLieAlgebra>, set: RuleSet, mode: PMode) -> Result<Self, RuleError> {
        let n = algebra.dim();
        let mut ld_p = vec![None; n];
        let mut preimages = vec![Vec::new(); n];
        let mut kernel = vec![false; n];
        for x in algebra.letters() {
            match algebra.p_letter(x).iter().next_back() {
                Some((z, _)) => {
                    ld_p[x.index()] = Some(*z);
                    preimages[z.index()].push(x);
                }
                None => {
                    if set == RuleSet::T && mode == PMode::Strict {
                        return Err(RuleError::DegenerateP(
                            algebra.alphabet().name(x).to_string(),
                        ));
                    }
                    kernel[x.index()] = true;
                }
            }
        }
        let mut system = RuleSystem {
            algebra,
            set,
            mode,
            ld_p,
            preimages,
            kernel,
            concrete: Vec::new(),
            added: Vec::new(),
        };
        if set == RuleSet::T {
            for x in system.algebra.letters() {
                for y in system.algebra.letters() {
                    if system.kernel[x.index()] || system.kernel[y.index()] {
                        let id = RuleId::R6(x, y);
                        let raw = system.raw_element(&id)?;
                        if !raw.is_zero() {
                            system
                                .concrete
                                .push(RuleInstance::from_monic(id, raw.monic()));
                        }
                    }
                }
            }
        }
        Ok(system)
    }

    pub fn algebra(&self) -> &RbLieAlgebra {
        &self.algebra
    }

    pub fn algebra_arc(&self) -> &Arc<RbLieAlgebra> {
        &self.algebra
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.algebra.alphabet()
    }

    pub fn set(&self) -> RuleSet {
        self.set
    }

    pub fn mode(&self) -> PMode {
        self.mode
    }

    /// `ld(P(x))`, or `None` if `P(x) = 0`.
    pub fn ld_p(&self, x: Letter) -> Option<Letter> {
        self.ld_p[x.index()]
    }

    /// `{x : ld(P(x)) = z}`.
    pub fn preimages(&self, z: Letter) -> &[Letter] {
        &self.preimages[z.index()]
    }

    pub fn added(&self) -> &[RuleInstance] {
        &self.added
    }

    /// Appends `f`, made monic, as a new rule. Returns its id.
    pub fn add_rule(&mut self, f: &Poly) -> Result<RuleId, RuleError> {
        let k = self.added.len();
        if f.is_zero() {
            return Err(RuleError::ZeroRule(k));
        }
        let id = RuleId::Added(k);
        self.added
            .push(RuleInstance::from_monic(id.clone(), f.monic()));
        Ok(id)
    }

    /// The largest breadth of any rule lead.
    pub fn max_lead_breadth(&self) -> usize {
        self.concrete
            .iter()
            .chain(&self.added)
            .map(|r| r.lead.breadth())
            .fold(2, usize::max)
    }

    fn check_letter(&self, x: Letter) -> bool {
        x.index() < self.algebra.dim()
    }

    fn p(&self, x: Letter) -> Poly {
        to_poly(self.algebra.p_letter(x))
    }

    /// The element of S or T named by `id` before division by its leading
    /// coefficient.
    pub fn raw_element(&self, id: &RuleId) -> Result<Poly, RuleError> {
        let bad = || RuleError::BadParameters(self.describe(id));
        let letters_ok = match id {
            RuleId::R1(x) | RuleId::R4(x, _) | RuleId::R5(_, x) => self.check_letter(*x),
            RuleId::R2(x, y) => self.check_letter(*x) && self.check_letter(*y) && x > y,
            RuleId::R6(x, y) => self.check_letter(*x) && self.check_letter(*y),
            RuleId::R3(..) => true,
            RuleId::Added(k) => *k < self.added.len(),
        };
        if !letters_ok {
            return Err(bad());
        }
        if self.set == RuleSet::S && matches!(id.family(), Family::R4 | Family::R5 | Family::R6) {
            return Err(bad());
        }
        let lambda = self.algebra.weight();
        let w = |x: &Letter| Poly::from_word(Word::letter(*x));
        let b = |f: Poly| f.bracket();
        Ok(match id {
            RuleId::R1(x) => b(w(x)) - self.p(*x),
            RuleId::R2(x, y) => {
                let xy = Poly::from_word(Word::letters([*x, *y]));
                let yx = Poly::from_word(Word::letters([*y, *x]));
                xy - yx - to_poly(&self.algebra.bracket_letters(*x, *y))
            }
            RuleId::R3(u, v) => raw_r3(
                &Poly::from_word(u.clone()),
                &Poly::from_word(v.clone()),
                lambda,
            ),
            RuleId::R4(x, u) => {
                let bu = Poly::from_word(Word::bracket(u.clone()));
                let u = Poly::from_word(u.clone());
                let px = self.p(*x);
                &px * &bu - b(&w(x) * &bu) - b(&px * &u) - b(&w(x) * &u).scale(lambda)
            }
            RuleId::R5(u, x) => {
                let bu = Poly::from_word(Word::bracket(u.clone()));
                let u = Poly::from_word(u.clone());
                let px = self.p(*x);
                &bu * &px - b(&u * &px) - b(&bu * &w(x)) - b(&u * &w(x)).scale(lambda)
            }
            RuleId::R6(x, y) => {
                let (px, py) = (self.p(*x), self.p(*y));
                &px * &py - b(&w(x) * &py) - b(&px * &w(y)) - b(&w(x) * &w(y)).scale(lambda)
            }
            RuleId::Added(k) => self.added[*k].polynomial.clone(),
        })
    }

    /// The lead dictated by the family's form, when it is known in advance.
    fn expected_lead(&self, id: &RuleId) -> Option<Word> {
        let l = |x: &Letter| Factor::Letter(*x);
        let br = |u: &Word| Factor::Bracket(u.clone());
        Some(match id {
            RuleId::R1(x) => Word::bracket(Word::letter(*x)),
            RuleId::R2(x, y) => Word::letters([*x, *y]),
            RuleId::R3(u, v) => Word::from_factors(vec![br(u), br(v)]),
            RuleId::R4(x, u) => match self.ld_p(*x) {
                Some(z) => Word::from_factors(vec![l(&z), br(u)]),
                None => Word::bracket(Word::from_factors(vec![l(x), br(u)])),
            },
            RuleId::R5(u, x) => match self.ld_p(*x) {
                Some(z) => Word::from_factors(vec![br(u), l(&z)]),
                None => Word::bracket(Word::from_factors(vec![br(u), l(x)])),
            },
            RuleId::R6(x, y) => Word::letters([self.ld_p(*x)?, self.ld_p(*y)?]),
            RuleId::Added(_) => return None,
        })
    }

    /// The monic rule named by `id`, checked against its family's lead form.
    pub fn instantiate(&self, id: &RuleId) -> Result<RuleInstance, RuleError> {
        if let RuleId::Added(k) = id {
            return self
                .added
                .get(*k)
                .cloned()
                .ok_or_else(|| RuleError::BadParameters(self.describe(id)));
        }
        let raw = self.raw_element(id)?;
        if raw.is_zero() {
            return Err(RuleError::Vanishes(self.describe(id)));
        }
        let poly = raw.monic();
        let rule = RuleInstance::from_monic(id.clone(), poly);
        if let Some(expected) = self.expected_lead(id) {
            if expected != rule.lead {
                return Err(RuleError::Inconsistent {
                    rule: self.describe(id),
                    expected: self.alphabet().format_word(&expected),
                    actual: self.alphabet().format_word(&rule.lead),
                });
            }
        }
        Ok(rule)
    }

    pub fn describe(&self, id: &RuleId) -> String {
        id.display(self.alphabet()).to_string()
    }

    /// Calls `emit(id, len)` for every rule whose lead is `level[i..i + len]`,
    /// in family order, then parameter order.
    fn matches_at(
        &self,
        level: &[Factor],
        i: usize,
        emit: &mut dyn FnMut(RuleId, usize) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let a = &level[i];
        let b = level.get(i + 1);
        let inner = a.as_bracket().map(Word::factors);

        if let Some([Factor::Letter(x)]) = inner {
            emit(RuleId::R1(*x), 1)?;
        }
        if let (Factor::Letter(x), Some(Factor::Letter(y))) = (a, b) {
            if x > y {
                emit(RuleId::R2(*x, *y), 2)?;
            }
        }
        if let (Factor::Bracket(u), Some(Factor::Bracket(v))) = (a, b) {
            emit(RuleId::R3(u.clone(), v.clone()), 2)?;
        }
        if self.set == RuleSet::T {
            if let (Factor::Letter(z), Some(Factor::Bracket(u))) = (a, b) {
                for x in self.preimages(*z) {
                    emit(RuleId::R4(*x, u.clone()), 2)?;
                }
            }
            if let Some([Factor::Letter(x), Factor::Bracket(u)]) = inner {
                if self.kernel[x.index()] {
                    emit(RuleId::R4(*x, u.clone()), 1)?;
                }
            }
            if let (Factor::Bracket(u), Some(Factor::Letter(z))) = (a, b) {
                for x in self.preimages(*z) {
                    emit(RuleId::R5(u.clone(), *x), 2)?;
                }
            }
            if let Some([Factor::Bracket(u), Factor::Letter(x)]) = inner {
                if self.kernel[x.index()] {
                    emit(RuleId::R5(u.clone(), *x), 1)?;
                }
            }
            if let (Factor::Letter(z1), Some(Factor::Letter(z2))) = (a, b) {
                for x in self.preimages(*z1) {
                    for y in self.preimages(*z2) {
                        emit(RuleId::R6(*x, *y), 2)?;
                    }
                }
            }
            for r in &self.concrete {
                if level[i..].starts_with(r.lead.factors()) {
                    emit(r.id.clone(), r.lead.breadth())?;
                }
            }
        }
        for r in &self.added {
            let n = r.lead.breadth();
            // a unit lead would match everywhere; completion never produces one
            if n > 0 && level[i..].starts_with(r.lead.factors()) {
                emit(r.id.clone(), n)?;
            }
        }
        ControlFlow::Continue(())
    }

    fn scan<'w>(
        &self,
        level: &'w [Factor],
        path: &mut Vec<(&'w [Factor], usize)>,
        visit: &mut dyn FnMut(&Site<'_>) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        for i in 0..level.len() {
            if let Factor::Bracket(inner) = &level[i] {
                path.push((level, i));
                let r = self.scan(inner.factors(), path, visit);
                path.pop();
                r?;
            }
            let outer: &[(&[Factor], usize)] = path;
            self.matches_at(level, i, &mut |id, len| {
                visit(&Site {
                    path: outer,
                    level,
                    start: i,
                    len,
                    id,
                })
            })?;
        }
        ControlFlow::Continue(())
    }

    /// Visits every match in `w` in the deterministic scan order: positions
    /// left to right; at each position, matches inside a bracket there come
    /// before matches starting at the position itself.
    pub fn visit_sites(&self, w: &Word, visit: &mut dyn FnMut(&Site<'_>) -> ControlFlow<()>) {
        let mut path = Vec::new();
        let _ = self.scan(w.factors(), &mut path, visit);
    }

    fn occurrence(&self, site: &Site<'_>) -> Occurrence {
        let rule = self
            .instantiate(&site.id)
            .unwrap_or_else(|e| panic!("matched rule failed to instantiate: {e}"));
        Occurrence {
            context: site.context(),
            rule,
        }
    }

    /// Every occurrence of a rule lead in `w`, in scan order.
    pub fn occurrences(&self, w: &Word) -> Vec<Occurrence> {
        let mut out = Vec::new();
        self.visit_sites(w, &mut |site| {
            out.push(self.occurrence(site));
            ControlFlow::Continue(())
        });
        out
    }

    pub fn first_occurrence(&self, w: &Word) -> Option<Occurrence> {
        let mut out = None;
        self.visit_sites(w, &mut |site| {
            out = Some(self.occurrence(site));
            ControlFlow::Break(())
        });
        out
    }

    pub fn is_reducible(&self, w: &Word) -> bool {
        let mut found = false;
        self.visit_sites(w, &mut |_| {
            found = true;
            ControlFlow::Break(())
        });
        found
    }
}

/// `⌊u⌋⌊v⌋ − ⌊u⌊v⌋⌋ − ⌊⌊u⌋v⌋ − λ⌊uv⌋`, extended bilinearly.
/// The R4–R6 elements of `id` rebuilt from R1 and R3 elements only, which
/// shows they already lie in the ideal of S:
///
/// ```text
/// r4(x,u) = r3(x,u) − r1(x)⌊u⌋ + ⌊r1(x)u⌋
/// r5(u,x) = r3(u,x) − ⌊u⌋r1(x) + ⌊u r1(x)⌋
/// r6(x,y) = r3(x,y) − r1(x)⌊y⌋ − ⌊x⌋r1(y) + r1(x)r1(y) + ⌊x r1(y)⌋ + ⌊r1(x)y⌋
/// ```
///
/// `None` for the other families.
pub fn expressed_through_s(g: &RbLieAlgebra, id: &RuleId) -> Option<Poly> {
    let lambda = g.weight();
    let w = |x: &Letter| Poly::from_word(Word::letter(*x));
    let r1 = |x: &Letter| w(x).bracket() - to_poly(g.p_letter(*x));
    Some(match id {
        RuleId::R4(x, u) => {
            let u = Poly::from_word(u.clone());
            raw_r3(&w(x), &u, lambda) - &r1(x) * &u.bracket() + (&r1(x) * &u).bracket()
        }
        RuleId::R5(u, x) => {
            let u = Poly::from_word(u.clone());
            raw_r3(&u, &w(x), lambda) - &u.bracket() * &r1(x) + (&u * &r1(x)).bracket()
        }
        RuleId::R6(x, y) => {
            raw_r3(&w(x), &w(y), lambda) - &r1(x) * &w(y).bracket() - &w(x).bracket() * &r1(y)
                + &r1(x) * &r1(y)
                + (&w(x) * &r1(y)).bracket()
                + (&r1(x) * &w(y)).bracket()
        }
        _ => return None,
    })
}

pub fn raw_r3(u: &Poly, v: &Poly, lambda: &Scalar) -> Poly {
    let (bu, bv) = (u.bracket(), v.bracket());
    &bu * &bv - (u * &bv).bracket() - (&bu * v).bracket() - (u * v).bracket().scale(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn load(text: &str) -> Arc<RbLieAlgebra> {
        Arc::new(RbLieAlgebra::parse(text).unwrap())
    }

    fn abelian1() -> RuleSystem {
        RuleSystem::new(
            load("weight = 0\nbasis = x\nP x = x\n"),
            RuleSet::T,
            PMode::Strict,
        )
        .unwrap()
    }

    fn affine() -> RuleSystem {
        let g = load("weight = -1\nbasis = y, x\nbracket x y = y\nP x = x\nP y = y\n");
        RuleSystem::new(g, RuleSet::T, PMode::Strict).unwrap()
    }

    #[test]
    fn t_elements_lie_in_the_ideal_of_s() {
        let rules = affine();
        let a = rules.alphabet();
        let (x, y) = (a.lookup("x").unwrap(), a.lookup("y").unwrap());
        for u in ["1", "x", "y {x}", "{{y} x}"] {
            let u = a.parse_word(u).unwrap();
            for id in [RuleId::R4(x, u.clone()), RuleId::R5(u.clone(), y)] {
                assert_eq!(
                    expressed_through_s(rules.algebra(), &id),
                    Some(rules.raw_element(&id).unwrap())
                );
            }
        }
        let id = RuleId::R6(y, x);
        assert_eq!(
            expressed_through_s(rules.algebra(), &id),
            Some(rules.raw_element(&id).unwrap())
        );
        assert_eq!(expressed_through_s(rules.algebra(), &RuleId::R1(x)), None);
    }

    fn id_of(rules: &RuleSystem, s: &str) -> RuleId {
        // tiny helper: "R1 x", "R2 x y", ...
        let a = rules.alphabet();
        let parts: Vec<&str> = s.split(' ').collect();
        let l = |i: usize| a.lookup(parts[i]).unwrap();
        match parts[0] {
            "R1" => RuleId::R1(l(1)),
            "R2" => RuleId::R2(l(1), l(2)),
            "R6" => RuleId::R6(l(1), l(2)),
            _ => unreachable!(),
        }
    }

    #[test]
    fn r1_identity_operator() {
        let rules = abelian1();
        let r = rules.instantiate(&id_of(&rules, "R1 x")).unwrap();
        let a = rules.alphabet();
        assert_eq!(r.polynomial, a.parse_poly("{x} - x").unwrap());
        assert_eq!(r.lead, a.parse_word("{x}").unwrap());
        assert_eq!(r.tail, a.parse_poly("-x").unwrap());
    }

    #[test]
    fn r2_affine() {
        let rules = affine();
        let r = rules.instantiate(&id_of(&rules, "R2 x y")).unwrap();
        let a = rules.alphabet();
        assert_eq!(r.polynomial, a.parse_poly("x y - y x - y").unwrap());
        assert_eq!(r.lead, a.parse_word("x y").unwrap());
        assert!(rules.instantiate(&id_of(&rules, "R2 y x")).is_err());
    }

    #[test]
    fn r6_identity_operator_weight_minus_one() {
        let rules = affine();
        let r = rules.instantiate(&id_of(&rules, "R6 x y")).unwrap();
        let a = rules.alphabet();
        assert_eq!(r.polynomial, a.parse_poly("x y - {x y}").unwrap());
        assert_eq!(r.lead, a.parse_word("x y").unwrap());
    }

    #[test]
    fn r4_r6_are_divided_by_leading_coefficients() {
        let g = load("weight = 0\nbasis = x, y\nP x = 2*x + 3*y\nP y = 1/2*x\n");
        let rules = RuleSystem::new(g, RuleSet::T, PMode::Strict).unwrap();
        let a = rules.alphabet();
        let (x, y) = (a.lookup("x").unwrap(), a.lookup("y").unwrap());
        assert_eq!(rules.ld_p(x), Some(y));
        assert_eq!(rules.ld_p(y), Some(x));
        let r4 = rules.instantiate(&RuleId::R4(x, Word::unit())).unwrap();
        assert_eq!(r4.lead, a.parse_word("y {}").unwrap());
        assert_eq!(r4.polynomial.leading_coeff(), Some(&Scalar::one()));
        let r6 = rules.instantiate(&RuleId::R6(x, y)).unwrap();
        assert_eq!(r6.lead, a.parse_word("y x").unwrap());
        // (2x+3y)(x/2) / (3 * 1/2)
        assert_eq!(
            r6.polynomial.coeff(&a.parse_word("x x").unwrap()),
            Scalar::new(2.into(), 3.into())
        );
    }

    #[test]
    fn strict_mode_rejects_kernel_for_t_only() {
        let g = load("weight = 0\nbasis = x, y\nP x = x\n");
        assert_eq!(
            RuleSystem::new(g.clone(), RuleSet::T, PMode::Strict).unwrap_err(),
            RuleError::DegenerateP("y".into())
        );
        assert!(RuleSystem::new(g.clone(), RuleSet::S, PMode::Strict).is_ok());
        assert!(RuleSystem::new(g, RuleSet::T, PMode::AllowDegenerate).is_ok());
    }

    #[test]
    fn degenerate_leads() {
        let g = load("weight = -1\nbasis = x, y\n");
        let rules = RuleSystem::new(g, RuleSet::T, PMode::AllowDegenerate).unwrap();
        let a = rules.alphabet();
        let (x, y) = (a.lookup("x").unwrap(), a.lookup("y").unwrap());
        let r4 = rules.instantiate(&RuleId::R4(x, Word::letter(y))).unwrap();
        assert_eq!(r4.polynomial, a.parse_poly("{x {y}} - {x y}").unwrap());
        let r5 = rules.instantiate(&RuleId::R5(Word::unit(), x)).unwrap();
        assert_eq!(r5.polynomial, a.parse_poly("{{} x} - {x}").unwrap());
        // R6 with P = 0 leaves -λ⌊xy⌋
        let r6 = rules.instantiate(&RuleId::R6(y, x)).unwrap();
        assert_eq!(r6.polynomial, a.parse_poly("{y x}").unwrap());
        let occ = rules.occurrences(&a.parse_word("x {y x}").unwrap());
        let ids: Vec<String> = occ.iter().map(|o| rules.describe(&o.rule.id)).collect();
        assert_eq!(ids, ["R2(y, x)", "R6(y, x)"]);
        // bracket-free words are untouched apart from R2
        assert!(!rules.is_reducible(&a.parse_word("x x y").unwrap()));
        assert!(rules.is_reducible(&a.parse_word("y x").unwrap()));
    }

    #[test]
    fn degenerate_weight_zero_drops_vanishing_r6() {
        let g = load("weight = 0\nbasis = x\n");
        let rules = RuleSystem::new(g, RuleSet::T, PMode::AllowDegenerate).unwrap();
        let x = Letter(0);
        assert!(matches!(
            rules.instantiate(&RuleId::R6(x, x)),
            Err(RuleError::Vanishes(_))
        ));
        assert!(!rules.is_reducible(&rules.alphabet().parse_word("{x x}").unwrap()));
    }

    #[test]
    fn occurrence_of_r1() {
        let rules = abelian1();
        let w = rules.alphabet().parse_word("{x}").unwrap();
        let occ = rules.occurrences(&w);
        assert_eq!(occ.len(), 1);
        assert_eq!(occ[0].rule.id, RuleId::R1(Letter(0)));
        assert!(occ[0].context.is_identity());
    }

    #[test]
    fn square_inside_bracket_matches_form_vi() {
        // with P = id, ld(P(x)) ld(P(x)) = x x, so {x x} is reducible via R6
        let rules = abelian1();
        let a = rules.alphabet();
        let w = a.parse_word("{x x}").unwrap();
        let occ = rules.occurrences(&w);
        assert_eq!(occ.len(), 1);
        assert_eq!(occ[0].rule.id, RuleId::R6(Letter(0), Letter(0)));
        assert_eq!(a.context(&occ[0].context).to_string(), "{*}");
    }

    #[test]
    fn letter_times_unit_bracket_matches_r4() {
        let rules = abelian1();
        let w = rules.alphabet().parse_word("x {}").unwrap();
        let occ = rules.occurrences(&w);
        assert_eq!(occ.len(), 1);
        assert_eq!(occ[0].rule.id, RuleId::R4(Letter(0), Word::unit()));
        assert!(occ[0].context.is_identity());
    }

    #[test]
    fn scan_order_and_contexts() {
        let rules = affine();
        let a = rules.alphabet();
        let w = a.parse_word("{x} {y x}").unwrap();
        let occ = rules.occurrences(&w);
        let got: Vec<String> = occ
            .iter()
            .map(|o| format!("{} @ {}", rules.describe(&o.rule.id), a.context(&o.context)))
            .collect();
        assert_eq!(
            got,
            ["R1(x) @ * {y x}", "R3(x, y x) @ *", "R6(y, x) @ {x} {*}",]
        );
        for o in &occ {
            assert_eq!(o.context.substitute(&o.rule.lead), w);
        }
        assert_eq!(rules.first_occurrence(&w).unwrap(), occ[0]);
    }

    #[test]
    fn s_has_no_p_families() {
        let g = load("weight = 0\nbasis = x\nP x = x\n");
        let rules = RuleSystem::new(g, RuleSet::S, PMode::Strict).unwrap();
        let a = rules.alphabet();
        assert!(!rules.is_reducible(&a.parse_word("x {x x}").unwrap()));
        assert!(rules.is_reducible(&a.parse_word("{x} {x x}").unwrap()));
        assert!(rules
            .instantiate(&RuleId::R6(Letter(0), Letter(0)))
            .is_err());
    }

    #[test]
    fn added_rules_match_literally() {
        let mut rules = abelian1();
        let a = rules.alphabet().clone();
        let id = rules
            .add_rule(&a.parse_poly("2*{{x}} x - {}").unwrap())
            .unwrap();
        assert_eq!(rules.max_lead_breadth(), 2);
        let occ = rules.occurrences(&a.parse_word("{{{x}} x}").unwrap());
        assert!(occ
            .iter()
            .any(|o| o.rule.id == id && o.rule.polynomial.leading_coeff() == Some(&Scalar::one())));
    }

    #[test]
    fn every_match_substitutes_back() {
        let rules = affine();
        for w in crate::terms::enumerate_words(2, 5, 2) {
            for o in rules.occurrences(&w) {
                assert_eq!(o.context.substitute(&o.rule.lead), w);
                assert_eq!(o.rule.polynomial.leading_monomial(), Some(&o.rule.lead));
            }
        }
    }
}
