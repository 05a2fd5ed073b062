//! Bracketed words over a finite alphabet, one-hole contexts and operated
//! polynomials with exact rational coefficients.
//!
//! A [`Word`] is an element of the free operated monoid: a finite sequence of
//! factors, each factor being a letter or the bracket of another word. The
//! empty sequence is the unit `1`, and `{}` (the bracket of the unit) is a
//! legal word distinct from it.

mod context;
mod enumerate;
mod poly;
mod syntax;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

pub use context::{Context, Frame};
pub use enumerate::{enumerate_words, enumerate_words_with_breadth};
pub use poly::{Poly, Scalar};
pub use syntax::{format_scalar, parse_scalar, Alphabet, ParseError};

/// A basis letter, identified by its position in the declared basis.
///
/// Declaration order is the well-order on letters: earlier is smaller.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(pub u32);

impl Letter {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Factor {
    Letter(Letter),
    Bracket(Word),
}

impl Factor {
    pub fn degree(&self) -> usize {
        match self {
            Factor::Letter(_) => 1,
            Factor::Bracket(w) => w.degree() + 1,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Factor::Letter(_) => 0,
            Factor::Bracket(w) => w.depth() + 1,
        }
    }

    pub fn as_letter(&self) -> Option<Letter> {
        match self {
            Factor::Letter(l) => Some(*l),
            Factor::Bracket(_) => None,
        }
    }

    pub fn as_bracket(&self) -> Option<&Word> {
        match self {
            Factor::Letter(_) => None,
            Factor::Bracket(w) => Some(w),
        }
    }
}

/// An immutable bracketed word. Degree and depth are cached on construction.
#[derive(Clone)]
pub struct Word {
    factors: Arc<[Factor]>,
    degree: u32,
    depth: u32,
}

impl Word {
    pub fn unit() -> Self {
        Self::from_factors(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Self::from_factors(vec![Factor::Letter(l)])
    }

    pub fn letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        Self::from_factors(letters.into_iter().map(Factor::Letter).collect())
    }

    /// The single-factor word `{w}`.
    pub fn bracket(w: Word) -> Self {
        Self::from_factors(vec![Factor::Bracket(w)])
    }

    pub fn from_factors(factors: Vec<Factor>) -> Self {
        let degree = factors.iter().map(Factor::degree).sum::<usize>();
        let depth = factors.iter().map(Factor::depth).max().unwrap_or(0);
        Word {
            factors: factors.into(),
            degree: degree as u32,
            depth: depth as u32,
        }
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Number of factors; 0 for the unit.
    pub fn breadth(&self) -> usize {
        self.factors.len()
    }

    /// Letters plus brackets, counted with multiplicity.
    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    /// Maximal bracket nesting.
    pub fn depth(&self) -> usize {
        self.depth as usize
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        if self.is_unit() {
            return other.clone();
        }
        if other.is_unit() {
            return self.clone();
        }
        let mut factors = Vec::with_capacity(self.breadth() + other.breadth());
        factors.extend_from_slice(&self.factors);
        factors.extend_from_slice(&other.factors);
        Word::from_factors(factors)
    }

    /// The word read backwards at every nesting level.
    pub fn opposite(&self) -> Word {
        Word::from_factors(
            self.factors
                .iter()
                .rev()
                .map(|f| match f {
                    Factor::Letter(l) => Factor::Letter(*l),
                    Factor::Bracket(w) => Factor::Bracket(w.opposite()),
                })
                .collect(),
        )
    }

    /// Whether `self` occurs as a subword of `other` (at any nesting level).
    pub fn occurs_in(&self, other: &Word) -> bool {
        fn scan(needle: &[Factor], hay: &[Factor]) -> bool {
            if needle.len() <= hay.len() && hay.windows(needle.len()).any(|win| win == needle) {
                return true;
            }
            hay.iter()
                .filter_map(Factor::as_bracket)
                .any(|inner| scan(needle, inner.factors()))
        }
        self.is_unit() || scan(self.factors(), other.factors())
    }
}

impl PartialEq for Word {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree
            && self.depth == other.depth
            && (Arc::ptr_eq(&self.factors, &other.factors) || self.factors == other.factors)
    }
}

impl Eq for Word {}

impl Hash for Word {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.factors.hash(state);
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return write!(f, "1");
        }
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            match factor {
                Factor::Letter(l) => write!(f, "#{}", l.0)?,
                Factor::Bracket(w) if w.is_unit() => write!(f, "{{}}")?,
                Factor::Bracket(w) => write!(f, "{{{w:?}}}")?,
            }
        }
        Ok(())
    }
}
