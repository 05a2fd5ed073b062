//! The order on bracketed words.
//!
//! Words are compared by breadth, then degree, then factor by factor from the
//! left. Letters compare by basis position and are below every bracket; two
//! brackets compare by their contents, recursively. The unit is the least
//! word.
//!
//! This relation is a well-order and is compatible with concatenation on
//! either side. It is *not* compatible with the bracket in general: breadth
//! dominates degree at the top level but not inside a bracket, so `u < v`
//! with `degree(u) > degree(v)` gives `{u} > {v}`.

use std::cmp::Ordering;

use crate::terms::{Factor, Poly, Word};

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        compare(self, other)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Factor {
    fn cmp(&self, other: &Self) -> Ordering {
        compare_factors(self, other)
    }
}

impl PartialOrd for Factor {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn compare(u: &Word, v: &Word) -> Ordering {
    u.breadth()
        .cmp(&v.breadth())
        .then_with(|| u.degree().cmp(&v.degree()))
        .then_with(|| {
            for (a, b) in u.factors().iter().zip(v.factors()) {
                match compare_factors(a, b) {
                    Ordering::Equal => continue,
                    other => return other,
                }
            }
            Ordering::Equal
        })
}

fn compare_factors(a: &Factor, b: &Factor) -> Ordering {
    match (a, b) {
        (Factor::Letter(x), Factor::Letter(y)) => x.cmp(y),
        (Factor::Letter(_), Factor::Bracket(_)) => Ordering::Less,
        (Factor::Bracket(_), Factor::Letter(_)) => Ordering::Greater,
        (Factor::Bracket(u), Factor::Bracket(v)) => compare(u, v),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("the zero polynomial has no leading monomial")]
pub struct ZeroPolynomial;

/// The greatest word in the support of `f`.
pub fn leading_monomial(f: &Poly) -> Result<&Word, ZeroPolynomial> {
    f.leading_monomial().ok_or(ZeroPolynomial)
}
