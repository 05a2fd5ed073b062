//! Seeded random words and polynomials for randomized checks.

use num_bigint::BigInt;
use rand::Rng;

use crate::terms::{Factor, Letter, Poly, Scalar, Word};

/// A word whose degree is drawn uniformly from `0..=max_degree`, with random
/// letters and brackets nested at most `max_depth` deep.
pub fn random_word<R: Rng>(
    rng: &mut R,
    n_letters: usize,
    max_degree: usize,
    max_depth: usize,
) -> Word {
    let degree = rng.gen_range(0..=max_degree);
    word_of_degree(rng, n_letters, degree, max_depth)
}

fn word_of_degree<R: Rng>(rng: &mut R, n_letters: usize, degree: usize, max_depth: usize) -> Word {
    let mut factors = Vec::new();
    let mut left = degree;
    while left > 0 {
        let bracket = max_depth > 0 && (n_letters == 0 || rng.gen_bool(0.4));
        if bracket {
            let inner = rng.gen_range(0..left);
            factors.push(Factor::Bracket(word_of_degree(
                rng,
                n_letters,
                inner,
                max_depth - 1,
            )));
            left -= inner + 1;
        } else if n_letters > 0 {
            factors.push(Factor::Letter(Letter(rng.gen_range(0..n_letters as u32))));
            left -= 1;
        } else {
            break;
        }
    }
    Word::from_factors(factors)
}

/// A nonzero integer coefficient in `-bound..=bound`.
pub fn random_coeff<R: Rng>(rng: &mut R, bound: i64) -> Scalar {
    let mut c = 0;
    while c == 0 {
        c = rng.gen_range(-bound..=bound);
    }
    Scalar::from_integer(BigInt::from(c))
}

/// A sum of up to `max_terms` random words with small integer coefficients.
pub fn random_poly<R: Rng>(
    rng: &mut R,
    n_letters: usize,
    max_terms: usize,
    max_degree: usize,
    max_depth: usize,
) -> Poly {
    let terms = rng.gen_range(1..=max_terms.max(1));
    let mut f = Poly::zero();
    for _ in 0..terms {
        let w = random_word(rng, n_letters, max_degree, max_depth);
        f.add_term(w, random_coeff(rng, 3));
    }
    f
}

/// A combination of up to `max_terms` words drawn from `pool`.
pub fn random_combination<R: Rng>(rng: &mut R, pool: &[Word], max_terms: usize) -> Poly {
    let mut f = Poly::zero();
    if pool.is_empty() {
        return f;
    }
    for _ in 0..rng.gen_range(1..=max_terms.max(1)) {
        f.add_term(
            pool[rng.gen_range(0..pool.len())].clone(),
            random_coeff(rng, 3),
        );
    }
    f
}
