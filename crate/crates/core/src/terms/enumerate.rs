use super::{Factor, Letter, Word};

/// Every word over `n_letters` letters with degree ≤ `max_degree` and depth
/// ≤ `max_depth`, each once, in ascending monomial order.
pub fn enumerate_words(n_letters: usize, max_degree: usize, max_depth: usize) -> Vec<Word> {
    enumerate_words_with_breadth(n_letters, max_degree, max_depth, usize::MAX)
}

/// As [`enumerate_words`], restricted to words of breadth ≤ `max_breadth`.
pub fn enumerate_words_with_breadth(
    n_letters: usize,
    max_degree: usize,
    max_depth: usize,
    max_breadth: usize,
) -> Vec<Word> {
    let table = Table::build(n_letters, max_degree, max_depth);
    let factors = &table.factors[max_depth];
    // seqs[b][d]: factor sequences of length exactly b and total degree d
    let mut out = vec![Word::unit()];
    let mut layer: Vec<Vec<Vec<Factor>>> = vec![Vec::new(); max_degree + 1];
    layer[0].push(Vec::new());
    let mut breadth = 0;
    while breadth < max_breadth {
        let mut next: Vec<Vec<Vec<Factor>>> = vec![Vec::new(); max_degree + 1];
        for (d, seqs) in layer.iter().enumerate() {
            for seq in seqs {
                for (fd, fs) in factors.iter().enumerate().skip(1) {
                    if d + fd > max_degree {
                        break;
                    }
                    for f in fs {
                        let mut s = seq.clone();
                        s.push(f.clone());
                        next[d + fd].push(s);
                    }
                }
            }
        }
        if next.iter().all(Vec::is_empty) {
            break;
        }
        out.extend(next.iter().flatten().map(|s| Word::from_factors(s.clone())));
        layer = next;
        breadth += 1;
    }
    out.sort();
    out
}

struct Table {
    /// factors[k][d]: factors of depth ≤ k and degree exactly d
    factors: Vec<Vec<Vec<Factor>>>,
}

impl Table {
    fn build(n_letters: usize, max_degree: usize, max_depth: usize) -> Self {
        let mut factors: Vec<Vec<Vec<Factor>>> = Vec::with_capacity(max_depth + 1);
        let mut words_below: Option<Vec<Vec<Word>>> = None;
        for _k in 0..=max_depth {
            let mut fk: Vec<Vec<Factor>> = vec![Vec::new(); max_degree + 1];
            if max_degree >= 1 {
                fk[1].extend((0..n_letters as u32).map(|i| Factor::Letter(Letter(i))));
            }
            if let Some(words) = &words_below {
                for (d, ws) in words.iter().enumerate() {
                    if d < max_degree {
                        fk[d + 1].extend(ws.iter().cloned().map(Factor::Bracket));
                    }
                }
            }
            // words of depth ≤ k by exact degree, for the next level's brackets
            let mut wk: Vec<Vec<Word>> = vec![Vec::new(); max_degree + 1];
            let mut seqs: Vec<Vec<Vec<Factor>>> = vec![Vec::new(); max_degree + 1];
            seqs[0].push(Vec::new());
            for d in 1..=max_degree {
                let mut acc = Vec::new();
                for fd in 1..=d {
                    for f in &fk[fd] {
                        for rest in &seqs[d - fd] {
                            let mut s = Vec::with_capacity(rest.len() + 1);
                            s.push(f.clone());
                            s.extend_from_slice(rest);
                            acc.push(s);
                        }
                    }
                }
                seqs[d] = acc;
            }
            for (d, ss) in seqs.into_iter().enumerate() {
                wk[d] = ss.into_iter().map(Word::from_factors).collect();
            }
            factors.push(fk);
            words_below = Some(wk);
        }
        Table { factors }
    }
}
