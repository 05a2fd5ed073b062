//! Finite-dimensional Rota-Baxter Lie algebras `(g, [,], P)` of weight λ.
//!
//! Algebras are read from a small line-oriented format:
//!
//! ```text
//! # comment
//! weight = -1
//! basis  = y, x                 # listing order is the ascending well-order
//! bracket x y = y               # pairs (a, b) with a > b; omitted pairs are 0
//! P x = x
//! P y = y
//! ```

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::terms::{parse_scalar, Alphabet, Factor, Letter, ParseError, Poly, Scalar, Word};

/// A linear combination of basis letters.
pub type Vector = BTreeMap<Letter, Scalar>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoadError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: {source}")]
    Parse { line: usize, source: ParseError },
    #[error("missing `{0}` line")]
    Missing(&'static str),
    #[error("line {line}: duplicate entry for {what}")]
    Duplicate { line: usize, what: String },
    #[error(
        "P({0}) = 0; the leading monomial of P is undefined (use --allow-degenerate-p to admit kernels)"
    )]
    DegenerateP(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("`{0}` is not a single basis letter")]
    NotALieElement(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PMode {
    /// Every basis letter must have `P(x) != 0`.
    #[default]
    Strict,
    /// Letters in the kernel of `P` are allowed.
    AllowDegenerate,
}

#[derive(Clone, Debug)]
pub struct RbLieAlgebra {
    alphabet: Alphabet,
    weight: Scalar,
    /// Bracket entries exactly as declared, keyed by ordered pair.
    declared: BTreeMap<(Letter, Letter), Vector>,
    p: Vec<Vector>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    Antisymmetry,
    Jacobi,
    RotaBaxter,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Antisymmetry => "antisymmetry",
            Axiom::Jacobi => "Jacobi identity",
            Axiom::RotaBaxter => "Rota-Baxter identity",
        })
    }
}

/// One failed identity with the basis tuple witnessing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: Vec<Letter>,
    /// `lhs - rhs`, nonzero.
    pub defect: Vector,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn accepted(&self) -> bool {
        self.violations.is_empty()
    }
}

impl RbLieAlgebra {
    /// Builds an algebra from its tables. `brackets` may contain any ordered
    /// pairs; only pairs `(a, b)` with `a > b` are used for computation, the
    /// rest are checked by [`RbLieAlgebra::validate`].
    pub fn new(
        alphabet: Alphabet,
        weight: Scalar,
        brackets: BTreeMap<(Letter, Letter), Vector>,
        p: Vec<Vector>,
    ) -> Self {
        assert_eq!(p.len(), alphabet.len(), "one P entry per basis letter");
        let declared = brackets
            .into_iter()
            .map(|(k, v)| (k, v.into_iter().filter(|(_, c)| !c.is_zero()).collect()))
            .collect();
        let p = p
            .into_iter()
            .map(|v| v.into_iter().filter(|(_, c)| !c.is_zero()).collect())
            .collect();
        RbLieAlgebra {
            alphabet,
            weight,
            declared,
            p,
        }
    }

    pub fn parse(text: &str) -> Result<Self, LoadError> {
        parse_algebra(text)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn dim(&self) -> usize {
        self.alphabet.len()
    }

    pub fn weight(&self) -> &Scalar {
        &self.weight
    }

    pub fn letters(&self) -> impl DoubleEndedIterator<Item = Letter> + ExactSizeIterator {
        self.alphabet.letters()
    }

    /// `[a, b]` on basis letters, from the canonical (`a > b`) entries.
    pub fn bracket_letters(&self, a: Letter, b: Letter) -> Vector {
        match a.cmp(&b) {
            std::cmp::Ordering::Equal => Vector::new(),
            std::cmp::Ordering::Greater => self.declared.get(&(a, b)).cloned().unwrap_or_default(),
            std::cmp::Ordering::Less => scale(
                &self.bracket_letters(b, a),
                &-Scalar::from_integer(1.into()),
            ),
        }
    }

    pub fn p_letter(&self, a: Letter) -> &Vector {
        &self.p[a.index()]
    }

    pub fn bracket_vec(&self, a: &Vector, b: &Vector) -> Vector {
        let mut out = Vector::new();
        for (x, cx) in a {
            for (y, cy) in b {
                let c = cx * cy;
                for (z, cz) in self.bracket_letters(*x, *y) {
                    add(&mut out, z, cz * &c);
                }
            }
        }
        out
    }

    pub fn p_vec(&self, a: &Vector) -> Vector {
        let mut out = Vector::new();
        for (x, cx) in a {
            for (z, cz) in self.p_letter(*x) {
                add(&mut out, *z, cz * cx);
            }
        }
        out
    }

    /// Bilinear bracket on polynomials supported on single letters.
    pub fn bracket_of(&self, a: &Poly, b: &Poly) -> Result<Poly, AlgebraError> {
        let a = self.to_vector(a)?;
        let b = self.to_vector(b)?;
        Ok(to_poly(&self.bracket_vec(&a, &b)))
    }

    /// Linear extension of `P` on polynomials supported on single letters.
    pub fn p_of(&self, a: &Poly) -> Result<Poly, AlgebraError> {
        Ok(to_poly(&self.p_vec(&self.to_vector(a)?)))
    }

    pub fn to_vector(&self, a: &Poly) -> Result<Vector, AlgebraError> {
        let mut out = Vector::new();
        for (w, c) in a.iter() {
            match w.factors() {
                [Factor::Letter(l)] => add(&mut out, *l, c.clone()),
                _ => return Err(AlgebraError::NotALieElement(self.alphabet.format_word(w))),
            }
        }
        Ok(out)
    }

    /// Whether `P(x) = 0` for some basis letter.
    pub fn kernel_letters(&self) -> Vec<Letter> {
        self.letters()
            .filter(|l| self.p[l.index()].is_empty())
            .collect()
    }

    pub fn check_p_mode(&self, mode: PMode) -> Result<(), LoadError> {
        match (mode, self.kernel_letters().first()) {
            (PMode::Strict, Some(l)) => {
                Err(LoadError::DegenerateP(self.alphabet.name(*l).to_string()))
            }
            _ => Ok(()),
        }
    }

    /// Checks antisymmetry, the Jacobi identity and the Rota-Baxter identity
    /// of weight λ on all basis tuples, exactly.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let minus_one = -Scalar::from_integer(1.into());
        for (&(a, b), v) in &self.declared {
            let expected = match a.cmp(&b) {
                std::cmp::Ordering::Greater => continue,
                std::cmp::Ordering::Equal => Vector::new(),
                std::cmp::Ordering::Less => scale(&self.bracket_letters(b, a), &minus_one),
            };
            let defect = sub(v, &expected);
            if !defect.is_empty() {
                violations.push(Violation {
                    axiom: Axiom::Antisymmetry,
                    witness: vec![a, b],
                    defect,
                });
            }
        }
        let basis: Vec<Letter> = self.letters().collect();
        let unit = |l: Letter| Vector::from([(l, Scalar::from_integer(1.into()))]);
        for (i, &x) in basis.iter().enumerate() {
            for (j, &y) in basis.iter().enumerate().skip(i + 1) {
                for &z in &basis[j + 1..] {
                    let (ex, ey, ez) = (unit(x), unit(y), unit(z));
                    let mut total = self.bracket_vec(&self.bracket_vec(&ex, &ey), &ez);
                    total = sum(&total, &self.bracket_vec(&self.bracket_vec(&ey, &ez), &ex));
                    total = sum(&total, &self.bracket_vec(&self.bracket_vec(&ez, &ex), &ey));
                    if !total.is_empty() {
                        violations.push(Violation {
                            axiom: Axiom::Jacobi,
                            witness: vec![x, y, z],
                            defect: total,
                        });
                    }
                }
            }
        }
        for &x in &basis {
            for &y in &basis {
                if x > y {
                    // [Pu, Pv] and the right-hand side are both antisymmetric in (u, v)
                    continue;
                }
                let (ex, ey) = (unit(x), unit(y));
                let (px, py) = (self.p_vec(&ex), self.p_vec(&ey));
                let lhs = self.bracket_vec(&px, &py);
                let mut rhs = self.p_vec(&self.bracket_vec(&ex, &py));
                rhs = sum(&rhs, &self.p_vec(&self.bracket_vec(&px, &ey)));
                rhs = sum(
                    &rhs,
                    &scale(&self.p_vec(&self.bracket_vec(&ex, &ey)), &self.weight),
                );
                let defect = sub(&lhs, &rhs);
                if !defect.is_empty() {
                    violations.push(Violation {
                        axiom: Axiom::RotaBaxter,
                        witness: vec![x, y],
                        defect,
                    });
                }
            }
        }
        ValidationReport { violations }
    }

    /// The same algebra over a reordered basis: new letter `i` is old letter
    /// `order[i]`.
    pub fn reordered(&self, order: &[Letter]) -> RbLieAlgebra {
        assert_eq!(order.len(), self.dim());
        let mut new_of_old = vec![Letter(0); self.dim()];
        for (i, old) in order.iter().enumerate() {
            new_of_old[old.index()] = Letter(i as u32);
        }
        let map_vec = |v: &Vector| -> Vector {
            v.iter()
                .map(|(l, c)| (new_of_old[l.index()], c.clone()))
                .collect()
        };
        let alphabet = Alphabet::new(order.iter().map(|l| self.alphabet.name(*l).to_string()))
            .expect("names stay unique");
        let mut brackets = BTreeMap::new();
        for (i, &a) in order.iter().enumerate() {
            for (j, &b) in order.iter().enumerate() {
                if i > j {
                    let v = map_vec(&self.bracket_letters(a, b));
                    if !v.is_empty() {
                        brackets.insert((Letter(i as u32), Letter(j as u32)), v);
                    }
                }
            }
        }
        let p = order.iter().map(|a| map_vec(self.p_letter(*a))).collect();
        RbLieAlgebra::new(alphabet, self.weight.clone(), brackets, p)
    }

    pub fn describe_violation(&self, v: &Violation) -> String {
        let names: Vec<&str> = v.witness.iter().map(|l| self.alphabet.name(*l)).collect();
        format!(
            "{} fails on ({}): defect {}",
            v.axiom,
            names.join(", "),
            self.alphabet.format_poly(&to_poly(&v.defect))
        )
    }
}

pub fn to_poly(v: &Vector) -> Poly {
    v.iter()
        .map(|(l, c)| (Word::letter(*l), c.clone()))
        .collect()
}

fn add(v: &mut Vector, l: Letter, c: Scalar) {
    if c.is_zero() {
        return;
    }
    let entry = v.entry(l).or_insert_with(Scalar::zero);
    *entry += c;
    if entry.is_zero() {
        v.remove(&l);
    }
}

fn sum(a: &Vector, b: &Vector) -> Vector {
    let mut out = a.clone();
    for (l, c) in b {
        add(&mut out, *l, c.clone());
    }
    out
}

fn sub(a: &Vector, b: &Vector) -> Vector {
    let mut out = a.clone();
    for (l, c) in b {
        add(&mut out, *l, -c);
    }
    out
}

fn scale(a: &Vector, c: &Scalar) -> Vector {
    a.iter()
        .map(|(l, x)| (*l, x * c))
        .filter(|(_, x)| !x.is_zero())
        .collect()
}

fn parse_algebra(text: &str) -> Result<RbLieAlgebra, LoadError> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();

    let mut alphabet = None;
    for &(line, l) in &lines {
        if let Some(rest) = keyword(l, "basis") {
            if alphabet.is_some() {
                return Err(LoadError::Duplicate {
                    line,
                    what: "basis".into(),
                });
            }
            let rest = assignment(line, rest)?;
            let names: Vec<&str> = rest.split(',').map(str::trim).collect();
            if names.iter().any(|n| n.is_empty()) {
                return Err(LoadError::Malformed {
                    line,
                    message: "empty basis name".into(),
                });
            }
            alphabet = Some(
                Alphabet::new(names).map_err(|message| LoadError::Malformed { line, message })?,
            );
        }
    }
    let alphabet = alphabet.ok_or(LoadError::Missing("basis"))?;

    let mut weight = None;
    let mut brackets: BTreeMap<(Letter, Letter), Vector> = BTreeMap::new();
    let mut p: Vec<Option<Vector>> = vec![None; alphabet.len()];
    let lie_element = |line: usize, src: &str| -> Result<Vector, LoadError> {
        let poly = alphabet
            .parse_poly(src)
            .map_err(|source| LoadError::Parse { line, source })?;
        let mut v = Vector::new();
        for (w, c) in poly.iter() {
            match w.factors() {
                [Factor::Letter(l)] => add(&mut v, *l, c.clone()),
                _ => {
                    return Err(LoadError::Malformed {
                        line,
                        message: format!(
                            "`{}` is not a linear combination of basis letters",
                            alphabet.format_word(w)
                        ),
                    })
                }
            }
        }
        Ok(v)
    };
    let letter = |line: usize, name: &str| -> Result<Letter, LoadError> {
        alphabet.lookup(name).ok_or_else(|| LoadError::Malformed {
            line,
            message: format!("unknown basis name `{name}`"),
        })
    };

    for &(line, l) in &lines {
        if keyword(l, "basis").is_some() {
            continue;
        }
        if let Some(rest) = keyword(l, "weight") {
            if weight.is_some() {
                return Err(LoadError::Duplicate {
                    line,
                    what: "weight".into(),
                });
            }
            let rest = assignment(line, rest)?;
            weight = Some(parse_scalar(rest).map_err(|source| LoadError::Parse { line, source })?);
        } else if let Some(rest) = keyword(l, "bracket") {
            let (lhs, rhs) = split_eq(line, rest)?;
            let names: Vec<&str> = lhs.split_whitespace().collect();
            let [a, b] = names[..] else {
                return Err(LoadError::Malformed {
                    line,
                    message: "expected `bracket <a> <b> = <poly>`".into(),
                });
            };
            let key = (letter(line, a)?, letter(line, b)?);
            let v = lie_element(line, rhs)?;
            if brackets.insert(key, v).is_some() {
                return Err(LoadError::Duplicate {
                    line,
                    what: format!("bracket {a} {b}"),
                });
            }
        } else if let Some(rest) = keyword(l, "P") {
            let (lhs, rhs) = split_eq(line, rest)?;
            let x = letter(line, lhs.trim())?;
            let v = lie_element(line, rhs)?;
            if p[x.index()].replace(v).is_some() {
                return Err(LoadError::Duplicate {
                    line,
                    what: format!("P {}", lhs.trim()),
                });
            }
        } else {
            return Err(LoadError::Malformed {
                line,
                message: format!("unrecognised line `{l}`"),
            });
        }
    }
    let weight = weight.ok_or(LoadError::Missing("weight"))?;
    let p = p.into_iter().map(Option::unwrap_or_default).collect();
    Ok(RbLieAlgebra::new(alphabet, weight, brackets, p))
}

/// `rest` if `line` is `kw` followed by whitespace or `=`.
fn keyword<'a>(line: &'a str, kw: &str) -> Option<&'a str> {
    let rest = line.strip_prefix(kw)?;
    match rest.chars().next() {
        Some(c) if c.is_whitespace() || c == '=' => Some(rest),
        _ => None,
    }
}

fn assignment(line: usize, rest: &str) -> Result<&str, LoadError> {
    rest.trim_start()
        .strip_prefix('=')
        .map(str::trim)
        .ok_or_else(|| LoadError::Malformed {
            line,
            message: "expected `=`".into(),
        })
}

fn split_eq(line: usize, rest: &str) -> Result<(&str, &str), LoadError> {
    rest.split_once('=')
        .map(|(a, b)| (a.trim(), b.trim()))
        .ok_or_else(|| LoadError::Malformed {
            line,
            message: "expected `=`".into(),
        })
}
