//! Words in the rank-two free group on `x` and `h`, homomorphisms onto
//! finite cyclic groups, and relator checks against finite presentations.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("exponent sign must be +1 or -1, got {0}")]
    BadSign(i64),
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
}

/// One of the two free generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    X,
    H,
}

impl Gen {
    pub const ALL: [Gen; 2] = [Gen::X, Gen::H];

    pub fn index(self) -> usize {
        match self {
            Gen::X => 0,
            Gen::H => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Gen::X => "x",
            Gen::H => "h",
        }
    }

    pub fn from_name(name: &str) -> Option<Gen> {
        match name {
            "x" => Some(Gen::X),
            "h" => Some(Gen::H),
            _ => None,
        }
    }
}

/// A generator or its inverse. The derived order is the shortlex letter
/// order `x < x^-1 < h < h^-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u8);

impl Letter {
    pub const ALL: [Letter; 4] = [Letter(0), Letter(1), Letter(2), Letter(3)];

    pub fn new(gen: Gen, inverse: bool) -> Letter {
        Letter(2 * gen.index() as u8 + inverse as u8)
    }

    pub fn pos(gen: Gen) -> Letter {
        Letter::new(gen, false)
    }

    pub fn neg(gen: Gen) -> Letter {
        Letter::new(gen, true)
    }

    pub fn gen(self) -> Gen {
        if self.0 < 2 {
            Gen::X
        } else {
            Gen::H
        }
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn inverse(self) -> Letter {
        Letter(self.0 ^ 1)
    }

    /// Position in `Letter::ALL`; also the column used by graph adjacency tables.
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn sign(self) -> i64 {
        if self.is_inverse() {
            -1
        } else {
            1
        }
    }
}

/// A freely reduced word. The empty word is the identity.
///
/// Ordering is shortlex: shorter words first, ties broken letter by letter.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FreeWord {
    letters: Vec<Letter>,
}

impl Ord for FreeWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for FreeWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FreeWord {
    pub fn identity() -> FreeWord {
        FreeWord::default()
    }

    pub fn gen(g: Gen) -> FreeWord {
        FreeWord {
            letters: vec![Letter::pos(g)],
        }
    }

    pub fn x() -> FreeWord {
        FreeWord::gen(Gen::X)
    }

    pub fn h() -> FreeWord {
        FreeWord::gen(Gen::H)
    }

    /// Builds a word from an arbitrary letter sequence, reducing as it goes.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> FreeWord {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        FreeWord { letters: out }
    }

    /// Parses the word literal syntax, e.g. `h x h x^-2` or `(x h x) h^-1 (x h x)^-1`.
    pub fn parse(text: &str) -> Result<FreeWord, WordError> {
        let expr = WordExpr::parse(text)?;
        expr.resolve(|name| Gen::from_name(name).map(Letter::pos))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        FreeWord::from_letters(self.letters.iter().chain(other.letters.iter()).copied())
    }

    pub fn pow(&self, n: i64) -> FreeWord {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = FreeWord::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    pub fn conjugate_by(&self, t: &FreeWord) -> FreeWord {
        t.mul(self).mul(&t.inverse())
    }

    /// Exponent sum of each generator, indexed by `Gen::index`.
    pub fn exponent_sums(&self) -> [i64; 2] {
        let mut sums = [0i64; 2];
        for l in &self.letters {
            sums[l.gen().index()] += l.sign();
        }
        sums
    }
}

/// Free reduction of a raw signed-letter sequence such as `[("h", 1), ("x", -1)]`.
pub fn reduce<S: AsRef<str>>(raw: &[(S, i64)]) -> Result<FreeWord, WordError> {
    let mut letters = Vec::with_capacity(raw.len());
    for (name, sign) in raw {
        let gen = Gen::from_name(name.as_ref())
            .ok_or_else(|| WordError::UnknownGenerator(name.as_ref().to_string()))?;
        let inverse = match sign {
            1 => false,
            -1 => true,
            s => return Err(WordError::BadSign(*s)),
        };
        letters.push(Letter::new(gen, inverse));
    }
    Ok(FreeWord::from_letters(letters))
}

impl fmt::Display for FreeWord {
    /// Renders with `^` exponents for runs, `1` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut j = i;
            while j < self.letters.len() && self.letters[j] == l {
                j += 1;
            }
            let run = (j - i) as i64 * l.sign();
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            if run == 1 {
                write!(f, "{}", l.gen().name())?;
            } else {
                write!(f, "{}^{}", l.gen().name(), run)?;
            }
            i = j;
        }
        Ok(())
    }
}

/// Unexpanded word syntax: identifiers and parenthesised groups with integer
/// exponents. Shared by the standalone word parser and the script language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WordExpr {
    Atom { name: String, exp: i64 },
    Group { parts: Vec<WordExpr>, exp: i64 },
}

impl WordExpr {
    pub fn parse(text: &str) -> Result<WordExpr, WordError> {
        let mut p = ExprParser {
            bytes: text.as_bytes(),
            pos: 0,
        };
        let parts = p.sequence()?;
        p.skip_ws();
        if p.pos < p.bytes.len() {
            return Err(p.err("unexpected character"));
        }
        if parts.is_empty() {
            return Err(p.err("empty word"));
        }
        Ok(WordExpr::Group { parts, exp: 1 })
    }

    /// Expands exponents into a flat signed-identifier sequence (unreduced).
    pub fn expand(&self) -> Vec<(String, i64)> {
        let mut out = Vec::new();
        self.expand_into(&mut out);
        out
    }

    fn expand_into(&self, out: &mut Vec<(String, i64)>) {
        match self {
            WordExpr::Atom { name, exp } => {
                let sign = exp.signum();
                for _ in 0..exp.unsigned_abs() {
                    out.push((name.clone(), sign));
                }
            }
            WordExpr::Group { parts, exp } => {
                let mut inner = Vec::new();
                for p in parts {
                    p.expand_into(&mut inner);
                }
                for _ in 0..exp.unsigned_abs() {
                    if *exp > 0 {
                        out.extend(inner.iter().cloned());
                    } else {
                        out.extend(inner.iter().rev().map(|(n, s)| (n.clone(), -s)));
                    }
                }
            }
        }
    }

    /// Resolves identifiers to letters and reduces. `lookup` maps an
    /// identifier to the letter its positive power stands for.
    pub fn resolve<F>(&self, lookup: F) -> Result<FreeWord, WordError>
    where
        F: Fn(&str) -> Option<Letter>,
    {
        let mut letters = Vec::new();
        for (name, sign) in self.expand() {
            let l = lookup(&name).ok_or_else(|| WordError::UnknownGenerator(name.clone()))?;
            letters.push(if sign < 0 { l.inverse() } else { l });
        }
        Ok(FreeWord::from_letters(letters))
    }

    /// Identifiers mentioned anywhere in the expression.
    pub fn identifiers(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_ids(&mut out);
        out
    }

    fn collect_ids<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            WordExpr::Atom { name, .. } => out.push(name),
            WordExpr::Group { parts, .. } => parts.iter().for_each(|p| p.collect_ids(out)),
        }
    }
}

impl fmt::Display for WordExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordExpr::Atom { name, exp } => {
                if *exp == 1 {
                    write!(f, "{name}")
                } else {
                    write!(f, "{name}^{exp}")
                }
            }
            WordExpr::Group { parts, exp } => {
                let body = parts
                    .iter()
                    .map(|p| p.to_string())
                    .collect::<Vec<_>>()
                    .join(" ");
                if *exp == 1 {
                    write!(f, "({body})")
                } else {
                    write!(f, "({body})^{exp}")
                }
            }
        }
    }
}

impl WordExpr {
    /// Top-level rendering without the outer parentheses.
    pub fn to_source(&self) -> String {
        match self {
            WordExpr::Group { parts, exp: 1 } => parts
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(" "),
            other => other.to_string(),
        }
    }
}

struct ExprParser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl ExprParser<'_> {
    fn err(&self, msg: &str) -> WordError {
        WordError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn sequence(&mut self) -> Result<Vec<WordExpr>, WordError> {
        let mut parts = Vec::new();
        loop {
            self.skip_ws();
            match self.bytes.get(self.pos) {
                Some(b'(') => {
                    self.pos += 1;
                    let inner = self.sequence()?;
                    self.skip_ws();
                    if self.bytes.get(self.pos) != Some(&b')') {
                        return Err(self.err("expected `)`"));
                    }
                    if inner.is_empty() {
                        return Err(self.err("empty parentheses"));
                    }
                    self.pos += 1;
                    let exp = self.exponent()?;
                    parts.push(WordExpr::Group { parts: inner, exp });
                }
                Some(c) if c.is_ascii_alphabetic() || *c == b'_' => {
                    let start = self.pos;
                    while self.pos < self.bytes.len()
                        && (self.bytes[self.pos].is_ascii_alphanumeric()
                            || self.bytes[self.pos] == b'_')
                    {
                        self.pos += 1;
                    }
                    let name = String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned();
                    let exp = self.exponent()?;
                    parts.push(WordExpr::Atom { name, exp });
                }
                _ => return Ok(parts),
            }
        }
    }

    fn exponent(&mut self) -> Result<i64, WordError> {
        self.skip_ws();
        if self.bytes.get(self.pos) != Some(&b'^') {
            return Ok(1);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        if matches!(self.bytes.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap_or("");
        text.parse::<i64>()
            .map_err(|_| self.err("expected integer exponent"))
    }
}

/// A homomorphism `F(x,h) -> Z/n` given by the images of the generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CyclicHom {
    modulus: u64,
    image_x: u64,
    image_h: u64,
}

impl CyclicHom {
    /// Residues are reduced into `[0, n)`. Panics on a zero modulus.
    pub fn new(modulus: u64, image_x: i64, image_h: i64) -> CyclicHom {
        assert!(modulus >= 1, "modulus must be positive");
        let m = modulus as i64;
        CyclicHom {
            modulus,
            image_x: image_x.rem_euclid(m) as u64,
            image_h: image_h.rem_euclid(m) as u64,
        }
    }

    /// `x -> k`, `h -> 1` mod n.
    pub fn pi_nk(n: u64, k: i64) -> CyclicHom {
        CyclicHom::new(n, k, 1)
    }

    /// `x -> 1`, `h -> 1` mod 2.
    pub fn pi_2() -> CyclicHom {
        CyclicHom::new(2, 1, 1)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn image(&self, g: Gen) -> u64 {
        match g {
            Gen::X => self.image_x,
            Gen::H => self.image_h,
        }
    }

    pub fn is_surjective(&self) -> bool {
        self.image_x.gcd(&self.image_h).gcd(&self.modulus) == 1
    }

    pub fn letter_image(&self, l: Letter) -> u64 {
        let v = self.image(l.gen());
        if l.is_inverse() {
            (self.modulus - v) % self.modulus
        } else {
            v
        }
    }

    pub fn apply(&self, w: &FreeWord) -> u64 {
        self.apply_letters(w.letters())
    }

    /// Evaluates an unreduced letter sequence; agrees with `apply` on its reduction.
    pub fn apply_letters(&self, letters: &[Letter]) -> u64 {
        letters
            .iter()
            .fold(0u64, |acc, &l| (acc + self.letter_image(l)) % self.modulus)
    }
}

/// `hom_image(f, w)`.
pub fn hom_image(f: &CyclicHom, w: &FreeWord) -> u64 {
    f.apply(w)
}

/// A word over arbitrary named generators, stored as (generator index, ±1) letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PresWord(Vec<(usize, i8)>);

impl PresWord {
    pub fn from_signed(letters: impl IntoIterator<Item = (usize, i8)>) -> PresWord {
        let mut out: Vec<(usize, i8)> = Vec::new();
        for (g, s) in letters {
            if let Some(&(pg, ps)) = out.last() {
                if pg == g && ps == -s {
                    out.pop();
                    continue;
                }
            }
            out.push((g, s));
        }
        PresWord(out)
    }

    pub fn letters(&self) -> &[(usize, i8)] {
        &self.0
    }
}

/// A finite presentation with named generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPresentation {
    generators: Vec<String>,
    relators: Vec<PresWord>,
}

impl GroupPresentation {
    /// Relators are given in the word literal syntax over `generators`.
    /// Relators that reduce to the identity are dropped.
    pub fn new(generators: &[&str], relators: &[&str]) -> Result<GroupPresentation, WordError> {
        let generators: Vec<String> = generators.iter().map(|s| s.to_string()).collect();
        let mut rels = Vec::new();
        for r in relators {
            let expr = WordExpr::parse(r)?;
            let mut letters = Vec::new();
            for (name, sign) in expr.expand() {
                let g = generators
                    .iter()
                    .position(|n| *n == name)
                    .ok_or_else(|| WordError::UnknownGenerator(name.clone()))?;
                letters.push((g, sign as i8));
            }
            let w = PresWord::from_signed(letters);
            if !w.0.is_empty() {
                rels.push(w);
            }
        }
        Ok(GroupPresentation {
            generators,
            relators: rels,
        })
    }

    /// `E_n = < X, H | H^n, (H X H X^-2)^n >`.
    pub fn orbifold_group(n: u32) -> GroupPresentation {
        let rels = [format!("H^{n}"), format!("(H X H X^-2)^{n}")];
        let rels: Vec<&str> = rels.iter().map(String::as_str).collect();
        GroupPresentation::new(&["X", "H"], &rels).expect("well-formed presentation")
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relators(&self) -> &[PresWord] {
        &self.relators
    }
}

/// An assignment of residues mod `modulus` to the generators of a presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicAssignment {
    pub modulus: u64,
    pub images: Vec<u64>,
}

impl CyclicAssignment {
    pub fn new(modulus: u64, images: &[i64]) -> CyclicAssignment {
        let m = modulus as i64;
        CyclicAssignment {
            modulus,
            images: images.iter().map(|v| v.rem_euclid(m) as u64).collect(),
        }
    }

    pub fn is_surjective(&self) -> bool {
        self.images
            .iter()
            .fold(self.modulus, |g, &v| g.gcd(&v))
            == 1
    }

    pub fn evaluate(&self, w: &PresWord) -> u64 {
        let m = self.modulus as i64;
        let total: i64 = w
            .letters()
            .iter()
            .map(|&(g, s)| self.images[g] as i64 * s as i64)
            .sum();
        total.rem_euclid(m) as u64
    }
}

/// True iff every relator of `p` maps to zero, i.e. the assignment factors
/// through the presented group. Panics if the assignment does not cover all
/// generators.
pub fn relators_killed(f: &CyclicAssignment, p: &GroupPresentation) -> bool {
    assert_eq!(
        f.images.len(),
        p.generators().len(),
        "assignment must cover every generator"
    );
    p.relators().iter().all(|r| f.evaluate(r) == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> FreeWord {
        FreeWord::parse(s).unwrap()
    }

    #[test]
    fn cancellation() {
        assert!(reduce(&[("x", 1), ("x", -1)]).unwrap().is_identity());
        assert_eq!(
            reduce(&[("h", 1), ("x", 1), ("x", -1), ("h", 1)]).unwrap(),
            w("h^2")
        );
    }

    #[test]
    fn unknown_generator_is_rejected() {
        assert_eq!(
            reduce(&[("y", 1)]),
            Err(WordError::UnknownGenerator("y".into()))
        );
        assert!(FreeWord::parse("x q").is_err());
    }

    #[test]
    fn parse_and_display() {
        let lam3 = w("(x h x) h^-1 (x h x)^-1");
        assert_eq!(lam3.to_string(), "x h x h^-1 x^-1 h^-1 x^-1");
        assert_eq!(w("h x h x^-2").to_string(), "h x h x^-2");
        assert_eq!(w("x x^-1").to_string(), "1");
        assert!(FreeWord::parse("x^").is_err());
        assert!(FreeWord::parse("(x").is_err());
        assert!(FreeWord::parse("").is_err());
    }

    #[test]
    fn shortlex_letter_order() {
        let order: Vec<String> = Letter::ALL
            .iter()
            .map(|&l| FreeWord::from_letters([l]).to_string())
            .collect();
        assert_eq!(order, ["x", "x^-1", "h", "h^-1"]);
        assert!(w("h") < w("x x"));
        assert!(w("x^-1") < w("h"));
    }

    #[test]
    fn meridian_images() {
        let pi41 = CyclicHom::pi_nk(4, 1);
        assert_eq!(hom_image(&pi41, &w("h x h x^-2")), 1);
        let pi2 = CyclicHom::pi_2();
        assert_eq!(hom_image(&pi2, &w("h")), 1);
        assert_eq!(hom_image(&pi2, &w("x")), 1);
        assert_eq!(hom_image(&pi2, &FreeWord::identity()), 0);
        assert!(pi41.is_surjective());
        assert!(!CyclicHom::new(4, 2, 2).is_surjective());
    }

    #[test]
    fn orbifold_relators() {
        let e4 = GroupPresentation::orbifold_group(4);
        assert!(relators_killed(&CyclicAssignment::new(4, &[1, 1]), &e4));
        let trivial = GroupPresentation::new(&["a", "b"], &[]).unwrap();
        assert!(relators_killed(&CyclicAssignment::new(7, &[3, 5]), &trivial));

        let e3 = GroupPresentation::orbifold_group(3);
        let f = CyclicAssignment::new(3, &[1, 0]);
        // direct exponent-sum oracle
        let oracle = |rel: &str| -> i64 {
            let mut sum = 0;
            for (name, s) in WordExpr::parse(rel).unwrap().expand() {
                sum += s * if name == "X" { 1 } else { 0 };
            }
            sum.rem_euclid(3)
        };
        assert_eq!(oracle("H^3"), 0);
        assert_eq!(oracle("(H X H X^-2)^3"), 0);
        assert!(relators_killed(&f, &e3));
        assert!(f.is_surjective());
        assert!(!relators_killed(&CyclicAssignment::new(3, &[1, 1]), &GroupPresentation::new(&["X", "H"], &["X H"]).unwrap()));
    }
}
