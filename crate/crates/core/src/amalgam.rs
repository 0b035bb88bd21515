//! The doubled group `F(x,h) *_Lambda mirror(F(x,h))`.
//!
//! Elements are words alternating between the plain copy and the mirror
//! copy. Both copies share the subgroup `Lambda`, so a syllable lying in
//! `Lambda` may pass freely between sides. Equality is decided through
//! [`normal_form`], which uses shortlex right-coset representatives of
//! `Lambda` taken from its folded graph.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::RwLock;

use num_integer::Integer;
use thiserror::Error;

use crate::stallings::{graph_from_generators, lambda_generators, SubgroupGraph};
use crate::word::{CyclicHom, FreeWord, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AmalgamError {
    #[error("not in kernel: image {0}")]
    NotInKernel(u64),
    #[error("amalgam surjectivity hypothesis fails: Lambda maps onto a proper subgroup of Z/{0}")]
    SurjectivityFails(u64),
    #[error("amalgamated subgroup does not contain meridian `{0}`")]
    MissingMeridian(FreeWord),
    #[error(transparent)]
    Word(#[from] WordError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Plain,
    Mirror,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Plain => Side::Mirror,
            Side::Mirror => Side::Plain,
        }
    }
}

/// Alternating product of nontrivial syllables from the two copies.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct DoubledWord {
    syllables: Vec<(Side, FreeWord)>,
}

impl DoubledWord {
    pub fn identity() -> DoubledWord {
        DoubledWord::default()
    }

    /// Drops identity syllables and merges neighbours on the same side.
    pub fn new<I: IntoIterator<Item = (Side, FreeWord)>>(raw: I) -> DoubledWord {
        let mut out: Vec<(Side, FreeWord)> = Vec::new();
        for (side, w) in raw {
            if w.is_identity() {
                continue;
            }
            match out.last_mut() {
                Some((s, prev)) if *s == side => {
                    let merged = prev.mul(&w);
                    if merged.is_identity() {
                        out.pop();
                    } else {
                        *prev = merged;
                    }
                }
                _ => out.push((side, w)),
            }
        }
        DoubledWord { syllables: out }
    }

    pub fn plain(w: FreeWord) -> DoubledWord {
        DoubledWord::new([(Side::Plain, w)])
    }

    pub fn mirrored(w: FreeWord) -> DoubledWord {
        DoubledWord::new([(Side::Mirror, w)])
    }

    pub fn syllables(&self) -> &[(Side, FreeWord)] {
        &self.syllables
    }

    pub fn is_single_sided(&self) -> bool {
        self.syllables.len() <= 1
    }

    pub fn mul(&self, other: &DoubledWord) -> DoubledWord {
        DoubledWord::new(self.syllables.iter().chain(&other.syllables).cloned())
    }

    pub fn inverse(&self) -> DoubledWord {
        DoubledWord::new(
            self.syllables
                .iter()
                .rev()
                .map(|(s, w)| (*s, w.inverse())),
        )
    }

    /// Parses side-tagged factors, e.g. `x ~x^-1` or `~(x h)^2 h`, where
    /// `~` marks the mirror copy.
    pub fn parse(text: &str) -> Result<DoubledWord, AmalgamError> {
        let bytes = text.as_bytes();
        let mut pos = 0;
        let mut raw = Vec::new();
        let skip_ws = |pos: &mut usize| {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
        };
        loop {
            skip_ws(&mut pos);
            if pos >= bytes.len() {
                break;
            }
            let side = if bytes[pos] == b'~' {
                pos += 1;
                skip_ws(&mut pos);
                Side::Mirror
            } else {
                Side::Plain
            };
            let start = pos;
            match bytes.get(pos) {
                Some(b'(') => {
                    let mut depth = 0;
                    while pos < bytes.len() {
                        match bytes[pos] {
                            b'(' => depth += 1,
                            b')' => {
                                depth -= 1;
                                if depth == 0 {
                                    pos += 1;
                                    break;
                                }
                            }
                            _ => {}
                        }
                        pos += 1;
                    }
                }
                Some(c) if c.is_ascii_alphabetic() || *c == b'_' => {
                    while pos < bytes.len()
                        && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_')
                    {
                        pos += 1;
                    }
                }
                _ => {
                    return Err(WordError::Syntax {
                        pos,
                        msg: "expected a factor".into(),
                    }
                    .into())
                }
            }
            // optional exponent
            let mut look = pos;
            skip_ws(&mut look);
            if bytes.get(look) == Some(&b'^') {
                look += 1;
                skip_ws(&mut look);
                if matches!(bytes.get(look), Some(b'-') | Some(b'+')) {
                    look += 1;
                }
                while look < bytes.len() && bytes[look].is_ascii_digit() {
                    look += 1;
                }
                pos = look;
            }
            let factor = FreeWord::parse(&text[start..pos])?;
            raw.push((side, factor));
        }
        Ok(DoubledWord::new(raw))
    }
}

impl fmt::Display for DoubledWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .syllables
            .iter()
            .map(|(s, w)| match s {
                Side::Plain => format!("({w})"),
                Side::Mirror => format!("~({w})"),
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// The doubling involution: swaps the two copies.
pub fn mirror(w: &DoubledWord) -> DoubledWord {
    DoubledWord {
        syllables: w
            .syllables
            .iter()
            .map(|(s, u)| (s.flip(), u.clone()))
            .collect(),
    }
}

/// `c * s_1 * ... * s_n` with `c` in `Lambda` and each `s_i` a nontrivial
/// shortlex right-coset representative, sides alternating.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NormalForm {
    pub c: FreeWord,
    pub syllables: Vec<(Side, FreeWord)>,
}

impl NormalForm {
    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Reassembles the element; `c` is attached to the first syllable's side.
    pub fn to_doubled(&self) -> DoubledWord {
        let side = self.syllables.first().map_or(Side::Plain, |(s, _)| *s);
        DoubledWord::new(
            std::iter::once((side, self.c.clone())).chain(self.syllables.iter().cloned()),
        )
    }
}

/// The amalgamated subgroup together with a memo of coset reductions.
#[derive(Debug)]
pub struct AmalgamContext {
    lambda: SubgroupGraph,
    lambda_gens: Vec<FreeWord>,
    memo: RwLock<HashMap<FreeWord, FreeWord>>,
}

impl AmalgamContext {
    /// Context for `Lambda = < h, h x h x^-2, (x h x) h^-1 (x h x)^-1 >`.
    pub fn new() -> AmalgamContext {
        AmalgamContext::with_generators(lambda_generators())
            .expect("Lambda contains both meridians")
    }

    pub fn with_generators(gens: Vec<FreeWord>) -> Result<AmalgamContext, AmalgamError> {
        let lambda = graph_from_generators(&gens);
        for m in [FreeWord::h(), FreeWord::parse("h x h x^-2")?] {
            if !lambda.contains(&m) {
                return Err(AmalgamError::MissingMeridian(m));
            }
        }
        Ok(AmalgamContext {
            lambda,
            lambda_gens: gens,
            memo: RwLock::new(HashMap::new()),
        })
    }

    pub fn lambda(&self) -> &SubgroupGraph {
        &self.lambda
    }

    pub fn lambda_generators(&self) -> &[FreeWord] {
        &self.lambda_gens
    }

    /// Shortlex representative of `Lambda w`.
    pub fn coset_rep(&self, w: &FreeWord) -> FreeWord {
        if let Some(r) = self.memo.read().expect("memo lock").get(w) {
            return r.clone();
        }
        let r = self.lambda.coset_reduce(w);
        self.memo
            .write()
            .expect("memo lock")
            .insert(w.clone(), r.clone());
        r
    }
}

impl Default for AmalgamContext {
    fn default() -> Self {
        AmalgamContext::new()
    }
}

/// Normal form, computed right to left: each syllable (with the `Lambda`
/// part carried from its right) is split as `c * rep`; a syllable that falls
/// into `Lambda` is absorbed and its neighbours merge.
pub fn normal_form(ctx: &AmalgamContext, w: &DoubledWord) -> NormalForm {
    let mut out: Vec<(Side, FreeWord)> = Vec::new();
    let mut carry = FreeWord::identity();
    for (side, word) in w.syllables.iter().rev() {
        let mut g = word.mul(&carry);
        if let Some((s, _)) = out.last() {
            if s == side {
                let (_, rep) = out.pop().expect("nonempty");
                g = g.mul(&rep);
            }
        }
        let rep = ctx.coset_rep(&g);
        if rep.is_identity() {
            carry = g;
        } else {
            carry = g.mul(&rep.inverse());
            out.push((*side, rep));
        }
    }
    out.reverse();
    NormalForm {
        c: carry,
        syllables: out,
    }
}

pub fn amalgam_equal(ctx: &AmalgamContext, a: &DoubledWord, b: &DoubledWord) -> bool {
    normal_form(ctx, a) == normal_form(ctx, b)
}

pub fn syllable_length(ctx: &AmalgamContext, w: &DoubledWord) -> usize {
    normal_form(ctx, w).len()
}

/// A homomorphism of the doubled group induced by a cyclic homomorphism of
/// `F(x,h)`, identical on both copies so it commutes with `mirror`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EquivariantHom {
    pub base: CyclicHom,
}

impl EquivariantHom {
    pub fn new(base: CyclicHom) -> EquivariantHom {
        EquivariantHom { base }
    }

    pub fn apply(&self, w: &DoubledWord) -> u64 {
        let n = self.base.modulus();
        w.syllables
            .iter()
            .fold(0, |acc, (_, u)| (acc + self.base.apply(u)) % n)
    }

    /// For each residue, a shortest product of `Lambda` generators mapping
    /// to it, or `None` when `Lambda` does not surject.
    fn lambda_section(&self, ctx: &AmalgamContext) -> Option<Vec<FreeWord>> {
        let n = self.base.modulus() as usize;
        let gens: Vec<FreeWord> = ctx
            .lambda_generators()
            .iter()
            .flat_map(|g| [g.clone(), g.inverse()])
            .collect();
        let images: Vec<u64> = ctx
            .lambda_generators()
            .iter()
            .map(|g| self.base.apply(g))
            .collect();
        let content = images
            .iter()
            .fold(self.base.modulus(), |acc, &v| acc.gcd(&v));
        if content != 1 {
            return None;
        }
        let mut table: Vec<Option<FreeWord>> = vec![None; n];
        table[0] = Some(FreeWord::identity());
        let mut queue = VecDeque::from([0usize]);
        while let Some(r) = queue.pop_front() {
            let base = table[r].clone().expect("visited");
            for g in &gens {
                let t = (r + self.base.apply(g) as usize) % n;
                if table[t].is_none() {
                    table[t] = Some(base.mul(g));
                    queue.push_back(t);
                }
            }
        }
        table.into_iter().collect()
    }
}

/// Splits a kernel element into single-sided kernel factors whose product is
/// the input, peeling off the last normal-form syllable each step.
pub fn kernel_decompose(
    ctx: &AmalgamContext,
    f: &EquivariantHom,
    w: &DoubledWord,
) -> Result<Vec<DoubledWord>, AmalgamError> {
    let image = f.apply(w);
    if image != 0 {
        return Err(AmalgamError::NotInKernel(image));
    }
    let section = f
        .lambda_section(ctx)
        .ok_or(AmalgamError::SurjectivityFails(f.base.modulus()))?;
    let mut factors = Vec::new();
    let mut rest = w.clone();
    loop {
        if rest.is_single_sided() {
            if !rest.syllables.is_empty() || factors.is_empty() {
                factors.push(rest);
            }
            break;
        }
        let nf = normal_form(ctx, &rest);
        if nf.len() <= 1 {
            let single = nf.to_doubled();
            if !single.syllables.is_empty() || factors.is_empty() {
                factors.push(single);
            }
            break;
        }
        let (last_side, last) = nf.syllables.last().cloned().expect("length >= 2");
        let head = NormalForm {
            c: nf.c.clone(),
            syllables: nf.syllables[..nf.len() - 1].to_vec(),
        }
        .to_doubled();
        let c0 = section[f.apply(&head) as usize].clone();
        let tail = DoubledWord::new([(last_side, c0.mul(&last))]);
        factors.push(tail);
        rest = head.mul(&DoubledWord::new([(last_side.flip(), c0.inverse())]));
    }
    factors.reverse();
    Ok(factors)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fw(s: &str) -> FreeWord {
        FreeWord::parse(s).unwrap()
    }

    fn product(ws: &[DoubledWord]) -> DoubledWord {
        ws.iter().fold(DoubledWord::identity(), |a, b| a.mul(b))
    }

    #[test]
    fn parse_doubled() {
        let w = DoubledWord::parse("x ~x^-1").unwrap();
        assert_eq!(
            w.syllables(),
            &[(Side::Plain, fw("x")), (Side::Mirror, fw("x^-1"))]
        );
        let w = DoubledWord::parse("~(x h)^2 h h^-1").unwrap();
        assert_eq!(w.syllables(), &[(Side::Mirror, fw("x h x h"))]);
        assert!(DoubledWord::parse("x ~").is_err());
        assert!(DoubledWord::parse("x ~y").is_err());
    }

    #[test]
    fn mirror_is_an_involution() {
        let ctx = AmalgamContext::new();
        let w = DoubledWord::parse("x h ~x^2 h^-1").unwrap();
        assert_eq!(mirror(&mirror(&w)), w);
        let h = DoubledWord::plain(fw("h"));
        assert!(amalgam_equal(&ctx, &mirror(&h), &h));
        let x = DoubledWord::plain(fw("x"));
        assert_eq!(mirror(&x), DoubledWord::mirrored(fw("x")));
        assert!(!amalgam_equal(&ctx, &mirror(&x), &x));
    }

    #[test]
    fn normal_form_examples() {
        let ctx = AmalgamContext::new();
        let nf = normal_form(&ctx, &DoubledWord::parse("h ~h^-1").unwrap());
        assert!(nf.c.is_identity() && nf.is_empty());

        let w = DoubledWord::parse("x ~x").unwrap();
        let nf = normal_form(&ctx, &w);
        assert_eq!(nf.len(), 2);
        assert!(nf.syllables.iter().all(|(_, s)| !s.is_identity()));
        // an equal input written differently: insert h ~h^-1 in the middle
        let w2 = DoubledWord::parse("x h ~h^-1 ~x").unwrap();
        assert_eq!(normal_form(&ctx, &w2), nf);
        assert!(amalgam_equal(&ctx, &nf.to_doubled(), &w));

        let m = normal_form(&ctx, &DoubledWord::parse("h x h x^-2").unwrap());
        assert_eq!(m.c, fw("h x h x^-2"));
        assert!(m.is_empty());
    }

    #[test]
    fn lengths() {
        let ctx = AmalgamContext::new();
        assert_eq!(syllable_length(&ctx, &DoubledWord::identity()), 0);
        assert_eq!(syllable_length(&ctx, &DoubledWord::plain(fw("x"))), 1);
        let w = DoubledWord::parse("x ~x x").unwrap();
        assert_eq!(syllable_length(&ctx, &w), 3);
        let nf = normal_form(&ctx, &w);
        assert!(!nf.syllables[1].1.is_identity());
    }

    #[test]
    fn decompose_pi41() {
        let ctx = AmalgamContext::new();
        let f = EquivariantHom::new(CyclicHom::pi_nk(4, 1));
        let w = DoubledWord::parse("x ~x^-1").unwrap();
        let parts = kernel_decompose(&ctx, &f, &w).unwrap();
        assert_eq!(
            parts,
            vec![
                DoubledWord::plain(fw("x h^-1")),
                DoubledWord::mirrored(fw("h x^-1"))
            ]
        );
        for p in &parts {
            assert_eq!(f.apply(p), 0);
            assert!(p.is_single_sided());
        }
        assert!(amalgam_equal(&ctx, &product(&parts), &w));
    }

    #[test]
    fn decompose_single_sided() {
        let ctx = AmalgamContext::new();
        let f = EquivariantHom::new(CyclicHom::pi_2());
        let w = DoubledWord::plain(fw("x h"));
        assert_eq!(kernel_decompose(&ctx, &f, &w).unwrap(), vec![w]);
    }

    #[test]
    fn decompose_pi2() {
        let ctx = AmalgamContext::new();
        let f = EquivariantHom::new(CyclicHom::pi_2());
        let w = DoubledWord::parse("h ~h").unwrap();
        let parts = kernel_decompose(&ctx, &f, &w).unwrap();
        for p in &parts {
            assert_eq!(f.apply(p), 0);
            assert!(p.is_single_sided());
        }
        assert!(amalgam_equal(&ctx, &product(&parts), &w));
    }

    #[test]
    fn decompose_errors() {
        let ctx = AmalgamContext::new();
        let f = EquivariantHom::new(CyclicHom::pi_2());
        assert_eq!(
            kernel_decompose(&ctx, &f, &DoubledWord::plain(fw("x"))),
            Err(AmalgamError::NotInKernel(1))
        );
        // Lambda contains h and h x h x^-2, so it surjects exactly when f does
        let bad = EquivariantHom::new(CyclicHom::new(4, 2, 2));
        assert_eq!(
            kernel_decompose(&ctx, &bad, &DoubledWord::identity()),
            Err(AmalgamError::SurjectivityFails(4))
        );
    }
}
