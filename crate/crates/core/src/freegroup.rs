//! Reduced words in the free group `F_b` and endomorphisms given by
//! generator images.

use std::fmt;

use num_bigint::BigInt;

use crate::intlinalg::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FreeGroupError {
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("generator {gen} out of range for rank {rank}")]
    GeneratorOutOfRange { gen: usize, rank: usize },
    #[error("word length exceeds the limit of {limit} letters")]
    TooLong { limit: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: usize, inverse: bool) -> Self {
        Self { gen, inverse }
    }

    pub fn pos(gen: usize) -> Self {
        Self::new(gen, false)
    }

    pub fn neg(gen: usize) -> Self {
        Self::new(gen, true)
    }

    pub fn inv(self) -> Self {
        Self::new(self.gen, !self.inverse)
    }

    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    /// `a..z` for generators, uppercase for inverses.
    pub fn from_char(c: char) -> Option<Self> {
        if c.is_ascii_lowercase() {
            Some(Self::pos((c as u8 - b'a') as usize))
        } else if c.is_ascii_uppercase() {
            Some(Self::neg((c as u8 - b'A') as usize))
        } else {
            None
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gen < 26 {
            let base = if self.inverse { b'A' } else { b'a' };
            write!(f, "{}", (base + self.gen as u8) as char)
        } else if self.inverse {
            write!(f, "G{}", self.gen)
        } else {
            write!(f, "g{}", self.gen)
        }
    }
}

/// A freely reduced word.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

pub fn reduce_word(raw: impl IntoIterator<Item = Letter>) -> Word {
    let mut letters: Vec<Letter> = Vec::new();
    for l in raw {
        if letters.last() == Some(&l.inv()) {
            letters.pop();
        } else {
            letters.push(l);
        }
    }
    Word { letters }
}

impl Word {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Parses letters `a..z` / `A..Z`, skipping whitespace. Panics otherwise.
    pub fn parse(s: &str) -> Self {
        reduce_word(
            s.chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| Letter::from_char(c).expect("letter")),
        )
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        reduce_word(self.letters.iter().chain(&other.letters).copied())
    }

    pub fn max_gen(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.gen).max()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Endomorphism {
    rank: usize,
    images: Vec<Word>,
}

impl Endomorphism {
    pub fn new(rank: usize, images: Vec<Word>) -> Result<Self, FreeGroupError> {
        if images.len() != rank {
            return Err(FreeGroupError::RankMismatch {
                expected: rank,
                got: images.len(),
            });
        }
        if let Some(gen) = images.iter().filter_map(Word::max_gen).find(|&g| g >= rank) {
            return Err(FreeGroupError::GeneratorOutOfRange { gen, rank });
        }
        Ok(Self { rank, images })
    }

    /// Shorthand for tests and examples: one word string per generator.
    pub fn from_strs(images: &[&str]) -> Result<Self, FreeGroupError> {
        Self::new(images.len(), images.iter().map(|s| Word::parse(s)).collect())
    }

    pub fn identity(rank: usize) -> Self {
        Self {
            rank,
            images: (0..rank).map(|g| Word { letters: vec![Letter::pos(g)] }).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, gen: usize) -> &Word {
        &self.images[gen]
    }

    pub fn image_of_letter(&self, l: Letter) -> Word {
        if l.inverse {
            self.images[l.gen].inverse()
        } else {
            self.images[l.gen].clone()
        }
    }

    pub fn apply(&self, w: &Word) -> Result<Word, FreeGroupError> {
        if let Some(gen) = w.max_gen().filter(|&g| g >= self.rank) {
            return Err(FreeGroupError::GeneratorOutOfRange { gen, rank: self.rank });
        }
        Ok(reduce_word(
            w.letters
                .iter()
                .flat_map(|&l| self.image_of_letter(l).letters),
        ))
    }

    /// `psi^k`; `psi^0` is the identity.
    pub fn power(&self, k: u32) -> Endomorphism {
        self.power_bounded(k, usize::MAX).expect("unbounded")
    }

    /// `psi^k`, failing once any image would exceed `limit` letters.
    pub fn power_bounded(&self, k: u32, limit: usize) -> Result<Endomorphism, FreeGroupError> {
        if k == 0 {
            return Ok(Endomorphism::identity(self.rank));
        }
        let mut cur = self.clone();
        for _ in 1..k {
            let images = cur
                .images
                .iter()
                .map(|w| {
                    let out = self.apply(w).expect("same rank");
                    if out.len() > limit {
                        Err(FreeGroupError::TooLong { limit })
                    } else {
                        Ok(out)
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            cur = Endomorphism { rank: self.rank, images };
        }
        if cur.images.iter().any(|w| w.len() > limit) {
            return Err(FreeGroupError::TooLong { limit });
        }
        Ok(cur)
    }

    /// Entry `(i, j)` is the signed count of generator `i` in the image of `j`.
    pub fn abelianize(&self) -> IntMatrix {
        let b = self.rank;
        let mut counts = vec![0i64; b * b];
        for (j, w) in self.images.iter().enumerate() {
            for l in w.letters() {
                counts[l.gen * b + j] += l.sign();
            }
        }
        IntMatrix::new(b, counts.into_iter().map(BigInt::from).collect()).expect("square")
    }

    /// `M > 1` when every image has length `M` and no two-letter reduced word
    /// cancels at the junction of its image.
    pub fn uniform_expansion(&self) -> Option<usize> {
        let m = self.images.first()?.len();
        if m <= 1 || self.images.iter().any(|w| w.len() != m) {
            return None;
        }
        let letters: Vec<Letter> = (0..self.rank)
            .flat_map(|g| [Letter::pos(g), Letter::neg(g)])
            .collect();
        for &x in &letters {
            for &y in &letters {
                if y == x.inv() {
                    continue;
                }
                let w = Word { letters: vec![x, y] };
                if self.apply(&w).expect("in range").len() != 2 * m {
                    return None;
                }
            }
        }
        Some(m)
    }
}

impl fmt::Display for Endomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (g, w) in self.images.iter().enumerate() {
            if g > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{} -> {}", Letter::pos(g), w)?;
        }
        Ok(())
    }
}
