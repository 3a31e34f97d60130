//! Letters, alphabets, finite words and lazily generated infinite words.
//!
//! Letters are stored as their rank in the alphabet, so the derived `Ord`
//! on [`Letter`] and on `[Letter]` slices is exactly the lexicographic
//! order induced by the alphabet (with a proper prefix sorting first).

mod descriptor;
mod nested;
mod source;

pub use descriptor::{Descriptor, RepetitionBound};
pub use nested::{
    nested_block, nested_for_target, nested_formula_word, nested_letter, nested_toeplitz,
    nested_word, NestedParams, Tail,
};
pub use source::{
    morphic_source, periodic_source, toeplitz_fill, LetterGenerator, WordSource, DEFAULT_HOLE_SCAN,
};

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Symbol used in text I/O for the Toeplitz hole.
pub const HOLE_SYMBOL: char = '?';

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(u8);

impl Letter {
    /// Reserved letter outside every alphabet.
    pub const HOLE: Letter = Letter(u8::MAX);

    pub fn from_rank(rank: u8) -> Letter {
        assert!(rank != u8::MAX, "rank {} is reserved for the hole", rank);
        Letter(rank)
    }

    pub fn rank(self) -> u8 {
        self.0
    }

    pub fn is_hole(self) -> bool {
        self == Letter::HOLE
    }
}

/// An ordered set of at least two distinct symbols; the first is the least.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Arc<[char]>,
}

impl Alphabet {
    pub fn new(symbols: &str) -> Result<Alphabet> {
        let symbols: Vec<char> = symbols.chars().collect();
        if symbols.len() < 2 {
            return Err(Error::InvalidAlphabet(
                "an alphabet needs at least two letters".into(),
            ));
        }
        if symbols.len() >= u8::MAX as usize {
            return Err(Error::InvalidAlphabet("too many letters".into()));
        }
        for (k, c) in symbols.iter().enumerate() {
            if *c == HOLE_SYMBOL {
                return Err(Error::InvalidAlphabet(format!(
                    "{:?} is reserved for holes",
                    HOLE_SYMBOL
                )));
            }
            if symbols[..k].contains(c) {
                return Err(Error::InvalidAlphabet(format!("duplicate letter {:?}", c)));
            }
        }
        Ok(Alphabet {
            symbols: symbols.into(),
        })
    }

    /// The alphabet `{a < b}` used by every construction in this crate.
    pub fn binary() -> Alphabet {
        Alphabet::new("ab").unwrap()
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn least(&self) -> Letter {
        Letter(0)
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.symbols.len()).map(|r| Letter(r as u8))
    }

    pub fn letter(&self, symbol: char) -> Result<Letter> {
        self.symbols
            .iter()
            .position(|&c| c == symbol)
            .map(|r| Letter(r as u8))
            .ok_or_else(|| Error::UnknownSymbol {
                symbol,
                alphabet: self.to_string(),
            })
    }

    pub fn symbol(&self, letter: Letter) -> char {
        if letter.is_hole() {
            HOLE_SYMBOL
        } else {
            self.symbols[letter.0 as usize]
        }
    }

    pub fn parse(&self, text: &str) -> Result<Vec<Letter>> {
        text.chars().map(|c| self.letter(c)).collect()
    }

    /// Like [`Alphabet::parse`] but also accepts the hole symbol.
    pub fn parse_with_holes(&self, text: &str) -> Result<Vec<Letter>> {
        text.chars()
            .map(|c| {
                if c == HOLE_SYMBOL {
                    Ok(Letter::HOLE)
                } else {
                    self.letter(c)
                }
            })
            .collect()
    }

    pub fn render(&self, letters: &[Letter]) -> String {
        letters.iter().map(|&l| self.symbol(l)).collect()
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in self.symbols.iter() {
            write!(f, "{}", c)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alphabet({})", self)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteWord {
    alphabet: Alphabet,
    letters: Vec<Letter>,
}

impl FiniteWord {
    pub fn new(alphabet: Alphabet, letters: Vec<Letter>) -> Result<FiniteWord> {
        if let Some(&bad) = letters
            .iter()
            .find(|l| l.is_hole() || l.0 as usize >= alphabet.len())
        {
            let symbol = if bad.is_hole() {
                HOLE_SYMBOL
            } else {
                '\u{fffd}'
            };
            return Err(Error::UnknownSymbol {
                symbol,
                alphabet: alphabet.to_string(),
            });
        }
        Ok(FiniteWord { alphabet, letters })
    }

    pub fn parse(alphabet: &Alphabet, text: &str) -> Result<FiniteWord> {
        Ok(FiniteWord {
            alphabet: alphabet.clone(),
            letters: alphabet.parse(text)?,
        })
    }

    /// Parses over the binary alphabet `ab`.
    pub fn binary(text: &str) -> Result<FiniteWord> {
        FiniteWord::parse(&Alphabet::binary(), text)
    }

    pub fn empty(alphabet: &Alphabet) -> FiniteWord {
        FiniteWord {
            alphabet: alphabet.clone(),
            letters: Vec::new(),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Letter at 1-based position `i`.
    pub fn at(&self, i: usize) -> Option<Letter> {
        i.checked_sub(1).and_then(|k| self.letters.get(k).copied())
    }

    /// The factor occupying 1-based positions `from..=to`.
    pub fn factor(&self, from: usize, to: usize) -> FiniteWord {
        FiniteWord {
            alphabet: self.alphabet.clone(),
            letters: self.letters[from - 1..to].to_vec(),
        }
    }

    pub fn concat(&self, other: &FiniteWord) -> Result<FiniteWord> {
        self.check_same_alphabet(other)?;
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(FiniteWord {
            alphabet: self.alphabet.clone(),
            letters,
        })
    }

    pub fn pow(&self, e: usize) -> FiniteWord {
        FiniteWord {
            alphabet: self.alphabet.clone(),
            letters: self.letters.repeat(e),
        }
    }

    fn check_same_alphabet(&self, other: &FiniteWord) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch {
                left: self.alphabet.to_string(),
                right: other.alphabet.to_string(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.alphabet.render(&self.letters))
    }
}

impl fmt::Debug for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_string())
    }
}

/// Lexicographic comparison; a proper prefix is strictly smaller.
pub fn lex_compare(left: &FiniteWord, right: &FiniteWord) -> Result<Ordering> {
    left.check_same_alphabet(right)?;
    Ok(left.letters.cmp(&right.letters))
}
