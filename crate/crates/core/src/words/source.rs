use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use super::{Alphabet, FiniteWord, Letter};
use crate::error::{Error, Result};

/// Default number of base letters scanned when checking that a Toeplitz
/// base keeps producing holes.
pub const DEFAULT_HOLE_SCAN: usize = 4096;

/// Produces the letters of an infinite word.
///
/// `extend` is called with the already materialized prefix and must append
/// letters until `buf.len() >= len`. It may overshoot.
pub trait LetterGenerator: Send + Sync {
    fn extend(&self, buf: &mut Vec<Letter>, len: usize);
}

/// A lazily evaluated infinite word with a shared, growing prefix buffer.
///
/// Readers only take the read lock once the buffer is long enough; growth
/// happens under the write lock and doubles the buffer at least.
pub struct WordSource {
    descriptor: String,
    alphabet: Alphabet,
    generator: Box<dyn LetterGenerator>,
    buffer: RwLock<Vec<Letter>>,
}

impl WordSource {
    pub fn new(
        descriptor: impl Into<String>,
        alphabet: Alphabet,
        generator: Box<dyn LetterGenerator>,
    ) -> WordSource {
        WordSource {
            descriptor: descriptor.into(),
            alphabet,
            generator,
            buffer: RwLock::new(Vec::new()),
        }
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Number of letters materialized so far.
    pub fn materialized(&self) -> usize {
        self.buffer.read().unwrap().len()
    }

    pub fn ensure(&self, n: usize) {
        if self.buffer.read().unwrap().len() >= n {
            return;
        }
        let mut buf = self.buffer.write().unwrap();
        let have = buf.len();
        if have >= n {
            return;
        }
        let target = n.max(2 * have).max(16);
        self.generator.extend(&mut buf, target);
        assert!(
            buf.len() >= n,
            "generator for {} stopped at {} letters",
            self.descriptor,
            buf.len()
        );
    }

    /// Letter at 1-based index `i`.
    pub fn letter_at(&self, i: usize) -> Letter {
        assert!(i >= 1, "positions are 1-based");
        self.ensure(i);
        self.buffer.read().unwrap()[i - 1]
    }

    /// Runs `f` on the first `n` letters without copying them.
    pub fn with_prefix<R>(&self, n: usize, f: impl FnOnce(&[Letter]) -> R) -> R {
        self.ensure(n);
        let buf = self.buffer.read().unwrap();
        f(&buf[..n])
    }

    pub fn prefix(&self, n: usize) -> Vec<Letter> {
        self.with_prefix(n, |p| p.to_vec())
    }

    /// The first `n` letters as a finite word; fails if the prefix has holes.
    pub fn prefix_word(&self, n: usize) -> Result<FiniteWord> {
        FiniteWord::new(self.alphabet.clone(), self.prefix(n))
    }

    pub fn render_prefix(&self, n: usize) -> String {
        self.with_prefix(n, |p| self.alphabet.render(p))
    }
}

impl fmt::Debug for WordSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WordSource")
            .field("descriptor", &self.descriptor)
            .field("materialized", &self.materialized())
            .finish()
    }
}

struct Morphic {
    images: Vec<Vec<Letter>>,
    seed: Letter,
}

impl LetterGenerator for Morphic {
    fn extend(&self, buf: &mut Vec<Letter>, len: usize) {
        if buf.is_empty() {
            buf.push(self.seed);
        }
        // The buffer is a prefix of the fixed point, so its image is a longer one.
        while buf.len() < len {
            let next: Vec<Letter> = buf
                .iter()
                .flat_map(|l| self.images[l.rank() as usize].iter().copied())
                .collect();
            *buf = next;
        }
    }
}

/// Fixed point of a prolongable, non-erasing morphism.
///
/// The alphabet order is the order in which `rules` lists the letters.
pub fn morphic_source(rules: &[(char, &str)], seed: char) -> Result<WordSource> {
    let order: String = rules.iter().map(|(c, _)| *c).collect();
    let alphabet = Alphabet::new(&order)?;
    let mut images = vec![Vec::new(); alphabet.len()];
    for (c, image) in rules {
        let letter = alphabet.letter(*c)?;
        if image.is_empty() {
            return Err(Error::NotProlongable(format!(
                "rule for {:?} is erasing",
                c
            )));
        }
        images[letter.rank() as usize] = alphabet.parse(image)?;
    }
    let seed_letter = alphabet.letter(seed)?;
    let seed_image = &images[seed_letter.rank() as usize];
    if seed_image[0] != seed_letter {
        return Err(Error::NotProlongable(format!(
            "rule({}) = {} does not start with {}",
            seed,
            alphabet.render(seed_image),
            seed
        )));
    }
    if seed_image.len() < 2 {
        return Err(Error::NotProlongable(format!(
            "rule({}) = {} has length < 2",
            seed,
            alphabet.render(seed_image)
        )));
    }
    let descriptor = format!(
        "morphic:{};seed={}",
        rules
            .iter()
            .map(|(c, im)| format!("{}={}", c, im))
            .collect::<Vec<_>>()
            .join(","),
        seed
    );
    Ok(WordSource::new(
        descriptor,
        alphabet,
        Box::new(Morphic {
            images,
            seed: seed_letter,
        }),
    ))
}

struct Periodic {
    pattern: Vec<Letter>,
}

impl LetterGenerator for Periodic {
    fn extend(&self, buf: &mut Vec<Letter>, len: usize) {
        while buf.len() < len {
            let k = buf.len() % self.pattern.len();
            buf.push(self.pattern[k]);
        }
    }
}

/// The periodic word `pattern^ω`. The pattern may contain holes.
pub fn periodic_source(alphabet: &Alphabet, pattern: &str) -> Result<WordSource> {
    let letters = alphabet.parse_with_holes(pattern)?;
    if letters.is_empty() {
        return Err(Error::InvalidParams("empty period pattern".into()));
    }
    Ok(WordSource::new(
        format!("periodic:{}", pattern),
        alphabet.clone(),
        Box::new(Periodic { pattern: letters }),
    ))
}

struct Toeplitz {
    base: Arc<WordSource>,
    filler: Arc<WordSource>,
}

impl LetterGenerator for Toeplitz {
    fn extend(&self, buf: &mut Vec<Letter>, len: usize) {
        let base = self.base.prefix(len);
        let holes = base.iter().filter(|l| l.is_hole()).count();
        let fill = self.filler.prefix(holes);
        let mut next = fill.into_iter();
        buf.clear();
        buf.extend(
            base.into_iter()
                .map(|l| if l.is_hole() { next.next().unwrap() } else { l }),
        );
    }
}

/// `T(base, filler)`: the k-th hole of `base` receives the k-th letter of
/// `filler`; other positions are kept.
///
/// `base` must keep producing holes: at least one hole is required in the
/// second half of its first `scan` letters.
pub fn toeplitz_fill(
    base: Arc<WordSource>,
    filler: Arc<WordSource>,
    scan: usize,
) -> Result<WordSource> {
    let scan = scan.max(2);
    let late_hole = base.with_prefix(scan, |p| p[scan / 2..].iter().any(|l| l.is_hole()));
    if !late_hole {
        return Err(Error::InvalidParams(format!(
            "base {} shows no holes in positions {}..={}",
            base.descriptor(),
            scan / 2 + 1,
            scan
        )));
    }
    if base.alphabet() != filler.alphabet() {
        return Err(Error::AlphabetMismatch {
            left: base.alphabet().to_string(),
            right: filler.alphabet().to_string(),
        });
    }
    let descriptor = format!("T({}, {})", base.descriptor(), filler.descriptor());
    let alphabet = base.alphabet().clone();
    Ok(WordSource::new(
        descriptor,
        alphabet,
        Box::new(Toeplitz { base, filler }),
    ))
}

/// Parses `a=ab,b=a` into ordered rules.
pub(crate) fn parse_rules(text: &str) -> std::result::Result<Vec<(char, String)>, String> {
    let mut seen = BTreeMap::new();
    let mut rules = Vec::new();
    for part in text.split(',') {
        let (lhs, rhs) = part
            .split_once('=')
            .ok_or_else(|| format!("rule {:?} lacks '='", part))?;
        let mut chars = lhs.trim().chars();
        let c = match (chars.next(), chars.next()) {
            (Some(c), None) => c,
            _ => return Err(format!("rule head {:?} must be one letter", lhs)),
        };
        if seen.insert(c, ()).is_some() {
            return Err(format!("letter {:?} has two rules", c));
        }
        rules.push((c, rhs.trim().to_string()));
    }
    Ok(rules)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fib() -> WordSource {
        morphic_source(&[('a', "ab"), ('b', "a")], 'a').unwrap()
    }

    #[test]
    fn fibonacci_prefix() {
        assert_eq!(fib().render_prefix(13), "abaababaabaab");
    }

    #[test]
    fn thue_morse_prefix() {
        let tm = morphic_source(&[('a', "ab"), ('b', "ba")], 'a').unwrap();
        assert_eq!(tm.render_prefix(8), "abbabaab");
        assert_eq!(tm.render_prefix(16), "abbabaabbaababba");
    }

    #[test]
    fn non_prolongable_seed_is_rejected() {
        let err = morphic_source(&[('a', "ab"), ('b', "a")], 'b').unwrap_err();
        assert!(matches!(err, Error::NotProlongable(_)), "{}", err);
        let err = morphic_source(&[('a', "a"), ('b', "b")], 'a').unwrap_err();
        assert!(matches!(err, Error::NotProlongable(_)));
        let err = morphic_source(&[('a', "ab"), ('b', "")], 'a').unwrap_err();
        assert!(matches!(err, Error::NotProlongable(_)));
    }

    #[test]
    fn prefixes_are_stable_under_growth() {
        let s = fib();
        let short = s.prefix(7);
        s.ensure(1000);
        assert_eq!(&s.prefix(1000)[..7], &short[..]);
        assert_eq!(s.letter_at(7), short[6]);
    }

    #[test]
    fn buffer_grows_geometrically() {
        let s = periodic_source(&Alphabet::binary(), "abb").unwrap();
        s.ensure(20);
        s.ensure(21);
        assert!(s.materialized() >= 40);
    }

    #[test]
    fn toeplitz_examples() {
        let ab = Alphabet::binary();
        let holes = Arc::new(periodic_source(&ab, "?").unwrap());
        let filler = Arc::new(periodic_source(&ab, "abb?").unwrap());
        let t1 = toeplitz_fill(holes, filler.clone(), 64).unwrap();
        assert_eq!(t1.render_prefix(4), "abb?");
        assert_eq!(t1.render_prefix(8), "abb?abb?");
        let base = Arc::new(periodic_source(&ab, "abb?").unwrap());
        let t2 = toeplitz_fill(base, filler, 64).unwrap();
        assert_eq!(t2.render_prefix(16), "abbaabbbabbbabb?");
    }

    #[test]
    fn toeplitz_of_all_holes_is_the_filler() {
        let ab = Alphabet::binary();
        let holes = Arc::new(periodic_source(&ab, "?").unwrap());
        let t = toeplitz_fill(holes, Arc::new(fib()), 64);
        // fib() is over "ab" built from rule order, which equals the binary alphabet
        let t = t.unwrap();
        assert_eq!(t.render_prefix(50), fib().render_prefix(50));
    }

    #[test]
    fn toeplitz_rejects_hole_free_base() {
        let ab = Alphabet::binary();
        let base = Arc::new(periodic_source(&ab, "ab").unwrap());
        let filler = Arc::new(periodic_source(&ab, "a").unwrap());
        assert!(toeplitz_fill(base, filler, 128).is_err());
    }

    #[test]
    fn rule_parsing() {
        assert_eq!(
            parse_rules("a=ab,b=a").unwrap(),
            vec![('a', "ab".to_string()), ('b', "a".to_string())]
        );
        assert!(parse_rules("a=ab,a=b").is_err());
        assert!(parse_rules("ab=a").is_err());
        assert!(parse_rules("a").is_err());
    }

    #[test]
    fn concurrent_readers_agree() {
        let s = Arc::new(fib());
        let expected = fib().prefix(5000);
        let handles: Vec<_> = (0..4)
            .map(|t| {
                let s = s.clone();
                std::thread::spawn(move || {
                    (1..=5000)
                        .filter(|i| i % 4 == t)
                        .map(|i| (i, s.letter_at(i)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, l) in h.join().unwrap() {
                assert_eq!(l, expected[i - 1]);
            }
        }
    }
}
