use crate::error::{Error, Result};

/// Duval's algorithm: the lengths of the Lyndon factors of `w`, in order.
pub fn lyndon_factorization<T: Ord>(w: &[T]) -> Vec<usize> {
    let n = w.len();
    let mut factors = Vec::new();
    let mut start = 0;
    while start < n {
        let mut k = start;
        let mut j = start + 1;
        while j < n && w[k] <= w[j] {
            if w[k] < w[j] {
                k = start;
            } else {
                k += 1;
            }
            j += 1;
        }
        let len = j - k;
        while start <= k {
            factors.push(len);
            start += len;
        }
    }
    factors
}

pub fn is_primitive<T: PartialEq>(w: &[T]) -> Result<bool> {
    let p = super::period(w)?;
    Ok(p == w.len() || !w.len().is_multiple_of(p))
}

/// A Lyndon word is its own (only) Lyndon factor.
pub fn is_lyndon<T: Ord>(w: &[T]) -> Result<bool> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok(lyndon_factorization(w) == [w.len()])
}

/// The lexicographically least rotation of `w`.
pub fn least_conjugate<T: Ord + Clone>(w: &[T]) -> Result<Vec<T>> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let n = w.len();
    let doubled: Vec<&T> = w.iter().chain(w.iter()).collect();
    // The least rotation starts at the last Lyndon factor of ww beginning before n.
    let mut start = 0;
    let mut best = 0;
    for len in lyndon_factorization(&doubled) {
        if start < n {
            best = start;
        }
        start += len;
    }
    Ok(doubled[best..best + n].iter().map(|&t| t.clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Alphabet;

    fn w(s: &str) -> Vec<crate::words::Letter> {
        Alphabet::binary().parse(s).unwrap()
    }

    #[test]
    fn lyndon_examples() {
        assert_eq!(is_lyndon(&w("aab")), Ok(true));
        assert_eq!(is_lyndon(&w("abab")), Ok(false));
        assert_eq!(is_lyndon(&w("a")), Ok(true));
        assert_eq!(is_lyndon(&w("aba")), Ok(false));
        assert_eq!(is_lyndon(&w("aabab")), Ok(true));
        assert!(is_lyndon::<u8>(&[]).is_err());
    }

    #[test]
    fn least_conjugate_examples() {
        assert_eq!(least_conjugate(&w("aba")).unwrap(), w("aab"));
        assert_eq!(least_conjugate(&w("abab")).unwrap(), w("abab"));
        assert_eq!(least_conjugate(&w("bba")).unwrap(), w("abb"));
        assert_eq!(least_conjugate(&w("b")).unwrap(), w("b"));
    }

    #[test]
    fn duval_factors() {
        // b | aab | a  -> lyndon factors in nonincreasing order
        assert_eq!(lyndon_factorization(&w("baaba")), vec![1, 3, 1]);
        assert_eq!(lyndon_factorization(&w("abab")), vec![2, 2]);
    }

    #[test]
    fn primitivity() {
        assert_eq!(is_primitive(&w("abab")), Ok(false));
        assert_eq!(is_primitive(&w("aba")), Ok(true));
        assert_eq!(is_primitive(&w("aaa")), Ok(false));
        assert_eq!(is_primitive(&w("a")), Ok(true));
    }

    fn naive_least_rotation(w: &[u8]) -> Vec<u8> {
        (0..w.len())
            .map(|k| [&w[k..], &w[..k]].concat())
            .min()
            .unwrap()
    }

    #[test]
    fn least_conjugate_matches_naive_on_small_words() {
        for len in 1..=10 {
            for bits in 0..(1u32 << len) {
                let word: Vec<u8> = (0..len).map(|k| ((bits >> k) & 1) as u8).collect();
                let naive = naive_least_rotation(&word);
                assert_eq!(least_conjugate(&word).unwrap(), naive);
                let lyndon = is_primitive(&word).unwrap() && naive == word;
                assert_eq!(is_lyndon(&word).unwrap(), lyndon, "{:?}", word);
                if lyndon {
                    assert!(super::super::is_unbordered(&word).unwrap());
                }
            }
        }
    }
}
