//! Local periods and periodicity complexity of finite and infinite words.
//!
//! The crate is organised bottom-up:
//!
//! * [`words`]: alphabets, finite words, lazily generated infinite words and
//!   the word families used throughout (morphic fixed points, the nested
//!   block construction, Toeplitz fills).
//! * [`periodicity`]: periods, borders, Lyndon words, local periods with
//!   witnesses, periodicity complexity profiles and a brute-force oracle.
//! * [`factorization`]: occurrences, return words, maximal exponents, the
//!   chain of lexicographically minimal return words and the return-word
//!   and dyadic factorizations built on it.
//! * [`verify`]: one checker per claim, each producing a
//!   [`verify::VerificationReport`].
//! * [`cli`]: experiment configs, CSV/JSON export and batch runs.

pub mod cli;
pub mod error;
pub mod export;
pub mod factorization;
pub mod periodicity;
pub mod verify;
pub mod words;

pub use error::{Error, Result};

/// Exact rational used for every periodicity complexity value.
pub type Rational = num_rational::Ratio<u64>;
