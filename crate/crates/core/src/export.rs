//! CSV, JSON and text renderings of profiles, factorizations and reports.
//!
//! Rationals are always written as separate numerator and denominator
//! fields. The `h_decimal_approx` column is a rounded convenience copy.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::factorization::{AlphaChain, ReturnFactorization};
use crate::periodicity::{h_of, PeriodProfile, PeriodValue};
use crate::words::Alphabet;
use crate::Rational;

/// Marker for a local period that exceeded the search cap.
pub const CAP_MARKER: &str = "CAP";

/// Width of wrapped text renderings of word prefixes.
pub const WRAP: usize = 64;

fn csv_string(build: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    build(&mut w).map_err(|e| Error::Io {
        path: "<csv>".into(),
        message: e.to_string(),
    })?;
    let bytes = w.into_inner().map_err(|e| Error::Io {
        path: "<csv>".into(),
        message: e.to_string(),
    })?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn decimal(r: Rational) -> String {
    format!("{:.6}", *r.numer() as f64 / *r.denom() as f64)
}

fn rational_json(r: Rational) -> Value {
    json!({ "numerator": r.numer(), "denominator": r.denom() })
}

/// Columns `index, local_period, h_numerator, h_denominator,
/// h_decimal_approx`; one row per position.
pub fn profile_csv(profile: &PeriodProfile) -> Result<String> {
    csv_string(|w| {
        w.write_record([
            "index",
            "local_period",
            "h_numerator",
            "h_denominator",
            "h_decimal_approx",
        ])?;
        for (k, (p, h)) in profile
            .local_periods
            .iter()
            .zip(&profile.h_values)
            .enumerate()
        {
            let p = match p {
                PeriodValue::Finite(p) => p.to_string(),
                PeriodValue::CapExceeded => CAP_MARKER.to_string(),
            };
            let (num, den, dec) = match h {
                Some(h) => (h.numer().to_string(), h.denom().to_string(), decimal(*h)),
                None => (String::new(), String::new(), String::new()),
            };
            w.write_record([(k + 1).to_string(), p, num, den, dec])?;
        }
        Ok(())
    })
}

pub fn profile_json(profile: &PeriodProfile) -> Value {
    let rows: Vec<Value> = profile
        .local_periods
        .iter()
        .zip(&profile.h_values)
        .enumerate()
        .map(|(k, (p, h))| {
            json!({
                "index": k + 1,
                "local_period": match p {
                    PeriodValue::Finite(p) => json!(p),
                    PeriodValue::CapExceeded => json!(CAP_MARKER),
                },
                "h": h.map(rational_json),
            })
        })
        .collect();
    json!({ "subject": profile.subject, "cap": profile.cap, "rows": rows })
}

/// `{z, e, preamble, returns, m_k, mu_k, horizon}`.
pub fn factorization_json(f: &ReturnFactorization, alphabet: &Alphabet) -> Value {
    json!({
        "z": alphabet.render(&f.z),
        "e": f.exponent,
        "preamble": alphabet.render(&f.preamble),
        "returns": f.returns.iter().map(|w| alphabet.render(w)).collect::<Vec<_>>(),
        "m_k": f.max_return_time,
        "mu_k": f.min_return_len,
        "horizon": f.horizon,
    })
}

/// Columns `index, offset, length, h_numerator, h_denominator`; one row
/// per return word.
pub fn factorization_csv(f: &ReturnFactorization) -> Result<String> {
    csv_string(|w| {
        w.write_record(["index", "offset", "length", "h_numerator", "h_denominator"])?;
        for (k, (word, offset)) in f.returns.iter().zip(&f.offsets).enumerate() {
            let h = h_of(word).expect("return words are nonempty");
            w.write_record([
                (k + 1).to_string(),
                offset.to_string(),
                word.len().to_string(),
                h.numer().to_string(),
                h.denom().to_string(),
            ])?;
        }
        Ok(())
    })
}

pub fn alpha_json(chain: &AlphaChain) -> Value {
    let entries: Vec<Value> = chain
        .entries
        .iter()
        .enumerate()
        .map(|(k, e)| {
            json!({
                "k": k + 1,
                "alpha": chain.alphabet.render(&e.alpha),
                "length": e.alpha.len(),
                "e": e.exponent,
                "certified": e.certified,
                "horizon": e.horizon,
            })
        })
        .collect();
    json!({ "entries": entries })
}

/// Columns `k, alpha, length, e, certified`.
pub fn alpha_csv(chain: &AlphaChain) -> Result<String> {
    csv_string(|w| {
        w.write_record(["k", "alpha", "length", "e", "certified"])?;
        for (k, e) in chain.entries.iter().enumerate() {
            w.write_record([
                (k + 1).to_string(),
                chain.alphabet.render(&e.alpha),
                e.alpha.len().to_string(),
                e.exponent.to_string(),
                e.certified.to_string(),
            ])?;
        }
        Ok(())
    })
}

/// Wraps `text` at [`WRAP`] columns, each line prefixed by the 1-based
/// position of its first letter, under a ruler marking every tenth column.
pub fn wrap_with_ruler(text: &str) -> String {
    let letters: Vec<char> = text.chars().collect();
    let width = letters.len().max(1).to_string().len();
    let mut ruler = String::new();
    for c in 1..=WRAP.min(letters.len().max(1)) {
        ruler.push(if c % 10 == 0 {
            char::from_digit((c / 10 % 10) as u32, 10).unwrap()
        } else if c % 5 == 0 {
            '+'
        } else {
            '.'
        });
    }
    let mut out = format!("{:>width$} {}\n", "", ruler, width = width);
    for (k, chunk) in letters.chunks(WRAP).enumerate() {
        let line: String = chunk.iter().collect();
        out.push_str(&format!(
            "{:>width$} {}\n",
            k * WRAP + 1,
            line,
            width = width
        ));
    }
    out
}
