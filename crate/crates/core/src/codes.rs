//! Alphabets, words and codes.
//!
//! Letters are stored as `u8` values `0..q`. In text form they are written
//! with the digits `0-9` followed by `a-z`, so codes up to `q = 36` have a
//! plain-text representation (header `q=<q> n=<n>`, then one word per line).
//!
//! For the binary letter product the two letters are called `a` and `b` with
//! `a ↦ 0 ↦ −1` and `b ↦ 1 ↦ +1`; `b` is the identity of the product.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::rng;
use crate::{Error, Result};

const MAX_Q: u32 = 256;
const TEXT_DIGITS: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyz";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alphabet {
    q: u32,
}

impl Alphabet {
    pub fn new(q: u32) -> Result<Self> {
        if q < 2 {
            return Err(Error::AlphabetTooSmall(q));
        }
        if q > MAX_Q {
            return Err(Error::AlphabetTooLarge(q));
        }
        Ok(Self { q })
    }

    pub fn binary() -> Self {
        Self { q: 2 }
    }

    pub fn q(&self) -> u32 {
        self.q
    }
}

/// A fixed-length string of letters.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Word(Vec<u8>);

impl Word {
    /// Builds a word, checking every letter against `alphabet`.
    pub fn new(letters: Vec<u8>, alphabet: Alphabet) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::EmptyWord);
        }
        if let Some((position, &l)) = letters
            .iter()
            .enumerate()
            .find(|(_, &l)| u32::from(l) >= alphabet.q())
        {
            return Err(Error::LetterOutOfRange {
                letter: u32::from(l),
                position,
                q: alphabet.q(),
            });
        }
        Ok(Self(letters))
    }

    /// Parses a binary word written with `a`/`b` letters.
    pub fn from_ab(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .enumerate()
            .map(|(position, c)| match c {
                'a' => Ok(0),
                'b' => Ok(1),
                _ => Err(Error::LetterOutOfRange {
                    letter: c as u32,
                    position,
                    q: 2,
                }),
            })
            .collect::<Result<Vec<u8>>>()?;
        Word::new(letters, Alphabet::binary())
    }

    /// Parses the digit form (`0-9a-z`).
    pub fn parse(s: &str, alphabet: Alphabet) -> Result<Self> {
        let letters = s
            .bytes()
            .enumerate()
            .map(|(position, c)| {
                TEXT_DIGITS
                    .iter()
                    .position(|&d| d == c)
                    .filter(|&v| (v as u32) < alphabet.q())
                    .map(|v| v as u8)
                    .ok_or(Error::LetterOutOfRange {
                        letter: u32::from(c),
                        position,
                        q: alphabet.q(),
                    })
            })
            .collect::<Result<Vec<u8>>>()?;
        Word::new(letters, alphabet)
    }

    /// Word with index `index` in the lexicographic enumeration of `A^n`.
    pub fn from_index(mut index: u64, q: u32, n: usize) -> Self {
        let mut letters = vec![0u8; n];
        for slot in letters.iter_mut().rev() {
            *slot = (index % u64::from(q)) as u8;
            index /= u64::from(q);
        }
        Self(letters)
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `a`/`b` rendering of a binary word.
    pub fn to_ab(&self) -> String {
        self.0.iter().map(|&l| if l == 0 { 'a' } else { 'b' }).collect()
    }

    /// Letter `k` as a spin: `a ↦ −1`, `b ↦ +1` (binary words).
    pub fn spin(&self, k: usize) -> i8 {
        if self.0[k] == 0 {
            -1
        } else {
            1
        }
    }

    pub fn hamming_weight(&self) -> usize {
        self.0.iter().filter(|&&l| l != 0).count()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.0 {
            match TEXT_DIGITS.get(usize::from(l)) {
                Some(&c) => write!(f, "{}", c as char)?,
                None => write!(f, "[{l}]")?,
            }
        }
        Ok(())
    }
}

/// A nonempty set of distinct equal-length words over one alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Code {
    alphabet: Alphabet,
    n: usize,
    words: Vec<Word>,
}

impl Code {
    /// Builds a code; words are validated, duplicates rejected, and the
    /// stored order is lexicographic.
    pub fn new(alphabet: Alphabet, n: usize, words: Vec<Word>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyWord);
        }
        if words.is_empty() {
            return Err(Error::EmptyCode);
        }
        let mut seen = BTreeSet::new();
        for w in &words {
            if w.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: w.len(),
                });
            }
            Word::new(w.0.clone(), alphabet)?;
            if !seen.insert(w.clone()) {
                return Err(Error::DuplicateWord(w.to_string()));
            }
        }
        Ok(Self {
            alphabet,
            n,
            words: seen.into_iter().collect(),
        })
    }

    /// Convenience constructor from digit strings.
    pub fn from_strs(q: u32, words: &[&str]) -> Result<Self> {
        let alphabet = Alphabet::new(q)?;
        let parsed = words
            .iter()
            .map(|s| Word::parse(s, alphabet))
            .collect::<Result<Vec<_>>>()?;
        let n = parsed.first().map_or(0, Word::len);
        Code::new(alphabet, n, parsed)
    }

    /// The full code `A^n`.
    pub fn full(q: u32, n: usize) -> Result<Self> {
        let alphabet = Alphabet::new(q)?;
        let count = checked_pow(q, n).filter(|&c| c <= 1 << 24).ok_or_else(|| {
            Error::Invalid(format!("full code {q}^{n} is too large to materialize"))
        })?;
        let words = (0..count).map(|i| Word::from_index(i, q, n)).collect();
        Code::new(alphabet, n, words)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn q(&self) -> u32 {
        self.alphabet.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn size(&self) -> usize {
        self.words.len()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.binary_search(w).is_ok()
    }

    /// Transmission rate `log_q(#C) / n`.
    pub fn rate(&self) -> f64 {
        (self.words.len() as f64).ln() / f64::from(self.alphabet.q).ln() / self.n as f64
    }

    /// Plain-text form: `q=<q> n=<n>` header, then one word per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("q={} n={}\n", self.q(), self.n);
        for w in &self.words {
            s.push_str(&w.to_string());
            s.push('\n');
        }
        s
    }

    /// Parses [`Code::to_text`] output. Blank lines and `#` comments are
    /// skipped; errors carry 1-based line numbers.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing `q=<q> n=<n>` header".into(),
        })?;
        let (q, n) = parse_header(header).ok_or_else(|| Error::Parse {
            line: hline,
            message: format!("malformed header `{header}`"),
        })?;
        if q > 36 {
            return Err(Error::Parse {
                line: hline,
                message: format!("text form supports q <= 36, got {q}"),
            });
        }
        let alphabet = Alphabet::new(q).map_err(|e| Error::Parse {
            line: hline,
            message: e.to_string(),
        })?;
        let mut words = Vec::new();
        let mut seen = HashSet::new();
        for (line, l) in lines {
            let w = Word::parse(l, alphabet).map_err(|e| Error::Parse {
                line,
                message: e.to_string(),
            })?;
            if w.len() != n {
                return Err(Error::Parse {
                    line,
                    message: format!("word `{l}` has length {}, expected {n}", w.len()),
                });
            }
            if !seen.insert(w.clone()) {
                return Err(Error::Parse {
                    line,
                    message: format!("duplicate word `{l}`"),
                });
            }
            words.push(w);
        }
        Code::new(alphabet, n, words).map_err(|e| Error::Parse {
            line: hline,
            message: e.to_string(),
        })
    }
}

fn parse_header(h: &str) -> Option<(u32, usize)> {
    let mut q = None;
    let mut n = None;
    for part in h.split_whitespace() {
        let (k, v) = part.split_once('=')?;
        match k {
            "q" => q = v.parse().ok(),
            "n" => n = v.parse().ok(),
            _ => return None,
        }
    }
    Some((q?, n?))
}

pub(crate) fn checked_pow(q: u32, n: usize) -> Option<u64> {
    u64::from(q).checked_pow(u32::try_from(n).ok()?)
}

/// A linear code: the row span of a generator matrix over a prime field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearCode {
    code: Code,
    /// Reduced row-echelon basis of the span.
    basis: Vec<Vec<u8>>,
}

impl LinearCode {
    pub fn code(&self) -> &Code {
        &self.code
    }

    pub fn into_code(self) -> Code {
        self.code
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u8>] {
        &self.basis
    }

    /// Exact rate as the pair `(k, n)`.
    pub fn rate_exact(&self) -> (usize, usize) {
        (self.basis.len(), self.code.n)
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // Fermat: a^(p-2)
    let (mut base, mut exp, mut acc) = (u64::from(a % p), p - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % u64::from(p);
        }
        base = base * base % u64::from(p);
        exp >>= 1;
    }
    acc as u32
}

/// Row span of `generator` over `F_p`.
pub fn linear_code(generator: &[Vec<u32>], p: u32) -> Result<LinearCode> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let alphabet = Alphabet::new(p)?;
    let n = generator.first().map_or(0, Vec::len);
    if n == 0 {
        return Err(Error::EmptyWord);
    }
    let mut rows: Vec<Vec<u32>> = Vec::with_capacity(generator.len());
    for (i, row) in generator.iter().enumerate() {
        if row.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: row.len(),
            });
        }
        if let Some((position, &v)) = row.iter().enumerate().find(|(_, &v)| v >= p) {
            return Err(Error::Invalid(format!(
                "generator entry {v} at row {i}, column {position} is not in F_{p}"
            )));
        }
        rows.push(row.clone());
    }

    // Gauss-Jordan elimination mod p.
    let mut rank = 0;
    for col in 0..n {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = inv_mod(rows[rank][col], p);
        for v in rows[rank].iter_mut() {
            *v = *v * inv % p;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let f = rows[r][col];
                for c in 0..n {
                    rows[r][c] = (rows[r][c] + (p - f) * rows[rank][c]) % p;
                }
            }
        }
        rank += 1;
    }
    rows.truncate(rank);

    let count = checked_pow(p, rank)
        .filter(|&c| c <= 1 << 24)
        .ok_or_else(|| Error::Invalid(format!("span of size {p}^{rank} is too large")))?;
    let mut words = Vec::with_capacity(count as usize);
    for idx in 0..count {
        let coeffs = Word::from_index(idx, p, rank.max(1));
        let mut w = vec![0u32; n];
        for (coef, row) in coeffs.letters().iter().zip(&rows) {
            for (acc, &g) in w.iter_mut().zip(row) {
                *acc = (*acc + u32::from(*coef) * g) % p;
            }
        }
        words.push(Word(w.into_iter().map(|v| v as u8).collect()));
    }
    let code = Code::new(alphabet, n, words)?;
    Ok(LinearCode {
        code,
        basis: rows
            .into_iter()
            .map(|r| r.into_iter().map(|v| v as u8).collect())
            .collect(),
    })
}

/// Letterwise product of binary words: equal letters give `b`, different
/// letters give `a`. Under `a ↦ −1, b ↦ +1` this is the spin product.
pub fn word_product(u: &Word, v: &Word) -> Result<Word> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch {
            expected: u.len(),
            got: v.len(),
        });
    }
    if let Some(&l) = u.0.iter().chain(&v.0).find(|&&l| l > 1) {
        return Err(Error::NotBinary(u32::from(l) + 1));
    }
    Ok(Word(
        u.0.iter()
            .zip(&v.0)
            .map(|(a, b)| u8::from(a == b))
            .collect(),
    ))
}

/// `size` distinct words of `A^n` drawn uniformly without replacement.
pub fn random_code(q: u32, n: usize, size: u64, seed: u64) -> Result<Code> {
    let alphabet = Alphabet::new(q)?;
    if n == 0 {
        return Err(Error::EmptyWord);
    }
    let total = checked_pow(q, n);
    let max = total.unwrap_or(u64::MAX);
    if size == 0 || size > max {
        return Err(Error::SizeOutOfRange { size, max });
    }
    if size > 1 << 24 {
        return Err(Error::Invalid(format!("code of {size} words is too large")));
    }
    let mut rng = rng::from_seed(seed);
    let words: Vec<Word> = match total {
        Some(t) if t <= 1 << 24 => {
            rand::seq::index::sample(&mut rng, t as usize, size as usize)
                .into_iter()
                .map(|i| Word::from_index(i as u64, q, n))
                .collect()
        }
        _ => {
            let mut set = HashSet::with_capacity(size as usize);
            let mut out = Vec::with_capacity(size as usize);
            while out.len() < size as usize {
                let w = Word((0..n).map(|_| rng.random_range(0..q) as u8).collect());
                if set.insert(w.clone()) {
                    out.push(w);
                }
            }
            out
        }
    };
    Code::new(alphabet, n, words)
}

/// A finite stretch of a code family with nondecreasing rates bounded by a
/// declared limit rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeFamily {
    codes: Vec<Code>,
    limit_rate: f64,
}

impl CodeFamily {
    pub fn new(codes: Vec<Code>, limit_rate: f64) -> Result<Self> {
        if codes.is_empty() {
            return Err(Error::Invalid("a code family needs at least one code".into()));
        }
        if !(limit_rate > 0.0 && limit_rate <= 1.0) {
            return Err(Error::Invalid(format!(
                "limit rate {limit_rate} outside (0, 1]"
            )));
        }
        let q = codes[0].q();
        let tol = 1e-12;
        for pair in codes.windows(2) {
            if pair[1].rate() + tol < pair[0].rate() {
                return Err(Error::Invalid("family rates must be nondecreasing".into()));
            }
        }
        for c in &codes {
            if c.q() != q {
                return Err(Error::Invalid("family codes must share one alphabet".into()));
            }
            if c.rate() > limit_rate + tol {
                return Err(Error::Invalid(format!(
                    "member rate {} exceeds limit {limit_rate}",
                    c.rate()
                )));
            }
        }
        Ok(Self { codes, limit_rate })
    }

    pub fn codes(&self) -> &[Code] {
        &self.codes
    }

    pub fn limit_rate(&self) -> f64 {
        self.limit_rate
    }

    pub fn max_rate(&self) -> f64 {
        self.codes.iter().map(Code::rate).fold(0.0, f64::max)
    }
}
