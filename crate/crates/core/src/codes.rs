//! Random binary codes, the induced binary symmetric channel, and the
//! bounded-distance / nearest-codeword decoders used for honest recovery.
//!
//! Codes are explicit tables (k <= 20); each codeword is an independent
//! uniform n-bit string determined by the sampling seed. Decoding is
//! deterministic: ties are always broken toward the lexicographically
//! smallest message.

use crate::entropy::{binary_entropy, binary_entropy_derivative};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::io::{BufRead, Write};
use thiserror::Error;

/// Largest supported message length in bits (table size 2^k).
pub const MAX_MESSAGE_BITS: usize = 20;

#[derive(Debug, Error)]
pub enum CodeError {
    #[error("invalid slacks: {0}")]
    InvalidSlacks(String),
    #[error("rate too low: k = {0} < 1")]
    RateTooLow(i64),
    #[error("k = {0} exceeds the table cap of {MAX_MESSAGE_BITS}")]
    TooLarge(usize),
    #[error("message {msg} out of range for k = {k}")]
    MessageOutOfRange { msg: u64, k: usize },
    #[error("length mismatch: word has {got} bits, code has n = {want}")]
    LengthMismatch { got: usize, want: usize },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// sin^2(pi/8), the per-bit error probability induced by reading a
/// conjugate-coded qubit in the recovery basis.
pub fn channel_error_probability() -> f64 {
    (std::f64::consts::PI / 8.0).sin().powi(2)
}

/// Rate and radius parameters of the honest-decoding setup.
///
/// Invariants: p_e = sin^2(pi/8); k = floor(n (1 - h(p_e) - theta)) >= 1;
/// r = n (p_e + tau); 0 <= tau <= 1/2 - p_e; theta > tau h'(p_e).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodeParams {
    pub n: usize,
    pub k: usize,
    pub theta: f64,
    pub tau: f64,
    /// Decoding radius in bits; kept real-valued, comparisons use floor(r).
    pub r: f64,
    pub p_e: f64,
}

fn check_slacks(theta: f64, tau: f64) -> Result<(), CodeError> {
    let p_e = channel_error_probability();
    if !(0.0..=0.5 - p_e).contains(&tau) {
        return Err(CodeError::InvalidSlacks(format!(
            "tau = {tau} outside [0, 1/2 - p_e = {}]",
            0.5 - p_e
        )));
    }
    let hp = binary_entropy_derivative(p_e).expect("p_e is interior");
    if theta <= tau * hp {
        return Err(CodeError::InvalidSlacks(format!(
            "theta = {theta} <= tau h'(p_e) = {}",
            tau * hp
        )));
    }
    Ok(())
}

/// Derives the full parameter set from (n, theta, tau).
pub fn derive_params(n: usize, theta: f64, tau: f64) -> Result<CodeParams, CodeError> {
    check_slacks(theta, tau)?;
    let p_e = channel_error_probability();
    let rate = 1.0 - binary_entropy(p_e) - theta;
    let k = (n as f64 * rate).floor() as i64;
    if k < 1 {
        return Err(CodeError::RateTooLow(k));
    }
    Ok(CodeParams {
        n,
        k: k as usize,
        theta,
        tau,
        r: n as f64 * (p_e + tau),
        p_e,
    })
}

/// A table mapping k-bit messages to n-bit codewords, sampled uniformly and
/// reproducibly from a 64-bit seed.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomCode {
    k: usize,
    n: usize,
    seed: u64,
    /// Row-major bits, 2^k rows of n entries in {0,1}.
    bits: Vec<u8>,
}

impl RandomCode {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn rows(&self) -> usize {
        1usize << self.k
    }

    pub fn codeword(&self, msg: u64) -> Result<&[u8], CodeError> {
        if msg >= (1u64 << self.k) {
            return Err(CodeError::MessageOutOfRange { msg, k: self.k });
        }
        let start = msg as usize * self.n;
        Ok(&self.bits[start..start + self.n])
    }
}

/// Samples 2^k independent uniform n-bit codewords from the seed.
pub fn sample_code(k: usize, n: usize, seed: u64) -> Result<RandomCode, CodeError> {
    if k > MAX_MESSAGE_BITS {
        return Err(CodeError::TooLarge(k));
    }
    let rows = 1usize << k;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut bits = vec![0u8; rows * n];
    for b in bits.iter_mut() {
        *b = rng.random_range(0..2u8);
    }
    Ok(RandomCode { k, n, seed, bits })
}

/// Flips each bit independently with probability p.
pub fn bsc_channel(word: &[u8], p: f64, rng: &mut impl Rng) -> Vec<u8> {
    word.iter()
        .map(|&b| {
            if rng.random::<f64>() < p {
                b ^ 1
            } else {
                b
            }
        })
        .collect()
}

/// Hamming distance between equal-length bit slices.
pub fn hamming_distance(a: &[u8], b: &[u8]) -> usize {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Returns the lexicographically smallest message whose codeword lies within
/// Hamming distance floor(r) of z, or None if there is no such message.
pub fn bounded_distance_decode(
    code: &RandomCode,
    z: &[u8],
    r: f64,
) -> Result<Option<u64>, CodeError> {
    if z.len() != code.n {
        return Err(CodeError::LengthMismatch {
            got: z.len(),
            want: code.n,
        });
    }
    let radius = r.floor();
    if radius < 0.0 {
        return Ok(None);
    }
    let radius = radius as usize;
    for msg in 0..code.rows() as u64 {
        if hamming_distance(code.codeword(msg)?, z) <= radius {
            return Ok(Some(msg));
        }
    }
    Ok(None)
}

/// Maximum-likelihood decoding for the symmetric channel: the message whose
/// codeword is nearest to z, lexicographically smallest on ties.
pub fn nearest_codeword_decode(code: &RandomCode, z: &[u8]) -> Result<u64, CodeError> {
    if z.len() != code.n {
        return Err(CodeError::LengthMismatch {
            got: z.len(),
            want: code.n,
        });
    }
    let mut best = 0u64;
    let mut best_dist = usize::MAX;
    for msg in 0..code.rows() as u64 {
        let d = hamming_distance(code.codeword(msg)?, z);
        if d < best_dist {
            best = msg;
            best_dist = d;
        }
    }
    Ok(best)
}

/// The random-coding success bound: with probability >= 1 - 1/lambda over
/// the code, honest decoding succeeds with probability at least
/// 1 - lambda (e^{-2 tau^2 n} + 2^{-n (theta - tau h'(p_e))}).
///
/// Returns (code confidence 1 - 1/lambda, success bound clamped at 0). The
/// bound is asymptotic; at desk scale it is typically vacuous (zero after
/// clamping), which is reported as computed.
pub fn decode_success_bound(
    n: usize,
    theta: f64,
    tau: f64,
    lambda: f64,
) -> Result<(f64, f64), CodeError> {
    if lambda < 1.0 {
        return Err(CodeError::InvalidSlacks(format!("lambda = {lambda} < 1")));
    }
    check_slacks(theta, tau)?;
    let p_e = channel_error_probability();
    let hp = binary_entropy_derivative(p_e).expect("p_e is interior");
    let nf = n as f64;
    let tail = (-2.0 * tau * tau * nf).exp() + 2f64.powf(-nf * (theta - tau * hp));
    let success = (1.0 - lambda * tail).max(0.0);
    Ok((1.0 - 1.0 / lambda, success))
}

// ---------------------------------------------------------------------------
// File format: header "k n seed", then 2^k rows of hexadecimal codewords.
// ---------------------------------------------------------------------------

fn word_to_hex(bits: &[u8]) -> String {
    // Bits are packed MSB-first into an integer of width n, printed with
    // fixed width ceil(n/4).
    let width = bits.len().div_ceil(4);
    let mut digits = vec![0u8; width];
    for (i, &b) in bits.iter().enumerate() {
        if b != 0 {
            // bit i is at position (n-1-i) from the least significant end
            let pos = bits.len() - 1 - i;
            digits[width - 1 - pos / 4] |= 1 << (pos % 4);
        }
    }
    digits
        .iter()
        .map(|d| char::from_digit(*d as u32, 16).unwrap())
        .collect()
}

fn hex_to_word(s: &str, n: usize, line: usize) -> Result<Vec<u8>, CodeError> {
    let width = n.div_ceil(4);
    if s.len() != width {
        return Err(CodeError::Parse {
            line,
            msg: format!("expected {width} hex digits, got {}", s.len()),
        });
    }
    let mut bits = vec![0u8; n];
    for (j, ch) in s.chars().enumerate() {
        let d = ch.to_digit(16).ok_or_else(|| CodeError::Parse {
            line,
            msg: format!("invalid hex digit {ch:?}"),
        })? as u8;
        for t in 0..4 {
            let pos = (width - 1 - j) * 4 + (3 - t);
            if pos < n {
                bits[n - 1 - pos] = (d >> (3 - t)) & 1;
            }
        }
    }
    Ok(bits)
}

/// Writes the code table: header line "k n seed", then hexadecimal rows.
pub fn write_code(code: &RandomCode, w: &mut impl Write) -> Result<(), CodeError> {
    writeln!(w, "{} {} {}", code.k, code.n, code.seed)?;
    for msg in 0..code.rows() as u64 {
        writeln!(w, "{}", word_to_hex(code.codeword(msg)?))?;
    }
    Ok(())
}

/// Reads a code table written by [`write_code`]. Round-trips bit-exactly.
pub fn read_code(r: &mut impl BufRead) -> Result<RandomCode, CodeError> {
    let lines: Vec<String> = r.lines().collect::<Result<_, _>>()?;
    parse_code_lines(&lines)
}

/// Parses the lines of a code table (header plus 2^k codeword rows). The
/// slice must contain exactly the table.
pub fn parse_code_lines(lines: &[String]) -> Result<RandomCode, CodeError> {
    let header = lines.first().ok_or(CodeError::Parse {
        line: 1,
        msg: "missing header".into(),
    })?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 3 {
        return Err(CodeError::Parse {
            line: 1,
            msg: "header must be 'k n seed'".into(),
        });
    }
    let k: usize = parts[0].parse().map_err(|_| CodeError::Parse {
        line: 1,
        msg: "bad k".into(),
    })?;
    let n: usize = parts[1].parse().map_err(|_| CodeError::Parse {
        line: 1,
        msg: "bad n".into(),
    })?;
    let seed: u64 = parts[2].parse().map_err(|_| CodeError::Parse {
        line: 1,
        msg: "bad seed".into(),
    })?;
    if k > MAX_MESSAGE_BITS {
        return Err(CodeError::TooLarge(k));
    }
    let rows = 1usize << k;
    if lines.len() != rows + 1 {
        return Err(CodeError::Parse {
            line: lines.len(),
            msg: format!("expected {rows} codeword rows after the header"),
        });
    }
    let mut bits = Vec::with_capacity(rows * n);
    for (i, line) in lines[1..].iter().enumerate() {
        bits.extend(hex_to_word(line.trim(), n, i + 2)?);
    }
    Ok(RandomCode { k, n, seed, bits })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn channel_error_probability_value() {
        let p = channel_error_probability();
        assert_abs_diff_eq!(p, 0.14644661, epsilon = 1e-8);
        // 1 - cos^2(pi/8)
        assert_abs_diff_eq!(
            p,
            1.0 - (std::f64::consts::PI / 8.0).cos().powi(2),
            epsilon = 1e-15
        );
    }

    #[test]
    fn derive_params_examples() {
        let p = derive_params(64, 0.08, 0.02).unwrap();
        assert_eq!(p.k, 20);
        assert_abs_diff_eq!(p.r, 10.65, epsilon = 0.01);
        // theta below tau h'(p_e) is rejected: 0.05 < 0.0509
        assert!(matches!(
            derive_params(64, 0.05, 0.02),
            Err(CodeError::InvalidSlacks(_))
        ));
        // k < 1 is rejected
        assert!(matches!(
            derive_params(2, 0.39, 0.02),
            Err(CodeError::RateTooLow(_))
        ));
        // theta -> 0+ gives rate -> 1 - h(p_e) ~ 0.3991
        let p = derive_params(100_000, 1e-6, 1e-8).unwrap();
        assert_abs_diff_eq!(p.k as f64 / p.n as f64, 0.3991, epsilon = 1e-3);
    }

    #[test]
    fn sample_code_is_deterministic() {
        let a = sample_code(4, 16, 99).unwrap();
        let b = sample_code(4, 16, 99).unwrap();
        assert_eq!(a, b);
        let c = sample_code(4, 16, 100).unwrap();
        assert_ne!(a, c);
        // k = 0: a single codeword
        let z = sample_code(0, 8, 1).unwrap();
        assert_eq!(z.rows(), 1);
        assert!(matches!(sample_code(21, 4, 0), Err(CodeError::TooLarge(21))));
    }

    #[test]
    fn bsc_endpoints() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let w = vec![0, 1, 1, 0, 1];
        assert_eq!(bsc_channel(&w, 0.0, &mut rng), w);
        assert_eq!(bsc_channel(&w, 1.0, &mut rng), vec![1, 0, 0, 1, 0]);
    }

    #[test]
    fn bounded_distance_examples() {
        let code = sample_code(3, 12, 5).unwrap();
        // clean codeword decodes to its message when it is the unique hit
        for msg in 0..8u64 {
            let z = code.codeword(msg).unwrap().to_vec();
            if let Some(got) = bounded_distance_decode(&code, &z, 0.0).unwrap() {
                // lexicographic rule: the returned message's codeword equals z
                assert_eq!(code.codeword(got).unwrap(), &z[..]);
                assert!(got <= msg);
            }
        }
        // negative radius: none for all z
        let z = vec![0u8; 12];
        assert_eq!(bounded_distance_decode(&code, &z, -1.0).unwrap(), None);
    }

    #[test]
    fn nearest_codeword_agrees_with_bounded() {
        let code = sample_code(4, 16, 17).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(18);
        for _ in 0..50 {
            let z: Vec<u8> = (0..16).map(|_| rng.random_range(0..2u8)).collect();
            let nn = nearest_codeword_decode(&code, &z).unwrap();
            let d_nn = hamming_distance(code.codeword(nn).unwrap(), &z);
            // bounded-distance decode at exactly that radius must find a
            // message at distance <= d_nn; by the lex rule both pick the
            // smallest message among hits when the radius equals d_nn and
            // no strictly closer codeword exists
            let bd = bounded_distance_decode(&code, &z, d_nn as f64)
                .unwrap()
                .unwrap();
            let d_bd = hamming_distance(code.codeword(bd).unwrap(), &z);
            assert!(d_bd <= d_nn);
        }
    }

    #[test]
    fn clean_codewords_round_trip_when_distinct() {
        for seed in 0..20u64 {
            let code = sample_code(4, 24, seed).unwrap();
            let mut words: Vec<&[u8]> = (0..16).map(|m| code.codeword(m).unwrap()).collect();
            words.sort();
            words.dedup();
            if words.len() < 16 {
                continue; // a collision voids the round-trip guarantee
            }
            for msg in 0..16u64 {
                let z = code.codeword(msg).unwrap().to_vec();
                assert_eq!(nearest_codeword_decode(&code, &z).unwrap(), msg);
            }
        }
    }

    #[test]
    fn single_flip_decodes_to_same_message_when_code_is_spread() {
        // find a seed whose code has pairwise distance > 2, flip one bit
        let mut found = false;
        'seeds: for seed in 0..50u64 {
            let code = sample_code(3, 24, seed).unwrap();
            for a in 0..8u64 {
                for b in (a + 1)..8u64 {
                    let d = hamming_distance(code.codeword(a).unwrap(), code.codeword(b).unwrap());
                    if d <= 2 {
                        continue 'seeds;
                    }
                }
            }
            found = true;
            for msg in 0..8u64 {
                let mut z = code.codeword(msg).unwrap().to_vec();
                z[5] ^= 1;
                assert_eq!(nearest_codeword_decode(&code, &z).unwrap(), msg);
            }
            break;
        }
        assert!(found, "no spread code among the sampled seeds");
    }

    #[test]
    fn decode_success_bound_examples() {
        // tau = 0 degenerates: success component clamps to 0
        let (conf, succ) = decode_success_bound(64, 0.08, 0.0, 1.0).unwrap();
        assert_abs_diff_eq!(conf, 0.0, epsilon = 1e-15);
        assert_eq!(succ, 0.0);
        // desk-scale parameters: bound is vacuous, clamped to 0
        let (conf, succ) = decode_success_bound(64, 0.08, 0.02, 2.0).unwrap();
        assert_abs_diff_eq!(conf, 0.5, epsilon = 1e-15);
        assert_eq!(succ, 0.0);
        // large n at lambda = 1: success -> 1
        let (_, succ) = decode_success_bound(100_000, 0.08, 0.02, 1.0).unwrap();
        assert!(succ > 0.999);
        assert!(decode_success_bound(64, 0.08, 0.02, 0.5).is_err());
    }

    #[test]
    fn bound_monotonicity_grid() {
        let mut last = 0.0;
        for n in [500, 1000, 2000, 4000] {
            let (_, s) = decode_success_bound(n, 0.08, 0.02, 1.5).unwrap();
            assert!(s >= last);
            last = s;
        }
        let (_, loose) = decode_success_bound(4000, 0.08, 0.02, 1.0).unwrap();
        let (_, tight) = decode_success_bound(4000, 0.08, 0.02, 4.0).unwrap();
        assert!(tight <= loose);
    }

    #[test]
    fn code_file_round_trip() {
        for (k, n) in [(0, 5), (3, 12), (5, 64), (4, 7)] {
            let code = sample_code(k, n, 1234).unwrap();
            let mut buf = Vec::new();
            write_code(&code, &mut buf).unwrap();
            let back = read_code(&mut &buf[..]).unwrap();
            assert_eq!(code, back);
            // byte-identical re-serialization
            let mut buf2 = Vec::new();
            write_code(&back, &mut buf2).unwrap();
            assert_eq!(buf, buf2);
        }
    }
}
