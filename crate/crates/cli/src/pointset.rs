//! The `kk-pointset v1` text format.
//!
//! ```text
//! kk-pointset v1 k=<k> m=<m> w=<w_size> n=<count>
//! <hex>
//! ...
//! ```
//!
//! One line per point in canonical enumeration order. Each line is the
//! cross vector as lowercase hex, zero-padded to `ceil(w / 4)` digits, with
//! the last digit carrying bits 0..4 (bit 0 is the pair `{1,2}`).

use std::collections::HashSet;
use std::io::{self, BufRead, Write};

use borsuk_core::construction::{
    cross_set, enumerate_points, make_params, pair_index, Block, CrossVector, Params,
};

pub const MAGIC: &str = "kk-pointset v1";

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error(transparent)]
    Io(#[from] io::Error),

    #[error("bad header: {0}")]
    Header(String),

    #[error("line {line}: {reason}")]
    Line { line: usize, reason: String },

    #[error("expected {expected} points, found {found}")]
    Count { expected: u64, found: u64 },

    #[error(transparent)]
    Core(#[from] borsuk_core::Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    pub params: Params,
    pub points: Vec<CrossVector>,
}

pub fn encode_hex(x: &CrossVector) -> String {
    let digits = x.len().div_ceil(4);
    let words = x.words();
    (0..digits)
        .rev()
        .map(|nib| {
            let bit = nib * 4;
            let value = (words[bit / 64] >> (bit % 64)) & 0xf;
            char::from_digit(value as u32, 16).expect("nibble")
        })
        .collect()
}

pub fn decode_hex(text: &str, len: usize) -> Result<CrossVector, String> {
    let digits = len.div_ceil(4);
    if text.len() != digits {
        return Err(format!(
            "expected {digits} hex digits, found {}",
            text.len()
        ));
    }
    let mut words = vec![0u64; len.div_ceil(64)];
    for (pos, ch) in text.bytes().enumerate() {
        let value = match ch {
            b'0'..=b'9' => ch - b'0',
            b'a'..=b'f' => ch - b'a' + 10,
            _ => return Err(format!("invalid character {:?}", ch as char)),
        } as u64;
        let bit = (digits - 1 - pos) * 4;
        if bit / 64 >= words.len() {
            if value != 0 {
                return Err("bits set beyond the pair space".into());
            }
            continue;
        }
        words[bit / 64] |= value << (bit % 64);
    }
    CrossVector::from_words(words, len).map_err(|e| e.to_string())
}

pub fn header(params: &Params) -> String {
    format!(
        "{MAGIC} k={} m={} w={} n={}",
        params.k,
        params.m,
        params.w_size,
        params.point_count()
    )
}

/// Writes every point of `K` for this `k`; returns the number written.
pub fn write_pointset(
    out: &mut impl Write,
    k: u64,
    enumeration_cap: u64,
) -> Result<u64, FormatError> {
    let params = make_params(k)?;
    let points = enumerate_points(&params, enumeration_cap)?;
    writeln!(out, "{}", header(&params))?;
    let mut n = 0;
    for (_, x) in points {
        writeln!(out, "{}", encode_hex(&x))?;
        n += 1;
    }
    out.flush()?;
    Ok(n)
}

fn header_field(token: Option<&str>, name: &str) -> Result<u64, FormatError> {
    let token = token.ok_or_else(|| FormatError::Header(format!("missing {name}=")))?;
    token
        .strip_prefix(name)
        .and_then(|t| t.strip_prefix('='))
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| FormatError::Header(format!("expected {name}=<integer>, found {token:?}")))
}

// Recovers the canonical block from a vector that should be S(A) with
// 1 ∈ A: element b > 1 is in A iff the pair {1, b} is absent.
fn canonical_preimage(x: &CrossVector, params: &Params) -> Option<Block> {
    let mut elements = vec![1];
    for b in 2..=params.m {
        let i = pair_index(1, b, params).ok()? as usize;
        if !x.get(i) {
            elements.push(b);
        }
    }
    Block::from_elements(&elements, params).ok()
}

/// Reads and validates a point set: header consistency, one well-formed
/// line per point, popcount `4k^2`, each line a genuine `S(A)`, no
/// duplicates, and exactly `C(m, 2k) / 2` lines.
pub fn read_pointset(input: impl BufRead) -> Result<PointSet, FormatError> {
    let mut lines = input.lines();
    let head = lines
        .next()
        .ok_or_else(|| FormatError::Header("empty file".into()))??;
    let rest = head
        .strip_prefix(MAGIC)
        .ok_or_else(|| FormatError::Header(format!("expected {MAGIC:?} prefix")))?;
    let mut tokens = rest.split_whitespace();
    let k = header_field(tokens.next(), "k")?;
    let m = header_field(tokens.next(), "m")?;
    let w = header_field(tokens.next(), "w")?;
    let n = header_field(tokens.next(), "n")?;
    if let Some(extra) = tokens.next() {
        return Err(FormatError::Header(format!("unexpected token {extra:?}")));
    }
    let params = make_params(k)?;
    if m != params.m || w != params.w_size {
        return Err(FormatError::Header(format!(
            "k={k} implies m={} w={}, header says m={m} w={w}",
            params.m, params.w_size
        )));
    }
    if params.m > 64 {
        return Err(FormatError::Header(format!("k={k} is too large to import")));
    }
    let expected = params.point_count();
    if n != expected {
        return Err(FormatError::Header(format!(
            "k={k} has {expected} points, header says n={n}"
        )));
    }

    let len = params.w_size as usize;
    let mut points = Vec::with_capacity(expected as usize);
    let mut seen = HashSet::with_capacity(expected as usize);
    for (idx, line) in lines.enumerate() {
        let line_no = idx + 2;
        let line = line?;
        let text = line.trim_end();
        if text.is_empty() {
            continue;
        }
        let bad = |reason: String| FormatError::Line {
            line: line_no,
            reason,
        };
        let x = decode_hex(text, len).map_err(bad)?;
        if x.popcount() != params.cross_size() {
            return Err(bad(format!(
                "popcount {} but every point has {}",
                x.popcount(),
                params.cross_size()
            )));
        }
        let genuine = canonical_preimage(&x, &params)
            .and_then(|a| cross_set(a, &params).ok())
            .is_some_and(|y| y == x);
        if !genuine {
            return Err(bad("not the cross set of any block".into()));
        }
        if !seen.insert(x.clone()) {
            return Err(bad("duplicate point".into()));
        }
        points.push(x);
    }
    if points.len() as u64 != expected {
        return Err(FormatError::Count {
            expected,
            found: points.len() as u64,
        });
    }
    Ok(PointSet { params, points })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_examples() {
        let p = make_params(1).unwrap();
        let a = Block::from_elements(&[1, 2], &p).unwrap();
        // Bits {1,2,3,4} -> 0b011110 = 0x1e, two digits for w = 6.
        let x = cross_set(a, &p).unwrap();
        assert_eq!(encode_hex(&x), "1e");
        assert_eq!(decode_hex("1e", 6).unwrap(), x);
        assert!(decode_hex("1E", 6).is_err());
        assert!(decode_hex("e", 6).is_err());
        assert!(decode_hex("40", 6).is_err());
    }

    #[test]
    fn hex_round_trip_across_words() {
        let p = make_params(4).unwrap();
        for (_, x) in enumerate_points(&p, 4).unwrap().take(50) {
            let text = encode_hex(&x);
            assert_eq!(text.len(), 30);
            assert_eq!(decode_hex(&text, 120).unwrap(), x);
        }
    }

    #[test]
    fn header_format() {
        assert_eq!(
            header(&make_params(2).unwrap()),
            "kk-pointset v1 k=2 m=8 w=28 n=35"
        );
    }

    #[test]
    fn rejects_malformed_headers() {
        for text in [
            "",
            "kk-pointset v2 k=1 m=4 w=6 n=3\n",
            "kk-pointset v1 k=1 m=5 w=6 n=3\n",
            "kk-pointset v1 k=1 m=4 w=6 n=4\n",
            "kk-pointset v1 k=1 m=4 w=6\n",
            "kk-pointset v1 k=x m=4 w=6 n=3\n",
        ] {
            assert!(read_pointset(text.as_bytes()).is_err(), "{text:?}");
        }
    }

    #[test]
    fn rejects_non_cross_sets() {
        // 0x0f has the right popcount for k = 1 but is not S(A) for any A.
        let text = "kk-pointset v1 k=1 m=4 w=6 n=3\n1e\n2d\n0f\n";
        let err = read_pointset(text.as_bytes()).unwrap_err();
        assert!(matches!(err, FormatError::Line { line: 4, .. }), "{err}");
    }

    #[test]
    fn rejects_duplicates_and_short_files() {
        let text = "kk-pointset v1 k=1 m=4 w=6 n=3\n1e\n1e\n2d\n";
        assert!(matches!(
            read_pointset(text.as_bytes()),
            Err(FormatError::Line { line: 3, .. })
        ));
        let text = "kk-pointset v1 k=1 m=4 w=6 n=3\n1e\n2d\n";
        assert!(matches!(
            read_pointset(text.as_bytes()),
            Err(FormatError::Count {
                expected: 3,
                found: 2
            })
        ));
    }
}
