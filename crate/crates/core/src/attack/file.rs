//! Text format for custom attacks:
//!
//! ```text
//! dim 36
//! J
//! <N*N pairs "re im", row-major, any whitespace>
//! K
//! <N*N pairs>
//! ```
//!
//! `#` starts a comment that runs to the end of the line.

use std::io::Write;
use std::path::Path;

use super::AttackUnitary;
use crate::error::{Error, Result};
use crate::qmath::{ComplexMatrix, C64};

struct Token<'a> {
    line: usize,
    text: &'a str,
}

fn tokens(src: &str) -> Vec<Token<'_>> {
    src.lines()
        .enumerate()
        .flat_map(|(i, line)| {
            let body = line.split('#').next().unwrap_or("");
            body.split_whitespace().map(move |text| Token { line: i + 1, text })
        })
        .collect()
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn read_matrix<'a>(
    it: &mut std::iter::Peekable<impl Iterator<Item = Token<'a>>>,
    label: &str,
    n: usize,
    last_line: usize,
) -> Result<ComplexMatrix> {
    match it.next() {
        Some(t) if t.text == label => {}
        Some(t) => return Err(parse_err(t.line, format!("expected label '{label}', found '{}'", t.text))),
        None => return Err(parse_err(last_line, format!("missing matrix '{label}'"))),
    }
    let mut data = Vec::with_capacity(n * n);
    let mut line = last_line;
    for _ in 0..n * n {
        let mut pair = [0.0; 2];
        for slot in &mut pair {
            let t = it
                .next()
                .ok_or_else(|| parse_err(line, format!("matrix '{label}' ends after {} of {} entries", data.len(), n * n)))?;
            line = t.line;
            *slot = t
                .text
                .parse::<f64>()
                .map_err(|_| parse_err(t.line, format!("'{}' is not a number", t.text)))?;
            if !slot.is_finite() {
                return Err(parse_err(t.line, format!("non-finite entry '{}'", t.text)));
            }
        }
        data.push(C64::new(pair[0], pair[1]));
    }
    ComplexMatrix::from_vec(n, n, data)
}

pub fn parse_attack_file(name: &str, src: &str) -> Result<AttackUnitary> {
    let toks = tokens(src);
    let last_line = toks.last().map_or(1, |t| t.line);
    let mut it = toks.into_iter().peekable();

    let n = match (it.next(), it.next()) {
        (Some(kw), Some(value)) if kw.text == "dim" => value
            .text
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| parse_err(value.line, format!("invalid dimension '{}'", value.text)))?,
        (Some(t), _) => return Err(parse_err(t.line, "expected header 'dim <N>'")),
        (None, _) => return Err(parse_err(1, "empty attack file")),
    };
    let j = read_matrix(&mut it, "J", n, last_line)?;
    let k = read_matrix(&mut it, "K", n, last_line)?;
    if let Some(t) = it.next() {
        return Err(parse_err(t.line, format!("unexpected trailing token '{}'", t.text)));
    }
    AttackUnitary::new(name, j, k)
}

pub fn read_attack_file(path: &Path) -> std::io::Result<Result<AttackUnitary>> {
    let src = std::fs::read_to_string(path)?;
    let name = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("custom")
        .to_string();
    Ok(parse_attack_file(&name, &src))
}

pub fn write_attack_file<W: Write>(attack: &AttackUnitary, mut out: W) -> std::io::Result<()> {
    let n = attack.be_dim();
    writeln!(out, "dim {n}")?;
    for (label, m) in [("J", attack.j()), ("K", attack.k())] {
        writeln!(out, "{label}")?;
        for i in 0..n {
            let row: Vec<String> = m.row(i).iter().map(|z| format!("{:?} {:?}", z.re, z.im)).collect();
            writeln!(out, "{}", row.join("  "))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attack::{builtin_attack, BuiltinAttack};
    use crate::fockspace::CompositeSpace;

    #[test]
    fn round_trips_builtin() {
        let att = builtin_attack(BuiltinAttack::Intercept, &CompositeSpace::default()).unwrap();
        let mut buf = Vec::new();
        write_attack_file(&att, &mut buf).unwrap();
        let back = parse_attack_file("intercept", std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(back, att);
    }

    #[test]
    fn small_file_with_comments() {
        let src = "# Hadamard-like probe\ndim 2\nJ\n0.7071067811865476 0  0.7071067811865476 0\n\
                   0.7071067811865476 0 -0.7071067811865476 0\nK # identity\n1 0 0 0\n0 0 1 0\n";
        let att = parse_attack_file("h", src).unwrap();
        assert_eq!(att.be_dim(), 2);
        assert_eq!(att.k(), &ComplexMatrix::identity(2));
    }

    #[test]
    fn reports_line_numbers() {
        let src = "dim 2\nJ\n1 0 0 0\n0 0 x 0\nK\n1 0 0 0 0 0 1 0\n";
        assert_eq!(
            parse_attack_file("bad", src).unwrap_err(),
            Error::Parse {
                line: 4,
                message: "'x' is not a number".into()
            }
        );
        let truncated = "dim 2\nJ\n1 0 0 0\n0 0 1 0\nK\n1 0\n";
        assert!(matches!(
            parse_attack_file("short", truncated),
            Err(Error::Parse { line: 6, .. })
        ));
        assert!(matches!(
            parse_attack_file("header", "size 2\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn rejects_non_unitary_with_worst_entry() {
        let src = "dim 2\nJ\n1 0 0 0\n0 0 2 0\nK\n1 0 0 0\n0 0 1 0\n";
        match parse_attack_file("bad", src).unwrap_err() {
            Error::NotUnitary { row, col, deviation } => {
                assert_eq!((row, col), (1, 1));
                assert!((deviation - 3.0).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
