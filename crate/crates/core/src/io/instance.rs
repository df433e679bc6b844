//! Plain-text instance format.
//!
//! ```text
//! m n k noise_snr_db seed      header; noise_snr_db is a decimal or `none`
//! a_11 a_12 ... a_1n           m lines, one matrix row each
//! ...
//! y_1 ... y_m                  one line
//! x0_1 ... x0_n                one line, or the literal `none`
//! ```
//!
//! Values are separated by single spaces and written with 17 significant
//! digits (`{:.16e}`), which round-trips `f64` exactly. Blank lines are not
//! allowed; a trailing newline is.

use std::fmt::Write as _;
use std::path::Path;

use ndarray::{Array1, Array2};

use super::{read_to_string, write_atomic};
use crate::error::{Error, Result};
use crate::problem::{NoiseLevel, ProblemInstance};
use crate::scalar::Real;

fn push_row<T: Real>(out: &mut String, values: impl IntoIterator<Item = T>) {
    let mut first = true;
    for v in values {
        if !first {
            out.push(' ');
        }
        first = false;
        write!(out, "{v:.16e}").expect("writing to a String");
    }
    out.push('\n');
}

/// Text form of `inst`.
pub fn render_instance<T: Real>(inst: &ProblemInstance<T>) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{} {} {} {} {}",
        inst.m(),
        inst.n(),
        inst.k(),
        inst.noise(),
        inst.seed()
    )
    .expect("writing to a String");
    for row in inst.a().rows() {
        push_row(&mut out, row.iter().copied());
    }
    push_row(&mut out, inst.y().iter().copied());
    match inst.x0() {
        Some(x0) => push_row(&mut out, x0.iter().copied()),
        None => out.push_str("none\n"),
    }
    out
}

pub fn write_instance<T: Real>(inst: &ProblemInstance<T>, path: &Path) -> Result<()> {
    let text = render_instance(inst);
    write_atomic(path, |w| w.write_all(text.as_bytes()))
}

pub fn read_instance<T: Real>(path: &Path) -> Result<ProblemInstance<T>> {
    parse_instance(&read_to_string(path)?)
}

fn parse_int<V: std::str::FromStr>(tok: Option<&str>, line: usize, field: &str) -> Result<V> {
    let tok = tok.ok_or_else(|| Error::format(line, field, "missing value"))?;
    tok.parse()
        .map_err(|_| Error::format(line, field, format!("expected an integer, got `{tok}`")))
}

fn parse_values<T: Real>(
    text: Option<&str>,
    line: usize,
    field: &str,
    expect: usize,
) -> Result<Vec<T>> {
    let text = text.ok_or_else(|| Error::format(line, field, "unexpected end of file"))?;
    let mut out = Vec::with_capacity(expect);
    for (j, tok) in text.split_whitespace().enumerate() {
        let v: T = tok.parse().map_err(|_| {
            Error::format(
                line,
                format!("{field}[{j}]"),
                format!("not a number: `{tok}`"),
            )
        })?;
        if !v.is_finite() {
            return Err(Error::format(
                line,
                format!("{field}[{j}]"),
                "value is not finite",
            ));
        }
        out.push(v);
    }
    if out.len() != expect {
        return Err(Error::format(
            line,
            field,
            format!("expected {expect} values, found {}", out.len()),
        ));
    }
    Ok(out)
}

/// Parses the text format; errors carry the 1-based line and the field.
pub fn parse_instance<T: Real>(text: &str) -> Result<ProblemInstance<T>> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::format(1, "header", "empty file"))?;
    let mut h = header.split_whitespace();
    let m: usize = parse_int(h.next(), 1, "m")?;
    let n: usize = parse_int(h.next(), 1, "n")?;
    let k: usize = parse_int(h.next(), 1, "k")?;
    let noise = match h.next() {
        None => return Err(Error::format(1, "noise_snr_db", "missing value")),
        Some("none") => NoiseLevel::None,
        Some(tok) => NoiseLevel::SnrDb(tok.parse().map_err(|_| {
            Error::format(
                1,
                "noise_snr_db",
                format!("expected a number or `none`, got `{tok}`"),
            )
        })?),
    };
    let seed: u64 = parse_int(h.next(), 1, "seed")?;
    if let Some(extra) = h.next() {
        return Err(Error::format(
            1,
            "header",
            format!("unexpected token `{extra}`"),
        ));
    }
    if m == 0 || n == 0 {
        return Err(Error::format(1, "m", "dimensions must be positive"));
    }

    let mut data = Vec::with_capacity(m * n);
    for i in 0..m {
        let row = parse_values::<T>(lines.next(), i + 2, &format!("A[{i}]"), n)?;
        data.extend(row);
    }
    let y = parse_values::<T>(lines.next(), m + 2, "y", m)?;
    let x0_line = m + 3;
    let x0 = match lines.next() {
        None => return Err(Error::format(x0_line, "x0", "unexpected end of file")),
        Some(l) if l.trim() == "none" => None,
        Some(l) => Some(Array1::from(parse_values::<T>(Some(l), x0_line, "x0", n)?)),
    };
    if let Some((offset, _)) = lines.enumerate().find(|(_, l)| !l.trim().is_empty()) {
        return Err(Error::format(
            x0_line + 1 + offset,
            "trailer",
            "unexpected content after x0",
        ));
    }

    let a = Array2::from_shape_vec((m, n), data).expect("row count checked");
    ProblemInstance::new(a, Array1::from(y), x0, k, noise, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{InstanceSpec, SignalModel};

    fn sample(noise: NoiseLevel) -> ProblemInstance<f64> {
        ProblemInstance::generate(&InstanceSpec {
            m: 3,
            n: 5,
            k: 2,
            column_normalized: true,
            signal: SignalModel::ExactSparse,
            noise,
            seed: 99,
        })
        .unwrap()
    }

    #[test]
    fn round_trip_is_exact() {
        for noise in [NoiseLevel::None, NoiseLevel::SnrDb(20.0)] {
            let inst = sample(noise);
            let back: ProblemInstance<f64> = parse_instance(&render_instance(&inst)).unwrap();
            assert_eq!(back.a(), inst.a());
            assert_eq!(back.y(), inst.y());
            assert_eq!(back.x0(), inst.x0());
            assert_eq!(back.noise(), inst.noise());
            assert_eq!((back.k(), back.seed()), (2, 99));
        }
    }

    #[test]
    fn header_shape() {
        let text = render_instance(&sample(NoiseLevel::None));
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "3 5 2 none 99");
        let row: Vec<&str> = lines.next().unwrap().split(' ').collect();
        assert_eq!(row.len(), 5);
        // 17 significant digits
        let mantissa = row[0].trim_start_matches('-').split('e').next().unwrap();
        assert_eq!(mantissa.replace('.', "").len(), 17);
        assert_eq!(text.lines().count(), 1 + 3 + 1 + 1);
    }

    #[test]
    fn missing_ground_truth() {
        let text = "1 2 0 none 0\n1 0\n1\nnone\n";
        let inst: ProblemInstance<f64> = parse_instance(text).unwrap();
        assert!(inst.x0().is_none());
    }

    #[test]
    fn diagnostics_name_line_and_field() {
        let cases = [
            ("", 1, "header"),
            ("1 2 0 none\n", 1, "seed"),
            ("1 2 0 loud 0\n", 1, "noise_snr_db"),
            ("1 2 0 none 0\n1 x\n1\nnone\n", 2, "A[0][1]"),
            ("1 2 0 none 0\n1 0 3\n1\nnone\n", 2, "A[0]"),
            ("1 2 0 none 0\n1 0\n", 3, "y"),
            ("1 2 0 none 0\n1 0\n1\n", 4, "x0"),
            ("1 2 0 none 0\n1 0\n1\n1 2 3\n", 4, "x0"),
            ("1 2 0 none 0\n1 0\n1\nnone\nextra\n", 5, "trailer"),
        ];
        for (text, line, field) in cases {
            match parse_instance::<f64>(text) {
                Err(Error::Format {
                    line: l, field: f, ..
                }) => {
                    assert_eq!((l, f.as_str()), (line, field), "input {text:?}")
                }
                other => panic!("input {text:?}: expected format error, got {other:?}"),
            }
        }
    }

    #[test]
    fn semantic_errors_are_invalid_input() {
        // m >= n
        assert!(matches!(
            parse_instance::<f64>("2 2 0 none 0\n1 0\n0 1\n1 1\nnone\n"),
            Err(Error::InvalidInput(_))
        ));
    }
}
