//! CSV interchange: `# key=value` comment lines, a header row, then one row
//! per term with the exponents followed by (re, im) pairs per component.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use super::{MultiIndex, TruncatedSeries};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A parsed series file together with its comment metadata.
#[derive(Debug, Clone)]
pub struct SeriesCsv<S> {
    pub series: TruncatedSeries<S>,
    pub names: Vec<String>,
    pub meta: BTreeMap<String, String>,
}

/// Writes `s` with variable names `names` and extra `# key=value` lines
/// emitted after the mandatory `# trunc=T` line.
pub fn write_series_csv<S: Scalar, W: Write>(
    s: &TruncatedSeries<S>,
    names: &[String],
    meta: &[(String, String)],
    out: &mut W,
) -> Result<()> {
    let io = |e: std::io::Error| Error::InvalidInput(e.to_string());
    if names.len() != s.dim() {
        return Err(Error::DimensionMismatch(names.len(), s.dim()));
    }
    writeln!(out, "# trunc={}", s.trunc_order()).map_err(io)?;
    for (k, v) in meta {
        writeln!(out, "# {k}={v}").map_err(io)?;
    }
    let mut header: Vec<String> = names.to_vec();
    for k in 1..=s.width() {
        header.push(format!("re{k}"));
        header.push(format!("im{k}"));
    }
    writeln!(out, "{}", header.join(",")).map_err(io)?;
    for (b, c) in s.iter() {
        if c.iter().all(|x| x.is_zero()) {
            continue;
        }
        let mut row: Vec<String> = b.0.iter().map(|e| e.to_string()).collect();
        for x in c {
            let (re, im) = x.format_parts();
            row.push(re);
            row.push(im);
        }
        writeln!(out, "{}", row.join(",")).map_err(io)?;
    }
    Ok(())
}

fn is_value_column(name: &str) -> bool {
    let rest = name.strip_prefix("re").or_else(|| name.strip_prefix("im"));
    matches!(rest, Some(r) if !r.is_empty() && r.chars().all(|c| c.is_ascii_digit()))
}

pub fn read_series_csv<S: Scalar, R: BufRead>(input: R) -> Result<SeriesCsv<S>> {
    let mut meta = BTreeMap::new();
    let mut body = String::new();
    for line in input.lines() {
        let line = line.map_err(|e| Error::Parse(e.to_string()))?;
        let t = line.trim();
        if let Some(c) = t.strip_prefix('#') {
            if let Some((k, v)) = c.split_once('=') {
                meta.insert(k.trim().to_string(), v.trim().to_string());
            }
        } else if !t.is_empty() {
            body.push_str(t);
            body.push('\n');
        }
    }
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(body.as_bytes());
    let header = rdr.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
    if header.is_empty() {
        return Err(Error::Parse("missing header row".into()));
    }
    let names: Vec<String> = header
        .iter()
        .take_while(|h| !is_value_column(h))
        .map(|h| h.trim().to_string())
        .collect();
    let d = names.len();
    let values = header.len() - d;
    if d == 0 || values == 0 || !values.is_multiple_of(2) {
        return Err(Error::Parse(format!("bad header: {:?}", header)));
    }
    let width = values / 2;
    let trunc: u32 = match meta.get("trunc") {
        Some(t) => t.parse().map_err(|_| Error::Parse(format!("bad trunc {t}")))?,
        None => return Err(Error::Parse("missing `# trunc=T` line".into())),
    };
    let mut terms = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
        if rec.len() != d + values {
            return Err(Error::Parse(format!("row has {} fields, expected {}", rec.len(), d + values)));
        }
        let beta = rec
            .iter()
            .take(d)
            .map(|x| x.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent {x}"))))
            .collect::<Result<Vec<_>>>()?;
        let coef = (0..width)
            .map(|k| S::parse_parts(&rec[d + 2 * k], &rec[d + 2 * k + 1]))
            .collect::<Result<Vec<_>>>()?;
        if beta.iter().sum::<u32>() > trunc {
            return Err(Error::Parse(format!("term {:?} exceeds trunc={trunc}", beta)));
        }
        terms.push((MultiIndex(beta), coef));
    }
    let series = TruncatedSeries::from_terms(d, width, trunc, terms)?;
    Ok(SeriesCsv { series, names, meta })
}
