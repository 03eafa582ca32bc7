use std::io::{BufRead, Write};

use super::BorelSeries;
use crate::error::{Error, Result};
use crate::monomial::MonomialOrder;
use crate::scalar::{parse_q, Scalar, Q};
use crate::series::{read_series_csv, write_series_csv};

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Series CSV plus `# offset=`, `# alpha=`, `# k=` and `# s=` lines.
pub fn write_borel_csv<S: Scalar, W: Write>(g: &BorelSeries<S>, names: &[String], out: &mut W) -> Result<()> {
    let meta = vec![
        ("offset".to_string(), join(&g.offset)),
        ("alpha".to_string(), join(&g.order.alpha().0)),
        ("k".to_string(), g.order.k().to_string()),
        ("s".to_string(), join(g.order.weights())),
    ];
    write_series_csv(&g.body, names, &meta, out)
}

pub fn read_borel_csv<S: Scalar, R: BufRead>(input: R) -> Result<(BorelSeries<S>, Vec<String>)> {
    let csv = read_series_csv::<S, R>(input)?;
    let field = |key: &str| {
        csv.meta
            .get(key)
            .ok_or_else(|| Error::Parse(format!("missing `# {key}=` line")))
    };
    let qs = |v: &str| v.split(',').map(|x| parse_q(x.trim())).collect::<Result<Vec<Q>>>();
    let offset = qs(field("offset")?)?;
    let alpha = field("alpha")?
        .split(',')
        .map(|x| x.trim().parse::<u32>().map_err(|e| Error::Parse(e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    let order = MonomialOrder::new(alpha, parse_q(field("k")?)?, qs(field("s")?)?)?;
    if offset.len() != csv.series.dim() || order.dim() != csv.series.dim() {
        return Err(Error::DimensionMismatch(offset.len(), csv.series.dim()));
    }
    Ok((BorelSeries { body: csv.series, offset, order }, csv.names))
}
