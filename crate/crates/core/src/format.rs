//! Text output: six-significant-digit numbers, LF line endings, fixed column
//! order. Identical inputs give byte-identical output.

use std::io::Write;

use crate::access::AccessRow;
use crate::error::{Error, Result};
use crate::scenario::SweepPoint;
use crate::trend::{FitResult, TrendSample};
use crate::units::to_nj;

/// Formats like C's `%.6g`: six significant digits, trailing zeros dropped,
/// exponent form outside `1e-4 <= |x| < 1e6`.
pub fn g6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa.to_string()), exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub const SWEEP_HEADER: [&str; 13] = [
    "scenario", "n_ru", "n_du", "n_cu", "e_w", "e_e", "e_pr", "e_eq", "e_fh", "e_mh", "e_bh", "e_tr", "e_total",
];

fn writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io("writing CSV", io),
        other => Error::io("writing CSV", std::io::Error::other(format!("{other:?}"))),
    }
}

/// Sweep table in nJ/bit, one row per `(n_ru, scenario)`.
pub fn write_sweep_csv<W: Write>(points: &[SweepPoint], out: W) -> Result<()> {
    let mut w = writer(out);
    w.write_record(SWEEP_HEADER).map_err(csv_err)?;
    for p in points {
        for (s, b) in &p.breakdowns {
            let nj = [
                b.e_w,
                b.e_e,
                b.e_pr,
                b.e_eq(),
                b.e_fh,
                b.e_mh,
                b.e_bh,
                b.e_tr,
                b.e_total,
            ];
            let mut row = vec![
                s.as_str().to_string(),
                p.n_ru.to_string(),
                p.n_du.to_string(),
                p.n_cu.to_string(),
            ];
            row.extend(nj.iter().map(|&v| g6(to_nj(v))));
            w.write_record(&row).map_err(csv_err)?;
        }
    }
    w.flush().map_err(|e| Error::io("writing CSV", e))
}

pub fn sweep_csv_string(points: &[SweepPoint]) -> Result<String> {
    let mut buf = Vec::new();
    write_sweep_csv(points, &mut buf)?;
    Ok(String::from_utf8(buf).expect("CSV is UTF-8"))
}

pub fn write_access_csv<W: Write>(rows: &[AccessRow], out: W) -> Result<()> {
    let mut w = writer(out);
    w.write_record(["tech", "r_u_bps", "e_u_nj_per_bit"]).map_err(csv_err)?;
    for r in rows {
        w.write_record([r.tech.clone(), g6(r.r_u), g6(to_nj(r.energy_per_bit))])
            .map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::io("writing CSV", e))
}

pub fn write_fit_csv<W: Write>(fit: &FitResult, out: W) -> Result<()> {
    let mut w = writer(out);
    w.write_record(["e0", "mu", "r_squared"]).map_err(csv_err)?;
    w.write_record([g6(fit.params.e0), g6(fit.params.mu), g6(fit.r_squared)])
        .map_err(csv_err)?;
    w.flush().map_err(|e| Error::io("writing CSV", e))
}

pub fn write_series_csv<W: Write>(series: &[TrendSample], out: W) -> Result<()> {
    let mut w = writer(out);
    w.write_record(["year", "value"]).map_err(csv_err)?;
    for s in series {
        w.write_record([g6(s.year), g6(s.value)]).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::io("writing CSV", e))
}

/// Reads `year,value` rows. A header line is optional.
pub fn read_series_csv(source: &str) -> Result<Vec<TrendSample>> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(source.as_bytes());
    let mut out = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| Error::schema(format!("line {}", i + 1), e.to_string()))?;
        if rec.len() != 2 {
            return Err(Error::schema(
                format!("line {}", i + 1),
                format!("expected `year,value`, got {} fields", rec.len()),
            ));
        }
        let parse = |s: &str| s.parse::<f64>();
        match (parse(&rec[0]), parse(&rec[1])) {
            (Ok(year), Ok(value)) => out.push(TrendSample { year, value }),
            _ if i == 0 => continue,
            _ => {
                return Err(Error::schema(
                    format!("line {}", i + 1),
                    format!("not a number pair: `{},{}`", &rec[0], &rec[1]),
                ))
            }
        }
    }
    Ok(out)
}
