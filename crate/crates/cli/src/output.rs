//! CSV output. Floats are written in shortest round-trip form, so parsing a
//! cell recovers the exact value.

use std::io::Write;
use std::path::Path;

use crate::sweep::Row;
use crate::CliError;

pub const HEADER: [&str; 9] = [
    "sweep_param",
    "sweep_value",
    "p_msuc_analytic",
    "p_psuc_analytic",
    "p_c_analytic",
    "p_c_mc",
    "mc_stderr",
    "n_trials",
    "macro_fraction_mc",
];

fn cell<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn record(row: &Row) -> [String; 9] {
    let a = row.analytic.as_ref();
    let m = row.mc.as_ref();
    [
        row.sweep_param.clone(),
        cell(row.sweep_value),
        cell(a.map(|a| a.p_msuc)),
        cell(a.map(|a| a.p_psuc)),
        cell(a.map(|a| a.p_c)),
        cell(m.map(|m| m.p_c_hat)),
        cell(m.map(|m| m.stderr)),
        cell(m.map(|m| m.n_trials)),
        cell(m.map(|m| m.macro_fraction)),
    ]
}

pub fn write_csv<W: Write>(rows: &[Row], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for row in rows {
        w.write_record(record(row))?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_csv_string(rows: &[Row]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv output is utf-8")
}

pub fn emit_csv(rows: &[Row], path: &Path) -> Result<(), CliError> {
    let file = std::fs::File::create(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    write_csv(rows, std::io::BufWriter::new(file)).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        source: e.into(),
    })
}
