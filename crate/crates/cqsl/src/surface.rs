//! CSV tables: header row, comma delimiter, LF line endings.

use cqsl_core::optimize::SurfaceTable;

use crate::verify::VerificationReport;

fn writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    let bytes = w.into_inner().expect("writing to memory cannot fail");
    String::from_utf8(bytes).expect("csv output is UTF-8")
}

/// Columns are the two axis names followed by `value`.
pub fn surface_csv(table: &SurfaceTable) -> String {
    let mut w = writer();
    w.write_record([table.axis_names[0].as_str(), table.axis_names[1].as_str(), "value"])
        .expect("in-memory write");
    for row in &table.rows {
        w.write_record(row.iter().map(|v| v.to_string())).expect("in-memory write");
    }
    finish(w)
}

pub fn trials_csv(report: &VerificationReport) -> String {
    let mut w = writer();
    w.write_record(["index", "inputs_digest", "bound", "sampled", "margin", "ok"])
        .expect("in-memory write");
    for t in &report.trials {
        w.write_record([
            t.index.to_string(),
            t.inputs_digest.clone(),
            t.bound.to_string(),
            t.sampled.to_string(),
            t.margin.to_string(),
            t.ok.to_string(),
        ])
        .expect("in-memory write");
    }
    finish(w)
}
