//! Report rendering: canonical JSON (fixed key order via struct fields,
//! floats always printed with six decimals) plus aligned text tables and
//! CSV. Canonical JSON output is byte-stable for identical inputs.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter, Serializer};

use crate::corpus::RefactoringType;
use crate::eval::{ComparisonTable, EvaluationReport};

/// `REFMINE_NO_COLOR` disables ANSI styling in text tables.
pub const NO_COLOR_ENV: &str = "REFMINE_NO_COLOR";

struct FixedDecimals;

impl Formatter for FixedDecimals {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        debug_assert!(value.is_finite(), "reports never contain non-finite floats");
        write!(writer, "{value:.6}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{value:.6}")
    }
}

/// Serialize with six-decimal floats, compact layout, trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut serializer = Serializer::with_formatter(&mut out, FixedDecimals);
    value.serialize(&mut serializer).expect("report types serialize infallibly");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json emits utf-8")
}

/// Standard serde_json output (full float precision), trailing newline.
/// Used where exact f64 round-trips matter, e.g. prediction lines.
pub fn to_precise_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut serializer = Serializer::with_formatter(&mut out, CompactFormatter);
    value.serialize(&mut serializer).expect("types serialize infallibly");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json emits utf-8")
}

fn bold(s: &str) -> String {
    if std::env::var_os(NO_COLOR_ENV).is_some() {
        s.to_string()
    } else {
        format!("\x1b[1m{s}\x1b[0m")
    }
}

fn short_class(class: RefactoringType) -> &'static str {
    match class {
        RefactoringType::ExtractMethod => "extract",
        RefactoringType::InlineMethod => "inline",
        RefactoringType::MoveMethod => "move",
        RefactoringType::PullUpMethod => "pull_up",
        RefactoringType::PushDownMethod => "push_down",
        RefactoringType::RenameMethod => "rename",
    }
}

/// Aligned per-class metric table plus the aggregate confusion matrix.
pub fn report_to_text(report: &EvaluationReport) -> String {
    let mut out = String::new();
    out.push_str(&bold(&format!(
        "model {}  (k={}, seed={}, dataset {})\n",
        report.model, report.k, report.seed, report.dataset_fingerprint
    )));
    out.push_str(&format!(
        "accuracy {:.4}   macro-F1 {:.4}   weighted-F1 {:.4}   abstentions {}\n\n",
        report.accuracy, report.macro_avg.f1, report.weighted_avg.f1, report.abstentions
    ));

    out.push_str(&format!(
        "{:<12} {:>9} {:>9} {:>9} {:>9}\n",
        "class", "precision", "recall", "f1", "support"
    ));
    for entry in &report.per_class {
        out.push_str(&format!(
            "{:<12} {:>9.4} {:>9.4} {:>9.4} {:>9}\n",
            short_class(entry.class),
            entry.precision,
            entry.recall,
            entry.f1,
            entry.support
        ));
    }

    out.push_str("\nconfusion (rows = truth, cols = predicted):\n");
    out.push_str(&format!("{:<12}", ""));
    for class in RefactoringType::ALL {
        out.push_str(&format!("{:>10}", short_class(class)));
    }
    out.push_str(&format!("{:>10}\n", "abstain"));
    for truth in RefactoringType::ALL {
        out.push_str(&format!("{:<12}", short_class(truth)));
        for predicted in RefactoringType::ALL {
            out.push_str(&format!("{:>10}", report.aggregate_confusion.get(truth, predicted)));
        }
        out.push_str(&format!("{:>10}\n", report.aggregate_confusion.abstains_for(truth)));
    }
    out
}

/// Aligned comparison table with the per-class difficulty ranking.
pub fn comparison_to_text(table: &ComparisonTable) -> String {
    let mut out = String::new();
    out.push_str(&bold(&format!(
        "comparison  (k={}, seed={}, dataset {})\n",
        table.k, table.seed, table.dataset_fingerprint
    )));
    out.push_str(&format!("{:<18} {:>9} {:>9}", "model", "accuracy", "macro_f1"));
    for class in RefactoringType::ALL {
        out.push_str(&format!(" {:>10}", short_class(class)));
    }
    out.push('\n');
    for row in &table.models {
        out.push_str(&format!("{:<18} {:>9.4} {:>9.4}", row.model, row.accuracy, row.macro_f1));
        for f1 in &row.per_class_f1 {
            out.push_str(&format!(" {:>10.4}", f1));
        }
        out.push('\n');
    }
    out.push_str("\nper-class difficulty (easiest first, by mean F1 across models):\n");
    for (rank, entry) in table.difficulty.iter().enumerate() {
        out.push_str(&format!(
            "{:>2}. {:<12} mean F1 {:.4}\n",
            rank + 1,
            short_class(entry.class),
            entry.mean_f1
        ));
    }
    out
}

/// CSV export of per-model accuracy, macro-F1, and per-class F1.
pub fn comparison_to_csv(table: &ComparisonTable) -> String {
    let mut out = String::from("model,accuracy,macro_f1");
    for class in RefactoringType::ALL {
        out.push_str(&format!(",f1_{}", class.as_str()));
    }
    out.push('\n');
    for row in &table.models {
        out.push_str(&format!("{},{:.6},{:.6}", row.model, row.accuracy, row.macro_f1));
        for f1 in &row.per_class_f1 {
            out.push_str(&format!(",{f1:.6}"));
        }
        out.push('\n');
    }
    out
}
