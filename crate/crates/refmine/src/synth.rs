//! Synthetic keyword-planted corpus for self-contained end-to-end checks.
//!
//! Every message carries its class keyword phrase plus 5-10 noise tokens
//! drawn from a pool that avoids the label vocabulary, words that stem onto
//! it, and the other classes' keywords. On such a corpus the default rule
//! table is correct by construction.

use crate::corpus::{CommitRecord, Dataset, RefactoringType};
use crate::rng::Rng;

/// Noise vocabulary: developer-flavored nouns, none of which stem onto the
/// label vocabulary (extract, inline, move, pull, push, rename, method,
/// up, down).
const NOISE_POOL: &[&str] = &[
    "parser", "buffer", "widget", "registry", "handler", "session", "cache", "config",
    "logger", "adapter", "builder", "client", "server", "worker", "queue", "schema",
    "index", "token", "module", "helper", "wrapper", "filter", "router", "mapper",
    "codec", "socket", "stream", "layout", "driver", "kernel", "plugin", "bundle",
    "target", "branch", "merge", "release", "version", "engine", "record", "field",
    "column", "table", "cursor", "batch", "thread", "mutex", "signal", "event",
    "timer", "clock", "metric", "gauge", "probe", "audit", "policy", "quota",
    "ticket", "sprint", "review", "canvas", "render", "shader", "vertex", "matrix",
    "vector", "tensor", "scalar", "packet", "header", "footer", "payload", "cipher",
];

fn keyword_phrase(class: RefactoringType) -> &'static str {
    match class {
        RefactoringType::ExtractMethod => "extract",
        RefactoringType::InlineMethod => "inline",
        RefactoringType::MoveMethod => "move",
        RefactoringType::PullUpMethod => "pull up",
        RefactoringType::PushDownMethod => "push down",
        RefactoringType::RenameMethod => "rename",
    }
}

/// Generate `per_class` messages per class (default study size: 100 each,
/// 600 total). Deterministic in `seed`.
pub fn generate(per_class: usize, seed: u64) -> Dataset {
    let mut rng = Rng::new(seed);
    let mut records = Vec::with_capacity(per_class * RefactoringType::ALL.len());
    for class in RefactoringType::ALL {
        for i in 0..per_class {
            let noise_count = 5 + rng.below(6) as usize;
            let mut message = format!("{} method", keyword_phrase(class));
            for _ in 0..noise_count {
                message.push(' ');
                message.push_str(NOISE_POOL[rng.below(NOISE_POOL.len() as u64) as usize]);
            }
            records.push(CommitRecord {
                id: format!("{}-{i:04}", class.as_str()),
                message,
                label: class,
            });
        }
    }
    Dataset::new(records, "synth").expect("generated ids are unique")
}
