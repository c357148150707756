//! Shared helpers for the integration and acceptance suites: an independent
//! naive Fourier-Motzkin oracle, a ground bottom-up interpreter, and seeded
//! random generators for programs and dependency graphs.

pub mod gen;
pub mod ground;
pub mod naive;

use cha::ast::Program;
use cha::frontend;
use cha::parser;

/// Parse and normalise a program the way the CLI does before analysis.
pub fn prepare(src: &str) -> Program {
    let mut p = parser::parse_program(src).expect("test program parses");
    frontend::standardise_heads(&mut p);
    frontend::normalise_calls(&mut p);
    p
}

/// Read the seed list bundled with the corpus.
pub fn corpus_seeds() -> Vec<u64> {
    let text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../corpus/seeds.txt"
    ))
    .expect("corpus/seeds.txt");
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.trim().parse().expect("seed"))
        .collect()
}

pub fn corpus_path(name: &str) -> String {
    format!("{}/../../corpus/{}", env!("CARGO_MANIFEST_DIR"), name)
}

pub fn load_corpus(name: &str) -> Program {
    let src = std::fs::read_to_string(corpus_path(name)).expect("corpus file");
    prepare(&src)
}
