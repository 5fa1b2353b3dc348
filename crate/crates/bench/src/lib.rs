//! Shared inputs for the engine benchmarks in `benches/`.

use std::path::PathBuf;

use adapt_xstate::{MolecularProblem, Result};

/// Loads a committed problem fixture by file name.
pub fn fixture(name: &str) -> Result<MolecularProblem> {
    MolecularProblem::load(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name))
}
