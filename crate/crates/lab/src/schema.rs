//! JSON schemas for every report type and for the input documents.

use std::path::Path;

use anyhow::Context;
use schemars::schema::RootSchema;
use schemars::{schema_for, JsonSchema};

use crate::cli::*;
use crate::commands::*;
use crate::dto::{PairDto, SearchDto, SymbolDto};
use crate::report::ReportDoc;

fn report<C: JsonSchema, R: JsonSchema>() -> RootSchema {
    schema_for!(ReportDoc<C, R>)
}

/// `(file stem, schema)` for every shipped schema.
pub fn all() -> Vec<(&'static str, RootSchema)> {
    vec![
        ("verify-ando", report::<VerifyAndoArgs, VerifyAndoResults>()),
        ("estimate-constant", report::<EstimateConstantArgs, EstimateConstantResults>()),
        ("bks", report::<BksArgs, BksResults>()),
        ("multiplier-bound", report::<MultiplierBoundArgs, MultiplierBoundResults>()),
        ("factorize", report::<FactorizeArgs, FactorizeResults>()),
        ("kernel-spectrum", report::<KernelSpectrumArgs, KernelSpectrumResults>()),
        ("kfunctional", report::<KfunctionalArgs, KfunctionalResults>()),
        ("weak-lp", report::<WeakLpArgs, WeakLpResults>()),
        ("commutator", report::<CommutatorArgs, CommutatorResults>()),
        ("mazur", report::<MazurArgs, MazurResults>()),
        ("search-checkpoint", schema_for!(SearchDto)),
        ("pair", schema_for!(PairDto)),
        ("symbol", schema_for!(SymbolDto)),
    ]
}

pub fn render(schema: &RootSchema) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(schema)?;
    s.push('\n');
    Ok(s)
}

pub fn write_all(dir: &Path) -> anyhow::Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    for (name, schema) in all() {
        let path = dir.join(format!("{name}.schema.json"));
        std::fs::write(&path, render(&schema)?).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(())
}
