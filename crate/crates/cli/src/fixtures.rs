//! Bundled module files, transcribed from module diagrams.

use cjt_core::KEModule;

use crate::format::ModuleFile;

pub const MAINEXAMPLE: &str = include_str!("../fixtures/mainexample.json");
pub const SIXTEEN: &str = include_str!("../fixtures/sixteen.json");

fn load(text: &str) -> KEModule {
    ModuleFile::parse(text).and_then(|f| f.to_module()).expect("bundled fixture is a valid module")
}

/// Seven-dimensional module with `F_1 = O(-1) ⊕ O(-1)` (p = 3).
pub fn mainexample() -> KEModule {
    load(MAINEXAMPLE)
}

/// Sixteen-dimensional module of Loewy length three (p = 3).
pub fn sixteen() -> KEModule {
    load(SIXTEEN)
}

pub fn all() -> Vec<(&'static str, KEModule)> {
    vec![("mainexample", mainexample()), ("sixteen", sixteen())]
}

pub fn by_name(name: &str) -> Option<KEModule> {
    all().into_iter().find(|(n, _)| *n == name).map(|(_, m)| m)
}
