//! Shared fixtures for the benchmarks.

use soergel_core::soergel::Calculus;
use soergel_core::{BraidWord, CoxeterSystem};

/// A fresh calculus over a built-in preset, with empty caches.
pub fn calculus(preset: &str) -> Calculus {
    Calculus::new(CoxeterSystem::preset(preset).expect("known preset"))
}

/// Parses a braid word over the calculus' generators.
pub fn braid(calc: &Calculus, text: &str) -> BraidWord {
    calc.sys().parse_braid(text).expect("valid braid word")
}
