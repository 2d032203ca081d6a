//! Shared fixtures for the benchmarks.

use shtop_core::workbench::{GenMode, Generator, GeneratorConfig};
use shtop_core::{catalog, SimplicialComplex};

/// Named inputs, roughly in order of size.
pub fn fixtures() -> Vec<(&'static str, SimplicialComplex)> {
    vec![
        ("omf", catalog::octahedron_minus_facet()),
        ("cross4", catalog::cross_polytope(4)),
        ("collapsible-evasive", catalog::collapsible_evasive()),
        ("dunce-hat", catalog::dunce_hat()),
    ]
}

/// A fixed batch of grown complexes with nontrivial cores.
pub fn grown(n: usize, max_vertices: usize) -> Vec<SimplicialComplex> {
    let mut g = Generator::new(GeneratorConfig::new(7, max_vertices, GenMode::GrownByDomination));
    (0..n).map(|_| g.complex()).collect()
}
