//! Coverings, germ propagation, deck groups and tree-decomposition extension.

mod covering;
mod germ;
mod probe;
mod tree;

pub use covering::{deck_quotient, verify_covering, verify_covering_on, CoveringMap, CoveringViolation, DeckQuotient};
pub use germ::{
    PartialMap,
    extension_radius, extension_radius_at, germ_set, isometries_between, propagate_covering, transport_germ, Germ, PropagationOutcome, PropagationParams,
    Propagation,
};
pub use probe::{residual_finiteness_probe, ProbeReport};
pub use tree::{extend_cover_along_tree, validate_tree_decomposition, TreeDecomposition, TreeExtension};
