//! Homology, Reidemeister torsion, equivariant intersection forms and
//! open-book monodromy of 4-manifolds presented by multisection diagrams.

pub mod algebra;
pub mod fixtures;
pub mod format;
pub mod forms;
pub mod homology;
pub mod multisection;
pub mod open_book;
pub mod report;
pub mod surface;
pub mod torsion;
