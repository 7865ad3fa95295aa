//! Cyclic subgroup posets of finite groups.
//!
//! Groups are explicit Cayley tables ([`Group`]). On top of that the crate
//! provides constructors for the usual small families, the poset of cyclic
//! subgroups with its counting identities, the subgroup lattice, an
//! isomorphism tester, the classification of groups with at most five cyclic
//! subgroups, and an exhaustive small-group enumerator used to check that
//! classification.

pub mod classifier;
pub mod cli;
pub mod constructions;
pub mod group;
pub mod numtheory;
pub mod oracle;
pub mod subgroups;
pub mod tablefile;

pub use classifier::{are_isomorphic, count_cyclic, fingerprint, paper_predicate, ClassLabel, Fingerprint};
pub use constructions::{build_expr, parse_expr, GroupExpr};
pub use group::{Elem, Group, GroupError, OrderSpectrum};
pub use numtheory::euler_phi;
pub use oracle::{enumerate_groups, lemma_sweep, verify_theorem, DiffReport, EnumConfig};
pub use subgroups::{check_counting_identities, cyclic_subgroups, CyclicPoset, Subgroup};
