//! Colorings of approximations and their finite Ramsey-type reductions.

mod arn;
mod canon;
mod coloring;
mod front;
mod pigeonhole;

pub use arn::{
    admissible_vectors, ar_n, canonization_witness, canonize_arn, closure_of, induced_relation, inner_check,
    irreducible_agreement, irreducible_check, Agreement, ArnCanon, InnerMap, NodeImage, ProjVector,
};
pub use canon::{candidate_levels, canonize_1ext, CanonicalRelation, Canonized};
pub use coloring::{Coloring, Relation};
pub use front::{front_cover_check, nash_williams_check, Cover, FrontFamily};
pub use pigeonhole::{extension_colors, pigeonhole, Homogeneous, Route};
