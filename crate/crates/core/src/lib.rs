//! Diagram spaces for finite type link homotopy invariants: unitrivalent and
//! chord diagrams, their relations, exact quotient dimensions, and linking
//! numbers of link presentations.

pub mod bounded;
pub mod chord;
pub mod diagram;
pub mod enumerate;
pub mod hopf;
pub mod lincomb;
pub mod linkio;
pub mod qlinalg;
pub mod relators;
pub mod spaces;

pub use bounded::BoundedDiagram;
pub use chord::{ChordDiagram, LongChordDiagram};
pub use diagram::{canonicalize, Color, Diagram, DiagramBuilder, DiagramError, Key, SignedKey};
pub use enumerate::{enum_bounded, enum_forests, SpaceId};
pub use lincomb::{LinComb, Q};
pub use linkio::{linking_matrix, parse_gauss, parse_pd, GaussLink, LinkingMatrix};
pub use qlinalg::{Echelon, MembershipCertificate, SparseRationalMatrix};
pub use relators::Relator;
pub use spaces::{dim_space, Budget, Space, SpaceReport};
