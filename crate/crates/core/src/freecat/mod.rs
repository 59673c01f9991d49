//! The free Q-category on a net: process terms, their layered normal forms,
//! equality modulo the category/monoidal/theory axioms, and the semantics
//! built on top (hom-sets, reachability, the ℤ-net lattice test).

mod equality;
mod lattice;
mod layered;
mod moves;
mod steps;
mod term;
mod underlying;

pub use equality::{default_budget, forms_equal, greedy_canonical, mor_equal, rewrite_class, EqVerdict, DEFAULT_BUDGET};
pub use lattice::{echelon, hom_nonempty_group, in_lattice};
pub use layered::{layered, Layer, LayeredForm, Slot};
pub use steps::{hom_enumerate, hom_enumerate_forms, layers_from, reachable, Reachability};
pub use term::{mor_src, mor_tgt, MorTerm, Op};
pub use underlying::{objects_up_to, underlying_net, Bounds, UnderlyingNet};
