//! Set systems, pointed membership graphs, bisimulation and normal forms.

mod bisim;
mod graph;
mod random;
mod set_system;

pub(crate) use bisim::grounded_order;

pub use bisim::{
    coarsest_bisimulation, hfset_to_system, is_normal, is_well_founded, normalize,
    well_founded_solution, well_founded_unknowns, Membership, Partition,
};
pub use graph::{graph_to_system, PointedGraph};
pub use random::{random_normal_system, random_system};
pub use set_system::SetSystem;
