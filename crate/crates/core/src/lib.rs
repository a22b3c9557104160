//! Multi-agent path finding on grids with movable obstacles.
//!
//! Task agents travel from a start to a goal; mover agents may walk under
//! obstacles, pick up their assigned movable obstacle and carry it out of
//! the way, as long as every obstacle is back on its start cell at the end.
//! The crate provides CBS and PBS for plain MAPF, their terraforming
//! variants TF-CBS and TF-PBS, an independent solution certifier, a
//! brute-force optimal oracle for tiny instances, file formats, a warehouse
//! scenario generator and a benchmark runner.

pub mod bench;
pub mod grid;
pub mod io;
pub mod lowlevel;
pub mod model;
pub mod oracle;
pub mod solver;
