pub mod classifier;
pub mod cli;
pub mod cyclotomic;
pub mod fpgroups;
pub mod lattice;
pub mod plane_action;
pub mod surfaces;
