pub mod angle;
pub mod dsu;
pub mod lamination;
pub mod hypgeom;
pub mod poly;
pub mod treedyn;
pub mod treesphere;
pub mod blaschke;
pub mod mating;
pub mod svg;
pub mod cli;
