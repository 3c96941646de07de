pub mod bundle;
pub mod construct;
pub mod core3lie;
pub mod corpus;
pub mod exactq;
pub mod repmod;
pub mod report;
pub mod rinehart;
pub mod split;
pub mod suite;
pub mod symfun;
