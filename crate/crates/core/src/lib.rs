pub mod certificate;
pub mod degeneration;
pub mod group;
pub mod odd_covers;
pub mod perm;
pub mod tuple;
pub mod util;
