pub mod padic;
pub mod unramified;
pub mod chars;
pub mod cyclotomic;
pub mod iwasawa;
pub mod kl;
pub mod quad;
pub mod stickelberger;
pub mod euler;
pub mod leading;
pub mod regions;
pub mod verify;
pub mod cli;
