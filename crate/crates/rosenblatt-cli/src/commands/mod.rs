pub mod examples;
pub mod selftest;
pub mod simulate;
pub mod verify;
