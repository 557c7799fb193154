// mdbook cannot run listings that depend on workspace crates, so each chapter
// is pulled in as the docs of an empty module and `cargo test --doc` runs them.

#[doc = include_str!("src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("src/exact-arithmetic.md")]
pub mod exact_arithmetic {}
#[doc = include_str!("src/billiard.md")]
pub mod billiard {}
#[doc = include_str!("src/unfolding.md")]
pub mod unfolding {}
#[doc = include_str!("src/segments.md")]
pub mod segments {}
#[doc = include_str!("src/weight-profile.md")]
pub mod weight_profile {}
#[doc = include_str!("src/verification.md")]
pub mod verification {}
#[doc = include_str!("src/sweeps.md")]
pub mod sweeps {}
#[doc = include_str!("src/cli.md")]
pub mod cli {}
